use std::collections::BTreeSet;
use std::sync::OnceLock;

use proptest::prelude::*;

use cutgen::analysis::{
    generate_covered_intervals, generate_maximal_additive_faces, minimality_test, subadditivity_test, symmetry_test,
};
use cutgen::compendium::{gmic, random_piecewise_function};
use cutgen::deltap::{delta_pi, enumerate_faces, faces_containing_vertex, vertices_of_complex};
use cutgen::json::{function_from_json, function_to_json};
use cutgen::scalar::Scalar;
use cutgen::{LimitTriple, PiecewiseFunction, Rational, Side, Signed, Zero};

fn q(n: i64, d: i64) -> Rational {
    Rational::ratio(n, d)
}

/// Breakpoints on a `1/n` grid, values and limits on a `1/4` grid.
fn function_strategy(allow_jumps: bool) -> impl Strategy<Value = PiecewiseFunction> {
    (1i64..=6)
        .prop_flat_map(move |n| {
            let inner = proptest::collection::vec(any::<bool>(), (n - 1) as usize);
            let limits = proptest::collection::vec((0i64..=4, 0i64..=4, 0i64..=4, any::<bool>()), n as usize);
            (Just(n), inner, limits)
        })
        .prop_map(move |(n, keep, limits)| {
            let mut bk = vec![0i64];
            bk.extend((1..n).filter(|&k| keep[(k - 1) as usize]));
            let mut triples: Vec<LimitTriple<Rational>> = bk
                .iter()
                .map(|&k| {
                    let (v, r, l, jump) = limits[k as usize];
                    if allow_jumps && jump {
                        LimitTriple::new(q(v, 4), q(r, 4), q(l, 4))
                    } else {
                        LimitTriple::constant(q(v, 4))
                    }
                })
                .collect();
            let first = triples[0].clone();
            let last_left = triples[0].left.clone();
            triples[0] = LimitTriple::new(first.value.clone(), first.right.clone(), last_left.clone());
            triples.push(LimitTriple::new(first.value, first.right, last_left));
            let points: Vec<Rational> = bk.iter().map(|&k| q(k, n)).chain([q(1, 1)]).collect();
            PiecewiseFunction::from_breakpoints_and_limits(points, triples).unwrap()
        })
}

fn lcm_denominator(f: &PiecewiseFunction) -> i64 {
    f.end_points().iter().map(|b| b.denominator().try_into().unwrap()).fold(1i64, num_integer::lcm)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn periodic(f in function_strategy(true), num in -40i64..40, shift in -3i64..3) {
        let x = q(num, 7);
        let moved = x.clone() + q(shift, 1);
        prop_assert_eq!(f.evaluate(&x), f.evaluate(&moved));
        prop_assert_eq!(f.limits_at(&x), f.limits_at(&moved));
    }

    #[test]
    fn linear_between_breakpoints(f in function_strategy(true), t in 1i64..16) {
        let bk = f.end_points().to_vec();
        for w in bk.windows(2) {
            let (a, b) = (w[0].clone(), w[1].clone());
            let x = a.clone() + (b.clone() - a.clone()) * q(t, 16);
            let i = bk.iter().position(|p| *p == a).unwrap();
            let expected = f.one_sided(&a, Side::Right) + f.slope(i) * (x.clone() - a.clone());
            prop_assert_eq!(f.evaluate(&x), expected);
            prop_assert_eq!(f.which_function(&x).eval(&x), f.evaluate(&x));
        }
    }

    #[test]
    fn accessors_and_json_round_trip(f in function_strategy(true)) {
        let a = f.accessors();
        let rebuilt = PiecewiseFunction::from_breakpoints_and_limits(a.end_points, a.limits_at_end_points).unwrap();
        prop_assert_eq!(&rebuilt, &f);
        let via_json: PiecewiseFunction = function_from_json(&function_to_json(&f)).unwrap();
        prop_assert_eq!(via_json, f);
    }

    #[test]
    fn slack_is_symmetric(f in function_strategy(true), a in 0i64..24, b in 0i64..24) {
        let (x, y) = (q(a, 24), q(b, 24));
        prop_assert_eq!(delta_pi(&f, &x, &y), delta_pi(&f, &y, &x));
    }

    #[test]
    fn vertex_test_agrees_with_a_fine_grid(f in function_strategy(false)) {
        let m = 4 * lcm_denominator(&f);
        let grid_ok = (0..m).all(|a| (0..m).all(|b| !delta_pi(&f, &q(a, m), &q(b, m)).is_negative()));
        let (ok, witnesses) = subadditivity_test(&f);
        prop_assert_eq!(ok, grid_ok);
        let vertices: BTreeSet<_> = vertices_of_complex(&f).into_iter().collect();
        for w in witnesses {
            prop_assert!(vertices.contains(&w.vertex));
            prop_assert!(w.slack.is_negative());
        }
    }

}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn every_vertex_lies_in_a_two_face(f in function_strategy(false)) {
        for v in vertices_of_complex(&f) {
            let around = faces_containing_vertex(&f, &v).unwrap();
            prop_assert!(around.iter().any(|(face, _)| face.dimension == 2));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gmic_invariants(k in 1i64..20) {
        let f = q(k, 20);
        let g = gmic(&f).unwrap();
        prop_assert!(minimality_test(&g, None).unwrap().is_minimal);
        prop_assert!(symmetry_test(&g, &f).unwrap().0);
        let set = generate_maximal_additive_faces(&g).unwrap();
        prop_assert_eq!(set.of_dimension(2).count(), 2);
        let c = generate_covered_intervals(&g).unwrap();
        prop_assert!(c.all_covered());
    }
}

fn subadditive_samples() -> Vec<PiecewiseFunction> {
    static SAMPLES: OnceLock<Vec<PiecewiseFunction>> = OnceLock::new();
    SAMPLES.get_or_init(draw_subadditive).clone()
}

fn draw_subadditive() -> Vec<PiecewiseFunction> {
    let mut out = Vec::new();
    for seed in 0..150u64 {
        let xgrid = 3 + (seed % 4) as u32;
        let ygrid = 1 + (seed % 3) as u32;
        let proba = if seed % 2 == 0 { q(1, 1) } else { q(1, 2) };
        let f = random_piecewise_function(xgrid, ygrid, &proba, true, seed).unwrap();
        if subadditivity_test(&f).0 {
            out.push(f);
        }
    }
    out
}

#[test]
fn maximal_faces_are_closed_under_transpose() {
    let samples = subadditive_samples();
    assert!(samples.len() >= 10);
    for f in samples {
        let set = generate_maximal_additive_faces(&f).unwrap();
        let triples: BTreeSet<_> = set.faces.iter().map(|a| a.face.triple.clone()).collect();
        for t in &triples {
            assert!(triples.contains(&t.transpose()), "{t} has no transpose");
        }
    }
}

#[test]
fn covered_components_partition_the_pieces() {
    for f in subadditive_samples() {
        let c = generate_covered_intervals(&f).unwrap();
        let mut seen: Vec<(Rational, Rational)> = c
            .components
            .iter()
            .flat_map(|k| k.intervals.iter().map(|i| (i.lo.clone(), i.hi.clone())))
            .collect();
        seen.sort();
        let pieces: Vec<(Rational, Rational)> =
            f.end_points().windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
        assert_eq!(seen, pieces);
        for k in &c.components {
            assert!(!k.intervals.is_empty());
            assert_eq!(k.directly_covered, k.intervals.iter().any(|i| i.directly_covered));
        }
    }
}

#[test]
fn random_functions_have_declared_shape() {
    for seed in 0..60u64 {
        let (xgrid, ygrid) = (2 + (seed % 5) as u32, 1 + (seed % 4) as u32);
        let symmetric = seed % 3 == 0;
        let f = random_piecewise_function(xgrid, ygrid, &q(1, 3), symmetric, seed).unwrap();
        let again = random_piecewise_function(xgrid, ygrid, &q(1, 3), symmetric, seed).unwrap();
        assert_eq!(f, again);
        assert!(f.evaluate(&q(0, 1)).is_zero());
        for b in f.end_points() {
            assert!((b.clone() * q(xgrid as i64, 1)).denominator() == 1.into());
            let l = f.limits_at(b);
            for v in [&l.value, &l.right, &l.left] {
                let scaled = v.clone() * q(ygrid as i64, 1);
                assert!(*v >= q(0, 1) && *v <= q(1, 1));
                assert!(scaled.denominator() == 1.into() || (symmetric && *v == q(1, 2)));
            }
        }
        if symmetric {
            let f0 = f.declared_f().cloned().unwrap();
            assert!(symmetry_test(&f, &f0).unwrap().0);
        }
        let continuous = random_piecewise_function(xgrid, ygrid, &q(1, 1), symmetric, seed).unwrap();
        assert!(continuous.is_continuous());
    }
}

#[test]
fn faces_are_listed_once() {
    for f in subadditive_samples().into_iter().take(8) {
        let faces = enumerate_faces(&f);
        let distinct: BTreeSet<_> = faces.iter().map(|x| x.triple.clone()).collect();
        assert_eq!(distinct.len(), faces.len());
    }
}
