//! Acceptance suite. Each criterion prints one `PASS` or `FAIL` line and then
//! asserts, so `cargo test --test acceptance -- --nocapture` doubles as a report.
//!
//! Tolerances: every comparison is exact rational equality. Runtime budgets
//! are wall-clock limits measured inside the test.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use cutgen::analysis::{
    extremality_test, generate_covered_intervals, generate_maximal_additive_faces, minimality_test,
    subadditivity_test, Violation,
};
use cutgen::compendium::{self, demo_not_extreme, gmic, not_minimal_2, random_piecewise_function, two_sided_discont_demo};
use cutgen::deltap::{approach_sides, basic_solutions, delta_pi, delta_pi_limit, face_from_triple, Point};
use cutgen::json::{function_from_json, function_to_json};
use cutgen::render::{plot_2d_diagram, plot_2d_diagram_with_cones, DiagramMode, DiagramSpec};
use cutgen::scalar::Scalar;
use cutgen::{IntervalOrPoint, LimitTriple, PiecewiseFunction, Rational, Side, Signed, Triple, Zero};

const FACE_BUDGET: Duration = Duration::from_millis(1);
const GMIC_BUDGET: Duration = Duration::from_secs(5);
const CERTIFICATE_BUDGET: Duration = Duration::from_secs(60);

fn q(n: i64, d: i64) -> Rational {
    Rational::ratio(n, d)
}

fn iv(lo: Rational, hi: Rational) -> IntervalOrPoint {
    IntervalOrPoint::new(lo, hi)
}

fn pt(x: Rational) -> IntervalOrPoint {
    IntervalOrPoint::point(x)
}

fn report(line: String) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

fn check(id: u32, title: &str, outcome: Result<String, String>) {
    match outcome {
        Ok(detail) => report(format!("PASS criterion {id}: {title} ({detail})")),
        Err(why) => {
            report(format!("FAIL criterion {id}: {title} ({why})"));
            panic!("criterion {id} failed: {why}");
        }
    }
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

#[test]
fn criterion_1_face_reproduction() {
    let outcome = (|| {
        let (i, j, k) = (iv(q(1, 5), q(3, 10)), iv(q(3, 4), q(17, 20)), iv(q(1, 1), q(6, 5)));
        let face = face_from_triple(i.clone(), j.clone(), k.clone()).ok_or("face is empty")?;
        let mut fastest = Duration::MAX;
        for _ in 0..5 {
            let start = Instant::now();
            let again = face_from_triple(i.clone(), j.clone(), k.clone());
            fastest = fastest.min(start.elapsed());
            ensure!(again.as_ref() == Some(&face), "construction is not deterministic");
        }
        let expected: BTreeSet<Point<Rational>> = [
            (q(1, 5), q(17, 20)),
            (q(3, 10), q(3, 4)),
            (q(3, 10), q(17, 20)),
            (q(1, 5), q(4, 5)),
            (q(1, 4), q(3, 4)),
        ]
        .into_iter()
        .collect();
        let got: BTreeSet<_> = face.vertices.iter().cloned().collect();
        ensure!(got == expected && face.vertices.len() == 5, "vertices {:?}", face.vertices);

        let rejected: BTreeSet<Point<Rational>> = basic_solutions(&Triple::new(i, j, k.clone()))
            .into_iter()
            .filter(|(_, feasible)| !feasible)
            .map(|(p, _)| p)
            .collect();
        let caption: BTreeSet<Point<Rational>> = [
            (q(1, 5), q(3, 4)),
            (q(1, 5), q(1, 1)),
            (q(3, 10), q(9, 10)),
            (q(7, 20), q(17, 20)),
            (q(9, 20), q(3, 4)),
        ]
        .into_iter()
        .collect();
        // Outside the plotted window, so absent from the figure's red points.
        let off_window: BTreeSet<Point<Rational>> = [(q(3, 10), q(7, 10)), (q(3, 20), q(17, 20))].into_iter().collect();
        ensure!(caption.is_subset(&rejected), "a listed basic solution was accepted");
        let extra: BTreeSet<_> = rejected.difference(&caption).cloned().collect();
        ensure!(extra == off_window, "unexpected rejections {extra:?}");

        let p = &face.projections;
        ensure!(p.i == iv(q(1, 5), q(3, 10)), "I' = {}", p.i);
        ensure!(p.j == iv(q(3, 4), q(17, 20)), "J' = {}", p.j);
        ensure!(p.k == iv(q(1, 1), q(23, 20)), "K' = {}", p.k);
        ensure!(k.contains_interval(&p.k) && p.k != k, "K' not strictly inside K");
        ensure!(fastest < FACE_BUDGET, "took {fastest:?}");
        Ok(format!(
            "5 vertices, {} basic solutions rejected (5 listed + {} outside the window), K' = {}, {fastest:?}",
            rejected.len(),
            off_window.len(),
            p.k
        ))
    })();
    check(1, "face F([1/5,3/10],[3/4,17/20],[1,6/5])", outcome);
}

#[test]
fn criterion_2_not_minimal_slack() {
    let outcome = (|| {
        let h = not_minimal_2::<Rational>();
        let green = delta_pi(&h, &q(1, 5), &q(3, 5));
        ensure!(green.is_zero(), "Δπ(1/5,3/5) = {green}");
        let report = minimality_test(&h, None).map_err(|e| e.to_string())?;
        ensure!(!report.is_minimal, "reported minimal");
        let witness = report.violations.iter().find_map(|v| match v {
            Violation::Subadditivity(s) if s.vertex == (q(1, 5), q(1, 5)) => Some(s.slack.clone()),
            _ => None,
        });
        ensure!(witness == Some(q(-1, 10)), "witness at (1/5,1/5): {witness:?}");
        Ok(format!("Δπ(1/5,3/5) = 0, {} violations incl. Δπ(1/5,1/5) = -1/10", report.violations.len()))
    })();
    check(2, "not_minimal_2 vertex signs", outcome);
}

fn one_sided_jump_fixture() -> PiecewiseFunction {
    PiecewiseFunction::from_breakpoints_and_limits(
        vec![q(0, 1), q(1, 5), q(2, 5), q(4, 5), q(1, 1)],
        vec![
            LimitTriple::constant(q(0, 1)),
            LimitTriple::constant(q(1, 1)),
            LimitTriple::constant(q(0, 1)),
            LimitTriple::new(q(3, 5), q(1, 1), q(1, 2)),
            LimitTriple::constant(q(0, 1)),
        ],
    )
    .expect("valid fixture")
}

#[test]
fn criterion_3_limit_slack() {
    let outcome = (|| {
        let h = one_sided_jump_fixture();
        ensure!(h.one_sided(&q(2, 5), Side::Left) == q(0, 1), "π(2/5⁻)");
        ensure!(h.one_sided(&q(4, 5), Side::Right) == q(1, 1), "π(4/5⁺)");
        ensure!(h.one_sided(&q(1, 5), Side::Left) == q(1, 1), "π(1/5⁻)");
        ensure!(h.evaluate(&q(4, 5)) == q(3, 5), "π(4/5)");
        let v = (q(2, 5), q(4, 5));
        let two_face = face_from_triple(iv(q(1, 5), q(2, 5)), iv(q(4, 5), q(1, 1)), iv(q(1, 1), q(6, 5))).ok_or("empty 2-face")?;
        let edge = face_from_triple(iv(q(1, 5), q(2, 5)), pt(q(4, 5)), iv(q(1, 1), q(6, 5))).ok_or("empty edge")?;
        ensure!(two_face.dimension == 2 && edge.dimension == 1, "dimensions");
        let a = delta_pi_limit(&h, &two_face, &v).map_err(|e| e.to_string())?;
        let b = delta_pi_limit(&h, &edge, &v).map_err(|e| e.to_string())?;
        ensure!(a.is_zero(), "2-face limit {a}");
        ensure!(b == q(-2, 5), "edge limit {b}");
        Ok("Δπ_F = 0 on the 2-face, -2/5 on the edge".into())
    })();
    check(3, "limits at (2/5,4/5)", outcome);
}

#[test]
fn criterion_4_gmic_pipeline() {
    let outcome = (|| {
        let start = Instant::now();
        let g = gmic(&q(4, 5)).map_err(|e| e.to_string())?;
        ensure!(minimality_test(&g, None).map_err(|e| e.to_string())?.is_minimal, "not minimal");
        let faces = generate_maximal_additive_faces(&g).map_err(|e| e.to_string())?;
        ensure!(faces.faces.len() == 4, "{} maximal additive faces", faces.faces.len());
        let covered = generate_covered_intervals(&g).map_err(|e| e.to_string())?;
        ensure!(covered.components.len() == 2 && covered.all_covered(), "covered components {:?}", covered.components);
        let report = extremality_test(&g, 4).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        ensure!(report.grid_denominator == 20, "grid 1/{}", report.grid_denominator);
        ensure!(report.is_extreme && report.perturbation_space_dimension == 0, "dimension {}", report.perturbation_space_dimension);
        ensure!(elapsed < GMIC_BUDGET, "took {elapsed:?}");
        Ok(format!("minimal, 4 faces, 2 covered components, extreme on 1/20, {elapsed:?}"))
    })();
    check(4, "gmic(4/5) pipeline", outcome);
}

fn certificate_holds(pi: &PiecewiseFunction, refinement: u32) -> Result<(u64, Rational), String> {
    let report = extremality_test(pi, refinement).map_err(|e| e.to_string())?;
    ensure!(!report.is_extreme, "reported extreme on 1/{}", report.grid_denominator);
    let cert = report.certificate.as_ref().ok_or("no certificate")?;
    let pbar = &cert.perturbation;
    ensure!(!pbar.is_zero_function(), "zero perturbation");
    let f = q(4, 5);
    for sign in [1, -1] {
        let eps = cert.epsilon.clone() * Rational::from_int(sign);
        let moved = pi.add_scaled(pbar, &eps).map_err(|e| e.to_string())?;
        ensure!(minimality_test(&moved, Some(&f)).map_err(|e| e.to_string())?.is_minimal, "π {} επ̄ not minimal", if sign > 0 { "+" } else { "-" });
    }
    let at = |x: Rational| pbar.evaluate(&x);
    ensure!(at(q(1, 5)) == -at(q(3, 5)) && !at(q(1, 5)).is_zero(), "π̄(1/5) = {}, π̄(3/5) = {}", at(q(1, 5)), at(q(3, 5)));
    ensure!([q(0, 1), q(2, 5), q(4, 5)].into_iter().all(|x| at(x).is_zero()), "π̄ nonzero at 0, 2/5 or 4/5");
    Ok((report.grid_denominator, cert.epsilon.clone()))
}

#[test]
fn criterion_5_non_extreme_certificate() {
    let outcome = (|| {
        let pi = demo_not_extreme::<Rational>();
        ensure!(minimality_test(&pi, None).map_err(|e| e.to_string())?.is_minimal, "not minimal");
        let (grid, eps) = certificate_holds(&pi, 4)?;
        ensure!(grid == 20, "default grid 1/{grid}");
        let start = Instant::now();
        let (fine, fine_eps) = certificate_holds(&pi, 32)?;
        let elapsed = start.elapsed();
        ensure!(fine == 160, "fine grid 1/{fine}");
        ensure!(elapsed < CERTIFICATE_BUDGET, "grid 1/160 took {elapsed:?}");
        Ok(format!("certificate on 1/20 with ε = {eps}, on 1/160 with ε = {fine_eps} in {elapsed:?}"))
    })();
    check(5, "demo_not_extreme certificate", outcome);
}

fn brute_force_continuous(pi: &PiecewiseFunction, m: i64) -> bool {
    (0..m).all(|a| (0..m).all(|b| !delta_pi(pi, &q(a, m), &q(b, m)).is_negative()))
}

fn side_of(d: i64) -> Side {
    match d.signum() {
        1 => Side::Right,
        -1 => Side::Left,
        _ => Side::Value,
    }
}

/// Negative limits of Δπ at grid vertices, found by sampling Δπ at two small
/// offsets along each direction and extrapolating the affine restriction to 0.
fn brute_force_negative_limits(pi: &PiecewiseFunction, n: i64) -> BTreeSet<(Point<Rational>, [Side; 3], Rational)> {
    let mut out = BTreeSet::new();
    let (d1, d2) = (q(1, 1000), q(1, 2000));
    for a in 0..n {
        for b in 0..n {
            let (x, y) = (q(a, n), q(b, n));
            for dx in -2i64..=2 {
                for dy in -2i64..=2 {
                    let sample = |d: &Rational| {
                        let px = x.clone() + d.clone() * Rational::from_int(dx);
                        let py = y.clone() + d.clone() * Rational::from_int(dy);
                        delta_pi(pi, &px, &py)
                    };
                    let limit = if dx == 0 && dy == 0 {
                        delta_pi(pi, &x, &y)
                    } else {
                        sample(&d2) * Rational::from_int(2) - sample(&d1)
                    };
                    if limit.is_negative() {
                        out.insert(((x.clone(), y.clone()), [side_of(dx), side_of(dy), side_of(dx + dy)], limit));
                    }
                }
            }
        }
    }
    out
}

#[test]
fn criterion_6_oracle_equivalence() {
    let outcome = (|| {
        let mut agreeing_subadditive = 0;
        for seed in 0..50u64 {
            let ygrid = 1 + (seed % 5) as u32;
            let pi = random_piecewise_function(5, ygrid, &q(1, 1), seed % 2 == 0, seed).map_err(|e| e.to_string())?;
            ensure!(pi.is_continuous(), "seed {seed} not continuous");
            let verdict = subadditivity_test(&pi).0;
            ensure!(verdict == brute_force_continuous(&pi, 20), "seed {seed}: scan says {verdict}");
            agreeing_subadditive += usize::from(verdict);
        }
        let mut negatives = 0;
        for seed in 0..20u64 {
            let pi = random_piecewise_function(5, 4, &q(1, 3), false, 1000 + seed).map_err(|e| e.to_string())?;
            let (_, witnesses) = subadditivity_test(&pi);
            let reported: BTreeSet<(Point<Rational>, [Side; 3], Rational)> = witnesses
                .iter()
                .map(|w| {
                    let reduced = (w.vertex.0.frac(), w.vertex.1.frac());
                    (reduced, approach_sides(&w.face, &w.vertex), w.slack.clone())
                })
                .collect();
            let found = brute_force_negative_limits(&pi, 5);
            let missing: Vec<_> = found.difference(&reported).collect();
            ensure!(missing.is_empty(), "seed {}: unreported {missing:?}", 1000 + seed);
            negatives += found.len();
        }
        Ok(format!(
            "50 continuous verdicts agree ({agreeing_subadditive} subadditive), {negatives} sampled negative limits all reported"
        ))
    })();
    check(6, "subadditivity oracle equivalence", outcome);
}

#[test]
fn criterion_7_discontinuous_minimality() {
    let outcome = (|| {
        let h = two_sided_discont_demo::<Rational>();
        ensure!(minimality_test(&h, None).map_err(|e| e.to_string())?.is_minimal, "not minimal");
        let set = generate_maximal_additive_faces(&h).map_err(|e| e.to_string())?;
        let half = q(1, 2);
        let (zero, one) = (q(0, 1), q(1, 1));
        let expected: BTreeSet<Triple> = [
            Triple::new(pt(zero.clone()), iv(zero.clone(), half.clone()), iv(zero.clone(), half.clone())),
            Triple::new(pt(zero.clone()), iv(half.clone(), one.clone()), iv(half.clone(), one.clone())),
            Triple::new(iv(zero.clone(), half.clone()), pt(zero.clone()), iv(zero.clone(), half.clone())),
            Triple::new(iv(half.clone(), one.clone()), pt(zero.clone()), iv(half.clone(), one.clone())),
            Triple::new(iv(zero.clone(), half.clone()), iv(zero.clone(), half.clone()), pt(half.clone())),
            Triple::new(iv(half.clone(), one.clone()), iv(half.clone(), one.clone()), pt(q(3, 2))),
        ]
        .into_iter()
        .collect();
        let got: BTreeSet<Triple> = set.faces.iter().map(|a| a.face.triple.clone()).collect();
        ensure!(set.faces.len() == 6 && got == expected, "faces {:?}", got.iter().map(|t| t.to_string()).collect::<Vec<_>>());
        ensure!(set.faces.iter().all(|a| a.face.dimension == 1), "non-edge listed");
        let covered = generate_covered_intervals(&h).map_err(|e| e.to_string())?;
        ensure!(covered.components.len() == 2, "{} components", covered.components.len());
        ensure!(covered.components.iter().all(|c| !c.covered), "a component is covered");
        Ok("minimal, exactly the 6 edges, 2 uncovered components".into())
    })();
    check(7, "two_sided_discont_demo", outcome);
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn against_golden(name: &str, svg: &str) -> Result<(), String> {
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::create_dir_all(path.parent().unwrap()).map_err(|e| e.to_string())?;
        fs::write(&path, svg).map_err(|e| e.to_string())?;
    }
    let stored = fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    ensure!(stored == svg, "{name} differs from golden file");
    Ok(())
}

#[test]
fn criterion_8_rendering_determinism() {
    let outcome = (|| {
        let g = gmic(&q(4, 5)).map_err(|e| e.to_string())?;
        let additive_spec = DiagramSpec::with_mode(DiagramMode::Additive);
        let a1 = plot_2d_diagram(&g, &additive_spec).map_err(|e| e.to_string())?;
        let a2 = plot_2d_diagram(&gmic(&q(4, 5)).unwrap(), &additive_spec).map_err(|e| e.to_string())?;
        ensure!(a1 == a2, "additive diagram differs between runs");
        let h = not_minimal_2::<Rational>();
        let cones_spec = DiagramSpec::with_mode(DiagramMode::Cones);
        let c1 = plot_2d_diagram_with_cones(&h, &cones_spec);
        let c2 = plot_2d_diagram_with_cones(&not_minimal_2::<Rational>(), &cones_spec);
        ensure!(c1 == c2, "cones diagram differs between runs");
        against_golden("gmic_additive.svg", &a1)?;
        against_golden("not_minimal_2_cones.svg", &c1)?;
        let reds = c1.lines().filter(|l| l.contains("data-color=\"red\"")).count();
        ensure!(reds >= 1, "no red element");
        let green_at = c1
            .lines()
            .any(|l| l.contains("data-color=\"green\"") && l.contains("data-vertex=\"(1/5, 3/5)\""));
        ensure!(green_at, "no green element at (1/5, 3/5)");
        Ok(format!("byte-identical, matches golden files, {reds} red elements, green at (1/5,3/5)"))
    })();
    check(8, "SVG determinism", outcome);
}

#[test]
fn criterion_9_json_round_trip() {
    let outcome = (|| {
        let entries = compendium::entries::<Rational>();
        for e in &entries {
            let pi = e.build_default().map_err(|err| err.to_string())?;
            let first = function_to_json(&pi);
            let parsed: PiecewiseFunction = function_from_json(&first).map_err(|err| err.to_string())?;
            let text = serde_json::to_string(&first).map_err(|err| err.to_string())?;
            let reparsed: PiecewiseFunction = cutgen::json::function_from_str(&text).map_err(|err| err.to_string())?;
            ensure!(parsed == pi && reparsed == pi, "{}: parsed function differs", e.name);
            ensure!(function_to_json(&reparsed) == first, "{}: serialization not a fixed point", e.name);
        }
        Ok(format!("{} entries", entries.len()))
    })();
    check(9, "JSON round trip", outcome);
}
