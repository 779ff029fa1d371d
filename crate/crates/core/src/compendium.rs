//! Named functions and the seeded random function generator.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::pwl::{LimitTriple, PiecewiseLinear};
use crate::scalar::{format_rational, Scalar};

/// Properties a named function is expected to have; the analysis module
/// re-checks them in the test suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpectedProperties {
    pub minimal: bool,
    pub extreme: Option<bool>,
    pub continuous: bool,
}

type Constructor<T> = fn(&BTreeMap<String, T>) -> Result<PiecewiseLinear<T>>;

pub struct CompendiumEntry<T> {
    pub name: &'static str,
    pub description: &'static str,
    /// Parameter names with their default values.
    pub parameters: Vec<(&'static str, T)>,
    pub expected: ExpectedProperties,
    constructor: Constructor<T>,
}

impl<T: Scalar> CompendiumEntry<T> {
    /// Builds the function, overriding defaults with `overrides`.
    pub fn build(&self, overrides: &[(String, T)]) -> Result<PiecewiseLinear<T>> {
        let mut params: BTreeMap<String, T> = self
            .parameters
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect();
        for (k, v) in overrides {
            match params.get_mut(k) {
                Some(slot) => *slot = v.clone(),
                None => {
                    return Err(Error::Parameter(format!("{} has no parameter {k:?}", self.name)));
                }
            }
        }
        (self.constructor)(&params)
    }

    pub fn build_default(&self) -> Result<PiecewiseLinear<T>> {
        self.build(&[])
    }
}

fn q<T: Scalar>(n: i64, d: i64) -> T {
    T::ratio(n, d)
}

fn continuous<T: Scalar>(bk: &[(i64, i64)], vals: &[(i64, i64)]) -> Result<PiecewiseLinear<T>> {
    PiecewiseLinear::from_breakpoints_and_values(
        bk.iter().map(|&(a, b)| q(a, b)).collect(),
        vals.iter().map(|&(a, b)| q(a, b)).collect(),
    )
}

/// Gomory mixed-integer cut function: breakpoints `[0, f, 1]`, values `[0, 1, 0]`.
pub fn gmic<T: Scalar>(f: &T) -> Result<PiecewiseLinear<T>> {
    if f <= &T::zero() || f >= &T::one() {
        return Err(Error::FOutOfRange(format_rational(f)));
    }
    PiecewiseLinear::from_breakpoints_and_values(
        vec![T::zero(), f.clone(), T::one()],
        vec![T::zero(), T::one(), T::zero()],
    )
}

/// Continuous, symmetric about `f = 4/5`, and not subadditive:
/// `Δπ(1/5, 1/5) = −1/10`.
pub fn not_minimal_2<T: Scalar>() -> PiecewiseLinear<T> {
    continuous(
        &[(0, 1), (1, 5), (3, 5), (4, 5), (1, 1)],
        &[(0, 1), (1, 5), (4, 5), (1, 1), (0, 1)],
    )
    .expect("well-formed data")
}

/// Discontinuous at both breakpoints: constant 1/2 on the open pieces, 0 at 0
/// and 1 at 1/2.
pub fn two_sided_discont_demo<T: Scalar>() -> PiecewiseLinear<T> {
    let half = q::<T>(1, 2);
    let t = |v: T| LimitTriple::new(v, half.clone(), half.clone());
    PiecewiseLinear::from_breakpoints_and_limits(
        vec![T::zero(), half.clone(), T::one()],
        vec![t(T::zero()), t(T::one()), t(T::zero())],
    )
    .and_then(|p| p.with_declared_f(half.clone()))
    .expect("well-formed data")
}

/// Midpoint of two distinct minimal functions with `f = 4/5`, hence minimal
/// but not extreme.
pub fn demo_not_extreme<T: Scalar>() -> PiecewiseLinear<T> {
    continuous(
        &[(0, 1), (1, 5), (2, 5), (3, 5), (4, 5), (1, 1)],
        &[(0, 1), (3, 8), (1, 2), (5, 8), (1, 1), (0, 1)],
    )
    .and_then(|p| p.with_declared_f(q(4, 5)))
    .expect("well-formed data")
}

/// Every named entry.
pub fn entries<T: Scalar>() -> Vec<CompendiumEntry<T>> {
    vec![
        CompendiumEntry {
            name: "gmic",
            description: "Gomory mixed-integer cut function, two slopes",
            parameters: vec![("f", q(4, 5))],
            expected: ExpectedProperties {
                minimal: true,
                extreme: Some(true),
                continuous: true,
            },
            constructor: |p| gmic(&p["f"]),
        },
        CompendiumEntry {
            name: "not_minimal_2",
            description: "continuous, symmetric, violates subadditivity",
            parameters: vec![],
            expected: ExpectedProperties {
                minimal: false,
                extreme: None,
                continuous: true,
            },
            constructor: |_| Ok(not_minimal_2()),
        },
        CompendiumEntry {
            name: "two_sided_discont_demo",
            description: "discontinuous on both sides of each breakpoint, minimal",
            parameters: vec![],
            expected: ExpectedProperties {
                minimal: true,
                extreme: None,
                continuous: false,
            },
            constructor: |_| Ok(two_sided_discont_demo()),
        },
        CompendiumEntry {
            name: "demo_not_extreme",
            description: "minimal midpoint of two minimal functions",
            parameters: vec![],
            expected: ExpectedProperties {
                minimal: true,
                extreme: Some(false),
                continuous: true,
            },
            constructor: |_| Ok(demo_not_extreme()),
        },
    ]
}

pub fn entry<T: Scalar>(name: &str) -> Result<CompendiumEntry<T>> {
    entries()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownEntry(name.to_string()))
}

/// Loads `<dir>/<name>.json` in the function format, for upstream entries
/// whose data is kept outside the crate (for example
/// `hildebrand_2_sided_discont_2_slope_1`).
pub fn load_external<T: Scalar>(dir: &std::path::Path, name: &str) -> Result<PiecewiseLinear<T>> {
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(Error::UnknownEntry(name.to_string()));
    }
    crate::json::load_function(&dir.join(format!("{name}.json")))
}

/// Identifier of the pseudo-random scheme behind [`random_piecewise_function`].
/// Any change to the draw order must bump it.
pub const RANDOM_SCHEME: &str = "chacha8-v1";

struct Draws {
    rng: ChaCha8Rng,
    ygrid: i64,
    continuous: (u64, u64),
}

impl Draws {
    fn is_continuous(&mut self) -> bool {
        let (num, den) = self.continuous;
        self.rng.gen_range(0..den) < num
    }

    fn level<T: Scalar>(&mut self) -> T {
        T::ratio(self.rng.gen_range(0..=self.ygrid), self.ygrid)
    }
}

fn probability_parts<T: Scalar>(p: &T) -> Result<(u64, u64)> {
    if p.is_negative() || p > &T::one() {
        return Err(Error::Parameter(format!(
            "continuous_proba {} outside [0, 1]",
            format_rational(p)
        )));
    }
    let r = p.to_big_rational();
    match (r.numer().to_u64(), r.denom().to_u64()) {
        (Some(n), Some(d)) => Ok((n, d)),
        _ => Err(Error::Parameter("continuous_proba denominator too large".into())),
    }
}

/// Random function with breakpoints `(1/xgrid)Z` and values and limits in
/// `(1/ygrid)Z ∩ [0, 1]`, deterministic per `seed`.
///
/// Each breakpoint is continuous with probability `continuous_proba`. With
/// `symmetry`, a grid point `f` with `π(f) = 1` is drawn and values come in
/// pairs `x`, `f − x` summing to 1; such pairs share their continuity draw.
/// A point with `2x ≡ f` must take the value 1/2; when `ygrid` is odd it is
/// dropped from the breakpoints and the interpolation through it gives 1/2.
pub fn random_piecewise_function<T: Scalar>(
    xgrid: u32,
    ygrid: u32,
    continuous_proba: &T,
    symmetry: bool,
    seed: u64,
) -> Result<PiecewiseLinear<T>> {
    if xgrid == 0 || ygrid == 0 {
        return Err(Error::Parameter("xgrid and ygrid must be positive".into()));
    }
    let mut draws = Draws {
        rng: ChaCha8Rng::seed_from_u64(seed),
        ygrid: ygrid as i64,
        continuous: probability_parts(continuous_proba)?,
    };
    let n = xgrid as i64;
    let breakpoints: Vec<T> = (0..=n).map(|i| T::ratio(i, n)).collect();
    let finish = |mut triples: Vec<LimitTriple<T>>| {
        triples.push(triples[0].clone());
        PiecewiseLinear::from_breakpoints_and_limits(breakpoints.clone(), triples)
    };

    if !symmetry {
        let mut triples = Vec::with_capacity(n as usize + 1);
        for i in 0..n {
            let value = if i == 0 { T::zero() } else { draws.level() };
            triples.push(if draws.is_continuous() {
                LimitTriple::constant(value)
            } else {
                let right = draws.level();
                LimitTriple::new(value, right, draws.level())
            });
        }
        return finish(triples);
    }

    if xgrid < 2 {
        return Err(Error::Parameter("symmetry needs xgrid >= 2 to place f".into()));
    }
    let one = T::one();
    let complement = |v: &T| one.clone() - v.clone();
    let fi = draws.rng.gen_range(1..n);
    let mut slots: Vec<Option<LimitTriple<T>>> = vec![None; n as usize];
    let mut omitted = vec![false; n as usize];
    for i in 0..n {
        if slots[i as usize].is_some() || omitted[i as usize] {
            continue;
        }
        let partner = (fi - i).rem_euclid(n);
        if partner == i && ygrid % 2 == 1 {
            omitted[i as usize] = true;
            continue;
        }
        let cont = draws.is_continuous();
        if partner == i {
            let half = T::ratio(1, 2);
            slots[i as usize] = Some(if cont {
                LimitTriple::constant(half)
            } else {
                let right: T = draws.level();
                let left = complement(&right);
                LimitTriple::new(half, right, left)
            });
            continue;
        }
        let value = if i == 0 { T::zero() } else { draws.level() };
        let mine = if cont {
            LimitTriple::constant(value)
        } else {
            let right = draws.level();
            LimitTriple::new(value, right, draws.level())
        };
        let theirs = LimitTriple::new(complement(&mine.value), complement(&mine.left), complement(&mine.right));
        slots[partner as usize] = Some(theirs);
        slots[i as usize] = Some(mine);
    }
    let (mut kept, mut triples): (Vec<T>, Vec<LimitTriple<T>>) = slots
        .into_iter()
        .enumerate()
        .filter_map(|(i, s)| s.map(|t| (T::ratio(i as i64, n), t)))
        .unzip();
    kept.push(T::one());
    triples.push(triples[0].clone());
    PiecewiseLinear::from_breakpoints_and_limits(kept, triples)?.with_declared_f(T::ratio(fi, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn gmic_rejects_bad_f() {
        assert!(matches!(gmic(&Q::from_int(1)), Err(Error::FOutOfRange(_))));
        assert!(matches!(gmic(&Q::from_int(0)), Err(Error::FOutOfRange(_))));
        assert_eq!(gmic(&Q::ratio(4, 5)).unwrap().evaluate(&Q::ratio(2, 5)), Q::ratio(1, 2));
    }

    #[test]
    fn entry_parameters() {
        let e = entry::<Q>("gmic").unwrap();
        let g = e.build(&[("f".into(), Q::ratio(2, 3))]).unwrap();
        assert_eq!(g.end_points()[1], Q::ratio(2, 3));
        assert!(matches!(e.build(&[("g".into(), Q::ratio(1, 2))]), Err(Error::Parameter(_))));
        assert!(matches!(entry::<Q>("nope"), Err(Error::UnknownEntry(_))));
    }

    #[test]
    fn random_is_deterministic() {
        let p = Q::ratio(1, 3);
        let a = random_piecewise_function(5, 5, &p, true, 7).unwrap();
        let b = random_piecewise_function(5, 5, &p, true, 7).unwrap();
        assert_eq!(a, b);
        let c = random_piecewise_function(5, 5, &p, false, 7).unwrap();
        let d = random_piecewise_function(5, 5, &p, false, 7).unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn random_rejects_bad_parameters() {
        let p = Q::ratio(1, 2);
        assert!(matches!(random_piecewise_function(0, 5, &p, false, 1), Err(Error::Parameter(_))));
        assert!(matches!(random_piecewise_function(1, 5, &p, true, 1), Err(Error::Parameter(_))));
        assert!(matches!(
            random_piecewise_function(5, 5, &Q::ratio(3, 2), false, 1),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn symmetric_odd_grids() {
        let p = Q::ratio(1, 3);
        for seed in 0..20 {
            let g = random_piecewise_function(5, 5, &p, true, seed).unwrap();
            let f = g.declared_f().unwrap().clone();
            assert!(crate::analysis::symmetry_test(&g, &f).unwrap().0);
            assert_eq!(g.end_points().len(), 5);
            assert!(g.values_at_end_points().iter().all(|v| (v.clone() * Q::from_int(5)).is_integer()));
            assert_eq!(g.evaluate(&Q::from_int(0)), Q::from_int(0));
        }
        let even = random_piecewise_function(4, 4, &Q::from_int(1), true, 3).unwrap();
        assert!(even.is_continuous());
    }
}
