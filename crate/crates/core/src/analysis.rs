//! Minimality, additive faces, covered intervals and the grid extremality test.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::deltap::{
    approach_sides, delta_pi, delta_pi_limit_unchecked, enumerate_faces, face_from_triple, vertex_signs,
    integer_vertices, vertices_of_complex, BreakpointComplex, Face, IntervalOrPoint, Point, VertexSign,
};
use crate::error::{Error, Result};
use crate::linalg::{sparse_row, HomogeneousSystem};
use crate::pwl::{LimitTriple, PiecewiseLinear, Side, Ticks};
use crate::scalar::{format_rational, lcm_of_denominators, Scalar};
use crate::union_find::UnionFind;

/// Checks `Δπ ≥ 0` at every vertex of ΔP and every limit cone at it.
///
/// Returns the verdict and every strictly negative witness. For a continuous
/// function all limits coincide with values, so only the vertices themselves
/// are reported.
pub fn subadditivity_test<T: Scalar>(function: &PiecewiseLinear<T>) -> (bool, Vec<VertexSign<T>>) {
    let witnesses: Vec<VertexSign<T>> = if function.is_continuous() {
        let witness = |x: T, y: T, slack: T| {
            let z = x.clone() + y.clone();
            let face = face_from_triple(
                IntervalOrPoint::point(x.clone()),
                IntervalOrPoint::point(y.clone()),
                IntervalOrPoint::point(z),
            )
            .expect("a point is a nonempty face");
            VertexSign {
                vertex: (x, y),
                face,
                slack,
            }
        };
        match Ticks::new(function) {
            Some(ticks) => integer_vertices(&ticks)
                .into_iter()
                .filter_map(|(a, b)| {
                    let v = |t| ticks.value(t, Side::Value);
                    let slack = v(a) + v(b) - v(a + b);
                    slack
                        .is_negative()
                        .then(|| witness(ticks.point(a), ticks.point(b), slack))
                })
                .collect(),
            None => vertices_of_complex(function)
                .into_iter()
                .filter_map(|(x, y)| {
                    let slack = delta_pi(function, &x, &y);
                    slack.is_negative().then(|| witness(x, y, slack))
                })
                .collect(),
        }
    } else {
        vertex_signs(function, &enumerate_faces(function))
            .into_iter()
            .filter(|s| s.slack.is_negative())
            .collect()
    };
    (witnesses.is_empty(), witnesses)
}

/// A failed equation `π(x^s) + π((f − x)^s') = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryViolation<T> {
    pub x: T,
    pub sides: (Side, Side),
    /// Left-hand side minus one.
    pub residual: T,
}

fn check_f<T: Scalar>(f: &T) -> Result<()> {
    if f <= &T::zero() || f >= &T::one() {
        return Err(Error::FOutOfRange(format_rational(f)));
    }
    Ok(())
}

/// Checks `π(x) + π(f − x) = 1` together with its two one-sided versions.
pub fn symmetry_test<T: Scalar>(function: &PiecewiseLinear<T>, f: &T) -> Result<(bool, Vec<SymmetryViolation<T>>)> {
    check_f(f)?;
    let bk = function.end_points();
    let bk = &bk[..bk.len() - 1];
    let points: BTreeSet<T> = bk
        .iter()
        .cloned()
        .chain(bk.iter().map(|x| (f.clone() - x.clone()).frac()))
        .collect();
    let mut violations = Vec::new();
    for x in points {
        let mirror = f.clone() - x.clone();
        for side in [Side::Value, Side::Right, Side::Left] {
            let sum = function.one_sided(&x, side) + function.one_sided(&mirror, side.flip());
            if !sum.is_one() {
                violations.push(SymmetryViolation {
                    x: x.clone(),
                    sides: (side, side.flip()),
                    residual: sum - T::one(),
                });
            }
        }
    }
    Ok((violations.is_empty(), violations))
}

fn breakpoints_with_value_one<T: Scalar>(function: &PiecewiseLinear<T>) -> impl Iterator<Item = &T> {
    function
        .end_points()
        .iter()
        .zip(function.limits_at_end_points())
        .filter(|(x, l)| !x.is_zero() && !x.is_one() && l.value.is_one())
        .map(|(x, _)| x)
}

/// The declared `f`, else the smallest breakpoint in `(0, 1)` where `π = 1`.
pub fn find_f<T: Scalar>(function: &PiecewiseLinear<T>) -> Result<T> {
    if let Some(f) = function.declared_f() {
        return Ok(f.clone());
    }
    breakpoints_with_value_one(function).next().cloned().ok_or(Error::NoF)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation<T> {
    /// `π(0) ≠ 0`.
    Origin { value: T },
    /// A value or one-sided limit at a breakpoint lies outside `[0, 1]`.
    Range { point: T, side: Side, value: T },
    Subadditivity(VertexSign<T>),
    Symmetry(SymmetryViolation<T>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalityReport<T> {
    pub is_minimal: bool,
    pub f_used: T,
    pub violations: Vec<Violation<T>>,
    /// Set when `f` was looked up, symmetry fails for it, and another
    /// breakpoint with value 1 would pass.
    pub alternative_f: Option<T>,
}

/// Decides whether `function` is a minimal valid function for `f`.
pub fn minimality_test<T: Scalar>(function: &PiecewiseLinear<T>, f: Option<&T>) -> Result<MinimalityReport<T>> {
    let f_used = match f {
        Some(f) => f.clone(),
        None => find_f(function)?,
    };
    let mut violations = Vec::new();
    let origin = function.evaluate(&T::zero());
    if !origin.is_zero() {
        violations.push(Violation::Origin { value: origin });
    }
    let n = function.piece_count();
    for (x, l) in function.end_points()[..n].iter().zip(function.limits_at_end_points()) {
        for side in [Side::Value, Side::Right, Side::Left] {
            let v = l.get(side);
            if v.is_negative() || v > &T::one() {
                violations.push(Violation::Range {
                    point: x.clone(),
                    side,
                    value: v.clone(),
                });
            }
        }
    }
    let (_, witnesses) = subadditivity_test(function);
    violations.extend(witnesses.into_iter().map(Violation::Subadditivity));
    let (symmetric, sym) = symmetry_test(function, &f_used)?;
    violations.extend(sym.into_iter().map(Violation::Symmetry));

    let alternative_f = if !symmetric && f.is_none() && function.declared_f().is_none() {
        breakpoints_with_value_one(function)
            .filter(|x| *x != &f_used)
            .find(|x| symmetry_test(function, x).map(|(ok, _)| ok).unwrap_or(false))
            .cloned()
    } else {
        None
    };
    Ok(MinimalityReport {
        is_minimal: violations.is_empty(),
        f_used,
        violations,
        alternative_f,
    })
}

/// A maximal additive face with the face `F′` whose limit witnesses its
/// additivity, when that is not the face itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditiveFace<T> {
    pub face: Face<T>,
    pub witness: Option<Face<T>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditiveFaceSet<T> {
    /// Sorted by decreasing dimension, then by triple.
    pub faces: Vec<AdditiveFace<T>>,
}

impl<T: Scalar> AdditiveFaceSet<T> {
    pub fn of_dimension(&self, d: u8) -> impl Iterator<Item = &AdditiveFace<T>> {
        self.faces.iter().filter(move |a| a.face.dimension == d)
    }
}

fn translate<T: Scalar>(p: &Point<T>, t: &(T, T)) -> Point<T> {
    (p.0.clone() + t.0.clone(), p.1.clone() + t.1.clone())
}

fn limit_vanishes_on<T: Scalar>(function: &PiecewiseLinear<T>, face: &Face<T>, points: &[Point<T>]) -> bool {
    points.iter().all(|v| delta_pi_limit_unchecked(function, face, v).is_zero())
}

/// Inclusion-maximal additive faces of ΔP, classified dimension by dimension.
pub fn generate_maximal_additive_faces<T: Scalar>(function: &PiecewiseLinear<T>) -> Result<AdditiveFaceSet<T>> {
    if !subadditivity_test(function).0 {
        return Err(Error::NotSubadditive);
    }
    let faces = enumerate_faces(function);
    let shifts: Vec<(T, T)> = [(0, 0), (1, 0), (0, 1), (1, 1)]
        .iter()
        .map(|&(a, b)| (T::from_int(a), T::from_int(b)))
        .collect();

    let mut two_faces_at: HashMap<Point<T>, Vec<usize>> = HashMap::new();
    let mut cones_at: HashMap<Point<T>, Vec<(usize, Point<T>)>> = HashMap::new();
    for (idx, face) in faces.iter().enumerate() {
        for v in &face.vertices {
            if face.dimension == 2 {
                two_faces_at.entry(v.clone()).or_default().push(idx);
            }
            cones_at
                .entry((v.0.frac(), v.1.frac()))
                .or_default()
                .push((idx, v.clone()));
        }
    }

    let mut additive: Vec<AdditiveFace<T>> = Vec::new();
    for face in &faces {
        let witness: Option<Option<usize>> = match face.dimension {
            2 => limit_vanishes_on(function, face, &face.vertices).then_some(None),
            1 => {
                if limit_vanishes_on(function, face, &face.vertices) {
                    Some(None)
                } else {
                    shifts.iter().find_map(|t| {
                        let moved: Vec<Point<T>> = face.vertices.iter().map(|v| translate(v, t)).collect();
                        let around = two_faces_at.get(&moved[0])?;
                        around
                            .iter()
                            .copied()
                            .filter(|&g| faces[g].has_vertex(&moved[1]))
                            .find(|&g| limit_vanishes_on(function, &faces[g], &moved))
                            .map(Some)
                    })
                }
            }
            _ => {
                let v = &face.vertices[0];
                if delta_pi(function, &v.0, &v.1).is_zero() {
                    Some(None)
                } else {
                    cones_at.get(v).and_then(|list| {
                        list.iter()
                            .find(|(g, apex)| delta_pi_limit_unchecked(function, &faces[*g], apex).is_zero())
                            .map(|(g, _)| Some(*g))
                    })
                }
            }
        };
        if let Some(w) = witness {
            additive.push(AdditiveFace {
                face: face.clone(),
                witness: w.map(|g| faces[g].clone()),
            });
        }
    }

    let maximal: Vec<AdditiveFace<T>> = additive
        .iter()
        .filter(|a| {
            !additive
                .iter()
                .any(|b| b.face.dimension > a.face.dimension && a.face.is_subset_of(&b.face))
        })
        .cloned()
        .collect();
    let mut maximal = maximal;
    maximal.sort_by(|a, b| {
        b.face
            .dimension
            .cmp(&a.face.dimension)
            .then_with(|| a.face.triple.cmp(&b.face.triple))
    });
    Ok(AdditiveFaceSet { faces: maximal })
}

/// An open interval `(lo, hi)` between consecutive breakpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BaseInterval<T> {
    pub lo: T,
    pub hi: T,
    /// A piece of a projection of a maximal additive 2-face.
    pub directly_covered: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveredComponent<T> {
    pub intervals: Vec<BaseInterval<T>>,
    /// Some interval of the component is directly covered.
    pub covered: bool,
    /// Every interval of the component is directly covered.
    pub directly_covered: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveredComponents<T> {
    pub components: Vec<CoveredComponent<T>>,
}

impl<T: Scalar> CoveredComponents<T> {
    pub fn covered_intervals(&self) -> Vec<(T, T)> {
        self.components
            .iter()
            .filter(|c| c.covered)
            .flat_map(|c| c.intervals.iter().map(|i| (i.lo.clone(), i.hi.clone())))
            .collect()
    }

    pub fn all_covered(&self) -> bool {
        self.components.iter().all(|c| c.covered)
    }
}

/// Indices of the open base intervals meeting the interior of `span`
/// (reduced into `[0, 1]` first).
fn constituents<T: Scalar>(breakpoints: &[T], span: &IntervalOrPoint<T>) -> Vec<usize> {
    if span.is_point() {
        return Vec::new();
    }
    let span = if span.lo >= T::one() {
        span.shifted(&-T::one())
    } else {
        span.clone()
    };
    breakpoints
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] < span.hi && w[1] > span.lo)
        .map(|(i, _)| i)
        .collect()
}

/// Connected components of the base intervals under the moves induced by the
/// maximal additive faces.
pub fn generate_covered_intervals<T: Scalar>(function: &PiecewiseLinear<T>) -> Result<CoveredComponents<T>> {
    let additive = generate_maximal_additive_faces(function)?;
    let bk = function.end_points();
    let n = function.piece_count();
    let mut uf = UnionFind::new(n);
    let mut direct = vec![false; n];
    for a in &additive.faces {
        let p = &a.face.projections;
        let pieces: Vec<usize> = match a.face.dimension {
            2 => {
                let all: Vec<usize> = p.as_array().iter().flat_map(|s| constituents(bk, s)).collect();
                for &i in &all {
                    direct[i] = true;
                }
                all
            }
            1 => p
                .as_array()
                .iter()
                .filter(|s| !s.is_point())
                .flat_map(|s| constituents(bk, s))
                .collect(),
            _ => Vec::new(),
        };
        for w in pieces.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        groups.entry(uf.find(i)).or_default().push(i);
    }
    let mut components: Vec<CoveredComponent<T>> = groups
        .into_values()
        .map(|members| {
            let intervals: Vec<BaseInterval<T>> = members
                .iter()
                .map(|&i| BaseInterval {
                    lo: bk[i].clone(),
                    hi: bk[i + 1].clone(),
                    directly_covered: direct[i],
                })
                .collect();
            CoveredComponent {
                covered: intervals.iter().any(|i| i.directly_covered),
                directly_covered: intervals.iter().all(|i| i.directly_covered),
                intervals,
            }
        })
        .collect();
    components.sort_by(|a, b| a.intervals[0].cmp(&b.intervals[0]));
    Ok(CoveredComponents { components })
}

/// Nonzero perturbation with `π ± ε·π̄` both minimal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate<T> {
    pub perturbation: PiecewiseLinear<T>,
    pub epsilon: T,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalityReport<T> {
    pub is_extreme: bool,
    pub f: T,
    pub grid_denominator: u64,
    pub perturbation_space_dimension: usize,
    /// A nonzero element of the perturbation space, scaled to max norm 1.
    pub perturbation: Option<PiecewiseLinear<T>>,
    /// `None` with a perturbation present means no admissible ε was found.
    pub certificate: Option<Certificate<T>>,
    pub covered: CoveredComponents<T>,
    /// Discontinuous inputs use one-sided limit unknowns; treat as experimental.
    pub experimental: bool,
}

/// Maximum number of halvings of ε, starting from 1/2.
pub const EPSILON_HALVINGS: usize = 20;

/// Unknowns of the grid perturbation system.
struct GridUnknowns {
    /// Column of the value at each grid point, then of the right and left
    /// limits where the function jumps.
    columns: Vec<[usize; 3]>,
    count: usize,
}

impl GridUnknowns {
    fn new<T: Scalar>(function: &PiecewiseLinear<T>, m: i64) -> Self {
        let mut count = 0;
        let columns = (0..m)
            .map(|g| {
                let continuous = function.limits_at(&T::ratio(g, m)).is_continuous();
                let base = count;
                if continuous {
                    count += 1;
                    [base; 3]
                } else {
                    count += 3;
                    [base, base + 1, base + 2]
                }
            })
            .collect();
        GridUnknowns { columns, count }
    }

    fn column(&self, g: i64, side: Side) -> usize {
        let m = self.columns.len() as i64;
        let slot = match side {
            Side::Value => 0,
            Side::Right => 1,
            Side::Left => 2,
        };
        self.columns[g.rem_euclid(m) as usize][slot]
    }
}

fn grid_index<T: Scalar>(x: &T, m: i64) -> Result<i64> {
    let scaled = x.clone() * T::from_int(m);
    if scaled.floor() != scaled {
        return Err(Error::Grid(format!("{} is not on the 1/{m} grid", format_rational(x))));
    }
    scaled
        .to_big_rational()
        .to_integer()
        .to_i64()
        .ok_or_else(|| Error::Grid("grid index overflow".into()))
}

/// Grid-restricted extremality test.
///
/// The perturbation space consists of functions on `(1/m)Z`, `m = refinement · q`
/// with `q` the common denominator of the breakpoints, that vanish at 0 and `f`,
/// are antisymmetric about `f`, and are additive wherever the function is
/// (including additivity in the limit from each cone). The function is extreme
/// iff that space is trivial.
pub fn extremality_test<T: Scalar>(function: &PiecewiseLinear<T>, refinement: u32) -> Result<ExtremalityReport<T>> {
    if refinement == 0 {
        return Err(Error::Grid("refinement must be positive".into()));
    }
    let report = minimality_test(function, None)?;
    if !report.is_minimal {
        return Err(Error::NotMinimal);
    }
    let f = report.f_used;
    let q: BigInt = lcm_of_denominators(function.end_points());
    let m = (q * BigInt::from(refinement))
        .to_i64()
        .filter(|m| *m <= 1 << 20)
        .ok_or_else(|| Error::Grid("grid denominator too large".into()))?;
    let f_index = grid_index(&f, m)?;
    let unknowns = GridUnknowns::new(function, m);
    let mut system = HomogeneousSystem::<T>::new(unknowns.count);
    let one = T::one();
    let term = |g: i64, side: Side, c: &T| (unknowns.column(g, side), c.clone());

    system.push(sparse_row([term(0, Side::Value, &one)]));
    system.push(sparse_row([term(f_index, Side::Value, &one)]));
    for g in 0..m {
        for side in [Side::Value, Side::Right, Side::Left] {
            system.push(sparse_row([term(g, side, &one), term(f_index - g, side.flip(), &one)]));
        }
    }
    let minus = -T::one();
    let continuous = function.is_continuous();
    if continuous {
        let values: Vec<T> = (0..m).map(|g| function.evaluate(&T::ratio(g, m))).collect();
        let at = |g: i64| &values[g.rem_euclid(m) as usize];
        for a in 0..m {
            for b in a..m {
                if (at(a).clone() + at(b).clone() - at(a + b).clone()).is_zero() {
                    system.push(sparse_row([
                        term(a, Side::Value, &one),
                        term(b, Side::Value, &one),
                        term(a + b, Side::Value, &minus),
                    ]));
                }
            }
        }
    } else {
        let grid: Vec<T> = (0..=m).map(|g| T::ratio(g, m)).collect();
        let faces = BreakpointComplex::from_breakpoints(&grid).faces();
        for face in &faces {
            for apex in &face.vertices {
                if !delta_pi_limit_unchecked(function, face, apex).is_zero() {
                    continue;
                }
                let [sx, sy, sz] = approach_sides(face, apex);
                let gx = grid_index(&apex.0, m)?;
                let gy = grid_index(&apex.1, m)?;
                system.push(sparse_row([
                    term(gx, sx, &one),
                    term(gy, sy, &one),
                    term(gx + gy, sz, &minus),
                ]));
            }
        }
    }

    let dimension = system.nullity();
    let covered = generate_covered_intervals(function)?;
    let (perturbation, certificate) = if dimension == 0 {
        (None, None)
    } else {
        let basis = system.nullspace_basis();
        let breakpoint_columns: Vec<usize> = function
            .end_points()
            .iter()
            .filter_map(|x| grid_index(x, m).ok())
            .flat_map(|g| [Side::Value, Side::Right, Side::Left].map(|s| unknowns.column(g, s)))
            .collect();
        let chosen = basis
            .iter()
            .find(|v| breakpoint_columns.iter().any(|&c| !v[c].is_zero()))
            .unwrap_or(&basis[0]);
        let pert = grid_perturbation(chosen, &unknowns, m)?;
        let bound = continuous.then(|| epsilon_bound(function, &pert, m)).flatten();
        let cert = find_epsilon(function, &pert, &f, bound.as_ref())?;
        (Some(pert), cert)
    };
    Ok(ExtremalityReport {
        is_extreme: dimension == 0,
        f,
        grid_denominator: m as u64,
        perturbation_space_dimension: dimension,
        perturbation,
        certificate,
        covered,
        experimental: !continuous,
    })
}

/// Interpolates a solution vector on the grid, scaled to max norm 1.
fn grid_perturbation<T: Scalar>(vector: &[T], unknowns: &GridUnknowns, m: i64) -> Result<PiecewiseLinear<T>> {
    let norm = vector.iter().map(|v| v.abs()).max().unwrap_or_else(T::zero);
    let scale = |v: &T| if norm.is_zero() { v.clone() } else { v.clone() / norm.clone() };
    let breakpoints: Vec<T> = (0..=m).map(|g| T::ratio(g, m)).collect();
    let limits = (0..=m)
        .map(|g| {
            let at = |s| scale(&vector[unknowns.column(g, s)]);
            LimitTriple::new(at(Side::Value), at(Side::Right), at(Side::Left))
        })
        .collect();
    PiecewiseLinear::from_breakpoints_and_limits(breakpoints, limits)
}

/// Largest `ε` keeping `π ± ε·π̄` in `[0, 1]` and subadditive at every pair of
/// grid points, for a continuous `π` and a perturbation on the same grid.
/// `None` when no constraint binds.
fn epsilon_bound<T: Scalar>(function: &PiecewiseLinear<T>, perturbation: &PiecewiseLinear<T>, m: i64) -> Option<T> {
    let points: Vec<T> = (0..m).map(|g| T::ratio(g, m)).collect();
    let p: Vec<T> = points.iter().map(|x| function.evaluate(x)).collect();
    let d: Vec<T> = points.iter().map(|x| perturbation.evaluate(x)).collect();
    let mut bound: Option<T> = None;
    let mut tighten = |slack: T, rate: T| {
        if !rate.is_zero() {
            let b = slack / rate.abs();
            bound = Some(match bound.take() {
                Some(old) => old.min(b),
                None => b,
            });
        }
    };
    let one = T::one();
    for g in 0..m as usize {
        tighten(p[g].clone(), d[g].clone());
        tighten(one.clone() - p[g].clone(), d[g].clone());
    }
    let n = m as usize;
    for a in 0..n {
        for b in a..n {
            let c = (a + b) % n;
            tighten(
                p[a].clone() + p[b].clone() - p[c].clone(),
                d[a].clone() + d[b].clone() - d[c].clone(),
            );
        }
    }
    bound
}

/// Halves `ε` from 1/2; candidates above `bound` are skipped without testing.
fn find_epsilon<T: Scalar>(
    function: &PiecewiseLinear<T>,
    perturbation: &PiecewiseLinear<T>,
    f: &T,
    bound: Option<&T>,
) -> Result<Option<Certificate<T>>> {
    let mut epsilon = T::ratio(1, 2);
    let two = T::from_int(2);
    for _ in 0..EPSILON_HALVINGS {
        if bound.is_some_and(|b| &epsilon > b) {
            epsilon = epsilon / two.clone();
            continue;
        }
        let plus = function.add_scaled(perturbation, &epsilon)?;
        let minus = function.add_scaled(perturbation, &-epsilon.clone())?;
        if minimality_test(&plus, Some(f))?.is_minimal && minimality_test(&minus, Some(f))?.is_minimal {
            return Ok(Some(Certificate {
                perturbation: perturbation.clone(),
                epsilon,
            }));
        }
        epsilon = epsilon / two.clone();
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::ratio(n, d)
    }

    fn continuous(bk: &[(i64, i64)], vals: &[(i64, i64)]) -> PiecewiseLinear<Q> {
        PiecewiseLinear::from_breakpoints_and_values(
            bk.iter().map(|&(a, b)| q(a, b)).collect(),
            vals.iter().map(|&(a, b)| q(a, b)).collect(),
        )
        .unwrap()
    }

    fn gmic() -> PiecewiseLinear<Q> {
        continuous(&[(0, 1), (4, 5), (1, 1)], &[(0, 1), (1, 1), (0, 1)])
    }

    #[test]
    fn symmetry_rejects_bad_f() {
        assert!(matches!(symmetry_test(&gmic(), &q(0, 1)), Err(Error::FOutOfRange(_))));
        assert!(matches!(symmetry_test(&gmic(), &q(3, 2)), Err(Error::FOutOfRange(_))));
    }

    #[test]
    fn symmetry_wrong_f_flags_origin() {
        let (ok, v) = symmetry_test(&gmic(), &q(1, 2)).unwrap();
        assert!(!ok);
        assert!(v.iter().any(|s| s.x == q(0, 1) && s.residual == q(5, 8) - q(1, 1)));
    }

    #[test]
    fn find_f_cases() {
        assert_eq!(find_f(&gmic()).unwrap(), q(4, 5));
        let zero = continuous(&[(0, 1), (1, 1)], &[(0, 1), (0, 1)]);
        assert_eq!(find_f(&zero), Err(Error::NoF));
        let declared = gmic().with_declared_f(q(1, 3)).unwrap();
        assert_eq!(find_f(&declared).unwrap(), q(1, 3));
    }

    #[test]
    fn range_and_origin_violations_reported() {
        let shifted = continuous(&[(0, 1), (1, 2), (1, 1)], &[(1, 4), (5, 4), (1, 4)]);
        let r = minimality_test(&shifted, Some(&q(1, 2))).unwrap();
        assert!(!r.is_minimal);
        assert!(r.violations.iter().any(|v| matches!(v, Violation::Origin { .. })));
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Range { point, .. } if *point == q(1, 2))));
    }

    #[test]
    fn alternative_f_is_reported() {
        // π = 1 at 1/8 and 1/2; only f = 1/2 gives a symmetric function.
        let h = continuous(
            &[(0, 1), (1, 8), (3, 8), (1, 2), (5, 8), (3, 4), (7, 8), (1, 1)],
            &[(0, 1), (1, 1), (0, 1), (1, 1), (1, 4), (1, 2), (3, 4), (0, 1)],
        );
        assert!(symmetry_test(&h, &q(1, 2)).unwrap().0);
        let r = minimality_test(&h, None).unwrap();
        assert_eq!(r.f_used, q(1, 8));
        assert_eq!(r.alternative_f, Some(q(1, 2)));
        let explicit = minimality_test(&h, Some(&q(1, 8))).unwrap();
        assert_eq!(explicit.alternative_f, None);
    }

    #[test]
    fn additive_faces_need_subadditivity() {
        let h = continuous(
            &[(0, 1), (1, 5), (3, 5), (4, 5), (1, 1)],
            &[(0, 1), (1, 5), (4, 5), (1, 1), (0, 1)],
        );
        assert_eq!(generate_maximal_additive_faces(&h), Err(Error::NotSubadditive));
        assert_eq!(generate_covered_intervals(&h), Err(Error::NotSubadditive));
    }

    #[test]
    fn extremality_rejects_zero_refinement() {
        assert!(matches!(extremality_test(&gmic(), 0), Err(Error::Grid(_))));
    }

    #[test]
    fn extremality_rejects_off_grid_f() {
        let g = gmic().with_declared_f(q(4, 5)).unwrap();
        assert!(extremality_test(&g, 1).is_ok());
        let h = continuous(&[(0, 1), (1, 2), (1, 1)], &[(0, 1), (1, 1), (0, 1)])
            .with_declared_f(q(1, 3))
            .unwrap();
        assert!(extremality_test(&h, 1).is_err());
    }

    #[test]
    fn grid_index_checks_membership() {
        assert_eq!(grid_index(&q(3, 4), 8).unwrap(), 6);
        assert!(grid_index(&q(1, 3), 8).is_err());
    }
}
