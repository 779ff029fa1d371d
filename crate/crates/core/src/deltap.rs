//! The two-dimensional polyhedral complex ΔP induced by a function's
//! breakpoints, and the subadditivity slack Δπ on it.
//!
//! A face is `F(I, J, K) = {(x, y) : x ∈ I, y ∈ J, x + y ∈ K}` where `I` and `J`
//! are faces of the one-dimensional complex inside `[0, 1]` and `K` one inside
//! `[0, 2]`. Faces are kept as subsets of the unit square; periodicity only
//! enters when the function is evaluated.
//!
//! [`enumerate_faces`] lists every face of the torus complex exactly once.
//! Lower-dimensional faces lying on the right or top border of the square are
//! translates of faces on the left or bottom border and are represented there.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::pwl::{PiecewiseLinear, Side, Ticks};
use crate::scalar::{format_rational, Scalar};

pub type Point<T> = (T, T);

/// A closed interval `[lo, hi]`; `lo == hi` encodes a singleton.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntervalOrPoint<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Scalar> IntervalOrPoint<T> {
    pub fn new(lo: T, hi: T) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        IntervalOrPoint { lo, hi }
    }

    pub fn point(x: T) -> Self {
        IntervalOrPoint { lo: x.clone(), hi: x }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &T) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_interval(&self, other: &Self) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn length(&self) -> T {
        self.hi.clone() - self.lo.clone()
    }

    /// The distinct endpoints.
    pub fn ends(&self) -> Vec<T> {
        if self.is_point() {
            vec![self.lo.clone()]
        } else {
            vec![self.lo.clone(), self.hi.clone()]
        }
    }

    /// The side from which points of the relative interior approach `x`.
    pub fn approach_side(&self, x: &T) -> Side {
        if self.is_point() || (x != &self.lo && x != &self.hi) {
            Side::Value
        } else if x == &self.lo {
            Side::Right
        } else {
            Side::Left
        }
    }

    pub fn shifted(&self, by: &T) -> Self {
        IntervalOrPoint {
            lo: self.lo.clone() + by.clone(),
            hi: self.hi.clone() + by.clone(),
        }
    }
}

impl<T: Scalar> fmt::Display for IntervalOrPoint<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            write!(f, "{{{}}}", format_rational(&self.lo))
        } else {
            write!(f, "[{}, {}]", format_rational(&self.lo), format_rational(&self.hi))
        }
    }
}

/// The defining triple `(I, J, K)` of a face.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple<T> {
    pub i: IntervalOrPoint<T>,
    pub j: IntervalOrPoint<T>,
    pub k: IntervalOrPoint<T>,
}

impl<T: Scalar> Triple<T> {
    pub fn new(i: IntervalOrPoint<T>, j: IntervalOrPoint<T>, k: IntervalOrPoint<T>) -> Self {
        Triple { i, j, k }
    }

    pub fn as_array(&self) -> [&IntervalOrPoint<T>; 3] {
        [&self.i, &self.j, &self.k]
    }

    pub fn contains(&self, p: &Point<T>) -> bool {
        self.i.contains(&p.0) && self.j.contains(&p.1) && self.k.contains(&(p.0.clone() + p.1.clone()))
    }

    pub fn transpose(&self) -> Self {
        Triple {
            i: self.j.clone(),
            j: self.i.clone(),
            k: self.k.clone(),
        }
    }
}

impl<T: Scalar> fmt::Display for Triple<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F({}, {}, {})", self.i, self.j, self.k)
    }
}

/// A nonempty face of ΔP with its vertices and projections.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Face<T> {
    pub triple: Triple<T>,
    /// Sorted lexicographically, no duplicates.
    pub vertices: Vec<Point<T>>,
    /// Images under `(x, y) ↦ x`, `y`, `x + y`.
    pub projections: Triple<T>,
    pub dimension: u8,
}

impl<T: Scalar> Face<T> {
    pub fn contains(&self, p: &Point<T>) -> bool {
        self.triple.contains(p)
    }

    pub fn has_vertex(&self, p: &Point<T>) -> bool {
        self.vertices.binary_search(p).is_ok()
    }

    /// Point-set inclusion in the unit square (no periodic identification).
    pub fn is_subset_of(&self, other: &Face<T>) -> bool {
        self.vertices.iter().all(|v| other.contains(v))
    }

    /// Vertices in counterclockwise order around the face.
    pub fn cyclic_vertices(&self) -> Vec<Point<T>> {
        cyclic_order(&self.vertices)
    }

    /// The two vertices adjacent to `apex` along the boundary (one for an edge).
    pub fn neighbors_of(&self, apex: &Point<T>) -> Vec<Point<T>> {
        match self.dimension {
            0 => Vec::new(),
            1 => self.vertices.iter().filter(|v| *v != apex).cloned().collect(),
            _ => {
                let ring = self.cyclic_vertices();
                let n = ring.len();
                match ring.iter().position(|v| v == apex) {
                    Some(p) => vec![ring[(p + n - 1) % n].clone(), ring[(p + 1) % n].clone()],
                    None => Vec::new(),
                }
            }
        }
    }
}

fn cross<T: Scalar>(o: &Point<T>, a: &Point<T>, b: &Point<T>) -> T {
    (a.0.clone() - o.0.clone()) * (b.1.clone() - o.1.clone())
        - (a.1.clone() - o.1.clone()) * (b.0.clone() - o.0.clone())
}

/// Counterclockwise order of the vertices of a convex polygon, starting from
/// the lexicographically smallest one.
pub fn cyclic_order<T: Scalar>(vertices: &[Point<T>]) -> Vec<Point<T>> {
    let mut pts: Vec<Point<T>> = vertices.to_vec();
    pts.sort();
    if pts.len() < 3 {
        return pts;
    }
    let start = pts.remove(0);
    // All remaining points lie in a half-plane seen from the lexicographic minimum.
    pts.sort_by(|a, b| {
        let c = cross(&start, a, b);
        if c.is_positive() {
            std::cmp::Ordering::Less
        } else if c.is_negative() {
            std::cmp::Ordering::Greater
        } else {
            a.cmp(b)
        }
    });
    pts.insert(0, start);
    pts
}

fn affine_dimension<T: Scalar>(vertices: &[Point<T>]) -> u8 {
    match vertices.len() {
        0 | 1 => 0,
        2 => 1,
        _ => {
            let o = &vertices[0];
            let a = &vertices[1];
            if vertices[2..].iter().any(|b| !cross(o, a, b).is_zero()) {
                2
            } else {
                1
            }
        }
    }
}

/// Every basic solution of the triple with a feasibility flag: points where two
/// of `x`, `y`, `x + y` sit at endpoints of `I`, `J`, `K` respectively.
pub fn basic_solutions<T: Scalar>(triple: &Triple<T>) -> Vec<(Point<T>, bool)> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut push = |p: Point<T>| {
        if seen.insert(p.clone()) {
            let ok = triple.contains(&p);
            out.push((p, ok));
        }
    };
    let (is, js, ks) = (triple.i.ends(), triple.j.ends(), triple.k.ends());
    for x in &is {
        for y in &js {
            push((x.clone(), y.clone()));
        }
    }
    for x in &is {
        for z in &ks {
            push((x.clone(), z.clone() - x.clone()));
        }
    }
    for y in &js {
        for z in &ks {
            push((z.clone() - y.clone(), y.clone()));
        }
    }
    out
}

/// Builds `F(I, J, K)`, or `None` if the face is empty.
pub fn face_from_triple<T: Scalar>(
    i: IntervalOrPoint<T>,
    j: IntervalOrPoint<T>,
    k: IntervalOrPoint<T>,
) -> Option<Face<T>> {
    let triple = Triple::new(i, j, k);
    let mut vertices: Vec<Point<T>> = basic_solutions(&triple)
        .into_iter()
        .filter_map(|(p, ok)| ok.then_some(p))
        .collect();
    if vertices.is_empty() {
        return None;
    }
    vertices.sort();
    vertices.dedup();
    let span = |f: &dyn Fn(&Point<T>) -> T| {
        let vals: Vec<T> = vertices.iter().map(f).collect();
        let lo = vals.iter().min().cloned().expect("nonempty");
        let hi = vals.iter().max().cloned().expect("nonempty");
        IntervalOrPoint { lo, hi }
    };
    let projections = Triple::new(
        span(&|p| p.0.clone()),
        span(&|p| p.1.clone()),
        span(&|p| p.0.clone() + p.1.clone()),
    );
    let dimension = affine_dimension(&vertices);
    Some(Face {
        triple,
        vertices,
        projections,
        dimension,
    })
}

/// `Δπ(x, y) = π(x) + π(y) − π(x + y)`.
pub fn delta_pi<T: Scalar>(function: &PiecewiseLinear<T>, x: &T, y: &T) -> T {
    function.evaluate(x) + function.evaluate(y) - function.evaluate(&(x.clone() + y.clone()))
}

/// Sides from which `vertex` is approached out of the relative interior of `face`.
pub fn approach_sides<T: Scalar>(face: &Face<T>, vertex: &Point<T>) -> [Side; 3] {
    let p = &face.projections;
    [
        p.i.approach_side(&vertex.0),
        p.j.approach_side(&vertex.1),
        p.k.approach_side(&(vertex.0.clone() + vertex.1.clone())),
    ]
}

/// `Δπ_F(x, y)`: the limit of Δπ at a vertex of `face` from its relative interior.
pub fn delta_pi_limit<T: Scalar>(function: &PiecewiseLinear<T>, face: &Face<T>, vertex: &Point<T>) -> Result<T> {
    if !face.has_vertex(vertex) {
        return Err(Error::VertexNotInFace(format_point(vertex)));
    }
    Ok(delta_pi_limit_unchecked(function, face, vertex))
}

pub(crate) fn delta_pi_limit_unchecked<T: Scalar>(
    function: &PiecewiseLinear<T>,
    face: &Face<T>,
    vertex: &Point<T>,
) -> T {
    let [sx, sy, sz] = approach_sides(face, vertex);
    let z = vertex.0.clone() + vertex.1.clone();
    function.one_sided(&vertex.0, sx) + function.one_sided(&vertex.1, sy) - function.one_sided(&z, sz)
}

pub fn format_point<T: Scalar>(p: &Point<T>) -> String {
    format!("({}, {})", format_rational(&p.0), format_rational(&p.1))
}

/// Breakpoints of a function in `[0, 1]` and their translates in `[0, 2]`.
#[derive(Clone, Debug)]
pub struct BreakpointComplex<T> {
    unit: Vec<T>,
    extended: Vec<T>,
}

impl<T: Scalar> BreakpointComplex<T> {
    pub fn new(function: &PiecewiseLinear<T>) -> Self {
        Self::from_breakpoints(function.end_points())
    }

    pub fn from_breakpoints(breakpoints: &[T]) -> Self {
        let unit = breakpoints.to_vec();
        let mut extended = unit.clone();
        extended.extend(unit.iter().skip(1).map(|x| x.clone() + T::one()));
        BreakpointComplex { unit, extended }
    }

    /// Faces of the one-dimensional complex used for `I` and `J`; the singleton
    /// `{1}` is left out as the translate of `{0}`.
    fn anchored_faces(&self) -> Vec<IntervalOrPoint<T>> {
        let n = self.unit.len() - 1;
        let mut out: Vec<IntervalOrPoint<T>> = self.unit[..n].iter().cloned().map(IntervalOrPoint::point).collect();
        out.extend(self.unit.windows(2).map(|w| IntervalOrPoint::new(w[0].clone(), w[1].clone())));
        out
    }

    /// Faces of the complex on `[0, 2]` meeting `[lo, hi]`.
    fn faces_meeting(&self, lo: &T, hi: &T) -> Vec<IntervalOrPoint<T>> {
        let ext = &self.extended;
        let mut out = Vec::new();
        let start = match ext.binary_search(lo) {
            Ok(p) => p,
            Err(p) => p.saturating_sub(1),
        };
        for idx in start..ext.len() {
            let b = &ext[idx];
            if b > hi {
                break;
            }
            if b >= lo {
                out.push(IntervalOrPoint::point(b.clone()));
            }
            if idx + 1 < ext.len() {
                let next = &ext[idx + 1];
                if next >= lo && b <= hi {
                    out.push(IntervalOrPoint::new(b.clone(), next.clone()));
                }
            }
        }
        out
    }

    /// Smallest face of the complex on `[0, 2]` containing `span`.
    fn smallest_containing(&self, span: &IntervalOrPoint<T>) -> IntervalOrPoint<T> {
        let ext = &self.extended;
        match ext.binary_search(&span.lo) {
            Ok(p) if span.is_point() => IntervalOrPoint::point(ext[p].clone()),
            Ok(p) => IntervalOrPoint::new(ext[p].clone(), ext[p + 1].clone()),
            Err(p) => IntervalOrPoint::new(ext[p - 1].clone(), ext[p].clone()),
        }
    }

    /// The minimal triple describing the same point set as `face`.
    pub fn canonical_triple(&self, face: &Face<T>) -> Triple<T> {
        Triple::new(
            self.smallest_containing(&face.projections.i),
            self.smallest_containing(&face.projections.j),
            self.smallest_containing(&face.projections.k),
        )
    }

    pub fn faces(&self) -> Vec<Face<T>> {
        let anchored = self.anchored_faces();
        let one = IntervalOrPoint::point(T::one());
        let mut by_triple: BTreeMap<Triple<T>, Face<T>> = BTreeMap::new();
        for i in &anchored {
            for j in &anchored {
                let lo = i.lo.clone() + j.lo.clone();
                let hi = i.hi.clone() + j.hi.clone();
                for k in self.faces_meeting(&lo, &hi) {
                    let Some(mut face) = face_from_triple(i.clone(), j.clone(), k) else {
                        continue;
                    };
                    let canonical = self.canonical_triple(&face);
                    if canonical.i == one || canonical.j == one || by_triple.contains_key(&canonical) {
                        continue;
                    }
                    face.triple = canonical.clone();
                    by_triple.insert(canonical, face);
                }
            }
        }
        by_triple.into_values().collect()
    }
}

/// All faces of ΔP, one representative per torus face, sorted by triple.
pub fn enumerate_faces<T: Scalar>(function: &PiecewiseLinear<T>) -> Vec<Face<T>> {
    BreakpointComplex::new(function).faces()
}

/// Vertices of ΔP in `[0, 1)²`: intersections of the vertical, horizontal and
/// diagonal grid lines, sorted.
pub fn vertices_of_complex<T: Scalar>(function: &PiecewiseLinear<T>) -> Vec<Point<T>> {
    if let Some(ticks) = Ticks::new(function) {
        return integer_vertices(&ticks)
            .into_iter()
            .map(|(a, b)| (ticks.point(a), ticks.point(b)))
            .collect();
    }
    let bk = function.end_points();
    let bk = &bk[..bk.len() - 1];
    let mut out = BTreeSet::new();
    for xi in bk {
        for xj in bk {
            out.insert((xi.clone(), xj.clone()));
            let other = (xj.clone() - xi.clone()).frac();
            out.insert((xi.clone(), other.clone()));
            out.insert((other, xi.clone()));
        }
    }
    out.into_iter().collect()
}

/// [`vertices_of_complex`] in units of `1/L`, sorted.
pub(crate) fn integer_vertices<T: Scalar>(ticks: &Ticks<'_, T>) -> Vec<(i64, i64)> {
    let l = ticks.denom;
    let bk = &ticks.ticks[..ticks.ticks.len() - 1];
    let mut out = Vec::with_capacity(3 * bk.len() * bk.len());
    for &a in bk {
        for &b in bk {
            let other = (b - a).rem_euclid(l);
            out.extend([(a, b), (a, other), (other, a)]);
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn reduce_point<T: Scalar>(p: &Point<T>) -> Point<T> {
    (p.0.frac(), p.1.frac())
}

/// Every face of ΔP that contains `vertex` (or a translate of it), with the
/// translate that is a vertex of that face. A vertex may appear several times
/// in one face only through distinct translates, each giving its own cone.
pub fn faces_containing_vertex<T: Scalar>(
    function: &PiecewiseLinear<T>,
    vertex: &Point<T>,
) -> Result<Vec<(Face<T>, Point<T>)>> {
    let target = reduce_point(vertex);
    if vertices_of_complex(function).binary_search(&target).is_err() {
        return Err(Error::NotAVertex(format_point(vertex)));
    }
    Ok(cones(&enumerate_faces(function))
        .filter(|(_, apex)| reduce_point(apex) == target)
        .map(|(f, apex)| (f.clone(), apex.clone()))
        .collect())
}

/// All `(face, vertex of face)` pairs: the cones at the vertices of ΔP.
pub fn cones<T: Scalar>(faces: &[Face<T>]) -> impl Iterator<Item = (&Face<T>, &Point<T>)> {
    faces.iter().flat_map(|f| f.vertices.iter().map(move |v| (f, v)))
}

/// Sign data of Δπ at a vertex approached from a face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSign<T> {
    pub vertex: Point<T>,
    pub face: Face<T>,
    pub slack: T,
}

/// `Δπ_F` at every cone of the complex.
pub fn vertex_signs<T: Scalar>(function: &PiecewiseLinear<T>, faces: &[Face<T>]) -> Vec<VertexSign<T>> {
    cones(faces)
        .map(|(face, v)| VertexSign {
            vertex: v.clone(),
            face: face.clone(),
            slack: delta_pi_limit_unchecked(function, face, v),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use crate::pwl::LimitTriple;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::ratio(n, d)
    }

    fn iv(a: Q, b: Q) -> IntervalOrPoint<Q> {
        IntervalOrPoint::new(a, b)
    }

    fn pt(a: Q) -> IntervalOrPoint<Q> {
        IntervalOrPoint::point(a)
    }

    fn on_grid(breakpoints: &[(i64, i64)]) -> PiecewiseLinear<Q> {
        let bk: Vec<Q> = breakpoints.iter().map(|&(n, d)| q(n, d)).collect();
        let vals = vec![q(0, 1); bk.len()];
        PiecewiseLinear::from_breakpoints_and_values(bk, vals).unwrap()
    }

    #[test]
    fn singleton_face() {
        let f = face_from_triple(pt(q(0, 1)), pt(q(0, 1)), pt(q(0, 1))).unwrap();
        assert_eq!(f.vertices, vec![(q(0, 1), q(0, 1))]);
        assert_eq!(f.dimension, 0);
    }

    #[test]
    fn infeasible_face() {
        assert!(face_from_triple(iv(q(0, 1), q(1, 10)), iv(q(0, 1), q(1, 10)), iv(q(9, 10), q(1, 1))).is_none());
    }

    #[test]
    fn edge_dimension() {
        let f = face_from_triple(pt(q(0, 1)), iv(q(0, 1), q(1, 2)), iv(q(0, 1), q(1, 2))).unwrap();
        assert_eq!(f.dimension, 1);
        assert_eq!(f.vertices.len(), 2);
    }

    #[test]
    fn cyclic_order_of_pentagon() {
        let f = face_from_triple(
            iv(q(1, 5), q(3, 10)),
            iv(q(3, 4), q(17, 20)),
            iv(q(1, 1), q(6, 5)),
        )
        .unwrap();
        let ring = f.cyclic_vertices();
        for idx in 0..ring.len() {
            let (a, b, c) = (&ring[idx], &ring[(idx + 1) % 5], &ring[(idx + 2) % 5]);
            assert!(cross(a, b, c).is_positive());
        }
        let apex = (q(3, 10), q(17, 20));
        let mut nb = f.neighbors_of(&apex);
        nb.sort();
        assert_eq!(nb, vec![(q(1, 5), q(17, 20)), (q(3, 10), q(3, 4))]);
    }

    #[test]
    fn delta_pi_limit_rejects_foreign_vertex() {
        let g = on_grid(&[(0, 1), (1, 2), (1, 1)]);
        let f = face_from_triple(pt(q(0, 1)), pt(q(0, 1)), pt(q(0, 1))).unwrap();
        assert!(matches!(
            delta_pi_limit(&g, &f, &(q(1, 2), q(0, 1))),
            Err(Error::VertexNotInFace(_))
        ));
    }

    #[test]
    fn zero_face_limit_is_plain_slack() {
        let t = LimitTriple::new;
        let d = PiecewiseLinear::from_breakpoints_and_limits(
            vec![q(0, 1), q(1, 2), q(1, 1)],
            vec![
                t(q(0, 1), q(1, 2), q(1, 2)),
                t(q(1, 1), q(1, 2), q(1, 2)),
                t(q(0, 1), q(1, 2), q(1, 2)),
            ],
        )
        .unwrap();
        for face in enumerate_faces(&d).iter().filter(|f| f.dimension == 0) {
            let v = &face.vertices[0];
            assert_eq!(delta_pi_limit(&d, face, v).unwrap(), delta_pi(&d, &v.0, &v.1));
        }
    }

    #[test]
    fn not_a_vertex_error() {
        let g = on_grid(&[(0, 1), (1, 2), (1, 1)]);
        assert!(matches!(
            faces_containing_vertex(&g, &(q(1, 3), q(0, 1))),
            Err(Error::NotAVertex(_))
        ));
    }

    #[test]
    fn canonical_triples_are_minimal() {
        let g = on_grid(&[(0, 1), (1, 3), (1, 1)]);
        let cx = BreakpointComplex::new(&g);
        for face in enumerate_faces(&g) {
            assert_eq!(cx.canonical_triple(&face), face.triple);
        }
    }
}
