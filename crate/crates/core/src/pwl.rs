//! Z-periodic piecewise-linear functions, possibly discontinuous, stored by
//! their restriction to `[0, 1]`.

use std::collections::BTreeSet;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::scalar::{format_rational, lcm_of_denominators, Scalar};

/// `(π(x), π(x⁺), π(x⁻))` at a point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LimitTriple<T> {
    pub value: T,
    pub right: T,
    pub left: T,
}

impl<T: Scalar> LimitTriple<T> {
    pub fn new(value: T, right: T, left: T) -> Self {
        LimitTriple { value, right, left }
    }

    pub fn constant(value: T) -> Self {
        LimitTriple {
            value: value.clone(),
            right: value.clone(),
            left: value,
        }
    }

    pub fn is_continuous(&self) -> bool {
        self.value == self.right && self.value == self.left
    }

    pub fn get(&self, side: Side) -> &T {
        match side {
            Side::Value => &self.value,
            Side::Right => &self.right,
            Side::Left => &self.left,
        }
    }
}

/// Which entry of a [`LimitTriple`] an evaluation reads: the value, or the
/// limit from the right (`x⁺`) or from the left (`x⁻`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Value,
    Right,
    Left,
}

impl Side {
    /// The side seen from the reflected point `f - x`.
    pub fn flip(self) -> Side {
        match self {
            Side::Value => Side::Value,
            Side::Right => Side::Left,
            Side::Left => Side::Right,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Side::Value => "0",
            Side::Right => "+",
            Side::Left => "-",
        }
    }
}

/// Smallest face of the one-dimensional complex containing a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PieceFace<T> {
    Point(T),
    Interval(T, T),
}

/// The affine function `π_I` on the smallest face `I` containing a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceDescriptor<T> {
    pub face: PieceFace<T>,
    pub slope: T,
    pub value_at_left: T,
}

impl<T: Scalar> PieceDescriptor<T> {
    pub fn eval(&self, x: &T) -> T {
        let lo = match &self.face {
            PieceFace::Point(p) => p,
            PieceFace::Interval(lo, _) => lo,
        };
        self.value_at_left.clone() + self.slope.clone() * (x.clone() - lo.clone())
    }
}

/// Summary record of a function's defining data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Accessors<T> {
    pub end_points: Vec<T>,
    pub values_at_end_points: Vec<T>,
    pub limits_at_end_points: Vec<LimitTriple<T>>,
    pub is_continuous: bool,
    pub number_of_slopes: usize,
}

/// Position of a reduced point `x ∈ [0, 1)` relative to the breakpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Location {
    Breakpoint(usize),
    /// Strictly inside `(x_i, x_{i+1})`.
    Interior(usize),
}

/// A Z-periodic piecewise-linear function.
///
/// Breakpoints `0 = x_0 < … < x_n = 1` are stored together with one
/// [`LimitTriple`] each. On every open interval `(x_i, x_{i+1})` the function
/// interpolates `limits[i].right` and `limits[i+1].left`. The entries at `0`
/// and `1` are stored redundantly and must agree under periodicity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiecewiseLinear<T> {
    breakpoints: Vec<T>,
    limits: Vec<LimitTriple<T>>,
    declared_f: Option<T>,
}

fn check_breakpoints<T: Scalar>(breakpoints: &[T]) -> Result<()> {
    if breakpoints.len() < 2 {
        return Err(Error::Breakpoints("need at least the two breakpoints 0 and 1".into()));
    }
    if !breakpoints[0].is_zero() || !breakpoints[breakpoints.len() - 1].is_one() {
        return Err(Error::Breakpoints(format!(
            "list must start at 0 and end at 1, got {} .. {}",
            breakpoints[0],
            breakpoints[breakpoints.len() - 1]
        )));
    }
    if let Some(w) = breakpoints.windows(2).find(|w| w[0] >= w[1]) {
        return Err(Error::Breakpoints(format!("{} is not below {}", w[0], w[1])));
    }
    Ok(())
}

impl<T: Scalar> PiecewiseLinear<T> {
    /// Continuous function interpolating `values` at `breakpoints`.
    pub fn from_breakpoints_and_values(breakpoints: Vec<T>, values: Vec<T>) -> Result<Self> {
        if breakpoints.len() != values.len() {
            return Err(Error::LengthMismatch(format!(
                "{} breakpoints but {} values",
                breakpoints.len(),
                values.len()
            )));
        }
        let limits = values.into_iter().map(LimitTriple::constant).collect();
        Self::from_breakpoints_and_limits(breakpoints, limits)
    }

    pub fn from_breakpoints_and_limits(breakpoints: Vec<T>, limits: Vec<LimitTriple<T>>) -> Result<Self> {
        check_breakpoints(&breakpoints)?;
        if breakpoints.len() != limits.len() {
            return Err(Error::LengthMismatch(format!(
                "{} breakpoints but {} limit triples",
                breakpoints.len(),
                limits.len()
            )));
        }
        let (first, last) = (&limits[0], &limits[limits.len() - 1]);
        if first.value != last.value {
            return Err(Error::Periodicity(format!("π(0) = {} but π(1) = {}", first.value, last.value)));
        }
        if first.left != last.left {
            return Err(Error::Periodicity(format!(
                "π(0⁻) = {} but π(1⁻) = {}",
                first.left, last.left
            )));
        }
        if first.right != last.right {
            return Err(Error::Periodicity(format!(
                "π(0⁺) = {} but π(1⁺) = {}",
                first.right, last.right
            )));
        }
        Ok(PiecewiseLinear {
            breakpoints,
            limits,
            declared_f: None,
        })
    }

    /// Attaches an explicit `f`, honored by `find_f`.
    pub fn with_declared_f(mut self, f: T) -> Result<Self> {
        if f <= T::zero() || f >= T::one() {
            return Err(Error::FOutOfRange(format_rational(&f)));
        }
        self.declared_f = Some(f);
        Ok(self)
    }

    pub fn without_declared_f(mut self) -> Self {
        self.declared_f = None;
        self
    }

    pub fn declared_f(&self) -> Option<&T> {
        self.declared_f.as_ref()
    }

    pub fn end_points(&self) -> &[T] {
        &self.breakpoints
    }

    pub fn limits_at_end_points(&self) -> &[LimitTriple<T>] {
        &self.limits
    }

    pub fn values_at_end_points(&self) -> Vec<T> {
        self.limits.iter().map(|l| l.value.clone()).collect()
    }

    /// Number of open pieces `(x_i, x_{i+1})`.
    pub fn piece_count(&self) -> usize {
        self.breakpoints.len() - 1
    }

    pub fn is_continuous(&self) -> bool {
        self.limits.iter().all(LimitTriple::is_continuous)
    }

    /// Slope on the open interval `(x_i, x_{i+1})`.
    pub fn slope(&self, i: usize) -> T {
        let dy = self.limits[i + 1].left.clone() - self.limits[i].right.clone();
        let dx = self.breakpoints[i + 1].clone() - self.breakpoints[i].clone();
        dy / dx
    }

    pub fn slopes(&self) -> Vec<T> {
        (0..self.piece_count()).map(|i| self.slope(i)).collect()
    }

    pub fn number_of_slopes(&self) -> usize {
        self.slopes().into_iter().collect::<BTreeSet<_>>().len()
    }

    pub fn accessors(&self) -> Accessors<T> {
        Accessors {
            end_points: self.breakpoints.clone(),
            values_at_end_points: self.values_at_end_points(),
            limits_at_end_points: self.limits.clone(),
            is_continuous: self.is_continuous(),
            number_of_slopes: self.number_of_slopes(),
        }
    }

    /// `x` must already lie in `[0, 1)`.
    pub(crate) fn locate(&self, x: &T) -> Location {
        match self.breakpoints.binary_search(x) {
            Ok(i) => Location::Breakpoint(i),
            Err(i) => Location::Interior(i - 1),
        }
    }

    fn interpolate(&self, i: usize, x: &T) -> T {
        self.limits[i].right.clone() + self.slope(i) * (x.clone() - self.breakpoints[i].clone())
    }

    /// `π(x)` for any rational `x`.
    pub fn evaluate(&self, x: &T) -> T {
        self.one_sided(x, Side::Value)
    }

    /// `π(x)`, `π(x⁺)` or `π(x⁻)`, reducing `x` modulo 1 while keeping the side.
    pub fn one_sided(&self, x: &T, side: Side) -> T {
        let r = x.frac();
        match self.locate(&r) {
            Location::Breakpoint(i) => self.limits[i].get(side).clone(),
            Location::Interior(i) => self.interpolate(i, &r),
        }
    }

    pub fn limits_at(&self, x: &T) -> LimitTriple<T> {
        let r = x.frac();
        match self.locate(&r) {
            Location::Breakpoint(i) => self.limits[i].clone(),
            Location::Interior(i) => LimitTriple::constant(self.interpolate(i, &r)),
        }
    }

    pub fn which_function(&self, x: &T) -> PieceDescriptor<T> {
        let r = x.frac();
        match self.locate(&r) {
            Location::Breakpoint(i) => PieceDescriptor {
                face: PieceFace::Point(self.breakpoints[i].clone()),
                slope: T::zero(),
                value_at_left: self.limits[i].value.clone(),
            },
            Location::Interior(i) => PieceDescriptor {
                face: PieceFace::Interval(self.breakpoints[i].clone(), self.breakpoints[i + 1].clone()),
                slope: self.slope(i),
                value_at_left: self.limits[i].right.clone(),
            },
        }
    }

    /// Whether `x mod 1` is a breakpoint.
    pub fn is_breakpoint(&self, x: &T) -> bool {
        matches!(self.locate(&x.frac()), Location::Breakpoint(_))
    }

    /// Same function with every point of `(1/denominator)Z` made a breakpoint.
    pub fn refine_to_grid(&self, denominator: i64) -> Result<Self> {
        if denominator < 1 {
            return Err(Error::Grid(format!("grid denominator {denominator} must be positive")));
        }
        let mut points: BTreeSet<T> = self.breakpoints.iter().cloned().collect();
        points.extend((0..=denominator).map(|k| T::ratio(k, denominator)));
        let breakpoints: Vec<T> = points.into_iter().collect();
        let n = breakpoints.len() - 1;
        let limits = breakpoints
            .iter()
            .enumerate()
            .map(|(k, x)| {
                let mut triple = self.limits_at(x);
                if k == n {
                    triple = self.limits[self.limits.len() - 1].clone();
                }
                triple
            })
            .collect();
        let mut refined = Self::from_breakpoints_and_limits(breakpoints, limits)?;
        refined.declared_f = self.declared_f.clone();
        Ok(refined)
    }

    /// Pointwise `self + scale · other` on the union of both breakpoint sets.
    pub fn add_scaled(&self, other: &Self, scale: &T) -> Result<Self> {
        let points: BTreeSet<T> = self.breakpoints.iter().chain(other.breakpoints.iter()).cloned().collect();
        let breakpoints: Vec<T> = points.into_iter().collect();
        let n = breakpoints.len() - 1;
        let combine = |a: &T, b: &T| a.clone() + scale.clone() * b.clone();
        let limits = breakpoints
            .iter()
            .enumerate()
            .map(|(k, x)| {
                let (a, b) = if k == n {
                    (self.limits[self.limits.len() - 1].clone(), other.limits[other.limits.len() - 1].clone())
                } else {
                    (self.limits_at(x), other.limits_at(x))
                };
                LimitTriple::new(
                    combine(&a.value, &b.value),
                    combine(&a.right, &b.right),
                    combine(&a.left, &b.left),
                )
            })
            .collect();
        let mut sum = Self::from_breakpoints_and_limits(breakpoints, limits)?;
        sum.declared_f = self.declared_f.clone();
        Ok(sum)
    }

    pub fn is_zero_function(&self) -> bool {
        self.limits
            .iter()
            .all(|l| l.value.is_zero() && l.left.is_zero() && l.right.is_zero())
    }
}

/// Breakpoints as integers `x_i · L` over a common denominator `L` that fits
/// in an `i64` with room to spare, with cached slopes.
pub(crate) struct Ticks<'a, T> {
    function: &'a PiecewiseLinear<T>,
    pub(crate) denom: i64,
    pub(crate) ticks: Vec<i64>,
    slopes: Vec<T>,
}

impl<'a, T: Scalar> Ticks<'a, T> {
    pub(crate) fn new(function: &'a PiecewiseLinear<T>) -> Option<Self> {
        let denom = lcm_of_denominators(function.end_points())
            .to_i64()
            .filter(|l| *l <= 1 << 40)?;
        let scale = T::from_int(denom);
        let ticks = function
            .end_points()
            .iter()
            .map(|x| (x.clone() * scale.clone()).to_big_rational().to_integer().to_i64())
            .collect::<Option<Vec<_>>>()?;
        Some(Ticks {
            function,
            denom,
            ticks,
            slopes: function.slopes(),
        })
    }

    pub(crate) fn point(&self, t: i64) -> T {
        T::ratio(t, self.denom)
    }

    /// `π(t/L)` on the given side, reducing modulo 1.
    pub(crate) fn value(&self, t: i64, side: Side) -> T {
        let r = t.rem_euclid(self.denom);
        match self.ticks.binary_search(&r) {
            Ok(i) => self.function.limits[i].get(side).clone(),
            Err(i) => {
                let i = i - 1;
                self.function.limits[i].right.clone() + self.slopes[i].clone() * T::ratio(r - self.ticks[i], self.denom)
            }
        }
    }
}
