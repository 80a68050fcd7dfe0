//! Integer points of rational polyhedra by Fourier–Motzkin elimination.
//!
//! Every constraint is carried internally as `a·x ≤ b` with integer data. After
//! each elimination step a constraint is divided by the gcd of its normal and
//! its bound is floored; this can shrink the rational polyhedron but never
//! loses an integer point, and it keeps homogeneous systems exact.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{smith_normal_form, IntMatrix, LatticeError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sense {
    AtLeast,
    AtMost,
}

/// `normal · x (≥ | ≤) bound`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub normal: Vec<BigInt>,
    pub bound: BigInt,
    pub sense: Sense,
}

impl Constraint {
    pub fn is_satisfied(&self, x: &[BigInt]) -> bool {
        let lhs: BigInt = self.normal.iter().zip(x).map(|(a, v)| a * v).sum();
        match self.sense {
            Sense::AtLeast => lhs >= self.bound,
            Sense::AtMost => lhs <= self.bound,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPolyhedron {
    dim: usize,
    constraints: Vec<Constraint>,
}

impl RationalPolyhedron {
    /// The whole space of the given dimension.
    pub fn new(dim: usize) -> Self {
        RationalPolyhedron {
            dim,
            constraints: Vec::new(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn push(&mut self, c: Constraint) -> Result<(), LatticeError> {
        if c.normal.len() != self.dim {
            return Err(LatticeError::DimensionMismatch {
                expected: self.dim,
                found: c.normal.len(),
            });
        }
        self.constraints.push(c);
        Ok(())
    }

    /// Builder form of [`push`](Self::push) for small literal systems.
    ///
    /// Panics if the normal does not have the ambient dimension.
    pub fn constrain(mut self, normal: &[i64], sense: Sense, bound: i64) -> Self {
        self.push(Constraint {
            normal: normal.iter().map(|&v| BigInt::from(v)).collect(),
            bound: BigInt::from(bound),
            sense,
        })
        .expect("constraint dimension");
        self
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        x.len() == self.dim && self.constraints.iter().all(|c| c.is_satisfied(x))
    }

    fn as_upper_bounds(&self) -> Vec<Ineq> {
        self.constraints
            .iter()
            .map(|c| match c.sense {
                Sense::AtMost => Ineq {
                    a: c.normal.clone(),
                    b: c.bound.clone(),
                },
                Sense::AtLeast => Ineq {
                    a: c.normal.iter().map(|v| -v).collect(),
                    b: -&c.bound,
                },
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticePoints {
    /// Every integer point, each once, in lexicographic order.
    Bounded(Vec<Vec<BigInt>>),
    Unbounded,
    Empty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeCount {
    Bounded(u64),
    Unbounded,
    Empty,
}

impl LatticeCount {
    /// Number of points if finite (zero when empty).
    pub fn finite(self) -> Option<u64> {
        match self {
            LatticeCount::Bounded(n) => Some(n),
            LatticeCount::Empty => Some(0),
            LatticeCount::Unbounded => None,
        }
    }
}

pub fn lattice_points(p: &RationalPolyhedron) -> LatticePoints {
    let mut points = Vec::new();
    match scan(p, |x| {
        points.push(x.to_vec());
        ControlFlow::Continue(())
    }) {
        Shape::Unbounded => LatticePoints::Unbounded,
        Shape::Empty => LatticePoints::Empty,
        Shape::Bounded if points.is_empty() => LatticePoints::Empty,
        Shape::Bounded => LatticePoints::Bounded(points),
    }
}

pub fn count_lattice_points(p: &RationalPolyhedron) -> LatticeCount {
    let mut n = 0u64;
    match scan(p, |_| {
        n += 1;
        ControlFlow::Continue(())
    }) {
        Shape::Unbounded => LatticeCount::Unbounded,
        Shape::Empty => LatticeCount::Empty,
        Shape::Bounded if n == 0 => LatticeCount::Empty,
        Shape::Bounded => LatticeCount::Bounded(n),
    }
}

/// Per-coordinate integer bounds of `p`, from projecting onto each axis.
/// `None` for a side means unbounded on that side; `Err` if no rational point exists.
pub fn coordinate_bounds(
    p: &RationalPolyhedron,
) -> Result<Vec<(Option<BigInt>, Option<BigInt>)>, LatticeError> {
    let rows = normalize_all(p.as_upper_bounds()).map_err(|_| LatticeError::Infeasible)?;
    (0..p.dim)
        .map(|i| {
            let mut sys = rows.clone();
            for j in (0..p.dim).filter(|&j| j != i) {
                sys = eliminate(&sys, j).map_err(|_| LatticeError::Infeasible)?;
            }
            let (mut lo, mut hi): (Option<BigInt>, Option<BigInt>) = (None, None);
            for r in &sys {
                let c = &r.a[i];
                if c.is_positive() {
                    let v = r.b.div_floor(c);
                    hi = Some(hi.map_or(v.clone(), |h| h.min(v)));
                } else if c.is_negative() {
                    let v = ceil_div(&r.b, c);
                    lo = Some(lo.map_or(v.clone(), |l| l.max(v)));
                }
            }
            if let (Some(l), Some(h)) = (&lo, &hi) {
                if l > h {
                    return Err(LatticeError::Infeasible);
                }
            }
            Ok((lo, hi))
        })
        .collect()
}

enum Shape {
    Bounded,
    Unbounded,
    Empty,
}

/// Visits every integer point of a bounded polyhedron; otherwise decides
/// between `Unbounded` and `Empty` without visiting anything.
fn scan(p: &RationalPolyhedron, visit: impl FnMut(&[BigInt]) -> ControlFlow<()>) -> Shape {
    let Ok(rows) = normalize_all(p.as_upper_bounds()) else {
        return Shape::Empty;
    };
    if recession_direction(&rows, p.dim).is_none() {
        let Ok(levels) = projection_levels(rows, p.dim) else {
            return Shape::Empty;
        };
        let mut x = Vec::with_capacity(p.dim);
        let mut visit = visit;
        let _ = walk(&levels, &mut x, &mut visit);
        Shape::Bounded
    } else if integer_feasible(rows, p.dim) {
        Shape::Unbounded
    } else {
        Shape::Empty
    }
}

/// `a · x ≤ b`
#[derive(Clone, Debug, PartialEq, Eq)]
struct Ineq {
    a: Vec<BigInt>,
    b: BigInt,
}

struct Infeasible;

fn ceil_div(b: &BigInt, a: &BigInt) -> BigInt {
    -((-b).div_floor(a))
}

/// Divides by the normal's gcd (flooring the bound), drops trivial rows, and
/// keeps only the tightest bound per normal.
fn normalize_all(rows: Vec<Ineq>) -> Result<Vec<Ineq>, Infeasible> {
    let mut best: BTreeMap<Vec<BigInt>, BigInt> = BTreeMap::new();
    for Ineq { mut a, mut b } in rows {
        let g = a.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
        if g.is_zero() {
            if b.is_negative() {
                return Err(Infeasible);
            }
            continue;
        }
        if !g.is_one() {
            for v in a.iter_mut() {
                *v /= &g;
            }
            b = b.div_floor(&g);
        }
        match best.get_mut(&a) {
            Some(cur) if *cur <= b => {}
            Some(cur) => *cur = b,
            None => {
                best.insert(a, b);
            }
        }
    }
    Ok(best.into_iter().map(|(a, b)| Ineq { a, b }).collect())
}

fn eliminate(rows: &[Ineq], var: usize) -> Result<Vec<Ineq>, Infeasible> {
    let mut out = Vec::new();
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for r in rows {
        if r.a[var].is_positive() {
            pos.push(r);
        } else if r.a[var].is_negative() {
            neg.push(r);
        } else {
            out.push(r.clone());
        }
    }
    for p in &pos {
        for n in &neg {
            let alpha = &p.a[var];
            let beta = -&n.a[var];
            let a = p
                .a
                .iter()
                .zip(&n.a)
                .map(|(x, y)| &beta * x + alpha * y)
                .collect();
            let b = &beta * &p.b + alpha * &n.b;
            out.push(Ineq { a, b });
        }
    }
    normalize_all(out)
}

/// `levels[k]` constrains only `x_0 .. x_{k-1}`; `levels[dim]` is the input.
fn projection_levels(rows: Vec<Ineq>, dim: usize) -> Result<Vec<Vec<Ineq>>, Infeasible> {
    let mut levels = vec![Vec::new(); dim + 1];
    levels[dim] = rows;
    for k in (0..dim).rev() {
        levels[k] = eliminate(&levels[k + 1], k)?;
    }
    Ok(levels)
}

fn walk(
    levels: &[Vec<Ineq>],
    x: &mut Vec<BigInt>,
    visit: &mut impl FnMut(&[BigInt]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let k = x.len();
    if k + 1 == levels.len() {
        return visit(x);
    }
    let (mut lo, mut hi): (Option<BigInt>, Option<BigInt>) = (None, None);
    for r in &levels[k + 1] {
        let rhs: BigInt = &r.b - r.a[..k].iter().zip(x.iter()).map(|(a, v)| a * v).sum::<BigInt>();
        let c = &r.a[k];
        if c.is_zero() {
            if rhs.is_negative() {
                return ControlFlow::Continue(());
            }
        } else if c.is_positive() {
            let v = rhs.div_floor(c);
            if hi.as_ref().is_none_or(|h| v < *h) {
                hi = Some(v);
            }
        } else {
            let v = ceil_div(&rhs, c);
            if lo.as_ref().is_none_or(|l| v > *l) {
                lo = Some(v);
            }
        }
    }
    let (Some(lo), Some(hi)) = (lo, hi) else {
        unreachable!("bounded polyhedron produced an open coordinate interval");
    };
    let mut v = lo;
    while v <= hi {
        x.push(v.clone());
        let flow = walk(levels, x, visit);
        x.pop();
        flow?;
        v += 1;
    }
    ControlFlow::Continue(())
}

/// A nonzero primitive integer `u` with `a·u ≤ 0` for every row, if one exists.
fn recession_direction(rows: &[Ineq], dim: usize) -> Option<Vec<BigInt>> {
    let cone: Vec<Ineq> = rows
        .iter()
        .map(|r| Ineq {
            a: r.a.clone(),
            b: BigInt::zero(),
        })
        .collect();
    for axis in 0..dim {
        // project the cone onto x_axis, remembering each stage for back-substitution
        let order: Vec<usize> = (0..dim).filter(|&j| j != axis).collect();
        let mut stages = vec![cone.clone()];
        for &j in &order {
            let next = eliminate(stages.last().unwrap(), j).ok()?;
            stages.push(next);
        }
        let last = stages.last().unwrap();
        for sign in [1i64, -1] {
            let open = last.iter().all(|r| (&r.a[axis] * sign) <= BigInt::zero());
            if !open {
                continue;
            }
            let mut x: Vec<Option<BigRational>> = vec![None; dim];
            x[axis] = Some(BigRational::from_integer(sign.into()));
            for (stage, &j) in stages.iter().zip(&order).rev() {
                x[j] = Some(pick_in_interval(stage, j, &x));
            }
            let x: Vec<BigRational> = x.into_iter().map(Option::unwrap).collect();
            return Some(primitive_integer(&x));
        }
    }
    None
}

fn pick_in_interval(rows: &[Ineq], var: usize, x: &[Option<BigRational>]) -> BigRational {
    let (mut lo, mut hi): (Option<BigRational>, Option<BigRational>) = (None, None);
    for r in rows {
        let c = &r.a[var];
        if c.is_zero() {
            continue;
        }
        let mut rhs = BigRational::from_integer(r.b.clone());
        for (j, a) in r.a.iter().enumerate() {
            if j != var && !a.is_zero() {
                if let Some(v) = &x[j] {
                    rhs -= v * BigRational::from_integer(a.clone());
                }
            }
        }
        let bound = rhs / BigRational::from_integer(c.clone());
        if c.is_positive() {
            hi = Some(hi.map_or(bound.clone(), |h| h.min(bound)));
        } else {
            lo = Some(lo.map_or(bound.clone(), |l| l.max(bound)));
        }
    }
    match (lo, hi) {
        (Some(l), _) => l,
        (None, Some(h)) => h,
        (None, None) => BigRational::zero(),
    }
}

fn primitive_integer(x: &[BigRational]) -> Vec<BigInt> {
    let lcm = x.iter().fold(BigInt::one(), |l, v| l.lcm(v.denom()));
    let ints: Vec<BigInt> = x.iter().map(|v| (v * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
    ints.into_iter().map(|v| v / &g).collect()
}

/// Whether `{a·x ≤ b}` has an integer point, for systems that may be unbounded.
///
/// With `u` a primitive recession direction, a unimodular change of basis makes
/// `u` the last coordinate. Every row then has a nonpositive last coefficient,
/// so each fiber over the projection is an interval unbounded above and the
/// projection is cut out by the rows orthogonal to `u` alone.
fn integer_feasible(rows: Vec<Ineq>, dim: usize) -> bool {
    if rows.is_empty() {
        return true;
    }
    let Some(u) = recession_direction(&rows, dim) else {
        let Ok(levels) = projection_levels(rows, dim) else {
            return false;
        };
        let mut found = false;
        let _ = walk(&levels, &mut Vec::new(), &mut |_| {
            found = true;
            ControlFlow::Break(())
        });
        return found;
    };
    let basis = completing_basis(&u);
    let reduced: Vec<Ineq> = rows
        .into_iter()
        .filter_map(|r| {
            let a: Vec<BigInt> = (0..dim)
                .map(|c| (0..dim).map(|k| &r.a[k] * &basis[(k, c)]).sum())
                .collect();
            debug_assert!(!a[dim - 1].is_positive());
            a[dim - 1].is_zero().then(|| Ineq {
                a: a[..dim - 1].to_vec(),
                b: r.b,
            })
        })
        .collect();
    match normalize_all(reduced) {
        Ok(rows) => integer_feasible(rows, dim - 1),
        Err(Infeasible) => false,
    }
}

/// Unimodular matrix whose last column is the primitive vector `u`.
fn completing_basis(u: &[BigInt]) -> IntMatrix {
    let d = u.len();
    let col = IntMatrix::from_fn(d, 1, |r, _| u[r].clone());
    let snf = smith_normal_form(&col);
    debug_assert!(snf.diag[0].is_one());
    let w = snf
        .left
        .inverse_unimodular()
        .expect("left Smith factor is unimodular");
    let sign = snf.right[(0, 0)].clone();
    IntMatrix::from_fn(d, d, |r, c| {
        if c + 1 == d {
            &w[(r, 0)] * &sign
        } else {
            w[(r, c + 1)].clone()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[&[i64]]) -> Vec<Vec<BigInt>> {
        v.iter()
            .map(|p| p.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn unit_square() {
        let p = RationalPolyhedron::new(2)
            .constrain(&[1, 0], Sense::AtLeast, 0)
            .constrain(&[1, 0], Sense::AtMost, 1)
            .constrain(&[0, 1], Sense::AtLeast, 0)
            .constrain(&[0, 1], Sense::AtMost, 1);
        assert_eq!(
            lattice_points(&p),
            LatticePoints::Bounded(pts(&[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]))
        );
    }

    #[test]
    fn half_line_is_unbounded() {
        let p = RationalPolyhedron::new(1).constrain(&[1], Sense::AtLeast, 0);
        assert_eq!(lattice_points(&p), LatticePoints::Unbounded);
    }

    #[test]
    fn triangle_has_six_points() {
        let p = RationalPolyhedron::new(2)
            .constrain(&[1, 0], Sense::AtLeast, 0)
            .constrain(&[0, 1], Sense::AtLeast, 0)
            .constrain(&[1, 1], Sense::AtMost, 2);
        assert_eq!(count_lattice_points(&p), LatticeCount::Bounded(6));
    }

    #[test]
    fn unbounded_strip_without_integer_points_is_empty() {
        // 1 ≤ 3y ≤ 2 has no integer y, for any x
        let p = RationalPolyhedron::new(2)
            .constrain(&[0, 3], Sense::AtLeast, 1)
            .constrain(&[0, 3], Sense::AtMost, 2);
        assert_eq!(lattice_points(&p), LatticePoints::Empty);

        // the slanted version x - y in [1/2, 1/2] after scaling
        let q = RationalPolyhedron::new(2)
            .constrain(&[2, -2], Sense::AtLeast, 1)
            .constrain(&[2, -2], Sense::AtMost, 1);
        assert_eq!(lattice_points(&q), LatticePoints::Empty);

        let r = RationalPolyhedron::new(2)
            .constrain(&[2, -2], Sense::AtLeast, 2)
            .constrain(&[2, -2], Sense::AtMost, 2);
        assert_eq!(lattice_points(&r), LatticePoints::Unbounded);
    }

    #[test]
    fn infeasible_and_trivial_systems() {
        let p = RationalPolyhedron::new(1)
            .constrain(&[1], Sense::AtLeast, 2)
            .constrain(&[1], Sense::AtMost, 1);
        assert_eq!(lattice_points(&p), LatticePoints::Empty);

        let zero_dim = RationalPolyhedron::new(0);
        assert_eq!(lattice_points(&zero_dim), LatticePoints::Bounded(vec![vec![]]));

        assert_eq!(lattice_points(&RationalPolyhedron::new(2)), LatticePoints::Unbounded);

        // a rational point but no integer point, bounded
        let q = RationalPolyhedron::new(1)
            .constrain(&[2], Sense::AtLeast, 1)
            .constrain(&[2], Sense::AtMost, 1);
        assert_eq!(lattice_points(&q), LatticePoints::Empty);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let mut p = RationalPolyhedron::new(2);
        let err = p.push(Constraint {
            normal: vec![BigInt::one()],
            bound: BigInt::zero(),
            sense: Sense::AtMost,
        });
        assert!(matches!(err, Err(LatticeError::DimensionMismatch { .. })));
    }

    #[test]
    fn coordinate_bounds_of_triangle() {
        let p = RationalPolyhedron::new(2)
            .constrain(&[1, 0], Sense::AtLeast, 0)
            .constrain(&[0, 1], Sense::AtLeast, 0)
            .constrain(&[1, 1], Sense::AtMost, 2);
        let b = coordinate_bounds(&p).unwrap();
        let two = Some(BigInt::from(2));
        assert_eq!(b, vec![(Some(BigInt::zero()), two.clone()), (Some(BigInt::zero()), two)]);
    }
}
