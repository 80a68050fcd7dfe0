//! Line-bundle cohomology on smooth complete toric varieties.
//!
//! `H^p(X, O(D))` is a sum over characters `m ∈ M` of reduced homology of
//! `supp(D + div χ^m)`. That complex depends only on the sign pattern of
//! `r = D + (⟨m, v_i⟩)_i`, so the sum is regrouped per pattern: for each of the
//! `2^{#rays}` patterns, the homology of its support complex is computed once
//! and multiplied by the number of characters whose `r` has that pattern. A
//! reduced homology class in degree `q` contributes to `H^{n−1−q}`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::fan::{Fan, RaySet};
use crate::lattice::{
    cokernel_presentation, count_lattice_points, Constraint, IntMatrix, LatticeCount,
    RationalPolyhedron, Sense,
};
use crate::support::{reduced_homology, support_complex, Coefficients, SignPattern, SupportError};

/// Default cap on the number of rays for the `2^{#rays}` pattern sweep.
pub const DEFAULT_MAX_RAYS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("fan is not smooth and complete: {}", .0.join("; "))]
    NotValidated(Vec<String>),
    #[error("the pattern sweep is limited to {cap} rays, this fan has {rays}")]
    TooManyRays { rays: usize, cap: usize },
    #[error("divisor has {found} coefficients but the fan has {expected} rays")]
    LengthMismatch { expected: usize, found: usize },
    #[error("class has {found} coordinates but Pic has rank {expected}")]
    ClassRank { expected: usize, found: usize },
    #[error("chamber of pattern {pattern} is unbounded although its support complex has homology")]
    UnboundedChamber { pattern: String },
    #[error("Picard group presentation is inconsistent: {0}")]
    Picard(String),
    #[error("operation requires a Del Pezzo fan V^n")]
    NotDelPezzo,
    #[error("column index {index} is outside 1..={max}")]
    ColumnIndex { index: usize, max: usize },
    #[error("coefficient {value} at position {position} is not positive")]
    NonPositiveCoefficient { position: usize, value: i64 },
    #[error("expected 1 or {expected} coefficients, got {found}")]
    CoefficientCount { expected: usize, found: usize },
    #[error("search box must be at least 1")]
    EmptyBox,
    #[error("no ample anticanonical class: {0}")]
    NoPolarization(String),
    #[error(transparent)]
    Support(#[from] SupportError),
}

/// Coefficients `r_i` of `Σ r_i E_i`, positional in ray order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorVector(pub Vec<BigInt>);

impl DivisorVector {
    pub fn from_i64(v: &[i64]) -> Self {
        DivisorVector(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero(len: usize) -> Self {
        DivisorVector(vec![BigInt::zero(); len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.0
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        DivisorVector(self.0.iter().map(|v| v * k).collect())
    }
}

impl Add for &DivisorVector {
    type Output = DivisorVector;

    fn add(self, rhs: &DivisorVector) -> DivisorVector {
        assert_eq!(self.len(), rhs.len());
        DivisorVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &DivisorVector {
    type Output = DivisorVector;

    fn sub(self, rhs: &DivisorVector) -> DivisorVector {
        assert_eq!(self.len(), rhs.len());
        DivisorVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &DivisorVector {
    type Output = DivisorVector;

    fn neg(self) -> DivisorVector {
        DivisorVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for DivisorVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Coordinates in the Picard basis of a [`PicardPresentation`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass(pub Vec<BigInt>);

impl DivisorClass {
    pub fn from_i64(v: &[i64]) -> Self {
        DivisorClass(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn coordinates(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;

    fn neg(self) -> DivisorClass {
        DivisorClass(self.0.iter().map(|a| -a).collect())
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;

    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        assert_eq!(self.0.len(), rhs.0.len());
        DivisorClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;

    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        self + &(-rhs)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// `Pic(X) = Z^{#rays} / {(⟨m, v_i⟩)_i}`.
///
/// The basis is `{E_j : j ∉ σ₀}` for the reference cone `σ₀` (the first unimodular
/// maximal cone); a divisor's class is obtained by adding the principal divisor
/// that clears its coefficients on `σ₀`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicardPresentation {
    pub rank: usize,
    pub reference_cone: RaySet,
    /// Ray indices `j ∉ σ₀`, ascending; `E_j` is the `k`-th basis class.
    pub basis: Vec<usize>,
    rays: Vec<Vec<i64>>,
    dual: Vec<(usize, Vec<BigInt>)>,
}

impl PicardPresentation {
    pub fn class_of(&self, d: &DivisorVector) -> Result<DivisorClass, CohomologyError> {
        self.check_len(d)?;
        let cleared = self.clear_reference(d);
        Ok(DivisorClass(
            self.basis.iter().map(|&j| cleared[j].clone()).collect(),
        ))
    }

    /// The representative supported on the basis divisors.
    pub fn representative(&self, c: &DivisorClass) -> Result<DivisorVector, CohomologyError> {
        if c.0.len() != self.rank {
            return Err(CohomologyError::ClassRank {
                expected: self.rank,
                found: c.0.len(),
            });
        }
        let mut v = DivisorVector::zero(self.rays.len());
        for (k, &j) in self.basis.iter().enumerate() {
            v.0[j] = c.0[k].clone();
        }
        Ok(v)
    }

    /// `(⟨m, v_i⟩)_i`
    pub fn principal(&self, m: &[BigInt]) -> DivisorVector {
        DivisorVector(
            self.rays
                .iter()
                .map(|r| r.iter().zip(m).map(|(&a, b)| BigInt::from(a) * b).sum())
                .collect(),
        )
    }

    fn clear_reference(&self, d: &DivisorVector) -> Vec<BigInt> {
        // m = −Σ_{i∈σ₀} d_i m_i kills every σ₀ coefficient
        let n = self.rays[0].len();
        let mut m = vec![BigInt::zero(); n];
        for (i, mi) in &self.dual {
            for (acc, v) in m.iter_mut().zip(mi) {
                *acc -= &d.0[*i] * v;
            }
        }
        (d + &self.principal(&m)).0
    }

    fn check_len(&self, d: &DivisorVector) -> Result<(), CohomologyError> {
        if d.len() != self.rays.len() {
            return Err(CohomologyError::LengthMismatch {
                expected: self.rays.len(),
                found: d.len(),
            });
        }
        Ok(())
    }
}

pub fn picard_presentation(fan: &Fan) -> Result<PicardPresentation, CohomologyError> {
    require_valid(fan)?;
    let reference = fan
        .reference_cone()
        .ok_or_else(|| CohomologyError::Picard("no unimodular maximal cone".into()))?;
    let dual = fan
        .dual_basis(reference)
        .ok_or_else(|| CohomologyError::Picard("reference cone is not unimodular".into()))?;

    // cross-check against the Smith presentation of the cokernel of m ↦ (⟨m, v_i⟩)_i
    let map = IntMatrix::from_rows(fan.dimension(), fan.rays());
    let coker = cokernel_presentation(&map);
    let expected = fan.ray_count() - fan.dimension();
    if coker.free_rank != expected || !coker.torsion.is_empty() {
        return Err(CohomologyError::Picard(format!(
            "cokernel has free rank {} and torsion {:?}, expected free rank {expected}",
            coker.free_rank, coker.torsion
        )));
    }
    let basis: Vec<usize> = (0..fan.ray_count())
        .filter(|&j| !reference.contains(j))
        .collect();
    Ok(PicardPresentation {
        rank: basis.len(),
        reference_cone: reference,
        basis,
        rays: fan.rays().to_vec(),
        dual,
    })
}

/// `K = −Σ E_i`
pub fn canonical_divisor(fan: &Fan) -> DivisorVector {
    DivisorVector(vec![BigInt::from(-1); fan.ray_count()])
}

/// One nonzero term of the pattern sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternContribution {
    pub pattern: SignPattern,
    /// Reduced homology degree `q` of the support complex.
    pub homology_degree: isize,
    /// Cohomology degree `p = n − 1 − q` receiving the contribution.
    pub cohomology_degree: usize,
    pub rank: usize,
    /// Characters `m` whose `D + div χ^m` has this pattern.
    pub points: u64,
}

impl PatternContribution {
    pub fn amount(&self) -> u64 {
        self.rank as u64 * self.points
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyTable {
    /// `h[p] = dim H^p`, `p = 0..=n`.
    pub h: Vec<u64>,
    pub euler: i64,
    pub breakdown: Vec<PatternContribution>,
}

impl CohomologyTable {
    pub fn h(&self, p: usize) -> u64 {
        self.h.get(p).copied().unwrap_or(0)
    }
}

#[derive(Clone, Debug)]
struct PatternHomology {
    pattern: SignPattern,
    ranks: Vec<(isize, usize)>,
}

/// Pattern homology precomputed once per fan; cheap to query per divisor.
#[derive(Clone, Debug)]
pub struct CohomologyEngine {
    fan: Fan,
    patterns: Vec<PatternHomology>,
}

impl CohomologyEngine {
    pub fn new(fan: &Fan) -> Result<Self, CohomologyError> {
        Self::with_ray_cap(fan, DEFAULT_MAX_RAYS)
    }

    pub fn with_ray_cap(fan: &Fan, cap: usize) -> Result<Self, CohomologyError> {
        require_valid(fan)?;
        let rays = fan.ray_count();
        if rays > cap {
            return Err(CohomologyError::TooManyRays { rays, cap });
        }
        let patterns: Vec<PatternHomology> = (0..1u64 << rays)
            .into_par_iter()
            .filter_map(|bits| {
                let pattern = SignPattern::new(rays, RaySet::from_bits(bits)).ok()?;
                let complex = support_complex(fan, &pattern);
                let h = reduced_homology(&complex, Coefficients::Rationals);
                let ranks: Vec<(isize, usize)> = h.nonzero_ranks().collect();
                (!ranks.is_empty()).then_some(PatternHomology { pattern, ranks })
            })
            .collect();
        Ok(CohomologyEngine {
            fan: fan.clone(),
            patterns,
        })
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    /// Patterns whose support complex has nonzero reduced rational homology.
    pub fn homologically_active_patterns(&self) -> usize {
        self.patterns.len()
    }

    pub fn cohomology(&self, d: &DivisorVector) -> Result<CohomologyTable, CohomologyError> {
        let rays = self.fan.ray_count();
        if d.len() != rays {
            return Err(CohomologyError::LengthMismatch {
                expected: rays,
                found: d.len(),
            });
        }
        let n = self.fan.dimension();
        let counts: Vec<Result<u64, CohomologyError>> = self
            .patterns
            .par_iter()
            .map(|ph| {
                let chamber = chamber(&self.fan, d, &ph.pattern);
                match count_lattice_points(&chamber) {
                    LatticeCount::Bounded(k) => Ok(k),
                    LatticeCount::Empty => Ok(0),
                    LatticeCount::Unbounded => Err(CohomologyError::UnboundedChamber {
                        pattern: ph.pattern.to_string(),
                    }),
                }
            })
            .collect();

        let mut h = vec![0u64; n + 1];
        let mut breakdown = Vec::new();
        for (ph, count) in self.patterns.iter().zip(counts) {
            let points = count?;
            if points == 0 {
                continue;
            }
            for &(q, rank) in &ph.ranks {
                let p = (n as isize - 1 - q) as usize;
                let c = PatternContribution {
                    pattern: ph.pattern,
                    homology_degree: q,
                    cohomology_degree: p,
                    rank,
                    points,
                };
                h[p] += c.amount();
                breakdown.push(c);
            }
        }
        let euler = h
            .iter()
            .enumerate()
            .map(|(p, &v)| if p % 2 == 0 { v as i64 } else { -(v as i64) })
            .sum();
        Ok(CohomologyTable { h, euler, breakdown })
    }

    /// `h^1(l1 − l2)`: extensions `0 → L(l1) → E → L(l2) → 0`.
    pub fn ext_dimension(
        &self,
        l1: &DivisorVector,
        l2: &DivisorVector,
    ) -> Result<u64, CohomologyError> {
        self.check_len(l1)?;
        self.check_len(l2)?;
        Ok(self.cohomology(&(l1 - l2))?.h(1))
    }

    fn check_len(&self, d: &DivisorVector) -> Result<(), CohomologyError> {
        if d.len() != self.fan.ray_count() {
            return Err(CohomologyError::LengthMismatch {
                expected: self.fan.ray_count(),
                found: d.len(),
            });
        }
        Ok(())
    }
}

/// Characters `m` such that `d + (⟨m, v_i⟩)_i` has the given sign pattern.
pub fn chamber(fan: &Fan, d: &DivisorVector, pattern: &SignPattern) -> RationalPolyhedron {
    let mut p = RationalPolyhedron::new(fan.dimension());
    for (i, ray) in fan.rays().iter().enumerate() {
        let normal: Vec<BigInt> = ray.iter().map(|&v| BigInt::from(v)).collect();
        let c = if pattern.nonneg().contains(i) {
            Constraint {
                normal,
                bound: -&d.0[i],
                sense: Sense::AtLeast,
            }
        } else {
            Constraint {
                normal,
                bound: -&d.0[i] - 1,
                sense: Sense::AtMost,
            }
        };
        p.push(c).expect("ray has the fan dimension");
    }
    p
}

pub fn cohomology(fan: &Fan, d: &DivisorVector) -> Result<CohomologyTable, CohomologyError> {
    CohomologyEngine::new(fan)?.cohomology(d)
}

pub fn ext_dimension(
    fan: &Fan,
    l1: &DivisorVector,
    l2: &DivisorVector,
) -> Result<u64, CohomologyError> {
    CohomologyEngine::new(fan)?.ext_dimension(l1, l2)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H1Class {
    pub class: DivisorClass,
    /// Lexicographically smallest vector of the class inside the search box.
    pub representative: DivisorVector,
    pub h1: u64,
}

/// Every class with a representative in `[−B, B]^{#rays}` and nonzero `h^1`,
/// ordered by smallest representative.
pub fn search_h1(engine: &CohomologyEngine, bound: u32) -> Result<Vec<H1Class>, CohomologyError> {
    if bound == 0 {
        return Err(CohomologyError::EmptyBox);
    }
    let pic = picard_presentation(engine.fan())?;
    let rays = engine.fan().ray_count();
    let b = bound as i64;
    let mut seen: HashMap<DivisorClass, usize> = HashMap::new();
    let mut classes: Vec<(DivisorClass, DivisorVector)> = Vec::new();
    let mut current = vec![-b; rays];
    loop {
        let v = DivisorVector::from_i64(&current);
        let class = pic.class_of(&v)?;
        if !seen.contains_key(&class) {
            seen.insert(class.clone(), classes.len());
            classes.push((class, v));
        }
        // odometer, last coordinate fastest: lexicographic order
        let Some(k) = (0..rays).rev().find(|&k| current[k] < b) else {
            break;
        };
        current[k] += 1;
        for c in current.iter_mut().skip(k + 1) {
            *c = -b;
        }
    }
    let results: Vec<Result<Option<H1Class>, CohomologyError>> = classes
        .into_par_iter()
        .map(|(class, representative)| {
            let h1 = engine.cohomology(&representative)?.h(1);
            Ok((h1 > 0).then_some(H1Class {
                class,
                representative,
                h1,
            }))
        })
        .collect();
    results.into_iter().filter_map(Result::transpose).collect()
}

/// The divisor `Σ_{j ≠ i, n+1+i} c_j E_j` on `V^n`: zero in columns `i` and
/// `n+1+i`, positive coefficients elsewhere.
///
/// `coeffs` is either one value used everywhere, or `2n` values for the
/// remaining positions in ray order.
pub fn prop43_divisor(fan: &Fan, i: usize, coeffs: &[i64]) -> Result<DivisorVector, CohomologyError> {
    if !fan.is_del_pezzo() {
        return Err(CohomologyError::NotDelPezzo);
    }
    let n = fan.dimension();
    if i == 0 || i > n + 1 {
        return Err(CohomologyError::ColumnIndex { index: i, max: n + 1 });
    }
    if coeffs.len() != 1 && coeffs.len() != 2 * n {
        return Err(CohomologyError::CoefficientCount {
            expected: 2 * n,
            found: coeffs.len(),
        });
    }
    let mut out = Vec::with_capacity(2 * n + 2);
    let mut next = 0;
    for j in 1..=2 * n + 2 {
        if j == i || j == n + 1 + i {
            out.push(0);
            continue;
        }
        let c = coeffs[if coeffs.len() == 1 { 0 } else { next }];
        next += 1;
        if c <= 0 {
            return Err(CohomologyError::NonPositiveCoefficient { position: j, value: c });
        }
        out.push(c);
    }
    Ok(DivisorVector::from_i64(&out))
}

pub(crate) fn require_valid(fan: &Fan) -> Result<(), CohomologyError> {
    let report = fan.validate();
    if report.is_valid() {
        Ok(())
    } else {
        Err(CohomologyError::NotValidated(report.diagnostics))
    }
}
