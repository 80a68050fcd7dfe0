//! The Chow ring of `V^n` as `Z[E_1, …, E_{2n+2}] / (monomial vanishings + linear relations)`.
//!
//! Monomials vanish when their index set splits as `I ⊆ {1..n+1}`,
//! `J ⊆ {n+2..2n+2}` (shifted back to `{1..n+1}`) with `|I| > n/2`, `|J| > n/2`,
//! or `I ∩ J ≠ ∅`. Every other monomial is supported on a cone, and a monomial
//! with a repeated factor is rewritten through the linear relation attached to
//! the dual basis of a maximal cone containing its support. Each graded piece is
//! then the span of square-free cone monomials modulo the rewritten relations,
//! solved by exact row reduction.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::cohomology::{picard_presentation, CohomologyError, DivisorClass, DivisorVector, PicardPresentation};
use crate::fan::{Fan, RaySet};
use crate::lattice::{cokernel_presentation, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChowError {
    #[error("the Chow presentation is only available for Del Pezzo fans V^n")]
    NotDelPezzo,
    #[error("elements belong to different rings")]
    RingMismatch,
    #[error("degree {degree}: {message}")]
    Presentation { degree: usize, message: String },
    #[error("Riemann-Roch is implemented for surfaces only, this ring has dimension {0}")]
    NotSurface(usize),
    #[error("d·(d − K) = {0} is odd")]
    Parity(BigInt),
    #[error("element is not homogeneous of degree {0}")]
    NotHomogeneous(usize),
    #[error(transparent)]
    Picard(#[from] CohomologyError),
}

static NEXT_RING_ID: AtomicU64 = AtomicU64::new(1);

/// An element of the ring: one integer coordinate vector per degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChowElement {
    ring: u64,
    parts: Vec<Vec<BigInt>>,
}

impl ChowElement {
    pub fn part(&self, degree: usize) -> &[BigInt] {
        &self.parts[degree]
    }

    pub fn parts(&self) -> &[Vec<BigInt>] {
        &self.parts
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().flatten().all(Zero::is_zero)
    }

    /// Degrees carrying a nonzero coordinate.
    pub fn support_degrees(&self) -> Vec<usize> {
        (0..self.parts.len())
            .filter(|&k| self.parts[k].iter().any(|c| !c.is_zero()))
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct ChowRing {
    id: u64,
    dimension: usize,
    ray_count: usize,
    fan: Fan,
    picard: PicardPresentation,
    /// Square-free cone monomials forming the basis of each degree.
    basis: Vec<Vec<RaySet>>,
    /// Coordinates of every square-free cone monomial, per degree.
    coords: Vec<HashMap<RaySet, Vec<BigInt>>>,
    /// `table[a][b][i][j]`: basis_a[i] · basis_b[j] in degree a + b.
    table: Vec<Vec<Vec<Vec<Vec<BigInt>>>>>,
}

pub fn build_chow(fan: &Fan) -> Result<ChowRing, ChowError> {
    if !fan.is_del_pezzo() {
        return Err(ChowError::NotDelPezzo);
    }
    let picard = picard_presentation(fan)?;
    let n = fan.dimension();
    let sigma0 = picard.reference_cone;
    let mut rewriter = Rewriter::new(fan);

    let mut basis = Vec::with_capacity(n + 1);
    let mut coords = Vec::with_capacity(n + 1);
    basis.push(vec![RaySet::EMPTY]);
    coords.push(HashMap::from([(RaySet::EMPTY, vec![BigInt::one()])]));

    for k in 1..=n {
        let mut columns: Vec<RaySet> = fan.cones_of_dimension(k).expect("k ≤ n").to_vec();
        if k == 1 {
            columns.sort_by_key(|c| !c.is_subset(sigma0));
        }
        if k == n {
            columns.sort_by_key(|&c| c == sigma0);
        }
        let index: HashMap<RaySet, usize> = columns.iter().enumerate().map(|(i, &c)| (c, i)).collect();

        let mut relations: Vec<Vec<BigInt>> = Vec::new();
        for mu in face_monomials(fan, k - 1) {
            for l in 0..n {
                let mut row = vec![BigInt::zero(); columns.len()];
                for (i, ray) in fan.rays().iter().enumerate() {
                    if ray[l] == 0 {
                        continue;
                    }
                    let mut m = mu.clone();
                    m.push(i);
                    m.sort_unstable();
                    for (face, c) in rewriter.reduce(&m) {
                        row[index[&face]] += c * ray[l];
                    }
                }
                if row.iter().any(|c| !c.is_zero()) {
                    relations.push(row);
                }
            }
        }

        let (reduced, pivots) = rref(&relations, columns.len());
        let free: Vec<usize> = (0..columns.len()).filter(|c| !pivots.contains(c)).collect();
        let mut degree_coords = HashMap::new();
        for (c, &face) in columns.iter().enumerate() {
            let v: Vec<BigRational> = match pivots.iter().position(|&p| p == c) {
                Some(r) => free.iter().map(|&f| -reduced[r][f].clone()).collect(),
                None => free.iter().map(|&f| if f == c { one_q() } else { zero_q() }).collect(),
            };
            let v = v
                .into_iter()
                .map(|q| {
                    q.is_integer().then(|| q.to_integer()).ok_or_else(|| ChowError::Presentation {
                        degree: k,
                        message: format!("monomial {face} has non-integral coordinates"),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            degree_coords.insert(face, v);
        }

        // relations span a saturated sublattice iff the quotient is torsion-free
        if !relations.is_empty() {
            let m = IntMatrix::from_fn(columns.len(), relations.len(), |r, c| relations[c][r].clone());
            let coker = cokernel_presentation(&m);
            if !coker.torsion.is_empty() || coker.free_rank != free.len() {
                return Err(ChowError::Presentation {
                    degree: k,
                    message: format!(
                        "quotient has free rank {} and torsion {:?}",
                        coker.free_rank, coker.torsion
                    ),
                });
            }
        }
        basis.push(free.iter().map(|&f| columns[f]).collect());
        coords.push(degree_coords);
    }

    if basis[1] != picard.basis.iter().map(|&j| RaySet::EMPTY.with(j)).collect::<Vec<_>>() {
        return Err(ChowError::Presentation {
            degree: 1,
            message: "degree-1 basis does not match the Picard basis".into(),
        });
    }
    if basis[n] != vec![sigma0] {
        return Err(ChowError::Presentation {
            degree: n,
            message: format!("top degree has rank {}, expected 1", basis[n].len()),
        });
    }
    if let Some(cone) = fan.max_cones().iter().find(|c| coords[n][*c] != vec![BigInt::one()]) {
        return Err(ChowError::Presentation {
            degree: n,
            message: format!("maximal cone {cone} is not the point class"),
        });
    }

    let mut ring = ChowRing {
        id: NEXT_RING_ID.fetch_add(1, Ordering::Relaxed),
        dimension: n,
        ray_count: fan.ray_count(),
        fan: fan.clone(),
        picard,
        basis,
        coords,
        table: Vec::new(),
    };
    ring.table = (0..=n)
        .map(|a| {
            (0..=n - a)
                .map(|b| {
                    ring.basis[a]
                        .iter()
                        .map(|&x| {
                            ring.basis[b]
                                .iter()
                                .map(|&y| {
                                    let mut m: Vec<usize> = x.iter().chain(y.iter()).collect();
                                    m.sort_unstable();
                                    ring.reduce_with(&mut rewriter, &m)
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    Ok(ring)
}

impl ChowRing {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn rank(&self, degree: usize) -> usize {
        self.basis.get(degree).map_or(0, Vec::len)
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.basis.iter().map(Vec::len).collect()
    }

    /// Basis monomials of a degree, as sets of ray indices.
    pub fn basis(&self, degree: usize) -> &[RaySet] {
        &self.basis[degree]
    }

    pub fn picard(&self) -> &PicardPresentation {
        &self.picard
    }

    pub fn zero(&self) -> ChowElement {
        ChowElement {
            ring: self.id,
            parts: self.basis.iter().map(|b| vec![BigInt::zero(); b.len()]).collect(),
        }
    }

    pub fn one(&self) -> ChowElement {
        let mut e = self.zero();
        e.parts[0][0] = BigInt::one();
        e
    }

    /// The point class, dual to the reference maximal cone.
    pub fn point(&self) -> ChowElement {
        let mut e = self.zero();
        e.parts[self.dimension][0] = BigInt::one();
        e
    }

    /// The product of `E_i` over the given 0-based ray indices, with repetition.
    pub fn monomial(&self, indices: &[usize]) -> ChowElement {
        assert!(indices.iter().all(|&i| i < self.ray_count), "ray index out of range");
        let mut m = indices.to_vec();
        m.sort_unstable();
        let mut e = self.zero();
        if m.len() <= self.dimension {
            e.parts[m.len()] = self.reduce_with(&mut Rewriter::new(&self.fan), &m);
        }
        e
    }

    /// `Σ r_i E_i` in degree 1.
    pub fn divisor(&self, d: &DivisorVector) -> Result<ChowElement, ChowError> {
        if d.len() != self.ray_count {
            return Err(CohomologyError::LengthMismatch {
                expected: self.ray_count,
                found: d.len(),
            }
            .into());
        }
        let mut e = self.zero();
        for (i, r) in d.coefficients().iter().enumerate() {
            for (acc, c) in e.parts[1].iter_mut().zip(&self.coords[1][&RaySet::EMPTY.with(i)]) {
                *acc += r * c;
            }
        }
        Ok(e)
    }

    /// The degree-1 element of a Picard class.
    pub fn class(&self, c: &DivisorClass) -> Result<ChowElement, ChowError> {
        self.divisor(&self.picard.representative(c)?)
    }

    /// The Picard class of a degree-1 element.
    pub fn to_class(&self, e: &ChowElement) -> Result<DivisorClass, ChowError> {
        self.check(e)?;
        if e.support_degrees().iter().any(|&k| k != 1) {
            return Err(ChowError::NotHomogeneous(1));
        }
        Ok(DivisorClass(e.parts[1].clone()))
    }

    pub fn add(&self, a: &ChowElement, b: &ChowElement) -> Result<ChowElement, ChowError> {
        self.check(a)?;
        self.check(b)?;
        let mut e = a.clone();
        for (pa, pb) in e.parts.iter_mut().zip(&b.parts) {
            for (x, y) in pa.iter_mut().zip(pb) {
                *x += y;
            }
        }
        Ok(e)
    }

    pub fn neg(&self, a: &ChowElement) -> Result<ChowElement, ChowError> {
        self.check(a)?;
        let mut e = a.clone();
        e.parts.iter_mut().flatten().for_each(|x| *x = -&*x);
        Ok(e)
    }

    pub fn sub(&self, a: &ChowElement, b: &ChowElement) -> Result<ChowElement, ChowError> {
        self.add(a, &self.neg(b)?)
    }

    pub fn multiply(&self, a: &ChowElement, b: &ChowElement) -> Result<ChowElement, ChowError> {
        self.check(a)?;
        self.check(b)?;
        let mut e = self.zero();
        for (da, pa) in a.parts.iter().enumerate() {
            for (db, pb) in b.parts.iter().enumerate().take(self.dimension + 1 - da) {
                let table = &self.table[da][db];
                for (i, x) in pa.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                    for (j, y) in pb.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                        let xy = x * y;
                        for (acc, c) in e.parts[da + db].iter_mut().zip(&table[i][j]) {
                            *acc += &xy * c;
                        }
                    }
                }
            }
        }
        Ok(e)
    }

    /// Top-degree coordinate, i.e. the degree against the point class.
    pub fn integrate(&self, a: &ChowElement) -> Result<BigInt, ChowError> {
        self.check(a)?;
        Ok(a.parts[self.dimension][0].clone())
    }

    /// `∫ x · y` for classes of complementary degrees `k` and `n − k`, on basis elements.
    pub fn pairing_matrix(&self, k: usize) -> IntMatrix {
        assert!(k <= self.dimension);
        let table = &self.table[k][self.dimension - k];
        IntMatrix::from_fn(self.rank(k), self.rank(self.dimension - k), |i, j| {
            table[i][j][0].clone()
        })
    }

    /// `−K = Σ E_i` in degree 1.
    pub fn anticanonical(&self) -> ChowElement {
        self.divisor(&DivisorVector(vec![BigInt::one(); self.ray_count]))
            .expect("length matches")
    }

    fn check(&self, a: &ChowElement) -> Result<(), ChowError> {
        if a.ring != self.id {
            return Err(ChowError::RingMismatch);
        }
        Ok(())
    }

    fn reduce_with(&self, rewriter: &mut Rewriter, m: &[usize]) -> Vec<BigInt> {
        let k = m.len();
        let mut out = vec![BigInt::zero(); self.basis[k].len()];
        for (face, c) in rewriter.reduce(m) {
            for (acc, v) in out.iter_mut().zip(&self.coords[k][&face]) {
                *acc += &c * v;
            }
        }
        out
    }
}

/// `(c1, c2) = (x1 + x2, x1 · x2)`: Chern classes of an extension of two line bundles.
pub fn chern_pair(
    ring: &ChowRing,
    x1: &DivisorClass,
    x2: &DivisorClass,
) -> Result<(ChowElement, ChowElement), ChowError> {
    let a = ring.class(x1)?;
    let b = ring.class(x2)?;
    Ok((ring.add(&a, &b)?, ring.multiply(&a, &b)?))
}

/// Classes `x2` with Picard coordinates in `[−B, B]` such that `x1 = c1 − x2`
/// satisfies `x1 · x2 = c2`, for `(c1, c2) = chern_pair(d1, −d1)`. Ordered
/// lexicographically by coordinates.
pub fn splitting_candidates(
    ring: &ChowRing,
    d1: &DivisorClass,
    bound: u32,
) -> Result<Vec<DivisorClass>, ChowError> {
    let (c1, c2) = chern_pair(ring, d1, &-d1)?;
    let rank = ring.rank(1);
    let b = bound as i64;
    let mut out = Vec::new();
    let mut current = vec![-b; rank];
    loop {
        let x2 = DivisorClass::from_i64(&current);
        let e2 = ring.class(&x2)?;
        let e1 = ring.sub(&c1, &e2)?;
        if ring.multiply(&e1, &e2)? == c2 {
            out.push(x2);
        }
        let Some(k) = (0..rank).rev().find(|&k| current[k] < b) else {
            break;
        };
        current[k] += 1;
        for c in current.iter_mut().skip(k + 1) {
            *c = -b;
        }
    }
    Ok(out)
}

/// `χ(O(d)) = 1 + (d² + d·(−K)) / 2` on a surface.
pub fn riemann_roch_chi(ring: &ChowRing, d: &DivisorClass) -> Result<BigInt, ChowError> {
    if ring.dimension() != 2 {
        return Err(ChowError::NotSurface(ring.dimension()));
    }
    let e = ring.class(d)?;
    let shifted = ring.add(&e, &ring.anticanonical())?;
    let twice = ring.integrate(&ring.multiply(&e, &shifted)?)?;
    let (half, rem) = twice.div_rem(&BigInt::from(2));
    if !rem.is_zero() {
        return Err(ChowError::Parity(twice));
    }
    Ok(half + 1)
}

/// Signature `(positive, negative, zero)` of a symmetric integer matrix, by
/// congruence diagonalization over the rationals.
pub fn signature(m: &IntMatrix) -> (usize, usize, usize) {
    assert_eq!(m.rows(), m.cols(), "signature needs a square matrix");
    let size = m.rows();
    let mut a: Vec<Vec<BigRational>> = (0..size)
        .map(|i| (0..size).map(|j| BigRational::from_integer(m[(i, j)].clone())).collect())
        .collect();
    let mut diag = Vec::with_capacity(size);
    for k in 0..size {
        if a[k][k].is_zero() {
            if let Some(j) = (k + 1..size).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..size).find(|&j| !a[k][j].is_zero()) {
                // x_k += x_j makes the diagonal 2·a_kj + a_jj = 2·a_kj
                for c in 0..size {
                    let v = a[j][c].clone();
                    a[k][c] += v;
                }
                for r in 0..size {
                    let v = a[r][j].clone();
                    a[r][k] += v;
                }
            }
        }
        let p = a[k][k].clone();
        diag.push(p.clone());
        if p.is_zero() {
            continue;
        }
        for r in k + 1..size {
            let f = &a[r][k] / &p;
            if f.is_zero() {
                continue;
            }
            for c in 0..size {
                let v = &f * &a[k][c];
                a[r][c] -= v;
            }
            for c in 0..size {
                let v = &f * &a[c][k];
                a[c][r] -= v;
            }
        }
    }
    let pos = diag.iter().filter(|d| d.is_positive()).count();
    let neg = diag.iter().filter(|d| d.is_negative()).count();
    (pos, neg, size - pos - neg)
}

/// Rewrites monomials (sorted ray-index multisets) as combinations of square-free
/// cone monomials.
struct Rewriter<'a> {
    fan: &'a Fan,
    /// Dual basis of each maximal cone: `pair[c][i][j] = ⟨m_i, v_j⟩`.
    pair: Vec<HashMap<usize, Vec<BigInt>>>,
    memo: HashMap<Vec<usize>, Vec<(RaySet, BigInt)>>,
}

impl<'a> Rewriter<'a> {
    fn new(fan: &'a Fan) -> Self {
        let pair = fan
            .max_cones()
            .iter()
            .map(|&c| {
                fan.dual_basis(c)
                    .expect("smooth fan")
                    .into_iter()
                    .map(|(i, m)| (i, fan.pairings(&m)))
                    .collect()
            })
            .collect();
        Rewriter {
            fan,
            pair,
            memo: HashMap::new(),
        }
    }

    fn reduce(&mut self, m: &[usize]) -> Vec<(RaySet, BigInt)> {
        if let Some(r) = self.memo.get(m) {
            return r.clone();
        }
        let support: RaySet = m.iter().copied().collect();
        let result = if !self.fan.is_cone(support) {
            Vec::new()
        } else if support.len() == m.len() {
            vec![(support, BigInt::one())]
        } else {
            let c = self
                .fan
                .max_cones()
                .iter()
                .position(|&c| support.is_subset(c))
                .expect("support is a cone");
            let cone = self.fan.max_cones()[c];
            let i = m.windows(2).find(|w| w[0] == w[1]).expect("repeated index")[0];
            let pos = m.iter().position(|&x| x == i).expect("present");
            // E_i = −Σ_{j ∉ σ} ⟨m_i, v_j⟩ E_j
            let coeffs = self.pair[c][&i].clone();
            let mut acc: HashMap<RaySet, BigInt> = HashMap::new();
            for (j, cj) in coeffs.iter().enumerate() {
                if cone.contains(j) || cj.is_zero() {
                    continue;
                }
                let mut next = m.to_vec();
                next[pos] = j;
                next.sort_unstable();
                for (face, v) in self.reduce(&next) {
                    *acc.entry(face).or_default() -= cj * v;
                }
            }
            let mut out: Vec<(RaySet, BigInt)> = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
            out.sort();
            out
        };
        self.memo.insert(m.to_vec(), result.clone());
        result
    }
}

/// Sorted multisets of `k` ray indices whose support is a cone.
fn face_monomials(fan: &Fan, k: usize) -> Vec<Vec<usize>> {
    fn extend(fan: &Fan, k: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..fan.ray_count() {
            current.push(i);
            if fan.is_cone(current.iter().copied().collect()) {
                extend(fan, k, i, current, out);
            }
            current.pop();
        }
    }
    let mut out = Vec::new();
    extend(fan, k, 0, &mut Vec::new(), &mut out);
    out
}

fn zero_q() -> BigRational {
    BigRational::zero()
}

fn one_q() -> BigRational {
    BigRational::one()
}

/// Reduced row echelon form over the rationals; returns the nonzero rows and
/// their pivot columns.
fn rref(rows: &[Vec<BigInt>], cols: usize) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|v| BigRational::from_integer(v.clone())).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for v in a[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * y;
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{build_del_pezzo_fan, build_projective_fan};

    fn v2() -> ChowRing {
        build_chow(&build_del_pezzo_fan(2).unwrap()).unwrap()
    }

    #[test]
    fn ranks() {
        assert_eq!(v2().ranks(), vec![1, 4, 1]);
        let v4 = build_chow(&build_del_pezzo_fan(4).unwrap()).unwrap();
        assert_eq!(v4.rank(1), 6);
        assert_eq!(v4.rank(4), 1);
        // Euler number of V^4 is its count of maximal cones
        assert_eq!(v4.ranks().iter().sum::<usize>(), 30);
    }

    #[test]
    fn rejects_other_fans() {
        assert!(matches!(
            build_chow(&build_projective_fan(2).unwrap()),
            Err(ChowError::NotDelPezzo)
        ));
    }

    #[test]
    fn surface_products() {
        let r = v2();
        assert!(r.monomial(&[0, 3]).is_zero());
        let minus_point = r.neg(&r.point()).unwrap();
        for i in 0..6 {
            assert_eq!(r.monomial(&[i, i]), minus_point);
        }
        // cone {1,5} is the point class itself
        assert_eq!(r.monomial(&[0, 4]), r.point());
        let e1 = r.monomial(&[0]);
        assert!(r.multiply(&e1, &r.zero()).unwrap().is_zero());
        assert_eq!(r.multiply(&r.one(), &e1).unwrap(), e1);
    }

    #[test]
    fn ring_mismatch() {
        let a = v2();
        let b = v2();
        assert_eq!(a.multiply(&a.one(), &b.one()), Err(ChowError::RingMismatch));
    }

    #[test]
    fn surface_pairing() {
        let r = v2();
        let m = r.pairing_matrix(1);
        assert!(m.determinant().unwrap().abs().is_one());
        assert_eq!(signature(&m), (1, 3, 0));
        let k = r.anticanonical();
        assert_eq!(r.integrate(&r.multiply(&k, &k).unwrap()).unwrap(), BigInt::from(6));
    }

    #[test]
    fn signature_examples() {
        assert_eq!(signature(&IntMatrix::from_rows(2, &[vec![0, 1], vec![1, 0]])), (1, 1, 0));
        assert_eq!(signature(&IntMatrix::zeros(3, 3)), (0, 0, 3));
        assert_eq!(
            signature(&IntMatrix::from_rows(3, &[vec![2, 1, 0], vec![1, 2, 0], vec![0, 0, -5]])),
            (2, 1, 0)
        );
    }

    #[test]
    fn riemann_roch_values() {
        let r = v2();
        let zero = DivisorClass::from_i64(&[0, 0, 0, 0]);
        assert_eq!(riemann_roch_chi(&r, &zero).unwrap(), BigInt::one());
        let antik = r.to_class(&r.anticanonical()).unwrap();
        assert_eq!(riemann_roch_chi(&r, &antik).unwrap(), BigInt::from(7));
    }

    #[test]
    fn chern_pair_of_opposite_classes() {
        let r = v2();
        let d1 = r
            .picard()
            .class_of(&DivisorVector::from_i64(&[0, 1, 1, 0, 1, 1]))
            .unwrap();
        let (c1, c2) = chern_pair(&r, &d1, &-&d1).unwrap();
        assert!(c1.is_zero());
        assert!(c2.is_zero());
        let zero = DivisorClass::from_i64(&[0; 4]);
        let (c1, c2) = chern_pair(&r, &zero, &zero).unwrap();
        assert!(c1.is_zero() && c2.is_zero());
    }

    #[test]
    fn principal_divisors_vanish() {
        let r = v2();
        for m in [[1i64, 0], [0, 1], [2, -5]] {
            let m: Vec<BigInt> = m.iter().map(|&x| x.into()).collect();
            let d = r.picard().principal(&m);
            assert!(r.divisor(&d).unwrap().is_zero());
        }
    }

    #[test]
    fn splitting_contains_both_signs() {
        let r = v2();
        let d1 = r
            .picard()
            .class_of(&DivisorVector::from_i64(&[0, 1, 1, 0, 1, 1]))
            .unwrap();
        let found = splitting_candidates(&r, &d1, 2).unwrap();
        assert!(found.contains(&d1));
        assert!(found.contains(&-&d1));
        let zero_box = splitting_candidates(&r, &d1, 0).unwrap();
        assert_eq!(zero_box, vec![DivisorClass::from_i64(&[0; 4])]);
    }
}
