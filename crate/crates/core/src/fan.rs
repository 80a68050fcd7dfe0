//! Complete simplicial fans, the projective-space and Del Pezzo builders, and
//! the combinatorial checks run on every fan before cohomology is computed.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{smith_normal_form, IntMatrix};

/// Hard limit on rays; cones are stored as 64-bit masks.
pub const MAX_FAN_RAYS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanError {
    #[error("fan dimension must be at least 1")]
    ZeroDimension,
    #[error("the Del Pezzo construction needs an even dimension n = 2r, got n = {0}")]
    OddDelPezzo(usize),
    #[error("the fan has no rays")]
    NoRays,
    #[error("{count} rays exceed the supported maximum of {MAX_FAN_RAYS}")]
    TooManyRays { count: usize },
    #[error("ray {ray} has {found} coordinates, expected {expected}")]
    RayDimension { ray: usize, expected: usize, found: usize },
    #[error("ray {0} is not primitive")]
    NotPrimitive(usize),
    #[error("rays {0} and {1} coincide")]
    DuplicateRay(usize, usize),
    #[error("cone {cone} refers to ray {index}, but only {count} rays exist")]
    IndexOutOfRange { cone: usize, index: usize, count: usize },
    #[error("cone {0} lists a ray twice")]
    RepeatedIndex(usize),
    #[error("cone {0} is empty")]
    EmptyCone(usize),
    #[error("cone {0} has linearly dependent rays (not simplicial)")]
    NotSimplicial(usize),
    #[error("cones {0} and {1} are identical")]
    DuplicateCone(usize, usize),
    #[error("maximal cone {inner} is a face of maximal cone {outer}")]
    NestedCone { inner: usize, outer: usize },
    #[error("ray {0} lies in no cone")]
    UnusedRay(usize),
    #[error("cone dimension {m} is outside 0..={n}")]
    DimensionOutOfRange { m: usize, n: usize },
    #[error("invalid fan description: {0}")]
    Parse(String),
}

/// A set of ray indices (0-based), ordered lexicographically by ascending index list.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RaySet(u64);

impl RaySet {
    pub const EMPTY: RaySet = RaySet(0);

    pub fn from_bits(bits: u64) -> Self {
        RaySet(bits)
    }

    pub fn full(count: usize) -> Self {
        assert!(count <= MAX_FAN_RAYS);
        if count == 64 {
            RaySet(u64::MAX)
        } else {
            RaySet((1u64 << count) - 1)
        }
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Self {
        RaySet(self.0 | 1 << i)
    }

    pub fn without(self, i: usize) -> Self {
        RaySet(self.0 & !(1 << i))
    }

    pub fn is_subset(self, other: RaySet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: RaySet) -> Self {
        RaySet(self.0 | other.0)
    }

    pub fn intersection(self, other: RaySet) -> Self {
        RaySet(self.0 & other.0)
    }

    pub fn difference(self, other: RaySet) -> Self {
        RaySet(self.0 & !other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        })
    }

    /// Every subset, including the empty set and `self`.
    pub fn subsets(self) -> impl Iterator<Item = RaySet> {
        let full = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some((cur.wrapping_sub(full)) & full)
            };
            Some(RaySet(cur))
        })
    }

    pub fn one_based(self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }
}

impl FromIterator<usize> for RaySet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        RaySet(iter.into_iter().fold(0, |b, i| b | 1 << i))
    }
}

impl Ord for RaySet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for RaySet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for RaySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// 1-based, e.g. `{1,5}`.
impl fmt::Display for RaySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_based().iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// On-disk fan description. `max_cones` uses 1-based ray indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanJson {
    pub dimension: usize,
    pub rays: Vec<Vec<i64>>,
    pub max_cones: Vec<Vec<usize>>,
}

/// A simplicial fan in `Z^n`. Ray order is significant: divisor vectors are positional.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    dimension: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<RaySet>,
    /// `cones[m]` lists the distinct m-dimensional cones, sorted.
    cones: Vec<Vec<RaySet>>,
}

impl Fan {
    /// Checks the structural invariants; smoothness and completeness are left to
    /// [`Fan::validate`].
    pub fn new(
        dimension: usize,
        rays: Vec<Vec<i64>>,
        max_cones: Vec<Vec<usize>>,
    ) -> Result<Fan, FanError> {
        if dimension == 0 {
            return Err(FanError::ZeroDimension);
        }
        if rays.is_empty() {
            return Err(FanError::NoRays);
        }
        if rays.len() > MAX_FAN_RAYS {
            return Err(FanError::TooManyRays { count: rays.len() });
        }
        for (i, ray) in rays.iter().enumerate() {
            if ray.len() != dimension {
                return Err(FanError::RayDimension {
                    ray: i + 1,
                    expected: dimension,
                    found: ray.len(),
                });
            }
            let g = ray.iter().fold(0i64, |g, &v| g.gcd(&v));
            if g != 1 {
                return Err(FanError::NotPrimitive(i + 1));
            }
            if let Some(j) = rays[..i].iter().position(|r| r == ray) {
                return Err(FanError::DuplicateRay(j + 1, i + 1));
            }
        }

        let mut sets = Vec::with_capacity(max_cones.len());
        for (c, cone) in max_cones.iter().enumerate() {
            if cone.is_empty() {
                return Err(FanError::EmptyCone(c + 1));
            }
            let mut set = RaySet::EMPTY;
            for &i in cone {
                if i >= rays.len() {
                    return Err(FanError::IndexOutOfRange {
                        cone: c + 1,
                        index: i + 1,
                        count: rays.len(),
                    });
                }
                if set.contains(i) {
                    return Err(FanError::RepeatedIndex(c + 1));
                }
                set = set.with(i);
            }
            let m = ray_matrix(&rays, set);
            if m.rank() != set.len() {
                return Err(FanError::NotSimplicial(c + 1));
            }
            sets.push(set);
        }
        for (a, &x) in sets.iter().enumerate() {
            for (b, &y) in sets.iter().enumerate() {
                if a < b && x == y {
                    return Err(FanError::DuplicateCone(a + 1, b + 1));
                }
                if a != b && x != y && x.is_subset(y) {
                    return Err(FanError::NestedCone {
                        inner: a + 1,
                        outer: b + 1,
                    });
                }
            }
        }
        let used = sets.iter().fold(RaySet::EMPTY, |u, &s| u.union(s));
        if let Some(i) = (0..rays.len()).find(|&i| !used.contains(i)) {
            return Err(FanError::UnusedRay(i + 1));
        }

        let mut by_dim: Vec<BTreeSet<RaySet>> = vec![BTreeSet::new(); dimension + 1];
        for &s in &sets {
            for face in s.subsets() {
                by_dim[face.len()].insert(face);
            }
        }
        Ok(Fan {
            dimension,
            rays,
            max_cones: sets,
            cones: by_dim.into_iter().map(|s| s.into_iter().collect()).collect(),
        })
    }

    pub fn from_json_str(text: &str) -> Result<Fan, FanError> {
        let spec: FanJson =
            serde_json::from_str(text).map_err(|e| FanError::Parse(e.to_string()))?;
        Fan::from_spec(spec)
    }

    pub fn from_spec(spec: FanJson) -> Result<Fan, FanError> {
        let mut cones = Vec::with_capacity(spec.max_cones.len());
        for (c, cone) in spec.max_cones.into_iter().enumerate() {
            let zero_based = cone
                .into_iter()
                .map(|i| {
                    i.checked_sub(1).ok_or_else(|| {
                        FanError::Parse(format!("cone {} uses index 0; indices are 1-based", c + 1))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            cones.push(zero_based);
        }
        Fan::new(spec.dimension, spec.rays, cones)
    }

    pub fn to_spec(&self) -> FanJson {
        FanJson {
            dimension: self.dimension,
            rays: self.rays.clone(),
            max_cones: self.max_cones.iter().map(|c| c.one_based()).collect(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_spec()).expect("fan serializes")
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn ray_count(&self) -> usize {
        self.rays.len()
    }

    pub fn max_cones(&self) -> &[RaySet] {
        &self.max_cones
    }

    /// Distinct cones of dimension `m`; the zero cone for `m = 0`.
    pub fn cones_of_dimension(&self, m: usize) -> Result<&[RaySet], FanError> {
        self.cones
            .get(m)
            .map(Vec::as_slice)
            .ok_or(FanError::DimensionOutOfRange {
                m,
                n: self.dimension,
            })
    }

    /// Whether the rays in `set` span a cone of the fan.
    pub fn is_cone(&self, set: RaySet) -> bool {
        self.max_cones.iter().any(|&c| set.is_subset(c))
    }

    /// Matrix whose rows are the rays in `set`, in index order.
    pub fn ray_matrix(&self, set: RaySet) -> IntMatrix {
        ray_matrix(&self.rays, set)
    }

    /// Pairing `⟨m, v_i⟩` for every ray.
    pub fn pairings(&self, m: &[BigInt]) -> Vec<BigInt> {
        self.rays
            .iter()
            .map(|r| r.iter().zip(m).map(|(&a, b)| BigInt::from(a) * b).sum())
            .collect()
    }

    /// First maximal cone whose rays form a lattice basis.
    pub fn reference_cone(&self) -> Option<RaySet> {
        self.max_cones.iter().copied().find(|&c| {
            c.len() == self.dimension
                && self
                    .ray_matrix(c)
                    .determinant()
                    .is_some_and(|d| d.abs().is_one())
        })
    }

    /// For a unimodular full-dimensional cone, the dual basis `m_i` with
    /// `⟨m_i, v_j⟩ = δ_ij` for `j` in the cone, keyed by ray index.
    pub fn dual_basis(&self, cone: RaySet) -> Option<Vec<(usize, Vec<BigInt>)>> {
        if cone.len() != self.dimension {
            return None;
        }
        let inv = self.ray_matrix(cone).inverse_unimodular()?;
        Some(
            cone.iter()
                .enumerate()
                .map(|(k, i)| (i, inv.column(k)))
                .collect(),
        )
    }

    /// Codimension-one cones with the maximal cones containing them.
    pub fn walls(&self) -> Vec<(RaySet, Vec<usize>)> {
        let mut incidence: BTreeMap<RaySet, Vec<usize>> = BTreeMap::new();
        for (c, &cone) in self.max_cones.iter().enumerate() {
            if cone.len() != self.dimension {
                continue;
            }
            for i in cone.iter() {
                incidence.entry(cone.without(i)).or_default().push(c);
            }
        }
        for &face in &self.cones[self.dimension - 1] {
            incidence.entry(face).or_default();
        }
        incidence.into_iter().collect()
    }

    /// Smoothness and completeness verdicts with one diagnostic per violation.
    pub fn validate(&self) -> ValidationReport {
        let mut diagnostics = Vec::new();
        let n = self.dimension;

        let mut smooth = true;
        for &cone in &self.max_cones {
            let snf = smith_normal_form(&self.ray_matrix(cone));
            if snf.diag.iter().any(|d| !d.is_one()) {
                smooth = false;
                diagnostics.push(format!(
                    "cone {cone} is not unimodular (invariant factors {})",
                    join(&snf.diag)
                ));
            }
        }

        let mut complete = true;
        for &cone in &self.max_cones {
            if cone.len() != n {
                complete = false;
                diagnostics.push(format!("cone {cone} is not full-dimensional"));
            }
        }
        let walls = self.walls();
        for (face, owners) in &walls {
            if owners.len() != 2 {
                complete = false;
                diagnostics.push(format!(
                    "facet {face} lies in {} maximal cones, expected 2",
                    owners.len()
                ));
                continue;
            }
            let (a, b) = (
                self.max_cones[owners[0]].difference(*face),
                self.max_cones[owners[1]].difference(*face),
            );
            let normal = hyperplane_normal(&self.ray_matrix(*face));
            let side = |s: RaySet| {
                let i = s.iter().next().unwrap();
                let v: BigInt = self.rays[i]
                    .iter()
                    .zip(&normal)
                    .map(|(&x, y)| BigInt::from(x) * y)
                    .sum();
                v.signum()
            };
            let (sa, sb) = (side(a), side(b));
            if sa.is_zero() || sa == sb {
                complete = false;
                diagnostics.push(format!(
                    "cones {} and {} lie on the same side of their common facet {face}",
                    self.max_cones[owners[0]], self.max_cones[owners[1]]
                ));
            }
        }
        if !self.max_cones.is_empty() && !self.adjacency_connected(&walls) {
            complete = false;
            diagnostics.push("maximal cones do not form a connected adjacency graph".into());
        }

        ValidationReport {
            smooth,
            complete,
            diagnostics,
        }
    }

    fn adjacency_connected(&self, walls: &[(RaySet, Vec<usize>)]) -> bool {
        let k = self.max_cones.len();
        let mut adj = vec![Vec::new(); k];
        for (_, owners) in walls {
            for &a in owners {
                for &b in owners {
                    if a != b {
                        adj[a].push(b);
                    }
                }
            }
        }
        let mut seen = vec![false; k];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(c) = queue.pop_front() {
            for &d in &adj[c] {
                if !seen[d] {
                    seen[d] = true;
                    queue.push_back(d);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn symmetry_report(&self) -> SymmetryReport {
        let mut pairs = 0;
        let mut paired_rows = Vec::new();
        for (i, a) in self.rays.iter().enumerate() {
            for b in &self.rays[i + 1..] {
                if a.iter().zip(b).all(|(x, y)| *x == -y) {
                    pairs += 1;
                    paired_rows.push(a.clone());
                }
            }
        }
        let order = IntMatrix::from_rows(self.dimension, &paired_rows).rank();
        SymmetryReport {
            pairs,
            order,
            hypothesis_met: pairs > order,
        }
    }

    /// Whether this is exactly the Del Pezzo fan of its dimension (rays, order and cones).
    pub fn is_del_pezzo(&self) -> bool {
        build_del_pezzo_fan(self.dimension)
            .map(|dp| dp.rays == self.rays && dp.cones == self.cones)
            .unwrap_or(false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub smooth: bool,
    pub complete: bool,
    pub diagnostics: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.smooth && self.complete
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SymmetryReport {
    /// Unordered pairs `{σ, −σ}` of rays.
    pub pairs: usize,
    /// Dimension of the span of all paired rays.
    pub order: usize,
    /// `pairs ≥ order + 1`
    pub hypothesis_met: bool,
}

/// Fan of `P^n`: rays `e_1..e_n, −e_1−…−e_n`, one maximal cone per omitted ray.
pub fn build_projective_fan(n: usize) -> Result<Fan, FanError> {
    if n == 0 {
        return Err(FanError::ZeroDimension);
    }
    let mut rays: Vec<Vec<i64>> = (0..n).map(|i| unit(n, i, 1)).collect();
    rays.push(vec![-1; n]);
    let all = RaySet::full(n + 1);
    let mut cones: Vec<RaySet> = (0..=n).map(|i| all.without(i)).collect();
    cones.sort();
    Fan::new(n, rays, cones.iter().map(|c| c.iter().collect()).collect())
}

/// Fan of the Del Pezzo variety `V^n`, `n = 2r`.
///
/// Rays: `x_i = v_i = e_i` (i ≤ n), `x_{n+1} = v_{n+1} = −Σ e_i`, and
/// `y_i = v_{n+1+i} = −x_i`. Maximal cones are `⟨x_i (i∈I), y_j (j∈J)⟩` for
/// disjoint `I, J ⊆ {1..n+1}` with `|I| = |J| = r`.
pub fn build_del_pezzo_fan(n: usize) -> Result<Fan, FanError> {
    if n == 0 {
        return Err(FanError::ZeroDimension);
    }
    if n % 2 == 1 {
        return Err(FanError::OddDelPezzo(n));
    }
    let r = n / 2;
    let mut x: Vec<Vec<i64>> = (0..n).map(|i| unit(n, i, 1)).collect();
    x.push(vec![-1; n]);
    let y: Vec<Vec<i64>> = x.iter().map(|v| v.iter().map(|c| -c).collect()).collect();
    let rays: Vec<Vec<i64>> = x.into_iter().chain(y).collect();

    let columns = RaySet::full(n + 1);
    let mut cones = Vec::new();
    for xs in columns.subsets().filter(|s| s.len() == r) {
        for ys in columns.difference(xs).subsets().filter(|s| s.len() == r) {
            let cone: RaySet = xs.iter().chain(ys.iter().map(|j| j + n + 1)).collect();
            cones.push(cone);
        }
    }
    cones.sort();
    Fan::new(n, rays, cones.iter().map(|c| c.iter().collect()).collect())
}

fn unit(n: usize, i: usize, v: i64) -> Vec<i64> {
    let mut e = vec![0; n];
    e[i] = v;
    e
}

fn ray_matrix(rays: &[Vec<i64>], set: RaySet) -> IntMatrix {
    let rows: Vec<Vec<i64>> = set.iter().map(|i| rays[i].clone()).collect();
    IntMatrix::from_rows(rays[0].len(), &rows)
}

/// Normal of the hyperplane spanned by the `n−1` rows of `m` (generalized cross product).
fn hyperplane_normal(m: &IntMatrix) -> Vec<BigInt> {
    let n = m.cols();
    (0..n)
        .map(|k| {
            let minor = IntMatrix::from_fn(m.rows(), n - 1, |r, c| {
                m[(r, if c < k { c } else { c + 1 })].clone()
            });
            let det = minor.determinant().expect("square minor");
            if k % 2 == 0 {
                det
            } else {
                -det
            }
        })
        .collect()
}

fn join(v: &[BigInt]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}
