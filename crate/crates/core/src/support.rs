//! Support complexes `supp(r)` and their reduced simplicial homology.
//!
//! Degrees follow the usual simplicial convention: a face with `k+1` vertices is
//! a `k`-simplex, and the empty face sits in degree −1.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::fan::{Fan, RaySet};
use crate::lattice::{rank_mod2, smith_normal_form, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SupportError {
    #[error("ray index {index} is out of range for {count} rays")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("pattern has {found} entries but the fan has {expected} rays")]
    LengthMismatch { expected: usize, found: usize },
    #[error("cycle dimension must be at least 1, got {0}")]
    CycleDimension(usize),
}

/// Which rays carry a nonnegative coefficient; the rest are `≤ −1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignPattern {
    nonneg: RaySet,
    ray_count: usize,
}

impl SignPattern {
    pub fn new(ray_count: usize, nonneg: RaySet) -> Result<Self, SupportError> {
        if let Some(i) = nonneg.iter().find(|&i| i >= ray_count) {
            return Err(SupportError::IndexOutOfRange {
                index: i + 1,
                count: ray_count,
            });
        }
        Ok(SignPattern { nonneg, ray_count })
    }

    pub fn from_negative(ray_count: usize, negative: RaySet) -> Result<Self, SupportError> {
        let pattern = Self::new(ray_count, negative)?;
        Ok(SignPattern {
            nonneg: RaySet::full(ray_count).difference(pattern.nonneg),
            ray_count,
        })
    }

    /// The pattern of an integer vector `r`.
    pub fn of(r: &[BigInt]) -> Self {
        let nonneg = r
            .iter()
            .enumerate()
            .filter(|(_, v)| v.sign() != num_bigint::Sign::Minus)
            .map(|(i, _)| i)
            .collect();
        SignPattern {
            nonneg,
            ray_count: r.len(),
        }
    }

    pub fn all_nonneg(ray_count: usize) -> Self {
        SignPattern {
            nonneg: RaySet::full(ray_count),
            ray_count,
        }
    }

    pub fn all_negative(ray_count: usize) -> Self {
        SignPattern {
            nonneg: RaySet::EMPTY,
            ray_count,
        }
    }

    pub fn nonneg(&self) -> RaySet {
        self.nonneg
    }

    pub fn negative(&self) -> RaySet {
        RaySet::full(self.ray_count).difference(self.nonneg)
    }

    pub fn ray_count(&self) -> usize {
        self.ray_count
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.ray_count)
            .map(|i| if self.nonneg.contains(i) { '+' } else { '-' })
            .collect();
        f.write_str(&s)
    }
}

/// A finite abstract simplicial complex on ray indices, always containing `∅`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportComplex {
    vertices: RaySet,
    top_degree: isize,
    facets: Vec<RaySet>,
    /// `faces[k]`: faces with `k` vertices, sorted.
    faces: Vec<Vec<RaySet>>,
}

impl SupportComplex {
    /// Closure of `facets` under subsets. Homology is reported up to `top_degree`,
    /// or up to the largest facet when `None`.
    pub fn from_facets(
        facets: impl IntoIterator<Item = RaySet>,
        top_degree: Option<isize>,
    ) -> Self {
        let candidates: BTreeSet<RaySet> = facets.into_iter().collect();
        let maximal: Vec<RaySet> = candidates
            .iter()
            .copied()
            .filter(|&f| !candidates.iter().any(|&g| g != f && f.is_subset(g)))
            .collect();
        let largest = maximal.iter().map(|f| f.len()).max().unwrap_or(0);
        let top = top_degree.unwrap_or(largest as isize - 1).max(largest as isize - 1);
        let mut by_size: Vec<BTreeSet<RaySet>> = vec![BTreeSet::new(); (top + 2) as usize];
        by_size[0].insert(RaySet::EMPTY);
        for &f in &maximal {
            for s in f.subsets() {
                by_size[s.len()].insert(s);
            }
        }
        let vertices = maximal.iter().fold(RaySet::EMPTY, |v, &f| v.union(f));
        let facets = if maximal.is_empty() {
            vec![RaySet::EMPTY]
        } else {
            maximal
        };
        SupportComplex {
            vertices,
            top_degree: top,
            facets,
            faces: by_size.into_iter().map(|s| s.into_iter().collect()).collect(),
        }
    }

    /// The complex `{∅}`.
    pub fn void(top_degree: isize) -> Self {
        Self::from_facets([], Some(top_degree))
    }

    pub fn vertices(&self) -> RaySet {
        self.vertices
    }

    pub fn facets(&self) -> &[RaySet] {
        &self.facets
    }

    pub fn top_degree(&self) -> isize {
        self.top_degree
    }

    /// Faces that are `q`-simplices (`q + 1` vertices); `q = −1` is `[∅]`.
    pub fn faces_of_degree(&self, q: isize) -> &[RaySet] {
        if q < -1 {
            return &[];
        }
        self.faces
            .get((q + 1) as usize)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn all_faces(&self) -> impl Iterator<Item = RaySet> + '_ {
        self.faces.iter().flatten().copied()
    }

    pub fn contains(&self, face: RaySet) -> bool {
        self.faces
            .get(face.len())
            .is_some_and(|f| f.binary_search(&face).is_ok())
    }

    pub fn is_subcomplex_of(&self, other: &SupportComplex) -> bool {
        self.all_faces().all(|f| other.contains(f))
    }

    /// `Σ_F (−1)^{dim F}` over all faces including `∅`.
    pub fn reduced_euler_characteristic(&self) -> i64 {
        self.faces
            .iter()
            .enumerate()
            .map(|(k, f)| if k % 2 == 1 { f.len() as i64 } else { -(f.len() as i64) })
            .sum()
    }

    fn boundary(&self, q: isize) -> IntMatrix {
        let rows = self.faces_of_degree(q - 1);
        let cols = self.faces_of_degree(q);
        let index: HashMap<RaySet, usize> = rows.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let mut m = IntMatrix::zeros(rows.len(), cols.len());
        for (c, &face) in cols.iter().enumerate() {
            for (j, v) in face.iter().enumerate() {
                let r = index[&face.without(v)];
                m[(r, c)] = if j % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            }
        }
        m
    }
}

/// `supp(r)` for the pattern: subsets of the nonnegative rays that lie in a cone.
pub fn support_complex(fan: &Fan, pattern: &SignPattern) -> SupportComplex {
    let top = fan.dimension() as isize - 1;
    let facets = fan
        .max_cones()
        .iter()
        .map(|&c| c.intersection(pattern.nonneg()));
    SupportComplex::from_facets(facets, Some(top))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coefficients {
    Rationals,
    Integers,
    Mod2,
}

impl Coefficients {
    pub fn name(self) -> &'static str {
        match self {
            Coefficients::Rationals => "rationals",
            Coefficients::Integers => "integers",
            Coefficients::Mod2 => "mod2",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    pub degree: isize,
    pub rank: usize,
    /// Invariant factors > 1; only populated for integer coefficients.
    pub torsion: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyProfile {
    pub coefficients: Coefficients,
    /// One entry per degree from −1 upward.
    pub groups: Vec<HomologyGroup>,
}

impl HomologyProfile {
    pub fn rank(&self, q: isize) -> usize {
        self.group(q).map_or(0, |g| g.rank)
    }

    pub fn group(&self, q: isize) -> Option<&HomologyGroup> {
        self.groups.iter().find(|g| g.degree == q)
    }

    pub fn is_acyclic(&self) -> bool {
        self.groups.iter().all(|g| g.rank == 0 && g.torsion.is_empty())
    }

    /// Degrees with nonzero rank, with the rank.
    pub fn nonzero_ranks(&self) -> impl Iterator<Item = (isize, usize)> + '_ {
        self.groups.iter().filter(|g| g.rank > 0).map(|g| (g.degree, g.rank))
    }

    /// `Σ_q (−1)^q rank_q`
    pub fn euler_characteristic(&self) -> i64 {
        self.groups
            .iter()
            .map(|g| if g.degree.rem_euclid(2) == 0 { g.rank as i64 } else { -(g.rank as i64) })
            .sum()
    }
}

pub fn reduced_homology(c: &SupportComplex, coeffs: Coefficients) -> HomologyProfile {
    let top = c.top_degree();
    // ranks[q + 1] = rank of ∂_q : C_q → C_{q−1}, for q in −1..=top+1
    let mut boundaries = Vec::new();
    for q in -1..=top + 1 {
        boundaries.push(if q <= -1 || q > top { None } else { Some(c.boundary(q)) });
    }
    let ranks: Vec<usize> = boundaries
        .iter()
        .map(|b| match (b, coeffs) {
            (None, _) => 0,
            (Some(m), Coefficients::Mod2) => rank_mod2(m),
            (Some(m), _) => m.rank(),
        })
        .collect();
    let groups = (-1..=top)
        .map(|q| {
            let i = (q + 1) as usize;
            let chains = c.faces_of_degree(q).len();
            let rank = chains - ranks[i] - ranks[i + 1];
            let torsion = match (coeffs, &boundaries[i + 1]) {
                (Coefficients::Integers, Some(next)) if ranks[i + 1] > 0 => smith_normal_form(next)
                    .diag
                    .into_iter()
                    .filter(|d| *d > BigInt::one())
                    .collect(),
                _ => Vec::new(),
            };
            HomologyGroup {
                degree: q,
                rank,
                torsion,
            }
        })
        .collect();
    HomologyProfile {
        coefficients: coeffs,
        groups,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleCheck {
    pub dimension: usize,
    pub holds: bool,
    /// Every `(d−1)`-face with the number of `d`-faces containing it.
    pub incidence: Vec<(RaySet, usize)>,
}

/// Pseudocycle test: every `(d−1)`-face lying in some `d`-face lies in exactly two,
/// and at least one `d`-face exists.
pub fn cycle_criterion(c: &SupportComplex, d: usize) -> Result<CycleCheck, SupportError> {
    if d == 0 {
        return Err(SupportError::CycleDimension(d));
    }
    let ridges = c.faces_of_degree(d as isize - 1);
    let tops = c.faces_of_degree(d as isize);
    let incidence: Vec<(RaySet, usize)> = ridges
        .iter()
        .map(|&r| (r, tops.iter().filter(|&&t| r.is_subset(t)).count()))
        .collect();
    let holds = !tops.is_empty() && incidence.iter().all(|&(_, k)| k == 0 || k == 2);
    Ok(CycleCheck {
        dimension: d,
        holds,
        incidence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{build_del_pezzo_fan, build_projective_fan};

    fn set(v: &[usize]) -> RaySet {
        v.iter().map(|i| i - 1).collect()
    }

    fn hexagon() -> SupportComplex {
        SupportComplex::from_facets(
            (1..=6).map(|i| set(&[i, i % 6 + 1])),
            None,
        )
    }

    #[test]
    fn void_complex_lives_in_degree_minus_one() {
        let c = SupportComplex::void(1);
        for coeffs in [Coefficients::Rationals, Coefficients::Integers, Coefficients::Mod2] {
            let h = reduced_homology(&c, coeffs);
            assert_eq!(h.rank(-1), 1);
            assert_eq!(h.rank(0), 0);
            assert_eq!(h.rank(1), 0);
        }
    }

    #[test]
    fn two_points_and_hexagon() {
        let s0 = SupportComplex::from_facets([set(&[1]), set(&[2])], None);
        let h = reduced_homology(&s0, Coefficients::Rationals);
        assert_eq!(h.nonzero_ranks().collect::<Vec<_>>(), vec![(0, 1)]);

        let h = reduced_homology(&hexagon(), Coefficients::Integers);
        assert_eq!(h.nonzero_ranks().collect::<Vec<_>>(), vec![(1, 1)]);
        assert!(h.groups.iter().all(|g| g.torsion.is_empty()));
    }

    #[test]
    fn projective_plane_triangulation_has_two_torsion() {
        // minimal 6-vertex triangulation of RP^2
        let faces = [
            [1, 2, 3], [1, 3, 4], [1, 4, 5], [1, 5, 6], [1, 2, 6],
            [2, 3, 5], [3, 4, 6], [2, 4, 5], [3, 5, 6], [2, 4, 6],
        ];
        let c = SupportComplex::from_facets(faces.iter().map(|f| set(f)), None);
        let z = reduced_homology(&c, Coefficients::Integers);
        assert_eq!(z.rank(1), 0);
        assert_eq!(z.group(1).unwrap().torsion, vec![BigInt::from(2)]);
        let q = reduced_homology(&c, Coefficients::Rationals);
        assert!(q.is_acyclic());
        let f2 = reduced_homology(&c, Coefficients::Mod2);
        assert_eq!((f2.rank(1), f2.rank(2)), (1, 1));
        // the mod-2 pseudomanifold test holds although the rational homology vanishes
        assert!(cycle_criterion(&c, 2).unwrap().holds);
    }

    #[test]
    fn del_pezzo_support_examples() {
        let v2 = build_del_pezzo_fan(2).unwrap();
        let none = support_complex(&v2, &SignPattern::all_negative(6));
        assert_eq!(none.facets(), &[RaySet::EMPTY]);
        assert_eq!(none.all_faces().count(), 1);

        let all = support_complex(&v2, &SignPattern::all_nonneg(6));
        assert_eq!(all.facets().len(), 6);

        let deleted = SignPattern::from_negative(6, set(&[1, 4])).unwrap();
        let c = support_complex(&v2, &deleted);
        assert_eq!(c.facets(), &[set(&[2, 6]), set(&[3, 5])]);
        assert_eq!(c.vertices(), set(&[2, 3, 5, 6]));
    }

    #[test]
    fn cycle_criterion_examples() {
        let check = cycle_criterion(&hexagon(), 1).unwrap();
        assert!(check.holds);
        assert!(check.incidence.iter().all(|&(_, k)| k == 2));
        assert_eq!(check.incidence.len(), 6);

        let edge = SupportComplex::from_facets([set(&[1, 2])], None);
        let check = cycle_criterion(&edge, 1).unwrap();
        assert!(!check.holds);
        assert_eq!(check.incidence, vec![(set(&[1]), 1), (set(&[2]), 1)]);

        let v2 = build_del_pezzo_fan(2).unwrap();
        let deleted = SignPattern::from_negative(6, set(&[1, 4])).unwrap();
        let check = cycle_criterion(&support_complex(&v2, &deleted), 1).unwrap();
        assert!(!check.holds);
        assert!(check.incidence.iter().all(|&(_, k)| k == 1));
        assert_eq!(check.incidence.len(), 4);

        assert_eq!(cycle_criterion(&edge, 0), Err(SupportError::CycleDimension(0)));
        // no d-faces at all
        assert!(!cycle_criterion(&SupportComplex::void(1), 1).unwrap().holds);
    }

    #[test]
    fn pattern_only_matters_through_signs() {
        let v2 = build_del_pezzo_fan(2).unwrap();
        let a: Vec<BigInt> = [3, -1, 0, 7, -5, 2].iter().map(|&v| BigInt::from(v)).collect();
        let b: Vec<BigInt> = [0, -9, 12, 1, -1, 0].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(SignPattern::of(&a), SignPattern::of(&b));
        assert_eq!(
            support_complex(&v2, &SignPattern::of(&a)),
            support_complex(&v2, &SignPattern::of(&b))
        );
    }

    #[test]
    fn full_nerves_are_spheres() {
        let fans = [
            build_projective_fan(1).unwrap(),
            build_projective_fan(2).unwrap(),
            build_projective_fan(3).unwrap(),
            build_del_pezzo_fan(2).unwrap(),
            build_del_pezzo_fan(4).unwrap(),
        ];
        for fan in &fans {
            let n = fan.dimension() as isize;
            let c = support_complex(fan, &SignPattern::all_nonneg(fan.ray_count()));
            let h = reduced_homology(&c, Coefficients::Integers);
            assert_eq!(h.nonzero_ranks().collect::<Vec<_>>(), vec![(n - 1, 1)]);
            assert!(h.groups.iter().all(|g| g.torsion.is_empty()));
            let sign = if (n - 1) % 2 == 0 { 1 } else { -1 };
            assert_eq!(c.reduced_euler_characteristic(), sign);
        }
    }

    #[test]
    fn pattern_display_and_ranges() {
        let p = SignPattern::from_negative(6, set(&[1, 4])).unwrap();
        assert_eq!(p.to_string(), "-++-++");
        assert_eq!(p.negative(), set(&[1, 4]));
        assert!(SignPattern::from_negative(3, set(&[4])).is_err());
    }
}
