//! Global sections and Euler characteristics computed without the pattern sum.
//!
//! `h^0(D)` is the number of lattice points of `P_D = {m : ⟨m, v_i⟩ ≥ −d_i}`.
//! For nef `D` higher cohomology vanishes, so `χ(D + t·A)` for an ample `A` is
//! the lattice-point count of `P_{D+tA}` once `t` is large enough; `χ` is a
//! polynomial of degree at most `n` in `t`, so `n + 1` counts determine `χ(D)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cohomology::{canonical_divisor, require_valid, CohomologyEngine, CohomologyError, DivisorVector};
use crate::fan::{Fan, RaySet};
use crate::lattice::{count_lattice_points, LatticeCount, RationalPolyhedron, Sense};

/// The torus-invariant curve of a wall, as the intersection numbers `E_j · C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallCurve {
    pub wall: RaySet,
    pub degrees: Vec<BigInt>,
}

impl WallCurve {
    pub fn degree(&self, d: &DivisorVector) -> BigInt {
        self.degrees.iter().zip(d.coefficients()).map(|(a, b)| a * b).sum()
    }
}

pub fn wall_curves(fan: &Fan) -> Result<Vec<WallCurve>, CohomologyError> {
    require_valid(fan)?;
    let cones = fan.max_cones();
    let mut out = Vec::new();
    for (wall, owners) in fan.walls() {
        let [s, t] = owners[..] else {
            return Err(CohomologyError::NotValidated(vec![format!(
                "wall {wall} lies in {} maximal cones",
                owners.len()
            )]));
        };
        let (sigma, other) = (cones[s], cones[t]);
        let a = sigma.difference(wall).iter().next().expect("wall has codimension one");
        let b = other.difference(wall).iter().next().expect("wall has codimension one");
        let dual = fan.dual_basis(sigma).expect("smooth cone");
        let vb: Vec<BigInt> = fan.rays()[b].iter().map(|&x| BigInt::from(x)).collect();
        // v_b = Σ_{i∈σ} λ_i v_i with λ_i = ⟨m_i, v_b⟩; smooth walls have λ_a = −1
        let mut degrees = vec![BigInt::zero(); fan.ray_count()];
        for (i, m) in dual {
            let lambda: BigInt = m.iter().zip(&vb).map(|(x, y)| x * y).sum();
            degrees[i] = -lambda;
        }
        if !degrees[a].is_one() {
            return Err(CohomologyError::NotValidated(vec![format!(
                "wall {wall} has multiplicity {}",
                degrees[a]
            )]));
        }
        degrees[b] = BigInt::one();
        out.push(WallCurve { wall, degrees });
    }
    Ok(out)
}

pub fn is_nef(curves: &[WallCurve], d: &DivisorVector) -> bool {
    curves.iter().all(|c| !c.degree(d).is_negative())
}

/// `P_D` as a polyhedron in `M_R`.
pub fn section_polytope(fan: &Fan, d: &DivisorVector) -> RationalPolyhedron {
    let mut p = RationalPolyhedron::new(fan.dimension());
    for (ray, di) in fan.rays().iter().zip(d.coefficients()) {
        p.push(crate::lattice::Constraint {
            normal: ray.iter().map(|&v| BigInt::from(v)).collect(),
            bound: -di,
            sense: Sense::AtLeast,
        })
        .expect("ray has the fan dimension");
    }
    p
}

/// `h^0(O(D))` as the lattice-point count of `P_D`.
pub fn global_sections(fan: &Fan, d: &DivisorVector) -> Result<u64, CohomologyError> {
    require_valid(fan)?;
    match count_lattice_points(&section_polytope(fan, d)) {
        LatticeCount::Bounded(k) => Ok(k),
        LatticeCount::Empty => Ok(0),
        LatticeCount::Unbounded => Err(CohomologyError::NotValidated(vec![
            "section polytope is unbounded".into(),
        ])),
    }
}

/// `χ(O(D))` by interpolating section counts of `D + t(−K)` at nef values of `t`.
pub fn euler_characteristic_by_sections(fan: &Fan, d: &DivisorVector) -> Result<BigInt, CohomologyError> {
    let curves = wall_curves(fan)?;
    let ample = -&canonical_divisor(fan);
    let mut t0 = BigInt::zero();
    for c in &curves {
        let a = c.degree(&ample);
        if !a.is_positive() {
            return Err(CohomologyError::NoPolarization(format!(
                "−K · C = {a} on the curve of wall {}",
                c.wall
            )));
        }
        let needed = (-c.degree(d)).div_ceil(&a);
        if needed > t0 {
            t0 = needed;
        }
    }
    let n = fan.dimension();
    let mut samples = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let t = &t0 + BigInt::from(k);
        let shifted = d + &ample.scale(&t);
        samples.push((t, BigInt::from(global_sections(fan, &shifted)?)));
    }
    let chi = lagrange_at_zero(&samples);
    if !chi.is_integer() {
        return Err(CohomologyError::NoPolarization(format!(
            "interpolated Euler characteristic {chi} is not an integer"
        )));
    }
    Ok(chi.to_integer())
}

fn lagrange_at_zero(samples: &[(BigInt, BigInt)]) -> BigRational {
    let mut total = BigRational::zero();
    for (k, (tk, yk)) in samples.iter().enumerate() {
        let mut term = BigRational::from_integer(yk.clone());
        for (j, (tj, _)) in samples.iter().enumerate() {
            if j != k {
                term *= BigRational::new(-tj, tk - tj);
            }
        }
        total += term;
    }
    total
}

/// `h^1(D)` by three routes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H1Adjudication {
    /// The pattern sum.
    pub direct: u64,
    /// `h^{n−1}(K − D)` from the pattern sum.
    pub serre: u64,
    /// `Σ_{p≠1} (−1)^p h^p − χ`, with `h^0` and `h^n = h^0(K − D)` from polytopes,
    /// `χ` from interpolation, and the middle terms `2 ≤ p ≤ n−1` from the pattern sum.
    pub euler_route: i64,
    pub chi: i64,
    pub h0_polytope: u64,
    pub hn_polytope: u64,
}

impl H1Adjudication {
    pub fn consistent(&self) -> bool {
        self.direct == self.serre && self.direct as i64 == self.euler_route
    }
}

pub fn adjudicate_h1(engine: &CohomologyEngine, d: &DivisorVector) -> Result<H1Adjudication, CohomologyError> {
    let fan = engine.fan();
    let n = fan.dimension();
    let table = engine.cohomology(d)?;
    let dual = &canonical_divisor(fan) - d;
    let serre = engine.cohomology(&dual)?.h(n - 1);
    let chi = big_to_i64(euler_characteristic_by_sections(fan, d)?)?;
    let h0 = global_sections(fan, d)?;
    let hn = global_sections(fan, &dual)?;
    let mut others: i64 = 0;
    for p in 0..=n {
        if p == 1 {
            continue;
        }
        let v = if p == 0 {
            h0
        } else if p == n {
            hn
        } else {
            table.h(p)
        } as i64;
        others += if p % 2 == 0 { v } else { -v };
    }
    // χ = Σ (−1)^p h^p, so h^1 = Σ_{p≠1} (−1)^p h^p − χ
    Ok(H1Adjudication {
        direct: table.h(1),
        serre,
        euler_route: others - chi,
        chi,
        h0_polytope: h0,
        hn_polytope: hn,
    })
}

fn big_to_i64(v: BigInt) -> Result<i64, CohomologyError> {
    i64::try_from(&v).map_err(|_| CohomologyError::NoPolarization(format!("{v} exceeds 64 bits")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{build_del_pezzo_fan, build_projective_fan};

    fn dv(v: &[i64]) -> DivisorVector {
        DivisorVector::from_i64(v)
    }

    #[test]
    fn wall_degrees_on_surfaces() {
        let v2 = build_del_pezzo_fan(2).unwrap();
        let curves = wall_curves(&v2).unwrap();
        assert_eq!(curves.len(), 6);
        for c in &curves {
            // each wall is a single ray i and its curve is E_i with E_i² = −1
            let i = c.wall.iter().next().unwrap();
            assert_eq!(c.degrees[i], BigInt::from(-1));
            assert_eq!(c.degree(&dv(&[1; 6])), BigInt::one());
        }
        let p2 = build_projective_fan(2).unwrap();
        for c in wall_curves(&p2).unwrap() {
            assert_eq!(c.degrees, vec![BigInt::one(); 3]);
        }
    }

    #[test]
    fn projective_sections() {
        let p2 = build_projective_fan(2).unwrap();
        assert_eq!(global_sections(&p2, &dv(&[2, 0, 0])).unwrap(), 6);
        assert_eq!(global_sections(&p2, &dv(&[-1, 0, 0])).unwrap(), 0);
        assert_eq!(
            euler_characteristic_by_sections(&p2, &dv(&[-4, 0, 0])).unwrap(),
            BigInt::from(3)
        );
        assert_eq!(
            euler_characteristic_by_sections(&p2, &dv(&[-1, -1, 0])).unwrap(),
            BigInt::zero()
        );
    }

    #[test]
    fn nef_examples() {
        let v2 = build_del_pezzo_fan(2).unwrap();
        let curves = wall_curves(&v2).unwrap();
        assert!(is_nef(&curves, &dv(&[0, 1, 1, 0, 1, 1])));
        assert!(!is_nef(&curves, &dv(&[1, 0, 0, 0, 0, 0])));
        assert!(is_nef(&curves, &dv(&[0; 6])));
    }

    #[test]
    fn adjudication_on_surface() {
        let v2 = build_del_pezzo_fan(2).unwrap();
        let engine = CohomologyEngine::new(&v2).unwrap();
        for d in [[0, 1, 1, 0, 1, 1], [2, 0, 0, 0, 0, 0], [1, -1, 0, 0, 1, -2], [-1, -1, -1, -1, -1, -1]] {
            let a = adjudicate_h1(&engine, &dv(&d)).unwrap();
            assert!(a.consistent(), "{d:?}: {a:?}");
        }
        let a = adjudicate_h1(&engine, &dv(&[2, 0, 0, 0, 0, 0])).unwrap();
        // 2E_1: d² = −4 and d·(−K) = 2 give χ = 0, while h^0 = 1, so h^1 = 1
        assert_eq!((a.direct, a.chi, a.h0_polytope), (1, 0, 1));
    }
}
