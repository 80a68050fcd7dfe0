use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use toricoh::lattice::{
    coordinate_bounds, count_lattice_points, lattice_points, smith_normal_form, IntMatrix,
    LatticeCount, LatticePoints, RationalPolyhedron, Sense,
};

fn matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=8, 1usize..=8).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-9i64..=9, c), r)
            .prop_map(move |rows| IntMatrix::from_rows(c, &rows))
    })
}

fn rational_rank(m: &IntMatrix) -> usize {
    let mut a: Vec<Vec<BigRational>> = m
        .to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from_integer).collect())
        .collect();
    let mut rank = 0;
    for c in 0..m.cols() {
        let Some(p) = (rank..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank].clone();
        for row in a.iter_mut().skip(rank + 1) {
            let f = &row[c] / &pivot[c];
            for (x, y) in row.iter_mut().zip(&pivot) {
                *x -= &f * y;
            }
        }
        rank += 1;
    }
    rank
}

#[derive(Clone, Debug)]
struct System {
    dim: usize,
    half_width: i64,
    /// `normal · x ≤ bound`
    rows: Vec<(Vec<i64>, i64)>,
}

impl System {
    fn polyhedron(&self, boxed: bool) -> RationalPolyhedron {
        let mut p = RationalPolyhedron::new(self.dim);
        if boxed {
            for i in 0..self.dim {
                let mut e = vec![0; self.dim];
                e[i] = 1;
                p = p
                    .constrain(&e, Sense::AtMost, self.half_width)
                    .constrain(&e, Sense::AtLeast, -self.half_width);
            }
        }
        for (a, b) in &self.rows {
            p = p.constrain(a, Sense::AtMost, *b);
        }
        p
    }

    fn transformed(&self, u: &[Vec<i64>]) -> RationalPolyhedron {
        // x = U y turns a·x ≤ b into (aU)·y ≤ b
        let mut p = RationalPolyhedron::new(self.dim);
        for (a, b) in &self.rows {
            let au: Vec<i64> = (0..self.dim)
                .map(|j| (0..self.dim).map(|k| a[k] * u[k][j]).sum())
                .collect();
            p = p.constrain(&au, Sense::AtMost, *b);
        }
        p
    }
}

fn system(max_dim: usize) -> impl Strategy<Value = System> {
    (1usize..=max_dim, 1i64..=3).prop_flat_map(|(dim, half_width)| {
        prop::collection::vec((prop::collection::vec(-3i64..=3, dim), -6i64..=6), 0..=5)
            .prop_map(move |rows| System {
                dim,
                half_width,
                rows,
            })
    })
}

fn unimodular(dim: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec((0..dim, 0..dim, -2i64..=2, any::<bool>()), 0..=6).prop_map(move |ops| {
        let mut u: Vec<Vec<i64>> = (0..dim)
            .map(|i| (0..dim).map(|j| i64::from(i == j)).collect())
            .collect();
        for (i, j, k, swap) in ops {
            if swap {
                for row in u.iter_mut() {
                    row.swap(i, j);
                }
            } else if i != j {
                for row in u.iter_mut() {
                    row[j] += k * row[i];
                }
            }
        }
        u
    })
}

fn brute_force(sys: &System) -> Vec<Vec<BigInt>> {
    let w = sys.half_width;
    let p = sys.polyhedron(true);
    let mut out = Vec::new();
    let mut x = vec![-w; sys.dim];
    loop {
        let big: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        if p.contains(&big) {
            out.push(big);
        }
        let Some(k) = (0..sys.dim).rev().find(|&k| x[k] < w) else {
            break;
        };
        x[k] += 1;
        for v in x.iter_mut().skip(k + 1) {
            *v = -w;
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn smith_reconstructs_with_divisibility_chain(a in matrix()) {
        let s = smith_normal_form(&a);
        prop_assert_eq!(&(&s.left * &a) * &s.right, s.diagonal_matrix());
        prop_assert!(s.left.determinant().unwrap().abs().is_one());
        prop_assert!(s.right.determinant().unwrap().abs().is_one());
        prop_assert!(s.diag.iter().all(|d| !d.is_negative()));
        for w in s.diag.windows(2) {
            if w[0].is_zero() {
                prop_assert!(w[1].is_zero());
            } else {
                prop_assert!(w[1].is_multiple_of(&w[0]));
            }
        }
    }

    #[test]
    fn rank_agrees_across_methods(a in matrix()) {
        let q = rational_rank(&a);
        prop_assert_eq!(a.rank(), q);
        prop_assert_eq!(smith_normal_form(&a).rank(), q);
        prop_assert_eq!(a.transpose().rank(), q);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn enumeration_matches_brute_force(sys in system(4)) {
        let expected = brute_force(&sys);
        let p = sys.polyhedron(true);
        match lattice_points(&p) {
            LatticePoints::Bounded(points) => prop_assert_eq!(&points, &expected),
            LatticePoints::Empty => prop_assert!(expected.is_empty()),
            LatticePoints::Unbounded => prop_assert!(false, "boxed system reported unbounded"),
        }
        prop_assert_eq!(count_lattice_points(&p).finite(), Some(expected.len() as u64));
        if let Ok(bounds) = coordinate_bounds(&p) {
            for x in &expected {
                for (v, (lo, hi)) in x.iter().zip(&bounds) {
                    prop_assert!(lo.as_ref().is_some_and(|l| l <= v));
                    prop_assert!(hi.as_ref().is_some_and(|h| v <= h));
                }
            }
        } else {
            prop_assert!(expected.is_empty());
        }
    }

    #[test]
    fn counts_are_unimodular_invariants(
        (sys, u) in system(4).prop_flat_map(|s| { let d = s.dim; (Just(s), unimodular(d)) })
    ) {
        let before = count_lattice_points(&sys.polyhedron(false));
        let after = count_lattice_points(&sys.transformed(&u));
        prop_assert_eq!(before, after);
        if let LatticeCount::Bounded(k) = before {
            prop_assert!(k > 0);
        }
    }
}
