use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// `left * a * right == diag(diag)` with `left`, `right` unimodular and each
/// diagonal entry dividing the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub left: IntMatrix,
    pub diag: Vec<BigInt>,
    pub right: IntMatrix,
}

impl SmithDecomposition {
    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.diag.iter().take_while(|d| !d.is_zero()).count()
    }

    /// The diagonal matrix `left * a * right` as a full matrix.
    pub fn diagonal_matrix(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.left.rows(), self.right.rows());
        for (i, v) in self.diag.iter().enumerate() {
            d[(i, i)] = v.clone();
        }
        d
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut left = IntMatrix::identity(m);
    let mut right = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        let Some((pr, pc)) = smallest_entry(&d, t..m, t..n) else {
            break;
        };
        d.swap_rows(t, pr);
        left.swap_rows(t, pr);
        d.swap_cols(t, pc);
        right.swap_cols(t, pc);

        loop {
            let mut clean = true;
            for i in t + 1..m {
                if !d[(i, t)].is_zero() {
                    let q = -d[(i, t)].div_floor(&d[(t, t)]);
                    d.add_row_multiple(i, t, &q);
                    left.add_row_multiple(i, t, &q);
                    clean &= d[(i, t)].is_zero();
                }
            }
            for j in t + 1..n {
                if !d[(t, j)].is_zero() {
                    let q = -d[(t, j)].div_floor(&d[(t, t)]);
                    d.add_col_multiple(j, t, &q);
                    right.add_col_multiple(j, t, &q);
                    clean &= d[(t, j)].is_zero();
                }
            }
            if !clean {
                // a remainder smaller than the pivot survived; promote it
                let (pr, pc) = smallest_in_cross(&d, t);
                d.swap_rows(t, pr);
                left.swap_rows(t, pr);
                d.swap_cols(t, pc);
                right.swap_cols(t, pc);
                continue;
            }
            let offender = (t + 1..m).find(|&i| {
                (t + 1..n).any(|j| !d[(i, j)].is_multiple_of(&d[(t, t)]))
            });
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    left.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }

        if d[(t, t)].is_negative() {
            d.negate_row(t);
            left.negate_row(t);
        }
    }

    let diag = (0..m.min(n)).map(|i| d[(i, i)].clone()).collect();
    SmithDecomposition { left, diag, right }
}

fn smallest_entry(
    d: &IntMatrix,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for r in rows {
        for c in cols.clone() {
            let v = &d[(r, c)];
            if v.is_zero() {
                continue;
            }
            if best.is_none_or(|(br, bc)| v.abs() < d[(br, bc)].abs()) {
                best = Some((r, c));
            }
        }
    }
    best
}

fn smallest_in_cross(d: &IntMatrix, t: usize) -> (usize, usize) {
    let mut best = (t, t);
    for i in t..d.rows() {
        let v = &d[(i, t)];
        if !v.is_zero() && v.abs() < d[best].abs() {
            best = (i, t);
        }
    }
    for j in t..d.cols() {
        let v = &d[(t, j)];
        if !v.is_zero() && v.abs() < d[best].abs() {
            best = (t, j);
        }
    }
    best
}

/// Presentation of `Z^m / (column span of a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CokernelPresentation {
    pub free_rank: usize,
    /// Invariant factors greater than one.
    pub torsion: Vec<BigInt>,
    /// Rows of `left` that survive in the cokernel: torsion rows first, then free rows.
    pub projection: IntMatrix,
}

impl CokernelPresentation {
    /// Coordinates of `x` in the cokernel basis. Torsion coordinates are
    /// reduced into `[0, factor)`.
    pub fn project(&self, x: &[BigInt]) -> Vec<BigInt> {
        let mut y = self.projection.mul_vec(x);
        for (v, f) in y.iter_mut().zip(&self.torsion) {
            *v = v.mod_floor(f);
        }
        y
    }
}

pub fn cokernel_presentation(a: &IntMatrix) -> CokernelPresentation {
    let snf = smith_normal_form(a);
    let rank = snf.rank();
    let m = a.rows();
    let mut keep = Vec::new();
    let mut torsion = Vec::new();
    for (i, f) in snf.diag.iter().enumerate().take(rank) {
        if !f.is_one() {
            keep.push(i);
            torsion.push(f.clone());
        }
    }
    keep.extend(rank..m);
    let projection = IntMatrix::from_fn(keep.len(), m, |r, c| snf.left[(keep[r], c)].clone());
    CokernelPresentation {
        free_rank: m - rank,
        torsion,
        projection,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(cols: usize, rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(cols, rows)
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check(a: &IntMatrix, s: &SmithDecomposition) {
        assert_eq!(&(&s.left * a) * &s.right, s.diagonal_matrix());
        assert!(s.left.determinant().unwrap().abs().is_one());
        assert!(s.right.determinant().unwrap().abs().is_one());
    }

    #[test]
    fn identity_and_zero() {
        let id = IntMatrix::identity(3);
        let s = smith_normal_form(&id);
        assert_eq!(s.diag, big(&[1, 1, 1]));
        check(&id, &s);

        let z = IntMatrix::zeros(2, 2);
        let s = smith_normal_form(&z);
        assert_eq!(s.diag, big(&[0, 0]));
        check(&z, &s);
    }

    #[test]
    fn two_by_two_example() {
        // gcd of entries is 2 and |det| = 8, so the factors are 2 and 4
        let a = m(2, &[vec![2, 4], vec![6, 8]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.diag, big(&[2, 4]));
        check(&a, &s);
    }

    #[test]
    fn empty_shapes() {
        let a = IntMatrix::zeros(0, 3);
        let s = smith_normal_form(&a);
        assert!(s.diag.is_empty());
        check(&a, &s);

        let c = cokernel_presentation(&IntMatrix::zeros(4, 0));
        assert_eq!(c.free_rank, 4);
        assert!(c.torsion.is_empty());
    }

    #[test]
    fn cokernel_examples() {
        let a = m(2, &[vec![1, 0], vec![0, 2], vec![0, 0]]);
        let c = cokernel_presentation(&a);
        assert_eq!(c.free_rank, 1);
        assert_eq!(c.torsion, big(&[2]));
        assert!(c.project(&big(&[1, 0, 0])).iter().all(Zero::is_zero));
        assert!(c.project(&big(&[0, 2, 0])).iter().all(Zero::is_zero));
        assert!(!c.project(&big(&[0, 1, 0])).iter().all(Zero::is_zero));

        let id = cokernel_presentation(&IntMatrix::identity(3));
        assert_eq!(id.free_rank, 0);
        assert!(id.torsion.is_empty());
    }
}
