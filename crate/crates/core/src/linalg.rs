//! Exact linear algebra: fraction-free integer elimination over ℚ and
//! determinants over any exact field.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::common_denominator;
use crate::geometry::poly::Scalar;

/// Rational matrix reduced to integer reduced row echelon form.
#[derive(Clone, Debug, PartialEq)]
pub struct Echelon {
    pub ncols: usize,
    /// Nonzero rows with primitive integer entries; row `r` has its pivot in
    /// column `pivots[r]` and zeros in every other pivot column.
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
}

fn primitive_row(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x /= &g;
        }
    }
}

fn integer_row(row: &[BigRational]) -> Vec<BigInt> {
    let den = common_denominator(row.iter());
    let mut out: Vec<BigInt> = row
        .iter()
        .map(|x| (x * BigRational::from_integer(den.clone())).to_integer())
        .collect();
    primitive_row(&mut out);
    out
}

/// Fraction-free Gauss–Jordan elimination. Every row is kept as a primitive
/// integer vector, so entry growth stays bounded by the content of the
/// true reduced form.
pub fn echelon(rows: &[Vec<BigRational>], ncols: usize) -> Echelon {
    let mut work: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), ncols, "ragged matrix");
            integer_row(r)
        })
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..work.len()).find(|&i| !work[i][col].is_zero()) else {
            continue;
        };
        work.swap(rank, p);
        let pivot_row = work[rank].clone();
        let a = pivot_row[col].clone();
        for (i, row) in work.iter_mut().enumerate() {
            if i == rank || row[col].is_zero() {
                continue;
            }
            let b = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = &a * &*x - &b * y;
            }
            primitive_row(row);
        }
        pivots.push(col);
        rank += 1;
        if rank == work.len() {
            break;
        }
    }
    work.truncate(rank);
    for row in work.iter_mut() {
        primitive_row(row);
    }
    Echelon { ncols, rows: work, pivots }
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// Primitive integer kernel vector with the free column `free` set to a
    /// positive value and every other free column zero.
    pub fn kernel_vector(&self, free: usize) -> Vec<BigInt> {
        assert!(!self.pivots.contains(&free), "column {free} is a pivot column");
        let l = self
            .rows
            .iter()
            .zip(&self.pivots)
            .fold(BigInt::one(), |acc, (row, &c)| acc.lcm(&row[c]));
        let mut v = vec![BigInt::zero(); self.ncols];
        v[free] = l.abs();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            v[c] = -(&v[free] * &row[free]) / &row[c];
        }
        primitive_row(&mut v);
        v
    }

    pub fn nullspace(&self) -> Vec<Vec<BigInt>> {
        self.free_columns().into_iter().map(|f| self.kernel_vector(f)).collect()
    }
}

pub fn rank(rows: &[Vec<BigRational>], ncols: usize) -> usize {
    echelon(rows, ncols).rank()
}

/// `M·v` for a rational matrix and an integer vector.
pub fn apply(rows: &[Vec<BigRational>], v: &[BigInt]) -> Vec<BigRational> {
    rows.iter()
        .map(|r| {
            r.iter()
                .zip(v)
                .fold(BigRational::zero(), |acc, (a, b)| acc + a * BigRational::from_integer(b.clone()))
        })
        .collect()
}

/// Determinant by Gaussian elimination over an exact field.
pub fn determinant<S: Scalar>(mut m: Vec<Vec<S>>) -> S {
    let n = m.len();
    assert!(n > 0 && m.iter().all(|r| r.len() == n), "square matrix expected");
    let mut det = m[0][0].one_like();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !m[i][col].is_zero_elem()) else {
            return det.zero_like();
        };
        if p != col {
            m.swap(p, col);
            det = det.neg_elem();
        }
        let inv = m[col][col].inv_elem();
        det = det.mul_elem(&m[col][col]);
        for i in col + 1..n {
            if m[i][col].is_zero_elem() {
                continue;
            }
            let factor = m[i][col].mul_elem(&inv);
            for j in col..n {
                let t = factor.mul_elem(&m[col][j]);
                m[i][j] = m[i][j].sub_elem(&t);
            }
        }
    }
    det
}

/// Rank over an exact field.
pub fn rank_generic<S: Scalar>(mut m: Vec<Vec<S>>) -> usize {
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..nrows).find(|&i| !m[i][col].is_zero_elem()) else {
            continue;
        };
        m.swap(p, rank);
        let inv = m[rank][col].inv_elem();
        for i in rank + 1..nrows {
            if m[i][col].is_zero_elem() {
                continue;
            }
            let factor = m[i][col].mul_elem(&inv);
            for j in col..ncols {
                let t = factor.mul_elem(&m[rank][j]);
                m[i][j] = m[i][j].sub_elem(&t);
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_frac};

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
    }

    #[test]
    fn kernel_of_small_matrix() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let e = echelon(&a, 3);
        assert_eq!(e.rank(), 1);
        for v in e.nullspace() {
            assert!(apply(&a, &v).iter().all(|x| x.is_zero()));
        }
        assert_eq!(e.kernel_vector(1), vec![BigInt::from(-2), BigInt::from(1), BigInt::from(0)]);
    }

    #[test]
    fn rational_entries() {
        let a = vec![vec![rat_frac(1, 2), rat_frac(1, 3)], vec![rat(3), rat(2)]];
        assert_eq!(rank(&a, 2), 1);
        assert_eq!(determinant(a), rat(0));
        let b = m(&[&[2, 1], &[1, 3]]);
        assert_eq!(determinant(b.clone()), rat(5));
        assert_eq!(rank_generic(b), 2);
    }

    #[test]
    fn empty_matrix_has_full_kernel() {
        let e = echelon(&[], 4);
        assert_eq!(e.rank(), 0);
        assert_eq!(e.free_columns(), vec![0, 1, 2, 3]);
        assert_eq!(e.kernel_vector(0)[0], BigInt::one());
    }
}
