//! Dense exact linear algebra over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::basis::{binomial, IndexSet};
use crate::error::{FormError, Result};
use crate::scalar::Scalar;

/// Row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in &rows {
            if row.len() != cols {
                return Err(FormError::LengthMismatch {
                    expected: cols,
                    got: row.len(),
                });
            }
            data.extend(row.iter().cloned());
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[Scalar]) -> Vec<Scalar> {
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Scalar::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Exact rank by fraction-free (Bareiss) elimination over the integers.
    pub fn rank(&self) -> usize {
        let mut m = self.integer_rows();
        bareiss(&mut m, self.cols).0
    }

    /// Determinant of a square matrix.
    pub fn det(&self) -> Result<Scalar> {
        if self.rows != self.cols {
            return Err(FormError::LengthMismatch {
                expected: self.rows,
                got: self.cols,
            });
        }
        if self.rows == 0 {
            return Ok(Scalar::one());
        }
        // det(A) = det(D·A) / Π d_i where D clears each row's denominators
        let mut scale = BigInt::one();
        let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let l = row_lcm(self.row(r));
            scale *= &l;
            m.push(
                self.row(r)
                    .iter()
                    .map(|x| (x * Scalar::from_integer(l.clone())).to_integer())
                    .collect(),
            );
        }
        let (rank, det, swaps) = bareiss(&mut m, self.cols);
        if rank < self.rows {
            return Ok(Scalar::zero());
        }
        let det = if swaps % 2 == 0 { det } else { -det };
        Ok(Scalar::new(det, scale))
    }

    /// Reduced row echelon form; returns the pivot column of each nonzero row.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(row, pr);
            let inv = self.get(row, col).recip();
            for c in col..self.cols {
                let v = self.get(row, c) * &inv;
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r == row || self.get(r, col).is_zero() {
                    continue;
                }
                let f = self.get(r, col).clone();
                for c in col..self.cols {
                    if self.get(row, c).is_zero() {
                        continue;
                    }
                    let v = self.get(r, c) - &f * self.get(row, c);
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    /// A basis of the null space `{x : A x = 0}`.
    pub fn null_space(&self) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Scalar::zero(); self.cols];
                v[f] = Scalar::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -m.get(r, f).clone();
                }
                v
            })
            .collect()
    }

    /// One solution of `A x = b`, with free variables set to zero.
    pub fn solve(&self, b: &[Scalar]) -> Result<Vec<Scalar>> {
        if b.len() != self.rows {
            return Err(FormError::LengthMismatch {
                expected: self.rows,
                got: b.len(),
            });
        }
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Err(FormError::Inconsistent);
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(r, self.cols).clone();
        }
        Ok(x)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|r| {
                let l = Scalar::from_integer(row_lcm(self.row(r)));
                self.row(r).iter().map(|x| (x * &l).to_integer()).collect()
            })
            .collect()
    }
}

fn row_lcm(row: &[Scalar]) -> BigInt {
    row.iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Bareiss elimination in place. Returns (rank, last pivot, row swaps); the
/// last pivot equals the determinant for a full-rank square matrix.
fn bareiss(m: &mut [Vec<BigInt>], cols: usize) -> (usize, BigInt, usize) {
    let rows = m.len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut swaps = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pr) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        if pr != rank {
            m.swap(pr, rank);
            swaps += 1;
        }
        let pivot = m[rank][col].clone();
        for r in rank + 1..rows {
            let factor = m[r][col].clone();
            for c in col + 1..cols {
                let v = (&pivot * &m[r][c] - &factor * &m[rank][c]) / &prev;
                m[r][c] = v;
            }
            m[r][col] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
    }
    (rank, prev, swaps)
}

/// Orthogonal projection onto the null space of a constraint matrix.
///
/// Stores an independent set of constraint rows `C` and `(C Cᵀ)⁻¹`, so that
/// `P x = x − Cᵀ (C Cᵀ)⁻¹ C x`.
#[derive(Clone, Debug)]
pub struct KernelProjector {
    constraints: Matrix,
    gram_inverse: Matrix,
}

impl KernelProjector {
    pub fn new(constraints: &Matrix) -> Self {
        let mut reduced = constraints.clone();
        let pivots = reduced.rref();
        let rank = pivots.len();
        let dim = constraints.ncols();
        let mut c = Matrix::zeros(rank, dim);
        for r in 0..rank {
            for k in 0..dim {
                c.set(r, k, reduced.get(r, k).clone());
            }
        }
        let mut gram = Matrix::zeros(rank, 2 * rank);
        for i in 0..rank {
            for j in i..rank {
                let v = c
                    .row(i)
                    .iter()
                    .zip(c.row(j))
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Scalar::zero(), |acc, (a, b)| acc + a * b);
                gram.set(i, j, v.clone());
                gram.set(j, i, v);
            }
            gram.set(i, rank + i, Scalar::one());
        }
        gram.rref();
        let mut gram_inverse = Matrix::zeros(rank, rank);
        for i in 0..rank {
            for j in 0..rank {
                gram_inverse.set(i, j, gram.get(i, rank + j).clone());
            }
        }
        Self {
            constraints: c,
            gram_inverse,
        }
    }

    pub fn kernel_dim(&self) -> usize {
        self.constraints.ncols() - self.constraints.nrows()
    }

    pub fn project(&self, x: &[Scalar]) -> Vec<Scalar> {
        let cx = self.constraints.mul_vec(x);
        let y = self.gram_inverse.mul_vec(&cx);
        let mut out = x.to_vec();
        for (r, yr) in y.iter().enumerate() {
            if yr.is_zero() {
                continue;
            }
            for (o, c) in out.iter_mut().zip(self.constraints.row(r)) {
                if !c.is_zero() {
                    *o -= c * yr;
                }
            }
        }
        out
    }
}

/// Coordinates of `v_1 ∧ … ∧ v_k` on the lex-ordered basis `e_I` of `Λ^k`:
/// the coefficient on `e_I` is the minor of the rows `I`.
pub fn blade_coordinates(n: usize, vectors: &[Vec<Scalar>]) -> Result<Vec<Scalar>> {
    for v in vectors {
        if v.len() != n {
            return Err(FormError::LengthMismatch {
                expected: n,
                got: v.len(),
            });
        }
    }
    let k = vectors.len();
    (0..binomial(n, k))
        .map(|r| {
            let set = IndexSet::unrank(n, k, r).expect("rank in range");
            let rows: Vec<Vec<Scalar>> = set
                .iter()
                .map(|i| vectors.iter().map(|v| v[i].clone()).collect())
                .collect();
            if k == 0 {
                return Ok(Scalar::one());
            }
            Matrix::from_rows(rows)?.det()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn determinant() {
        assert_eq!(m(&[&[1, 2], &[3, 4]]).det().unwrap(), int(-2));
        assert_eq!(m(&[&[0, 1], &[1, 0]]).det().unwrap(), int(-1));
        assert_eq!(m(&[&[2, 0, 0], &[0, 3, 0], &[0, 0, 4]]).det().unwrap(), int(24));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).det().unwrap(), int(0));
        let half = Matrix::from_rows(vec![vec![frac(1, 2), int(0)], vec![int(0), frac(2, 3)]]).unwrap();
        assert_eq!(half.det().unwrap(), frac(1, 3));
    }

    #[test]
    fn rank_and_null_space() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let ns = a.null_space();
        assert_eq!(ns.len(), 1);
        assert!(a.mul_vec(&ns[0]).iter().all(Zero::is_zero));
        assert_eq!(Matrix::zeros(3, 4).rank(), 0);
    }

    #[test]
    fn solving() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let x = a.solve(&[int(3), int(5)]).unwrap();
        assert_eq!(x, vec![frac(4, 5), frac(7, 5)]);
        let singular = m(&[&[1, 1], &[1, 1]]);
        assert_eq!(singular.solve(&[int(1), int(2)]), Err(FormError::Inconsistent));
    }

    #[test]
    fn projector_is_orthogonal() {
        // kernel of x + y + z = 0
        let p = KernelProjector::new(&m(&[&[1, 1, 1]]));
        assert_eq!(p.kernel_dim(), 2);
        let y = p.project(&[int(3), int(0), int(0)]);
        assert_eq!(y, vec![int(2), int(-1), int(-1)]);
        assert_eq!(p.project(&y), y);
    }

    #[test]
    fn blade_minors() {
        let e0 = vec![int(1), int(0), int(0)];
        let v = vec![int(1), int(2), int(3)];
        let coords = blade_coordinates(3, &[e0, v]).unwrap();
        // (0,1),(0,2),(1,2)
        assert_eq!(coords, vec![int(2), int(3), int(0)]);
    }
}
