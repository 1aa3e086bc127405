//! The bigraded algebra of double forms `D = ⊕ D^{p,q}`.
//!
//! A [`DoubleForm`] in `D^{p,q}` stores one exact coefficient per basis pair
//! `e_I ⊗ e_J`, laid out row-major by the lexicographic ranks of `I` and `J`.
//! The basis is orthonormal and self-dual: `ω(e_I, e_J)` is exactly the
//! stored coefficient.
//!
//! Bidegrees are signed. Outside `0..=n` the space `D^{p,q}` is
//! zero-dimensional, so a product that overflows the top degree, or the
//! contraction of a form with `p = 0`, is the zero element of its true
//! bidegree and composes with everything else without special cases.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicUsize, Ordering};

use num_traits::{One, Zero};

use crate::basis::{binomial, check_dim, insertion_sign, table, wedge_sign_bits, IndexSet};
use crate::error::{FormError, Result};
use crate::linalg::blade_coordinates;
use crate::scalar::{int, Scalar};

pub const DEFAULT_CELL_BUDGET: usize = 10_000_000;

/// Environment variable overriding the cell budget.
pub const CELL_BUDGET_ENV: &str = "DFORMS_CELL_BUDGET";

static CELL_BUDGET: AtomicUsize = AtomicUsize::new(0);

/// Largest coefficient array a single form may allocate.
pub fn cell_budget() -> usize {
    match CELL_BUDGET.load(Ordering::Relaxed) {
        0 => {
            let budget = std::env::var(CELL_BUDGET_ENV)
                .ok()
                .and_then(|v| v.trim().parse().ok())
                .filter(|&v: &usize| v > 0)
                .unwrap_or(DEFAULT_CELL_BUDGET);
            CELL_BUDGET.store(budget, Ordering::Relaxed);
            budget
        }
        b => b,
    }
}

pub fn set_cell_budget(cells: usize) {
    CELL_BUDGET.store(cells.max(1), Ordering::Relaxed);
}

/// Dimension of `Λ^k` for a signed degree.
pub(crate) fn dim_lambda(n: usize, k: isize) -> usize {
    if k < 0 {
        0
    } else {
        binomial(n, k as usize)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct DoubleForm {
    n: usize,
    p: isize,
    q: isize,
    coeffs: Vec<Scalar>,
}

impl DoubleForm {
    /// The zero element of `D^{p,q}`; requires `p, q <= n`.
    pub fn zero(n: usize, p: usize, q: usize) -> Result<Self> {
        check_dim(n)?;
        if p > n || q > n {
            return Err(FormError::DegreeOutOfRange { n, p, q });
        }
        Self::zeroed(n, p as isize, q as isize)
    }

    /// Zero element of any signed bidegree, subject to the cell budget.
    pub(crate) fn zeroed(n: usize, p: isize, q: isize) -> Result<Self> {
        let rows = dim_lambda(n, p);
        let cols = dim_lambda(n, q);
        let cells = rows.saturating_mul(cols);
        let budget = cell_budget();
        if cells > budget {
            return Err(FormError::CellBudgetExceeded {
                n,
                p: p as usize,
                q: q as usize,
                cells,
                budget,
            });
        }
        Ok(Self {
            n,
            p,
            q,
            coeffs: vec![Scalar::zero(); cells],
        })
    }

    fn zeroed_unchecked(n: usize, p: isize, q: isize) -> Self {
        Self::zeroed(n, p, q).expect("cell budget exceeded")
    }

    /// `e_I ⊗ e_J`.
    pub fn basis(n: usize, i: &IndexSet, j: &IndexSet) -> Result<Self> {
        if i.n() != n || j.n() != n {
            return Err(FormError::DimensionMismatch {
                left: n,
                right: if i.n() != n { i.n() } else { j.n() },
            });
        }
        let mut f = Self::zero(n, i.len(), j.len())?;
        f.set(i, j, Scalar::one());
        Ok(f)
    }

    /// The metric `g = Σ e_i ⊗ e_i` in `D^{1,1}`.
    pub fn metric(n: usize) -> Result<Self> {
        let mut g = Self::zero(n, 1, 1)?;
        for i in 0..n {
            g.coeffs[i * n + i] = Scalar::one();
        }
        Ok(g)
    }

    /// A scalar as an element of `D^{0,0}`.
    pub fn scalar(n: usize, value: Scalar) -> Result<Self> {
        let mut f = Self::zero(n, 0, 0)?;
        f.coeffs[0] = value;
        Ok(f)
    }

    pub fn from_fn(
        n: usize,
        p: usize,
        q: usize,
        mut f: impl FnMut(&IndexSet, &IndexSet) -> Scalar,
    ) -> Result<Self> {
        let mut out = Self::zero(n, p, q)?;
        let t = table(n);
        let cols = out.cols();
        for (r, &ib) in t.subsets(p).iter().enumerate() {
            let i = IndexSet::from_bits(n, ib);
            for (c, &jb) in t.subsets(q).iter().enumerate() {
                out.coeffs[r * cols + c] = f(&i, &IndexSet::from_bits(n, jb));
            }
        }
        Ok(out)
    }

    /// Builds `D^{p,q}` from a row-major coefficient vector.
    pub fn from_coeffs(n: usize, p: usize, q: usize, coeffs: Vec<Scalar>) -> Result<Self> {
        let mut out = Self::zero(n, p, q)?;
        if coeffs.len() != out.coeffs.len() {
            return Err(FormError::LengthMismatch {
                expected: out.coeffs.len(),
                got: coeffs.len(),
            });
        }
        out.coeffs = coeffs;
        Ok(out)
    }

    /// A form in `D^{1,1}` from its `n × n` matrix.
    pub fn from_matrix(rows: &[Vec<Scalar>]) -> Result<Self> {
        let n = rows.len();
        let mut out = Self::zero(n, 1, 1)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(FormError::LengthMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            out.coeffs[i * n..(i + 1) * n].clone_from_slice(row);
        }
        Ok(out)
    }

    /// Diagonal element of `D^{1,1}`.
    pub fn diagonal(values: &[Scalar]) -> Result<Self> {
        let n = values.len();
        let mut out = Self::zero(n, 1, 1)?;
        for (i, v) in values.iter().enumerate() {
            out.coeffs[i * n + i] = v.clone();
        }
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> isize {
        self.p
    }

    pub fn q(&self) -> isize {
        self.q
    }

    pub fn bidegree(&self) -> (isize, isize) {
        (self.p, self.q)
    }

    /// Whether `0 <= p, q <= n`, i.e. the space is not forced to vanish.
    pub fn in_range(&self) -> bool {
        (0..=self.n as isize).contains(&self.p) && (0..=self.n as isize).contains(&self.q)
    }

    pub fn rows(&self) -> usize {
        dim_lambda(self.n, self.p)
    }

    pub fn cols(&self) -> usize {
        dim_lambda(self.n, self.q)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Scalar> {
        self.coeffs
    }

    pub fn get(&self, i: &IndexSet, j: &IndexSet) -> &Scalar {
        debug_assert_eq!(i.len() as isize, self.p);
        debug_assert_eq!(j.len() as isize, self.q);
        let t = table(self.n);
        &self.coeffs[t.rank(i.bits()) * self.cols() + t.rank(j.bits())]
    }

    pub fn set(&mut self, i: &IndexSet, j: &IndexSet, value: Scalar) {
        assert_eq!(i.len() as isize, self.p, "row index set has the wrong size");
        assert_eq!(j.len() as isize, self.q, "column index set has the wrong size");
        let t = table(self.n);
        let cols = self.cols();
        self.coeffs[t.rank(i.bits()) * cols + t.rank(j.bits())] = value;
    }

    /// Nonzero entries `(I, J, coefficient)` in `(rank I, rank J)` order.
    pub fn entries(&self) -> impl Iterator<Item = (IndexSet, IndexSet, &Scalar)> + '_ {
        let cols = self.cols();
        let t = table(self.n);
        let n = self.n;
        let rows = t.subsets(self.p.max(0) as usize);
        let colsets = t.subsets(self.q.max(0) as usize);
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(k, v)| {
                (
                    IndexSet::from_bits(n, rows[k / cols]),
                    IndexSet::from_bits(n, colsets[k % cols]),
                    v,
                )
            })
    }

    fn raw_entries(&self) -> Vec<(u32, u32, &Scalar)> {
        self.entries().map(|(i, j, v)| (i.bits(), j.bits(), v)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The value of an element of `D^{0,0}`.
    pub fn as_scalar(&self) -> Option<&Scalar> {
        (self.p == 0 && self.q == 0).then(|| &self.coeffs[0])
    }

    /// Coefficient on `vol ⊗ vol` of an element of `D^{n,n}`.
    pub fn top_coefficient(&self) -> Option<&Scalar> {
        let n = self.n as isize;
        (self.p == n && self.q == n).then(|| &self.coeffs[0])
    }

    fn check_same_space(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(FormError::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        if self.bidegree() != other.bidegree() {
            return Err(bidegree_mismatch(self, other));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self {
            coeffs,
            ..self.shape()
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(Self {
            coeffs,
            ..self.shape()
        })
    }

    pub fn scale(&self, a: &Scalar) -> Self {
        let coeffs = if a.is_zero() {
            vec![Scalar::zero(); self.coeffs.len()]
        } else {
            self.coeffs.iter().map(|c| c * a).collect()
        };
        Self {
            coeffs,
            ..self.shape()
        }
    }

    fn shape(&self) -> Self {
        Self {
            n: self.n,
            p: self.p,
            q: self.q,
            coeffs: Vec::new(),
        }
    }

    /// The product `D^{p,q} × D^{r,s} → D^{p+r,q+s}`,
    /// `(e_I⊗e_J)·(e_K⊗e_L) = (e_I∧e_K)⊗(e_J∧e_L)`.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(FormError::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let n = self.n;
        let mut out = Self::zeroed(n, self.p + other.p, self.q + other.q)?;
        if out.coeffs.is_empty() {
            return Ok(out);
        }
        let t = table(n);
        let cols = out.cols();
        let right = other.raw_entries();
        for (i, j, a) in self.raw_entries() {
            for &(k, l, b) in &right {
                if i & k != 0 || j & l != 0 {
                    continue;
                }
                let s = wedge_sign_bits(i, k) * wedge_sign_bits(j, l);
                let idx = t.rank(i | k) * cols + t.rank(j | l);
                let prod = a * b;
                if s > 0 {
                    out.coeffs[idx] += prod;
                } else {
                    out.coeffs[idx] -= prod;
                }
            }
        }
        Ok(out)
    }

    /// `g^l · ω`.
    pub fn mul_g_power(&self, l: usize) -> Self {
        let g = Self::metric(self.n).expect("dimension already validated");
        let mut out = self.clone();
        for _ in 0..l {
            out = &g * &out;
        }
        out
    }

    /// `ω^k`, with `ω^0 = 1`.
    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::scalar(self.n, Scalar::one()).expect("dimension already validated");
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Contraction `c: D^{p,q} → D^{p-1,q-1}`,
    /// `(cω)(x, y) = Σ_j ω(e_j ∧ x, e_j ∧ y)`.
    pub fn contract(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeroed_unchecked(n, self.p - 1, self.q - 1);
        if out.coeffs.is_empty() {
            return out;
        }
        let t = table(n);
        let cols = out.cols();
        for (i, j, v) in self.raw_entries() {
            let mut common = i & j;
            while common != 0 {
                let b = common.trailing_zeros() as usize;
                common &= common - 1;
                let (ri, rj) = (i & !(1 << b), j & !(1 << b));
                let s = insertion_sign(b, ri) * insertion_sign(b, rj);
                let idx = t.rank(ri) * cols + t.rank(rj);
                if s > 0 {
                    out.coeffs[idx] += v;
                } else {
                    out.coeffs[idx] -= v;
                }
            }
        }
        out
    }

    /// `c^k ω`.
    pub fn contract_power(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |acc, _| acc.contract())
    }

    pub fn try_inner(&self, other: &Self) -> Result<Scalar> {
        if self.n != other.n {
            return Err(FormError::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        if self.bidegree() != other.bidegree() {
            return Ok(Scalar::zero());
        }
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .fold(Scalar::zero(), |acc, (a, b)| acc + a * b))
    }

    /// Inner product induced by the orthonormal basis; distinct bidegrees are orthogonal.
    ///
    /// Panics if the ambient dimensions differ.
    pub fn inner(&self, other: &Self) -> Scalar {
        self.try_inner(other).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn norm_sq(&self) -> Scalar {
        self.inner(self)
    }

    /// Hodge star on both factors, `D^{p,q} → D^{n-p,n-q}`.
    pub fn hodge(&self) -> Self {
        let n = self.n;
        let top = n as isize;
        let mut out = Self::zeroed_unchecked(n, top - self.p, top - self.q);
        if out.coeffs.is_empty() {
            return out;
        }
        let t = table(n);
        let cols = out.cols();
        for (i, j, v) in self.entries() {
            let (si, ci) = i.complement();
            let (sj, cj) = j.complement();
            let idx = t.rank(ci.bits()) * cols + t.rank(cj.bits());
            out.coeffs[idx] = if si * sj > 0 { v.clone() } else { -v.clone() };
        }
        out
    }

    /// Swaps the two factors, `D^{p,q} → D^{q,p}`.
    pub fn transpose(&self) -> Self {
        let (rows, cols) = (self.rows(), self.cols());
        let mut coeffs = vec![Scalar::zero(); self.coeffs.len()];
        for r in 0..rows {
            for c in 0..cols {
                coeffs[c * rows + r] = self.coeffs[r * cols + c].clone();
            }
        }
        Self {
            n: self.n,
            p: self.q,
            q: self.p,
            coeffs,
        }
    }

    pub fn is_symmetric(&self) -> Result<bool> {
        if self.p != self.q {
            return Err(FormError::NotSquare {
                p: self.p.max(0) as usize,
                q: self.q.max(0) as usize,
            });
        }
        let m = self.rows();
        Ok((0..m).all(|r| (r + 1..m).all(|c| self.coeffs[r * m + c] == self.coeffs[c * m + r])))
    }

    /// First Bianchi sum `D^{p,q} → D^{p+1,q-1}`,
    /// `ℬω(x_1…x_{p+1}, y) = Σ_j (-1)^j ω(x_1…x̂_j…x_{p+1}, x_j ∧ y)`.
    pub fn bianchi_sum(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeroed_unchecked(n, self.p + 1, self.q - 1);
        if out.coeffs.is_empty() {
            return out;
        }
        let t = table(n);
        let cols = out.cols();
        for (i, j, v) in self.raw_entries() {
            let mut movable = j & !i;
            while movable != 0 {
                let m = movable.trailing_zeros() as usize;
                movable &= movable - 1;
                let k = i | (1 << m);
                let l = j & !(1 << m);
                // m sits at 1-based position (#I below m) + 1 in K
                let position_sign = if (i & ((1u32 << m) - 1)).count_ones() % 2 == 0 { -1 } else { 1 };
                let s = position_sign * insertion_sign(m, l);
                let idx = t.rank(k) * cols + t.rank(l);
                if s > 0 {
                    out.coeffs[idx] += v;
                } else {
                    out.coeffs[idx] -= v;
                }
            }
        }
        out
    }

    /// Evaluates ω as a multilinear form, `ω(x_1∧…∧x_p, y_1∧…∧y_q)`, on
    /// vectors given by their coordinates in the orthonormal basis.
    pub fn evaluate(&self, xs: &[Vec<Scalar>], ys: &[Vec<Scalar>]) -> Result<Scalar> {
        if xs.len() as isize != self.p || ys.len() as isize != self.q {
            return Err(FormError::LengthMismatch {
                expected: self.p.max(0) as usize,
                got: xs.len(),
            });
        }
        let x = blade_coordinates(self.n, xs)?;
        let y = blade_coordinates(self.n, ys)?;
        let cols = self.cols();
        let mut acc = Scalar::zero();
        for (k, v) in self.coeffs.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let (a, b) = (&x[k / cols], &y[k % cols]);
            if !a.is_zero() && !b.is_zero() {
                acc += v * a * b;
            }
        }
        Ok(acc)
    }
}

fn bidegree_mismatch(a: &DoubleForm, b: &DoubleForm) -> FormError {
    let u = |x: isize| x.max(0) as usize;
    FormError::BidegreeMismatch(u(a.p), u(a.q), u(b.p), u(b.q))
}

impl fmt::Debug for DoubleForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D^({},{}) n={} {{", self.p, self.q, self.n)?;
        let mut first = true;
        for (i, j, v) in self.entries() {
            if !first {
                write!(f, ",")?;
            }
            first = false;
            write!(f, " {:?}⊗{:?}: {}", i, j, v)?;
        }
        write!(f, " }}")
    }
}

impl Add for &DoubleForm {
    type Output = DoubleForm;
    fn add(self, rhs: &DoubleForm) -> DoubleForm {
        self.try_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &DoubleForm {
    type Output = DoubleForm;
    fn sub(self, rhs: &DoubleForm) -> DoubleForm {
        self.try_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul for &DoubleForm {
    type Output = DoubleForm;
    fn mul(self, rhs: &DoubleForm) -> DoubleForm {
        self.try_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul<&DoubleForm> for &Scalar {
    type Output = DoubleForm;
    fn mul(self, rhs: &DoubleForm) -> DoubleForm {
        rhs.scale(self)
    }
}

impl Neg for &DoubleForm {
    type Output = DoubleForm;
    fn neg(self) -> DoubleForm {
        self.scale(&int(-1))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for DoubleForm {
            type Output = DoubleForm;
            fn $m(self, rhs: DoubleForm) -> DoubleForm {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&DoubleForm> for DoubleForm {
            type Output = DoubleForm;
            fn $m(self, rhs: &DoubleForm) -> DoubleForm {
                (&self).$m(rhs)
            }
        }
        impl $tr<DoubleForm> for &DoubleForm {
            type Output = DoubleForm;
            fn $m(self, rhs: DoubleForm) -> DoubleForm {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for DoubleForm {
    type Output = DoubleForm;
    fn neg(self) -> DoubleForm {
        -&self
    }
}

impl std::iter::Sum for DoubleForm {
    /// Panics on an empty iterator, which has no bidegree.
    fn sum<I: Iterator<Item = DoubleForm>>(mut iter: I) -> DoubleForm {
        let first = iter.next().expect("sum of an empty sequence of forms");
        iter.fold(first, |acc, f| &acc + &f)
    }
}
