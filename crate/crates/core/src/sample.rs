//! Random double forms for property checks.
//!
//! Coefficients are integers in `[-9, 9]` on a sparse support of density
//! 1/4. Curvature-type samples are projected orthogonally onto the
//! symmetric forms satisfying the first Bianchi identity; effective samples
//! onto the kernel of the contraction.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::Zero;
use rand::Rng;

use crate::basis::table;
use crate::error::Result;
use crate::form::DoubleForm;
use crate::linalg::{KernelProjector, Matrix};
use crate::scalar::{int, Scalar};

fn sparse_coeff<R: Rng + ?Sized>(rng: &mut R) -> Scalar {
    if rng.gen_ratio(1, 4) {
        int(rng.gen_range(-9..=9))
    } else {
        Scalar::zero()
    }
}

pub fn random_form<R: Rng + ?Sized>(rng: &mut R, n: usize, p: usize, q: usize) -> Result<DoubleForm> {
    DoubleForm::from_fn(n, p, q, |_, _| sparse_coeff(rng))
}

/// Random symmetric element of `D^{p,p}`.
pub fn random_symmetric<R: Rng + ?Sized>(rng: &mut R, n: usize, p: usize) -> Result<DoubleForm> {
    let f = random_form(rng, n, p, p)?;
    Ok(&f + &f.transpose())
}

/// Random element of `C_1^p`: symmetric with vanishing Bianchi sum.
pub fn random_bianchi<R: Rng + ?Sized>(rng: &mut R, n: usize, p: usize) -> Result<DoubleForm> {
    let f = random_form(rng, n, p, p)?;
    let proj = bianchi_projector(n, p)?;
    DoubleForm::from_coeffs(n, p, p, proj.project(f.coeffs()))
}

/// Random effective (contraction-free) element of `D^{p,q}`.
pub fn random_effective<R: Rng + ?Sized>(rng: &mut R, n: usize, p: usize, q: usize) -> Result<DoubleForm> {
    let f = random_form(rng, n, p, q)?;
    let proj = effective_projector(n, p, q)?;
    DoubleForm::from_coeffs(n, p, q, proj.project(f.coeffs()))
}

/// Random element of `C_1^p` that is also effective.
pub fn random_effective_bianchi<R: Rng + ?Sized>(rng: &mut R, n: usize, p: usize) -> Result<DoubleForm> {
    let f = random_bianchi(rng, n, p)?;
    let d = crate::decomposition::decompose(&f)?;
    Ok(d.components()[p].clone())
}

type Cache = Mutex<HashMap<(u8, usize, usize, usize), Arc<KernelProjector>>>;

fn cached(key: (u8, usize, usize, usize), build: impl FnOnce() -> Result<KernelProjector>) -> Result<Arc<KernelProjector>> {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().expect("projector cache poisoned").get(&key) {
        return Ok(p.clone());
    }
    let p = Arc::new(build()?);
    cache
        .lock()
        .expect("projector cache poisoned")
        .insert(key, p.clone());
    Ok(p)
}

/// Orthogonal projector of `D^{p,p}` onto `C_1^p`.
pub fn bianchi_projector(n: usize, p: usize) -> Result<Arc<KernelProjector>> {
    cached((0, n, p, p), || {
        let dim = DoubleForm::zero(n, p, p)?.coeffs().len();
        let m = table(n).subsets(p).len();
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for r in 0..m {
            for c in r + 1..m {
                let mut row = vec![Scalar::zero(); dim];
                row[r * m + c] = int(1);
                row[c * m + r] = int(-1);
                rows.push(row);
            }
        }
        rows.extend(operator_rows(n, p, p, |f| f.bianchi_sum())?);
        Ok(KernelProjector::new(&Matrix::from_rows(rows)?))
    })
}

/// Orthogonal projector of `D^{p,q}` onto the kernel of the contraction.
pub fn effective_projector(n: usize, p: usize, q: usize) -> Result<Arc<KernelProjector>> {
    cached((1, n, p, q), || {
        let rows = operator_rows(n, p, q, |f| f.contract())?;
        let dim = DoubleForm::zero(n, p, q)?.coeffs().len();
        if rows.is_empty() {
            return Ok(KernelProjector::new(&Matrix::zeros(0, dim)));
        }
        Ok(KernelProjector::new(&Matrix::from_rows(rows)?))
    })
}

/// Rows of the matrix of a linear operator on `D^{p,q}`.
pub(crate) fn operator_rows(
    n: usize,
    p: usize,
    q: usize,
    op: impl Fn(&DoubleForm) -> DoubleForm,
) -> Result<Vec<Vec<Scalar>>> {
    let zero = DoubleForm::zero(n, p, q)?;
    let dim = zero.coeffs().len();
    let mut columns = Vec::with_capacity(dim);
    for k in 0..dim {
        let mut coeffs = vec![Scalar::zero(); dim];
        coeffs[k] = int(1);
        columns.push(op(&DoubleForm::from_coeffs(n, p, q, coeffs)?).into_coeffs());
    }
    let out_dim = columns.first().map_or(0, Vec::len);
    Ok((0..out_dim)
        .map(|r| columns.iter().map(|col| col[r].clone()).collect())
        .collect())
}
