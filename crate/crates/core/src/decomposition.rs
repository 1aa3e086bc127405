//! Orthogonal splitting `D^{p,p} = E^{p,p} ⊕ g E^{p-1,p-1} ⊕ … ⊕ g^p D^{0,0}`
//! into effective components, and the closed-form Hodge star of curvature
//! structures satisfying the first Bianchi identity.

use num_traits::{One, Zero};

use crate::basis::binomial;
use crate::error::{FormError, Result};
use crate::form::DoubleForm;
use crate::linalg::Matrix;
use crate::sample::operator_rows;
use crate::scalar::{factorial, int, inv_factorial, Scalar};

/// Effective components `[ω_0, …, ω_p]` of `ω = Σ_k g^{p-k} ω_k`, with
/// `ω_k ∈ E^{k,k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EffectiveDecomposition {
    n: usize,
    p: usize,
    components: Vec<DoubleForm>,
}

impl EffectiveDecomposition {
    /// Validates degrees and effectiveness of each component.
    pub fn new(n: usize, p: usize, components: Vec<DoubleForm>) -> Result<Self> {
        if components.len() != p + 1 {
            return Err(FormError::LengthMismatch {
                expected: p + 1,
                got: components.len(),
            });
        }
        for (k, c) in components.iter().enumerate() {
            if c.n() != n {
                return Err(FormError::DimensionMismatch {
                    left: n,
                    right: c.n(),
                });
            }
            if c.bidegree() != (k as isize, k as isize) {
                return Err(FormError::Range(format!(
                    "component {k} must lie in D^({k},{k}), got D^({},{})",
                    c.p(),
                    c.q()
                )));
            }
            if k > 0 && !is_effective(c) {
                return Err(FormError::Range(format!("component {k} is not effective")));
            }
        }
        Ok(Self { n, p, components })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Components ordered `ω_0 → ω_p`.
    pub fn components(&self) -> &[DoubleForm] {
        &self.components
    }

    pub fn component(&self, k: usize) -> &DoubleForm {
        &self.components[k]
    }

    /// `Σ_k g^{p-k} ω_k`.
    pub fn reconstruct(&self) -> DoubleForm {
        self.components
            .iter()
            .enumerate()
            .map(|(k, w)| w.mul_g_power(self.p - k))
            .sum()
    }
}

pub fn is_effective(omega: &DoubleForm) -> bool {
    omega.contract().is_zero()
}

/// Splits a square double form into its effective components.
///
/// Component `k` is
/// `(n-p-k)!/((p-k)!(n-2k)!) · [c^{p-k}ω + Σ_{r=1}^{k} (-1)^r / Π_{i<r}(n-2k+2+i) · g^r/r! · c^{p-k+r}ω]`.
/// When `2p > n` only components `k <= n-p` can be nonzero, since
/// `D^{p,p} = g^{2p-n} D^{n-p,n-p}`; the same formula yields them.
pub fn decompose(omega: &DoubleForm) -> Result<EffectiveDecomposition> {
    let (p, q) = omega.bidegree();
    if p != q {
        return Err(FormError::NotSquare {
            p: p.max(0) as usize,
            q: q.max(0) as usize,
        });
    }
    if !omega.in_range() {
        return Err(FormError::DegreeOutOfRange {
            n: omega.n(),
            p: p.max(0) as usize,
            q: q.max(0) as usize,
        });
    }
    let n = omega.n();
    let p = p as usize;
    // c^j ω for j = 0..=p
    let mut contractions = Vec::with_capacity(p + 1);
    contractions.push(omega.clone());
    for j in 1..=p {
        let next = contractions[j - 1].contract();
        contractions.push(next);
    }
    let top = p.min(n - p);
    let mut components = Vec::with_capacity(p + 1);
    for k in 0..=p {
        if k > top {
            components.push(DoubleForm::zero(n, k, k)?);
            continue;
        }
        let mut acc = contractions[p - k].clone();
        let mut denom = Scalar::one();
        for r in 1..=k {
            denom *= int((n - 2 * k + 2 + (r - 1)) as i64);
            let coeff = int(if r % 2 == 0 { 1 } else { -1 }) / (&denom * factorial(r));
            acc = &acc + &contractions[p - k + r].mul_g_power(r).scale(&coeff);
        }
        let lead = factorial(n - p - k) / (factorial(p - k) * factorial(n - 2 * k));
        components.push(acc.scale(&lead));
    }
    Ok(EffectiveDecomposition { n, p, components })
}

/// The top effective component `ω_p` (the conformal part).
pub fn project_conformal(omega: &DoubleForm) -> Result<DoubleForm> {
    let d = decompose(omega)?;
    Ok(d.components[d.p].clone())
}

/// `c^k ω` assembled from the effective components:
/// `Σ_{i=k}^{p} i! Π_{j=1}^{k}(n-2p+i+j) g^{i-k}/(i-k)! ω_{p-i}`.
pub fn contract_power_from_components(d: &EffectiveDecomposition, k: usize) -> Result<DoubleForm> {
    let (n, p) = (d.n as i64, d.p);
    if k > p {
        return DoubleForm::zeroed(d.n, p as isize - k as isize, p as isize - k as isize);
    }
    let mut acc = DoubleForm::zero(d.n, p - k, p - k)?;
    for i in k..=p {
        let prod = (1..=k as i64).fold(int(1), |a, j| a * int(n - 2 * p as i64 + i as i64 + j));
        let coeff = factorial(i) * prod * inv_factorial((i - k) as isize);
        if coeff.is_zero() {
            continue;
        }
        acc = &acc + &d.components[p - i].mul_g_power(i - k).scale(&coeff);
    }
    Ok(acc)
}

/// Matrix of `ω ↦ g^l ω` from `D^{p,q}` to `D^{p+l,q+l}` in the lex basis.
pub fn g_power_matrix(n: usize, p: usize, q: usize, l: usize) -> Result<Matrix> {
    let src = binomial(n, p) * binomial(n, q);
    let dst = binomial(n, p + l) * binomial(n, q + l);
    let budget = crate::form::cell_budget();
    if src.saturating_mul(dst) > budget {
        return Err(FormError::CellBudgetExceeded {
            n,
            p,
            q,
            cells: src.saturating_mul(dst),
            budget,
        });
    }
    let rows = operator_rows(n, p, q, |f| f.mul_g_power(l))?;
    if rows.is_empty() {
        return Ok(Matrix::zeros(0, src));
    }
    Matrix::from_rows(rows)
}

/// Exact rank of multiplication by `g^l` on `D^{p,q}`.
pub fn map_rank(n: usize, p: usize, q: usize, l: usize) -> Result<usize> {
    Ok(g_power_matrix(n, p, q, l)?.rank())
}

/// A basis of the kernel of `g^l` on `D^{p,q}`.
pub fn g_power_kernel(n: usize, p: usize, q: usize, l: usize) -> Result<Vec<DoubleForm>> {
    g_power_matrix(n, p, q, l)?
        .null_space()
        .into_iter()
        .map(|v| DoubleForm::from_coeffs(n, p, q, v))
        .collect()
}

fn check_bianchi_structure(omega: &DoubleForm) -> Result<usize> {
    let (p, q) = omega.bidegree();
    if p != q {
        return Err(FormError::NotSquare {
            p: p.max(0) as usize,
            q: q.max(0) as usize,
        });
    }
    if !omega.is_symmetric()? {
        return Err(FormError::NotSymmetric);
    }
    if !omega.bianchi_sum().is_zero() {
        return Err(FormError::BianchiViolated);
    }
    Ok(p as usize)
}

/// `*(g^{k-p} ω)/(k-p)!` for `ω ∈ C_1^p`, by the contraction formula
/// `Σ_{r=max(0,p-n+k)}^{p} (-1)^{r+p}/r! · g^{n-k-p+r}/(n-k-p+r)! · c^r ω`.
pub fn star_bianchi(omega: &DoubleForm, k: usize) -> Result<DoubleForm> {
    let p = check_bianchi_structure(omega)?;
    let n = omega.n();
    if p < 1 || k < p || k > n {
        return Err(FormError::Range(format!(
            "star_bianchi needs 1 <= p <= k <= n, got p={p}, k={k}, n={n}"
        )));
    }
    let deg = n - k;
    let mut acc = DoubleForm::zero(n, deg, deg)?;
    let first = (p + k).saturating_sub(n);
    let mut cr = omega.contract_power(first);
    for r in first..=p {
        let gp = n + r - k - p;
        let sign = if (r + p) % 2 == 0 { int(1) } else { int(-1) };
        let coeff = sign * inv_factorial(r as isize) * inv_factorial(gp as isize);
        acc = &acc + &cr.mul_g_power(gp).scale(&coeff);
        cr = cr.contract();
    }
    Ok(acc)
}

/// `*(g^l ω)` from the effective components of `ω ∈ C_1^p`:
/// `Σ_{i=0}^{min(p, n-p-l)} (p-i+l)! (-1)^i / (n-p-l-i)! · g^{n-p-l-i} ω_i`.
pub fn star_in_components(d: &EffectiveDecomposition, l: usize) -> Result<DoubleForm> {
    let (n, p) = (d.n, d.p);
    let deg = n as isize - p as isize - l as isize;
    let mut acc = DoubleForm::zeroed(n, deg, deg)?;
    if deg < 0 {
        return Ok(acc);
    }
    let last = p.min(deg as usize);
    for i in 0..=last {
        let gp = deg as usize - i;
        let sign = if i % 2 == 0 { int(1) } else { int(-1) };
        let coeff = factorial(p - i + l) * sign * inv_factorial(gp as isize);
        acc = &acc + &d.components[i].mul_g_power(gp).scale(&coeff);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::IndexSet;
    use crate::sample::{random_bianchi, random_form};
    use crate::scalar::frac;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn g(n: usize) -> DoubleForm {
        DoubleForm::metric(n).unwrap()
    }

    #[test]
    fn pure_metric_part() {
        let omega = g(4).pow(2).scale(&frac(1, 2));
        let d = decompose(&omega).unwrap();
        assert_eq!(d.component(0).as_scalar(), Some(&frac(1, 2)));
        assert!(d.component(1).is_zero());
        assert!(d.component(2).is_zero());
        assert!(project_conformal(&g(4).pow(2)).unwrap().is_zero());
    }

    #[test]
    fn reconstruct_trivial_cases() {
        let zero = EffectiveDecomposition::new(
            4,
            2,
            (0..=2).map(|k| DoubleForm::zero(4, k, k).unwrap()).collect(),
        )
        .unwrap();
        assert!(zero.reconstruct().is_zero());
        let mut comps: Vec<_> = (0..=2).map(|k| DoubleForm::zero(4, k, k).unwrap()).collect();
        comps[0] = DoubleForm::scalar(4, int(1)).unwrap();
        let d = EffectiveDecomposition::new(4, 2, comps).unwrap();
        assert_eq!(d.reconstruct(), g(4).pow(2));
    }

    #[test]
    fn rejects_non_effective_components() {
        let comps = vec![DoubleForm::scalar(3, int(1)).unwrap(), g(3)];
        assert!(EffectiveDecomposition::new(3, 1, comps).is_err());
    }

    #[test]
    fn effectiveness() {
        assert!(!is_effective(&g(4)));
        let n = 4;
        let s = |i: &[usize]| IndexSet::new(n, i).unwrap();
        // e_0⊗e_1 has zero trace
        assert!(is_effective(&DoubleForm::basis(n, &s(&[0]), &s(&[1])).unwrap()));
    }

    #[test]
    fn round_trip_all_degrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=5 {
            for p in 0..=n {
                let omega = random_form(&mut rng, n, p, p).unwrap();
                let d = decompose(&omega).unwrap();
                assert_eq!(d.reconstruct(), omega, "n={n} p={p}");
                for (k, c) in d.components().iter().enumerate().skip(1) {
                    assert!(is_effective(c), "n={n} p={p} k={k}");
                }
            }
        }
    }

    #[test]
    fn forced_metric_factor_matches_linear_solve() {
        // for 2p > n, ω = g^{2p-n} x with x ∈ D^{n-p,n-p}; decomposing x directly must agree
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (n, p) in [(3, 2), (4, 3), (5, 3), (5, 4)] {
            let omega = random_form(&mut rng, n, p, p).unwrap();
            let m = n - p;
            let x = g_power_matrix(n, m, m, 2 * p - n)
                .unwrap()
                .solve(omega.coeffs())
                .unwrap();
            let x = DoubleForm::from_coeffs(n, m, m, x).unwrap();
            let dx = decompose(&x).unwrap();
            let d = decompose(&omega).unwrap();
            for k in 0..=p {
                if k <= m {
                    assert_eq!(d.component(k), dx.component(k), "n={n} p={p} k={k}");
                } else {
                    assert!(d.component(k).is_zero());
                }
            }
        }
    }

    #[test]
    fn non_square_is_rejected() {
        let f = DoubleForm::zero(4, 1, 2).unwrap();
        assert!(matches!(decompose(&f), Err(FormError::NotSquare { p: 1, q: 2 })));
    }

    #[test]
    fn map_rank_examples() {
        assert_eq!(map_rank(5, 1, 1, 1).unwrap(), 25);
        assert_eq!(map_rank(4, 2, 2, 1).unwrap(), 16);
        assert_eq!(map_rank(3, 1, 1, 1).unwrap(), 9);
        assert_eq!(g_power_kernel(3, 1, 1, 1).unwrap().len(), 0);
    }

    #[test]
    fn star_bianchi_rejects_non_bianchi() {
        let n = 4;
        let s = |i: &[usize]| IndexSet::new(n, i).unwrap();
        let a = DoubleForm::basis(n, &s(&[0, 1]), &s(&[2, 3])).unwrap();
        let sym = &a + &a.transpose();
        assert_eq!(star_bianchi(&sym, 2), Err(FormError::BianchiViolated));
        assert_eq!(star_bianchi(&a, 2), Err(FormError::NotSymmetric));
        assert!(star_bianchi(&g(4).pow(2), 1).is_err());
    }

    #[test]
    fn star_bianchi_special_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 4;
        let r = random_bianchi(&mut rng, n, 2).unwrap();
        let c1 = r.contract();
        let c2 = c1.contract();
        // k = n
        assert_eq!(star_bianchi(&r, n).unwrap(), c2.scale(&frac(1, 2)));
        // k = n - 1
        let expect = &c2.mul_g_power(1).scale(&frac(1, 2)) - &c1;
        assert_eq!(star_bianchi(&r, n - 1).unwrap(), expect);
        // k = p = 2, n = 4: *R = R - g·cR + g²/4 · c²R
        let expect = &(&r - &c1.mul_g_power(1)) + &c2.mul_g_power(2).scale(&frac(1, 4));
        assert_eq!(star_bianchi(&r, 2).unwrap(), expect);
        assert_eq!(r.hodge(), expect);
    }

    #[test]
    fn star_in_components_of_metric_power() {
        for n in 2..=6 {
            for p in 0..=n {
                let omega = g(n).pow(p).scale(&inv_factorial(p as isize));
                let d = decompose(&omega).unwrap();
                let expect = g(n).pow(n - p).scale(&inv_factorial((n - p) as isize));
                assert_eq!(star_in_components(&d, 0).unwrap(), expect, "n={n} p={p}");
            }
        }
    }
}
