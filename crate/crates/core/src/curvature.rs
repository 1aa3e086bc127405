//! Curvature structures and the invariants built from their powers:
//! (p,q)-curvatures, H. Weyl invariants `h_{2q}`, generalized Einstein
//! tensors `T_{2q}` and the `h_4` sign theorems.

use num_traits::{One, Signed, Zero};

use crate::basis::IndexSet;
use crate::decomposition::decompose;
use crate::error::{FormError, Result};
use crate::form::DoubleForm;
use crate::linalg::blade_coordinates;
use crate::scalar::{frac, int, inv_factorial, Scalar};

/// A symmetric double form of bidegree `(p,p)`, usually the Riemann tensor
/// (`p = 2`) or one of its powers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureTensor {
    form: DoubleForm,
    certified_bianchi: bool,
}

impl CurvatureTensor {
    /// Checks symmetry; the Bianchi flag records whether `ℬω = 0`.
    pub fn new(form: DoubleForm) -> Result<Self> {
        if !form.is_symmetric()? {
            return Err(FormError::NotSymmetric);
        }
        let certified_bianchi = form.bianchi_sum().is_zero();
        Ok(Self {
            form,
            certified_bianchi,
        })
    }

    /// Like [`CurvatureTensor::new`] but rejects forms violating the first
    /// Bianchi identity.
    pub fn new_bianchi(form: DoubleForm) -> Result<Self> {
        let t = Self::new(form)?;
        if !t.certified_bianchi {
            return Err(FormError::BianchiViolated);
        }
        Ok(t)
    }

    // products of symmetric Bianchi forms stay in the kernel of ℬ
    fn certified(form: DoubleForm) -> Self {
        debug_assert!(form.bianchi_sum().is_zero());
        Self {
            form,
            certified_bianchi: true,
        }
    }

    pub fn form(&self) -> &DoubleForm {
        &self.form
    }

    pub fn into_form(self) -> DoubleForm {
        self.form
    }

    pub fn n(&self) -> usize {
        self.form.n()
    }

    pub fn degree(&self) -> isize {
        self.form.p()
    }

    pub fn certified_bianchi(&self) -> bool {
        self.certified_bianchi
    }

    pub fn is_flat(&self) -> bool {
        self.form.is_zero()
    }
}

/// A `p`-plane given by `p` linearly independent rational vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    n: usize,
    vectors: Vec<Vec<Scalar>>,
}

impl Frame {
    pub fn new(n: usize, vectors: Vec<Vec<Scalar>>) -> Result<Self> {
        let frame = Self { n, vectors };
        if frame.gram_determinant()?.is_zero() {
            return Err(FormError::DegenerateFrame);
        }
        Ok(frame)
    }

    /// The plane spanned by the coordinate vectors `e_i`, `i ∈ indices`.
    pub fn coordinate(n: usize, indices: &[usize]) -> Result<Self> {
        let set = IndexSet::new(n, indices)?;
        Ok(Self {
            n,
            vectors: set.iter().map(|i| unit(n, i)).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<Scalar>] {
        &self.vectors
    }

    /// `⟨V,V⟩` for `V = v_1∧…∧v_p`.
    pub fn gram_determinant(&self) -> Result<Scalar> {
        let v = blade_coordinates(self.n, &self.vectors)?;
        Ok(v.iter().map(|x| x * x).sum())
    }

    fn coordinate_indices(&self) -> Option<Vec<usize>> {
        let mut out = Vec::with_capacity(self.len());
        for v in &self.vectors {
            let mut nz = v.iter().enumerate().filter(|(_, x)| !x.is_zero());
            let (i, _) = nz.next()?;
            if nz.next().is_some() {
                return None;
            }
            out.push(i);
        }
        Some(out)
    }

    /// A frame of the orthogonal complement. Coordinate planes map to the
    /// complementary coordinate plane; otherwise rational Gram–Schmidt
    /// without normalization.
    pub fn complement(&self) -> Result<Frame> {
        if let Some(idx) = self.coordinate_indices() {
            let rest: Vec<usize> = (0..self.n).filter(|i| !idx.contains(i)).collect();
            return Frame::coordinate(self.n, &rest);
        }
        let dot = |a: &[Scalar], b: &[Scalar]| -> Scalar { a.iter().zip(b).map(|(x, y)| x * y).sum() };
        let mut basis: Vec<Vec<Scalar>> = Vec::new();
        let mut out = Vec::new();
        let candidates = self.vectors.iter().cloned().map(|v| (v, false));
        let units = (0..self.n).map(|i| (unit(self.n, i), true));
        for (mut v, is_unit) in candidates.chain(units) {
            for b in &basis {
                let t = dot(&v, b) / dot(b, b);
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= &t * y;
                }
            }
            if v.iter().all(Zero::is_zero) {
                continue;
            }
            if is_unit {
                out.push(v.clone());
            }
            basis.push(v);
        }
        Frame::new(self.n, out)
    }
}

fn unit(n: usize, i: usize) -> Vec<Scalar> {
    (0..n).map(|k| if k == i { Scalar::one() } else { Scalar::zero() }).collect()
}

/// `R = (λ/2) g²`.
pub fn make_constant_curvature(n: usize, lambda: &Scalar) -> Result<CurvatureTensor> {
    if n < 2 {
        return Err(FormError::Range(format!("constant curvature needs n >= 2, got {n}")));
    }
    let g = DoubleForm::metric(n)?;
    Ok(CurvatureTensor::certified(g.pow(2).scale(&(lambda * frac(1, 2)))))
}

fn check_symmetric_11(b: &DoubleForm) -> Result<()> {
    if b.bidegree() != (1, 1) {
        return Err(FormError::Range(format!(
            "expected a form in D^(1,1), got D^({},{})",
            b.p(),
            b.q()
        )));
    }
    if !b.is_symmetric()? {
        return Err(FormError::NotSymmetric);
    }
    Ok(())
}

/// Gauss equation `R = B²/2` for a second fundamental form `B`.
pub fn make_hypersurface(b: &DoubleForm) -> Result<CurvatureTensor> {
    check_symmetric_11(b)?;
    Ok(CurvatureTensor::certified(b.pow(2).scale(&frac(1, 2))))
}

/// `R = g·h`.
pub fn make_conformally_flat(h: &DoubleForm) -> Result<CurvatureTensor> {
    check_symmetric_11(h)?;
    Ok(CurvatureTensor::certified(h.mul_g_power(1)))
}

/// Riemannian product: the first factor on coordinates `[0, n1)`, the second
/// on `[n1, n1+n2)`.
pub fn make_product(r1: &CurvatureTensor, r2: &CurvatureTensor) -> Result<CurvatureTensor> {
    if !r1.certified_bianchi || !r2.certified_bianchi {
        return Err(FormError::BianchiViolated);
    }
    let (p1, p2) = (r1.degree(), r2.degree());
    if p1 != p2 {
        let u = |x: isize| x.max(0) as usize;
        return Err(FormError::BidegreeMismatch(u(p1), u(p1), u(p2), u(p2)));
    }
    let n = r1.n() + r2.n();
    let p = p1 as usize;
    let mut out = DoubleForm::zero(n, p, p)?;
    for (r, offset) in [(r1, 0), (r2, r1.n())] {
        for (i, j, v) in r.form.entries() {
            out.set(&i.shifted(n, offset), &j.shifted(n, offset), v.clone());
        }
    }
    Ok(CurvatureTensor::certified(out))
}

/// Gauss–Kronecker power `R^q`; zero once `2q > n`.
pub fn power(r: &CurvatureTensor, q: usize) -> CurvatureTensor {
    CurvatureTensor {
        form: r.form.pow(q),
        certified_bianchi: r.certified_bianchi,
    }
}

fn check_riemann(r: &CurvatureTensor) -> Result<()> {
    if r.degree() != 2 {
        return Err(FormError::Range(format!(
            "expected a curvature tensor in D^(2,2), got degree {}",
            r.degree()
        )));
    }
    Ok(())
}

fn check_q(n: usize, q: usize) -> Result<()> {
    if 2 * q > n {
        return Err(FormError::Range(format!("need 2q <= n, got q={q}, n={n}")));
    }
    Ok(())
}

/// `R_{(p,q)} = *(g^{n-2q-p} R^q) / (n-2q-p)!`.
pub fn pq_curvature_tensor(r: &CurvatureTensor, p: usize, q: usize) -> Result<DoubleForm> {
    check_riemann(r)?;
    let n = r.n();
    if q < 1 || 2 * q + p > n {
        return Err(FormError::Range(format!(
            "(p,q)-curvature needs 1 <= q and p <= n-2q, got p={p}, q={q}, n={n}"
        )));
    }
    let l = n - 2 * q - p;
    Ok(r.form.pow(q).mul_g_power(l).hodge().scale(&inv_factorial(l as isize)))
}

/// `K_ω(P) = ω(V,V)/⟨V,V⟩` for `V` the wedge of the frame.
pub fn sectional_curvature(omega: &DoubleForm, frame: &Frame) -> Result<Scalar> {
    let (p, q) = omega.bidegree();
    if p != q {
        return Err(FormError::NotSquare {
            p: p.max(0) as usize,
            q: q.max(0) as usize,
        });
    }
    if omega.n() != frame.n {
        return Err(FormError::DimensionMismatch {
            left: omega.n(),
            right: frame.n,
        });
    }
    if frame.len() as isize != p {
        return Err(FormError::LengthMismatch {
            expected: p.max(0) as usize,
            got: frame.len(),
        });
    }
    let v = blade_coordinates(frame.n, &frame.vectors)?;
    let norm: Scalar = v.iter().map(|x| x * x).sum();
    if norm.is_zero() {
        return Err(FormError::DegenerateFrame);
    }
    let m = v.len();
    let mut acc = Scalar::zero();
    for (k, c) in omega.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (a, b) = (&v[k / m], &v[k % m]);
        if !a.is_zero() && !b.is_zero() {
            acc += c * a * b;
        }
    }
    Ok(acc / norm)
}

/// `s_{(p,q)}(P)`.
pub fn pq_sectional(r: &CurvatureTensor, p: usize, q: usize, frame: &Frame) -> Result<Scalar> {
    sectional_curvature(&pq_curvature_tensor(r, p, q)?, frame)
}

/// `s_p(P) = s_{(p,1)}(P)`.
pub fn p_curvature(r: &CurvatureTensor, p: usize, frame: &Frame) -> Result<Scalar> {
    pq_sectional(r, p, 1, frame)
}

/// `h_{2q} = c^{2q} R^q / (2q)!`, with `h_0 = 1`.
pub fn weyl_invariant(r: &CurvatureTensor, q: usize) -> Result<Scalar> {
    check_riemann(r)?;
    check_q(r.n(), q)?;
    let c = r.form.pow(q).contract_power(2 * q);
    Ok(c.as_scalar().expect("full contraction is a scalar") * inv_factorial(2 * q as isize))
}

/// `T_{2q} = h_{2q} g − c^{2q-1} R^q / (2q-1)!`. Defined for `1 <= q`,
/// `2q <= n`; vanishes identically when `2q = n`.
pub fn einstein_tensor(r: &CurvatureTensor, q: usize) -> Result<DoubleForm> {
    check_riemann(r)?;
    check_q(r.n(), q)?;
    if q < 1 {
        return Err(FormError::Range("Einstein tensor needs q >= 1".into()));
    }
    let c = r.form.pow(q).contract_power(2 * q - 1);
    let h = weyl_invariant(r, q)?;
    let g = DoubleForm::metric(r.n())?;
    Ok(&g.scale(&h) - &c.scale(&inv_factorial(2 * q as isize - 1)))
}

/// `Σ_i ω(e_i, e_i)` for `ω ∈ D^{1,1}`.
pub fn trace11(omega: &DoubleForm) -> Scalar {
    debug_assert_eq!(omega.bidegree(), (1, 1));
    let n = omega.n();
    (0..n).map(|i| omega.coeffs()[i * n + i].clone()).sum()
}

fn check_bianchi_pair(omega: &DoubleForm, theta: &DoubleForm) -> Result<usize> {
    for f in [omega, theta] {
        if !f.is_symmetric()? {
            return Err(FormError::NotSymmetric);
        }
        if !f.bianchi_sum().is_zero() {
            return Err(FormError::BianchiViolated);
        }
    }
    if omega.n() != theta.n() {
        return Err(FormError::DimensionMismatch {
            left: omega.n(),
            right: theta.n(),
        });
    }
    if omega.bidegree() != theta.bidegree() {
        let u = |x: isize| x.max(0) as usize;
        return Err(FormError::BidegreeMismatch(
            u(omega.p()),
            u(omega.q()),
            u(theta.p()),
            u(theta.q()),
        ));
    }
    Ok(omega.p() as usize)
}

/// `Σ_{r=0}^{p} (-1)^{r+p}/(r!)² ⟨c^r ω, c^r θ⟩` for `ω, θ ∈ C_1^p` and `n = 2p`.
pub fn avez_pairing(omega: &DoubleForm, theta: &DoubleForm) -> Result<Scalar> {
    let p = check_bianchi_pair(omega, theta)?;
    let n = omega.n();
    if n != 2 * p {
        return Err(FormError::Range(format!("Avez pairing needs n = 2p, got n={n}, p={p}")));
    }
    let (mut a, mut b) = (omega.clone(), theta.clone());
    let mut acc = Scalar::zero();
    for r in 0..=p {
        let w = inv_factorial(r as isize);
        let term = a.inner(&b) * &w * &w;
        if (r + p) % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
        a = a.contract();
        b = b.contract();
    }
    Ok(acc)
}

/// `cR = (c²R/n) g`.
pub fn is_einstein(r: &CurvatureTensor) -> Result<bool> {
    check_riemann(r)?;
    let n = r.n();
    let c1 = r.form.contract();
    let s = c1.contract().as_scalar().cloned().expect("scalar");
    let g = DoubleForm::metric(n)?;
    Ok(c1 == g.scale(&(s / int(n as i64))))
}

/// Vanishing of the top effective (Weyl) component.
pub fn is_conformally_flat_algebraic(r: &CurvatureTensor) -> Result<bool> {
    check_riemann(r)?;
    Ok(decompose(&r.form)?.component(2).is_zero())
}

/// `Some(c)` iff `ω = c g^p/p!`, i.e. `K_ω ≡ c`.
pub fn has_constant_sectional(omega: &DoubleForm, p: usize) -> Result<Option<Scalar>> {
    if omega.bidegree() != (p as isize, p as isize) {
        return Err(FormError::Range(format!(
            "expected a form in D^({p},{p}), got D^({},{})",
            omega.p(),
            omega.q()
        )));
    }
    let c = omega.coeffs().first().cloned().unwrap_or_else(Scalar::zero);
    let model = DoubleForm::metric(omega.n())?
        .pow(p)
        .scale(&(&c * inv_factorial(p as isize)));
    Ok((&model == omega).then_some(c))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignHypothesis {
    /// Einstein: `h_4 >= 0`, with equality only when flat.
    Einstein,
    /// Conformally flat with zero scalar curvature: `h_4 <= 0`, equality only when flat.
    ConformallyFlatScalarFlat,
    NotMet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H4SignReport {
    pub h4: Scalar,
    pub flat: bool,
    pub einstein: bool,
    pub conformally_flat_scalar_flat: bool,
    /// The hypothesis the verdict refers to; Einstein wins when both hold.
    pub hypothesis: SignHypothesis,
    /// Whether every applicable sign statement holds.
    pub holds: bool,
}

pub fn sign_report_h4(r: &CurvatureTensor) -> Result<H4SignReport> {
    check_riemann(r)?;
    if r.n() < 4 {
        return Err(FormError::Range(format!("h_4 sign report needs n >= 4, got {}", r.n())));
    }
    let h4 = weyl_invariant(r, 2)?;
    let flat = r.is_flat();
    let einstein = is_einstein(r)?;
    let scalar = r.form.contract_power(2);
    let cfsf = is_conformally_flat_algebraic(r)? && scalar.is_zero();
    let zero_iff_flat = h4.is_zero() == flat;
    let mut holds = true;
    if einstein {
        holds &= !h4.is_negative() && zero_iff_flat;
    }
    if cfsf {
        holds &= !h4.is_positive() && zero_iff_flat;
    }
    let hypothesis = if einstein {
        SignHypothesis::Einstein
    } else if cfsf {
        SignHypothesis::ConformallyFlatScalarFlat
    } else {
        SignHypothesis::NotMet
    };
    Ok(H4SignReport {
        h4,
        flat,
        einstein,
        conformally_flat_scalar_flat: cfsf,
        hypothesis,
        holds,
    })
}

/// One row of an [`InvariantReport`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantRow {
    pub q: usize,
    pub h: Scalar,
    pub t: DoubleForm,
}

/// A sampled value `s_{(p,q)}` on a coordinate plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PqSample {
    pub p: usize,
    pub q: usize,
    pub plane: Vec<usize>,
    pub value: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantReport {
    pub n: usize,
    pub rows: Vec<InvariantRow>,
    pub samples: Vec<PqSample>,
    pub h4_sign: Option<H4SignReport>,
}

impl InvariantReport {
    /// Checks `Σ_i T_{2q}(e_i,e_i) = (n−2q) h_{2q}` on every row.
    pub fn validate(&self) -> Result<()> {
        for row in &self.rows {
            if row.t.n() != self.n || row.t.bidegree() != (1, 1) {
                return Err(FormError::Range(format!("T_{} must lie in D^(1,1) with n={}", 2 * row.q, self.n)));
            }
            let lhs = trace11(&row.t);
            let rhs = &row.h * int(self.n as i64 - 2 * row.q as i64);
            if lhs != rhs {
                return Err(FormError::Range(format!(
                    "trace identity fails for q={}: trace T = {lhs}, (n-2q) h = {rhs}",
                    row.q
                )));
            }
        }
        Ok(())
    }
}

/// `h_{2q}` and `T_{2q}` for `q = 1..=max_q`, plus the `h_4` sign report when
/// `n >= 4` and `max_q >= 2`.
pub fn invariant_report(r: &CurvatureTensor, max_q: usize) -> Result<InvariantReport> {
    check_riemann(r)?;
    let n = r.n();
    check_q(n, max_q)?;
    let rows = (1..=max_q)
        .map(|q| {
            Ok(InvariantRow {
                q,
                h: weyl_invariant(r, q)?,
                t: einstein_tensor(r, q)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let h4_sign = if n >= 4 && max_q >= 2 {
        Some(sign_report_h4(r)?)
    } else {
        None
    };
    let report = InvariantReport {
        n,
        rows,
        samples: Vec::new(),
        h4_sign,
    };
    report.validate()?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(v: &[i64]) -> DoubleForm {
        DoubleForm::diagonal(&v.iter().map(|&x| int(x)).collect::<Vec<_>>()).unwrap()
    }

    fn sphere(n: usize) -> CurvatureTensor {
        make_constant_curvature(n, &int(1)).unwrap()
    }

    #[test]
    fn unit_sphere_invariants() {
        let r = sphere(4);
        assert_eq!(weyl_invariant(&r, 1).unwrap(), int(6));
        assert_eq!(weyl_invariant(&r, 2).unwrap(), int(6));
        assert_eq!(einstein_tensor(&r, 1).unwrap(), DoubleForm::metric(4).unwrap().scale(&int(3)));
        let plane = Frame::coordinate(4, &[1, 3]).unwrap();
        assert_eq!(pq_sectional(&r, 2, 1, &plane).unwrap(), int(1));
    }

    #[test]
    fn flat_model() {
        let r = make_constant_curvature(5, &int(0)).unwrap();
        assert!(r.is_flat());
        assert_eq!(weyl_invariant(&r, 2).unwrap(), int(0));
        assert!(einstein_tensor(&r, 1).unwrap().is_zero());
        let s = sign_report_h4(&r).unwrap();
        assert!(s.flat && s.holds && s.h4.is_zero());
    }

    #[test]
    fn constant_curvature_rejects_small_n() {
        assert!(make_constant_curvature(1, &int(1)).is_err());
    }

    #[test]
    fn hypersurface_examples() {
        let r = make_hypersurface(&diag(&[1, 1, 1, 0])).unwrap();
        assert_eq!(weyl_invariant(&r, 1).unwrap(), int(3));
        assert_eq!(weyl_invariant(&r, 2).unwrap(), int(0));
        let r = make_hypersurface(&diag(&[1, 1, 1, 1])).unwrap();
        assert_eq!(r, sphere(4));
        let mut b = diag(&[1, 2, 3]);
        let (i, j) = (IndexSet::new(3, &[0]).unwrap(), IndexSet::new(3, &[1]).unwrap());
        b.set(&i, &j, int(1));
        assert_eq!(make_hypersurface(&b), Err(FormError::NotSymmetric));
    }

    #[test]
    fn conformally_flat_recovers_constant_curvature() {
        let h = DoubleForm::metric(5).unwrap().scale(&frac(3, 2));
        assert_eq!(make_conformally_flat(&h).unwrap(), make_constant_curvature(5, &int(3)).unwrap());
    }

    #[test]
    fn products() {
        let s2 = sphere(2);
        let r = make_product(&s2, &s2).unwrap();
        assert_eq!(weyl_invariant(&r, 1).unwrap(), int(2));
        assert_eq!(weyl_invariant(&r, 2).unwrap(), int(2));
        assert!(is_einstein(&r).unwrap());
        assert_eq!(has_constant_sectional(r.form(), 2).unwrap(), None);
        let flat2 = make_constant_curvature(2, &int(0)).unwrap();
        let r = make_product(&s2, &flat2).unwrap();
        assert_eq!(weyl_invariant(&r, 1).unwrap(), int(1));
        assert_eq!(weyl_invariant(&r, 2).unwrap(), int(0));
        assert!(make_product(&flat2, &flat2).unwrap().is_flat());
    }

    #[test]
    fn einstein_tensor_agrees_with_star_form() {
        // T_{2q} = *(g^{n-2q-1} R^q)/(n-2q-1)! when 2q < n
        for (r, q) in [
            (sphere(5), 1),
            (sphere(5), 2),
            (make_hypersurface(&diag(&[1, 2, -1, 3, 0])).unwrap(), 2),
            (make_conformally_flat(&diag(&[1, -1, 2, 0, 5, 1])).unwrap(), 2),
        ] {
            assert_eq!(einstein_tensor(&r, q).unwrap(), pq_curvature_tensor(&r, 1, q).unwrap());
        }
    }

    #[test]
    fn einstein_tensor_vanishes_in_middle_degree() {
        let s2 = sphere(2);
        let r = make_product(&s2, &s2).unwrap();
        assert!(einstein_tensor(&r, 2).unwrap().is_zero());
    }

    #[test]
    fn sectional_curvature_is_frame_independent() {
        let g2 = DoubleForm::metric(4).unwrap().pow(2).scale(&frac(1, 2));
        let f = |v: &[&[i64]]| {
            Frame::new(4, v.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()).unwrap()
        };
        assert_eq!(sectional_curvature(&g2, &f(&[&[1, 2, 0, 0], &[0, 1, 3, -1]])).unwrap(), int(1));
        let r = make_hypersurface(&diag(&[1, 2, 3, 4])).unwrap();
        let a = sectional_curvature(r.form(), &f(&[&[1, 0, 0, 0], &[0, 1, 0, 0]])).unwrap();
        let b = sectional_curvature(r.form(), &f(&[&[3, 0, 0, 0], &[5, -2, 0, 0]])).unwrap();
        assert_eq!(a, int(2));
        assert_eq!(a, b);
    }

    #[test]
    fn degenerate_frame_rejected() {
        let v = vec![vec![int(1), int(2), int(0)], vec![int(2), int(4), int(0)]];
        assert_eq!(Frame::new(3, v), Err(FormError::DegenerateFrame));
    }

    #[test]
    fn complement_of_general_frame() {
        let v = vec![vec![int(1), int(1), int(0), int(0)], vec![int(0), int(1), int(1), int(2)]];
        let p = Frame::new(4, v.clone()).unwrap();
        let c = p.complement().unwrap();
        assert_eq!(c.len(), 2);
        for a in c.vectors() {
            for b in &v {
                let d: Scalar = a.iter().zip(b).map(|(x, y)| x * y).sum();
                assert!(d.is_zero());
            }
        }
        let c = Frame::coordinate(5, &[0, 3]).unwrap().complement().unwrap();
        assert_eq!(c, Frame::coordinate(5, &[1, 2, 4]).unwrap());
    }

    #[test]
    fn avez_on_unit_sphere() {
        let r = sphere(4);
        let f = r.form();
        assert_eq!(f.norm_sq(), int(6));
        assert_eq!(f.contract().norm_sq(), int(36));
        assert_eq!(f.contract_power(2).norm_sq(), int(144));
        assert_eq!(avez_pairing(f, f).unwrap(), int(6));
        assert!(avez_pairing(sphere(5).form(), sphere(5).form()).is_err());
    }

    #[test]
    fn predicates() {
        let h = diag(&[1, -1, 0, 0]);
        let r = make_conformally_flat(&h).unwrap();
        assert!(is_conformally_flat_algebraic(&r).unwrap());
        assert!(!is_einstein(&r).unwrap());
        assert_eq!(has_constant_sectional(sphere(4).form(), 2).unwrap(), Some(int(1)));
        let s = sign_report_h4(&r).unwrap();
        assert_eq!(s.hypothesis, SignHypothesis::ConformallyFlatScalarFlat);
        assert!(s.h4.is_negative() && s.holds);
    }

    #[test]
    fn sign_report_without_hypothesis() {
        let r = make_hypersurface(&diag(&[1, 2, 3, 4])).unwrap();
        let s = sign_report_h4(&r).unwrap();
        assert_eq!(s.hypothesis, SignHypothesis::NotMet);
        assert!(sign_report_h4(&sphere(3)).is_err());
    }

    #[test]
    fn report_validates_trace_identity() {
        let mut rep = invariant_report(&sphere(5), 2).unwrap();
        assert_eq!(rep.rows.len(), 2);
        rep.validate().unwrap();
        rep.rows[0].h = int(7);
        assert!(rep.validate().is_err());
    }

    #[test]
    fn pq_range_errors() {
        let r = sphere(4);
        assert!(pq_curvature_tensor(&r, 1, 2).is_err());
        assert!(pq_curvature_tensor(&r, 0, 0).is_err());
        assert!(weyl_invariant(&r, 3).is_err());
    }
}
