//! Curvature invariants on the model catalogue.

use dforms::curvature::{
    einstein_tensor, has_constant_sectional, is_conformally_flat_algebraic, is_einstein, pq_curvature_tensor,
    sectional_curvature, sign_report_h4, trace11, weyl_invariant, CurvatureTensor, Frame,
};
use dforms::scalar::{factorial, frac, int, Scalar};
use dforms::{binomial, decompose, DoubleForm, IndexSet};
use num_traits::{Signed, Zero};
use rand::Rng;
use serde_json::json;

use super::models::{models, Kind, Model};
use super::{check, json, Check, Ctx};

const SUITE: &str = "curvature";

pub fn checks(n: usize) -> Vec<Check> {
    let mut out = vec![
        check(SUITE, n, "trace-identity", trace_identity),
        check(SUITE, n, "closed-forms", closed_forms),
        check(SUITE, n, "constant-power-propagation", constant_power_propagation),
        check(SUITE, n, "constant-pq-characterization", constant_pq_characterization),
        check(SUITE, n, "einstein-tensors", einstein_tensors),
        check(SUITE, n, "metric-multiples-on-frames", metric_multiples_on_frames),
        check(SUITE, n, "extreme-pq-curvatures", extreme_pq_curvatures),
    ];
    if n >= 3 {
        out.push(check(SUITE, n, "summation-identity", summation_identity));
        out.push(check(SUITE, n, "p-curvature-duality", p_curvature_duality));
    }
    if n >= 4 {
        out.push(check(SUITE, n, "h4-sign", h4_sign));
    }
    out
}

/// Number of random instances per model family.
pub fn random_models(trials: usize) -> usize {
    trials.div_ceil(50).max(1)
}

pub fn catalogue(ctx: &mut Ctx) -> Vec<Model> {
    let k = random_models(ctx.trials);
    models(ctx.n, &mut ctx.rng, k)
}

fn unit(n: usize, i: usize) -> Vec<Scalar> {
    (0..n).map(|k| int((k == i) as i64)).collect()
}

fn random_frame<R: Rng>(rng: &mut R, n: usize, p: usize) -> Frame {
    loop {
        let vs: Vec<Vec<Scalar>> = (0..p).map(|_| (0..n).map(|_| int(rng.gen_range(-2..=2))).collect()).collect();
        if let Ok(f) = Frame::new(n, vs) {
            return f;
        }
    }
}

fn coordinate_frames(n: usize, p: usize) -> Vec<Frame> {
    (0..binomial(n, p))
        .map(|r| {
            let set = IndexSet::unrank(n, p, r).expect("rank");
            Frame::coordinate(n, &set.indices()).expect("valid plane")
        })
        .collect()
}

/// Coordinate `p`-planes, the diagonals `e_i + e_j` when `p = 1`, and a few
/// random frames.
fn test_frames<R: Rng>(rng: &mut R, n: usize, p: usize) -> Vec<Frame> {
    let mut out = coordinate_frames(n, p);
    if p == 1 {
        for i in 0..n {
            for j in i + 1..n {
                let v: Vec<Scalar> = (0..n).map(|k| int((k == i || k == j) as i64)).collect();
                out.push(Frame::new(n, vec![v]).expect("nonzero"));
            }
        }
    }
    if p > 0 && p < n {
        for _ in 0..3 {
            out.push(random_frame(rng, n, p));
        }
    }
    out
}

fn frame_json(f: &Frame) -> serde_json::Value {
    json!(f
        .vectors()
        .iter()
        .map(|v| v.iter().map(dforms::scalar::to_canonical).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn scalar_curvature(r: &CurvatureTensor) -> Scalar {
    r.form().contract_power(2).as_scalar().cloned().expect("scalar")
}

/// `K` of `ω` on `P` extended by `v`.
fn extended(omega: &DoubleForm, frame: &Frame, v: &[Scalar]) -> dforms::Result<Scalar> {
    let mut vs = frame.vectors().to_vec();
    vs.push(v.to_vec());
    sectional_curvature(omega, &Frame::new(frame.n(), vs)?)
}

/// Elementary symmetric polynomials `e_0..e_m` by the product `Π(1 + λ_i t)`.
fn elementary(values: &[Scalar]) -> Vec<Scalar> {
    let mut e = vec![int(1)];
    for x in values {
        e.push(int(0));
        for k in (1..e.len()).rev() {
            let prev = e[k - 1].clone();
            e[k] += x * prev;
        }
    }
    e
}

fn e_k(values: &[Scalar], k: usize) -> Scalar {
    elementary(values).get(k).cloned().unwrap_or_else(Scalar::zero)
}

/// `Σ_i T_{2q}(e_i,e_i) = (n-2q) h_{2q}`.
fn trace_identity(ctx: &mut Ctx) {
    let n = ctx.n;
    for m in catalogue(ctx) {
        for q in 1..=n / 2 {
            let result = (|| {
                let t = einstein_tensor(&m.r, q)?;
                let h = weyl_invariant(&m.r, q)?;
                Ok(trace11(&t) == h * int(n as i64 - 2 * q as i64))
            })();
            ctx.record_result(result, || format!("trace identity fails for q={q} on {}", m.name), || json!({"r": json(m.r.form())}));
        }
    }
}

/// `Σ_k s_{(p,q)}(P,e_k) = (n-2q-p+1) s_{(p-1,q)}(P)` over a basis of `P⊥`,
/// on every coordinate plane and a random frame, `q <= 2`.
fn summation_identity(ctx: &mut Ctx) {
    let n = ctx.n;
    for m in catalogue(ctx) {
        for q in 1..=(n / 2).min(2) {
            for p in 1..=n - 2 * q {
                let (Ok(upper), Ok(lower)) = (pq_curvature_tensor(&m.r, p, q), pq_curvature_tensor(&m.r, p - 1, q)) else {
                    ctx.record(false, || format!("(p,q)-tensor failed for p={p}, q={q}"), || json!({"model": m.name}));
                    continue;
                };
                let mut frames = coordinate_frames(n, p - 1);
                if p - 1 > 0 {
                    frames.push(random_frame(&mut ctx.rng, n, p - 1));
                }
                for f in frames {
                    let result = (|| {
                        let comp = if f.is_empty() {
                            (0..n).map(|i| unit(n, i)).collect()
                        } else {
                            f.complement()?.vectors().to_vec()
                        };
                        let mut sum = Scalar::zero();
                        for v in &comp {
                            sum += extended(&upper, &f, v)?;
                        }
                        let rhs = sectional_curvature(&lower, &f)? * int((n - 2 * q - p + 1) as i64);
                        Ok(sum == rhs)
                    })();
                    ctx.record_result(
                        result,
                        || format!("summation identity fails for p={p}, q={q} on {}", m.name),
                        || json!({"r": json(m.r.form()), "frame": frame_json(&f)}),
                    );
                }
            }
        }
    }
}

fn h_values(m: &Model) -> Vec<Scalar> {
    (0..=m.n() / 2).map(|q| weyl_invariant(&m.r, q).expect("q in range")).collect()
}

fn complement_values(values: &[Scalar], plane: &[usize]) -> Vec<Scalar> {
    values
        .iter()
        .enumerate()
        .filter(|(i, _)| !plane.contains(i))
        .map(|(_, v)| v.clone())
        .collect()
}

/// Closed forms of the model families: constant curvature, products,
/// hypersurfaces and diagonal conformally flat tensors.
fn closed_forms(ctx: &mut Ctx) {
    let n = ctx.n;
    for m in catalogue(ctx) {
        if let Kind::Product(a, b) = &m.kind {
            let (ha, hb, h) = (h_values(a), h_values(b), h_values(&m));
            for (q, hq) in h.iter().enumerate() {
                let expected: Scalar = (0..=q)
                    .map(|i| {
                        let x = ha.get(i).cloned().unwrap_or_else(Scalar::zero);
                        let y = hb.get(q - i).cloned().unwrap_or_else(Scalar::zero);
                        int(binomial(q, i) as i64) * x * y
                    })
                    .sum();
                ctx.record(
                    *hq == expected,
                    || format!("product formula for h_{} fails on {}: {hq} vs {expected}", 2 * q, m.name),
                    || json!({"model": m.name}),
                );
            }
            continue;
        }
        for q in 1..=n / 2 {
            for p in 0..=n - 2 * q {
                let Ok(t) = pq_curvature_tensor(&m.r, p, q) else {
                    ctx.record(false, || format!("(p,q)-tensor failed for p={p}, q={q}"), || json!({"model": m.name}));
                    continue;
                };
                let mut frames = coordinate_frames(n, p);
                let coordinate_count = frames.len();
                if matches!(m.kind, Kind::Constant(_)) && p > 0 {
                    frames.push(random_frame(&mut ctx.rng, n, p));
                }
                for (idx, f) in frames.iter().enumerate() {
                    let plane: Vec<usize> = if idx < coordinate_count {
                        IndexSet::unrank(n, p, idx).expect("rank").indices()
                    } else {
                        Vec::new()
                    };
                    let qf = q as i64;
                    let expected = match &m.kind {
                        Kind::Constant(l) => {
                            let mut pow = int(1);
                            for _ in 0..q {
                                pow *= l;
                            }
                            pow * factorial(n - p) / (int(1 << q) * factorial(n - 2 * q - p))
                        }
                        Kind::Hypersurface(vals) => {
                            factorial(2 * q) / int(1 << qf) * e_k(&complement_values(vals, &plane), 2 * q)
                        }
                        Kind::ConformallyFlat(vals) => {
                            factorial(n - q - p) * factorial(q) / factorial(n - 2 * q - p)
                                * e_k(&complement_values(vals, &plane), q)
                        }
                        _ => continue,
                    };
                    let result = sectional_curvature(&t, f).map(|v| v == expected);
                    ctx.record_result(
                        result,
                        || format!("closed form of s_({p},{q}) fails on {}: expected {expected}", m.name),
                        || json!({"model": m.name, "frame": frame_json(f)}),
                    );
                }
            }
        }
    }
}

/// Whenever `R^s` has constant sectional curvature `λ`:
/// `h_{2s+2r} = (n-2r)!/((2s)!(n-2s-2r)!) λ h_{2r}`; and if moreover `R^{s+r}`
/// has constant curvature `μ`, `λ ≠ 0` and `2s+4r <= n`, then `R^r` has
/// constant curvature `μ (2s)!(2r)!/(λ (2s+2r)!)`.
fn constant_power_propagation(ctx: &mut Ctx) {
    let n = ctx.n;
    for m in catalogue(ctx) {
        let consts: Vec<Option<Scalar>> = (0..=n / 2)
            .map(|s| has_constant_sectional(&m.r.form().pow(s), 2 * s).expect("degree"))
            .collect();
        let h = h_values(&m);
        for s in 1..=n / 2 {
            let Some(lambda) = &consts[s] else { continue };
            for r in 0..=(n / 2 - s) {
                let coeff = factorial(n - 2 * r) / (factorial(2 * s) * factorial(n - 2 * s - 2 * r));
                let expected = coeff * lambda * &h[r];
                ctx.record(
                    h[s + r] == expected,
                    || format!("h_{} != const·λ·h_{} for s={s} on {}", 2 * s + 2 * r, 2 * r, m.name),
                    || json!({"model": m.name}),
                );
                if r >= 1 && 2 * s + 4 * r <= n && !lambda.is_zero() {
                    if let Some(mu) = &consts[s + r] {
                        let k = mu * factorial(2 * s) * factorial(2 * r) / (lambda * factorial(2 * s + 2 * r));
                        ctx.record(
                            consts[r].as_ref() == Some(&k),
                            || format!("R^{r} should have constant curvature {k} on {}", m.name),
                            || json!({"model": m.name}),
                        );
                    }
                }
            }
        }
    }
}

/// `s_p` on a frame, taken as zero outside `0 <= p <= n-2`.
fn s_p(tensors: &[Option<DoubleForm>], f: &Frame) -> dforms::Result<Scalar> {
    match tensors.get(f.len()).and_then(Option::as_ref) {
        Some(t) => sectional_curvature(t, f),
        None => Ok(Scalar::zero()),
    }
}

/// Tests an identity `s_p(P) ± s_{n-p}(P⊥) = λ` on the test frames.
fn dual_identity_holds(
    tensors: &[Option<DoubleForm>],
    frames: &[Frame],
    plus: bool,
    lambda: &Scalar,
) -> dforms::Result<bool> {
    for f in frames {
        let a = s_p(tensors, f)?;
        let b = s_p(tensors, &f.complement()?)?;
        let v = if plus { a + b } else { a - b };
        if &v != lambda {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Pointwise dualities of the `p`-curvature:
/// Einstein ⇔ `s_p(P) − s_{n-p}(P⊥) ≡ (n-2p)/(2n)·c²R` for `1 <= p <= n-1`;
/// constant curvature ⇔ `s_p + s_{n-p}(P⊥) ≡ (2p(p-1)+(n-2p)(n-1))/(2n(n-1))·c²R`
/// for `2 <= p <= n-2`, `2p != n`; and for `n = 2p`, conformally flat ⇔
/// `s_p(P) + s_p(P⊥) ≡ (n-2)/(4(n-1))·c²R`.
fn p_curvature_duality(ctx: &mut Ctx) {
    let n = ctx.n;
    let nn = n as i64;
    for m in catalogue(ctx) {
        let tensors: Vec<Option<DoubleForm>> = (0..=n).map(|p| pq_curvature_tensor(&m.r, p, 1).ok()).collect();
        let frames: Vec<Vec<Frame>> = (0..=n).map(|p| test_frames(&mut ctx.rng, n, p)).collect();
        let scal = scalar_curvature(&m.r);
        let einstein = is_einstein(&m.r).expect("degree 2");
        let constant = has_constant_sectional(m.r.form(), 2).expect("degree 2").is_some();
        for p in 1..n {
            let lambda = frac(nn - 2 * p as i64, 2 * nn) * &scal;
            let result = dual_identity_holds(&tensors, &frames[p], false, &lambda).map(|h| h == einstein);
            ctx.record_result(
                result,
                || format!("s_p - s_(n-p) duality does not match Einstein={einstein} for p={p} on {}", m.name),
                || json!({"r": json(m.r.form()), "p": p}),
            );
        }
        for p in 2..=n - 2 {
            if 2 * p == n {
                continue;
            }
            let pi = p as i64;
            let lambda = frac(2 * pi * (pi - 1) + (nn - 2 * pi) * (nn - 1), 2 * nn * (nn - 1)) * &scal;
            let result = dual_identity_holds(&tensors, &frames[p], true, &lambda).map(|h| h == constant);
            ctx.record_result(
                result,
                || format!("s_p + s_(n-p) duality does not match constant={constant} for p={p} on {}", m.name),
                || json!({"r": json(m.r.form()), "p": p}),
            );
        }
        if n % 2 == 0 && n >= 4 {
            let p = n / 2;
            let cf = is_conformally_flat_algebraic(&m.r).expect("degree 2");
            let lambda = frac(nn - 2, 4 * (nn - 1)) * &scal;
            let result = dual_identity_holds(&tensors, &frames[p], true, &lambda).map(|h| h == cf);
            ctx.record_result(
                result,
                || format!("middle duality does not match conformally flat={cf} on {}", m.name),
                || json!({"r": json(m.r.form())}),
            );
        }
    }
}

/// `s_{(p,q)} ≡ λ` ⇔ `R^q` has constant curvature `λ(2q)!(n-p-2q)!/(n-p)!`
/// when `2q <= p <= n-2q`, ⇔ `c^{2q-p}R^q ∝ g^p` when `p < 2q`; the latter
/// ⇔ the effective components `ω_i` of `R^q` vanish for `1 <= i <= min(p,n-p)`.
fn constant_pq_characterization(ctx: &mut Ctx) {
    let n = ctx.n;
    for m in catalogue(ctx) {
        for q in 1..=n / 2 {
            let rq = m.r.form().pow(q);
            let rq_const = has_constant_sectional(&rq, 2 * q).expect("degree");
            let components = match decompose(&rq) {
                Ok(d) => d,
                Err(e) => {
                    ctx.record(false, || format!("decompose failed: {e}"), || json!({"model": m.name}));
                    continue;
                }
            };
            for p in 0..=n - 2 * q {
                let t = pq_curvature_tensor(&m.r, p, q).expect("range");
                let s_const = has_constant_sectional(&t, p).expect("degree");
                if 2 * q <= p {
                    let predicted = s_const
                        .as_ref()
                        .map(|l| l * factorial(2 * q) * factorial(n - p - 2 * q) / factorial(n - p));
                    ctx.record(
                        predicted == rq_const,
                        || format!("s_({p},{q}) constancy {s_const:?} vs R^{q} constancy {rq_const:?} on {}", m.name),
                        || json!({"model": m.name, "p": p, "q": q}),
                    );
                } else {
                    let cr = rq.contract_power(2 * q - p);
                    let proportional = has_constant_sectional(&cr, p).expect("degree").is_some();
                    ctx.record(
                        s_const.is_some() == proportional,
                        || format!("s_({p},{q}) constancy does not match c^{}R^{q} ∝ g^{p} on {}", 2 * q - p, m.name),
                        || json!({"model": m.name, "p": p, "q": q}),
                    );
                    let vanish = (1..=p.min(n - p)).all(|i| components.component(i).is_zero());
                    ctx.record(
                        vanish == proportional,
                        || format!("component criterion for c^{}R^{q} ∝ g^{p} fails on {}", 2 * q - p, m.name),
                        || json!({"model": m.name, "p": p, "q": q}),
                    );
                }
            }
        }
    }
}

/// Einstein non-flat ⇒ `h_4 > 0`; conformally flat scalar-flat non-flat ⇒
/// `h_4 < 0`; flat ⇒ `h_4 = 0`.
fn h4_sign(ctx: &mut Ctx) {
    for m in catalogue(ctx) {
        let result = sign_report_h4(&m.r).map(|rep| {
            let mut ok = rep.holds;
            ok &= !m.einstein || rep.einstein;
            ok &= !m.cfsf || rep.conformally_flat_scalar_flat;
            if rep.flat {
                ok &= rep.h4.is_zero();
            } else {
                if rep.einstein {
                    ok &= rep.h4.is_positive();
                }
                if rep.conformally_flat_scalar_flat {
                    ok &= rep.h4.is_negative();
                }
            }
            ok
        });
        ctx.record_result(result, || format!("h_4 sign statement fails on {}", m.name), || json!({"r": json(m.r.form())}));
    }
}

/// `T_{2q} = R_{(1,q)}` for `2q < n`, `T_{2q} = 0` for `2q = n`, and
/// `T_2 = (c²R/2) g − cR`.
fn einstein_tensors(ctx: &mut Ctx) {
    let n = ctx.n;
    let g = DoubleForm::metric(n).expect("dimension");
    for m in catalogue(ctx) {
        for q in 1..=n / 2 {
            let result = einstein_tensor(&m.r, q).and_then(|t| {
                if 2 * q == n {
                    return Ok(t.is_zero());
                }
                let mut ok = t == pq_curvature_tensor(&m.r, 1, q)?;
                if q == 1 {
                    let classical = &g.scale(&(scalar_curvature(&m.r) * frac(1, 2))) - &m.r.form().contract();
                    ok &= t == classical;
                }
                Ok(ok)
            });
            ctx.record_result(result, || format!("T_{} is wrong on {}", 2 * q, m.name), || json!({"r": json(m.r.form())}));
        }
    }
}

/// `g^pω` on an orthonormal `(p+r)`-plane is `p!·Σ_{I ⊂ P, |I|=r} ω(e_I,e_I)`,
/// and `K_ω ≡ c` ⇔ `ω = c g^r/r!`, applied to `ω = R^q`.
fn metric_multiples_on_frames(ctx: &mut Ctx) {
    let n = ctx.n;
    for m in catalogue(ctx) {
        for q in 1..=n / 2 {
            let w = m.r.form().pow(q);
            let r = 2 * q;
            for p in 0..=n - r {
                let gw = w.mul_g_power(p);
                for f in coordinate_frames(n, p + r) {
                    let idx: Vec<usize> = f
                        .vectors()
                        .iter()
                        .map(|v| v.iter().position(|x| !x.is_zero()).expect("unit"))
                        .collect();
                    let mut sum = Scalar::zero();
                    for k in 0..binomial(p + r, r) {
                        let sub = IndexSet::unrank(p + r, r, k).expect("rank");
                        let set = IndexSet::new(n, &sub.iter().map(|i| idx[i]).collect::<Vec<_>>()).expect("valid");
                        sum += w.get(&set, &set);
                    }
                    let result = sectional_curvature(&gw, &f).map(|v| v == factorial(p) * sum);
                    ctx.record_result(
                        result,
                        || format!("g^{p}R^{q} on a coordinate plane is not p! times the sum on {}", m.name),
                        || json!({"model": m.name, "frame": frame_json(&f)}),
                    );
                }
            }
            let constant = has_constant_sectional(&w, r).expect("degree");
            let frames = test_frames(&mut ctx.rng, n, r);
            let values: dforms::Result<Vec<Scalar>> = frames.iter().map(|f| sectional_curvature(&w, f)).collect();
            let result = values.map(|vs| {
                let all_equal = vs.windows(2).all(|x| x[0] == x[1]);
                match &constant {
                    Some(c) => vs.iter().all(|v| v == c),
                    None => !all_equal,
                }
            });
            ctx.record_result(
                result,
                || format!("sectional curvature of R^{q} disagrees with constancy {constant:?} on {}", m.name),
                || json!({"model": m.name}),
            );
        }
    }
}

/// `s_{(0,1)} = c²R/2` and `s_{(n-2,1)}(P) = K(P⊥)`.
fn extreme_pq_curvatures(ctx: &mut Ctx) {
    let n = ctx.n;
    for m in catalogue(ctx) {
        let empty = Frame::coordinate(n, &[]).expect("empty frame");
        let result = pq_curvature_tensor(&m.r, 0, 1)
            .and_then(|t| sectional_curvature(&t, &empty))
            .map(|v| v == scalar_curvature(&m.r) * frac(1, 2));
        ctx.record_result(result, || format!("s_(0,1) != c²R/2 on {}", m.name), || json!({"r": json(m.r.form())}));
        let Ok(top) = pq_curvature_tensor(&m.r, n - 2, 1) else {
            ctx.record(false, || "s_(n-2,1) tensor failed".into(), || json!({"model": m.name}));
            continue;
        };
        for f in test_frames(&mut ctx.rng, n, n - 2) {
            let result = (|| Ok(sectional_curvature(&top, &f)? == sectional_curvature(m.r.form(), &f.complement()?)?))();
            ctx.record_result(
                result,
                || format!("s_(n-2,1)(P) != K(P⊥) on {}", m.name),
                || json!({"model": m.name, "frame": frame_json(&f)}),
            );
        }
    }
}
