//! Avez-type formulas: the Hodge star of products of Bianchi forms as
//! alternating sums of inner products.

use dforms::curvature::{avez_pairing, weyl_invariant};
use dforms::scalar::{factorial, frac, int, inv_factorial, Scalar};
use dforms::{decompose, sample, DoubleForm, EffectiveDecomposition};
use serde_json::json;

use super::curvature::catalogue;
use super::{check, json, Check, Ctx};

const SUITE: &str = "avez";

pub fn checks(n: usize) -> Vec<Check> {
    let mut out = vec![
        check(SUITE, n, "component-pairing", component_pairing),
        check(SUITE, n, "weyl-invariants-from-components", weyl_invariants_from_components),
    ];
    if n % 2 == 0 {
        out.push(check(SUITE, n, "alternating-contraction-pairing", alternating_contraction_pairing));
        out.push(check(SUITE, n, "alternating-metric-pairing", alternating_metric_pairing));
    }
    if n == 4 {
        out.push(check(SUITE, n, "h4-from-contraction-norms", h4_from_contraction_norms));
    }
    out
}

fn top(f: &DoubleForm) -> Scalar {
    f.as_scalar().cloned().expect("top-degree star is a scalar")
}

fn bianchi_pair(ctx: &mut Ctx, p: usize, r: usize) -> (DoubleForm, DoubleForm) {
    let a = sample::random_bianchi(&mut ctx.rng, ctx.n, p).expect("degree");
    let b = sample::random_bianchi(&mut ctx.rng, ctx.n, r).expect("degree");
    (a, b)
}

/// `*(ωθ) = Σ_{r=0}^{p} (-1)^{r+p}/(r!)² ⟨c^rω, c^rθ⟩` for `ω, θ ∈ C_1^p`, `n = 2p`.
fn alternating_contraction_pairing(ctx: &mut Ctx) {
    let p = ctx.n / 2;
    for _ in 0..ctx.trials {
        let (w, t) = bianchi_pair(ctx, p, p);
        let direct = top(&(&w * &t).hodge());
        let result = avez_pairing(&w, &t).map(|v| v == direct);
        ctx.record_result(result, || "Avez pairing differs from *(ωθ)".into(), || json!({"omega": json(&w), "theta": json(&t)}));
    }
}

/// `*(ωθ) = Σ_{r=0}^{p} (-1)^{r+p}/(r!)² ⟨g^rω, g^rθ⟩` for `ω, θ ∈ C_1^p`, `n = 2p`.
fn alternating_metric_pairing(ctx: &mut Ctx) {
    let p = ctx.n / 2;
    for _ in 0..ctx.trials {
        let (w, t) = bianchi_pair(ctx, p, p);
        let direct = top(&(&w * &t).hodge());
        let mut sum = int(0);
        let (mut a, mut b) = (w.clone(), t.clone());
        for r in 0..=p {
            let x = inv_factorial(r as isize);
            let term = a.inner(&b) * &x * &x;
            sum = if (r + p) % 2 == 0 { sum + term } else { sum - term };
            a = a.mul_g_power(1);
            b = b.mul_g_power(1);
        }
        ctx.record(
            sum == direct,
            || format!("metric-power pairing {sum} differs from *(ωθ) = {direct}"),
            || json!({"omega": json(&w), "theta": json(&t)}),
        );
    }
}

fn component(d: &EffectiveDecomposition, i: usize) -> Option<&DoubleForm> {
    d.components().get(i)
}

/// `Σ_i (-1)^i (n-2i)! ⟨ω_i, θ_i⟩` over the common effective components.
fn component_sum(n: usize, a: &EffectiveDecomposition, b: &EffectiveDecomposition) -> Scalar {
    let mut acc = int(0);
    for i in 0..=n / 2 {
        let (Some(x), Some(y)) = (component(a, i), component(b, i)) else { continue };
        let term = factorial(n - 2 * i) * x.inner(y);
        acc = if i % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}

/// `*(ωθ) = Σ_{i=0}^{min(p,n-p)} (-1)^i (n-2i)! ⟨ω_i, θ_i⟩` for
/// `ω ∈ C_1^{n-p}`, `θ ∈ C_1^p`.
fn component_pairing(ctx: &mut Ctx) {
    let n = ctx.n;
    for t in 0..ctx.trials {
        let p = 1 + t % (n - 1).max(1);
        if p >= n {
            continue;
        }
        let (w, th) = bianchi_pair(ctx, n - p, p);
        let direct = top(&(&w * &th).hodge());
        let result = decompose(&w).and_then(|a| Ok(component_sum(n, &a, &decompose(&th)?) == direct));
        ctx.record_result(
            result,
            || format!("component pairing differs from *(ωθ) for p={p}"),
            || json!({"omega": json(&w), "theta": json(&th)}),
        );
    }
}

/// `h_{2q} = 1/(n-2q)! Σ_i (-1)^i (n-2i)! ⟨(R^s)_i, (R^t)_i⟩` for every
/// split `q = s+t`, where `(·)_i` are the components of `g^{n-2q}R^s` and `R^t`.
fn weyl_invariants_from_components(ctx: &mut Ctx) {
    let n = ctx.n;
    for m in catalogue(ctx) {
        for q in 0..=n / 2 {
            let h = weyl_invariant(&m.r, q).expect("q in range");
            for s in 0..=q {
                let t = q - s;
                let left = m.r.form().pow(s).mul_g_power(n - 2 * q);
                let right = m.r.form().pow(t);
                let result = decompose(&left).and_then(|a| {
                    let sum = component_sum(n, &a, &decompose(&right)?);
                    Ok(sum * inv_factorial((n - 2 * q) as isize) == h)
                });
                ctx.record_result(
                    result,
                    || format!("h_{} from components of R^{s}, R^{t} fails on {}", 2 * q, m.name),
                    || json!({"r": json(m.r.form())}),
                );
            }
        }
    }
}

/// At `n = 4`: `h_4 = Σ_r (-1)^r/(r!)² |c^r R|²`, and literally
/// `h_4 = |R|² − |cR|² + ¼|c²R|²`.
fn h4_from_contraction_norms(ctx: &mut Ctx) {
    for m in catalogue(ctx) {
        let r = m.r.form();
        let h4 = weyl_invariant(&m.r, 2).expect("n = 4");
        let mut sum = int(0);
        let mut c = r.clone();
        for k in 0..=2 {
            let x = inv_factorial(k as isize);
            let term = c.norm_sq() * &x * &x;
            sum = if k % 2 == 0 { sum + term } else { sum - term };
            c = c.contract();
        }
        let literal = r.norm_sq() - r.contract().norm_sq() + frac(1, 4) * r.contract_power(2).norm_sq();
        ctx.record(
            sum == h4 && literal == h4,
            || format!("h_4 = {h4} but the norm formulas give {sum} and {literal} on {}", m.name),
            || json!({"r": json(r)}),
        );
    }
}
