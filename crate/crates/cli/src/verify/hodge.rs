//! Hodge star identities, including the closed forms on Bianchi structures.

use dforms::decomposition::{star_bianchi, star_in_components};
use dforms::scalar::{int, inv_factorial};
use dforms::{decompose, sample, DoubleForm};
use rand::Rng;
use serde_json::json;

use super::{check, json, Check, Ctx};

const SUITE: &str = "hodge";

pub fn checks(n: usize) -> Vec<Check> {
    vec![
        check(SUITE, n, "metric-as-conjugated-contraction", metric_as_conjugated_contraction),
        check(SUITE, n, "double-star-sign", double_star_sign),
        check(SUITE, n, "inner-product-via-star", inner_product_via_star),
        check(SUITE, n, "star-adjoint-sign", star_adjoint_sign),
        check(SUITE, n, "star-of-metric-powers", star_of_metric_powers),
        check(SUITE, n, "star-bianchi-formula", star_bianchi_formula),
        check(SUITE, n, "top-degree-formulas", top_degree_formulas),
        check(SUITE, n, "star-in-components", star_components),
    ]
}

/// Visits every bidegree at least once, then continues with random ones.
fn bidegrees(ctx: &mut Ctx) -> Vec<(usize, usize)> {
    let n = ctx.n;
    let mut all: Vec<_> = (0..=n).flat_map(|p| (0..=n).map(move |q| (p, q))).collect();
    while all.len() < ctx.trials {
        all.push((ctx.rng.gen_range(0..=n), ctx.rng.gen_range(0..=n)));
    }
    all
}

fn random(ctx: &mut Ctx, p: usize, q: usize) -> DoubleForm {
    sample::random_form(&mut ctx.rng, ctx.n, p, q).expect("degrees in range")
}

/// Parity of `(p+q)(n-p-q)`, equivalently of `p(n-p) + q(n-q)`.
fn star_sign(n: usize, p: usize, q: usize) -> bool {
    (p * (n - p) + q * (n - q)) % 2 == 0
}

/// `gω = (-1)^{n(p+q)} *c*ω`. The sign is invisible in even dimension; in
/// odd dimension it is forced by adjointness and `c(gω) = g cω + (n-p-q)ω`.
fn metric_as_conjugated_contraction(ctx: &mut Ctx) {
    let n = ctx.n;
    for (p, q) in bidegrees(ctx) {
        let w = random(ctx, p, q);
        let conj = w.hodge().contract().hodge();
        let conj = if (n * (p + q)) % 2 == 0 { conj } else { -conj };
        let ok = w.mul_g_power(1) == conj;
        ctx.record(ok, || format!("gω != (-1)^(n(p+q)) *c*ω on D^({p},{q})"), || json!({"omega": json(&w)}));
    }
}

/// `**ω = (-1)^{(p+q)(n-p-q)} ω`.
fn double_star_sign(ctx: &mut Ctx) {
    let n = ctx.n;
    for (p, q) in bidegrees(ctx) {
        let w = random(ctx, p, q);
        let expected = if star_sign(n, p, q) { w.clone() } else { -w.clone() };
        ctx.record(
            w.hodge().hodge() == expected,
            || format!("**ω has the wrong sign on D^({p},{q})"),
            || json!({"omega": json(&w)}),
        );
    }
}

/// `⟨ω,θ⟩ = *(ω·*θ) = (-1)^{p(n-p)+q(n-q)} *(*ω·θ)`; the sign comes from
/// graded commutativity and is trivial when `n` is odd.
fn inner_product_via_star(ctx: &mut Ctx) {
    let n = ctx.n;
    for (p, q) in bidegrees(ctx) {
        let w = random(ctx, p, q);
        let t = random(ctx, p, q);
        let inner = w.inner(&t);
        let a = (&w * &t.hodge()).hodge();
        let b = (&w.hodge() * &t).hodge();
        let b = if (p * (n - p) + q * (n - q)) % 2 == 0 { b } else { -b };
        let ok = a.as_scalar() == Some(&inner) && b.as_scalar() == Some(&inner);
        ctx.record(
            ok,
            || format!("<ω,θ> = {inner} but the star expressions give {a:?}, {b:?}"),
            || json!({"omega": json(&w), "theta": json(&t)}),
        );
    }
}

/// `⟨ω,*θ⟩ = (-1)^{(p+q)(n-p-q)} ⟨*ω,θ⟩`, with `ω ∈ D^{p,q}`, `θ ∈ D^{n-p,n-q}`.
fn star_adjoint_sign(ctx: &mut Ctx) {
    let n = ctx.n;
    for (p, q) in bidegrees(ctx) {
        let w = random(ctx, p, q);
        let t = random(ctx, n - p, n - q);
        let lhs = w.inner(&t.hodge());
        let rhs = w.hodge().inner(&t);
        let rhs = if star_sign(n, p, q) { rhs } else { -rhs };
        ctx.record(
            lhs == rhs,
            || format!("<ω,*θ> = {lhs}, signed <*ω,θ> = {rhs}"),
            || json!({"omega": json(&w), "theta": json(&t)}),
        );
    }
}

/// `*(g^k/k!) = g^{n-k}/(n-k)!` for every `k`.
fn star_of_metric_powers(ctx: &mut Ctx) {
    let n = ctx.n;
    let g = DoubleForm::metric(n).expect("valid dimension");
    for k in 0..=n {
        let lhs = g.pow(k).scale(&inv_factorial(k as isize)).hodge();
        let rhs = g.pow(n - k).scale(&inv_factorial((n - k) as isize));
        ctx.record(lhs == rhs, || format!("*(g^{k}/{k}!) is wrong"), || json!({"n": n, "k": k}));
    }
}

fn random_bianchi(ctx: &mut Ctx, p: usize) -> DoubleForm {
    sample::random_bianchi(&mut ctx.rng, ctx.n, p).expect("degree in range")
}

/// `*(g^{k-p}ω)/(k-p)!` by the contraction formula against the direct star,
/// for `ω ∈ C_1^p`, `1 <= p <= min(3,n)`, `p <= k <= n`.
fn star_bianchi_formula(ctx: &mut Ctx) {
    let n = ctx.n;
    let rounds = ctx.trials.div_ceil(4).max(1);
    for p in 1..=n.min(3) {
        for _ in 0..rounds {
            let w = random_bianchi(ctx, p);
            for k in p..=n {
                let direct = w.mul_g_power(k - p).hodge().scale(&inv_factorial((k - p) as isize));
                let result = star_bianchi(&w, k).map(|f| f == direct);
                ctx.record_result(
                    result,
                    || format!("star formula fails for p={p}, k={k}"),
                    || json!({"omega": json(&w), "k": k}),
                );
            }
        }
    }
}

/// `*(g^{n-p}ω/(n-p)!) = c^pω/p!` and
/// `*(g^{n-p-1}ω/(n-p-1)!) = c^pω/p!·g − c^{p-1}ω/(p-1)!`.
fn top_degree_formulas(ctx: &mut Ctx) {
    let n = ctx.n;
    let rounds = ctx.trials.div_ceil(4).max(1);
    for p in 1..=n.min(3) {
        for _ in 0..rounds {
            let w = random_bianchi(ctx, p);
            let full = w.contract_power(p).scale(&inv_factorial(p as isize));
            let lhs = w.mul_g_power(n - p).hodge().scale(&inv_factorial((n - p) as isize));
            ctx.record(lhs == full, || format!("top formula fails for p={p}"), || json!({"omega": json(&w)}));
            if p < n {
                let l = n - p - 1;
                let lhs = w.mul_g_power(l).hodge().scale(&inv_factorial(l as isize));
                let rhs = &full.mul_g_power(1)
                    - &w.contract_power(p - 1).scale(&inv_factorial(p as isize - 1));
                ctx.record(
                    lhs == rhs,
                    || format!("next-to-top formula fails for p={p}"),
                    || json!({"omega": json(&w)}),
                );
            }
        }
    }
}

/// `*(g^lω)` from the effective components, and `*ω = Σ(-1)^i g^{p-i}ω_i`
/// when `n = 2p`.
fn star_components(ctx: &mut Ctx) {
    let n = ctx.n;
    let rounds = ctx.trials.div_ceil(4).max(1);
    for p in 1..=n.min(3) {
        for _ in 0..rounds {
            let w = random_bianchi(ctx, p);
            let d = match decompose(&w) {
                Ok(d) => d,
                Err(e) => {
                    ctx.record(false, || format!("decompose failed: {e}"), || json!({"omega": json(&w)}));
                    continue;
                }
            };
            for l in 0..=n - p {
                let direct = w.mul_g_power(l).hodge();
                let result = star_in_components(&d, l).map(|f| f == direct);
                ctx.record_result(
                    result,
                    || format!("component star formula fails for p={p}, l={l}"),
                    || json!({"omega": json(&w), "l": l}),
                );
            }
            if n == 2 * p {
                let sum: DoubleForm = (0..=p)
                    .map(|i| {
                        let s = if i % 2 == 0 { int(1) } else { int(-1) };
                        d.component(i).mul_g_power(p - i).scale(&s)
                    })
                    .sum();
                ctx.record(
                    sum == w.hodge(),
                    || "middle-dimension component formula fails".into(),
                    || json!({"omega": json(&w)}),
                );
            }
        }
    }
}
