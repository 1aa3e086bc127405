//! Product, contraction and Bianchi-sum identities of the double-form algebra.

use dforms::scalar::{factorial, int, inv_factorial, Scalar};
use dforms::{binomial, eval_power_oracle, eval_product_oracle, sample, DoubleForm, IndexSet};
use rand::Rng;
use serde_json::json;

use super::{check, json, Check, Ctx};

const SUITE: &str = "core-identities";

pub fn checks(n: usize) -> Vec<Check> {
    vec![
        check(SUITE, n, "adjointness", adjointness),
        check(SUITE, n, "product-oracle", product_oracle),
        check(SUITE, n, "power-oracle", power_oracle),
        check(SUITE, n, "graded-commutativity", graded_commutativity),
        check(SUITE, n, "associativity", associativity),
        check(SUITE, n, "metric-commutator", metric_commutator),
        check(SUITE, n, "contraction-of-metric-powers", contraction_of_metric_powers),
        check(SUITE, n, "middle-degree-commutation", middle_degree_commutation),
        check(SUITE, n, "bianchi-leibniz", bianchi_leibniz),
    ]
}

fn random(ctx: &mut Ctx, p: usize, q: usize) -> DoubleForm {
    sample::random_form(&mut ctx.rng, ctx.n, p, q).expect("degrees in range")
}

fn random_vector(ctx: &mut Ctx) -> Vec<Scalar> {
    (0..ctx.n).map(|_| int(ctx.rng.gen_range(-3..=3))).collect()
}

fn basis_forms(n: usize, p: usize, q: usize) -> Vec<(IndexSet, IndexSet)> {
    let mut out = Vec::new();
    for r in 0..binomial(n, p) {
        for c in 0..binomial(n, q) {
            out.push((
                IndexSet::unrank(n, p, r).expect("rank"),
                IndexSet::unrank(n, q, c).expect("rank"),
            ));
        }
    }
    out
}

/// `⟨gω, θ⟩ = ⟨ω, cθ⟩`: over every pair of basis forms when `n <= 4`,
/// otherwise over `trials` random pairs.
pub fn adjointness(ctx: &mut Ctx) {
    let n = ctx.n;
    if n <= 4 {
        for p in 0..n {
            for q in 0..n {
                let small = basis_forms(n, p, q);
                let large = basis_forms(n, p + 1, q + 1);
                let g_images: Vec<DoubleForm> = small
                    .iter()
                    .map(|(i, j)| DoubleForm::basis(n, i, j).expect("basis").mul_g_power(1))
                    .collect();
                let c_images: Vec<DoubleForm> = large
                    .iter()
                    .map(|(k, l)| DoubleForm::basis(n, k, l).expect("basis").contract())
                    .collect();
                for (a, (i, j)) in small.iter().enumerate() {
                    for (b, (k, l)) in large.iter().enumerate() {
                        let lhs = g_images[a].get(k, l);
                        let rhs = c_images[b].get(i, j);
                        ctx.record(
                            lhs == rhs,
                            || format!("<g e_I⊗e_J, e_K⊗e_L> = {lhs} but <e_I⊗e_J, c(e_K⊗e_L)> = {rhs}"),
                            || json!({"I": i, "J": j, "K": k, "L": l, "n": n}),
                        );
                    }
                }
            }
        }
        return;
    }
    for _ in 0..ctx.trials {
        let p = ctx.rng.gen_range(0..n);
        let q = ctx.rng.gen_range(0..n);
        let w = random(ctx, p, q);
        let t = random(ctx, p + 1, q + 1);
        let lhs = w.mul_g_power(1).inner(&t);
        let rhs = w.inner(&t.contract());
        ctx.record(
            lhs == rhs,
            || format!("<gω,θ> = {lhs}, <ω,cθ> = {rhs}"),
            || json!({"omega": json(&w), "theta": json(&t)}),
        );
    }
}

/// The product evaluated as a multilinear form equals the explicit
/// permutation sum.
fn product_oracle(ctx: &mut Ctx) {
    let top = ctx.n.min(3);
    for _ in 0..ctx.trials {
        let a = ctx.rng.gen_range(0..=top);
        let b = ctx.rng.gen_range(0..=top);
        let (p, r) = (ctx.rng.gen_range(0..=a), 0);
        let r = r + a - p;
        let q = ctx.rng.gen_range(0..=b);
        let s = b - q;
        let w = random(ctx, p, q);
        let t = random(ctx, r, s);
        let xs: Vec<_> = (0..a).map(|_| random_vector(ctx)).collect();
        let ys: Vec<_> = (0..b).map(|_| random_vector(ctx)).collect();
        let result = (|| {
            let direct = (&w * &t).evaluate(&xs, &ys)?;
            let oracle = eval_product_oracle(&w, &t, &xs, &ys)?;
            Ok(direct == oracle)
        })();
        ctx.record_result(
            result,
            || "product differs from the permutation sum".into(),
            || json!({"omega": json(&w), "theta": json(&t), "xs": json(&vecs(&xs)), "ys": json(&vecs(&ys))}),
        );
    }
}

fn vecs(v: &[Vec<Scalar>]) -> Vec<Vec<String>> {
    v.iter()
        .map(|x| x.iter().map(dforms::scalar::to_canonical).collect())
        .collect()
}

fn det(m: &[Vec<Scalar>]) -> Scalar {
    if m.is_empty() {
        return int(1);
    }
    dforms::linalg::Matrix::from_rows(m.to_vec())
        .and_then(|m| m.det())
        .expect("square matrix")
}

/// `h^k` against the permutation sum, and `h^k(x,y) = k! det[h(x_i,y_j)]` for `h ∈ D^{1,1}`.
fn power_oracle(ctx: &mut Ctx) {
    let top = ctx.n.min(3);
    for _ in 0..ctx.trials {
        let k = ctx.rng.gen_range(0..=top);
        let h = random(ctx, 1, 1);
        let xs: Vec<_> = (0..k).map(|_| random_vector(ctx)).collect();
        let ys: Vec<_> = (0..k).map(|_| random_vector(ctx)).collect();
        let result = (|| {
            let direct = h.pow(k).evaluate(&xs, &ys)?;
            let oracle = eval_power_oracle(&h, k, &xs, &ys)?;
            let mut m = Vec::new();
            for x in &xs {
                let mut row = Vec::new();
                for y in &ys {
                    row.push(h.evaluate(std::slice::from_ref(x), std::slice::from_ref(y))?);
                }
                m.push(row);
            }
            Ok(direct == oracle && direct == factorial(k) * det(&m))
        })();
        ctx.record_result(
            result,
            || format!("power {k} disagrees with the permutation sum or k!·det"),
            || json!({"h": json(&h), "k": k, "xs": json(&vecs(&xs)), "ys": json(&vecs(&ys))}),
        );
    }
}

/// `ωθ = (-1)^{pr+qs} θω`.
fn graded_commutativity(ctx: &mut Ctx) {
    let n = ctx.n;
    for _ in 0..ctx.trials {
        let (p, q) = (ctx.rng.gen_range(0..=n), ctx.rng.gen_range(0..=n));
        let (r, s) = (ctx.rng.gen_range(0..=n - p), ctx.rng.gen_range(0..=n - q));
        let w = random(ctx, p, q);
        let t = random(ctx, r, s);
        let lhs = &w * &t;
        let rhs = &t * &w;
        let rhs = if (p * r + q * s) % 2 == 0 { rhs } else { -rhs };
        ctx.record(
            lhs == rhs,
            || "graded commutativity fails".into(),
            || json!({"omega": json(&w), "theta": json(&t)}),
        );
    }
}

fn associativity(ctx: &mut Ctx) {
    let n = ctx.n;
    for _ in 0..ctx.trials {
        let mut degs = Vec::new();
        let (mut pl, mut ql) = (n, n);
        for _ in 0..3 {
            let p = ctx.rng.gen_range(0..=pl.min(2));
            let q = ctx.rng.gen_range(0..=ql.min(2));
            pl -= p;
            ql -= q;
            degs.push((p, q));
        }
        let a = random(ctx, degs[0].0, degs[0].1);
        let b = random(ctx, degs[1].0, degs[1].1);
        let c = random(ctx, degs[2].0, degs[2].1);
        let ok = &(&a * &b) * &c == &a * &(&b * &c);
        ctx.record(ok, || "(ab)c != a(bc)".into(), || json!({"a": json(&a), "b": json(&b), "c": json(&c)}));
    }
}

/// `c(gω) = g cω + (n-p-q) ω`.
fn metric_commutator(ctx: &mut Ctx) {
    let n = ctx.n;
    for _ in 0..ctx.trials {
        let (p, q) = (ctx.rng.gen_range(0..=n), ctx.rng.gen_range(0..=n));
        let w = random(ctx, p, q);
        let lhs = w.mul_g_power(1).contract();
        let rhs = &w.contract().mul_g_power(1) + &w.scale(&int(n as i64 - p as i64 - q as i64));
        ctx.record(lhs == rhs, || "c(gω) != g cω + (n-p-q)ω".into(), || json!({"omega": json(&w)}));
    }
}

/// `c^k(g^l/l! ω) = g^l/l! c^kω + Σ_r C(k,r) Π_{i<r}(n-p-q+k-l-i) g^{l-r}/(l-r)! c^{k-r}ω`.
fn contraction_of_metric_powers(ctx: &mut Ctx) {
    let n = ctx.n;
    for _ in 0..ctx.trials {
        let (p, q) = (ctx.rng.gen_range(0..=n), ctx.rng.gen_range(0..=n));
        let k = ctx.rng.gen_range(1..=3usize);
        let l = ctx.rng.gen_range(1..=3usize);
        let w = random(ctx, p, q);
        let lhs = w.mul_g_power(l).scale(&inv_factorial(l as isize)).contract_power(k);
        let mut rhs = w.contract_power(k).mul_g_power(l).scale(&inv_factorial(l as isize));
        let m = n as i64 - p as i64 - q as i64 + k as i64 - l as i64;
        for r in 1..=k.min(l) {
            let prod = (0..r as i64).fold(int(1), |a, i| a * int(m - i));
            let coeff = int(binomial(k, r) as i64) * prod * inv_factorial((l - r) as isize);
            rhs = &rhs + &w.contract_power(k - r).mul_g_power(l - r).scale(&coeff);
        }
        ctx.record(
            lhs == rhs,
            || format!("contraction formula fails for k={k}, l={l}"),
            || json!({"omega": json(&w), "k": k, "l": l}),
        );
    }
}

/// For `n = p+q`: `c^k(g^k ω) = g^k c^k ω`.
fn middle_degree_commutation(ctx: &mut Ctx) {
    let n = ctx.n;
    for _ in 0..ctx.trials {
        let p = ctx.rng.gen_range(0..=n);
        let q = n - p;
        let k = ctx.rng.gen_range(1..=p.min(q) + 1);
        let w = random(ctx, p, q);
        let lhs = w.mul_g_power(k).contract_power(k);
        let rhs = w.contract_power(k).mul_g_power(k);
        ctx.record(
            lhs == rhs,
            || format!("c^k g^k != g^k c^k for k={k}"),
            || json!({"omega": json(&w), "k": k}),
        );
    }
}

/// `ℬ(ωθ) = ℬω·θ + (-1)^{p+q} ω·ℬθ`.
fn bianchi_leibniz(ctx: &mut Ctx) {
    let n = ctx.n;
    for _ in 0..ctx.trials {
        let (p, q) = (ctx.rng.gen_range(0..=n), ctx.rng.gen_range(0..=n));
        let (r, s) = (ctx.rng.gen_range(0..=n - p), ctx.rng.gen_range(0..=n - q));
        let w = random(ctx, p, q);
        let t = random(ctx, r, s);
        let lhs = (&w * &t).bianchi_sum();
        let second = &w * &t.bianchi_sum();
        let second = if (p + q) % 2 == 0 { second } else { -second };
        let rhs = &(&w.bianchi_sum() * &t) + &second;
        ctx.record(
            lhs == rhs,
            || "Leibniz rule for the Bianchi sum fails".into(),
            || json!({"omega": json(&w), "theta": json(&t)}),
        );
    }
}
