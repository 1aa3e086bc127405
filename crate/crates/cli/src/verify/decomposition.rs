//! Ranks of metric multiplication, the effective decomposition and its
//! consequences.

use dforms::decomposition::{contract_power_from_components, g_power_kernel, g_power_matrix, is_effective};
use dforms::linalg::Matrix;
use dforms::scalar::{factorial, int, inv_factorial};
use dforms::{binomial, decompose, sample, DoubleForm, IndexSet};
use rand::Rng;
use serde_json::json;

use super::{check, json, Check, Ctx};

const SUITE: &str = "decomposition";

pub fn checks(n: usize) -> Vec<Check> {
    let mut out = vec![
        check(SUITE, n, "round-trip", round_trip),
        check(SUITE, n, "metric-power-ranks", metric_power_ranks),
        check(SUITE, n, "metric-and-contraction-trichotomy", trichotomy),
        check(SUITE, n, "middle-isomorphisms", middle_isomorphisms),
        check(SUITE, n, "kernel-forces-contraction-kernel", kernel_forces_contraction_kernel),
        check(SUITE, n, "effective-contraction", effective_contraction),
        check(SUITE, n, "contraction-from-components", contraction_from_components),
        check(SUITE, n, "component-orthogonality", component_orthogonality),
        check(SUITE, n, "metric-power-norms", metric_power_norms),
    ];
    if n >= 3 {
        out.push(check(SUITE, n, "weyl-ricci-scalar-split", weyl_split));
    }
    out
}

fn dim(n: usize, p: usize, q: usize) -> usize {
    if p > n || q > n {
        0
    } else {
        binomial(n, p) * binomial(n, q)
    }
}

fn check_round_trip(ctx: &mut Ctx, w: &DoubleForm) {
    let p = w.p() as usize;
    let result = decompose(w).map(|d| {
        d.reconstruct() == *w && (1..=p).all(|k| is_effective(d.component(k)))
    });
    ctx.record_result(
        result,
        || format!("round trip or effectiveness fails on D^({p},{p})"),
        || json!({"omega": json(w)}),
    );
}

/// `decompose` then `reconstruct` is the identity with effective components:
/// over all basis forms when `n <= 4`, plus random forms of every degree.
fn round_trip(ctx: &mut Ctx) {
    let n = ctx.n;
    if n <= 4 {
        for p in 0..=n {
            for r in 0..binomial(n, p) {
                for c in 0..binomial(n, p) {
                    let i = IndexSet::unrank(n, p, r).expect("rank");
                    let j = IndexSet::unrank(n, p, c).expect("rank");
                    let w = DoubleForm::basis(n, &i, &j).expect("basis");
                    check_round_trip(ctx, &w);
                }
            }
        }
    }
    for t in 0..ctx.trials {
        let p = t % (n + 1);
        let w = sample::random_form(&mut ctx.rng, n, p, p).expect("degree");
        check_round_trip(ctx, &w);
    }
}

/// Rank of `g^l` on `D^{p,q}` is `min(dim D^{p,q}, dim D^{p+l,q+l})` for
/// `p, q, l <= 3`.
fn metric_power_ranks(ctx: &mut Ctx) {
    let n = ctx.n;
    for p in 0..=n.min(3) {
        for q in 0..=n.min(3) {
            for l in 0..=3 {
                let predicted = dim(n, p, q).min(dim(n, p + l, q + l));
                let rank = g_power_matrix(n, p, q, l).map(|m| m.rank());
                ctx.record_result(
                    rank.as_ref().map(|&r| r == predicted).map_err(Clone::clone),
                    || format!("rank of g^{l} on D^({p},{q}) is {rank:?}, predicted {predicted}"),
                    || json!({"n": n, "p": p, "q": q, "l": l}),
                );
            }
        }
    }
}

fn contraction_matrix(n: usize, p: usize, q: usize) -> Matrix {
    // rows are images of basis forms of D^{p+1,q+1}; rank is unaffected by the layout
    let mut rows = Vec::new();
    for r in 0..binomial(n, p + 1) {
        for c in 0..binomial(n, q + 1) {
            let i = IndexSet::unrank(n, p + 1, r).expect("rank");
            let j = IndexSet::unrank(n, q + 1, c).expect("rank");
            rows.push(DoubleForm::basis(n, &i, &j).expect("basis").contract().into_coeffs());
        }
    }
    Matrix::from_rows(rows).expect("rectangular")
}

/// `g` on `D^{p,q}` is 1-1 iff `p+q <= n-1` and onto iff `p+q >= n-1`;
/// `c: D^{p+1,q+1} → D^{p,q}` is onto iff `p+q <= n-1` and 1-1 iff
/// `p+q >= n-1`. Injectivity of `g^l` whenever `p+q+l < n+1`.
fn trichotomy(ctx: &mut Ctx) {
    let n = ctx.n;
    for p in 0..n {
        for q in 0..n {
            if dim(n, p, q) * dim(n, p + 1, q + 1) > 200_000 {
                continue;
            }
            let (src, dst) = (dim(n, p, q), dim(n, p + 1, q + 1));
            let g_rank = match g_power_matrix(n, p, q, 1) {
                Ok(m) => m.rank(),
                Err(e) => {
                    ctx.record(false, || format!("matrix of g failed: {e}"), || json!({"p": p, "q": q}));
                    continue;
                }
            };
            let c_rank = contraction_matrix(n, p, q).rank();
            let s = p + q;
            let ok = (g_rank == src) == (s < n)
                && (g_rank == dst) == (s + 1 >= n)
                && (c_rank == src) == (s < n)
                && (c_rank == dst) == (s + 1 >= n);
            ctx.record(
                ok,
                || format!("trichotomy fails on D^({p},{q}): rank g = {g_rank}, rank c = {c_rank}, dims {src} -> {dst}"),
                || json!({"n": n, "p": p, "q": q}),
            );
        }
    }
    for p in 0..=n.min(3) {
        for q in 0..=n.min(3) {
            for l in 1..=3 {
                if p + q + l >= n + 1 {
                    continue;
                }
                let rank = rank_of(n, p, q, l);
                let src = dim(n, p, q);
                ctx.record(
                    rank == Some(src),
                    || format!("g^{l} not injective on D^({p},{q}): rank {rank:?} of {src}"),
                    || json!({"n": n, "p": p, "q": q, "l": l}),
                );
            }
        }
    }
}

fn rank_of(n: usize, p: usize, q: usize, l: usize) -> Option<usize> {
    g_power_matrix(n, p, q, l).ok().map(|m| m.rank())
}

/// `g^{2i+1}: D^{p-i,q-i} → D^{p+i+1,q+i+1}` for `p+q = n-1` and
/// `g^{2i}: D^{p-i,q-i} → D^{p+i,q+i}` for `p+q = n` are isomorphisms.
fn middle_isomorphisms(ctx: &mut Ctx) {
    let n = ctx.n;
    for s in [n - 1, n] {
        for p in 0..=s {
            let q = s - p;
            if p > n || q > n {
                continue;
            }
            for i in 0..=p.min(q) {
                let l = if s + 1 == n { 2 * i + 1 } else { 2 * i };
                let (a, b) = (p - i, q - i);
                let (src, dst) = (dim(n, a, b), dim(n, a + l, b + l));
                if src * dst > 200_000 {
                    continue;
                }
                let rank = rank_of(n, a, b, l);
                ctx.record(
                    src == dst && rank == Some(src),
                    || format!("g^{l} on D^({a},{b}) is not bijective: rank {rank:?}, dims {src} -> {dst}"),
                    || json!({"n": n, "p": a, "q": b, "l": l}),
                );
            }
        }
    }
}

/// `g^lω = 0` implies `c^kω = 0` when `l+p+q < n+1+k`.
fn kernel_forces_contraction_kernel(ctx: &mut Ctx) {
    let n = ctx.n;
    for p in 0..=n.min(3) {
        for q in 0..=n.min(3) {
            for l in 1..=3 {
                if dim(n, p, q) * dim(n, p + l, q + l) > 200_000 {
                    continue;
                }
                let Ok(kernel) = g_power_kernel(n, p, q, l) else {
                    ctx.record(false, || "kernel computation failed".into(), || json!({"p": p, "q": q, "l": l}));
                    continue;
                };
                for w in &kernel {
                    for k in 0..=p.min(q) {
                        if l + p + q >= n + 1 + k {
                            continue;
                        }
                        ctx.record(
                            w.contract_power(k).is_zero(),
                            || format!("c^{k} of a kernel element of g^{l} on D^({p},{q}) is nonzero"),
                            || json!({"omega": json(w), "k": k, "l": l}),
                        );
                    }
                }
            }
        }
    }
}

/// For effective `ω ∈ E^{p,q}`:
/// `c^k(g^l/l! ω) = Π_{i=1}^{k}(n-p-q-l+i) g^{l-k}/(l-k)! ω`, zero when `l < k`.
fn effective_contraction(ctx: &mut Ctx) {
    let n = ctx.n;
    for _ in 0..ctx.trials {
        let p = ctx.rng.gen_range(0..=n.min(3));
        let q = ctx.rng.gen_range(0..=n.min(3));
        let k = ctx.rng.gen_range(1..=3usize);
        let l = ctx.rng.gen_range(0..=3usize);
        let w = sample::random_effective(&mut ctx.rng, n, p, q).expect("degree");
        let lhs = w.mul_g_power(l).scale(&inv_factorial(l as isize)).contract_power(k);
        let rhs = if l < k {
            lhs.scale(&int(0))
        } else {
            let m = n as i64 - p as i64 - q as i64 - l as i64;
            let coeff = (1..=k as i64).fold(int(1), |a, i| a * int(m + i));
            w.mul_g_power(l - k).scale(&(coeff * inv_factorial((l - k) as isize)))
        };
        ctx.record(
            lhs == rhs,
            || format!("effective contraction formula fails for k={k}, l={l}"),
            || json!({"omega": json(&w), "k": k, "l": l}),
        );
    }
}

/// `c^kω = Σ_{i=k}^{p} i! Π_{j=1}^{k}(n-2p+i+j) g^{i-k}/(i-k)! ω_{p-i}`.
fn contraction_from_components(ctx: &mut Ctx) {
    let n = ctx.n;
    for t in 0..ctx.trials {
        let p = t % (n + 1);
        let w = sample::random_form(&mut ctx.rng, n, p, p).expect("degree");
        let k = ctx.rng.gen_range(0..=p);
        let result = decompose(&w)
            .and_then(|d| contract_power_from_components(&d, k))
            .map(|f| f == w.contract_power(k));
        ctx.record_result(
            result,
            || format!("c^{k} from components disagrees on D^({p},{p})"),
            || json!({"omega": json(&w), "k": k}),
        );
    }
}

/// The summands `g^{p-k}ω_k` are mutually orthogonal.
fn component_orthogonality(ctx: &mut Ctx) {
    let n = ctx.n;
    for t in 0..ctx.trials {
        let p = t % (n + 1);
        let w = sample::random_form(&mut ctx.rng, n, p, p).expect("degree");
        let d = match decompose(&w) {
            Ok(d) => d,
            Err(e) => {
                ctx.record(false, || format!("decompose failed: {e}"), || json!({"omega": json(&w)}));
                continue;
            }
        };
        let parts: Vec<DoubleForm> = (0..=p).map(|k| d.component(k).mul_g_power(p - k)).collect();
        let ok = (0..=p).all(|a| (0..a).all(|b| parts[a].inner(&parts[b]) == int(0)));
        ctx.record(ok, || format!("components of D^({p},{p}) are not orthogonal"), || json!({"omega": json(&w)}));
    }
}

/// For effective `ω_1, ω_2 ∈ E^{r,r}`:
/// `⟨g^kω_1, g^kω_2⟩ = k! Π_{i<k}(n-2r-i) ⟨ω_1,ω_2⟩`; different powers of
/// effective forms of different degrees are orthogonal.
fn metric_power_norms(ctx: &mut Ctx) {
    let n = ctx.n;
    for _ in 0..ctx.trials {
        let r = ctx.rng.gen_range(0..=(n / 2).min(3));
        let k = ctx.rng.gen_range(0..=n - 2 * r);
        let a = sample::random_effective(&mut ctx.rng, n, r, r).expect("degree");
        let b = sample::random_effective(&mut ctx.rng, n, r, r).expect("degree");
        let prod = (0..k as i64).fold(factorial(k), |acc, i| acc * int(n as i64 - 2 * r as i64 - i));
        let lhs = a.mul_g_power(k).inner(&b.mul_g_power(k));
        let rhs = prod * a.inner(&b);
        ctx.record(
            lhs == rhs,
            || format!("norm formula fails for r={r}, k={k}: {lhs} vs {rhs}"),
            || json!({"a": json(&a), "b": json(&b), "k": k}),
        );
        if r >= 1 && k + 1 <= n {
            let s = r - 1;
            let c = sample::random_effective(&mut ctx.rng, n, s, s).expect("degree");
            let v = a.mul_g_power(k).inner(&c.mul_g_power(k + 1));
            ctx.record(
                v == int(0),
                || format!("g^{k}E^{r} and g^{}E^{s} are not orthogonal", k + 1),
                || json!({"a": json(&a), "c": json(&c), "k": k}),
            );
        }
    }
}

/// `R = W + g·(cR − (c²R/n) g)/(n−2) + c²R/(2n(n−1)) g²` for Bianchi `R`,
/// with `W` the effective top component.
fn weyl_split(ctx: &mut Ctx) {
    let n = ctx.n;
    for _ in 0..ctx.trials {
        let r = sample::random_bianchi(&mut ctx.rng, n, 2).expect("degree");
        let g = DoubleForm::metric(n).expect("dimension");
        let ric = r.contract();
        let scal = r.contract_power(2).as_scalar().cloned().expect("scalar");
        let nn = n as i64;
        let traceless = &ric - &g.scale(&(&scal / int(nn)));
        let result = decompose(&r).map(|d| {
            let w = d.component(2).clone();
            let rhs = &(&w + &(&g * &traceless).scale(&(int(1) / int(nn - 2))))
                + &g.pow(2).scale(&(&scal / int(2 * nn * (nn - 1))));
            rhs == r && is_effective(&w)
        });
        ctx.record_result(result, || "Weyl/Ricci/scalar split fails".into(), || json!({"r": json(&r)}));
    }
}
