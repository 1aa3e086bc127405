//! Acceptance criteria 1 to 10. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use dforms::curvature::{
    avez_pairing, einstein_tensor, make_constant_curvature, make_hypersurface, make_product, pq_curvature_tensor,
    sectional_curvature, sign_report_h4, trace11, weyl_invariant, Frame,
};
use dforms::decomposition::{is_effective, map_rank, star_bianchi, star_in_components};
use dforms::scalar::{frac, int, inv_factorial, Scalar};
use dforms::{binomial, decompose, sample, DoubleForm, IndexSet};
use dforms_cli::verify::models::{
    constant, einstein_sphere_product, models, product, scalar_flat_conformally_flat, Model,
};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn new(failures: usize, total: usize, what: &str) -> Self {
        Self {
            ok: failures == 0 && total > 0,
            detail: format!("{what}: {total} cases, {failures} failures"),
        }
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn basis_forms(n: usize, p: usize, q: usize) -> Vec<DoubleForm> {
    let mut out = Vec::new();
    for r in 0..binomial(n, p) {
        for c in 0..binomial(n, q) {
            let i = IndexSet::unrank(n, p, r).unwrap();
            let j = IndexSet::unrank(n, q, c).unwrap();
            out.push(DoubleForm::basis(n, &i, &j).unwrap());
        }
    }
    out
}

/// `⟨gω,θ⟩ = ⟨ω,cθ⟩`: all basis pairs at n=3,4; 200 random pairs at n=5,6.
fn criterion_1() -> Outcome {
    let start = Instant::now();
    let (mut total, mut failures) = (0, 0);
    for n in [3, 4] {
        for p in 0..n {
            for q in 0..n {
                let small = basis_forms(n, p, q);
                let large = basis_forms(n, p + 1, q + 1);
                let gs: Vec<_> = small.iter().map(|w| w.mul_g_power(1)).collect();
                let cs: Vec<_> = large.iter().map(|t| t.contract()).collect();
                for (w, gw) in small.iter().zip(&gs) {
                    for (t, ct) in large.iter().zip(&cs) {
                        total += 1;
                        failures += usize::from(gw.inner(t) != w.inner(ct));
                    }
                }
            }
        }
    }
    let mut r = rng(1);
    for n in [5, 6] {
        for _ in 0..200 {
            let p = r.gen_range(0..n);
            let q = r.gen_range(0..n);
            let w = sample::random_form(&mut r, n, p, q).unwrap();
            let t = sample::random_form(&mut r, n, p + 1, q + 1).unwrap();
            total += 1;
            failures += usize::from(w.mul_g_power(1).inner(&t) != w.inner(&t.contract()));
        }
    }
    let elapsed = start.elapsed();
    let mut out = Outcome::new(failures, total, "adjointness");
    out.ok &= elapsed < Duration::from_secs(60);
    out.detail += &format!(", {:.2?}", elapsed);
    out
}

/// `gω = *c*ω` and `**ω = (-1)^{(p+q)(n-p-q)} ω` on every `(p,q)` for `n <= 6`.
fn criterion_2() -> Outcome {
    let mut r = rng(2);
    let (mut total, mut conj_failures, mut sign_failures) = (0, 0, 0);
    let mut first = None;
    for n in 1..=6usize {
        for p in 0..=n {
            for q in 0..=n {
                for _ in 0..3 {
                    let w = sample::random_form(&mut r, n, p, q).unwrap();
                    total += 1;
                    if w.mul_g_power(1) != w.hodge().contract().hodge() {
                        conj_failures += 1;
                        first.get_or_insert((n, p, q));
                    }
                    let ss = w.hodge().hodge();
                    let expected = if (p * (n - p) + q * (n - q)) % 2 == 0 { w.clone() } else { -w.clone() };
                    sign_failures += usize::from(ss != expected);
                }
            }
        }
    }
    let mut out = Outcome::new(conj_failures + sign_failures, total, "g = *c* and ** sign law");
    out.detail += &format!(" ({conj_failures} for g = *c*, {sign_failures} for **)");
    if let Some((n, p, q)) = first {
        out.detail += &format!(
            "; first counterexample n={n}, D^({p},{q}): in odd n, g = (-1)^(p+q) *c*, so the unsigned identity cannot hold"
        );
    }
    out
}

/// Rank of `g^l` on `D^{p,q}` is `min(dim D^{p,q}, dim D^{p+l,q+l})`.
fn criterion_3() -> Outcome {
    let dim = |n: usize, p: usize, q: usize| if p > n || q > n { 0 } else { binomial(n, p) * binomial(n, q) };
    let (mut total, mut failures) = (0, 0);
    for n in [4, 5] {
        for p in 0..=3 {
            for q in 0..=3 {
                for l in 0..=3 {
                    total += 1;
                    let predicted = dim(n, p, q).min(dim(n, p + l, q + l));
                    failures += usize::from(map_rank(n, p, q, l).ok() != Some(predicted));
                }
            }
        }
    }
    Outcome::new(failures, total, "map_rank vs predicted rank")
}

/// Round trip on every basis form of `D^{2,2}` at n=4, and the classical
/// Weyl/Ricci/scalar split of random n=4 Bianchi tensors.
fn criterion_4() -> Outcome {
    let n = 4;
    let (mut total, mut failures) = (0, 0);
    for w in basis_forms(n, 2, 2) {
        total += 1;
        let ok = decompose(&w)
            .map(|d| d.reconstruct() == w && (1..=2).all(|k| is_effective(d.component(k))))
            .unwrap_or(false);
        failures += usize::from(!ok);
    }
    let mut r = rng(4);
    let g = DoubleForm::metric(n).unwrap();
    for _ in 0..20 {
        let rt = sample::random_bianchi(&mut r, n, 2).unwrap();
        let ric = rt.contract();
        let scal = rt.contract_power(2).as_scalar().cloned().unwrap();
        // W = R - g·(Ric - scal/n g)/(n-2) - scal/(2n(n-1)) g²
        let traceless = &ric - &g.scale(&(&scal * frac(1, 4)));
        let weyl = &(&rt - &(&g * &traceless).scale(&frac(1, 2))) - &g.pow(2).scale(&(&scal * frac(1, 24)));
        total += 1;
        let ok = decompose(&rt).map(|d| *d.component(2) == weyl).unwrap_or(false) && is_effective(&weyl);
        failures += usize::from(!ok);
    }
    Outcome::new(failures, total, "round trip and Weyl split")
}

/// Closed-form stars against the direct Hodge star on 100 random Bianchi
/// tensors at each of n=4,5,6.
fn criterion_5() -> Outcome {
    let mut r = rng(5);
    let (mut total, mut failures) = (0, 0);
    for n in [4, 5, 6] {
        for _ in 0..100 {
            let w = sample::random_bianchi(&mut r, n, 2).unwrap();
            let d = decompose(&w).unwrap();
            for k in 2..=n {
                total += 1;
                let direct = w.mul_g_power(k - 2).hodge().scale(&inv_factorial((k - 2) as isize));
                failures += usize::from(star_bianchi(&w, k).ok() != Some(direct));
            }
            for l in 0..=n - 2 {
                total += 1;
                failures += usize::from(star_in_components(&d, l).ok() != Some(w.mul_g_power(l).hodge()));
            }
        }
    }
    Outcome::new(failures, total, "explicit Hodge formulas")
}

/// Worked numbers for S⁴, the hypersurface diag(1,1,1,0) and S²×S².
fn criterion_6() -> Outcome {
    let mut failures = Vec::new();
    let sphere = make_constant_curvature(4, &int(1)).unwrap();
    let g = DoubleForm::metric(4).unwrap();
    let b = DoubleForm::diagonal(&[int(1), int(1), int(1), int(0)]).unwrap();
    let hyper = make_hypersurface(&b).unwrap();
    let s2 = make_constant_curvature(2, &int(1)).unwrap();
    let s2s2 = make_product(&s2, &s2).unwrap();
    let expect = [
        ("S4 h_2", weyl_invariant(&sphere, 1).unwrap(), int(6)),
        ("S4 h_4", weyl_invariant(&sphere, 2).unwrap(), int(6)),
        ("diag(1,1,1,0) h_2", weyl_invariant(&hyper, 1).unwrap(), int(3)),
        ("diag(1,1,1,0) h_4", weyl_invariant(&hyper, 2).unwrap(), int(0)),
        ("S2xS2 h_2", weyl_invariant(&s2s2, 1).unwrap(), int(2)),
        ("S2xS2 h_4", weyl_invariant(&s2s2, 2).unwrap(), int(2)),
    ];
    for (name, got, want) in &expect {
        if got != want {
            failures.push(format!("{name} = {got}, expected {want}"));
        }
    }
    if einstein_tensor(&sphere, 1).unwrap() != g.scale(&int(3)) {
        failures.push("S4 T_2 != 3g".into());
    }
    Outcome {
        ok: failures.is_empty(),
        detail: if failures.is_empty() {
            "S4, diag(1,1,1,0), S2xS2 values exact".into()
        } else {
            failures.join("; ")
        },
    }
}

fn models_at(n: usize, seed: u64) -> Vec<Model> {
    models(n, &mut rng(seed), 3)
}

/// Avez pairing on 200 random Bianchi pairs at n=4, the `|c^rR|²` form of
/// `h_4` on every model, and `h_4 = |R|² − |cR|² + ¼|c²R|²`.
fn criterion_7() -> Outcome {
    let mut r = rng(7);
    let (mut total, mut failures) = (0, 0);
    for _ in 0..200 {
        let w = sample::random_bianchi(&mut r, 4, 2).unwrap();
        let t = sample::random_bianchi(&mut r, 4, 2).unwrap();
        let direct = (&w * &t).hodge().as_scalar().cloned().unwrap();
        let mut gsum = int(0);
        let (mut a, mut b) = (w.clone(), t.clone());
        for k in 0..=2 {
            let x = inv_factorial(k);
            let term = a.inner(&b) * &x * &x;
            gsum = if k % 2 == 0 { gsum + term } else { gsum - term };
            a = a.mul_g_power(1);
            b = b.mul_g_power(1);
        }
        total += 1;
        failures += usize::from(avez_pairing(&w, &t).ok() != Some(direct.clone()) || gsum != direct);
    }
    for m in models_at(4, 70) {
        let rt = m.r.form();
        let h4 = weyl_invariant(&m.r, 2).unwrap();
        let mut sum = int(0);
        let mut c = rt.clone();
        for k in 0..=2 {
            let x = inv_factorial(k);
            let term = c.norm_sq() * &x * &x;
            sum = if k % 2 == 0 { sum + term } else { sum - term };
            c = c.contract();
        }
        let intro = rt.norm_sq() - rt.contract().norm_sq() + frac(1, 4) * rt.contract_power(2).norm_sq();
        total += 1;
        failures += usize::from(sum != h4 || intro != h4);
    }
    Outcome::new(failures, total, "Avez pairing and h_4 norm formulas")
}

/// `h_4 > 0` on Einstein non-flat models, `< 0` on conformally flat
/// scalar-flat non-flat ones, `= 0` on flat ones.
fn criterion_8() -> Outcome {
    let mut cases: Vec<(Model, std::cmp::Ordering)> = Vec::new();
    use std::cmp::Ordering::*;
    cases.push((constant(4, int(1)), Greater));
    cases.push((product(constant(2, int(1)), constant(2, int(1))), Greater));
    cases.push((einstein_sphere_product(2, 3), Greater));
    cases.push((einstein_sphere_product(3, 3), Greater));
    cases.push((einstein_sphere_product(2, 4), Greater));
    for n in [4, 5] {
        cases.push((scalar_flat_conformally_flat(n), Less));
    }
    for n in [4, 5, 6] {
        cases.push((constant(n, int(0)), Equal));
    }
    let mut failures = Vec::new();
    for (m, want) in &cases {
        let ok = sign_report_h4(&m.r)
            .map(|rep| {
                let sign = if rep.h4.is_positive() {
                    Greater
                } else if rep.h4.is_negative() {
                    Less
                } else {
                    Equal
                };
                let hyp = match want {
                    Greater => rep.einstein && !rep.flat,
                    Less => rep.conformally_flat_scalar_flat && !rep.flat,
                    Equal => rep.flat,
                };
                rep.holds && hyp && sign == *want
            })
            .unwrap_or(false);
        if !ok {
            failures.push(m.name.clone());
        }
    }
    Outcome {
        ok: failures.is_empty(),
        detail: format!("{} models, violations: {:?}", cases.len(), failures),
    }
}

fn coordinate_frames(n: usize, p: usize) -> Vec<Frame> {
    (0..binomial(n, p))
        .map(|k| Frame::coordinate(n, &IndexSet::unrank(n, p, k).unwrap().indices()).unwrap())
        .collect()
}

fn unit(n: usize, i: usize) -> Vec<Scalar> {
    (0..n).map(|k| int((k == i) as i64)).collect()
}

/// Trace law and summation law on every model, `q <= 2`, `n <= 6`.
fn criterion_9() -> Outcome {
    let (mut total, mut failures) = (0, 0);
    for n in 2..=6usize {
        for m in models_at(n, 90 + n as u64) {
            for q in 1..=(n / 2).min(2) {
                let h = weyl_invariant(&m.r, q).unwrap();
                total += 1;
                failures += usize::from(trace11(&einstein_tensor(&m.r, q).unwrap()) != h * int(n as i64 - 2 * q as i64));
                for p in 1..=n - 2 * q {
                    let upper = pq_curvature_tensor(&m.r, p, q).unwrap();
                    let lower = pq_curvature_tensor(&m.r, p - 1, q).unwrap();
                    for f in coordinate_frames(n, p - 1) {
                        let idx: Vec<usize> = f.vectors().iter().map(|v| v.iter().position(|x| !x.is_zero()).unwrap()).collect();
                        let mut sum = int(0);
                        for k in (0..n).filter(|k| !idx.contains(k)) {
                            let mut vs = f.vectors().to_vec();
                            vs.push(unit(n, k));
                            sum += sectional_curvature(&upper, &Frame::new(n, vs).unwrap()).unwrap();
                        }
                        let rhs = sectional_curvature(&lower, &f).unwrap() * int((n - 2 * q - p + 1) as i64);
                        total += 1;
                        failures += usize::from(sum != rhs);
                    }
                }
            }
        }
    }
    Outcome::new(failures, total, "trace and summation laws")
}

/// Two runs of the verify command produce identical bytes.
fn criterion_10() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_dforms"))
            .args(["verify", "--suite", "all", "--n", "5", "--trials", "100", "--seed", "7"])
            .output()
            .expect("run dforms")
    };
    let (a, b) = (run(), run());
    let ok = a.status.success() && b.status.success() && a.stdout == b.stdout && !a.stdout.is_empty();
    Outcome {
        ok,
        detail: format!(
            "verify --suite all --n 5 --trials 100 --seed 7: {} bytes, identical: {}, exit codes {:?}/{:?}",
            a.stdout.len(),
            a.stdout == b.stdout,
            a.status.code(),
            b.status.code()
        ),
    }
}

fn main() {
    let criteria: [(usize, fn() -> Outcome); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let mut failed = 0;
    for (i, f) in criteria {
        let out = f();
        let verdict = if out.ok { "PASS" } else { "FAIL" };
        println!("criterion {i}: {verdict}: {}", out.detail);
        failed += usize::from(!out.ok);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
