//! Verification suites. Every identity of the library becomes a keyed check
//! run over exhaustive or seeded random inputs; failures carry the input
//! that reproduces them.

pub mod avez;
pub mod core_identities;
pub mod curvature;
pub mod decomposition;
pub mod hodge;
pub mod models;

use std::panic::{self, AssertUnwindSafe};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

/// Dimensions the suites accept.
pub const SUPPORTED_N: std::ops::RangeInclusive<usize> = 2..=6;

/// Suites used when no `--n` is given: one even and one odd dimension.
pub const DEFAULT_NS: [usize; 2] = [4, 5];

const MAX_EXAMPLES: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    CoreIdentities,
    Hodge,
    Decomposition,
    Curvature,
    Avez,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::CoreIdentities => "core-identities",
            Suite::Hodge => "hodge",
            Suite::Decomposition => "decomposition",
            Suite::Curvature => "curvature",
            Suite::Avez => "avez",
            Suite::All => "all",
        }
    }

    fn checks(self, n: usize) -> Vec<Check> {
        match self {
            Suite::CoreIdentities => core_identities::checks(n),
            Suite::Hodge => hodge::checks(n),
            Suite::Decomposition => decomposition::checks(n),
            Suite::Curvature => curvature::checks(n),
            Suite::Avez => avez::checks(n),
            Suite::All => [
                Suite::CoreIdentities,
                Suite::Hodge,
                Suite::Decomposition,
                Suite::Curvature,
                Suite::Avez,
            ]
            .into_iter()
            .flat_map(|s| s.checks(n))
            .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub detail: String,
    pub input: Value,
}

/// State handed to a running check: its private random stream and tallies.
pub struct Ctx {
    pub n: usize,
    pub trials: usize,
    pub rng: ChaCha8Rng,
    runs: usize,
    failures: usize,
    examples: Vec<Failure>,
}

impl Ctx {
    fn new(n: usize, trials: usize, seed: u64, key: &str) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(fnv1a(key));
        Self {
            n,
            trials,
            rng,
            runs: 0,
            failures: 0,
            examples: Vec::new(),
        }
    }

    /// Records one evaluated instance.
    pub fn record(&mut self, ok: bool, detail: impl FnOnce() -> String, input: impl FnOnce() -> Value) {
        self.runs += 1;
        if !ok {
            self.failures += 1;
            if self.examples.len() < MAX_EXAMPLES {
                self.examples.push(Failure {
                    detail: detail(),
                    input: input(),
                });
            }
        }
    }

    /// Records an instance whose evaluation may itself fail; errors count as failures.
    pub fn record_result(
        &mut self,
        result: dforms::Result<bool>,
        detail: impl FnOnce() -> String,
        input: impl FnOnce() -> Value,
    ) {
        match result {
            Ok(ok) => self.record(ok, detail, input),
            Err(e) => self.record(false, || format!("{}: error: {e}", detail()), input),
        }
    }

    pub fn runs(&self) -> usize {
        self.runs
    }
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

type CheckFn = Box<dyn Fn(&mut Ctx) + Send + Sync>;

pub struct Check {
    pub key: String,
    pub n: usize,
    run: CheckFn,
}

pub fn check(suite: &str, n: usize, name: &str, run: impl Fn(&mut Ctx) + Send + Sync + 'static) -> Check {
    Check {
        key: format!("{suite}/n={n}/{name}"),
        n,
        run: Box::new(run),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub key: String,
    pub runs: usize,
    pub failures: usize,
    pub examples: Vec<Failure>,
}

impl Check {
    /// Runs the check with a random stream derived from `(seed, key)`.
    pub fn run(&self, trials: usize, seed: u64) -> CheckOutcome {
        let mut ctx = Ctx::new(self.n, trials, seed, &self.key);
        let result = panic::catch_unwind(AssertUnwindSafe(|| (self.run)(&mut ctx)));
        if let Err(payload) = result {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            ctx.record(false, || format!("panicked: {msg}"), || Value::Null);
        }
        CheckOutcome {
            key: self.key.clone(),
            runs: ctx.runs,
            failures: ctx.failures,
            examples: ctx.examples,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyOutcome {
    pub suite: String,
    pub ns: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub checks_run: usize,
    pub failures: usize,
    pub checks: Vec<CheckOutcome>,
    /// Not serialized, so that reports stay byte-identical across runs.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// All checks of a suite for the given dimensions.
pub fn suite_checks(suite: Suite, ns: &[usize]) -> Vec<Check> {
    ns.iter().flat_map(|&n| suite.checks(n)).collect()
}

/// Runs checks on a worker pool; the result is ordered by key and does not
/// depend on scheduling.
pub fn run_checks(checks: &[Check], trials: usize, seed: u64) -> Vec<CheckOutcome> {
    let workers = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(checks.len().max(1));
    let next = AtomicUsize::new(0);
    let results = Mutex::new(Vec::with_capacity(checks.len()));
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(c) = checks.get(i) else { break };
                let out = c.run(trials, seed);
                results.lock().expect("results lock").push(out);
            });
        }
    });
    let mut results = results.into_inner().expect("results lock");
    results.sort_by(|a, b| a.key.cmp(&b.key));
    results
}

pub fn run_verify(suite: Suite, ns: &[usize], trials: usize, seed: u64) -> VerifyOutcome {
    let start = Instant::now();
    let checks = suite_checks(suite, ns);
    let outcomes = run_checks(&checks, trials, seed);
    VerifyOutcome {
        suite: suite.name().to_string(),
        ns: ns.to_vec(),
        trials,
        seed,
        checks_run: outcomes.iter().map(|c| c.runs).sum(),
        failures: outcomes.iter().map(|c| c.failures).sum(),
        checks: outcomes,
        wall_time: start.elapsed(),
    }
}

/// JSON value of anything serializable, for failure reports.
pub fn json<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).unwrap_or(Value::Null)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_depend_on_key_not_order() {
        use rand::Rng;
        let a: u64 = Ctx::new(4, 1, 7, "x").rng.gen();
        let b: u64 = Ctx::new(4, 1, 7, "x").rng.gen();
        let c: u64 = Ctx::new(4, 1, 7, "y").rng.gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn panics_become_failures() {
        let c = check("t", 3, "boom", |_| panic!("nope"));
        let out = c.run(1, 0);
        assert_eq!(out.failures, 1);
        assert!(out.examples[0].detail.contains("nope"));
    }

    #[test]
    fn failure_examples_are_capped() {
        let c = check("t", 3, "many", |ctx| {
            for i in 0..10 {
                ctx.record(false, || format!("{i}"), || Value::Null);
            }
        });
        let out = c.run(1, 0);
        assert_eq!((out.runs, out.failures, out.examples.len()), (10, 10, MAX_EXAMPLES));
    }
}
