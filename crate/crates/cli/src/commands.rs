//! The `invariants`, `pq` and `decompose` commands. Each returns the text to
//! print on stdout.

use std::path::Path;

use anyhow::{bail, Context, Result};
use dforms::curvature::{invariant_report, pq_sectional, Frame, PqSample};
use dforms::io::{from_json, report_table, to_json, ModelSpec};
use dforms::scalar::{to_canonical, to_decimal6};
use dforms::{decompose, DoubleForm};
use serde_json::json;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Table,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

pub fn load_spec(path: &Path) -> Result<ModelSpec> {
    from_json(&read(path)?).with_context(|| format!("invalid model spec {}", path.display()))
}

/// `h_{2q}`, `T_{2q}` for `q = 1..=max_q`, and `s_{(p,q)}` on the leading
/// coordinate planes.
pub fn invariants(spec: &Path, max_q: usize, format: Format) -> Result<String> {
    let spec = load_spec(spec)?;
    let n = spec.n();
    if max_q == 0 || 2 * max_q > n {
        bail!("--max-q must satisfy 1 <= max-q and 2*max-q <= n = {n}, got {max_q}");
    }
    let r = spec.build().context("cannot build the model")?;
    let mut report = invariant_report(&r, max_q)?;
    for q in 1..=max_q {
        for p in 0..=n - 2 * q {
            let plane: Vec<usize> = (0..p).collect();
            let value = pq_sectional(&r, p, q, &Frame::coordinate(n, &plane)?)?;
            report.samples.push(PqSample { p, q, plane, value });
        }
    }
    Ok(match format {
        Format::Json => to_json(&report),
        Format::Table => report_table(&report),
    })
}

/// `s_{(p,q)}` on the coordinate plane spanned by `e_i`, `i ∈ plane`.
pub fn pq(spec: &Path, p: usize, q: usize, plane: &[usize]) -> Result<String> {
    let spec = load_spec(spec)?;
    let n = spec.n();
    if plane.len() != p {
        bail!("--plane must list exactly p = {p} indices, got {}", plane.len());
    }
    let frame = Frame::coordinate(n, plane).context("invalid --plane")?;
    let r = spec.build().context("cannot build the model")?;
    let value = pq_sectional(&r, p, q, &frame)?;
    Ok(to_json(&json!({
        "n": n,
        "p": p,
        "q": q,
        "plane": plane,
        "value": to_canonical(&value),
        "value_decimal": to_decimal6(&value),
    })))
}

/// Effective decomposition of a square double form.
pub fn decompose_file(input: &Path) -> Result<String> {
    let form: DoubleForm = from_json(&read(input)?).with_context(|| format!("invalid double form {}", input.display()))?;
    let d = decompose(&form)?;
    Ok(to_json(&d))
}
