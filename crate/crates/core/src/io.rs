//! JSON formats for double forms, decompositions, model specifications and
//! invariant reports, plus a plain-text table rendering of reports.
//!
//! Rationals are always written as lowest-terms `"num/den"` strings; on input
//! a bare integer string is also accepted.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::de::{DeserializeOwned, Error as _};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::basis::IndexSet;
use crate::curvature::{
    make_constant_curvature, make_conformally_flat, make_hypersurface, make_product, trace11,
    CurvatureTensor, H4SignReport, InvariantReport, InvariantRow, PqSample, SignHypothesis,
};
use crate::decomposition::EffectiveDecomposition;
use crate::error::FormError;
use crate::form::DoubleForm;
use crate::scalar::{parse_scalar, to_canonical, to_decimal6, Scalar};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("malformed JSON at {path}: {message}")]
    Json { path: String, message: String },
    #[error(transparent)]
    Form(#[from] FormError),
}

/// Parses JSON, reporting the field path of the first schema violation.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T, IoError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| IoError::Json {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Rat(Scalar);

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&to_canonical(&self.0))
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_scalar(&text).map(Rat).map_err(D::Error::custom)
    }
}

fn rats(xs: &[Scalar]) -> Vec<Rat> {
    xs.iter().cloned().map(Rat).collect()
}

fn unrat(xs: Vec<Rat>) -> Vec<Scalar> {
    xs.into_iter().map(|r| r.0).collect()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FormWire {
    n: usize,
    p: isize,
    q: isize,
    entries: Vec<(Vec<usize>, Vec<usize>, Rat)>,
}

impl FormWire {
    fn into_form(self) -> Result<DoubleForm, String> {
        let n = self.n;
        let degree = |d: isize, name: &str| -> Result<usize, String> {
            if d < 0 || d as usize > n {
                Err(format!("{name} = {d} must lie in 0..={n}"))
            } else {
                Ok(d as usize)
            }
        };
        let p = degree(self.p, "p")?;
        let q = degree(self.q, "q")?;
        let mut form = DoubleForm::zero(n, p, q).map_err(|e| e.to_string())?;
        let mut seen = HashSet::new();
        for (k, (i, j, v)) in self.entries.into_iter().enumerate() {
            let set = |idx: &[usize], deg: usize| -> Result<IndexSet, String> {
                let s = IndexSet::new(n, idx).map_err(|e| format!("entries[{k}]: {e}"))?;
                if s.len() != deg {
                    return Err(format!(
                        "entries[{k}]: index set {idx:?} has {} elements, expected {deg}",
                        s.len()
                    ));
                }
                Ok(s)
            };
            let (si, sj) = (set(&i, p)?, set(&j, q)?);
            if !seen.insert((si.bits(), sj.bits())) {
                return Err(format!("entries[{k}]: duplicate entry ({i:?}, {j:?})"));
            }
            form.set(&si, &sj, v.0);
        }
        Ok(form)
    }
}

impl From<&DoubleForm> for FormWire {
    fn from(f: &DoubleForm) -> Self {
        Self {
            n: f.n(),
            p: f.p(),
            q: f.q(),
            entries: f
                .entries()
                .map(|(i, j, v)| (i.indices(), j.indices(), Rat(v.clone())))
                .collect(),
        }
    }
}

impl Serialize for DoubleForm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FormWire::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for DoubleForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        FormWire::deserialize(d)?.into_form().map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DecompositionWire {
    n: usize,
    p: usize,
    components: Vec<DoubleForm>,
}

impl Serialize for EffectiveDecomposition {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        DecompositionWire {
            n: self.n(),
            p: self.p(),
            components: self.components().to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for EffectiveDecomposition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = DecompositionWire::deserialize(d)?;
        EffectiveDecomposition::new(w.n, w.p, w.components).map_err(D::Error::custom)
    }
}

/// Diagonal or full symmetric matrix input for `B` or `h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymmetricInput {
    Eigenvalues(Vec<Scalar>),
    Matrix(Vec<Vec<Scalar>>),
}

impl SymmetricInput {
    fn to_form(&self, n: usize) -> Result<DoubleForm, FormError> {
        let f = match self {
            SymmetricInput::Eigenvalues(v) => DoubleForm::diagonal(v)?,
            SymmetricInput::Matrix(m) => DoubleForm::from_matrix(m)?,
        };
        if f.n() != n {
            return Err(FormError::DimensionMismatch {
                left: n,
                right: f.n(),
            });
        }
        Ok(f)
    }
}

/// Declarative description of a model curvature tensor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelSpec {
    Constant { n: usize, lambda: Scalar },
    Hypersurface { n: usize, b: SymmetricInput },
    ConformallyFlat { n: usize, h: SymmetricInput },
    Product { n: usize, factors: Vec<ModelSpec> },
    Explicit { n: usize, form: DoubleForm },
}

impl ModelSpec {
    pub fn n(&self) -> usize {
        match self {
            ModelSpec::Constant { n, .. }
            | ModelSpec::Hypersurface { n, .. }
            | ModelSpec::ConformallyFlat { n, .. }
            | ModelSpec::Product { n, .. }
            | ModelSpec::Explicit { n, .. } => *n,
        }
    }

    pub fn build(&self) -> Result<CurvatureTensor, FormError> {
        match self {
            ModelSpec::Constant { n, lambda } => make_constant_curvature(*n, lambda),
            ModelSpec::Hypersurface { n, b } => make_hypersurface(&b.to_form(*n)?),
            ModelSpec::ConformallyFlat { n, h } => make_conformally_flat(&h.to_form(*n)?),
            ModelSpec::Product { n, factors } => {
                let total: usize = factors.iter().map(ModelSpec::n).sum();
                if total != *n || factors.is_empty() {
                    return Err(FormError::Range(format!(
                        "product dimension {n} must equal the sum {total} of its factor dimensions"
                    )));
                }
                let mut acc = factors[0].build()?;
                for f in &factors[1..] {
                    acc = make_product(&acc, &f.build()?)?;
                }
                Ok(acc)
            }
            ModelSpec::Explicit { n, form } => {
                if form.n() != *n {
                    return Err(FormError::DimensionMismatch {
                        left: *n,
                        right: form.n(),
                    });
                }
                CurvatureTensor::new_bianchi(form.clone())
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstantWire {
    model: String,
    n: usize,
    lambda: Rat,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HypersurfaceWire {
    model: String,
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eigenvalues: Option<Vec<Rat>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b_matrix: Option<Vec<Vec<Rat>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConformalWire {
    model: String,
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eigenvalues: Option<Vec<Rat>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    h_matrix: Option<Vec<Vec<Rat>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProductWire {
    model: String,
    n: usize,
    factors: Vec<ModelSpec>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExplicitWire {
    model: String,
    n: usize,
    form: DoubleForm,
}

fn sym_input(eig: Option<Vec<Rat>>, mat: Option<Vec<Vec<Rat>>>, mat_name: &str) -> Result<SymmetricInput, String> {
    match (eig, mat) {
        (Some(e), None) => Ok(SymmetricInput::Eigenvalues(unrat(e))),
        (None, Some(m)) => Ok(SymmetricInput::Matrix(m.into_iter().map(unrat).collect())),
        _ => Err(format!("exactly one of \"eigenvalues\" or \"{mat_name}\" is required")),
    }
}

fn sym_output(s: &SymmetricInput) -> (Option<Vec<Rat>>, Option<Vec<Vec<Rat>>>) {
    match s {
        SymmetricInput::Eigenvalues(v) => (Some(rats(v)), None),
        SymmetricInput::Matrix(m) => (None, Some(m.iter().map(|r| rats(r)).collect())),
    }
}

impl Serialize for ModelSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ModelSpec::Constant { n, lambda } => ConstantWire {
                model: "constant".into(),
                n: *n,
                lambda: Rat(lambda.clone()),
            }
            .serialize(s),
            ModelSpec::Hypersurface { n, b } => {
                let (eigenvalues, b_matrix) = sym_output(b);
                HypersurfaceWire {
                    model: "hypersurface".into(),
                    n: *n,
                    eigenvalues,
                    b_matrix,
                }
                .serialize(s)
            }
            ModelSpec::ConformallyFlat { n, h } => {
                let (eigenvalues, h_matrix) = sym_output(h);
                ConformalWire {
                    model: "conformally_flat".into(),
                    n: *n,
                    eigenvalues,
                    h_matrix,
                }
                .serialize(s)
            }
            ModelSpec::Product { n, factors } => ProductWire {
                model: "product".into(),
                n: *n,
                factors: factors.clone(),
            }
            .serialize(s),
            ModelSpec::Explicit { n, form } => ExplicitWire {
                model: "explicit".into(),
                n: *n,
                form: form.clone(),
            }
            .serialize(s),
        }
    }
}

fn variant<T: DeserializeOwned>(value: serde_json::Value) -> Result<T, String> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        if path == "." {
            e.inner().to_string()
        } else {
            format!("{path}: {}", e.inner())
        }
    })
}

impl<'de> Deserialize<'de> for ModelSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(d)?;
        let model = value
            .get("model")
            .ok_or_else(|| D::Error::missing_field("model"))?
            .as_str()
            .ok_or_else(|| D::Error::custom("model: expected a string"))?
            .to_owned();
        let spec = match model.as_str() {
            "constant" => variant::<ConstantWire>(value).map(|w| ModelSpec::Constant {
                n: w.n,
                lambda: w.lambda.0,
            }),
            "hypersurface" => variant::<HypersurfaceWire>(value).and_then(|w| {
                Ok(ModelSpec::Hypersurface {
                    n: w.n,
                    b: sym_input(w.eigenvalues, w.b_matrix, "b_matrix")?,
                })
            }),
            "conformally_flat" => variant::<ConformalWire>(value).and_then(|w| {
                Ok(ModelSpec::ConformallyFlat {
                    n: w.n,
                    h: sym_input(w.eigenvalues, w.h_matrix, "h_matrix")?,
                })
            }),
            "product" => variant::<ProductWire>(value).map(|w| ModelSpec::Product {
                n: w.n,
                factors: w.factors,
            }),
            "explicit" => variant::<ExplicitWire>(value).map(|w| ModelSpec::Explicit { n: w.n, form: w.form }),
            other => {
                return Err(D::Error::unknown_variant(
                    other,
                    &["constant", "hypersurface", "conformally_flat", "product", "explicit"],
                ))
            }
        };
        spec.map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RowWire {
    q: usize,
    h: Rat,
    #[serde(default)]
    h_decimal: Option<String>,
    t: DoubleForm,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SampleWire {
    p: usize,
    q: usize,
    plane: Vec<usize>,
    value: Rat,
    #[serde(default)]
    value_decimal: Option<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SignWire {
    h4: Rat,
    #[serde(default)]
    h4_decimal: Option<String>,
    flat: bool,
    einstein: bool,
    conformally_flat_scalar_flat: bool,
    hypothesis: SignHypothesis,
    holds: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReportWire {
    n: usize,
    rows: Vec<RowWire>,
    #[serde(default)]
    samples: Vec<SampleWire>,
    #[serde(default)]
    h4_sign: Option<SignWire>,
}

impl Serialize for InvariantReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ReportWire {
            n: self.n,
            rows: self
                .rows
                .iter()
                .map(|r| RowWire {
                    q: r.q,
                    h: Rat(r.h.clone()),
                    h_decimal: Some(to_decimal6(&r.h)),
                    t: r.t.clone(),
                })
                .collect(),
            samples: self
                .samples
                .iter()
                .map(|x| SampleWire {
                    p: x.p,
                    q: x.q,
                    plane: x.plane.clone(),
                    value: Rat(x.value.clone()),
                    value_decimal: Some(to_decimal6(&x.value)),
                })
                .collect(),
            h4_sign: self.h4_sign.as_ref().map(|h| SignWire {
                h4: Rat(h.h4.clone()),
                h4_decimal: Some(to_decimal6(&h.h4)),
                flat: h.flat,
                einstein: h.einstein,
                conformally_flat_scalar_flat: h.conformally_flat_scalar_flat,
                hypothesis: h.hypothesis,
                holds: h.holds,
            }),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for InvariantReport {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = ReportWire::deserialize(d)?;
        let report = InvariantReport {
            n: w.n,
            rows: w
                .rows
                .into_iter()
                .map(|r| InvariantRow { q: r.q, h: r.h.0, t: r.t })
                .collect(),
            samples: w
                .samples
                .into_iter()
                .map(|x| PqSample {
                    p: x.p,
                    q: x.q,
                    plane: x.plane,
                    value: x.value.0,
                })
                .collect(),
            h4_sign: w.h4_sign.map(|h| H4SignReport {
                h4: h.h4.0,
                flat: h.flat,
                einstein: h.einstein,
                conformally_flat_scalar_flat: h.conformally_flat_scalar_flat,
                hypothesis: h.hypothesis,
                holds: h.holds,
            }),
        };
        report.validate().map_err(D::Error::custom)?;
        Ok(report)
    }
}

/// Plain-text rendering: exact values with a 6-significant-digit column.
pub fn report_table(report: &InvariantReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "n = {}", report.n);
    let _ = writeln!(out, "{:<4}{:<24}{:<16}{}", "q", "h_2q", "decimal", "trace T_2q");
    for r in &report.rows {
        let _ = writeln!(
            out,
            "{:<4}{:<24}{:<16}{}",
            r.q,
            to_canonical(&r.h),
            to_decimal6(&r.h),
            to_canonical(&trace11(&r.t))
        );
    }
    for r in &report.rows {
        let _ = writeln!(out, "T_{}:", 2 * r.q);
        let n = r.t.n();
        for i in 0..n {
            let row: Vec<String> = (0..n).map(|j| to_canonical(&r.t.coeffs()[i * n + j])).collect();
            let _ = writeln!(out, "  {}", row.join("  "));
        }
    }
    for x in &report.samples {
        let _ = writeln!(
            out,
            "s_({},{}) on {:?} = {}  ({})",
            x.p,
            x.q,
            x.plane,
            to_canonical(&x.value),
            to_decimal6(&x.value)
        );
    }
    if let Some(h) = &report.h4_sign {
        let hyp = match h.hypothesis {
            SignHypothesis::Einstein => "einstein",
            SignHypothesis::ConformallyFlatScalarFlat => "conformally_flat_scalar_flat",
            SignHypothesis::NotMet => "not_met",
        };
        let _ = writeln!(
            out,
            "h_4 sign: {} ({})  hypothesis={}  flat={}  holds={}",
            to_canonical(&h.h4),
            to_decimal6(&h.h4),
            hyp,
            h.flat,
            h.holds
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::invariant_report;
    use crate::decomposition::decompose;
    use crate::scalar::{frac, int};

    #[test]
    fn form_round_trip_and_layout() {
        let n = 3;
        let s = |i: &[usize]| IndexSet::new(n, i).unwrap();
        let mut f = DoubleForm::zero(n, 1, 2).unwrap();
        f.set(&s(&[2]), &s(&[0, 1]), frac(-3, 4));
        f.set(&s(&[0]), &s(&[1, 2]), int(2));
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(
            text,
            r#"{"n":3,"p":1,"q":2,"entries":[[[0],[1,2],"2/1"],[[2],[0,1],"-3/4"]]}"#
        );
        assert_eq!(from_json::<DoubleForm>(&text).unwrap(), f);
    }

    #[test]
    fn form_rejections() {
        for bad in [
            r#"{"n":3,"p":1,"q":1,"entries":[[[0],[1],"1/-2"]]}"#,
            r#"{"n":3,"p":1,"q":1,"entries":[[[0],[1],"1/0"]]}"#,
            r#"{"n":3,"p":1,"q":1,"entries":[[[1,0],[1],"1"]]}"#,
            r#"{"n":3,"p":1,"q":1,"entries":[[[0],[5],"1"]]}"#,
            r#"{"n":3,"p":1,"q":1,"entries":[[[0],[1],"1"],[[0],[1],"2"]]}"#,
            r#"{"n":3,"p":4,"q":1,"entries":[]}"#,
            r#"{"n":3,"p":1,"q":1,"entries":[],"extra":0}"#,
        ] {
            assert!(from_json::<DoubleForm>(bad).is_err(), "{bad}");
        }
        let err = from_json::<DoubleForm>(r#"{"n":3,"p":1,"q":1,"entries":[[[0],[1],"1/-2"]]}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("entries[0][2]"), "{err}");
    }

    #[test]
    fn model_specs() {
        let spec: ModelSpec = from_json(r#"{"model":"constant","n":4,"lambda":"1"}"#).unwrap();
        assert_eq!(spec, ModelSpec::Constant { n: 4, lambda: int(1) });
        let spec: ModelSpec =
            from_json(r#"{"model":"hypersurface","n":4,"eigenvalues":["1","1","1","0"]}"#).unwrap();
        let ModelSpec::Hypersurface { b: SymmetricInput::Eigenvalues(e), .. } = &spec else {
            panic!("wrong variant")
        };
        assert_eq!(e, &vec![int(1), int(1), int(1), int(0)]);
        assert_eq!(from_json::<ModelSpec>(&to_json(&spec)).unwrap(), spec);
    }

    #[test]
    fn model_spec_errors_carry_paths() {
        let err = from_json::<ModelSpec>(r#"{"model":"constant","n":4,"lambda":"1/-3"}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("lambda"), "{err}");
        let err = from_json::<ModelSpec>(
            r#"{"model":"product","n":4,"factors":[{"model":"constant","n":2,"lambda":"1"},{"model":"constant","n":2,"lambda":"x"}]}"#,
        )
        .unwrap_err()
        .to_string();
        assert!(err.contains("factors[1]") && err.contains("lambda"), "{err}");
        assert!(from_json::<ModelSpec>(r#"{"model":"torus","n":4}"#).is_err());
        assert!(from_json::<ModelSpec>(r#"{"model":"hypersurface","n":2}"#).is_err());
    }

    #[test]
    fn product_spec_builds() {
        let spec: ModelSpec = from_json(
            r#"{"model":"product","n":4,"factors":[{"model":"constant","n":2,"lambda":"1"},{"model":"constant","n":2,"lambda":"1"}]}"#,
        )
        .unwrap();
        let r = spec.build().unwrap();
        assert_eq!(crate::curvature::weyl_invariant(&r, 2).unwrap(), int(2));
        let bad = ModelSpec::Product {
            n: 5,
            factors: vec![ModelSpec::Constant { n: 2, lambda: int(1) }],
        };
        assert!(bad.build().is_err());
    }

    #[test]
    fn report_round_trip_and_validation() {
        let r = make_constant_curvature(4, &int(1)).unwrap();
        let report = invariant_report(&r, 2).unwrap();
        let text = to_json(&report);
        assert_eq!(from_json::<InvariantReport>(&text).unwrap(), report);
        let tampered = text.replacen("\"h\": \"6/1\"", "\"h\": \"5/1\"", 1);
        assert_ne!(tampered, text);
        assert!(from_json::<InvariantReport>(&tampered).is_err());
        let table = report_table(&report);
        assert!(table.contains("6.00000"));
    }

    #[test]
    fn decomposition_round_trip() {
        let r = make_constant_curvature(4, &int(2)).unwrap();
        let d = decompose(r.form()).unwrap();
        let text = to_json(&d);
        assert_eq!(from_json::<EffectiveDecomposition>(&text).unwrap(), d);
    }
}
