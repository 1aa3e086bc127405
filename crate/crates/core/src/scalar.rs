//! Exact rational scalars and their canonical text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Scalar = BigRational;

pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

pub fn factorial(k: usize) -> Scalar {
    let mut acc = BigInt::one();
    for i in 2..=k {
        acc *= i;
    }
    Scalar::from_integer(acc)
}

/// `1/k!`, taken as zero for negative `k`.
pub fn inv_factorial(k: isize) -> Scalar {
    if k < 0 {
        Scalar::zero()
    } else {
        factorial(k as usize).recip()
    }
}

pub fn sign(s: i32) -> Scalar {
    int(s as i64)
}

/// Canonical lowest-terms text `num/den` with a positive denominator.
pub fn to_canonical(x: &Scalar) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `num` or `num/den`. The denominator must be a positive integer.
pub fn parse_scalar(s: &str) -> Result<Scalar, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (s, None),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| format!("invalid rational numerator in {s:?}"))?;
    let den: BigInt = match den {
        Some(d) => {
            if d.starts_with('-') || d.starts_with('+') {
                return Err(format!("denominator must be a positive integer in {s:?}"));
            }
            d.parse()
                .map_err(|_| format!("invalid rational denominator in {s:?}"))?
        }
        None => BigInt::one(),
    };
    if !den.is_positive() {
        return Err(format!("denominator must be positive in {s:?}"));
    }
    Ok(Scalar::new(num, den))
}

/// Decimal rendering with six significant digits.
pub fn to_decimal6(x: &Scalar) -> String {
    let v = x.to_f64().unwrap_or(f64::NAN);
    if v == 0.0 {
        return "0.00000".to_string();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    if !(-4..=9).contains(&exp) {
        return format!("{v:.5e}");
    }
    let decimals = (5 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}

pub mod serde_scalar {
    //! `serde(with = ...)` adapter writing scalars as canonical strings.
    use super::{parse_scalar, to_canonical, Scalar};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Scalar, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&to_canonical(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Scalar, D::Error> {
        let text = String::deserialize(d)?;
        parse_scalar(&text).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(xs: &[Scalar], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(xs.len()))?;
            for x in xs {
                seq.serialize_element(&to_canonical(x))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Scalar>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|t| parse_scalar(t).map_err(serde::de::Error::custom))
                .collect()
        }
    }

    pub mod matrix {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(rows: &[Vec<Scalar>], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(rows.len()))?;
            for row in rows {
                let text: Vec<String> = row.iter().map(to_canonical).collect();
                seq.serialize_element(&text)?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Scalar>>, D::Error> {
            Vec::<Vec<String>>::deserialize(d)?
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|t| parse_scalar(t).map_err(serde::de::Error::custom))
                        .collect()
                })
                .collect()
        }
    }
}
