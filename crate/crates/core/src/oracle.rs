//! Brute-force evaluation of products by the explicit permutation sum.
//!
//! For `ω_i ∈ D^{p_i,q_i}` the product `ω_1 ⋯ ω_m`, seen as a multilinear
//! form, is
//!
//! ```text
//! (1 / Π p_i! q_i!) Σ_{σ, ρ} ε(σ) ε(ρ) Π_i ω_i(x_{σ(block i)}; y_{ρ(block i)})
//! ```
//!
//! with `σ` ranging over permutations of the x-arguments and `ρ` over the
//! y-arguments. Nothing here calls the product of [`DoubleForm`]; it exists to
//! check that product independently and is only practical for small degrees.

use num_traits::Zero;

use crate::error::{FormError, Result};
use crate::form::DoubleForm;
use crate::scalar::{factorial, Scalar};

/// Evaluates `(ω·θ)(x_1∧…∧x_{p+r}, y_1∧…∧y_{q+s})` by the permutation sum.
pub fn eval_product_oracle(
    omega: &DoubleForm,
    theta: &DoubleForm,
    xs: &[Vec<Scalar>],
    ys: &[Vec<Scalar>],
) -> Result<Scalar> {
    eval_chain_oracle(&[omega, theta], xs, ys)
}

/// Evaluates `ω^k` by the permutation sum.
pub fn eval_power_oracle(
    omega: &DoubleForm,
    k: usize,
    xs: &[Vec<Scalar>],
    ys: &[Vec<Scalar>],
) -> Result<Scalar> {
    let factors = vec![omega; k];
    eval_chain_oracle(&factors, xs, ys)
}

/// Evaluates the product of several factors by the permutation sum.
pub fn eval_chain_oracle(
    factors: &[&DoubleForm],
    xs: &[Vec<Scalar>],
    ys: &[Vec<Scalar>],
) -> Result<Scalar> {
    if factors.iter().any(|f| !f.in_range()) {
        return Ok(Scalar::zero());
    }
    let xlen: usize = factors.iter().map(|f| f.p() as usize).sum();
    let ylen: usize = factors.iter().map(|f| f.q() as usize).sum();
    if xs.len() != xlen {
        return Err(FormError::LengthMismatch {
            expected: xlen,
            got: xs.len(),
        });
    }
    if ys.len() != ylen {
        return Err(FormError::LengthMismatch {
            expected: ylen,
            got: ys.len(),
        });
    }
    let sigmas = signed_permutations(xlen);
    let rhos = signed_permutations(ylen);
    let mut total = Scalar::zero();
    for (sigma, es) in &sigmas {
        for (rho, er) in &rhos {
            let mut term = Scalar::from_integer((es * er).into());
            let (mut xo, mut yo) = (0, 0);
            for f in factors {
                let (p, q) = (f.p() as usize, f.q() as usize);
                let xa: Vec<Vec<Scalar>> = sigma[xo..xo + p].iter().map(|&k| xs[k].clone()).collect();
                let ya: Vec<Vec<Scalar>> = rho[yo..yo + q].iter().map(|&k| ys[k].clone()).collect();
                term *= f.evaluate(&xa, &ya)?;
                if term.is_zero() {
                    break;
                }
                xo += p;
                yo += q;
            }
            total += term;
        }
    }
    let norm = factors
        .iter()
        .fold(Scalar::from_integer(1.into()), |acc, f| {
            acc * factorial(f.p() as usize) * factorial(f.q() as usize)
        });
    Ok(total / norm)
}

/// All permutations of `0..m` with their signs.
pub fn signed_permutations(m: usize) -> Vec<(Vec<usize>, i32)> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..m).collect();
    permute(&mut current, 0, 1, &mut out);
    out
}

fn permute(v: &mut Vec<usize>, start: usize, sign: i32, out: &mut Vec<(Vec<usize>, i32)>) {
    if start + 1 >= v.len() {
        out.push((v.clone(), sign));
        return;
    }
    for i in start..v.len() {
        v.swap(start, i);
        let s = if i == start { sign } else { -sign };
        permute(v, start + 1, s, out);
        v.swap(start, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::IndexSet;
    use crate::scalar::int;

    fn unit(n: usize, i: usize) -> Vec<Scalar> {
        (0..n).map(|k| int((k == i) as i64)).collect()
    }

    #[test]
    fn permutation_signs() {
        let perms = signed_permutations(3);
        assert_eq!(perms.len(), 6);
        for (p, s) in &perms {
            let inv = (0..3)
                .flat_map(|a| (a + 1..3).map(move |b| (a, b)))
                .filter(|&(a, b)| p[a] > p[b])
                .count();
            assert_eq!(*s, if inv % 2 == 0 { 1 } else { -1 });
        }
        assert_eq!(signed_permutations(0).len(), 1);
    }

    #[test]
    fn metric_squared_is_twice_the_determinant() {
        let g = DoubleForm::metric(2).unwrap();
        let x = [unit(2, 0), unit(2, 1)];
        assert_eq!(eval_product_oracle(&g, &g, &x, &x).unwrap(), int(2));
        assert_eq!(eval_power_oracle(&g, 2, &x, &x).unwrap(), int(2));
    }

    #[test]
    fn repeated_argument_vanishes() {
        let g = DoubleForm::metric(3).unwrap();
        let x = [unit(3, 1), unit(3, 1)];
        let y = [unit(3, 0), unit(3, 1)];
        assert_eq!(eval_product_oracle(&g, &g, &x, &y).unwrap(), int(0));
    }

    #[test]
    fn disjoint_basis_factors() {
        let n = 3;
        let s = |i: &[usize]| IndexSet::new(n, i).unwrap();
        let a = DoubleForm::basis(n, &s(&[0]), &s(&[0])).unwrap();
        let b = DoubleForm::basis(n, &s(&[1]), &s(&[1])).unwrap();
        let x = [unit(n, 0), unit(n, 1)];
        // of the four (σ, ρ) terms only σ = ρ = id is nonzero
        assert_eq!(eval_product_oracle(&a, &b, &x, &x).unwrap(), int(1));
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let g = DoubleForm::metric(2).unwrap();
        assert!(eval_product_oracle(&g, &g, &[unit(2, 0)], &[unit(2, 0), unit(2, 1)]).is_err());
    }
}
