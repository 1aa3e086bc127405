//! Model curvature tensors shared by the curvature and Avez suites.

use dforms::curvature::{make_conformally_flat, make_constant_curvature, make_hypersurface, make_product, CurvatureTensor};
use dforms::scalar::{frac, int, Scalar};
use dforms::{sample, DoubleForm};
use num_traits::Zero;
use rand::Rng;

/// How a model was built, which determines the closed forms it must obey.
#[derive(Clone, Debug)]
pub enum Kind {
    /// `R = (λ/2) g²`.
    Constant(Scalar),
    /// `R = B²/2` with `B = diag(λ)`.
    Hypersurface(Vec<Scalar>),
    /// `R = g·h` with `h = diag(λ)`.
    ConformallyFlat(Vec<Scalar>),
    /// `R = g·h` with a non-diagonal traceless `h`.
    ConformallyFlatScalarFlat,
    /// Riemannian product of two factors.
    Product(Box<Model>, Box<Model>),
    /// Random element of `C_1^2`.
    Random,
}

#[derive(Clone, Debug)]
pub struct Model {
    pub name: String,
    pub r: CurvatureTensor,
    pub kind: Kind,
    /// Algebraically Einstein, known from the construction.
    pub einstein: bool,
    /// Conformally flat with vanishing scalar curvature, known from the construction.
    pub cfsf: bool,
}

impl Model {
    pub fn n(&self) -> usize {
        self.r.n()
    }

    fn new(name: impl Into<String>, r: CurvatureTensor, kind: Kind) -> Self {
        Self {
            name: name.into(),
            r,
            kind,
            einstein: false,
            cfsf: false,
        }
    }
}

pub fn constant(n: usize, lambda: Scalar) -> Model {
    let r = make_constant_curvature(n, &lambda).expect("n >= 2");
    let mut m = Model::new(format!("constant(n={n}, λ={lambda})"), r, Kind::Constant(lambda));
    m.einstein = true;
    m.cfsf = m.r.is_flat();
    m
}

pub fn hypersurface(eigenvalues: Vec<Scalar>) -> Model {
    let b = DoubleForm::diagonal(&eigenvalues).expect("dimension");
    let r = make_hypersurface(&b).expect("symmetric");
    let name = format!("hypersurface{:?}", eigenvalues.iter().map(ToString::to_string).collect::<Vec<_>>());
    Model::new(name, r, Kind::Hypersurface(eigenvalues))
}

pub fn conformally_flat(eigenvalues: Vec<Scalar>) -> Model {
    let h = DoubleForm::diagonal(&eigenvalues).expect("dimension");
    let r = make_conformally_flat(&h).expect("symmetric");
    let name = format!("conformally-flat{:?}", eigenvalues.iter().map(ToString::to_string).collect::<Vec<_>>());
    let mut m = Model::new(name, r, Kind::ConformallyFlat(eigenvalues.clone()));
    m.cfsf = eigenvalues.iter().sum::<Scalar>().is_zero();
    m
}

pub fn product(a: Model, b: Model) -> Model {
    let r = make_product(&a.r, &b.r).expect("certified factors");
    let name = format!("{} x {}", a.name, b.name);
    Model::new(name, r, Kind::Product(Box::new(a), Box::new(b)))
}

/// `S^a(κ = b-1) × S^b(κ = a-1)`: both factors have Ricci curvature
/// `(a-1)(b-1)`, so the product is Einstein.
pub fn einstein_sphere_product(a: usize, b: usize) -> Model {
    let mut m = product(constant(a, int(b as i64 - 1)), constant(b, int(a as i64 - 1)));
    m.einstein = true;
    m
}

/// Traceless `h` with off-diagonal entries, so that `g·h` is conformally
/// flat, scalar-flat and not flat.
pub fn scalar_flat_conformally_flat(n: usize) -> Model {
    let mut rows = vec![vec![Scalar::zero(); n]; n];
    rows[0][0] = int(1);
    rows[1][1] = int(-1);
    if n >= 3 {
        rows[0][2] = int(2);
        rows[2][0] = int(2);
    }
    let h = DoubleForm::from_matrix(&rows).expect("dimension");
    let r = make_conformally_flat(&h).expect("symmetric");
    let mut m = Model::new(format!("conformally-flat-scalar-flat(n={n})"), r, Kind::ConformallyFlatScalarFlat);
    m.cfsf = true;
    m
}

fn small_rational<R: Rng>(rng: &mut R) -> Scalar {
    let num = rng.gen_range(-4..=4);
    let den = rng.gen_range(1..=3);
    frac(num, den)
}

fn small_ints<R: Rng>(rng: &mut R, n: usize) -> Vec<Scalar> {
    (0..n).map(|_| int(rng.gen_range(-3..=3))).collect()
}

/// The model catalogue at dimension `n`; `random` sets how many random
/// instances of each parametrized family are drawn.
pub fn models<R: Rng>(n: usize, rng: &mut R, random: usize) -> Vec<Model> {
    let mut out = vec![constant(n, int(0)), constant(n, int(1))];
    for _ in 0..random {
        out.push(constant(n, small_rational(rng)));
        out.push(hypersurface(small_ints(rng, n)));
        out.push(conformally_flat(small_ints(rng, n)));
        let r = sample::random_bianchi(rng, n, 2).expect("degree");
        out.push(Model::new(
            "random-bianchi",
            CurvatureTensor::new_bianchi(r).expect("Bianchi by construction"),
            Kind::Random,
        ));
    }
    if n >= 3 {
        let mut h = vec![int(0); n];
        h[0] = int(1);
        h[1] = int(-1);
        out.push(conformally_flat(h));
        out.push(scalar_flat_conformally_flat(n));
    }
    for a in 2..=n / 2 {
        out.push(einstein_sphere_product(a, n - a));
    }
    if n >= 4 {
        out.push(product(constant(n - 2, int(1)), constant(2, int(0))));
    }
    out
}
