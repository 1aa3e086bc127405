//! Exact algebra of double forms on `R^n` and the curvature invariants built
//! on it.

pub mod basis;
pub mod curvature;
pub mod decomposition;
pub mod error;
pub mod form;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod sample;
pub mod scalar;

pub use basis::{binomial, IndexSet, MAX_DIM};
pub use error::{FormError, Result};
pub use form::{cell_budget, set_cell_budget, DoubleForm, CELL_BUDGET_ENV, DEFAULT_CELL_BUDGET};
pub use oracle::{eval_chain_oracle, eval_power_oracle, eval_product_oracle};
pub use scalar::Scalar;
pub use decomposition::{decompose, EffectiveDecomposition};
