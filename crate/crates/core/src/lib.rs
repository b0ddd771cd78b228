//! Exact symbolic algebra for polynomial phase-space symbols and their
//! quantizations, plus desk-scale numerical Schrodinger dynamics.
//!
//! * [`symbol`]: truncated classical symbols, derivatives, Poisson bracket.
//! * [`star`]: normal-ordered and symmetric star products, ordering transform.
//! * [`operator`]: differential operators used as the exact oracle model.
//! * [`enveloping`]: words in first-order symbols and their normal forms.
//! * [`wick`]: creation/annihilation variables.
//! * [`dynamics`]: lattice Hamiltonians, evolution, Dyson series, classical flow.
//! * [`expr`], [`json`]: text and JSON surface forms.

pub mod dynamics;
pub mod enveloping;
pub mod error;
pub mod expr;
pub mod json;
pub mod kernel;
pub mod operator;
pub mod sample;
pub mod scalar;
pub mod star;
pub mod symbol;
pub mod wick;

pub use enveloping::{
    involution, normal_form, normal_form_with, represent, word_product, DiffElement, DiffWord,
    Generator, RewriteStrategy,
};
pub use error::{Error, Result};
pub use kernel::{kernel_extract, KernelTensor};
pub use operator::{quantize_normal, quantize_weyl, DiffOperator};
pub use scalar::{HPoly, Scalar};
pub use star::{normal_star, ordering_transform, weyl_star, DiffContext, InvolutionSign, OrderingDirection};
pub use symbol::{poisson_bracket, ModeSpace, Monomial, MultiIndex, Symbol, Var};
pub use wick::{wick_bracket, wick_inverse, wick_transform, Frequencies, WickSymbol};
