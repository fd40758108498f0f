//! Exact and explicit estimates for the count of rough numbers.
//!
//! `Φ(x, y)` counts the positive integers up to `x` whose least prime factor
//! exceeds `y`. This crate computes it exactly (two independent algorithms),
//! tabulates the Buchstab and Dickman–de Bruijn functions, evaluates de
//! Bruijn's smooth main term `μ_y(u)·e^γ·x·log y·∏_{p≤y}(1 − 1/p)`, rebuilds the
//! chain of explicit error constants for the prime-counting envelopes `R(z)`,
//! and checks the resulting inequalities over desk-scale grids.
//!
//! Module map:
//!
//! * [`specfun`] – ω, ρ, li, Γ, the incomplete-gamma ratio, quadrature.
//! * [`sieve`] – prime tables, exact Φ, Mertens products, Bonferroni bounds.
//! * [`debruijn`] – μ_y(u), λ, η, H_y(v) and the E₁ closed form.
//! * [`constants`] – R(z), C₀…C₈, η₁, Σξ_k, β and the Δ_k⁻ recursion.
//! * [`verify`] – grid and exhaustive verification reports.

pub mod constants;
pub mod debruijn;
mod error;
pub mod numeric;
pub mod sieve;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};

/// Euler–Mascheroni constant γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// e^γ.
pub const EXP_EULER_GAMMA: f64 = 1.781_072_417_990_197_9;

/// e^{−γ}, the limit of the Buchstab function.
pub const EXP_NEG_EULER_GAMMA: f64 = 0.561_459_483_566_885_2;
