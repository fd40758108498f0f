//! Special functions: Buchstab ω, Dickman ρ, li, Γ and the incomplete gamma
//! ratio, with the quadrature, interpolation and root-finding they need.

pub mod chebyshev;
mod functions;
pub mod quadrature;
pub mod roots;
pub mod tables;

use std::sync::OnceLock;

pub use functions::{
    buchstab_omega, buchstab_omega_derivative, dickman_rho, dickman_rho_ln, gamma,
    incomplete_gamma_ratio, ln_gamma, log_integral, omega_global_max, omega_interior_minimum,
    s_function,
};
pub use quadrature::{integrate, integrate_pieces, Integral, QuadratureSpec};
pub use tables::{build_omega, build_rho, build_tables, PiecewiseFunctionTable, TableKind, Tables};

pub const DEFAULT_U_MAX: f64 = 50.0;
pub const DEFAULT_TABLE_TOL: f64 = 1e-12;

/// Process-wide tables at the default `u_max` and tolerance, built on first use.
pub fn default_tables() -> &'static Tables {
    static TABLES: OnceLock<Tables> = OnceLock::new();
    TABLES.get_or_init(|| {
        build_tables(DEFAULT_U_MAX, DEFAULT_TABLE_TOL).expect("default tables build")
    })
}
