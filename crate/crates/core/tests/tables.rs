//! Invariants of the ω and ρ tables over their whole range.

mod common;

use common::oracle;
use rough_core::numeric::linspace;
use rough_core::specfun::{
    buchstab_omega, buchstab_omega_derivative, build_tables, default_tables, dickman_rho, gamma,
};
use rough_core::EXP_NEG_EULER_GAMMA;

const H: f64 = 1e-5;

/// 10⁴ points in (lo, hi) kept at least 2h away from the integer breakpoints.
fn ode_grid(lo: f64, hi: f64) -> Vec<f64> {
    linspace(lo, hi, 10_000)
        .into_iter()
        .filter(|u| (u - u.round()).abs() > 2.0 * H)
        .collect()
}

#[test]
fn omega_delay_equation_residual() {
    let t = &default_tables().omega;
    let om = |u: f64| buchstab_omega(u, t);
    let mut worst = 0.0f64;
    for u in ode_grid(2.0, 50.0) {
        let d = ((u + H) * om(u + H) - (u - H) * om(u - H)) / (2.0 * H);
        worst = worst.max((d - om(u - 1.0)).abs());
    }
    assert!(worst <= 1e-6, "worst residual {worst:e}");
}

#[test]
fn rho_delay_equation_residual() {
    let t = &default_tables().rho;
    let rho = |u: f64| dickman_rho(u, t);
    let mut worst = 0.0f64;
    for u in ode_grid(1.0, 50.0) {
        let d = (rho(u + H) - rho(u - H)) / (2.0 * H);
        worst = worst.max((u * d + rho(u - 1.0)).abs());
    }
    assert!(worst <= 1e-6, "worst residual {worst:e}");
}

#[test]
fn omega_approaches_limit_within_rho_envelope() {
    let tb = default_tables();
    // Past u ≈ 20 the envelope is below the table's own error bound.
    let slack = tb.omega.error_bound;
    for u in linspace(1.0, 60.0, 5_901) {
        let gap = (buchstab_omega(u, &tb.omega) - EXP_NEG_EULER_GAMMA).abs();
        let env = dickman_rho(u - 1.0, &tb.rho) / u;
        assert!(gap <= env + slack, "u={u}: gap {gap:e} env {env:e}");
    }
}

#[test]
fn rho_decreasing_and_omega_in_range() {
    let tb = default_tables();
    let us = linspace(1.0, 50.0, 9_801);
    for w in us.windows(2) {
        let (a, b) = (dickman_rho(w[0], &tb.rho), dickman_rho(w[1], &tb.rho));
        assert!(b < a, "rho not decreasing at {}", w[1]);
    }
    for u in us {
        let o = buchstab_omega(u, &tb.omega);
        assert!((0.5..=1.0).contains(&o), "omega({u}) = {o}");
    }
}

#[test]
fn omega_slope_below_rho_below_reciprocal_gamma() {
    let tb = default_tables();
    for t in linspace(1.0, 45.0, 8_801) {
        let r = dickman_rho(t, &tb.rho);
        assert!(r <= (1.0 + 1e-14) / gamma(t + 1.0), "rho({t}) = {r:e}");
        // ω′ comes from differences of ω values, each off by at most the bound.
        let slope = buchstab_omega_derivative(t, &tb.omega).abs();
        let slack = 2.0 * tb.omega.error_bound / t;
        assert!(slope <= r + slack, "t={t}: |omega'| {slope:e} rho {r:e}");
    }
}

#[test]
fn omega_slope_by_central_differences() {
    let tb = default_tables();
    // Difference noise is ~1e-10 here, so the range stops where ρ is ~1e-9.
    for t in ode_grid(1.0, 9.0) {
        let d = (buchstab_omega(t + H, &tb.omega) - buchstab_omega(t - H, &tb.omega)) / (2.0 * H);
        assert!(d.abs() <= dickman_rho(t, &tb.rho) * (1.0 + 1e-4) + 1e-9, "t={t}");
    }
}

#[test]
fn step_halving_changes_less_than_the_coarse_tolerance() {
    let coarse = build_tables(50.0, 1e-10).unwrap();
    let fine = build_tables(50.0, 1e-11).unwrap();
    let tb = default_tables();
    assert!(coarse.omega.error_bound <= 1e-10 && coarse.rho.error_bound <= 1e-10);
    for u in linspace(1.0, 50.0, 4_901) {
        let (a, b) = (buchstab_omega(u, &coarse.omega), buchstab_omega(u, &fine.omega));
        assert!((a - b).abs() <= 1e-10, "omega at {u}");
        assert!((b - buchstab_omega(u, &tb.omega)).abs() <= 1e-11, "omega at {u}");
        let (a, b) = (dickman_rho(u, &coarse.rho), dickman_rho(u, &fine.rho));
        assert!((a - b).abs() <= 1e-10, "rho at {u}");
    }
}

#[test]
fn rho_three_matches_closed_form_quadrature() {
    // ρ(3) = 1 − log 2 − ∫₂³ (1 − log(t − 1))/t dt.
    let integral = oracle::tanh_sinh(|t: f64| (1.0 - (t - 1.0).ln()) / t, 2.0, 3.0);
    let expect = 1.0 - std::f64::consts::LN_2 - integral;
    let got = dickman_rho(3.0, &default_tables().rho);
    assert!((got - expect).abs() <= 1e-10, "{got} vs {expect}");
}
