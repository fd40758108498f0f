//! de Bruijn's smooth approximation: μ_y(u), λ, the main term, η, H_y(v), E₁.

use serde::{Deserialize, Serialize};

use crate::sieve::{mertens_product, PrimeTable};
use crate::specfun::{buchstab_omega, integrate, integrate_pieces, PiecewiseFunctionTable, QuadratureSpec};
use crate::{Error, Result, EXP_EULER_GAMMA};

/// Tail cut for μ_y: the weight `e^{−sL}` past `s = 40/L` is below `e^{−40}`.
const TAIL_CUT: f64 = 40.0;

/// Shared inputs for the smooth-side quantities.
#[derive(Debug, Clone, Copy)]
pub struct SmoothContext<'a> {
    pub primes: &'a PrimeTable,
    pub omega: &'a PiecewiseFunctionTable,
    pub quad: QuadratureSpec,
}

impl<'a> SmoothContext<'a> {
    pub fn new(primes: &'a PrimeTable, omega: &'a PiecewiseFunctionTable) -> Self {
        Self {
            primes,
            omega,
            quad: QuadratureSpec::default(),
        }
    }
}

/// μ_y(u) = ∫₁^u y^{t−u} ω(t) dt, taken as `∫₀^{u−1} e^{−s log y} ω(u−s) ds`
/// with the range split where `u − s` is an integer (the kinks of ω).
pub fn mu_y(y: f64, u: f64, omega: &PiecewiseFunctionTable, q: &QuadratureSpec) -> Result<f64> {
    if !(y >= 2.0) || !y.is_finite() {
        return Err(Error::domain("y", y, ">= 2"));
    }
    if !u.is_finite() {
        return Err(Error::domain("u", u, "finite"));
    }
    if u <= 1.0 {
        return Ok(0.0);
    }
    let l = y.ln();
    let s_max = (u - 1.0).min(TAIL_CUT / l);
    let mut points = vec![0.0];
    let first_int = u.floor();
    let mut k = if first_int == u { u - 1.0 } else { first_int };
    while u - k < s_max {
        points.push(u - k);
        k -= 1.0;
    }
    points.push(s_max);
    let r = integrate_pieces(|s: f64| (-s * l).exp() * buchstab_omega(u - s, omega), &points, q)?;
    Ok(r.value)
}

/// λ(x, y) = e^γ μ_y(u) log y.
pub fn lambda_at(y: f64, u: f64, omega: &PiecewiseFunctionTable, q: &QuadratureSpec) -> Result<f64> {
    Ok(EXP_EULER_GAMMA * mu_y(y, u, omega, q)? * y.ln())
}

/// λ(x, y) with `u = log x / log y`.
pub fn lambda(x: f64, y: f64, omega: &PiecewiseFunctionTable, q: &QuadratureSpec) -> Result<f64> {
    if !(x >= 1.0) {
        return Err(Error::domain("x", x, ">= 1"));
    }
    lambda_at(y, x.ln() / y.ln(), omega, q)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MainTermBreakdown {
    pub x: f64,
    pub y: f64,
    pub u: f64,
    pub mu: f64,
    pub q: f64,
    pub lambda: f64,
    pub main_term: f64,
}

/// `μ_y(u)·e^γ·x·log y·Q(y)` with all intermediate quantities.
pub fn main_term(x: f64, y: f64, ctx: &SmoothContext) -> Result<MainTermBreakdown> {
    if !(y >= 2.0) {
        return Err(Error::domain("y", y, ">= 2"));
    }
    if !(x >= y) || !x.is_finite() {
        return Err(Error::domain("x", x, ">= y"));
    }
    let u = x.ln() / y.ln();
    let mu = mu_y(y, u, ctx.omega, &ctx.quad)?;
    let q = mertens_product(y, ctx.primes)?;
    let lambda = EXP_EULER_GAMMA * mu * y.ln();
    Ok(MainTermBreakdown {
        x,
        y,
        u,
        mu,
        q,
        lambda,
        main_term: lambda * x * q,
    })
}

/// η(x, y) = Φ/(x Q(y)) − λ(x, y).
pub fn eta(x: f64, y: f64, phi: u64, ctx: &SmoothContext) -> Result<f64> {
    let m = main_term(x, y, ctx)?;
    Ok(phi as f64 / (x * m.q) - m.lambda)
}

/// H_y(v) = Σ_{y<p≤y^v} (1/p) ∏_{y<q<p} (1 − 1/q), with a running product.
pub fn h_y(v: f64, y: f64, pt: &PrimeTable) -> Result<f64> {
    if !(v >= 1.0) {
        return Err(Error::domain("v", v, ">= 1"));
    }
    if !(y >= 2.0) {
        return Err(Error::domain("y", y, ">= 2"));
    }
    let top = y.powf(v);
    if top >= pt.limit() as f64 + 1.0 {
        return Err(Error::BeyondSieveLimit {
            what: "y^v",
            value: top,
            limit: pt.limit(),
        });
    }
    let mut sum = crate::numeric::CompensatedSum::new();
    let mut running = 1.0f64;
    for &p in pt.primes_in(y, top)? {
        let r = 1.0 / p as f64;
        sum.add(r * running);
        running *= 1.0 - r;
    }
    Ok(sum.value())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct E1Value {
    pub value: f64,
    /// e^γ y^{h−u}
    pub bound: f64,
}

/// E₁(h; y, u) = e^γ log y ∫₁^h t^{−1} y^{t−u} dt, for `1 ≤ h ≤ u/2`.
pub fn e1_closed_form(h: f64, y: f64, u: f64, q: &QuadratureSpec) -> Result<E1Value> {
    if !(y >= 2.0) {
        return Err(Error::domain("y", y, ">= 2"));
    }
    if !(h >= 1.0 && h <= u / 2.0) {
        return Err(Error::domain("h", h, "in [1, u/2]"));
    }
    let l = y.ln();
    let r = integrate(|t: f64| ((t - u) * l).exp() / t, 1.0, h, q)?;
    Ok(E1Value {
        value: EXP_EULER_GAMMA * l * r.value,
        bound: EXP_EULER_GAMMA * ((h - u) * l).exp(),
    })
}
