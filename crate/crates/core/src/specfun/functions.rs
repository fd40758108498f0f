//! Pointwise special functions.

use super::quadrature::{integrate, QuadratureSpec};
use super::roots::bisect;
use super::tables::{PiecewiseFunctionTable, TableKind};
use crate::{Error, Result, EULER_GAMMA};

/// Buchstab's ω. Zero below 1, closed forms on `[1, 3]`, `e^{−γ}` past the table.
pub fn buchstab_omega(u: f64, table: &PiecewiseFunctionTable) -> f64 {
    debug_assert_eq!(table.kind, TableKind::Buchstab);
    if u < 1.0 {
        0.0
    } else if u <= 2.0 {
        1.0 / u
    } else if u <= 3.0 {
        ((u - 1.0).ln() + 1.0) / u
    } else if u > table.u_max {
        table.tail_value
    } else {
        table.eval_raw(u)
    }
}

/// Right derivative of ω from the delay equation: `u·ω′(u) = ω(u−1) − ω(u)`.
pub fn buchstab_omega_derivative(u: f64, table: &PiecewiseFunctionTable) -> f64 {
    if u < 1.0 || u > table.u_max {
        return 0.0;
    }
    (buchstab_omega(u - 1.0, table) - buchstab_omega(u, table)) / u
}

/// Dickman's ρ. One on `[0, 1]`, `1 − log u` on `[1, 2]`, zero below 0.
pub fn dickman_rho(u: f64, table: &PiecewiseFunctionTable) -> f64 {
    debug_assert_eq!(table.kind, TableKind::Dickman);
    if u < 0.0 {
        0.0
    } else if u <= 1.0 {
        1.0
    } else if u <= 2.0 {
        1.0 - u.ln()
    } else if u > table.u_max {
        table.dickman_ln_beyond(u).exp()
    } else {
        table.eval_raw(u)
    }
}

/// `ln ρ(u)` for `u ≥ 0`; stays finite where ρ itself underflows.
pub fn dickman_rho_ln(u: f64, table: &PiecewiseFunctionTable) -> f64 {
    if u < 0.0 {
        f64::NEG_INFINITY
    } else if u <= 1.0 {
        0.0
    } else if u <= 2.0 {
        (-u.ln()).ln_1p()
    } else if u > table.u_max {
        table.dickman_ln_beyond(u)
    } else {
        table.eval_raw_ln(u)
    }
}

/// `1/s − 1/(e^s − 1)`, smooth at `s = 0`.
fn li_kernel(s: f64) -> f64 {
    if s.abs() < 1e-3 {
        0.5 - s / 12.0 + s * s * s / 720.0
    } else {
        1.0 / s - 1.0 / s.exp_m1()
    }
}

/// Logarithmic integral (principal value) for `z > 1`.
///
/// Uses `li(z) = γ + log(z − 1) + ∫_1^z (1/log t − 1/(t − 1)) dt` with the
/// integral taken in `s = log t`, where the integrand is `e^s·(1/s − 1/(e^s−1))`.
pub fn log_integral(z: f64, q: &QuadratureSpec) -> Result<f64> {
    if !(z > 1.0) || !z.is_finite() {
        return Err(Error::domain("z", z, "> 1"));
    }
    let top = z.ln();
    let spec = QuadratureSpec {
        abs_tol: q.abs_tol.min(1e-300),
        rel_tol: 0.25 * q.rel_tol.max(1e-15),
        max_depth: q.max_depth,
    };
    let r = integrate(|s: f64| s.exp() * li_kernel(s), 0.0, top, &spec)?;
    Ok(EULER_GAMMA + (z - 1.0).ln() + r.value)
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(x: f64) -> f64 {
    let mut a = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    a
}

/// Γ(x) for real `x` (reflection below 1/2).
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let t = x + LANCZOS_G + 0.5;
        (2.0 * std::f64::consts::PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * lanczos_sum(x)
    }
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        (std::f64::consts::PI / (std::f64::consts::PI * x).sin()).ln() - ln_gamma(1.0 - x)
    } else {
        let x = x - 1.0;
        let t = x + LANCZOS_G + 0.5;
        0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + lanczos_sum(x).ln()
    }
}

/// `γ(t+2, 1) / Γ(t+2)` for `t ∈ [0, 1]`, from
/// `γ(s, 1) = e^{−1} Γ(s) Σ_{n≥0} 1/Γ(s+n+1)`.
pub fn incomplete_gamma_ratio(t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::domain("t", t, "in [0, 1]"));
    }
    let s = t + 2.0;
    let mut term = 1.0 / gamma(s + 1.0);
    let mut sum = 0.0;
    let mut n = 0.0;
    while term >= 1e-18 {
        sum += term;
        n += 1.0;
        term /= s + n;
    }
    Ok(sum * (-1.0f64).exp())
}

/// `S(u) = u²·ω′(u)` on `[3, 4]`, in closed form up to one quadrature.
pub fn s_function(u: f64, q: &QuadratureSpec) -> Result<f64> {
    let head = u * ((u - 2.0).ln() + 1.0) / (u - 1.0) - std::f64::consts::LN_2 - 1.0;
    let r = integrate(|t: f64| ((t - 2.0).ln() + 1.0) / (t - 1.0), 3.0, u, q)?;
    Ok(head - r.value)
}

/// Root `u₂` of `S` on `[3, 4]` and `ω(u₂)`: the minimum of ω there.
pub fn omega_interior_minimum(table: &PiecewiseFunctionTable, q: &QuadratureSpec) -> Result<(f64, f64)> {
    // Quadrature failures inside the closure surface as NaN, which bisect rejects.
    let s = |u: f64| s_function(u, q).unwrap_or(f64::NAN);
    let u2 = bisect(s, 3.0, 4.0, 1e-12, "S(u)")?;
    Ok((u2, buchstab_omega(u2, table)))
}

/// Maximum of ω on `[2, ∞)`: attained on `[2, 3]` where `u/(u−1) = log(u−1) + 1`.
pub fn omega_global_max() -> Result<(f64, f64)> {
    let g = |u: f64| u / (u - 1.0) - (u - 1.0).ln() - 1.0;
    let u = bisect(g, 2.0, 3.0, 1e-14, "omega'")?;
    Ok((u, ((u - 1.0).ln() + 1.0) / u))
}

#[cfg(test)]
#[path = "../../tests/common/oracle.rs"]
mod oracle;
