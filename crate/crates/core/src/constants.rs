//! The explicit constant chain: R(z) in both modes, C₀…C₈, η₁, ξ_k and their
//! sum, β, the Δ_k⁻ lower bounds, and the floor for ω on [3, ∞).

use serde::{Deserialize, Serialize};

use crate::numeric::CompensatedSum;
use crate::specfun::roots::golden_min;
use crate::specfun::{
    buchstab_omega, dickman_rho, gamma, incomplete_gamma_ratio, integrate, integrate_pieces,
    omega_global_max, omega_interior_minimum, PiecewiseFunctionTable, QuadratureSpec,
};
use crate::{Error, Result, EXP_NEG_EULER_GAMMA};

/// Top of the geometric grid used for suprema over `t ≥ y₀`.
pub const SUP_GRID_TOP: f64 = 1e16;
/// Ratio between neighbouring grid points.
pub const SUP_GRID_RATIO: f64 = 1.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Unconditional,
    Rh,
}

impl Mode {
    pub fn min_y0(self) -> f64 {
        match self {
            Mode::Unconditional => 229.0,
            Mode::Rh => 2657.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Unconditional => "unconditional",
            Mode::Rh => "rh",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "unconditional" | "u" => Ok(Mode::Unconditional),
            "rh" => Ok(Mode::Rh),
            _ => Err(Error::domain("mode", f64::NAN, "unconditional or rh")),
        }
    }
}

/// Mode and anchor `y₀` for the error envelope `R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApproxContext {
    pub mode: Mode,
    pub y0: f64,
}

impl ApproxContext {
    /// Checks the anchor against the mode and that `R` is positive and
    /// strictly decreasing with `z·R(z)` increasing on a log grid.
    pub fn new(mode: Mode, y0: f64) -> Result<Self> {
        if !(y0 >= mode.min_y0()) || !y0.is_finite() {
            return Err(Error::domain("y0", y0, &format!(">= {} for {} mode", mode.min_y0(), mode.name())));
        }
        let ctx = Self { mode, y0 };
        let grid = sup_grid(y0);
        for w in grid.windows(2) {
            let (a, b) = (ctx.r(w[0]), ctx.r(w[1]));
            if !(a > 0.0 && b < a && b * w[1] > a * w[0]) {
                return Err(Error::NonMonotoneTail { quantity: "R", at: w[1] });
            }
        }
        Ok(ctx)
    }

    /// R(z) without the range check.
    pub fn r(&self, z: f64) -> f64 {
        let l = z.ln();
        match self.mode {
            Mode::Unconditional => 0.2593 * l.powf(0.25) * (-(l / 6.315).sqrt()).exp(),
            Mode::Rh => l * l / (8.0 * std::f64::consts::PI * z.sqrt()),
        }
    }

    pub fn c0(&self) -> f64 {
        let l = self.y0.ln();
        match self.mode {
            Mode::Unconditional => 2.0 * (6.315 / l).sqrt(),
            Mode::Rh => 2.0 * (l + 2.0) / (l * l),
        }
    }
}

/// R(z) for `z ≥ y₀`.
pub fn r_value(ctx: &ApproxContext, z: f64) -> Result<f64> {
    if !(z >= ctx.y0) {
        return Err(Error::domain("z", z, ">= y0"));
    }
    Ok(ctx.r(z))
}

fn sup_grid(y0: f64) -> Vec<f64> {
    let mut g = Vec::new();
    let mut t = y0;
    while t < SUP_GRID_TOP {
        g.push(t);
        t *= SUP_GRID_RATIO;
    }
    g.push(SUP_GRID_TOP);
    g
}

/// sup of `f` over `[y₀, ∞)` on the geometric grid. The last decade must be
/// nonincreasing, otherwise the grid would not see the supremum.
pub fn grid_sup<F: Fn(f64) -> f64>(f: F, y0: f64, quantity: &'static str) -> Result<f64> {
    let grid = sup_grid(y0);
    let vals: Vec<f64> = grid.iter().map(|&t| f(t)).collect();
    let tail_from = SUP_GRID_TOP / 10.0;
    for (i, w) in vals.windows(2).enumerate() {
        if grid[i] >= tail_from && w[1] > w[0] {
            return Err(Error::NonMonotoneTail { quantity, at: grid[i + 1] });
        }
    }
    Ok(vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantLedger {
    pub mode: Mode,
    pub y0: f64,
    pub r_y0: f64,
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    pub c6: f64,
    pub c7: f64,
    pub c8: f64,
    pub eta1: f64,
    pub sum_xi: f64,
    pub beta: f64,
}

/// Row labels in table order.
pub const LEDGER_ROWS: [&str; 13] = [
    "y0", "R(y0)", "C0", "C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "eta1", "sum_xi",
];

impl ConstantLedger {
    pub fn rows(&self) -> [f64; 13] {
        [
            self.y0, self.r_y0, self.c0, self.c1, self.c2, self.c3, self.c4, self.c5, self.c6, self.c7,
            self.c8, self.eta1, self.sum_xi,
        ]
    }
}

/// Pieces of the chain shared by ξ_k and their sum.
#[derive(Debug, Clone, Copy)]
struct Chain {
    r_y0: f64,
    c0: f64,
    c1: f64,
    c2: f64,
    c3: f64,
    c5: f64,
    c7: f64,
    /// max_{t ≥ y₀} 1/(t R(t))
    inv_tr: f64,
    /// sup_{t ≥ y₀} log t/(t R(t))
    log_inv_tr: f64,
}

fn chain(ctx: &ApproxContext) -> Result<Chain> {
    let y0 = ctx.y0;
    let r_y0 = ctx.r(y0);
    let c0 = ctx.c0();
    let c1 = 2.0 * -(-1.0 / y0).ln_1p() * y0 / y0.ln() + c0 * y0 / (y0 - 1.0);
    let c2 = c1 + grid_sup(|t| 1.0 / (2.0 * (t - 1.0) * ctx.r(t)), y0, "1/(2(t-1)R(t))")?;
    let c3 = (c1 * r_y0).exp_m1() / r_y0;
    let c5 = (c2 * r_y0).exp_m1() / r_y0;
    let c4 = c2;
    Ok(Chain {
        r_y0,
        c0,
        c1,
        c2,
        c3,
        c5,
        c7: c3.max(c4),
        inv_tr: grid_sup(|t| 1.0 / (t * ctx.r(t)), y0, "1/(tR(t))")?,
        log_inv_tr: grid_sup(|t| t.ln() / (t * ctx.r(t)), y0, "log t/(tR(t))")?,
    })
}

/// I_y(2) = 1/2 + ∫₁² t^{−2} y^{t−2} dt.
fn i_two(y0: f64, q: &QuadratureSpec) -> Result<f64> {
    let l = y0.ln();
    Ok(0.5 + integrate(|t: f64| ((t - 2.0) * l).exp() / (t * t), 1.0, 2.0, q)?.value)
}

fn recip_gamma_integral(a: f64, b: f64, weight: impl Fn(f64) -> f64, q: &QuadratureSpec) -> Result<f64> {
    let mut pts = vec![a];
    let mut k = a.floor() + 1.0;
    while k < b {
        pts.push(k);
        k += 1.0;
    }
    pts.push(b);
    Ok(integrate_pieces(|t: f64| weight(t) / gamma(t), &pts, q)?.value)
}

/// ∫₂³ y^{t−k} (1 − log(t−1) + (t−1)^{−2}) dt
fn log_piece(y0: f64, k: f64, q: &QuadratureSpec) -> Result<f64> {
    let l = y0.ln();
    Ok(integrate(
        |t: f64| ((t - k) * l).exp() * (1.0 - (t - 1.0).ln() + 1.0 / ((t - 1.0) * (t - 1.0))),
        2.0,
        3.0,
        q,
    )?
    .value)
}

fn xi_from_chain(ctx: &ApproxContext, ch: &Chain, k: u32, q: &QuadratureSpec) -> Result<f64> {
    let y0 = ctx.y0;
    let l = y0.ln();
    if k == 2 {
        return Ok(ch.inv_tr + ch.c7 * (i_two(y0, q)? + 1.5));
    }
    let kf = k as f64;
    let shift = ((2.0 - kf) * l).exp();
    let fact: f64 = (1..k).map(|i| i as f64).product();
    let next = recip_gamma_integral(kf, kf + 1.0, |_| 1.0, q)?;
    let first = integrate(|t: f64| ((t - kf) * l).exp() / (t * t), 1.0, 2.0, q)?.value;
    let lag = recip_gamma_integral(3.0, kf, |t| ((t - kf) * l).exp(), q)?;
    Ok(ch.inv_tr * shift
        + ch.c7
            * (1.0 / fact
                + next
                + (2.0 * std::f64::consts::LN_2 - 0.5) * shift
                + first
                + log_piece(y0, kf, q)?
                + 2.0 * lag))
}

/// ξ_k(y₀) for `k ≥ 2`.
pub fn xi_k(ctx: &ApproxContext, k: u32, q: &QuadratureSpec) -> Result<f64> {
    if k < 2 {
        return Err(Error::domain("k", k as f64, ">= 2"));
    }
    xi_from_chain(ctx, &chain(ctx)?, k, q)
}

/// Σ_{k=2}^{K} ξ_k by direct summation.
pub fn sum_xi_direct(ctx: &ApproxContext, k_max: u32, q: &QuadratureSpec) -> Result<f64> {
    let ch = chain(ctx)?;
    let mut s = CompensatedSum::new();
    for k in 2..=k_max {
        s.add(xi_from_chain(ctx, &ch, k, q)?);
    }
    Ok(s.value())
}

fn sum_xi_closed(ctx: &ApproxContext, ch: &Chain, q: &QuadratureSpec) -> Result<f64> {
    let y0 = ctx.y0;
    let l = y0.ln();
    let e = std::f64::consts::E;
    // 1/Γ(t) is below 1e-40 past t = 40
    let tail = recip_gamma_integral(3.0, 40.0, |_| 1.0, q)?;
    let ig = integrate(
        |t: f64| (t * l).exp() * incomplete_gamma_ratio(t).unwrap_or(f64::NAN),
        0.0,
        1.0,
        q,
    )?
    .value;
    let inner = 2.0 * std::f64::consts::LN_2 - 1.0 + y0 * i_two(y0, q)? + log_piece(y0, 2.0, q)? + 2.0 * e * ig;
    Ok(y0 / (y0 - 1.0) * ch.inv_tr + ch.c7 * (e - 0.5 + tail + inner / (y0 - 1.0)))
}

/// Σ_{k≥2} ξ_k(y₀) from the closed form with the incomplete gamma ratio.
pub fn sum_xi(ctx: &ApproxContext, q: &QuadratureSpec) -> Result<f64> {
    sum_xi_closed(ctx, &chain(ctx)?, q)
}

/// The full column of constants for one `(mode, y₀)`.
pub fn compute_ledger(ctx: &ApproxContext, q: &QuadratureSpec) -> Result<ConstantLedger> {
    let ch = chain(ctx)?;
    let eta1 = ch.log_inv_tr + ch.c3 + 2.0 * (1.0 + ch.c3 * ch.r_y0);
    let sum_xi = sum_xi_closed(ctx, &ch, q)?;
    let beta = if ctx.y0 < 1e8 { 1.0 } else { (ch.c2 * ch.r_y0).exp() };
    Ok(ConstantLedger {
        mode: ctx.mode,
        y0: ctx.y0,
        r_y0: ch.r_y0,
        c0: ch.c0,
        c1: ch.c1,
        c2: ch.c2,
        c3: ch.c3,
        c4: ch.c2,
        c5: ch.c5,
        c6: ch.c1,
        c7: ch.c7,
        c8: beta * (eta1 + sum_xi),
        eta1,
        sum_xi,
        beta,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceColumn {
    pub mode: Mode,
    pub y0: f64,
    pub values: [f64; 13],
}

/// The printed table of constants, in `LEDGER_ROWS` order.
pub const REFERENCE_COLUMNS: [ReferenceColumn; 4] = [
    ReferenceColumn {
        mode: Mode::Unconditional,
        y0: 229.0,
        values: [
            229.0, 0.156576, 2.156096, 2.534430, 2.548436, 3.110976, 2.548436, 3.131827, 2.534430,
            3.110976, 16.982691, 6.236726, 10.745960,
        ],
    },
    ReferenceColumn {
        mode: Mode::Unconditional,
        y0: 1e8,
        values: [
            1e8, 0.097363, 1.171019, 1.279593, 1.279593, 1.362717, 1.279593, 1.362717, 1.279593,
            1.362717, 9.079975, 3.628074, 4.388310,
        ],
    },
    ReferenceColumn {
        mode: Mode::Rh,
        y0: 2657.0,
        values: [
            2657.0, 0.047992, 0.317985, 0.571800, 0.575723, 0.579718, 0.575723, 0.583750, 0.571800,
            0.579718, 4.638553, 2.697198, 1.941356,
        ],
    },
    ReferenceColumn {
        mode: Mode::Rh,
        y0: 1e8,
        values: [
            1e8, 0.001351, 0.120362, 0.228936, 0.228940, 0.228971, 0.228940, 0.228975, 0.228936,
            0.228971, 2.967998, 2.229726, 0.737355,
        ],
    },
];

/// Allowed absolute difference against a printed six-decimal value.
pub const REFERENCE_TOL: f64 = 5e-5;
/// Differences above this (but within `REFERENCE_TOL`) are flagged.
pub const REFERENCE_FLAG: f64 = 5e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CellStatus {
    Match,
    Flagged,
    Mismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellComparison {
    pub row: &'static str,
    pub computed: f64,
    pub reference: f64,
    pub delta: f64,
    pub status: CellStatus,
}

pub fn reference_column(mode: Mode, y0: f64) -> Option<&'static ReferenceColumn> {
    REFERENCE_COLUMNS.iter().find(|c| c.mode == mode && c.y0 == y0)
}

/// Per-cell comparison against the printed column, if there is one.
pub fn compare_with_reference(ledger: &ConstantLedger) -> Option<Vec<CellComparison>> {
    let col = reference_column(ledger.mode, ledger.y0)?;
    Some(
        LEDGER_ROWS
            .iter()
            .zip(ledger.rows())
            .zip(col.values)
            .map(|((&row, computed), reference)| {
                let delta = computed - reference;
                let status = if delta.abs() > REFERENCE_TOL {
                    CellStatus::Mismatch
                } else if delta.abs() > REFERENCE_FLAG {
                    CellStatus::Flagged
                } else {
                    CellStatus::Match
                };
                CellComparison {
                    row,
                    computed,
                    reference,
                    delta,
                    status,
                }
            })
            .collect(),
    )
}

/// Boundary between the two y-branches of the Δ bounds.
pub const Y1: f64 = 2_278_383.0;
/// Lower end of the small-y branch.
pub const DELTA_Y0: f64 = 602.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaBranch {
    /// y ≥ y₁
    LargeY,
    /// 602 ≤ y ≤ y₁
    SmallY,
    /// both, elementwise minimum
    Combined,
}

impl std::str::FromStr for DeltaBranch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "large_y" | "large" => Ok(DeltaBranch::LargeY),
            "small_y" | "small" => Ok(DeltaBranch::SmallY),
            "combined" | "both" => Ok(DeltaBranch::Combined),
            _ => Err(Error::domain("branch", f64::NAN, "large-y, small-y or combined")),
        }
    }
}

/// Which reading of the base case and recursion to evaluate.
///
/// `Printed` follows the displayed formulas literally. `Tabulated` drops the
/// positive `log y/(u y^{3/2})` term from the base case and anchors the
/// recursion at `9Δ_k⁻/k²` instead of `9Δ₃⁻/k²`; both changes only weaken
/// the bounds, and they reproduce the stated numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeltaVariant {
    Tabulated,
    Printed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaBounds {
    pub branch: DeltaBranch,
    pub variant: DeltaVariant,
    pub delta3: f64,
    pub delta4: f64,
    pub delta_inf: f64,
    /// where the base-case infimum was found
    pub u_at: f64,
    pub y_at: f64,
    /// for the large-y branch: whether the base-case minimum over u was seen
    /// to increase with y on the sample
    pub increasing_in_y: Option<bool>,
}

#[derive(Debug, Clone, Copy)]
struct BranchConsts {
    l1: f64,
    c1: f64,
    c2: f64,
    c3: f64,
}

fn large_consts() -> BranchConsts {
    let l1 = Y1.ln();
    BranchConsts {
        l1,
        c1: 0.4 / l1,
        c2: 1.0 + 2.53816 / l1,
        c3: 1.0 + 2.0 / l1,
    }
}

const D1: f64 = 2.0;
const D2: f64 = 1.2762;
const D3: f64 = 1.0;

fn g_of(u: f64, c: f64) -> f64 {
    c / (u * u) * ((u - 1.0).ln() + (u - 2.0) / (u - 1.0))
}

/// Lower bound for Δ(x, y) on `2 ≤ u ≤ 3` in the given branch.
pub fn base_case_expression(branch: DeltaBranch, variant: DeltaVariant, u: f64, y: f64) -> f64 {
    let l = y.ln();
    let sq = if variant == DeltaVariant::Printed {
        l / (u * y.powf(1.5))
    } else {
        0.0
    };
    match branch {
        DeltaBranch::SmallY => {
            let s = y.sqrt();
            g_of(u, D3) - 2.0 * D1 / (u * s) + sq
                - (2.0 - D3 + 4.0 * D1 * D3 / (s * l) + 8.0 * D2 / (u * l) + 8.0 * D2 * D2 / (u * u * l * l))
                    / (u * u)
        }
        _ => {
            let k = large_consts();
            g_of(u, k.c3) - 2.0 * k.c1 / (u * l) + sq
                - (2.0 - k.c3
                    + 4.0 * k.c1 * k.c3 / (l * l)
                    + 8.0 * k.c2 / (u * l)
                    + 8.0 * k.c2 * k.c2 / (u * u * l * l))
                    / (u * u)
        }
    }
}

/// a_k⁻ for the branch, given Δ₃⁻ and Δ_k⁻.
pub fn a_k(branch: DeltaBranch, variant: DeltaVariant, k: u32, delta3: f64, delta_k: f64, m0: f64) -> f64 {
    let kf = k as f64;
    let anchor = match variant {
        DeltaVariant::Printed => delta3,
        DeltaVariant::Tabulated => delta_k,
    };
    let corr = match branch {
        DeltaBranch::SmallY => {
            let l0 = DELTA_Y0.ln();
            (2.0 * D1 * m0 * l0 / DELTA_Y0.sqrt() - (D2 / 3.0 - 1.0) * delta_k).max(0.0) / l0
        }
        _ => {
            let k = large_consts();
            (2.0 * k.c1 * m0 - (k.c2 / 3.0 - 1.0) * delta_k).max(0.0) / k.l1
        }
    };
    9.0 * anchor / (kf * kf) + delta_k / 2.0 - corr
}

const U_STEP: f64 = 1e-4;
const SMALL_Y_POINTS: usize = 2000;
const K_LIMIT: u32 = 200;

/// min over u ∈ [2, 3] at fixed y: grid at Δu = 1e-4, then golden refinement.
fn min_over_u(branch: DeltaBranch, variant: DeltaVariant, y: f64) -> (f64, f64) {
    let n = (1.0 / U_STEP).round() as usize;
    let mut best = (2.0, f64::INFINITY);
    for i in 0..=n {
        let u = 2.0 + i as f64 * U_STEP;
        let v = base_case_expression(branch, variant, u, y);
        if v < best.1 {
            best = (u, v);
        }
    }
    let lo = (best.0 - U_STEP).max(2.0);
    let hi = (best.0 + U_STEP).min(3.0);
    let (u, v) = golden_min(|u| base_case_expression(branch, variant, u, y), lo, hi, 1e-12);
    if v < best.1 {
        (u, v)
    } else {
        best
    }
}

fn iterate(branch: DeltaBranch, variant: DeltaVariant, delta3: f64, m0: f64) -> Result<(f64, f64)> {
    let mut d = delta3;
    let mut delta4 = d;
    let mut last_change = 3;
    for k in 3..K_LIMIT {
        let next = d.min(a_k(branch, variant, k, delta3, d, m0));
        if next != d {
            last_change = k;
        }
        d = next;
        if k == 3 {
            delta4 = d;
        }
    }
    // stationary over the second half of the run
    if last_change > K_LIMIT / 2 {
        return Err(Error::FixpointNotReached { iterations: K_LIMIT as usize });
    }
    Ok((delta4, d))
}

/// Δ₃⁻, Δ₄⁻ and Δ_∞⁻ lower bounds for a branch.
pub fn delta_lower_bounds(branch: DeltaBranch, variant: DeltaVariant) -> Result<DeltaBounds> {
    let (_, m0) = omega_global_max()?;
    match branch {
        DeltaBranch::LargeY => {
            let (u, d3) = min_over_u(branch, variant, Y1);
            let sample = crate::numeric::geomspace(Y1, 1e30, 25);
            let mins: Vec<f64> = sample.iter().map(|&y| min_over_u(branch, variant, y).1).collect();
            let increasing = mins.windows(2).all(|w| w[1] >= w[0]);
            let d3 = if increasing { d3 } else { mins.iter().cloned().fold(d3, f64::min) };
            let (d4, dinf) = iterate(branch, variant, d3, m0)?;
            Ok(DeltaBounds {
                branch,
                variant,
                delta3: d3,
                delta4: d4,
                delta_inf: dinf,
                u_at: u,
                y_at: Y1,
                increasing_in_y: Some(increasing),
            })
        }
        DeltaBranch::SmallY => {
            let mut best = (f64::INFINITY, 2.0, DELTA_Y0);
            for y in crate::numeric::geomspace(DELTA_Y0, Y1, SMALL_Y_POINTS) {
                let (u, v) = min_over_u(branch, variant, y);
                if v < best.0 {
                    best = (v, u, y);
                }
            }
            let (d4, dinf) = iterate(branch, variant, best.0, m0)?;
            Ok(DeltaBounds {
                branch,
                variant,
                delta3: best.0,
                delta4: d4,
                delta_inf: dinf,
                u_at: best.1,
                y_at: best.2,
                increasing_in_y: None,
            })
        }
        DeltaBranch::Combined => {
            let a = delta_lower_bounds(DeltaBranch::LargeY, variant)?;
            let b = delta_lower_bounds(DeltaBranch::SmallY, variant)?;
            let w = if b.delta3 <= a.delta3 { b } else { a };
            Ok(DeltaBounds {
                branch,
                variant,
                delta3: a.delta3.min(b.delta3),
                delta4: a.delta4.min(b.delta4),
                delta_inf: a.delta_inf.min(b.delta_inf),
                u_at: w.u_at,
                y_at: w.y_at,
                increasing_in_y: a.increasing_in_y,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OmegaFloor {
    pub u2: f64,
    pub omega_u2: f64,
    pub rho3: f64,
    /// e^{−γ} − ρ(3)/4
    pub tail_floor: f64,
    pub floor: f64,
}

/// Lower bound for ω on `[3, ∞)`: `min(ω(u₂), e^{−γ} − ρ(3)/4)`.
pub fn omega_floor(
    omega: &PiecewiseFunctionTable,
    rho: &PiecewiseFunctionTable,
    q: &QuadratureSpec,
) -> Result<OmegaFloor> {
    let (u2, omega_u2) = omega_interior_minimum(omega, q)?;
    let rho3 = dickman_rho(3.0, rho);
    let tail_floor = EXP_NEG_EULER_GAMMA - rho3 / 4.0;
    Ok(OmegaFloor {
        u2,
        omega_u2,
        rho3,
        tail_floor,
        floor: omega_u2.min(tail_floor),
    })
}

/// `ω(u) − floor` minimised over a grid on `[3, u_hi]`.
pub fn omega_floor_gap(omega: &PiecewiseFunctionTable, floor: f64, u_hi: f64, n: usize) -> f64 {
    crate::numeric::linspace(3.0, u_hi, n)
        .into_iter()
        .map(|u| buchstab_omega(u, omega) - floor)
        .fold(f64::INFINITY, f64::min)
}
