//! Numerical checks of the explicit inequalities against exact counts.
//!
//! Φ(·, y) is a step function of x while the comparison sides are
//! continuous, so sampled checks are made at a step point `n` and just below
//! it at `x⁻ = n − min(2⁻²⁰·n, 1/2)`, where Φ still has its previous value.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::Mode;
use crate::debruijn::{main_term, MainTermBreakdown, SmoothContext};
use crate::numeric::{geomspace, linspace};
use crate::sieve::{mertens_product, phi_with, LegendreConfig, PhiMethod, PrimeTable, RoughCountQuery, DIRECT_CUTOFF};
use crate::specfun::{buchstab_omega, log_integral, omega_global_max, QuadratureSpec, Tables};
use crate::{Error, Result, EXP_EULER_GAMMA};

pub const MAIN_UNCONDITIONAL: f64 = 4.403611;
pub const MAIN_RH: f64 = 0.449774;
pub const COROLLARY_UNCONDITIONAL: f64 = 4.434084;
pub const COROLLARY_RH: f64 = 0.460680;
/// RH forms are stated for y ≥ 11.
pub const RH_MIN_Y: f64 = 11.0;
/// Margins below this fraction of the bound are reported as inconclusive.
pub const INCONCLUSIVE_REL: f64 = 1e-12;
/// At most this many violation records are kept in a report.
pub const MAX_VIOLATION_RECORDS: usize = 1000;

pub const DELTA3_FLOOR: f64 = -0.563528;
pub const DELTA4_FLOOR: f64 = -0.887161;
pub const DELTA_INF_FLOOR: f64 = -0.955421;

pub const M_CEILING: f64 = 0.259141;
pub const SMALL_M_FLOOR: f64 = 0.876248;
/// (lo, hi, floor, hi inclusive)
pub const M_Y_WINDOWS: [(f64, f64, f64, bool); 3] = [
    (229.0, 2657.0, 0.983296, true),
    (2657.0, 210_000.0, 0.996426, false),
    (210_000.0, 1e8, 0.999643, true),
];

/// Points at which a sampled check is made.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub y_values: Vec<f64>,
    pub u_values: Vec<f64>,
    pub x_cap: u64,
    /// every integer x in [y, x_cap] instead of x = y^u
    pub exhaustive_x: bool,
}

impl GridSpec {
    pub fn new(y_values: Vec<f64>, u_values: Vec<f64>, x_cap: u64, exhaustive_x: bool) -> Result<Self> {
        if let Some(&y) = y_values.iter().find(|&&y| !(y >= 2.0) || !y.is_finite()) {
            return Err(Error::domain("y", y, ">= 2"));
        }
        if let Some(&u) = u_values.iter().find(|&&u| !(u >= 1.0) || !u.is_finite()) {
            return Err(Error::domain("u", u, ">= 1"));
        }
        Ok(Self {
            y_values,
            u_values,
            x_cap,
            exhaustive_x,
        })
    }

    /// 60 log-spaced y in [2, 3163], 40 u in [1.05, 9], x ≤ 10⁸.
    pub fn default_grid() -> Self {
        Self {
            y_values: geomspace(2.0, 3163.0, 60),
            u_values: linspace(1.05, 9.0, 40),
            x_cap: 100_000_000,
            exhaustive_x: false,
        }
    }

    /// Sampled primes in [602, 5000] and u in [2, 6).
    pub fn delta_grid(pt: &PrimeTable, x_cap: u64) -> Result<Self> {
        let ps = pt.primes_in(601.0, 5000.0)?;
        let step = (ps.len() / 30).max(1);
        Ok(Self {
            y_values: ps.iter().step_by(step).map(|&p| p as f64).collect(),
            u_values: linspace(2.0, 5.95, 80),
            x_cap,
            exhaustive_x: false,
        })
    }

    /// Same grid with y below `y_min` dropped.
    pub fn with_min_y(&self, y_min: f64) -> Self {
        let mut g = self.clone();
        g.y_values.retain(|&y| y >= y_min);
        g
    }

    /// Step points `(n, y)` with `y ≤ n ≤ x_cap`, in grid order.
    pub fn step_points(&self) -> Vec<(u64, f64)> {
        let mut out = Vec::new();
        for &y in &self.y_values {
            if self.exhaustive_x {
                let lo = y.ceil() as u64;
                out.extend((lo..=self.x_cap).map(|n| (n, y)));
                continue;
            }
            for &u in &self.u_values {
                let x = y.powf(u);
                if x > self.x_cap as f64 {
                    continue;
                }
                let n = x.floor() as u64;
                if n as f64 >= y {
                    out.push((n, y));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub x: f64,
    pub y: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theorem_id: String,
    pub mode: Option<Mode>,
    pub grid: Option<GridSpec>,
    pub points_checked: u64,
    /// smallest `margin`; `f64::MAX` when nothing was checked
    pub min_margin: f64,
    /// the point where the smallest `margin / rhs` was seen
    pub worst: Option<Violation>,
    pub inconclusive: u64,
    pub violation_count: u64,
    pub violations: Vec<Violation>,
    pub runtime_seconds: f64,
    pub note: Option<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }

    /// Copy with the wall-clock time zeroed, for comparing runs.
    pub fn without_timing(&self) -> Self {
        Self {
            runtime_seconds: 0.0,
            ..self.clone()
        }
    }
}

/// Accumulates checks in order; `margin = rhs − lhs` for upper bounds and
/// `lhs − rhs` for lower bounds is computed by the caller.
#[derive(Debug, Clone)]
struct Tally {
    points: u64,
    min_margin: f64,
    worst: Option<(f64, Violation)>,
    inconclusive: u64,
    violation_count: u64,
    violations: Vec<Violation>,
}

impl Tally {
    fn new() -> Self {
        Self {
            points: 0,
            min_margin: f64::MAX,
            worst: None,
            inconclusive: 0,
            violation_count: 0,
            violations: Vec::new(),
        }
    }

    fn push(&mut self, v: Violation) {
        self.points += 1;
        if v.margin < self.min_margin {
            self.min_margin = v.margin;
        }
        let scale = v.rhs.abs().max(f64::MIN_POSITIVE);
        let rel = v.margin / scale;
        if self.worst.map_or(true, |(r, _)| rel < r) {
            self.worst = Some((rel, v));
        }
        if !(v.margin > 0.0) {
            self.violation_count += 1;
            if self.violations.len() < MAX_VIOLATION_RECORDS {
                self.violations.push(v);
            }
        } else if v.margin < INCONCLUSIVE_REL * scale {
            self.inconclusive += 1;
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.points += other.points;
        self.min_margin = self.min_margin.min(other.min_margin);
        if let Some((r, v)) = other.worst {
            if self.worst.map_or(true, |(s, _)| r < s) {
                self.worst = Some((r, v));
            }
        }
        self.inconclusive += other.inconclusive;
        self.violation_count += other.violation_count;
        for v in other.violations {
            if self.violations.len() < MAX_VIOLATION_RECORDS {
                self.violations.push(v);
            }
        }
        self
    }

    fn report(self, id: &str, mode: Option<Mode>, grid: Option<GridSpec>, start: Instant, note: Option<String>) -> VerificationReport {
        VerificationReport {
            theorem_id: id.to_string(),
            mode,
            grid,
            points_checked: self.points,
            min_margin: self.min_margin,
            worst: self.worst.map(|(_, v)| v),
            inconclusive: self.inconclusive,
            violation_count: self.violation_count,
            violations: self.violations,
            runtime_seconds: start.elapsed().as_secs_f64(),
            note,
        }
    }
}

/// Exact count and smooth side at one sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub x: f64,
    pub y: f64,
    pub phi: u64,
    pub main: MainTermBreakdown,
}

/// `x⁻` for a step point `n`.
pub fn just_below(n: u64) -> f64 {
    let n = n as f64;
    n - (n * 2f64.powi(-20)).min(0.5)
}

fn is_rough(n: u64, y: f64, pt: &PrimeTable) -> bool {
    if n == 1 {
        return true;
    }
    for &p in pt.primes() {
        let p = p as u64;
        if p as f64 > y {
            return true;
        }
        if p * p > n {
            // n is prime and p ≤ y was checked up to √n
            return n as f64 > y;
        }
        if n % p == 0 {
            return false;
        }
    }
    true
}

/// Shared inputs for every check.
#[derive(Clone, Copy)]
pub struct Verifier<'a> {
    pub primes: &'a PrimeTable,
    pub tables: &'a Tables,
    pub quad: QuadratureSpec,
    pub legendre: LegendreConfig,
}

impl<'a> Verifier<'a> {
    pub fn new(primes: &'a PrimeTable, tables: &'a Tables) -> Self {
        Self {
            primes,
            tables,
            quad: QuadratureSpec::default(),
            legendre: LegendreConfig {
                memo_bytes: 8 << 20,
                ..LegendreConfig::default()
            },
        }
    }

    fn smooth(&self) -> SmoothContext<'a> {
        SmoothContext {
            primes: self.primes,
            omega: &self.tables.omega,
            quad: self.quad,
        }
    }

    fn phi(&self, n: u64, y: f64, method: PhiMethod) -> Result<u64> {
        let q = RoughCountQuery::new(n as f64, y)?;
        phi_with(&q, self.primes, method, &self.legendre)
    }

    /// Φ at `(n, y)`; one point in a hundred is recounted on the other path.
    fn phi_checked(&self, idx: usize, n: u64, y: f64) -> Result<u64> {
        let v = self.phi(n, y, PhiMethod::Auto)?;
        if idx % 100 == 0 && n <= self.primes.limit() {
            let other = if n <= DIRECT_CUTOFF { PhiMethod::Legendre } else { PhiMethod::Direct };
            let w = self.phi(n, y, other)?;
            if w != v {
                return Err(Error::PathMismatch {
                    x: n as f64,
                    y,
                    first: v,
                    second: w,
                });
            }
        }
        Ok(v)
    }

    fn record(&self, x: f64, y: f64, phi: u64) -> Result<PointRecord> {
        Ok(PointRecord {
            x,
            y,
            phi,
            main: main_term(x, y, &self.smooth())?,
        })
    }

    /// Records at each step point and just below it, plus `x = y` for each y.
    pub fn evaluate(&self, grid: &GridSpec) -> Result<Vec<PointRecord>> {
        let mut pts = grid.step_points();
        let mut seen = std::collections::HashSet::new();
        pts.retain(|&(n, y)| seen.insert((n, y.to_bits())));
        let per: Vec<Result<Vec<PointRecord>>> = pts
            .par_iter()
            .enumerate()
            .map(|(i, &(n, y))| {
                let at = |e: Error| Error::AtPoint {
                    x: n as f64,
                    y,
                    source: Box::new(e),
                };
                let phi = self.phi_checked(i, n, y).map_err(at)?;
                let mut out = vec![self.record(n as f64, y, phi).map_err(at)?];
                let xm = just_below(n);
                if xm >= y {
                    let prev = phi - is_rough(n, y, self.primes) as u64;
                    out.push(self.record(xm, y, prev).map_err(at)?);
                }
                Ok(out)
            })
            .collect();
        let mut out = Vec::new();
        for &y in &grid.y_values {
            out.push(self.record(y, y, 1)?);
        }
        for r in per {
            out.extend(r?);
        }
        Ok(out)
    }

    pub fn verify_main_theorem(&self, grid: &GridSpec, mode: Mode) -> Result<VerificationReport> {
        let start = Instant::now();
        let g = rh_grid(grid, mode);
        let recs = self.evaluate(&g)?;
        Ok(main_theorem_on(&recs, mode).report("main-theorem", Some(mode), Some(g), start, rh_note(mode)))
    }

    pub fn verify_corollary(&self, grid: &GridSpec, mode: Mode) -> Result<VerificationReport> {
        let start = Instant::now();
        let g = rh_grid(grid, mode);
        let recs = self.evaluate(&g)?;
        Ok(corollary_on(&recs, mode).report("corollary", Some(mode), Some(g), start, rh_note(mode)))
    }

    /// Both forms of the main bound and its corollary from one evaluation of
    /// the grid.
    pub fn verify_de_bruijn_all(&self, grid: &GridSpec) -> Result<Vec<VerificationReport>> {
        let start = Instant::now();
        let recs = self.evaluate(grid)?;
        let mut out = Vec::new();
        for mode in [Mode::Unconditional, Mode::Rh] {
            let g = rh_grid(grid, mode);
            out.push(main_theorem_on(&recs, mode).report("main-theorem", Some(mode), Some(g.clone()), start, rh_note(mode)));
            out.push(corollary_on(&recs, mode).report("corollary", Some(mode), Some(g), start, rh_note(mode)));
        }
        Ok(out)
    }

    /// `Φ(x, y) < x/log y` for x ≥ y, and `< 0.6x/log y` for 3 ≤ y ≤ √x,
    /// at each step point.
    pub fn verify_sandwich(&self, grid: &GridSpec) -> Result<VerificationReport> {
        let start = Instant::now();
        let pts = grid.step_points();
        let tallies: Vec<Result<Tally>> = pts
            .par_iter()
            .enumerate()
            .map(|(i, &(n, y))| {
                let mut t = Tally::new();
                let phi = self.phi_checked(i, n, y)? as f64;
                let x = n as f64;
                let l = y.ln();
                t.push(upper(x, y, phi, x / l));
                if y >= 3.0 && y * y <= x {
                    t.push(upper(x, y, phi, 0.6 * x / l));
                }
                Ok(t)
            })
            .collect();
        let mut t = Tally::new();
        for r in tallies {
            t = t.merge(r?);
        }
        Ok(t.report("sandwich", None, Some(grid.clone()), start, None))
    }

    /// Δ(x, y) = (Φ log y/x − ω(u)) log y against the stated floors for its
    /// u-range, y ≥ 602.
    pub fn verify_delta_pointwise(&self, grid: &GridSpec) -> Result<VerificationReport> {
        let start = Instant::now();
        let g = grid.with_min_y(602.0);
        let mut pts = g.step_points();
        pts.retain(|&(n, y)| (n as f64).ln() / y.ln() >= 2.0);
        let omega = &self.tables.omega;
        let tallies: Vec<Result<Tally>> = pts
            .par_iter()
            .enumerate()
            .map(|(i, &(n, y))| {
                let mut t = Tally::new();
                let phi = self.phi_checked(i, n, y)?;
                let l = y.ln();
                let mut check = |x: f64, phi: u64| {
                    let u = x.ln() / l;
                    if u < 2.0 {
                        return;
                    }
                    let delta = (phi as f64 * l / x - buchstab_omega(u, omega)) * l;
                    let floor = delta_floor(u);
                    t.push(Violation {
                        x,
                        y,
                        lhs: delta.min(0.0),
                        rhs: floor,
                        margin: delta.min(0.0) - floor,
                    });
                };
                check(n as f64, phi);
                check(just_below(n), phi - is_rough(n, y, self.primes) as u64);
                Ok(t)
            })
            .collect();
        let mut t = Tally::new();
        for r in tallies {
            t = t.merge(r?);
        }
        let u_hi = g
            .y_values
            .iter()
            .map(|&y| (g.x_cap as f64).ln() / y.ln())
            .fold(0.0, f64::max);
        let note = format!("largest reachable u at this cap: {u_hi:.4}");
        Ok(t.report("delta-floor", None, Some(g), start, Some(note)))
    }

    /// M, m and the m(y) windows by direct scan, plus the two-sided D(x, y)
    /// assembly for 11 ≤ y ≤ 2657.
    pub fn verify_final_assembly(&self, mode: Mode) -> Result<VerificationReport> {
        let start = Instant::now();
        let a = final_assembly(self.primes, &self.quad)?;
        let mut t = Tally::new();
        t.push(Violation {
            x: a.m_at,
            y: a.m_at,
            lhs: a.big_m,
            rhs: M_CEILING,
            margin: M_CEILING - a.big_m,
        });
        t.push(Violation {
            x: a.small_m_at,
            y: a.small_m_at,
            lhs: SMALL_M_FLOOR,
            rhs: a.small_m,
            margin: a.small_m - SMALL_M_FLOOR,
        });
        for w in &a.windows {
            t.push(Violation {
                x: w.at,
                y: w.at,
                lhs: w.floor,
                rhs: w.min,
                margin: w.min - w.floor,
            });
        }
        for v in &a.assembly {
            t.push(*v);
        }
        let note = format!(
            "M = {:.9} at z = {:.6}; m = {:.9} at z = {}; m(y) minima {:?}",
            a.big_m,
            a.m_at,
            a.small_m,
            a.small_m_at,
            a.windows.iter().map(|w| w.min).collect::<Vec<_>>()
        );
        Ok(t.report("final-assembly", Some(mode), None, start, Some(note)))
    }
}

fn rh_grid(grid: &GridSpec, mode: Mode) -> GridSpec {
    match mode {
        Mode::Unconditional => grid.clone(),
        Mode::Rh => grid.with_min_y(RH_MIN_Y),
    }
}

fn rh_note(mode: Mode) -> Option<String> {
    (mode == Mode::Rh).then(|| "conditional claim, unconditionally sampled".to_string())
}

fn upper(x: f64, y: f64, lhs: f64, rhs: f64) -> Violation {
    Violation {
        x,
        y,
        lhs,
        rhs,
        margin: rhs - lhs,
    }
}

/// Right side of the main bound.
pub fn main_bound(x: f64, y: f64, mode: Mode) -> f64 {
    let l = y.ln();
    match mode {
        Mode::Unconditional => MAIN_UNCONDITIONAL * x * l.powf(-0.75) * (-(l / 6.315).sqrt()).exp(),
        Mode::Rh => MAIN_RH * x * l / y.sqrt(),
    }
}

/// Right side of the corollary.
pub fn corollary_bound(x: f64, y: f64, mode: Mode) -> f64 {
    let l = y.ln();
    match mode {
        Mode::Unconditional => COROLLARY_UNCONDITIONAL * x * l.powf(-0.75) * (-(l / 6.315).sqrt()).exp(),
        Mode::Rh => COROLLARY_RH * x * l / y.sqrt(),
    }
}

fn applies(r: &PointRecord, mode: Mode) -> bool {
    mode == Mode::Unconditional || r.y >= RH_MIN_Y
}

fn main_theorem_on(recs: &[PointRecord], mode: Mode) -> Tally {
    let mut t = Tally::new();
    for r in recs.iter().filter(|r| applies(r, mode)) {
        t.push(upper(r.x, r.y, (r.phi as f64 - r.main.main_term).abs(), main_bound(r.x, r.y, mode)));
    }
    t
}

fn corollary_on(recs: &[PointRecord], mode: Mode) -> Tally {
    let mut t = Tally::new();
    for r in recs.iter().filter(|r| applies(r, mode)) {
        t.push(upper(r.x, r.y, (r.phi as f64 - r.main.mu * r.x).abs(), corollary_bound(r.x, r.y, mode)));
    }
    t
}

/// Stated floor for Δ on the u-range containing `u`.
pub fn delta_floor(u: f64) -> f64 {
    if u < 3.0 {
        DELTA3_FLOOR
    } else if u < 4.0 {
        DELTA4_FLOOR
    } else {
        DELTA_INF_FLOOR
    }
}

/// `Φ(x, y) > 0.4x/log y` for every prime `y ≥ y_min` and every
/// `x ∈ [max(y^{3/2}, x_min), x_cap]`, checked just below each step of Φ and
/// at `x_cap`. Real y between primes is covered by the prime below it, where
/// Φ is the same and the right side larger.
pub fn verify_lower_04(pt: &PrimeTable, x_cap: u64, y_min: f64, x_min: f64) -> Result<VerificationReport> {
    let start = Instant::now();
    if x_cap > pt.limit() {
        return Err(Error::BeyondSieveLimit {
            what: "x_cap",
            value: x_cap as f64,
            limit: pt.limit(),
        });
    }
    let lpf = least_prime_factors(x_cap as usize);
    let y_max = (x_cap as f64).powf(2.0 / 3.0);
    let ys: Vec<u32> = pt.primes_in(y_min - 1.0, y_max)?.iter().copied().filter(|&p| p as f64 >= y_min).collect();
    let tallies: Vec<Tally> = ys
        .par_iter()
        .map(|&p| {
            let mut t = Tally::new();
            let y = p as f64;
            let l = y.ln();
            let x0 = y.powf(1.5).max(x_min);
            let mut count = 0u64;
            for n in 1..=x_cap as usize {
                if lpf[n] > p {
                    let xm = just_below(n as u64);
                    if xm >= x0 {
                        let rhs = 0.4 * xm / l;
                        t.push(Violation {
                            x: xm,
                            y,
                            lhs: count as f64,
                            rhs,
                            margin: count as f64 - rhs,
                        });
                    }
                    count += 1;
                }
            }
            let x = x_cap as f64;
            if x >= x0 {
                let rhs = 0.4 * x / l;
                t.push(Violation {
                    x,
                    y,
                    lhs: count as f64,
                    rhs,
                    margin: count as f64 - rhs,
                });
            }
            t
        })
        .collect();
    let t = tallies.into_iter().fold(Tally::new(), Tally::merge);
    let note = format!("primes y in [{y_min}, {y_max:.1}], x >= max(y^1.5, {x_min})");
    Ok(t.report("lower-0.4", None, None, start, Some(note)))
}

/// Least prime factor for `0..=n`; `u32::MAX` stands for 1 (no factor).
pub fn least_prime_factors(n: usize) -> Vec<u32> {
    let mut lpf = vec![0u32; n + 1];
    if n >= 1 {
        lpf[1] = u32::MAX;
    }
    for i in 2..=n {
        if lpf[i] == 0 {
            lpf[i] = i as u32;
            let mut j = i.saturating_mul(i);
            while j <= n {
                if lpf[j] == 0 {
                    lpf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    lpf
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowMin {
    pub lo: f64,
    pub hi: f64,
    pub floor: f64,
    pub min: f64,
    pub at: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FinalAssembly {
    pub big_m: f64,
    pub m_at: f64,
    pub small_m: f64,
    pub small_m_at: f64,
    pub windows: Vec<WindowMin>,
    /// the three bounds on D(x, y) for 11 ≤ y ≤ 2657, as upper-bound records
    pub assembly: Vec<Violation>,
}

/// `(li(z) − π(z))/(√z log z)` maximised over real `z ∈ [11, 2657]`.
/// On each `[n, n+1)` π is constant, so the interval is sampled and the best
/// one refined by golden section. The supremum over the interval includes
/// the left limit at `n + 1`, which is evaluated with π(n).
fn big_m(pt: &PrimeTable, q: &QuadratureSpec) -> Result<(f64, f64)> {
    let f = |z: f64, pi: f64| -> f64 {
        let li = log_integral(z, q).unwrap_or(f64::NAN);
        (li - pi) / (z.sqrt() * z.ln())
    };
    let mut best = (f64::NEG_INFINITY, 11.0);
    let mut best_n = 11u64;
    for n in 11u64..2657 {
        let pi = pt.pi_u64(n)? as f64;
        for j in 0..=16 {
            // j = 16 is the left limit at n + 1, with π still π(n)
            let z = n as f64 + j as f64 / 16.0;
            let v = f(z, pi);
            if v > best.0 {
                best = (v, z);
                best_n = n;
            }
        }
    }
    let pi = pt.pi_u64(best_n)? as f64;
    let (z, v) = crate::specfun::roots::golden_min(|z| -f(z, pi), best_n as f64, (best_n + 1) as f64, 1e-10);
    if -v > best.0 {
        best = (-v, z);
    }
    // z = 2657 itself
    let v = f(2657.0, pt.pi_u64(2657)? as f64);
    if v > best.0 {
        best = (v, 2657.0);
    }
    Ok(best)
}

/// min of `e^γ log z Q(z)` over `z` in a window: Q is constant between
/// primes, so candidates are the left end and each prime inside.
fn mertens_window_min(pt: &PrimeTable, lo: f64, hi: f64, hi_inclusive: bool) -> Result<(f64, f64)> {
    let g = |z: f64, q: f64| EXP_EULER_GAMMA * z.ln() * q;
    let mut best = (g(lo, mertens_product(lo, pt)?), lo);
    let mut q = mertens_product(lo, pt)?;
    for &p in pt.primes_in(lo, hi)? {
        let z = p as f64;
        if !hi_inclusive && z >= hi {
            break;
        }
        q *= 1.0 - 1.0 / z;
        let v = g(z, q);
        if v < best.0 {
            best = (v, z);
        }
    }
    Ok(best)
}

pub fn final_assembly(pt: &PrimeTable, q: &QuadratureSpec) -> Result<FinalAssembly> {
    let (big_m, m_at) = big_m(pt, q)?;
    let (small_m, small_m_at) = mertens_window_min(pt, 11.0, 2657.0, true)?;
    let mut windows = Vec::new();
    for &(lo, hi, floor, incl) in &M_Y_WINDOWS {
        let (min, at) = mertens_window_min(pt, lo, hi, incl)?;
        windows.push(WindowMin { lo, hi, floor, min, at });
    }
    let (_, m0) = omega_global_max()?;
    let mut assembly = Vec::new();
    // the y-dependence is monotone between integers except through the
    // smooth terms, so a 1/64 grid is ample
    let mut y = 11.0f64;
    while y <= 2657.0 {
        let l = y.ln();
        let target = MAIN_RH * l * l / y.sqrt();
        let near = (1.0 - small_m) * (1.0 - 1.0 / y) + big_m * l * l / y.sqrt() + l / y;
        assembly.push(upper(y, y, near, target));
        let far = 0.6 - small_m / 2.0 * (1.0 - 1.0 / y);
        assembly.push(upper(y, y, far, target));
        // lower side: (0.4 − M₀) > −target
        assembly.push(upper(y, y, m0 - 0.4, target));
        y += 1.0 / 64.0;
    }
    Ok(FinalAssembly {
        big_m,
        m_at,
        small_m,
        small_m_at,
        windows,
        assembly,
    })
}

#[cfg(test)]
#[path = "../tests/common/oracle.rs"]
mod oracle;
