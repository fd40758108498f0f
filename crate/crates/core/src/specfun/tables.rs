//! Piecewise Chebyshev tables for ω and ρ, built by the method of steps.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::chebyshev::{adaptive_interpolate, clenshaw, lobatto_nodes, ChebSeries};
use super::quadrature::gk15;
use crate::{Error, Result, EXP_NEG_EULER_GAMMA};

pub const TABLE_FORMAT_VERSION: u32 = 1;
const START_DEGREE: usize = 8;
const MAX_DEGREE: usize = 32;
/// Per-interval relative tolerance for ρ (about what 33 nodes deliver).
const LOCAL_REL_TOL: f64 = 5e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableKind {
    Buchstab,
    Dickman,
}

/// One unit interval. For ω the polynomial is the value itself; for ρ it is
/// `ln ρ(u) − log_scale`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub log_scale: f64,
    pub coeffs: Vec<f64>,
}

impl Interval {
    fn series(&self) -> ChebSeries {
        ChebSeries {
            lo: self.lo,
            hi: self.hi,
            coeffs: self.coeffs.clone(),
        }
    }

    #[inline]
    fn scaled(&self, u: f64) -> f64 {
        let t = (2.0 * u - self.lo - self.hi) / (self.hi - self.lo);
        clenshaw(&self.coeffs, t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseFunctionTable {
    pub format_version: u32,
    pub kind: TableKind,
    pub u_max: f64,
    pub tol: f64,
    pub tail_value: f64,
    pub error_bound: f64,
    pub intervals: Vec<Interval>,
}

impl PiecewiseFunctionTable {
    fn start(&self) -> f64 {
        self.intervals[0].lo
    }

    fn locate(&self, u: f64) -> &Interval {
        let idx = ((u - self.start()).floor() as usize).min(self.intervals.len() - 1);
        &self.intervals[idx]
    }

    /// Raw table evaluation on the tiled range; no closed forms, no tail.
    pub fn eval_raw(&self, u: f64) -> f64 {
        let iv = self.locate(u);
        match self.kind {
            TableKind::Buchstab => iv.scaled(u),
            TableKind::Dickman => (iv.scaled(u) + iv.log_scale).exp(),
        }
    }

    /// `ln f(u)` from the table, valid where `f > 0` on the tiled range.
    pub fn eval_raw_ln(&self, u: f64) -> f64 {
        let iv = self.locate(u);
        match self.kind {
            TableKind::Buchstab => iv.scaled(u).ln(),
            TableKind::Dickman => iv.scaled(u) + iv.log_scale,
        }
    }

    pub fn covers(&self, u: f64) -> bool {
        u >= self.start() && u <= self.u_max
    }

    /// `ln ρ(u)` for `u > u_max`, continuing the recursion from the last stored
    /// interval without storing anything.
    pub fn dickman_ln_beyond(&self, u: f64) -> f64 {
        debug_assert_eq!(self.kind, TableKind::Dickman);
        let last = self.intervals.last().expect("nonempty table");
        let mut prev = last.series();
        let mut prev_ls = last.log_scale;
        let mut k = last.hi;
        loop {
            let (next, ls, _) = dickman_step(&prev, prev_ls, k, LOCAL_REL_TOL);
            if u <= k + 1.0 {
                return next.eval(u) + ls;
            }
            prev = next;
            prev_ls = ls;
            k += 1.0;
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let t: Self = serde_json::from_str(s)?;
        if t.format_version != TABLE_FORMAT_VERSION {
            return Err(Error::Cache(format!(
                "table format version {} (expected {TABLE_FORMAT_VERSION})",
                t.format_version
            )));
        }
        if t.intervals.is_empty() {
            return Err(Error::Cache("empty table".into()));
        }
        Ok(t)
    }
}

/// The ω and ρ tables built together.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tables {
    pub omega: PiecewiseFunctionTable,
    pub rho: PiecewiseFunctionTable,
}

fn check_build_args(u_max: f64, tol: f64) -> Result<usize> {
    if !(u_max >= 4.0) || !u_max.is_finite() {
        return Err(Error::domain("u_max", u_max, ">= 4"));
    }
    if !(tol >= 1e-12) || !tol.is_finite() {
        return Err(Error::domain("tol", tol, ">= 1e-12"));
    }
    Ok(u_max.ceil() as usize)
}

fn interval_from(series: ChebSeries, log_scale: f64) -> Interval {
    Interval {
        lo: series.lo,
        hi: series.hi,
        log_scale,
        coeffs: series.coeffs,
    }
}

/// Rounding allowance for a Clenshaw evaluation of the given coefficients.
fn eval_rounding(coeffs: &[f64]) -> f64 {
    let s: f64 = coeffs.iter().map(|c| c.abs()).sum();
    4.0 * coeffs.len() as f64 * f64::EPSILON * s
}

/// Builds the Buchstab table on `[1, ceil(u_max)]`.
///
/// On `[k, k+1]`, `u·ω(u) = k·ω(k) + ∫_k^u ω(t−1) dt`; the lag polynomial is
/// integrated exactly and the quotient by `u` is re-interpolated.
pub fn build_omega(u_max: f64, tol: f64) -> Result<PiecewiseFunctionTable> {
    let top = check_build_args(u_max, tol)?;
    let n_int = top - 1;
    let local_tol = tol / (2.0 * n_int as f64);
    let mut intervals = Vec::with_capacity(n_int);
    let (first, e0) = adaptive_interpolate(|u| 1.0 / u, 1.0, 2.0, START_DEGREE, MAX_DEGREE, local_tol);
    if e0 > local_tol {
        return Err(Error::TableNotConverged { lo: 1.0, hi: 2.0, error: e0 });
    }
    let mut total = e0 + eval_rounding(&first.coeffs);
    let mut prev = first.clone();
    intervals.push(interval_from(first, 0.0));
    for k in 2..top {
        let kf = k as f64;
        let lag = ChebSeries {
            lo: kf,
            hi: kf + 1.0,
            coeffs: prev.coeffs.clone(),
        };
        let anti = lag.antiderivative();
        let wk = prev.eval(kf);
        let (next, err) = adaptive_interpolate(
            |u| (kf * wk + anti.eval(u)) / u,
            kf,
            kf + 1.0,
            START_DEGREE,
            MAX_DEGREE,
            local_tol,
        );
        if err > local_tol {
            return Err(Error::TableNotConverged {
                lo: kf,
                hi: kf + 1.0,
                error: err,
            });
        }
        total += err + eval_rounding(&next.coeffs);
        prev = next.clone();
        intervals.push(interval_from(next, 0.0));
    }
    if total > tol {
        return Err(Error::TableNotConverged {
            lo: 1.0,
            hi: top as f64,
            error: total,
        });
    }
    Ok(PiecewiseFunctionTable {
        format_version: TABLE_FORMAT_VERSION,
        kind: TableKind::Buchstab,
        u_max: top as f64,
        tol,
        tail_value: EXP_NEG_EULER_GAMMA,
        error_bound: total,
        intervals,
    })
}

/// One Dickman step onto `[k, k+1]` from the log-series on `[k−1, k]`.
///
/// Uses `u·ρ(u) = ∫_{u−1}^{k} ρ + ∫_k^u ρ`. Every term is positive, so relative
/// accuracy survives the step; the implicit second integral is resolved by
/// fixed-point iteration at the interpolation nodes (contraction ≤ 1/(k+1)).
/// Series values are `ln ρ(u) − log_scale` with `log_scale = ln ρ(k)`.
/// Returns the series, its log-scale and the node-doubling error (in `ln ρ`).
fn dickman_step(prev: &ChebSeries, prev_ls: f64, k: f64, tol: f64) -> (ChebSeries, f64, f64) {
    let ls = prev_ls + prev.eval(k);
    let shift = prev_ls - ls;
    let head = |u: f64| -> f64 {
        let lo = u - 1.0;
        if lo >= k {
            return 0.0;
        }
        // The integrand is entire and the range at most one unit long; two
        // fixed Kronrod panels are already at rounding level.
        let f = |t: f64| (prev.eval(t) + shift).exp();
        let m = 0.5 * (lo + k);
        gk15(&f, lo, m).0 + gk15(&f, m, k).0
    };
    let (lo, hi) = (k, k + 1.0);
    let half = 0.5;
    let mid = k + 0.5;
    let mut n = START_DEGREE;
    loop {
        let nodes: Vec<f64> = lobatto_nodes(n).iter().map(|&t| mid + half * t).collect();
        let heads: Vec<f64> = nodes.iter().map(|&u| head(u)).collect();
        // Start from ρ ≡ ρ(k) on the interval.
        let mut vals = vec![0.0; n + 1];
        let mut tail = ChebSeries::constant(lo, hi, 0.0);
        for _ in 0..200 {
            let exps: Vec<f64> = vals.iter().map(|v: &f64| v.exp()).collect();
            tail = ChebSeries::from_lobatto_values(&exps, lo, hi).antiderivative();
            let mut change: f64 = 0.0;
            for (j, &u) in nodes.iter().enumerate() {
                let v = ((heads[j] + tail.eval(u)) / u).ln();
                change = change.max((v - vals[j]).abs());
                vals[j] = v;
            }
            if change <= 4.0 * f64::EPSILON {
                break;
            }
        }
        let series = ChebSeries::from_lobatto_values(&vals, lo, hi);
        let fine = 2 * n;
        let mut err: f64 = 0.0;
        for j in (1..fine).step_by(2) {
            let u = mid + half * (std::f64::consts::PI * j as f64 / fine as f64).cos();
            let direct = ((head(u) + tail.eval(u)) / u).ln();
            err = err.max((series.eval(u) - direct).abs());
        }
        if err <= tol || fine > MAX_DEGREE || err.is_nan() {
            return (series, ls, err);
        }
        n = fine;
    }
}

/// Builds the Dickman table on `[0, ceil(u_max)]`, stored as `ln ρ` per interval.
pub fn build_rho(u_max: f64, tol: f64) -> Result<PiecewiseFunctionTable> {
    let top = check_build_args(u_max, tol)?;
    let mut intervals = Vec::with_capacity(top);
    let unit = ChebSeries::constant(0.0, 1.0, 0.0);
    intervals.push(interval_from(unit.clone(), 0.0));
    let mut prev = unit;
    let mut prev_ls = 0.0;
    // Relative error carried into the current interval.
    let mut rel_err = 0.0f64;
    let mut worst = 0.0f64;
    for k in 1..top {
        let kf = k as f64;
        // Local tolerance is relative (in ln ρ) so that tiny values keep their digits.
        let (next, ls, err) = dickman_step(&prev, prev_ls, kf, LOCAL_REL_TOL);
        if !(err <= LOCAL_REL_TOL) {
            return Err(Error::TableNotConverged {
                lo: kf,
                hi: kf + 1.0,
                error: err,
            });
        }
        rel_err += err + eval_rounding(&next.coeffs);
        // ρ ≤ ρ(k) on [k, k+1]
        worst = worst.max(ls.exp() * rel_err * (1.0 + rel_err));
        prev = next.clone();
        prev_ls = ls;
        intervals.push(interval_from(next, ls));
    }
    if worst > tol {
        return Err(Error::TableNotConverged {
            lo: 0.0,
            hi: top as f64,
            error: worst,
        });
    }
    Ok(PiecewiseFunctionTable {
        format_version: TABLE_FORMAT_VERSION,
        kind: TableKind::Dickman,
        u_max: top as f64,
        tol,
        tail_value: 0.0,
        error_bound: worst,
        intervals,
    })
}

pub fn build_tables(u_max: f64, tol: f64) -> Result<Tables> {
    Ok(Tables {
        omega: build_omega(u_max, tol)?,
        rho: build_rho(u_max, tol)?,
    })
}

impl Tables {
    pub fn cache_file(dir: &Path, u_max: f64, tol: f64) -> PathBuf {
        dir.join(format!(
            "tables-v{TABLE_FORMAT_VERSION}-u{}-tol{:e}.json",
            u_max.ceil(),
            tol
        ))
    }

    /// Loads a cached table pair if its version and stamp match; otherwise
    /// builds and (best effort) writes the cache.
    pub fn load_or_build(dir: &Path, u_max: f64, tol: f64) -> Result<Self> {
        let path = Self::cache_file(dir, u_max, tol);
        if let Ok(text) = std::fs::read_to_string(&path) {
            if let Ok(t) = Self::from_json(&text) {
                if t.omega.u_max == u_max.ceil() && t.omega.tol == tol && t.rho.tol == tol {
                    return Ok(t);
                }
            }
        }
        let t = build_tables(u_max, tol)?;
        std::fs::create_dir_all(dir)?;
        std::fs::write(&path, serde_json::to_string(&t)?)?;
        Ok(t)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let t: Self = serde_json::from_str(s)?;
        for tab in [&t.omega, &t.rho] {
            if tab.format_version != TABLE_FORMAT_VERSION || tab.intervals.is_empty() {
                return Err(Error::Cache("stale or malformed table cache".into()));
            }
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_tiles_unit_intervals() {
        let t = build_omega(10.0, 1e-12).unwrap();
        assert_eq!(t.intervals.len(), 9);
        for w in t.intervals.windows(2) {
            assert_eq!(w[0].hi, w[1].lo);
        }
        assert_eq!(t.intervals[0].lo, 1.0);
        assert_eq!(t.intervals.last().unwrap().hi, 10.0);
        assert!(t.error_bound <= 1e-12);
    }

    #[test]
    fn omega_steps_match_closed_form_on_2_3() {
        let t = build_omega(6.0, 1e-12).unwrap();
        for i in 0..=50 {
            let u = 2.0 + i as f64 / 50.0;
            let exact = ((u - 1.0).ln() + 1.0) / u;
            assert!((t.eval_raw(u) - exact).abs() < 1e-13, "u={u}");
        }
    }

    #[test]
    fn rho_tiles_from_zero() {
        let t = build_rho(8.0, 1e-12).unwrap();
        assert_eq!(t.intervals[0].lo, 0.0);
        assert_eq!(t.intervals.len(), 8);
        for i in 0..=40 {
            let u = 1.0 + i as f64 / 40.0;
            assert!((t.eval_raw(u) - (1.0 - u.ln())).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(build_tables(3.0, 1e-10).is_err());
        assert!(build_tables(10.0, 1e-13).is_err());
    }

    fn eval_iv(tab: &PiecewiseFunctionTable, iv: &Interval, u: f64) -> f64 {
        match tab.kind {
            TableKind::Buchstab => iv.scaled(u),
            TableKind::Dickman => (iv.scaled(u) + iv.log_scale).exp(),
        }
    }

    #[test]
    fn continuity_across_breakpoints() {
        let t = build_tables(20.0, 1e-12).unwrap();
        for tab in [&t.omega, &t.rho] {
            for w in tab.intervals.windows(2) {
                let left = eval_iv(tab, &w[0], w[0].hi);
                let right = eval_iv(tab, &w[1], w[1].lo);
                assert!((left - right).abs() <= tab.error_bound.max(1e-15), "{:?} at {}", tab.kind, w[0].hi);
            }
        }
    }

    #[test]
    fn json_round_trip_and_version_check() {
        let t = build_tables(6.0, 1e-10).unwrap();
        let s = serde_json::to_string(&t).unwrap();
        let back = Tables::from_json(&s).unwrap();
        assert_eq!(back, t);
        let stale = s.replacen("\"format_version\":1", "\"format_version\":0", 1);
        assert!(Tables::from_json(&stale).is_err());
    }

    #[test]
    fn cache_is_reused() {
        let dir = tempfile::tempdir().unwrap();
        let a = Tables::load_or_build(dir.path(), 8.0, 1e-11).unwrap();
        assert!(Tables::cache_file(dir.path(), 8.0, 1e-11).exists());
        let b = Tables::load_or_build(dir.path(), 8.0, 1e-11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rho_beyond_table_continues_recursion() {
        let small = build_rho(10.0, 1e-12).unwrap();
        let big = build_rho(14.0, 1e-12).unwrap();
        for &u in &[10.5, 12.0, 13.7] {
            let a = small.dickman_ln_beyond(u);
            let b = big.eval_raw_ln(u);
            assert!((a - b).abs() < 1e-10, "u={u}: {a} vs {b}");
        }
    }
}
