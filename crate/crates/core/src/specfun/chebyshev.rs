//! Chebyshev series on a bounded interval.
//!
//! Coefficients are stored for `p(t) = Σ a_k T_k(t)` with `t ∈ [-1, 1]`; the
//! map from `x ∈ [lo, hi]` is affine. No halving convention on `a_0`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChebSeries {
    pub lo: f64,
    pub hi: f64,
    pub coeffs: Vec<f64>,
}

/// Chebyshev–Lobatto nodes `cos(πj/n)` for `j = 0..=n`, in `[-1, 1]`.
pub fn lobatto_nodes(n: usize) -> Vec<f64> {
    (0..=n).map(|j| (PI * j as f64 / n as f64).cos()).collect()
}

impl ChebSeries {
    pub fn constant(lo: f64, hi: f64, c: f64) -> Self {
        Self {
            lo,
            hi,
            coeffs: vec![c],
        }
    }

    /// Interpolates `f` at the `n + 1` Lobatto points of `[lo, hi]`.
    pub fn interpolate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, n: usize) -> Self {
        assert!(n >= 1);
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let vals: Vec<f64> = lobatto_nodes(n)
            .iter()
            .map(|&t| f(mid + half * t))
            .collect();
        Self::from_lobatto_values(&vals, lo, hi)
    }

    /// Coefficients from values at the Lobatto points (DCT-I).
    pub fn from_lobatto_values(vals: &[f64], lo: f64, hi: f64) -> Self {
        let n = vals.len() - 1;
        let nf = n as f64;
        let mut coeffs = vec![0.0; n + 1];
        for (k, c) in coeffs.iter_mut().enumerate() {
            let mut s = 0.0;
            for (j, &v) in vals.iter().enumerate() {
                let w = if j == 0 || j == n { 0.5 } else { 1.0 };
                // cos(πjk/n) through the reduced index keeps the argument small.
                let m = (j * k) % (2 * n);
                s += w * v * (PI * m as f64 / nf).cos();
            }
            let scale = if k == 0 || k == n { 1.0 / nf } else { 2.0 / nf };
            *c = s * scale;
        }
        Self { lo, hi, coeffs }
    }

    #[inline]
    pub fn to_unit(&self, x: f64) -> f64 {
        (2.0 * x - self.lo - self.hi) / (self.hi - self.lo)
    }

    /// Clenshaw recurrence at `x ∈ [lo, hi]`.
    pub fn eval(&self, x: f64) -> f64 {
        clenshaw(&self.coeffs, self.to_unit(x))
    }

    /// Antiderivative in `x`, vanishing at `lo`.
    pub fn antiderivative(&self) -> Self {
        let a = &self.coeffs;
        let n = a.len();
        let get = |k: usize| if k < n { a[k] } else { 0.0 };
        let mut c = vec![0.0; n + 1];
        for k in 1..=n {
            c[k] = if k == 1 {
                get(0) - 0.5 * get(2)
            } else {
                (get(k - 1) - get(k + 1)) / (2.0 * k as f64)
            };
        }
        let scale = 0.5 * (self.hi - self.lo);
        for v in c.iter_mut() {
            *v *= scale;
        }
        // T_k(-1) = (-1)^k
        let at_lo: f64 = c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, v)| if k % 2 == 0 { *v } else { -*v })
            .sum();
        c[0] = -at_lo;
        Self {
            lo: self.lo,
            hi: self.hi,
            coeffs: c,
        }
    }

    /// Derivative in `x`.
    pub fn derivative(&self) -> Self {
        let a = &self.coeffs;
        let n = a.len();
        if n <= 1 {
            return Self::constant(self.lo, self.hi, 0.0);
        }
        // Backward recurrence in the halved-c0 convention.
        let mut d = vec![0.0; n + 1];
        for k in (1..n).rev() {
            d[k - 1] = d[k + 1] + 2.0 * k as f64 * a[k];
        }
        d[0] *= 0.5;
        d.truncate(n - 1);
        let scale = 2.0 / (self.hi - self.lo);
        for v in d.iter_mut() {
            *v *= scale;
        }
        Self {
            lo: self.lo,
            hi: self.hi,
            coeffs: d,
        }
    }

    /// Sum of absolute values of the last `m` coefficients.
    pub fn tail_magnitude(&self, m: usize) -> f64 {
        self.coeffs.iter().rev().take(m).map(|c| c.abs()).sum()
    }
}

pub fn clenshaw(coeffs: &[f64], t: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &c in coeffs.iter().skip(1).rev() {
        let b0 = 2.0 * t * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    let c0 = coeffs.first().copied().unwrap_or(0.0);
    t * b1 - b2 + c0
}

/// Interpolant of `f` with degree doubled from `start` until the values at the
/// new (midpoint) Lobatto nodes agree to `tol`, or `max_degree` is reached.
/// Returns the series and the last observed discrepancy.
pub fn adaptive_interpolate<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    start: usize,
    max_degree: usize,
    tol: f64,
) -> (ChebSeries, f64) {
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    let mut n = start.max(2);
    let mut vals: Vec<f64> = lobatto_nodes(n).iter().map(|&t| f(mid + half * t)).collect();
    loop {
        let series = ChebSeries::from_lobatto_values(&vals, lo, hi);
        // Doubling keeps the old nodes at even indices.
        let fine = 2 * n;
        let mut fine_vals = vec![0.0; fine + 1];
        let mut err: f64 = 0.0;
        for j in 0..=fine {
            if j % 2 == 0 {
                fine_vals[j] = vals[j / 2];
            } else {
                let t = (PI * j as f64 / fine as f64).cos();
                let v = f(mid + half * t);
                fine_vals[j] = v;
                err = err.max((clenshaw(&series.coeffs, t) - v).abs());
            }
        }
        if err <= tol || fine > max_degree {
            return (series, err);
        }
        n = fine;
        vals = fine_vals;
    }
}
