//! Independent reference implementations used only by tests.
#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

/// li(2) to 30 digits.
pub const LI_2: f64 = 1.045_163_780_117_492_784_844_588_889;

/// Double-exponential (tanh-sinh) quadrature on a finite interval.
/// Tolerates integrable endpoint singularities.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mut h = 0.5f64;
    let mut prev = f64::NAN;
    let mut est = 0.0;
    for level in 0..12 {
        let step = if level == 0 { 1 } else { 2 };
        let start = if level == 0 { 0 } else { 1 };
        let mut s = 0.0;
        let mut k = start;
        loop {
            let t = k as f64 * h;
            let u = FRAC_PI_2 * t.sinh();
            let e = (2.0 * u).exp();
            if !e.is_finite() {
                break;
            }
            let delta = 2.0 / (1.0 + e);
            let w = FRAC_PI_2 * t.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e));
            if delta * half == 0.0 || w < 1e-300 {
                break;
            }
            let xr = b - half * delta;
            let xl = a + half * delta;
            if k == 0 {
                s += w * f(a + half);
            } else {
                s += w * (f(xl) + f(xr));
            }
            k += step;
        }
        est = if level == 0 { s * h } else { 0.5 * est + s * h };
        if level > 3 && (est - prev).abs() <= 1e-15 * est.abs() {
            break;
        }
        prev = est;
        h *= 0.5;
    }
    est * half
}

/// Ramanujan's series for li(x), x > 1.
pub fn li_ramanujan(x: f64) -> f64 {
    const GAMMA: f64 = 0.577_215_664_901_532_9;
    let l = x.ln();
    let mut sum = 0.0;
    let mut fact_pow = 1.0; // (ln x)^n / (n! 2^{n-1})
    let mut inner = 0.0;
    for n in 1..400 {
        let nf = n as f64;
        fact_pow *= l / nf;
        if n > 1 {
            fact_pow /= 2.0;
        }
        if (n - 1) % 2 == 0 {
            inner += 1.0 / nf;
        }
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        let term = sign * fact_pow * inner;
        sum += term;
        if n > 10 && term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    GAMMA + l.ln() + x.sqrt() * sum
}

pub fn is_prime_trial(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn primes_trial(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| is_prime_trial(k)).collect()
}

pub fn least_prime_factor(n: u64) -> u64 {
    if n < 2 {
        return u64::MAX;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return d;
        }
        d += 1;
    }
    n
}

/// Φ(x, y) by checking every n ≤ x.
pub fn phi_brute(x: f64, y: f64) -> u64 {
    let n = x.floor() as u64;
    (1..=n).filter(|&k| (least_prime_factor(k) as f64) > y).count() as u64
}
