//! Sums and products over primes, and the Bonferroni pre-sieve bounds.

use serde::{Deserialize, Serialize};

use super::primes::PrimeTable;
use crate::numeric::CompensatedSum;
use crate::{Error, Result};

/// Q(y) = ∏_{p ≤ y} (1 − 1/p), accumulated as a compensated sum of logs.
pub fn mertens_product(y: f64, pt: &PrimeTable) -> Result<f64> {
    if y < 2.0 {
        return Ok(1.0);
    }
    Ok(log_mertens(y, pt)?.exp())
}

/// ln Q(y).
pub fn log_mertens(y: f64, pt: &PrimeTable) -> Result<f64> {
    if y < 2.0 {
        return Ok(0.0);
    }
    let ps = pt.primes_in(1.0, y)?;
    Ok(ps
        .iter()
        .map(|&p| (-1.0 / p as f64).ln_1p())
        .collect::<CompensatedSum>()
        .value())
}

/// Σ 1/p over primes in `(lo, hi]`.
pub fn reciprocal_prime_sum(lo: f64, hi: f64, pt: &PrimeTable) -> Result<f64> {
    if !(lo >= 2.0) {
        return Err(Error::domain("lo", lo, ">= 2"));
    }
    if !(hi >= lo) {
        return Err(Error::domain("hi", hi, ">= lo"));
    }
    Ok(pt
        .primes_in(lo, hi)?
        .iter()
        .map(|&p| 1.0 / p as f64)
        .collect::<CompensatedSum>()
        .value())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bonferroni {
    pub y: f64,
    pub a: f64,
    pub b: f64,
    /// `b/(a − 0.4/log y)`, or `+∞` when the denominator is not positive.
    pub threshold: f64,
}

fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// a(y), b(y) and the resulting x-threshold for `7 ≤ y ≤ 602`.
///
/// `a(y) = (4/15)(1 − e₁ + e₂ − e₃)` with `e_j` the elementary symmetric
/// functions of `{1/p : 5 < p ≤ y}`, obtained from power sums by Newton's
/// identities.
pub fn bonferroni_bounds(y: f64, pt: &PrimeTable) -> Result<Bonferroni> {
    if !(7.0..=602.0).contains(&y) {
        return Err(Error::domain("y", y, "in [7, 602]"));
    }
    let ps = pt.primes_in(5.0, y)?;
    let mut p1 = CompensatedSum::new();
    let mut p2 = CompensatedSum::new();
    let mut p3 = CompensatedSum::new();
    for &p in ps {
        let r = 1.0 / p as f64;
        p1.add(r);
        p2.add(r * r);
        p3.add(r * r * r);
    }
    let (p1, p2, p3) = (p1.value(), p2.value(), p3.value());
    let e1 = p1;
    let e2 = (e1 * p1 - p2) / 2.0;
    let e3 = (e2 * p1 - e1 * p2 + p3) / 3.0;
    let a = 4.0 / 15.0 * (1.0 - e1 + e2 - e3);
    let m = pt.pi(y)? - 3;
    let b = 14.0 / 15.0 * (0..=3).map(|j| binomial(m, j)).sum::<f64>();
    let denom = a - 0.4 / y.ln();
    let threshold = if denom > 0.0 { b / denom } else { f64::INFINITY };
    Ok(Bonferroni { y, a, b, threshold })
}

/// The largest threshold over `7 ≤ y ≤ 602`. Between consecutive primes a and
/// b are constant while `0.4/log y` falls, so the maximum sits at a prime.
pub fn bonferroni_max_threshold(pt: &PrimeTable) -> Result<Bonferroni> {
    let mut best: Option<Bonferroni> = None;
    for &p in pt.primes_in(6.0, 602.0)? {
        let b = bonferroni_bounds(p as f64, pt)?;
        if best.map(|x| b.threshold > x.threshold).unwrap_or(true) {
            best = Some(b);
        }
    }
    best.ok_or_else(|| Error::domain("prime table limit", pt.limit() as f64, ">= 602"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::OnceLock;

    fn table() -> &'static PrimeTable {
        static T: OnceLock<PrimeTable> = OnceLock::new();
        T.get_or_init(|| PrimeTable::primes_up_to(1_000_000).unwrap())
    }

    #[test]
    fn mertens_examples() {
        let pt = table();
        assert_eq!(mertens_product(2.0, pt).unwrap(), 0.5);
        assert!((mertens_product(10.0, pt).unwrap() - 8.0 / 35.0).abs() < 1e-15);
        assert_eq!(mertens_product(1.5, pt).unwrap(), 1.0);
        let y = 1e6f64;
        assert!(crate::EXP_EULER_GAMMA * y.ln() * mertens_product(y, pt).unwrap() < 1.0);
    }

    #[test]
    fn mertens_matches_plain_product() {
        let pt = table();
        let mut prod = 1.0f64;
        for &p in pt.primes_in(1.0, 5000.0).unwrap() {
            prod *= 1.0 - 1.0 / p as f64;
        }
        assert!((mertens_product(5000.0, pt).unwrap() / prod - 1.0).abs() < 1e-13);
    }

    #[test]
    fn reciprocal_sums() {
        let pt = table();
        assert!((reciprocal_prime_sum(2.0, 3.0, pt).unwrap() - 1.0 / 3.0).abs() < 1e-16);
        let direct: f64 = [11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97]
            .iter()
            .map(|&p| 1.0 / p as f64)
            .sum();
        let s = reciprocal_prime_sum(10.0, 100.0, pt).unwrap();
        assert!((s - direct).abs() < 1e-15);
        assert!((s - 0.626_626_724_858_394_8).abs() < 1e-15);
        assert!(reciprocal_prime_sum(1.0, 3.0, pt).is_err());
        assert!(reciprocal_prime_sum(5.0, 3.0, pt).is_err());
    }

    #[test]
    fn bonferroni_at_seven() {
        let b = bonferroni_bounds(7.0, table()).unwrap();
        assert!((b.a - 8.0 / 35.0).abs() < 1e-15);
        assert!((b.b - 28.0 / 15.0).abs() < 1e-15);
        assert!(bonferroni_bounds(6.9, table()).is_err());
        assert!(bonferroni_bounds(603.0, table()).is_err());
    }

    #[test]
    fn bonferroni_matches_direct_inclusion_exclusion() {
        // a(y)·15/4 = Σ_{d | P₅(y), ν(d) ≤ 3} μ(d)/d by brute force
        let pt = table();
        let y = 61.0;
        let ps: Vec<f64> = pt.primes_in(5.0, y).unwrap().iter().map(|&p| p as f64).collect();
        let n = ps.len();
        let mut s = 1.0;
        for i in 0..n {
            s -= 1.0 / ps[i];
            for j in i + 1..n {
                s += 1.0 / (ps[i] * ps[j]);
                for k in j + 1..n {
                    s -= 1.0 / (ps[i] * ps[j] * ps[k]);
                }
            }
        }
        let b = bonferroni_bounds(y, pt).unwrap();
        assert!((b.a - 4.0 / 15.0 * s).abs() < 1e-15);
    }

    #[test]
    fn max_threshold() {
        let m = bonferroni_max_threshold(table()).unwrap();
        assert!((m.threshold / 13_160_748.0 - 1.0).abs() < 1e-3, "{m:?}");
    }
}
