//! Exact counts of y-rough integers.

use std::num::NonZeroUsize;

use lru::LruCache;
use serde::{Deserialize, Serialize};

use super::primes::PrimeTable;
use crate::{Error, Result};

/// A point `(x, y)` at which Φ is requested.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoughCountQuery {
    pub x: f64,
    pub y: f64,
}

impl RoughCountQuery {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x >= 1.0) || !x.is_finite() {
            return Err(Error::domain("x", x, ">= 1"));
        }
        if !(y > 1.0) || !y.is_finite() {
            return Err(Error::domain("y", y, "> 1"));
        }
        Ok(Self { x, y })
    }

    pub fn u(&self) -> f64 {
        self.x.ln() / self.y.ln()
    }

    pub fn n(&self) -> u64 {
        self.x.floor() as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhiMethod {
    /// Direct below [`DIRECT_CUTOFF`], Legendre above.
    Auto,
    Direct,
    Legendre,
}

pub const DIRECT_CUTOFF: u64 = 10_000_000;

/// Memo and budget limits for the Legendre recursion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LegendreConfig {
    pub memo_bytes: usize,
    pub max_depth: usize,
    pub max_nodes: u64,
}

impl Default for LegendreConfig {
    fn default() -> Self {
        Self {
            memo_bytes: 64 << 20,
            max_depth: 4096,
            max_nodes: 2_000_000_000,
        }
    }
}

const WHEEL: [u64; 8] = [1, 7, 11, 13, 17, 19, 23, 29];
const SEGMENT_BYTES: usize = 1 << 20;

fn wheel_bit(r: u64) -> u8 {
    match r {
        1 => 0,
        7 => 1,
        11 => 2,
        13 => 3,
        17 => 4,
        19 => 5,
        23 => 6,
        29 => 7,
        _ => unreachable!("not a unit mod 30"),
    }
}

/// Φ for `y < 5` from the inclusion–exclusion over {2, 3}.
fn phi_tiny(n: u64, y: f64) -> u64 {
    if y < 2.0 {
        n
    } else if y < 3.0 {
        n - n / 2
    } else {
        n - n / 2 - n / 3 + n / 6
    }
}

/// Path (a): enumerate `[1, ⌊x⌋]` on a mod-30 wheel (one byte per 30 numbers,
/// segments of 2²⁰ bytes) and strike the multiples of every prime in `(5, y]`.
pub fn phi_direct(q: &RoughCountQuery, pt: &PrimeTable) -> Result<u64> {
    let n = q.n();
    if n > pt.limit() {
        return Err(Error::BeyondSieveLimit {
            what: "x on the direct path",
            value: q.x,
            limit: pt.limit(),
        });
    }
    if q.y < 5.0 {
        return Ok(phi_tiny(n, q.y));
    }
    if q.y >= q.x {
        return Ok(1);
    }
    let root = (n as f64).sqrt().floor() as u64;
    let sieve_top = (q.y.floor() as u64).min(root);
    let marking: Vec<u64> = pt
        .primes_in(5.0, sieve_top as f64)?
        .iter()
        .map(|&p| p as u64)
        .collect();
    // Primes in (√n, y] are never struck by smaller primes; remove them by count.
    let unsieved_primes = if (q.y.floor() as u64) > root {
        pt.pi_u64((q.y.floor() as u64).min(n))? - pt.pi_u64(root.max(5))?
    } else {
        0
    };
    let total_bytes = (n / 30 + 1) as usize;
    // For each prime and wheel residue r of the cofactor, the next byte index
    // and the bit of p·r.
    let mut next: Vec<[usize; 8]> = Vec::with_capacity(marking.len());
    let mut bit_of: Vec<[u8; 8]> = Vec::with_capacity(marking.len());
    for &p in &marking {
        let mut nb = [0usize; 8];
        let mut bb = [0u8; 8];
        for (k, &r) in WHEEL.iter().enumerate() {
            // cofactor q = r (first in its class, q ≥ 1)
            let m = p * r;
            nb[k] = (m / 30) as usize;
            bb[k] = wheel_bit(m % 30);
        }
        next.push(nb);
        bit_of.push(bb);
    }
    let mut count = 0u64;
    let mut seg = vec![0xFFu8; SEGMENT_BYTES];
    let mut base = 0usize;
    while base < total_bytes {
        let len = SEGMENT_BYTES.min(total_bytes - base);
        let s = &mut seg[..len];
        s.fill(0xFF);
        let end = base + len;
        for (pi, &p) in marking.iter().enumerate() {
            let step = p as usize;
            for k in 0..8 {
                let mut j = next[pi][k];
                let mask = !(1u8 << bit_of[pi][k]);
                while j < end {
                    s[j - base] &= mask;
                    j += step;
                }
                next[pi][k] = j;
            }
        }
        // trim numbers past n in the last byte
        if end == total_bytes {
            let last_base = 30 * (total_bytes as u64 - 1);
            let mut keep = 0u8;
            for &r in &WHEEL {
                if last_base + r <= n {
                    keep |= 1 << wheel_bit(r);
                }
            }
            s[len - 1] &= keep;
        }
        let chunks = s.chunks_exact(8);
        let rest = chunks.remainder();
        for c in chunks {
            count += u64::from_le_bytes(c.try_into().unwrap()).count_ones() as u64;
        }
        count += rest.iter().map(|b| b.count_ones() as u64).sum::<u64>();
        base = end;
    }
    Ok(count - unsieved_primes)
}

/// Φ restricted to the primorial wheels 2, 6, 30, 210, 2310, 30030.
struct SmallPhi {
    moduli: [u64; 7],
    totients: [u64; 7],
    /// `tables[a][r]` = #{1 ≤ m ≤ r : gcd(m, P_a) = 1}
    tables: Vec<Vec<u16>>,
}

impl SmallPhi {
    fn new() -> Self {
        const SMALL: [u64; 6] = [2, 3, 5, 7, 11, 13];
        let mut moduli = [1u64; 7];
        for a in 1..7 {
            moduli[a] = moduli[a - 1] * SMALL[a - 1];
        }
        let mut tables = vec![vec![0u16; 1]];
        let mut totients = [1u64; 7];
        for a in 1..7 {
            let m = moduli[a] as usize;
            let mut t = vec![0u16; m];
            let mut c = 0u16;
            for (r, slot) in t.iter_mut().enumerate() {
                if r > 0 && SMALL[..a].iter().all(|&p| r as u64 % p != 0) {
                    c += 1;
                }
                *slot = c;
            }
            totients[a] = c as u64;
            tables.push(t);
        }
        Self {
            moduli,
            totients,
            tables,
        }
    }

    fn phi(&self, x: u64, a: usize) -> u64 {
        if a == 0 {
            return x;
        }
        let m = self.moduli[a];
        (x / m) * self.totients[a] + self.tables[a][(x % m) as usize] as u64
    }
}

fn small_phi() -> &'static SmallPhi {
    static S: std::sync::OnceLock<SmallPhi> = std::sync::OnceLock::new();
    S.get_or_init(SmallPhi::new)
}

struct Legendre<'a> {
    pt: &'a PrimeTable,
    small: &'static SmallPhi,
    memo: Option<LruCache<(u64, u32), u64>>,
    cfg: LegendreConfig,
    nodes: u64,
}

impl Legendre<'_> {
    /// φ(x, a): integers in [1, x] free of the first `a` primes.
    fn phi(&mut self, x: u64, a: usize, depth: usize) -> Result<u64> {
        self.nodes += 1;
        if self.nodes > self.cfg.max_nodes {
            return Err(Error::WorkBudgetExceeded {
                limit: self.cfg.max_nodes,
            });
        }
        if depth > self.cfg.max_depth {
            return Err(Error::RecursionDepthExceeded {
                depth,
                limit: self.cfg.max_depth,
            });
        }
        if x == 0 {
            return Ok(0);
        }
        if a <= 6 {
            return Ok(self.small.phi(x, a));
        }
        let primes = self.pt.primes();
        let next_p = primes.get(a).map(|&p| p as u64);
        if let Some(p) = next_p {
            if x < p {
                return Ok(1);
            }
            if p * p > x && x <= self.pt.limit() {
                return Ok(self.pt.pi_unchecked(x) + 1 - a as u64);
            }
        }
        let key = (x, a as u32);
        if let Some(memo) = self.memo.as_mut() {
            if let Some(&v) = memo.get(&key) {
                return Ok(v);
            }
        }
        // φ(x, a) = φ(x, 6) − Σ_{6<i≤a} φ(⌊x/p_i⌋, i−1)
        let mut v = self.small.phi(x, 6) as i64;
        let mut i = 7;
        while i <= a {
            let p = primes[i - 1] as u64;
            if p * p > x {
                break;
            }
            v -= self.phi(x / p, i - 1, depth + 1)? as i64;
            i += 1;
        }
        // For p_i > √x the term is φ(⌊x/p_i⌋, i−1) = 1 while p_i ≤ x, else 0.
        if i <= a {
            let last = if x <= self.pt.limit() {
                a.min(self.pt.pi_unchecked(x) as usize)
            } else {
                a
            };
            if last >= i {
                v -= (last + 1 - i) as i64;
            }
        }
        let v = v as u64;
        if let Some(memo) = self.memo.as_mut() {
            memo.put(key, v);
        }
        Ok(v)
    }
}

/// Path (b): Legendre's recursion with a bounded LRU memo.
pub fn phi_legendre(q: &RoughCountQuery, pt: &PrimeTable, cfg: &LegendreConfig) -> Result<u64> {
    let n = q.n();
    if q.y >= pt.limit() as f64 + 1.0 {
        return Err(Error::BeyondSieveLimit {
            what: "y on the Legendre path",
            value: q.y,
            limit: pt.limit(),
        });
    }
    let a = pt.pi(q.y)? as usize;
    if a > 0 {
        let need = (n as f64).sqrt().floor() as u64;
        if need > pt.limit() && pt.nth(a + 1).is_none() {
            return Err(Error::BeyondSieveLimit {
                what: "sqrt(x) on the Legendre path",
                value: need as f64,
                limit: pt.limit(),
            });
        }
    }
    // One (u64, u32) → u64 entry costs about 48 bytes in the LRU map.
    let cap = NonZeroUsize::new(cfg.memo_bytes / 48);
    let mut l = Legendre {
        pt,
        small: small_phi(),
        memo: cap.map(LruCache::new),
        cfg: *cfg,
        nodes: 0,
    };
    l.phi(n, a, 0)
}

pub fn phi_exact(q: &RoughCountQuery, pt: &PrimeTable) -> Result<u64> {
    phi_with(q, pt, PhiMethod::Auto, &LegendreConfig::default())
}

pub fn phi_with(
    q: &RoughCountQuery,
    pt: &PrimeTable,
    method: PhiMethod,
    cfg: &LegendreConfig,
) -> Result<u64> {
    match method {
        PhiMethod::Direct => phi_direct(q, pt),
        PhiMethod::Legendre => phi_legendre(q, pt, cfg),
        PhiMethod::Auto => {
            if q.n() <= DIRECT_CUTOFF {
                phi_direct(q, pt)
            } else {
                phi_legendre(q, pt, cfg)
            }
        }
    }
}

/// `Σ_{d | P(y)} μ(d)·⌊x/d⌋`, enumerating squarefree `d ≤ x` only.
pub fn phi_inclusion_exclusion(q: &RoughCountQuery, pt: &PrimeTable) -> Result<u64> {
    let n = q.n();
    let ps: Vec<u64> = pt
        .primes_in(1.0, q.y.min(pt.limit() as f64))?
        .iter()
        .map(|&p| p as u64)
        .collect();
    fn walk(n: u64, ps: &[u64], start: usize, d: u64, sign: i64, acc: &mut i64) {
        *acc += sign * (n / d) as i64;
        for i in start..ps.len() {
            let nd = d * ps[i];
            if nd > n {
                break;
            }
            walk(n, ps, i + 1, nd, -sign, acc);
        }
    }
    let mut acc = 0i64;
    walk(n, &ps, 0, 1, 1, &mut acc);
    Ok(acc as u64)
}

#[cfg(test)]
#[path = "../../tests/common/oracle.rs"]
mod oracle;

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::sync::OnceLock;

    fn table() -> &'static PrimeTable {
        static T: OnceLock<PrimeTable> = OnceLock::new();
        T.get_or_init(|| PrimeTable::primes_up_to(40_000_000).unwrap())
    }

    fn q(x: f64, y: f64) -> RoughCountQuery {
        RoughCountQuery::new(x, y).unwrap()
    }

    #[test]
    fn examples_all_paths() {
        let pt = table();
        let cfg = LegendreConfig::default();
        for &(x, y, want) in &[(10.0, 2.0, 5u64), (100.0, 7.0, 22), (100.0, 10.0, 22), (1000.0, 10.0, 228)] {
            assert_eq!(oracle::phi_brute(x, y), want);
            assert_eq!(phi_direct(&q(x, y), pt).unwrap(), want);
            assert_eq!(phi_legendre(&q(x, y), pt, &cfg).unwrap(), want);
            assert_eq!(phi_inclusion_exclusion(&q(x, y), pt).unwrap(), want);
        }
        let pi = |z: f64| pt.pi(z).unwrap();
        assert_eq!(pi(100.0) - pi(10.0) + 1, 22);
    }

    #[test]
    fn query_validation() {
        assert!(RoughCountQuery::new(0.5, 3.0).is_err());
        assert!(RoughCountQuery::new(10.0, 1.0).is_err());
        assert!((q(1000.0, 10.0).u() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn direct_rejects_beyond_limit() {
        let pt = PrimeTable::primes_up_to(1000).unwrap();
        assert!(matches!(
            phi_direct(&q(2000.0, 7.0), &pt),
            Err(Error::BeyondSieveLimit { .. })
        ));
        // Legendre only needs primes up to y and the recursion
        assert_eq!(
            phi_legendre(&q(2000.0, 7.0), &pt, &LegendreConfig::default()).unwrap(),
            oracle::phi_brute(2000.0, 7.0)
        );
    }

    #[test]
    fn budgets_are_reported_distinctly() {
        let pt = table();
        let tight = LegendreConfig {
            memo_bytes: 0,
            max_depth: 1_000,
            max_nodes: 10,
        };
        assert!(matches!(
            phi_legendre(&q(1e7, 1000.0), pt, &tight),
            Err(Error::WorkBudgetExceeded { .. })
        ));
        let shallow = LegendreConfig {
            memo_bytes: 0,
            max_depth: 1,
            max_nodes: u64::MAX,
        };
        assert!(matches!(
            phi_legendre(&q(1e7, 1000.0), pt, &shallow),
            Err(Error::RecursionDepthExceeded { .. })
        ));
    }

    #[test]
    fn memo_does_not_change_results() {
        let pt = table();
        let none = LegendreConfig {
            memo_bytes: 0,
            ..LegendreConfig::default()
        };
        let tiny = LegendreConfig {
            memo_bytes: 48 * 16,
            ..LegendreConfig::default()
        };
        for &(x, y) in &[(1e7, 50.0), (3e6, 300.0), (5e6, 17.5)] {
            let a = phi_legendre(&q(x, y), pt, &LegendreConfig::default()).unwrap();
            assert_eq!(a, phi_legendre(&q(x, y), pt, &none).unwrap());
            assert_eq!(a, phi_legendre(&q(x, y), pt, &tiny).unwrap());
            assert_eq!(a, phi_direct(&q(x, y), pt).unwrap());
        }
    }

    #[test]
    fn brute_force_small_grid() {
        let pt = table();
        let cfg = LegendreConfig::default();
        for x in [1.0, 2.0, 29.0, 30.0, 31.0, 59.5, 210.0, 997.0, 2311.0, 5000.0] {
            for y in [1.5, 2.0, 2.5, 3.0, 4.9, 5.0, 6.0, 7.0, 29.0, 30.5, 70.7, 100.0, 5000.0, 9000.0] {
                let want = oracle::phi_brute(x, y);
                assert_eq!(phi_direct(&q(x, y), pt).unwrap(), want, "direct x={x} y={y}");
                assert_eq!(phi_legendre(&q(x, y), pt, &cfg).unwrap(), want, "legendre x={x} y={y}");
            }
        }
    }

    #[test]
    fn segment_boundary_counts() {
        // x spanning more than one 2²⁰-byte segment
        let pt = table();
        let x = 30.0 * (SEGMENT_BYTES as f64) + 1234.0;
        let y = 997.0;
        assert_eq!(
            phi_direct(&q(x, y), pt).unwrap(),
            phi_legendre(&q(x, y), pt, &LegendreConfig::default()).unwrap()
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn paths_agree(x in 1.0f64..2e6, y in 1.01f64..3000.0) {
            let pt = table();
            let a = phi_direct(&q(x, y), pt).unwrap();
            let b = phi_legendre(&q(x, y), pt, &LegendreConfig::default()).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn monotone(x in 2.0f64..1e5, dx in 0.0f64..1e3, y in 1.5f64..300.0, dy in 0.0f64..50.0) {
            let pt = table();
            let base = phi_direct(&q(x, y), pt).unwrap();
            prop_assert!(phi_direct(&q(x + dx, y), pt).unwrap() >= base);
            prop_assert!(phi_direct(&q(x, y + dy), pt).unwrap() <= base);
        }

        #[test]
        fn inclusion_exclusion_identity(x in 1.0f64..1e5, y in 1.5f64..30.0) {
            let pt = table();
            prop_assert_eq!(
                phi_inclusion_exclusion(&q(x, y), pt).unwrap(),
                phi_direct(&q(x, y), pt).unwrap()
            );
        }
    }
}
