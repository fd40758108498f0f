//! Prime table: segmented odd-only sieve with O(1) π lookup.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use crate::{Error, Result};

const SEGMENT_BITS: u64 = 1 << 21;
const CACHE_MAGIC: &[u8; 4] = b"RGPT";
pub const CACHE_VERSION: u32 = 1;

/// Sorted primes up to `limit`, with a bitset over odd numbers and a running
/// popcount per 64-bit word (the π checkpoints).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u32>,
    /// Bit `i` is set iff `2i + 1` is prime.
    odd_bits: Vec<u64>,
    /// Number of odd primes in words `0..w`.
    checkpoints: Vec<u32>,
}

fn small_sieve(n: usize) -> Vec<u32> {
    let mut is = vec![true; n + 1];
    is[0] = false;
    if n >= 1 {
        is[1] = false;
    }
    let mut i = 2;
    while i * i <= n {
        if is[i] {
            let mut j = i * i;
            while j <= n {
                is[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    is.iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(k, _)| k as u32)
        .collect()
}

impl PrimeTable {
    /// Sieve of Eratosthenes over odd numbers in segments of 2²¹ bits.
    pub fn primes_up_to(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain("n", n as f64, ">= 2"));
        }
        if n > u32::MAX as u64 {
            return Err(Error::domain("n", n as f64, "<= 2^32 - 1"));
        }
        let n_bits = n.div_ceil(2) + 1; // indices 0..=(n-1)/2
        let n_words = n_bits.div_ceil(64) as usize;
        let mut bits = vec![!0u64; n_words];
        // 1 is not prime
        bits[0] &= !1;
        let max_idx = (n - 1) / 2;
        // clear padding past n
        let used = max_idx + 1;
        let last = (used % 64) as u32;
        if last != 0 {
            bits[n_words - 1] &= (1u64 << last) - 1;
        }
        for w in bits.iter_mut().skip(used.div_ceil(64) as usize) {
            *w = 0;
        }
        let root = (n as f64).sqrt() as u64 + 1;
        let base: Vec<u64> = small_sieve(root as usize)
            .into_iter()
            .filter(|&p| p > 2 && (p as u64) * (p as u64) <= n)
            .map(|p| p as u64)
            .collect();
        // next index to clear, per base prime
        let mut next: Vec<u64> = base.iter().map(|&p| (p * p - 1) / 2).collect();
        let mut seg_lo = 0u64;
        while seg_lo <= max_idx {
            let seg_hi = (seg_lo + SEGMENT_BITS).min(max_idx + 1);
            for (k, &p) in base.iter().enumerate() {
                let mut j = next[k];
                while j < seg_hi {
                    bits[(j >> 6) as usize] &= !(1u64 << (j & 63));
                    j += p;
                }
                next[k] = j;
            }
            seg_lo = seg_hi;
        }
        let mut checkpoints = Vec::with_capacity(n_words + 1);
        let mut acc = 0u32;
        for w in &bits {
            checkpoints.push(acc);
            acc += w.count_ones();
        }
        checkpoints.push(acc);
        let mut primes = Vec::with_capacity(acc as usize + 1);
        primes.push(2u32);
        for (wi, &w) in bits.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as u64;
                primes.push((2 * (wi as u64 * 64 + b) + 1) as u32);
                w &= w - 1;
            }
        }
        Ok(Self {
            limit: n,
            primes,
            odd_bits: bits,
            checkpoints,
        })
    }

    fn from_primes(limit: u64, primes: Vec<u32>) -> Self {
        let n_bits = limit.div_ceil(2) + 1;
        let n_words = n_bits.div_ceil(64) as usize;
        let mut bits = vec![0u64; n_words];
        for &p in primes.iter().skip(1) {
            let i = (p as u64 - 1) / 2;
            bits[(i >> 6) as usize] |= 1 << (i & 63);
        }
        let mut checkpoints = Vec::with_capacity(n_words + 1);
        let mut acc = 0u32;
        for w in &bits {
            checkpoints.push(acc);
            acc += w.count_ones();
        }
        checkpoints.push(acc);
        Self {
            limit,
            primes,
            odd_bits: bits,
            checkpoints,
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// The `i`-th prime, 1-based (`p_1 = 2`).
    pub fn nth(&self, i: usize) -> Option<u64> {
        if i == 0 {
            None
        } else {
            self.primes.get(i - 1).map(|&p| p as u64)
        }
    }

    pub fn is_prime(&self, n: u64) -> bool {
        if n == 2 {
            return true;
        }
        if n < 2 || n % 2 == 0 || n > self.limit {
            return false;
        }
        let i = (n - 1) / 2;
        self.odd_bits[(i >> 6) as usize] >> (i & 63) & 1 == 1
    }

    /// π(n) for integer `n ≤ limit`.
    pub fn pi_u64(&self, n: u64) -> Result<u64> {
        if n > self.limit {
            return Err(Error::BeyondSieveLimit {
                what: "pi argument",
                value: n as f64,
                limit: self.limit,
            });
        }
        Ok(self.pi_unchecked(n))
    }

    #[inline]
    pub(crate) fn pi_unchecked(&self, n: u64) -> u64 {
        if n < 2 {
            return 0;
        }
        if n == 2 {
            return 1;
        }
        let i = (n - 1) / 2;
        let w = (i >> 6) as usize;
        let mask = if (i & 63) == 63 {
            !0u64
        } else {
            (1u64 << ((i & 63) + 1)) - 1
        };
        1 + self.checkpoints[w] as u64 + (self.odd_bits[w] & mask).count_ones() as u64
    }

    /// π(z) = π(⌊z⌋) for real `z`.
    pub fn pi(&self, z: f64) -> Result<u64> {
        if !(z < 2.0) && !z.is_finite() {
            return Err(Error::domain("z", z, "finite"));
        }
        if z < 2.0 {
            return Ok(0);
        }
        self.pi_u64(z.floor() as u64)
    }

    /// Primes in `(lo, hi]` as a slice.
    pub fn primes_in(&self, lo: f64, hi: f64) -> Result<&[u32]> {
        let a = if lo < 2.0 { 0 } else { self.pi(lo)? as usize };
        let b = if hi < 2.0 { 0 } else { self.pi(hi)? as usize };
        Ok(&self.primes[a.min(b)..b])
    }

    pub fn cache_file(dir: &Path, limit: u64) -> PathBuf {
        dir.join(format!("primes-v{CACHE_VERSION}-{limit}.bin"))
    }

    /// Binary form: magic, version, limit, count, then `(p_i − p_{i−1})/2` as
    /// bytes for `i ≥ 3` (2 and 3 are implicit).
    pub fn write_cache<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(CACHE_MAGIC)?;
        w.write_all(&CACHE_VERSION.to_le_bytes())?;
        w.write_all(&self.limit.to_le_bytes())?;
        w.write_all(&(self.primes.len() as u64).to_le_bytes())?;
        let gaps: Vec<u8> = self
            .primes
            .windows(2)
            .skip(1)
            .map(|p| ((p[1] - p[0]) / 2) as u8)
            .collect();
        w.write_all(&gaps)?;
        Ok(())
    }

    pub fn read_cache<R: Read>(mut r: R) -> Result<Self> {
        let mut head = [0u8; 24];
        r.read_exact(&mut head)?;
        if &head[0..4] != CACHE_MAGIC {
            return Err(Error::Cache("bad magic".into()));
        }
        let version = u32::from_le_bytes(head[4..8].try_into().unwrap());
        if version != CACHE_VERSION {
            return Err(Error::Cache(format!("prime cache version {version}")));
        }
        let limit = u64::from_le_bytes(head[8..16].try_into().unwrap());
        let count = u64::from_le_bytes(head[16..24].try_into().unwrap()) as usize;
        if !(2..=u32::MAX as u64).contains(&limit) {
            return Err(Error::Cache("bad limit".into()));
        }
        let mut gaps = Vec::new();
        r.read_to_end(&mut gaps)?;
        if count < 1 || gaps.len() + 2 != count.max(2) {
            return Err(Error::Cache("truncated prime cache".into()));
        }
        let mut primes = Vec::with_capacity(count);
        primes.push(2u32);
        if count > 1 {
            primes.push(3);
        }
        let mut p = 3u32;
        for g in gaps {
            p += 2 * g as u32;
            primes.push(p);
        }
        if primes.last().map(|&p| p as u64 > limit).unwrap_or(false) {
            return Err(Error::Cache("prime beyond limit".into()));
        }
        Ok(Self::from_primes(limit, primes))
    }

    pub fn load_or_build(dir: &Path, limit: u64) -> Result<Self> {
        let path = Self::cache_file(dir, limit);
        if let Ok(f) = std::fs::File::open(&path) {
            if let Ok(t) = Self::read_cache(std::io::BufReader::new(f)) {
                if t.limit == limit {
                    return Ok(t);
                }
            }
        }
        let t = Self::primes_up_to(limit)?;
        std::fs::create_dir_all(dir)?;
        let f = std::fs::File::create(&path)?;
        t.write_cache(std::io::BufWriter::new(f))?;
        Ok(t)
    }
}

#[cfg(test)]
#[path = "../../tests/common/oracle.rs"]
mod oracle;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_tables() {
        let t = PrimeTable::primes_up_to(10).unwrap();
        assert_eq!(t.primes(), &[2, 3, 5, 7]);
        assert_eq!(t.pi(10.0).unwrap(), 4);
        assert_eq!(PrimeTable::primes_up_to(100).unwrap().pi(100.0).unwrap(), 25);
        assert_eq!(PrimeTable::primes_up_to(1000).unwrap().pi(1000.0).unwrap(), 168);
        assert!(PrimeTable::primes_up_to(1).is_err());
        let two = PrimeTable::primes_up_to(2).unwrap();
        assert_eq!(two.primes(), &[2]);
    }

    #[test]
    fn matches_trial_division() {
        let t = PrimeTable::primes_up_to(20_000).unwrap();
        let o = oracle::primes_trial(20_000);
        assert_eq!(t.primes().iter().map(|&p| p as u64).collect::<Vec<_>>(), o);
        for n in 0..20_000u64 {
            assert_eq!(t.is_prime(n), oracle::is_prime_trial(n));
        }
    }

    #[test]
    fn pi_consistent_with_list() {
        let t = PrimeTable::primes_up_to(100_003).unwrap();
        let mut count = 0;
        let mut k = 0;
        for n in 0..=100_003u64 {
            while k < t.primes().len() && t.primes()[k] as u64 <= n {
                k += 1;
                count += 1;
            }
            assert_eq!(t.pi_u64(n).unwrap(), count, "n={n}");
        }
        assert_eq!(*t.checkpoints.last().unwrap() as usize + 1, t.len());
        assert!(t.pi_u64(100_004).is_err());
        assert_eq!(t.pi(10.9).unwrap(), 4);
    }

    #[test]
    fn segment_boundaries() {
        // Several segments' worth of odd indices.
        let n = 3 * 2 * SEGMENT_BITS + 12_345;
        let t = PrimeTable::primes_up_to(n).unwrap();
        assert_eq!(t.pi_u64(10_000_000).unwrap(), 664_579);
        for &p in t.primes().iter().rev().take(50) {
            assert!(oracle::is_prime_trial(p as u64));
        }
    }

    #[test]
    fn cache_round_trip() {
        let t = PrimeTable::primes_up_to(50_000).unwrap();
        let mut buf = Vec::new();
        t.write_cache(&mut buf).unwrap();
        let back = PrimeTable::read_cache(&buf[..]).unwrap();
        assert_eq!(back, t);
        let mut bad = buf.clone();
        bad[4] = 9;
        assert!(PrimeTable::read_cache(&bad[..]).is_err());
        assert!(PrimeTable::read_cache(&buf[..30]).is_err());
    }

    #[test]
    fn load_or_build_uses_cache() {
        let dir = tempfile::tempdir().unwrap();
        let a = PrimeTable::load_or_build(dir.path(), 10_000).unwrap();
        assert!(PrimeTable::cache_file(dir.path(), 10_000).exists());
        let b = PrimeTable::load_or_build(dir.path(), 10_000).unwrap();
        assert_eq!(a, b);
    }
}
