//! Möbius and Mertens values, and the divisor-value set `{⌊n/k⌋}`.
//!
//! Two independent routes compute `M(n)`: [`MertensTable`] runs a linear
//! sieve over `1..=limit` and keeps prefix sums, while [`mertens_at`] walks
//! a segmented sieve and keeps only a running sum. Tests cross-check them.

use crate::error::{Error, Result};
use crate::scalar::isqrt;

/// Default upper bound on any sieve.
pub const DEFAULT_SIEVE_LIMIT: u64 = 100_000_000;

const SEGMENT_LEN: u64 = 1 << 16;

/// Möbius values and Mertens prefix sums on `0..=limit`.
///
/// Index 0 holds `mu = 0` and `M(0) = 0`, so floor arguments that reach zero
/// need no special casing.
#[derive(Debug, Clone)]
pub struct MertensTable {
    limit: u64,
    mu: Vec<i8>,
    mertens: Vec<i32>,
}

impl MertensTable {
    pub fn new(limit: u64) -> Result<Self> {
        Self::with_max(limit, DEFAULT_SIEVE_LIMIT)
    }

    pub fn with_max(limit: u64, max: u64) -> Result<Self> {
        if limit == 0 {
            return Err(Error::Domain("sieve limit must be at least 1".into()));
        }
        if limit > max {
            return Err(Error::Capacity { requested: limit, max });
        }
        let len = limit as usize + 1;
        let mut mu = vec![0i8; len];
        let mut composite = vec![false; len];
        let mut primes: Vec<usize> = Vec::new();
        mu[1] = 1;
        for i in 2..len {
            if !composite[i] {
                primes.push(i);
                mu[i] = -1;
            }
            for &p in &primes {
                let m = i * p;
                if m >= len {
                    break;
                }
                composite[m] = true;
                if i % p == 0 {
                    mu[m] = 0;
                    break;
                }
                mu[m] = -mu[i];
            }
        }
        let mut mertens = vec![0i32; len];
        let mut acc = 0i32;
        for (m, &v) in mertens.iter_mut().zip(&mu).skip(1) {
            acc += v as i32;
            *m = acc;
        }
        mertens[0] = 0;
        Ok(Self { limit, mu, mertens })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// `μ(m)`; panics when `m > limit`.
    pub fn mu(&self, m: u64) -> i8 {
        self.mu[m as usize]
    }

    /// `M(m)` with `M(0) = 0`; panics when `m > limit`.
    pub fn mertens(&self, m: u64) -> i64 {
        assert!(m <= self.limit, "M({m}) requested beyond sieve limit {}", self.limit);
        self.mertens[m as usize] as i64
    }

    pub fn get(&self, m: u64) -> Option<i64> {
        (m <= self.limit).then(|| self.mertens[m as usize] as i64)
    }

    pub fn mu_values(&self) -> &[i8] {
        &self.mu[1..]
    }
}

/// `M(n)` by a segmented sieve under the default limit.
pub fn mertens_at(n: u64) -> Result<i64> {
    mertens_at_with_max(n, DEFAULT_SIEVE_LIMIT)
}

pub fn mertens_at_with_max(n: u64, max: u64) -> Result<i64> {
    if n > max {
        return Err(Error::Capacity { requested: n, max });
    }
    if n == 0 {
        return Ok(0);
    }
    let primes = small_primes(isqrt(n));
    let mut total = 0i64;
    let mut lo = 1u64;
    let mut mu = Vec::with_capacity(SEGMENT_LEN as usize);
    let mut rem = Vec::with_capacity(SEGMENT_LEN as usize);
    while lo <= n {
        let hi = (lo + SEGMENT_LEN - 1).min(n);
        mu.clear();
        rem.clear();
        mu.resize((hi - lo + 1) as usize, 1i8);
        rem.extend(lo..=hi);
        for &p in &primes {
            if p * p > hi {
                break;
            }
            let first = lo.div_ceil(p) * p;
            let mut m = first;
            while m <= hi {
                let idx = (m - lo) as usize;
                mu[idx] = -mu[idx];
                rem[idx] /= p;
                m += p;
            }
            let pp = p * p;
            let mut m = lo.div_ceil(pp) * pp;
            while m <= hi {
                mu[(m - lo) as usize] = 0;
                m += pp;
            }
        }
        for (v, r) in mu.iter().zip(&rem) {
            // at most one prime factor above sqrt(hi) survives
            let v = if *r > 1 { -*v } else { *v };
            total += v as i64;
        }
        lo = hi + 1;
    }
    Ok(total)
}

fn small_primes(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let b = bound as usize;
    let mut is_prime = vec![true; b + 1];
    is_prime[0] = false;
    is_prime[1] = false;
    let mut i = 2;
    while i * i <= b {
        if is_prime[i] {
            for m in (i * i..=b).step_by(i) {
                is_prime[m] = false;
            }
        }
        i += 1;
    }
    is_prime
        .iter()
        .enumerate()
        .filter_map(|(i, &p)| p.then_some(i as u64))
        .collect()
}

/// The sorted distinct values `⌊n/k⌋`, `1 ≤ k ≤ n`.
///
/// `values[..root]` is the small part `{1..⌊√n⌋}` and `values[len-root..]`
/// the large part `{⌊n/j⌋ : j ≤ ⌊√n⌋}`; the two overlap in at most `⌊√n⌋`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorValueSet {
    n: u64,
    root: u64,
    values: Vec<u64>,
}

impl DivisorValueSet {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("divisor-value set needs n >= 1".into()));
        }
        let root = isqrt(n);
        let mut values: Vec<u64> = (1..=root).collect();
        let shared = n / root == root;
        let start = if shared { root - 1 } else { root };
        // n / j for j = start, ..., 1 is increasing
        values.extend((1..=start).rev().map(|j| n / j));
        Ok(Self { n, root, values })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn root(&self) -> u64 {
        self.root
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn s_minus(&self) -> &[u64] {
        &self.values[..self.root as usize]
    }

    pub fn s_plus(&self) -> &[u64] {
        &self.values[self.values.len() - self.root as usize..]
    }

    /// Position of `v` in `values`, if present.
    pub fn index_of(&self, v: u64) -> Option<usize> {
        if v == 0 || v > self.n {
            return None;
        }
        let idx = if v <= self.root {
            v as usize - 1
        } else {
            let j = self.n / v;
            self.values.len() - j as usize
        };
        (self.values.get(idx) == Some(&v)).then_some(idx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_set(n: u64) -> Vec<u64> {
        let mut v: Vec<u64> = (1..=n).map(|k| n / k).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    // trial-division Möbius, independent of both sieves
    fn mu_trial(mut m: u64) -> i64 {
        let mut sign = 1;
        let mut p = 2;
        while p * p <= m {
            if m.is_multiple_of(p) {
                m /= p;
                if m.is_multiple_of(p) {
                    return 0;
                }
                sign = -sign;
            }
            p += 1;
        }
        if m > 1 {
            sign = -sign;
        }
        sign
    }

    #[test]
    fn table_limit_one() {
        let t = MertensTable::new(1).unwrap();
        assert_eq!(t.mu_values(), &[1]);
        assert_eq!(t.mertens(1), 1);
        assert_eq!(t.mertens(0), 0);
    }

    #[test]
    fn table_limit_ten() {
        let t = MertensTable::new(10).unwrap();
        assert_eq!(t.mu_values(), &[1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
        assert_eq!(t.mertens(4), -1);
        assert_eq!(t.mertens(10), -1);
    }

    #[test]
    fn table_limit_hundred() {
        assert_eq!(MertensTable::new(100).unwrap().mertens(100), 1);
    }

    #[test]
    fn table_matches_trial_division() {
        let t = MertensTable::new(3000).unwrap();
        let mut acc = 0;
        for m in 1..=3000 {
            assert_eq!(t.mu(m) as i64, mu_trial(m), "mu({m})");
            acc += mu_trial(m);
            assert_eq!(t.mertens(m), acc);
        }
    }

    #[test]
    fn table_invariants() {
        let t = MertensTable::new(5000).unwrap();
        for m in 2..=5000u64 {
            assert!((t.mertens(m) - t.mertens(m - 1)).abs() <= 1);
            let r = isqrt(m);
            if r > 1 && m % (r * r) == 0 {
                assert_eq!(t.mu(m), 0);
            }
        }
    }

    #[test]
    fn capacity_error() {
        assert!(matches!(
            MertensTable::with_max(1001, 1000),
            Err(Error::Capacity { requested: 1001, max: 1000 })
        ));
        assert!(matches!(mertens_at_with_max(11, 10), Err(Error::Capacity { .. })));
    }

    #[test]
    fn mertens_at_examples() {
        assert_eq!(mertens_at(0).unwrap(), 0);
        assert_eq!(mertens_at(1).unwrap(), 1);
        assert_eq!(mertens_at(9).unwrap(), -2);
        assert_eq!(mertens_at(100).unwrap(), 1);
    }

    #[test]
    fn segmented_matches_table() {
        let limit = 200_000;
        let t = MertensTable::new(limit).unwrap();
        for n in (1..=2000).chain([65_535, 65_536, 65_537, 131_072, 199_999, 200_000]) {
            assert_eq!(mertens_at(n).unwrap(), t.mertens(n), "n = {n}");
        }
    }

    #[test]
    fn divisor_values_small() {
        assert_eq!(DivisorValueSet::new(1).unwrap().values(), &[1]);
        let s16 = DivisorValueSet::new(16).unwrap();
        assert_eq!(s16.values(), &[1, 2, 3, 4, 5, 8, 16]);
        let s9 = DivisorValueSet::new(9).unwrap();
        assert_eq!(s9.values(), &[1, 2, 3, 4, 9]);
        assert_eq!(s9.s_minus(), &[1, 2, 3]);
        assert_eq!(s9.s_plus(), &[3, 4, 9]);
    }

    #[test]
    fn divisor_values_match_brute_force() {
        for n in 1..=2500u64 {
            let s = DivisorValueSet::new(n).unwrap();
            assert_eq!(s.values(), brute_set(n).as_slice(), "n = {n}");
            let mut union: Vec<u64> = s.s_minus().iter().chain(s.s_plus()).copied().collect();
            union.sort_unstable();
            let before = union.len();
            union.dedup();
            assert!(before - union.len() <= 1);
            assert_eq!(union, s.values());
            for (i, &v) in s.values().iter().enumerate() {
                assert_eq!(s.index_of(v), Some(i));
            }
        }
    }

    #[test]
    fn perfect_square_sizes() {
        for r in 1..=300u64 {
            assert_eq!(DivisorValueSet::new(r * r).unwrap().len() as u64, 2 * r - 1);
        }
    }

    #[test]
    fn index_of_rejects_absent_values() {
        let s = DivisorValueSet::new(16).unwrap();
        assert_eq!(s.index_of(6), None);
        assert_eq!(s.index_of(0), None);
        assert_eq!(s.index_of(17), None);
    }
}
