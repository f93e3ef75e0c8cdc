//! Small-prime utilities shared by the sieve, factorization, and
//! colossally abundant generators.

use alloc::vec::Vec;

/// All primes up to and including `limit`, by a simple odd-only sieve.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    if limit == 2 {
        return alloc::vec![2];
    }
    let n = limit as usize;
    let half = (n - 1) / 2; // odd numbers 3, 5, ..., <= n
    let mut composite = alloc::vec![false; half + 1];
    let mut i = 1usize;
    while (2 * i + 1) * (2 * i + 1) <= n {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut m = (p * p - 1) / 2;
            while m <= half {
                composite[m] = true;
                m += p;
            }
        }
        i += 1;
    }
    let mut primes = Vec::with_capacity(half / 2 + 2);
    primes.push(2);
    for (i, &c) in composite.iter().enumerate().skip(1) {
        if !c {
            primes.push(2 * i as u64 + 1);
        }
    }
    primes
}

/// Deterministic primality by trial division over a mod-30 wheel.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    const WHEEL: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let mut d = 7u64;
    let mut i = 0usize;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += WHEEL[i];
        i = (i + 1) % WHEEL.len();
    }
    true
}

/// Unbounded ascending prime iterator (trial division; intended for the
/// handful of small primes CA generation touches).
pub struct PrimeIter {
    next: u64,
}

impl PrimeIter {
    pub fn new() -> Self {
        PrimeIter { next: 2 }
    }
}

impl Default for PrimeIter {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for PrimeIter {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let mut candidate = self.next;
        while !is_prime(candidate) {
            candidate += 1;
        }
        self.next = candidate + 1;
        Some(candidate)
    }
}
