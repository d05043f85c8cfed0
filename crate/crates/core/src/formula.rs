//! Closed-form total count of ASMs, used only to cross-check the enumerator.

use num_bigint::BigUint;
use num_traits::One;

fn primes_up_to(limit: usize) -> Vec<usize> {
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for p in 2..=limit {
        if composite[p] {
            continue;
        }
        primes.push(p);
        for q in (p * p..=limit).step_by(p) {
            composite[q] = true;
        }
    }
    primes
}

/// Exponent of `p` in `k!`.
fn legendre(k: usize, p: usize) -> i64 {
    let mut e = 0;
    let mut q = k / p;
    while q > 0 {
        e += q as i64;
        q /= p;
    }
    e
}

/// Number of ASMs of order `n`: the product over `k = 0..n` of
/// `(3k + 1)! / (n + k)!`, evaluated by accumulating prime exponents.
pub fn asm_total_formula(n: usize) -> BigUint {
    let mut total = BigUint::one();
    if n == 0 {
        return total;
    }
    let largest = (3 * (n - 1) + 1).max(2 * n - 1);
    for p in primes_up_to(largest) {
        let exp: i64 = (0..n)
            .map(|k| legendre(3 * k + 1, p) - legendre(n + k, p))
            .sum();
        assert!(exp >= 0, "negative exponent {exp} for prime {p} at n = {n}");
        if exp > 0 {
            total *= BigUint::from(p).pow(exp as u32);
        }
    }
    total
}
