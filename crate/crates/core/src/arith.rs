//! Small exact number-theory helpers: deterministic primality testing,
//! factorization, p-adic valuations.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Deterministic Miller-Rabin for u64 (the fixed base set covers the full
/// 64-bit range).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'base: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

fn is_prime_big(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let two = BigUint::from(2u32);
    if n.is_even() {
        return false;
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    // First 30 primes as bases; deterministic for every input this artifact
    // can realistically see.
    const BASES: [u32; 30] = [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
        97, 101, 103, 107, 109, 113,
    ];
    'base: for a in BASES {
        let a = BigUint::from(a);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

/// Pollard rho with Brent cycle detection; deterministic parameter sweep.
fn rho_split(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    for c in 1u32..64 {
        let cc = BigUint::from(c);
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut d = one.clone();
        while d.is_one() {
            x = (&x * &x + &cc) % n;
            y = (&y * &y + &cc) % n;
            y = (&y * &y + &cc) % n;
            let diff = if x > y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break;
            }
            d = diff.gcd(n);
        }
        if !d.is_one() && &d != n {
            return d;
        }
    }
    panic!("rho failed to split {n}");
}

/// Prime factorization, sorted by prime. Every prime factor must fit in a
/// u64; that covers anything expressible through the expression grammar.
pub fn prime_factorization(n: &BigUint) -> Vec<(u64, u32)> {
    assert!(!n.is_zero(), "cannot factor zero");
    let mut out: Vec<(u64, u32)> = Vec::new();
    let mut rest = n.clone();
    let push = |p: u64, k: u32, out: &mut Vec<(u64, u32)>| {
        if k > 0 {
            out.push((p, k));
        }
    };
    for p in 2u64.. {
        if p > 1 << 20 {
            break;
        }
        if &BigUint::from(p) * BigUint::from(p) > rest {
            break;
        }
        let bp = BigUint::from(p);
        let mut k = 0u32;
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            k += 1;
        }
        push(p, k, &mut out);
        if rest.is_one() {
            break;
        }
    }
    // whatever is left is a product of primes above the trial bound
    let mut stack = Vec::new();
    if !rest.is_one() {
        stack.push(rest);
    }
    let mut large: Vec<u64> = Vec::new();
    while let Some(m) = stack.pop() {
        if is_prime_big(&m) {
            large.push(m.to_u64().expect("prime factor exceeds supported range"));
        } else {
            let d = rho_split(&m);
            stack.push(&m / &d);
            stack.push(d);
        }
    }
    large.sort_unstable();
    let mut i = 0;
    while i < large.len() {
        let p = large[i];
        let mut k = 0u32;
        while i < large.len() && large[i] == p {
            k += 1;
            i += 1;
        }
        out.push((p, k));
    }
    out.sort_unstable();
    out
}

/// Distinct prime divisors.
pub fn prime_divisors(n: &BigUint) -> Vec<u64> {
    prime_factorization(n).into_iter().map(|(p, _)| p).collect()
}

/// p-adic valuation of n (n nonzero).
pub fn valuation(n: &BigUint, p: u64) -> u32 {
    assert!(!n.is_zero());
    let bp = BigUint::from(p);
    let mut rest = n.clone();
    let mut k = 0u32;
    while (&rest % &bp).is_zero() {
        rest /= &bp;
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
    }

    #[test]
    fn primality_large() {
        assert!(is_prime_u64(9223372036854775783)); // largest prime < 2^63
        assert!(!is_prime_u64(9223372036854775781));
    }

    #[test]
    fn factorization_roundtrip() {
        for n in [1u64, 2, 12, 64, 97, 360, 1 << 20, 6700417 * 97] {
            let f = prime_factorization(&BigUint::from(n));
            let back: BigUint = f.iter().fold(BigUint::from(1u32), |a, (p, k)| {
                a * BigUint::from(*p).pow(*k)
            });
            assert_eq!(back, BigUint::from(n));
            assert!(f.iter().all(|(p, _)| is_prime_u64(*p)));
        }
    }

    #[test]
    fn factorization_semiprime_above_trial_bound() {
        // two primes above 2^20
        let p = 1048583u64;
        let q = 1048589u64;
        let f = prime_factorization(&(BigUint::from(p) * BigUint::from(q)));
        assert_eq!(f, vec![(p, 1), (q, 1)]);
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&BigUint::from(12u32), 2), 2);
        assert_eq!(valuation(&BigUint::from(12u32), 3), 1);
        assert_eq!(valuation(&BigUint::from(12u32), 5), 0);
    }
}
