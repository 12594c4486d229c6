//! Small number theory: deterministic 64-bit primality and modular helpers.

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Least `t >= 1` with `k^t = 1 (mod m)`, or `None` when `k` is not a unit.
pub fn multiplicative_order(k: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(1);
    }
    if gcd(k % m, m) != 1 {
        return None;
    }
    let mut t = 1;
    let mut acc = k % m;
    while acc != 1 {
        acc = mul_mod(acc, k, m);
        t += 1;
    }
    Some(t)
}

// First twelve primes; a strong-probable-prime test to all of these bases is
// deterministic for every n < 3.3 * 10^24, which covers u64.
const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller-Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// `Some(e)` when `n = p^e` for the given prime `p`, with `e >= 0`.
pub fn log_exact(n: u64, p: u64) -> Option<u32> {
    if n == 0 || p < 2 {
        return None;
    }
    let (mut n, mut e) = (n, 0);
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    (n == 1).then_some(e)
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Whether `k` has multiplicative order exactly `d` modulo `m`.
pub fn has_order(k: u64, d: u64, m: u64) -> bool {
    if d == 0 || gcd(k % m, m) != 1 || pow_mod(k, d, m) != 1 % m {
        return false;
    }
    prime_divisors(d).iter().all(|&r| pow_mod(k, d / r, m) != 1 % m)
}

/// Smallest `k > 1` of multiplicative order exactly `d` modulo `m`.
pub fn smallest_unit_of_order(d: u64, m: u64) -> Option<u64> {
    (2..m).find(|&k| has_order(k, d, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn agrees_with_trial_division_below_20000() {
        for n in 0..20_000 {
            assert_eq!(is_prime(n), trial_division(n), "n = {n}");
        }
    }

    #[test]
    fn named_examples() {
        assert!(!is_prime(1));
        assert!(is_prime(151));
        assert!(!is_prime(561));
        // strong pseudoprime to bases 2..=11
        assert!(!is_prime(2_152_302_898_747));
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(u64::MAX));
    }

    #[test]
    fn orders_and_powers() {
        assert_eq!(multiplicative_order(2, 7), Some(3));
        assert_eq!(multiplicative_order(3, 13), Some(3));
        assert_eq!(multiplicative_order(2, 4), None);
        assert_eq!(pow_mod(3, 3, 7), 6);
        assert_eq!(log_exact(128, 2), Some(7));
        assert_eq!(log_exact(1, 3), Some(0));
        assert_eq!(log_exact(12, 2), None);
    }

    #[test]
    fn units_of_given_order() {
        for m in 2..100u64 {
            for k in 1..m {
                for d in 1..m {
                    assert_eq!(has_order(k, d, m), multiplicative_order(k, m) == Some(d));
                }
            }
        }
        assert_eq!(smallest_unit_of_order(3, 7), Some(2));
        assert_eq!(smallest_unit_of_order(4, 5), Some(2));
        assert_eq!(smallest_unit_of_order(2, 9), Some(8));
        assert_eq!(smallest_unit_of_order(9, 7), None);
    }
}
