//! Exact arithmetic in the prime field `Z_p` and its unit group.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModArithError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("the multiplicative order of zero is undefined")]
    ZeroInput,
    #[error("residues have different moduli ({0} and {1})")]
    ModulusMismatch(u64, u64),
}

/// Trial-division primality test. Desk scale only.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// `gcd(0, n) = n`, which the parity clauses of the abelian parametrisation rely on.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Distinct prime factors of `n`, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
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

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// `base^exp mod modulus` for any modulus (not necessarily prime).
pub fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut result: u128 = 1;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    result as u64
}

/// An element of `Z_p` for a prime `p`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    /// Reduces `value` modulo `p`; fails unless `p` is prime.
    pub fn new(value: u64, p: u64) -> Result<Self, ModArithError> {
        if !is_prime(p) {
            return Err(ModArithError::NotPrime(p));
        }
        Ok(Self::new_unchecked(value, p))
    }

    /// Reduces a signed value modulo `p`; fails unless `p` is prime.
    pub fn from_i64(value: i64, p: u64) -> Result<Self, ModArithError> {
        let r = value.rem_euclid(p as i64) as u64;
        Self::new(r, p)
    }

    /// Caller guarantees `p` is prime (it was validated upstream).
    pub(crate) fn new_unchecked(value: u64, p: u64) -> Self {
        Self { value: value % p, modulus: p }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn check(self, other: Self) -> Result<(), ModArithError> {
        if self.modulus == other.modulus {
            Ok(())
        } else {
            Err(ModArithError::ModulusMismatch(self.modulus, other.modulus))
        }
    }

    pub fn add(self, other: Self) -> Result<Self, ModArithError> {
        self.check(other)?;
        Ok(Self::new_unchecked(self.value + other.value, self.modulus))
    }

    pub fn sub(self, other: Self) -> Result<Self, ModArithError> {
        self.check(other)?;
        Ok(Self::new_unchecked(
            self.value + self.modulus - other.value,
            self.modulus,
        ))
    }

    pub fn mul(self, other: Self) -> Result<Self, ModArithError> {
        self.check(other)?;
        let v = (self.value as u128 * other.value as u128 % self.modulus as u128) as u64;
        Ok(Self::new_unchecked(v, self.modulus))
    }

    pub fn neg(self) -> Self {
        Self::new_unchecked(self.modulus - self.value, self.modulus)
    }

    pub fn pow(self, exp: u64) -> Self {
        Self::new_unchecked(pow_mod(self.value, exp, self.modulus), self.modulus)
    }

    pub fn inv(self) -> Result<Self, ModArithError> {
        mod_inv(self)
    }
}

impl fmt::Debug for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Multiplicative inverse via the extended Euclidean algorithm.
pub fn mod_inv(a: Residue) -> Result<Residue, ModArithError> {
    if a.value == 0 {
        return Err(ModArithError::ZeroInverse);
    }
    let (mut old_r, mut r) = (a.value as i128, a.modulus as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    debug_assert_eq!(old_r, 1);
    let v = old_s.rem_euclid(a.modulus as i128) as u64;
    Ok(Residue::new_unchecked(v, a.modulus))
}

/// Least `k >= 1` with `a^k = 1`. Always a divisor of `p - 1`.
pub fn element_order(a: Residue) -> Result<u64, ModArithError> {
    if a.value == 0 {
        return Err(ModArithError::ZeroInput);
    }
    let n = a.modulus - 1;
    let mut order = n;
    for f in prime_factors(n) {
        while order % f == 0 && pow_mod(a.value, order / f, a.modulus) == 1 {
            order /= f;
        }
    }
    Ok(order)
}

/// The smallest positive integer generating `Z_p^*`.
pub fn primitive_root(p: u64) -> Result<Residue, ModArithError> {
    if !is_prime(p) {
        return Err(ModArithError::NotPrime(p));
    }
    if p == 2 {
        return Ok(Residue::new_unchecked(1, 2));
    }
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&f| pow_mod(g, (p - 1) / f, p) != 1))
        .map(|g| Residue::new_unchecked(g, p))
        .ok_or(ModArithError::NotPrime(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(v: u64, p: u64) -> Residue {
        Residue::new(v, p).unwrap()
    }

    #[test]
    fn inverses_mod_7() {
        assert_eq!(mod_inv(r(1, 7)).unwrap().value(), 1);
        assert_eq!(mod_inv(r(5, 7)).unwrap().value(), 3);
        assert_eq!(mod_inv(r(6, 7)).unwrap().value(), 6);
        assert_eq!(mod_inv(r(0, 7)), Err(ModArithError::ZeroInverse));
    }

    #[test]
    fn orders_mod_7() {
        assert_eq!(element_order(r(3, 7)).unwrap(), 6);
        assert_eq!(element_order(r(2, 7)).unwrap(), 3);
        assert_eq!(element_order(r(1, 7)).unwrap(), 1);
        assert_eq!(element_order(r(0, 7)), Err(ModArithError::ZeroInput));
    }

    #[test]
    fn smallest_primitive_roots() {
        assert_eq!(primitive_root(7).unwrap().value(), 3);
        assert_eq!(primitive_root(11).unwrap().value(), 2);
        assert_eq!(primitive_root(3).unwrap().value(), 2);
        assert_eq!(primitive_root(13).unwrap().value(), 2);
        assert_eq!(primitive_root(73).unwrap().value(), 5);
        assert_eq!(primitive_root(9), Err(ModArithError::NotPrime(9)));
    }

    #[test]
    fn composite_modulus_rejected() {
        assert_eq!(Residue::new(2, 15), Err(ModArithError::NotPrime(15)));
        assert!(Residue::new(2, 1).is_err());
    }

    #[test]
    fn mixed_moduli_rejected() {
        assert_eq!(
            r(1, 5).mul(r(1, 7)),
            Err(ModArithError::ModulusMismatch(5, 7))
        );
    }

    #[test]
    fn gcd_zero_convention() {
        assert_eq!(gcd(0, 4), 4);
        assert_eq!(gcd(4, 0), 4);
        assert_eq!(gcd(6, 4), 2);
    }

    #[test]
    fn primitive_root_is_minimal() {
        for p in (3..400).filter(|&p| is_prime(p)) {
            let m = primitive_root(p).unwrap();
            let mut x = m;
            for _ in 1..p - 1 {
                assert_ne!(x.value(), 1, "p={p}");
                x = x.mul(m).unwrap();
            }
            assert_eq!(x.value(), 1);
            for smaller in 2..m.value() {
                assert!(element_order(r(smaller, p)).unwrap() < p - 1);
            }
        }
    }

    fn small_prime() -> impl Strategy<Value = u64> {
        (3u64..1000).prop_filter("prime", |&p| is_prime(p))
    }

    proptest! {
        #[test]
        fn inverse_and_lagrange(p in small_prime(), v in 1u64..1000) {
            let a = r(v % p, p);
            prop_assume!(!a.is_zero());
            let b = mod_inv(a).unwrap();
            prop_assert_eq!(a.mul(b).unwrap().value(), 1);
            let k = element_order(a).unwrap();
            prop_assert_eq!((p - 1) % k, 0);
            prop_assert_eq!(a.pow(k).value(), 1);
        }
    }
}
