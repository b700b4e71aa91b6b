//! Prime fields `Z_p` with word-sized residues.
//!
//! Moduli up to `2^63` are supported. Products are reduced through `u128`
//! when `p` does not fit in 32 bits.

use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::Rng;

use crate::error::{Error, Result};

/// Largest admissible modulus (exclusive).
pub const MAX_MODULUS: u64 = 1 << 63;

/// A residue in `[0, p)`. The modulus lives in the [`PrimeField`] context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElem(u64);

impl FieldElem {
    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The field `Z_p`. Cheap to copy; two contexts are equal iff their moduli are.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !(2..MAX_MODULUS).contains(&p) {
            return Err(Error::ModulusOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    /// The smallest prime field whose characteristic strictly exceeds `bound`.
    pub fn smallest_above(bound: &BigUint) -> Result<Self> {
        let start = bound
            .to_u64()
            .filter(|b| *b < MAX_MODULUS - 1)
            .ok_or_else(|| Error::Characteristic {
                required: bound.to_string(),
                p: 0,
            })?;
        let mut candidate = start + 1;
        while candidate < MAX_MODULUS {
            if is_prime(candidate) {
                return Ok(PrimeField { p: candidate });
            }
            candidate += 1;
        }
        Err(Error::Characteristic {
            required: bound.to_string(),
            p: 0,
        })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Checks that another context is the same field.
    pub fn check_same(&self, other: &PrimeField) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.p,
                right: other.p,
            })
        }
    }

    #[inline]
    pub fn zero(&self) -> FieldElem {
        FieldElem(0)
    }

    #[inline]
    pub fn one(&self) -> FieldElem {
        FieldElem(1 % self.p)
    }

    #[inline]
    pub fn elem(&self, v: u64) -> FieldElem {
        FieldElem(v % self.p)
    }

    pub fn from_i64(&self, v: i64) -> FieldElem {
        let r = (v as i128).rem_euclid(self.p as i128);
        FieldElem(r as u64)
    }

    pub fn from_biguint(&self, v: &BigUint) -> FieldElem {
        let r = v % BigUint::from(self.p);
        FieldElem(r.to_u64().expect("residue fits in u64"))
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        // p < 2^63, so the sum cannot overflow.
        let s = a.0 + b.0;
        FieldElem(if s >= self.p { s - self.p } else { s })
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        FieldElem(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + self.p - b.0 })
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        FieldElem(if a.0 == 0 { 0 } else { self.p - a.0 })
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.p <= u32::MAX as u64 {
            FieldElem(a.0 * b.0 % self.p)
        } else {
            FieldElem(((a.0 as u128 * b.0 as u128) % self.p as u128) as u64)
        }
    }

    pub fn pow(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        if a.0 == 0 {
            return None;
        }
        // Extended Euclid on signed 128-bit values.
        let (mut r0, mut r1) = (self.p as i128, a.0 as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        Some(FieldElem(s0.rem_euclid(self.p as i128) as u64))
    }

    /// `a / b`; panics when `b` is zero.
    pub fn div(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.mul(a, self.inv(b).expect("division by zero in Z_p"))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        FieldElem(rng.gen_range(0..self.p))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        FieldElem(rng.gen_range(1..self.p))
    }

    /// `binom(n, k)` computed exactly over the integers, then reduced.
    pub fn binomial(&self, n: u64, k: u64) -> FieldElem {
        self.from_biguint(&binomial_big(n, k))
    }
}

/// Exact binomial coefficient over the integers.
pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the first twelve prime bases are exact for
/// every 64-bit input.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
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

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn primality_matches_trial_division() {
        for n in 0..5000 {
            assert_eq!(is_prime(n), trial_division(n), "n = {n}");
        }
        assert!(is_prime(1_000_000_007));
        assert!(is_prime((1 << 61) - 1));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
    }

    #[test]
    fn rejects_composites_and_out_of_range() {
        assert_eq!(PrimeField::new(1), Err(Error::ModulusOutOfRange(1)));
        assert_eq!(PrimeField::new(15), Err(Error::NotPrime(15)));
        assert!(PrimeField::new(u64::MAX).is_err());
    }

    #[test]
    fn inverses_small_and_large() {
        for p in [2u64, 3, 7, 10007, (1 << 61) - 1] {
            let f = PrimeField::new(p).unwrap();
            for v in [1u64, 2, 3, 5, p - 1] {
                let a = f.elem(v);
                if a.is_zero() {
                    continue;
                }
                assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
            }
            assert_eq!(f.inv(f.zero()), None);
        }
    }

    #[test]
    fn smallest_prime_above() {
        assert_eq!(PrimeField::smallest_above(&BigUint::from(32u32)).unwrap().modulus(), 37);
        assert_eq!(PrimeField::smallest_above(&BigUint::from(1u32)).unwrap().modulus(), 2);
        assert_eq!(PrimeField::smallest_above(&BigUint::from(2u32)).unwrap().modulus(), 3);
    }

    #[test]
    fn binomials_reduce_after_exact_computation() {
        let f2 = PrimeField::new(2).unwrap();
        assert_eq!(f2.binomial(2, 1), f2.zero());
        assert_eq!(binomial_big(60, 30).to_string(), "118264581564861424");
        let f = PrimeField::new(10007).unwrap();
        assert_eq!(f.binomial(5, 2), f.elem(10));
        assert_eq!(f.binomial(2, 5), f.zero());
    }

    #[test]
    fn negative_lift() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.from_i64(-1), f.elem(6));
        assert_eq!(f.from_i64(-15), f.elem(6));
    }
}
