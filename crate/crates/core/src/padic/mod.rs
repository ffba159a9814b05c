//! Finite-precision p-adic arithmetic and the analytic side of the period
//! map: Iwasawa logarithm, p-adic polylogarithms, p-adic zeta values, disk
//! power series and Newton-polygon root counting.
//!
//! A `PadicNumber` represents a value known modulo `p^prec_abs`, stored as
//! `p^val * unit`.  Arithmetic tracks worst-case precision loss; a unit of
//! zero means "indistinguishable from zero at this precision", in which case
//! `val == prec_abs`.

pub mod newton;
pub mod polylog;
pub mod series;
pub mod zeta;

pub use newton::newton_root_count;
pub use polylog::PolylogEvaluator;
pub use series::{PadicSeries, TailBound};
pub use zeta::padic_zeta;

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::PadicError;

/// p^e as a BigUint (e >= 0).
pub fn p_pow(p: u64, e: i64) -> BigUint {
    assert!(e >= 0, "p_pow wants a nonnegative exponent");
    BigUint::from(p).pow(e as u32)
}

/// Modular inverse of a unit mod p^e.
pub(crate) fn mod_inverse(a: &BigUint, p: u64, e: i64) -> BigUint {
    // Hensel lift from the inverse mod p
    let m = p_pow(p, e);
    let pb = BigUint::from(p);
    let a0 = a % &pb;
    let mut inv = BigUint::zero();
    for x in 1..p {
        if (&a0 * x) % &pb == BigUint::one() {
            inv = BigUint::from(x);
            break;
        }
    }
    assert!(!inv.is_zero(), "not a unit mod p");
    // Newton iteration: inv <- inv * (2 - a*inv), doubling correct digits
    let two = BigUint::from(2u32);
    let mut k = 1i64;
    while k < e {
        k *= 2;
        let mk = if k >= e { m.clone() } else { p_pow(p, k) };
        let prod = (a % &mk) * &inv % &mk;
        let two_minus = (&two + &mk - prod) % &mk;
        inv = inv * two_minus % &mk;
    }
    inv % &m
}

/// A p-adic number known to absolute precision `prec_abs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicNumber {
    p: u64,
    val: i64,
    unit: BigUint,
    prec_abs: i64,
}

impl PadicNumber {
    /// O(p^prec): zero to the given precision.
    pub fn zero(p: u64, prec_abs: i64) -> Self {
        PadicNumber {
            p,
            val: prec_abs,
            unit: BigUint::zero(),
            prec_abs,
        }
    }

    pub fn one(p: u64, prec_abs: i64) -> Self {
        Self::from_integer(p, &BigInt::one(), prec_abs)
    }

    pub fn from_integer(p: u64, n: &BigInt, prec_abs: i64) -> Self {
        Self::from_rational(p, &BigRational::from_integer(n.clone()), prec_abs)
    }

    pub fn from_u64(p: u64, n: u64, prec_abs: i64) -> Self {
        Self::from_integer(p, &BigInt::from(n), prec_abs)
    }

    pub fn from_rational(p: u64, r: &BigRational, prec_abs: i64) -> Self {
        if r.is_zero() {
            return Self::zero(p, prec_abs);
        }
        let pb = BigInt::from(p);
        let mut v: i64 = 0;
        let mut num = r.numer().clone();
        let mut den = r.denom().clone();
        while (&num % &pb).is_zero() {
            num /= &pb;
            v += 1;
        }
        while (&den % &pb).is_zero() {
            den /= &pb;
            v -= 1;
        }
        if v >= prec_abs {
            return Self::zero(p, prec_abs);
        }
        let rel = prec_abs - v;
        let m_uint = p_pow(p, rel);
        let m = BigInt::from(m_uint.clone());
        let num_mod = ((num % &m) + &m) % &m;
        let den_mod = ((den % &m) + &m) % &m;
        let den_inv = mod_inverse(&den_mod.to_biguint().unwrap(), p, rel);
        let unit = num_mod.to_biguint().unwrap() * den_inv % m_uint;
        debug_assert!(!unit.is_zero());
        PadicNumber {
            p,
            val: v,
            unit,
            prec_abs,
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Valuation; None when the value is indistinguishable from zero.
    pub fn valuation(&self) -> Option<i64> {
        if self.unit.is_zero() {
            None
        } else {
            Some(self.val)
        }
    }

    /// Lower bound for the valuation that is valid either way.
    pub fn valuation_lower_bound(&self) -> i64 {
        self.val
    }

    pub fn precision(&self) -> i64 {
        self.prec_abs
    }

    pub fn is_zero(&self) -> bool {
        self.unit.is_zero()
    }

    /// |x| <= p^-n certified?
    pub fn abs_at_most(&self, n: i64) -> bool {
        self.val >= n
    }

    /// |x| > p^-n certified?  (False also when undecidable at this precision.)
    pub fn abs_greater(&self, n: i64) -> bool {
        !self.unit.is_zero() && self.val < n
    }

    pub fn truncate(&self, prec_abs: i64) -> Self {
        if prec_abs >= self.prec_abs {
            return self.clone();
        }
        if self.unit.is_zero() || self.val >= prec_abs {
            return Self::zero(self.p, prec_abs);
        }
        let unit = &self.unit % p_pow(self.p, prec_abs - self.val);
        let mut out = PadicNumber {
            p: self.p,
            val: self.val,
            unit,
            prec_abs,
        };
        out.normalise();
        out
    }

    fn normalise(&mut self) {
        // strip p factors that appeared after reduction
        if self.unit.is_zero() {
            self.val = self.prec_abs;
            return;
        }
        let pb = BigUint::from(self.p);
        while (&self.unit % &pb).is_zero() {
            self.unit /= &pb;
            self.val += 1;
            if self.val >= self.prec_abs {
                self.unit = BigUint::zero();
                self.val = self.prec_abs;
                return;
            }
        }
    }

    fn check_prime(&self, other: &PadicNumber) {
        assert_eq!(self.p, other.p, "prime mismatch in p-adic arithmetic");
    }

    pub fn add(&self, other: &PadicNumber) -> PadicNumber {
        self.check_prime(other);
        let prec = self.prec_abs.min(other.prec_abs);
        if self.unit.is_zero() {
            return other.truncate(prec);
        }
        if other.unit.is_zero() {
            return self.truncate(prec);
        }
        let v = self.val.min(other.val);
        if v >= prec {
            return Self::zero(self.p, prec);
        }
        let rel = prec - v;
        let m = p_pow(self.p, rel);
        let a = &self.unit * p_pow(self.p, self.val - v) % &m;
        let b = &other.unit * p_pow(self.p, other.val - v) % &m;
        let mut out = PadicNumber {
            p: self.p,
            val: v,
            unit: (a + b) % &m,
            prec_abs: prec,
        };
        out.normalise();
        out
    }

    pub fn neg(&self) -> PadicNumber {
        if self.unit.is_zero() {
            return self.clone();
        }
        let m = p_pow(self.p, self.prec_abs - self.val);
        PadicNumber {
            p: self.p,
            val: self.val,
            unit: (&m - &self.unit) % m,
            prec_abs: self.prec_abs,
        }
    }

    pub fn sub(&self, other: &PadicNumber) -> PadicNumber {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &PadicNumber) -> PadicNumber {
        self.check_prime(other);
        let ra = self.prec_abs - self.val;
        let rb = other.prec_abs - other.val;
        let rel = ra.min(rb);
        let val = self.val + other.val;
        if self.unit.is_zero() || other.unit.is_zero() || rel <= 0 {
            return Self::zero(self.p, val + rel.max(0));
        }
        let m = p_pow(self.p, rel);
        PadicNumber {
            p: self.p,
            val,
            unit: &self.unit * &other.unit % m,
            prec_abs: val + rel,
        }
    }

    pub fn invert(&self) -> Result<PadicNumber, PadicError> {
        if self.unit.is_zero() {
            return Err(PadicError::DivisionByZero);
        }
        let rel = self.prec_abs - self.val;
        let unit = mod_inverse(&self.unit, self.p, rel);
        Ok(PadicNumber {
            p: self.p,
            val: -self.val,
            unit,
            prec_abs: -self.val + rel,
        })
    }

    pub fn div(&self, other: &PadicNumber) -> Result<PadicNumber, PadicError> {
        Ok(self.mul(&other.invert()?))
    }

    pub fn pow(&self, k: i64) -> Result<PadicNumber, PadicError> {
        if k < 0 {
            return self.invert()?.pow(-k);
        }
        let mut out = PadicNumber::one(self.p, self.prec_abs - self.val + self.val.abs() * k + 1);
        let mut base = self.clone();
        let mut e = k as u64;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(out)
    }

    pub fn scale_by_p_power(&self, k: i64) -> PadicNumber {
        let mut out = self.clone();
        out.val += k;
        out.prec_abs += k;
        out
    }

    /// Canonical rational representative: p^val * unit with unit in
    /// [0, p^rel).
    pub fn to_rational(&self) -> BigRational {
        if self.unit.is_zero() {
            return BigRational::zero();
        }
        let u = BigInt::from(self.unit.clone());
        if self.val >= 0 {
            BigRational::from_integer(u * BigInt::from(p_pow(self.p, self.val)))
        } else {
            BigRational::new(u, BigInt::from(p_pow(self.p, -self.val)))
        }
    }

    /// Symmetric representative: numerator reduced into (-p^rel/2, p^rel/2].
    pub fn to_rational_symmetric(&self) -> BigRational {
        if self.unit.is_zero() {
            return BigRational::zero();
        }
        let m = BigInt::from(p_pow(self.p, self.prec_abs - self.val));
        let mut u = BigInt::from(self.unit.clone());
        if &u * 2 > m {
            u -= &m;
        }
        if self.val >= 0 {
            BigRational::from_integer(u * BigInt::from(p_pow(self.p, self.val)))
        } else {
            BigRational::new(u, BigInt::from(p_pow(self.p, -self.val)))
        }
    }

    /// Base-p digits of the unit part, little endian.
    pub fn unit_digits(&self) -> Vec<u64> {
        let mut digits = Vec::new();
        let mut u = self.unit.clone();
        let pb = BigUint::from(self.p);
        while !u.is_zero() {
            digits.push((&u % &pb).to_u64().unwrap());
            u /= &pb;
        }
        digits
    }

    /// The Teichmueller representative with the same residue, to the same
    /// absolute precision.  The input must be a unit.
    pub fn teichmueller(&self) -> Result<PadicNumber, PadicError> {
        if self.unit.is_zero() || self.val != 0 {
            return Err(PadicError::BadCenter(
                "teichmueller lift needs a unit".into(),
            ));
        }
        let c = (&self.unit % BigUint::from(self.p)).to_u64().unwrap();
        Ok(teichmueller_of_residue(self.p, c, self.prec_abs))
    }
}

/// The Teichmueller lift of the residue c (1 <= c < p), to absolute
/// precision `prec`.
pub fn teichmueller_of_residue(p: u64, c: u64, prec: i64) -> PadicNumber {
    assert!(c % p != 0, "teichmueller of a non-unit residue");
    let prec = prec.max(1);
    let m = p_pow(p, prec);
    let mut t = BigUint::from(c % p);
    // x -> x^p converges to the Teichmueller point, one digit per step
    for _ in 0..prec {
        t = t.modpow(&BigUint::from(p), &m);
    }
    let mut out = PadicNumber {
        p,
        val: 0,
        unit: t,
        prec_abs: prec,
    };
    out.normalise();
    out
}

/// The Iwasawa-branch p-adic logarithm: log p = 0, log of Teichmueller
/// roots = 0, the usual series on principal units.
pub fn padic_log(z: &PadicNumber) -> Result<PadicNumber, PadicError> {
    if z.is_zero() {
        return Err(PadicError::LogOfZero);
    }
    let p = z.p;
    let rel = z.prec_abs - z.val;
    if rel <= 0 {
        return Err(PadicError::InsufficientPrecision(
            "no relative precision for log".into(),
        ));
    }
    // branch: ignore p^val entirely; u = unit part
    let u = PadicNumber {
        p,
        val: 0,
        unit: z.unit.clone(),
        prec_abs: rel,
    };
    // log u = (1/e) log(u^e) with u^e a principal unit
    let e: i64 = if p == 2 { 2 } else { p as i64 - 1 };
    let ue = u.pow(e)?;
    let y = ue.sub(&PadicNumber::one(p, rel));
    let m = y.valuation_lower_bound();
    if y.is_zero() {
        // u^e = 1 to precision; log is 0 to the same precision
        return Ok(PadicNumber::zero(p, rel));
    }
    debug_assert!(m >= 1);
    // series sum_{k>=1} -(1-x)^k / k = sum (-1)^{k+1} y^k / k at x = 1+y
    let guard = (ilog_p(p, rel.max(1) as u64) + 3) as i64;
    let work = rel + guard;
    let ywork = PadicNumber {
        p,
        val: y.val,
        unit: y.unit.clone(),
        prec_abs: y.prec_abs,
    }
    .truncate(work.min(y.prec_abs));
    let mut sum = PadicNumber::zero(p, work);
    let mut power = PadicNumber::one(p, work);
    let mut k: i64 = 0;
    loop {
        k += 1;
        // term valuation at least k*m - v_p(k); stop when past precision
        if k * m - ilog_p(p, k as u64) as i64 >= work {
            break;
        }
        power = power.mul(&ywork);
        let kp = PadicNumber::from_integer(p, &BigInt::from(k), work + ilog_p(p, k as u64) as i64 + 1);
        let term = power.div(&kp)?;
        let term = if k % 2 == 0 { term.neg() } else { term };
        sum = sum.add(&term);
    }
    let einv = PadicNumber::from_rational(p, &BigRational::new(BigInt::one(), BigInt::from(e)), work);
    Ok(sum.mul(&einv).truncate(rel))
}

/// floor(log_p(n)) for n >= 1.
pub fn ilog_p(p: u64, n: u64) -> u32 {
    let mut k = 0;
    let mut m = n;
    while m >= p {
        m /= p;
        k += 1;
    }
    k
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.unit.is_zero() {
            return write!(f, "O({}^{})", self.p, self.prec_abs);
        }
        write!(
            f,
            "{}^{} * {} + O({}^{})",
            self.p, self.val, self.unit, self.p, self.prec_abs
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn basic_arithmetic() {
        let p = 5;
        let a = PadicNumber::from_rational(p, &r(7, 3), 10);
        let b = PadicNumber::from_rational(p, &r(-2, 9), 10);
        let sum = a.add(&b);
        let expect = PadicNumber::from_rational(p, &r(7 * 9 - 2 * 3, 27), 10);
        assert_eq!(sum, expect);

        let prod = a.mul(&b);
        let expect = PadicNumber::from_rational(p, &r(-14, 27), 10);
        assert_eq!(prod, expect);

        let quot = a.div(&b).unwrap();
        let expect = PadicNumber::from_rational(p, &r(-63, 6), 10);
        assert_eq!(quot, expect);
    }

    #[test]
    fn cancellation_lowers_precision() {
        let p = 5;
        let a = PadicNumber::from_integer(p, &BigInt::from(1 + 625), 10);
        let b = PadicNumber::one(p, 10);
        let d = a.sub(&b); // = 5^4, known mod 5^10
        assert_eq!(d.valuation(), Some(4));
        assert_eq!(d.precision(), 10);

        // subtracting equal values gives zero at full precision
        let z = a.sub(&a);
        assert!(z.is_zero());
        assert_eq!(z.precision(), 10);
    }

    /// Arithmetic precision contract, fuzzed against exact rationals.
    #[test]
    fn precision_contract_fuzz() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let p = 7u64;
        for _ in 0..500 {
            let n1 = rng.gen_range(-200i64..200);
            let d1 = [1, 2, 3, 7, 49, 5][rng.gen_range(0..6)];
            let n2 = rng.gen_range(-200i64..200);
            let d2 = [1, 3, 7, 11][rng.gen_range(0..4)];
            if n1 == 0 || n2 == 0 {
                continue;
            }
            let x = r(n1, d1);
            let y = r(n2, d2);
            let pa = rng.gen_range(3i64..12);
            let pb = rng.gen_range(3i64..12);
            let a = PadicNumber::from_rational(p, &x, pa);
            let b = PadicNumber::from_rational(p, &y, pb);
            for (exact, got) in [
                (&x + &y, a.add(&b)),
                (&x - &y, a.sub(&b)),
                (&x * &y, a.mul(&b)),
            ] {
                // the reported precision must be a valid lower bound:
                // exact - representative is divisible by p^prec
                let diff = &exact - got.to_rational();
                if !diff.is_zero() {
                    let v = crate::linalg::val_p(&diff, p).unwrap();
                    assert!(
                        v >= got.precision(),
                        "x={} y={} got={} prec={} diff val {}",
                        x,
                        y,
                        got,
                        got.precision(),
                        v
                    );
                }
            }
        }
    }

    #[test]
    fn teichmueller_is_root_of_unity() {
        for p in [5u64, 7] {
            for c in 2..p {
                let t = teichmueller_of_residue(p, c, 20);
                let tp = t.pow(p as i64 - 1).unwrap();
                let one = PadicNumber::one(p, 20);
                assert!(tp.sub(&one).is_zero(), "p={} c={}", p, c);
            }
        }
    }

    #[test]
    fn log_examples() {
        // log(-1) = 0
        let p = 7;
        let m1 = PadicNumber::from_integer(p, &BigInt::from(-1), 20);
        assert!(padic_log(&m1).unwrap().is_zero());

        // log(p) = 0 on the Iwasawa branch
        let seven = PadicNumber::from_integer(p, &BigInt::from(7), 20);
        assert!(padic_log(&seven).unwrap().is_zero());

        // log of a Teichmueller point is 0
        let t = teichmueller_of_residue(5, 2, 20);
        assert!(padic_log(&t).unwrap().is_zero());

        // log_5(6) equals the direct series sum -(1-6)^k/k
        let p = 5u64;
        let six = PadicNumber::from_integer(p, &BigInt::from(6), 12);
        let got = padic_log(&six).unwrap();
        let mut expect = PadicNumber::zero(p, 12);
        let mut power = PadicNumber::one(p, 14);
        let y = PadicNumber::from_integer(p, &BigInt::from(5), 14);
        for k in 1..=14i64 {
            power = power.mul(&y);
            let kp = PadicNumber::from_integer(p, &BigInt::from(k), 14);
            let term = power.div(&kp).unwrap();
            let term = if k % 2 == 0 { term.neg() } else { term };
            expect = expect.add(&term);
        }
        assert!(got.sub(&expect.truncate(12)).is_zero());
    }

    /// |log(zw) - log z - log w| <= p^-N on random unit pairs.
    #[test]
    fn log_homomorphism_random_units() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for p in [5u64, 7] {
            for _ in 0..200 {
                let a = rng.gen_range(1u64..10_000);
                let b = rng.gen_range(1u64..10_000);
                if a % p == 0 || b % p == 0 {
                    continue;
                }
                let n = 20;
                let x = PadicNumber::from_u64(p, a, n);
                let y = PadicNumber::from_u64(p, b, n);
                let lhs = padic_log(&x.mul(&y)).unwrap();
                let rhs = padic_log(&x).unwrap().add(&padic_log(&y).unwrap());
                let diff = lhs.sub(&rhs);
                assert!(diff.is_zero(), "p={} a={} b={} diff={}", p, a, b, diff);
            }
        }
    }

    #[test]
    fn serialisation_parts() {
        let x = PadicNumber::from_rational(5, &r(12, 1), 6);
        assert_eq!(x.valuation(), Some(0));
        assert_eq!(x.unit_digits(), vec![2, 2]);
        let js = serde_json::to_string(&x).unwrap();
        let back: PadicNumber = serde_json::from_str(&js).unwrap();
        assert_eq!(x, back);
    }
}
