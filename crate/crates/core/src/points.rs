//! Open subschemes of Spec Z and the integral points of the thrice-punctured
//! line over them.
//!
//! A point of X(Z) is a rational z with z and 1-z both units on Z.  The
//! enumeration is a bounded-height search: numerators and denominators run
//! over S-supported integers and the complementary unit condition is tested
//! exactly.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::PointsError;

pub type Rational = BigRational;

/// Primes <= bound, by trial division; fine at desk scale.
pub fn primes_upto(bound: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut n = 2u64;
    while n <= bound {
        if is_prime(n) {
            out.push(n);
        }
        n += 1;
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn next_prime(n: u64) -> u64 {
    let mut m = n + 1;
    while !is_prime(m) {
        m += 1;
    }
    m
}

/// An open subscheme Z of Spec Z, either by its finite set S of excluded
/// primes or in tapered form (all primes <= q_max removed).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OpenIntegerScheme {
    Explicit(BTreeSet<u64>),
    Tapered { q_max: u64 },
}

impl OpenIntegerScheme {
    pub fn spec_z() -> Self {
        OpenIntegerScheme::Explicit(BTreeSet::new())
    }

    pub fn inverting(primes: &[u64]) -> Self {
        OpenIntegerScheme::Explicit(primes.iter().copied().collect())
    }

    pub fn tapered(q_max: u64) -> Self {
        OpenIntegerScheme::Tapered { q_max }
    }

    /// The excluded primes, sorted.
    pub fn excluded_primes(&self) -> Vec<u64> {
        match self {
            OpenIntegerScheme::Explicit(s) => s.iter().copied().collect(),
            OpenIntegerScheme::Tapered { q_max } => primes_upto(*q_max),
        }
    }

    /// Is the prime q a point of Z (i.e. not excluded)?
    pub fn contains_prime(&self, q: u64) -> bool {
        match self {
            OpenIntegerScheme::Explicit(s) => !s.contains(&q),
            OpenIntegerScheme::Tapered { q_max } => q > *q_max,
        }
    }

    /// Largest excluded prime, if any.
    pub fn largest_excluded(&self) -> Option<u64> {
        self.excluded_primes().last().copied()
    }

    /// The tapered scheme associated to Z.
    pub fn associated_tapered(&self) -> OpenIntegerScheme {
        OpenIntegerScheme::Tapered {
            q_max: self.largest_excluded().unwrap_or(1),
        }
    }

    /// Is Z' (this) contained in Z_{>q_max}, i.e. does this exclude every
    /// prime <= q_max?
    pub fn refines_tapered(&self, q_max: u64) -> bool {
        primes_upto(q_max).iter().all(|&q| !self.contains_prime(q))
    }
}

impl fmt::Display for OpenIntegerScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpenIntegerScheme::Explicit(s) if s.is_empty() => write!(f, "Z"),
            OpenIntegerScheme::Explicit(s) => {
                let parts: Vec<String> = s.iter().map(|q| format!("1/{}", q)).collect();
                write!(f, "Z[{}]", parts.join(","))
            }
            OpenIntegerScheme::Tapered { q_max } => write!(f, "Z>{}", q_max),
        }
    }
}

impl FromStr for OpenIntegerScheme {
    type Err = PointsError;

    fn from_str(s: &str) -> Result<Self, PointsError> {
        let s = s.trim();
        if s == "Z" {
            return Ok(OpenIntegerScheme::spec_z());
        }
        if let Some(rest) = s.strip_prefix("Z>") {
            let q: u64 = rest
                .parse()
                .map_err(|_| PointsError::BadScheme(s.to_string()))?;
            return Ok(OpenIntegerScheme::tapered(q));
        }
        if let Some(rest) = s.strip_prefix("Z[") {
            let Some(inner) = rest.strip_suffix(']') else {
                return Err(PointsError::BadScheme(s.to_string()));
            };
            let mut primes = BTreeSet::new();
            for part in inner.split(',') {
                let part = part.trim();
                let Some(q) = part.strip_prefix("1/") else {
                    return Err(PointsError::BadScheme(s.to_string()));
                };
                let q: u64 = q.parse().map_err(|_| PointsError::BadScheme(s.to_string()))?;
                if !is_prime(q) {
                    return Err(PointsError::BadScheme(s.to_string()));
                }
                primes.insert(q);
            }
            return Ok(OpenIntegerScheme::Explicit(primes));
        }
        Err(PointsError::BadScheme(s.to_string()))
    }
}

/// A point of X(Z), or the tangential base point used to label zeta values.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SUnitPoint {
    Rational(Rational),
    /// The tangential point -1 at 1; Li_n of it is the motivic zeta value.
    Tangential,
}

impl SUnitPoint {
    pub fn rational(z: Rational) -> Self {
        SUnitPoint::Rational(z)
    }

    pub fn value(&self) -> Result<&Rational, PointsError> {
        match self {
            SUnitPoint::Rational(z) => Ok(z),
            SUnitPoint::Tangential => Err(PointsError::Tangential),
        }
    }

    pub fn height(&self) -> Option<BigInt> {
        match self {
            SUnitPoint::Rational(z) => {
                Some(z.numer().abs().max(z.denom().abs()))
            }
            SUnitPoint::Tangential => None,
        }
    }
}

impl fmt::Display for SUnitPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SUnitPoint::Rational(z) => write!(f, "{}", z),
            SUnitPoint::Tangential => write!(f, "tangential"),
        }
    }
}

/// v_q(x) for each listed prime q, in order.  x must be a nonzero rational
/// supported on the listed primes; the sign is discarded.
pub fn valuation_vector(x: &Rational, primes: &[u64]) -> Result<Vec<i64>, PointsError> {
    if x.is_zero() {
        return Err(PointsError::UnsupportedRational("0".into()));
    }
    let mut num = x.numer().abs();
    let mut den = x.denom().abs();
    let mut out = Vec::with_capacity(primes.len());
    for &q in primes {
        let q = BigInt::from(q);
        let mut v: i64 = 0;
        while (&num % &q).is_zero() {
            num /= &q;
            v += 1;
        }
        while (&den % &q).is_zero() {
            den /= &q;
            v -= 1;
        }
        out.push(v);
    }
    if !num.is_one() || !den.is_one() {
        return Err(PointsError::UnsupportedRational(x.to_string()));
    }
    Ok(out)
}

/// Is x (nonzero) a unit outside the listed primes?
pub fn is_supported(x: &Rational, primes: &[u64]) -> bool {
    !x.is_zero() && valuation_vector(x, primes).is_ok()
}

/// Positive integers <= bound whose prime factors all lie in `primes`,
/// sorted ascending; 1 is always included.
fn supported_integers(primes: &[u64], bound: &BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    for &q in primes {
        let q = BigInt::from(q);
        let mut next = Vec::new();
        for b in &out {
            let mut v = b.clone();
            loop {
                v = &v * &q;
                if &v > bound {
                    break;
                }
                next.push(v.clone());
            }
        }
        out.extend(next);
    }
    out.sort();
    out
}

/// The complete set { z in Q : z, 1-z units on Z, height(z) <= b }, sorted by
/// (height, numerator).
pub fn enumerate_points(scheme: &OpenIntegerScheme, b: u64) -> Vec<SUnitPoint> {
    assert!(b >= 1, "height bound must be >= 1");
    let primes = scheme.excluded_primes();
    let bound = BigInt::from(b);
    let magnitudes = supported_integers(&primes, &bound);
    let mut found: Vec<(BigInt, BigInt, Rational)> = Vec::new();
    for den in &magnitudes {
        for num in &magnitudes {
            for sign in [1i64, -1] {
                let a = num * BigInt::from(sign);
                if a == *den {
                    continue; // z = 1
                }
                if num.gcd_ref(den) != BigInt::one() {
                    continue;
                }
                let z = Rational::new(a.clone(), den.clone());
                // 1 - z = (den - a)/den; den - a is nonzero here
                let one_minus = den - &a;
                if !is_supported(&Rational::from_integer(one_minus), &primes) {
                    continue;
                }
                let height = num.max(den).clone();
                found.push((height, a, z));
            }
        }
    }
    found.sort();
    found.dedup_by(|a, b| a.2 == b.2);
    found
        .into_iter()
        .map(|(_, _, z)| SUnitPoint::Rational(z))
        .collect()
}

trait GcdRef {
    fn gcd_ref(&self, other: &BigInt) -> BigInt;
}

impl GcdRef for BigInt {
    fn gcd_ref(&self, other: &BigInt) -> BigInt {
        num_integer::Integer::gcd(self, other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn scheme_parsing() {
        let z: OpenIntegerScheme = "Z".parse().unwrap();
        assert_eq!(z, OpenIntegerScheme::spec_z());
        let z: OpenIntegerScheme = "Z[1/2,1/3]".parse().unwrap();
        assert_eq!(z.excluded_primes(), vec![2, 3]);
        let z: OpenIntegerScheme = "Z>5".parse().unwrap();
        assert_eq!(z.excluded_primes(), vec![2, 3, 5]);
        assert!("Z[1/4]".parse::<OpenIntegerScheme>().is_err());
        assert_eq!(z.to_string(), "Z>5");
        assert_eq!(
            "Z[1/2,1/3]".parse::<OpenIntegerScheme>().unwrap().to_string(),
            "Z[1/2,1/3]"
        );
    }

    #[test]
    fn valuation_vectors() {
        assert_eq!(valuation_vector(&q(-8, 1), &[2, 3]).unwrap(), vec![3, 0]);
        assert_eq!(valuation_vector(&q(1, 2), &[2]).unwrap(), vec![-1]);
        assert_eq!(valuation_vector(&q(9, 2), &[2, 3]).unwrap(), vec![-1, 2]);
        assert!(valuation_vector(&q(5, 1), &[2, 3]).is_err());
    }

    #[test]
    fn spec_z_has_no_points() {
        assert!(enumerate_points(&OpenIntegerScheme::spec_z(), 100).is_empty());
    }

    #[test]
    fn z_one_third_has_no_points() {
        let z = OpenIntegerScheme::inverting(&[3]);
        assert!(enumerate_points(&z, 200).is_empty());
    }

    #[test]
    fn z_half_small_heights() {
        let z = OpenIntegerScheme::inverting(&[2]);
        let pts = enumerate_points(&z, 2);
        let expect: Vec<SUnitPoint> = vec![
            SUnitPoint::Rational(q(-1, 1)),
            SUnitPoint::Rational(q(1, 2)),
            SUnitPoint::Rational(q(2, 1)),
        ];
        assert_eq!(pts, expect);
    }

    /// Classical completeness oracle: at any height bound, X(Z[1/2]) is
    /// exactly {-1, 1/2, 2}.
    #[test]
    fn z_half_completeness() {
        let z = OpenIntegerScheme::inverting(&[2]);
        let pts = enumerate_points(&z, 1000);
        assert_eq!(pts.len(), 3);
    }

    #[test]
    fn tapered_enumeration() {
        let z = OpenIntegerScheme::tapered(3);
        let pts = enumerate_points(&z, 3);
        // includes -1, 1/2, 2 (2-unit orbit), plus 2,3-unit points like
        // -2, 3, -1/2?, 1/3, 2/3, 3/2, ...
        assert!(pts.contains(&SUnitPoint::Rational(q(-2, 1))));
        assert!(pts.contains(&SUnitPoint::Rational(q(3, 1))));
        assert!(pts.contains(&SUnitPoint::Rational(q(3, 2))));
        for p in &pts {
            let z = p.value().unwrap();
            assert!(is_supported(z, &[2, 3]));
            assert!(is_supported(&(Rational::one() - z), &[2, 3]));
        }
    }

    /// S3 closure: images of height <= b points under z -> 1-z and z -> 1/z
    /// are found again at height <= b^2.
    #[test]
    fn s3_closure_under_height_growth() {
        let z = OpenIntegerScheme::tapered(3);
        let b = 10u64;
        let small = enumerate_points(&z, b);
        let big = enumerate_points(&z, b * b);
        for p in &small {
            let v = p.value().unwrap().clone();
            for img in [Rational::one() - &v, v.recip()] {
                assert!(
                    big.iter().any(|q| q.value().unwrap() == &img),
                    "missing orbit image {} of {}",
                    img,
                    v
                );
            }
        }
    }

    #[test]
    fn deterministic_order() {
        let z = OpenIntegerScheme::tapered(3);
        let pts = enumerate_points(&z, 4);
        let mut sorted = pts.clone();
        sorted.sort_by_key(|p| {
            let v = p.value().unwrap().clone();
            (p.height().unwrap(), v.numer().clone())
        });
        assert_eq!(pts, sorted);
    }
}
