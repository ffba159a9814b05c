//! Power series on residue disks with explicit tail bounds.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::PadicNumber;

fn rq(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Affine lower bound on coefficient valuations:
/// v(a_k) >= intercept + slope * k for every k >= 0.
///
/// Requiring validity on the retained prefix as well (not only past the
/// truncation) is what lets bounds combine under sums and products.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailBound {
    pub intercept: BigRational,
    pub slope: BigRational,
}

impl TailBound {
    pub fn new(intercept: BigRational, slope: BigRational) -> Self {
        TailBound { intercept, slope }
    }

    /// Lower bound for v(a_k).
    pub fn value_at(&self, k: usize) -> BigRational {
        &self.intercept + &self.slope * rq(k as i64)
    }

    /// floor of inf over k > kk of (intercept + (slope + radius_exp) * k),
    /// provided the combined slope is positive; None otherwise.
    pub fn min_weighted_beyond(&self, kk: usize, radius_exp: i64) -> Option<i64> {
        let combined = &self.slope + rq(radius_exp);
        if combined <= rq(0) {
            return None;
        }
        let v = &self.intercept + combined * rq(kk as i64 + 1);
        Some(v.floor().to_integer().to_i64().unwrap_or(i64::MIN / 4))
    }

    pub fn add_intercept(&self, delta: i64) -> TailBound {
        TailBound::new(&self.intercept + rq(delta), self.slope.clone())
    }

    /// Pointwise minimum, valid for a sum of series.
    pub fn min(&self, other: &TailBound) -> TailBound {
        TailBound::new(
            self.intercept.clone().min(other.intercept.clone()),
            self.slope.clone().min(other.slope.clone()),
        )
    }

    /// Bound for a product of series carrying the two bounds.
    pub fn product(&self, other: &TailBound) -> TailBound {
        TailBound::new(
            &self.intercept + &other.intercept,
            self.slope.clone().min(other.slope.clone()),
        )
    }
}

/// Truncated power series in t on the ball |t| <= p^-radius_exp around a
/// disk center, with a certified coefficient bound.
#[derive(Clone, Debug)]
pub struct PadicSeries {
    pub p: u64,
    pub center: PadicNumber,
    pub radius_exp: i64,
    pub coeffs: Vec<PadicNumber>,
    pub tail: TailBound,
}

impl PadicSeries {
    /// Evaluate at t with |t| <= p^-radius_exp; the truncation error is
    /// folded into the reported precision.
    pub fn eval(&self, t: &PadicNumber) -> PadicNumber {
        assert!(
            t.is_zero() || t.valuation_lower_bound() >= self.radius_exp,
            "evaluation point outside the ball"
        );
        let mut acc = PadicNumber::zero(self.p, i64::MAX / 4);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(t).add(c);
        }
        match self
            .tail
            .min_weighted_beyond(self.coeffs.len().saturating_sub(1), self.radius_exp)
        {
            Some(tail_val) => acc.truncate(tail_val),
            None => acc,
        }
    }

    /// The constant series.
    pub fn constant(
        p: u64,
        center: PadicNumber,
        radius_exp: i64,
        value: PadicNumber,
        len: usize,
    ) -> PadicSeries {
        let v0 = value.valuation_lower_bound().min(0);
        let mut coeffs = vec![PadicNumber::zero(p, i64::MAX / 4); len];
        coeffs[0] = value;
        PadicSeries {
            p,
            center,
            radius_exp,
            coeffs,
            tail: TailBound::new(rq(v0), rq(0)),
        }
    }

    /// The series with t replaced by -t.
    pub fn negate_variable(&self) -> PadicSeries {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 1 { c.neg() } else { c.clone() })
            .collect();
        PadicSeries {
            p: self.p,
            center: self.center.clone(),
            radius_exp: self.radius_exp,
            coeffs,
            tail: self.tail.clone(),
        }
    }

    pub fn scale(&self, c: &PadicNumber) -> PadicSeries {
        PadicSeries {
            p: self.p,
            center: self.center.clone(),
            radius_exp: self.radius_exp,
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
            tail: self.tail.add_intercept(c.valuation_lower_bound()),
        }
    }

    pub fn add(&self, other: &PadicSeries) -> PadicSeries {
        assert_eq!(self.p, other.p);
        assert_eq!(self.radius_exp, other.radius_exp);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        let zero = PadicNumber::zero(self.p, i64::MAX / 4);
        for k in 0..n {
            let a = self.coeffs.get(k).unwrap_or(&zero);
            let b = other.coeffs.get(k).unwrap_or(&zero);
            coeffs.push(a.add(b));
        }
        PadicSeries {
            p: self.p,
            center: self.center.clone(),
            radius_exp: self.radius_exp,
            coeffs,
            tail: self.tail.min(&other.tail),
        }
    }

    /// Product truncated to the shorter length.  The retained prefix of the
    /// product is exact in terms of the factors' prefixes; the bound
    /// combines affinely.
    pub fn mul(&self, other: &PadicSeries) -> PadicSeries {
        assert_eq!(self.p, other.p);
        assert_eq!(self.radius_exp, other.radius_exp);
        let n = self.coeffs.len().min(other.coeffs.len());
        let mut coeffs = vec![PadicNumber::zero(self.p, i64::MAX / 4); n];
        for i in 0..n {
            if self.coeffs[i].is_zero() && self.coeffs[i].precision() > i64::MAX / 8 {
                continue;
            }
            for j in 0..n - i {
                let t = self.coeffs[i].mul(&other.coeffs[j]);
                coeffs[i + j] = coeffs[i + j].add(&t);
            }
        }
        PadicSeries {
            p: self.p,
            center: self.center.clone(),
            radius_exp: self.radius_exp,
            coeffs,
            tail: self.tail.product(&other.tail),
        }
    }
}
