//! Coleman's p-adic polylogarithms on the thrice-punctured line.
//!
//! Strategy:
//! - |z| < 1: the defining series sum z^k / k^n.
//! - |z| > 1: the inversion functional equation down to |1/z| < 1.
//! - z a unit with z != 1 mod p: power series on the residue disk around
//!   the Teichmueller center, whose constant terms are seeded through the
//!   Frobenius-deprived functions D_n(z) = Li_n(z) - p^-n Li_n(z^p).
//!
//! The D_n are rigid on the complement of the open unit disk around 1 and
//! are computed here as power series in w = 1/(z-1) with certified
//! coefficient decay; at a Teichmueller point omega, omega^p = omega makes
//! the Frobenius equation a one-variable fixed point:
//!     Li_n(omega) = D_n(omega) / (1 - p^-n).
//! The residue disk of 1 is a puncture and is rejected.

use std::cell::RefCell;
use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::PadicError;

use super::series::{PadicSeries, TailBound};
use super::{ilog_p, p_pow, padic_log, teichmueller_of_residue, PadicNumber};

fn rq(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Binomial coefficient.
fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut out = BigInt::one();
    for i in 0..k {
        out = out * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    out
}

/// Coefficients of P(w) with (1-z^p)/(1-z)^p = 1 + p P(w), w = 1/(z-1).
/// P has integer coefficients, P(0) = 0, deg P <= p.
fn frobenius_correction_poly(p: u64) -> Vec<BigInt> {
    // g(z) = ((1-z)^p - 1 + z^p)/p, degree <= p-1, g_0 = 0
    let mut g = vec![BigInt::zero(); p as usize + 1];
    for k in 0..=p {
        let mut c = binomial(p, k);
        if k % 2 == 1 {
            c = -c;
        }
        if k == 0 {
            c -= BigInt::one();
        }
        if k == p {
            c += BigInt::one();
        }
        g[k as usize] = c / BigInt::from(p);
    }
    // P(w) = sgn * g(1 + 1/w) w^p, sgn = +1 for odd p, -1 for p = 2
    let mut pw = vec![BigInt::zero(); p as usize + 1];
    for (k, gk) in g.iter().enumerate() {
        if gk.is_zero() {
            continue;
        }
        // z^k w^p = sum_i C(k,i) w^{p-i}
        for i in 0..=k as u64 {
            let idx = (p - i) as usize;
            pw[idx] += gk * binomial(k as u64, i);
        }
    }
    if p == 2 {
        for c in &mut pw {
            *c = -c.clone();
        }
    }
    debug_assert!(pw[0].is_zero());
    pw
}

/// Evaluator for p-adic polylogarithms up to a fixed depth, at one prime.
pub struct PolylogEvaluator {
    p: u64,
    n_max: u32,
    /// target absolute precision for returned values
    prec: i64,
    /// internal working precision
    work: i64,
    /// d_series[n-1][j] = j-th w-coefficient of D_n
    d_series: Vec<Vec<PadicNumber>>,
    /// certified valuation of everything dropped past the retained prefix
    d_tail_val: i64,
    teich_cache: RefCell<BTreeMap<(u64, u32), PadicNumber>>,
}

impl PolylogEvaluator {
    pub fn new(p: u64, n_max: u32, prec: i64) -> Result<Self, PadicError> {
        assert!(crate::points::is_prime(p), "p must be prime");
        assert!(n_max >= 1);
        if p == 2 {
            return Err(PadicError::BadCenter(
                "p = 2 leaves no residue disk on the thrice-punctured line".into(),
            ));
        }
        // working precision: target + headroom for the divisions by j in the
        // integration recursions (each level can lose ilog_p(J) digits)
        let mut work = prec + 8;
        let mut j_trunc;
        loop {
            j_trunc = Self::choose_truncation(p, n_max, work);
            let need = prec + (n_max as i64 + 1) * (ilog_p(p, j_trunc as u64 + 4) as i64 + 2) + 6;
            if work >= need {
                break;
            }
            work = need;
        }
        let d_series = Self::build_d_series(p, n_max, work, j_trunc);
        let d_tail_val = Self::tail_min_val(p, n_max, j_trunc);
        Ok(PolylogEvaluator {
            p,
            n_max,
            prec,
            work,
            d_series,
            d_tail_val,
            teich_cache: RefCell::new(BTreeMap::new()),
        })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn depth(&self) -> u32 {
        self.n_max
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    /// Valuation bound for the coefficients of D_n dropped past J:
    /// |gamma_j| <= p^{(3+n) + n log_p(j+3) - j/(2p)} for j >= 3pn, so the
    /// dropped tail at |w| <= 1 has valuation at least the value at J+1.
    fn tail_min_val(p: u64, n_max: u32, j_trunc: usize) -> i64 {
        let j = j_trunc as i64 + 1;
        let n = n_max as i64;
        j / (2 * p as i64) - (3 + n) - n * (ilog_p(p, j as u64 + 3) as i64 + 1)
    }

    fn choose_truncation(p: u64, n_max: u32, work: i64) -> usize {
        let mut j = (4 * p * n_max as u64) as usize;
        while Self::tail_min_val(p, n_max, j) < work {
            j += p as usize;
        }
        j
    }

    /// The w-series of D_1, ..., D_{n_max} to absolute precision `work`,
    /// truncated at degree `j_trunc`.
    fn build_d_series(p: u64, n_max: u32, work: i64, j_trunc: usize) -> Vec<Vec<PadicNumber>> {
        let modulus = p_pow(p, work);
        let pw_poly = frobenius_correction_poly(p);
        let reduce = |c: &BigInt| -> BigUint {
            let m = BigInt::from(modulus.clone());
            (((c % &m) + &m) % &m).to_biguint().unwrap()
        };
        let pw_mod: Vec<BigUint> = pw_poly.iter().map(reduce).collect();

        // D_1 = (1/p) sum_{m>=1} (-1)^{m+1} (p P)^m / m
        //     = sum_m (-1)^{m+1} p^{m-1-v(m)} (P^m) / unit(m)
        let m_terms = {
            let mut m = 1i64;
            while m - 1 - ilog_p(p, m as u64) as i64 <= work {
                m += 1;
            }
            m as usize
        };
        let mut level1: Vec<BigUint> = vec![BigUint::zero(); j_trunc + 1];
        let mut power: Vec<BigUint> = vec![BigUint::zero(); j_trunc + 1];
        power[0] = BigUint::one();
        for m in 1..=m_terms {
            // power <- power * P mod p^work, truncated
            let mut next = vec![BigUint::zero(); j_trunc + 1];
            for i in 0..=j_trunc {
                if power[i].is_zero() {
                    continue;
                }
                for (d, c) in pw_mod.iter().enumerate() {
                    if c.is_zero() || i + d > j_trunc {
                        continue;
                    }
                    let t = &power[i] * c % &modulus;
                    next[i + d] = (&next[i + d] + t) % &modulus;
                }
            }
            power = next;
            let v_m = {
                let mut v = 0i64;
                let mut mm = m as u64;
                while mm % p == 0 {
                    mm /= p;
                    v += 1;
                }
                v
            };
            let exp = m as i64 - 1 - v_m;
            if exp >= work {
                continue;
            }
            let unit_m = {
                let mut mm = m as u64;
                while mm % p == 0 {
                    mm /= p;
                }
                mm
            };
            let scale = p_pow(p, exp)
                * super::mod_inverse(&BigUint::from(unit_m), p, work)
                % &modulus;
            let negate = m % 2 == 0;
            for j in 1..=j_trunc {
                if power[j].is_zero() {
                    continue;
                }
                let t = &power[j] * &scale % &modulus;
                if negate {
                    level1[j] = (&level1[j] + (&modulus - t)) % &modulus;
                } else {
                    level1[j] = (&level1[j] + t) % &modulus;
                }
            }
        }
        let to_padic = |u: &BigUint| -> PadicNumber {
            PadicNumber::from_integer(p, &BigInt::from(u.clone()), work)
        };
        let mut out: Vec<Vec<PadicNumber>> = Vec::with_capacity(n_max as usize);
        out.push(level1.iter().map(to_padic).collect());
        // gamma^{(n)}_j = h_j / j,  h_j = -gamma^{(n-1)}_j - h_{j-1}, h_0 = 0
        for _ in 2..=n_max {
            let prev = out.last().unwrap();
            let mut level = Vec::with_capacity(j_trunc + 1);
            level.push(PadicNumber::zero(p, work));
            let mut h = PadicNumber::zero(p, work);
            for j in 1..=j_trunc {
                h = prev[j].add(&h).neg();
                let jp = PadicNumber::from_integer(
                    p,
                    &BigInt::from(j),
                    work + ilog_p(p, j as u64) as i64 + 1,
                );
                level.push(h.div(&jp).expect("j is nonzero"));
            }
            out.push(level);
        }
        out
    }

    /// D_n evaluated at w = 1/(z-1) for z outside the disk of 1.
    fn eval_d(&self, n: u32, w: &PadicNumber) -> PadicNumber {
        let coeffs = &self.d_series[n as usize - 1];
        let mut acc = PadicNumber::zero(self.p, i64::MAX / 4);
        for c in coeffs.iter().rev() {
            acc = acc.mul(w).add(c);
        }
        acc.truncate(self.d_tail_val)
    }

    /// Li_n at the Teichmueller point of residue c (c != 0, 1 mod p), via
    /// the Frobenius fixed point.
    pub fn teichmueller_li(&self, n: u32, c: u64) -> Result<PadicNumber, PadicError> {
        let c = c % self.p;
        if c == 0 || c == 1 {
            return Err(PadicError::BadCenter(format!("residue {} is a puncture", c)));
        }
        if let Some(v) = self.teich_cache.borrow().get(&(c, n)) {
            return Ok(v.clone());
        }
        let omega = teichmueller_of_residue(self.p, c, self.work);
        let one = PadicNumber::one(self.p, self.work);
        let w = one.sub(&omega).neg().invert()?; // 1/(omega - 1)
        let d = self.eval_d(n, &w);
        // x = d / (1 - p^-n), p-adically (1 - p^-n)^-1 = -p^n/(1 - p^n)
        let pn = PadicNumber::from_rational(
            self.p,
            &BigRational::new(BigInt::one(), BigInt::from(p_pow(self.p, n as i64))),
            self.work,
        );
        let x = d.div(&one.sub(&pn))?;
        self.teich_cache.borrow_mut().insert((c, n), x.clone());
        Ok(x)
    }

    /// The defining series sum_{k>=1} z^k / k^n for |z| < 1.
    fn li_small(&self, n: u32, z: &PadicNumber) -> Result<PadicNumber, PadicError> {
        let v = match z.valuation() {
            None => return Ok(PadicNumber::zero(self.p, z.precision())),
            Some(v) => v,
        };
        assert!(v >= 1);
        let work = self.work;
        let mut k_max = 1i64;
        while k_max * v - n as i64 * ilog_p(self.p, k_max as u64) as i64 <= work {
            k_max += 1;
        }
        let mut sum = PadicNumber::zero(self.p, work);
        let mut zk = PadicNumber::one(self.p, work + 2);
        for k in 1..=k_max {
            zk = zk.mul(z);
            let kp = PadicNumber::from_integer(
                self.p,
                &BigInt::from(k),
                work + n as i64 * (ilog_p(self.p, k as u64) as i64 + 1) + 1,
            );
            let term = zk.div(&kp.pow(n as i64)?)?;
            sum = sum.add(&term);
        }
        Ok(sum.truncate(self.prec))
    }

    /// Coleman's p-adic n-logarithm at z, to the evaluator's precision.
    pub fn polylog(&self, n: u32, z: &PadicNumber) -> Result<PadicNumber, PadicError> {
        assert!(n >= 1 && n <= self.n_max, "depth out of range");
        assert_eq!(z.prime(), self.p);
        if z.is_zero() {
            return Ok(PadicNumber::zero(self.p, z.precision()));
        }
        let v = z.valuation().unwrap();
        if v >= 1 {
            return self.li_small(n, z);
        }
        if v <= -1 {
            // inversion: Li_n(z) = (-1)^{n-1} [ Li_n(1/z) + log(z)^n / n! ]
            let zi = z.invert()?;
            let li = self.polylog(n, &zi)?;
            let lg = padic_log(z)?;
            let mut fact = BigRational::one();
            for k in 2..=n as i64 {
                fact *= rq(k);
            }
            let term = lg
                .pow(n as i64)?
                .mul(&PadicNumber::from_rational(self.p, &fact.recip(), self.work));
            let s = li.add(&term);
            return Ok(if n % 2 == 0 { s.neg() } else { s }.truncate(self.prec));
        }
        // unit: expand on the residue disk around the Teichmueller center
        let c = residue_of(z)?;
        if c == 1 {
            return Err(PadicError::DiskOfOne);
        }
        if c == 0 {
            return Err(PadicError::BadCenter("not a unit".into()));
        }
        let omega = teichmueller_of_residue(self.p, c, self.work);
        let t = z.sub(&omega);
        if t.is_zero() {
            return Ok(self.teichmueller_li(n, c)?.truncate(self.prec));
        }
        let series = self.li_series_at_teichmueller(n, c)?;
        Ok(series.eval(&t).truncate(self.prec))
    }

    fn series_len(&self) -> usize {
        let mut k = 4usize;
        while (k as i64) - (self.n_max as i64) * (ilog_p(self.p, k as u64) as i64 + 1)
            <= self.work
        {
            k += 1;
        }
        k + 1
    }

    fn li_series_at_teichmueller(&self, n: u32, c: u64) -> Result<PadicSeries, PadicError> {
        let omega = teichmueller_of_residue(self.p, c, self.work);
        let mut center_li = Vec::with_capacity(self.n_max as usize);
        for k in 1..=n {
            center_li.push(self.teichmueller_li(k, c)?);
        }
        let log_center = PadicNumber::zero(self.p, self.work); // log(omega) = 0
        self.li_series_from_center_values(n, &omega, &center_li, &log_center)
    }

    /// Power series of Li_n on the disk z = y + t, |t| <= 1/p, given the
    /// center values Li_1(y)..Li_n(y) and log(y).
    fn li_series_from_center_values(
        &self,
        n: u32,
        y: &PadicNumber,
        center_li: &[PadicNumber],
        _log_center: &PadicNumber,
    ) -> Result<PadicSeries, PadicError> {
        let len = self.series_len();
        // 1/(y+t) = sum_j (-1)^j t^j / y^{j+1}
        let y_inv = y.invert()?;
        let mut inv_coeffs = Vec::with_capacity(len);
        let mut cur = y_inv.clone();
        for j in 0..len {
            inv_coeffs.push(if j % 2 == 1 { cur.neg() } else { cur.clone() });
            cur = cur.mul(&y_inv);
        }
        // Li_1 coefficients: c_0 = -log(1-y), c_k = 1/(k (1-y)^k)
        let one = PadicNumber::one(self.p, self.work);
        let one_minus_y = one.sub(y);
        let li1_center = self
            .padic_log_checked(&one_minus_y)?
            .neg();
        let omy_inv = one_minus_y.invert()?;
        let mut coeffs = Vec::with_capacity(len);
        coeffs.push(center_li.first().cloned().unwrap_or(li1_center));
        let mut pw = omy_inv.clone();
        for k in 1..len {
            let kp = PadicNumber::from_integer(
                self.p,
                &BigInt::from(k),
                self.work + ilog_p(self.p, k as u64) as i64 + 1,
            );
            coeffs.push(pw.div(&kp)?);
            pw = pw.mul(&omy_inv);
        }
        let mut series = coeffs;
        // integrate up: Li_m' = Li_{m-1} / z
        for m in 2..=n {
            let prev = series;
            let mut next = Vec::with_capacity(len);
            next.push(center_li[m as usize - 1].clone());
            for k in 1..len {
                // coefficient of t^{k-1} in Li_{m-1}(y+t)/(y+t), divided by k
                let mut s = PadicNumber::zero(self.p, i64::MAX / 4);
                for i in 0..k {
                    let t = prev[i].mul(&inv_coeffs[k - 1 - i]);
                    s = s.add(&t);
                }
                let kp = PadicNumber::from_integer(
                    self.p,
                    &BigInt::from(k),
                    self.work + ilog_p(self.p, k as u64) as i64 + 1,
                );
                next.push(s.div(&kp)?);
            }
            series = next;
        }
        Ok(self.finish_series(y, series, n as i64))
    }

    fn finish_series(&self, y: &PadicNumber, coeffs: Vec<PadicNumber>, n_eff: i64) -> PadicSeries {
        // v(c_k) >= vmin - n log_p k >= intercept + slope k  for all k
        let k0 = coeffs.len() as i64;
        let vmin = coeffs
            .iter()
            .map(|c| c.valuation_lower_bound())
            .min()
            .unwrap_or(0)
            .min(0);
        let intercept = rq(vmin) - rq(n_eff) * rq(ilog_p(self.p, k0 as u64) as i64 + 1);
        let slope = BigRational::new(BigInt::from(-2 * n_eff), BigInt::from(k0));
        PadicSeries {
            p: self.p,
            center: y.clone(),
            radius_exp: 1,
            coeffs,
            tail: TailBound::new(intercept, slope),
        }
    }

    fn padic_log_checked(&self, x: &PadicNumber) -> Result<PadicNumber, PadicError> {
        padic_log(x)
    }

    /// Power series of log on the disk z = y + t.
    pub fn log_series(&self, y: &PadicNumber) -> Result<PadicSeries, PadicError> {
        if y.valuation() != Some(0) {
            return Err(PadicError::BadCenter("log series needs a unit center".into()));
        }
        let len = self.series_len();
        let y_inv = y.invert()?;
        let mut coeffs = Vec::with_capacity(len);
        coeffs.push(padic_log(y)?);
        let mut pw = y_inv.clone();
        for k in 1..len {
            let kp = PadicNumber::from_integer(
                self.p,
                &BigInt::from(k),
                self.work + ilog_p(self.p, k as u64) as i64 + 1,
            );
            let c = pw.div(&kp)?;
            coeffs.push(if k % 2 == 0 { c.neg() } else { c });
            pw = pw.mul(&y_inv);
        }
        Ok(self.finish_series(y, coeffs, 1))
    }

    /// Power series of Li_n on the disk z = y + t around an arbitrary unit
    /// center y with y != 0, 1 mod p.
    pub fn li_series(&self, n: u32, y: &PadicNumber) -> Result<PadicSeries, PadicError> {
        assert!(n >= 1 && n <= self.n_max);
        if y.valuation() != Some(0) {
            return Err(PadicError::BadCenter("center must be a unit".into()));
        }
        let c = residue_of(y)?;
        if c == 1 {
            return Err(PadicError::DiskOfOne);
        }
        if c == 0 {
            return Err(PadicError::BadCenter("center reduces to 0".into()));
        }
        let omega = teichmueller_of_residue(self.p, c, self.work);
        let t0 = y.sub(&omega);
        if t0.is_zero() {
            return self.li_series_at_teichmueller(n, c);
        }
        // seed the center values by evaluating the Teichmueller-centered
        // series at t0, then rebuild the series at y
        let mut center_li = Vec::with_capacity(n as usize);
        for k in 1..=n {
            let s = self.li_series_at_teichmueller(k, c)?;
            center_li.push(s.eval(&t0));
        }
        let log_center = padic_log(y)?;
        self.li_series_from_center_values(n, y, &center_li, &log_center)
    }
}

/// Residue of a unit PadicNumber in [0, p).
pub fn residue_of(z: &PadicNumber) -> Result<u64, PadicError> {
    if z.valuation() != Some(0) {
        return Err(PadicError::BadCenter("residue of a non-unit".into()));
    }
    let p = z.prime();
    let r = z.to_rational();
    let pb = BigInt::from(p);
    let num = ((r.numer() % &pb) + &pb) % &pb;
    let den = ((r.denom() % &pb) + &pb) % &pb;
    let num = num.to_u64().unwrap();
    let den = den.to_u64().unwrap();
    let mut dinv = 0u64;
    for x in 1..p {
        if den * x % p == 1 {
            dinv = x;
            break;
        }
    }
    Ok(num * dinv % p)
}

/// One-shot evaluation: Coleman's Li_n at z to absolute precision p^-N.
pub fn padic_polylog(n: u32, z: &PadicNumber, prec: i64) -> Result<PadicNumber, PadicError> {
    let ev = PolylogEvaluator::new(z.prime(), n, prec)?;
    ev.polylog(n, z)
}
