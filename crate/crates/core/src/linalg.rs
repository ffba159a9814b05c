//! Exact rational linear algebra and the epsilon-linear-independence
//! certificate.
//!
//! The absolute value throughout is the p-adic one on Q, so all comparisons
//! against epsilon = p^-N reduce to exact valuation arithmetic.  Nothing
//! here is approximate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::LinalgError;

pub type Rational = BigRational;

/// p-adic valuation of a nonzero rational; None encodes +infinity (i.e. 0).
pub fn val_p(x: &Rational, p: u64) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut v: i64 = 0;
    let mut n = x.numer().abs();
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    let mut d = x.denom().abs();
    while (&d % &p).is_zero() {
        d /= &p;
        v -= 1;
    }
    Some(v)
}

/// |x|_p > p^-n ?
pub fn abs_p_greater(x: &Rational, p: u64, n: i64) -> bool {
    match val_p(x, p) {
        Some(v) => v < n,
        None => false,
    }
}

/// Finite-precision context: the prime and epsilon = p^-exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EpsilonContext {
    pub p: u64,
    pub exponent: u32,
}

impl EpsilonContext {
    pub fn new(p: u64, exponent: u32) -> Self {
        assert!(exponent >= 1, "epsilon must be <= 1/p");
        EpsilonContext { p, exponent }
    }

    pub fn epsilon(&self) -> Rational {
        let mut den = BigInt::one();
        for _ in 0..self.exponent {
            den *= BigInt::from(self.p);
        }
        Rational::new(BigInt::one(), den)
    }
}

/// Dense matrix of exact rationals, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RationalMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map(|v| v.len()).unwrap_or(0);
        if rows.iter().any(|v| v.len() != c) {
            return Err(LinalgError::Dimension("ragged rows".into()));
        }
        Ok(RationalMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Gaussian elimination to reduced row echelon form; returns the pivot
    /// column of each pivot row.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = self[(r, c)].recip();
            for j in c..self.cols {
                let v = &self[(r, j)] * &inv;
                self[(r, j)] = v;
            }
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let f = self[(i, c)].clone();
                    for j in c..self.cols {
                        let v = &self[(i, j)] - &f * &self[(r, j)];
                        self[(i, j)] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    pub fn transpose(&self) -> RationalMatrix {
        let mut t = RationalMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn det(&self) -> Rational {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Rational::zero();
            };
            if pr != c {
                m.swap_rows(c, pr);
                det = -det;
            }
            det *= m[(c, c)].clone();
            let inv = m[(c, c)].recip();
            for i in c + 1..n {
                if !m[(i, c)].is_zero() {
                    let f = &m[(i, c)] * &inv;
                    for j in c..n {
                        let v = &m[(i, j)] - &f * &m[(c, j)];
                        m[(i, j)] = v;
                    }
                }
            }
        }
        det
    }

    /// Basis of the right kernel, in reduced echelon form.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        let mut basis = Vec::new();
        for &fc in &free {
            let mut v = vec![Rational::zero(); self.cols];
            v[fc] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[(r, fc)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Solve M x = b; Err(Inconsistent) when there is no solution.  When the
    /// solution is not unique the free variables are set to zero.
    pub fn solve(&self, b: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::Dimension(format!(
                "rhs has length {}, expected {}",
                b.len(),
                self.rows
            )));
        }
        let mut aug = RationalMatrix::zero(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return Err(LinalgError::Inconsistent);
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug[(r, self.cols)].clone();
        }
        Ok(x)
    }
}

impl std::ops::Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

fn minor_det(vectors: &[Vec<Rational>], cols: &[usize]) -> Rational {
    let d = vectors.len();
    let mut m = RationalMatrix::zero(d, d);
    for i in 0..d {
        for (j, &c) in cols.iter().enumerate() {
            m[(i, j)] = vectors[i][c].clone();
        }
    }
    m.det()
}

/// Lexicographic enumeration of the d-subsets of 0..n.
fn column_subsets(n: usize, d: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = if d <= n {
        Some((0..d).collect())
    } else {
        None
    };
    std::iter::from_fn(move || {
        let out = current.clone()?;
        // advance
        let c = current.as_mut().unwrap();
        let mut i = d;
        loop {
            if i == 0 {
                current = None;
                break;
            }
            i -= 1;
            if c[i] < n - (d - i) {
                c[i] += 1;
                for k in i + 1..d {
                    c[k] = c[k - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}

/// True iff some d x d minor of the d vectors has p-adic absolute value
/// greater than epsilon.  Minors are scanned in lexicographic column order
/// with early exit, so the outcome and the work done are deterministic.
pub fn eps_linearly_independent(
    vectors: &[Vec<Rational>],
    ctx: &EpsilonContext,
) -> Result<bool, LinalgError> {
    let d = vectors.len();
    if d == 0 {
        return Ok(true);
    }
    let n = vectors[0].len();
    if vectors.iter().any(|v| v.len() != n) {
        return Err(LinalgError::Dimension("vectors of unequal length".into()));
    }
    if d > n {
        return Err(LinalgError::TooManyVectors { vectors: d, len: n });
    }
    for cols in column_subsets(n, d) {
        let det = minor_det(vectors, &cols);
        if abs_p_greater(&det, ctx.p, ctx.exponent as i64) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The first (lexicographic) certifying minor, if any.
fn certifying_minor(
    vectors: &[Vec<Rational>],
    ctx: &EpsilonContext,
) -> Option<(Vec<usize>, Rational)> {
    let d = vectors.len();
    let n = vectors[0].len();
    for cols in column_subsets(n, d) {
        let det = minor_det(vectors, &cols);
        if abs_p_greater(&det, ctx.p, ctx.exponent as i64) {
            return Some((cols, det));
        }
    }
    None
}

/// A perturbation radius eps' such that every family within eps' of the
/// input (entrywise p-adic distance) is genuinely linearly independent.
///
/// Follows the proof recipe: Delta_i bounds the operator norm of the i-th
/// partial determinant functional (cofactor norms, enlarged to the
/// ultrametric Hadamard bound M^{d-1} so the bound survives perturbation of
/// the earlier columns), and eps' is the largest power of p with
/// d * Delta * eps' <= eps / 2.
pub fn perturbation_threshold(
    vectors: &[Vec<Rational>],
    ctx: &EpsilonContext,
) -> Result<Rational, LinalgError> {
    let d = vectors.len();
    if d == 0 {
        return Err(LinalgError::NotIndependent);
    }
    let n = vectors[0].len();
    if vectors.iter().any(|v| v.len() != n) {
        return Err(LinalgError::Dimension("vectors of unequal length".into()));
    }
    if d > n {
        return Err(LinalgError::TooManyVectors { vectors: d, len: n });
    }
    let Some((cols, _det)) = certifying_minor(vectors, ctx) else {
        return Err(LinalgError::NotIndependent);
    };
    let p = ctx.p;

    // |entry|_p <= M over the certifying minor, M >= 1
    let mut mval: i64 = 0; // M = p^{-mval}, so mval = min valuation, capped at 0
    let mut square = RationalMatrix::zero(d, d);
    for i in 0..d {
        for (j, &c) in cols.iter().enumerate() {
            square[(i, j)] = vectors[i][c].clone();
            if let Some(v) = val_p(&square[(i, j)], p) {
                mval = mval.min(v);
            }
        }
    }

    // cofactor norms Delta_i = max_j |C_ij|
    let mut delta_val: i64 = i64::MAX; // Delta = p^{-delta_val}
    for i in 0..d {
        for j in 0..d {
            let mut sub = RationalMatrix::zero(d - 1, d - 1);
            for (ri, r) in (0..d).filter(|&r| r != i).enumerate() {
                for (cj, c) in (0..d).filter(|&c| c != j).enumerate() {
                    sub[(ri, cj)] = square[(r, c)].clone();
                }
            }
            let cof = if d == 1 { Rational::one() } else { sub.det() };
            if let Some(v) = val_p(&cof, p) {
                delta_val = delta_val.min(v);
            }
        }
    }
    if delta_val == i64::MAX {
        delta_val = 0;
    }
    // enlarge to the Hadamard bound M^{d-1}
    let hadamard_val = mval * (d as i64 - 1);
    let delta_val = delta_val.min(hadamard_val);

    // largest eps' = p^-k with d * p^{-delta_val} * p^-k <= p^-N / 2
    let eps = ctx.epsilon();
    let delta = pow_p(p, -delta_val);
    let dr = Rational::from_integer((d as i64).into());
    let half_eps = eps / Rational::from_integer(2.into());
    let mut k: i64 = (ctx.exponent as i64 - delta_val).max(1);
    while &dr * &delta * pow_p(p, -k) > half_eps {
        k += 1;
    }
    Ok(pow_p(p, -k))
}

fn pow_p(p: u64, e: i64) -> Rational {
    let mut n = BigInt::one();
    for _ in 0..e.unsigned_abs() {
        n *= BigInt::from(p);
    }
    if e >= 0 {
        Rational::from_integer(n)
    } else {
        Rational::new(BigInt::one(), n)
    }
}

/// Coordinates of the orthogonal projection of `target` onto the span of the
/// spanning vectors, via the Gram system; exact.
pub fn project_coefficients(
    target: &[Rational],
    spanning: &[Vec<Rational>],
) -> Result<Vec<Rational>, LinalgError> {
    let k = spanning.len();
    if k == 0 {
        return Ok(Vec::new());
    }
    let n = target.len();
    if spanning.iter().any(|v| v.len() != n) {
        return Err(LinalgError::Dimension(
            "spanning vectors must match target length".into(),
        ));
    }
    let mut gram = RationalMatrix::zero(k, k);
    for i in 0..k {
        for j in 0..k {
            gram[(i, j)] = dot(&spanning[i], &spanning[j]);
        }
    }
    if gram.rank() < k {
        return Err(LinalgError::DependentSpan);
    }
    let rhs: Vec<Rational> = (0..k).map(|i| dot(&spanning[i], target)).collect();
    gram.solve(&rhs)
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn rv(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&n| r(n)).collect()
    }

    #[test]
    fn valuations() {
        assert_eq!(val_p(&r(50), 5), Some(2));
        assert_eq!(val_p(&Rational::new(1.into(), 25.into()), 5), Some(-2));
        assert_eq!(val_p(&Rational::zero(), 5), None);
    }

    #[test]
    fn eps_independence_examples() {
        let ctx = EpsilonContext::new(5, 1);
        // standard basis
        assert!(eps_linearly_independent(&[rv(&[1, 0]), rv(&[0, 1])], &ctx).unwrap());

        // (1,0), (p^{N+1}, 0): every 2x2 minor vanishes
        let ctx2 = EpsilonContext::new(5, 3);
        assert!(!eps_linearly_independent(&[rv(&[1, 0]), rv(&[625, 0])], &ctx2).unwrap());

        // (1,0), (1,p) with eps = p^-2: minor = p, |p| = p^-1 > p^-2
        let ctx3 = EpsilonContext::new(5, 2);
        assert!(eps_linearly_independent(&[rv(&[1, 0]), rv(&[1, 5])], &ctx3).unwrap());
        // but not with eps = p^-1
        let ctx4 = EpsilonContext::new(5, 1);
        assert!(!eps_linearly_independent(&[rv(&[1, 0]), rv(&[1, 5])], &ctx4).unwrap());
    }

    #[test]
    fn eps_independence_rejects_too_many_vectors() {
        let ctx = EpsilonContext::new(5, 1);
        assert!(matches!(
            eps_linearly_independent(&[rv(&[1]), rv(&[2]), rv(&[3])], &ctx),
            Err(LinalgError::TooManyVectors { .. })
        ));
    }

    #[test]
    fn threshold_examples() {
        let ctx = EpsilonContext::new(5, 1);
        let eps1 = perturbation_threshold(&[rv(&[1, 0]), rv(&[0, 1])], &ctx).unwrap();
        assert!(eps1 > Rational::zero());

        // d = 1, vector (1): recipe gives a positive threshold <= eps/2
        let t = perturbation_threshold(&[rv(&[1])], &ctx).unwrap();
        assert!(t <= ctx.epsilon());

        // dependent vectors are rejected
        assert_eq!(
            perturbation_threshold(&[rv(&[1, 0]), rv(&[5, 0])], &EpsilonContext::new(5, 3)),
            Err(LinalgError::NotIndependent)
        );
    }

    #[test]
    fn kernel_and_solve() {
        let m = RationalMatrix::from_rows(vec![rv(&[0, 0]), rv(&[0, 0])]).unwrap();
        assert_eq!(m.kernel_basis().len(), 2);

        let m = RationalMatrix::identity(3);
        assert!(m.kernel_basis().is_empty());

        let m = RationalMatrix::from_rows(vec![rv(&[1, 1])]).unwrap();
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        // reduced echelon kernel vector for [1 1] is (-1, 1)
        assert_eq!(k[0], vec![r(-1), r(1)]);

        let m = RationalMatrix::from_rows(vec![rv(&[1, 2]), rv(&[3, 4])]).unwrap();
        let x = m.solve(&rv(&[5, 11])).unwrap();
        assert_eq!(x, vec![r(1), r(2)]);

        let m = RationalMatrix::from_rows(vec![rv(&[1, 1]), rv(&[1, 1])]).unwrap();
        assert_eq!(m.solve(&rv(&[1, 2])), Err(LinalgError::Inconsistent));
    }

    #[test]
    fn projection_examples() {
        // target already in span: exact coordinates
        let c =
            project_coefficients(&rv(&[3, 6, 0]), &[rv(&[1, 2, 0]), rv(&[0, 0, 1])]).unwrap();
        assert_eq!(c, vec![r(3), r(0)]);

        // target orthogonal to span: zero vector
        let c = project_coefficients(&rv(&[0, 0, 7]), &[rv(&[1, 0, 0]), rv(&[0, 1, 0])]).unwrap();
        assert_eq!(c, vec![r(0), r(0)]);

        // target = v1 + residual orthogonal to span
        let c = project_coefficients(&rv(&[1, 2, 5]), &[rv(&[1, 2, 0]), rv(&[2, -1, 0])]).unwrap();
        assert_eq!(c, vec![r(1), r(0)]);

        assert_eq!(
            project_coefficients(&rv(&[1, 0]), &[rv(&[1, 0]), rv(&[2, 0])]),
            Err(LinalgError::DependentSpan)
        );
    }

    #[test]
    fn projection_round_trip() {
        // project_coefficients o (linear combination) = identity
        let basis = vec![rv(&[1, 2, 3, 0]), rv(&[0, 1, -1, 2]), rv(&[4, 0, 0, 1])];
        let coeffs = rv(&[3, -7, 2]);
        let mut target = vec![Rational::zero(); 4];
        for (c, v) in coeffs.iter().zip(&basis) {
            for (t, x) in target.iter_mut().zip(v) {
                *t += c * x;
            }
        }
        let got = project_coefficients(&target, &basis).unwrap();
        assert_eq!(got, coeffs);
    }
}
