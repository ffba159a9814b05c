//! The graded shuffle Hopf algebra on word functionals.
//!
//! Elements are finite Q-linear combinations of basis functionals `f_w`,
//! one per word.  The product is the shuffle sum, the coproduct is
//! deconcatenation, and the pairing with the completed enveloping algebra
//! sends `(f_w, w')` to 1 exactly when `w = w'`.  Everything here is exact
//! rational arithmetic; no floating point, no tolerance.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::ShuffleError;
use crate::words::{lyndon_words, GradedAlphabet, Letter, Word};

pub type Rational = BigRational;

fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Q-linear combination of word functionals `f_w`.
///
/// Zero coefficients are never stored, so structural equality is semantic
/// equality.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ShuffleElement {
    terms: BTreeMap<Word, Rational>,
}

/// Element of the tensor square, supported on pairs of words.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TensorElement {
    terms: BTreeMap<(Word, Word), Rational>,
}

impl ShuffleElement {
    pub fn zero() -> Self {
        ShuffleElement::default()
    }

    /// The unit: the functional of the empty word.
    pub fn one() -> Self {
        ShuffleElement::basis(Word::empty())
    }

    pub fn basis(w: Word) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(w, Rational::one());
        ShuffleElement { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, Rational)>) -> Self {
        let mut out = ShuffleElement::zero();
        for (w, c) in terms {
            out.add_term(w, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, w: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(w.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn add(&self, other: &ShuffleElement) -> ShuffleElement {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &ShuffleElement) -> ShuffleElement {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> ShuffleElement {
        if c.is_zero() {
            return ShuffleElement::zero();
        }
        ShuffleElement {
            terms: self
                .terms
                .iter()
                .map(|(w, v)| (w.clone(), v * c))
                .collect(),
        }
    }

    /// Weight if homogeneous, None for 0 or inhomogeneous elements.
    pub fn homogeneous_weight(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Word::weight);
        let first = it.next()?;
        it.all(|w| w == first).then_some(first)
    }

    fn kind(&self) -> Option<bool> {
        // Some(true) = polylog, Some(false) = motivic, None = only empty word
        self.terms
            .keys()
            .flat_map(|w| w.0.first())
            .next()
            .map(Letter::is_polylog)
    }

    /// The natural pairing with a word of the enveloping algebra.
    pub fn pair(&self, w: &Word) -> Rational {
        self.coefficient(w)
    }

    /// Counit: the coefficient of the empty word.
    pub fn counit(&self) -> Rational {
        self.coefficient(&Word::empty())
    }
}

impl fmt::Display for ShuffleElement {
    /// Canonical form: terms sorted by (weight, lex).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut keys: Vec<_> = self.terms.keys().cloned().collect();
        keys.sort_by_key(|w| (w.weight(), w.clone()));
        let parts: Vec<String> = keys
            .iter()
            .map(|w| format!("({}, {})", w, self.terms[w]))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl TensorElement {
    pub fn zero() -> Self {
        TensorElement::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Word, Word), &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, l: &Word, r: &Word) -> Rational {
        self.terms
            .get(&(l.clone(), r.clone()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, l: Word, r: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        let key = (l, r);
        let entry = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &TensorElement) -> TensorElement {
        let mut out = self.clone();
        for ((l, r), c) in &other.terms {
            out.add_term(l.clone(), r.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &TensorElement) -> TensorElement {
        let mut out = self.clone();
        for ((l, r), c) in &other.terms {
            out.add_term(l.clone(), r.clone(), -c.clone());
        }
        out
    }

    pub fn tensor(left: &ShuffleElement, right: &ShuffleElement) -> TensorElement {
        let mut out = TensorElement::zero();
        for (lw, lc) in left.terms() {
            for (rw, rc) in right.terms() {
                out.add_term(lw.clone(), rw.clone(), lc * rc);
            }
        }
        out
    }

    /// Componentwise product in A (x) A: (a (x) b)(c (x) d) = ac (x) bd.
    pub fn product(&self, other: &TensorElement) -> Result<TensorElement, ShuffleError> {
        let mut out = TensorElement::zero();
        for ((l1, r1), c1) in &self.terms {
            for ((l2, r2), c2) in &other.terms {
                let l = shuffle_words(l1, l2)?;
                let r = shuffle_words(r1, r2)?;
                for (lw, lc) in l.terms() {
                    for (rw, rc) in r.terms() {
                        out.add_term(lw.clone(), rw.clone(), c1 * c2 * lc * rc);
                    }
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((l, r), c)| format!("({} (x) {}, {})", l, r, c))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Shuffle of two bare words as a ShuffleElement (with multiplicities).
pub fn shuffle_words(a: &Word, b: &Word) -> Result<ShuffleElement, ShuffleError> {
    if let (Some(x), Some(y)) = (a.0.first(), b.0.first()) {
        if x.is_polylog() != y.is_polylog() {
            return Err(ShuffleError::AlphabetMismatch);
        }
    }
    fn go(a: &[Letter], b: &[Letter], acc: &mut Vec<Letter>, out: &mut ShuffleElement) {
        if a.is_empty() && b.is_empty() {
            out.add_term(Word(acc.clone()), Rational::one());
            return;
        }
        if let Some((&h, t)) = a.split_first() {
            acc.push(h);
            go(t, b, acc, out);
            acc.pop();
        }
        if let Some((&h, t)) = b.split_first() {
            acc.push(h);
            go(a, t, acc, out);
            acc.pop();
        }
    }
    let mut out = ShuffleElement::zero();
    let mut acc = Vec::with_capacity(a.len() + b.len());
    go(&a.0, &b.0, &mut acc, &mut out);
    Ok(out)
}

/// Bilinear extension of the shuffle product.
pub fn shuffle_product(
    x: &ShuffleElement,
    y: &ShuffleElement,
) -> Result<ShuffleElement, ShuffleError> {
    if let (Some(kx), Some(ky)) = (x.kind(), y.kind()) {
        if kx != ky {
            return Err(ShuffleError::AlphabetMismatch);
        }
    }
    let mut out = ShuffleElement::zero();
    for (wx, cx) in x.terms() {
        for (wy, cy) in y.terms() {
            let sh = shuffle_words(wx, wy)?;
            for (w, c) in sh.terms() {
                out.add_term(w.clone(), cx * cy * c);
            }
        }
    }
    Ok(out)
}

/// Shuffle power x^n.
pub fn shuffle_power(x: &ShuffleElement, n: u32) -> Result<ShuffleElement, ShuffleError> {
    let mut out = ShuffleElement::one();
    for _ in 0..n {
        out = shuffle_product(&out, x)?;
    }
    Ok(out)
}

/// Deconcatenation coproduct.
pub fn deconcat_coproduct(x: &ShuffleElement) -> TensorElement {
    let mut out = TensorElement::zero();
    for (w, c) in x.terms() {
        for k in 0..=w.len() {
            out.add_term(Word(w.0[..k].to_vec()), Word(w.0[k..].to_vec()), c.clone());
        }
    }
    out
}

/// Reduced coproduct: the coproduct minus the two primitive terms.
pub fn reduced_coproduct(x: &ShuffleElement) -> TensorElement {
    let mut out = deconcat_coproduct(x);
    for (w, c) in x.terms() {
        out.add_term(Word::empty(), w.clone(), -c.clone());
        out.add_term(w.clone(), Word::empty(), -c.clone());
    }
    // the counit part x(e) * e (x) e was double-subtracted
    let eps = x.counit();
    if !eps.is_zero() {
        out.add_term(Word::empty(), Word::empty(), eps);
    }
    out
}

/// Unshuffle coproduct on the enveloping algebra: all subsequence splits of
/// the positions of `w`, with multiplicity.
pub fn unshuffle(w: &Word) -> Vec<((Word, Word), Rational)> {
    let n = w.len();
    let mut acc: BTreeMap<(Word, Word), Rational> = BTreeMap::new();
    for mask in 0u64..(1u64 << n) {
        let mut l = Vec::new();
        let mut r = Vec::new();
        for (i, &letter) in w.0.iter().enumerate() {
            if mask & (1 << i) != 0 {
                l.push(letter);
            } else {
                r.push(letter);
            }
        }
        *acc.entry((Word(l), Word(r))).or_insert_with(Rational::zero) += Rational::one();
    }
    acc.into_iter().collect()
}

/// The shuffle monomials of the given total weight in the Lyndon-word
/// generators, expanded in the word basis.  By Radford's theorem they form a
/// vector-space basis of the weight component.
pub fn monomial_basis(
    alphabet: &GradedAlphabet,
    weight: u32,
) -> Result<Vec<ShuffleElement>, ShuffleError> {
    if weight == 0 {
        return Ok(vec![ShuffleElement::one()]);
    }
    let lyndons = lyndon_words(alphabet, weight);
    // multisets of Lyndon words of total weight `weight`, enumerated as
    // non-increasing index sequences
    let mut out = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    fn rec(
        lyndons: &[Word],
        start: usize,
        remaining: u32,
        stack: &mut Vec<usize>,
        out: &mut Vec<ShuffleElement>,
    ) -> Result<(), ShuffleError> {
        if remaining == 0 {
            let mut prod = ShuffleElement::one();
            for &i in stack.iter() {
                prod = shuffle_product(&prod, &ShuffleElement::basis(lyndons[i].clone()))?;
            }
            out.push(prod);
            return Ok(());
        }
        for i in start..lyndons.len() {
            let w = lyndons[i].weight();
            if w <= remaining {
                stack.push(i);
                rec(lyndons, i, remaining - w, stack, out)?;
                stack.pop();
            }
        }
        Ok(())
    }
    rec(&lyndons, 0, weight, &mut stack, &mut out)?;
    Ok(out)
}

/// The polylogarithmic quotient coordinate ring on the alphabet {0,1}, with
/// distinguished coordinates log^u = f_0 and Li^u_n = f_{0^{n-1} 1} up to a
/// fixed depth bound.
#[derive(Clone, Debug)]
pub struct PolylogCoordinateRing {
    depth: u32,
}

impl PolylogCoordinateRing {
    pub fn new(depth: u32) -> Self {
        assert!(depth >= 1);
        PolylogCoordinateRing { depth }
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn alphabet(&self) -> GradedAlphabet {
        GradedAlphabet::polylog()
    }

    fn check(&self, weight: u32) -> Result<(), ShuffleError> {
        if weight > self.depth {
            return Err(ShuffleError::DepthExceeded {
                found: weight,
                bound: self.depth,
            });
        }
        Ok(())
    }

    /// log^u = f_0.
    pub fn log_u(&self) -> ShuffleElement {
        ShuffleElement::basis(Word::single(Letter::E0))
    }

    /// Li^u_n = f_{0^{n-1} 1}.
    pub fn li_u(&self, n: u32) -> Result<ShuffleElement, ShuffleError> {
        assert!(n >= 1);
        self.check(n)?;
        Ok(ShuffleElement::basis(Word::zeros_then_one(n as usize - 1)))
    }

    /// (log^u)^m = m! f_{0^m}.
    pub fn log_power(&self, m: u32) -> Result<ShuffleElement, ShuffleError> {
        self.check(m)?;
        shuffle_power(&self.log_u(), m)
    }

    /// The reduced coproduct of Li^u_n, computed by deconcatenation.
    ///
    /// With the zeros-first convention this literally equals
    /// sum_{i=1}^{n-1} (log^u)^i / i!  (x)  Li^u_{n-i}.
    pub fn reduced_coproduct_polylog(&self, n: u32) -> Result<TensorElement, ShuffleError> {
        assert!(n >= 1);
        self.check(n)?;
        Ok(reduced_coproduct(&self.li_u(n)?))
    }
}

/// n! as a rational.
pub fn factorial(n: u32) -> Rational {
    let mut out = Rational::one();
    for k in 2..=n as i64 {
        out *= rat(k);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::GradedAlphabet;

    fn f(s: &str) -> ShuffleElement {
        ShuffleElement::basis(s.parse().unwrap())
    }

    #[test]
    fn one_letter_shuffles() {
        let prod = shuffle_product(&f("t2"), &f("t3")).unwrap();
        assert_eq!(prod, f("t2.t3").add(&f("t3.t2")));

        let prod = shuffle_product(&f("0"), &f("0")).unwrap();
        assert_eq!(prod, f("00").scale(&Rational::from_integer(2.into())));
    }

    #[test]
    fn shuffle_of_one_into_onezero() {
        // f_1 * f_10 = 2 f_110 + f_101, by enumerating the three shuffles
        let prod = shuffle_product(&f("1"), &f("10")).unwrap();
        let expected = f("110")
            .scale(&Rational::from_integer(2.into()))
            .add(&f("101"));
        assert_eq!(prod, expected);
    }

    #[test]
    fn alphabet_mismatch_rejected() {
        assert_eq!(
            shuffle_product(&f("0"), &f("t2")),
            Err(ShuffleError::AlphabetMismatch)
        );
    }

    #[test]
    fn deconcatenation_examples() {
        let d = deconcat_coproduct(&f("10"));
        let mut expect = TensorElement::zero();
        expect.add_term("10".parse().unwrap(), Word::empty(), Rational::one());
        expect.add_term("1".parse().unwrap(), "0".parse().unwrap(), Rational::one());
        expect.add_term(Word::empty(), "10".parse().unwrap(), Rational::one());
        assert_eq!(d, expect);

        let d = reduced_coproduct(&f("01"));
        let mut expect = TensorElement::zero();
        expect.add_term("0".parse().unwrap(), "1".parse().unwrap(), Rational::one());
        assert_eq!(d, expect);

        assert!(reduced_coproduct(&f("t2")).is_zero());
    }

    #[test]
    fn unshuffle_examples() {
        let w: Word = "t2.t3".parse().unwrap();
        let mu = unshuffle(&w);
        assert_eq!(mu.len(), 4);

        let mu = unshuffle(&Word::empty());
        assert_eq!(mu.len(), 1);
        assert_eq!(mu[0].0, (Word::empty(), Word::empty()));

        // <f_t * f_t, tt> = 2 via duality
        let x = f("t2");
        let prod = shuffle_product(&x, &x).unwrap();
        let w: Word = "t2.t2".parse().unwrap();
        assert_eq!(prod.pair(&w), Rational::from_integer(2.into()));
        let lhs: Rational = unshuffle(&w)
            .iter()
            .map(|((l, r), c)| x.pair(l) * x.pair(r) * c)
            .sum();
        assert_eq!(lhs, Rational::from_integer(2.into()));
    }

    #[test]
    fn polylog_reduced_coproduct_small() {
        let ring = PolylogCoordinateRing::new(8);
        assert!(ring.reduced_coproduct_polylog(1).unwrap().is_zero());

        // n = 2: log (x) Li_1
        let d = ring.reduced_coproduct_polylog(2).unwrap();
        let expect = TensorElement::tensor(&ring.log_u(), &ring.li_u(1).unwrap());
        assert_eq!(d, expect);

        // n = 3: log (x) Li_2 + log^2/2 (x) Li_1
        let d = ring.reduced_coproduct_polylog(3).unwrap();
        let half = Rational::new(1.into(), 2.into());
        let expect = TensorElement::tensor(&ring.log_u(), &ring.li_u(2).unwrap()).add(
            &TensorElement::tensor(&ring.log_power(2).unwrap().scale(&half), &ring.li_u(1).unwrap()),
        );
        assert_eq!(d, expect);
    }

    #[test]
    fn depth_bound_enforced() {
        let ring = PolylogCoordinateRing::new(3);
        assert!(ring.li_u(3).is_ok());
        assert!(matches!(
            ring.li_u(4),
            Err(ShuffleError::DepthExceeded { .. })
        ));
    }

    #[test]
    fn log_power_is_factorial_times_word() {
        let ring = PolylogCoordinateRing::new(6);
        for m in 1..=5u32 {
            let p = ring.log_power(m).unwrap();
            let w = Word(vec![Letter::E0; m as usize]);
            assert_eq!(p, ShuffleElement::basis(w).scale(&factorial(m)));
        }
    }

    #[test]
    fn monomial_basis_examples() {
        // alphabet {t2}: weight 2 -> [f_t2^2] = [2 f_{t2 t2}]
        let a = GradedAlphabet::motivic(&[2], &[]).unwrap();
        let b = monomial_basis(&a, 2).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(
            b[0],
            f("t2.t2").scale(&Rational::from_integer(2.into()))
        );

        // alphabet {t2, s3}: weight 3 -> [6 f_ttt, f_s3], two of them
        let a = GradedAlphabet::motivic(&[2], &[3]).unwrap();
        let b = monomial_basis(&a, 3).unwrap();
        assert_eq!(b.len(), 2);

        // weight 0 -> [1]
        let b = monomial_basis(&a, 0).unwrap();
        assert_eq!(b, vec![ShuffleElement::one()]);
    }
}
