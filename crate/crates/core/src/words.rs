//! Graded alphabets, words and Lyndon-word machinery.
//!
//! Two kinds of alphabet appear: the motivic one with letters `t<q>`
//! (weight 1, one per prime q) and `s<r>` (odd weight r >= 3), and the
//! polylogarithmic one with letters `0`, `1` (both weight 1).  Words index
//! the shuffle basis everywhere downstream, so the letter order fixed here
//! (taus ascending by prime, then sigmas ascending by weight) is load-bearing.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::WordError;

/// A single graded letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Letter {
    /// Polylogarithmic letter `0` (weight 1).
    E0,
    /// Polylogarithmic letter `1` (weight 1).
    E1,
    /// Motivic letter tau_q for a prime q (weight 1).
    Tau(u64),
    /// Motivic letter sigma_r for odd r >= 3 (weight r).
    Sigma(u32),
}

impl Letter {
    pub fn weight(&self) -> u32 {
        match self {
            Letter::E0 | Letter::E1 | Letter::Tau(_) => 1,
            Letter::Sigma(r) => *r,
        }
    }

    pub fn is_polylog(&self) -> bool {
        matches!(self, Letter::E0 | Letter::E1)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::E0 => write!(f, "0"),
            Letter::E1 => write!(f, "1"),
            Letter::Tau(q) => write!(f, "t{}", q),
            Letter::Sigma(r) => write!(f, "s{}", r),
        }
    }
}

impl FromStr for Letter {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, WordError> {
        match s {
            "0" => Ok(Letter::E0),
            "1" => Ok(Letter::E1),
            _ => {
                let (kind, rest) = s.split_at(1);
                let n = rest
                    .parse::<u64>()
                    .map_err(|_| WordError::BadLetter(s.to_string()))?;
                match kind {
                    "t" => Ok(Letter::Tau(n)),
                    "s" => {
                        let r = u32::try_from(n).map_err(|_| WordError::BadLetter(s.to_string()))?;
                        if r < 3 || r % 2 == 0 {
                            return Err(WordError::BadLetter(s.to_string()));
                        }
                        Ok(Letter::Sigma(r))
                    }
                    _ => Err(WordError::BadLetter(s.to_string())),
                }
            }
        }
    }
}

/// An ordered alphabet of graded letters.
///
/// Construction validates the grading rules and sorts the letters into the
/// canonical order, which is a strict total order fixed for the lifetime of
/// every word built over the alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedAlphabet {
    letters: Vec<Letter>,
}

impl GradedAlphabet {
    pub fn new(mut letters: Vec<Letter>) -> Result<Self, WordError> {
        letters.sort();
        for pair in letters.windows(2) {
            if pair[0] == pair[1] {
                return Err(WordError::DuplicateLetter(pair[0].to_string()));
            }
        }
        for l in &letters {
            if let Letter::Sigma(r) = l {
                if *r < 3 || *r % 2 == 0 {
                    return Err(WordError::BadLetter(l.to_string()));
                }
            }
        }
        let poly = letters.iter().filter(|l| l.is_polylog()).count();
        if poly != 0 && poly != letters.len() {
            return Err(WordError::MixedAlphabet);
        }
        Ok(GradedAlphabet { letters })
    }

    /// The polylogarithmic alphabet {0, 1}.
    pub fn polylog() -> Self {
        GradedAlphabet {
            letters: vec![Letter::E0, Letter::E1],
        }
    }

    /// Motivic alphabet with one tau per listed prime and one sigma per listed odd weight.
    pub fn motivic(primes: &[u64], sigma_weights: &[u32]) -> Result<Self, WordError> {
        let mut letters: Vec<Letter> = primes.iter().map(|&q| Letter::Tau(q)).collect();
        letters.extend(sigma_weights.iter().map(|&r| Letter::Sigma(r)));
        GradedAlphabet::new(letters)
    }

    /// Motivic alphabet for the tapered scheme: taus at all primes <= q_max,
    /// sigmas at odd weights 3..=depth.
    pub fn tapered(q_max: u64, depth: u32) -> Self {
        let primes = crate::points::primes_upto(q_max);
        let sigmas: Vec<u32> = (3..=depth).filter(|r| r % 2 == 1).collect();
        GradedAlphabet::motivic(&primes, &sigmas).expect("tapered alphabet is always valid")
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn contains(&self, l: &Letter) -> bool {
        self.letters.binary_search(l).is_ok()
    }

    pub fn tau_count(&self) -> usize {
        self.letters
            .iter()
            .filter(|l| matches!(l, Letter::Tau(_)))
            .count()
    }
}

/// A word over a graded alphabet; the empty word is allowed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn single(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().map(Letter::weight).sum()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Rotation by k positions: letters k.. followed by letters ..k.
    pub fn rotation(&self, k: usize) -> Word {
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    /// Word made of n copies of the letter `0` followed by `1`; this is the
    /// subscript of the polylogarithmic coordinate of weight n+1.
    pub fn zeros_then_one(zeros: usize) -> Word {
        let mut v = vec![Letter::E0; zeros];
        v.push(Letter::E1);
        Word(v)
    }

    /// True iff the word is strictly smaller than all of its proper rotations.
    ///
    /// Panics on the empty word: Lyndon-ness is undefined there.
    pub fn is_lyndon(&self) -> bool {
        assert!(!self.is_empty(), "is_lyndon: empty word rejected");
        (1..self.len()).all(|k| *self < self.rotation(k))
    }

    /// Chen-Fox-Lyndon factorisation into a non-increasing sequence of Lyndon
    /// words (Duval's algorithm).
    pub fn lyndon_factorisation(&self) -> Vec<Word> {
        let s = &self.0;
        let n = s.len();
        let mut out = Vec::new();
        let mut i = 0;
        while i < n {
            let mut j = i + 1;
            let mut k = i;
            while j < n && s[k] <= s[j] {
                if s[k] < s[j] {
                    k = i;
                } else {
                    k += 1;
                }
                j += 1;
            }
            while i <= k {
                out.push(Word(s[i..i + j - k].to_vec()));
                i += j - k;
            }
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "e");
        }
        if self.0.iter().all(Letter::is_polylog) {
            for l in &self.0 {
                write!(f, "{}", l)?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
            write!(f, "{}", parts.join("."))
        }
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, WordError> {
        if s == "e" {
            return Ok(Word::empty());
        }
        if s.chars().all(|c| c == '0' || c == '1') && !s.is_empty() {
            return Ok(Word(
                s.chars()
                    .map(|c| if c == '0' { Letter::E0 } else { Letter::E1 })
                    .collect(),
            ));
        }
        let letters: Result<Vec<Letter>, WordError> =
            s.split('.').map(Letter::from_str).collect();
        Ok(Word(letters?))
    }
}

/// All words over the alphabet of weight <= max_weight, the empty word
/// included, sorted by (weight, lex).
pub fn words_up_to_weight(alphabet: &GradedAlphabet, max_weight: u32) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut frontier = vec![Word::empty()];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for w in &frontier {
            for &l in alphabet.letters() {
                if w.weight() + l.weight() <= max_weight {
                    let mut v = w.0.clone();
                    v.push(l);
                    next.push(Word(v));
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.sort_by(|a, b| (a.weight(), a).cmp(&(b.weight(), b)));
    out
}

/// Words of exactly the given weight, sorted lexicographically.
pub fn words_of_weight(alphabet: &GradedAlphabet, weight: u32) -> Vec<Word> {
    words_up_to_weight(alphabet, weight)
        .into_iter()
        .filter(|w| w.weight() == weight)
        .collect()
}

/// All Lyndon words of weight <= max_weight, sorted by (weight, lex).
pub fn lyndon_words(alphabet: &GradedAlphabet, max_weight: u32) -> Vec<Word> {
    assert!(max_weight >= 1, "lyndon_words: max_weight must be >= 1");
    words_up_to_weight(alphabet, max_weight)
        .into_iter()
        .filter(|w| !w.is_empty() && w.is_lyndon())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tau(q: u64) -> Letter {
        Letter::Tau(q)
    }

    #[test]
    fn letter_order_is_taus_then_sigmas() {
        assert!(Letter::Tau(2) < Letter::Tau(3));
        assert!(Letter::Tau(97) < Letter::Sigma(3));
        assert!(Letter::Sigma(3) < Letter::Sigma(5));
        assert!(Letter::E0 < Letter::E1);
    }

    #[test]
    fn word_weights_are_additive() {
        let w1 = Word(vec![tau(2), Letter::Sigma(3)]);
        let w2 = Word(vec![tau(5)]);
        assert_eq!(Word::empty().weight(), 0);
        assert_eq!(w1.weight() + w2.weight(), w1.concat(&w2).weight());
    }

    #[test]
    fn lyndon_examples() {
        // alphabet {t2 < s3}, max weight 3 -> [t2, s3]
        let a = GradedAlphabet::motivic(&[2], &[3]).unwrap();
        let ws = lyndon_words(&a, 3);
        assert_eq!(
            ws,
            vec![Word::single(tau(2)), Word::single(Letter::Sigma(3))]
        );

        // alphabet {t2 < t3}, max weight 2 -> [t2, t3, t2.t3]
        let a = GradedAlphabet::motivic(&[2, 3], &[]).unwrap();
        let ws = lyndon_words(&a, 2);
        assert_eq!(
            ws,
            vec![
                Word::single(tau(2)),
                Word::single(tau(3)),
                Word(vec![tau(2), tau(3)])
            ]
        );

        // nothing fits below the smallest letter weight
        let a = GradedAlphabet::motivic(&[], &[3]).unwrap();
        assert!(lyndon_words(&a, 2).is_empty());
    }

    #[test]
    fn is_lyndon_examples() {
        assert!(Word(vec![tau(2), tau(3)]).is_lyndon());
        assert!(!Word(vec![tau(3), tau(2)]).is_lyndon());
        assert!(!Word(vec![tau(2), tau(2)]).is_lyndon());
    }

    #[test]
    #[should_panic(expected = "empty word rejected")]
    fn is_lyndon_rejects_empty() {
        Word::empty().is_lyndon();
    }

    /// Exhaustive check against rotations, as an oracle independent of any
    /// counting formula.
    #[test]
    fn lyndon_words_match_rotation_oracle() {
        let a = GradedAlphabet::motivic(&[2, 3], &[3]).unwrap();
        for w in words_up_to_weight(&a, 5) {
            if w.is_empty() {
                continue;
            }
            let brute = (1..w.len()).all(|k| w < w.rotation(k));
            assert_eq!(w.is_lyndon(), brute, "word {}", w);
        }
    }

    fn moebius(n: u32) -> i64 {
        let mut n = n;
        let mut m: i64 = 1;
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                n /= d;
                if n % d == 0 {
                    return 0;
                }
                m = -m;
            }
            d += 1;
        }
        if n > 1 {
            m = -m;
        }
        m
    }

    #[test]
    fn necklace_count_formula() {
        // number of Lyndon words of weight m over k weight-1 letters equals
        // (1/m) sum_{d|m} mu(d) k^{m/d}
        for k in 1u64..=3 {
            let primes: Vec<u64> = crate::points::primes_upto(10)
                .into_iter()
                .take(k as usize)
                .collect();
            let a = GradedAlphabet::motivic(&primes, &[]).unwrap();
            let ws = lyndon_words(&a, 6);
            for m in 1u32..=6 {
                let count = ws.iter().filter(|w| w.weight() == m).count() as i64;
                let mut expect = 0i64;
                for d in 1..=m {
                    if m % d == 0 {
                        expect += moebius(d) * (k as i64).pow(m / d);
                    }
                }
                expect /= m as i64;
                assert_eq!(count, expect, "k={} m={}", k, m);
            }
        }
    }

    #[test]
    fn chen_fox_lyndon_unique_factorisation() {
        let a = GradedAlphabet::motivic(&[2, 3], &[]).unwrap();
        for w in words_up_to_weight(&a, 5) {
            if w.is_empty() {
                continue;
            }
            let fac = w.lyndon_factorisation();
            // every factor is Lyndon, factors are non-increasing, and they
            // concatenate back to the word
            assert!(fac.iter().all(|f| f.is_lyndon()), "word {}", w);
            assert!(fac.windows(2).all(|p| p[0] >= p[1]), "word {}", w);
            let back = fac
                .iter()
                .fold(Word::empty(), |acc, f| acc.concat(f));
            assert_eq!(back, w);
        }
    }

    #[test]
    fn word_serialisation_round_trip() {
        for s in ["e", "t2.t2.s3", "001", "t5", "0", "1", "s5.t2"] {
            let w: Word = s.parse().unwrap();
            let back = w.to_string();
            let w2: Word = back.parse().unwrap();
            assert_eq!(w, w2);
        }
        assert_eq!("t2.t2.s3".parse::<Word>().unwrap().weight(), 5);
        assert_eq!("001".parse::<Word>().unwrap().weight(), 3);
    }
}
