//! Compositions, binary words and exact linear combinations over them.
//!
//! A composition `(n1,...,nr)` is identified with the binary word
//! `1 0^{n1-1} ... 1 0^{nr-1}`. Indices follow the increasing convention
//! `0 < m1 < ... < mr`, so a composition is admissible when its *last* part
//! is at least 2.
//!
//! Two products live here: the shuffle product on words (products of
//! iterated integrals) and the harmonic (quasi-shuffle) product on
//! compositions (products of nested sums).

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `binom(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// A finite sequence of positive integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Composition(Vec<u32>);

impl Composition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::InvalidComposition(format!(
                "parts must be >= 1, got {parts:?}"
            )));
        }
        Ok(Composition(parts))
    }

    /// Caller guarantees every part is at least 1.
    pub(crate) fn from_parts_unchecked(parts: Vec<u32>) -> Self {
        debug_assert!(parts.iter().all(|&p| p >= 1));
        Composition(parts)
    }

    pub fn empty() -> Self {
        Composition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Last part >= 2. The empty composition is not admissible but is a
    /// valid key wherever "admissible or empty" is allowed.
    pub fn is_admissible(&self) -> bool {
        self.0.last().is_some_and(|&p| p >= 2)
    }

    pub fn all_parts_at_least(&self, m: u32) -> bool {
        self.0.iter().all(|&p| p >= m)
    }

    pub fn reversed(&self) -> Self {
        Composition(self.0.iter().rev().copied().collect())
    }

    pub fn concat(&self, other: &Composition) -> Self {
        let mut parts = self.0.clone();
        parts.extend_from_slice(&other.0);
        Composition(parts)
    }

    /// All compositions of `weight` with parts in `[min_part, weight]`.
    pub fn all_of_weight(weight: u32, min_part: u32) -> Vec<Composition> {
        let min_part = min_part.max(1);
        let mut out = Vec::new();
        let mut current = Vec::new();
        fn rec(rest: u32, min_part: u32, current: &mut Vec<u32>, out: &mut Vec<Composition>) {
            if rest == 0 {
                out.push(Composition(current.clone()));
                return;
            }
            for p in min_part..=rest {
                current.push(p);
                rec(rest - p, min_part, current, out);
                current.pop();
            }
        }
        rec(weight, min_part, &mut current, &mut out);
        out.sort();
        out
    }

    /// Admissible compositions of exactly `weight`.
    pub fn admissible_of_weight(weight: u32) -> Vec<Composition> {
        Self::all_of_weight(weight, 1)
            .into_iter()
            .filter(|c| c.is_admissible())
            .collect()
    }
}

impl Ord for Composition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then(self.depth().cmp(&other.depth()))
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Composition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Parses `"2,3"`, `"(2,3)"` or `""`/`"()"` for the empty composition.
impl FromStr for Composition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(s)
            .trim();
        if s.is_empty() {
            return Ok(Composition::empty());
        }
        let parts = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidComposition(format!("cannot parse part {p:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Composition::new(parts)
    }
}

impl From<&Composition> for BinaryWord {
    fn from(c: &Composition) -> Self {
        composition_to_word(c)
    }
}

/// A word over the alphabet `{0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BinaryWord(Vec<u8>);

impl BinaryWord {
    pub fn new(letters: Vec<u8>) -> Result<Self> {
        if letters.iter().any(|&a| a > 1) {
            return Err(Error::InvalidWord(format!(
                "letters must be 0 or 1, got {letters:?}"
            )));
        }
        Ok(BinaryWord(letters))
    }

    pub(crate) fn from_letters_unchecked(letters: Vec<u8>) -> Self {
        debug_assert!(letters.iter().all(|&a| a <= 1));
        BinaryWord(letters)
    }

    pub fn empty() -> Self {
        BinaryWord(Vec::new())
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Ord for BinaryWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for BinaryWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        for a in &self.0 {
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl FromStr for BinaryWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "ε" {
            return Ok(BinaryWord::empty());
        }
        s.chars()
            .map(|ch| match ch {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::InvalidWord(format!("unexpected letter {ch:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BinaryWord)
    }
}

pub fn composition_to_word(c: &Composition) -> BinaryWord {
    let mut letters = Vec::with_capacity(c.weight() as usize);
    for &n in c.parts() {
        letters.push(1);
        letters.extend(std::iter::repeat(0).take(n as usize - 1));
    }
    BinaryWord(letters)
}

/// Inverse of [`composition_to_word`] on words that are empty or start with 1.
pub fn word_to_composition(w: &BinaryWord) -> Result<Composition> {
    let letters = w.letters();
    if letters.first() == Some(&0) {
        return Err(Error::InvalidWord(format!(
            "{w} starts with 0 and is not a composition word"
        )));
    }
    let mut parts: Vec<u32> = Vec::new();
    for &a in letters {
        if a == 1 {
            parts.push(1);
        } else {
            *parts.last_mut().expect("word starts with 1") += 1;
        }
    }
    Ok(Composition(parts))
}

/// A finite formal sum `sum c_b * b` with nonzero rational coefficients,
/// kept in the basis order of `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinComb<B: Ord> {
    terms: BTreeMap<B, Rational>,
}

impl<B: Ord> Default for LinComb<B> {
    fn default() -> Self {
        LinComb { terms: BTreeMap::new() }
    }
}

impl<B: Ord + Clone> LinComb<B> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(b: B) -> Self {
        Self::term(b, Rational::one())
    }

    pub fn term(b: B, c: Rational) -> Self {
        let mut out = Self::zero();
        out.add_term(b, c);
        out
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (B, Rational)>) -> Self {
        let mut out = Self::zero();
        for (b, c) in terms {
            out.add_term(b, c);
        }
        out
    }

    pub fn add_term(&mut self, b: B, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(b) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &LinComb<B>, scale: &Rational) {
        if scale.is_zero() {
            return;
        }
        for (b, c) in &other.terms {
            self.add_term(b.clone(), c * scale);
        }
    }

    pub fn coeff(&self, b: &B) -> Rational {
        self.terms.get(b).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&B, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        LinComb {
            terms: self.terms.iter().map(|(b, c)| (b.clone(), c * s)).collect(),
        }
    }

    /// Sum of all coefficients.
    pub fn mass(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |acc, c| acc + c)
    }

    pub fn map_basis<C: Ord + Clone>(&self, mut f: impl FnMut(&B) -> C) -> LinComb<C> {
        LinComb::from_terms(self.terms.iter().map(|(b, c)| (f(b), c.clone())))
    }

    /// Bilinear extension of a product defined on basis elements.
    pub fn bilinear<C, F>(&self, other: &LinComb<B>, mut product: F) -> LinComb<C>
    where
        C: Ord + Clone,
        F: FnMut(&B, &B) -> LinComb<C>,
    {
        let mut out = LinComb::zero();
        for (b1, c1) in &self.terms {
            for (b2, c2) in &other.terms {
                out.add_scaled(&product(b1, b2), &(c1 * c2));
            }
        }
        out
    }

    pub fn into_terms(self) -> BTreeMap<B, Rational> {
        self.terms
    }

    /// True if every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn all_positive(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }
}

impl<B: Ord + Clone> FromIterator<(B, Rational)> for LinComb<B> {
    fn from_iter<T: IntoIterator<Item = (B, Rational)>>(iter: T) -> Self {
        LinComb::from_terms(iter)
    }
}

impl<B: Ord + Clone> AddAssign<&LinComb<B>> for LinComb<B> {
    fn add_assign(&mut self, rhs: &LinComb<B>) {
        for (b, c) in &rhs.terms {
            self.add_term(b.clone(), c.clone());
        }
    }
}

impl<B: Ord + Clone> SubAssign<&LinComb<B>> for LinComb<B> {
    fn sub_assign(&mut self, rhs: &LinComb<B>) {
        for (b, c) in &rhs.terms {
            self.add_term(b.clone(), -c.clone());
        }
    }
}

impl<B: Ord + Clone> Add for &LinComb<B> {
    type Output = LinComb<B>;
    fn add(self, rhs: &LinComb<B>) -> LinComb<B> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<B: Ord + Clone> Sub for &LinComb<B> {
    type Output = LinComb<B>;
    fn sub(self, rhs: &LinComb<B>) -> LinComb<B> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<B: Ord + Clone> Neg for &LinComb<B> {
    type Output = LinComb<B>;
    fn neg(self) -> LinComb<B> {
        self.scaled(&-Rational::one())
    }
}

impl<B: Ord + fmt::Display> fmt::Display for LinComb<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (b, c)) in self.terms.iter().enumerate() {
            let (sign, abs) = if c.is_negative() { ("-", -c.clone()) } else { ("+", c.clone()) };
            if i == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            write!(f, "{abs}*{b}")?;
        }
        Ok(())
    }
}

/// Shuffle product of two words, by the recursion
/// `a u ⧢ b v = a (u ⧢ b v) + b (a u ⧢ v)`.
pub fn shuffle(w1: &BinaryWord, w2: &BinaryWord) -> LinComb<BinaryWord> {
    let u = w1.letters();
    let v = w2.letters();
    // table[i][j] = u[i..] ⧢ v[j..] as (word, count) pairs
    let mut table: Vec<Vec<HashMap<Vec<u8>, BigInt>>> =
        vec![vec![HashMap::new(); v.len() + 1]; u.len() + 1];
    for i in (0..=u.len()).rev() {
        for j in (0..=v.len()).rev() {
            let mut cell: HashMap<Vec<u8>, BigInt> = HashMap::new();
            if i == u.len() {
                cell.insert(v[j..].to_vec(), BigInt::one());
            } else if j == v.len() {
                cell.insert(u[i..].to_vec(), BigInt::one());
            } else {
                for (letter, src) in [(u[i], &table[i + 1][j]), (v[j], &table[i][j + 1])] {
                    for (w, c) in src {
                        let mut nw = Vec::with_capacity(w.len() + 1);
                        nw.push(letter);
                        nw.extend_from_slice(w);
                        *cell.entry(nw).or_insert_with(BigInt::zero) += c;
                    }
                }
            }
            table[i][j] = cell;
        }
    }
    let top = std::mem::take(&mut table[0][0]);
    LinComb::from_terms(
        top.into_iter()
            .map(|(w, c)| (BinaryWord(w), Rational::from_integer(c))),
    )
}

/// Shuffle product of two compositions, expanded back into compositions.
pub fn shuffle_compositions(c1: &Composition, c2: &Composition) -> LinComb<Composition> {
    shuffle(&composition_to_word(c1), &composition_to_word(c2))
        .map_basis(|w| word_to_composition(w).expect("shuffle of composition words starts with 1"))
}

pub fn shuffle_lin(a: &LinComb<Composition>, b: &LinComb<Composition>) -> LinComb<Composition> {
    a.bilinear(b, shuffle_compositions)
}

/// Harmonic (quasi-shuffle) product
/// `n u * m v = n (u * m v) + m (n u * v) + (n+m) (u * v)`.
pub fn harmonic(c1: &Composition, c2: &Composition) -> LinComb<Composition> {
    let u = c1.parts();
    let v = c2.parts();
    let mut table: Vec<Vec<HashMap<Vec<u32>, BigInt>>> =
        vec![vec![HashMap::new(); v.len() + 1]; u.len() + 1];
    for i in (0..=u.len()).rev() {
        for j in (0..=v.len()).rev() {
            let mut cell: HashMap<Vec<u32>, BigInt> = HashMap::new();
            if i == u.len() {
                cell.insert(v[j..].to_vec(), BigInt::one());
            } else if j == v.len() {
                cell.insert(u[i..].to_vec(), BigInt::one());
            } else {
                let sources = [
                    (u[i], &table[i + 1][j]),
                    (v[j], &table[i][j + 1]),
                    (u[i] + v[j], &table[i + 1][j + 1]),
                ];
                for (head, src) in sources {
                    for (w, c) in src {
                        let mut nw = Vec::with_capacity(w.len() + 1);
                        nw.push(head);
                        nw.extend_from_slice(w);
                        *cell.entry(nw).or_insert_with(BigInt::zero) += c;
                    }
                }
            }
            table[i][j] = cell;
        }
    }
    let top = std::mem::take(&mut table[0][0]);
    LinComb::from_terms(
        top.into_iter()
            .map(|(w, c)| (Composition(w), Rational::from_integer(c))),
    )
}

pub fn harmonic_lin(a: &LinComb<Composition>, b: &LinComb<Composition>) -> LinComb<Composition> {
    a.bilinear(b, harmonic)
}

/// Coefficients `1/(i1! ... im!)` of Hoffman's exponential applied to the
/// monomial `(1,...,1)` of length `r`, one per composition `(i1,...,im)` of `r`.
pub fn hoffman_exp_terms(r: u32) -> Result<LinComb<Composition>> {
    if r == 0 {
        return Err(Error::InvalidArgument("hoffman_exp_terms needs r >= 1".into()));
    }
    Ok(Composition::all_of_weight(r, 1)
        .into_iter()
        .map(|c| {
            let denom = c.parts().iter().fold(BigInt::one(), |acc, &i| acc * factorial(i));
            (c, Rational::new(BigInt::one(), denom))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(parts: &[u32]) -> Composition {
        Composition::new(parts.to_vec()).unwrap()
    }

    fn w(s: &str) -> BinaryWord {
        s.parse().unwrap()
    }

    #[test]
    fn composition_word_examples() {
        assert_eq!(composition_to_word(&c(&[2, 3])), w("10100"));
        assert_eq!(composition_to_word(&c(&[])), BinaryWord::empty());
        assert_eq!(composition_to_word(&c(&[1, 1, 1])), w("111"));
        assert_eq!(word_to_composition(&w("10100")).unwrap(), c(&[2, 3]));
        assert_eq!(word_to_composition(&w("111")).unwrap(), c(&[1, 1, 1]));
        assert!(word_to_composition(&w("010")).is_err());
    }

    #[test]
    fn zero_part_rejected() {
        assert!(Composition::new(vec![2, 0]).is_err());
        assert!("2,x".parse::<Composition>().is_err());
        assert_eq!("(2, 3)".parse::<Composition>().unwrap(), c(&[2, 3]));
        assert_eq!("".parse::<Composition>().unwrap(), Composition::empty());
    }

    #[test]
    fn shuffle_examples() {
        let s = shuffle(&w("10"), &w("10"));
        let expected = LinComb::from_terms([(w("1010"), int(2)), (w("1100"), int(4))]);
        assert_eq!(s, expected);

        let s = shuffle(&w("10"), &w("100"));
        let expected = LinComb::from_terms([
            (w("10100"), int(3)),
            (w("10010"), int(1)),
            (w("11000"), int(6)),
        ]);
        assert_eq!(s, expected);

        assert_eq!(shuffle(&BinaryWord::empty(), &w("101")), LinComb::basis(w("101")));
        assert_eq!(
            shuffle_compositions(&c(&[2]), &c(&[3])),
            LinComb::from_terms([(c(&[2, 3]), int(3)), (c(&[3, 2]), int(1)), (c(&[1, 4]), int(6))])
        );
    }

    #[test]
    fn harmonic_examples() {
        assert_eq!(
            harmonic(&c(&[2]), &c(&[2])),
            LinComb::from_terms([(c(&[2, 2]), int(2)), (c(&[4]), int(1))])
        );
        assert_eq!(
            harmonic(&c(&[2]), &c(&[3])),
            LinComb::from_terms([(c(&[2, 3]), int(1)), (c(&[3, 2]), int(1)), (c(&[5]), int(1))])
        );
        assert_eq!(harmonic(&c(&[]), &c(&[1, 3])), LinComb::basis(c(&[1, 3])));
    }

    #[test]
    fn hoffman_examples() {
        assert_eq!(hoffman_exp_terms(1).unwrap(), LinComb::basis(c(&[1])));
        assert_eq!(
            hoffman_exp_terms(2).unwrap(),
            LinComb::from_terms([(c(&[1, 1]), int(1)), (c(&[2]), rat(1, 2))])
        );
        assert_eq!(
            hoffman_exp_terms(3).unwrap(),
            LinComb::from_terms([
                (c(&[1, 1, 1]), int(1)),
                (c(&[1, 2]), rat(1, 2)),
                (c(&[2, 1]), rat(1, 2)),
                (c(&[3]), rat(1, 6)),
            ])
        );
        assert!(hoffman_exp_terms(0).is_err());
        assert_eq!(hoffman_exp_terms(5).unwrap().len(), 16);
    }

    #[test]
    fn canonical_order() {
        let mut v = vec![c(&[3]), c(&[1, 1]), c(&[2]), c(&[1, 2]), c(&[2, 1])];
        v.sort();
        assert_eq!(v, vec![c(&[2]), c(&[1, 1]), c(&[3]), c(&[1, 2]), c(&[2, 1])]);
    }

    #[test]
    fn binomial_edges() {
        assert_eq!(binomial(1, 2), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(-1, 0), BigInt::zero());
    }

    #[test]
    fn admissible_counts() {
        for n in 2..9u32 {
            assert_eq!(Composition::admissible_of_weight(n).len(), 1 << (n - 2));
        }
        assert_eq!(Composition::all_of_weight(6, 2).len(), 5);
    }
}
