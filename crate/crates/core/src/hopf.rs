//! The quotient Hopf algebra of iterated integral symbols over `{0,1}`.
//!
//! Every symbol `I(a0; a1..aN; aN+1)` is reduced to the canonical basis
//! `I(n1,...,nr) = I(0; 1 0^{n1-1} ... 1 0^{nr-1}; 1)`, products are shuffle
//! products, and the coproduct is the marked-subsequence sum.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{
    binomial, composition_to_word, shuffle_compositions, shuffle_lin, BinaryWord, Composition,
    LinComb, Rational,
};

/// `I(left; word; right)` with letters in `{0,1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegralSymbol {
    pub left: u8,
    pub word: BinaryWord,
    pub right: u8,
}

impl IntegralSymbol {
    pub fn new(left: u8, word: BinaryWord, right: u8) -> Result<Self> {
        if left > 1 || right > 1 {
            return Err(Error::InvalidWord(format!(
                "endpoints must be 0 or 1, got ({left}, {right})"
            )));
        }
        Ok(IntegralSymbol { left, word, right })
    }

    /// The canonical symbol `I(0; word(c); 1)`.
    pub fn canonical(c: &Composition) -> Self {
        IntegralSymbol { left: 0, word: composition_to_word(c), right: 1 }
    }

    /// Reversal `I(a0; a1..aN; aN+1) = (-1)^N I(aN+1; aN..a1; a0)`.
    pub fn reversed(&self) -> (Self, bool) {
        let mut letters = self.word.letters().to_vec();
        letters.reverse();
        let sym = IntegralSymbol {
            left: self.right,
            word: BinaryWord::from_letters_unchecked(letters),
            right: self.left,
        };
        (sym, self.word.len() % 2 == 1)
    }
}

impl fmt::Display for IntegralSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I({}; ", self.left)?;
        if self.word.is_empty() {
            write!(f, "")?;
        } else {
            write!(f, "{}", self.word)?;
        }
        write!(f, "; {})", self.right)
    }
}

/// Parses `"0;010;1"` (separators `;` or whitespace).
impl FromStr for IntegralSymbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let fields: Vec<&str> = s
            .trim()
            .trim_start_matches("I(")
            .trim_end_matches(')')
            .split(';')
            .map(str::trim)
            .collect();
        if fields.len() != 3 {
            return Err(Error::InvalidWord(format!(
                "expected `left;word;right`, got {s:?}"
            )));
        }
        let endpoint = |f: &str| match f {
            "0" => Ok(0u8),
            "1" => Ok(1u8),
            _ => Err(Error::InvalidWord(format!("bad endpoint {f:?}"))),
        };
        let word = if fields[1].is_empty() { BinaryWord::empty() } else { fields[1].parse()? };
        IntegralSymbol::new(endpoint(fields[0])?, word, endpoint(fields[2])?)
    }
}

/// Basis element `left ⊗ right` of the tensor square.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TensorKey {
    pub left: Composition,
    pub right: Composition,
}

impl TensorKey {
    pub fn new(left: Composition, right: Composition) -> Self {
        TensorKey { left, right }
    }
}

impl Ord for TensorKey {
    fn cmp(&self, other: &Self) -> Ordering {
        self.left
            .weight()
            .cmp(&other.left.weight())
            .then_with(|| self.left.parts().cmp(other.left.parts()))
            .then_with(|| self.right.parts().cmp(other.right.parts()))
    }
}

impl PartialOrd for TensorKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TensorKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} ⊗ {}]", self.left, self.right)
    }
}

pub type TensorLinComb = LinComb<TensorKey>;

pub fn tensor(left: &LinComb<Composition>, right: &LinComb<Composition>) -> TensorLinComb {
    let mut out = TensorLinComb::zero();
    for (l, cl) in left.iter() {
        for (r, cr) in right.iter() {
            out.add_term(TensorKey::new(l.clone(), r.clone()), cl * cr);
        }
    }
    out
}

/// Componentwise product `(a ⊗ b)(c ⊗ d) = (a ⧢ c) ⊗ (b ⧢ d)`.
pub fn tensor_mul(a: &TensorLinComb, b: &TensorLinComb) -> TensorLinComb {
    let mut out = TensorLinComb::zero();
    for (ka, ca) in a.iter() {
        for (kb, cb) in b.iter() {
            let left = shuffle_compositions(&ka.left, &kb.left);
            let right = shuffle_compositions(&ka.right, &kb.right);
            let coeff = ca * cb;
            for (l, cl) in left.iter() {
                for (r, cr) in right.iter() {
                    out.add_term(TensorKey::new(l.clone(), r.clone()), &coeff * cl * cr);
                }
            }
        }
    }
    out
}

/// Expands an arbitrary symbol in the canonical basis.
pub fn reduce(s: &IntegralSymbol) -> LinComb<Composition> {
    reduce_letters(s.left, s.word.letters(), s.right)
}

fn reduce_letters(left: u8, word: &[u8], right: u8) -> LinComb<Composition> {
    if word.is_empty() {
        return LinComb::basis(Composition::empty());
    }
    if left == right {
        return LinComb::zero();
    }
    if left == 1 {
        let reversed: Vec<u8> = word.iter().rev().copied().collect();
        let out = reduce_letters(0, &reversed, 1);
        return if word.len() % 2 == 1 { -&out } else { out };
    }
    let leading = word.iter().take_while(|&&a| a == 0).count();
    if leading == word.len() {
        return LinComb::zero();
    }
    let tail = &word[leading..];
    let mut parts: Vec<u32> = Vec::new();
    for &a in tail {
        if a == 1 {
            parts.push(1);
        } else {
            *parts.last_mut().expect("tail starts with 1") += 1;
        }
    }
    if leading == 0 {
        return LinComb::basis(Composition::from_parts_unchecked(parts));
    }
    // Leading-zero removal: (-1)^n sum_{k >= parts, |k| = |parts| + n} prod binom(k_j - 1, n_j - 1) I(k).
    let sign = if leading % 2 == 1 { -BigInt::one() } else { BigInt::one() };
    let mut out = LinComb::zero();
    let mut extra = vec![0u32; parts.len()];
    distribute(leading as u32, 0, &mut extra, &mut |extra| {
        let mut coeff = sign.clone();
        let mut k = Vec::with_capacity(parts.len());
        for (n, e) in parts.iter().zip(extra) {
            let kj = n + e;
            coeff *= binomial(kj as i64 - 1, *n as i64 - 1);
            k.push(kj);
        }
        out.add_term(Composition::from_parts_unchecked(k), Rational::from_integer(coeff));
    });
    out
}

/// Calls `f` for every way to write `total` as an ordered sum over `slots.len()` nonnegative slots.
fn distribute(total: u32, idx: usize, slots: &mut [u32], f: &mut impl FnMut(&[u32])) {
    if idx + 1 == slots.len() {
        slots[idx] = total;
        f(slots);
        return;
    }
    if slots.is_empty() {
        if total == 0 {
            f(slots);
        }
        return;
    }
    for e in 0..=total {
        slots[idx] = e;
        distribute(total - e, idx + 1, slots, f);
    }
}

/// `b^k_{n,n'} = (-1)^n binom(k-1, n-1) + (-1)^{k-n'} binom(k-1, n'-1)`.
pub fn b_coefficient(n: i64, n_prime: i64, k: i64) -> Rational {
    let s1 = if n % 2 == 0 { 1 } else { -1 };
    let s2 = if (k - n_prime).rem_euclid(2) == 0 { 1 } else { -1 };
    let v = BigInt::from(s1) * binomial(k - 1, n - 1) + BigInt::from(s2) * binomial(k - 1, n_prime - 1);
    Rational::from_integer(v)
}

/// Marked-subsequence expansion shared by the coproduct and the ψ-pieces.
///
/// `letters` is the full sequence `a0, a1..aN, aN+1`. `required[i]` (for
/// `1 <= i <= N`) forces position `i` to be marked (`Some(true)`) or
/// unmarked (`Some(false)`).
struct MarkedSum<'a> {
    letters: &'a [u8],
    required: &'a [Option<bool>],
    segment_cache: HashMap<(usize, usize), LinComb<Composition>>,
    shuffle_cache: HashMap<(Composition, Composition), LinComb<Composition>>,
}

impl<'a> MarkedSum<'a> {
    fn new(letters: &'a [u8], required: &'a [Option<bool>]) -> Self {
        MarkedSum { letters, required, segment_cache: HashMap::new(), shuffle_cache: HashMap::new() }
    }

    fn segment(&mut self, from: usize, to: usize) -> LinComb<Composition> {
        if let Some(v) = self.segment_cache.get(&(from, to)) {
            return v.clone();
        }
        let v = reduce_letters(self.letters[from], &self.letters[from + 1..to], self.letters[to]);
        self.segment_cache.insert((from, to), v.clone());
        v
    }

    fn multiply(&mut self, a: &LinComb<Composition>, b: &LinComb<Composition>) -> LinComb<Composition> {
        let mut out = LinComb::zero();
        for (ca, xa) in a.iter() {
            for (cb, xb) in b.iter() {
                let key = if ca <= cb { (ca.clone(), cb.clone()) } else { (cb.clone(), ca.clone()) };
                let prod = self
                    .shuffle_cache
                    .entry(key)
                    .or_insert_with(|| shuffle_compositions(ca, cb))
                    .clone();
                out.add_scaled(&prod, &(xa * xb));
            }
        }
        out
    }

    fn run(mut self) -> TensorLinComb {
        let mut out = TensorLinComb::zero();
        let mut marked = Vec::new();
        let start = LinComb::basis(Composition::empty());
        self.dfs(0, start, &mut marked, &mut out);
        out
    }

    fn dfs(&mut self, last: usize, left: LinComb<Composition>, marked: &mut Vec<usize>, out: &mut TensorLinComb) {
        let end = self.letters.len() - 1;
        for next in last + 1..=end {
            // every position strictly between `last` and `next` is unmarked
            if next > last + 1 && self.required[next - 1] == Some(true) {
                break;
            }
            if next < end && self.required[next] == Some(false) {
                continue;
            }
            if next > last + 1 && self.letters[last] == self.letters[next] {
                continue;
            }
            let seg = self.segment(last, next);
            if seg.is_zero() {
                continue;
            }
            let new_left = self.multiply(&left, &seg);
            if new_left.is_zero() {
                continue;
            }
            if next == end {
                let right_word: Vec<u8> = marked.iter().map(|&i| self.letters[i]).collect();
                let right = reduce_letters(self.letters[0], &right_word, self.letters[end]);
                for (l, cl) in new_left.iter() {
                    for (r, cr) in right.iter() {
                        out.add_term(TensorKey::new(l.clone(), r.clone()), cl * cr);
                    }
                }
            } else {
                marked.push(next);
                self.dfs(next, new_left, marked, out);
                marked.pop();
            }
        }
    }
}

fn full_letters(c: &Composition) -> Vec<u8> {
    let mut letters = vec![0u8];
    letters.extend_from_slice(composition_to_word(c).letters());
    letters.push(1);
    letters
}

/// Goncharov coproduct of the basis element `I(c)`.
pub fn coproduct(c: &Composition) -> TensorLinComb {
    let letters = full_letters(c);
    let required = vec![None; letters.len()];
    MarkedSum::new(&letters, &required).run()
}

pub fn coproduct_lin(x: &LinComb<Composition>) -> TensorLinComb {
    let mut out = TensorLinComb::zero();
    for (c, coeff) in x.iter() {
        out.add_scaled(&coproduct(c), coeff);
    }
    out
}

/// Applies `f ⊗ id` (or `id ⊗ f` when `on_left` is false) to a tensor.
pub fn apply_on_factor(t: &TensorLinComb, on_left: bool, f: impl Fn(&Composition) -> TensorLinComb) -> LinComb<(Composition, Composition, Composition)> {
    let mut out = LinComb::zero();
    for (k, c) in t.iter() {
        let image = if on_left { f(&k.left) } else { f(&k.right) };
        for (ik, ic) in image.iter() {
            let triple = if on_left {
                (ik.left.clone(), ik.right.clone(), k.right.clone())
            } else {
                (k.left.clone(), ik.left.clone(), ik.right.clone())
            };
            out.add_term(triple, c * ic);
        }
    }
    out
}

/// A word over `{x, y}` selecting which coproduct pieces to keep.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct XYWord(Vec<bool>);

impl XYWord {
    /// `true` is the letter `y`.
    pub fn new(letters: Vec<bool>) -> Self {
        XYWord(letters)
    }

    pub fn letters(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// 1-based positions of the letter `y`.
    pub fn y_positions(&self) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, &y)| y).map(|(i, _)| i + 1).collect()
    }

    /// All `2^r` words of length `r`, `x^r` first.
    pub fn all(r: usize) -> Vec<XYWord> {
        (0..1u64 << r)
            .map(|mask| XYWord((0..r).map(|i| mask >> (r - 1 - i) & 1 == 1).collect()))
            .collect()
    }
}

impl fmt::Display for XYWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &y in &self.0 {
            write!(f, "{}", if y { 'y' } else { 'x' })?;
        }
        Ok(())
    }
}

impl FromStr for XYWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|ch| match ch {
                'x' => Ok(false),
                'y' => Ok(true),
                _ => Err(Error::InvalidWord(format!("unexpected letter {ch:?} in xy-word"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(XYWord)
    }
}

/// The ψ-piece by direct enumeration of the marked subsets whose marked
/// 1-letters are exactly those selected by `w`. Valid for all parts >= 1.
pub fn psi_enumerative(c: &Composition, w: &XYWord) -> Result<TensorLinComb> {
    if w.len() != c.depth() {
        return Err(Error::InvalidArgument(format!(
            "xy-word {w} has length {} but {c} has depth {}",
            w.len(),
            c.depth()
        )));
    }
    let letters = full_letters(c);
    let mut required = vec![None; letters.len()];
    let mut block = 0;
    for (i, &a) in letters.iter().enumerate().take(letters.len() - 1).skip(1) {
        if a == 1 {
            required[i] = Some(w.letters()[block]);
            block += 1;
        }
    }
    Ok(MarkedSum::new(&letters, &required).run())
}

/// Closed form of the ψ-piece for compositions with all parts >= 2.
pub fn psi(c: &Composition, w: &XYWord) -> Result<TensorLinComb> {
    if w.len() != c.depth() {
        return Err(Error::InvalidArgument(format!(
            "xy-word {w} has length {} but {c} has depth {}",
            w.len(),
            c.depth()
        )));
    }
    if !c.all_parts_at_least(2) {
        return Err(Error::InvalidComposition(format!(
            "closed-form psi needs all parts >= 2, got {c}"
        )));
    }
    let n = c.parts();
    let r = n.len();
    let ts = w.y_positions();
    let prefix_end = ts.first().map_or(r, |&t| t - 1);
    let prefix = Composition::from_parts_unchecked(n[..prefix_end].to_vec());
    if ts.is_empty() {
        return Ok(TensorLinComb::basis(TensorKey::new(prefix, Composition::empty())));
    }
    let blocks = psi_blocks(n, &ts);

    let mut out = TensorLinComb::zero();
    let mut acc: Vec<(LinComb<Composition>, Vec<u32>)> = vec![(LinComb::basis(prefix), Vec::new())];
    for block in &blocks {
        let mut next = Vec::new();
        for (left, right) in &acc {
            for (kq, block_left) in block {
                let mut r2 = right.clone();
                r2.push(*kq);
                next.push((shuffle_lin(left, block_left), r2));
            }
        }
        acc = next;
    }
    for (left, right) in acc {
        let right = Composition::from_parts_unchecked(right);
        for (l, cl) in left.iter() {
            out.add_term(TensorKey::new(l.clone(), right.clone()), cl.clone());
        }
    }
    Ok(out)
}

/// For each y-block `t_m .. t_{m+1}-1`, the map `k_q -> left factor` with
/// signs and binomials folded in.
fn psi_blocks(n: &[u32], ts: &[usize]) -> Vec<Vec<(u32, LinComb<Composition>)>> {
    let r = n.len();
    let mut blocks = Vec::with_capacity(ts.len());
    for (m, &t) in ts.iter().enumerate() {
        let t_next = ts.get(m + 1).copied().unwrap_or(r + 1);
        // 0-based block indices
        let idx: Vec<usize> = (t - 1..t_next - 1).collect();
        let block_weight: u32 = idx.iter().map(|&i| n[i]).sum();
        let mut by_kq: std::collections::BTreeMap<u32, LinComb<Composition>> = Default::default();
        for (qpos, &q) in idx.iter().enumerate() {
            let others: Vec<usize> = idx.iter().copied().filter(|&i| i != q).collect();
            let min_others: u32 = others.iter().map(|&i| n[i]).sum();
            if min_others + 1 > block_weight {
                continue;
            }
            let mut extra = vec![0u32; others.len()];
            let slack = block_weight - min_others - 1;
            for spent in 0..=slack {
                let kq = block_weight - min_others - spent;
                distribute_into(spent, &mut extra, &mut |extra| {
                    let mut k = vec![0u32; r];
                    k[q] = kq;
                    let mut coeff = BigInt::one();
                    for (&i, &e) in others.iter().zip(extra) {
                        k[i] = n[i] + e;
                        coeff *= binomial(k[i] as i64 - 1, n[i] as i64 - 1);
                    }
                    let after: u32 = idx[qpos + 1..].iter().map(|&i| k[i]).sum();
                    let exponent = block_weight + n[q] + after;
                    if exponent % 2 == 1 {
                        coeff = -coeff;
                    }
                    let before = Composition::from_parts_unchecked(
                        idx[..qpos].iter().rev().map(|&i| k[i]).collect(),
                    );
                    let after_c = Composition::from_parts_unchecked(
                        idx[qpos + 1..].iter().map(|&i| k[i]).collect(),
                    );
                    let left = shuffle_compositions(&before, &after_c);
                    by_kq
                        .entry(kq)
                        .or_default()
                        .add_scaled(&left, &Rational::from_integer(coeff));
                });
            }
        }
        blocks.push(by_kq.into_iter().filter(|(_, l)| !l.is_zero()).collect());
    }
    blocks
}

fn distribute_into(total: u32, slots: &mut [u32], f: &mut impl FnMut(&[u32])) {
    if slots.is_empty() {
        if total == 0 {
            f(slots);
        }
        return;
    }
    distribute(total, 0, slots, f);
}

/// Sum of the closed-form ψ-pieces over all xy-words.
pub fn psi_sum(c: &Composition) -> Result<TensorLinComb> {
    let mut out = TensorLinComb::zero();
    for w in XYWord::all(c.depth()) {
        out += &psi(c, &w)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::int;

    fn c(parts: &[u32]) -> Composition {
        Composition::new(parts.to_vec()).unwrap()
    }

    fn key(l: &[u32], r: &[u32]) -> TensorKey {
        TensorKey::new(c(l), c(r))
    }

    #[test]
    fn reduce_examples() {
        let s: IntegralSymbol = "0;010;1".parse().unwrap();
        assert_eq!(reduce(&s), LinComb::term(c(&[3]), int(-2)));
        let s: IntegralSymbol = "0;0;1".parse().unwrap();
        assert!(reduce(&s).is_zero());
        let s: IntegralSymbol = "1;10;0".parse().unwrap();
        assert_eq!(reduce(&s), LinComb::term(c(&[2]), int(-1)));
        let s: IntegralSymbol = "1;;0".parse().unwrap();
        assert_eq!(reduce(&s), LinComb::basis(Composition::empty()));
        let s: IntegralSymbol = "1;0110;1".parse().unwrap();
        assert!(reduce(&s).is_zero());
    }

    #[test]
    fn canonical_symbols_are_basis() {
        for w in 1..=7 {
            for comp in Composition::all_of_weight(w, 1) {
                assert_eq!(reduce(&IntegralSymbol::canonical(&comp)), LinComb::basis(comp));
            }
        }
    }

    #[test]
    fn coproduct_examples() {
        assert_eq!(
            coproduct(&c(&[2])),
            LinComb::from_terms([(key(&[2], &[]), int(1)), (key(&[], &[2]), int(1))])
        );
        assert_eq!(
            coproduct(&c(&[2, 2])),
            LinComb::from_terms([
                (key(&[2, 2], &[]), int(1)),
                (key(&[2], &[2]), int(3)),
                (key(&[], &[2, 2]), int(1)),
            ])
        );
        assert_eq!(
            coproduct(&c(&[1, 3])),
            LinComb::from_terms([
                (key(&[1, 3], &[]), int(1)),
                (key(&[2], &[2]), int(-1)),
                (key(&[], &[1, 3]), int(1)),
            ])
        );
        assert_eq!(coproduct(&Composition::empty()), LinComb::basis(key(&[], &[])));
    }

    #[test]
    fn b_coefficient_examples() {
        assert_eq!(b_coefficient(2, 2, 2), int(2));
        assert_eq!(b_coefficient(2, 2, 1), int(0));
        assert_eq!(b_coefficient(1, 3, 2), int(-1));
    }

    #[test]
    fn psi_examples() {
        for (n1, n2) in [(2, 2), (3, 2), (2, 5)] {
            let comp = c(&[n1, n2]);
            assert_eq!(psi(&comp, &"xx".parse().unwrap()).unwrap(), LinComb::basis(key(&[n1, n2], &[])));
            assert_eq!(psi(&comp, &"yy".parse().unwrap()).unwrap(), LinComb::basis(key(&[], &[n1, n2])));
        }
        assert_eq!(
            psi(&c(&[2, 2]), &"yx".parse().unwrap()).unwrap(),
            LinComb::term(key(&[2], &[2]), int(2))
        );
        assert!(psi(&c(&[2, 2]), &"y".parse().unwrap()).is_err());
        assert!(psi(&c(&[1, 2]), &"yx".parse().unwrap()).is_err());
        assert!(psi_enumerative(&c(&[1, 2]), &"yx".parse().unwrap()).is_ok());
    }

    #[test]
    fn psi_routes_agree_small() {
        for comp in [c(&[2, 2]), c(&[2, 3, 2]), c(&[3, 2, 2])] {
            for w in XYWord::all(comp.depth()) {
                assert_eq!(psi(&comp, &w).unwrap(), psi_enumerative(&comp, &w).unwrap(), "{comp} {w}");
            }
        }
    }
}
