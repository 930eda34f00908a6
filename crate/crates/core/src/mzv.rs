//! Shuffle-regularized multiple zeta values.
//!
//! Symbolically, `Z^sh` sends a composition to a polynomial in `T` whose
//! coefficients are combinations of admissible compositions; its constant
//! term is the regularized value `ζ^sh`. Numerically, admissible values are
//! computed by splitting the iterated integral at `1/2` and summing the two
//! resulting multiple polylogarithms at `1/2`, which converge geometrically.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::words::{binomial, composition_to_word, word_to_composition, BinaryWord, Composition, LinComb, Rational};

/// Largest weight accepted by the numeric evaluator.
pub const MAX_NUMERIC_WEIGHT: u32 = 12;

/// Polynomial in `T` with coefficients in the span of admissible compositions.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RegPolynomial {
    coeffs: Vec<LinComb<Composition>>,
}

impl RegPolynomial {
    pub fn constant(x: LinComb<Composition>) -> Self {
        let mut p = RegPolynomial { coeffs: vec![x] };
        p.trim();
        p
    }

    pub fn coeff(&self, degree: usize) -> LinComb<Composition> {
        self.coeffs.get(degree).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> LinComb<Composition> {
        self.coeff(0)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[LinComb<Composition>] {
        &self.coeffs
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    fn add_scaled(&mut self, other: &RegPolynomial, s: &Rational) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), LinComb::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            a.add_scaled(b, s);
        }
        self.trim();
    }

    fn times_t(&self) -> RegPolynomial {
        if self.coeffs.is_empty() {
            return self.clone();
        }
        let mut coeffs = vec![LinComb::zero()];
        coeffs.extend(self.coeffs.iter().cloned());
        RegPolynomial { coeffs }
    }
}

impl fmt::Display for RegPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match d {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*T")?,
                _ => write!(f, "({c})*T^{d}")?,
            }
        }
        Ok(())
    }
}

/// `Z^sh(c)` as a polynomial in `T`.
pub fn shuffle_regularize(c: &Composition) -> RegPolynomial {
    let mut memo = HashMap::new();
    regularize_memo(c, &mut memo)
}

fn regularize_memo(c: &Composition, memo: &mut HashMap<Composition, RegPolynomial>) -> RegPolynomial {
    if c.is_empty() || c.is_admissible() {
        return RegPolynomial::constant(LinComb::basis(c.clone()));
    }
    if let Some(p) = memo.get(c) {
        return p.clone();
    }
    let parts = c.parts();
    let trailing = parts.iter().rev().take_while(|&&p| p == 1).count();
    let head = &parts[..parts.len() - trailing];
    // v 1^m = (1/m) [ 1 ⧢ v 1^{m-1} - sum_{insertions of 1 strictly inside v} u 1^{m-1} ]
    let m = trailing as i64;
    let shorter = Composition::from_parts_unchecked(parts[..parts.len() - 1].to_vec());
    let mut result = regularize_memo(&shorter, memo).times_t();

    let v = composition_to_word(&Composition::from_parts_unchecked(head.to_vec()));
    let mut inserted: HashMap<Composition, i64> = HashMap::new();
    for pos in 0..v.len() {
        let mut letters = v.letters().to_vec();
        letters.insert(pos, 1);
        letters.extend(std::iter::repeat(1).take(trailing - 1));
        let u = word_to_composition(&BinaryWord::from_letters_unchecked(letters))
            .expect("word starts with 1");
        *inserted.entry(u).or_insert(0) += 1;
    }
    let mut keys: Vec<_> = inserted.into_iter().collect();
    keys.sort();
    for (u, mult) in keys {
        let pu = regularize_memo(&u, memo);
        result.add_scaled(&pu, &Rational::from_integer(BigInt::from(-mult)));
    }
    let mut scaled = RegPolynomial::default();
    scaled.add_scaled(&result, &Rational::new(BigInt::one(), BigInt::from(m)));
    memo.insert(c.clone(), scaled.clone());
    scaled
}

/// `ζ^sh(c)` expressed in admissible compositions.
pub fn zeta_sh_symbol(c: &Composition) -> LinComb<Composition> {
    shuffle_regularize(c).constant_term()
}

pub fn zeta_sh_lin(x: &LinComb<Composition>) -> LinComb<Composition> {
    let mut out = LinComb::zero();
    for (c, coeff) in x.iter() {
        out.add_scaled(&zeta_sh_symbol(c), coeff);
    }
    out
}

/// A numeric value with an absolute error bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MzvValue {
    pub value: Complex64,
    pub abs_error_bound: f64,
}

fn check_numeric_range(c: &Composition) -> Result<()> {
    if !c.is_admissible() {
        return Err(Error::Unsupported(format!("{c} is not admissible")));
    }
    if c.weight() > MAX_NUMERIC_WEIGHT {
        return Err(Error::Unsupported(format!(
            "weight {} exceeds {MAX_NUMERIC_WEIGHT}",
            c.weight()
        )));
    }
    Ok(())
}

/// `Li_s(1/2) = sum_{0<m1<...<mj} 2^{-mj} / (m1^s1 ... mj^sj)` with its
/// truncation error bound.
fn polylog_half(parts: &[u32]) -> (f64, f64) {
    if parts.is_empty() {
        return (1.0, 0.0);
    }
    let j = parts.len();
    let cutoff = 200usize;
    let mut acc = vec![0.0f64; j + 1];
    acc[0] = 1.0;
    let mut pow = 1.0f64;
    for m in 1..=cutoff {
        pow *= 0.5;
        let mf = m as f64;
        for i in (1..=j).rev() {
            let mut term = acc[i - 1] / mf.powi(parts[i - 1] as i32);
            if i == j {
                term *= pow;
            }
            acc[i] += term;
        }
    }
    // inner sums are bounded by (1 + ln m)^{j-1}
    let n = cutoff as f64;
    let tail = 2.0 * 0.5f64.powi(cutoff as i32) * (1.0 + (2.0 * n).ln()).powi(j as i32 - 1);
    (acc[j], tail + acc[j] * 4.0 * f64::EPSILON * (cutoff as f64).sqrt())
}

fn polylog_half_word(letters: &[u8]) -> (f64, f64) {
    let c = word_to_composition(&BinaryWord::from_letters_unchecked(letters.to_vec()))
        .expect("polylog words start with 1");
    polylog_half(c.parts())
}

/// Numeric `ζ(c)` for admissible `c`.
pub fn mzv_eval(c: &Composition, tol: f64) -> Result<MzvValue> {
    check_numeric_range(c)?;
    let w = composition_to_word(c);
    let letters = w.letters();
    let n = letters.len();
    let mut total = 0.0;
    let mut err = 0.0;
    for k in 0..=n {
        let (a, ea) = polylog_half_word(&letters[..k]);
        let dual: Vec<u8> = letters[k..].iter().rev().map(|&b| 1 - b).collect();
        let (b, eb) = polylog_half_word(&dual);
        total += a * b;
        err += ea * b.abs() + eb * a.abs() + ea * eb;
    }
    err += total.abs() * (n as f64 + 1.0) * f64::EPSILON;
    if err > tol {
        return Err(Error::Tolerance(format!(
            "ζ{c}: achievable error {err:e} exceeds requested {tol:e}"
        )));
    }
    Ok(MzvValue { value: Complex64::new(total, 0.0), abs_error_bound: err })
}

/// `(-2πi)^w`.
pub fn two_pi_i_power(weight: u32) -> Complex64 {
    Complex64::new(0.0, -2.0 * PI).powu(weight)
}

/// `ζ(c) / (-2πi)^{wt(c)}`.
pub fn zeta_tilde_eval(c: &Composition, tol: f64) -> Result<MzvValue> {
    let scale = two_pi_i_power(c.weight());
    let inner_tol = tol * scale.norm();
    let v = mzv_eval(c, inner_tol.max(tol))?;
    let out = MzvValue { value: v.value / scale, abs_error_bound: v.abs_error_bound / scale.norm() };
    if out.abs_error_bound > tol {
        return Err(Error::Tolerance(format!(
            "ζ̃{c}: achievable error {:e} exceeds requested {tol:e}",
            out.abs_error_bound
        )));
    }
    Ok(out)
}

/// Bernoulli numbers `B_0..=B_n` with `B_1 = -1/2`.
pub fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m == 0 {
            b.push(Rational::one());
            continue;
        }
        let mut s = Rational::zero();
        for (k, bk) in b.iter().enumerate() {
            s += Rational::from_integer(binomial(m as i64 + 1, k as i64)) * bk;
        }
        b.push(-s / Rational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// Known exact values of `ζ̃`: single even zetas via Bernoulli numbers and a
/// short table of weight-4 depth-2 values.
pub fn zeta_tilde_exact(c: &Composition) -> Option<Rational> {
    match c.parts() {
        [k] if k % 2 == 0 => {
            let k = *k as usize;
            let b = bernoulli_numbers(k);
            // ζ(2m) / (-2πi)^{2m} = -B_{2m} / (2 (2m)!)
            let fact = crate::words::factorial(k as u32);
            Some(-b[k].clone() / Rational::from_integer(BigInt::from(2) * fact))
        }
        [1, 3] => Some(Rational::new(BigInt::from(1), BigInt::from(5760))),
        [2, 2] => Some(Rational::new(BigInt::from(3), BigInt::from(5760))),
        _ => None,
    }
}

/// The shipped exact table, for validation against the numeric evaluator.
pub fn exact_table() -> Vec<(Composition, Rational)> {
    let mut out = Vec::new();
    for parts in [vec![2], vec![4], vec![6], vec![1, 3], vec![2, 2]] {
        let c = Composition::from_parts_unchecked(parts);
        let v = zeta_tilde_exact(&c).expect("table entry");
        out.push((c, v));
    }
    out
}

pub fn rational_to_f64(x: &Rational) -> f64 {
    let n = x.numer().to_f64().unwrap_or(f64::NAN);
    let d = x.denom().to_f64().unwrap_or(f64::NAN);
    if n.is_finite() && d.is_finite() {
        n / d
    } else {
        // fall back to scaled division for huge numerators/denominators
        let shift = x.numer().bits().max(x.denom().bits()).saturating_sub(900) as usize;
        let n = (x.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (x.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{int, rat};

    fn c(parts: &[u32]) -> Composition {
        Composition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn regularize_examples() {
        assert_eq!(zeta_sh_symbol(&c(&[2, 1])), LinComb::term(c(&[1, 2]), int(-2)));
        let p = shuffle_regularize(&c(&[2, 3]));
        assert_eq!(p.degree(), Some(0));
        assert_eq!(p.constant_term(), LinComb::basis(c(&[2, 3])));
        let p = shuffle_regularize(&c(&[1]));
        assert_eq!(p.degree(), Some(1));
        assert_eq!(p.coeff(1), LinComb::basis(Composition::empty()));
        assert!(p.constant_term().is_zero());
        assert_eq!(zeta_sh_symbol(&c(&[4])), LinComb::basis(c(&[4])));
        assert!(zeta_sh_symbol(&c(&[1])).is_zero());
    }

    #[test]
    fn regularize_ones() {
        // Z^sh(1^m) = T^m / m!
        let p = shuffle_regularize(&c(&[1, 1, 1]));
        assert_eq!(p.degree(), Some(3));
        assert_eq!(p.coeff(3), LinComb::term(Composition::empty(), rat(1, 6)));
        assert!(p.coeff(0).is_zero());
    }

    #[test]
    fn regularized_output_is_admissible() {
        for w in 1..=6 {
            for comp in Composition::all_of_weight(w, 1) {
                let p = shuffle_regularize(&comp);
                for coeff in p.coeffs() {
                    for (u, _) in coeff.iter() {
                        assert!(u.is_empty() || u.is_admissible(), "{comp} -> {u}");
                    }
                }
            }
        }
    }

    #[test]
    fn numeric_single_values() {
        let z2 = mzv_eval(&c(&[2]), 1e-12).unwrap();
        assert!((z2.value.re - PI * PI / 6.0).abs() < 1e-13);
        let z4 = mzv_eval(&c(&[4]), 1e-12).unwrap();
        assert!((z4.value.re - PI.powi(4) / 90.0).abs() < 1e-13);
        assert!(mzv_eval(&c(&[2, 1]), 1e-9).is_err());
        assert!(mzv_eval(&c(&[13]), 1e-9).is_err());
        assert!(matches!(mzv_eval(&c(&[2]), 1e-30), Err(Error::Tolerance(_))));
    }

    #[test]
    fn exact_table_matches_numeric() {
        for (comp, v) in exact_table() {
            let num = zeta_tilde_eval(&comp, 1e-12).unwrap();
            assert!((num.value.re - rational_to_f64(&v)).abs() < 1e-8, "{comp}");
            assert!(num.value.im.abs() < 1e-12);
        }
        assert_eq!(zeta_tilde_exact(&c(&[2])), Some(rat(-1, 24)));
        assert_eq!(zeta_tilde_exact(&c(&[4])), Some(rat(1, 1440)));
        assert_eq!(zeta_tilde_exact(&c(&[6])), Some(rat(-1, 60480)));
        assert_eq!(zeta_tilde_exact(&c(&[3])), None);
    }
}
