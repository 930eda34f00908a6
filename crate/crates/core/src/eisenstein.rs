//! Regularized multiple Eisenstein series, their Fourier expansion, and
//! numeric lattice sums.
//!
//! Every series here is normalized by `(-2πi)^{weight}`: an
//! [`MzvQTensor`] `{u ↦ f_u}` stands for `sum_u ζ̃(u) f_u(q)`.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hopf::{coproduct, psi, tensor, TensorKey, TensorLinComb, XYWord};
use crate::mzv::{mzv_eval, rational_to_f64, zeta_sh_symbol, zeta_tilde_eval, zeta_tilde_exact};
use crate::qseries::{g_tilde, GshEngine, QSeries};
use crate::words::{binomial, harmonic_lin, shuffle_lin, Composition, LinComb, Rational};

/// `sum_u ζ̃(u) f_u(q)` with exact rational q-series `f_u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MzvQTensor {
    order: usize,
    terms: BTreeMap<Composition, QSeries>,
}

impl MzvQTensor {
    pub fn zero(order: usize) -> Self {
        MzvQTensor { order, terms: BTreeMap::new() }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Composition, &QSeries)> {
        self.terms.iter()
    }

    pub fn get(&self, u: &Composition) -> Option<&QSeries> {
        self.terms.get(u)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, u: Composition, f: &QSeries, scale: &Rational) {
        if scale.is_zero() {
            return;
        }
        let order = self.order.min(f.order());
        if order < self.order {
            self.truncate_to(order);
        }
        let entry = self.terms.entry(u.clone()).or_insert_with(|| QSeries::zero(order));
        entry.add_scaled(f, scale);
        if entry.is_zero() {
            self.terms.remove(&u);
        }
    }

    fn truncate_to(&mut self, order: usize) {
        self.order = order;
        let terms = std::mem::take(&mut self.terms);
        self.terms = terms
            .into_iter()
            .map(|(u, f)| (u, f.truncate(order)))
            .filter(|(_, f)| !f.is_zero())
            .collect();
    }

    pub fn add_scaled(&mut self, other: &MzvQTensor, scale: &Rational) {
        if other.order < self.order {
            self.truncate_to(other.order);
        }
        for (u, f) in &other.terms {
            self.add_term(u.clone(), f, scale);
        }
    }

    pub fn map_series(&self, f: impl Fn(&QSeries) -> QSeries) -> MzvQTensor {
        let mut out = MzvQTensor::zero(self.order);
        for (u, s) in &self.terms {
            out.add_term(u.clone(), &f(s), &Rational::one());
        }
        out
    }

    /// `sum_{L ⊗ R} c · ζ̃(L) ⊗ series(R)`.
    pub fn from_symbolic(
        t: &TensorLinComb,
        order: usize,
        mut series: impl FnMut(&Composition) -> Result<QSeries>,
    ) -> Result<MzvQTensor> {
        let mut out = MzvQTensor::zero(order);
        for (key, c) in t.iter() {
            let f = series(&key.right)?;
            out.add_term(key.left.clone(), &f, c);
        }
        Ok(out)
    }

    /// The single q-series obtained when every symbol has a known exact value.
    pub fn exact_value(&self) -> Option<QSeries> {
        let mut out = QSeries::zero(self.order);
        for (u, f) in &self.terms {
            let z = if u.is_empty() { Rational::one() } else { zeta_tilde_exact(u)? };
            out.add_scaled(f, &z);
        }
        Some(out)
    }
}

/// How products of zeta symbols are expanded into single symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZetaProduct {
    /// Shuffle product of words; matches the left factors of the coproduct.
    Shuffle,
    /// Harmonic product of compositions.
    Harmonic,
}

impl ZetaProduct {
    fn mul(self, a: &LinComb<Composition>, b: &LinComb<Composition>) -> LinComb<Composition> {
        match self {
            ZetaProduct::Shuffle => shuffle_lin(a, b),
            ZetaProduct::Harmonic => harmonic_lin(a, b),
        }
    }
}

fn apply_zeta_sh_left(t: &TensorLinComb) -> TensorLinComb {
    let mut cache: HashMap<Composition, LinComb<Composition>> = HashMap::new();
    let mut out = TensorLinComb::zero();
    for (key, c) in t.iter() {
        let z = cache.entry(key.left.clone()).or_insert_with(|| zeta_sh_symbol(&key.left));
        for (u, a) in z.iter() {
            out.add_term(TensorKey::new(u.clone(), key.right.clone()), a * c);
        }
    }
    out
}

/// `(ζ^sh ⊗ id) Δ(c)`: admissible zeta symbols on the left, index of the
/// q-series on the right.
pub fn mes_symbolic(c: &Composition) -> TensorLinComb {
    apply_zeta_sh_left(&coproduct(c))
}

/// `(ζ^sh ⊗ id) ψ_c(w)`.
pub fn mes_word_symbolic(c: &Composition, w: &XYWord) -> Result<TensorLinComb> {
    Ok(apply_zeta_sh_left(&psi(c, w)?))
}

/// `G̃^sh_c` as an [`MzvQTensor`].
pub fn mes_sh(c: &Composition, engine: &GshEngine) -> Result<MzvQTensor> {
    MzvQTensor::from_symbolic(&mes_symbolic(c), engine.order(), |r| engine.g_tilde_sh(r))
}

/// `sum a_c G̃^sh_c`.
pub fn mes_sh_lin(x: &LinComb<Composition>, engine: &GshEngine) -> Result<MzvQTensor> {
    let mut out = MzvQTensor::zero(engine.order());
    for (c, a) in x.iter() {
        out.add_scaled(&mes_sh(c, engine)?, a);
    }
    Ok(out)
}

fn require_parts_at_least_two(c: &Composition) -> Result<()> {
    if !c.all_parts_at_least(2) {
        return Err(Error::InvalidComposition(format!("{c}: every part must be at least 2")));
    }
    Ok(())
}

/// Distributions of `total` over `len` slots, each at least 2.
fn k_tuples(total: u32, len: usize) -> Vec<Vec<u32>> {
    fn rec(left: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let max = left.saturating_sub(2 * (slots as u32 - 1));
        for k in 2..=max {
            cur.push(k);
            rec(left - k, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, len, &mut Vec::new(), &mut out);
    out
}

/// One block of the Fourier expansion: terms `(zeta symbol, k_q)`.
fn fourier_block(n: &[u32], product: ZetaProduct) -> Vec<(LinComb<Composition>, u32)> {
    let total: u32 = n.iter().sum();
    let len = n.len();
    let mut out = Vec::new();
    for q in 0..len {
        for k in k_tuples(total, len) {
            let mut coeff = num_bigint::BigInt::one();
            for j in (0..len).filter(|&j| j != q) {
                coeff *= binomial(k[j] as i64 - 1, n[j] as i64 - 1);
            }
            if coeff.is_zero() {
                continue;
            }
            let tail: u32 = k[q + 1..].iter().sum();
            if (total + n[q] + tail) % 2 == 1 {
                coeff = -coeff;
            }
            let before = Composition::new(k[..q].iter().rev().copied().collect()).expect("parts >= 2");
            let after = Composition::new(k[q + 1..].to_vec()).expect("parts >= 2");
            let z = product.mul(&LinComb::basis(before), &LinComb::basis(after));
            out.push((z.scaled(&Rational::from_integer(coeff)), k[q]));
        }
    }
    out
}

/// Fourier expansion of the term of `G_c` indexed by the xy-word `w`, as a
/// tensor of zeta symbols and `g̃` indices.
pub fn fourier_word_symbolic(c: &Composition, w: &XYWord, product: ZetaProduct) -> Result<TensorLinComb> {
    require_parts_at_least_two(c)?;
    if w.len() != c.depth() {
        return Err(Error::InvalidArgument(format!("word {w} has length {}, index {c} has depth {}", w.len(), c.depth())));
    }
    let n = c.parts();
    let ys = w.y_positions();
    let prefix_end = ys.first().map_or(n.len(), |&t| t - 1);
    let prefix = Composition::new(n[..prefix_end].to_vec())?;
    let mut acc: Vec<(LinComb<Composition>, Vec<u32>)> = vec![(LinComb::basis(prefix), Vec::new())];
    for (m, &t) in ys.iter().enumerate() {
        let end = ys.get(m + 1).map_or(n.len(), |&t2| t2 - 1);
        let block = fourier_block(&n[t - 1..end], product);
        let mut next = Vec::new();
        for (z, ks) in &acc {
            for (bz, kq) in &block {
                let mut ks2 = ks.clone();
                ks2.push(*kq);
                next.push((product.mul(z, bz), ks2));
            }
        }
        acc = next;
    }
    let mut out = TensorLinComb::zero();
    for (z, ks) in acc {
        let right = Composition::new(ks).expect("parts >= 2");
        out += &tensor(&z, &LinComb::basis(right));
    }
    Ok(out)
}

/// Sum of [`fourier_word_symbolic`] over all xy-words.
pub fn fourier_symbolic(c: &Composition, product: ZetaProduct) -> Result<TensorLinComb> {
    let mut out = TensorLinComb::zero();
    for w in XYWord::all(c.depth()) {
        out += &fourier_word_symbolic(c, &w, product)?;
    }
    Ok(out)
}

/// Fourier expansion of `G̃_c` with zeta products expanded by the shuffle
/// product.
pub fn fourier_expansion(c: &Composition, order: usize) -> Result<MzvQTensor> {
    fourier_expansion_with(c, order, ZetaProduct::Shuffle)
}

pub fn fourier_expansion_with(c: &Composition, order: usize, product: ZetaProduct) -> Result<MzvQTensor> {
    let t = fourier_symbolic(c, product)?;
    let mut cache: HashMap<Composition, QSeries> = HashMap::new();
    MzvQTensor::from_symbolic(&t, order, |r| {
        Ok(cache.entry(r.clone()).or_insert_with(|| if r.is_empty() { QSeries::one(order) } else { g_tilde(r, order) }).clone())
    })
}

/// Complex q-coefficients with absolute error bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericSeries {
    pub coeffs: Vec<Complex64>,
    pub errors: Vec<f64>,
    /// `sum_u |ζ̃(u) f_u[n]|`, the scale against which cancellation is judged.
    pub magnitudes: Vec<f64>,
}

impl NumericSeries {
    /// `sum c_n q^n` and the propagated coefficient error.
    pub fn eval(&self, q: Complex64) -> (Complex64, f64) {
        let mut acc = Complex64::zero();
        let mut err = 0.0;
        let mut qp = Complex64::one();
        for (c, e) in self.coeffs.iter().zip(&self.errors) {
            acc += c * qp;
            err += e * qp.norm();
            qp *= q;
        }
        (acc, err)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest `|c_n| / max(1, magnitude_n)`.
    pub fn max_relative(&self) -> f64 {
        self.coeffs
            .iter()
            .zip(&self.magnitudes)
            .map(|(c, m)| c.norm() / m.max(1.0))
            .fold(0.0, f64::max)
    }
}

/// `q = e^{2πiτ}`.
pub fn q_from_tau(tau: Complex64) -> Complex64 {
    (Complex64::new(0.0, 2.0 * PI) * tau).exp()
}

/// Evaluates every `ζ̃(u)` numerically and sums the coefficient lists.
pub fn numeric_eval(t: &MzvQTensor, tol: f64) -> Result<NumericSeries> {
    let n = t.order() + 1;
    let mut coeffs = vec![Complex64::zero(); n];
    let mut errors = vec![0.0; n];
    let mut magnitudes = vec![0.0; n];
    for (u, f) in t.terms() {
        let (z, ez) = if u.is_empty() {
            (Complex64::one(), 0.0)
        } else {
            let v = zeta_tilde_eval(u, tol)?;
            (v.value, v.abs_error_bound)
        };
        for (i, c) in f.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cf = rational_to_f64(c);
            coeffs[i] += z * cf;
            magnitudes[i] += z.norm() * cf.abs();
            errors[i] += ez * cf.abs() + z.norm() * cf.abs() * f64::EPSILON;
        }
    }
    Ok(NumericSeries { coeffs, errors, magnitudes })
}

/// Lattice cutoffs and evaluation point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatticeParams {
    pub tau: Complex64,
    pub l_cutoff: usize,
    pub m_cutoff: usize,
}

impl LatticeParams {
    pub fn new(tau: Complex64, l_cutoff: usize, m_cutoff: usize) -> Result<Self> {
        if tau.im <= 0.0 || !tau.re.is_finite() || !tau.im.is_finite() {
            return Err(Error::InvalidArgument(format!("tau = {tau} must lie in the upper half-plane")));
        }
        if l_cutoff == 0 || m_cutoff == 0 {
            return Err(Error::InvalidArgument("cutoffs must be positive".into()));
        }
        Ok(LatticeParams { tau, l_cutoff, m_cutoff })
    }
}

/// `T[j][k]` (0-based, inclusive) = sum over `m_j < ... < m_k` in one row of
/// `prod (z + m_i)^{-n_i}`, with `m` running over all integers (or over
/// positive integers when `positive_only`), computed exactly on
/// `|m| <= cutoff` and by nested integrals beyond.
fn row_transfer(n: &[u32], z: Complex64, cutoff: usize, positive_only: bool) -> Vec<Vec<Complex64>> {
    let r = n.len();
    let mut mid = vec![vec![Complex64::zero(); r]; r];
    let start = if positive_only { 1 } else { -(cutoff as i64) };
    let mut powers: Vec<Vec<Complex64>> = Vec::new();
    for m in start..=cutoff as i64 {
        let inv = (z + m as f64).inv();
        powers.push(n.iter().map(|&e| inv.powu(e)).collect());
    }
    for a in 0..r {
        let mut acc = vec![Complex64::zero(); r];
        for p in &powers {
            for k in (a..r).rev() {
                let base = if k == a { Complex64::one() } else { acc[k - 1] };
                acc[k] += base * p[k];
            }
        }
        mid[a][a..r].copy_from_slice(&acc[a..r]);
    }

    let x = cutoff as f64 + 0.5;
    // right tail: X < x_b < ... < x_k, variable z + x
    let y_right = z + x;
    let mut right = vec![vec![Complex64::zero(); r]; r];
    for b in 0..r {
        for k in b..r {
            let p = (k - b + 1) as i32;
            let s: i32 = n[b..=k].iter().map(|&e| e as i32).sum();
            let mut denom = 1.0;
            for i in b..=k {
                let suffix: i32 = n[i..=k].iter().map(|&e| e as i32).sum();
                denom *= (suffix - (k - i + 1) as i32) as f64;
            }
            let mut v = y_right.powi(p - s) / denom;
            if p == 1 {
                v -= y_right.powi(-(n[b] as i32) - 1) * (n[b] as f64 / 24.0);
            }
            right[b][k] = v;
        }
    }
    // left tail: m_j < ... < m_{a-1} < -cutoff, i.e. x_j > ... > x_{a-1} > X
    let mut left = vec![vec![Complex64::zero(); r]; r];
    if !positive_only {
        let y_left = Complex64::new(x, 0.0) - z;
        for j in 0..r {
            for e in j..r {
                let p = (e - j + 1) as i32;
                let s: i32 = n[j..=e].iter().map(|&v| v as i32).sum();
                let mut denom = 1.0;
                for i in j..=e {
                    let prefix: i32 = n[j..=i].iter().map(|&v| v as i32).sum();
                    denom *= (prefix - (i - j + 1) as i32) as f64;
                }
                let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
                let mut v = y_left.powi(p - s) * (sign / denom);
                if p == 1 {
                    let zx = z - x;
                    v += zx.powi(-(n[j] as i32) - 1) * (n[j] as f64 / 24.0);
                }
                left[j][e] = v;
            }
        }
    }

    let seg = |tab: &Vec<Vec<Complex64>>, from: usize, to_excl: usize| -> Complex64 {
        if from == to_excl {
            Complex64::one()
        } else {
            tab[from][to_excl - 1]
        }
    };
    let mut full = vec![vec![Complex64::zero(); r]; r];
    for j in 0..r {
        for k in j..r {
            let mut sum = Complex64::zero();
            for a in j..=k + 1 {
                if positive_only && a != j {
                    continue;
                }
                let l = seg(&left, j, a);
                for b in a..=k + 1 {
                    sum += l * seg(&mid, a, b) * seg(&right, b, k + 1);
                }
            }
            full[j][k] = sum;
        }
    }
    full
}

/// Truncated ordered lattice sum `G_c(τ)` (not normalized), taking the
/// inner limit in `m` row by row before the outer cutoff in `l`.
pub fn lattice_eval(c: &Composition, p: &LatticeParams) -> Result<Complex64> {
    require_parts_at_least_two(c)?;
    let n = c.parts();
    let r = n.len();
    if r == 0 {
        return Ok(Complex64::one());
    }
    let rows: Vec<Vec<Vec<Complex64>>> = (0..=p.l_cutoff)
        .into_par_iter()
        .map(|l| row_transfer(n, p.tau * l as f64, p.m_cutoff, l == 0))
        .collect();
    let mut acc = vec![Complex64::zero(); r + 1];
    acc[0] = Complex64::one();
    for t in &rows {
        let mut next = acc.clone();
        for k in 1..=r {
            for j in 1..=k {
                next[k] += acc[j - 1] * t[j - 1][k - 1];
            }
        }
        acc = next;
    }
    Ok(acc[r])
}

/// `G̃_c(τ) = G_c(τ) / (-2πi)^{wt}` from the lattice sum.
pub fn lattice_eval_normalized(c: &Composition, p: &LatticeParams) -> Result<Complex64> {
    Ok(lattice_eval(c, p)? / crate::mzv::two_pi_i_power(c.weight()))
}

/// `Ψ_c(τ) = sum_{m_1 < ... < m_r} prod (τ + m_i)^{-n_i}`.
pub fn psi_eval(c: &Composition, tau: Complex64, cutoff: usize) -> Result<Complex64> {
    require_parts_at_least_two(c)?;
    if tau.im <= 0.0 {
        return Err(Error::InvalidArgument(format!("tau = {tau} must lie in the upper half-plane")));
    }
    if c.is_empty() {
        return Ok(Complex64::one());
    }
    let t = row_transfer(c.parts(), tau, cutoff.max(1), false);
    Ok(t[0][c.depth() - 1])
}

/// Outcome of the vanishing check for the coefficient of `Ψ_1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VanishingReport {
    pub value: f64,
    pub error_bound: f64,
    pub vanishes: bool,
}

/// Evaluates `sum_q sum_{k_q = 1} (-1)^{n_q + k_{q+1} + ... + k_r}
/// prod_{j != q} binom(k_j - 1, n_j - 1) ζ(k_{q-1},...,k_1) ζ(k_{q+1},...,k_r)`.
pub fn check_vanishing(c: &Composition, tol: f64) -> Result<VanishingReport> {
    require_parts_at_least_two(c)?;
    let n = c.parts();
    let r = n.len();
    let total: u32 = n.iter().sum();
    let mut cache: HashMap<Composition, (f64, f64)> = HashMap::new();
    let mut zeta = |u: Composition| -> Result<(f64, f64)> {
        if u.is_empty() {
            return Ok((1.0, 0.0));
        }
        if let Some(v) = cache.get(&u) {
            return Ok(*v);
        }
        let v = mzv_eval(&u, 1e-12)?;
        let out = (v.value.re, v.abs_error_bound);
        cache.insert(u, out);
        Ok(out)
    };
    let mut sum = 0.0;
    let mut err = 0.0;
    for q in 0..r {
        let others = r - 1;
        if total < 1 + 2 * others as u32 {
            continue;
        }
        for rest in k_tuples(total - 1, others) {
            let mut k = rest.clone();
            k.insert(q, 1);
            let mut coeff = num_bigint::BigInt::one();
            for j in (0..r).filter(|&j| j != q) {
                coeff *= binomial(k[j] as i64 - 1, n[j] as i64 - 1);
            }
            if coeff.is_zero() {
                continue;
            }
            let tail: u32 = k[q + 1..].iter().sum();
            let sign = if (n[q] + tail) % 2 == 0 { 1.0 } else { -1.0 };
            let a = zeta(Composition::new(k[..q].iter().rev().copied().collect())?)?;
            let b = zeta(Composition::new(k[q + 1..].to_vec())?)?;
            let cf = sign * rational_to_f64(&Rational::from_integer(coeff));
            sum += cf * a.0 * b.0;
            err += cf.abs() * (a.1 * b.0.abs() + b.1 * a.0.abs() + 4.0 * f64::EPSILON * (a.0 * b.0).abs());
        }
    }
    Ok(VanishingReport { value: sum, error_bound: err, vanishes: sum.abs() <= tol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{int, rat};

    fn c(parts: &[u32]) -> Composition {
        Composition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn mes_examples() {
        let e = GshEngine::new(10).unwrap();
        let m2 = mes_sh(&c(&[2]), &e).unwrap();
        assert_eq!(m2.len(), 2);
        assert_eq!(m2.get(&c(&[2])).unwrap(), &QSeries::one(10));
        assert_eq!(m2.get(&Composition::empty()).unwrap(), &g_tilde(&c(&[2]), 10));

        let m13 = mes_sh(&c(&[1, 3]), &e).unwrap();
        assert_eq!(m13.len(), 3);
        assert_eq!(m13.get(&c(&[1, 3])).unwrap(), &QSeries::one(10));
        assert_eq!(m13.get(&c(&[2])).unwrap(), &(-&e.g_tilde_sh(&c(&[2])).unwrap()));
        assert_eq!(m13.get(&Composition::empty()).unwrap(), &e.g_tilde_sh(&c(&[1, 3])).unwrap());
    }

    #[test]
    fn fourier_depth_two() {
        let t = fourier_symbolic(&c(&[2, 3]), ZetaProduct::Shuffle).unwrap();
        assert_eq!(t.coeff(&TensorKey::new(c(&[2, 3]), Composition::empty())), int(1));
        assert_eq!(t.coeff(&TensorKey::new(Composition::empty(), c(&[2, 3]))), int(1));
        for k1 in 2..=3u32 {
            let k2 = 5 - k1;
            let expected = crate::hopf::b_coefficient(2, 3, k1 as i64) + if k1 == 2 { int(1) } else { int(0) };
            assert_eq!(t.coeff(&TensorKey::new(c(&[k1]), c(&[k2]))), expected);
        }
        assert!(fourier_symbolic(&c(&[1, 3]), ZetaProduct::Shuffle).is_err());
    }

    #[test]
    fn fourier_extreme_words() {
        let cc = c(&[2, 3, 2]);
        let xx = fourier_word_symbolic(&cc, &"xxx".parse().unwrap(), ZetaProduct::Shuffle).unwrap();
        assert_eq!(xx, tensor(&LinComb::basis(cc.clone()), &LinComb::basis(Composition::empty())));
        let yy = fourier_word_symbolic(&cc, &"yyy".parse().unwrap(), ZetaProduct::Shuffle).unwrap();
        assert_eq!(yy, tensor(&LinComb::basis(Composition::empty()), &LinComb::basis(cc)));
    }

    #[test]
    fn symbolic_theorem_small() {
        for comp in [c(&[2, 2]), c(&[2, 3]), c(&[3, 2]), c(&[2, 2, 2])] {
            assert_eq!(mes_symbolic(&comp), fourier_symbolic(&comp, ZetaProduct::Shuffle).unwrap(), "{comp}");
        }
    }

    #[test]
    fn numeric_eval_examples() {
        let mut t = MzvQTensor::zero(5);
        t.add_term(c(&[2]), &QSeries::one(5), &int(1));
        let ns = numeric_eval(&t, 1e-12).unwrap();
        assert!((ns.coeffs[0].re + 1.0 / 24.0).abs() < 1e-10);
        let mut g = MzvQTensor::zero(5);
        g.add_term(Composition::empty(), &g_tilde(&c(&[2]), 5), &int(1));
        let ns = numeric_eval(&g, 1e-12).unwrap();
        assert_eq!(ns.coeffs[2], Complex64::new(3.0, 0.0));
    }

    #[test]
    fn exact_value_eq46() {
        let e = GshEngine::new(20).unwrap();
        let v = LinComb::from_terms([(c(&[4]), int(1)), (c(&[1, 3]), int(-4))]);
        let t = mes_sh_lin(&v, &e).unwrap();
        assert!(t.exact_value().unwrap().is_zero());
        assert_eq!(t.get(&c(&[2])).unwrap(), &e.g_tilde_sh(&c(&[2])).unwrap().scale(&int(4)));
        let _ = rat(1, 1);
    }

    #[test]
    fn lattice_depth_one() {
        let p = LatticeParams::new(Complex64::new(0.0, 1.0), 80, 80).unwrap();
        let lat = lattice_eval_normalized(&c(&[4]), &p).unwrap();
        let e = GshEngine::new(20).unwrap();
        let ns = numeric_eval(&mes_sh(&c(&[4]), &e).unwrap(), 1e-12).unwrap();
        let (four, _) = ns.eval(q_from_tau(p.tau));
        assert!((lat - four).norm() < 1e-6, "{lat} vs {four}");
        assert_eq!(lattice_eval(&Composition::empty(), &p).unwrap(), Complex64::one());
    }

    #[test]
    fn psi_lipschitz() {
        let tau = Complex64::new(0.0, 1.0);
        let psi2 = psi_eval(&c(&[2]), tau, 10_000).unwrap();
        let q = q_from_tau(tau);
        let mut s = Complex64::zero();
        for v in 1..40 {
            s += q.powu(v) * v as f64;
        }
        let lip = Complex64::new(0.0, -2.0 * PI).powu(2) * s;
        assert!((psi2 - lip).norm() < 1e-8, "{psi2} vs {lip}");
    }

    #[test]
    fn vanishing_small() {
        assert!(check_vanishing(&c(&[2, 2]), 1e-8).unwrap().vanishes);
        assert!(check_vanishing(&c(&[2, 3]), 1e-8).unwrap().vanishes);
        assert!(check_vanishing(&c(&[5]), 1e-8).unwrap().vanishes);
    }
}
