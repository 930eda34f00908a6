//! Truncated q-series with exact rational coefficients, multiple divisor
//! sums, and the series `g̃` and `g̃^sh`.
//!
//! Three routes to `g̃^sh` are provided:
//! * [`GshEngine`], a breakpoint recursion used everywhere in production;
//! * [`g_sh_by_substitution`], which builds `h` as a [`MultiSeries`] and
//!   performs the linear change of variables by multinomial expansion;
//! * [`g_sh_by_primed_blocks`], which sums `H` directly over the
//!   difference variables `x_{p_{j-1}} - x_{p_j}`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::words::{binomial, factorial, hoffman_exp_terms, Composition, LinComb, Rational};

/// Resource limits for series constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_weight: u32,
    pub max_order: usize,
    /// Depth limit for the multivariate [`h_truncated`] expansion.
    pub max_multiseries_depth: usize,
    /// Limit on `D + r` for [`h_truncated`].
    pub max_multiseries_weight: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_weight: 12, max_order: 200, max_multiseries_depth: 4, max_multiseries_weight: 12 }
    }
}

impl Budget {
    fn check_order(&self, order: usize) -> Result<()> {
        if order > self.max_order {
            return Err(Error::Budget(format!("q-order {order} exceeds {}", self.max_order)));
        }
        Ok(())
    }

    fn check_weight(&self, c: &Composition) -> Result<()> {
        if c.weight() > self.max_weight {
            return Err(Error::Budget(format!("weight {} of {c} exceeds {}", c.weight(), self.max_weight)));
        }
        Ok(())
    }
}

/// Power series `c_0 + c_1 q + ... + c_M q^M + O(q^{M+1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSeries {
    coeffs: Vec<Rational>,
}

impl QSeries {
    pub fn zero(order: usize) -> Self {
        QSeries { coeffs: vec![Rational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Rational::one();
        s
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// Builds a series from `c_0..c_M`; the truncation order is `len - 1`.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("a q-series needs at least one coefficient".into()));
        }
        Ok(QSeries { coeffs })
    }

    pub fn from_integers(coeffs: &[BigInt]) -> Self {
        QSeries { coeffs: coeffs.iter().map(|c| Rational::from_integer(c.clone())).collect() }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &Rational {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> QSeries {
        let order = order.min(self.order());
        QSeries { coeffs: self.coeffs[..=order].to_vec() }
    }

    pub fn scale(&self, s: &Rational) -> QSeries {
        QSeries { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn add_scaled(&mut self, other: &QSeries, s: &Rational) {
        let order = self.order().min(other.order());
        self.coeffs.truncate(order + 1);
        if s.is_zero() {
            return;
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a += b * s;
            }
        }
    }

    /// `q d/dq`.
    pub fn q_derivative(&self) -> QSeries {
        QSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, c)| c * Rational::from_integer(BigInt::from(n)))
                .collect(),
        }
    }

    /// Evaluates the truncated polynomial at a complex `q`.
    pub fn eval(&self, q: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * q + Complex64::new(crate::mzv::rational_to_f64(c), 0.0);
        }
        acc
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::one());
        out
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        self.scale(&-Rational::one())
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        let order = self.order().min(rhs.order());
        let mut out = vec![Rational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        QSeries { coeffs: out }
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let a = c.abs();
            let show_coeff = !a.is_one() || n == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match n {
                0 => {}
                1 => write!(f, "q")?,
                _ => write!(f, "q^{n}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order() + 1)
    }
}

/// Integer series truncated at a fixed order, used internally.
type IntSeries = Vec<BigInt>;

/// `sum_{v >= 1, u v <= M} v^{e} q^{u v}` added into `out` after multiplying by `base`.
fn mul_add_power_series(out: &mut IntSeries, base: &IntSeries, u: usize, e: u32, min_v: usize) {
    let order = out.len() - 1;
    for (k, b) in base.iter().enumerate() {
        if b.is_zero() {
            continue;
        }
        let mut v = min_v.max(1);
        while k + u * v <= order {
            out[k + u * v] += b * BigInt::from(v).pow(e);
            v += 1;
        }
    }
}

/// Coefficients `σ_c(0..=M)` of the multiple divisor sum.
pub fn multiple_divisor_sum_series(c: &Composition, order: usize) -> IntSeries {
    let r = c.depth();
    let mut acc: Vec<IntSeries> = vec![vec![BigInt::zero(); order + 1]; r + 1];
    acc[0][0] = BigInt::one();
    for u in 1..=order {
        for i in (1..=r).rev() {
            let (lower, upper) = acc.split_at_mut(i);
            mul_add_power_series(&mut upper[0], &lower[i - 1], u, c.parts()[i - 1] - 1, 1);
        }
    }
    acc.pop().expect("depth + 1 accumulators")
}

/// `σ_c(n)`.
pub fn multiple_divisor_sum(c: &Composition, n: usize) -> BigInt {
    multiple_divisor_sum_series(c, n)[n].clone()
}

fn factorial_product(parts: impl IntoIterator<Item = u32>) -> BigInt {
    parts.into_iter().map(factorial).product()
}

/// `g̃_c = sum_n σ_c(n) q^n / prod (n_i - 1)!`.
pub fn g_tilde(c: &Composition, order: usize) -> QSeries {
    let sigma = multiple_divisor_sum_series(c, order);
    let denom = factorial_product(c.parts().iter().map(|&p| p - 1));
    QSeries { coeffs: sigma.into_iter().map(|s| Rational::new(s, denom.clone())).collect() }
}

/// `q d/dq`.
pub fn q_derivative(s: &QSeries) -> QSeries {
    s.q_derivative()
}

type SuffixKey = Vec<(u32, u32)>;

/// Cached evaluator for `g̃^sh` at a fixed q-order.
///
/// Expanding `g_sh = h(x_r - x_{r-1}, ..., x_1)` over decompositions
/// `(i_1,...,i_m)` of `r`, the block variables are differences of the
/// breakpoint variables `x_{p_0}, ..., x_{p_{m-1}}` with `p_0 = r`. A
/// decomposition contributes to the coefficient of `x^{c-1}` only when
/// every part of `c` off the breakpoints equals 1, and then it equals
/// `sum_{v} prod_j binom(v_j-1, i_j-1) F_{e_j}(q^{V_j})` with
/// `V_j = v_j + ... + v_m` and `F_e(x) = sum_d d^e x^d / e!`.
pub struct GshEngine {
    order: usize,
    budget: Budget,
    suffixes: Mutex<HashMap<SuffixKey, Arc<Vec<IntSeries>>>>,
    results: Mutex<HashMap<Composition, QSeries>>,
}

impl GshEngine {
    pub fn new(order: usize) -> Result<Self> {
        Self::with_budget(order, Budget::default())
    }

    pub fn with_budget(order: usize, budget: Budget) -> Result<Self> {
        budget.check_order(order)?;
        Ok(GshEngine {
            order,
            budget,
            suffixes: Mutex::new(HashMap::new()),
            results: Mutex::new(HashMap::new()),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    /// `B_j(V)` for `V = 0..=M`, for the suffix `key = [(i_j, e_j), ..., (i_m, e_m)]`.
    fn suffix_table(&self, key: &[(u32, u32)]) -> Arc<Vec<IntSeries>> {
        let order = self.order;
        if let Some(t) = self.suffixes.lock().expect("cache lock").get(key) {
            return t.clone();
        }
        let table: Vec<IntSeries> = if key.is_empty() {
            let mut t = vec![vec![BigInt::zero(); order + 1]; order + 1];
            t[0][0] = BigInt::one();
            t
        } else {
            let (i, e) = key[0];
            let inner = self.suffix_table(&key[1..]);
            let mut t = vec![vec![BigInt::zero(); order + 1]; order + 1];
            for big_v in 1..=order {
                // S(V) = sum_{v >= i} binom(v-1, i-1) B_{j+1}(V - v), truncated at M - V
                let room = order - big_v;
                let mut s: IntSeries = vec![BigInt::zero(); room + 1];
                let mut nonzero = false;
                for v in (i as usize)..=big_v {
                    let prev = &inner[big_v - v];
                    let w = binomial(v as i64 - 1, i as i64 - 1);
                    for (n, p) in prev.iter().enumerate().take(room + 1) {
                        if !p.is_zero() {
                            s[n] += &w * p;
                            nonzero = true;
                        }
                    }
                }
                if !nonzero {
                    continue;
                }
                mul_add_power_series(&mut t[big_v], &s, big_v, e, 1);
            }
            t
        };
        let table = Arc::new(table);
        self.suffixes.lock().expect("cache lock").insert(key.to_vec(), table.clone());
        table
    }

    /// `g̃^sh_c` to the engine's order.
    pub fn g_tilde_sh(&self, c: &Composition) -> Result<QSeries> {
        self.budget.check_weight(c)?;
        if c.is_empty() {
            return Ok(QSeries::one(self.order));
        }
        if let Some(s) = self.results.lock().expect("cache lock").get(c) {
            return Ok(s.clone());
        }
        let parts = c.parts();
        let r = parts.len();
        let decomps = hoffman_exp_terms(r as u32)?;
        let mut total = QSeries::zero(self.order);
        for (blocks, coeff) in decomps.iter() {
            let mut key = Vec::with_capacity(blocks.depth());
            let mut p = r;
            let mut ok = true;
            for &i in blocks.parts() {
                // breakpoint p carries exponent n_p - 1; interior variables need n = 1
                key.push((i, parts[p - 1] - 1));
                for interior in (p - i as usize + 1)..p {
                    if parts[interior - 1] != 1 {
                        ok = false;
                    }
                }
                p -= i as usize;
            }
            if !ok {
                continue;
            }
            let table = self.suffix_table(&key);
            let mut sum: IntSeries = vec![BigInt::zero(); self.order + 1];
            for row in table.iter().skip(1) {
                for (a, b) in sum.iter_mut().zip(row) {
                    *a += b;
                }
            }
            let denom = factorial_product(key.iter().map(|&(_, e)| e));
            let scale = coeff / Rational::from_integer(denom);
            total.add_scaled(&QSeries::from_integers(&sum), &scale);
        }
        self.results.lock().expect("cache lock").insert(c.clone(), total.clone());
        Ok(total)
    }

    /// `g̃_c` to the engine's order.
    pub fn g_tilde(&self, c: &Composition) -> QSeries {
        g_tilde(c, self.order)
    }

    /// `sum a_c g̃^sh_c`.
    pub fn g_tilde_sh_lin(&self, x: &LinComb<Composition>) -> Result<QSeries> {
        let mut out = QSeries::zero(self.order);
        for (c, a) in x.iter() {
            out.add_scaled(&self.g_tilde_sh(c)?, a);
        }
        Ok(out)
    }
}

/// `g̃^sh_c` to order `M` using a fresh engine.
pub fn g_tilde_sh(c: &Composition, order: usize) -> Result<QSeries> {
    GshEngine::new(order)?.g_tilde_sh(c)
}

/// Power series in commuting variables `x_1..x_r` with q-series
/// coefficients, truncated at total x-degree `D` and q-order `M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiSeries {
    nvars: usize,
    max_degree: u32,
    order: usize,
    terms: BTreeMap<Vec<u32>, QSeries>,
}

impl MultiSeries {
    pub fn zero(nvars: usize, max_degree: u32, order: usize) -> Self {
        MultiSeries { nvars, max_degree, order, terms: BTreeMap::new() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficient of `x^exps`.
    pub fn coeff(&self, exps: &[u32]) -> QSeries {
        self.terms.get(exps).cloned().unwrap_or_else(|| QSeries::zero(self.order))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &QSeries)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, s: &QSeries, scale: &Rational) {
        debug_assert_eq!(exps.len(), self.nvars);
        if exps.iter().sum::<u32>() > self.max_degree || scale.is_zero() {
            return;
        }
        let order = self.order;
        let entry = self.terms.entry(exps).or_insert_with(|| QSeries::zero(order));
        entry.add_scaled(s, scale);
        let drop = entry.is_zero();
        if drop {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add_scaled(&mut self, other: &MultiSeries, scale: &Rational) {
        for (e, s) in &other.terms {
            self.add_term(e.clone(), s, scale);
        }
    }

    pub fn mul(&self, other: &MultiSeries) -> Result<MultiSeries> {
        if self.nvars != other.nvars {
            return Err(Error::InvalidArgument("variable count mismatch".into()));
        }
        let mut out = MultiSeries::zero(
            self.nvars,
            self.max_degree.min(other.max_degree),
            self.order.min(other.order),
        );
        for (e1, s1) in &self.terms {
            for (e2, s2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, &(s1 * s2), &Rational::one());
            }
        }
        Ok(out)
    }

    /// Substitutes `x_k -> sum_j forms[k][j] y_j` into a series in `new_nvars`
    /// variables `y`, by multinomial expansion.
    pub fn substitute(&self, forms: &[Vec<i64>], new_nvars: usize) -> Result<MultiSeries> {
        if forms.len() != self.nvars || forms.iter().any(|f| f.len() != new_nvars) {
            return Err(Error::InvalidArgument("substitution shape mismatch".into()));
        }
        let mut out = MultiSeries::zero(new_nvars, self.max_degree, self.order);
        let mut power_cache: HashMap<(usize, u32), Vec<(Vec<u32>, Rational)>> = HashMap::new();
        for (e, s) in &self.terms {
            // expand prod_k (form_k)^{e_k}
            let mut poly: Vec<(Vec<u32>, Rational)> = vec![(vec![0; new_nvars], Rational::one())];
            for (k, &ek) in e.iter().enumerate() {
                if ek == 0 {
                    continue;
                }
                let pk = power_cache
                    .entry((k, ek))
                    .or_insert_with(|| linear_form_power(&forms[k], ek))
                    .clone();
                let mut next: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
                for (m1, c1) in &poly {
                    for (m2, c2) in &pk {
                        let m: Vec<u32> = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                        *next.entry(m).or_insert_with(Rational::zero) += c1 * c2;
                    }
                }
                poly = next.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            }
            for (m, c) in poly {
                out.add_term(m, s, &c);
            }
        }
        Ok(out)
    }
}

/// `(sum_j a_j y_j)^n` as a list of monomials.
fn linear_form_power(form: &[i64], n: u32) -> Vec<(Vec<u32>, Rational)> {
    let mut out = Vec::new();
    for exps in monomials(form.len(), n).into_iter().filter(|e| e.iter().sum::<u32>() == n) {
        // multinomial n! / prod e_j! times prod a_j^{e_j}
        let mut c = Rational::from_integer(factorial(n));
        for (j, &ej) in exps.iter().enumerate() {
            c /= Rational::from_integer(factorial(ej));
            c *= Rational::from_integer(BigInt::from(form[j]).pow(ej));
        }
        if !c.is_zero() {
            out.push((exps, c));
        }
    }
    out
}

/// All exponent vectors in `nvars` variables of total degree at most `max_degree`.
pub fn monomials(nvars: usize, max_degree: u32) -> Vec<Vec<u32>> {
    fn rec(nvars: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == nvars {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(nvars, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(nvars, max_degree, &mut Vec::new(), &mut out);
    out
}

/// `(q^u / (1 - q^u))^n = sum_{v >= n} binom(v-1, n-1) q^{u v}`, truncated.
fn geometric_power(u: usize, n: u32, order: usize) -> QSeries {
    let mut s = QSeries::zero(order);
    let mut v = n as usize;
    while u * v <= order {
        s.coeffs[u * v] = Rational::from_integer(binomial(v as i64 - 1, n as i64 - 1));
        v += 1;
    }
    s
}

/// `H(n_1..n_m; L_1..L_m)` where each `L_j` is an integer linear form in
/// `nvars` variables, truncated at x-degree `D` and q-order `M`.
pub fn h_series(
    indices: &[u32],
    forms: &[Vec<i64>],
    nvars: usize,
    max_degree: u32,
    order: usize,
) -> Result<MultiSeries> {
    if indices.len() != forms.len() || forms.iter().any(|f| f.len() != nvars) {
        return Err(Error::InvalidArgument("H: index/form shape mismatch".into()));
    }
    if indices.contains(&0) {
        return Err(Error::InvalidArgument("H: indices must be positive".into()));
    }
    let monos = monomials(nvars, max_degree);
    let mut out = MultiSeries::zero(nvars, max_degree, order);
    let m = indices.len();
    if m == 0 {
        out.add_term(vec![0; nvars], &QSeries::one(order), &Rational::one());
        return Ok(out);
    }
    struct Ctx<'a> {
        indices: &'a [u32],
        forms: &'a [Vec<i64>],
        monos: &'a [Vec<u32>],
        order: usize,
        out: &'a mut MultiSeries,
    }
    fn rec(ctx: &mut Ctx<'_>, j: usize, min_u: usize, used: usize, q: &QSeries, a: &[i64]) {
        if j == ctx.indices.len() {
            for e in ctx.monos {
                let mut c = Rational::one();
                for (k, &ek) in e.iter().enumerate() {
                    if ek > 0 {
                        c *= Rational::new(BigInt::from(a[k]).pow(ek), factorial(ek));
                    }
                }
                ctx.out.add_term(e.clone(), q, &c);
            }
            return;
        }
        let rest_min: usize = ctx.indices[j + 1..].iter().map(|&i| i as usize).sum();
        let mut u = min_u;
        loop {
            // remaining indices need u_k > u, each contributing at least u_k * i_k
            let need = used + u * ctx.indices[j] as usize + (u + 1) * rest_min;
            if need > ctx.order {
                break;
            }
            let g = geometric_power(u, ctx.indices[j], ctx.order);
            let q2 = q * &g;
            let a2: Vec<i64> = a.iter().zip(&ctx.forms[j]).map(|(x, f)| x + f * u as i64).collect();
            rec(ctx, j + 1, u + 1, used + u * ctx.indices[j] as usize, &q2, &a2);
            u += 1;
        }
    }
    let mut ctx = Ctx { indices, forms, monos: &monos, order, out: &mut out };
    rec(&mut ctx, 0, 1, 0, &QSeries::one(order), &vec![0; nvars]);
    Ok(out)
}

fn check_multiseries_budget(r: usize, max_degree: u32, order: usize, budget: &Budget) -> Result<()> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be positive".into()));
    }
    if r > budget.max_multiseries_depth {
        return Err(Error::Budget(format!("depth {r} exceeds {}", budget.max_multiseries_depth)));
    }
    if max_degree + r as u32 > budget.max_multiseries_weight {
        return Err(Error::Budget(format!(
            "D + r = {} exceeds {}",
            max_degree + r as u32,
            budget.max_multiseries_weight
        )));
    }
    budget.check_order(order)
}

/// `h(x_1..x_r) = sum_{(i_1..i_m)} H(i_1..i_m; y_1..y_m) / prod i_j!` with
/// `y_j` the sum of the `j`-th consecutive block of variables.
pub fn h_truncated(r: usize, max_degree: u32, order: usize) -> Result<MultiSeries> {
    check_multiseries_budget(r, max_degree, order, &Budget::default())?;
    let mut out = MultiSeries::zero(r, max_degree, order);
    for (blocks, coeff) in hoffman_exp_terms(r as u32)?.iter() {
        let mut forms = Vec::new();
        let mut start = 0usize;
        for &i in blocks.parts() {
            let mut f = vec![0i64; r];
            for v in f.iter_mut().skip(start).take(i as usize) {
                *v = 1;
            }
            forms.push(f);
            start += i as usize;
        }
        let h = h_series(blocks.parts(), &forms, r, max_degree, order)?;
        out.add_scaled(&h, coeff);
    }
    Ok(out)
}

/// Forms of `x_r - x_{r-1}, ..., x_2 - x_1, x_1` in 0-based variable indices.
fn difference_forms(r: usize) -> Vec<Vec<i64>> {
    (0..r)
        .map(|k| {
            let hi = r - k; // 1-based x_{r-k}
            let mut f = vec![0i64; r];
            f[hi - 1] += 1;
            if hi >= 2 {
                f[hi - 2] -= 1;
            }
            f
        })
        .collect()
}

/// `g_sh(x) = h(x_r - x_{r-1}, ..., x_1)` via explicit substitution.
pub fn g_sh_by_substitution(r: usize, max_degree: u32, order: usize) -> Result<MultiSeries> {
    h_truncated(r, max_degree, order)?.substitute(&difference_forms(r), r)
}

/// `g_sh(x) = sum H(i_1..i_m; y'_1..y'_m) / prod i_j!` with
/// `y'_j = x_{p_{j-1}} - x_{p_j}`, `p_0 = r`, `p_j = p_{j-1} - i_j`, `x_0 = 0`.
pub fn g_sh_by_primed_blocks(r: usize, max_degree: u32, order: usize) -> Result<MultiSeries> {
    check_multiseries_budget(r, max_degree, order, &Budget::default())?;
    let mut out = MultiSeries::zero(r, max_degree, order);
    for (blocks, coeff) in hoffman_exp_terms(r as u32)?.iter() {
        let mut forms = Vec::new();
        let mut p = r;
        for &i in blocks.parts() {
            let next = p - i as usize;
            let mut f = vec![0i64; r];
            f[p - 1] += 1;
            if next >= 1 {
                f[next - 1] -= 1;
            }
            forms.push(f);
            p = next;
        }
        let h = h_series(blocks.parts(), &forms, r, max_degree, order)?;
        out.add_scaled(&h, coeff);
    }
    Ok(out)
}

/// `H(1,...,1; x_r - x_{r-1}, ..., x_1)`, the generating series of `g̃`.
pub fn g_generating(r: usize, max_degree: u32, order: usize) -> Result<MultiSeries> {
    check_multiseries_budget(r, max_degree, order, &Budget::default())?;
    h_series(&vec![1; r], &difference_forms(r), r, max_degree, order)
}

/// Extracts the coefficient of `x^{c-1}` from a generating series.
pub fn monomial_of(ms: &MultiSeries, c: &Composition) -> Result<QSeries> {
    if c.depth() != ms.nvars() {
        return Err(Error::InvalidArgument("depth does not match variable count".into()));
    }
    let exps: Vec<u32> = c.parts().iter().map(|p| p - 1).collect();
    if exps.iter().sum::<u32>() > ms.max_degree() {
        return Err(Error::Budget(format!("{c} exceeds the series' x-degree")));
    }
    Ok(ms.coeff(&exps))
}

pub fn rational_to_string(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Lossy float view of the coefficients, for diagnostics.
pub fn to_f64_coeffs(s: &QSeries) -> Vec<f64> {
    s.coeffs().iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{int, rat};

    fn c(parts: &[u32]) -> Composition {
        Composition::new(parts.to_vec()).unwrap()
    }

    fn ints(s: &QSeries, n: usize) -> Vec<Rational> {
        s.coeffs()[..n].to_vec()
    }

    #[test]
    fn divisor_sums() {
        assert_eq!(multiple_divisor_sum(&c(&[2]), 4), BigInt::from(7));
        assert_eq!(multiple_divisor_sum(&c(&[1, 1]), 3), BigInt::from(1));
        assert_eq!(multiple_divisor_sum(&c(&[1, 1]), 2), BigInt::from(0));
    }

    #[test]
    fn g_tilde_examples() {
        let g2 = g_tilde(&c(&[2]), 6);
        assert_eq!(ints(&g2, 6), [0, 1, 3, 4, 7, 6].map(|x| int(x)).to_vec());
        let g1 = g_tilde(&c(&[1]), 5);
        assert_eq!(ints(&g1, 5), [0, 1, 2, 2, 3].map(|x| int(x)).to_vec());
        let g11 = g_tilde(&c(&[1, 1]), 5);
        assert_eq!(ints(&g11, 6), [0, 0, 0, 1, 2, 5].map(|x| int(x)).to_vec());
        let g3 = g_tilde(&c(&[3]), 3);
        assert_eq!(g3.coeff(2), &rat(5, 2));
    }

    #[test]
    fn derivative_examples() {
        let s = QSeries::from_coeffs(vec![int(0), int(1), int(3)]).unwrap();
        assert_eq!(s.q_derivative().coeffs(), &[int(0), int(1), int(6)]);
        assert!(QSeries::constant(int(5), 3).q_derivative().is_zero());
        let d = g_tilde(&c(&[2]), 4).q_derivative();
        assert_eq!(d.coeffs(), &[int(0), int(1), int(6), int(12), int(28)]);
    }

    #[test]
    fn truncation_is_min() {
        let a = QSeries::one(5);
        let b = QSeries::one(3);
        assert_eq!((&a * &b).order(), 3);
        assert_eq!((&a + &b).order(), 3);
    }

    #[test]
    fn gsh_examples() {
        let e = GshEngine::new(12).unwrap();
        assert_eq!(e.g_tilde_sh(&c(&[2, 3])).unwrap(), g_tilde(&c(&[2, 3]), 12));
        let g11 = e.g_tilde_sh(&c(&[1, 1])).unwrap();
        assert_eq!(g11.coeff(2), &rat(1, 2));
        for n in 1..=5 {
            assert_eq!(e.g_tilde_sh(&c(&[n])).unwrap(), g_tilde(&c(&[n]), 12));
        }
        assert_eq!(e.g_tilde_sh(&Composition::empty()).unwrap(), QSeries::one(12));
    }

    #[test]
    fn h_examples() {
        let h1 = h_truncated(1, 2, 10).unwrap();
        assert_eq!(h1.coeff(&[0]), g_tilde(&c(&[1]), 10));
        let h2 = h_truncated(2, 0, 10).unwrap();
        assert_eq!(h2.coeff(&[0, 0]).coeff(2), &rat(1, 2));
        assert!(matches!(h_truncated(5, 1, 10), Err(Error::Budget(_))));
        assert!(matches!(h_truncated(2, 11, 10), Err(Error::Budget(_))));
        assert!(matches!(GshEngine::new(500), Err(Error::Budget(_))));
    }

    #[test]
    fn routes_agree_small() {
        let order = 12;
        let e = GshEngine::new(order).unwrap();
        for r in 1..=3usize {
            let d = 3u32;
            let sub = g_sh_by_substitution(r, d, order).unwrap();
            let primed = g_sh_by_primed_blocks(r, d, order).unwrap();
            assert_eq!(sub, primed, "r = {r}");
            for w in r as u32..=r as u32 + d {
                for comp in Composition::all_of_weight(w, 1).into_iter().filter(|x| x.depth() == r) {
                    assert_eq!(monomial_of(&sub, &comp).unwrap(), e.g_tilde_sh(&comp).unwrap(), "{comp}");
                }
            }
        }
    }

    #[test]
    fn display() {
        let s = QSeries::from_coeffs(vec![int(0), int(1), rat(-1, 2)]).unwrap();
        assert_eq!(s.to_string(), "q - 1/2q^2 + O(q^3)");
    }
}
