//! Independent oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use mes_core::hopf::{b_coefficient, tensor, TensorKey, TensorLinComb};
use mes_core::words::{binomial, shuffle_compositions, BinaryWord, Composition, LinComb, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};

pub fn comp(parts: &[u32]) -> Composition {
    Composition::new(parts.to_vec()).unwrap()
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shuffle by enumerating which output positions come from the first word.
pub fn brute_shuffle(w1: &BinaryWord, w2: &BinaryWord) -> LinComb<BinaryWord> {
    let a = w1.letters();
    let b = w2.letters();
    let n = a.len() + b.len();
    let mut out = LinComb::zero();
    for mask in 0u32..(1u32 << n) {
        if mask.count_ones() as usize != a.len() {
            continue;
        }
        let (mut i, mut j) = (0, 0);
        let mut letters = Vec::with_capacity(n);
        for p in 0..n {
            if mask & (1 << p) != 0 {
                letters.push(a[i]);
                i += 1;
            } else {
                letters.push(b[j]);
                j += 1;
            }
        }
        out.add_term(BinaryWord::new(letters).unwrap(), Rational::one());
    }
    out
}

/// `σ_c(n)` by enumerating increasing `u` and positive `v` with `sum u_i v_i = n`.
pub fn brute_sigma(c: &Composition, n: u64) -> BigInt {
    fn rec(parts: &[u32], min_u: u64, left: u64) -> BigInt {
        if parts.is_empty() {
            return if left == 0 { BigInt::one() } else { BigInt::zero() };
        }
        let mut total = BigInt::zero();
        let mut u = min_u;
        while u <= left {
            let mut v = 1;
            while u * v <= left {
                let w = BigInt::from(v).pow(parts[0] - 1);
                total += w * rec(&parts[1..], u + 1, left - u * v);
                v += 1;
            }
            u += 1;
        }
        total
    }
    rec(c.parts(), 1, n)
}

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Terms `coef * m^{-p} * (ln m)^j` of a smooth summand.
type Terms = Vec<(f64, f64, u32)>;

fn eval_terms(t: &Terms, m: f64) -> f64 {
    t.iter().map(|&(c, p, j)| c * m.powf(-p) * m.ln().powi(j as i32)).sum()
}

fn eval_terms_derivative(t: &Terms, m: f64) -> f64 {
    t.iter()
        .map(|&(c, p, j)| match j {
            0 => -c * p * m.powf(-p - 1.0),
            _ => c * m.powf(-p - 1.0) * (1.0 - p * m.ln()),
        })
        .sum()
}

fn integral_terms(t: &Terms, n: f64) -> f64 {
    t.iter()
        .map(|&(c, p, j)| match j {
            0 => c * n.powf(1.0 - p) / (p - 1.0),
            _ => c * n.powf(1.0 - p) * (n.ln() / (p - 1.0) + 1.0 / ((p - 1.0) * (p - 1.0))),
        })
        .sum()
}

/// `sum_{m > N} f(m)` by Euler-Maclaurin.
fn tail(t: &Terms, n: f64) -> f64 {
    integral_terms(t, n) - eval_terms(t, n) / 2.0 - eval_terms_derivative(t, n) / 12.0
}

/// `ζ(s)` and `ζ(a, b)` by direct nested summation with an Euler-Maclaurin tail.
pub fn zeta_nested(c: &Composition) -> f64 {
    const N: usize = 20_000;
    match c.parts() {
        [s] => {
            let s = *s as f64;
            let head: f64 = (1..=N).rev().map(|m| (m as f64).powf(-s)).sum();
            head + tail(&vec![(1.0, s, 0)], N as f64)
        }
        [a, b] => {
            let (a, b) = (*a as f64, *b as f64);
            let mut inner = 0.0;
            let mut head = 0.0;
            for m in 1..=N {
                let mf = m as f64;
                head += inner * mf.powf(-b);
                inner += mf.powf(-a);
            }
            // asymptotic expansion of sum_{k < m} k^{-a}
            let terms: Terms = if a == 1.0 {
                vec![(1.0, b, 1), (EULER_GAMMA, b, 0), (-0.5, b + 1.0, 0), (-1.0 / 12.0, b + 2.0, 0), (1.0 / 120.0, b + 4.0, 0)]
            } else {
                let za = zeta_nested(&comp(&[a as u32]));
                vec![
                    (za, b, 0),
                    (-1.0 / (a - 1.0), b + a - 1.0, 0),
                    (-0.5, b + a, 0),
                    (-a / 12.0, b + a + 1.0, 0),
                    (a * (a + 1.0) * (a + 2.0) / 720.0, b + a + 3.0, 0),
                ]
            };
            head + tail(&terms, N as f64)
        }
        _ => panic!("oracle covers depth 1 and 2 only"),
    }
}

/// `Δ(I(n1, n2))` from the depth-2 closed form.
pub fn depth_two_closed_form(n1: u32, n2: u32) -> TensorLinComb {
    let e = Composition::empty();
    let mut out = TensorLinComb::zero();
    out.add_term(TensorKey::new(comp(&[n1, n2]), e.clone()), Rational::one());
    out.add_term(TensorKey::new(e, comp(&[n1, n2])), Rational::one());
    let total = n1 + n2;
    for k1 in 1..total {
        let k2 = total - k1;
        let mut coef = b_coefficient(n1 as i64, n2 as i64, k1 as i64);
        if k1 == n1 {
            coef += Rational::one();
        }
        out.add_term(TensorKey::new(comp(&[k1]), comp(&[k2])), coef);
    }
    out
}

fn sign(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// `Δ(I(n1, n2, n3))` from the depth-3 display.
pub fn depth_three_closed_form(n1: u32, n2: u32, n3: u32) -> TensorLinComb {
    let e = Composition::empty();
    let b = |n: u32, np: u32, k: u32| b_coefficient(n as i64, np as i64, k as i64);
    let bin = |k: u32, n: u32| Rational::from_integer(binomial(k as i64 - 1, n as i64 - 1));
    let delta = |a: u32, c: u32| if a == c { Rational::one() } else { Rational::zero() };
    let (n1i, n2i, n3i) = (n1 as i64, n2 as i64, n3 as i64);
    let mut out = TensorLinComb::zero();
    out.add_term(TensorKey::new(comp(&[n1, n2, n3]), e.clone()), Rational::one());
    out.add_term(TensorKey::new(comp(&[n1, n2]), comp(&[n3])), Rational::one());
    out.add_term(TensorKey::new(comp(&[n1]), comp(&[n2, n3])), Rational::one());
    out.add_term(TensorKey::new(e, comp(&[n1, n2, n3])), Rational::one());
    let total = n1 + n2 + n3;
    for k1 in 1..total {
        for k2 in 1..total - k1 {
            let k3 = total - k1 - k2;
            let c1 = delta(n3, k3) * b(n1, n2, k1) + delta(n1, k2) * b(n2, n3, k1);
            out.add_term(TensorKey::new(comp(&[k1]), comp(&[k2, k3])), c1);

            let c2 = (int(sign(n1i + k3 as i64)) * bin(k2, n3) + int(sign(n1i + n2i)) * bin(k2, n1)) * bin(k1, n2);
            out.add_term(TensorKey::new(comp(&[k1, k2]), comp(&[k3])), c2);

            let c3 = int(sign(n1i + n3i + k2 as i64)) * bin(k1, n1) * bin(k2, n3) + delta(k1, n1) * b(n2, n3, k2);
            if !c3.is_zero() {
                let prod = shuffle_compositions(&comp(&[k1]), &comp(&[k2]));
                out += &tensor(&prod.scaled(&c3), &LinComb::basis(comp(&[k3])));
            }
        }
    }
    out
}
