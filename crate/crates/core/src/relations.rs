//! Restricted double shuffle relations, relation counts, q-dimension
//! tables and verification helpers.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::eisenstein::{mes_sh, mes_sh_lin, numeric_eval, MzvQTensor};
use crate::error::{Error, Result};
use crate::linalg::RationalMatrix;
use crate::qseries::{Budget, GshEngine};
use crate::words::{harmonic, shuffle_compositions, Composition, LinComb, Rational};

/// `sum a_w G̃^sh_w = 0` for `a = (w1 * w2) - (w1 ⧢ w2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationVector {
    pub weight: u32,
    pub coeffs: LinComb<Composition>,
    pub source: (Composition, Composition),
}

pub fn double_shuffle_relation(w1: &Composition, w2: &Composition) -> Result<RelationVector> {
    for w in [w1, w2] {
        if !w.all_parts_at_least(2) {
            return Err(Error::InvalidComposition(format!("{w}: relation generators need parts >= 2")));
        }
    }
    let coeffs = &harmonic(w1, w2) - &shuffle_compositions(w1, w2);
    Ok(RelationVector { weight: w1.weight() + w2.weight(), coeffs, source: (w1.clone(), w2.clone()) })
}

/// Every relation with `wt(w1) + wt(w2) = n` and both words nonempty.
pub fn relations_of_weight(n: u32) -> Vec<RelationVector> {
    let mut out = Vec::new();
    for a in 2..=n.saturating_sub(2) {
        for w1 in Composition::all_of_weight(a, 2) {
            for w2 in Composition::all_of_weight(n - a, 2) {
                out.push(double_shuffle_relation(&w1, &w2).expect("parts >= 2"));
            }
        }
    }
    out
}

/// Matrix of relation vectors in the basis of compositions of weight `n`.
pub fn relation_matrix(relations: &[RelationVector], n: u32) -> RationalMatrix {
    let basis = Composition::all_of_weight(n, 1);
    let index: BTreeMap<&Composition, usize> = basis.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut m = RationalMatrix::new(basis.len());
    for r in relations {
        let mut row = vec![Rational::default(); basis.len()];
        for (c, a) in r.coeffs.iter() {
            row[index[c]] = a.clone();
        }
        m.push_row(row).expect("row length matches basis");
    }
    m
}

/// Number of linearly independent relations for each weight `0..=n_max`.
pub fn relation_count_table(n_max: u32) -> Result<Vec<usize>> {
    if n_max > 12 {
        return Err(Error::Budget(format!("weight {n_max} exceeds 12")));
    }
    Ok((0..=n_max)
        .into_par_iter()
        .map(|n| relation_matrix(&relations_of_weight(n), n).rank())
        .collect())
}

/// Row per-weight of the dimension table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionRow {
    pub weight: u32,
    pub rank_through_weight: usize,
    pub dimension: usize,
}

/// `dim Q^(N) / Q^(N-1)` for `N = 2..=n_max`, using q-coefficients
/// `1..=order`; fails unless every rank agrees with the rank at
/// `order - 10`.
pub fn q_dimension_table(n_max: u32, order: usize) -> Result<Vec<DimensionRow>> {
    if order <= 10 {
        return Err(Error::InvalidArgument("order must exceed 10".into()));
    }
    let budget = Budget { max_weight: 12, ..Budget::default() };
    let engine = GshEngine::with_budget(order, budget)?;
    let mut series: Vec<(u32, Vec<Rational>)> = Vec::new();
    let indices: Vec<Composition> =
        (2..=n_max).flat_map(Composition::admissible_of_weight).collect();
    let computed: Vec<Result<(u32, Vec<Rational>)>> = indices
        .par_iter()
        .map(|c| Ok((c.weight(), engine.g_tilde_sh(c)?.coeffs()[1..].to_vec())))
        .collect();
    for s in computed {
        series.push(s?);
    }
    let rank_at = |n: u32, cols: usize| -> usize {
        let rows: Vec<Vec<Rational>> =
            series.iter().filter(|(w, _)| *w <= n).map(|(_, s)| s[..cols].to_vec()).collect();
        RationalMatrix::from_rows(cols, rows).expect("uniform rows").rank()
    };
    let mut out = Vec::new();
    let mut prev = 0usize;
    for n in 2..=n_max {
        let full = rank_at(n, order);
        let reduced = rank_at(n, order - 10);
        if full != reduced {
            return Err(Error::NotStabilized(format!(
                "weight {n}: rank {full} at order {order} but {reduced} at order {}",
                order - 10
            )));
        }
        out.push(DimensionRow { weight: n, rank_through_weight: full, dimension: full - prev });
        prev = full;
    }
    Ok(out)
}

/// Result of checking a relation.
#[derive(Clone, Debug, PartialEq)]
pub enum Verification {
    /// Vanishes identically using exact zeta values.
    ExactVerified,
    /// Vanishes within tolerance relative to the size of the cancelling terms.
    NumericallyVerified { max_deviation: f64 },
    Failed { max_deviation: f64 },
}

impl Verification {
    pub fn passed(&self) -> bool {
        !matches!(self, Verification::Failed { .. })
    }
}

/// Checks `sum a_w G̃^sh_w = 0` through `q^order`.
pub fn verify_relation_exact(v: &RelationVector, order: usize, tol: f64) -> Result<Verification> {
    let engine = GshEngine::new(order)?;
    let t = mes_sh_lin(&v.coeffs, &engine)?;
    verify_tensor_vanishes(&t, tol)
}

/// Exact when every zeta symbol has a known rational value, numeric otherwise.
pub fn verify_tensor_vanishes(t: &MzvQTensor, tol: f64) -> Result<Verification> {
    if let Some(exact) = t.exact_value() {
        return Ok(if exact.is_zero() {
            Verification::ExactVerified
        } else {
            Verification::Failed { max_deviation: f64::INFINITY }
        });
    }
    let ns = numeric_eval(t, 1e-12)?;
    let dev = ns.max_relative();
    Ok(if dev <= tol {
        Verification::NumericallyVerified { max_deviation: dev }
    } else {
        Verification::Failed { max_deviation: dev }
    })
}

/// Both sides of `d G̃^sh_N = 2N (G̃^sh_{N+2} - sum_{i=1}^{N} G̃^sh_{i,N+2-i})`.
pub fn derivative_sides(n: u32, order: usize) -> Result<(MzvQTensor, MzvQTensor)> {
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    let engine = GshEngine::new(order)?;
    let lhs = mes_sh(&Composition::new(vec![n])?, &engine)?.map_series(|s| s.q_derivative());
    let mut combo = LinComb::basis(Composition::new(vec![n + 2])?);
    for i in 1..=n {
        combo.add_term(Composition::new(vec![i, n + 2 - i])?, -Rational::from_integer((1).into()));
    }
    let rhs = mes_sh_lin(&combo.scaled(&Rational::from_integer((2 * n).into())), &engine)?;
    Ok((lhs, rhs))
}

/// Largest coefficient deviation between the two sides, evaluated numerically.
pub fn derivative_deviation(n: u32, order: usize) -> Result<f64> {
    let (lhs, rhs) = derivative_sides(n, order)?;
    let mut diff = lhs;
    diff.add_scaled(&rhs, &-Rational::from_integer(1.into()));
    Ok(numeric_eval(&diff, 1e-13)?.max_abs())
}

pub fn verify_derivative_formula(n: u32, order: usize, tol: f64) -> Result<bool> {
    Ok(derivative_deviation(n, order)? <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::int;

    fn c(parts: &[u32]) -> Composition {
        Composition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn relation_examples() {
        let r = double_shuffle_relation(&c(&[2]), &c(&[2])).unwrap();
        assert_eq!(r.coeffs, LinComb::from_terms([(c(&[4]), int(1)), (c(&[1, 3]), int(-4))]));
        let r = double_shuffle_relation(&c(&[2]), &c(&[3])).unwrap();
        assert_eq!(
            r.coeffs,
            LinComb::from_terms([(c(&[5]), int(1)), (c(&[2, 3]), int(-2)), (c(&[1, 4]), int(-6))])
        );
        let s = double_shuffle_relation(&c(&[3]), &c(&[2])).unwrap();
        assert_eq!(r.coeffs, s.coeffs);
        assert!(double_shuffle_relation(&c(&[1]), &c(&[2])).is_err());
    }

    #[test]
    fn small_counts() {
        assert_eq!(relation_count_table(7).unwrap(), vec![0, 0, 0, 0, 1, 1, 3, 5]);
    }

    #[test]
    fn eq46_verified() {
        let r = double_shuffle_relation(&c(&[2]), &c(&[2])).unwrap();
        assert_eq!(verify_relation_exact(&r, 30, 1e-9).unwrap(), Verification::ExactVerified);
        let zero = RelationVector { weight: 4, coeffs: LinComb::zero(), source: (c(&[2]), c(&[2])) };
        assert_eq!(verify_relation_exact(&zero, 10, 1e-9).unwrap(), Verification::ExactVerified);
        let r5 = double_shuffle_relation(&c(&[2]), &c(&[3])).unwrap();
        assert!(matches!(verify_relation_exact(&r5, 30, 1e-9).unwrap(), Verification::NumericallyVerified { .. }));
    }

    #[test]
    fn derivative_small() {
        assert!(verify_derivative_formula(1, 15, 1e-8).unwrap());
        assert!(verify_derivative_formula(2, 15, 1e-8).unwrap());
    }
}
