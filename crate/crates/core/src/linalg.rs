//! Exact rank over the rationals by fraction-free elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::words::Rational;

/// Dense rectangular matrix of rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    cols: usize,
    rows: Vec<Vec<Rational>>,
}

impl RationalMatrix {
    pub fn new(cols: usize) -> Self {
        RationalMatrix { cols, rows: Vec::new() }
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Result<Self> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidArgument("matrix rows must all have the same length".into()));
        }
        Ok(RationalMatrix { cols, rows })
    }

    pub fn push_row(&mut self, row: Vec<Rational>) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::InvalidArgument(format!("row has {} entries, expected {}", row.len(), self.cols)));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// Rank via Bareiss elimination on the integer matrix obtained by
    /// clearing each row's denominators.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<BigInt>> = self.rows.iter().map(|r| clear_denominators(r)).collect();
        bareiss_rank(&mut m, self.cols)
    }
}

fn clear_denominators(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
}

/// In-place fraction-free elimination; returns the rank.
pub fn bareiss_rank(m: &mut [Vec<BigInt>], cols: usize) -> usize {
    let nrows = m.len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        if rank == nrows {
            break;
        }
        // smallest nonzero pivot keeps entries short
        let pivot = (rank..nrows)
            .filter(|&i| !m[i][col].is_zero())
            .min_by(|&a, &b| m[a][col].abs().cmp(&m[b][col].abs()));
        let Some(p) = pivot else { continue };
        m.swap(rank, p);
        let (top, bottom) = m.split_at_mut(rank + 1);
        let prow = &top[rank];
        for row in bottom.iter_mut() {
            if row[col].is_zero() {
                for x in row.iter_mut().skip(col + 1) {
                    *x = &*x * &prow[col] / &prev;
                }
                continue;
            }
            let factor = row[col].clone();
            for j in col + 1..cols {
                row[j] = (&row[j] * &prow[col] - &factor * &prow[j]) / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = prow[col].clone();
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{int, rat};

    #[test]
    fn small_ranks() {
        let m = RationalMatrix::from_rows(
            3,
            vec![
                vec![int(1), int(2), int(3)],
                vec![int(2), int(4), int(6)],
                vec![int(0), rat(1, 2), int(1)],
            ],
        )
        .unwrap();
        assert_eq!(m.rank(), 2);
        assert_eq!(RationalMatrix::new(4).rank(), 0);
        let id = RationalMatrix::from_rows(2, vec![vec![int(0), int(1)], vec![int(1), int(0)]]).unwrap();
        assert_eq!(id.rank(), 2);
        assert!(RationalMatrix::from_rows(2, vec![vec![int(1)]]).is_err());
    }

    #[test]
    fn zero_pivot_column_skipped() {
        let m = RationalMatrix::from_rows(
            3,
            vec![vec![int(0), int(1), int(1)], vec![int(0), int(2), int(3)], vec![int(0), int(0), int(5)]],
        )
        .unwrap();
        assert_eq!(m.rank(), 2);
    }
}
