use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactlin::field::{inverse_mod, Field};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Entries {
    Rational(Vec<BigRational>),
    Modular(Vec<u64>),
}

/// Dense matrix over a [`Field`], stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Entries,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        let entries = match field {
            Field::Rationals => Entries::Rational(vec![BigRational::zero(); rows * cols]),
            Field::Prime(_) => Entries::Modular(vec![0; rows * cols]),
        };
        Matrix {
            field,
            rows,
            cols,
            entries,
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set_integer(i, i, 1);
        }
        m
    }

    /// Builds a matrix from rational entries, reducing them into `field`.
    pub fn from_rationals(
        field: Field,
        rows: usize,
        cols: usize,
        values: Vec<BigRational>,
    ) -> Result<Matrix> {
        if values.len() != rows * cols {
            return Err(Error::Module(format!(
                "expected {} entries for a {rows}x{cols} matrix, found {}",
                rows * cols,
                values.len()
            )));
        }
        let entries = match field {
            Field::Rationals => Entries::Rational(values),
            Field::Prime(p) => Entries::Modular(
                values
                    .iter()
                    .map(|q| Field::reduce(p, q))
                    .collect::<Result<_>>()?,
            ),
        };
        Ok(Matrix {
            field,
            rows,
            cols,
            entries,
        })
    }

    pub fn from_integers(field: Field, rows: usize, cols: usize, values: &[i64]) -> Result<Matrix> {
        Matrix::from_rationals(
            field,
            rows,
            cols,
            values
                .iter()
                .map(|&v| BigRational::from_integer(BigInt::from(v)))
                .collect(),
        )
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    fn set_integer(&mut self, i: usize, j: usize, v: i64) {
        let k = i * self.cols + j;
        match &mut self.entries {
            Entries::Rational(e) => e[k] = BigRational::from_integer(BigInt::from(v)),
            Entries::Modular(e) => {
                let p = self.field.characteristic() as i64;
                e[k] = v.rem_euclid(p) as u64;
            }
        }
    }

    /// Entry `(i, j)` as text: a reduced fraction or a residue.
    pub fn entry_string(&self, i: usize, j: usize) -> String {
        let k = i * self.cols + j;
        match &self.entries {
            Entries::Rational(e) => e[k].to_string(),
            Entries::Modular(e) => e[k].to_string(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.entries {
            Entries::Rational(e) => e.iter().all(Zero::is_zero),
            Entries::Modular(e) => e.iter().all(|&x| x == 0),
        }
    }

    fn check_shape(&self, other: &Matrix, rows: usize, cols: usize) -> Result<()> {
        if self.field != other.field || other.rows != rows || other.cols != cols {
            return Err(Error::Module(format!(
                "shape or field mismatch: {}x{} over {} against {}x{} over {}",
                self.rows, self.cols, self.field, other.rows, other.cols, other.field
            )));
        }
        Ok(())
    }

    /// `self += k · other`, with `k` reduced into the field.
    pub fn add_scaled(&mut self, other: &Matrix, k: u64) -> Result<()> {
        self.check_shape(other, self.rows, self.cols)?;
        match (&mut self.entries, &other.entries) {
            (Entries::Rational(a), Entries::Rational(b)) => {
                let k = BigRational::from_integer(BigInt::from(k));
                for (x, y) in a.iter_mut().zip(b) {
                    *x += &k * y;
                }
            }
            (Entries::Modular(a), Entries::Modular(b)) => {
                let p = self.field.characteristic();
                let k = k % p;
                for (x, y) in a.iter_mut().zip(b) {
                    *x = (*x + k * y) % p;
                }
            }
            _ => unreachable!("fields agree"),
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        let mut m = self.clone();
        m.add_scaled(other, 1)?;
        Ok(m)
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field || self.cols != other.rows {
            return Err(Error::Module(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (n, m, l) = (self.rows, self.cols, other.cols);
        let entries = match (&self.entries, &other.entries) {
            (Entries::Rational(a), Entries::Rational(b)) => {
                let mut c = vec![BigRational::zero(); n * l];
                for i in 0..n {
                    for k in 0..m {
                        let x = &a[i * m + k];
                        if x.is_zero() {
                            continue;
                        }
                        for j in 0..l {
                            c[i * l + j] += x * &b[k * l + j];
                        }
                    }
                }
                Entries::Rational(c)
            }
            (Entries::Modular(a), Entries::Modular(b)) => {
                let p = self.field.characteristic();
                let mut c = vec![0u64; n * l];
                for i in 0..n {
                    for k in 0..m {
                        let x = a[i * m + k];
                        for j in 0..l {
                            c[i * l + j] = (c[i * l + j] + x * b[k * l + j]) % p;
                        }
                    }
                }
                Entries::Modular(c)
            }
            _ => unreachable!("fields agree"),
        };
        Ok(Matrix {
            field: self.field,
            rows: n,
            cols: l,
            entries,
        })
    }

    /// Places `blocks[i][j]` at block position `(i, j)`; all blocks must
    /// share one shape.
    pub fn assemble(field: Field, blocks: &[Vec<Matrix>], n: usize) -> Result<Matrix> {
        let m = blocks.len();
        let mut out = Matrix::zeros(field, m * n, m * n);
        let width = m * n;
        for (bi, row) in blocks.iter().enumerate() {
            for (bj, block) in row.iter().enumerate() {
                if block.field != field || block.rows != n || block.cols != n {
                    return Err(Error::Module(format!(
                        "block ({bi}, {bj}) is not {n}x{n} over {field}"
                    )));
                }
                for i in 0..n {
                    for j in 0..n {
                        let dst = (bi * n + i) * width + bj * n + j;
                        match (&mut out.entries, &block.entries) {
                            (Entries::Rational(o), Entries::Rational(b)) => {
                                o[dst] = b[i * n + j].clone()
                            }
                            (Entries::Modular(o), Entries::Modular(b)) => o[dst] = b[i * n + j],
                            _ => unreachable!("fields agree"),
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Exact rank: fraction-free elimination over the rationals, Gaussian
    /// elimination modulo `p` otherwise.
    pub fn rank(&self) -> usize {
        match &self.entries {
            Entries::Rational(e) => {
                let rows = (0..self.rows)
                    .map(|i| clear_denominators(&e[i * self.cols..(i + 1) * self.cols]))
                    .collect();
                bareiss_rank(rows, self.cols)
            }
            Entries::Modular(e) => {
                modular_rank(e.clone(), self.rows, self.cols, self.field.characteristic())
            }
        }
    }
}

/// Scales a row of rationals to integers; row scaling keeps the rank.
fn clear_denominators(row: &[BigRational]) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for q in row {
        l = l.lcm(q.denom());
    }
    row.iter().map(|q| q.numer() * (&l / q.denom())).collect()
}

/// Fraction-free row echelon reduction. Every intermediate entry is a minor
/// of the input, so each division by the previous pivot is exact.
pub fn bareiss_rank(mut a: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let n = a.len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if rank == n {
            break;
        }
        let Some(pivot) = (rank..n).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot);
        let (top, rest) = a.split_at_mut(rank + 1);
        let p = &top[rank];
        for row in rest.iter_mut() {
            let f = row[c].clone();
            for k in c + 1..cols {
                row[k] = (&p[c] * &row[k] - &f * &p[k]) / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = p[c].clone();
        rank += 1;
    }
    rank
}

fn modular_rank(mut a: Vec<u64>, rows: usize, cols: usize, p: u64) -> usize {
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| a[r * cols + c] != 0) else {
            continue;
        };
        if pivot != rank {
            for k in 0..cols {
                a.swap(pivot * cols + k, rank * cols + k);
            }
        }
        let inv = inverse_mod(a[rank * cols + c], p);
        for k in c..cols {
            a[rank * cols + k] = a[rank * cols + k] * inv % p;
        }
        for r in rank + 1..rows {
            let f = a[r * cols + c];
            if f == 0 {
                continue;
            }
            for k in c..cols {
                a[r * cols + k] = (a[r * cols + k] + (p - f) * a[rank * cols + k]) % p;
            }
        }
        rank += 1;
    }
    rank
}

/// `rank` as a free function.
pub fn rank(m: &Matrix) -> usize {
    m.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(rows: usize, cols: usize, v: &[i64]) -> Matrix {
        Matrix::from_integers(Field::Rationals, rows, cols, v).unwrap()
    }

    /// Plain Gauss–Jordan over fractions.
    fn naive_rank(rows: usize, cols: usize, v: &[i64]) -> usize {
        let mut a: Vec<Vec<BigRational>> = (0..rows)
            .map(|i| {
                (0..cols)
                    .map(|j| BigRational::from_integer(BigInt::from(v[i * cols + j])))
                    .collect()
            })
            .collect();
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            for r in 0..rows {
                if r != rank && !a[r][c].is_zero() {
                    let f = &a[r][c] / &a[rank][c];
                    for k in 0..cols {
                        let d = &f * &a[rank][k];
                        a[r][k] -= d;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::zeros(Field::Rationals, 3, 3).rank(), 0);
        assert_eq!(Matrix::identity(Field::Rationals, 4).rank(), 4);
        assert_eq!(Matrix::identity(Field::Prime(5), 4).rank(), 4);
        assert_eq!(q(2, 2, &[1, 2, 2, 4]).rank(), 1);
        let twos = Matrix::from_integers(Field::Prime(2), 2, 2, &[2, 0, 0, 2]).unwrap();
        assert!(twos.is_zero());
        assert_eq!(twos.rank(), 0);
        assert_eq!(q(2, 3, &[0, 0, 1, 0, 0, 2]).rank(), 1);
    }

    #[test]
    fn fractions_clear() {
        let m = Matrix::from_rationals(
            Field::Rationals,
            2,
            2,
            ["1/2", "1/3", "3", "2"]
                .iter()
                .map(|s| crate::exactlin::field::parse_rational(s).unwrap())
                .collect(),
        )
        .unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn assembly_and_products() {
        let a = q(1, 1, &[2]);
        let z = q(1, 1, &[0]);
        let m = Matrix::assemble(Field::Rationals, &[vec![a.clone(), z.clone()], vec![z, a]], 1).unwrap();
        assert_eq!(m.rank(), 2);
        let p = q(2, 2, &[1, 1, 0, 1]);
        assert_eq!(p.mul(&p).unwrap(), q(2, 2, &[1, 2, 0, 1]));
    }

    proptest! {
        #[test]
        fn bareiss_matches_naive(v in prop::collection::vec(-3i64..=3, 36)) {
            prop_assert_eq!(q(6, 6, &v).rank(), naive_rank(6, 6, &v));
        }

        #[test]
        fn low_rank_products_match_naive(
            a in prop::collection::vec(-4i64..=4, 12),
            b in prop::collection::vec(-4i64..=4, 12),
        ) {
            let m = q(6, 2, &a).mul(&q(2, 6, &b)).unwrap();
            let v: Vec<i64> = (0..36).map(|k| m.entry_string(k / 6, k % 6).parse().unwrap()).collect();
            prop_assert_eq!(m.rank(), naive_rank(6, 6, &v));
            prop_assert!(m.rank() <= 2);
        }

        #[test]
        fn rank_invariant_under_scaling_and_permutation(
            v in prop::collection::vec(-5i64..=5, 20),
            scale in prop::collection::vec(1i64..=7, 4),
            shift in 0usize..4,
        ) {
            let base = q(4, 5, &v).rank();
            let mut w = Vec::new();
            for i in 0..4 {
                let src = (i + shift) % 4;
                w.extend(v[src * 5..src * 5 + 5].iter().map(|x| x * scale[i]));
            }
            prop_assert_eq!(q(4, 5, &w).rank(), base);
        }
    }
}
