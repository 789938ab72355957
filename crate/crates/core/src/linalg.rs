//! Exact Gaussian elimination over a [`Field`].

use alloc::vec::Vec;

use crate::field::Field;

/// Reduced row echelon form of a matrix, with the pivot column of each
/// nonzero row.
#[derive(Clone, Debug)]
pub struct Echelon<E> {
    pub rows: Vec<Vec<E>>,
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

impl<E> Echelon<E> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Row reduces `rows` (each of length `ncols`) to reduced echelon form.
/// Pivots are chosen left to right, first nonzero row from the top.
pub fn rref<F: Field>(field: &F, mut rows: Vec<Vec<F::Elem>>, ncols: usize) -> Echelon<F::Elem> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(found) = (r..rows.len()).find(|&i| !field.is_zero(&rows[i][col])) else {
            continue;
        };
        rows.swap(r, found);
        let inv = field.inv(&rows[r][col]).expect("pivot is nonzero");
        for x in rows[r][col..].iter_mut() {
            *x = field.mul(x, &inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || field.is_zero(&row[col]) {
                continue;
            }
            let factor = row[col].clone();
            for (x, y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x = field.sub(x, &field.mul(&factor, y));
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    Echelon { rows, pivots, ncols }
}

pub fn rank<F: Field>(field: &F, rows: Vec<Vec<F::Elem>>, ncols: usize) -> usize {
    rref(field, rows, ncols).rank()
}

/// Basis of `{x : A x = 0}` read off the reduced echelon form: one vector per
/// free column, with a one in that column.
pub fn kernel_basis<F: Field>(field: &F, ech: &Echelon<F::Elem>) -> Vec<Vec<F::Elem>> {
    let mut is_pivot = alloc::vec![false; ech.ncols];
    for &p in &ech.pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ech.ncols).filter(|&c| !is_pivot[c]) {
        let mut v = alloc::vec![field.zero(); ech.ncols];
        v[free] = field.one();
        for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
            v[p] = field.neg(&row[free]);
        }
        basis.push(v);
    }
    basis
}

/// Reduced echelon form of the span of `vectors`, used to compare subspaces.
pub fn span_rref<F: Field>(field: &F, vectors: Vec<Vec<F::Elem>>, ncols: usize) -> Vec<Vec<F::Elem>> {
    rref(field, vectors, ncols).rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use num_rational::BigRational;

    fn q(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| Rationals.from_i64(x)).collect())
            .collect()
    }

    #[test]
    fn kernel_of_panel_matrix() {
        // two panels sharing chamber 0, three chambers each
        let a = q(&[&[1, 1, 1, 0, 0], &[1, 0, 0, 1, 1]]);
        let ech = rref(&Rationals, a.clone(), 5);
        assert_eq!(ech.rank(), 2);
        let ker = kernel_basis(&Rationals, &ech);
        assert_eq!(ker.len(), 3);
        for v in &ker {
            for row in &a {
                let dot = row
                    .iter()
                    .zip(v)
                    .fold(Rationals.zero(), |acc, (x, y)| acc + x * y);
                assert_eq!(dot, Rationals.zero());
            }
        }
    }

    #[test]
    fn rank_depends_on_characteristic() {
        let f2 = PrimeField::new(2).unwrap();
        let rows = || [[1i64, 1], [1, -1]];
        let over_q = rank(&Rationals, rows().iter().map(|r| r.iter().map(|&x| Rationals.from_i64(x)).collect()).collect(), 2);
        let over_f2 = rank(&f2, rows().iter().map(|r| r.iter().map(|&x| f2.from_i64(x)).collect()).collect(), 2);
        assert_eq!(over_q, 2);
        assert_eq!(over_f2, 1);
    }

    #[test]
    fn zero_matrix_has_full_kernel() {
        let ech = rref(&Rationals, q(&[&[0, 0, 0]]), 3);
        assert_eq!(ech.rank(), 0);
        assert_eq!(kernel_basis(&Rationals, &ech).len(), 3);
    }
}
