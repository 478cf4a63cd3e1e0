//! Exact integer-lattice linear algebra: Smith normal form, sublattices,
//! saturation, quotient lattices and unimodular basis completion.
//!
//! Everything here is computed over arbitrary-precision integers; there is
//! no floating point anywhere in this module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("vector has length {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("sublattice is not saturated (quotient has torsion)")]
    NotSaturated,
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("basis and complement do not form a unimodular matrix")]
    NotUnimodular,
}

/// Convenience constructor for integer vectors in tests and builders.
pub fn int_vec(entries: &[i64]) -> Vec<BigInt> {
    entries.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Dense matrix of arbitrary-precision integers, row-major.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            assert_eq!(r.len(), ncols, "ragged rows");
            data.extend(r);
        }
        IntMatrix {
            rows: nrows,
            cols: ncols,
            data,
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| int_vec(r)).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.at(i, j) + a * other.at(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn mul_row(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows, "dimension mismatch in mul_row");
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| &v[i] * self.at(i, j)).sum())
            .collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.at(i, j).clone());
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.at(i, j).is_zero()))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] -= q * row[src]
    fn row_sub(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.at(dst, j) - q * self.at(src, j);
            self.set(dst, j, v);
        }
    }

    /// row[dst] += q * row[src]
    fn row_add(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.at(dst, j) + q * self.at(src, j);
            self.set(dst, j, v);
        }
    }

    /// col[dst] -= q * col[src]
    fn col_sub(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.at(i, dst) - q * self.at(i, src);
            self.set(i, dst, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.at(i, j);
            self.set(i, j, v);
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = 1i64;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.at(k, k).is_zero() {
                match (k + 1..n).find(|&i| !m.at(i, k).is_zero()) {
                    Some(i) => {
                        m.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j)) / &prev;
                    m.set(i, j, v);
                }
                m.set(i, k, BigInt::zero());
            }
            prev = m.at(k, k).clone();
        }
        let d = m.at(n - 1, n - 1).clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    /// Rank over the rationals, by exact integer elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            // smallest-absolute-value pivot keeps intermediate entries modest
            let pivot = (rank..m.rows)
                .filter(|&i| !m.at(i, col).is_zero())
                .min_by_key(|&i| m.at(i, col).abs());
            let Some(p) = pivot else { continue };
            m.swap_rows(rank, p);
            for i in rank + 1..m.rows {
                if m.at(i, col).is_zero() {
                    continue;
                }
                let a = m.at(rank, col).clone();
                let b = m.at(i, col).clone();
                let g = a.gcd(&b);
                let (fa, fb) = (&a / &g, &b / &g);
                for j in col..m.cols {
                    let v = m.at(i, j) * &fa - m.at(rank, j) * &fb;
                    m.set(i, j, v);
                }
                // strip row content so entries stay small
                let content = m.row(i).iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
                if content > BigInt::one() {
                    for j in 0..m.cols {
                        let v = m.at(i, j) / &content;
                        m.set(i, j, v);
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Smith normal form `u * m * v = d` with `u`, `v` unimodular and `d`
/// diagonal, nonnegative, each entry dividing the next.
#[derive(Debug, Clone)]
pub struct SmithNormalForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl SmithNormalForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.at(i, i).clone())
            .collect()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithNormalForm {
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);

    let mut t = 0;
    while t < rows.min(cols) {
        // smallest-absolute-nonzero pivot in the remaining submatrix
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a.at(i, j).is_zero()
                    && pivot.is_none_or(|(pi, pj)| a.at(i, j).abs() < a.at(pi, pj).abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);
        v_inv.swap_rows(t, pj);

        'reduce: loop {
            // clear column t below the pivot
            for i in t + 1..rows {
                if a.at(i, t).is_zero() {
                    continue;
                }
                let q = a.at(i, t) / a.at(t, t);
                a.row_sub(i, t, &q);
                u.row_sub(i, t, &q);
                if !a.at(i, t).is_zero() {
                    // remainder is strictly smaller; promote it to pivot
                    a.swap_rows(t, i);
                    u.swap_rows(t, i);
                    continue 'reduce;
                }
            }
            // clear row t to the right of the pivot
            for j in t + 1..cols {
                if a.at(t, j).is_zero() {
                    continue;
                }
                let q = a.at(t, j) / a.at(t, t);
                a.col_sub(j, t, &q);
                v.col_sub(j, t, &q);
                v_inv.row_add(t, j, &q);
                if !a.at(t, j).is_zero() {
                    a.swap_cols(t, j);
                    v.swap_cols(t, j);
                    v_inv.swap_rows(t, j);
                    continue 'reduce;
                }
            }
            // force the divisibility chain: pivot must divide the rest
            for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(a.at(i, j) % a.at(t, t)).is_zero() {
                        a.row_add(t, i, &BigInt::one());
                        u.row_add(t, i, &BigInt::one());
                        continue 'reduce;
                    }
                }
            }
            break;
        }
        t += 1;
    }

    for i in 0..rows.min(cols) {
        if a.at(i, i).is_negative() {
            a.negate_row(i);
            u.negate_row(i);
        }
    }

    let rank = (0..rows.min(cols))
        .filter(|&i| !a.at(i, i).is_zero())
        .count();
    SmithNormalForm {
        u,
        d: a,
        v,
        v_inv,
        rank,
    }
}

/// A sublattice of `Z^n` carried by a list of linearly independent basis
/// vectors (rows).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Sublattice {
    ambient_rank: usize,
    basis: Vec<Vec<BigInt>>,
}

impl Sublattice {
    pub fn zero(ambient_rank: usize) -> Self {
        Sublattice {
            ambient_rank,
            basis: Vec::new(),
        }
    }

    /// Builds a sublattice from independent basis vectors.
    pub fn from_basis(ambient_rank: usize, basis: Vec<Vec<BigInt>>) -> Result<Self, LatticeError> {
        for b in &basis {
            if b.len() != ambient_rank {
                return Err(LatticeError::DimensionMismatch {
                    expected: ambient_rank,
                    got: b.len(),
                });
            }
        }
        if !basis.is_empty() {
            let m = IntMatrix::from_rows(basis.clone());
            if m.rank() != basis.len() {
                return Err(LatticeError::DependentBasis);
            }
        }
        Ok(Sublattice {
            ambient_rank,
            basis,
        })
    }

    /// Builds the Z-span of an arbitrary (possibly dependent) generating
    /// set, reduced to a basis via Smith normal form.
    pub fn from_generators(
        ambient_rank: usize,
        generators: Vec<Vec<BigInt>>,
    ) -> Result<Self, LatticeError> {
        for g in &generators {
            if g.len() != ambient_rank {
                return Err(LatticeError::DimensionMismatch {
                    expected: ambient_rank,
                    got: g.len(),
                });
            }
        }
        if generators.is_empty() {
            return Ok(Self::zero(ambient_rank));
        }
        let snf = smith_normal_form(&IntMatrix::from_rows(generators));
        // row span of the input = span of d_i * (i-th row of v_inv)
        let basis = (0..snf.rank)
            .map(|i| {
                let d = snf.d.at(i, i);
                snf.v_inv.row(i).iter().map(|x| x * d).collect()
            })
            .collect();
        Ok(Sublattice {
            ambient_rank,
            basis,
        })
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn basis_matrix(&self) -> IntMatrix {
        if self.basis.is_empty() {
            IntMatrix::zeros(0, self.ambient_rank)
        } else {
            IntMatrix::from_rows(self.basis.clone())
        }
    }

    /// The saturation `span_Q(self) ∩ Z^n`: smallest sublattice containing
    /// this one with torsion-free quotient.
    pub fn saturate(&self) -> Sublattice {
        if self.basis.is_empty() {
            return self.clone();
        }
        let snf = smith_normal_form(&self.basis_matrix());
        let basis = (0..snf.rank).map(|i| snf.v_inv.row(i).to_vec()).collect();
        Sublattice {
            ambient_rank: self.ambient_rank,
            basis,
        }
    }

    pub fn is_saturated(&self) -> bool {
        if self.basis.is_empty() {
            return true;
        }
        let snf = smith_normal_form(&self.basis_matrix());
        (0..snf.rank).all(|i| snf.d.at(i, i).is_one())
    }

    /// Integer coordinates of `v` in this basis, if `v` lies in the lattice.
    pub fn solve_coords(&self, v: &[BigInt]) -> Result<Option<Vec<BigInt>>, LatticeError> {
        if v.len() != self.ambient_rank {
            return Err(LatticeError::DimensionMismatch {
                expected: self.ambient_rank,
                got: v.len(),
            });
        }
        if self.basis.is_empty() {
            return Ok(if v.iter().all(|x| x.is_zero()) {
                Some(Vec::new())
            } else {
                None
            });
        }
        let snf = smith_normal_form(&self.basis_matrix());
        let w = snf.v.mul_row(v);
        let r = self.basis.len();
        let mut y = vec![BigInt::zero(); r];
        for (j, wj) in w.iter().enumerate() {
            if j < snf.rank {
                let d = snf.d.at(j, j);
                let (q, rem) = wj.div_rem(d);
                if !rem.is_zero() {
                    return Ok(None);
                }
                y[j] = q;
            } else if !wj.is_zero() {
                return Ok(None);
            }
        }
        Ok(Some(snf.u.mul_row(&y)))
    }

    /// Membership of `v` in the Z-span of the basis.
    pub fn contains(&self, v: &[BigInt]) -> Result<bool, LatticeError> {
        Ok(self.solve_coords(v)?.is_some())
    }

    /// Lattice equality, independent of the chosen bases.
    pub fn same_lattice(&self, other: &Sublattice) -> bool {
        self.ambient_rank == other.ambient_rank
            && self.rank() == other.rank()
            && other
                .basis
                .iter()
                .all(|v| self.contains(v).unwrap_or(false))
            && self
                .basis
                .iter()
                .all(|v| other.contains(v).unwrap_or(false))
    }

    /// Completes a saturated sublattice to a basis of the ambient lattice.
    /// The complement comes from the Smith transform of the basis matrix, so
    /// the output is deterministic.
    pub fn complete_basis(&self) -> Result<QuotientLattice, LatticeError> {
        let n = self.ambient_rank;
        if self.basis.is_empty() {
            let complement = IntMatrix::identity(n).row_vecs();
            return QuotientLattice::new(self.clone(), complement);
        }
        let snf = smith_normal_form(&self.basis_matrix());
        if (0..snf.rank).any(|i| !snf.d.at(i, i).is_one()) || snf.rank != self.basis.len() {
            return Err(LatticeError::NotSaturated);
        }
        let complement = (snf.rank..n).map(|i| snf.v_inv.row(i).to_vec()).collect();
        QuotientLattice::new(self.clone(), complement)
    }
}

/// A saturated sublattice together with a choice of complement, realizing
/// `Z^n = sub ⊕ complement` and hence the torsion-free quotient `Z^n / sub`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct QuotientLattice {
    sub: Sublattice,
    complement_basis: Vec<Vec<BigInt>>,
    // inverse of the stacked (sub ++ complement) matrix; rows of the stack
    // are a basis of Z^n, so the inverse is integral
    full_inverse: IntMatrix,
}

impl QuotientLattice {
    pub fn new(sub: Sublattice, complement_basis: Vec<Vec<BigInt>>) -> Result<Self, LatticeError> {
        let n = sub.ambient_rank();
        for c in &complement_basis {
            if c.len() != n {
                return Err(LatticeError::DimensionMismatch {
                    expected: n,
                    got: c.len(),
                });
            }
        }
        if sub.rank() + complement_basis.len() != n {
            return Err(LatticeError::NotUnimodular);
        }
        let mut rows = sub.basis().to_vec();
        rows.extend(complement_basis.iter().cloned());
        let full = if n == 0 {
            IntMatrix::zeros(0, 0)
        } else {
            IntMatrix::from_rows(rows)
        };
        let snf = smith_normal_form(&full);
        if snf.rank != n || (0..n).any(|i| !snf.d.at(i, i).is_one()) {
            return Err(LatticeError::NotUnimodular);
        }
        // u * full * v = 1  =>  full^{-1} = v * u
        let full_inverse = snf.v.mul(&snf.u);
        Ok(QuotientLattice {
            sub,
            complement_basis,
            full_inverse,
        })
    }

    pub fn ambient_rank(&self) -> usize {
        self.sub.ambient_rank()
    }

    pub fn sub(&self) -> &Sublattice {
        &self.sub
    }

    pub fn complement_basis(&self) -> &[Vec<BigInt>] {
        &self.complement_basis
    }

    /// Rank of the quotient `Z^n / sub`.
    pub fn rank(&self) -> usize {
        self.complement_basis.len()
    }

    /// Coordinates of `v` in the split basis: `(sub part, quotient part)`.
    pub fn coords(&self, v: &[BigInt]) -> Result<(Vec<BigInt>, Vec<BigInt>), LatticeError> {
        let n = self.ambient_rank();
        if v.len() != n {
            return Err(LatticeError::DimensionMismatch {
                expected: n,
                got: v.len(),
            });
        }
        let x = self.full_inverse.mul_row(v);
        let r = self.sub.rank();
        Ok((x[..r].to_vec(), x[r..].to_vec()))
    }

    /// Image of `v` in the quotient, in complement-basis coordinates.
    pub fn project(&self, v: &[BigInt]) -> Result<Vec<BigInt>, LatticeError> {
        Ok(self.coords(v)?.1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(m: &IntMatrix) {
        let snf = smith_normal_form(m);
        assert_eq!(snf.u.mul(m).mul(&snf.v), snf.d, "u*m*v != d");
        assert!(snf.d.is_diagonal());
        assert_eq!(snf.u.determinant().abs(), BigInt::one());
        assert_eq!(snf.v.determinant().abs(), BigInt::one());
        assert_eq!(
            snf.v.mul(&snf.v_inv),
            IntMatrix::identity(m.cols()),
            "v * v_inv != 1"
        );
        let diag = snf.diagonal();
        for i in 0..diag.len() {
            assert!(!diag[i].is_negative());
            if i + 1 < diag.len() && !diag[i + 1].is_zero() {
                assert!(!diag[i].is_zero(), "zero before nonzero on diagonal");
                assert!((&diag[i + 1] % &diag[i]).is_zero(), "divisibility chain");
            }
        }
    }

    #[test]
    fn snf_small_example() {
        let m = IntMatrix::from_i64(&[&[2, 4], &[6, 8]]);
        check_snf(&m);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.diagonal(), int_vec(&[2, 4]));
        // |det| is preserved: 2 * 4 = |2*8 - 4*6|
        assert_eq!(m.determinant().abs(), BigInt::from(8));
    }

    #[test]
    fn snf_identity_and_zero() {
        let id = IntMatrix::identity(3);
        let snf = smith_normal_form(&id);
        assert_eq!(snf.d, id);
        check_snf(&id);

        let z = IntMatrix::zeros(2, 2);
        let snf = smith_normal_form(&z);
        assert_eq!(snf.d, z);
        assert_eq!(snf.rank, 0);
        check_snf(&z);
    }

    #[test]
    fn snf_rectangular() {
        let m = IntMatrix::from_i64(&[&[2, 0], &[0, 3], &[4, 6]]);
        check_snf(&m);
        let m = IntMatrix::from_i64(&[&[6, 10, 15]]);
        check_snf(&m);
        assert_eq!(smith_normal_form(&m).diagonal(), int_vec(&[1]));
    }

    #[test]
    fn determinant_matches_diagonal_product() {
        let m = IntMatrix::from_i64(&[&[3, 1, -4], &[2, 5, 6], &[1, 4, 8]]);
        let snf = smith_normal_form(&m);
        let prod: BigInt = snf.diagonal().iter().product();
        assert_eq!(m.determinant().abs(), prod);
    }

    #[test]
    fn saturate_scaled_ray() {
        let s = Sublattice::from_basis(2, vec![int_vec(&[2, 0])]).unwrap();
        let sat = s.saturate();
        let expected = Sublattice::from_basis(2, vec![int_vec(&[1, 0])]).unwrap();
        assert!(sat.same_lattice(&expected));
    }

    #[test]
    fn saturate_already_saturated() {
        let s = Sublattice::from_basis(2, vec![int_vec(&[1, 0]), int_vec(&[0, 1])]).unwrap();
        assert!(s.saturate().same_lattice(&s));
        assert!(s.is_saturated());
    }

    #[test]
    fn saturate_full_rank_sublattice() {
        // (2,2) and (2,-2) are independent, so their rational span is all of
        // Q^2 and the saturation is the full lattice Z^2.
        let s = Sublattice::from_basis(2, vec![int_vec(&[2, 2]), int_vec(&[2, -2])]).unwrap();
        let sat = s.saturate();
        // brute-force oracle: every lattice point of small norm in the
        // rational span must lie in the saturation
        for x in -4i64..=4 {
            for y in -4i64..=4 {
                let v = int_vec(&[x, y]);
                assert!(sat.contains(&v).unwrap(), "({x},{y}) missing");
            }
        }
        assert!(sat.is_saturated());
        assert!(!s.contains(&int_vec(&[1, 1])).unwrap());
    }

    #[test]
    fn saturate_rank_deficient_plane() {
        // span{(2,2,0),(2,-2,0)} inside Z^3: saturation is the coordinate
        // plane lattice span{(1,1,0),(1,-1,0)} saturated = span{(1,0,0),(0,1,0)}
        let s = Sublattice::from_basis(3, vec![int_vec(&[2, 2, 0]), int_vec(&[2, -2, 0])]).unwrap();
        let sat = s.saturate();
        let expected =
            Sublattice::from_basis(3, vec![int_vec(&[1, 0, 0]), int_vec(&[0, 1, 0])]).unwrap();
        assert!(sat.same_lattice(&expected));
    }

    #[test]
    fn saturate_idempotent() {
        let s = Sublattice::from_basis(3, vec![int_vec(&[2, 4, 6]), int_vec(&[0, 10, 5])]).unwrap();
        let once = s.saturate();
        let twice = once.saturate();
        assert!(once.same_lattice(&twice));
    }

    #[test]
    fn membership_examples() {
        let s = Sublattice::from_basis(2, vec![int_vec(&[1, 0])]).unwrap();
        assert!(s.contains(&int_vec(&[2, 0])).unwrap());
        assert!(!s.contains(&int_vec(&[1, 1])).unwrap());

        let diag = Sublattice::from_basis(2, vec![int_vec(&[1, 1]), int_vec(&[1, -1])]).unwrap();
        assert!(diag.contains(&int_vec(&[3, 3])).unwrap());
        assert_eq!(
            diag.solve_coords(&int_vec(&[3, 3])).unwrap().map(|c| {
                let b = diag.basis_matrix();
                b.mul_row(&c)
            }),
            Some(int_vec(&[3, 3]))
        );
        assert!(!diag.contains(&int_vec(&[1, 0])).unwrap());

        assert!(matches!(
            s.contains(&int_vec(&[1, 2, 3])),
            Err(LatticeError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn complete_basis_examples() {
        let s = Sublattice::from_basis(2, vec![int_vec(&[1, 0])]).unwrap();
        let q = s.complete_basis().unwrap();
        assert_eq!(q.rank(), 1);
        let mut rows = q.sub().basis().to_vec();
        rows.extend(q.complement_basis().iter().cloned());
        assert_eq!(
            IntMatrix::from_rows(rows).determinant().abs(),
            BigInt::one()
        );

        let diag = Sublattice::from_basis(2, vec![int_vec(&[1, 1])]).unwrap();
        let q = diag.complete_basis().unwrap();
        let mut rows = q.sub().basis().to_vec();
        rows.extend(q.complement_basis().iter().cloned());
        assert_eq!(
            IntMatrix::from_rows(rows).determinant().abs(),
            BigInt::one()
        );

        let bad = Sublattice::from_basis(2, vec![int_vec(&[2, 0])]).unwrap();
        assert_eq!(
            bad.complete_basis().unwrap_err(),
            LatticeError::NotSaturated
        );
    }

    #[test]
    fn complete_basis_of_zero_lattice() {
        let s = Sublattice::zero(3);
        let q = s.complete_basis().unwrap();
        assert_eq!(q.rank(), 3);
        assert_eq!(
            q.project(&int_vec(&[5, -2, 7])).unwrap(),
            int_vec(&[5, -2, 7])
        );
    }

    #[test]
    fn quotient_coords_split() {
        let s = Sublattice::from_basis(2, vec![int_vec(&[1, 1])]).unwrap();
        let q = s.complete_basis().unwrap();
        let v = int_vec(&[3, 5]);
        let (a, b) = q.coords(&v).unwrap();
        // reassemble: a * sub + b * complement = v
        let mut acc = vec![BigInt::zero(); 2];
        for (coef, row) in a.iter().zip(q.sub().basis()) {
            for j in 0..2 {
                acc[j] += coef * &row[j];
            }
        }
        for (coef, row) in b.iter().zip(q.complement_basis()) {
            for j in 0..2 {
                acc[j] += coef * &row[j];
            }
        }
        assert_eq!(acc, v);
    }

    #[test]
    fn dependent_basis_rejected() {
        assert_eq!(
            Sublattice::from_basis(2, vec![int_vec(&[1, 1]), int_vec(&[2, 2])]).unwrap_err(),
            LatticeError::DependentBasis
        );
    }

    #[test]
    fn from_generators_reduces_to_span_basis() {
        let s = Sublattice::from_generators(
            2,
            vec![int_vec(&[2, 0]), int_vec(&[0, 2]), int_vec(&[2, 2])],
        )
        .unwrap();
        assert_eq!(s.rank(), 2);
        assert!(s.contains(&int_vec(&[2, 0])).unwrap());
        assert!(s.contains(&int_vec(&[0, 2])).unwrap());
        assert!(!s.contains(&int_vec(&[1, 1])).unwrap());
    }
}
