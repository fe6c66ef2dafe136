//! Exact integer matrices: Hermite and Smith normal forms, kernels, lattices.

use crate::error::{Error, Result};
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_fn(rows.len(), cols, |i, j| BigInt::from(rows[i][j]))
    }

    pub fn from_columns_i64(dim: usize, cols: &[Vec<i64>]) -> Self {
        Self::from_fn(dim, cols.len(), |i, j| BigInt::from(cols[j][i]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in integer mul");
        Self::from_fn(self.rows, other.cols, |i, j| (0..self.cols).map(|k| &self[(i, k)] * &other[(k, j)]).sum())
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn column_i64(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)].to_i64().expect("entry fits in i64")).collect()
    }

    pub fn row_i64(&self, i: usize) -> Vec<i64> {
        (0..self.cols).map(|j| self[(i, j)].to_i64().expect("entry fits in i64")).collect()
    }

    pub fn to_i64_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row_i64(i)).collect()
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else { return BigInt::zero() };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs().is_one()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row dst += k * row src`
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * k;
            self[(dst, j)] += v;
        }
    }

    /// `col dst += k * col src`
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * k;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -self[(r, j)].clone();
            self[(r, j)] = v;
        }
    }

    fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            let v = -self[(i, c)].clone();
            self[(i, c)] = v;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// Column Hermite normal form: `H = M U` with `U` unimodular, `H` lower
/// echelon, positive pivots and entries left of each pivot reduced into
/// `[0, pivot)`. Zero columns of `H` come last.
pub fn hermite_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (rows, n) = (m.rows, m.cols);
    let mut h = m.clone();
    let mut u = IntMatrix::identity(n);
    let mut c = 0;
    for i in 0..rows {
        if c == n {
            break;
        }
        while let Some(jmin) = (c..n).filter(|&j| !h[(i, j)].is_zero()).min_by(|&a, &b| h[(i, a)].abs().cmp(&h[(i, b)].abs())) {
            h.swap_cols(c, jmin);
            u.swap_cols(c, jmin);
            let mut done = true;
            for j in c + 1..n {
                if h[(i, j)].is_zero() {
                    continue;
                }
                let q = -h[(i, j)].div_floor(&h[(i, c)]);
                h.add_col(j, c, &q);
                u.add_col(j, c, &q);
                done &= h[(i, j)].is_zero();
            }
            if done {
                break;
            }
        }
        if h[(i, c)].is_zero() {
            continue;
        }
        if h[(i, c)].is_negative() {
            h.negate_col(c);
            u.negate_col(c);
        }
        for j in 0..c {
            let q = -h[(i, j)].div_floor(&h[(i, c)]);
            if !q.is_zero() {
                h.add_col(j, c, &q);
                u.add_col(j, c, &q);
            }
        }
        c += 1;
    }
    (h, u)
}

/// Smith normal form `D = P M Q`.
pub struct Smith {
    pub d: IntMatrix,
    pub p: IntMatrix,
    pub p_inv: IntMatrix,
    pub q: IntMatrix,
}

impl Smith {
    /// Diagonal entries, each dividing the next; trailing zeros included.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d[(i, i)].clone()).collect()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut p = IntMatrix::identity(rows);
    let mut p_inv = IntMatrix::identity(rows);
    let mut q = IntMatrix::identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !d[(i, j)].is_zero() && best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return Smith { d, p, p_inv, q };
            };
            if bi != t {
                d.swap_rows(t, bi);
                p.swap_rows(t, bi);
                p_inv.swap_cols(t, bi);
            }
            if bj != t {
                d.swap_cols(t, bj);
                q.swap_cols(t, bj);
            }
            let mut clean = true;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let k = d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row(i, t, &-&k);
                p.add_row(i, t, &-&k);
                p_inv.add_col(t, i, &k);
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let k = -d[(t, j)].div_floor(&d[(t, t)]);
                d.add_col(j, t, &k);
                q.add_col(j, t, &k);
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let pivot = d[(t, t)].clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&pivot)));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row(t, i, &one);
                    p.add_row(t, i, &one);
                    p_inv.add_col(i, t, &-one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            p.negate_row(t);
            p_inv.negate_col(t);
        }
    }
    Smith { d, p, p_inv, q }
}

/// Basis (as columns) of the integer kernel `{x in Z^n : M x = 0}`.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let (h, u) = hermite_normal_form(m);
    let pivots = (0..h.cols).filter(|&j| (0..h.rows).any(|i| !h[(i, j)].is_zero())).count();
    u.select_columns(&(pivots..m.cols).collect::<Vec<_>>())
}

/// Sublattice of `Z^dim` held in column Hermite form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntLattice {
    basis: IntMatrix,
}

impl IntLattice {
    pub fn from_generators(dim: usize, gens: &IntMatrix) -> Self {
        assert_eq!(gens.rows, dim, "generator length");
        let (h, _) = hermite_normal_form(gens);
        let nonzero: Vec<usize> = (0..h.cols).filter(|&j| (0..h.rows).any(|i| !h[(i, j)].is_zero())).collect();
        IntLattice { basis: h.select_columns(&nonzero) }
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<i64>> {
        (0..self.basis.cols).map(|j| self.basis.column_i64(j)).collect()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn rank(&self) -> usize {
        self.basis.cols
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.dim()
    }

    /// Index in `Z^dim`; `None` unless full rank.
    pub fn index(&self) -> Option<BigInt> {
        self.is_full_rank().then(|| (0..self.dim()).map(|i| self.basis[(i, i)].clone()).product())
    }

    /// Coset representatives of `Z^dim / L` (full-rank lattices only): the box
    /// bounded by the Hermite pivots, in lexicographic order.
    pub fn coset_representatives(&self) -> Result<Vec<Vec<i64>>> {
        if !self.is_full_rank() {
            return Err(Error::InvalidInput("coset representatives of a lattice of deficient rank".into()));
        }
        let bounds: Vec<i64> = (0..self.dim()).map(|i| self.basis[(i, i)].to_i64().expect("pivot fits")).collect();
        let mut reps = vec![Vec::new()];
        for &b in &bounds {
            reps = reps
                .into_iter()
                .flat_map(|r: Vec<i64>| {
                    (0..b).map(move |x| {
                        let mut r = r.clone();
                        r.push(x);
                        r
                    })
                })
                .collect();
        }
        Ok(reps)
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.residual_outside_pivots(v)
    }

    fn residual_outside_pivots(&self, v: &[i64]) -> bool {
        // a vector lies in the lattice iff forward substitution stays integral and exhausts it
        let mut rest: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        let mut col = 0;
        for i in 0..self.dim() {
            if col < self.rank() && !self.basis[(i, col)].is_zero() {
                let (k, r) = rest[i].div_mod_floor(&self.basis[(i, col)]);
                if !r.is_zero() {
                    return false;
                }
                for (t, x) in rest.iter_mut().enumerate() {
                    *x -= &k * &self.basis[(t, col)];
                }
                col += 1;
            } else if !rest[i].is_zero() {
                return false;
            }
        }
        true
    }

    /// Canonical representative of `v + L` (full-rank lattices): reduced into the pivot box.
    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        if !self.is_full_rank() {
            return v.to_vec();
        }
        let mut rest: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        for i in 0..self.dim() {
            let k = rest[i].div_floor(&self.basis[(i, i)]);
            for (t, x) in rest.iter_mut().enumerate() {
                *x -= &k * &self.basis[(t, i)];
            }
        }
        rest.iter().map(|x| x.to_i64().expect("reduced entry fits")).collect()
    }
}
