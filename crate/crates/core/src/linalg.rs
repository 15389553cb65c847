//! Exact linear algebra over the rationals.
//!
//! The symmetry solver produces large, very sparse homogeneous systems, so
//! rows are stored sparsely and reduced incrementally into echelon form.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::expr::Rational;

/// Sorted `(column, value)` pairs with nonzero values.
pub type SparseRow = Vec<(usize, Rational)>;

/// Incrementally built row-echelon form. Each stored row has a leading 1 in
/// its pivot column and no entries in columns that were pivots when it was
/// inserted.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    ncols: usize,
    rows: BTreeMap<usize, SparseRow>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            rows: BTreeMap::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Eliminates every pivot column from `row`.
    pub fn reduce(&self, row: SparseRow) -> SparseRow {
        let mut work: BTreeMap<usize, Rational> = row.into_iter().collect();
        let mut out = Vec::new();
        while let Some((c, v)) = work.pop_first() {
            match self.rows.get(&c) {
                Some(pivot) => {
                    for (cc, pv) in pivot.iter().skip(1) {
                        let e = work.entry(*cc).or_insert_with(Rational::zero);
                        *e -= &v * pv;
                        if e.is_zero() {
                            work.remove(cc);
                        }
                    }
                }
                None => out.push((c, v)),
            }
        }
        out
    }

    /// Adds a row; returns whether the rank increased.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        debug_assert!(row.iter().all(|(c, v)| *c < self.ncols && !v.is_zero()));
        let mut reduced = self.reduce(row);
        let Some((pivot, lead)) = reduced.first().cloned() else {
            return false;
        };
        if !lead.is_one() {
            let inv = lead.recip();
            for (_, v) in reduced.iter_mut() {
                *v *= &inv;
            }
        }
        self.rows.insert(pivot, reduced);
        true
    }

    /// Back-substitutes into reduced row-echelon form.
    pub fn into_rref(mut self) -> Rref {
        let pivots: Vec<usize> = self.rows.keys().rev().copied().collect();
        for p in pivots {
            let row = self.rows.remove(&p).expect("pivot row present");
            let mut it = row.into_iter();
            let lead = it.next().expect("pivot rows are nonempty");
            let mut tail = self.reduce(it.collect());
            tail.insert(0, lead);
            self.rows.insert(p, tail);
        }
        Rref {
            ncols: self.ncols,
            rows: self.rows,
        }
    }
}

/// Reduced row-echelon form.
#[derive(Clone, Debug)]
pub struct Rref {
    ncols: usize,
    rows: BTreeMap<usize, SparseRow>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.rows.contains_key(&col)
    }

    pub fn rows(&self) -> impl Iterator<Item = (usize, &SparseRow)> {
        self.rows.iter().map(|(p, r)| (*p, r))
    }

    /// One basis vector per free column: 1 at the free column, minus the
    /// pivot rows' entries at that column elsewhere.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let free: Vec<usize> = (0..self.ncols).filter(|c| !self.is_pivot(*c)).collect();
        let index: BTreeMap<usize, usize> = free.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let mut basis: Vec<Vec<Rational>> = free
            .iter()
            .map(|c| {
                let mut v = vec![Rational::zero(); self.ncols];
                v[*c] = Rational::one();
                v
            })
            .collect();
        for (p, row) in &self.rows {
            for (c, val) in row.iter().skip(1) {
                if let Some(i) = index.get(c) {
                    basis[*i][*p] = -val.clone();
                }
            }
        }
        basis
    }
}

/// Solves `Σ_j a[i][j]·c_j = b_i` for `n` unknowns given as sparse rows with
/// right-hand sides. Free unknowns are set to zero; `None` if inconsistent.
pub fn solve(n: usize, equations: impl IntoIterator<Item = (SparseRow, Rational)>) -> Option<Vec<Rational>> {
    let mut ech = Echelon::new(n + 1);
    for (mut row, rhs) in equations {
        if !rhs.is_zero() {
            row.push((n, rhs));
        }
        if row.is_empty() {
            continue;
        }
        ech.insert(row);
        if ech.rows.contains_key(&n) {
            return None;
        }
    }
    let rref = ech.into_rref();
    let mut x = vec![Rational::zero(); n];
    for (p, row) in rref.rows() {
        if let Some((c, v)) = row.last() {
            if *c == n {
                x[p] = v.clone();
            }
        }
    }
    Some(x)
}

pub fn sparse_from_dense(row: &[Rational]) -> SparseRow {
    row.iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(c, v)| (c, v.clone()))
        .collect()
}

/// Rank of a dense matrix given by rows.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut ech = Echelon::new(ncols);
    for r in rows {
        ech.insert(sparse_from_dense(r));
    }
    ech.rank()
}

/// Basis (in RREF) of the row space of a dense matrix.
pub fn row_space(rows: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut ech = Echelon::new(ncols);
    for r in rows {
        ech.insert(sparse_from_dense(r));
    }
    ech.into_rref()
        .rows()
        .map(|(_, r)| {
            let mut v = vec![Rational::zero(); ncols];
            for (c, x) in r {
                v[*c] = x.clone();
            }
            v
        })
        .collect()
}

pub type Mat3 = [[Rational; 3]; 3];

pub fn identity3() -> Mat3 {
    core::array::from_fn(|i| core::array::from_fn(|j| if i == j { Rational::one() } else { Rational::zero() }))
}

pub fn det3(m: &Mat3) -> Rational {
    &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
        - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}

/// Inverse by the adjugate; `None` when singular.
pub fn inv3(m: &Mat3) -> Option<Mat3> {
    let det = det3(m);
    if det.is_zero() {
        return None;
    }
    let cof = |r0: usize, r1: usize, c0: usize, c1: usize| &m[r0][c0] * &m[r1][c1] - &m[r0][c1] * &m[r1][c0];
    // adj[i][j] = cofactor C[j][i]
    let adj: Mat3 = [
        [cof(1, 2, 1, 2), -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
        [-cof(1, 2, 0, 2), cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
        [cof(1, 2, 0, 1), -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
    ];
    Some(core::array::from_fn(|i| core::array::from_fn(|j| &adj[i][j] / &det)))
}

pub fn mat3_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    core::array::from_fn(|i| {
        core::array::from_fn(|j| {
            (0..3).fold(Rational::zero(), |acc, k| acc + &a[i][k] * &b[k][j])
        })
    })
}

pub fn mat3_vec(a: &Mat3, v: &[Rational; 3]) -> [Rational; 3] {
    core::array::from_fn(|i| (0..3).fold(Rational::zero(), |acc, k| acc + &a[i][k] * &v[k]))
}
