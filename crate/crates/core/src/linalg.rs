//! Exact integer matrix algebra.
//!
//! Everything downstream (canonical group forms, kernels and cokernels of
//! K-theory morphisms, cone bookkeeping) reduces to the Smith normal form
//! computed here. All arithmetic is arbitrary precision; there is no modular
//! or floating-point fallback.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::groups::FGGroup;

/// Dense integer matrix, row-major, arbitrary-precision entries.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(
            entries.len(),
            rows * cols,
            "entry count {} does not match {}x{}",
            entries.len(),
            rows,
            cols
        );
        IntMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix::new(rows, cols, vec![BigInt::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = BigInt::one();
        }
        m
    }

    /// Square diagonal matrix with the given entries.
    pub fn diagonal(diag: &[BigInt]) -> Self {
        let n = diag.len();
        let mut m = IntMatrix::zero(n, n);
        for (i, d) in diag.iter().enumerate() {
            *m.at_mut(i, i) = d.clone();
        }
        m
    }

    /// Convenience constructor from machine integers.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let entries = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| BigInt::from(x)))
            .collect();
        IntMatrix::new(r, c, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut BigInt {
        &mut self.entries[r * self.cols + c]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *t.at_mut(c, r) = self.at(r, c).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let prod = a * other.at(k, c);
                    *out.at_mut(r, c) += prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in mul_vec");
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.at(r, c) * &v[c]).sum())
            .collect()
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    /// Horizontal concatenation [self | other].
    pub fn hcat(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows, "row mismatch in hcat");
        let mut out = IntMatrix::zero(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *out.at_mut(r, c) = self.at(r, c).clone();
            }
            for c in 0..other.cols {
                *out.at_mut(r, self.cols + c) = other.at(r, c).clone();
            }
        }
        out
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix::new(
            self.rows,
            self.cols,
            self.entries.iter().map(|e| -e).collect(),
        )
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[target] += q * row[source]
    fn add_row_multiple(&mut self, target: usize, source: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let add = q * self.at(source, c);
            *self.at_mut(target, c) += add;
        }
    }

    /// col[target] += q * col[source]
    fn add_col_multiple(&mut self, target: usize, source: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let add = q * self.at(r, source);
            *self.at_mut(r, target) += add;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.at(r, c);
            *self.at_mut(r, c) = v;
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(r, c))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Smith normal form with unimodular witnesses: `left * m * right` is the
/// diagonal matrix of `divisors`, the divisors are nonnegative and form a
/// divisibility chain with zeros trailing.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub divisors: Vec<BigUint>,
    pub left: IntMatrix,
    pub right: IntMatrix,
}

impl SmithForm {
    /// Number of nonzero divisors (the rank of the matrix).
    pub fn rank(&self) -> usize {
        self.divisors.iter().filter(|d| !d.is_zero()).count()
    }
}

/// Position of a nonzero entry of minimal absolute value in the submatrix
/// starting at (t, t); ties broken by row then column so runs reproduce.
fn select_pivot(m: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigUint, usize, usize)> = None;
    for r in t..m.rows() {
        for c in t..m.cols() {
            let v = m.at(r, c);
            if v.is_zero() {
                continue;
            }
            let mag = v.magnitude().clone();
            match &best {
                Some((bm, _, _)) if *bm <= mag => {}
                _ => best = Some((mag, r, c)),
            }
        }
    }
    best.map(|(_, r, c)| (r, c))
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let n = rows.min(cols);

    let mut t = 0;
    while t < n {
        let Some((pr, pc)) = select_pivot(&a, t) else {
            break;
        };
        a.swap_rows(t, pr);
        u.swap_rows(t, pr);
        a.swap_cols(t, pc);
        v.swap_cols(t, pc);

        loop {
            let mut dirty = false;
            // Clear column t with Euclidean steps; residues are strictly
            // smaller than the pivot, so re-pivoting below terminates.
            for r in t + 1..rows {
                if a.at(r, t).is_zero() {
                    continue;
                }
                let q = -(a.at(r, t) / a.at(t, t));
                a.add_row_multiple(r, t, &q);
                u.add_row_multiple(r, t, &q);
                if !a.at(r, t).is_zero() {
                    dirty = true;
                }
            }
            // Clear row t.
            for c in t + 1..cols {
                if a.at(t, c).is_zero() {
                    continue;
                }
                let q = -(a.at(t, c) / a.at(t, t));
                a.add_col_multiple(c, t, &q);
                v.add_col_multiple(c, t, &q);
                if !a.at(t, c).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                let (pr, pc) = select_pivot(&a, t).expect("pivot survives reduction");
                a.swap_rows(t, pr);
                u.swap_rows(t, pr);
                a.swap_cols(t, pc);
                v.swap_cols(t, pc);
                continue;
            }
            // Row and column are clear; enforce that the pivot divides the
            // rest of the submatrix (the invariant-factor chain condition).
            let mut offender = None;
            'scan: for r in t + 1..rows {
                for c in t + 1..cols {
                    if !a.at(r, c).mod_floor(a.at(t, t)).is_zero() {
                        offender = Some(r);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(r) => {
                    let one = BigInt::one();
                    a.add_row_multiple(t, r, &one);
                    u.add_row_multiple(t, r, &one);
                }
                None => break,
            }
        }

        if a.at(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }

    let divisors = (0..n).map(|i| a.at(i, i).magnitude().clone()).collect();
    SmithForm {
        divisors,
        left: u,
        right: v,
    }
}

/// Canonical form of the cokernel of `m: Z^cols -> Z^rows`.
pub fn cokernel_invariants(m: &IntMatrix) -> FGGroup {
    let snf = smith_normal_form(m);
    let rank = m.rows() - snf.rank();
    let factors = snf
        .divisors
        .into_iter()
        .filter(|d| *d >= BigUint::from(2u32))
        .collect();
    FGGroup::new(rank, factors)
}

/// Basis of the lattice `{x : m x = 0}`, returned as the columns of a
/// `cols x nullity` matrix. The columns of the right Smith witness that hit
/// zero divisors form a basis because the witness is unimodular.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    let nullity = m.cols() - rank;
    let mut basis = IntMatrix::zero(m.cols(), nullity);
    for (k, c) in (rank..m.cols()).enumerate() {
        for r in 0..m.cols() {
            *basis.at_mut(r, k) = snf.right.at(r, c).clone();
        }
    }
    basis
}

/// Solve `m x = b` over the integers, if a solution exists.
pub fn solve(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(b.len(), m.rows(), "rhs length mismatch");
    let snf = smith_normal_form(m);
    let ub = snf.left.mul_vec(b);
    let n = m.rows().min(m.cols());
    let mut y = vec![BigInt::zero(); m.cols()];
    for (i, target) in ub.iter().enumerate() {
        if i < n && !snf.divisors[i].is_zero() {
            let d = BigInt::from(snf.divisors[i].clone());
            let (q, r) = target.div_rem(&d);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !target.is_zero() {
            return None;
        }
    }
    Some(snf.right.mul_vec(&y))
}

/// Whether `b` lies in the integer column span of `m`.
pub fn in_column_span(m: &IntMatrix, b: &[BigInt]) -> bool {
    solve(m, b).is_some()
}
