//! Dense matrices over the integers with the exact normal-form algorithms
//! that the rest of the crate is built on: Hermite and Smith normal forms
//! with unimodular transforms, left kernels, lattice membership and
//! intersection, and fraction-free determinants.
//!
//! Lattices are always row lattices: a matrix *is* the generating set of
//! the lattice spanned by its rows.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Soft ceiling on entry size, in bits. Exceeding it signals a fixture far
/// beyond desk scale rather than a recoverable condition.
const MAX_ENTRY_BITS: u64 = 1 << 20;

#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  [")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = BigInt;
    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        &mut self.data[r * self.cols + c]
    }
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn scalar(n: usize, s: &BigInt) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = s.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    /// A matrix with zero rows but a definite column count.
    pub fn empty(cols: usize) -> Self {
        Mat { rows: 0, cols, data: Vec::new() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vec(&self, r: usize) -> Vec<BigInt> {
        self.row(r).to_vec()
    }

    pub fn push_row(&mut self, row: Vec<BigInt>) {
        assert_eq!(row.len(), self.cols);
        self.data.extend(row);
        self.rows += 1;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = Mat::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let prod = a * &other[(k, c)];
                    out[(r, c)] += prod;
                }
            }
        }
        out
    }

    pub fn mul_row(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows, "dimension mismatch in mul_row");
        let mut out = vec![BigInt::zero(); self.cols];
        for (k, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for c in 0..self.cols {
                out[c] += a * &self[(k, c)];
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }

    pub fn stack(&self, below: &Mat) -> Mat {
        assert_eq!(self.cols, below.cols, "column mismatch in stack");
        let mut data = self.data.clone();
        data.extend(below.data.iter().cloned());
        Mat { rows: self.rows + below.rows, cols: self.cols, data }
    }

    /// Horizontal concatenation `[self | right]`.
    pub fn augment(&self, right: &Mat) -> Mat {
        assert_eq!(self.rows, right.rows, "row mismatch in augment");
        let mut out = Mat::zero(self.rows, self.cols + right.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(r, c)] = self[(r, c)].clone();
            }
            for c in 0..right.cols {
                out[(r, self.cols + c)] = right[(r, c)].clone();
            }
        }
        out
    }

    pub fn submatrix_cols(&self, from: usize, to: usize) -> Mat {
        let mut out = Mat::zero(self.rows, to - from);
        for r in 0..self.rows {
            for c in from..to {
                out[(r, c - from)] = self[(r, c)].clone();
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -&self[(r, c)];
            self[(r, c)] = v;
        }
    }

    /// row[dst] += q * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let add = q * &self[(src, c)];
            self[(dst, c)] += add;
        }
    }

    /// col[dst] += q * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let add = q * &self[(r, src)];
            self[(r, dst)] += add;
        }
    }

    fn check_scale(&self) -> Result<()> {
        for v in &self.data {
            if v.bits() > MAX_ENTRY_BITS {
                return Err(Error::InternalOverflow(format!(
                    "matrix entry exceeds {MAX_ENTRY_BITS} bits"
                )));
            }
        }
        Ok(())
    }

    /// Fraction-free (Bareiss) determinant of a square matrix.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !a[(r, k)].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[(k, k)] * &a[(i, j)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = &num / &prev;
                }
                a[(i, k)] = BigInt::zero();
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }
}

/// Row Hermite normal form `H = U * A` with `U` unimodular.
///
/// `H` is in row echelon form with pivot columns strictly increasing,
/// positive pivots, and entries above each pivot reduced into `[0, pivot)`.
/// Zero rows are collected at the bottom.
pub struct Hnf {
    pub h: Mat,
    pub u: Mat,
    /// `(row, col)` of each pivot, top to bottom.
    pub pivots: Vec<(usize, usize)>,
}

pub fn hnf(a: &Mat) -> Result<Hnf> {
    let mut h = a.clone();
    let mut u = Mat::identity(a.rows());
    let (m, n) = (a.rows(), a.cols());
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        // Clear column c below row r by gcd steps on rows.
        loop {
            h.check_scale()?;
            // Pick the row in r..m with minimal nonzero |entry| in column c.
            let mut best: Option<(usize, BigInt)> = None;
            for i in r..m {
                let v = h[(i, c)].abs();
                if v.is_zero() {
                    continue;
                }
                match &best {
                    Some((_, bv)) if *bv <= v => {}
                    _ => best = Some((i, v)),
                }
            }
            let Some((pivot_row, _)) = best else {
                break;
            };
            h.swap_rows(r, pivot_row);
            u.swap_rows(r, pivot_row);
            let mut done = true;
            for i in r + 1..m {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = -div_nearest(&h[(i, c)], &h[(r, c)]);
                h.add_row_multiple(i, r, &q);
                u.add_row_multiple(i, r, &q);
                if !h[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        // Reduce entries above the pivot into [0, pivot).
        for i in 0..r {
            let q = -h[(i, c)].div_floor(&h[(r, c)]);
            h.add_row_multiple(i, r, &q);
            u.add_row_multiple(i, r, &q);
        }
        r += 1;
    }
    let mut pivots = Vec::new();
    let mut col = 0;
    for row in 0..r {
        while col < n && h[(row, col)].is_zero() {
            col += 1;
        }
        debug_assert!(col < n);
        pivots.push((row, col));
    }
    Ok(Hnf { h, u, pivots })
}

/// The nonzero rows of the HNF of `a`: a canonical basis of the row lattice.
pub fn lattice_basis(a: &Mat) -> Result<Mat> {
    let hnf = hnf(a)?;
    let rank = hnf.pivots.len();
    let mut out = Mat::empty(a.cols());
    for r in 0..rank {
        out.push_row(hnf.h.row_vec(r));
    }
    Ok(out)
}

impl Hnf {
    /// Solve `y * H = b` for an integer row vector `y` supported on pivot rows.
    fn solve_row(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut rem = b.to_vec();
        let mut y = vec![BigInt::zero(); self.h.rows()];
        for &(row, col) in &self.pivots {
            if rem[col].is_zero() {
                continue;
            }
            let (q, r) = rem[col].div_rem(&self.h[(row, col)]);
            if !r.is_zero() {
                return None;
            }
            for c in 0..self.h.cols() {
                let sub = &q * &self.h[(row, c)];
                rem[c] -= sub;
            }
            y[row] = q;
        }
        if rem.iter().all(Zero::is_zero) {
            Some(y)
        } else {
            None
        }
    }
}

/// Does `v` lie in the row lattice of `a`?
pub fn lattice_contains(a: &Mat, v: &[BigInt]) -> Result<bool> {
    Ok(hnf(a)?.solve_row(v).is_some())
}

/// Solve `x * a = b` over the integers. Returns one solution if any exists.
pub fn solve_left(a: &Mat, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    let hnf = hnf(a)?;
    let Some(y) = hnf.solve_row(b) else {
        return Ok(None);
    };
    Ok(Some(hnf.u.mul_row(&y)))
}

/// Basis (HNF rows) of the left kernel `{ v : v * a = 0 }`.
pub fn left_kernel(a: &Mat) -> Result<Mat> {
    let hnf = hnf(a)?;
    let rank = hnf.pivots.len();
    let mut gens = Mat::empty(a.rows());
    for r in rank..a.rows() {
        gens.push_row(hnf.u.row_vec(r));
    }
    lattice_basis(&gens)
}

/// Basis of the sum of two row lattices.
pub fn lattice_sum(a: &Mat, b: &Mat) -> Result<Mat> {
    lattice_basis(&a.stack(b))
}

/// Basis of the intersection of two row lattices.
pub fn lattice_intersection(a: &Mat, b: &Mat) -> Result<Mat> {
    let n = a.cols();
    assert_eq!(n, b.cols());
    let stacked = a.stack(b);
    let ker = left_kernel(&stacked)?;
    // Rows (x, y) with x*a + y*b = 0; then x*a = -(y*b) lies in both lattices.
    let mut gens = Mat::empty(n);
    for r in 0..ker.rows() {
        let x = &ker.row(r)[..a.rows()];
        gens.push_row(a.mul_row(x));
    }
    lattice_basis(&gens)
}

/// Basis of the preimage lattice `{ v : v * m ∈ rowlat(p) }`.
pub fn preimage_lattice(m: &Mat, p: &Mat) -> Result<Mat> {
    assert_eq!(m.cols(), p.cols(), "target dimension mismatch");
    let stacked = m.stack(p);
    let ker = left_kernel(&stacked)?;
    let mut gens = Mat::empty(m.rows());
    for r in 0..ker.rows() {
        gens.push_row(ker.row(r)[..m.rows()].to_vec());
    }
    lattice_basis(&gens)
}

/// Are the two row lattices equal?
pub fn lattice_eq(a: &Mat, b: &Mat) -> Result<bool> {
    let ha = hnf(a)?;
    let hb = hnf(b)?;
    let ra = ha.pivots.len();
    let rb = hb.pivots.len();
    if ra != rb {
        return Ok(false);
    }
    for r in 0..ra {
        if ha.h.row(r) != hb.h.row(r) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Is the row lattice of `a` contained in the row lattice of `b`?
pub fn lattice_subset(a: &Mat, b: &Mat) -> Result<bool> {
    let hb = hnf(b)?;
    for r in 0..a.rows() {
        if hb.solve_row(a.row(r)).is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Smith normal form `D = U * A * V` with `U`, `V` unimodular, `D` diagonal
/// with nonnegative entries satisfying `d_1 | d_2 | ...`.
pub struct Snf {
    pub d: Mat,
    pub u: Mat,
    pub v: Mat,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

/// Quotient of `a / b` rounded to the nearest integer. Keeps remainders
/// balanced, which bounds entry growth during elimination.
fn div_nearest(a: &BigInt, b: &BigInt) -> BigInt {
    debug_assert!(!b.is_zero());
    let babs = b.abs();
    let two_a: BigInt = a << 1;
    let q_abs = (two_a + &babs).div_floor(&(&babs << 1));
    if b.is_negative() {
        -q_abs
    } else {
        q_abs
    }
}

pub fn snf(a: &Mat) -> Result<Snf> {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = Mat::identity(m);
    let mut v = Mat::identity(n);
    let steps = m.min(n);
    let mut t = 0;
    while t < steps {
        d.check_scale()?;
        // Pivot: minimal nonzero absolute value in the trailing submatrix,
        // ties broken by row-major position. Re-selected after every pass so
        // elimination always reduces against the smallest available entry.
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..m {
            for j in t..n {
                let val = d[(i, j)].abs();
                if val.is_zero() {
                    continue;
                }
                match &best {
                    Some((_, _, bv)) if *bv <= val => {}
                    _ => best = Some((i, j, val)),
                }
            }
        }
        let Some((pi, pj, _)) = best else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        // One reduction pass against the current pivot. Any nonzero
        // remainder is strictly smaller than the pivot, so re-selecting
        // terminates by Euclidean descent.
        let mut dirty = false;
        for i in t + 1..m {
            if d[(i, t)].is_zero() {
                continue;
            }
            let q = -div_nearest(&d[(i, t)], &d[(t, t)]);
            d.add_row_multiple(i, t, &q);
            u.add_row_multiple(i, t, &q);
            if !d[(i, t)].is_zero() {
                dirty = true;
            }
        }
        for j in t + 1..n {
            if d[(t, j)].is_zero() {
                continue;
            }
            let q = -div_nearest(&d[(t, j)], &d[(t, t)]);
            d.add_col_multiple(j, t, &q);
            v.add_col_multiple(j, t, &q);
            if !d[(t, j)].is_zero() {
                dirty = true;
            }
        }
        if dirty {
            continue;
        }
        // Pivot row and column are clear; the pivot must also divide every
        // entry of the trailing submatrix.
        let mut redo = false;
        'scan: for i in t + 1..m {
            for j in t + 1..n {
                if !(&d[(i, j)] % &d[(t, t)]).is_zero() {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                    redo = true;
                    break 'scan;
                }
            }
        }
        if redo {
            continue;
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    Ok(Snf { d, u, v })
}
