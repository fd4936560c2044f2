//! Rational linear algebra over the standard integer lattice.
//!
//! Conventions used across the crate:
//!
//! - Every ambient space is `Q^d` with the standard lattice `Z^d` in the
//!   current coordinates. Sublattices and quotient lattices are always made
//!   explicit through basis changes, so downstream code never sees a
//!   non-standard lattice.
//! - Matrices act on column vectors. A matrix built `from_cols(vs)` has the
//!   `vs` as its columns.
//! - All arithmetic is exact: `Rat` is an arbitrary-precision rational that
//!   is always reduced with positive denominator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;
pub type IVec = Vec<Int>;
pub type QVec = Vec<Rat>;

pub fn int(n: i64) -> Int {
    Int::from(n)
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

pub fn ivec(v: &[i64]) -> IVec {
    v.iter().map(|&x| int(x)).collect()
}

pub fn qvec(v: &[i64]) -> QVec {
    v.iter().map(|&x| rat_int(x)).collect()
}

pub fn ivec_to_qvec(v: &[Int]) -> QVec {
    v.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

/// Rounds each entry to the nearest integer, requiring it to already be one.
pub fn qvec_to_ivec(v: &[Rat]) -> Result<IVec> {
    v.iter()
        .map(|x| {
            if x.is_integer() {
                Ok(x.to_integer())
            } else {
                Err(Error::DimMismatch(format!("entry {x} is not an integer")))
            }
        })
        .collect()
}

pub fn qvec_is_zero(v: &[Rat]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn qvec_add(a: &[Rat], b: &[Rat]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn qvec_sub(a: &[Rat], b: &[Rat]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn qvec_scale(a: &[Rat], s: &Rat) -> QVec {
    a.iter().map(|x| x * s).collect()
}

/// Standard (metric-free) dot product; the pairing between a space and its dual.
pub fn qvec_dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn ivec_dot(a: &[Int], b: &[Int]) -> Int {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Primitive integer vector generating the same ray (orientation preserved).
pub fn primitive(v: &[Rat]) -> Result<IVec> {
    if qvec_is_zero(v) {
        return Err(Error::ZeroVector);
    }
    let mut lcm = Int::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: IVec = v
        .iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect();
    let mut g = Int::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    Ok(ints.iter().map(|x| x / &g).collect())
}

pub fn primitive_int(v: &[Int]) -> Result<IVec> {
    primitive(&ivec_to_qvec(v))
}

/// Primitive vector with the first nonzero entry positive. Returns the vector
/// and whether the orientation was flipped.
pub fn primitive_signed(v: &[Rat]) -> Result<(IVec, bool)> {
    let p = primitive(v)?;
    let flip = p
        .iter()
        .find(|x| !x.is_zero())
        .map(|x| x.is_negative())
        .unwrap_or(false);
    if flip {
        Ok((p.iter().map(|x| -x).collect(), true))
    } else {
        Ok((p, false))
    }
}

/// Dense exact rational matrix, row major, acting on column vectors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QMat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl QMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: &[QVec]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().cloned());
        }
        QMat { rows: r, cols: c, data }
    }

    pub fn from_cols(cols: &[QVec]) -> Self {
        QMat::from_rows(cols).transpose()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> QVec {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> QVec {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> QMat {
        let mut t = QMat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut out = QMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> QVec {
        assert_eq!(self.cols, v.len(), "shape mismatch in mul_vec");
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| &self[(i, j)] * &v[j])
                    .sum::<Rat>()
            })
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..i {
                if self[(i, j)] != self[(j, i)] {
                    return false;
                }
            }
        }
        true
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (QMat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let v = &m[(i, j)] - &f * &m[(r, j)];
                        m[(i, j)] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel `{x : M x = 0}`.
    pub fn kernel_basis(&self) -> Vec<QVec> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = Rat::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r[(row, free)].clone();
            }
            basis.push(v);
        }
        basis
    }

    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let mut m = self.clone();
        let mut det = Rat::one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                return Rat::zero();
            };
            if p != c {
                m.swap_rows(c, p);
                det = -det;
            }
            det *= m[(c, c)].clone();
            let inv = m[(c, c)].recip();
            for i in c + 1..m.rows {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] * &inv;
                for j in c..m.cols {
                    let v = &m[(i, j)] - &f * &m[(c, j)];
                    m[(i, j)] = v;
                }
            }
        }
        det
    }

    /// Solves `M x = b` for square invertible `M`.
    pub fn solve(&self, b: &[Rat]) -> Result<QVec> {
        let inv = self.inverse()?;
        Ok(inv.mul_vec(b))
    }

    pub fn inverse(&self) -> Result<QMat> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = QMat::identity(n);
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Err(Error::Singular);
            };
            m.swap_rows(c, p);
            inv.swap_rows(c, p);
            let f = m[(c, c)].recip();
            for j in 0..n {
                let v = &m[(c, j)] * &f;
                m[(c, j)] = v;
                let w = &inv[(c, j)] * &f;
                inv[(c, j)] = w;
            }
            for i in 0..n {
                if i != c && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in 0..n {
                        let v = &m[(i, j)] - &f * &m[(c, j)];
                        m[(i, j)] = v;
                        let w = &inv[(i, j)] - &f * &inv[(c, j)];
                        inv[(i, j)] = w;
                    }
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn to_int(&self) -> Result<IMat> {
        let mut out = IMat::zero(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = &self[(i, j)];
                if !x.is_integer() {
                    return Err(Error::DimMismatch(format!(
                        "matrix entry {x} is not an integer"
                    )));
                }
                out[(i, j)] = x.to_integer();
            }
        }
        Ok(out)
    }
}

impl std::ops::Index<(usize, usize)> for QMat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

/// Dense exact integer matrix, row major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IMat {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IMat {
            rows,
            cols,
            data: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Int::one();
        }
        m
    }

    pub fn from_rows(rows: &[IVec]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().cloned());
        }
        IMat { rows: r, cols: c, data }
    }

    pub fn from_cols(cols: &[IVec]) -> Self {
        IMat::from_rows(cols).transpose()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn col(&self, j: usize) -> IVec {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row(&self, i: usize) -> IVec {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn transpose(&self) -> IMat {
        let mut t = IMat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IMat) -> IMat {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut out = IMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn to_rat(&self) -> QMat {
        let mut out = QMat::zero(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = Rat::from_integer(self[(i, j)].clone());
            }
        }
        out
    }

    pub fn det(&self) -> Int {
        let d = self.to_rat().det();
        debug_assert!(d.is_integer());
        d.to_integer()
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// col[dst] += f * col[src]
    fn add_col(&mut self, dst: usize, src: usize, f: &Int) {
        for i in 0..self.rows {
            let v = &self[(i, dst)] + f * &self[(i, src)];
            self[(i, dst)] = v;
        }
    }

    fn add_row(&mut self, dst: usize, src: usize, f: &Int) {
        for j in 0..self.cols {
            let v = &self[(dst, j)] + f * &self[(src, j)];
            self[(dst, j)] = v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self[(i, j)].clone();
            self[(i, j)] = v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self[(i, j)].clone();
            self[(i, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IMat {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        &mut self.data[i * self.cols + j]
    }
}

/// Column-style Hermite normal form.
///
/// Returns `(h, u)` with `m * u = h` and `u` unimodular. `h` is in column
/// echelon form: pivot rows strictly increase column by column, pivots are
/// positive, entries to the left of a pivot in its row are reduced into
/// `[0, pivot)`, and zero columns are pushed to the right end.
pub fn hnf(m: &IMat) -> (IMat, IMat) {
    let mut h = m.clone();
    let mut u = IMat::identity(m.cols());
    let mut j = 0;
    for i in 0..h.rows() {
        if j == h.cols() {
            break;
        }
        // Euclid on row i over columns j.., tracked in u.
        loop {
            let mut best: Option<usize> = None;
            for k in j..h.cols() {
                if !h[(i, k)].is_zero() {
                    best = match best {
                        None => Some(k),
                        Some(b) => {
                            if h[(i, k)].abs() < h[(i, b)].abs() {
                                Some(k)
                            } else {
                                Some(b)
                            }
                        }
                    };
                }
            }
            let Some(p) = best else { break };
            h.swap_cols(j, p);
            u.swap_cols(j, p);
            let mut done = true;
            for k in j + 1..h.cols() {
                if h[(i, k)].is_zero() {
                    continue;
                }
                let q = h[(i, k)].div_floor(&h[(i, j)]);
                let f = -q;
                h.add_col(k, j, &f);
                u.add_col(k, j, &f);
                if !h[(i, k)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(i, j)].is_zero() {
            continue;
        }
        if h[(i, j)].is_negative() {
            h.negate_col(j);
            u.negate_col(j);
        }
        // Reduce earlier columns in this pivot row into [0, pivot).
        for k in 0..j {
            if h[(i, k)].is_zero() {
                continue;
            }
            let q = h[(i, k)].div_floor(&h[(i, j)]);
            let f = -q;
            h.add_col(k, j, &f);
            u.add_col(k, j, &f);
        }
        j += 1;
    }
    (h, u)
}

/// Smith normal form. Returns `(u, s, v)` with `u * m * v = s`, `u` and `v`
/// unimodular, `s` diagonal with nonnegative entries `d_1 | d_2 | ...` and
/// zeros trailing.
pub fn snf(m: &IMat) -> (IMat, IMat, IMat) {
    let mut s = m.clone();
    let mut u = IMat::identity(m.rows());
    let mut v = IMat::identity(m.cols());
    let n = m.rows().min(m.cols());
    for t in 0..n {
        loop {
            // Find the minimal nonzero entry of the trailing submatrix.
            let mut best: Option<(usize, usize)> = None;
            for i in t..s.rows() {
                for j in t..s.cols() {
                    if !s[(i, j)].is_zero() {
                        best = match best {
                            None => Some((i, j)),
                            Some((bi, bj)) => {
                                if s[(i, j)].abs() < s[(bi, bj)].abs() {
                                    Some((i, j))
                                } else {
                                    Some((bi, bj))
                                }
                            }
                        };
                    }
                }
            }
            let Some((pi, pj)) = best else {
                // Trailing submatrix is zero; done with the whole matrix.
                return finish_snf(s, u, v, t);
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let mut clean = true;
            for i in t + 1..s.rows() {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = s[(i, t)].div_floor(&s[(t, t)]);
                let f = -q;
                s.add_row(i, t, &f);
                u.add_row(i, t, &f);
                if !s[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..s.cols() {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = s[(t, j)].div_floor(&s[(t, t)]);
                let f = -q;
                s.add_col(j, t, &f);
                v.add_col(j, t, &f);
                if !s[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Row t and column t are clear. Enforce that the pivot divides
            // the rest of the trailing submatrix before moving on.
            let mut witness: Option<usize> = None;
            'scan: for i in t + 1..s.rows() {
                for j in t + 1..s.cols() {
                    if !(&s[(i, j)] % &s[(t, t)]).is_zero() {
                        witness = Some(i);
                        break 'scan;
                    }
                }
            }
            match witness {
                Some(i) => {
                    let one = Int::one();
                    s.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    finish_snf(s, u, v, n)
}

fn finish_snf(mut s: IMat, mut u: IMat, v: IMat, upto: usize) -> (IMat, IMat, IMat) {
    for t in 0..upto.min(s.rows()).min(s.cols()) {
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    (u, s, v)
}

/// Basis of the lattice generated by the given rational vectors, i.e. of
/// their integer span. Returned as columns in ambient coordinates, in the
/// deterministic column-echelon order produced by [`hnf`].
pub fn lattice_basis_from_generators(dim: usize, gens: &[QVec]) -> Vec<QVec> {
    if gens.is_empty() {
        return Vec::new();
    }
    let mut denom = Int::one();
    for g in gens {
        assert_eq!(g.len(), dim, "generator has wrong dimension");
        for x in g {
            denom = denom.lcm(x.denom());
        }
    }
    let cols: Vec<IVec> = gens
        .iter()
        .map(|g| {
            g.iter()
                .map(|x| x.numer() * (&denom / x.denom()))
                .collect()
        })
        .collect();
    let m = IMat::from_cols(&cols);
    let (h, _) = hnf(&m);
    let d = Rat::from_integer(denom);
    let mut out = Vec::new();
    for j in 0..h.cols() {
        let col = h.col(j);
        if col.iter().all(|x| x.is_zero()) {
            continue;
        }
        out.push(
            col.iter()
                .map(|x| Rat::from_integer(x.clone()) / &d)
                .collect(),
        );
    }
    out
}

/// Basis of the integer kernel `{x in Z^cols : m x = 0}`, saturated by
/// construction.
pub fn integer_kernel(m: &IMat) -> Vec<IVec> {
    let (_, s, v) = snf(m);
    let n = m.rows().min(m.cols());
    let mut out = Vec::new();
    for j in 0..m.cols() {
        let zero_diag = j >= n || s[(j, j)].is_zero();
        if zero_diag {
            out.push(v.col(j));
        }
    }
    out
}

/// Basis of `Z^dim ∩ span(vs)`: the saturated sublattice of the rational
/// span of the given vectors.
pub fn sublattice_basis(dim: usize, vs: &[QVec]) -> Vec<IVec> {
    let nonzero: Vec<QVec> = vs.iter().filter(|v| !qvec_is_zero(v)).cloned().collect();
    if nonzero.is_empty() {
        return Vec::new();
    }
    // span(vs) = kernel of A where A's rows span the standard-orthogonal
    // complement: rows = kernel basis of the transposed generator matrix.
    let vm = QMat::from_cols(&nonzero);
    let ann = vm.transpose().kernel_basis();
    if ann.is_empty() {
        // vs span the whole space.
        return (0..dim)
            .map(|i| {
                let mut e = vec![Int::zero(); dim];
                e[i] = Int::one();
                e
            })
            .collect();
    }
    let mut denom = Int::one();
    for r in &ann {
        for x in r {
            denom = denom.lcm(x.denom());
        }
    }
    let rows: Vec<IVec> = ann
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| x.numer() * (&denom / x.denom()))
                .collect()
        })
        .collect();
    integer_kernel(&IMat::from_rows(&rows))
}

/// A rational space with the standard lattice and a symmetric positive
/// definite rational scalar product.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QSpace {
    dim: usize,
    q: QMat,
}

impl QSpace {
    /// Standard space: identity scalar product.
    pub fn standard(dim: usize) -> Self {
        QSpace {
            dim,
            q: QMat::identity(dim),
        }
    }

    /// Space with an explicit metric; validated eagerly (symmetry and
    /// positive leading principal minors).
    pub fn with_metric(dim: usize, q: QMat) -> Result<Self> {
        if q.rows() != dim || q.cols() != dim {
            return Err(Error::InvalidMetric(format!(
                "expected a {dim}x{dim} matrix, got {}x{}",
                q.rows(),
                q.cols()
            )));
        }
        if !q.is_symmetric() {
            return Err(Error::InvalidMetric("matrix is not symmetric".into()));
        }
        for k in 1..=dim {
            let mut minor = QMat::zero(k, k);
            for i in 0..k {
                for j in 0..k {
                    minor[(i, j)] = q[(i, j)].clone();
                }
            }
            if !minor.det().is_positive() {
                return Err(Error::InvalidMetric(format!(
                    "leading principal minor of order {k} is not positive"
                )));
            }
        }
        Ok(QSpace { dim, q })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn metric(&self) -> &QMat {
        &self.q
    }

    pub fn inner(&self, a: &[Rat], b: &[Rat]) -> Rat {
        qvec_dot(a, &self.q.mul_vec(b))
    }
}

/// Orthogonal projection of `x` onto the span of the columns of `basis`
/// with respect to the metric of `space`.
pub fn orth_project(space: &QSpace, basis: &[QVec], x: &[Rat]) -> Result<QVec> {
    if basis.is_empty() {
        return Ok(vec![Rat::zero(); space.dim()]);
    }
    let b = QMat::from_cols(basis);
    let bq = b.transpose().mul(space.metric());
    let gram = bq.mul(&b);
    let gram_inv = gram.inverse().map_err(|_| {
        Error::DependentVectors("projection basis is linearly dependent".into())
    })?;
    let coeffs = gram_inv.mul_vec(&bq.mul_vec(x));
    Ok(b.mul_vec(&coeffs))
}

/// Model of the quotient of a metric space by a subspace.
///
/// The quotient of `parent` by `lin(f_span)` is realised on the orthogonal
/// complement of the subspace. Model coordinates are taken with respect to a
/// lattice basis of the orthogonal projection of the parent lattice, so in
/// model coordinates the quotient lattice is standard again and the metric is
/// the Gram matrix of that basis.
#[derive(Clone, Debug)]
pub struct QuotientModel {
    parent: QSpace,
    f_basis: Vec<QVec>,
    comp_basis: Vec<QVec>,
    /// Columns: the projected-lattice basis in comp_basis coordinates.
    proj_lattice_basis: Vec<QVec>,
    /// Columns: the same basis in parent coordinates (comp_basis * coords).
    lattice_in_parent: Vec<QVec>,
    model_space: QSpace,
    /// Precomputed `(C^T Q C)^{-1} C^T Q` mapping parent points to model
    /// coordinates of their orthogonal projection.
    project_mat: QMat,
}

impl QuotientModel {
    pub fn new(parent: &QSpace, f_span: &[QVec]) -> Result<Self> {
        let d = parent.dim();
        let nonzero: Vec<QVec> = f_span
            .iter()
            .filter(|v| !qvec_is_zero(v))
            .cloned()
            .collect();
        for v in &nonzero {
            if v.len() != d {
                return Err(Error::DimMismatch(format!(
                    "subspace generator has length {}, expected {d}",
                    v.len()
                )));
            }
        }
        // Rational basis of the subspace from the generators.
        let f_basis: Vec<QVec> = if nonzero.is_empty() {
            Vec::new()
        } else {
            let m = QMat::from_rows(&nonzero);
            let (r, pivots) = m.rref();
            pivots.iter().enumerate().map(|(i, _)| r.row(i)).collect()
        };
        let k = f_basis.len();
        let m_dim = d - k;

        // Orthogonal complement: kernel of F Q (rows F, acting on points).
        let comp_basis: Vec<QVec> = if k == 0 {
            (0..d).map(|i| QMat::identity(d).col(i)).collect()
        } else {
            let f = QMat::from_rows(&f_basis);
            f.mul(parent.metric()).kernel_basis()
        };
        debug_assert_eq!(comp_basis.len(), m_dim);

        if m_dim == 0 {
            let model_space = QSpace::standard(0);
            return Ok(QuotientModel {
                parent: parent.clone(),
                f_basis,
                comp_basis: Vec::new(),
                proj_lattice_basis: Vec::new(),
                lattice_in_parent: Vec::new(),
                model_space,
                project_mat: QMat::zero(0, d),
            });
        }

        // Project the standard basis vectors and express them in comp
        // coordinates, then extract a lattice basis of their integer span.
        let comp = QMat::from_cols(&comp_basis);
        let comp_gram = comp.transpose().mul(parent.metric()).mul(&comp);
        let comp_coord = comp_gram
            .inverse()
            .expect("complement Gram matrix is invertible")
            .mul(&comp.transpose().mul(parent.metric()));
        let mut proj_gens = Vec::new();
        for i in 0..d {
            let mut e = vec![Rat::zero(); d];
            e[i] = Rat::one();
            proj_gens.push(comp_coord.mul_vec(&e));
        }
        let proj_lattice_basis = lattice_basis_from_generators(m_dim, &proj_gens);
        debug_assert_eq!(proj_lattice_basis.len(), m_dim);
        let lattice_in_parent: Vec<QVec> = proj_lattice_basis
            .iter()
            .map(|y| comp.mul_vec(y))
            .collect();

        let c = QMat::from_cols(&lattice_in_parent);
        let ctq = c.transpose().mul(parent.metric());
        let quotient_q = ctq.mul(&c);
        let model_space = QSpace::with_metric(m_dim, quotient_q.clone())?;
        let project_mat = quotient_q
            .inverse()
            .expect("quotient metric is invertible")
            .mul(&ctq);

        Ok(QuotientModel {
            parent: parent.clone(),
            f_basis,
            comp_basis,
            proj_lattice_basis,
            lattice_in_parent,
            model_space,
            project_mat,
        })
    }

    pub fn parent(&self) -> &QSpace {
        &self.parent
    }

    /// Rational basis of the subspace that was quotiented out.
    pub fn subspace_basis(&self) -> &[QVec] {
        &self.f_basis
    }

    /// Basis of the orthogonal complement, in parent coordinates.
    pub fn comp_basis(&self) -> &[QVec] {
        &self.comp_basis
    }

    /// Basis of the projected lattice in comp-basis coordinates.
    pub fn proj_lattice_basis(&self) -> &[QVec] {
        &self.proj_lattice_basis
    }

    /// The same basis as columns in parent coordinates.
    pub fn lattice_basis_in_parent(&self) -> &[QVec] {
        &self.lattice_in_parent
    }

    /// The quotient as a standard-lattice metric space.
    pub fn model_space(&self) -> &QSpace {
        &self.model_space
    }

    pub fn model_dim(&self) -> usize {
        self.model_space.dim()
    }

    /// Model coordinates of the orthogonal projection of a parent point.
    /// Parent lattice points land in the standard lattice of the model.
    pub fn project_point(&self, x: &[Rat]) -> QVec {
        self.project_mat.mul_vec(x)
    }

    /// Parent coordinates of a model point.
    pub fn embed_point(&self, y: &[Rat]) -> QVec {
        if self.model_dim() == 0 {
            return vec![Rat::zero(); self.parent.dim()];
        }
        QMat::from_cols(&self.lattice_in_parent).mul_vec(y)
    }

    /// Matrix `L` such that a germ `s(u)` on the model dual extends to the
    /// parent dual as `s(L xi)`: precomposition with the transpose of the
    /// lattice basis. Because that basis is orthogonal to the quotiented
    /// subspace, this single matrix also realises the extension by
    /// orthogonal projection of the parent dual onto the annihilator of the
    /// subspace. Shape: model_dim x parent_dim.
    pub fn dual_extension_matrix(&self) -> QMat {
        if self.model_dim() == 0 {
            return QMat::zero(0, self.parent.dim());
        }
        QMat::from_cols(&self.lattice_in_parent).transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn imat(rows: &[&[i64]]) -> IMat {
        IMat::from_rows(&rows.iter().map(|r| ivec(r)).collect::<Vec<_>>())
    }

    #[test]
    fn hnf_reduces_example() {
        let m = imat(&[&[2, 4], &[0, 2]]);
        let (h, u) = hnf(&m);
        assert_eq!(h, imat(&[&[2, 0], &[0, 2]]));
        assert_eq!(m.mul(&u), h);
        assert_eq!(u.det().abs(), int(1));
        assert_eq!(h.det().abs(), int(4));
    }

    #[test]
    fn hnf_identity_and_zero() {
        let (h, u) = hnf(&IMat::identity(3));
        assert_eq!(h, IMat::identity(3));
        assert_eq!(u, IMat::identity(3));
        let z = imat(&[&[0]]);
        let (h, u) = hnf(&z);
        assert_eq!(h, z);
        assert_eq!(u, IMat::identity(1));
    }

    #[test]
    fn hnf_rank_deficient_pushes_zero_columns_right() {
        let m = imat(&[&[1, 2, 3], &[2, 4, 6]]);
        let (h, u) = hnf(&m);
        assert_eq!(m.mul(&u), h);
        assert!(!h.col(0).iter().all(|x| x.is_zero()));
        assert!(h.col(1).iter().all(|x| x.is_zero()));
        assert!(h.col(2).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn snf_diagonalises_with_divisibility() {
        let m = imat(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        let (u, s, v) = snf(&m);
        assert_eq!(u.mul(&m).mul(&v), s);
        assert_eq!(u.det().abs(), int(1));
        assert_eq!(v.det().abs(), int(1));
        let d: Vec<Int> = (0..3).map(|i| s[(i, i)].clone()).collect();
        for i in 0..2 {
            for j in 0..3 {
                for k in 0..3 {
                    if j != k {
                        assert!(s[(j, k)].is_zero());
                    }
                }
            }
            if !d[i + 1].is_zero() {
                assert!((&d[i + 1] % &d[i]).is_zero(), "divisibility chain");
            }
        }
        // |det| preserved up to sign.
        assert_eq!(s.det().abs(), m.det().abs());
    }

    #[test]
    fn snf_of_diag_2_3_is_1_6() {
        let m = imat(&[&[2, 0], &[0, 3]]);
        let (u, s, v) = snf(&m);
        assert_eq!(u.mul(&m).mul(&v), s);
        assert_eq!(s[(0, 0)], int(1));
        assert_eq!(s[(1, 1)], int(6));
    }

    #[test]
    fn primitive_scales_and_keeps_direction() {
        assert_eq!(primitive(&qvec(&[2, 4])).unwrap(), ivec(&[1, 2]));
        assert_eq!(primitive(&qvec(&[-2, -4])).unwrap(), ivec(&[-1, -2]));
        let half = vec![rat(1, 2), rat(1, 3)];
        assert_eq!(primitive(&half).unwrap(), ivec(&[3, 2]));
        assert!(matches!(
            primitive(&qvec(&[0, 0])),
            Err(Error::ZeroVector)
        ));
    }

    #[test]
    fn sublattice_of_diagonal_line() {
        let b = sublattice_basis(2, &[qvec(&[2, 2])]);
        assert_eq!(b.len(), 1);
        let v = &b[0];
        assert_eq!(v[0].clone().abs(), int(1));
        assert_eq!(v[0], v[1]);
    }

    #[test]
    fn sublattice_saturates() {
        // span{(2,0),(0,3)} is the whole plane; the saturated lattice is Z^2.
        let b = sublattice_basis(2, &[qvec(&[2, 0]), qvec(&[0, 3])]);
        let m = IMat::from_cols(&b);
        assert_eq!(m.det().abs(), int(1));
    }

    #[test]
    fn kernel_is_saturated() {
        let m = imat(&[&[1, 1, 1]]);
        let k = integer_kernel(&m);
        assert_eq!(k.len(), 2);
        let full = IMat::from_cols(&k);
        // Saturation: the 2x2 minors of the kernel basis have gcd 1.
        let mut g = Int::zero();
        for i in 0..3 {
            let mut minor = IMat::zero(2, 2);
            let rows: Vec<usize> = (0..3).filter(|&r| r != i).collect();
            for (a, &r) in rows.iter().enumerate() {
                for b in 0..2 {
                    minor[(a, b)] = full[(r, b)].clone();
                }
            }
            g = g.gcd(&minor.det());
        }
        assert_eq!(g.abs(), int(1));
    }

    #[test]
    fn metric_validation() {
        let q = QMat::from_rows(&[qvec(&[1, 2]), qvec(&[2, 1])]);
        assert!(QSpace::with_metric(2, q).is_err());
        let q = QMat::from_rows(&[qvec(&[2, 1]), qvec(&[1, 1])]);
        assert!(QSpace::with_metric(2, q).is_ok());
        let q = QMat::from_rows(&[qvec(&[1, 2]), qvec(&[3, 4])]);
        assert!(QSpace::with_metric(2, q).is_err());
    }

    #[test]
    fn orth_project_standard_plane() {
        let s = QSpace::standard(2);
        let p = orth_project(&s, &[qvec(&[1, 1])], &qvec(&[1, 0])).unwrap();
        assert_eq!(p, vec![rat(1, 2), rat(1, 2)]);
        // Idempotence and self-adjointness on a sample.
        let p2 = orth_project(&s, &[qvec(&[1, 1])], &p).unwrap();
        assert_eq!(p, p2);
        let x = qvec(&[3, -1]);
        let y = qvec(&[-2, 5]);
        let px = orth_project(&s, &[qvec(&[1, 1])], &x).unwrap();
        let py = orth_project(&s, &[qvec(&[1, 1])], &y).unwrap();
        assert_eq!(s.inner(&px, &y), s.inner(&x, &py));
    }

    #[test]
    fn quotient_model_of_diagonal_in_standard_plane() {
        let s = QSpace::standard(2);
        let qm = QuotientModel::new(&s, &[qvec(&[1, 1])]).unwrap();
        assert_eq!(qm.model_dim(), 1);
        // The projected lattice is generated by (1/2, -1/2) in parent
        // coordinates (up to sign).
        let b = &qm.lattice_basis_in_parent()[0];
        let expect: Vec<Rat> = vec![rat(1, 2), rat(-1, 2)];
        let neg: Vec<Rat> = expect.iter().map(|x| -x).collect();
        assert!(b == &expect || b == &neg, "got {b:?}");
        // Standard lattice points land on integers in model coordinates.
        for v in [qvec(&[1, 0]), qvec(&[0, 1]), qvec(&[3, -2])] {
            let y = qm.project_point(&v);
            assert!(y[0].is_integer(), "projection of {v:?} gives {y:?}");
        }
        // Quotient metric is the Gram matrix of the basis: 1/2.
        assert_eq!(qm.model_space().metric()[(0, 0)], rat(1, 2));
    }

    #[test]
    fn quotient_model_trivial_subspace_is_identity() {
        let s = QSpace::standard(3);
        let qm = QuotientModel::new(&s, &[]).unwrap();
        assert_eq!(qm.model_dim(), 3);
        let x = qvec(&[4, -1, 7]);
        assert_eq!(qm.project_point(&x), x);
        assert_eq!(qm.model_space().metric(), s.metric());
    }

    #[test]
    fn quotient_model_full_subspace_is_zero() {
        let s = QSpace::standard(2);
        let qm = QuotientModel::new(&s, &[qvec(&[1, 0]), qvec(&[0, 1])]).unwrap();
        assert_eq!(qm.model_dim(), 0);
        assert_eq!(qm.project_point(&qvec(&[5, 6])), Vec::<Rat>::new());
    }

    #[test]
    fn dual_extension_preserves_pairing_on_annihilator() {
        // For xi in the annihilator of the quotiented subspace, the model
        // dual coordinates of xi are L xi, and pairing is preserved:
        // <L xi, project(x)> = <xi, x> for every parent point x.
        let s = QSpace::standard(3);
        let f = qvec(&[1, 2, 0]);
        let qm = QuotientModel::new(&s, std::slice::from_ref(&f)).unwrap();
        let l = qm.dual_extension_matrix();
        assert_eq!(l.rows(), 2);
        assert_eq!(l.cols(), 3);
        for xi in [qvec(&[2, -1, 0]), qvec(&[0, 0, 1]), qvec(&[4, -2, 7])] {
            assert!(qvec_dot(&xi, &f).is_zero(), "test vector not in annihilator");
            let u = l.mul_vec(&xi);
            for x in [qvec(&[1, 0, 0]), qvec(&[0, 1, 0]), qvec(&[3, 5, -2])] {
                let y = qm.project_point(&x);
                assert_eq!(qvec_dot(&u, &y), qvec_dot(&xi, &x));
            }
        }
    }
}
