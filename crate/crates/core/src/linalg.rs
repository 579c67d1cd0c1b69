//! Dense exact linear algebra over Q, with helpers that act on vectors of
//! Laurent coefficients.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};

use crate::exalg::{Blade, Form, Frame};
use crate::ring::{fmt_rational, Rational, RingElement};

#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Rational>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, x) in row.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn from_columns(cols: &[Vec<Rational>]) -> Self {
        Self::from_rows(cols).transpose()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> Vec<Rational> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
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

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &QMatrix) -> QMatrix {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Rational::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = &self[(i, j)];
                    if !a.is_zero() && !x.is_zero() {
                        acc += a * x;
                    }
                }
                acc
            })
            .collect()
    }

    /// Applies the matrix to a vector of Laurent coefficients.
    pub fn apply(&self, v: &[RingElement]) -> Vec<RingElement> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = RingElement::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = &self[(i, j)];
                    if !a.is_zero() && !x.is_zero() {
                        acc += &x.scale(a);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
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
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    let v = &m[(r, j)] * &f;
                    if !v.is_zero() {
                        m[(i, j)] -= v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rational::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    pub fn determinant(&self) -> Rational {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] / &piv;
                for j in c..n {
                    let v = &m[(c, j)] * &f;
                    m[(i, j)] -= v;
                }
            }
        }
        det
    }

    /// Some solution of `self * x = b`, or `None` if the system is
    /// inconsistent. Free variables are set to zero.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = r[(i, self.cols)].clone();
        }
        Some(x)
    }

    /// Solves with a right-hand side of Laurent coefficients, one power of
    /// `t` at a time.
    pub fn solve_ring(&self, b: &[RingElement]) -> Option<Vec<RingElement>> {
        let exps: BTreeSet<i32> = b.iter().flat_map(|x| x.terms().map(|(k, _)| k)).collect();
        let mut out = vec![RingElement::zero(); self.cols];
        for k in exps {
            let rhs: Vec<Rational> = b.iter().map(|x| x.coefficient(k)).collect();
            let sol = self.solve(&rhs)?;
            for (o, s) in out.iter_mut().zip(sol) {
                *o += &RingElement::monomial(s, k);
            }
        }
        Some(out)
    }

    /// Basis of the right null space.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(i, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Orthogonal projector (standard inner product) onto the span of the
    /// given vectors.
    pub fn projector_onto_span(vectors: &[Vec<Rational>], dim: usize) -> QMatrix {
        if vectors.is_empty() {
            return Self::zeros(dim, dim);
        }
        let v = Self::from_rows(vectors);
        let (r, pivots) = v.rref();
        let basis: Vec<Vec<Rational>> = (0..pivots.len()).map(|i| r.row(i)).collect();
        let b = Self::from_rows(&basis);
        let gram = b.mul(&b.transpose());
        let gi = gram.inverse().expect("independent rows have invertible Gram matrix");
        b.transpose().mul(&gi).mul(&b)
    }
}

/// Matrix of a linear operator on forms, columns indexed by the blades of
/// degree `deg_in` and rows by those of `deg_out`. The operator must map
/// constant forms to constant forms.
pub fn form_operator<F: Fn(&Form) -> Form>(frame: Frame, deg_in: usize, deg_out: usize, f: F) -> QMatrix {
    let bin = frame.blades(deg_in);
    let bout = frame.blades(deg_out);
    let cols: Vec<Vec<Rational>> = bin
        .iter()
        .map(|b| {
            let img = f(&Form::blade(frame, *b));
            assert_eq!(img.degree(), deg_out);
            img.rational_coordinates(&bout).expect("constant image")
        })
        .collect();
    if cols.is_empty() {
        return QMatrix::zeros(bout.len(), 0);
    }
    QMatrix::from_columns(&cols)
}

/// Applies a blade-basis matrix to a form of degree `deg_in`.
pub fn apply_to_form(m: &QMatrix, a: &Form, deg_out: usize) -> Form {
    let frame = a.frame();
    let bin: Vec<Blade> = frame.blades(a.degree());
    let bout = frame.blades(deg_out);
    let v = m.apply(&a.coordinates(&bin));
    Form::from_coordinates(frame, deg_out, &bout, &v)
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(fmt_rational).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Rank over Q(t) of a matrix with Laurent entries, computed by fraction-free
/// elimination on polynomial entries (entries are shifted to be polynomial).
pub fn ring_rank(rows: &[Vec<RingElement>]) -> usize {
    // Multiply each row by a power of t so entries are polynomials; then use
    // Bareiss-style elimination where pivots are nonzero polynomials.
    let mut m: Vec<Vec<RingElement>> = rows
        .iter()
        .map(|r| {
            let min = r.iter().flat_map(|x| x.terms().map(|(k, _)| k)).min().unwrap_or(0);
            r.iter().map(|x| x.shift(-min)).collect()
        })
        .collect();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for i in rank + 1..m.len() {
            let f = m[i][c].clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..ncols {
                let v = &(&m[i][j] * &pivot) - &(&m[rank][j] * &f);
                m[i][j] = v;
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{q, qi};

    fn m(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_rows(
            &rows
                .iter()
                .map(|r| r.iter().map(|x| qi(*x)).collect())
                .collect::<Vec<_>>(),
        )
    }

    #[test]
    fn inverse_and_determinant() {
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.determinant(), qi(1));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), QMatrix::identity(2));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
        assert_eq!(m(&[&[0, 1], &[1, 0]]).determinant(), qi(-1));
    }

    #[test]
    fn rank_and_nullspace() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let ns = a.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(a.mul_vec(&ns[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = m(&[&[1, 1], &[1, -1]]);
        assert_eq!(a.solve(&[qi(3), qi(1)]).unwrap(), vec![qi(2), qi(1)]);
        let b = m(&[&[1, 1], &[2, 2]]);
        assert!(b.solve(&[qi(1), qi(3)]).is_none());
    }

    #[test]
    fn projector_is_idempotent() {
        let p = QMatrix::projector_onto_span(&[vec![qi(1), qi(1), qi(0)]], 3);
        assert_eq!(p.mul(&p), p);
        assert_eq!(p[(0, 0)], q(1, 2));
    }

    #[test]
    fn laurent_rank() {
        let t = RingElement::t_pow(1);
        let one = RingElement::one();
        let rows = vec![vec![t.clone(), one.clone()], vec![&t * &t, t.clone()]];
        assert_eq!(ring_rank(&rows), 1);
        let rows = vec![vec![t.clone(), one.clone()], vec![one.clone(), t.clone()]];
        assert_eq!(ring_rank(&rows), 2);
        assert_eq!(ring_rank(&[vec![RingElement::zero()]]), 0);
    }
}
