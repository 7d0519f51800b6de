//! Exact rational linear algebra: row reduction, solving, subspace bookkeeping.
//!
//! Dimensions here are desk-scale (a few dozen), so dense Gauss-Jordan over
//! `BigRational` is the right tool; no pivoting heuristics are needed beyond
//! nonzero choice.

use crate::scalar::Ratio;
use num_traits::Zero;

/// Dense rational matrix, row major.
#[derive(Clone, Debug, PartialEq)]
pub struct QMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Ratio>,
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat { rows, cols, data: vec![Ratio::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Ratio::from_integer(1.into());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Ratio>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn row(&self, i: usize) -> &[Ratio] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Ratio> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn mul_vec(&self, v: &[Ratio]) -> Vec<Ratio> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Ratio::zero();
                for j in 0..self.cols {
                    if !self[(i, j)].is_zero() && !v[j].is_zero() {
                        acc += &self[(i, j)] * &v[j];
                    }
                }
                acc
            })
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for QMat {
    type Output = Ratio;
    fn index(&self, (i, j): (usize, usize)) -> &Ratio {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Ratio {
        &mut self.data[i * self.cols + j]
    }
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut QMat) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(pr) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        for j in 0..m.cols {
            let tmp = m[(pr, j)].clone();
            m[(pr, j)] = m[(r, j)].clone();
            m[(r, j)] = tmp;
        }
        let inv = {
            let p = m[(r, c)].clone();
            Ratio::from_integer(1.into()) / p
        };
        for j in 0..m.cols {
            let v = m[(r, j)].clone() * inv.clone();
            m[(r, j)] = v;
        }
        for i in 0..m.rows {
            if i != r && !m[(i, c)].is_zero() {
                let f = m[(i, c)].clone();
                for j in 0..m.cols {
                    let v = m[(i, j)].clone() - f.clone() * m[(r, j)].clone();
                    m[(i, j)] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Span of a list of vectors, kept in reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Span {
    pub dim_ambient: usize,
    basis: QMat,
    pivots: Vec<usize>,
}

impl Span {
    pub fn empty(dim_ambient: usize) -> Self {
        Span { dim_ambient, basis: QMat::zeros(0, dim_ambient), pivots: Vec::new() }
    }

    pub fn from_vectors(dim_ambient: usize, vecs: &[Vec<Ratio>]) -> Self {
        let mut s = Span::empty(dim_ambient);
        for v in vecs {
            s.insert(v);
        }
        s
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn basis_rows(&self) -> Vec<Vec<Ratio>> {
        (0..self.basis.rows).map(|i| self.basis.row(i).to_vec()).collect()
    }

    /// Reduce `v` against the current basis; the remainder is zero iff `v` is in the span.
    pub fn reduce(&self, v: &[Ratio]) -> Vec<Ratio> {
        assert_eq!(v.len(), self.dim_ambient);
        let mut w = v.to_vec();
        for (row, &p) in self.pivots.iter().enumerate() {
            if !w[p].is_zero() {
                let f = w[p].clone();
                for j in 0..self.dim_ambient {
                    let v = w[j].clone() - f.clone() * self.basis[(row, j)].clone();
                    w[j] = v;
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[Ratio]) -> bool {
        self.reduce(v).iter().all(Ratio::is_zero)
    }

    /// Insert `v`; returns true if it enlarged the span.
    pub fn insert(&mut self, v: &[Ratio]) -> bool {
        let w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = Ratio::from_integer(1.into()) / w[p].clone();
        let mut row: Vec<Ratio> = w.into_iter().map(|x| x * inv.clone()).collect();
        // Back-substitute into existing rows to keep RREF.
        for r in 0..self.basis.rows {
            if !self.basis[(r, p)].is_zero() {
                let f = self.basis[(r, p)].clone();
                for j in 0..self.dim_ambient {
                    let v = self.basis[(r, j)].clone() - f.clone() * row[j].clone();
                    self.basis[(r, j)] = v;
                }
            }
        }
        // Insert keeping pivot columns sorted.
        let pos = self.pivots.iter().position(|&q| q > p).unwrap_or(self.pivots.len());
        self.pivots.insert(pos, p);
        let mut data = Vec::with_capacity((self.basis.rows + 1) * self.dim_ambient);
        for r in 0..self.basis.rows {
            if r == pos {
                data.append(&mut row);
            }
            data.extend_from_slice(self.basis.row(r));
        }
        if pos == self.basis.rows {
            data.append(&mut row);
        }
        self.basis = QMat { rows: self.basis.rows + 1, cols: self.dim_ambient, data };
        true
    }
}

/// Solve `A x = b` exactly. Returns any solution, or None if inconsistent.
pub fn solve(a: &QMat, b: &[Ratio]) -> Option<Vec<Ratio>> {
    assert_eq!(a.rows, b.len());
    let mut aug = QMat::zeros(a.rows, a.cols + 1);
    for i in 0..a.rows {
        for j in 0..a.cols {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, a.cols)] = b[i].clone();
    }
    let pivots = rref(&mut aug);
    if pivots.contains(&a.cols) {
        return None;
    }
    let mut x = vec![Ratio::zero(); a.cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = aug[(r, a.cols)].clone();
    }
    Some(x)
}

/// Invert a square matrix exactly; None if singular.
pub fn invert(a: &QMat) -> Option<QMat> {
    assert_eq!(a.rows, a.cols);
    let n = a.rows;
    let mut aug = QMat::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, n + i)] = Ratio::from_integer(1.into());
    }
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots.iter().enumerate().any(|(k, &p)| k != p) {
        return None;
    }
    let mut out = QMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = aug[(i, n + j)].clone();
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::parse_ratio;

    fn q(s: &str) -> Ratio {
        parse_ratio(s).unwrap()
    }

    #[test]
    fn rref_and_solve() {
        let a = QMat::from_rows(vec![
            vec![q("2"), q("1")],
            vec![q("1"), q("3")],
        ]);
        let x = solve(&a, &[q("5"), q("10")]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![q("5"), q("10")]);
    }

    #[test]
    fn span_membership() {
        let mut s = Span::empty(3);
        assert!(s.insert(&[q("1"), q("2"), q("0")]));
        assert!(s.insert(&[q("0"), q("1"), q("1")]));
        assert!(!s.insert(&[q("1"), q("3"), q("1")]));
        assert_eq!(s.rank(), 2);
        assert!(s.contains(&[q("2"), q("5"), q("1")]));
        assert!(!s.contains(&[q("0"), q("0"), q("1")]));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = QMat::from_rows(vec![
            vec![q("1"), q("2"), q("0")],
            vec![q("0"), q("1"), q("4")],
            vec![q("5"), q("0"), q("1")],
        ]);
        let inv = invert(&a).unwrap();
        let mut prod = QMat::zeros(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = Ratio::zero();
                for k in 0..3 {
                    acc += &a[(i, k)] * &inv[(k, j)];
                }
                prod[(i, j)] = acc;
            }
        }
        assert_eq!(prod, QMat::identity(3));
    }
}
