//! Dense matrices over `ℚ`.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_traits::{One, Zero};

use super::arith::{format_rational, q, Q};
use super::poly::QPoly;

#[derive(Clone, PartialEq, Eq)]
pub struct QMat {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for QMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let r: Vec<String> = self.row(i).iter().map(format_rational).collect();
                format!("[{}]", r.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

impl Index<(usize, usize)> for QMat {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> QMat {
        QMat { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> QMat {
        let mut m = QMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> QMat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        QMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_ints(rows: &[&[i64]]) -> QMat {
        QMat::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<Q>], n: usize) -> QMat {
        let mut m = QMat::zeros(n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..n {
                m[(i, j)] = c[i].clone();
            }
        }
        m
    }

    pub fn diag(entries: &[Q]) -> QMat {
        let mut m = QMat::zeros(entries.len(), entries.len());
        for (i, x) in entries.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    /// Companion matrix of a monic polynomial, acting on `1, x, …, x^{n-1}`.
    pub fn companion(f: &QPoly) -> QMat {
        let n = f.degree().expect("nonzero polynomial");
        let lead = f.coeff(n);
        let mut m = QMat::zeros(n, n);
        for i in 1..n {
            m[(i, i - 1)] = Q::one();
        }
        for i in 0..n {
            m[(i, n - 1)] = -f.coeff(i) / &lead;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Q> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col_vecs(&self) -> Vec<Vec<Q>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &Q> {
        self.data.iter()
    }

    pub fn transpose(&self) -> QMat {
        let mut t = QMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| self.row(i).iter().zip(v).fold(Q::zero(), |acc, (a, b)| acc + a * b)).collect()
    }

    pub fn scale(&self, c: &Q) -> QMat {
        QMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn add(&self, other: &QMat) -> QMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &QMat) -> QMat {
        self.add(&other.scale(&q(-1)))
    }

    pub fn pow(&self, k: u32) -> QMat {
        (0..k).fold(QMat::identity(self.rows), |acc, _| &acc * self)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> QMat {
        let mut m = QMat::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn hstack(&self, other: &QMat) -> QMat {
        assert_eq!(self.rows, other.rows);
        let rows = (0..self.rows).map(|i| self.row(i).iter().chain(other.row(i)).cloned().collect()).collect();
        QMat::from_rows(rows)
    }

    /// Block diagonal matrix.
    pub fn block_diag(blocks: &[&QMat]) -> QMat {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut m = QMat::zeros(n, n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m[(off + i, off + j)] = b[(i, j)].clone();
                }
            }
            off += b.rows;
        }
        m
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (QMat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else { continue };
            m.swap_rows(pr, r);
            let inv = m[(r, c)].recip();
            for j in 0..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in 0..m.cols {
                        let t = &f * &m[(r, j)];
                        m[(i, j)] -= t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn det(&self) -> Q {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Q::one();
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m[(i, c)].is_zero()) else { return Q::zero() };
            if pr != c {
                m.swap_rows(pr, c);
                det = -det;
            }
            let piv = m[(c, c)].clone();
            det *= &piv;
            for i in c + 1..n {
                if !m[(i, c)].is_zero() {
                    let f = &m[(i, c)] / &piv;
                    for j in c..n {
                        let t = &f * &m[(c, j)];
                        m[(i, j)] -= t;
                    }
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<QMat> {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let aug = self.hstack(&QMat::identity(n));
        let (r, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        Some(r.submatrix(&(0..n).collect::<Vec<_>>(), &cols))
    }

    /// Basis of the right kernel `{x : Mx = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Q>> {
        let (r, piv) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![Q::zero(); self.cols];
                x[f] = Q::one();
                for (i, &pc) in piv.iter().enumerate() {
                    x[pc] = -r[(i, f)].clone();
                }
                x
            })
            .collect()
    }

    /// Solve `Mx = b`, if solvable.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        let aug = self.hstack(&QMat::from_cols(&[b.to_vec()], self.rows));
        let (r, piv) = aug.rref();
        if piv.contains(&self.cols) {
            return None;
        }
        let mut x = vec![Q::zero(); self.cols];
        for (i, &pc) in piv.iter().enumerate() {
            x[pc] = r[(i, self.cols)].clone();
        }
        Some(x)
    }

    /// Characteristic polynomial `det(xI − M)` by Berkowitz's division-free
    /// algorithm.
    pub fn charpoly(&self) -> QPoly {
        assert!(self.is_square());
        let n = self.rows;
        // coefficient vectors, highest degree first
        let mut c: Vec<Q> = vec![Q::one()];
        for k in 0..n {
            // leading k×k block is A_k, next row/col r, s, and a = M[k][k]
            let a = self[(k, k)].clone();
            let r: Vec<Q> = (0..k).map(|j| self[(k, j)].clone()).collect();
            let s: Vec<Q> = (0..k).map(|i| self[(i, k)].clone()).collect();
            let sub = self.submatrix(&(0..k).collect::<Vec<_>>(), &(0..k).collect::<Vec<_>>());
            // Toeplitz column: 1, -a, -r s, -r A s, -r A² s, …
            let mut t = vec![Q::one(), -a];
            let mut v = s.clone();
            for _ in 0..k {
                let rv = r.iter().zip(&v).fold(Q::zero(), |acc, (x, y)| acc + x * y);
                t.push(-rv);
                v = sub.apply(&v);
            }
            // new coefficients = T · c where T is (k+2)×(k+1) lower Toeplitz
            let mut next = vec![Q::zero(); k + 2];
            for i in 0..k + 2 {
                for j in 0..=k.min(i) {
                    if i - j < t.len() {
                        next[i] += &t[i - j] * &c[j];
                    }
                }
            }
            c = next;
        }
        c.reverse();
        QPoly::new(c)
    }
}

impl Mul for &QMat {
    type Output = QMat;
    fn mul(self, rhs: &QMat) -> QMat {
        assert_eq!(self.cols, rhs.rows);
        let mut m = QMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let t = a * &rhs[(k, j)];
                    m[(i, j)] += t;
                }
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::arith::qf;
    use proptest::prelude::*;

    /// Faddeev–LeVerrier: cₙ₋ₖ = −tr(M·Mₖ)/k, an independent route to the
    /// characteristic polynomial.
    fn leverrier(m: &QMat) -> QPoly {
        let n = m.rows();
        let mut coeffs = vec![Q::zero(); n + 1];
        coeffs[n] = Q::one();
        let mut mk = QMat::zeros(n, n);
        for k in 1..=n {
            let ident = QMat::identity(n).scale(&coeffs[n - k + 1]);
            mk = &(m * &mk) + &ident;
            let amk = m * &mk;
            let tr = (0..n).fold(Q::zero(), |acc, i| acc + &amk[(i, i)]);
            coeffs[n - k] = -tr / q(k as i64);
        }
        QPoly::new(coeffs)
    }

    impl std::ops::Add for &QMat {
        type Output = QMat;
        fn add(self, rhs: &QMat) -> QMat {
            QMat::add(self, rhs)
        }
    }

    fn small_matrix() -> impl Strategy<Value = QMat> {
        (1usize..5).prop_flat_map(|n| {
            prop::collection::vec((-9i64..10, 1i64..4), n * n).prop_map(move |v| {
                QMat::from_rows(v.chunks(n).map(|r| r.iter().map(|&(a, b)| qf(a, b)).collect()).collect())
            })
        })
    }

    #[test]
    fn charpoly_examples() {
        let p = 3;
        let d = QMat::diag(&[qf(1, p), qf(1, p * p)]);
        // (x − 1/3)(x − 1/9) = x² − 4/9 x + 1/27
        assert_eq!(d.charpoly(), QPoly::new(vec![qf(1, 27), qf(-4, 9), q(1)]));
        let f = QPoly::new(vec![q(5), q(-3), q(1)]);
        assert_eq!(QMat::companion(&f).charpoly(), f);
        assert_eq!(QMat::zeros(2, 2).charpoly(), QPoly::new(vec![q(0), q(0), q(1)]));
    }

    #[test]
    fn inverse_and_det() {
        let m = QMat::from_ints(&[&[2, 1], &[1, 1]]);
        assert_eq!(m.det(), q(1));
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, QMat::identity(2));
        assert!(QMat::from_ints(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn kernel_of_singular() {
        let m = QMat::from_ints(&[&[1, 2], &[2, 4]]);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.apply(&k[0]).iter().all(Zero::is_zero));
    }

    proptest! {
        #[test]
        fn berkowitz_agrees_with_leverrier(m in small_matrix()) {
            prop_assert_eq!(m.charpoly(), leverrier(&m));
        }

        #[test]
        fn charpoly_constant_is_signed_det(m in small_matrix()) {
            let n = m.rows();
            let c0 = m.charpoly().coeff(0);
            let sign = if n % 2 == 0 { q(1) } else { q(-1) };
            prop_assert_eq!(c0, sign * m.det());
        }

        #[test]
        fn cayley_hamilton(m in small_matrix()) {
            prop_assert!(m.charpoly().eval_matrix(&m).is_zero());
        }
    }
}
