//! `ℤₚ`-lattices in `ℚₚⁿ` spanned by rational vectors.
//!
//! A lattice is stored by its row Hermite normal form over `ℤ_(p)`: echelon
//! rows whose pivots are exact powers `p^v`, with every entry above a pivot
//! reduced to its representative in `ℤ[1/p] ∩ [0, p^v)`. That form is unique,
//! so `==` on [`Lattice`] is equality of `ℤₚ`-spans.

use std::fmt;

use num_traits::{One, Zero};

use super::arith::{canonical_rep, format_rational, is_integral, p_pow, val, Q};
use super::matrix::QMat;
use crate::dynamics::{checked_pow, Index};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct Lattice {
    p: u64,
    dim: usize,
    rows: Vec<Vec<Q>>,
    /// `(column, valuation)` of each row's pivot.
    pivots: Vec<(usize, i64)>,
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice(p={}, {})", self.p, self.describe())
    }
}

impl Lattice {
    /// `ℤₚ`-span of the given vectors.
    pub fn span(p: u64, dim: usize, gens: Vec<Vec<Q>>) -> Lattice {
        let (rows, pivots) = hnf(p, dim, gens);
        Lattice { p, dim, rows, pivots }
    }

    pub fn standard(p: u64, n: usize) -> Lattice {
        Lattice::span(p, n, QMat::identity(n).row_vecs())
    }

    pub fn zero(p: u64, n: usize) -> Lattice {
        Lattice::span(p, n, Vec::new())
    }

    /// `p^k ℤₚⁿ`.
    pub fn scaled_standard(p: u64, n: usize, k: i64) -> Lattice {
        Lattice::standard(p, n).scaled(k)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.dim
    }

    pub fn basis(&self) -> &[Vec<Q>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[(usize, i64)] {
        &self.pivots
    }

    /// `p^k L`.
    pub fn scaled(&self, k: i64) -> Lattice {
        let c = p_pow(self.p, k);
        Lattice::span(self.p, self.dim, self.rows.iter().map(|r| r.iter().map(|x| x * &c).collect()).collect())
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        let gens = self.rows.iter().chain(&other.rows).cloned().collect();
        Lattice::span(self.p, self.dim, gens)
    }

    /// Zassenhaus: echelonise `[[L, L], [M, 0]]`; rows with vanishing left
    /// half span `L ∩ M` in their right half.
    pub fn intersect(&self, other: &Lattice) -> Lattice {
        let n = self.dim;
        let zeros = vec![Q::zero(); n];
        let mut gens: Vec<Vec<Q>> = self.rows.iter().map(|r| [r.as_slice(), r.as_slice()].concat()).collect();
        gens.extend(other.rows.iter().map(|r| [r.as_slice(), zeros.as_slice()].concat()));
        let (rows, _) = hnf(self.p, 2 * n, gens);
        let inter = rows.into_iter().filter(|r| r[..n].iter().all(Zero::is_zero)).map(|r| r[n..].to_vec()).collect();
        Lattice::span(self.p, n, inter)
    }

    /// `A·L` (rank may drop).
    pub fn image(&self, a: &QMat) -> Lattice {
        Lattice::span(self.p, a.rows(), self.rows.iter().map(|r| a.apply(r)).collect())
    }

    /// `{x ∈ self : Ax ∈ target}`.
    pub fn preimage_meet(&self, a: &QMat, target: &Lattice) -> Lattice {
        let (r, n) = (self.rank(), self.dim);
        let zeros_r = vec![Q::zero(); r];
        let mut gens: Vec<Vec<Q>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let mut row = a.apply(m);
                let mut e = zeros_r.clone();
                e[i] = Q::one();
                row.extend(e);
                row
            })
            .collect();
        gens.extend(target.rows.iter().map(|l| [l.as_slice(), zeros_r.as_slice()].concat()));
        let (rows, _) = hnf(self.p, n + r, gens);
        let out = rows
            .into_iter()
            .filter(|row| row[..n].iter().all(Zero::is_zero))
            .map(|row| {
                let coeffs = &row[n..];
                (0..n).map(|j| coeffs.iter().zip(&self.rows).fold(Q::zero(), |acc, (c, m)| acc + c * &m[j])).collect()
            })
            .collect();
        Lattice::span(self.p, n, out)
    }

    /// Coordinates of `x` in the echelon basis, if `x ∈ L`.
    pub fn coordinates(&self, x: &[Q]) -> Option<Vec<Q>> {
        let mut x = x.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        for (row, &(c, _)) in self.rows.iter().zip(&self.pivots) {
            let k = &x[c] / &row[c];
            if !is_integral(&k, self.p) {
                return None;
            }
            for (xj, rj) in x.iter_mut().zip(row) {
                *xj -= &k * rj;
            }
            coords.push(k);
        }
        x.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains_vector(&self, x: &[Q]) -> bool {
        self.coordinates(x).is_some()
    }

    pub fn contains(&self, other: &Lattice) -> bool {
        other.rows.iter().all(|r| self.contains_vector(r))
    }

    /// `[self : sub]` for `sub ⊆ self` of equal rank: `p` to the valuation of
    /// the determinant of the coordinate matrix, i.e. the sum of its
    /// elementary divisor exponents.
    pub fn index_of(&self, sub: &Lattice) -> Result<Index> {
        if sub.rank() != self.rank() {
            return Err(Error::InfiniteIndex(format!(
                "rank {} sublattice of a rank {} lattice",
                sub.rank(),
                self.rank()
            )));
        }
        let coords: Vec<Vec<Q>> = sub
            .rows
            .iter()
            .map(|r| self.coordinates(r))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::NotASubgroup("lattice is not contained in the other".into()))?;
        let e: i64 = smith_valuations(&QMat::from_rows(coords), self.p).iter().sum();
        checked_pow(self.p, e as u64)
    }

    /// The same index read off the pivots, for cross-checking.
    pub fn index_by_pivots(&self, sub: &Lattice) -> i64 {
        sub.pivots.iter().map(|x| x.1).sum::<i64>() - self.pivots.iter().map(|x| x.1).sum::<i64>()
    }

    /// `L ∩ S` for the rational subspace `S` spanned by `basis`. Grows
    /// `L ∩ p^{-k}Λ_S` (with `Λ_S` the span of `basis`) until two consecutive
    /// values agree, which pins down the limit.
    pub fn meet_subspace(&self, basis: &[Vec<Q>]) -> Lattice {
        if basis.is_empty() {
            return Lattice::zero(self.p, self.dim);
        }
        let lambda = Lattice::span(self.p, self.dim, basis.to_vec());
        let mut prev = self.intersect(&lambda);
        let mut k = 1;
        loop {
            let cur = self.intersect(&lambda.scaled(-k));
            if cur == prev {
                return cur;
            }
            prev = cur;
            k += 1;
        }
    }

    /// The rational span, in reduced echelon form.
    pub fn subspace(&self) -> Vec<Vec<Q>> {
        if self.rows.is_empty() {
            return Vec::new();
        }
        let (r, piv) = QMat::from_rows(self.rows.clone()).rref();
        (0..piv.len()).map(|i| r.row(i).to_vec()).collect()
    }

    pub fn describe(&self) -> String {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| format!("({})", r.iter().map(format_rational).collect::<Vec<_>>().join(", ")))
            .collect();
        if rows.is_empty() {
            "0".to_string()
        } else {
            format!("span{{{}}}", rows.join(", "))
        }
    }
}

/// Row HNF over `ℤ_(p)`.
fn hnf(p: u64, dim: usize, gens: Vec<Vec<Q>>) -> (Vec<Vec<Q>>, Vec<(usize, i64)>) {
    let mut rows: Vec<Vec<Q>> = gens.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..dim {
        if r == rows.len() {
            break;
        }
        let best = (r..rows.len()).filter_map(|i| val(&rows[i][c], p).map(|v| (v, i))).min();
        let Some((v, i)) = best else { continue };
        rows.swap(r, i);
        let norm = p_pow(p, v) / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= &norm;
        }
        let (head, tail) = rows.split_at_mut(r + 1);
        let piv_row = &head[r];
        for row in tail.iter_mut() {
            if !row[c].is_zero() {
                let f = &row[c] / &piv_row[c];
                for (x, y) in row.iter_mut().zip(piv_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push((c, v));
        r += 1;
    }
    rows.truncate(r);
    // reduce entries above each pivot, pivots in increasing order
    for i in 0..rows.len() {
        for k in i + 1..rows.len() {
            let (c, v) = pivots[k];
            let t = rows[i][c].clone();
            let rep = canonical_rep(&t, p, v);
            if t != rep {
                let f = (&t - &rep) / p_pow(p, v);
                let (head, tail) = rows.split_at_mut(k);
                for (x, y) in head[i].iter_mut().zip(&tail[0]) {
                    *x -= &f * y;
                }
            }
        }
    }
    (rows, pivots)
}

/// Valuations of the elementary divisors of a square matrix over `ℤ_(p)`,
/// by full pivoting on the entry of least valuation.
pub fn smith_valuations(m: &QMat, p: u64) -> Vec<i64> {
    let mut a = m.clone();
    let n = a.rows().min(a.cols());
    let mut out = Vec::with_capacity(n);
    let mut rows: Vec<usize> = (0..a.rows()).collect();
    let mut cols: Vec<usize> = (0..a.cols()).collect();
    for _ in 0..n {
        let best = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| (i, j)))
            .filter_map(|(i, j)| val(&a[(i, j)], p).map(|v| (v, i, j)))
            .min();
        let Some((v, pi, pj)) = best else { break };
        out.push(v);
        rows.retain(|&i| i != pi);
        cols.retain(|&j| j != pj);
        let piv = a[(pi, pj)].clone();
        for &i in &rows {
            if !a[(i, pj)].is_zero() {
                let f = &a[(i, pj)] / &piv;
                for &j in &cols {
                    let t = &f * &a[(pi, j)];
                    a[(i, j)] -= t;
                }
                a[(i, pj)] = Q::zero();
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::arith::{q, qf};
    use proptest::prelude::*;

    fn lat(p: u64, rows: Vec<Vec<Q>>) -> Lattice {
        let n = rows[0].len();
        Lattice::span(p, n, rows)
    }

    #[test]
    fn index_examples() {
        let p = 3;
        let z = Lattice::standard(p, 1);
        assert_eq!(z.index_of(&z.scaled(3)).unwrap(), 27);
        let z2 = Lattice::standard(p, 2);
        assert_eq!(z2.index_of(&z2.scaled(1)).unwrap(), 9);
        let line = lat(p, vec![vec![q(1), q(0)]]);
        assert!(matches!(z2.index_of(&line), Err(Error::InfiniteIndex(_))));
        assert!(matches!(z2.scaled(1).index_of(&z2), Err(Error::NotASubgroup(_))));
    }

    #[test]
    fn intersection_example() {
        let p = 5;
        let a = Lattice::standard(p, 2);
        let b = lat(p, vec![vec![qf(1, 5), q(0)], vec![q(0), q(5)]]);
        let expected = lat(p, vec![vec![q(1), q(0)], vec![q(0), q(5)]]);
        assert_eq!(a.intersect(&b), expected);
    }

    #[test]
    fn image_of_inverse_p() {
        let p = 2;
        let a = QMat::diag(&[qf(1, 2)]);
        let z = Lattice::standard(p, 1);
        assert_eq!(z.image(&a), z.scaled(-1));
    }

    #[test]
    fn minus_stage_example() {
        let p = 7;
        let a = QMat::diag(&[qf(1, 7)]);
        let u = Lattice::standard(p, 1);
        let v1 = u.preimage_meet(&a, &u);
        let v2 = u.preimage_meet(&a, &v1);
        assert_eq!(v1, u.scaled(1));
        assert_eq!(v2, u.scaled(2));
    }

    #[test]
    fn prime_to_p_content_is_invisible() {
        let p = 5;
        assert_eq!(lat(p, vec![vec![q(3), q(6)]]), lat(p, vec![vec![q(1), q(2)]]));
        assert_eq!(lat(p, vec![vec![qf(2, 3), q(0)], vec![q(7), q(1)]]), Lattice::standard(p, 2));
    }

    #[test]
    fn subspace_meet() {
        let p = 3;
        let l = lat(p, vec![vec![q(1), q(1)], vec![q(0), q(9)]]);
        // L ∩ span(e₂) = 9ℤ₃ e₂
        let m = l.meet_subspace(&[vec![q(0), q(1)]]);
        assert_eq!(m, lat(p, vec![vec![q(0), q(9)]]));
        // L ∩ span(e₁ + e₂)
        let d = l.meet_subspace(&[vec![q(5), q(5)]]);
        assert_eq!(d, lat(p, vec![vec![q(1), q(1)]]));
    }

    fn lattice_strategy() -> impl Strategy<Value = Lattice> {
        prop::collection::vec((-12i64..12, prop::sample::select(vec![1i64, 2, 3, 4, 8, 9])), 9)
            .prop_map(|v| lat(2, v.chunks(3).map(|r| r.iter().map(|&(a, b)| qf(a, b)).collect()).collect()))
    }

    proptest! {
        #[test]
        fn hnf_is_canonical_under_row_operations(l in lattice_strategy(), k in -5i64..5) {
            // adding a multiple of one generator to another, and permuting, keeps the span
            let mut rows = l.basis().to_vec();
            if rows.len() >= 2 {
                let add: Vec<Q> = rows[1].iter().map(|x| x * q(k)).collect();
                for (a, b) in rows[0].iter_mut().zip(&add) {
                    *a += b;
                }
                rows.reverse();
            }
            prop_assert_eq!(Lattice::span(2, 3, rows), l);
        }

        #[test]
        fn index_is_multiplicative(l in lattice_strategy(), o in lattice_strategy(), a in 0i64..3) {
            prop_assume!(l.is_full() && o.is_full());
            let m = l.intersect(&o);
            let h = m.intersect(&l.scaled(a));
            let klh = l.index_of(&h).unwrap();
            prop_assert_eq!(klh, l.index_of(&m).unwrap() * m.index_of(&h).unwrap());
            prop_assert_eq!(l.index_of(&m).unwrap(), 2u128.pow(l.index_by_pivots(&m) as u32));
        }

        #[test]
        fn intersection_is_greatest_lower_bound(a in lattice_strategy(), b in lattice_strategy()) {
            let m = a.intersect(&b);
            prop_assert!(a.contains(&m) && b.contains(&m));
            let s = a.sum(&b);
            prop_assert!(s.contains(&a) && s.contains(&b));
            // modular identity for ranks: rank(a+b) + rank(a∩b) = rank a + rank b
            prop_assert_eq!(s.rank() + m.rank(), a.rank() + b.rank());
        }
    }
}
