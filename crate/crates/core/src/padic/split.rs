//! Splitting `ℚₚⁿ` into the sums of generalized eigenspaces with eigenvalues
//! of absolute value `< 1`, `= 1` and `> 1`.
//!
//! The blocks are kernels of the slope factors evaluated at `A`, computed at
//! a working precision `N`. With `P` the concatenated bases, `D = P⁻¹AP` is
//! computed exactly and is block diagonal up to entries of high valuation.
//! Claims that matter (the tidy lattice and its displacement) are re-checked
//! exactly against `A`, so a poor approximation can only lower the
//! certification flag, never produce a wrong certified answer.

use num_traits::{One, Zero};

use super::arith::{min_val, round_padic, val, Q};
use super::hensel::{slope_factors, SlopeFactors};
use super::lattice::Lattice;
use super::matrix::QMat;
use super::newton::{newton_polygon, NewtonPolygon};
use super::poly::QPoly;
use crate::dynamics::Index;
use crate::error::{Error, Result};

/// Precision doublings tried before giving up on certification.
pub const MAX_DOUBLINGS: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Block {
    Contracting,
    Neutral,
    Expanding,
}

impl Block {
    pub const ALL: [Block; 3] = [Block::Contracting, Block::Neutral, Block::Expanding];

    fn class(self) -> std::cmp::Ordering {
        match self {
            Block::Contracting => std::cmp::Ordering::Greater,
            Block::Neutral => std::cmp::Ordering::Equal,
            Block::Expanding => std::cmp::Ordering::Less,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SlopeSplit {
    pub prime: u64,
    pub precision: u32,
    /// Basis vectors of the three blocks, in [`Block::ALL`] order.
    pub bases: [Vec<Vec<Q>>; 3],
    /// `P`, the bases as columns.
    pub transform: QMat,
    /// `P⁻¹AP`, exact.
    pub block_form: QMat,
    /// Least valuation of an off-block entry of `block_form`; `None` when the
    /// split is exact.
    pub off_block: Option<i64>,
    pub certified: bool,
    /// Why certification failed, if it did.
    pub note: Option<String>,
}

impl SlopeSplit {
    pub fn basis(&self, b: Block) -> &[Vec<Q>] {
        &self.bases[b as usize]
    }

    pub fn dims(&self) -> [usize; 3] {
        [self.bases[0].len(), self.bases[1].len(), self.bases[2].len()]
    }

    fn offsets(&self) -> [usize; 4] {
        let d = self.dims();
        [0, d[0], d[0] + d[1], d[0] + d[1] + d[2]]
    }

    /// Diagonal block of `P⁻¹AP` for `b`.
    pub fn block(&self, b: Block) -> QMat {
        let o = self.offsets();
        let idx: Vec<usize> = (o[b as usize]..o[b as usize + 1]).collect();
        self.block_form.submatrix(&idx, &idx)
    }

    /// Whether the blocks are exactly `A`-invariant.
    pub fn is_exact(&self) -> bool {
        self.off_block.is_none()
    }

    /// Basis of a sum of blocks.
    pub fn span(&self, blocks: &[Block]) -> Vec<Vec<Q>> {
        blocks.iter().flat_map(|&b| self.basis(b).iter().cloned()).collect()
    }

    /// `L = P·(L_< ⊕ L_= ⊕ L_>)` with `L_<, L_=` generated under the block
    /// matrix and `L_>` under its inverse, so that each piece is carried into
    /// itself by the matrix (or its inverse) of its block.
    pub fn adapted_lattice(&self) -> Lattice {
        let p = self.prime;
        let n = self.transform.rows();
        let o = self.offsets();
        let mut gens = Vec::new();
        for b in Block::ALL {
            let k = self.dims()[b as usize];
            if k == 0 {
                continue;
            }
            let c = self.block(b);
            let c = match b {
                Block::Expanding => c.inverse().expect("expanding block is invertible"),
                _ => c,
            };
            let mut power = QMat::identity(k);
            let mut local = Vec::new();
            for _ in 0..k {
                local.extend(power.col_vecs());
                power = &c * &power;
            }
            for v in Lattice::span(p, k, local).basis() {
                let mut full = vec![Q::zero(); n];
                full[o[b as usize]..o[b as usize + 1]].clone_from_slice(v);
                gens.push(self.transform.apply(&full));
            }
        }
        Lattice::span(p, n, gens)
    }
}

/// `[A L : A L ∩ L]`.
pub fn displacement(a: &QMat, l: &Lattice) -> Result<Index> {
    let img = l.image(a);
    img.index_of(&img.intersect(l))
}

/// Starting precision: twice the valuation spread of `f` plus the dimension.
pub fn initial_precision(f: &QPoly, p: u64) -> u32 {
    let vals: Vec<i64> = f.coeffs().iter().filter_map(|c| val(c, p)).collect();
    let spread = vals.iter().max().unwrap_or(&0) - vals.iter().min().unwrap_or(&0);
    let n = f.degree().unwrap_or(0) as i64;
    (2 * (spread + n)).max(8) as u32
}

/// Split `ℚₚⁿ` for `A`, doubling the precision from `n0` until the split is
/// certified. After [`MAX_DOUBLINGS`] the last split obtained is returned
/// uncertified; if none could be formed at all the error is
/// `PrecisionEscalationFailure`.
pub fn slope_split(a: &QMat, p: u64, n0: Option<u32>, scale_exponent: u64) -> Result<SlopeSplit> {
    let f = a.charpoly();
    let np = newton_polygon(&f, p)?;
    let mut prec = n0.unwrap_or_else(|| initial_precision(&f, p));
    let mut last = None;
    for _ in 0..=MAX_DOUBLINGS {
        if let Some(split) = attempt(a, &f, &np, p, prec, scale_exponent) {
            if split.certified {
                return Ok(split);
            }
            last = Some(split);
        }
        prec = prec.saturating_mul(2);
    }
    last.ok_or(Error::PrecisionEscalationFailure(prec))
}

fn attempt(a: &QMat, f: &QPoly, np: &NewtonPolygon, p: u64, prec: u32, s_exp: u64) -> Option<SlopeSplit> {
    let n = a.rows();
    let factors: SlopeFactors = slope_factors(f, np, p, prec).ok()?;
    let counts = np.counts();
    let expected = [counts.contracting, counts.neutral, counts.expanding];
    let polys = [&factors.contracting, &factors.neutral, &factors.expanding];

    // minimal valuation over the powers of A that enter the evaluations
    let mut floor = 0i64;
    let mut power = QMat::identity(n);
    for _ in 0..n {
        power = &power * a;
        if let Some(v) = min_val(power.entries(), p) {
            floor = floor.min(v);
        }
    }
    let work = prec as i64 + floor;
    if work <= 0 {
        return None;
    }

    let mut bases: [Vec<Vec<Q>>; 3] = Default::default();
    for (i, poly) in polys.iter().enumerate() {
        if expected[i] == 0 {
            continue;
        }
        let m = poly.eval_matrix(a);
        let ker = padic_kernel(&m, p, work);
        if ker.len() != expected[i] {
            return None;
        }
        bases[i] = normalize_basis(ker, p, prec as i64);
    }
    let cols: Vec<Vec<Q>> = bases.iter().flatten().cloned().collect();
    let transform = QMat::from_cols(&cols, n);
    let inv = transform.inverse()?;
    let block_form = &(&inv * a) * &transform;

    let mut split = SlopeSplit {
        prime: p,
        precision: prec,
        bases,
        transform,
        block_form,
        off_block: None,
        certified: false,
        note: None,
    };
    let o = split.offsets();
    let block_of = |i: usize| (0..3).find(|&b| i < o[b + 1]).unwrap();
    split.off_block = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| block_of(i) != block_of(j))
        .filter_map(|(i, j)| val(&split.block_form[(i, j)], p))
        .min();

    let mut problems = Vec::new();
    if let Some(v) = split.off_block {
        if v < prec as i64 / 2 {
            problems.push(format!("off-block valuation {v} below {}", prec / 2));
        }
    }
    let det_val = val(&split.transform.det(), p).unwrap_or(i64::MAX);
    if det_val >= prec as i64 / 4 {
        problems.push(format!("basis determinant valuation {det_val} too close to precision"));
    }
    for b in Block::ALL {
        if split.dims()[b as usize] > 0 {
            let pure = newton_polygon(&split.block(b).charpoly(), p).map(|np| np.is_pure(b.class()));
            if pure != Ok(true) {
                problems.push(format!("{b:?} block is not slope-pure"));
            }
        }
    }
    if problems.is_empty() {
        let want = crate::dynamics::checked_pow(p, s_exp).ok();
        let got = displacement(a, &split.adapted_lattice()).ok();
        if want.is_none() || want != got {
            problems.push(format!("adapted lattice displacement {got:?}, expected {want:?}"));
        }
    }
    split.certified = problems.is_empty();
    split.note = (!problems.is_empty()).then(|| problems.join("; "));
    Some(split)
}

/// Right kernel of `m`, whose entries are known modulo `p^prec`. Full
/// pivoting on the entry of least valuation keeps every multiplier
/// integral, so absolute precision survives elimination; entries whose
/// valuation reaches `prec` count as zero.
pub fn padic_kernel(m: &QMat, p: u64, prec: i64) -> Vec<Vec<Q>> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    for i in 0..rows {
        for j in 0..cols {
            a[(i, j)] = round_padic(&a[(i, j)], p, prec);
        }
    }
    let mut free_rows: Vec<usize> = (0..rows).collect();
    let mut free_cols: Vec<usize> = (0..cols).collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    loop {
        let best = free_rows
            .iter()
            .flat_map(|&i| free_cols.iter().map(move |&j| (i, j)))
            .filter_map(|(i, j)| val(&a[(i, j)], p).map(|v| (v, i, j)))
            .min();
        let Some((v, pi, pj)) = best else { break };
        if v >= prec {
            break;
        }
        free_rows.retain(|&i| i != pi);
        free_cols.retain(|&j| j != pj);
        for &i in &free_rows {
            if a[(i, pj)].is_zero() {
                continue;
            }
            let f = &a[(i, pj)] / &a[(pi, pj)];
            for j in 0..cols {
                let t = &f * &a[(pi, j)];
                a[(i, j)] = round_padic(&(&a[(i, j)] - t), p, prec);
            }
        }
        pivots.push((pi, pj));
    }
    free_cols
        .iter()
        .map(|&fc| {
            let mut x = vec![Q::zero(); cols];
            x[fc] = Q::one();
            for &(pi, pj) in pivots.iter().rev() {
                let s = (0..cols).filter(|&j| j != pj).fold(Q::zero(), |acc, j| acc + &a[(pi, j)] * &x[j]);
                x[pj] = -s / &a[(pi, pj)];
            }
            x
        })
        .collect()
}

/// Reduce a basis so that a set of coordinates, chosen by least valuation,
/// reads as the identity; long entries are then rounded to `p^prec`.
pub fn normalize_basis(vs: Vec<Vec<Q>>, p: u64, prec: i64) -> Vec<Vec<Q>> {
    let mut rows = vs;
    let k = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    let mut used_cols: Vec<usize> = Vec::new();
    let mut order: Vec<(usize, usize)> = Vec::new();
    let mut remaining: Vec<usize> = (0..k).collect();
    while !remaining.is_empty() {
        let best = remaining
            .iter()
            .flat_map(|&i| (0..n).filter(|c| !used_cols.contains(c)).map(move |j| (i, j)))
            .filter_map(|(i, j)| val(&rows[i][j], p).map(|v| (v, i, j)))
            .min();
        let Some((_, pi, pj)) = best else { break };
        let inv = rows[pi][pj].recip();
        for x in rows[pi].iter_mut() {
            *x *= &inv;
        }
        let pivot = rows[pi].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != pi && !row[pj].is_zero() {
                let f = row[pj].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        remaining.retain(|&i| i != pi);
        used_cols.push(pj);
        order.push((pj, pi));
    }
    order.sort();
    order
        .into_iter()
        .map(|(_, i)| rows[i].iter().map(|x| if is_short(x) { x.clone() } else { round_padic(x, p, prec) }).collect())
        .collect()
}

fn is_short(x: &Q) -> bool {
    x.numer().bits() <= 64 && x.denom().bits() <= 64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::arith::{q, qf};

    fn split(a: &QMat, p: u64) -> SlopeSplit {
        let np = newton_polygon(&a.charpoly(), p).unwrap();
        slope_split(a, p, None, np.expansion_exponent()).unwrap()
    }

    fn unit(n: usize, i: usize) -> Vec<Q> {
        (0..n).map(|j| if i == j { q(1) } else { q(0) }).collect()
    }

    #[test]
    fn diagonal_is_exact() {
        for p in [2u64, 3, 5] {
            let pi = p as i64;
            let a = QMat::diag(&[qf(1, pi), q(1), q(pi)]);
            let s = split(&a, p);
            assert!(s.certified, "{:?}", s.note);
            assert!(s.is_exact());
            assert_eq!(s.basis(Block::Expanding), &[unit(3, 0)]);
            assert_eq!(s.basis(Block::Neutral), &[unit(3, 1)]);
            assert_eq!(s.basis(Block::Contracting), &[unit(3, 2)]);
            assert_eq!(s.adapted_lattice(), Lattice::standard(p, 3));
            assert_eq!(displacement(&a, &s.adapted_lattice()), Ok(p as Index));
        }
    }

    #[test]
    fn companion_blocks_are_eigenlines() {
        let p = 5;
        let a = QMat::companion(&QPoly::new(vec![q(5), q(-3), q(1)]));
        let s = split(&a, p);
        assert!(s.certified, "{:?}", s.note);
        assert_eq!(s.dims(), [1, 1, 0]);
        for b in [Block::Contracting, Block::Neutral] {
            let v = &s.basis(b)[0];
            let lambda = s.block(b)[(0, 0)].clone();
            let av = a.apply(v);
            for (x, y) in av.iter().zip(v) {
                let d = x - &lambda * y;
                assert!(d.is_zero() || val(&d, p).unwrap() >= s.precision as i64 / 2);
            }
            let expect = if b == Block::Contracting { 1 } else { 0 };
            assert_eq!(val(&lambda, p), Some(expect));
        }
    }

    #[test]
    fn unipotent_is_all_neutral() {
        let a = QMat::from_ints(&[&[1, 1], &[0, 1]]);
        let s = split(&a, 3);
        assert_eq!(s.dims(), [0, 2, 0]);
        assert!(s.certified);
    }

    #[test]
    fn singular_and_zero() {
        let p = 3;
        let a = QMat::from_rows(vec![vec![qf(1, 3), q(0)], vec![q(0), q(0)]]);
        let s = split(&a, p);
        assert_eq!(s.basis(Block::Contracting), &[unit(2, 1)]);
        assert_eq!(s.basis(Block::Expanding), &[unit(2, 0)]);
        assert!(s.certified, "{:?}", s.note);
        let z = split(&QMat::zeros(2, 2), p);
        assert_eq!(z.dims(), [2, 0, 0]);
        assert!(z.certified);
    }

    #[test]
    fn kernel_of_rank_one() {
        let m = QMat::from_ints(&[&[1, 2], &[2, 4]]);
        let k = padic_kernel(&m, 5, 10);
        assert_eq!(k.len(), 1);
        assert!(m.apply(&k[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn non_diagonal_three_slopes() {
        // conjugate of diag(1/p, 1 + p, p²) by an integral unimodular matrix
        for p in [2u64, 3, 5] {
            let pi = p as i64;
            let d = QMat::diag(&[qf(1, pi), q(1 + pi), q(pi * pi)]);
            let t = QMat::from_ints(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 2]]);
            let a = &(&t * &d) * &t.inverse().unwrap();
            let s = split(&a, p);
            assert!(s.certified, "{:?}", s.note);
            assert_eq!(s.dims(), [1, 1, 1]);
            assert_eq!(displacement(&a, &s.adapted_lattice()), Ok(p as Index));
        }
    }
}
