//! `ℚₚⁿ` with the linear endomorphism given by a rational matrix.

use std::sync::OnceLock;

use num_traits::{One, Zero};

use super::arith::{format_rational, is_prime, Q};
use super::lattice::Lattice;
use super::matrix::QMat;
use super::newton::{newton_polygon, NewtonPolygon, SlopeCounts};
use super::poly::QPoly;
use super::split::{displacement, padic_kernel, slope_split, Block, SlopeSplit};
use crate::dynamics::{self, checked_pow, Backend, Index, Method, ScaleResult, DEFAULT_L_MAX};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct PadicInstance {
    p: u64,
    a: QMat,
    charpoly: QPoly,
    newton: NewtonPolygon,
    precision: Option<u32>,
    /// Set for block-diagonal models whose blocks are known to be pure.
    known_blocks: Option<[usize; 3]>,
    split: OnceLock<Result<SlopeSplit>>,
}

/// The outcome of the tidying steps on a lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct PadicTidying {
    /// Stage `ℓ` at which `U_{-ℓ}` became tidy above.
    pub stage: usize,
    pub tidy_above: Lattice,
    /// `𝓛` for the tidy-above stage, a lattice in the Levi subspace.
    pub levi: Lattice,
    pub result: Lattice,
    pub displacement: Index,
}

/// Subspace data of the decomposition, as bases of rational vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct PadicDecomposition {
    pub con: Vec<Vec<Q>>,
    pub lev: Vec<Vec<Q>>,
    pub con_minus: Vec<Vec<Q>>,
    pub par: Vec<Vec<Q>>,
    pub par_minus: Vec<Vec<Q>>,
    /// Whether the bases span exactly invariant subspaces (otherwise they
    /// approximate them to `precision`).
    pub exact: bool,
    pub certified: bool,
    pub precision: u32,
}

impl PadicInstance {
    pub fn new(p: u64, a: QMat) -> Result<PadicInstance> {
        if !is_prime(p) {
            return Err(Error::UnsupportedInstance(format!("{p} is not prime")));
        }
        if !a.is_square() || a.rows() == 0 {
            return Err(Error::UnsupportedInstance("matrix must be square and nonempty".into()));
        }
        let charpoly = a.charpoly();
        let newton = newton_polygon(&charpoly, p)?;
        Ok(PadicInstance { p, a, charpoly, newton, precision: None, known_blocks: None, split: OnceLock::new() })
    }

    /// Starting precision for the slope split.
    pub fn with_precision(mut self, n0: u32) -> PadicInstance {
        self.precision = Some(n0);
        self.split = OnceLock::new();
        self
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    pub fn matrix(&self) -> &QMat {
        &self.a
    }

    pub fn charpoly(&self) -> &QPoly {
        &self.charpoly
    }

    pub fn newton(&self) -> &NewtonPolygon {
        &self.newton
    }

    pub fn slope_counts(&self) -> SlopeCounts {
        self.newton.counts()
    }

    pub fn scale_exponent(&self) -> u64 {
        self.newton.expansion_exponent()
    }

    /// `p^e` with `e` the total negative root valuation.
    pub fn scale_value(&self) -> Result<Index> {
        checked_pow(self.p, self.scale_exponent())
    }

    pub fn inverse(&self) -> Option<PadicInstance> {
        self.a.inverse().and_then(|b| PadicInstance::new(self.p, b).ok())
    }

    pub fn standard(&self) -> Lattice {
        Lattice::standard(self.p, self.dim())
    }

    pub fn split(&self) -> Result<&SlopeSplit> {
        self.split
            .get_or_init(|| match self.known_blocks {
                Some(dims) => Ok(coordinate_split(self.p, &self.a, dims)),
                None => slope_split(&self.a, self.p, self.precision, self.scale_exponent()),
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn is_certified(&self) -> bool {
        self.split().is_ok_and(|s| s.certified)
    }

    pub fn displacement(&self, l: &Lattice) -> Result<Index> {
        displacement(&self.a, l)
    }

    /// The slope-adapted lattice and its displacement, if the split is
    /// certified.
    pub fn adapted_tidy_lattice(&self) -> Result<(Lattice, Index)> {
        let s = self.split()?;
        if !s.certified {
            return Err(Error::NotComputable(format!(
                "slope split not certified: {}",
                s.note.as_deref().unwrap_or("unknown")
            )));
        }
        let l = s.adapted_lattice();
        let d = self.displacement(&l)?;
        Ok((l, d))
    }

    /// Displacement indices of the minus stages of `ℤₚⁿ`, `ℓ = 0..=budget`.
    pub fn stage_displacements(&self, budget: usize) -> Result<Vec<Index>> {
        Ok(dynamics::minus_trace(self, &self.standard(), budget)?.into_iter().map(|r| r.displacement).collect())
    }

    /// `blockdiag(C_<, C_=, C_>)` from the split, as an instance whose blocks
    /// are coordinate subspaces. It agrees with `P⁻¹AP` up to the off-block
    /// error of the split and equals it when the split is exact.
    pub fn block_model(&self) -> Result<PadicInstance> {
        let s = self.split()?;
        let blocks: Vec<QMat> = Block::ALL.iter().map(|&b| s.block(b)).collect();
        let m = QMat::block_diag(&blocks.iter().collect::<Vec<_>>());
        let mut inst = PadicInstance::new(self.p, m)?;
        inst.known_blocks = Some(s.dims());
        Ok(inst)
    }

    pub fn decompose(&self) -> Result<PadicDecomposition> {
        let s = self.split()?;
        use Block::*;
        Ok(PadicDecomposition {
            con: s.span(&[Contracting]),
            lev: s.span(&[Neutral]),
            con_minus: s.span(&[Expanding]),
            par: s.span(&[Contracting, Neutral]),
            par_minus: s.span(&[Neutral, Expanding]),
            exact: s.is_exact(),
            certified: s.certified,
            precision: s.precision,
        })
    }

    /// `A(H) ⊆ H`, exactly.
    pub fn is_invariant(&self, h: &[Vec<Q>]) -> bool {
        let base = rank(h);
        h.iter().all(|v| {
            let mut w = h.to_vec();
            w.push(self.a.apply(v));
            rank(&w) == base
        })
    }

    /// `A(H) = H`, exactly.
    pub fn is_stable(&self, h: &[Vec<Q>]) -> bool {
        self.is_invariant(h) && rank(&h.iter().map(|v| self.a.apply(v)).collect::<Vec<_>>()) == rank(h)
    }

    /// `α|_H` in the reduced echelon basis of `H`.
    pub fn restrict(&self, h: &[Vec<Q>]) -> Result<PadicInstance> {
        if !self.is_invariant(h) {
            return Err(Error::HypothesisNotInvariant);
        }
        let basis = echelon(h);
        if basis.is_empty() {
            return Err(Error::UnsupportedInstance("restriction to the trivial subspace".into()));
        }
        let bm = QMat::from_cols(&basis, self.dim());
        let cols: Vec<Vec<Q>> = basis.iter().map(|v| bm.solve(&self.a.apply(v)).expect("invariant subspace")).collect();
        PadicInstance::new(self.p, QMat::from_cols(&cols, basis.len()))
    }

    /// The induced map on `ℚₚⁿ/H`, in the basis given by the standard
    /// vectors outside the pivot columns of `H`.
    pub fn quotient(&self, h: &[Vec<Q>]) -> Result<PadicInstance> {
        if !self.is_invariant(h) {
            return Err(Error::HypothesisNotInvariant);
        }
        let n = self.dim();
        let basis = echelon(h);
        let k = basis.len();
        if k == n {
            return Err(Error::UnsupportedInstance("quotient by the whole space".into()));
        }
        let t = QMat::from_cols(&[basis, complement(h, n)].concat(), n);
        let conj = &(&t.inverse().expect("basis") * &self.a) * &t;
        let idx: Vec<usize> = (k..n).collect();
        PadicInstance::new(self.p, conj.submatrix(&idx, &idx))
    }

    /// The tidying steps. In `ℚₚⁿ` a lattice that is tidy above is already
    /// tidy, since `con(α)` is a closed subspace; the first tidy-above stage
    /// therefore already is the answer and `𝓛` lies inside it.
    pub fn tidying(&self, u: &Lattice, l_max: usize) -> Result<PadicTidying> {
        let (v, stage) = dynamics::tidy_above(self, u, l_max)?;
        let levi = self.core_part(&v)?;
        let result = v.sum(&levi);
        let displacement = self.displacement(&result)?;
        if displacement != self.scale_value()? {
            return Err(Error::NotComputable("tidying result failed the displacement check".into()));
        }
        Ok(PadicTidying { stage, tidy_above: v, levi, result, displacement })
    }

    /// Whether `Aⁿx → 0` in `ℚₚⁿ/H`. The sequence `π(Aⁿx)` satisfies a
    /// minimal linear recurrence whose roots all genuinely occur, so it
    /// tends to zero exactly when all roots have positive valuation.
    pub fn converges_mod(&self, x: &[Q], h: &[Vec<Q>]) -> Result<bool> {
        let q = self.recurrence_mod(x, h)?;
        let np = newton_polygon(&q, self.p)?;
        let c = np.counts();
        Ok(c.neutral == 0 && c.expanding == 0)
    }

    /// Minimal recurrence polynomial of `n ↦ Aⁿx + H`.
    pub fn recurrence_mod(&self, x: &[Q], h: &[Vec<Q>]) -> Result<QPoly> {
        if x.len() != self.dim() {
            return Err(Error::UndecidableInput("vector has the wrong length".into()));
        }
        let mut krylov: Vec<Vec<Q>> = Vec::new();
        let mut v = x.to_vec();
        while v.iter().any(|c| !c.is_zero()) {
            let mut w = krylov.clone();
            w.push(v.clone());
            if rank(&w) == krylov.len() {
                break;
            }
            krylov.push(v.clone());
            v = self.a.apply(&v);
        }
        // largest A-invariant subspace of the Krylov space inside H
        let mut t = intersect(&krylov, h);
        loop {
            let next: Vec<Vec<Q>> = preimage_within(&self.a, &t);
            if rank(&next) == rank(&t) {
                break;
            }
            t = next;
        }
        let span = t;
        let mut v = x.to_vec();
        let mut powers: Vec<Vec<Q>> = Vec::new();
        loop {
            let m = QMat::from_cols(&[powers.clone(), span.clone()].concat(), self.dim());
            if let Some(c) = m.solve(&v) {
                let mut coeffs: Vec<Q> = c[..powers.len()].iter().map(|z| -z.clone()).collect();
                coeffs.push(Q::one());
                return Ok(QPoly::new(coeffs));
            }
            powers.push(v.clone());
            v = self.a.apply(&v);
        }
    }
}

/// Split data for a block-diagonal matrix whose blocks are already pure.
fn coordinate_split(p: u64, a: &QMat, dims: [usize; 3]) -> SlopeSplit {
    let n = a.rows();
    let unit = |i: usize| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect::<Vec<Q>>();
    let mut start = 0;
    let bases: [Vec<Vec<Q>>; 3] = dims.map(|d| {
        let b: Vec<Vec<Q>> = (start..start + d).map(unit).collect();
        start += d;
        b
    });
    let mut s = SlopeSplit {
        prime: p,
        precision: 0,
        bases,
        transform: QMat::identity(n),
        block_form: a.clone(),
        off_block: None,
        certified: true,
        note: None,
    };
    for b in Block::ALL {
        if s.dims()[b as usize] > 0 {
            let ok = newton_polygon(&s.block(b).charpoly(), p).is_ok_and(|np| {
                let c = np.counts();
                match b {
                    Block::Contracting => c.neutral == 0 && c.expanding == 0,
                    Block::Neutral => c.contracting == 0 && c.expanding == 0,
                    Block::Expanding => c.contracting == 0 && c.neutral == 0,
                }
            });
            if !ok {
                s.certified = false;
                s.note = Some(format!("{b:?} block is not slope-pure"));
            }
        }
    }
    s
}

impl Backend for PadicInstance {
    type Subgroup = Lattice;

    fn image(&self, k: &Lattice) -> Lattice {
        k.image(&self.a)
    }

    fn preimage_meet(&self, target: &Lattice, within: &Lattice) -> Lattice {
        within.preimage_meet(&self.a, target)
    }

    fn meet(&self, a: &Lattice, b: &Lattice) -> Lattice {
        a.intersect(b)
    }

    fn contains(&self, big: &Lattice, small: &Lattice) -> bool {
        big.contains(small)
    }

    fn index(&self, k: &Lattice, h: &Lattice) -> Result<Index> {
        k.index_of(h)
    }

    /// For vector groups `con(α)` is closed, so tidy above and tidy agree
    /// and the exact minimality test decides both.
    fn is_tidy_above(&self, v: &Lattice) -> Result<bool> {
        if !v.is_full() {
            return Err(Error::NotASubgroup("lattice is not open".into()));
        }
        Ok(self.displacement(v)? == self.scale_value()?)
    }

    fn scale(&self) -> Result<ScaleResult<Lattice>> {
        let value = self.scale_value()?;
        if let Ok((tidy, displacement)) = self.adapted_tidy_lattice() {
            if displacement == value {
                return Ok(ScaleResult { value, tidy, displacement, method: Method::NewtonPolygon });
            }
        }
        let u = self.standard();
        let mut v = u.clone();
        for l in 0..=DEFAULT_L_MAX {
            if l > 0 {
                v = self.preimage_meet(&v, &u);
            }
            let d = self.displacement(&v)?;
            if d == value {
                return Ok(ScaleResult { value, tidy: v, displacement: d, method: Method::StageStabilization });
            }
        }
        Err(Error::PrecisionEscalationFailure(self.split().map(|s| s.precision).unwrap_or(0)))
    }

    /// `K₊ ∩ K₋` lies in the Levi subspace; it is the largest sublattice of
    /// `K ∩ lev` carried onto itself by the Levi block, computed in the block
    /// model and mapped back.
    fn core_part(&self, k: &Lattice) -> Result<Lattice> {
        let s = self.split()?;
        let [d0, d1, _] = s.dims();
        let n = self.dim();
        if d1 == 0 {
            return Ok(Lattice::zero(self.p, n));
        }
        let pinv = s.transform.inverse().expect("split basis");
        let local = k.image(&pinv);
        let unit = |i: usize| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect::<Vec<Q>>();
        let lev: Vec<Vec<Q>> = (d0..d0 + d1).map(unit).collect();
        let c = self.block_model()?;
        let start = local.meet_subspace(&lev);
        let core = dynamics::stabilize(
            |w: &Lattice| {
                let fwd = w.image(c.matrix());
                let back = w.preimage_meet(c.matrix(), w);
                w.intersect(&fwd).intersect(&back)
            },
            start,
            256,
        )
        .ok_or_else(|| Error::NotComputable("Levi core does not stabilise".into()))?;
        Ok(core.image(&s.transform))
    }
}

/// Rank over `ℚ`.
pub fn rank(vs: &[Vec<Q>]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    QMat::from_rows(vs.to_vec()).rank()
}

/// Reduced echelon basis of the span.
pub fn echelon(vs: &[Vec<Q>]) -> Vec<Vec<Q>> {
    if vs.is_empty() {
        return Vec::new();
    }
    let (r, piv) = QMat::from_rows(vs.to_vec()).rref();
    (0..piv.len()).map(|i| r.row(i).to_vec()).collect()
}

/// Standard vectors completing an echelon basis of `span(h)`.
pub fn complement(h: &[Vec<Q>], n: usize) -> Vec<Vec<Q>> {
    let piv = if h.is_empty() { Vec::new() } else { QMat::from_rows(h.to_vec()).rref().1 };
    (0..n)
        .filter(|c| !piv.contains(c))
        .map(|c| (0..n).map(|j| if j == c { Q::one() } else { Q::zero() }).collect())
        .collect()
}

/// Basis of `span(a) ∩ span(b)`.
pub fn intersect(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let n = a[0].len();
    let neg_b: Vec<Vec<Q>> = b.iter().map(|v| v.iter().map(|x| -x.clone()).collect()).collect();
    let m = QMat::from_cols(&[a.to_vec(), neg_b].concat(), n);
    let out: Vec<Vec<Q>> = m
        .kernel()
        .into_iter()
        .map(|c| (0..n).map(|j| a.iter().zip(&c).fold(Q::zero(), |acc, (v, x)| acc + x * &v[j])).collect())
        .collect();
    echelon(&out)
}

/// Basis of `{w ∈ span(t) : Aw ∈ span(t)}`.
fn preimage_within(a: &QMat, t: &[Vec<Q>]) -> Vec<Vec<Q>> {
    if t.is_empty() {
        return Vec::new();
    }
    let n = t[0].len();
    let images: Vec<Vec<Q>> = t.iter().map(|v| a.apply(v)).collect();
    // coefficient vectors c with Σ cᵢ A tᵢ ∈ span(t)
    let neg_t: Vec<Vec<Q>> = t.iter().map(|v| v.iter().map(|x| -x.clone()).collect()).collect();
    let m = QMat::from_cols(&[images, neg_t].concat(), n);
    let k = t.len();
    let out: Vec<Vec<Q>> = m
        .kernel()
        .into_iter()
        .map(|c| (0..n).map(|j| t.iter().zip(&c[..k]).fold(Q::zero(), |acc, (v, x)| acc + x * &v[j])).collect())
        .collect();
    echelon(&out)
}

/// Rank at `p`-adic precision `prec`.
pub fn padic_rank(vs: &[Vec<Q>], p: u64, prec: i64) -> usize {
    if vs.is_empty() {
        return 0;
    }
    let m = QMat::from_cols(vs, vs[0].len());
    vs.len() - padic_kernel(&m, p, prec).len()
}

pub fn describe_vectors(vs: &[Vec<Q>]) -> String {
    let parts: Vec<String> =
        vs.iter().map(|v| format!("({})", v.iter().map(format_rational).collect::<Vec<_>>().join(", "))).collect();
    format!("span{{{}}}", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::arith::{q, qf};

    fn inst(p: u64, m: QMat) -> PadicInstance {
        PadicInstance::new(p, m).unwrap()
    }

    fn unit(n: usize, i: usize) -> Vec<Q> {
        (0..n).map(|j| if i == j { q(1) } else { q(0) }).collect()
    }

    fn companion() -> QMat {
        QMat::companion(&QPoly::new(vec![q(5), q(-3), q(1)]))
    }

    #[test]
    fn named_scales() {
        for p in [2u64, 3, 5] {
            let pi = p as i64;
            let one = inst(p, QMat::diag(&[qf(1, pi)]));
            assert_eq!(one.scale().unwrap().value, p as Index);
            let two = inst(p, QMat::diag(&[qf(1, pi), qf(1, pi * pi)]));
            let r = two.scale().unwrap();
            assert_eq!(r.value, (p * p * p) as Index);
            assert_eq!(r.displacement, r.value);
            assert_eq!(r.method, Method::NewtonPolygon);
        }
        let c = inst(5, companion());
        assert_eq!(c.scale().unwrap().value, 1);
        let ci = c.inverse().unwrap();
        let r = ci.scale().unwrap();
        assert_eq!((r.value, r.displacement), (5, 5));
        assert_eq!(inst(3, QMat::identity(3)).scale().unwrap().value, 1);
    }

    #[test]
    fn core_examples() {
        // α(x) = x/p contracts U = ℤₚ under preimages
        let p = 3;
        let a = inst(p, QMat::diag(&[qf(1, 3)]));
        let u = Lattice::standard(p, 1);
        assert_eq!(dynamics::minus_stage(&a, &u, 2), Lattice::scaled_standard(p, 1, 2));
        assert_eq!(dynamics::plus_stage(&a, &u, 5), u);
        let b = inst(p, QMat::diag(&[q(3)]));
        assert_eq!(dynamics::plus_stage(&b, &u, 3), Lattice::scaled_standard(p, 1, 3));
        let d = inst(p, QMat::diag(&[qf(1, 3), q(1)]));
        let core = d.core_part(&Lattice::standard(p, 2)).unwrap();
        assert_eq!(core, Lattice::span(p, 2, vec![unit(2, 1)]));
    }

    #[test]
    fn index_examples() {
        let p = 5;
        let z = Lattice::standard(p, 1);
        assert_eq!(z.index_of(&z.scaled(3)), Ok(125));
        let z2 = Lattice::standard(p, 2);
        assert!(matches!(z2.index_of(&Lattice::span(p, 2, vec![unit(2, 0)])), Err(Error::InfiniteIndex(_))));
        let a = inst(p, QMat::diag(&[qf(1, 5)]));
        assert_eq!(a.displacement(&z), Ok(5));
    }

    #[test]
    fn tidy_above_companion() {
        let c = inst(5, companion());
        let (v, l) = dynamics::tidy_above(&c, &c.standard(), 4).unwrap();
        assert!(l <= 4);
        assert_eq!(c.displacement(&v), Ok(1));
    }

    #[test]
    fn decompose_examples() {
        for p in [2u64, 3, 5] {
            let pi = p as i64;
            let d = inst(p, QMat::diag(&[qf(1, pi), q(1), q(pi)])).decompose().unwrap();
            assert!(d.exact && d.certified);
            assert_eq!(d.con, vec![unit(3, 2)]);
            assert_eq!(d.lev, vec![unit(3, 1)]);
            assert_eq!(d.con_minus, vec![unit(3, 0)]);
            assert_eq!(echelon(&d.par), vec![unit(3, 1), unit(3, 2)]);
            assert_eq!(echelon(&d.par_minus), vec![unit(3, 0), unit(3, 1)]);

            let s = inst(p, QMat::from_rows(vec![vec![qf(1, pi), q(0)], vec![q(0), q(0)]]));
            let d = s.decompose().unwrap();
            assert_eq!(d.con, vec![unit(2, 1)]);
            assert_eq!(d.con_minus, vec![unit(2, 0)]);
            assert_eq!(d.par_minus, vec![unit(2, 0)]);

            let z = inst(p, QMat::zeros(2, 2)).decompose().unwrap();
            assert_eq!(rank(&z.con), 2);
            assert!(z.lev.is_empty() && z.con_minus.is_empty());
        }
        let nil = inst(2, QMat::from_ints(&[&[0, 1], &[0, 0]])).decompose().unwrap();
        assert_eq!(rank(&nil.con), 2);
        assert!(nil.lev.is_empty());
    }

    #[test]
    fn tidying_examples() {
        for p in [2u64, 3, 5] {
            let pi = p as i64;
            let a = inst(p, QMat::diag(&[q(pi), q(1), qf(1, pi)]));
            let t = a.tidying(&a.standard(), 8).unwrap();
            assert_eq!(t.result, a.standard());
            assert_eq!(t.displacement, p as Index);
        }
        let m = inst(3, QMat::from_rows(vec![vec![qf(1, 3), q(1)], vec![q(0), q(3)]]));
        let u = Lattice::span(3, 2, vec![vec![q(1), q(0)], vec![qf(1, 9), q(1)]]);
        let t = m.tidying(&u, 16).unwrap();
        assert_eq!(t.displacement, 3);
    }

    #[test]
    fn convergence_mod_subspaces() {
        let p = 5;
        let up = inst(p, QMat::diag(&[q(5)]));
        assert!(up.converges_mod(&[q(1)], &[]).unwrap());
        let down = inst(p, QMat::diag(&[qf(1, 5)]));
        assert!(!down.converges_mod(&[q(1)], &[]).unwrap());
        let mixed = inst(p, QMat::diag(&[qf(1, 5), q(5)]));
        let v = vec![q(1), q(1)];
        assert!(!mixed.converges_mod(&v, &[]).unwrap());
        assert!(mixed.converges_mod(&v, &[unit(2, 0)]).unwrap());
        let rot = inst(p, QMat::from_ints(&[&[0, 1], &[1, 0]]));
        assert!(!rot.converges_mod(&[q(1), q(0)], &[]).unwrap());
        assert!(rot.converges_mod(&[q(1), q(-1)], &[vec![q(1), q(-1)]]).unwrap());
    }

    #[test]
    fn restriction_and_quotient() {
        let p = 3;
        let a = inst(p, QMat::diag(&[qf(1, 3), qf(1, 3)]));
        let h = vec![unit(2, 0)];
        assert_eq!(a.restrict(&h).unwrap().scale_value(), Ok(3));
        assert_eq!(a.quotient(&h).unwrap().scale_value(), Ok(3));
        assert_eq!(a.scale_value(), Ok(9));
        let b = inst(p, QMat::from_ints(&[&[1, 1], &[0, 1]]));
        assert!(b.is_invariant(&[unit(2, 0)]));
        assert!(!b.is_invariant(&[unit(2, 1)]));
        assert_eq!(b.restrict(&[unit(2, 1)]).unwrap_err(), Error::HypothesisNotInvariant);
    }

    #[test]
    fn conjugated_split_has_exact_certificate() {
        let p = 2;
        let d = QMat::diag(&[qf(1, 2), q(3), q(4)]);
        let t = QMat::from_ints(&[&[1, 2, 0], &[0, 1, 1], &[1, 0, 3]]);
        let a = inst(p, &(&t * &d) * &t.inverse().unwrap());
        let (l, disp) = a.adapted_tidy_lattice().unwrap();
        assert_eq!(disp, 2);
        assert!(a.is_tidy_above(&l).unwrap());
        let core = a.core_part(&l).unwrap();
        assert_eq!(core.rank(), 1);
    }
}
