//! Claims on `ℚₚⁿ`. Subspace identities are checked by dimension counts
//! from two independent routes (Newton polygons of restrictions and
//! quotients against ranks of split bases) plus exact membership witnesses.
//! Lattice claims run on the slope-adapted block model, where the three
//! subspaces are coordinate blocks and every lattice operation is exact.

use std::time::Instant;

use num_traits::{One, Zero};

use super::report::{fold, Outcome, SkipReason, Tag, VerificationReport};
use crate::dynamics::{self, Backend, Index};
use crate::error::{Error, Result};
use crate::padic::arith::{format_rational, Q};
use crate::padic::instance::{describe_vectors, echelon, padic_rank, rank};
use crate::padic::{Block, Lattice, PadicInstance, QMat};

const SHRINK_BUDGET: usize = 64;
const STAB_BUDGET: usize = 256;

fn unit(n: usize, i: usize) -> Vec<Q> {
    (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()
}

/// The block model `B` with its coordinate blocks.
struct Blocks {
    b: PadicInstance,
    p: u64,
    n: usize,
    ranges: [std::ops::Range<usize>; 3],
    scale: Index,
}

impl Blocks {
    fn new(b: PadicInstance, dims: [usize; 3]) -> Result<Blocks> {
        let scale = b.scale_value()?;
        let ranges = [0..dims[0], dims[0]..dims[0] + dims[1], dims[0] + dims[1]..dims[0] + dims[1] + dims[2]];
        Ok(Blocks { p: b.prime(), n: b.dim(), b, ranges, scale })
    }

    fn m(&self) -> &QMat {
        self.b.matrix()
    }

    fn dim(&self, k: usize) -> usize {
        self.ranges[k].len()
    }

    fn coords(&self, k: usize) -> Vec<Vec<Q>> {
        self.ranges[k].clone().map(|i| unit(self.n, i)).collect()
    }

    fn part(&self, v: &Lattice, k: usize) -> Lattice {
        v.meet_subspace(&self.coords(k))
    }

    fn parts(&self, v: &Lattice) -> [Lattice; 3] {
        [0, 1, 2].map(|k| self.part(v, k))
    }

    fn zero(&self) -> Lattice {
        Lattice::zero(self.p, self.n)
    }

    fn is_split(&self, v: &Lattice) -> bool {
        let [c, l, e] = self.parts(v);
        c.sum(&l).sum(&e) == *v
    }

    /// `B` on block `k`, zero elsewhere; inverted for the expanding block.
    fn block_map(&self, k: usize, invert: bool) -> Option<QMat> {
        let r = self.ranges[k].clone();
        let idx: Vec<usize> = r.clone().collect();
        let mut blk = self.m().submatrix(&idx, &idx);
        if invert {
            blk = blk.inverse()?;
        }
        let mut out = QMat::zeros(self.n, self.n);
        let mut rows = out.row_vecs();
        for (a, i) in r.clone().enumerate() {
            for (b, j) in r.clone().enumerate() {
                rows[i][j] = blk.row(a)[b].clone();
            }
        }
        out = QMat::from_rows(rows);
        Some(out)
    }

    /// `Mᴺ(V) ⊆ pV` for some `N`: then `⋂ Mⁿ(V) = 0`.
    fn shrinks(&self, m: &QMat, v: &Lattice) -> bool {
        if v.rank() == 0 {
            return true;
        }
        let target = v.scaled(1);
        let mut w = v.clone();
        for _ in 0..SHRINK_BUDGET {
            w = w.image(m);
            if target.contains(&w) {
                return true;
            }
        }
        false
    }

    fn down(&self, w: &Lattice) -> Option<Lattice> {
        dynamics::stabilize(|x: &Lattice| x.preimage_meet(self.m(), x), w.clone(), STAB_BUDGET)
    }

    fn up(&self, w: &Lattice) -> Option<Lattice> {
        dynamics::stabilize(|x: &Lattice| x.intersect(&x.image(self.m())), w.clone(), STAB_BUDGET)
    }

    /// `V₋` and `V₊` of a split lattice, block by block. A trajectory of a
    /// split lattice under a block-diagonal map splits into trajectories of
    /// the parts; the contracting part has no nonzero regressive trajectory
    /// inside `V` and the expanding part no nonzero forward one, certified
    /// by `Mᴺ(V) ⊆ pV`.
    fn minus_plus(&self, v: &Lattice) -> Option<(Lattice, Lattice)> {
        if !self.is_split(v) {
            return None;
        }
        let [c, l, e] = self.parts(v);
        let e_dies = match self.block_map(2, true) {
            Some(inv) => self.shrinks(&inv, &e),
            None => e.rank() == 0,
        };
        let c_dies = self.shrinks(&self.block_map(0, false)?, &c);
        if !e_dies || !c_dies {
            return None;
        }
        let minus = self.down(&c)?.sum(&self.down(&l)?);
        let plus = self.up(&l)?.sum(&self.up(&e)?);
        Some((minus, plus))
    }

    fn charts(&self, v: &Lattice) -> bool {
        let [c, l, e] = self.parts(v);
        let m = self.m();
        self.is_split(v) && c.contains(&c.image(m)) && l.image(m) == l && e.image(m).contains(&e)
    }

    fn tidy(&self, v: &Lattice) -> Result<bool> {
        Ok(self.b.displacement(v)? == self.scale)
    }

    /// Per-block lattice choices: adapted, coordinate, skewed.
    fn block_options(&self, k: usize, adapted: &Lattice) -> Vec<Lattice> {
        let d = self.dim(k);
        if d == 0 {
            return vec![self.zero()];
        }
        let mut out = vec![self.part(adapted, k), Lattice::span(self.p, self.n, self.coords(k))];
        if d >= 2 {
            let mut gens = self.coords(k);
            let s = self.ranges[k].start;
            gens[0][s + 1] = Q::new(One::one(), (self.p as i64).into());
            out.push(Lattice::span(self.p, self.n, gens));
        }
        out.sort_by_key(|l| l.describe());
        out.dedup();
        out
    }

    fn split_candidates(&self, adapted: &Lattice) -> Vec<Lattice> {
        let opts: Vec<Vec<Lattice>> = (0..3).map(|k| self.block_options(k, adapted)).collect();
        let mut out = Vec::new();
        for c in &opts[0] {
            for l in &opts[1] {
                for e in &opts[2] {
                    out.push(c.sum(l).sum(e));
                }
            }
        }
        out.push(adapted.scaled(2));
        out
    }

    /// Lattices mixing two blocks, so not split.
    fn mixed_candidates(&self) -> Vec<Lattice> {
        let mut out = Vec::new();
        for a in 0..3 {
            for b in 0..3 {
                if a == b || self.dim(a) == 0 || self.dim(b) == 0 {
                    continue;
                }
                let (i, j) = (self.ranges[a].start, self.ranges[b].start);
                let mut gens: Vec<Vec<Q>> = (0..self.n).map(|t| unit(self.n, t)).collect();
                gens[i][j] = Q::new(One::one(), (self.p as i64).into());
                out.push(Lattice::span(self.p, self.n, gens));
            }
        }
        out
    }
}

struct Ctx<'a> {
    inst: &'a PadicInstance,
    scale: Index,
    prec: i64,
    exact: bool,
    certified: bool,
    con: Vec<Vec<Q>>,
    con_minus: Vec<Vec<Q>>,
    blocks: Option<Blocks>,
    adapted: Option<Lattice>,
}

impl Ctx<'_> {
    fn n(&self) -> usize {
        self.inst.dim()
    }

    fn p(&self) -> u64 {
        self.inst.prime()
    }

    fn rank_of(&self, vs: &[Vec<Q>]) -> usize {
        if self.exact {
            rank(vs)
        } else {
            padic_rank(vs, self.p(), self.prec)
        }
    }

    fn sub_scale(&self, h: &[Vec<Q>]) -> Result<Index> {
        if rank(h) == 0 {
            return Ok(1);
        }
        self.inst.restrict(h)?.scale_value()
    }

    fn quot_scale(&self, h: &[Vec<Q>]) -> Result<Index> {
        if rank(h) == self.n() {
            return Ok(1);
        }
        self.inst.quotient(h)?.scale_value()
    }

    fn quotient_counts(&self, h: &[Vec<Q>]) -> Result<[usize; 3]> {
        if rank(h) == self.n() {
            return Ok([0, 0, 0]);
        }
        let c = self.inst.quotient(h)?.slope_counts();
        Ok([c.contracting, c.neutral, c.expanding])
    }

    fn theorem_a(&self, h: &[Vec<Q>]) -> Result<Outcome> {
        if !self.inst.is_invariant(h) {
            return Ok(Outcome::skip(SkipReason::HypothesisNotInvariant, "A(H) ⊄ H"));
        }
        if !self.inst.is_stable(h) && rank(h) > 0 {
            return Ok(Outcome::skip(SkipReason::HypothesisNotStable, "A(H) ≠ H and H is not compact"));
        }
        if !self.certified {
            return Ok(Outcome::skip(SkipReason::UncertifiedSplit, "slope split not certified"));
        }
        let expected = rank(h) + self.quotient_counts(h)?[0];
        let both = [self.con.clone(), h.to_vec()].concat();
        let got = self.rank_of(&both);
        if got != expected {
            return Ok(Outcome::check(false, "", || format!("dim con(α,H) = {expected} but dim con(α)+H = {got}")));
        }
        for i in 0..self.n() {
            let e = unit(self.n(), i);
            let converges = self.inst.converges_mod(&e, h)?;
            let member = self.rank_of(&[both.clone(), vec![e]].concat()) == got;
            if converges != member {
                return Ok(Outcome::check(false, "", || {
                    format!("e{}: Aⁿx → 0 mod H is {converges}, membership in con(α)+H is {member}", i + 1)
                }));
            }
        }
        Ok(Outcome::Pass(format!("dim con(α,H) = dim con(α)+H = {got}; standard vectors agree")))
    }

    fn theorem_b(&self, h: &[Vec<Q>]) -> Result<Outcome> {
        if !self.inst.is_invariant(h) {
            return Ok(Outcome::skip(SkipReason::HypothesisNotInvariant, "A(H) ⊄ H"));
        }
        if !self.inst.is_stable(h) {
            return Ok(Outcome::skip(SkipReason::HypothesisNotStable, "A(H) ≠ H"));
        }
        if !self.certified {
            return Ok(Outcome::skip(SkipReason::UncertifiedSplit, "slope split not certified"));
        }
        let expected = rank(h) + self.quotient_counts(h)?[2];
        let both = [self.con_minus.clone(), h.to_vec()].concat();
        let got = self.rank_of(&both);
        if got != expected {
            return Ok(Outcome::check(false, "", || format!("dim con⁻(α,H) = {expected} but dim con⁻(α)+H = {got}")));
        }
        // with A invertible the regressive trajectory is A⁻ⁿx, unique
        let Some(inv) = self.inst.inverse() else {
            return Ok(Outcome::Pass(format!("dim con⁻(α,H) = dim con⁻(α)+H = {got}; A singular, no witnesses")));
        };
        for i in 0..self.n() {
            let e = unit(self.n(), i);
            let converges = inv.converges_mod(&e, h)?;
            let member = self.rank_of(&[both.clone(), vec![e]].concat()) == got;
            if converges != member {
                return Ok(Outcome::check(false, "", || {
                    format!("e{}: A⁻ⁿx → 0 mod H is {converges}, membership in con⁻(α)+H is {member}", i + 1)
                }));
            }
        }
        Ok(Outcome::Pass(format!("dim con⁻(α,H) = dim con⁻(α)+H = {got}; regressive trajectories A⁻ⁿeᵢ agree")))
    }

    /// A lattice of `H` tidy for `A|_H`, in ambient coordinates.
    fn tidy_in(&self, h: &[Vec<Q>]) -> Result<Lattice> {
        let basis = echelon(h);
        if basis.is_empty() {
            return Ok(Lattice::zero(self.p(), self.n()));
        }
        let r = self.inst.restrict(h)?;
        let w = r.scale()?.tidy;
        let gens = w
            .basis()
            .iter()
            .map(|c| {
                (0..self.n()).map(|j| c.iter().zip(&basis).fold(Q::zero(), |acc, (x, b)| acc + x * &b[j])).collect()
            })
            .collect();
        Ok(Lattice::span(self.p(), self.n(), gens))
    }

    fn theorem_c(&self, tag: Tag, h: &[Vec<Q>]) -> Result<Outcome> {
        if !self.inst.is_invariant(h) {
            return Ok(Outcome::skip(SkipReason::HypothesisNotInvariant, "A(H) ⊄ H"));
        }
        let s_g = self.scale;
        let s_h = self.sub_scale(h)?;
        match tag {
            Tag::Ca => {
                let Some(l) = &self.adapted else {
                    return Ok(Outcome::skip(SkipReason::UncertifiedSplit, "no adapted lattice"));
                };
                let w = self.tidy_in(h)?;
                let mut candidates = vec![l.clone()];
                candidates.extend((0..8).map(|k| l.scaled(k).sum(&w)));
                for u in &candidates {
                    let uh = u.meet_subspace(h);
                    if self.inst.displacement(u)? == s_g && self.inst.displacement(&uh)? == s_h {
                        return Ok(Outcome::check(
                            s_h <= s_g,
                            format!("s_H = {s_h} ≤ s_G = {s_g}; U = {}", u.describe()),
                            || format!("s_H = {s_h} > s_G = {s_g}"),
                        ));
                    }
                }
                Ok(Outcome::check(false, "", || "no candidate U tidy with U ∩ H tidy".into()))
            }
            Tag::Cb => {
                let s_q = self.quot_scale(h)?;
                Ok(Outcome::check(
                    s_g.is_multiple_of(s_h * s_q),
                    format!("s_H·s_G/H = {s_h}·{s_q} divides s_G = {s_g}"),
                    || format!("{s_h}·{s_q} ∤ {s_g}"),
                ))
            }
            _ => {
                let in_par_minus = rank(h) == 0 || self.inst.restrict(h)?.slope_counts().contracting == 0;
                if !in_par_minus {
                    return Ok(Outcome::skip(SkipReason::NotInAntiParabolic, "H ⊄ par⁻(α)"));
                }
                if !self.inst.is_stable(h) {
                    return Ok(Outcome::skip(SkipReason::HypothesisNotStable, "A(H) ≠ H"));
                }
                let s_q = self.quot_scale(h)?;
                Ok(Outcome::check(s_g == s_h * s_q, format!("s_H·s_G/H = {s_h}·{s_q} = s_G = {s_g}"), || {
                    format!("{s_h}·{s_q} ≠ {s_g}")
                }))
            }
        }
    }

    fn entropy(&self, h: &[Vec<Q>]) -> Result<Outcome> {
        if !self.inst.is_invariant(h) {
            return Ok(Outcome::skip(SkipReason::HypothesisNotInvariant, "A(H) ⊄ H"));
        }
        // con is a linear subspace of G, of H and of G/H, hence closed
        let (a, b) = (self.sub_scale(h)?, self.quot_scale(h)?);
        Ok(Outcome::check(a * b == self.scale, format!("ln {} = ln {a} + ln {b}", self.scale), || {
            format!("{} ≠ {a}·{b}", self.scale)
        }))
    }

    /// `pᵏL` is tidy for every `k`, so the nub lies in `⋂ pᵏL = 0`.
    fn small_tidy(&self) -> Result<Option<bool>> {
        let Some(l) = &self.adapted else { return Ok(None) };
        for k in 0..5 {
            if self.inst.displacement(&l.scaled(k))? != self.scale {
                return Ok(Some(false));
            }
        }
        Ok(Some(true))
    }

    fn theorem_d(&self) -> Result<Outcome> {
        let Some(small) = self.small_tidy()? else {
            return Ok(Outcome::skip(SkipReason::UncertifiedSplit, "no adapted lattice"));
        };
        // con is the span of the contracting block: a subspace, so closed
        let con_closed = true;
        Ok(Outcome::check(small == con_closed, "pᵏL tidy for k ≤ 4 so nub = {0}; con a closed subspace", || {
            "scaled adapted lattice not tidy".into()
        }))
    }

    fn theorem_e(&self) -> Result<Outcome> {
        let Some(bl) = &self.blocks else {
            return Ok(Outcome::skip(SkipReason::UncertifiedSplit, "slope split not certified"));
        };
        let sub = |ks: &[usize]| -> Result<Index> {
            let idx: Vec<usize> = ks.iter().flat_map(|&k| bl.ranges[k].clone()).collect();
            if idx.is_empty() {
                return Ok(1);
            }
            PadicInstance::new(self.p(), bl.m().submatrix(&idx, &idx))?.scale_value()
        };
        let on_con_minus = sub(&[2])?;
        let on_par_minus = sub(&[1, 2])?;
        let ok = on_con_minus == self.scale && on_par_minus == self.scale && bl.scale == self.scale;
        Ok(Outcome::check(ok, format!("s = s|con⁻ = s|par⁻ = {}", self.scale), || {
            format!("s = {}, s|con⁻ = {on_con_minus}, s|par⁻ = {on_par_minus}", self.scale)
        }))
    }

    fn theorem_f(&self, tag: Tag) -> Result<Outcome> {
        let (Some(bl), Some(_)) = (&self.blocks, &self.adapted) else {
            return Ok(Outcome::skip(SkipReason::UncertifiedSplit, "slope split not certified"));
        };
        if self.small_tidy()? != Some(true) {
            return Ok(Outcome::skip(SkipReason::NoSmallTidySubgroups, "no small tidy subgroups"));
        }
        let (adapted, _) = bl.b.adapted_tidy_lattice()?;
        let n = self.n();
        let m = bl.m();
        let which_block = |i: usize| (0..3).find(|&k| bl.ranges[k].contains(&i)).expect("covered");
        match tag {
            Tag::Fa => {
                let s = self.inst.split()?;
                let det = s.transform.det();
                let dims: usize = (0..3).map(|k| bl.dim(k)).sum();
                // con is exactly the span of the coordinates whose orbit tends to 0
                for i in 0..n {
                    let conv = bl.b.converges_mod(&unit(n, i), &[])?;
                    if conv != (which_block(i) == 0) {
                        return Ok(Outcome::check(false, "", || format!("coordinate {i} misclassified")));
                    }
                }
                Ok(Outcome::check(
                    !det.is_zero() && dims == n,
                    "con ⊕ lev ⊕ con⁻ = ℚₚⁿ, product map a linear bijection",
                    || "blocks do not span".into(),
                ))
            }
            Tag::Fb => {
                // par: bounded forward orbit, i.e. no root of negative valuation
                for i in 0..n {
                    let q = bl.b.recurrence_mod(&unit(n, i), &[])?;
                    let np = crate::padic::newton::newton_polygon(&q, self.p())?;
                    let bounded = np.counts().expanding == 0;
                    if bounded != (which_block(i) != 2) {
                        return Ok(Outcome::check(false, "", || format!("coordinate {i}: bounded orbit is {bounded}")));
                    }
                }
                // par⁻ ⊇ lev ⊕ con⁻: B⁻¹ on those blocks has no root of negative valuation
                let idx: Vec<usize> = bl.ranges[1].clone().chain(bl.ranges[2].clone()).collect();
                let back_bounded = idx.is_empty() || {
                    let sub = m.submatrix(&idx, &idx).inverse();
                    match sub {
                        Some(inv) => PadicInstance::new(self.p(), inv)?.slope_counts().expanding == 0,
                        None => false,
                    }
                };
                Ok(Outcome::check(back_bounded, "par = con ⊕ lev, par⁻ = con⁻ ⊕ lev (direct, abelian)", || {
                    "lev ⊕ con⁻ has unbounded regressive trajectories".into()
                }))
            }
            Tag::Fc => {
                let mut ok = true;
                for k in [1, 2] {
                    if bl.dim(k) > 0 {
                        let idx: Vec<usize> = bl.ranges[k].clone().collect();
                        ok &= !m.submatrix(&idx, &idx).det().is_zero();
                    }
                }
                Ok(Outcome::check(ok, "B invertible on lev and con⁻, hence on par⁻", || "singular block".into()))
            }
            Tag::Fd => {
                let mut items = Vec::new();
                for v in bl.split_candidates(&adapted) {
                    if !bl.tidy(&v)? {
                        continue;
                    }
                    let [c, l, e] = bl.parts(&v);
                    let o = match bl.minus_plus(&v) {
                        Some((vm, vp)) => Outcome::check(
                            vm == c.sum(&l) && vp == e.sum(&l),
                            "V₋ = (con∩V)+(lev∩V), V₊ = (con⁻∩V)+(lev∩V)",
                            || format!("V₋ = {}, V₊ = {}", vm.describe(), vp.describe()),
                        ),
                        None => Outcome::check(false, "", || "V₋/V₊ not certified".into()),
                    };
                    items.push((v.describe(), o));
                }
                Ok(fold(items))
            }
            Tag::Fe => {
                let mut items = Vec::new();
                let mut cands = bl.split_candidates(&adapted);
                cands.extend(bl.mixed_candidates());
                for v in cands {
                    let tidy = bl.tidy(&v)?;
                    let charts = bl.charts(&v);
                    items.push((
                        v.describe(),
                        Outcome::check(tidy == charts, "tidy ⇔ chart conditions", || {
                            format!("tidy = {tidy}, charts = {charts}")
                        }),
                    ));
                }
                Ok(fold(items))
            }
            Tag::Ff => {
                let w = bl.part(&adapted, 1);
                let mut ok = true;
                for k in 0..4 {
                    let wk = w.scaled(k);
                    ok &= wk.image(m) == wk;
                }
                Ok(Outcome::check(ok, format!("pᵏW stable for k ≤ 3, W = {}", w.describe()), || {
                    "scaled Levi lattice not stable".into()
                }))
            }
            _ => unreachable!(),
        }
    }

    fn when_tb(&self) -> Result<Outcome> {
        let (Some(bl), true) = (&self.blocks, self.adapted.is_some()) else {
            return Ok(Outcome::skip(SkipReason::UncertifiedSplit, "slope split not certified"));
        };
        let (adapted, _) = bl.b.adapted_tidy_lattice()?;
        let mut items = Vec::new();
        for v in bl.split_candidates(&adapted) {
            let o = match bl.minus_plus(&v) {
                Some((vm, vp)) if vm.sum(&vp) == v => {
                    // the nub is {0}, contained in every V
                    let tidy = bl.tidy(&v)?;
                    Outcome::check(tidy, "tidy above and nub ⊆ V, so tidy", || "tidy above but not tidy".into())
                }
                Some(_) => Outcome::skip(SkipReason::PreconditionViolated, "not tidy above"),
                None => Outcome::check(false, "", || "V₋/V₊ not certified".into()),
            };
            items.push((v.describe(), o));
        }
        Ok(fold(items))
    }

    fn good_prepar(&self) -> Result<Outcome> {
        let (Some(bl), true) = (&self.blocks, self.adapted.is_some()) else {
            return Ok(Outcome::skip(SkipReason::UncertifiedSplit, "slope split not certified"));
        };
        let (adapted, _) = bl.b.adapted_tidy_lattice()?;
        let m = bl.m();
        let mut items = Vec::new();
        for k in bl.split_candidates(&adapted) {
            let o = match bl.minus_plus(&k) {
                Some((km, kp)) => {
                    let core = km.intersect(&kp);
                    let ok = km.contains(&km.image(m))
                        && kp.image(m).contains(&kp)
                        && core.image(m) == core
                        && bl.b.core_part(&k)? == core;
                    Outcome::check(
                        ok,
                        "B(K₋) ⊆ K₋, K₊ ⊆ B(K₊), B(K₊∩K₋) = K₊∩K₋ = core",
                        || format!("K₋ = {}, K₊ = {}", km.describe(), kp.describe()),
                    )
                }
                None => Outcome::check(false, "", || "K₋/K₊ not certified".into()),
            };
            items.push((k.describe(), o));
        }
        Ok(fold(items))
    }

    fn parblev(&self) -> Result<Outcome> {
        let (Some(bl), true) = (&self.blocks, self.adapted.is_some()) else {
            return Ok(Outcome::skip(SkipReason::UncertifiedSplit, "slope split not certified"));
        };
        if bl.dim(1) == 0 {
            return Ok(Outcome::Pass("lev = {0}; its only compact open subgroup is stable and tidy".into()));
        }
        let (adapted, _) = bl.b.adapted_tidy_lattice()?;
        let idx: Vec<usize> = bl.ranges[1].clone().collect();
        let s_lev = PadicInstance::new(self.p(), bl.m().submatrix(&idx, &idx))?.scale_value()?;
        let mut items = Vec::new();
        let mut opts = bl.block_options(1, &adapted);
        opts.extend(opts.clone().iter().map(|w| w.scaled(1)));
        for w in opts {
            let tidy = bl.b.displacement(&w)? == s_lev;
            let stable = w.image(bl.m()) == w;
            items.push((
                w.describe(),
                Outcome::check(tidy == stable, "tidy for α|lev ⇔ α(V) = V", || {
                    format!("tidy = {tidy}, stable = {stable}")
                }),
            ));
        }
        Ok(fold(items))
    }

    fn keynub(&self) -> Result<Outcome> {
        let (Some(bl), Some(small)) = (&self.blocks, self.small_tidy()?) else {
            return Ok(Outcome::skip(SkipReason::UncertifiedSplit, "slope split not certified"));
        };
        // con and lev are disjoint coordinate blocks, so con ∩ lev = {0}
        let meet = rank(&[bl.coords(0), bl.coords(1)].concat()) == bl.dim(0) + bl.dim(1);
        Ok(Outcome::check(small && meet, "nub = {0} = closure(con ∩ lev); closure(con) = con = con·nub", || {
            "nub or con ∩ lev nontrivial".into()
        }))
    }
}

fn is_per_subgroup(tag: Tag) -> bool {
    matches!(tag, Tag::A | Tag::B | Tag::Ca | Tag::Cb | Tag::Cc | Tag::EntropyAddition)
}

pub fn describe_subspace(h: &[Vec<Q>]) -> String {
    if rank(h) == 0 {
        "{0}".into()
    } else {
        describe_vectors(&echelon(h))
    }
}

/// Closed invariant-subspace candidates: `{0}`, `G`, coordinate subspaces,
/// kernels and images of powers of `A`. Duplicates removed; non-invariant
/// ones are kept so that the skips show up.
pub fn subspace_family(inst: &PadicInstance) -> Vec<Vec<Vec<Q>>> {
    let n = inst.dim();
    let mut out: Vec<Vec<Vec<Q>>> = vec![Vec::new()];
    for mask in 1u32..(1 << n) {
        out.push((0..n).filter(|i| mask & (1 << i) != 0).map(|i| unit(n, i)).collect());
    }
    let a = inst.matrix();
    for k in 1..=n as u32 {
        let ak = a.pow(k);
        out.push(ak.kernel());
        out.push(ak.col_vecs());
    }
    let mut seen: Vec<Vec<Vec<Q>>> = Vec::new();
    for h in out {
        let e = echelon(&h);
        if !seen.contains(&e) {
            seen.push(e);
        }
    }
    seen
}

pub fn check(
    inst: &PadicInstance,
    key: &str,
    hs: Option<&[Vec<Vec<Q>>]>,
    tags: &[Tag],
) -> Result<Vec<VerificationReport>> {
    let t0 = Instant::now();
    let scale = inst.scale_value()?;
    let (certified, exact, prec, con, con_minus) = match inst.split() {
        Ok(s) => (
            s.certified,
            s.is_exact(),
            (s.precision / 2) as i64,
            s.span(&[Block::Contracting]),
            s.span(&[Block::Expanding]),
        ),
        Err(Error::PrecisionEscalationFailure(_)) => (false, false, 0, Vec::new(), Vec::new()),
        Err(e) => return Err(e),
    };
    let adapted =
        if certified { inst.adapted_tidy_lattice().ok().filter(|(_, d)| *d == scale).map(|x| x.0) } else { None };
    let blocks = match (&adapted, certified) {
        (Some(_), true) => Some(Blocks::new(inst.block_model()?, inst.split()?.dims())?),
        _ => None,
    };
    let ctx = Ctx { inst, scale, prec, exact, certified: adapted.is_some(), con, con_minus, blocks, adapted };
    let family = subspace_family(inst);
    let setup = t0.elapsed();
    let mut out = Vec::new();
    for &tag in tags {
        let t = Instant::now();
        let per_h = |h: &[Vec<Q>]| -> Outcome {
            let r = match tag {
                Tag::A => ctx.theorem_a(h),
                Tag::B => ctx.theorem_b(h),
                Tag::Ca | Tag::Cb | Tag::Cc => ctx.theorem_c(tag, h),
                Tag::EntropyAddition => ctx.entropy(h),
                _ => unreachable!(),
            };
            r.unwrap_or_else(|e| Outcome::error(&e))
        };
        if is_per_subgroup(tag) {
            match hs {
                Some(hs) => {
                    for h in hs {
                        out.push(per_h(h).into_report(
                            tag,
                            key,
                            Some(format!("H = {}", describe_subspace(h))),
                            t.elapsed(),
                        ));
                    }
                }
                None => {
                    let o = fold(family.iter().map(|h| (describe_subspace(h), per_h(h))).collect());
                    out.push(o.into_report(
                        tag,
                        key,
                        Some(format!("{} candidate subspaces", family.len())),
                        t.elapsed() + setup,
                    ));
                }
            }
            continue;
        }
        let r = match tag {
            Tag::D => ctx.theorem_d(),
            Tag::E => ctx.theorem_e(),
            Tag::Fa | Tag::Fb | Tag::Fc | Tag::Fd | Tag::Fe | Tag::Ff => ctx.theorem_f(tag),
            Tag::ModVpVm => Ok(Outcome::skip(SkipReason::NotApplicable, "V₋₋ is not a lattice")),
            Tag::WhenTb => ctx.when_tb(),
            Tag::GoodPrepar => ctx.good_prepar(),
            Tag::Parblev => ctx.parblev(),
            Tag::Keynub => ctx.keynub(),
            _ => unreachable!(),
        };
        out.push(r.unwrap_or_else(|e| Outcome::error(&e)).into_report(tag, key, None, t.elapsed()));
    }
    Ok(out)
}

/// `"a/b"` strings of a vector.
pub fn format_vector(v: &[Q]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::arith::{q, qf};
    use crate::theorems::report::Status;

    fn run(p: u64, m: QMat, hs: Option<&[Vec<Vec<Q>>]>, tags: &[Tag]) -> Vec<VerificationReport> {
        let inst = PadicInstance::new(p, m).unwrap();
        check(&inst, "t", hs, tags).unwrap()
    }

    #[test]
    fn diagonal_three_slopes_pass() {
        for p in [2, 3] {
            let pi = p as i64;
            let m = QMat::diag(&[qf(1, pi), q(1), q(pi)]);
            for r in run(p, m, None, &Tag::ALL) {
                if r.tag == Tag::ModVpVm {
                    assert_eq!(r.status, Status::Skipped);
                } else {
                    assert_eq!(r.status, Status::Pass, "{r:?}");
                }
            }
        }
    }

    #[test]
    fn named_subgroup_checks() {
        let p = 3;
        let m = QMat::diag(&[qf(1, 3), qf(1, 3)]);
        let h = vec![vec![vec![q(1), q(0)]]];
        let r = run(p, m, Some(&h), &[Tag::Cc, Tag::EntropyAddition]);
        assert!(r.iter().all(|r| r.status == Status::Pass), "{r:?}");
        assert!(r[0].detail.contains("3·3 = s_G = 9"), "{}", r[0].detail);

        let m = QMat::diag(&[qf(1, 3), q(3)]);
        let h2 = vec![vec![vec![q(0), q(1)]]];
        let r = run(p, m.clone(), Some(&h2), &[Tag::A, Tag::B, Tag::Cb]);
        assert!(r.iter().all(|r| r.status == Status::Pass), "{r:?}");
        let skew = vec![vec![vec![q(1), q(1)]]];
        let r = run(p, m, Some(&skew), &[Tag::A]);
        assert_eq!(r[0].reason, Some(SkipReason::HypothesisNotInvariant));
    }

    #[test]
    fn companion_and_singular_pass() {
        let comp = QMat::from_ints(&[&[0, -5], &[1, 3]]);
        let sing = QMat::from_rows(vec![vec![qf(1, 5), q(0)], vec![q(0), q(0)]]);
        for m in [comp.clone(), comp.inverse().unwrap(), sing] {
            for r in run(5, m, None, &Tag::ALL) {
                assert_ne!(r.status, Status::Fail, "{r:?}");
            }
        }
    }
}
