use std::collections::VecDeque;
use std::sync::Arc;

use super::endo::FiniteEndo;
use super::group::{ElementSet, FiniteGroup, FiniteSubgroup, DEFAULT_BOUND};
use crate::dynamics::{self, Backend, Index, Method, ScaleResult};
use crate::error::{Error, Result};

/// A finite group with an endomorphism.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteInstance {
    pub group: Arc<FiniteGroup>,
    pub endo: FiniteEndo,
}

/// A regressive trajectory `x₀, x₁, …` with `α(xₙ₊₁) = xₙ`, stored as a
/// finite prefix followed by a cycle that repeats forever.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub prefix: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl Trajectory {
    pub fn at(&self, n: usize) -> usize {
        if n < self.prefix.len() {
            self.prefix[n]
        } else {
            self.cycle[(n - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// Every position up to the first repeat of the cycle.
    pub fn period_window(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    pub fn tail(&self) -> &[usize] {
        &self.cycle
    }
}

/// Every descriptor computed by enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteDecomposition {
    pub con: ElementSet,
    pub con_minus: ElementSet,
    pub par: ElementSet,
    pub par_minus: ElementSet,
    pub lev: ElementSet,
    pub nub: ElementSet,
    pub bik: ElementSet,
    pub omega: ElementSet,
}

impl FiniteInstance {
    pub fn new(group: Arc<FiniteGroup>, endo: FiniteEndo) -> FiniteInstance {
        FiniteInstance { group, endo }
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn is_invariant(&self, h: &ElementSet) -> bool {
        self.endo.image(h).is_subset(h)
    }

    pub fn is_stable(&self, h: &ElementSet) -> bool {
        self.endo.image(h) == *h
    }

    /// Forward orbit of `x` as `(prefix, cycle)`.
    pub fn orbit(&self, x: usize) -> (Vec<usize>, Vec<usize>) {
        let mut seen = vec![usize::MAX; self.order()];
        let mut path = Vec::new();
        let mut y = x;
        while seen[y] == usize::MAX {
            seen[y] = path.len();
            path.push(y);
            y = self.endo.apply(y);
        }
        let cycle = path.split_off(seen[y]);
        (path, cycle)
    }

    /// `αⁿ(x) → e` modulo `H`: in a discrete group the tail of the orbit,
    /// which is its cycle, must lie in `H`.
    pub fn converges_mod(&self, x: usize, h: &ElementSet) -> bool {
        self.orbit(x).1.iter().all(|&y| h.contains(y))
    }

    /// `con(α, H)`.
    pub fn con_mod(&self, h: &ElementSet) -> ElementSet {
        ElementSet::from_elements(self.order(), (0..self.order()).filter(|&x| self.converges_mod(x, h)))
    }

    pub fn con(&self) -> ElementSet {
        self.con_mod(&self.group.trivial())
    }

    fn is_periodic(&self, x: usize) -> bool {
        let mut y = self.endo.apply(x);
        for _ in 0..self.order() {
            if y == x {
                return true;
            }
            y = self.endo.apply(y);
        }
        false
    }

    /// A regressive trajectory from `x` whose tail lies in `H`, found by
    /// breadth-first search backwards through the preimage graph until a
    /// periodic point of `H` is reached. Depth is bounded by `|G|²`.
    pub fn regressive_search(&self, x: usize, h: &ElementSet) -> Result<Option<Trajectory>> {
        if !self.is_invariant(h) {
            return Err(Error::HypothesisNotInvariant);
        }
        let n = self.order();
        let mut preimages: Vec<Vec<usize>> = vec![Vec::new(); n];
        for y in 0..n {
            preimages[self.endo.apply(y)].push(y);
        }
        let target = |y: usize| h.contains(y) && self.is_periodic(y);
        let mut parent = vec![usize::MAX; n];
        let mut depth = vec![usize::MAX; n];
        depth[x] = 0;
        let mut queue = VecDeque::from([x]);
        let mut hit = None;
        while let Some(y) = queue.pop_front() {
            if target(y) {
                hit = Some(y);
                break;
            }
            if depth[y] >= n * n {
                continue;
            }
            for &z in &preimages[y] {
                if depth[z] == usize::MAX {
                    depth[z] = depth[y] + 1;
                    parent[z] = y;
                    queue.push_back(z);
                }
            }
        }
        let Some(p) = hit else { return Ok(None) };
        let mut prefix = vec![p];
        let mut y = p;
        while y != x {
            y = parent[y];
            prefix.push(y);
        }
        prefix.reverse();
        prefix.pop();
        // continue backwards around the cycle of p: c₀ = p, c_{i+1} = α^{L-1}(cᵢ)
        let (_, cyc) = self.orbit(p);
        let len = cyc.len();
        let cycle = (0..len).map(|i| self.endo.apply_n(p, (len - i) % len)).collect();
        Ok(Some(Trajectory { prefix, cycle }))
    }

    /// Whether `t` really is a regressive trajectory starting at `x`.
    pub fn is_regressive(&self, x: usize, t: &Trajectory) -> bool {
        t.at(0) == x && (0..=t.period_window()).all(|i| self.endo.apply(t.at(i + 1)) == t.at(i))
    }

    /// `con⁻(α, H)`: elements with a regressive trajectory converging to `e`
    /// modulo `H`, i.e. with tail in `H`.
    pub fn con_minus_mod(&self, h: &ElementSet) -> Result<ElementSet> {
        let mut out = ElementSet::empty(self.order());
        for x in 0..self.order() {
            if self.regressive_search(x, h)?.is_some() {
                out.insert(x);
            }
        }
        Ok(out)
    }

    /// `⋂ αⁿ(G)`.
    pub fn eventual_image(&self) -> ElementSet {
        dynamics::stabilize(|s| self.endo.image(s), self.group.whole(), self.order() + 1)
            .expect("image chain of a finite group stabilises")
    }

    /// `K₋ = ⋂ α⁻ⁿ(K)`.
    pub fn minus_part(&self, k: &ElementSet) -> ElementSet {
        dynamics::stabilize(|v| v.intersection(&self.endo.preimage(v)), k.clone(), self.order() + 1)
            .expect("finite chains stabilise")
    }

    /// `K₊`: elements of `K` with a regressive trajectory inside `K`.
    pub fn plus_part(&self, k: &ElementSet) -> ElementSet {
        dynamics::stabilize(|v| k.intersection(&self.endo.image(v)), k.clone(), self.order() + 1)
            .expect("finite chains stabilise")
    }

    /// `⋃ α⁻ⁿ(S)`.
    pub fn backward_union(&self, s: &ElementSet) -> ElementSet {
        dynamics::stabilize(|v| v.union(&self.endo.preimage(v)), s.clone(), self.order() + 1)
            .expect("finite chains stabilise")
    }

    /// `⋃ αⁿ(S)`.
    pub fn forward_union(&self, s: &ElementSet) -> ElementSet {
        dynamics::stabilize(|v| v.union(&self.endo.image(v)), s.clone(), self.order() + 1)
            .expect("finite chains stabilise")
    }

    /// `V₋₋`.
    pub fn minus_minus(&self, v: &ElementSet) -> ElementSet {
        self.backward_union(&self.minus_part(v))
    }

    /// `V₊₊`.
    pub fn plus_plus(&self, v: &ElementSet) -> ElementSet {
        self.forward_union(&self.plus_part(v))
    }

    /// `V = V₊V₋`, checked on element sets.
    pub fn factors_tidy_above(&self, v: &ElementSet) -> bool {
        self.group.product_set(&self.plus_part(v), &self.minus_part(v)) == *v
    }

    pub fn displacement(&self, u: &ElementSet) -> Index {
        let au = self.endo.image(u);
        (au.len() / au.intersection(u).len()) as Index
    }

    /// Intersection of every subgroup attaining the scale.
    pub fn nub(&self) -> Result<ElementSet> {
        let mut out = self.group.whole();
        for u in self.group.all_subgroups(DEFAULT_BOUND.max(self.order()))? {
            if self.displacement(&u) == 1 {
                out = out.intersection(&u);
            }
        }
        Ok(out)
    }

    pub fn exact_sets(&self) -> Result<FiniteDecomposition> {
        let g = &self.group;
        let con = self.con();
        let con_minus = self.con_minus_mod(&g.trivial())?;
        let par = g.whole();
        let par_minus = self.eventual_image();
        let lev = par.intersection(&par_minus);
        let killed = con.intersection(&par_minus);
        let omega = g.product_set(&g.product_set(&con, &lev), &con_minus);
        Ok(FiniteDecomposition { con, con_minus, par, par_minus, lev, nub: self.nub()?, bik: killed, omega })
    }

    /// `𝓛_V` for `V` tidy above. The unions over `m, n ≥ 1` stabilise within
    /// `|G|` steps because `V₊ ⊆ α(V₊)` and `α(V₋) ⊆ V₋`.
    pub fn l_set(&self, v: &ElementSet) -> ElementSet {
        let vp = self.plus_part(v);
        let vm = self.minus_part(v);
        let reach = self.forward_union(&self.endo.image(&vp));
        let lands = self.backward_union(&self.endo.preimage(&vm));
        reach.intersection(&lands)
    }

    /// Tidy above, then `Ũ·L_U` with `Ũ = {x ∈ U : xL ⊆ LU}`.
    pub fn tidying_procedure(&self, u: &ElementSet, l_max: usize) -> Result<ElementSet> {
        let (v, _) = dynamics::tidy_above(self, u, l_max)?;
        let g = &self.group;
        let l = self.l_set(&v);
        let lv = g.product_set(&l, &v);
        let tilde = ElementSet::from_elements(self.order(), v.iter().filter(|&x| g.coset(x, &l).is_subset(&lv)));
        let out = g.product_set(&tilde, &l);
        if !g.is_subgroup(&out) {
            return Err(Error::NotComputable("Ũ·L_U is not a subgroup".into()));
        }
        Ok(out)
    }

    /// Restriction to an invariant subgroup, relabelled as a group of its own.
    /// Returns the instance and the embedding of its elements into `G`.
    pub fn restrict(&self, h: &ElementSet) -> Result<(FiniteInstance, Vec<usize>)> {
        if !self.is_invariant(h) {
            return Err(Error::HypothesisNotInvariant);
        }
        let elems = h.to_vec();
        let pos = |x: usize| elems.binary_search(&x).expect("closed under the operation");
        let rows: Vec<Vec<usize>> =
            elems.iter().map(|&a| elems.iter().map(|&b| pos(self.group.mul(a, b))).collect()).collect();
        let labels = elems.iter().map(|&x| self.group.label(x).to_string()).collect();
        let sub = FiniteGroup::from_table(&format!("{}|H", self.group.name()), &rows, labels)?;
        let images = elems.iter().map(|&x| pos(self.endo.apply(x))).collect();
        let endo = FiniteEndo::new(&sub, images)?;
        Ok((FiniteInstance::new(Arc::new(sub), endo), elems))
    }

    /// Quotient by a normal invariant subgroup. Returns the induced instance and
    /// the projection `G → G/H` as an array.
    pub fn quotient(&self, h: &ElementSet) -> Result<(FiniteInstance, Vec<usize>)> {
        let g = &self.group;
        if !g.is_subgroup(h) || !g.is_normal(h) {
            return Err(Error::NotASubgroup("quotient needs a normal subgroup".into()));
        }
        if !self.is_invariant(h) {
            return Err(Error::HypothesisNotInvariant);
        }
        let mut class = vec![usize::MAX; self.order()];
        let mut reps = Vec::new();
        for x in 0..self.order() {
            if class[x] == usize::MAX {
                for y in g.coset(x, h).iter() {
                    class[y] = reps.len();
                }
                reps.push(x);
            }
        }
        let rows: Vec<Vec<usize>> = reps.iter().map(|&a| reps.iter().map(|&b| class[g.mul(a, b)]).collect()).collect();
        let labels = reps.iter().map(|&x| format!("{}H", g.label(x))).collect();
        let q = FiniteGroup::from_table(&format!("{}/H", g.name()), &rows, labels)?;
        let images = reps.iter().map(|&x| class[self.endo.apply(x)]).collect();
        let endo = FiniteEndo::new(&q, images)?;
        Ok((FiniteInstance::new(Arc::new(q), endo), class))
    }

    /// The minimum displacement over all subgroups, by brute force.
    pub fn exhaustive_scale(&self) -> Result<Index> {
        Ok(self
            .group
            .all_subgroups(DEFAULT_BOUND.max(self.order()))?
            .iter()
            .map(|u| self.displacement(u))
            .min()
            .unwrap_or(1))
    }
}

impl Backend for FiniteInstance {
    type Subgroup = FiniteSubgroup;

    fn image(&self, k: &ElementSet) -> ElementSet {
        self.endo.image(k)
    }

    fn preimage_meet(&self, target: &ElementSet, within: &ElementSet) -> ElementSet {
        self.endo.preimage(target).intersection(within)
    }

    fn meet(&self, a: &ElementSet, b: &ElementSet) -> ElementSet {
        a.intersection(b)
    }

    fn contains(&self, big: &ElementSet, small: &ElementSet) -> bool {
        small.is_subset(big)
    }

    fn index(&self, k: &ElementSet, h: &ElementSet) -> Result<Index> {
        if !h.is_subset(k) {
            return Err(Error::NotASubgroup("H is not contained in K".into()));
        }
        Ok((k.len() / h.len()) as Index)
    }

    fn is_tidy_above(&self, v: &ElementSet) -> Result<bool> {
        Ok(self.factors_tidy_above(v))
    }

    /// Every finite group is compact open in itself and has displacement 1.
    fn scale(&self) -> Result<ScaleResult<ElementSet>> {
        let whole = self.group.whole();
        Ok(ScaleResult {
            value: 1,
            displacement: self.displacement(&whole),
            tidy: whole,
            method: Method::CompactTrivial,
        })
    }

    fn core_part(&self, k: &ElementSet) -> Result<ElementSet> {
        Ok(self.plus_part(k).intersection(&self.minus_part(k)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{displacement_index, is_tidy, minus_stage, plus_stage, tidy_above};
    use crate::finite::endo::all_endomorphisms;
    use crate::finite::group::catalog;

    fn c4_double() -> FiniteInstance {
        let g = Arc::new(FiniteGroup::cyclic(4));
        let e = FiniteEndo::power_map(&g, 2).unwrap();
        FiniteInstance::new(g, e)
    }

    fn set(n: usize, xs: &[usize]) -> ElementSet {
        ElementSet::from_elements(n, xs.iter().copied())
    }

    #[test]
    fn stages_on_c4() {
        let inst = c4_double();
        let u = set(4, &[0, 2]);
        assert_eq!(minus_stage(&inst, &u, 0), u);
        assert_eq!(minus_stage(&inst, &u, 1), u);
        assert_eq!(plus_stage(&inst, &inst.group.whole(), 2), set(4, &[0]));
        assert_eq!(displacement_index(&inst, &inst.group.whole()).unwrap(), 1);
        assert_eq!(inst.index(&inst.group.whole(), &u).unwrap(), 2);
    }

    #[test]
    fn core_part_on_c4() {
        let inst = c4_double();
        assert_eq!(inst.core_part(&inst.group.whole()).unwrap(), set(4, &[0]));
        assert_eq!(inst.core_part(&inst.group.trivial()).unwrap(), set(4, &[0]));
    }

    #[test]
    fn converges_on_c4() {
        let inst = c4_double();
        assert!(inst.converges_mod(1, &inst.group.trivial()));
        assert_eq!(inst.orbit(1), (vec![1, 2], vec![0]));
    }

    #[test]
    fn regressive_search_examples() {
        let inst = c4_double();
        let triv = inst.group.trivial();
        let t = inst.regressive_search(0, &triv).unwrap().unwrap();
        assert!(t.prefix.is_empty());
        assert_eq!(t.cycle, vec![0]);
        assert_eq!(inst.regressive_search(1, &triv).unwrap(), None);
        assert_eq!(inst.regressive_search(0, &set(4, &[0, 1])), Err(Error::HypothesisNotInvariant));
    }

    #[test]
    fn regressive_trajectories_are_valid() {
        for g in catalog() {
            let g = Arc::new(g);
            for e in all_endomorphisms(&g, 64).unwrap() {
                let inst = FiniteInstance::new(g.clone(), e);
                for x in 0..g.order() {
                    if let Some(t) = inst.regressive_search(x, &g.whole()).unwrap() {
                        assert!(inst.is_regressive(x, &t));
                    }
                }
            }
        }
    }

    #[test]
    fn exact_sets_c4_double() {
        let inst = c4_double();
        let d = inst.exact_sets().unwrap();
        assert_eq!(d.con, inst.group.whole());
        assert_eq!(d.con_minus, set(4, &[0]));
        assert_eq!(d.nub, set(4, &[0]));
        assert_eq!(d.par_minus, set(4, &[0]));
        assert_eq!(d.lev, set(4, &[0]));
        assert_eq!(d.bik, set(4, &[0]));
    }

    #[test]
    fn exact_sets_identity_and_c6_triple() {
        let g = Arc::new(FiniteGroup::cyclic(6));
        let id = FiniteInstance::new(g.clone(), FiniteEndo::identity(&g));
        let d = id.exact_sets().unwrap();
        assert_eq!(d.con, g.trivial());
        assert_eq!(d.lev, g.whole());
        let triple = FiniteInstance::new(g.clone(), FiniteEndo::power_map(&g, 3).unwrap());
        assert_eq!(triple.exact_sets().unwrap().con, set(6, &[0, 2, 4]));
    }

    #[test]
    fn scale_is_exhaustive_minimum() {
        for g in catalog() {
            let g = Arc::new(g);
            for e in all_endomorphisms(&g, 64).unwrap() {
                let inst = FiniteInstance::new(g.clone(), e);
                let s = inst.scale().unwrap();
                assert_eq!(s.value, inst.exhaustive_scale().unwrap());
                assert_eq!(s.displacement, s.value);
            }
        }
    }

    #[test]
    fn swap_moves_a_factor() {
        // α(a, b) = (b, a) on C2 × C2; U = C2 × {0} is not tidy
        let g = Arc::new(FiniteGroup::abelian(&[2, 2]).unwrap());
        let swap = FiniteEndo::new(&g, vec![0, 2, 1, 3]).unwrap();
        let inst = FiniteInstance::new(g.clone(), swap);
        let u = set(4, &[0, 1]);
        assert_eq!(displacement_index(&inst, &u).unwrap(), 2);
        assert!(!is_tidy(&inst, &u).unwrap().tidy);
        let t = inst.tidying_procedure(&u, 64).unwrap();
        assert_eq!(displacement_index(&inst, &t).unwrap(), 1);
    }

    #[test]
    fn tidying_gives_displacement_one_everywhere() {
        for g in catalog() {
            let g = Arc::new(g);
            let subs = g.all_subgroups(64).unwrap();
            for e in all_endomorphisms(&g, 64).unwrap() {
                let inst = FiniteInstance::new(g.clone(), e);
                for u in &subs {
                    let t = inst.tidying_procedure(u, 64).unwrap();
                    assert_eq!(inst.displacement(&t), 1);
                    if inst.displacement(u) == 1 {
                        assert_eq!(&t, u, "a tidy subgroup is its own tidying");
                    }
                }
            }
        }
    }

    #[test]
    fn tidy_above_on_c2xc4() {
        // α(a, b) = (b mod 2, 2a): image of U = C2 × {0} is {0} × {0,2}
        let g = Arc::new(FiniteGroup::abelian(&[2, 4]).unwrap());
        let images: Vec<usize> = (0..8)
            .map(|x| {
                let (a, b) = (x % 2, x / 2);
                (b % 2) + 2 * ((2 * a) % 4)
            })
            .collect();
        let inst = FiniteInstance::new(g.clone(), FiniteEndo::new(&g, images).unwrap());
        let u = set(8, &[0, 1]);
        assert!(!inst.image(&u).is_subset(&u));
        let (v, l) = tidy_above(&inst, &u, 64).unwrap();
        assert!(inst.factors_tidy_above(&v));
        assert_eq!(v, minus_stage(&inst, &u, l));
    }

    #[test]
    fn quotient_and_restriction() {
        let inst = c4_double();
        let h = set(4, &[0, 2]);
        let (q, proj) = inst.quotient(&h).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(proj, vec![0, 1, 0, 1]);
        assert_eq!(q.endo.images(), &[0, 0]);
        let (r, emb) = inst.restrict(&h).unwrap();
        assert_eq!(emb, vec![0, 2]);
        assert_eq!(r.endo.images(), &[0, 0]);
    }
}
