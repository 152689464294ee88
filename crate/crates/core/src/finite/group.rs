use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default order bound for subgroup and endomorphism enumeration.
pub const DEFAULT_BOUND: usize = 64;

/// Largest order whose table is checked for associativity exhaustively.
const FULL_CHECK_ORDER: usize = 256;

/// A set of group elements, kept as a membership bitset so that equal sets
/// compare equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet(FixedBitSet);

/// Subgroups are element sets that happen to be closed.
pub type FiniteSubgroup = ElementSet;

impl ElementSet {
    pub fn empty(n: usize) -> Self {
        ElementSet(FixedBitSet::with_capacity(n))
    }

    pub fn full(n: usize) -> Self {
        let mut b = FixedBitSet::with_capacity(n);
        b.insert_range(..);
        ElementSet(b)
    }

    pub fn from_elements(n: usize, elems: impl IntoIterator<Item = usize>) -> Self {
        let mut b = FixedBitSet::with_capacity(n);
        for x in elems {
            b.insert(x);
        }
        ElementSet(b)
    }

    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.contains(x)
    }

    pub fn insert(&mut self, x: usize) -> bool {
        let fresh = !self.0.contains(x);
        self.0.insert(x);
        fresh
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn intersection(&self, other: &ElementSet) -> ElementSet {
        let mut b = self.0.clone();
        b.intersect_with(&other.0);
        ElementSet(b)
    }

    pub fn union(&self, other: &ElementSet) -> ElementSet {
        let mut b = self.0.clone();
        b.union_with(&other.0);
        ElementSet(b)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// How to build a group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupSpec {
    /// Direct product of cyclic groups of the given orders.
    Abelian(Vec<usize>),
    /// One of `S3`, `D4`, `Q8`.
    Named(String),
    /// Explicit multiplication table, `table[a][b] = a·b`.
    Table(Vec<Vec<usize>>),
}

/// A finite group given by its multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    labels: Vec<String>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order)
    }
}

pub fn build_group(spec: &GroupSpec) -> Result<FiniteGroup> {
    match spec {
        GroupSpec::Abelian(factors) => FiniteGroup::abelian(factors),
        GroupSpec::Named(name) => match name.as_str() {
            "S3" => Ok(FiniteGroup::symmetric3()),
            "D4" => Ok(FiniteGroup::dihedral4()),
            "Q8" => Ok(FiniteGroup::quaternion8()),
            other => Err(Error::Parse(format!("unknown named group {other:?}"))),
        },
        GroupSpec::Table(rows) => {
            let labels = (0..rows.len()).map(|i| i.to_string()).collect();
            FiniteGroup::from_table("table", rows, labels)
        }
    }
}

/// The fixed test catalog.
pub fn catalog() -> Vec<FiniteGroup> {
    let abelian: [&[usize]; 9] = [&[2], &[3], &[4], &[6], &[8], &[2, 2], &[2, 4], &[2, 2, 2], &[3, 3]];
    let mut out: Vec<FiniteGroup> =
        abelian.iter().map(|f| FiniteGroup::abelian(f).expect("catalog factors are valid")).collect();
    out.push(FiniteGroup::symmetric3());
    out.push(FiniteGroup::dihedral4());
    out.push(FiniteGroup::quaternion8());
    out
}

impl FiniteGroup {
    /// Build from a table, checking the group axioms.
    pub fn from_table(name: &str, rows: &[Vec<usize>], labels: Vec<String>) -> Result<FiniteGroup> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        if labels.len() != n {
            return Err(Error::InvalidTable("label count differs from order".into()));
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidTable(format!("row {i} has length {}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::InvalidTable(format!("entry {bad} out of range in row {i}")));
            }
            table.extend_from_slice(row);
        }
        let at = |a: usize, b: usize| table[a * n + b];
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| Error::InvalidTable("no identity".into()))?;
        let mut inverse = vec![0; n];
        for x in 0..n {
            inverse[x] = (0..n)
                .find(|&y| at(x, y) == identity && at(y, x) == identity)
                .ok_or_else(|| Error::InvalidTable(format!("element {x} has no inverse")))?;
        }
        let assoc = |a: usize, b: usize, c: usize| at(at(a, b), c) == at(a, at(b, c));
        if n <= FULL_CHECK_ORDER {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !assoc(a, b, c) {
                            return Err(Error::InvalidTable(format!("associativity fails at ({a}, {b}, {c})")));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            for _ in 0..100_000 {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if !assoc(a, b, c) {
                    return Err(Error::InvalidTable(format!("associativity fails at ({a}, {b}, {c})")));
                }
            }
        }
        Ok(FiniteGroup { name: name.to_string(), order: n, table, identity, inverse, labels })
    }

    pub fn cyclic(n: usize) -> FiniteGroup {
        FiniteGroup::abelian(&[n]).expect("cyclic order must be positive")
    }

    /// `C_{n₁} × … × C_{n_k}`, element `(a₁,…,a_k)` stored at `Σ aᵢ·n₁⋯n_{i-1}`.
    pub fn abelian(factors: &[usize]) -> Result<FiniteGroup> {
        if factors.is_empty() || factors.contains(&0) {
            return Err(Error::Parse(format!("bad abelian factors {factors:?}")));
        }
        let n: usize = factors.iter().product();
        let digits = |mut x: usize| -> Vec<usize> {
            factors
                .iter()
                .map(|&f| {
                    let d = x % f;
                    x /= f;
                    d
                })
                .collect()
        };
        let undigits = |ds: &[usize]| -> usize { ds.iter().zip(factors).rev().fold(0, |acc, (&d, &f)| acc * f + d) };
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            let da = digits(a);
            for b in 0..n {
                let db = digits(b);
                let sum: Vec<usize> = da.iter().zip(&db).zip(factors).map(|((x, y), f)| (x + y) % f).collect();
                table.push(undigits(&sum));
            }
        }
        let labels = (0..n)
            .map(|x| {
                let ds = digits(x);
                if ds.len() == 1 {
                    ds[0].to_string()
                } else {
                    let parts: Vec<String> = ds.iter().map(|d| d.to_string()).collect();
                    format!("({})", parts.join(","))
                }
            })
            .collect();
        let name = factors.iter().map(|f| format!("C{f}")).collect::<Vec<_>>().join("x");
        let inverse = (0..n)
            .map(|x| undigits(&digits(x).iter().zip(factors).map(|(d, f)| (f - d) % f).collect::<Vec<_>>()))
            .collect();
        Ok(FiniteGroup { name, order: n, table, identity: 0, inverse, labels })
    }

    /// Permutation group generated by `gens` on `degree` points, elements in
    /// lexicographic order of their one-line notation. Product is composition,
    /// `(a·b)(i) = a(b(i))`.
    fn permutation_group(name: &str, degree: usize, gens: &[Vec<usize>]) -> FiniteGroup {
        let compose = |a: &[usize], b: &[usize]| -> Vec<usize> { b.iter().map(|&i| a[i]).collect() };
        let id: Vec<usize> = (0..degree).collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = compose(&x, g);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        let elems: Vec<Vec<usize>> = seen.into_iter().collect();
        let pos: HashMap<&Vec<usize>, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let rows: Vec<Vec<usize>> = elems.iter().map(|a| elems.iter().map(|b| pos[&compose(a, b)]).collect()).collect();
        let labels = elems
            .iter()
            .map(|e| format!("[{}]", e.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" ")))
            .collect();
        FiniteGroup::from_table(name, &rows, labels).expect("permutation groups satisfy the axioms")
    }

    pub fn symmetric3() -> FiniteGroup {
        FiniteGroup::permutation_group("S3", 3, &[vec![1, 0, 2], vec![1, 2, 0]])
    }

    /// Symmetries of a square with vertices 0,1,2,3 in cyclic order.
    pub fn dihedral4() -> FiniteGroup {
        FiniteGroup::permutation_group("D4", 4, &[vec![1, 2, 3, 0], vec![0, 3, 2, 1]])
    }

    /// `{±1, ±i, ±j, ±k}` in that order.
    pub fn quaternion8() -> FiniteGroup {
        // unit index 0..4 = 1,i,j,k; element 2u+s with sign bit s
        let unit_mul = |a: usize, b: usize| -> (usize, bool) {
            match (a, b) {
                (0, x) | (x, 0) => (x, false),
                (x, y) if x == y => (0, true),
                (1, 2) => (3, false),
                (2, 3) => (1, false),
                (3, 1) => (2, false),
                (2, 1) => (3, true),
                (3, 2) => (1, true),
                (1, 3) => (2, true),
                _ => unreachable!(),
            }
        };
        let rows: Vec<Vec<usize>> = (0..8)
            .map(|a| {
                (0..8)
                    .map(|b| {
                        let (u, neg) = unit_mul(a / 2, b / 2);
                        let sign = (a % 2) ^ (b % 2) ^ usize::from(neg);
                        2 * u + sign
                    })
                    .collect()
            })
            .collect();
        let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"].iter().map(|s| s.to_string()).collect();
        FiniteGroup::from_table("Q8", &rows, labels).expect("quaternion table satisfies the axioms")
    }

    /// `G^k`, coordinate 0 least significant.
    pub fn direct_power(&self, k: usize) -> Result<FiniteGroup> {
        let n = self
            .order
            .checked_pow(k as u32)
            .filter(|&n| n <= 4096)
            .ok_or(Error::BoundExceeded { order: usize::MAX, bound: 4096 })?;
        let rows: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| self.power_mul(k, a, b)).collect()).collect();
        let labels = (0..n).map(|x| x.to_string()).collect();
        FiniteGroup::from_table(&format!("{}^{k}", self.name), &rows, labels)
    }

    /// Coordinatewise product in `G^k` without building its table.
    pub fn power_mul(&self, k: usize, mut a: usize, mut b: usize) -> usize {
        let (mut out, mut stride) = (0, 1);
        for _ in 0..k {
            out += self.mul(a % self.order, b % self.order) * stride;
            a /= self.order;
            b /= self.order;
            stride *= self.order;
        }
        out
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, x: usize) -> usize {
        let (mut y, mut k) = (x, 1);
        while y != self.identity {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn whole(&self) -> ElementSet {
        ElementSet::full(self.order)
    }

    pub fn trivial(&self) -> ElementSet {
        ElementSet::from_elements(self.order, [self.identity])
    }

    /// Subgroup generated by `gens`.
    pub fn generated(&self, gens: impl IntoIterator<Item = usize>) -> ElementSet {
        let gens: Vec<usize> = gens.into_iter().collect();
        let mut set = self.trivial();
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        set
    }

    pub fn is_subgroup(&self, s: &ElementSet) -> bool {
        s.universe() == self.order
            && s.contains(self.identity)
            && s.iter().all(|a| s.iter().all(|b| s.contains(self.mul(a, self.inv(b)))))
    }

    pub fn is_normal(&self, s: &ElementSet) -> bool {
        (0..self.order).all(|g| s.iter().all(|h| s.contains(self.mul(self.mul(g, h), self.inv(g)))))
    }

    /// `{ab : a ∈ A, b ∈ B}`.
    pub fn product_set(&self, a: &ElementSet, b: &ElementSet) -> ElementSet {
        let mut out = ElementSet::empty(self.order);
        for x in a.iter() {
            for y in b.iter() {
                out.insert(self.mul(x, y));
            }
        }
        out
    }

    /// `xS`.
    pub fn coset(&self, x: usize, s: &ElementSet) -> ElementSet {
        ElementSet::from_elements(self.order, s.iter().map(|h| self.mul(x, h)))
    }

    /// A small generating set, chosen greedily by decreasing element order.
    pub fn generators(&self) -> Vec<usize> {
        let mut candidates: Vec<usize> = (0..self.order).collect();
        candidates.sort_by_key(|&x| (std::cmp::Reverse(self.element_order(x)), x));
        let mut gens = Vec::new();
        let mut span = self.trivial();
        for x in candidates {
            if span.len() == self.order {
                break;
            }
            if !span.contains(x) {
                gens.push(x);
                span = self.generated(gens.iter().copied());
            }
        }
        gens
    }

    fn check_bound(&self, bound: usize) -> Result<()> {
        if self.order > bound {
            return Err(Error::BoundExceeded { order: self.order, bound });
        }
        Ok(())
    }

    /// Every subgroup, by closing joins of cyclic subgroups to a fixpoint.
    /// Sorted by size, then bitset order.
    pub fn all_subgroups(&self, bound: usize) -> Result<Vec<FiniteSubgroup>> {
        self.check_bound(bound)?;
        let mut found: BTreeSet<ElementSet> = (0..self.order).map(|x| self.generated([x])).collect();
        let mut frontier: Vec<ElementSet> = found.iter().cloned().collect();
        let cyclic: Vec<ElementSet> = frontier.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for a in &frontier {
                for c in &cyclic {
                    if c.is_subset(a) {
                        continue;
                    }
                    let j = self.generated(a.iter().chain(c.iter()));
                    if !found.contains(&j) {
                        found.insert(j.clone());
                        next.push(j);
                    }
                }
            }
            frontier = next;
        }
        let mut out: Vec<ElementSet> = found.into_iter().collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm_compose(a: &[usize], b: &[usize]) -> Vec<usize> {
        b.iter().map(|&i| a[i]).collect()
    }

    #[test]
    fn abelian_product_orders() {
        let g = build_group(&GroupSpec::Abelian(vec![2, 4])).unwrap();
        assert_eq!(g.order(), 8);
        assert_eq!(g.name(), "C2xC4");
        assert!(g.is_abelian());
        let orders: BTreeSet<usize> = (0..8).map(|x| g.element_order(x)).collect();
        assert_eq!(orders, BTreeSet::from([1, 2, 4]));
    }

    #[test]
    fn s3_matches_permutation_composition() {
        let g = build_group(&GroupSpec::Named("S3".into())).unwrap();
        assert_eq!(g.order(), 6);
        let perms: Vec<Vec<usize>> =
            vec![vec![0, 1, 2], vec![0, 2, 1], vec![1, 0, 2], vec![1, 2, 0], vec![2, 0, 1], vec![2, 1, 0]];
        for (a, pa) in perms.iter().enumerate() {
            for (b, pb) in perms.iter().enumerate() {
                let c = perms.iter().position(|p| *p == perm_compose(pa, pb)).unwrap();
                assert_eq!(g.mul(a, b), c);
            }
        }
        assert!(!g.is_abelian());
    }

    #[test]
    fn broken_associativity_is_rejected() {
        // identity 0, every element its own inverse, but (1·2)·2 ≠ 1·(2·2)
        let rows = vec![vec![0, 1, 2], vec![1, 0, 1], vec![2, 2, 0]];
        assert!(matches!(build_group(&GroupSpec::Table(rows)), Err(Error::InvalidTable(_))));
    }

    #[test]
    fn missing_identity_is_rejected() {
        let rows = vec![vec![1, 0], vec![0, 0]];
        assert!(matches!(build_group(&GroupSpec::Table(rows)), Err(Error::InvalidTable(_))));
    }

    #[test]
    fn quaternion_relations() {
        let q = FiniteGroup::quaternion8();
        let (minus1, i, j, k) = (1, 2, 4, 6);
        assert_eq!(q.mul(i, i), minus1);
        assert_eq!(q.mul(j, j), minus1);
        assert_eq!(q.mul(q.mul(i, j), k), minus1);
        assert_eq!(q.mul(i, j), k);
        assert_eq!(q.mul(j, i), q.mul(minus1, k));
    }

    #[test]
    fn subgroup_counts() {
        let counts: Vec<(String, usize)> =
            catalog().iter().map(|g| (g.name().to_string(), g.all_subgroups(DEFAULT_BOUND).unwrap().len())).collect();
        // subgroup counts of small groups
        let expected = [
            ("C2", 2),
            ("C3", 2),
            ("C4", 3),
            ("C6", 4),
            ("C8", 4),
            ("C2xC2", 5),
            ("C2xC4", 8),
            ("C2xC2xC2", 16),
            ("C3xC3", 6),
            ("S3", 6),
            ("D4", 10),
            ("Q8", 6),
        ];
        let expected: Vec<(String, usize)> = expected.iter().map(|(n, c)| (n.to_string(), *c)).collect();
        assert_eq!(counts, expected);
    }

    #[test]
    fn c4_subgroups_explicit() {
        let g = FiniteGroup::cyclic(4);
        let subs = g.all_subgroups(DEFAULT_BOUND).unwrap();
        let as_vecs: Vec<Vec<usize>> = subs.iter().map(|s| s.to_vec()).collect();
        assert_eq!(as_vecs, vec![vec![0], vec![0, 2], vec![0, 1, 2, 3]]);
    }

    #[test]
    fn trivial_group_has_one_subgroup() {
        let g = FiniteGroup::cyclic(1);
        assert_eq!(g.all_subgroups(DEFAULT_BOUND).unwrap().len(), 1);
    }

    #[test]
    fn subgroup_bound_is_enforced() {
        let g = FiniteGroup::cyclic(65);
        assert_eq!(g.all_subgroups(DEFAULT_BOUND), Err(Error::BoundExceeded { order: 65, bound: 64 }));
    }

    #[test]
    fn direct_power_matches_abelian() {
        let c2 = FiniteGroup::cyclic(2);
        let p = c2.direct_power(3).unwrap();
        let a = FiniteGroup::abelian(&[2, 2, 2]).unwrap();
        assert_eq!(p.table_rows(), a.table_rows());
    }
}
