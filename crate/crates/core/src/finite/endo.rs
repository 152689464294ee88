use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::group::{ElementSet, FiniteGroup};
use crate::error::{Error, Result};

/// An endomorphism as the list of images of element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteEndo {
    images: Vec<usize>,
}

impl FiniteEndo {
    /// Checks `α(xy) = α(x)α(y)` on every pair.
    pub fn new(g: &FiniteGroup, images: Vec<usize>) -> Result<FiniteEndo> {
        let n = g.order();
        if images.len() != n || images.iter().any(|&y| y >= n) {
            return Err(Error::Parse(format!("image array must list {n} element indices")));
        }
        for a in 0..n {
            for b in 0..n {
                if images[g.mul(a, b)] != g.mul(images[a], images[b]) {
                    return Err(Error::Parse(format!("not a homomorphism: α({a}·{b}) ≠ α({a})·α({b})")));
                }
            }
        }
        Ok(FiniteEndo { images })
    }

    pub fn identity(g: &FiniteGroup) -> FiniteEndo {
        FiniteEndo { images: (0..g.order()).collect() }
    }

    pub fn trivial(g: &FiniteGroup) -> FiniteEndo {
        FiniteEndo { images: vec![g.identity(); g.order()] }
    }

    /// `x ↦ x^k` on an abelian group (`x ↦ kx` additively).
    pub fn power_map(g: &FiniteGroup, k: usize) -> Result<FiniteEndo> {
        let images = (0..g.order()).map(|x| (0..k).fold(g.identity(), |acc, _| g.mul(acc, x))).collect();
        FiniteEndo::new(g, images)
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn apply_n(&self, mut x: usize, n: usize) -> usize {
        for _ in 0..n {
            x = self.images[x];
        }
        x
    }

    pub fn image(&self, s: &ElementSet) -> ElementSet {
        ElementSet::from_elements(s.universe(), s.iter().map(|x| self.images[x]))
    }

    pub fn preimage(&self, s: &ElementSet) -> ElementSet {
        let n = s.universe();
        ElementSet::from_elements(n, (0..n).filter(|&x| s.contains(self.images[x])))
    }

    pub fn compose(&self, other: &FiniteEndo) -> FiniteEndo {
        FiniteEndo { images: other.images.iter().map(|&x| self.images[x]).collect() }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.images.len()];
        self.images.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn kernel(&self, g: &FiniteGroup) -> ElementSet {
        self.preimage(&g.trivial())
    }
}

/// Every endomorphism of `g`: images of a generating set are chosen among
/// elements of dividing order, extended along words, and checked.
pub fn all_endomorphisms(g: &FiniteGroup, bound: usize) -> Result<Vec<FiniteEndo>> {
    if g.order() > bound {
        return Err(Error::BoundExceeded { order: g.order(), bound });
    }
    let gens = g.generators();
    let n = g.order();
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| {
            let o = g.element_order(s);
            (0..n).filter(|&y| o.is_multiple_of(g.element_order(y))).collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let imgs: Vec<usize> = choice.iter().zip(&candidates).map(|(&c, cs)| cs[c]).collect();
        if let Some(map) = extend(g, &gens, &imgs) {
            if let Ok(e) = FiniteEndo::new(g, map) {
                out.push(e);
            }
        }
        // odometer over candidate choices
        let mut i = 0;
        loop {
            if i == choice.len() {
                out.sort_by(|a, b| a.images.cmp(&b.images));
                out.dedup();
                return Ok(out);
            }
            choice[i] += 1;
            if choice[i] < candidates[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Extend generator images along right multiplication; `None` on conflict.
fn extend(g: &FiniteGroup, gens: &[usize], imgs: &[usize]) -> Option<Vec<usize>> {
    let mut map = vec![usize::MAX; g.order()];
    map[g.identity()] = g.identity();
    let mut queue = VecDeque::from([g.identity()]);
    while let Some(x) = queue.pop_front() {
        for (&s, &t) in gens.iter().zip(imgs) {
            let y = g.mul(x, s);
            let fy = g.mul(map[x], t);
            if map[y] == usize::MAX {
                map[y] = fy;
                queue.push_back(y);
            } else if map[y] != fy {
                return None;
            }
        }
    }
    Some(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::group::{catalog, DEFAULT_BOUND};

    fn brute_force_count(g: &FiniteGroup) -> usize {
        // all maps from a generating pair/triple, then full check
        let n = g.order();
        let mut count = 0;
        let gens = g.generators();
        let total = n.pow(gens.len() as u32);
        for code in 0..total {
            let mut c = code;
            let imgs: Vec<usize> = gens
                .iter()
                .map(|_| {
                    let v = c % n;
                    c /= n;
                    v
                })
                .collect();
            if let Some(m) = extend(g, &gens, &imgs) {
                if FiniteEndo::new(g, m).is_ok() {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn cyclic_counts() {
        for (n, k) in [(2, 2), (3, 3), (4, 4), (6, 6), (8, 8)] {
            let g = FiniteGroup::cyclic(n);
            assert_eq!(all_endomorphisms(&g, DEFAULT_BOUND).unwrap().len(), k, "C{n}");
        }
    }

    #[test]
    fn c4_endomorphisms_are_multiplications() {
        let g = FiniteGroup::cyclic(4);
        let ends = all_endomorphisms(&g, DEFAULT_BOUND).unwrap();
        let expected: Vec<FiniteEndo> = (0..4).map(|k| FiniteEndo::power_map(&g, k).unwrap()).collect();
        for e in &expected {
            assert!(ends.contains(e));
        }
    }

    #[test]
    fn order_filter_loses_nothing() {
        for g in catalog() {
            assert_eq!(all_endomorphisms(&g, DEFAULT_BOUND).unwrap().len(), brute_force_count(&g), "{}", g.name());
        }
    }

    #[test]
    fn known_endomorphism_counts() {
        // |End(C2×C2)| = |M₂(F₂)|, |End(C2×C4)| = 2·2·2·4,
        // End(S3): 6 automorphisms, 3 maps onto a C2, the trivial map;
        // End(Q8): 24 automorphisms, 3 maps onto the centre, the trivial map
        let counts: Vec<(String, usize)> = catalog()
            .iter()
            .map(|g| (g.name().to_string(), all_endomorphisms(g, DEFAULT_BOUND).unwrap().len()))
            .collect();
        let get = |name: &str| counts.iter().find(|(n, _)| n == name).unwrap().1;
        assert_eq!(get("C2xC2"), 16);
        assert_eq!(get("C2xC2xC2"), 512);
        assert_eq!(get("C3xC3"), 81);
        assert_eq!(get("C2xC4"), 32);
        assert_eq!(get("S3"), 10);
        assert_eq!(get("Q8"), 28);
    }

    #[test]
    fn non_homomorphism_rejected() {
        let g = FiniteGroup::cyclic(3);
        assert!(FiniteEndo::new(&g, vec![0, 1, 1]).is_err());
    }
}
