//! The deterministic instance stream of the suite.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::finite::{all_endomorphisms, catalog, FiniteGroup, FiniteInstance, DEFAULT_BOUND};
use crate::instance::GroupInstance;
use crate::padic::arith::{q, qf};
use crate::padic::{PadicInstance, QMat};
use crate::shift::{ShiftInstance, Sidedness};

pub const PRIMES: [u64; 3] = [2, 3, 5];
/// Seeded random integral matrices added to the named ones.
pub const RANDOM_PADIC: usize = 12;

/// Every catalog group with every endomorphism.
pub fn finite_instances() -> Result<Vec<FiniteInstance>> {
    let mut out = Vec::new();
    for g in catalog() {
        let g = Arc::new(g);
        for e in all_endomorphisms(&g, DEFAULT_BOUND)? {
            out.push(FiniteInstance::new(g.clone(), e));
        }
    }
    Ok(out)
}

/// The twelve named matrices at `p`.
pub fn named_matrices(p: u64) -> Vec<(&'static str, QMat)> {
    let pi = p as i64;
    let companion = QMat::from_ints(&[&[0, -5], &[1, 3]]);
    vec![
        ("diag(1/p)", QMat::diag(&[qf(1, pi)])),
        ("diag(1/p,1/p^2)", QMat::diag(&[qf(1, pi), qf(1, pi * pi)])),
        ("diag(1/p,1,p)", QMat::diag(&[qf(1, pi), q(1), q(pi)])),
        ("diag(1/p,1/p)", QMat::diag(&[qf(1, pi), qf(1, pi)])),
        ("companion(x^2-3x+5)", companion.clone()),
        ("companion(x^2-3x+5)^-1", companion.inverse().expect("invertible")),
        ("unipotent", QMat::from_ints(&[&[1, 1], &[0, 1]])),
        ("nilpotent", QMat::from_ints(&[&[0, 1], &[0, 0]])),
        (
            "singular-mixed",
            QMat::from_rows(vec![vec![qf(1, pi), q(1), q(0)], vec![q(0), q(0), q(1)], vec![q(0), q(0), q(0)]]),
        ),
        ("jordan(1/p)", QMat::from_rows(vec![vec![qf(1, pi), q(1)], vec![q(0), qf(1, pi)]])),
        ("upper(p,1/p)", QMat::from_rows(vec![vec![q(pi), q(1)], vec![q(0), qf(1, pi)]])),
        (
            "companion(x^3-1/p)",
            QMat::from_rows(vec![vec![q(0), q(0), qf(1, pi)], vec![q(1), q(0), q(0)], vec![q(0), q(1), q(0)]]),
        ),
    ]
}

pub fn named_padic() -> Result<Vec<(String, PadicInstance)>> {
    let mut out = Vec::new();
    for p in PRIMES {
        for (name, m) in named_matrices(p) {
            out.push((format!("{name} p={p}"), PadicInstance::new(p, m)?));
        }
    }
    Ok(out)
}

/// Random integral matrices, replaced by their inverse when invertible so
/// that the scale is not trivially 1.
pub fn random_padic(seed: u64, count: usize) -> Result<Vec<PadicInstance>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for _ in 0..count {
        let n = rng.gen_range(1..=3);
        let p = PRIMES[rng.gen_range(0..PRIMES.len())];
        let a = QMat::from_rows((0..n).map(|_| (0..n).map(|_| q(rng.gen_range(-9..=9))).collect()).collect());
        let m = a.inverse().unwrap_or(a);
        out.push(PadicInstance::new(p, m)?);
    }
    Ok(out)
}

pub fn shift_instances() -> Vec<ShiftInstance> {
    let mut out = Vec::new();
    for q in [2, 3] {
        let f = Arc::new(FiniteGroup::cyclic(q));
        for side in [Sidedness::OneSided, Sidedness::TwoSided] {
            out.push(ShiftInstance::new(f.clone(), side));
        }
    }
    out
}

/// The full stream for a seed.
pub fn generate(seed: u64) -> Result<Vec<GroupInstance>> {
    let mut out: Vec<GroupInstance> = finite_instances()?.into_iter().map(GroupInstance::Finite).collect();
    out.extend(named_padic()?.into_iter().map(|(_, p)| GroupInstance::Padic(p)));
    out.extend(random_padic(seed, RANDOM_PADIC)?.into_iter().map(GroupInstance::Padic));
    out.extend(shift_instances().into_iter().map(GroupInstance::Shift));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stream_sizes() {
        assert!(finite_instances().unwrap().len() >= 100);
        assert_eq!(named_padic().unwrap().len(), 36);
        assert_eq!(shift_instances().len(), 4);
        let a: Vec<String> = random_padic(7, 5).unwrap().iter().map(|p| format!("{:?}", p.matrix())).collect();
        let b: Vec<String> = random_padic(7, 5).unwrap().iter().map(|p| format!("{:?}", p.matrix())).collect();
        assert_eq!(a, b);
    }
}
