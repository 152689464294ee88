//! The contraction/Levi decomposition in a backend-independent shape.
//!
//! Each of `con, con⁻, par, par⁻, lev, nub, bik, Ω` is an explicit element
//! set, a subspace basis, a symbolic shift descriptor, or not computed.

use serde::Serialize;

use crate::error::Result;
use crate::finite::{ElementSet, FiniteDecomposition, FiniteInstance};
use crate::padic::arith::{format_rational, q};
use crate::padic::instance::{intersect, rank};
use crate::padic::{PadicDecomposition, PadicInstance};
use crate::shift::{ShiftDecomposition, ShiftInstance, ShiftSet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Descriptor {
    Elements { elements: Vec<String> },
    Subspace { dim: usize, basis: Vec<Vec<String>>, exact: bool },
    Symbolic { set: ShiftSet, closed: bool, description: String },
    NotComputed { reason: String },
}

impl Descriptor {
    pub fn is_computed(&self) -> bool {
        !matches!(self, Descriptor::NotComputed { .. })
    }

    pub fn describe(&self) -> String {
        match self {
            Descriptor::Elements { elements } => format!("{{{}}}", elements.join(",")),
            Descriptor::Subspace { dim: 0, .. } => "{0}".into(),
            Descriptor::Subspace { dim, basis, exact } => {
                let vs: Vec<String> = basis.iter().map(|v| format!("({})", v.join(", "))).collect();
                let tag = if *exact { "" } else { ", approximate basis" };
                format!("span{{{}}} (dim {dim}{tag})", vs.join(", "))
            }
            Descriptor::Symbolic { description, .. } => description.clone(),
            Descriptor::NotComputed { reason } => format!("not computed ({reason})"),
        }
    }
}

pub const FIELDS: [&str; 8] = ["con", "con-", "par", "par-", "lev", "nub", "bik", "omega"];

/// The decomposition as computed by one backend.
#[derive(Debug, Clone)]
pub enum DynamicalDecomposition {
    Finite { inst: FiniteInstance, sets: FiniteDecomposition },
    Padic { inst: PadicInstance, spaces: PadicDecomposition },
    Shift { inst: ShiftInstance, sets: ShiftDecomposition },
}

impl DynamicalDecomposition {
    pub fn finite(inst: &FiniteInstance) -> Result<Self> {
        Ok(DynamicalDecomposition::Finite { inst: inst.clone(), sets: inst.exact_sets()? })
    }

    pub fn padic(inst: &PadicInstance) -> Result<Self> {
        Ok(DynamicalDecomposition::Padic { inst: inst.clone(), spaces: inst.decompose()? })
    }

    pub fn shift(inst: &ShiftInstance) -> Self {
        DynamicalDecomposition::Shift { inst: inst.clone(), sets: inst.decompose() }
    }

    /// The eight descriptors in [`FIELDS`] order.
    pub fn fields(&self) -> Vec<(&'static str, Descriptor)> {
        let ds = match self {
            DynamicalDecomposition::Finite { inst, sets } => {
                let el = |s: &ElementSet| Descriptor::Elements {
                    elements: s.iter().map(|x| inst.group.label(x).to_string()).collect(),
                };
                [&sets.con, &sets.con_minus, &sets.par, &sets.par_minus, &sets.lev, &sets.nub, &sets.bik, &sets.omega]
                    .map(el)
                    .to_vec()
            }
            DynamicalDecomposition::Padic { inst, spaces } => {
                let n = inst.dim();
                let sub = |vs: &[Vec<_>]| Descriptor::Subspace {
                    dim: rank(vs),
                    basis: vs.iter().map(|v| v.iter().map(format_rational).collect()).collect(),
                    exact: spaces.exact || rank(vs) == 0 || rank(vs) == n,
                };
                let whole: Vec<Vec<_>> = (0..n).map(|i| (0..n).map(|j| q(i64::from(i == j))).collect()).collect();
                let bik = intersect(&spaces.con, &spaces.par_minus);
                vec![
                    sub(&spaces.con),
                    sub(&spaces.con_minus),
                    sub(&spaces.par),
                    sub(&spaces.par_minus),
                    sub(&spaces.lev),
                    // nub ⊆ pᵏL for the tidy adapted lattice L and every k
                    sub(&[]),
                    sub(&bik),
                    sub(&whole),
                ]
            }
            DynamicalDecomposition::Shift { sets, .. } => {
                let sym = |s: ShiftSet| Descriptor::Symbolic {
                    set: s,
                    closed: s.is_closed(),
                    description: s.describe().into(),
                };
                vec![
                    sym(sets.con),
                    sym(sets.con_minus),
                    sym(sets.par),
                    sym(sets.par_minus),
                    sym(sets.lev),
                    match sets.nub {
                        Some(s) => sym(s),
                        None => Descriptor::NotComputed { reason: "nub of the two-sided shift is not derived".into() },
                    },
                    sym(sets.bik),
                    sym(sets.omega),
                ]
            }
        };
        FIELDS.into_iter().zip(ds).collect()
    }

    /// The structural invariants on explicit fields; returns the violations.
    pub fn invariant_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        match self {
            DynamicalDecomposition::Finite { inst, sets } => {
                let img = |s: &ElementSet| inst.endo.image(s);
                if sets.lev != sets.par.intersection(&sets.par_minus) {
                    out.push("lev ≠ par ∩ par⁻".into());
                }
                if !sets.bik.is_subset(&sets.nub) {
                    out.push("bik ⊄ nub".into());
                }
                if !img(&sets.con).is_subset(&sets.con) || !img(&sets.par).is_subset(&sets.par) {
                    out.push("con or par not α-invariant".into());
                }
                for (name, s) in [("lev", &sets.lev), ("par⁻", &sets.par_minus), ("nub", &sets.nub)] {
                    if img(s) != *s {
                        out.push(format!("α({name}) ≠ {name}"));
                    }
                }
            }
            DynamicalDecomposition::Padic { inst, spaces } => {
                let meet = intersect(&spaces.par, &spaces.par_minus);
                if rank(&meet) != rank(&spaces.lev) || rank(&[meet, spaces.lev.clone()].concat()) != rank(&spaces.lev) {
                    out.push("lev ≠ par ∩ par⁻".into());
                }
                if spaces.exact {
                    for (name, s) in [("con", &spaces.con), ("par", &spaces.par)] {
                        if !inst.is_invariant(s) {
                            out.push(format!("{name} not α-invariant"));
                        }
                    }
                    for (name, s) in [("lev", &spaces.lev), ("par⁻", &spaces.par_minus)] {
                        if !inst.is_stable(s) {
                            out.push(format!("α({name}) ≠ {name}"));
                        }
                    }
                }
            }
            DynamicalDecomposition::Shift { sets, .. } => {
                let meet = match (sets.par, sets.par_minus) {
                    (ShiftSet::Whole, s) | (s, ShiftSet::Whole) => Some(s),
                    _ => None,
                };
                if meet.is_some_and(|m| m != sets.lev) {
                    out.push("lev ≠ par ∩ par⁻".into());
                }
                if let Some(nub) = sets.nub {
                    if nub != ShiftSet::Whole && nub != sets.bik && sets.bik != ShiftSet::Trivial {
                        out.push("bik ⊄ nub".into());
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::{all_endomorphisms, catalog, DEFAULT_BOUND};
    use crate::padic::arith::qf;
    use crate::padic::QMat;
    use crate::shift::Sidedness;
    use std::sync::Arc;

    #[test]
    fn finite_invariants_hold_on_the_catalog() {
        for g in catalog().into_iter().filter(|g| g.order() <= 8) {
            let g = Arc::new(g);
            for e in all_endomorphisms(&g, DEFAULT_BOUND).unwrap().into_iter().take(40) {
                let d = DynamicalDecomposition::finite(&FiniteInstance::new(g.clone(), e)).unwrap();
                assert!(d.invariant_violations().is_empty(), "{:?}", d.invariant_violations());
            }
        }
    }

    #[test]
    fn padic_three_blocks() {
        let inst = PadicInstance::new(3, QMat::diag(&[qf(1, 3), q(1), q(3)])).unwrap();
        let d = DynamicalDecomposition::padic(&inst).unwrap();
        assert!(d.invariant_violations().is_empty());
        let f = d.fields();
        let dim = |i: usize| match &f[i].1 {
            Descriptor::Subspace { dim, .. } => *dim,
            _ => panic!(),
        };
        assert_eq!([0, 1, 2, 3, 4, 5, 6, 7].map(dim), [1, 1, 2, 2, 1, 0, 0, 3]);
        // diag(1/p, 1, p): e₃ contracts since |p|ₚ < 1
        assert_eq!(f[0].1.describe(), "span{(0, 0, 1)} (dim 1)");
    }

    #[test]
    fn shift_nub_status() {
        let f = Arc::new(crate::finite::FiniteGroup::cyclic(2));
        let one = DynamicalDecomposition::shift(&ShiftInstance::new(f.clone(), Sidedness::OneSided));
        assert_eq!(one.fields()[5].1.describe(), "G");
        let two = DynamicalDecomposition::shift(&ShiftInstance::new(f, Sidedness::TwoSided));
        assert!(!two.fields()[5].1.is_computed());
        assert!(two.invariant_violations().is_empty());
    }
}
