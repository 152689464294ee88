//! Backend-independent recursions.
//!
//! Everything here is written against [`Backend`], which only knows how to
//! take images, preimages, intersections and finite indices of compact
//! subgroups. The stage sequences
//!
//! ```text
//! U_{-n} = U ∩ α⁻¹(U ∩ α⁻¹(… U))          (minus stages, → U₋)
//! U_{n+1} = U ∩ α(U_n),  U_0 = U            (plus stages, → U₊)
//! ```
//!
//! are computed so that every intermediate object stays compact.

use serde::{Deserialize, Serialize};
use std::fmt::Debug;

use crate::error::{Error, Result};

/// Group indices. Scales of the instances we handle are tiny, but `p^k` for a
/// few dozen stages still overflows `u64` on `p = 5`.
pub type Index = u128;

/// Default number of minus stages tried by [`tidy_above`].
pub const DEFAULT_L_MAX: usize = 64;

/// How a scale value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exhaustive,
    NewtonPolygon,
    StageStabilization,
    CompactTrivial,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Exhaustive => "exhaustive",
            Method::NewtonPolygon => "newton-polygon",
            Method::StageStabilization => "stage-stabilization",
            Method::CompactTrivial => "compact-trivial",
        })
    }
}

/// The scale together with a subgroup attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleResult<S> {
    pub value: Index,
    pub tidy: S,
    pub displacement: Index,
    pub method: Method,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StageRecord<S> {
    pub stage: usize,
    pub subgroup: S,
    pub displacement: Index,
}

pub type StageTrace<S> = Vec<StageRecord<S>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TidyVerdict {
    pub tidy: bool,
    pub displacement: Index,
    pub scale: Index,
}

/// The primitives a group family must provide.
///
/// Subgroups are compared with `==`, so implementations keep them in a
/// canonical form.
pub trait Backend {
    type Subgroup: Clone + PartialEq + Debug;

    /// `α(K)`.
    fn image(&self, k: &Self::Subgroup) -> Self::Subgroup;
    /// `{x ∈ within : α(x) ∈ target}`.
    fn preimage_meet(&self, target: &Self::Subgroup, within: &Self::Subgroup) -> Self::Subgroup;
    fn meet(&self, a: &Self::Subgroup, b: &Self::Subgroup) -> Self::Subgroup;
    fn contains(&self, big: &Self::Subgroup, small: &Self::Subgroup) -> bool;
    /// `[K : H]` for `H ⊆ K` open in `K`.
    fn index(&self, k: &Self::Subgroup, h: &Self::Subgroup) -> Result<Index>;
    /// Certificate test for `V = V₊V₋`.
    fn is_tidy_above(&self, v: &Self::Subgroup) -> Result<bool>;
    fn scale(&self) -> Result<ScaleResult<Self::Subgroup>>;

    /// `K₊ ∩ K₋`. The default takes both limits by waiting for the stage
    /// chains to stabilise, which is exact whenever they do.
    fn core_part(&self, k: &Self::Subgroup) -> Result<Self::Subgroup> {
        let minus = stabilize(|v| self.preimage_meet(v, v), k.clone(), STABILIZE_BUDGET)
            .ok_or_else(|| Error::NotComputable("K₋ chain does not stabilise".into()))?;
        let plus = stabilize(|v| self.meet(k, &self.image(v)), k.clone(), STABILIZE_BUDGET)
            .ok_or_else(|| Error::NotComputable("K₊ chain does not stabilise".into()))?;
        Ok(self.meet(&minus, &plus))
    }
}

const STABILIZE_BUDGET: usize = 256;

/// Iterate `f` from `start` until a fixed point, or give up.
pub fn stabilize<S: PartialEq, F: Fn(&S) -> S>(f: F, start: S, budget: usize) -> Option<S> {
    let mut cur = start;
    for _ in 0..budget {
        let next = f(&cur);
        if next == cur {
            return Some(cur);
        }
        cur = next;
    }
    None
}

/// `[α(U) : α(U) ∩ U]`.
pub fn displacement_index<B: Backend + ?Sized>(b: &B, u: &B::Subgroup) -> Result<Index> {
    let au = b.image(u);
    let m = b.meet(&au, u);
    b.index(&au, &m)
}

/// `{x ∈ U : αʲ(x) ∈ U for j ≤ n}`.
pub fn minus_stage<B: Backend + ?Sized>(b: &B, u: &B::Subgroup, n: usize) -> B::Subgroup {
    let mut v = u.clone();
    for _ in 0..n {
        v = b.preimage_meet(&v, u);
    }
    v
}

/// `U_n` with `U_0 = U`, `U_{n+1} = U ∩ α(U_n)`.
pub fn plus_stage<B: Backend + ?Sized>(b: &B, u: &B::Subgroup, n: usize) -> B::Subgroup {
    let mut v = u.clone();
    for _ in 0..n {
        v = b.meet(u, &b.image(&v));
    }
    v
}

pub fn minus_trace<B: Backend + ?Sized>(b: &B, u: &B::Subgroup, n: usize) -> Result<StageTrace<B::Subgroup>> {
    let mut out = Vec::with_capacity(n + 1);
    let mut v = u.clone();
    for stage in 0..=n {
        if stage > 0 {
            v = b.preimage_meet(&v, u);
        }
        out.push(StageRecord { stage, displacement: displacement_index(b, &v)?, subgroup: v.clone() });
    }
    Ok(out)
}

/// Plus stages of `U`. A stage whose displacement index is infinite (a
/// rank-deficient lattice, say) records 0.
pub fn plus_trace<B: Backend + ?Sized>(b: &B, u: &B::Subgroup, n: usize) -> StageTrace<B::Subgroup> {
    let mut out = Vec::with_capacity(n + 1);
    let mut v = u.clone();
    for stage in 0..=n {
        if stage > 0 {
            v = b.meet(u, &b.image(&v));
        }
        let displacement = displacement_index(b, &v).unwrap_or(0);
        out.push(StageRecord { stage, displacement, subgroup: v.clone() });
    }
    out
}

/// First minus stage of `U` passing the backend's tidy-above certificate.
pub fn tidy_above<B: Backend + ?Sized>(b: &B, u: &B::Subgroup, l_max: usize) -> Result<(B::Subgroup, usize)> {
    let mut v = u.clone();
    for l in 0..=l_max {
        if l > 0 {
            v = b.preimage_meet(&v, u);
        }
        if b.is_tidy_above(&v)? {
            return Ok((v, l));
        }
    }
    Err(Error::StageBudgetExceeded(l_max))
}

/// Tidiness by minimality: displacement equals the scale.
pub fn is_tidy<B: Backend + ?Sized>(b: &B, u: &B::Subgroup) -> Result<TidyVerdict> {
    let scale = b.scale()?.value;
    let displacement = displacement_index(b, u)?;
    Ok(TidyVerdict { tidy: displacement == scale, displacement, scale })
}

/// `p^k` with overflow reported rather than wrapped.
pub fn checked_pow(p: u64, k: u64) -> Result<Index> {
    let mut acc: Index = 1;
    for _ in 0..k {
        acc = acc.checked_mul(p as Index).ok_or_else(|| Error::Overflow(format!("{p}^{k}")))?;
    }
    Ok(acc)
}
