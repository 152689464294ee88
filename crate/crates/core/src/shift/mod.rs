//! Full shifts `Fᴺ` and `Fᶻ` over a finite group `F` with the left shift
//! `σ(x)ₙ = xₙ₊₁`.
//!
//! Compact open subgroups are cylinders `U(S, [a, b]) = {x : x|[a,b] ∈ S}`
//! with `S ≤ F^{[a,b]}`. Window patterns are encoded in mixed radix `|F|`
//! with coordinate `a` least significant. On `Fᴺ` coordinates start at 1.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dynamics::{Backend, Index, Method, ScaleResult};
use crate::error::{Error, Result};
use crate::finite::{ElementSet, FiniteGroup};

/// Largest window group handled, `|F|^w`.
pub const MAX_WINDOW_ORDER: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sidedness {
    OneSided,
    TwoSided,
}

#[derive(Debug, Clone)]
pub struct ShiftInstance {
    f: Arc<FiniteGroup>,
    side: Sidedness,
}

/// `U(S, [a, b])`; `window = None` is the whole group.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WindowedSubgroup {
    window: Option<(i64, i64)>,
    set: ElementSet,
}

impl fmt::Debug for WindowedSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.window {
            None => write!(f, "G"),
            Some((a, b)) => write!(f, "U([{a},{b}], |S| = {})", self.set.len()),
        }
    }
}

/// A configuration equal to `e` outside `start .. start + values.len()`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteSupportConfig {
    pub start: i64,
    pub values: Vec<usize>,
}

/// Subgroups of a full shift described by a rule rather than a set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShiftSet {
    Whole,
    Trivial,
    /// Finitely supported configurations of `Fᴺ`; dense, not closed.
    EventuallyTrivial,
    /// `xₙ = e` for all large `n`.
    SupportBoundedAbove,
    /// `xₙ = e` for all small `n`.
    SupportBoundedBelow,
}

impl ShiftSet {
    pub fn is_closed(self) -> bool {
        matches!(self, ShiftSet::Whole | ShiftSet::Trivial)
    }

    pub fn describe(self) -> &'static str {
        match self {
            ShiftSet::Whole => "G",
            ShiftSet::Trivial => "{e}",
            ShiftSet::EventuallyTrivial => "eventually trivial configurations (dense, not closed)",
            ShiftSet::SupportBoundedAbove => "support bounded above (dense, not closed)",
            ShiftSet::SupportBoundedBelow => "support bounded below (dense, not closed)",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShiftDecomposition {
    pub con: ShiftSet,
    pub con_minus: ShiftSet,
    pub par: ShiftSet,
    pub par_minus: ShiftSet,
    pub lev: ShiftSet,
    /// `None` where the value is not derived (the two-sided nub).
    pub nub: Option<ShiftSet>,
    pub bik: ShiftSet,
    pub omega: ShiftSet,
}

impl ShiftInstance {
    pub fn new(f: Arc<FiniteGroup>, side: Sidedness) -> ShiftInstance {
        ShiftInstance { f, side }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.f
    }

    pub fn side(&self) -> Sidedness {
        self.side
    }

    pub fn name(&self) -> String {
        let idx = match self.side {
            Sidedness::OneSided => "N",
            Sidedness::TwoSided => "Z",
        };
        format!("{}^{idx}", self.f.name())
    }

    fn q(&self) -> usize {
        self.f.order()
    }

    fn window_order(&self, w: usize) -> Result<usize> {
        self.q()
            .checked_pow(w as u32)
            .filter(|&n| n <= MAX_WINDOW_ORDER)
            .ok_or(Error::BoundExceeded { order: usize::MAX, bound: MAX_WINDOW_ORDER })
    }

    fn first_index(&self) -> Option<i64> {
        match self.side {
            Sidedness::OneSided => Some(1),
            Sidedness::TwoSided => None,
        }
    }

    pub fn whole(&self) -> WindowedSubgroup {
        WindowedSubgroup { window: None, set: ElementSet::full(1) }
    }

    /// `U(S, [a, b])` after checking that `S` is a subgroup of `F^{[a,b]}`.
    pub fn windowed(&self, a: i64, b: i64, s: ElementSet) -> Result<WindowedSubgroup> {
        if b < a || self.first_index().is_some_and(|lo| a < lo) {
            return Err(Error::UnsupportedInstance(format!("window [{a},{b}] is outside the index set")));
        }
        let w = (b - a + 1) as usize;
        let n = self.window_order(w)?;
        if s.universe() != n {
            return Err(Error::NotASubgroup(format!("constraint set lives on {} patterns, not {n}", s.universe())));
        }
        let e = self.identity_code(w);
        if !s.contains(e) || s.iter().any(|x| s.iter().any(|y| !s.contains(self.f.power_mul(w, x, y)))) {
            return Err(Error::NotASubgroup("window constraint is not a subgroup".into()));
        }
        Ok(self.normalize(Some((a, b)), s))
    }

    /// `{x : x_i = e for i in [a, b]}`.
    pub fn trivial_on(&self, a: i64, b: i64) -> Result<WindowedSubgroup> {
        let w = (b - a + 1) as usize;
        let n = self.window_order(w)?;
        self.windowed(a, b, ElementSet::from_elements(n, [self.identity_code(w)]))
    }

    pub fn identity_code(&self, w: usize) -> usize {
        let (q, e) = (self.q(), self.f.identity());
        (0..w).fold(0, |acc, _| acc * q + e)
    }

    pub fn window(&self, u: &WindowedSubgroup) -> Option<(i64, i64)> {
        u.window
    }

    pub fn constraint<'a>(&self, u: &'a WindowedSubgroup) -> &'a ElementSet {
        &u.set
    }

    /// Drop edge coordinates on which the constraint is a full cylinder.
    fn normalize(&self, window: Option<(i64, i64)>, set: ElementSet) -> WindowedSubgroup {
        let q = self.q();
        let Some((mut a, mut b)) = window else { return self.whole() };
        let mut set = set;
        loop {
            let w = (b - a + 1) as usize;
            if w == 0 {
                return self.whole();
            }
            let rest = q.pow(w as u32 - 1);
            let low = ElementSet::from_elements(rest, set.iter().map(|c| c / q));
            if set.len() == q * low.len() {
                set = low;
                a += 1;
                continue;
            }
            let high = ElementSet::from_elements(rest, set.iter().map(|c| c % rest));
            if set.len() == q * high.len() {
                set = high;
                b -= 1;
                continue;
            }
            return WindowedSubgroup { window: Some((a, b)), set };
        }
    }

    /// The constraint of `u` read on the larger window `[a, b]`.
    fn extend(&self, u: &WindowedSubgroup, a: i64, b: i64) -> Result<ElementSet> {
        let w = (b - a + 1) as usize;
        let n = self.window_order(w)?;
        let Some((ua, ub)) = u.window else { return Ok(ElementSet::full(n)) };
        debug_assert!(a <= ua && ub <= b);
        let q = self.q();
        let low = q.pow((ua - a) as u32);
        let inner = q.pow((ub - ua + 1) as u32);
        let high = q.pow((b - ub) as u32);
        let mut out = ElementSet::empty(n);
        for s in u.set.iter() {
            for h in 0..high {
                for l in 0..low {
                    out.insert(l + low * (s + inner * h));
                }
            }
        }
        Ok(out)
    }

    fn union_window(&self, us: &[&WindowedSubgroup]) -> Option<(i64, i64)> {
        us.iter().filter_map(|u| u.window).reduce(|x, y| (x.0.min(y.0), x.1.max(y.1)))
    }

    /// Projection of the constraint of `u` onto `[a, b]`.
    pub fn project(&self, u: &WindowedSubgroup, a: i64, b: i64) -> Result<ElementSet> {
        let (lo, hi) = match u.window {
            Some((ua, ub)) => (a.min(ua), b.max(ub)),
            None => (a, b),
        };
        let full = self.extend(u, lo, hi)?;
        let q = self.q();
        let skip = q.pow((a - lo) as u32);
        let n = self.window_order((b - a + 1) as usize)?;
        Ok(ElementSet::from_elements(n, full.iter().map(|c| (c / skip) % n)))
    }

    fn checked_image(&self, u: &WindowedSubgroup) -> Result<WindowedSubgroup> {
        let Some((a, b)) = u.window else { return Ok(self.whole()) };
        match self.side {
            Sidedness::TwoSided => Ok(WindowedSubgroup { window: Some((a - 1, b - 1)), set: u.set.clone() }),
            Sidedness::OneSided if a >= 2 => Ok(WindowedSubgroup { window: Some((a - 1, b - 1)), set: u.set.clone() }),
            Sidedness::OneSided => {
                // coordinate 1 is forgotten by the shift
                if b == 1 {
                    return Ok(self.whole());
                }
                let rest = self.project(u, 2, b)?;
                Ok(self.normalize(Some((1, b - 1)), rest))
            }
        }
    }

    /// `σ⁻¹(U)`; on `Fᴺ` coordinate 1 becomes free.
    pub fn preimage(&self, u: &WindowedSubgroup) -> WindowedSubgroup {
        match u.window {
            None => self.whole(),
            Some((a, b)) => WindowedSubgroup { window: Some((a + 1, b + 1)), set: u.set.clone() },
        }
    }

    fn checked_meet(&self, x: &WindowedSubgroup, y: &WindowedSubgroup) -> Result<WindowedSubgroup> {
        let Some((a, b)) = self.union_window(&[x, y]) else { return Ok(self.whole()) };
        let s = self.extend(x, a, b)?.intersection(&self.extend(y, a, b)?);
        Ok(self.normalize(Some((a, b)), s))
    }

    fn checked_contains(&self, big: &WindowedSubgroup, small: &WindowedSubgroup) -> Result<bool> {
        let Some((a, b)) = self.union_window(&[big, small]) else { return Ok(true) };
        Ok(self.extend(small, a, b)?.is_subset(&self.extend(big, a, b)?))
    }

    /// Patterns of `S` lying on an infinite chain of overlapping windows,
    /// forward (`V₋` read on the window) or backward (`V₊`).
    fn chain_patterns(&self, u: &WindowedSubgroup, forward: bool) -> ElementSet {
        let Some((a, b)) = u.window else { return u.set.clone() };
        let q = self.q();
        let w = (b - a + 1) as usize;
        let rest = q.pow(w as u32 - 1);
        let mut alive = u.set.clone();
        loop {
            let keep: Vec<usize> = alive
                .iter()
                .filter(|&s| {
                    (0..q).any(|c| {
                        let t = if forward { s / q + rest * c } else { c + q * (s % rest) };
                        alive.contains(t)
                    })
                })
                .collect();
            if keep.len() == alive.len() {
                return alive;
            }
            alive = ElementSet::from_elements(alive.universe(), keep);
        }
    }

    /// `V₊` and `V₋` read on the window of `V`.
    pub fn factor_patterns(&self, v: &WindowedSubgroup) -> (ElementSet, ElementSet) {
        (self.chain_patterns(v, false), self.chain_patterns(v, true))
    }

    pub fn displacement(&self, u: &WindowedSubgroup) -> Result<Index> {
        let au = self.checked_image(u)?;
        let m = self.checked_meet(&au, u)?;
        self.index(&au, &m)
    }

    /// Closed-form descriptors of the full shift.
    pub fn decompose(&self) -> ShiftDecomposition {
        use ShiftSet::*;
        match self.side {
            Sidedness::OneSided => ShiftDecomposition {
                con: EventuallyTrivial,
                con_minus: Whole,
                par: Whole,
                par_minus: Whole,
                lev: Whole,
                nub: Some(Whole),
                bik: Whole,
                omega: Whole,
            },
            Sidedness::TwoSided => ShiftDecomposition {
                con: SupportBoundedAbove,
                con_minus: SupportBoundedBelow,
                par: Whole,
                par_minus: Whole,
                lev: Whole,
                nub: None,
                bik: Trivial,
                omega: Whole,
            },
        }
    }

    /// Image of a descriptor in `F^{[a,b]}`. Each dense descriptor contains
    /// every finitely supported configuration, so it projects onto the full
    /// window group.
    pub fn window_projection(&self, d: ShiftSet, a: i64, b: i64) -> Result<ElementSet> {
        let w = (b - a + 1) as usize;
        let n = self.window_order(w)?;
        Ok(match d {
            ShiftSet::Trivial => ElementSet::from_elements(n, [self.identity_code(w)]),
            _ => ElementSet::full(n),
        })
    }

    /// Patterns on `[1, m]` of configurations killed by `σⁿ`, computed by
    /// applying the shift to every configuration supported in `[1, n]`.
    pub fn iterated_kernel_projection(&self, n: usize, m: usize) -> Result<ElementSet> {
        if self.side != Sidedness::OneSided {
            return Err(Error::NoProjectionRule("iterated kernels of an injective shift".into()));
        }
        let count = self.window_order(n)?;
        let size = self.window_order(m)?;
        let mut out = ElementSet::empty(size);
        for code in 0..count {
            let x = self.config_from_code(1, n, code);
            if self.shift_n(&x, n).is_identity(self.f.identity()) {
                out.insert(self.pattern(&x, 1, m as i64));
            }
        }
        Ok(out)
    }

    pub fn config_from_code(&self, start: i64, w: usize, code: usize) -> FiniteSupportConfig {
        let q = self.q();
        let mut c = code;
        let values = (0..w)
            .map(|_| {
                let d = c % q;
                c /= q;
                d
            })
            .collect();
        FiniteSupportConfig { start, values }.trimmed(self.f.identity())
    }

    /// The pattern of `x` on `[a, b]` as a window code.
    pub fn pattern(&self, x: &FiniteSupportConfig, a: i64, b: i64) -> usize {
        let q = self.q();
        (a..=b).rev().fold(0, |acc, i| acc * q + x.at(i, self.f.identity()))
    }

    pub fn contains_config(&self, u: &WindowedSubgroup, x: &FiniteSupportConfig) -> bool {
        match u.window {
            None => true,
            Some((a, b)) => u.set.contains(self.pattern(x, a, b)),
        }
    }

    pub fn shift(&self, x: &FiniteSupportConfig) -> FiniteSupportConfig {
        self.shift_n(x, 1)
    }

    pub fn shift_n(&self, x: &FiniteSupportConfig, n: usize) -> FiniteSupportConfig {
        let e = self.f.identity();
        let mut y = FiniteSupportConfig { start: x.start - n as i64, values: x.values.clone() };
        if self.side == Sidedness::OneSided {
            let drop = (1 - y.start).clamp(0, y.values.len() as i64) as usize;
            y.values.drain(..drop);
            y.start += drop as i64;
        }
        y.trimmed(e)
    }

    /// The right shift, a section of `σ`: `σ(τ(x)) = x`.
    pub fn right_shift(&self, x: &FiniteSupportConfig) -> FiniteSupportConfig {
        FiniteSupportConfig { start: x.start + 1, values: x.values.clone() }.trimmed(self.f.identity())
    }

    /// `σⁿ(x)` is `e` on `[a, b]` for all large `n`, and the least such `n`.
    pub fn orbit_leaves_window(&self, x: &FiniteSupportConfig, a: i64, b: i64) -> usize {
        let e = self.f.identity();
        let mut y = x.clone();
        let mut n = 0;
        while (a..=b).any(|i| y.at(i, e) != e) {
            y = self.shift(&y);
            n += 1;
        }
        n
    }

    /// Every subgroup `U(S, [a, a + w - 1])`, deduplicated after trimming.
    pub fn windowed_subgroups(&self, a: i64, w: usize) -> Result<Vec<WindowedSubgroup>> {
        let pow = self.f.direct_power(w)?;
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for s in pow.all_subgroups(pow.order())? {
            let u = self.windowed(a, a + w as i64 - 1, s)?;
            if seen.insert(u.clone()) {
                out.push(u);
            }
        }
        Ok(out)
    }
}

impl FiniteSupportConfig {
    pub fn at(&self, i: i64, e: usize) -> usize {
        let k = i - self.start;
        if k < 0 || k >= self.values.len() as i64 {
            e
        } else {
            self.values[k as usize]
        }
    }

    pub fn trimmed(mut self, e: usize) -> FiniteSupportConfig {
        while self.values.last() == Some(&e) {
            self.values.pop();
        }
        let lead = self.values.iter().take_while(|&&v| v == e).count();
        self.values.drain(..lead);
        self.start += lead as i64;
        if self.values.is_empty() {
            self.start = 0;
        }
        self
    }

    pub fn is_identity(&self, e: usize) -> bool {
        self.values.iter().all(|&v| v == e)
    }
}

impl Backend for ShiftInstance {
    type Subgroup = WindowedSubgroup;

    fn image(&self, k: &WindowedSubgroup) -> WindowedSubgroup {
        self.checked_image(k).expect("window size is preserved by the shift")
    }

    fn preimage_meet(&self, target: &WindowedSubgroup, within: &WindowedSubgroup) -> WindowedSubgroup {
        self.meet(&self.preimage(target), within)
    }

    fn meet(&self, a: &WindowedSubgroup, b: &WindowedSubgroup) -> WindowedSubgroup {
        self.checked_meet(a, b).expect("union window within bounds")
    }

    fn contains(&self, big: &WindowedSubgroup, small: &WindowedSubgroup) -> bool {
        self.checked_contains(big, small).unwrap_or(false)
    }

    fn index(&self, k: &WindowedSubgroup, h: &WindowedSubgroup) -> Result<Index> {
        let Some((a, b)) = self.union_window(&[k, h]) else { return Ok(1) };
        let (ks, hs) = (self.extend(k, a, b)?, self.extend(h, a, b)?);
        if !hs.is_subset(&ks) {
            return Err(Error::NotContained("windowed subgroup is not contained in the other".into()));
        }
        Ok((ks.len() / hs.len()) as Index)
    }

    /// `V = V₊V₋` holds exactly when the window constraint `S` is the
    /// product of the patterns of `V₊` and `V₋`: outside the window one
    /// factor is free, so only the window matters.
    fn is_tidy_above(&self, v: &WindowedSubgroup) -> Result<bool> {
        if v.window.is_none() {
            return Ok(true);
        }
        let (plus, minus) = self.factor_patterns(v);
        let meet = plus.intersection(&minus).len();
        Ok(plus.len() * minus.len() == v.set.len() * meet)
    }

    fn scale(&self) -> Result<ScaleResult<WindowedSubgroup>> {
        Ok(ScaleResult { value: 1, tidy: self.whole(), displacement: 1, method: Method::CompactTrivial })
    }

    /// Only `K = G` has a closed-form answer.
    fn core_part(&self, k: &WindowedSubgroup) -> Result<WindowedSubgroup> {
        if k.window.is_none() {
            Ok(self.whole())
        } else {
            Err(Error::NotComputable("two-sided trajectories through a window constraint".into()))
        }
    }
}
