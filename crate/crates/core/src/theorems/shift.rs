//! Claims on the full shift. Subgroup identities are closed-form and are
//! backed by finitely supported witnesses; lattice-like claims run on
//! sweeps of windowed subgroups.

use std::time::Instant;

use super::report::{fold, Outcome, SkipReason, Tag, VerificationReport};
use crate::dynamics::{Backend, Index};
use crate::error::Result;
use crate::shift::{FiniteSupportConfig, ShiftInstance, ShiftSet, Sidedness, WindowedSubgroup};

/// Widest window used for projection evidence.
pub const PROJECTION_WIDTH: usize = 5;
/// Widest window in subgroup sweeps.
pub const SWEEP_WIDTH: usize = 3;
const WITNESS_WIDTH: usize = 3;
const STAGES: usize = 4;

struct Ctx<'a> {
    s: &'a ShiftInstance,
}

impl Ctx<'_> {
    fn one_sided(&self) -> bool {
        self.s.side() == Sidedness::OneSided
    }

    fn start(&self) -> i64 {
        if self.one_sided() {
            1
        } else {
            -1
        }
    }

    /// Every configuration supported in `[start, start + w)`, `w ≤ 3`.
    fn witnesses(&self) -> Vec<FiniteSupportConfig> {
        let q = self.s.group().order();
        (0..q.pow(WITNESS_WIDTH as u32)).map(|c| self.s.config_from_code(self.start(), WITNESS_WIDTH, c)).collect()
    }

    fn sweep(&self) -> Result<Vec<WindowedSubgroup>> {
        let mut out = Vec::new();
        for w in 1..=SWEEP_WIDTH {
            out.extend(self.s.windowed_subgroups(self.start(), w)?);
        }
        Ok(out)
    }

    fn theorem_a(&self, h: ShiftSet) -> Outcome {
        if h == ShiftSet::Whole {
            return Outcome::Pass("con(α,G) = G = con(α)G".into());
        }
        // finitely supported x: σⁿx is e on any window [a, b] from some n on
        let (a, b) = (self.start(), self.start() + 6);
        let ws = self.witnesses();
        let bad = ws.iter().find(|x| self.s.orbit_leaves_window(x, a, b) > WITNESS_WIDTH + 7);
        let con = self.s.decompose().con;
        Outcome::check(
            bad.is_none(),
            format!("con(α,{{e}}) = con(α) = {}; {} witnesses leave [{a},{b}]", con.describe(), ws.len()),
            || format!("{:?} stays in the window", bad.unwrap()),
        )
    }

    fn theorem_b(&self, h: ShiftSet) -> Outcome {
        if h == ShiftSet::Whole {
            return Outcome::Pass("con⁻(α,G) = G = con⁻(α)G".into());
        }
        // τ is a section of σ, so (τⁿx) is a regressive trajectory; it tends to e
        let e = self.s.group().identity();
        let (a, b) = (self.start(), self.start() + 6);
        let ws = self.witnesses();
        for x in &ws {
            let mut y = x.clone();
            for _ in 0..12 {
                let next = self.s.right_shift(&y);
                if self.s.shift(&next) != y {
                    return Outcome::check(false, "", || format!("{x:?}: σ(τy) ≠ y"));
                }
                y = next;
            }
            if (a..=b).any(|i| y.at(i, e) != e) {
                return Outcome::check(false, "", || format!("{x:?}: τⁿx does not leave [{a},{b}]"));
            }
        }
        let cm = self.s.decompose().con_minus;
        Outcome::Pass(format!(
            "con⁻(α,{{e}}) = con⁻(α) = {}; {} regressive witnesses tend to e",
            cm.describe(),
            ws.len()
        ))
    }

    fn theorem_c(&self, tag: Tag) -> Result<Outcome> {
        let s_g = self.s.scale()?.value;
        // H and G/H are G or trivial; both have scale 1 with the whole group tidy
        let (s_h, s_q): (Index, Index) = (1, 1);
        Ok(match tag {
            Tag::Ca => Outcome::check(s_h <= s_g, format!("s_H = {s_h} ≤ s_G = {s_g}; U = G, U ∩ H = H"), || {
                "s_H > s_G".into()
            }),
            Tag::Cb => Outcome::check(s_g % (s_h * s_q) == 0, format!("{s_h}·{s_q} divides {s_g}"), || {
                "does not divide".into()
            }),
            // par⁻ = G and σ(H) = H for H ∈ {e, G}
            _ => Outcome::check(s_g == s_h * s_q, format!("s_H·s_G/H = {s_h}·{s_q} = s_G = {s_g}"), || {
                "scales differ".into()
            }),
        })
    }

    fn theorem_d(&self) -> Result<Outcome> {
        if !self.one_sided() {
            return Ok(Outcome::skip(SkipReason::DescriptorNotComputed, "nub of the two-sided shift not derived"));
        }
        let d = self.s.decompose();
        let full = self.bik_dense()?;
        let nub_trivial = d.nub == Some(ShiftSet::Trivial);
        let con_closed = d.con.is_closed();
        let ok = full && nub_trivial == con_closed;
        Ok(Outcome::check(
            ok,
            format!("nub = G (bik dense on windows ≤ {PROJECTION_WIDTH}); con not closed; both sides false"),
            || format!("nub trivial = {nub_trivial}, con closed = {con_closed}, bik dense = {full}"),
        ))
    }

    /// `⋃ ker σⁿ` projects onto every window `[1, m]`, so its closure `bik`
    /// is `G`, and `bik ⊆ nub`.
    fn bik_dense(&self) -> Result<bool> {
        for m in 1..=PROJECTION_WIDTH {
            let proj = self.s.iterated_kernel_projection(m, m)?;
            if proj.len() != proj.universe() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn theorem_e(&self) -> Result<Outcome> {
        let s = self.s.scale()?.value;
        let d = self.s.decompose();
        // closure(con⁻) = par⁻ = G on both index sets
        let closure_con_minus = ShiftSet::Whole;
        let ok = d.par_minus == ShiftSet::Whole
            && self.s.window_projection(d.con_minus, 0, 4)?.len()
                == self.s.window_projection(closure_con_minus, 0, 4)?.len();
        Ok(Outcome::check(ok, format!("s = s|par⁻ = s|closure(con⁻) = {s}, par⁻ = closure(con⁻) = G"), || {
            "par⁻ ≠ G".into()
        }))
    }

    fn keynub(&self) -> Result<Outcome> {
        if !self.one_sided() {
            return Ok(Outcome::skip(SkipReason::DescriptorNotComputed, "nub of the two-sided shift not derived"));
        }
        let d = self.s.decompose();
        // con ∩ lev = con; both it and nub project onto every window
        for w in 1..=PROJECTION_WIDTH as i64 {
            let a = self.s.window_projection(d.con, 1, w)?;
            let n = self.s.window_projection(d.nub.unwrap_or(ShiftSet::Trivial), 1, w)?;
            if a != n || a.len() != a.universe() {
                return Ok(Outcome::check(false, "", || format!("projections to [1,{w}] differ")));
            }
        }
        Ok(Outcome::Pass(format!(
            "closure(con)·proj = closure(con ∩ lev)·proj = nub·proj = full on [1,w], w ≤ {PROJECTION_WIDTH}"
        )))
    }

    fn when_tb(&self) -> Result<Outcome> {
        if !self.one_sided() {
            return Ok(Outcome::skip(SkipReason::DescriptorNotComputed, "nub of the two-sided shift not derived"));
        }
        let s = self.s.scale()?.value;
        let whole = self.s.whole();
        let mut items = Vec::new();
        for v in self.sweep()?.into_iter().chain([whole.clone()]) {
            if !self.s.is_tidy_above(&v)? {
                items.push((format!("{v:?}"), Outcome::skip(SkipReason::PreconditionViolated, "not tidy above")));
                continue;
            }
            let tidy = self.s.displacement(&v)? == s;
            // nub = G, so nub ⊆ V means V = G
            let contains_nub = v == whole;
            items.push((
                format!("{v:?}"),
                Outcome::check(tidy == contains_nub, "tidy ⇔ nub ⊆ V", || {
                    format!("tidy = {tidy}, nub ⊆ V = {contains_nub}")
                }),
            ));
        }
        Ok(fold(items))
    }

    fn good_prepar(&self) -> Result<Outcome> {
        let mut items = Vec::new();
        for k in self.sweep()? {
            let mut minus = vec![k.clone()];
            let mut plus = vec![k.clone()];
            for _ in 0..STAGES {
                let m = minus.last().unwrap();
                minus.push(self.s.preimage_meet(m, &k));
                let p = plus.last().unwrap();
                plus.push(self.s.meet(&k, &self.s.image(p)));
            }
            let mut ok = true;
            for n in 0..STAGES {
                ok &= self.s.contains(&minus[n], &self.s.image(&minus[n + 1]));
                ok &= self.s.contains(&minus[n], &minus[n + 1]);
                ok &= self.s.contains(&self.s.image(&plus[n]), &plus[n + 1]);
                ok &= self.s.contains(&plus[n], &plus[n + 1]);
            }
            items.push((
                format!("{k:?}"),
                Outcome::check(
                    ok,
                    format!("α(K₋ₙ₋₁) ⊆ K₋ₙ, Kₙ₊₁ ⊆ α(Kₙ) for n < {STAGES}"),
                    || "stage containment fails".into(),
                ),
            ));
        }
        Ok(fold(items))
    }

    fn parblev(&self) -> Result<Outcome> {
        // lev = G on both index sets
        let s = self.s.scale()?.value;
        let mut items = Vec::new();
        for v in self.sweep()?.into_iter().chain([self.s.whole()]) {
            let tidy = self.s.displacement(&v)? == s;
            let stable = self.s.image(&v) == v;
            items.push((
                format!("{v:?}"),
                Outcome::check(tidy == stable, "tidy for α|lev ⇔ α(V) = V", || {
                    format!("tidy = {tidy}, α(V) = V is {stable}")
                }),
            ));
        }
        Ok(fold(items))
    }
}

fn is_per_subgroup(tag: Tag) -> bool {
    matches!(tag, Tag::A | Tag::B | Tag::Ca | Tag::Cb | Tag::Cc | Tag::EntropyAddition)
}

pub fn check(s: &ShiftInstance, key: &str, hs: Option<&[ShiftSet]>, tags: &[Tag]) -> Result<Vec<VerificationReport>> {
    let ctx = Ctx { s };
    let family = [ShiftSet::Trivial, ShiftSet::Whole];
    let mut out = Vec::new();
    for &tag in tags {
        let t = Instant::now();
        let per_h = |h: ShiftSet| -> Outcome {
            let r = match tag {
                Tag::A => Ok(ctx.theorem_a(h)),
                Tag::B => Ok(ctx.theorem_b(h)),
                Tag::Ca | Tag::Cb | Tag::Cc => ctx.theorem_c(tag),
                Tag::EntropyAddition => Ok(Outcome::skip(
                    SkipReason::ConNotClosed,
                    format!("con(α) = {} is not closed", s.decompose().con.describe()),
                )),
                _ => unreachable!(),
            };
            r.unwrap_or_else(|e| Outcome::error(&e))
        };
        if is_per_subgroup(tag) {
            match hs {
                Some(hs) => {
                    for &h in hs {
                        out.push(per_h(h).into_report(tag, key, Some(format!("H = {}", h.describe())), t.elapsed()));
                    }
                }
                None => {
                    let o = fold(family.iter().map(|&h| (h.describe().to_string(), per_h(h))).collect());
                    out.push(o.into_report(tag, key, Some("H ∈ {e, G}".into()), t.elapsed()));
                }
            }
            continue;
        }
        let r = match tag {
            Tag::D => ctx.theorem_d(),
            Tag::E => ctx.theorem_e(),
            Tag::Fa | Tag::Fb | Tag::Fc | Tag::Fd | Tag::Fe | Tag::Ff => {
                Ok(Outcome::skip(SkipReason::NoSmallTidySubgroups, "con(α) not closed; G is the only tidy subgroup"))
            }
            Tag::ModVpVm => Ok(Outcome::skip(SkipReason::NotApplicable, "V₋₋ is not a windowed subgroup")),
            Tag::Keynub => ctx.keynub(),
            Tag::WhenTb => ctx.when_tb(),
            Tag::GoodPrepar => ctx.good_prepar(),
            Tag::Parblev => ctx.parblev(),
            _ => unreachable!(),
        };
        out.push(r.unwrap_or_else(|e| Outcome::error(&e)).into_report(tag, key, None, t.elapsed()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::FiniteGroup;
    use crate::theorems::report::Status;
    use std::sync::Arc;

    fn inst(q: usize, side: Sidedness) -> ShiftInstance {
        ShiftInstance::new(Arc::new(FiniteGroup::cyclic(q)), side)
    }

    #[test]
    fn one_sided_statuses() {
        let r = check(&inst(2, Sidedness::OneSided), "s", None, &Tag::ALL).unwrap();
        for rep in &r {
            match rep.tag {
                Tag::Fa | Tag::Fb | Tag::Fc | Tag::Fd | Tag::Fe | Tag::Ff => {
                    assert_eq!(rep.reason, Some(SkipReason::NoSmallTidySubgroups))
                }
                Tag::EntropyAddition => assert_eq!(rep.reason, Some(SkipReason::ConNotClosed)),
                Tag::ModVpVm => assert_eq!(rep.status, Status::Skipped),
                _ => assert_eq!(rep.status, Status::Pass, "{rep:?}"),
            }
        }
    }

    #[test]
    fn two_sided_never_fails() {
        for q in [2, 3] {
            let r = check(&inst(q, Sidedness::TwoSided), "s", None, &Tag::ALL).unwrap();
            assert!(r.iter().all(|r| r.status != Status::Fail), "{r:?}");
            let d = r.iter().find(|r| r.tag == Tag::D).unwrap();
            assert_eq!(d.reason, Some(SkipReason::DescriptorNotComputed));
            let p = r.iter().find(|r| r.tag == Tag::Parblev).unwrap();
            assert_eq!(p.status, Status::Pass);
        }
    }
}
