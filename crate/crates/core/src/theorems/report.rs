use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Which statement a record checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Tag {
    #[serde(rename = "A")]
    A,
    #[serde(rename = "B")]
    B,
    #[serde(rename = "C.a")]
    Ca,
    #[serde(rename = "C.b")]
    Cb,
    #[serde(rename = "C.c")]
    Cc,
    #[serde(rename = "D")]
    D,
    #[serde(rename = "E")]
    E,
    #[serde(rename = "F.a")]
    Fa,
    #[serde(rename = "F.b")]
    Fb,
    #[serde(rename = "F.c")]
    Fc,
    #[serde(rename = "F.d")]
    Fd,
    #[serde(rename = "F.e")]
    Fe,
    #[serde(rename = "F.f")]
    Ff,
    #[serde(rename = "modVpVm")]
    ModVpVm,
    #[serde(rename = "keynub")]
    Keynub,
    #[serde(rename = "good-prepar")]
    GoodPrepar,
    #[serde(rename = "when-TB")]
    WhenTb,
    #[serde(rename = "parblev")]
    Parblev,
    #[serde(rename = "entropy-addition")]
    EntropyAddition,
}

impl Tag {
    pub const ALL: [Tag; 19] = [
        Tag::A,
        Tag::B,
        Tag::Ca,
        Tag::Cb,
        Tag::Cc,
        Tag::D,
        Tag::E,
        Tag::Fa,
        Tag::Fb,
        Tag::Fc,
        Tag::Fd,
        Tag::Fe,
        Tag::Ff,
        Tag::ModVpVm,
        Tag::Keynub,
        Tag::GoodPrepar,
        Tag::WhenTb,
        Tag::Parblev,
        Tag::EntropyAddition,
    ];

    pub const F: [Tag; 6] = [Tag::Fa, Tag::Fb, Tag::Fc, Tag::Fd, Tag::Fe, Tag::Ff];

    pub fn as_str(self) -> &'static str {
        match self {
            Tag::A => "A",
            Tag::B => "B",
            Tag::Ca => "C.a",
            Tag::Cb => "C.b",
            Tag::Cc => "C.c",
            Tag::D => "D",
            Tag::E => "E",
            Tag::Fa => "F.a",
            Tag::Fb => "F.b",
            Tag::Fc => "F.c",
            Tag::Fd => "F.d",
            Tag::Fe => "F.e",
            Tag::Ff => "F.f",
            Tag::ModVpVm => "modVpVm",
            Tag::Keynub => "keynub",
            Tag::GoodPrepar => "good-prepar",
            Tag::WhenTb => "when-TB",
            Tag::Parblev => "parblev",
            Tag::EntropyAddition => "entropy-addition",
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Tag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Tag, Error> {
        Tag::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown theorem tag {s:?}")))
    }
}

/// A selection of tags: `C` selects `C.a`, `C.b` and `C.c`.
pub fn parse_selection(s: &str) -> Result<Vec<Tag>, Error> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Ok(t) = part.parse::<Tag>() {
            out.push(t);
            continue;
        }
        let group: Vec<Tag> = Tag::ALL
            .into_iter()
            .filter(|t| t.as_str().split('.').next().is_some_and(|h| h.eq_ignore_ascii_case(part)))
            .collect();
        if group.is_empty() {
            return Err(Error::Parse(format!("unknown theorem tag {part:?}")));
        }
        out.extend(group);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// Why a check did not run. Closed set, so that reports stay comparable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SkipReason {
    PreconditionViolated,
    HypothesisNotInvariant,
    HypothesisNotStable,
    NotNormal,
    NotInAntiParabolic,
    NoSmallTidySubgroups,
    ConNotClosed,
    DescriptorNotComputed,
    NotApplicable,
    UncertifiedSplit,
}

impl SkipReason {
    pub fn as_str(self) -> &'static str {
        match self {
            SkipReason::PreconditionViolated => "precondition-violated",
            SkipReason::HypothesisNotInvariant => "hypothesis-not-invariant",
            SkipReason::HypothesisNotStable => "hypothesis-not-stable",
            SkipReason::NotNormal => "not-normal",
            SkipReason::NotInAntiParabolic => "not-in-anti-parabolic",
            SkipReason::NoSmallTidySubgroups => "no-small-tidy-subgroups",
            SkipReason::ConNotClosed => "con-not-closed",
            SkipReason::DescriptorNotComputed => "descriptor-not-computed",
            SkipReason::NotApplicable => "not-applicable",
            SkipReason::UncertifiedSplit => "uncertified-split",
        }
    }
}

impl fmt::Display for SkipReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub tag: Tag,
    pub instance: String,
    /// The subgroup the check was run for, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subject: Option<String>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<SkipReason>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
    pub detail: String,
    #[serde(skip)]
    pub timing: Duration,
}

impl VerificationReport {
    pub fn sort_key(&self) -> (&str, Tag, &str) {
        (&self.instance, self.tag, self.subject.as_deref().unwrap_or(""))
    }
}

/// The result of one check before it is labelled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass(String),
    Fail { counterexample: String, detail: String },
    Skip(SkipReason, String),
}

impl Outcome {
    pub fn check(ok: bool, detail: impl Into<String>, counterexample: impl FnOnce() -> String) -> Outcome {
        if ok {
            Outcome::Pass(detail.into())
        } else {
            Outcome::Fail { counterexample: counterexample(), detail: detail.into() }
        }
    }

    pub fn skip(reason: SkipReason, detail: impl Into<String>) -> Outcome {
        Outcome::Skip(reason, detail.into())
    }

    /// A computation error where a value was needed. Counts as a failure,
    /// never as a pass.
    pub fn error(e: &Error) -> Outcome {
        Outcome::Fail { counterexample: "computation error".into(), detail: e.to_string() }
    }

    pub fn into_report(
        self,
        tag: Tag,
        instance: &str,
        subject: Option<String>,
        timing: Duration,
    ) -> VerificationReport {
        let (status, reason, counterexample, detail) = match self {
            Outcome::Pass(d) => (Status::Pass, None, None, d),
            Outcome::Fail { counterexample, detail } => (Status::Fail, None, Some(counterexample), detail),
            Outcome::Skip(r, d) => (Status::Skipped, Some(r), None, d),
        };
        VerificationReport {
            tag,
            instance: instance.to_string(),
            subject,
            status,
            reason,
            counterexample,
            detail,
            timing,
        }
    }
}

/// Fold the outcomes of one claim over a family of subgroups.
pub fn fold(items: Vec<(String, Outcome)>) -> Outcome {
    if items.is_empty() {
        return Outcome::skip(SkipReason::NotApplicable, "empty family");
    }
    let total = items.len();
    let mut passed = 0;
    let mut skipped: Vec<SkipReason> = Vec::new();
    let mut first_pass = None;
    let mut first_skip = None;
    for (subject, o) in items {
        match o {
            Outcome::Fail { counterexample, detail } => {
                return Outcome::Fail { counterexample: format!("{subject}: {counterexample}"), detail };
            }
            Outcome::Pass(d) => {
                passed += 1;
                first_pass.get_or_insert(d);
            }
            Outcome::Skip(r, d) => {
                skipped.push(r);
                first_skip.get_or_insert((r, d));
            }
        }
    }
    if passed == 0 {
        let (r, d) = first_skip.expect("nonempty");
        return Outcome::Skip(r, format!("all {total} skipped; {d}"));
    }
    skipped.sort();
    skipped.dedup();
    let mut detail = format!("{passed}/{total} subgroups checked");
    if passed < total {
        let rs: Vec<&str> = skipped.iter().map(|r| r.as_str()).collect();
        detail.push_str(&format!(", {} skipped ({})", total - passed, rs.join(", ")));
    }
    if passed == 1 {
        detail = format!("{detail}; {}", first_pass.unwrap_or_default());
    }
    Outcome::Pass(detail)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_round_trip() {
        for t in Tag::ALL {
            assert_eq!(t.as_str().parse::<Tag>().unwrap(), t);
            let json = serde_json::to_string(&t).unwrap();
            assert_eq!(json, format!("\"{}\"", t.as_str()));
        }
        assert_eq!(parse_selection("C").unwrap(), vec![Tag::Ca, Tag::Cb, Tag::Cc]);
        assert_eq!(parse_selection("F.b,A").unwrap(), vec![Tag::A, Tag::Fb]);
        assert!(parse_selection("G").is_err());
    }

    #[test]
    fn folding() {
        let p = || ("H1".to_string(), Outcome::Pass("ok".into()));
        let s = || ("H2".to_string(), Outcome::skip(SkipReason::NotNormal, "x"));
        assert!(matches!(fold(vec![p(), s()]), Outcome::Pass(_)));
        assert!(matches!(fold(vec![s()]), Outcome::Skip(SkipReason::NotNormal, _)));
        let f = ("H3".to_string(), Outcome::check(false, "d", || "x = 1".into()));
        match fold(vec![p(), f]) {
            Outcome::Fail { counterexample, .. } => assert_eq!(counterexample, "H3: x = 1"),
            o => panic!("{o:?}"),
        }
    }
}
