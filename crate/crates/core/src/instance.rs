//! One enum over the three backends, and the JSON instance format.
//!
//! ```json
//! {"backend": "finite", "group": {"abelian": [4]}, "endomorphism": {"power": 2},
//!  "subgroups": {"H": [0, 2]}}
//! {"backend": "padic", "group": {"prime": 5, "dim": 2},
//!  "endomorphism": {"matrix": [["0", "-5"], ["1", "3"]]},
//!  "subgroups": {"H": [["1", "0"]], "U": [["1", "0"], ["0", "1/5"]]}}
//! {"backend": "shift", "group": {"structure": {"abelian": [2]}, "index_set": "one-sided"},
//!  "endomorphism": "left-shift", "subgroups": {"U": {"window": [1, 2], "constraint": [0, 1]}}}
//! ```
//!
//! Finite subgroups list element indices; padic `H` is a subspace basis and
//! `U` a list of lattice generators; shift `H` is `"trivial"` or `"whole"`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::decomposition::DynamicalDecomposition;
use crate::dynamics::{self, Backend, Index, Method};
use crate::error::{Error, Result};
use crate::finite::{build_group, ElementSet, FiniteEndo, FiniteGroup, FiniteInstance, GroupSpec};
use crate::padic::arith::{format_rational, parse_rational, Q};
use crate::padic::{Lattice, PadicInstance, QMat};
use crate::shift::{ShiftInstance, ShiftSet, Sidedness, WindowedSubgroup};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "backend", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InstanceFile {
    Finite {
        group: GroupSpec,
        endomorphism: EndoSpec,
        #[serde(default)]
        subgroups: FiniteSubgroups,
    },
    Padic {
        group: PadicGroup,
        endomorphism: MatrixSpec,
        #[serde(default)]
        subgroups: PadicSubgroups,
    },
    Shift {
        group: ShiftGroup,
        endomorphism: ShiftMap,
        #[serde(default)]
        subgroups: ShiftSubgroups,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndoSpec {
    /// Image of each element, by index.
    Images(Vec<usize>),
    /// `x ↦ xᵏ`, abelian groups only.
    Power(usize),
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteSubgroups {
    #[serde(rename = "H", default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<usize>>,
    #[serde(rename = "U", default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PadicGroup {
    pub prime: u64,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixSpec {
    pub matrix: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PadicSubgroups {
    #[serde(rename = "H", default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<Vec<String>>>,
    #[serde(rename = "U", default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShiftGroup {
    pub structure: GroupSpec,
    pub index_set: Sidedness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShiftMap {
    LeftShift,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShiftSubgroups {
    #[serde(rename = "H", default, skip_serializing_if = "Option::is_none")]
    pub h: Option<ShiftSet>,
    #[serde(rename = "U", default, skip_serializing_if = "Option::is_none")]
    pub u: Option<WindowSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSpec {
    pub window: (i64, i64),
    pub constraint: Vec<usize>,
}

/// A group with an endomorphism.
#[derive(Debug, Clone)]
pub enum GroupInstance {
    Finite(FiniteInstance),
    Padic(PadicInstance),
    Shift(ShiftInstance),
}

/// An instance with the optional subgroups of its file.
#[derive(Debug, Clone)]
pub enum Loaded {
    Finite { inst: FiniteInstance, h: Option<ElementSet>, u: Option<ElementSet> },
    Padic { inst: PadicInstance, h: Option<Vec<Vec<Q>>>, u: Option<Lattice> },
    Shift { inst: ShiftInstance, h: Option<ShiftSet>, u: Option<WindowedSubgroup> },
}

/// Scale with a printable certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScaleSummary {
    pub scale: String,
    pub tidy: String,
    pub displacement: String,
    pub method: Method,
}

fn parse_q(s: &str) -> Result<Q> {
    parse_rational(s).ok_or_else(|| Error::Parse(format!("not an exact rational: {s:?}")))
}

fn parse_vectors(rows: &[Vec<String>], n: usize, what: &str) -> Result<Vec<Vec<Q>>> {
    rows.iter()
        .map(|r| {
            if r.len() != n {
                return Err(Error::Parse(format!("{what}: expected {n} entries, got {}", r.len())));
            }
            r.iter().map(|s| parse_q(s)).collect()
        })
        .collect()
}

fn element_set(g: &FiniteGroup, elems: &[usize]) -> Result<ElementSet> {
    if let Some(&x) = elems.iter().find(|&&x| x >= g.order()) {
        return Err(Error::Parse(format!("element {x} out of range for a group of order {}", g.order())));
    }
    let s = ElementSet::from_elements(g.order(), elems.iter().copied());
    if !g.is_subgroup(&s) {
        return Err(Error::NotASubgroup(format!("{elems:?}")));
    }
    Ok(s)
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<InstanceFile> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(&self, precision: Option<u32>) -> Result<Loaded> {
        match self {
            InstanceFile::Finite { group, endomorphism, subgroups } => {
                let g = Arc::new(build_group(group)?);
                let endo = match endomorphism {
                    EndoSpec::Images(im) => FiniteEndo::new(&g, im.clone())?,
                    EndoSpec::Power(k) => {
                        if !g.is_abelian() {
                            return Err(Error::Parse("power maps need an abelian group".into()));
                        }
                        FiniteEndo::power_map(&g, *k)?
                    }
                };
                let h = subgroups.h.as_deref().map(|e| element_set(&g, e)).transpose()?;
                let u = subgroups.u.as_deref().map(|e| element_set(&g, e)).transpose()?;
                Ok(Loaded::Finite { inst: FiniteInstance::new(g, endo), h, u })
            }
            InstanceFile::Padic { group, endomorphism, subgroups } => {
                let n = group.dim;
                if endomorphism.matrix.len() != n {
                    return Err(Error::Parse(format!("matrix has {} rows, dim is {n}", endomorphism.matrix.len())));
                }
                let a = QMat::from_rows(parse_vectors(&endomorphism.matrix, n, "matrix row")?);
                let mut inst = PadicInstance::new(group.prime, a)?;
                if let Some(n0) = precision {
                    inst = inst.with_precision(n0);
                }
                let h = subgroups.h.as_deref().map(|r| parse_vectors(r, n, "H basis vector")).transpose()?;
                let u = match &subgroups.u {
                    Some(r) => {
                        let l = Lattice::span(group.prime, n, parse_vectors(r, n, "U generator")?);
                        if !l.is_full() {
                            return Err(Error::IncompatibleRanks(format!("U has rank {} < {n}, not open", l.rank())));
                        }
                        Some(l)
                    }
                    None => None,
                };
                Ok(Loaded::Padic { inst, h, u })
            }
            InstanceFile::Shift { group, endomorphism: ShiftMap::LeftShift, subgroups } => {
                let f = Arc::new(build_group(&group.structure)?);
                let inst = ShiftInstance::new(f, group.index_set);
                let h = match subgroups.h {
                    Some(s @ (ShiftSet::Trivial | ShiftSet::Whole)) => Some(s),
                    Some(s) => return Err(Error::Parse(format!("H = {} is not closed", s.describe()))),
                    None => None,
                };
                let u = match &subgroups.u {
                    Some(w) => {
                        let (a, b) = w.window;
                        let n =
                            (inst.group().order() as u64).checked_pow((b - a + 1).max(0) as u32).unwrap_or(u64::MAX);
                        if let Some(&c) = w.constraint.iter().find(|&&c| c as u64 >= n) {
                            return Err(Error::Parse(format!("pattern code {c} out of range")));
                        }
                        Some(inst.windowed(
                            a,
                            b,
                            ElementSet::from_elements(n as usize, w.constraint.iter().copied()),
                        )?)
                    }
                    None => None,
                };
                Ok(Loaded::Shift { inst, h, u })
            }
        }
    }
}

pub fn describe_matrix(a: &QMat) -> String {
    let rows: Vec<String> =
        a.row_vecs().iter().map(|r| r.iter().map(format_rational).collect::<Vec<_>>().join(",")).collect();
    format!("[[{}]]", rows.join("],["))
}

impl Loaded {
    pub fn instance(&self) -> GroupInstance {
        match self {
            Loaded::Finite { inst, .. } => GroupInstance::Finite(inst.clone()),
            Loaded::Padic { inst, .. } => GroupInstance::Padic(inst.clone()),
            Loaded::Shift { inst, .. } => GroupInstance::Shift(inst.clone()),
        }
    }
}

impl GroupInstance {
    pub fn backend(&self) -> &'static str {
        match self {
            GroupInstance::Finite(_) => "finite",
            GroupInstance::Padic(_) => "padic",
            GroupInstance::Shift(_) => "shift",
        }
    }

    /// A short unique description, used as the instance key in reports.
    pub fn key(&self) -> String {
        match self {
            GroupInstance::Finite(f) => {
                let im: Vec<String> = f.endo.images().iter().map(|x| x.to_string()).collect();
                format!("{} α=[{}]", f.group.name(), im.join(","))
            }
            GroupInstance::Padic(p) => format!("Q_{}^{} A={}", p.prime(), p.dim(), describe_matrix(p.matrix())),
            GroupInstance::Shift(s) => format!("{} σ", s.name()),
        }
    }

    pub fn is_automorphism(&self) -> bool {
        match self {
            GroupInstance::Finite(f) => f.endo.is_injective(),
            GroupInstance::Padic(p) => p.inverse().is_some(),
            GroupInstance::Shift(s) => s.side() == Sidedness::TwoSided,
        }
    }

    pub fn is_compact(&self) -> bool {
        match self {
            GroupInstance::Finite(_) | GroupInstance::Shift(_) => true,
            GroupInstance::Padic(p) => p.dim() == 0,
        }
    }

    pub fn scale(&self) -> Result<ScaleSummary> {
        fn summary<S>(r: dynamics::ScaleResult<S>, tidy: String) -> ScaleSummary {
            ScaleSummary {
                scale: r.value.to_string(),
                tidy,
                displacement: r.displacement.to_string(),
                method: r.method,
            }
        }
        Ok(match self {
            GroupInstance::Finite(f) => {
                let r = f.scale()?;
                let t = crate::theorems::finite::describe_set(&f.group, &r.tidy);
                summary(r, t)
            }
            GroupInstance::Padic(p) => {
                let r = p.scale()?;
                let t = r.tidy.describe();
                summary(r, t)
            }
            GroupInstance::Shift(s) => {
                let r = s.scale()?;
                let t = format!("{:?}", r.tidy);
                summary(r, t)
            }
        })
    }

    pub fn scale_value(&self) -> Result<Index> {
        match self {
            GroupInstance::Finite(f) => Ok(f.scale()?.value),
            GroupInstance::Padic(p) => p.scale_value(),
            GroupInstance::Shift(s) => Ok(s.scale()?.value),
        }
    }

    pub fn decompose(&self) -> Result<DynamicalDecomposition> {
        match self {
            GroupInstance::Finite(f) => DynamicalDecomposition::finite(f),
            GroupInstance::Padic(p) => DynamicalDecomposition::padic(p),
            GroupInstance::Shift(s) => Ok(DynamicalDecomposition::shift(s)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_backends() {
        let f = InstanceFile::parse(
            r#"{"backend":"finite","group":{"abelian":[4]},"endomorphism":{"power":2},"subgroups":{"H":[0,2]}}"#,
        )
        .unwrap();
        let Loaded::Finite { inst, h, .. } = f.load(None).unwrap() else { panic!() };
        assert_eq!(inst.endo.images(), &[0, 2, 0, 2]);
        assert_eq!(h.unwrap().to_vec(), vec![0, 2]);

        let p = InstanceFile::parse(
            r#"{"backend":"padic","group":{"prime":5,"dim":2},"endomorphism":{"matrix":[["0","-5"],["1","3"]]}}"#,
        )
        .unwrap();
        let gi = p.load(None).unwrap().instance();
        assert_eq!(gi.scale().unwrap().scale, "1");
        assert_eq!(gi.key(), "Q_5^2 A=[[0,-5],[1,3]]");

        let s = InstanceFile::parse(
            r#"{"backend":"shift","group":{"structure":{"abelian":[2]},"index_set":"two-sided"},"endomorphism":"left-shift","subgroups":{"H":"trivial","U":{"window":[-1,-1],"constraint":[0]}}}"#,
        )
        .unwrap();
        let Loaded::Shift { inst, u, .. } = s.load(None).unwrap() else { panic!() };
        assert_eq!(inst.displacement(&u.unwrap()).unwrap(), 2);
    }

    #[test]
    fn rejects_bad_input() {
        for bad in [
            r#"{"backend":"padic","group":{"prime":5,"dim":2},"endomorphism":{"matrix":[["0","x"],["1","3"]]}}"#,
            r#"{"backend":"padic","group":{"prime":4,"dim":1},"endomorphism":{"matrix":[["1"]]}}"#,
            r#"{"backend":"finite","group":{"abelian":[4]},"endomorphism":{"images":[0,1,2,0]}}"#,
            r#"{"backend":"finite","group":{"abelian":[4]},"endomorphism":{"power":1},"subgroups":{"H":[0,1]}}"#,
            r#"{"backend":"nope"}"#,
        ] {
            assert!(InstanceFile::parse(bad).and_then(|f| f.load(None)).is_err(), "{bad}");
        }
    }
}
