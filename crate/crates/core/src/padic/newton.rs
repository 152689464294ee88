//! Newton polygons at `p`.
//!
//! For `f = Σ cᵢ xⁱ` the lower convex hull of the points `(i, v_p(cᵢ))` has a
//! segment of slope `σ` and horizontal length `ℓ` exactly when `f` has `ℓ`
//! roots of valuation `−σ` (over an algebraic closure of `ℚₚ`).

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::arith::{format_rational, val, Q, Z};
use super::poly::QPoly;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub slope: Q,
    pub length: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub prime: u64,
    /// Finite segments, slopes increasing.
    pub segments: Vec<Segment>,
    /// Multiplicity of the root 0, which sits at slope `−∞` and is reported
    /// separately.
    pub zero_roots: usize,
    /// Hull vertices `(i, v(cᵢ))`.
    pub vertices: Vec<(usize, i64)>,
}

/// Counts of roots by sign of valuation; roots equal to 0 count as positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SlopeCounts {
    pub contracting: usize,
    pub neutral: usize,
    pub expanding: usize,
}

pub fn newton_polygon(f: &QPoly, p: u64) -> Result<NewtonPolygon> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let pts: Vec<(usize, i64)> = f.coeffs().iter().enumerate().filter_map(|(i, c)| val(c, p).map(|v| (i, v))).collect();
    let zero_roots = pts[0].0;
    // lower hull by monotone chain
    let mut hull: Vec<(usize, i64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b if it lies on or above segment a→pt
            let cross = (b.0 as i128 - a.0 as i128) * (pt.1 as i128 - a.1 as i128)
                - (b.1 as i128 - a.1 as i128) * (pt.0 as i128 - a.0 as i128);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let segments = hull
        .windows(2)
        .map(|w| {
            let len = w[1].0 - w[0].0;
            Segment { slope: Q::new(Z::from(w[1].1 - w[0].1), Z::from(len as i64)), length: len }
        })
        .collect();
    Ok(NewtonPolygon { prime: p, segments, zero_roots, vertices: hull })
}

impl NewtonPolygon {
    /// Root valuations with multiplicity, as `(valuation, count)`; `None`
    /// stands for the root 0.
    pub fn root_valuations(&self) -> Vec<(Option<Q>, usize)> {
        let mut out: Vec<(Option<Q>, usize)> =
            self.segments.iter().map(|s| (Some(-s.slope.clone()), s.length)).collect();
        if self.zero_roots > 0 {
            out.push((None, self.zero_roots));
        }
        out
    }

    pub fn counts(&self) -> SlopeCounts {
        let mut c = SlopeCounts { contracting: self.zero_roots, neutral: 0, expanding: 0 };
        for s in &self.segments {
            // root valuation −slope: > 0 contracts, < 0 expands
            if s.slope.is_negative() {
                c.contracting += s.length;
            } else if s.slope.is_zero() {
                c.neutral += s.length;
            } else {
                c.expanding += s.length;
            }
        }
        c
    }

    /// `Σ −v(λ)` over roots with `v(λ) < 0`; always an integer.
    pub fn expansion_exponent(&self) -> u64 {
        let total = self
            .segments
            .iter()
            .filter(|s| s.slope.is_positive())
            .fold(Q::zero(), |acc, s| acc + &s.slope * Q::from_integer(Z::from(s.length as i64)));
        assert!(total.is_integer(), "hull vertices have integer heights");
        u64::try_from(total.to_integer()).expect("nonnegative")
    }

    /// Whether every root valuation lies in the given class.
    pub fn is_pure(&self, class: std::cmp::Ordering) -> bool {
        use std::cmp::Ordering::*;
        let c = self.counts();
        match class {
            Greater => c.neutral == 0 && c.expanding == 0,
            Equal => c.contracting == 0 && c.expanding == 0,
            Less => c.contracting == 0 && c.neutral == 0,
        }
    }

    pub fn describe(&self) -> String {
        let mut parts: Vec<String> =
            self.segments.iter().map(|s| format!("{}:{}", format_rational(&s.slope), s.length)).collect();
        if self.zero_roots > 0 {
            parts.push(format!("zero-roots:{}", self.zero_roots));
        }
        format!("{{{}}}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::arith::{q, qf};
    use crate::padic::matrix::QMat;
    use proptest::prelude::*;

    #[test]
    fn companion_example() {
        let f = QPoly::new(vec![q(5), q(-3), q(1)]);
        let np = newton_polygon(&f, 5).unwrap();
        let slopes: Vec<(Q, usize)> = np.segments.iter().map(|s| (s.slope.clone(), s.length)).collect();
        assert_eq!(slopes, vec![(q(-1), 1), (q(0), 1)]);
        // product of roots has valuation v(5) = 1, sum has valuation v(3) = 0
        let vals: Vec<Q> = np.root_valuations().into_iter().map(|(v, _)| v.unwrap()).collect();
        assert_eq!(vals.iter().fold(q(0), |a, b| a + b), q(1));
        assert_eq!(np.expansion_exponent(), 0);
    }

    #[test]
    fn monomial_has_only_zero_roots() {
        let np = newton_polygon(&QPoly::new(vec![q(0), q(0), q(0), q(1)]), 3).unwrap();
        assert!(np.segments.is_empty());
        assert_eq!(np.zero_roots, 3);
        assert_eq!(np.counts().contracting, 3);
    }

    #[test]
    fn inverse_powers() {
        for p in [2i64, 3, 5] {
            let f = QMat::diag(&[qf(1, p), qf(1, p * p)]).charpoly();
            let np = newton_polygon(&f, p as u64).unwrap();
            let mut vals: Vec<Q> = np.root_valuations().into_iter().map(|(v, _)| v.unwrap()).collect();
            vals.sort();
            assert_eq!(vals, vec![q(-2), q(-1)]);
            assert_eq!(np.expansion_exponent(), 3);
        }
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert_eq!(newton_polygon(&QPoly::new(vec![]), 2), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn fractional_slope() {
        // x² − p: both roots have valuation 1/2
        let np = newton_polygon(&QPoly::new(vec![q(-3), q(0), q(1)]), 3).unwrap();
        assert_eq!(np.segments, vec![Segment { slope: qf(-1, 2), length: 2 }]);
    }

    proptest! {
        /// For a product of linear factors the polygon returns exactly the
        /// valuations of the chosen roots.
        #[test]
        fn roots_of_products(roots in prop::collection::vec((-20i64..20, 1i64..30), 1..5)) {
            let p = 2u64;
            let mut f = QPoly::new(vec![q(1)]);
            let mut expected: Vec<Option<Q>> = Vec::new();
            for &(a, b) in &roots {
                let r = qf(a, b);
                expected.push(val(&r, p).map(q));
                f = f.mul(&QPoly::new(vec![-r, q(1)]));
            }
            let np = newton_polygon(&f, p).unwrap();
            let mut got: Vec<Option<Q>> = Vec::new();
            for (v, k) in np.root_valuations() {
                for _ in 0..k {
                    got.push(v.clone());
                }
            }
            expected.sort();
            got.sort();
            prop_assert_eq!(got, expected);
        }
    }
}
