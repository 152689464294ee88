//! Factoring a characteristic polynomial into slope-pure pieces over `ℤ/p^N`.
//!
//! Two Hensel splits do the work. With `m` the number of roots of valuation
//! `≥ 0`, dividing `f` by its coefficient at `x^m` gives `F ∈ ℤₚ[x]` whose
//! reduction has degree `m`; `F̄ = (monic ḡ)·(unit constant)` lifts to
//! `F = g·h` with `g` carrying the roots of valuation `≥ 0`. Then `ḡ = x^a·k̄`
//! with `k̄(0) ≠ 0` lifts to `g = g_<·g_=`.

use num_integer::Integer;
use num_traits::{One, Zero};

use super::arith::{residue, val, zp_pow, Q, Z};
use super::newton::NewtonPolygon;
use super::poly::{FpPoly, ModPoly, QPoly};
use crate::error::{Error, Result};

/// The three slope-pure factors of `f`, as symmetric integer lifts of their
/// residues modulo `p^N` (rational polynomials). `expanding` is `f` divided
/// by a constant; its roots are the roots of `f` of negative valuation.
#[derive(Debug, Clone, PartialEq)]
pub struct SlopeFactors {
    pub precision: u32,
    pub contracting: QPoly,
    pub neutral: QPoly,
    pub expanding: QPoly,
}

/// Lift `F ≡ g₀h₀ (mod p)` to `F ≡ gh (mod p^N)`, `g` monic of degree
/// `deg g₀`. Needs `gcd(g₀, h₀) = 1` over `𝔽ₚ`.
pub fn hensel_lift(f: &ModPoly, g0: &FpPoly, h0: &FpPoly, p: u64, n: u32) -> Result<(ModPoly, ModPoly)> {
    let (gcd, s, t) = FpPoly::ext_gcd(g0, h0, p);
    if gcd != FpPoly::constant(1, p) {
        return Err(Error::NotComputable("residual factors are not coprime".into()));
    }
    let modulus = zp_pow(p, n);
    let pz = Z::from(p);
    let mut g = ModPoly::from_fp(g0);
    let mut h = ModPoly::from_fp(h0);
    if FpPoly::from_mod(&f.sub(&g.mul(&h, &modulus), &modulus), p) != FpPoly(Vec::new()) {
        return Err(Error::NotComputable("residual factorisation does not match".into()));
    }
    let mut pk = pz.clone();
    for _ in 1..n {
        let diff = f.sub(&g.mul(&h, &modulus), &modulus);
        let e = FpPoly::new(
            diff.coeffs
                .iter()
                .map(|c| {
                    debug_assert!((c % &pk).is_zero());
                    u64::try_from((c / &pk).mod_floor(&pz)).expect("digit")
                })
                .collect(),
            p,
        );
        let (quo, dg) = t.mul(&e, p).divrem(g0, p);
        let dh = s.mul(&e, p).add(&quo.mul(h0, p), p);
        let lift = |base: &ModPoly, d: &FpPoly| -> ModPoly {
            let len = base.coeffs.len().max(d.0.len());
            ModPoly::reduce(
                (0..len).map(|i| base.coeff(i) + &pk * Z::from(d.0.get(i).copied().unwrap_or(0))).collect(),
                &modulus,
            )
        };
        g = lift(&g, &dg);
        h = lift(&h, &dh);
        pk *= &pz;
    }
    Ok((g, h))
}

/// Residues modulo `p^N` of a polynomial with `ℤ_(p)` coefficients.
fn to_mod(f: &QPoly, p: u64, n: u32) -> ModPoly {
    let m = zp_pow(p, n);
    ModPoly::reduce(f.coeffs().iter().map(|c| residue(c, p, n)).collect(), &m)
}

/// Split the monic `f` by root valuation at working precision `N`.
pub fn slope_factors(f: &QPoly, np: &NewtonPolygon, p: u64, n: u32) -> Result<SlopeFactors> {
    let deg = f.degree().ok_or(Error::ZeroPolynomial)?;
    let counts = np.counts();
    let m = deg - counts.expanding;
    let one = QPoly::new(vec![Q::one()]);
    let modulus = zp_pow(p, n);

    // split 1: roots with v ≥ 0 against roots with v < 0
    let (g, expanding) = if counts.expanding == 0 {
        (f.clone(), one.clone())
    } else if m == 0 {
        (one.clone(), f.clone())
    } else {
        let cm = f.coeff(m);
        debug_assert_eq!(val(&cm, p), np.vertices.iter().map(|v| v.1).min());
        let big_f = QPoly::new(f.coeffs().iter().map(|c| c / &cm).collect());
        let fm = to_mod(&big_f, p, n);
        let fbar = FpPoly::from_mod(&fm, p);
        if fbar.degree() != Some(m) {
            return Err(Error::NotComputable("slope vertex does not match the reduction".into()));
        }
        let lead = fbar.lead();
        let g0 = fbar.scale(super::poly::inv_u64(lead, p), p);
        let h0 = FpPoly::constant(lead, p);
        let (g, h) = hensel_lift(&fm, &g0, &h0, p, n)?;
        (g.to_qpoly(&modulus), h.to_qpoly(&modulus))
    };

    // split 2 on g: roots with v > 0 against roots with v = 0
    let a = counts.contracting;
    let gdeg = g.degree().unwrap_or(0);
    let (contracting, neutral) = if a == 0 {
        (one.clone(), g)
    } else if a == gdeg {
        (g, one)
    } else {
        let gm = to_mod(&g, p, n);
        let gbar = FpPoly::from_mod(&gm, p);
        let low = gbar.0.iter().position(|&c| c != 0).unwrap_or(0);
        if low != a {
            return Err(Error::NotComputable("contracting multiplicity does not match the reduction".into()));
        }
        let g0 = FpPoly::monomial(a);
        let h0 = FpPoly::new(gbar.0[a..].to_vec(), p);
        let (gl, ge) = hensel_lift(&gm, &g0, &h0, p, n)?;
        (gl.to_qpoly(&modulus), ge.to_qpoly(&modulus))
    };
    Ok(SlopeFactors { precision: n, contracting, neutral, expanding })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::arith::{q, qf};
    use crate::padic::newton::newton_polygon;

    fn check_product(f: &QPoly, sf: &SlopeFactors, p: u64) {
        // f ≡ c · g_< g_= h (mod p^N) up to the scalar used in split 1
        let prod = sf.contracting.mul(&sf.neutral).mul(&sf.expanding);
        let deg = f.degree().unwrap();
        assert_eq!(prod.degree(), Some(deg));
        let c = f.coeff(deg) / prod.coeff(deg);
        let n = sf.precision as i64;
        for i in 0..=deg {
            let d = f.coeff(i) - &c * prod.coeff(i);
            // precision loss is bounded by the scaling in split 1
            assert!(d.is_zero() || val(&d, p).unwrap() >= n - 8, "coefficient {i}");
        }
    }

    #[test]
    fn companion_split() {
        let p = 5;
        let f = QPoly::new(vec![q(5), q(-3), q(1)]);
        let np = newton_polygon(&f, p).unwrap();
        let sf = slope_factors(&f, &np, p, 20).unwrap();
        assert_eq!(sf.contracting.degree(), Some(1));
        assert_eq!(sf.neutral.degree(), Some(1));
        assert_eq!(sf.expanding.degree(), Some(0));
        check_product(&f, &sf, p);
        // the contracting root is divisible by 5, the neutral one a unit
        let r_lt = -sf.contracting.coeff(0);
        assert!(val(&r_lt, p).unwrap() >= 1);
        assert_eq!(val(&sf.neutral.coeff(0), p), Some(0));
    }

    #[test]
    fn three_way_split() {
        for p in [2u64, 3, 5] {
            let pi = p as i64;
            // roots 1/p, 1 + p, p²
            let roots = [qf(1, pi), q(1 + pi), q(pi * pi)];
            let f = roots.iter().fold(QPoly::new(vec![q(1)]), |acc, r| acc.mul(&QPoly::new(vec![-r.clone(), q(1)])));
            let np = newton_polygon(&f, p).unwrap();
            let sf = slope_factors(&f, &np, p, 24).unwrap();
            assert_eq!(
                [sf.contracting.degree(), sf.neutral.degree(), sf.expanding.degree()],
                [Some(1), Some(1), Some(1)]
            );
            check_product(&f, &sf, p);
            let c = &sf.contracting;
            let root = -c.coeff(0) / c.coeff(1);
            let d = root - q(pi * pi);
            assert!(d.is_zero() || val(&d, p).unwrap() >= 16);
        }
    }

    #[test]
    fn lift_identity_mod_pn() {
        let p = 3;
        let n = 10;
        let m = zp_pow(p, n);
        // 3x³ + x² + 3x + 5 ≡ (x + 1)(x + 2) mod 3
        let f = ModPoly::reduce(vec![Z::from(5), Z::from(3), Z::from(1), Z::from(3)], &m);
        let fbar = FpPoly::from_mod(&f, p);
        let g0 = FpPoly::new(vec![1, 1], p);
        let (h0, rem) = fbar.divrem(&g0, p);
        assert!(rem.is_zero());
        assert_eq!(h0.mul(&g0, p), fbar);
        let (g, h) = hensel_lift(&f, &g0, &h0, p, n).unwrap();
        assert_eq!(g.mul(&h, &m), f);
        assert_eq!(g.coeff(1), Z::one());
    }
}
