//! Valuations and residues of rationals at a prime.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;
pub type Z = BigInt;

pub fn q(n: i64) -> Q {
    Q::from_integer(Z::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(Z::from(n), Z::from(d))
}

/// `p^k` as a rational, `k` of either sign.
pub fn p_pow(p: u64, k: i64) -> Q {
    let base = Z::from(p).pow(k.unsigned_abs() as u32);
    if k >= 0 {
        Q::from_integer(base)
    } else {
        Q::new(Z::one(), base)
    }
}

pub fn zp_pow(p: u64, k: u32) -> Z {
    Z::from(p).pow(k)
}

/// Valuation of a nonzero integer.
pub fn val_int(z: &Z, p: u64) -> Option<i64> {
    if z.is_zero() {
        return None;
    }
    let pz = Z::from(p);
    let mut z = z.clone();
    let mut v = 0;
    loop {
        let (qq, r) = z.div_rem(&pz);
        if !r.is_zero() {
            return Some(v);
        }
        z = qq;
        v += 1;
    }
}

/// `v_p(x)`, `None` for zero.
pub fn val(x: &Q, p: u64) -> Option<i64> {
    Some(val_int(x.numer(), p)? - val_int(x.denom(), p)?)
}

/// Smallest valuation among the entries; `None` if all vanish.
pub fn min_val<'a>(xs: impl IntoIterator<Item = &'a Q>, p: u64) -> Option<i64> {
    xs.into_iter().filter_map(|x| val(x, p)).min()
}

/// `a⁻¹ mod m` for `gcd(a, m) = 1`.
pub fn inv_mod(a: &Z, m: &Z) -> Z {
    let e = a.mod_floor(m).extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

/// Residue of `x ∈ ℤ_(p)` modulo `p^k`, in `[0, p^k)`.
pub fn residue(x: &Q, p: u64, k: u32) -> Z {
    let m = zp_pow(p, k);
    let num = x.numer().mod_floor(&m);
    (num * inv_mod(x.denom(), &m)).mod_floor(&m)
}

/// Symmetric lift of a residue modulo `m`.
pub fn symmetric(r: &Z, m: &Z) -> Z {
    let r = r.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// The representative of `x + p^v ℤ_(p)` in `ℤ[1/p] ∩ [0, p^v)`.
pub fn canonical_rep(x: &Q, p: u64, v: i64) -> Q {
    if x.is_zero() {
        return Q::zero();
    }
    let vx = val(x, p).expect("nonzero");
    if vx >= v {
        return Q::zero();
    }
    // x = p^vx · u, u a unit; residue of x/p^vx modulo p^{v - vx}
    let u = x / p_pow(p, vx);
    let r = residue(&u, p, (v - vx) as u32);
    Q::from_integer(r) * p_pow(p, vx)
}

/// `x` rounded to absolute precision `p^prec`: the symmetric `ℤ[1/p]` lift of
/// `x mod p^prec ℤ_(p)`. Exact for numbers already in `ℤ[1/p]` with small
/// digits.
pub fn round_padic(x: &Q, p: u64, prec: i64) -> Q {
    if x.is_zero() {
        return Q::zero();
    }
    let vx = val(x, p).expect("nonzero");
    if vx >= prec {
        return Q::zero();
    }
    let u = x / p_pow(p, vx);
    let k = (prec - vx) as u32;
    let m = zp_pow(p, k);
    Q::from_integer(symmetric(&residue(&u, p, k), &m)) * p_pow(p, vx)
}

/// Whether the `ℤ_(p)` membership `x ∈ ℤ_(p)` holds.
pub fn is_integral(x: &Q, p: u64) -> bool {
    x.is_zero() || val(x, p).unwrap() >= 0
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Parse `"a/b"` or `"a"`.
pub fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: Z = a.trim().parse().ok()?;
            let b: Z = b.trim().parse().ok()?;
            (!b.is_zero()).then(|| Q::new(a, b))
        }
        None => s.parse::<Z>().ok().map(Q::from_integer),
    }
}

pub fn format_rational(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn valuations() {
        assert_eq!(val(&qf(50, 3), 5), Some(2));
        assert_eq!(val(&qf(3, 250), 5), Some(-3));
        assert_eq!(val(&q(0), 5), None);
        assert_eq!(val(&q(7), 2), Some(0));
    }

    #[test]
    fn canonical_reps() {
        // 1/3 mod 5 = 2
        assert_eq!(canonical_rep(&qf(1, 3), 5, 1), q(2));
        // 7/2 − 3/2 = 2
        assert_eq!(canonical_rep(&qf(7, 2), 2, 1), qf(3, 2));
        assert_eq!(canonical_rep(&q(10), 5, 1), q(0));
        assert_eq!(canonical_rep(&qf(-1, 2), 2, 0), qf(1, 2));
    }

    #[test]
    fn rounding_keeps_small_integers() {
        assert_eq!(round_padic(&q(1), 3, 10), q(1));
        assert_eq!(round_padic(&q(-2), 3, 10), q(-2));
        assert_eq!(round_padic(&q(81), 3, 4), q(0));
        assert_eq!(round_padic(&qf(1, 9), 3, 4), qf(1, 9));
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational(" -3/6 "), Some(qf(-1, 2)));
        assert_eq!(parse_rational("4"), Some(q(4)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
        assert_eq!(format_rational(&qf(6, 4)), "3/2");
    }

    proptest! {
        #[test]
        fn valuation_is_additive(a in 1i64..10_000, b in 1i64..10_000, c in 1i64..10_000, d in 1i64..10_000) {
            for p in [2u64, 3, 5] {
                let x = qf(a, b);
                let y = qf(c, d);
                prop_assert_eq!(val(&(&x * &y), p).unwrap(), val(&x, p).unwrap() + val(&y, p).unwrap());
            }
        }

        #[test]
        fn canonical_rep_is_congruent(a in -10_000i64..10_000, b in 1i64..10_000, v in -3i64..6) {
            let p = 3u64;
            let x = qf(a, b);
            let r = canonical_rep(&x, p, v);
            let diff = &x - &r;
            prop_assert!(diff.is_zero() || val(&diff, p).unwrap() >= v);
            prop_assert!(r >= q(0) && r < p_pow(p, v));
        }
    }
}
