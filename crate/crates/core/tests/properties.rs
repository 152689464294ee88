use proptest::prelude::*;

use tdlc::dynamics::{displacement_index, is_tidy};
use tdlc::padic::arith::{q, val};
use tdlc::padic::{Lattice, PadicInstance, QMat};
use tdlc::{Backend, Index};

fn int_matrix(n: usize) -> impl Strategy<Value = QMat> {
    prop::collection::vec(-9i64..=9, n * n)
        .prop_map(move |xs| QMat::from_rows(xs.chunks(n).map(|r| r.iter().map(|&x| q(x)).collect()).collect()))
}

fn invertible() -> impl Strategy<Value = (u64, QMat)> {
    (prop::sample::select(vec![2u64, 3, 5]), (1usize..=3).prop_flat_map(int_matrix), any::<bool>()).prop_filter_map(
        "singular",
        |(p, m, inv)| {
            let mi = m.inverse()?;
            Some((p, if inv { mi } else { m }))
        },
    )
}

fn lattice(p: u64, n: usize) -> impl Strategy<Value = Lattice> {
    int_matrix(n).prop_filter_map("not full rank", move |m| {
        let l = Lattice::span(p, n, m.row_vecs());
        l.is_full().then_some(l)
    })
}

fn pow_index(p: u64, k: i64) -> Index {
    (p as Index).pow(k as u32)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn displacement_bounds_scale((p, a, u) in invertible().prop_flat_map(|(p, a)| {
        let n = a.rows();
        (Just(p), Just(a), lattice(p, n))
    })) {
        let inst = PadicInstance::new(p, a).unwrap();
        let v = is_tidy(&inst, &u).unwrap();
        prop_assert!(v.displacement >= v.scale);
        prop_assert_eq!(v.displacement % v.scale, 0);
    }

    #[test]
    fn tidying_reaches_the_scale((p, a, u) in invertible().prop_flat_map(|(p, a)| {
        let n = a.rows();
        (Just(p), Just(a), lattice(p, n))
    })) {
        let inst = PadicInstance::new(p, a).unwrap();
        let t = inst.tidying(&u, 64).unwrap();
        prop_assert_eq!(t.displacement, inst.scale_value().unwrap());
        prop_assert_eq!(displacement_index(&inst, &t.result).unwrap(), t.displacement);
        prop_assert!(u.contains(&t.tidy_above));
    }

    // s(α) / s(α⁻¹) is the module |det A|ₚ
    #[test]
    fn scale_ratio_is_the_module((p, a) in invertible()) {
        let inst = PadicInstance::new(p, a.clone()).unwrap();
        let inv = inst.inverse().unwrap();
        let v = val(&a.det(), p).unwrap();
        let (s, t) = (inst.scale_value().unwrap(), inv.scale_value().unwrap());
        if v <= 0 {
            prop_assert_eq!(s, t * pow_index(p, -v));
        } else {
            prop_assert_eq!(t, s * pow_index(p, v));
        }
    }

    #[test]
    fn index_is_multiplicative((p, l) in prop::sample::select(vec![2u64, 3, 5]).prop_flat_map(|p| (Just(p), lattice(p, 2))), k in 1i64..4) {
        let inst = PadicInstance::new(p, QMat::identity(2)).unwrap();
        let mid = l.scaled(k);
        let small = l.scaled(k + 1);
        let whole = inst.index(&l, &small).unwrap();
        prop_assert_eq!(whole, inst.index(&l, &mid).unwrap() * inst.index(&mid, &small).unwrap());
        prop_assert_eq!(inst.index(&mid, &small).unwrap(), pow_index(p, 2));
    }
}
