use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tdlc::padic::arith::q;
use tdlc::padic::{PadicInstance, QMat};

fn random_matrix(rng: &mut ChaCha8Rng) -> QMat {
    let n = rng.gen_range(1..=3);
    QMat::from_rows((0..n).map(|_| (0..n).map(|_| q(rng.gen_range(-9..=9))).collect()).collect())
}

#[test]
fn newton_scale_matches_stage_stabilization() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut uncertified = 0;
    for _ in 0..200 {
        let a = random_matrix(&mut rng);
        for p in [2u64, 3, 5] {
            for m in [Some(a.clone()), a.inverse()].into_iter().flatten() {
                let inst = PadicInstance::new(p, m.clone()).unwrap();
                let stages = inst.stage_displacements(20).unwrap();
                let s = inst.scale_value().unwrap();
                assert_eq!(*stages.last().unwrap(), s, "p = {p}, A = {m:?}, stages {stages:?}");
                if !inst.is_certified() {
                    uncertified += 1;
                }
                let r = tdlc::Backend::scale(&inst).unwrap();
                assert_eq!(r.displacement, r.value);
            }
        }
    }
    assert_eq!(uncertified, 0);
}
