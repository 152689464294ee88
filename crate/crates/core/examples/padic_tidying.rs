//! Tidy a lattice in `ℚ₃²`: minus stages until tidy above, then the Levi
//! correction. Displacements along the way shrink to the scale.

use tdlc::dynamics::minus_trace;
use tdlc::padic::arith::{q, qf};
use tdlc::padic::{Lattice, PadicInstance, QMat};

fn main() -> tdlc::Result<()> {
    let p = 3;
    // eigenvalues 1/3 and 3 in a skew basis
    let a = QMat::from_rows(vec![vec![qf(1, 3), q(1)], vec![q(0), q(3)]]);
    let inst = PadicInstance::new(p, a)?;
    let u = Lattice::span(p, 2, vec![vec![q(1), q(0)], vec![q(0), qf(1, 27)]]);

    println!("scale {}", inst.scale_value()?);
    for r in minus_trace(&inst, &u, 4)? {
        println!("U_-{}: {} displacement {}", r.stage, r.subgroup.describe(), r.displacement);
    }
    let t = inst.tidying(&u, 64)?;
    println!("tidy above at stage {}: {}", t.stage, t.tidy_above.describe());
    println!("Levi lattice {}", t.levi.describe());
    println!("tidy: {} displacement {}", t.result.describe(), t.displacement);
    Ok(())
}
