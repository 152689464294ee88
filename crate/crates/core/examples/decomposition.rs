//! con, con⁻, par, par⁻, lev, nub, bik and Ω on one instance of each backend.

use std::sync::Arc;

use tdlc::finite::{FiniteEndo, FiniteGroup, FiniteInstance};
use tdlc::instance::GroupInstance;
use tdlc::padic::arith::{q, qf};
use tdlc::padic::{PadicInstance, QMat};
use tdlc::shift::{ShiftInstance, Sidedness};

fn main() -> tdlc::Result<()> {
    let c6 = Arc::new(FiniteGroup::cyclic(6));
    let instances = [
        GroupInstance::Finite(FiniteInstance::new(c6.clone(), FiniteEndo::power_map(&c6, 2)?)),
        GroupInstance::Padic(PadicInstance::new(2, QMat::diag(&[qf(1, 2), q(1), q(2)]))?),
        GroupInstance::Shift(ShiftInstance::new(Arc::new(FiniteGroup::cyclic(2)), Sidedness::OneSided)),
        GroupInstance::Shift(ShiftInstance::new(Arc::new(FiniteGroup::cyclic(2)), Sidedness::TwoSided)),
    ];
    for inst in &instances {
        let d = inst.decompose()?;
        println!("{}", inst.key());
        for (name, field) in d.fields() {
            println!("  {name:<6} {}", field.describe());
        }
        for v in d.invariant_violations() {
            println!("  violated: {v}");
        }
    }
    Ok(())
}
