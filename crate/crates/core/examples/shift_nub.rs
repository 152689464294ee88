//! The one-sided shift on `C2ᴺ` has `con(σ)` dense and not closed. Kernels of
//! `σⁿ` project onto every window, so `bik = nub = G` and no compact open
//! subgroup other than `G` is tidy.

use std::sync::Arc;

use tdlc::finite::FiniteGroup;
use tdlc::shift::{ShiftInstance, Sidedness};
use tdlc::theorems::shift::PROJECTION_WIDTH;
use tdlc::Backend;

fn main() -> tdlc::Result<()> {
    let s = ShiftInstance::new(Arc::new(FiniteGroup::cyclic(2)), Sidedness::OneSided);
    for m in 1..=PROJECTION_WIDTH {
        let proj = s.iterated_kernel_projection(m, m)?;
        println!("ker σ^{m} on [1,{m}]: {} of {} patterns", proj.len(), proj.universe());
    }

    let u = s.trivial_on(1, 2)?;
    println!("U = {u:?}, displacement {}", s.displacement(&u)?);
    println!("tidy above: {}", s.is_tidy_above(&u)?);
    let r = s.scale()?;
    println!("scale {} attained by {:?}", r.value, r.tidy);
    let d = s.decompose();
    println!("con: {}", d.con.describe());
    println!("nub: {}", d.nub.map_or("not derived", |n| n.describe()));
    Ok(())
}
