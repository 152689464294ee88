//! Every subgroup of `C2 × C4` under one endomorphism: its displacement, its
//! `U₋ U₊` factorisation, and what the tidying procedure turns it into.

use std::sync::Arc;

use tdlc::dynamics::{displacement_index, tidy_above};
use tdlc::finite::{FiniteEndo, FiniteGroup, FiniteInstance, DEFAULT_BOUND};
use tdlc::theorems::finite::describe_set;

fn main() -> tdlc::Result<()> {
    let g = Arc::new(FiniteGroup::abelian(&[2, 4])?);
    let alpha = FiniteEndo::new(&g, vec![0, 4, 2, 6, 4, 0, 6, 2])?;
    let inst = FiniteInstance::new(g.clone(), alpha);

    println!("{}: scale {}", g.name(), inst.exhaustive_scale()?);
    println!("{:<40} {:>5} {:>6} {:<30}", "U", "disp", "stage", "tidying");
    for u in g.all_subgroups(DEFAULT_BOUND)? {
        let (_, stage) = tidy_above(&inst, &u, 64)?;
        let t = inst.tidying_procedure(&u, 64)?;
        println!(
            "{:<40} {:>5} {:>6} {:<30}",
            describe_set(&g, &u),
            displacement_index(&inst, &u)?,
            stage,
            describe_set(&g, &t)
        );
    }
    Ok(())
}
