//! Scales of a few matrices over `ℚₚ`, read off the Newton polygon of the
//! characteristic polynomial and confirmed on a tidy lattice.
//!
//! `cargo run --example padic_scale -- 3`

use tdlc::padic::arith::format_rational;
use tdlc::padic::PadicInstance;
use tdlc::theorems::generate::named_matrices;

fn main() -> tdlc::Result<()> {
    let p = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5);
    for (name, a) in named_matrices(p) {
        let inst = PadicInstance::new(p, a)?;
        let slopes: Vec<String> =
            inst.newton().segments.iter().map(|s| format!("{}×{}", format_rational(&s.slope), s.length)).collect();
        let s = inst.scale_value()?;
        let certificate = match inst.adapted_tidy_lattice() {
            Ok((l, d)) => format!("tidy lattice {} with displacement {d}", l.describe()),
            Err(e) => format!("no certificate: {e}"),
        };
        println!("{name:<24} slopes [{}]  s = {s}", slopes.join(", "));
        println!("{:<24} {certificate}", "");
    }
    Ok(())
}
