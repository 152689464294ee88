//! `h(α) = ln s(α)` on vector groups, where con(α) is a closed subspace, and
//! the addition formula over an invariant subspace. On the full shift the
//! formula does not apply: s = 1 but the entropy is ln |F|.

use tdlc::cli;

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/instances");
    for file in ["diag_equal_slopes.json", "diag_three_slopes.json", "shift_one_sided.json"] {
        let path = format!("{dir}/{file}");
        let out = cli::run(["tdlc", "entropy", path.as_str()]);
        print!("{}", out.stdout);
        eprint!("{}", out.stderr);
        println!("exit {}\n", out.code);
    }
}
