//! Load an instance from JSON and print its scale, as the `tdlc` binary does.

use tdlc::instance::InstanceFile;

const TEXT: &str = r#"{
  "backend": "padic",
  "group": {"prime": 2, "dim": 2},
  "endomorphism": {"matrix": [["0", "1/4"], ["1", "0"]]},
  "subgroups": {"H": [["1", "0"], ["0", "1"]]}
}"#;

fn main() -> tdlc::Result<()> {
    let loaded = InstanceFile::parse(TEXT)?.load(None)?;
    let inst = loaded.instance();
    let s = inst.scale()?;
    println!("{}", inst.key());
    println!("s = {} by {}, tidy {} with displacement {}", s.scale, s.method, s.tidy, s.displacement);
    Ok(())
}
