//! Generate a seeded system, write it in the text format, read it back.
//!
//!     cargo run --example generate_and_serialize -- 6 3 parseval 42

use bigframe::instances::format::{deserialize, serialize};
use bigframe::instances::random::{random_system, GeneratorSpec, SystemKind};
use bigframe::{classify, SpectralTolerance};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let dim = args.first().map_or(5, |s| s.parse().expect("dimension"));
    let count = args.get(1).map_or(3, |s| s.parse().expect("family size"));
    let kind: SystemKind = args.get(2).map_or(SystemKind::Tight, |s| s.parse().expect("kind"));
    let seed = args.get(3).map_or(0, |s| s.parse().expect("seed"));

    let sys = random_system(&GeneratorSpec::new(dim, count, kind, seed)).expect("valid spec");
    let text = serialize(&sys);
    let path = std::env::temp_dir().join(format!("bigframe-{}-{dim}-{count}-{seed}.bgf", kind.as_str()));
    std::fs::write(&path, &text).expect("writable temp dir");

    let back = deserialize(&std::fs::read_to_string(&path).unwrap()).expect("own output parses");
    println!("wrote {} ({} lines)", path.display(), text.lines().count());
    println!("round trip exact: {}", back == sys);
    println!("verdict: {}", classify(&back, &SpectralTolerance::default()).verdict);
}
