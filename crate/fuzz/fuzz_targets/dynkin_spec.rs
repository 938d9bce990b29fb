#![no_main]

use clusterbelt::dynkin::{build_diagram, DynkinSpec};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(spec) = text.parse::<DynkinSpec>() else { return };
    assert_eq!(spec.to_string().parse::<DynkinSpec>().expect("printed spec re-parses"), spec);
    if spec.vertex_count() <= 4096 {
        let g = build_diagram(spec).expect("accepted spec builds");
        assert!(g.is_properly_colored());
    }
});
