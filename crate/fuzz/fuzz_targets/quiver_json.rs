#![no_main]

use clusterbelt::io::parse_quiver_json;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(file) = parse_quiver_json(text) else { return };
    file.quiver.check_invariants().expect("parsed quiver is valid");
    let again = parse_quiver_json(&file.to_json()).expect("serialized quiver re-parses");
    assert!(again.quiver.same_arrows(&file.quiver));
    assert_eq!(again.quiver.frozen(), file.quiver.frozen());
    assert_eq!(again.values, file.values);
    if file.coloring.is_some() {
        assert_eq!(again.coloring, file.coloring);
    }
});
