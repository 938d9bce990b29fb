#![no_main]

use clusterbelt::io::{parse_trace_csv, trace_to_csv};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(trace) = parse_trace_csv(text) else { return };
    let again = parse_trace_csv(&trace_to_csv(&trace)).expect("written trace re-parses");
    assert_eq!(again, trace);
});
