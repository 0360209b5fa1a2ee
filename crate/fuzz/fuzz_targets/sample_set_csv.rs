#![no_main]

use libfuzzer_sys::fuzz_target;
use sigrecon::io::{sample_set_from_csv, sample_set_sidecar, sample_set_to_csv};

// Input layout: sample CSV, a NUL byte, then the JSON sidecar.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Some((csv, sidecar)) = text.split_once('\0') else { return };
    let Ok(set) = sample_set_from_csv(csv, sidecar) else { return };
    let again = sample_set_from_csv(&sample_set_to_csv(&set), &sample_set_sidecar(&set)).expect("written set parses");
    assert_eq!(set, again);
});
