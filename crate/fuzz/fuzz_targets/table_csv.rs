#![no_main]

use libfuzzer_sys::fuzz_target;
use sigrecon::io::{table_from_csv, table_to_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(table) = table_from_csv(text, None) else { return };
    let (lo, hi) = table.range();
    table.eval(0.5 * (lo + hi)).expect("midpoint lies inside the table");
    let again = table_from_csv(&table_to_csv(&table), None).expect("written table parses");
    assert_eq!(table.times(), again.times());
});
