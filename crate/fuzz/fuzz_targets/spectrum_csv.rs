#![no_main]

use libfuzzer_sys::fuzz_target;
use sigrecon::io::spectrum_from_csv;
use sigrecon::operator_lab::{eig_count_of, stat_dim_of};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(lambdas) = spectrum_from_csv(text) else { return };
    let _ = stat_dim_of(&lambdas, 1e-3);
    let _ = eig_count_of(&lambdas, 1e-3);
});
