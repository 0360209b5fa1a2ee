#![no_main]

use libfuzzer_sys::fuzz_target;
use sigrecon::NoiseSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(noise) = serde_json::from_slice::<NoiseSpec>(data) else { return };
    if noise.validate().is_err() {
        return;
    }
    let _ = noise.eval(0.25);
    let _ = noise.norm_sq(1.0);
});
