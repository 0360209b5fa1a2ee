#![no_main]

use libfuzzer_sys::fuzz_target;
use sigrecon::io::from_json;
use sigrecon::SamplingDensity;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(density) = from_json::<SamplingDensity>(text) else { return };
    for u in [0.0, 0.3, 0.5, 1.0] {
        let t = density.inverse_cdf(u).expect("u lies in [0, 1]");
        assert!((0.0..=density.t_end).contains(&t));
    }
});
