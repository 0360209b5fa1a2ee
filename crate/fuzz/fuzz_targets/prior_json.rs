#![no_main]

use libfuzzer_sys::fuzz_target;
use sigrecon::{kernel_value, Prior};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(prior) = Prior::from_json(text) else { return };
    for dt in [0.0, 0.37, -2.5, 1e6] {
        let k = kernel_value(&prior, dt);
        assert!(k.norm() <= 1.0 + 1e-9, "kernel exceeds k(0) at dt={dt}");
    }
    let again = Prior::from_json(&prior.to_json()).expect("serialized prior parses");
    assert_eq!(prior, again);
});
