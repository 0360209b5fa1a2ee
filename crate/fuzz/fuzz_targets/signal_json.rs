#![no_main]

use libfuzzer_sys::fuzz_target;
use sigrecon::SignalSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(signal) = SignalSpec::from_json(text) else { return };
    for t in [0.0, 0.5, 1.0, -3.0] {
        let _ = signal.eval(t);
    }
    let _ = signal.energy();
    SignalSpec::from_json(&signal.to_json()).expect("serialized signal parses");
});
