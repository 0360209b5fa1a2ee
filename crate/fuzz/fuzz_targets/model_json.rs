#![no_main]

use libfuzzer_sys::fuzz_target;
use sigrecon::ReconModel;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(model) = ReconModel::from_json(text) else { return };
    let ts = [0.0, 0.5 * model.t_end, model.t_end];
    let batch = model.evaluate_batch(&ts);
    for (t, v) in ts.iter().zip(&batch) {
        let single = model.evaluate(*t);
        assert!(single == *v || (single.is_nan() && v.is_nan()));
    }
    ReconModel::from_json(&model.to_json()).expect("serialized model parses");
});
