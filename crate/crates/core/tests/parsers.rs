use proptest::prelude::*;
use sigrecon::io::{self, sample_set_from_csv, spectrum_from_csv, table_from_csv};
use sigrecon::signals::NoiseSpec;
use sigrecon::{Prior, ReconModel, SamplingDensity, SignalSpec};

const PRIOR_SEEDS: &[&str] = &[
    r#"{"type":"bandlimited","F":5}"#,
    r#"{"type":"multiband","bands":[{"center":-3,"half_width":1},{"center":3,"half_width":1}]}"#,
    r#"{"type":"sparse","atoms":[{"freq":1,"mass":0.5},{"freq":-1,"mass":0.5}]}"#,
    r#"{"type":"numeric_density","support_radius":1,"values":[0,1,0]}"#,
    r#"{"type":"gaussian_mixture","components":[{"center":0,"stdev":1,"weight":1}]}"#,
];

fn json_fragments() -> impl Strategy<Value = String> {
    let token = prop_oneof![
        Just("{".to_string()),
        Just("}".to_string()),
        Just("[".to_string()),
        Just("]".to_string()),
        Just(",".to_string()),
        Just(":".to_string()),
        Just("\"type\"".to_string()),
        Just("\"F\"".to_string()),
        Just("\"values\"".to_string()),
        Just("\"support_radius\"".to_string()),
        Just("\"numeric_density\"".to_string()),
        Just("\"synthetic\"".to_string()),
        Just("\"table\"".to_string()),
        Just("\"atoms\"".to_string()),
        Just("\"times\"".to_string()),
        Just("\"coeffs\"".to_string()),
        Just("\"kind\"".to_string()),
        Just("\"universal\"".to_string()),
        any::<f64>().prop_map(|v| format!("{v:e}")),
        any::<i64>().prop_map(|v| v.to_string()),
        "[a-z_]{0,8}".prop_map(|s| format!("\"{s}\"")),
    ];
    proptest::collection::vec(token, 0..40).prop_map(|v| v.concat())
}

fn mutated_seed() -> impl Strategy<Value = String> {
    (0..PRIOR_SEEDS.len(), any::<usize>(), "[ -~]{0,6}").prop_map(|(i, pos, ins)| {
        let s = PRIOR_SEEDS[i];
        let cut = pos % (s.len() + 1);
        let cut = (0..=cut).rev().find(|&c| s.is_char_boundary(c)).unwrap_or(0);
        format!("{}{}{}", &s[..cut], ins, &s[cut..])
    })
}

fn exercise_json(text: &str) {
    let _ = Prior::from_json(text);
    let _ = SignalSpec::from_json(text);
    let _ = ReconModel::from_json(text);
    let _ = serde_json::from_str::<NoiseSpec>(text);
    let _ = serde_json::from_str::<SamplingDensity>(text);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn json_parsers_never_panic(text in prop_oneof![json_fragments(), mutated_seed(), any::<String>()]) {
        exercise_json(&text);
    }

    #[test]
    fn csv_parsers_never_panic(text in "[0-9a-z_,.\\-+e\n ]{0,200}") {
        let _ = table_from_csv(&text, None);
        let _ = spectrum_from_csv(&text);
        let side = r#"{"density":{"kind":"universal","alpha":256,"T":1,"mass":67.15580019257131},"seed":0,"samples":2}"#;
        let _ = sample_set_from_csv(&text, side);
        let _ = sample_set_from_csv(&format!("index,t,w\n{text}"), side);
        let _ = table_from_csv(&format!("t,re,im\n{text}"), None);
    }
}

#[test]
fn seeds_parse() {
    for s in PRIOR_SEEDS {
        Prior::from_json(s).unwrap();
    }
}

fn corpus(target: &str) -> Vec<String> {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut files: Vec<_> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    assert!(!files.is_empty(), "no seeds in {}", dir.display());
    files.iter().map(|p| std::fs::read_to_string(p).unwrap()).collect()
}

#[test]
fn fuzz_seeds_are_valid_inputs() {
    for s in corpus("prior_json") {
        Prior::from_json(&s).unwrap();
    }
    for s in corpus("signal_json") {
        SignalSpec::from_json(&s).unwrap();
    }
    for s in corpus("noise_json") {
        serde_json::from_str::<NoiseSpec>(&s).unwrap().validate().unwrap();
    }
    for s in corpus("model_json") {
        ReconModel::from_json(&s).unwrap();
    }
    for s in corpus("density_json") {
        io::from_json::<SamplingDensity>(&s).unwrap();
    }
    for s in corpus("sample_set_csv") {
        let (csv, side) = s.split_once('\0').unwrap();
        io::sample_set_from_csv(csv, side).unwrap();
    }
    for s in corpus("table_csv") {
        io::table_from_csv(&s, None).unwrap();
    }
    for s in corpus("spectrum_csv") {
        io::spectrum_from_csv(&s).unwrap();
    }
}
