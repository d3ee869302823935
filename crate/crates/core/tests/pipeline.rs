use std::sync::Arc;

use galedim::bias::{measure, sample_sequence, shannon_entropy, BiasSequence};
use galedim::compressor::{dim_estimates, lz78_compress};
use galedim::fsg::{induced_gale, success_exponent_search, FsgSpec, SuccessMode};
use galedim::gale::{evaluate, validate, GaleSpec};
use galedim::predictor::{
    from_martingale, log_loss, to_martingale, KtPredictor, Predictor, PredictorSpec,
};
use galedim::seqio::{read_sequence, write_sequence};

#[test]
fn sample_survives_both_file_formats() {
    let beta = BiasSequence::constant_ratio(3, 10).unwrap();
    let w = sample_sequence(&beta, 12_345, 8);
    let dir = tempfile::TempDir::new().unwrap();
    for name in ["w.bits", "w.bin"] {
        let path = dir.path().join(name);
        write_sequence(&path, &w).unwrap();
        assert_eq!(read_sequence(&path).unwrap(), w);
    }
    assert_eq!(lz78_compress(&w).decompress(), w);
}

#[test]
fn estimators_agree_on_a_biased_sample() {
    let beta = BiasSequence::constant_ratio(1, 8).unwrap();
    let w = sample_sequence(&beta, 200_000, 1);
    let h = shannon_entropy(1.0 / 8.0);

    let kt_rate = log_loss(&KtPredictor, &w).unwrap() / w.len() as f64;
    assert!((kt_rate - h).abs() < 0.01, "{kt_rate}");

    let empirical = -measure(&beta, &w) / w.len() as f64;
    assert!((empirical - h).abs() < 0.01);

    let lz = dim_estimates(&w).unwrap();
    assert!(lz.lower <= lz.upper && lz.lower > h);

    let spec: FsgSpec = serde_json::from_str(
        r#"{"states": ["q"], "initial_state": "q", "transition": {"q": ["q", "q"]},
            "accounts": [{"initial_capital": "1", "bets": {"q": ["7/8", "1/8"]}}]}"#,
    )
    .unwrap();
    let gambler = spec.build().unwrap();
    let io = success_exponent_search(&gambler, &w, SuccessMode::Io).unwrap();
    assert!((io.threshold - h).abs() < 0.01, "{io:?}");
    let trace = evaluate(&induced_gale(&gambler, h + 0.05).unwrap(), &w).unwrap();
    assert!(trace.tail_min_log > 1000.0);
}

#[test]
fn json_objects_validate() {
    let gale: GaleSpec = serde_json::from_str(
        r#"{"s": 0.5, "kind": "supergale", "rule": {"type": "constant", "bet0": "1/4", "bet1": "1/2"}}"#,
    )
    .unwrap();
    assert!(validate(&gale.build().unwrap(), 10).unwrap().passed);

    let spec: PredictorSpec = serde_json::from_str(
        r#"{"type": "mixture", "components": [{"type": "kt"}, {"type": "measure", "bias": {"type": "periodic", "values": ["1/3", "3/4"]}}]}"#,
    )
    .unwrap();
    let pi: Arc<dyn Predictor> = spec.build().unwrap();
    let d = to_martingale(pi.clone());
    assert!(validate(&d, 10).unwrap().passed);
    let back = from_martingale(&d).unwrap();
    for w in [vec![], vec![0, 1, 1], vec![1; 9]] {
        for b in [0, 1] {
            assert!((back.predict(&w, b).unwrap() - pi.predict(&w, b).unwrap()).abs() < 1e-12);
        }
    }
}
