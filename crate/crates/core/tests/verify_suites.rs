use lsfactors::verify::{run_suite, Suite, VerifyOptions};

#[test]
fn every_suite_passes() {
    let opts = VerifyOptions::default();
    for suite in Suite::ALL {
        let r = run_suite(suite, &opts);
        println!("{} cases={} ms={}", suite, r.cases, r.elapsed_ms);
        assert!(r.passed, "{suite}: {:#}", serde_json::to_value(&r.failures).unwrap());
    }
}
