use qpdiff_core::verify::{run, run_selection, Perturbation, Suite};

#[test]
fn every_suite_passes() {
    for report in run_selection(&Suite::ALL, Perturbation::default()) {
        assert!(report.pass, "{}: {:?}", report.suite, report.failures);
        assert!(report.cases > 0);
    }
}

#[test]
fn perturbed_references_are_caught() {
    let p = Perturbation { relative: 1e-5 };
    for suite in Suite::ALL.into_iter().filter(|&s| s != Suite::SpecialPoints) {
        let report = run(suite, p);
        assert!(!report.pass, "{} passed with perturbed references", report.suite);
    }
}
