use semiresolvent::experiments::{
    resolvent_sweep, resonance_region_check, Experiment, RegionLaw, SweepConfig, CROSS_CHECK_TOLERANCE,
};

#[test]
fn absorption_agrees_with_distortion_on_free_model() {
    let mut cfg = SweepConfig::preset("M1", Experiment::ResolventSweep).unwrap();
    cfg.h_list = vec![0.4, 0.3, 0.2];
    cfg.cross_check = true;
    let r = resolvent_sweep(&cfg).unwrap();
    for p in &r.points {
        let c = p.cross_check.as_ref().expect("cross-check ran");
        let rel = c.relative_difference.expect("absorption box within the size guard");
        assert!(c.accepted && rel <= CROSS_CHECK_TOLERANCE, "h = {}: {c:?}", p.h);
    }
}

#[test]
fn truncated_norm_never_exceeds_global() {
    let mut cfg = SweepConfig::preset("M4", Experiment::ResolventSweep).unwrap();
    cfg.h_list = vec![0.4, 0.2, 0.1, 0.05];
    let r = resolvent_sweep(&cfg).unwrap();
    for p in &r.points {
        assert!(p.error.is_none() && p.ordered, "{p:?}");
        assert!(p.truncated.unwrap() <= p.global.unwrap() * (1.0 + 1e-8));
    }
}

#[test]
fn region_verdicts_survive_larger_angle() {
    let mut log = SweepConfig::preset("M4", Experiment::RegionCheck).unwrap();
    log.h_list = vec![0.4, 0.2, 0.1, 0.05];
    let mut exp = SweepConfig::preset("M3", Experiment::RegionCheck).unwrap();
    exp.law = RegionLaw::Exp;
    exp.exp_rate = 1.5;
    exp.exp_prefactor = 1.5;
    exp.h_list = vec![0.1, 0.07, 0.05, 0.035];
    for base in [log, exp] {
        let mut wide = base.clone();
        wide.theta_scale = 1.5;
        let a = resonance_region_check(&base).unwrap();
        let b = resonance_region_check(&wide).unwrap();
        assert!(a.empty, "{}", base.model);
        assert_eq!(a.empty, b.empty, "{}", base.model);
        for (p, q) in a.points.iter().zip(&b.points) {
            assert_eq!(p.candidates.len(), q.candidates.len(), "{} h = {}", base.model, p.h);
        }
    }
}
