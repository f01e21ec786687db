use covertrate::harness::{run_sweep, write_csv, ExperimentConfig, SolveMode, Sweep, SweepVariable};
use covertrate::model::{LinkSnrs, QosRequirements, SlotModel};
use covertrate::robust::UncertaintyBudget;
use covertrate::solver::{dc_solve, grid_oracle, Mode, RateFn, RateProblem, SolverConfig};
use proptest::prelude::*;

fn snr() -> impl Strategy<Value = f64> {
    (-1.0f64..3.0).prop_map(|e| 10f64.powf(e))
}

fn small(draws: usize) -> ExperimentConfig {
    ExperimentConfig { draws, seed: 11, ..Default::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn feasible_solutions_meet_requirements(
        gb in snr(), gc in snr(), gu in snr(),
        p_r1 in 0.05f64..0.95,
        r_sec in 0.0f64..2.0, r_cov in 0.0f64..1.0,
    ) {
        let snrs = LinkSnrs::new(gb, gc, gu);
        let slots = SlotModel::from_covert_probability(p_r1).unwrap();
        let qos = QosRequirements::new(r_sec, r_cov, 0.1).unwrap();
        let r = dc_solve(&snrs, &slots, &qos, &SolverConfig::default());
        if r.is_feasible() {
            let b = r.rates;
            // The artificial-noise fallback carries no secure stream.
            if r.mode == Mode::Joint {
                prop_assert!(b.secrecy_rate() >= r_sec - 1e-9);
            }
            prop_assert!(b.covert_rate >= r_cov - 1e-9);
            prop_assert!((0.0..=1.0).contains(&r.rho_cs()));
            let sum = slots.p_r0() * b.sec_rate_psi0 + slots.p_r1() * b.sec_rate_psi1 + b.covert_rate;
            prop_assert!((b.average_rate - sum).abs() <= 1e-12 * sum.max(1.0));
        } else {
            prop_assert_eq!(r.average_rate(), 0.0);
        }
    }

    #[test]
    fn solver_never_beats_the_true_optimum_by_more_than_the_grid_step(
        gb in snr(), gc in snr(), gu in snr(),
    ) {
        let snrs = LinkSnrs::new(gb, gc, gu);
        let slots = SlotModel::from_covert_probability(0.5).unwrap();
        let qos = QosRequirements::vacuous();
        let r = dc_solve(&snrs, &slots, &qos, &SolverConfig::default());
        let oracle = grid_oracle(&snrs, &slots, &qos, 10_001, RateFn::Standard);
        let problem = RateProblem::standard(&snrs, &slots, &qos);
        // Objective slope bounds the grid's shortfall.
        let slack = 1e-4 * (1.0 + gb.max(gc).max(gu));
        prop_assert!(r.average_rate() <= oracle.average_rate() + slack);
        prop_assert!((problem.objective(r.rho_cs()) - r.average_rate()).abs() <= 1e-12 * r.average_rate().max(1.0));
    }
}

#[test]
fn sweep_rows_follow_the_sweep_values() {
    let mut cfg = small(200);
    cfg.sweep = Some(Sweep { variable: SweepVariable::DAc, values: vec![2.0, 4.0, 6.0] });
    let rows = run_sweep(&cfg).unwrap();
    assert_eq!(rows.len(), 3);
    for (row, v) in rows.iter().zip([2.0, 4.0, 6.0]) {
        assert_eq!(row.sweep_var, "d_ac");
        assert_eq!(row.sweep_value, v);
        assert_eq!(row.draws, 200);
        assert_eq!(row.seed, 11);
        assert!((0.0..=1.0).contains(&row.infeasible_frac));
        assert!(row.rate_with_outage() <= row.ergodic_rate + 1e-12);
    }
    assert_eq!(run_sweep(&cfg).unwrap(), rows);
}

#[test]
fn csv_output_parses_back() {
    let mut cfg = small(100);
    cfg.oracle_compare = true;
    cfg.solver.oracle_grid = 1001;
    cfg.sweep = Some(Sweep { variable: SweepVariable::PowerDb, values: vec![0.0, 6.0] });
    let rows = run_sweep(&cfg).unwrap();
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf).unwrap();

    let mut reader = csv::Reader::from_reader(buf.as_slice());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        [
            "sweep_var", "sweep_value", "mode", "ergodic_rate", "mean_rho_cs",
            "infeasible_frac", "oracle_gap_median", "draws", "seed"
        ]
    );
    let records: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(records.len(), 2);
    for (rec, row) in records.iter().zip(&rows) {
        assert_eq!(rec[3].parse::<f64>().unwrap(), row.ergodic_rate);
        assert!(!rec[6].is_empty());
    }
}

#[test]
fn robust_mode_with_zero_budget_matches_nominal() {
    let nominal = ExperimentConfig { mode: SolveMode::AnAuto, ..small(300) };
    let robust = ExperimentConfig {
        mode: SolveMode::Robust,
        budget: Some(UncertaintyBudget::channels(0.0, 0.0, 0.0)),
        ..nominal.clone()
    };
    let (a, b) = (&run_sweep(&nominal).unwrap()[0], &run_sweep(&robust).unwrap()[0]);
    assert_eq!(a.ergodic_rate, b.ergodic_rate);
    assert_eq!(a.mean_rho_cs, b.mean_rho_cs);
    assert_eq!(a.infeasible_frac, b.infeasible_frac);
}

#[test]
fn config_survives_a_json_round_trip() {
    let mut cfg = small(42);
    cfg.mode = SolveMode::Sic;
    cfg.sweep = Some(Sweep { variable: SweepVariable::PR1, values: vec![0.2, 0.8] });
    let back = ExperimentConfig::from_json(&cfg.to_json()).unwrap();
    assert_eq!(back, cfg);
}

#[test]
fn unknown_config_fields_are_rejected() {
    let err = ExperimentConfig::from_json(r#"{"draws": 10, "drawz": 3}"#).unwrap_err();
    assert!(err.to_string().contains("drawz"), "{err}");
}
