use std::fs;

use rgg_faultnet::analytics::{
    approx_breakdown_rayleigh_delta, approx_breakdown_rayleigh_eta2, rayleigh_eta2_beta,
};
use rgg_faultnet::cli::csvio::{parse_rows, read_rows, write_rows};
use rgg_faultnet::cli::plan::{preset_plans, run_plan, ExperimentPlan, ModelKind, Preset};
use rgg_faultnet::cli::predict::predict_plan;
use rgg_faultnet::cli::run;
use rgg_faultnet::{Error, Execution};

fn small_eta2_sweep() -> ExperimentPlan {
    ExperimentPlan {
        trials: 200,
        epsilon_list: vec![0.0, 0.25, 0.5],
        ..preset_plans(Preset::Fig2)[0].clone()
    }
}

#[test]
fn csv_round_trip_preserves_rows_to_ten_digits() {
    let rows = run_plan(&small_eta2_sweep()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rows.csv");
    write_rows(fs::File::create(&path).unwrap(), 7, &rows).unwrap();
    let file = read_rows(&path).unwrap();
    assert!(file.complete);
    assert_eq!(file.seed, 7);
    assert_eq!(file.version, rgg_faultnet::VERSION);
    let quantized: Vec<_> = rows.iter().map(|r| r.quantized()).collect();
    assert_eq!(file.rows, quantized);
}

#[test]
fn approximation_column_matches_analytics() {
    for row in run_plan(&ExperimentPlan {
        simulate: false,
        ..preset_plans(Preset::Fig2)[1].clone()
    })
    .unwrap()
    {
        let expected = approx_breakdown_rayleigh_eta2(row.n as f64, row.epsilon.unwrap());
        assert!((row.p_approx.unwrap() - expected).abs() < 1e-12);
        assert!((row.beta.unwrap() - rayleigh_eta2_beta(1024.0)).abs() < 1e-9);
    }
    for plan in preset_plans(Preset::Fig3) {
        for row in run_plan(&ExperimentPlan {
            simulate: false,
            ..plan
        })
        .unwrap()
        {
            let expected =
                approx_breakdown_rayleigh_delta(4096.0, row.epsilon.unwrap(), row.delta.unwrap())
                    .unwrap();
            assert!((row.p_approx.unwrap() - expected).abs() < 1e-12);
        }
    }
}

#[test]
fn reruns_are_byte_identical_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for (k, workers) in ["1", "4"].iter().enumerate() {
        let out = dir.path().join(format!("run{k}.csv"));
        let code = run([
            "rgg-faultnet",
            "simulate",
            "--n",
            "200",
            "--eta",
            "2",
            "--beta",
            "60",
            "--epsilon",
            "0:0.4:0.2",
            "--trials",
            "300",
            "--seed",
            "5",
            "--workers",
            workers,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        outputs.push(fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let file = parse_rows(&outputs[0][..]).unwrap();
    assert!(file.complete);
    assert_eq!(file.rows.len(), 3);
    assert_eq!(file.seed, 5);
}

#[test]
fn missing_trailer_is_reported_incomplete() {
    let rows = run_plan(&ExperimentPlan {
        simulate: false,
        ..small_eta2_sweep()
    })
    .unwrap();
    let bytes = write_rows(Vec::new(), 1, &rows).unwrap();
    let text = String::from_utf8(bytes).unwrap();
    let cut: String = text.lines().take(3).map(|l| format!("{l}\n")).collect();
    let file = parse_rows(cut.as_bytes()).unwrap();
    assert!(!file.complete);
    assert_eq!(file.rows.len(), 1);
}

#[test]
fn config_file_drives_a_run_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let out = dir.path().join("out.csv");
    fs::write(
        &cfg,
        format!(
            "# sweep\nmodel = hard-disk\nrange = 0.12\nn = 150\nepsilon = 0.1,0.2\ntrials = 50\nseed = 4\nmetric = square\nout = {}\n",
            out.display()
        ),
    )
    .unwrap();
    assert_eq!(
        run([
            "rgg-faultnet",
            "simulate",
            "--config",
            cfg.to_str().unwrap(),
            "--trials",
            "80"
        ]),
        0
    );
    let file = read_rows(&out).unwrap();
    assert!(file.complete);
    assert_eq!(file.rows.len(), 2);
    assert!(file
        .rows
        .iter()
        .all(|r| r.trials == Some(80) && r.eta.is_none()));
    assert_eq!(file.rows[0].metric.unwrap().as_str(), "square");

    fs::write(&cfg, "model = hard-disk\nrange = 0.1\nsweep = 3\n").unwrap();
    assert_eq!(
        run([
            "rgg-faultnet",
            "simulate",
            "--config",
            cfg.to_str().unwrap()
        ]),
        2
    );
}

#[test]
fn predictions_reproduce_reference_thresholds() {
    let fig2 = ExperimentPlan {
        beta: Some(rayleigh_eta2_beta(1024.0)),
        ..Default::default()
    };
    let p = &predict_plan(&fig2, Some(2.0)).unwrap()[0];
    assert!((p.epsilon_star - 0.5).abs() < 1e-12);
    assert_eq!(p.epsilon_star_d, Some(0.5));

    let fig3 = ExperimentPlan {
        n_list: vec![4096],
        eta_list: vec![4.0],
        delta_list: vec![1.0],
        coupling: rgg_faultnet::cli::plan::Coupling::Delta,
        ..Default::default()
    };
    let p = &predict_plan(&fig3, None).unwrap()[0];
    let beta_c = p.beta_c_star.unwrap();
    assert!(
        (beta_c / 1.879_732_751_895_497e6 - 1.0).abs() < 1e-12,
        "{beta_c}"
    );
    assert!((p.row.beta.unwrap() - beta_c).abs() < 1e-6 * beta_c);
    assert!(p.epsilon_star.abs() < 1e-12, "{}", p.epsilon_star);
}

#[test]
fn invalid_plans_name_the_offending_key() {
    let plan = ExperimentPlan {
        epsilon_list: vec![0.1, 0.2],
        eta_list: vec![2.0, 3.0],
        beta: Some(10.0),
        ..Default::default()
    };
    assert!(
        matches!(plan.validate(), Err(Error::Plan { ref key, .. }) if key == "delta" || key == "eta")
    );
    let plan = ExperimentPlan {
        model: ModelKind::HardDisk,
        ..Default::default()
    };
    assert!(matches!(plan.validate(), Err(Error::Plan { ref key, .. }) if key == "range"));
    let plan = ExperimentPlan {
        epsilon_list: vec![1.0],
        beta: Some(1.0),
        ..Default::default()
    };
    assert!(matches!(plan.validate(), Err(Error::Plan { ref key, .. }) if key == "epsilon"));
    let plan = ExperimentPlan {
        beta: Some(1.0),
        execution: Execution::Sequential,
        ..Default::default()
    };
    assert!(plan.validate().is_ok());
}

#[test]
fn validate_model_flags_a_non_monotone_table() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("g.txt");
    fs::write(&table, "# r g\n0 1\n0.1 0.2\n0.2 0.5\n0.3 0\n").unwrap();
    assert_eq!(
        run([
            "rgg-faultnet",
            "validate-model",
            "--model",
            "table",
            "--table",
            table.to_str().unwrap()
        ]),
        1
    );
    assert_eq!(
        run([
            "rgg-faultnet",
            "validate-model",
            "--model",
            "rayleigh",
            "--beta",
            "3",
            "--eta",
            "4"
        ]),
        0
    );
}
