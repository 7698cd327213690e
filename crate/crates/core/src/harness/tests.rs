use crate::geom::Window;
use crate::greedy::WeightFn;
use crate::harness::{
    raw_csv, run_experiment, summary_csv, write_outputs, ExperimentConfig, ExperimentName, Method,
};
use crate::Error;

fn base(e: ExperimentName, replicas: usize) -> ExperimentConfig {
    ExperimentConfig::new(e, Window::centered(8.0, 0.0).unwrap(), replicas, 42)
}

#[test]
fn single_replica_is_reproducible() {
    let c = base(ExperimentName::Kappa, 1);
    let a = raw_csv(&run_experiment(&c).unwrap());
    let b = raw_csv(&run_experiment(&c).unwrap());
    assert_eq!(a, b);
    assert!(a.starts_with("replica,seed,metric,key,method,value\n0,"));
}

#[test]
fn width_does_not_change_summary() {
    let mut c = base(ExperimentName::SegmentWalk, 6);
    c.window = Window::new(-8.0, 24.0, -8.0, 8.0, 0.0).unwrap();
    c.params.n_list = Some(vec![4, 12]);
    let a = run_experiment(&c).unwrap();
    c.width = 5;
    let b = run_experiment(&c).unwrap();
    assert_eq!(a.summary, b.summary);
    assert_eq!(summary_csv(&a), summary_csv(&b));
}

#[test]
fn constant_weight_passes_through() {
    let mut c = base(ExperimentName::FnScaling, 4);
    c.params.weight = Some(WeightFn::Constant { c: 1.0 });
    c.params.n_list = Some(vec![1, 3, 5, 12]);
    c.params.exact_max_n = Some(5);
    let out = run_experiment(&c).unwrap();
    let rows = out.rows("F_n/n");
    assert_eq!(rows.len(), 4);
    for r in &rows {
        assert_eq!(r.mean, 1.0);
        assert_eq!(r.se, 0.0);
    }
    assert_eq!(rows[3].method, Method::Beam);
    assert_eq!(rows[0].method, Method::Exact);
}

#[test]
fn budget_errors_name_the_replica() {
    let mut c = base(ExperimentName::Kappa, 1);
    c.params.budget = Some(5);
    match run_experiment(&c) {
        Err(Error::BudgetExceeded { hint, .. }) => assert!(hint.starts_with("replica 0"), "{hint}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn invalid_config_names_the_field() {
    let mut c = base(ExperimentName::Kappa, 1);
    c.params.r_list = Some(vec![]);
    assert!(
        matches!(run_experiment(&c), Err(Error::Config { field, .. }) if field == "params.r_list")
    );
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.toml");
    std::fs::write(&path, "experiment = \"kappa\"\nseed = 1\nreplicas = 2\nwindow = { x0 = 0.0, x1 = 1.0, y0 = 0.0 }\n").unwrap();
    match ExperimentConfig::load(&path) {
        Err(Error::Config { field, .. }) => assert_eq!(field, "y1"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn toml_and_json_files_agree() {
    let mut c = base(ExperimentName::Stabbing, 2);
    c.params.n_list = Some(vec![3]);
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("c.toml");
    let j = dir.path().join("c.json");
    std::fs::write(&t, c.to_toml().unwrap()).unwrap();
    std::fs::write(&j, c.to_json().unwrap()).unwrap();
    assert_eq!(ExperimentConfig::load(&t).unwrap(), c);
    assert_eq!(ExperimentConfig::load(&j).unwrap(), c);
}

#[test]
fn outputs_are_written() {
    let c = base(ExperimentName::CoverAnimal, 3);
    let out = run_experiment(&c).unwrap();
    let dir = tempfile::tempdir().unwrap();
    write_outputs(&out, dir.path()).unwrap();
    let raw = std::fs::read_to_string(dir.path().join("raw.csv")).unwrap();
    assert_eq!(raw, raw_csv(&out));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap())
            .unwrap();
    assert_eq!(json["experiment"], "cover-animal");
    assert!(json["config"].get("width").is_none());
    assert_eq!(json["summary"].as_array().unwrap().len(), out.summary.len());
    let summary = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert!(summary.starts_with("metric,key,method,mean,se,count\n"));
}

#[test]
fn sample_configs_parse() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs");
    let mut seen = Vec::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let c = ExperimentConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(
            path.file_stem().unwrap().to_str().unwrap(),
            c.experiment.as_str()
        );
        seen.push(c.experiment);
    }
    seen.sort();
    assert_eq!(seen, ExperimentName::ALL.to_vec());
}
