use cluster_reduce::fixtures::*;
use cluster_reduce::lattice::IntMatrix;
use cluster_reduce::pipeline::{run_pipeline, WorkflowConfig};

#[test]
fn somos5_report() {
    let config = WorkflowConfig {
        align: Some(somos5_y()),
        ..WorkflowConfig::default()
    };
    let report = run_pipeline(&somos5(), &config).unwrap();
    print!("{}", report.render_text());
    assert!(report.all_verified(), "{:?}", report.errors);
    assert_eq!(report.period.as_ref().unwrap().period, 1);
    let p = report.poisson.as_ref().unwrap();
    assert_eq!(p.basis.len(), 1);
    let c = somos5_poisson();
    assert!(p.basis[0] == c || p.basis[0] == c.scale(&(-1).into()));
    assert_eq!(report.flag.as_ref().unwrap().levels, vec!["null", "casimir-1"]);
    assert_eq!(report.reduced_map("null").unwrap().system.psi, vec!["y2", "(y2 + 1)/(y1*y2)"]);
    let fixed = report.dynamics[0].fixed_points.as_ref().unwrap();
    assert_eq!(fixed.len(), 1);
    assert!((fixed[0].point[0].to_f64() - 1.324_717_957_244_746).abs() < 1e-12);
}

#[test]
fn seven_node_report() {
    let config = WorkflowConfig {
        poisson: vec![seven_node_c1(), seven_node_c2()],
        align: Some(seven_node_y()),
        ..WorkflowConfig::default()
    };
    let report = run_pipeline(&seven_node(), &config).unwrap();
    print!("{}", report.render_text());
    assert!(report.all_verified(), "{:?}", report.errors);
    assert_eq!(report.flag.as_ref().unwrap().levels, vec!["null", "casimir-1", "casimir-2"]);
    assert_eq!(report.chains.len(), 2);
    let periods: Vec<Option<usize>> = report.dynamics.iter().map(|d| d.periodicity.global_period()).collect();
    assert_eq!(periods, vec![Some(5), Some(10), None]);
    let scan = report.dynamics[2].scan.as_ref().unwrap();
    assert!(!scan.periodic_point_found() && scan.monotone_growth);
    let again = run_pipeline(&seven_node(), &config).unwrap();
    assert_eq!(
        serde_json::to_string(&report).unwrap(),
        serde_json::to_string(&again).unwrap()
    );
}

#[test]
fn zero_quiver_is_flagged() {
    let report = run_pipeline(&IntMatrix::zeros(2, 2), &WorkflowConfig::default()).unwrap();
    print!("{}", report.render_text());
    assert!(report.notes.iter().any(|n| n.contains("trivial quiver")));
    assert_eq!(report.map.as_ref().unwrap().to_strings(), vec!["x2", "2/x1"]);
}
