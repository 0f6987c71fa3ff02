use std::path::PathBuf;

use fgm_linexp_cli::run;

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(
        std::iter::once("fgm-linexp").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fgm-linexp-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(cli(&["--help"]).0, 0);
    assert_eq!(cli(&["--version"]).0, 0);
    assert_eq!(cli(&["eval", "--help"]).0, 0);
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["bogus"][..],
        &["eval"],
        &["eval", "density"],
        &["eval", "cdf", "--lambda", "1.5"],
        &["eval", "cdf", "--lambda-list", "0,2"],
        &["eval", "cdf", "--grid-x", "1:0:5"],
        &["eval", "cdf", "--grid-x", "0:1:1"],
        &["eval", "cdf", "--grid-x", "0:1"],
        &["mttf", "--alpha1", "0", "--beta1", "0"],
        &["mttf", "--alpha1", "-1"],
        &["simulate", "replacement", "--window", "0:1"],
        &["eval", "cdf", "--config", "/nonexistent/config.json"],
    ] {
        let (code, out, err) = cli(args);
        assert_eq!(code, 1, "{args:?}: {out} {err}");
        assert!(!err.is_empty(), "{args:?} printed no diagnostic");
    }
}

#[test]
fn numerical_failures_exit_two() {
    let (code, _, err) = cli(&["eval", "hazard", "--grid-x", "0:100:2", "--grid-y", "0:1:2"]);
    assert_eq!(code, 2, "{err}");
    let (code, _, err) = cli(&[
        "simulate",
        "minimal-repair",
        "--window",
        "50:50",
        "--replications",
        "1",
    ]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn eval_layout() {
    let (code, out, _) = cli(&[
        "eval", "pdf", "--grid-x", "0:1:2", "--grid-y", "0:2:3", "--lambda", "0",
    ]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "x,y,lambda,value");
    assert_eq!(lines.len(), 1 + 2 * 3);
    assert!(out.ends_with('\n'));
    // (0, 0): product of the marginal densities at the origin.
    assert_eq!(lines[1], format!("0,0,0,{}", 0.5 * 0.7));
}

#[test]
fn lambda_list_yields_one_block_each() {
    let (code, out, _) = cli(&[
        "eval",
        "cdf",
        "--grid-x",
        "0:1:2",
        "--grid-y",
        "0:1:2",
        "--lambda-list",
        "-1,0,1",
    ]);
    assert_eq!(code, 0);
    let lambdas: Vec<&str> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap())
        .collect();
    assert_eq!(
        lambdas,
        ["-1", "-1", "-1", "-1", "0", "0", "0", "0", "1", "1", "1", "1"]
    );
}

#[test]
fn json_format_parses() {
    let (code, out, _) = cli(&[
        "eval", "survival", "--format", "json", "--grid-x", "0:1:2", "--grid-y", "0:1:2",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["quantity"], "survival");
    assert_eq!(v["rows"].as_array().unwrap().len(), 5 * 4);
}

#[test]
fn flags_override_config_which_overrides_defaults() {
    let dir = scratch("precedence");
    let cfg = dir.join("config.json");
    std::fs::write(
        &cfg,
        r#"{"alpha1": 1.0, "beta1": 0.0, "alpha2": 1.0, "beta2": 0.0, "lambda": 0.0,
        "grid_x": "0:1:2", "grid_y": {"min": 0, "max": 1, "count": 2}}"#,
    )
    .unwrap();
    let path = cfg.to_str().unwrap();
    let (code, out, _) = cli(&["eval", "cdf", "--config", path]);
    assert_eq!(code, 0);
    let e1 = 1.0 - (-1f64).exp();
    assert_eq!(out.lines().last().unwrap(), format!("1,1,0,{}", e1 * e1));
    let (_, out, _) = cli(&[
        "eval", "cdf", "--config", path, "--lambda", "1", "--grid-x", "0:2:2",
    ]);
    let direct = (e1 * (1.0 - (-2f64).exp())) * (1.0 + (-1f64).exp() * (-2f64).exp());
    let last: f64 = out
        .lines()
        .last()
        .unwrap()
        .rsplit(',')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!((last - direct).abs() < 1e-15, "{last} vs {direct}");

    std::fs::write(&cfg, r#"{"alpha": 1.0}"#).unwrap();
    assert_eq!(cli(&["eval", "cdf", "--config", path]).0, 1);
    std::fs::write(&cfg, "not json").unwrap();
    assert_eq!(cli(&["eval", "cdf", "--config", path]).0, 1);
}

#[test]
fn out_flag_writes_file() {
    let dir = scratch("out");
    let target = dir.join("grid.csv");
    let t = target.to_str().unwrap();
    let (code, out, _) = cli(&["extremes", "--grid-x", "0:1:3", "--out", t]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let text = std::fs::read_to_string(&target).unwrap();
    assert!(text.starts_with("t,lambda,cdf_max,rev_hazard_max,survival_min,hazard_min\n"));
    assert!(text.lines().nth(1).unwrap().contains(",inf,"));
}

#[test]
fn simulate_writes_events_and_summary() {
    let dir = scratch("sim");
    let target = dir.join("events.csv");
    let t = target.to_str().unwrap();
    let args = [
        "simulate",
        "replacement",
        "--replications",
        "300",
        "--window",
        "1.5:1.5",
        "--seed",
        "3",
        "--out",
        t,
    ];
    let (code, out, _) = cli(&args);
    assert_eq!(code, 0);
    let events = std::fs::read_to_string(&target).unwrap();
    assert!(events.starts_with("replicate,event_index,x,y\n"));
    let file: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.join("events.csv.summary.json")).unwrap(),
    )
    .unwrap();
    let shown: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(file, shown);
    assert_eq!(shown["policy"], "replacement");
    assert_eq!(shown["replications"], 300);
    // Every row lies in the window and replacement coordinates increase.
    let mut last: Option<(u64, f64, f64)> = None;
    let mut rows = 0;
    for line in events.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let (r, x, y): (u64, f64, f64) = (
            f[0].parse().unwrap(),
            f[2].parse().unwrap(),
            f[3].parse().unwrap(),
        );
        assert!(x <= 1.5 && y <= 1.5);
        if let Some((lr, lx, ly)) = last {
            assert!(r > lr || (x > lx && y > ly));
        }
        last = Some((r, x, y));
        rows += 1;
    }
    let mean = shown["mean_count"].as_f64().unwrap();
    assert!((mean * 300.0 - rows as f64).abs() < 1e-9);
}

#[test]
fn validate_passes_and_reports_every_check() {
    let (code, out, table) = cli(&["validate"]);
    assert_eq!(code, 0, "{table}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.len() >= 15);
    for c in checks {
        assert_ne!(c["status"], "fail", "{c}");
        assert!(c["paper_eq"].as_str().is_some_and(|s| !s.is_empty()));
    }
    let discrepancies = checks
        .iter()
        .filter(|c| c["status"] == "documented_discrepancy")
        .count();
    assert!(discrepancies >= 2);
    assert!(table.contains("mttf_exact_vs_quadrature"));
}

#[test]
fn validate_at_figure_two_and_negative_lambda() {
    for args in [
        &["validate", "--lambda", "-1"][..],
        &[
            "validate", "--alpha1", "0.05", "--beta1", "0.15", "--alpha2", "0.07", "--beta2",
            "0.2", "--lambda", "1",
        ],
        &["validate", "--beta1", "0", "--beta2", "0", "--lambda", "0"],
    ] {
        let (code, _, table) = cli(args);
        assert_eq!(code, 0, "{args:?}\n{table}");
    }
}

#[test]
fn mttf_report_fields() {
    let (code, out, _) = cli(&[
        "mttf", "--alpha1", "1", "--beta1", "0", "--alpha2", "1", "--beta2", "0", "--lambda", "1",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["exact"], 1.25);
    assert_eq!(v["series_printed"]["value"], 1.0);
    assert!(
        (v["quadrature"].as_f64().unwrap() - 1.25).abs() <= v["quadrature_error"].as_f64().unwrap()
    );
}

#[test]
fn figures_writes_three_grids() {
    let dir = scratch("figs");
    let (code, out, _) = cli(&["figures", "--out", dir.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 3);
    for (name, rows) in [
        ("fig1_cdf.csv", 5 * 41 * 41),
        ("fig2_survival.csv", 5 * 41 * 41),
        ("fig3_extremes.csv", 5 * 41),
    ] {
        let text = std::fs::read_to_string(dir.join(name)).unwrap();
        assert_eq!(text.lines().count(), rows + 1, "{name}");
    }
}
