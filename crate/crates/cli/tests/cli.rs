//! End-to-end behaviour of the `hjwell` binary.

use std::process::{Command, Output};

use hjwell_cli::table::{parse_rendered, Format};

fn hjwell(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hjwell")).args(args).env_remove("HJWELL_PRECISION").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn column(text: &str, name: &str) -> Vec<String> {
    parse_rendered(text, Format::Csv)
        .unwrap()
        .into_iter()
        .map(|r| r.into_iter().find(|(k, _)| k == name).map(|(_, v)| v).unwrap_or_default())
        .collect()
}

fn temp_file(name: &str, body: &str) -> std::path::PathBuf {
    let p = std::env::temp_dir().join(format!("hjwell-{}-{name}", std::process::id()));
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["expand", "--order", "-1"][..],
        &["expand", "--bogus"],
        &["oracle", "--potential", "triple-delta", "--g", "3"],
        &["phi", "--g", "-1"],
        &["frobnicate"],
    ] {
        let o = hjwell(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(o.stdout.is_empty());
    }
    assert_eq!(hjwell(&["--help"]).status.code(), Some(0));
}

#[test]
fn quartic_oracle_orders_the_doublet() {
    let o = hjwell(&["oracle", "--potential", "quartic", "--g", "6"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let even: f64 = column(&text, "e_even")[0].parse().unwrap();
    let odd: f64 = column(&text, "e_odd")[0].parse().unwrap();
    assert!(even < odd && odd - even < 0.05, "{even} {odd}");
}

#[test]
fn explicit_flags_override_the_config_file() {
    let cfg = temp_file("cfg.txt", "# harmonic probe\npotential = harmonic\ng = 3\nmethod = fd\nn = 2001\n");
    let cfg = cfg.to_str().unwrap();
    let from_file = stdout(&hjwell(&["oracle", "--config", cfg]));
    let overridden = stdout(&hjwell(&["oracle", "--config", cfg, "--g", "4"]));
    let e = |t: &str| column(t, "e_even")[0].parse::<f64>().unwrap();
    assert!((e(&from_file) - 1.5).abs() < 1e-5);
    assert!((e(&overridden) - 2.0).abs() < 1e-5);
}

#[test]
fn precision_follows_the_environment() {
    let run = |p: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_hjwell"));
        c.args(["oracle", "--potential", "harmonic", "--method", "fd", "--n", "2001"]);
        match p {
            Some(p) => c.env("HJWELL_PRECISION", p),
            None => c.env_remove("HJWELL_PRECISION"),
        };
        c.output().unwrap()
    };
    let default = column(&stdout(&run(None)), "e_even")[0].clone();
    let short = column(&stdout(&run(Some("4"))), "e_even")[0].clone();
    assert_eq!(default.split('e').next().unwrap().len(), 18, "{default}");
    assert_eq!(short.split('e').next().unwrap().len(), 6, "{short}");
    assert_eq!(run(Some("0")).status.code(), Some(2));
}

#[test]
fn sweep_isolates_failing_points() {
    let o = hjwell(&["sweep", "--param", "g", "--values", "0.5,6", "--", "split", "--route", "wronskian-leading"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    let errors = column(&text, "error");
    assert_eq!(errors.len(), 2);
    assert!(!errors[0].is_empty() && errors[1].is_empty(), "{text}");
    assert_eq!(column(&text, "sweep_value")[1], "6.0000000000000000e0");
    let unknown = hjwell(&["sweep", "--param", "nonsense", "--values", "1", "--", "split"]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn output_file_and_json_match_stdout_csv() {
    let path = std::env::temp_dir().join(format!("hjwell-{}-out.json", std::process::id()));
    let args = ["delta-models", "--model", "triple-delta", "--n", "2001"];
    let mut with_file = args.to_vec();
    with_file.extend(["--format", "json", "--output", path.to_str().unwrap()]);
    let o = hjwell(&with_file);
    assert!(o.status.success() && o.stdout.is_empty());
    let json = parse_rendered(&std::fs::read_to_string(&path).unwrap(), Format::Json).unwrap();
    let csv = parse_rendered(&stdout(&hjwell(&args)), Format::Csv).unwrap();
    assert_eq!(json, csv);
}

#[test]
fn expansion_matches_the_reference_table() {
    let text = stdout(&hjwell(&["expand", "--order", "4"]));
    let rows = parse_rendered(&text, Format::Csv).unwrap();
    let golden = include_str!("golden/quartic_order4.txt");
    assert_eq!(hjwell_cli::commands::compare_expansion(&rows, golden), Ok(27));
}
