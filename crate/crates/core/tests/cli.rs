use std::process::{Command, Output};

use qvanish::verify::{from_records, Status};

fn qvanish(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qvanish"))
        .args(args)
        .env_remove("QVANISH_ORDER")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn coefficient_column(o: &Output) -> Vec<i64> {
    stdout(o)
        .lines()
        .map(|l| l.split('\t').nth(1).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn expand_family_product() {
    let o = qvanish(&["expand", "(q,q^4;q^5)^2*(q^2,q^13;q^15)", "--order", "3"]);
    assert!(o.status.success());
    assert_eq!(coefficient_column(&o), vec![1, -2, 0, 2]);
}

#[test]
fn expand_phi() {
    let o = qvanish(&["expand", "phi(q)", "--order", "4"]);
    assert_eq!(coefficient_column(&o), vec![1, 2, 0, 0, 2]);
}

#[test]
fn order_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_qvanish"))
        .args(["expand", "psi(q)"])
        .env("QVANISH_ORDER", "6")
        .output()
        .unwrap();
    assert_eq!(coefficient_column(&o), vec![1, 1, 0, 1, 0, 0, 1]);
}

#[test]
fn malformed_expression_exits_with_parse_code() {
    let o = qvanish(&["expand", "(q,q^4;q^5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("position 10"));
}

#[test]
fn extract_and_compress() {
    let o = qvanish(&[
        "extract",
        "X(1,2,5,15,1,2,1)",
        "--modulus",
        "5",
        "--residue",
        "2",
        "--order",
        "60",
    ]);
    assert!(o.status.success());
    assert!(coefficient_column(&o).iter().all(|&c| c == 0));
    let o = qvanish(&[
        "extract",
        "phi(q)",
        "--modulus",
        "4",
        "--residue",
        "0",
        "--compress",
        "--order",
        "16",
    ]);
    // phi(q) at q^{4n}: n = 0, 1, 4 are squares times 4
    assert_eq!(coefficient_column(&o), vec![1, 2, 0, 0, 2]);
}

#[test]
fn verify_single_instance() {
    let o = qvanish(&[
        "verify",
        "--entry",
        "vcres1.19",
        "--ell",
        "1",
        "--t",
        "1",
        "--order",
        "800",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("2 pass, 0 fail"));
}

#[test]
fn verify_unknown_entry() {
    let o = qvanish(&["verify", "--entry", "nosuch"]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn verify_rejects_side_condition() {
    let o = qvanish(&["verify", "--entry", "vcres2.0", "--t", "5", "--order", "50"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn records_round_trip() {
    let o = qvanish(&["verify", "--entry", "vcres2.2", "--order", "200", "--format", "records"]);
    assert!(o.status.success());
    let (reports, summary) = from_records(&stdout(&o)).unwrap();
    assert_eq!(reports.len(), summary.reports);
    assert!(reports.iter().all(|r| r.status == Status::Pass));
}

#[test]
fn failing_entry_exit_code() {
    let o = qvanish(&["verify", "--entry", "vcres1.9", "--order", "100"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn degenerate_only_exit_code() {
    // every requested t is degenerate, so nothing is checked
    let o = qvanish(&[
        "verify",
        "--entry",
        "vcres1.19",
        "--ell",
        "1",
        "--t",
        "9",
        "--order",
        "50",
    ]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn identities_from_cli() {
    for args in [
        vec!["identity", "jtpi", "-q^2", "q^3"],
        vec!["identity", "cube", "2", "7", "--minus"],
        vec!["identity", "entry30", "r1", "q", "q^3", "q^2", "q^2"],
        vec!["identity", "dissection", "3", "q", "q^2"],
    ] {
        // options go before the arguments, which may start with `-`
        let mut a = vec!["--order", "80"];
        a.extend(&args);
        let o = qvanish(&a);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert!(stdout(&o).contains("holds"));
    }
}

#[test]
fn out_file_and_catalog_export() {
    let dir = std::env::temp_dir().join(format!("qvanish-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("catalog.jsonl");
    let o = qvanish(&["catalog", "--format", "records", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let loaded = qvanish::load_catalog(&text).unwrap();
    assert_eq!(loaded, qvanish::default_catalog());

    let o = qvanish(&[
        "suite",
        "--catalog",
        path.to_str().unwrap(),
        "--entry",
        "tang-b2",
        "--order",
        "100",
    ]);
    assert!(o.status.success());
    std::fs::remove_dir_all(&dir).ok();
}
