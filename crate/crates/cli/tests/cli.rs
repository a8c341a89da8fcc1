use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stretchlab"))
        .current_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/../.."))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn penner_example_word() {
    let o = run(&["penner", "--system", "data/chain2.json", "--word", "data/example.json"]);
    assert!(o.status.success());
    let line = stdout(&o).lines().find(|l| l.starts_with("lambda = ")).unwrap().to_string();
    let lambda: f64 = line["lambda = ".len()..].parse().unwrap();
    assert!((lambda - (9.0 + 77f64.sqrt()) / 2.0).abs() < 1e-9);

    let o = run(&["penner", "--system", "data/chain2.json", "--word", "data/example.json", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["certifying_iterate"], 1);
    assert_eq!(v["matrix"][0][1], "5");
}

#[test]
fn gamma_summary() {
    let o = run(&["gamma", "--n", "3", "--k", "4", "--emit", "summary"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("c = 7"));
    assert!(s.contains("girth = 3, threshold 12/7, holds = true"));

    let o = run(&["gamma", "--n", "5", "--k", "7", "--D", "3", "--emit", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["girth"], 14);
    assert_eq!(v["weighted_max"], "21");

    let dot = stdout(&run(&["gamma", "--n", "3", "--k", "4", "--emit", "dot"]));
    assert!(dot.starts_with("digraph gamma_3_4 {"));
    assert_eq!(dot.matches("->").count(), 16);
}

#[test]
fn bounds_csv() {
    let o = run(&["bounds", "--n", "0", "--g-min", "2", "--g-max", "10", "--format", "csv"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.starts_with("# stretchlab bounds D=2 E=10432 K=4.25 C=25.5"));
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(s.as_bytes());
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 9);
    assert_eq!(&rows[0][1], "2");
    assert_eq!(rows[0][2].parse::<f64>().unwrap(), std::f64::consts::LN_2 / 12.0);
    assert_eq!(rows[0][9].parse::<f64>().unwrap(), 11f64.ln() / 2.0);

    let json = run(&["bounds", "--n-min", "1", "--n-max", "3", "--g-max", "100", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3 * 99);
}

#[test]
fn pf_and_jacobsthal() {
    let o = run(&["pf", "--matrix", "data/fibonacci.txt", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["estimate"].as_f64().unwrap() - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);

    let s = stdout(&run(&["jacobsthal", "--max-n", "30"]));
    assert!(s.lines().any(|l| l == "30,6"));
    let s = stdout(&run(&["jacobsthal", "--max-n", "10", "--fit"]));
    assert!(s.contains("n,j,ln_n_sq,ratio"));
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(run(&["gamma", "--n", "4", "--k", "6"]).status.code(), Some(2));
    assert_eq!(run(&["pf", "--matrix", "no/such/file"]).status.code(), Some(2));
    assert_eq!(run(&["pf", "--matrix", "data/example.json"]).status.code(), Some(2));
    assert_eq!(run(&["bounds", "--g-max", "10", "--K", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
}

#[test]
fn output_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("stretchlab-cli-{}.csv", std::process::id()));
    let o = run(&["jacobsthal", "--max-n", "6", "--output", path.to_str().unwrap()]);
    assert!(o.status.success() && o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(text.ends_with("6,4\n"));
}
