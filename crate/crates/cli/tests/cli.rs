use std::path::PathBuf;
use std::process::{Command, Output};

fn fermilu(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fermilu")).args(args).output().expect("run fermilu")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fermilu-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn certify_minimal_odd_seven() {
    let o = fermilu(&["certify", "--m", "7", "--preset", "minimal-odd"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pairing"].as_str().unwrap().trim_start_matches('-'), "48");
    assert_eq!(v["verdict"], "Universal");
}

#[test]
fn certify_from_excluded_file() {
    let path = scratch("excluded.txt");
    // all triples containing a standard pair at m = 6, one per line
    let mut text = String::from("# sov exclusions\n");
    for i in 1..=6 {
        for j in i + 1..=6 {
            for k in j + 1..=6 {
                let hits = |a: usize, b: usize| a % 2 == 1 && b == a + 1;
                if hits(i, j) || hits(j, k) || hits(i, k) {
                    text.push_str(&format!("{i} {j} {k}\n"));
                }
            }
        }
    }
    std::fs::write(&path, text).unwrap();
    let o = fermilu(&["certify", "--m", "6", "--excluded-file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dim"], 8);
    assert_eq!(v["verdict"], "Universal");
    assert_ne!(v["pairing"], "0");
}

#[test]
fn dimension_lower_bound() {
    let o = fermilu(&["dims", "--m", "6", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["lower_bound"], "5");
}

#[test]
fn coefficient_table_rows() {
    let o = fermilu(&["atable", "--max-m", "8", "--columns", "7"]);
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows, ["4 1 1 1 0", "5 0 1 1 0", "6 1 2 3 2 1 0", "7 0 2 4 4 2 0", "8 1 3 7 9 7 3 1"]);
}

#[test]
fn generated_states_roundtrip() {
    let path = scratch("random.json");
    let o = fermilu(&["gen", "random", "--m", "7", "--n", "3", "--seed", "5", "-o", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let psi = fermilu_core::FermionState::read(&path).unwrap();
    assert_eq!(psi.to_json() + "\n", std::fs::read_to_string(&path).unwrap());
    let again = fermilu(&["gen", "random", "--m", "7", "--n", "3", "--seed", "5"]);
    assert_eq!(stdout(&again), psi.to_json() + "\n");
}

#[test]
fn reductions_are_deterministic() {
    let input = scratch("reduce-in.json");
    fermilu(&["gen", "random", "--m", "6", "--n", "3", "--seed", "2", "-o", input.to_str().unwrap()]);
    let strip = |o: Output| stdout(&o);
    let a = strip(fermilu(&["reduce-sov", "--input", input.to_str().unwrap(), "--seed", "3"]));
    let b = strip(fermilu(&["--threads", "1", "reduce-sov", "--input", input.to_str().unwrap(), "--seed", "3"]));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["success"], true);
}

#[test]
fn pair_state_check() {
    let o = fermilu(&["bcs-check", "--n", "4", "--m", "8", "--restarts", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["min_value"].as_f64().unwrap() > 0.5);
    assert_eq!(v["contraction_identity"], true);
}

#[test]
fn malformed_input_fails() {
    let path = scratch("bad.json");
    std::fs::write(&path, "{\"m\": 4, \"n\": 2, \"amps\": [{\"indices\": [2, 1], \"re\": 1, \"im\": 0}]}").unwrap();
    let o = fermilu(&["takagi", "--input", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
    let bad = scratch("bad-triples.txt");
    std::fs::write(&bad, "1 2\n").unwrap();
    assert_eq!(fermilu(&["certify", "--m", "6", "--excluded-file", bad.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn unknown_verdict_exits_two() {
    // this multiplier pairs to zero against the m = 6 single-occupancy polynomial
    let o = fermilu(&["certify", "--m", "6", "--preset", "sov", "--multiplier", "x1^2*x2"]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "Unknown");
    assert_eq!(v["pairing"], "0");
}
