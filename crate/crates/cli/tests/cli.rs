use std::path::Path;
use std::process::{Command, Output};

fn irs_ee(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_irs-ee"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field<'a>(report: &'a str, key: &str) -> &'a str {
    report
        .lines()
        .find_map(|l| l.strip_prefix(key).filter(|rest| rest.starts_with(' ')))
        .map(str::trim)
        .unwrap_or_else(|| panic!("no {key} in report"))
}

const HEADER: &str =
    "axis,axis_value,algorithm,mode,tau,nu,bits,trials,mean_ee,std_ee,mean_time_s,feasible_rate,mean_gap_bound";

#[test]
fn solve_report_matches_golden() {
    let o = irs_ee(&["solve", "--seed", "7", "-L", "4", "--algos", "dp"]);
    assert_eq!(o.status.code(), Some(0));
    let golden = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/solve_seed7_l4_dp.txt")).unwrap();
    assert_eq!(stdout(&o), golden);
}

#[test]
fn solve_dp_agrees_with_exhaustive() {
    let dp = stdout(&irs_ee(&["solve", "--seed", "7", "-L", "4", "--algos", "dp"]));
    let ex = stdout(&irs_ee(&["solve", "--seed", "7", "-L", "4", "--algos", "exhaustive"]));
    for key in ["x", "ee", "worst_snr", "total_power_w"] {
        assert_eq!(field(&dp, key), field(&ex, key), "{key}");
    }
}

#[test]
fn all_on_activates_everything() {
    let o = irs_ee(&["solve", "--seed", "3", "-L", "6", "--algos", "all_on"]);
    assert_eq!(field(&stdout(&o), "x"), "111111");
}

#[test]
fn sweep_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let o = irs_ee(&[
        "sweep", "--axis", "L", "--values", "4,6", "--trials", "3", "--algos", "dp,exhaustive", "--seed", "11", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(!text.contains('\r'));
    let rows: Vec<Vec<&str>> = text.lines().map(|l| l.split(',').collect()).collect();
    assert_eq!(text.lines().next().unwrap(), HEADER);
    assert_eq!(rows.len(), 5);
    // dp and exhaustive rows at the same L carry the same mean EE
    assert_eq!(rows[1][8], rows[2][8]);
    assert_eq!(rows[3][8], rows[4][8]);
    assert_eq!(rows[1][2], "dp");
    assert_eq!(rows[2][2], "exhaustive");
}

fn without_time_column(csv: &str) -> Vec<String> {
    csv.lines()
        .map(|l| {
            let mut cells: Vec<&str> = l.split(',').collect();
            cells.remove(10);
            cells.join(",")
        })
        .collect()
}

#[test]
fn sweep_is_reproducible_across_thread_counts() {
    let run = |threads: &str| {
        let o = irs_ee(&[
            "sweep", "--axis", "nu", "--values", "0,0.5", "--trials", "4", "--mode", "d", "--bits", "3", "--algos",
            "crbm,all_on", "-L", "8", "--threads", threads,
        ]);
        assert_eq!(o.status.code(), Some(0));
        stdout(&o)
    };
    assert_eq!(without_time_column(&run("1")), without_time_column(&run("2")));
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.toml");
    std::fs::write(&cfg, "axis = \"tau\"\nvalues = [0.0, 0.5]\ntrials = 2\nelements = 5\nalgorithms = [\"dp\"]\n").unwrap();
    let o = irs_ee(&["sweep", "--config", cfg.to_str().unwrap(), "--trials", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let row: Vec<&str> = text.lines().nth(2).unwrap().split(',').collect();
    assert_eq!(&row[..8], ["tau", "0.5", "dp", "c", "0.5", "0.7", "", "3"]);
}

#[test]
fn config_errors_exit_with_one() {
    for args in [
        &["sweep", "--mode", "d", "--algos", "dp"][..],
        &["sweep", "--tau", "1.5"],
        &["sweep", "--axis", "width"],
        &["sweep", "--values", "4,x"],
        &["sweep", "--algos", "exhaustive", "--values", "30"],
        &["sweep", "--config", "/nonexistent/cfg.toml"],
        &["solve", "--algos", "dp,all_on"],
        &["verify", "nonsense"],
        &["frobnicate"],
    ] {
        assert_eq!(irs_ee(args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn verify_passes() {
    let o = irs_ee(&["verify", "all", "--trials", "6", "--seed", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.lines().all(|l| l.starts_with("PASS ")), "{text}");
}

#[test]
fn help_exits_cleanly() {
    assert_eq!(irs_ee(&["--help"]).status.code(), Some(0));
    assert_eq!(irs_ee(&["sweep", "--help"]).status.code(), Some(0));
}
