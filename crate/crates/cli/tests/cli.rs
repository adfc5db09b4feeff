use std::process::{Command, Output};

fn resham(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_resham")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn run_lib(args: &[&str]) -> (u8, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("resham").chain(args.iter().copied());
    let code = resham_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn list_names_every_system() {
    let o = resham(&["list"]);
    assert!(o.status.success());
    let names: Vec<String> = stdout(&o).lines().map(str::to_owned).collect();
    assert_eq!(names.len(), 9);
    assert!(names.iter().any(|n| n == "rlc_circuit"));
}

#[test]
fn describe_chen() {
    let (code, out, _) = run_lib(&["describe", "chen"]);
    assert_eq!(code, 0);
    assert!(out.contains("rhs: (-x*a+y*a,-x*z-x*a+x*g+y*g,x*y-z*b)"), "{out}");
}

#[test]
fn verify_chen_passes() {
    let (code, out, _) = run_lib(&["verify", "chen"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l == "PASS jacobi.J residual=0"));
    assert!(out.lines().any(|l| l == "PASS energyrate.match value=-x^2*a+z*a*b"));
    assert!(out.contains("classification=conditional constraint=g=a"));
    assert!(!out.contains("FAIL"));
}

#[test]
fn verify_qi_reports_never_poisson() {
    let (code, out, _) = run_lib(&["verify", "qi"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.starts_with("INFO n.jacobi nonzero")));
    assert!(out.contains("classification=never witness=z^3:1/2"));
}

#[test]
fn verify_with_bindings() {
    let (code, out, _) = run_lib(&["verify", "chen", "--param", "g=a"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l == "PASS n.jacobi residual=0"), "{out}");
}

#[test]
fn verify_all_exits_zero() {
    let o = resham(&["verify", "all"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("# generic"));
    assert!(!text.lines().any(|l| l.starts_with("FAIL")));
}

#[test]
fn unknown_system_is_a_usage_error() {
    let o = resham(&["verify", "lorenz"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("lorenz"));
}

#[test]
fn parse_errors_exit_two() {
    let (code, _, err) = run_lib(&["derive", "chen", "--kind", "biham", "--G", "x^"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error: parse error"), "{err}");
    let (code, _, _) = run_lib(&["verify", "chen", "--param", "a"]);
    assert_eq!(code, 2);
    let (code, _, _) = run_lib(&["frobnicate"]);
    assert_eq!(code, 2);
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = run_lib(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("simulate"));
}

#[test]
fn jordan_at_delta_one_matches_biham() {
    let a = resham(&["derive", "reduced_three_wave", "--kind", "jordan", "--delta", "1"]);
    let b = resham(&["derive", "reduced_three_wave", "--kind", "biham"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn jordan_with_pythagorean_delta_eliminates_radical() {
    let (code, out, _) = run_lib(&["derive", "reduced_three_wave", "--kind", "jordan", "--delta", "3/5"]);
    assert_eq!(code, 0);
    let body: String = out.lines().filter(|l| l.starts_with("d")).collect();
    assert!(!body.contains('s') && !body.contains('D'), "{body}");
}

#[test]
fn jordan_rejects_delta_out_of_range() {
    let (code, _, _) = run_lib(&["derive", "reduced_three_wave", "--kind", "jordan", "--delta", "2"]);
    assert_eq!(code, 2);
}

#[test]
fn derive_rejects_non_poisson_anticommutator() {
    let (code, _, err) = run_lib(&["derive", "qi", "--kind", "biham"]);
    assert_eq!(code, 1);
    assert!(err.contains("not Poisson"));
}

#[test]
fn derive_lu_with_constraint() {
    let (code, out, _) = run_lib(&["derive", "lu", "--kind", "biham", "--param", "b=g", "--G", "1/2*x^2-a*z"]);
    assert_eq!(code, 0);
    assert!(out.contains("# M=1"));
    assert!(out.contains("dx/dt = -2*y*z*g+y*a^2"), "{out}");
}

#[test]
fn derive_conformal() {
    let (code, out, _) = run_lib(&["derive", "chen", "--kind", "conformal"]);
    assert_eq!(code, 0);
    assert!(out.contains("# constraint=b=a,g=-a"), "{out}");
    let (code, _, _) = run_lib(&["derive", "qi", "--kind", "conformal"]);
    assert_eq!(code, 1);
}

#[test]
fn simulate_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("chen.csv");
    let p = path.to_str().unwrap();
    let (code, out, _) = run_lib(&["simulate", "chen", "--x0", "1,1,1", "--t1", "0.1", "--dt", "0.01", "--out", p, "--format", "csv"]);
    assert_eq!(code, 0, "{out}");
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,x,y,z,H,div,energy_rate_residual"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 11);
    let first: Vec<f64> = rows[0].split(',').map(|c| c.parse().unwrap()).collect();
    assert_eq!(&first[..4], &[0.0, 1.0, 1.0, 1.0]);
    // div = -a-b+g at the defaults 35, 3, 28
    assert!((first[5] + 10.0).abs() < 1e-12);
}

#[test]
fn simulate_json_biham() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tw.json");
    let p = path.to_str().unwrap();
    let args = ["simulate", "reduced_three_wave", "--kind", "biham", "--x0", "0.3,0.4,0.5", "--t1", "0.5", "--method", "rk45", "--out", p, "--format", "json"];
    let (code, _, _) = run_lib(&args);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&path).unwrap();
    for key in ["\"channels\"", "\"G\"", "\"Gbar\"", "\"config\"", "\"rk45\"", "\"times\"", "\"states\""] {
        assert!(text.contains(key), "{key} missing");
    }
}

#[test]
fn simulate_divergence_is_flagged() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("blowup.csv");
    let p = path.to_str().unwrap();
    let args = ["simulate", "chen", "--x0", "1,1,1", "--param", "a=-100", "--t1", "100", "--out", p, "--format", "csv"];
    let (code, _, err) = run_lib(&args);
    assert_eq!(code, 1);
    assert!(err.contains("warning"));
    assert!(path.exists());
}

#[test]
fn simulate_rejects_bad_config() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("x.csv");
    let p = p.to_str().unwrap();
    let (code, _, _) = run_lib(&["simulate", "chen", "--x0", "1,1", "--out", p, "--format", "csv"]);
    assert_eq!(code, 2);
    let (code, _, _) = run_lib(&["simulate", "chen", "--x0", "1,1,1", "--dt", "0", "--out", p, "--format", "csv"]);
    assert_eq!(code, 2);
}

#[test]
fn report_table_has_every_system() {
    let (code, out, _) = run_lib(&["report"]);
    assert_eq!(code, 0);
    for name in ["reduced_three_wave", "qi", "euler_rotor_dissipative"] {
        assert!(out.contains(name));
    }
}
