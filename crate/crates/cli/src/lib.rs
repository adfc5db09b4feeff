//! `resham` command-line frontend. [`run`] holds all the logic so it can be
//! driven in-process by tests.

use std::collections::HashMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use resham::bihamiltonian::{derive_biham, derive_jordan, OrthoMat3, Potential};
use resham::checks::{all_passed, report_table, verify_generic, verify_named, CheckOutcome, VerifyOptions};
use resham::conformal::ConformalDecomposition;
use resham::polyfield::{names, parse_binding, parse_decimal, parse_numeric_binding, parse_point, parse_poly, Param, Poly, Rational};
use resham::simulate::{IntegratorConfig, Method, Quantity, Simulation};
use resham::systems::Registry;
use resham::Error;

#[derive(Parser, Debug)]
#[command(name = "resham", version, about = "Resistive-Hamiltonian systems: verify, simulate, derive")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the built-in systems.
    List,
    /// Print a system's J, R, H, source and reference field.
    Describe { system: String },
    /// Run the check catalogue on one system or `all`.
    Verify {
        system: String,
        /// Skip sampled floating-point checks.
        #[arg(long)]
        symbolic: bool,
        /// Parameter substitution `name=value`; repeatable.
        #[arg(long = "param", value_name = "K=V")]
        params: Vec<String>,
    },
    /// Integrate a system and write the trajectory.
    Simulate {
        system: String,
        #[arg(long, value_name = "A,B,C")]
        x0: String,
        #[arg(long = "param", value_name = "K=V")]
        params: Vec<String>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t0: f64,
        #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
        t1: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long, value_enum, default_value_t = MethodArg::Rk4)]
        method: MethodArg,
        #[arg(long, default_value_t = 1e-9)]
        atol: f64,
        #[arg(long, default_value_t = 1e-9)]
        rtol: f64,
        /// Integrate the system itself or its derived bi-Hamiltonian flow.
        #[arg(long, value_enum, default_value_t = SimKind::Resistive)]
        kind: SimKind,
        /// Second Hamiltonian for `--kind biham`; defaults to H.
        #[arg(long = "G", value_name = "POLY")]
        g: Option<String>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum)]
        format: Format,
    },
    /// Emit a derived system.
    Derive {
        system: String,
        #[arg(long, value_enum)]
        kind: DeriveKind,
        /// Second Hamiltonian; defaults to the system's H.
        #[arg(long = "G", value_name = "POLY")]
        g: Option<String>,
        /// Fix Δ in the Jordan rotation (rational, within [-1, 1]).
        #[arg(long, allow_hyphen_values = true)]
        delta: Option<String>,
        #[arg(long = "param", value_name = "K=V")]
        params: Vec<String>,
    },
    /// Systems × checks summary table.
    Report {
        #[arg(long)]
        symbolic: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Rk4,
    Rk45,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SimKind {
    Resistive,
    Biham,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DeriveKind {
    Biham,
    Jordan,
    Conformal,
}

/// Failure with an exit code: 2 for usage errors, 1 otherwise.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::UnknownSystem(_) | Error::Parse { .. } | Error::InvalidConfig(_) => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: 1, message: e.to_string() }
    }
}

type CmdResult = Result<u8, Failure>;

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
                return 2;
            }
            let _ = write!(out, "{text}");
            return 0;
        }
    };
    let result = match cli.command {
        Command::List => list(out),
        Command::Describe { system } => describe(&system, out),
        Command::Verify { system, symbolic, params } => verify(&system, symbolic, &params, out),
        Command::Simulate { system, x0, params, t0, t1, dt, method, atol, rtol, kind, g, out: path, format } => {
            let method = match method {
                MethodArg::Rk4 => Method::Rk4,
                MethodArg::Rk45 => Method::Rk45,
            };
            let request = SimRequest { x0, params, t0, t1, dt, method, atol, rtol, kind, g, path, format };
            simulate(&system, &request, out, err)
        }
        Command::Derive { system, kind, g, delta, params } => derive(&system, kind, g.as_deref(), delta.as_deref(), &params, out),
        Command::Report { symbolic } => report(symbolic, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn list(out: &mut dyn Write) -> CmdResult {
    for name in Registry::builtin().names() {
        writeln!(out, "{name}")?;
    }
    Ok(0)
}

fn describe(system: &str, out: &mut dyn Write) -> CmdResult {
    write!(out, "{}", Registry::builtin().get(system)?.describe())?;
    Ok(0)
}

fn exact_bindings(params: &[String]) -> Result<HashMap<Param, Poly>, Failure> {
    Ok(params.iter().map(|p| parse_binding(p)).collect::<resham::Result<_>>()?)
}

fn verify(system: &str, symbolic: bool, params: &[String], out: &mut dyn Write) -> CmdResult {
    let options = VerifyOptions { symbolic_only: symbolic, bindings: exact_bindings(params)? };
    let reg = Registry::builtin();
    if system != "all" {
        let outcomes = verify_named(reg, system, &options)?;
        print_outcomes(&outcomes, out)?;
        return Ok(if all_passed(&outcomes) { 0 } else { 1 });
    }
    let names: Vec<&str> = reg.names().collect();
    let results: Vec<resham::Result<Vec<CheckOutcome>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = names.iter().map(|name| scope.spawn(|| verify_named(reg, name, &options))).collect();
        handles.into_iter().map(|h| h.join().expect("verification thread panicked")).collect()
    });
    let generic = verify_generic();
    writeln!(out, "# generic")?;
    print_outcomes(&generic, out)?;
    let mut ok = all_passed(&generic);
    for (name, result) in names.iter().zip(results) {
        let outcomes = result?;
        writeln!(out, "# {name}")?;
        print_outcomes(&outcomes, out)?;
        ok &= all_passed(&outcomes);
    }
    Ok(if ok { 0 } else { 1 })
}

fn print_outcomes(outcomes: &[CheckOutcome], out: &mut dyn Write) -> std::io::Result<()> {
    for o in outcomes {
        writeln!(out, "{o}")?;
    }
    Ok(())
}

fn report(symbolic: bool, out: &mut dyn Write) -> CmdResult {
    let options = VerifyOptions { symbolic_only: symbolic, ..Default::default() };
    let reg = Registry::builtin();
    let mut rows = Vec::new();
    for name in reg.names() {
        rows.push((name.to_string(), verify_named(reg, name, &options)?));
    }
    rows.push(("generic".to_string(), verify_generic()));
    write!(out, "{}", report_table(&rows))?;
    let ok = rows.iter().all(|(_, o)| all_passed(o));
    Ok(if ok { 0 } else { 1 })
}

struct SimRequest {
    x0: String,
    params: Vec<String>,
    t0: f64,
    t1: f64,
    dt: f64,
    method: Method,
    atol: f64,
    rtol: f64,
    kind: SimKind,
    g: Option<String>,
    path: PathBuf,
    format: Format,
}

fn simulate(system: &str, req: &SimRequest, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let sys = Registry::builtin().get(system)?;
    let x0 = parse_point(&req.x0)?;
    let mut values = sys.default_values();
    for p in &req.params {
        let (param, v) = parse_numeric_binding(p)?;
        values.insert(param, v);
    }
    let g = req.g.as_deref().map(parse_poly).transpose()?;
    let sim = match req.kind {
        SimKind::Resistive => {
            let sim = Simulation::new(sys.assemble(), sys.hamiltonian.clone());
            match g {
                Some(g) => sim.with_g(g),
                None => sim,
            }
        }
        SimKind::Biham => {
            let derived = derive_biham(sys, g.as_ref(), &HashMap::new())?;
            let sim = Simulation::new(derived.rhs.clone(), sys.hamiltonian.clone()).with_g(derived.g.clone());
            match derived.gbar {
                Potential::Poly(p) => sim.with_gbar(Quantity::Poly(p)),
                Potential::Closed(c) => {
                    values.entry(names::lambda()).or_insert(1.0);
                    sim.with_gbar(Quantity::Closed(c))
                }
                Potential::Unknown => sim,
            }
        }
    };
    let cfg = IntegratorConfig {
        method: req.method,
        step: req.dt,
        t_start: req.t0,
        t_end: req.t1,
        abs_tol: req.atol,
        rel_tol: req.rtol,
        param_bindings: values,
    };
    let traj = sim.integrate(x0, &cfg)?;
    let body = match req.format {
        Format::Csv => traj.to_csv(),
        Format::Json => format!("{}\n", traj.to_json()),
    };
    std::fs::write(&req.path, body)?;
    writeln!(out, "wrote {} rows to {}", traj.len(), req.path.display())?;
    if traj.diverged {
        writeln!(err, "warning: state norm exceeded the divergence threshold; trajectory is partial")?;
        return Ok(1);
    }
    Ok(0)
}

fn parse_rational(src: &str) -> Result<Rational, Failure> {
    if let Some(r) = parse_decimal(src) {
        return Ok(r);
    }
    parse_poly(src)?.as_constant().ok_or_else(|| Failure { code: 2, message: format!("`{src}` is not a rational number") })
}

fn derive(
    system: &str,
    kind: DeriveKind,
    g: Option<&str>,
    delta: Option<&str>,
    params: &[String],
    out: &mut dyn Write,
) -> CmdResult {
    let sys = Registry::builtin().get(system)?;
    let bindings = exact_bindings(params)?;
    let g = g.map(parse_poly).transpose()?;
    let text = match kind {
        DeriveKind::Biham => derive_biham(sys, g.as_ref(), &bindings)?.render(),
        DeriveKind::Jordan => {
            let t = match delta {
                Some(d) => OrthoMat3::delta_rotation().with_delta(&parse_rational(d)?)?,
                None => OrthoMat3::delta_rotation(),
            };
            derive_jordan(sys, g.as_ref(), &bindings, &t)?.render()
        }
        DeriveKind::Conformal => {
            let d = ConformalDecomposition::builtin(&sys.name)
                .ok_or_else(|| Failure { code: 1, message: format!("no decomposition registered for {}", sys.name) })?;
            d.constrained(&bindings)?.render()?
        }
    };
    write!(out, "{text}")?;
    Ok(0)
}
