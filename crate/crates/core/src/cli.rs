//! Command-line front end. Output is canonical: sorted keys and floats
//! rounded to 15 significant digits, so identical runs are byte-identical.
//!
//! Exit codes: 0 success, 1 verification or computation failure, 2 bad
//! configuration. Failures print `{"error": {...}}` on stderr.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::coordmap::{CoordinateMap, DEFAULT_R_MAX};
use crate::error::Error;
use crate::params::{pt_to_natanzon, validate_params, NatanzonParams, PtParams};
use crate::report::{fmt_num, round15};
use crate::satellites::{pt_satellite_report, shift_exponents, SatelliteOptions};
use crate::scattering::{find_bound_poles, reflection_coefficient, ScatterChannel, SearchBox};
use crate::spectrum::{solve_spectrum, BoundState};
use crate::verify::{default_targets, run_suites, Suite, Target, DEFAULT_GRID_N};
use crate::wavefun::{default_grid, eigenfunction, recommended_r_max, CarrierForm};

/// Environment variable overriding the default grid size.
pub const GRID_ENV: &str = "NATANZON_GRID_N";
/// Largest tolerated energy mismatch between a states file and a fresh solve.
pub const STATES_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Parser)]
#[command(
    name = "natanzon",
    version,
    about = "Spectra, wavefunctions, scattering poles and satellites of Natanzon potentials"
)]
pub struct Cli {
    /// Pöschl-Teller parameters `A,B` or `A,B,shifted`.
    #[arg(long, global = true, value_name = "A,B[,shifted]", conflicts_with = "params")]
    pub pt: Option<String>,
    /// JSON file with `{f, h0, h1, a, c0, c1}` or `{A, B, shifted}`.
    #[arg(long, global = true, value_name = "FILE")]
    pub params: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Outer edge of the radial grid
    #[arg(long, global = true)]
    pub r_max: Option<f64>,
    /// Grid points; overrides `NATANZON_GRID_N`
    #[arg(long, global = true)]
    pub n_points: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    All,
    Algebra,
    Oracle,
    Scatter,
    Satellite,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bound states with exponents and group parameters.
    Spectrum,
    /// The potential tabulated in r.
    Potential,
    /// Normalized eigenfunction of level `nu`.
    Wavefunction {
        #[arg(long)]
        nu: usize,
        /// `spectrum` output to check against a fresh solve.
        #[arg(long, value_name = "FILE")]
        states: Option<PathBuf>,
    },
    /// Reflection coefficient on a λ grid, or its bound-state poles.
    Scatter {
        /// Weight m; defaults to the ground state's.
        #[arg(long, allow_hyphen_values = true)]
        m: Option<f64>,
        /// `a:b:n` real λ values.
        #[arg(long, value_name = "A:B:N", conflicts_with = "poles")]
        lambda_grid: Option<String>,
        /// Locate bound-state poles instead of tabulating R
        #[arg(long)]
        poles: bool,
        /// Upper imaginary edge of the pole search box.
        #[arg(long)]
        im_max: Option<f64>,
    },
    /// Satellite of level `nu` under J₊ or J₋.
    Satellite {
        #[arg(long, default_value_t = 0)]
        nu: usize,
        #[arg(long, value_enum, default_value_t = Direction::Plus)]
        direction: Direction,
    },
    /// Run verification suites; exit 1 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
    },
}

/// A failure with its exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    fn config(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            kind: "config",
            message: message.into(),
        }
    }

    fn failure(kind: &'static str, message: impl Into<String>) -> Self {
        Self {
            code: 1,
            kind,
            message: message.into(),
        }
    }

    pub fn to_json(&self) -> String {
        let v = json!({ "error": { "code": self.code, "kind": self.kind, "message": self.message } });
        serde_json::to_string(&v).expect("error value serializes")
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::InvalidParams(_) | Error::Io(_) => CliError::config(e.to_string()),
            _ => CliError::failure("computation", e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Rounds every float to 15 significant digits; object keys stay sorted.
pub fn canonicalize(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => n
            .as_f64()
            .and_then(|x| serde_json::Number::from_f64(round15(x)))
            .map_or(Value::Null, Value::Number),
        Value::Array(a) => Value::Array(a.into_iter().map(canonicalize).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, canonicalize(v))).collect()),
        other => other,
    }
}

/// Canonical pretty JSON with a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> CliResult<String> {
    let v = serde_json::to_value(value).map_err(|e| CliError::failure("serialization", e.to_string()))?;
    let mut s = serde_json::to_string_pretty(&canonicalize(v))
        .map_err(|e| CliError::failure("serialization", e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Parses `A,B` or `A,B,shifted`.
pub fn parse_pt(text: &str) -> CliResult<PtParams> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let num = |s: &str| {
        s.parse::<f64>()
            .map_err(|_| CliError::config(format!("--pt: '{s}' is not a number")))
    };
    let shifted = match parts.len() {
        2 => false,
        3 if parts[2] == "shifted" => true,
        _ => {
            return Err(CliError::config(format!(
                "--pt expects A,B or A,B,shifted, got '{text}'"
            )))
        }
    };
    Ok(PtParams::new(num(parts[0])?, num(parts[1])?, shifted)?)
}

/// Parses `a:b:n` into `n` evenly spaced values.
pub fn parse_lambda_grid(text: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || CliError::config(format!("--lambda-grid expects a:b:n, got '{text}'"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if n == 0 || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect())
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum ParamsFile {
    Natanzon(NatanzonParams),
    Pt(PtParams),
}

/// Resolved parameter source.
#[derive(Debug, Clone, Copy)]
struct Input {
    params: NatanzonParams,
    pt: Option<PtParams>,
}

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))
}

fn resolve_input(cli: &Cli) -> CliResult<Option<Input>> {
    let input = match (&cli.pt, &cli.params) {
        (Some(text), None) => {
            let pt = parse_pt(text)?;
            Some(Input {
                params: pt_to_natanzon(&pt),
                pt: Some(pt),
            })
        }
        (None, Some(path)) => {
            let text = read_file(path)?;
            match serde_json::from_str::<ParamsFile>(&text) {
                Ok(ParamsFile::Natanzon(p)) => Some(Input { params: p, pt: None }),
                Ok(ParamsFile::Pt(pt)) => {
                    let pt = PtParams::new(pt.a, pt.b, pt.shifted)?;
                    Some(Input {
                        params: pt_to_natanzon(&pt),
                        pt: Some(pt),
                    })
                }
                Err(e) => return Err(CliError::config(format!("{}: {e}", path.display()))),
            }
        }
        (None, None) => None,
        (Some(_), Some(_)) => return Err(CliError::config("give exactly one of --pt and --params")),
    };
    if let Some(inp) = &input {
        let report = validate_params(&inp.params);
        if !report.valid {
            return Err(CliError::config(format!(
                "invalid parameters: {}",
                report.messages.join("; ")
            )));
        }
    }
    Ok(input)
}

fn require(input: Option<Input>) -> CliResult<Input> {
    input.ok_or_else(|| CliError::config("this command needs --pt or --params"))
}

fn grid_points(cli: &Cli) -> CliResult<usize> {
    let n = match cli.n_points {
        Some(n) => n,
        None => match std::env::var(GRID_ENV) {
            Ok(s) => s
                .trim()
                .parse()
                .map_err(|_| CliError::config(format!("{GRID_ENV} must be a positive integer, got '{s}'")))?,
            Err(_) => DEFAULT_GRID_N,
        },
    };
    if n < 16 {
        return Err(CliError::config(format!("grid size {n} is below 16")));
    }
    Ok(n)
}

fn r_max(cli: &Cli) -> CliResult<Option<f64>> {
    match cli.r_max {
        Some(r) if !(r.is_finite() && r > 0.0) => Err(CliError::config(format!("--r-max must be positive, got {r}"))),
        other => Ok(other),
    }
}

fn csv_line(fields: &[String]) -> String {
    let mut s = fields.join(",");
    s.push('\n');
    s
}

fn columns_csv(header: &[&str], cols: &[&[f64]]) -> String {
    let mut s = csv_line(&header.iter().map(|h| h.to_string()).collect::<Vec<_>>());
    let n = cols.first().map_or(0, |c| c.len());
    for i in 0..n {
        s.push_str(&csv_line(&cols.iter().map(|c| fmt_num(c[i])).collect::<Vec<_>>()));
    }
    s
}

fn states_csv(states: &[BoundState]) -> String {
    let mut s = String::from("nu,E,alpha,beta,delta,p,q,m,threshold_flag\n");
    for st in states {
        let nums = [st.energy, st.alpha, st.beta, st.delta, st.p, st.q, st.m].map(fmt_num);
        s.push_str(&format!("{},{},{}\n", st.nu, nums.join(","), st.threshold));
    }
    s
}

fn cmd_spectrum(inp: Input, format: Format) -> CliResult<String> {
    let states = solve_spectrum(&inp.params)?;
    match format {
        Format::Csv => Ok(states_csv(&states)),
        Format::Json => to_canonical_json(&json!({
            "params": inp.params,
            "pt": inp.pt,
            "validation": validate_params(&inp.params),
            "states": states,
        })),
    }
}

fn cmd_potential(inp: Input, cli: &Cli, format: Format) -> CliResult<String> {
    let n = grid_points(cli)?;
    let map = CoordinateMap::build(&inp.params, r_max(cli)?.unwrap_or(DEFAULT_R_MAX), n)?;
    let grid = default_grid(&map, n)?;
    let (mut rs, mut vs) = (Vec::new(), Vec::new());
    for r in grid.points() {
        let (z, w) = map.zw_of_r(r)?;
        if z > 0.0 && w > 0.0 {
            rs.push(r);
            vs.push(map.potential_at(r)?);
        }
    }
    match format {
        Format::Csv => Ok(columns_csv(&["r", "V"], &[&rs, &vs])),
        Format::Json => to_canonical_json(&json!({ "params": inp.params, "r": rs, "V": vs })),
    }
}

#[derive(Deserialize)]
struct StatesFile {
    states: Vec<BoundState>,
}

fn cmd_wavefunction(inp: Input, cli: &Cli, nu: usize, states_file: Option<&Path>, format: Format) -> CliResult<String> {
    let states = solve_spectrum(&inp.params)?;
    let state = *states
        .get(nu)
        .ok_or_else(|| CliError::config(format!("level {nu} is not bound ({} levels)", states.len())))?;
    if let Some(path) = states_file {
        let text = read_file(path)?;
        let given: StatesFile =
            serde_json::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        let prior = given
            .states
            .iter()
            .find(|s| s.nu == nu)
            .ok_or_else(|| CliError::config(format!("{} has no level {nu}", path.display())))?;
        let diff = (prior.energy - state.energy).abs();
        if diff > STATES_TOLERANCE {
            return Err(CliError::failure(
                "consistency",
                format!(
                    "level {nu}: states file E = {} differs from solved E = {} by {diff:e}",
                    prior.energy, state.energy
                ),
            ));
        }
    }
    let n = grid_points(cli)?;
    let r_max = r_max(cli)?.unwrap_or_else(|| recommended_r_max(&state, DEFAULT_R_MAX));
    let map = CoordinateMap::build(&inp.params, r_max, n)?;
    let grid = default_grid(&map, n)?;
    let ef = eigenfunction(&inp.params, &state, &map, &grid, CarrierForm::Hypergeometric)?;
    let rs = grid.points();
    match format {
        Format::Csv => Ok(columns_csv(&["r", "psi"], &[&rs, &ef.func.values])),
        Format::Json => to_canonical_json(&json!({
            "nu": nu,
            "E": state.energy,
            "form": ef.form,
            "normalization": ef.k,
            "r": rs,
            "psi": ef.func.values,
        })),
    }
}

fn cmd_scatter(
    inp: Input,
    m: Option<f64>,
    lambda_grid: Option<&str>,
    poles: bool,
    im_max: Option<f64>,
    format: Format,
) -> CliResult<String> {
    let states = solve_spectrum(&inp.params)?;
    let m = match m {
        Some(m) => m,
        None => states
            .first()
            .map(|s| s.m)
            .ok_or_else(|| CliError::config("no bound state to take m from; pass --m"))?,
    };
    let template = ScatterChannel::new(Complex64::new(0.0, 0.0), m, inp.params.c1)?;
    let ready = inp.params.h1 == -1.0;
    if poles {
        let im_hi = im_max.unwrap_or(2.0 * m.abs() + 11.0);
        let bx = SearchBox::new(-1.0, 1.0, -im_hi, im_hi)?;
        let mut rep = find_bound_poles(&template, m, &bx)?;
        let bound: Vec<BoundState> = states.into_iter().filter(|s| !s.threshold).collect();
        rep.match_spectrum(&bound, 1e-8);
        return match format {
            Format::Csv => {
                let mut s = String::from("lambda_re,lambda_im,E,matched_nu\n");
                for p in &rep.poles {
                    let e = p.energy.map(fmt_num).unwrap_or_default();
                    let nu = p.matched_nu.map(|n| n.to_string()).unwrap_or_default();
                    s.push_str(&format!("{},{},{e},{nu}\n", fmt_num(p.lambda_re), fmt_num(p.lambda_im)));
                }
                Ok(s)
            }
            Format::Json => to_canonical_json(&json!({ "scattering_ready": ready, "report": rep })),
        };
    }
    let text = lambda_grid.ok_or_else(|| CliError::config("scatter needs --lambda-grid a:b:n or --poles"))?;
    let lambdas = parse_lambda_grid(text)?;
    let mut cols: [Vec<f64>; 3] = Default::default();
    for &l in &lambdas {
        let r = reflection_coefficient(&template.with_lambda(Complex64::new(l, 0.0)), m)?;
        cols[0].push(r.re);
        cols[1].push(r.im);
        cols[2].push(r.norm());
    }
    match format {
        Format::Csv => Ok(columns_csv(
            &["lambda", "re_R", "im_R", "abs_R"],
            &[&lambdas, &cols[0], &cols[1], &cols[2]],
        )),
        Format::Json => to_canonical_json(&json!({
            "m": m,
            "c1": inp.params.c1,
            "scattering_ready": ready,
            "lambda": lambdas,
            "re_R": cols[0],
            "im_R": cols[1],
            "abs_R": cols[2],
        })),
    }
}

fn cmd_satellite(inp: Input, cli: &Cli, nu: usize, direction: Direction, format: Format) -> CliResult<String> {
    let dir = if direction == Direction::Plus { 1 } else { -1 };
    let value = match inp.pt {
        Some(pt) => {
            let mut opts = SatelliteOptions::default();
            if let Some(r) = r_max(cli)? {
                opts.r_max = r;
            }
            if cli.n_points.is_some() || std::env::var(GRID_ENV).is_ok() {
                opts.n_points = grid_points(cli)?;
            }
            serde_json::to_value(pt_satellite_report(&pt, nu, dir, &opts)?)
        }
        None => {
            let states = solve_spectrum(&inp.params)?;
            let st = states
                .get(nu)
                .ok_or_else(|| CliError::config(format!("level {nu} is not bound ({} levels)", states.len())))?;
            serde_json::to_value(json!({ "record": shift_exponents(st, dir)? }))
        }
    }
    .map_err(|e| CliError::failure("serialization", e.to_string()))?;
    match format {
        Format::Json => to_canonical_json(&value),
        Format::Csv => {
            let mut s = String::from("field,value\n");
            flatten_csv("", &canonicalize(value), &mut s);
            Ok(s)
        }
    }
}

/// Scalar leaves as `path,value`; arrays of numbers are skipped.
fn flatten_csv(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(o) => {
            for (k, v) in o {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten_csv(&key, v, out);
            }
        }
        Value::Array(_) => {}
        Value::Null => out.push_str(&format!("{prefix},\n")),
        other => out.push_str(&format!("{prefix},{other}\n")),
    }
}

fn cmd_verify(inp: Option<Input>, cli: &Cli, suite: SuiteArg, format: Format) -> CliResult<(String, bool)> {
    let suites: Vec<Suite> = match suite {
        SuiteArg::All => Suite::ALL.to_vec(),
        SuiteArg::Algebra => vec![Suite::Algebra],
        SuiteArg::Oracle => vec![Suite::Oracle],
        SuiteArg::Scatter => vec![Suite::Scatter],
        SuiteArg::Satellite => vec![Suite::Satellite],
    };
    let targets = match inp {
        Some(i) => vec![Target {
            label: "input",
            params: i.params,
            pt: i.pt,
        }],
        None => default_targets(),
    };
    let checks = run_suites(&suites, &targets, grid_points(cli)?)?;
    let passed = checks.iter().all(|c| c.pass);
    let text = match format {
        Format::Json => to_canonical_json(&json!({ "passed": passed, "checks": checks }))?,
        Format::Csv => {
            let mut s = String::from("suite,target,name,value,tolerance,pass\n");
            for c in &checks {
                let suite = serde_json::to_value(c.suite)
                    .ok()
                    .and_then(|v| v.as_str().map(String::from))
                    .unwrap_or_default();
                s.push_str(&format!(
                    "{suite},{},\"{}\",{},{},{}\n",
                    c.target,
                    c.name.replace('"', "'"),
                    fmt_num(c.value),
                    fmt_num(c.tolerance),
                    c.pass
                ));
            }
            s
        }
    };
    Ok((text, passed))
}

fn execute(cli: &Cli) -> CliResult<(String, bool)> {
    let input = resolve_input(cli)?;
    let f = cli.format;
    let ok = |s: String| Ok((s, true));
    match &cli.command {
        Command::Spectrum => ok(cmd_spectrum(require(input)?, f)?),
        Command::Potential => ok(cmd_potential(require(input)?, cli, f)?),
        Command::Wavefunction { nu, states } => ok(cmd_wavefunction(require(input)?, cli, *nu, states.as_deref(), f)?),
        Command::Scatter {
            m,
            lambda_grid,
            poles,
            im_max,
        } => ok(cmd_scatter(
            require(input)?,
            *m,
            lambda_grid.as_deref(),
            *poles,
            *im_max,
            f,
        )?),
        Command::Satellite { nu, direction } => ok(cmd_satellite(require(input)?, cli, *nu, *direction, f)?),
        Command::Verify { suite } => cmd_verify(input, cli, *suite, f),
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let err = CliError {
                code: 2,
                kind: "usage",
                message: e.to_string().trim().to_string(),
            };
            let _ = writeln!(stderr, "{}", err.to_json());
            return err.code;
        }
    };
    let (text, passed) = match execute(&cli) {
        Ok(r) => r,
        Err(err) => {
            let _ = writeln!(stderr, "{}", err.to_json());
            return err.code;
        }
    };
    let written = match &cli.out {
        Some(path) => {
            fs::write(path, &text).map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display())))
        }
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::failure("io", e.to_string())),
    };
    if let Err(err) = written {
        let _ = writeln!(stderr, "{}", err.to_json());
        return err.code;
    }
    if passed {
        0
    } else {
        let err = CliError::failure("verification", "one or more checks failed");
        let _ = writeln!(stderr, "{}", err.to_json());
        err.code
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("natanzon").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn pt_parsing() {
        let p = parse_pt("4,2,shifted").unwrap();
        assert_eq!((p.a, p.b, p.shifted), (4.0, 2.0, true));
        assert!(!parse_pt("5.5, 1").unwrap().shifted);
        for bad in ["4", "4,x", "4,2,up", "1,2"] {
            assert_eq!(parse_pt(bad).unwrap_err().code, 2, "{bad}");
        }
    }

    #[test]
    fn lambda_grid_parsing() {
        assert_eq!(parse_lambda_grid("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_lambda_grid("2:5:1").unwrap(), vec![2.0]);
        for bad in ["0:1", "0:1:0", "a:1:2"] {
            assert!(parse_lambda_grid(bad).is_err());
        }
    }

    #[test]
    fn canonical_rounding() {
        let v = canonicalize(json!({"b": 0.1 + 0.2, "a": [1, 2.5]}));
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"{"a":[1,2.5],"b":0.3}"#);
    }

    #[test]
    fn spectrum_command() {
        let (code, out, _) = run_capture(&["spectrum", "--pt", "5.5,1"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        let es: Vec<f64> = v["states"]
            .as_array()
            .unwrap()
            .iter()
            .map(|s| s["E"].as_f64().unwrap())
            .collect();
        assert_eq!(es, vec![-20.25, -6.25, -0.25]);
    }

    #[test]
    fn config_errors_exit_two() {
        let (code, _, err) = run_capture(&["spectrum"]);
        assert_eq!(code, 2);
        let v: Value = serde_json::from_str(err.trim()).unwrap();
        assert_eq!(v["error"]["kind"], "config");
        let (code, _, err) = run_capture(&["spectrum", "--pt", "1,2"]);
        assert_eq!(code, 2, "{err}");
        let (code, _, err) = run_capture(&["frobnicate"]);
        assert_eq!(code, 2);
        assert!(serde_json::from_str::<Value>(err.trim()).is_ok());
        let (code, _, _) = run_capture(&["scatter", "--pt", "4,1"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_capture(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("spectrum"));
    }
}
