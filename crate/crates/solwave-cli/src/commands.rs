//! The five subcommands. Each resolves its inputs from the effective
//! [`RunConfig`], performs the work through the library, writes artifacts
//! with the configuration echoed in, and returns a process exit code.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use solwave::{
    continue_amplitude, solve_wave, synth_trace, verify_all, Environment, FieldEvaluator,
    FieldGrid, GaugeTrace, GridSpec, HeightBound, SolveRequest, SolverTarget, Status,
    VerificationReport, WaveSolution,
};

use crate::config::RunConfig;
use crate::{invalid, CliError};

/// Builds the environment described by the configuration.
fn environment(config: &RunConfig) -> Result<Environment, CliError> {
    Environment::new(config.gravity, config.depth, config.p_atm).map_err(invalid)
}

/// Resolved output directory of the run (already folded into the config).
fn out_dir(config: &RunConfig) -> PathBuf {
    PathBuf::from(config.out_dir.as_deref().unwrap_or("."))
}

/// Primary artifact path: explicit `--out` wins, else `<out_dir>/<name>`.
fn artifact_path(config: &RunConfig, out: Option<PathBuf>, name: &str) -> PathBuf {
    out.unwrap_or_else(|| out_dir(config).join(name))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .map_err(|e| CliError::Invalid(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    fs::write(path, text)
        .map_err(|e| CliError::Invalid(format!("cannot write {}: {e}", path.display())))
}

/// JSON artifact with the effective config first, then the payload.
fn json_artifact<T: Serialize>(config: &RunConfig, key: &str, payload: &T) -> String {
    let mut root = serde_json::Map::new();
    root.insert(
        "config".into(),
        serde_json::to_value(config).expect("config serializes"),
    );
    root.insert(
        key.into(),
        serde_json::to_value(payload).expect("payload serializes"),
    );
    let mut text = serde_json::to_string_pretty(&serde_json::Value::Object(root))
        .expect("artifact serializes");
    text.push('\n');
    text
}

/// One-line config echo for CSV artifacts, as a `#` comment.
fn csv_config_line(config: &RunConfig) -> String {
    format!(
        "# config {}\n",
        serde_json::to_string(config).expect("config serializes")
    )
}

/// Reads a solution file written by `solve` (config + solution) or a bare
/// serialized solution.
fn load_solution(path: &Path) -> Result<WaveSolution, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Invalid(format!("{}: not valid JSON: {e}", path.display())))?;
    let payload = value.get("solution").cloned().unwrap_or(value);
    serde_json::from_value(payload)
        .map_err(|e| CliError::Invalid(format!("{}: not a solution file: {e}", path.display())))
}

fn report_warnings(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

// ───────────────────────────────────────────────────────────────────────────

/// `solve`: compute one wave and write it as a JSON artifact.
pub fn run_solve(config: &RunConfig, out: Option<PathBuf>) -> Result<i32, CliError> {
    let env = environment(config)?;
    let target = match (config.amplitude, config.froude) {
        (Some(a), None) => SolverTarget::Amplitude(a),
        (None, Some(f)) => SolverTarget::Froude(f),
        _ => {
            return Err(CliError::Invalid(
                "pass exactly one of --amplitude and --froude".into(),
            ))
        }
    };
    let mut request = SolveRequest::new(env, target)
        .with_modes(config.modes)
        .with_tol(config.tol);
    if let Some(l) = config.half_length {
        request = request.with_half_length(l);
    }
    if let Some(cap) = config.amplitude_cap {
        request = request.with_amplitude_cap(cap);
    }

    let sol = solve_wave(&request)?;
    report_warnings(&sol.diagnostics().warnings);

    let path = artifact_path(config, out, "solution.json");
    write_text(&path, &json_artifact(config, "solution", &sol))?;
    println!(
        "solved: a = {:.6}, F = {:.8}, c = {:.8}, half-length = {} -> {}",
        sol.amplitude(),
        sol.froude(),
        sol.speed(),
        sol.half_length(),
        path.display()
    );
    Ok(0)
}

// ───────────────────────────────────────────────────────────────────────────

/// `fields`: sample a stored solution on a boundary-fitted grid and dump it.
pub fn run_fields(
    config: &RunConfig,
    solution: &Path,
    out: Option<PathBuf>,
    plot_script: bool,
) -> Result<i32, CliError> {
    let sol = load_solution(solution)?;
    let fields = FieldEvaluator::new(&sol);
    let span = config.grid_span.unwrap_or_else(|| fields.half_length());

    // `--stations 0` dumps the single column under the crest.
    let spec = if config.grid_stations == 0 {
        GridSpec::uniform(vec![0.0], config.grid_nodes).map_err(invalid)?
    } else {
        GridSpec::symmetric(span, config.grid_stations, config.grid_nodes).map_err(invalid)?
    };
    let grid = fields.sample_grid(&spec).map_err(invalid)?;

    let primary = artifact_path(config, out, "fields.csv");
    let stem = primary.with_extension("");

    if config.format.wants_csv() {
        let csv_path = stem.with_extension("csv");
        let text = format!("{}{}", csv_config_line(config), grid.to_csv());
        write_text(&csv_path, &text)?;
        println!("fields: {} samples -> {}", grid.samples.len(), csv_path.display());
        if plot_script {
            let script_path = stem.with_extension("gnuplot");
            write_text(&script_path, &plot_script_text(&csv_path, &grid))?;
            println!("plot script -> {}", script_path.display());
        }
    }
    if config.format.wants_json() {
        let json_path = stem.with_extension("json");
        write_text(&json_path, &json_artifact(config, "grid", &grid))?;
        println!("fields: {} samples -> {}", grid.samples.len(), json_path.display());
    }
    Ok(0)
}

/// Generic plotting commands (gnuplot syntax) referencing the CSV dump.
fn plot_script_text(csv: &Path, grid: &FieldGrid) -> String {
    let name = csv
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| csv.display().to_string());
    let mut s = String::new();
    s.push_str(&format!(
        "# Plotting commands for {name} (gnuplot syntax; any CSV tool works).\n"
    ));
    s.push_str("# Columns: x, y, psi, u, v, P (total pressure), p (dynamic pressure).\n");
    s.push_str("set datafile separator \",\"\n");
    s.push_str("set datafile commentschars \"#\"\n");
    s.push_str("set xlabel \"x\"\nset ylabel \"y\"\n");
    s.push_str("set view map\n");
    s.push_str(&format!(
        "splot \"{name}\" using 1:2:7 with points pointtype 5 pointsize 0.5 \
         palette title \"dynamic pressure\"\n"
    ));
    s.push_str("pause mouse close\n");
    if grid.crest_index.is_some() {
        s.push_str("# The crest column sits at x = 0 (crest sample present in the dump).\n");
    }
    s
}

// ───────────────────────────────────────────────────────────────────────────

/// `verify`: run the full property suite on a stored solution.
pub fn run_verify(
    config: &RunConfig,
    solution: &Path,
    out: Option<PathBuf>,
) -> Result<i32, CliError> {
    let sol = load_solution(solution)?;
    let report = verify_all(&sol, &config.verify).map_err(invalid)?;

    let path = artifact_path(config, out, "report.json");
    write_text(&path, &json_artifact(config, "report", &report))?;
    println!("{report}");
    println!("report -> {}", path.display());

    match report.overall {
        Status::Pass => Ok(0),
        Status::Indeterminate => {
            let names: Vec<&str> = report
                .findings
                .iter()
                .filter(|f| f.status == Status::Indeterminate)
                .map(|f| f.property.name())
                .collect();
            eprintln!(
                "warning: indeterminate findings ({}); nothing failed",
                names.join(", ")
            );
            Ok(0)
        }
        Status::Fail => Ok(1),
    }
}

// ───────────────────────────────────────────────────────────────────────────

/// `estimate-height`: lower-bound the crest elevation from a bed-pressure
/// record file.
pub fn run_estimate(
    config: &RunConfig,
    trace: &Path,
    out: Option<PathBuf>,
) -> Result<i32, CliError> {
    let env = environment(config)?;
    let text = fs::read_to_string(trace)
        .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", trace.display())))?;
    let record = GaugeTrace::from_csv(&text, env).map_err(invalid)?;
    let bound = record
        .height_lower_bound_with(config.tail_fraction)
        .map_err(invalid)?;

    for flag in &bound.flags {
        eprintln!("warning: {flag}");
    }
    let path = artifact_path(config, out, "bound.json");
    write_text(&path, &json_artifact(config, "bound", &bound))?;
    println!(
        "height lower bound: {:.6} (peak bed pressure {:.6}, asymptote {:.6}) -> {}",
        bound.h_lb,
        bound.p_max_bed,
        bound.p_inf,
        path.display()
    );
    Ok(0)
}

// ───────────────────────────────────────────────────────────────────────────

/// One row of the sweep summary.
#[derive(Debug, Clone, Serialize)]
struct SweepRow {
    amplitude: f64,
    froude: f64,
    speed: f64,
    mass_flux: f64,
    bernoulli_constant: f64,
    p_crest: f64,
    h_lb: f64,
    status: Status,
}

#[derive(Debug, Serialize)]
struct SweepPayload {
    rows: Vec<SweepRow>,
    reports: Vec<VerificationReport>,
}

/// `sweep`: solve an ascending amplitude ladder; verify, summarize, and
/// height-bound each wave. Rows are emitted in input order.
pub fn run_sweep(config: &RunConfig) -> Result<i32, CliError> {
    let env = environment(config)?;
    let dir = out_dir(config);
    let csv_path = dir.join("sweep.csv");
    let json_path = dir.join("sweep.json");

    let mut rows: Vec<SweepRow> = Vec::new();
    let mut reports: Vec<VerificationReport> = Vec::new();

    if !config.amplitudes.is_empty() {
        let ladder = continue_amplitude(&env, &config.amplitudes, config.modes, config.tol)?;
        for (i, sol) in ladder.iter().enumerate() {
            report_warnings(&sol.diagnostics().warnings);
            let report = verify_all(sol, &config.verify).map_err(invalid)?;
            rows.push(sweep_row(config, sol, &report, i as u64)?);
            reports.push(report);
        }
    }

    let mut csv = csv_config_line(config);
    csv.push_str("a,F,c,m,C,p_crest,h_lb,status\n");
    for r in &rows {
        csv.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{}\n",
            r.amplitude, r.froude, r.speed, r.mass_flux, r.bernoulli_constant, r.p_crest,
            r.h_lb, r.status
        ));
        println!(
            "a = {:.4}: F = {:.6}, p_crest = {:.6}, h_lb = {:.6}, {}",
            r.amplitude, r.froude, r.p_crest, r.h_lb, r.status
        );
    }
    write_text(&csv_path, &csv)?;
    let payload = SweepPayload { rows, reports };
    write_text(&json_path, &json_artifact(config, "sweep", &payload))?;
    println!("sweep -> {}, {}", csv_path.display(), json_path.display());

    if payload.rows.iter().any(|r| r.status == Status::Fail) {
        Ok(1)
    } else {
        Ok(0)
    }
}

/// Summary numbers of one swept wave: hydrodynamic constants, the crest
/// pressure, and the bed-record height bound (noisy when configured).
fn sweep_row(
    config: &RunConfig,
    sol: &WaveSolution,
    report: &VerificationReport,
    rung: u64,
) -> Result<SweepRow, CliError> {
    let fields = FieldEvaluator::new(sol);
    let eta0 = fields.surface_elevation(0.0).map_err(invalid)?;
    let p_crest = fields.dynamic_pressure(0.0, eta0).map_err(invalid)?;
    let bound = sweep_bound(config, sol, rung)?;
    Ok(SweepRow {
        amplitude: sol.amplitude(),
        froude: sol.froude(),
        speed: sol.speed(),
        mass_flux: sol.mass_flux(),
        bernoulli_constant: sol.bernoulli_constant(),
        p_crest,
        h_lb: bound.h_lb,
        status: report.overall,
    })
}

/// Synthesizes a bed record over ±80% of the domain and bounds the height
/// from it; seeds are per-rung so the artifact is reproducible.
fn sweep_bound(config: &RunConfig, sol: &WaveSolution, rung: u64) -> Result<HeightBound, CliError> {
    let span = 0.8 * sol.half_length();
    let stations: Vec<f64> = (0..501)
        .map(|i| -span + 2.0 * span * i as f64 / 500.0)
        .collect();
    let trace = synth_trace(sol, &stations, config.noise_sigma, config.seed.wrapping_add(rung))
        .map_err(invalid)?;
    trace
        .height_lower_bound_with(config.tail_fraction)
        .map_err(invalid)
}
