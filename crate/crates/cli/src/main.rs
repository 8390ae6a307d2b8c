//! Command-line front end: sharp constants, ODE profiles, functional
//! tables, heat-flow traces, and inequality verification suites, with
//! deterministic JSON/CSV emission.
//!
//! Exit codes: 0 on success / all verdicts passing, 1 when any verdict
//! fails, 2 on usage or parameter-region errors.

use clap::{Args, Parser, Subcommand, ValueEnum};
use renyi_fisher::density::{parse_density_spec, Density};
use renyi_fisher::functionals;
use renyi_fisher::heatflow;
use renyi_fisher::profiles;
use renyi_fisher::verify::{self, VerdictReport};
use std::fmt::Write as _;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "rfi", version, about = "Renyi/Tsallis information toolkit")]
struct Cli {
    /// Worker threads for parameter sweeps (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Quadrature tolerance override for functional evaluation.
    #[arg(long, global = true)]
    tol_quad: Option<f64>,

    /// Finite-difference verdict tolerance override (flow-derivative checks).
    #[arg(long, global = true)]
    tol_fd: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct OutputArgs {
    /// Output path (stdout when omitted).
    #[arg(long)]
    output: Option<String>,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Sharp isoperimetric constants r_{a,n}.
    Constants {
        /// Order: a single value or a sweep `start:stop:count`.
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Radial ODE ground state via shooting; emits `t,u,uprime` samples.
    Profile {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Information functionals of a density at one order.
    Functionals {
        #[arg(long)]
        alpha: f64,
        /// Density spec: `family:name(k=v,...)` or `grid:path.csv`.
        #[arg(long)]
        density: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Heat-flow trace `t,h,N,I,dh_dt_fd,residual`.
    Heatflow {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        density: String,
        /// Time grid `start:stop:count`.
        #[arg(long, default_value = "0.05:1.0:20")]
        t_grid: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// One named inequality check.
    Verify {
        /// isoperimetric | cramer_rao_renyi | cramer_rao_weighted |
        /// moment_entropy | cramer_rao_tsallis | cramer_rao_matrix |
        /// identity_chain | epi_gaussian | cm_bound | tsallis_cm | all
        #[arg(long)]
        name: String,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        density: String,
        #[arg(long, default_value = "0.05:1.0:20")]
        t_grid: String,
        /// Exponent for the cm_bound hypothesis (defaults per regime).
        #[arg(long)]
        beta: Option<f64>,
        /// Derivative order for cm_bound (1 or 2).
        #[arg(long, default_value_t = 1)]
        j: u32,
        /// Flow time for the cm_bound / tsallis_cm checks.
        #[arg(long, default_value_t = 0.5)]
        t0: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Every applicable inequality check for a density.
    Suite {
        /// Only `all` is defined.
        #[arg(long, default_value = "all")]
        name: String,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long)]
        density: String,
        #[command(flatten)]
        out: OutputArgs,
    },
}

/// 17-significant-digit, round-trip-safe float rendering.
fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        format!("{x:.16e}")
    }
}

fn json_num(x: f64) -> String {
    if x.is_finite() {
        fmt_f64(x)
    } else {
        format!("\"{}\"", fmt_f64(x))
    }
}

fn json_str(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn verdict_json(v: &VerdictReport, inputs: &[(String, String)]) -> String {
    // keys in sorted order for byte-identical output
    let mut inp = String::from("{");
    for (i, (k, val)) in inputs.iter().enumerate() {
        if i > 0 {
            inp.push(',');
        }
        let _ = write!(inp, "{}:{}", json_str(k), val);
    }
    inp.push('}');
    format!(
        "{{\"equality_expected\":{},\"inequality_id\":{},\"inputs\":{},\"label\":{},\"lhs\":{},\"margin\":{},\"pass\":{},\"rhs\":{},\"tolerance\":{}}}",
        v.equality_expected,
        json_str(v.id.as_str()),
        inp,
        json_str(&v.label),
        json_num(v.lhs),
        json_num(v.margin),
        v.pass,
        json_num(v.rhs),
        json_num(v.tolerance),
    )
}

fn verdict_csv_header() -> &'static str {
    "inequality_id,lhs,rhs,margin,tolerance,pass,equality_expected"
}

fn verdict_csv_row(v: &VerdictReport) -> String {
    format!(
        "{},{},{},{},{},{},{}",
        v.id.as_str(),
        fmt_f64(v.lhs),
        fmt_f64(v.rhs),
        fmt_f64(v.margin),
        fmt_f64(v.tolerance),
        v.pass,
        v.equality_expected
    )
}

fn parse_sweep(spec: &str) -> Result<Vec<f64>, String> {
    if let Ok(single) = spec.parse::<f64>() {
        return Ok(vec![single]);
    }
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("sweep spec must be `start:stop:count`, got '{spec}'"));
    }
    let start: f64 = parts[0].parse().map_err(|_| format!("bad sweep start '{}'", parts[0]))?;
    let stop: f64 = parts[1].parse().map_err(|_| format!("bad sweep stop '{}'", parts[1]))?;
    let count: usize = parts[2].parse().map_err(|_| format!("bad sweep count '{}'", parts[2]))?;
    if count == 0 || (count > 1 && stop <= start) {
        return Err(format!("sweep '{spec}' must be a nonempty increasing grid"));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let step = (stop - start) / (count - 1) as f64;
    Ok((0..count).map(|i| start + step * i as f64).collect())
}

fn emit(out: &OutputArgs, text: &str) -> Result<(), String> {
    match &out.output {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write '{path}': {e}")),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn density_of(spec: &str) -> Result<Density, String> {
    parse_density_spec(spec).map_err(|e| e.to_string())
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Constants { alpha, dim, out } => {
            let alphas = parse_sweep(&alpha)?;
            let records: Vec<_> = renyi_fisher::parallel::par_map(alphas, |a| {
                profiles::optimal_constant(dim, a)
            });
            let mut rows = Vec::new();
            for r in records {
                rows.push(r.map_err(|e| e.to_string())?);
            }
            let text = match out.format {
                Format::Json => {
                    let mut s = String::from("[");
                    for (i, r) in rows.iter().enumerate() {
                        if i > 0 {
                            s.push(',');
                        }
                        let _ = write!(
                            s,
                            "{{\"alpha\":{},\"dim\":{},\"limit_scaled\":{},\"route\":{},\"value\":{}}}",
                            json_num(r.alpha),
                            r.n,
                            r.limit_scaled.map(json_num).unwrap_or_else(|| "null".into()),
                            json_str(r.route.as_str()),
                            json_num(r.value),
                        );
                    }
                    s.push_str("]\n");
                    s
                }
                Format::Csv => {
                    let mut s = String::from("alpha,dim,value,route,limit_scaled\n");
                    for r in rows {
                        let _ = writeln!(
                            s,
                            "{},{},{},{},{}",
                            fmt_f64(r.alpha),
                            r.n,
                            fmt_f64(r.value),
                            r.route.as_str(),
                            r.limit_scaled.map(fmt_f64).unwrap_or_default()
                        );
                    }
                    s
                }
            };
            emit(&out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Profile { alpha, dim, out } => {
            let sol = profiles::solve_profile(dim, alpha).map_err(|e| e.to_string())?;
            let header = format!(
                "{{\"Ms\":{},\"T\":{},\"alpha\":{},\"n\":{},\"u0\":{}}}",
                json_num(sol.ms),
                json_num(sol.t_end),
                json_num(sol.alpha),
                sol.n,
                json_num(sol.u0),
            );
            let mut csv = format!("# {header}\nt,u,uprime\n");
            for (t, u, v) in &sol.samples {
                let _ = writeln!(csv, "{},{},{}", fmt_f64(*t), fmt_f64(*u), fmt_f64(*v));
            }
            emit(&out, &csv)?;
            if out.output.is_some() {
                println!("{header}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Functionals { alpha, density, out } => {
            let d = density_of(&density)?;
            let rows = functionals::functional_table(&d, alpha).map_err(|e| e.to_string())?;
            let text = match out.format {
                Format::Json => {
                    let mut s = String::from("{");
                    let mut sorted: Vec<_> = rows.iter().collect();
                    sorted.sort_by_key(|r| r.kind);
                    for (i, r) in sorted.iter().enumerate() {
                        if i > 0 {
                            s.push(',');
                        }
                        let _ = write!(s, "{}:{}", json_str(r.kind), json_num(r.value));
                    }
                    s.push_str("}\n");
                    s
                }
                Format::Csv => {
                    let mut s = String::from("kind,value\n");
                    for r in rows {
                        let _ = writeln!(s, "{},{}", r.kind, fmt_f64(r.value));
                    }
                    s
                }
            };
            emit(&out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Heatflow { alpha, density, t_grid, out } => {
            let d = density_of(&density)?;
            let grid = parse_sweep(&t_grid)?;
            let tr = heatflow::trace(&d, alpha, &grid).map_err(|e| e.to_string())?;
            let mut csv = String::from("t,h,N,I,dh_dt_fd,residual\n");
            let residuals = tr.debruijn_residuals();
            for k in 0..tr.t.len() {
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{}",
                    fmt_f64(tr.t[k]),
                    fmt_f64(tr.h[k]),
                    fmt_f64(tr.n_pow[k]),
                    fmt_f64(tr.fisher[k]),
                    fmt_f64(tr.dh_dt_fd[k]),
                    fmt_f64(residuals[k]),
                );
            }
            emit(&out, &csv)?;
            let summary = format!(
                "{{\"alpha\":{},\"max_debruijn_residual\":{},\"points\":{}}}",
                json_num(alpha),
                json_num(tr.max_debruijn_residual()),
                tr.t.len()
            );
            if out.output.is_some() {
                println!("{summary}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { name, alpha, density, t_grid, beta, j, t0, out } => {
            let d = density_of(&density)?;
            let verdicts: Vec<VerdictReport> = match name.as_str() {
                "isoperimetric" => {
                    vec![verify::isoperimetric_check(&d, alpha).map_err(|e| e.to_string())?]
                }
                "cramer_rao_renyi" => {
                    vec![verify::cramer_rao_renyi(&d, alpha).map_err(|e| e.to_string())?]
                }
                "cramer_rao_weighted" => {
                    vec![verify::cramer_rao_weighted(&d, alpha).map_err(|e| e.to_string())?]
                }
                "moment_entropy" => {
                    vec![verify::moment_entropy_check(&d, alpha).map_err(|e| e.to_string())?]
                }
                "cramer_rao_tsallis" => {
                    vec![verify::cramer_rao_tsallis(&d, alpha).map_err(|e| e.to_string())?]
                }
                "cramer_rao_matrix" => {
                    vec![verify::cramer_rao_matrix(&d, alpha).map_err(|e| e.to_string())?]
                }
                "identity_chain" => {
                    vec![verify::identity_chain_check(&d, alpha).map_err(|e| e.to_string())?]
                }
                "epi_gaussian" => {
                    let grid = parse_sweep(&t_grid)?;
                    vec![heatflow::epi_gaussian_check(&d, alpha, &grid).map_err(|e| e.to_string())?]
                }
                "cm_bound" => {
                    let beta = beta.unwrap_or(if alpha < 1.0 { (alpha + 1.0) / 2.0 } else { 0.5 });
                    let mut v =
                        verify::cm_bound_check(&d, alpha, beta, j, t0).map_err(|e| e.to_string())?;
                    if let Some(t) = cli.tol_fd {
                        v.tolerance = t;
                        v.pass = v.margin >= -t;
                    }
                    vec![v]
                }
                "tsallis_cm" => verify::tsallis_cm_check(&d, t0).map_err(|e| e.to_string())?,
                "all" => verify::run_suite(&d, alpha).map_err(|e| e.to_string())?,
                other => return Err(format!("unknown inequality name '{other}'")),
            };
            emit_verdicts(&out, &verdicts, alpha, &density)?;
            if verdicts.iter().all(|v| v.pass) {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        Command::Suite { name, alpha, dim, density, out } => {
            if name != "all" {
                return Err(format!("unknown suite '{name}' (only `all` is defined)"));
            }
            let d = density_of(&density)?;
            if d.dim() != dim {
                return Err(format!(
                    "--dim {dim} does not match the density dimension {}",
                    d.dim()
                ));
            }
            let verdicts = verify::run_suite(&d, alpha).map_err(|e| e.to_string())?;
            emit_verdicts(&out, &verdicts, alpha, &density)?;
            if verdicts.iter().all(|v| v.pass) {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
    }
}

fn emit_verdicts(
    out: &OutputArgs,
    verdicts: &[VerdictReport],
    alpha: f64,
    density: &str,
) -> Result<(), String> {
    let inputs = vec![
        ("alpha".to_string(), json_num(alpha)),
        ("density".to_string(), json_str(density)),
    ];
    let text = match out.format {
        Format::Json => {
            let mut s = String::from("[");
            for (i, v) in verdicts.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                s.push_str(&verdict_json(v, &inputs));
            }
            s.push_str("]\n");
            s
        }
        Format::Csv => {
            let mut s = format!("{}\n", verdict_csv_header());
            for v in verdicts {
                let _ = writeln!(s, "{}", verdict_csv_row(v));
            }
            s
        }
    };
    emit(out, &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        renyi_fisher::parallel::set_threads(cli.threads);
    }
    let _ = cli.tol_quad; // quadrature tolerances are pinned globally
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
