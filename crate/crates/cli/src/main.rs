//! `intersub`: agreement/bias bounds for thermal pointers, coarse-graining
//! tables, exponential fits, the dense broadcast oracle, and the
//! central-spin macrofraction simulator, all behind one binary.
//!
//! Exit codes: 0 ok, 2 usage, 3 numeric-domain, 4 resource-cap, 5 I/O.

mod util;

use clap::{Parser, Subcommand, ValueEnum};
use intersub::oracle;
use intersub::partition::{boltzmann_weights, greedy_partition};
use intersub::prob::{AVector, ProbVector};
use intersub::spinstar::{
    thermal_pointer_with, time_scan, lcg_sweep, PointerHamiltonian,
};
use intersub::{bounds, coarsegrain, fit, repro};
use serde_json::json;
use std::path::PathBuf;
use util::{
    parse_f64_list, parse_u32_list, parse_usize_list, read_energy_file, read_xy_csv, render_csv,
    to_json_pretty, write_output, CliError, CliResult,
};

#[derive(Parser)]
#[command(
    name = "intersub",
    version,
    about = "Finite-resource broadcast agreement: bounds, coarse-graining, spin-star simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PointerH {
    /// H_P = sigma_x / 2
    Half,
    /// H_P = sigma_x
    Unit,
}

impl From<PointerH> for PointerHamiltonian {
    fn from(v: PointerH) -> Self {
        match v {
            PointerH::Half => PointerHamiltonian::HalfSigmaX,
            PointerH::Unit => PointerHamiltonian::SigmaX,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form agreement, noise distribution, bias and local statistics.
    Bounds {
        /// Subspace trace vector, comma separated (e.g. 0.6,0.4)
        #[arg(long)]
        a: String,
        /// Number of observers
        #[arg(long)]
        n: u32,
        /// System distribution to broadcast, comma separated
        #[arg(long)]
        p: String,
        /// Output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Thermal weights and the greedy outcome-subspace assignment.
    Partition {
        /// One energy per line
        #[arg(long, conflicts_with = "energies")]
        energies_file: Option<PathBuf>,
        /// Energies inline, comma separated
        #[arg(long)]
        energies: Option<String>,
        /// Inverse temperature
        #[arg(long)]
        beta: f64,
        /// Outcome subspace dimensions, comma separated (e.g. 2,2)
        #[arg(long)]
        dims: String,
        /// Rescale leftover weight into the reported trace vector
        #[arg(long)]
        renormalize: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coarse-grained trace vectors, agreement and bias per macrofraction size.
    Coarsegrain {
        #[arg(long)]
        a: String,
        /// Macrofraction sizes, comma separated
        #[arg(long)]
        lcg_list: String,
        /// Number of observers after coarse-graining
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit y = c0 exp(c1 x) to a two-column CSV.
    Fit {
        #[arg(long)]
        input: PathBuf,
        /// Leading points to drop before fitting
        #[arg(long, default_value_t = 0)]
        skip_first: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dense brute-force broadcast check against the closed forms.
    Oracle {
        /// Number of outcomes
        #[arg(long)]
        ds: usize,
        #[arg(long, conflicts_with = "energies")]
        energies_file: Option<PathBuf>,
        #[arg(long)]
        energies: Option<String>,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        dims: String,
        /// Number of pointers
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Central-spin macrofraction scan (single size) or sweep (size list).
    Spinstar {
        #[arg(long)]
        n_total: u64,
        #[arg(long, conflicts_with = "lcg_list")]
        lcg: Option<u32>,
        #[arg(long)]
        lcg_list: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, default_value_t = 0.2)]
        p0: f64,
        #[arg(long, default_value_t = 1.0)]
        g: f64,
        #[arg(long, default_value_t = 6.0)]
        t_max: f64,
        #[arg(long, default_value_t = 240)]
        t_steps: usize,
        #[arg(long, value_enum, default_value_t = PointerH::Half)]
        pointer_h: PointerH,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decay table of the coarse-grained disagreement weight with fits.
    ReproFig3 {
        /// Where to write the fit table CSV (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write per-d_S datasets to `<prefix>_ds<d>.csv`
        #[arg(long)]
        data_prefix: Option<String>,
    },
    /// Macrofraction sweep of the central-spin model with reference bounds.
    ReproFig4 {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_prob(label: &str, s: &str) -> CliResult<ProbVector> {
    let vals = parse_f64_list(s).map_err(CliError::Domain)?;
    ProbVector::new(vals)
        .map_err(|e| CliError::Domain(format!("{label}: {e}")))
}

fn parse_avector(s: &str) -> CliResult<AVector> {
    let vals = parse_f64_list(s).map_err(CliError::Domain)?;
    AVector::new(vals).map_err(|e| CliError::Domain(format!("--a: {e}")))
}

fn energies_from(
    file: &Option<PathBuf>,
    inline: &Option<String>,
) -> CliResult<Vec<f64>> {
    match (file, inline) {
        (Some(path), None) => read_energy_file(path),
        (None, Some(s)) => parse_f64_list(s).map_err(CliError::Domain),
        _ => Err(CliError::Domain(
            "provide exactly one of --energies-file or --energies".into(),
        )),
    }
}

fn run(cmd: Command) -> CliResult<()> {
    match cmd {
        Command::Bounds { a, n, p, out } => {
            let a = parse_avector(&a)?;
            let p = parse_prob("--p", &p)?;
            let report = bounds::bound_report(&a, n, &p)?;
            write_output(out.as_deref(), &to_json_pretty(&report)?)
        }

        Command::Partition {
            energies_file,
            energies,
            beta,
            dims,
            renormalize,
            out,
        } => {
            let energies = energies_from(&energies_file, &energies)?;
            let dims = parse_usize_list(&dims).map_err(CliError::Domain)?;
            let weights = boltzmann_weights(&energies, beta)?;
            let part = greedy_partition(&weights, &dims)?;
            let avector: Vec<f64> = if renormalize {
                part.renormalized_avector()?.as_slice().to_vec()
            } else {
                part.traces().to_vec()
            };
            let payload = json!({
                "weights": weights.as_slice(),
                "assignment": part.assignment,
                "avector": avector,
                "residual": part.residual(),
                "renormalized": renormalize,
            });
            write_output(out.as_deref(), &to_json_pretty(&payload)?)
        }

        Command::Coarsegrain { a, lcg_list, n, p, out } => {
            let a = parse_avector(&a)?;
            let p = parse_prob("--p", &p)?;
            let lcgs = parse_u32_list(&lcg_list).map_err(CliError::Domain)?;
            let mut rows = Vec::new();
            for l in lcgs {
                let r = coarsegrain::cg_metrics(&a, l, n, &p)?;
                rows.push(vec![
                    l as f64,
                    r.avector_cg[0],
                    r.gamma_cg,
                    1.0 - r.avector_cg[0],
                    r.bias_cg,
                ]);
            }
            let csv = render_csv(
                &["l_cg", "a0_cg", "gamma_cg", "one_minus_a0", "bias_cg"],
                &rows,
            )?;
            write_output(out.as_deref(), &csv)
        }

        Command::Fit { input, skip_first, out } => {
            let points = read_xy_csv(&input)?;
            let result = fit::fit_exponential(&points, skip_first)?;
            write_output(out.as_deref(), &to_json_pretty(&result)?)
        }

        Command::Oracle {
            ds,
            energies_file,
            energies,
            beta,
            dims,
            n,
            p,
            out,
        } => {
            let energies = energies_from(&energies_file, &energies)?;
            let dims = parse_usize_list(&dims).map_err(CliError::Domain)?;
            if dims.len() != ds {
                return Err(CliError::Domain(format!(
                    "--dims lists {} subspaces but --ds is {ds}",
                    dims.len()
                )));
            }
            let p_s = parse_prob("--p", &p)?;
            let weights = boltzmann_weights(&energies, beta)?;
            let part = greedy_partition(&weights, &dims)?;
            let stats = oracle::broadcast_statistics(&p_s, &weights, &part, n)?;

            let a = part.avector()?;
            let report = bounds::bound_report(&a, n, &p_s)?;
            let mut max_abs_diff: f64 = (stats.agreement - report.gamma).abs();
            for lp in &stats.local_probs {
                for x in 0..ds {
                    max_abs_diff = max_abs_diff.max((lp[x] - report.local_probs[x]).abs());
                }
            }
            for b in &stats.bias {
                max_abs_diff = max_abs_diff.max((b - report.bias).abs());
            }
            let payload = json!({
                "gamma_dense": stats.agreement,
                "gamma_formula": report.gamma,
                "local_probs": stats.local_probs[0].as_slice(),
                "bias_dense": stats.bias[0],
                "bias_formula": report.bias,
                "max_abs_diff": max_abs_diff,
            });
            write_output(out.as_deref(), &to_json_pretty(&payload)?)
        }

        Command::Spinstar {
            n_total,
            lcg,
            lcg_list,
            beta,
            p0,
            g,
            t_max,
            t_steps,
            pointer_h,
            out,
        } => {
            if t_steps < 2 {
                return Err(CliError::Domain("--t-steps must be at least 2".into()));
            }
            let pt = thermal_pointer_with(beta, pointer_h.into())?;
            let grid = repro::uniform_grid(t_max, t_steps);
            match (lcg, lcg_list) {
                (Some(l), None) => {
                    let scan = time_scan(&pt, l, n_total, p0, g, &grid)?;
                    if scan.summary.underflow_flushed > 0 {
                        eprintln!(
                            "note: {} weight entries below {:e} flushed to zero",
                            scan.summary.underflow_flushed,
                            intersub::spinstar::UNDERFLOW_FLOOR
                        );
                    }
                    let rows: Vec<Vec<f64>> = scan
                        .records
                        .iter()
                        .map(|r| {
                            vec![
                                r.t,
                                r.l_cg as f64,
                                r.p_correct_0,
                                r.p_correct_1,
                                r.p_out[0],
                                r.agreement,
                                r.bias,
                            ]
                        })
                        .collect();
                    let csv = render_csv(
                        &[
                            "t",
                            "l_cg",
                            "p_correct_0",
                            "p_correct_1",
                            "p_out_0",
                            "agreement",
                            "bias",
                        ],
                        &rows,
                    )?;
                    write_output(out.as_deref(), &csv)
                }
                (None, Some(list)) => {
                    let lcgs = parse_u32_list(&list).map_err(CliError::Domain)?;
                    let sweep = lcg_sweep(&pt, n_total, p0, g, &grid, &lcgs)?;
                    let rows: Vec<Vec<f64>> = sweep
                        .iter()
                        .map(|r| {
                            vec![
                                r.l_cg as f64,
                                r.min_dis_model,
                                r.bound_dis,
                                r.min_bias_model,
                                r.bound_bias,
                            ]
                        })
                        .collect();
                    let csv = render_csv(
                        &[
                            "l_cg",
                            "min_dis_model",
                            "bound_dis",
                            "min_bias_model",
                            "bound_bias",
                        ],
                        &rows,
                    )?;
                    write_output(out.as_deref(), &csv)
                }
                _ => Err(CliError::Domain(
                    "provide exactly one of --lcg or --lcg-list".into(),
                )),
            }
        }

        Command::ReproFig3 { out, data_prefix } => {
            let mut rows = Vec::new();
            for d_s in 2..=5usize {
                let f = repro::decay_table_fit(d_s)?;
                rows.push(vec![d_s as f64, f.c0, f.c1, f.r_squared, f.n_points as f64]);
                if let Some(prefix) = &data_prefix {
                    let data = repro::decay_table_dataset(d_s)?;
                    let data_rows: Vec<Vec<f64>> =
                        data.iter().map(|&(x, y)| vec![x, y]).collect();
                    let csv = render_csv(&["l_cg", "one_minus_a0"], &data_rows)?;
                    write_output(Some(PathBuf::from(format!("{prefix}_ds{d_s}.csv")).as_path()), &csv)?;
                }
            }
            let csv = render_csv(&["d_s", "c0", "c1", "r_squared", "n_points"], &rows)?;
            write_output(out.as_deref(), &csv)
        }

        Command::ReproFig4 { out } => {
            let cfg = repro::SweepConfig::default();
            let sweep = repro::spin_sweep(&cfg)?;
            let rows: Vec<Vec<f64>> = sweep
                .iter()
                .map(|r| {
                    vec![
                        r.l_cg as f64,
                        r.min_dis_model,
                        r.bound_dis,
                        r.min_bias_model,
                        r.bound_bias,
                    ]
                })
                .collect();
            let csv = render_csv(
                &[
                    "l_cg",
                    "min_dis_model",
                    "bound_dis",
                    "min_bias_model",
                    "bound_bias",
                ],
                &rows,
            )?;
            write_output(out.as_deref(), &csv)
        }
    }
}

fn init_thread_pool() {
    if let Ok(raw) = std::env::var("INTERSUB_THREADS") {
        match raw.parse::<usize>() {
            Ok(n) if n >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => eprintln!("warning: ignoring invalid INTERSUB_THREADS='{raw}'"),
        }
    }
}

fn main() {
    let cli = Cli::parse(); // clap exits with code 2 on usage errors
    init_thread_pool();
    if let Err(e) = run(cli.command) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
