//! Command-line front end: analyze | gamma | eval | zeros | toric.
//!
//! Exit codes: 0 ok, 2 input error, 3 internal invariant failure.

mod schema;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Deserialize;

use eulerprod::boundary::{
    build_probe, collision_audit, count_zeros_asymptotic, pole_candidates, zeros_on_line, ZeroBox,
};
use eulerprod::continuation::eval_z_continued_at_delta;
use eulerprod::gamma::gamma_table;
use eulerprod::geometry::{
    cyclotomic_factor_scan, cyclotomy_probe, enumerate_faces, CyclotomyVerdict, ProbeConfig,
};
use eulerprod::poly::parse_poly;
use eulerprod::toric::analyze_v_n;
use eulerprod::zeta::{ZeroTable, ZetaConfig};

#[derive(Parser)]
#[command(
    name = "eulerprod",
    version,
    about = "Euler products of multivariate polynomials: expansion coefficients, meromorphy domains, boundary-zero experiments"
)]
struct Cli {
    /// Seed for every randomized step (reports are deterministic given it).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Optional TOML file with default values for the flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Reserved; the current implementation runs single-threaded.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Emit machine-readable JSON (the default and only output format).
    #[arg(long, global = true, default_value_t = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline: expansion table, cyclotomy, faces, boundary verdicts.
    Analyze {
        /// Polynomial in the X1..Xn grammar, constant term 1.
        input: String,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Expansion-coefficient table.
    Gamma {
        /// Polynomial in the X1..Xn grammar, constant term 1.
        input: String,
        #[command(flatten)]
        opts: CommonOpts,
        /// Output format: json or csv.
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Evaluate the continued Euler product at a point.
    Eval {
        /// Polynomial in the X1..Xn grammar, constant term 1.
        input: String,
        /// Point as a JSON array of {"re":..,"im":..}, one per variable.
        #[arg(long)]
        point: String,
        /// Downward override of delta (larger prime cutoff, faster tail).
        #[arg(long)]
        delta: Option<f64>,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Boundary-zero experiment along a face line; CSV rows on stdout,
    /// JSON summary on stderr.
    Zeros {
        /// Polynomial in the X1..Xn grammar, constant term 1.
        input: String,
        /// Face index (the `e` field of the face report); defaults to the
        /// first feasible non-degenerate face.
        #[arg(long)]
        face: Option<usize>,
        /// Lower edge of the imaginary-part window (default 1.0).
        #[arg(long)]
        u: Option<f64>,
        /// Height of the imaginary-part window (default 1.0).
        #[arg(long)]
        eta: Option<f64>,
        /// Comma-separated ladder of lower real-part cutoffs.
        #[arg(long)]
        eps: Option<String>,
        /// Largest prime on the line (default 10000).
        #[arg(long)]
        pmax: Option<u64>,
        /// Upper bound on Re(t) for kept records (default 1.0).
        #[arg(long)]
        re_max: Option<f64>,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Toric family report for x_1...x_n = x_{n+1}^n.
    Toric {
        #[arg(long)]
        n: u32,
    },
}

#[derive(Args)]
struct CommonOpts {
    /// Multi-index norm bound of the expansion table.
    #[arg(long)]
    bound: Option<u32>,
    /// Number of nontrivial zeta zeros used for singularity flags.
    #[arg(long)]
    kzeros: Option<usize>,
    /// Optional JSON cache for the zeta-zero table.
    #[arg(long)]
    zero_cache: Option<PathBuf>,
}

#[derive(Deserialize, Default)]
struct FileConfig {
    seed: Option<u64>,
    bound: Option<u32>,
    kzeros: Option<usize>,
    u: Option<f64>,
    eta: Option<f64>,
    eps: Option<Vec<f64>>,
    pmax: Option<u64>,
    re_max: Option<f64>,
}

struct Settings {
    seed: u64,
    bound: u32,
    kzeros: usize,
    u: f64,
    eta: f64,
    eps: Vec<f64>,
    pmax: u64,
    re_max: f64,
    zero_cache: Option<PathBuf>,
}

/// Prints to stdout, reporting whether the stream is still open (a closed
/// pipe ends output quietly instead of panicking).
fn emit(line: &str) -> bool {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{line}").is_ok()
}

fn input_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn internal_error(msg: &str) -> ExitCode {
    eprintln!("internal error: {msg}");
    ExitCode::from(3)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // --json is the only output mode and --threads is reserved
    let _ = (cli.json, cli.threads);
    let file: FileConfig = match &cli.config {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(text) => match toml::from_str(&text) {
                Ok(cfg) => cfg,
                Err(e) => return input_error(&format!("bad config file: {e}")),
            },
            Err(e) => return input_error(&format!("cannot read config: {e}")),
        },
        None => FileConfig::default(),
    };

    let base = |opts: &CommonOpts| Settings {
        seed: cli.seed.or(file.seed).unwrap_or(0),
        bound: opts.bound.or(file.bound).unwrap_or(12),
        kzeros: opts.kzeros.or(file.kzeros).unwrap_or(10),
        u: file.u.unwrap_or(1.0),
        eta: file.eta.unwrap_or(1.0),
        eps: file.eps.clone().unwrap_or_else(|| vec![0.0]),
        pmax: file.pmax.unwrap_or(10_000),
        re_max: file.re_max.unwrap_or(1.0),
        zero_cache: opts.zero_cache.clone(),
    };

    let run = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| match &cli.command {
        Command::Analyze { input, opts } => cmd_analyze(input, &base(opts)),
        Command::Gamma { input, opts, format } => cmd_gamma(input, &base(opts), format),
        Command::Eval { input, point, delta, opts } => cmd_eval(input, point, *delta, &base(opts)),
        Command::Zeros {
            input,
            face,
            u,
            eta,
            eps,
            pmax,
            re_max,
            opts,
        } => {
            let mut st = base(opts);
            if let Some(u) = u {
                st.u = *u;
            }
            if let Some(eta) = eta {
                st.eta = *eta;
            }
            if let Some(p) = pmax {
                st.pmax = *p;
            }
            if let Some(r) = re_max {
                st.re_max = *r;
            }
            if let Some(e) = eps {
                let parsed: Result<Vec<f64>, _> =
                    e.split(',').map(|x| x.trim().parse::<f64>()).collect();
                match parsed {
                    Ok(v) if !v.is_empty() => st.eps = v,
                    _ => return input_error("bad --eps list"),
                }
            }
            cmd_zeros(input, *face, &st)
        }
        Command::Toric { n } => cmd_toric(*n),
    }));
    match run {
        Ok(code) => code,
        // a panic is an internal invariant failure, distinct from bad input
        Err(_) => internal_error("invariant violated; see the panic message above"),
    }
}

fn load_zeros(st: &Settings) -> Result<ZeroTable, String> {
    ZeroTable::load_or_compute(st.zero_cache.as_deref(), st.kzeros).map_err(|e| e.to_string())
}

fn cmd_analyze(input: &str, st: &Settings) -> ExitCode {
    let h = match parse_poly(input) {
        Ok(h) => h,
        Err(e) => return input_error(&e.to_string()),
    };
    let table = match gamma_table(&h, st.bound) {
        Ok(t) => t,
        Err(e) => return internal_error(&e.to_string()),
    };
    let probe_cfg = ProbeConfig { seed: st.seed, ..ProbeConfig::default() };
    let cyclotomy = cyclotomy_probe(&h, &probe_cfg);
    let d_bound = (2 * h.total_degree() * h.total_degree() + 6).min(30);
    let factors = cyclotomic_factor_scan(&h, d_bound.max(1));
    let faces = enumerate_faces(&h);

    let cyclo_json = match &cyclotomy {
        CyclotomyVerdict::Certificate(list) => serde_json::json!({
            "verdict": "certificate",
            "factors": list.iter().map(|(lambda, g)| serde_json::json!({
                "lambda": lambda,
                "gamma": g.to_string(),
            })).collect::<Vec<_>>(),
        }),
        CyclotomyVerdict::Witness { theta, root, modulus } => serde_json::json!({
            "verdict": "witness",
            "theta": theta,
            "root": {"re": root.re, "im": root.im},
            "modulus": modulus,
        }),
        CyclotomyVerdict::Inconclusive { exponent_bound } => serde_json::json!({
            "verdict": "inconclusive",
            "exponent_bound": exponent_bound,
        }),
    };

    let not_cyclotomic = matches!(cyclotomy, CyclotomyVerdict::Witness { .. });
    let boundary: Vec<serde_json::Value> = faces
        .iter()
        .map(|f| {
            let (verdict, reason) = if matches!(cyclotomy, CyclotomyVerdict::Certificate(_)) {
                (
                    "inconclusive",
                    "polynomial is cyclotomic; the product continues everywhere".to_string(),
                )
            } else if !factors.is_empty() {
                (
                    "inconclusive",
                    "cyclotomic factor present; analyze the cofactor".to_string(),
                )
            } else if !not_cyclotomic {
                (
                    "inconclusive",
                    "cyclotomy undecided within the probe bounds".to_string(),
                )
            } else if f.witness.is_none() {
                (
                    "inconclusive",
                    "ray carries no admissible boundary point".to_string(),
                )
            } else if !f.nondegenerate {
                (
                    "inconclusive",
                    "face polynomial has a multiple root".to_string(),
                )
            } else {
                (
                    "certified",
                    "face is non-degenerate and the polynomial is non-cyclotomic: \
                     no meromorphic continuation crosses this face"
                        .to_string(),
                )
            };
            serde_json::json!({"e": f.e, "verdict": verdict, "reason": reason})
        })
        .collect();

    let report = serde_json::json!({
        "input": h.render(),
        "version": env!("CARGO_PKG_VERSION"),
        "seed": st.seed,
        "c": rational_str(table.c()),
        "gamma": {
            "bound": table.bound(),
            "max_nonzero_norm": table.max_nonzero_norm(),
            "bound_margin": table.bound_margin().map(|m| rational_str(&m)).unwrap_or_else(|| "0".into()),
        },
        "cyclotomy": cyclo_json,
        "cyclotomic_factors": factors.iter().map(|f| serde_json::json!({
            "d": f.d, "lambda": f.lambda,
        })).collect::<Vec<_>>(),
        "faces": faces.iter().map(|f| f.to_json_value()).collect::<Vec<_>>(),
        "boundary": boundary,
    });
    if let Err(e) = schema::validate_analysis(&report) {
        return internal_error(&format!("report failed schema validation: {e}"));
    }
    emit(&serde_json::to_string_pretty(&report).unwrap());
    ExitCode::SUCCESS
}

fn rational_str(x: &num_rational::BigRational) -> String {
    use num_traits::One;
    if x.denom().is_one() {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

fn cmd_gamma(input: &str, st: &Settings, format: &str) -> ExitCode {
    let h = match parse_poly(input) {
        Ok(h) => h,
        Err(e) => return input_error(&e.to_string()),
    };
    let table = match gamma_table(&h, st.bound) {
        Ok(t) => t,
        Err(e) => return internal_error(&e.to_string()),
    };
    match format {
        "json" => {
            let v = table.to_json_value();
            if let Err(e) = schema::validate_gamma_table(&v) {
                return internal_error(&format!("report failed schema validation: {e}"));
            }
            emit(&serde_json::to_string_pretty(&v).unwrap());
        }
        "csv" => {
            let r = h.term_count();
            let header: Vec<String> = (1..=r).map(|j| format!("beta{j}")).collect();
            let mut open = emit(&format!("{},gamma", header.join(",")));
            for (beta, gamma) in table.entries() {
                if !open {
                    break;
                }
                let cells: Vec<String> = beta.iter().map(|b| b.to_string()).collect();
                open = emit(&format!("{},{}", cells.join(","), gamma));
            }
        }
        other => return input_error(&format!("unknown format '{other}'")),
    }
    ExitCode::SUCCESS
}

fn cmd_eval(input: &str, point: &str, delta: Option<f64>, st: &Settings) -> ExitCode {
    let h = match parse_poly(input) {
        Ok(h) => h,
        Err(e) => return input_error(&e.to_string()),
    };
    #[derive(Deserialize)]
    struct C {
        re: f64,
        im: f64,
    }
    let parsed: Result<Vec<C>, _> = serde_json::from_str(point);
    let s: Vec<Complex64> = match parsed {
        Ok(v) => v.into_iter().map(|c| Complex64::new(c.re, c.im)).collect(),
        Err(e) => return input_error(&format!("bad --point: {e}")),
    };
    if s.len() != h.var_count() {
        return input_error(&format!(
            "point has {} coordinates, polynomial has {} variables",
            s.len(),
            h.var_count()
        ));
    }
    let table = match gamma_table(&h, st.bound) {
        Ok(t) => t,
        Err(e) => return internal_error(&e.to_string()),
    };
    let zeros = match load_zeros(st) {
        Ok(z) => z,
        Err(e) => return internal_error(&e),
    };
    let cfg = ZetaConfig::default();
    match eval_z_continued_at_delta(&h, &s, &table, &zeros, &cfg, delta) {
        Ok(rep) => {
            let v = rep.to_json_value();
            if let Err(e) = schema::validate_eval_report(&v) {
                return internal_error(&format!("report failed schema validation: {e}"));
            }
            emit(&serde_json::to_string_pretty(&v).unwrap());
            ExitCode::SUCCESS
        }
        Err(e) => input_error(&e.to_string()),
    }
}

fn cmd_zeros(input: &str, face_idx: Option<usize>, st: &Settings) -> ExitCode {
    let h = match parse_poly(input) {
        Ok(h) => h,
        Err(e) => return input_error(&e.to_string()),
    };
    let faces = enumerate_faces(&h);
    let face = match face_idx {
        Some(e) => match faces.iter().find(|f| f.e == e) {
            Some(f) => f,
            None => return input_error(&format!("no face with index {e}")),
        },
        None => match faces.iter().find(|f| f.witness.is_some() && f.nondegenerate) {
            Some(f) => f,
            None => return input_error("no feasible non-degenerate face"),
        },
    };
    let probe = match build_probe(&h, face, st.seed) {
        Ok(p) => p,
        Err(e) => return input_error(&e.to_string()),
    };
    if !(st.u > 0.0) || !(st.eta > 0.0) {
        return input_error("--u and --eta must be positive");
    }
    if st.eps.iter().any(|&e| !(0.0..1.0).contains(&e)) {
        return input_error("--eps values must lie in [0, 1)");
    }
    let mut eps_sorted = st.eps.clone();
    eps_sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let base_eps = *eps_sorted.last().unwrap();
    let mut zbox = ZeroBox::new(st.u, st.eta, base_eps.max(0.0));
    zbox.re_max = st.re_max;
    let records = zeros_on_line(&probe, &zbox, st.pmax);

    let table = match gamma_table(&h, st.bound) {
        Ok(t) => t,
        Err(e) => return internal_error(&e.to_string()),
    };
    let zeros_table = match load_zeros(st) {
        Ok(z) => z,
        Err(e) => return internal_error(&e),
    };
    let candidates = pole_candidates(&probe, &table, &zeros_table);

    let mut open = emit("p,m,re_t,im_t,residual");
    for r in &records {
        if !open {
            break;
        }
        open = emit(&format!(
            "{},{},{:.15e},{:.15e},{:.3e}",
            r.p, r.m, r.t.re, r.t.im, r.residual
        ));
    }

    let ladder: Vec<serde_json::Value> = eps_sorted
        .iter()
        .map(|&eps| {
            let subset: Vec<_> = records.iter().filter(|r| r.t.re > eps).cloned().collect();
            let audit = collision_audit(&subset, &candidates, 1e-4);
            // the counting prediction exists only on constant branches and
            // diverges as eps -> 0, so it is reported best-effort
            let predicted = if eps > 0.0 {
                count_zeros_asymptotic(&probe, st.u, st.eta, &[eps])
                    .ok()
                    .map(|pts| pts[0].predicted)
            } else {
                None
            };
            serde_json::json!({
                "eps": eps,
                "count": subset.len(),
                "survivors": audit.survivors,
                "predicted": predicted,
            })
        })
        .collect();
    let skipped = eulerprod::zeta::primes_up_to(st.pmax)
        .iter()
        .filter(|&&p| eulerprod::boundary::select_branch(&probe, p).is_err())
        .count();
    let summary = serde_json::json!({
        "input": h.render(),
        "face": face.e,
        "records": records.len(),
        "candidates": candidates.len(),
        "skipped_primes": skipped,
        "ladder": ladder,
    });
    if let Err(e) = schema::validate_zeros_summary(&summary) {
        return internal_error(&format!("summary failed schema validation: {e}"));
    }
    eprintln!("{}", serde_json::to_string_pretty(&summary).unwrap());
    ExitCode::SUCCESS
}

fn cmd_toric(n: u32) -> ExitCode {
    if !(2..=6).contains(&n) {
        return input_error("--n must be between 2 and 6");
    }
    match analyze_v_n(n) {
        Ok(rep) => {
            let v = rep.to_json_value();
            if let Err(e) = schema::validate_toric(&v) {
                return internal_error(&format!("report failed schema validation: {e}"));
            }
            emit(&serde_json::to_string_pretty(&v).unwrap());
            ExitCode::SUCCESS
        }
        Err(e) => internal_error(&e.to_string()),
    }
}
