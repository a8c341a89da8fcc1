//! `stretchlab` command-line driver.
//!
//! Exit status: 0 on success, 1 when a checked inequality fails, 2 on bad
//! input (unreadable files, malformed data, invalid parameters).

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use stretchlab::bounds::{self, BoundParams, BoundRecord};
use stretchlab::graph::{build_gamma_bar, path_type_bound, verify_girth_lemma};
use stretchlab::numtheory::{jacobsthal, jacobsthal_fit};
use stretchlab::penner::{penner_word_check, word_matrix, SignPolicy};
use stretchlab::spectral::{pf_eigen, row_sum_bracket};
use stretchlab::{verify, CurveSystem, IntMatrix, MappingClassWord, Real, SpectralBracket};

#[derive(Parser)]
#[command(name = "stretchlab", version, about = "Stretch factors, girth lemmas and entropy bound tables")]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scalar {
    F32,
    F64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Summary,
    Json,
    Csv,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Perron-Frobenius eigenvalue of a non-negative integer matrix file.
    Pf {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, default_value = "f64")]
        scalar: Scalar,
        /// Also report the row-sum bracket of `A^power`.
        #[arg(long)]
        power: Option<u64>,
        #[arg(long, value_enum, default_value = "summary")]
        format: Format,
    },
    /// Transition matrix and stretch factor of a twist word.
    Penner {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        word: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, default_value = "f64")]
        scalar: Scalar,
        #[arg(long, value_enum, default_value = "summary")]
        format: Format,
    },
    /// The quotient graph for coprime (n, k): girth and path-type lemmas.
    Gamma {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        #[arg(long = "D", default_value_t = bounds::DEFAULT_D)]
        d: u64,
        #[arg(long, value_enum, default_value = "summary")]
        emit: Format,
    },
    /// Jacobsthal function table as CSV.
    Jacobsthal {
        #[arg(long)]
        max_n: u64,
        /// Add ln(n)^2 and j(n)/ln(n)^2 columns and the fitted constant.
        #[arg(long)]
        fit: bool,
    },
    /// Lower and upper bounds on the minimal entropy, one row per (n, g).
    Bounds {
        #[arg(long, conflicts_with_all = ["n_min", "n_max"])]
        n: Option<u64>,
        #[arg(long, default_value_t = 0)]
        n_min: u64,
        #[arg(long, default_value_t = 0)]
        n_max: u64,
        #[arg(long, default_value_t = 2)]
        g_min: u64,
        #[arg(long)]
        g_max: u64,
        #[arg(long = "D", default_value_t = bounds::DEFAULT_D)]
        d: u64,
        #[arg(long = "K", default_value_t = bounds::DEFAULT_K)]
        k: f64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Run every invariant check and write a pass/fail report.
    VerifyAll {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Error carrying its exit status.
struct Failure {
    code: u8,
    message: String,
}

fn bad_input(message: impl ToString) -> Failure {
    Failure { code: 2, message: message.to_string() }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| bad_input(format!("{}: {e}", path.display())))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| bad_input(format!("{}: {e}", path.display())))
}

fn tolerance<F: Real>(tol: Option<f64>) -> Result<F, Failure> {
    match tol {
        None => Ok(F::default_tol()),
        Some(t) if t > 0.0 && t.is_finite() => Ok(F::lit(t)),
        Some(t) => Err(bad_input(format!("tolerance {t} must be positive and finite"))),
    }
}

fn bracket_json<F: Real + Serialize>(b: &SpectralBracket<F>) -> serde_json::Value {
    json!({
        "estimate": b.estimate,
        "lower": b.lower,
        "upper": b.upper,
        "power": b.power,
        "iterations": b.iterations,
        "eigenvector": b.eigenvector,
    })
}

fn bracket_summary<F: Real>(b: &SpectralBracket<F>) -> String {
    format!(
        "lambda = {}\nbracket = [{}, {}] (row sums of A^{})\niterations = {}\n",
        b.estimate, b.lower, b.upper, b.power, b.iterations
    )
}

fn pf<F: Real + Serialize>(a: &IntMatrix, tol: Option<f64>, power: Option<u64>, format: Format) -> Result<String, Failure> {
    let b = pf_eigen::<F>(a, tolerance::<F>(tol)?).map_err(|e| bad_input(format!("primitivity required: {e}")))?;
    let extra = power.map(|k| row_sum_bracket::<F>(a, k));
    Ok(match format {
        Format::Json => {
            let mut v = bracket_json(&b);
            if let Some(e) = &extra {
                v["power_bracket"] = json!({ "power": e.power, "lower": e.lower, "upper": e.upper });
            }
            format!("{v:#}\n")
        }
        Format::Summary => {
            let mut s = bracket_summary(&b);
            if let Some(e) = extra {
                s += &format!("bracket of A^{} = [{}, {}]\n", e.power, e.lower, e.upper);
            }
            s
        }
        _ => return Err(bad_input("pf supports --format summary or json")),
    })
}

fn penner<F: Real + Serialize>(
    sys: &CurveSystem,
    word: &MappingClassWord,
    tol: Option<f64>,
    format: Format,
) -> Result<(String, bool), Failure> {
    let check = penner_word_check(sys, word);
    let m = word_matrix(sys, word, SignPolicy::Enforce).map_err(bad_input)?;
    let b = pf_eigen::<F>(&m, tolerance::<F>(tol)?);
    let ok = check.passed() && b.is_ok();
    let out = match format {
        Format::Json => {
            let mut v = json!({
                "matrix": m.rows().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "certifying_iterate": check.certifying_iterate(),
                "missing_alpha": check.missing_alpha,
                "missing_beta": check.missing_beta,
            });
            match &b {
                Ok(b) => v["dilatation"] = bracket_json(b),
                Err(e) => v["error"] = json!(e.to_string()),
            }
            format!("{v:#}\n")
        }
        Format::Summary => {
            let mut s = format!("transition matrix:\n{}", m.to_text());
            match check.certifying_iterate() {
                Some(p) => s += &format!("every curve twisted with the right sign in iterate {p}\n"),
                None => s += &format!("curve coverage check failed: {check:?}\n"),
            }
            match &b {
                Ok(b) => s += &bracket_summary(b),
                Err(e) => s += &format!("no stretch factor: {e}\n"),
            }
            s
        }
        _ => return Err(bad_input("penner supports --format summary or json")),
    };
    Ok((out, ok))
}

fn gamma(n: u64, k: u64, d: u64, emit: Format) -> Result<(String, bool), Failure> {
    let gb = build_gamma_bar(n, k).map_err(bad_input)?;
    if emit == Format::Dot {
        return Ok((gb.to_dot(), true));
    }
    let girth = verify_girth_lemma(n, k).map_err(bad_input)?;
    let paths = path_type_bound(n, k, d).map_err(bad_input)?;
    let ok = girth.holds && paths.holds;
    let out = match emit {
        Format::Json => {
            let v = json!({
                "n": n, "k": k, "c": gb.c,
                "vertices": gb.graph.vertex_count(),
                "edges": gb.graph.edge_count(),
                "girth": girth.girth,
                "threshold": format!("{}/7", n * k),
                "girth_holds": girth.holds,
                "predicted_girth": girth.predicted,
                "D": d,
                "path_length": paths.length,
                "unweighted_max": paths.unweighted_max.to_string(),
                "weighted_max": paths.weighted_max.to_string(),
                "path_bound": paths.bound.to_string(),
                "paths_hold": paths.holds,
            });
            format!("{v:#}\n")
        }
        Format::Summary => format!(
            "n = {n}, k = {k}, c = {}\nvertices = {}, edges = {}\ngirth = {}, threshold {}/7, holds = {}\n\
             predicted girth = {}\npaths of length {} with D = {}: unweighted max {}, weighted max {}, bound {}, holds = {}\n",
            gb.c,
            gb.graph.vertex_count(),
            gb.graph.edge_count(),
            girth.girth,
            n * k,
            girth.holds,
            girth.predicted,
            paths.length,
            d,
            paths.unweighted_max,
            paths.weighted_max,
            paths.bound,
            paths.holds,
        ),
        _ => return Err(bad_input("gamma supports --emit summary, json or dot")),
    };
    if !girth.holds {
        eprintln!("girth lemma violated: girth {} <= {}/7", girth.girth, n * k);
    }
    if !paths.holds {
        eprintln!("path-type lemma violated at D = {d}");
    }
    Ok((out, ok))
}

fn csv_text<F: FnOnce(&mut csv::Writer<&mut Vec<u8>>) -> csv::Result<()>>(header: &str, body: F) -> Result<String, Failure> {
    let mut buf = header.as_bytes().to_vec();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        body(&mut w).map_err(bad_input)?;
        w.flush().map_err(bad_input)?;
    }
    Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
}

fn jacobsthal_table(max_n: u64, fit: bool) -> Result<String, Failure> {
    if max_n < 1 {
        return Err(bad_input("--max-n must be at least 1"));
    }
    if !fit {
        return csv_text("# stretchlab jacobsthal\n", |w| {
            w.write_record(["n", "j"])?;
            for n in 1..=max_n {
                w.write_record([n.to_string(), jacobsthal(n).to_string()])?;
            }
            Ok(())
        });
    }
    let (k, rows) = jacobsthal_fit::<f64>(max_n);
    let header = format!("# stretchlab jacobsthal --fit, n >= 3, natural log\n# fitted K' = max j(n)/ln(n)^2 = {k}\n");
    csv_text(&header, |w| {
        w.write_record(["n", "j", "ln_n_sq", "ratio"])?;
        for (n, j, l2) in rows {
            w.write_record([n.to_string(), j.to_string(), l2.to_string(), (j as f64 / l2).to_string()])?;
        }
        Ok(())
    })
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn bounds_output(rows: &[BoundRecord<f64>], params: &BoundParams<f64>, format: Format) -> Result<String, Failure> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(rows).expect("serializable") + "\n"),
        Format::Csv => {
            let header = format!(
                "# stretchlab bounds D={} E={} K={} C={} log=natural\n",
                params.d,
                bounds::path_constant(params.d),
                params.k,
                params.c()
            );
            csv_text(&header, |w| {
                w.write_record(["n", "g", "lower", "upper", "upper_provenance", "D", "E", "K", "C", "reference_upper"])?;
                for r in rows {
                    w.write_record([
                        r.n.to_string(),
                        r.g.to_string(),
                        r.lower.to_string(),
                        opt(r.upper),
                        r.upper_provenance.as_str().to_string(),
                        params.d.to_string(),
                        bounds::path_constant(params.d).to_string(),
                        params.k.to_string(),
                        params.c().to_string(),
                        opt(r.reference_upper),
                    ])?;
                }
                Ok(())
            })
        }
        _ => Err(bad_input("bounds supports --format csv or json")),
    }
}

fn run(cli: Cli) -> Result<(String, bool), Failure> {
    match cli.command {
        Command::Pf { matrix, tol, scalar, power, format } => {
            let a: IntMatrix = read(&matrix)?.parse().map_err(|e| bad_input(format!("{}: {e}", matrix.display())))?;
            let out = match scalar {
                Scalar::F64 => pf::<f64>(&a, tol, power, format)?,
                Scalar::F32 => pf::<f32>(&a, tol, power, format)?,
            };
            Ok((out, true))
        }
        Command::Penner { system, word, tol, scalar, format } => {
            let sys: CurveSystem = read_json(&system)?;
            let w: MappingClassWord = read_json(&word)?;
            match scalar {
                Scalar::F64 => penner::<f64>(&sys, &w, tol, format),
                Scalar::F32 => penner::<f32>(&sys, &w, tol, format),
            }
        }
        Command::Gamma { n, k, d, emit } => gamma(n, k, d, emit),
        Command::Jacobsthal { max_n, fit } => Ok((jacobsthal_table(max_n, fit)?, true)),
        Command::Bounds { n, n_min, n_max, g_min, g_max, d, k, format } => {
            let (lo, hi) = n.map_or((n_min, n_max), |n| (n, n));
            if d < 1 || !(k > 0.0 && k.is_finite()) {
                return Err(bad_input("--D must be at least 1 and --K positive"));
            }
            let params = BoundParams { d, k };
            let rows = bounds::bounds_table(g_min..=g_max, lo..=hi, &params);
            let ok = rows.iter().all(|r| r.upper.is_none_or(|u| u >= r.lower));
            Ok((bounds_output(&rows, &params, format)?, ok))
        }
        Command::VerifyAll { seed } => {
            let report = verify::run_all(seed);
            for o in report.outcomes.iter().filter(|o| !o.passed) {
                eprintln!("check {} ({}) failed: {}", o.id, o.name, o.detail);
            }
            Ok((report.render(), report.passed()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.output.clone();
    let (text, ok) = match run(cli) {
        Ok(r) => r,
        Err(f) => {
            eprintln!("error: {}", f.message);
            return ExitCode::from(f.code);
        }
    };
    let written = match &output {
        Some(path) => fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
