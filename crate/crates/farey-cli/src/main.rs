//! Command line for Farey gap statistics: sequence listing, gap
//! extraction, measure queries, support and curve export, verification
//! suites. Machine output goes to stdout, diagnostics to stderr; exit
//! code 2 flags argument or domain errors, 1 failed checks or IO.

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;

use farey_gaps::{
    curve_catalog, curve_eval, curves_for_cell, farey_sequence, gap_tuples, measure_box,
    measure_box_mc, run_suite, support_points, BoxSpec, Error, Rational, SequenceParams,
    DEFAULT_MC_SAMPLES, DEFAULT_MC_SEED, DEFAULT_TOL, PHI_SCALE, SUITES,
};

#[derive(Parser)]
#[command(name = "farey", about = "Farey fraction gap statistics", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the Farey sequence of the given order
    List {
        #[arg(long)]
        q: u64,
        /// closed subinterval of [0,1] as two fractions, e.g. 1/3,2/3
        #[arg(long)]
        interval: Option<String>,
        #[arg(long, default_value = "csv", value_parser = ["csv", "json"])]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print normalized gap windows as CSV
    Gaps {
        #[arg(long)]
        q: u64,
        /// gaps per window
        #[arg(long, default_value_t = 1)]
        h: usize,
        #[arg(long)]
        interval: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the limiting measure of a box
    Measure {
        /// flat list lo,hi per axis; "inf" allowed as hi
        #[arg(long = "box")]
        box_spec: String,
        /// quad (adaptive subdivision) or mc (Monte Carlo)
        #[arg(long, default_value = "quad", value_parser = ["quad", "mc"])]
        method: String,
        /// area tolerance for quad
        #[arg(long)]
        tol: Option<f64>,
        /// sample count for mc
        #[arg(long)]
        samples: Option<u64>,
        /// RNG seed for mc
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Export the support point cloud of the pair distribution
    Support {
        /// largest cell index per axis
        #[arg(long, default_value_t = 40)]
        kmax: u32,
        /// target points per cell
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// csv or svg; inferred from --out extension when omitted
        #[arg(long)]
        format: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export boundary curves of the support as CSV
    Curves {
        /// cell selector "k,l", or "all" for the whole catalog
        #[arg(long)]
        rows: String,
        /// points per curve
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named verification suite
    Verify {
        #[arg(long)]
        suite: String,
        /// sweep cap where the suite has one
        #[arg(long)]
        max: Option<u64>,
    },
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    if let Ok(v) = std::env::var("FAREY_THREADS") {
        match v.parse::<usize>() {
            Ok(n) if n >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("FAREY_THREADS must be a positive integer, got {v:?}");
                return 2;
            }
        }
    }
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::List { q, interval, format, out } => cmd_list(q, interval.as_deref(), &format, out),
        Cmd::Gaps { q, h, interval, out } => cmd_gaps(q, h, interval.as_deref(), out),
        Cmd::Measure { box_spec, method, tol, samples, seed } => {
            cmd_measure(&box_spec, &method, tol, samples, seed)
        }
        Cmd::Support { kmax, samples, format, out } => {
            cmd_support(kmax, samples, format.as_deref(), out)
        }
        Cmd::Curves { rows, samples, out } => cmd_curves(&rows, samples, out),
        Cmd::Verify { suite, max } => return cmd_verify(&suite, max),
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Internal(_) => 1,
        _ => 2,
    }
}

fn parse_rational(s: &str) -> Result<Rational, Error> {
    let bad = || Error::InvalidArgument(format!("cannot parse {s:?} as a fraction"));
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d <= 0 {
            return Err(Error::InvalidArgument(format!("denominator in {s:?} must be positive")));
        }
        Ok(Rational::new(n, d))
    } else {
        let n: i64 = s.trim().parse().map_err(|_| bad())?;
        Ok(Rational::from_integer(n))
    }
}

fn parse_interval(s: Option<&str>) -> Result<(Rational, Rational), Error> {
    match s {
        None => Ok((Rational::new(0, 1), Rational::new(1, 1))),
        Some(s) => {
            let (lo, hi) = s.split_once(',').ok_or_else(|| {
                Error::InvalidArgument(format!("interval {s:?} must be lo,hi"))
            })?;
            Ok((parse_rational(lo)?, parse_rational(hi)?))
        }
    }
}

fn parse_box(s: &str) -> Result<BoxSpec, Error> {
    let tokens: Vec<&str> = s.split(',').map(str::trim).collect();
    if tokens.len() < 2 || tokens.len() % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "box {s:?} must be a flat list of lo,hi pairs"
        )));
    }
    let mut axes = Vec::with_capacity(tokens.len() / 2);
    for pair in tokens.chunks(2) {
        let lo: f64 = pair[0]
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad box endpoint {:?}", pair[0])))?;
        let hi = if pair[1].eq_ignore_ascii_case("inf") {
            None
        } else {
            Some(pair[1].parse::<f64>().map_err(|_| {
                Error::InvalidArgument(format!("bad box endpoint {:?}", pair[1]))
            })?)
        };
        axes.push((lo, hi));
    }
    BoxSpec::new(axes)
}

/// Write to stdout, treating a closed pipe (e.g. `farey gaps | head`) as a
/// normal exit instead of a panic or an error.
fn write_stdout(content: &str) -> Result<(), Error> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(content.as_bytes()).and_then(|_| out.flush()) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => std::process::exit(0),
        Err(e) => Err(Error::Internal(e.to_string())),
    }
}

fn emit(out: Option<PathBuf>, content: &str) -> Result<(), Error> {
    match out {
        None => write_stdout(content),
        Some(path) => std::fs::write(&path, content)
            .map_err(|e| Error::Internal(format!("cannot write {}: {e}", path.display()))),
    }
}

#[derive(Serialize)]
struct ListRow {
    index: u64,
    numerator: u64,
    denominator: u64,
    value: f64,
}

fn cmd_list(
    q: u64,
    interval: Option<&str>,
    format: &str,
    out: Option<PathBuf>,
) -> Result<(), Error> {
    let (lo, hi) = parse_interval(interval)?;
    let params = SequenceParams::new(q, lo, hi)?;
    let rows: Vec<ListRow> = farey_sequence(params)?
        .enumerate()
        .map(|(i, f)| ListRow {
            index: i as u64 + 1,
            numerator: f.numer(),
            denominator: f.denom(),
            value: f.value(),
        })
        .collect();
    let content = match format {
        "json" => {
            let mut s = serde_json::to_string(&rows).map_err(|e| Error::Internal(e.to_string()))?;
            s.push('\n');
            s
        }
        _ => {
            let mut s = String::from("index,numerator,denominator,value\n");
            for r in &rows {
                s.push_str(&format!(
                    "{},{},{},{:.16e}\n",
                    r.index, r.numerator, r.denominator, r.value
                ));
            }
            s
        }
    };
    emit(out, &content)
}

fn cmd_gaps(q: u64, h: usize, interval: Option<&str>, out: Option<PathBuf>) -> Result<(), Error> {
    let (lo, hi) = parse_interval(interval)?;
    let params = SequenceParams::new(q, lo, hi)?;
    let mut s = String::from("j");
    for i in 1..=h {
        s.push_str(&format!(",g{i}"));
    }
    s.push('\n');
    for tuple in gap_tuples(params, h)? {
        s.push_str(&tuple.start_index.to_string());
        for v in &tuple.values {
            s.push_str(&format!(",{v:.16e}"));
        }
        s.push('\n');
    }
    emit(out, &s)
}

#[derive(Serialize)]
struct MeasureOut<'a> {
    value: f64,
    error_bound: f64,
    method: &'a str,
    cells_visited: u64,
}

fn cmd_measure(
    box_spec: &str,
    method: &str,
    tol: Option<f64>,
    samples: Option<u64>,
    seed: Option<u64>,
) -> Result<(), Error> {
    let spec = parse_box(box_spec)?;
    let result = match method {
        "mc" => measure_box_mc(
            &spec,
            samples.unwrap_or(DEFAULT_MC_SAMPLES),
            seed.unwrap_or(DEFAULT_MC_SEED),
        )?,
        _ => measure_box(&spec, tol.unwrap_or(DEFAULT_TOL))?,
    };
    let line = serde_json::to_string(&MeasureOut {
        value: result.value,
        error_bound: result.error_bound,
        method: result.method.as_str(),
        cells_visited: result.cells_visited,
    })
    .map_err(|e| Error::Internal(e.to_string()))?;
    write_stdout(&format!("{line}\n"))
}

fn cmd_support(
    kmax: u32,
    samples: usize,
    format: Option<&str>,
    out: Option<PathBuf>,
) -> Result<(), Error> {
    let format = match (format, &out) {
        (Some(f), _) => f.to_string(),
        (None, Some(p)) if p.extension().is_some_and(|e| e == "svg") => "svg".into(),
        _ => "csv".into(),
    };
    if format != "csv" && format != "svg" {
        return Err(Error::InvalidArgument(format!("unknown format {format:?}")));
    }
    let cloud = support_points(2, kmax, samples)?;
    let content = if format == "svg" {
        let mut s = String::from(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"500\" height=\"500\" \
             viewBox=\"0 0 500 500\">\n",
        );
        // dashed guides at the support minimum 6/pi^2 on both axes
        let guide = 100.0 * 2.0 * PHI_SCALE;
        s.push_str(&format!(
            "<line x1=\"{guide:.2}\" y1=\"0\" x2=\"{guide:.2}\" y2=\"500\" stroke=\"#999\" \
             stroke-dasharray=\"4 3\"/>\n",
        ));
        s.push_str(&format!(
            "<line x1=\"0\" y1=\"{:.2}\" x2=\"500\" y2=\"{:.2}\" stroke=\"#999\" \
             stroke-dasharray=\"4 3\"/>\n",
            500.0 - guide,
            500.0 - guide
        ));
        s.push_str(&format!(
            "<text x=\"{:.2}\" y=\"498\" font-size=\"10\" fill=\"#555\">6/&#960;&#178;</text>\n",
            guide + 3.0
        ));
        for p in cloud.iter() {
            let (cx, cy) = (100.0 * p[0], 500.0 - 100.0 * p[1]);
            s.push_str(&format!("<circle cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"1\"/>\n"));
        }
        s.push_str("</svg>\n");
        s
    } else {
        let mut s = String::from("x,y\n");
        for p in cloud.iter() {
            s.push_str(&format!("{:.16e},{:.16e}\n", p[0], p[1]));
        }
        s
    };
    emit(out, &content)
}

fn cmd_curves(rows: &str, samples: usize, out: Option<PathBuf>) -> Result<(), Error> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive".into()));
    }
    let specs = if rows == "all" {
        curve_catalog()
    } else {
        let (k, l) = rows.split_once(',').ok_or_else(|| {
            Error::InvalidArgument(format!("row selector {rows:?} must be k,l or \"all\""))
        })?;
        let parse = |t: &str| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| Error::InvalidArgument(format!("bad cell index {t:?}")))
        };
        curves_for_cell(parse(k)?, parse(l)?)?
    };
    let mut s = String::from("k,l,edge_index,t,X,Y\n");
    for (edge_index, spec) in specs.iter().enumerate() {
        let t0 = spec.t_domain.0;
        let t1 = spec.t_domain.1.unwrap_or(1e4);
        for j in 0..samples {
            let frac = (j as f64 + 0.5) / samples as f64;
            let t = t0 * (t1 / t0).powf(frac);
            let (x, y) = curve_eval(spec, t)?;
            s.push_str(&format!(
                "{},{},{edge_index},{t:.16e},{x:.16e},{y:.16e}\n",
                spec.cell.0, spec.cell.1
            ));
        }
    }
    emit(out, &s)
}

fn cmd_verify(suite: &str, max: Option<u64>) -> i32 {
    match run_suite(suite, max) {
        Err(e) => {
            eprintln!("error: {e}");
            eprintln!("available suites: {}", SUITES.join(", "));
            exit_code(&e)
        }
        Ok(checks) => {
            let mut all_passed = true;
            for c in &checks {
                let tag = if c.passed { "PASS" } else { "FAIL" };
                if write_stdout(&format!("[{tag}] {}: {}\n", c.name, c.detail)).is_err() {
                    return 1;
                }
                all_passed &= c.passed;
            }
            if all_passed {
                0
            } else {
                1
            }
        }
    }
}
