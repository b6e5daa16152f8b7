use clap::{Args, Parser, Subcommand};
use std::io::{BufRead, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use wcospec_core::document::{self, Operator, OperatorSpec, Profile, ReportDocument, PROFILE_ENV};
use wcospec_core::moebius::Rationality;
use wcospec_core::polydisc::check_independence;
use wcospec_core::plot::{self, PlotOptions, Window};
use wcospec_core::spectra::SpectrumReport;
use wcospec_core::{Error, Result};

#[derive(Parser)]
#[command(name = "wcospec", version, about = "Spectra of weighted composition operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the class, fixed points and multipliers of the spec's map.
    ClassifyMap {
        #[command(flatten)]
        input: SpecArgs,
        /// Print JSON instead of a summary line.
        #[arg(long)]
        json: bool,
    },
    /// Compute the seven spectra and write a report document.
    Analyze {
        #[command(flatten)]
        input: SpecArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Analyze, then check every radius against the cocycle oracle.
    Verify {
        #[command(flatten)]
        input: SpecArgs,
        #[command(flatten)]
        oracle: OracleArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Render a report document as SVG.
    Plot {
        /// Report document (or bare report) JSON; `-` for stdin.
        report: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// x_min,x_max,y_min,y_max
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        window: Option<Vec<f64>>,
        /// Grid points per side for sampled regions.
        #[arg(long, default_value_t = 121)]
        resolution: usize,
        /// Spectrum to draw (repeatable): sigma, sigma_ap, sigma_usf, sigma_lsf, sigma_sf, sigma_f, sigma_w.
        #[arg(long = "spectrum")]
        spectra: Vec<String>,
    },
    /// Newline-delimited specs in, newline-delimited report documents out.
    Batch {
        /// Input file; `-` or absent for stdin.
        input: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Run the oracle checks for every spec.
        #[arg(long)]
        verify: bool,
        #[arg(long, env = PROFILE_ENV, default_value = "default")]
        profile: String,
    },
}

#[derive(Args)]
struct SpecArgs {
    /// Operator spec JSON; `-` for stdin.
    spec: PathBuf,
    /// Tolerance profile: default, strict, loose.
    #[arg(long, env = PROFILE_ENV, default_value = "default")]
    profile: String,
    /// Treat the rotation multiplier as a root of unity of this order.
    #[arg(long, value_name = "M", conflicts_with = "declare_irrational")]
    declare_rational: Option<u32>,
    #[arg(long)]
    declare_irrational: bool,
}

#[derive(Args)]
struct OracleArgs {
    /// Cocycle length (default picked from the map class).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    sample_grid: Option<usize>,
    #[arg(long)]
    eps: Option<f64>,
    /// Branch-and-bound cell budget.
    #[arg(long)]
    budget: Option<usize>,
}

fn read_input(path: &PathBuf) -> Result<String> {
    let mut s = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Schema(format!("stdin: {e}")))?;
    } else {
        s = std::fs::read_to_string(path).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
    }
    Ok(s)
}

fn write_output(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Invalid(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Error::Invalid(format!("stdout: {e}")))
        }
    }
}

fn load_spec(args: &SpecArgs) -> Result<OperatorSpec> {
    let text = read_input(&args.spec)?;
    let mut spec = OperatorSpec::parse_with(&text, Profile::parse(&args.profile)?)?;
    if let Some(m) = args.declare_rational {
        spec.options.disc.rationality = Rationality::DeclareRational(m);
    }
    if args.declare_irrational {
        spec.options.disc.rationality = Rationality::DeclareIrrational;
    }
    Ok(spec)
}

fn classify_map(args: &SpecArgs, json: bool) -> Result<()> {
    let spec = load_spec(args)?;
    let line = if json {
        match spec.build()? {
            Operator::Disc { map, .. } => {
                let class = map.classify_with(&spec.options.disc.classify())?;
                let fixed = if map.is_identity(spec.options.disc.tol) {
                    Vec::new()
                } else {
                    map.fixed_points()?
                };
                serde_json::json!({ "class": class, "fixed_points": fixed })
            }
            Operator::Polydisc { rotation, .. } => {
                let indep = check_independence(&rotation, spec.options.polydisc.q_max);
                serde_json::json!({ "rotation": rotation, "independence": indep })
            }
            Operator::Endomorphism { map, .. } => serde_json::json!({ "blaschke": map }),
        }
        .to_string()
    } else {
        document::classify_summary(&spec)?
    };
    write_output(None, &format!("{line}\n"))
}

fn report_summary(doc: &ReportDocument) {
    let mut err = std::io::stderr().lock();
    let _ = writeln!(err, "{}: ρ = {}, ρ_min = {}", doc.report.case_tag, doc.report.rho, doc.report.rho_min);
    let cited = doc.report.cited.iter().filter(|c| !doc.checks.contains(c));
    for c in doc.checks.iter().chain(cited) {
        let v = if c.is_ok() { "OK" } else { "FLAG" };
        let _ = writeln!(
            err,
            "  {v:4} {}: {} vs [{}, {}]",
            c.name, c.closed_form, c.oracle_interval[0], c.oracle_interval[1]
        );
    }
}

fn run_plot(report: &PathBuf, output: &PathBuf, window: Option<Vec<f64>>, resolution: usize, spectra: Vec<String>) -> Result<()> {
    let text = read_input(report)?;
    let report: SpectrumReport = match serde_json::from_str::<ReportDocument>(&text) {
        Ok(doc) => doc.report,
        Err(_) => serde_json::from_str(&text).map_err(|e| Error::Schema(format!("not a report: {e}")))?,
    };
    let window = match window {
        Some(w) if w.len() == 4 => Some(Window::new(w[0], w[1], w[2], w[3])?),
        Some(w) => return Err(Error::Schema(format!("--window takes 4 numbers, got {}", w.len()))),
        None => None,
    };
    let opts = PlotOptions {
        window,
        resolution,
        spectra,
        ..PlotOptions::default()
    };
    let p = plot::render(&report, &opts)?;
    for w in &p.warnings {
        eprintln!("warning: {w}");
    }
    write_output(Some(output), &p.svg)
}

fn batch(input: Option<PathBuf>, output: Option<PathBuf>, verify: bool, profile: &str) -> Result<i32> {
    let profile = Profile::parse(profile)?;
    let reader: Box<dyn BufRead> = match input {
        Some(p) if p.as_os_str() != "-" => Box::new(std::io::BufReader::new(
            std::fs::File::open(&p).map_err(|e| Error::Schema(format!("{}: {e}", p.display())))?,
        )),
        _ => Box::new(std::io::BufReader::new(std::io::stdin())),
    };
    let mut out = String::new();
    let mut code = 0;
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::Schema(format!("line {}: {e}", i + 1)))?;
        if line.trim().is_empty() {
            continue;
        }
        let result = OperatorSpec::parse_with(&line, profile).and_then(|spec| {
            if verify {
                document::verify(&spec)
            } else {
                document::analyze(&spec)
            }
        });
        match result {
            Ok(doc) => out.push_str(&serde_json::to_string(&doc).expect("serialize")),
            Err(e) => {
                code = code.max(e.exit_code());
                out.push_str(
                    &serde_json::json!({"line": i + 1, "error": {"code": e.exit_code(), "message": e.to_string()}})
                        .to_string(),
                );
            }
        }
        out.push('\n');
    }
    write_output(output.as_ref(), &out)?;
    Ok(code)
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::ClassifyMap { input, json } => classify_map(&input, json).map(|_| 0),
        Command::Analyze { input, output } => {
            let spec = load_spec(&input)?;
            let doc = document::analyze(&spec)?;
            report_summary(&doc);
            write_output(output.as_ref(), &(doc.to_json() + "\n"))?;
            Ok(0)
        }
        Command::Verify { input, oracle, output } => {
            let mut spec = load_spec(&input)?;
            let o = &mut spec.options.disc.oracle;
            if oracle.n.is_some() {
                o.n = oracle.n;
            }
            if let Some(g) = oracle.sample_grid {
                o.sample_grid = g;
                spec.options.endomorphism.sample_grid = g;
            }
            if let Some(e) = oracle.eps {
                o.eps = e;
                spec.options.endomorphism.eps = e;
            }
            if let Some(b) = oracle.budget {
                o.budget = b;
                spec.options.endomorphism.budget = b;
            }
            let doc = document::verify(&spec)?;
            report_summary(&doc);
            write_output(output.as_ref(), &(doc.to_json() + "\n"))?;
            Ok(0)
        }
        Command::Plot {
            report,
            output,
            window,
            resolution,
            spectra,
        } => run_plot(&report, &output, window, resolution, spectra).map(|_| 0),
        Command::Batch {
            input,
            output,
            verify,
            profile,
        } => batch(input, output, verify, &profile),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            let code = e.exit_code();
            if code == 2 {
                eprintln!("error ({}): {e}", wcospec_core::spectra::NOT_COVERED);
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(code as u8)
        }
    }
}
