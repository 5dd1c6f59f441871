use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tandeg::artin_schreier::{build_main_with, ASBuildConfig, ASField};
use tandeg::constructors::{
    default_automorphisms, esteves_homma, esteves_homma_warning, theorem1, verify_all, Theorem1Params, VerifyConfig,
    CHECK_NAMES, MAX_DEGREE,
};
use tandeg::report::{
    parse_coeff_list, parse_curve, sweep, sweep_csv, sweep_json, write_curve, ASSpec, CurveInput, SweepConfig,
    VerificationReport, Verdict,
};
use tandeg::vspace::Automorphism;
use tandeg::{make_field, Error, FieldSpec, Poly};

const EXIT_FAIL: u8 = 1;
const EXIT_HYPOTHESIS: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(name = "tandeg", version, about = "Build and verify tangentially degenerate curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a curve file.
    Construct {
        #[command(subcommand)]
        kind: ConstructKind,
    },
    /// Verify a curve file and write a JSON report.
    Verify(VerifyArgs),
    /// Tabulate the translate family over a range of parameters.
    Sweep(SweepArgs),
}

#[derive(Subcommand)]
enum ConstructKind {
    Theorem1 {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    EstevesHomma {
        #[arg(long)]
        p: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Artin–Schreier curve `x^q − x = g(y)` over `F_q`.
    AsMain {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        /// Coefficients of `g`, low degree first.
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        /// Integer code of α in `F_q`.
        #[arg(long, default_value_t = 1)]
        alpha: u64,
        #[arg(long = "N", default_value_t = 3)]
        n_dim: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Curve from explicit affine coordinates over `F_p`.
    Affine {
        #[arg(long)]
        p: u64,
        /// One coefficient list per coordinate, low degree first.
        #[arg(long = "coord", required = true, allow_hyphen_values = true)]
        coords: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(short, long)]
    input: PathBuf,
    /// Comma-separated check names.
    #[arg(long, value_delimiter = ',')]
    checks: Option<Vec<String>>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    ext_deg: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2000)]
    symbolic_cap: usize,
    /// Translation amounts (integer codes) to test for non-classicality.
    #[arg(long = "translate")]
    translate: Vec<u64>,
    /// Report path; stdout when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Primes, e.g. `3,5` or `3-7`.
    #[arg(long, default_value = "3,5")]
    p: String,
    /// Exponents e with q = p^e.
    #[arg(long, default_value = "1")]
    q_exp: String,
    #[arg(long, default_value = "1-2")]
    n: String,
    /// Triples above this degree are listed but not run.
    #[arg(long, default_value_t = 1 << 20)]
    max_degree: u64,
    #[arg(long, default_value_t = 50)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2000)]
    symbolic_cap: usize,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::Parse(_) => EXIT_IO,
            _ => EXIT_HYPOTHESIS,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_IO,
        message: format!("{}: {e}", path.display()),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| io_failure(path, e))
}

/// `"3,5,7"`, `"3-7"` or a mix.
fn parse_range(text: &str) -> Result<Vec<u64>, Failure> {
    let bad = || Failure {
        code: EXIT_IO,
        message: format!("bad range {text:?}"),
    };
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match part.split_once('-') {
            Some((a, b)) => {
                let a: u64 = a.trim().parse().map_err(|_| bad())?;
                let b: u64 = b.trim().parse().map_err(|_| bad())?;
                if b < a || b - a > 10_000 {
                    return Err(bad());
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| bad())?),
        }
    }
    Ok(out)
}

fn field_codes(k: &FieldSpec, text: &str) -> Result<Poly, Failure> {
    let v = parse_coeff_list(text)?;
    Ok(Poly::from_i64s(k, &v))
}

fn construct(kind: ConstructKind) -> Result<(), Failure> {
    let (input, default_name, output) = match kind {
        ConstructKind::Theorem1 { p, q, n, output } => {
            let c = theorem1(&Theorem1Params::new(p, q, n)?)?;
            (CurveInput::Param(c), format!("theorem1_p{p}_q{q}_n{n}.json"), output)
        }
        ConstructKind::EstevesHomma { p, output } => {
            if let Some(w) = esteves_homma_warning(p) {
                eprintln!("warning: {w}");
            }
            (CurveInput::Param(esteves_homma(p)?), format!("esteves_homma_p{p}.json"), output)
        }
        ConstructKind::AsMain {
            p,
            q,
            g,
            alpha,
            n_dim,
            output,
        } => {
            let mut m = 0u32;
            let mut r = q;
            while r > 1 && r % p == 0 {
                r /= p;
                m += 1;
            }
            if r != 1 || m == 0 {
                return Err(Error::HypothesisViolation(format!("q = {q} is not a power of p = {p}")).into());
            }
            let k = make_field(p, m)?;
            let g = field_codes(&k, &g)?;
            if alpha >= k.size() {
                return Err(Error::HypothesisViolation(format!("alpha code {alpha} is outside F_{q}")).into());
            }
            let spec = ASSpec {
                field: ASField::new(&k, q, g)?,
                alpha: k.elem(k.from_code(alpha)),
                n_dim,
            };
            // Reject parameters the build would refuse.
            tandeg::artin_schreier::main_coordinates(&spec.field, &spec.alpha, spec.n_dim, &[])?;
            (CurveInput::ArtinSchreier(spec), format!("as_main_p{p}_q{q}.json"), output)
        }
        ConstructKind::Affine { p, coords, output } => {
            let k = make_field(p, 1)?;
            let polys = coords.iter().map(|s| field_codes(&k, s)).collect::<Result<Vec<_>, _>>()?;
            let c = tandeg::curve::ParamCurve::from_affine(polys)?;
            if c.degree() as u64 > MAX_DEGREE {
                return Err(Error::UnsupportedShape("degree too large".into()).into());
            }
            (CurveInput::Param(c), format!("affine_p{p}.json"), output)
        }
    };
    let path = output.unwrap_or_else(|| PathBuf::from(default_name));
    write_file(&path, &write_curve(&input))?;
    let degree = match &input {
        CurveInput::Param(c) => c.degree().to_string(),
        CurveInput::ArtinSchreier(s) => format!("function field of degree {} over k(y)", s.field.q()),
    };
    println!("{} degree {}", path.display(), degree);
    Ok(())
}

fn verify(args: VerifyArgs) -> Result<Verdict, Failure> {
    let text = fs::read_to_string(&args.input).map_err(|e| io_failure(&args.input, e))?;
    let input = parse_curve(&text)?;
    if let Some(names) = &args.checks {
        for n in names {
            if !CHECK_NAMES.contains(&n.as_str()) {
                return Err(Failure {
                    code: EXIT_IO,
                    message: format!("unknown check {n:?}; known: {}", CHECK_NAMES.join(", ")),
                });
            }
        }
    }
    let cert = match input {
        CurveInput::Param(c) => {
            let cfg = VerifyConfig {
                checks: args.checks,
                samples: args.samples.unwrap_or(50),
                ext_deg: args.ext_deg,
                seed: args.seed,
                symbolic_cap: args.symbolic_cap,
            };
            let k = c.field();
            let sigmas: Vec<Automorphism> = if args.translate.is_empty() {
                default_automorphisms(&c)
            } else {
                args.translate
                    .iter()
                    .map(|&a| {
                        if a >= k.size() {
                            Err(Error::Parse(format!("translation code {a} is outside the field")))
                        } else {
                            Ok(Automorphism::translation(&k.elem(k.from_code(a))))
                        }
                    })
                    .collect::<Result<_, _>>()?
            };
            verify_all(&c, &sigmas, &cfg)
        }
        CurveInput::ArtinSchreier(s) => {
            let mut cfg = ASBuildConfig {
                seed: args.seed,
                ..ASBuildConfig::default()
            };
            if let Some(e) = args.ext_deg {
                cfg.ext_deg = e;
            }
            if let Some(n) = args.samples {
                cfg.lines = n;
            }
            build_main_with(&s.field, &s.alpha, s.n_dim, &[], &cfg)?
        }
    };
    let report = VerificationReport::from_certificate(cert);
    let json = report.to_json();
    match &args.output {
        Some(path) => write_file(path, &json)?,
        None => print!("{json}"),
    }
    for c in &report.checks {
        eprintln!("{:<22} {}", c.name, serde_json::to_string(&c.result).unwrap_or_default());
    }
    Ok(report.verdict)
}

fn run_sweep(args: SweepArgs) -> Result<(), Failure> {
    let narrow = |v: Vec<u64>| -> Result<Vec<u32>, Failure> {
        v.into_iter()
            .map(|x| {
                u32::try_from(x).map_err(|_| Failure {
                    code: EXIT_IO,
                    message: format!("{x} is out of range"),
                })
            })
            .collect()
    };
    let cfg = SweepConfig {
        primes: parse_range(&args.p)?,
        q_exponents: narrow(parse_range(&args.q_exp)?)?,
        n_values: narrow(parse_range(&args.n)?)?,
        max_degree: args.max_degree,
        verify: VerifyConfig {
            checks: None,
            samples: args.samples,
            ext_deg: None,
            seed: args.seed,
            symbolic_cap: args.symbolic_cap,
        },
    };
    let rows = sweep(&cfg);
    let csv = sweep_csv(&rows)?;
    match &args.csv {
        Some(path) => write_file(path, &csv)?,
        None => print!("{csv}"),
    }
    if let Some(path) = &args.json {
        write_file(path, &sweep_json(&rows))?;
    }
    Ok(())
}

fn init_threads() {
    if let Some(n) = std::env::var("TANDEG_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads();
    let result = match cli.command {
        Command::Construct { kind } => construct(kind).map(|_| 0),
        Command::Verify(args) => verify(args).map(|v| if v == Verdict::Pass { 0 } else { EXIT_FAIL }),
        Command::Sweep(args) => run_sweep(args).map(|_| 0),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
