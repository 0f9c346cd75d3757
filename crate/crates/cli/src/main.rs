use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use tubal::algebra::{frobenius_norm, mask_project};
use tubal::completion::{rmse, tlnm_tqr, tlnm_tqr_with_truth, CompletionConfig, CompletionReport};
use tubal::factorization::{ctsvd_qr_with, CtsvdOptions};
use tubal::synth::{gen_mask, synth_lowrank, SynthSpec};
use tubal::{io, verify, Error};

/// Low-tubal-rank tensor factorization and completion.
#[derive(Parser, Debug)]
#[command(name = "tubal", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a random tensor of given tubal rank.
    Synth(SynthArgs),
    /// Generate a random observation mask.
    Mask(MaskArgs),
    /// Factor a tensor with CTSVD-QR.
    Decompose(DecomposeArgs),
    /// Recover missing entries with TLNM-TQR.
    Complete(CompleteArgs),
    /// Compare two tensors.
    Metrics(MetricsArgs),
    /// Convert between images, frame directories and TNS3.
    Convert(ConvertArgs),
    /// Run the oracle cross-check suite.
    Verify,
}

#[derive(Args, Debug)]
struct SynthArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: usize,
    #[arg(long)]
    tubal_rank: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct MaskArgs {
    /// Dimensions as `n1,n2,n3`.
    #[arg(long, value_parser = parse_dims)]
    dims: (usize, usize, usize),
    #[arg(long)]
    miss_rate: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct DecomposeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    rank: usize,
    #[arg(long, default_value_t = 30)]
    iters: usize,
    #[arg(long)]
    out_l: Option<PathBuf>,
    #[arg(long)]
    out_d: Option<PathBuf>,
    #[arg(long)]
    out_r: Option<PathBuf>,
    /// CSV with columns iter,rmse,elapsed_ms.
    #[arg(long)]
    diagnostics: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("observed").required(true).args(["mask", "miss_rate"])))]
struct CompleteArgs {
    #[arg(long)]
    input: PathBuf,
    /// MSK3 file of observed entries.
    #[arg(long)]
    mask: Option<PathBuf>,
    /// Generate the mask instead, with this miss rate and `--seed`.
    #[arg(long)]
    miss_rate: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 11)]
    rank: usize,
    #[arg(long, default_value_t = 1e-2)]
    mu: f64,
    #[arg(long, default_value_t = 1.5)]
    rho: f64,
    /// Squared-residual stopping threshold; defaults to 1e-7 per entry.
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, default_value_t = 100)]
    max_iters: usize,
    #[arg(long)]
    out: PathBuf,
    /// CSV with columns iter,residual,mu,rmse_vs_truth,elapsed_ms.
    #[arg(long)]
    diagnostics: Option<PathBuf>,
    /// Ground truth for the rmse_vs_truth column.
    #[arg(long)]
    truth: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MetricsArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("mode").required(true).args(["from_image", "from_frames", "to_image"])))]
struct ConvertArgs {
    /// PGM/PPM image to read.
    #[arg(long, requires = "out")]
    from_image: Option<PathBuf>,
    /// Directory of PGM frames to read.
    #[arg(long, requires = "out")]
    from_frames: Option<PathBuf>,
    /// PGM/PPM image to write from `--input`.
    #[arg(long, requires = "input")]
    to_image: Option<PathBuf>,
    /// TNS3 input for `--to-image`.
    #[arg(long)]
    input: Option<PathBuf>,
    /// TNS3 output for `--from-image` and `--from-frames`.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_dims(s: &str) -> Result<(usize, usize, usize), String> {
    let parts = s
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    match parts[..] {
        [a, b, c] => Ok((a, b, c)),
        _ => Err(format!("expected n1,n2,n3, got {s:?}")),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) | Error::Format(_) | Error::EmptyDir(_) => 2,
        Error::Numerical(_) | Error::SymmetryViolation { .. } => 3,
        _ => 1,
    }
}

fn create(path: &Path) -> Result<BufWriter<File>, Error> {
    Ok(BufWriter::new(File::create(path)?))
}

fn run_decompose(args: DecomposeArgs) -> Result<(), Error> {
    let a = io::read_tensor(&args.input)?;
    let opts = CtsvdOptions {
        max_iters: args.iters,
        tol: None,
    };
    let out = ctsvd_qr_with(&a, args.rank, &opts)?;
    if let Some(p) = &args.out_l {
        io::write_tensor(p, &out.factors.l)?;
    }
    if let Some(p) = &args.out_d {
        io::write_tensor(p, &out.factors.d)?;
    }
    if let Some(p) = &args.out_r {
        io::write_tensor(p, &out.factors.rr)?;
    }
    if let Some(p) = &args.diagnostics {
        let mut w = create(p)?;
        writeln!(w, "iter,rmse,elapsed_ms")?;
        for s in &out.trace {
            writeln!(w, "{},{:e},{:.3}", s.iter, s.rmse, s.elapsed_ms)?;
        }
        w.flush()?;
    }
    let last = out.trace.last().map_or(f64::NAN, |s| s.rmse);
    println!("iterations={}", out.trace.len());
    println!("rmse={last:e}");
    Ok(())
}

fn write_completion_csv(path: &Path, report: &CompletionReport) -> Result<(), Error> {
    let mut w = create(path)?;
    writeln!(w, "iter,residual,mu,rmse_vs_truth,elapsed_ms")?;
    for r in &report.trace {
        let truth = r
            .rmse_vs_truth
            .map(|v| format!("{v:e}"))
            .unwrap_or_default();
        writeln!(
            w,
            "{},{:e},{:e},{},{:.3}",
            r.k, r.residual, r.mu, truth, r.elapsed_ms
        )?;
    }
    w.flush()?;
    Ok(())
}

fn run_complete(args: CompleteArgs) -> Result<(), Error> {
    let input = io::read_tensor(&args.input)?;
    let (n1, n2, n3) = input.dims();
    let omega = match (&args.mask, args.miss_rate) {
        (Some(p), _) => io::read_mask(p)?,
        (None, Some(rate)) => gen_mask(n1, n2, n3, rate, args.seed)?,
        (None, None) => unreachable!("clap requires --mask or --miss-rate"),
    };
    let cfg = CompletionConfig {
        rank: args.rank,
        mu0: args.mu,
        rho: args.rho,
        eps: args.eps,
        max_iters: args.max_iters,
        seed: args.seed,
    };
    let m = mask_project(&input, &omega)?;
    let report = match &args.truth {
        Some(p) => tlnm_tqr_with_truth(&m, &omega, &cfg, &io::read_tensor(p)?)?,
        None => tlnm_tqr(&m, &omega, &cfg)?,
    };
    io::write_tensor(&args.out, &report.x)?;
    if let Some(p) = &args.diagnostics {
        write_completion_csv(p, &report)?;
    }
    println!("iterations={}", report.iterations);
    println!("converged={}", report.converged);
    if let Some(r) = report.trace.last() {
        println!("residual={:e}", r.residual);
    }
    Ok(())
}

fn run_metrics(args: MetricsArgs) -> Result<(), Error> {
    let a = io::read_tensor(&args.a)?;
    let b = io::read_tensor(&args.b)?;
    let e = rmse(&a, &b)?;
    let denom = frobenius_norm(&b);
    let rel = if denom > 0.0 {
        frobenius_norm(&a.sub(&b)?) / denom
    } else if e == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    println!("rmse={e}");
    println!("relerr={rel}");
    Ok(())
}

fn run_convert(args: ConvertArgs) -> Result<(), Error> {
    if let (Some(img), Some(out)) = (&args.from_image, &args.out) {
        io::write_tensor(out, &io::read_image(img)?)
    } else if let (Some(dir), Some(out)) = (&args.from_frames, &args.out) {
        io::write_tensor(out, &io::read_frames(dir)?)
    } else if let (Some(img), Some(input)) = (&args.to_image, &args.input) {
        io::write_image(img, &io::read_tensor(input)?)
    } else {
        Err(Error::Config("convert needs a mode and its paths".into()))
    }
}

fn run_verify() -> Result<bool, Error> {
    let checks = verify::run_all();
    let mut ok = true;
    for c in &checks {
        println!(
            "{} {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
        ok &= c.passed;
    }
    Ok(ok)
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Synth(a) => {
            let t = synth_lowrank(SynthSpec {
                m: a.m,
                n: a.n,
                p: a.p,
                r1: a.tubal_rank,
                seed: a.seed,
            })?;
            io::write_tensor(&a.out, &t)?;
        }
        Command::Mask(a) => {
            let (n1, n2, n3) = a.dims;
            io::write_mask(&a.out, &gen_mask(n1, n2, n3, a.miss_rate, a.seed)?)?;
        }
        Command::Decompose(a) => run_decompose(a)?,
        Command::Complete(a) => run_complete(a)?,
        Command::Metrics(a) => run_metrics(a)?,
        Command::Convert(a) => run_convert(a)?,
        Command::Verify => {
            if !run_verify()? {
                return Ok(ExitCode::from(3));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
