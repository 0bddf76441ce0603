use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use cutcert::certificates::{
    approx_fcc_mc_with, approx_mc_fcc_with, verify_certificate, Alg2Constants, BetaCertificate, Certified,
    DEFAULT_VERIFY_TOL,
};
use cutcert::graph::{cut_weight, format_graph_file, parse_graph_file, EdgeWeights, FractionalCutCover, GraphFile, Shore};
use cutcert::instances::{generate, k3_small_edge, GraphKind};
use cutcert::oracles::{fcc_exact, mc_exact_with, FCC_EXACT_MAX_N, MC_EXACT_MAX_N};
use cutcert::par::Execution;
use cutcert::rng::RngStream;
use cutcert::rounding::{approx_fcc_with, Alg1Constants, ShoreSampler};
use cutcert::sdp::solve_gw;
use cutcert::Error;

#[derive(Parser)]
#[command(name = "cutcert", version, about = "Max-cut and fractional cut cover approximations with checkable certificates")]
struct Cli {
    /// Worker threads for sampling (output does not depend on this)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a named graph: complete N | cycle N | path N | hamming-exact A B | hamming A B | small-edge-triangle EPS
    Gen {
        #[arg(required = true, num_args = 1..)]
        kind: Vec<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Solve the max-cut relaxation for the w column and round it
    SolveMc {
        file: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        sigma: f64,
        #[arg(long)]
        seed: u64,
        /// Hyperplane draws used to find a good cut
        #[arg(long, default_value_t = 1000)]
        draws: u64,
    },
    /// Sampled fractional cut cover for the demands (z column, else w)
    SolveFcc {
        file: PathBuf,
        #[command(flatten)]
        run: RandomArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Demands and a certificate from the weights in FILE
    CertifyFromW {
        file: PathBuf,
        #[command(flatten)]
        run: RandomArgs,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Weights and a certificate from the demands in FILE
    CertifyFromZ {
        file: PathBuf,
        #[command(flatten)]
        run: RandomArgs,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check a certificate against FILE using only its contents
    Verify {
        file: PathBuf,
        cert: PathBuf,
        /// Factor to check against (defaults to the certificate's own)
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_VERIFY_TOL)]
        tol: f64,
    },
    /// Size and, when small enough, exact optima
    Info { file: PathBuf },
}

#[derive(Args)]
struct RandomArgs {
    #[arg(long, default_value_t = 0.7)]
    beta: f64,
    #[arg(long)]
    seed: u64,
    /// Independent reruns when a sampled cover or certificate fails its check
    #[arg(long, default_value_t = 3)]
    retries: u32,
}

/// Exit status: 0 success, 1 check failed, 2 bad input, 3 numerical failure.
enum Status {
    Ok,
    Failed,
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::NumericalBreakdown { .. } | Error::MaxIterations(_) | Error::NotInterior(_) | Error::Lp(_)) => 3,
        Some(Error::NotPsd { .. }) => 3,
        _ => 2,
    }
}

fn read_graph(path: &Path) -> anyhow::Result<GraphFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_graph_file(&text).with_context(|| format!("in {}", path.display()))
}

fn write_out(path: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn cover_text(cover: &FractionalCutCover) -> String {
    cover.iter().map(|(s, w)| format!("cover: {s} : {w}\n")).collect()
}

fn gen(kind: &[String], output: Option<&Path>) -> anyhow::Result<Status> {
    let text = if kind[0] == "small-edge-triangle" {
        let [_, eps] = kind else {
            return Err(Error::InvalidParameter("small-edge-triangle takes one argument".into()).into());
        };
        let eps: f64 = eps.parse().map_err(|_| Error::InvalidParameter(format!("bad demand {eps:?}")))?;
        let a = k3_small_edge(eps)?;
        format_graph_file(&a.graph, &a.w, Some(&a.z))
    } else {
        let g = generate(kind.join(" ").parse::<GraphKind>()?)?;
        format_graph_file(&g, &EdgeWeights::ones(&g), None)
    };
    write_out(output, &text)?;
    Ok(Status::Ok)
}

fn solve_mc(exec: Execution, file: &Path, sigma: f64, seed: u64, draws: u64) -> anyhow::Result<Status> {
    let gf = read_graph(file)?;
    let (g, w) = (&gf.graph, &gf.w);
    if draws == 0 {
        return Err(Error::InvalidParameter("--draws must be positive".into()).into());
    }
    let sol = solve_gw(g, w, 0.0, sigma)?;
    let sampler = ShoreSampler::new(&sol.y)?;
    let rng = RngStream::new(seed);
    let shores = cutcert::par::map_range(exec, 0, draws, |k| sampler.draw(&rng, k));
    let mut best = (f64::NEG_INFINITY, Shore::empty());
    for s in shores {
        let c = cut_weight(g, w.values(), &s);
        if c > best.0 || (c == best.0 && s < best.1) {
            best = (c, s);
        }
    }
    println!("gw: {}", sol.rho);
    println!("lower_bound: {}", sol.lower_bound);
    println!("rho: {}", sol.rho);
    println!("x: {}", join(&sol.x));
    println!("iterations: {}", sol.report.iterations);
    println!("best_cut: {}", best.0);
    println!("shore: {}", best.1);
    Ok(Status::Ok)
}

fn solve_fcc(exec: Execution, file: &Path, run: &RandomArgs, output: Option<&Path>) -> anyhow::Result<Status> {
    let gf = read_graph(file)?;
    let z = gf.demands();
    let k = Alg1Constants::new(run.beta)?;
    let root = RngStream::new(run.seed);
    let mut attempt = 0;
    let (cover, rep) = loop {
        let (cover, rep) = approx_fcc_with(exec, &gf.graph, z, run.beta, &root.derive(attempt as u64))?;
        if rep.cover_check.feasible || attempt >= run.retries {
            break (cover, rep);
        }
        attempt += 1;
    };
    println!("value: {}", rep.value);
    println!("polar_value: {}", rep.polar_value);
    println!("bound: {}", (rep.polar_value + k.sigma * z.norm_inf()) / run.beta);
    println!("support: {}", rep.support);
    println!("samples: {}", rep.samples);
    println!("feasible: {}", rep.cover_check.feasible);
    println!("attempts: {}", attempt + 1);
    if let Some(p) = output {
        write_out(Some(p), &cover_text(&cover))?;
    }
    Ok(if rep.cover_check.feasible { Status::Ok } else { Status::Failed })
}

fn certify_cmd(exec: Execution, file: &Path, run: &RandomArgs, output: &Path, from_weights: bool) -> anyhow::Result<Status> {
    let gf = read_graph(file)?;
    let g = &gf.graph;
    let k = Alg2Constants::new(run.beta)?;
    let root = RngStream::new(run.seed);
    let mut attempt = 0;
    let (w, z, out, pass) = loop {
        let rng = root.derive(attempt as u64);
        let (w, z, out): (EdgeWeights, EdgeWeights, Certified) = if from_weights {
            let (z, out) = approx_mc_fcc_with(exec, g, &gf.w, run.beta, &rng)?;
            (gf.w.clone(), z, out)
        } else {
            let z = gf.demands().clone();
            let (w, out) = approx_fcc_mc_with(exec, g, &z, run.beta, &rng)?;
            (w, z, out)
        };
        let pass = verify_certificate(g, &w, &z, &out.certificate, DEFAULT_VERIFY_TOL).pass();
        if pass || attempt >= run.retries {
            break (w, z, out, pass);
        }
        attempt += 1;
    };
    let c = &out.certificate;
    fs::write(output, c.to_text()).with_context(|| format!("writing {}", output.display()))?;
    println!("rho: {}", c.rho);
    println!("mu: {}", c.mu);
    println!("cut: {}", cut_weight(g, w.values(), &c.shore));
    println!("cover_value: {}", c.cover.total_weight());
    println!("support: {}", c.cover.support_size());
    println!("samples: {}", k.samples(g.n()));
    println!("product: {}", w.dot(z.values()));
    println!("verified: {pass}");
    println!("attempts: {}", attempt + 1);
    Ok(if pass { Status::Ok } else { Status::Failed })
}

fn verify_cmd(file: &Path, cert: &Path, beta: Option<f64>, tol: f64) -> anyhow::Result<Status> {
    let gf = read_graph(file)?;
    let text = fs::read_to_string(cert).with_context(|| format!("reading {}", cert.display()))?;
    let mut c = BetaCertificate::from_text(&text).with_context(|| format!("in {}", cert.display()))?;
    if !(tol >= 0.0) {
        return Err(Error::InvalidParameter(format!("--tol must be nonnegative, got {tol}")).into());
    }
    if let Some(b) = beta {
        c.beta = b;
    }
    let g = &gf.graph;
    let w = match &c.w {
        Some(v) => EdgeWeights::new(g, v.clone())?,
        None => gf.w.clone(),
    };
    let z = match &c.z {
        Some(v) => EdgeWeights::new(g, v.clone())?,
        None => gf.demands().clone(),
    };
    let r = verify_certificate(g, &w, &z, &c, tol);
    let mut out = String::new();
    for (k, item) in r.items.iter().enumerate() {
        let _ = writeln!(out, "item{}: {} {}", k + 1, if item.pass { "pass" } else { "fail" }, item.detail);
    }
    let _ = writeln!(out, "verified: {}", r.pass());
    print!("{out}");
    Ok(if r.pass() { Status::Ok } else { Status::Failed })
}

fn info(exec: Execution, file: &Path) -> anyhow::Result<Status> {
    let gf = read_graph(file)?;
    let g = &gf.graph;
    println!("n: {}", g.n());
    println!("m: {}", g.m());
    println!("w_total: {}", gf.w.norm_1());
    println!("z_column: {}", gf.z.is_some());
    if g.n() <= MC_EXACT_MAX_N {
        let mc = mc_exact_with(exec, g, &gf.w)?;
        println!("mc: {}", mc.value);
        println!("mc_shore: {}", mc.shore);
    }
    if g.n() <= FCC_EXACT_MAX_N {
        println!("fcc: {}", fcc_exact(g, gf.demands())?.value);
    }
    Ok(Status::Ok)
}

fn run(cli: Cli) -> anyhow::Result<Status> {
    let exec = match cli.threads {
        Some(0) => return Err(anyhow!(Error::InvalidParameter("--threads must be positive".into()))),
        Some(1) => Execution::Sequential,
        Some(_k) => {
            #[cfg(feature = "parallel")]
            rayon::ThreadPoolBuilder::new().num_threads(_k).build_global().context("starting thread pool")?;
            Execution::default()
        }
        None => Execution::default(),
    };
    match &cli.command {
        Command::Gen { kind, output } => gen(kind, output.as_deref()),
        Command::SolveMc { file, sigma, seed, draws } => solve_mc(exec, file, *sigma, *seed, *draws),
        Command::SolveFcc { file, run, output } => solve_fcc(exec, file, run, output.as_deref()),
        Command::CertifyFromW { file, run, output } => certify_cmd(exec, file, run, output, true),
        Command::CertifyFromZ { file, run, output } => certify_cmd(exec, file, run, output, false),
        Command::Verify { file, cert, beta, tol } => verify_cmd(file, cert, *beta, *tol),
        Command::Info { file } => info(exec, file),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
