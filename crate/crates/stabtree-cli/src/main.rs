//! `stabtree` — reproducible experiment driver for the stabtree library.
//!
//! Every subcommand prints (or writes with `--out`) a CSV report whose
//! `#`-prefixed header records the full configuration; identical
//! configurations produce byte-identical output, even across thread
//! counts. Stochastic runs require an explicit `--seed`. `--config FILE`
//! supplies `key = value` defaults that explicit flags override, and
//! `STABTREE_THREADS` caps the worker pool.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, ensure, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use stabtree::alpha::{self, AlphaFunction};
use stabtree::bounds::{self, TransitionMode};
use stabtree::channel::PauliChannel;
use stabtree::classical::{self, Criticality};
use stabtree::reliability::{self, BellVariant};
use stabtree::{bp, codes, Axis, SingleQubitPauli};

use config::{expand_args, parse_depths, parse_grid, resolve_code};
use output::{float, Report};

#[derive(Parser)]
#[command(
    name = "stabtree",
    version,
    about = "Noisy stabilizer-tree workbench: bounds, fixed points, density evolution, and belief-propagation decoding",
    args_override_self = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Built-in encoder catalog and code-file tools
    #[command(subcommand)]
    Codes(CodesCmd),
    /// Analytic decay bounds per tree depth
    Bounds(BoundsArgs),
    /// Exact local-decoder error polynomial of a code
    Alpha(AlphaArgs),
    /// Fixed point of the recursive decoding error map
    FixedPoint(FixedPointArgs),
    /// Decoding threshold of the recursive error map
    Threshold(ThresholdArgs),
    /// Exact density evolution for reliability-bit decoders
    De(DeArgs),
    /// Belief-propagation decoding by seeded Monte Carlo
    Bp(BpArgs),
    /// Dephased classical broadcast trees
    Classical(ClassicalArgs),
    /// Cross a probability grid and depth list with a stochastic experiment
    #[command(subcommand)]
    Sweep(SweepCmd),
}

#[derive(Args)]
struct CommonArgs {
    /// Write the report here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Key=value defaults file; explicit flags override it
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CodesCmd {
    /// List the built-in encoder families
    List(ListArgs),
    /// Print an encoder in the code-file text format
    Show(ShowArgs),
    /// Check a code file and report every violation
    Validate(ValidateArgs),
}

#[derive(Args)]
struct ListArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct ShowArgs {
    /// Built-in name or code file path
    #[arg(long)]
    code: String,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct ValidateArgs {
    /// Code file to check
    file: PathBuf,
}

#[derive(Copy, Clone, ValueEnum)]
enum AxisArg {
    X,
    Z,
}

impl AxisArg {
    fn axis(self) -> Axis {
        match self {
            AxisArg::X => Axis::X,
            AxisArg::Z => Axis::Z,
        }
    }

    fn name(self) -> &'static str {
        match self {
            AxisArg::X => "x",
            AxisArg::Z => "z",
        }
    }
}

/// Independent X/Z rates, a single shared rate, or a depolarizing rate.
#[derive(Args)]
struct NoiseArgs {
    /// Equal independent X and Z flip probability
    #[arg(long)]
    p: Option<f64>,
    /// Independent X flip probability (Z defaults to 0)
    #[arg(long)]
    px: Option<f64>,
    /// Independent Z flip probability (X defaults to 0)
    #[arg(long)]
    pz: Option<f64>,
    /// Depolarizing rate (X, Y, Z each at eps/3)
    #[arg(long)]
    eps: Option<f64>,
}

impl NoiseArgs {
    fn channel(&self) -> anyhow::Result<PauliChannel> {
        let chan = match (self.p, self.px, self.pz, self.eps) {
            (Some(p), None, None, None) => PauliChannel::from_independent_xz(p, p)?,
            (None, px, pz, None) if px.is_some() || pz.is_some() => {
                PauliChannel::from_independent_xz(px.unwrap_or(0.0), pz.unwrap_or(0.0))?
            }
            (None, None, None, Some(eps)) => PauliChannel::depolarizing(eps)?,
            (None, None, None, None) => bail!("provide a noise rate: --p, --px/--pz, or --eps"),
            _ => bail!("--p, --px/--pz, and --eps are mutually exclusive"),
        };
        Ok(chan)
    }

    /// The headline rate recorded in the `p` column.
    fn headline(&self) -> f64 {
        self.p.or(self.eps).or(self.px).or(self.pz).unwrap_or(0.0)
    }

    fn record(&self, report: &mut Report) {
        match (self.p, self.px, self.pz, self.eps) {
            (Some(p), ..) => report.config("noise", format!("independent-xz p={p}")),
            (_, _, _, Some(eps)) => report.config("noise", format!("depolarizing eps={eps}")),
            (_, px, pz, _) => report.config(
                "noise",
                format!(
                    "independent-xz px={} pz={}",
                    px.unwrap_or(0.0),
                    pz.unwrap_or(0.0)
                ),
            ),
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum WhichBound {
    /// Distinguishability decay of the pure dephasing tree
    Dephasing,
    /// Weight-transition decay bound under independent X/Z noise
    TreeXz,
    /// Weight-transition decay bound under depolarizing-style noise
    TreeXyz,
    /// Closed-form alternation bound from the logical distances
    Alternating,
    /// Total-variation bound for the classical broadcast tree
    Tvd,
    /// Coupled error/mark recursion bound for the one-bit decoder
    OneBit,
}

#[derive(Args)]
struct BoundsArgs {
    /// Which bound family to tabulate
    #[arg(long, value_enum)]
    which: WhichBound,
    /// Code supplying distances or weight transitions (when needed)
    #[arg(long)]
    code: Option<String>,
    /// Flip probability (tree-xz, alternating, tvd) or total rate (one-bit)
    #[arg(long)]
    p: Option<f64>,
    /// Z flip probability (dephasing)
    #[arg(long)]
    pz: Option<f64>,
    /// Depolarizing-style rate (tree-xyz)
    #[arg(long)]
    eps: Option<f64>,
    /// Branching override: b_z (dephasing) or b (tvd, one-bit)
    #[arg(long)]
    branching: Option<u64>,
    /// Depths to tabulate: `a..b` or a comma list
    #[arg(long)]
    depths: String,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct AlphaArgs {
    /// Built-in name or code file path
    #[arg(long)]
    code: String,
    /// Error axis of the coset table
    #[arg(long, value_enum, default_value = "x")]
    axis: AxisArg,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Copy, Clone, ValueEnum)]
enum FamilyArg {
    /// Majority vote over an odd block
    Majority,
    /// Parity of the block (degrading; threshold 0)
    Parity,
}

/// Selects the local-decoder error function: a code's exact coset decoder
/// or a closed-form family.
#[derive(Args)]
struct AlphaSelect {
    /// Built-in name or code file path
    #[arg(long)]
    code: Option<String>,
    /// Error axis of the coset table (with --code)
    #[arg(long, value_enum, default_value = "x")]
    axis: AxisArg,
    /// Closed-form family instead of a code
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    /// Block size for --family
    #[arg(long)]
    block: Option<u32>,
}

impl AlphaSelect {
    fn build(&self) -> anyhow::Result<AlphaFunction> {
        match (&self.code, self.family) {
            (Some(code), None) => {
                let enc = resolve_code(code)?;
                let table = alpha::coset_table(&enc, self.axis.axis())?;
                Ok(alpha::alpha_exact(&table))
            }
            (None, Some(family)) => {
                let block = self
                    .block
                    .context("--family needs --block")?;
                match family {
                    FamilyArg::Majority => {
                        ensure!(block % 2 == 1, "majority blocks must be odd");
                        Ok(AlphaFunction::majority(block))
                    }
                    FamilyArg::Parity => Ok(AlphaFunction::parity(block)),
                }
            }
            _ => bail!("choose exactly one of --code or --family"),
        }
    }

    fn record(&self, report: &mut Report) {
        if let Some(code) = &self.code {
            report.config("code", code);
            report.config("axis", self.axis.name());
        }
        if let Some(family) = self.family {
            let name = match family {
                FamilyArg::Majority => "majority",
                FamilyArg::Parity => "parity",
            };
            report.config("family", name);
            report.config("block", self.block.unwrap_or(0));
        }
    }
}

#[derive(Args)]
struct FixedPointArgs {
    #[command(flatten)]
    select: AlphaSelect,
    /// Physical error rate fed into the recursion
    #[arg(long)]
    p: f64,
    /// Convergence tolerance on successive iterates
    #[arg(long, default_value_t = alpha::FIXED_POINT_TOL)]
    tol: f64,
    /// Iteration budget
    #[arg(long, default_value_t = alpha::FIXED_POINT_MAX_ITERS)]
    max_iters: u64,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Copy, Clone, ValueEnum)]
enum MethodArg {
    /// Tangent formula when the slope at 1/2 allows it, else bisection
    Auto,
    /// Tangent condition at the fully mixed point
    Tangent,
    /// Bisection on the fixed-point map
    Bisection,
}

#[derive(Args)]
struct ThresholdArgs {
    #[command(flatten)]
    select: AlphaSelect,
    #[arg(long, value_enum, default_value = "auto")]
    method: MethodArg,
    /// Bisection tolerance on the threshold
    #[arg(long, default_value_t = alpha::THRESHOLD_TOL)]
    tol: f64,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Copy, Clone, ValueEnum)]
enum DecoderArg {
    /// Single reliability bit, any small code
    OneBit,
    /// Two reliability bits on the alternating two-qubit tree
    Bell,
}

#[derive(Copy, Clone, ValueEnum)]
enum VariantArg {
    /// Trust corrected locations (unmark them)
    Standard,
    /// Keep corrected locations marked
    Conservative,
}

#[derive(Args)]
struct DeArgs {
    #[arg(long, value_enum)]
    decoder: DecoderArg,
    /// Code for the one-bit decoder
    #[arg(long)]
    code: Option<String>,
    #[command(flatten)]
    noise: NoiseArgs,
    /// Number of tree levels to evolve
    #[arg(long)]
    depth: u32,
    /// Bell decoder rule at marked locations
    #[arg(long, value_enum, default_value = "standard")]
    variant: VariantArg,
    /// Fold root-edge noise into the reported distributions (one-bit)
    #[arg(long)]
    root_noise: bool,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Copy, Clone, ValueEnum)]
enum ModeArg {
    /// Full four-letter posteriors
    Pauli,
    /// Bit-flip sector of a CSS code
    #[value(alias = "binary")]
    BinaryX,
    /// Phase-flip sector of a CSS code
    BinaryZ,
}

impl ModeArg {
    fn mode(self) -> bp::DecodeMode {
        match self {
            ModeArg::Pauli => bp::DecodeMode::Pauli,
            ModeArg::BinaryX => bp::DecodeMode::Binary(Axis::X),
            ModeArg::BinaryZ => bp::DecodeMode::Binary(Axis::Z),
        }
    }

    fn name(self) -> &'static str {
        match self {
            ModeArg::Pauli => "pauli",
            ModeArg::BinaryX => "binary-x",
            ModeArg::BinaryZ => "binary-z",
        }
    }
}

#[derive(Args)]
struct BpArgs {
    /// Built-in name or code file path
    #[arg(long)]
    code: String,
    #[arg(long, value_enum, default_value = "pauli")]
    mode: ModeArg,
    #[command(flatten)]
    noise: NoiseArgs,
    /// Tree depth in levels
    #[arg(long)]
    depth: u32,
    /// Monte Carlo trials
    #[arg(long)]
    trials: u64,
    /// RNG seed (mandatory: stochastic runs must be reproducible)
    #[arg(long)]
    seed: u64,
    /// Apply channel noise to the root output wire too
    #[arg(long)]
    root_noise: bool,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Copy, Clone, ValueEnum)]
enum StatArg {
    /// Exact total variation distance and its Helstrom error
    Tvd,
    /// Monte Carlo global-majority decoding error
    Majority,
    /// Side of the broadcasting threshold
    Ks,
}

#[derive(Args)]
struct ClassicalArgs {
    #[arg(long, value_enum)]
    stat: StatArg,
    /// Code to dephase (tvd, majority)
    #[arg(long)]
    code: Option<String>,
    /// Measurement basis at the root level
    #[arg(long, value_enum, default_value = "z")]
    basis: AxisArg,
    /// Edge flip probability
    #[arg(long)]
    p: f64,
    /// Tree depth in levels (tvd, majority)
    #[arg(long)]
    depth: Option<u32>,
    /// Branching number (ks)
    #[arg(long)]
    branching: Option<u64>,
    /// Monte Carlo trials (majority)
    #[arg(long)]
    trials: Option<u64>,
    /// RNG seed (majority)
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Subcommand)]
enum SweepCmd {
    /// Belief-propagation error rates over a (p, depth) grid
    Bp(SweepBpArgs),
    /// Global-majority error rates over a (p, depth) grid
    Classical(SweepClassicalArgs),
}

#[derive(Args)]
struct SweepBpArgs {
    /// Built-in name or code file path
    #[arg(long)]
    code: String,
    #[arg(long, value_enum, default_value = "pauli")]
    mode: ModeArg,
    /// Probability grid: `start:stop:step` or a comma list; each point runs
    /// independent X/Z noise at that rate
    #[arg(long)]
    grid: String,
    /// Depths to cross with the grid: `a..b` or a comma list
    #[arg(long)]
    depths: String,
    /// Monte Carlo trials per grid point
    #[arg(long)]
    trials: u64,
    /// RNG seed, shared across points (common random numbers)
    #[arg(long)]
    seed: u64,
    /// Apply channel noise to the root output wire too
    #[arg(long)]
    root_noise: bool,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct SweepClassicalArgs {
    /// Code to dephase
    #[arg(long)]
    code: String,
    /// Measurement basis at the root level
    #[arg(long, value_enum, default_value = "z")]
    basis: AxisArg,
    /// Probability grid: `start:stop:step` or a comma list
    #[arg(long)]
    grid: String,
    /// Depths to cross with the grid: `a..b` or a comma list
    #[arg(long)]
    depths: String,
    /// Monte Carlo trials per grid point
    #[arg(long)]
    trials: u64,
    /// RNG seed, shared across points (common random numbers)
    #[arg(long)]
    seed: u64,
    #[command(flatten)]
    common: CommonArgs,
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run() -> anyhow::Result<ExitCode> {
    let argv = expand_args(std::env::args().collect())?;
    let cli = Cli::parse_from(argv);
    init_threads()?;
    let (report, common) = match cli.cmd {
        Cmd::Codes(CodesCmd::List(a)) => (run_codes_list(), a.common),
        Cmd::Codes(CodesCmd::Show(a)) => (run_codes_show(&a)?, a.common),
        Cmd::Codes(CodesCmd::Validate(a)) => return run_codes_validate(&a),
        Cmd::Bounds(a) => (run_bounds(&a)?, a.common),
        Cmd::Alpha(a) => (run_alpha(&a)?, a.common),
        Cmd::FixedPoint(a) => (run_fixed_point(&a)?, a.common),
        Cmd::Threshold(a) => (run_threshold(&a)?, a.common),
        Cmd::De(a) => (run_de(&a)?, a.common),
        Cmd::Bp(a) => (run_bp(&a)?, a.common),
        Cmd::Classical(a) => (run_classical(&a)?, a.common),
        Cmd::Sweep(SweepCmd::Bp(a)) => (run_sweep_bp(&a)?, a.common),
        Cmd::Sweep(SweepCmd::Classical(a)) => (run_sweep_classical(&a)?, a.common),
    };
    report.emit(common.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn init_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("STABTREE_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .context("STABTREE_THREADS must be a positive integer")?;
        ensure!(n > 0, "STABTREE_THREADS must be a positive integer");
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("cannot size the worker pool")?;
    }
    Ok(())
}

fn run_codes_list() -> Report {
    let mut r = Report::new("codes list");
    r.columns(&["name", "description"]);
    let catalog: [(&str, &str); 6] = [
        ("rep(b)", "repetition encoder on b >= 2 qubits; corrects bit flips (d_x = b; d_z = 1)"),
        ("bell", "two-qubit alternating encoder (logical X is Z-type); same as bell_variant(2)"),
        ("bell_variant(k)", "the four Hadamard placements on the two-qubit encoder for k = 1..4; 3 and 4 are not CSS"),
        ("shor(n)", "generalized Shor encoder on n^2 qubits for odd n >= 3 (d_x = d_z = n)"),
        ("steane7", "self-dual seven-qubit encoder with distance 3 on both axes"),
        ("shor9_standard", "alias for shor(3)"),
    ];
    debug_assert_eq!(catalog.len(), codes::BUILTIN_NAMES.len());
    for (name, description) in catalog {
        r.row(vec![name.to_string(), description.to_string()]);
    }
    r
}

fn run_codes_show(a: &ShowArgs) -> anyhow::Result<Report> {
    let enc = resolve_code(&a.code)?;
    let mut r = Report::new("codes show");
    r.config("code", &a.code);
    r.set_text_body(codes::to_text(&enc, &a.code));
    Ok(r)
}

fn run_codes_validate(a: &ValidateArgs) -> anyhow::Result<ExitCode> {
    let text = std::fs::read_to_string(&a.file)
        .with_context(|| format!("cannot read {}", a.file.display()))?;
    match codes::from_text(&text) {
        Ok(named) => {
            println!(
                "ok: {} is a valid [[{}, 1]] encoder with {} stabilizers",
                named.name,
                named.encoder.b(),
                named.encoder.stabilizers().len()
            );
            Ok(ExitCode::SUCCESS)
        }
        Err(stabtree::Error::Validation(violations)) => {
            eprintln!("{} is invalid:", a.file.display());
            for v in &violations {
                eprintln!("  - {v}");
            }
            Ok(ExitCode::FAILURE)
        }
        Err(e) => Err(e.into()),
    }
}

fn run_bounds(a: &BoundsArgs) -> anyhow::Result<Report> {
    let depths = parse_depths(&a.depths)?;
    let mut r = Report::new("bounds");
    let enc = a.code.as_deref().map(resolve_code).transpose()?;
    if let Some(code) = &a.code {
        r.config("code", code);
    }
    r.config("depths", &a.depths);
    let need = |v: Option<f64>, flag: &str| v.with_context(|| format!("--which {} needs {flag}", which_name(a.which)));
    match a.which {
        WhichBound::Dephasing => {
            let p_z = need(a.pz, "--pz")?;
            let b_z = match (a.branching, &enc) {
                (Some(b), _) => b,
                (None, Some(enc)) => enc
                    .d_z()
                    .context("the code does not declare d_z; pass --branching")?
                    as u64,
                (None, None) => bail!("--which dephasing needs --code or --branching"),
            };
            r.config("which", "dephasing");
            r.config("b_z", b_z);
            r.config("pz", p_z);
            r.columns(&["t", "value", "vacuous"]);
            for &t in &depths {
                let b = bounds::dephasing_decay_bound(b_z, p_z, t);
                r.row(vec![t.to_string(), float(b.value), b.vacuous.to_string()]);
            }
        }
        WhichBound::TreeXz | WhichBound::TreeXyz => {
            let enc = enc.context("--which tree-* needs --code")?;
            let (mode, noise) = match a.which {
                WhichBound::TreeXz => (TransitionMode::Xz, need(a.p, "--p")?),
                _ => (TransitionMode::Xyz, need(a.eps, "--eps")?),
            };
            r.config("which", which_name(a.which));
            r.config("noise", noise);
            let first = bounds::tree_decay_bound(&enc, mode, noise, depths[0])?;
            r.config("lambda-max", float(first.lambda_max));
            r.config("b-max", first.b_max);
            r.config("decays", first.decays);
            r.columns(&["t", "value", "vacuous"]);
            for &t in &depths {
                let b = bounds::tree_decay_bound(&enc, mode, noise, t)?.bound;
                r.row(vec![t.to_string(), float(b.value), b.vacuous.to_string()]);
            }
        }
        WhichBound::Alternating => {
            let enc = enc.context("--which alternating needs --code")?;
            let p = need(a.p, "--p")?;
            let d_x = enc.d_x().context("the code does not declare d_x")? as u64;
            let d_z = enc.d_z().context("the code does not declare d_z")? as u64;
            r.config("which", "alternating");
            r.config("d_x", d_x);
            r.config("d_z", d_z);
            r.config("p", p);
            r.columns(&["t", "value", "vacuous"]);
            for &t in &depths {
                let b = bounds::anti_standard_decay_bound(d_x, d_z, p, t);
                r.row(vec![t.to_string(), float(b.value), b.vacuous.to_string()]);
            }
        }
        WhichBound::Tvd => {
            let p = need(a.p, "--p")?;
            let b = a
                .branching
                .context("--which tvd needs --branching")?;
            r.config("which", "tvd");
            r.config("branching", b);
            r.config("p", p);
            r.columns(&["t", "value", "vacuous"]);
            for &t in &depths {
                let v = bounds::classical_tvd_bound(b, p, t);
                r.row(vec![t.to_string(), float(v.value), v.vacuous.to_string()]);
            }
        }
        WhichBound::OneBit => {
            let p = need(a.p, "--p")?;
            let b = a
                .branching
                .context("--which one-bit needs --branching")?;
            ensure!(b >= 1 && b <= u32::MAX as u64, "--branching out of range");
            let deepest = *depths.iter().max().expect("nonempty");
            let ob = reliability::one_bit_error_bounds(b as u32, p, deepest);
            r.config("which", "one-bit");
            r.config("branching", b);
            r.config("p", p);
            r.config("regime-ok", ob.regime_ok);
            r.config("regime-cap", float(ob.regime_cap));
            r.columns(&["t", "mu", "delta", "r-tot"]);
            for &t in &depths {
                let i = t as usize;
                r.row(vec![
                    t.to_string(),
                    float(ob.mu[i]),
                    float(ob.delta[i]),
                    float(ob.r_tot[i]),
                ]);
            }
        }
    }
    Ok(r)
}

fn which_name(w: WhichBound) -> &'static str {
    match w {
        WhichBound::Dephasing => "dephasing",
        WhichBound::TreeXz => "tree-xz",
        WhichBound::TreeXyz => "tree-xyz",
        WhichBound::Alternating => "alternating",
        WhichBound::Tvd => "tvd",
        WhichBound::OneBit => "one-bit",
    }
}

fn run_alpha(a: &AlphaArgs) -> anyhow::Result<Report> {
    let enc = resolve_code(&a.code)?;
    let table = alpha::coset_table(&enc, a.axis.axis())?;
    let alpha_fn = alpha::alpha_exact(&table);
    let coeffs = alpha_fn
        .polynomial()
        .expect("exact coset decoders are polynomial");
    let mut r = Report::new("alpha");
    r.config("code", &a.code);
    r.config("axis", a.axis.name());
    r.config("label", alpha_fn.label());
    r.columns(&["degree", "coefficient", "numerator", "denominator"]);
    for (degree, c) in coeffs.iter().enumerate() {
        r.row(vec![
            degree.to_string(),
            float(c.to_f64()),
            c.numerator().to_string(),
            c.denominator().to_string(),
        ]);
    }
    Ok(r)
}

fn run_fixed_point(a: &FixedPointArgs) -> anyhow::Result<Report> {
    let alpha_fn = a.select.build()?;
    let fp = alpha::fixed_point(&alpha_fn, a.p, a.tol, a.max_iters)?;
    let mut r = Report::new("fixed-point");
    a.select.record(&mut r);
    r.config("label", alpha_fn.label());
    r.config("tol", a.tol);
    r.config("max-iters", a.max_iters);
    r.columns(&["p", "q", "iterations"]);
    r.row(vec![float(a.p), float(fp.q), fp.iterations.to_string()]);
    Ok(r)
}

fn run_threshold(a: &ThresholdArgs) -> anyhow::Result<Report> {
    let alpha_fn = a.select.build()?;
    let (method, value) = match a.method {
        MethodArg::Tangent => (
            "tangent",
            alpha::tangent_threshold(&alpha_fn)
                .context("the slope at 1/2 does not exceed 1; use --method bisection")?,
        ),
        MethodArg::Bisection => ("bisection", alpha::threshold(&alpha_fn, a.tol)),
        MethodArg::Auto => match alpha::tangent_threshold(&alpha_fn) {
            Some(v) => ("tangent", v),
            None => ("bisection", alpha::threshold(&alpha_fn, a.tol)),
        },
    };
    let mut r = Report::new("threshold");
    a.select.record(&mut r);
    r.config("label", alpha_fn.label());
    r.config("tol", a.tol);
    r.columns(&["method", "threshold"]);
    r.row(vec![method.to_string(), float(value)]);
    Ok(r)
}

fn run_de(a: &DeArgs) -> anyhow::Result<Report> {
    let mut r = Report::new("de");
    r.config("decoder", match a.decoder {
        DecoderArg::OneBit => "one-bit",
        DecoderArg::Bell => "bell",
    });
    r.columns(&["t", "q_x", "q_z", "mu_x", "mu_z", "delta_x", "delta_z"]);
    match a.decoder {
        DecoderArg::OneBit => {
            let code = a.code.as_deref().context("--decoder one-bit needs --code")?;
            let enc = resolve_code(code)?;
            let noise = a.noise.channel()?;
            r.config("code", code);
            a.noise.record(&mut r);
            r.config("depth", a.depth);
            r.config("root-noise", a.root_noise);
            let levels = reliability::one_bit_run(&enc, &noise, a.depth, a.root_noise)?;
            use SingleQubitPauli::{X, Y, Z};
            for (t, d) in levels.iter().enumerate() {
                let m = d.letter_marginals();
                r.row(vec![
                    t.to_string(),
                    float(m[X.index()] + m[Y.index()]),
                    float(m[Z.index()] + m[Y.index()]),
                    float(d.mu()),
                    float(d.mu()),
                    float(d.pr(X, false) + d.pr(Y, false)),
                    float(d.pr(Z, false) + d.pr(Y, false)),
                ]);
            }
        }
        DecoderArg::Bell => {
            ensure!(a.code.is_none(), "--decoder bell fixes the code; drop --code");
            ensure!(
                a.noise.eps.is_none(),
                "the bell decoder takes independent X/Z rates, not --eps"
            );
            ensure!(!a.root_noise, "--root-noise applies to --decoder one-bit only");
            let p_x = a.noise.px.or(a.noise.p).context("provide --p or --px")?;
            let p_z = a.noise.pz.or(a.noise.p).context("provide --p or --pz")?;
            a.noise.record(&mut r);
            r.config("depth", a.depth);
            let variant = match a.variant {
                VariantArg::Standard => BellVariant::Standard,
                VariantArg::Conservative => BellVariant::Conservative,
            };
            r.config("variant", match a.variant {
                VariantArg::Standard => "standard",
                VariantArg::Conservative => "conservative",
            });
            ensure!(
                (0.0..=1.0).contains(&p_x) && (0.0..=1.0).contains(&p_z),
                "flip probabilities must lie in [0, 1]"
            );
            for rep in reliability::bell_run(p_x, p_z, a.depth, variant) {
                r.row(vec![
                    rep.t.to_string(),
                    float(rep.q_x),
                    float(rep.q_z),
                    float(rep.mu_x),
                    float(rep.mu_z),
                    float(rep.delta_x),
                    float(rep.delta_z),
                ]);
            }
        }
    }
    Ok(r)
}

fn bp_columns(mode: ModeArg) -> &'static [&'static str] {
    match mode {
        ModeArg::Pauli => &["p", "T", "trials", "seed", "q", "stderr", "q_x", "q_y", "q_z"],
        _ => &["p", "T", "trials", "seed", "q", "stderr"],
    }
}

fn bp_row(
    mode: ModeArg,
    p: f64,
    depth: u32,
    seed: u64,
    est: &bp::McDecodeEstimate,
) -> Vec<String> {
    let mut row = vec![
        float(p),
        depth.to_string(),
        est.trials().to_string(),
        seed.to_string(),
        float(est.error_rate()),
        float(est.std_err()),
    ];
    if matches!(mode, ModeArg::Pauli) {
        use SingleQubitPauli::{X, Y, Z};
        for l in [X, Y, Z] {
            row.push(float(est.class_rate(l)));
        }
    }
    row
}

fn run_bp(a: &BpArgs) -> anyhow::Result<Report> {
    ensure!(a.depth >= 1, "--depth must be at least 1");
    ensure!(a.trials >= 1, "--trials must be at least 1");
    let enc = resolve_code(&a.code)?;
    let noise = a.noise.channel()?;
    let est = bp::mc_logical_error(
        &enc,
        &noise,
        a.depth as usize,
        a.trials,
        a.mode.mode(),
        a.root_noise,
        a.seed,
    )?;
    let mut r = Report::new("bp");
    r.config("code", &a.code);
    r.config("mode", a.mode.name());
    a.noise.record(&mut r);
    r.config("depth", a.depth);
    r.config("trials", a.trials);
    r.config("seed", a.seed);
    r.config("root-noise", a.root_noise);
    r.columns(bp_columns(a.mode));
    r.row(bp_row(a.mode, a.noise.headline(), a.depth, a.seed, &est));
    Ok(r)
}

fn run_classical(a: &ClassicalArgs) -> anyhow::Result<Report> {
    let mut r = Report::new("classical");
    match a.stat {
        StatArg::Tvd => {
            ensure!(a.trials.is_none() && a.seed.is_none(), "--stat tvd is exact; drop --trials/--seed");
            ensure!(a.branching.is_none(), "--branching applies to --stat ks");
            let code = a.code.as_deref().context("--stat tvd needs --code")?;
            let depth = a.depth.context("--stat tvd needs --depth")?;
            ensure!(depth >= 1, "--depth must be at least 1");
            let enc = resolve_code(code)?;
            let cycle = classical::dephase_cycle(&enc, a.basis.axis())?;
            let tvd = classical::tvd_exact(&cycle, a.p, depth as usize)?;
            let leaves: u64 = (1..=depth as usize)
                .map(|t| cycle[(depth as usize - t) % cycle.len()].b() as u64)
                .product();
            r.config("code", code);
            r.config("basis", a.basis.name());
            r.config("p", a.p);
            r.config("depth", depth);
            r.columns(&["p", "T", "leaves", "tvd", "helstrom"]);
            r.row(vec![
                float(a.p),
                depth.to_string(),
                leaves.to_string(),
                float(tvd),
                float(0.5 * (1.0 - tvd)),
            ]);
        }
        StatArg::Majority => {
            ensure!(a.branching.is_none(), "--branching applies to --stat ks");
            let code = a.code.as_deref().context("--stat majority needs --code")?;
            let depth = a.depth.context("--stat majority needs --depth")?;
            ensure!(depth >= 1, "--depth must be at least 1");
            let trials = a.trials.context("--stat majority needs --trials")?;
            ensure!(trials >= 1, "--trials must be at least 1");
            let seed = a.seed.context("--stat majority needs --seed")?;
            let enc = resolve_code(code)?;
            let cycle = classical::dephase_cycle(&enc, a.basis.axis())?;
            let est = classical::mc_majority_error(&cycle, a.p, depth as usize, trials, seed)?;
            r.config("code", code);
            r.config("basis", a.basis.name());
            r.config("p", a.p);
            r.config("depth", depth);
            r.config("trials", trials);
            r.config("seed", seed);
            r.columns(&["p", "T", "trials", "seed", "q", "stderr"]);
            r.row(vec![
                float(a.p),
                depth.to_string(),
                trials.to_string(),
                seed.to_string(),
                float(est.error_rate()),
                float(est.std_err()),
            ]);
        }
        StatArg::Ks => {
            ensure!(
                a.code.is_none() && a.depth.is_none() && a.trials.is_none() && a.seed.is_none(),
                "--stat ks takes only --branching and --p"
            );
            let b = a.branching.context("--stat ks needs --branching")?;
            ensure!(b >= 2, "--branching must be at least 2");
            ensure!((0.0..=1.0).contains(&a.p), "--p must lie in [0, 1]");
            let side = match classical::kesten_stigum_check(b, a.p) {
                Criticality::Subcritical => "subcritical",
                Criticality::Supercritical => "supercritical",
            };
            r.config("branching", b);
            r.config("p", a.p);
            r.columns(&["b", "p", "threshold", "criticality"]);
            r.row(vec![
                b.to_string(),
                float(a.p),
                float(bounds::kesten_stigum_threshold(b)),
                side.to_string(),
            ]);
        }
    }
    Ok(r)
}

fn run_sweep_bp(a: &SweepBpArgs) -> anyhow::Result<Report> {
    ensure!(a.trials >= 1, "--trials must be at least 1");
    let grid = parse_grid(&a.grid)?;
    let depths = parse_depths(&a.depths)?;
    ensure!(depths.iter().all(|&t| t >= 1), "depths must be at least 1");
    let enc = resolve_code(&a.code)?;
    let mut points = Vec::new();
    for &depth in &depths {
        for &p in &grid {
            points.push((depth, p));
        }
    }
    let rows = points
        .par_iter()
        .map(|&(depth, p)| -> anyhow::Result<Vec<String>> {
            let noise = PauliChannel::from_independent_xz(p, p)?;
            let est = bp::mc_logical_error(
                &enc,
                &noise,
                depth as usize,
                a.trials,
                a.mode.mode(),
                a.root_noise,
                a.seed,
            )?;
            Ok(bp_row(a.mode, p, depth, a.seed, &est))
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let mut r = Report::new("sweep bp");
    r.config("code", &a.code);
    r.config("mode", a.mode.name());
    r.config("noise", "independent-xz at each grid point");
    r.config("grid", &a.grid);
    r.config("depths", &a.depths);
    r.config("trials", a.trials);
    r.config("seed", a.seed);
    r.config("root-noise", a.root_noise);
    r.columns(bp_columns(a.mode));
    for row in rows {
        r.row(row);
    }
    Ok(r)
}

fn run_sweep_classical(a: &SweepClassicalArgs) -> anyhow::Result<Report> {
    ensure!(a.trials >= 1, "--trials must be at least 1");
    let grid = parse_grid(&a.grid)?;
    let depths = parse_depths(&a.depths)?;
    ensure!(depths.iter().all(|&t| t >= 1), "depths must be at least 1");
    let enc = resolve_code(&a.code)?;
    let cycle = classical::dephase_cycle(&enc, a.basis.axis())?;
    let mut points = Vec::new();
    for &depth in &depths {
        for &p in &grid {
            points.push((depth, p));
        }
    }
    let rows = points
        .par_iter()
        .map(|&(depth, p)| -> anyhow::Result<Vec<String>> {
            let est = classical::mc_majority_error(&cycle, p, depth as usize, a.trials, a.seed)?;
            Ok(vec![
                float(p),
                depth.to_string(),
                a.trials.to_string(),
                a.seed.to_string(),
                float(est.error_rate()),
                float(est.std_err()),
            ])
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let mut r = Report::new("sweep classical");
    r.config("code", &a.code);
    r.config("basis", a.basis.name());
    r.config("grid", &a.grid);
    r.config("depths", &a.depths);
    r.config("trials", a.trials);
    r.config("seed", a.seed);
    r.columns(&["p", "T", "trials", "seed", "q", "stderr"]);
    for row in rows {
        r.row(row);
    }
    Ok(r)
}
