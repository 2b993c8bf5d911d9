//! Command-line interface: point evaluation of the strategy cost
//! difference, phase-space heatmaps and boundary curves, power-law link
//! counts, and a self-check suite against the brute-force oracle.
//!
//! Exit codes: 0 on success, 1 on domain errors or failed verification,
//! 2 on usage errors.

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use lexlearn::delta::{
    delta_counterpart_capped, delta_general, delta_phi0, delta_vertex_capped,
    CounterpartCappedInputs, VertexCappedInputs,
};
use lexlearn::flesh::{entropies, CostParams, FleshParams};
use lexlearn::fmt::g17;
use lexlearn::mutation::{apply_mutation, build_state};
use lexlearn::oracle::{brute_delta, brute_entropies, enumerate_skeleta, EnumerationSpec};
use lexlearn::phase::{self, AxisScale, GridSpec, SweepClass, YParam};
use lexlearn::skeleton::{Skeleton, SkeletonClass};
use lexlearn::zipf::{self, DegreeMode};

#[derive(Parser)]
#[command(
    name = "lexlearn",
    version,
    about = "Vocabulary learning strategies on bipartite form-counterpart graphs"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the strategy cost difference at one parameter point.
    Delta(DeltaArgs),
    /// Sweep a (lambda, y) grid and write it as CSV or PPM.
    Heatmap(GridArgs),
    /// Extract the zero-crossing curve of a (lambda, y) grid as CSV.
    Boundary(GridArgs),
    /// Print the total link count of a power-law degree sequence.
    ZipfLinks(ZipfArgs),
    /// Check the fast paths against the brute-force oracle.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ClassArg {
    /// Unbiased closed form (phi = 0), any target degree.
    Phi0,
    /// All degrees at most one.
    VertexCapped,
    /// Counterpart degrees at most one, power-law form degrees.
    CounterpartCapped,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepClassArg {
    VertexCapped,
    CounterpartCapped,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Continuous,
    Discrete,
}

impl ModeArg {
    fn to_mode(self) -> DegreeMode {
        match self {
            ModeArg::Continuous => DegreeMode::Continuous,
            ModeArg::Discrete => DegreeMode::Discrete,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScaleArg {
    Linear,
    Log,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Ppm,
}

#[derive(Args)]
struct DeltaArgs {
    /// Which closed form to evaluate.
    #[arg(long, value_enum)]
    class: ClassArg,
    /// Cost trade-off parameter, in [0, 1].
    #[arg(long)]
    lambda: f64,
    /// Bias exponent (vertex-capped and counterpart-capped).
    #[arg(long)]
    phi: Option<f64>,
    /// Link count M (phi0 and vertex-capped).
    #[arg(long)]
    links: Option<f64>,
    /// Degree of the target counterpart (phi0).
    #[arg(long)]
    omega: Option<f64>,
    /// Degree of the form attached to the target counterpart
    /// (counterpart-capped).
    #[arg(long)]
    mu_k: Option<f64>,
    /// Zipf exponent of the degree sequence (counterpart-capped).
    #[arg(long)]
    alpha: Option<f64>,
    /// Number of forms in the degree sequence (counterpart-capped).
    #[arg(long)]
    n: Option<usize>,
    /// Degree rounding for the sequence (counterpart-capped).
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
}

#[derive(Args)]
struct GridArgs {
    /// Which closed-form family to sweep.
    #[arg(long, value_enum)]
    class: SweepClassArg,
    /// Bias exponent, when not on the y axis.
    #[arg(long)]
    phi: Option<f64>,
    /// Link count, when phi is on the y axis (vertex-capped).
    #[arg(long)]
    links: Option<f64>,
    /// Target degree, when not on the y axis (counterpart-capped).
    #[arg(long)]
    mu_k: Option<f64>,
    /// Zipf exponent, when not on the y axis (counterpart-capped).
    #[arg(long)]
    alpha: Option<f64>,
    /// Number of forms, when not on the y axis (counterpart-capped).
    #[arg(long)]
    n: Option<usize>,
    /// Degree rounding for the sequences (counterpart-capped).
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Link-count axis bounds (vertex-capped).
    #[arg(long)]
    m_min: Option<f64>,
    #[arg(long)]
    m_max: Option<f64>,
    /// Bias axis bounds.
    #[arg(long)]
    phi_min: Option<f64>,
    #[arg(long)]
    phi_max: Option<f64>,
    /// Target-degree axis bounds (counterpart-capped).
    #[arg(long)]
    mu_k_min: Option<f64>,
    #[arg(long)]
    mu_k_max: Option<f64>,
    /// Zipf-exponent axis bounds (counterpart-capped).
    #[arg(long)]
    alpha_min: Option<f64>,
    #[arg(long)]
    alpha_max: Option<f64>,
    /// Form-count axis bounds (counterpart-capped).
    #[arg(long)]
    n_min: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    /// Sampling of the form-count axis (default log).
    #[arg(long, value_enum)]
    n_scale: Option<ScaleArg>,
    /// Lambda samples.
    #[arg(long, default_value_t = phase::DEFAULT_X_RES)]
    x_res: usize,
    /// Y-axis samples.
    #[arg(long, default_value_t = phase::DEFAULT_Y_RES)]
    y_res: usize,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format (heatmap only; boundary is always CSV).
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Args)]
struct ZipfArgs {
    /// Number of forms.
    #[arg(long)]
    n: usize,
    /// Zipf exponent of the induced form marginal.
    #[arg(long)]
    alpha: f64,
    /// Bias exponent.
    #[arg(long)]
    phi: f64,
    /// Degree rounding.
    #[arg(long, value_enum, default_value_t = ModeArg::Continuous)]
    mode: ModeArg,
    /// Also write the full degree sequence as CSV to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Largest form count for the exhaustive tier (counterparts go two
    /// higher). 4 is thorough; 2 or 3 finish quickly.
    #[arg(long, default_value_t = 4)]
    max_n: usize,
    /// Also cross-check one skeleton loaded from a text file
    /// ("n m" header line, then one "i j" edge per line).
    #[arg(long)]
    skeleton: Option<PathBuf>,
}

enum AppError {
    Usage(String),
    Run(String),
    /// Stdout went away mid-stream (e.g. piped into `head`); not an error.
    ClosedPipe,
}

impl From<lexlearn::Error> for AppError {
    fn from(e: lexlearn::Error) -> Self {
        AppError::Run(e.to_string())
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            AppError::ClosedPipe
        } else {
            AppError::Run(e.to_string())
        }
    }
}

fn need<T>(opt: Option<T>, flag: &str) -> Result<T, AppError> {
    opt.ok_or_else(|| AppError::Usage(format!("{flag} is required for this invocation")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Delta(a) => run_delta(a),
        Cmd::Heatmap(a) => run_grid(a, GridCmd::Heatmap),
        Cmd::Boundary(a) => run_grid(a, GridCmd::Boundary),
        Cmd::ZipfLinks(a) => run_zipf(a),
        Cmd::Verify(a) => run_verify(a),
    };
    match result {
        Ok(()) | Err(AppError::ClosedPipe) => ExitCode::SUCCESS,
        Err(AppError::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(AppError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run_delta(a: DeltaArgs) -> Result<(), AppError> {
    // Validates the range even for the closed forms that take lambda raw.
    CostParams::new(a.lambda)?;
    let value = match a.class {
        ClassArg::Phi0 => {
            let omega = need(a.omega, "--omega")?;
            let links = need(a.links, "--links")?;
            if a.mode.is_some() {
                return Err(AppError::Usage(
                    "--mode only applies to counterpart-capped".to_string(),
                ));
            }
            if !(omega >= 1.0) || !omega.is_finite() {
                return Err(AppError::Run(format!(
                    "the target degree must be at least 1, got {omega}"
                )));
            }
            if !(links >= 1.0) || !links.is_finite() {
                return Err(AppError::Run(format!(
                    "the link count must be at least 1, got {links}"
                )));
            }
            delta_phi0(a.lambda, omega, links)
        }
        ClassArg::VertexCapped => {
            let phi = need(a.phi, "--phi")?;
            let links = need(a.links, "--links")?;
            FleshParams::new(phi)?;
            if a.mode.is_some() {
                return Err(AppError::Usage(
                    "--mode only applies to counterpart-capped".to_string(),
                ));
            }
            if !(links >= 1.0) || !links.is_finite() {
                return Err(AppError::Run(format!(
                    "the link count must be at least 1, got {links}"
                )));
            }
            delta_vertex_capped(VertexCappedInputs {
                lambda: a.lambda,
                phi,
                links,
            })
            .0
        }
        ClassArg::CounterpartCapped => {
            let phi = need(a.phi, "--phi")?;
            let mu_k = need(a.mu_k, "--mu-k")?;
            let alpha = need(a.alpha, "--alpha")?;
            let n = need(a.n, "--n")?;
            let mode = a.mode.unwrap_or(ModeArg::Continuous).to_mode();
            let cap = zipf::degree_cap(n, alpha, phi);
            if mu_k > cap {
                return Err(AppError::Run(format!(
                    "mu_k = {mu_k} exceeds the largest degree {cap} the sequence offers"
                )));
            }
            let seq = zipf::generate(n, alpha, phi, mode)?;
            let (x_sr, m_phi) = seq.sufficient_stats();
            delta_counterpart_capped(CounterpartCappedInputs {
                lambda: a.lambda,
                phi,
                mu_k,
                x_sr,
                m_phi,
            })?
            .0
        }
    };
    println!("{}", g17(value));
    Ok(())
}

enum GridCmd {
    Heatmap,
    Boundary,
}

fn grid_spec(a: &GridArgs) -> Result<GridSpec, AppError> {
    let mut ranges: Vec<(YParam, f64, f64)> = Vec::new();
    let pairs: [(YParam, Option<f64>, Option<f64>, &str); 5] = [
        (YParam::Links, a.m_min, a.m_max, "--m-min/--m-max"),
        (YParam::Phi, a.phi_min, a.phi_max, "--phi-min/--phi-max"),
        (YParam::MuK, a.mu_k_min, a.mu_k_max, "--mu-k-min/--mu-k-max"),
        (
            YParam::Alpha,
            a.alpha_min,
            a.alpha_max,
            "--alpha-min/--alpha-max",
        ),
        (
            YParam::Forms,
            a.n_min.map(|v| v as f64),
            a.n_max.map(|v| v as f64),
            "--n-min/--n-max",
        ),
    ];
    for (param, lo, hi, flags) in pairs {
        match (lo, hi) {
            (Some(lo), Some(hi)) => ranges.push((param, lo, hi)),
            (None, None) => {}
            _ => {
                return Err(AppError::Usage(format!(
                    "{flags} must be given together"
                )))
            }
        }
    }
    let (y_param, y_min, y_max) = match ranges.as_slice() {
        [one] => *one,
        [] => {
            return Err(AppError::Usage(
                "exactly one y-axis range is required (e.g. --m-min/--m-max)".to_string(),
            ))
        }
        _ => {
            return Err(AppError::Usage(
                "only one y-axis range may be given".to_string(),
            ))
        }
    };
    let class = match a.class {
        SweepClassArg::VertexCapped => SweepClass::VertexCapped,
        SweepClassArg::CounterpartCapped => SweepClass::CounterpartCapped,
    };
    let required: &[&str] = match (class, y_param) {
        (SweepClass::VertexCapped, YParam::Links) => &["--phi"],
        (SweepClass::VertexCapped, YParam::Phi) => &["--links"],
        (SweepClass::VertexCapped, _) => {
            return Err(AppError::Usage(
                "vertex-capped sweeps take --m-min/--m-max or --phi-min/--phi-max".to_string(),
            ))
        }
        (SweepClass::CounterpartCapped, YParam::MuK) => &["--phi", "--alpha", "--n"],
        (SweepClass::CounterpartCapped, YParam::Alpha) => &["--phi", "--mu-k", "--n"],
        (SweepClass::CounterpartCapped, YParam::Forms) => &["--phi", "--mu-k", "--alpha"],
        (SweepClass::CounterpartCapped, YParam::Phi) => &["--mu-k", "--alpha", "--n"],
        (SweepClass::CounterpartCapped, YParam::Links) => {
            return Err(AppError::Usage(
                "the link count is not a counterpart-capped axis; fix a sequence via --alpha/--n"
                    .to_string(),
            ))
        }
    };
    for flag in required {
        let present = match *flag {
            "--phi" => a.phi.is_some(),
            "--links" => a.links.is_some(),
            "--mu-k" => a.mu_k.is_some(),
            "--alpha" => a.alpha.is_some(),
            "--n" => a.n.is_some(),
            _ => unreachable!(),
        };
        if !present {
            return Err(AppError::Usage(format!(
                "{flag} is required for this sweep"
            )));
        }
    }
    if a.n_scale.is_some() && y_param != YParam::Forms {
        return Err(AppError::Usage(
            "--n-scale only applies to the form-count axis".to_string(),
        ));
    }
    if a.mode.is_some() && class != SweepClass::CounterpartCapped {
        return Err(AppError::Usage(
            "--mode only applies to counterpart-capped".to_string(),
        ));
    }
    let y_scale = match (y_param, a.n_scale) {
        (YParam::Forms, None) | (YParam::Forms, Some(ScaleArg::Log)) => AxisScale::Log,
        (YParam::Forms, Some(ScaleArg::Linear)) => AxisScale::Linear,
        _ => AxisScale::Linear,
    };
    let spec = GridSpec {
        class,
        y_param,
        y_min,
        y_max,
        x_res: a.x_res,
        y_res: a.y_res,
        y_scale,
        phi: a.phi,
        links: a.links,
        mu_k: a.mu_k,
        alpha: a.alpha,
        forms: a.n,
        mode: a.mode.unwrap_or(ModeArg::Continuous).to_mode(),
    };
    spec.validate()?;
    Ok(spec)
}

fn emit(bytes: &[u8], out: Option<&PathBuf>) -> Result<(), AppError> {
    match out {
        Some(path) => fs::write(path, bytes)?,
        None => std::io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

fn run_grid(a: GridArgs, cmd: GridCmd) -> Result<(), AppError> {
    let spec = grid_spec(&a)?;
    match cmd {
        GridCmd::Heatmap => {
            let map = phase::sweep(&spec)?;
            if map.fully_masked {
                eprintln!(
                    "warning: every cell is masked; the requested mu_k is infeasible everywhere"
                );
            }
            let bytes = match a.format {
                FormatArg::Csv => map.to_csv().into_bytes(),
                FormatArg::Ppm => map.to_ppm(),
            };
            emit(&bytes, a.out.as_ref())
        }
        GridCmd::Boundary => {
            if a.format == FormatArg::Ppm {
                return Err(AppError::Usage(
                    "boundary output is always CSV; drop --format".to_string(),
                ));
            }
            let curve = phase::boundary(&spec)?;
            if !curve.skipped.is_empty() {
                eprintln!(
                    "warning: {} of {} rows contributed no boundary point",
                    curve.skipped.len(),
                    spec.y_res
                );
                for (y, reason) in curve.skipped.iter().take(3) {
                    eprintln!("  y = {}: {reason}", g17(*y));
                }
            }
            emit(curve.to_csv().as_bytes(), a.out.as_ref())
        }
    }
}

fn run_zipf(a: ZipfArgs) -> Result<(), AppError> {
    let seq = zipf::generate(a.n, a.alpha, a.phi, a.mode.to_mode())?;
    if seq.clamped() {
        eprintln!("warning: rounding pushed some degrees below 1; they were clamped");
    }
    println!("{}", g17(seq.links()));
    if let Some(path) = a.out {
        fs::write(path, seq.to_csv())?;
    }
    Ok(())
}

const ENTROPY_TOL: f64 = 1e-11;
const STATE_TOL: f64 = 1e-10;
const CLOSED_TOL: f64 = 1e-9;
const BRUTE_TOL: f64 = 1e-10;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1.0_f64.max(a.abs()).max(b.abs())
}

struct Tier {
    name: &'static str,
    checked: usize,
    failed: usize,
}

impl Tier {
    fn report(&self) -> bool {
        if self.failed == 0 {
            println!("[verify] {}: PASS ({} checks)", self.name, self.checked);
            true
        } else {
            println!(
                "[verify] {}: FAIL ({} of {} checks failed)",
                self.name, self.failed, self.checked
            );
            false
        }
    }
}

fn run_verify(a: VerifyArgs) -> Result<(), AppError> {
    let mut ok = true;
    ok &= tier_entropies()?.report();
    ok &= tier_mutations()?.report();
    ok &= tier_structured_deltas()?.report();
    ok &= tier_exhaustive_deltas(a.max_n)?.report();
    if let Some(path) = &a.skeleton {
        ok &= tier_skeleton_file(path)?.report();
    }
    if ok {
        println!("[verify] all tiers passed");
        Ok(())
    } else {
        Err(AppError::Run("verification failed".to_string()))
    }
}

/// Every graph on two small vertex sets: entropies from the incremental
/// formulas against the materialized joint table.
fn tier_entropies() -> Result<Tier, AppError> {
    let mut tier = Tier {
        name: "entropies vs oracle",
        checked: 0,
        failed: 0,
    };
    for (n, m) in [(3, 3), (2, 5)] {
        let spec = EnumerationSpec {
            n,
            m,
            class: SkeletonClass::General,
            unlinked_form: None,
        };
        for sk in enumerate_skeleta(spec)? {
            if sk.links() == 0 {
                continue;
            }
            for phi in [0.0, 0.5, 1.0, 2.0] {
                let fast = entropies(&sk, FleshParams::new(phi)?)?;
                let slow = brute_entropies(&sk, phi)?;
                tier.checked += 1;
                let good = close(fast.h_s, slow.h_s, ENTROPY_TOL)
                    && close(fast.h_r, slow.h_r, ENTROPY_TOL)
                    && close(fast.h_sr, slow.h_sr, ENTROPY_TOL)
                    && close(fast.mi, slow.mi, ENTROPY_TOL);
                if !good {
                    tier.failed += 1;
                }
            }
        }
    }
    Ok(tier)
}

/// Every single-edge toggle on every small graph: the incremental state
/// update against a fresh rebuild of the toggled graph.
fn tier_mutations() -> Result<Tier, AppError> {
    let mut tier = Tier {
        name: "incremental updates vs rebuild",
        checked: 0,
        failed: 0,
    };
    let spec = EnumerationSpec {
        n: 3,
        m: 3,
        class: SkeletonClass::General,
        unlinked_form: None,
    };
    for sk in enumerate_skeleta(spec)? {
        for phi in [0.0, 1.0, 2.5] {
            let fp = FleshParams::new(phi)?;
            let base = build_state(&sk, fp);
            for i in 1..=3 {
                for j in 1..=3 {
                    let mut patched = base.clone();
                    apply_mutation(&mut patched, &sk, i, j)?;
                    let mut toggled = sk.clone();
                    toggled.toggle_edge(i, j)?;
                    let fresh = build_state(&toggled, fp);
                    tier.checked += 1;
                    let mut good = close(patched.m_phi(), fresh.m_phi(), STATE_TOL)
                        && close(patched.x_sr(), fresh.x_sr(), STATE_TOL)
                        && close(patched.x_s(), fresh.x_s(), STATE_TOL)
                        && close(patched.x_r(), fresh.x_r(), STATE_TOL);
                    for v in 1..=3 {
                        good &= close(patched.mu_phi(v), fresh.mu_phi(v), STATE_TOL);
                        good &= close(patched.omega_phi(v), fresh.omega_phi(v), STATE_TOL);
                    }
                    if !good {
                        tier.failed += 1;
                    }
                }
            }
        }
    }
    Ok(tier)
}

/// Counterpart-capped graphs realized from power-law degree sequences:
/// closed form vs dynamic route vs brute force on heterogeneous degrees.
fn tier_structured_deltas() -> Result<Tier, AppError> {
    let mut tier = Tier {
        name: "closed form vs dynamic vs brute (power-law graphs)",
        checked: 0,
        failed: 0,
    };
    for n in [6_usize, 12] {
        for alpha in [0.6, 1.3] {
            for phi in [0.5, 1.0, 2.0] {
                let seq = zipf::generate(n, alpha, phi, DegreeMode::Discrete)?;
                let degrees: Vec<usize> =
                    seq.degrees()[..n - 1].iter().map(|&d| d as usize).collect();
                let mut edges = Vec::new();
                let mut first_counterpart = vec![0_usize; n - 1];
                let mut cursor = 1;
                for (idx, &d) in degrees.iter().enumerate() {
                    first_counterpart[idx] = cursor;
                    for _ in 0..d {
                        edges.push((idx + 1, cursor));
                        cursor += 1;
                    }
                }
                let j_a = cursor; // one extra, unlinked counterpart
                let sk = Skeleton::new(n, cursor, &edges)?;
                let (x_sr, m_phi) = seq.sufficient_stats();
                let fp = FleshParams::new(phi)?;
                for rank in [1, n - 1] {
                    let j_b = first_counterpart[rank - 1];
                    let mu_k = degrees[rank - 1] as f64;
                    for lambda in [0.0, 0.5, 1.0] {
                        let cp = CostParams::new(lambda)?;
                        let (closed, _) = delta_counterpart_capped(CounterpartCappedInputs {
                            lambda,
                            phi,
                            mu_k,
                            x_sr,
                            m_phi,
                        })?;
                        let general = delta_general(&sk, fp, cp, n, j_a, j_b)?;
                        let brute = brute_delta(&sk, phi, lambda, n, j_a, j_b)?;
                        tier.checked += 1;
                        if (closed - general).abs() > CLOSED_TOL
                            || (general - brute).abs() > BRUTE_TOL
                        {
                            tier.failed += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(tier)
}

/// Exhaustive: every counterpart-capped skeleton up to the size cap, every
/// admissible strategy triple, a spread of phi and lambda.
fn tier_exhaustive_deltas(max_n: usize) -> Result<Tier, AppError> {
    let mut tier = Tier {
        name: "closed form vs dynamic vs brute (exhaustive)",
        checked: 0,
        failed: 0,
    };
    if max_n == 0 {
        return Ok(tier);
    }
    for n in 1..=max_n.min(8) {
        for m in 1..=(max_n + 2).min(8) {
            if n * m > lexlearn::oracle::ENUMERATION_CELL_BUDGET {
                continue;
            }
            let spec = EnumerationSpec {
                n,
                m,
                class: SkeletonClass::CounterpartCapped,
                unlinked_form: None,
            };
            for sk in enumerate_skeleta(spec)? {
                let unlinked_forms: Vec<usize> =
                    (1..=n).filter(|&i| sk.form_degree(i) == 0).collect();
                let unlinked_cps: Vec<usize> =
                    (1..=m).filter(|&j| sk.counterpart_degree(j) == 0).collect();
                let linked_cps: Vec<usize> =
                    (1..=m).filter(|&j| sk.counterpart_degree(j) == 1).collect();
                if unlinked_forms.is_empty() || unlinked_cps.is_empty() || linked_cps.is_empty()
                {
                    continue;
                }
                for phi in [0.0, 0.5, 1.0, 2.0] {
                    let fp = FleshParams::new(phi)?;
                    let mut x_sr = 0.0;
                    let mut m_phi = 0.0;
                    for i in 1..=n {
                        let d = sk.form_degree(i) as f64;
                        if d > 0.0 {
                            let w = d.powf(phi + 1.0);
                            m_phi += w;
                            x_sr += w * d.ln();
                        }
                    }
                    for &i in &unlinked_forms {
                        for &j_a in &unlinked_cps {
                            for &j_b in &linked_cps {
                                let holder = sk.counterpart_neighbors(j_b)[0];
                                let mu_k = sk.form_degree(holder) as f64;
                                for lambda in [0.0, 0.25, 0.5, 0.75, 1.0] {
                                    let cp = CostParams::new(lambda)?;
                                    let (closed, _) =
                                        delta_counterpart_capped(CounterpartCappedInputs {
                                            lambda,
                                            phi,
                                            mu_k,
                                            x_sr,
                                            m_phi,
                                        })?;
                                    let general = delta_general(&sk, fp, cp, i, j_a, j_b)?;
                                    let brute = brute_delta(&sk, phi, lambda, i, j_a, j_b)?;
                                    tier.checked += 1;
                                    if (closed - general).abs() > CLOSED_TOL
                                        || (general - brute).abs() > BRUTE_TOL
                                    {
                                        tier.failed += 1;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(tier)
}

fn class_name(class: SkeletonClass) -> &'static str {
    match class {
        SkeletonClass::VertexCapped => "vertex-capped",
        SkeletonClass::CounterpartCapped => "counterpart-capped",
        SkeletonClass::General => "general",
    }
}

/// Cross-check a user-supplied skeleton file.
fn tier_skeleton_file(path: &PathBuf) -> Result<Tier, AppError> {
    let mut tier = Tier {
        name: "skeleton file vs oracle",
        checked: 0,
        failed: 0,
    };
    let text = fs::read_to_string(path)?;
    let sk = Skeleton::from_text(&text)?;
    println!(
        "[verify] loaded skeleton: {} forms, {} counterparts, {} links, class {}",
        sk.forms(),
        sk.counterparts(),
        sk.links(),
        class_name(sk.classify())
    );
    if sk.links() == 0 {
        println!("[verify] skeleton is empty; no distribution to check");
        return Ok(tier);
    }
    for phi in [0.0, 0.5, 1.0, 2.0] {
        let fast = entropies(&sk, FleshParams::new(phi)?)?;
        let slow = brute_entropies(&sk, phi)?;
        tier.checked += 1;
        let good = close(fast.h_s, slow.h_s, ENTROPY_TOL)
            && close(fast.h_r, slow.h_r, ENTROPY_TOL)
            && close(fast.h_sr, slow.h_sr, ENTROPY_TOL);
        if !good {
            tier.failed += 1;
        }
    }
    Ok(tier)
}
