//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use filterlc_core::gf2m::{builtin_primitive, root_presence_det};
use filterlc_core::keystream::filter_bits;
use filterlc_core::lb::{BoundReport, Mode, Order};
use filterlc_core::{FdcTable, FilterSpec, Gf2m, LfsrSpec, PhaseSet, PolyMod};
use serde_json::json;

use crate::fit::{fit, Basis};
use crate::format::{self, pack_bits, parse_coset, parse_list, report_to_json, ReportJson};
use crate::parallel::lb_bound_jobs;
use crate::verify::{exhaustive_configs, run_verify, sampled_configs, Config};
use crate::{CliError, FAST_TIER, SLOW_TIER};

#[derive(Parser, Debug)]
#[command(name = "filterlc", version, about = "Lower bounds on the global linear complexity of filter generators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute the lower bound for one (L, k).
    Bound(BoundArgs),
    /// Compute bounds for a list of (L, k) pairs.
    Table(TableArgs),
    /// Measure keystream complexity with Berlekamp-Massey and compare with the bound.
    Verify(VerifyArgs),
    /// Root presence test for a single coset.
    CosetTest(CosetArgs),
    /// Fit a growth curve through (L, bound) points and predict.
    Extrapolate(ExtrapolateArgs),
    /// Emit keystream bits as packed hex.
    Keystream(KeystreamArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Strict,
    Rotational,
    Both,
}

impl ModeArg {
    fn modes(self) -> Vec<Mode> {
        match self {
            ModeArg::Strict => vec![Mode::Strict],
            ModeArg::Rotational => vec![Mode::Rotational],
            ModeArg::Both => vec![Mode::Rotational, Mode::Strict],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    Doubling,
    Ascending,
}

impl From<OrderArg> for Order {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::Doubling => Order::Doubling,
            OrderArg::Ascending => Order::Ascending,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct EngineArgs {
    #[arg(long, value_enum, default_value = "rotational")]
    pub mode: ModeArg,
    /// Traversal order of the fixed-distance cosets.
    #[arg(long, value_enum, default_value = "doubling")]
    pub order: OrderArg,
    /// Worker threads for the sweeps (0 = all cores).
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    #[arg(short = 'L')]
    pub l: u32,
    #[arg(short = 'k')]
    pub k: u32,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[arg(long, value_enum, default_value = "human")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    /// Comma-separated L:k pairs; defaults to the reference pairs.
    #[arg(long)]
    pub pairs: Option<String>,
    /// Include the long-running pairs (L >= 37) in the default list.
    #[arg(long)]
    pub full: bool,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[arg(long, value_enum, default_value = "human")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(short = 'L')]
    pub l: u32,
    #[arg(short = 'k')]
    pub k: u32,
    /// Primitive modulus as a hex coefficient mask, e.g. 0x805.
    #[arg(long)]
    pub poly: Option<String>,
    /// Stages of the product term, e.g. 0,1,2.
    #[arg(long)]
    pub taps: Option<String>,
    /// Filter as JSON {max_term, lower_terms}.
    #[arg(long)]
    pub filter: Option<std::path::PathBuf>,
    /// Every primitive modulus with every k-subset of stages.
    #[arg(long)]
    pub exhaustive: bool,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[arg(long, value_enum, default_value = "human")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct CosetArgs {
    #[arg(short = 'L')]
    pub l: u32,
    #[arg(long)]
    pub poly: Option<String>,
    /// Phases t_0 < ... < t_{k-1}.
    #[arg(long)]
    pub taps: String,
    /// Hex (0x...) or a list of one positions.
    #[arg(long)]
    pub coset: String,
    #[arg(long, value_enum, default_value = "human")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct ExtrapolateArgs {
    /// Comma-separated L:bound points; defaults to the reference table.
    #[arg(long)]
    pub points: Option<String>,
    /// linear, quadratic, cubic, poly:N or exp.
    #[arg(long, default_value = "cubic")]
    pub basis: String,
    #[arg(long, default_value_t = 89.0)]
    pub target: f64,
    #[arg(long, value_enum, default_value = "human")]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct KeystreamArgs {
    #[arg(short = 'L')]
    pub l: u32,
    #[arg(long)]
    pub poly: Option<String>,
    #[arg(long)]
    pub taps: Option<String>,
    #[arg(long)]
    pub filter: Option<std::path::PathBuf>,
    /// Number of bits; defaults to two periods.
    #[arg(short = 'n')]
    pub n: Option<usize>,
    /// Initial state, bit i = s_i (hex).
    #[arg(long)]
    pub seed: Option<String>,
}

/// Parses and runs; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Bound(a) => cmd_bound(&a, out, err),
        Command::Table(a) => cmd_table(&a, out, err),
        Command::Verify(a) => cmd_verify(&a, out, err),
        Command::CosetTest(a) => cmd_coset_test(&a, out),
        Command::Extrapolate(a) => cmd_extrapolate(&a, out),
        Command::Keystream(a) => cmd_keystream(&a, out),
    }
}

fn compute(l: u32, k: u32, mode: Mode, order: Order, jobs: usize, err: &mut dyn Write) -> Result<BoundReport, CliError> {
    let table = FdcTable::build(l, k)?;
    if !table.phi_matches() {
        writeln!(
            err,
            "warning: found {} fixed-distance cosets for L = {l}, expected Phi(L)/2 = {}; using the distinct count",
            table.count(),
            table.expected_count()
        )?;
    }
    let report = lb_bound_jobs(l, k, mode, order, jobs)?;
    report.check_invariants().map_err(|m| CliError::Invariant(m.to_string()))?;
    Ok(report)
}

fn cmd_bound(a: &BoundArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let mut reports = Vec::new();
    for mode in a.engine.mode.modes() {
        let start = Instant::now();
        let r = compute(a.l, a.k, mode, a.engine.order.into(), a.engine.jobs, err)?;
        reports.push((r, start.elapsed().as_secs_f64()));
    }
    let differ = reports.len() == 2 && reports[0].0.delta != reports[1].0.delta;
    match a.format {
        Format::Json => {
            if reports.len() == 1 {
                writeln!(out, "{}", report_to_json(&reports[0].0))?;
            } else {
                let v = json!({
                    "rotational": ReportJson::from(&reports[0].0),
                    "strict": ReportJson::from(&reports[1].0),
                    "differ": differ,
                });
                writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"))?;
            }
        }
        Format::Csv => {
            writeln!(out, "L,k,mode,delta,seconds")?;
            for (r, secs) in &reports {
                writeln!(out, "{},{},{},{},{secs:.3}", r.l, r.k, r.mode.as_str(), r.delta)?;
            }
        }
        Format::Human => {
            for (r, secs) in &reports {
                render_human(r, *secs, out)?;
            }
            if reports.len() == 2 {
                writeln!(out, "bounds differ: {}", if differ { "yes" } else { "no" })?;
            }
        }
    }
    Ok(0)
}

fn render_human(r: &BoundReport, secs: f64, out: &mut dyn Write) -> Result<(), CliError> {
    writeln!(out, "L = {}, k = {}, mode = {}, order = {}", r.l, r.k, r.mode.as_str(), r.order.as_str())?;
    writeln!(out, "N_L = {}, initial bound = {}", r.n_l, r.initial_delta)?;
    writeln!(out, "{:>4} {:>4} {:>4}  {:<20} {:>4} {:>4} {:>12}", "i", "j", "d", "mask", "M", "m*", "contribution")?;
    for s in &r.sets {
        writeln!(
            out,
            "{:>4} {:>4} {:>4}  {:<20} {:>4} {:>4} {:>12}",
            s.i,
            s.j,
            s.d,
            s.mask.to_hex(),
            s.m,
            s.m_star,
            s.contribution
        )?;
    }
    writeln!(out, "delta = {} ({} nondegenerate cosets, {secs:.3}s)", r.delta, r.nondegenerate_coset_count)?;
    Ok(())
}

fn parse_pairs(text: &str) -> Result<Vec<(u32, u32)>, CliError> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|p| {
            let (l, k) = p.split_once(':').ok_or_else(|| CliError::Input(format!("expected L:k, got {p:?}")))?;
            let parse = |s: &str| s.trim().parse::<u32>().map_err(|_| CliError::Input(format!("bad number in {p:?}")));
            Ok((parse(l)?, parse(k)?))
        })
        .collect()
}

fn reference(l: u32, k: u32) -> Option<u64> {
    FAST_TIER.iter().chain(SLOW_TIER.iter()).find(|&&(a, b, _)| a == l && b == k).map(|&(_, _, d)| d)
}

fn cmd_table(a: &TableArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let pairs = match &a.pairs {
        Some(p) => parse_pairs(p)?,
        None => {
            let mut v: Vec<(u32, u32)> = FAST_TIER.iter().map(|&(l, k, _)| (l, k)).collect();
            if a.full {
                v.extend(SLOW_TIER.iter().map(|&(l, k, _)| (l, k)));
            }
            v
        }
    };
    let mut rows = Vec::new();
    for &(l, k) in &pairs {
        for mode in a.engine.mode.modes() {
            let start = Instant::now();
            let res = compute(l, k, mode, a.engine.order.into(), a.engine.jobs, err);
            rows.push((l, k, mode, res.map(|r| r.delta), start.elapsed().as_secs_f64()));
        }
    }
    match a.format {
        Format::Csv => {
            writeln!(out, "L,k,mode,delta,seconds")?;
            for (l, k, mode, res, secs) in &rows {
                let delta = match res {
                    Ok(d) => d.to_string(),
                    Err(e) => format!("error: {e}"),
                };
                writeln!(out, "{l},{k},{},{delta},{secs:.3}", mode.as_str())?;
            }
        }
        Format::Json => {
            let v: Vec<_> = rows
                .iter()
                .map(|(l, k, mode, res, secs)| match res {
                    Ok(d) => json!({"L": l, "k": k, "mode": mode.as_str(), "delta": d, "seconds": secs, "reference": reference(*l, *k)}),
                    Err(e) => json!({"L": l, "k": k, "mode": mode.as_str(), "error": e.to_string(), "seconds": secs}),
                })
                .collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"))?;
        }
        Format::Human => {
            writeln!(out, "{:>4} {:>4} {:<11} {:>10} {:>10} {:>6} {:>10}", "L", "k", "mode", "delta", "reference", "match", "seconds")?;
            for (l, k, mode, res, secs) in &rows {
                let refv = reference(*l, *k);
                let (delta, matched) = match res {
                    Ok(d) => (d.to_string(), refv.map_or("-", |r| if r == *d { "yes" } else { "no" })),
                    Err(e) => (format!("error: {e}"), "-"),
                };
                let refs = refv.map_or("-".to_string(), |r| r.to_string());
                writeln!(out, "{l:>4} {k:>4} {:<11} {delta:>10} {refs:>10} {matched:>6} {secs:>10.3}", mode.as_str())?;
            }
        }
    }
    Ok(0)
}

fn parse_poly(l: u32, poly: &Option<String>) -> Result<PolyMod, CliError> {
    let p = match poly {
        Some(hex) => PolyMod::from_hex(hex)?,
        None => builtin_primitive(l).ok_or_else(|| CliError::Input(format!("no built-in modulus for L = {l}; pass --poly")))?,
    };
    if p.degree() != l {
        return Err(CliError::Input(format!("modulus {} has degree {}, not {l}", p.to_hex(), p.degree())));
    }
    if !p.is_primitive() {
        return Err(CliError::Input(format!("modulus {} is not primitive", p.to_hex())));
    }
    Ok(p)
}

fn parse_phases(text: &str) -> Result<PhaseSet, CliError> {
    let mut taps = parse_list::<u64>(text)?;
    let n = taps.len();
    taps.sort_unstable();
    taps.dedup();
    if taps.len() != n {
        return Err(CliError::Input("taps must be distinct".into()));
    }
    Ok(PhaseSet::new(taps)?)
}

fn read_filter(path: &std::path::Path) -> Result<FilterSpec, CliError> {
    let text = std::fs::read_to_string(path)?;
    format::filter_from_json(&text)
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let k = a.k as usize;
    let single_filter = match (&a.taps, &a.filter) {
        (Some(_), Some(_)) => return Err(CliError::Input("pass either --taps or --filter".into())),
        (Some(t), None) => Some(FilterSpec::product(parse_phases(t)?)),
        (None, Some(path)) => Some(read_filter(path)?),
        (None, None) => None,
    };
    let poly = match &a.poly {
        Some(_) => Some(parse_poly(a.l, &a.poly)?),
        None => None,
    };
    if a.l > filterlc_core::keystream::MAX_MEASURED_LEN {
        return Err(CliError::Input(format!("verification needs L <= {}", filterlc_core::keystream::MAX_MEASURED_LEN)));
    }
    if let Some(f) = &single_filter {
        if f.order() != k {
            return Err(CliError::Input(format!("filter has order {}, expected k = {k}", f.order())));
        }
        if f.max_tap() >= u64::from(a.l) {
            return Err(CliError::Input(format!("taps must be LFSR stages in [0, {})", a.l)));
        }
    }
    let modes = a.engine.mode.modes();
    let mut reports = Vec::new();
    for mode in modes {
        let bound = compute(a.l, a.k, mode, a.engine.order.into(), a.engine.jobs, err)?;
        let configs: Vec<Config> = match (&single_filter, a.exhaustive) {
            (Some(f), _) => vec![Config { modulus: poly.unwrap_or(parse_poly(a.l, &None)?), filter: f.clone() }],
            (None, true) => {
                let mut c = exhaustive_configs(a.l, k)?;
                if let Some(p) = poly {
                    c.retain(|c| c.modulus == p);
                }
                c
            }
            (None, false) => {
                let mut c = sampled_configs(a.l, k, a.samples, a.seed)?;
                if let Some(p) = poly {
                    c.iter_mut().for_each(|c| c.modulus = p);
                }
                c
            }
        };
        reports.push((mode, run_verify(a.l, a.k, bound.delta, &configs, a.engine.jobs)?));
    }
    let pass = reports.iter().all(|(_, r)| r.pass);
    match a.format {
        Format::Json => {
            let v: Vec<_> = reports.iter().map(|(m, r)| json!({"mode": m.as_str(), "report": r})).collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"))?;
        }
        _ => {
            for (mode, r) in &reports {
                writeln!(
                    out,
                    "L = {}, k = {}, mode = {}: bound {} vs {} measured runs, min complexity {}: {}",
                    r.l,
                    r.k,
                    mode.as_str(),
                    r.delta,
                    r.runs.len(),
                    r.min_lc.map_or("-".to_string(), |v| v.to_string()),
                    if r.pass { "PASS" } else { "FAIL" }
                )?;
                for run in r.runs.iter().filter(|run| (run.lc as u64) < r.delta) {
                    writeln!(out, "  violation: poly {} taps {:?} complexity {}", run.poly, run.max_term, run.lc)?;
                }
            }
        }
    }
    if pass {
        Ok(0)
    } else {
        Err(CliError::Invariant("measured complexity below the computed bound".into()))
    }
}

fn cmd_coset_test(a: &CosetArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let field = Gf2m::new(parse_poly(a.l, &a.poly)?)?;
    let phases = parse_phases(&a.taps)?;
    let coset = parse_coset(a.l, &a.coset)?;
    let det = root_presence_det(&phases, coset, &field)?;
    let verdict = if det.is_zero() { "degenerate" } else { "nondegenerate" };
    match a.format {
        Format::Json => writeln!(
            out,
            "{}",
            json!({"L": a.l, "poly": field.modulus().to_hex(), "coset": coset.to_hex(), "taps": phases.taps(),
                   "determinant": format!("{:#x}", det.0), "verdict": verdict})
        )?,
        _ => writeln!(out, "coset {} ({}): {verdict}, determinant {:#x}", coset.to_hex(), coset, det.0)?,
    }
    Ok(0)
}

fn parse_points(text: &str) -> Result<Vec<(f64, f64)>, CliError> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|p| {
            let (x, y) = p.split_once(':').ok_or_else(|| CliError::Input(format!("expected L:bound, got {p:?}")))?;
            let parse = |s: &str| s.trim().parse::<f64>().map_err(|_| CliError::Input(format!("bad number in {p:?}")));
            Ok((parse(x)?, parse(y)?))
        })
        .collect()
}

fn cmd_extrapolate(a: &ExtrapolateArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let points = match &a.points {
        Some(p) => parse_points(p)?,
        None => FAST_TIER.iter().chain(SLOW_TIER.iter()).map(|&(l, _, d)| (f64::from(l), d as f64)).collect(),
    };
    let basis: Basis = a.basis.parse()?;
    let model = fit(&points, basis)?;
    let prediction = model.predict(a.target);
    let label = if model.is_extrapolation(a.target) { "extrapolation" } else { "interpolation" };
    match a.format {
        Format::Json => writeln!(
            out,
            "{}",
            json!({"basis": basis.to_string(), "coefficients": model.coefficients, "residuals": model.residuals,
                   "rss": model.rss(), "target": a.target, "prediction": prediction, "kind": label})
        )?,
        _ => {
            writeln!(out, "basis: {basis}, {} points", points.len())?;
            writeln!(out, "coefficients (ascending powers): {:?}", model.coefficients)?;
            writeln!(out, "residuals: {:?}", model.residuals)?;
            writeln!(out, "rss: {:.6e}", model.rss())?;
            writeln!(out, "prediction at L = {} ({label}): {prediction:.0}", a.target)?;
            writeln!(out, "other bases:")?;
            for other in [Basis::Poly(1), Basis::Poly(2), Basis::Poly(3), Basis::Exponential] {
                if other == basis {
                    continue;
                }
                match fit(&points, other) {
                    Ok(m) => writeln!(out, "  {other:<10} {:.0}", m.predict(a.target))?,
                    Err(e) => writeln!(out, "  {other:<10} n/a ({e})")?,
                }
            }
        }
    }
    Ok(0)
}

fn cmd_keystream(a: &KeystreamArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let modulus = parse_poly(a.l, &a.poly)?;
    let lfsr = match &a.seed {
        Some(hex) => {
            let digits = hex.trim_start_matches("0x");
            let seed = u64::from_str_radix(digits, 16).map_err(|_| CliError::Input(format!("bad seed {hex:?}")))?;
            LfsrSpec::new(modulus, seed)?
        }
        None => LfsrSpec::with_default_seed(modulus)?,
    };
    let filter = match (&a.taps, &a.filter) {
        (Some(t), None) => FilterSpec::product(parse_phases(t)?),
        (None, Some(p)) => read_filter(p)?,
        _ => return Err(CliError::Input("pass exactly one of --taps or --filter".into())),
    };
    let n = a.n.unwrap_or(2 * lfsr.period() as usize);
    let bits = filter_bits(&lfsr, &filter, n)?;
    writeln!(out, "{}", serde_json::to_string(&pack_bits(&bits)).expect("json"))?;
    Ok(0)
}
