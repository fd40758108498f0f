//! `rough`: command-line front end for exact rough-number counts and the
//! explicit de Bruijn constants.

mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use output::{Cell, Format, Rendered};
use rough_core::constants::{
    compare_with_reference, compute_ledger, delta_lower_bounds, ApproxContext, CellComparison, CellStatus,
    ConstantLedger, DeltaBranch, DeltaVariant, Mode, LEDGER_ROWS, REFERENCE_COLUMNS,
};
use rough_core::debruijn::{main_term, mu_y, SmoothContext};
use rough_core::sieve::{
    bonferroni_bounds, bonferroni_max_threshold, phi_with, LegendreConfig, PhiMethod, PrimeTable, RoughCountQuery,
    DIRECT_CUTOFF,
};
use rough_core::specfun::{
    build_tables, buchstab_omega, dickman_rho, dickman_rho_ln, log_integral, QuadratureSpec, Tables,
    DEFAULT_TABLE_TOL, DEFAULT_U_MAX,
};
use rough_core::verify::{verify_lower_04, GridSpec, VerificationReport, Verifier};

const EXIT_VIOLATIONS: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_FAILURE: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "rough", version, about = "Exact counts of rough numbers and explicit de Bruijn bounds")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Directory for cached prime and ω/ρ tables.
    #[arg(long, env = "ROUGH_CACHE_DIR", global = true)]
    cache_dir: Option<PathBuf>,
    /// Worker threads for `verify` (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Unconditional,
    Rh,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Unconditional => Mode::Unconditional,
            ModeArg::Rh => Mode::Rh,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Auto,
    Direct,
    Legendre,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BranchArg {
    LargeY,
    SmallY,
    Combined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Tabulated,
    Printed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Theorem {
    MainTheorem,
    Corollary,
    #[value(name = "lower-0.4")]
    Lower04,
    Sandwich,
    DeltaFloor,
    FinalAssembly,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Φ(x, y): integers up to x with no prime factor ≤ y.
    Phi {
        x: f64,
        y: f64,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
    },
    /// Buchstab's ω(u).
    Omega { u: f64 },
    /// Dickman's ρ(u).
    Rho { u: f64 },
    /// Logarithmic integral li(z).
    Li { z: f64 },
    /// μ_y(u).
    Mu { y: f64, u: f64 },
    /// The smooth main term and its parts.
    MainTerm { x: f64, y: f64 },
    /// The constants C₀…C₈, η₁, Σξ with per-cell differences from the published values.
    Constants {
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long)]
        y0: Option<f64>,
    },
    /// Lower bounds Δ₃⁻, Δ₄⁻, Δ_∞⁻.
    DeltaBounds {
        #[arg(long, value_enum, default_value_t = BranchArg::Combined)]
        branch: BranchArg,
        #[arg(long, value_enum, default_value_t = VariantArg::Tabulated)]
        variant: VariantArg,
    },
    /// Check a stated inequality on a grid; exit 1 if anything fails.
    Verify {
        #[arg(long, value_enum)]
        theorem: Theorem,
        #[arg(long, value_enum, default_value_t = ModeArg::Unconditional)]
        mode: ModeArg,
        /// Largest x sampled (defaults: 1e8, 1e6 for lower-0.4, 1e9 for delta-floor).
        #[arg(long)]
        x_cap: Option<f64>,
        /// lower-0.4 only: the extended range 5 ≤ y, x ≥ 41.
        #[arg(long)]
        extended: bool,
        /// Keep wall-clock runtime in the report (output is then not reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Bonferroni pre-sieve constants a(y), b(y) and the x-threshold; the
    /// maximum over 7 ≤ y ≤ 602 without --y.
    Bonferroni {
        #[arg(long)]
        y: Option<f64>,
    },
}

struct Run {
    cache_dir: Option<PathBuf>,
}

impl Run {
    fn primes(&self, limit: u64) -> rough_core::Result<PrimeTable> {
        // round up so nearby requests share one cache file
        let limit = limit.max(1 << 16).next_power_of_two().min(u32::MAX as u64);
        match &self.cache_dir {
            Some(dir) => PrimeTable::load_or_build(dir, limit),
            None => PrimeTable::primes_up_to(limit),
        }
    }

    fn tables(&self) -> rough_core::Result<Tables> {
        match &self.cache_dir {
            Some(dir) => Tables::load_or_build(dir, DEFAULT_U_MAX, DEFAULT_TABLE_TOL),
            None => build_tables(DEFAULT_U_MAX, DEFAULT_TABLE_TOL),
        }
    }
}

/// Command result and whether it should set the violation exit code.
struct Outcome {
    rendered: Rendered,
    failed: bool,
}

impl From<Rendered> for Outcome {
    fn from(rendered: Rendered) -> Self {
        Self { rendered, failed: false }
    }
}

fn as_count(v: f64, name: &'static str) -> rough_core::Result<u64> {
    if !(v >= 1.0) || !v.is_finite() || v > u32::MAX as f64 {
        return Err(rough_core::Error::OutOfDomain {
            name,
            value: v,
            expected: format!("in [1, {}]", u32::MAX),
        });
    }
    Ok(v.floor() as u64)
}

fn phi_cmd(run: &Run, x: f64, y: f64, method: MethodArg) -> anyhow::Result<Outcome> {
    let q = RoughCountQuery::new(x, y)?;
    let n = as_count(x, "x")?;
    let method = match method {
        MethodArg::Auto if n <= DIRECT_CUTOFF => PhiMethod::Direct,
        MethodArg::Auto => PhiMethod::Legendre,
        MethodArg::Direct => PhiMethod::Direct,
        MethodArg::Legendre => PhiMethod::Legendre,
    };
    // y ≥ x only ever leaves 1, so y is capped at x for the table size
    let y_eff = y.min(n as f64);
    let root = (n as f64).sqrt() as u64 + 2;
    let limit = match method {
        PhiMethod::Legendre if y_eff < root as f64 => root.max(y_eff as u64 + 1),
        _ => n,
    };
    let pt = run.primes(limit)?;
    let phi = phi_with(&q, &pt, method, &LegendreConfig::default())?;
    #[derive(Serialize)]
    struct Out {
        x: f64,
        y: f64,
        phi: u64,
    }
    Ok(Rendered::single(
        vec![("x", x.into()), ("y", y.into()), ("phi", phi.into())],
        &Out { x, y, phi },
    )?
    .into())
}

fn omega_cmd(run: &Run, u: f64) -> anyhow::Result<Outcome> {
    let t = run.tables()?;
    let omega = buchstab_omega(u, &t.omega);
    #[derive(Serialize)]
    struct Out {
        u: f64,
        omega: f64,
    }
    Ok(Rendered::single(vec![("u", u.into()), ("omega", omega.into())], &Out { u, omega })?.into())
}

fn rho_cmd(run: &Run, u: f64) -> anyhow::Result<Outcome> {
    let t = run.tables()?;
    let rho = dickman_rho(u, &t.rho);
    let ln_rho = dickman_rho_ln(u, &t.rho);
    #[derive(Serialize)]
    struct Out {
        u: f64,
        rho: f64,
        ln_rho: f64,
    }
    Ok(Rendered::single(
        vec![("u", u.into()), ("rho", rho.into()), ("ln_rho", ln_rho.into())],
        &Out { u, rho, ln_rho },
    )?
    .into())
}

fn li_cmd(z: f64) -> anyhow::Result<Outcome> {
    let li = log_integral(z, &QuadratureSpec::default())?;
    #[derive(Serialize)]
    struct Out {
        z: f64,
        li: f64,
    }
    Ok(Rendered::single(vec![("z", z.into()), ("li", li.into())], &Out { z, li })?.into())
}

fn mu_cmd(run: &Run, y: f64, u: f64) -> anyhow::Result<Outcome> {
    if !(u >= 1.0) {
        return Err(rough_core::Error::OutOfDomain {
            name: "u",
            value: u,
            expected: ">= 1".into(),
        }
        .into());
    }
    let t = run.tables()?;
    let mu = mu_y(y, u, &t.omega, &QuadratureSpec::default())?;
    #[derive(Serialize)]
    struct Out {
        y: f64,
        u: f64,
        mu: f64,
        mu_log_y: f64,
    }
    let out = Out { y, u, mu, mu_log_y: mu * y.ln() };
    Ok(Rendered::single(
        vec![("y", y.into()), ("u", u.into()), ("mu", mu.into()), ("mu_log_y", out.mu_log_y.into())],
        &out,
    )?
    .into())
}

fn main_term_cmd(run: &Run, x: f64, y: f64) -> anyhow::Result<Outcome> {
    let pt = run.primes(as_count(y, "y")?)?;
    let t = run.tables()?;
    let m = main_term(x, y, &SmoothContext::new(&pt, &t.omega))?;
    Ok(Rendered::single(
        vec![
            ("x", m.x.into()),
            ("y", m.y.into()),
            ("u", m.u.into()),
            ("mu", m.mu.into()),
            ("q", m.q.into()),
            ("lambda", m.lambda.into()),
            ("main_term", m.main_term.into()),
        ],
        &m,
    )?
    .into())
}

#[derive(Serialize)]
struct ConstantsColumn {
    ledger: ConstantLedger,
    comparison: Option<Vec<CellComparison>>,
}

fn constants_cmd(mode: Option<ModeArg>, y0: Option<f64>) -> anyhow::Result<Outcome> {
    let targets: Vec<(Mode, f64)> = match (mode, y0) {
        (Some(m), Some(y0)) => vec![(m.into(), y0)],
        (Some(m), None) => REFERENCE_COLUMNS
            .iter()
            .filter(|c| c.mode == Mode::from(m))
            .map(|c| (c.mode, c.y0))
            .collect(),
        (None, None) => REFERENCE_COLUMNS.iter().map(|c| (c.mode, c.y0)).collect(),
        (None, Some(_)) => anyhow::bail!(Usage("--y0 needs --mode".into())),
    };
    let q = QuadratureSpec::default();
    let mut columns = Vec::new();
    for (mode, y0) in targets {
        let ledger = compute_ledger(&ApproxContext::new(mode, y0)?, &q)?;
        columns.push(ConstantsColumn {
            ledger,
            comparison: compare_with_reference(&ledger),
        });
    }
    let mut rows = Vec::new();
    let mut failed = false;
    for c in &columns {
        for (i, (&name, value)) in LEDGER_ROWS.iter().zip(c.ledger.rows()).enumerate() {
            let cmp = c.comparison.as_ref().map(|v| v[i]);
            failed |= cmp.map_or(false, |x| x.status == CellStatus::Mismatch);
            rows.push(vec![
                Cell::from(c.ledger.mode.name()),
                c.ledger.y0.into(),
                name.into(),
                value.into(),
                cmp.map(|x| x.reference).into(),
                cmp.map(|x| x.delta).into(),
                cmp.map(|x| status_name(x.status)).into(),
            ]);
        }
    }
    let rendered = Rendered::new(
        vec!["mode", "y0", "quantity", "computed", "printed", "delta", "status"],
        rows,
        &columns,
    )?;
    Ok(Outcome { rendered, failed })
}

fn status_name(s: CellStatus) -> &'static str {
    match s {
        CellStatus::Match => "match",
        CellStatus::Flagged => "flagged",
        CellStatus::Mismatch => "mismatch",
    }
}

fn delta_cmd(branch: BranchArg, variant: VariantArg) -> anyhow::Result<Outcome> {
    let branch = match branch {
        BranchArg::LargeY => DeltaBranch::LargeY,
        BranchArg::SmallY => DeltaBranch::SmallY,
        BranchArg::Combined => DeltaBranch::Combined,
    };
    let variant = match variant {
        VariantArg::Tabulated => DeltaVariant::Tabulated,
        VariantArg::Printed => DeltaVariant::Printed,
    };
    let d = delta_lower_bounds(branch, variant)?;
    let json = serde_json::to_value(d)?;
    let name = |k: &str| json[k].as_str().unwrap_or_default().to_string();
    Ok(Rendered::single(
        vec![
            ("branch", name("branch").into()),
            ("variant", name("variant").into()),
            ("delta3", d.delta3.into()),
            ("delta4", d.delta4.into()),
            ("delta_inf", d.delta_inf.into()),
            ("u_at", d.u_at.into()),
            ("y_at", d.y_at.into()),
            ("increasing_in_y", d.increasing_in_y.into()),
        ],
        &d,
    )?
    .into())
}

fn report_rendered(r: &VerificationReport) -> anyhow::Result<Rendered> {
    let mode = r.mode.map(Mode::name);
    let head = |kind: &str| -> Vec<Cell> {
        vec![
            kind.into(),
            r.theorem_id.as_str().into(),
            mode.into(),
            r.points_checked.into(),
            r.violation_count.into(),
            r.inconclusive.into(),
            r.min_margin.into(),
            r.runtime_seconds.into(),
        ]
    };
    let point = |v: &rough_core::verify::Violation| -> Vec<Cell> {
        vec![v.x.into(), v.y.into(), v.lhs.into(), v.rhs.into(), v.margin.into()]
    };
    let mut rows = Vec::new();
    let mut first = head("summary");
    match &r.worst {
        Some(w) => first.extend(point(w)),
        None => first.extend((0..5).map(|_| Cell::Empty)),
    }
    rows.push(first);
    for v in &r.violations {
        let mut row = head("violation");
        row.extend(point(v));
        rows.push(row);
    }
    let mut out = Rendered::new(
        vec![
            "record",
            "theorem_id",
            "mode",
            "points_checked",
            "violation_count",
            "inconclusive",
            "min_margin",
            "runtime_seconds",
            "x",
            "y",
            "lhs",
            "rhs",
            "margin",
        ],
        rows,
        r,
    )?;
    if let Some(n) = &r.note {
        out.notes.push(format!("note: {n}"));
    }
    Ok(out)
}

fn verify_cmd(
    run: &Run,
    theorem: Theorem,
    mode: Mode,
    x_cap: Option<f64>,
    extended: bool,
    timing: bool,
) -> anyhow::Result<Outcome> {
    let default_cap = match theorem {
        Theorem::Lower04 => 1e6,
        Theorem::DeltaFloor => 1e9,
        _ => 1e8,
    };
    let x_cap = as_count(x_cap.unwrap_or(default_cap), "x_cap")?;
    if extended && theorem != Theorem::Lower04 {
        anyhow::bail!(Usage("--extended applies to lower-0.4 only".into()));
    }
    let report = match theorem {
        Theorem::Lower04 => {
            let pt = run.primes(x_cap)?;
            let (y_min, x_min) = if extended { (5.0, 41.0) } else { (7.0, 0.0) };
            verify_lower_04(&pt, x_cap, y_min, x_min)?
        }
        Theorem::FinalAssembly => {
            let pt = run.primes(100_000_000)?;
            let t = run.tables()?;
            Verifier::new(&pt, &t).verify_final_assembly(mode)?
        }
        _ => {
            let needed = x_cap.min(DIRECT_CUTOFF).max((x_cap as f64).sqrt() as u64 + 2).max(10_000);
            let pt = run.primes(needed)?;
            let t = run.tables()?;
            let v = Verifier::new(&pt, &t);
            let mut grid = if theorem == Theorem::DeltaFloor {
                GridSpec::delta_grid(&pt, x_cap)?
            } else {
                GridSpec::default_grid()
            };
            grid.x_cap = x_cap;
            match theorem {
                Theorem::MainTheorem => v.verify_main_theorem(&grid, mode)?,
                Theorem::Corollary => v.verify_corollary(&grid, mode)?,
                Theorem::Sandwich => v.verify_sandwich(&grid)?,
                Theorem::DeltaFloor => v.verify_delta_pointwise(&grid)?,
                Theorem::Lower04 | Theorem::FinalAssembly => unreachable!(),
            }
        }
    };
    let report = if timing { report } else { report.without_timing() };
    Ok(Outcome {
        failed: !report.passed(),
        rendered: report_rendered(&report)?,
    })
}

fn bonferroni_cmd(run: &Run, y: Option<f64>) -> anyhow::Result<Outcome> {
    let pt = run.primes(1000)?;
    let b = match y {
        Some(y) => bonferroni_bounds(y, &pt)?,
        None => bonferroni_max_threshold(&pt)?,
    };
    Ok(Rendered::single(
        vec![("y", b.y.into()), ("a", b.a.into()), ("b", b.b.into()), ("threshold", b.threshold.into())],
        &b,
    )?
    .into())
}

/// A usage problem found after parsing.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn dispatch(cli: &Cli) -> anyhow::Result<Outcome> {
    let run = Run {
        cache_dir: cli.cache_dir.clone(),
    };
    match cli.command {
        Command::Phi { x, y, method } => phi_cmd(&run, x, y, method),
        Command::Omega { u } => omega_cmd(&run, u),
        Command::Rho { u } => rho_cmd(&run, u),
        Command::Li { z } => li_cmd(z),
        Command::Mu { y, u } => mu_cmd(&run, y, u),
        Command::MainTerm { x, y } => main_term_cmd(&run, x, y),
        Command::Constants { mode, y0 } => constants_cmd(mode, y0),
        Command::DeltaBounds { branch, variant } => delta_cmd(branch, variant),
        Command::Verify {
            theorem,
            mode,
            x_cap,
            extended,
            timing,
        } => {
            let mut builder = rayon::ThreadPoolBuilder::new();
            if let Some(n) = cli.workers {
                builder = builder.num_threads(n);
            }
            let pool = builder.build().context("worker pool")?;
            pool.install(|| verify_cmd(&run, theorem, mode.into(), x_cap, extended, timing))
        }
        Command::Bonferroni { y } => bonferroni_cmd(&run, y),
    }
}

fn exit_code_for(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<Usage>().is_some() {
        return EXIT_USAGE;
    }
    match e.downcast_ref::<rough_core::Error>() {
        Some(rough_core::Error::OutOfDomain { .. } | rough_core::Error::BeyondSieveLimit { .. }) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    if cli.workers == Some(0) {
        eprintln!("error: --workers must be at least 1");
        return ExitCode::from(EXIT_USAGE);
    }
    match dispatch(&cli) {
        Ok(out) => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            if let Err(e) = out.rendered.write(cli.format, &mut lock).and_then(|_| Ok(lock.flush()?)) {
                eprintln!("error: {e:#}");
                return ExitCode::from(EXIT_FAILURE);
            }
            if out.failed {
                ExitCode::from(EXIT_VIOLATIONS)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = exit_code_for(&e);
            if code == EXIT_USAGE {
                eprintln!("run `rough --help` for usage");
            }
            ExitCode::from(code)
        }
    }
}
