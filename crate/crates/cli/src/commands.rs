//! Subcommand definitions and their record tables.

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use rayon::prelude::*;

use hjwell::algebra::{parse_expression, parse_rational, BigRational, Expression};
use hjwell::hj::{energy_series, expand_harmonic, expand_quartic, lambda_series, Branch, HJExpansion};
use hjwell::models::harmonic_delta::MIN_GL2;
use hjwell::models::{
    harmonic_delta_splitting, regulated_f_diff, solve_kappa, triple_delta_chi_check, HarmonicDeltaSpec,
    TripleDeltaSpec,
};
use hjwell::oracle::{self, Method};
use hjwell::potential::PotentialSpec;
use hjwell::splitting::{assemble_leading, assemble_splitting, compute_coeffs};
use hjwell::verify::{run_one, suite, Check};
use hjwell::wavefunction::{build_phi_pair, tune_energy, PhiConfig, PhiPair};

use crate::table::{parse_rendered, Cell, Format, Table};
use crate::{CliError, Report};

/// Reference expansion table at `a = 1`, orders 0..4.
pub const GOLDEN_EXPANSION: &str = include_str!("../tests/golden/quartic_order4.txt");

#[derive(Debug, Clone, Parser)]
#[command(
    name = "hjwell",
    version,
    about = "Ground-doublet asymptotics, splittings and oracles for one-dimensional double wells",
    after_help = "Every subcommand also accepts --config FILE with `key = value` lines \
                  mirroring its flags; flags given on the command line win.\n\
                  HJWELL_PRECISION sets the digits after the point in numeric output (default 16)."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Exact order-by-order Hamilton-Jacobi expansion with energy and Wronskian series.
    #[command(args_override_self = true)]
    Expand(ExpandArgs),
    /// The φ₊/φ₋ pair on the grid, or a one-row summary.
    #[command(args_override_self = true)]
    Phi(PhiArgs),
    /// Doublet energies and splitting by the iteration and Wronskian routes.
    #[command(args_override_self = true)]
    Split(SplitArgs),
    /// Brute-force lowest even and odd levels.
    #[command(args_override_self = true)]
    Oracle(OracleArgs),
    /// Exactly solvable point-interaction models.
    #[command(name = "delta-models", args_override_self = true)]
    DeltaModels(DeltaArgs),
    /// Repeats another subcommand over a list of values of one flag.
    #[command(args_override_self = true)]
    Sweep(SweepArgs),
    /// Runs every invariant check.
    #[command(args_override_self = true)]
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExpandPotential {
    Quartic,
    Harmonic,
}

#[derive(Debug, Clone, Args)]
pub struct ExpandArgs {
    #[arg(long, value_enum, default_value_t = ExpandPotential::Quartic)]
    pub potential: ExpandPotential,
    /// Highest order N of S_N.
    #[arg(long, default_value_t = 4)]
    pub order: usize,
    /// Highest Wronskian-series term; at most N - 1 (the default).
    #[arg(long)]
    pub lambda_order: Option<usize>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long, default_value_t = 6.0)]
    pub g: f64,
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    /// Grid points (odd).
    #[arg(long, default_value_t = 20_001)]
    pub n: usize,
    /// Grid half-width; default 3a + 10/√(ga).
    #[arg(long)]
    pub x_max: Option<f64>,
    /// Window constant c in |α - a| ≤ c/√(ga).
    #[arg(long, default_value_t = 5.0)]
    pub c_alpha: f64,
}

impl GridArgs {
    fn config(&self) -> Result<PhiConfig, CliError> {
        positive("g", self.g)?;
        positive("a", self.a)?;
        positive("c-alpha", self.c_alpha)?;
        if let Some(x) = self.x_max {
            positive("x-max", x)?;
        }
        if self.n < 101 || self.n % 2 == 0 {
            return Err(CliError::Usage(format!("--n must be odd and at least 101, got {}", self.n)));
        }
        Ok(PhiConfig { n: self.n, x_max: self.x_max, c_alpha: self.c_alpha })
    }
}

#[derive(Debug, Clone, Args)]
pub struct PhiArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    /// Energy of the pair; default tunes the node of φ₊ to x = -a.
    #[arg(long, allow_negative_numbers = true)]
    pub energy: Option<f64>,
    /// Emit every k-th grid point.
    #[arg(long, default_value_t = 100)]
    pub stride: usize,
    /// One row of derived quantities instead of the profile.
    #[arg(long)]
    pub summary: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Iteration,
    WronskianLeading,
    Both,
}

#[derive(Debug, Clone, Args)]
pub struct SplitArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    /// Order of the ε expansion for the iteration route.
    #[arg(long, default_value_t = 1)]
    pub order: usize,
    #[arg(long, value_enum, default_value_t = RouteArg::Both)]
    pub route: RouteArg,
    /// Also run the eigensolver on the same grid size and report relative errors.
    #[arg(long)]
    pub oracle: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Quartic,
    Harmonic,
    TripleDelta,
    HarmonicDelta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Fd,
    Numerov,
}

/// Potential parameters; each family reads its own and rejects the rest.
#[derive(Debug, Clone, Args)]
pub struct FamilyParams {
    #[arg(long)]
    pub g: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub u: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub l: Option<f64>,
    /// Strength Λ of the central delta.
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
}

impl FamilyParams {
    fn only(&self, family: &str, allowed: &[&str]) -> Result<(), CliError> {
        let given = [
            ("g", self.g),
            ("a", self.a),
            ("u", self.u),
            ("q", self.q),
            ("l", self.l),
            ("lambda", self.lambda),
        ];
        for (name, v) in given {
            if v.is_some() && !allowed.contains(&name) {
                return Err(CliError::Usage(format!("--{name} does not apply to the {family} potential")));
            }
        }
        Ok(())
    }

    fn potential(&self, family: Family) -> Result<PotentialSpec, CliError> {
        let p = match family {
            Family::Quartic => {
                self.only("quartic", &["g", "a"])?;
                PotentialSpec::Quartic { g: self.g.unwrap_or(6.0), a: self.a.unwrap_or(1.0) }
            }
            Family::Harmonic => {
                self.only("harmonic", &["g"])?;
                PotentialSpec::Harmonic { g: self.g.unwrap_or(2.0) }
            }
            Family::TripleDelta => {
                self.only("triple-delta", &["u", "q", "l"])?;
                let s = self.triple();
                PotentialSpec::TripleDelta { u: s.u, q: s.q, l: s.l }
            }
            Family::HarmonicDelta => {
                self.only("harmonic-delta", &["g", "l", "lambda"])?;
                let s = self.harmonic_delta();
                PotentialSpec::HarmonicDelta { g: s.g, l: s.l, lambda: s.lambda }
            }
        };
        p.validate()?;
        Ok(p)
    }

    fn triple(&self) -> TripleDeltaSpec {
        TripleDeltaSpec { u: self.u.unwrap_or(1.0), q: self.q.unwrap_or(0.5), l: self.l.unwrap_or(3.0) }
    }

    fn harmonic_delta(&self) -> HarmonicDeltaSpec {
        HarmonicDeltaSpec { g: self.g.unwrap_or(4.0), l: self.l.unwrap_or(1.5), lambda: self.lambda.unwrap_or(5.0) }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[arg(long, value_enum, default_value_t = Family::Quartic)]
    pub potential: Family,
    #[command(flatten)]
    pub params: FamilyParams,
    #[arg(long, value_enum, default_value_t = MethodArg::Numerov)]
    pub method: MethodArg,
    #[arg(long, default_value_t = 20_001)]
    pub n: usize,
    /// Box half-width; default from the decay of the potential.
    #[arg(long)]
    pub x_max: Option<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DeltaModel {
    TripleDelta,
    HarmonicDelta,
}

#[derive(Debug, Clone, Args)]
pub struct DeltaArgs {
    #[arg(long, value_enum)]
    pub model: DeltaModel,
    #[command(flatten)]
    pub params: FamilyParams,
    /// Expansion order in e^{-gl²} (harmonic-delta; 1 or 2).
    #[arg(long)]
    pub order: Option<usize>,
    /// Point x ≥ 0 for the regulated F(x) - F(0) (harmonic-delta; default l).
    #[arg(long)]
    pub x: Option<f64>,
    /// Decreasing regulator values (harmonic-delta).
    #[arg(long, value_delimiter = ',')]
    pub regulators: Option<Vec<f64>>,
    /// Sample points for the χ check (triple-delta) and the oracle grid.
    #[arg(long, default_value_t = 20_001)]
    pub n: usize,
    /// Also run the eigensolver and report the ground-energy discrepancy.
    #[arg(long)]
    pub oracle: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Flag of the inner command to vary, without dashes (e.g. `g`).
    #[arg(long)]
    pub param: String,
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    pub values: Vec<f64>,
    /// Worker threads; default all cores.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[command(flatten)]
    pub out: OutputArgs,
    /// Inner command and its flags, after `--`.
    #[arg(last = true, required = true)]
    pub command: Vec<String>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Keep checks whose module or name contains this text.
    #[arg(long)]
    pub filter: Option<String>,
    /// Worker threads; default all cores.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[command(flatten)]
    pub out: OutputArgs,
}

impl Command {
    pub fn output(&self) -> (Format, Option<PathBuf>) {
        let o = match self {
            Command::Expand(a) => &a.out,
            Command::Phi(a) => &a.out,
            Command::Split(a) => &a.out,
            Command::Oracle(a) => &a.out,
            Command::DeltaModels(a) => &a.out,
            Command::Sweep(a) => &a.out,
            Command::Verify(a) => &a.out,
        };
        (o.format, o.output.clone())
    }
}

fn positive(name: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--{name} must be finite and positive, got {v}")))
    }
}

pub fn run(cmd: &Command) -> Result<Report, CliError> {
    match cmd {
        Command::Expand(a) => expand(a).map(Report::from),
        Command::Phi(a) => phi(a).map(Report::from),
        Command::Split(a) => split(a).map(Report::from),
        Command::Oracle(a) => oracle_cmd(a).map(Report::from),
        Command::DeltaModels(a) => delta_models(a).map(Report::from),
        Command::Sweep(a) => sweep(a),
        Command::Verify(a) => verify(a),
    }
}

fn pool(jobs: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    if jobs == Some(0) {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Numeric(format!("cannot start worker threads: {e}")))
}

fn expansion_rows(t: &mut Table, e: &HJExpansion) {
    let branch = e.branch.map(|b| b.label().to_string());
    for n in 0..=e.order {
        t.push(vec![
            ("section", "action".into()),
            ("branch", branch.clone().into()),
            ("n", n.into()),
            ("s_prime", e.s_prime[n].to_string().into()),
            ("s", e.s[n].to_string().into()),
            ("e_prev", n.checked_sub(1).map(|m| e.energies[m].to_string()).into()),
        ]);
    }
}

fn coefficient_row(t: &mut Table, section: &str, m: usize, c: &BigRational) {
    t.push(vec![
        ("section", section.into()),
        ("n", m.into()),
        ("coefficient", c.to_string().into()),
        ("approx", c.to_f64().unwrap_or(f64::NAN).into()),
    ]);
}

pub fn expand(a: &ExpandArgs) -> Result<Table, CliError> {
    let mut t = Table::default();
    match a.potential {
        ExpandPotential::Harmonic => {
            if a.lambda_order.is_some() {
                return Err(CliError::Usage("--lambda-order applies to the quartic potential only".into()));
            }
            let e = expand_harmonic(a.order)?;
            expansion_rows(&mut t, &e);
            for (m, c) in &energy_series(&e).terms {
                coefficient_row(&mut t, "energy", *m, c);
            }
        }
        ExpandPotential::Quartic => {
            let max_lambda = a.order.checked_sub(1);
            if let (Some(l), m) = (a.lambda_order, max_lambda) {
                if m.map_or(true, |m| l > m) {
                    return Err(CliError::Usage(format!(
                        "--lambda-order {l} needs --order at least {}; got {}",
                        l + 1,
                        a.order
                    )));
                }
            }
            let plus = expand_quartic(a.order, Branch::Plus)?;
            let minus = expand_quartic(a.order, Branch::Minus)?;
            expansion_rows(&mut t, &plus);
            expansion_rows(&mut t, &minus);
            for (m, c) in &energy_series(&plus).terms {
                coefficient_row(&mut t, "energy", *m, c);
            }
            if let Some(n) = a.lambda_order.or(max_lambda) {
                for (m, c) in lambda_series(&plus, &minus, n)?.terms.iter().enumerate() {
                    coefficient_row(&mut t, "lambda", m, c);
                }
            }
        }
    }
    Ok(t)
}

fn pair_for(grid: &GridArgs, energy: Option<f64>) -> Result<PhiPair, CliError> {
    let cfg = grid.config()?;
    match energy {
        Some(e) => {
            if !e.is_finite() {
                return Err(CliError::Usage("--energy must be finite".into()));
            }
            Ok(build_phi_pair(e, grid.g, grid.a, &cfg)?)
        }
        None => Ok(tune_energy(grid.g, grid.a, &cfg)?),
    }
}

pub fn phi(a: &PhiArgs) -> Result<Table, CliError> {
    if a.stride == 0 {
        return Err(CliError::Usage("--stride must be at least 1".into()));
    }
    let pair = pair_for(&a.grid, a.energy)?;
    let mut t = Table::default();
    let (g, am) = (a.grid.g, a.grid.a);
    if a.summary {
        let plus = expand_quartic(3, Branch::Plus)?;
        let minus = expand_quartic(3, Branch::Minus)?;
        let series = lambda_series(&plus, &minus, 2)?.value(g, am, 2);
        let xs = pair.xs();
        t.push(vec![
            ("g", g.into()),
            ("a", am.into()),
            ("n", xs.len().into()),
            ("x_max", xs[xs.len() - 1].into()),
            ("e", pair.e.into()),
            ("e_lo", pair.e_lo.into()),
            ("alpha", pair.alpha.into()),
            ("lambda_w", pair.lambda_w.into()),
            ("lambda_series", series.into()),
            ("wronskian_variation", pair.wronskian_variation(-2.0 * am, 2.0 * am).into()),
        ]);
        return Ok(t);
    }
    let n = pair.xs().len();
    let mut idx: Vec<usize> = (0..n).step_by(a.stride).collect();
    if idx.last() != Some(&(n - 1)) {
        idx.push(n - 1);
    }
    for i in idx {
        t.push(vec![
            ("x", pair.xs()[i].into()),
            ("phi_plus", pair.phi_plus.value(i).into()),
            ("phi_minus", pair.phi_minus.value(i).into()),
            ("ln_abs_phi_plus", pair.phi_plus.ln_abs(i).into()),
            ("ln_abs_phi_minus", pair.phi_minus.ln_abs(i).into()),
        ]);
    }
    Ok(t)
}

pub fn split(a: &SplitArgs) -> Result<Table, CliError> {
    let cfg = a.grid.config()?;
    let (g, am) = (a.grid.g, a.grid.a);
    let pair = tune_energy(g, am, &cfg)?;
    let coeffs = compute_coeffs(&pair, a.order.max(1))?;
    let routes: &[RouteArg] = match a.route {
        RouteArg::Both => &[RouteArg::Iteration, RouteArg::WronskianLeading],
        RouteArg::Iteration => &[RouteArg::Iteration],
        RouteArg::WronskianLeading => &[RouteArg::WronskianLeading],
    };
    let reference = if a.oracle {
        let r = oracle::solve(&PotentialSpec::Quartic { g, a: am }, Method::Numerov, a.grid.n, None)?;
        r.check_states()?;
        Some(r)
    } else {
        None
    };
    let mut t = Table::default();
    for route in routes {
        let (name, res) = match route {
            RouteArg::Iteration => ("iteration", assemble_splitting(&pair, &coeffs, a.order)?),
            _ => ("wronskian_leading", assemble_leading(g, am, pair.e + pair.e_lo)),
        };
        let mut row: Vec<(&str, Cell)> = vec![
            ("g", g.into()),
            ("a", am.into()),
            ("route", name.into()),
            ("order", res.order_used.into()),
            ("e_center", res.e_center.into()),
            ("delta_e", res.delta_e.into()),
            ("delta_od", res.delta_od.into()),
            ("e_even", res.e_even.into()),
            ("e_odd", res.e_odd.into()),
            ("half_gap", res.half_gap().into()),
            ("lambda_w", pair.lambda_w.into()),
            ("epsilon", coeffs.epsilon.into()),
            ("alpha", pair.alpha.into()),
        ];
        const NAMES: [(&str, &str); 4] = [("a0", "b0"), ("a1", "b1"), ("a2", "b2"), ("a3", "b3")];
        for (k, (na, nb)) in NAMES.iter().enumerate().take(coeffs.a.len().min(coeffs.b.len())) {
            row.push((na, coeffs.a[k].into()));
            row.push((nb, coeffs.b[k].into()));
        }
        if let Some(r) = &reference {
            row.push(("oracle_half_gap", r.splitting().into()));
            row.push(("oracle_midpoint", r.midpoint().into()));
            row.push(("rel_error_half_gap", ((res.half_gap() - r.splitting()) / r.splitting()).abs().into()));
        }
        t.push(row);
    }
    Ok(t)
}

fn method(m: MethodArg) -> Method {
    match m {
        MethodArg::Fd => Method::Fd,
        MethodArg::Numerov => Method::Numerov,
    }
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Quartic => "quartic",
        Family::Harmonic => "harmonic",
        Family::TripleDelta => "triple-delta",
        Family::HarmonicDelta => "harmonic-delta",
    }
}

pub fn oracle_cmd(a: &OracleArgs) -> Result<Table, CliError> {
    let p = a.params.potential(a.potential)?;
    if a.n < 101 || a.n % 2 == 0 {
        return Err(CliError::Usage(format!("--n must be odd and at least 101, got {}", a.n)));
    }
    if let Some(x) = a.x_max {
        positive("x-max", x)?;
    }
    let r = oracle::solve(&p, method(a.method), a.n, a.x_max)?;
    let states = r.check_states();
    let mut t = Table::default();
    t.push(vec![
        ("potential", family_name(a.potential).into()),
        ("method", format!("{:?}", a.method).to_lowercase().into()),
        ("n", a.n.into()),
        ("x_max", r.x_max.into()),
        ("h", r.h.into()),
        ("e_even", r.e_even.into()),
        ("e_odd", r.e_odd.into()),
        ("e_even_err", r.e_even_err.into()),
        ("e_odd_err", r.e_odd_err.into()),
        ("half_gap", r.splitting().into()),
        ("midpoint", r.midpoint().into()),
        ("states_ok", states.is_ok().into()),
    ]);
    states?;
    Ok(t)
}

pub fn delta_models(a: &DeltaArgs) -> Result<Table, CliError> {
    if a.n < 101 || a.n % 2 == 0 {
        return Err(CliError::Usage(format!("--n must be odd and at least 101, got {}", a.n)));
    }
    let mut t = Table::default();
    match a.model {
        DeltaModel::TripleDelta => {
            if a.order.is_some() || a.x.is_some() || a.regulators.is_some() {
                return Err(CliError::Usage("--order, --x and --regulators apply to harmonic-delta only".into()));
            }
            let p = a.params.potential(Family::TripleDelta)?;
            let s = a.params.triple();
            let sol = solve_kappa(&s)?;
            let chi = triple_delta_chi_check(&s, a.n)?;
            let mut row: Vec<(&str, Cell)> = vec![
                ("model", "triple-delta".into()),
                ("u", s.u.into()),
                ("q", s.q.into()),
                ("l", s.l.into()),
                ("kappa", sol.kappa.into()),
                ("kappa_residual", sol.residual.into()),
                ("iterations", sol.iterations.into()),
                ("e_ev", sol.e_ev.into()),
                ("e_phi", sol.e_phi.into()),
                ("lambda_w", sol.lambda_w.into()),
                ("delta_e", chi.delta_e.into()),
                ("max_chi", chi.max_chi.into()),
                ("max_psi", chi.max_psi.into()),
                ("chi_ratio", (chi.max_chi / chi.max_psi).into()),
            ];
            if a.oracle {
                let r = oracle::solve(&p, Method::Numerov, a.n, None)?;
                row.push(("oracle_e_even", r.e_even.into()));
                row.push(("rel_error_e_even", ((sol.e_ev - r.e_even) / r.e_even).abs().into()));
            }
            t.push(row);
        }
        DeltaModel::HarmonicDelta => {
            let p = a.params.potential(Family::HarmonicDelta)?;
            let s = a.params.harmonic_delta();
            let order = a.order.unwrap_or(2);
            if !(1..=2).contains(&order) {
                return Err(CliError::Usage(format!("--order must be 1 or 2, got {order}")));
            }
            let x = a.x.unwrap_or(s.l);
            if !(x.is_finite() && x >= 0.0) {
                return Err(CliError::Usage(format!("--x must be finite and non-negative, got {x}")));
            }
            let regs = a.regulators.clone().unwrap_or_else(|| vec![1e-2, 1e-3, 1e-4]);
            let delta_e = harmonic_delta_splitting(&s, order, MIN_GL2)?;
            let f = regulated_f_diff(&s, x, &regs)?;
            let mut row: Vec<(&str, Cell)> = vec![
                ("model", "harmonic-delta".into()),
                ("g", s.g.into()),
                ("l", s.l.into()),
                ("lambda", s.lambda.into()),
                ("order", order.into()),
                ("delta_e", delta_e.into()),
                ("e_even", (0.5 * s.g + delta_e).into()),
                ("x", x.into()),
                ("f_diff", f.limit.into()),
                ("f_diff_error", f.error.into()),
            ];
            if a.oracle {
                let r = oracle::solve(&p, Method::Numerov, a.n, None)?;
                row.push(("oracle_e_even", r.e_even.into()));
                row.push(("oracle_delta_e", (r.e_even - 0.5 * s.g).into()));
            }
            t.push(row);
        }
    }
    Ok(t)
}

fn sweep_value(v: f64) -> String {
    // Integral values print without a fraction so integer flags accept them.
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:e}")
    }
}

pub fn sweep(a: &SweepArgs) -> Result<Report, CliError> {
    let param = a.param.trim_start_matches('-');
    if param.is_empty() {
        return Err(CliError::Usage("--param must name a flag".into()));
    }
    if let Some(v) = a.values.iter().find(|v| !v.is_finite()) {
        return Err(CliError::Usage(format!("sweep values must be finite, got {v}")));
    }
    if matches!(a.command.first().map(String::as_str), Some("sweep") | Some("verify")) {
        return Err(CliError::Usage("sweep cannot wrap sweep or verify".into()));
    }
    let build = |v: f64| {
        let mut args = vec!["hjwell".to_string()];
        args.extend(a.command.iter().cloned());
        args.push(format!("--{param}={}", sweep_value(v)));
        Cli::try_parse_from(&args)
    };
    // Flags the inner command does not know are usage errors for the whole sweep.
    for &v in &a.values {
        if let Err(e) = build(v) {
            if matches!(
                e.kind(),
                ErrorKind::UnknownArgument | ErrorKind::InvalidSubcommand | ErrorKind::MissingRequiredArgument
            ) {
                return Err(CliError::Usage(e.to_string()));
            }
        }
    }
    let results: Vec<Result<Report, String>> = pool(a.jobs)?.install(|| {
        a.values
            .par_iter()
            .map(|&v| {
                let cli = build(v).map_err(|e| e.to_string().lines().next().unwrap_or("").to_string())?;
                run(&cli.command).map_err(|e| e.message().to_string())
            })
            .collect()
    });
    let mut t = Table::default();
    t.columns = vec!["sweep_param".into(), "sweep_value".into()];
    for r in results.iter().flatten() {
        for c in &r.table.columns {
            if !t.columns.contains(c) {
                t.columns.push(c.clone());
            }
        }
    }
    t.columns.push("error".into());
    let mut failed = 0;
    for (&v, r) in a.values.iter().zip(&results) {
        let prefix = [("sweep_param", Cell::from(param)), ("sweep_value", Cell::from(v))];
        match r {
            Ok(rep) => {
                let mut sub = rep.table.clone();
                if let Some(f) = &rep.failure {
                    failed += 1;
                    for row in &mut sub.rows {
                        row.push(Cell::Text(f.clone()));
                    }
                    sub.columns.push("error".into());
                }
                t.extend_tagged(&prefix, &sub);
            }
            Err(e) => {
                failed += 1;
                let mut row = prefix.to_vec();
                row.push(("error", e.clone().into()));
                t.push(row);
            }
        }
    }
    let failure = (failed > 0).then(|| format!("{failed} of {} sweep points failed", a.values.len()));
    Ok(Report { table: t, failure })
}

/// Compares `expand --order 4` records with the reference table; returns
/// the number of entries matched.
pub fn compare_expansion(rows: &[Vec<(String, String)>], golden: &str) -> Result<usize, String> {
    let cell = |row: &Vec<(String, String)>, k: &str| -> String {
        row.iter().find(|(c, _)| c == k).map(|(_, v)| v.clone()).unwrap_or_default()
    };
    let mut matched = 0;
    for line in golden.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let (key, expr) = line.split_once('=').ok_or_else(|| format!("bad reference line {line:?}"))?;
        let parts: Vec<&str> = key.split_whitespace().collect();
        let [kind, branch, n] = parts[..] else {
            return Err(format!("bad reference key {key:?}"));
        };
        let want = parse_expression(expr).map_err(|e| format!("reference {key}: {e}"))?;
        let found = match kind {
            "s" | "s_prime" => rows
                .iter()
                .find(|r| cell(r, "section") == "action" && cell(r, "branch") == branch && cell(r, "n") == n)
                .map(|r| cell(r, kind)),
            "energy" | "lambda" => {
                rows.iter().find(|r| cell(r, "section") == kind && cell(r, "n") == n).map(|r| cell(r, "coefficient"))
            }
            _ => return Err(format!("unknown reference kind {kind:?}")),
        }
        .ok_or_else(|| format!("no output row for {key}"))?;
        let got: Expression = if kind == "energy" || kind == "lambda" {
            parse_rational(&found).map(|c| parse_expression(&c.to_string()).expect("rational text parses"))
        } else {
            parse_expression(&found)
        }
        .map_err(|e| format!("output {key} = {found:?}: {e}"))?;
        if got != want {
            return Err(format!("{key}: output {found} differs from reference {}", expr.trim()));
        }
        matched += 1;
    }
    Ok(matched)
}

type CliProbe = (&'static str, fn() -> Result<String, String>);

fn cli_check((name, f): &CliProbe) -> Check {
    let t = std::time::Instant::now();
    let (passed, detail) = match f() {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Check { module: "cli", name, passed, detail, flagged: Vec::new(), seconds: t.elapsed().as_secs_f64() }
}

fn render_args(args: &[&str], format: Format) -> Result<(Report, String), String> {
    // Right after the subcommand, so a sweep does not pass it to its inner command.
    let mut v: Vec<String> = std::iter::once("hjwell").chain(args.iter().copied()).map(String::from).collect();
    v.insert(2, format!("--format={}", if format == Format::Csv { "csv" } else { "json" }));
    let (report, text, _) = crate::execute(v).map_err(|e| format!("{args:?}: {}", e.message()))?;
    Ok((report, text))
}

const PROBES: [&[&str]; 5] = [
    &["expand", "--order", "4"],
    &["oracle", "--potential", "harmonic", "--g", "2", "--n", "2001", "--method", "fd"],
    &["delta-models", "--model", "triple-delta", "--n", "2001"],
    &["delta-models", "--model", "harmonic-delta", "--order", "1"],
    &["sweep", "--param", "g", "--values", "4,6", "--", "split", "--route", "wronskian-leading"],
];

const CLI_CHECKS: [CliProbe; 5] = [
        ("expansion matches the reference table", || {
            let (_, text) = render_args(&["expand", "--order", "4"], Format::Csv)?;
            let rows = parse_rendered(&text, Format::Csv)?;
            compare_expansion(&rows, GOLDEN_EXPANSION).map(|n| format!("{n} exact entries"))
        }),
        ("identical config gives identical bytes", || {
            for args in PROBES {
                for f in [Format::Csv, Format::Json] {
                    if render_args(args, f)?.1 != render_args(args, f)?.1 {
                        return Err(format!("{args:?} output differs between runs"));
                    }
                }
            }
            Ok(format!("{} commands x 2 formats", PROBES.len()))
        }),
        ("csv and json carry identical content", || {
            for args in PROBES {
                let c = parse_rendered(&render_args(args, Format::Csv)?.1, Format::Csv)?;
                let j = parse_rendered(&render_args(args, Format::Json)?.1, Format::Json)?;
                if c != j {
                    return Err(format!("{args:?}: csv and json differ"));
                }
            }
            Ok(format!("{} commands", PROBES.len()))
        }),
        ("single-value sweep equals the plain run", || {
            let plain = ["split", "--g", "6", "--route", "wronskian-leading"];
            let (_, direct) = render_args(&plain, Format::Csv)?;
            let mut swept = vec!["sweep", "--param", "g", "--values", "6", "--"];
            swept.extend(["split", "--route", "wronskian-leading"]);
            let (_, text) = render_args(&swept, Format::Csv)?;
            let strip = |rows: Vec<Vec<(String, String)>>| -> Vec<Vec<(String, String)>> {
                rows.into_iter()
                    .map(|r| r.into_iter().filter(|(k, _)| !k.starts_with("sweep_") && k != "error").collect())
                    .collect()
            };
            let a = parse_rendered(&direct, Format::Csv)?;
            let b = strip(parse_rendered(&text, Format::Csv)?);
            if a == b {
                Ok("rows agree".into())
            } else {
                Err("sweep rows differ from the plain run".into())
            }
        }),
        ("out-of-window sweep point fails alone", || {
            let args = ["sweep", "--param", "g", "--values", "0.5,6", "--", "split", "--route", "wronskian-leading"];
            let (report, text) = render_args(&args, Format::Csv)?;
            let rows = parse_rendered(&text, Format::Csv)?;
            let err = |i: usize| rows[i].iter().find(|(k, _)| k == "error").map(|(_, v)| v.clone()).unwrap_or_default();
            match (report.failure.is_some(), rows.len(), err(0).is_empty(), err(1).is_empty()) {
                (true, 2, false, true) => Ok(format!("g = 0.5: {}", err(0))),
                _ => Err(format!("unexpected sweep outcome: {rows:?}")),
            }
        }),
];

pub fn verify(a: &VerifyArgs) -> Result<Report, CliError> {
    let keep = |module: &str, name: &str| a.filter.as_deref().map_or(true, |f| module.contains(f) || name.contains(f));
    let invariants: Vec<_> = suite().into_iter().filter(|i| keep(i.module, i.name)).collect();
    let mut checks: Vec<Check> = pool(a.jobs)?.install(|| invariants.par_iter().map(run_one).collect());
    checks.extend(CLI_CHECKS.iter().filter(|(name, _)| keep("cli", name)).map(cli_check));
    if checks.is_empty() {
        return Err(CliError::Usage(format!("no checks match {:?}", a.filter.as_deref().unwrap_or(""))));
    }
    let mut t = Table::default();
    for c in &checks {
        t.push(vec![
            ("module", c.module.into()),
            ("name", c.name.into()),
            ("passed", c.passed.into()),
            ("flagged", c.flagged.join("; ").into()),
            ("seconds", c.seconds.into()),
            ("detail", c.detail.clone().into()),
        ]);
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    let failure = (failed > 0).then(|| format!("{failed} of {} checks failed", checks.len()));
    Ok(Report { table: t, failure })
}
