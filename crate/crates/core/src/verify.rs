//! Invariant suite: every structural property the toolkit promises, as
//! named checks that report a pass flag and the measured figure.

use std::time::Instant;

use num_traits::{Signed, Zero};
use serde::Serialize;
use twofloat::TwoFloat;

use crate::algebra::{antiderivative, rat, ArithKind, Poly, RatFunc};
use crate::error::Result;
use crate::hj::{expand_quartic, hj_action_numeric, kinked_action, lambda_series, Branch};
use crate::models::harmonic_delta::{self, HarmonicDeltaSpec};
use crate::models::triple_delta::{self, TripleDeltaSpec};
use crate::numeric::grid::{add_scaled, ldexp, mul_scaled, GridFunction, Scaled};
use crate::numeric::quad::{integrate, QuadOptions};
use crate::oracle::{self, fd, Method};
use crate::potential::PotentialSpec;
use crate::splitting::{compute_coeffs, epsilon, split_quartic, splitting_leading, Route};
use crate::wavefunction::phi::{integrate_phi_plus_dd, sign_changes};
use crate::wavefunction::{tune_energy, GreenKernel, PhiConfig, PhiPair, Side};

/// Result of one check. `flagged` lists points where a property the theory
/// expects only asymptotically was seen to fail; they are reported, not hidden.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Verdict {
    pub passed: bool,
    pub detail: String,
    pub flagged: Vec<String>,
}

pub type Outcome = Result<Verdict>;

#[derive(Debug, Clone, Copy)]
pub struct Invariant {
    pub module: &'static str,
    pub name: &'static str,
    pub run: fn() -> Outcome,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub module: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub flagged: Vec<String>,
    pub seconds: f64,
}

pub fn run_one(inv: &Invariant) -> Check {
    let t = Instant::now();
    let v = (inv.run)().unwrap_or_else(|e| Verdict { passed: false, detail: format!("error: {e}"), flagged: Vec::new() });
    Check { module: inv.module, name: inv.name, passed: v.passed, detail: v.detail, flagged: v.flagged, seconds: t.elapsed().as_secs_f64() }
}

/// Runs the suite in order; `filter` keeps checks whose module or name contains it.
pub fn run_invariants(filter: Option<&str>) -> Vec<Check> {
    suite()
        .iter()
        .filter(|i| filter.map_or(true, |f| i.module.contains(f) || i.name.contains(f)))
        .map(run_one)
        .collect()
}

pub fn suite() -> Vec<Invariant> {
    macro_rules! inv {
        ($m:literal, $n:literal, $f:path) => {
            Invariant { module: $m, name: $n, run: $f }
        };
    }
    vec![
        inv!("exact-algebra", "antiderivative round trip", algebra_round_trip),
        inv!("exact-algebra", "canonical form", algebra_canonical),
        inv!("exact-algebra", "add/sub and mul/div inverses", algebra_inverses),
        inv!("exact-algebra", "evaluation homomorphism", algebra_homomorphism),
        inv!("hj-expansion", "recursion identity", hj_recursion),
        inv!("hj-expansion", "regularity at the primary minimum", hj_regularity),
        inv!("hj-expansion", "mirror symmetry", hj_mirror),
        inv!("hj-expansion", "positivity of the action", hj_positivity),
        inv!("hj-expansion", "kinked action vs numeric action", hj_kinked),
        inv!("wavefunction-numerics", "wronskian constancy", wf_wronskian),
        inv!("wavefunction-numerics", "product identity", wf_product),
        inv!("wavefunction-numerics", "monotone ratio", wf_monotone),
        inv!("wavefunction-numerics", "ordering inequalities", wf_ordering),
        inv!("wavefunction-numerics", "one node", wf_one_node),
        inv!("wavefunction-numerics", "divergent side", wf_divergent),
        inv!("splitting-iteration", "sign structure", split_signs),
        inv!("splitting-iteration", "route agreement", split_routes),
        inv!("splitting-iteration", "bounded first-order coefficients", split_theorem),
        inv!("splitting-iteration", "convergence direction", split_direction),
        inv!("oracle-eigensolver", "richardson consistency", oracle_richardson),
        inv!("oracle-eigensolver", "tuned energy inside the doublet", oracle_window),
        inv!("oracle-eigensolver", "coupling relation", oracle_coupling),
        inv!("oracle-eigensolver", "integrated wronskian relation", oracle_wronskian),
        inv!("model-potentials", "kappa exceeds u", model_kappa),
        inv!("model-potentials", "jump conditions", model_jumps),
        inv!("model-potentials", "green kernel representation", model_green),
        inv!("model-potentials", "oracle agreement", model_oracle),
        inv!("model-potentials", "chi vanishes for the triple delta", model_chi_triple),
        inv!("model-potentials", "chi proportional to phi+ for the quartic", model_chi_quartic),
    ]
}

fn verdict(passed: bool, detail: String) -> Outcome {
    Ok(Verdict { passed, detail, flagged: Vec::new() })
}

// ---------- exact algebra ----------

/// Small deterministic generator for sample functions.
struct Lcg(u64);

impl Lcg {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        self.0 >> 33
    }

    fn int(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next() % (hi - lo + 1) as u64) as i64
    }
}

/// Rational functions with rational poles, of degree at most 3 over 3.
fn samples(count: usize) -> Vec<RatFunc> {
    let roots = [rat(-2, 1), rat(-1, 1), rat(1, 2), rat(3, 1), rat(-5, 3)];
    let mut r = Lcg(0x5eed);
    (0..count)
        .map(|_| {
            let num = Poly::from_ints(&(0..=r.int(0, 3)).map(|_| r.int(-5, 5)).collect::<Vec<_>>());
            let mut den = Poly::one();
            for _ in 0..r.int(0, 3) {
                den = &den * &Poly::linear_root(&roots[r.int(0, 4) as usize]);
            }
            let num = if num.is_zero() { Poly::one() } else { num };
            RatFunc::new(num, den).expect("nonzero denominator")
        })
        .collect()
}

fn quartic_expansions(order: usize) -> Result<(crate::hj::HJExpansion, crate::hj::HJExpansion)> {
    Ok((expand_quartic(order, Branch::Plus)?, expand_quartic(order, Branch::Minus)?))
}

fn algebra_round_trip() -> Outcome {
    let (p, m) = quartic_expansions(8)?;
    let mut fs: Vec<RatFunc> = p.s_prime.iter().chain(m.s_prime.iter()).cloned().collect();
    fs.extend(samples(40));
    let anchor = rat(7, 4);
    let mut bad = 0;
    for f in &fs {
        if f.den().evaluate(&anchor).is_zero() {
            continue;
        }
        if antiderivative(f, &anchor, &rat(0, 1))?.derivative() != *f {
            bad += 1;
        }
    }
    verdict(bad == 0, format!("{} functions, {bad} mismatches", fs.len()))
}

fn is_canonical(f: &RatFunc) -> bool {
    f.num().gcd(f.den()).degree() == Some(0) && f.den().leading() == rat(1, 1)
}

fn algebra_canonical() -> Outcome {
    let s = samples(24);
    let mut count = 0;
    let mut bad = 0;
    for f in &s {
        for g in &s {
            for kind in [ArithKind::Add, ArithKind::Sub, ArithKind::Mul, ArithKind::Div] {
                if kind == ArithKind::Div && g.is_zero() {
                    continue;
                }
                let r = f.arith(g, kind)?;
                count += 1;
                if !r.is_zero() && !is_canonical(&r) {
                    bad += 1;
                }
            }
        }
    }
    // Equal functions built differently compare equal.
    let a = RatFunc::new(Poly::from_ints(&[-1, 0, 1]), Poly::from_ints(&[2, 2]))?;
    let b = RatFunc::new(Poly::from_ints(&[-1, 1]), Poly::from_ints(&[2]))?;
    verdict(bad == 0 && a == b, format!("{count} results, {bad} non-canonical; structural equality {}", a == b))
}

fn algebra_inverses() -> Outcome {
    let s = samples(30);
    let mut bad = 0;
    for w in s.windows(2) {
        let (f, g) = (&w[0], &w[1]);
        if f.add(g).sub(g) != *f {
            bad += 1;
        }
        if !g.is_zero() && f.mul(g).div(g)? != *f {
            bad += 1;
        }
    }
    verdict(bad == 0, format!("{} pairs, {bad} failures", s.len() - 1))
}

fn algebra_homomorphism() -> Outcome {
    let s = samples(30);
    let x0 = rat(3, 7);
    let mut bad = 0;
    let mut count = 0;
    for w in s.windows(2) {
        let (f, g) = (&w[0], &w[1]);
        let (fv, gv) = (f.evaluate(&x0)?, g.evaluate(&x0)?);
        for kind in [ArithKind::Add, ArithKind::Sub, ArithKind::Mul, ArithKind::Div] {
            if kind == ArithKind::Div && gv.is_zero() {
                continue;
            }
            let want = match kind {
                ArithKind::Add => &fv + &gv,
                ArithKind::Sub => &fv - &gv,
                ArithKind::Mul => &fv * &gv,
                ArithKind::Div => &fv / &gv,
            };
            count += 1;
            if f.arith(g, kind)?.evaluate(&x0)? != want {
                bad += 1;
            }
        }
    }
    verdict(bad == 0, format!("{count} evaluations at x = 3/7, {bad} mismatches"))
}

// ---------- Hamilton-Jacobi expansion ----------

const HJ_ORDER: usize = 8;

fn hj_recursion() -> Outcome {
    let (p, m) = quartic_expansions(HJ_ORDER)?;
    let two_v = RatFunc::from_poly(Poly::from_ints(&[-1, 0, 1]).pow(2));
    let mut bad = 0;
    for e in [&p, &m] {
        if !e.s_prime[0].mul(&e.s_prime[0]).sub(&two_v).is_zero() {
            bad += 1;
        }
        bad += (1..=HJ_ORDER).filter(|&n| !e.recursion_residual(n).is_zero()).count();
    }
    verdict(bad == 0, format!("orders 0..={HJ_ORDER} on both branches, {bad} nonzero residuals"))
}

fn hj_regularity() -> Outcome {
    let p = expand_quartic(HJ_ORDER, Branch::Plus)?;
    let one = rat(1, 1);
    let x_plus_1 = Poly::linear_root(&rat(-1, 1));
    let mut bad = 0;
    for f in &p.s_prime[1..] {
        let pure = f.den().degree().map_or(false, |d| *f.den() == x_plus_1.pow(d as u32));
        if f.den().evaluate(&one).is_zero() || !pure {
            bad += 1;
        }
    }
    verdict(bad == 0, format!("S_1'..S_{HJ_ORDER}' of the + branch: {bad} with a pole other than x = -a"))
}

fn hj_mirror() -> Outcome {
    let (p, m) = quartic_expansions(HJ_ORDER)?;
    let mut bad = 0;
    for n in 0..=HJ_ORDER {
        if m.s_prime[n] != p.s_prime[n].reflect().neg() {
            bad += 1;
        }
        // S(−)(x) = S(+)(−x): compare values at rational points, logs included.
        for x in [rat(-3, 2), rat(1, 3), rat(5, 2)] {
            let a = p.s[n].evaluate_split(&-x.clone())?;
            let b = m.s[n].evaluate_split(&x)?;
            if a.rational != b.rational || (a.to_f64() - b.to_f64()).abs() > 1e-13 * (1.0 + a.to_f64().abs()) {
                bad += 1;
            }
        }
    }
    let l1 = lambda_series(&p, &m, 3)?;
    let l2 = lambda_series(&m, &p, 3)?;
    let lam_ok = l1.terms == l2.terms && l1.exponent == l2.exponent && l1.amplitude == -l2.amplitude.clone();
    verdict(
        bad == 0 && lam_ok,
        format!("{bad} mirror mismatches; λ-series from (+,−) and (−,+) pairings agree: {lam_ok}"),
    )
}

fn hj_positivity() -> Outcome {
    let p = expand_quartic(0, Branch::Plus)?;
    let mut worst_analytic = f64::INFINITY;
    for k in 0..=160 {
        let x = rat(-2, 1) + rat(k, 20);
        let v = p.s[0].evaluate(&x)?;
        if v.is_negative() {
            return verdict(false, format!("S_0(+)({x}) = {v} < 0"));
        }
        worst_analytic = worst_analytic.min(num_traits::ToPrimitive::to_f64(&v).unwrap_or(f64::NAN));
    }
    let kinked_min = (0..=1200).map(|k| kinked_action(Branch::Plus, -6.0 + 0.01 * k as f64, 1.0)).fold(f64::INFINITY, f64::min);
    verdict(
        kinked_min >= 0.0,
        format!("analytic S_0(+) min {worst_analytic:.3e} on [-2a, 6a]; kinked action min {kinked_min:.3e} on [-6a, 6a]"),
    )
}

fn hj_kinked() -> Outcome {
    let q = PotentialSpec::Quartic { g: 1.0, a: 1.0 };
    let s_plus = |x: f64| (x - 1.0) * (x - 1.0) * (x + 2.0) / 3.0;
    let mut worst_match = 0.0f64;
    let mut crossover_ok = true;
    for k in 0..=80 {
        let x = -3.95 + 0.1 * k as f64;
        let kink = kinked_action(Branch::Plus, x, 1.0);
        let num = hj_action_numeric(&q, 1, x, 1e-12)?;
        worst_match = worst_match.max((kink - num).abs());
        if x < -1.0 {
            // Left of the remote minimum the analytic branch turns back down.
            let mirrored = 4.0 / 3.0 + (x + 1.0) * (x + 1.0) * (2.0 - x) / 3.0;
            crossover_ok &= (kink - mirrored).abs() < 1e-12 && (kink - s_plus(x)).abs() > 1e-6;
        } else {
            crossover_ok &= (kink - s_plus(x)).abs() < 1e-12;
        }
    }
    verdict(
        worst_match < 1e-10 && crossover_ok,
        format!("max |kinked - numeric| = {worst_match:.2e}; analytic for x > -a and mirrored beyond: {crossover_ok}"),
    )
}

// ---------- wavefunction numerics ----------

/// Grid fine enough to resolve the steep tails at the 1e-6 level.
const FINE_N: usize = 80_001;

fn fine_pair(g: f64) -> Result<PhiPair> {
    tune_energy(g, 1.0, &PhiConfig { n: FINE_N, ..PhiConfig::default() })
}

fn wf_wronskian() -> Outcome {
    let pair = fine_pair(6.0)?;
    let v = pair.wronskian_variation(f64::NEG_INFINITY, f64::INFINITY);
    verdict(v <= 1e-6, format!("g = 6, n = {FINE_N}: max |W - λ|/λ over the grid = {v:.3e}"))
}

fn product(pair: &PhiPair, i: usize) -> Scaled {
    mul_scaled(pair.phi_plus.scaled_at(i), pair.phi_minus.scaled_at(i))
}

fn wf_product() -> Outcome {
    let g = 6.0;
    let pair = fine_pair(g)?;
    let order = HJ_ORDER;
    let (p, m) = quartic_expansions(order)?;
    let width = 8.0 * (1.0 / g).sqrt();
    let mut worst = 0.0f64;
    let mut count = 0;
    for (i, &x) in pair.xs().iter().enumerate() {
        if (x * x - 1.0).abs() < width {
            continue;
        }
        let d = m.s_prime_sum(g, x, order) - p.s_prime_sum(g, x, order);
        let (v, k) = product(&pair, i);
        worst = worst.max((ldexp(v * d, k) / pair.lambda_w - 1.0).abs());
        count += 1;
    }
    verdict(
        worst <= 1e-6,
        format!("g = 6, S' through g^-{}: max |φ₊φ₋(S(−)'−S(+)')/λ − 1| = {worst:.3e} over {count} points with |x²−a²| ≥ 8√(a/g)", order - 1),
    )
}

/// `φ₋/φ₊` as (sign, ln|·|).
fn ratio(pair: &PhiPair, i: usize) -> (f64, f64) {
    (pair.phi_minus.values[i].signum() * pair.phi_plus.values[i].signum(), pair.phi_minus.ln_abs(i) - pair.phi_plus.ln_abs(i))
}

fn decreasing(a: (f64, f64), b: (f64, f64)) -> bool {
    match (a.0 > 0.0, b.0 > 0.0) {
        (true, true) => b.1 < a.1,
        (false, false) => b.1 > a.1,
        (true, false) => true,
        (false, true) => false,
    }
}

fn default_pair() -> Result<PhiPair> {
    tune_energy(6.0, 1.0, &PhiConfig::default())
}

fn wf_monotone() -> Outcome {
    let pair = default_pair()?;
    let n = pair.xs().len();
    let start = (0..n).find(|&i| pair.phi_plus.values[i] > 0.0 && pair.phi_plus.values[i..].iter().all(|&v| v > 0.0)).unwrap_or(n);
    let mut bad = 0;
    for i in start.max(1)..n - 1 {
        if pair.phi_minus.values[i] != 0.0 && pair.phi_minus.values[i + 1] != 0.0 && !decreasing(ratio(&pair, i), ratio(&pair, i + 1)) {
            bad += 1;
        }
    }
    verdict(bad == 0, format!("{} steps right of the node, {bad} non-decreasing", n - 1 - start))
}

fn sub(a: Scaled, b: Scaled) -> Scaled {
    add_scaled(a, (-b.0, b.1))
}

fn positive(a: Scaled) -> bool {
    a.0 > 0.0
}

/// `0 < d < bound` where `bound - d = rest` exactly; when `rest` is below the
/// resolution of `bound` the upper inequality is decided by the sign of `rest`.
fn strictly_between(d: Scaled, bound: Scaled, rest: Scaled) -> (bool, bool) {
    let margin = sub(bound, d);
    let resolved = positive(margin);
    let unresolved = margin.0 == 0.0 || (rest.1 < bound.1 - 50);
    (positive(d) && (resolved || (unresolved && positive(rest))), !resolved && unresolved)
}

fn wf_ordering() -> Outcome {
    let pair = default_pair()?;
    let (p, m) = (&pair.phi_plus, &pair.phi_minus);
    let idx = |x: f64| p.index_of(x);
    let mut r = Lcg(0x0bde);
    let mut bad = 0;
    let mut below_resolution = 0;
    let trials = 400;
    let gap = 10;
    let (lo, hi) = (idx(-pair.alpha) + gap, idx(pair.alpha) - gap);
    let right = p.len() - 1;
    for _ in 0..trials {
        // −α < x < y < α: 0 < φ₋(x)φ₊(y) − φ₋(y)φ₊(x) < φ₋(x)φ₊(y)
        let i = r.int(lo as i64, (hi - gap) as i64) as usize;
        let j = r.int((i + gap) as i64, hi as i64) as usize;
        let t1 = mul_scaled(m.scaled_at(i), p.scaled_at(j));
        let t2 = mul_scaled(m.scaled_at(j), p.scaled_at(i));
        let (ok, tiny) = strictly_between(sub(t1, t2), t1, t2);
        bad += usize::from(!ok);
        below_resolution += usize::from(tiny);
        // α < x < y: 0 < φ₋(x)φ₊(y) − φ₊(x)φ₋(y) < −φ₊(x)φ₋(y)
        let i = r.int((hi + 2 * gap) as i64, (right - gap) as i64) as usize;
        let j = r.int((i + gap) as i64, right as i64) as usize;
        let t1 = mul_scaled(m.scaled_at(i), p.scaled_at(j));
        let t2 = mul_scaled(p.scaled_at(i), m.scaled_at(j));
        let (ok, tiny) = strictly_between(sub(t1, t2), (-t2.0, t2.1), (-t1.0, t1.1));
        bad += usize::from(!ok);
        below_resolution += usize::from(tiny);
    }
    verdict(
        bad == 0,
        format!("{trials} pairs in each range, {bad} violations ({below_resolution} upper margins below double resolution, decided by sign)"),
    )
}

fn wf_one_node() -> Outcome {
    let pair = default_pair()?;
    let nodes = sign_changes(&pair.phi_plus);
    let at = nodes.first().map(|&i| pair.xs()[i]).unwrap_or(f64::NAN);
    verdict(nodes.len() == 1, format!("{} sign changes, first near x = {at:.6}", nodes.len()))
}

fn wf_divergent() -> Outcome {
    let g = 6.0;
    let pair = default_pair()?;
    let xs = pair.xs().to_vec();
    let o = oracle::solve(&pair.potential, Method::Numerov, 20_001, Some(xs[xs.len() - 1]))?;
    let gap = o.e_odd - o.e_even;
    let mut detail = Vec::new();
    let mut ok = true;
    for (label, e) in [("below E_even", o.e_even - gap), ("above E_odd", o.e_odd + gap)] {
        let f: GridFunction = integrate_phi_plus_dd(&PotentialSpec::Quartic { g, a: 1.0 }, TwoFloat::from(e), &xs)?;
        let rise = f.ln_abs(0) - f.ln_abs(f.index_of(-1.0));
        let tail = xs.len() / 10;
        let monotone = (0..tail).all(|i| f.ln_abs(i) > f.ln_abs(i + 1));
        ok &= rise > 20.0 && monotone;
        detail.push(format!("{label}: ln|φ₊(−x_max)/φ₊(−a)| = {rise:.1}, monotone tail {monotone}"));
    }
    verdict(ok, detail.join("; "))
}

// ---------- splitting iteration ----------

const SPLIT_G: [f64; 3] = [4.0, 6.0, 8.0];

fn split_signs() -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    for g in SPLIT_G {
        let r = split_quartic(g, 1.0, 1, Route::Iteration, &PhiConfig::default())?.result;
        ok &= r.delta_e < 0.0 && r.delta_od > 0.0;
        detail.push(format!("g={g}: Δ_e={:.3e} Δ_od={:.3e}", r.delta_e, r.delta_od));
    }
    verdict(ok, detail.join("; "))
}

fn split_routes() -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    for g in SPLIT_G {
        let it = split_quartic(g, 1.0, 0, Route::Iteration, &PhiConfig::default())?.result.half_gap();
        let lead = splitting_leading(g, 1.0);
        let rel = (it / lead - 1.0).abs();
        ok &= rel <= 3.0 / g;
        detail.push(format!("g={g}: |Δ_it/Δ_lead − 1| = {rel:.3} (bound {:.3})", 3.0 / g));
    }
    verdict(ok, detail.join("; "))
}

/// `(a_1, b_1, ε a_1, ε b_1)` for the quartic at `g`, `a = 1`.
pub fn first_order_coeffs(g: f64) -> Result<(f64, f64, f64, f64)> {
    let pair = tune_energy(g, 1.0, &PhiConfig::default())?;
    let c = compute_coeffs(&pair, 1)?;
    let eps = epsilon(g, 1.0);
    Ok((c.a[1], c.b[1], eps * c.a[1], eps * c.b[1]))
}

fn split_theorem() -> Outcome {
    let gs = [4.0, 5.0, 6.0];
    let rows: Vec<_> = gs.iter().map(|&g| first_order_coeffs(g)).collect::<Result<_>>()?;
    let bounded = rows.iter().all(|r| r.0.abs() <= 10.0 && r.1.abs() <= 10.0);
    // The raw integrals follow ε across a factor e^{8/3} of ε.
    let (first, last) = (rows[0], rows[rows.len() - 1]);
    let eps_ratio = epsilon(gs[0], 1.0) / epsilon(gs[2], 1.0);
    let ra = (first.2 / last.2) / eps_ratio;
    let rb = (first.3 / last.3) / eps_ratio;
    let scales = [ra, rb].iter().all(|r| *r > 1.0 / 3.0 && *r < 3.0);
    verdict(
        bounded && scales,
        format!(
            "a_1 = {:.3}/{:.3}/{:.3}, b_1 = {:.3}/{:.3}/{:.3} at g = 4/5/6; raw-integral ratio over ε ratio: {ra:.3} (a), {rb:.3} (b)",
            rows[0].0, rows[1].0, rows[2].0, rows[0].1, rows[1].1, rows[2].1
        ),
    )
}

/// Points where the first correction overshoots are flagged: there the
/// `ε²` remainder, with coefficient near `2a_1²/a_0⁴`, is as large as the
/// first-order term itself.
fn split_direction() -> Outcome {
    let mut detail = Vec::new();
    let mut flagged = Vec::new();
    for g in SPLIT_G {
        let p = PotentialSpec::Quartic { g, a: 1.0 };
        let exact = oracle::solve(&p, Method::Numerov, 20_001, None)?.splitting();
        let e0 = (split_quartic(g, 1.0, 0, Route::Iteration, &PhiConfig::default())?.result.half_gap() - exact).abs();
        let e1 = (split_quartic(g, 1.0, 1, Route::Iteration, &PhiConfig::default())?.result.half_gap() - exact).abs();
        let row = format!("g={g}: err0 {:.2e} err1 {:.2e}", e0 / exact, e1 / exact);
        if e1 > e0 {
            flagged.push(format!("{row}: adding δ_1 increases the error"));
        }
        detail.push(row);
    }
    Ok(Verdict { passed: true, detail: detail.join("; "), flagged })
}

// ---------- oracle ----------

fn oracle_richardson() -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    for p in [PotentialSpec::Quartic { g: 4.0, a: 1.0 }, PotentialSpec::Harmonic { g: 2.0 }] {
        let x_max = p.auto_x_max();
        let r = fd::eigensolve_fd(&p, x_max, 2001, 4)?;
        let r2 = fd::eigensolve_fd(&p, x_max, 4001, 4)?;
        for (a, b, err) in [(r.e_even, r2.e_even, r.e_even_err), (r.e_odd, r2.e_odd, r.e_odd_err)] {
            let step = (a - b).abs();
            ok &= step <= 4.0 * err;
            detail.push(format!("{:.2e} ≤ 4×{:.2e}", step, err));
        }
    }
    verdict(ok, detail.join("; "))
}

fn oracle_window() -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    for g in SPLIT_G {
        let pair = tune_energy(g, 1.0, &PhiConfig::default())?;
        let e = pair.e + pair.e_lo;
        let o = oracle::solve(&pair.potential, Method::Numerov, 20_001, None)?;
        let inside = o.e_even < e && e < o.e_odd;
        ok &= inside;
        detail.push(format!("g={g}: (E − E_even)/(E_odd − E_even) = {:.4}", (e - o.e_even) / (o.e_odd - o.e_even)));
    }
    verdict(ok, detail.join("; "))
}

fn oracle_coupling() -> Outcome {
    let p = PotentialSpec::Quartic { g: 4.0, a: 1.0 };
    let r = oracle::solve(&p, Method::Fd, 4001, None)?;
    let res = oracle::coupling_residual(&p, &r)?;
    verdict(res < 1e-3, format!("max |(H−𝓔)ψ± + Δψ∓| / (Δ max|ψ|) = {res:.2e}"))
}

fn oracle_wronskian() -> Outcome {
    let r = oracle::solve(&PotentialSpec::Quartic { g: 4.0, a: 1.0 }, Method::Fd, 4001, None)?;
    let res = oracle::wronskian_identity_residual(&r);
    verdict(res < 1e-3, format!("relative deviation {res:.2e}"))
}

// ---------- models ----------

fn model_kappa() -> Outcome {
    let mut r = Lcg(0x6b61);
    let mut bad = 0;
    let trials = 200;
    for _ in 0..trials {
        let u = 0.2 + 3.0 * (r.next() as f64 / (1u64 << 31) as f64);
        let q = 0.01 + 0.98 * (r.next() as f64 / (1u64 << 31) as f64);
        let l = 0.2 + 4.0 * (r.next() as f64 / (1u64 << 31) as f64);
        let s = TripleDeltaSpec { u, q, l };
        let sol = triple_delta::solve_kappa(&s)?;
        if !(sol.kappa > u) || sol.residual >= 1e-12 || s.integrated_potential() > -u {
            bad += 1;
        }
    }
    let edge = triple_delta::solve_kappa(&TripleDeltaSpec { u: 1.0, q: 1.0, l: 2.0 })?;
    verdict(bad == 0 && edge.kappa == 1.0, format!("{trials} samples with q < 1, {bad} with κ ≤ u; q = 1 gives κ = u = {}", edge.kappa))
}

fn model_jumps() -> Outcome {
    let mut worst = 0.0f64;
    for (u, q, l) in [(1.0, 0.5, 3.0), (0.5, 0.9, 1.0), (2.0, 0.2, 2.0)] {
        let s = TripleDeltaSpec { u, q, l };
        let p = triple_delta::phi_plus(&s);
        for (k, strength) in [(0, -u), (1, q * u), (2, -u)] {
            let (fl, fr, dl, dr) = p.at_edge(k);
            let scale = fl.abs().max(dl.abs()).max(dr.abs());
            worst = worst.max((fl - fr).abs() / scale).max(((dr - dl) - 2.0 * strength * fl).abs() / scale);
        }
    }
    verdict(worst < 1e-13, format!("max relative defect in continuity and slope jumps 2s·φ: {worst:.2e}"))
}

fn model_green() -> Outcome {
    let s = HarmonicDeltaSpec { g: 4.0, l: 1.5, lambda: 5.0 };
    let a = s.a();
    let phi = |x: f64| harmonic_delta::harmonic_delta_phi(&s, x);
    let opts = QuadOptions { rel_tol: 1e-13, ..QuadOptions::default() };
    let mut worst = 0.0f64;
    for (x, y) in [(0.2, 0.9), (0.5, 1.5), (1.0, 2.5), (0.1, 3.0), (2.0, 2.2)] {
        let inv = integrate(|z| phi(z).powi(-2), x, y, opts)?.value;
        let kernel = 2.0 * phi(x) * phi(y) * inv;
        let wronskian_form = 2.0 / a * (phi(-x) * phi(y) - phi(x) * phi(-y));
        worst = worst.max((kernel / wronskian_form - 1.0).abs());
    }
    verdict(worst < 1e-9, format!("(g,l,Λ) = (4,1.5,5): max relative difference {worst:.2e}"))
}

fn model_oracle() -> Outcome {
    let t = TripleDeltaSpec { u: 1.0, q: 0.5, l: 3.0 };
    let e_t = triple_delta::solve_kappa(&t)?.e_ev;
    let o_t = oracle::solve(&t.potential(), Method::Numerov, 20_001, None)?.e_even;
    let rel_t = (o_t / e_t - 1.0).abs();
    let h = HarmonicDeltaSpec { g: 4.0, l: 1.5, lambda: 6.0 };
    let o_h = oracle::solve(&h.potential(), Method::Numerov, 20_001, None)?.e_even;
    let rel_h = (o_h / (0.5 * h.g) - 1.0).abs();
    let m = HarmonicDeltaSpec { g: 4.0, l: 1.5, lambda: 5.0 };
    let nu = oracle::solve(&m.potential(), Method::Numerov, 20_001, None)?.e_even;
    let fdv = oracle::solve(&m.potential(), Method::Fd, 20_001, None)?.e_even;
    let rel_m = (nu / fdv - 1.0).abs();
    verdict(
        rel_t <= 1e-8 && rel_h <= 1e-8 && rel_m <= 1e-8,
        format!("triple delta −κ²/2 {rel_t:.1e}; harmonic+delta at Λ = gl vs g/2 {rel_h:.1e}; at Λ = 5 Numerov vs FD {rel_m:.1e}"),
    )
}

fn model_chi_triple() -> Outcome {
    let mut worst = 0.0f64;
    for u in [0.5, 1.0, 2.0] {
        let c = triple_delta::triple_delta_chi_check(&TripleDeltaSpec { u, q: 0.5, l: 3.0 }, 2001)?;
        worst = worst.max(c.max_chi / c.max_psi);
    }
    verdict(worst <= 1e-8, format!("max|χ_even|/max|ψ_even| over u ∈ {{0.5, 1, 2}}: {worst:.2e}"))
}

/// `χ/φ₊` sampled on `[-a/2, 5a/2]` for the quartic at `g`, `a = 1`.
pub fn quartic_chi_ratio(g: f64) -> Result<Vec<f64>> {
    let pair = default_pair_at(g)?;
    let xs = pair.xs().to_vec();
    let o = oracle::solve(&pair.potential, Method::Numerov, 20_001, Some(xs[xs.len() - 1]))?;
    let de = o.e_even - (pair.e + pair.e_lo);
    let psi = GridFunction::new(xs.clone(), xs.iter().map(|&x| o.psi_even.interpolate(x)).collect())?;
    let chi = psi.combine(1.0, &GreenKernel::new(&pair, Side::R).apply(&psi)?, de);
    Ok((0..=12)
        .map(|k| {
            let i = pair.phi_plus.index_of(-0.5 + 0.25 * k as f64);
            chi.value(i) / pair.phi_plus.value(i)
        })
        .collect())
}

fn default_pair_at(g: f64) -> Result<PhiPair> {
    tune_energy(g, 1.0, &PhiConfig::default())
}

fn model_chi_quartic() -> Outcome {
    let r = quartic_chi_ratio(6.0)?;
    let mean = r.iter().sum::<f64>() / r.len() as f64;
    let spread = r.iter().map(|v| (v / mean - 1.0).abs()).fold(0.0, f64::max);
    verdict(
        spread < 1e-6 && mean.abs() > 0.1,
        format!("g = 6: χ/φ₊ = {mean:.6} with relative spread {spread:.1e} on [-a/2, 5a/2]"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_checks_pass() {
        for c in run_invariants(Some("exact-algebra")).into_iter().chain(run_invariants(Some("hj-expansion"))) {
            assert!(c.passed && c.flagged.is_empty(), "{}: {}", c.name, c.detail);
        }
    }

    #[test]
    fn suite_names_are_unique() {
        let s = suite();
        let mut names: Vec<_> = s.iter().map(|i| i.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), s.len());
    }
}
