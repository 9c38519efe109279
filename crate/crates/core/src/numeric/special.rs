//! Special functions not covered by `libm`.

/// Dawson's integral `F(x) = e^{-x²} ∫_0^x e^{t²} dt`, by Rybicki's
/// exponentially convergent sampling formula (relative accuracy ~1e-15).
pub fn dawson(x: f64) -> f64 {
    const H: f64 = 0.2;
    const NMAX: usize = 20;
    const A1: f64 = 2.0 / 3.0;
    const A2: f64 = 0.4;
    const A3: f64 = 2.0 / 7.0;
    let xx = x.abs();
    if xx < 1e-3 {
        let x2 = x * x;
        return x * (1.0 - A1 * x2 * (1.0 - A2 * x2 * (1.0 - A3 * x2)));
    }
    let n0 = 2 * ((0.5 * xx / H).round() as i64);
    let xp = xx - n0 as f64 * H;
    let mut e1 = (2.0 * xp * H).exp();
    let e2 = e1 * e1;
    let mut d1 = (n0 + 1) as f64;
    let mut d2 = d1 - 2.0;
    let mut sum = 0.0;
    for i in 0..NMAX {
        let c = (-((2 * i + 1) as f64 * H).powi(2)).exp();
        sum += c * (e1 / d1 + 1.0 / (d2 * e1));
        d1 += 2.0;
        d2 -= 2.0;
        e1 *= e2;
    }
    let val = (-xp * xp).exp() * sum / std::f64::consts::PI.sqrt();
    val.copysign(x)
}
