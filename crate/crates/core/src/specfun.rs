//! Terminating Kummer series, modified Bessel functions of order 0 and 1, and adaptive quadrature.

use serde::Serialize;

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Neumaier (improved Kahan) summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `1F1(−n; b; z) = Σ_{k=0}^{n} (−n)_k/(b)_k · z^k/k!`.
pub fn kummer_terminating(n: u32, b: f64, z: f64) -> Result<f64> {
    if !b.is_finite() || !z.is_finite() {
        return Err(Error::Domain(format!("non-finite argument b = {b}, z = {z}")));
    }
    // (b)_k vanishes for some k < n iff b is a non-positive integer > −n
    if b <= 0.0 && b.fract() == 0.0 && b > -(n as f64) {
        return Err(Error::Pole(format!("1F1(-{n}; {b}; z): (b)_k vanishes before the series terminates")));
    }
    let mut acc = CompensatedSum::default();
    let mut term = 1.0;
    acc.add(term);
    for k in 0..n {
        let kf = f64::from(k);
        term *= (kf - f64::from(n)) / (b + kf) * z / (kf + 1.0);
        acc.add(term);
    }
    Ok(acc.value())
}

/// `d/dz 1F1(−n; b; z) = (−n/b)·1F1(−n+1; b+1; z)`.
pub fn kummer_terminating_derivative(n: u32, b: f64, z: f64) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    Ok(-f64::from(n) / b * kummer_terminating(n - 1, b + 1.0, z)?)
}

/// Modified Bessel function of the first kind `I_0`, power series.
pub fn bessel_i0(x: f64) -> f64 {
    bessel_i_series(0, x)
}

/// Modified Bessel function of the first kind `I_1`, power series.
pub fn bessel_i1(x: f64) -> f64 {
    bessel_i_series(1, x)
}

fn bessel_i_series(order: u32, x: f64) -> f64 {
    let y = 0.25 * x * x;
    let mut term = if order == 0 { 1.0 } else { 0.5 * x };
    let mut sum = term;
    for k in 1..500 {
        let k = f64::from(k);
        term *= y / (k * (k + f64::from(order)));
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    sum
}

/// `K_order(x)` for order 0 or 1, x > 0.
pub fn bessel_k(order: u32, x: f64) -> Result<f64> {
    if order > 1 {
        return Err(Error::Domain(format!("bessel_k implements orders 0 and 1, got {order}")));
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("bessel_k needs x > 0, got {x}")));
    }
    let (k0, k1) = if x <= 2.0 { bessel_k01_series(x) } else { bessel_k01_cf(x)? };
    Ok(if order == 0 { k0 } else { k1 })
}

/// Ascending series for `(K_0, K_1)`; accurate for small and moderate x.
pub fn bessel_k01_series(x: f64) -> (f64, f64) {
    let y = 0.25 * x * x;
    let log_term = (0.5 * x).ln() + EULER_GAMMA;
    // K0 = −(ln(x/2) + γ) I0 + Σ_{k≥1} y^k/(k!)² H_k
    let mut k0 = CompensatedSum::default();
    k0.add(-log_term * bessel_i0(x));
    // K1 = 1/x + ln(x/2) I1 − (x/4) Σ_{k≥0} (ψ(k+1) + ψ(k+2)) y^k/(k!(k+1)!)
    let mut k1 = CompensatedSum::default();
    k1.add(1.0 / x);
    k1.add((0.5 * x).ln() * bessel_i1(x));
    let mut p0 = 1.0; // y^k/(k!)²
    let mut p1 = 1.0; // y^k/(k!(k+1)!)
    let mut harmonic = 0.0; // H_k
    for k in 0..200 {
        let kf = f64::from(k);
        if k > 0 {
            p0 *= y / (kf * kf);
            p1 *= y / (kf * (kf + 1.0));
            harmonic += 1.0 / kf;
            k0.add(p0 * harmonic);
        }
        let psi_sum = 2.0 * (harmonic - EULER_GAMMA) + 1.0 / (kf + 1.0);
        let t = -0.25 * x * psi_sum * p1;
        k1.add(t);
        if k > 2 && p0 * harmonic.max(1.0) < 1e-18 && t.abs() < 1e-18 * k1.value().abs() {
            break;
        }
    }
    (k0.value(), k1.value())
}

/// Steed/Temme continued fraction for `(K_0, K_1)`; for x ≳ 2.
pub fn bessel_k01_cf(x: f64) -> Result<(f64, f64)> {
    const EPS: f64 = 1e-16;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    let mut converged = false;
    for i in 2..100_000 {
        let fi = f64::from(i);
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Convergence(format!("Bessel continued fraction at x = {x}")));
    }
    h *= a1;
    let k0 = (std::f64::consts::PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    Ok((k0, k1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum QuadratureKind {
    CompositeSimpson,
    GaussLegendre,
}

/// Adaptive quadrature rule; refinement stops when the panel estimate and the sum of its
/// two halves agree to `rel_tol` (relative to the running total).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct QuadratureRule {
    pub kind: QuadratureKind,
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadratureRule {
    fn default() -> Self {
        Self { kind: QuadratureKind::GaussLegendre, rel_tol: 1e-12, max_depth: 40 }
    }
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, 0.0);
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        xs[i] = -z;
        xs[n - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        ws[i] = w;
        ws[n - 1 - i] = w;
    }
    (xs, ws)
}

/// `∫_a^b f` with adaptive refinement.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rule: &QuadratureRule) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain("integration limits must be finite".into()));
    }
    if a == b {
        return Ok(0.0);
    }
    let gl = gauss_legendre(10);
    let panel = |lo: f64, hi: f64| -> f64 {
        match rule.kind {
            QuadratureKind::CompositeSimpson => {
                let mid = 0.5 * (lo + hi);
                (hi - lo) / 6.0 * (f(lo) + 4.0 * f(mid) + f(hi))
            }
            QuadratureKind::GaussLegendre => {
                let c = 0.5 * (lo + hi);
                let h = 0.5 * (hi - lo);
                gl.0.iter().zip(&gl.1).map(|(x, w)| w * f(c + h * x)).sum::<f64>() * h
            }
        }
    };
    // start from a few panels so narrow features are not missed
    let npanel = 16;
    let mut total = CompensatedSum::default();
    let mut stack: Vec<(f64, f64, f64, u32)> = (0..npanel)
        .map(|i| {
            let lo = a + (b - a) * i as f64 / npanel as f64;
            let hi = a + (b - a) * (i + 1) as f64 / npanel as f64;
            (lo, hi, panel(lo, hi), 0)
        })
        .collect();
    let coarse: f64 = stack.iter().map(|s| s.2.abs()).sum();
    let scale = coarse.max(f64::MIN_POSITIVE);
    while let Some((lo, hi, whole, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = panel(lo, mid);
        let right = panel(mid, hi);
        let err = (left + right - whole).abs();
        if err <= rule.rel_tol * scale * (hi - lo) / (b - a) || err <= f64::EPSILON * (left.abs() + right.abs()) {
            total.add(left + right);
        } else if depth >= rule.max_depth {
            return Err(Error::Convergence(format!(
                "quadrature did not converge on [{lo}, {hi}] (estimate change {err:e})"
            )));
        } else {
            stack.push((lo, mid, left, depth + 1));
            stack.push((mid, hi, right, depth + 1));
        }
    }
    let v = total.value();
    if !v.is_finite() {
        return Err(Error::Convergence("quadrature produced a non-finite value".into()));
    }
    Ok(v)
}

/// Composite trapezoid rule on sampled data with arbitrary (increasing) abscissae.
pub fn integrate_sampled(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::Mismatch("sampled quadrature needs matching arrays of length >= 2".into()));
    }
    let mut acc = CompensatedSum::default();
    for i in 1..xs.len() {
        acc.add(0.5 * (xs[i] - xs[i - 1]) * (ys[i] + ys[i - 1]));
    }
    Ok(acc.value())
}
