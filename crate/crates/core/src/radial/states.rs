//! Closed-form eigenfunctions sampled on grids, pointwise ODE residuals, and the spin-1
//! constraint checks.

use num_traits::{One, Zero};
use serde::Serialize;

use super::channel::{
    check_half_integer, scalar_channel, scalar_mu, spinor_rho, vector_casimir_l, vector_native_operator,
};
use super::exact::{QMat, RadialBasis, RadialFunction, RadialOperator};
use super::ladder::{spinor_ladder, susy_ladder};
use super::spectrum::{analytic_energy_vector, vector_omega, vector_separation_constant};
use crate::error::{Error, Result};
use crate::exact::{qi, to_f64, Q};
use crate::numsolve::node_count;
use crate::specfun::{integrate, kummer_terminating, kummer_terminating_derivative, QuadratureRule};

/// A normalized eigenfunction on a grid.
#[derive(Debug, Clone, Serialize)]
pub struct RadialFunctionSample {
    pub r: Vec<f64>,
    pub channel_names: Vec<String>,
    /// `values[c][i]` is channel `c` at `r[i]`.
    pub values: Vec<Vec<f64>>,
    /// Factor applied to the unnormalized closed form.
    pub normalization: f64,
    pub nodes: usize,
    /// Pointwise auxiliary residual (the φ1 = (rφ2)′ + mαrφ2 constraint for spin-1).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constraint_residual: Option<Vec<f64>>,
}

/// `npoints` equally spaced points on `(0, r_max]`.
pub fn default_sample_grid(r_max: f64, npoints: usize) -> Vec<f64> {
    (1..=npoints).map(|i| r_max * i as f64 / npoints as f64).collect()
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 2 {
        return Err(Error::Domain("sample grid needs at least two points".into()));
    }
    if grid[0] <= 0.0 || grid.windows(2).any(|w| w[1] <= w[0]) || grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("sample grid must be positive and strictly increasing".into()));
    }
    Ok(())
}

fn norm_rule() -> QuadratureRule {
    QuadratureRule { rel_tol: 1e-10, ..QuadratureRule::default() }
}

/// Normalizes `density` (the integrand of ⟨ψ,ψ⟩) by quadrature on `(0, r_end)` and checks that
/// the grid itself resolves the state.
fn finish_sample<F, D>(grid: &[f64], names: &[&str], eval: F, density: D, r_end: f64) -> Result<RadialFunctionSample>
where
    F: Fn(f64) -> Vec<f64>,
    D: Fn(&[f64], f64) -> f64,
{
    check_grid(grid)?;
    let r_end = r_end.max(*grid.last().expect("nonempty"));
    let total = integrate(|r| density(&eval(r), r), 0.0, r_end, &norm_rule())?;
    if !(total > 0.0) {
        return Err(Error::Convergence("state has zero norm".into()));
    }
    let mut c = 1.0 / total.sqrt();
    let nch = names.len();
    let mut values = vec![Vec::with_capacity(grid.len()); nch];
    for &r in grid {
        for (ch, v) in eval(r).into_iter().enumerate() {
            values[ch].push(v);
        }
    }
    let dominant = dominant_channel(&values);
    let big = values[dominant].iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if let Some(first) = values[dominant].iter().find(|v| v.abs() > 1e-8 * big) {
        if *first < 0.0 {
            c = -c;
        }
    }
    for ch in &mut values {
        for v in ch.iter_mut() {
            *v *= c;
        }
    }
    // trapezoid on the grid as a resolution check
    let dens: Vec<f64> = (0..grid.len())
        .map(|i| {
            let v: Vec<f64> = values.iter().map(|ch| ch[i]).collect();
            density(&v, grid[i])
        })
        .collect();
    let mut xs = vec![0.0];
    xs.extend_from_slice(grid);
    let mut ys = vec![0.0];
    ys.extend_from_slice(&dens);
    let on_grid = crate::specfun::integrate_sampled(&xs, &ys)?;
    if (on_grid - 1.0).abs() > 1e-2 {
        return Err(Error::Convergence(format!(
            "grid too coarse or too short to normalize the state (grid norm {on_grid:.6})"
        )));
    }
    let nodes = node_count(&values[dominant]);
    Ok(RadialFunctionSample {
        r: grid.to_vec(),
        channel_names: names.iter().map(|s| s.to_string()).collect(),
        values,
        normalization: c,
        nodes,
        constraint_residual: None,
    })
}

fn dominant_channel(values: &[Vec<f64>]) -> usize {
    let norms: Vec<f64> = values.iter().map(|ch| ch.iter().map(|v| v * v).sum()).collect();
    (0..values.len()).max_by(|&a, &b| norms[a].total_cmp(&norms[b])).unwrap_or(0)
}

/// `χ = C·z^{μ+1}e^{−z}·1F1(−n; 2μ+2; 2z)`, `z = mαr/N`, `N = n+μ+1`.
pub fn scalar_eigenfunction(d: usize, l: u32, n: u32, m: &Q, alpha: &Q, grid: &[f64]) -> Result<RadialFunctionSample> {
    scalar_channel(d, l, m, alpha)?;
    let mu = to_f64(&scalar_mu(d, l));
    let big_n = f64::from(n) + mu + 1.0;
    let ma = to_f64(&(m * alpha));
    let b = 2.0 * mu + 2.0;
    let eval = |r: f64| {
        let z = ma * r / big_n;
        let f = kummer_terminating(n, b, 2.0 * z).unwrap_or(f64::NAN);
        vec![((mu + 1.0) * z.ln() - z).exp() * f]
    };
    let r_end = 80.0 * big_n / ma;
    finish_sample(grid, &["chi"], eval, |v, _| v[0] * v[0], r_end)
}

/// Exact spinor state `a⁺_ϱ…a⁺_{ϱ+n−1}ψ⁰_{ϱ+n}` with `ψ⁰_ϱ = r^{ϱ+1}(K0(kr), −K1(kr))`, and its
/// eigenvalue `ε = 2mE`.
pub fn spinor_exact_state(d: usize, j: &Q, n: u32, m: &Q, alpha: &Q) -> Result<(RadialFunction, Q)> {
    check_half_integer(j)?;
    spinor_ladder(&spinor_rho(d, j), m, alpha)?.excited_state(n)
}

fn spinor_sample(d: usize, j: &Q, n: u32, m: &Q, alpha: &Q, grid: &[f64]) -> Result<RadialFunctionSample> {
    let (psi, _) = spinor_exact_state(d, j, n, m, alpha)?;
    let big_n = to_f64(&spinor_rho(d, j)) + f64::from(n) + 0.5;
    let r_end = 80.0 * big_n / to_f64(&(m * alpha));
    finish_sample(grid, &["phi_up", "phi_down"], |r| psi.evaluate(r), |v, _| v[0] * v[0] + v[1] * v[1], r_end)
}

/// Normalized spinor ground state.
pub fn spinor_ground_state(d: usize, j: &Q, m: &Q, alpha: &Q, grid: &[f64]) -> Result<RadialFunctionSample> {
    spinor_sample(d, j, 0, m, alpha, grid)
}

/// Normalized spinor state `n ≥ 1` built by the raising operators.
pub fn spinor_excited_states(d: usize, j: &Q, n: u32, m: &Q, alpha: &Q, grid: &[f64]) -> Result<RadialFunctionSample> {
    spinor_sample(d, j, n, m, alpha, grid)
}

/// Exact scalar state from the ladder and its eigenvalue `ε`.
pub fn scalar_exact_state(d: usize, l: u32, n: u32, m: &Q, alpha: &Q) -> Result<(RadialFunction, Q)> {
    susy_ladder(&scalar_mu(d, l), m, alpha)?.excited_state(n)
}

/// Exact spin-1 pair `(φ1, φ2)` with `φ2 = z^{l−1}e^{−z}·1F1(−n; 2l+d−1; 2z)`, `z = mαr/k`,
/// and `φ1 = (rφ2)′ + mαrφ2`.
pub fn vector_exact_pair(d: usize, l: u32, n: u32, m: &Q, alpha: &Q) -> Result<RadialFunction> {
    let line = analytic_energy_vector(d, l, n, m, alpha)?;
    let beta = m * alpha / &line.principal;
    let b = qi(2 * i64::from(l) + d as i64 - 1);
    let mut phi2 = RadialFunction::zero(1, Q::zero(), RadialBasis::Exp { beta: beta.clone() });
    let mut c = num_traits::pow(beta.clone(), (l - 1) as usize);
    for j in 0..=n {
        phi2.add_term(0, (l - 1 + j) as i32, 0, c.clone());
        let jq = qi(i64::from(j));
        c = c * (&jq - qi(i64::from(n))) / (&b + &jq) * qi(2) * &beta / (&jq + Q::one());
    }
    // lift to two channels: φ2 in channel 1, then φ1 = (r∂ + 1 + mαr)φ2 into channel 0
    let mut pair = RadialFunction::zero(2, Q::zero(), RadialBasis::Exp { beta });
    for (&(_, k, bb), v) in phi2.terms() {
        pair.add_term(1, k, bb, v.clone());
    }
    let ma = m * alpha;
    let mut lift = QMat::zeros(2);
    lift.set(0, 1, Q::one());
    lift.set(1, 1, Q::one());
    let mut r_lift = QMat::zeros(2);
    r_lift.set(0, 1, Q::one());
    let mut ma_lift = QMat::zeros(2);
    ma_lift.set(0, 1, ma);
    let op = RadialOperator::term(lift, 0, 0)
        .add(&RadialOperator::term(r_lift, 1, 1))
        .add(&RadialOperator::term(ma_lift, 1, 0));
    op.apply(&pair)
}

/// Normalized spin-1 pair from the closed form, `∫(φ1² + Lφ2²)r^{d−1}dr = 1`.
pub fn vector_eigenfunctions(d: usize, l: u32, n: u32, m: &Q, alpha: &Q, grid: &[f64]) -> Result<RadialFunctionSample> {
    let line = analytic_energy_vector(d, l, n, m, alpha)?;
    let k = to_f64(&line.principal);
    let ma = to_f64(&(m * alpha));
    let lf = f64::from(l);
    let b = 2.0 * lf + d as f64 - 1.0;
    let big_l = to_f64(&vector_casimir_l(d, l));
    let eval = |r: f64| {
        let z = ma * r / k;
        let f = kummer_terminating(n, b, 2.0 * z).unwrap_or(f64::NAN);
        let fp = kummer_terminating_derivative(n, b, 2.0 * z).unwrap_or(f64::NAN);
        let pre = ((lf - 1.0) * z.ln() - z).exp();
        vec![pre * ((lf - z + k * z) * f + 2.0 * z * fp), pre * f]
    };
    let dm1 = d as i32 - 1;
    let r_end = 80.0 * k / ma;
    let mut s =
        finish_sample(grid, &["phi1", "phi2"], eval, |v, r| (v[0] * v[0] + big_l * v[1] * v[1]) * r.powi(dm1), r_end)?;
    // AC4 residual through the exact rational form, scaled like the samples
    let exact = vector_exact_pair(d, l, n, m, alpha)?;
    let phi2 = exact_channel(&exact, 1);
    let dphi2 = phi2.derivative();
    let mut res = Vec::with_capacity(grid.len());
    for (i, &r) in grid.iter().enumerate() {
        let p2 = phi2.evaluate(r)[0];
        let dp2 = dphi2.evaluate(r)[0];
        let want = s.normalization * (p2 + r * dp2 + ma * r * p2);
        res.push(s.values[0][i] - want);
    }
    s.constraint_residual = Some(res);
    Ok(s)
}

fn exact_channel(f: &RadialFunction, ch: usize) -> RadialFunction {
    let mut out = RadialFunction::zero(1, f.offset().clone(), f.basis().clone());
    for (&(c, k, b), v) in f.terms() {
        if c == ch {
            out.add_term(0, k, b, v.clone());
        }
    }
    out
}

/// Largest pointwise residual of `(op − ε)f = 0` over the grid, each point divided by the local
/// magnitude: the sum of the magnitudes of the individual terms plus `κ|f′|`,
/// `κ = √|ε| + 1/r` (so that nodes of `f` do not blow the ratio up).
pub fn pointwise_residual(op: &RadialOperator, f: &RadialFunction, eps: &Q, grid: &[f64]) -> Result<f64> {
    if op.dim() != f.nchan() {
        return Err(Error::Mismatch("operator and function channel counts differ".into()));
    }
    let mut derivs = vec![f.clone()];
    for _ in 0..op.order() {
        let next = derivs.last().expect("nonempty").derivative();
        derivs.push(next);
    }
    let terms: Vec<(u32, i32, Vec<Vec<f64>>)> = op.terms().map(|(k, p, m)| (k, p, m.to_f64())).collect();
    let e = to_f64(eps);
    let n = f.nchan();
    let mut worst = 0.0f64;
    for &r in grid {
        let vals: Vec<Vec<f64>> = derivs.iter().map(|g| g.evaluate(r)).collect();
        let mut sum = vec![0.0; n];
        let mut mag = vec![0.0; n];
        for (k, p, m) in &terms {
            let rp = r.powi(*p);
            for i in 0..n {
                for j in 0..n {
                    let t = m[i][j] * rp * vals[*k as usize][j];
                    sum[i] += t;
                    mag[i] += t.abs();
                }
            }
        }
        let kappa = e.abs().sqrt() + 1.0 / r;
        for i in 0..n {
            let t = -e * vals[0][i];
            sum[i] += t;
            mag[i] += t.abs();
            if let Some(d1) = vals.get(1) {
                mag[i] += kappa * d1[i].abs();
            }
        }
        let scale = mag.iter().cloned().fold(0.0, f64::max);
        if scale > 0.0 {
            let local = sum.iter().map(|x| x.abs()).fold(0.0, f64::max) / scale;
            worst = worst.max(local);
        }
    }
    Ok(worst)
}

/// Outcome of the spin-1 radial checks.
#[derive(Debug, Clone, Serialize)]
pub struct VectorConstraintReport {
    /// Max normalized pointwise residual of the first and second order-two equations.
    pub coupled_equations: f64,
    /// Max normalized pointwise residual of the two first-order constraints.
    pub ac1: f64,
    pub ac2: f64,
    /// `2mE + ε + m²α² = 0` with `ε` the separation constant.
    pub cc_exact: bool,
    /// Coupled equations and both constraints vanish identically in exact arithmetic.
    pub exact_zero: bool,
}

/// The two first-order constraints as rows of a 2×2 operator on `(φ1, φ2)`:
/// ```text
/// L(φ1 − (rφ2)′ − mαrφ2) − r²(m²α² + 2mE + ε)φ1
/// (d−2)φ1 + (rφ1)′ − Lφ2 − mαrφ1 − r²εφ2
/// ```
pub fn vector_constraint_operator(d: usize, l: u32, m: &Q, alpha: &Q, energy: &Q, eps: &Q) -> RadialOperator {
    let big_l = vector_casimir_l(d, l);
    let ma = m * alpha;
    let cc = &ma * &ma + qi(2) * m * energy + eps;
    let mut t: Vec<(u32, i32, QMat)> = Vec::new();
    let mut put = |i: usize, j: usize, k: u32, p: i32, v: Q| {
        let mut mm = QMat::zeros(2);
        mm.set(i, j, v);
        t.push((k, p, mm));
    };
    put(0, 0, 0, 0, big_l.clone());
    put(0, 0, 0, 2, -cc);
    put(0, 1, 1, 1, -big_l.clone());
    put(0, 1, 0, 0, -big_l.clone());
    put(0, 1, 0, 1, -(&big_l * &ma));
    put(1, 0, 0, 0, qi(d as i64 - 1));
    put(1, 0, 1, 1, Q::one());
    put(1, 0, 0, 1, -ma);
    put(1, 1, 0, 0, -big_l);
    put(1, 1, 0, 2, -eps.clone());
    t.into_iter().fold(RadialOperator::zero(2), |acc, (k, p, m)| acc.add(&RadialOperator::term(m, p, k)))
}

/// Checks the spin-1 closed form of level `(l, n)` against the coupled equations at `energy`
/// and the first-order constraints with the separation constant implied by `energy`.
pub fn vector_constraint_residual_at(
    d: usize,
    l: u32,
    n: u32,
    m: &Q,
    alpha: &Q,
    energy: &Q,
    grid: &[f64],
) -> Result<VectorConstraintReport> {
    check_grid(grid)?;
    let pair = vector_exact_pair(d, l, n, m, alpha)?;
    let eps = vector_separation_constant(d, m, alpha, energy, &vector_omega(d, l, n));
    let native = vector_native_operator(d, l, m, alpha)?;
    let two_me = qi(2) * m * energy;
    let coupled = native.apply(&pair)?.sub(&pair.scale(&two_me))?;
    let cons_op = vector_constraint_operator(d, l, m, alpha, energy, &eps);
    let cons = cons_op.apply(&pair)?;
    let cc_exact = (&two_me + &eps + m * m * alpha * alpha).is_zero();

    let coupled_equations = pointwise_residual(&native, &pair, &two_me, grid)?;
    let (ac1, ac2) = constraint_rows(&cons_op, &pair, grid);
    Ok(VectorConstraintReport {
        coupled_equations,
        ac1,
        ac2,
        cc_exact,
        exact_zero: coupled.is_zero() && cons.is_zero(),
    })
}

// per-row residuals with the same local scaling as pointwise_residual
fn constraint_rows(op: &RadialOperator, f: &RadialFunction, grid: &[f64]) -> (f64, f64) {
    let d1 = f.derivative();
    let terms: Vec<(u32, i32, Vec<Vec<f64>>)> = op.terms().map(|(k, p, m)| (k, p, m.to_f64())).collect();
    let mut worst = [0.0f64; 2];
    for &r in grid {
        let vals = [f.evaluate(r), d1.evaluate(r)];
        for (i, w) in worst.iter_mut().enumerate() {
            let mut sum = 0.0;
            let mut mag = 0.0;
            for (k, p, m) in &terms {
                for j in 0..2 {
                    let t = m[i][j] * r.powi(*p) * vals[*k as usize][j];
                    sum += t;
                    mag += t.abs();
                }
            }
            if mag > 0.0 {
                *w = w.max(sum.abs() / mag);
            }
        }
    }
    (worst[0], worst[1])
}

/// [`vector_constraint_residual_at`] at the analytic energy.
pub fn vector_constraint_residual(
    d: usize,
    l: u32,
    n: u32,
    m: &Q,
    alpha: &Q,
    grid: &[f64],
) -> Result<VectorConstraintReport> {
    let e = analytic_energy_vector(d, l, n, m, alpha)?.energy;
    vector_constraint_residual_at(d, l, n, m, alpha, &e, grid)
}

/// Reduction of the spin-1 pair: with `φ1 = (rφ2)′ + mαrφ2` substituted, the φ2 equation
/// conjugated by `r^{(d+1)/2}` minus the scalar channel operator with `α → (d−1)α/2`.
/// Identically zero.
pub fn vector_reduction_residual(d: usize, l: u32, m: &Q, alpha: &Q) -> Result<RadialOperator> {
    let native = vector_native_operator(d, l, m, alpha)?;
    let ma = m * alpha;
    // φ2 row: a(φ1) + b(φ2); substitute φ1 = (r∂ + 1 + mαr)φ2
    let pick = |i: usize, j: usize| {
        let mut out = RadialOperator::zero(1);
        for (k, p, mm) in native.terms() {
            let v = mm.get(i, j);
            if !v.is_zero() {
                out = out.add(&RadialOperator::power(1, v.clone(), p).compose(&nth_derivative(k)));
            }
        }
        out
    };
    let sub = RadialOperator::power(1, Q::one(), 1)
        .compose(&RadialOperator::derivative(1))
        .add(&RadialOperator::identity(1))
        .add(&RadialOperator::power(1, ma, 1));
    let reduced = pick(1, 0).compose(&sub).add(&pick(1, 1));
    let conj = super::ladder::conjugate_by_power(&reduced, &Q::new((d as i64 + 1).into(), 2.into()));
    let alpha_red = qi(d as i64 - 1) * alpha / qi(2);
    let target = super::ladder::scalar_hamiltonian(&scalar_mu(d, l), m, &alpha_red);
    Ok(conj.sub(&target))
}

fn nth_derivative(k: u32) -> RadialOperator {
    (0..k).fold(RadialOperator::identity(1), |acc, _| acc.compose(&RadialOperator::derivative(1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    fn one() -> Q {
        Q::one()
    }

    #[test]
    fn scalar_nodes_and_orthogonality() {
        let grid = default_sample_grid(60.0, 4000);
        let s0 = scalar_eigenfunction(3, 0, 0, &one(), &one(), &grid).unwrap();
        let s1 = scalar_eigenfunction(3, 0, 1, &one(), &one(), &grid).unwrap();
        assert_eq!(s0.nodes, 0);
        assert_eq!(s1.nodes, 1);
        let quad = |f: &dyn Fn(f64) -> f64| integrate(f, 0.0, 80.0, &norm_rule()).unwrap();
        let c0 = s0.normalization;
        let c1 = s1.normalization;
        // ⟨ψ0,ψ1⟩ with the analytic forms: ψ0 = c0 r e^{−r}, ψ1 = c1 (r/2) e^{−r/2}(1 − r/2)
        let ov = quad(&|r| c0 * r * (-r).exp() * c1 * (r / 2.0) * (-r / 2.0).exp() * (1.0 - r / 2.0));
        assert!(ov.abs() < 1e-10);
        // first node of ψ1 at r = 2
        let idx = s1.values[0].iter().position(|v| *v < 0.0).unwrap();
        assert!((grid[idx] - 2.0).abs() < 0.03);
    }

    #[test]
    fn scalar_closed_form_is_an_eigenfunction() {
        for d in 2..6 {
            for l in 0..3 {
                for n in 0..3 {
                    let (psi, eps) = scalar_exact_state(d, l, n, &q(3, 2), &q(2, 5)).unwrap();
                    let op = scalar_channel(d, l, &q(3, 2), &q(2, 5)).unwrap().exact_operator().unwrap();
                    let grid = default_sample_grid(30.0, 200);
                    let res = pointwise_residual(&op, &psi, &eps, &grid).unwrap();
                    assert!(res < 1e-10, "d={d} l={l} n={n}: {res}");
                }
            }
        }
    }

    #[test]
    fn coarse_grid_rejected() {
        let grid = default_sample_grid(3.0, 5);
        assert!(matches!(scalar_eigenfunction(3, 0, 1, &one(), &one(), &grid), Err(Error::Convergence(_))));
    }

    #[test]
    fn spinor_ground_state_shape() {
        let grid = default_sample_grid(40.0, 2000);
        let s = spinor_ground_state(3, &q(1, 2), &one(), &one(), &grid).unwrap();
        assert_eq!(s.nodes, 0);
        // components ∝ (K0(kr), −K1(kr)), k = 2mα/(2ϱ+1) = 2/3
        for i in [10, 500, 1500] {
            let x = 2.0 / 3.0 * grid[i];
            let want = -crate::specfun::bessel_k(1, x).unwrap() / crate::specfun::bessel_k(0, x).unwrap();
            assert!((s.values[1][i] / s.values[0][i] - want).abs() < 1e-12 * want.abs());
        }
    }

    #[test]
    fn spinor_states_residual_and_orthogonality() {
        let grid = default_sample_grid(60.0, 3000);
        for n in 0..3 {
            let (psi, eps) = spinor_exact_state(3, &q(1, 2), n, &one(), &one()).unwrap();
            let op =
                super::super::channel::spinor_channel(3, &q(1, 2), &one(), &one()).unwrap().exact_operator().unwrap();
            assert!(pointwise_residual(&op, &psi, &eps, &grid).unwrap() < 1e-10);
            // ε = 2mE with E = −2/(2ϱ+2n+1)²
            assert_eq!(eps, qi(-4) / qi(i64::from((2 * n + 3) * (2 * n + 3))));
        }
        let a = spinor_ground_state(3, &q(1, 2), &one(), &one(), &grid).unwrap();
        let b = spinor_excited_states(3, &q(1, 2), 1, &one(), &one(), &grid).unwrap();
        let ov: Vec<f64> =
            (0..grid.len()).map(|i| a.values[0][i] * b.values[0][i] + a.values[1][i] * b.values[1][i]).collect();
        let mut xs = vec![0.0];
        xs.extend_from_slice(&grid);
        let mut ys = vec![0.0];
        ys.extend_from_slice(&ov);
        let o = crate::specfun::integrate_sampled(&xs, &ys).unwrap();
        assert!(o.abs() < 1e-4, "overlap {o}");
    }

    #[test]
    fn vector_pair_satisfies_everything_exactly() {
        let grid = default_sample_grid(40.0, 400);
        for d in 3..7 {
            for l in 1..4 {
                for n in 0..3 {
                    let rep = vector_constraint_residual(d, l, n, &q(3, 2), &q(2, 5), &grid).unwrap();
                    assert!(rep.exact_zero, "d={d} l={l} n={n}");
                    assert!(rep.cc_exact);
                    assert!(rep.coupled_equations < 1e-10 && rep.ac1 < 1e-10 && rep.ac2 < 1e-10);
                }
            }
        }
    }

    #[test]
    fn vector_perturbed_energy_detected() {
        let grid = default_sample_grid(40.0, 400);
        let e = analytic_energy_vector(4, 1, 0, &one(), &one()).unwrap().energy + q(1, 1000);
        let rep = vector_constraint_residual_at(4, 1, 0, &one(), &one(), &e, &grid).unwrap();
        assert!(!rep.exact_zero);
        assert!(rep.coupled_equations > 1e-6);
        assert!(rep.ac1 > 1e-6);
    }

    #[test]
    fn vector_reduction_is_scalar_channel() {
        for d in 3..8 {
            for l in 1..4 {
                assert!(vector_reduction_residual(d, l, &q(2, 3), &q(5, 4)).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn vector_samples_match_exact_pair() {
        let grid = default_sample_grid(50.0, 2000);
        for (d, l, n) in [(3, 1, 0), (4, 2, 1), (5, 1, 2)] {
            let s = vector_eigenfunctions(d, l, n, &one(), &one(), &grid).unwrap();
            let worst = s
                .constraint_residual
                .as_ref()
                .unwrap()
                .iter()
                .zip(&s.values[0])
                .map(|(r, v)| r.abs() / v.abs().max(1e-3))
                .fold(0.0, f64::max);
            assert!(worst < 1e-10, "{worst}");
            let phi2_nodes = node_count(&s.values[1]);
            assert_eq!(phi2_nodes, n as usize);
        }
    }
}
