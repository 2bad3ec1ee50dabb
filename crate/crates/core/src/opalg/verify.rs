//! Certification of the potential conditions, the symmetry algebra, the spinor
//! identities around `D` and the spin-1 identities.

use std::collections::HashMap;
use std::sync::Mutex;

use rayon::prelude::*;

use super::function::{random_points, random_test_function, sample_range, zero_test_at, Point, WaveFunction};
use super::model::{
    build_angular_momenta, build_dirac_d, build_hamiltonian, build_lrl, casimir_j, gamma_contractions,
    gradient_potential, radial_derivative, spin_orbit, ModelSpec, PotentialKind,
};
use super::operator::{apply, DiffOperator};
use crate::cliffalg::{pair_index, pairs};
use crate::error::{Error, Result};
use crate::exact::{gq_i, gq_int, gq_real, q, qi, CMatrix, GQ, Q};
use crate::report::{CheckReport, Residual, Violation};

/// Sampling parameters for the randomized identity tests.
#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Rational points per identity instance.
    pub npoints: usize,
    /// Random test functions per identity instance.
    pub nfunctions: usize,
    /// Total degree of the polynomial part of the test functions.
    pub max_degree: u32,
    pub seed: u64,
    /// Builds `K_μ` with this coupling instead of the model's (a deliberately broken check).
    pub tamper_lrl_alpha: Option<Q>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { npoints: 20, nfunctions: 2, max_degree: 2, seed: 0, tamper_lrl_alpha: None }
    }
}

impl VerifyOptions {
    pub fn new(npoints: usize, seed: u64) -> Self {
        Self { npoints, seed, ..Self::default() }
    }
}

/// Shared state of one verification run: test functions and point sets per sample range.
struct Tester {
    d: usize,
    opts: VerifyOptions,
    functions: Vec<WaveFunction>,
    points: Mutex<HashMap<i64, std::sync::Arc<Vec<Point>>>>,
}

impl Tester {
    fn new(ms: &ModelSpec, opts: &VerifyOptions) -> Self {
        let functions = (0..opts.nfunctions.max(1))
            .map(|i| {
                random_test_function(
                    ms.d(),
                    ms.ncomp(),
                    opts.max_degree,
                    ms.test_beta(),
                    opts.seed.wrapping_mul(1_000_003).wrapping_add(i as u64),
                )
            })
            .collect();
        Self { d: ms.d(), opts: opts.clone(), functions, points: Mutex::new(HashMap::new()) }
    }

    fn points_for(&self, f: &WaveFunction) -> std::sync::Arc<Vec<Point>> {
        let (deg, rmin, rmax) = f.degree_profile();
        let range = sample_range(deg + (rmax - rmin).unsigned_abs());
        let mut cache = self.points.lock().expect("point cache");
        cache
            .entry(range)
            .or_insert_with(|| {
                std::sync::Arc::new(random_points(
                    self.d,
                    self.opts.npoints.max(1),
                    range,
                    self.opts.seed.wrapping_add(range as u64),
                ))
            })
            .clone()
    }

    /// Zero test of a residual; returns a violation carrying the witness point.
    fn test(&self, label: &str, indices: &[usize], residual: &WaveFunction) -> Result<Option<Violation>> {
        if residual.is_structurally_zero() {
            return Ok(None);
        }
        let pts = self.points_for(residual);
        let t = zero_test_at(residual, &pts)?;
        Ok((!t.zero).then(|| Violation {
            identity: label.to_string(),
            indices: indices.to_vec(),
            residual: Residual::Exact(true),
            witness: t.witness,
        }))
    }

    /// Runs `residual(f)` for every test function and every index tuple in parallel.
    fn run<F>(&self, report: &mut CheckReport, label: &str, cases: Vec<Vec<usize>>, residual: F) -> Result<()>
    where
        F: Fn(&[usize], usize, &WaveFunction) -> Result<WaveFunction> + Sync,
    {
        report.checked(label);
        let nf = self.functions.len();
        let jobs: Vec<(usize, usize)> = (0..cases.len()).flat_map(|c| (0..nf).map(move |i| (c, i))).collect();
        let results: Vec<Result<Option<Violation>>> = jobs
            .par_iter()
            .map(|&(c, i)| {
                let r = residual(&cases[c], i, &self.functions[i])?;
                self.test(label, &cases[c], &r)
            })
            .collect();
        let mut seen = std::collections::HashSet::new();
        for r in results {
            if let Some(v) = r? {
                if seen.insert(v.indices.clone()) {
                    report.violate(v);
                }
            }
        }
        Ok(())
    }
}

fn lin(parts: &[(GQ, &WaveFunction)]) -> Result<WaveFunction> {
    WaveFunction::linear_combination(parts)
}

fn one() -> GQ {
    gq_int(1)
}

fn minus_one() -> GQ {
    gq_int(-1)
}

/// `A(B f) − B(A f)` given both inner results.
fn commutator_on(a: &DiffOperator, b: &DiffOperator, af: &WaveFunction, bf: &WaveFunction) -> Result<WaveFunction> {
    apply(a, bf)?.sub(&apply(b, af)?)
}

fn apply_all(ops: &[DiffOperator], f: &WaveFunction) -> Result<Vec<WaveFunction>> {
    ops.par_iter().map(|o| apply(o, f)).collect()
}

/// `[V, J_μν] = 0`, `x_ν∇_νV + V = 0` and `S_μν∇_νV + ∇_νV S_μν = 0`.
pub fn verify_potential_conditions(ms: &ModelSpec, opts: &VerifyOptions) -> Result<CheckReport> {
    let tester = Tester::new(ms, opts);
    let mut report = CheckReport::new();
    let d = ms.d();
    let n = ms.ncomp();
    let v = ms.potential();
    let js = build_angular_momenta(ms);
    let grad = gradient_potential(ms);

    let cases: Vec<Vec<usize>> = pairs(d).into_iter().map(|(a, b)| vec![a, b]).collect();
    tester.run(&mut report, "c1_potential_commutes_with_J", cases, |idx, _, f| {
        let j = &js[pair_index(d, idx[0], idx[1])];
        commutator_on(&v, j, &apply(&v, f)?, &apply(j, f)?)
    })?;

    let mut euler = v.clone();
    for (nu, g) in grad.iter().enumerate() {
        euler = euler.add(&DiffOperator::position(d, n, nu + 1).compose(g)?)?;
    }
    tester.run(&mut report, "c2_euler_homogeneity", vec![vec![]], |_, _, f| apply(&euler, f))?;

    let spin_ops: Vec<DiffOperator> = (1..=d)
        .map(|mu| {
            let mut acc = DiffOperator::zero(d, n);
            for nu in 1..=d {
                let s = DiffOperator::constant(ms.rep().s(mu, nu), d);
                acc = acc.add(&s.anticommutator(&grad[nu - 1])?)?;
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let cases = (1..=d).map(|mu| vec![mu]).collect();
    tester.run(&mut report, "c3_spin_gradient_anticommutator", cases, |idx, _, f| apply(&spin_ops[idx[0] - 1], f))?;
    Ok(report)
}

/// `[J,H] = [K,H] = 0`, `[K_μ,J_νλ] = i(δ_μλK_ν − δ_μνK_λ)`,
/// `[K_μ,K_ν] = −(2i/m)J_μνH` and the so(d) relations among the `J_μν`.
pub fn verify_symmetry_algebra(ms: &ModelSpec, opts: &VerifyOptions) -> Result<CheckReport> {
    let tester = Tester::new(ms, opts);
    let mut report = CheckReport::new();
    let d = ms.d();
    let h = build_hamiltonian(ms);
    let js = build_angular_momenta(ms);
    let ks = match &opts.tamper_lrl_alpha {
        Some(a) => build_lrl(&ModelSpec::new(d, ms.kind(), ms.m().clone(), a.clone())?),
        None => build_lrl(ms),
    };
    let i = gq_i();

    // first applications, shared by all identities
    struct Cache {
        hf: WaveFunction,
        jf: Vec<WaveFunction>,
        kf: Vec<WaveFunction>,
    }
    let caches: Vec<Cache> = tester
        .functions
        .par_iter()
        .map(|f| Ok(Cache { hf: apply(&h, f)?, jf: apply_all(&js, f)?, kf: apply_all(&ks, f)? }))
        .collect::<Result<_>>()?;

    // J_ab for arbitrary ordered indices, with sign
    let jidx = |a: usize, b: usize| -> Option<(usize, GQ)> {
        use std::cmp::Ordering;
        match a.cmp(&b) {
            Ordering::Less => Some((pair_index(d, a, b), one())),
            Ordering::Greater => Some((pair_index(d, b, a), minus_one())),
            Ordering::Equal => None,
        }
    };

    tester.run(&mut report, "H_H", vec![vec![]], |_, c, _| commutator_on(&h, &h, &caches[c].hf, &caches[c].hf))?;

    let pair_cases: Vec<Vec<usize>> = pairs(d).into_iter().map(|(a, b)| vec![a, b]).collect();
    tester.run(&mut report, "J_H", pair_cases.clone(), |idx, c, _| {
        let p = pair_index(d, idx[0], idx[1]);
        commutator_on(&js[p], &h, &caches[c].jf[p], &caches[c].hf)
    })?;

    let cases = (1..=d).map(|mu| vec![mu]).collect();
    tester.run(&mut report, "K_H", cases, |idx, c, _| {
        let m = idx[0] - 1;
        commutator_on(&ks[m], &h, &caches[c].kf[m], &caches[c].hf)
    })?;

    let mut kj_cases = Vec::new();
    for mu in 1..=d {
        for (nu, la) in pairs(d) {
            kj_cases.push(vec![mu, nu, la]);
        }
    }
    tester.run(&mut report, "K_J", kj_cases, |idx, c, _| {
        let (mu, nu, la) = (idx[0], idx[1], idx[2]);
        let p = pair_index(d, nu, la);
        let cc = &caches[c];
        let comm = commutator_on(&ks[mu - 1], &js[p], &cc.kf[mu - 1], &cc.jf[p])?;
        let mut parts: Vec<(GQ, &WaveFunction)> = vec![(one(), &comm)];
        let mi = -i.clone();
        if mu == la {
            parts.push((mi.clone(), &cc.kf[nu - 1]));
        }
        if mu == nu {
            parts.push((i.clone(), &cc.kf[la - 1]));
        }
        lin(&parts)
    })?;

    let coef = crate::exact::gq(qi(0), -qi(2) / ms.m().clone());
    tester.run(&mut report, "K_K", pair_cases.clone(), |idx, c, _| {
        let (mu, nu) = (idx[0], idx[1]);
        let cc = &caches[c];
        let comm = commutator_on(&ks[mu - 1], &ks[nu - 1], &cc.kf[mu - 1], &cc.kf[nu - 1])?;
        let jh = apply(&js[pair_index(d, mu, nu)], &cc.hf)?;
        lin(&[(one(), &comm), (-coef.clone(), &jh)])
    })?;

    let mut jj_cases = Vec::new();
    let ps = pairs(d);
    for (x, &(mu, nu)) in ps.iter().enumerate() {
        for &(la, si) in &ps[x + 1..] {
            jj_cases.push(vec![mu, nu, la, si]);
        }
    }
    tester.run(&mut report, "J_J", jj_cases, |idx, c, _| {
        let (mu, nu, la, si) = (idx[0], idx[1], idx[2], idx[3]);
        let cc = &caches[c];
        let p = pair_index(d, mu, nu);
        let s = pair_index(d, la, si);
        let comm = commutator_on(&js[p], &js[s], &cc.jf[p], &cc.jf[s])?;
        let mut parts: Vec<(GQ, &WaveFunction)> = vec![(one(), &comm)];
        // − i(δ_μλ J_νσ + δ_νσ J_μλ − δ_μσ J_νλ − δ_νλ J_μσ)
        let mut push = |delta: bool, a: usize, b: usize, sign: i64| {
            if !delta {
                return;
            }
            if let Some((k, s)) = jidx(a, b) {
                parts.push((&s * &i * gq_int(-sign), &cc.jf[k]));
            }
        };
        push(mu == la, nu, si, 1);
        push(nu == si, mu, la, 1);
        push(mu == si, nu, la, -1);
        push(nu == la, mu, si, -1);
        lin(&parts)
    })?;
    Ok(report)
}

/// Spinor identities for `D = −(Σ S_μνL_μν + (d−1)/2)`: `{D, γ·p} = {D, γ·x} = 0`,
/// `D² = Σ_{μ<ν} J_μν² + (d−1)(d−2)/8`, and
/// `p² = −∂_r² − ((d−1)/r)∂_r − (d−1)(d−3)/4r² + D(D+1)/r²`.
pub fn verify_appendix_a(ms: &ModelSpec, opts: &VerifyOptions) -> Result<CheckReport> {
    if ms.kind() != PotentialKind::Spinor {
        return Err(Error::IncompatibleKind {
            kind: ms.kind().name().into(),
            rep: "the D identities need the spinor model".into(),
        });
    }
    let tester = Tester::new(ms, opts);
    let mut report = CheckReport::new();
    let d = ms.d();
    let n = ms.ncomp();
    let dd = build_dirac_d(ms)?;
    let (gp, gx) = gamma_contractions(ms)?;

    tester.run(&mut report, "D_anticommutes_gamma_p", vec![vec![]], |_, _, f| {
        let a = apply(&dd, &apply(&gp, f)?)?;
        let b = apply(&gp, &apply(&dd, f)?)?;
        lin(&[(one(), &a), (one(), &b)])
    })?;
    tester.run(&mut report, "D_anticommutes_gamma_x", vec![vec![]], |_, _, f| {
        let a = apply(&dd, &apply(&gx, f)?)?;
        let b = apply(&gx, &apply(&dd, f)?)?;
        lin(&[(one(), &a), (one(), &b)])
    })?;

    let cj = casimir_j(ms);
    let shift = gq_real(q((d as i64 - 1) * (d as i64 - 2), 8));
    tester.run(&mut report, "D_squared_casimir", vec![vec![]], |_, _, f| {
        let dd2 = apply(&dd, &apply(&dd, f)?)?;
        let c = apply(&cj, f)?;
        lin(&[(one(), &dd2), (minus_one(), &c), (-shift.clone(), f)])
    })?;

    let dr = radial_derivative(d, n);
    let rinv = |k: i32| DiffOperator::scalar_function(d, n, one(), super::function::Mono::ONE, -k);
    let p2 = DiffOperator::momentum_squared(d, n);
    let c0 = gq_real(q((d as i64 - 1) * (d as i64 - 3), 4));
    tester.run(&mut report, "laplacian_decomposition", vec![vec![]], |_, _, f| {
        let lhs = apply(&p2, f)?;
        let drf = apply(&dr, f)?;
        let dr2f = apply(&dr, &drf)?;
        let df = apply(&dd, f)?;
        let ddf = apply(&dd, &df)?;
        let mut dd1 = ddf.clone();
        dd1.add_scaled(&df, &one())?;
        let t1 = apply(&rinv(1), &drf)?;
        let t2 = apply(&rinv(2), f)?;
        let t3 = apply(&rinv(2), &dd1)?;
        lin(&[(one(), &lhs), (one(), &dr2f), (gq_int(d as i64 - 1), &t1), (c0.clone(), &t2), (minus_one(), &t3)])
    })?;
    Ok(report)
}

/// Spin-1 identities: `½S_μνS_μν = d−1`, `S_λμS_λν p_μp_ν = p² + (d−2)P`, and the
/// anticommutator of the spin-orbit operator with the potential.
pub fn verify_spin1_identities(ms: &ModelSpec, opts: &VerifyOptions) -> Result<CheckReport> {
    if ms.kind() != PotentialKind::Vector {
        return Err(Error::IncompatibleKind {
            kind: ms.kind().name().into(),
            rep: "spin-1 identities need the vector model".into(),
        });
    }
    let tester = Tester::new(ms, opts);
    let mut report = CheckReport::new();
    let d = ms.d();
    let n = ms.ncomp();
    let rep = ms.rep();

    report.checked("spin1_casimir");
    let cas = rep.casimir().sub(&CMatrix::scalar(n, gq_int(d as i64 - 1)));
    if !cas.is_zero() {
        report.violate(Violation {
            identity: "spin1_casimir".into(),
            indices: vec![],
            residual: Residual::Norm(cas.residual_norm()),
            witness: None,
        });
    }

    // Σ_{λμν} S_λμ S_λν p_μ p_ν − p² − (d−2) P, with P_ab = p_a p_b
    let mut lhs = DiffOperator::zero(d, n);
    for mu in 1..=d {
        for nu in 1..=d {
            let mut m = CMatrix::zeros(n);
            for la in 1..=d {
                m = m.add(&rep.s(la, mu).mul(&rep.s(la, nu)));
            }
            let pp = DiffOperator::momentum(d, n, mu).compose(&DiffOperator::momentum(d, n, nu))?;
            lhs = lhs.add(&DiffOperator::constant(m, d).compose(&pp)?)?;
            let e = CMatrix::unit(n, mu - 1, nu - 1).scale(&gq_int(d as i64 - 2));
            lhs = lhs.sub(&DiffOperator::constant(e, d).compose(&pp)?)?;
        }
    }
    let ssp = lhs.sub(&DiffOperator::momentum_squared(d, n))?;
    tester.run(&mut report, "spin1_SSpp", vec![vec![]], |_, _, f| apply(&ssp, f))?;

    let (a, b, c) = spin1_sl_v_coefficients(d);
    let g = ms.vector_coupling();
    let so = spin_orbit(ms);
    let v = ms.potential();
    let ginv = DiffOperator::scalar_function(d, n, gq_real(g), super::function::Mono::ONE, -1);
    let rhs = ginv
        .compose(&so.scale(&gq_real(a)).add(&DiffOperator::identity(d, n).scale(&gq_real(b)))?)?
        .add(&v.scale(&gq_real(c)))?;
    tester.run(&mut report, "spin1_SL_V_anticommutator", vec![vec![]], |_, _, f| {
        let sof = apply(&so, f)?;
        let vf = apply(&v, f)?;
        let l1 = apply(&v, &sof)?;
        let l2 = apply(&so, &vf)?;
        let r = apply(&rhs, f)?;
        lin(&[(one(), &l1), (one(), &l2), (minus_one(), &r)])
    })?;
    report.note("the reduction to the first-order radial system is certified by radial::vector_constraint_residual");
    Ok(report)
}

/// Coefficients `(a, b, c)` of `{SL, V} = (g/r)(a·SL + b) + c·V` for the spin-1 model.
pub fn spin1_sl_v_coefficients(d: usize) -> (Q, Q, Q) {
    let d = d as i64;
    (qi(d - 2), qi((d - 1) * (d - 2)), qi(-2 * d))
}
