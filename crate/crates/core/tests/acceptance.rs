//! One PASS/FAIL line per acceptance criterion. Run with
//! `cargo test -p spinlrl-core --test acceptance`.

use std::process::ExitCode;
use std::time::Instant;

use spinlrl::cliffalg::{
    build_chirality, build_gamma, build_spin_half, build_spin_one, check_clifford, check_so_commutations,
};
use spinlrl::exact::{q, qi, to_f64, CMatrix, Q};
use spinlrl::numsolve::{compare, discretize, eigenpairs, node_count, refined_spectrum, Grid};
use spinlrl::opalg::{
    verify_appendix_a, verify_potential_conditions, verify_spin1_identities, verify_symmetry_algebra, ModelSpec,
    PotentialKind, VerifyOptions,
};
use spinlrl::radial::{
    analytic_energy_scalar, analytic_energy_spinor, analytic_energy_vector, casimir_energy_maps,
    forbidden_channel_check, scalar_channel, scalar_mu, spinor_channel, spinor_exact_state, spinor_ladder, spinor_rho,
    susy_ladder, vector_channel, vector_constraint_residual, CasimirMap, SpectrumLine,
};
use spinlrl::report::CheckReport;
use spinlrl::specfun::{
    bessel_i0, bessel_i1, bessel_k, bessel_k01_cf, bessel_k01_series, integrate, kummer_terminating, QuadratureKind,
    QuadratureRule,
};

const SCALAR_REL_TOL: f64 = 1e-6;
const SPINOR_REL_TOL: f64 = 1e-6;
const VECTOR_REL_TOL: f64 = 1e-5;
const CONSTRAINT_TOL: f64 = 1e-8;
const DEGENERACY_REL_TOL: f64 = 1e-6;
const LADDER_POINTWISE_TOL: f64 = 1e-5;
const CLIFFORD_TIME_LIMIT_S: f64 = 30.0;

type Outcome = Result<String, String>;

fn one() -> Q {
    qi(1)
}

fn require(rep: &CheckReport, what: &str) -> Result<(), String> {
    if rep.passed {
        Ok(())
    } else {
        let first = rep.violations.first().map(|v| v.identity.clone()).unwrap_or_default();
        Err(format!("{what}: {} violation(s), first {first}", rep.violations.len()))
    }
}

fn err<E: std::fmt::Display>(ctx: &str) -> impl Fn(E) -> String + '_ {
    move |e| format!("{ctx}: {e}")
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let mut checks = 0;
    for d in 2..=10i64 {
        let g = build_gamma(d).map_err(err("gamma"))?;
        require(&check_clifford(&g), &format!("clifford d={d}"))?;
        if d % 2 == 0 {
            let c = build_chirality(&g).map_err(err("chirality"))?;
            let id = CMatrix::identity(g.dim());
            let anti = (1..=d as usize).all(|mu| c.mul(g.gamma(mu)).add(&g.gamma(mu).mul(&c)).is_zero());
            if c.mul(&c) != id || !anti {
                return Err(format!("chirality d={d}: squares to one {}, anticommutes {anti}", c.mul(&c) == id));
            }
        }
        let half = build_spin_half(d).map_err(err("spin-1/2"))?;
        require(&check_so_commutations(&half), &format!("so(d) spin-1/2 d={d}"))?;
        let vec = build_spin_one(d).map_err(err("spin-1"))?;
        require(&check_so_commutations(&vec), &format!("so(d) spin-1 d={d}"))?;
        checks += 3;
    }
    let secs = t.elapsed().as_secs_f64();
    if secs > CLIFFORD_TIME_LIMIT_S {
        return Err(format!("took {secs:.1} s, limit {CLIFFORD_TIME_LIMIT_S} s"));
    }
    Ok(format!("{checks} reports for d = 2..10 in {secs:.2} s"))
}

fn models(kinds: &[PotentialKind]) -> Result<Vec<ModelSpec>, String> {
    let mut out = Vec::new();
    for d in 2..=5 {
        for &k in kinds {
            out.push(ModelSpec::unit(d, k).map_err(err("model"))?);
        }
    }
    Ok(out)
}

fn criterion_2() -> Outcome {
    let opts = VerifyOptions::new(20, 0);
    let mut n = 0;
    for ms in models(&PotentialKind::ALL)? {
        let rep = verify_potential_conditions(&ms, &opts).map_err(err("potential conditions"))?;
        require(&rep, &format!("{} d={}", ms.kind().name(), ms.d()))?;
        n += rep.checked.len();
    }
    Ok(format!("{n} identities, d = 2..5, all potential kinds, 20 points each"))
}

fn criterion_3() -> Outcome {
    let opts = VerifyOptions::default();
    let mut n = 0;
    for ms in models(&PotentialKind::ALL)? {
        let rep = verify_symmetry_algebra(&ms, &opts).map_err(err("symmetry algebra"))?;
        require(&rep, &format!("{} d={}", ms.kind().name(), ms.d()))?;
        n += rep.checked.len();
    }
    Ok(format!("{n} commutator identities, d = 2..5"))
}

fn criterion_4() -> Outcome {
    let opts = VerifyOptions::default();
    let mut n = 0;
    for ms in models(&[PotentialKind::Spinor])? {
        let rep = verify_appendix_a(&ms, &opts).map_err(err("spinor identities"))?;
        require(&rep, &format!("spinor d={}", ms.d()))?;
        n += rep.checked.len();
    }
    for ms in models(&[PotentialKind::Vector])? {
        let rep = verify_spin1_identities(&ms, &opts).map_err(err("spin-1 identities"))?;
        require(&rep, &format!("vector d={}", ms.d()))?;
        n += rep.checked.len();
    }
    Ok(format!("{n} auxiliary identities, d = 2..5"))
}

fn check_levels(lines: &[SpectrumLine], grid_p: &spinlrl::radial::RadialProblem, tol: f64) -> Result<f64, String> {
    let g = Grid::default_for(grid_p, lines.len());
    let num = refined_spectrum(grid_p, &g, lines.len()).map_err(err("solver"))?;
    let energies: Vec<f64> = num.iter().map(|l| l.energy).collect();
    let rep = compare(lines, &energies, tol).map_err(err("compare"))?;
    let worst = lines
        .iter()
        .zip(&energies)
        .map(|(a, x)| ((x - to_f64(&a.energy)) / to_f64(&a.energy)).abs())
        .fold(0.0, f64::max);
    if rep.passed {
        Ok(worst)
    } else {
        Err(format!("deviation {worst:.2e} > {tol:.0e}"))
    }
}

fn criterion_5() -> Outcome {
    let (m, a) = (one(), one());
    let mut worst = 0.0f64;
    let mut count = 0;
    for d in 2..=5 {
        for l in 0..=2 {
            let lines: Vec<_> = (0..3).map(|n| analytic_energy_scalar(d, l, n, &m, &a)).collect();
            let p = scalar_channel(d, l, &m, &a).map_err(err("channel"))?;
            worst = worst.max(check_levels(&lines, &p, SCALAR_REL_TOL).map_err(|e| format!("d={d} l={l}: {e}"))?);
            count += 3;
        }
    }
    Ok(format!("{count} levels, max rel deviation {worst:.2e} (tol {SCALAR_REL_TOL:.0e})"))
}

fn criterion_6() -> Outcome {
    let (m, a) = (one(), one());
    let mut worst = 0.0f64;
    let mut count = 0;
    for d in 2..=4 {
        for j in [q(1, 2), q(3, 2)] {
            let lines = (0..3)
                .map(|n| analytic_energy_spinor(d, &j, n, &m, &a))
                .collect::<Result<Vec<_>, _>>()
                .map_err(err("analytic"))?;
            let p = spinor_channel(d, &j, &m, &a).map_err(err("channel"))?;
            worst = worst.max(check_levels(&lines, &p, SPINOR_REL_TOL).map_err(|e| format!("d={d} j={j}: {e}"))?);
            count += 3;
        }
    }
    Ok(format!("{count} levels, max rel deviation {worst:.2e} (tol {SPINOR_REL_TOL:.0e})"))
}

fn criterion_7() -> Outcome {
    let (m, a) = (one(), one());
    let mut worst = 0.0f64;
    let mut worst_res = 0.0f64;
    let grid: Vec<f64> = (1..=200).map(|i| 0.1 * f64::from(i)).collect();
    for d in 3..=5 {
        for l in 1..=2 {
            let lines = (0..2)
                .map(|n| analytic_energy_vector(d, l, n, &m, &a))
                .collect::<Result<Vec<_>, _>>()
                .map_err(err("analytic"))?;
            let p = vector_channel(d, l, &m, &a).map_err(err("channel"))?;
            worst = worst.max(check_levels(&lines, &p, VECTOR_REL_TOL).map_err(|e| format!("d={d} l={l}: {e}"))?);
            for n in 0..2 {
                let rep = vector_constraint_residual(d, l, n, &m, &a, &grid).map_err(err("constraints"))?;
                let res = rep.coupled_equations.max(rep.ac1).max(rep.ac2);
                worst_res = worst_res.max(res);
                if !rep.cc_exact || !rep.exact_zero || res > CONSTRAINT_TOL {
                    return Err(format!(
                        "d={d} l={l} n={n}: residual {res:.2e}, exact {}, cc {}",
                        rep.exact_zero, rep.cc_exact
                    ));
                }
            }
        }
    }
    Ok(format!(
        "12 levels, max rel deviation {worst:.2e} (tol {VECTOR_REL_TOL:.0e}); constraint residual {worst_res:.2e}, \
         CC exact"
    ))
}

fn lowest(p: &spinlrl::radial::RadialProblem, k: usize) -> Result<Vec<f64>, String> {
    let g = Grid::default_for(p, k);
    Ok(refined_spectrum(p, &g, k).map_err(err("solver"))?.iter().map(|l| l.energy).collect())
}

fn criterion_8() -> Outcome {
    let (m, a) = (one(), one());
    let mut worst = 0.0f64;
    let mut pairs = 0;
    // scalar: (l, n) and (l+1, n−1) share N = μ + n + 1
    for d in 2..=5 {
        let levels: Vec<Vec<f64>> = (0..=2)
            .map(|l| lowest(&scalar_channel(d, l, &m, &a).map_err(err("channel"))?, 3))
            .collect::<Result<_, _>>()?;
        for big_n in 1..=2usize {
            for l in 0..big_n {
                let (x, y) = (levels[l][big_n - l], levels[l + 1][big_n - l - 1]);
                worst = worst.max(((x - y) / x).abs());
                pairs += 1;
            }
        }
    }
    // spinor: (j, n) and (j+1, n−1)
    for d in 2..=4 {
        let lo = lowest(&spinor_channel(d, &q(1, 2), &m, &a).map_err(err("channel"))?, 3)?;
        let hi = lowest(&spinor_channel(d, &q(3, 2), &m, &a).map_err(err("channel"))?, 2)?;
        for n in 1..=2 {
            worst = worst.max(((lo[n] - hi[n - 1]) / lo[n]).abs());
            pairs += 1;
        }
    }
    if worst > DEGENERACY_REL_TOL {
        return Err(format!("degenerate levels split by {worst:.2e}"));
    }
    Ok(format!("{pairs} degenerate pairs, max rel split {worst:.2e} (tol {DEGENERACY_REL_TOL:.0e})"))
}

fn criterion_9() -> Outcome {
    let (m, a) = (one(), one());
    let mut exact = 0;
    for d in 2..=5 {
        for l in 0..=3 {
            let lad = susy_ladder(&scalar_mu(d, l), &m, &a).map_err(err("ladder"))?;
            for (what, r) in [
                ("factorization", lad.factorization_residual()),
                ("partner", lad.partner_residual()),
                ("intertwining", lad.intertwining_residual()),
            ] {
                if !r.is_zero() {
                    return Err(format!("scalar {what} d={d} l={l} not identically zero"));
                }
                exact += 1;
            }
        }
        for j in [q(1, 2), q(3, 2), q(5, 2)] {
            let lad = spinor_ladder(&spinor_rho(d, &j), &m, &a).map_err(err("ladder"))?;
            for (what, r) in [
                ("factorization", lad.factorization_residual()),
                ("partner", lad.partner_residual()),
                ("intertwining", lad.intertwining_residual()),
            ] {
                if !r.is_zero() {
                    return Err(format!("spinor {what} d={d} j={j} not identically zero"));
                }
                exact += 1;
            }
            for n in 0..=2 {
                let (f, eps) = spinor_exact_state(d, &j, n, &m, &a).map_err(err("spinor state"))?;
                let h = lad.hamiltonian();
                if !h.apply(&f).map_err(err("apply"))?.sub(&f.scale(&eps)).map_err(err("sub"))?.is_zero() {
                    return Err(format!("spinor ladder state d={d} j={j} n={n} is not an eigenfunction"));
                }
                exact += 1;
            }
        }
    }

    // ladder states against numerical eigenvectors, scalar d = 3, l = 0
    let (d, l) = (3, 0);
    let lad = susy_ladder(&scalar_mu(d, l), &m, &a).map_err(err("ladder"))?;
    let p = scalar_channel(d, l, &m, &a).map_err(err("channel"))?;
    // eigenvectors carry an O(h²) error; the default step gives about 2e−5
    let g = Grid::default_for(&p, 3).halved();
    let pairs = eigenpairs(&discretize(&p, &g).map_err(err("discretize"))?, 3).map_err(err("eigenpairs"))?;
    let mut worst = 0.0f64;
    for (n, ep) in pairs.iter().enumerate() {
        let (f, _) = lad.excited_state(n as u32).map_err(err("excited state"))?;
        // ∫χ² dr on the log grid is h·Σ r χ²
        let vals: Vec<f64> = ep.r.iter().map(|&r| f.evaluate(r)[0]).collect();
        let norm = (g.h() * ep.r.iter().zip(&vals).map(|(r, v)| r * v * v).sum::<f64>()).sqrt();
        let num = &ep.chi[0];
        let sign = if vals.iter().zip(num).map(|(a, b)| a * b).sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
        let dev = vals.iter().zip(num).map(|(a, b)| (a / norm - sign * b).abs()).fold(0.0, f64::max);
        let peak = num.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        let exact_nodes = node_count(&vals);
        if ep.nodes != n || exact_nodes != n {
            return Err(format!("level {n}: {} numerical and {exact_nodes} exact nodes", ep.nodes));
        }
        worst = worst.max(dev / peak);
    }
    if worst > LADDER_POINTWISE_TOL {
        return Err(format!("ladder states differ from eigenvectors by {worst:.2e}"));
    }
    Ok(format!("{exact} exact identities; ladder vs numerical states {worst:.2e} (tol {LADDER_POINTWISE_TOL:.0e})"))
}

fn criterion_10() -> Outcome {
    let mut lines = Vec::new();
    let mut failed = false;
    for d in 4..=5 {
        let rep = forbidden_channel_check(d, &one(), &one(), 2, None).map_err(err("forbidden check"))?;
        if !rep.passed {
            failed = true;
            let v = &rep.violations[0];
            let w = v.witness.clone().unwrap_or_default().join(" vs closed form ");
            let e3 = casimir_energy_maps(d, &one(), &one(), &CasimirMap::E3 { l: 0, n: 0 }).map_err(err("E3"))?;
            lines.push(format!("d={d}: {} ({w}; E3(l=0,n=0) = {e3})", v.identity));
        } else {
            lines.push(format!("d={d}: no bound state"));
        }
    }
    if failed {
        Err(lines.join("; "))
    } else {
        Ok(lines.join("; "))
    }
}

fn criterion_11() -> Outcome {
    let rel = |a: f64, b: f64| ((a - b) / b).abs();
    // Wronskian I0 K1 + I1 K0 = 1/x
    for x in [0.1, 1.0, 2.0, 5.0, 20.0] {
        let w = bessel_i0(x) * bessel_k(1, x).map_err(err("K1"))? + bessel_i1(x) * bessel_k(0, x).map_err(err("K0"))?;
        if rel(w, 1.0 / x) > 1e-12 {
            return Err(format!("Wronskian at x = {x}: {w}"));
        }
    }
    // both branches at the switch point
    let (s0, s1) = bessel_k01_series(2.0);
    let (c0, c1) = bessel_k01_cf(2.0).map_err(err("cf"))?;
    if rel(s0, c0) > 1e-10 || rel(s1, c1) > 1e-10 {
        return Err(format!("branches disagree at x = 2: ({s0}, {s1}) vs ({c0}, {c1})"));
    }
    let x = 1e-6;
    if (x * bessel_k(1, x).map_err(err("K1"))? - 1.0).abs() > 1e-8 {
        return Err("x K1(x) -> 1 fails".into());
    }
    // closed-form integrals
    for kind in [QuadratureKind::CompositeSimpson, QuadratureKind::GaussLegendre] {
        let rule = QuadratureRule { kind, rel_tol: 1e-12, max_depth: 50 };
        let v = integrate(|r| r * r * (-2.0 * r).exp(), 0.0, 60.0, &rule).map_err(err("quadrature"))?;
        if (v - 0.25).abs() > 1e-10 {
            return Err(format!("{kind:?}: ∫r²e^(-2r) = {v}"));
        }
    }
    // terminating Kummer series against the Laguerre recurrence
    for n in 0..12u32 {
        for (b, z) in [(1.5, 0.7), (4.0, 3.0), (7.0, 11.0)] {
            let got = kummer_terminating(n, b, z).map_err(err("kummer"))?;
            let want = via_laguerre(n, b, z);
            let scale = want.abs().max(1.0);
            if ((got - want) / scale).abs() > 1e-10 {
                return Err(format!("1F1(-{n}; {b}; {z}) = {got}, recurrence {want}"));
            }
        }
    }
    Ok("Wronskian, branch consistency, small-x limit, quadrature and Kummer checks".into())
}

// 1F1(−n; b; z) = n!/(b)_n · L_n^{(b−1)}(z)
fn via_laguerre(n: u32, b: f64, z: f64) -> f64 {
    let a = b - 1.0;
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let kf = f64::from(k);
        let next = ((2.0 * kf + 1.0 + a - z) * cur - (kf + a) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    let mut ratio = 1.0;
    for k in 0..n {
        ratio *= f64::from(k + 1) / (b + f64::from(k));
    }
    ratio * cur
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Outcome); 11] = [
        (1, "Clifford and so(d) relations, d = 2..10", criterion_1),
        (2, "potential conditions", criterion_2),
        (3, "symmetry algebra", criterion_3),
        (4, "auxiliary spinor and spin-1 identities", criterion_4),
        (5, "scalar spectrum", criterion_5),
        (6, "spinor spectrum", criterion_6),
        (7, "spin-1 spectrum and constraints", criterion_7),
        (8, "principal-number degeneracy", criterion_8),
        (9, "ladder operators", criterion_9),
        (10, "transverse spin-1 channel unbound", criterion_10),
        (11, "special functions", criterion_11),
    ];
    let mut failures = 0;
    for (id, name, f) in criteria {
        let t = Instant::now();
        let out = f();
        let secs = t.elapsed().as_secs_f64();
        match out {
            Ok(msg) => println!("criterion {id:>2} PASS  {name}: {msg} [{secs:.1} s]"),
            Err(msg) => {
                failures += 1;
                println!("criterion {id:>2} FAIL  {name}: {msg} [{secs:.1} s]");
            }
        }
    }
    println!("{} of 11 criteria passed", 11 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
