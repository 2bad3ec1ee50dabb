use std::time::Instant;

use serde_json::{json, Value};
use spinlrl::cliffalg::{
    build_chirality, build_gamma, build_spin_half, build_spin_one, check_clifford, check_so_commutations,
};
use spinlrl::exact::{parse_rational, to_f64, Q};
use spinlrl::numsolve::{refined_spectrum, Grid};
use spinlrl::opalg::{
    verify_appendix_a, verify_potential_conditions, verify_spin1_identities, verify_symmetry_algebra, ModelSpec,
    PotentialKind, VerifyOptions,
};
use spinlrl::radial::{
    analytic_energy_scalar, analytic_energy_spinor, analytic_energy_vector, default_sample_grid,
    forbidden_channel_check, scalar_channel, scalar_eigenfunction, spinor_channel, spinor_excited_states,
    vector_channel, vector_eigenfunctions, RadialFunctionSample, RadialProblem, SpectrumLine,
};
use spinlrl::specfun::{bessel_i0, bessel_i1, bessel_k, kummer_terminating};
use spinlrl::CheckReport;

use crate::output::{emit, emit_json, envelope, report_entries, sig15, CmdResult, Failure, EXIT_PASS, EXIT_VERIFY};
use crate::{
    Cli, Couplings, EvalArgs, ForbiddenArgs, Format, RadialArgs, RepcheckArgs, SpecialFunction, SpectrumArgs, Spin,
    VerifyArgs,
};

fn rational(name: &str, s: &str) -> Result<Q, Failure> {
    parse_rational(s).map_err(|e| Failure::Usage(format!("--{name}: {e}")))
}

fn couplings(c: &Couplings) -> Result<(Q, Q), Failure> {
    Ok((rational("m", &c.m)?, rational("alpha", &c.alpha)?))
}

fn status_code(passed: bool) -> u8 {
    if passed {
        EXIT_PASS
    } else {
        EXIT_VERIFY
    }
}

pub fn repcheck(cli: &Cli, a: &RepcheckArgs) -> CmdResult {
    if a.dmin < 1 || a.dmax < a.dmin {
        return Err(Failure::Usage(format!("need 1 <= dmin <= dmax, got dmin = {}, dmax = {}", a.dmin, a.dmax)));
    }
    let mut results = Vec::new();
    let mut passed = true;
    for d in a.dmin..=a.dmax {
        let t = Instant::now();
        let g = build_gamma(d)?;
        let mut rep = check_clifford(&g);
        if d >= 2 {
            rep.merge(check_so_commutations(&build_spin_half(d)?));
            rep.merge(check_so_commutations(&build_spin_one(d)?));
        }
        if d % 2 == 0 {
            let c = build_chirality(&g)?;
            let label = "chirality";
            rep.checked(label);
            let ok = c.mul(&c) == spinlrl::exact::CMatrix::identity(g.dim())
                && (1..=g.d()).all(|mu| c.mul(g.gamma(mu)).add(&g.gamma(mu).mul(&c)).is_zero());
            if !ok {
                rep.violate(spinlrl::Violation {
                    identity: label.into(),
                    indices: vec![],
                    residual: spinlrl::Residual::Exact(true),
                    witness: None,
                });
            }
        }
        passed &= rep.passed;
        let mut entries = report_entries(&format!("d{d}"), &rep);
        entries.push(json!({
            "identity": format!("d{d}/dimensions"),
            "status": "pass",
            "values": {
                "spinor_dim": g.dim(),
                "vector_dim": d,
                "gelfand_tsetlin": g.gelfand_tsetlin_label(),
                "seconds": t.elapsed().as_secs_f64(),
            },
        }));
        results.extend(entries);
    }
    emit_json(cli.output.as_deref(), &envelope(cli, results, vec![]))?;
    Ok(status_code(passed))
}

fn potential_kind(spin: Spin) -> PotentialKind {
    match spin {
        Spin::Scalar => PotentialKind::Coulomb,
        Spin::Half => PotentialKind::Spinor,
        Spin::One => PotentialKind::Vector,
        Spin::OneExtended => PotentialKind::VectorExtended,
    }
}

pub fn verify(cli: &Cli, a: &VerifyArgs) -> CmdResult {
    let (m, alpha) = couplings(&a.couplings)?;
    if a.npoints == 0 || a.nfunctions == 0 {
        return Err(Failure::Usage("npoints and nfunctions must be positive".into()));
    }
    let ms = ModelSpec::new(a.d, potential_kind(a.spin), m, alpha)?;
    let opts = VerifyOptions {
        npoints: a.npoints,
        nfunctions: a.nfunctions,
        seed: a.seed,
        tamper_lrl_alpha: a.tamper_lrl_alpha.as_deref().map(|s| rational("tamper-lrl-alpha", s)).transpose()?,
        ..VerifyOptions::default()
    };
    let mut suites: Vec<(&str, CheckReport)> = vec![
        ("potential", verify_potential_conditions(&ms, &opts)?),
        ("algebra", verify_symmetry_algebra(&ms, &opts)?),
    ];
    match a.spin {
        Spin::Half => suites.push(("spinor", verify_appendix_a(&ms, &opts)?)),
        Spin::One => suites.push(("spin1", verify_spin1_identities(&ms, &opts)?)),
        _ => {}
    }
    let passed = suites.iter().all(|(_, r)| r.passed);
    let mut results = Vec::new();
    let mut notes = Vec::new();
    for (scope, rep) in &suites {
        results.extend(report_entries(scope, rep));
        notes.extend(rep.notes.iter().cloned());
    }
    emit_json(cli.output.as_deref(), &envelope(cli, results, notes))?;
    Ok(status_code(passed))
}

fn spectrum_lines(a: &SpectrumArgs, m: &Q, alpha: &Q) -> Result<(Vec<SpectrumLine>, RadialProblem), Failure> {
    let need_l = || a.l.ok_or_else(|| Failure::Usage(format!("--l is required for spin {}", spin_name(a.spin))));
    let ns = 0..=a.nmax;
    match a.spin {
        Spin::Scalar => {
            let l = need_l()?;
            let p = scalar_channel(a.d, l, m, alpha)?;
            Ok((ns.map(|n| analytic_energy_scalar(a.d, l, n, m, alpha)).collect(), p))
        }
        Spin::Half => {
            let j =
                rational("j", a.j.as_deref().ok_or_else(|| Failure::Usage("--j is required for spin half".into()))?)?;
            let p = spinor_channel(a.d, &j, m, alpha)?;
            let lines = ns.map(|n| analytic_energy_spinor(a.d, &j, n, m, alpha)).collect::<Result<_, _>>()?;
            Ok((lines, p))
        }
        Spin::One => {
            let l = need_l()?;
            let p = vector_channel(a.d, l, m, alpha)?;
            let lines = ns.map(|n| analytic_energy_vector(a.d, l, n, m, alpha)).collect::<Result<_, _>>()?;
            Ok((lines, p))
        }
        Spin::OneExtended => Err(Failure::Usage(
            "spectrum supports spin scalar, half and one; one-extended has no separate radial channel".into(),
        )),
    }
}

fn spin_name(spin: Spin) -> &'static str {
    match spin {
        Spin::Scalar => "scalar",
        Spin::Half => "half",
        Spin::One => "one",
        Spin::OneExtended => "one-extended",
    }
}

pub fn spectrum(cli: &Cli, a: &SpectrumArgs) -> CmdResult {
    let (m, alpha) = couplings(&a.couplings)?;
    let (lines, p) = spectrum_lines(a, &m, &alpha)?;
    let mut notes = Vec::new();
    let numeric: Option<Vec<f64>> = if a.numeric {
        let k = lines.len();
        let mut g = Grid::default_for(&p, k);
        if let Some(np) = a.grid_points {
            g = Grid::new(g.kind, g.r_min, g.r_max, np)?;
        }
        if a.spin == Spin::One {
            // the coupled pair also carries solutions that violate the first-order constraints;
            // each closed-form level is matched to the nearest numerical one
            let extra = 4;
            let num: Vec<f64> = refined_spectrum(&p, &g, k + extra)?.iter().map(|l| l.energy).collect();
            notes.push(format!(
                "spin-1: each level matched to the nearest of the {} lowest numerical eigenvalues",
                k + extra
            ));
            Some(
                lines
                    .iter()
                    .map(|l| {
                        let e = to_f64(&l.energy);
                        num.iter().copied().min_by(|x, y| (x - e).abs().total_cmp(&(y - e).abs())).unwrap_or(f64::NAN)
                    })
                    .collect(),
            )
        } else {
            Some(refined_spectrum(&p, &g, k)?.iter().map(|l| l.energy).collect())
        }
    } else {
        None
    };

    let label = |l: &SpectrumLine| l.label.to_string();
    let mut passed = true;
    let rows: Vec<(String, f64, f64)> = lines
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let e = to_f64(&l.energy);
            let x = numeric.as_ref().map_or(f64::NAN, |v| v[i]);
            let dev = (x - e).abs() / e.abs();
            if numeric.is_some() && !(dev <= a.tol) {
                passed = false;
            }
            (label(l), x, dev)
        })
        .collect();

    match a.format {
        Format::Csv => {
            let mut s = String::from("d,spin,l_or_j,n,N_or_k,E_analytic,E_numeric,rel_dev\n");
            for (l, (lab, x, dev)) in lines.iter().zip(&rows) {
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    l.d,
                    spin_name(a.spin),
                    lab,
                    l.n,
                    l.principal,
                    sig15(to_f64(&l.energy)),
                    sig15(*x),
                    sig15(*dev)
                ));
            }
            emit(cli.output.as_deref(), &s)?;
        }
        Format::Json => {
            let results = lines
                .iter()
                .zip(&rows)
                .map(|(l, (lab, x, dev))| {
                    let mut values = json!({
                        "l_or_j": lab,
                        "n": l.n,
                        "N_or_k": l.principal.to_string(),
                        "E_exact": l.energy.to_string(),
                        "E_analytic": to_f64(&l.energy),
                    });
                    let status = if numeric.is_some() {
                        values["E_numeric"] = json!(x);
                        values["rel_dev"] = json!(dev);
                        if *dev <= a.tol {
                            "pass"
                        } else {
                            "fail"
                        }
                    } else {
                        "pass"
                    };
                    json!({ "level": format!("n{}", l.n), "status": status, "values": values })
                })
                .collect();
            emit_json(cli.output.as_deref(), &envelope(cli, results, notes))?;
        }
    }
    Ok(status_code(passed))
}

pub fn radial(cli: &Cli, a: &RadialArgs) -> CmdResult {
    let (m, alpha) = couplings(&a.couplings)?;
    if a.samples < 10 {
        return Err(Failure::Usage("need at least 10 samples".into()));
    }
    let need_l = || a.l.ok_or_else(|| Failure::Usage("--l is required for this spin".into()));
    let problem = match a.spin {
        Spin::Scalar => scalar_channel(a.d, need_l()?, &m, &alpha)?,
        Spin::Half => {
            let j =
                rational("j", a.j.as_deref().ok_or_else(|| Failure::Usage("--j is required for spin half".into()))?)?;
            spinor_channel(a.d, &j, &m, &alpha)?
        }
        Spin::One => vector_channel(a.d, need_l()?, &m, &alpha)?,
        Spin::OneExtended => {
            return Err(Failure::Usage("radial supports spin scalar, half and one".into()));
        }
    };
    let r_max = a.r_max.unwrap_or(40.0 * problem.decay_length_for(a.n));
    if !(r_max > 0.0 && r_max.is_finite()) {
        return Err(Failure::Usage(format!("--r-max must be positive, got {r_max}")));
    }
    let grid = default_sample_grid(r_max, a.samples);
    let sample: RadialFunctionSample = match a.spin {
        Spin::Scalar => scalar_eigenfunction(a.d, need_l()?, a.n, &m, &alpha, &grid)?,
        Spin::Half => {
            let j = rational("j", a.j.as_deref().unwrap_or_default())?;
            spinor_excited_states(a.d, &j, a.n, &m, &alpha, &grid)?
        }
        _ => vector_eigenfunctions(a.d, need_l()?, a.n, &m, &alpha, &grid)?,
    };
    let mut s = format!(
        "# d={} spin={} n={} nodes={} normalization={}\n",
        a.d,
        spin_name(a.spin),
        a.n,
        sample.nodes,
        sig15(sample.normalization)
    );
    s.push('r');
    for name in &sample.channel_names {
        s.push(',');
        s.push_str(name);
    }
    if sample.constraint_residual.is_some() {
        s.push_str(",constraint_residual");
    }
    s.push('\n');
    for (i, r) in sample.r.iter().enumerate() {
        s.push_str(&sig15(*r));
        for c in &sample.values {
            s.push(',');
            s.push_str(&sig15(c[i]));
        }
        if let Some(res) = &sample.constraint_residual {
            s.push(',');
            s.push_str(&sig15(res[i]));
        }
        s.push('\n');
    }
    emit(cli.output.as_deref(), &s)?;
    Ok(EXIT_PASS)
}

pub fn forbidden(cli: &Cli, a: &ForbiddenArgs) -> CmdResult {
    if a.d < 4 {
        let why = if a.d == 3 {
            "at d = 3 the transverse spin-1 channel has no Coulomb term, so there is nothing to check"
        } else {
            "the transverse spin-1 channel needs d >= 3"
        };
        return Err(Failure::Usage(format!("forbidden needs d >= 4, got d = {}: {why}", a.d)));
    }
    let (m, alpha) = couplings(&a.couplings)?;
    let rep = forbidden_channel_check(a.d, &m, &alpha, a.lmax, None)?;
    let results = report_entries(&format!("d{}", a.d), &rep);
    emit_json(cli.output.as_deref(), &envelope(cli, results, rep.notes.clone()))?;
    Ok(status_code(rep.passed))
}

pub fn eval_specfun(cli: &Cli, a: &EvalArgs) -> CmdResult {
    let (name, value) = match a.function {
        SpecialFunction::Kummer { n, b, z } => ("kummer", kummer_terminating(n, b, z)?),
        SpecialFunction::BesselK { order, x } => ("bessel_k", bessel_k(order, x)?),
        SpecialFunction::BesselI { order, x } => (
            "bessel_i",
            match order {
                0 => bessel_i0(x),
                1 => bessel_i1(x),
                _ => return Err(Failure::Usage(format!("bessel-i implements orders 0 and 1, got {order}"))),
            },
        ),
    };
    let result: Value = json!({ "identity": name, "status": "pass", "values": { "value": value } });
    emit_json(cli.output.as_deref(), &envelope(cli, vec![result], vec![]))?;
    Ok(EXIT_PASS)
}
