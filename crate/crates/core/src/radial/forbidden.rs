//! Transverse spin-1 channel and hyperspherical coordinates.

use super::channel::phi3_channel;
use super::spectrum::{casimir_coincidences, casimir_energy_maps, CasimirMap};
use crate::error::{Error, Result};
use crate::exact::{to_f64, Q};
use crate::numsolve::{discretize, lowest_eigenvalues, Grid};
use crate::report::{CheckReport, Residual, Violation};

/// Lowest energy the transverse channel may reach and still count as unbound.
pub const FORBIDDEN_TOLERANCE: f64 = 1e-8;

/// Checks that the transverse channel has no bound state for `l ≤ lmax` (lowest numerical
/// energy `≥ −1e−8`), and that `l̃(l̃+d−3) = j(j+d−2)` has no solutions with `l̃ ≥ 1`, `j ≥ 0`.
/// `grid = None` uses the default grid of each partial wave.
pub fn forbidden_channel_check(d: usize, m: &Q, alpha: &Q, lmax: u32, grid: Option<Grid>) -> Result<CheckReport> {
    if d < 3 {
        return Err(Error::UnsupportedChannel(format!("the transverse spin-1 channel needs d >= 3, got d = {d}")));
    }
    let mut rep = CheckReport::new();
    let label = "casimir_spectra_disjoint";
    rep.checked(label);
    let hits = casimir_coincidences(d, 500, 1000);
    if let Some(&(lt, j)) = hits.first() {
        rep.violate(Violation {
            identity: label.into(),
            indices: vec![lt as usize, j as usize],
            residual: Residual::Exact(true),
            witness: None,
        });
    }
    if d == 3 {
        rep.note("d = 3: the transverse channel is free (no Coulomb term); bound-state check skipped");
        return Ok(rep);
    }
    let two_m = 2.0 * to_f64(m);
    for l in 0..=lmax {
        let p = phi3_channel(d, l, m, alpha)?;
        let g = grid.unwrap_or_else(|| Grid::default_for(&p, 1));
        let e = lowest_eigenvalues(&discretize(&p, &g)?, 1)?[0] / two_m;
        let label = format!("phi3_no_bound_state_l{l}");
        rep.checked(label.clone());
        if e < -FORBIDDEN_TOLERANCE {
            let closed = casimir_energy_maps(d, m, alpha, &CasimirMap::E3 { l, n: 0 })?;
            rep.violate(Violation {
                identity: label,
                indices: vec![l as usize],
                residual: Residual::Norm(e),
                witness: Some(vec![format!("{e:.12e}"), closed.to_string()]),
            });
        }
    }
    if !rep.passed {
        rep.note(
            "the transverse channel −χ″ + (μ(μ+1)/r² − m(d−3)α/r)χ is attractive for d > 3 and binds at \
             the E3 energies; e.g. (−x2, x1, 0, …)·exp(−βr), β = mα(d−3)/(d+1), is an exact eigenfunction \
             of the full spin-1 Hamiltonian",
        );
    }
    Ok(rep)
}

/// `x_d = r cos θ_{d−1}`, `x_{d−1} = r sin θ_{d−1} cos θ_{d−2}`, …,
/// `x_2 = r sin θ_{d−1}⋯sin θ_2 cos θ_1`, `x_1 = r sin θ_{d−1}⋯sin θ_2 sin θ_1`.
pub fn hyperspherical_to_cartesian(r: f64, angles: &[f64]) -> Result<Vec<f64>> {
    if angles.is_empty() {
        return Err(Error::InvalidDimension(1, "hyperspherical coordinates need d >= 2"));
    }
    if !(r >= 0.0) {
        return Err(Error::Domain(format!("radius must be non-negative, got {r}")));
    }
    let d = angles.len() + 1;
    let mut x = vec![0.0; d];
    let mut s = r;
    for k in (1..d).rev() {
        // angles[k−1] is θ_k
        let th = angles[k - 1];
        x[k] = s * th.cos();
        s *= th.sin();
    }
    x[0] = s;
    Ok(x)
}
