//! Closed-form bound-state energies and the Casimir/energy relations.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::channel::{check_half_integer, scalar_mu, spinor_rho};
use crate::cliffalg::SpinKind;
use crate::error::{Error, Result};
use crate::exact::{q, qi, Q};

/// One analytic level. `principal` is `N` (scalar, spinor) or `k` (vector); `label` is
/// `l` or `j`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumLine {
    pub d: usize,
    pub spin_kind: SpinKind,
    #[serde(serialize_with = "ser_q")]
    pub label: Q,
    pub n: u32,
    #[serde(serialize_with = "ser_q")]
    pub principal: Q,
    #[serde(serialize_with = "ser_q")]
    pub energy: Q,
}

fn ser_q<S: serde::Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn balmer(m: &Q, alpha: &Q, principal: &Q) -> Q {
    -(m * alpha * alpha) / (qi(2) * principal * principal)
}

/// `N = n + l + (d−1)/2`, `E = −mα²/(2N²)`.
pub fn analytic_energy_scalar(d: usize, l: u32, n: u32, m: &Q, alpha: &Q) -> SpectrumLine {
    let principal = scalar_mu(d, l) + qi(i64::from(n)) + Q::one();
    SpectrumLine {
        d,
        spin_kind: SpinKind::Scalar,
        label: qi(i64::from(l)),
        n,
        energy: balmer(m, alpha, &principal),
        principal,
    }
}

/// `N = j + n + (d−1)/2`, `E = −mα²/(2N²)`.
pub fn analytic_energy_spinor(d: usize, j: &Q, n: u32, m: &Q, alpha: &Q) -> Result<SpectrumLine> {
    check_half_integer(j)?;
    let principal = spinor_rho(d, j) + qi(i64::from(n)) + q(1, 2);
    Ok(SpectrumLine {
        d,
        spin_kind: SpinKind::Spinor,
        label: j.clone(),
        n,
        energy: balmer(m, alpha, &principal),
        principal,
    })
}

/// `k = (2n+2l+d−1)/(d−1)`, `E = −mα²/(2k²)`.
pub fn analytic_energy_vector(d: usize, l: u32, n: u32, m: &Q, alpha: &Q) -> Result<SpectrumLine> {
    if d < 3 || l == 0 {
        return Err(Error::UnsupportedChannel(format!(
            "spin-1 coupled channel needs d >= 3 and l >= 1, got d = {d}, l = {l}"
        )));
    }
    let principal = Q::new((2 * i64::from(n) + 2 * i64::from(l) + d as i64 - 1).into(), (d as i64 - 1).into());
    Ok(SpectrumLine {
        d,
        spin_kind: SpinKind::Vector,
        label: qi(i64::from(l)),
        n,
        energy: balmer(m, alpha, &principal),
        principal,
    })
}

/// `ω̂ = ĵ(ĵ+d−1) + (d−1)(d−2)/8`, `ĵ = j + n`.
pub fn casimir_relation_spinor(d: usize, j: &Q, n: u32) -> Result<Q> {
    check_half_integer(j)?;
    let jh = j + qi(i64::from(n));
    let dq = qi(d as i64);
    Ok(&jh * (&jh + &dq - qi(1)) + (&dq - qi(1)) * (&dq - qi(2)) / qi(8))
}

/// Which Casimir/energy relation to evaluate.
#[derive(Debug, Clone, PartialEq)]
pub enum CasimirMap {
    /// `E = −mα²(d−1)²/(2(d−1)² + 8ω)`.
    E1 { omega: Q },
    /// `E = −mα²(d−3)²/(2(d−3)² + 8ω)`.
    E2 { omega: Q },
    /// `E = −mα²(d−3)²/(2(2l+2n+d−1)²)`.
    E3 { l: u32, n: u32 },
}

pub fn casimir_energy_maps(d: usize, m: &Q, alpha: &Q, which: &CasimirMap) -> Result<Q> {
    let dq = qi(d as i64);
    let ma2 = m * alpha * alpha;
    let (num, den) = match which {
        CasimirMap::E1 { omega } => {
            let s = (&dq - qi(1)) * (&dq - qi(1));
            (s.clone(), qi(2) * s + qi(8) * omega)
        }
        CasimirMap::E2 { omega } => {
            let s = (&dq - qi(3)) * (&dq - qi(3));
            (s.clone(), qi(2) * s + qi(8) * omega)
        }
        CasimirMap::E3 { l, n } => {
            let k = qi(2 * i64::from(*l) + 2 * i64::from(*n)) + &dq - qi(1);
            ((&dq - qi(3)) * (&dq - qi(3)), qi(2) * &k * &k)
        }
    };
    if den.is_zero() {
        return Err(Error::Domain(format!("vanishing denominator in {which:?} at d = {d}")));
    }
    Ok(-ma2 * num / den)
}

/// so(d+1) Casimir of the spin-1 bound states, `ω = l′(l′+d−1)` with `l′ = l + n`.
pub fn vector_omega(d: usize, l: u32, n: u32) -> Q {
    let lp = qi(i64::from(l + n));
    &lp * (&lp + qi(d as i64 - 1))
}

/// Value of ω that would make E2 and E3 agree: `l̃(l̃+d−3)`, `l̃ = l+n+1`.
pub fn compatibility_omega(d: usize, l: u32, n: u32) -> Q {
    let lt = qi(i64::from(l + n + 1));
    &lt * (&lt + qi(d as i64 - 3))
}

/// Separation constant `ε = (2mE((d−3)² + 4ω) + m²α²(d−3)²)/(4(d−2))`.
pub fn vector_separation_constant(d: usize, m: &Q, alpha: &Q, energy: &Q, omega: &Q) -> Q {
    let s = qi(d as i64 - 3) * qi(d as i64 - 3);
    (qi(2) * m * energy * (&s + qi(4) * omega) + m * m * alpha * alpha * &s) / (qi(4) * qi(d as i64 - 2))
}

/// Pairs `(l̃, j)` with `1 ≤ l̃ ≤ lt_max`, `0 ≤ j ≤ j_max` and `l̃(l̃+d−3) = j(j+d−2)`.
pub fn casimir_coincidences(d: usize, lt_max: u64, j_max: u64) -> Vec<(u64, u64)> {
    let d = d as i128;
    let mut out = Vec::new();
    for lt in 1..=lt_max as i128 {
        let a = lt * (lt + d - 3);
        for j in 0..=j_max as i128 {
            let b = j * (j + d - 2);
            if b > a {
                break;
            }
            if a == b {
                out.push((lt as u64, j as u64));
            }
        }
    }
    out
}

/// True when every level has `E < 0` and the energies increase strictly with `n`.
pub fn is_valid_series(lines: &[SpectrumLine]) -> bool {
    lines.iter().all(|l| l.energy.is_negative()) && lines.windows(2).all(|w| w[0].energy < w[1].energy)
}
