//! Radial channels in the common form `−y″ + (C/r² + Z/r)·y = ε·y`, `ε = 2mE`.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::exact::{QMat, RadialOperator};
use crate::cliffalg::SpinKind;
use crate::error::{Error, Result};
use crate::exact::{q, qi, to_f64, Q};

/// Quantum numbers labelling a channel.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "channel", rename_all = "snake_case")]
pub enum ChannelLabel {
    Scalar {
        l: u32,
        mu: String,
    },
    Spinor {
        j: String,
        rho: String,
    },
    /// Coupled (φ1, φ2) pair.
    Vector {
        l: u32,
    },
    /// Single equation for `r^{(d+1)/2}·φ2` left after eliminating φ1.
    VectorReduced {
        l: u32,
        mu: String,
    },
    /// Transverse component Φ³ in partial wave `l`.
    Phi3 {
        l: u32,
        mu: String,
    },
}

/// A radial eigenproblem. For the vector pair the unknowns are
/// `(r^{(d−1)/2}φ1, √L·r^{(d−1)/2}φ2)` with `L = l(l+d−2)`, which removes the first-derivative
/// terms and makes `C` symmetric.
#[derive(Debug, Clone, Serialize)]
pub struct RadialProblem {
    pub d: usize,
    pub spin_kind: SpinKind,
    pub nchan: usize,
    #[serde(serialize_with = "ser_q")]
    pub m: Q,
    #[serde(serialize_with = "ser_q")]
    pub alpha: Q,
    pub quantum: ChannelLabel,
    /// `C`, symmetric.
    pub centrifugal: Vec<Vec<f64>>,
    /// `Z`, symmetric.
    pub coulomb: Vec<Vec<f64>>,
    /// Decay length `1/√(−ε₀)` of the lowest bound state, or `1/(mα)` when there is none.
    pub decay_length: f64,
}

fn ser_q<S: serde::Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl RadialProblem {
    /// `M(r) = C/r² + Z/r`.
    pub fn potential_matrix(&self, r: f64) -> Vec<Vec<f64>> {
        (0..self.nchan)
            .map(|i| (0..self.nchan).map(|j| self.centrifugal[i][j] / (r * r) + self.coulomb[i][j] / r).collect())
            .collect()
    }

    /// Decay length of the `n`-th level above the lowest.
    pub fn decay_length_for(&self, n: u32) -> f64 {
        let base = self.principal_offset();
        self.decay_length * (base + f64::from(n)) / base
    }

    // decay length grows linearly in the principal number; this is the value at n = 0
    fn principal_offset(&self) -> f64 {
        match &self.quantum {
            ChannelLabel::Scalar { mu, .. }
            | ChannelLabel::VectorReduced { mu, .. }
            | ChannelLabel::Phi3 { mu, .. } => parse_q(mu) + 1.0,
            ChannelLabel::Spinor { rho, .. } => parse_q(rho) + 0.5,
            ChannelLabel::Vector { l } => f64::from(*l) + (self.d as f64 - 1.0) / 2.0,
        }
    }

    /// `Z` of the single-equation channels as an exact rational.
    pub fn exact_coulomb(&self) -> Option<Q> {
        let d = qi(self.d as i64);
        let ma = &self.m * &self.alpha;
        Some(match &self.quantum {
            ChannelLabel::Scalar { .. } => -qi(2) * ma,
            ChannelLabel::VectorReduced { .. } => -(d - qi(1)) * ma,
            ChannelLabel::Phi3 { .. } => -(d - qi(3)) * ma,
            _ => return None,
        })
    }

    /// Exact operator `−∂² + C/r² + Z/r` for channels whose coefficients are rational
    /// (every channel except the symmetrized vector pair).
    pub fn exact_operator(&self) -> Option<RadialOperator> {
        let (c, z) = match &self.quantum {
            ChannelLabel::Scalar { mu, .. }
            | ChannelLabel::VectorReduced { mu, .. }
            | ChannelLabel::Phi3 { mu, .. } => {
                let mu: Q = mu.parse().ok()?;
                let z = self.exact_coulomb()?;
                (QMat::scalar(1, &mu * (&mu + Q::one())), QMat::scalar(1, z))
            }
            ChannelLabel::Spinor { rho, .. } => {
                let rho: Q = rho.parse().ok()?;
                let c = QMat::scalar(2, &rho * &rho).add(&QMat::sigma3().scale(&rho));
                let omega = qi(2) * &self.m * &self.alpha;
                (c, QMat::sigma1().scale(&omega))
            }
            ChannelLabel::Vector { .. } => return None,
        };
        let n = self.nchan;
        Some(
            RadialOperator::term(QMat::scalar(n, -Q::one()), 0, 2)
                .add(&RadialOperator::term(c, -2, 0))
                .add(&RadialOperator::term(z, -1, 0)),
        )
    }
}

fn parse_q(s: &str) -> f64 {
    s.parse::<Q>().map(|x| to_f64(&x)).unwrap_or(f64::NAN)
}

fn check_couplings(m: &Q, alpha: &Q) -> Result<()> {
    if !m.is_positive() || !alpha.is_positive() {
        return Err(Error::InvalidQuantumNumbers(format!(
            "m and alpha must be positive, got m = {m}, alpha = {alpha}"
        )));
    }
    Ok(())
}

fn mat1(x: f64) -> Vec<Vec<f64>> {
    vec![vec![x]]
}

/// `μ = l + (d−3)/2`.
pub fn scalar_mu(d: usize, l: u32) -> Q {
    qi(i64::from(l)) + q(d as i64 - 3, 2)
}

fn single_channel(
    d: usize,
    spin_kind: SpinKind,
    mu: Q,
    z: Q,
    m: &Q,
    alpha: &Q,
    quantum: ChannelLabel,
) -> RadialProblem {
    let c = to_f64(&(&mu * (&mu + Q::one())));
    let zf = to_f64(&z);
    // bound state ε₀ = −(Z/2)²/(μ+1)²
    let decay_length = if zf < 0.0 { to_f64(&(mu + Q::one())) * 2.0 / (-zf) } else { 1.0 / to_f64(&(m * alpha)) };
    RadialProblem {
        d,
        spin_kind,
        nchan: 1,
        m: m.clone(),
        alpha: alpha.clone(),
        quantum,
        centrifugal: mat1(c),
        coulomb: mat1(zf),
        decay_length,
    }
}

/// Scalar Coulomb channel: `C = μ(μ+1)`, `Z = −2mα`.
pub fn scalar_channel(d: usize, l: u32, m: &Q, alpha: &Q) -> Result<RadialProblem> {
    if d < 2 {
        return Err(Error::InvalidDimension(d as i64, "radial channels need d >= 2"));
    }
    check_couplings(m, alpha)?;
    let mu = scalar_mu(d, l);
    let z = -qi(2) * m * alpha;
    let label = ChannelLabel::Scalar { l, mu: mu.to_string() };
    Ok(single_channel(d, SpinKind::Scalar, mu, z, m, alpha, label))
}

/// Parses and validates a total angular momentum `j ∈ {½, 3/2, …}`.
pub fn check_half_integer(j: &Q) -> Result<()> {
    let twice = j * qi(2);
    if !twice.is_integer() || twice.to_integer() % 2 == 0.into() || !j.is_positive() {
        return Err(Error::InvalidQuantumNumbers(format!("j must be a positive half-integer, got {j}")));
    }
    Ok(())
}

/// `ϱ = j + (d−2)/2`.
pub fn spinor_rho(d: usize, j: &Q) -> Q {
    j + q(d as i64 - 2, 2)
}

/// Spinor channel: `C = ϱ² + ϱσ3`, `Z = 2mα·σ1`.
pub fn spinor_channel(d: usize, j: &Q, m: &Q, alpha: &Q) -> Result<RadialProblem> {
    if d < 2 {
        return Err(Error::InvalidDimension(d as i64, "radial channels need d >= 2"));
    }
    check_couplings(m, alpha)?;
    check_half_integer(j)?;
    let rho = spinor_rho(d, j);
    let r = to_f64(&rho);
    let omega = to_f64(&(qi(2) * m * alpha));
    // ε₀ = −k², k = ω/(2ϱ+1)
    let decay_length = (2.0 * r + 1.0) / omega;
    Ok(RadialProblem {
        d,
        spin_kind: SpinKind::Spinor,
        nchan: 2,
        m: m.clone(),
        alpha: alpha.clone(),
        quantum: ChannelLabel::Spinor { j: j.to_string(), rho: rho.to_string() },
        centrifugal: vec![vec![r * r + r, 0.0], vec![0.0, r * r - r]],
        coulomb: vec![vec![0.0, omega], vec![omega, 0.0]],
        decay_length,
    })
}

fn check_vector(d: usize, l: u32) -> Result<()> {
    if d < 3 {
        return Err(Error::UnsupportedChannel(format!("the coupled spin-1 radial system needs d >= 3, got d = {d}")));
    }
    if l == 0 {
        return Err(Error::UnsupportedChannel(
            "l = 0: the tangential component r∇Y vanishes and φ2 is undefined".into(),
        ));
    }
    Ok(())
}

/// `L = l(l+d−2)`.
pub fn vector_casimir_l(d: usize, l: u32) -> Q {
    let l = qi(i64::from(l));
    &l * (&l + qi(d as i64 - 2))
}

/// Coupled spin-1 pair. In terms of `F = r^{(d−1)/2}φ1`, `G = √L·r^{(d−1)/2}φ2`, with
/// `c0 = (d−1)(d−3)/4`:
/// `C = [[c0+L+d−1, −2√L], [−2√L, c0+L−d+3]]`, `Z = −mα·diag(d−1, d−3)`.
pub fn vector_channel(d: usize, l: u32, m: &Q, alpha: &Q) -> Result<RadialProblem> {
    check_vector(d, l)?;
    check_couplings(m, alpha)?;
    let df = d as f64;
    let big_l = to_f64(&vector_casimir_l(d, l));
    let c0 = (df - 1.0) * (df - 3.0) / 4.0;
    let s = big_l.sqrt();
    let ma = to_f64(&(m * alpha));
    // ε₀ = −(mα/k)², k = (2l+d−1)/(d−1)
    let k0 = (2.0 * f64::from(l) + df - 1.0) / (df - 1.0);
    Ok(RadialProblem {
        d,
        spin_kind: SpinKind::Vector,
        nchan: 2,
        m: m.clone(),
        alpha: alpha.clone(),
        quantum: ChannelLabel::Vector { l },
        centrifugal: vec![vec![c0 + big_l + df - 1.0, -2.0 * s], vec![-2.0 * s, c0 + big_l - df + 3.0]],
        coulomb: vec![vec![-ma * (df - 1.0), 0.0], vec![0.0, -ma * (df - 3.0)]],
        decay_length: k0 / ma,
    })
}

/// Native spin-1 radial operator acting on `(φ1, φ2)`:
/// ```text
/// −φ1″ − (d−1)φ1′/r + ((L+d−1)φ1 − 2Lφ2)/r² − mα(d−1)φ1/r
/// −φ2″ − (d−1)φ2′/r + ((L−d+3)φ2 − 2φ1)/r² − mα(d−3)φ2/r
/// ```
/// whose eigenvalue is `2mE`.
pub fn vector_native_operator(d: usize, l: u32, m: &Q, alpha: &Q) -> Result<RadialOperator> {
    check_vector(d, l)?;
    let dq = qi(d as i64);
    let big_l = vector_casimir_l(d, l);
    let ma = m * alpha;
    let z = Q::zero();
    let kinetic = RadialOperator::term(QMat::scalar(2, -Q::one()), 0, 2).add(&RadialOperator::term(
        QMat::scalar(2, -(&dq - qi(1))),
        -1,
        1,
    ));
    let cent = QMat::from_rows(&[&[&big_l + &dq - qi(1), -qi(2) * &big_l], &[-qi(2), &big_l - &dq + qi(3)]]);
    let coul = QMat::from_rows(&[&[-(&dq - qi(1)) * &ma, z.clone()], &[z, -(&dq - qi(3)) * &ma]]);
    Ok(kinetic.add(&RadialOperator::term(cent, -2, 0)).add(&RadialOperator::term(coul, -1, 0)))
}

/// The single equation obeyed by `χ = r^{(d+1)/2}φ2` once `φ1 = (rφ2)′ + mαrφ2` is
/// substituted: the scalar channel with `μ = l + (d−3)/2` and `α → (d−1)α/2`.
pub fn vector_reduced_channel(d: usize, l: u32, m: &Q, alpha: &Q) -> Result<RadialProblem> {
    check_vector(d, l)?;
    check_couplings(m, alpha)?;
    let mu = scalar_mu(d, l);
    let z = -qi(d as i64 - 1) * m * alpha;
    let label = ChannelLabel::VectorReduced { l, mu: mu.to_string() };
    Ok(single_channel(d, SpinKind::Vector, mu, z, m, alpha, label))
}

/// Transverse spin-1 channel in partial wave `l`: the scalar channel with
/// `Z = −m(d−3)α` (the coupling of the model, `g = −α`, makes it attractive for `d > 3`).
pub fn phi3_channel(d: usize, l: u32, m: &Q, alpha: &Q) -> Result<RadialProblem> {
    if d < 3 {
        return Err(Error::UnsupportedChannel(format!("the transverse spin-1 channel needs d >= 3, got d = {d}")));
    }
    check_couplings(m, alpha)?;
    let mu = scalar_mu(d, l);
    let z = -qi(d as i64 - 3) * m * alpha;
    let label = ChannelLabel::Phi3 { l, mu: mu.to_string() };
    Ok(single_channel(d, SpinKind::Vector, mu, z, m, alpha, label))
}
