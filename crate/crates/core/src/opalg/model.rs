//! Model definitions and the operators H, J_μν, K_μ, D, ∇V built from them.

use serde::Serialize;

use super::function::{Mono, MAX_D};
use super::operator::DiffOperator;
use crate::cliffalg::{build_gamma, build_spin_half, build_spin_one, pairs, SpinKind, SpinRep};
use crate::error::{Error, Result};
use crate::exact::{gq_int, gq_real, q, qi, CMatrix, Q};

use num_traits::{One, Signed};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialKind {
    /// `−α/r`
    Coulomb,
    /// `(α/r²) γ_ν x_ν`
    Spinor,
    /// `V_μν = (g/2r)((d−3)δ_μν + 2 x_μ x_ν / r²)` with `g = −α`
    Vector,
    /// `diag((d−1)g/2r, V)` on `d + 1` components
    VectorExtended,
}

impl PotentialKind {
    pub fn spin_kind(self) -> SpinKind {
        match self {
            PotentialKind::Coulomb => SpinKind::Scalar,
            PotentialKind::Spinor => SpinKind::Spinor,
            PotentialKind::Vector | PotentialKind::VectorExtended => SpinKind::Vector,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PotentialKind::Coulomb => "coulomb",
            PotentialKind::Spinor => "spinor",
            PotentialKind::Vector => "vector",
            PotentialKind::VectorExtended => "vector_extended",
        }
    }

    pub const ALL: [PotentialKind; 4] =
        [PotentialKind::Coulomb, PotentialKind::Spinor, PotentialKind::Vector, PotentialKind::VectorExtended];
}

impl std::fmt::Display for PotentialKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A Hamiltonian `p²/2m + V` together with its spin representation.
#[derive(Debug, Clone)]
pub struct ModelSpec {
    d: usize,
    rep: SpinRep,
    kind: PotentialKind,
    m: Q,
    alpha: Q,
    potential_override: Option<DiffOperator>,
}

impl ModelSpec {
    /// Builds the representation matching `kind`.
    pub fn new(d: usize, kind: PotentialKind, m: Q, alpha: Q) -> Result<Self> {
        if !(2..=MAX_D).contains(&d) {
            return Err(Error::InvalidDimension(d as i64, "operator algebra supports 2 <= d <= 10"));
        }
        let rep = match kind {
            PotentialKind::Coulomb => SpinRep::scalar(d),
            PotentialKind::Spinor => build_spin_half(d as i64)?,
            PotentialKind::Vector => build_spin_one(d as i64)?,
            PotentialKind::VectorExtended => build_spin_one(d as i64)?.with_leading_scalar(),
        };
        Self::with_rep(rep, kind, m, alpha)
    }

    /// Default couplings `m = α = 1`.
    pub fn unit(d: usize, kind: PotentialKind) -> Result<Self> {
        Self::new(d, kind, Q::one(), Q::one())
    }

    pub fn with_rep(rep: SpinRep, kind: PotentialKind, m: Q, alpha: Q) -> Result<Self> {
        let d = rep.d();
        let expected_dim = match kind {
            PotentialKind::Coulomb => 1,
            PotentialKind::Spinor => 1 << (d / 2),
            PotentialKind::Vector => d,
            PotentialKind::VectorExtended => d + 1,
        };
        if rep.kind() != kind.spin_kind() || rep.dim() != expected_dim {
            return Err(Error::IncompatibleKind {
                kind: kind.name().to_string(),
                rep: format!("{} (dim {})", rep.kind(), rep.dim()),
            });
        }
        if !m.is_positive() || !alpha.is_positive() {
            return Err(Error::Domain("m and alpha must be positive".into()));
        }
        Ok(Self { d, rep, kind, m, alpha, potential_override: None })
    }

    /// Replaces the potential (used to probe that the checks detect broken models).
    pub fn with_potential(mut self, v: DiffOperator) -> Result<Self> {
        if v.d() != self.d || v.ncomp() != self.rep.dim() || !v.is_multiplication() {
            return Err(Error::Mismatch(
                "override potential must be a multiplication operator of matching shape".into(),
            ));
        }
        self.potential_override = Some(v);
        Ok(self)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn rep(&self) -> &SpinRep {
        &self.rep
    }

    pub fn kind(&self) -> PotentialKind {
        self.kind
    }

    pub fn m(&self) -> &Q {
        &self.m
    }

    pub fn alpha(&self) -> &Q {
        &self.alpha
    }

    pub fn ncomp(&self) -> usize {
        self.rep.dim()
    }

    /// Decay rate used for test functions; any positive rational works.
    pub fn test_beta(&self) -> Q {
        &self.m * &self.alpha / qi(2)
    }

    /// Spin-1 coupling `g = −α` (attractive orientation).
    pub fn vector_coupling(&self) -> Q {
        -self.alpha.clone()
    }

    pub fn potential(&self) -> DiffOperator {
        if let Some(v) = &self.potential_override {
            return v.clone();
        }
        let d = self.d;
        let n = self.ncomp();
        match self.kind {
            PotentialKind::Coulomb => DiffOperator::scalar_function(d, 1, gq_real(-self.alpha.clone()), Mono::ONE, -1),
            PotentialKind::Spinor => {
                let g = build_gamma(d as i64).expect("validated dimension");
                let mut v = DiffOperator::zero(d, n);
                for nu in 1..=d {
                    let term = DiffOperator::matrix_function(
                        g.gamma(nu).scale(&gq_real(self.alpha.clone())),
                        d,
                        Mono::var(nu),
                        -2,
                    );
                    v = v.add(&term).expect("same shape");
                }
                v
            }
            PotentialKind::Vector => vector_potential(d, &self.vector_coupling(), 0),
            PotentialKind::VectorExtended => {
                let g = self.vector_coupling();
                let mut corner = CMatrix::zeros(n);
                corner.set(0, 0, gq_real(&g * qi(d as i64 - 1) / qi(2)));
                DiffOperator::matrix_function(corner, d, Mono::ONE, -1)
                    .add(&vector_potential(d, &g, 1))
                    .expect("same shape")
            }
        }
    }
}

/// `(g/2r)((d−3)δ_μν + 2x_μx_ν/r²)` placed at component offset `off`.
fn vector_potential(d: usize, g: &Q, off: usize) -> DiffOperator {
    let n = d + off;
    let mut diag = CMatrix::zeros(n);
    for a in 0..d {
        diag.set(off + a, off + a, gq_real(g * qi(d as i64 - 3) / qi(2)));
    }
    let mut v = DiffOperator::matrix_function(diag, d, Mono::ONE, -1);
    for mu in 1..=d {
        for nu in 1..=d {
            let e = CMatrix::unit(n, off + mu - 1, off + nu - 1).scale(&gq_real(g.clone()));
            let term = DiffOperator::matrix_function(e, d, Mono::var(mu).raise(nu), -3);
            v = v.add(&term).expect("same shape");
        }
    }
    v
}

/// `H = p²/2m + V`.
pub fn build_hamiltonian(ms: &ModelSpec) -> DiffOperator {
    let half_inv_m = gq_real(ms.m.recip() / qi(2));
    DiffOperator::momentum_squared(ms.d, ms.ncomp()).scale(&half_inv_m).add(&ms.potential()).expect("same shape")
}

/// `L_μν = x_μ p_ν − x_ν p_μ` for any μ ≠ ν.
pub fn orbital(d: usize, ncomp: usize, mu: usize, nu: usize) -> DiffOperator {
    let xp = |a: usize, b: usize| {
        DiffOperator::position(d, ncomp, a).compose(&DiffOperator::momentum(d, ncomp, b)).expect("same shape")
    };
    xp(mu, nu).sub(&xp(nu, mu)).expect("same shape")
}

/// `J_μν = L_μν + S_μν` for μ < ν, in the order of [`pairs`].
pub fn build_angular_momenta(ms: &ModelSpec) -> Vec<DiffOperator> {
    pairs(ms.d).into_iter().map(|(mu, nu)| angular_momentum(ms, mu, nu)).collect()
}

/// `J_μν` for any μ, ν (antisymmetric).
pub fn angular_momentum(ms: &ModelSpec, mu: usize, nu: usize) -> DiffOperator {
    let n = ms.ncomp();
    if mu == nu {
        return DiffOperator::zero(ms.d, n);
    }
    orbital(ms.d, n, mu, nu).add(&DiffOperator::constant(ms.rep.s(mu, nu), ms.d)).expect("same shape")
}

/// `K_μ = (1/2m) Σ_ν (p_ν J_μν + J_μν p_ν) + x_μ V`, normal ordered.
pub fn build_lrl(ms: &ModelSpec) -> Vec<DiffOperator> {
    let d = ms.d;
    let n = ms.ncomp();
    let v = ms.potential();
    let half_inv_m = gq_real(ms.m.recip() / qi(2));
    (1..=d)
        .map(|mu| {
            let mut k = DiffOperator::position(d, n, mu).compose(&v).expect("same shape");
            for nu in 1..=d {
                if nu == mu {
                    continue;
                }
                let j = angular_momentum(ms, mu, nu);
                let p = DiffOperator::momentum(d, n, nu);
                let sym = p.compose(&j).and_then(|a| a.add(&j.compose(&p).expect("same shape"))).expect("same shape");
                k = k.add(&sym.scale(&half_inv_m)).expect("same shape");
            }
            k
        })
        .collect()
}

/// `Σ_{μ<ν} J_μν²`, which equals `½ J_μν J_μν` summed over all indices.
pub fn casimir_j(ms: &ModelSpec) -> DiffOperator {
    let mut c = DiffOperator::zero(ms.d, ms.ncomp());
    for j in build_angular_momenta(ms) {
        c = c.add(&j.compose(&j).expect("same shape")).expect("same shape");
    }
    c
}

/// `Σ_{μ,ν} S_μν L_μν` (all ordered pairs).
pub fn spin_orbit(ms: &ModelSpec) -> DiffOperator {
    let mut so = DiffOperator::zero(ms.d, ms.ncomp());
    for (mu, nu) in pairs(ms.d) {
        let term = DiffOperator::constant(ms.rep.s(mu, nu).scale(&gq_int(2)), ms.d)
            .compose(&orbital(ms.d, ms.ncomp(), mu, nu))
            .expect("same shape");
        so = so.add(&term).expect("same shape");
    }
    so
}

/// `D = −(Σ_{μ,ν} S_μν L_μν + (d−1)/2)`, which equals `½γ_μγ_ν(x_μ∂_ν − x_ν∂_μ) − (d−1)/2`.
pub fn build_dirac_d(ms: &ModelSpec) -> Result<DiffOperator> {
    if ms.kind != PotentialKind::Spinor {
        return Err(Error::IncompatibleKind { kind: ms.kind.name().into(), rep: "D needs the spinor model".into() });
    }
    let shift = DiffOperator::identity(ms.d, ms.ncomp()).scale(&gq_real(q(ms.d as i64 - 1, 2)));
    Ok(spin_orbit(ms).add(&shift)?.scale(&gq_int(-1)))
}

/// Multiplication operators `∇_ν V`, ν = 1..d.
pub fn gradient_potential(ms: &ModelSpec) -> Vec<DiffOperator> {
    let v = ms.potential();
    (1..=ms.d).map(|nu| v.coefficient_partial(nu).expect("potential is a multiplication operator")).collect()
}

/// `γ_ν p_ν` and `γ_ν x_ν` for the spinor model.
pub fn gamma_contractions(ms: &ModelSpec) -> Result<(DiffOperator, DiffOperator)> {
    let g = build_gamma(ms.d as i64)?;
    let n = ms.ncomp();
    let mut gp = DiffOperator::zero(ms.d, n);
    let mut gx = DiffOperator::zero(ms.d, n);
    for nu in 1..=ms.d {
        let gam = DiffOperator::constant(g.gamma(nu).clone(), ms.d);
        gp = gp.add(&gam.compose(&DiffOperator::momentum(ms.d, n, nu))?)?;
        gx = gx.add(&DiffOperator::matrix_function(g.gamma(nu).clone(), ms.d, Mono::var(nu), 0))?;
    }
    Ok((gp, gx))
}

/// `∂_r = r^{−1} x_ν ∂_ν`.
pub fn radial_derivative(d: usize, ncomp: usize) -> DiffOperator {
    let mut dr = DiffOperator::zero(d, ncomp);
    for nu in 1..=d {
        let t = DiffOperator::scalar_function(d, ncomp, gq_int(1), Mono::var(nu), -1)
            .compose(&DiffOperator::partial(d, ncomp, nu))
            .expect("same shape");
        dr = dr.add(&t).expect("same shape");
    }
    dr
}
