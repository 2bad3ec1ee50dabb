//! Factorization (shape invariance) of the scalar and spinor radial Hamiltonians.
//!
//! Scalar: `a = −∂ + W`, `a⁺ = ∂ + W`, `W = (μ+1)/r − mα/(μ+1)`, so that
//! `H_μ = a⁺a + c_μ`, `H_{μ+1} = aa⁺ + c_μ`, `c_μ = −m²α²/(μ+1)²`.
//!
//! Spinor: `a = ∂ + W`, `a⁺ = −∂ + W`, `W = −(2ϱ+1+σ3)/(2r) − kσ1`, `k = 2mα/(2ϱ+1)`, so that
//! `H_ϱ = a⁺a − k²`, `H_{ϱ+1} = aa⁺ − k²`.
//!
//! In both cases `a⁺_μ H_{μ+1} = H_μ a⁺_μ`, and the n-th state of `H_μ` is
//! `a⁺_μ a⁺_{μ+1} … a⁺_{μ+n−1} ψ⁰_{μ+n}`.

use num_traits::{One, Zero};
use serde::Serialize;

use super::exact::{QMat, RadialBasis, RadialFunction, RadialOperator};
use crate::error::{Error, Result};
use crate::exact::{qi, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LadderKind {
    Scalar,
    Spinor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Raising,
    Lowering,
}

/// `r^s ∘ op ∘ r^{−s}`, i.e. every `∂` replaced by `∂ − s/r`.
pub fn conjugate_by_power(op: &RadialOperator, s: &Q) -> RadialOperator {
    let n = op.dim();
    let shifted = RadialOperator::derivative(n).sub(&RadialOperator::power(n, s.clone(), -1));
    let mut powers = vec![RadialOperator::identity(n)];
    for _ in 0..op.order() {
        let next = powers.last().expect("nonempty").compose(&shifted);
        powers.push(next);
    }
    let mut out = RadialOperator::zero(n);
    for (k, p, m) in op.terms() {
        out = out.add(&RadialOperator::term(m.clone(), p, 0).compose(&powers[k as usize]));
    }
    out
}

/// Scalar radial Hamiltonian `−∂² + μ(μ+1)/r² − 2mα/r`.
pub fn scalar_hamiltonian(mu: &Q, m: &Q, alpha: &Q) -> RadialOperator {
    RadialOperator::power(1, -Q::one(), 0)
        .compose(&RadialOperator::derivative(1).compose(&RadialOperator::derivative(1)))
        .add(&RadialOperator::power(1, mu * (mu + Q::one()), -2))
        .add(&RadialOperator::power(1, -qi(2) * m * alpha, -1))
}

/// Spinor radial Hamiltonian `−∂² + (ϱ² + ϱσ3)/r² + 2mασ1/r`.
pub fn spinor_hamiltonian(rho: &Q, m: &Q, alpha: &Q) -> RadialOperator {
    let c = QMat::scalar(2, rho * rho).add(&QMat::sigma3().scale(rho));
    RadialOperator::term(QMat::scalar(2, -Q::one()), 0, 2)
        .add(&RadialOperator::term(c, -2, 0))
        .add(&RadialOperator::term(QMat::sigma1().scale(&(qi(2) * m * alpha)), -1, 0))
}

/// Superpotential, factorization constant and the Hamiltonian pair of one channel.
#[derive(Debug, Clone)]
pub struct LadderOp {
    pub kind: LadderKind,
    /// μ (scalar) or ϱ (spinor).
    pub param: Q,
    pub m: Q,
    pub alpha: Q,
    /// `W` as a multiplication operator.
    pub w: RadialOperator,
    pub c: Q,
}

/// Scalar ladder for channel parameter μ.
pub fn susy_ladder(mu: &Q, m: &Q, alpha: &Q) -> Result<LadderOp> {
    let mu1 = mu + Q::one();
    if mu1.is_zero() {
        return Err(Error::UnsupportedChannel("degenerate channel mu = -1".into()));
    }
    let ma = m * alpha;
    let w = RadialOperator::power(1, mu1.clone(), -1).add(&RadialOperator::power(1, -(&ma / &mu1), 0));
    let c = -(&ma * &ma) / (&mu1 * &mu1);
    Ok(LadderOp { kind: LadderKind::Scalar, param: mu.clone(), m: m.clone(), alpha: alpha.clone(), w, c })
}

/// Spinor ladder for channel parameter ϱ.
pub fn spinor_ladder(rho: &Q, m: &Q, alpha: &Q) -> Result<LadderOp> {
    let two_rho1 = qi(2) * rho + Q::one();
    if two_rho1.is_zero() {
        return Err(Error::UnsupportedChannel("degenerate channel rho = -1/2".into()));
    }
    let k = qi(2) * m * alpha / &two_rho1;
    let cent = QMat::scalar(2, two_rho1.clone()).add(&QMat::sigma3());
    let w = RadialOperator::term(cent.scale(&Q::new((-1).into(), 2.into())), -1, 0).add(&RadialOperator::term(
        QMat::sigma1().scale(&-k.clone()),
        0,
        0,
    ));
    Ok(LadderOp { kind: LadderKind::Spinor, param: rho.clone(), m: m.clone(), alpha: alpha.clone(), w, c: -(&k * &k) })
}

impl LadderOp {
    fn nchan(&self) -> usize {
        self.w.dim()
    }

    /// Sign of `∂` in the lowering operator.
    fn lowering_sign(&self) -> Q {
        match self.kind {
            LadderKind::Scalar => -Q::one(),
            LadderKind::Spinor => Q::one(),
        }
    }

    pub fn operator(&self, dir: Direction) -> RadialOperator {
        let s = match dir {
            Direction::Lowering => self.lowering_sign(),
            Direction::Raising => -self.lowering_sign(),
        };
        RadialOperator::derivative(self.nchan()).scale(&s).add(&self.w)
    }

    pub fn lowering(&self) -> RadialOperator {
        self.operator(Direction::Lowering)
    }

    pub fn raising(&self) -> RadialOperator {
        self.operator(Direction::Raising)
    }

    fn hamiltonian_at(&self, param: &Q) -> RadialOperator {
        match self.kind {
            LadderKind::Scalar => scalar_hamiltonian(param, &self.m, &self.alpha),
            LadderKind::Spinor => spinor_hamiltonian(param, &self.m, &self.alpha),
        }
    }

    /// The channel Hamiltonian `H_μ`, built independently of `W`.
    pub fn hamiltonian(&self) -> RadialOperator {
        self.hamiltonian_at(&self.param)
    }

    /// `H_{μ+1}`.
    pub fn partner_hamiltonian(&self) -> RadialOperator {
        self.hamiltonian_at(&(&self.param + Q::one()))
    }

    fn constant(&self) -> RadialOperator {
        RadialOperator::power(self.nchan(), self.c.clone(), 0)
    }

    /// `a⁺a + c − H_μ`; identically zero.
    pub fn factorization_residual(&self) -> RadialOperator {
        self.raising().compose(&self.lowering()).add(&self.constant()).sub(&self.hamiltonian())
    }

    /// `aa⁺ + c − H_{μ+1}`; identically zero.
    pub fn partner_residual(&self) -> RadialOperator {
        self.lowering().compose(&self.raising()).add(&self.constant()).sub(&self.partner_hamiltonian())
    }

    /// `a⁺_μ H_{μ+1} − H_μ a⁺_μ`; identically zero.
    pub fn intertwining_residual(&self) -> RadialOperator {
        let ap = self.raising();
        ap.compose(&self.partner_hamiltonian()).sub(&self.hamiltonian().compose(&ap))
    }

    /// The state annihilated by `a`, with `H_μ ψ⁰ = c·ψ⁰`.
    pub fn ground_state(&self) -> RadialFunction {
        let p1 = &self.param + Q::one();
        match self.kind {
            LadderKind::Scalar => {
                let beta = &self.m * &self.alpha / &p1;
                let mut f = RadialFunction::zero(1, p1, RadialBasis::Exp { beta });
                f.add_term(0, 0, 0, Q::one());
                f
            }
            LadderKind::Spinor => {
                let kappa = qi(2) * &self.m * &self.alpha / (qi(2) * &self.param + Q::one());
                let mut f = RadialFunction::zero(2, p1, RadialBasis::Bessel { kappa });
                f.add_term(0, 0, 0, Q::one());
                f.add_term(1, 0, 1, -Q::one());
                f
            }
        }
    }

    /// Ladder for the channel parameter shifted by `shift`.
    pub fn shifted(&self, shift: u32) -> Result<LadderOp> {
        let p = &self.param + qi(i64::from(shift));
        match self.kind {
            LadderKind::Scalar => susy_ladder(&p, &self.m, &self.alpha),
            LadderKind::Spinor => spinor_ladder(&p, &self.m, &self.alpha),
        }
    }

    /// `a⁺_μ … a⁺_{μ+n−1} ψ⁰_{μ+n}` and its eigenvalue `ε = c_{μ+n}` of `H_μ`.
    pub fn excited_state(&self, n: u32) -> Result<(RadialFunction, Q)> {
        let top = self.shifted(n)?;
        let mut psi = top.ground_state();
        for s in (0..n).rev() {
            psi = self.shifted(s)?.raising().apply(&psi)?;
        }
        Ok((psi, top.c))
    }
}

/// `z^{μ+1}e^{−z}·1F1(−n; 2μ+2; 2z)`, `z = mαr/(n+μ+1)`, up to the constant `β^{μ+1}`.
pub fn scalar_closed_form(mu: &Q, n: u32, m: &Q, alpha: &Q) -> RadialFunction {
    let nn = mu + qi(i64::from(n)) + Q::one();
    let beta = m * alpha / &nn;
    let b = qi(2) * mu + qi(2);
    let mut f = RadialFunction::zero(1, mu + Q::one(), RadialBasis::Exp { beta: beta.clone() });
    let mut c = Q::one();
    for j in 0..=n {
        f.add_term(0, j as i32, 0, c.clone());
        let jq = qi(i64::from(j));
        c = c * (&jq - qi(i64::from(n))) / (&b + &jq) * qi(2) * &beta / (&jq + Q::one());
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    #[test]
    fn scalar_factorization_and_intertwining() {
        for mu in [q(-1, 2), qi(0), q(1, 2), qi(3)] {
            let lad = susy_ladder(&mu, &q(3, 2), &q(2, 5)).unwrap();
            assert!(lad.factorization_residual().is_zero());
            assert!(lad.partner_residual().is_zero());
            assert!(lad.intertwining_residual().is_zero());
            assert!(lad.lowering().apply(&lad.ground_state()).unwrap().is_zero());
        }
        assert!(susy_ladder(&qi(-1), &qi(1), &qi(1)).is_err());
    }

    #[test]
    fn spinor_factorization_and_ground_state() {
        for rho in [q(1, 2), qi(1), q(5, 2)] {
            let lad = spinor_ladder(&rho, &qi(1), &q(3, 4)).unwrap();
            assert!(lad.factorization_residual().is_zero());
            assert!(lad.partner_residual().is_zero());
            assert!(lad.intertwining_residual().is_zero());
            assert!(lad.lowering().apply(&lad.ground_state()).unwrap().is_zero());
        }
    }

    #[test]
    fn ladder_states_are_eigenfunctions() {
        let m = qi(1);
        let a = qi(1);
        let lad = susy_ladder(&qi(0), &m, &a).unwrap();
        for n in 0..4 {
            let (psi, eps) = lad.excited_state(n).unwrap();
            let h = lad.hamiltonian().apply(&psi).unwrap();
            assert!(h.sub(&psi.scale(&eps)).unwrap().is_zero());
            // ε = −1/(n+1)² for d = 3, l = 0
            assert_eq!(eps, -Q::one() / qi(i64::from((n + 1) * (n + 1))));
            assert!(psi.proportional_to(&scalar_closed_form(&qi(0), n, &m, &a)));
        }
        let sp = spinor_ladder(&qi(1), &m, &a).unwrap();
        for n in 0..3 {
            let (psi, eps) = sp.excited_state(n).unwrap();
            let h = sp.hamiltonian().apply(&psi).unwrap();
            assert!(h.sub(&psi.scale(&eps)).unwrap().is_zero(), "spinor n = {n}");
        }
    }

    #[test]
    fn conjugation_by_power() {
        // r ∘ ∂ ∘ r^{-1} = ∂ − 1/r
        let c = conjugate_by_power(&RadialOperator::derivative(1), &qi(1));
        let want = RadialOperator::derivative(1).sub(&RadialOperator::power(1, qi(1), -1));
        assert_eq!(c, want);
    }
}
