//! Gamma matrices, so(d) spin generators and their exact certification.
//!
//! Gamma matrices are built by the usual tensor-product recursion. The base
//! case is the empty set (d = 0, dimension 1) for even d and `{[1]}` for odd d;
//! going from d to d + 2 maps every `γ_μ ↦ γ_μ ⊗ σ3` and appends `I ⊗ σ1`,
//! `I ⊗ σ2`. All entries are in {0, ±1, ±i}, so every matrix is monomial and the
//! sparse representation keeps the exhaustive checks cheap even at d = 10.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{gq_i, gq_int, pauli, q, CMatrix, GQ};
use crate::report::{CheckReport, Residual, Violation};

#[derive(Debug, Clone, PartialEq)]
pub struct GammaSet {
    d: usize,
    matrices: Vec<CMatrix>,
    dim: usize,
}

impl GammaSet {
    /// Wraps an arbitrary family; no invariant is enforced (used to feed the checker).
    pub fn from_matrices(matrices: Vec<CMatrix>) -> Result<Self> {
        let dim = matrices.first().map(CMatrix::dim).ok_or(Error::InvalidDimension(0, "empty gamma family"))?;
        if matrices.iter().any(|m| m.dim() != dim) {
            return Err(Error::Mismatch("gamma matrices differ in size".into()));
        }
        Ok(Self { d: matrices.len(), matrices, dim })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `γ_μ` with 1-based index.
    pub fn gamma(&self, mu: usize) -> &CMatrix {
        &self.matrices[mu - 1]
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.matrices
    }

    /// Gelfand-Tsetlin label of the irreducible so(d) spinor these matrices generate.
    /// Metadata only: no check depends on it.
    pub fn gelfand_tsetlin_label(&self) -> String {
        let m = self.d / 2;
        let mut parts = vec!["1/2"; m.max(1)];
        if self.d % 2 == 1 && m >= 1 {
            parts[m - 1] = "-1/2";
        }
        format!("D({})", parts.join(","))
    }
}

pub fn build_gamma(d: i64) -> Result<GammaSet> {
    if d < 1 {
        return Err(Error::InvalidDimension(d, "gamma matrices need d >= 1"));
    }
    let d = d as usize;
    let [s1, s2, s3] = pauli();
    let (mut gammas, mut dim) = if d % 2 == 1 { (vec![CMatrix::identity(1)], 1usize) } else { (Vec::new(), 1usize) };
    while gammas.len() < d {
        let id = CMatrix::identity(dim);
        let mut next: Vec<CMatrix> = gammas.iter().map(|g| g.kron(&s3)).collect();
        next.push(id.kron(&s1));
        next.push(id.kron(&s2));
        gammas = next;
        dim *= 2;
    }
    Ok(GammaSet { d, matrices: gammas, dim })
}

/// Hermitian chirality matrix `γ_{d+1} = c·γ_1γ_2…γ_d`, `c ∈ {1, i}` chosen so that `γ_{d+1}² = I`.
pub fn build_chirality(g: &GammaSet) -> Result<CMatrix> {
    if g.d % 2 == 1 {
        return Err(Error::UnsupportedParity(g.d));
    }
    let mut prod = CMatrix::identity(g.dim);
    for m in &g.matrices {
        prod = prod.mul(m);
    }
    // (γ_1…γ_d)² = (−1)^{d(d−1)/2}
    let sign_negative = (g.d * (g.d.saturating_sub(1)) / 2) % 2 == 1;
    Ok(if sign_negative { prod.scale(&gq_i()) } else { prod })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpinKind {
    Scalar,
    Spinor,
    Vector,
}

impl std::fmt::Display for SpinKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SpinKind::Scalar => "scalar",
            SpinKind::Spinor => "spinor",
            SpinKind::Vector => "vector",
        };
        f.write_str(s)
    }
}

/// Position of the pair (μ, ν), 1 ≤ μ < ν ≤ d, in the packed generator list.
pub fn pair_index(d: usize, mu: usize, nu: usize) -> usize {
    debug_assert!(1 <= mu && mu < nu && nu <= d);
    let (m, n) = (mu - 1, nu - 1);
    m * d - m * (m + 1) / 2 + (n - m - 1)
}

/// All pairs (μ, ν) with μ < ν, in packed order.
pub fn pairs(d: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::with_capacity(d * (d.saturating_sub(1)) / 2);
    for mu in 1..=d {
        for nu in mu + 1..=d {
            v.push((mu, nu));
        }
    }
    v
}

/// Antisymmetric family of so(d) generators `S_μν`, stored for μ < ν.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinRep {
    d: usize,
    kind: SpinKind,
    generators: Vec<CMatrix>,
    dim: usize,
}

impl SpinRep {
    pub fn scalar(d: usize) -> Self {
        Self { d, kind: SpinKind::Scalar, generators: vec![CMatrix::zeros(1); d * d.saturating_sub(1) / 2], dim: 1 }
    }

    /// Wraps explicit generators (packed μ < ν order) without checking them.
    pub fn from_generators(d: usize, kind: SpinKind, generators: Vec<CMatrix>) -> Result<Self> {
        if generators.len() != d * d.saturating_sub(1) / 2 {
            return Err(Error::Mismatch(format!(
                "expected {} generators for d = {d}, got {}",
                d * d.saturating_sub(1) / 2,
                generators.len()
            )));
        }
        let dim = generators.first().map(CMatrix::dim).unwrap_or(1);
        Ok(Self { d, kind, generators, dim })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn kind(&self) -> SpinKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    /// `S_μν` for any 1-based μ, ν (antisymmetric extension, zero on the diagonal).
    pub fn s(&self, mu: usize, nu: usize) -> CMatrix {
        use std::cmp::Ordering;
        match mu.cmp(&nu) {
            Ordering::Equal => CMatrix::zeros(self.dim),
            Ordering::Less => self.generators[pair_index(self.d, mu, nu)].clone(),
            Ordering::Greater => self.generators[pair_index(self.d, nu, mu)].scale(&gq_int(-1)),
        }
    }

    /// `½ S_μν S_μν` summed over all μ, ν.
    pub fn casimir(&self) -> CMatrix {
        self.generators.iter().fold(CMatrix::zeros(self.dim), |acc, s| acc.add(&s.mul(s)))
    }

    /// Direct sum with the trivial representation placed first (dimension + 1).
    pub fn with_leading_scalar(&self) -> Self {
        let zero = CMatrix::zeros(1);
        Self {
            d: self.d,
            kind: self.kind,
            generators: self.generators.iter().map(|s| zero.direct_sum(s)).collect(),
            dim: self.dim + 1,
        }
    }
}

/// Spin-½ generators `S_μν = (1/4i)[γ_μ, γ_ν]`, Hermitian for Hermitian gammas.
pub fn build_spin_half(d: i64) -> Result<SpinRep> {
    if d < 2 {
        return Err(Error::InvalidDimension(d, "spin-1/2 generators need d >= 2"));
    }
    let g = build_gamma(d)?;
    let factor = GQ::new(q(0, 1), q(-1, 4));
    let generators =
        pairs(g.d).into_iter().map(|(mu, nu)| g.gamma(mu).commutator(g.gamma(nu)).scale(&factor)).collect();
    Ok(SpinRep { d: g.d, kind: SpinKind::Spinor, generators, dim: g.dim })
}

/// Vector generators `(S_μν)_ab = −i(δ_μa δ_νb − δ_νa δ_μb)`.
pub fn build_spin_one(d: i64) -> Result<SpinRep> {
    if d < 2 {
        return Err(Error::InvalidDimension(d, "spin-1 generators need d >= 2"));
    }
    let d = d as usize;
    let generators = pairs(d)
        .into_iter()
        .map(|(mu, nu)| {
            let mut s = CMatrix::zeros(d);
            s.set(mu - 1, nu - 1, -gq_i());
            s.set(nu - 1, mu - 1, gq_i());
            s
        })
        .collect();
    Ok(SpinRep { d, kind: SpinKind::Vector, generators, dim: d })
}

pub fn check_clifford(g: &GammaSet) -> CheckReport {
    let mut report = CheckReport::new();
    report.checked("anticommutator");
    report.checked("hermitian");
    let id2 = CMatrix::identity(g.dim).scale(&gq_int(2));
    for mu in 1..=g.d {
        let gm = g.gamma(mu);
        if !gm.is_hermitian() {
            report.violate(Violation {
                identity: "hermitian".into(),
                indices: vec![mu],
                residual: Residual::Norm(gm.sub(&gm.adjoint()).residual_norm()),
                witness: None,
            });
        }
        for nu in mu..=g.d {
            let ac = gm.anticommutator(g.gamma(nu));
            let residual = if mu == nu { ac.sub(&id2) } else { ac };
            if !residual.is_zero() {
                report.violate(Violation {
                    identity: "anticommutator".into(),
                    indices: vec![mu, nu],
                    residual: Residual::Norm(residual.residual_norm()),
                    witness: None,
                });
            }
        }
    }
    report
}

/// Right-hand side of the so(d) bracket for index quadruple (μ, ν, λ, σ).
fn so_bracket_rhs(s: &SpinRep, mu: usize, nu: usize, la: usize, si: usize) -> CMatrix {
    let mut rhs = CMatrix::zeros(s.dim);
    if mu == la {
        rhs = rhs.add(&s.s(nu, si));
    }
    if nu == si {
        rhs = rhs.add(&s.s(mu, la));
    }
    if mu == si {
        rhs = rhs.sub(&s.s(nu, la));
    }
    if nu == la {
        rhs = rhs.sub(&s.s(mu, si));
    }
    rhs.scale(&gq_i())
}

pub fn check_so_commutations(s: &SpinRep) -> CheckReport {
    let mut report = CheckReport::new();
    report.checked("hermitian");
    report.checked("so_bracket");
    for (k, (mu, nu)) in pairs(s.d).into_iter().enumerate() {
        let g = &s.generators[k];
        if !g.is_hermitian() {
            report.violate(Violation {
                identity: "hermitian".into(),
                indices: vec![mu, nu],
                residual: Residual::Norm(g.sub(&g.adjoint()).residual_norm()),
                witness: None,
            });
        }
    }
    let d = s.d;
    let quads: Vec<(usize, usize, usize, usize)> = (1..=d)
        .flat_map(|a| (1..=d).map(move |b| (a, b)))
        .filter(|(a, b)| a != b)
        .flat_map(|(a, b)| (1..=d).flat_map(move |c| (1..=d).map(move |e| (a, b, c, e))).filter(|(_, _, c, e)| c != e))
        .collect();
    let bad: Vec<Violation> = quads
        .par_iter()
        .filter_map(|&(mu, nu, la, si)| {
            let lhs = s.s(mu, nu).commutator(&s.s(la, si));
            let residual = lhs.sub(&so_bracket_rhs(s, mu, nu, la, si));
            (!residual.is_zero()).then(|| Violation {
                identity: "so_bracket".into(),
                indices: vec![mu, nu, la, si],
                residual: Residual::Norm(residual.residual_norm()),
                witness: None,
            })
        })
        .collect();
    for v in bad {
        report.violate(v);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{gq_real, Q};
    use num_traits::Zero;

    #[test]
    fn d2_is_a_pauli_pair() {
        let g = build_gamma(2).unwrap();
        assert_eq!(g.dim(), 2);
        let [s1, s2, _] = pauli();
        assert_eq!(g.gamma(1), &s1);
        assert_eq!(g.gamma(2), &s2);
        assert!(g.gamma(1).anticommutator(g.gamma(2)).is_zero());
    }

    #[test]
    fn dimensions_follow_floor_half() {
        for d in 1..=10i64 {
            assert_eq!(build_gamma(d).unwrap().dim(), 1 << (d / 2));
        }
        assert_eq!(build_gamma(5).unwrap().dim(), 4);
    }

    #[test]
    fn d8_anticommutators_brute_force() {
        let g = build_gamma(8).unwrap();
        let id = CMatrix::identity(g.dim());
        let mut offdiag = 0;
        for mu in 1..=8 {
            assert_eq!(g.gamma(mu).mul(g.gamma(mu)), id);
            for nu in mu + 1..=8 {
                assert!(g.gamma(mu).anticommutator(g.gamma(nu)).is_zero());
                offdiag += 1;
            }
        }
        assert_eq!(offdiag, 28);
    }

    #[test]
    fn invalid_dimensions_rejected() {
        assert!(matches!(build_gamma(0), Err(Error::InvalidDimension(..))));
        assert!(matches!(build_spin_half(1), Err(Error::InvalidDimension(..))));
        assert!(matches!(build_spin_one(1), Err(Error::InvalidDimension(..))));
    }

    #[test]
    fn chirality_even_dimensions() {
        for d in [2i64, 4, 6] {
            let g = build_gamma(d).unwrap();
            let c = build_chirality(&g).unwrap();
            assert!(c.is_hermitian());
            assert_eq!(c.mul(&c), CMatrix::identity(g.dim()));
            for mu in 1..=d as usize {
                assert!(c.anticommutator(g.gamma(mu)).is_zero());
            }
        }
        let g3 = build_gamma(3).unwrap();
        assert_eq!(build_chirality(&g3), Err(Error::UnsupportedParity(3)));
    }

    #[test]
    fn spin_half_d3_eigenvalues() {
        let s = build_spin_half(3).unwrap();
        let quarter = CMatrix::identity(2).scale(&gq_real(q(1, 4)));
        for (mu, nu) in [(1, 2), (2, 3), (3, 1)] {
            let m = s.s(mu, nu);
            // Hermitian, traceless, square ¼ ⇒ eigenvalues ±½.
            assert!(m.is_hermitian());
            assert!((m.get(0, 0) + m.get(1, 1)).is_zero());
            assert_eq!(m.mul(&m), quarter);
        }
    }

    #[test]
    fn spin_half_d2_single_generator() {
        let s = build_spin_half(2).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(s.generators().len(), 1);
    }

    #[test]
    fn spin_one_entries() {
        let s = build_spin_one(3).unwrap();
        let s12 = s.s(1, 2);
        assert_eq!(s12.get(0, 1), -gq_i());
        assert_eq!(s12.get(1, 0), gq_i());
        assert_eq!(s12.nnz(), 2);
    }

    #[test]
    fn spin_one_casimir_is_d_minus_one() {
        for d in 2..=8i64 {
            let s = build_spin_one(d).unwrap();
            let expected = CMatrix::identity(d as usize).scale(&gq_int(d - 1));
            assert_eq!(s.casimir(), expected);
        }
    }

    #[test]
    fn spinor_casimir_value() {
        for d in 2..=7i64 {
            let s = build_spin_half(d).unwrap();
            let c = Q::from_integer((d * (d - 1)).into()) / Q::from_integer(8.into());
            assert_eq!(s.casimir(), CMatrix::identity(s.dim()).scale(&gq_real(c)));
        }
    }

    #[test]
    fn so_relations_exhaustive() {
        assert!(check_so_commutations(&build_spin_half(4).unwrap()).passed);
        assert!(check_so_commutations(&build_spin_half(5).unwrap()).passed);
        assert!(check_so_commutations(&build_spin_one(4).unwrap()).passed);
        assert!(check_so_commutations(&build_spin_one(5).unwrap()).passed);
        assert!(check_so_commutations(&SpinRep::scalar(4)).passed);
    }

    #[test]
    fn clifford_check_cases() {
        assert!(check_clifford(&build_gamma(6).unwrap()).passed);
        assert!(check_clifford(&GammaSet::from_matrices(vec![CMatrix::identity(1)]).unwrap()).passed);

        let g = build_gamma(3).unwrap();
        let mut ms = g.matrices().to_vec();
        ms[0] = ms[0].scale(&gq_int(2));
        let report = check_clifford(&GammaSet::from_matrices(ms).unwrap());
        assert!(!report.passed);
        assert!(report.violations.iter().any(|v| v.indices == vec![1, 1]));
    }

    #[test]
    fn broken_algebra_is_reported() {
        let s = build_spin_half(3).unwrap();
        let mut gens = s.generators().to_vec();
        gens[pair_index(3, 1, 2)] = CMatrix::zeros(2);
        let broken = SpinRep::from_generators(3, SpinKind::Spinor, gens).unwrap();
        let report = check_so_commutations(&broken);
        assert!(!report.passed);
        assert!(!report.violations.is_empty());
    }

    #[test]
    fn pair_indexing_is_dense() {
        for d in 2..7 {
            for (k, (mu, nu)) in pairs(d).into_iter().enumerate() {
                assert_eq!(pair_index(d, mu, nu), k);
            }
        }
    }

    #[test]
    fn labels() {
        assert_eq!(build_gamma(4).unwrap().gelfand_tsetlin_label(), "D(1/2,1/2)");
        assert_eq!(build_gamma(5).unwrap().gelfand_tsetlin_label(), "D(1/2,-1/2)");
    }
}
