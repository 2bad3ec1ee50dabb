//! Matrix differential operators `Σ M·x^a·r^k·∂^δ` and their action on [`WaveFunction`]s.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::function::{add_into, Component, Key, Mono, WaveFunction};
use crate::error::{Error, Result};
use crate::exact::{gq_i, gq_int, gq_real, CMatrix, GQ, Q};

/// Coefficient of a term: a multiple of the identity or an explicit matrix.
#[derive(Clone, Debug, PartialEq)]
pub enum Coeff {
    Scalar(GQ),
    Matrix(CMatrix),
}

impl Coeff {
    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Scalar(c) => c.is_zero(),
            Coeff::Matrix(m) => m.is_zero(),
        }
    }

    fn to_matrix(&self, n: usize) -> CMatrix {
        match self {
            Coeff::Scalar(c) => CMatrix::scalar(n, c.clone()),
            Coeff::Matrix(m) => m.clone(),
        }
    }

    fn normalize(self) -> Coeff {
        match self {
            Coeff::Matrix(m) => match m.as_scalar() {
                Some(c) => Coeff::Scalar(c),
                None => Coeff::Matrix(m),
            },
            s => s,
        }
    }

    pub fn scale(&self, c: &GQ) -> Coeff {
        match self {
            Coeff::Scalar(s) => Coeff::Scalar(s * c),
            Coeff::Matrix(m) => Coeff::Matrix(m.scale(c)),
        }
    }

    pub fn mul(&self, other: &Coeff, n: usize) -> Coeff {
        match (self, other) {
            (Coeff::Scalar(a), Coeff::Scalar(b)) => Coeff::Scalar(a * b),
            (Coeff::Scalar(a), Coeff::Matrix(m)) | (Coeff::Matrix(m), Coeff::Scalar(a)) => Coeff::Matrix(m.scale(a)),
            (Coeff::Matrix(a), Coeff::Matrix(b)) => {
                debug_assert_eq!(a.dim(), n);
                Coeff::Matrix(a.mul(b)).normalize()
            }
        }
    }

    pub fn add(&self, other: &Coeff, n: usize) -> Coeff {
        match (self, other) {
            (Coeff::Scalar(a), Coeff::Scalar(b)) => Coeff::Scalar(a + b),
            _ => Coeff::Matrix(self.to_matrix(n).add(&other.to_matrix(n))).normalize(),
        }
    }
}

/// One term `coeff · x^key.mono · r^key.rpow · ∂^deriv`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffTerm {
    pub coeff: Coeff,
    pub key: Key,
    pub deriv: Mono,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiffOperator {
    d: usize,
    ncomp: usize,
    terms: Vec<DiffTerm>,
}

impl DiffOperator {
    pub fn zero(d: usize, ncomp: usize) -> Self {
        Self { d, ncomp, terms: Vec::new() }
    }

    pub fn identity(d: usize, ncomp: usize) -> Self {
        Self::scalar_function(d, ncomp, gq_int(1), Mono::ONE, 0)
    }

    /// Multiplication by `c·x^mono·r^rpow`.
    pub fn scalar_function(d: usize, ncomp: usize, c: GQ, mono: Mono, rpow: i32) -> Self {
        Self::from_terms(
            d,
            ncomp,
            vec![DiffTerm { coeff: Coeff::Scalar(c), key: Key::new(mono, rpow), deriv: Mono::ONE }],
        )
    }

    /// Multiplication by `M·x^mono·r^rpow`.
    pub fn matrix_function(m: CMatrix, d: usize, mono: Mono, rpow: i32) -> Self {
        let n = m.dim();
        Self::from_terms(
            d,
            n,
            vec![DiffTerm { coeff: Coeff::Matrix(m).normalize(), key: Key::new(mono, rpow), deriv: Mono::ONE }],
        )
    }

    /// Constant matrix.
    pub fn constant(m: CMatrix, d: usize) -> Self {
        Self::matrix_function(m, d, Mono::ONE, 0)
    }

    /// `∂/∂x_ν`.
    pub fn partial(d: usize, ncomp: usize, nu: usize) -> Self {
        Self::from_terms(
            d,
            ncomp,
            vec![DiffTerm { coeff: Coeff::Scalar(gq_int(1)), key: Key::new(Mono::ONE, 0), deriv: Mono::var(nu) }],
        )
    }

    /// `p_ν = −i ∂/∂x_ν`.
    pub fn momentum(d: usize, ncomp: usize, nu: usize) -> Self {
        Self::partial(d, ncomp, nu).scale(&-gq_i())
    }

    /// Multiplication by `x_ν`.
    pub fn position(d: usize, ncomp: usize, nu: usize) -> Self {
        Self::scalar_function(d, ncomp, gq_int(1), Mono::var(nu), 0)
    }

    /// `p² = −Σ ∂²_ν`.
    pub fn momentum_squared(d: usize, ncomp: usize) -> Self {
        let terms = (1..=d)
            .map(|nu| DiffTerm {
                coeff: Coeff::Scalar(gq_int(-1)),
                key: Key::new(Mono::ONE, 0),
                deriv: Mono::var(nu).raise(nu),
            })
            .collect();
        Self::from_terms(d, ncomp, terms)
    }

    /// Merges like terms and drops zeros; term order is canonical afterwards.
    pub fn from_terms(d: usize, ncomp: usize, terms: Vec<DiffTerm>) -> Self {
        let mut acc: BTreeMap<(Mono, Key), Coeff> = BTreeMap::new();
        for t in terms {
            let slot = (t.deriv, t.key);
            match acc.remove(&slot) {
                Some(prev) => {
                    acc.insert(slot, prev.add(&t.coeff, ncomp));
                }
                None => {
                    acc.insert(slot, t.coeff);
                }
            }
        }
        let terms = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((deriv, key), coeff)| DiffTerm { coeff, key, deriv })
            .collect();
        Self { d, ncomp, terms }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn ncomp(&self) -> usize {
        self.ncomp
    }

    pub fn terms(&self) -> &[DiffTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest total derivative order.
    pub fn order(&self) -> u32 {
        self.terms.iter().map(|t| t.deriv.degree()).max().unwrap_or(0)
    }

    /// Highest total x-degree of a coefficient (r-powers not counted).
    pub fn coefficient_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.key.mono.degree()).max().unwrap_or(0)
    }

    pub fn is_multiplication(&self) -> bool {
        self.terms.iter().all(|t| t.deriv == Mono::ONE)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.d != other.d || self.ncomp != other.ncomp {
            return Err(Error::Mismatch(format!(
                "operators differ in (d, ncomp): ({}, {}) vs ({}, {})",
                self.d, self.ncomp, other.d, other.ncomp
            )));
        }
        Ok(())
    }

    pub fn scale(&self, c: &GQ) -> Self {
        Self::from_terms(
            self.d,
            self.ncomp,
            self.terms.iter().map(|t| DiffTerm { coeff: t.coeff.scale(c), ..t.clone() }).collect(),
        )
    }

    pub fn scale_q(&self, c: &Q) -> Self {
        self.scale(&gq_real(c.clone()))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Self::from_terms(self.d, self.ncomp, terms))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&gq_int(-1)))
    }

    /// Sum of operators with coefficients.
    pub fn combination(d: usize, ncomp: usize, parts: &[(GQ, &DiffOperator)]) -> Result<Self> {
        let mut terms = Vec::new();
        for (c, op) in parts {
            if op.d != d || op.ncomp != ncomp {
                return Err(Error::Mismatch("operator shape in linear combination".into()));
            }
            terms.extend(op.scale(c).terms);
        }
        Ok(Self::from_terms(d, ncomp, terms))
    }

    /// Composition `self ∘ other` in normal order (Leibniz rule on the coefficients of `other`).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut coeff_cache: HashMap<(Key, Mono), Component> = HashMap::new();
        let mut terms = Vec::new();
        for a in &self.terms {
            let subs = a.deriv.sub_indices();
            for b in &other.terms {
                let ab = a.coeff.mul(&b.coeff, self.ncomp);
                for (kappa, binom) in &subs {
                    let rest = a.deriv.minus(kappa).expect("sub-index");
                    let deriv = rest.mul(&b.deriv);
                    let dcoef = coeff_cache
                        .entry((b.key, *kappa))
                        .or_insert_with(|| coefficient_derivative(self.d, b.key, kappa));
                    for (k, c) in dcoef.iter() {
                        let scale = c * gq_int(*binom as i64);
                        terms.push(DiffTerm {
                            coeff: ab.scale(&scale),
                            key: Key::new(a.key.mono.mul(&k.mono), a.key.rpow + k.rpow),
                            deriv,
                        });
                    }
                }
            }
        }
        Ok(Self::from_terms(self.d, self.ncomp, terms))
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.compose(other)?.sub(&other.compose(self)?)
    }

    pub fn anticommutator(&self, other: &Self) -> Result<Self> {
        self.compose(other)?.add(&other.compose(self)?)
    }

    /// `∂_ν` of the coefficient functions of a multiplication operator.
    pub fn coefficient_partial(&self, nu: usize) -> Result<Self> {
        if !self.is_multiplication() {
            return Err(Error::Mismatch("coefficient derivative needs a multiplication operator".into()));
        }
        let mut terms = Vec::new();
        for t in &self.terms {
            for (k, c) in coefficient_derivative(self.d, t.key, &Mono::var(nu)) {
                terms.push(DiffTerm { coeff: t.coeff.scale(&c), key: k, deriv: Mono::ONE });
            }
        }
        Ok(Self::from_terms(self.d, self.ncomp, terms))
    }

    /// Componentwise complex conjugate transpose of the coefficients (formal adjoint
    /// only for multiplication operators).
    pub fn coefficient_adjoint(&self) -> Self {
        Self::from_terms(
            self.d,
            self.ncomp,
            self.terms
                .iter()
                .map(|t| DiffTerm {
                    coeff: match &t.coeff {
                        Coeff::Scalar(c) => Coeff::Scalar(c.conj()),
                        Coeff::Matrix(m) => Coeff::Matrix(m.adjoint()),
                    },
                    ..t.clone()
                })
                .collect(),
        )
    }

    /// Replaces every term whose coefficient matrix is exactly `from` by `to`.
    pub fn replace_matrix(&self, from: &CMatrix, to: &CMatrix) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let coeff = match &t.coeff {
                    Coeff::Matrix(m) if m == from => Coeff::Matrix(to.clone()).normalize(),
                    c => c.clone(),
                };
                DiffTerm { coeff, ..t.clone() }
            })
            .collect();
        Self::from_terms(self.d, self.ncomp, terms)
    }
}

/// `∂^kappa (x^key.mono · r^key.rpow)` without exponential factor.
fn coefficient_derivative(d: usize, key: Key, kappa: &Mono) -> Component {
    let mut f = WaveFunction::monomial(d, 1, Q::zero(), 0, GQ::one(), key.mono, key.rpow);
    for nu in 1..=d {
        for _ in 0..kappa.exp(nu) {
            f = f.partial(nu);
        }
    }
    f.components()[0].clone()
}

/// All derivatives `∂^δ f` needed by `op`, computed once each.
fn derivative_table(op: &DiffOperator, f: &WaveFunction) -> HashMap<Mono, WaveFunction> {
    let mut table: HashMap<Mono, WaveFunction> = HashMap::new();
    table.insert(Mono::ONE, f.clone());
    let mut needed: Vec<Mono> = op.terms.iter().map(|t| t.deriv).collect();
    needed.sort_by_key(Mono::degree);
    needed.dedup();
    for delta in needed {
        ensure_derivative(&mut table, delta);
    }
    table
}

fn ensure_derivative(table: &mut HashMap<Mono, WaveFunction>, delta: Mono) {
    if table.contains_key(&delta) {
        return;
    }
    let nu = delta.first_var().expect("nonzero multi-index");
    let lower = delta.lower(nu).expect("positive exponent");
    ensure_derivative(table, lower);
    let g = table[&lower].partial(nu);
    table.insert(delta, g);
}

/// `op f`, exact; β is preserved.
pub fn apply(op: &DiffOperator, f: &WaveFunction) -> Result<WaveFunction> {
    if op.d != f.d() || op.ncomp != f.ncomp() {
        return Err(Error::Mismatch(format!(
            "operator (d={}, ncomp={}) applied to function (d={}, ncomp={})",
            op.d,
            op.ncomp,
            f.d(),
            f.ncomp()
        )));
    }
    let table = derivative_table(op, f);
    let mut out: Vec<Component> = vec![Component::new(); op.ncomp];
    for t in &op.terms {
        let g = &table[&t.deriv];
        let shift = |k: &Key| Key::new(k.mono.mul(&t.key.mono), k.rpow + t.key.rpow);
        match &t.coeff {
            Coeff::Scalar(c) => {
                for (o, comp) in out.iter_mut().zip(g.components()) {
                    for (k, v) in comp {
                        add_into(o, shift(k), v * c);
                    }
                }
            }
            Coeff::Matrix(m) => {
                for (a, b, c) in m.entries() {
                    for (k, v) in &g.components()[b] {
                        add_into(&mut out[a], shift(k), v * c);
                    }
                }
            }
        }
    }
    Ok(WaveFunction::from_components(f.d(), f.beta().clone(), out))
}
