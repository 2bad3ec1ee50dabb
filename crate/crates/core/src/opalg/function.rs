//! The closed function class `Σ c·x^a·r^k · exp(−βr)` (vector valued) and its exact evaluation.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{exact_sqrt, gq, qi, to_f64, GQ, Q};

/// Largest dimension the exact operator algebra supports.
pub const MAX_D: usize = 10;

/// Exponent multi-index over `x_1..x_d` (also used for derivative multi-indices).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Mono(pub [u8; MAX_D]);

impl Mono {
    pub const ONE: Mono = Mono([0; MAX_D]);

    /// `x_ν` (1-based).
    pub fn var(nu: usize) -> Self {
        let mut m = Self::ONE;
        m.0[nu - 1] = 1;
        m
    }

    pub fn from_exps(exps: &[u8]) -> Self {
        let mut m = Self::ONE;
        m.0[..exps.len()].copy_from_slice(exps);
        m
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| u32::from(e)).sum()
    }

    /// Exponent of `x_ν` (1-based).
    pub fn exp(&self, nu: usize) -> u8 {
        self.0[nu - 1]
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let mut m = *self;
        for (a, b) in m.0.iter_mut().zip(other.0.iter()) {
            *a += *b;
        }
        m
    }

    pub fn raise(&self, nu: usize) -> Mono {
        let mut m = *self;
        m.0[nu - 1] += 1;
        m
    }

    pub fn lower(&self, nu: usize) -> Option<Mono> {
        let mut m = *self;
        let e = &mut m.0[nu - 1];
        if *e == 0 {
            return None;
        }
        *e -= 1;
        Some(m)
    }

    /// First variable with a positive exponent (1-based).
    pub fn first_var(&self) -> Option<usize> {
        self.0.iter().position(|&e| e > 0).map(|i| i + 1)
    }

    /// All multi-indices `κ ≤ self` componentwise, with the product of binomials `C(self, κ)`.
    pub fn sub_indices(&self) -> Vec<(Mono, u64)> {
        let mut out = vec![(Mono::ONE, 1u64)];
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
            for (m, c) in &out {
                for k in 0..=e {
                    let mut mm = *m;
                    mm.0[i] = k;
                    next.push((mm, c * binomial(u64::from(e), u64::from(k))));
                }
            }
            out = next;
        }
        out
    }

    pub fn minus(&self, other: &Mono) -> Option<Mono> {
        let mut m = *self;
        for (a, b) in m.0.iter_mut().zip(other.0.iter()) {
            *a = a.checked_sub(*b)?;
        }
        Some(m)
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, e) })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// Monomial `x^mono · r^rpow`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Key {
    pub mono: Mono,
    pub rpow: i32,
}

impl Key {
    pub fn new(mono: Mono, rpow: i32) -> Self {
        Self { mono, rpow }
    }
}

pub type Component = HashMap<Key, GQ>;

pub(crate) fn add_into(comp: &mut Component, key: Key, c: GQ) {
    if c.is_zero() {
        return;
    }
    use std::collections::hash_map::Entry;
    match comp.entry(key) {
        Entry::Occupied(mut e) => {
            let v = e.get_mut();
            *v = &*v + c;
            if v.is_zero() {
                e.remove();
            }
        }
        Entry::Vacant(e) => {
            e.insert(c);
        }
    }
}

/// Vector-valued function `Σ_terms c·x^a·r^k · exp(−βr)` with a shared decay rate β.
#[derive(Clone, PartialEq)]
pub struct WaveFunction {
    d: usize,
    beta: Q,
    comps: Vec<Component>,
}

impl fmt::Debug for WaveFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WaveFunction(d={}, beta={}, terms={:?})", self.d, self.beta, self.term_counts())
    }
}

impl WaveFunction {
    pub fn zero(d: usize, ncomp: usize, beta: Q) -> Self {
        Self { d, beta, comps: vec![Component::new(); ncomp] }
    }

    /// Single term `c·x^mono·r^rpow·exp(−βr)` in component `comp`.
    pub fn monomial(d: usize, ncomp: usize, beta: Q, comp: usize, c: GQ, mono: Mono, rpow: i32) -> Self {
        let mut f = Self::zero(d, ncomp, beta);
        add_into(&mut f.comps[comp], Key::new(mono, rpow), c);
        f
    }

    pub fn from_components(d: usize, beta: Q, comps: Vec<Component>) -> Self {
        Self { d, beta, comps }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn ncomp(&self) -> usize {
        self.comps.len()
    }

    pub fn beta(&self) -> &Q {
        &self.beta
    }

    pub fn components(&self) -> &[Component] {
        &self.comps
    }

    pub fn term_counts(&self) -> Vec<usize> {
        self.comps.iter().map(HashMap::len).collect()
    }

    pub fn is_structurally_zero(&self) -> bool {
        self.comps.iter().all(HashMap::is_empty)
    }

    /// Highest total x-degree and the range of r-powers present.
    pub fn degree_profile(&self) -> (u32, i32, i32) {
        let mut deg = 0;
        let mut rmin = 0;
        let mut rmax = 0;
        for k in self.comps.iter().flat_map(HashMap::keys) {
            deg = deg.max(k.mono.degree());
            rmin = rmin.min(k.rpow);
            rmax = rmax.max(k.rpow);
        }
        (deg, rmin, rmax)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.d != other.d || self.ncomp() != other.ncomp() || self.beta != other.beta {
            return Err(Error::Mismatch(format!(
                "functions differ in (d, ncomp, beta): ({}, {}, {}) vs ({}, {}, {})",
                self.d,
                self.ncomp(),
                self.beta,
                other.d,
                other.ncomp(),
                other.beta
            )));
        }
        Ok(())
    }

    pub fn add_scaled(&mut self, other: &Self, c: &GQ) -> Result<()> {
        self.check_compatible(other)?;
        if c.is_zero() {
            return Ok(());
        }
        for (mine, theirs) in self.comps.iter_mut().zip(other.comps.iter()) {
            for (k, v) in theirs {
                add_into(mine, *k, v * c);
            }
        }
        Ok(())
    }

    pub fn linear_combination(parts: &[(GQ, &WaveFunction)]) -> Result<WaveFunction> {
        let first = parts.first().ok_or_else(|| Error::Mismatch("empty linear combination".into()))?.1;
        let mut out = Self::zero(first.d, first.ncomp(), first.beta.clone());
        for (c, f) in parts {
            out.add_scaled(f, c)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.add_scaled(other, &gq(-Q::one(), Q::zero()))?;
        Ok(out)
    }

    pub fn scale(&self, c: &GQ) -> Self {
        let mut out = Self::zero(self.d, self.ncomp(), self.beta.clone());
        for (o, s) in out.comps.iter_mut().zip(&self.comps) {
            for (k, v) in s {
                add_into(o, *k, v * c);
            }
        }
        out
    }

    /// `∂/∂x_ν` (1-based), using `∂r/∂x_ν = x_ν/r`.
    pub fn partial(&self, nu: usize) -> Self {
        let mut out = Self::zero(self.d, self.ncomp(), self.beta.clone());
        let mbeta = gq(-self.beta.clone(), Q::zero());
        for (o, s) in out.comps.iter_mut().zip(&self.comps) {
            for (k, c) in s {
                let e = k.mono.exp(nu);
                if let Some(lower) = k.mono.lower(nu) {
                    add_into(o, Key::new(lower, k.rpow), c * gq(qi(i64::from(e)), Q::zero()));
                }
                let raised = k.mono.raise(nu);
                if k.rpow != 0 {
                    add_into(o, Key::new(raised, k.rpow - 2), c * gq(qi(i64::from(k.rpow)), Q::zero()));
                }
                if !self.beta.is_zero() {
                    add_into(o, Key::new(raised, k.rpow - 1), c * &mbeta);
                }
            }
        }
        out
    }

    /// Value at a floating-point point, including the exponential factor.
    pub fn evaluate_f64(&self, point: &[f64]) -> Vec<(f64, f64)> {
        let r = point.iter().map(|x| x * x).sum::<f64>().sqrt();
        let damp = (-to_f64(&self.beta) * r).exp();
        self.comps
            .iter()
            .map(|comp| {
                let mut re = 0.0;
                let mut im = 0.0;
                for (k, c) in comp {
                    let mut v = r.powi(k.rpow);
                    for (nu, x) in point.iter().enumerate() {
                        v *= x.powi(i32::from(k.mono.0[nu]));
                    }
                    re += to_f64(&c.re) * v;
                    im += to_f64(&c.im) * v;
                }
                (re * damp, im * damp)
            })
            .collect()
    }
}

/// Exact value `even + odd·r` at a rational point (the common `exp(−βr)` factor dropped).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityPair {
    pub even: GQ,
    pub odd: GQ,
}

impl ParityPair {
    pub fn zero() -> Self {
        Self { even: GQ::zero(), odd: GQ::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.even.is_zero() && self.odd.is_zero()
    }

    pub fn add_scaled(&mut self, other: &ParityPair, c: &GQ) {
        self.even = &self.even + &other.even * c;
        self.odd = &self.odd + &other.odd * c;
    }
}

/// A rational evaluation point with cached powers.
#[derive(Clone, Debug)]
pub struct Point {
    coords: Vec<Q>,
    r2: Q,
    /// `r` when `r²` is a perfect rational square.
    r_exact: Option<Q>,
}

impl Point {
    pub fn new(coords: Vec<Q>) -> Result<Self> {
        let r2 = coords.iter().fold(Q::zero(), |acc, x| acc + x * x);
        if r2.is_zero() {
            return Err(Error::SingularPoint);
        }
        let r_exact = exact_sqrt(&r2);
        Ok(Self { coords, r2, r_exact })
    }

    pub fn from_ints(coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| qi(c)).collect())
    }

    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    pub fn r_squared(&self) -> &Q {
        &self.r2
    }

    pub fn describe(&self) -> Vec<String> {
        self.coords.iter().map(|c| c.to_string()).collect()
    }
}

fn pow_q(base: &Q, e: i32) -> Q {
    if e >= 0 {
        num_traits::pow::pow(base.clone(), e as usize)
    } else {
        num_traits::pow::pow(base.recip(), (-e) as usize)
    }
}

/// Exact parity-split value of every component at `point`.
pub fn evaluate(f: &WaveFunction, point: &Point) -> Result<Vec<ParityPair>> {
    if point.coords.len() != f.d {
        return Err(Error::Mismatch(format!(
            "point has {} coordinates, function lives in d = {}",
            point.coords.len(),
            f.d
        )));
    }
    let mut xpow: Vec<Vec<Q>> = point.coords.iter().map(|x| vec![Q::one(), x.clone()]).collect();
    let mut rpow_cache: HashMap<i32, (Q, bool)> = HashMap::new();
    let mut out = Vec::with_capacity(f.ncomp());
    for comp in &f.comps {
        let mut even = GQ::zero();
        let mut odd = GQ::zero();
        for (k, c) in comp {
            let mut v = Q::one();
            for (nu, &e) in k.mono.0[..f.d].iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut xpow[nu];
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap() * &point.coords[nu];
                    cache.push(next);
                }
                v *= &cache[e as usize];
            }
            let (rv, is_odd) = rpow_cache
                .entry(k.rpow)
                .or_insert_with(|| match &point.r_exact {
                    Some(r) => (pow_q(r, k.rpow), false),
                    None => {
                        let half = k.rpow.div_euclid(2);
                        (pow_q(&point.r2, half), k.rpow.rem_euclid(2) == 1)
                    }
                })
                .clone();
            v *= rv;
            let term = GQ::new(&c.re * &v, &c.im * &v);
            if is_odd {
                odd = odd + term;
            } else {
                even = even + term;
            }
        }
        out.push(ParityPair { even, odd });
    }
    Ok(out)
}

/// Numerator range used for sample points so that `range ≥ 2·degree` and the
/// per-point false-zero probability stays below ½.
pub fn sample_range(degree: u32) -> i64 {
    (2 * i64::from(degree)).max(9)
}

/// Deterministic random rational points `p/q`, `|p| ≤ range`, `q ∈ {1,2,3}`, never the origin.
pub fn random_points(d: usize, npoints: usize, range: i64, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0f_9017);
    let mut pts = Vec::with_capacity(npoints);
    while pts.len() < npoints {
        let coords: Vec<Q> = (0..d)
            .map(|_| {
                let p: i64 = rng.gen_range(-range..=range);
                let q: i64 = rng.gen_range(1..=3);
                Q::new(BigInt::from(p), BigInt::from(q))
            })
            .collect();
        if let Ok(p) = Point::new(coords) {
            pts.push(p);
        }
    }
    pts
}

/// Dense random polynomial of total degree ≤ `max_degree` in every component,
/// times `r^k` with k ∈ {0, 1} drawn per component, times `exp(−βr)`.
pub fn random_test_function(d: usize, ncomp: usize, max_degree: u32, beta: Q, seed: u64) -> WaveFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let monos = monomials_up_to(d, max_degree);
    let mut f = WaveFunction::zero(d, ncomp, beta);
    for comp in f.comps.iter_mut() {
        let rpow = rng.gen_range(0..=1);
        for m in &monos {
            let re: i64 = rng.gen_range(-4..=4);
            let im: i64 = if rng.gen_bool(0.5) { rng.gen_range(-4..=4) } else { 0 };
            add_into(comp, Key::new(*m, rpow), gq(qi(re), qi(im)));
        }
        if comp.is_empty() {
            add_into(comp, Key::new(Mono::ONE, rpow), gq(qi(1), Q::zero()));
        }
    }
    f
}

/// All monomials in `d` variables of total degree ≤ `max_degree`.
pub fn monomials_up_to(d: usize, max_degree: u32) -> Vec<Mono> {
    let mut out = vec![Mono::ONE];
    let mut frontier = vec![Mono::ONE];
    for _ in 0..max_degree {
        let mut next = Vec::new();
        for m in &frontier {
            // raise only variables at or after the last used one to avoid duplicates
            let start = m.0[..d].iter().rposition(|&e| e > 0).unwrap_or(0);
            for nu in start..d {
                next.push(m.raise(nu + 1));
            }
        }
        out.extend(next.iter().copied());
        frontier = next;
    }
    out
}

/// Outcome of a randomized zero test; `witness` is set when some value was nonzero.
#[derive(Clone, Debug, Serialize)]
pub struct ZeroTest {
    pub zero: bool,
    pub witness: Option<Vec<String>>,
    pub component: Option<usize>,
}

pub fn zero_test_at(f: &WaveFunction, points: &[Point]) -> Result<ZeroTest> {
    for p in points {
        for (i, v) in evaluate(f, p)?.iter().enumerate() {
            if !v.is_zero() {
                return Ok(ZeroTest { zero: false, witness: Some(p.describe()), component: Some(i) });
            }
        }
    }
    Ok(ZeroTest { zero: true, witness: None, component: None })
}

/// True iff `f` vanishes at `npoints` random rational points (sample space scaled to the degree).
pub fn is_zero_function(f: &WaveFunction, npoints: usize, seed: u64) -> bool {
    if f.is_structurally_zero() {
        return true;
    }
    let (deg, rmin, rmax) = f.degree_profile();
    let bound = deg + (rmax - rmin).unsigned_abs();
    let pts = random_points(f.d, npoints.max(1), sample_range(bound), seed);
    zero_test_at(f, &pts).map(|t| t.zero).unwrap_or(false)
}

/// Absolute value of the largest coefficient, for diagnostics.
pub fn max_coefficient(f: &WaveFunction) -> f64 {
    f.comps.iter().flat_map(HashMap::values).map(|c| to_f64(&c.re.abs()).max(to_f64(&c.im.abs()))).fold(0.0, f64::max)
}
