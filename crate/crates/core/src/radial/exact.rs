//! Exact radial operators `Σ M·r^p·∂^k` and radial functions `Σ c·r^{s+k}·B(r)` with
//! `B ∈ {exp(−βr)}` or `B ∈ {K_0(κr), K_1(κr)}`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{qi, to_f64, Q};
use crate::specfun::bessel_k;

/// Small dense rational matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct QMat {
    n: usize,
    a: Vec<Q>,
}

impl fmt::Debug for QMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

impl QMat {
    pub fn zeros(n: usize) -> Self {
        Self { n, a: vec![Q::zero(); n * n] }
    }

    pub fn scalar(n: usize, c: Q) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, Q::one())
    }

    pub fn from_rows(rows: &[&[Q]]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n);
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    /// Pauli σ1 and σ3.
    pub fn sigma1() -> Self {
        Self::from_rows(&[&[Q::zero(), Q::one()], &[Q::one(), Q::zero()]])
    }

    pub fn sigma3() -> Self {
        Self::from_rows(&[&[Q::one(), Q::zero()], &[Q::zero(), -Q::one()]])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.a[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        self.a[i * self.n + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(Zero::is_zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { n: self.n, a: self.a.iter().zip(&o.a).map(|(x, y)| x + y).collect() }
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self { n: self.n, a: self.a.iter().map(|x| x * c).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.n;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let x = self.get(i, k);
                if x.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let y = o.get(k, j);
                    if !y.is_zero() {
                        let v = m.get(i, j) + x * y;
                        m.set(i, j, v);
                    }
                }
            }
        }
        m
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| (0..self.n).map(|j| to_f64(self.get(i, j))).collect()).collect()
    }
}

/// `Σ M_{k,p} r^p (d/dr)^k` acting on `n`-component radial functions.
#[derive(Clone, PartialEq)]
pub struct RadialOperator {
    n: usize,
    terms: BTreeMap<(u32, i32), QMat>,
}

impl fmt::Debug for RadialOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RadialOperator(")?;
        for ((k, p), m) in &self.terms {
            write!(f, " {m:?} r^{p} D^{k};")?;
        }
        write!(f, " )")
    }
}

impl RadialOperator {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    /// `M r^p ∂^k`.
    pub fn term(m: QMat, p: i32, k: u32) -> Self {
        let n = m.dim();
        let mut op = Self::zero(n);
        op.push(k, p, m);
        op
    }

    pub fn identity(n: usize) -> Self {
        Self::term(QMat::identity(n), 0, 0)
    }

    /// `c r^p` times the identity matrix.
    pub fn power(n: usize, c: Q, p: i32) -> Self {
        Self::term(QMat::scalar(n, c), p, 0)
    }

    pub fn derivative(n: usize) -> Self {
        Self::term(QMat::identity(n), 0, 1)
    }

    fn push(&mut self, k: u32, p: i32, m: QMat) {
        if m.is_zero() {
            return;
        }
        let slot = (k, p);
        let merged = match self.terms.remove(&slot) {
            Some(prev) => prev.add(&m),
            None => m,
        };
        if !merged.is_zero() {
            self.terms.insert(slot, merged);
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn order(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    /// `(k, p, M)` for every term `M r^p ∂^k`.
    pub fn terms(&self) -> impl Iterator<Item = (u32, i32, &QMat)> + '_ {
        self.terms.iter().map(|(&(k, p), m)| (k, p, m))
    }

    /// Coefficient matrix of `r^p ∂^k`.
    pub fn coefficient(&self, k: u32, p: i32) -> QMat {
        self.terms.get(&(k, p)).cloned().unwrap_or_else(|| QMat::zeros(self.n))
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for ((k, p), m) in &o.terms {
            out.push(*k, *p, m.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero(self.n);
        for ((k, p), m) in &self.terms {
            out.push(*k, *p, m.scale(c));
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Q::one()))
    }

    /// `self ∘ o`, using `∂^k (r^q g) = Σ_j C(k,j) q(q−1)…(q−j+1) r^{q−j} ∂^{k−j} g`.
    pub fn compose(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for ((k, p), a) in &self.terms {
            for ((l, q), b) in &o.terms {
                let ab = a.mul(b);
                let mut falling = Q::one();
                let mut binom = Q::one();
                for j in 0..=*k {
                    if j > 0 {
                        falling *= qi(i64::from(*q) - i64::from(j) + 1);
                        binom = binom * qi(i64::from(*k - j + 1)) / qi(i64::from(j));
                    }
                    if falling.is_zero() {
                        break;
                    }
                    out.push(k - j + l, p + q - j as i32, ab.scale(&(&binom * &falling)));
                }
            }
        }
        out
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.compose(o).sub(&o.compose(self))
    }

    /// Applies the operator to an exact radial function.
    pub fn apply(&self, f: &RadialFunction) -> Result<RadialFunction> {
        if f.nchan != self.n {
            return Err(Error::Mismatch(format!(
                "operator on {} channels applied to a {}-channel function",
                self.n, f.nchan
            )));
        }
        let maxk = self.order();
        let mut derivs = vec![f.clone()];
        for _ in 0..maxk {
            let next = derivs.last().expect("nonempty").derivative();
            derivs.push(next);
        }
        let mut out = RadialFunction::zero(f.nchan, f.offset.clone(), f.basis.clone());
        for ((k, p), m) in &self.terms {
            let g = &derivs[*k as usize];
            for (&(ch, pw, b), c) in &g.terms {
                for i in 0..self.n {
                    let mij = m.get(i, ch);
                    if !mij.is_zero() {
                        out.add_term(i, pw + p, b, c * mij);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Basis factor shared by all terms of a [`RadialFunction`].
#[derive(Clone, Debug, PartialEq)]
pub enum RadialBasis {
    /// `exp(−βr)` (basis index 0 only).
    Exp { beta: Q },
    /// `K_0(κr)` (index 0) and `K_1(κr)` (index 1).
    Bessel { kappa: Q },
}

/// `Σ c · r^{offset + k} · B_b(r)` in each channel; exact and canonical (no zero terms).
#[derive(Clone, PartialEq)]
pub struct RadialFunction {
    nchan: usize,
    offset: Q,
    basis: RadialBasis,
    terms: BTreeMap<(usize, i32, u8), Q>,
}

impl fmt::Debug for RadialFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RadialFunction(offset {}, {:?},", self.offset, self.basis)?;
        for ((ch, k, b), c) in &self.terms {
            write!(f, " [{ch}] {c}·r^{k}·B{b};")?;
        }
        write!(f, ")")
    }
}

impl RadialFunction {
    pub fn zero(nchan: usize, offset: Q, basis: RadialBasis) -> Self {
        Self { nchan, offset, basis, terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, chan: usize, k: i32, b: u8, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = (chan, k, b);
        let v = match self.terms.remove(&slot) {
            Some(prev) => prev + c,
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(slot, v);
        }
    }

    pub fn nchan(&self) -> usize {
        self.nchan
    }

    pub fn offset(&self) -> &Q {
        &self.offset
    }

    pub fn basis(&self) -> &RadialBasis {
        &self.basis
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, i32, u8), &Q)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero(self.nchan, self.offset.clone(), self.basis.clone());
        for (&(ch, k, b), v) in &self.terms {
            out.add_term(ch, k, b, v * c);
        }
        out
    }

    /// Same function written with offset `offset`; the offsets must differ by an integer.
    pub fn rebase(&self, offset: &Q) -> Option<Self> {
        let shift = &self.offset - offset;
        if !shift.is_integer() {
            return None;
        }
        let s: i32 = shift.to_integer().try_into().ok()?;
        let mut out = Self::zero(self.nchan, offset.clone(), self.basis.clone());
        for (&(ch, k, b), v) in &self.terms {
            out.add_term(ch, k + s, b, v.clone());
        }
        Some(out)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let shape = || Error::Mismatch("radial functions of different shape".into());
        if self.nchan != o.nchan || self.basis != o.basis {
            return Err(shape());
        }
        if self.offset != o.offset {
            let low = if self.offset < o.offset { &self.offset } else { &o.offset };
            let a = self.rebase(low).ok_or_else(shape)?;
            let b = o.rebase(low).ok_or_else(shape)?;
            return a.add(&b);
        }
        let mut out = self.clone();
        for (&(ch, k, b), v) in &o.terms {
            out.add_term(ch, k, b, v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(&-Q::one()))
    }

    /// `d/dr`.
    pub fn derivative(&self) -> Self {
        let mut out = Self::zero(self.nchan, self.offset.clone(), self.basis.clone());
        for (&(ch, k, b), c) in &self.terms {
            let pw = &self.offset + qi(i64::from(k));
            out.add_term(ch, k - 1, b, c * &pw);
            match &self.basis {
                RadialBasis::Exp { beta } => out.add_term(ch, k, 0, -(c * beta)),
                RadialBasis::Bessel { kappa } => {
                    // K0' = −κK1, K1'(κr) = −κK0 − K1/r
                    if b == 0 {
                        out.add_term(ch, k, 1, -(c * kappa));
                    } else {
                        out.add_term(ch, k, 0, -(c * kappa));
                        out.add_term(ch, k - 1, 1, -c.clone());
                    }
                }
            }
        }
        out
    }

    /// Values of all channels at `r > 0`.
    pub fn evaluate(&self, r: f64) -> Vec<f64> {
        let s = to_f64(&self.offset);
        let basis: [f64; 2] = match &self.basis {
            RadialBasis::Exp { beta } => [(-to_f64(beta) * r).exp(), 0.0],
            RadialBasis::Bessel { kappa } => {
                let x = to_f64(kappa) * r;
                [bessel_k(0, x).unwrap_or(f64::NAN), bessel_k(1, x).unwrap_or(f64::NAN)]
            }
        };
        let lr = r.ln();
        let mut out = vec![0.0; self.nchan];
        for (&(ch, k, b), c) in &self.terms {
            out[ch] += to_f64(c) * ((s + f64::from(k)) * lr).exp() * basis[b as usize];
        }
        out
    }

    /// Coefficient of the highest power in channel `chan` (for proportionality checks).
    pub fn leading(&self, chan: usize) -> Option<(i32, u8, Q)> {
        self.terms
            .iter()
            .filter(|((ch, _, _), _)| *ch == chan)
            .max_by_key(|((_, k, b), _)| (*k, *b))
            .map(|((_, k, b), c)| (*k, *b, c.clone()))
    }

    /// True when `self = λ·other` for some nonzero rational λ.
    pub fn proportional_to(&self, other: &Self) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        let Some((k, (ch, kk, b))) = other.terms.iter().next().map(|(s, c)| (c.clone(), *s)) else {
            return false;
        };
        let Some(me) = self.rebase(&other.offset) else {
            return false;
        };
        let Some(mine) = me.terms.get(&(ch, kk, b)) else {
            return false;
        };
        let lambda = mine / k;
        other.scale(&lambda).sub(self).map(|d| d.is_zero()).unwrap_or(false)
    }

    /// Lowest power appearing in any channel, `offset + k_min`, as a float.
    pub fn small_r_power(&self) -> f64 {
        let kmin = self.terms.keys().map(|t| t.1).min().unwrap_or(0);
        to_f64(&self.offset) + f64::from(kmin)
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms.values().map(|c| to_f64(&c.abs())).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    #[test]
    fn compose_leibniz() {
        // [∂, r] = 1
        let d = RadialOperator::derivative(1);
        let r = RadialOperator::power(1, Q::one(), 1);
        assert_eq!(d.commutator(&r), RadialOperator::identity(1));
        // ∂ ∘ r^{-2} = r^{-2}∂ − 2 r^{-3}
        let c = d.compose(&RadialOperator::power(1, Q::one(), -2));
        assert_eq!(c.coefficient(1, -2), QMat::identity(1));
        assert_eq!(c.coefficient(0, -3), QMat::scalar(1, qi(-2)));
    }

    #[test]
    fn exp_derivative_and_evaluation() {
        // f = r^{3/2} e^{−2r}; f' = (3/2) r^{1/2} e^{−2r} − 2 r^{3/2} e^{−2r}
        let mut f = RadialFunction::zero(1, q(3, 2), RadialBasis::Exp { beta: qi(2) });
        f.add_term(0, 0, 0, Q::one());
        let df = f.derivative();
        let r = 0.7f64;
        let want = 1.5 * r.sqrt() * (-2.0 * r).exp() - 2.0 * r.powf(1.5) * (-2.0 * r).exp();
        assert!((df.evaluate(r)[0] - want).abs() < 1e-14);
    }

    #[test]
    fn bessel_derivatives_match_finite_differences() {
        let mut f = RadialFunction::zero(2, q(1, 2), RadialBasis::Bessel { kappa: q(2, 3) });
        f.add_term(0, 1, 0, Q::one());
        f.add_term(1, 1, 1, qi(-1));
        let df = f.derivative();
        for &r in &[0.3, 1.0, 4.0] {
            let h = 1e-5;
            let fd: Vec<f64> = (0..2).map(|c| (f.evaluate(r + h)[c] - f.evaluate(r - h)[c]) / (2.0 * h)).collect();
            let an = df.evaluate(r);
            for c in 0..2 {
                assert!((fd[c] - an[c]).abs() < 1e-8 * an[c].abs().max(1.0));
            }
        }
    }

    #[test]
    fn proportionality() {
        let mut f = RadialFunction::zero(1, Q::zero(), RadialBasis::Exp { beta: qi(1) });
        f.add_term(0, 1, 0, qi(2));
        f.add_term(0, 2, 0, qi(-3));
        assert!(f.scale(&q(-5, 7)).proportional_to(&f));
        let mut g = f.clone();
        g.add_term(0, 0, 0, qi(1));
        assert!(!g.proportional_to(&f));
    }
}
