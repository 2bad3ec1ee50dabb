//! Exact scalars and sparse matrices over the Gaussian rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Exact rational number.
pub type Q = BigRational;
/// Exact Gaussian rational `re + i·im`.
pub type GQ = Complex<BigRational>;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn gq(re: Q, im: Q) -> GQ {
    Complex::new(re, im)
}

pub fn gq_real(re: Q) -> GQ {
    Complex::new(re, Q::zero())
}

pub fn gq_int(n: i64) -> GQ {
    gq_real(qi(n))
}

/// The imaginary unit.
pub fn gq_i() -> GQ {
    Complex::new(Q::zero(), Q::one())
}

/// Parses `"p/q"`, `"p"` or a decimal-free signed integer into an exact rational.
pub fn parse_rational(s: &str) -> Result<Q, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(num, den))
}

/// Integer square root of a non-negative big integer, if it is a perfect square.
pub fn exact_sqrt_int(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let root = n.sqrt();
    if &(&root * &root) == n {
        Some(root)
    } else {
        None
    }
}

/// Square root of a non-negative rational, if it is rational.
pub fn exact_sqrt(x: &Q) -> Option<Q> {
    let n = exact_sqrt_int(x.numer())?;
    let d = exact_sqrt_int(x.denom())?;
    Some(Q::new(n, d))
}

pub fn to_f64(x: &Q) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

/// Sparse square matrix with Gaussian-rational entries. Zero entries are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct CMatrix {
    n: usize,
    rows: Vec<BTreeMap<usize, GQ>>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, rows: vec![BTreeMap::new(); n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, gq_int(1))
    }

    pub fn scalar(n: usize, c: GQ) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    /// Matrix unit `E_ab`.
    pub fn unit(n: usize, a: usize, b: usize) -> Self {
        let mut m = Self::zeros(n);
        m.set(a, b, gq_int(1));
        m
    }

    pub fn from_dense(rows: &[Vec<GQ>]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "matrix must be square");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> GQ {
        self.rows[i].get(&j).cloned().unwrap_or_else(GQ::zero)
    }

    pub fn set(&mut self, i: usize, j: usize, v: GQ) {
        if v.is_zero() {
            self.rows[i].remove(&j);
        } else {
            self.rows[i].insert(j, v);
        }
    }

    fn add_at(&mut self, i: usize, j: usize, v: GQ) {
        if v.is_zero() {
            return;
        }
        let row = &mut self.rows[i];
        match row.get_mut(&j) {
            Some(e) => {
                *e = &*e + v;
                if e.is_zero() {
                    row.remove(&j);
                }
            }
            None => {
                row.insert(j, v);
            }
        }
    }

    /// Non-zero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &GQ)> + '_ {
        self.rows.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BTreeMap::is_empty)
    }

    /// True when the matrix is `c·I` for some `c`; returns `c`.
    pub fn as_scalar(&self) -> Option<GQ> {
        let c = self.get(0, 0);
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row {
                if *j != i || *v != c {
                    return None;
                }
            }
            if !c.is_zero() && !row.contains_key(&i) {
                return None;
            }
        }
        Some(c)
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.n);
        for (i, j, v) in self.entries() {
            out.set(j, i, v.conj());
        }
        out
    }

    pub fn is_hermitian(&self) -> bool {
        self.adjoint() == *self
    }

    pub fn scale(&self, c: &GQ) -> Self {
        let mut out = Self::zeros(self.n);
        if c.is_zero() {
            return out;
        }
        for (i, j, v) in self.entries() {
            out.set(i, j, v * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (i, j, v) in other.entries() {
            out.add_at(i, j, v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (i, j, v) in other.entries() {
            out.add_at(i, j, -v.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut out = Self::zeros(self.n);
        for (i, row) in self.rows.iter().enumerate() {
            for (k, a) in row {
                for (j, b) in &other.rows[*k] {
                    out.add_at(i, *j, a * b);
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        self.mul(other).add(&other.mul(self))
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let n = self.n * other.n;
        let mut out = Self::zeros(n);
        for (i, j, a) in self.entries() {
            for (k, l, b) in other.entries() {
                out.set(i * other.n + k, j * other.n + l, a * b);
            }
        }
        out
    }

    /// Block-diagonal direct sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.n + other.n);
        for (i, j, v) in self.entries() {
            out.set(i, j, v.clone());
        }
        for (i, j, v) in other.entries() {
            out.set(self.n + i, self.n + j, v.clone());
        }
        out
    }

    /// Max over entries of |re| + |im| as a float; only used for reporting.
    pub fn residual_norm(&self) -> f64 {
        self.entries().map(|(_, _, v)| to_f64(&v.re.abs()) + to_f64(&v.im.abs())).fold(0.0, f64::max)
    }

    pub fn to_dense_f64(&self) -> Vec<Vec<(f64, f64)>> {
        let mut out = vec![vec![(0.0, 0.0); self.n]; self.n];
        for (i, j, v) in self.entries() {
            out[i][j] = (to_f64(&v.re), to_f64(&v.im));
        }
        out
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CMatrix({}x{}; ", self.n, self.n)?;
        for (i, j, v) in self.entries() {
            write!(f, "[{i},{j}]={}+{}i ", v.re, v.im)?;
        }
        write!(f, ")")
    }
}

/// Pauli matrices σ1, σ2, σ3.
pub fn pauli() -> [CMatrix; 3] {
    let z = GQ::zero;
    let one = || gq_int(1);
    let i = gq_i;
    [
        CMatrix::from_dense(&[vec![z(), one()], vec![one(), z()]]),
        CMatrix::from_dense(&[vec![z(), -i()], vec![i(), z()]]),
        CMatrix::from_dense(&[vec![one(), z()], vec![z(), -one()]]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra() {
        let [s1, s2, s3] = pauli();
        let i2 = CMatrix::identity(2);
        assert_eq!(s1.mul(&s1), i2);
        assert_eq!(s1.mul(&s2), s3.scale(&gq_i()));
        assert!(s1.anticommutator(&s3).is_zero());
        assert!(s2.is_hermitian());
    }

    #[test]
    fn kron_dimensions_and_scalar_detection() {
        let [s1, _, s3] = pauli();
        let k = s1.kron(&s3);
        assert_eq!(k.dim(), 4);
        assert_eq!(k.nnz(), 4);
        assert_eq!(k.mul(&k).as_scalar(), Some(gq_int(1)));
        assert_eq!(s1.as_scalar(), None);
        assert_eq!(CMatrix::zeros(3).as_scalar(), Some(GQ::zero()));
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("3/6").unwrap(), q(1, 2));
        assert_eq!(parse_rational("-7").unwrap(), qi(-7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5").is_err());
    }

    #[test]
    fn rational_square_roots() {
        assert_eq!(exact_sqrt(&q(25, 4)), Some(q(5, 2)));
        assert_eq!(exact_sqrt(&q(2, 1)), None);
        assert_eq!(exact_sqrt(&q(0, 1)), Some(qi(0)));
    }
}
