//! Finite-difference eigenvalue oracle for radial problems.
//!
//! On a log grid `u = ln r`, `χ = r^{1/2}y` turns `−χ″ + (C/r² + Z/r)χ = εχ` into
//! `−y_uu + (¼ + C + Zr)y = εr²y`, a symmetric pencil `Ay = εBy` with `B = diag(r²)`.
//! The left end uses the exact small-r ratio `y_0 = exp(−h·√(¼ + C))·y_1` of the regular
//! solution; the right end is Dirichlet. Eigenvalues come from bisection on the inertia of
//! `A − σB` (block LDLᵀ), eigenvectors from inverse iteration.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::to_f64;
use crate::radial::{RadialProblem, SpectrumLine};
use crate::report::{CheckReport, Residual, Violation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GridKind {
    Uniform,
    Log,
}

/// `npoints` interior nodes strictly between `r_min` and `r_max`, equally spaced in `r` or `ln r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub kind: GridKind,
    pub r_min: f64,
    pub r_max: f64,
    pub npoints: usize,
}

pub const DEFAULT_NPOINTS: usize = 4000;

impl Grid {
    pub fn new(kind: GridKind, r_min: f64, r_max: f64, npoints: usize) -> Result<Self> {
        if !(r_min > 0.0 && r_min < r_max && r_max.is_finite()) {
            return Err(Error::Domain(format!("grid needs 0 < r_min < r_max, got r_min = {r_min}, r_max = {r_max}")));
        }
        if npoints < 100 {
            return Err(Error::Domain(format!("grid needs at least 100 points, got {npoints}")));
        }
        Ok(Self { kind, r_min, r_max, npoints })
    }

    /// Log grid on `[r_min, 40·L]` with `L` the decay length of the highest requested level.
    /// The cutoff error near the origin scales like `r_min^{2s+1}`, `s = √(¼ + λ_min(C))`, so
    /// `r_min = 10^{−max(6, 12/(2s+1))}·L`.
    pub fn default_for(p: &RadialProblem, levels: usize) -> Self {
        let l = p.decay_length_for(levels.saturating_sub(1) as u32);
        let s = (0.25 + min_eigenvalue(&p.centrifugal)).max(0.0).sqrt();
        let decades = (12.0 / (2.0 * s + 1.0)).max(6.0);
        Self { kind: GridKind::Log, r_min: 10f64.powf(-decades) * l, r_max: 40.0 * l, npoints: DEFAULT_NPOINTS }
    }

    /// Step in the mapped coordinate.
    pub fn h(&self) -> f64 {
        let span = match self.kind {
            GridKind::Uniform => self.r_max - self.r_min,
            GridKind::Log => (self.r_max / self.r_min).ln(),
        };
        span / (self.npoints as f64 + 1.0)
    }

    pub fn nodes(&self) -> Vec<f64> {
        let h = self.h();
        (1..=self.npoints)
            .map(|i| match self.kind {
                GridKind::Uniform => self.r_min + i as f64 * h,
                GridKind::Log => (self.r_min.ln() + i as f64 * h).exp(),
            })
            .collect()
    }

    /// Same interval with the step halved (`2N+1` interior points, old nodes kept).
    pub fn halved(&self) -> Self {
        Self { npoints: 2 * self.npoints + 1, ..*self }
    }

    pub fn with_r_max(&self, r_max: f64) -> Result<Self> {
        Self::new(self.kind, self.r_min, r_max, self.npoints)
    }
}

fn min_eigenvalue(m: &[Vec<f64>]) -> f64 {
    match m.len() {
        1 => m[0][0],
        _ => {
            let (a, b, c) = (m[0][0], m[0][1], m[1][1]);
            0.5 * (a + c) - (0.25 * (a - c) * (a - c) + b * b).sqrt()
        }
    }
}

/// Block-tridiagonal symmetric pencil `A − εB`: diagonal blocks `A_i` (symmetric), off-diagonal
/// blocks `o_i·I`, and `B = diag(w_i)·I`.
#[derive(Debug, Clone)]
pub struct BandedSymmetricSystem {
    pub block: usize,
    pub grid_kind: GridKind,
    pub h: f64,
    pub nodes: Vec<f64>,
    diag: Vec<Vec<f64>>,
    off: Vec<f64>,
    weight: Vec<f64>,
}

impl BandedSymmetricSystem {
    pub fn size(&self) -> usize {
        self.nodes.len() * self.block
    }

    /// Half-bandwidth in the interleaved ordering `(node, channel)`.
    pub fn bandwidth(&self) -> usize {
        self.block
    }

    fn a(&self, i: usize, r: usize, c: usize) -> f64 {
        self.diag[i][r * self.block + c]
    }

    /// Max asymmetry of `B^{−1/2}AB^{−1/2}`.
    pub fn symmetry_defect(&self) -> f64 {
        let nb = self.block;
        let mut worst = 0.0f64;
        for (i, w) in self.weight.iter().enumerate() {
            for r in 0..nb {
                for c in 0..nb {
                    worst = worst.max((self.a(i, r, c) - self.a(i, c, r)).abs() / w);
                }
            }
        }
        worst
    }

    /// Dense `B^{−1/2}AB^{−1/2}` (for tests and small systems).
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.size();
        let nb = self.block;
        let mut m = vec![vec![0.0; n]; n];
        let s: Vec<f64> = self.weight.iter().map(|w| 1.0 / w.sqrt()).collect();
        for i in 0..self.nodes.len() {
            for r in 0..nb {
                for c in 0..nb {
                    m[i * nb + r][i * nb + c] = self.a(i, r, c) * s[i] * s[i];
                }
                if i + 1 < self.nodes.len() {
                    let v = self.off[i] * s[i] * s[i + 1];
                    m[i * nb + r][(i + 1) * nb + r] = v;
                    m[(i + 1) * nb + r][i * nb + r] = v;
                }
            }
        }
        m
    }

    /// Number of eigenvalues strictly below `sigma` (Sylvester inertia of `A − σB`).
    pub fn count_below(&self, sigma: f64) -> usize {
        let nb = self.block;
        let mut count = 0;
        let mut prev_inv: Option<Vec<f64>> = None;
        for i in 0..self.nodes.len() {
            let mut d: Vec<f64> = self.diag[i].clone();
            for r in 0..nb {
                d[r * nb + r] -= sigma * self.weight[i];
            }
            if let Some(inv) = &prev_inv {
                let o2 = self.off[i - 1] * self.off[i - 1];
                for (x, y) in d.iter_mut().zip(inv) {
                    *x -= o2 * y;
                }
            }
            let scale = d.iter().fold(0.0f64, |a, x| a.max(x.abs())).max(1e-300);
            let (eigs, inv) = sym_eig_and_inverse(&d, nb, scale);
            count += eigs.iter().filter(|e| **e < 0.0).count();
            prev_inv = Some(inv);
        }
        count
    }

    /// Solves `(A − σB)x = rhs` by banded LU with partial pivoting.
    fn solve_shifted(&self, sigma: f64, rhs: &[f64]) -> Result<Vec<f64>> {
        let nb = self.block;
        let n = self.size();
        let mut lu = BandLu::new(n, nb, nb);
        for i in 0..self.nodes.len() {
            for r in 0..nb {
                for c in 0..nb {
                    let mut v = self.a(i, r, c);
                    if r == c {
                        v -= sigma * self.weight[i];
                    }
                    lu.set(i * nb + r, i * nb + c, v);
                }
                if i + 1 < self.nodes.len() {
                    lu.set(i * nb + r, (i + 1) * nb + r, self.off[i]);
                    lu.set((i + 1) * nb + r, i * nb + r, self.off[i]);
                }
            }
        }
        lu.factor()?;
        Ok(lu.solve(rhs))
    }
}

// Eigenvalues and inverse of a small symmetric matrix; near-singular matrices are nudged.
fn sym_eig_and_inverse(d: &[f64], nb: usize, scale: f64) -> (Vec<f64>, Vec<f64>) {
    let tiny = 1e-300_f64.max(scale * f64::EPSILON * 1e-3);
    match nb {
        1 => {
            let mut x = d[0];
            if x.abs() < tiny {
                x = -tiny;
            }
            (vec![x], vec![1.0 / x])
        }
        2 => {
            let (a, b, c) = (d[0], 0.5 * (d[1] + d[2]), d[3]);
            let mean = 0.5 * (a + c);
            let rad = (0.25 * (a - c) * (a - c) + b * b).sqrt();
            let (mut e1, mut e2) = (mean - rad, mean + rad);
            let mut det = a * c - b * b;
            if det.abs() < tiny * scale {
                det = -tiny * scale;
                e1 = e1.min(-tiny);
                e2 = e2.max(tiny);
            }
            (vec![e1, e2], vec![c / det, -b / det, -b / det, a / det])
        }
        _ => unreachable!("radial problems have at most two channels"),
    }
}

/// Applies `f` to the eigenvalues of a symmetric 1×1 or 2×2 matrix.
fn sym_matrix_function(m: &[Vec<f64>], f: impl Fn(f64) -> f64) -> Vec<Vec<f64>> {
    match m.len() {
        1 => vec![vec![f(m[0][0])]],
        2 => {
            let (a, b, c) = (m[0][0], 0.5 * (m[0][1] + m[1][0]), m[1][1]);
            if b == 0.0 {
                return vec![vec![f(a), 0.0], vec![0.0, f(c)]];
            }
            let mean = 0.5 * (a + c);
            let rad = (0.25 * (a - c) * (a - c) + b * b).sqrt();
            let lam = [mean - rad, mean + rad];
            let mut out = vec![vec![0.0; 2]; 2];
            for &l in &lam {
                // eigenvector (b, l − a)
                let (x, y) = if (l - a).abs() > (l - c).abs() { (b, l - a) } else { (l - c, b) };
                let nrm = x * x + y * y;
                let fl = f(l);
                out[0][0] += fl * x * x / nrm;
                out[0][1] += fl * x * y / nrm;
                out[1][1] += fl * y * y / nrm;
            }
            out[1][0] = out[0][1];
            out
        }
        _ => unreachable!("radial problems have at most two channels"),
    }
}

struct BandLu {
    n: usize,
    kl: usize,
    w: usize,
    a: Vec<f64>,
    piv: Vec<usize>,
}

impl BandLu {
    fn new(n: usize, kl: usize, ku: usize) -> Self {
        let w = 2 * kl + ku + 1;
        Self { n, kl, w, a: vec![0.0; n * w], piv: vec![0; n] }
    }

    fn idx(&self, i: usize, j: usize) -> Option<usize> {
        let off = j as isize - i as isize + self.kl as isize;
        (off >= 0 && (off as usize) < self.w).then(|| i * self.w + off as usize)
    }

    fn get(&self, i: usize, j: usize) -> f64 {
        self.idx(i, j).map_or(0.0, |k| self.a[k])
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j).expect("entry inside the band");
        self.a[k] = v;
    }

    fn last_col(&self, i: usize) -> usize {
        (i + self.w - self.kl - 1).min(self.n - 1)
    }

    fn factor(&mut self) -> Result<()> {
        let n = self.n;
        let norm = self.a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        for k in 0..n {
            let lo = (k + self.kl).min(n - 1);
            let p = (k..=lo).max_by(|&x, &y| self.get(x, k).abs().total_cmp(&self.get(y, k).abs())).expect("nonempty");
            self.piv[k] = p;
            if p != k {
                for j in k..=self.last_col(k) {
                    let (x, y) = (self.get(k, j), self.get(p, j));
                    self.set(k, j, y);
                    self.set(p, j, x);
                }
            }
            let mut pivot = self.get(k, k);
            if pivot == 0.0 {
                pivot = norm * f64::EPSILON;
                if pivot == 0.0 {
                    return Err(Error::Convergence("zero matrix in banded solve".into()));
                }
                self.set(k, k, pivot);
            }
            for i in k + 1..=lo {
                let f = self.get(i, k) / pivot;
                if f == 0.0 {
                    continue;
                }
                self.set(i, k, f);
                for j in k + 1..=self.last_col(k) {
                    let v = self.get(i, j) - f * self.get(k, j);
                    self.set(i, j, v);
                }
            }
        }
        Ok(())
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x = rhs.to_vec();
        for k in 0..n {
            x.swap(k, self.piv[k]);
            let lo = (k + self.kl).min(n - 1);
            for i in k + 1..=lo {
                x[i] -= self.get(i, k) * x[k];
            }
        }
        for k in (0..n).rev() {
            let mut s = x[k];
            for j in k + 1..=self.last_col(k) {
                s -= self.get(k, j) * x[j];
            }
            x[k] = s / self.get(k, k);
        }
        x
    }
}

/// Second-order finite differences of the problem on the grid.
pub fn discretize(p: &RadialProblem, g: &Grid) -> Result<BandedSymmetricSystem> {
    let nb = p.nchan;
    if !(1..=2).contains(&nb) || p.centrifugal.len() != nb || p.coulomb.len() != nb {
        return Err(Error::Mismatch("radial problem matrices do not match nchan".into()));
    }
    for mtx in [&p.centrifugal, &p.coulomb] {
        if nb == 2 && (mtx[0][1] - mtx[1][0]).abs() > 0.0 {
            return Err(Error::Mismatch("channel matrices must be symmetric".into()));
        }
    }
    let h = g.h();
    let nodes = g.nodes();
    let ih2 = 1.0 / (h * h);
    let mut diag = Vec::with_capacity(nodes.len());
    let mut weight = Vec::with_capacity(nodes.len());
    for &r in &nodes {
        let mut blk = vec![0.0; nb * nb];
        for a in 0..nb {
            for b in 0..nb {
                let v = match g.kind {
                    GridKind::Log => p.centrifugal[a][b] + p.coulomb[a][b] * r,
                    GridKind::Uniform => p.centrifugal[a][b] / (r * r) + p.coulomb[a][b] / r,
                };
                blk[a * nb + b] = v;
            }
            blk[a * nb + a] += 2.0 * ih2;
            if g.kind == GridKind::Log {
                blk[a * nb + a] += 0.25;
            }
        }
        diag.push(blk);
        weight.push(match g.kind {
            GridKind::Log => r * r,
            GridKind::Uniform => 1.0,
        });
    }
    if g.kind == GridKind::Log {
        // regular solution y ~ r^s near the origin, s = √(¼ + C)
        let mut m = p.centrifugal.clone();
        for (a, row) in m.iter_mut().enumerate() {
            row[a] += 0.25;
        }
        let rho = sym_matrix_function(&m, |x| (-h * x.max(0.0).sqrt()).exp());
        for a in 0..nb {
            for b in 0..nb {
                diag[0][a * nb + b] -= rho[a][b] * ih2;
            }
        }
    }
    Ok(BandedSymmetricSystem {
        block: nb,
        grid_kind: g.kind,
        h,
        off: vec![-ih2; nodes.len().saturating_sub(1)],
        nodes,
        diag,
        weight,
    })
}

/// Uniform-grid discretization of `−χ″ + V(x)χ` on `[a, b]` with Dirichlet ends (self-tests).
pub fn discretize_potential(a: f64, b: f64, npoints: usize, v: impl Fn(f64) -> f64) -> BandedSymmetricSystem {
    let h = (b - a) / (npoints as f64 + 1.0);
    let nodes: Vec<f64> = (1..=npoints).map(|i| a + i as f64 * h).collect();
    let ih2 = 1.0 / (h * h);
    BandedSymmetricSystem {
        block: 1,
        grid_kind: GridKind::Uniform,
        h,
        diag: nodes.iter().map(|&x| vec![2.0 * ih2 + v(x)]).collect(),
        off: vec![-ih2; npoints - 1],
        weight: vec![1.0; npoints],
        nodes,
    }
}

fn bisect(s: &BandedSymmetricSystem, index: usize) -> Result<f64> {
    let mut lo = -1.0;
    let mut guard = 0;
    while s.count_below(lo) > index {
        lo *= 2.0;
        guard += 1;
        if guard > 1100 {
            return Err(Error::Convergence(format!("no lower bound for eigenvalue {index}")));
        }
    }
    let mut hi = 1.0;
    guard = 0;
    while s.count_below(hi) <= index {
        hi *= 2.0;
        guard += 1;
        if guard > 1100 {
            return Err(Error::Convergence(format!("no upper bound for eigenvalue {index}")));
        }
    }
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 4.0 * f64::EPSILON * mid.abs().max(1e-300) {
            return Ok(mid);
        }
        if s.count_below(mid) > index {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The `k` smallest eigenvalues `ε` of the pencil, ascending.
pub fn lowest_eigenvalues(s: &BandedSymmetricSystem, k: usize) -> Result<Vec<f64>> {
    if k == 0 {
        return Err(Error::Domain("requested zero eigenvalues".into()));
    }
    if k > s.size() {
        return Err(Error::Domain(format!("requested {k} eigenvalues of a system of size {}", s.size())));
    }
    (0..k).into_par_iter().map(|i| bisect(s, i)).collect()
}

/// Eigenvalue with its eigenvector `χ` per channel, normalized to `∫|χ|² dr = 1` on the grid.
#[derive(Debug, Clone, Serialize)]
pub struct Eigenpair {
    pub epsilon: f64,
    pub r: Vec<f64>,
    pub chi: Vec<Vec<f64>>,
    pub nodes: usize,
}

pub fn eigenpairs(s: &BandedSymmetricSystem, k: usize) -> Result<Vec<Eigenpair>> {
    let eps = lowest_eigenvalues(s, k)?;
    eps.par_iter().map(|&e| inverse_iteration(s, e)).collect()
}

fn inverse_iteration(s: &BandedSymmetricSystem, eps: f64) -> Result<Eigenpair> {
    let nb = s.block;
    let n = s.size();
    let shift = eps + 1e-10 * eps.abs().max(1e-3);
    let bw = |x: &[f64]| -> Vec<f64> { x.iter().enumerate().map(|(i, v)| v * s.weight[i / nb]).collect() };
    let bnorm = |x: &[f64]| -> f64 { x.iter().enumerate().map(|(i, v)| v * v * s.weight[i / nb]).sum::<f64>().sqrt() };
    // deterministic, non-symmetric start
    let mut y: Vec<f64> = (0..n).map(|i| 1.0 + ((i * 7919) % 13) as f64 * 0.01).collect();
    let nrm = bnorm(&y);
    y.iter_mut().for_each(|v| *v /= nrm);
    for it in 0..8 {
        let mut x = s.solve_shifted(shift, &bw(&y))?;
        let nrm = bnorm(&x);
        if !(nrm.is_finite() && nrm > 0.0) {
            return Err(Error::Convergence(format!("inverse iteration broke down at step {it}")));
        }
        x.iter_mut().for_each(|v| *v /= nrm);
        let diff: f64 = x.iter().zip(&y).map(|(a, b)| (a - b).abs().min((a + b).abs())).fold(0.0, f64::max);
        y = x;
        if diff < 1e-13 && it > 0 {
            break;
        }
    }
    let per_channel_factor = |r: f64| match s.grid_kind {
        GridKind::Log => r.sqrt(),
        GridKind::Uniform => 1.0,
    };
    let mut chi = vec![Vec::with_capacity(s.nodes.len()); nb];
    for (i, &r) in s.nodes.iter().enumerate() {
        for (c, ch) in chi.iter_mut().enumerate() {
            ch.push(y[i * nb + c] * per_channel_factor(r));
        }
    }
    // yᵀBy = 1 is Σχ²·r = 1 (log) or Σχ² = 1 (uniform); ∫χ² dr needs one more factor h
    let f = 1.0 / s.h.sqrt();
    // sign: first significant entry of the dominant channel positive
    let dom = (0..nb)
        .max_by(|&a, &b| {
            let na: f64 = chi[a].iter().map(|v| v * v).sum();
            let nb_: f64 = chi[b].iter().map(|v| v * v).sum();
            na.total_cmp(&nb_)
        })
        .unwrap_or(0);
    let big = chi[dom].iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let sign = chi[dom].iter().find(|v| v.abs() > 1e-6 * big).map_or(1.0, |v| v.signum());
    for ch in &mut chi {
        ch.iter_mut().for_each(|v| *v *= f * sign);
    }
    let nodes = node_count(&chi[dom]);
    Ok(Eigenpair { epsilon: eps, r: s.nodes.clone(), chi, nodes })
}

/// Strict sign changes, ignoring entries below `1e−12` of the largest magnitude.
pub fn node_count(values: &[f64]) -> usize {
    let big = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let thr = 1e-12 * big;
    let mut last = 0.0f64;
    let mut count = 0;
    for &v in values {
        if v.abs() <= thr {
            continue;
        }
        if last != 0.0 && v.signum() != last.signum() {
            count += 1;
        }
        last = v;
    }
    count
}

/// One extrapolated level, in energy units `E = ε/(2m)`.
#[derive(Debug, Clone, Serialize)]
pub struct RefinedLevel {
    pub energy: f64,
    pub error_estimate: f64,
    /// Value on the finer of the two grids.
    pub unextrapolated: f64,
}

fn energies(p: &RadialProblem, g: &Grid, k: usize) -> Result<Vec<f64>> {
    let two_m = 2.0 * to_f64(&p.m);
    Ok(lowest_eigenvalues(&discretize(p, g)?, k)?.into_iter().map(|e| e / two_m).collect())
}

/// Richardson extrapolation `E = (4E_{h/2} − E_h)/3` of the `k` lowest levels.
pub fn refined_spectrum(p: &RadialProblem, g: &Grid, k: usize) -> Result<Vec<RefinedLevel>> {
    let (coarse, fine) = rayon::join(|| energies(p, g, k), || energies(p, &g.halved(), k));
    let (coarse, fine) = (coarse?, fine?);
    Ok(coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| {
            let e = (4.0 * f - c) / 3.0;
            RefinedLevel { energy: e, error_estimate: (e - f).abs(), unextrapolated: *f }
        })
        .collect())
}

/// Observed order `log2((E_h − E_{h/2})/(E_{h/2} − E_{h/4}))` per level.
pub fn convergence_order(p: &RadialProblem, g: &Grid, k: usize) -> Result<Vec<f64>> {
    let g2 = g.halved();
    let g4 = g2.halved();
    let e1 = energies(p, g, k)?;
    let e2 = energies(p, &g2, k)?;
    let e4 = energies(p, &g4, k)?;
    Ok((0..k).map(|i| ((e1[i] - e2[i]) / (e2[i] - e4[i])).abs().log2()).collect())
}

/// Level-by-level comparison; a level fails when `|E_num − E_ana| > rel_tol·|E_ana|`.
pub fn compare(analytic: &[SpectrumLine], numeric: &[f64], rel_tol: f64) -> Result<CheckReport> {
    if analytic.len() != numeric.len() {
        return Err(Error::Mismatch(format!(
            "{} analytic levels against {} numerical ones",
            analytic.len(),
            numeric.len()
        )));
    }
    let mut rep = CheckReport::new();
    let mut worst = 0.0f64;
    for (i, (a, x)) in analytic.iter().zip(numeric).enumerate() {
        let label = format!("level_n{}", a.n);
        rep.checked(label.clone());
        let e = to_f64(&a.energy);
        let dev = (x - e).abs() / e.abs();
        worst = worst.max(dev);
        if !(dev <= rel_tol) {
            rep.violate(Violation {
                identity: label,
                indices: vec![i],
                residual: Residual::Norm(dev),
                witness: Some(vec![format!("{x:.15e}"), a.energy.to_string()]),
            });
        }
    }
    rep.note(format!("max relative deviation {worst:.3e}"));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, Q};
    use crate::radial::{analytic_energy_scalar, scalar_channel, spinor_channel};
    use num_traits::One;

    fn one() -> Q {
        Q::one()
    }

    #[test]
    fn harmonic_oscillator_self_test() {
        let s = discretize_potential(-10.0, 10.0, 8000, |x| x * x);
        let e = lowest_eigenvalues(&s, 3).unwrap();
        for (got, want) in e.iter().zip([1.0, 3.0, 5.0]) {
            assert!((got - want).abs() < 1e-4, "{got}");
        }
        // Richardson on the same self-test reaches 1e−6
        let s2 = discretize_potential(-10.0, 10.0, 16001, |x| x * x);
        let e2 = lowest_eigenvalues(&s2, 3).unwrap();
        for i in 0..3 {
            let x = (4.0 * e2[i] - e[i]) / 3.0;
            assert!((x - (2 * i + 1) as f64).abs() < 1e-6, "{x}");
        }
    }

    #[test]
    fn structure_and_symmetry() {
        let p = scalar_channel(3, 0, &one(), &one()).unwrap();
        let g = Grid::new(GridKind::Log, 1e-4, 40.0, 120).unwrap();
        let s = discretize(&p, &g).unwrap();
        assert_eq!(s.block, 1);
        assert_eq!(s.bandwidth(), 1);
        assert!(s.symmetry_defect() < 1e-14);
        let d = s.to_dense();
        for i in 0..d.len() {
            for j in 0..d.len() {
                if i.abs_diff(j) > 1 {
                    assert_eq!(d[i][j], 0.0);
                }
                assert!((d[i][j] - d[j][i]).abs() < 1e-14 * d[i][i].abs().max(1.0));
            }
        }
        let sp = spinor_channel(3, &q(1, 2), &one(), &one()).unwrap();
        let s = discretize(&sp, &g).unwrap();
        assert_eq!(s.block, 2);
        assert!(s.symmetry_defect() < 1e-14);
        assert!(lowest_eigenvalues(&s, s.size() + 1).is_err());
    }

    #[test]
    fn hydrogen_ground_state() {
        let p = scalar_channel(3, 0, &one(), &one()).unwrap();
        let g = Grid::default_for(&p, 3);
        let e = lowest_eigenvalues(&discretize(&p, &g).unwrap(), 1).unwrap();
        assert!((e[0] + 1.0).abs() < 1e-4);
        let r = refined_spectrum(&p, &g, 3).unwrap();
        for (n, lv) in r.iter().enumerate() {
            let want = -0.5 / ((n + 1) * (n + 1)) as f64;
            assert!((lv.energy - want).abs() < 1e-8, "{} vs {want}", lv.energy);
        }
        let order = convergence_order(&p, &g, 1).unwrap();
        assert!((1.8..=2.2).contains(&order[0]), "{order:?}");
    }

    #[test]
    fn spinor_d2_ground_state() {
        let p = spinor_channel(2, &q(1, 2), &one(), &one()).unwrap();
        let r = refined_spectrum(&p, &Grid::default_for(&p, 1), 1).unwrap();
        assert!((r[0].energy + 0.5).abs() < 1e-6, "{}", r[0].energy);
    }

    #[test]
    fn eigenvector_nodes() {
        let p = scalar_channel(3, 0, &one(), &one()).unwrap();
        let s = discretize(&p, &Grid::default_for(&p, 3)).unwrap();
        let v = eigenpairs(&s, 3).unwrap();
        for (n, ep) in v.iter().enumerate() {
            assert_eq!(ep.nodes, n);
        }
    }

    #[test]
    fn node_threshold() {
        assert_eq!(node_count(&[1.0, 1e-14, -1e-14, 1.0]), 0);
        assert_eq!(node_count(&[1.0, 0.5, -0.5, -1.0, 0.2]), 2);
    }

    #[test]
    fn compare_detects_wrong_coupling() {
        let p = scalar_channel(4, 0, &one(), &one()).unwrap();
        let num: Vec<f64> =
            refined_spectrum(&p, &Grid::default_for(&p, 3), 3).unwrap().iter().map(|l| l.energy).collect();
        let good: Vec<_> = (0..3).map(|n| analytic_energy_scalar(4, 0, n, &one(), &one())).collect();
        assert!(compare(&good, &num, 1e-6).unwrap().passed);
        let bad: Vec<_> = (0..3).map(|n| analytic_energy_scalar(4, 0, n, &one(), &q(11, 10))).collect();
        assert!(!compare(&bad, &num, 1e-6).unwrap().passed);
        assert!(compare(&good[..2], &num, 1e-6).is_err());
    }
}
