//! Numerical confirmation of the classification.
//!
//! Lines are sampled, pushed through `𝒫_Λ` at multiprecision, and the images
//! are tested for a vanishing polynomial by the smallest singular value of a
//! weighted monomial matrix.
//!
//! Before fitting, images are centered at their coordinatewise median and
//! scaled by three times the largest per-coordinate median deviation, and
//! each row of degree-`d` monomials is divided by `(1 + x² + y²)^{d/2}`.
//! Images of lines are heavy-tailed near the poles; with plain max-abs
//! scaling most points collapse towards the origin and high-degree monomials
//! become numerically dependent on dense (non-algebraic) images as well.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{classify, Classification, ClassifyError, ComplexLine, LineOrigin, RealLine};
use crate::lattice::{Lattice, TauMode, TauSpec};
use crate::mp::{Complex, Real};
use crate::weierstrass::{PrecisionCfg, Weierstrass, WeierstrassError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("no samples requested")]
    EmptyRequest,
    #[error("all {0} samples fell into pole neighborhoods or were clipped")]
    AllDropped(usize),
    #[error("need at least {need} points for degree {deg}, got {got}")]
    TooFewPoints { need: usize, got: usize, deg: usize },
    #[error("lattice is not rectangular (τ must be purely imaginary)")]
    NotRectangular,
    #[error(transparent)]
    Weierstrass(#[from] WeierstrassError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

impl From<crate::lattice::LatticeError> for VerifyError {
    fn from(e: crate::lattice::LatticeError) -> Self {
        VerifyError::Classify(e.into())
    }
}

/// `f(v, w) = (v + iw, v − iw)`.
pub fn f_map(v: &Complex, w: &Complex) -> (Complex, Complex) {
    let iw = w.mul_i();
    (v + &iw, v - &iw)
}

/// `g(a, b) = ((a + b)/2, (a − b)/(2i))`, the inverse of [`f_map`].
pub fn g_map(a: &Complex, b: &Complex) -> (Complex, Complex) {
    let s = (a + b).ldexp(-1);
    let d = (a - b).ldexp(-1);
    // (a − b)/(2i) = −i·(a − b)/2
    (s, -d.mul_i())
}

pub fn f_map_c64(v: Complex64, w: Complex64) -> (Complex64, Complex64) {
    let iw = Complex64::i() * w;
    (v + iw, v - iw)
}

pub fn g_map_c64(a: Complex64, b: Complex64) -> (Complex64, Complex64) {
    ((a + b) / 2.0, (a - b) / Complex64::new(0.0, 2.0))
}

/// `‖f(𝒫_Λ(z)) − (℘_Λ(z), ℘_Λ̄(z̄))‖ / max(1, |℘_Λ(z)|)`; `None` at poles.
pub fn diagram_residual(w: &Weierstrass, wc: &Weierstrass, z: &Complex) -> Option<f64> {
    let p = w.wp(z).value()?.clone();
    let q = wc.wp(&z.conj()).value()?.clone();
    let v = Complex::from_real(p.re.clone());
    let im = Complex::from_real(p.im.clone());
    let (a, b) = f_map(&v, &im);
    let d = (&a - &p).abs().max(&(&b - &q).abs()).to_f64();
    Some(d / p.abs().to_f64().max(1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitTolerances {
    pub low: f64,
    pub high: f64,
    pub hold: f64,
}

impl Default for FitTolerances {
    fn default() -> Self {
        FitTolerances { low: 1e-10, high: 1e-4, hold: 1e-6 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Vanishing,
    NoRelation,
    Inconclusive,
}

/// Integer polynomial over monomials `X^{k−j} Y^j`, `k ≤ degree`, ordered by
/// total degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntPoly {
    pub degree: usize,
    pub coeffs: Vec<i64>,
}

impl IntPoly {
    pub fn display_with(&self, x: &str, y: &str) -> String {
        let exps = monomial_exponents(self.degree);
        let mut terms: Vec<(usize, usize, i64)> =
            exps.iter().zip(&self.coeffs).filter(|(_, &c)| c != 0).map(|(&(a, b), &c)| (a, b, c)).collect();
        terms.sort_by_key(|&(a, b, _)| (std::cmp::Reverse(a + b), std::cmp::Reverse(a)));
        if terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (a, b, c)) in terms.into_iter().enumerate() {
            let mono = [(x, a), (y, b)]
                .iter()
                .filter(|(_, e)| *e > 0)
                .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
                .collect::<Vec<_>>()
                .join("*");
            let mag = c.unsigned_abs();
            let body = match (mono.is_empty(), mag) {
                (true, m) => m.to_string(),
                (false, 1) => mono,
                (false, m) => format!("{m}*{mono}"),
            };
            match (i, c < 0) {
                (0, false) => out.push_str(&body),
                (0, true) => out.push_str(&format!("-{body}")),
                (_, false) => out.push_str(&format!(" + {body}")),
                (_, true) => out.push_str(&format!(" - {body}")),
            }
        }
        out
    }
}

impl std::fmt::Display for IntPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.display_with("X", "Y"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub verdict: Verdict,
    pub degree: Option<usize>,
    /// Unit-norm coefficients of the relation in original coordinates
    /// (real parts for complex fits); empty unless the verdict is VANISHING.
    pub coeffs: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coeffs_imag: Vec<f64>,
    /// At the vanishing degree, otherwise the smallest over all degrees.
    pub sv_ratio: f64,
    pub sv_ratios: Vec<f64>,
    pub holdout_residual: Option<f64>,
    pub exact: Option<IntPoly>,
    pub n_points: usize,
}

impl FitResult {
    pub fn exact_string(&self, x: &str, y: &str) -> Option<String> {
        self.exact.as_ref().map(|p| format!("{} = 0", p.display_with(x, y)))
    }

    /// For degree-1 relations `a + bX + cY`, the angle of the line in `[0, π)`.
    pub fn line_angle(&self) -> Option<f64> {
        if self.degree != Some(1) || self.coeffs.len() != 3 {
            return None;
        }
        let (b, c) = (self.coeffs[1], self.coeffs[2]);
        Some((b).atan2(-c).rem_euclid(std::f64::consts::PI))
    }
}

pub fn monomial_count(deg: usize) -> usize {
    (deg + 1) * (deg + 2) / 2
}

pub fn monomial_exponents(deg: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(monomial_count(deg));
    for k in 0..=deg {
        for j in 0..=k {
            out.push((k - j, j));
        }
    }
    out
}

fn median(v: &mut [f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Center and scale for a set of coordinate vectors (`dim` reals each).
///
/// The scale is the largest per-coordinate median deviation, so an image
/// that is degenerate in one coordinate is scaled by the other.
fn robust_normalization(rows: &[Vec<f64>], dim: usize) -> (Vec<f64>, f64) {
    let center: Vec<f64> = (0..dim)
        .map(|k| {
            let mut col: Vec<f64> = rows.iter().map(|r| r[k]).collect();
            median(&mut col)
        })
        .collect();
    let mut scale = (0..dim)
        .map(|k| {
            let mut dev: Vec<f64> = rows.iter().map(|r| (r[k] - center[k]).abs()).collect();
            3.0 * median(&mut dev)
        })
        .fold(0.0, f64::max);
    if !(scale > 0.0 && scale.is_finite()) {
        scale = rows.iter().flat_map(|r| r.iter().zip(&center).map(|(a, c)| (a - c).abs())).fold(0.0, f64::max);
    }
    if !(scale > 0.0 && scale.is_finite()) {
        scale = 1.0;
    }
    (center, scale)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Rewrites `Σ c_{ab} ((X−cx)/s)^a ((Y−cy)/s)^b` in the monomials of `X`, `Y`.
fn back_substitute(c: &[Complex64], deg: usize, cx: Complex64, cy: Complex64, s: f64) -> Vec<Complex64> {
    let exps = monomial_exponents(deg);
    let index = |a: usize, b: usize| -> usize { (a + b) * (a + b + 1) / 2 + b };
    let mut out = vec![Complex64::new(0.0, 0.0); exps.len()];
    for (&(a, b), &coef) in exps.iter().zip(c) {
        if coef == Complex64::new(0.0, 0.0) {
            continue;
        }
        let k = coef / s.powi((a + b) as i32);
        for i in 0..=a {
            let ca = binomial(a, i) * (-cx).powu((a - i) as u32);
            for j in 0..=b {
                let cb = binomial(b, j) * (-cy).powu((b - j) as u32);
                out[index(i, j)] += k * ca * cb;
            }
        }
    }
    out
}

/// Normalizes to unit norm with the largest coefficient real and positive.
fn canonical_phase(c: &mut [Complex64]) {
    let norm = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return;
    }
    let big = c.iter().cloned().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap_or(Complex64::new(1.0, 0.0));
    let phase = big.conj() / big.norm();
    for z in c.iter_mut() {
        *z = *z * phase / norm;
    }
}

/// Smallest right singular vector and singular value ratio of a real matrix.
fn null_direction(m: DMatrix<f64>) -> (f64, Vec<f64>) {
    let svd = m.svd(false, true);
    let s = &svd.singular_values;
    let vt = svd.v_t.expect("requested V^T");
    let (imin, smin) = s.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("non-empty");
    let smax = s.iter().cloned().fold(0.0, f64::max);
    let ratio = if smax > 0.0 { smin / smax } else { 0.0 };
    (ratio, vt.row(imin).iter().cloned().collect())
}

/// Normalized complex points with weights, shared by real and complex fits.
struct Prepared {
    pts: Vec<[Complex64; 2]>,
    center: [Complex64; 2],
    scale: f64,
}

fn prepare(points: &[[Complex64; 2]], complex: bool) -> Prepared {
    let rows: Vec<Vec<f64>> = points
        .iter()
        .map(|p| if complex { vec![p[0].re, p[0].im, p[1].re, p[1].im] } else { vec![p[0].re, p[1].re] })
        .collect();
    let dim = if complex { 4 } else { 2 };
    let (c, scale) = robust_normalization(&rows, dim);
    let center = if complex {
        [Complex64::new(c[0], c[1]), Complex64::new(c[2], c[3])]
    } else {
        [Complex64::new(c[0], 0.0), Complex64::new(c[1], 0.0)]
    };
    let pts = points.iter().map(|p| [(p[0] - center[0]) / scale, (p[1] - center[1]) / scale]).collect();
    Prepared { pts, center, scale }
}

fn monomial_row(p: &[Complex64; 2], deg: usize) -> Vec<Complex64> {
    let w = (1.0 + p[0].norm_sqr() + p[1].norm_sqr()).powf(-(deg as f64) / 2.0);
    monomial_exponents(deg).iter().map(|&(a, b)| p[0].powu(a as u32) * p[1].powu(b as u32) * w).collect()
}

fn fit_prepared(
    prep: &Prepared,
    max_deg: usize,
    tol: &FitTolerances,
    complex: bool,
    snap_height: i64,
) -> FitResult {
    let n = prep.pts.len();
    let (train, hold): (Vec<usize>, Vec<usize>) = (0..n).partition(|i| i % 4 != 3);
    let mut sv_ratios = Vec::new();
    let mut holdout_failed = false;
    for deg in 1..=max_deg {
        let m = monomial_count(deg);
        let rows: Vec<Vec<Complex64>> = train.iter().map(|&i| monomial_row(&prep.pts[i], deg)).collect();
        let (ratio, v) = if complex {
            let nr = rows.len();
            let mat = DMatrix::from_fn(2 * nr, 2 * m, |i, j| {
                let z = rows[i % nr][j % m];
                match (i < nr, j < m) {
                    (true, true) => z.re,
                    (true, false) => -z.im,
                    (false, true) => z.im,
                    (false, false) => z.re,
                }
            });
            null_direction(mat)
        } else {
            let mat = DMatrix::from_fn(rows.len(), m, |i, j| rows[i][j].re);
            null_direction(mat)
        };
        sv_ratios.push(ratio);
        if ratio >= tol.low {
            continue;
        }
        let mut c: Vec<Complex64> = if complex {
            (0..m).map(|j| Complex64::new(v[j], v[j + m])).collect()
        } else {
            v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
        };
        canonical_phase(&mut c);
        let holdout = hold
            .iter()
            .map(|&i| monomial_row(&prep.pts[i], deg).iter().zip(&c).map(|(a, b)| a * b).sum::<Complex64>().norm())
            .fold(0.0, f64::max);
        if holdout >= tol.hold {
            holdout_failed = true;
            continue;
        }
        let mut orig = back_substitute(&c, deg, prep.center[0], prep.center[1], prep.scale);
        canonical_phase(&mut orig);
        let re: Vec<f64> = orig.iter().map(|z| z.re).collect();
        let im: Vec<f64> = orig.iter().map(|z| z.im).collect();
        let exact = if im.iter().all(|x| x.abs() < 1e-8) { snap_integer_relation(&re, snap_height) } else { None };
        return FitResult {
            verdict: Verdict::Vanishing,
            degree: Some(deg),
            coeffs: re,
            coeffs_imag: if complex { im } else { Vec::new() },
            sv_ratio: ratio,
            sv_ratios,
            holdout_residual: Some(holdout),
            exact,
            n_points: n,
        };
    }
    let min = sv_ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let verdict = if !holdout_failed && sv_ratios.iter().all(|&r| r > tol.high) {
        Verdict::NoRelation
    } else {
        Verdict::Inconclusive
    };
    FitResult {
        verdict,
        degree: None,
        coeffs: Vec::new(),
        coeffs_imag: Vec::new(),
        sv_ratio: min,
        sv_ratios,
        holdout_residual: None,
        exact: None,
        n_points: n,
    }
}

fn check_count(n: usize, max_deg: usize) -> Result<(), VerifyError> {
    let need = 4 * monomial_count(max_deg);
    if n < need {
        return Err(VerifyError::TooFewPoints { need, got: n, deg: max_deg });
    }
    Ok(())
}

/// Minimal-degree vanishing polynomial for real points `(X, Y)`.
pub fn fit_vanishing_poly(points: &[[f64; 2]], max_deg: usize, tol: &FitTolerances) -> Result<FitResult, VerifyError> {
    fit_vanishing_poly_with_height(points, max_deg, tol, 50)
}

pub fn fit_vanishing_poly_with_height(
    points: &[[f64; 2]],
    max_deg: usize,
    tol: &FitTolerances,
    snap_height: i64,
) -> Result<FitResult, VerifyError> {
    check_count(points.len(), max_deg)?;
    let pts: Vec<[Complex64; 2]> =
        points.iter().map(|p| [Complex64::new(p[0], 0.0), Complex64::new(p[1], 0.0)]).collect();
    Ok(fit_prepared(&prepare(&pts, false), max_deg, tol, false, snap_height))
}

/// Minimal-degree complex relation `P(u, v) = 0`.
pub fn fit_vanishing_poly_complex(
    points: &[[Complex64; 2]],
    max_deg: usize,
    tol: &FitTolerances,
    snap_height: i64,
) -> Result<FitResult, VerifyError> {
    check_count(points.len(), max_deg)?;
    Ok(fit_prepared(&prepare(points, true), max_deg, tol, true, snap_height))
}

/// Integer vector of height `≤ height` within angle `10⁻⁶` of `coeffs`.
///
/// If `a ∥ c` then the largest entry of `a` sits at the largest entry of `c`,
/// so scanning its value over `1..=height` is exhaustive.
pub fn snap_integer_relation(coeffs: &[f64], height: i64) -> Option<IntPoly> {
    let m = coeffs.len();
    let deg = (0..=16).find(|&d| monomial_count(d) == m)?;
    let norm = coeffs.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return None;
    }
    let &cj = coeffs.iter().max_by(|a, b| a.abs().total_cmp(&b.abs()))?;
    for q in 1..=height.max(0) {
        let a: Vec<i64> = coeffs.iter().map(|&c| (q as f64 * c / cj).round() as i64).collect();
        if a.iter().any(|x| x.abs() > height) {
            continue;
        }
        let an = a.iter().map(|&x| (x * x) as f64).sum::<f64>().sqrt();
        let dot: f64 = a.iter().zip(coeffs).map(|(&x, &c)| x as f64 * c).sum();
        let cos = (dot.abs() / (an * norm)).min(1.0);
        let sin = (1.0 - cos * cos).max(0.0).sqrt();
        if sin < 1e-6 {
            let g = a.iter().fold(0i64, |g, &x| g.gcd(&x)).max(1);
            let mut a: Vec<i64> = a.iter().map(|x| x / g).collect();
            // leading coefficient in display order positive
            let exps = monomial_exponents(deg);
            let lead = (0..m)
                .filter(|&i| a[i] != 0)
                .max_by_key(|&i| (exps[i].0 + exps[i].1, exps[i].0))
                .expect("nonzero");
            if a[lead] < 0 {
                a.iter_mut().for_each(|x| *x = -*x);
            }
            return Some(IntPoly { degree: deg, coeffs: a });
        }
    }
    None
}

/// Settings shared by the verification routines.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyCfg {
    pub precision: PrecisionCfg,
    pub n: usize,
    pub max_deg: usize,
    pub tol: FitTolerances,
    pub seed: u64,
    pub snap_height: i64,
    /// Images of larger magnitude are dropped.
    pub clip: f64,
    /// Half-length of the sampling window in units of `|ω₁| + |ω₂|`.
    pub window: f64,
}

impl Default for VerifyCfg {
    fn default() -> Self {
        VerifyCfg {
            precision: PrecisionCfg::default(),
            n: 512,
            max_deg: 8,
            tol: FitTolerances::default(),
            seed: 1,
            snap_height: 50,
            clip: 1e12,
            window: 32.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    pub params: Vec<f64>,
    pub points: Vec<[f64; 2]>,
    pub images: Vec<[f64; 2]>,
    pub dropped: usize,
    pub seed: u64,
}

/// Direction of `line` at multiprecision, exact when its origin is known.
pub fn line_direction_mp(line: &RealLine, spec: Option<&TauSpec>, prec: usize) -> Complex {
    if let Some(spec) = spec {
        match line.origin {
            LineOrigin::LatticeDirection { m, n } => {
                return &Complex::from_i64(m, 0, prec) + &spec.tau_mp(prec).mul_i64(n);
            }
            LineOrigin::SqrtGamma { index } => {
                if let Ok(c) = classify(spec) {
                    if let crate::classify::Branch::TwoLineFamily { triple, .. } = c.branch {
                        let tau = spec.tau_mp(prec);
                        let gamma = &tau.conj().mul_i64(triple.c) + &Complex::from_i64(triple.d, 0, prec);
                        let root = gamma.sqrt().recip();
                        return if index == 1 { root } else { root.mul_i() };
                    }
                }
            }
            LineOrigin::Free => {}
        }
    }
    Complex::from_c64(line.rho.inv(), prec)
}

fn line_points(line: &RealLine, dir: &Complex, params: &[f64], prec: usize) -> Vec<Complex> {
    let off = Complex::from_c64(line.offset, prec);
    params.iter().map(|&t| &off + &dir.scale(&Real::from_f64(t, prec))).collect()
}

fn evaluate_points(w: &Weierstrass, zs: &[Complex], clip: f64) -> Vec<Option<[f64; 2]>> {
    let eval = |z: &Complex| -> Option<[f64; 2]> {
        let v = w.wp(z).value()?.to_c64();
        (v.is_finite() && v.norm() <= clip).then_some([v.re, v.im])
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        zs.par_iter().map(eval).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        zs.iter().map(eval).collect()
    }
}

/// Samples `cfg.n` points of `line` over a window crossing several period
/// cells and maps them through `𝒫_Λ`.
pub fn sample_line(line: &RealLine, w: &Weierstrass, spec: Option<&TauSpec>, cfg: &VerifyCfg) -> Result<SampleSet, VerifyError> {
    let (n, seed, clip) = (cfg.n, cfg.seed, cfg.clip);
    if n == 0 {
        return Err(VerifyError::EmptyRequest);
    }
    let prec = w.prec();
    let dir = line_direction_mp(line, spec, prec);
    let dir = {
        let a = dir.abs();
        Complex::new(&dir.re / &a, &dir.im / &a)
    };
    let lat = w.lattice();
    let half = cfg.window * (lat.omega1.norm() + lat.omega2.norm());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let attempt = |shift: f64, rng: &mut ChaCha8Rng| {
        let params: Vec<f64> = (0..n).map(|_| shift + rng.gen_range(-half..half)).collect();
        let zs = line_points(line, &dir, &params, prec);
        let vals = evaluate_points(w, &zs, clip);
        (params, zs, vals)
    };
    let (mut params, mut zs, mut vals) = attempt(0.0, &mut rng);
    if vals.iter().filter(|v| v.is_none()).count() * 2 > n {
        let shift = rng.gen_range(-0.5..0.5) * lat.shortest_vector_len();
        log::info!("more than half of the samples dropped; re-jittering the window by {shift}");
        (params, zs, vals) = attempt(shift, &mut rng);
    }
    let mut points = Vec::new();
    let mut images = Vec::new();
    for (z, v) in zs.iter().zip(&vals) {
        if let Some(v) = v {
            let zc = z.to_c64();
            points.push([zc.re, zc.im]);
            images.push(*v);
        }
    }
    let dropped = n - images.len();
    if images.is_empty() {
        return Err(VerifyError::AllDropped(n));
    }
    Ok(SampleSet { params, points, images, dropped, seed })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineVerification {
    pub predicted: bool,
    pub fit: FitResult,
    /// `None` when the fit is inconclusive.
    pub agree: Option<bool>,
    pub samples: usize,
    pub dropped: usize,
    pub seed: u64,
}

/// Predicts from the classification and checks against a fit of sampled images.
pub fn verify_line_with(
    w: &Weierstrass,
    class: &Classification,
    line: &RealLine,
    cfg: &VerifyCfg,
) -> Result<(LineVerification, SampleSet), VerifyError> {
    let predicted = class.contains_line(line);
    let samples = sample_line(line, w, Some(&class.spec), cfg)?;
    let fit = fit_vanishing_poly_with_height(&samples.images, cfg.max_deg, &cfg.tol, cfg.snap_height)?;
    let agree = match fit.verdict {
        Verdict::Inconclusive => None,
        v => Some(predicted == (v == Verdict::Vanishing)),
    };
    let out = LineVerification {
        predicted,
        fit,
        agree,
        samples: samples.images.len(),
        dropped: samples.dropped,
        seed: cfg.seed,
    };
    Ok((out, samples))
}

pub fn verify_line(spec: &TauSpec, line: &RealLine, cfg: &VerifyCfg) -> Result<LineVerification, VerifyError> {
    let class = classify(spec)?;
    let w = Weierstrass::from_spec(spec, &cfg.precision)?;
    Ok(verify_line_with(&w, &class, line, cfg)?.0)
}

/// Samples `W + σ` with `W = ℂ·dir` and fits a relation between
/// `u = ℘_Λ(z₁)` and `v = ℘_Λ̄(z₂)`.
pub fn verify_complex_direction(
    dir: (Complex64, Complex64),
    sigma: (Complex64, Complex64),
    w: &Weierstrass,
    wc: &Weierstrass,
    cfg: &VerifyCfg,
    max_deg: usize,
) -> Result<FitResult, VerifyError> {
    Ok(verify_complex_samples(dir, sigma, w, wc, cfg, max_deg)?.0)
}

/// As [`verify_complex_direction`], also returning the kept images `(u, v)`.
pub fn verify_complex_samples(
    dir: (Complex64, Complex64),
    sigma: (Complex64, Complex64),
    w: &Weierstrass,
    wc: &Weierstrass,
    cfg: &VerifyCfg,
    max_deg: usize,
) -> Result<(FitResult, Vec<[Complex64; 2]>), VerifyError> {
    if cfg.n == 0 {
        return Err(VerifyError::EmptyRequest);
    }
    let prec = w.prec();
    let lat = w.lattice();
    let size = dir.0.norm().max(dir.1.norm());
    let k = 2.0 * (lat.omega1.norm() + lat.omega2.norm()) / size;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let zetas: Vec<Complex64> =
        (0..cfg.n).map(|_| Complex64::new(rng.gen_range(-k..k), rng.gen_range(-k..k))).collect();
    let d0 = Complex::from_c64(dir.0, prec);
    let d1 = Complex::from_c64(dir.1, prec);
    let s0 = Complex::from_c64(sigma.0, prec);
    let s1 = Complex::from_c64(sigma.1, prec);
    let eval = |zeta: &Complex64| -> Option<[Complex64; 2]> {
        let z = Complex::from_c64(*zeta, prec);
        let u = w.wp(&(&s0 + &(&z * &d0))).value()?.to_c64();
        let v = wc.wp(&(&s1 + &(&z * &d1))).value()?.to_c64();
        (u.norm() <= cfg.clip && v.norm() <= cfg.clip).then_some([u, v])
    };
    #[cfg(feature = "parallel")]
    let vals: Vec<Option<[Complex64; 2]>> = {
        use rayon::prelude::*;
        zetas.par_iter().map(eval).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let vals: Vec<Option<[Complex64; 2]>> = zetas.iter().map(eval).collect();
    let pts: Vec<[Complex64; 2]> = vals.into_iter().flatten().collect();
    if pts.is_empty() {
        return Err(VerifyError::AllDropped(cfg.n));
    }
    let fit = fit_vanishing_poly_complex(&pts, max_deg, &cfg.tol, cfg.snap_height)?;
    Ok((fit, pts))
}

pub fn verify_complex_line(cl: &ComplexLine, w: &Weierstrass, cfg: &VerifyCfg) -> Result<FitResult, VerifyError> {
    let wc = w.conj()?;
    verify_complex_direction(cl.w2, cl.sigma, w, &wc, cfg, cfg.max_deg)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub torus_coverage: f64,
    /// Coverage of the first half of the samples.
    pub coverage_half: f64,
    pub closed_orbit: bool,
    pub k: usize,
    pub n: usize,
    pub fit: Option<FitResult>,
}

/// Fraction of the `k × k` cells of `ℂ/Λ` (in `(ω₁, ω₂)` coordinates) hit
/// by `n` equally spaced points of `line`, and the same for the first `n/2`.
pub fn torus_coverage(lat: &Lattice, line: &RealLine, k: usize, n: usize, seed: u64) -> (f64, f64) {
    if n == 0 || k == 0 {
        return (0.0, 0.0);
    }
    let length = (n as f64 / (2.0 * k as f64)).max(3.0) * lat.area().sqrt();
    let step = length / n as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t0 = rng.gen_range(0.0..step);
    let dir = line.direction();
    let mut hit = vec![false; k * k];
    let mut count = 0usize;
    let mut half = 0usize;
    for i in 0..n {
        let z = line.offset + dir * (t0 + i as f64 * step);
        let (a, b) = lat.coords(z);
        let (a, b) = (a.rem_euclid(1.0), b.rem_euclid(1.0));
        let ia = ((a * k as f64) as usize).min(k - 1);
        let ib = ((b * k as f64) as usize).min(k - 1);
        let cell = ia * k + ib;
        if !hit[cell] {
            hit[cell] = true;
            count += 1;
        }
        if i + 1 == n / 2 {
            half = count;
        }
    }
    let cells = (k * k) as f64;
    (count as f64 / cells, half as f64 / cells)
}

/// Coverage of the torus by a sampled line, plus an image fit when `with_fit`.
pub fn density_probe(
    w: &Weierstrass,
    spec: Option<&TauSpec>,
    line: &RealLine,
    k: usize,
    n: usize,
    cfg: &VerifyCfg,
    with_fit: bool,
) -> Result<DensityReport, VerifyError> {
    let lat = w.lattice();
    let (cov, cov_half) = torus_coverage(&lat, line, k, n, cfg.seed);
    let bound = 12.0 / k.max(1) as f64;
    let closed_orbit = n > 0 && cov < bound && cov_half < bound && cov - cov_half < 2.0 / k.max(1) as f64;
    let fit = if with_fit && n > 0 {
        let s = sample_line(line, w, spec, cfg)?;
        Some(fit_vanishing_poly_with_height(&s.images, cfg.max_deg, &cfg.tol, cfg.snap_height)?)
    } else {
        None
    };
    Ok(DensityReport { torus_coverage: cov, coverage_half: cov_half, closed_orbit, k, n, fit })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalflineReport {
    /// Smallest sampled `X` on the real axis.
    pub min_x_sampled: f64,
    /// The sampled minimum refined by Newton's method on `℘′ = 0`.
    pub min_x: f64,
    /// `℘(ω₁/2)`.
    pub wp_half: f64,
    pub matches_e_root: bool,
    pub all_above: bool,
    pub max_abs_imag: f64,
    /// Range of `X` on the line `ℝ + ω₂/2`.
    pub offset_interval: [f64; 2],
    /// `℘(ω₂/2)` and `℘((ω₁+ω₂)/2)`.
    pub offset_roots: [f64; 2],
    pub offset_within_roots: bool,
    pub samples: usize,
}

fn is_rectangular(spec: &TauSpec) -> bool {
    match &spec.mode {
        TauMode::ExactQuadratic { tau } => num_traits::Zero::is_zero(&tau.a),
        TauMode::Geodesic { triple, .. } => triple.c == 0 && triple.b == 0,
        TauMode::Numeric { x, .. } => *x == 0.0,
    }
}

/// On a rectangular lattice the real axis maps onto the half-line `[e₁, ∞)`
/// and `ℝ + ω₂/2` onto the interval between the other two roots.
pub fn halfline_check(w: &Weierstrass, spec: &TauSpec, n: usize, seed: u64) -> Result<HalflineReport, VerifyError> {
    if !is_rectangular(spec) {
        return Err(VerifyError::NotRectangular);
    }
    if n == 0 {
        return Err(VerifyError::EmptyRequest);
    }
    let prec = w.prec();
    let x_axis = RealLine::from_direction(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))?;
    let cfg = VerifyCfg { n, seed, ..VerifyCfg::default() };
    let s = sample_line(&x_axis, w, None, &cfg)?;
    let (imin, min_sampled) = s
        .images
        .iter()
        .enumerate()
        .map(|(i, v)| (i, v[0]))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty");
    let max_abs_imag = s.images.iter().map(|v| v[1].abs()).fold(0.0, f64::max);
    let g2 = w.g2();
    let mut t = Complex::from_f64(s.points[imin][0], 0.0, prec);
    for _ in 0..60 {
        let Some((x, y)) = w.wp_both(&t) else { break };
        let ypp = &x.square().mul_i64(6) - &g2.ldexp(-1);
        let step = &y / &ypp;
        t = &t - &step;
        if step.abs().to_f64() < 1e-30 {
            break;
        }
    }
    let min_x = w.wp(&t).value().map(|v| v.re.to_f64()).unwrap_or(min_sampled);
    let inv = w.invariants();
    let wp_half = inv.roots[0].re.to_f64();
    let matches_e_root = (min_x - wp_half).abs() < 1e-6;
    let all_above = s.images.iter().all(|v| v[0] >= min_x - 1e-6);

    let (_, omega2) = w.periods();
    let offset = omega2.ldexp(-1).to_c64();
    let shifted = x_axis.translate(offset);
    let so = sample_line(&shifted, w, None, &VerifyCfg { seed: seed ^ 0x5eed, ..cfg })?;
    let lo = so.images.iter().map(|v| v[0]).fold(f64::INFINITY, f64::min);
    let hi = so.images.iter().map(|v| v[0]).fold(f64::NEG_INFINITY, f64::max);
    let e2 = inv.roots[1].re.to_f64();
    let e3 = inv.roots[2].re.to_f64();
    let (rlo, rhi) = (e2.min(e3), e2.max(e3));
    let offset_within_roots = so
        .images
        .iter()
        .all(|v| v[0] >= rlo - 1e-6 && v[0] <= rhi + 1e-6 && v[1].abs() < 1e-6 * (1.0 + v[0].abs()));
    Ok(HalflineReport {
        min_x_sampled: min_sampled,
        min_x,
        wp_half,
        matches_e_root,
        all_above,
        max_abs_imag,
        offset_interval: [lo, hi],
        offset_roots: [e2, e3],
        offset_within_roots,
        samples: s.images.len(),
    })
}

/// JSON report for line and complex-line verification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted: Option<bool>,
    pub verdict: Verdict,
    pub degree: Option<usize>,
    pub sv_ratio: f64,
    pub sv_ratios: Vec<f64>,
    pub holdout_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_poly: Option<String>,
    pub coeffs: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coeffs_imag: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agree: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coverage: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_orbit: Option<bool>,
    pub samples: usize,
    pub dropped: usize,
    pub seed: u64,
}

impl VerifyReport {
    pub fn from_fit(fit: &FitResult, vars: (&str, &str), seed: u64) -> Self {
        VerifyReport {
            predicted: None,
            verdict: fit.verdict,
            degree: fit.degree,
            sv_ratio: fit.sv_ratio,
            sv_ratios: fit.sv_ratios.clone(),
            holdout_residual: fit.holdout_residual,
            exact_poly: fit.exact_string(vars.0, vars.1),
            coeffs: fit.coeffs.clone(),
            coeffs_imag: fit.coeffs_imag.clone(),
            agree: None,
            coverage: None,
            closed_orbit: None,
            samples: fit.n_points,
            dropped: 0,
            seed,
        }
    }

    pub fn from_line(v: &LineVerification) -> Self {
        VerifyReport {
            predicted: Some(v.predicted),
            agree: v.agree,
            dropped: v.dropped,
            ..VerifyReport::from_fit(&v.fit, ("X", "Y"), v.seed)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn f_and_g_are_inverse() {
        assert_eq!(f_map_c64(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)), (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)));
        let mut r = rng(3);
        for _ in 0..50 {
            let v = Complex64::new(r.gen_range(-5.0..5.0), r.gen_range(-5.0..5.0));
            let w = Complex64::new(r.gen_range(-5.0..5.0), r.gen_range(-5.0..5.0));
            let (a, b) = f_map_c64(v, w);
            let (v2, w2) = g_map_c64(a, b);
            assert!((v - v2).norm() < 1e-13 && (w - w2).norm() < 1e-13);
            let p = 200;
            let (a, b) = f_map(&Complex::from_c64(v, p), &Complex::from_c64(w, p));
            let (v3, w3) = g_map(&a, &b);
            assert!((v3.to_c64() - v).norm() < 1e-15 && (w3.to_c64() - w).norm() < 1e-15);
        }
    }

    #[test]
    fn synthetic_circle_and_parabola() {
        let mut r = rng(0);
        let circle: Vec<[f64; 2]> = (0..200)
            .map(|_| {
                let t: f64 = r.gen_range(0.0..std::f64::consts::TAU);
                [t.cos(), t.sin()]
            })
            .collect();
        let fit = fit_vanishing_poly(&circle, 2, &FitTolerances::default()).unwrap();
        assert_eq!(fit.verdict, Verdict::Vanishing);
        assert_eq!(fit.degree, Some(2));
        assert_eq!(fit.exact, Some(IntPoly { degree: 2, coeffs: vec![-1, 0, 0, 1, 0, 1] }));
        assert_eq!(fit.exact.as_ref().unwrap().to_string(), "X^2 + Y^2 - 1");

        let parab: Vec<[f64; 2]> = (0..200)
            .map(|_| {
                let x: f64 = r.gen_range(-1.0..1.0);
                [x, x * x]
            })
            .collect();
        let fit = fit_vanishing_poly(&parab, 2, &FitTolerances::default()).unwrap();
        assert_eq!(fit.degree, Some(2));
        assert_eq!(fit.exact.unwrap().to_string(), "X^2 - Y");
    }

    #[test]
    fn uniform_box_has_no_relation() {
        for seed in 0..20 {
            let mut r = rng(100 + seed);
            let pts: Vec<[f64; 2]> = (0..200).map(|_| [r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)]).collect();
            let fit = fit_vanishing_poly(&pts, 6, &FitTolerances::default()).unwrap();
            assert_eq!(fit.verdict, Verdict::NoRelation, "seed {seed}: {:?}", fit.sv_ratios);
            assert!(fit.sv_ratio > 1e-4);
        }
    }

    #[test]
    fn too_few_points() {
        let pts = vec![[0.0, 0.0]; 10];
        assert!(matches!(
            fit_vanishing_poly(&pts, 2, &FitTolerances::default()),
            Err(VerifyError::TooFewPoints { need: 24, got: 10, deg: 2 })
        ));
    }

    #[test]
    fn snapping() {
        let p = snap_integer_relation(&[0.0, 0.70710678, -0.70710678], 50).unwrap();
        assert_eq!(p.coeffs, vec![0, 1, -1]);
        assert_eq!(p.to_string(), "X - Y");
        let mut r = rng(9);
        for _ in 0..20 {
            let v: Vec<f64> = (0..6).map(|_| r.gen_range(-1.0..1.0)).collect();
            assert_eq!(snap_integer_relation(&v, 50), None);
        }
        assert_eq!(snap_integer_relation(&[1.0, 2.0], 5), None);
    }

    #[test]
    fn coverage_extremes() {
        let lat = Lattice::from_tau(&TauSpec::i());
        let diag = RealLine::from_direction(Complex64::new(1.0, 1.0), Complex64::new(0.013, 0.0)).unwrap();
        let (c, h) = torus_coverage(&lat, &diag, 16, 8192, 1);
        assert!(c < 0.2 && (c - h).abs() < 1e-12, "{c} {h}");
        let irr = RealLine::from_direction(Complex64::new(1.0, 2f64.sqrt()), Complex64::new(0.013, 0.0)).unwrap();
        let (c, _) = torus_coverage(&lat, &irr, 16, 8192, 1);
        assert!(c > 0.95, "{c}");
        assert_eq!(torus_coverage(&lat, &irr, 16, 0, 1), (0.0, 0.0));
    }

    #[test]
    fn empty_sample_request() {
        let w = Weierstrass::from_spec(&TauSpec::i(), &PrecisionCfg::default()).unwrap();
        let l = RealLine::from_direction(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)).unwrap();
        let cfg = VerifyCfg { n: 0, ..VerifyCfg::default() };
        assert_eq!(sample_line(&l, &w, None, &cfg), Err(VerifyError::EmptyRequest));
    }
}
