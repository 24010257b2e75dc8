//! Multiprecision Weierstrass invariants and `℘`, `℘′`.
//!
//! A lattice `Λ = ⟨ω₁, ω₂⟩` is written as `λ·⟨1, τ_r⟩` with `τ_r` in the
//! standard fundamental domain. `g2`, `g3` of `⟨1, τ_r⟩` come from the
//! Eisenstein q-series; `℘` is evaluated from the Laurent expansion at the
//! origin on a small disc, followed by repeated duplication. Values for `Λ`
//! follow from the homogeneity weights: `℘ ↦ λ⁻²`, `℘′ ↦ λ⁻³`, `g2 ↦ λ⁻⁴`,
//! `g3 ↦ λ⁻⁶`.
//!
//! The normalization is `℘′² = 4℘³ − g2·℘ − g3`; a real model
//! `Y² = X³ + aX + b` is obtained with `X = ℘`, `Y = ℘′/2`, `a = −g2/4`,
//! `b = −g3/4`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{normalize_tau, Lattice, LatticeError, TauSpec};
use crate::mp::{bits_for_digits, Complex, Real};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeierstrassError {
    #[error("series would need {needed} terms, cap is {cap}")]
    PrecisionCapExceeded { needed: usize, cap: usize },
    #[error("argument lies in a pole neighborhood")]
    Pole,
    #[error("precision must be at least 15 digits, got {0}")]
    PrecisionTooLow(u32),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Evaluation settings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrecisionCfg {
    /// Decimal working precision.
    pub digits: u32,
    pub series_terms_cap: usize,
    /// Pole neighborhood radius as a fraction of the shortest lattice vector.
    pub pole_fraction: f64,
}

impl Default for PrecisionCfg {
    fn default() -> Self {
        PrecisionCfg { digits: 40, series_terms_cap: 4000, pole_fraction: 0.05 }
    }
}

impl PrecisionCfg {
    pub fn with_digits(digits: u32) -> Self {
        PrecisionCfg { digits, ..Default::default() }
    }

    pub fn bits(&self) -> usize {
        bits_for_digits(self.digits)
    }

    /// `10^(5 − P)`, the residual budget for identity checks.
    pub fn identity_tolerance(&self) -> f64 {
        10f64.powi(5 - self.digits as i32)
    }
}

/// `g2`, `g3`, discriminant, `j` and the roots of `4x³ − g2·x − g3`.
#[derive(Clone, Debug)]
pub struct LatticeInvariants {
    pub g2: Complex,
    pub g3: Complex,
    pub disc: Complex,
    pub j: Complex,
    /// `℘(ω₁/2)`, `℘(ω₂/2)`, `℘((ω₁+ω₂)/2)`.
    pub roots: [Complex; 3],
}

#[derive(Clone, Debug, PartialEq)]
pub enum WpValue {
    Value(Complex),
    Pole,
}

impl WpValue {
    pub fn value(&self) -> Option<&Complex> {
        match self {
            WpValue::Value(v) => Some(v),
            WpValue::Pole => None,
        }
    }

    pub fn is_pole(&self) -> bool {
        matches!(self, WpValue::Pole)
    }
}

/// Laurent radius on the reduced lattice, whose shortest vector is 1.
const LAURENT_RADIUS: f64 = 0.25;

/// Per-lattice evaluation state; immutable after construction.
#[derive(Clone, Debug)]
pub struct Weierstrass {
    cfg: PrecisionCfg,
    prec: usize,
    omega1: Complex,
    omega2: Complex,
    /// `Λ = λ·⟨1, τ_r⟩`
    lambda: Complex,
    lambda_inv: Complex,
    tau_r: Complex,
    g2r: Complex,
    g3r: Complex,
    /// Laurent coefficients `c_k`, k ≥ 2, of `℘ − z⁻²` on `⟨1, τ_r⟩`
    coeffs: Vec<Complex>,
    pole_radius: f64,
}

impl Weierstrass {
    pub fn from_spec(spec: &TauSpec, cfg: &PrecisionCfg) -> Result<Self, WeierstrassError> {
        let prec = cfg.bits();
        Weierstrass::from_periods(Complex::one(prec), spec.tau_mp(prec), cfg)
    }

    pub fn from_lattice(lat: &Lattice, cfg: &PrecisionCfg) -> Result<Self, WeierstrassError> {
        if let Some(spec) = &lat.tau_spec {
            let w = Weierstrass::from_spec(spec, cfg)?;
            if (lat.omega1 - Complex64::new(1.0, 0.0)).norm() == 0.0 {
                return Ok(w);
            }
        }
        let prec = cfg.bits();
        Weierstrass::from_periods(Complex::from_c64(lat.omega1, prec), Complex::from_c64(lat.omega2, prec), cfg)
    }

    pub fn from_periods(omega1: Complex, omega2: Complex, cfg: &PrecisionCfg) -> Result<Self, WeierstrassError> {
        if cfg.digits < 15 {
            return Err(WeierstrassError::PrecisionTooLow(cfg.digits));
        }
        let prec = cfg.bits();
        let omega1 = omega1.with_prec(prec);
        let mut omega2 = omega2.with_prec(prec);
        let tau0 = &omega2 / &omega1;
        if tau0.im.abs().to_f64() < 1e-300 || !tau0.is_finite() {
            return Err(LatticeError::DegenerateLattice.into());
        }
        if tau0.im.is_negative() {
            omega2 = -omega2;
        }
        let tau0 = &omega2 / &omega1;
        let (tau_r, m) = normalize_tau(&tau0)?;
        let lambda = &omega1 * &(tau0.mul_i64(m.c) + Complex::from_i64(m.d, 0, prec));
        let lambda_inv = lambda.recip();

        let (g2r, g3r) = eisenstein_invariants(&tau_r)?;
        let n_terms = laurent_terms(prec, LAURENT_RADIUS);
        if n_terms > cfg.series_terms_cap {
            return Err(WeierstrassError::PrecisionCapExceeded { needed: n_terms, cap: cfg.series_terms_cap });
        }
        let coeffs = laurent_coefficients(&g2r, &g3r, n_terms);

        let lat = Lattice::new(omega1.to_c64(), omega2.to_c64())?;
        let pole_radius = cfg.pole_fraction * lat.shortest_vector_len();
        Ok(Weierstrass { cfg: *cfg, prec, omega1, omega2, lambda, lambda_inv, tau_r, g2r, g3r, coeffs, pole_radius })
    }

    /// The same evaluator for the complex-conjugate lattice `Λ̄`.
    pub fn conj(&self) -> Result<Self, WeierstrassError> {
        Weierstrass::from_periods(self.omega1.conj(), self.omega2.conj(), &self.cfg)
    }

    /// Evaluator for `ρ·Λ`.
    pub fn scaled(&self, rho: &Complex) -> Result<Self, WeierstrassError> {
        Weierstrass::from_periods(&self.omega1 * rho, &self.omega2 * rho, &self.cfg)
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn cfg(&self) -> &PrecisionCfg {
        &self.cfg
    }

    pub fn pole_radius(&self) -> f64 {
        self.pole_radius
    }

    pub fn periods(&self) -> (&Complex, &Complex) {
        (&self.omega1, &self.omega2)
    }

    pub fn lattice(&self) -> Lattice {
        Lattice::new(self.omega1.to_c64(), self.omega2.to_c64()).expect("validated at construction")
    }

    /// Reduced parameter `τ_r` and scale `λ` with `Λ = λ·⟨1, τ_r⟩`.
    pub fn reduced(&self) -> (&Complex, &Complex) {
        (&self.tau_r, &self.lambda)
    }

    pub fn g2(&self) -> Complex {
        &self.g2r * &self.lambda_inv.powi(4)
    }

    pub fn g3(&self) -> Complex {
        &self.g3r * &self.lambda_inv.powi(6)
    }

    pub fn invariants(&self) -> LatticeInvariants {
        let g2 = self.g2();
        let g3 = self.g3();
        let g2c = g2.powi(3);
        let disc = &g2c - &g3.square().mul_i64(27);
        let j = &g2c.mul_i64(1728) / &disc;
        let half = |z: Complex| -> Complex {
            self.wp(&z.ldexp(-1)).value().cloned().expect("half-periods are not poles")
        };
        let roots = [
            half(self.omega1.clone()),
            half(self.omega2.clone()),
            half(&self.omega1 + &self.omega2),
        ];
        LatticeInvariants { g2, g3, disc, j, roots }
    }

    /// Reduces `w` (in reduced-lattice units) to the nearest-lattice-point representative.
    fn reduce_reduced(&self, w: &Complex) -> Complex {
        let beta = &w.im / &self.tau_r.im;
        let alpha = &w.re - &(&beta * &self.tau_r.re);
        let (m, n) = (alpha.round_half_to_zero(), beta.round_half_to_zero());
        let p = self.prec;
        let mut w0 = w - &(Complex::from_i64(m, 0, p) + self.tau_r.mul_i64(n));
        // pick the closest of the neighboring lattice points, keeping the
        // rounded one on ties
        let w0c = w0.to_c64();
        let tr = self.tau_r.to_c64();
        let mut best = (0i64, 0i64, w0c.norm());
        for dm in -1..=1i64 {
            for dn in -1..=1i64 {
                let d = (w0c - (dm as f64 + tr * dn as f64)).norm();
                if d < best.2 * (1.0 - 1e-12) {
                    best = (dm, dn, d);
                }
            }
        }
        if best.0 != 0 || best.1 != 0 {
            w0 = &w0 - &(Complex::from_i64(best.0, 0, p) + self.tau_r.mul_i64(best.1));
        }
        w0
    }

    /// Reduced point `w0` and number of halvings to bring it inside the
    /// Laurent disc, or `None` inside a pole neighborhood.
    fn prepare(&self, z: &Complex) -> Option<(Complex, i32, f64)> {
        let z = z.with_prec(self.prec);
        let w = &z * &self.lambda_inv;
        let w0 = self.reduce_reduced(&w);
        let r = w0.abs().to_f64();
        if r * self.lambda.abs().to_f64() < self.pole_radius || r == 0.0 {
            return None;
        }
        let mut halvings = 0i32;
        let mut rr = r;
        while rr > LAURENT_RADIUS {
            rr *= 0.5;
            halvings += 1;
        }
        Some((w0.ldexp(-halvings), halvings, rr))
    }

    /// `(℘(z), ℘′(z))`, or `None` inside a pole neighborhood.
    pub fn wp_both(&self, z: &Complex) -> Option<(Complex, Complex)> {
        let (u, halvings, rr) = self.prepare(z)?;
        let (mut x, mut y) = self.laurent(&u, rr);
        let half_g2 = self.g2r.ldexp(-1);
        for _ in 0..halvings {
            let slope = &(&x.square().mul_i64(6) - &half_g2) / &y;
            let x2 = &slope.square().ldexp(-2) - &x.ldexp(1);
            let y2 = -(&(&slope * &(&x2 - &x)) + &y);
            x = x2;
            y = y2;
        }
        let li2 = self.lambda_inv.square();
        let li3 = &li2 * &self.lambda_inv;
        Some((&x * &li2, &y * &li3))
    }

    /// `℘(z)` alone, doubling with
    /// `℘(2u) = ((℘² + g2/4)² + 2g3℘) / (4℘³ − g2℘ − g3)`.
    fn wp_only(&self, z: &Complex) -> Option<Complex> {
        let (u, halvings, rr) = self.prepare(z)?;
        let mut x = self.laurent_x(&u, rr);
        let quarter_g2 = self.g2r.ldexp(-2);
        let two_g3 = self.g3r.ldexp(1);
        for _ in 0..halvings {
            let x2 = x.square();
            let num = &(&x2 + &quarter_g2).square() + &(&two_g3 * &x);
            let den = &(&x * &(&x2.ldexp(2) - &self.g2r)) - &self.g3r;
            x = &num / &den;
        }
        Some(&x * &self.lambda_inv.square())
    }

    /// Laurent expansion of `℘` alone; see [`Self::laurent`].
    fn laurent_x(&self, u: &Complex, r: f64) -> Complex {
        let n = laurent_terms(self.prec, r.max(1e-300)).min(self.coeffs.len());
        let v = u.square();
        let mut s = Complex::zero(self.prec);
        for c in self.coeffs[..n].iter().rev() {
            s = &(&s * &v) + c;
        }
        &v.recip() + &(&s * &v)
    }

    /// Laurent expansion of `(℘, ℘′)` on `⟨1, τ_r⟩` for `|u| = r ≤ LAURENT_RADIUS`.
    fn laurent(&self, u: &Complex, r: f64) -> (Complex, Complex) {
        let n = laurent_terms(self.prec, r.max(1e-300)).min(self.coeffs.len());
        let v = u.square();
        let p = self.prec;
        // S = Σ c_k v^{k−1},  T = Σ (2k−2) c_k v^{k−2},  k = 2..n+1
        let mut s = Complex::zero(p);
        let mut t = Complex::zero(p);
        for idx in (0..n).rev() {
            let k = idx as i64 + 2;
            s = &(&s * &v) + &self.coeffs[idx];
            t = &(&t * &v) + &self.coeffs[idx].mul_i64(2 * k - 2);
        }
        let s = &s * &v;
        let vinv = v.recip();
        let wp = &vinv + &s;
        let wpp = &(&vinv * &u.recip()).mul_i64(-2) + &(u * &t);
        (wp, wpp)
    }

    pub fn wp(&self, z: &Complex) -> WpValue {
        match self.wp_only(z) {
            Some(v) => WpValue::Value(v),
            None => WpValue::Pole,
        }
    }

    pub fn wp_prime(&self, z: &Complex) -> WpValue {
        match self.wp_both(z) {
            Some((_, d)) => WpValue::Value(d),
            None => WpValue::Pole,
        }
    }

    /// `(Re ℘(x+iy), Im ℘(x+iy))`, or `None` at a pole.
    pub fn p_map(&self, x: &Real, y: &Real) -> Option<(Real, Real)> {
        let z = Complex::new(x.clone(), y.clone());
        self.wp(&z).value().map(|v| (v.re.clone(), v.im.clone()))
    }

    pub fn p_map_f64(&self, x: f64, y: f64) -> Option<(f64, f64)> {
        let z = Complex::from_f64(x, y, self.prec);
        self.wp(&z).value().map(|v| (v.re.to_f64(), v.im.to_f64()))
    }

    /// `|℘′² − (4℘³ − g2℘ − g3)| / (1 + |℘|³)`.
    pub fn ode_residual(&self, z: &Complex) -> Option<f64> {
        let (x, y) = self.wp_both(z)?;
        let rhs = &(&x.powi(3).mul_i64(4) - &(&self.g2() * &x)) - &self.g3();
        let res = (&y.square() - &rhs).abs().to_f64();
        Some(res / (1.0 + x.abs().to_f64().powi(3)))
    }
}

/// Terms of the Laurent series needed at radius `r` (shortest vector 1).
fn laurent_terms(prec: usize, r: f64) -> usize {
    let per_term = -2.0 * r.min(LAURENT_RADIUS).log2();
    ((prec as f64 + 24.0) / per_term).ceil() as usize + 4
}

/// `c₂ = g2/20`, `c₃ = g3/28`,
/// `c_k = 3/((2k+1)(k−3)) · Σ_{m=2}^{k−2} c_m c_{k−m}`.
fn laurent_coefficients(g2: &Complex, g3: &Complex, n: usize) -> Vec<Complex> {
    let mut c: Vec<Complex> = Vec::with_capacity(n);
    c.push(g2.div_i64(20));
    if n > 1 {
        c.push(g3.div_i64(28));
    }
    for k in 4..(n as i64 + 2) {
        let mut acc = Complex::zero(g2.prec());
        for m in 2..=(k - 2) {
            acc = &acc + &(&c[(m - 2) as usize] * &c[(k - m - 2) as usize]);
        }
        c.push(acc.mul_i64(3).div_i64((2 * k + 1) * (k - 3)));
    }
    c.truncate(n);
    c
}

/// `(g2, g3)` of `⟨1, τ⟩` via `E4`, `E6` in Lambert form:
/// `g2 = (4π⁴/3)(1 + 240 Σ n³qⁿ/(1−qⁿ))`, `g3 = (8π⁶/27)(1 − 504 Σ n⁵qⁿ/(1−qⁿ))`.
pub fn eisenstein_invariants(tau: &Complex) -> Result<(Complex, Complex), WeierstrassError> {
    let p = tau.prec();
    let pi = Real::pi(p);
    let two_pi_i_tau = tau.mul_i().scale(&pi.mul_i64(2));
    let q = two_pi_i_tau.exp();
    let qabs = q.abs().to_f64();
    if !(qabs < 1.0) {
        return Err(LatticeError::NotInUpperHalfPlane(format!("{:?}", tau.to_c64())).into());
    }
    let eps = 2f64.powi(-(p as i32) - 8);
    let mut e4 = Complex::zero(p);
    let mut e6 = Complex::zero(p);
    let one = Complex::one(p);
    let mut qn = q.clone();
    let mut n: i64 = 1;
    loop {
        let lam = &qn / &(&one - &qn);
        e4 = &e4 + &lam.mul_i64(n * n * n);
        e6 = &e6 + &lam.mul_i64(n * n * n * n * n);
        let bound = qabs.powi(n as i32) * (n as f64).powi(5);
        if bound < eps || n > 100_000 {
            break;
        }
        n += 1;
        qn = &qn * &q;
    }
    let e4 = &one + &e4.mul_i64(240);
    let e6 = &one - &e6.mul_i64(504);
    let pi2 = pi.square();
    let pi4 = pi2.square();
    let pi6 = &pi4 * &pi2;
    let g2 = e4.scale(&pi4.mul_i64(4).div_i64(3));
    let g3 = e6.scale(&pi6.mul_i64(8).div_i64(27));
    Ok((g2, g3))
}

pub fn invariants(spec: &TauSpec, cfg: &PrecisionCfg) -> Result<LatticeInvariants, WeierstrassError> {
    Ok(Weierstrass::from_spec(spec, cfg)?.invariants())
}

/// `|℘_Λ(ρ⁻¹z) − ρ²℘_{ρΛ}(z)| / max(1, |℘_Λ(ρ⁻¹z)|)`.
pub fn homogeneity_check(z: &Complex, rho: &Complex, spec: &TauSpec, cfg: &PrecisionCfg) -> Result<f64, WeierstrassError> {
    let base = Weierstrass::from_spec(spec, cfg)?;
    let scaled = base.scaled(rho)?;
    let lhs = base.wp(&(z / rho));
    let rhs = scaled.wp(z);
    match (lhs, rhs) {
        (WpValue::Value(a), WpValue::Value(b)) => {
            let b = &b * &rho.square();
            let mag = a.abs().to_f64().max(1.0);
            Ok((&a - &b).abs().to_f64() / mag)
        }
        _ => Err(WeierstrassError::Pole),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, rat_int, Triple};

    fn cfg() -> PrecisionCfg {
        PrecisionCfg::default()
    }

    fn tol() -> f64 {
        cfg().identity_tolerance()
    }

    fn rel(a: &Complex, b: &Complex) -> f64 {
        (a - b).abs().to_f64() / a.abs().to_f64().max(1.0)
    }

    #[test]
    fn symmetric_lattices_kill_invariants() {
        let w = Weierstrass::from_spec(&TauSpec::i(), &cfg()).unwrap();
        let inv = w.invariants();
        assert!(inv.g3.abs().to_f64() < 1e-30);
        assert!(inv.g2.re.to_f64() > 0.0 && inv.g2.im.abs().to_f64() < 1e-30);
        assert!((inv.j.re.to_f64() - 1728.0).abs() < 1e-25);

        let rho = TauSpec::exact_quadratic(rat(1, 2), rat(1, 2), -3).unwrap();
        let inv = invariants(&rho, &cfg()).unwrap();
        assert!(inv.g2.abs().to_f64() < 1e-30);
        assert!(inv.j.abs().to_f64() < 1e-25);
    }

    #[test]
    fn roots_sum_to_zero_and_ode_holds() {
        for spec in [
            TauSpec::i(),
            TauSpec::exact_quadratic(rat(1, 2), rat(1, 2), -7).unwrap(),
            TauSpec::numeric(0.37, 1.21, None).unwrap(),
        ] {
            let w = Weierstrass::from_spec(&spec, &cfg()).unwrap();
            let inv = w.invariants();
            let sum = &(&inv.roots[0] + &inv.roots[1]) + &inv.roots[2];
            assert!(sum.abs().to_f64() < tol());
            let p = w.prec();
            for (re, im) in [(0.1, 0.2), (0.37, -0.6), (2.3, 4.1), (-0.49, 0.51)] {
                let r = w.ode_residual(&Complex::from_f64(re, im, p)).unwrap();
                assert!(r < tol(), "ODE residual {r} at {re}+{im}i");
            }
        }
    }

    #[test]
    fn periodicity_and_evenness() {
        let spec = TauSpec::numeric(0.37, 1.21, None).unwrap();
        let w = Weierstrass::from_spec(&spec, &cfg()).unwrap();
        let p = w.prec();
        let z = Complex::from_f64(0.3, 0.45, p);
        let base = w.wp(&z).value().cloned().unwrap();
        let tau = spec.tau_mp(p);
        for shifted in [&z + &Complex::one(p), &z + &tau, -&z, &(&z - &tau.mul_i64(3)) + &Complex::from_i64(2, 0, p)] {
            let v = w.wp(&shifted).value().cloned().unwrap();
            assert!(rel(&base, &v) < tol());
        }
        let d = w.wp_prime(&z).value().cloned().unwrap();
        let dm = w.wp_prime(&-&z).value().cloned().unwrap();
        assert!(rel(&d, &-dm) < tol());
    }

    #[test]
    fn half_period_is_critical() {
        let w = Weierstrass::from_spec(&TauSpec::i(), &cfg()).unwrap();
        let (x, y) = w.wp_both(&Complex::from_f64(0.5, 0.0, w.prec())).unwrap();
        assert!(y.abs().to_f64() < 1e-30);
        assert!(x.im.abs().to_f64() < 1e-35 && x.re.to_f64() > 0.0);
    }

    #[test]
    fn conjugation_identity() {
        let spec = TauSpec::geodesic(Triple::new(2, 1, 0), 0.3, true).unwrap();
        let w = Weierstrass::from_spec(&spec, &cfg()).unwrap();
        let wc = w.conj().unwrap();
        let p = w.prec();
        for (re, im) in [(0.1, 0.2), (0.77, -0.3), (-1.3, 0.9)] {
            let z = Complex::from_f64(re, im, p);
            let a = w.wp(&z).value().cloned().unwrap().conj();
            let b = wc.wp(&z.conj()).value().cloned().unwrap();
            assert!(rel(&a, &b) < tol());
        }
    }

    #[test]
    fn real_on_axes_for_self_conjugate_lattices() {
        let spec = TauSpec::geodesic(Triple::new(0, 0, 1), 1.7, true).unwrap();
        let w = Weierstrass::from_spec(&spec, &cfg()).unwrap();
        let (_, im) = w.p_map_f64(0.3, 0.0).unwrap();
        assert!(im.abs() < tol());
        let (_, im) = w.p_map_f64(0.0, 0.77).unwrap();
        assert!(im.abs() < tol());
        assert!(w.p_map_f64(1.0, 0.0).is_none());
        assert!(w.p_map_f64(0.01, 1.7).is_none());
    }

    #[test]
    fn homogeneity_examples() {
        let c = cfg();
        let p = c.bits();
        let spec = TauSpec::i();
        let z = Complex::from_f64(0.31, 0.12, p);
        assert!(homogeneity_check(&z, &Complex::one(p), &spec, &c).unwrap() < 1e-40);
        assert!(homogeneity_check(&z, &Complex::from_i64(2, 0, p), &spec, &c).unwrap() < tol());
        assert!(homogeneity_check(&z, &Complex::from_i64(1, 1, p), &spec, &c).unwrap() < tol());
    }

    #[test]
    fn invariant_weights_under_scaling() {
        let c = cfg();
        let w = Weierstrass::from_spec(&TauSpec::numeric(-0.2, 1.4, None).unwrap(), &c).unwrap();
        let lam = Complex::from_f64(0.7, -1.3, w.prec());
        let ws = w.scaled(&lam).unwrap();
        let g2 = &ws.g2() * &lam.powi(4);
        let g3 = &ws.g3() * &lam.powi(6);
        assert!(rel(&w.g2(), &g2) < tol());
        assert!(rel(&w.g3(), &g3) < tol());
    }

    #[test]
    fn low_precision_is_rejected() {
        let c = PrecisionCfg::with_digits(10);
        assert!(matches!(
            Weierstrass::from_spec(&TauSpec::i(), &c),
            Err(WeierstrassError::PrecisionTooLow(10))
        ));
        let c = PrecisionCfg { series_terms_cap: 5, ..Default::default() };
        assert!(matches!(
            Weierstrass::from_spec(&TauSpec::i(), &c),
            Err(WeierstrassError::PrecisionCapExceeded { .. })
        ));
        let _ = rat_int(0);
    }
}
