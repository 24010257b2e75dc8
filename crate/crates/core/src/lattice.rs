//! Lattices `⟨1, τ⟩`, the isogeny group `Isog(Λ, Λ̄)`, CM detection and the
//! special geodesic through τ.
//!
//! For `Λ = ⟨1, τ⟩`, an element `γ = cτ̄ + d` lies in `Isog(Λ, Λ̄)` exactly
//! when `γτ = −dτ̄ + b` for some integer `b`, i.e. when
//! `c·s + 2d·x − b = 0` with `x = Re τ` and `s = |τ|²`. Everything here is
//! driven by the integer solutions `(b, c, d)` of that relation; they are
//! only computed from inputs whose rational structure is actually known.

use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{
    self, rat, rat_int, rational_sqrt, recognize_rational, squarefree_decomposition, ExactError,
    IntKernelBasis, QuadElem, Rat, Triple,
};
use crate::mp::{Complex, Real};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error("τ = {0} is not in the upper half-plane")]
    NotInUpperHalfPlane(String),
    #[error("triple {0} does not describe a geodesic of the upper half-plane")]
    InvalidGeodesic(Triple),
    #[error("position {0} is not a point of the declared geodesic")]
    PositionOffGeodesic(f64),
    #[error("undecidable from floats: {0}")]
    UndecidableFromFloats(String),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("degenerate lattice: periods are linearly dependent over ℝ")]
    DegenerateLattice,
    #[error("not a sublattice")]
    NotSublattice,
    #[error("invalid τ specification: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// How τ was specified, which fixes what can be decided about it exactly.
#[derive(Clone, Debug, PartialEq)]
pub enum TauMode {
    /// τ = a + b√d with d < 0, b > 0.
    ExactQuadratic { tau: QuadElem },
    /// A point of the geodesic `c(x²+y²) + 2dx − b = 0`: `position` is `y`
    /// on a vertical geodesic and the angle θ ∈ (0, π) on a semicircle.
    /// `generic` asserts that the triple is the only relation τ satisfies.
    Geodesic { triple: Triple, position: f64, generic: bool },
    /// Floating τ, optionally with a certified basis of its relations.
    Numeric { x: f64, y: f64, certificate: Option<IntKernelBasis> },
}

/// A lattice parameter τ ∈ ℍ with its provenance and cached `x`, `y`, `s`.
#[derive(Clone, Debug, PartialEq)]
pub struct TauSpec {
    pub mode: TauMode,
    pub x: f64,
    pub y: f64,
    pub s: f64,
}

impl TauSpec {
    pub fn exact_quadratic(a: Rat, b: Rat, d: i64) -> Result<Self, LatticeError> {
        let tau = QuadElem::new(a, b, d)?;
        if d > 0 || !tau.b.is_positive() {
            return Err(LatticeError::NotInUpperHalfPlane(tau.to_string()));
        }
        let z = tau.to_c64();
        Ok(TauSpec::cached(TauMode::ExactQuadratic { tau }, z))
    }

    /// τ = i.
    pub fn i() -> Self {
        TauSpec::exact_quadratic(rat_int(0), rat_int(1), -1).expect("valid")
    }

    pub fn geodesic(triple: Triple, position: f64, generic: bool) -> Result<Self, LatticeError> {
        if triple.is_zero() {
            return Err(LatticeError::InvalidGeodesic(triple));
        }
        let triple = triple.primitive();
        if triple.c == 0 {
            if triple.d == 0 {
                return Err(LatticeError::InvalidGeodesic(triple));
            }
            if !(position > 0.0 && position.is_finite()) {
                return Err(LatticeError::PositionOffGeodesic(position));
            }
        } else {
            if triple.abs_sq() <= 0 {
                return Err(LatticeError::InvalidGeodesic(triple));
            }
            if !(position > 0.0 && position < std::f64::consts::PI) {
                return Err(LatticeError::PositionOffGeodesic(position));
            }
        }
        let mode = TauMode::Geodesic { triple, position, generic };
        let z = geodesic_point(&triple, position, 128).to_c64();
        let spec = TauSpec::cached(mode, z);
        if generic {
            spec.warn_if_special();
        }
        Ok(spec)
    }

    pub fn numeric(x: f64, y: f64, certificate: Option<IntKernelBasis>) -> Result<Self, LatticeError> {
        if !(y > 0.0 && y.is_finite() && x.is_finite()) {
            return Err(LatticeError::NotInUpperHalfPlane(format!("{x} + {y}i")));
        }
        let certificate = match certificate {
            None => None,
            Some(cert) => {
                let basis = IntKernelBasis::from_rows(&cert.rows)?;
                if basis.rank != cert.rows.len() || basis.rank > 2 {
                    return Err(LatticeError::InvalidCertificate(
                        "rows must be linearly independent and at most two".into(),
                    ));
                }
                let s = x * x + y * y;
                for row in &basis.rows {
                    let scale = 1.0 + (row.c as f64 * s).abs() + (row.d as f64 * x).abs() + (row.b as f64).abs();
                    if row.residual(x, s).abs() > 1e-9 * scale {
                        return Err(LatticeError::InvalidCertificate(format!(
                            "{row} is not a relation of τ = {x} + {y}i"
                        )));
                    }
                }
                Some(basis)
            }
        };
        Ok(TauSpec::cached(TauMode::Numeric { x, y, certificate }, Complex64::new(x, y)))
    }

    fn cached(mode: TauMode, z: Complex64) -> Self {
        TauSpec { mode, x: z.re, y: z.im, s: z.norm_sqr() }
    }

    fn warn_if_special(&self) {
        let x = recognize_rational(self.x, 1_000_000).ok().flatten();
        let s = recognize_rational(self.s, 1_000_000).ok().flatten();
        if x.is_some() && s.is_some() {
            log::warn!(
                "geodesic point τ = {} + {}i looks like a CM point (x and |τ|² recognized as rationals); \
                 treating it as generic as declared",
                self.x,
                self.y
            );
        }
    }

    /// τ at the given binary precision, exact up to rounding of the inputs.
    pub fn tau_mp(&self, prec: usize) -> Complex {
        match &self.mode {
            TauMode::ExactQuadratic { tau } => tau.to_complex(prec),
            TauMode::Geodesic { triple, position, .. } => geodesic_point(triple, *position, prec),
            TauMode::Numeric { x, y, .. } => Complex::from_f64(*x, *y, prec),
        }
    }

    pub fn tau(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    /// τ̄ reflected back into ℍ as the parameter of `Λ̄ = ⟨1, −τ̄⟩`.
    pub fn conj_lattice_tau(&self) -> Complex64 {
        Complex64::new(-self.x, self.y)
    }

    /// Basis of the integer relations `c·s + 2d·x − b = 0` satisfied by τ.
    ///
    /// Refuses to guess from floats: numeric input needs a certificate and
    /// geodesic input needs the genericity flag.
    pub fn relation_basis(&self) -> Result<IntKernelBasis, LatticeError> {
        match &self.mode {
            TauMode::ExactQuadratic { tau } => {
                let d = tau.d;
                let two_x = QuadElem::rational(tau.trace(), d);
                let s = QuadElem::rational(tau.norm(), d);
                Ok(exactnum::relation_kernel(&s, &two_x)?)
            }
            TauMode::Geodesic { triple, generic, .. } => {
                if *generic {
                    Ok(IntKernelBasis::from_rows(&[*triple])?)
                } else {
                    Err(LatticeError::UndecidableFromFloats(
                        "geodesic point not declared generic; its relation lattice may have rank 2".into(),
                    ))
                }
            }
            TauMode::Numeric { certificate, .. } => certificate.clone().ok_or_else(|| {
                LatticeError::UndecidableFromFloats(
                    "numeric τ without a relation certificate; floats cannot decide isogeny".into(),
                )
            }),
        }
    }

    /// Exact `(2x, s)` when τ is imaginary quadratic.
    pub fn exact_trace_norm(&self) -> Result<Option<(Rat, Rat)>, LatticeError> {
        if let TauMode::ExactQuadratic { tau } = &self.mode {
            return Ok(Some((tau.trace(), tau.norm())));
        }
        let basis = self.relation_basis()?;
        if basis.rank < 2 {
            return Ok(None);
        }
        let (r1, r2) = (basis.rows[0], basis.rows[1]);
        let det = r1.c * r2.d - r2.c * r1.d;
        let s = rat(r1.b * r2.d - r2.b * r1.d, det);
        let two_x = rat(r1.c * r2.b - r2.c * r1.b, det);
        Ok(Some((two_x, s)))
    }
}

/// A rational JSON field: an integer or a string such as `"-3/4"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatJson {
    Int(i64),
    Text(String),
}

impl RatJson {
    fn to_rat(&self) -> Result<Rat, LatticeError> {
        match self {
            RatJson::Int(n) => Ok(rat_int(*n)),
            RatJson::Text(t) => t
                .trim()
                .parse::<Rat>()
                .map_err(|e| LatticeError::InvalidSpec(format!("cannot parse rational {t:?}: {e}"))),
        }
    }

    fn from_rat(q: &Rat) -> Self {
        match (q.is_integer(), q.to_integer().to_i64()) {
            (true, Some(n)) => RatJson::Int(n),
            _ => RatJson::Text(q.to_string()),
        }
    }
}

/// JSON form of [`TauSpec`]:
/// `{"mode":"exact_quadratic","p":…,"q":…,"d":…}` for `τ = p + q√d`,
/// `{"mode":"geodesic","b":…,"c":…,"d":…,"position":…,"generic":true}`,
/// `{"mode":"numeric","x":…,"y":…,"certificate":[[b,c,d],…]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum TauSpecJson {
    ExactQuadratic {
        p: RatJson,
        q: RatJson,
        d: i64,
    },
    Geodesic {
        b: i64,
        c: i64,
        d: i64,
        position: f64,
        #[serde(default)]
        generic: bool,
    },
    Numeric {
        x: f64,
        y: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        certificate: Option<Vec<[i64; 3]>>,
    },
}

impl TryFrom<&TauSpecJson> for TauSpec {
    type Error = LatticeError;

    fn try_from(j: &TauSpecJson) -> Result<Self, LatticeError> {
        match j {
            TauSpecJson::ExactQuadratic { p, q, d } => TauSpec::exact_quadratic(p.to_rat()?, q.to_rat()?, *d),
            TauSpecJson::Geodesic { b, c, d, position, generic } => {
                TauSpec::geodesic(Triple::new(*b, *c, *d), *position, *generic)
            }
            TauSpecJson::Numeric { x, y, certificate } => {
                let cert = match certificate {
                    None => None,
                    Some(rows) => {
                        let rows: Vec<Triple> = rows.iter().map(|r| Triple::new(r[0], r[1], r[2])).collect();
                        Some(IntKernelBasis::from_rows(&rows)?)
                    }
                };
                TauSpec::numeric(*x, *y, cert)
            }
        }
    }
}

impl TauSpec {
    pub fn from_json(text: &str) -> Result<Self, LatticeError> {
        let j: TauSpecJson = serde_json::from_str(text).map_err(|e| LatticeError::InvalidSpec(e.to_string()))?;
        TauSpec::try_from(&j)
    }

    pub fn to_json(&self) -> TauSpecJson {
        match &self.mode {
            TauMode::ExactQuadratic { tau } => {
                TauSpecJson::ExactQuadratic { p: RatJson::from_rat(&tau.a), q: RatJson::from_rat(&tau.b), d: tau.d }
            }
            TauMode::Geodesic { triple, position, generic } => TauSpecJson::Geodesic {
                b: triple.b,
                c: triple.c,
                d: triple.d,
                position: *position,
                generic: *generic,
            },
            TauMode::Numeric { x, y, certificate } => TauSpecJson::Numeric {
                x: *x,
                y: *y,
                certificate: certificate.as_ref().map(|c| c.rows.iter().map(|t| [t.b, t.c, t.d]).collect()),
            },
        }
    }
}

/// Point of a geodesic at the given position (see [`TauMode::Geodesic`]).
pub fn geodesic_point(t: &Triple, position: f64, prec: usize) -> Complex {
    if t.c == 0 {
        let x = Real::from_i64(t.b, prec) / Real::from_i64(2 * t.d, prec);
        Complex::new(x, Real::from_f64(position, prec))
    } else {
        let center = Real::from_i64(-t.d, prec) / Real::from_i64(t.c, prec);
        let radius = Real::from_i64(t.abs_sq(), prec).sqrt() / Real::from_i64(t.c.abs(), prec);
        let theta = Real::from_f64(position, prec);
        Complex::new(center + &radius * theta.cos(), radius * theta.sin())
    }
}

/// A lattice `⟨ω₁, ω₂⟩ ⊂ ℂ` with `Im(ω₂/ω₁) > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Lattice {
    pub omega1: Complex64,
    pub omega2: Complex64,
    pub tau_spec: Option<TauSpec>,
}

impl Lattice {
    pub fn new(omega1: Complex64, omega2: Complex64) -> Result<Self, LatticeError> {
        let t = omega2 / omega1;
        if !t.im.is_finite() || t.im.abs() < 1e-12 {
            return Err(LatticeError::DegenerateLattice);
        }
        if t.im > 0.0 {
            Ok(Lattice { omega1, omega2, tau_spec: None })
        } else {
            Ok(Lattice { omega1, omega2: -omega2, tau_spec: None })
        }
    }

    pub fn from_tau(spec: &TauSpec) -> Self {
        Lattice { omega1: Complex64::new(1.0, 0.0), omega2: spec.tau(), tau_spec: Some(spec.clone()) }
    }

    pub fn scaled(&self, k: Complex64) -> Result<Self, LatticeError> {
        Lattice::new(self.omega1 * k, self.omega2 * k)
    }

    pub fn conj(&self) -> Self {
        Lattice::new(self.omega1.conj(), self.omega2.conj()).expect("conjugate of a lattice")
    }

    pub fn tau(&self) -> Complex64 {
        self.omega2 / self.omega1
    }

    /// Real coordinates of `z` in the basis (ω₁, ω₂).
    pub fn coords(&self, z: Complex64) -> (f64, f64) {
        let det = self.omega1.re * self.omega2.im - self.omega1.im * self.omega2.re;
        let a = (z.re * self.omega2.im - z.im * self.omega2.re) / det;
        let b = (self.omega1.re * z.im - self.omega1.im * z.re) / det;
        (a, b)
    }

    pub fn point(&self, m: i64, n: i64) -> Complex64 {
        self.omega1 * m as f64 + self.omega2 * n as f64
    }

    /// Distance from `z` to the lattice point found by rounding coordinates.
    pub fn distance(&self, z: Complex64) -> f64 {
        let (a, b) = self.coords(z);
        let (m, n) = (a.round() as i64, b.round() as i64);
        let mut best = f64::INFINITY;
        for dm in -1..=1 {
            for dn in -1..=1 {
                best = best.min((z - self.point(m + dm, n + dn)).norm());
            }
        }
        best
    }

    pub fn area(&self) -> f64 {
        (self.omega1.re * self.omega2.im - self.omega1.im * self.omega2.re).abs()
    }

    pub fn shortest_vector_len(&self) -> f64 {
        let mut best = f64::INFINITY;
        let (u, v) = (self.omega1, self.omega2);
        for m in -6i64..=6 {
            for n in -6i64..=6 {
                if m != 0 || n != 0 {
                    best = best.min((u * m as f64 + v * n as f64).norm());
                }
            }
        }
        best
    }

    /// `Some(index)` when every generator of `self` lies in `sup`.
    pub fn index_in(&self, sup: &Lattice, tol: f64) -> Option<i64> {
        let (a1, b1) = sup.coords(self.omega1);
        let (a2, b2) = sup.coords(self.omega2);
        let ints = [a1, b1, a2, b2];
        if ints.iter().any(|v| (v - v.round()).abs() > tol) {
            return None;
        }
        let [a1, b1, a2, b2] = ints.map(|v| v.round() as i64);
        Some((a1 * b2 - a2 * b1).abs())
    }
}

/// Whether `z` lies within `tol` of Λ.
pub fn lattice_membership(z: Complex64, lat: &Lattice, tol: f64) -> Result<bool, LatticeError> {
    if lat.area() < 1e-300 {
        return Err(LatticeError::DegenerateLattice);
    }
    Ok(lat.distance(z) < tol)
}

/// Distance from `w` to the lattice `⟨1, t⟩` at multiprecision.
pub fn mp_distance_to_lattice(w: &Complex, t: &Complex) -> Real {
    let beta = &w.im / &t.im;
    let alpha = &w.re - &(&beta * &t.re);
    let (m, n) = (alpha.round_half_to_zero(), beta.round_half_to_zero());
    let p = w.prec();
    let point = Complex::from_i64(m, 0, p) + t.mul_i64(n);
    (w - &point).abs()
}

/// An element of SL₂(ℤ) acting by Möbius transformations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sl2Z {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Sl2Z {
    pub const IDENTITY: Sl2Z = Sl2Z { a: 1, b: 0, c: 0, d: 1 };

    pub fn translation(n: i64) -> Self {
        Sl2Z { a: 1, b: n, c: 0, d: 1 }
    }

    pub fn inversion() -> Self {
        Sl2Z { a: 0, b: -1, c: 1, d: 0 }
    }

    /// `self · other`
    pub fn compose(&self, o: &Sl2Z) -> Sl2Z {
        Sl2Z {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(&self, tau: &Complex) -> Complex {
        let p = tau.prec();
        let num = tau.mul_i64(self.a) + Complex::from_i64(self.b, 0, p);
        let den = tau.mul_i64(self.c) + Complex::from_i64(self.d, 0, p);
        &num / &den
    }

    pub fn apply_c64(&self, tau: Complex64) -> Complex64 {
        (tau * self.a as f64 + self.b as f64) / (tau * self.c as f64 + self.d as f64)
    }
}

/// Moves τ into the standard fundamental domain `|Re τ| ≤ 1/2, |τ| ≥ 1`.
pub fn normalize_tau(tau: &Complex) -> Result<(Complex, Sl2Z), LatticeError> {
    if !(tau.im.to_f64() > 0.0) {
        return Err(LatticeError::NotInUpperHalfPlane(format!("{:?}", tau.to_c64())));
    }
    let p = tau.prec();
    let one = Real::one(p);
    let mut t = tau.clone();
    let mut m = Sl2Z::IDENTITY;
    for _ in 0..10_000 {
        let n = t.re.round_half_to_zero();
        if n != 0 {
            t = &t - &Complex::from_i64(n, 0, p);
            m = Sl2Z::translation(-n).compose(&m);
        }
        if t.norm_sqr() < one {
            t = -t.recip();
            m = Sl2Z::inversion().compose(&m);
        } else {
            break;
        }
    }
    Ok((t, m))
}

/// The group `Isog(Λ, Λ̄)` for `Λ = ⟨1, τ⟩`: `γᵢ = cᵢτ̄ + dᵢ` for each basis triple.
#[derive(Clone, Debug)]
pub struct IsogenySet {
    pub rank: usize,
    pub basis: IntKernelBasis,
    pub gammas: Vec<Complex64>,
    /// Trace-zero matrices `((−d, b), (c, d))`.
    pub matrices: Vec<[[i64; 2]; 2]>,
    /// `|γᵢ|² = dᵢ² + bᵢcᵢ = |det Aᵢ|`, exact.
    pub abs_sq: Vec<i64>,
    pub spec: TauSpec,
}

pub fn gamma_of(t: &Triple, tau: Complex64) -> Complex64 {
    tau.conj() * t.c as f64 + t.d as f64
}

pub fn matrix_of(t: &Triple) -> [[i64; 2]; 2] {
    [[-t.d, t.b], [t.c, t.d]]
}

impl IsogenySet {
    pub fn gamma_mp(&self, i: usize, prec: usize) -> Complex {
        let t = &self.basis.rows[i];
        let tau = self.spec.tau_mp(prec);
        tau.conj().mul_i64(t.c) + Complex::from_i64(t.d, 0, prec)
    }

    /// `max(dist(γ·1, Λ̄), dist(γ·τ, Λ̄))` at the given precision.
    pub fn membership_residual(&self, i: usize, prec: usize) -> f64 {
        let tau = self.spec.tau_mp(prec);
        let tau_bar = tau.conj();
        // Λ̄ = ⟨1, τ̄⟩ = ⟨1, −τ̄⟩
        let lattice_param = -&tau_bar;
        let g = self.gamma_mp(i, prec);
        let r1 = mp_distance_to_lattice(&g, &lattice_param).to_f64();
        let r2 = mp_distance_to_lattice(&(&g * &tau), &lattice_param).to_f64();
        r1.max(r2)
    }
}

pub fn isog_conj_set(spec: &TauSpec) -> Result<IsogenySet, LatticeError> {
    let basis = spec.relation_basis()?;
    let tau = spec.tau();
    Ok(IsogenySet {
        rank: basis.rank,
        gammas: basis.rows.iter().map(|t| gamma_of(t, tau)).collect(),
        matrices: basis.rows.iter().map(matrix_of).collect(),
        abs_sq: basis.rows.iter().map(Triple::abs_sq).collect(),
        basis,
        spec: spec.clone(),
    })
}

/// Primitive integer polynomial `Aτ² + Bτ + C` with `A > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinPoly {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl MinPoly {
    pub fn disc(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    /// From `τ² − (2x)τ + s`.
    pub fn from_trace_norm(two_x: &Rat, s: &Rat) -> Result<Self, ExactError> {
        let l = two_x.denom().lcm(s.denom());
        let lr = Rat::from_integer(l.clone());
        let b = (-(two_x * &lr)).to_integer();
        let c = (s * &lr).to_integer();
        let g = l.gcd(&b).gcd(&c);
        let f = |v: num_bigint::BigInt| (v / &g).to_i64().ok_or(ExactError::Overflow);
        Ok(MinPoly { a: f(l)?, b: f(b)?, c: f(c)? })
    }
}

impl fmt::Display for MinPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = if self.a == 1 { String::new() } else { self.a.to_string() };
        write!(f, "{a}τ²")?;
        match self.b {
            0 => {}
            1 => write!(f, " + τ")?,
            -1 => write!(f, " − τ")?,
            b if b > 0 => write!(f, " + {b}τ")?,
            b => write!(f, " − {}τ", -b)?,
        }
        match self.c {
            0 => Ok(()),
            c if c > 0 => write!(f, " + {c}"),
            c => write!(f, " − {}", -c),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmStatus {
    Cm(MinPoly),
    NotCm,
}

pub fn is_cm(spec: &TauSpec) -> Result<CmStatus, LatticeError> {
    match spec.exact_trace_norm()? {
        Some((two_x, s)) => Ok(CmStatus::Cm(MinPoly::from_trace_norm(&two_x, &s)?)),
        None => Ok(CmStatus::NotCm),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GeodesicKind {
    Vertical,
    Circle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EndpointClass {
    Rational,
    ConjRealQuadratic,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Endpoint {
    Infinity,
    Rational(Rat),
    RealQuadratic(QuadElem),
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Infinity => write!(f, "∞"),
            Endpoint::Rational(q) => write!(f, "{q}"),
            Endpoint::RealQuadratic(u) => write!(f, "{u}"),
        }
    }
}

impl Endpoint {
    pub fn to_f64(&self) -> f64 {
        match self {
            Endpoint::Infinity => f64::INFINITY,
            Endpoint::Rational(q) => q.to_f64().unwrap_or(f64::NAN),
            Endpoint::RealQuadratic(u) => u.to_c64().re,
        }
    }
}

/// A special geodesic `c(x²+y²) + 2dx − b = 0` and its endpoints on ℙ¹(ℝ).
#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicData {
    pub kind: GeodesicKind,
    pub triple: Triple,
    pub endpoints: [Endpoint; 2],
    pub endpoint_class: EndpointClass,
}

impl GeodesicData {
    pub fn from_triple(t: &Triple) -> Result<Self, LatticeError> {
        let t = t.primitive();
        if t.c == 0 {
            if t.d == 0 {
                return Err(LatticeError::InvalidGeodesic(t));
            }
            return Ok(GeodesicData {
                kind: GeodesicKind::Vertical,
                triple: t,
                endpoints: [Endpoint::Rational(rat(t.b, 2 * t.d)), Endpoint::Infinity],
                endpoint_class: EndpointClass::Rational,
            });
        }
        let disc = t.abs_sq();
        if disc <= 0 {
            return Err(LatticeError::InvalidGeodesic(t));
        }
        let center = rat(-t.d, t.c);
        let (endpoints, class) = match rational_sqrt(&rat_int(disc)) {
            Some(root) => {
                let r = root / rat_int(t.c);
                (
                    [Endpoint::Rational(&center - &r), Endpoint::Rational(&center + &r)],
                    EndpointClass::Rational,
                )
            }
            None => {
                let (f, m) = squarefree_decomposition(disc);
                let coef = rat(f, t.c);
                let lo = QuadElem::new(center.clone(), -coef.abs(), m)?;
                let hi = QuadElem::new(center, coef.abs(), m)?;
                ([Endpoint::RealQuadratic(lo), Endpoint::RealQuadratic(hi)], EndpointClass::ConjRealQuadratic)
            }
        };
        Ok(GeodesicData { kind: GeodesicKind::Circle, triple: t, endpoints, endpoint_class: class })
    }

    /// Vertical line `x = b/(2d)`, or circle center `−d/c` and squared radius `(d²+bc)/c²`.
    pub fn center_radius_sq(&self) -> Option<(Rat, Rat)> {
        let t = &self.triple;
        (t.c != 0).then(|| (rat(-t.d, t.c), rat(t.abs_sq(), t.c * t.c)))
    }
}

pub fn geodesic_through(spec: &TauSpec) -> Result<Option<GeodesicData>, LatticeError> {
    let basis = spec.relation_basis()?;
    match basis.rank {
        0 => Ok(None),
        1 => Ok(Some(GeodesicData::from_triple(&basis.rows[0])?)),
        _ => Ok(Some(GeodesicData::from_triple(&vertical_element(&basis))?)),
    }
}

/// The rank-2 kernel element with `c = 0` and the least positive `d`.
fn vertical_element(basis: &IntKernelBasis) -> Triple {
    // pivots run over (c, d, b), so the second row spans the c = 0 part
    basis.rows.iter().copied().find(|t| t.c == 0).expect("rank-2 relation lattice has a c = 0 row")
}

/// An element of `Isog(Λ, Λ̄)` of rational absolute value.
#[derive(Clone, Debug, PartialEq)]
pub struct AbsWitness {
    pub triple: Triple,
    pub gamma: Complex64,
    pub abs: Rat,
}

pub fn rational_abs_witness(iso: &IsogenySet) -> Option<AbsWitness> {
    let t = match iso.rank {
        0 => return None,
        1 => iso.basis.rows[0],
        _ => vertical_element(&iso.basis),
    };
    let abs = rational_sqrt(&rat_int(t.abs_sq()))?;
    Some(AbsWitness { triple: t, gamma: gamma_of(&t, iso.spec.tau()), abs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mp::bits_for_digits;

    fn sqrt_minus7() -> TauSpec {
        TauSpec::exact_quadratic(rat(1, 2), rat(1, 2), -7).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let p = bits_for_digits(40);
        let (t, m) = normalize_tau(&Complex::from_f64(5.0, 1.0, p)).unwrap();
        assert_eq!(m, Sl2Z::translation(-5));
        assert!((t.to_c64() - Complex64::new(0.0, 1.0)).norm() < 1e-30);

        let (t, m) = normalize_tau(&Complex::from_f64(0.0, 0.1, p)).unwrap();
        assert_eq!(m, Sl2Z::inversion());
        assert!((t.to_c64() - Complex64::new(0.0, 10.0)).norm() < 1e-14);

        let tau = Complex::from_f64(0.4, 0.2, p);
        let (t, m) = normalize_tau(&tau).unwrap();
        assert_eq!(m.det(), 1);
        assert!((m.apply(&tau) - &t).abs().to_f64() < 1e-30);
        let tc = t.to_c64();
        assert!(tc.re.abs() <= 0.5 && tc.norm() >= 1.0);

        assert!(normalize_tau(&Complex::from_f64(0.3, -1.0, p)).is_err());
    }

    #[test]
    fn isogenies_of_cm_points() {
        let iso = isog_conj_set(&TauSpec::i()).unwrap();
        assert_eq!(iso.rank, 2);
        assert_eq!(iso.basis.rows, vec![Triple::new(1, 1, 0), Triple::new(0, 0, 1)]);
        assert!((iso.gammas[0] - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        assert!((iso.gammas[1] - Complex64::new(1.0, 0.0)).norm() < 1e-15);

        let spec = sqrt_minus7();
        let iso = isog_conj_set(&spec).unwrap();
        assert_eq!(iso.rank, 2);
        assert!((iso.gammas[0] - spec.tau().conj()).norm() < 1e-15);
        assert!((iso.gammas[1] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let p = bits_for_digits(40);
        for i in 0..2 {
            assert!(iso.membership_residual(i, p) < 1e-30);
        }
    }

    #[test]
    fn isogenies_on_geodesics() {
        let spec = TauSpec::geodesic(Triple::new(2, 1, 0), 0.3, true).unwrap();
        let iso = isog_conj_set(&spec).unwrap();
        assert_eq!(iso.rank, 1);
        assert_eq!(iso.abs_sq, vec![2]);
        assert!((iso.gammas[0] - spec.tau().conj()).norm() < 1e-15);
        assert!(iso.membership_residual(0, bits_for_digits(40)) < 1e-30);
        assert!(rational_abs_witness(&iso).is_none());

        let spec = TauSpec::geodesic(Triple::new(1, 1, 0), 1.1, true).unwrap();
        let iso = isog_conj_set(&spec).unwrap();
        assert_eq!(iso.abs_sq, vec![1]);
        let w = rational_abs_witness(&iso).unwrap();
        assert_eq!(w.abs, rat_int(1));
        assert!((w.gamma - spec.tau().conj()).norm() < 1e-15);
    }

    #[test]
    fn trace_zero_negative_determinant() {
        for t in [Triple::new(2, 1, 0), Triple::new(3, 2, -1), Triple::new(1, 0, 1), Triple::new(-1, 3, 2)] {
            let a = matrix_of(&t);
            assert_eq!(a[0][0] + a[1][1], 0);
            let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
            assert_eq!(-det, t.abs_sq());
            if t.abs_sq() > 0 {
                assert!(det < 0);
            }
        }
    }

    #[test]
    fn cm_detection() {
        assert_eq!(is_cm(&TauSpec::i()).unwrap(), CmStatus::Cm(MinPoly { a: 1, b: 0, c: 1 }));
        let root2 = TauSpec::exact_quadratic(rat_int(0), rat_int(1), -2).unwrap();
        let CmStatus::Cm(mp) = is_cm(&root2).unwrap() else { panic!() };
        assert_eq!((mp, mp.disc()), (MinPoly { a: 1, b: 0, c: 2 }, -8));
        let CmStatus::Cm(mp) = is_cm(&sqrt_minus7()).unwrap() else { panic!() };
        assert_eq!((mp.a, mp.b, mp.c, mp.disc()), (1, -1, 2, -7));
        let unit = TauSpec::geodesic(Triple::new(1, 1, 0), 1.3, true).unwrap();
        assert_eq!(is_cm(&unit).unwrap(), CmStatus::NotCm);
        let cert = IntKernelBasis { rank: 2, rows: vec![Triple::new(2, 1, 0), Triple::new(1, 0, 1)] };
        let numeric = TauSpec::numeric(0.5, 7f64.sqrt() / 2.0, Some(cert)).unwrap();
        assert_eq!(is_cm(&numeric).unwrap(), CmStatus::Cm(MinPoly { a: 1, b: -1, c: 2 }));
    }

    #[test]
    fn floats_alone_are_undecidable() {
        let spec = TauSpec::numeric(0.123, 1.456, None).unwrap();
        assert!(matches!(isog_conj_set(&spec), Err(LatticeError::UndecidableFromFloats(_))));
        assert!(matches!(is_cm(&spec), Err(LatticeError::UndecidableFromFloats(_))));
        assert!(matches!(geodesic_through(&spec), Err(LatticeError::UndecidableFromFloats(_))));
        let spec = TauSpec::geodesic(Triple::new(1, 1, 0), 1.0, false).unwrap();
        assert!(matches!(isog_conj_set(&spec), Err(LatticeError::UndecidableFromFloats(_))));
    }

    #[test]
    fn bad_certificates_are_rejected() {
        let cert = IntKernelBasis { rank: 1, rows: vec![Triple::new(1, 1, 0)] };
        assert!(matches!(
            TauSpec::numeric(0.1, 2.0, Some(cert)),
            Err(LatticeError::InvalidCertificate(_))
        ));
        let empty = TauSpec::numeric(0.123, 1.456, Some(IntKernelBasis::empty())).unwrap();
        assert_eq!(isog_conj_set(&empty).unwrap().rank, 0);
        assert_eq!(geodesic_through(&empty).unwrap(), None);
    }

    #[test]
    fn geodesic_examples() {
        let spec = TauSpec::geodesic(Triple::new(0, 0, 1), 2f64.cbrt(), true).unwrap();
        let g = geodesic_through(&spec).unwrap().unwrap();
        assert_eq!(g.kind, GeodesicKind::Vertical);
        assert_eq!(g.endpoints, [Endpoint::Rational(rat_int(0)), Endpoint::Infinity]);
        assert_eq!(g.endpoint_class, EndpointClass::Rational);

        let spec = TauSpec::geodesic(Triple::new(2, 1, 0), 0.3, true).unwrap();
        let g = geodesic_through(&spec).unwrap().unwrap();
        assert_eq!(g.kind, GeodesicKind::Circle);
        assert_eq!(g.endpoint_class, EndpointClass::ConjRealQuadratic);
        assert_eq!(g.center_radius_sq(), Some((rat_int(0), rat_int(2))));
        assert!((g.endpoints[1].to_f64() - 2f64.sqrt()).abs() < 1e-15);
        assert!((g.endpoints[0].to_f64() + 2f64.sqrt()).abs() < 1e-15);

        let g = geodesic_through(&sqrt_minus7()).unwrap().unwrap();
        assert_eq!(g.kind, GeodesicKind::Vertical);
        assert_eq!(g.endpoints[0], Endpoint::Rational(rat(1, 2)));
    }

    #[test]
    fn invalid_geodesics() {
        assert!(TauSpec::geodesic(Triple::new(0, 0, 0), 1.0, true).is_err());
        assert!(TauSpec::geodesic(Triple::new(-1, 1, 0), 1.0, true).is_err());
        assert!(TauSpec::geodesic(Triple::new(1, 1, 0), 4.0, true).is_err());
        assert!(TauSpec::geodesic(Triple::new(1, 0, 0), 1.0, true).is_err());
    }

    #[test]
    fn points_lie_on_their_geodesic() {
        let p = bits_for_digits(40);
        for (t, pos) in [(Triple::new(2, 1, 0), 0.3), (Triple::new(5, 3, -1), 2.2), (Triple::new(3, 0, 2), 0.7)] {
            let tau = geodesic_point(&t, pos, p);
            let s = tau.norm_sqr();
            let r = s.mul_i64(t.c) + tau.re.mul_i64(2 * t.d) - Real::from_i64(t.b, p);
            assert!(r.abs().to_f64() < 1e-35);
        }
    }

    #[test]
    fn membership_examples() {
        let spec = TauSpec::i();
        let lat = Lattice::from_tau(&spec);
        let tau = spec.tau();
        assert!(lattice_membership(tau * 2.0 + 3.0, &lat, 1e-9).unwrap());
        assert!(!lattice_membership(Complex64::new(0.5, 0.0), &lat, 1e-9).unwrap());
        let half = (lat.omega1 + lat.omega2) / 2.0;
        assert!(!lattice_membership(half, &lat, 0.24).unwrap());
    }

    #[test]
    fn sublattice_index() {
        let z = Lattice::from_tau(&TauSpec::i());
        let two = z.scaled(Complex64::new(2.0, 0.0)).unwrap();
        assert_eq!(two.index_in(&z, 1e-9), Some(4));
        assert_eq!(z.index_in(&two, 1e-9), None);
    }

    #[test]
    fn tau_spec_json() {
        let s = TauSpec::from_json(r#"{"mode":"exact_quadratic","p":0,"q":1,"d":-1}"#).unwrap();
        assert_eq!(s, TauSpec::i());
        let s = TauSpec::from_json(r#"{"mode":"exact_quadratic","p":"1/2","q":"1/2","d":-7}"#).unwrap();
        assert_eq!(s, sqrt_minus7());
        let s = TauSpec::from_json(r#"{"mode":"geodesic","b":2,"c":1,"d":0,"position":0.3,"generic":true}"#).unwrap();
        assert_eq!(s.relation_basis().unwrap().rows, vec![Triple::new(2, 1, 0)]);
        let s = TauSpec::from_json(r#"{"mode":"numeric","x":0.123,"y":1.456}"#).unwrap();
        assert!(matches!(s.relation_basis(), Err(LatticeError::UndecidableFromFloats(_))));
        let s = TauSpec::from_json(r#"{"mode":"numeric","x":0.123,"y":1.456,"certificate":[]}"#).unwrap();
        assert_eq!(s.relation_basis().unwrap().rank, 0);
        for text in [r#"{"mode":"exact_quadratic","p":"1/2","q":"1/2","d":-7}"#, r#"{"mode":"numeric","x":0.5,"y":2.0}"#] {
            let s = TauSpec::from_json(text).unwrap();
            let again = serde_json::to_string(&s.to_json()).unwrap();
            assert_eq!(TauSpec::from_json(&again).unwrap(), s);
        }
        assert!(matches!(
            TauSpec::from_json(r#"{"mode":"exact_quadratic","p":"x","q":1,"d":-1}"#),
            Err(LatticeError::InvalidSpec(_))
        ));
        assert!(TauSpec::from_json(r#"{"mode":"numeric","x":0.0,"y":-1.0}"#).is_err());
    }
}
