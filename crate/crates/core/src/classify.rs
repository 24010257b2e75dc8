//! Weakly bialgebraic sets of the real map `𝒫_Λ` and bialgebraic curves of
//! `℘_Λ × ℘_Λ̄`.
//!
//! For `Λ = ⟨1, τ⟩` the answer depends only on `Isog(Λ, Λ̄)`:
//!
//! * rank 0: only points;
//! * rank 1 with generator `γ`: the lines `{√γ·z ∈ ℝ}` and `{√γ·z ∈ iℝ}`
//!   (and their translates) when `|γ| ∈ ℚ`, otherwise only points;
//! * rank 2 (CM): every line through the origin meeting `Λ∖{0}`, and translates.
//!
//! A line is stored as `ρ⁻¹·ℝ + offset` together with its slope `r = ρ/ρ̄`,
//! so that `x − iy = r(x + iy)` on the line through the origin.

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{recognize_rational, Rat, Triple};
use crate::lattice::{
    geodesic_through, is_cm, isog_conj_set, lattice_membership, rational_abs_witness, CmStatus, GeodesicData,
    IsogenySet, Lattice, LatticeError, MinPoly, TauSpec,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifyError {
    #[error("zero direction")]
    ZeroDirection,
    #[error("w{0} is not a point of Λ × Λ̄")]
    NotLatticePoint(usize),
    #[error("not a complex line: {0}")]
    NotComplexLine(String),
    #[error("not a sublattice")]
    NotSublattice,
    #[error("invalid line specification: {0}")]
    InvalidLine(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Serializes `Complex64` as `[re, im]`.
pub mod c64_pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

/// Where a line came from, when it is known exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LineOrigin {
    /// `ℝ·(m + nτ)`.
    LatticeDirection { m: i64, n: i64 },
    /// `L1 = {√γ z ∈ ℝ}` (index 1) or `L2 = {√γ z ∈ iℝ}` (index 2).
    SqrtGamma { index: u8 },
    Free,
}

/// The line `ρ⁻¹·ℝ + offset` in `ℝ² = ℂ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealLine {
    #[serde(with = "c64_pair")]
    pub rho: Complex64,
    /// `ρ/ρ̄`, of absolute value 1.
    #[serde(with = "c64_pair")]
    pub r: Complex64,
    #[serde(with = "c64_pair")]
    pub offset: Complex64,
    pub origin: LineOrigin,
}

impl RealLine {
    /// Unit direction vector, normalized to `Re > 0` or `Re = 0, Im > 0`.
    pub fn direction(&self) -> Complex64 {
        let d = self.rho.inv();
        let d = d / d.norm();
        if d.re < -1e-15 || (d.re.abs() <= 1e-15 && d.im < 0.0) {
            -d
        } else {
            d
        }
    }

    pub fn point(&self, t: f64) -> Complex64 {
        self.offset + self.direction() * t
    }

    /// The same line moved by `c`.
    pub fn translate(&self, c: Complex64) -> RealLine {
        RealLine { offset: self.offset + c, ..*self }
    }

    pub fn through_origin(&self) -> RealLine {
        RealLine { offset: Complex64::new(0.0, 0.0), ..*self }
    }

    /// Angle of the direction in `[0, π)`.
    pub fn angle(&self) -> f64 {
        let d = self.direction();
        d.im.atan2(d.re).rem_euclid(std::f64::consts::PI)
    }

    /// Whether `z` lies on the line through the origin: `z̄ = r·z`.
    pub fn slope_residual(&self, z: Complex64) -> f64 {
        (z.conj() - self.r * z).norm() / z.norm().max(f64::MIN_POSITIVE)
    }

    pub fn from_direction(dir: Complex64, offset: Complex64) -> Result<Self, ClassifyError> {
        if dir.norm() == 0.0 || !dir.is_finite() {
            return Err(ClassifyError::ZeroDirection);
        }
        line_from_rho(dir.inv(), offset)
    }
}

pub fn line_from_rho(rho: Complex64, offset: Complex64) -> Result<RealLine, ClassifyError> {
    if rho.norm() == 0.0 || !rho.is_finite() {
        return Err(ClassifyError::ZeroDirection);
    }
    Ok(RealLine { rho, r: rho / rho.conj(), offset, origin: LineOrigin::Free })
}

/// The line `ℝ·(m + nτ)`, i.e. `ρ = (m + nτ)⁻¹`.
pub fn rho_from_lattice_direction(m: i64, n: i64, spec: &TauSpec) -> Result<RealLine, ClassifyError> {
    if m == 0 && n == 0 {
        return Err(ClassifyError::ZeroDirection);
    }
    let dir = spec.tau() * n as f64 + m as f64;
    let mut line = line_from_rho(dir.inv(), Complex64::new(0.0, 0.0))?;
    line.origin = LineOrigin::LatticeDirection { m, n };
    Ok(line)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SingletonReason {
    NotIsogenous,
    AbsGammaIrrational,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Branch {
    OnlySingletons {
        reason: SingletonReason,
        /// `|γ|²` of the generator when Λ is isogenous to Λ̄.
        abs_gamma_sq: Option<i64>,
    },
    TwoLineFamily {
        triple: Triple,
        gamma: Complex64,
        sqrt_gamma: Complex64,
        abs_gamma: Rat,
        l1: RealLine,
        l2: RealLine,
    },
    CmFamily {
        minpoly: MinPoly,
    },
}

impl Branch {
    pub fn tag(&self) -> &'static str {
        match self {
            Branch::OnlySingletons { .. } => "ONLY_SINGLETONS",
            Branch::TwoLineFamily { .. } => "TWO_LINE_FAMILY",
            Branch::CmFamily { .. } => "CM_FAMILY",
        }
    }
}

pub const CM_DIRECTION_RULE: &str = "m + nτ, (m,n) ∈ ℤ² primitive";

#[derive(Clone, Debug)]
pub struct Classification {
    pub branch: Branch,
    pub isogeny: IsogenySet,
    pub geodesic: Option<GeodesicData>,
    /// Whether Λ is isogenous to a lattice equal to its conjugate, which is
    /// the same as having bialgebraic sets other than points.
    pub isogenous_to_self_conjugate: bool,
    /// Translates of bialgebraic lines are bialgebraic.
    pub translate_closure: bool,
    pub spec: TauSpec,
}

pub fn classify(spec: &TauSpec) -> Result<Classification, ClassifyError> {
    let iso = isog_conj_set(spec)?;
    let geodesic = geodesic_through(spec)?;
    let branch = match iso.rank {
        0 => Branch::OnlySingletons { reason: SingletonReason::NotIsogenous, abs_gamma_sq: None },
        1 => match rational_abs_witness(&iso) {
            None => Branch::OnlySingletons {
                reason: SingletonReason::AbsGammaIrrational,
                abs_gamma_sq: Some(iso.abs_sq[0]),
            },
            Some(w) => {
                let sqrt_gamma = w.gamma.sqrt();
                let mut l1 = line_from_rho(sqrt_gamma, Complex64::new(0.0, 0.0))?;
                l1.origin = LineOrigin::SqrtGamma { index: 1 };
                let mut l2 = line_from_rho(sqrt_gamma * Complex64::new(0.0, -1.0), Complex64::new(0.0, 0.0))?;
                l2.origin = LineOrigin::SqrtGamma { index: 2 };
                Branch::TwoLineFamily { triple: w.triple, gamma: w.gamma, sqrt_gamma, abs_gamma: w.abs, l1, l2 }
            }
        },
        _ => match is_cm(spec)? {
            CmStatus::Cm(minpoly) => Branch::CmFamily { minpoly },
            CmStatus::NotCm => unreachable!("rank-2 relation lattice is CM"),
        },
    };
    let isogenous_to_self_conjugate = !matches!(branch, Branch::OnlySingletons { .. });
    Ok(Classification {
        branch,
        isogeny: iso,
        geodesic,
        isogenous_to_self_conjugate,
        translate_closure: true,
        spec: spec.clone(),
    })
}

impl Classification {
    /// Bialgebraic lines through the origin; for CM lattices the directions
    /// `m + nτ` with `(m, n)` primitive and `max(|m|, |n|) ≤ height_bound`.
    pub fn lines(&self, height_bound: i64) -> Vec<RealLine> {
        match &self.branch {
            Branch::OnlySingletons { .. } => {
                log::warn!("lattice has only singleton bialgebraic sets; no lines to list");
                Vec::new()
            }
            Branch::TwoLineFamily { l1, l2, .. } => vec![*l1, *l2],
            Branch::CmFamily { .. } => primitive_directions(height_bound)
                .into_iter()
                .map(|(m, n)| rho_from_lattice_direction(m, n, &self.spec).expect("nonzero direction"))
                .collect(),
        }
    }

    /// Whether `line` (up to translation) is bialgebraic.
    pub fn contains_line(&self, line: &RealLine) -> bool {
        match (&self.branch, line.origin) {
            (Branch::OnlySingletons { .. }, _) => false,
            (Branch::TwoLineFamily { .. }, LineOrigin::SqrtGamma { .. }) => true,
            (Branch::CmFamily { .. }, LineOrigin::LatticeDirection { .. }) => true,
            (Branch::TwoLineFamily { gamma, .. }, _) => {
                let d = line.direction();
                let v = gamma * d * d;
                v.im.abs() <= 1e-10 * v.norm()
            }
            (Branch::CmFamily { .. }, _) => lattice_direction_of(line.direction(), self.spec.tau()).is_some(),
        }
    }

    pub fn report(&self, height_bound: i64) -> ClassificationReport {
        let lines = if matches!(self.branch, Branch::OnlySingletons { .. }) { Vec::new() } else { self.lines(height_bound) };
        let lines = lines
            .into_iter()
            .map(|l| LineReport {
                label: match l.origin {
                    LineOrigin::SqrtGamma { index } => format!("L{index}"),
                    LineOrigin::LatticeDirection { m, n } => format!("({m},{n})"),
                    LineOrigin::Free => "line".into(),
                },
                direction: pair(l.direction()),
                rho: pair(l.rho),
                r: pair(l.r),
                m: match l.origin {
                    LineOrigin::LatticeDirection { m, .. } => Some(m),
                    _ => None,
                },
                n: match l.origin {
                    LineOrigin::LatticeDirection { n, .. } => Some(n),
                    _ => None,
                },
            })
            .collect();
        let (reason, gamma, sqrt_gamma, abs_gamma, abs_gamma_sq, minpoly, direction_rule) = match &self.branch {
            Branch::OnlySingletons { reason, abs_gamma_sq } => {
                let g = (self.isogeny.rank == 1).then(|| pair(self.isogeny.gammas[0]));
                (Some(*reason), g, None, None, *abs_gamma_sq, None, None)
            }
            Branch::TwoLineFamily { gamma, sqrt_gamma, abs_gamma, triple, .. } => (
                None,
                Some(pair(*gamma)),
                Some(pair(*sqrt_gamma)),
                Some(abs_gamma.to_string()),
                Some(triple.abs_sq()),
                None,
                None,
            ),
            Branch::CmFamily { minpoly } => {
                (None, None, None, None, None, Some(*minpoly), Some(CM_DIRECTION_RULE.to_string()))
            }
        };
        ClassificationReport {
            branch: self.branch.tag().to_string(),
            reason,
            gamma,
            sqrt_gamma,
            abs_gamma,
            abs_gamma_sq,
            minpoly: minpoly.map(|m| MinPolyReport { a: m.a, b: m.b, c: m.c, disc: m.disc(), text: m.to_string() }),
            direction_rule,
            lines,
            height_bound: matches!(self.branch, Branch::CmFamily { .. }).then_some(height_bound),
            isogeny: IsogenyReport {
                rank: self.isogeny.rank,
                basis: self.isogeny.basis.rows.iter().map(|t| [t.b, t.c, t.d]).collect(),
                gammas: self.isogeny.gammas.iter().map(|g| pair(*g)).collect(),
                matrices: self.isogeny.matrices.clone(),
                abs_sq: self.isogeny.abs_sq.clone(),
            },
            geodesic: self.geodesic.as_ref().map(GeodesicReport::from),
            isogenous_to_self_conjugate: self.isogenous_to_self_conjugate,
            translate_closure: self.translate_closure,
            tau: pair(self.spec.tau()),
        }
    }
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// Primitive `(m, n)` up to sign, normalized to `n > 0` or `(1, 0)`,
/// ordered by height.
pub fn primitive_directions(height_bound: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for h in 1..=height_bound.max(0) {
        for n in 0..=h {
            for m in -h..=h {
                if m.abs().max(n) != h || m.gcd(&n) != 1 {
                    continue;
                }
                if n == 0 && m != 1 {
                    continue;
                }
                out.push((m, n));
            }
        }
    }
    out
}

/// Largest `|n|` tried by [`lattice_direction_of`]. Directions up to this
/// height are at least ~10⁻⁸ apart; beyond it, rational approximants of any
/// direction would pass the `10⁻¹⁰` test.
pub const DIRECTION_HEIGHT: u64 = 10_000;

/// `(m, n)` with `dir ∥ m + nτ` and `|n| ≤ DIRECTION_HEIGHT`, found
/// numerically to `10⁻¹⁰`.
pub fn lattice_direction_of(dir: Complex64, tau: Complex64) -> Option<(i64, i64)> {
    // Im(d̄·(m + nτ)) = 0  ⇔  m·Im(d̄) + n·Im(d̄τ) = 0
    let a = dir.conj().im;
    let b = (dir.conj() * tau).im;
    let scale = dir.norm() * (1.0 + tau.norm());
    let (m, n) = if a.abs() <= 1e-12 * scale {
        (1, 0)
    } else {
        let q = recognize_rational(-b / a, DIRECTION_HEIGHT).ok()??;
        let m = i64::try_from(q.numer().clone()).ok()?;
        let n = i64::try_from(q.denom().clone()).ok()?;
        (m, n)
    };
    let cand = tau * n as f64 + m as f64;
    let cross = (dir.conj() * cand).im.abs() / (dir.norm() * cand.norm());
    (cross < 1e-10).then_some((m, n))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineReport {
    pub label: String,
    pub direction: [f64; 2],
    pub rho: [f64; 2],
    pub r: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinPolyReport {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub disc: i64,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsogenyReport {
    pub rank: usize,
    pub basis: Vec<[i64; 3]>,
    pub gammas: Vec<[f64; 2]>,
    pub matrices: Vec<[[i64; 2]; 2]>,
    pub abs_sq: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeodesicReport {
    pub kind: crate::lattice::GeodesicKind,
    pub triple: [i64; 3],
    pub endpoints: [String; 2],
    pub endpoints_approx: [f64; 2],
    pub endpoint_class: crate::lattice::EndpointClass,
}

impl From<&GeodesicData> for GeodesicReport {
    fn from(g: &GeodesicData) -> Self {
        GeodesicReport {
            kind: g.kind,
            triple: [g.triple.b, g.triple.c, g.triple.d],
            endpoints: [g.endpoints[0].to_string(), g.endpoints[1].to_string()],
            endpoints_approx: [g.endpoints[0].to_f64(), g.endpoints[1].to_f64()],
            endpoint_class: g.endpoint_class,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub branch: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<SingletonReason>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sqrt_gamma: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abs_gamma: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abs_gamma_sq: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minpoly: Option<MinPolyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direction_rule: Option<String>,
    pub lines: Vec<LineReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub height_bound: Option<i64>,
    pub isogeny: IsogenyReport,
    pub geodesic: Option<GeodesicReport>,
    pub isogenous_to_self_conjugate: bool,
    pub translate_closure: bool,
    pub tau: [f64; 2],
}

pub fn bialgebraic_lines(spec: &TauSpec, height_bound: i64) -> Result<Vec<RealLine>, ClassifyError> {
    Ok(classify(spec)?.lines(height_bound))
}

/// JSON description of a line relative to a lattice:
/// `{"kind":"lattice_direction","m":1,"n":1}`, `{"kind":"sqrt_gamma","index":1}`,
/// `{"kind":"direction","re":1,"im":0}` or `{"kind":"rho","re":…,"im":…}`,
/// each with an optional `"offset":[re, im]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LineSpec {
    LatticeDirection {
        m: i64,
        n: i64,
        #[serde(default)]
        offset: [f64; 2],
    },
    SqrtGamma {
        index: u8,
        #[serde(default)]
        offset: [f64; 2],
    },
    Direction {
        re: f64,
        im: f64,
        #[serde(default)]
        offset: [f64; 2],
    },
    Rho {
        re: f64,
        im: f64,
        #[serde(default)]
        offset: [f64; 2],
    },
}

impl LineSpec {
    pub fn from_json(text: &str) -> Result<Self, ClassifyError> {
        serde_json::from_str(text).map_err(|e| ClassifyError::InvalidLine(e.to_string()))
    }

    /// The line this describes for `spec`; only `sqrt_gamma` needs the classification.
    pub fn resolve(&self, spec: &TauSpec) -> Result<RealLine, ClassifyError> {
        let c = |o: &[f64; 2]| Complex64::new(o[0], o[1]);
        match self {
            LineSpec::LatticeDirection { m, n, offset } => {
                Ok(rho_from_lattice_direction(*m, *n, spec)?.translate(c(offset)))
            }
            LineSpec::SqrtGamma { index, offset } => match (classify(spec)?.branch, index) {
                (Branch::TwoLineFamily { l1, .. }, 1) => Ok(l1.translate(c(offset))),
                (Branch::TwoLineFamily { l2, .. }, 2) => Ok(l2.translate(c(offset))),
                (Branch::TwoLineFamily { .. }, i) => Err(ClassifyError::InvalidLine(format!("no line L{i}"))),
                (b, _) => Err(ClassifyError::InvalidLine(format!("L1 and L2 do not exist on branch {}", b.tag()))),
            },
            LineSpec::Direction { re, im, offset } => RealLine::from_direction(Complex64::new(*re, *im), c(offset)),
            LineSpec::Rho { re, im, offset } => line_from_rho(Complex64::new(*re, *im), c(offset)),
        }
    }
}

/// A curve `W + σ ⊂ ℂ²` with `W = ⟨w1, w2⟩_ℝ` spanned by points of `Λ × Λ̄`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexLine {
    #[serde(with = "pair_of_c64")]
    pub w1: (Complex64, Complex64),
    #[serde(with = "pair_of_c64")]
    pub w2: (Complex64, Complex64),
    #[serde(with = "pair_of_c64")]
    pub sigma: (Complex64, Complex64),
    /// `w_{i2} = r·w_{i1}`; `None` when `W = {0} × ℂ`.
    pub slope: Option<[f64; 2]>,
    /// `w1 = t·w2`, non-real.
    #[serde(with = "c64_pair")]
    pub t: Complex64,
}

mod pair_of_c64 {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &(Complex64, Complex64), s: S) -> Result<S::Ok, S::Error> {
        [[z.0.re, z.0.im], [z.1.re, z.1.im]].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(Complex64, Complex64), D::Error> {
        let [[a, b], [c, e]] = <[[f64; 2]; 2]>::deserialize(d)?;
        Ok((Complex64::new(a, b), Complex64::new(c, e)))
    }
}

impl ComplexLine {
    /// Complex direction of `W`.
    pub fn direction(&self) -> (Complex64, Complex64) {
        self.w2
    }
}

/// Validates the hypotheses of the converse direction: `w1, w2 ∈ Λ × Λ̄`,
/// ℝ-independent and spanning a complex line.
pub fn complex_bialgebraic_line(
    w1: (Complex64, Complex64),
    w2: (Complex64, Complex64),
    sigma: (Complex64, Complex64),
    lat: &Lattice,
) -> Result<ComplexLine, ClassifyError> {
    let conj = lat.conj();
    let tol = 1e-9 * lat.shortest_vector_len();
    for (i, w) in [(1usize, w1), (2, w2)] {
        if !lattice_membership(w.0, lat, tol)? || !lattice_membership(w.1, &conj, tol)? {
            return Err(ClassifyError::NotLatticePoint(i));
        }
    }
    let scale = (w1.0.norm() + w1.1.norm()) * (w2.0.norm() + w2.1.norm());
    if scale == 0.0 {
        return Err(ClassifyError::NotComplexLine("zero generator".into()));
    }
    // ℂ-dependent: w1 ∧ w2 = 0 over ℂ
    let wedge = w1.0 * w2.1 - w1.1 * w2.0;
    if wedge.norm() > 1e-9 * scale {
        return Err(ClassifyError::NotComplexLine("generators span all of ℂ²".into()));
    }
    let t = if w2.0.norm() >= w2.1.norm() { w1.0 / w2.0 } else { w1.1 / w2.1 };
    if t.im.abs() <= 1e-9 * t.norm().max(1.0) {
        return Err(ClassifyError::NotComplexLine(format!("t = {} is real; generators are ℝ-dependent", t.re)));
    }
    let slope = if w2.0.norm() > 1e-12 * (w2.0.norm() + w2.1.norm()) {
        let r = w2.1 / w2.0;
        Some([r.re, r.im])
    } else {
        None
    };
    Ok(ComplexLine { w1, w2, sigma, slope, t })
}

/// Re-tags `line` (bialgebraic for `sub`) as a line for `sup ⊇ sub`;
/// returns the index `[sup : sub]`.
pub fn pushforward_line(line: &RealLine, sub: &Lattice, sup: &Lattice) -> Result<(RealLine, i64), ClassifyError> {
    match sub.index_in(sup, 1e-9) {
        Some(idx) if idx > 0 => Ok((*line, idx)),
        _ => Err(ClassifyError::NotSublattice),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, IntKernelBasis};

    const EPS: f64 = 1e-12;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < EPS
    }

    #[test]
    fn classification_examples() {
        let c = classify(&TauSpec::numeric(0.123, 1.456, Some(IntKernelBasis::empty())).unwrap()).unwrap();
        assert_eq!(c.branch, Branch::OnlySingletons { reason: SingletonReason::NotIsogenous, abs_gamma_sq: None });
        assert!(!c.isogenous_to_self_conjugate);
        assert!(c.geodesic.is_none());

        let c = classify(&TauSpec::geodesic(Triple::new(2, 1, 0), 0.3, true).unwrap()).unwrap();
        assert_eq!(
            c.branch,
            Branch::OnlySingletons { reason: SingletonReason::AbsGammaIrrational, abs_gamma_sq: Some(2) }
        );

        let c = classify(&TauSpec::geodesic(Triple::new(0, 0, 1), 1.2599210498948732, true).unwrap()).unwrap();
        match c.branch {
            Branch::TwoLineFamily { gamma, l1, l2, .. } => {
                assert!(close(gamma, Complex64::new(1.0, 0.0)));
                assert!(close(l1.direction(), Complex64::new(1.0, 0.0)));
                assert!(close(l2.direction(), Complex64::new(0.0, 1.0)));
            }
            b => panic!("unexpected {b:?}"),
        }
        assert!(c.isogenous_to_self_conjugate);

        let c = classify(&TauSpec::i()).unwrap();
        assert_eq!(c.branch, Branch::CmFamily { minpoly: MinPoly { a: 1, b: 0, c: 1 } });
    }

    #[test]
    fn unit_circle_lines_bisect() {
        let theta: f64 = 1.9;
        let spec = TauSpec::geodesic(Triple::new(1, 1, 0), theta, true).unwrap();
        let c = classify(&spec).unwrap();
        let Branch::TwoLineFamily { gamma, sqrt_gamma, l1, l2, .. } = c.branch else { panic!() };
        assert!(close(gamma, spec.tau().conj()));
        assert!(close(sqrt_gamma, Complex64::from_polar(1.0, -theta / 2.0)));
        assert!(close(l1.direction(), Complex64::from_polar(1.0, theta / 2.0)));
        let d2 = Complex64::from_polar(1.0, theta / 2.0 + std::f64::consts::FRAC_PI_2);
        assert!(close(l2.direction(), d2) || close(l2.direction(), -d2));
        // r = ±γ/|γ|
        assert!(close(l1.r, gamma / gamma.norm()));
        assert!(close(l2.r, -gamma / gamma.norm()));
        assert!((sqrt_gamma * l1.direction()).im.abs() < EPS);
        assert!((sqrt_gamma * l2.direction()).re.abs() < EPS);
    }

    #[test]
    fn sign_of_square_root_is_irrelevant() {
        let spec = TauSpec::geodesic(Triple::new(4, 2, 1), 1.1, true).unwrap();
        let c = classify(&spec).unwrap();
        let Branch::TwoLineFamily { sqrt_gamma, l1, l2, .. } = c.branch else { panic!("{:?}", c.branch) };
        let m1 = line_from_rho(-sqrt_gamma, Complex64::new(0.0, 0.0)).unwrap();
        let m2 = line_from_rho(-sqrt_gamma * Complex64::new(0.0, -1.0), Complex64::new(0.0, 0.0)).unwrap();
        assert!((m1.angle() - l1.angle()).abs() < EPS);
        assert!((m2.angle() - l2.angle()).abs() < EPS);
    }

    #[test]
    fn gaussian_directions() {
        let lines = bialgebraic_lines(&TauSpec::i(), 1).unwrap();
        assert_eq!(lines.len(), 4);
        let dirs: Vec<Complex64> = lines.iter().map(|l| l.rho.inv()).collect();
        for want in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(1.0, 1.0), Complex64::new(-1.0, 1.0)] {
            assert!(dirs.iter().any(|d| close(*d, want)), "{want} missing");
        }
        assert_eq!(primitive_directions(2).len(), 8);
    }

    #[test]
    fn cm_lines_contain_lattice_points() {
        let spec = TauSpec::exact_quadratic(rat(1, 2), rat(1, 2), -7).unwrap();
        let lat = Lattice::from_tau(&spec);
        for l in bialgebraic_lines(&spec, 3).unwrap() {
            let LineOrigin::LatticeDirection { m, n } = l.origin else { panic!() };
            let p = l.rho.inv();
            assert!(lattice_membership(p, &lat, 1e-12).unwrap());
            assert_eq!(lattice_direction_of(l.direction(), spec.tau()), Some((m, n)));
        }
    }

    #[test]
    fn slope_examples() {
        let l = line_from_rho(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)).unwrap();
        assert!(close(l.r, Complex64::new(1.0, 0.0)) && close(l.direction(), Complex64::new(1.0, 0.0)));
        let l = line_from_rho(Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)).unwrap();
        assert!(close(l.r, Complex64::new(-1.0, 0.0)) && close(l.direction(), Complex64::new(0.0, 1.0)));
        let l = rho_from_lattice_direction(1, 1, &TauSpec::i()).unwrap();
        assert!(close(l.r, Complex64::new(0.0, -1.0)));
        assert!(l.slope_residual(Complex64::new(2.0, 2.0)) < EPS);
        assert_eq!(rho_from_lattice_direction(0, 0, &TauSpec::i()), Err(ClassifyError::ZeroDirection));
        assert!(line_from_rho(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)).is_err());
    }

    #[test]
    fn membership_of_lines() {
        let c = classify(&TauSpec::i()).unwrap();
        let diag = RealLine::from_direction(Complex64::new(3.0, -3.0), Complex64::new(0.2, 0.1)).unwrap();
        assert!(c.contains_line(&diag));
        let irr = RealLine::from_direction(Complex64::new(1.0, 2f64.sqrt()), Complex64::new(0.0, 0.0)).unwrap();
        assert!(!c.contains_line(&irr));

        let spec = TauSpec::geodesic(Triple::new(1, 1, 0), 1.9, true).unwrap();
        let c = classify(&spec).unwrap();
        let x_axis = RealLine::from_direction(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)).unwrap();
        assert!(!c.contains_line(&x_axis));
        let l1 = RealLine::from_direction(Complex64::from_polar(1.0, 0.95), Complex64::new(0.5, 0.0)).unwrap();
        assert!(c.contains_line(&l1));
    }

    #[test]
    fn complex_lines() {
        let lat = Lattice::from_tau(&TauSpec::i());
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let zero = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        let w = complex_bialgebraic_line((one, one), (i, i), zero, &lat).unwrap();
        assert_eq!(w.slope, Some([1.0, 0.0]));
        let w = complex_bialgebraic_line((-one, one), (-i, i), zero, &lat).unwrap();
        assert_eq!(w.slope, Some([-1.0, 0.0]));
        assert!(matches!(
            complex_bialgebraic_line((one, one), (one * 2.0, one * 2.0), zero, &lat),
            Err(ClassifyError::NotComplexLine(_))
        ));
        assert_eq!(
            complex_bialgebraic_line((one * 0.5, one), (i, i), zero, &lat),
            Err(ClassifyError::NotLatticePoint(1))
        );
        assert!(matches!(
            complex_bialgebraic_line((one, one), (i, one), zero, &lat),
            Err(ClassifyError::NotComplexLine(_))
        ));
    }

    #[test]
    fn pushforward() {
        let spec = TauSpec::exact_quadratic(rat(1, 2), rat(1, 2), -7).unwrap();
        let lat = Lattice::from_tau(&spec);
        // Λ ∩ Λ̄ = ⟨1, i√7⟩
        let inter = Lattice::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 7f64.sqrt())).unwrap();
        let x_axis = RealLine::from_direction(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)).unwrap();
        let (l, idx) = pushforward_line(&x_axis, &inter, &lat).unwrap();
        assert_eq!((l, idx), (x_axis, 2));

        let gauss = Lattice::from_tau(&TauSpec::i());
        let twice = gauss.scaled(Complex64::new(2.0, 0.0)).unwrap();
        assert_eq!(pushforward_line(&x_axis, &twice, &gauss).unwrap().1, 4);
        assert_eq!(pushforward_line(&x_axis, &gauss, &twice), Err(ClassifyError::NotSublattice));
    }

    #[test]
    fn report_serializes() {
        let r = classify(&TauSpec::i()).unwrap().report(1);
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["branch"], "CM_FAMILY");
        assert_eq!(v["lines"].as_array().unwrap().len(), 4);
        assert_eq!(v["geodesic"]["kind"], "VERTICAL");
        let r = classify(&TauSpec::geodesic(Triple::new(2, 1, 0), 0.3, true).unwrap()).unwrap().report(5);
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["reason"], "ABS_GAMMA_IRRATIONAL");
        assert_eq!(v["geodesic"]["endpoint_class"], "CONJ_REAL_QUADRATIC");
    }

    #[test]
    fn line_specs() {
        let spec = TauSpec::geodesic(Triple::new(0, 0, 1), 1.5, true).unwrap();
        let axes = classify(&spec).unwrap();
        let l1 = LineSpec::from_json(r#"{"kind":"sqrt_gamma","index":1}"#).unwrap().resolve(&spec).unwrap();
        assert_eq!(l1.origin, LineOrigin::SqrtGamma { index: 1 });
        assert!(l1.angle().abs() < EPS);
        let l = LineSpec::from_json(r#"{"kind":"direction","re":0,"im":2,"offset":[0,0.5]}"#).unwrap();
        let l = l.resolve(&spec).unwrap();
        assert!(close(l.direction(), Complex64::new(0.0, 1.0)) && close(l.offset, Complex64::new(0.0, 0.5)));
        assert!(axes.contains_line(&l));
        assert!(LineSpec::from_json(r#"{"kind":"sqrt_gamma","index":3}"#).unwrap().resolve(&spec).is_err());

        let d = LineSpec::LatticeDirection { m: 1, n: 1, offset: [0.0, 0.0] }.resolve(&TauSpec::i()).unwrap();
        assert!(close(d.r, Complex64::new(0.0, -1.0)));
        assert!(LineSpec::SqrtGamma { index: 1, offset: [0.0, 0.0] }.resolve(&TauSpec::i()).is_err());
        assert!(LineSpec::from_json(r#"{"kind":"rho","re":0,"im":0}"#).unwrap().resolve(&TauSpec::i()).is_err());
        assert!(LineSpec::from_json(r#"{"kind":"slope"}"#).is_err());
    }
}
