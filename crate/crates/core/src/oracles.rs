//! Independent reference computations used to cross-check the main algorithms.

use gauss_quad::GaussLegendre;
use num_complex::Complex64;

use crate::exactnum::Triple;
use crate::lattice::TauSpec;
use crate::mp::{bits_for_digits, Complex};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DirectInvariants {
    pub g2: Complex64,
    pub g3: Complex64,
    /// Plain truncated sums, without the tail estimate.
    pub g2_raw: Complex64,
    pub g3_raw: Complex64,
}

/// Kahan-compensated complex accumulator.
#[derive(Default)]
struct KahanSum {
    sum: Complex64,
    comp: Complex64,
}

impl KahanSum {
    fn add(&mut self, x: Complex64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }
}

/// `(1/area)·∫ z^{−k} dA` over the complement of the parallelogram
/// `{aω₁ + bω₂ : |a|, |b| ≤ h}`, via `∬ f dA = (1/2i)∮ z̄ f dz`.
fn exterior_integral(omega1: Complex64, omega2: Complex64, h: f64, k: i32, gl: &GaussLegendre) -> Complex64 {
    let area = (omega1.conj() * omega2).im.abs();
    let orient = if (omega1.conj() * omega2).im > 0.0 { 1.0 } else { -1.0 };
    let v = [
        -omega1 * h - omega2 * h,
        omega1 * h - omega2 * h,
        omega1 * h + omega2 * h,
        -omega1 * h + omega2 * h,
    ];
    const SEGMENTS: usize = 8;
    let mut total = Complex64::new(0.0, 0.0);
    for e in 0..4 {
        let (a, b) = (v[e], v[(e + 1) % 4]);
        let dz = b - a;
        let f = |s: f64| {
            let z = a + dz * s;
            z.conj() * z.powi(-k) * dz
        };
        for seg in 0..SEGMENTS {
            let (s0, s1) = (seg as f64 / SEGMENTS as f64, (seg + 1) as f64 / SEGMENTS as f64);
            let re = gl.integrate(s0, s1, |s| f(s).re);
            let im = gl.integrate(s0, s1, |s| f(s).im);
            total += Complex64::new(re, im);
        }
    }
    // the exterior is bounded by ∂R traversed clockwise
    -orient * total / Complex64::new(0.0, 2.0) / area
}

/// `g2 = 60 Σ′ ω⁻⁴`, `g3 = 140 Σ′ ω⁻⁶` over `ω = mω₁ + nω₂`, `|m|, |n| ≤ n_max`,
/// plus a continuum estimate of the omitted tail.
pub fn direct_lattice_invariants(omega1: Complex64, omega2: Complex64, n_max: i64) -> DirectInvariants {
    let mut s4 = KahanSum::default();
    let mut s6 = KahanSum::default();
    // outermost shells first so that small terms are accumulated first
    for r in (1..=n_max).rev() {
        for m in -r..=r {
            for n in -r..=r {
                if m.abs().max(n.abs()) != r {
                    continue;
                }
                let w = omega1 * m as f64 + omega2 * n as f64;
                let w2 = w * w;
                let inv4 = (w2 * w2).inv();
                s4.add(inv4);
                s6.add(inv4 / w2);
            }
        }
    }
    let gl = GaussLegendre::new(64).expect("valid degree");
    let h = n_max as f64 + 0.5;
    let t4 = exterior_integral(omega1, omega2, h, 4, &gl);
    let t6 = exterior_integral(omega1, omega2, h, 6, &gl);
    DirectInvariants {
        g2: (s4.sum + t4) * 60.0,
        g3: (s6.sum + t6) * 140.0,
        g2_raw: s4.sum * 60.0,
        g3_raw: s6.sum * 140.0,
    }
}

/// All triples with entries in `[−bound, bound]` satisfying
/// `c·s + 2d·x − b = 0` to 30 digits, computed from τ at 60 digits.
pub fn brute_force_relations(spec: &TauSpec, bound: i64) -> Vec<Triple> {
    let prec = bits_for_digits(60);
    let tau: Complex = spec.tau_mp(prec);
    let x = tau.re.clone();
    let s = tau.norm_sqr();
    let tol = 1e-30;
    let mut out = Vec::new();
    for b in -bound..=bound {
        for c in -bound..=bound {
            for d in -bound..=bound {
                if b == 0 && c == 0 && d == 0 {
                    continue;
                }
                let v = &(&s.mul_i64(c) + &x.mul_i64(2 * d)) - &crate::mp::Real::from_i64(b, prec);
                if v.abs().to_f64() < tol {
                    out.push(Triple::new(b, c, d));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_estimate_matches_square_lattice_symmetry() {
        // G6 vanishes on ℤ[i]; the rectangle tail integral must respect that too
        let d = direct_lattice_invariants(Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), 60);
        assert!(d.g3.norm() < 1e-10);
        // g2(i) = Γ(1/4)⁸ / (16π²)
        let g2 = 189.072_720_129_233_85;
        assert!((d.g2.re - g2).abs() < 1e-6, "{}", d.g2);
        assert!((d.g2_raw.re - g2).abs() > 1e-4);
    }
}
