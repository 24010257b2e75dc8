//! Browser bindings: classification, sampled line images and torus orbits.
//!
//! Every entry point takes JSON strings (the same τ and line formats as the
//! command-line tool) and returns a JSON string.

use bialg_core::classify::{classify, LineSpec, RealLine};
use bialg_core::lattice::{Lattice, TauSpec};
use bialg_core::verify::{fit_vanishing_poly_with_height, sample_line, torus_coverage, Verdict, VerifyCfg};
use bialg_core::weierstrass::{PrecisionCfg, Weierstrass};
use serde::Serialize;
use wasm_bindgen::prelude::*;

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

fn parse(tau: &str, line: &str) -> Result<(TauSpec, RealLine), String> {
    let spec = TauSpec::from_json(tau).map_err(|e| e.to_string())?;
    let line = LineSpec::from_json(line).and_then(|l| l.resolve(&spec)).map_err(|e| e.to_string())?;
    Ok((spec, line))
}

pub fn classify_json(tau: &str, height_bound: i64) -> Result<String, String> {
    let spec = TauSpec::from_json(tau).map_err(|e| e.to_string())?;
    let c = classify(&spec).map_err(|e| e.to_string())?;
    to_json(&c.report(height_bound.clamp(1, 20)))
}

#[derive(Serialize)]
struct ImageOut {
    images: Vec<[f64; 2]>,
    dropped: usize,
    predicted: Option<bool>,
    verdict: Verdict,
    degree: Option<usize>,
    exact_poly: Option<String>,
    sv_ratio: f64,
}

pub fn line_image_json(tau: &str, line: &str, n: usize, seed: u64, max_deg: usize) -> Result<String, String> {
    let (spec, line) = parse(tau, line)?;
    let cfg = VerifyCfg {
        precision: PrecisionCfg::with_digits(30),
        n: n.clamp(16, 2048),
        max_deg: max_deg.clamp(1, 8),
        seed,
        ..VerifyCfg::default()
    };
    let w = Weierstrass::from_spec(&spec, &cfg.precision).map_err(|e| e.to_string())?;
    let s = sample_line(&line, &w, Some(&spec), &cfg).map_err(|e| e.to_string())?;
    let fit = fit_vanishing_poly_with_height(&s.images, cfg.max_deg, &cfg.tol, cfg.snap_height)
        .map_err(|e| e.to_string())?;
    // floats without a certificate still plot, just without a prediction
    let predicted = classify(&spec).ok().map(|c| c.contains_line(&line));
    to_json(&ImageOut {
        images: s.images,
        dropped: s.dropped,
        predicted,
        verdict: fit.verdict,
        degree: fit.degree,
        exact_poly: fit.exact_string("X", "Y"),
        sv_ratio: fit.sv_ratio,
    })
}

#[derive(Serialize)]
struct OrbitOut {
    /// Points of the line reduced to `[0, 1)²` in `(ω₁, ω₂)` coordinates.
    torus: Vec<[f64; 2]>,
    coverage: f64,
    coverage_half: f64,
    k: usize,
}

pub fn torus_orbit_json(tau: &str, line: &str, k: usize, n: usize) -> Result<String, String> {
    let (spec, line) = parse(tau, line)?;
    let lat = Lattice::from_tau(&spec);
    let (k, n) = (k.clamp(2, 64), n.clamp(16, 20000));
    let (coverage, coverage_half) = torus_coverage(&lat, &line, k, n, 1);
    let length = (n as f64 / (2.0 * k as f64)).max(3.0) * lat.area().sqrt();
    let dir = line.direction();
    let torus = (0..n)
        .map(|i| {
            let (a, b) = lat.coords(line.offset + dir * (length * i as f64 / n as f64));
            [a.rem_euclid(1.0), b.rem_euclid(1.0)]
        })
        .collect();
    to_json(&OrbitOut { torus, coverage, coverage_half, k })
}

#[wasm_bindgen]
pub fn classify_tau(tau: &str, height_bound: i32) -> Result<String, JsError> {
    classify_json(tau, height_bound as i64).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn line_image(tau: &str, line: &str, n: u32, seed: u32, max_deg: u32) -> Result<String, JsError> {
    line_image_json(tau, line, n as usize, seed as u64, max_deg as usize).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn torus_orbit(tau: &str, line: &str, k: u32, n: u32) -> Result<String, JsError> {
    torus_orbit_json(tau, line, k as usize, n as usize).map_err(|e| JsError::new(&e))
}
