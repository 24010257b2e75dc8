use bialg_core::classify::{classify, Branch, RealLine};
use bialg_core::exactnum::Triple;
use bialg_core::lattice::TauSpec;
use bialg_core::mp::Complex;
use bialg_core::verify::{
    diagram_residual, f_map, f_map_c64, g_map, g_map_c64, monomial_count, snap_integer_relation, verify_line,
    Verdict, VerifyCfg,
};
use bialg_core::weierstrass::{homogeneity_check, PrecisionCfg, Weierstrass};
use num_complex::Complex64;
use num_integer::Integer;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cfg() -> PrecisionCfg {
    PrecisionCfg::with_digits(40)
}

/// Primitive triples defining a geodesic, with a valid position on it.
fn arb_geodesic() -> impl Strategy<Value = (Triple, f64)> {
    (-6i64..=6, -6i64..=6, -6i64..=6, 0.15f64..0.85)
        .prop_filter("geodesic", |&(b, c, d, _)| {
            if c == 0 {
                d != 0
            } else {
                d * d + b * c > 0
            }
        })
        .prop_map(|(b, c, d, u)| {
            let t = Triple::new(b, c, d).primitive();
            let pos = if t.c == 0 { 0.4 + 3.0 * u } else { std::f64::consts::PI * u };
            (t, pos)
        })
}

fn is_square(n: i64) -> bool {
    let r = (n as f64).sqrt().round() as i64;
    r * r == n
}

proptest! {
    #[test]
    fn f_and_g_are_inverse(v in (-1e3f64..1e3, -1e3f64..1e3), w in (-1e3f64..1e3, -1e3f64..1e3)) {
        let (v, w) = (c(v.0, v.1), c(w.0, w.1));
        let (a, b) = f_map_c64(v, w);
        let (v2, w2) = g_map_c64(a, b);
        prop_assert!((v2 - v).norm() <= 1e-12 * (1.0 + v.norm()));
        prop_assert!((w2 - w).norm() <= 1e-12 * (1.0 + w.norm()));

        let (vm, wm) = (Complex::from_c64(v, 256), Complex::from_c64(w, 256));
        let (am, bm) = f_map(&vm, &wm);
        let (v3, w3) = g_map(&am, &bm);
        prop_assert!((&v3 - &vm).abs().to_f64() < 1e-60);
        prop_assert!((&w3 - &wm).abs().to_f64() < 1e-60);
    }

    #[test]
    fn geodesic_classification_invariants((t, pos) in arb_geodesic()) {
        let spec = TauSpec::geodesic(t, pos, true).unwrap();
        let cl = classify(&spec).unwrap();
        let iso = &cl.isogeny;
        prop_assert_eq!(iso.rank, 1);
        let g = iso.basis.rows[0];
        prop_assert_eq!(g.primitive(), g);
        prop_assert!(g == t || g == t.neg());
        let [[a, b], [cc, d]] = iso.matrices[0];
        prop_assert_eq!(a + d, 0);
        prop_assert!(a * d - b * cc < 0);
        prop_assert_eq!(iso.abs_sq[0], -(a * d - b * cc));
        let gamma = iso.gammas[0];
        prop_assert!((gamma.norm_sqr() - iso.abs_sq[0] as f64).abs() < 1e-9 * (1.0 + gamma.norm_sqr()));
        // τ lies on the geodesic of the generator
        let tau = spec.tau();
        let resid = g.c as f64 * tau.norm_sqr() + 2.0 * g.d as f64 * tau.re - g.b as f64;
        prop_assert!(resid.abs() < 1e-9);

        match &cl.branch {
            Branch::TwoLineFamily { l1, l2, .. } => {
                prop_assert!(is_square(iso.abs_sq[0]));
                let (v1, v2) = (gamma * l1.direction().powi(2), gamma * l2.direction().powi(2));
                prop_assert!(v1.im.abs() < 1e-9 * v1.norm() && v1.re > 0.0);
                prop_assert!(v2.im.abs() < 1e-9 * v2.norm() && v2.re < 0.0);
                prop_assert_eq!(cl.lines(5).len(), 2);
            }
            Branch::OnlySingletons { .. } => prop_assert!(!is_square(iso.abs_sq[0])),
            Branch::CmFamily { .. } => prop_assert!(false, "generic geodesic point classified as CM"),
        }
    }

    #[test]
    fn line_membership_is_translation_invariant(
        (t, pos) in arb_geodesic(),
        angle in 0.0f64..std::f64::consts::PI,
        off in (-5.0f64..5.0, -5.0f64..5.0),
    ) {
        let spec = TauSpec::geodesic(t, pos, true).unwrap();
        let cl = classify(&spec).unwrap();
        let off = c(off.0, off.1);
        let free = RealLine::from_direction(Complex64::from_polar(1.0, angle), c(0.0, 0.0)).unwrap();
        prop_assert_eq!(cl.contains_line(&free), cl.contains_line(&free.translate(off)));
        for l in cl.lines(3) {
            prop_assert!(cl.contains_line(&l.translate(off)));
        }
    }

    #[test]
    fn cm_lines_are_lattice_directions(m in -7i64..=7, n in -7i64..=7, off in (-3.0f64..3.0, -3.0f64..3.0)) {
        prop_assume!(m.gcd(&n) == 1);
        let spec = TauSpec::from_json(r#"{"mode":"exact_quadratic","p":"1/2","q":"1/2","d":-7}"#).unwrap();
        let cl = classify(&spec).unwrap();
        let dir = spec.tau() * n as f64 + m as f64;
        let l = RealLine::from_direction(dir, c(off.0, off.1)).unwrap();
        prop_assert!(cl.contains_line(&l));
        let tilted = RealLine::from_direction(dir * Complex64::from_polar(1.0, 1e-3), c(0.0, 0.0)).unwrap();
        prop_assert!(!cl.contains_line(&tilted));
    }

    #[test]
    fn snapping_recovers_small_integer_relations(
        deg in 1usize..=3,
        raw in prop::collection::vec(-9i64..=9, 10),
        noise in prop::collection::vec(-1.0f64..1.0, 10),
    ) {
        let m = monomial_count(deg);
        let a = &raw[..m];
        prop_assume!(a.iter().any(|&x| x != 0));
        let norm = a.iter().map(|&x| (x * x) as f64).sum::<f64>().sqrt();
        let coeffs: Vec<f64> = a.iter().zip(&noise).map(|(&x, e)| x as f64 / norm + 1e-12 * e).collect();
        let p = snap_integer_relation(&coeffs, 50).expect("snapped");
        prop_assert_eq!(p.degree, deg);
        let g = a.iter().fold(0i64, |g, &x| g.gcd(&x));
        let prim: Vec<i64> = a.iter().map(|x| x / g).collect();
        let neg: Vec<i64> = prim.iter().map(|x| -x).collect();
        prop_assert!(p.coeffs == prim || p.coeffs == neg);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn diagram_commutes((t, pos) in arb_geodesic(), z in (-3.0f64..3.0, -3.0f64..3.0)) {
        let spec = TauSpec::geodesic(t, pos, true).unwrap();
        let w = Weierstrass::from_spec(&spec, &cfg()).unwrap();
        let wc = w.conj().unwrap();
        let z = Complex::from_f64(z.0, z.1, w.prec());
        if let Some(r) = diagram_residual(&w, &wc, &z) {
            prop_assert!(r < cfg().identity_tolerance(), "residual {r:e}");
        }
    }

    #[test]
    fn wp_is_even_periodic_and_homogeneous(
        z in (-2.0f64..2.0, -2.0f64..2.0),
        rho in (0.3f64..3.0, -std::f64::consts::PI..std::f64::consts::PI),
    ) {
        let spec = TauSpec::geodesic(Triple::new(1, 1, 0), 1.9, true).unwrap();
        let w = Weierstrass::from_spec(&spec, &cfg()).unwrap();
        let zz = Complex::from_f64(z.0, z.1, w.prec());
        let tol = cfg().identity_tolerance();
        if let Some(p) = w.wp(&zz).value() {
            let scale = p.abs().to_f64().max(1.0);
            let (o1, o2) = w.periods();
            for other in [-&zz, &zz + o1, &zz - o2, &(&zz + o1) + o2] {
                let q = w.wp(&other).value().unwrap().clone();
                prop_assert!((&q - p).abs().to_f64() / scale < tol);
            }
            let r = Complex64::from_polar(rho.0, rho.1);
            let h = homogeneity_check(&zz, &Complex::from_c64(r, w.prec()), &spec, &cfg()).unwrap();
            prop_assert!(h < tol, "homogeneity residual {h:e}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(3))]

    #[test]
    fn translated_x_axis_stays_vanishing(off in (-2.0f64..2.0, -2.0f64..2.0), seed in 1u64..1000) {
        let spec = TauSpec::geodesic(Triple::new(0, 0, 1), 1.2599210498948732, true).unwrap();
        let line = RealLine::from_direction(c(1.0, 0.0), c(off.0, off.1)).unwrap();
        let cfg = VerifyCfg { seed, ..VerifyCfg::default() };
        let v = verify_line(&spec, &line, &cfg).unwrap();
        prop_assert!(v.predicted);
        prop_assert_eq!(v.fit.verdict, Verdict::Vanishing);
        prop_assert_eq!(v.agree, Some(true));
    }
}
