//! Norm continuity along the semiclassical grid: ‖Q(f, N)‖ climbs toward
//! sup|f| as N grows, with the final gap under 2% of sup|f|, and the state
//! expectations of Q(f) stay inside the classical range. These are the
//! quantitative forms of the bundle-continuity statements the rest of the
//! toolkit leans on.

use num_complex::Complex64;

use spinlim::dicke::DickeVector;
use spinlim::extrema::{range, sup_norm};
use spinlim::models::{model_symbol, ModelSpec};
use spinlim::poly::SpherePolynomial;
use spinlim::quantize::quantize;
use spinlim::semiclassics::{classical_expectation, quantized_norm};
use spinlim::util::SplitMix64;

#[test]
fn quantized_norms_increase_toward_sup_norm() {
    let cw_h0 = model_symbol(&ModelSpec::CurieWeiss {
        coupling: 1.0,
        field: 0.5,
    })
    .principal;
    let cases = [
        SpherePolynomial::z(),
        SpherePolynomial::parse("x^2").unwrap().reduce_mod_sphere(),
        cw_h0,
    ];
    for f in &cases {
        let target = sup_norm(f);
        let mut prev = 0.0f64;
        let mut last_gap = f64::INFINITY;
        for n in [16usize, 32, 64, 128, 256, 512] {
            let nrm = quantized_norm(f, n).unwrap();
            assert!(
                nrm >= prev - 1e-12,
                "f = {f}: norm must not decrease along N ({prev} then {nrm})"
            );
            assert!(
                nrm <= target * (1.0 + 1e-9),
                "f = {f}: ‖Q(f)‖ = {nrm} exceeds sup|f| = {target}"
            );
            prev = nrm;
            last_gap = target - nrm;
        }
        assert!(
            last_gap <= 0.02 * target,
            "f = {f}: final gap {last_gap} above 2% of sup|f| = {target}"
        );
    }
}

#[test]
fn norm_defect_halves_under_doubling() {
    // |sup|f| − ‖Q(f, N)‖| is the norm defect; along a doubling grid the
    // ratio sits in the O(1/N) window
    let f = SpherePolynomial::parse("x^2").unwrap().reduce_mod_sphere();
    let target = sup_norm(&f);
    let mut defects = Vec::new();
    for n in [64usize, 128, 256, 512] {
        defects.push(target - quantized_norm(&f, n).unwrap());
    }
    for w in defects.windows(2) {
        let ratio = w[0] / w[1];
        assert!(
            (1.4..=2.6).contains(&ratio),
            "doubling ratio {ratio} outside [1.4, 2.6]: {defects:?}"
        );
    }
}

#[test]
fn expectations_stay_inside_the_classical_range() {
    let mut rng = SplitMix64::new(8080);
    for _ in 0..25 {
        let f = {
            let mut terms = Vec::new();
            for _ in 0..4 {
                let a = rng.below(3) as u32;
                let b = rng.below(3 - a as usize + 1) as u32;
                let c = rng.below(2) as u32;
                terms.push((
                    spinlim::poly::Monomial::new(a, b, c),
                    Complex64::new(rng.uniform(-1.0, 1.0), 0.0),
                ));
            }
            SpherePolynomial::from_terms(terms)
                .unwrap()
                .reduce_mod_sphere()
        };
        let r = range(&f);
        let n = 8 + rng.below(40);
        let psi = DickeVector::random_unit(n, &mut rng);
        let v = classical_expectation(&psi, &f).unwrap();
        assert!(
            v >= r.lo - 1e-9 && v <= r.hi + 1e-9,
            "⟨ψ, Q(f)ψ⟩ = {v} outside [{}, {}]",
            r.lo,
            r.hi
        );
    }
}

#[test]
fn quantize_band_is_inside_the_degree() {
    let mut rng = SplitMix64::new(9090);
    for _ in 0..10 {
        let deg = 1 + rng.below(4) as u32;
        let f = {
            let mut terms = Vec::new();
            for _ in 0..4 {
                let a = rng.below(deg as usize + 1) as u32;
                let b = rng.below((deg - a) as usize + 1) as u32;
                let c = rng.below(((deg - a - b) as usize).min(1) + 1) as u32;
                terms.push((
                    spinlim::poly::Monomial::new(a, b, c),
                    Complex64::new(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)),
                ));
            }
            SpherePolynomial::from_terms(terms).unwrap()
        };
        let n = 10 + rng.below(20);
        let q = quantize(&f, n).unwrap();
        assert!(q.halfband() <= f.degree().min(n));
        // entries beyond the polynomial's degree vanish identically: the
        // storage never holds them, and the accessor returns exact zeros
        for j in 0..=n {
            for k in 0..=n {
                if k.abs_diff(j) > f.degree() {
                    assert_eq!(q.get(j, k), Complex64::new(0.0, 0.0));
                }
            }
        }
    }
}
