//! The Berezin quantization map on the sphere: Q(p) is the (N+1)×(N+1)
//! matrix (N+1)/(4π) ∫ p(Ω) |v^(Ω)⟩⟨v^(Ω)| dΩ, realized by an exact product
//! quadrature. The φ integral uses a uniform grid with M ≥ N + deg(p) + 1
//! nodes (exact for trigonometric polynomials of degree ≤ M − 1; the
//! integrand has degree ≤ N + deg p). After the φ integration the θ
//! integrand is a polynomial of degree ≤ N + deg p in t = cos θ, so
//! Gauss–Legendre with ⌈(N + deg p + 1)/2⌉ nodes finishes the job exactly.
//! Doubling either resolution therefore moves matrix entries only at the
//! roundoff level, which the tests pin down.
//!
//! A closed-form Beta-integral evaluation of monomial matrix elements lives
//! in `monomial_reference`; it shares no code with the quadrature path and
//! serves as its independent cross-check at small N.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dicke::{coherent_magnitudes, coherent_state, DickeVector};
use crate::error::{Error, Result};
use crate::operator::QuantizedOperator;
use crate::poly::{Monomial, SpherePolynomial};
use crate::quad::{uniform_angles, GaussLegendre};
use crate::sphere::SpherePoint;
use crate::util::{binomial, KahanSum, KahanSumC};

/// Number of fixed accumulation chunks; constant so that the summation
/// order, and hence the result, does not depend on the worker count.
const CHUNKS: usize = 32;

/// Q(p) for a canonical polynomial, with the default (minimal exact)
/// quadrature orders. Rejects non-canonical input: the degree-derived node
/// counts and the halfband are only meaningful for the canonical
/// representative.
pub fn quantize(p: &SpherePolynomial, n_sites: usize) -> Result<QuantizedOperator> {
    let d = p.degree();
    let m_phi = n_sites + d + 1;
    let k_t = (n_sites + d + 1).div_ceil(2);
    quantize_with_orders(p, n_sites, m_phi, k_t)
}

/// Q(p) with explicit quadrature orders (≥ the defaults keeps exactness;
/// exposed so tests can double the resolutions).
pub fn quantize_with_orders(
    p: &SpherePolynomial,
    n_sites: usize,
    m_phi: usize,
    k_t: usize,
) -> Result<QuantizedOperator> {
    if !p.is_canonical() {
        return Err(Error::Precondition(
            "quantize requires the canonical representative (apply reduce_mod_sphere)".into(),
        ));
    }
    let d = p.degree();
    if m_phi < n_sites + d + 1 || k_t < (n_sites + d + 1).div_ceil(2) {
        return Err(Error::Precondition(format!(
            "quadrature orders ({m_phi}, {k_t}) below the exactness threshold for N = {n_sites}, deg = {d}"
        )));
    }
    let dim = n_sites + 1;
    let hb = d.min(n_sites);
    let rule = GaussLegendre::new(k_t);
    let phis = uniform_angles(m_phi);
    let d_phi = 2.0 * PI / m_phi as f64;
    let prefactor = (n_sites as f64 + 1.0) / (4.0 * PI);

    let terms: Vec<(Monomial, Complex64)> = p.terms().map(|(m, c)| (*m, *c)).collect();
    let cos_phi: Vec<f64> = phis.iter().map(|p| p.cos()).collect();
    let sin_phi: Vec<f64> = phis.iter().map(|p| p.sin()).collect();
    // e^{-i phi_r} rotation table for the offset transform
    let rot: Vec<Complex64> = phis
        .iter()
        .map(|&p| Complex64::from_polar(1.0, -p))
        .collect();

    let chunks = CHUNKS.min(k_t).max(1);
    let partials: Vec<Vec<Vec<KahanSumC>>> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let lo = chunk * k_t / chunks;
            let hi = (chunk + 1) * k_t / chunks;
            let mut acc: Vec<Vec<KahanSumC>> = (0..=2 * hb)
                .map(|dd| {
                    let o = dd as isize - hb as isize;
                    vec![KahanSumC::new(); dim - o.unsigned_abs()]
                })
                .collect();
            let mut values = vec![Complex64::new(0.0, 0.0); m_phi];
            let mut s_pos = vec![Complex64::new(0.0, 0.0); hb + 1];
            let mut s_neg = vec![Complex64::new(0.0, 0.0); hb + 1];
            for q in lo..hi {
                let t = rule.nodes[q];
                let w = rule.weights[q];
                let theta = t.clamp(-1.0, 1.0).acos();
                let sin_theta = (1.0 - t * t).max(0.0).sqrt();
                let cmag = coherent_magnitudes(n_sites, theta);

                // polynomial values around the circle of latitude
                for v in values.iter_mut() {
                    *v = Complex64::new(0.0, 0.0);
                }
                for (mono, coeff) in &terms {
                    let radial = coeff * powi(sin_theta, mono.a + mono.b) * powi(t, mono.c);
                    for r in 0..m_phi {
                        values[r] += radial * powi(cos_phi[r], mono.a) * powi(sin_phi[r], mono.b);
                    }
                }

                // angular transform: S_o = Σ_r values_r e^{-i o φ_r} Δφ
                let mut cur = vec![Complex64::new(1.0, 0.0); m_phi];
                for o in 0..=hb {
                    let mut sum = KahanSumC::new();
                    for r in 0..m_phi {
                        sum.add(values[r] * cur[r]);
                        cur[r] *= rot[r];
                    }
                    s_pos[o] = sum.value() * d_phi;
                }
                let mut cur = vec![Complex64::new(1.0, 0.0); m_phi];
                for o in 0..=hb {
                    let mut sum = KahanSumC::new();
                    for r in 0..m_phi {
                        sum.add(values[r] * cur[r]);
                        cur[r] *= rot[r].conj();
                    }
                    s_neg[o] = sum.value() * d_phi;
                }

                // banded accumulation: entry (j, j+o) gains
                // prefactor · w · c̃_j c̃_{j+o} S_o
                for o in -(hb as isize)..=(hb as isize) {
                    let s = if o >= 0 {
                        s_pos[o as usize]
                    } else {
                        s_neg[(-o) as usize]
                    };
                    if s.norm() == 0.0 {
                        continue;
                    }
                    let ou = o.unsigned_abs();
                    let row = &mut acc[(hb as isize + o) as usize];
                    let scale = prefactor * w;
                    for (mi, slot) in row.iter_mut().enumerate() {
                        slot.add(s * (scale * cmag[mi] * cmag[mi + ou]));
                    }
                }
            }
            acc
        })
        .collect();

    let mut out = QuantizedOperator::zeros(n_sites, hb);
    for o in -(hb as isize)..=(hb as isize) {
        let dd = (hb as isize + o) as usize;
        let dst = out.diag_mut(o);
        for part in &partials {
            for (slot, k) in dst.iter_mut().zip(part[dd].iter()) {
                *slot += k.value();
            }
        }
    }
    if p.is_real() {
        out.hermitize();
    }
    Ok(out)
}

/// Closed-form matrix elements of Q(x^a y^b z^c) via Beta integrals: the
/// independent reference path for the quadrature (exact in the same sense,
/// different algebra). Valid for any monomial, canonical or not.
pub fn monomial_reference(mono: Monomial, n_sites: usize) -> QuantizedOperator {
    let (a, b, c) = (mono.a as usize, mono.b as usize, mono.c as usize);
    let ab = a + b;
    let dim = n_sites + 1;
    let hb = ab.min(n_sites);
    let gamma = angular_coefficients(a, b);
    let mut out = QuantizedOperator::zeros(n_sites, hb);
    for o in -(hb as isize)..=(hb as isize) {
        let mu = o;
        // harmonics of cos^a sin^b have the parity of a+b
        if (mu.rem_euclid(2) as usize) != ab % 2 {
            continue;
        }
        let g = gamma[(mu + ab as isize) as usize];
        if g.norm() == 0.0 {
            continue;
        }
        for mi in 0..dim - mu.unsigned_abs() {
            let j = mi;
            let k = mi + mu.unsigned_abs();
            let (j, k) = if mu >= 0 { (j, k) } else { (k, j) };
            // P and Q are integers because j+k and a+b share parity with mu
            let p_exp = ((2 * n_sites) as isize - (j + k) as isize + ab as isize) / 2;
            let q_exp = ((j + k + ab) / 2) as isize;
            let mut tsum = KahanSum::new();
            for e in 0..=c {
                let sign = if (c - e) % 2 == 0 { 1.0 } else { -1.0 };
                tsum.add(
                    binomial(c, e)
                        * 2f64.powi(e as i32)
                        * sign
                        * beta_int(p_exp as usize + e, q_exp as usize),
                );
            }
            let root = (binomial(n_sites, j) * binomial(n_sites, k)).sqrt();
            let val = g * ((n_sites as f64 + 1.0) * root * 2f64.powi(ab as i32) * tsum.value());
            out.set(j, k, val);
        }
    }
    out
}

/// Q(p) by summing monomial reference elements; the small-N oracle.
pub fn quantize_reference(p: &SpherePolynomial, n_sites: usize) -> QuantizedOperator {
    let hb = p.degree().min(n_sites);
    let mut out = QuantizedOperator::zeros(n_sites, hb);
    for (m, coeff) in p.terms() {
        out = out.add(&monomial_reference(*m, n_sites).scale(*coeff));
    }
    out.with_halfband(hb)
}

/// Fourier coefficients of cos^a(φ) sin^b(φ): index mu + (a+b) holds the
/// coefficient of e^{i mu φ}.
fn angular_coefficients(a: usize, b: usize) -> Vec<Complex64> {
    let ab = a + b;
    let mut gamma = vec![Complex64::new(0.0, 0.0); 2 * ab + 1];
    // (-i)^b
    let ib = match b % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    };
    let norm = 2f64.powi(-(ab as i32));
    for r in 0..=a {
        for s in 0..=b {
            let mu = 2 * (r + s) as isize - ab as isize;
            let sign = if (b - s).is_multiple_of(2) { 1.0 } else { -1.0 };
            gamma[(mu + ab as isize) as usize] +=
                ib * (norm * binomial(a, r) * binomial(b, s) * sign);
        }
    }
    gamma
}

/// B(p+1, q+1) = p! q! / (p+q+1)! as 1 / ((p+q+1)·C(p+q, p)).
fn beta_int(p: usize, q: usize) -> f64 {
    1.0 / ((p + q + 1) as f64 * binomial(p + q, p))
}

fn powi(base: f64, exp: u32) -> f64 {
    let mut acc = 1.0;
    let mut b = base;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc *= b;
        }
        b *= b;
        e >>= 1;
    }
    acc
}

/// Coherent-state expectation ⟨v^(Ω), Q(f) v^(Ω)⟩ of a real polynomial;
/// the Berezin transform of f at Ω.
pub fn berezin_transform(f: &SpherePolynomial, n_sites: usize, omega: &SpherePoint) -> Result<f64> {
    if !f.is_real() {
        return Err(Error::Precondition(
            "berezin_transform expects a real polynomial".into(),
        ));
    }
    let q = quantize(&f.reduce_mod_sphere(), n_sites)?;
    let v = coherent_state(n_sites, omega);
    Ok(q.expectation(&v, &v).re)
}

/// Husimi mass (N+1)/(4π) ∫_region |⟨v^(Ω), ψ⟩|² dΩ over the sub-region
/// where `region` holds, by product quadrature at `nodes_per_axis` nodes per
/// axis. The indicator breaks polynomial exactness, so the resolution must
/// comfortably oversample the Husimi oscillation scale; the default in
/// `husimi_mass` uses 4N per axis and doubling then moves results by far
/// less than 1e-6.
pub fn husimi_mass_with_resolution<F>(psi: &DickeVector, region: F, nodes_per_axis: usize) -> f64
where
    F: Fn(&SpherePoint) -> bool + Sync,
{
    let n_sites = psi.n_sites();
    let k_t = nodes_per_axis.max(2);
    let m_phi = nodes_per_axis.max(2);
    let rule = GaussLegendre::new(k_t);
    let phis = uniform_angles(m_phi);
    let d_phi = 2.0 * PI / m_phi as f64;
    let prefactor = (n_sites as f64 + 1.0) / (4.0 * PI);
    let chunks = CHUNKS.min(k_t).max(1);

    let partials: Vec<f64> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let lo = chunk * k_t / chunks;
            let hi = (chunk + 1) * k_t / chunks;
            let mut acc = KahanSum::new();
            for q in lo..hi {
                let t = rule.nodes[q];
                let w = rule.weights[q];
                let theta = t.clamp(-1.0, 1.0).acos();
                let cmag = coherent_magnitudes(n_sites, theta);
                let weighted: Vec<Complex64> = cmag
                    .iter()
                    .zip(psi.coeffs().iter())
                    .map(|(&m, &c)| m * c)
                    .collect();
                let mut row = KahanSum::new();
                let mut any = false;
                for (r, &phi) in phis.iter().enumerate() {
                    let pt = SpherePoint::from_angles(theta, phi);
                    if !region(&pt) {
                        continue;
                    }
                    any = true;
                    // ⟨v^(Ω), ψ⟩ = Σ_k c̃_k ψ_k e^{-i k φ}
                    let rot = Complex64::from_polar(1.0, -phis[r]);
                    let mut cur = Complex64::new(1.0, 0.0);
                    let mut val = KahanSumC::new();
                    for &u in &weighted {
                        val.add(u * cur);
                        cur *= rot;
                    }
                    row.add(val.value().norm_sqr());
                }
                if any {
                    acc.add(prefactor * w * d_phi * row.value());
                }
            }
            acc.value()
        })
        .collect();

    let mut total = KahanSum::new();
    for p in partials {
        total.add(p);
    }
    total.value()
}

/// Husimi mass at the default resolution of max(4N, 32) nodes per axis.
pub fn husimi_mass<F>(psi: &DickeVector, region: F) -> f64
where
    F: Fn(&SpherePoint) -> bool + Sync,
{
    let res = (4 * psi.n_sites()).max(32);
    husimi_mass_with_resolution(psi, region, res)
}

/// Husimi mass with the doubling check: computes the mass at the default
/// resolution and at twice that, returning the finer value together with
/// the shift. Useful when the region boundary might cut through
/// non-negligible density; for the margin/cap regions of concentrated
/// eigenstates the shift sits far below 1e-6.
pub fn husimi_mass_checked<F>(psi: &DickeVector, region: F) -> (f64, f64)
where
    F: Fn(&SpherePoint) -> bool + Sync,
{
    let res = (4 * psi.n_sites()).max(32);
    let coarse = husimi_mass_with_resolution(psi, &region, res);
    let fine = husimi_mass_with_resolution(psi, &region, 2 * res);
    (fine, (fine - coarse).abs())
}
