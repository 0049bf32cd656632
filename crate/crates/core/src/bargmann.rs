//! The Fock-Bargmann picture: a Dicke vector ψ corresponds to the
//! holomorphic polynomial p(X) = Σ_k ψ_k √C(N,k) X^k, square-integrable for
//! the weight (1+|z|²)^{-(N+2)}, and the associated wavefunction
//! Ψ(z) = (1+|z|²)^{-N/2} p(z) is the coherent-state overlap at the point
//! with stereographic coordinate z. The map ψ ↦ p is an isometry, which the
//! quadrature norm here verifies numerically.
//!
//! Stereographic convention used throughout: z(Ω) = tan(θ/2) e^{-iφ}, so the
//! north pole sits at z = 0 and |Ψ(z(Ω))| = |⟨v^(Ω), ψ⟩|.

use num_complex::Complex64;

use crate::dicke::{coherent_magnitudes, DickeVector};
use crate::quad::{uniform_angles, GaussLegendre};
use crate::sphere::SpherePoint;
use crate::util::{KahanSum, KahanSumC};

/// Holomorphic polynomial of degree ≤ N in the basis w_k = √C(N,k) X^k;
/// the coefficient vector in that basis is exactly the Dicke vector.
#[derive(Debug, Clone)]
pub struct BargmannFunction {
    n_sites: usize,
    coeffs: Vec<Complex64>,
}

/// ψ ↦ p with p's w_k-coefficients equal to ψ's components.
pub fn bargmann_transform(psi: &DickeVector) -> BargmannFunction {
    BargmannFunction {
        n_sites: psi.n_sites(),
        coeffs: psi.coeffs().to_vec(),
    }
}

/// Stereographic coordinate of a sphere point: tan(θ/2) e^{-iφ}.
/// Unbounded at the south pole.
pub fn stereographic(omega: &SpherePoint) -> Complex64 {
    Complex64::from_polar((omega.theta() / 2.0).tan(), -omega.phi())
}

/// Sphere point of a stereographic coordinate.
pub fn from_stereographic(z: Complex64) -> SpherePoint {
    let theta = 2.0 * z.norm().atan();
    SpherePoint::from_angles(theta, -z.arg())
}

impl BargmannFunction {
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    /// w_k-basis coefficients (= the originating Dicke components).
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// The weighted wavefunction Ψ(z) = (1+|z|²)^{-N/2} p(z), evaluated
    /// stably through the coherent-state magnitudes (no r^N blowup).
    pub fn eval_psi(&self, z: Complex64) -> Complex64 {
        let theta = 2.0 * z.norm().atan();
        let alpha = z.arg();
        let mags = coherent_magnitudes(self.n_sites, theta);
        let rot = Complex64::from_polar(1.0, alpha);
        let mut cur = Complex64::new(1.0, 0.0);
        let mut acc = KahanSumC::new();
        for (c, m) in self.coeffs.iter().zip(mags.iter()) {
            acc.add(c * m * cur);
            cur *= rot;
        }
        acc.value()
    }

    /// The Fock-Bargmann norm ‖p‖ = [(N+1)/π ∫ |p(z)|² (1+|z|²)^{-(N+2)} d²z]^{1/2}
    /// by radial-angular product quadrature: the radial direction maps to
    /// t = cos θ under r = tan(θ/2) (Gauss-Legendre, exact for the degree-N
    /// surviving integrand), the angular direction to a uniform grid with
    /// 2N+1 nodes (exact for the trigonometric degree 2N). Equals the Dicke
    /// norm of the originating vector up to roundoff: the map is an isometry.
    pub fn fb_norm(&self) -> f64 {
        let n = self.n_sites;
        let k_t = (n + 2).div_ceil(2).max(2);
        let m_alpha = 2 * n + 1;
        let rule = GaussLegendre::new(k_t);
        let alphas = uniform_angles(m_alpha);
        let d_alpha = 2.0 * std::f64::consts::PI / m_alpha as f64;
        let prefactor = (n as f64 + 1.0) / (4.0 * std::f64::consts::PI);
        let mut total = KahanSum::new();
        for (&t, &w) in rule.nodes.iter().zip(rule.weights.iter()) {
            let theta = t.clamp(-1.0, 1.0).acos();
            let mags = coherent_magnitudes(n, theta);
            let weighted: Vec<Complex64> = self
                .coeffs
                .iter()
                .zip(mags.iter())
                .map(|(c, m)| c * m)
                .collect();
            let mut row = KahanSum::new();
            for &alpha in &alphas {
                let rot = Complex64::from_polar(1.0, alpha);
                let mut cur = Complex64::new(1.0, 0.0);
                let mut acc = KahanSumC::new();
                for &u in &weighted {
                    acc.add(u * cur);
                    cur *= rot;
                }
                row.add(acc.value().norm_sqr());
            }
            total.add(prefactor * w * d_alpha * row.value());
        }
        total.value().max(0.0).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dicke::coherent_state;
    use crate::util::SplitMix64;
    use approx::assert_abs_diff_eq;

    #[test]
    fn basis_vector_maps_to_constant_one() {
        let e0 = DickeVector::basis(7, 0);
        let p = bargmann_transform(&e0);
        assert_abs_diff_eq!((p.coeffs()[0] - Complex64::new(1.0, 0.0)).norm(), 0.0);
        assert_abs_diff_eq!(p.fb_norm(), 1.0, epsilon = 1e-12);
        // Ψ(0) = 1 for p = 1
        assert_abs_diff_eq!(
            (p.eval_psi(Complex64::new(0.0, 0.0)) - Complex64::new(1.0, 0.0)).norm(),
            0.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn isometry_on_random_unit_vectors() {
        let mut rng = SplitMix64::new(211);
        for _ in 0..100 {
            let n = 1 + rng.below(64);
            let psi = DickeVector::random_unit(n, &mut rng);
            let p = bargmann_transform(&psi);
            assert_abs_diff_eq!(p.fb_norm(), 1.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn isometry_scales_with_vector_norm() {
        let mut rng = SplitMix64::new(223);
        let psi = DickeVector::random_unit(20, &mut rng).scale(Complex64::new(0.0, 2.5));
        let p = bargmann_transform(&psi);
        assert_abs_diff_eq!(p.fb_norm(), 2.5, epsilon = 1e-8);
    }

    #[test]
    fn coherent_state_peaks_at_its_stereographic_point() {
        let n = 40;
        let omega = SpherePoint::from_angles(1.9, -0.8);
        let psi = coherent_state(n, &omega);
        let p = bargmann_transform(&psi);
        let z0 = stereographic(&omega);
        let peak = p.eval_psi(z0).norm();
        assert_abs_diff_eq!(peak, 1.0, epsilon = 1e-12);
        // strictly smaller on a test grid around the peak
        let mut rng = SplitMix64::new(227);
        for _ in 0..200 {
            let z = Complex64::new(rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0));
            if (z - z0).norm() > 1e-3 {
                assert!(p.eval_psi(z).norm() < peak);
            }
        }
    }

    #[test]
    fn psi_equals_coherent_overlap() {
        let n = 23;
        let mut rng = SplitMix64::new(229);
        let psi = DickeVector::random_unit(n, &mut rng);
        let p = bargmann_transform(&psi);
        for _ in 0..20 {
            let omega = SpherePoint::from_angles(rng.uniform(0.1, 3.0), rng.uniform(-3.1, 3.1));
            let via_bargmann = p.eval_psi(stereographic(&omega));
            let via_overlap = coherent_state(n, &omega).inner(&psi);
            assert_abs_diff_eq!((via_bargmann - via_overlap).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn stereographic_round_trip() {
        let omega = SpherePoint::from_angles(2.1, 0.77);
        let back = from_stereographic(stereographic(&omega));
        assert_abs_diff_eq!(omega.theta(), back.theta(), epsilon = 1e-13);
        assert_abs_diff_eq!(omega.phi(), back.phi(), epsilon = 1e-13);
        // north pole maps to the origin
        assert_abs_diff_eq!(
            stereographic(&SpherePoint::north_pole()).norm(),
            0.0,
            epsilon = 1e-15
        );
    }
}
