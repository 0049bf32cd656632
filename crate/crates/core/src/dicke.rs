//! Vectors in the symmetric subspace Sym^N(ℂ²), written in the Dicke basis
//! indexed by k = number of down spins (k = 0 is all-up). The basis already
//! encodes permutation symmetry, so an N-site state is a length-(N+1)
//! coefficient vector and the 2^N product space never materializes.

use num_complex::Complex64;

use crate::sphere::SpherePoint;
use crate::util::{ln_binomial, KahanSumC};

/// Complex coefficient vector of length N+1 over the Dicke basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DickeVector {
    n_sites: usize,
    coeffs: Vec<Complex64>,
}

impl DickeVector {
    pub fn new(n_sites: usize, coeffs: Vec<Complex64>) -> Self {
        assert!(n_sites >= 1, "need at least one site");
        assert_eq!(
            coeffs.len(),
            n_sites + 1,
            "Dicke vector for N sites has N+1 components"
        );
        Self { n_sites, coeffs }
    }

    pub fn zeros(n_sites: usize) -> Self {
        Self::new(n_sites, vec![Complex64::new(0.0, 0.0); n_sites + 1])
    }

    /// Basis vector e_k (k down spins).
    pub fn basis(n_sites: usize, k: usize) -> Self {
        let mut v = Self::zeros(n_sites);
        v.coeffs[k] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.n_sites + 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// S_z eigenvalue m = N/2 − k of basis index k.
    pub fn m_value(&self, k: usize) -> f64 {
        self.n_sites as f64 / 2.0 - k as f64
    }

    /// ⟨self, other⟩, antilinear in self.
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.n_sites, other.n_sites);
        let mut acc = KahanSumC::new();
        for (a, b) in self.coeffs.iter().zip(other.coeffs.iter()) {
            acc.add(a.conj() * b);
        }
        acc.value()
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).re.max(0.0).sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        assert!(n > 0.0, "cannot normalize the zero vector");
        for c in &mut self.coeffs {
            *c /= n;
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.n_sites, self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n_sites, other.n_sites);
        Self::new(
            self.n_sites,
            self.coeffs
                .iter()
                .zip(other.coeffs.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n_sites, other.n_sites);
        Self::new(
            self.n_sites,
            self.coeffs
                .iter()
                .zip(other.coeffs.iter())
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    /// Index reversal (Fψ)_k = ψ_{N−k}, the Dicke-basis form of the sphere
    /// reflection (x, y, z) ↦ (x, −y, −z).
    pub fn flip(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self::new(self.n_sites, coeffs)
    }

    /// Multiplies by the global phase making the first component of
    /// magnitude > 1e-8 real positive.
    pub fn fix_sign(&mut self) {
        if let Some(c) = self.coeffs.iter().find(|c| c.norm() > 1e-8) {
            let phase = c.conj() / c.norm();
            for v in &mut self.coeffs {
                *v *= phase;
            }
        }
    }

    /// Deterministic pseudo-random unit vector (testing and property suites).
    pub fn random_unit(n_sites: usize, rng: &mut crate::util::SplitMix64) -> Self {
        let mut v = Self::new(
            n_sites,
            (0..=n_sites)
                .map(|_| Complex64::new(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)))
                .collect(),
        );
        v.normalize();
        v
    }
}

/// Magnitudes of the coherent-state components at polar angle θ:
/// r_k(θ) = √C(N,k) cos(θ/2)^{N−k} sin(θ/2)^k. The row is anchored at its
/// peak (one log-space evaluation, immune to under/overflow) and extended by
/// the exact neighbor ratio, then normalized so Σ r_k² = 1; the error per
/// component is then a √N-random-walk of ulps rather than the ~1e-13 a
/// straight lgamma evaluation would smear over every entry.
pub fn coherent_magnitudes(n_sites: usize, theta: f64) -> Vec<f64> {
    let half = 0.5 * theta;
    let (s, c) = (half.sin(), half.cos());
    if s <= 0.0 {
        let mut v = vec![0.0; n_sites + 1];
        v[0] = 1.0;
        return v;
    }
    if c <= 0.0 {
        let mut v = vec![0.0; n_sites + 1];
        v[n_sites] = 1.0;
        return v;
    }
    let n = n_sites as f64;
    // the squared magnitudes form a binomial(N, sin²) profile
    let peak = ((n * s * s).round() as usize).min(n_sites);
    let ln_peak =
        0.5 * ln_binomial(n_sites, peak) + (n - peak as f64) * c.ln() + peak as f64 * s.ln();
    let mut mags = vec![0.0; n_sites + 1];
    mags[peak] = ln_peak.exp();
    let up = s / c;
    for k in peak..n_sites {
        // r_{k+1} = r_k · tan(θ/2) · √((N−k)/(k+1))
        mags[k + 1] = mags[k] * up * ((n - k as f64) / (k as f64 + 1.0)).sqrt();
    }
    let down = c / s;
    for k in (1..=peak).rev() {
        // r_{k−1} = r_k · cot(θ/2) · √(k/(N−k+1))
        mags[k - 1] = mags[k] * down * (k as f64 / (n - k as f64 + 1.0)).sqrt();
    }
    let mut sum = crate::util::KahanSum::new();
    for &m in &mags {
        sum.add(m * m);
    }
    let inv = 1.0 / sum.value().sqrt();
    for m in &mut mags {
        *m *= inv;
    }
    mags
}

/// The N-site spin coherent state at Ω, i.e. the Dicke expansion of the
/// N-fold tensor power of cos(θ/2)|↑⟩ + e^{iφ} sin(θ/2)|↓⟩:
/// coeff_k = √C(N,k) cos(θ/2)^{N−k} sin(θ/2)^k e^{ikφ}. Unit norm. At the
/// poles the φ = 0 convention of `SpherePoint` fixes the phase.
pub fn coherent_state(n_sites: usize, omega: &SpherePoint) -> DickeVector {
    let mags = coherent_magnitudes(n_sites, omega.theta());
    let phase = Complex64::from_polar(1.0, omega.phi());
    let mut rot = Complex64::new(1.0, 0.0);
    let mut coeffs = Vec::with_capacity(n_sites + 1);
    for mag in mags {
        coeffs.push(rot * mag);
        rot *= phase;
    }
    DickeVector::new(n_sites, coeffs)
}

/// ⟨v^(Ω), v^(Ω')⟩ via the closed form: the single-site overlap raised to the
/// N-th power. Its magnitude is ((1 + t)/2)^{N/2} with t = cos∠(Ω, Ω').
pub fn overlap(n_sites: usize, omega: &SpherePoint, omega2: &SpherePoint) -> Complex64 {
    let (h1, h2) = (0.5 * omega.theta(), 0.5 * omega2.theta());
    let single = Complex64::new(h1.cos() * h2.cos(), 0.0)
        + Complex64::from_polar(h1.sin() * h2.sin(), omega2.phi() - omega.phi());
    single.powu(n_sites as u32)
}

/// Husimi density B_ψ(Ω) = |⟨v^(Ω), ψ⟩|², a value in [0, 1] for unit ψ.
pub fn husimi_density(psi: &DickeVector, omega: &SpherePoint) -> f64 {
    let v = coherent_state(psi.n_sites(), omega);
    v.inner(psi).norm_sqr()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::SplitMix64;
    use approx::assert_abs_diff_eq;

    #[test]
    fn coherent_at_poles_is_basis_vector() {
        for n in [1usize, 2, 7, 64] {
            let top = coherent_state(n, &SpherePoint::north_pole());
            assert_abs_diff_eq!(
                top.sub(&DickeVector::basis(n, 0)).norm(),
                0.0,
                epsilon = 1e-14
            );
            let bottom = coherent_state(n, &SpherePoint::south_pole());
            assert_abs_diff_eq!(
                bottom.sub(&DickeVector::basis(n, n)).norm(),
                0.0,
                epsilon = 1e-14
            );
        }
    }

    #[test]
    fn single_site_coherent_state() {
        let omega = SpherePoint::from_angles(0.9, -1.3);
        let v = coherent_state(1, &omega);
        assert_abs_diff_eq!(v.coeffs()[0].re, (0.45f64).cos(), epsilon = 1e-14);
        let want1 = Complex64::from_polar((0.45f64).sin(), -1.3);
        assert_abs_diff_eq!((v.coeffs()[1] - want1).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn coherent_states_are_unit() {
        let mut rng = SplitMix64::new(5);
        for n in [1usize, 3, 16, 257, 2048] {
            let omega = SpherePoint::from_angles(
                rng.uniform(0.0, std::f64::consts::PI),
                rng.uniform(-3.1, 3.1),
            );
            let v = coherent_state(n, &omega);
            assert_abs_diff_eq!(v.norm(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn overlap_closed_form_matches_component_sum() {
        // validates the Dicke component formula against the tensor-power
        // overlap, which is the identity the construction rests on
        let mut rng = SplitMix64::new(9);
        for n in [1usize, 2, 9, 64, 301] {
            let a = SpherePoint::from_angles(
                rng.uniform(0.0, std::f64::consts::PI),
                rng.uniform(-3.1, 3.1),
            );
            let b = SpherePoint::from_angles(
                rng.uniform(0.0, std::f64::consts::PI),
                rng.uniform(-3.1, 3.1),
            );
            let direct = coherent_state(n, &a).inner(&coherent_state(n, &b));
            let closed = overlap(n, &a, &b);
            assert_abs_diff_eq!((direct - closed).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn overlap_magnitude_formula() {
        let mut rng = SplitMix64::new(13);
        for _ in 0..50 {
            let n = 1 + rng.below(200);
            let a = SpherePoint::from_angles(
                rng.uniform(0.0, std::f64::consts::PI),
                rng.uniform(-3.1, 3.1),
            );
            let b = SpherePoint::from_angles(
                rng.uniform(0.0, std::f64::consts::PI),
                rng.uniform(-3.1, 3.1),
            );
            let t = a.dot(&b);
            let want = ((1.0 + t) / 2.0).powf(n as f64 / 2.0);
            assert_abs_diff_eq!(overlap(n, &a, &b).norm(), want, epsilon = 1e-12);
        }
    }

    #[test]
    fn overlap_special_cases() {
        let a = SpherePoint::from_angles(1.1, 0.4);
        assert_abs_diff_eq!(
            (overlap(12, &a, &a) - Complex64::new(1.0, 0.0)).norm(),
            0.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(overlap(12, &a, &a.antipode()).norm(), 0.0, epsilon = 1e-12);
        // t = 0, N = 2 gives magnitude 1/2
        let b = SpherePoint::from_angles(1.1 + std::f64::consts::FRAC_PI_2, 0.4);
        assert_abs_diff_eq!(overlap(2, &a, &b).norm(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn husimi_peak_and_orthogonal_zero() {
        let omega = SpherePoint::from_angles(2.2, 0.7);
        let psi = coherent_state(33, &omega);
        assert_abs_diff_eq!(husimi_density(&psi, &omega), 1.0, epsilon = 1e-12);
        let e0 = DickeVector::basis(21, 0);
        assert_abs_diff_eq!(
            husimi_density(&e0, &SpherePoint::south_pole()),
            0.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn flip_is_involution_and_palindrome_fixed() {
        let mut rng = SplitMix64::new(21);
        let v = DickeVector::random_unit(10, &mut rng);
        assert_abs_diff_eq!(v.flip().flip().sub(&v).norm(), 0.0, epsilon = 1e-15);
        let mid = DickeVector::basis(8, 4);
        assert_abs_diff_eq!(mid.flip().sub(&mid).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn sign_fix_makes_leading_component_positive() {
        let mut v = DickeVector::new(
            2,
            vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, -0.8),
                Complex64::new(0.6, 0.0),
            ],
        );
        v.fix_sign();
        assert!(v.coeffs()[1].re > 0.0);
        assert_abs_diff_eq!(v.coeffs()[1].im, 0.0, epsilon = 1e-15);
    }
}
