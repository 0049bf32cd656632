//! Spectra and eigenvectors of banded Hermitian operators, plus the
//! spectrum-side checks: the one-sided distance from a range interval into a
//! finite spectrum, the eigenvalue-perturbation (Weyl) bound for symbol
//! corrections, and the coherent quasi-eigenvector defect.
//!
//! Dispatch in `eigh`: diagonal input is read off; Hermitian tridiagonal
//! input is phase-transformed to real symmetric tridiagonal and handed to
//! implicit-shift QL (O(N²)); wider real-symmetric bands go through the
//! Givens band reduction first; anything else falls back to a dense
//! Householder reduction. Eigenvectors come from inverse iteration on the
//! original banded matrix.

use num_complex::Complex64;

use crate::dicke::{coherent_state, DickeVector};
use crate::error::{Error, Result};
use crate::extrema::{sup_norm, RealInterval};
use crate::linalg::{
    band_to_tridiag, hermitian_dense_eigenvalues, tridiag_eigenvalues, BandLu, SymBand,
};
use crate::models::SymbolExpansion;
use crate::operator::QuantizedOperator;
use crate::poly::SpherePolynomial;
use crate::quantize::quantize;
use crate::sphere::SpherePoint;

/// Hermiticity tolerance for eigensolver input, relative to the entry scale.
const HERMITICITY_TOL: f64 = 1e-10;
/// Entries below this (relative) are treated as structural zeros when
/// choosing the solve path.
const STRUCTURE_TOL: f64 = 1e-14;

/// Sorted eigenvalues of a Hermitian operator.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
}

impl Spectrum {
    pub fn new(mut eigenvalues: Vec<f64>) -> Self {
        eigenvalues.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Self { eigenvalues }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }

    /// max |λ|, the operator norm of the Hermitian matrix this came from.
    pub fn operator_norm(&self) -> f64 {
        self.min().abs().max(self.max().abs())
    }

    /// Distance from x to the nearest eigenvalue.
    pub fn distance_to(&self, x: f64) -> f64 {
        match self
            .eigenvalues
            .binary_search_by(|v| v.partial_cmp(&x).unwrap())
        {
            Ok(_) => 0.0,
            Err(pos) => {
                let mut d = f64::INFINITY;
                if pos > 0 {
                    d = d.min(x - self.eigenvalues[pos - 1]);
                }
                if pos < self.eigenvalues.len() {
                    d = d.min(self.eigenvalues[pos] - x);
                }
                d
            }
        }
    }

    /// Size-prefixed binary format with magic and version tag; round-trips
    /// bit-exactly. Companion of the operator binary format for caching.
    pub fn to_binary(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(16 + 8 * self.eigenvalues.len());
        out.extend_from_slice(b"SLSP");
        out.extend_from_slice(&1u32.to_le_bytes());
        out.extend_from_slice(&(8 * self.eigenvalues.len() as u64).to_le_bytes());
        for v in &self.eigenvalues {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn from_binary(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 16 || &bytes[0..4] != b"SLSP" {
            return Err(Error::Format("bad spectrum magic".into()));
        }
        let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
        if version != 1 {
            return Err(Error::Format(format!(
                "unsupported spectrum version {version}"
            )));
        }
        let len = u64::from_le_bytes(bytes[8..16].try_into().unwrap()) as usize;
        if bytes.len() != 16 + len || !len.is_multiple_of(8) {
            return Err(Error::Format("spectrum payload length mismatch".into()));
        }
        let eigenvalues = bytes[16..]
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Ok(Self { eigenvalues })
    }

    /// Index of the eigenvalue nearest to x.
    pub fn nearest_index(&self, x: f64) -> usize {
        let pos = match self
            .eigenvalues
            .binary_search_by(|v| v.partial_cmp(&x).unwrap())
        {
            Ok(p) => return p,
            Err(p) => p,
        };
        if pos == 0 {
            0
        } else if pos >= self.eigenvalues.len() {
            self.eigenvalues.len() - 1
        } else if x - self.eigenvalues[pos - 1] <= self.eigenvalues[pos] - x {
            pos - 1
        } else {
            pos
        }
    }
}

/// An eigenvalue with its unit eigenvector, sign-fixed so the first
/// component of magnitude > 1e-8 is real positive.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: f64,
    pub vector: DickeVector,
    /// ‖Hv − λv‖ actually achieved.
    pub residual: f64,
}

/// Ground eigenpair together with the gap diagnostic.
#[derive(Debug, Clone)]
pub struct GroundState {
    pub pair: EigenPair,
    /// λ₁ − λ₀.
    pub gap: f64,
    /// Set when the gap is below 1e-10·‖H‖: the vector returned is then one
    /// representative of a numerically degenerate ground space.
    pub degenerate: bool,
}

/// Full spectrum of a Hermitian banded operator.
pub fn eigh(op: &QuantizedOperator) -> Result<Spectrum> {
    if !op.is_hermitian(HERMITICITY_TOL) {
        return Err(Error::Precondition(format!(
            "eigh requires a Hermitian operator; defect {:.3e} at scale {:.3e}",
            op.hermiticity_defect(),
            op.max_abs()
        )));
    }
    let dim = op.dim();
    let hb = op.effective_halfband(STRUCTURE_TOL);
    if hb == 0 {
        let vals = op.diag(0).iter().map(|c| c.re).collect();
        return Ok(Spectrum::new(vals));
    }
    if hb == 1 {
        // Hermitian tridiagonal: a diagonal phase similarity makes the
        // off-diagonal real non-negative without touching the spectrum
        let d: Vec<f64> = op.diag(0).iter().map(|c| c.re).collect();
        let e: Vec<f64> = (0..dim - 1).map(|j| op.get(j, j + 1).norm()).collect();
        return Ok(Spectrum::new(tridiag_eigenvalues(d, e)?));
    }
    if op.is_real(STRUCTURE_TOL) {
        let mut band = SymBand::zeros(dim, hb);
        for k in 0..=hb {
            for j in 0..dim - k {
                band.diags[k][j] = op.get(j, j + k).re;
            }
        }
        let (d, e) = band_to_tridiag(&band);
        return Ok(Spectrum::new(tridiag_eigenvalues(d, e)?));
    }
    // complex with halfband ≥ 2: dense fallback
    let dense = op.to_dense();
    Ok(Spectrum::new(hermitian_dense_eigenvalues(&dense, dim)?))
}

/// Operator norm of a banded operator: max |λ| when Hermitian, otherwise
/// the largest singular value through the Hermitian square (products of
/// non-commuting Hermitian factors land in the second branch).
pub fn operator_norm(op: &QuantizedOperator) -> Result<f64> {
    if op.is_hermitian(HERMITICITY_TOL) {
        return Ok(eigh(op)?.operator_norm());
    }
    let square = op.adjoint().matmul(op);
    Ok(eigh(&square)?.max().max(0.0).sqrt())
}

/// Inverse iteration for the eigenvector at shift λ. The start vector
/// matters for symmetric problems: the uniform positive start commutes with
/// the CW flip symmetry, so for a Perron-Frobenius-positive ground state the
/// iteration stays in the even sector even when the even/odd gap is below
/// roundoff.
fn inverse_iteration(
    op: &QuantizedOperator,
    shift: f64,
    scale: f64,
    start: Option<&DickeVector>,
) -> EigenPair {
    let dim = op.dim();
    let hb = op.halfband().max(1);
    let lu = BandLu::new(dim, hb, hb, Complex64::new(shift, 0.0), |i, j| op.get(i, j));
    let mut v = match start {
        Some(s) => s.clone(),
        None => {
            let uniform = 1.0 / (dim as f64).sqrt();
            DickeVector::new(op.n_sites(), vec![Complex64::new(uniform, 0.0); dim])
        }
    };
    let mut best: Option<EigenPair> = None;
    for _ in 0..6 {
        let mut solved = lu.solve(v.coeffs());
        // prescale by the largest component: the raw solve can reach ~1e300
        // at an exact-shift singularity and overflow the norm square
        let peak = solved
            .iter()
            .map(|c| c.re.abs().max(c.im.abs()))
            .fold(0.0, f64::max);
        if !peak.is_finite() || peak == 0.0 {
            break;
        }
        for c in &mut solved {
            *c /= peak;
        }
        let mut next = DickeVector::new(op.n_sites(), solved);
        let norm = next.norm();
        if !norm.is_finite() || norm == 0.0 {
            break;
        }
        next.normalize();
        let hv = op.apply(&next);
        let rayleigh = next.inner(&hv).re;
        let residual = hv.sub(&next.scale(Complex64::new(rayleigh, 0.0))).norm();
        let better = match &best {
            Some(b) => residual < b.residual,
            None => true,
        };
        if better {
            best = Some(EigenPair {
                value: rayleigh,
                vector: next.clone(),
                residual,
            });
        }
        if residual <= 1e-13 * scale {
            break;
        }
        v = next;
    }
    let mut pair = best.expect("inverse iteration always produces at least one candidate");
    pair.vector.fix_sign();
    // sign fix changes no norms; recompute nothing
    pair
}

/// True when F H F = H holds bit-exactly, F being the index reversal. The
/// tridiagonal Hamiltonians built from ladder elements satisfy this exactly
/// because the mirrored entries are the same floating-point products.
fn commutes_with_flip(op: &QuantizedOperator) -> bool {
    let dim = op.dim();
    let n = op.n_sites();
    let hb = op.halfband() as isize;
    for j in 0..dim {
        let k0 = (j as isize - hb).max(0) as usize;
        let k1 = ((j as isize + hb) as usize).min(dim - 1);
        for k in k0..=k1 {
            if op.get(j, k) != op.get(n - j, n - k) {
                return false;
            }
        }
    }
    true
}

/// Lowest eigenpair, refined by inverse iteration. Degeneracy of the ground
/// space (gap < 1e-10·‖H‖) is flagged. For operators that commute with the
/// index-reversal F bit-exactly, the iterate is refined onto its dominant
/// F-sector: the projection commutes with H so it cannot grow the residual,
/// and it pins the representative of a numerically degenerate even/odd pair
/// to the symmetric one the iteration's positive start was converging to.
/// Double-well chains need this: their tunneling splitting falls below
/// roundoff long before the semiclassical regime.
pub fn ground_state(op: &QuantizedOperator) -> Result<GroundState> {
    let spectrum = eigh(op)?;
    let scale = spectrum.operator_norm().max(1e-300);
    let lambda0 = spectrum.min();
    let gap = if spectrum.len() > 1 {
        spectrum.eigenvalues()[1] - lambda0
    } else {
        f64::INFINITY
    };
    let degenerate = gap < 1e-10 * scale;
    let mut pair = inverse_iteration(op, lambda0, scale, None);
    if commutes_with_flip(op) {
        let flipped = pair.vector.flip();
        let even = pair.vector.add(&flipped);
        let odd = pair.vector.sub(&flipped);
        let mut refined = if even.norm() >= odd.norm() { even } else { odd };
        refined.normalize();
        let hv = op.apply(&refined);
        let value = refined.inner(&hv).re;
        let residual = hv.sub(&refined.scale(Complex64::new(value, 0.0))).norm();
        if residual <= pair.residual.max(1e-13 * scale) {
            refined.fix_sign();
            pair = EigenPair {
                value,
                vector: refined,
                residual,
            };
        }
    }
    if pair.residual > 1e-10 * scale {
        return Err(Error::NoConvergence(format!(
            "inverse iteration residual {:.3e} exceeds 1e-10·‖H‖ = {:.3e}",
            pair.residual,
            1e-10 * scale
        )));
    }
    Ok(GroundState {
        pair,
        gap,
        degenerate,
    })
}

/// Eigenpair whose eigenvalue is nearest to `target`.
pub fn eigenpair_near(op: &QuantizedOperator, target: f64) -> Result<EigenPair> {
    let spectrum = eigh(op)?;
    let scale = spectrum.operator_norm().max(1e-300);
    let idx = spectrum.nearest_index(target);
    let lambda = spectrum.eigenvalues()[idx];
    let pair = inverse_iteration(op, lambda, scale, None);
    if pair.residual > 1e-10 * scale {
        return Err(Error::NoConvergence(format!(
            "inverse iteration at λ = {lambda} left residual {:.3e}",
            pair.residual
        )));
    }
    Ok(pair)
}

/// One-sided distance sup_{x ∈ ran} dist(x, spec) from a closed interval
/// into a finite spectrum. Since the interval is connected and the spectrum
/// finite, the supremum is attained either at an endpoint of the interval
/// or at the midpoint of a spectral gap inside it, so the value is exact
/// from sorted data — no sampling.
///
/// Being one-sided, this does not see eigenvalues lying outside the
/// interval; containment of σ(Q(f)) in the hull of ran(f) is a separate
/// property (positivity plus unit preservation) with its own test.
pub fn spectrum_distance(ran: &RealInterval, spec: &Spectrum) -> f64 {
    assert!(!spec.is_empty(), "spectrum must be nonempty");
    let mut worst = spec.distance_to(ran.lo).max(spec.distance_to(ran.hi));
    let ev = spec.eigenvalues();
    for pair in ev.windows(2) {
        let mid = 0.5 * (pair[0] + pair[1]);
        if mid >= ran.lo && mid <= ran.hi {
            worst = worst.max(0.5 * (pair[1] - pair[0]));
        }
    }
    worst
}

/// Result of the eigenvalue-perturbation check between Q(h_N) and Q(h₀).
#[derive(Debug, Clone)]
pub struct WeylReport {
    pub n_sites: usize,
    /// max_i |λ_i(Q(h_N)) − λ_i(Q(h₀))|.
    pub max_gap: f64,
    /// Σ_k N^{−k}·sup|h_k| + 1e-10, which dominates ‖Q(h_N) − Q(h₀)‖.
    pub bound: f64,
    pub pass: bool,
}

/// Verifies that adding the 1/N corrections moves every eigenvalue by at
/// most the perturbation norm bound. A violation falsifies the
/// quantization/eigensolver pipeline, so it is returned as a hard error.
pub fn weyl_check(h: &SymbolExpansion, n_sites: usize) -> Result<WeylReport> {
    if h.corrections.is_empty() {
        return Err(Error::Precondition(
            "weyl_check needs at least one 1/N correction".into(),
        ));
    }
    let full = h.at_order(n_sites as f64).reduce_mod_sphere();
    let spec_full = eigh(&quantize(&full, n_sites)?)?;
    let spec_principal = eigh(&quantize(&h.principal, n_sites)?)?;
    let max_gap = spec_full
        .eigenvalues()
        .iter()
        .zip(spec_principal.eigenvalues().iter())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    let mut bound = 1e-10;
    for (order, poly) in &h.corrections {
        bound += (n_sites as f64).powi(-(*order as i32)) * sup_norm(poly);
    }
    let pass = max_gap <= bound;
    let report = WeylReport {
        n_sites,
        max_gap,
        bound,
        pass,
    };
    if !pass {
        return Err(Error::Invariant(format!(
            "eigenvalue shift {max_gap:.3e} exceeds the perturbation bound {bound:.3e} at N = {n_sites}"
        )));
    }
    Ok(report)
}

/// ‖Q(h₀) v^(Ω) − E v^(Ω)‖ for a coherent state at a point with
/// h₀(Ω) = E (enforced to 1e-8). Vanishes as N → ∞.
pub fn quasi_eigenvector_defect(
    h0: &SpherePolynomial,
    energy: f64,
    omega: &SpherePoint,
    n_sites: usize,
) -> Result<f64> {
    let value = h0.evaluate_real(omega.xyz());
    if (value - energy).abs() > 1e-8 {
        return Err(Error::Precondition(format!(
            "h₀(Ω) = {value} is not the requested energy {energy}"
        )));
    }
    let q = quantize(&h0.reduce_mod_sphere(), n_sites)?;
    let v = coherent_state(n_sites, omega);
    let defect = q
        .apply(&v)
        .sub(&v.scale(Complex64::new(energy, 0.0)))
        .norm();
    Ok(defect)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{cw_hamiltonian, lmg_hamiltonian, model_symbol, ModelSpec};
    use crate::util::SplitMix64;
    use approx::assert_abs_diff_eq;

    #[test]
    fn eigh_diagonal() {
        let op = QuantizedOperator::diagonal(&[3.0, 1.0, 2.0]);
        let s = eigh(&op).unwrap();
        assert_eq!(s.eigenvalues(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn eigh_single_spin_sx() {
        let ops = crate::models::collective_ops(1);
        let s = eigh(&ops.sx).unwrap();
        assert_abs_diff_eq!(s.eigenvalues()[0], -0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(s.eigenvalues()[1], 0.5, epsilon = 1e-14);
    }

    /// Characteristic-polynomial bisection: an oracle for eigenvalues that
    /// shares nothing with the QL/Householder path. det(A − λ) is computed
    /// by complex LU at probe points; sign changes bracket the roots.
    fn charpoly_eigenvalues(a: &QuantizedOperator) -> Vec<f64> {
        let dim = a.dim();
        let dense = a.to_dense();
        let det = |lambda: f64| -> f64 {
            let mut m = dense.clone();
            for i in 0..dim {
                m[i * dim + i] -= Complex64::new(lambda, 0.0);
            }
            // LU with partial pivoting, determinant from the pivots
            let mut sign = 1.0f64;
            let mut logdet = 0.0f64;
            let mut phase = Complex64::new(1.0, 0.0);
            for c in 0..dim {
                let mut piv = c;
                for r in (c + 1)..dim {
                    if m[r * dim + c].norm() > m[piv * dim + c].norm() {
                        piv = r;
                    }
                }
                if piv != c {
                    for j in 0..dim {
                        m.swap(c * dim + j, piv * dim + j);
                    }
                    sign = -sign;
                }
                let p = m[c * dim + c];
                if p.norm() == 0.0 {
                    return 0.0;
                }
                logdet += p.norm().ln();
                phase *= p / p.norm();
                for r in (c + 1)..dim {
                    let f = m[r * dim + c] / p;
                    for j in c..dim {
                        let sub = f * m[c * dim + j];
                        m[r * dim + j] -= sub;
                    }
                }
            }
            // Hermitian input: det(A − λ) is real; keep magnitude modest
            sign * phase.re * (logdet / dim as f64).exp()
        };
        // bracket roots on a fine grid inside the Gershgorin bound
        let bound: f64 = (0..dim)
            .map(|i| (0..dim).map(|j| dense[i * dim + j].norm()).sum::<f64>())
            .fold(0.0, f64::max)
            + 1.0;
        let grid = 20_000;
        let mut roots = Vec::new();
        let mut prev_x = -bound;
        let mut prev_f = det(prev_x);
        for g in 1..=grid {
            let x = -bound + 2.0 * bound * g as f64 / grid as f64;
            let f = det(x);
            if prev_f == 0.0 {
                roots.push(prev_x);
            } else if fistinct_sign(prev_f, f) {
                // bisection
                let (mut lo, mut hi) = (prev_x, x);
                let (mut flo, _) = (prev_f, f);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    let fm = det(mid);
                    if fm == 0.0 {
                        lo = mid;
                        hi = mid;
                        break;
                    }
                    if fistinct_sign(flo, fm) {
                        hi = mid;
                    } else {
                        lo = mid;
                        flo = fm;
                    }
                }
                roots.push(0.5 * (lo + hi));
            }
            prev_x = x;
            prev_f = f;
        }
        roots
    }

    fn fistinct_sign(a: f64, b: f64) -> bool {
        (a > 0.0 && b < 0.0) || (a < 0.0 && b > 0.0)
    }

    #[test]
    fn eigh_matches_charpoly_oracle_on_random_hermitian() {
        let mut rng = SplitMix64::new(101);
        let n_sites = 5; // 6×6
        let mut op = QuantizedOperator::zeros(n_sites, 5);
        for j in 0..6 {
            for k in j..6 {
                let v = if j == k {
                    Complex64::new(rng.uniform(-1.0, 1.0), 0.0)
                } else {
                    Complex64::new(rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7))
                };
                op.set(j, k, v);
                op.set(k, j, v.conj());
            }
        }
        let got = eigh(&op).unwrap();
        let want = charpoly_eigenvalues(&op);
        assert_eq!(want.len(), 6, "oracle must bracket all six roots");
        for (g, w) in got.eigenvalues().iter().zip(want.iter()) {
            assert_abs_diff_eq!(g, w, epsilon = 1e-8);
        }
    }

    #[test]
    fn eigh_cw_large_n_paths_agree() {
        // tridiagonal fast path vs band reduction vs dense embedding
        let h = cw_hamiltonian(60, 1.0, 0.5);
        let tri = eigh(&h).unwrap();
        // force the band path by widening storage with an explicit zero diag
        let wide = h.with_halfband(2);
        let mut forced = SymBand::zeros(61, 2);
        for k in 0..=2 {
            for j in 0..61 - k {
                forced.diags[k][j] = wide.get(j, j + k).re;
            }
        }
        let (d, e) = band_to_tridiag(&forced);
        let via_band = tridiag_eigenvalues(d, e).unwrap();
        let dense = h.to_dense();
        let via_dense = hermitian_dense_eigenvalues(&dense, 61).unwrap();
        for i in 0..61 {
            assert_abs_diff_eq!(tri.eigenvalues()[i], via_band[i], epsilon = 1e-11);
            assert_abs_diff_eq!(tri.eigenvalues()[i], via_dense[i], epsilon = 1e-11);
        }
    }

    #[test]
    fn eigenvalue_sum_equals_trace() {
        for n in [8usize, 40] {
            let h = lmg_hamiltonian(n, 1.0, 0.5, 0.2).unwrap();
            let s = eigh(&h).unwrap();
            let sum: f64 = s.eigenvalues().iter().sum();
            let tol = 1e-10 * s.operator_norm() * (n as f64 + 1.0);
            assert_abs_diff_eq!(sum, h.trace().re, epsilon = tol);
        }
    }

    #[test]
    fn ground_state_cw_single_site() {
        let h = cw_hamiltonian(1, 1.0, 0.5);
        let g = ground_state(&h).unwrap();
        assert_abs_diff_eq!(g.pair.value, -1.0 / 3.0, epsilon = 1e-13);
        assert!(!g.degenerate);
    }

    #[test]
    fn ground_state_diagonal_is_basis_vector() {
        let op = QuantizedOperator::diagonal(&[0.3, -1.25, 0.8, 2.0]);
        let g = ground_state(&op).unwrap();
        assert_abs_diff_eq!(g.pair.value, -1.25, epsilon = 1e-14);
        assert!((g.pair.vector.coeffs()[1].re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn ground_state_cw_is_positive_and_symmetric() {
        // Perron-Frobenius: all components strictly positive after sign fix,
        // cross-checked by the flip symmetry
        for n in [4usize, 12, 64, 257] {
            let h = cw_hamiltonian(n, 1.0, 0.5);
            let g = ground_state(&h).unwrap();
            for c in g.pair.vector.coeffs() {
                assert!(c.re > 0.0, "N = {n}: nonpositive ground component");
                assert!(c.im.abs() < 1e-12);
            }
            let flip_defect = g.pair.vector.flip().sub(&g.pair.vector).norm();
            assert!(flip_defect < 1e-10, "N = {n}: flip defect {flip_defect}");
        }
    }

    #[test]
    fn spectrum_distance_exact_cases() {
        // ran = [a, a] with a in the spectrum
        let s = Spectrum::new(vec![0.0, 1.0]);
        assert_eq!(spectrum_distance(&RealInterval::new(0.0, 0.0), &s), 0.0);
        // ran = [0, 1], spectrum {0, 1}: midpoint half-gap 1/2
        assert_eq!(spectrum_distance(&RealInterval::new(0.0, 1.0), &s), 0.5);
    }

    #[test]
    fn spectrum_distance_of_quantized_z() {
        // σ(Q(z)) = {2m/(N+2)}: endpoint gap 2/(N+2) dominates
        for n in [8usize, 64, 511] {
            let q = quantize(&SpherePolynomial::z(), n).unwrap();
            let s = eigh(&q).unwrap();
            let d = spectrum_distance(&RealInterval::new(-1.0, 1.0), &s);
            assert_abs_diff_eq!(d, 2.0 / (n as f64 + 2.0), epsilon = 1e-12);
        }
    }

    #[test]
    fn spectrum_distance_matches_sampling_oracle() {
        let mut rng = SplitMix64::new(113);
        for _ in 0..20 {
            let vals: Vec<f64> = (0..6).map(|_| rng.uniform(-2.0, 2.0)).collect();
            let s = Spectrum::new(vals);
            let lo = rng.uniform(-2.5, 0.0);
            let hi = lo + rng.uniform(0.0, 3.0);
            let ran = RealInterval::new(lo, hi);
            let exact = spectrum_distance(&ran, &s);
            let mut sampled = 0.0f64;
            for i in 0..=4000 {
                let x = lo + (hi - lo) * i as f64 / 4000.0;
                sampled = sampled.max(s.distance_to(x));
            }
            assert!(
                (exact - sampled).abs() < 1e-3,
                "exact {exact} vs sampled {sampled}"
            );
            assert!(exact >= sampled - 1e-12, "exact must dominate sampling");
        }
    }

    #[test]
    fn weyl_bound_holds_for_cw() {
        let spec = ModelSpec::CurieWeiss {
            coupling: 1.0,
            field: 0.5,
        };
        let sym = model_symbol(&spec);
        for n in [16usize, 128] {
            let report = weyl_check(&sym, n).unwrap();
            assert!(report.pass);
            // nominal correction −3z²+1 has sup-norm 2
            assert_abs_diff_eq!(report.bound, 2.0 / n as f64 + 1e-10, epsilon = 1e-9);
            assert!(report.max_gap <= report.bound);
        }
    }

    #[test]
    fn weyl_zero_corrections_rejected() {
        let sym = SymbolExpansion::principal_only(SpherePolynomial::z());
        assert!(weyl_check(&sym, 8).is_err());
    }

    #[test]
    fn weyl_vanishing_correction_gives_zero_gap() {
        let mut sym = SymbolExpansion::principal_only(SpherePolynomial::z());
        sym.corrections.push((1, SpherePolynomial::zero()));
        let report = weyl_check(&sym, 24).unwrap();
        assert!(report.pass);
        assert!(report.max_gap <= 1e-13, "gap {}", report.max_gap);
    }

    #[test]
    fn quasi_defect_z_north_pole_exact() {
        for n in [4usize, 64, 512] {
            let d = quasi_eigenvector_defect(
                &SpherePolynomial::z(),
                1.0,
                &SpherePoint::north_pole(),
                n,
            )
            .unwrap();
            assert_abs_diff_eq!(d, 2.0 / (n as f64 + 2.0), epsilon = 1e-12);
        }
    }

    #[test]
    fn quasi_defect_constant_is_zero() {
        let c = SpherePolynomial::constant_real(0.7);
        let omega = SpherePoint::from_angles(1.0, 2.0);
        let d = quasi_eigenvector_defect(&c, 0.7, &omega, 32).unwrap();
        assert!(d < 1e-13);
    }

    #[test]
    fn quasi_defect_rejects_off_level_points() {
        let res =
            quasi_eigenvector_defect(&SpherePolynomial::z(), 0.5, &SpherePoint::north_pole(), 16);
        assert!(res.is_err());
    }

    #[test]
    fn eigh_flip_similarity_invariance_for_cw() {
        // F H F = H exactly, so the spectrum must match after conjugating
        // the matrix by the flip
        let h = cw_hamiltonian(30, 1.0, 0.5);
        let mut flipped = QuantizedOperator::zeros(30, 1);
        for j in 0..=30usize {
            for k in j.saturating_sub(1)..=(j + 1).min(30) {
                flipped.set(30 - j, 30 - k, h.get(j, k));
            }
        }
        let a = eigh(&h).unwrap();
        let b = eigh(&flipped).unwrap();
        for (x, y) in a.eigenvalues().iter().zip(b.eigenvalues().iter()) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-12);
        }
    }

    #[test]
    fn spectrum_containment_in_range_hull() {
        // every eigenvalue of Q(f) lies inside [min f, max f] ± 1e-9
        let mut rng = SplitMix64::new(131);
        for _ in 0..5 {
            let f = {
                let mut terms = Vec::new();
                for _ in 0..4 {
                    let a = rng.below(3) as u32;
                    let b = rng.below(3 - a as usize + 1) as u32;
                    let c = rng.below(2) as u32;
                    terms.push((
                        crate::poly::Monomial::new(a, b, c),
                        Complex64::new(rng.uniform(-1.0, 1.0), 0.0),
                    ));
                }
                SpherePolynomial::from_terms(terms)
                    .unwrap()
                    .reduce_mod_sphere()
            };
            let r = crate::extrema::range(&f);
            let s = eigh(&quantize(&f, 24).unwrap()).unwrap();
            assert!(s.min() >= r.lo - 1e-9, "min {} below {}", s.min(), r.lo);
            assert!(s.max() <= r.hi + 1e-9, "max {} above {}", s.max(), r.hi);
        }
    }
}
