//! Classical-limit machinery: expectation values of quantized observables in
//! eigenstate sequences, the predicted limit state over the critical points
//! of the principal symbol, commutator (Dirac bracket) and product defect
//! studies with an empirically calibrated effective Planck constant,
//! Z₂-symmetry diagnostics, the symmetry-breaking report for double-well
//! models, and Husimi mass in classically forbidden regions.

use crate::dicke::{husimi_density, DickeVector};
use crate::error::{Error, Result};
use crate::extrema::{critical_points, extrema};
use crate::models::{model_symbol, ModelSpec};
use crate::poly::SpherePolynomial;
use crate::quantize::{husimi_mass, quantize};
use crate::spectral::{eigenpair_near, eigh, ground_state, operator_norm, EigenPair};
use crate::sphere::{fibonacci_lattice, SpherePoint};

/// Weighted point measure on the sphere: the classical limit of an
/// eigenvector sequence. Weights are uniform (1/n) when produced by
/// `limit_state_prediction`.
#[derive(Debug, Clone)]
pub struct ClassicalLimitState {
    points: Vec<(SpherePoint, f64)>,
}

impl ClassicalLimitState {
    pub fn new(points: Vec<(SpherePoint, f64)>) -> Self {
        assert!(!points.is_empty());
        let total: f64 = points.iter().map(|(_, w)| w).sum();
        assert!(
            (total - 1.0).abs() < 1e-12 && points.iter().all(|(_, w)| *w > 0.0),
            "weights must be positive and sum to 1"
        );
        Self { points }
    }

    pub fn points(&self) -> &[(SpherePoint, f64)] {
        &self.points
    }

    pub fn support_size(&self) -> usize {
        self.points.len()
    }

    /// ω₀(f) = Σ wᵢ f(Ωᵢ).
    pub fn evaluate(&self, f: &SpherePolynomial) -> f64 {
        self.points
            .iter()
            .map(|(p, w)| w * f.evaluate_real(p.xyz()))
            .sum()
    }

    /// Shannon entropy −Σ wᵢ ln wᵢ; ln 2 for a symmetric double minimum.
    pub fn entropy(&self) -> f64 {
        -self.points.iter().map(|(_, w)| w * w.ln()).sum::<f64>()
    }

    /// The push-forward under (x, y, z) ↦ (x, −y, −z).
    pub fn reflected(&self) -> Self {
        Self {
            points: self
                .points
                .iter()
                .map(|(p, w)| (p.reflect_xz(), *w))
                .collect(),
        }
    }
}

/// ⟨ψ, Q(f) ψ⟩ for a real polynomial and a unit vector.
pub fn classical_expectation(psi: &DickeVector, f: &SpherePolynomial) -> Result<f64> {
    if !f.is_real() {
        return Err(Error::Precondition("observable must be real".into()));
    }
    let q = quantize(&f.reduce_mod_sphere(), psi.n_sites())?;
    let val = q.expectation(psi, psi);
    if val.im.abs() > 1e-12 {
        return Err(Error::Invariant(format!(
            "expectation of a Hermitian operator came out complex: imag = {:.3e}",
            val.im
        )));
    }
    Ok(val.re)
}

/// The limit state over A(E) = h₀⁻¹(E) ∩ {critical points}: uniform weights
/// over the n points. Empty or degenerate critical sets are rejected — the
/// uniform-mixture formula needs finitely many isolated nondegenerate
/// points.
pub fn limit_state_prediction(h0: &SpherePolynomial, energy: f64) -> Result<ClassicalLimitState> {
    let found = critical_points(h0, energy);
    if found.is_empty() {
        return Err(Error::Precondition(format!(
            "no critical points of the principal symbol at energy {energy}; \
             the limit-state hypotheses fail"
        )));
    }
    if let Some((pt, _)) = found.iter().find(|(_, nondegen)| !nondegen) {
        return Err(Error::Precondition(format!(
            "critical point ({:.6}, {:.6}, {:.6}) at energy {energy} is degenerate; \
             the limit-state hypotheses fail",
            pt.x(),
            pt.y(),
            pt.z()
        )));
    }
    let w = 1.0 / found.len() as f64;
    Ok(ClassicalLimitState::new(
        found.into_iter().map(|(p, _)| (p, w)).collect(),
    ))
}

/// Which eigenvector sequence a convergence study follows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StudyTarget {
    /// Ground states; the limit energy is min h₀.
    Ground,
    /// The eigenvalue sequence nearest to a fixed energy.
    Energy(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Converging,
    Inconclusive,
    Diverging,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Converging => write!(f, "converging"),
            Verdict::Inconclusive => write!(f, "inconclusive"),
            Verdict::Diverging => write!(f, "diverging"),
        }
    }
}

/// Trace of one observable across the N grid.
#[derive(Debug, Clone)]
pub struct ObservableTrace {
    pub observable: String,
    pub target: f64,
    /// (N, ⟨ψ_N, Q(f) ψ_N⟩, |value − target|).
    pub rows: Vec<(usize, f64, f64)>,
    /// Slope of ln residual vs ln N, when enough nonzero residuals exist.
    pub fitted_exponent: Option<f64>,
    pub verdict: Verdict,
}

/// Full convergence study toward the predicted limit state.
#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub target_energy: f64,
    pub limit: ClassicalLimitState,
    pub traces: Vec<ObservableTrace>,
    /// N values where the eigenvector could not be tracked, with reasons.
    pub failures: Vec<(usize, String)>,
}

fn check_geometric(n_grid: &[usize]) -> Result<()> {
    if n_grid.len() < 4 {
        return Err(Error::Precondition(format!(
            "need a geometric N grid with at least 4 points, got {}",
            n_grid.len()
        )));
    }
    let r0 = n_grid[1] as f64 / n_grid[0] as f64;
    for w in n_grid.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::Precondition(
                "N grid must be strictly increasing".into(),
            ));
        }
        let r = w[1] as f64 / w[0] as f64;
        if (r / r0 - 1.0).abs() > 0.1 {
            return Err(Error::Precondition(
                "N grid must be geometric (constant ratio within 10%)".into(),
            ));
        }
    }
    Ok(())
}

/// Runs expectation values of `f_list` in the tracked eigenstates over the
/// geometric N grid, compares against the predicted limit state, fits the
/// decay exponent, and issues a per-observable verdict: converging when
/// residuals decrease monotonically (10% upticks tolerated) and the final
/// residual is below 0.02·(1+|target|).
pub fn convergence_study(
    spec: &ModelSpec,
    target: StudyTarget,
    f_list: &[SpherePolynomial],
    n_grid: &[usize],
) -> Result<ConvergenceReport> {
    check_geometric(n_grid)?;
    spec.validate()?;
    let h0 = model_symbol(spec).principal;
    let target_energy = match target {
        StudyTarget::Ground => extrema(&h0).min,
        StudyTarget::Energy(e) => e,
    };
    let limit = limit_state_prediction(&h0, target_energy)?;

    let mut states: Vec<(usize, EigenPair)> = Vec::new();
    let mut failures: Vec<(usize, String)> = Vec::new();
    for &n in n_grid {
        let h = spec.hamiltonian(n)?;
        let tracked = match target {
            StudyTarget::Ground => ground_state(&h).map(|g| g.pair),
            StudyTarget::Energy(e) => eigenpair_near(&h, e),
        };
        match tracked {
            Ok(pair) => states.push((n, pair)),
            Err(e) => failures.push((n, e.to_string())),
        }
    }

    let mut traces = Vec::new();
    for f in f_list {
        let target_value = limit.evaluate(f);
        let mut rows = Vec::new();
        for (n, pair) in &states {
            let value = classical_expectation(&pair.vector, f)?;
            rows.push((*n, value, (value - target_value).abs()));
        }
        let fitted_exponent = fit_exponent(&rows);
        let verdict = if !failures.is_empty() || rows.len() < n_grid.len() {
            Verdict::Inconclusive
        } else {
            judge(&rows, target_value)
        };
        traces.push(ObservableTrace {
            observable: f.to_string(),
            target: target_value,
            rows,
            fitted_exponent,
            verdict,
        });
    }
    Ok(ConvergenceReport {
        target_energy,
        limit,
        traces,
        failures,
    })
}

fn fit_exponent(rows: &[(usize, f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|(_, _, r)| *r > 1e-14)
        .map(|(n, _, r)| ((*n as f64).ln(), r.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|(x, _)| x).sum();
    let sy: f64 = pts.iter().map(|(_, y)| y).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| x * x).sum();
    let sxy: f64 = pts.iter().map(|(x, y)| x * y).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-12 {
        return None;
    }
    Some((n * sxy - sx * sy) / denom)
}

fn judge(rows: &[(usize, f64, f64)], target: f64) -> Verdict {
    let final_res = rows.last().unwrap().2;
    let first_res = rows.first().unwrap().2;
    let monotone = rows.windows(2).all(|w| w[1].2 <= 1.1 * w[0].2 + 1e-14);
    let small = final_res < 0.02 * (1.0 + target.abs());
    if monotone && small {
        Verdict::Converging
    } else if final_res > first_res && !small {
        Verdict::Diverging
    } else {
        Verdict::Inconclusive
    }
}

/// Effective Planck constant candidates for the commutator condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HbarRule {
    OneOverN,
    TwoOverN,
    TwoOverNPlusTwo,
}

impl HbarRule {
    pub fn value(&self, n_sites: usize) -> f64 {
        let n = n_sites as f64;
        match self {
            HbarRule::OneOverN => 1.0 / n,
            HbarRule::TwoOverN => 2.0 / n,
            HbarRule::TwoOverNPlusTwo => 2.0 / (n + 2.0),
        }
    }
}

impl std::fmt::Display for HbarRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HbarRule::OneOverN => write!(f, "1/N"),
            HbarRule::TwoOverN => write!(f, "2/N"),
            HbarRule::TwoOverNPlusTwo => write!(f, "2/(N+2)"),
        }
    }
}

/// A fixed (ℏ_eff, sign) convention for the bracket-commutator comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DGRConvention {
    pub hbar: HbarRule,
    pub sign: f64,
}

impl std::fmt::Display for DGRConvention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "hbar_eff = {}, sign = {}",
            self.hbar,
            if self.sign >= 0.0 { "+1" } else { "-1" }
        )
    }
}

impl DGRConvention {
    pub fn candidates() -> Vec<DGRConvention> {
        let mut v = Vec::new();
        for hbar in [
            HbarRule::OneOverN,
            HbarRule::TwoOverN,
            HbarRule::TwoOverNPlusTwo,
        ] {
            for sign in [1.0, -1.0] {
                v.push(DGRConvention { hbar, sign });
            }
        }
        v
    }
}

/// ‖s·(i/ℏ_eff)[Q(f), Q(g)] − Q({f, g})‖ for real polynomials.
pub fn dgr_defect(
    f: &SpherePolynomial,
    g: &SpherePolynomial,
    n_sites: usize,
    conv: DGRConvention,
) -> Result<f64> {
    if !f.is_real() || !g.is_real() {
        return Err(Error::Precondition(
            "dgr_defect expects real polynomials".into(),
        ));
    }
    let qf = quantize(&f.reduce_mod_sphere(), n_sites)?;
    let qg = quantize(&g.reduce_mod_sphere(), n_sites)?;
    let bracket = f.poisson_bracket(g);
    let qbracket = quantize(&bracket, n_sites)?;
    let scaled = qf
        .commutator_i(&qg)
        .scale_real(conv.sign / conv.hbar.value(n_sites));
    operator_norm(&scaled.sub(&qbracket))
}

/// Outcome of the convention calibration.
#[derive(Debug, Clone)]
pub struct DgrCalibration {
    pub chosen: DGRConvention,
    /// Probe defect of every candidate at the calibration size.
    pub probe_defects: Vec<(DGRConvention, f64)>,
    /// Candidates that annihilate the probe pair exactly (below the 1e-12
    /// floor). They carry no decay-rate information on the probe, so the
    /// calibration picks the best measurable convention instead and reports
    /// these separately.
    pub exact_on_probe: Vec<DGRConvention>,
    /// Defect of the chosen convention along the verification grid.
    pub grid_defects: Vec<(usize, f64)>,
}

/// Calibrates (ℏ_eff, sign) on the probe pair (f, g) = (x, y) at `n_small`:
/// candidates are ranked by probe defect, conventions that zero the probe
/// exactly are set aside as degenerate for rate measurement, and the best
/// remaining candidate must then drive the defect to zero along a doubling
/// grid. No decaying convention at all is a hard failure.
pub fn dgr_calibrate(n_small: usize) -> Result<DgrCalibration> {
    let x = SpherePolynomial::x();
    let y = SpherePolynomial::y();
    let mut probe_defects = Vec::new();
    for conv in DGRConvention::candidates() {
        let d = dgr_defect(&x, &y, n_small, conv)?;
        probe_defects.push((conv, d));
    }
    let floor = 1e-12;
    let exact_on_probe: Vec<DGRConvention> = probe_defects
        .iter()
        .filter(|(_, d)| *d <= floor)
        .map(|(c, _)| *c)
        .collect();
    let mut measurable: Vec<(DGRConvention, f64)> = probe_defects
        .iter()
        .filter(|(_, d)| *d > floor)
        .cloned()
        .collect();
    measurable.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());

    let grid: Vec<usize> = (0..4).map(|k| n_small << k).collect();
    for (conv, _) in &measurable {
        let mut defects = Vec::new();
        for &n in &grid {
            defects.push((n, dgr_defect(&x, &y, n, *conv)?));
        }
        let first = defects.first().unwrap().1;
        let last = defects.last().unwrap().1;
        let decaying = last < 0.5 * first && defects.windows(2).all(|w| w[1].1 <= w[0].1 * 1.05);
        if decaying {
            return Ok(DgrCalibration {
                chosen: *conv,
                probe_defects,
                exact_on_probe,
                grid_defects: defects,
            });
        }
    }
    Err(Error::Invariant(
        "no (hbar, sign) convention drives the commutator defect to zero".into(),
    ))
}

/// ‖Q(f)Q(g) − Q(fg)‖; fg is reduced to canonical form before quantizing.
pub fn product_defect(f: &SpherePolynomial, g: &SpherePolynomial, n_sites: usize) -> Result<f64> {
    if !f.is_real() || !g.is_real() {
        return Err(Error::Precondition(
            "product_defect expects real polynomials".into(),
        ));
    }
    let qf = quantize(&f.reduce_mod_sphere(), n_sites)?;
    let qg = quantize(&g.reduce_mod_sphere(), n_sites)?;
    let qfg = quantize(&f.mul(g).reduce_mod_sphere(), n_sites)?;
    operator_norm(&qf.matmul(&qg).sub(&qfg))
}

/// Z₂ diagnostics of a state: distance to the symmetric and antisymmetric
/// sectors of the index-reversal F, plus the sphere-reflection asymmetry of
/// the Husimi density over a covering grid.
#[derive(Debug, Clone)]
pub struct Z2Report {
    /// ‖Fψ − ψ‖.
    pub sym_defect: f64,
    /// ‖Fψ + ψ‖.
    pub antisym_defect: f64,
    /// max over the grid of |B_ψ(x, y, z) − B_ψ(x, −y, −z)|.
    pub husimi_asymmetry: f64,
}

impl Z2Report {
    /// Distance to the nearer sector.
    pub fn sector_defect(&self) -> f64 {
        self.sym_defect.min(self.antisym_defect)
    }
}

pub fn z2_check(psi: &DickeVector) -> Z2Report {
    let flipped = psi.flip();
    let sym_defect = flipped.sub(psi).norm();
    let antisym_defect = flipped.add(psi).norm();
    let grid = fibonacci_lattice(800);
    let mut asym = 0.0f64;
    for pt in &grid {
        let b = husimi_density(psi, pt);
        let br = husimi_density(psi, &pt.reflect_xz());
        asym = asym.max((b - br).abs());
    }
    Z2Report {
        sym_defect,
        antisym_defect,
        husimi_asymmetry: asym,
    }
}

/// Per-N row of the symmetry-breaking study.
#[derive(Debug, Clone)]
pub struct SsbRow {
    pub n_sites: usize,
    pub ground_energy: f64,
    pub gap: f64,
    pub degenerate: bool,
    /// The finite-N vector state is pure by construction; recorded for the
    /// report table.
    pub purity: f64,
    pub z2: Z2Report,
    /// Husimi mass of the geodesic cap around each predicted limit point.
    pub cap_masses: Vec<f64>,
    pub cap_total: f64,
}

/// Symmetry-breaking report: finite-N ground states stay pure and
/// Z₂-invariant while their Husimi mass splits evenly over the predicted
/// limit points; the limit state itself is the mixed uniform measure with
/// entropy ln n.
#[derive(Debug, Clone)]
pub struct SsbReport {
    pub limit: ClassicalLimitState,
    pub limit_entropy: f64,
    pub cap_radius: f64,
    pub rows: Vec<SsbRow>,
}

pub fn ssb_report(spec: &ModelSpec, n_grid: &[usize], cap_radius: f64) -> Result<SsbReport> {
    spec.validate()?;
    let h0 = model_symbol(spec).principal;
    let energy = extrema(&h0).min;
    let limit = limit_state_prediction(&h0, energy)?;
    let mut rows = Vec::new();
    for &n in n_grid {
        let h = spec.hamiltonian(n)?;
        let g = ground_state(&h)?;
        let z2 = z2_check(&g.pair.vector);
        let mut cap_masses = Vec::new();
        for (center, _) in limit.points() {
            let mass = husimi_mass(&g.pair.vector, |pt: &SpherePoint| {
                pt.geodesic_distance(center) <= cap_radius
            });
            cap_masses.push(mass);
        }
        let cap_total = cap_masses.iter().sum();
        rows.push(SsbRow {
            n_sites: n,
            ground_energy: g.pair.value,
            gap: g.gap,
            degenerate: g.degenerate,
            purity: 1.0,
            z2,
            cap_masses,
            cap_total,
        });
    }
    Ok(SsbReport {
        limit_entropy: limit.entropy(),
        limit,
        cap_radius,
        rows,
    })
}

/// Husimi mass of ψ on the region {Ω : |h₀(Ω) − E| ≥ margin}, where the
/// state of a nearby eigenvalue must not live as N grows.
pub fn forbidden_region_mass(
    psi: &DickeVector,
    h0: &SpherePolynomial,
    energy: f64,
    margin: f64,
) -> Result<f64> {
    if margin <= 0.0 {
        return Err(Error::Precondition("margin must be positive".into()));
    }
    Ok(husimi_mass(psi, |pt: &SpherePoint| {
        (h0.evaluate_real(pt.xyz()) - energy).abs() >= margin
    }))
}

/// Norm convergence helper: ‖Q(f, N)‖ for the continuity check against
/// sup|f|.
pub fn quantized_norm(f: &SpherePolynomial, n_sites: usize) -> Result<f64> {
    let q = quantize(&f.reduce_mod_sphere(), n_sites)?;
    Ok(eigh(&q)?.operator_norm())
}
