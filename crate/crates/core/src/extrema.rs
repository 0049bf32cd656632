//! Range, sup-norm and critical points of real polynomials restricted to the
//! sphere. A Fibonacci lattice brackets the candidates; Newton iteration on
//! the projected gradient, run in a local tangent chart, sharpens them to
//! ~1e-12. Both pieces are derivative-exact because ambient partials of a
//! polynomial are polynomials.

use crate::poly::SpherePolynomial;
use crate::sphere::{fibonacci_lattice, SpherePoint};

/// Default number of lattice points used for bracketing.
pub const GRID_POINTS: usize = 20_000;
/// Newton iteration budget per seed.
pub const NEWTON_MAX_ITERS: usize = 50;
/// Newton convergence tolerance on the projected gradient norm.
pub const NEWTON_TOL: f64 = 1e-12;
/// Critical points closer than this geodesic distance are merged.
pub const DEDUP_GEODESIC: f64 = 1e-6;
/// |det| of the 2×2 tangent Hessian below this flags a degenerate point.
pub const NONDEGENERACY_TOL: f64 = 1e-8;
/// Critical values must match the requested energy within this.
pub const VALUE_TOL: f64 = 1e-8;
/// Accepted points must have projected gradient norm at most this.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// Closed interval [lo, hi]; represents the range of a real polynomial on S²
/// (an interval, since the sphere is connected).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealInterval {
    pub lo: f64,
    pub hi: f64,
}

impl RealInterval {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Self { lo, hi }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }
}

/// Location and value of the global extrema of p on S².
#[derive(Debug, Clone)]
pub struct Extrema {
    pub argmin: SpherePoint,
    pub min: f64,
    pub argmax: SpherePoint,
    pub max: f64,
}

/// Gradient and Hessian of p as ambient polynomials, built once per query.
struct Derivatives {
    grad: [SpherePolynomial; 3],
    hess: [[SpherePolynomial; 3]; 3],
}

impl Derivatives {
    fn new(p: &SpherePolynomial) -> Self {
        let grad = [p.partial(0), p.partial(1), p.partial(2)];
        let hess = [
            [grad[0].partial(0), grad[0].partial(1), grad[0].partial(2)],
            [grad[1].partial(0), grad[1].partial(1), grad[1].partial(2)],
            [grad[2].partial(0), grad[2].partial(1), grad[2].partial(2)],
        ];
        Self { grad, hess }
    }

    fn gradient(&self, xyz: [f64; 3]) -> [f64; 3] {
        [
            self.grad[0].evaluate_real(xyz),
            self.grad[1].evaluate_real(xyz),
            self.grad[2].evaluate_real(xyz),
        ]
    }

    /// Projected (tangential) gradient at a sphere point.
    fn projected_gradient(&self, pt: &SpherePoint) -> [f64; 3] {
        let n = pt.xyz();
        let g = self.gradient(n);
        let radial = g[0] * n[0] + g[1] * n[1] + g[2] * n[2];
        [
            g[0] - radial * n[0],
            g[1] - radial * n[1],
            g[2] - radial * n[2],
        ]
    }

    /// 2×2 Hessian of p|_{S²} in the tangent basis (e1, e2), together with
    /// the tangent gradient components. For the unit sphere the chart
    /// correction is −(Ω·∇p)·δ_ab.
    fn chart_system(&self, pt: &SpherePoint) -> ([f64; 2], [[f64; 2]; 2]) {
        let n = pt.xyz();
        let (e1, e2) = pt.tangent_basis();
        let g = self.gradient(n);
        let radial = g[0] * n[0] + g[1] * n[1] + g[2] * n[2];
        let gt = [
            g[0] * e1[0] + g[1] * e1[1] + g[2] * e1[2],
            g[0] * e2[0] + g[1] * e2[1] + g[2] * e2[2],
        ];
        let mut h = [[0.0f64; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                h[i][j] = self.hess[i][j].evaluate_real(n);
            }
        }
        let quad = |u: [f64; 3], v: [f64; 3]| {
            let mut s = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    s += u[i] * h[i][j] * v[j];
                }
            }
            s
        };
        let m = [
            [quad(e1, e1) - radial, quad(e1, e2)],
            [quad(e2, e1), quad(e2, e2) - radial],
        ];
        (gt, m)
    }
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// One Newton run from `start`. Returns the converged point and the 2×2
/// tangent Hessian determinant there, or None when the iteration stalls.
fn newton_from(derivs: &Derivatives, start: SpherePoint) -> Option<(SpherePoint, f64)> {
    let mut pt = start;
    for _ in 0..NEWTON_MAX_ITERS {
        let (gt, m) = derivs.chart_system(&pt);
        let gnorm = (gt[0] * gt[0] + gt[1] * gt[1]).sqrt();
        if gnorm <= NEWTON_TOL {
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            return Some((pt, det));
        }
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let mut step = if det.abs() > 1e-14 {
            [
                -(m[1][1] * gt[0] - m[0][1] * gt[1]) / det,
                -(-m[1][0] * gt[0] + m[0][0] * gt[1]) / det,
            ]
        } else {
            // singular chart Hessian: damped gradient step keeps us moving
            [-gt[0] * 0.1, -gt[1] * 0.1]
        };
        let slen = (step[0] * step[0] + step[1] * step[1]).sqrt();
        if slen > 0.5 {
            step = [step[0] * 0.5 / slen, step[1] * 0.5 / slen];
        }
        let (e1, e2) = pt.tangent_basis();
        let n = pt.xyz();
        pt = SpherePoint::from_xyz(
            n[0] + step[0] * e1[0] + step[1] * e2[0],
            n[1] + step[0] * e1[1] + step[1] * e2[1],
            n[2] + step[0] * e1[2] + step[1] * e2[2],
        );
        if slen < 1e-15 {
            break;
        }
    }
    // accept if the final residual is small enough anyway
    let g = derivs.projected_gradient(&pt);
    if norm3(g) <= NEWTON_TOL * 10.0 {
        let (_, m) = derivs.chart_system(&pt);
        Some((pt, m[0][0] * m[1][1] - m[0][1] * m[1][0]))
    } else {
        None
    }
}

/// Global extrema of a real polynomial on the sphere: lattice bracketing
/// followed by Newton polishing of the best candidates.
pub fn extrema(p: &SpherePolynomial) -> Extrema {
    assert!(p.is_real(), "extrema expects a real polynomial");
    let derivs = Derivatives::new(p);
    let grid = fibonacci_lattice(GRID_POINTS);
    let mut best_min = (grid[0], f64::INFINITY);
    let mut best_max = (grid[0], f64::NEG_INFINITY);
    let mut values = Vec::with_capacity(grid.len());
    for pt in &grid {
        let v = p.evaluate_real(pt.xyz());
        values.push(v);
        if v < best_min.1 {
            best_min = (*pt, v);
        }
        if v > best_max.1 {
            best_max = (*pt, v);
        }
    }
    // polish from a handful of the most extreme lattice points; extra seeds
    // guard against the argmin of the lattice sitting in the wrong basin
    let mut idx: Vec<usize> = (0..grid.len()).collect();
    idx.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap());
    let seeds_min = idx[..8.min(idx.len())].to_vec();
    let seeds_max = idx[idx.len().saturating_sub(8)..].to_vec();
    for i in seeds_min {
        if let Some((pt, _)) = newton_from(&derivs, grid[i]) {
            let v = p.evaluate_real(pt.xyz());
            if v < best_min.1 {
                best_min = (pt, v);
            }
        }
    }
    for i in seeds_max {
        if let Some((pt, _)) = newton_from(&derivs, grid[i]) {
            let v = p.evaluate_real(pt.xyz());
            if v > best_max.1 {
                best_max = (pt, v);
            }
        }
    }
    Extrema {
        argmin: best_min.0,
        min: best_min.1,
        argmax: best_max.0,
        max: best_max.1,
    }
}

/// [min p, max p] over S².
pub fn range(p: &SpherePolynomial) -> RealInterval {
    let e = extrema(p);
    RealInterval::new(e.min, e.max)
}

/// max |p| over S².
pub fn sup_norm(p: &SpherePolynomial) -> f64 {
    let r = range(p);
    r.lo.abs().max(r.hi.abs())
}

/// All critical points of p|_{S²} whose value is within `VALUE_TOL` of `E`,
/// deduplicated at geodesic distance `DEDUP_GEODESIC`. The bool flags
/// nondegeneracy of the 2×2 tangent Hessian. Degenerate points are reported,
/// not rejected. A constant polynomial yields the empty list (it has no
/// isolated critical points).
pub fn critical_points(p: &SpherePolynomial, energy: f64) -> Vec<(SpherePoint, bool)> {
    assert!(p.is_real(), "critical_points expects a real polynomial");
    if p.degree() == 0 {
        return Vec::new();
    }
    let derivs = Derivatives::new(p);
    let grid = fibonacci_lattice(GRID_POINTS);
    let gnorm2: Vec<f64> = grid
        .iter()
        .map(|pt| {
            let g = derivs.projected_gradient(pt);
            g[0] * g[0] + g[1] * g[1] + g[2] * g[2]
        })
        .collect();

    // seeds = lattice-local minima of the squared projected gradient norm,
    // found with a z-sorted sliding window over a ~2.2-spacing neighborhood
    let spacing = (4.0 * std::f64::consts::PI / GRID_POINTS as f64).sqrt();
    let radius = 2.2 * spacing;
    let chord = 2.0 * (radius / 2.0).sin();
    let chord2 = chord * chord;
    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by(|&i, &j| grid[i].z().partial_cmp(&grid[j].z()).unwrap());
    let mut is_min = vec![true; grid.len()];
    let mut lo = 0usize;
    for wi in 0..order.len() {
        let i = order[wi];
        let zi = grid[i].z();
        while grid[order[lo]].z() < zi - chord {
            lo += 1;
        }
        let mut wj = lo;
        while wj < order.len() && grid[order[wj]].z() <= zi + chord {
            let j = order[wj];
            wj += 1;
            if j == i {
                continue;
            }
            let a = grid[i].xyz();
            let b = grid[j].xyz();
            let d2 = (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2);
            if d2 <= chord2 && gnorm2[j] < gnorm2[i] {
                is_min[i] = false;
                break;
            }
        }
    }

    let mut found: Vec<(SpherePoint, f64)> = Vec::new();
    for i in 0..grid.len() {
        if !is_min[i] {
            continue;
        }
        if let Some((pt, det)) = newton_from(&derivs, grid[i]) {
            let res = norm3(derivs.projected_gradient(&pt));
            if res <= RESIDUAL_TOL {
                found.push((pt, det));
            }
        }
    }

    // merge duplicates by geodesic clustering, keep the representative with
    // the smallest residual
    let mut clusters: Vec<(SpherePoint, f64)> = Vec::new();
    for (pt, det) in found {
        let mut merged = false;
        for (cpt, _) in clusters.iter() {
            if cpt.geodesic_distance(&pt) < DEDUP_GEODESIC {
                merged = true;
                break;
            }
        }
        if !merged {
            clusters.push((pt, det));
        }
    }

    clusters
        .into_iter()
        .filter(|(pt, _)| (p.evaluate_real(pt.xyz()) - energy).abs() <= VALUE_TOL)
        .map(|(pt, det)| (pt, det.abs() > NONDEGENERACY_TOL))
        .collect()
}
