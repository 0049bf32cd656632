//! Points on the unit sphere, with both polar-angle and Cartesian views,
//! plus the Fibonacci lattice used to seed global searches.

use std::f64::consts::PI;

/// A point on S². Constructed from polar angles θ ∈ [0, π], φ ∈ (−π, π] or
/// from a Cartesian direction (normalized on entry). At the poles φ is not
/// determined by the geometry; we fix φ = 0 there so every point has one
/// representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint {
    theta: f64,
    phi: f64,
    xyz: [f64; 3],
}

impl SpherePoint {
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let theta = theta.clamp(0.0, PI);
        let mut phi = wrap_phi(phi);
        if theta == 0.0 || theta == PI {
            phi = 0.0;
        }
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self {
            theta,
            phi,
            xyz: [st * cp, st * sp, ct],
        }
    }

    /// Normalizes the given direction. Panics on the zero vector.
    pub fn from_xyz(x: f64, y: f64, z: f64) -> Self {
        let n = (x * x + y * y + z * z).sqrt();
        assert!(n > 0.0, "cannot project the zero vector onto the sphere");
        let (x, y, z) = (x / n, y / n, z / n);
        let theta = z.clamp(-1.0, 1.0).acos();
        let phi = if x == 0.0 && y == 0.0 {
            0.0
        } else {
            y.atan2(x)
        };
        Self {
            theta,
            phi: wrap_phi(phi),
            xyz: [x, y, z],
        }
    }

    pub fn north_pole() -> Self {
        Self::from_angles(0.0, 0.0)
    }

    pub fn south_pole() -> Self {
        Self::from_angles(PI, 0.0)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn x(&self) -> f64 {
        self.xyz[0]
    }

    pub fn y(&self) -> f64 {
        self.xyz[1]
    }

    pub fn z(&self) -> f64 {
        self.xyz[2]
    }

    pub fn xyz(&self) -> [f64; 3] {
        self.xyz
    }

    /// Cosine of the angle to another point.
    pub fn dot(&self, other: &SpherePoint) -> f64 {
        self.xyz
            .iter()
            .zip(other.xyz.iter())
            .map(|(a, b)| a * b)
            .sum()
    }

    /// Geodesic (great-circle) distance.
    pub fn geodesic_distance(&self, other: &SpherePoint) -> f64 {
        self.dot(other).clamp(-1.0, 1.0).acos()
    }

    /// The reflection (x, y, z) ↦ (x, −y, −z).
    pub fn reflect_xz(&self) -> Self {
        Self::from_xyz(self.xyz[0], -self.xyz[1], -self.xyz[2])
    }

    /// Antipode.
    pub fn antipode(&self) -> Self {
        Self::from_xyz(-self.xyz[0], -self.xyz[1], -self.xyz[2])
    }

    /// An orthonormal basis {e1, e2} of the tangent plane at this point.
    pub fn tangent_basis(&self) -> ([f64; 3], [f64; 3]) {
        let n = self.xyz;
        // pick the coordinate axis least aligned with n
        let a = if n[0].abs() <= n[1].abs() && n[0].abs() <= n[2].abs() {
            [1.0, 0.0, 0.0]
        } else if n[1].abs() <= n[2].abs() {
            [0.0, 1.0, 0.0]
        } else {
            [0.0, 0.0, 1.0]
        };
        let d = a[0] * n[0] + a[1] * n[1] + a[2] * n[2];
        let mut e1 = [a[0] - d * n[0], a[1] - d * n[1], a[2] - d * n[2]];
        let l = (e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]).sqrt();
        e1 = [e1[0] / l, e1[1] / l, e1[2] / l];
        let e2 = [
            n[1] * e1[2] - n[2] * e1[1],
            n[2] * e1[0] - n[0] * e1[2],
            n[0] * e1[1] - n[1] * e1[0],
        ];
        (e1, e2)
    }
}

fn wrap_phi(phi: f64) -> f64 {
    // map into (−π, π]
    let mut p = phi % (2.0 * PI);
    if p <= -PI {
        p += 2.0 * PI;
    } else if p > PI {
        p -= 2.0 * PI;
    }
    p
}

/// Fibonacci lattice of `n` near-uniform points, the standard cheap
/// quasi-uniform covering used to bracket extrema and seed Newton.
pub fn fibonacci_lattice(n: usize) -> Vec<SpherePoint> {
    let golden = (1.0 + 5.0_f64.sqrt()) / 2.0;
    (0..n)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let theta = z.clamp(-1.0, 1.0).acos();
            let phi = 2.0 * PI * (i as f64 / golden);
            SpherePoint::from_angles(theta, phi)
        })
        .collect()
}
