//! Banded matrices on the Dicke space C^{N+1}. Quantized polynomials of
//! degree d are banded with halfband d, Hamiltonians built from collective
//! spin operators are tridiagonal or pentadiagonal, so the band structure is
//! the working representation everywhere; dense views exist only for small
//! cross-checks and the dense eigensolver fallback.

use num_complex::Complex64;

use crate::dicke::DickeVector;
use crate::error::{Error, Result};

const BINARY_MAGIC: &[u8; 4] = b"SLQO";
const BINARY_VERSION: u32 = 1;

/// A complex (N+1)×(N+1) matrix with entries vanishing for |j−k| > halfband.
/// Both triangles are stored, so the type also carries non-Hermitian
/// intermediates (Q of a complex polynomial); `is_hermitian` and `hermitize`
/// police the cases that must be Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantizedOperator {
    n_sites: usize,
    halfband: usize,
    /// diags[halfband + o] holds the offset-o diagonal (o = k − j from
    /// −halfband to +halfband), indexed by min(j, k).
    diags: Vec<Vec<Complex64>>,
}

impl QuantizedOperator {
    pub fn zeros(n_sites: usize, halfband: usize) -> Self {
        let dim = n_sites + 1;
        let halfband = halfband.min(n_sites);
        let diags = (0..=2 * halfband)
            .map(|d| {
                let o = d as isize - halfband as isize;
                vec![Complex64::new(0.0, 0.0); dim - o.unsigned_abs()]
            })
            .collect();
        Self {
            n_sites,
            halfband,
            diags,
        }
    }

    pub fn identity(n_sites: usize) -> Self {
        let mut a = Self::zeros(n_sites, 0);
        for v in &mut a.diags[0] {
            *v = Complex64::new(1.0, 0.0);
        }
        a
    }

    /// Diagonal matrix from real entries.
    pub fn diagonal(entries: &[f64]) -> Self {
        assert!(!entries.is_empty());
        let mut a = Self::zeros(entries.len() - 1, 0);
        for (v, &e) in a.diags[0].iter_mut().zip(entries.iter()) {
            *v = Complex64::new(e, 0.0);
        }
        a
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.n_sites + 1
    }

    pub fn halfband(&self) -> usize {
        self.halfband
    }

    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        let o = k as isize - j as isize;
        if o.unsigned_abs() > self.halfband {
            return Complex64::new(0.0, 0.0);
        }
        self.diags[(self.halfband as isize + o) as usize][j.min(k)]
    }

    pub fn set(&mut self, j: usize, k: usize, v: Complex64) {
        let o = k as isize - j as isize;
        assert!(
            o.unsigned_abs() <= self.halfband,
            "entry ({j}, {k}) outside halfband {}",
            self.halfband
        );
        self.diags[(self.halfband as isize + o) as usize][j.min(k)] = v;
    }

    /// Mutable view of the offset-o diagonal.
    pub fn diag_mut(&mut self, o: isize) -> &mut [Complex64] {
        assert!(o.unsigned_abs() <= self.halfband);
        &mut self.diags[(self.halfband as isize + o) as usize]
    }

    pub fn diag(&self, o: isize) -> &[Complex64] {
        assert!(o.unsigned_abs() <= self.halfband);
        &self.diags[(self.halfband as isize + o) as usize]
    }

    /// Largest entry magnitude; the natural scale for tolerances.
    pub fn max_abs(&self) -> f64 {
        self.diags
            .iter()
            .flat_map(|d| d.iter())
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        self.diags[self.halfband].iter().sum()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.n_sites, self.halfband);
        for o in -(self.halfband as isize)..=(self.halfband as isize) {
            let src = &self.diags[(self.halfband as isize + o) as usize];
            let dst = &mut out.diags[(self.halfband as isize - o) as usize];
            for (d, s) in dst.iter_mut().zip(src.iter()) {
                *d = s.conj();
            }
        }
        out
    }

    /// Deviation from Hermiticity: max |A_{jk} − conj(A_{kj})|.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for o in 0..=(self.halfband as isize) {
            let up = &self.diags[(self.halfband as isize + o) as usize];
            let lo = &self.diags[(self.halfband as isize - o) as usize];
            for (u, l) in up.iter().zip(lo.iter()) {
                worst = worst.max((u - l.conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol * self.max_abs().max(1e-300)
    }

    /// (A + A†)/2; kills roundoff-level asymmetry from summation order.
    pub fn hermitize(&mut self) {
        let adj = self.adjoint();
        for (d, a) in self.diags.iter_mut().zip(adj.diags.iter()) {
            for (x, y) in d.iter_mut().zip(a.iter()) {
                *x = (*x + *y) * 0.5;
            }
        }
    }

    /// True when every entry has |imag| ≤ tol · scale.
    pub fn is_real(&self, tol: f64) -> bool {
        let scale = self.max_abs().max(1e-300);
        self.diags
            .iter()
            .flat_map(|d| d.iter())
            .all(|c| c.im.abs() <= tol * scale)
    }

    /// The tightest halfband that actually carries entries above
    /// tol · scale; does not modify the matrix.
    pub fn effective_halfband(&self, tol: f64) -> usize {
        let scale = self.max_abs().max(1e-300);
        let mut hb = 0usize;
        for o in 1..=(self.halfband as isize) {
            let big = self.diags[(self.halfband as isize + o) as usize]
                .iter()
                .chain(self.diags[(self.halfband as isize - o) as usize].iter())
                .any(|c| c.norm() > tol * scale);
            if big {
                hb = o as usize;
            }
        }
        hb
    }

    /// Copy with the given (smaller or larger) halfband; shrinking asserts
    /// that dropped diagonals are negligible.
    pub fn with_halfband(&self, halfband: usize) -> Self {
        let mut out = Self::zeros(self.n_sites, halfband);
        let hb = out.halfband;
        for o in -(self.halfband as isize)..=(self.halfband as isize) {
            let src = &self.diags[(self.halfband as isize + o) as usize];
            if o.unsigned_abs() > hb {
                debug_assert!(
                    src.iter()
                        .all(|c| c.norm() <= 1e-12 * self.max_abs().max(1e-300)),
                    "with_halfband would drop significant entries"
                );
                continue;
            }
            let dst = &mut out.diags[(hb as isize + o) as usize];
            dst.copy_from_slice(src);
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        for d in &mut out.diags {
            for v in d.iter_mut() {
                *v *= s;
            }
        }
        out
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n_sites, other.n_sites);
        let hb = self.halfband.max(other.halfband);
        let mut out = Self::zeros(self.n_sites, hb);
        for o in -(hb as isize)..=(hb as isize) {
            let dst = &mut out.diags[(hb as isize + o) as usize];
            if o.unsigned_abs() <= self.halfband {
                for (d, s) in dst
                    .iter_mut()
                    .zip(self.diags[(self.halfband as isize + o) as usize].iter())
                {
                    *d += s;
                }
            }
            if o.unsigned_abs() <= other.halfband {
                for (d, s) in dst
                    .iter_mut()
                    .zip(other.diags[(other.halfband as isize + o) as usize].iter())
                {
                    *d += s;
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale_real(-1.0))
    }

    /// Banded matrix product; the result has halfband self.hb + other.hb
    /// (clamped to the dimension).
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n_sites, other.n_sites);
        let dim = self.dim();
        let hb = (self.halfband + other.halfband).min(self.n_sites);
        let mut out = Self::zeros(self.n_sites, hb);
        for j in 0..dim {
            let lmin = j.saturating_sub(self.halfband);
            let lmax = (j + self.halfband).min(dim - 1);
            for k in j.saturating_sub(hb)..=(j + hb).min(dim - 1) {
                let mut acc = Complex64::new(0.0, 0.0);
                let lo = lmin.max(k.saturating_sub(other.halfband));
                let hi = lmax.min(k + other.halfband).min(dim - 1);
                let mut l = lo;
                while l <= hi {
                    acc += self.get(j, l) * other.get(l, k);
                    l += 1;
                }
                out.set(j, k, acc);
            }
        }
        out
    }

    /// i·(AB − BA), Hermitian when A and B are.
    pub fn commutator_i(&self, other: &Self) -> Self {
        self.matmul(other)
            .sub(&other.matmul(self))
            .scale(Complex64::new(0.0, 1.0))
    }

    /// Matrix–vector product.
    pub fn apply(&self, v: &DickeVector) -> DickeVector {
        assert_eq!(v.dim(), self.dim());
        let dim = self.dim();
        let mut out = DickeVector::zeros(self.n_sites);
        let coeffs = v.coeffs();
        let res = out.coeffs_mut();
        for o in -(self.halfband as isize)..=(self.halfband as isize) {
            let d = &self.diags[(self.halfband as isize + o) as usize];
            // entry (j, j+o) multiplies v_{j+o} into row j
            let (j0, len) = if o >= 0 {
                (0usize, dim - o as usize)
            } else {
                ((-o) as usize, dim - (-o) as usize)
            };
            for i in 0..len {
                let j = j0 + i;
                let k = (j as isize + o) as usize;
                res[j] += d[i.min(j.min(k))] * coeffs[k];
            }
        }
        out
    }

    /// ⟨u, A v⟩.
    pub fn expectation(&self, u: &DickeVector, v: &DickeVector) -> Complex64 {
        u.inner(&self.apply(v))
    }

    /// Dense row-major copy, for small cross-checks and the dense
    /// eigensolver fallback.
    pub fn to_dense(&self) -> Vec<Complex64> {
        let dim = self.dim();
        let mut a = vec![Complex64::new(0.0, 0.0); dim * dim];
        for j in 0..dim {
            for k in j.saturating_sub(self.halfband)..=(j + self.halfband).min(dim - 1) {
                a[j * dim + k] = self.get(j, k);
            }
        }
        a
    }

    pub fn from_dense(n_sites: usize, halfband: usize, a: &[Complex64]) -> Self {
        let dim = n_sites + 1;
        assert_eq!(a.len(), dim * dim);
        let mut out = Self::zeros(n_sites, halfband);
        for j in 0..dim {
            for k in 0..dim {
                let v = a[j * dim + k];
                if (k as isize - j as isize).unsigned_abs() <= out.halfband {
                    out.set(j, k, v);
                } else {
                    assert!(
                        v.norm() < 1e-12,
                        "dense source has entries outside halfband {halfband}"
                    );
                }
            }
        }
        out
    }

    /// max_{j,k} |A_{jk} − B_{jk}|.
    pub fn entrywise_distance(&self, other: &Self) -> f64 {
        assert_eq!(self.n_sites, other.n_sites);
        let hb = self.halfband.max(other.halfband) as isize;
        let dim = self.dim();
        let mut worst = 0.0f64;
        for j in 0..dim {
            let k0 = (j as isize - hb).max(0) as usize;
            let k1 = ((j as isize + hb) as usize).min(dim - 1);
            for k in k0..=k1 {
                worst = worst.max((self.get(j, k) - other.get(j, k)).norm());
            }
        }
        worst
    }

    /// Documented text format: first line `N halfband`, then one line per
    /// row with the 2·halfband+1 in-band entries as `re,im` pairs (entries
    /// outside the matrix printed as zero).
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("{} {}\n", self.n_sites, self.halfband));
        let dim = self.dim();
        for j in 0..dim {
            let mut fields = Vec::with_capacity(2 * self.halfband + 1);
            for o in -(self.halfband as isize)..=(self.halfband as isize) {
                let k = j as isize + o;
                let v = if k < 0 || k >= dim as isize {
                    Complex64::new(0.0, 0.0)
                } else {
                    self.get(j, k as usize)
                };
                fields.push(format!("{:.17e},{:.17e}", v.re, v.im));
            }
            s.push_str(&fields.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("empty operator text".into()))?;
        let mut parts = header.split_whitespace();
        let n_sites: usize = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Format("bad N in header".into()))?;
        let halfband: usize = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Format("bad halfband in header".into()))?;
        let mut out = Self::zeros(n_sites, halfband);
        let dim = out.dim();
        for j in 0..dim {
            let line = lines
                .next()
                .ok_or_else(|| Error::Format(format!("missing row {j}")))?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 * out.halfband + 1 {
                return Err(Error::Format(format!(
                    "row {j} has {} fields, expected {}",
                    fields.len(),
                    2 * out.halfband + 1
                )));
            }
            for (idx, field) in fields.iter().enumerate() {
                let o = idx as isize - out.halfband as isize;
                let k = j as isize + o;
                let (re, im) = field
                    .split_once(',')
                    .ok_or_else(|| Error::Format(format!("bad entry '{field}'")))?;
                let re: f64 = re
                    .parse()
                    .map_err(|e| Error::Format(format!("bad float: {e}")))?;
                let im: f64 = im
                    .parse()
                    .map_err(|e| Error::Format(format!("bad float: {e}")))?;
                if k >= 0 && k < dim as isize {
                    out.set(j, k as usize, Complex64::new(re, im));
                }
            }
        }
        Ok(out)
    }

    /// Size-prefixed binary format with magic and version tag; round-trips
    /// bit-exactly.
    pub fn to_binary(&self) -> Vec<u8> {
        let mut payload = Vec::new();
        payload.extend_from_slice(&(self.n_sites as u64).to_le_bytes());
        payload.extend_from_slice(&(self.halfband as u64).to_le_bytes());
        for d in &self.diags {
            for v in d {
                payload.extend_from_slice(&v.re.to_le_bytes());
                payload.extend_from_slice(&v.im.to_le_bytes());
            }
        }
        let mut out = Vec::with_capacity(payload.len() + 16);
        out.extend_from_slice(BINARY_MAGIC);
        out.extend_from_slice(&BINARY_VERSION.to_le_bytes());
        out.extend_from_slice(&(payload.len() as u64).to_le_bytes());
        out.extend_from_slice(&payload);
        out
    }

    pub fn from_binary(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 16 || &bytes[0..4] != BINARY_MAGIC {
            return Err(Error::Format("bad magic".into()));
        }
        let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
        if version != BINARY_VERSION {
            return Err(Error::Format(format!("unsupported version {version}")));
        }
        let len = u64::from_le_bytes(bytes[8..16].try_into().unwrap()) as usize;
        let payload = &bytes[16..];
        if payload.len() != len {
            return Err(Error::Format(format!(
                "payload length {} does not match prefix {len}",
                payload.len()
            )));
        }
        if len < 16 {
            return Err(Error::Format("truncated payload".into()));
        }
        let n_sites = u64::from_le_bytes(payload[0..8].try_into().unwrap()) as usize;
        let halfband = u64::from_le_bytes(payload[8..16].try_into().unwrap()) as usize;
        let mut out = Self::zeros(n_sites, halfband);
        let mut off = 16usize;
        let need: usize = out.diags.iter().map(|d| d.len() * 16).sum();
        if payload.len() - 16 != need {
            return Err(Error::Format("entry count mismatch".into()));
        }
        for d in &mut out.diags {
            for v in d.iter_mut() {
                let re = f64::from_le_bytes(payload[off..off + 8].try_into().unwrap());
                let im = f64::from_le_bytes(payload[off + 8..off + 16].try_into().unwrap());
                *v = Complex64::new(re, im);
                off += 16;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::SplitMix64;
    use approx::assert_abs_diff_eq;

    fn random_op(n: usize, hb: usize, rng: &mut SplitMix64) -> QuantizedOperator {
        let mut a = QuantizedOperator::zeros(n, hb);
        let dim = n + 1;
        for j in 0..dim {
            for k in j.saturating_sub(hb)..=(j + hb).min(dim - 1) {
                a.set(
                    j,
                    k,
                    Complex64::new(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)),
                );
            }
        }
        a
    }

    #[test]
    fn get_set_band_structure() {
        let mut a = QuantizedOperator::zeros(4, 1);
        a.set(2, 3, Complex64::new(1.5, -0.5));
        assert_eq!(a.get(2, 3), Complex64::new(1.5, -0.5));
        assert_eq!(a.get(3, 2), Complex64::new(0.0, 0.0));
        assert_eq!(a.get(0, 2), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn hermitize_fixes_defect() {
        let mut rng = SplitMix64::new(1);
        let mut a = random_op(6, 2, &mut rng);
        assert!(a.hermiticity_defect() > 0.1);
        a.hermitize();
        assert!(a.hermiticity_defect() < 1e-15);
    }

    #[test]
    fn matmul_matches_dense() {
        let mut rng = SplitMix64::new(2);
        let a = random_op(9, 2, &mut rng);
        let b = random_op(9, 1, &mut rng);
        let c = a.matmul(&b);
        let (da, db) = (a.to_dense(), b.to_dense());
        let dim = 10;
        for j in 0..dim {
            for k in 0..dim {
                let mut want = Complex64::new(0.0, 0.0);
                for l in 0..dim {
                    want += da[j * dim + l] * db[l * dim + k];
                }
                assert_abs_diff_eq!((c.get(j, k) - want).norm(), 0.0, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn apply_matches_dense() {
        let mut rng = SplitMix64::new(3);
        let a = random_op(12, 3, &mut rng);
        let v = DickeVector::random_unit(12, &mut rng);
        let got = a.apply(&v);
        let da = a.to_dense();
        for j in 0..13 {
            let mut want = Complex64::new(0.0, 0.0);
            for k in 0..13 {
                want += da[j * 13 + k] * v.coeffs()[k];
            }
            assert_abs_diff_eq!((got.coeffs()[j] - want).norm(), 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn adjoint_involution_and_defect_zero_for_hermitian() {
        let mut rng = SplitMix64::new(4);
        let mut a = random_op(7, 2, &mut rng);
        a.hermitize();
        assert!(a.adjoint().entrywise_distance(&a) < 1e-15);
    }

    #[test]
    fn binary_round_trip_bit_exact() {
        let mut rng = SplitMix64::new(5);
        let a = random_op(15, 4, &mut rng);
        let bytes = a.to_binary();
        let b = QuantizedOperator::from_binary(&bytes).unwrap();
        assert_eq!(a, b);
        assert_eq!(bytes, b.to_binary());
    }

    #[test]
    fn binary_rejects_corruption() {
        let a = QuantizedOperator::identity(3);
        let mut bytes = a.to_binary();
        bytes[0] = b'X';
        assert!(QuantizedOperator::from_binary(&bytes).is_err());
        let mut bytes2 = a.to_binary();
        bytes2.truncate(bytes2.len() - 8);
        assert!(QuantizedOperator::from_binary(&bytes2).is_err());
    }

    #[test]
    fn text_round_trip() {
        let mut rng = SplitMix64::new(6);
        let a = random_op(5, 2, &mut rng);
        let b = QuantizedOperator::from_text(&a.to_text()).unwrap();
        assert!(a.entrywise_distance(&b) < 1e-15);
    }

    #[test]
    fn commutator_of_hermitian_is_hermitian() {
        let mut rng = SplitMix64::new(7);
        let mut a = random_op(8, 1, &mut rng);
        let mut b = random_op(8, 2, &mut rng);
        a.hermitize();
        b.hermitize();
        let c = a.commutator_i(&b);
        assert!(c.is_hermitian(1e-13));
    }
}
