//! Dense-free eigensolver plumbing: implicit-shift QL for symmetric
//! tridiagonal matrices, Givens bulge-chasing reduction of symmetric band
//! matrices to tridiagonal form, a Householder reduction for the dense
//! fallback, and LU solvers (banded, complex) for inverse iteration.
//! Everything here works on plain slices; the dispatch from
//! `QuantizedOperator` lives in `spectral`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Iteration cap per eigenvalue in the QL sweeps.
const QL_MAX_ITERS: usize = 50;

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e` (length n−1), by the implicit-shift QL algorithm.
/// Returns them sorted ascending. O(n) per eigenvalue, O(n²) total.
pub fn tridiag_eigenvalues(mut d: Vec<f64>, mut e: Vec<f64>) -> Result<Vec<f64>> {
    let n = d.len();
    assert!(
        n >= 1 && e.len() == n - 1,
        "off-diagonal length must be n-1"
    );
    // trailing scratch slot keeps index arithmetic uniform
    e.push(0.0);
    for l in 0..n {
        let mut iter = 0usize;
        loop {
            // locate a negligible off-diagonal element
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > QL_MAX_ITERS {
                return Err(Error::NoConvergence(format!(
                    "QL sweep for eigenvalue {l} of {n} did not settle after {QL_MAX_ITERS} \
                     iterations; residual off-diagonal {:.3e}",
                    e[l]
                )));
            }
            // implicit shift from the leading 2×2
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(d)
}

/// Symmetric band matrix, upper diagonals only: `diags[k][j] = A[j][j+k]`
/// for k = 0..=halfband.
#[derive(Debug, Clone)]
pub struct SymBand {
    pub n: usize,
    pub halfband: usize,
    pub diags: Vec<Vec<f64>>,
}

impl SymBand {
    pub fn zeros(n: usize, halfband: usize) -> Self {
        let halfband = halfband.min(n.saturating_sub(1));
        Self {
            n,
            halfband,
            diags: (0..=halfband).map(|k| vec![0.0; n - k]).collect(),
        }
    }

    fn get(&self, i: usize, j: usize) -> f64 {
        let (lo, hi) = (i.min(j), i.max(j));
        if hi - lo > self.halfband {
            0.0
        } else {
            self.diags[hi - lo][lo]
        }
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        let (lo, hi) = (i.min(j), i.max(j));
        self.diags[hi - lo][lo] = v;
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.n;
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] = self.get(i, j);
            }
        }
        a
    }
}

/// Reduces a symmetric band matrix to tridiagonal form by Givens rotations
/// with bulge chasing (Schwarz' scheme): the outermost diagonal is zeroed
/// element by element, each rotation's spill one place outside the band is
/// chased off the bottom, and the bandwidth shrinks one diagonal at a time.
/// O(n² · halfband) with no dense intermediate. Returns (diagonal,
/// off-diagonal) of the orthogonally similar tridiagonal matrix.
pub fn band_to_tridiag(band: &SymBand) -> (Vec<f64>, Vec<f64>) {
    let n = band.n;
    if band.halfband <= 1 {
        let d = band.diags[0].clone();
        let e = if band.halfband == 1 {
            band.diags[1].clone()
        } else {
            vec![0.0; n.saturating_sub(1)]
        };
        return (d, e);
    }
    let mut work = SymBand::zeros(n, band.halfband + 1);
    for k in 0..=band.halfband {
        work.diags[k].copy_from_slice(&band.diags[k]);
    }
    let mut m = band.halfband;
    while m >= 2 {
        for r in 0..n.saturating_sub(m) {
            // kill A[r, r+m], then chase the bulge down in strides of m
            let mut row = r;
            let mut q = r + m;
            loop {
                let a_keep = work.get(row, q - 1);
                let a_kill = work.get(row, q);
                if a_kill == 0.0 {
                    break;
                }
                let h = a_keep.hypot(a_kill);
                let (c, s) = (a_keep / h, a_kill / h);
                rotate(&mut work, q, c, s, m);
                // the rotation zeroes this entry by construction; write the
                // exact zero rather than the roundoff residue
                work.set(row, q, 0.0);
                if q + m > n - 1 {
                    break;
                }
                row = q - 1;
                q += m;
            }
        }
        // the diagonal at distance m is clean now; shrink the working band
        debug_assert!(work.diags[m].iter().all(|&v| v.abs() < 1e-300));
        let mut shrunk = SymBand::zeros(n, m);
        for k in 0..m {
            shrunk.diags[k].copy_from_slice(&work.diags[k]);
        }
        work = shrunk;
        m -= 1;
    }
    let d = work.diags[0].clone();
    let e = work.diags[1].clone();
    (d, e)
}

/// Applies the symmetric congruence by the rotation in the (q−1, q) plane:
/// rows and columns q−1, q mixed with cosine `c` and sine `s`. `m` is the
/// in-band halfwidth; the working matrix carries one spare diagonal (m+1)
/// that receives the bulge.
fn rotate(a: &mut SymBand, q: usize, c: f64, s: f64, m: usize) {
    let n = a.n;
    let p = q - 1;
    // rows i < p touching columns (p, q)
    let i_lo = q.saturating_sub(m + 1);
    for i in i_lo..p {
        let u = a.get(i, p);
        let v = a.get(i, q);
        a.set(i, p, c * u + s * v);
        a.set(i, q, -s * u + c * v);
    }
    // the 2×2 block
    let app = a.get(p, p);
    let apq = a.get(p, q);
    let aqq = a.get(q, q);
    a.set(p, p, c * c * app + 2.0 * s * c * apq + s * s * aqq);
    a.set(q, q, s * s * app - 2.0 * s * c * apq + c * c * aqq);
    a.set(p, q, (c * c - s * s) * apq + s * c * (aqq - app));
    // columns j > q touched by rows (p, q)
    let j_hi = (q + m).min(n - 1);
    for j in (q + 1)..=j_hi {
        let u = a.get(p, j);
        let v = a.get(q, j);
        a.set(p, j, c * u + s * v);
        a.set(q, j, -s * u + c * v);
    }
}

/// Householder reduction of a dense symmetric matrix (row-major, length n²)
/// to tridiagonal form, eigenvalues-only variant. The input is destroyed.
pub fn dense_sym_to_tridiag(a: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(a.len(), n * n);
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0f64;
        if l > 0 {
            let scale: f64 = (0..=l).map(|k| a[i * n + k].abs()).sum();
            if scale == 0.0 {
                e[i] = a[i * n + l];
            } else {
                for k in 0..=l {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                let f = a[i * n + l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i * n + l] = f - g;
                let mut ff = 0.0f64;
                for j in 0..=l {
                    let mut g = 0.0f64;
                    for k in 0..=j {
                        g += a[j * n + k] * a[i * n + k];
                    }
                    for k in (j + 1)..=l {
                        g += a[k * n + j] * a[i * n + k];
                    }
                    e[j] = g / h;
                    ff += e[j] * a[i * n + j];
                }
                let hh = ff / (h + h);
                for j in 0..=l {
                    let f = a[i * n + j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[j * n + k] -= f * e[k] + g * a[i * n + k];
                    }
                }
            }
        } else {
            e[i] = a[i * n + l];
        }
        d[i] = h;
    }
    for i in 0..n {
        d[i] = a[i * n + i];
    }
    let off = e[1..].to_vec();
    (d, off)
}

/// Eigenvalues of a complex Hermitian matrix (dense row-major) through the
/// real embedding [[X, −Y], [Y, X]], whose spectrum is that of X + iY with
/// every eigenvalue doubled. Costs more flops than a native complex
/// reduction but reuses the real path verbatim; fine for the fallback sizes.
pub fn hermitian_dense_eigenvalues(a: &[Complex64], n: usize) -> Result<Vec<f64>> {
    assert_eq!(a.len(), n * n);
    let nn = 2 * n;
    let mut big = vec![0.0f64; nn * nn];
    for i in 0..n {
        for j in 0..n {
            let v = a[i * n + j];
            big[i * nn + j] = v.re;
            big[(i + n) * nn + (j + n)] = v.re;
            big[i * nn + (j + n)] = -v.im;
            big[(i + n) * nn + j] = v.im;
        }
    }
    let (d, e) = dense_sym_to_tridiag(&mut big, nn);
    let all = tridiag_eigenvalues(d, e)?;
    // sorted doubled multiset: decimating by two recovers each value once
    Ok(all.into_iter().step_by(2).collect())
}

/// LU factorization with partial pivoting of a shifted complex band matrix
/// (kl sub-, ku super-diagonals), for the solves in inverse iteration.
/// Column-major band storage: column j holds rows j−(kl+ku) .. j+kl, the
/// kl+ku upper breadth being where pivoting fill can land. Within those
/// windows the factorization is the unblocked textbook scheme.
pub struct BandLu {
    n: usize,
    kl: usize,
    ku_fill: usize,
    cols: Vec<Vec<Complex64>>,
    perm: Vec<usize>,
}

impl BandLu {
    /// Factorizes (A − shift·I), reading A's entries through `get`.
    pub fn new<G>(n: usize, kl: usize, ku: usize, shift: Complex64, get: G) -> Self
    where
        G: Fn(usize, usize) -> Complex64,
    {
        let ku_fill = ku + kl;
        let row0 = |j: usize| j.saturating_sub(ku_fill);
        let row1 = |j: usize| (j + kl).min(n - 1);
        let mut cols: Vec<Vec<Complex64>> = (0..n)
            .map(|j| {
                let mut col = vec![Complex64::new(0.0, 0.0); row1(j) - row0(j) + 1];
                for i in j.saturating_sub(ku)..=row1(j) {
                    let mut v = get(i, j);
                    if i == j {
                        v -= shift;
                    }
                    col[i - row0(j)] = v;
                }
                col
            })
            .collect();
        let at = |cols: &Vec<Vec<Complex64>>, i: usize, j: usize| -> Complex64 {
            if i < row0(j) || i > row1(j) {
                Complex64::new(0.0, 0.0)
            } else {
                cols[j][i - row0(j)]
            }
        };
        let scale = cols
            .iter()
            .flat_map(|c| c.iter())
            .map(|v| v.norm())
            .fold(0.0f64, f64::max)
            .max(1e-100);
        let mut perm = Vec::with_capacity(n);
        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let mut piv = k;
            let mut best = at(&cols, k, k).norm();
            for i in (k + 1)..=last_row {
                let v = at(&cols, i, k).norm();
                if v > best {
                    best = v;
                    piv = i;
                }
            }
            perm.push(piv);
            let last_col = (k + ku_fill).min(n - 1);
            if piv != k {
                for j in k..=last_col {
                    let a = at(&cols, k, j);
                    let b = at(&cols, piv, j);
                    cols[j][k - row0(j)] = b;
                    cols[j][piv - row0(j)] = a;
                }
            }
            let mut pivot = at(&cols, k, k);
            if pivot.norm() == 0.0 {
                // exactly singular: nudge so inverse iteration can still
                // harvest the near-null direction; the nudge must stay far
                // from the subnormal range or complex division's norm_sqr
                // underflows to 0/0
                pivot = Complex64::new(scale * 1e-120, 0.0);
                cols[k][k - row0(k)] = pivot;
            }
            for i in (k + 1)..=last_row {
                let lik = at(&cols, i, k) / pivot;
                cols[k][i - row0(k)] = lik;
                if lik.norm() == 0.0 {
                    continue;
                }
                for j in (k + 1)..=last_col {
                    let upper = at(&cols, k, j);
                    if upper.norm() != 0.0 {
                        cols[j][i - row0(j)] -= lik * upper;
                    }
                }
            }
        }
        Self {
            n,
            kl,
            ku_fill,
            cols,
            perm,
        }
    }

    fn at(&self, i: usize, j: usize) -> Complex64 {
        let r0 = j.saturating_sub(self.ku_fill);
        let r1 = (j + self.kl).min(self.n - 1);
        if i < r0 || i > r1 {
            Complex64::new(0.0, 0.0)
        } else {
            self.cols[j][i - r0]
        }
    }

    /// Solves (A − shift)x = b with the stored factors.
    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        assert_eq!(b.len(), n);
        let mut x: Vec<Complex64> = b.to_vec();
        for k in 0..n {
            let piv = self.perm[k];
            if piv != k {
                x.swap(piv, k);
            }
            let last = (k + self.kl).min(n - 1);
            for i in (k + 1)..=last {
                let lik = self.at(i, k);
                if lik.norm() != 0.0 {
                    let xk = x[k];
                    x[i] -= lik * xk;
                }
            }
        }
        for k in (0..n).rev() {
            let hi = (k + self.ku_fill).min(n - 1);
            let mut acc = x[k];
            for j in (k + 1)..=hi {
                acc -= self.at(k, j) * x[j];
            }
            x[k] = acc / self.at(k, k);
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::SplitMix64;
    use approx::assert_abs_diff_eq;

    #[test]
    fn ql_on_diagonal_matrix() {
        let vals = tridiag_eigenvalues(vec![3.0, 1.0, 2.0], vec![0.0, 0.0]).unwrap();
        assert_eq!(vals, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn ql_on_toeplitz_has_known_spectrum() {
        // tridiag(-1, 2, -1) of size n has eigenvalues 2 - 2 cos(kπ/(n+1))
        let n = 50;
        let vals = tridiag_eigenvalues(vec![2.0; n], vec![-1.0; n - 1]).unwrap();
        for (k, v) in vals.iter().enumerate() {
            let want = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos();
            assert_abs_diff_eq!(*v, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn ql_pauli_x_like() {
        let vals = tridiag_eigenvalues(vec![0.0, 0.0], vec![0.5]).unwrap();
        assert_abs_diff_eq!(vals[0], -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(vals[1], 0.5, epsilon = 1e-15);
    }

    fn random_band(n: usize, hb: usize, rng: &mut SplitMix64) -> SymBand {
        let mut b = SymBand::zeros(n, hb);
        for k in 0..=b.halfband {
            for j in 0..n - k {
                b.diags[k][j] = rng.uniform(-1.0, 1.0);
            }
        }
        b
    }

    #[test]
    fn band_reduction_preserves_trace_and_frobenius() {
        let mut rng = SplitMix64::new(61);
        for (n, hb) in [(12usize, 2usize), (30, 4), (57, 3), (64, 1)] {
            let band = random_band(n, hb, &mut rng);
            let (d, e) = band_to_tridiag(&band);
            let tr_band: f64 = band.diags[0].iter().sum();
            let tr_tri: f64 = d.iter().sum();
            assert_abs_diff_eq!(tr_band, tr_tri, epsilon = 1e-10 * n as f64);
            let fro_band: f64 = band
                .diags
                .iter()
                .enumerate()
                .map(|(k, diag)| {
                    let f: f64 = diag.iter().map(|v| v * v).sum();
                    if k == 0 {
                        f
                    } else {
                        2.0 * f
                    }
                })
                .sum();
            let fro_tri: f64 =
                d.iter().map(|v| v * v).sum::<f64>() + 2.0 * e.iter().map(|v| v * v).sum::<f64>();
            assert_abs_diff_eq!(fro_band, fro_tri, epsilon = 1e-9 * n as f64);
        }
    }

    #[test]
    fn band_and_dense_paths_agree() {
        let mut rng = SplitMix64::new(67);
        for (n, hb) in [(9usize, 2usize), (24, 3), (41, 5)] {
            let band = random_band(n, hb, &mut rng);
            let (d, e) = band_to_tridiag(&band);
            let via_band = tridiag_eigenvalues(d, e).unwrap();
            let mut dense = band.to_dense();
            let (d2, e2) = dense_sym_to_tridiag(&mut dense, n);
            let via_dense = tridiag_eigenvalues(d2, e2).unwrap();
            for (a, b) in via_band.iter().zip(via_dense.iter()) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn hermitian_embedding_on_pauli_y() {
        let a = vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, 0.0),
        ];
        let vals = hermitian_dense_eigenvalues(&a, 2).unwrap();
        assert_abs_diff_eq!(vals[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(vals[1], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn hermitian_embedding_trace_and_frobenius() {
        let mut rng = SplitMix64::new(71);
        let n = 14;
        let mut a = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            a[i * n + i] = Complex64::new(rng.uniform(-1.0, 1.0), 0.0);
            for j in (i + 1)..n {
                let v = Complex64::new(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
                a[i * n + j] = v;
                a[j * n + i] = v.conj();
            }
        }
        let vals = hermitian_dense_eigenvalues(&a, n).unwrap();
        let tr: f64 = (0..n).map(|i| a[i * n + i].re).sum();
        let sum: f64 = vals.iter().sum();
        assert_abs_diff_eq!(tr, sum, epsilon = 1e-10);
        let fro: f64 = a.iter().map(|v| v.norm_sqr()).sum();
        let sq: f64 = vals.iter().map(|v| v * v).sum();
        assert_abs_diff_eq!(fro, sq, epsilon = 1e-9);
    }

    #[test]
    fn band_lu_solves_shifted_system() {
        let mut rng = SplitMix64::new(73);
        let n = 40usize;
        let (kl, ku) = (2usize, 2usize);
        let mut entries = std::collections::HashMap::new();
        for i in 0..n {
            for j in i.saturating_sub(kl)..=(i + ku).min(n - 1) {
                entries.insert(
                    (i, j),
                    Complex64::new(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)),
                );
            }
        }
        let get = |i: usize, j: usize| -> Complex64 {
            entries
                .get(&(i, j))
                .copied()
                .unwrap_or(Complex64::new(0.0, 0.0))
        };
        let shift = Complex64::new(0.3, -0.1);
        let lu = BandLu::new(n, kl, ku, shift, get);
        let b: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)))
            .collect();
        let x = lu.solve(&b);
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in i.saturating_sub(kl)..=(i + ku).min(n - 1) {
                let mut v = get(i, j);
                if i == j {
                    v -= shift;
                }
                acc += v * x[j];
            }
            assert_abs_diff_eq!((acc - b[i]).norm(), 0.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn band_lu_tridiagonal_case() {
        // Toeplitz(-1, 2, -1): solve against a known smooth solution
        let n = 25;
        let get = |i: usize, j: usize| -> Complex64 {
            if i == j {
                Complex64::new(2.0, 0.0)
            } else if i.abs_diff(j) == 1 {
                Complex64::new(-1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        };
        let lu = BandLu::new(n, 1, 1, Complex64::new(0.0, 0.0), get);
        let xs: Vec<Complex64> = (0..n)
            .map(|i| Complex64::new((i as f64 * 0.3).sin(), 0.0))
            .collect();
        // b = A x
        let mut b = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            for j in i.saturating_sub(1)..=(i + 1).min(n - 1) {
                b[i] += get(i, j) * xs[j];
            }
        }
        let solved = lu.solve(&b);
        for (got, want) in solved.iter().zip(xs.iter()) {
            assert_abs_diff_eq!((got - want).norm(), 0.0, epsilon = 1e-11);
        }
    }
}
