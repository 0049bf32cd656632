//! Sparse polynomials in the ambient coordinates (x, y, z), restricted to the
//! unit sphere. Two polynomials are the same observable iff they agree on S²,
//! i.e. iff they are equal modulo the ideal generated by x² + y² + z² − 1.
//! The canonical representative eliminates z² via z² = 1 − x² − y², so a
//! canonical polynomial has z-exponent ≤ 1 in every monomial.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sphere::SpherePoint;

/// Coefficients below this magnitude are dropped after every construction,
/// so floating-point residue never inflates the term count.
pub const PRUNE_EPS: f64 = 1e-15;

/// Maximum total degree a stored monomial may carry.
pub const MAX_DEGREE: usize = 64;

/// Exponents (a, b, c) of x^a y^b z^c.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

impl Monomial {
    pub fn new(a: u32, b: u32, c: u32) -> Self {
        Self { a, b, c }
    }

    pub fn degree(&self) -> usize {
        (self.a + self.b + self.c) as usize
    }
}

/// Sparse polynomial with complex coefficients. `canonical` records whether
/// the sphere relation has been applied (z-exponent ≤ 1 everywhere).
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePolynomial {
    terms: BTreeMap<Monomial, Complex64>,
    canonical: bool,
}

impl SpherePolynomial {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
            canonical: true,
        }
    }

    pub fn constant(c: Complex64) -> Self {
        let mut terms = BTreeMap::new();
        if c.norm() >= PRUNE_EPS {
            terms.insert(Monomial::new(0, 0, 0), c);
        }
        Self {
            terms,
            canonical: true,
        }
    }

    pub fn constant_real(c: f64) -> Self {
        Self::constant(Complex64::new(c, 0.0))
    }

    pub fn one() -> Self {
        Self::constant_real(1.0)
    }

    pub fn x() -> Self {
        Self::monomial(Monomial::new(1, 0, 0), Complex64::new(1.0, 0.0))
    }

    pub fn y() -> Self {
        Self::monomial(Monomial::new(0, 1, 0), Complex64::new(1.0, 0.0))
    }

    pub fn z() -> Self {
        Self::monomial(Monomial::new(0, 0, 1), Complex64::new(1.0, 0.0))
    }

    /// Single term coeff · x^a y^b z^c.
    pub fn monomial(m: Monomial, coeff: Complex64) -> Self {
        assert!(
            m.degree() <= MAX_DEGREE,
            "monomial degree {} exceeds cap {MAX_DEGREE} (configuration error)",
            m.degree()
        );
        let mut terms = BTreeMap::new();
        if coeff.norm() >= PRUNE_EPS {
            terms.insert(m, coeff);
        }
        Self {
            terms,
            canonical: m.c <= 1,
        }
    }

    /// Builds from (monomial, coefficient) pairs, merging duplicates.
    pub fn from_terms<I>(iter: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, Complex64)>,
    {
        let mut terms: BTreeMap<Monomial, Complex64> = BTreeMap::new();
        for (m, c) in iter {
            if m.degree() > MAX_DEGREE {
                return Err(Error::DegreeCap {
                    degree: m.degree(),
                    cap: MAX_DEGREE,
                });
            }
            *terms.entry(m).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        terms.retain(|_, c| c.norm() >= PRUNE_EPS);
        let canonical = terms.keys().all(|m| m.c <= 1);
        Ok(Self { terms, canonical })
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Complex64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    /// Largest total degree among stored monomials; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// True when every coefficient has |imag| ≤ 1e-15.
    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.im.abs() <= 1e-15)
    }

    pub fn conj(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(m, c)| (*m, c.conj())).collect(),
            canonical: self.canonical,
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut terms: BTreeMap<Monomial, Complex64> =
            self.terms.iter().map(|(m, c)| (*m, c * s)).collect();
        terms.retain(|_, c| c.norm() >= PRUNE_EPS);
        let canonical = terms.keys().all(|m| m.c <= 1);
        Self { terms, canonical }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            *terms.entry(*m).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        terms.retain(|_, c| c.norm() >= PRUNE_EPS);
        let canonical = terms.keys().all(|m| m.c <= 1);
        Self { terms, canonical }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale_real(-1.0))
    }

    /// Product. Panics if the result exceeds the degree cap; callers that
    /// accept user input must bound input degrees first.
    pub fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<Monomial, Complex64> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = Monomial::new(m1.a + m2.a, m1.b + m2.b, m1.c + m2.c);
                assert!(
                    m.degree() <= MAX_DEGREE,
                    "product degree {} exceeds cap {MAX_DEGREE} (configuration error)",
                    m.degree()
                );
                *terms.entry(m).or_insert(Complex64::new(0.0, 0.0)) += c1 * c2;
            }
        }
        terms.retain(|_, c| c.norm() >= PRUNE_EPS);
        let canonical = terms.keys().all(|m| m.c <= 1);
        Self { terms, canonical }
    }

    /// Canonical representative modulo the sphere relation: every z² is
    /// replaced by 1 − x² − y² until all z-exponents are ≤ 1. Agrees with
    /// the input pointwise on S².
    pub fn reduce_mod_sphere(&self) -> Self {
        let mut work: Vec<(Monomial, Complex64)> =
            self.terms.iter().map(|(m, c)| (*m, *c)).collect();
        let mut out: BTreeMap<Monomial, Complex64> = BTreeMap::new();
        while let Some((m, c)) = work.pop() {
            if m.c <= 1 {
                *out.entry(m).or_insert(Complex64::new(0.0, 0.0)) += c;
            } else {
                // x^a y^b z^c = x^a y^b z^(c-2) - x^(a+2) y^b z^(c-2) - x^a y^(b+2) z^(c-2)
                work.push((Monomial::new(m.a, m.b, m.c - 2), c));
                work.push((Monomial::new(m.a + 2, m.b, m.c - 2), -c));
                work.push((Monomial::new(m.a, m.b + 2, m.c - 2), -c));
            }
        }
        out.retain(|_, c| c.norm() >= PRUNE_EPS);
        Self {
            terms: out,
            canonical: true,
        }
    }

    /// Value at a sphere point.
    pub fn evaluate(&self, p: &SpherePoint) -> Complex64 {
        self.evaluate_xyz(p.xyz())
    }

    /// Value at arbitrary Cartesian coordinates (not necessarily on S²).
    pub fn evaluate_xyz(&self, xyz: [f64; 3]) -> Complex64 {
        let [x, y, z] = xyz;
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            acc += c * powi(x, m.a) * powi(y, m.b) * powi(z, m.c);
        }
        acc
    }

    /// Real part of the value; intended for polynomials that pass `is_real`.
    pub fn evaluate_real(&self, xyz: [f64; 3]) -> f64 {
        let [x, y, z] = xyz;
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            acc += c.re * powi(x, m.a) * powi(y, m.b) * powi(z, m.c);
        }
        acc
    }

    /// Ambient partial derivative along axis 0 = x, 1 = y, 2 = z.
    pub fn partial(&self, axis: usize) -> Self {
        let mut terms: BTreeMap<Monomial, Complex64> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = match axis {
                0 => m.a,
                1 => m.b,
                2 => m.c,
                _ => panic!("axis must be 0, 1 or 2"),
            };
            if e == 0 {
                continue;
            }
            let dm = match axis {
                0 => Monomial::new(m.a - 1, m.b, m.c),
                1 => Monomial::new(m.a, m.b - 1, m.c),
                _ => Monomial::new(m.a, m.b, m.c - 1),
            };
            *terms.entry(dm).or_insert(Complex64::new(0.0, 0.0)) += c * e as f64;
        }
        terms.retain(|_, c| c.norm() >= PRUNE_EPS);
        let canonical = terms.keys().all(|m| m.c <= 1);
        Self { terms, canonical }
    }

    /// Poisson bracket on the sphere, {f, g} = Σ ε_ab^c x_c ∂f/∂x_a ∂g/∂x_b,
    /// computed with ambient partials and returned in canonical form.
    /// Bilinear and antisymmetric; {x, y} = z and cyclic.
    pub fn poisson_bracket(&self, other: &Self) -> Self {
        let fx = self.partial(0);
        let fy = self.partial(1);
        let fz = self.partial(2);
        let gx = other.partial(0);
        let gy = other.partial(1);
        let gz = other.partial(2);
        let zc = Self::z().mul(&fx.mul(&gy).sub(&fy.mul(&gx)));
        let xc = Self::x().mul(&fy.mul(&gz).sub(&fz.mul(&gy)));
        let yc = Self::y().mul(&fz.mul(&gx).sub(&fx.mul(&gz)));
        zc.add(&xc).add(&yc).reduce_mod_sphere()
    }

    /// Coefficient of a given monomial (zero if absent).
    pub fn coeff(&self, m: Monomial) -> Complex64 {
        self.terms
            .get(&m)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Max coefficient magnitude; a cheap scale for tolerance comparisons.
    pub fn coeff_scale(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Coefficientwise distance max |self_m − other_m|.
    pub fn coeff_distance(&self, other: &Self) -> f64 {
        let mut d = 0.0f64;
        for (m, c) in &self.terms {
            d = d.max((c - other.coeff(*m)).norm());
        }
        for (m, c) in &other.terms {
            d = d.max((c - self.coeff(*m)).norm());
        }
        d
    }

    /// Parses the plain-text format: signed terms `coeff x^a y^b z^c` with
    /// elidable unit coefficients and exponents, e.g. `-0.5 z^2 - 0.5 x`.
    /// Whitespace is insignificant. Coefficients are real.
    pub fn parse(input: &str) -> Result<Self> {
        let chars: Vec<char> = input.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut terms: Vec<(Monomial, Complex64)> = Vec::new();
        let mut i = 0usize;
        while i < chars.len() {
            // sign
            let mut sign = 1.0;
            let mut saw_sign = false;
            while i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
                if chars[i] == '-' {
                    sign = -sign;
                }
                saw_sign = true;
                i += 1;
            }
            if i >= chars.len() {
                return Err(Error::Parse("dangling sign".into()));
            }
            if !terms.is_empty() && !saw_sign {
                return Err(Error::Parse(format!(
                    "expected '+' or '-' before term at offset {i}"
                )));
            }
            // coefficient
            let (coeff, used) = parse_number(&chars[i..]);
            i += used;
            // variables
            let mut exps = [0u32; 3];
            let mut saw_var = false;
            while i < chars.len() {
                let axis = match chars[i] {
                    'x' | 'X' => 0,
                    'y' | 'Y' => 1,
                    'z' | 'Z' => 2,
                    '*' => {
                        i += 1;
                        continue;
                    }
                    _ => break,
                };
                saw_var = true;
                i += 1;
                let mut e = 1u32;
                if i < chars.len() && chars[i] == '^' {
                    i += 1;
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    if start == i {
                        return Err(Error::Parse("missing exponent after '^'".into()));
                    }
                    e = chars[start..i]
                        .iter()
                        .collect::<String>()
                        .parse::<u32>()
                        .map_err(|e| Error::Parse(format!("bad exponent: {e}")))?;
                }
                exps[axis] += e;
            }
            let coeff = match coeff {
                Some(v) => v,
                None if saw_var => 1.0,
                None => {
                    return Err(Error::Parse(format!(
                        "unexpected character '{}' at offset {i}",
                        chars[i]
                    )))
                }
            };
            let m = Monomial::new(exps[0], exps[1], exps[2]);
            if m.degree() > MAX_DEGREE {
                return Err(Error::DegreeCap {
                    degree: m.degree(),
                    cap: MAX_DEGREE,
                });
            }
            terms.push((m, Complex64::new(sign * coeff, 0.0)));
        }
        Self::from_terms(terms)
    }
}

fn powi(base: f64, exp: u32) -> f64 {
    // powi is exact-ish and much faster than powf for small integer exponents
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

/// Parses a leading decimal float out of `chars`, returning (value, used).
/// Returns (None, 0) when `chars` does not start with a number.
fn parse_number(chars: &[char]) -> (Option<f64>, usize) {
    let mut i = 0usize;
    let mut saw_digit = false;
    while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
        if chars[i].is_ascii_digit() {
            saw_digit = true;
        }
        i += 1;
    }
    if !saw_digit {
        return (None, 0);
    }
    // scientific exponent: e/E followed by optional sign and digits
    if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
        let mut j = i + 1;
        if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
            j += 1;
        }
        let ds = j;
        while j < chars.len() && chars[j].is_ascii_digit() {
            j += 1;
        }
        if j > ds {
            i = j;
        }
    }
    let s: String = chars[..i].iter().collect();
    match s.parse::<f64>() {
        Ok(v) => (Some(v), i),
        Err(_) => (None, 0),
    }
}

impl fmt::Display for SpherePolynomial {
    /// Prints in the same plain-text format `parse` accepts, highest total
    /// degree first, with unit coefficients and exponents elided.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut entries: Vec<(&Monomial, &Complex64)> = self.terms.iter().collect();
        entries.sort_by(|(m1, _), (m2, _)| {
            m2.degree()
                .cmp(&m1.degree())
                .then((m1.a, m1.b, m1.c).cmp(&(m2.a, m2.b, m2.c)))
        });
        for (i, (m, c)) in entries.iter().enumerate() {
            let re = c.re;
            debug_assert!(c.im.abs() <= 1e-12, "display is for real polynomials");
            let mag = re.abs();
            if i == 0 {
                if re < 0.0 {
                    write!(f, "-")?;
                }
            } else if re < 0.0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_const = m.degree() == 0;
            if is_const || (mag - 1.0).abs() > 1e-14 {
                write!(f, "{mag}")?;
                if !is_const {
                    write!(f, " ")?;
                }
            }
            let mut first = true;
            for (name, e) in [("x", m.a), ("y", m.b), ("z", m.c)] {
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, " ")?;
                }
                first = false;
                if e == 1 {
                    write!(f, "{name}")?;
                } else {
                    write!(f, "{name}^{e}")?;
                }
            }
        }
        Ok(())
    }
}
