//! Trigonometric polynomials, operator words in `z, z*`, and the symbol map
//!
//! ```text
//! z  ↦ (ζ, r1 ζ, r2 ζ + a)        z* ↦ (ζ̄, r1 ζ̄, r2 ζ̄ + a)
//! ```
//!
//! extended linearly and multiplicatively. On the annulus the third slot is
//! absent (zero); on the disk only the first is present.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;

use crate::c64;
use crate::domain::{BasisIndex, DomainParams};
use crate::error::{Error, Result};
use crate::math;
use crate::matrix::{Mode, SparseMatrix};
use crate::operators;

/// Largest word degree accepted by [`symbol_of`] and [`word_matrix`].
pub const MAX_WORD_DEGREE: usize = 20;

/// `Σ c_k ζ^k` on the unit circle, `ζ = e^{iθ}`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrigPoly {
    coeffs: BTreeMap<i32, Complex64>,
}

impl TrigPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(k: i32, c: Complex64) -> Self {
        let mut p = Self::zero();
        p.add_term(k, c);
        p
    }

    pub fn zeta() -> Self {
        Self::monomial(1, c64(1.0))
    }

    pub fn from_terms(terms: &[(i32, Complex64)]) -> Self {
        let mut p = Self::zero();
        for &(k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    fn add_term(&mut self, k: i32, c: Complex64) {
        let e = self.coeffs.entry(k).or_insert(c64(0.0));
        *e += c;
        if *e == c64(0.0) {
            self.coeffs.remove(&k);
        }
    }

    pub fn coeff(&self, k: i32) -> Complex64 {
        self.coeffs.get(&k).copied().unwrap_or(c64(0.0))
    }

    /// Nonzero `(degree, coefficient)` pairs in increasing degree.
    pub fn terms(&self) -> impl Iterator<Item = (i32, Complex64)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    /// `max |k|` over the support; `0` for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.keys().map(|k| k.unsigned_abs() as usize).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (k, c) in other.terms() {
            p.add_term(k, c);
        }
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(c64(-1.0)))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut p = Self::zero();
        for (k, c) in self.terms() {
            p.add_term(k, c * s);
        }
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = Self::zero();
        for (i, a) in self.terms() {
            for (j, b) in other.terms() {
                p.add_term(i + j, a * b);
            }
        }
        p
    }

    /// Pointwise complex conjugate on the circle: `c_k ↦ conj(c_{-k})`.
    pub fn conj(&self) -> Self {
        let mut p = Self::zero();
        for (k, c) in self.terms() {
            p.add_term(-k, c.conj());
        }
        p
    }

    pub fn eval(&self, theta: f64) -> Complex64 {
        self.terms().map(|(k, c)| c * Complex64::new(math::cos(k as f64 * theta), math::sin(k as f64 * theta))).sum()
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.terms().map(|(_, c)| c.norm()).fold(0.0, f64::max)
    }
}

/// One circle function per family `E`, `F`, `G`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SymbolTriple {
    pub phi1: TrigPoly,
    pub phi2: TrigPoly,
    pub phi3: TrigPoly,
}

impl SymbolTriple {
    pub fn new(phi1: TrigPoly, phi2: TrigPoly, phi3: TrigPoly) -> Self {
        SymbolTriple { phi1, phi2, phi3 }
    }

    pub fn constant(c: Complex64) -> Self {
        let k = TrigPoly::constant(c);
        SymbolTriple::new(k.clone(), k.clone(), k)
    }

    fn zip(&self, other: &Self, f: impl Fn(&TrigPoly, &TrigPoly) -> TrigPoly) -> Self {
        SymbolTriple::new(f(&self.phi1, &other.phi1), f(&self.phi2, &other.phi2), f(&self.phi3, &other.phi3))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, TrigPoly::add)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip(other, TrigPoly::mul)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        SymbolTriple::new(self.phi1.scale(s), self.phi2.scale(s), self.phi3.scale(s))
    }

    pub fn conj(&self) -> Self {
        SymbolTriple::new(self.phi1.conj(), self.phi2.conj(), self.phi3.conj())
    }

    pub fn eval(&self, theta: f64) -> [Complex64; 3] {
        [self.phi1.eval(theta), self.phi2.eval(theta), self.phi3.eval(theta)]
    }

    pub fn slots(&self) -> [&TrigPoly; 3] {
        [&self.phi1, &self.phi2, &self.phi3]
    }

    /// Largest coefficient modulus of `self − other` over the three slots.
    pub fn max_deviation(&self, other: &Self) -> f64 {
        self.zip(other, TrigPoly::sub).slots().iter().map(|p| p.max_abs()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    Z,
    ZStar,
}

impl Letter {
    fn star(self) -> Self {
        match self {
            Letter::Z => Letter::ZStar,
            Letter::ZStar => Letter::Z,
        }
    }
}

/// Noncommutative polynomial in `z, z*`: a sum of weighted products, each
/// product read left to right (`[Z, ZStar]` is `z z*`).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OperatorWord {
    pub terms: Vec<(Complex64, Vec<Letter>)>,
}

impl OperatorWord {
    pub fn identity() -> Self {
        Self::scalar(c64(1.0))
    }

    pub fn scalar(c: Complex64) -> Self {
        OperatorWord { terms: vec![(c, Vec::new())] }
    }

    pub fn letters(letters: &[Letter]) -> Self {
        OperatorWord { terms: vec![(c64(1.0), letters.to_vec())] }
    }

    pub fn z() -> Self {
        Self::letters(&[Letter::Z])
    }

    pub fn z_star() -> Self {
        Self::letters(&[Letter::ZStar])
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(|(_, w)| w.len()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        OperatorWord { terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(c64(-1.0)))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        OperatorWord { terms: self.terms.iter().map(|(c, w)| (c * s, w.clone())).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a, u) in &self.terms {
            for (b, v) in &other.terms {
                let mut w = u.clone();
                w.extend_from_slice(v);
                terms.push((a * b, w));
            }
        }
        OperatorWord { terms }
    }

    pub fn adjoint(&self) -> Self {
        OperatorWord {
            terms: self.terms.iter().map(|(c, w)| (c.conj(), w.iter().rev().map(|l| l.star()).collect())).collect(),
        }
    }

    fn guard(&self) -> Result<()> {
        let d = self.degree();
        if d > MAX_WORD_DEGREE {
            return Err(Error::DegreeGuard { degree: d, max: MAX_WORD_DEGREE });
        }
        Ok(())
    }
}

fn fmt_coeff(c: Complex64) -> String {
    if c.im == 0.0 {
        c.re.to_string()
    } else {
        alloc::format!("({}{:+}i)", c.re, c.im)
    }
}

/// Real coefficients print in a form [`FromStr`] reads back.
impl fmt::Display for OperatorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (c, w)) in self.terms.iter().enumerate() {
            let mut c = *c;
            if c.im == 0.0 && c.re < 0.0 {
                f.write_str(if i > 0 { " - " } else { "-" })?;
                c = -c;
            } else if i > 0 {
                f.write_str(" + ")?;
            }
            let word: String = w.iter().map(|l| if *l == Letter::Z { "z" } else { "z*" }).collect();
            match (word.is_empty(), c == c64(1.0)) {
                (true, _) => f.write_str(&fmt_coeff(c))?,
                (false, true) => f.write_str(&word)?,
                (false, false) => write!(f, "{} {}", fmt_coeff(c), word)?,
            }
        }
        Ok(())
    }
}

/// Parses sums like `z*z - zz*`, `2 z z* + 0.5`, `I - 3zz`. A term is an
/// optional real coefficient followed by letters `z` / `z*`; `I` or a bare
/// number is a multiple of the identity.
impl FromStr for OperatorWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidWord(alloc::format!("{msg} in `{s}`"));
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(bad("empty word"));
        }
        let mut terms = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let mut sign = 1.0;
            if chars[i] == '+' || chars[i] == '-' {
                if chars[i] == '-' {
                    sign = -1.0;
                }
                i += 1;
            } else if !terms.is_empty() {
                return Err(bad("expected `+` or `-`"));
            }
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.' || chars[i] == 'e' && i > start) {
                i += 1;
            }
            let coeff = if i > start {
                let txt: String = chars[start..i].iter().collect();
                txt.parse::<f64>().map_err(|_| bad("malformed coefficient"))?
            } else {
                1.0
            };
            if i < chars.len() && chars[i] == '*' && i > start {
                i += 1; // `2*z`
            }
            let mut letters = Vec::new();
            while i < chars.len() && (chars[i] == 'z' || chars[i] == 'I') {
                if chars[i] == 'I' {
                    i += 1;
                    continue;
                }
                i += 1;
                if i < chars.len() && chars[i] == '*' {
                    letters.push(Letter::ZStar);
                    i += 1;
                } else {
                    letters.push(Letter::Z);
                }
            }
            if i == start {
                return Err(bad("empty term"));
            }
            if i < chars.len() && chars[i] != '+' && chars[i] != '-' {
                return Err(bad(&alloc::format!("unexpected `{}`", chars[i])));
            }
            terms.push((c64(sign * coeff), letters));
        }
        Ok(OperatorWord { terms })
    }
}

/// Symbol of `z` for the given domain.
pub fn symbol_of_z(params: &DomainParams) -> SymbolTriple {
    let zeta = TrigPoly::zeta();
    match *params {
        DomainParams::Disk => SymbolTriple::new(zeta, TrigPoly::zero(), TrigPoly::zero()),
        DomainParams::Annulus { r } => SymbolTriple::new(zeta.clone(), zeta.scale(c64(r)), TrigPoly::zero()),
        DomainParams::Pants { a, r1, r2 } => SymbolTriple::new(
            zeta.clone(),
            zeta.scale(c64(r1)),
            zeta.scale(c64(r2)).add(&TrigPoly::constant(c64(a))),
        ),
    }
}

pub fn symbol_of(word: &OperatorWord, params: &DomainParams) -> Result<SymbolTriple> {
    word.guard()?;
    let z = symbol_of_z(params);
    let zs = z.conj();
    let mut out = SymbolTriple::default();
    for (c, letters) in &word.terms {
        let term = letters.iter().fold(SymbolTriple::constant(*c), |acc, l| {
            acc.mul(match l {
                Letter::Z => &z,
                Letter::ZStar => &zs,
            })
        });
        out = out.add(&term);
    }
    Ok(out)
}

/// Matrix of `word(z, z*)` on the window.
///
/// `Exact` evaluates on a window enlarged by the word degree and restricts,
/// which reproduces the infinite operator on the window; `Compressed`
/// multiplies the truncated `z_N`, `z_N*`.
pub fn word_matrix(word: &OperatorWord, index: &BasisIndex, mode: Mode) -> Result<SparseMatrix> {
    word.guard()?;
    let big = match mode {
        Mode::Exact => BasisIndex::new(index.params, index.n() + word.degree())?,
        Mode::Compressed => index.clone(),
    };
    let z = operators::z_sparse(&big);
    let zs = z.adjoint();
    let d = big.dim();
    let eye = SparseMatrix::from_triplets(d, d, (0..d).map(|i| (i, i, c64(1.0))).collect());
    let mut trips = Vec::new();
    for (c, letters) in &word.terms {
        let m = letters.iter().fold(eye.clone(), |acc, l| {
            acc.mul_sparse(match l {
                Letter::Z => &z,
                Letter::ZStar => &zs,
            })
        });
        trips.extend(m.iter().map(|(r, col, v)| (r, col, v * c)));
    }
    let m = SparseMatrix::from_triplets(d, d, trips);
    Ok(match mode {
        Mode::Exact => super::restrict(&big, index, &m),
        Mode::Compressed => m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotient::max_deviation;

    #[test]
    fn parse_words() {
        let w: OperatorWord = "z*z - zz*".parse().unwrap();
        assert_eq!(w.terms.len(), 2);
        assert_eq!(w.terms[0].1, vec![Letter::ZStar, Letter::Z]);
        assert_eq!(w.terms[1].0, c64(-1.0));
        let w: OperatorWord = "2 z z* + 0.5".parse().unwrap();
        assert_eq!(w.terms[1], (c64(0.5), Vec::new()));
        let w: OperatorWord = "I - 3*zz".parse().unwrap();
        assert_eq!(w.terms[1], (c64(-3.0), vec![Letter::Z, Letter::Z]));
        assert!("z + q".parse::<OperatorWord>().is_err());
        assert!("".parse::<OperatorWord>().is_err());
        assert!("z +".parse::<OperatorWord>().is_err());
    }

    #[test]
    fn symbol_of_z_and_commutator() {
        let p = DomainParams::default_pants();
        let s = symbol_of(&OperatorWord::z(), &p).unwrap();
        assert_eq!(s.phi2.coeff(1), c64(0.2));
        assert_eq!(s.phi3.coeff(0), c64(0.5));
        let comm: OperatorWord = "z*z - zz*".parse().unwrap();
        assert!(symbol_of(&comm, &p).unwrap().max_deviation(&SymbolTriple::default()) < 1e-15);
    }

    #[test]
    fn degree_guard() {
        let w = OperatorWord::letters(&[Letter::Z; 21]);
        assert!(matches!(symbol_of(&w, &DomainParams::default_pants()), Err(Error::DegreeGuard { .. })));
    }

    #[test]
    fn exact_word_matches_exact_products() {
        let p = DomainParams::default_pants();
        let idx = BasisIndex::new(p, 15).unwrap();
        let zzs: OperatorWord = "zz*".parse().unwrap();
        let got = word_matrix(&zzs, &idx, Mode::Exact).unwrap();
        assert!(max_deviation(&got, &operators::zzstar_exact_sparse(&idx)) < 1e-15);
        let comm: OperatorWord = "z*z - zz*".parse().unwrap();
        let got = word_matrix(&comm, &idx, Mode::Exact).unwrap();
        assert!(max_deviation(&got, &operators::commutator_exact_sparse(&idx)) < 1e-15);
    }
}
