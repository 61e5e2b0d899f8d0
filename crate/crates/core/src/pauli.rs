//! Pauli-string algebra.
//!
//! A [`PauliString`] is a tensor product of single-qubit operators from
//! `{I, X, Y, Z}`. Index 0 is the leftmost Kronecker factor, which is also the
//! most significant bit of a computational-basis index everywhere in this
//! crate. A [`PauliSum`] is a weighted sum of strings plus a real constant
//! offset; it is the representation used for every Hamiltonian and
//! observable.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use indexmap::IndexMap;
use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::limits;

/// Coefficients with magnitude below this are dropped when a sum is
/// canonicalized.
pub const DROP_TOLERANCE: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I_UNIT: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_char(c: char) -> Option<Pauli> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// Single-qubit product `self · other` as `(phase, result)`.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Pauli) -> (Complex64, Pauli) {
        use Pauli::*;
        match (self, other) {
            (I, p) | (p, I) => (ONE, p),
            (a, b) if a == b => (ONE, I),
            (X, Y) => (I_UNIT, Z),
            (Y, Z) => (I_UNIT, X),
            (Z, X) => (I_UNIT, Y),
            (Y, X) => (-I_UNIT, Z),
            (Z, Y) => (-I_UNIT, X),
            (X, Z) => (-I_UNIT, Y),
            _ => unreachable!(),
        }
    }

    pub fn matrix(self) -> Matrix2<Complex64> {
        match self {
            Pauli::I => Matrix2::new(ONE, ZERO, ZERO, ONE),
            Pauli::X => Matrix2::new(ZERO, ONE, ONE, ZERO),
            Pauli::Y => Matrix2::new(ZERO, -I_UNIT, I_UNIT, ZERO),
            Pauli::Z => Matrix2::new(ONE, ZERO, ZERO, -ONE),
        }
    }
}

/// Tensor product of single-qubit Paulis over `n ≥ 1` qubits.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString(Vec<Pauli>);

impl PauliString {
    pub fn new(ops: Vec<Pauli>) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::invalid("pauli string", "must act on at least one qubit"));
        }
        Ok(PauliString(ops))
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "pauli string needs at least one qubit");
        PauliString(vec![Pauli::I; n])
    }

    /// `op` on qubit `q`, identity elsewhere.
    pub fn single(n: usize, q: usize, op: Pauli) -> Self {
        let mut s = Self::identity(n);
        s.0[q] = op;
        s
    }

    /// Builds a string from `(qubit, op)` pairs; unlisted qubits are identity.
    pub fn from_sparse(n: usize, factors: &[(usize, Pauli)]) -> Self {
        let mut s = Self::identity(n);
        for &(q, p) in factors {
            s.0[q] = p;
        }
        s
    }

    pub fn num_qubits(&self) -> usize {
        self.0.len()
    }

    pub fn ops(&self) -> &[Pauli] {
        &self.0
    }

    /// Non-identity factors as `(qubit, op)`.
    pub fn support(&self) -> impl Iterator<Item = (usize, Pauli)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, p)| **p != Pauli::I)
            .map(|(q, p)| (q, *p))
    }

    pub fn weight(&self) -> usize {
        self.support().count()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|p| *p == Pauli::I)
    }

    /// True when only `I` and `Z` factors occur.
    pub fn is_diagonal(&self) -> bool {
        self.0.iter().all(|p| matches!(p, Pauli::I | Pauli::Z))
    }

    /// Bit masks over basis-state indices: `(flip, phase, y_count)`.
    ///
    /// `P|x⟩ = i^{y_count} · (−1)^{popcount(x & phase)} |x ⊕ flip⟩`.
    pub fn masks(&self) -> (usize, usize, u32) {
        let n = self.0.len();
        let mut flip = 0usize;
        let mut phase = 0usize;
        let mut ys = 0u32;
        for (q, p) in self.0.iter().enumerate() {
            let bit = 1usize << (n - 1 - q);
            match p {
                Pauli::I => {}
                Pauli::X => flip |= bit,
                Pauli::Y => {
                    flip |= bit;
                    phase |= bit;
                    ys += 1;
                }
                Pauli::Z => phase |= bit,
            }
        }
        (flip, phase, ys)
    }

    /// On every qubit the two factors are equal or at least one is `I`.
    pub fn qubitwise_commutes(&self, other: &PauliString) -> bool {
        self.0
            .iter()
            .zip(&other.0)
            .all(|(a, b)| *a == Pauli::I || *b == Pauli::I || a == b)
    }

    /// Full commutation: the number of anticommuting positions is even.
    pub fn commutes(&self, other: &PauliString) -> bool {
        let anti = self
            .0
            .iter()
            .zip(&other.0)
            .filter(|(a, b)| **a != Pauli::I && **b != Pauli::I && a != b)
            .count();
        anti % 2 == 0
    }

    /// Product `self · other` as `(phase, string)`.
    pub fn mul(&self, other: &PauliString) -> Result<(Complex64, PauliString)> {
        if self.0.len() != other.0.len() {
            return Err(Error::QubitMismatch {
                expected: self.0.len(),
                found: other.0.len(),
            });
        }
        let mut phase = ONE;
        let ops = self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| {
                let (ph, p) = a.mul(*b);
                phase *= ph;
                p
            })
            .collect();
        Ok((phase, PauliString(ops)))
    }

    /// Dense `2^n × 2^n` matrix as a Kronecker product of factor matrices.
    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::from_element(1, 1, ONE);
        for p in &self.0 {
            let f = p.matrix();
            m = m.kronecker(&f);
        }
        m
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            write!(f, "{}", p.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let ops = s
            .chars()
            .map(|c| {
                Pauli::from_char(c).ok_or_else(|| Error::invalid("pauli string", format!("illegal character {c:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        PauliString::new(ops)
    }
}

/// A Pauli string with a complex coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    pub coeff: Complex64,
    pub string: PauliString,
}

impl PauliTerm {
    pub fn new(coeff: Complex64, string: PauliString) -> Result<Self> {
        if !coeff.re.is_finite() || !coeff.im.is_finite() {
            return Err(Error::invalid("coefficient", format!("{coeff} is not finite")));
        }
        Ok(PauliTerm { coeff, string })
    }

    pub fn real(coeff: f64, string: PauliString) -> Result<Self> {
        Self::new(Complex64::new(coeff, 0.0), string)
    }

    pub fn num_qubits(&self) -> usize {
        self.string.num_qubits()
    }

    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        self.string.to_matrix() * self.coeff
    }
}

impl fmt::Display for PauliTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeff.im == 0.0 {
            write!(f, "{} {}", self.coeff.re, self.string)
        } else {
            write!(f, "({},{}) {}", self.coeff.re, self.coeff.im, self.string)
        }
    }
}

/// Parses `<coeff> <string>` where the string has exactly `n` factors.
pub fn parse_pauli(text: &str, n: usize) -> Result<PauliTerm> {
    let mut parts = text.split_whitespace();
    let (Some(coeff), Some(ops), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(Error::invalid(
            "pauli term",
            format!("expected `<coeff> <IXYZ string>`, got {text:?}"),
        ));
    };
    let coeff: f64 = coeff
        .parse()
        .map_err(|_| Error::invalid("coefficient", format!("malformed number {coeff:?}")))?;
    let string: PauliString = ops.parse()?;
    if string.num_qubits() != n {
        return Err(Error::invalid(
            "pauli string",
            format!(
                "{ops:?} has length {} but {n} qubits were declared",
                string.num_qubits()
            ),
        ));
    }
    PauliTerm::real(coeff, string)
}

/// Product of two terms with the phase folded into the coefficient.
pub fn multiply(a: &PauliTerm, b: &PauliTerm) -> Result<PauliTerm> {
    let (phase, string) = a.string.mul(&b.string)?;
    PauliTerm::new(a.coeff * b.coeff * phase, string)
}

/// Weighted sum of Pauli strings on a fixed register plus a real offset.
///
/// Always held in canonical form: each string appears once, in order of first
/// insertion, and terms with `|coeff| < DROP_TOLERANCE` are removed.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n: usize,
    terms: Vec<PauliTerm>,
    offset: f64,
}

impl PauliSum {
    pub fn zero(n: usize) -> Self {
        assert!(n >= 1, "pauli sum needs at least one qubit");
        PauliSum {
            n,
            terms: Vec::new(),
            offset: 0.0,
        }
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = PauliTerm>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("qubit count", "must be at least 1"));
        }
        let mut acc: IndexMap<PauliString, Complex64> = IndexMap::new();
        for t in terms {
            if t.num_qubits() != n {
                return Err(Error::QubitMismatch {
                    expected: n,
                    found: t.num_qubits(),
                });
            }
            *acc.entry(t.string).or_insert(ZERO) += t.coeff;
        }
        Ok(Self::from_map(n, acc, 0.0))
    }

    fn from_map(n: usize, acc: IndexMap<PauliString, Complex64>, offset: f64) -> Self {
        let terms = acc
            .into_iter()
            .filter(|(_, c)| c.norm() >= DROP_TOLERANCE)
            .map(|(string, coeff)| PauliTerm { coeff, string })
            .collect();
        PauliSum { n, terms, offset }
    }

    pub fn with_offset(mut self, offset: f64) -> Self {
        self.offset = offset;
        self
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest imaginary part among the coefficients.
    pub fn max_imag(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.im.abs()).fold(0.0, f64::max)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.max_imag() <= tol
    }

    /// Errors unless every coefficient is real within `tol`, then zeroes the
    /// imaginary residue. Observables must pass this.
    pub fn into_real(mut self, tol: f64) -> Result<Self> {
        let im = self.max_imag();
        if im > tol {
            return Err(Error::invalid(
                "hamiltonian",
                format!("coefficient with imaginary part {im:e} is not allowed in an observable"),
            ));
        }
        for t in &mut self.terms {
            t.coeff.im = 0.0;
        }
        Ok(self)
    }

    pub fn is_diagonal(&self) -> bool {
        self.terms.iter().all(|t| t.string.is_diagonal())
    }

    fn check_same(&self, other: &PauliSum) -> Result<()> {
        if self.n != other.n {
            return Err(Error::QubitMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    fn to_map(&self) -> IndexMap<PauliString, Complex64> {
        self.terms.iter().map(|t| (t.string.clone(), t.coeff)).collect()
    }

    pub fn add(&self, other: &PauliSum) -> Result<PauliSum> {
        self.check_same(other)?;
        let mut acc = self.to_map();
        for t in &other.terms {
            *acc.entry(t.string.clone()).or_insert(ZERO) += t.coeff;
        }
        Ok(Self::from_map(self.n, acc, self.offset + other.offset))
    }

    /// Scales every coefficient; the offset must stay real so `c` is real.
    pub fn scale(&self, c: f64) -> PauliSum {
        let acc = self.terms.iter().map(|t| (t.string.clone(), t.coeff * c)).collect();
        Self::from_map(self.n, acc, self.offset * c)
    }

    /// Operator product of two sums; offsets are treated as identity terms.
    pub fn mul(&self, other: &PauliSum) -> Result<PauliSum> {
        self.check_same(other)?;
        let id = PauliString::identity(self.n);
        let lhs = self.with_offset_as_term(&id);
        let rhs = other.with_offset_as_term(&id);
        let mut acc: IndexMap<PauliString, Complex64> = IndexMap::new();
        for a in &lhs {
            for b in &rhs {
                let (phase, s) = a.string.mul(&b.string)?;
                *acc.entry(s).or_insert(ZERO) += a.coeff * b.coeff * phase;
            }
        }
        Ok(Self::from_map(self.n, acc, 0.0))
    }

    fn with_offset_as_term(&self, id: &PauliString) -> Vec<PauliTerm> {
        let mut v = self.terms.clone();
        if self.offset != 0.0 {
            v.push(PauliTerm {
                coeff: Complex64::new(self.offset, 0.0),
                string: id.clone(),
            });
        }
        v
    }

    pub fn adjoint(&self) -> PauliSum {
        PauliSum {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|t| PauliTerm {
                    coeff: t.coeff.conj(),
                    string: t.string.clone(),
                })
                .collect(),
            offset: self.offset,
        }
    }

    /// Dense matrix `Σ coeff·(⊗ factors) + offset·𝟙`.
    pub fn to_matrix(&self) -> Result<DMatrix<Complex64>> {
        limits::check(
            "qubit count",
            self.n,
            limits::oracle_limit(limits::PAULI_ORACLE_DEFAULT),
        )?;
        let dim = 1usize << self.n;
        let mut m = DMatrix::<Complex64>::identity(dim, dim) * Complex64::new(self.offset, 0.0);
        for t in &self.terms {
            m += t.to_matrix();
        }
        Ok(m)
    }

    /// Greedy first-fit partition into qubit-wise commuting groups, in term
    /// order.
    pub fn group_commuting(&self) -> Vec<MeasurementGroup> {
        let mut groups: Vec<MeasurementGroup> = Vec::new();
        for t in &self.terms {
            match groups.iter_mut().find(|g| g.accepts(&t.string)) {
                Some(g) => g.push(t.clone()),
                None => {
                    let mut g = MeasurementGroup {
                        basis: vec![Pauli::I; self.n],
                        terms: Vec::new(),
                    };
                    g.push(t.clone());
                    groups.push(g);
                }
            }
        }
        groups
    }
}

impl fmt::Display for PauliSum {
    /// Renders in the Hamiltonian file format; the offset becomes an identity
    /// line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.terms {
            writeln!(f, "{t}")?;
        }
        if self.offset != 0.0 {
            writeln!(f, "{} {}", self.offset, PauliString::identity(self.n))?;
        }
        Ok(())
    }
}

/// Terms that can be measured together after one set of single-qubit basis
/// rotations.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementGroup {
    basis: Vec<Pauli>,
    terms: Vec<PauliTerm>,
}

impl MeasurementGroup {
    fn accepts(&self, s: &PauliString) -> bool {
        self.basis
            .iter()
            .zip(s.ops())
            .all(|(b, p)| *b == Pauli::I || *p == Pauli::I || b == p)
    }

    fn push(&mut self, t: PauliTerm) {
        for (q, p) in t.string.support() {
            self.basis[q] = p;
        }
        self.terms.push(t);
    }

    /// Measurement axis per qubit; `I` where no term acts.
    pub fn basis(&self) -> &[Pauli] {
        &self.basis
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }
}

/// Parses a Hamiltonian file: one `<real coeff> <IXYZ string>` per line,
/// `#` comment lines and blank lines ignored, all strings of equal length.
pub fn parse_hamiltonian(text: &str) -> Result<PauliSum> {
    let mut n = None;
    let mut terms = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let width = line.split_whitespace().nth(1).map(str::len).unwrap_or(0);
        let expected = *n.get_or_insert(width);
        let term = parse_pauli(line, expected).map_err(|e| Error::syntax(idx + 1, e.to_string()))?;
        terms.push(term);
    }
    let Some(n) = n else {
        return Err(Error::syntax(0, "hamiltonian contains no terms"));
    };
    PauliSum::from_terms(n, terms)
}

pub fn load_hamiltonian(path: impl AsRef<Path>) -> Result<PauliSum> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_hamiltonian(&text)
}
