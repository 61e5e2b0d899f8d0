//! Second-quantized operators and the Jordan-Wigner mapping.
//!
//! Mode `i` is identified with qubit `i`, and occupation `f_i = 1` with the
//! qubit state `|1⟩`. Creation maps to `σ⁻ = (X − iY)/2 = |1⟩⟨0|` and
//! annihilation to `σ⁺ = (X + iY)/2 = |0⟩⟨1|`.

use std::fmt;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::limits;
use crate::pauli::{Pauli, PauliString, PauliSum, PauliTerm};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ladder {
    Create,
    Annihilate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LadderOp {
    pub mode: usize,
    pub kind: Ladder,
}

impl LadderOp {
    pub fn create(mode: usize) -> Self {
        LadderOp {
            mode,
            kind: Ladder::Create,
        }
    }

    pub fn annihilate(mode: usize) -> Self {
        LadderOp {
            mode,
            kind: Ladder::Annihilate,
        }
    }

    pub fn adjoint(self) -> Self {
        let kind = match self.kind {
            Ladder::Create => Ladder::Annihilate,
            Ladder::Annihilate => Ladder::Create,
        };
        LadderOp { mode: self.mode, kind }
    }
}

impl fmt::Display for LadderOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            Ladder::Create => write!(f, "a+{}", self.mode),
            Ladder::Annihilate => write!(f, "a{}", self.mode),
        }
    }
}

/// One weighted product of ladder operators; the leftmost factor acts last.
pub type Product = (Complex64, Vec<LadderOp>);

/// Sum of products of creation/annihilation operators on `n_modes` modes.
#[derive(Debug, Clone, PartialEq)]
pub struct FermionOperator {
    n_modes: usize,
    products: Vec<Product>,
}

impl FermionOperator {
    pub fn zero(n_modes: usize) -> Self {
        FermionOperator {
            n_modes,
            products: Vec::new(),
        }
    }

    pub fn from_products(n_modes: usize, products: impl IntoIterator<Item = Product>) -> Result<Self> {
        let mut op = Self::zero(n_modes);
        for (c, ops) in products {
            op.push(c, ops)?;
        }
        Ok(op)
    }

    /// A single ladder operator with unit coefficient.
    pub fn ladder(n_modes: usize, op: LadderOp) -> Result<Self> {
        Self::from_products(n_modes, [(ONE, vec![op])])
    }

    pub fn push(&mut self, coeff: Complex64, ops: Vec<LadderOp>) -> Result<()> {
        if let Some(bad) = ops.iter().find(|o| o.mode >= self.n_modes) {
            return Err(Error::invalid(
                "fermion operator",
                format!("mode {} out of range for {} modes", bad.mode, self.n_modes),
            ));
        }
        if !coeff.re.is_finite() || !coeff.im.is_finite() {
            return Err(Error::invalid("coefficient", format!("{coeff} is not finite")));
        }
        self.products.push((coeff, ops));
        Ok(())
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn products(&self) -> &[Product] {
        &self.products
    }

    fn check_same(&self, other: &FermionOperator) -> Result<()> {
        if self.n_modes != other.n_modes {
            return Err(Error::QubitMismatch {
                expected: self.n_modes,
                found: other.n_modes,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &FermionOperator) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        out.products.extend(other.products.iter().cloned());
        Ok(out)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        FermionOperator {
            n_modes: self.n_modes,
            products: self.products.iter().map(|(k, ops)| (k * c, ops.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &FermionOperator) -> Result<Self> {
        self.check_same(other)?;
        let mut out = Self::zero(self.n_modes);
        for (ca, a) in &self.products {
            for (cb, b) in &other.products {
                let mut ops = a.clone();
                ops.extend_from_slice(b);
                out.products.push((ca * cb, ops));
            }
        }
        Ok(out)
    }

    /// `{A, B} = AB + BA`.
    pub fn anticommutator(&self, other: &FermionOperator) -> Result<Self> {
        self.mul(other)?.add(&other.mul(self)?)
    }

    pub fn adjoint(&self) -> Self {
        FermionOperator {
            n_modes: self.n_modes,
            products: self
                .products
                .iter()
                .map(|(c, ops)| (c.conj(), ops.iter().rev().map(|o| o.adjoint()).collect()))
                .collect(),
        }
    }
}

impl fmt::Display for FermionOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (c, ops) in &self.products {
            write!(f, "({}, {})", c.re, c.im)?;
            for o in ops {
                write!(f, " {o}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// One- and two-body integrals `t_ij`, `u_ijkl` in Hartree.
#[derive(Debug, Clone, PartialEq)]
pub struct MolecularCoefficients {
    n_modes: usize,
    t: DMatrix<f64>,
    u: Vec<f64>,
}

impl MolecularCoefficients {
    pub fn zeros(n_modes: usize) -> Self {
        MolecularCoefficients {
            n_modes,
            t: DMatrix::zeros(n_modes, n_modes),
            u: vec![0.0; n_modes.pow(4)],
        }
    }

    /// `u` is flattened in `(i, j, k, l)` row-major order.
    pub fn new(n_modes: usize, t: DMatrix<f64>, u: Vec<f64>) -> Result<Self> {
        if t.shape() != (n_modes, n_modes) {
            return Err(Error::invalid(
                "one-body tensor",
                format!("shape {:?} does not match {n_modes} modes", t.shape()),
            ));
        }
        if u.len() != n_modes.pow(4) {
            return Err(Error::invalid(
                "two-body tensor",
                format!("length {} does not match {n_modes}^4", u.len()),
            ));
        }
        let c = MolecularCoefficients { n_modes, t, u };
        c.check_symmetric()?;
        Ok(c)
    }

    fn check_symmetric(&self) -> Result<()> {
        for i in 0..self.n_modes {
            for j in 0..i {
                if (self.t[(i, j)] - self.t[(j, i)]).abs() > 1e-10 {
                    return Err(Error::invalid("one-body tensor", format!("t[{i}][{j}] != t[{j}][{i}]")));
                }
            }
        }
        Ok(())
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn t(&self, i: usize, j: usize) -> f64 {
        self.t[(i, j)]
    }

    pub fn u(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.u[self.u_index(i, j, k, l)]
    }

    fn u_index(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        let n = self.n_modes;
        ((i * n + j) * n + k) * n + l
    }

    pub fn set_t(&mut self, i: usize, j: usize, v: f64) {
        self.t[(i, j)] = v;
    }

    pub fn set_u(&mut self, i: usize, j: usize, k: usize, l: usize, v: f64) {
        let idx = self.u_index(i, j, k, l);
        self.u[idx] = v;
    }

    /// Parses `modes <n>` followed by `t i j v` and `u i j k l v` lines.
    /// Unlisted entries are zero; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut coeffs: Option<MolecularCoefficients> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let num = |s: &str| -> Result<usize> {
                s.parse()
                    .map_err(|_| Error::syntax(line_no, format!("bad index {s:?}")))
            };
            let val = |s: &str| -> Result<f64> {
                s.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::syntax(line_no, format!("bad value {s:?}")))
            };
            match (fields[0], coeffs.as_mut()) {
                ("modes", None) if fields.len() == 2 => {
                    let n = num(fields[1])?;
                    if n == 0 {
                        return Err(Error::syntax(line_no, "mode count must be positive"));
                    }
                    coeffs = Some(MolecularCoefficients::zeros(n));
                }
                ("modes", _) => return Err(Error::syntax(line_no, "misplaced `modes` header")),
                (_, None) => return Err(Error::syntax(line_no, "expected `modes <n>` header first")),
                ("t", Some(c)) if fields.len() == 4 => {
                    let (i, j) = (num(fields[1])?, num(fields[2])?);
                    if i.max(j) >= c.n_modes {
                        return Err(Error::syntax(line_no, "mode index out of range"));
                    }
                    c.set_t(i, j, val(fields[3])?);
                }
                ("u", Some(c)) if fields.len() == 6 => {
                    let idx: Vec<usize> = fields[1..5].iter().map(|s| num(s)).collect::<Result<_>>()?;
                    if idx.iter().any(|&m| m >= c.n_modes) {
                        return Err(Error::syntax(line_no, "mode index out of range"));
                    }
                    c.set_u(idx[0], idx[1], idx[2], idx[3], val(fields[5])?);
                }
                _ => return Err(Error::syntax(line_no, format!("unrecognized line {line:?}"))),
            }
        }
        let c = coeffs.ok_or_else(|| Error::syntax(0, "missing `modes <n>` header"))?;
        c.check_symmetric().map_err(|e| Error::syntax(0, e.to_string()))?;
        Ok(c)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }
}

/// `Σ t_ij a†_i a_j + Σ u_ijkl a†_i a†_k a_l a_j`, skipping zero entries.
pub fn build_molecular_hamiltonian(coeffs: &MolecularCoefficients) -> FermionOperator {
    let n = coeffs.n_modes();
    let mut op = FermionOperator::zero(n);
    for i in 0..n {
        for j in 0..n {
            let t = coeffs.t(i, j);
            if t != 0.0 {
                op.products.push((
                    Complex64::new(t, 0.0),
                    vec![LadderOp::create(i), LadderOp::annihilate(j)],
                ));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let u = coeffs.u(i, j, k, l);
                    if u != 0.0 {
                        op.products.push((
                            Complex64::new(u, 0.0),
                            vec![
                                LadderOp::create(i),
                                LadderOp::create(k),
                                LadderOp::annihilate(l),
                                LadderOp::annihilate(j),
                            ],
                        ));
                    }
                }
            }
        }
    }
    op
}

/// Dense matrix on the occupation-number basis.
///
/// Each ladder operator acts on `|f_0 … f_{n−1}⟩` with the parity sign
/// `(−1)^{Σ_{k<i} f_k}`. Basis index bit `n−1−i` holds `f_i`.
pub fn fermion_matrix(op: &FermionOperator) -> Result<DMatrix<Complex64>> {
    let n = op.n_modes();
    limits::check("mode count", n, limits::oracle_limit(limits::FERMION_ORACLE_DEFAULT))?;
    let dim = 1usize << n;
    let mut m = DMatrix::zeros(dim, dim);
    for (coeff, ops) in op.products() {
        for col in 0..dim {
            let mut state = col;
            let mut sign = 1.0;
            let mut alive = true;
            for o in ops.iter().rev() {
                let bit = 1usize << (n - 1 - o.mode);
                let occupied = state & bit != 0;
                let wanted = matches!(o.kind, Ladder::Annihilate);
                if occupied != wanted {
                    alive = false;
                    break;
                }
                let below = (state >> (n - o.mode)).count_ones();
                if below % 2 == 1 {
                    sign = -sign;
                }
                state ^= bit;
            }
            if alive {
                m[(state, col)] += coeff * sign;
            }
        }
    }
    Ok(m)
}

/// Which modes carry the `σᶻ` parity string of a mapped ladder operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParityString {
    /// `Z` on modes `k < i`; reproduces the occupation-basis sign rule of
    /// [`fermion_matrix`] for every operator.
    #[default]
    Below,
    /// `Z` on modes `k > i` (identities before the site, `Z` after). Agrees
    /// with `Below` on particle-number-conserving operators only.
    Above,
}

fn ladder_pauli(n: usize, op: LadderOp, orientation: ParityString) -> PauliSum {
    let parity: Vec<usize> = match orientation {
        ParityString::Below => (0..op.mode).collect(),
        ParityString::Above => (op.mode + 1..n).collect(),
    };
    let mut factors: Vec<(usize, Pauli)> = parity.into_iter().map(|q| (q, Pauli::Z)).collect();
    let y_sign = match op.kind {
        Ladder::Create => -0.5,
        Ladder::Annihilate => 0.5,
    };
    factors.push((op.mode, Pauli::X));
    let x = PauliString::from_sparse(n, &factors);
    factors.pop();
    factors.push((op.mode, Pauli::Y));
    let y = PauliString::from_sparse(n, &factors);
    PauliSum::from_terms(
        n,
        [
            PauliTerm {
                coeff: Complex64::new(0.5, 0.0),
                string: x,
            },
            PauliTerm {
                coeff: Complex64::new(0.0, y_sign),
                string: y,
            },
        ],
    )
    .expect("strings built on n qubits")
}

/// Jordan-Wigner mapping with the parity string on lower modes.
pub fn jordan_wigner(op: &FermionOperator) -> PauliSum {
    jordan_wigner_with(op, ParityString::default())
}

pub fn jordan_wigner_with(op: &FermionOperator, orientation: ParityString) -> PauliSum {
    let n = op.n_modes();
    let identity = PauliString::identity(n);
    let mut total = PauliSum::zero(n);
    for (coeff, ops) in op.products() {
        let mut acc = PauliSum::from_terms(
            n,
            [PauliTerm {
                coeff: *coeff,
                string: identity.clone(),
            }],
        )
        .expect("identity on n qubits");
        for o in ops {
            acc = acc.mul(&ladder_pauli(n, *o, orientation)).expect("same register");
            if acc.is_empty() {
                break;
            }
        }
        total = total.add(&acc).expect("same register");
    }
    total
}

pub const H2_COEFFICIENTS: [f64; 5] = [-1.0524, 0.01128, 0.3979, 0.3979, 0.1809];

/// Two-qubit reduced H₂ Hamiltonian at 0.74 Å, in Hartree:
/// `f0·II + f1·ZZ + f2·ZI + f3·IZ + f4·XX`.
pub fn h2_hamiltonian() -> PauliSum {
    let [f0, f1, f2, f3, f4] = H2_COEFFICIENTS;
    let terms = [(f0, "II"), (f1, "ZZ"), (f2, "ZI"), (f3, "IZ"), (f4, "XX")]
        .into_iter()
        .map(|(c, s)| PauliTerm::real(c, s.parse().expect("valid literal")).expect("finite"));
    PauliSum::from_terms(2, terms).expect("two-qubit terms")
}

/// `Σ_i a†_i a_i` mapped to qubits, `Σ_i (1 − Z_i)/2`.
pub fn number_operator(n_modes: usize) -> PauliSum {
    let products = (0..n_modes).map(|i| (ONE, vec![LadderOp::create(i), LadderOp::annihilate(i)]));
    jordan_wigner(&FermionOperator::from_products(n_modes, products).expect("modes in range"))
        .into_real(1e-12)
        .expect("number operator is Hermitian")
}

/// Whether the dense matrix of `op` equals its adjoint within `tol`.
pub fn is_hermitian(op: &FermionOperator, tol: f64) -> Result<bool> {
    let m = fermion_matrix(op)?;
    Ok((&m - m.adjoint()).iter().all(|d| d.norm() <= tol))
}
