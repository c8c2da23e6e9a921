//! Truncated spin-boson product basis |n, m⟩ and the elementary operators on it.
//!
//! States are ordered n-major: flat index = n·(2j+1) + m, with n ∈ 0..=N the
//! boson occupation and m ∈ 0..=2j labelling the Jz eigenvalue m − j.
//! The boson space is truncated hard at N, so a† annihilates |N⟩ and
//! [a, a†] deviates from the identity only on the top level.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, SparseMatrix, C64};

/// Collective spin j, stored as the integer 2j.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Spin(u32);

impl Spin {
    pub const ZERO: Spin = Spin(0);
    pub const HALF: Spin = Spin(1);

    pub const fn from_twice(twice_j: u32) -> Self {
        Spin(twice_j)
    }

    /// Accepts non-negative half-integers only.
    pub fn new(j: f64) -> Result<Self> {
        let twice = 2.0 * j;
        if !twice.is_finite() || twice < 0.0 || twice.fract() != 0.0 || twice > u32::MAX as f64 {
            return Err(Error::InvalidBasis(format!(
                "spin j = {j} is not a non-negative half-integer"
            )));
        }
        Ok(Spin(twice as u32))
    }

    pub fn twice(self) -> u32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// 2j + 1
    pub fn multiplicity(self) -> usize {
        self.0 as usize + 1
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(2) {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl std::str::FromStr for Spin {
    type Err = Error;

    /// Parses "3", "1.5" or "3/2".
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidBasis(format!("cannot parse spin '{s}'"));
        if let Some((num, den)) = s.split_once('/') {
            let num: u32 = num.trim().parse().map_err(|_| bad())?;
            match den.trim() {
                "2" => Ok(Spin(num)),
                "1" => Ok(Spin(2 * num)),
                _ => Err(bad()),
            }
        } else {
            Spin::new(s.parse::<f64>().map_err(|_| bad())?)
        }
    }
}

impl Serialize for Spin {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.value())
    }
}

impl<'de> Deserialize<'de> for Spin {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = f64::deserialize(d)?;
        Spin::new(j).map_err(serde::de::Error::custom)
    }
}

/// Action of a boson monomial on |n⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BosonAction {
    Identity,
    /// a†a
    Number,
    /// a
    Lower,
    /// a†
    Raise,
    /// a²
    LowerTwice,
    /// a†²
    RaiseTwice,
}

/// Action of a spin generator on |m − j⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinAction {
    Identity,
    Z,
    /// J₊
    Raise,
    /// J₋
    Lower,
}

/// a|n⟩ = √n|n−1⟩ and a†|n⟩ = √(n+1)|n+1⟩, truncated at `cutoff`.
pub fn boson_element(action: BosonAction, n: usize, cutoff: usize) -> Option<(usize, f64)> {
    let raise = |n: usize| (n < cutoff).then(|| (n + 1, ((n + 1) as f64).sqrt()));
    let lower = |n: usize| (n > 0).then(|| (n - 1, (n as f64).sqrt()));
    match action {
        BosonAction::Identity => Some((n, 1.0)),
        BosonAction::Number => Some((n, n as f64)),
        BosonAction::Lower => lower(n),
        BosonAction::Raise => raise(n),
        BosonAction::LowerTwice => {
            lower(n).and_then(|(n1, a1)| lower(n1).map(|(n2, a2)| (n2, a1 * a2)))
        }
        BosonAction::RaiseTwice => {
            raise(n).and_then(|(n1, a1)| raise(n1).map(|(n2, a2)| (n2, a1 * a2)))
        }
    }
}

/// J₊|m − j⟩ = √((2j − m)(m + 1))|m + 1 − j⟩ and its adjoint; Jz gives m − j.
pub fn spin_element(action: SpinAction, m: usize, spin: Spin) -> Option<(usize, f64)> {
    let two_j = spin.twice() as usize;
    match action {
        SpinAction::Identity => Some((m, 1.0)),
        SpinAction::Z => Some((m, m as f64 - spin.value())),
        SpinAction::Raise => (m < two_j).then(|| (m + 1, (((two_j - m) * (m + 1)) as f64).sqrt())),
        SpinAction::Lower => (m > 0).then(|| (m - 1, ((m * (two_j - m + 1)) as f64).sqrt())),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpinBosonBasis {
    spin: Spin,
    cutoff: usize,
}

impl SpinBosonBasis {
    pub fn new(spin: Spin, cutoff: usize) -> Self {
        SpinBosonBasis { spin, cutoff }
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn j(&self) -> f64 {
        self.spin.value()
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// (N + 1)(2j + 1)
    pub fn dim(&self) -> usize {
        (self.cutoff + 1) * self.spin.multiplicity()
    }

    pub fn index(&self, n: usize, m: usize) -> usize {
        debug_assert!(n <= self.cutoff && m < self.spin.multiplicity());
        n * self.spin.multiplicity() + m
    }

    pub fn state(&self, index: usize) -> (usize, usize) {
        let mult = self.spin.multiplicity();
        (index / mult, index % mult)
    }

    /// Iterates (flat index, n, m) in basis order.
    pub fn states(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        (0..self.dim()).map(move |i| {
            let (n, m) = self.state(i);
            (i, n, m)
        })
    }

    /// Eigenvalue n + m of N̂ = a†a + Jz + j.
    pub fn excitation(&self, index: usize) -> usize {
        let (n, m) = self.state(index);
        n + m
    }

    /// Indices of the even (`true`) or odd parity sector, in basis order.
    pub fn parity_sector(&self, even: bool) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| (self.excitation(i).is_multiple_of(2)) == even)
            .collect()
    }

    fn single(&self, boson: BosonAction, spin: SpinAction) -> ComplexMatrix {
        let mut term = OperatorSum::new();
        term.push(C64::new(1.0, 0.0), boson, spin);
        term.sparse(self).to_dense().detect_symmetry()
    }

    /// (a, a†)
    pub fn boson_ops(&self) -> (ComplexMatrix, ComplexMatrix) {
        (
            self.single(BosonAction::Lower, SpinAction::Identity),
            self.single(BosonAction::Raise, SpinAction::Identity),
        )
    }

    /// (J₊, J₋, Jz)
    pub fn spin_ops(&self) -> (ComplexMatrix, ComplexMatrix, ComplexMatrix) {
        (
            self.single(BosonAction::Identity, SpinAction::Raise),
            self.single(BosonAction::Identity, SpinAction::Lower),
            self.single(BosonAction::Identity, SpinAction::Z),
        )
    }

    pub fn number_op(&self) -> ComplexMatrix {
        self.single(BosonAction::Number, SpinAction::Identity)
    }

    /// Π = exp(iπN̂): diagonal with entries (−1)^(n+m).
    pub fn parity(&self) -> ComplexMatrix {
        ComplexMatrix::from_real_diagonal(&self.parity_diagonal())
    }

    pub fn parity_diagonal(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|i| {
                if self.excitation(i).is_multiple_of(2) {
                    1.0
                } else {
                    -1.0
                }
            })
            .collect()
    }

    /// Diagonal of Jz (entries m − j).
    pub fn jz_diagonal(&self) -> Vec<f64> {
        self.states().map(|(_, _, m)| m as f64 - self.j()).collect()
    }

    /// Diagonal of a†a.
    pub fn number_diagonal(&self) -> Vec<f64> {
        self.states().map(|(_, n, _)| n as f64).collect()
    }
}

/// Bundle of the elementary dense operators on one basis.
#[derive(Debug, Clone)]
pub struct BasisOps {
    pub basis: SpinBosonBasis,
    pub a: ComplexMatrix,
    pub a_dag: ComplexMatrix,
    pub j_plus: ComplexMatrix,
    pub j_minus: ComplexMatrix,
    pub j_z: ComplexMatrix,
    pub parity: ComplexMatrix,
}

impl BasisOps {
    pub fn new(basis: SpinBosonBasis) -> Self {
        let (a, a_dag) = basis.boson_ops();
        let (j_plus, j_minus, j_z) = basis.spin_ops();
        BasisOps {
            basis,
            a,
            a_dag,
            j_plus,
            j_minus,
            j_z,
            parity: basis.parity(),
        }
    }

    pub fn identity(&self) -> ComplexMatrix {
        ComplexMatrix::identity(self.basis.dim())
    }

    /// Jx = (J₊ + J₋)/2
    pub fn j_x(&self) -> ComplexMatrix {
        self.j_plus
            .add(&self.j_minus)
            .expect("same basis")
            .scale(C64::new(0.5, 0.0))
    }

    /// Jy = (J₊ − J₋)/(2i)
    pub fn j_y(&self) -> ComplexMatrix {
        self.j_plus
            .sub(&self.j_minus)
            .expect("same basis")
            .scale(C64::new(0.0, -0.5))
    }
}

/// One product term c·(boson monomial)⊗(spin generator).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderTerm {
    pub coeff: C64,
    pub boson: BosonAction,
    pub spin: SpinAction,
}

/// Linear combination of ladder terms; every Hamiltonian in the crate is
/// written as one of these and assembled directly from the matrix elements
/// above.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OperatorSum {
    terms: Vec<LadderTerm>,
}

impl OperatorSum {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a term; exact-zero coefficients are dropped.
    pub fn push(&mut self, coeff: C64, boson: BosonAction, spin: SpinAction) -> &mut Self {
        if coeff != C64::new(0.0, 0.0) {
            self.terms.push(LadderTerm { coeff, boson, spin });
        }
        self
    }

    pub fn terms(&self) -> &[LadderTerm] {
        &self.terms
    }

    pub fn sparse(&self, basis: &SpinBosonBasis) -> SparseMatrix {
        let mut out = SparseMatrix::new(basis.dim());
        for (col, n, m) in basis.states() {
            for t in &self.terms {
                let Some((n2, bamp)) = boson_element(t.boson, n, basis.cutoff()) else {
                    continue;
                };
                let Some((m2, samp)) = spin_element(t.spin, m, basis.spin()) else {
                    continue;
                };
                out.push(basis.index(n2, m2), col, t.coeff * (bamp * samp));
            }
        }
        out
    }

    pub fn dense(&self, basis: &SpinBosonBasis) -> ComplexMatrix {
        self.sparse(basis).to_dense()
    }
}
