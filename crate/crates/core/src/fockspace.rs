//! Truncated bosonic Fock spaces.
//!
//! Bases are ordered occupation-number enumerations, either a lattice sector
//! with fixed particle count or a single photon mode with a hard cutoff.
//! Operators and states always carry their (composite) basis so dimension and
//! compatibility errors surface early instead of as silent index bugs.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg;

/// What a single Fock factor describes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasisKind {
    /// `sites` lattice wells holding exactly `particles` bosons.
    Lattice { sites: usize, particles: usize },
    /// One radiation mode truncated at `cutoff` photons.
    Mode { cutoff: usize },
}

/// Flavor of single-factor ladder operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Create,
    Annihilate,
    Number,
}

/// Ordered basis of occupation tuples for one subsystem.
///
/// Lattice states are all tuples summing to the particle number, in ascending
/// lexicographic order; mode states are `0..=cutoff`. The ordering is
/// deterministic, so serialized amplitudes are portable across runs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockBasis {
    kind: BasisKind,
    states: Vec<Vec<usize>>,
}

fn enumerate_fixed_number(sites: usize, particles: usize) -> Vec<Vec<usize>> {
    if sites == 1 {
        return vec![vec![particles]];
    }
    let mut out = Vec::new();
    for first in 0..=particles {
        for rest in enumerate_fixed_number(sites - 1, particles - first) {
            let mut s = Vec::with_capacity(sites);
            s.push(first);
            s.extend(rest);
            out.push(s);
        }
    }
    out
}

impl FockBasis {
    /// Basis of `sites` wells filled by exactly `particles` bosons.
    pub fn lattice(sites: usize, particles: usize) -> Result<Self> {
        if sites == 0 {
            return Err(Error::InvalidArgument(
                "lattice basis needs at least one site".into(),
            ));
        }
        Ok(Self {
            kind: BasisKind::Lattice { sites, particles },
            states: enumerate_fixed_number(sites, particles),
        })
    }

    /// Photon-mode basis `{|0>, ..., |cutoff>}`.
    pub fn mode(cutoff: usize) -> Self {
        Self {
            kind: BasisKind::Mode { cutoff },
            states: (0..=cutoff).map(|n| vec![n]).collect(),
        }
    }

    pub fn kind(&self) -> &BasisKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    /// Occupation tuples in basis order.
    pub fn states(&self) -> &[Vec<usize>] {
        &self.states
    }

    /// Number of tuple slots (lattice sites, or 1 for a mode).
    pub fn tuple_len(&self) -> usize {
        self.states[0].len()
    }

    /// Position of an occupation tuple in the basis, if present.
    pub fn index_of(&self, occ: &[usize]) -> Option<usize> {
        self.states
            .binary_search_by(|s| s.as_slice().cmp(occ))
            .ok()
    }

    /// Single-factor ladder/number operator.
    ///
    /// On a mode basis all three kinds follow `<n-1|a|n> = sqrt(n)` with the
    /// ladder truncated at the cutoff. On a lattice basis only `Number` is
    /// representable: bare create/annihilate leave the fixed-particle sector,
    /// so bilinears must be built with [`FockBasis::hopping`].
    pub fn ladder_operator(&self, index: usize, kind: Ladder) -> Result<QOperator> {
        if index >= self.tuple_len() {
            return Err(Error::IndexOutOfRange {
                index,
                dim: self.tuple_len(),
            });
        }
        let dim = self.dim();
        let mut mat = DMatrix::<C64>::zeros(dim, dim);
        match kind {
            Ladder::Number => {
                for (i, s) in self.states.iter().enumerate() {
                    mat[(i, i)] = C64::new(s[index] as f64, 0.0);
                }
            }
            Ladder::Create | Ladder::Annihilate => {
                if matches!(self.kind, BasisKind::Lattice { .. }) {
                    return Err(Error::InvalidArgument(
                        "create/annihilate leave the fixed-number lattice sector; \
                         use hopping() for b\u{2020}b bilinears"
                            .into(),
                    ));
                }
                for (i, s) in self.states.iter().enumerate() {
                    let n = s[0];
                    match kind {
                        Ladder::Annihilate if n > 0 => {
                            // <n-1|a|n> = sqrt(n)
                            mat[(i - 1, i)] = C64::new((n as f64).sqrt(), 0.0);
                        }
                        Ladder::Create if i + 1 < dim => {
                            mat[(i + 1, i)] = C64::new(((n + 1) as f64).sqrt(), 0.0);
                        }
                        _ => {}
                    }
                }
            }
        }
        QOperator::new(CompositeBasis::single(self.clone()), mat)
    }

    /// Hopping bilinear `b_from\u{2020} b_to` on a fixed-number lattice basis.
    pub fn hopping(&self, from: usize, to: usize) -> Result<QOperator> {
        if !matches!(self.kind, BasisKind::Lattice { .. }) {
            return Err(Error::InvalidArgument(
                "hopping bilinears are defined on lattice bases".into(),
            ));
        }
        let sites = self.tuple_len();
        if from >= sites || to >= sites {
            return Err(Error::IndexOutOfRange {
                index: from.max(to),
                dim: sites,
            });
        }
        let dim = self.dim();
        let mut mat = DMatrix::<C64>::zeros(dim, dim);
        for (j, s) in self.states.iter().enumerate() {
            if s[to] == 0 {
                continue;
            }
            let mut t = s.clone();
            t[to] -= 1;
            t[from] += 1;
            let amp = ((s[to] * (s[from] + 1)) as f64).sqrt();
            let i = self
                .index_of(&t)
                .expect("fixed-number sector is closed under hopping");
            mat[(i, j)] += C64::new(amp, 0.0);
        }
        QOperator::new(CompositeBasis::single(self.clone()), mat)
    }
}

/// Ordered tensor product of Fock factors.
///
/// Convention everywhere in this crate: factor 0 is the slowest (most
/// significant) index of the flattened Kronecker layout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeBasis {
    factors: Vec<FockBasis>,
}

impl CompositeBasis {
    pub fn new(factors: Vec<FockBasis>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidArgument(
                "composite basis needs at least one factor".into(),
            ));
        }
        Ok(Self { factors })
    }

    /// Wrap one factor.
    pub fn single(factor: FockBasis) -> Self {
        Self {
            factors: vec![factor],
        }
    }

    pub fn factors(&self) -> &[FockBasis] {
        &self.factors
    }

    pub fn factor(&self, slot: usize) -> Result<&FockBasis> {
        self.factors.get(slot).ok_or(Error::IndexOutOfRange {
            index: slot,
            dim: self.factors.len(),
        })
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim()).product()
    }

    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1usize; self.factors.len()];
        for i in (0..self.factors.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.factors[i + 1].dim();
        }
        strides
    }

    /// Flat index of per-factor indices.
    pub fn flat_index(&self, indices: &[usize]) -> usize {
        debug_assert_eq!(indices.len(), self.factors.len());
        self.strides()
            .iter()
            .zip(indices)
            .map(|(s, i)| s * i)
            .sum()
    }

    /// Per-factor indices of a flat index.
    pub fn unflatten(&self, mut flat: usize) -> Vec<usize> {
        let strides = self.strides();
        strides
            .iter()
            .map(|s| {
                let i = flat / s;
                flat %= s;
                i
            })
            .collect()
    }
}

/// A square operator labeled by the composite basis it acts on.
#[derive(Debug, Clone)]
pub struct QOperator {
    basis: CompositeBasis,
    mat: DMatrix<C64>,
}

impl QOperator {
    pub fn new(basis: CompositeBasis, mat: DMatrix<C64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() || mat.nrows() != basis.dim() {
            return Err(Error::BasisMismatch(format!(
                "matrix is {}x{} but basis dimension is {}",
                mat.nrows(),
                mat.ncols(),
                basis.dim()
            )));
        }
        Ok(Self { basis, mat })
    }

    pub fn identity(basis: &CompositeBasis) -> Self {
        Self {
            basis: basis.clone(),
            mat: DMatrix::identity(basis.dim(), basis.dim()),
        }
    }

    pub fn zeros(basis: &CompositeBasis) -> Self {
        Self {
            basis: basis.clone(),
            mat: DMatrix::zeros(basis.dim(), basis.dim()),
        }
    }

    /// Diagonal operator from basis-ordered real values.
    pub fn from_diagonal(basis: &CompositeBasis, diag: &[f64]) -> Result<Self> {
        if diag.len() != basis.dim() {
            return Err(Error::BasisMismatch(format!(
                "diagonal length {} vs basis dimension {}",
                diag.len(),
                basis.dim()
            )));
        }
        let mut mat = DMatrix::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            mat[(i, i)] = C64::new(d, 0.0);
        }
        Ok(Self {
            basis: basis.clone(),
            mat,
        })
    }

    pub fn basis(&self) -> &CompositeBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.mat
    }

    pub fn dagger(&self) -> Self {
        Self {
            basis: self.basis.clone(),
            mat: self.mat.adjoint(),
        }
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        linalg::hermiticity_deviation(&self.mat)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    /// `<psi| A |psi>`.
    pub fn expectation(&self, psi: &StateVector) -> Result<C64> {
        if psi.basis != self.basis {
            return Err(Error::BasisMismatch(
                "expectation value of operator on a different basis".into(),
            ));
        }
        Ok(psi.amps.dotc(&(&self.mat * &psi.amps)))
    }

    /// `[A, B] = AB - BA`.
    pub fn commutator(&self, other: &QOperator) -> Result<QOperator> {
        let ab = (self * other)?;
        let ba = (other * self)?;
        Ok(&ab - &ba)
    }

    /// Max entry magnitude, handy for `[A,B] = 0` style assertions.
    pub fn max_abs(&self) -> f64 {
        self.mat.iter().fold(0.0f64, |m, z| m.max(z.norm()))
    }

    /// Scale by a real factor.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            basis: self.basis.clone(),
            mat: &self.mat * C64::new(factor, 0.0),
        }
    }
}

impl Add for &QOperator {
    type Output = QOperator;
    fn add(self, rhs: &QOperator) -> QOperator {
        assert_eq!(self.basis, rhs.basis, "operator addition across bases");
        QOperator {
            basis: self.basis.clone(),
            mat: &self.mat + &rhs.mat,
        }
    }
}

impl Sub for &QOperator {
    type Output = QOperator;
    fn sub(self, rhs: &QOperator) -> QOperator {
        assert_eq!(self.basis, rhs.basis, "operator subtraction across bases");
        QOperator {
            basis: self.basis.clone(),
            mat: &self.mat - &rhs.mat,
        }
    }
}

impl Neg for &QOperator {
    type Output = QOperator;
    fn neg(self) -> QOperator {
        QOperator {
            basis: self.basis.clone(),
            mat: -&self.mat,
        }
    }
}

/// Operator product; fails on basis mismatch.
impl Mul for &QOperator {
    type Output = Result<QOperator>;
    fn mul(self, rhs: &QOperator) -> Result<QOperator> {
        if self.basis != rhs.basis {
            return Err(Error::BasisMismatch(
                "operator product across bases".into(),
            ));
        }
        Ok(QOperator {
            basis: self.basis.clone(),
            mat: &self.mat * &rhs.mat,
        })
    }
}

/// `op (x) identity` on every other factor of `composite`, Kronecker-ordered.
pub fn embed(op: &QOperator, composite: &CompositeBasis, slot: usize) -> Result<QOperator> {
    let factor = composite.factor(slot)?;
    if op.basis.factors() != std::slice::from_ref(factor) {
        return Err(Error::BasisMismatch(format!(
            "operator basis does not equal composite factor {slot}"
        )));
    }
    let mut mat = DMatrix::<C64>::identity(1, 1);
    for (i, f) in composite.factors().iter().enumerate() {
        if i == slot {
            mat = mat.kronecker(&op.mat);
        } else {
            mat = mat.kronecker(&DMatrix::<C64>::identity(f.dim(), f.dim()));
        }
    }
    QOperator::new(composite.clone(), mat)
}

/// A normalized pure state over a composite basis.
#[derive(Debug, Clone)]
pub struct StateVector {
    basis: CompositeBasis,
    amps: DVector<C64>,
}

impl StateVector {
    /// Build and normalize; rejects zero vectors and dimension mismatches.
    pub fn new(basis: CompositeBasis, amps: DVector<C64>) -> Result<Self> {
        if amps.len() != basis.dim() {
            return Err(Error::BasisMismatch(format!(
                "amplitude length {} vs basis dimension {}",
                amps.len(),
                basis.dim()
            )));
        }
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Err(Error::InvalidArgument(
                "cannot normalize a (near-)zero state vector".into(),
            ));
        }
        Ok(Self {
            basis,
            amps: amps / C64::new(norm, 0.0),
        })
    }

    /// The `index`-th basis state.
    pub fn basis_state(basis: CompositeBasis, index: usize) -> Result<Self> {
        if index >= basis.dim() {
            return Err(Error::IndexOutOfRange {
                index,
                dim: basis.dim(),
            });
        }
        let mut amps = DVector::zeros(basis.dim());
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { basis, amps })
    }

    pub fn basis(&self) -> &CompositeBasis {
        &self.basis
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch(
                "inner product across bases".into(),
            ));
        }
        Ok(self.amps.dotc(&other.amps))
    }

    /// Tensor product, concatenating factor lists.
    pub fn kron(&self, other: &StateVector) -> Self {
        let mut factors = self.basis.factors().to_vec();
        factors.extend(other.basis.factors().iter().cloned());
        let basis = CompositeBasis::new(factors).expect("non-empty factors");
        let amps = self.amps.kronecker(&other.amps);
        Self { basis, amps }
    }

    /// Reduced density matrix on the kept slots (ascending slot order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let (keep, kept_basis, map) = trace_layout(&self.basis, keep)?;
        let keep_dim = kept_basis.dim();
        let rest_dim = self.basis.dim() / keep_dim;
        // Reshape psi into a (keep x rest) matrix, then rho = M M†.
        let mut m = DMatrix::<C64>::zeros(keep_dim, rest_dim);
        for (flat, amp) in self.amps.iter().enumerate() {
            let (k, r) = map[flat];
            m[(k, r)] = *amp;
        }
        let _ = keep;
        let rho = &m * m.adjoint();
        Ok(DensityMatrix {
            basis: kept_basis,
            mat: rho,
        })
    }
}

/// Shared layout work for partial traces: validated kept slots, the kept
/// basis, and a flat-index -> (keep, rest) map.
fn trace_layout(
    basis: &CompositeBasis,
    keep: &[usize],
) -> Result<(Vec<usize>, CompositeBasis, Vec<(usize, usize)>)> {
    if keep.is_empty() {
        return Err(Error::InvalidArgument(
            "partial trace must keep at least one factor".into(),
        ));
    }
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    for &s in &keep {
        if s >= basis.factors().len() {
            return Err(Error::IndexOutOfRange {
                index: s,
                dim: basis.factors().len(),
            });
        }
    }
    let kept_factors: Vec<FockBasis> = keep.iter().map(|&s| basis.factors()[s].clone()).collect();
    let kept_basis = CompositeBasis::new(kept_factors)?;

    let n = basis.factors().len();
    let rest: Vec<usize> = (0..n).filter(|s| !keep.contains(s)).collect();
    let dims: Vec<usize> = basis.factors().iter().map(|f| f.dim()).collect();
    let mut map = Vec::with_capacity(basis.dim());
    for flat in 0..basis.dim() {
        let idx = basis.unflatten(flat);
        let mut k = 0usize;
        for &s in &keep {
            k = k * dims[s] + idx[s];
        }
        let mut r = 0usize;
        for &s in &rest {
            r = r * dims[s] + idx[s];
        }
        map.push((k, r));
    }
    Ok((keep, kept_basis, map))
}

/// Hermitian, unit-trace, positive-semidefinite operator on a composite basis.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    basis: CompositeBasis,
    mat: DMatrix<C64>,
}

impl DensityMatrix {
    pub fn from_pure(psi: &StateVector) -> Self {
        let mat = &psi.amps * psi.amps.adjoint();
        Self {
            basis: psi.basis.clone(),
            mat,
        }
    }

    pub fn basis(&self) -> &CompositeBasis {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn trace(&self) -> C64 {
        self.mat.diagonal().iter().sum()
    }

    /// Reduced density matrix on the kept slots.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let (_, kept_basis, map) = trace_layout(&self.basis, keep)?;
        let keep_dim = kept_basis.dim();
        let dim = self.basis.dim();
        let mut out = DMatrix::<C64>::zeros(keep_dim, keep_dim);
        for i in 0..dim {
            let (ki, ri) = map[i];
            for j in 0..dim {
                let (kj, rj) = map[j];
                if ri == rj {
                    out[(ki, kj)] += self.mat[(i, j)];
                }
            }
        }
        Ok(DensityMatrix {
            basis: kept_basis,
            mat: out,
        })
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        linalg::eigh_values(&self.mat)
    }

    /// Von Neumann entropy in nats; eigenvalues below 1e-14 are dropped.
    pub fn von_neumann_entropy(&self) -> Result<f64> {
        let s = self
            .eigenvalues()?
            .into_iter()
            .filter(|&l| l > 1e-14)
            .map(|l| -l * l.ln())
            .sum();
        Ok(s)
    }

    /// Sanity check of the density-matrix invariants; used by tests.
    pub fn check_valid(&self) -> Result<()> {
        let dev = linalg::hermiticity_deviation(&self.mat);
        if dev > 1e-10 {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > 1e-9 || tr.im.abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "density matrix trace {tr} is not 1"
            )));
        }
        if self.eigenvalues()?.iter().any(|&l| l < -1e-10) {
            return Err(Error::InvalidArgument(
                "density matrix has a negative eigenvalue".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn lattice_dimensions() {
        assert_eq!(FockBasis::lattice(4, 2).unwrap().dim(), 10);
        assert_eq!(FockBasis::lattice(4, 0).unwrap().dim(), 1);
        assert!(FockBasis::lattice(0, 2).is_err());
    }

    #[test]
    fn lattice_two_sites_one_particle() {
        let b = FockBasis::lattice(2, 1).unwrap();
        assert_eq!(b.states(), &[vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn lattice_states_sum_and_order() {
        let b = FockBasis::lattice(4, 2).unwrap();
        for s in b.states() {
            assert_eq!(s.iter().sum::<usize>(), 2);
        }
        for w in b.states().windows(2) {
            assert!(w[0] < w[1], "states must be ascending lexicographic");
        }
        assert_eq!(b.index_of(&[0, 0, 2, 0]), Some(2));
        assert_eq!(b.index_of(&[1, 1, 1, 1]), None);
    }

    #[test]
    fn mode_dimensions() {
        assert_eq!(FockBasis::mode(3).dim(), 4);
        assert_eq!(FockBasis::mode(0).dim(), 1);
        assert_eq!(FockBasis::mode(1).dim(), 2);
    }

    #[test]
    fn number_operator_eigenvalue() {
        let b = FockBasis::lattice(4, 2).unwrap();
        let n3 = b.ladder_operator(2, Ladder::Number).unwrap();
        let i = b.index_of(&[0, 0, 2, 0]).unwrap();
        assert_eq!(n3.matrix()[(i, i)], c(2.0, 0.0));
    }

    #[test]
    fn mode_ladder_rules() {
        let b = FockBasis::mode(3);
        let a = b.ladder_operator(0, Ladder::Annihilate).unwrap();
        // <2|a|3> = sqrt(3)
        assert!((a.matrix()[(2, 3)].re - 3.0f64.sqrt()).abs() < 1e-15);
        let n = b.ladder_operator(0, Ladder::Number).unwrap();
        let ada = (&a.dagger() * &a).unwrap();
        assert!((&ada - &n).max_abs() < 1e-12);
        for k in 0..4 {
            assert_eq!(n.matrix()[(k, k)], c(k as f64, 0.0));
        }
    }

    #[test]
    fn lattice_bare_ladder_rejected() {
        let b = FockBasis::lattice(4, 2).unwrap();
        assert!(b.ladder_operator(0, Ladder::Create).is_err());
        assert!(b.ladder_operator(0, Ladder::Annihilate).is_err());
        assert!(b.ladder_operator(7, Ladder::Number).is_err());
    }

    #[test]
    fn cutoff_commutator_violation_confined_to_top() {
        // a a† - a†a = 1 below the cutoff; the |nc><nc| entry must be the
        // only violation.
        for nc in 1..=4 {
            let b = FockBasis::mode(nc);
            let a = b.ladder_operator(0, Ladder::Annihilate).unwrap();
            let comm = a.commutator(&a.dagger()).unwrap();
            let id = QOperator::identity(comm.basis());
            let dev = &comm - &id;
            for i in 0..=nc {
                for j in 0..=nc {
                    let d = dev.matrix()[(i, j)].norm();
                    if i == nc && j == nc {
                        assert!((d - (nc as f64 + 1.0)).abs() < 1e-12);
                    } else {
                        assert!(d < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn hopping_matrix_elements() {
        let b = FockBasis::lattice(4, 2).unwrap();
        let h = b.hopping(0, 2).unwrap(); // b_1† b_3
        let from = b.index_of(&[0, 0, 2, 0]).unwrap();
        let to = b.index_of(&[1, 0, 1, 0]).unwrap();
        // sqrt(n_to * (n_from + 1)) = sqrt(2 * 1)
        assert!((h.matrix()[(to, from)].re - 2.0f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn total_number_is_constant() {
        let b = FockBasis::lattice(4, 2).unwrap();
        let mut total = QOperator::zeros(&CompositeBasis::single(b.clone()));
        for k in 0..4 {
            total = &total + &b.ladder_operator(k, Ladder::Number).unwrap();
        }
        let twice_id = QOperator::identity(total.basis()).scaled(2.0);
        assert!((&total - &twice_id).max_abs() < 1e-15);
    }

    fn three_factor_basis() -> CompositeBasis {
        CompositeBasis::new(vec![
            FockBasis::lattice(4, 2).unwrap(),
            FockBasis::mode(1),
            FockBasis::mode(2),
        ])
        .unwrap()
    }

    #[test]
    fn embed_identity_and_mismatch() {
        let comp = three_factor_basis();
        let id1 = QOperator::identity(&CompositeBasis::single(comp.factor(1).unwrap().clone()));
        let emb = embed(&id1, &comp, 1).unwrap();
        assert!((&emb - &QOperator::identity(&comp)).max_abs() < 1e-15);
        // factor 2 has cutoff 2, operator was built for cutoff 1
        assert!(embed(&id1, &comp, 2).is_err());
    }

    #[test]
    fn embed_number_acts_on_product_state() {
        let lattice = FockBasis::lattice(4, 2).unwrap();
        let comp = CompositeBasis::new(vec![lattice.clone(), FockBasis::mode(3), FockBasis::mode(3)]).unwrap();
        let n3 = embed(&lattice.ladder_operator(2, Ladder::Number).unwrap(), &comp, 0).unwrap();

        let i_lat = lattice.index_of(&[0, 0, 2, 0]).unwrap();
        let flat = comp.flat_index(&[i_lat, 0, 0]);
        let psi = StateVector::basis_state(comp, flat).unwrap();
        let val = n3.expectation(&psi).unwrap();
        assert!((val.re - 2.0).abs() < 1e-12 && val.im.abs() < 1e-15);
    }

    #[test]
    fn disjoint_embeddings_commute_and_products_distribute() {
        use rand::prelude::*;
        let mut rng = StdRng::seed_from_u64(7);
        let comp = CompositeBasis::new(vec![FockBasis::mode(2), FockBasis::mode(1)]).unwrap();
        for _ in 0..10 {
            let rand_op = |dim: usize, rng: &mut StdRng| {
                DMatrix::from_fn(dim, dim, |_, _| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            };
            let a = QOperator::new(
                CompositeBasis::single(comp.factor(0).unwrap().clone()),
                rand_op(3, &mut rng),
            )
            .unwrap();
            let b = QOperator::new(
                CompositeBasis::single(comp.factor(1).unwrap().clone()),
                rand_op(2, &mut rng),
            )
            .unwrap();
            let ea = embed(&a, &comp, 0).unwrap();
            let eb = embed(&b, &comp, 1).unwrap();
            assert!(ea.commutator(&eb).unwrap().max_abs() < 1e-12);

            let a2 = QOperator::new(
                CompositeBasis::single(comp.factor(0).unwrap().clone()),
                rand_op(3, &mut rng),
            )
            .unwrap();
            let prod = embed(&(&a * &a2).unwrap(), &comp, 0).unwrap();
            let emb_prod = (&embed(&a, &comp, 0).unwrap() * &embed(&a2, &comp, 0).unwrap()).unwrap();
            assert!((&prod - &emb_prod).max_abs() < 1e-12);
        }
    }

    #[test]
    fn partial_trace_product_state() {
        let ba = FockBasis::mode(2);
        let bb = FockBasis::mode(1);
        let psi_a = StateVector::new(
            CompositeBasis::single(ba),
            DVector::from_vec(vec![c(1.0, 0.0), c(0.0, 1.0), c(1.0, 0.0)]),
        )
        .unwrap();
        let psi_b = StateVector::new(
            CompositeBasis::single(bb),
            DVector::from_vec(vec![c(0.6, 0.0), c(0.0, 0.8)]),
        )
        .unwrap();
        let joint = psi_a.kron(&psi_b);
        let rho_b = joint.partial_trace(&[1]).unwrap();
        rho_b.check_valid().unwrap();
        let pure_b = DensityMatrix::from_pure(&psi_b);
        let diff = (rho_b.matrix() - pure_b.matrix())
            .iter()
            .fold(0.0f64, |m, z| m.max(z.norm()));
        assert!(diff < 1e-12);
    }

    #[test]
    fn partial_trace_maximally_entangled() {
        let comp = CompositeBasis::new(vec![FockBasis::mode(1), FockBasis::mode(1)]).unwrap();
        let i00 = comp.flat_index(&[0, 0]);
        let i11 = comp.flat_index(&[1, 1]);
        let mut amps = DVector::zeros(4);
        amps[i00] = c(1.0, 0.0);
        amps[i11] = c(1.0, 0.0);
        let psi = StateVector::new(comp, amps).unwrap();
        let rho = psi.partial_trace(&[1]).unwrap();
        assert!((rho.matrix()[(0, 0)].re - 0.5).abs() < 1e-12);
        assert!((rho.matrix()[(1, 1)].re - 0.5).abs() < 1e-12);
        assert!(rho.matrix()[(0, 1)].norm() < 1e-12);
        assert!((rho.von_neumann_entropy().unwrap() - 2.0f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn partial_trace_schmidt_symmetry_random_states() {
        use rand::prelude::*;
        let mut rng = StdRng::seed_from_u64(42);
        let comp = CompositeBasis::new(vec![FockBasis::mode(3), FockBasis::mode(2)]).unwrap();
        for _ in 0..20 {
            let amps = DVector::from_fn(comp.dim(), |_, _| {
                c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
            });
            let psi = StateVector::new(comp.clone(), amps).unwrap();
            let la = psi.partial_trace(&[0]).unwrap().eigenvalues().unwrap();
            let lb = psi.partial_trace(&[1]).unwrap().eigenvalues().unwrap();
            let nz_a: Vec<f64> = la.into_iter().filter(|&l| l > 1e-10).collect();
            let nz_b: Vec<f64> = lb.into_iter().filter(|&l| l > 1e-10).collect();
            assert_eq!(nz_a.len(), nz_b.len());
            for (a, b) in nz_a.iter().zip(&nz_b) {
                assert!((a - b).abs() < 1e-10, "Schmidt spectra differ: {a} vs {b}");
            }
        }
    }

    #[test]
    fn partial_trace_rejects_empty_keep() {
        let comp = CompositeBasis::new(vec![FockBasis::mode(1), FockBasis::mode(1)]).unwrap();
        let psi = StateVector::basis_state(comp, 0).unwrap();
        assert!(psi.partial_trace(&[]).is_err());
    }

    #[test]
    fn density_partial_trace_matches_pure_path() {
        use rand::prelude::*;
        let mut rng = StdRng::seed_from_u64(3);
        let comp = CompositeBasis::new(vec![FockBasis::mode(3), FockBasis::mode(2)]).unwrap();
        let amps = DVector::from_fn(comp.dim(), |_, _| {
            c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        });
        let psi = StateVector::new(comp, amps).unwrap();
        let via_state = psi.partial_trace(&[0]).unwrap();
        let via_density = DensityMatrix::from_pure(&psi).partial_trace(&[0]).unwrap();
        let diff = (via_state.matrix() - via_density.matrix())
            .iter()
            .fold(0.0f64, |m, z| m.max(z.norm()));
        assert!(diff < 1e-12);
    }

    #[test]
    fn state_normalization() {
        let b = CompositeBasis::single(FockBasis::mode(1));
        let psi = StateVector::new(b, DVector::from_vec(vec![c(3.0, 0.0), c(4.0, 0.0)])).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-12);
        assert!((psi.amplitudes()[0].re - 0.6).abs() < 1e-12);
    }
}
