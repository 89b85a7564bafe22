//! Model Hamiltonians.
//!
//! One Bose-Hubbard particle Hamiltonian underlies three levels of
//! description of the cavity-mediated interactions: the full atom-field
//! Hamiltonian on the composite space, the adiabatically eliminated atomic
//! Hamiltonian, and the state-dependent semi-classical mean-field
//! Hamiltonian. The site-3 impurity enters only through the scattering
//! operators.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fockspace::{embed, CompositeBasis, FockBasis, Ladder, QOperator, StateVector};
use crate::linalg;

/// Level of description of the cavity fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// Atoms and both modes as quantum degrees of freedom.
    Full,
    /// Fields eliminated into an effective atomic interaction.
    Adiabatic,
    /// Fields as self-consistent classical amplitudes.
    Semiclassical,
}

impl Model {
    pub fn as_str(&self) -> &'static str {
        match self {
            Model::Full => "full",
            Model::Adiabatic => "adiabatic",
            Model::Semiclassical => "semiclassical",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Model::Full),
            "adiabatic" => Ok(Model::Adiabatic),
            "semiclassical" => Ok(Model::Semiclassical),
            other => Err(Error::Config(format!(
                "unknown model '{other}' (expected full, adiabatic or semiclassical)"
            ))),
        }
    }
}

/// Physical and numerical parameters of one annealing run.
///
/// Energies are in units of the recoil energy and times in inverse recoil
/// frequencies (hbar = 1 throughout).
#[derive(Debug, Clone, PartialEq)]
pub struct AnnealParams {
    /// Tunneling amplitude J.
    pub hopping: f64,
    /// Onsite interaction U.
    pub onsite: f64,
    /// Impurity magnitude V (>= 1) deepening the third well.
    pub impurity: f64,
    /// Pump amplitude at the end of the ramp.
    pub pump_final: f64,
    /// Cavity-pump detuning; negative values are red detuned.
    pub detuning: f64,
    /// Cavity linewidth.
    pub kappa: f64,
    /// Photon number cutoff per mode.
    pub photon_cutoff: usize,
    /// Lattice sites.
    pub sites: usize,
    /// Particle number.
    pub particles: usize,
    /// Ramp duration.
    pub t_final: f64,
    /// Integrator step.
    pub dt: f64,
    pub model: Model,
}

impl Default for AnnealParams {
    /// The canonical operating point: J = 0.1, U = 0.7, V = 1.1,
    /// pump ramped to sqrt(5) at detuning -5, kappa = 1, cutoff 3,
    /// two atoms on four sites, t_f = 1000 at dt = 0.01.
    fn default() -> Self {
        Self {
            hopping: 0.1,
            onsite: 0.7,
            impurity: 1.1,
            pump_final: 5.0f64.sqrt(),
            detuning: -5.0,
            kappa: 1.0,
            photon_cutoff: 3,
            sites: 4,
            particles: 2,
            t_final: 1000.0,
            dt: 0.01,
            model: Model::Full,
        }
    }
}

impl AnnealParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if !(self.hopping > 0.0) {
            return bad(format!("hopping J must be > 0, got {}", self.hopping));
        }
        if !(self.onsite >= 0.0) {
            return bad(format!("onsite U must be >= 0, got {}", self.onsite));
        }
        if !(self.impurity >= 1.0) {
            return bad(format!("impurity V must be >= 1, got {}", self.impurity));
        }
        if !(self.pump_final >= 0.0) {
            return bad(format!("final pump must be >= 0, got {}", self.pump_final));
        }
        if !(self.kappa > 0.0) {
            return bad(format!("kappa must be > 0, got {}", self.kappa));
        }
        if !(self.t_final > 0.0) {
            return bad(format!("t_f must be > 0, got {}", self.t_final));
        }
        if !(self.dt > 0.0) {
            return bad(format!("dt must be > 0, got {}", self.dt));
        }
        if self.sites == 0 {
            return bad("lattice needs at least one site".into());
        }
        if !self.detuning.is_finite() {
            return bad("detuning must be finite".into());
        }
        Ok(())
    }

    pub fn lattice_basis(&self) -> Result<FockBasis> {
        FockBasis::lattice(self.sites, self.particles)
    }

    /// Composite basis in the fixed factor order [lattice, mode 1, mode 2].
    pub fn composite_basis(&self) -> Result<CompositeBasis> {
        CompositeBasis::new(vec![
            self.lattice_basis()?,
            FockBasis::mode(self.photon_cutoff),
            FockBasis::mode(self.photon_cutoff),
        ])
    }
}

/// The two mode-scattering operators, diagonal in the occupation basis.
#[derive(Debug, Clone)]
pub struct ScatteringOps {
    pub m1: QOperator,
    pub m2: QOperator,
}

/// Site-signed number sums driving the two modes, with the impurity folded
/// into the site-3 weight:
/// `M1 = -n1 + n2 - V n3 + n4`, `M2 = +n1 + n2 - V n3 - n4`.
///
/// The sign patterns are specific to the four-site geometry (one mode at
/// twice the wavelength of the other).
pub fn scattering_ops(basis: &FockBasis, impurity: f64) -> Result<ScatteringOps> {
    let sites = basis.tuple_len();
    if sites != 4 {
        return Err(Error::InvalidArgument(format!(
            "scattering operators are defined for 4 sites, got {sites}"
        )));
    }
    let comp = CompositeBasis::single(basis.clone());
    let signs1 = [-1.0, 1.0, -impurity, 1.0];
    let signs2 = [1.0, 1.0, -impurity, -1.0];
    let diag = |signs: [f64; 4]| -> Vec<f64> {
        basis
            .states()
            .iter()
            .map(|s| s.iter().zip(signs).map(|(&n, w)| n as f64 * w).sum())
            .collect()
    };
    Ok(ScatteringOps {
        m1: QOperator::from_diagonal(&comp, &diag(signs1))?,
        m2: QOperator::from_diagonal(&comp, &diag(signs2))?,
    })
}

/// Bose-Hubbard Hamiltonian `J sum_PBC (b_k† b_{k+1} + h.c.) + U/2 sum n(n-1)`
/// on a fixed-number lattice basis.
pub fn hubbard(basis: &FockBasis, hopping: f64, onsite: f64) -> Result<QOperator> {
    let sites = basis.tuple_len();
    let comp = CompositeBasis::single(basis.clone());
    let mut h = QOperator::zeros(&comp);
    if sites >= 2 {
        // A two-site ring would double-count its single bond.
        let bonds = if sites == 2 { 1 } else { sites };
        for k in 0..bonds {
            let next = (k + 1) % sites;
            let hop = basis.hopping(k, next)?;
            h = &h + &(&hop + &hop.dagger()).scaled(hopping);
        }
    }
    let onsite_diag: Vec<f64> = basis
        .states()
        .iter()
        .map(|s| s.iter().map(|&n| 0.5 * onsite * (n * n.saturating_sub(1)) as f64).sum())
        .collect();
    h = &h + &QOperator::from_diagonal(&comp, &onsite_diag)?;
    Ok(h)
}

/// Effective interaction strength `Delta pump^2 / (kappa^2 + Delta^2)` shared
/// by the adiabatic and semi-classical Hamiltonians.
pub fn interaction_prefactor(params: &AnnealParams, pump: f64) -> f64 {
    params.detuning * pump * pump / (params.kappa * params.kappa + params.detuning * params.detuning)
}

/// Pump-independent and pump-linear parts of the full Hamiltonian, so that
/// `H(pump) = h0 + pump * h1` along a ramp.
pub fn full_hamiltonian_parts(params: &AnnealParams) -> Result<(QOperator, QOperator)> {
    let lattice = params.lattice_basis()?;
    let comp = params.composite_basis()?;
    let hub = embed(&hubbard(&lattice, params.hopping, params.onsite)?, &comp, 0)?;

    let mode = FockBasis::mode(params.photon_cutoff);
    let number = mode.ladder_operator(0, Ladder::Number)?;
    let photons = &embed(&number, &comp, 1)? + &embed(&number, &comp, 2)?;
    let h0 = &hub - &photons.scaled(params.detuning);

    let ops = scattering_ops(&lattice, params.impurity)?;
    let quadrature = {
        let a = mode.ladder_operator(0, Ladder::Annihilate)?;
        &a + &a.dagger()
    };
    let drive1 = (&embed(&ops.m1, &comp, 0)? * &embed(&quadrature, &comp, 1)?)?;
    let drive2 = (&embed(&ops.m2, &comp, 0)? * &embed(&quadrature, &comp, 2)?)?;
    let h1 = &drive1 + &drive2;
    Ok((h0, h1))
}

/// Full atom-field Hamiltonian at a given instantaneous pump amplitude.
pub fn full_hamiltonian(params: &AnnealParams, pump: f64) -> Result<QOperator> {
    let (h0, h1) = full_hamiltonian_parts(params)?;
    Ok(&h0 + &h1.scaled(pump))
}

/// Adiabatically eliminated atomic Hamiltonian
/// `H_hub + prefactor * (M1^2 + M2^2)`.
pub fn adiabatic_hamiltonian(params: &AnnealParams, pump: f64) -> Result<QOperator> {
    let lattice = params.lattice_basis()?;
    let hub = hubbard(&lattice, params.hopping, params.onsite)?;
    let ops = scattering_ops(&lattice, params.impurity)?;
    let m1m1 = (&ops.m1 * &ops.m1)?;
    let m2m2 = (&ops.m2 * &ops.m2)?;
    let pref = interaction_prefactor(params, pump);
    Ok(&hub + &(&m1m1 + &m2m2).scaled(pref))
}

/// Self-consistent classical field amplitudes
/// `alpha_m = -i pump <M_m> / (kappa - i Delta)` for the current atomic state.
pub fn mean_field_amplitudes(
    state: &StateVector,
    params: &AnnealParams,
    pump: f64,
) -> Result<(C64, C64)> {
    let lattice = params.lattice_basis()?;
    let ops = scattering_ops(&lattice, params.impurity)?;
    let denom = C64::new(params.kappa, -params.detuning);
    let alpha = |m: &QOperator| -> Result<C64> {
        let avg = m.expectation(state)?;
        Ok(C64::new(0.0, -pump) * avg / denom)
    };
    Ok((alpha(&ops.m1)?, alpha(&ops.m2)?))
}

/// Mean-field interaction Hamiltonian
/// `H_hub + prefactor * sum_m (2 M_m <M_m> - <M_m>^2)`; depends on the state,
/// so the induced evolution is nonlinear.
pub fn semiclassical_hamiltonian(
    state: &StateVector,
    params: &AnnealParams,
    pump: f64,
) -> Result<QOperator> {
    let lattice = params.lattice_basis()?;
    let hub = hubbard(&lattice, params.hopping, params.onsite)?;
    let ops = scattering_ops(&lattice, params.impurity)?;
    let pref = interaction_prefactor(params, pump);
    let comp = hub.basis().clone();
    let mut h = hub;
    for m in [&ops.m1, &ops.m2] {
        let avg = m.expectation(state)?.re;
        let shift = QOperator::identity(&comp).scaled(avg * avg);
        h = &h + &(&m.scaled(2.0 * avg) - &shift).scaled(pref);
    }
    Ok(h)
}

/// Lowest eigenpair of a Hermitian operator.
#[derive(Debug, Clone)]
pub struct GroundState {
    pub energy: f64,
    pub state: StateVector,
    /// Gap to the next level (infinite for one-dimensional spaces).
    pub gap_above: f64,
}

/// Dense Hermitian eigensolve for the lowest eigenpair, with the phase fixed
/// so the largest-magnitude amplitude is real positive.
pub fn ground_state(h: &QOperator) -> Result<GroundState> {
    let (vals, vec) = linalg::eigh_ground(h.matrix())?;
    let state = StateVector::new(h.basis().clone(), vec)?;
    let gap_above = if vals.len() > 1 {
        vals[1] - vals[0]
    } else {
        f64::INFINITY
    };
    Ok(GroundState {
        energy: vals[0],
        state,
        gap_above,
    })
}
