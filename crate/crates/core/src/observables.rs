//! Measured quantities: fidelities, site occupations, photon statistics, and
//! atom-field entanglement entropy.
//!
//! These are the readable reference implementations; the integrator keeps its
//! own precomputed diagonal weights for the hot path, and the two are held
//! equal by tests.

use crate::dynamics::TrajectoryRecord;
use crate::error::{Error, Result};
use crate::fockspace::{BasisKind, StateVector};

/// Overlap probability `|<phi|psi>|^2`; symmetric and phase-insensitive.
pub fn fidelity(psi: &StateVector, phi: &StateVector) -> Result<f64> {
    Ok(phi.inner(psi)?.norm_sqr())
}

/// `<n_k>` for every lattice site; factor 0 of the state must be a lattice.
pub fn site_occupations(psi: &StateVector) -> Result<Vec<f64>> {
    let basis = psi.basis();
    let lattice = basis.factor(0)?;
    if !matches!(lattice.kind(), BasisKind::Lattice { .. }) {
        return Err(Error::BasisMismatch(
            "first factor is not a lattice basis".into(),
        ));
    }
    let sites = lattice.tuple_len();
    let mut occ = vec![0.0; sites];
    for (flat, amp) in psi.amplitudes().iter().enumerate() {
        let w = amp.norm_sqr();
        if w == 0.0 {
            continue;
        }
        let idx = basis.unflatten(flat);
        for (k, total) in occ.iter_mut().enumerate() {
            *total += w * lattice.states()[idx[0]][k] as f64;
        }
    }
    Ok(occ)
}

/// `<a_m\u{2020} a_m>` for both modes of a full-model state.
pub fn photon_numbers(psi: &StateVector) -> Result<(f64, f64)> {
    let basis = psi.basis();
    if basis.factors().len() < 3 {
        return Err(Error::BasisMismatch(
            "photon numbers need a [lattice, mode, mode] state".into(),
        ));
    }
    let mut n = [0.0; 2];
    for (flat, amp) in psi.amplitudes().iter().enumerate() {
        let w = amp.norm_sqr();
        if w == 0.0 {
            continue;
        }
        let idx = basis.unflatten(flat);
        for m in 0..2 {
            n[m] += w * basis.factors()[m + 1].states()[idx[m + 1]][0] as f64;
        }
    }
    Ok((n[0], n[1]))
}

/// Photon-number distribution of one mode (slot 1 or 2 of a full-model state).
pub fn mode_number_distribution(psi: &StateVector, mode_slot: usize) -> Result<Vec<f64>> {
    let basis = psi.basis();
    let factor = basis.factor(mode_slot)?;
    if !matches!(factor.kind(), BasisKind::Mode { .. }) {
        return Err(Error::BasisMismatch(format!(
            "slot {mode_slot} is not a photon mode"
        )));
    }
    let mut dist = vec![0.0; factor.dim()];
    for (flat, amp) in psi.amplitudes().iter().enumerate() {
        let w = amp.norm_sqr();
        if w == 0.0 {
            continue;
        }
        let idx = basis.unflatten(flat);
        dist[idx[mode_slot]] += w;
    }
    Ok(dist)
}

/// Probability that every particle sits on the third lattice site.
pub fn all_on_site3_probability(psi: &StateVector) -> Result<f64> {
    let basis = psi.basis();
    let lattice = basis.factor(0)?;
    let (sites, particles) = match *lattice.kind() {
        BasisKind::Lattice { sites, particles } => (sites, particles),
        BasisKind::Mode { .. } => {
            return Err(Error::BasisMismatch(
                "first factor is not a lattice basis".into(),
            ))
        }
    };
    if sites < 3 {
        return Err(Error::InvalidArgument(
            "lattice has no third site".into(),
        ));
    }
    let target: Vec<usize> = (0..sites)
        .map(|k| if k == 2 { particles } else { 0 })
        .collect();
    let target_idx = lattice
        .index_of(&target)
        .expect("the all-on-one-site tuple is always in the fixed-number basis");
    let mut p = 0.0;
    for (flat, amp) in psi.amplitudes().iter().enumerate() {
        if basis.unflatten(flat)[0] == target_idx {
            p += amp.norm_sqr();
        }
    }
    Ok(p)
}

/// Von Neumann entropy (nats) of the reduced mode density matrix of a
/// full-model state. Zero for product states; bounded by the log of the
/// smaller factor dimension.
pub fn entanglement_entropy(psi: &StateVector) -> Result<f64> {
    let basis = psi.basis();
    let n = basis.factors().len();
    if n < 2 {
        return Err(Error::BasisMismatch(
            "entanglement entropy needs at least two factors".into(),
        ));
    }
    let keep: Vec<usize> = (1..n).collect();
    psi.partial_trace(&keep)?.von_neumann_entropy()
}

/// Entanglement entropy time series of a trajectory, with its peak and final
/// values. `None` when the model carries no entropy (atomic-only evolution).
#[derive(Debug, Clone)]
pub struct EntropyReport {
    /// (t, S) pairs in nats at the observer cadence.
    pub series: Vec<(f64, f64)>,
    pub max_entropy: f64,
    pub final_entropy: f64,
}

impl EntropyReport {
    pub fn from_trajectory(record: &TrajectoryRecord) -> Option<Self> {
        let series: Vec<(f64, f64)> = record
            .samples
            .iter()
            .filter_map(|s| s.entropy.map(|e| (s.t, e)))
            .collect();
        if series.is_empty() {
            return None;
        }
        let max_entropy = series.iter().map(|&(_, s)| s).fold(f64::MIN, f64::max);
        let final_entropy = series.last().unwrap().1;
        Some(Self {
            series,
            max_entropy,
            final_entropy,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::{CompositeBasis, FockBasis};
    use num_complex::Complex64 as C64;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn product_state(occ: [usize; 4], n1: usize, n2: usize, nc: usize) -> StateVector {
        let lattice = FockBasis::lattice(4, occ.iter().sum()).unwrap();
        let comp = CompositeBasis::new(vec![
            lattice.clone(),
            FockBasis::mode(nc),
            FockBasis::mode(nc),
        ])
        .unwrap();
        let flat = comp.flat_index(&[lattice.index_of(&occ).unwrap(), n1, n2]);
        StateVector::basis_state(comp, flat).unwrap()
    }

    #[test]
    fn fidelity_basics() {
        let psi = product_state([1, 1, 0, 0], 0, 0, 2);
        assert!((fidelity(&psi, &psi).unwrap() - 1.0).abs() < 1e-15);

        let other = product_state([0, 0, 2, 0], 0, 0, 2);
        assert!(fidelity(&psi, &other).unwrap() < 1e-15);

        // Global phases drop out.
        let phased = StateVector::new(
            psi.basis().clone(),
            psi.amplitudes() * c(0.0, 1.0),
        )
        .unwrap();
        assert!((fidelity(&psi, &phased).unwrap() - 1.0).abs() < 1e-15);
        // Symmetry.
        let mixed = StateVector::new(
            psi.basis().clone(),
            psi.amplitudes() + other.amplitudes() * c(0.5, 0.2),
        )
        .unwrap();
        let ab = fidelity(&psi, &mixed).unwrap();
        let ba = fidelity(&mixed, &psi).unwrap();
        assert!((ab - ba).abs() < 1e-15);
    }

    #[test]
    fn occupations_of_product_state() {
        let psi = product_state([1, 1, 0, 0], 0, 0, 2);
        let occ = site_occupations(&psi).unwrap();
        assert_eq!(occ, vec![1.0, 1.0, 0.0, 0.0]);
        assert!((occ.iter().sum::<f64>() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn photons_of_vacuum_and_excited_modes() {
        let psi = product_state([0, 0, 2, 0], 0, 0, 3);
        assert_eq!(photon_numbers(&psi).unwrap(), (0.0, 0.0));
        let psi = product_state([0, 0, 2, 0], 2, 1, 3);
        assert_eq!(photon_numbers(&psi).unwrap(), (2.0, 1.0));

        let atomic = StateVector::basis_state(
            CompositeBasis::single(FockBasis::lattice(4, 2).unwrap()),
            0,
        )
        .unwrap();
        assert!(photon_numbers(&atomic).is_err());
    }

    #[test]
    fn mode_distribution_sums_to_one() {
        let psi = product_state([0, 0, 2, 0], 2, 0, 3);
        let dist = mode_number_distribution(&psi, 1).unwrap();
        assert_eq!(dist.len(), 4);
        assert!((dist[2] - 1.0).abs() < 1e-15);
        assert!(mode_number_distribution(&psi, 0).is_err());
    }

    #[test]
    fn site3_probability_examples() {
        assert!((all_on_site3_probability(&product_state([0, 0, 2, 0], 0, 0, 2)).unwrap() - 1.0).abs() < 1e-15);
        assert!(all_on_site3_probability(&product_state([1, 1, 0, 0], 0, 0, 2)).unwrap() < 1e-15);
    }

    #[test]
    fn entropy_of_product_state_vanishes() {
        let psi = product_state([0, 1, 1, 0], 1, 2, 3);
        assert!(entanglement_entropy(&psi).unwrap().abs() < 1e-10);
    }

    #[test]
    fn entropy_of_schmidt_rank_two_state() {
        // (|A> (x) |0,0> + |B> (x) |1,0>)/sqrt(2) with <A|B> = 0 carries ln 2.
        let a = product_state([1, 1, 0, 0], 0, 0, 1);
        let b = product_state([0, 0, 2, 0], 1, 0, 1);
        let psi = StateVector::new(
            a.basis().clone(),
            a.amplitudes() + b.amplitudes(),
        )
        .unwrap();
        let s = entanglement_entropy(&psi).unwrap();
        assert!((s - 2.0f64.ln()).abs() < 1e-10, "S = {s}");
    }

    #[test]
    fn entropy_matches_integrator_samples() {
        use crate::dynamics::{evolve, Schedule};
        use crate::hamiltonians::AnnealParams;
        let params = AnnealParams {
            t_final: 30.0,
            photon_cutoff: 2,
            ..AnnealParams::default()
        };
        let record = evolve(&params, &Schedule::from_params(&params), 500).unwrap();
        let last = record.samples.last().unwrap();
        let psi = &record.final_state;

        assert!((entanglement_entropy(psi).unwrap() - last.entropy.unwrap()).abs() < 1e-9);
        let occ = site_occupations(psi).unwrap();
        for (a, b) in occ.iter().zip(&last.occupations) {
            assert!((a - b).abs() < 1e-9);
        }
        let (n1, n2) = photon_numbers(psi).unwrap();
        let (m1, m2) = last.photons.unwrap();
        assert!((n1 - m1).abs() < 1e-9 && (n2 - m2).abs() < 1e-9);
        assert!(
            (all_on_site3_probability(psi).unwrap() - last.p_all_on_site3).abs() < 1e-9
        );

        let report = EntropyReport::from_trajectory(&record).unwrap();
        assert!(report.max_entropy >= report.final_entropy);
        assert_eq!(report.series.len(), record.samples.len());
    }
}
