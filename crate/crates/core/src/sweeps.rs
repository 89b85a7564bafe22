//! Parameter-grid harnesses: U-V phase diagrams, ramp-time scans, and
//! photon-cutoff studies.
//!
//! Cells are independent evolutions dispatched to a worker pool and merged by
//! index, so results are bit-identical regardless of worker count. A failing
//! cell is recorded with its abort reason; it never aborts the sweep.

use rayon::prelude::*;

use crate::dynamics::{evolve, Schedule};
use crate::error::Result;
use crate::hamiltonians::{AnnealParams, Model};
use crate::observables::mode_number_distribution;

/// One sweep dimension.
#[derive(Debug, Clone)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

/// Scalars kept per successful cell.
#[derive(Debug, Clone)]
pub struct CellOutcome {
    pub final_fidelity: f64,
    pub final_atomic_fidelity: f64,
    pub final_p_site3: f64,
    pub final_entropy: Option<f64>,
    pub max_entropy: Option<f64>,
    /// Final photon-number distribution of mode 1 (cutoff scans).
    pub photon_distribution: Option<Vec<f64>>,
}

/// One grid cell; failures carry the abort reason string.
#[derive(Debug, Clone)]
pub struct SweepCell {
    pub index: Vec<usize>,
    pub coords: Vec<f64>,
    pub model: Model,
    pub params_hash: u64,
    pub outcome: std::result::Result<CellOutcome, String>,
}

/// A completed sweep: axis definitions, one record per grid cell, and the
/// base parameter set the cells were derived from.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub axes: Vec<Axis>,
    pub cells: Vec<SweepCell>,
    pub base: AnnealParams,
    pub cadence: usize,
}

impl SweepResult {
    /// Total number of grid cells, including failed ones.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Cell lookup by grid index.
    pub fn cell(&self, index: &[usize]) -> Option<&SweepCell> {
        self.cells.iter().find(|c| c.index == index)
    }
}

/// FNV-1a over the canonical parameter rendering; reproducible across runs.
pub fn params_fingerprint(p: &AnnealParams) -> u64 {
    let canonical = format!(
        "J={:?};U={:?};V={:?};Jt={:?};Delta={:?};kappa={:?};nc={};L={};N={};t_f={:?};dt={:?};model={}",
        p.hopping,
        p.onsite,
        p.impurity,
        p.pump_final,
        p.detuning,
        p.kappa,
        p.photon_cutoff,
        p.sites,
        p.particles,
        p.t_final,
        p.dt,
        p.model
    );
    let mut hash: u64 = 0xcbf29ce484222325;
    for byte in canonical.bytes() {
        hash ^= byte as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

/// Run `f` on a worker pool of the given size (0 = the global default pool).
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    if workers == 0 {
        f()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("worker pool")
            .install(f)
    }
}

fn run_cell(params: &AnnealParams, cadence: usize, want_photon_dist: bool) -> SweepCell {
    let schedule = Schedule::from_params(params);
    let outcome = match evolve(params, &schedule, cadence) {
        Ok(record) => {
            let photon_distribution = if want_photon_dist && params.model == Model::Full {
                mode_number_distribution(&record.final_state, 1).ok()
            } else {
                None
            };
            Ok(CellOutcome {
                final_fidelity: record.final_fidelity,
                final_atomic_fidelity: record.final_atomic_fidelity,
                final_p_site3: record.final_p_site3,
                final_entropy: record.final_entropy,
                max_entropy: record.max_entropy,
                photon_distribution,
            })
        }
        Err(e) => Err(e.to_string()),
    };
    SweepCell {
        index: Vec::new(),
        coords: Vec::new(),
        model: params.model,
        params_hash: params_fingerprint(params),
        outcome,
    }
}

/// Solution fidelity over an onsite-interaction x impurity grid at fixed ramp
/// time; one evolution per cell.
pub fn phase_diagram(
    model: Model,
    u_grid: &[f64],
    v_grid: &[f64],
    base: &AnnealParams,
    workers: usize,
    cadence: usize,
) -> Result<SweepResult> {
    if u_grid.is_empty() || v_grid.is_empty() {
        return Err(crate::error::Error::InvalidArgument(
            "phase diagram grids must be non-empty".into(),
        ));
    }
    let tasks: Vec<(usize, usize)> = (0..u_grid.len())
        .flat_map(|iu| (0..v_grid.len()).map(move |iv| (iu, iv)))
        .collect();
    let cells = with_workers(workers, || {
        tasks
            .par_iter()
            .map(|&(iu, iv)| {
                let params = AnnealParams {
                    model,
                    onsite: u_grid[iu],
                    impurity: v_grid[iv],
                    ..base.clone()
                };
                let mut cell = run_cell(&params, cadence, false);
                cell.index = vec![iu, iv];
                cell.coords = vec![u_grid[iu], v_grid[iv]];
                cell
            })
            .collect::<Vec<_>>()
    });
    Ok(SweepResult {
        axes: vec![
            Axis {
                name: "U".into(),
                values: u_grid.to_vec(),
            },
            Axis {
                name: "V".into(),
                values: v_grid.to_vec(),
            },
        ],
        cells,
        base: base.clone(),
        cadence,
    })
}

/// Final fidelity and entanglement per ramp duration, for one or more models.
pub fn ramp_time_scan(
    models: &[Model],
    tf_grid: &[f64],
    base: &AnnealParams,
    workers: usize,
    cadence: usize,
) -> Result<SweepResult> {
    if models.is_empty() || tf_grid.is_empty() {
        return Err(crate::error::Error::InvalidArgument(
            "ramp scan needs at least one model and one ramp time".into(),
        ));
    }
    let tasks: Vec<(usize, usize)> = (0..models.len())
        .flat_map(|im| (0..tf_grid.len()).map(move |it| (im, it)))
        .collect();
    let cells = with_workers(workers, || {
        tasks
            .par_iter()
            .map(|&(im, it)| {
                let params = AnnealParams {
                    model: models[im],
                    t_final: tf_grid[it],
                    ..base.clone()
                };
                let mut cell = run_cell(&params, cadence, false);
                cell.index = vec![im, it];
                cell.coords = vec![im as f64, tf_grid[it]];
                cell
            })
            .collect::<Vec<_>>()
    });
    Ok(SweepResult {
        axes: vec![
            Axis {
                name: "model".into(),
                values: (0..models.len()).map(|i| i as f64).collect(),
            },
            Axis {
                name: "t_f".into(),
                values: tf_grid.to_vec(),
            },
        ],
        cells,
        base: base.clone(),
        cadence,
    })
}

/// Full-model annealing per (photon cutoff, ramp duration) pair, recording
/// the final mode-1 photon distribution alongside the fidelities.
pub fn cutoff_scan(
    nc_set: &[usize],
    tf_grid: &[f64],
    base: &AnnealParams,
    workers: usize,
    cadence: usize,
) -> Result<SweepResult> {
    if nc_set.is_empty() || tf_grid.is_empty() {
        return Err(crate::error::Error::InvalidArgument(
            "cutoff scan needs at least one cutoff and one ramp time".into(),
        ));
    }
    let tasks: Vec<(usize, usize)> = (0..nc_set.len())
        .flat_map(|ic| (0..tf_grid.len()).map(move |it| (ic, it)))
        .collect();
    let cells = with_workers(workers, || {
        tasks
            .par_iter()
            .map(|&(ic, it)| {
                let params = AnnealParams {
                    model: Model::Full,
                    photon_cutoff: nc_set[ic],
                    t_final: tf_grid[it],
                    ..base.clone()
                };
                let mut cell = run_cell(&params, cadence, true);
                cell.index = vec![ic, it];
                cell.coords = vec![nc_set[ic] as f64, tf_grid[it]];
                cell
            })
            .collect::<Vec<_>>()
    });
    Ok(SweepResult {
        axes: vec![
            Axis {
                name: "nc".into(),
                values: nc_set.iter().map(|&n| n as f64).collect(),
            },
            Axis {
                name: "t_f".into(),
                values: tf_grid.to_vec(),
            },
        ],
        cells,
        base: base.clone(),
        cadence,
    })
}

/// `-log10(1 - F)`, clipped at the float floor.
pub fn neg_log10_infidelity(fidelity: f64) -> f64 {
    -(1.0 - fidelity).max(1e-16).log10()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_base() -> AnnealParams {
        AnnealParams {
            t_final: 20.0,
            photon_cutoff: 1,
            ..AnnealParams::default()
        }
    }

    #[test]
    fn completeness_including_failed_cells() {
        // t_f = 0.05 is not divisible by dt = 0.02: that cell must fail but
        // stay in the table.
        let base = AnnealParams {
            dt: 0.02,
            ..quick_base()
        };
        let sweep = ramp_time_scan(&[Model::Adiabatic], &[10.0, 0.05], &base, 1, 10).unwrap();
        assert_eq!(sweep.len(), 2);
        assert!(sweep.cells[0].outcome.is_ok());
        let failure = sweep.cells[1].outcome.as_ref().unwrap_err();
        assert!(failure.contains("divide"), "reason: {failure}");
    }

    #[test]
    fn determinism_is_bitwise_across_worker_counts() {
        let base = quick_base();
        let u = [0.3, 0.7];
        let v = [1.05, 1.1];
        let a = phase_diagram(Model::Full, &u, &v, &base, 1, 10).unwrap();
        let b = phase_diagram(Model::Full, &u, &v, &base, 2, 10).unwrap();
        assert_eq!(a.len(), 4);
        for (ca, cb) in a.cells.iter().zip(&b.cells) {
            assert_eq!(ca.index, cb.index);
            assert_eq!(ca.params_hash, cb.params_hash);
            let (oa, ob) = (ca.outcome.as_ref().unwrap(), cb.outcome.as_ref().unwrap());
            assert_eq!(oa.final_fidelity.to_bits(), ob.final_fidelity.to_bits());
            assert_eq!(
                oa.final_atomic_fidelity.to_bits(),
                ob.final_atomic_fidelity.to_bits()
            );
            assert_eq!(
                oa.max_entropy.unwrap().to_bits(),
                ob.max_entropy.unwrap().to_bits()
            );
        }
    }

    #[test]
    fn cutoff_scan_records_photon_distribution() {
        let base = quick_base();
        let sweep = cutoff_scan(&[1, 2], &[20.0], &base, 0, 10).unwrap();
        assert_eq!(sweep.len(), 2);
        for cell in &sweep.cells {
            let nc = cell.coords[0] as usize;
            let dist = cell
                .outcome
                .as_ref()
                .unwrap()
                .photon_distribution
                .as_ref()
                .unwrap();
            assert_eq!(dist.len(), nc + 1);
            let total: f64 = dist.iter().sum();
            assert!((total - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn fingerprint_distinguishes_params() {
        let a = quick_base();
        let mut b = quick_base();
        b.onsite += 1e-9;
        assert_ne!(params_fingerprint(&a), params_fingerprint(&b));
        assert_eq!(params_fingerprint(&a), params_fingerprint(&quick_base()));
    }
}
