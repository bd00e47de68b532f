//! Thermal pointer weights and the greedy assignment of pointer eigenvectors
//! to outcome subspaces: largest weights into the largest subspace, then the
//! next-largest weights into the next subspace, which maximises the agreement
//! for every observer count at once.

use crate::error::{Error, Result};
use crate::prob::{AVector, ProbVector, INTERNAL_NORM_TOL};
use serde::Serialize;

/// A thermal pointer: Hamiltonian eigenvalues, inverse temperature, and the
/// requested dimension of each outcome subspace.
#[derive(Clone, Debug, Serialize)]
pub struct PointerSpec {
    pub energies: Vec<f64>,
    pub beta: f64,
    pub subspace_dims: Vec<usize>,
}

impl PointerSpec {
    pub fn new(energies: Vec<f64>, beta: f64, subspace_dims: Vec<usize>) -> Result<Self> {
        if energies.is_empty() {
            return Err(Error::Domain("pointer needs at least one energy".into()));
        }
        if !beta.is_finite() || beta < 0.0 {
            return Err(Error::Domain(format!(
                "inverse temperature must be finite and >= 0, got {beta}"
            )));
        }
        if subspace_dims.contains(&0) {
            return Err(Error::Domain("subspace dimensions must be >= 1".into()));
        }
        let total: usize = subspace_dims.iter().sum();
        if total > energies.len() {
            return Err(Error::DimensionMismatch(total, energies.len()));
        }
        Ok(Self {
            energies,
            beta,
            subspace_dims,
        })
    }

    /// Boltzmann weights of this pointer.
    pub fn weights(&self) -> Result<ProbVector> {
        boltzmann_weights(&self.energies, self.beta)
    }

    /// Greedy partition of this pointer into its outcome subspaces.
    pub fn partition(&self) -> Result<Partition> {
        greedy_partition(&self.weights()?, &self.subspace_dims)
    }
}

/// Gibbs weights `w_i = e^(-beta (E_i - E_min)) / sum_j e^(-beta (E_j - E_min))`.
/// The shift by the smallest energy keeps the exponentials in range.
pub fn boltzmann_weights(energies: &[f64], beta: f64) -> Result<ProbVector> {
    if energies.is_empty() {
        return Err(Error::Domain("pointer needs at least one energy".into()));
    }
    if !beta.is_finite() || beta < 0.0 {
        return Err(Error::Domain(format!(
            "inverse temperature must be finite and >= 0, got {beta}"
        )));
    }
    let e_min = energies.iter().cloned().fold(f64::INFINITY, f64::min);
    if !e_min.is_finite() {
        return Err(Error::Domain("energies must be finite".into()));
    }
    let raw: Vec<f64> = energies.iter().map(|e| (-beta * (e - e_min)).exp()).collect();
    let z: f64 = raw.iter().sum();
    ProbVector::with_tolerance(raw.into_iter().map(|w| w / z).collect(), INTERNAL_NORM_TOL)
}

/// An outcome-labelled grouping of pointer eigenvectors.
#[derive(Clone, Debug, Serialize)]
pub struct Partition {
    /// Per outcome, the chosen eigenvector indices, ordered by descending
    /// weight (ties by ascending index). The order fixes the basis pairing
    /// used when subspaces are mapped onto each other.
    pub assignment: Vec<Vec<usize>>,
    /// The weights this partition was built from.
    pub weights: Vec<f64>,
    /// Raw subspace traces `a_x = sum_{i in D_x} w_i`.
    traces: Vec<f64>,
    /// Weight left unassigned when the subspaces do not cover the pointer.
    residual: f64,
}

impl Partition {
    /// Build directly from an explicit assignment. Indices must be disjoint
    /// and in range; each outcome keeps its given order.
    pub fn from_assignment(weights: &ProbVector, assignment: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; weights.len()];
        for set in &assignment {
            if set.is_empty() {
                return Err(Error::Domain("empty outcome subspace".into()));
            }
            for &i in set {
                if i >= weights.len() {
                    return Err(Error::DimensionMismatch(i, weights.len()));
                }
                if seen[i] {
                    return Err(Error::Domain(format!(
                        "eigenvector index {i} assigned to two outcomes"
                    )));
                }
                seen[i] = true;
            }
        }
        let traces: Vec<f64> = assignment
            .iter()
            .map(|set| set.iter().map(|&i| weights[i]).sum())
            .collect();
        let assigned: f64 = traces.iter().sum();
        Ok(Self {
            assignment,
            weights: weights.as_slice().to_vec(),
            traces,
            residual: (1.0 - assigned).max(0.0),
        })
    }

    /// Number of outcomes.
    pub fn outcomes(&self) -> usize {
        self.assignment.len()
    }

    /// Dimension of the pointer this partition lives on.
    pub fn pointer_dim(&self) -> usize {
        self.weights.len()
    }

    /// Raw subspace traces; they sum to `1 - residual`.
    pub fn traces(&self) -> &[f64] {
        &self.traces
    }

    /// Unassigned weight (zero when the subspaces cover the pointer).
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// The trace vector as a probability vector over outcomes. Fails when a
    /// residual is left over; see [`Partition::renormalized_avector`].
    pub fn avector(&self) -> Result<AVector> {
        if self.residual > INTERNAL_NORM_TOL {
            return Err(Error::Domain(format!(
                "partition leaves residual weight {:.3e}; renormalize explicitly if intended",
                self.residual
            )));
        }
        AVector::with_tolerance(self.traces.clone(), INTERNAL_NORM_TOL)
    }

    /// Traces rescaled to sum to one, for callers that interpret the residual
    /// as conditioning on landing inside the assigned subspaces.
    pub fn renormalized_avector(&self) -> Result<AVector> {
        let assigned: f64 = self.traces.iter().sum();
        if assigned <= 0.0 {
            return Err(Error::Singular("partition carries no weight".into()));
        }
        AVector::with_tolerance(
            self.traces.iter().map(|t| t / assigned).collect(),
            INTERNAL_NORM_TOL,
        )
    }
}

/// Assign eigenvectors to outcome subspaces greedily: subspaces are filled in
/// descending order of dimension (ties by outcome index), each taking the
/// largest remaining weights. Ties among equal weights are broken by
/// ascending eigenvector index, so the result is deterministic and invariant
/// under permutations of the input.
pub fn greedy_partition(weights: &ProbVector, subspace_dims: &[usize]) -> Result<Partition> {
    if subspace_dims.is_empty() {
        return Err(Error::Domain("need at least one outcome subspace".into()));
    }
    if subspace_dims.contains(&0) {
        return Err(Error::Domain("subspace dimensions must be >= 1".into()));
    }
    let total: usize = subspace_dims.iter().sum();
    if total > weights.len() {
        return Err(Error::DimensionMismatch(total, weights.len()));
    }

    // eigenvector indices by descending weight, index-ascending on ties
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&i, &j| {
        weights[j]
            .partial_cmp(&weights[i])
            .unwrap()
            .then(i.cmp(&j))
    });

    // outcomes by descending subspace dimension, index-ascending on ties
    let mut outcome_order: Vec<usize> = (0..subspace_dims.len()).collect();
    outcome_order.sort_by(|&x, &y| subspace_dims[y].cmp(&subspace_dims[x]).then(x.cmp(&y)));

    let mut assignment = vec![Vec::new(); subspace_dims.len()];
    let mut cursor = order.into_iter();
    for &x in &outcome_order {
        for _ in 0..subspace_dims[x] {
            assignment[x].push(cursor.next().unwrap());
        }
    }
    Partition::from_assignment(weights, assignment)
}
