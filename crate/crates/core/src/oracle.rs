//! Dense small-scale reference: builds the agreement-optimal broadcast
//! unitary explicitly, evolves the full system x pointers state, and reads
//! agreement, locals and bias straight off the joint outcome distribution.
//! Slow and exact, for validating the closed forms at desk scale.

use crate::error::{Error, Result};
use crate::numerics::CMatrix;
use crate::partition::Partition;
use crate::prob::{tv_slices, ProbVector};
use num_complex::Complex64;
use serde::Serialize;

/// Hard cap on the total Hilbert-space dimension `d_S * d_P^n_p`.
pub const MAX_TOTAL_DIM: usize = 16_384;

/// A broadcast unitary over system x `n_p` pointers, together with the
/// outcome partition its measurement is defined by.
#[derive(Clone, Debug)]
pub struct BroadcastUnitary {
    pub matrix: CMatrix,
    pub partition: Partition,
    pub d_s: usize,
    pub d_p: usize,
    pub n_p: u32,
}

impl BroadcastUnitary {
    pub fn total_dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Largest entry of `U^dag U - I`.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.matrix.nrows();
        let dev = self.matrix.adjoint() * &self.matrix - CMatrix::identity(n, n);
        dev.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest entry of `(U - I) P_dis`, the action on the disagreement
    /// subspace, which the optimal construction leaves untouched.
    pub fn disagreement_action_defect(&self) -> f64 {
        let pointer_dim = self.d_p.pow(self.n_p);
        let outcome_of = outcome_table(&self.partition, self.d_p);
        let mut dev = 0.0f64;
        for col in 0..self.total_dim() {
            let (_, pointer_part) = (col / pointer_dim, col % pointer_dim);
            if agreement_outcome(pointer_part, self.d_p, self.n_p, &outcome_of).is_some() {
                continue;
            }
            for row in 0..self.total_dim() {
                let expect = if row == col {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                dev = dev.max((self.matrix[(row, col)] - expect).norm());
            }
        }
        dev
    }
}

/// Joint outcome statistics of an evolved broadcast state.
#[derive(Clone, Debug, Serialize)]
pub struct BroadcastStatistics {
    pub d_s: usize,
    pub n_p: u32,
    /// Joint distribution over outcome tuples, row-major in the pointer
    /// index (`tuple index = sum_i x_i d_s^(n_p - 1 - i)`).
    pub joint: Vec<f64>,
    /// Mass on the all-equal-outcome tuples.
    pub agreement: f64,
    /// Per-pointer marginal outcome distributions.
    pub local_probs: Vec<ProbVector>,
    /// Per-pointer total variation from the broadcast distribution.
    pub bias: Vec<f64>,
    /// Joint mass on tuples with at least two distinct outcomes.
    pub off_diagonal_mass: f64,
}

impl BroadcastStatistics {
    pub fn joint_prob(&self, tuple: &[usize]) -> f64 {
        assert_eq!(tuple.len(), self.n_p as usize);
        let mut idx = 0usize;
        for &x in tuple {
            assert!(x < self.d_s);
            idx = idx * self.d_s + x;
        }
        self.joint[idx]
    }
}

/// Report of the locality/reproducibility/agreement implication at desk
/// scale: if every local marginal reproduces the broadcast distribution,
/// the joint distribution must carry no mass off the all-equal tuples.
#[derive(Clone, Debug, Serialize)]
pub struct OzawaReport {
    /// Largest total-variation gap between a local marginal and p_S.
    pub reproducibility_defect: f64,
    /// Joint mass on tuples with disagreeing outcomes.
    pub off_diagonal_mass: f64,
    pub reproducible: bool,
    pub agrees: bool,
}

/// Validate a density operator: unit trace, Hermitian, and no eigenvalue
/// below a small negative floor.
pub fn validate_density(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch(m.nrows(), m.ncols()));
    }
    let tr = m.diagonal().iter().map(|c| c.re).sum::<f64>();
    if (tr - 1.0).abs() > 1e-10 {
        return Err(Error::Domain(format!("density trace is {tr}, expected 1")));
    }
    let herm_dev = (m - m.adjoint())
        .iter()
        .map(|c| c.norm())
        .fold(0.0f64, f64::max);
    if herm_dev > 1e-10 {
        return Err(Error::NotHermitian(herm_dev));
    }
    let es = crate::numerics::eigh(m)?;
    if es.eigenvalues.first().copied().unwrap_or(0.0) < -1e-9 {
        return Err(Error::Domain(format!(
            "density has negative eigenvalue {}",
            es.eigenvalues[0]
        )));
    }
    Ok(())
}

fn check_dims(d_s: usize, d_p: usize, n_p: u32) -> Result<usize> {
    if d_s < 2 {
        return Err(Error::Domain("need at least two outcomes".into()));
    }
    if n_p == 0 {
        return Err(Error::Domain("need at least one pointer".into()));
    }
    let pointer_dim = (d_p as u128).checked_pow(n_p).ok_or_else(|| {
        Error::Resource(format!("pointer space d_p^n_p overflows ({d_p}^{n_p})"))
    })?;
    let total = pointer_dim.saturating_mul(d_s as u128);
    if total > MAX_TOTAL_DIM as u128 {
        return Err(Error::Resource(format!(
            "total dimension {total} exceeds cap {MAX_TOTAL_DIM}"
        )));
    }
    Ok(total as usize)
}

fn validate_partition_for_broadcast(d_s: usize, partition: &Partition) -> Result<usize> {
    if partition.outcomes() != d_s {
        return Err(Error::DimensionMismatch(partition.outcomes(), d_s));
    }
    let dim0 = partition.assignment[0].len();
    if partition.assignment.iter().any(|s| s.len() != dim0) {
        return Err(Error::Unsupported(
            "broadcast construction needs equal-dimension outcome subspaces".into(),
        ));
    }
    let covered: usize = partition.assignment.iter().map(|s| s.len()).sum();
    if covered != partition.pointer_dim() {
        return Err(Error::Unsupported(
            "outcome subspaces must cover the pointer space".into(),
        ));
    }
    Ok(dim0)
}

/// Per pointer level, which outcome its subspace belongs to.
fn outcome_table(partition: &Partition, d_p: usize) -> Vec<Option<usize>> {
    let mut table = vec![None; d_p];
    for (x, set) in partition.assignment.iter().enumerate() {
        for &i in set {
            table[i] = Some(x);
        }
    }
    table
}

/// If every pointer level of the product index lies in the same outcome
/// subspace, that outcome; otherwise `None`.
fn agreement_outcome(
    mut pointer_index: usize,
    d_p: usize,
    n_p: u32,
    outcome_of: &[Option<usize>],
) -> Option<usize> {
    let mut common: Option<usize> = None;
    for _ in 0..n_p {
        let level = pointer_index % d_p;
        pointer_index /= d_p;
        let x = outcome_of[level]?;
        match common {
            None => common = Some(x),
            Some(c) if c == x => {}
            _ => return None,
        }
    }
    common
}

/// Build the agreement-optimal broadcast unitary `U = V + W`: `V` swaps the
/// system index with the pointer-subspace label on the agreement subspace
/// (pairing the k-th basis vector of each subspace, both ordered by
/// descending weight), and `W` is the identity on everything else.
pub fn build_optimal_unitary(
    d_s: usize,
    partition: &Partition,
    n_p: u32,
) -> Result<BroadcastUnitary> {
    let d_p = partition.pointer_dim();
    let total = check_dims(d_s, d_p, n_p)?;
    let kappa = validate_partition_for_broadcast(d_s, partition)?;
    let pointer_dim = total / d_s;

    // T_{x,y}: k-th vector of D_y -> k-th vector of D_x
    let mut t = vec![vec![CMatrix::zeros(d_p, d_p); d_s]; d_s];
    for x in 0..d_s {
        for y in 0..d_s {
            for k in 0..kappa {
                t[x][y][(partition.assignment[x][k], partition.assignment[y][k])] =
                    Complex64::new(1.0, 0.0);
            }
        }
    }

    let outcome_of = outcome_table(partition, d_p);
    let mut u = CMatrix::zeros(total, total);
    // W: identity on the disagreement part of the pointer space
    for s in 0..d_s {
        for p in 0..pointer_dim {
            if agreement_outcome(p, d_p, n_p, &outcome_of).is_none() {
                let idx = s * pointer_dim + p;
                u[(idx, idx)] = Complex64::new(1.0, 0.0);
            }
        }
    }
    // V = sum_{x,y} |y><x| (x) T_{x,y}^(tensor n_p)
    for x in 0..d_s {
        for y in 0..d_s {
            let mut t_pow = CMatrix::identity(1, 1);
            for _ in 0..n_p {
                t_pow = t_pow.kronecker(&t[x][y]);
            }
            for (r, c) in t_pow
                .iter()
                .enumerate()
                .filter(|(_, v)| v.norm() > 0.0)
                .map(|(i, _)| (i % pointer_dim, i / pointer_dim))
            {
                // nalgebra iterates column-major: i = c * rows + r
                u[(y * pointer_dim + r, x * pointer_dim + c)] = Complex64::new(1.0, 0.0);
            }
        }
    }

    Ok(BroadcastUnitary {
        matrix: u,
        partition: partition.clone(),
        d_s,
        d_p,
        n_p,
    })
}

/// The circuit route to broadcasting for `d_P = d_S`: one generalised SWAP
/// between system and pointer 1, then generalised CNOTs from pointer 1 onto
/// the others (`|c, t> -> |c, t + c mod d>`). On pointers initialised to
/// `|0>` this realises ideal broadcasting of the computational basis.
pub fn build_broadcast_circuit(d_s: usize, n_p: u32) -> Result<BroadcastUnitary> {
    let total = check_dims(d_s, d_s, n_p)?;
    let d = d_s;
    let mut u = CMatrix::zeros(total, total);
    for input in 0..total {
        // decode |s, p_1, ..., p_n>
        let mut digits = Vec::with_capacity(n_p as usize + 1);
        let mut rest = input;
        for _ in 0..=n_p {
            digits.push(rest % d);
            rest /= d;
        }
        digits.reverse(); // digits[0] = s, digits[1..] = pointers
        let s = digits[0];
        let p1 = digits[1];
        // SWAP(system, pointer 1)
        digits[0] = p1;
        digits[1] = s;
        // CNOT(pointer 1 -> pointer i), control value is now s
        for target in digits.iter_mut().skip(2) {
            *target = (*target + s) % d;
        }
        let mut output = 0usize;
        for &v in &digits {
            output = output * d + v;
        }
        u[(output, input)] = Complex64::new(1.0, 0.0);
    }

    let levels: Vec<Vec<usize>> = (0..d).map(|x| vec![x]).collect();
    let partition = Partition::from_assignment(&ProbVector::uniform(d), levels)?;
    Ok(BroadcastUnitary {
        matrix: u,
        partition,
        d_s,
        d_p: d_s,
        n_p,
    })
}

/// Evolve an arbitrary system state (dense, possibly with coherences) and
/// product pointer state under `u`, then measure the outcome partition on
/// every pointer.
pub fn evolve_and_measure(
    u: &BroadcastUnitary,
    rho_s: &CMatrix,
    pointer_weights: &ProbVector,
    p_s: &ProbVector,
) -> Result<BroadcastStatistics> {
    if rho_s.nrows() != u.d_s || rho_s.ncols() != u.d_s {
        return Err(Error::DimensionMismatch(rho_s.nrows(), u.d_s));
    }
    if pointer_weights.len() != u.d_p {
        return Err(Error::DimensionMismatch(pointer_weights.len(), u.d_p));
    }
    if p_s.len() != u.d_s {
        return Err(Error::DimensionMismatch(p_s.len(), u.d_s));
    }
    validate_density(rho_s)?;
    let total = u.total_dim();
    let pointer_dim = total / u.d_s;

    // rho = rho_S (x) tau^(tensor n)
    let mut tau_pow = CMatrix::identity(1, 1);
    let tau = CMatrix::from_fn(u.d_p, u.d_p, |r, c| {
        if r == c {
            Complex64::new(pointer_weights[r], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    for _ in 0..u.n_p {
        tau_pow = tau_pow.kronecker(&tau);
    }
    let rho = rho_s.kronecker(&tau_pow);
    let evolved = &u.matrix * rho * u.matrix.adjoint();

    // diagonal readout: every measurement operator is diagonal here
    let d_s = u.d_s;
    let n = u.n_p as usize;
    let outcome_of = outcome_table(&u.partition, u.d_p);
    let n_tuples = d_s.pow(u.n_p);
    let mut joint = vec![0.0f64; n_tuples];
    for idx in 0..total {
        let mass = evolved[(idx, idx)].re;
        let mut pointer_part = idx % pointer_dim;
        // pointer 1 is the most significant digit
        let mut tuple_idx = 0usize;
        let mut defined = true;
        let mut digits = vec![0usize; n];
        for i in (0..n).rev() {
            digits[i] = pointer_part % u.d_p;
            pointer_part /= u.d_p;
        }
        for &level in &digits {
            match outcome_of[level] {
                Some(x) => tuple_idx = tuple_idx * d_s + x,
                None => {
                    defined = false;
                    break;
                }
            }
        }
        if defined {
            joint[tuple_idx] += mass;
        }
    }

    let mut agreement = 0.0;
    for x in 0..d_s {
        let mut idx = 0usize;
        for _ in 0..n {
            idx = idx * d_s + x;
        }
        agreement += joint[idx];
    }

    let mut local = vec![vec![0.0f64; d_s]; n];
    for (tuple_idx, &mass) in joint.iter().enumerate() {
        let mut rest = tuple_idx;
        for i in (0..n).rev() {
            local[i][rest % d_s] += mass;
            rest /= d_s;
        }
    }
    let local_probs: Vec<ProbVector> = local
        .into_iter()
        .map(|v| ProbVector::with_tolerance(v, 1e-9))
        .collect::<Result<_>>()?;
    let bias: Vec<f64> = local_probs
        .iter()
        .map(|lp| tv_slices(lp.as_slice(), p_s.as_slice()))
        .collect();

    Ok(BroadcastStatistics {
        d_s,
        n_p: u.n_p,
        off_diagonal_mass: 1.0 - agreement,
        joint,
        agreement,
        local_probs,
        bias,
    })
}

/// Evolve the diagonal system state `p_S` with the optimal unitary of the
/// given partition and measure everything.
pub fn broadcast_statistics(
    rho_s_diag: &ProbVector,
    pointer_weights: &ProbVector,
    partition: &Partition,
    n_p: u32,
) -> Result<BroadcastStatistics> {
    let u = build_optimal_unitary(rho_s_diag.len(), partition, n_p)?;
    let rho_s = CMatrix::from_fn(rho_s_diag.len(), rho_s_diag.len(), |r, c| {
        if r == c {
            Complex64::new(rho_s_diag[r], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    evolve_and_measure(&u, &rho_s, pointer_weights, rho_s_diag)
}

/// Measure how far the evolved state is from the locality/reproducibility/
/// agreement implication: with the pointer weights stored in `partition`,
/// report the worst local deviation from `p_S` and the disagreeing joint
/// mass.
pub fn ozawa_check(
    rho_s_diag: &ProbVector,
    partition: &Partition,
    n_p: u32,
) -> Result<OzawaReport> {
    let weights = ProbVector::with_tolerance(partition.weights.clone(), 1e-9)?;
    let stats = broadcast_statistics(rho_s_diag, &weights, partition, n_p)?;
    let reproducibility_defect = stats
        .bias
        .iter()
        .cloned()
        .fold(0.0f64, f64::max);
    Ok(OzawaReport {
        reproducibility_defect,
        off_diagonal_mass: stats.off_diagonal_mass,
        reproducible: reproducibility_defect <= 1e-12,
        agrees: stats.off_diagonal_mass <= 1e-12,
    })
}
