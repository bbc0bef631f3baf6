//! Secret-key extraction from the public X-program.
//!
//! Fix a random `d`. For each fresh random `e`, the vector
//! `m* ⊕ Σ_{p·d = p·e = 1} p` (with `m*` the XOR of all rows) has inner
//! product 1 with `s` for every `e` whenever the encoding `P_s·d` has even
//! parity, which happens for half of all `d`. Stacking `2n` such rows into
//! `M` and solving `M·x = 1` then leaves `s` among a handful of candidates,
//! and the one whose submatrix looks like a QR code is returned.

use std::time::{Duration, Instant};

use rand::Rng;

use crate::error::{check_len, Result};
use crate::gf2::{BitMatrix, BitVec, SolutionOrder, SolveOutcome, DEFAULT_CANDIDATE_CAP};
use crate::protocol::quantum_bias;
use crate::qr_code::{is_qr_length, looks_like_qr_code, DEFAULT_QR_TRIALS};
use crate::rng;
use crate::xprogram::{extract_submatrix, KeyOrigin, SecretKey, XProgram};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackConfig {
    /// Rows of `M`; `None` means `2n`.
    pub rows_per_system: Option<usize>,
    pub max_iterations: usize,
    pub candidate_cap: usize,
    pub qr_trials: usize,
    pub seed: u64,
}

impl Default for AttackConfig {
    fn default() -> Self {
        Self {
            rows_per_system: None,
            max_iterations: 64,
            candidate_cap: DEFAULT_CANDIDATE_CAP,
            qr_trials: DEFAULT_QR_TRIALS,
            seed: 0,
        }
    }
}

impl AttackConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    fn rows_for(&self, n: usize) -> usize {
        self.rows_per_system.unwrap_or(2 * n).max(1)
    }
}

/// What one pass of the extraction did.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IterationStats {
    pub rank_of_m: usize,
    /// `n - rank(M)`.
    pub kernel_dim: usize,
    pub candidates_checked: usize,
    /// Some candidate passed the QR test.
    pub d_was_good: bool,
    /// `M·x = 1` had a solution.
    pub feasible: bool,
    /// The solution coset was larger than the candidate cap and was skipped.
    pub truncated: bool,
    /// Candidates passing the QR test, counting the whole coset.
    pub passing_candidates: usize,
}

#[derive(Debug, Clone)]
pub struct AttackReport {
    pub key: Option<SecretKey>,
    pub iterations: Vec<IterationStats>,
    pub total_candidates_checked: usize,
    pub wall_time: Duration,
    /// More than one candidate passed in the successful iteration.
    pub ambiguous: bool,
}

impl AttackReport {
    pub fn succeeded(&self) -> bool {
        self.key.is_some()
    }

    /// Stats of the iteration that produced the key.
    pub fn winning_iteration(&self) -> Option<&IterationStats> {
        self.key.as_ref().and_then(|_| self.iterations.last())
    }
}

/// XOR of all rows of `p`.
pub fn m_star(p: &BitMatrix) -> BitVec {
    p.row_sum()
}

/// `m* ⊕ Σ p` over the rows `p` with `p·d = p·e = 1`.
pub fn correlated_row(p: &BitMatrix, m_star: &BitVec, d: &BitVec, e: &BitVec) -> Result<BitVec> {
    check_len(p.ncols(), m_star.len())?;
    let p_d = p.rows_not_orthogonal_to(d)?;
    correlated_row_from(&p_d, m_star, e)
}

fn correlated_row_from(p_d: &BitMatrix, m_star: &BitVec, e: &BitVec) -> Result<BitVec> {
    let mut row = p_d.vec_mat(&p_d.mat_vec(e)?)?;
    row.add_into(m_star)?;
    Ok(row)
}

/// One pass with a freshly drawn `d`.
pub fn extract_key_once<R: Rng + ?Sized>(
    prog: &XProgram,
    cfg: &AttackConfig,
    rng: &mut R,
) -> (Option<SecretKey>, IterationStats) {
    let d = BitVec::random(prog.qubits(), rng);
    extract_key_with_d(prog, cfg, &d, rng)
}

/// One pass with a caller-chosen `d`.
///
/// # Panics
/// Panics if `d.len()` differs from the program's column count.
pub fn extract_key_with_d<R: Rng + ?Sized>(
    prog: &XProgram,
    cfg: &AttackConfig,
    d: &BitVec,
    rng: &mut R,
) -> (Option<SecretKey>, IterationStats) {
    let p = prog.matrix();
    let n = p.ncols();
    let m_star = m_star(p);
    let p_d = p.rows_not_orthogonal_to(d).expect("d must have one bit per column");

    let rows = (0..cfg.rows_for(n))
        .map(|_| {
            let e = BitVec::random(n, rng);
            correlated_row_from(&p_d, &m_star, &e).expect("sizes fixed by p")
        })
        .collect();
    let m = BitMatrix::from_rows(rows, n).expect("rows of length n");
    let ones = BitVec::ones(m.nrows());

    let mut stats = IterationStats {
        rank_of_m: 0,
        kernel_dim: 0,
        candidates_checked: 0,
        d_was_good: false,
        feasible: false,
        truncated: false,
        passing_candidates: 0,
    };
    let solution = match m.solve_affine(&ones).expect("rhs sized to M") {
        SolveOutcome::Infeasible { rank } => {
            stats.rank_of_m = rank;
            stats.kernel_dim = n - rank;
            return (None, stats);
        }
        SolveOutcome::Solved(sol) => sol,
    };
    stats.rank_of_m = solution.rank;
    stats.kernel_dim = solution.solution_count_log2();
    stats.feasible = true;
    if solution.exceeds(cfg.candidate_cap) {
        stats.truncated = true;
        return (None, stats);
    }

    let mut found = None;
    for candidate in solution.iter(SolutionOrder::ByWeight) {
        if found.is_none() {
            stats.candidates_checked += 1;
        }
        if passes_key_check(p, &candidate, cfg.qr_trials, rng) {
            stats.passing_candidates += 1;
            found.get_or_insert(candidate);
        }
    }
    stats.d_was_good = found.is_some();
    let key = found.map(|s| SecretKey::new(s, KeyOrigin::Recovered { iterations: 1 }).expect("zero rejected"));
    (key, stats)
}

fn passes_key_check<R: Rng + ?Sized>(p: &BitMatrix, candidate: &BitVec, trials: usize, rng: &mut R) -> bool {
    if candidate.is_zero() {
        return false;
    }
    let sub = extract_submatrix(p, candidate).expect("candidate sized to p");
    is_qr_length(sub.nrows()) && looks_like_qr_code(&sub, trials, rng)
}

/// Repeats [`extract_key_once`] until it succeeds or `max_iterations` passes
/// have failed.
pub fn extract_key(prog: &XProgram, cfg: &AttackConfig) -> AttackReport {
    let mut rng = rng::seeded(cfg.seed);
    let start = Instant::now();
    let mut iterations = Vec::new();
    let mut key = None;
    for i in 0..cfg.max_iterations.max(1) {
        let (found, stats) = extract_key_once(prog, cfg, &mut rng);
        iterations.push(stats);
        if let Some(mut k) = found {
            k.origin = KeyOrigin::Recovered { iterations: i + 1 };
            key = Some(k);
            break;
        }
    }
    let wall_time = start.elapsed();
    let ambiguous = key.is_some() && iterations.last().is_some_and(|s| s.passing_candidates > 1);
    AttackReport {
        total_candidates_checked: iterations.iter().map(|s| s.candidates_checked).sum(),
        key,
        iterations,
        wall_time,
        ambiguous,
    }
}

/// Samples with the honest prover's bias: orthogonal to `s` with
/// probability `cos²(π/8)`, otherwise uniform on the other side.
pub fn forge_samples<R: Rng + ?Sized>(
    prog: &XProgram,
    key: &SecretKey,
    count: usize,
    rng: &mut R,
) -> Result<Vec<BitVec>> {
    let n = prog.qubits();
    check_len(n, key.len())?;
    let s = key.bits();
    let pivot = s.first_one().expect("keys are nonzero");
    let bias = quantum_bias();
    Ok((0..count)
        .map(|_| {
            let mut x = BitVec::random(n, rng);
            let want_one = !rng.random_bool(bias);
            if x.dot(s).expect("equal lengths") != want_one {
                x.flip(pivot);
            }
            x
        })
        .collect())
}
