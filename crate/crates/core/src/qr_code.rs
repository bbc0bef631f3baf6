//! Binary quadratic residue codes of prime length `q ≡ 7 (mod 8)`.
//!
//! For these lengths 2 is a quadratic residue, so the residue indicator
//! vector generates a cyclic code of dimension `(q+1)/2`. The code contains
//! the all-ones word and every codeword has weight `≡ 0` or `3 (mod 4)`.

use std::collections::BTreeSet;

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};

/// Default number of random encodings tried by [`looks_like_qr_code`].
pub const DEFAULT_QR_TRIALS: usize = 64;

pub fn is_prime(q: usize) -> bool {
    if q < 2 {
        return false;
    }
    if q.is_multiple_of(2) {
        return q == 2;
    }
    let mut d = 3;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Whether `q` is a valid code length: an odd prime with `q ≡ 7 (mod 8)`.
pub fn is_qr_length(q: usize) -> bool {
    q % 8 == 7 && is_prime(q)
}

/// Nonzero quadratic residues modulo an odd prime `q`.
pub fn quadratic_residues(q: usize) -> Result<BTreeSet<usize>> {
    if q < 3 || !is_prime(q) {
        return Err(Error::Parameter(format!("{q} is not an odd prime")));
    }
    Ok((1..=(q - 1) / 2).map(|a| a * a % q).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QrParams {
    pub q: usize,
    pub k: usize,
    pub residues: BTreeSet<usize>,
}

impl QrParams {
    pub fn new(q: usize) -> Result<Self> {
        if !is_qr_length(q) {
            return Err(Error::Parameter(format!(
                "code length must be a prime congruent to 7 mod 8, got {q}"
            )));
        }
        Ok(Self {
            q,
            k: q.div_ceil(2),
            residues: quadratic_residues(q)?,
        })
    }

    /// Indicator vector of the residues, bit `i` set iff `i` is a residue.
    pub fn residue_indicator(&self) -> BitVec {
        BitVec::from_fn(self.q, |i| self.residues.contains(&i))
    }
}

/// A `q × k` matrix whose columns are a basis of the QR code, the first
/// column being the all-ones word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QrGenerator {
    pub params: QrParams,
    pub columns: BitMatrix,
}

impl QrGenerator {
    /// Basis vectors (the columns), all-ones first.
    pub fn basis(&self) -> Vec<BitVec> {
        (0..self.params.k).map(|j| self.columns.column(j)).collect()
    }

    /// Encodes a length-`k` message.
    pub fn encode(&self, message: &BitVec) -> Result<BitVec> {
        self.columns.mat_vec(message)
    }
}

/// Incremental echelon basis used to pick independent vectors.
struct EchelonBasis {
    // (pivot bit, reduced vector)
    rows: Vec<(usize, BitVec)>,
}

impl EchelonBasis {
    fn new() -> Self {
        Self { rows: Vec::new() }
    }

    /// Inserts `v` if it is independent of what is already held.
    fn insert(&mut self, v: &BitVec) -> bool {
        let mut r = v.clone();
        for (pivot, b) in &self.rows {
            if r.get(*pivot) {
                r.add_into(b).expect("equal lengths");
            }
        }
        match r.first_one() {
            Some(p) => {
                self.rows.push((p, r));
                true
            }
            None => false,
        }
    }
}

pub fn build_generator(q: usize) -> Result<QrGenerator> {
    let params = QrParams::new(q)?;
    let chi = params.residue_indicator();
    let shift = |t: usize| BitVec::from_fn(q, |i| chi.get((i + q - t) % q));

    let mut echelon = EchelonBasis::new();
    let mut basis = vec![BitVec::ones(q)];
    echelon.insert(&basis[0]);
    for t in 0..q {
        if basis.len() == params.k {
            break;
        }
        let s = shift(t);
        if echelon.insert(&s) {
            basis.push(s);
        }
    }
    assert_eq!(
        basis.len(),
        params.k,
        "cyclic shifts of the residue indicator must span dimension (q+1)/2"
    );
    let columns = BitMatrix::from_columns(&basis, q)?;
    debug_assert_eq!(columns.rank(), params.k);
    Ok(QrGenerator { params, columns })
}

/// True iff `wt(c) ≡ 0` or `3 (mod 4)`.
pub fn weight_check(c: &BitVec) -> bool {
    matches!(c.count_ones() % 4, 0 | 3)
}

/// Randomized test of whether `sub` generates a QR code (up to row order):
/// its row count is a prime `q ≡ 7 (mod 8)`, its rank is `(q+1)/2`, and
/// `trials` random encodings `sub·d` all pass [`weight_check`].
pub fn looks_like_qr_code<R: Rng + ?Sized>(sub: &BitMatrix, trials: usize, rng: &mut R) -> bool {
    let q = sub.nrows();
    if !is_qr_length(q) {
        return false;
    }
    if sub.rank() != q.div_ceil(2) {
        return false;
    }
    (0..trials).all(|_| {
        let d = BitVec::random(sub.ncols(), rng);
        weight_check(&sub.mat_vec(&d).expect("d sized to sub"))
    })
}
