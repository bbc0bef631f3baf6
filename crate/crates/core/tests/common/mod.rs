//! Unpacked reference implementations used as independent oracles.
#![allow(dead_code)]

use std::collections::BTreeSet;

use iqp_forge::{BitMatrix, BitVec};

pub type Dense = Vec<Vec<u8>>;

pub fn dense(m: &BitMatrix) -> Dense {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m.get(i, j) as u8).collect())
        .collect()
}

pub fn bits(v: &BitVec) -> Vec<u8> {
    (0..v.len()).map(|i| v.get(i) as u8).collect()
}

/// Rank by schoolbook elimination on one byte per entry.
pub fn naive_rank(rows: &Dense) -> usize {
    let mut a = rows.clone();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&i| a[i][c] == 1) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != rank && row[c] == 1 {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn naive_mat_vec(a: &Dense, x: &[u8]) -> Vec<u8> {
    a.iter()
        .map(|r| r.iter().zip(x).fold(0, |acc, (p, q)| acc ^ (p & q)))
        .collect()
}

pub fn naive_dot(a: &[u8], b: &[u8]) -> u8 {
    a.iter().zip(b).fold(0, |acc, (x, y)| acc ^ (x & y))
}

/// `A x = b` is solvable iff appending `b` as a column keeps the rank.
pub fn naive_feasible(a: &Dense, b: &[u8]) -> bool {
    let aug: Dense = a.iter().zip(b).map(|(r, &bi)| {
        let mut r = r.clone();
        r.push(bi);
        r
    }).collect();
    naive_rank(a) == naive_rank(&aug)
}

/// All solutions of `A x = b` by trying every `x` (small `n` only).
pub fn brute_force_solutions(a: &Dense, b: &[u8], n: usize) -> BTreeSet<Vec<u8>> {
    (0u64..1 << n)
        .map(|m| (0..n).map(|j| ((m >> j) & 1) as u8).collect::<Vec<u8>>())
        .filter(|x| naive_mat_vec(a, x) == b)
        .collect()
}

/// Quadratic residues mod `q`, computed by scanning every nonzero `a`.
pub fn residues_by_scan(q: usize) -> BTreeSet<usize> {
    (1..q).map(|a| a * a % q).collect()
}

/// Span of the cyclic shifts of the residue indicator, as `q`-bit masks
/// (closure under XOR, `q < 64`).
pub fn qr_span_brute_force(q: usize) -> BTreeSet<u64> {
    let res = residues_by_scan(q);
    let chi: u64 = res.iter().map(|&r| 1u64 << r).sum();
    let full = (1u64 << q) - 1;
    let rotate = |v: u64, t: usize| ((v << t) | (v >> (q - t))) & full;
    let mut span = BTreeSet::from([0u64]);
    for t in 0..q {
        let g = if t == 0 { chi } else { rotate(chi, t) };
        if span.contains(&g) {
            continue;
        }
        let shifted: Vec<u64> = span.iter().map(|x| x ^ g).collect();
        span.extend(shifted);
    }
    span
}

pub fn mask_of(v: &BitVec) -> u64 {
    v.iter_ones().map(|i| 1u64 << i).sum()
}
