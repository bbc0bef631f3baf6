//! X-programs: the public challenge matrix, its planted secret, and their
//! text encodings.
//!
//! Row `i` of the matrix lists the qubits carrying a Pauli-X factor in the
//! `i`-th Hamiltonian term. A generated program hides a quadratic residue
//! code generator among its rows: the rows `p` with `p · s = 1` form that
//! generator for the secret `s`.

use std::fmt;

use base64::engine::general_purpose::STANDARD;
use base64::Engine;
use rand::seq::SliceRandom;

use crate::error::{check_len, Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::qr_code::{build_generator, QrParams};
use crate::rng;

/// Action angle `θ = π / denominator`, kept exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Action {
    denominator: u32,
}

impl Action {
    pub const PI_OVER_8: Action = Action { denominator: 8 };

    pub fn pi_over(denominator: u32) -> Result<Self> {
        if denominator == 0 {
            return Err(Error::Parameter("theta denominator must be positive".into()));
        }
        Ok(Self { denominator })
    }

    pub fn denominator(&self) -> u32 {
        self.denominator
    }

    pub fn radians(&self) -> f64 {
        std::f64::consts::PI / f64::from(self.denominator)
    }
}

impl Default for Action {
    fn default() -> Self {
        Self::PI_OVER_8
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "pi/{}", self.denominator)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XProgram {
    matrix: BitMatrix,
    theta: Action,
}

impl XProgram {
    /// Wraps a matrix, enforcing `m ≥ n ≥ 1` and no all-zero rows.
    pub fn new(matrix: BitMatrix, theta: Action) -> Result<Self> {
        let (m, n) = (matrix.nrows(), matrix.ncols());
        if n == 0 || m < n {
            return Err(Error::Parameter(format!(
                "an X-program needs m >= n >= 1, got m={m} n={n}"
            )));
        }
        if let Some(i) = matrix.rows().iter().position(BitVec::is_zero) {
            return Err(Error::Parameter(format!("row {i} is all zero")));
        }
        Ok(Self { matrix, theta })
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    pub fn theta(&self) -> Action {
        self.theta
    }

    /// Number of Hamiltonian terms.
    pub fn terms(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn qubits(&self) -> usize {
        self.matrix.ncols()
    }
}

/// Where a key came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeyOrigin {
    Planted { seed: u64 },
    Recovered { iterations: usize },
    Decoded,
}

/// The secret vector `s`.
///
/// Equality compares the bits only, not the origin.
#[derive(Debug, Clone)]
pub struct SecretKey {
    s: BitVec,
    pub origin: KeyOrigin,
}

impl SecretKey {
    pub fn new(s: BitVec, origin: KeyOrigin) -> Result<Self> {
        if s.is_zero() {
            return Err(Error::Parameter("secret vector must be nonzero".into()));
        }
        Ok(Self { s, origin })
    }

    pub fn bits(&self) -> &BitVec {
        &self.s
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }
}

impl PartialEq for SecretKey {
    fn eq(&self, other: &Self) -> bool {
        self.s == other.s
    }
}

impl Eq for SecretKey {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationConfig {
    pub q: usize,
    pub n: usize,
    /// Rows with `p · s = 0` appended after the code rows.
    pub extra_rows: usize,
    pub seed: u64,
    /// Apply the random column transform and row shuffle. Turning this off
    /// leaves the code block in the first `q` rows and `s = e₁`.
    pub obfuscate: bool,
}

impl GenerationConfig {
    /// Config with the default `extra_rows = q`.
    pub fn new(q: usize, n: usize, seed: u64) -> Self {
        Self {
            q,
            n,
            extra_rows: q,
            seed,
            obfuscate: true,
        }
    }

    pub fn with_extra_rows(mut self, extra_rows: usize) -> Self {
        self.extra_rows = extra_rows;
        self
    }

    fn validate(&self) -> Result<QrParams> {
        let params = QrParams::new(self.q)?;
        if self.n < params.k + 1 {
            return Err(Error::Parameter(format!(
                "n must be at least (q+1)/2 + 1 = {}, got {}",
                params.k + 1,
                self.n
            )));
        }
        if self.extra_rows < self.n - params.k {
            return Err(Error::Parameter(format!(
                "extra_rows must be at least n - (q+1)/2 = {} for full column rank",
                self.n - params.k
            )));
        }
        Ok(params)
    }
}

const MAX_DECOY_ATTEMPTS: usize = 1000;

/// Generates a program with a planted QR code and returns it with its key.
pub fn generate(cfg: &GenerationConfig) -> Result<(XProgram, SecretKey)> {
    let params = cfg.validate()?;
    let (q, k, n) = (params.q, params.k, cfg.n);
    let mut rng = rng::seeded(cfg.seed);
    let generator = build_generator(q)?;

    // Code block: basis columns (all-ones first), then random codewords.
    let mut columns = generator.basis();
    for _ in k..n {
        let message = BitVec::random(k, &mut rng);
        columns.push(generator.encode(&message)?);
    }
    let code_rows = BitMatrix::from_columns(&columns, q)?.into_rows();

    let decoy = |rng: &mut rng::DetRng| loop {
        let mut row = BitVec::random(n, rng);
        row.set(0, false);
        if !row.is_zero() {
            break row;
        }
    };
    let mut plain = None;
    for _ in 0..MAX_DECOY_ATTEMPTS {
        let mut rows = code_rows.clone();
        rows.extend((0..cfg.extra_rows).map(|_| decoy(&mut rng)));
        let candidate = BitMatrix::from_rows(rows, n)?;
        if candidate.rank() == n {
            plain = Some(candidate);
            break;
        }
    }
    let plain = plain.ok_or_else(|| {
        Error::Parameter(format!("no full-rank decoy set found in {MAX_DECOY_ATTEMPTS} attempts"))
    })?;

    let s0 = BitVec::unit(n, 0);
    let (matrix, s) = if cfg.obfuscate {
        let t = BitMatrix::random_invertible(n, &mut rng);
        let s = t.invert()?.mat_vec(&s0)?;
        let mut rows = plain
            .rows()
            .iter()
            .map(|p| t.vec_mat(p))
            .collect::<Result<Vec<_>>>()?;
        rows.shuffle(&mut rng);
        (BitMatrix::from_rows(rows, n)?, s)
    } else {
        (plain, s0)
    };

    let program = XProgram::new(matrix, Action::PI_OVER_8)?;
    let key = SecretKey::new(s, KeyOrigin::Planted { seed: cfg.seed })?;
    Ok((program, key))
}

/// `P_x`: the rows `p` of `p_matrix` with `p · x = 1`, order preserved.
pub fn extract_submatrix(p_matrix: &BitMatrix, x: &BitVec) -> Result<BitMatrix> {
    p_matrix.rows_not_orthogonal_to(x)
}

const HEADER: &str = "xprogram v1";

/// Text form: a version line, a dimensions line, then one `0`/`1` row per line.
pub fn serialize(prog: &XProgram) -> String {
    let mut out = String::with_capacity(prog.terms() * (prog.qubits() + 1) + 64);
    out.push_str(HEADER);
    out.push('\n');
    out.push_str(&format!(
        "m={} n={} theta={}\n",
        prog.terms(),
        prog.qubits(),
        prog.theta()
    ));
    for r in prog.matrix().rows() {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    out
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn deserialize(text: &str) -> Result<XProgram> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    match lines.next() {
        Some((_, l)) if l == HEADER => {}
        Some((i, l)) => return Err(parse_err(i, format!("expected {HEADER:?}, found {l:?}"))),
        None => return Err(parse_err(1, "empty input")),
    }
    let (dims_line, dims) = lines.next().ok_or_else(|| parse_err(2, "missing dimensions line"))?;
    let (m, n, theta) = parse_dims(dims).map_err(|e| parse_err(dims_line, e))?;

    let mut rows = Vec::with_capacity(m);
    for (line, l) in lines {
        if rows.len() == m {
            if l.is_empty() {
                continue;
            }
            return Err(parse_err(line, format!("more than m={m} rows")));
        }
        if l.len() != n {
            return Err(parse_err(line, format!("expected {n} columns, found {}", l.len())));
        }
        let row: BitVec = l.parse().map_err(|e: Error| parse_err(line, e.to_string()))?;
        if row.is_zero() {
            return Err(parse_err(line, "all-zero row"));
        }
        rows.push(row);
    }
    if rows.len() != m {
        return Err(parse_err(2, format!("header declares m={m} rows, found {}", rows.len())));
    }
    let matrix = BitMatrix::from_rows(rows, n)?;
    XProgram::new(matrix, theta).map_err(|e| parse_err(2, e.to_string()))
}

fn parse_dims(line: &str) -> std::result::Result<(usize, usize, Action), String> {
    let fields: Vec<&str> = line.split(' ').collect();
    let [m, n, theta] = fields.as_slice() else {
        return Err(format!("expected `m=<m> n=<n> theta=pi/<d>`, found {line:?}"));
    };
    let num = |field: &str, key: &str| -> std::result::Result<usize, String> {
        field
            .strip_prefix(key)
            .ok_or_else(|| format!("expected {key}<decimal>, found {field:?}"))?
            .parse()
            .map_err(|e| format!("{key}: {e}"))
    };
    let m = num(m, "m=")?;
    let n = num(n, "n=")?;
    let d: u32 = theta
        .strip_prefix("theta=pi/")
        .ok_or_else(|| format!("expected theta=pi/<decimal>, found {theta:?}"))?
        .parse()
        .map_err(|e| format!("theta: {e}"))?;
    let theta = Action::pi_over(d).map_err(|e| e.to_string())?;
    Ok((m, n, theta))
}

/// Base64 (standard alphabet, padded) of the MSB-first packed key bits.
pub fn encode_key(key: &SecretKey) -> String {
    STANDARD.encode(key.bits().to_bytes_msb())
}

/// Decodes an `n`-bit key. Surrounding whitespace is ignored.
pub fn decode_key(text: &str, n: usize) -> Result<SecretKey> {
    let bytes = STANDARD
        .decode(text.trim())
        .map_err(|e| Error::Format(format!("invalid base64: {e}")))?;
    let s = BitVec::from_bytes_msb(&bytes, n)?;
    SecretKey::new(s, KeyOrigin::Decoded)
}

/// Sample files: one `0`/`1` line per sample.
pub fn serialize_samples(samples: &[BitVec]) -> String {
    let mut out = String::new();
    for s in samples {
        out.push_str(&s.to_string());
        out.push('\n');
    }
    out
}

/// Parses a sample file; every sample must have `n` bits.
pub fn deserialize_samples(text: &str, n: usize) -> Result<Vec<BitVec>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| {
            let v: BitVec = l.parse().map_err(|e: Error| parse_err(i + 1, e.to_string()))?;
            check_len(n, v.len()).map_err(|e| parse_err(i + 1, e.to_string()))?;
            Ok(v)
        })
        .collect()
}
