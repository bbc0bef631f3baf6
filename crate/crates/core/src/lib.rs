//! Key extraction and sample forging for IQP "X-program" quantum tests.
//!
//! The crate covers both sides of the protocol: generating X-programs with a
//! hidden quadratic residue code, checking samples against the secret,
//! simulating small instances exactly, and recovering the secret from the
//! public matrix alone.

pub mod attack;
pub mod bench;
pub mod error;
pub mod gf2;
pub mod protocol;
pub mod qr_code;
pub mod rng;
pub mod xprogram;

pub use attack::{extract_key, extract_key_once, forge_samples, AttackConfig, AttackReport, IterationStats};
pub use error::{Error, Result};
pub use gf2::{AffineSolution, BitMatrix, BitVec, SolveOutcome};
pub use protocol::{baseline_sample, quantum_amplitudes, quantum_sample, verify, Verdict, VerifierPolicy};
pub use qr_code::{build_generator, looks_like_qr_code, QrGenerator, QrParams};
pub use xprogram::{
    decode_key, deserialize, encode_key, extract_submatrix, generate, serialize, Action, GenerationConfig, KeyOrigin,
    SecretKey, XProgram,
};
