//! Seeded sampling of primes of `F_q[T]`: congruence counts of random primes,
//! exhaustive censuses in small degree, and counterexample hunting.
//!
//! # Random streams
//!
//! Every random choice comes from SplitMix64 (state `s`, step
//! `s += 0x9E3779B97F4A7C15`, output `z = s; z = (z ^ (z >> 30)) *
//! 0xBF58476D1CE4E5B9; z = (z ^ (z >> 27)) * 0x94D049BB133111EB;
//! z ^ (z >> 31)`). Sample `j` of a run with seed `S` draws from its own
//! stream seeded with [`substream_seed`]`(S, j)`, the first output of
//! SplitMix64 started at `S ^ (j * 0xD1B54A32D192ED03)`. Streams for
//! different degrees of one table are keyed by `substream_seed(S, d)` first.
//! Samples are therefore independent of scheduling and thread count.
//!
//! A uniform value in `[0, b)` is drawn by rejection: outputs at or above
//! the largest multiple of `b` below `2^64` are discarded, then reduced
//! mod `b`.

use std::io::Write;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::carlitz::beta_gamma_mod;
use crate::error::{Error, Result};
use crate::fields::{FieldSpec, FqElem};
use crate::polyring::{enumerate_monic, monic_count, Poly, ResidueCtx, Var};
use crate::vandiver::{check_kv, Certificate};

/// Draw cap for [`random_monic_irreducible`].
pub const MAX_DRAWS: u64 = 1_000_000;

/// Largest `q^d` that [`census`] enumerates.
pub const CENSUS_LIMIT: u64 = 50_000_000;

/// Seed of the `j`-th substream of a run seeded with `seed`.
pub fn substream_seed(seed: u64, j: u64) -> u64 {
    SplitMix64::seed_from_u64(seed ^ j.wrapping_mul(0xD1B5_4A32_D192_ED03)).next_u64()
}

/// The generator for sample `j`.
pub fn substream(seed: u64, j: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(substream_seed(seed, j))
}

/// Uniform integer in `[0, bound)`, `bound >= 1`.
pub fn uniform_below(rng: &mut impl RngCore, bound: u64) -> u64 {
    assert!(bound > 0);
    let zone = u64::MAX - (u64::MAX % bound + 1) % bound;
    loop {
        let x = rng.next_u64();
        if x <= zone {
            return x % bound;
        }
    }
}

/// A sampled prime together with how many candidates were drawn.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Draw {
    pub prime: Poly,
    /// Uniform monic candidates drawn, including the accepted one.
    pub draws: u64,
    /// Irreducible candidates discarded because `i = 0`.
    pub i_zero_rejected: u64,
}

/// Rejection-samples a uniform monic irreducible of degree `d`, optionally
/// conditioned on `i(P) != 0`.
pub fn random_monic_irreducible(
    field: &Arc<FieldSpec>,
    d: usize,
    rng: &mut impl RngCore,
    require_i_nonzero: bool,
) -> Result<Draw> {
    if d == 0 {
        return Err(Error::Precondition("degree must be at least 1".into()));
    }
    let q = field.q() as u64;
    let mut i_zero_rejected = 0;
    for draws in 1..=MAX_DRAWS {
        let mut coeffs: Vec<FqElem> = (0..d)
            .map(|_| field.from_code(uniform_below(rng, q) as u32).unwrap())
            .collect();
        coeffs.push(FqElem::ONE);
        let cand = Poly::new(field.clone(), coeffs, Var::T);
        if !cand.is_irreducible()? {
            continue;
        }
        if require_i_nonzero && cand.i_value()? == 0 {
            i_zero_rejected += 1;
            continue;
        }
        return Ok(Draw {
            prime: cand,
            draws,
            i_zero_rejected,
        });
    }
    Err(Error::Budget(format!(
        "no irreducible of degree {d} in {MAX_DRAWS} draws"
    )))
}

/// How the exponent `n` is chosen.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExponentChoice {
    /// A fixed `n` (decimal string in JSON).
    N(String),
    /// `n = m (q^d - 1)/(q - 1)` with `1 <= m < q - 1` and `(q-1) ∤ m d`.
    M(u64),
}

/// Parameters of a sampling run.
#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub field: Arc<FieldSpec>,
    pub d: usize,
    pub exponent: ExponentChoice,
    pub samples: u64,
    pub seed: u64,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl SearchConfig {
    pub fn new(
        field: Arc<FieldSpec>,
        d: usize,
        exponent: ExponentChoice,
        samples: u64,
        seed: u64,
    ) -> Result<SearchConfig> {
        if d == 0 {
            return Err(Error::Config("degree must be at least 1".into()));
        }
        let config = SearchConfig {
            field,
            d,
            exponent,
            samples,
            seed,
            threads: None,
        };
        config.n()?;
        Ok(config)
    }

    pub fn with_threads(mut self, threads: Option<usize>) -> SearchConfig {
        self.threads = threads;
        self
    }

    /// The exponent `n`.
    pub fn n(&self) -> Result<BigUint> {
        match &self.exponent {
            ExponentChoice::N(text) => {
                let n = BigUint::parse_bytes(text.as_bytes(), 10)
                    .ok_or_else(|| Error::Config(format!("n = {text} is not a decimal integer")))?;
                if n.is_zero() {
                    return Err(Error::Config("n must be at least 1".into()));
                }
                Ok(n)
            }
            ExponentChoice::M(m) => n_from_m(&self.field, self.d, *m),
        }
    }

    /// JSON echo for run headers.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "q": self.field.q(),
            "field_modulus": self.field.modulus_text(),
            "d": self.d,
            "exponent": self.exponent,
            "n": self.n().map(|n| n.to_string()).ok(),
            "samples": self.samples,
            "seed": self.seed.to_string(),
        })
    }
}

/// `m (q^d - 1)/(q - 1)`, checking `1 <= m < q - 1` and `(q-1) ∤ m d`.
pub fn n_from_m(field: &FieldSpec, d: usize, m: u64) -> Result<BigUint> {
    let q1 = field.q() as u64 - 1;
    if m == 0 || m >= q1 {
        return Err(Error::Config(format!(
            "m = {m} must satisfy 1 <= m < q-1 = {q1}"
        )));
    }
    if (m * d as u64).is_multiple_of(q1) {
        return Err(Error::Config(format!(
            "q-1 = {q1} divides m*d = {}",
            m * d as u64
        )));
    }
    Ok((monic_count(field, d) - 1u32) / q1 * m)
}

/// Runs `f` on a dedicated pool of `threads` workers, or on the global pool.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(Error::Config("thread count must be at least 1".into())),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Congruence counts for one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub d: usize,
    pub samples: u64,
    /// `P | beta(n)`
    pub count_beta: u64,
    /// `P | gamma(n)`
    pub count_gamma: u64,
    pub count_both: u64,
    /// Irreducible draws discarded because `i(P) = 0`.
    pub count_i_zero_rejected: u64,
}

/// One sampled prime of a table run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableSample {
    pub prime: Poly,
    pub beta_zero: bool,
    pub gamma_zero: bool,
    pub i_zero_rejected: u64,
}

/// Samples primes with `i(P) != 0` of degree `d` and tests them at
/// `n = (q^d - 1)/2`; returned in sample order.
pub fn table1_samples(
    field: &Arc<FieldSpec>,
    d: usize,
    samples: u64,
    seed: u64,
) -> Result<Vec<TableSample>> {
    let q = field.q() as u64;
    if q.is_multiple_of(2) {
        return Err(Error::Config("the (q^d-1)/2 exponent needs odd q".into()));
    }
    let n = n_from_m(field, d, (q - 1) / 2)?;
    let degree_seed = substream_seed(seed, d as u64);
    (0..samples)
        .into_par_iter()
        .map(|j| {
            let mut rng = substream(degree_seed, j);
            let draw = random_monic_irreducible(field, d, &mut rng, true)?;
            let (b, g) = beta_gamma_mod(&n, &ResidueCtx::new(&draw.prime)?)?;
            Ok(TableSample {
                prime: draw.prime,
                beta_zero: b.is_zero(),
                gamma_zero: g.is_zero(),
                i_zero_rejected: draw.i_zero_rejected,
            })
        })
        .collect()
}

/// One congruence-count row for each degree.
pub fn run_table1(
    field: &Arc<FieldSpec>,
    degrees: &[usize],
    samples: u64,
    seed: u64,
    threads: Option<usize>,
) -> Result<Vec<TableRow>> {
    with_threads(threads, || {
        degrees
            .iter()
            .map(|&d| {
                let rows = table1_samples(field, d, samples, seed)?;
                let count =
                    |f: &dyn Fn(&TableSample) -> bool| rows.iter().filter(|r| f(r)).count() as u64;
                let row = TableRow {
                    d,
                    samples,
                    count_beta: count(&|r| r.beta_zero),
                    count_gamma: count(&|r| r.gamma_zero),
                    count_both: count(&|r| r.beta_zero && r.gamma_zero),
                    count_i_zero_rejected: rows.iter().map(|r| r.i_zero_rejected).sum(),
                };
                if row.count_both > row.count_beta.min(row.count_gamma)
                    || row.count_beta.max(row.count_gamma) > samples
                {
                    return Err(Error::Invariant(format!("inconsistent counts {row:?}")));
                }
                log::info!("degree {d}: {samples} samples done");
                Ok(row)
            })
            .collect()
    })?
}

/// One prime of a census.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusEntry {
    pub prime: Poly,
    pub beta_divisible: bool,
    pub gamma_divisible: bool,
}

/// Every monic irreducible `P` of degree `d` with `i(P) != 0`, with
/// `P | beta(n)` and `P | gamma(n)` at `n = m (q^d-1)/(q-1)`, in
/// enumeration order.
pub fn census(field: &Arc<FieldSpec>, d: usize, m: u64) -> Result<Vec<CensusEntry>> {
    let n = n_from_m(field, d, m)?;
    match monic_count(field, d).to_u64() {
        Some(c) if c <= CENSUS_LIMIT => {}
        _ => {
            return Err(Error::Budget(format!(
                "q^d exceeds the census limit {CENSUS_LIMIT}"
            )))
        }
    }
    let candidates: Vec<Poly> = enumerate_monic(field, d, Var::T).collect();
    candidates
        .into_par_iter()
        .filter_map(|p| match (p.is_irreducible(), p.i_value()) {
            (Ok(true), Ok(i)) if i != 0 => Some(p),
            _ => None,
        })
        .map(|p| {
            let (b, g) = beta_gamma_mod(&n, &ResidueCtx::new(&p)?)?;
            Ok(CensusEntry {
                prime: p,
                beta_divisible: b.is_zero(),
                gamma_divisible: g.is_zero(),
            })
        })
        .collect()
}

/// Totals of a hunt.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HuntSummary {
    pub samples: u64,
    pub counterexamples: u64,
    pub i_zero_rejected: u64,
}

/// Number of samples evaluated in parallel before results are emitted.
const HUNT_CHUNK: u64 = 256;

/// Samples primes of degree `config.d` with `i(P) != 0`, evaluates the
/// criterion at the configured `n`, and passes each counterexample
/// certificate to `emit` in sample order.
pub fn hunt(
    config: &SearchConfig,
    mut emit: impl FnMut(Certificate) -> Result<()> + Send,
) -> Result<HuntSummary> {
    let n = config.n()?;
    with_threads(config.threads, move || {
        let mut summary = HuntSummary::default();
        let mut start = 0;
        while start < config.samples {
            let end = (start + HUNT_CHUNK).min(config.samples);
            let results: Vec<Result<(Option<Certificate>, u64)>> = (start..end)
                .into_par_iter()
                .map(|j| {
                    let mut rng = substream(config.seed, j);
                    let draw = random_monic_irreducible(&config.field, config.d, &mut rng, true)?;
                    let cert = check_kv(&draw.prime, &n)?;
                    Ok((
                        cert.is_counterexample().then_some(cert),
                        draw.i_zero_rejected,
                    ))
                })
                .collect();
            for r in results {
                let (cert, rejected) = r?;
                summary.samples += 1;
                summary.i_zero_rejected += rejected;
                if let Some(c) = cert {
                    summary.counterexamples += 1;
                    emit(c)?;
                }
            }
            log::info!(
                "hunt: {end}/{} samples, {} counterexamples",
                config.samples,
                summary.counterexamples
            );
            start = end;
        }
        Ok(summary)
    })?
}

/// First line of a JSONL run file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunHeader {
    pub record: String,
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: serde_json::Value,
    pub seed: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl RunHeader {
    pub fn new(command: &str, config: serde_json::Value, seed: u64) -> RunHeader {
        let timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        RunHeader {
            record: "header".into(),
            tool: "kvcert".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config,
            seed: seed.to_string(),
            timestamp,
        }
    }
}

/// Writes a header followed by one JSON object per record.
pub fn write_jsonl<T: Serialize>(
    out: &mut impl Write,
    header: &RunHeader,
    records: &[T],
) -> std::io::Result<()> {
    writeln!(out, "{}", serde_json::to_string(header)?)?;
    for r in records {
        writeln!(out, "{}", serde_json::to_string(r)?)?;
    }
    Ok(())
}

/// Certificates contained in a JSONL run file (header and other records
/// are skipped).
pub fn read_certificates(text: &str) -> Result<Vec<Certificate>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let value: serde_json::Value = serde_json::from_str(line).map_err(|e| Error::Parse {
            pos: lineno + 1,
            msg: e.to_string(),
        })?;
        if value.get("verdict").is_some() {
            out.push(serde_json::from_value(value).map_err(|e| Error::Parse {
                pos: lineno + 1,
                msg: e.to_string(),
            })?);
        }
    }
    Ok(out)
}
