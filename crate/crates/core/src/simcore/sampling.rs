use std::collections::BTreeMap;

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

use super::{bitstring, check_register, parse_bitstring, PauliObservable, Statevector};

/// Readout-level noise: the outcome distribution is mixed with the uniform
/// distribution (`depolarize`), then each bit flips independently with
/// probability `readout_flip`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub depolarize: f64,
    pub readout_flip: f64,
}

impl NoiseModel {
    pub const IDEAL: NoiseModel = NoiseModel {
        depolarize: 0.0,
        readout_flip: 0.0,
    };

    pub fn new(depolarize: f64, readout_flip: f64) -> Result<Self> {
        let m = NoiseModel {
            depolarize,
            readout_flip,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("depolarize", self.depolarize),
            ("readout_flip", self.readout_flip),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::InvalidNoise { name, value });
            }
        }
        Ok(())
    }

    pub fn is_ideal(&self) -> bool {
        self.depolarize == 0.0 && self.readout_flip == 0.0
    }

    /// Outcome distribution `(1−λ)·p + λ/2^n` before readout flips.
    pub fn mixed_distribution(&self, probs: &[f64]) -> Vec<f64> {
        let uniform = 1.0 / probs.len() as f64;
        probs
            .iter()
            .map(|p| (1.0 - self.depolarize) * p + self.depolarize * uniform)
            .collect()
    }
}

impl Default for NoiseModel {
    /// λ = 0.02, ε = 0.01.
    fn default() -> Self {
        NoiseModel {
            depolarize: 0.02,
            readout_flip: 0.01,
        }
    }
}

/// Outcome tallies for one measured circuit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CountsRepr", into = "CountsRepr")]
pub struct Counts {
    n_qubits: usize,
    tallies: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct CountsRepr {
    n_qubits: usize,
    total_shots: u64,
    counts: BTreeMap<String, u64>,
}

impl From<Counts> for CountsRepr {
    fn from(c: Counts) -> Self {
        CountsRepr {
            n_qubits: c.n_qubits,
            total_shots: c.total_shots(),
            counts: c.to_map(),
        }
    }
}

impl TryFrom<CountsRepr> for Counts {
    type Error = Error;

    fn try_from(r: CountsRepr) -> Result<Self> {
        let counts = Counts::from_map(r.n_qubits, &r.counts)?;
        if counts.total_shots() != r.total_shots {
            return Err(Error::InvalidState(format!(
                "tallies sum to {} but total_shots is {}",
                counts.total_shots(),
                r.total_shots
            )));
        }
        Ok(counts)
    }
}

impl Counts {
    /// Build from `bitstring → tally` pairs.
    pub fn from_map(n_qubits: usize, map: &BTreeMap<String, u64>) -> Result<Self> {
        check_register(n_qubits)?;
        let mut tallies = vec![0u64; 1 << n_qubits];
        for (bits, &n) in map {
            if bits.len() != n_qubits {
                return Err(Error::InvalidState(format!(
                    "bitstring {bits:?} has wrong width for {n_qubits} qubits"
                )));
            }
            let idx = parse_bitstring(bits)
                .ok_or_else(|| Error::InvalidState(format!("bad bitstring {bits:?}")))?;
            tallies[idx] += n;
        }
        Ok(Counts { n_qubits, tallies })
    }

    pub fn from_pairs<'a>(
        n_qubits: usize,
        pairs: impl IntoIterator<Item = (&'a str, u64)>,
    ) -> Result<Self> {
        let map: BTreeMap<String, u64> = pairs
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        Self::from_map(n_qubits, &map)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn total_shots(&self) -> u64 {
        self.tallies.iter().sum()
    }

    /// Tally for a basis index.
    pub fn get(&self, index: usize) -> u64 {
        self.tallies.get(index).copied().unwrap_or(0)
    }

    pub fn tallies(&self) -> &[u64] {
        &self.tallies
    }

    /// Non-zero tallies keyed by bitstring.
    pub fn to_map(&self) -> BTreeMap<String, u64> {
        self.tallies
            .iter()
            .enumerate()
            .filter(|(_, n)| **n > 0)
            .map(|(i, n)| (bitstring(i, self.n_qubits), *n))
            .collect()
    }
}

/// Draw `shots` outcomes from the state's Born distribution under `noise`.
pub fn sample_counts<R: Rng + ?Sized>(
    state: &Statevector,
    shots: u64,
    noise: &NoiseModel,
    rng: &mut R,
) -> Result<Counts> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    noise.validate()?;
    let n = state.n_qubits();
    let probs = noise.mixed_distribution(&state.probabilities());
    let dist = WeightedIndex::new(&probs)
        .map_err(|e| Error::InvalidState(format!("outcome distribution: {e}")))?;
    let mut tallies = vec![0u64; 1 << n];
    for _ in 0..shots {
        let mut outcome = dist.sample(rng);
        if noise.readout_flip > 0.0 {
            for q in 0..n {
                if rng.gen_bool(noise.readout_flip) {
                    outcome ^= 1 << q;
                }
            }
        }
        tallies[outcome] += 1;
    }
    Ok(Counts {
        n_qubits: n,
        tallies,
    })
}

/// Parity estimator `Σ_b n_b·(−1)^{|b ∧ supp(O)|} / N`.
///
/// The counts must come from a circuit whose basis change already rotated
/// `obs` onto the Z axis (see [`super::measurement_circuit`]).
pub fn expectation_from_counts(counts: &Counts, obs: &PauliObservable) -> Result<f64> {
    if counts.n_qubits != obs.n_qubits() {
        return Err(Error::QubitMismatch {
            expected: counts.n_qubits,
            actual: obs.n_qubits(),
        });
    }
    let total = counts.total_shots();
    if total == 0 {
        return Err(Error::EmptyCounts);
    }
    let mask = obs.support_mask();
    let signed: i64 = counts
        .tallies
        .iter()
        .enumerate()
        .map(|(b, &n)| {
            if (b & mask).count_ones() % 2 == 0 {
                n as i64
            } else {
                -(n as i64)
            }
        })
        .sum();
    Ok(signed as f64 / total as f64)
}
