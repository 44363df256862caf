use std::collections::HashSet;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::simcore::{
    expectation_from_counts, measurement_circuit, pauli_expectation_exact, sample_counts, Circuit,
    Counts, NoiseModel, PauliObservable,
};
use crate::{Error, Result};

use super::StageSpec;

/// Shots per observable behind a fingerprint; `"exact"` for statevector values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShotCount {
    Exact,
    Shots(u64),
}

impl Serialize for ShotCount {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ShotCount::Exact => s.serialize_str("exact"),
            ShotCount::Shots(n) => s.serialize_u64(*n),
        }
    }
}

impl<'de> Deserialize<'de> for ShotCount {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Count(u64),
            Tag(String),
        }
        match Raw::deserialize(d)? {
            Raw::Count(0) => Err(serde::de::Error::custom("shot count must be positive")),
            Raw::Count(n) => Ok(ShotCount::Shots(n)),
            Raw::Tag(t) if t == "exact" => Ok(ShotCount::Exact),
            Raw::Tag(t) => Err(serde::de::Error::custom(format!(
                "expected \"exact\" or a shot count, got {t:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceSource {
    /// Computed by this process on the simulator.
    Simulator,
    /// Loaded from a frozen file.
    File,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub channel: String,
    pub seed: Option<u64>,
    pub source: ReferenceSource,
}

impl Default for Provenance {
    fn default() -> Self {
        Provenance {
            channel: "unspecified".into(),
            seed: None,
            source: ReferenceSource::Simulator,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FingerprintEntry {
    pub observable: String,
    pub value: f64,
}

/// Expectation values of a channel's output over an ordered observable family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub entries: Vec<FingerprintEntry>,
    pub shots_per_observable: ShotCount,
    pub provenance: Provenance,
}

impl Fingerprint {
    pub fn new(
        entries: Vec<FingerprintEntry>,
        shots_per_observable: ShotCount,
        provenance: Provenance,
    ) -> Result<Self> {
        let fp = Fingerprint {
            entries,
            shots_per_observable,
            provenance,
        };
        fp.validate()?;
        Ok(fp)
    }

    /// Non-empty, unique parseable labels, every value in `[−1, 1]`.
    pub fn validate(&self) -> Result<()> {
        if self.entries.is_empty() {
            return Err(Error::EmptyFamily);
        }
        let mut seen = HashSet::new();
        for e in &self.entries {
            e.observable.parse::<PauliObservable>()?;
            if !seen.insert(e.observable.as_str()) {
                return Err(Error::FamilyMismatch(format!(
                    "duplicate observable {}",
                    e.observable
                )));
            }
            if !(-1.0..=1.0).contains(&e.value) {
                return Err(Error::InvalidParameter(format!(
                    "expectation {} for {} outside [-1, 1]",
                    e.value, e.observable
                )));
            }
        }
        Ok(())
    }

    /// Labels must equal the spec family in order.
    pub fn validate_against(&self, spec: &StageSpec) -> Result<()> {
        self.validate()?;
        let labels: Vec<&str> = self.labels().collect();
        if labels != spec.family.iter().map(String::as_str).collect::<Vec<_>>() {
            return Err(Error::FamilyMismatch(format!(
                "fingerprint family {:?} differs from spec family {:?}",
                labels, spec.family
            )));
        }
        Ok(())
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.observable.as_str())
    }

    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.value).collect()
    }

    pub fn get(&self, label: &str) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.observable == label)
            .map(|e| e.value)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let fp: Fingerprint = serde_json::from_str(text)?;
        fp.validate()?;
        Ok(fp)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum MeasurementMode {
    Exact,
    Shots { shots: u64, noise: NoiseModel },
}

impl MeasurementMode {
    pub fn shot_count(&self) -> ShotCount {
        match self {
            MeasurementMode::Exact => ShotCount::Exact,
            MeasurementMode::Shots { shots, .. } => ShotCount::Shots(*shots),
        }
    }
}

/// A fingerprint together with the raw counts behind each entry (empty in
/// exact mode).
#[derive(Debug, Clone, PartialEq)]
pub struct MeasuredFamily {
    pub fingerprint: Fingerprint,
    pub counts: Vec<(String, Counts)>,
}

/// Measure every observable of `family` on the output of `circuit` from `|0…0⟩`.
pub fn measure_family<R: Rng + ?Sized>(
    circuit: &Circuit,
    family: &[PauliObservable],
    mode: &MeasurementMode,
    rng: &mut R,
) -> Result<MeasuredFamily> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let mut entries = Vec::with_capacity(family.len());
    let mut counts = Vec::new();
    match mode {
        MeasurementMode::Exact => {
            let state = circuit.run_from_zero()?;
            for obs in family {
                entries.push(FingerprintEntry {
                    observable: obs.label(),
                    value: pauli_expectation_exact(&state, obs)?,
                });
            }
        }
        MeasurementMode::Shots { shots, noise } => {
            if *shots == 0 {
                return Err(Error::ZeroShots);
            }
            for obs in family {
                let state = measurement_circuit(circuit, obs)?.run_from_zero()?;
                let c = sample_counts(&state, *shots, noise, rng)?;
                entries.push(FingerprintEntry {
                    observable: obs.label(),
                    value: expectation_from_counts(&c, obs)?,
                });
                counts.push((obs.label(), c));
            }
        }
    }
    let fingerprint = Fingerprint::new(entries, mode.shot_count(), Provenance::default())?;
    Ok(MeasuredFamily {
        fingerprint,
        counts,
    })
}

pub fn compute_fingerprint<R: Rng + ?Sized>(
    circuit: &Circuit,
    family: &[PauliObservable],
    mode: &MeasurementMode,
    rng: &mut R,
) -> Result<Fingerprint> {
    measure_family(circuit, family, mode, rng).map(|m| m.fingerprint)
}

/// Per-observable absolute differences and their maximum (L∞ distance).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Deviation {
    pub per_observable: Vec<FingerprintEntry>,
    pub max_dev: f64,
    pub argmax_label: String,
}

impl Deviation {
    pub fn get(&self, label: &str) -> Option<f64> {
        self.per_observable
            .iter()
            .find(|e| e.observable == label)
            .map(|e| e.value)
    }

    /// Maximum and argmax over a sub-family.
    pub fn max_over(&self, labels: &[String]) -> Result<(f64, String)> {
        let mut best: Option<(f64, String)> = None;
        for l in labels {
            let v = self
                .get(l)
                .ok_or_else(|| Error::FamilyMismatch(format!("{l} not in deviation")))?;
            if best.as_ref().map_or(true, |(b, _)| v > *b) {
                best = Some((v, l.clone()));
            }
        }
        best.ok_or(Error::EmptyFamily)
    }
}

pub fn contract_deviation(a: &Fingerprint, b: &Fingerprint) -> Result<Deviation> {
    if a.is_empty() {
        return Err(Error::EmptyFamily);
    }
    if !a.labels().eq(b.labels()) {
        return Err(Error::FamilyMismatch(format!(
            "{:?} vs {:?}",
            a.labels().collect::<Vec<_>>(),
            b.labels().collect::<Vec<_>>()
        )));
    }
    let per_observable: Vec<FingerprintEntry> = a
        .entries
        .iter()
        .zip(&b.entries)
        .map(|(x, y)| FingerprintEntry {
            observable: x.observable.clone(),
            value: (x.value - y.value).abs(),
        })
        .collect();
    let (max_dev, argmax_label) = per_observable
        .iter()
        .fold((f64::NEG_INFINITY, String::new()), |(m, l), e| {
            if e.value > m {
                (e.value, e.observable.clone())
            } else {
                (m, l)
            }
        });
    Ok(Deviation {
        per_observable,
        max_dev,
        argmax_label,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{observable_family, reference_circuit, ChannelKind, FamilyTier};
    use crate::rng::seeded;

    fn exact(kind: ChannelKind, tier: FamilyTier) -> Fingerprint {
        compute_fingerprint(
            &reference_circuit(&kind).unwrap(),
            &observable_family(tier),
            &MeasurementMode::Exact,
            &mut seeded(0),
        )
        .unwrap()
    }

    #[test]
    fn self_deviation_is_zero() {
        let fp = exact(ChannelKind::Honest, FamilyTier::Complete);
        let d = contract_deviation(&fp, &fp).unwrap();
        assert_eq!(d.max_dev, 0.0);
        assert!(d.per_observable.iter().all(|e| e.value == 0.0));
    }

    #[test]
    fn weak_family_blind_to_sneaky() {
        let a = exact(ChannelKind::Honest, FamilyTier::Weak);
        let b = exact(ChannelKind::Sneaky, FamilyTier::Weak);
        assert_eq!(a.len(), 1);
        let d = contract_deviation(&a, &b).unwrap();
        assert!(d.max_dev < 1e-12);
    }

    #[test]
    fn family_mismatch_rejected() {
        let a = exact(ChannelKind::Honest, FamilyTier::Weak);
        let b = exact(ChannelKind::Honest, FamilyTier::Complete);
        assert!(matches!(
            contract_deviation(&a, &b),
            Err(Error::FamilyMismatch(_))
        ));
    }

    #[test]
    fn shot_count_serialization() {
        assert_eq!(serde_json::to_string(&ShotCount::Exact).unwrap(), "\"exact\"");
        assert_eq!(serde_json::to_string(&ShotCount::Shots(12)).unwrap(), "12");
        assert_eq!(
            serde_json::from_str::<ShotCount>("\"exact\"").unwrap(),
            ShotCount::Exact
        );
        assert!(serde_json::from_str::<ShotCount>("0").is_err());
        assert!(serde_json::from_str::<ShotCount>("\"many\"").is_err());
    }

    #[test]
    fn out_of_range_values_fail_validation() {
        let mut fp = exact(ChannelKind::Honest, FamilyTier::Complete);
        let text = serde_json::to_string(&fp).unwrap();
        assert!(Fingerprint::from_json(&text).is_ok());
        fp.entries[0].value = 1.5;
        let text = serde_json::to_string(&fp).unwrap();
        assert!(Fingerprint::from_json(&text).is_err());
    }

    #[test]
    fn zero_shots_rejected() {
        let mode = MeasurementMode::Shots {
            shots: 0,
            noise: NoiseModel::IDEAL,
        };
        let r = compute_fingerprint(
            &reference_circuit(&ChannelKind::Honest).unwrap(),
            &observable_family(FamilyTier::Weak),
            &mode,
            &mut seeded(0),
        );
        assert!(matches!(r, Err(Error::ZeroShots)));
    }
}
