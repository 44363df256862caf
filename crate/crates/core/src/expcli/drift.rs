use serde::{Deserialize, Serialize};

use crate::budget::{calibrate_tolerance, pairwise_drift, ToleranceInterval};
use crate::channels::{
    kernel_circuit_with, observable_family, ChannelKind, DriftParams, FamilyTier, REFERENCE_PAIR,
};
use crate::contract::{compute_fingerprint, Fingerprint, MeasurementMode};
use crate::rng::{seeded, substream};
use crate::simcore::PauliObservable;
use crate::{Error, Result};

use super::report::{cell, NamedFingerprint, Table};
use super::{measurement_mode, ExperimentConfig, RunArtifact};

/// Drift directions over `[α0, β0, α1, β1]`; mutually orthogonal.
const PRIMARY_DIRECTION: [f64; 4] = [1.0, 0.6, -0.8, 0.4];
const SECONDARY_DIRECTION: [f64; 4] = [-0.4, 0.8, 0.6, 1.0];

const SCALE_SCAN: usize = 64;
const MIX_SCAN: usize = 48;
const BISECTIONS: usize = 60;
/// Allowed error on each achieved pairwise deviation.
pub const DRIFT_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriftSchedule {
    pub timepoints: [DriftParams; 3],
    /// Exact pairwise deviations `(d12, d13, d23)` of the constructed channels.
    pub achieved: [f64; 3],
}

fn unit(v: [f64; 4]) -> [f64; 4] {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.map(|x| x / n)
}

struct Probe<'a> {
    cfg: &'a ExperimentConfig,
    family: Vec<PauliObservable>,
}

impl Probe<'_> {
    fn fingerprint(&self, d: &DriftParams) -> Result<Fingerprint> {
        let (xi, xj) = REFERENCE_PAIR;
        let c = kernel_circuit_with(&self.cfg.feature_map, &ChannelKind::Drifted(*d), &xi, &xj)?;
        compute_fingerprint(&c, &self.family, &MeasurementMode::Exact, &mut seeded(0))
    }

    fn distance(&self, a: &DriftParams, b: &DriftParams) -> Result<f64> {
        pairwise_drift(&self.fingerprint(a)?, &self.fingerprint(b)?)
    }
}

fn along(dir: &[f64; 4], s: f64) -> DriftParams {
    DriftParams::from_angles(dir.map(|x| x * s))
}

/// Smallest scale in `[0, s_max]` (to bisection accuracy) where `f` first
/// reaches `target`.
fn first_crossing<F: FnMut(f64) -> Result<f64>>(mut f: F, target: f64, s_max: f64) -> Result<f64> {
    if target == 0.0 {
        return Ok(0.0);
    }
    let mut lo = 0.0;
    for i in 1..=SCALE_SCAN {
        let s = s_max * i as f64 / SCALE_SCAN as f64;
        if f(s)? >= target {
            let mut hi = s;
            for _ in 0..BISECTIONS {
                let mid = 0.5 * (lo + hi);
                if f(mid)? >= target {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Ok(hi);
        }
        lo = s;
    }
    Err(Error::UnreachableDrift {
        target,
        reason: format!("not reached within the angle cap (scale {s_max:.4})"),
    })
}

/// Build three timepoint channels whose exact pairwise deviations over the
/// complete family hit `(d12, d13, d23)`.
///
/// `t1` is the honest channel. `t2` scales the primary direction until
/// `d12` is met. `t3` lives in the plane of the two directions at mixing
/// angle `φ`; for each `φ` its scale is fixed by `d13`, and `φ` itself is
/// bisected until `d23` is met.
pub fn construct_drift_schedule(cfg: &ExperimentConfig) -> Result<DriftSchedule> {
    let [t12, t13, t23] = match cfg.drift_targets.as_slice() {
        [a, b, c] => [*a, *b, *c],
        other => {
            return Err(Error::Config(format!(
                "expected 3 drift targets, got {}",
                other.len()
            )))
        }
    };
    let probe = Probe {
        cfg,
        family: observable_family(FamilyTier::Complete),
    };
    let a = unit(PRIMARY_DIRECTION);
    let b = unit(SECONDARY_DIRECTION);
    let cap = |dir: &[f64; 4]| cfg.drift_angle_cap / dir.iter().fold(0.0f64, |m, x| m.max(x.abs()));

    let t1 = DriftParams::default();
    let s2 = first_crossing(|s| probe.distance(&t1, &along(&a, s)), t12, cap(&a))?;
    let t2 = along(&a, s2);

    let third = |phi: f64| -> Result<DriftParams> {
        let dir: [f64; 4] = std::array::from_fn(|i| phi.cos() * a[i] + phi.sin() * b[i]);
        let s3 = first_crossing(|s| probe.distance(&t1, &along(&dir, s)), t13, cap(&dir))?;
        Ok(along(&dir, s3))
    };
    let gap = |phi: f64| -> Result<f64> { Ok(probe.distance(&t2, &third(phi)?)? - t23) };

    let mut prev: Option<(f64, f64)> = None;
    let mut chosen = None;
    for i in 0..=MIX_SCAN {
        let phi = std::f64::consts::PI * i as f64 / MIX_SCAN as f64;
        let g = match gap(phi) {
            Ok(g) => g,
            Err(Error::UnreachableDrift { .. }) => {
                prev = None;
                continue;
            }
            Err(e) => return Err(e),
        };
        if g.abs() < 1e-9 {
            chosen = Some(phi);
            break;
        }
        if let Some((p_phi, p_g)) = prev {
            if p_g.signum() != g.signum() {
                let (mut lo, mut hi, mut g_lo) = (p_phi, phi, p_g);
                for _ in 0..BISECTIONS {
                    let mid = 0.5 * (lo + hi);
                    let gm = gap(mid)?;
                    if gm.signum() == g_lo.signum() {
                        lo = mid;
                        g_lo = gm;
                    } else {
                        hi = mid;
                    }
                }
                chosen = Some(0.5 * (lo + hi));
                break;
            }
        }
        prev = Some((phi, g));
    }
    let phi = chosen.ok_or_else(|| Error::UnreachableDrift {
        target: t23,
        reason: format!("no timepoint-3 channel satisfies d13 = {t13} and d23 = {t23}"),
    })?;
    let t3 = third(phi)?;

    let achieved = [
        probe.distance(&t1, &t2)?,
        probe.distance(&t1, &t3)?,
        probe.distance(&t2, &t3)?,
    ];
    for (got, want) in achieved.iter().zip([t12, t13, t23]) {
        if (got - want).abs() > DRIFT_TOL {
            return Err(Error::UnreachableDrift {
                target: want,
                reason: format!("closest construction achieved {got:.6}"),
            });
        }
    }
    Ok(DriftSchedule {
        timepoints: [t1, t2, t3],
        achieved,
    })
}

/// Injected-drift calibration: three synthetic timepoints, their
/// fingerprints, and the tolerance interval they imply.
pub fn experiment_drift(cfg: &ExperimentConfig) -> Result<RunArtifact> {
    cfg.validate()?;
    let seed = cfg.seed()?;
    let schedule = construct_drift_schedule(cfg)?;
    let family = observable_family(FamilyTier::Complete);
    let (xi, xj) = REFERENCE_PAIR;

    let mut artifact = RunArtifact::new(cfg);
    let mut fps = Vec::new();
    for (t, d) in schedule.timepoints.iter().enumerate() {
        let kind = ChannelKind::Drifted(*d);
        let circuit = kernel_circuit_with(&cfg.feature_map, &kind, &xi, &xj)?;
        let mode = measurement_mode(cfg, &kind, cfg.shots);
        let mut fp =
            compute_fingerprint(&circuit, &family, &mode, &mut substream(seed, &[t as u64]))?;
        fp.provenance.channel = kind.descriptor();
        fp.provenance.seed = Some(seed);
        artifact.fingerprints.push(NamedFingerprint {
            name: format!("t{}", t + 1),
            fingerprint: fp.clone(),
        });
        fps.push(fp);
    }
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let measured: Vec<f64> = pairs
        .iter()
        .map(|&(i, j)| pairwise_drift(&fps[i], &fps[j]))
        .collect::<Result<_>>()?;
    let interval = calibrate_tolerance(&fps, cfg.delta_min, cfg.frame_bound)?;

    artifact.notes.push(format!(
        "injected exact pairwise deviations: d12 = {:.6}, d13 = {:.6}, d23 = {:.6}",
        schedule.achieved[0], schedule.achieved[1], schedule.achieved[2]
    ));
    if interval.empty {
        artifact.notes.push(format!(
            "tolerance interval is empty: typical drift {:.6} exceeds delta_min/C = {:.6}; \
             recalibrate more often, extend the family to lower C, or raise delta_min",
            interval.d_typ, interval.upper
        ));
    }
    artifact.tables.push(drift_table(&measured, &interval));
    Ok(artifact)
}

fn drift_table(pairwise: &[f64], iv: &ToleranceInterval) -> Table {
    let mut t = Table::new("drift", &["quantity", "value"]);
    for ((i, j), d) in [(1, 2), (1, 3), (2, 3)].iter().zip(pairwise) {
        t.push(vec![format!("max_O |Fp(t{i})[O] - Fp(t{j})[O]|"), cell(*d)]);
    }
    t.push(vec!["d_typ".into(), cell(iv.d_typ)]);
    t.push(vec![
        "tolerance interval [d_typ, delta_min/C]".into(),
        format!("[{}, {}]", cell(iv.d_typ), cell(iv.upper)),
    ]);
    t.push(vec![
        "interval non-empty?".into(),
        if iv.empty { "no" } else { "yes" }.into(),
    ]);
    t.push(vec![
        "recommended epsilon_A".into(),
        iv.recommended.map_or_else(|| "none".into(), cell),
    ]);
    t
}

/// Recover the tolerance interval from a drift artifact's table.
pub fn interval_from_artifact(artifact: &RunArtifact) -> Option<ToleranceInterval> {
    let t = artifact.table("drift")?;
    let d_typ = t.rows.get(3)?[1].parse().ok()?;
    ToleranceInterval::from_drift(d_typ, artifact.config.delta_min, artifact.config.frame_bound).ok()
}
