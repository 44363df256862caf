#![allow(dead_code)]

//! Frozen oracle values, computed independently with numpy dense 4x4 matrix
//! products (little-endian basis, qubit 0 = least significant bit) at the
//! reference pair x_i = (0.4, 1.2), x_j = (1.1, 0.3), reps = 2, phase scale 1.

/// Honest exact expectations, in family order X1, Y1, Z1, X2, Y2, Z2.
pub const HONEST_LOCAL: [(&str, f64); 6] = [
    ("X1", 0.2895011416700829),
    ("Y1", 0.15774414466941794),
    ("Z1", 0.6790040526201128),
    ("X2", -0.0326221448491609),
    ("Y2", -0.5139470518708391),
    ("Z2", 0.5518467660673733),
];

pub const HONEST_Z1Z2: f64 = 0.4754335277699757;

/// `|⟨00|U(x_j)† U(x_i)|00⟩|²`.
pub const KERNEL_VALUE: f64 = 0.6765710866143649;

/// Honest output state amplitudes `(re, im)`, rounded to 8 decimals.
pub const HONEST_STATE: [(f64, f64); 4] = [
    (0.81873689, -0.07899991),
    (0.26715842, 0.16726827),
    (-0.03285916, -0.40230736),
    (-0.18326031, 0.16601607),
];

/// Exact deviations of the Rz(π/6) adversary from honest.
pub const WEAKENED_DEVIATIONS: [(&str, f64); 4] = [
    ("X1", 0.1176578708939022),
    ("Y1", 0.12361686274758715),
    ("X2", 0.2613440646192714),
    ("Y2", 0.05254477632599336),
];

/// Frame bounds from the convex dual (cvxpy), independent of the
/// random-restart optimiser.
pub const FRAME_BOUND_LOCAL: f64 = 1.7320508075688772;
pub const FRAME_BOUND_TIER2: f64 = 2.2090524;
pub const FRAME_BOUND_TIER3: f64 = 3.7320508075688772;

pub fn honest(label: &str) -> f64 {
    HONEST_LOCAL
        .iter()
        .find(|(l, _)| *l == label)
        .map(|(_, v)| *v)
        .expect("label in local family")
}

/// S-conjugation oracle: S†XS = −Y and S†YS = X, Z rows unchanged, so the
/// sneaky deviations are |x + y| on X rows and |y − x| on Y rows.
pub fn sneaky_deviation_oracle() -> Vec<(&'static str, f64)> {
    let mut out = Vec::new();
    for q in ["1", "2"] {
        let x = honest(&format!("X{q}"));
        let y = honest(&format!("Y{q}"));
        out.push((if q == "1" { "X1" } else { "X2" }, (x + y).abs()));
        out.push((if q == "1" { "Y1" } else { "Y2" }, (y - x).abs()));
        out.push((if q == "1" { "Z1" } else { "Z2" }, 0.0));
    }
    out
}
