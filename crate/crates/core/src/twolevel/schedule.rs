use serde::{Deserialize, Serialize};

/// How to read the trials schedule `5 + 4(n^a - 1000^a)` and its bound of 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MnReading {
    /// `max{1, round(...)}`: the schedule is floored at one trial.
    #[default]
    ClampBelow,
    /// `min{1, round(...)}` taken literally (one trial for every n >= 1000).
    Literal,
}

/// Trials per item for `n` items under growth exponent `a`, rounded half-up.
pub fn mn_schedule(n: u64, a: f64, reading: MnReading) -> u32 {
    let raw = 5.0 + 4.0 * ((n as f64).powf(a) - 1000f64.powf(a));
    let rounded = (raw + 0.5).floor();
    match reading {
        MnReading::ClampBelow => rounded.max(1.0) as u32,
        MnReading::Literal => rounded.clamp(0.0, 1.0) as u32,
    }
}
