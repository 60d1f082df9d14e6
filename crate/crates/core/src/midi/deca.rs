//! 10-TET scores as JSON: one chord per beat, frequencies from the step law.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pathkit::{PathCheck, ProgressionPath};

pub const DEFAULT_BASE_FREQUENCY: f64 = 264.0;
pub const DEFAULT_TEMPO: f64 = 60.0;

/// Frequency of decaphonic step `step` (octave·10 + pitch class).
pub fn step_frequency(base: f64, step: i32) -> f64 {
    base * 2f64.powf(f64::from(step) / 10.0)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Voicing {
    /// Root in the base octave, the other two tones one octave up.
    #[default]
    Open,
    /// All three tones ascending within one octave from the root.
    Close,
}

impl FromStr for Voicing {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "open" => Ok(Self::Open),
            "close" => Ok(Self::Close),
            other => Err(format!("unknown voicing {other:?}")),
        }
    }
}

impl fmt::Display for Voicing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Open => "open",
            Self::Close => "close",
        })
    }
}

impl Voicing {
    /// Steps for an ordered triple `(root, middle, top)`, ascending.
    pub fn steps(self, triple: [u32; 3]) -> [i32; 3] {
        let [root, rest @ ..] = triple.map(|x| x as i32);
        let lift = |x: i32| match self {
            Voicing::Open => x + 10,
            Voicing::Close if x > root => x,
            Voicing::Close => x + 10,
        };
        let mut steps = [root, lift(rest[0]), lift(rest[1])];
        steps.sort_unstable();
        steps
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecaEvent {
    /// Seconds from the start.
    pub onset: f64,
    /// Seconds.
    pub duration: f64,
    pub step: i32,
    /// Hz.
    pub frequency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecaScore {
    pub base_frequency: f64,
    /// Beats per minute; one chord per beat.
    pub tempo: f64,
    pub events: Vec<DecaEvent>,
}

pub fn render_deca_score(path: &ProgressionPath, voicing: Voicing, tempo: f64, base_frequency: f64) -> Result<DecaScore> {
    let n = path.system.n();
    if n != 10 {
        return Err(Error::ModulusMismatch { left: n, right: 10 });
    }
    for (name, value) in [("tempo", tempo), ("base frequency", base_frequency)] {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::InvalidParameter {
                name,
                expected: "a positive finite number",
                value: value.to_string(),
            });
        }
    }
    if let PathCheck::BrokenAt { index } = path.validate()? {
        return Err(Error::InvalidPath { index });
    }
    let beat = 60.0 / tempo;
    let events = path
        .steps
        .iter()
        .enumerate()
        .flat_map(|(i, s)| {
            let triple = path.system.triple(s.quality, s.root);
            voicing.steps(triple).map(|step| DecaEvent {
                onset: i as f64 * beat,
                duration: beat,
                step,
                frequency: step_frequency(base_frequency, step),
            })
        })
        .collect();
    Ok(DecaScore {
        base_frequency,
        tempo,
        events,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmony::HarmonicSystem;
    use crate::pathkit::{miniature, Step};

    #[test]
    fn open_voicing_of_the_first_chord() {
        assert_eq!(Voicing::Open.steps([0, 6, 1]), [0, 11, 16]);
        assert_eq!(Voicing::Close.steps([0, 6, 1]), [0, 1, 6]);
        assert_eq!(Voicing::Close.steps([9, 5, 4]), [9, 14, 15]);
    }

    #[test]
    fn frequency_law() {
        assert!((step_frequency(264.0, 10) - 528.0).abs() < 1e-9);
        let ratio = step_frequency(1.0, 1);
        assert!((ratio - 1.071_773_462_536_293).abs() < 1e-12);
        let cents = 1200.0 * ratio.log2();
        assert!((cents - 120.0).abs() < 1e-9);
    }

    #[test]
    fn miniature_score() {
        let score = render_deca_score(&miniature(), Voicing::Open, 120.0, 264.0).unwrap();
        assert_eq!(score.events.len(), 51);
        assert_eq!(score.events[3].onset, 0.5);
        assert_eq!(score.events[0].step, 0);
        assert_eq!(score.events[0].frequency, 264.0);
    }

    #[test]
    fn rejects_bad_input() {
        let p = miniature();
        assert!(render_deca_score(&p, Voicing::Open, 0.0, 264.0).is_err());
        assert!(render_deca_score(&p, Voicing::Open, 60.0, f64::NAN).is_err());
        let twelve = ProgressionPath::new(HarmonicSystem::new(12, 4, 3).unwrap(), vec![Step::major(0)]);
        assert!(render_deca_score(&twelve, Voicing::Open, 60.0, 264.0).is_err());
        let broken = ProgressionPath::new(p.system, vec![Step::major(0), Step::minor(3)]);
        assert_eq!(
            render_deca_score(&broken, Voicing::Open, 60.0, 264.0),
            Err(Error::InvalidPath { index: 0 })
        );
    }
}
