//! Apply an affine map of ℤ₁₂ to the pitch class of every note.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{EventKind, MidiDocument, PERCUSSION_CHANNEL};
use crate::error::{Error, Result};
use crate::zmod::AffineMap;

/// How a transformed pitch class is placed in a register.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OctavePolicy {
    /// Keep the source key's octave block: `12·⌊p/12⌋ + f(p mod 12)`.
    #[default]
    RegisterBlock,
    /// The key with the image pitch class closest to `p`, ties upward.
    NearestImage,
}

impl FromStr for OctavePolicy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "register-block" => Ok(Self::RegisterBlock),
            "nearest-image" => Ok(Self::NearestImage),
            other => Err(format!("unknown octave policy {other:?}")),
        }
    }
}

impl fmt::Display for OctavePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::RegisterBlock => "register-block",
            Self::NearestImage => "nearest-image",
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TransformOptions {
    pub policy: OctavePolicy,
    /// Also transform channel 9, which General MIDI reserves for drums.
    pub include_percussion: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct TransformStats {
    /// Note events whose key was rewritten (including unchanged values).
    pub transformed: usize,
    /// Note events left alone because they sit on the percussion channel.
    pub skipped_percussion: usize,
    /// Note events whose register-block image left 0–127 and was moved by an
    /// octave.
    pub clamped: usize,
}

/// Register-block image of any integer key, without range limits.
pub fn register_block_image(key: i64, f: AffineMap) -> i64 {
    let n = i64::from(f.modulus());
    let pc = key.rem_euclid(n);
    key - pc + i64::from(f.image(pc as u32))
}

/// The new key for `key` and whether it had to be moved back into range.
pub fn transform_key(key: u8, f: AffineMap, policy: OctavePolicy) -> (u8, bool) {
    let p = i64::from(key);
    match policy {
        OctavePolicy::RegisterBlock => {
            let mut k = register_block_image(p, f);
            let clamped = !(0..=127).contains(&k);
            while k > 127 {
                k -= 12;
            }
            while k < 0 {
                k += 12;
            }
            (k as u8, clamped)
        }
        OctavePolicy::NearestImage => {
            let target = i64::from(f.image((p % 12) as u32));
            let best = (0..=127i64)
                .filter(|k| k % 12 == target)
                .min_by_key(|&k| ((k - p).abs(), -k))
                .expect("every pitch class occurs in 0..=127");
            (best as u8, false)
        }
    }
}

/// Re-pitch every note. Timing, velocities, tempo and all other events are
/// untouched; note-offs follow their note-ons because both use the same key
/// function.
pub fn transform_pitches(
    doc: &MidiDocument,
    f: AffineMap,
    options: TransformOptions,
) -> Result<(MidiDocument, TransformStats)> {
    if f.modulus() != 12 {
        return Err(Error::ModulusMismatch {
            left: f.modulus(),
            right: 12,
        });
    }
    let mut stats = TransformStats::default();
    let mut out = doc.clone();
    for ev in out.tracks.iter_mut().flat_map(|t| t.events.iter_mut()) {
        let (channel, key) = match &mut ev.kind {
            EventKind::NoteOn { channel, key, .. } | EventKind::NoteOff { channel, key, .. } => (*channel, key),
            _ => continue,
        };
        if channel == PERCUSSION_CHANNEL && !options.include_percussion {
            stats.skipped_percussion += 1;
            continue;
        }
        let (new, clamped) = transform_key(*key, f, options.policy);
        *key = new;
        stats.transformed += 1;
        stats.clamped += usize::from(clamped);
    }
    Ok((out, stats))
}
