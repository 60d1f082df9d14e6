//! MIDI documents, affine re-pitching and 10-TET score export.

pub mod deca;
pub mod smf;
pub mod transform;

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

pub use deca::{render_deca_score, step_frequency, DecaEvent, DecaScore, Voicing};
pub use smf::{parse_smf, write_smf, MidiError};
pub use transform::{transform_key, transform_pitches, OctavePolicy, TransformOptions, TransformStats};

/// General MIDI percussion channel (zero-based).
pub const PERCUSSION_CHANNEL: u8 = 9;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MidiDocument {
    pub format: u16,
    /// Raw division word; ticks per quarter note unless the top bit is set.
    pub division: u16,
    pub tracks: Vec<Track>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Track {
    /// Events with absolute tick times, nondecreasing.
    pub events: Vec<TimedEvent>,
    /// Tick of the end-of-track marker.
    pub end: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TimedEvent {
    pub tick: u64,
    pub kind: EventKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum EventKind {
    NoteOn { channel: u8, key: u8, velocity: u8 },
    /// Also produced for a note-on with velocity 0.
    NoteOff { channel: u8, key: u8, velocity: u8 },
    Tempo { micros_per_quarter: u32 },
    /// Any other channel voice message, kept verbatim.
    Channel { status: u8, data: Vec<u8> },
    /// Any other meta event except end-of-track.
    Meta { kind: u8, data: Vec<u8> },
    SysEx { status: u8, data: Vec<u8> },
}

/// A matched note-on/note-off pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Note {
    pub track: usize,
    pub channel: u8,
    pub key: u8,
    pub velocity: u8,
    pub start: u64,
    pub end: u64,
}

/// A note-on with no later note-off on the same channel and key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct UnmatchedNote {
    pub track: usize,
    pub channel: u8,
    pub key: u8,
    pub tick: u64,
}

impl MidiDocument {
    /// Notes paired first-in first-out per track, channel and key, plus the
    /// note-ons left open.
    pub fn notes(&self) -> (Vec<Note>, Vec<UnmatchedNote>) {
        let mut notes = Vec::new();
        let mut open_left = Vec::new();
        for (ti, track) in self.tracks.iter().enumerate() {
            let mut open: BTreeMap<(u8, u8), VecDeque<(u64, u8)>> = BTreeMap::new();
            for ev in &track.events {
                match ev.kind {
                    EventKind::NoteOn { channel, key, velocity } => {
                        open.entry((channel, key)).or_default().push_back((ev.tick, velocity));
                    }
                    EventKind::NoteOff { channel, key, .. } => {
                        if let Some((start, velocity)) =
                            open.get_mut(&(channel, key)).and_then(VecDeque::pop_front)
                        {
                            notes.push(Note {
                                track: ti,
                                channel,
                                key,
                                velocity,
                                start,
                                end: ev.tick,
                            });
                        }
                    }
                    _ => {}
                }
            }
            for ((channel, key), q) in open {
                open_left.extend(q.into_iter().map(|(tick, _)| UnmatchedNote {
                    track: ti,
                    channel,
                    key,
                    tick,
                }));
            }
        }
        notes.sort_by_key(|n| (n.track, n.start, n.channel, n.key));
        open_left.sort_by_key(|n| (n.track, n.tick, n.channel, n.key));
        (notes, open_left)
    }

    /// Every note key with its channel, in track and event order.
    pub fn keys(&self) -> Vec<(u8, u8)> {
        self.tracks
            .iter()
            .flat_map(|t| &t.events)
            .filter_map(|e| match e.kind {
                EventKind::NoteOn { channel, key, .. } | EventKind::NoteOff { channel, key, .. } => {
                    Some((channel, key))
                }
                _ => None,
            })
            .collect()
    }
}
