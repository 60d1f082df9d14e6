//! Standard MIDI File (formats 0 and 1) reader and writer.

use thiserror::Error;

use super::{EventKind, MidiDocument, TimedEvent, Track};

/// Largest value a variable-length quantity can hold.
pub const VLQ_MAX: u32 = 0x0FFF_FFFF;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MidiError {
    #[error("malformed header at byte {offset}: {reason}")]
    BadHeader { offset: usize, reason: String },

    #[error("truncated data at byte {offset}: need {needed} more byte(s)")]
    Truncated { offset: usize, needed: usize },

    #[error("unsupported format {format} (byte {offset})")]
    UnsupportedFormat { format: u16, offset: usize },

    #[error("variable-length quantity longer than four bytes at byte {offset}")]
    BadVlq { offset: usize },

    #[error("data byte expected at byte {offset}, found {byte:#04x}")]
    BadDataByte { offset: usize, byte: u8 },

    #[error("running status used before any status byte at byte {offset}")]
    MissingStatus { offset: usize },

    #[error("status byte {byte:#04x} is not allowed in a file (byte {offset})")]
    UnexpectedStatus { offset: usize, byte: u8 },

    #[error("header announces {expected} track(s) but {found} were found")]
    TrackCount { expected: usize, found: usize },

    #[error("track {track}: delta {delta} exceeds the variable-length limit {VLQ_MAX}")]
    TickOverflow { track: usize, delta: u64 },

    #[error("track {track}: event {index} is earlier than its predecessor")]
    Unordered { track: usize, index: usize },

    #[error("track {track}: {reason}")]
    InvalidEvent { track: usize, reason: String },
}

type Result<T> = std::result::Result<T, MidiError>;

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(len).filter(|&e| e <= self.bytes.len());
        let Some(end) = end else {
            return Err(MidiError::Truncated {
                offset: self.pos,
                needed: self.pos + len - self.bytes.len(),
            });
        };
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        let b = self.take(4)?;
        Ok(u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
    }

    fn vlq(&mut self) -> Result<u32> {
        let start = self.pos;
        let mut value = 0u32;
        for _ in 0..4 {
            let b = self.u8()?;
            value = (value << 7) | u32::from(b & 0x7F);
            if b & 0x80 == 0 {
                return Ok(value);
            }
        }
        Err(MidiError::BadVlq { offset: start })
    }

    fn data(&mut self) -> Result<u8> {
        let offset = self.pos;
        let byte = self.u8()?;
        if byte & 0x80 != 0 {
            return Err(MidiError::BadDataByte { offset, byte });
        }
        Ok(byte)
    }
}

pub fn parse_smf(bytes: &[u8]) -> Result<MidiDocument> {
    let mut r = Reader { bytes, pos: 0 };
    let id = r.take(4).map_err(|_| MidiError::BadHeader {
        offset: 0,
        reason: "file shorter than a header chunk id".into(),
    })?;
    if id != b"MThd" {
        return Err(MidiError::BadHeader {
            offset: 0,
            reason: "missing MThd chunk id".into(),
        });
    }
    let len = r.u32()? as usize;
    if len < 6 {
        return Err(MidiError::BadHeader {
            offset: 4,
            reason: format!("header length {len} is shorter than 6"),
        });
    }
    let header = r.take(len)?;
    let format = u16::from_be_bytes([header[0], header[1]]);
    let ntracks = usize::from(u16::from_be_bytes([header[2], header[3]]));
    let division = u16::from_be_bytes([header[4], header[5]]);
    if format > 1 {
        return Err(MidiError::UnsupportedFormat { format, offset: 8 });
    }
    if format == 0 && ntracks != 1 {
        return Err(MidiError::BadHeader {
            offset: 10,
            reason: format!("format 0 requires one track, header says {ntracks}"),
        });
    }

    let mut tracks = Vec::with_capacity(ntracks);
    while tracks.len() < ntracks {
        if r.pos == bytes.len() {
            return Err(MidiError::TrackCount {
                expected: ntracks,
                found: tracks.len(),
            });
        }
        let id = r.take(4)?;
        let len = r.u32()? as usize;
        let body_start = r.pos;
        let body = r.take(len)?;
        if id == b"MTrk" {
            tracks.push(parse_track(body, body_start)?);
        }
        // Unknown chunk types are skipped.
    }
    Ok(MidiDocument {
        format,
        division,
        tracks,
    })
}

fn parse_track(body: &[u8], base: usize) -> Result<Track> {
    let mut r = Reader { bytes: body, pos: 0 };
    let at = |pos: usize| base + pos;
    let rebase = |e: MidiError| match e {
        MidiError::Truncated { offset, needed } => MidiError::Truncated {
            offset: base + offset,
            needed,
        },
        MidiError::BadVlq { offset } => MidiError::BadVlq { offset: base + offset },
        MidiError::BadDataByte { offset, byte } => MidiError::BadDataByte {
            offset: base + offset,
            byte,
        },
        other => other,
    };

    let mut events = Vec::new();
    let mut tick = 0u64;
    let mut running: Option<u8> = None;
    let mut end = None;
    while r.pos < body.len() {
        tick += u64::from(r.vlq().map_err(rebase)?);
        let offset = r.pos;
        let first = r.u8().map_err(rebase)?;
        let (status, first_data) = if first & 0x80 != 0 {
            (first, None)
        } else {
            match running {
                Some(s) => (s, Some(first)),
                None => return Err(MidiError::MissingStatus { offset: at(offset) }),
            }
        };
        let kind = match status {
            0x80..=0xEF => {
                running = Some(status);
                let d1 = match first_data {
                    Some(d) => d,
                    None => r.data().map_err(rebase)?,
                };
                let channel = status & 0x0F;
                match status & 0xF0 {
                    0x80 => EventKind::NoteOff {
                        channel,
                        key: d1,
                        velocity: r.data().map_err(rebase)?,
                    },
                    0x90 => match r.data().map_err(rebase)? {
                        0 => EventKind::NoteOff {
                            channel,
                            key: d1,
                            velocity: 0,
                        },
                        velocity => EventKind::NoteOn {
                            channel,
                            key: d1,
                            velocity,
                        },
                    },
                    0xC0 | 0xD0 => EventKind::Channel {
                        status,
                        data: vec![d1],
                    },
                    _ => EventKind::Channel {
                        status,
                        data: vec![d1, r.data().map_err(rebase)?],
                    },
                }
            }
            0xFF => {
                running = None;
                let kind = r.u8().map_err(rebase)?;
                let len = r.vlq().map_err(rebase)? as usize;
                let data = r.take(len).map_err(rebase)?;
                match (kind, len) {
                    (0x2F, _) => {
                        end = Some(tick);
                        break;
                    }
                    (0x51, 3) => EventKind::Tempo {
                        micros_per_quarter: u32::from_be_bytes([0, data[0], data[1], data[2]]),
                    },
                    _ => EventKind::Meta {
                        kind,
                        data: data.to_vec(),
                    },
                }
            }
            0xF0 | 0xF7 => {
                running = None;
                let len = r.vlq().map_err(rebase)? as usize;
                EventKind::SysEx {
                    status,
                    data: r.take(len).map_err(rebase)?.to_vec(),
                }
            }
            byte => {
                return Err(MidiError::UnexpectedStatus {
                    offset: at(offset),
                    byte,
                })
            }
        };
        events.push(TimedEvent { tick, kind });
    }
    Ok(Track {
        end: end.unwrap_or(tick),
        events,
    })
}

fn push_vlq(out: &mut Vec<u8>, value: u32) {
    let mut groups = [0u8; 4];
    let mut count = 0;
    let mut v = value;
    loop {
        groups[count] = (v & 0x7F) as u8;
        count += 1;
        v >>= 7;
        if v == 0 {
            break;
        }
    }
    for i in (0..count).rev() {
        out.push(groups[i] | if i > 0 { 0x80 } else { 0 });
    }
}

/// Serialise with running status for consecutive channel messages.
pub fn write_smf(doc: &MidiDocument) -> Result<Vec<u8>> {
    if doc.format > 1 {
        return Err(MidiError::UnsupportedFormat {
            format: doc.format,
            offset: 8,
        });
    }
    if doc.format == 0 && doc.tracks.len() != 1 {
        return Err(MidiError::BadHeader {
            offset: 10,
            reason: format!("format 0 requires one track, document has {}", doc.tracks.len()),
        });
    }
    let ntracks = u16::try_from(doc.tracks.len()).map_err(|_| MidiError::BadHeader {
        offset: 10,
        reason: "more than 65535 tracks".into(),
    })?;
    let mut out = Vec::new();
    out.extend_from_slice(b"MThd");
    out.extend_from_slice(&6u32.to_be_bytes());
    out.extend_from_slice(&doc.format.to_be_bytes());
    out.extend_from_slice(&ntracks.to_be_bytes());
    out.extend_from_slice(&doc.division.to_be_bytes());
    for (index, track) in doc.tracks.iter().enumerate() {
        let body = write_track(track, index)?;
        out.extend_from_slice(b"MTrk");
        out.extend_from_slice(&(body.len() as u32).to_be_bytes());
        out.extend(body);
    }
    Ok(out)
}

fn write_track(track: &Track, index: usize) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    let mut prev = 0u64;
    let mut running: Option<u8> = None;
    let delta = |tick: u64, prev: u64, i: usize| -> Result<u32> {
        if tick < prev {
            return Err(MidiError::Unordered { track: index, index: i });
        }
        let d = tick - prev;
        u32::try_from(d)
            .ok()
            .filter(|&d| d <= VLQ_MAX)
            .ok_or(MidiError::TickOverflow { track: index, delta: d })
    };
    let bad = |reason: String| MidiError::InvalidEvent { track: index, reason };

    for (i, ev) in track.events.iter().enumerate() {
        push_vlq(&mut out, delta(ev.tick, prev, i)?);
        prev = ev.tick;
        let mut channel_msg = |status: u8, data: &[u8], out: &mut Vec<u8>| -> Result<()> {
            if !(0x80..=0xEF).contains(&status) || data.iter().any(|&d| d > 0x7F) {
                return Err(bad(format!("invalid channel message {status:#04x} {data:?}")));
            }
            let expected = if matches!(status & 0xF0, 0xC0 | 0xD0) { 1 } else { 2 };
            if data.len() != expected {
                return Err(bad(format!("status {status:#04x} takes {expected} data byte(s)")));
            }
            if running != Some(status) {
                out.push(status);
                running = Some(status);
            }
            out.extend_from_slice(data);
            Ok(())
        };
        match &ev.kind {
            EventKind::NoteOn { channel, key, velocity } => {
                if *velocity == 0 {
                    return Err(bad("note-on with velocity 0; use NoteOff".into()));
                }
                channel_msg(0x90 | (channel & 0x0F), &[*key, *velocity], &mut out)?
            }
            EventKind::NoteOff { channel, key, velocity } => {
                channel_msg(0x80 | (channel & 0x0F), &[*key, *velocity], &mut out)?
            }
            EventKind::Channel { status, data } => channel_msg(*status, data, &mut out)?,
            EventKind::Tempo { micros_per_quarter } => {
                if *micros_per_quarter > 0xFF_FFFF {
                    return Err(bad(format!("tempo {micros_per_quarter} does not fit 24 bits")));
                }
                running = None;
                out.extend_from_slice(&[0xFF, 0x51, 0x03]);
                out.extend_from_slice(&micros_per_quarter.to_be_bytes()[1..]);
            }
            EventKind::Meta { kind, data } => {
                if *kind == 0x2F {
                    return Err(bad("explicit end-of-track event".into()));
                }
                running = None;
                out.extend_from_slice(&[0xFF, *kind]);
                push_vlq(&mut out, data.len() as u32);
                out.extend_from_slice(data);
            }
            EventKind::SysEx { status, data } => {
                if !matches!(status, 0xF0 | 0xF7) {
                    return Err(bad(format!("invalid sysex status {status:#04x}")));
                }
                running = None;
                out.push(*status);
                push_vlq(&mut out, data.len() as u32);
                out.extend_from_slice(data);
            }
        }
    }
    let end = track.end.max(prev);
    push_vlq(&mut out, delta(end, prev, track.events.len())?);
    out.extend_from_slice(&[0xFF, 0x2F, 0x00]);
    Ok(out)
}
