use std::io::{self, Write};

use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
    Dot,
}

/// Buffers stdout so a failing command never leaves half a document behind.
pub struct Printer {
    format: Format,
    buf: Vec<u8>,
}

impl Printer {
    pub fn new(format: Format) -> Self {
        Self {
            format,
            buf: Vec::new(),
        }
    }

    pub fn format(&self) -> Format {
        self.format
    }

    pub fn json(&mut self, value: &impl Serialize) -> anyhow::Result<()> {
        serde_json::to_writer_pretty(&mut self.buf, value)?;
        self.buf.push(b'\n');
        Ok(())
    }

    pub fn raw(&mut self, text: &str) -> anyhow::Result<()> {
        self.buf.extend_from_slice(text.as_bytes());
        Ok(())
    }

    /// JSON, or the human-readable table when one was asked for.
    pub fn emit(
        &mut self,
        value: &impl Serialize,
        table: impl FnOnce(&mut Vec<u8>) -> io::Result<()>,
    ) -> anyhow::Result<()> {
        match self.format {
            Format::Table => Ok(table(&mut self.buf)?),
            Format::Json | Format::Dot => self.json(value),
        }
    }

    pub fn finish(self) -> io::Result<()> {
        let mut out = io::stdout().lock();
        out.write_all(&self.buf)?;
        out.flush()
    }
}
