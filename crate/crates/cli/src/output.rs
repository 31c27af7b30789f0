//! Output plumbing: format selection, the JSON meta envelope, and the
//! file-or-stdout sink.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value = "csv", global = true)]
    pub format: Format,
    /// Write to this path instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

/// Provenance block attached to every JSON dataset.
#[derive(Serialize)]
struct Meta<'a> {
    tool: &'a str,
    version: &'a str,
    command: &'a str,
    seed: Option<u64>,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    meta: Meta<'a>,
    data: T,
}

/// Serialize `data` under a meta block echoing the command and seed.
pub fn json_envelope<T: Serialize>(
    command: &str,
    seed: Option<u64>,
    data: &T,
) -> Result<String, serde_json::Error> {
    let envelope = Envelope {
        meta: Meta {
            tool: "enbs",
            version: env!("CARGO_PKG_VERSION"),
            command,
            seed,
        },
        data,
    };
    let mut s = serde_json::to_string_pretty(&envelope)?;
    s.push('\n');
    Ok(s)
}

impl OutputArgs {
    /// Write the rendered dataset to the selected sink.
    pub fn emit(&self, content: &str) -> std::io::Result<()> {
        match &self.output {
            Some(path) => std::fs::write(path, content),
            None => {
                let stdout = std::io::stdout();
                let mut lock = stdout.lock();
                lock.write_all(content.as_bytes())
            }
        }
    }
}
