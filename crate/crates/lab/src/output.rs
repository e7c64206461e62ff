//! Output formatting: reproducibility headers, JSON with fixed significant
//! digits, and CSV emission.
//!
//! Every output file begins with a header recording the tool version, the
//! command, and the full resolved parameter set; re-running the command
//! rebuilt from that header reproduces the file byte-for-byte except for
//! the generated-at line. Floats print with 17 significant digits in JSON
//! and 12 in CSV.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::Failure;

pub const TOOL: &str = "mcp-lab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Resolved run description. `params` maps long-flag names (no `--`) to
/// canonical value strings, so a run is rebuilt as
/// `mcp-lab <command> --key value ...`.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Header {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub generated_at: u64,
}

impl Header {
    pub fn new(command: &str, params: BTreeMap<String, String>) -> Self {
        Self {
            tool: TOOL.to_string(),
            version: VERSION.to_string(),
            command: command.to_string(),
            params,
            generated_at: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }
}

/// Canonical float encoding for header values and CSV key lines: shortest
/// representation that round-trips exactly.
pub fn canon_f64(x: f64) -> String {
    format!("{x}")
}

/// 17 significant digits, used for every float in JSON bodies.
pub fn json_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// 12 significant digits, used for every float in CSV bodies.
pub fn csv_f64(x: f64) -> String {
    format!("{x:.11e}")
}

/// serde_json pretty formatter printing floats with 17 significant digits.
struct SigDigits<'a> {
    inner: serde_json::ser::PrettyFormatter<'a>,
}

impl serde_json::ser::Formatter for SigDigits<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.inner.begin_array(writer)
    }

    fn end_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.inner.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> std::io::Result<()> {
        self.inner.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.inner.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.inner.begin_object(writer)
    }

    fn end_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.inner.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> std::io::Result<()> {
        self.inner.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.inner.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.inner.end_object_value(writer)
    }
}

/// `{"header": ..., "report": ...}` with fixed-digit floats, pretty-printed
/// so the generated-at line can be ignored in byte comparisons.
pub fn to_json(header: &Header, report: &impl Serialize) -> Result<String, Failure> {
    #[derive(Serialize)]
    struct Document<'a, R: Serialize> {
        header: &'a Header,
        report: &'a R,
    }
    let mut out = Vec::new();
    let fmt = SigDigits { inner: serde_json::ser::PrettyFormatter::new() };
    let mut ser = serde_json::Serializer::with_formatter(&mut out, fmt);
    Document { header, report }
        .serialize(&mut ser)
        .map_err(|e| Failure::other(format!("json serialization failed: {e}")))?;
    out.push(b'\n');
    String::from_utf8(out).map_err(|e| Failure::other(e.to_string()))
}

/// CSV header block: `# key = value` lines (params sorted), the timestamp
/// line, then the column row.
pub fn csv_preamble(header: &Header, columns: &[&str]) -> String {
    let mut out = String::new();
    out.push_str(&format!("# tool = {}\n", header.tool));
    out.push_str(&format!("# version = {}\n", header.version));
    out.push_str(&format!("# command = {}\n", header.command));
    for (k, v) in &header.params {
        out.push_str(&format!("# {k} = {v}\n"));
    }
    out.push_str(&format!("# generated-at = {}\n", header.generated_at));
    out.push_str(&columns.join(","));
    out.push('\n');
    out
}

/// Write `content` to `path`, or echo nothing when `path` is `None`.
pub fn write_out(path: Option<&std::path::Path>, content: &str) -> Result<(), Failure> {
    if let Some(path) = path {
        std::fs::write(path, content)
            .map_err(|e| Failure::other(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}
