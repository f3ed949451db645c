//! Human text or line-delimited JSON records, chosen once per run.
//!
//! Every record is one JSON object on its own line with a `record` field
//! naming its kind. Keys are sorted and numbers use the shortest decimal
//! that round-trips, so output does not depend on the locale.

use std::fmt::Display;
use std::io::Write;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Records,
}

pub struct Out {
    format: Format,
    stdout: std::io::StdoutLock<'static>,
}

impl Out {
    pub fn new(format: Format) -> Self {
        Out {
            format,
            stdout: std::io::stdout().lock(),
        }
    }

    pub fn is_human(&self) -> bool {
        self.format == Format::Human
    }

    /// A line shown only in human mode.
    pub fn line(&mut self, text: impl Display) {
        if self.is_human() {
            let _ = writeln!(self.stdout, "{text}");
        }
    }

    /// Multi-line text shown only in human mode, printed verbatim.
    pub fn block(&mut self, text: impl Display) {
        if self.is_human() {
            let _ = write!(self.stdout, "{text}");
        }
    }

    /// Text printed in both modes, for commands whose output is a file format.
    pub fn raw(&mut self, text: impl Display) {
        let _ = write!(self.stdout, "{text}");
    }

    /// A record shown only in records mode.
    pub fn record<T: Serialize>(&mut self, kind: &str, value: &T) {
        if self.is_human() {
            return;
        }
        let mut v = serde_json::to_value(value).unwrap_or(Value::Null);
        let obj = match v {
            Value::Object(ref mut map) => {
                map.insert("record".into(), Value::String(kind.into()));
                v
            }
            other => serde_json::json!({ "record": kind, "value": other }),
        };
        let _ = writeln!(self.stdout, "{obj}");
    }
}
