//! Buffered output in the three supported renderings.

use crate::FormatArg;
use serde_json::Value;

/// A command result rendered three ways; printing happens only after the
/// command succeeded.
pub struct Rendered {
    pub text: String,
    pub tsv: String,
    pub json: Value,
}

impl Rendered {
    /// Same content in every format.
    pub fn uniform(text: String, json: Value) -> Self {
        Rendered {
            tsv: text.clone(),
            text,
            json,
        }
    }

    pub fn render(&self, format: FormatArg) -> String {
        match format {
            FormatArg::Text => ensure_newline(&self.text),
            FormatArg::Tsv => ensure_newline(&self.tsv),
            FormatArg::Structured => {
                let mut s = serde_json::to_string_pretty(&self.json).unwrap_or_default();
                s.push('\n');
                s
            }
        }
    }
}

fn ensure_newline(s: &str) -> String {
    if s.is_empty() || s.ends_with('\n') {
        s.to_string()
    } else {
        format!("{s}\n")
    }
}
