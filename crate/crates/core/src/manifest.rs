// SPDX-License-Identifier: Apache-2.0

//! Provenance header written at the top of every output file.

use crate::params::DeviceParams;

#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub tool_version: String,
    pub subcommand: String,
    pub config_path: Option<String>,
    pub params: DeviceParams,
    pub outputs: Vec<String>,
    /// Taken from `SOURCE_DATE_EPOCH` so repeated runs stay byte-identical.
    pub timestamp: Option<String>,
}

impl RunManifest {
    pub fn new(subcommand: &str, config_path: Option<String>, params: DeviceParams) -> Self {
        RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            subcommand: subcommand.to_string(),
            config_path,
            params,
            outputs: Vec::new(),
            timestamp: std::env::var("SOURCE_DATE_EPOCH").ok(),
        }
    }

    pub fn with_output(mut self, path: impl Into<String>) -> Self {
        self.outputs.push(path.into());
        self
    }

    /// `# `-prefixed lines, one field per line, device parameters last.
    pub fn header(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# heatvalve {}\n", self.tool_version));
        out.push_str(&format!("# subcommand: {}\n", self.subcommand));
        out.push_str(&format!(
            "# config: {}\n",
            self.config_path.as_deref().unwrap_or("<defaults>")
        ));
        for o in &self.outputs {
            out.push_str(&format!("# output: {o}\n"));
        }
        out.push_str(&format!(
            "# timestamp: {}\n",
            self.timestamp.as_deref().unwrap_or("unset")
        ));
        for line in self.params.to_config_string().lines() {
            out.push_str("# param ");
            out.push_str(line);
            out.push('\n');
        }
        out
    }
}
