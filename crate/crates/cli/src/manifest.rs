use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use qaoa_landscape::io::write_atomic;
use qaoa_landscape::ScanConfig;
use serde::Serialize;

#[derive(Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Completed,
    Failed,
}

/// Record of one invocation, written last in the output directory.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool_version: &'static str,
    pub command_line: Vec<String>,
    pub instance_hashes: Vec<String>,
    pub config: Option<ScanConfig>,
    pub outputs: Vec<PathBuf>,
    pub optimizer_evaluations: Option<u64>,
    pub started_unix_seconds: u64,
    pub wall_time_seconds: f64,
    pub status: Status,
    pub error: Option<String>,
    #[serde(skip)]
    started: Option<Instant>,
}

impl RunManifest {
    pub fn start(argv: &[String]) -> Self {
        RunManifest {
            tool_version: env!("CARGO_PKG_VERSION"),
            command_line: argv.to_vec(),
            instance_hashes: Vec::new(),
            config: None,
            outputs: Vec::new(),
            optimizer_evaluations: None,
            started_unix_seconds: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            wall_time_seconds: 0.0,
            status: Status::Failed,
            error: None,
            started: Some(Instant::now()),
        }
    }

    pub fn elapsed(&self) -> f64 {
        self.started.map(|t| t.elapsed().as_secs_f64()).unwrap_or(0.0)
    }

    pub fn finish(mut self, dir: &Path, error: Option<String>) -> qaoa_landscape::Result<()> {
        self.wall_time_seconds = self.elapsed();
        self.status = if error.is_none() { Status::Completed } else { Status::Failed };
        self.error = error;
        let text = serde_json::to_string_pretty(&self).expect("manifest serialises");
        write_atomic(&dir.join("manifest.json"), text.as_bytes())
    }
}
