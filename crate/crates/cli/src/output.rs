//! Result files: one CSV per table, a resolved-config TOML and a JSON
//! summary per command.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::Instant;

use chrono::{DateTime, SecondsFormat, Utc};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::ExperimentConfig;
use crate::error::CliError;

/// `git describe` of the build, or `unknown`.
pub const BUILD_DESCRIBE: &str = env!("RAO_FUSION_BUILD_DESCRIBE");

pub struct RunOutput {
    dir: PathBuf,
    command: &'static str,
    started_at: DateTime<Utc>,
    clock: Instant,
    files: Vec<PathBuf>,
}

impl RunOutput {
    pub fn create(dir: &Path, command: &'static str) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::runtime(format!("cannot create {}: {e}", dir.display())))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            command,
            started_at: Utc::now(),
            clock: Instant::now(),
            files: Vec::new(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Write `rows` to `<command>[_suffix].csv`, header from the field names.
    pub fn write_csv<T: Serialize>(&mut self, suffix: Option<&str>, rows: &[T]) -> Result<PathBuf, CliError> {
        let name = match suffix {
            Some(s) => format!("{}_{s}.csv", self.command),
            None => format!("{}.csv", self.command),
        };
        let path = self.dir.join(name);
        let mut w = csv::Writer::from_path(&path)?;
        for r in rows {
            w.serialize(r)?;
        }
        w.flush()?;
        self.files.push(path.clone());
        Ok(path)
    }

    /// Write the resolved config and the JSON summary; returns the summary path.
    pub fn finish(mut self, cfg: Option<&ExperimentConfig>, results: Value) -> Result<PathBuf, CliError> {
        let config_json = match cfg {
            Some(c) => {
                let path = self.dir.join(format!("{}_config.toml", self.command));
                std::fs::write(&path, c.to_toml())?;
                self.files.push(path);
                serde_json::to_value(c)?
            }
            None => Value::Null,
        };
        let finished_at = Utc::now();
        let summary_path = self.dir.join(format!("{}_summary.json", self.command));
        let outputs: Vec<String> = self
            .files
            .iter()
            .chain([&summary_path])
            .map(|p| p.display().to_string())
            .collect();
        let summary = json!({
            "command": self.command,
            "version": env!("CARGO_PKG_VERSION"),
            "git_describe": BUILD_DESCRIBE,
            "started_at": self.started_at.to_rfc3339_opts(SecondsFormat::Millis, true),
            "finished_at": finished_at.to_rfc3339_opts(SecondsFormat::Millis, true),
            "elapsed_s": self.clock.elapsed().as_secs_f64(),
            "threads": rayon::current_num_threads(),
            "master_seed": cfg.map(|c| c.montecarlo.master_seed),
            "config": config_json,
            "results": results,
            "outputs": outputs,
        });
        let file = File::create(&summary_path)?;
        serde_json::to_writer_pretty(BufWriter::new(file), &summary)?;
        Ok(summary_path)
    }
}
