//! Writing JSON and CSV artifacts to stdout or `--output`.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub struct Sink {
    pub format: Format,
    pub output: Option<PathBuf>,
    pub meta: bool,
    pub command: String,
}

impl Sink {
    fn writer(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.output {
            Some(path) => Box::new(BufWriter::new(
                File::create(path).with_context(|| format!("creating {}", path.display()))?,
            )),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }

    /// Emits `value`, adding a `meta` object to JSON objects unless disabled.
    pub fn json<T: Serialize>(&self, value: &T) -> Result<()> {
        let mut value = serde_json::to_value(value)?;
        if self.meta {
            if let Value::Object(map) = &mut value {
                map.insert("meta".into(), self.meta_value());
            }
        }
        let mut w = self.writer()?;
        serde_json::to_writer_pretty(&mut w, &value)?;
        writeln!(w)?;
        w.flush()?;
        Ok(())
    }

    pub fn csv(&self, header: &[String], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
        let mut w = self.writer()?;
        writeln!(w, "{}", header.join(","))?;
        for row in rows {
            writeln!(w, "{}", row.join(","))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn text(&self, body: &str) -> Result<()> {
        let mut w = self.writer()?;
        w.write_all(body.as_bytes())?;
        w.flush()?;
        Ok(())
    }

    fn meta_value(&self) -> Value {
        let mut map = Map::new();
        map.insert("tool".into(), json!("wreathlab"));
        map.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        map.insert("command".into(), json!(self.command));
        let now = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        map.insert("generated_unix".into(), json!(now));
        Value::Object(map)
    }
}
