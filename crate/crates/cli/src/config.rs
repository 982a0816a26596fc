//! Cap resolution: defaults, then the config file, then `WREATHLAB_CAPS`,
//! then command-line flags.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use wreathlab_core::Caps;

pub const CAPS_ENV: &str = "WREATHLAB_CAPS";

/// Optional overrides; keys match the long flag names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CapOverrides {
    pub enumeration_cap: Option<u32>,
    pub matrix_cap: Option<usize>,
    pub term_cap: Option<u64>,
    pub subgroup_cap: Option<usize>,
    pub certify_cap: Option<usize>,
}

/// Contents of a `--config` TOML file.
#[derive(Clone, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct FileConfig {
    pub enumeration_cap: Option<u32>,
    pub matrix_cap: Option<usize>,
    pub term_cap: Option<u64>,
    pub subgroup_cap: Option<usize>,
    pub certify_cap: Option<usize>,
    pub jobs: Option<usize>,
    pub heavy: Option<bool>,
}

impl FileConfig {
    pub fn caps(&self) -> CapOverrides {
        CapOverrides {
            enumeration_cap: self.enumeration_cap,
            matrix_cap: self.matrix_cap,
            term_cap: self.term_cap,
            subgroup_cap: self.subgroup_cap,
            certify_cap: self.certify_cap,
        }
    }
}

impl CapOverrides {
    pub fn apply(&self, caps: &mut Caps) {
        if let Some(v) = self.enumeration_cap {
            caps.enumeration_n = v;
        }
        if let Some(v) = self.matrix_cap {
            caps.matrix_rows = v;
        }
        if let Some(v) = self.term_cap {
            caps.terms = v;
        }
        if let Some(v) = self.subgroup_cap {
            caps.subgroup = v;
        }
        if let Some(v) = self.certify_cap {
            caps.certify_rows = v;
        }
    }

    /// Parses `key=value,key=value`.
    pub fn parse_env(text: &str) -> Result<Self> {
        let mut out = CapOverrides::default();
        for pair in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, value) = pair
                .split_once('=')
                .with_context(|| format!("{CAPS_ENV}: expected key=value, got {pair:?}"))?;
            let value = value.trim();
            let bad = || format!("{CAPS_ENV}: invalid value for {key}: {value:?}");
            match key.trim() {
                "enumeration-cap" => out.enumeration_cap = Some(value.parse().with_context(bad)?),
                "matrix-cap" => out.matrix_cap = Some(value.parse().with_context(bad)?),
                "term-cap" => out.term_cap = Some(value.parse().with_context(bad)?),
                "subgroup-cap" => out.subgroup_cap = Some(value.parse().with_context(bad)?),
                "certify-cap" => out.certify_cap = Some(value.parse().with_context(bad)?),
                other => bail!("{CAPS_ENV}: unknown key {other:?}"),
            }
        }
        Ok(out)
    }
}

pub fn load_file(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn validate(caps: &Caps) -> Result<()> {
    if caps.enumeration_n == 0
        || caps.matrix_rows == 0
        || caps.terms == 0
        || caps.subgroup == 0
        || caps.certify_rows == 0
    {
        bail!("caps must be positive: {caps:?}");
    }
    if caps.enumeration_n > 32 {
        bail!("enumeration cap {} exceeds the limit n <= 32", caps.enumeration_n);
    }
    Ok(())
}
