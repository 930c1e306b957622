use std::fs;
use std::path::Path;

use clap::Args;
use monogamy::ensemble::{EnsembleSpec, Family};
use monogamy::quantum::{State, StateRecord};
use serde::Serialize;

use crate::error::{CliError, CliResult};

/// Where states come from: a state file, or a generated ensemble.
#[derive(Args, Debug, Clone, Serialize)]
pub struct Source {
    /// JSON state file: one record, or one record per line.
    #[arg(long, conflicts_with = "family")]
    pub file: Option<std::path::PathBuf>,
    /// Ensemble family: haar-pure, ginibre, product-family, ghz, w, bell-c, bell.
    #[arg(long)]
    pub family: Option<Family>,
    /// Subsystem dimensions, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,
    /// Number of ensemble members.
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    /// Rank of ginibre densities.
    #[arg(long)]
    pub rank: Option<usize>,
    /// Product-family split of B as `B1xB2`.
    #[arg(long, value_parser = parse_split)]
    pub split: Option<(usize, usize)>,
}

fn parse_split(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once('x').ok_or_else(|| format!("expected B1xB2, got '{s}'"))?;
    Ok((a.parse().map_err(|_| format!("bad B1 in '{s}'"))?, b.parse().map_err(|_| format!("bad B2 in '{s}'"))?))
}

impl Source {
    pub fn ensemble(&self, seed: Option<u64>) -> CliResult<Option<EnsembleSpec>> {
        let Some(family) = self.family else { return Ok(None) };
        let mut spec = EnsembleSpec::new(family, self.dims.clone(), self.count, seed)?;
        spec.rank = self.rank;
        spec.split = self.split;
        spec.validate()?;
        Ok(Some(spec))
    }

    pub fn load(&self, seed: Option<u64>) -> CliResult<Vec<(String, State)>> {
        if let Some(path) = &self.file {
            return read_states(path);
        }
        match self.ensemble(seed)? {
            Some(spec) => Ok(spec.generate()?),
            None => Err(CliError::Usage("give a state source with --file or --family".into())),
        }
    }

    pub fn load_one(&self, seed: Option<u64>) -> CliResult<(String, State)> {
        let mut states = self.load(seed)?;
        if states.len() != 1 {
            return Err(CliError::Usage(format!("this command takes one state, the source has {}", states.len())));
        }
        Ok(states.remove(0))
    }
}

/// Reads a single JSON record or JSON lines; diagnostics name the line.
pub fn read_states(path: &Path) -> CliResult<Vec<(String, State)>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let name = path.display().to_string();
    let parse = |line: usize, body: &str| -> CliResult<State> {
        let rec: StateRecord = serde_json::from_str(body).map_err(|e| {
            CliError::Io(format!("{name}: malformed state record at line {}, column {}: {e}", line + e.line() - 1, e.column()))
        })?;
        State::from_record(&rec).map_err(|e| match e {
            monogamy::Error::Parse(_) => CliError::Io(format!("{name}: record at line {line}: {e}")),
            other => CliError::from(other),
        })
    };
    if let Ok(state) = parse(1, &text) {
        return Ok(vec![(name, state)]);
    }
    let lines: Vec<(usize, &str)> = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()).collect();
    if lines.len() <= 1 {
        return parse(1, &text).map(|s| vec![(name.clone(), s)]);
    }
    lines.into_iter().map(|(i, l)| parse(i + 1, l).map(|s| (format!("{name}:{}", i + 1), s))).collect()
}
