//! Prior manifestness files: `atom<TAB>probability` lines, or a JSON object
//! mapping atom text to probability.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::ground::GroundAtom;
use crate::syntax::parse_atom;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PriorsError {
    #[error("priors line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("priors JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Priors(BTreeMap<GroundAtom, f64>);

fn entry(text: &str, value: f64) -> Result<(GroundAtom, f64), String> {
    let atom = parse_atom(text.trim()).map_err(|e| e.to_string())?;
    let atom = GroundAtom::new(atom).ok_or_else(|| format!("`{}` is not ground", text.trim()))?;
    if !(0.0..=1.0).contains(&value) {
        return Err(format!("prior {value} for {atom} is outside [0,1]"));
    }
    Ok((atom, value))
}

impl Priors {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn parse(text: &str) -> Result<Self, PriorsError> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_tsv(text)
        }
    }

    /// Blank lines and lines starting with `%` or `#` are skipped.
    pub fn from_tsv(text: &str) -> Result<Self, PriorsError> {
        let mut out = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('%') || line.starts_with('#') {
                continue;
            }
            let err = |message: String| PriorsError::Line { line: i + 1, message };
            let (atom, value) = line
                .rsplit_once('\t')
                .ok_or_else(|| err("expected `atom<TAB>probability`".into()))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| err(format!("invalid probability `{}`", value.trim())))?;
            let (atom, value) = entry(atom, value).map_err(err)?;
            out.insert(atom, value);
        }
        Ok(Priors(out))
    }

    pub fn from_json(text: &str) -> Result<Self, PriorsError> {
        let map: BTreeMap<String, f64> =
            serde_json::from_str(text).map_err(|e| PriorsError::Json(e.to_string()))?;
        map.into_iter()
            .map(|(k, v)| entry(&k, v).map_err(PriorsError::Json))
            .collect::<Result<_, _>>()
            .map(Priors)
    }

    pub fn insert(&mut self, atom: GroundAtom, prior: f64) {
        self.0.insert(atom, prior);
    }

    pub fn get(&self, atom: &GroundAtom) -> Option<f64> {
        self.0.get(atom).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroundAtom, f64)> {
        self.0.iter().map(|(a, p)| (a, *p))
    }
}

impl FromIterator<(GroundAtom, f64)> for Priors {
    fn from_iter<I: IntoIterator<Item = (GroundAtom, f64)>>(iter: I) -> Self {
        Priors(iter.into_iter().collect())
    }
}
