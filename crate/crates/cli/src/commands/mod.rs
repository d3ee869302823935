pub mod construct;
pub mod deviation;
pub mod estimate;
pub mod validate;

use std::path::Path;

use anyhow::{Context, Result};
use galedim::bias::{BiasSequence, BiasSpec};
use galedim::rational::parse_rational;

/// A rational such as `1/4` means a constant bias; anything else is read as
/// a JSON bias file.
pub fn load_bias(text: &str) -> Result<(BiasSequence, serde_json::Value)> {
    if let Ok(beta) = parse_rational(text) {
        let beta = BiasSequence::constant(beta)?;
        let spec = beta.spec().context("constant bias has a spec")?;
        return Ok((beta, serde_json::to_value(spec)?));
    }
    let path = Path::new(text);
    let raw =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let spec: BiasSpec =
        serde_json::from_str(&raw).with_context(|| format!("parsing bias {}", path.display()))?;
    Ok((spec.build()?, serde_json::to_value(&spec)?))
}
