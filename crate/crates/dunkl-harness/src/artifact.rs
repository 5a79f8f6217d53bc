//! Sampled-function artifacts on disk: JSON with a {d, n, x_max, k,
//! domain_tag} header and interleaved re/im values.  The header carries
//! everything needed to rebuild the grid and plan.

use std::path::Path;

use dunkl_core::{SampledFunction, TransformPlan};

use crate::Result;

pub fn read_function(path: &Path) -> Result<SampledFunction> {
    let text = std::fs::read_to_string(path)?;
    Ok(SampledFunction::from_json(&text)?)
}

pub fn write_function(path: &Path, f: &SampledFunction) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    std::fs::write(path, f.to_json()?)?;
    Ok(())
}

/// Rebuild a transform plan from a function's grid header.
pub fn plan_for(f: &SampledFunction) -> Result<TransformPlan> {
    Ok(TransformPlan::new(std::sync::Arc::clone(f.grid()))?)
}
