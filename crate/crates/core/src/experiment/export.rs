use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use serde::Serialize;

use crate::error::Result;
use crate::experiment::report::SCHEMA_VERSION;
use crate::experiment::{to_json, Context, ExperimentConfig};
use crate::grid::write_field_csv;
use crate::wavelet::cwt_spectral;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SliceEntry {
    pub file: String,
    pub scale_index: usize,
    pub spin_index: usize,
    pub scale: f64,
    /// Real rotor coefficients in blade order.
    pub rotor: Vec<f64>,
    /// `w_j a_j^{−n} w_m`, the quadrature weight of `da/a^{n+1} ds`.
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExportManifest {
    pub schema_version: u32,
    pub dimension: usize,
    pub half_width: f64,
    pub points: usize,
    pub spacing: f64,
    pub slices: Vec<SliceEntry>,
}

/// Write `cwt_j{JJ}_s{MM}.csv` per slice and `cwt_manifest.json` into `out`.
pub fn export_cwt(config: &ExperimentConfig, out: &Path) -> Result<ExportManifest> {
    std::fs::create_dir_all(out)?;
    let ctx = Context::new(config)?;
    let (psi, _) = ctx.wavelet_for_export()?;
    let coeffs = cwt_spectral(&ctx.f, psi, &ctx.params)?;
    let params = coeffs.params();
    let mut slices = Vec::with_capacity(params.slice_count());
    for slice in 0..params.slice_count() {
        let (j, m) = params.slice_pair(slice);
        let file = format!("cwt_j{j:02}_s{m:02}.csv");
        write_field_csv(&coeffs.slice(j, m), BufWriter::new(File::create(out.join(&file))?))?;
        slices.push(SliceEntry {
            file,
            scale_index: j,
            spin_index: m,
            scale: params.scales()[j],
            rotor: params.spins()[m].0.rotor().coeffs().iter().map(|c| c.re).collect(),
            weight: params.slice_weight(j, m),
        });
    }
    let grid = coeffs.grid();
    let manifest = ExportManifest {
        schema_version: SCHEMA_VERSION,
        dimension: grid.dim(),
        half_width: grid.half_width(),
        points: grid.points(),
        spacing: grid.spacing(),
        slices,
    };
    std::fs::write(out.join("cwt_manifest.json"), to_json(&manifest)?)?;
    Ok(manifest)
}
