//! State files.
//!
//! A mixed state is `{"d": d, "re": [[..]], "im": [[..]]}` with `d²×d²` row-major parts;
//! a pure state is `{"pure": {"d": d, "re": [[..]], "im": [[..]]}}` with `d×d` amplitude
//! matrices. `im` may be omitted for real inputs.

use std::path::Path;

use gconc::linalg::CMatrix;
use gconc::state::dm_from_pure;
use gconc::{DensityMatrix, Dim, PureState};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub d: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Option<Vec<Vec<f64>>>,
}

/// A validated input together with the SHA-256 of the raw file bytes.
#[derive(Debug, Clone)]
pub struct LoadedState {
    pub rho: DensityMatrix,
    pub pure: Option<PureState>,
    pub digest: String,
}

fn to_matrix(m: &MatrixFile, side: usize) -> Result<CMatrix, CliError> {
    let rows_ok = |rows: &[Vec<f64>]| rows.len() == side && rows.iter().all(|r| r.len() == side);
    if !rows_ok(&m.re) {
        return Err(CliError::Parse(format!("\"re\" must be a {side}×{side} array for d = {}", m.d)));
    }
    if let Some(im) = &m.im {
        if !rows_ok(im) {
            return Err(CliError::Parse(format!("\"im\" must be a {side}×{side} array for d = {}", m.d)));
        }
    }
    Ok(CMatrix::from_fn(side, side, |i, j| {
        let im = m.im.as_ref().map_or(0.0, |im| im[i][j]);
        Complex64::new(m.re[i][j], im)
    }))
}

/// Parses and validates file contents; `max_dim` caps the local dimension.
pub fn parse_state(bytes: &[u8], max_dim: usize) -> Result<LoadedState, CliError> {
    let digest = hex::encode(Sha256::digest(bytes));
    let parse_err = |e: serde_json::Error| CliError::Parse(e.to_string());
    let mut value: serde_json::Value = serde_json::from_slice(bytes).map_err(parse_err)?;
    if let Some(pure) = value.get_mut("pure").map(serde_json::Value::take) {
        let pure = MatrixFile::deserialize(pure).map_err(parse_err)?;
        let dim = Dim::with_cap(pure.d, max_dim)?;
        let psi = PureState::new(dim, to_matrix(&pure, dim.get())?)?;
        return Ok(LoadedState { rho: dm_from_pure(&psi), pure: Some(psi), digest });
    }
    let m = MatrixFile::deserialize(value).map_err(parse_err)?;
    let dim = Dim::with_cap(m.d, max_dim)?;
    let rho = DensityMatrix::new(dim, to_matrix(&m, dim.composite())?)?;
    Ok(LoadedState { rho, pure: None, digest })
}

pub fn load_state(path: &Path, max_dim: usize) -> Result<LoadedState, CliError> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Read { path: path.to_path_buf(), source })?;
    parse_state(&bytes, max_dim)
}

/// Serializes a density matrix in the input format.
pub fn mixed_to_json(rho: &DensityMatrix) -> String {
    use gconc::BipartiteOperator;
    let m = rho.matrix();
    let part = |f: fn(&Complex64) -> f64| (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect()).collect();
    let file = MatrixFile { d: rho.dim().get(), re: part(|z| z.re), im: Some(part(|z| z.im)) };
    serde_json::to_string(&file).expect("finite entries")
}

/// Serializes a pure state in the input format.
pub fn pure_to_json(psi: &PureState) -> String {
    let m = psi.amplitudes();
    let part = |f: fn(&Complex64) -> f64| (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect()).collect();
    let pure = MatrixFile { d: psi.dim().get(), re: part(|z| z.re), im: Some(part(|z| z.im)) };
    serde_json::to_string(&serde_json::json!({ "pure": pure })).expect("finite entries")
}

#[cfg(test)]
mod tests {
    use super::*;
    use gconc::state::{max_entangled, DEFAULT_DIM_CAP};
    use gconc::BipartiteOperator;

    #[test]
    fn round_trips() {
        let rho = DensityMatrix::isotropic(Dim::new(3).unwrap(), 0.7).unwrap();
        let loaded = parse_state(mixed_to_json(&rho).as_bytes(), DEFAULT_DIM_CAP).unwrap();
        assert_eq!(loaded.rho.matrix(), rho.matrix());
        assert!(loaded.pure.is_none());

        let psi = max_entangled(Dim::new(2).unwrap());
        let loaded = parse_state(pure_to_json(&psi).as_bytes(), DEFAULT_DIM_CAP).unwrap();
        assert!(loaded.pure.is_some());
        assert_eq!(loaded.digest.len(), 64);
    }

    #[test]
    fn rejects_bad_inputs() {
        let cases = [
            r#"{"d": 2, "re": [[1.0]]}"#,
            r#"{"d": 1, "re": [[1.0]]}"#,
            r#"{"d": 2, "re": [[1,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0.5]]}"#,
            r#"{"d": 2, "re": [[0.5,0,0,0],[0,0.5,0,0],[0,0,-0.25,0],[0,0,0,0.25]]}"#,
            r#"{"pure": {"d": 2, "re": [[1,0],[0,1]]}}"#,
            r#"not json"#,
        ];
        for case in cases {
            assert!(parse_state(case.as_bytes(), DEFAULT_DIM_CAP).is_err(), "{case}");
        }
        let big = format!(r#"{{"d": 3, "re": {:?}}}"#, vec![vec![0.0; 9]; 9]);
        assert!(matches!(parse_state(big.as_bytes(), 2), Err(CliError::Invalid(gconc::Error::DimensionAboveCap { .. }))));
    }
}
