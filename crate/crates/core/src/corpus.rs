//! The shipped ring and weight-matrix corpus.
//!
//! [`standard_rings`] and [`standard_models`] rebuild every file under the
//! data directory; the files are checked against them in tests.

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::field::{Field, PrimeField, Rationals};
use crate::rings::{
    build_connected_sum_m6, build_cp, build_hp, build_product, build_sphere, build_truncated_poly, AnyAlgebra,
    GradedAlgebra, RingError,
};
use crate::steenrod::Prime;
use crate::web::{IsotropyModel, WebError};

/// Environment variable overriding the corpus location.
pub const DATA_ENV: &str = "STEENWEB_DATA";

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Ring { path: PathBuf, source: RingError },
    #[error("{path}: {message}")]
    Model { path: PathBuf, message: String },
}

/// `$STEENWEB_DATA`, or the `data` directory of the source checkout.
pub fn data_dir() -> PathBuf {
    match std::env::var_os(DATA_ENV) {
        Some(dir) => PathBuf::from(dir),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingEntry {
    pub file: String,
    pub ring: AnyAlgebra,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelEntry {
    pub file: String,
    pub model: IsotropyModel,
}

fn tag<F: Field>(f: &F) -> String {
    f.name().replace('_', "").to_lowercase()
}

fn push<F: Field>(out: &mut Vec<RingEntry>, stem: &str, ring: Result<GradedAlgebra<F>, RingError>)
where
    AnyAlgebra: From<GradedAlgebra<F>>,
{
    let ring = ring.expect("corpus rings are well formed");
    let file = format!("{stem}_{}.json", tag(ring.field()));
    out.push(RingEntry { file, ring: ring.into() });
}

fn product<F: Field>(a: Result<GradedAlgebra<F>, RingError>, b: Result<GradedAlgebra<F>, RingError>) -> Result<GradedAlgebra<F>, RingError> {
    build_product(&a?, &b?)
}

fn common<F: Field>(out: &mut Vec<RingEntry>, f: F, cp_max: usize)
where
    AnyAlgebra: From<GradedAlgebra<F>>,
{
    for n in [2, 3, 4, 5, 7, 8] {
        push(out, &format!("s{n}"), build_sphere(n, f.clone()));
    }
    for m in 1..=cp_max {
        push(out, &format!("cp{m}"), build_cp(m, f.clone()));
    }
    for m in 1..=4 {
        push(out, &format!("hp{m}"), build_hp(m, f.clone()));
    }
    push(out, "s2xs2", product(build_sphere(2, f.clone()), build_sphere(2, f.clone())));
    push(out, "s3xcp2", product(build_sphere(3, f.clone()), build_cp(2, f.clone())));
    push(out, "s3xhp2", product(build_sphere(3, f.clone()), build_hp(2, f.clone())));
    push(out, "s2xhp2", product(build_sphere(2, f.clone()), build_hp(2, f.clone())));
    push(out, "s3xs5", product(build_sphere(3, f.clone()), build_sphere(5, f.clone())));
    push(out, "cp2xhp1", product(build_cp(2, f.clone()), build_hp(1, f.clone())));
}

/// Every ring in the shipped corpus, in file-name order within each field.
pub fn standard_rings() -> Vec<RingEntry> {
    let mut out = Vec::new();

    let z2 = PrimeField(Prime::TWO);
    common(&mut out, z2, 8);
    push(&mut out, "trunc_k1_q5", build_truncated_poly(1, 5, z2));
    push(&mut out, "trunc_k8_q2", build_truncated_poly(8, 2, z2));
    push(&mut out, "trunc_k8_q3", build_truncated_poly(8, 3, z2));

    let z3 = PrimeField(Prime::THREE);
    common(&mut out, z3, 6);
    push(&mut out, "trunc_k6_q3", build_truncated_poly(6, 3, z3));
    push(&mut out, "trunc_k12_q2", build_truncated_poly(12, 2, z3));

    let z5 = PrimeField(Prime::new(5).expect("prime"));
    common(&mut out, z5, 6);
    push(&mut out, "trunc_k2_q10", build_truncated_poly(2, 10, z5));
    push(&mut out, "trunc_k8_q3", build_truncated_poly(8, 3, z5));
    push(&mut out, "trunc_k10_q2", build_truncated_poly(10, 2, z5));

    let q = Rationals;
    common(&mut out, q, 9);
    push(&mut out, "s3xhp3", product(build_sphere(3, q), build_hp(3, q)));
    push(&mut out, "s2xhp3", product(build_sphere(2, q), build_hp(3, q)));
    for g in 1..=3 {
        push(&mut out, &format!("m6g{g}"), build_connected_sum_m6(g));
    }
    push(&mut out, "trunc_k4_q5", build_truncated_poly(4, 5, q));
    out.sort_by(|a, b| a.file.cmp(&b.file));
    out
}

fn columns(cols: &[&[i64]]) -> Vec<Vec<i64>> {
    let r = cols[0].len();
    (0..r).map(|j| cols.iter().map(|c| c[j]).collect()).collect()
}

/// The shipped weight matrices.
pub fn standard_models() -> Vec<ModelEntry> {
    let m = |file: &str, n: usize, w: Vec<Vec<i64>>| ModelEntry {
        file: file.to_string(),
        model: IsotropyModel::new(n, w).expect("corpus models are valid"),
    };
    let mut out = vec![
        m("fixed_set_n8.json", 8, vec![vec![1, 0, 1, 1], vec![0, 1, 1, 0]]),
        m(
            "case3_pair_n16.json",
            16,
            columns(&[&[1, 0], &[1, 0], &[0, 1], &[0, 1], &[2, 0], &[0, 2], &[2, 2], &[2, -2]]),
        ),
        m(
            "chain_z2cubed_n16.json",
            16,
            columns(&[&[1, 0, 0], &[1, 1, 0], &[1, 0, 1], &[1, 1, 1], &[2, 0, 0], &[0, 2, 0], &[0, 0, 2], &[2, 2, 2]]),
        ),
        m(
            "complete_gamma_n16.json",
            16,
            columns(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 0], &[1, 0, 1], &[0, 1, 1], &[1, 1, 1], &[2, 0, 0]]),
        ),
    ];
    for (file, n, r, seed, bound) in [
        ("random_n16_r8.json", 16, 8, 7, 2),
        ("random_n32_r10.json", 32, 10, 7, 2),
        ("case2_n32_r10.json", 32, 10, CASE2_SEED, 1),
        ("case3_n32_r10.json", 32, 10, CASE3_SEED, 1),
    ] {
        let model = crate::web::random_model(n, r, seed, bound).expect("feasible");
        out.push(ModelEntry { file: file.to_string(), model });
    }
    out.sort_by(|a, b| a.file.cmp(&b.file));
    out
}

/// Seeds of bound-1 random models with `n = 32`, `r = 10` whose strict
/// searches end in Case-2 and Case-3 certificates after one reduction.
pub const CASE2_SEED: u64 = 9;
pub const CASE3_SEED: u64 = 38;

fn read(path: &Path) -> Result<String, CorpusError> {
    fs::read_to_string(path).map_err(|source| CorpusError::Io { path: path.to_path_buf(), source })
}

fn json_files(dir: &Path) -> Result<Vec<PathBuf>, CorpusError> {
    let entries = fs::read_dir(dir).map_err(|source| CorpusError::Io { path: dir.to_path_buf(), source })?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    files.sort();
    Ok(files)
}

fn file_name(path: &Path) -> String {
    path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

pub fn load_ring(path: &Path) -> Result<AnyAlgebra, CorpusError> {
    AnyAlgebra::from_json_str(&read(path)?).map_err(|source| CorpusError::Ring { path: path.to_path_buf(), source })
}

pub fn load_model(path: &Path) -> Result<IsotropyModel, CorpusError> {
    let bad = |message: String| CorpusError::Model { path: path.to_path_buf(), message };
    let model: IsotropyModel = serde_json::from_str(&read(path)?).map_err(|e| bad(e.to_string()))?;
    model.validate().map_err(|e: WebError| bad(e.to_string()))?;
    Ok(model)
}

/// Every `*.json` under `<dir>/rings`, sorted by file name.
pub fn load_rings(dir: &Path) -> Result<Vec<RingEntry>, CorpusError> {
    json_files(&dir.join("rings"))?
        .into_iter()
        .map(|p| Ok(RingEntry { file: file_name(&p), ring: load_ring(&p)? }))
        .collect()
}

/// Every `*.json` under `<dir>/web`, sorted by file name.
pub fn load_models(dir: &Path) -> Result<Vec<ModelEntry>, CorpusError> {
    json_files(&dir.join("web"))?
        .into_iter()
        .map(|p| Ok(ModelEntry { file: file_name(&p), model: load_model(&p)? }))
        .collect()
}

pub fn model_json(model: &IsotropyModel) -> String {
    serde_json::to_string_pretty(model).expect("serializable")
}

/// Writes the standard corpus below `dir`.
pub fn write_corpus(dir: &Path) -> Result<usize, CorpusError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CorpusError::Io { path, source }
    };
    let mut count = 0;
    for sub in ["rings", "web"] {
        fs::create_dir_all(dir.join(sub)).map_err(io(&dir.join(sub)))?;
    }
    for e in standard_rings() {
        let path = dir.join("rings").join(&e.file);
        fs::write(&path, e.ring.to_json_string() + "\n").map_err(io(&path))?;
        count += 1;
    }
    for e in standard_models() {
        let path = dir.join("web").join(&e.file);
        fs::write(&path, model_json(&e.model) + "\n").map_err(io(&path))?;
        count += 1;
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rings_validate_and_names_are_unique() {
        let rings = standard_rings();
        let mut files: Vec<&str> = rings.iter().map(|e| e.file.as_str()).collect();
        files.dedup();
        assert_eq!(files.len(), rings.len());
        assert!(files.contains(&"cp6_z2.json"));
        assert!(files.contains(&"s3xhp2_q.json"));
        for e in &rings {
            assert!(e.ring.validate().passed(), "{}", e.file);
        }
    }

    #[test]
    fn models_are_valid() {
        for e in standard_models() {
            assert!(e.model.validate().is_ok(), "{}", e.file);
        }
    }
}
