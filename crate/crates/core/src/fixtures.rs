//! Fixture data: per-field class numbers and ramification data for the mass
//! formula, generator descriptions for the Milnor-square fibre
//! computations, and the reference-value table the verification suite
//! checks against.
//!
//! Files live in `fixtures/` at the repository root and can be overridden
//! with the `QUATLAB_FIXTURES` environment variable or an explicit
//! directory; compiled-in copies are the fallback so the library works from
//! any working directory. Every loaded file is content-hashed (FNV-1a) and
//! the hashes are reported by the verification suite.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const FIELDS_FILE: &str = "fields.json";
pub const MILNOR_FILE: &str = "milnor_fixtures.json";
pub const REFERENCE_FILE: &str = "reference_values.json";

const BUNDLED_FIELDS: &str =
    include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/fields.json"));
const BUNDLED_MILNOR: &str = include_str!(concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/../../fixtures/milnor_fixtures.json"
));
const BUNDLED_REFERENCE: &str = include_str!(concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/../../fixtures/reference_values.json"
));

/// Class number and finite ramification data for K = Q(zeta_m)^+, keyed by
/// m. These are inputs, not computed quantities.
#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct FieldFixture {
    #[serde(rename = "h_K")]
    pub h_k: u64,
    pub ramified_norms: Vec<u64>,
}

/// One Milnor-square fibre computation: the corner ring F_p[x]/(f) (or the
/// 2x2 matrix ring over it) and generator lists for the two unit-group
/// images. Generators are either explicit coefficient vectors or, for the
/// matrix case, named elements resolved in code.
#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct MilnorFixture {
    pub name: String,
    pub p: u64,
    pub modulus_coeffs: Vec<u64>,
    #[serde(default)]
    pub matrix_ring: bool,
    #[serde(rename = "U1_generators")]
    pub u1_generators: Vec<GeneratorSpec>,
    #[serde(rename = "U2_generators")]
    pub u2_generators: Vec<GeneratorSpec>,
    #[serde(default)]
    pub expected_cosets: Option<Vec<Vec<u64>>>,
    #[serde(default)]
    pub action: Option<String>,
    #[serde(default)]
    pub ideal_labels: Option<BTreeMap<String, String>>,
    #[serde(default)]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
pub enum GeneratorSpec {
    /// Coefficient vector of a ring element (commutative case).
    Coeffs(Vec<u64>),
    /// Symbolic name resolved by the pipeline (matrix case): "zeta", "j",
    /// "golden", "one_plus_zeta", "one_minus_zeta_pow:<k>".
    Named(String),
}

/// Reference values the verification suite replays.
#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct ReferenceValues {
    /// m -> exact Eichler constant "num/den".
    pub ei: BTreeMap<String, String>,
    /// m values whose ei numerator must not be a power of two.
    pub numerator_not_power_of_two: Vec<u64>,
    /// Index sets with and without stably free cancellation (spot checks).
    pub sfc_true: Vec<Vec<u64>>,
    pub sfc_false: Vec<Vec<u64>>,
    pub q28_cosets: Vec<String>,
    pub q28_norms: BTreeMap<String, u64>,
    pub q28_class_group_order: u64,
    pub l218_cosets: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct FixtureSet {
    pub fields: BTreeMap<u64, FieldFixture>,
    pub milnor: Vec<MilnorFixture>,
    pub reference: ReferenceValues,
    /// Directory the fixtures were read from; None when the compiled-in
    /// copies were used.
    pub source_dir: Option<PathBuf>,
    /// file name -> FNV-1a hash of the bytes actually used.
    pub hashes: BTreeMap<String, String>,
}

/// FNV-1a, 64-bit, rendered as hex.
pub fn fnv1a_hex(bytes: &[u8]) -> String {
    let mut hash: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    format!("{hash:016x}")
}

fn read_or_bundled(dir: Option<&Path>, file: &str, bundled: &'static str) -> Result<String> {
    if let Some(dir) = dir {
        let path = dir.join(file);
        return std::fs::read_to_string(&path).map_err(|e| {
            Error::FixtureRequired(format!("cannot read {}: {e}", path.display()))
        });
    }
    Ok(bundled.to_string())
}

impl FixtureSet {
    /// Load from `dir`, from `$QUATLAB_FIXTURES`, or fall back to the
    /// compiled-in copies.
    pub fn load(dir: Option<&Path>) -> Result<FixtureSet> {
        let env_dir = std::env::var_os("QUATLAB_FIXTURES").map(PathBuf::from);
        let dir: Option<PathBuf> = dir.map(Path::to_path_buf).or(env_dir);
        let dir_ref = dir.as_deref();

        let fields_raw = read_or_bundled(dir_ref, FIELDS_FILE, BUNDLED_FIELDS)?;
        let milnor_raw = read_or_bundled(dir_ref, MILNOR_FILE, BUNDLED_MILNOR)?;
        let reference_raw = read_or_bundled(dir_ref, REFERENCE_FILE, BUNDLED_REFERENCE)?;

        let fields_by_name: BTreeMap<String, FieldFixture> = serde_json::from_str(&fields_raw)
            .map_err(|e| Error::FixtureRequired(format!("bad {FIELDS_FILE}: {e}")))?;
        let mut fields = BTreeMap::new();
        for (k, v) in fields_by_name {
            let m: u64 = k
                .parse()
                .map_err(|_| Error::FixtureRequired(format!("bad field key {k:?}")))?;
            fields.insert(m, v);
        }
        let milnor: Vec<MilnorFixture> = serde_json::from_str(&milnor_raw)
            .map_err(|e| Error::FixtureRequired(format!("bad {MILNOR_FILE}: {e}")))?;
        let reference: ReferenceValues = serde_json::from_str(&reference_raw)
            .map_err(|e| Error::FixtureRequired(format!("bad {REFERENCE_FILE}: {e}")))?;

        let mut hashes = BTreeMap::new();
        hashes.insert(FIELDS_FILE.to_string(), fnv1a_hex(fields_raw.as_bytes()));
        hashes.insert(MILNOR_FILE.to_string(), fnv1a_hex(milnor_raw.as_bytes()));
        hashes.insert(
            REFERENCE_FILE.to_string(),
            fnv1a_hex(reference_raw.as_bytes()),
        );

        Ok(FixtureSet {
            fields,
            milnor,
            reference,
            source_dir: dir,
            hashes,
        })
    }

    pub fn field(&self, m: u64) -> Result<&FieldFixture> {
        self.fields.get(&m).ok_or_else(|| {
            Error::FixtureRequired(format!(
                "no class-number/ramification fixture for m={m} in {FIELDS_FILE}"
            ))
        })
    }

    pub fn milnor(&self, name: &str) -> Result<&MilnorFixture> {
        self.milnor
            .iter()
            .find(|f| f.name == name)
            .ok_or_else(|| Error::FixtureRequired(format!("no Milnor fixture named {name:?}")))
    }
}
