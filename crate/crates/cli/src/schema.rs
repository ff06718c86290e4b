//! The workspace file schema: named algebras, dg categories (explicit or by
//! builder), complexes, chain maps, modules, resolutions, functors, and a
//! command list. Scalars are written as integers or "n/d" strings; over a
//! prime field, integers mod p.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct WorkspaceFile {
    pub field: FieldSection,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub algebras: BTreeMap<String, AlgebraSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub categories: BTreeMap<String, CategorySpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub complexes: BTreeMap<String, ComplexSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub chain_maps: BTreeMap<String, ChainMapSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub modules: BTreeMap<String, ModuleSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub resolutions: BTreeMap<String, ResolutionSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub functors: BTreeMap<String, FunctorSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub commands: Vec<CommandSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FieldSection {
    pub kind: String, // "rationals" | "prime"
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
}

/// A scalar literal: "3", "-1/2", or a bare integer.
pub type ScalarLit = toml::Value;

pub type VectorLit = Vec<ScalarLit>;
pub type MatrixLit = Vec<Vec<ScalarLit>>;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AlgebraSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<VectorLit>,
    /// table[i][j] = coordinates of basis_i * basis_j
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<VectorLit>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quiver: Option<QuiverSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct QuiverSpec {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub arrows: Vec<ArrowSpec>,
    /// each relation is a list of terms; a term is a coefficient and a path
    /// written in composition order (first name applied last)
    #[serde(default)]
    pub relations: Vec<Vec<RelationTermSpec>>,
    pub nilpotency_bound: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ArrowSpec {
    pub name: String,
    pub from: String,
    pub to: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RelationTermSpec {
    #[serde(default = "one_lit")]
    pub coeff: ScalarLit,
    pub path: Vec<String>,
}

fn one_lit() -> ScalarLit {
    toml::Value::Integer(1)
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CategorySpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disc: Option<DiscSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sphere: Option<DiscSpec>,
    /// a one-object dg category concentrated in degree zero
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tensor: Option<TensorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub opposite: Option<OppositeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mor: Option<MorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complexes: Option<ComplexesSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hull: Option<HullSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functors: Option<FunctorCatSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DiscSpec {
    pub n: i32,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TensorSpec {
    pub left: String,
    pub right: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct OppositeSpec {
    pub base: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MorSpec {
    pub base: String,
    pub objects: Vec<MorObjectSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MorObjectSpec {
    pub name: String,
    pub source: String,
    pub target: String,
    /// coordinates of a closed degree-0 morphism; omitted means zero
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<VectorLit>,
    /// shorthand for the identity (source must equal target)
    #[serde(default)]
    pub identity: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ComplexesSpec {
    pub algebra: String,
    pub objects: Vec<ModuleComplexSpec>,
    /// when true, check projectivity against the algebra's vertex idempotents
    /// (available for quiver presentations)
    #[serde(default)]
    pub check_projectivity: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ModuleComplexSpec {
    pub name: String,
    pub terms: Vec<ModuleTermSpec>,
    /// differentials[k] maps terms[k] to terms[k+1] (adjacent degrees)
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub differentials: Vec<MatrixLit>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ModuleTermSpec {
    pub degree: i32,
    pub module: ModuleRefSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum ModuleRefSpec {
    /// "regular" or the name of a module defined in [modules]
    Named(String),
    /// eA for the idempotent written as a basis label or expression
    Idempotent { idempotent: String },
    Free { free_rank: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct HullSpec {
    pub base: String,
    pub objects: Vec<TwistedObjectSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TwistedObjectSpec {
    pub name: String,
    pub entries: Vec<TwistedEntrySpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub delta: Vec<DeltaEntrySpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TwistedEntrySpec {
    pub object: String,
    #[serde(default)]
    pub shift: i32,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DeltaEntrySpec {
    pub row: usize,
    pub col: usize,
    pub coords: VectorLit,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FunctorCatSpec {
    pub source: String,
    pub target: String,
    pub functors: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ComplexSpec {
    /// componentwise dimensions, keyed by degree
    pub components: BTreeMap<String, usize>,
    /// differentials keyed by source degree
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub differentials: BTreeMap<String, MatrixLit>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ChainMapSpec {
    pub source: String,
    pub target: String,
    #[serde(default)]
    pub degree: i32,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub components: BTreeMap<String, MatrixLit>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ModuleSpec {
    pub algebra: String,
    pub side: String, // "left" | "right"
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    /// per algebra basis label, a dim x dim matrix
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<BTreeMap<String, MatrixLit>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub free_rank: Option<usize>,
    /// eA or Ae cut out by an idempotent expression
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub idempotent: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ResolutionSpec {
    pub algebra: String,
    pub module: String,
    pub terms: Vec<ModuleRefSpec>,
    pub differentials: Vec<MatrixLit>,
    pub augmentation: MatrixLit,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FunctorSpec {
    pub source: String,
    pub target: String,
    #[serde(default)]
    pub identity: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub object_map: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub components: Vec<FunctorComponentSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FunctorComponentSpec {
    pub source: String,
    pub target: String,
    pub degree: i32,
    pub matrix: MatrixLit,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CommandSpec {
    pub op: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complex: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain_map: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub with: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub object: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module_object: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub idempotent: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub contracted: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub thick: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub morphism: Option<MorphismLit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_length: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MorphismLit {
    pub source: String,
    pub target: String,
    #[serde(default)]
    pub degree: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<VectorLit>,
    #[serde(default)]
    pub identity: bool,
}

pub fn parse_workspace(text: &str) -> Result<WorkspaceFile, toml::de::Error> {
    toml::from_str(text)
}

pub fn emit_workspace(w: &WorkspaceFile) -> Result<String, toml::ser::Error> {
    toml::to_string_pretty(w)
}
