//! The report model shared by every subcommand.
//!
//! A report holds only plain data (strings, integers, booleans), so it serializes to JSON
//! and back without loss and the Markdown renderer needs nothing else.

use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

/// Dimensions indexed `[p][q]`; `None` marks a cell outside the certified range.
pub type DimGrid = Vec<Vec<Option<usize>>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub format_version: u32,
    pub complex: ComplexMeta,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pages: Option<PagesSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bca: Option<BcaSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub inequality: Vec<InequalityEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<VerdictEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hodge: Option<HodgeSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duality: Option<DualitySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub einfty: Option<EinftySection>,
}

impl Report {
    pub fn new(complex: ComplexMeta) -> Self {
        Report {
            format_version: FORMAT_VERSION,
            complex,
            warnings: Vec::new(),
            validation: None,
            pages: None,
            bca: None,
            inequality: Vec::new(),
            verdicts: Vec::new(),
            hodge: None,
            decomposition: None,
            duality: None,
            einfty: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexMeta {
    pub name: String,
    /// `[p_len, q_len]`.
    pub grid: [usize; 2],
    pub dims: Vec<Vec<usize>>,
    pub total_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certified_max_p: Option<i32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationSection {
    pub valid: bool,
    pub violations: Vec<ViolationEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ViolationEntry {
    pub identity: String,
    pub at: String,
    pub product: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PagesSection {
    pub r_max: usize,
    pub pages: Vec<PageEntry>,
    /// First page from which every differential in the certified range vanishes.
    pub degeneration_page: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PageEntry {
    pub r: usize,
    pub e: DimGrid,
    pub ebar: DimGrid,
    /// `Σ_{p+q=k} e_r^{p,q}` for `k = 0, 1, …`.
    pub e_total: Vec<Option<usize>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub representatives: Vec<Representatives>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Representatives {
    pub at: String,
    pub classes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BcaSection {
    pub r_max: usize,
    pub pages: Vec<BcaEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BcaEntry {
    pub r: usize,
    pub bott_chern: DimGrid,
    pub aeppli: DimGrid,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityEntry {
    pub r: usize,
    pub bc_plus_a: usize,
    pub e_plus_ebar: usize,
    pub twice_betti: usize,
    pub chain_holds: bool,
    pub outer_equal: bool,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictEntry {
    pub r: usize,
    pub verdict: bool,
    pub criteria: Vec<Criterion>,
    pub consistent: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failing_bidegrees: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Criterion {
    pub name: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessEntry {
    pub at: String,
    pub variant: String,
    pub kind: String,
    pub description: String,
    pub vector: Vec<String>,
    pub form: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HodgeSection {
    pub metric: String,
    pub r_max: usize,
    pub laplacian_route_agrees: bool,
    pub pages: Vec<HodgeEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HodgeEntry {
    pub r: usize,
    pub harmonic: DimGrid,
    pub matches_pages: bool,
    /// `H_r ⊕ C_r ⊕ C*_r` splits every component orthogonally.
    pub decomposition_checked: bool,
    pub bott_chern_harmonic: DimGrid,
    pub aeppli_harmonic: DimGrid,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionSection {
    pub r_max: usize,
    pub status: String,
    pub nullity: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inventory: Option<Vec<InventoryEntry>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub solutions: Vec<Vec<InventoryEntry>>,
    #[serde(default)]
    pub truncated: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InventoryEntry {
    pub shape: String,
    pub support: Vec<String>,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateEntry {
    pub seed: u64,
    pub accepted: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failing_block: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualitySection {
    pub n: i32,
    pub valid: bool,
    pub perfect: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub imperfect_at: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<StokesEntry>,
    pub pages: Vec<DualityPage>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StokesEntry {
    pub differential: String,
    pub at: String,
    pub alpha: usize,
    pub beta: usize,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualityPage {
    pub r: usize,
    pub page: Vec<InducedEntry>,
    pub bott_chern_aeppli: Vec<InducedEntry>,
    pub bott_chern_self: Vec<InducedEntry>,
    pub bott_chern_self_nondegenerate: bool,
    pub page_verdict: bool,
    pub exact_closed_orthogonal: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InducedEntry {
    pub at: String,
    pub partner: String,
    pub dims: [usize; 2],
    pub rank: usize,
    pub well_defined: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nondegenerate: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EinftySection {
    pub holds: bool,
    pub degrees: Vec<EinftyDegree>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EinftyDegree {
    pub k: i32,
    pub e_infinity: usize,
    pub betti: usize,
}
