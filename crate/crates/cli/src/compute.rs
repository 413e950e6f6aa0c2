//! Builds report sections from the library's computations.

use frolicher::bca::{self, BcaError, PageDdbarVerdict, Witness, WitnessKind};
use frolicher::bicomplex::{Bidegree, ComplexData, DoubleComplex, Grid};
use frolicher::hodge::{bc_a_harmonic_spaces, harmonic_tower, three_space_decomposition, InnerProduct};
use frolicher::linalg::{format_rational, rat, Matrix, Rational};
use frolicher::models::Shape;
use frolicher::pairing::{self, DualityPairing, InducedPairing};
use frolicher::spectral::{degeneration_page_within, einfty_check, page_basis, page_dims};
use frolicher::zigzag::{self, constructive_decomposition, multiplicity_solve, verify_certificate, Multiplicities, ShapeInventory};
use serde::Serialize;

use crate::error::CliError;
use crate::report::*;

/// A computed section together with the first check it failed, if any.
pub struct Checked<T> {
    pub value: T,
    pub failure: Option<String>,
}

/// Masks cells with `p` beyond the certified column range.
#[derive(Clone, Copy)]
struct Certified {
    grid: Grid,
    max_p: Option<i32>,
}

impl Certified {
    fn of(c: &DoubleComplex) -> Self {
        Certified { grid: c.grid(), max_p: c.certified_max_p() }
    }

    fn allows(&self, p: i32) -> bool {
        self.max_p.is_none_or(|m| p <= m)
    }

    fn grid(&self, rows: Vec<Vec<usize>>) -> DimGrid {
        rows.into_iter()
            .enumerate()
            .map(|(p, row)| row.into_iter().map(|d| self.allows(p as i32).then_some(d)).collect())
            .collect()
    }

    fn totals(&self, total: impl Fn(i32) -> usize) -> Vec<Option<usize>> {
        self.grid
            .total_degrees()
            .map(|k| {
                let top = k.min(self.grid.p_len as i32 - 1);
                self.allows(top).then(|| total(k))
            })
            .collect()
    }
}

fn key(b: Bidegree) -> String {
    b.key()
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn matrix_rows(m: &Matrix) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|row| strings(row)).collect()
}

/// Writes `v` as a combination of basis labels, `e0, e1, …` when the complex has none.
fn combination(labels: Option<&[String]>, v: &[Rational]) -> String {
    let mut out = String::new();
    for (i, x) in v.iter().enumerate() {
        if *x == rat(0) {
            continue;
        }
        let name = labels.and_then(|l| l.get(i)).cloned().unwrap_or_else(|| format!("e{i}"));
        let negative = *x < rat(0);
        let magnitude = if negative { -x.clone() } else { x.clone() };
        let sign = match (out.is_empty(), negative) {
            (true, true) => "-",
            (true, false) => "",
            (false, true) => " - ",
            (false, false) => " + ",
        };
        let coefficient = if magnitude == rat(1) { String::new() } else { format!("{}·", format_rational(&magnitude)) };
        out.push_str(&format!("{sign}{coefficient}{name}"));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn meta(c: &ComplexData) -> ComplexMeta {
    let grid = c.grid();
    let dims = (0..grid.p_len as i32).map(|p| (0..grid.q_len as i32).map(|q| c.dim(Bidegree::new(p, q))).collect()).collect();
    ComplexMeta {
        name: c.name.clone(),
        grid: [grid.p_len, grid.q_len],
        dims,
        total_dim: grid.bidegrees().map(|b| c.dim(b)).sum(),
        certified_max_p: c.certified_max_p(),
    }
}

pub fn base_report(c: &ComplexData) -> Report {
    let mut report = Report::new(meta(c));
    if let Some(m) = c.certified_max_p() {
        if (m as usize) + 1 < c.grid().p_len {
            report.warnings.push(format!(
                "columns p > {m} lie outside the certified range of the truncated model and are suppressed; \
                 global verdicts are those of the truncated model"
            ));
        }
    }
    report
}

pub fn validation(data: &ComplexData) -> Checked<ValidationSection> {
    let report = data.validate();
    let violations: Vec<ViolationEntry> = report
        .violations
        .iter()
        .map(|v| ViolationEntry { identity: v.kind.to_string(), at: key(v.at), product: matrix_rows(&v.product) })
        .collect();
    let failure = (!violations.is_empty()).then(|| format!("complex fails validation: {report}"));
    Checked { value: ValidationSection { valid: violations.is_empty(), violations }, failure }
}

pub fn pages(c: &DoubleComplex, r_max: usize, show_reps: bool) -> PagesSection {
    let cert = Certified::of(c);
    let table = page_dims(c, r_max);
    let pages = (1..=r_max)
        .map(|r| {
            let representatives = if show_reps {
                c.grid()
                    .bidegrees()
                    .filter(|b| cert.allows(b.p))
                    .filter_map(|b| {
                        let basis = page_basis(c, r, b);
                        (!basis.reps.is_empty()).then(|| Representatives {
                            at: key(b),
                            classes: basis.reps.iter().map(|v| combination(c.labels(b), v)).collect(),
                        })
                    })
                    .collect()
            } else {
                Vec::new()
            };
            PageEntry {
                r,
                e: cert.grid(table.e_grid(r)),
                ebar: cert.grid(table.ebar_grid(r)),
                e_total: cert.totals(|k| table.e_total(r, k)),
                representatives,
            }
        })
        .collect();
    PagesSection { r_max, pages, degeneration_page: degeneration_page_within(c, c.certified_max_p()) }
}

pub fn bca(c: &DoubleComplex, r_max: usize) -> Result<BcaSection, CliError> {
    let cert = Certified::of(c);
    let table = bca::bca_dims(c, r_max).map_err(|e| CliError::invalid("bca", e))?;
    let pages = (1..=r_max)
        .map(|r| BcaEntry { r, bott_chern: cert.grid(table.bc_grid(r)), aeppli: cert.grid(table.a_grid(r)) })
        .collect();
    Ok(BcaSection { r_max, pages })
}

pub fn inequality(c: &DoubleComplex, r_max: usize) -> Result<Checked<Vec<InequalityEntry>>, CliError> {
    let mut entries = Vec::new();
    for r in 1..=r_max {
        let report = bca::inequality_check(c, r).map_err(|e| CliError::invalid("bca", e))?;
        entries.push(InequalityEntry {
            r,
            bc_plus_a: report.bc_plus_a,
            e_plus_ebar: report.e_plus_ebar,
            twice_betti: report.twice_betti,
            chain_holds: report.chain_holds,
            outer_equal: report.outer_equal,
            holds: report.holds(),
        });
    }
    let failure = entries.iter().find(|e| !e.holds).map(|e| format!("the dimension inequality fails on page {}", e.r));
    Ok(Checked { value: entries, failure })
}

fn describe(kind: WitnessKind) -> &'static str {
    match kind {
        WitnessKind::ErExactNotDExact => "d-closed and E_r-exact but not d-exact",
        WitnessKind::EbarExactNotDExact => "d-closed and Ē_r-exact but not d-exact",
        WitnessKind::DExactNotErErbarExact => "d-exact but not E_rĒ_r-exact",
        WitnessKind::ExactNotErErbarExact => "E_r-, Ē_r- and d-exact but not E_rĒ_r-exact",
    }
}

fn variant_name<T: Serialize>(x: &T) -> String {
    match serde_json::to_value(x) {
        Ok(serde_json::Value::String(s)) => s,
        other => format!("{other:?}"),
    }
}

fn witness(c: &DoubleComplex, w: &Witness) -> WitnessEntry {
    // Labels name the basis of the complex itself; dual variants use plain coordinates.
    let labels = match variant_name(&w.variant).as_str() {
        "complex" | "swapped" => c.labels(w.at),
        _ => None,
    };
    WitnessEntry {
        at: key(w.at),
        variant: variant_name(&w.variant),
        kind: variant_name(&w.kind),
        description: describe(w.kind).to_string(),
        vector: strings(&w.vector),
        form: combination(labels, &w.vector),
    }
}

fn verdict_entry(c: &DoubleComplex, v: &PageDdbarVerdict, explain: bool) -> VerdictEntry {
    VerdictEntry {
        r: v.r,
        verdict: v.verdict,
        criteria: v.criteria().into_iter().map(|(name, holds)| Criterion { name: name.to_string(), holds }).collect(),
        consistent: v.consistent(),
        failing_bidegrees: if explain { v.failing_bidegrees.iter().map(|&b| key(b)).collect() } else { Vec::new() },
        witness: if explain { v.witness.as_ref().map(|w| witness(c, w)) } else { None },
    }
}

/// The page-`(r−1)` ∂∂̄ verdict; disagreeing criteria abort with the full evaluation.
pub fn verdict(c: &DoubleComplex, r: usize, inventory: Option<&ShapeInventory>, explain: bool) -> Result<VerdictEntry, CliError> {
    if r == 0 {
        return Err(CliError::Usage("page index --r must be at least 1".into()));
    }
    match bca::page_ddbar_verdict(c, r, inventory) {
        Ok(v) => Ok(verdict_entry(c, &v, explain)),
        Err(BcaError::Inconsistent { summary, verdict, .. }) => {
            let dump = serde_json::to_value(verdict_entry(c, &verdict, true)).expect("verdicts serialize");
            Err(CliError::Inconsistent { message: format!("criteria disagree on page {r}: {summary}"), dump })
        }
        Err(e) => Err(CliError::invalid("bca", e)),
    }
}

pub fn inner_product(c: &DoubleComplex, gram: Option<&str>, seed: u64) -> Result<(InnerProduct, String), CliError> {
    match gram {
        None => Ok((InnerProduct::identity(), "identity".into())),
        Some("random") => Ok((InnerProduct::random(c, seed), format!("random (seed {seed})"))),
        Some(path) => {
            let text = crate::input::read(path)?;
            let ip = InnerProduct::from_json(c, &text).map_err(|e| CliError::invalid("gram", format!("{path}: {e}")))?;
            Ok((ip, format!("gram file {path}")))
        }
    }
}

pub fn hodge(c: &DoubleComplex, ip: &InnerProduct, metric: String, r_max: usize) -> Checked<HodgeSection> {
    let cert = Certified::of(c);
    let tower = harmonic_tower(c, ip, r_max);
    let table = page_dims(c, r_max);
    let grid = c.grid();
    let mut failure = (!tower.laplacian_route_agrees).then(|| "the Laplacian kernels differ from the harmonic spaces".to_string());
    let pages = (1..=r_max)
        .map(|r| {
            let dims = tower.dims(r);
            let matches_pages = dims == table.e_grid(r);
            let decomposition_checked = grid.bidegrees().all(|b| three_space_decomposition(c, ip, &tower, r, b).is_ok());
            let mut bc = vec![vec![0; grid.q_len]; grid.p_len];
            let mut a = bc.clone();
            for b in grid.bidegrees() {
                match bc_a_harmonic_spaces(c, ip, r, b) {
                    Ok((h_bc, h_a)) => {
                        bc[b.p as usize][b.q as usize] = h_bc.dim();
                        a[b.p as usize][b.q as usize] = h_a.dim();
                    }
                    Err(e) => {
                        failure.get_or_insert_with(|| e.to_string());
                    }
                }
            }
            if !matches_pages {
                failure.get_or_insert_with(|| format!("harmonic dimensions differ from e_{r}"));
            }
            if !decomposition_checked {
                failure.get_or_insert_with(|| format!("the three-space decomposition fails on page {r}"));
            }
            HodgeEntry {
                r,
                harmonic: cert.grid(dims),
                matches_pages,
                decomposition_checked,
                bott_chern_harmonic: cert.grid(bc),
                aeppli_harmonic: cert.grid(a),
            }
        })
        .collect();
    Checked { value: HodgeSection { metric, r_max, laplacian_route_agrees: tower.laplacian_route_agrees, pages }, failure }
}

fn inventory_entries(inv: &ShapeInventory) -> Vec<InventoryEntry> {
    inv.entries
        .iter()
        .map(|(shape, m): &(Shape, usize)| InventoryEntry {
            shape: shape.to_string(),
            support: shape.support().into_iter().map(key).collect(),
            multiplicity: *m,
        })
        .collect()
}

pub struct Decomposition {
    pub section: DecompositionSection,
    pub inventory: Option<ShapeInventory>,
    pub certificate: Option<zigzag::DecompositionCertificate>,
    pub failure: Option<String>,
}

pub fn decomposition(c: &DoubleComplex, r_max: usize, constructive: bool, seed: u64) -> Result<Decomposition, CliError> {
    let solved = multiplicity_solve(c, r_max).map_err(|e| CliError::invalid("decomposition", e))?;
    let mut section = DecompositionSection {
        r_max,
        status: String::new(),
        nullity: 0,
        inventory: None,
        solutions: Vec::new(),
        truncated: false,
        certificate: None,
    };
    let mut certificate = None;
    let mut failure = None;
    match &solved {
        Multiplicities::Unique { inventory, nullity } => {
            section.status = "unique".into();
            section.nullity = *nullity;
            section.inventory = Some(inventory_entries(inventory));
            if constructive {
                let cert = constructive_decomposition(c, inventory, seed).map_err(|e| CliError::invalid("decomposition", e))?;
                let verified = verify_certificate(c, &cert);
                if !verified.accepted {
                    failure = Some(format!("certificate rejected: {}", verified.reason.clone().unwrap_or_default()));
                }
                section.certificate = Some(CertificateEntry {
                    seed,
                    accepted: verified.accepted,
                    failing_block: verified.failing_block,
                    reason: verified.reason,
                    file: None,
                });
                certificate = Some(cert);
            }
        }
        Multiplicities::Ambiguous { nullity, solutions, truncated } => {
            section.status = "ambiguous".into();
            section.nullity = *nullity;
            section.solutions = solutions.iter().map(inventory_entries).collect();
            section.truncated = *truncated;
        }
    }
    let inventory = solved.unique().cloned();
    Ok(Decomposition { section, inventory, certificate, failure })
}

fn induced_entry(p: &InducedPairing) -> InducedEntry {
    InducedEntry {
        at: key(p.at),
        partner: key(p.partner),
        dims: [p.gram.rows(), p.gram.cols()],
        rank: p.rank,
        well_defined: p.well_defined,
        nondegenerate: p.nondegenerate,
    }
}

pub fn duality(c: &DoubleComplex, pairing: &DualityPairing, r_max: usize) -> Result<Checked<DualitySection>, CliError> {
    let report = pairing::validate_pairing(c, pairing);
    let grid = c.grid();
    let paired: Vec<Bidegree> = grid.bidegrees().filter(|&b| grid.contains(pairing.partner(b))).collect();
    let mut pages = Vec::new();
    for r in 1..=r_max {
        let page = paired.iter().map(|&b| induced_entry(&pairing::induced_pairing_er(c, pairing, r, b))).collect();
        let bott_chern_aeppli = paired
            .iter()
            .map(|&b| pairing::induced_pairing_bc_a(c, pairing, r, b).map(|p| induced_entry(&p)))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::invalid("pairing", e))?;
        let self_pairing = pairing::induced_pairing_bc_bc(c, pairing, r).map_err(|e| match e {
            pairing::PairingError::Inconsistent { r, nondegenerate, verdict } => CliError::Inconsistent {
                message: e.to_string(),
                dump: serde_json::json!({ "r": r, "bott_chern_self_nondegenerate": nondegenerate, "page_verdict": verdict }),
            },
            other => CliError::invalid("pairing", other),
        })?;
        pages.push(DualityPage {
            r,
            page,
            bott_chern_aeppli,
            bott_chern_self: self_pairing.blocks.iter().filter(|p| grid.contains(p.partner)).map(induced_entry).collect(),
            bott_chern_self_nondegenerate: self_pairing.nondegenerate,
            page_verdict: self_pairing.verdict,
            exact_closed_orthogonal: paired.iter().all(|&b| pairing::exact_closed_orthogonal(c, pairing, r, b)),
        });
    }
    let note = if report.valid && report.perfect {
        "the pairing is compatible and perfect, so non-degeneracy of the induced pairings is expected".to_string()
    } else {
        "the pairing is not both compatible and perfect; non-degeneracy of the induced pairings is reported, not implied".to_string()
    };
    let failure = (!report.valid).then(|| {
        let n = report.violations.len();
        format!("the pairing violates the Stokes identity on {n} basis pair{}", if n == 1 { "" } else { "s" })
    });
    let section = DualitySection {
        n: pairing.n,
        valid: report.valid,
        perfect: report.perfect,
        imperfect_at: report.imperfect_at.iter().map(|&b| key(b)).collect(),
        violations: report.violations.iter().map(pairing_violation).collect(),
        pages,
        note,
    };
    Ok(Checked { value: section, failure })
}

fn pairing_violation(v: &pairing::StokesViolation) -> StokesEntry {
    StokesEntry {
        differential: variant_name(&v.differential),
        at: key(v.at),
        alpha: v.alpha,
        beta: v.beta,
        value: format_rational(&v.value),
    }
}

pub fn einfty(c: &DoubleComplex) -> Checked<EinftySection> {
    let report = einfty_check(c);
    let degrees = report.degrees.iter().map(|&(k, e_infinity, betti)| EinftyDegree { k, e_infinity, betti }).collect();
    let failure = (!report.holds).then(|| "Σ e_∞ differs from the Betti numbers".to_string());
    Checked { value: EinftySection { holds: report.holds, degrees }, failure }
}
