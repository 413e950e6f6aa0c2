//! Markdown rendering of a [`Report`]. Grids put `p` in rows, increasing downward, and
//! `q` in columns.

use std::fmt::Write;

use crate::report::*;

const SUPPRESSED: &str = "·";

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// An aligned Markdown table; the first column is left-aligned, the rest right-aligned.
fn table(header: &[String], rows: &[Vec<String>]) -> String {
    let width = |i: usize| rows.iter().map(|r| r[i].chars().count()).chain([header[i].chars().count(), 3]).max().unwrap_or(3);
    let widths: Vec<usize> = (0..header.len()).map(width).collect();
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (c, &w))| if i == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
            .collect();
        format!("| {} |\n", padded.join(" | "))
    };
    let mut out = line(header);
    let rule: Vec<String> =
        widths.iter().enumerate().map(|(i, &w)| if i == 0 { format!(":{}", "-".repeat(w - 1)) } else { format!("{}:", "-".repeat(w - 1)) }).collect();
    out.push_str(&format!("| {} |\n", rule.join(" | ")));
    for r in rows {
        out.push_str(&line(r));
    }
    out
}

fn cell(d: &Option<usize>) -> String {
    d.map_or_else(|| SUPPRESSED.to_string(), |d| d.to_string())
}

fn dim_table(grid: &[Vec<String>]) -> String {
    let q_len = grid.first().map_or(0, Vec::len);
    let header: Vec<String> = std::iter::once("p \\ q".to_string()).chain((0..q_len).map(|q| q.to_string())).collect();
    let rows: Vec<Vec<String>> =
        grid.iter().enumerate().map(|(p, row)| std::iter::once(p.to_string()).chain(row.iter().cloned()).collect()).collect();
    table(&header, &rows)
}

fn grid_table(grid: &DimGrid) -> String {
    dim_table(&grid.iter().map(|row| row.iter().map(cell).collect()).collect::<Vec<_>>())
}

fn totals_table(label: &str, totals: &[Option<usize>]) -> String {
    let header: Vec<String> = std::iter::once("k".to_string()).chain((0..totals.len()).map(|k| k.to_string())).collect();
    let row: Vec<String> = std::iter::once(label.to_string()).chain(totals.iter().map(cell)).collect();
    table(&header, &[row])
}

pub fn markdown(report: &Report) -> String {
    let mut out = String::new();
    let c = &report.complex;
    let _ = writeln!(out, "# Report: {}\n", c.name);
    let _ = write!(out, "Format version {}. Grid {} × {}, total dimension {}.", report.format_version, c.grid[0], c.grid[1], c.total_dim);
    if let Some(m) = c.certified_max_p {
        let _ = write!(out, " Certified columns p ≤ {m}.");
    }
    out.push_str("\n\n");
    for w in &report.warnings {
        let _ = writeln!(out, "> **Warning:** {w}\n");
    }
    out.push_str("## Dimensions\n\n");
    out.push_str(&dim_table(&c.dims.iter().map(|row| row.iter().map(usize::to_string).collect()).collect::<Vec<_>>()));

    if let Some(v) = &report.validation {
        render_validation(&mut out, v);
    }
    if let Some(p) = &report.pages {
        render_pages(&mut out, p);
    }
    if let Some(b) = &report.bca {
        render_bca(&mut out, b);
    }
    if !report.inequality.is_empty() {
        render_inequality(&mut out, &report.inequality);
    }
    if !report.verdicts.is_empty() {
        render_verdicts(&mut out, &report.verdicts);
    }
    if let Some(h) = &report.hodge {
        render_hodge(&mut out, h);
    }
    if let Some(d) = &report.decomposition {
        render_decomposition(&mut out, d);
    }
    if let Some(d) = &report.duality {
        render_duality(&mut out, d);
    }
    if let Some(e) = &report.einfty {
        render_einfty(&mut out, e);
    }
    out
}

fn render_validation(out: &mut String, v: &ValidationSection) {
    out.push_str("\n## Validation\n\n");
    if v.valid {
        out.push_str("All identities hold.\n");
        return;
    }
    let rows: Vec<Vec<String>> = v
        .violations
        .iter()
        .map(|x| {
            let product = x.product.iter().map(|row| format!("[{}]", row.join(", "))).collect::<Vec<_>>().join(" ");
            vec![format!("({})", x.at), x.identity.clone(), product]
        })
        .collect();
    out.push_str(&table(&["bidegree".into(), "identity".into(), "product".into()], &rows));
}

fn render_pages(out: &mut String, p: &PagesSection) {
    out.push_str("\n## Spectral sequence pages\n");
    for page in &p.pages {
        let _ = writeln!(out, "\n### E_{}\n", page.r);
        out.push_str(&grid_table(&page.e));
        let _ = writeln!(out, "\n### Ē_{}\n", page.r);
        out.push_str(&grid_table(&page.ebar));
        out.push('\n');
        out.push_str(&totals_table(&format!("Σ e_{}", page.r), &page.e_total));
        if !page.representatives.is_empty() {
            let _ = writeln!(out, "\nRepresentatives on E_{}:\n", page.r);
            for reps in &page.representatives {
                let _ = writeln!(out, "- ({}): {}", reps.at, reps.classes.join("; "));
            }
        }
    }
    let _ = writeln!(out, "\nDegeneration page: {}", p.degeneration_page);
}

fn render_bca(out: &mut String, b: &BcaSection) {
    out.push_str("\n## Bott-Chern and Aeppli cohomology\n");
    for page in &b.pages {
        let _ = writeln!(out, "\n### E_{},BC\n", page.r);
        out.push_str(&grid_table(&page.bott_chern));
        let _ = writeln!(out, "\n### E_{},A\n", page.r);
        out.push_str(&grid_table(&page.aeppli));
    }
}

fn render_inequality(out: &mut String, entries: &[InequalityEntry]) {
    out.push_str("\n## Dimension inequality\n\n");
    let header: Vec<String> = ["r", "Σ BC + Σ A", "Σ E + Σ Ē", "2 Σ b", "chain", "outer equal", "holds"].map(String::from).to_vec();
    let rows: Vec<Vec<String>> = entries
        .iter()
        .map(|e| {
            vec![
                e.r.to_string(),
                e.bc_plus_a.to_string(),
                e.e_plus_ebar.to_string(),
                e.twice_betti.to_string(),
                yes_no(e.chain_holds).into(),
                yes_no(e.outer_equal).into(),
                yes_no(e.holds).into(),
            ]
        })
        .collect();
    out.push_str(&table(&header, &rows));
}

fn render_verdicts(out: &mut String, verdicts: &[VerdictEntry]) {
    out.push_str("\n## Page ∂∂̄ verdicts\n\n");
    let names: Vec<String> = verdicts.iter().flat_map(|v| v.criteria.iter().map(|c| c.name.clone())).fold(Vec::new(), |mut acc, n| {
        if !acc.contains(&n) {
            acc.push(n);
        }
        acc
    });
    let header: Vec<String> = ["r", "page", "verdict"].into_iter().map(String::from).chain(names.iter().cloned()).collect();
    let rows: Vec<Vec<String>> = verdicts
        .iter()
        .map(|v| {
            let mut row = vec![v.r.to_string(), v.r.saturating_sub(1).to_string(), v.verdict.to_string()];
            for n in &names {
                row.push(v.criteria.iter().find(|c| &c.name == n).map_or("–".into(), |c| c.holds.to_string()));
            }
            row
        })
        .collect();
    out.push_str(&table(&header, &rows));
    for v in verdicts {
        let failed: Vec<&str> = v.criteria.iter().filter(|c| !c.holds).map(|c| c.name.as_str()).collect();
        if !failed.is_empty() {
            let _ = writeln!(out, "\nOn E_{} the failing criteria are {}.", v.r, failed.join(", "));
        }
        if !v.failing_bidegrees.is_empty() {
            let at: Vec<String> = v.failing_bidegrees.iter().map(|b| format!("({b})")).collect();
            let _ = writeln!(out, "E_{},BC → E_{},A is not an isomorphism at {}.", v.r, v.r, at.join(", "));
        }
        if let Some(w) = &v.witness {
            let _ = writeln!(out, "Witness in {} at ({}), {}: `{}`", variant_phrase(&w.variant), w.at, w.description, w.form);
        }
    }
}

fn variant_phrase(variant: &str) -> &str {
    match variant {
        "complex" => "the complex",
        "dual" => "the reflected dual",
        "swapped" => "the complex with d1 and d2 exchanged",
        "swapped_dual" => "the reflected dual with d1 and d2 exchanged",
        other => other,
    }
}

fn render_hodge(out: &mut String, h: &HodgeSection) {
    let _ = writeln!(out, "\n## Harmonic theory\n\nMetric: {}. Laplacian kernels agree with the harmonic tower: {}.", h.metric, yes_no(h.laplacian_route_agrees));
    for page in &h.pages {
        let _ = writeln!(
            out,
            "\n### H_{}\n\nMatches e_{}: {}. Orthogonal decomposition checked: {}.\n",
            page.r,
            page.r,
            yes_no(page.matches_pages),
            yes_no(page.decomposition_checked)
        );
        out.push_str(&grid_table(&page.harmonic));
        let _ = writeln!(out, "\nH_{},BC:\n", page.r);
        out.push_str(&grid_table(&page.bott_chern_harmonic));
        let _ = writeln!(out, "\nH_{},A:\n", page.r);
        out.push_str(&grid_table(&page.aeppli_harmonic));
    }
}

fn inventory_table(entries: &[InventoryEntry]) -> String {
    let rows: Vec<Vec<String>> =
        entries.iter().map(|e| vec![e.shape.clone(), e.support.iter().map(|b| format!("({b})")).collect::<Vec<_>>().join(" "), e.multiplicity.to_string()]).collect();
    table(&["shape".into(), "support".into(), "multiplicity".into()], &rows)
}

fn render_decomposition(out: &mut String, d: &DecompositionSection) {
    let _ = writeln!(out, "\n## Decomposition\n\nInvariants through page {}. Solution is {} (nullity {}).\n", d.r_max, d.status, d.nullity);
    if let Some(inv) = &d.inventory {
        out.push_str(&inventory_table(inv));
    }
    for (i, s) in d.solutions.iter().enumerate() {
        let _ = writeln!(out, "\nCandidate {}:\n", i + 1);
        out.push_str(&inventory_table(s));
    }
    if d.truncated {
        out.push_str("\nThe search for candidates was truncated.\n");
    }
    if let Some(cert) = &d.certificate {
        let _ = write!(out, "\nCertificate (seed {}): {}", cert.seed, if cert.accepted { "accepted" } else { "rejected" });
        if let Some(b) = cert.failing_block {
            let _ = write!(out, ", first failing block {b}");
        }
        if let Some(r) = &cert.reason {
            let _ = write!(out, ", {r}");
        }
        if let Some(f) = &cert.file {
            let _ = write!(out, ", written to {f}");
        }
        out.push_str(".\n");
    }
}

fn induced_table(entries: &[InducedEntry]) -> String {
    let rows: Vec<Vec<String>> = entries
        .iter()
        .map(|e| {
            vec![
                format!("({})", e.at),
                format!("({})", e.partner),
                format!("{} × {}", e.dims[0], e.dims[1]),
                e.rank.to_string(),
                yes_no(e.well_defined).into(),
                e.nondegenerate.map_or("–".into(), |n| yes_no(n).to_string()),
            ]
        })
        .collect();
    table(&["at".into(), "partner".into(), "dims".into(), "rank".into(), "well defined".into(), "non-degenerate".into()], &rows)
}

fn render_duality(out: &mut String, d: &DualitySection) {
    let _ = writeln!(out, "\n## Duality\n\nTop degree ({n},{n}). Compatible: {}. Perfect: {}.", yes_no(d.valid), yes_no(d.perfect), n = d.n);
    if !d.imperfect_at.is_empty() {
        let _ = writeln!(out, "Imperfect blocks at {}.", d.imperfect_at.join("; "));
    }
    for v in &d.violations {
        let _ = writeln!(out, "- {} Stokes violation at ({}), basis pair ({}, {}): {}", v.differential, v.at, v.alpha, v.beta, v.value);
    }
    let _ = writeln!(out, "\nNote: {}.", d.note);
    for page in &d.pages {
        let _ = writeln!(
            out,
            "\n### Page {}\n\nE_rĒ_r verdict: {}. BC self-pairing non-degenerate: {}. E_r-exact ⟂ E_r-closed: {}.\n\nE_r × E_r:\n",
            page.r,
            page.page_verdict,
            yes_no(page.bott_chern_self_nondegenerate),
            yes_no(page.exact_closed_orthogonal)
        );
        out.push_str(&induced_table(&page.page));
        out.push_str("\nE_BC × E_A:\n\n");
        out.push_str(&induced_table(&page.bott_chern_aeppli));
        out.push_str("\nE_BC × E_BC:\n\n");
        out.push_str(&induced_table(&page.bott_chern_self));
    }
}

fn render_einfty(out: &mut String, e: &EinftySection) {
    let _ = writeln!(out, "\n## Convergence\n\nΣ e_∞ equals the Betti numbers: {}.\n", yes_no(e.holds));
    let header: Vec<String> = std::iter::once("k".to_string()).chain(e.degrees.iter().map(|d| d.k.to_string())).collect();
    let rows = vec![
        std::iter::once("Σ e_∞".to_string()).chain(e.degrees.iter().map(|d| d.e_infinity.to_string())).collect(),
        std::iter::once("b_k".to_string()).chain(e.degrees.iter().map(|d| d.betti.to_string())).collect(),
    ];
    out.push_str(&table(&header, &rows));
}
