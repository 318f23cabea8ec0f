//! Rendering of estimation results: a regression-style text table, a flat
//! serializable document, and a machine-readable CSV.
//!
//! The CSV is the contract and the text is a courtesy. CSV cells use Rust's
//! shortest round-trip float formatting, so identical results always produce
//! byte-identical files.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::Result;
use crate::pds::{stars_label, EstimationResult};
use crate::scalar::Real;

fn as_f64<T: Real>(value: T) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Group a count with comma thousands separators, e.g. 15517 -> "15,517".
pub fn group_thousands(value: usize) -> String {
    let digits = value.to_string();
    let mut out = String::with_capacity(digits.len() + digits.len() / 3);
    for (i, ch) in digits.chars().enumerate() {
        let remaining = digits.len() - i;
        if i > 0 && remaining % 3 == 0 {
            out.push(',');
        }
        out.push(ch);
    }
    out
}

/// One coefficient row of a serializable result document.
#[derive(Debug, Clone, Serialize)]
pub struct TermDoc {
    pub name: String,
    pub coefficient: f64,
    pub std_error: f64,
    pub t_statistic: f64,
    pub stars: String,
}

/// One control block's selection summary.
#[derive(Debug, Clone, Serialize)]
pub struct BlockDoc {
    pub name: String,
    pub selected: usize,
    pub candidates: usize,
    pub selected_names: Vec<String>,
}

/// Fit statistics in plain f64 form.
#[derive(Debug, Clone, Serialize)]
pub struct FitDoc {
    pub aic: f64,
    pub bic: f64,
    pub adj_r_squared: f64,
    pub rmse: f64,
    pub rss: f64,
    pub tss: f64,
    pub parameters: usize,
}

/// One selection pass's diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct PassDoc {
    pub target: String,
    pub lambda: f64,
    pub sigma_hat: f64,
    pub refinements: usize,
    pub sweeps: usize,
    pub selected: usize,
}

/// Flat, serialization-friendly mirror of an [`EstimationResult`].
#[derive(Debug, Clone, Serialize)]
pub struct ResultDoc {
    pub spec: u8,
    pub n: usize,
    pub clusters: usize,
    pub intercept: f64,
    pub intercept_se: f64,
    pub terms: Vec<TermDoc>,
    pub blocks: Vec<BlockDoc>,
    pub selected_total: usize,
    pub fit: Option<FitDoc>,
    pub notes: Vec<String>,
    pub passes: Option<Vec<PassDoc>>,
}

/// Convert a result into its serializable document form.
pub fn result_doc<T: Real>(result: &EstimationResult<T>) -> ResultDoc {
    ResultDoc {
        spec: result.spec_id.number(),
        n: result.n,
        clusters: result.cluster_count,
        intercept: as_f64(result.intercept),
        intercept_se: as_f64(result.intercept_se),
        terms: result
            .interests
            .iter()
            .map(|t| TermDoc {
                name: t.name.clone(),
                coefficient: as_f64(t.coefficient),
                std_error: as_f64(t.std_error),
                t_statistic: as_f64(t.t_statistic),
                stars: stars_label(t.stars).to_string(),
            })
            .collect(),
        blocks: result
            .blocks
            .iter()
            .map(|b| BlockDoc {
                name: b.name.clone(),
                selected: b.selected,
                candidates: b.candidates,
                selected_names: b.selected_names.clone(),
            })
            .collect(),
        selected_total: result.selected_total,
        fit: result.fit.as_ref().map(|f| FitDoc {
            aic: as_f64(f.aic),
            bic: as_f64(f.bic),
            adj_r_squared: as_f64(f.adj_r_squared),
            rmse: as_f64(f.rmse),
            rss: as_f64(f.rss),
            tss: as_f64(f.tss),
            parameters: f.k,
        }),
        notes: result.notes.clone(),
        passes: result.diagnostics.as_ref().map(|passes| {
            passes
                .iter()
                .map(|p| PassDoc {
                    target: p.target.clone(),
                    lambda: as_f64(p.lambda),
                    sigma_hat: as_f64(p.sigma_hat),
                    refinements: p.refinements,
                    sweeps: p.sweeps,
                    selected: p.selected,
                })
                .collect()
        }),
    }
}

fn coefficient_cell(coefficient: f64, stars: &str) -> String {
    format!("{coefficient:.4}{stars}")
}

fn se_cell(std_error: f64) -> String {
    format!("({std_error:.4})")
}

/// Render one result as a readable block of text.
pub fn render_single<T: Real>(result: &EstimationResult<T>) -> String {
    let doc = result_doc(result);
    let mut out = String::new();
    let _ = writeln!(out, "Specification ({})", doc.spec);
    let _ = writeln!(
        out,
        "N = {}    clusters = {}",
        group_thousands(doc.n),
        group_thousands(doc.clusters)
    );
    out.push('\n');

    let name_width = doc
        .terms
        .iter()
        .map(|t| t.name.len())
        .chain(["constant".len()])
        .max()
        .unwrap_or(8);
    for term in &doc.terms {
        let _ = writeln!(
            out,
            "{:<name_width$}  {:>12}  {:>10}  t = {:.2}",
            term.name,
            coefficient_cell(term.coefficient, &term.stars),
            se_cell(term.std_error),
            term.t_statistic,
        );
    }
    let _ = writeln!(
        out,
        "{:<name_width$}  {:>12}  {:>10}",
        "constant",
        format!("{:.4}", doc.intercept),
        se_cell(doc.intercept_se),
    );
    out.push('\n');

    for block in &doc.blocks {
        let _ = writeln!(out, "{} controls selected: {}/{}", block.name, block.selected, block.candidates);
    }
    let _ = writeln!(out, "selected controls total: {}", doc.selected_total);
    match &doc.fit {
        Some(fit) => {
            let _ = writeln!(
                out,
                "AIC {:.1}   BIC {:.1}   adj R2 {:.4}   RMSE {:.4}",
                fit.aic, fit.bic, fit.adj_r_squared, fit.rmse
            );
        }
        None => {
            let _ = writeln!(out, "fit statistics unavailable");
        }
    }
    for note in &doc.notes {
        let _ = writeln!(out, "note: {note}");
    }
    out
}

/// Render several results side by side, one column per specification, in the
/// usual regression-table shape: coefficient rows with standard errors in
/// parentheses beneath, then selection counts and fit statistics.
pub fn render_table<T: Real>(results: &[EstimationResult<T>]) -> String {
    let docs: Vec<ResultDoc> = results.iter().map(result_doc).collect();
    if docs.is_empty() {
        return String::new();
    }

    // Union of term names, ordered by first appearance across columns.
    let mut term_names: Vec<String> = Vec::new();
    for doc in &docs {
        for term in &doc.terms {
            if !term_names.contains(&term.name) {
                term_names.push(term.name.clone());
            }
        }
    }
    let mut block_names: Vec<String> = Vec::new();
    for doc in &docs {
        for block in &doc.blocks {
            if !block_names.contains(&block.name) {
                block_names.push(block.name.clone());
            }
        }
    }

    // Each table row is a label plus one cell per specification.
    let mut rows: Vec<(String, Vec<String>)> = Vec::new();
    let header: Vec<String> = docs.iter().map(|d| format!("({})", d.spec)).collect();
    for name in &term_names {
        let mut coef_cells = Vec::with_capacity(docs.len());
        let mut se_cells = Vec::with_capacity(docs.len());
        for doc in &docs {
            match doc.terms.iter().find(|t| &t.name == name) {
                Some(term) => {
                    coef_cells.push(coefficient_cell(term.coefficient, &term.stars));
                    se_cells.push(se_cell(term.std_error));
                }
                None => {
                    coef_cells.push(String::new());
                    se_cells.push(String::new());
                }
            }
        }
        rows.push((name.clone(), coef_cells));
        rows.push((String::new(), se_cells));
    }
    rows.push((
        "constant".to_string(),
        docs.iter().map(|d| format!("{:.4}", d.intercept)).collect(),
    ));
    rows.push((String::new(), docs.iter().map(|d| se_cell(d.intercept_se)).collect()));
    for name in &block_names {
        rows.push((
            format!("{name} controls"),
            docs.iter()
                .map(|d| match d.blocks.iter().find(|b| &b.name == name) {
                    Some(b) => format!("{}/{}", b.selected, b.candidates),
                    None => String::new(),
                })
                .collect(),
        ));
    }
    rows.push((
        "selected controls".to_string(),
        docs.iter().map(|d| d.selected_total.to_string()).collect(),
    ));
    rows.push(("N".to_string(), docs.iter().map(|d| group_thousands(d.n)).collect()));
    rows.push(("clusters".to_string(), docs.iter().map(|d| d.clusters.to_string()).collect()));
    let fit_row = |label: &str, f: &dyn Fn(&FitDoc) -> String| -> (String, Vec<String>) {
        (
            label.to_string(),
            docs.iter()
                .map(|d| d.fit.as_ref().map(f).unwrap_or_default())
                .collect(),
        )
    };
    rows.push(fit_row("AIC", &|f| format!("{:.1}", f.aic)));
    rows.push(fit_row("BIC", &|f| format!("{:.1}", f.bic)));
    rows.push(fit_row("adj R2", &|f| format!("{:.4}", f.adj_r_squared)));
    rows.push(fit_row("RMSE", &|f| format!("{:.4}", f.rmse)));

    let label_width = rows
        .iter()
        .map(|(label, _)| label.len())
        .max()
        .unwrap_or(0)
        .max("term".len());
    let mut col_widths: Vec<usize> = header.iter().map(String::len).collect();
    for (_, cells) in &rows {
        for (j, cell) in cells.iter().enumerate() {
            col_widths[j] = col_widths[j].max(cell.len());
        }
    }

    let mut out = String::new();
    let _ = write!(out, "{:<label_width$}", "term");
    for (j, h) in header.iter().enumerate() {
        let _ = write!(out, "  {:>width$}", h, width = col_widths[j]);
    }
    out.push('\n');
    let total = label_width + col_widths.iter().map(|w| w + 2).sum::<usize>();
    out.push_str(&"-".repeat(total));
    out.push('\n');
    for (label, cells) in &rows {
        let _ = write!(out, "{label:<label_width$}");
        for (j, cell) in cells.iter().enumerate() {
            let _ = write!(out, "  {:>width$}", cell, width = col_widths[j]);
        }
        out.push('\n');
    }
    out
}

/// Write one result as a flat CSV with a fixed column set.
///
/// Sections: `meta` rows (spec, n, clusters), `coefficient` rows (constant
/// first, then each interest term), `block` rows with selection counts, `fit`
/// rows, and `note` rows. Cells that do not apply stay empty.
pub fn write_result_csv<T: Real, W: std::io::Write>(
    writer: W,
    result: &EstimationResult<T>,
) -> Result<()> {
    let doc = result_doc(result);
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "section",
        "name",
        "value",
        "std_error",
        "t_statistic",
        "stars",
        "selected",
        "candidates",
    ])?;
    let blank = || String::new();
    let meta = |name: &str, value: String| -> [String; 8] {
        [
            "meta".to_string(),
            name.to_string(),
            value,
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
        ]
    };
    w.write_record(&meta("spec", doc.spec.to_string()))?;
    w.write_record(&meta("n", doc.n.to_string()))?;
    w.write_record(&meta("clusters", doc.clusters.to_string()))?;
    w.write_record([
        "coefficient".to_string(),
        "constant".to_string(),
        doc.intercept.to_string(),
        doc.intercept_se.to_string(),
        blank(),
        blank(),
        blank(),
        blank(),
    ])?;
    for term in &doc.terms {
        w.write_record([
            "coefficient".to_string(),
            term.name.clone(),
            term.coefficient.to_string(),
            term.std_error.to_string(),
            term.t_statistic.to_string(),
            term.stars.clone(),
            blank(),
            blank(),
        ])?;
    }
    for block in &doc.blocks {
        w.write_record([
            "block".to_string(),
            block.name.clone(),
            blank(),
            blank(),
            blank(),
            blank(),
            block.selected.to_string(),
            block.candidates.to_string(),
        ])?;
    }
    w.write_record([
        "block".to_string(),
        "total".to_string(),
        blank(),
        blank(),
        blank(),
        blank(),
        doc.selected_total.to_string(),
        blank(),
    ])?;
    if let Some(fit) = &doc.fit {
        for (name, value) in [
            ("aic", fit.aic),
            ("bic", fit.bic),
            ("adj_r_squared", fit.adj_r_squared),
            ("rmse", fit.rmse),
            ("rss", fit.rss),
            ("tss", fit.tss),
        ] {
            w.write_record([
                "fit".to_string(),
                name.to_string(),
                value.to_string(),
                blank(),
                blank(),
                blank(),
                blank(),
                blank(),
            ])?;
        }
        w.write_record([
            "fit".to_string(),
            "parameters".to_string(),
            fit.parameters.to_string(),
            blank(),
            blank(),
            blank(),
            blank(),
            blank(),
        ])?;
    }
    for note in &doc.notes {
        w.write_record([
            "note".to_string(),
            note.clone(),
            blank(),
            blank(),
            blank(),
            blank(),
            blank(),
            blank(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Render one result's CSV into a string.
pub fn result_csv_string<T: Real>(result: &EstimationResult<T>) -> Result<String> {
    let mut buffer = Vec::new();
    write_result_csv(&mut buffer, result)?;
    String::from_utf8(buffer)
        .map_err(|e| crate::error::Error::computation(format!("CSV is not UTF-8: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::SpecId;
    use crate::pds::{BlockSelection, FitStats, InterestEstimate};

    fn sample_result() -> EstimationResult<f64> {
        EstimationResult {
            spec_id: SpecId::S1,
            n: 15_517,
            cluster_count: 333,
            intercept: 1.5,
            intercept_se: 0.5,
            interests: vec![InterestEstimate {
                name: "ADV".to_string(),
                coefficient: -0.25,
                std_error: 0.1,
                t_statistic: -2.5,
                stars: 2,
            }],
            blocks: vec![BlockSelection {
                name: "date".to_string(),
                selected: 1,
                candidates: 2,
                selected_names: vec!["date=2019-03-02".to_string()],
            }],
            selected_total: 1,
            fit: Some(FitStats {
                aic: 120.0,
                bic: 125.5,
                adj_r_squared: 0.42,
                rmse: 0.66,
                rss: 40.0,
                tss: 80.0,
                k: 3,
            }),
            notes: vec![],
            diagnostics: None,
        }
    }

    #[test]
    fn thousands_grouping_matches_hand_formatting() {
        assert_eq!(group_thousands(7), "7");
        assert_eq!(group_thousands(964), "964");
        assert_eq!(group_thousands(1000), "1,000");
        assert_eq!(group_thousands(15_517), "15,517");
        assert_eq!(group_thousands(64_768), "64,768");
        assert_eq!(group_thousands(1_234_567), "1,234,567");
    }

    #[test]
    fn single_rendering_shows_coefficient_se_and_counts() {
        let text = render_single(&sample_result());
        assert!(text.contains("Specification (1)"));
        assert!(text.contains("N = 15,517"));
        assert!(text.contains("-0.2500**"));
        assert!(text.contains("(0.1000)"));
        assert!(text.contains("date controls selected: 1/2"));
        assert!(text.contains("RMSE 0.6600"));
    }

    #[test]
    fn table_rendering_lines_up_two_specifications() {
        let mut second = sample_result();
        second.spec_id = SpecId::S2;
        second.interests.push(InterestEstimate {
            name: "BSN".to_string(),
            coefficient: 0.3912,
            std_error: 0.02,
            t_statistic: 19.56,
            stars: 3,
        });
        let table = render_table(&[sample_result(), second]);
        assert!(table.contains("(1)"));
        assert!(table.contains("(2)"));
        assert_eq!(table.matches("ADV").count(), 1);
        assert!(table.contains("0.3912***"));
        // The BSN row has an empty cell under specification (1).
        let bsn_line = table.lines().find(|l| l.starts_with("BSN")).unwrap();
        assert!(bsn_line.contains("0.3912***"));
        assert!(table.lines().all(|l| !l.contains('\t')));
    }

    #[test]
    fn csv_has_the_fixed_header_and_one_row_per_item() {
        let text = result_csv_string(&sample_result()).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "section,name,value,std_error,t_statistic,stars,selected,candidates"
        );
        // 3 meta + constant + 1 term + 1 block + total + 7 fit rows.
        assert_eq!(text.lines().count(), 1 + 3 + 1 + 1 + 1 + 1 + 7);
        assert!(text.contains("coefficient,ADV,-0.25,0.1,-2.5,**,,"));
        assert!(text.contains("block,date,,,,,1,2"));
        assert!(text.contains("fit,rmse,0.66,,,,,"));
    }

    #[test]
    fn csv_rendering_is_deterministic() {
        let a = result_csv_string(&sample_result()).unwrap();
        let b = result_csv_string(&sample_result()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn doc_conversion_keeps_values_and_star_labels() {
        let doc = result_doc(&sample_result());
        assert_eq!(doc.spec, 1);
        assert_eq!(doc.terms[0].stars, "**");
        assert!((doc.terms[0].coefficient + 0.25).abs() < 1e-15);
        assert_eq!(doc.fit.as_ref().unwrap().parameters, 3);
        assert!(doc.passes.is_none());
    }
}
