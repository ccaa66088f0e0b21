//! Renders an [`AnalysisReport`] as JSON, CSV tables, a Markdown summary and
//! SVG bar charts. Rendering only formats; every number comes from the report.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use crate::analysis::{AnalysisReport, SharePair, TestOutcome};
use crate::corpus::Taxonomy;
use crate::stats::{AsymmetryBreakdown, GroupShareRow, MarkingShares, Ratio, Share};

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Emitted {
    pub written: Vec<PathBuf>,
    /// Figures or tables not produced, with the reason.
    pub skipped: Vec<String>,
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), ReportError> {
    let io_err = |source| ReportError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(io_err)?;
    }
    fs::write(path, bytes).map_err(io_err)
}

/// Two decimals, or empty for a null.
pub fn fmt_pct(v: Option<f64>) -> String {
    v.map(|v| format!("{v:.2}")).unwrap_or_default()
}

/// Four decimals, or empty for a null.
pub fn fmt_prop(v: Option<f64>) -> String {
    v.map(|v| format!("{v:.4}")).unwrap_or_default()
}

fn fmt_p(v: f64) -> String {
    format!("{v:.4e}")
}

pub fn emit_json(report: &AnalysisReport, path: &Path) -> Result<(), ReportError> {
    let mut text = serde_json::to_string_pretty(report).expect("report always serializes");
    text.push('\n');
    write_file(path, text.as_bytes())
}

struct Table {
    name: &'static str,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(name: &'static str, header: &[&'static str]) -> Self {
        Table {
            name,
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn write(&self, dir: &Path) -> Result<PathBuf, ReportError> {
        let path = dir.join(format!("{}.csv", self.name));
        let csv_err = |source| ReportError::Csv {
            path: path.clone(),
            source,
        };
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record(r).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| ReportError::Io {
            path: path.clone(),
            source: e.into_error(),
        })?;
        write_file(&path, &bytes)?;
        Ok(path)
    }
}

fn share_cells(s: &Share) -> [String; 3] {
    [
        s.numerator.to_string(),
        s.denominator.to_string(),
        fmt_pct(s.pct),
    ]
}

fn ratio_cells(r: &Ratio) -> [String; 3] {
    [
        fmt_prop(r.value),
        r.numerator.to_string(),
        r.denominator.to_string(),
    ]
}

fn female_share_table(name: &'static str, per: &[(String, SharePair)]) -> Table {
    let mut t = Table::new(
        name,
        &[
            "backend",
            "female",
            "gendered",
            "female_pct_gendered",
            "female_all",
            "all",
            "female_pct_all",
        ],
    );
    for (b, s) in per {
        let mut row = vec![b.clone()];
        row.extend(share_cells(&s.gendered));
        row.extend(share_cells(&s.all));
        t.push(row);
    }
    t
}

fn group_table(name: &'static str, rows: &[GroupShareRow]) -> Table {
    let mut t = Table::new(
        name,
        &[
            "group",
            "title",
            "occupations",
            "backend",
            "female",
            "denominator",
            "female_pct",
            "workforce_female_pct",
        ],
    );
    for r in rows {
        let series = r
            .per_backend
            .iter()
            .map(|(b, s)| (b.as_str(), s))
            .chain(std::iter::once(("average", &r.average)));
        for (b, s) in series {
            let mut row = vec![
                r.group.clone(),
                r.title.clone(),
                r.occupations.to_string(),
                b.to_string(),
            ];
            row.extend(share_cells(s));
            row.push(fmt_pct(r.workforce_female_pct));
            t.push(row);
        }
    }
    t
}

fn marking_cells(s: &MarkingShares) -> Vec<String> {
    vec![
        s.neutral.denominator.to_string(),
        s.neutral.numerator.to_string(),
        fmt_pct(s.neutral.pct),
        s.marked.numerator.to_string(),
        fmt_pct(s.marked.pct),
        s.preserved.numerator.to_string(),
        fmt_pct(s.preserved.pct),
        s.subject_not_found.to_string(),
        s.untranslated.to_string(),
    ]
}

const MARKING_COLUMNS: [&str; 9] = [
    "located",
    "neutral",
    "neutral_pct",
    "marked",
    "marked_pct",
    "preserved",
    "preserved_pct",
    "subject_not_found",
    "untranslated",
];

fn asymmetry_series(report: &AnalysisReport) -> Vec<(String, &AsymmetryBreakdown)> {
    let Some(a) = &report.asymmetry else {
        return Vec::new();
    };
    let mut out: Vec<(String, &AsymmetryBreakdown)> =
        a.per_backend.iter().map(|(b, v)| (b.clone(), v)).collect();
    out.push(("pooled".to_string(), &a.pooled));
    out
}

fn tables(report: &AnalysisReport) -> (Vec<Table>, Vec<String>) {
    let mut out = Vec::new();
    let mut skipped = Vec::new();
    match &report.occupation {
        Some(occ) => {
            let mut per: Vec<(String, SharePair)> = occ
                .female_share
                .iter()
                .map(|(b, s)| (b.clone(), *s))
                .collect();
            per.push(("pooled".into(), occ.female_share_pooled));
            out.push(female_share_table("occupation_female_share", &per));
            out.push(group_table("group_shares_isco", &occ.groups_isco));
            out.push(group_table("group_shares_soc", &occ.groups_soc));
            let mut nat = Table::new("national_workforce", &["country", "female_pct"]);
            for (c, v) in &occ.national_female_pct {
                nat.push(vec![c.code().to_string(), fmt_pct(Some(*v))]);
            }
            out.push(nat);
            match &occ.transitions {
                Some(tr) => {
                    let mut t = Table::new(
                        "transitions",
                        &[
                            "quality",
                            "she_to_he",
                            "she_to_he_count",
                            "base_she",
                            "he_to_she",
                            "he_to_she_count",
                            "base_he",
                            "excluded_pairs",
                        ],
                    );
                    for r in &tr.rows {
                        let mut row = vec![r.quality.key().to_string()];
                        row.extend(ratio_cells(&r.counts.she_to_he));
                        row.extend(ratio_cells(&r.counts.he_to_she));
                        row.push(r.counts.excluded_pairs.to_string());
                        t.push(row);
                    }
                    out.push(t);
                }
                None => skipped.push("transitions: no qualified occupation detections".into()),
            }
        }
        None => skipped.push("occupation tables: no occupation detections".into()),
    }
    match &report.adjective {
        Some(adj) => {
            let mut per: Vec<(String, SharePair)> = adj
                .female_share
                .iter()
                .map(|(b, s)| (b.clone(), *s))
                .collect();
            per.push(("pooled".into(), adj.female_share_pooled));
            out.push(female_share_table("adjective_female_share", &per));
            let mut t = Table::new("coding_crosstab", &["coding", "he", "she"]);
            for r in &adj.crosstab.rows {
                t.push(vec![
                    r.coding.as_str().to_string(),
                    r.male.to_string(),
                    r.female.to_string(),
                ]);
            }
            out.push(t);
            let mut t = Table::new(
                "coding_summary",
                &["measure", "numerator", "denominator", "pct"],
            );
            let mut row = vec!["she_assigned_feminine_coded".to_string()];
            row.extend(share_cells(&adj.crosstab.female_feminine));
            t.push(row);
            let mut row = vec!["he_assigned_masculine_coded".to_string()];
            row.extend(share_cells(&adj.crosstab.male_masculine));
            t.push(row);
            out.push(t);
            match &adj.personhood {
                Some(p) => {
                    let mut t = Table::new(
                        "personhood",
                        &["change", "proportion", "count", "base", "excluded_pairs"],
                    );
                    for (name, r) in [
                        ("she_to_he", &p.counts.she_to_he),
                        ("he_to_she", &p.counts.he_to_she),
                    ] {
                        let mut row = vec![name.to_string()];
                        row.extend(ratio_cells(r));
                        row.push(p.counts.excluded_pairs.to_string());
                        t.push(row);
                    }
                    out.push(t);
                }
                None => skipped.push("personhood: no personhood detections".into()),
            }
        }
        None => skipped.push("adjective tables: no adjective detections".into()),
    }
    let series = asymmetry_series(report);
    if series.is_empty() {
        skipped.push("asymmetry tables: no asymmetry detections".into());
    } else {
        let mut header = vec!["backend", "subject_gender"];
        header.extend(MARKING_COLUMNS);
        let mut by_gender = Table::new("asymmetry_by_gender", &header);
        let mut header = vec!["backend", "subject_gender", "stereotype"];
        header.extend(MARKING_COLUMNS);
        let mut by_cell = Table::new("asymmetry_by_stereotype", &header);
        let mut header = vec!["backend", "subject", "subject_gender"];
        header.extend(MARKING_COLUMNS);
        let mut by_subject = Table::new("asymmetry_by_subject", &header);
        for (b, br) in &series {
            for r in &br.by_gender {
                let mut row = vec![b.clone(), r.subject_gender.as_str().to_string()];
                row.extend(marking_cells(&r.shares));
                by_gender.push(row);
            }
            for r in &br.by_cell {
                let mut row = vec![
                    b.clone(),
                    r.subject_gender.as_str().to_string(),
                    r.stereotype.as_str().to_string(),
                ];
                row.extend(marking_cells(&r.shares));
                by_cell.push(row);
            }
            for r in &br.by_subject {
                let mut row = vec![
                    b.clone(),
                    r.subject_lemma.clone(),
                    r.subject_gender.as_str().to_string(),
                ];
                row.extend(marking_cells(&r.shares));
                by_subject.push(row);
            }
        }
        out.extend([by_gender, by_cell, by_subject]);
    }
    if !report.tests.is_empty() {
        let mut t = Table::new(
            "significance_tests",
            &[
                "claim",
                "sample_a",
                "n_a",
                "ones_a",
                "sample_b",
                "n_b",
                "ones_b",
                "direction",
                "t",
                "df",
                "p",
                "error",
            ],
        );
        for o in &report.tests {
            let (tv, df, p) = match &o.result {
                Some(r) => (
                    format!("{:.4}", r.t_statistic),
                    r.degrees_of_freedom.to_string(),
                    fmt_p(r.p_value),
                ),
                None => Default::default(),
            };
            t.push(vec![
                o.claim.clone(),
                o.sample_a.label.clone(),
                o.sample_a.n.to_string(),
                o.sample_a.ones.to_string(),
                o.sample_b.label.clone(),
                o.sample_b.n.to_string(),
                o.sample_b.ones.to_string(),
                format!("{:?}", o.direction).to_lowercase(),
                tv,
                df,
                p,
                o.error.clone().unwrap_or_default(),
            ]);
        }
        out.push(t);
    }
    (out, skipped)
}

/// Writes `tables/*.csv` and `summary.md` under `out_dir`.
pub fn emit_tables(report: &AnalysisReport, out_dir: &Path) -> Result<Emitted, ReportError> {
    let (tables, skipped) = tables(report);
    let mut emitted = Emitted {
        skipped,
        ..Emitted::default()
    };
    let dir = out_dir.join("tables");
    for t in &tables {
        emitted.written.push(t.write(&dir)?);
    }
    let path = out_dir.join("summary.md");
    write_file(&path, summary(report).as_bytes())?;
    emitted.written.push(path);
    Ok(emitted)
}

fn md_table(out: &mut String, header: &[&str], rows: &[Vec<String>]) {
    let _ = writeln!(out, "| {} |", header.join(" | "));
    let _ = writeln!(
        out,
        "|{}",
        header.iter().map(|_| "---|").collect::<String>()
    );
    for r in rows {
        let _ = writeln!(out, "| {} |", r.join(" | "));
    }
    out.push('\n');
}

fn pct_with_counts(s: &Share) -> String {
    match s.pct {
        Some(p) => format!("{p:.2}% ({}/{})", s.numerator, s.denominator),
        None => format!("n/a (0/{})", s.denominator),
    }
}

fn test_line(t: &TestOutcome) -> String {
    match (&t.result, &t.error) {
        (Some(r), _) => format!(
            "- `{}`: t = {:.4}, df = {}, one-sided p = {} ({} {}/{} vs {} {}/{})",
            t.claim,
            r.t_statistic,
            r.degrees_of_freedom,
            fmt_p(r.p_value),
            t.sample_a.label,
            t.sample_a.ones,
            t.sample_a.n,
            t.sample_b.label,
            t.sample_b.ones,
            t.sample_b.n
        ),
        (None, Some(e)) => format!("- `{}`: not computed ({e})", t.claim),
        (None, None) => format!("- `{}`: not computed", t.claim),
    }
}

/// Human-readable Markdown summary.
pub fn summary(report: &AnalysisReport) -> String {
    let m = &report.meta;
    let mut s = String::new();
    let _ = writeln!(s, "# Translation gender-bias audit\n");
    let _ = writeln!(s, "- tool version: {}", m.tool_version);
    let _ = writeln!(
        s,
        "- backends: {}",
        if m.backends.is_empty() {
            "none".to_string()
        } else {
            m.backends.join(", ")
        }
    );
    let _ = writeln!(
        s,
        "- seed: {}",
        m.seed.map_or("none".to_string(), |v| v.to_string())
    );
    let _ = writeln!(
        s,
        "- female-share denominator: {}",
        match m.denominator {
            crate::stats::DenominatorPolicy::GenderedOnly => "he/she translations only",
            crate::stats::DenominatorPolicy::AllProbes => "all probes",
        }
    );
    let _ = writeln!(
        s,
        "- probes: {}, records: {}, failed records: {}",
        m.probes, m.records, m.failed_records
    );
    for (name, hash) in &m.input_hashes {
        let _ = writeln!(s, "- input `{name}`: sha256 {hash}");
    }
    s.push('\n');

    if let Some(occ) = &report.occupation {
        let _ = writeln!(s, "## Occupations\n");
        let mut rows: Vec<Vec<String>> = occ
            .female_share
            .iter()
            .map(|(b, p)| {
                vec![
                    b.clone(),
                    pct_with_counts(&p.gendered),
                    pct_with_counts(&p.all),
                ]
            })
            .collect();
        rows.push(vec![
            "pooled".into(),
            pct_with_counts(&occ.female_share_pooled.gendered),
            pct_with_counts(&occ.female_share_pooled.all),
        ]);
        md_table(
            &mut s,
            &["backend", "she (of he/she)", "she (of all)"],
            &rows,
        );
        let nat: Vec<String> = occ
            .national_female_pct
            .iter()
            .map(|(c, v)| format!("{} {v:.2}%", c.code()))
            .collect();
        let _ = writeln!(
            s,
            "Female share of the national workforce: {}\n",
            nat.join(", ")
        );
        for (taxonomy, groups) in [
            (Taxonomy::Isco, &occ.groups_isco),
            (Taxonomy::Soc, &occ.groups_soc),
        ] {
            let _ = writeln!(s, "### {taxonomy} major groups\n");
            let rows: Vec<Vec<String>> = groups
                .iter()
                .map(|g| {
                    vec![
                        g.title.clone(),
                        g.occupations.to_string(),
                        pct_with_counts(&g.average),
                        fmt_pct(g.workforce_female_pct),
                    ]
                })
                .collect();
            md_table(
                &mut s,
                &[
                    "group",
                    "occupations",
                    "translated she",
                    "workforce female %",
                ],
                &rows,
            );
        }
        if let Some(tr) = &occ.transitions {
            let _ = writeln!(s, "### Pronoun changes under a quality adjective\n");
            let rows: Vec<Vec<String>> = tr
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.quality.gloss().to_string(),
                        fmt_prop(r.counts.she_to_he.value),
                        fmt_prop(r.counts.he_to_she.value),
                    ]
                })
                .collect();
            md_table(&mut s, &["adjective", "she to he", "he to she"], &rows);
            if !tr.unmatched.is_empty() {
                let _ = writeln!(
                    s,
                    "{} unmatched detections were excluded.\n",
                    tr.unmatched.len()
                );
            }
        }
    }

    if let Some(adj) = &report.adjective {
        let _ = writeln!(s, "## Adjectives\n");
        let rows: Vec<Vec<String>> = adj
            .crosstab
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.coding.as_str().to_string(),
                    r.male.to_string(),
                    r.female.to_string(),
                ]
            })
            .collect();
        md_table(&mut s, &["coding", "he", "she"], &rows);
        let _ = writeln!(
            s,
            "- she-assigned sentences with a feminine-coded adjective: {}",
            pct_with_counts(&adj.crosstab.female_feminine)
        );
        let _ = writeln!(
            s,
            "- he-assigned sentences with a masculine-coded adjective: {}",
            pct_with_counts(&adj.crosstab.male_masculine)
        );
        if let Some(p) = &adj.personhood {
            let pc = |r: &Ratio| Share::new(r.numerator, r.denominator);
            let _ = writeln!(
                s,
                "- with \"birisidir\": she to he {}, he to she {}",
                pct_with_counts(&pc(&p.counts.she_to_he)),
                pct_with_counts(&pc(&p.counts.he_to_she))
            );
        }
        s.push('\n');
    }

    if let Some(a) = &report.asymmetry {
        let _ = writeln!(s, "## Gender marking of kin terms\n");
        let rows: Vec<Vec<String>> = a
            .pooled
            .by_gender
            .iter()
            .map(|r| {
                vec![
                    r.subject_gender.as_str().to_string(),
                    pct_with_counts(&r.shares.neutral),
                    pct_with_counts(&r.shares.marked),
                ]
            })
            .collect();
        md_table(&mut s, &["subject", "neutral case", "marked"], &rows);
        let rows: Vec<Vec<String>> = a
            .pooled
            .by_cell
            .iter()
            .map(|r| {
                vec![
                    r.subject_gender.as_str().to_string(),
                    r.stereotype.as_str().to_string(),
                    pct_with_counts(&r.shares.neutral),
                    pct_with_counts(&r.shares.marked),
                ]
            })
            .collect();
        md_table(
            &mut s,
            &["subject", "predicate", "neutral case", "marked"],
            &rows,
        );
    }

    if !report.tests.is_empty() {
        let _ = writeln!(s, "## One-sided pooled-variance t-tests\n");
        for t in &report.tests {
            let _ = writeln!(s, "{}", test_line(t));
        }
        s.push('\n');
    }
    if report.is_empty() {
        let _ = writeln!(
            s,
            "No detections were available; only run metadata is reported."
        );
    }
    s
}

const PALETTE: [&str; 8] = [
    "#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#edc948", "#b07aa1", "#9c755f",
];

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Grouped bar chart on a 0–100 scale. Each bar carries `data-group`,
/// `data-series` and `data-value`; null values draw no bar.
pub fn bar_chart_svg(
    title: &str,
    groups: &[String],
    series: &[(String, Vec<Option<f64>>)],
) -> String {
    let bar_w = 16.0;
    let gap = 14.0;
    let left = 50.0;
    let top = 40.0;
    let plot_h = 240.0;
    let group_w = bar_w * series.len().max(1) as f64 + gap;
    let width = left + group_w * groups.len().max(1) as f64 + 20.0;
    let legend_h = 18.0 * series.len() as f64;
    let height = top + plot_h + 120.0 + legend_h;
    let y = |v: f64| top + plot_h - plot_h * v.clamp(0.0, 100.0) / 100.0;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<title>{}</title>"#, xml_escape(title));
    let _ = writeln!(
        s,
        r#"<text x="{left}" y="20" font-size="14">{}</text>"#,
        xml_escape(title)
    );
    for tick in [0, 25, 50, 75, 100] {
        let ty = y(tick as f64);
        let _ = writeln!(
            s,
            r##"<line x1="{left}" y1="{ty:.1}" x2="{:.1}" y2="{ty:.1}" stroke="#ddd"/><text x="{:.1}" y="{:.1}" text-anchor="end">{tick}%</text>"##,
            width - 20.0,
            left - 4.0,
            ty + 4.0
        );
    }
    for (gi, g) in groups.iter().enumerate() {
        let gx = left + gap / 2.0 + gi as f64 * group_w;
        for (si, (name, values)) in series.iter().enumerate() {
            if let Some(Some(v)) = values.get(gi) {
                let x = gx + si as f64 * bar_w;
                let _ = writeln!(
                    s,
                    r#"<rect x="{x:.1}" y="{:.1}" width="{bar_w:.1}" height="{:.1}" fill="{}" data-group="{}" data-series="{}" data-value="{v:.4}"/>"#,
                    y(*v),
                    top + plot_h - y(*v),
                    PALETTE[si % PALETTE.len()],
                    xml_escape(g),
                    xml_escape(name)
                );
            }
        }
        let lx = gx + bar_w * series.len() as f64 / 2.0;
        let ly = top + plot_h + 12.0;
        let _ = writeln!(
            s,
            r#"<text x="{lx:.1}" y="{ly:.1}" text-anchor="end" transform="rotate(-40 {lx:.1} {ly:.1})">{}</text>"#,
            xml_escape(g)
        );
    }
    for (si, (name, _)) in series.iter().enumerate() {
        let ly = top + plot_h + 110.0 + 18.0 * si as f64;
        let _ = writeln!(
            s,
            r#"<rect x="{left}" y="{:.1}" width="12" height="12" fill="{}"/><text x="{:.1}" y="{ly:.1}">{}</text>"#,
            ly - 10.0,
            PALETTE[si % PALETTE.len()],
            left + 18.0,
            xml_escape(name)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn group_chart(title: &str, rows: &[GroupShareRow]) -> String {
    let groups: Vec<String> = rows.iter().map(|r| r.group.clone()).collect();
    let backends: Vec<&String> = rows
        .first()
        .map(|r| r.per_backend.keys().collect())
        .unwrap_or_default();
    let mut series: Vec<(String, Vec<Option<f64>>)> = backends
        .iter()
        .map(|b| {
            (
                (*b).clone(),
                rows.iter().map(|r| r.per_backend[*b].pct).collect(),
            )
        })
        .collect();
    if backends.len() > 1 {
        series.push((
            "average".into(),
            rows.iter().map(|r| r.average.pct).collect(),
        ));
    }
    series.push((
        "workforce".into(),
        rows.iter().map(|r| r.workforce_female_pct).collect(),
    ));
    bar_chart_svg(title, &groups, &series)
}

fn marking_series(
    report: &AnalysisReport,
    pick: impl Fn(&AsymmetryBreakdown) -> Vec<Option<f64>>,
) -> Vec<(String, Vec<Option<f64>>)> {
    let Some(a) = &report.asymmetry else {
        return Vec::new();
    };
    let mut series: Vec<(String, Vec<Option<f64>>)> = a
        .per_backend
        .iter()
        .map(|(b, br)| (b.clone(), pick(br)))
        .collect();
    if a.per_backend.len() > 1 {
        series.push(("pooled".into(), pick(&a.pooled)));
    }
    series
}

/// Writes `figures/*.svg` under `out_dir`; figures without data are skipped.
pub fn emit_figures(report: &AnalysisReport, out_dir: &Path) -> Result<Emitted, ReportError> {
    let dir = out_dir.join("figures");
    let mut emitted = Emitted::default();
    let put = |name: &str, svg: String, emitted: &mut Emitted| -> Result<(), ReportError> {
        let path = dir.join(name);
        write_file(&path, svg.as_bytes())?;
        emitted.written.push(path);
        Ok(())
    };
    match &report.occupation {
        Some(occ) => {
            for (file, title, rows) in [
                (
                    "group_shares_isco.svg",
                    "Translated she by ISCO-08 major group vs. Turkish workforce",
                    &occ.groups_isco,
                ),
                (
                    "group_shares_soc.svg",
                    "Translated she by SOC major group vs. US workforce",
                    &occ.groups_soc,
                ),
            ] {
                if rows.is_empty() {
                    emitted.skipped.push(format!("{file}: no groups"));
                } else {
                    put(file, group_chart(title, rows), &mut emitted)?;
                }
            }
        }
        None => emitted
            .skipped
            .push("group share figures: report has no occupation section".into()),
    }
    if report.asymmetry.is_some() {
        let groups: Vec<String> = crate::corpus::Gender::BOTH
            .iter()
            .map(|g| format!("{g} subject"))
            .collect();
        let series = marking_series(report, |br| {
            br.by_gender.iter().map(|r| r.shares.neutral.pct).collect()
        });
        put(
            "neutral_case.svg",
            bar_chart_svg("Translations using the neutral case", &groups, &series),
            &mut emitted,
        )?;
        let cells: Vec<String> = report
            .asymmetry
            .as_ref()
            .map(|a| {
                a.pooled
                    .by_cell
                    .iter()
                    .map(|c| {
                        format!(
                            "{} subject / {} predicate",
                            c.subject_gender,
                            c.stereotype.as_str()
                        )
                    })
                    .collect()
            })
            .unwrap_or_default();
        let series = marking_series(report, |br| {
            br.by_cell.iter().map(|r| r.shares.neutral.pct).collect()
        });
        put(
            "unpreserved.svg",
            bar_chart_svg(
                "Neutral case (gender not preserved) by predicate stereotype",
                &cells,
                &series,
            ),
            &mut emitted,
        )?;
    } else {
        emitted
            .skipped
            .push("marking figures: report has no asymmetry section".into());
    }
    for notice in &emitted.skipped {
        log::warn!("skipped {notice}");
    }
    Ok(emitted)
}

/// `report.json`, tables, summary and figures.
pub fn emit_all(report: &AnalysisReport, out_dir: &Path) -> Result<Emitted, ReportError> {
    let json = out_dir.join("report.json");
    emit_json(report, &json)?;
    let mut all = emit_tables(report, out_dir)?;
    all.written.insert(0, json);
    let figs = emit_figures(report, out_dir)?;
    all.written.extend(figs.written);
    all.skipped.extend(figs.skipped);
    Ok(all)
}
