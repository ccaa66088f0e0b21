use std::collections::BTreeSet;
use std::fs;
use std::io;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::{
    check_pct, check_predicate_design, Adjective, Country, MajorGroup, Occupation,
    OccupationCorpus, Predicate, SubjectWord, Taxonomy, WorkforceTable,
};

/// One rejected input row. `line` is 1-based and counts the header.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowError {
    pub line: u64,
    pub message: String,
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("{source_name}: {}", summarize(.errors))]
    Invalid {
        source_name: String,
        errors: Vec<RowError>,
    },
}

impl LoadError {
    pub fn row_errors(&self) -> &[RowError] {
        match self {
            LoadError::Invalid { errors, .. } => errors,
            LoadError::Io { .. } => &[],
        }
    }
}

fn summarize(errors: &[RowError]) -> String {
    let shown: Vec<String> = errors
        .iter()
        .take(5)
        .map(|e| format!("line {}: {}", e.line, e.message))
        .collect();
    let more = errors.len().saturating_sub(shown.len());
    let mut s = format!("{} invalid row(s): {}", errors.len(), shown.join("; "));
    if more > 0 {
        s.push_str(&format!("; … {more} more"));
    }
    s
}

fn read_file(path: &Path) -> Result<String, LoadError> {
    fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Deserializes every row, keeping going after failures so the caller sees
/// the full list of problems.
fn read_rows<T: DeserializeOwned>(
    text: &str,
    required: &[&str],
    optional: &[&str],
) -> (Vec<(u64, T)>, Vec<RowError>) {
    let mut rows = Vec::new();
    let mut errors = Vec::new();
    if text.trim().is_empty() {
        return (rows, errors);
    }
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = match reader.headers() {
        Ok(headers) => headers.clone(),
        Err(e) => {
            errors.push(RowError {
                line: 1,
                message: format!("unreadable header: {e}"),
            });
            return (rows, errors);
        }
    };
    let got: Vec<&str> = headers.iter().collect();
    let ok = got.len() >= required.len()
        && got.len() <= required.len() + optional.len()
        && got[..required.len()] == *required
        && got[required.len()..]
            .iter()
            .zip(optional)
            .all(|(g, o)| g == o);
    if !ok {
        errors.push(RowError {
            line: 1,
            message: format!(
                "header {:?} does not match schema {:?}",
                got.join(","),
                required.join(",")
            ),
        });
        return (rows, errors);
    }
    for record in reader.records() {
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                let line = e.position().map(|p| p.line()).unwrap_or(0);
                errors.push(RowError {
                    line,
                    message: e.to_string(),
                });
                continue;
            }
        };
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        match record.deserialize::<T>(Some(&headers)) {
            Ok(row) => rows.push((line, row)),
            Err(e) => {
                let message = match e.kind() {
                    csv::ErrorKind::Deserialize { err, .. } => err.to_string(),
                    _ => e.to_string(),
                };
                errors.push(RowError { line, message });
            }
        }
    }
    (rows, errors)
}

fn finish<T>(source_name: &str, value: T, errors: Vec<RowError>) -> Result<T, LoadError> {
    if errors.is_empty() {
        Ok(value)
    } else {
        let mut errors = errors;
        errors.sort_by_key(|e| e.line);
        Err(LoadError::Invalid {
            source_name: source_name.to_string(),
            errors,
        })
    }
}

const OCCUPATION_HEADER: &[&str] = &[
    "id",
    "title_en",
    "title_tr",
    "isco_major",
    "soc_major",
    "female_pct_tr",
    "female_pct_us",
];
const ADJECTIVE_HEADER: &[&str] = &["surface_tr", "gloss_en", "pct_male", "pct_female"];
const SUBJECT_HEADER: &[&str] = &[
    "lemma_tr",
    "surface_en_male",
    "surface_en_female",
    "marker_male",
    "marker_female",
];
const PREDICATE_HEADER: &[&str] = &["category", "stereotype", "surface_en"];
const PREDICATE_OPTIONAL: &[&str] = &["surface_tr"];
const WORKFORCE_HEADER: &[&str] = &["taxonomy", "group", "female_pct"];

pub fn parse_occupation_corpus(
    text: &str,
    source_name: &str,
) -> Result<OccupationCorpus, LoadError> {
    let (rows, mut errors) = read_rows::<Occupation>(text, OCCUPATION_HEADER, &[]);
    let mut seen = BTreeSet::new();
    let mut occupations = Vec::with_capacity(rows.len());
    for (line, occ) in rows {
        if let Err(message) = occ.validate() {
            errors.push(RowError { line, message });
            continue;
        }
        if !seen.insert(occ.id.clone()) {
            errors.push(RowError {
                line,
                message: format!("duplicate id {:?}", occ.id),
            });
            continue;
        }
        occupations.push(occ);
    }
    let corpus = OccupationCorpus { occupations };
    finish(source_name, corpus, errors)
}

pub fn load_occupation_corpus(path: &Path) -> Result<OccupationCorpus, LoadError> {
    parse_occupation_corpus(&read_file(path)?, &path.display().to_string())
}

pub fn save_occupation_corpus<W: io::Write>(corpus: &OccupationCorpus, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if corpus.is_empty() {
        w.write_record(OCCUPATION_HEADER)?;
    }
    for occ in corpus.occupations() {
        w.serialize(occ)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct AdjectiveRow {
    surface_tr: String,
    gloss_en: String,
    pct_male: f64,
    pct_female: f64,
}

pub fn parse_adjective_lexicon(text: &str, source_name: &str) -> Result<Vec<Adjective>, LoadError> {
    let (rows, mut errors) = read_rows::<AdjectiveRow>(text, ADJECTIVE_HEADER, &[]);
    let mut seen = BTreeSet::new();
    let mut lexicon = Vec::with_capacity(rows.len());
    for (line, row) in rows {
        match Adjective::new(row.surface_tr, row.gloss_en, row.pct_male, row.pct_female) {
            Ok(adj) => {
                if seen.insert(adj.surface_tr.clone()) {
                    lexicon.push(adj);
                } else {
                    errors.push(RowError {
                        line,
                        message: format!("duplicate adjective {:?}", adj.surface_tr),
                    });
                }
            }
            Err(message) => errors.push(RowError { line, message }),
        }
    }
    finish(source_name, lexicon, errors)
}

pub fn load_adjective_lexicon(path: &Path) -> Result<Vec<Adjective>, LoadError> {
    parse_adjective_lexicon(&read_file(path)?, &path.display().to_string())
}

pub fn save_adjective_lexicon<W: io::Write>(lexicon: &[Adjective], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if lexicon.is_empty() {
        w.write_record(ADJECTIVE_HEADER)?;
    }
    for a in lexicon {
        w.serialize(AdjectiveRow {
            surface_tr: a.surface_tr.clone(),
            gloss_en: a.gloss_en.clone(),
            pct_male: a.pct_male,
            pct_female: a.pct_female,
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn parse_subjects(text: &str, source_name: &str) -> Result<Vec<SubjectWord>, LoadError> {
    let (rows, mut errors) = read_rows::<SubjectWord>(text, SUBJECT_HEADER, &[]);
    let mut seen = BTreeSet::new();
    let mut subjects = Vec::with_capacity(rows.len());
    for (line, s) in rows {
        if let Err(message) = s.validate() {
            errors.push(RowError { line, message });
        } else if !seen.insert(s.lemma_tr.clone()) {
            errors.push(RowError {
                line,
                message: format!("duplicate subject lemma {:?}", s.lemma_tr),
            });
        } else {
            subjects.push(s);
        }
    }
    finish(source_name, subjects, errors)
}

pub fn parse_predicates(text: &str, source_name: &str) -> Result<Vec<Predicate>, LoadError> {
    let (rows, mut errors) = read_rows::<Predicate>(text, PREDICATE_HEADER, PREDICATE_OPTIONAL);
    let mut seen = BTreeSet::new();
    let mut predicates = Vec::with_capacity(rows.len());
    for (line, mut p) in rows {
        if p.surface_tr.as_deref().is_some_and(|s| s.is_empty()) {
            p.surface_tr = None;
        }
        if p.surface_en.is_empty() {
            errors.push(RowError {
                line,
                message: "surface_en must be non-empty".into(),
            });
        } else if !seen.insert((p.category, p.surface_en.clone())) {
            errors.push(RowError {
                line,
                message: format!("duplicate predicate {:?}", p.surface_en),
            });
        } else {
            predicates.push(p);
        }
    }
    if errors.is_empty() && !predicates.is_empty() {
        if let Err(message) = check_predicate_design(&predicates) {
            errors.push(RowError { line: 0, message });
        }
    }
    finish(source_name, predicates, errors)
}

/// Loads the subject-word and predicate files of the asymmetry experiment.
pub fn load_asymmetry_lexicon(
    subjects_path: &Path,
    predicates_path: &Path,
) -> Result<(Vec<SubjectWord>, Vec<Predicate>), LoadError> {
    let subjects = parse_subjects(
        &read_file(subjects_path)?,
        &subjects_path.display().to_string(),
    )?;
    let predicates = parse_predicates(
        &read_file(predicates_path)?,
        &predicates_path.display().to_string(),
    )?;
    Ok((subjects, predicates))
}

pub fn save_subjects<W: io::Write>(subjects: &[SubjectWord], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if subjects.is_empty() {
        w.write_record(SUBJECT_HEADER)?;
    }
    for s in subjects {
        w.serialize(s)?;
    }
    w.flush()?;
    Ok(())
}

pub fn save_predicates<W: io::Write>(predicates: &[Predicate], out: W) -> csv::Result<()> {
    let with_tr = predicates.iter().any(|p| p.surface_tr.is_some());
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = PREDICATE_HEADER.to_vec();
    if with_tr {
        header.extend_from_slice(PREDICATE_OPTIONAL);
    }
    w.write_record(&header)?;
    for p in predicates {
        let mut rec = vec![
            p.category.as_str(),
            p.stereotype.as_str(),
            p.surface_en.as_str(),
        ];
        if with_tr {
            rec.push(p.surface_tr.as_deref().unwrap_or(""));
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Deserialize)]
struct WorkforceRow {
    taxonomy: String,
    group: String,
    female_pct: f64,
}

const NATIONAL: &str = "national";

pub fn parse_workforce_stats(text: &str, source_name: &str) -> Result<WorkforceTable, LoadError> {
    let (rows, mut errors) = read_rows::<WorkforceRow>(text, WORKFORCE_HEADER, &[]);
    let mut table = WorkforceTable::default();
    let any_rows = !rows.is_empty();
    for (line, row) in rows {
        if let Err(message) = check_pct("female_pct", row.female_pct) {
            errors.push(RowError { line, message });
            continue;
        }
        let duplicate = if row.taxonomy.eq_ignore_ascii_case(NATIONAL) {
            let country = match row.group.to_ascii_uppercase().as_str() {
                "TR" => Country::Turkey,
                "US" => Country::UnitedStates,
                other => {
                    errors.push(RowError {
                        line,
                        message: format!("unknown national total {other:?} (expected TR or US)"),
                    });
                    continue;
                }
            };
            table.national.insert(country, row.female_pct).is_some()
        } else {
            let group = row
                .taxonomy
                .parse::<Taxonomy>()
                .and_then(|t| MajorGroup::parse(t, &row.group).map_err(|e| e.to_string()));
            match group {
                Ok(g) => table.groups.insert(g, row.female_pct).is_some(),
                Err(message) => {
                    errors.push(RowError { line, message });
                    continue;
                }
            }
        };
        if duplicate {
            errors.push(RowError {
                line,
                message: format!("duplicate row for {} {}", row.taxonomy, row.group),
            });
        }
    }
    if any_rows && errors.is_empty() {
        for country in [Country::Turkey, Country::UnitedStates] {
            if !table.national.contains_key(&country) {
                errors.push(RowError {
                    line: 0,
                    message: format!("missing national total for {}", country.code()),
                });
            }
        }
    }
    finish(source_name, table, errors)
}

pub fn load_workforce_stats(path: &Path) -> Result<WorkforceTable, LoadError> {
    parse_workforce_stats(&read_file(path)?, &path.display().to_string())
}

pub fn save_workforce_stats<W: io::Write>(table: &WorkforceTable, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(WORKFORCE_HEADER)?;
    for (country, pct) in &table.national {
        w.write_record([NATIONAL, country.code(), &pct.to_string()])?;
    }
    for (group, pct) in &table.groups {
        w.write_record([
            group.taxonomy().to_string().to_ascii_lowercase().as_str(),
            group.short(),
            &pct.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_empty_corpus() {
        assert!(parse_occupation_corpus("", "t").unwrap().is_empty());
        assert!(parse_adjective_lexicon("\n", "t").unwrap().is_empty());
        assert!(parse_workforce_stats("", "t").unwrap().is_empty());
    }

    #[test]
    fn out_of_range_row_is_named() {
        let text = "surface_tr,gloss_en,pct_male,pct_female\n\
                    iyi,good,50,50\n\
                    kötü,bad,130,0\n";
        let err = parse_adjective_lexicon(text, "adj.csv").unwrap_err();
        let rows = err.row_errors();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].line, 3);
        assert!(rows[0].message.contains("pct_male"), "{}", rows[0].message);
        assert!(rows[0].message.contains("[0, 100]"));
    }

    #[test]
    fn reports_every_bad_row() {
        let text = "id,title_en,title_tr,isco_major,soc_major,female_pct_tr,female_pct_us\n\
                    a,Cook,Aşçı,Service,Food,20,39\n\
                    a,Cook,Aşçı,Service,Food,20,39\n\
                    b,,Aşçı,Service,Food,20,39\n\
                    c,Cook,Aşçı,Wizards,Food,20,39\n\
                    d,Cook,Aşçı,Service,Food,20,101\n";
        let err = parse_occupation_corpus(text, "occ.csv").unwrap_err();
        let lines: Vec<u64> = err.row_errors().iter().map(|e| e.line).collect();
        assert_eq!(lines, vec![3, 4, 5, 6]);
        assert!(err.to_string().contains("duplicate id"));
    }

    #[test]
    fn header_mismatch_is_schema_error() {
        let err = parse_subjects("lemma,male,female\nx,y,z\n", "s.csv").unwrap_err();
        assert_eq!(err.row_errors()[0].line, 1);
    }

    #[test]
    fn workforce_requires_both_totals() {
        let text = "taxonomy,group,female_pct\nnational,TR,31.78\nisco,Managers,16.5\n";
        let err = parse_workforce_stats(text, "w.csv").unwrap_err();
        assert!(err.to_string().contains("US"));
    }

    #[test]
    fn saved_lexicons_reload() {
        let s = crate::sample::load().unwrap();
        let mut buf = Vec::new();
        save_workforce_stats(&s.workforce, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(parse_workforce_stats(&text, "w.csv").unwrap(), s.workforce);
        let mut buf = Vec::new();
        save_occupation_corpus(&s.corpus, &mut buf).unwrap();
        let back = parse_occupation_corpus(std::str::from_utf8(&buf).unwrap(), "o.csv").unwrap();
        assert_eq!(back.occupations(), s.corpus.occupations());
        let mut buf = Vec::new();
        save_adjective_lexicon(&s.lexicon, &mut buf).unwrap();
        let back = parse_adjective_lexicon(std::str::from_utf8(&buf).unwrap(), "a.csv").unwrap();
        assert_eq!(back, s.lexicon);
        let mut buf = Vec::new();
        save_subjects(&s.subjects, &mut buf).unwrap();
        assert_eq!(
            parse_subjects(std::str::from_utf8(&buf).unwrap(), "s.csv").unwrap(),
            s.subjects
        );
        let mut buf = Vec::new();
        save_predicates(&s.predicates, &mut buf).unwrap();
        let back = parse_predicates(std::str::from_utf8(&buf).unwrap(), "p.csv").unwrap();
        assert_eq!(back, s.predicates);
    }

    #[test]
    fn unbalanced_predicates_rejected() {
        let text = "category,stereotype,surface_en\noccupation,masculine,a pilot\n";
        assert!(parse_predicates(text, "p.csv").is_err());
    }
}
