//! Versioned JSON input and output formats: surgery data, graded series,
//! and counting reports. Every file carries `"format": 1`; other versions
//! are rejected.

use serde::{Deserialize, Serialize};

use crate::contraction::{Handlebody, LinkingTable, SurgeryDatum, TrilinearForm};
use crate::dsl;
use crate::error::Error;
use crate::laurent::{Bead, ContextHandle, DeltaContext, LaurentPoly};
use crate::rational::{format_q, parse_q};
use crate::series::GradedSeries;

pub const FORMAT_VERSION: u32 = 1;

fn check_version(format: u32) -> Result<(), Error> {
    if format != FORMAT_VERSION {
        return Err(Error::Validation(format!(
            "unsupported format version {format}, wanted {FORMAT_VERSION}"
        )));
    }
    Ok(())
}

fn context_from_delta(delta: &str) -> Result<ContextHandle, Error> {
    DeltaContext::validate_alexander(&LaurentPoly::parse(delta)?)
}

// ---------------------------------------------------------------------------
// Surgery datum.

#[derive(Serialize, Deserialize)]
struct FormEntryJson {
    i: usize,
    j: usize,
    k: usize,
    value: String,
}

#[derive(Serialize, Deserialize)]
struct HandlebodyJson {
    genus: usize,
    shift: i64,
    form: Vec<FormEntryJson>,
}

#[derive(Serialize, Deserialize)]
struct LinkingJson {
    from: [usize; 2],
    to: [usize; 2],
    bead: String,
}

#[derive(Serialize, Deserialize)]
struct DatumJson {
    format: u32,
    delta: String,
    n: usize,
    handlebodies: Vec<HandlebodyJson>,
    linking: Vec<LinkingJson>,
}

/// Reads a surgery datum. Exchange-symmetric linking entries may be given
/// once; the reader completes them by conjugation and rejects
/// contradictions.
pub fn datum_from_json(text: &str) -> Result<SurgeryDatum, Error> {
    let raw: DatumJson =
        serde_json::from_str(text).map_err(|e| Error::Validation(format!("bad JSON: {e}")))?;
    check_version(raw.format)?;
    let context = context_from_delta(&raw.delta)?;
    let mut handlebodies = Vec::with_capacity(raw.handlebodies.len());
    for h in &raw.handlebodies {
        let mut form = TrilinearForm::new(h.genus);
        for entry in &h.form {
            form.set(entry.i, entry.j, entry.k, parse_q(&entry.value)?)?;
        }
        handlebodies.push(Handlebody {
            genus: h.genus,
            shift: h.shift,
            form,
        });
    }
    let entries = raw
        .linking
        .iter()
        .map(|l| {
            Ok((
                (l.from[0], l.from[1]),
                (l.to[0], l.to[1]),
                Bead::new(LaurentPoly::parse(&l.bead)?, context.clone()),
            ))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let table = LinkingTable::from_entries(context.clone(), entries)?;
    let datum = SurgeryDatum {
        n: raw.n,
        handlebodies,
        table,
        context,
    };
    datum.validate()?;
    Ok(datum)
}

/// Serializes a surgery datum with a fully written linking table.
pub fn datum_to_json(datum: &SurgeryDatum) -> String {
    let handlebodies = datum
        .handlebodies
        .iter()
        .map(|h| HandlebodyJson {
            genus: h.genus,
            shift: h.shift,
            form: h
                .form
                .triples()
                .map(|(i, j, k, v)| FormEntryJson {
                    i,
                    j,
                    k,
                    value: format_q(v),
                })
                .collect(),
        })
        .collect();
    let mut linking = Vec::new();
    for a in 1..=datum.handlebodies.len() {
        for j in 1..=datum.handlebodies[a - 1].genus {
            for b in 1..=datum.handlebodies.len() {
                for k in 1..=datum.handlebodies[b - 1].genus {
                    if let Ok(bead) = datum.table.get((a, j), (b, k)) {
                        linking.push(LinkingJson {
                            from: [a, j],
                            to: [b, k],
                            bead: bead.numerator().to_string(),
                        });
                    }
                }
            }
        }
    }
    serde_json::to_string_pretty(&DatumJson {
        format: FORMAT_VERSION,
        delta: datum.context.delta().to_string(),
        n: datum.n,
        handlebodies,
        linking,
    })
    .expect("datum serializes")
}

#[derive(Serialize, Deserialize)]
struct LinkingOnlyJson {
    format: u32,
    delta: String,
    linking: Vec<LinkingJson>,
}

/// Reads a standalone linking table file: delta plus linking entries.
pub fn linking_from_json(text: &str) -> Result<(ContextHandle, LinkingTable), Error> {
    let raw: LinkingOnlyJson =
        serde_json::from_str(text).map_err(|e| Error::Validation(format!("bad JSON: {e}")))?;
    check_version(raw.format)?;
    let context = context_from_delta(&raw.delta)?;
    let entries = raw
        .linking
        .iter()
        .map(|l| {
            Ok((
                (l.from[0], l.from[1]),
                (l.to[0], l.to[1]),
                Bead::new(LaurentPoly::parse(&l.bead)?, context.clone()),
            ))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let table = LinkingTable::from_entries(context.clone(), entries)?;
    Ok((context, table))
}

// ---------------------------------------------------------------------------
// Graded series.

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    format: u32,
    delta: String,
    truncation: usize,
    components: Vec<(usize, String)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    unknown_anomaly_degrees: Option<Vec<usize>>,
}

/// Reads a graded series: degree-indexed sum texts over a delta context.
pub fn series_from_json(text: &str) -> Result<GradedSeries, Error> {
    let raw: SeriesJson =
        serde_json::from_str(text).map_err(|e| Error::Validation(format!("bad JSON: {e}")))?;
    check_version(raw.format)?;
    let context = context_from_delta(&raw.delta)?;
    let mut series = GradedSeries::zero(raw.truncation, context.clone());
    for (degree, body) in &raw.components {
        series.set_component(*degree, dsl::parse_sum(body, *degree, context.clone())?)?;
    }
    Ok(series)
}

/// Serializes a graded series; `unknown_anomaly_degrees` flags anomaly
/// constants that were defaulted to zero somewhere in the computation.
pub fn series_to_json(series: &GradedSeries, unknown_anomaly_degrees: Option<Vec<usize>>) -> String {
    let components = series
        .components()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(n, c)| (n, c.to_text()))
        .collect();
    serde_json::to_string_pretty(&SeriesJson {
        format: FORMAT_VERSION,
        delta: series.context().delta().to_string(),
        truncation: series.truncation(),
        components,
        unknown_anomaly_degrees,
    })
    .expect("series serializes")
}

// ---------------------------------------------------------------------------
// Counting reports.

#[derive(Serialize, Deserialize, Debug, PartialEq, Eq)]
pub struct ClassReport {
    /// Canonical bytes of the unlabeled class, hex-compressed for brevity.
    pub class_id: String,
    pub automorphisms: u64,
    pub labeled_count: u64,
    /// `2^{3n} (3n)! (2n)! / automorphisms`.
    pub orbit_formula: u64,
    pub tadpole_components: usize,
    pub tadpole_class_size: u64,
    pub theta_admissible: u64,
}

#[derive(Serialize, Deserialize, Debug, PartialEq, Eq)]
pub struct CountsReport {
    pub format: u32,
    pub family: String,
    pub n: usize,
    pub labeled_total: u64,
    pub classes: Vec<ClassReport>,
}

impl CountsReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
