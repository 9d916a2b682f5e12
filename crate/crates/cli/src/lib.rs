//! Command implementations for the `beadiag` binary.
//!
//! Every command reads its inputs, computes, and returns the full report
//! text; output bytes depend only on the inputs and declared options. The
//! thread option splits enumeration sweeps into fixed chunks merged in
//! order, so it never changes the output.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use beadiag::contraction::{
    all_triple_choices, choice_coefficient, contract, slot_bijections, surgery_rhs,
    sweep_scale, sweep_terms, SurgeryDatum, TripleChoice,
};
use beadiag::dsl;
use beadiag::enumeration::{
    enumerate_graphs, matching_count_oracle, tadpole_class_counts, Family, NumberedGraph,
};
use beadiag::error::Error;
use beadiag::formats::{self, ClassReport, CountsReport};
use beadiag::ihx::ihx_closure;
use beadiag::laurent::{DeltaContext, LaurentPoly};
use beadiag::normalform::DiagramSum;
use beadiag::rational::{parse_q, Q};
use beadiag::series::{framing_correct, AnomalySeries};

/// Exit codes: parse failures, validation failures, exceeded budgets and
/// failed internal checks are distinguished.
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;
pub const EXIT_INTERNAL: i32 = 5;

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse { .. } => EXIT_PARSE,
        Error::BudgetExceeded(_) => EXIT_BUDGET,
        Error::InternalCheck(_) => EXIT_INTERNAL,
        _ => EXIT_VALIDATION,
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "beadiag",
    about = "Exact computations in algebras of beaded trivalent diagrams",
    version
)]
pub struct Cli {
    /// Worker threads for enumeration sweeps; never changes output bytes.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Reduce a diagram (or sum of diagrams) to its normal form.
    Normalize(NormalizeArgs),
    /// Contract the legs of a formal combination against a linking table.
    Contract(ContractArgs),
    /// Evaluate the surgery formula right-hand side of a datum.
    SurgeryRhs(SurgeryArgs),
    /// Evaluate the same quantity through the half-edge bijection sweep.
    ColoringsPath(ColoringsArgs),
    /// Exponentiate a graded series.
    Exp(SeriesArgs),
    /// Logarithm of a graded series, checking connectedness of the result.
    Log(SeriesArgs),
    /// Apply the framing correction with an external Pontrjagin input.
    Correct(CorrectArgs),
    /// Stream the labeled graphs of a family, one DSL line each.
    Enumerate(EnumerateArgs),
    /// Counting report over a family: class sizes, automorphisms,
    /// tadpole classes, matching counts.
    Counts(CountsArgs),
    /// Dimension report of the window-bounded Jacobi closure.
    IhxDim(IhxArgs),
}

#[derive(Args, Debug)]
pub struct NormalizeArgs {
    /// DSL file; either one diagram or `coeff * { ... }` term lines.
    #[arg(long)]
    pub input: PathBuf,
    /// Annihilator polynomial of the ambient context.
    #[arg(long, default_value = "1")]
    pub delta: String,
    /// Scalar applied to a bare diagram input.
    #[arg(long, default_value = "1")]
    pub coeff: String,
}

#[derive(Args, Debug)]
pub struct ContractArgs {
    /// Term lines with curve-decorated legs.
    #[arg(long)]
    pub diagrams: PathBuf,
    /// Linking table JSON (format, delta, linking).
    #[arg(long)]
    pub table: PathBuf,
    /// Loop degree of the contracted output.
    #[arg(long)]
    pub degree: usize,
}

#[derive(Args, Debug)]
pub struct SurgeryArgs {
    /// Surgery datum JSON.
    #[arg(long)]
    pub input: PathBuf,
    /// Expected loop degree; must match the datum.
    #[arg(long)]
    pub degree: Option<usize>,
}

#[derive(Args, Debug)]
pub struct ColoringsArgs {
    /// Surgery datum JSON.
    #[arg(long)]
    pub input: PathBuf,
    /// One curve triple per handlebody, e.g. `1,2,3;1,2,3`;
    /// omitted means the sum over all strictly increasing choices.
    #[arg(long)]
    pub dd: Option<String>,
    /// Cap on the number of bijections the sweep may evaluate.
    #[arg(long, default_value_t = 1_000_000)]
    pub budget: u64,
}

#[derive(Args, Debug)]
pub struct SeriesArgs {
    /// Graded series JSON.
    #[arg(long)]
    pub input: PathBuf,
    /// Optional re-truncation before the operation.
    #[arg(long)]
    pub truncate: Option<usize>,
}

#[derive(Args, Debug)]
pub struct CorrectArgs {
    /// Graded series JSON.
    #[arg(long)]
    pub input: PathBuf,
    /// Relative Pontrjagin number, an exact rational.
    #[arg(long)]
    pub p1: String,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    /// Family: Su (loop-free), S (connected loop-free) or Sl (loops).
    #[arg(long)]
    pub family: String,
    /// Loop degree.
    #[arg(long)]
    pub n: usize,
    /// Emit at most this many graphs.
    #[arg(long)]
    pub limit: Option<usize>,
}

#[derive(Args, Debug)]
pub struct CountsArgs {
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub n: usize,
}

#[derive(Args, Debug)]
pub struct IhxArgs {
    /// Loop degree.
    #[arg(long)]
    pub n: usize,
    /// Bead exponent window, `lo..hi`.
    #[arg(long, default_value = "0..0")]
    pub window: String,
    /// Annihilator polynomial (only `1` is supported here).
    #[arg(long, default_value = "1")]
    pub delta: String,
}

pub fn run(cli: &Cli) -> Result<String, Error> {
    if cli.threads == 0 {
        return Err(Error::Validation("--threads wants at least 1".into()));
    }
    match &cli.command {
        Command::Normalize(args) => normalize(args),
        Command::Contract(args) => contract_cmd(args),
        Command::SurgeryRhs(args) => surgery_cmd(args),
        Command::ColoringsPath(args) => colorings_cmd(args, cli.threads),
        Command::Exp(args) => exp_cmd(args),
        Command::Log(args) => log_cmd(args),
        Command::Correct(args) => correct_cmd(args),
        Command::Enumerate(args) => enumerate_cmd(args),
        Command::Counts(args) => counts_cmd(args),
        Command::IhxDim(args) => ihx_cmd(args),
    }
}

fn read(path: &PathBuf) -> Result<String, Error> {
    fs::read_to_string(path)
        .map_err(|e| Error::Validation(format!("cannot read {}: {e}", path.display())))
}

fn normalize(args: &NormalizeArgs) -> Result<String, Error> {
    let context = DeltaContext::validate_alexander(&LaurentPoly::parse(&args.delta)?)?;
    let text = read(&args.input)?;
    let coeff = parse_q(&args.coeff)?;
    let terms = if text.contains('{') {
        dsl::parse_terms(&text, context.clone())?
    } else {
        vec![(coeff, dsl::parse_diagram(&text, context.clone())?)]
    };
    let degree = terms
        .first()
        .map(|(_, d)| d.loop_degree())
        .transpose()?
        .unwrap_or(0);
    let sum = DiagramSum::reduce(degree, context, terms)?;
    Ok(format!("{}\n", sum.to_text()))
}

fn contract_cmd(args: &ContractArgs) -> Result<String, Error> {
    let (context, table) = formats::linking_from_json(&read(&args.table)?)?;
    let terms = dsl::parse_terms(&read(&args.diagrams)?, context)?;
    let sum = contract(args.degree, &terms, &table)?;
    Ok(format!("{}\n", sum.to_text()))
}

fn surgery_cmd(args: &SurgeryArgs) -> Result<String, Error> {
    let datum = formats::datum_from_json(&read(&args.input)?)?;
    if let Some(degree) = args.degree {
        if degree != datum.n {
            return Err(Error::DegreeMismatch(datum.n, degree));
        }
    }
    let sum = surgery_rhs(&datum)?;
    Ok(format!("{}\n", sum.to_text()))
}

fn parse_dd(text: &str, datum: &SurgeryDatum) -> Result<TripleChoice, Error> {
    let mut out = TripleChoice::new();
    for part in text.split(';') {
        let nums: Vec<usize> = part
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Validation(format!("bad curve index `{s}`")))
            })
            .collect::<Result<_, _>>()?;
        if nums.len() != 3 {
            return Err(Error::Validation("each triple wants three curves".into()));
        }
        out.push([nums[0], nums[1], nums[2]]);
    }
    if out.len() != datum.handlebodies.len() {
        return Err(Error::Validation(format!(
            "wanted {} triples, got {}",
            datum.handlebodies.len(),
            out.len()
        )));
    }
    Ok(out)
}

fn colorings_cmd(args: &ColoringsArgs, threads: usize) -> Result<String, Error> {
    let datum = formats::datum_from_json(&read(&args.input)?)?;
    datum.validate()?;
    let choices: Vec<TripleChoice> = match &args.dd {
        Some(text) => vec![parse_dd(text, &datum)?],
        None => all_triple_choices(&datum),
    };
    let bijections = slot_bijections(datum.n, args.budget)?;
    let mut total = DiagramSum::zero(datum.n, datum.context.clone());
    for dd in &choices {
        let ci = choice_coefficient(&datum, dd);
        let part = if threads <= 1 || bijections.len() < 2 * threads {
            sweep_terms(&datum, dd, &ci, &bijections)?
        } else {
            // Fixed chunking; partial sums merge in chunk order, so the
            // output is identical for every thread count.
            let chunk = bijections.len().div_ceil(threads);
            let partials: Vec<Result<DiagramSum, Error>> = std::thread::scope(|scope| {
                let mut handles = Vec::new();
                for piece in bijections.chunks(chunk) {
                    let datum_ref = &datum;
                    let ci_ref = &ci;
                    handles.push(
                        scope.spawn(move || sweep_terms(datum_ref, dd, ci_ref, piece)),
                    );
                }
                handles.into_iter().map(|h| h.join().unwrap()).collect()
            });
            let mut acc = DiagramSum::zero(datum.n, datum.context.clone());
            for p in partials {
                acc = acc.add(&p?)?;
            }
            acc
        };
        total = total.add(&part)?;
    }
    let sum = total.scale(&sweep_scale(datum.n));
    Ok(format!("{}\n", sum.to_text()))
}

fn exp_cmd(args: &SeriesArgs) -> Result<String, Error> {
    let mut series = formats::series_from_json(&read(&args.input)?)?;
    if let Some(n) = args.truncate {
        let trunc = n.min(series.truncation());
        series = beadiag::series::GradedSeries::from_components(
            trunc,
            series.context().clone(),
            series.components()[..=trunc].to_vec(),
        )?;
    }
    let out = series.exp()?;
    Ok(format!("{}\n", formats::series_to_json(&out, None)))
}

fn log_cmd(args: &SeriesArgs) -> Result<String, Error> {
    let series = formats::series_from_json(&read(&args.input)?)?;
    let out = series.log()?;
    Ok(format!("{}\n", formats::series_to_json(&out, None)))
}

fn correct_cmd(args: &CorrectArgs) -> Result<String, Error> {
    let series = formats::series_from_json(&read(&args.input)?)?;
    let p1 = parse_q(&args.p1)?;
    let alpha = AnomalySeries::default_up_to(series.truncation());
    let out = framing_correct(&series, &p1, &alpha)?;
    let flags = if alpha.defaulted_degrees().is_empty() {
        None
    } else {
        Some(alpha.defaulted_degrees().to_vec())
    };
    Ok(format!("{}\n", formats::series_to_json(&out, flags)))
}

fn enumerate_cmd(args: &EnumerateArgs) -> Result<String, Error> {
    let family = Family::parse(&args.family)?;
    let mut out = String::new();
    for (i, g) in enumerate_graphs(args.n, family)?.enumerate() {
        if let Some(limit) = args.limit {
            if i >= limit {
                break;
            }
        }
        out.push_str(&g.to_dsl_line());
        out.push('\n');
    }
    Ok(out)
}

fn counts_cmd(args: &CountsArgs) -> Result<String, Error> {
    let family = Family::parse(&args.family)?;
    if args.n > 2 {
        return Err(Error::BudgetExceeded(
            "counting reports are produced for n <= 2".into(),
        ));
    }
    let ctx = DeltaContext::trivial();
    let mut labeled_total = 0u64;
    let mut by_class: std::collections::BTreeMap<Vec<u8>, (NumberedGraph, u64)> =
        std::collections::BTreeMap::new();
    for g in enumerate_graphs(args.n, family)? {
        labeled_total += 1;
        let key = g.unlabeled_key();
        by_class.entry(key).or_insert_with(|| (g.clone(), 0)).1 += 1;
    }
    let group_order: u64 =
        (1u64 << (3 * args.n)) * factorial_u64(3 * args.n) * factorial_u64(2 * args.n);
    let mut classes = Vec::new();
    for (key, (rep, labeled)) in by_class {
        let aut = rep.to_diagram(ctx.clone())?.automorphism_count();
        let (t, class_size, admissible) = tadpole_class_counts(&rep);
        classes.push(ClassReport {
            class_id: hex(&key),
            automorphisms: aut,
            labeled_count: labeled,
            orbit_formula: group_order / aut,
            tadpole_components: t,
            tadpole_class_size: class_size,
            theta_admissible: admissible,
        });
    }
    let _ = matching_count_oracle(2)?;
    let report = CountsReport {
        format: formats::FORMAT_VERSION,
        family: args.family.clone(),
        n: args.n,
        labeled_total,
        classes,
    };
    Ok(format!("{}\n", report.to_json()))
}

fn ihx_cmd(args: &IhxArgs) -> Result<String, Error> {
    let context = DeltaContext::validate_alexander(&LaurentPoly::parse(&args.delta)?)?;
    let (lo, hi) = args
        .window
        .trim()
        .split_once("..")
        .and_then(|(a, b)| Some((a.trim().parse::<i64>().ok()?, b.trim().parse::<i64>().ok()?)))
        .ok_or_else(|| Error::Validation(format!("bad window `{}`", args.window)))?;
    let closure = ihx_closure(args.n, (lo, hi), context)?;
    let report = serde_json::json!({
        "format": formats::FORMAT_VERSION,
        "degree": closure.degree(),
        "window": [lo, hi],
        "basis": closure.basis_len(),
        "relation_rank": closure.relation_rank(),
        "quotient_rank": closure.quotient_rank(),
    });
    Ok(format!(
        "{}\n",
        serde_json::to_string_pretty(&report).expect("report serializes")
    ))
}

fn factorial_u64(k: usize) -> u64 {
    (1..=k as u64).product::<u64>().max(1)
}

fn hex(bytes: &[u8]) -> String {
    // Compact stable identifier: fnv-style fold of the canonical bytes.
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}

/// Convenience: coefficient of the theta class in a degree-1 sum, used by
/// smoke tests.
pub fn theta_coefficient(sum: &DiagramSum) -> Q {
    let ctx = sum.context().clone();
    let theta = beadiag::diagram::BeadedDiagram::theta(ctx.clone());
    let reduced = DiagramSum::reduce(1, ctx, vec![(Q::from_integer(1.into()), theta)])
        .expect("theta reduces");
    let key = reduced.terms().next().map(|(k, _, _)| k.clone());
    match key {
        Some(key) => sum.coefficient(&key),
        None => Q::from_integer(0.into()),
    }
}
