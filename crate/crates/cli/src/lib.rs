//! Command dispatch for the `defobs` binary.
//!
//! [`dispatch`] is the whole program minus process exit, so tests can drive it
//! directly.

use std::fmt::Write as _;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use defobs::dinv::{self, DInvariantError};
use defobs::flat::oracle::{su2_oracle, OracleConfig, OracleOutcome, OracleStatus};
use defobs::flat::{
    enumerate_flat_exact, min_cylinder_energy, spectrum_from_outcomes, CsSpectrum, EnergyQuery, FlatError, GapSource,
    KindFilter,
};
use defobs::ledger::{
    classify_end_patterns, main_theorem_audit, positive_definite_audit, AuditReport, LedgerError, PositiveOutcome,
    RuleSet,
};
use defobs::manifold::{parse_descriptor_with, Atom, Manifold, Orientation, Registry};
use defobs::FiniteAbelianGroup;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

/// Environment variable overriding the oracle's relator-residual tolerance.
pub const ORACLE_TOL_VAR: &str = "DEFOBS_ORACLE_TOL";

/// Exit status and everything the command printed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, message: impl std::fmt::Display) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "defobs",
    version,
    about = "Definite-filling obstructions for sums of P and O"
)]
struct Cli {
    /// Emit a JSON envelope instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Correction terms of a connected sum.
    Dinv {
        #[arg(allow_hyphen_values = true)]
        descriptor: String,
    },
    /// Negative-definite filling obstruction from correction terms.
    ObstructNeg {
        #[arg(allow_hyphen_values = true)]
        descriptor: String,
    },
    /// Flat connections and Chern–Simons values of a single atom.
    Cs {
        #[arg(allow_hyphen_values = true)]
        descriptor: String,
        /// Cross-check the closed form against the numeric SU(2) oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// Least energy of a cylinder instanton between flat connections.
    Gap {
        #[arg(allow_hyphen_values = true)]
        atom: String,
        #[arg(long, default_value = "any")]
        from: KindFilter,
        #[arg(long, default_value = "any")]
        to: KindFilter,
        /// Skip the single least-energy moduli space.
        #[arg(long)]
        exclude_minimal: bool,
    },
    /// End patterns of a moduli space of the given dimension.
    Ends {
        #[arg(long, allow_negative_numbers = true)]
        index: i64,
        #[arg(long)]
        no_reducible_rule: bool,
        /// Also require r <= n.
        #[arg(long)]
        reducibles_incoming_only: bool,
    },
    /// Positive-definite filling audit.
    AuditPos {
        #[arg(allow_hyphen_values = true)]
        descriptor: String,
        /// Cyclic orders of H1(W)/H1(boundary), e.g. 2,2.
        #[arg(long, value_delimiter = ',')]
        group: Option<Vec<u64>>,
    },
    /// Both obstructions for mP # -kO.
    Theorem {
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Dinv { .. } => "dinv",
            Command::ObstructNeg { .. } => "obstruct-neg",
            Command::Cs { .. } => "cs",
            Command::Gap { .. } => "gap",
            Command::Ends { .. } => "ends",
            Command::AuditPos { .. } => "audit-pos",
            Command::Theorem { .. } => "theorem",
        }
    }
}

/// Failure carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.to_string(),
        }
    }

    fn invariant(message: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_INVARIANT,
            message: message.to_string(),
        }
    }
}

impl From<FlatError> for Failure {
    fn from(e: FlatError) -> Self {
        match e {
            FlatError::Undecided(_) => Failure::invariant(e),
            other => Failure::usage(other),
        }
    }
}

impl From<LedgerError> for Failure {
    fn from(e: LedgerError) -> Self {
        match e {
            LedgerError::Flat(f) => f.into(),
            other => Failure::usage(other),
        }
    }
}

impl From<DInvariantError> for Failure {
    fn from(e: DInvariantError) -> Self {
        Failure::usage(e)
    }
}

/// A finished command: text rendering, JSON payload and the data sources used.
struct Rendered {
    text: String,
    results: Value,
    provenance: Vec<&'static str>,
}

/// Runs one command. `args` excludes the program name.
pub fn dispatch<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(std::iter::once("defobs".to_string()).chain(args.iter().cloned())) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Outcome::ok(text),
                _ => Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let config = match oracle_config() {
        Ok(c) => c,
        Err(f) => return Outcome::fail(f.code, f.message),
    };
    let registry = Registry::default();
    let result = run(&registry, &cli.command, &config);
    match result {
        Ok(r) if cli.json => {
            let envelope = json!({
                "command": cli.command.name(),
                "input": args.iter().filter(|a| *a != "--json").cloned().collect::<Vec<_>>().join(" "),
                "results": r.results,
                "provenance": r.provenance,
            });
            let mut s = serde_json::to_string_pretty(&envelope).expect("JSON values always serialize");
            s.push('\n');
            Outcome::ok(s)
        }
        Ok(r) => Outcome::ok(r.text),
        Err(f) => Outcome::fail(f.code, f.message),
    }
}

fn oracle_config() -> Result<OracleConfig, Failure> {
    let mut config = OracleConfig::default();
    if let Ok(raw) = std::env::var(ORACLE_TOL_VAR) {
        let tol: f64 = raw
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("{ORACLE_TOL_VAR}={raw:?} is not a number")))?;
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(Failure::usage(format!(
                "{ORACLE_TOL_VAR} must be a non-negative number"
            )));
        }
        config.residual_tol = tol;
    }
    Ok(config)
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("payload types serialize to JSON")
}

fn parse(registry: &Registry, text: &str) -> Result<Manifold, Failure> {
    parse_descriptor_with(registry, text).map_err(|e| Failure::usage(format!("{text:?}: {e}")))
}

fn single_atom(registry: &Registry, text: &str) -> Result<Atom, Failure> {
    let m = parse(registry, text)?;
    let mut it = m.summands();
    match (it.next(), it.next()) {
        (Some((atom, 1)), None) => Ok(atom.clone()),
        _ => Err(Failure::usage(format!("{text:?}: expected a single atom"))),
    }
}

fn run(registry: &Registry, command: &Command, config: &OracleConfig) -> Result<Rendered, Failure> {
    match command {
        Command::Dinv { descriptor } => run_dinv(registry, descriptor),
        Command::ObstructNeg { descriptor } => run_obstruct_neg(registry, descriptor),
        Command::Cs { descriptor, oracle } => run_cs(registry, descriptor, *oracle, config),
        Command::Gap {
            atom,
            from,
            to,
            exclude_minimal,
        } => run_gap(registry, atom, *from, *to, *exclude_minimal, config),
        Command::Ends {
            index,
            no_reducible_rule,
            reducibles_incoming_only,
        } => run_ends(*index, *no_reducible_rule, *reducibles_incoming_only),
        Command::AuditPos { descriptor, group } => run_audit_pos(registry, descriptor, group.as_deref(), config),
        Command::Theorem { m, k } => run_theorem(registry, *m, *k, config),
    }
}

/// Full tables are printed only up to this many spin^c structures.
const MAX_LISTED_SPIN_C: u128 = 4096;

fn run_dinv(registry: &Registry, descriptor: &str) -> Result<Rendered, Failure> {
    let manifold = parse(registry, descriptor)?;
    let summands = dinv::summand_tables(registry, &manifold)?;
    let count = dinv::spin_c_count(registry, &manifold)?;
    let max = dinv::max_correction_term(registry, &manifold)?;
    let full = match count {
        Some(n) if n <= MAX_LISTED_SPIN_C => Some(dinv::manifold_d_table(registry, &manifold)?),
        _ => None,
    };
    let count_text = count.map_or_else(|| "overflow".to_string(), |n| n.to_string());

    let mut text = String::new();
    match &full {
        Some(t) => writeln!(text, "{manifold}: {t}").unwrap(),
        None => writeln!(text, "{manifold}: {count_text} spin-c structures (table not listed)").unwrap(),
    }
    if summands.len() > 1 || summands.iter().any(|(_, mult, _)| *mult > 1) {
        for (atom, mult, table) in &summands {
            writeln!(text, "  {mult}*{atom}: {table}").unwrap();
        }
    }
    writeln!(text, "max d: {max}").unwrap();

    let results = json!({
        "manifold": manifold.to_string(),
        "spin_c_count": count_text,
        "summands": summands.iter().map(|(atom, mult, table)| json!({
            "atom": atom.to_string(),
            "multiplicity": mult,
            "d": to_value(&table.multiset()),
        })).collect::<Vec<_>>(),
        "d": full.as_ref().map(|t| to_value(&t.multiset())),
        "max_d": to_value(&max),
    });
    Ok(Rendered {
        text,
        results,
        provenance: vec![
            "correction terms of +2-surgery on torus knots",
            "additivity under connected sum",
        ],
    })
}

fn run_obstruct_neg(registry: &Registry, descriptor: &str) -> Result<Rendered, Failure> {
    let manifold = parse(registry, descriptor)?;
    let report = dinv::negative_definite_obstruction(registry, &manifold)?;
    let count = dinv::spin_c_count(registry, &manifold)?.map_or_else(|| "overflow".to_string(), |n| n.to_string());
    let mut text = String::new();
    writeln!(text, "manifold: {manifold}").unwrap();
    for (atom, mult, table) in dinv::summand_tables(registry, &manifold)? {
        writeln!(text, "  {mult}*{atom}: {table}").unwrap();
    }
    writeln!(text, "spin-c structures: {count}").unwrap();
    writeln!(text, "max d: {}", report.witness).unwrap();
    writeln!(text, "threshold: {}", report.threshold).unwrap();
    writeln!(text, "verdict: {}", report.verdict).unwrap();
    let mut results = to_value(&report);
    results["manifold"] = json!(manifold.to_string());
    results["spin_c_count"] = json!(count);
    Ok(Rendered {
        text,
        results,
        provenance: vec![
            "max d >= 0 for a negative-definite filling",
            "max d >= 1/4 for mP # -kO with k odd",
        ],
    })
}

fn run_cs(registry: &Registry, descriptor: &str, oracle: bool, config: &OracleConfig) -> Result<Rendered, Failure> {
    let atom = single_atom(registry, descriptor)?;
    let record = registry.lookup(&atom).map_err(Failure::usage)?;
    let orient = |s: CsSpectrum| match atom.orientation {
        Orientation::Positive => s,
        Orientation::Negative => s.reversed(),
    };
    let mut provenance = vec!["CS = (kqr + lpr + mpq)^2 / 4pqr mod 1"];
    let (spectrum, outcomes) = match (&record.cs_values, record.flat_params) {
        (Some(records), _) => {
            provenance = vec!["registry flat-connection data"];
            (CsSpectrum::new(records.clone()), None)
        }
        (None, Some(params)) => {
            let exact = orient(enumerate_flat_exact(params));
            if oracle {
                let outcomes = su2_oracle(params, config).map_err(|e| Failure::usage(FlatError::from(e)))?;
                let numeric = orient(spectrum_from_outcomes(&outcomes)?);
                if numeric != exact {
                    return Err(Failure::invariant(format!(
                        "oracle and closed form disagree on {atom}: {} vs {}",
                        render_values(&numeric),
                        render_values(&exact)
                    )));
                }
                provenance.push("numeric SU(2) representation oracle");
                (exact, Some(outcomes))
            } else {
                (exact, None)
            }
        }
        (None, None) => return Err(Failure::usage(FlatError::NoFlatData(atom.to_string()))),
    };

    let mut text = String::new();
    writeln!(text, "{atom}").unwrap();
    for r in spectrum.records() {
        writeln!(text, "  {:<24} {}", r.kind.to_string(), r.cs).unwrap();
    }
    writeln!(text, "spectrum: {}", render_values(&spectrum)).unwrap();
    if let Some(outcomes) = &outcomes {
        writeln!(text, "oracle:").unwrap();
        for o in outcomes {
            writeln!(text, "  {}", render_outcome(o)).unwrap();
        }
        writeln!(text, "oracle agrees with closed form").unwrap();
    }
    let results = json!({
        "atom": atom.to_string(),
        "records": to_value(&spectrum.records()),
        "spectrum": to_value(&spectrum.values()),
        "oracle": outcomes.as_ref().map(to_value),
    });
    Ok(Rendered {
        text,
        results,
        provenance,
    })
}

fn render_values(s: &CsSpectrum) -> String {
    let v: Vec<String> = s.values().iter().map(ToString::to_string).collect();
    format!("{{{}}}", v.join(", "))
}

fn render_outcome(o: &OracleOutcome) -> String {
    let status = match o.status {
        OracleStatus::Accepted => "accepted",
        OracleStatus::Rejected => "rejected",
        OracleStatus::Undecided => "undecided",
    };
    let mut s = format!("{} {status}", o.triple);
    if let Some(r) = o.residual {
        write!(s, " residual={r:.2e}").unwrap();
    }
    if let Some(cs) = &o.cs {
        write!(s, " cs={cs}").unwrap();
    }
    if let Some(reason) = &o.reason {
        write!(s, " ({reason})").unwrap();
    }
    s
}

fn run_gap(
    registry: &Registry,
    atom: &str,
    from: KindFilter,
    to: KindFilter,
    exclude_minimal: bool,
    config: &OracleConfig,
) -> Result<Rendered, Failure> {
    let atom = single_atom(registry, atom)?;
    let query = EnergyQuery {
        from,
        to,
        exclude_minimal,
    };
    let gap = min_cylinder_energy(registry, &atom, query, config)?;
    let source = match &gap.source {
        GapSource::Spectrum { from, to } => format!("{from} -> {to}"),
        GapSource::Pi1Order { order } => format!("1/|pi1| with |pi1| = {order}"),
    };
    let qualifier = if exclude_minimal { ", beyond minimal" } else { "" };
    let text = format!("{atom} ({from} -> {to}{qualifier}): {} [{source}]\n", gap.energy);
    let mut results = to_value(&gap);
    results["query"] = to_value(&query);
    Ok(Rendered {
        text,
        results,
        provenance: vec!["energy = CS(alpha) - CS(beta) mod 1, least positive lift"],
    })
}

fn run_ends(index: i64, no_reducible_rule: bool, reducibles_incoming_only: bool) -> Result<Rendered, Failure> {
    let rules = RuleSet {
        reducible_intermediate: !no_reducible_rule,
        reducibles_incoming_only,
    };
    let patterns = classify_end_patterns(index, rules)?;
    let mut text = String::new();
    for p in &patterns {
        writeln!(text, "{p}  [{}]", p.end_type()).unwrap();
    }
    writeln!(text, "{} patterns", patterns.len()).unwrap();
    let results = json!({
        "index": index,
        "rules": to_value(&rules),
        "patterns": patterns.iter().map(|p| {
            let mut v = to_value(p);
            v["end_type"] = to_value(&p.end_type());
            v
        }).collect::<Vec<_>>(),
    });
    Ok(Rendered {
        text,
        results,
        provenance: vec![
            "index additivity over broken trajectories",
            "cylinder indices at least 1",
        ],
    })
}

fn render_audit(text: &mut String, report: &AuditReport) {
    let outgoing: Vec<String> = report.profile.outgoing.iter().map(ToString::to_string).collect();
    writeln!(
        text,
        "cobordism: {} -> {}",
        report
            .profile
            .incoming
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" + "),
        if outgoing.is_empty() {
            "(empty)".to_string()
        } else {
            summarize(&outgoing)
        }
    )
    .unwrap();
    writeln!(text, "moduli dimension: {}", report.moduli_dimension).unwrap();
    writeln!(text, "kappa: {}", report.kappa).unwrap();
    for f in &report.patterns {
        let fate = match f.fate {
            defobs::ledger::Fate::PrunedByEnergy => "pruned",
            defobs::ledger::Fate::Survives => "survives",
        };
        writeln!(text, "  {} {}: {fate} ({})", f.end_type, f.pattern, f.reason).unwrap();
    }
    writeln!(text, "end count: {}", report.end_count).unwrap();
    writeln!(text, "verdict: {}", report.verdict).unwrap();
}

/// Collapses runs of equal atoms into `n*atom`.
fn summarize(atoms: &[String]) -> String {
    let mut parts: Vec<(usize, &str)> = Vec::new();
    for a in atoms {
        match parts.last_mut() {
            Some((n, last)) if *last == a.as_str() => *n += 1,
            _ => parts.push((1, a)),
        }
    }
    parts
        .iter()
        .map(|(n, a)| if *n == 1 { a.to_string() } else { format!("{n}*{a}") })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn run_audit_pos(
    registry: &Registry,
    descriptor: &str,
    group: Option<&[u64]>,
    config: &OracleConfig,
) -> Result<Rendered, Failure> {
    let manifold = parse(registry, descriptor)?;
    let group = group
        .map(FiniteAbelianGroup::from_cyclic_orders)
        .transpose()
        .map_err(|e| Failure::usage(format!("--group: {e}")))?;
    let report = positive_definite_audit(registry, &manifold, group, config)?;
    let mut text = String::new();
    writeln!(text, "manifold: {manifold}").unwrap();
    render_audit(&mut text, &report);
    let mut results = to_value(&report);
    results["manifold"] = json!(manifold.to_string());
    Ok(Rendered {
        text,
        results,
        provenance: vec![
            "cobordism P -> (m-1)(-P) + |k|(+-O) with b1 = b+ = 0",
            "ends of a one-dimensional moduli space",
            "energy gaps of P, -P and +-O",
            "reducible gluing contributes z + 2a = |H| ends",
        ],
    })
}

fn run_theorem(registry: &Registry, m: i64, k: i64, config: &OracleConfig) -> Result<Rendered, Failure> {
    let report = main_theorem_audit(registry, m, k, config)?;
    let mut text = String::new();
    writeln!(text, "manifold: {}", report.manifold).unwrap();
    writeln!(text, "L-space: {}", if report.l_space { "yes" } else { "no" }).unwrap();
    writeln!(
        text,
        "negative-definite: {} (max d = {}, threshold {})",
        report.negative.verdict, report.negative.witness, report.negative.threshold
    )
    .unwrap();
    match &report.positive {
        PositiveOutcome::Audited(a) => writeln!(
            text,
            "positive-definite: {} (dimension {}, kappa {}, end count {})",
            a.verdict, a.moduli_dimension, a.kappa, a.end_count
        )
        .unwrap(),
        PositiveOutcome::Inapplicable { reason } => writeln!(text, "positive-definite: {reason}").unwrap(),
    }
    if let Some(c) = &report.symplectic {
        writeln!(text, "cited: {c}").unwrap();
    }
    writeln!(text, "{}", report.conclusion).unwrap();
    Ok(Rendered {
        text,
        results: to_value(&report),
        provenance: vec![
            "correction-term obstruction for k > 8m",
            "instanton energy audit for m >= 1",
            "definite fillings of L-spaces in symplectic 4-manifolds",
        ],
    })
}
