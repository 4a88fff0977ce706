//! Command-line front end.
//!
//! Exit status is 0 on success, 1 when the input is well formed but the
//! mathematics rejects it (a presheaf that is not a sheaf, a non-local
//! stalk, `d ∘ d != 0`), and 2 for malformed input or bad options.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cohom::{cech_cohomology, derived_limit_cohomology, refined_cech_cohomology, structured_rows, Mode};
use crate::complex::{assemble_grid, Assembled, Assembly, Verticals};
use crate::exactla::{big_to_json, FgAbGroup, GroupMap};
use crate::finspace::FiniteSpace;
use crate::hochschild::{hochschild_dimensions, structured_hochschild, DEFAULT_DEGREE_BOUND};
use crate::io::{self, InputError, PresheafInput};
use crate::ktheory::{grothendieck_complete, k0, AbelianMonoid};
use crate::ringspec::{additive_presheaf, spec, FiniteRing, RingedFiniteSpace, DEFAULT_MAX_ELEMENTS};
use crate::sheaf::{decompose_structured, ToKind, Presheaf, SheafViolation};

/// Environment variable bounding ring and monoid enumeration.
pub const MAX_ELEMENTS_VAR: &str = "STRUCTURA_MAX_ELEMENTS";

#[derive(Parser, Debug)]
#[command(name = "structura", version, about = "Sheaf, Hochschild and K-theory computations on finite models")]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Output::Text, global = true)]
    pub output: Output,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check presheaf laws and sheaf axioms, printing witnesses of failures.
    Check {
        /// [space.json] presheaf.json
        #[arg(num_args = 1..=2, required = true)]
        files: Vec<PathBuf>,
    },
    /// Sheaf cohomology of a presheaf, or of a structured presheaf's grid.
    Cohomology(CohomologyArgs),
    /// Hochschild cohomology of an algebra or of a structured ringed space.
    Hochschild(HochschildArgs),
    /// Prime spectrum of a finite commutative ring with its stalks.
    Spec { ring: PathBuf },
    /// K^0 of a finite base from its rank data.
    K0 {
        base: PathBuf,
        /// Number of bundle indices.
        #[arg(long)]
        m: usize,
    },
    /// Grothendieck group of a commutative monoid.
    Complete { monoid: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CohomologyMode {
    Derived,
    Cech,
    Structured,
    /// The input is a grid of complexes.
    Grid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AssemblyArg {
    Rows,
    Hpq,
    Total,
}

impl From<AssemblyArg> for Assembly {
    fn from(a: AssemblyArg) -> Assembly {
        match a {
            AssemblyArg::Rows => Assembly::Rows,
            AssemblyArg::Hpq => Assembly::Hpq,
            AssemblyArg::Total => Assembly::Total,
        }
    }
}

#[derive(Args, Debug)]
pub struct CohomologyArgs {
    #[arg(long, value_enum, default_value_t = CohomologyMode::Derived)]
    pub mode: CohomologyMode,
    /// Layout of structured results.
    #[arg(long, value_enum)]
    pub assembly: Option<AssemblyArg>,
    #[arg(long)]
    pub max_degree: Option<usize>,
    /// Chain of covers, coarse to fine.
    #[arg(long)]
    pub covers: Option<PathBuf>,
    /// Vertical maps between component rows.
    #[arg(long)]
    pub verticals: Option<PathBuf>,
    /// [space.json] presheaf.json, or grid.json
    #[arg(num_args = 1..=2, required = true)]
    pub files: Vec<PathBuf>,
}

#[derive(Args, Debug)]
pub struct HochschildArgs {
    #[arg(long, value_enum)]
    pub assembly: Option<AssemblyArg>,
    #[arg(long, default_value_t = 2)]
    pub max_degree: usize,
    /// algebra.json, or [space.json] presheaf.json
    #[arg(num_args = 1..=2, required = true)]
    pub files: Vec<PathBuf>,
}

/// What a run printed and how it ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Input(String),
    Rejected(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Failure {
        match e {
            InputError::Rejected { .. } => Failure::Rejected(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

fn rejected(e: impl ToString) -> Failure {
    Failure::Rejected(e.to_string())
}

fn conflict(message: &str) -> Failure {
    Failure::Input(format!("option conflict: {message}"))
}

struct Report {
    text: String,
    json: Value,
    code: i32,
}

impl Report {
    fn ok(text: String, json: Value) -> Report {
        Report { text, json, code: 0 }
    }
}

/// Parses arguments (the first is the program name) and runs the job.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.to_string();
            return if code == 0 {
                Outcome { code, stdout: rendered, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: rendered }
            };
        }
    };
    let bound = match std::env::var(MAX_ELEMENTS_VAR) {
        Err(_) => Ok(DEFAULT_MAX_ELEMENTS),
        Ok(v) => v.trim().parse::<usize>().map_err(|_| format!("{MAX_ELEMENTS_VAR} must be a nonnegative integer, got {v:?}")),
    };
    let result = match bound {
        Ok(bound) => execute(&cli.command, bound),
        Err(message) => Err(Failure::Input(message)),
    };
    match result {
        Ok(report) => {
            let stdout = match cli.output {
                Output::Text => report.text,
                Output::Json => render_json(&report.json),
            };
            Outcome { code: report.code, stdout, stderr: String::new() }
        }
        Err(failure) => {
            let (code, kind, message) = match failure {
                Failure::Input(m) => (2, "input", m),
                Failure::Rejected(m) => (1, "rejected", m),
            };
            let stdout = match cli.output {
                Output::Text => String::new(),
                Output::Json => render_json(&json!({ "error": { "kind": kind, "message": message } })),
            };
            Outcome { code, stdout, stderr: format!("error: {message}\n") }
        }
    }
}

fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn execute(command: &Command, bound: usize) -> Result<Report, Failure> {
    match command {
        Command::Check { files } => check(files, bound),
        Command::Cohomology(args) => cohomology(args, bound),
        Command::Hochschild(args) => hochschild(args, bound),
        Command::Spec { ring } => spectrum(ring, bound),
        Command::K0 { base, m } => k_zero(base, *m),
        Command::Complete { monoid } => complete(monoid, bound),
    }
}

fn load_presheaf(files: &[PathBuf], bound: usize) -> Result<PresheafInput, Failure> {
    let (space, file) = match files {
        [space, file] => (Some(io::parse_space(&io::read_json(space)?, "")?), file),
        [file] => (None, file),
        _ => unreachable!("clap bounds the file count"),
    };
    Ok(io::parse_presheaf(&io::read_json(file)?, "", space.as_ref(), bound)?)
}

fn group_lines(prefix: &str, groups: &[FgAbGroup]) -> String {
    groups.iter().enumerate().map(|(n, g)| format!("{prefix}{n} = {g}\n")).collect()
}

fn groups_json(groups: &[FgAbGroup]) -> Value {
    Value::Array(groups.iter().map(io::group_json).collect())
}

fn violation_json(v: &SheafViolation) -> Value {
    json!({
        "open": v.open,
        "axiom": v.axiom.to_string(),
        "witness": v.witness.iter().map(|(open, coords)| json!({
            "open": open,
            "coordinates": coords.iter().map(big_to_json).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

fn check(files: &[PathBuf], bound: usize) -> Result<Report, Failure> {
    let input = load_presheaf(files, bound)?;
    // One additive presheaf per component, labelled for the report.
    let mut additive: Vec<(String, Presheaf<GroupMap>)> = Vec::new();
    let mut local = None;
    match &input {
        PresheafInput::AbGroup(f) => additive.push((String::new(), f.clone())),
        PresheafInput::Ring(f) => {
            additive.push((String::new(), additive_presheaf(f)));
            if let Ok(ringed) = RingedFiniteSpace::new(f.clone()) {
                local = Some(ringed.check_locally_ringed());
            }
        }
        PresheafInput::Structured(f) => {
            for (p, part) in decompose_structured(f).map_err(rejected)?.iter().enumerate() {
                let groups = match part.to_groups() {
                    Ok(g) => g,
                    Err(_) => additive_presheaf(&part.to_rings().map_err(rejected)?),
                };
                additive.push((format!("component {}: ", p + 1), groups));
            }
        }
    }
    let mut text = format!("kind: {}\npresheaf laws: ok\n", input.kind());
    let mut violations_json = Vec::new();
    let mut components = Vec::new();
    for (label, f) in &additive {
        let violations = f.check_sheaf_axioms().map_err(rejected)?;
        text += &format!("{label}sheaf: {}\n", if violations.is_empty() { "yes" } else { "no" });
        for v in &violations {
            text += &format!("  {v}\n");
            violations_json.push(violation_json(v));
        }
        let stalks = (0..f.space().npoints())
            .map(|x| f.stalk(x).map(|s| s.value.canonical()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(rejected)?;
        for (x, g) in stalks.iter().enumerate() {
            text += &format!("{label}stalk at {}: {g}\n", f.space().label(x));
        }
        components.push(json!({
            "sheaf": violations.is_empty(),
            "stalks": f.space().labels().iter().zip(&stalks).map(|(l, g)| (l.clone(), io::group_json(g))).collect::<serde_json::Map<_, _>>(),
        }));
    }
    let sheaf = violations_json.is_empty();
    let mut report = json!({ "kind": input.kind(), "sheaf": sheaf, "violations": violations_json, "components": components });
    let mut code = if sheaf { 0 } else { 1 };
    if let Some(stalks) = local {
        let ok = stalks.iter().all(|s| s.is_local());
        text += &format!("locally ringed: {}\n", if ok { "yes" } else { "no" });
        report["locally_ringed"] = json!(ok);
        if !ok {
            code = 1;
        }
    }
    Ok(Report { text, json: report, code })
}

fn assembled_text(a: &Assembled<FgAbGroup>) -> String {
    match a {
        Assembled::Total(gs) => group_lines("H^", gs),
        Assembled::Rows(rows) => rows.iter().enumerate().map(|(p, r)| format!("row {}:\n{}", p + 1, group_lines("  H^", r))).collect(),
        Assembled::Hpq(rows) => rows
            .iter()
            .enumerate()
            .flat_map(|(p, r)| r.iter().enumerate().map(move |(q, g)| format!("H^({p},{q}) = {g}\n")))
            .collect(),
    }
}

fn assembled_json(a: &Assembled<FgAbGroup>) -> Value {
    match a {
        Assembled::Total(gs) => json!({ "assembly": "total", "cohomology": groups_json(gs) }),
        Assembled::Rows(rows) => json!({ "assembly": "rows", "rows": rows.iter().map(|r| groups_json(r)).collect::<Vec<_>>() }),
        Assembled::Hpq(rows) => json!({ "assembly": "hpq", "hpq": rows.iter().map(|r| groups_json(r)).collect::<Vec<_>>() }),
    }
}

fn cohomology(args: &CohomologyArgs, bound: usize) -> Result<Report, Failure> {
    let structured_only = args.assembly.is_some() || args.verticals.is_some();
    match args.mode {
        CohomologyMode::Derived | CohomologyMode::Cech if structured_only => {
            return Err(conflict("--assembly and --verticals apply to structured and grid modes"));
        }
        CohomologyMode::Derived if args.covers.is_some() => return Err(conflict("--covers needs --mode cech or structured")),
        CohomologyMode::Cech if args.covers.is_none() => return Err(conflict("--mode cech needs --covers")),
        CohomologyMode::Grid if args.covers.is_some() || args.verticals.is_some() || args.files.len() != 1 => {
            return Err(conflict("--mode grid takes a single grid file and no --covers or --verticals"));
        }
        _ => {}
    }
    let max = args.max_degree.unwrap_or(2);
    let mode = match args.mode {
        CohomologyMode::Derived => "derived",
        CohomologyMode::Cech => "cech",
        CohomologyMode::Structured => "structured",
        CohomologyMode::Grid => "grid",
    };

    if args.mode == CohomologyMode::Grid {
        let (grid, file_max) = io::parse_grid(&io::read_json(&args.files[0])?, "")?;
        let max = args.max_degree.unwrap_or(file_max);
        let assembled = grid.assemble(args.assembly.map_or(Assembly::Total, Into::into), max).map_err(rejected)?;
        let mut j = assembled_json(&assembled);
        j["mode"] = json!(mode);
        j["max_degree"] = json!(max);
        return Ok(Report::ok(assembled_text(&assembled), j));
    }

    let input = load_presheaf(&args.files, bound)?;
    let covers = |x: &FiniteSpace| -> Result<Option<Vec<crate::finspace::Cover>>, Failure> {
        match &args.covers {
            None => Ok(None),
            Some(path) => {
                let chain = io::parse_covers(&io::read_json(path)?, "", x)?;
                if chain.is_empty() {
                    return Err(Failure::Input("the cover chain is empty".into()));
                }
                Ok(Some(chain))
            }
        }
    };

    match (args.mode, input) {
        (CohomologyMode::Derived | CohomologyMode::Cech, PresheafInput::AbGroup(f)) => {
            let groups = match covers(f.space())? {
                None => derived_limit_cohomology(&f, max).map_err(rejected)?,
                Some(chain) if chain.len() == 1 => cech_cohomology(&chain[0], &f, max).map_err(rejected)?,
                Some(chain) => refined_cech_cohomology(&f, &chain, max).map_err(rejected)?,
            };
            Ok(Report::ok(group_lines("H^", &groups), json!({ "mode": mode, "max_degree": max, "cohomology": groups_json(&groups) })))
        }
        (CohomologyMode::Derived | CohomologyMode::Cech, other) => {
            Err(Failure::Input(format!("--mode {mode} needs an AbGroup presheaf, got {}", other.kind())))
        }
        (CohomologyMode::Structured, PresheafInput::Structured(f)) => {
            let mode_value = match covers(f.space())? {
                None => Mode::Sheaf,
                Some(chain) => Mode::Cech(chain),
            };
            let rows = structured_rows(&f, &mode_value, max).map_err(rejected)?;
            let verticals = match &args.verticals {
                None => Verticals::Trivial,
                Some(path) => io::parse_verticals(&io::read_json(path)?, "", &rows)?,
            };
            let grid = assemble_grid(rows, verticals).map_err(rejected)?;
            let assembled = grid.assemble(args.assembly.map_or(Assembly::Total, Into::into), max).map_err(rejected)?;
            let mut j = assembled_json(&assembled);
            j["mode"] = json!(mode);
            j["max_degree"] = json!(max);
            Ok(Report::ok(assembled_text(&assembled), j))
        }
        (CohomologyMode::Structured, other) => {
            Err(Failure::Input(format!("--mode structured needs a Structured or RingFamily presheaf, got {}", other.kind())))
        }
        (CohomologyMode::Grid, _) => unreachable!("handled above"),
    }
}

fn dims_lines(prefix: &str, dims: &[usize]) -> String {
    dims.iter().enumerate().map(|(n, d)| format!("{prefix}{n}: dim {d}\n")).collect()
}

fn hochschild(args: &HochschildArgs, bound: usize) -> Result<Report, Failure> {
    let max = args.max_degree;
    if max > DEFAULT_DEGREE_BOUND {
        return Err(Failure::Input(format!("--max-degree {max} exceeds the supported bound {DEFAULT_DEGREE_BOUND}")));
    }
    if let [file] = args.files.as_slice() {
        let v = io::read_json(file)?;
        if v.get("dim").is_some() {
            if args.assembly.is_some() {
                return Err(conflict("--assembly applies to structured input"));
            }
            let a = io::parse_algebra(&v, "")?;
            let dims = hochschild_dimensions(&a, max, DEFAULT_DEGREE_BOUND).map_err(rejected)?;
            return Ok(Report::ok(dims_lines("HH^", &dims), json!({ "dimensions": dims, "field": a.field(), "dim": a.dim() })));
        }
    }
    let PresheafInput::Structured(f) = load_presheaf(&args.files, bound)? else {
        return Err(Failure::Input("hochschild needs an algebra or a Structured/RingFamily presheaf".into()));
    };
    let assembly = args.assembly.map_or(Assembly::Total, Into::into);
    let s = structured_hochschild(&f, Verticals::Trivial, assembly, max, bound).map_err(rejected)?;
    let (text, table) = match &s.table {
        Assembled::Total(d) => (dims_lines("HH^", d), json!({ "assembly": "total", "dimensions": d })),
        Assembled::Rows(rows) => (
            rows.iter().enumerate().map(|(p, r)| format!("row {}:\n{}", p + 1, dims_lines("  HH^", r))).collect(),
            json!({ "assembly": "rows", "rows": rows }),
        ),
        Assembled::Hpq(rows) => (
            rows.iter()
                .enumerate()
                .flat_map(|(p, r)| r.iter().enumerate().map(move |(q, d)| format!("HH^({p},{q}): dim {d}\n")))
                .collect(),
            json!({ "assembly": "hpq", "hpq": rows }),
        ),
    };
    let mut j = table;
    j["union_rows"] = json!(s.union_rows);
    j["max_degree"] = json!(max);
    Ok(Report::ok(format!("{text}disjoint-union route: agrees\n"), j))
}

/// `Z/n` when the ring is cyclic, otherwise its order and characteristic.
pub fn describe_ring(r: &FiniteRing) -> String {
    if r.characteristic() == r.size() {
        format!("Z/{}", r.size())
    } else {
        format!("ring of order {} and characteristic {}", r.size(), r.characteristic())
    }
}

fn spectrum(path: &Path, bound: usize) -> Result<Report, Failure> {
    let r = io::parse_ring(&io::read_json(path)?, "", bound)?;
    let s = spec(&r, bound).map_err(rejected)?;
    let x = s.ringed.space();
    let reports = s.ringed.check_locally_ringed();
    let local = reports.iter().all(|r| r.is_local());
    let mut text = format!("points: {}\ntopology: {}\n", x.npoints(), if x.is_discrete() { "discrete" } else { "not discrete" });
    let mut points = Vec::new();
    for (k, report) in reports.iter().enumerate() {
        let stalk = s.ringed.stalk(k);
        text += &format!("{}: stalk {} ({})\n", x.label(k), describe_ring(stalk), if report.is_local() { "local" } else { "not local" });
        points.push(json!({ "prime": x.label(k), "stalk": describe_ring(stalk), "stalk_size": stalk.size(), "local": report.is_local() }));
    }
    text += &format!("locally ringed: {}\n", if local { "yes" } else { "no" });
    let opens: Vec<Vec<String>> = x.opens().iter().map(|&o| x.set_labels(o)).collect();
    let j = json!({ "points": points, "opens": opens, "discrete": x.is_discrete(), "locally_ringed": local });
    Ok(Report { text, json: j, code: if local { 0 } else { 1 } })
}

fn k_zero(path: &Path, m: usize) -> Result<Report, Failure> {
    let v = io::read_json(path)?;
    // A bundle file carries its base; otherwise the file is the base itself.
    let base = match v.get("base") {
        Some(b) => io::parse_space(b, "/base")?,
        None => io::parse_space(&v, "")?,
    };
    let k = k0(&base, m);
    let text = format!("K^0 = {}\ngenerators: {}\n", k.group, k.generators.join(" "));
    Ok(Report::ok(text, json!({ "group": io::group_json(&k.group), "generators": k.generators, "m": m })))
}

fn complete(path: &Path, bound: usize) -> Result<Report, Failure> {
    let m = io::parse_monoid(&io::read_json(path)?, "", bound)?;
    let c = grothendieck_complete(&m, bound).map_err(rejected)?;
    let names: Vec<String> = match &m {
        AbelianMonoid::Table(t) => t.labels().to_vec(),
        AbelianMonoid::Affine { generators, .. } => generators.iter().map(|g| format!("{g:?}")).collect(),
    };
    let mut text = format!("K = {}\n", c.group);
    let mut images = serde_json::Map::new();
    for (name, img) in names.iter().zip(&c.images) {
        let coords: Vec<String> = img.iter().map(ToString::to_string).collect();
        text += &format!("{name} -> ({})\n", coords.join(", "));
        images.insert(name.clone(), json!(img.iter().map(big_to_json).collect::<Vec<_>>()));
    }
    Ok(Report::ok(text, json!({ "group": io::group_json(&c.group), "images": images })))
}
