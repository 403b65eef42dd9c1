//! Command-line front end: duality queries, orbit records, parabolic tables,
//! formal-local samples, residue-model counts, two-torsion instances,
//! verification sweeps, and JSON/CSV export with a report cache.

mod cache;
mod suites;

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use orbitduality::{
    assumption_check, brute_force_count, build_residue_model, component_groups, count_check,
    dimension_report, dual_levi, enumerate_partitions, enumerate_polarizations, eta_sequence,
    hitchin_instance, is_special, kl_label, orbit_dimension, orbit_invariants, richardson_data,
    sample_generic_char, seesaw_check, springer_dual, structural_count, Block, DimensionReport,
    EnumerateFilter, Error, FieldKind, KlLabel, LeviType, OrbitType, Partition, PointLabel,
    SigmaClass,
};
use serde::Serialize;
use serde_json::json;
use suites::{run_verify, Suite, VerificationReport};

/// Exhaustive and randomized verification of special-orbit duality
/// combinatorics, with per-instance queries and table export.
#[derive(Parser)]
#[command(name = "orbitduality", version, propagate_version = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    globals: Globals,
}

#[derive(Args, Clone)]
struct Globals {
    /// Largest rank swept by verification suites and exports.
    #[arg(long, global = true, default_value_t = 4)]
    max_n: u64,
    /// Genus values (comma separated) for dimension and duality sweeps.
    #[arg(
        long,
        visible_alias = "g",
        global = true,
        value_delimiter = ',',
        default_value = "2"
    )]
    genus: Vec<u64>,
    /// Odd prime for finite-field sampling.
    #[arg(long, global = true, default_value_t = 101)]
    prime: u64,
    /// Seed for every randomized draw.
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Directory for cached verification reports
    /// (falls back to ORBITDUALITY_CACHE).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
}

impl Globals {
    fn genus_or_default(&self) -> u64 {
        self.genus.first().copied().unwrap_or(2)
    }

    fn cache_dir(&self) -> Option<PathBuf> {
        self.cache_dir
            .clone()
            .or_else(|| std::env::var_os("ORBITDUALITY_CACHE").map(PathBuf::from))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Map a special partition to its partner on the other side.
    Dual(PartitionQuery),
    /// Full invariant record of one orbit.
    Orbit(PartitionQuery),
    /// Polarization data and seesaw verdicts for parabolic types.
    Richardson(RichardsonArgs),
    /// Formal-local characteristic systems.
    Local(LocalArgs),
    /// Fixed-line counts of the residue model.
    Isotropic(IsotropicArgs),
    /// Two-torsion duality instance for an induced dual pair.
    Weil(WeilArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Export record tables as JSON or CSV.
    Export(ExportArgs),
}

#[derive(Clone, Debug)]
struct PartsArg(Vec<u64>);

fn parse_parts(s: &str) -> Result<PartsArg, String> {
    let parts: Vec<u64> = s
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<u64>()
                .map_err(|_| format!("invalid part {x:?}"))
        })
        .collect::<Result<_, _>>()?;
    if parts.is_empty() || parts.contains(&0) {
        return Err("parts must be positive integers".into());
    }
    Ok(PartsArg(parts))
}

#[derive(Clone, Debug)]
struct LeviArg {
    ps: Vec<u64>,
    q: u64,
}

fn parse_levi(s: &str) -> Result<LeviArg, String> {
    let (ps_str, q_str) = s
        .split_once(':')
        .ok_or_else(|| "expected PS:Q, e.g. 2,1:2".to_string())?;
    let ps = parse_parts(ps_str)?.0;
    let q = q_str
        .trim()
        .parse::<u64>()
        .map_err(|_| format!("invalid torus part {q_str:?}"))?;
    Ok(LeviArg { ps, q })
}

fn parse_type(s: &str) -> Result<OrbitType, String> {
    match s {
        "B" | "b" => Ok(OrbitType::B),
        "C" | "c" => Ok(OrbitType::C),
        other => Err(format!("unknown family {other:?}, expected B or C")),
    }
}

#[derive(Args)]
struct PartitionQuery {
    /// Partition parts, comma separated (e.g. 3,1,1).
    #[arg(long, value_parser = parse_parts)]
    partition: PartsArg,
    /// Family of the partition (B or C).
    #[arg(long = "type", value_parser = parse_type)]
    orbit_type: OrbitType,
}

#[derive(Args)]
struct RichardsonArgs {
    /// Rank of the group.
    #[arg(long)]
    n: u64,
    /// Family of the group (B or C).
    #[arg(long = "type", value_parser = parse_type, default_value = "C")]
    orbit_type: OrbitType,
    /// Single Levi datum PS:Q (e.g. 2,1:2); sweeps the whole rank if absent.
    #[arg(long, value_parser = parse_levi)]
    levi: Option<LeviArg>,
}

#[derive(Args)]
struct LocalArgs {
    #[command(subcommand)]
    action: LocalAction,
}

#[derive(Subcommand)]
enum LocalAction {
    /// Sample a generic characteristic system and print its factor table.
    Sample(LocalSampleArgs),
    /// Run the randomized formal-local property suite.
    Verify,
}

#[derive(Args)]
struct LocalSampleArgs {
    /// Partition parts, comma separated.
    #[arg(long, value_parser = parse_parts)]
    partition: PartsArg,
    /// Family of the partition (B or C).
    #[arg(long = "type", value_parser = parse_type)]
    orbit_type: OrbitType,
    /// Series truncation order (defaults to the library choice).
    #[arg(long)]
    precision: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Structural,
    Brute,
    Both,
}

#[derive(Args)]
struct IsotropicArgs {
    /// Special type-B partition, comma separated.
    #[arg(long, value_parser = parse_parts)]
    partition: PartsArg,
    /// Which enumeration to run.
    #[arg(long, value_enum, default_value_t = Method::Both)]
    method: Method,
}

#[derive(Args)]
struct WeilArgs {
    /// Rank of the symplectic group.
    #[arg(long)]
    n: u64,
    /// Induced type-C orbit partition, comma separated.
    #[arg(long, value_parser = parse_parts)]
    orbit: PartsArg,
    /// Type-C Levi datum PS:Q.
    #[arg(long, value_parser = parse_levi)]
    levi: LeviArg,
}

#[derive(Args)]
struct VerifyArgs {
    /// Invariant family to sweep.
    #[arg(long, value_enum)]
    suite: Suite,
}

#[derive(Args)]
struct ExportArgs {
    #[command(subcommand)]
    what: ExportWhat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum ExportWhat {
    /// Orbit records for every member partition of one rank.
    Orbits {
        /// Family (B or C).
        #[arg(long = "type", value_parser = parse_type)]
        orbit_type: OrbitType,
        /// Rank of the group.
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Output path (stdout if absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Polarization and seesaw rows for every Levi datum of one rank.
    Levis {
        /// Rank of the symplectic group.
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Output path (stdout if absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Two-torsion duality verdicts for every induced pair of one rank.
    Weil {
        /// Rank of the symplectic group.
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Output path (stdout if absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Command outcomes map onto the three exit codes: success, verification
/// failure, and usage error.
enum CliError {
    Usage(String),
    Failure(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failure(format!("io error: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Failure(format!("serialization error: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<ExitCode, CliError> {
    let g = &cli.globals;
    match &cli.command {
        Command::Dual(args) => cmd_dual(args, g),
        Command::Orbit(args) => cmd_orbit(args, g),
        Command::Richardson(args) => cmd_richardson(args, g),
        Command::Local(args) => match &args.action {
            LocalAction::Sample(sample) => cmd_local_sample(sample, g),
            LocalAction::Verify => cmd_verify(Suite::Local, g),
        },
        Command::Isotropic(args) => cmd_isotropic(args, g),
        Command::Weil(args) => cmd_weil(args, g),
        Command::Verify(args) => cmd_verify(args.suite, g),
        Command::Export(args) => cmd_export(args, g),
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

// ---------------------------------------------------------------------------
// dual

fn cmd_dual(args: &PartitionQuery, g: &Globals) -> Result<ExitCode, CliError> {
    let d = Partition::new(args.partition.0.clone());
    let t = args.orbit_type;
    let dual = springer_dual(&d, t)?;
    let back = springer_dual(&dual, t.flip())?;
    if g.json {
        print_json(&json!({
            "partition": d.parts(),
            "type": t.to_string(),
            "dual": dual.parts(),
            "dual_type": t.flip().to_string(),
            "involutive": back == d,
        }))?;
    } else {
        println!("partition: {d}");
        println!("type: {t}");
        println!("dual: {dual}");
        println!("dual type: {}", t.flip());
        println!("involutive: {}", back == d);
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// orbit

#[derive(Serialize)]
struct OrbitRecord {
    partition: Vec<u64>,
    #[serde(rename = "type")]
    orbit_type: String,
    special: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    dual: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    blocks: Option<Vec<Block>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    c: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    beta: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    degree_partition: Option<Vec<u64>>,
    kl: KlLabel,
    eta: Vec<u64>,
    orbit_dim: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    dims: Option<DimensionReport>,
}

fn orbit_record(d: &Partition, t: OrbitType, genus: u64) -> Result<OrbitRecord, CliError> {
    let kl = kl_label(d, t)?;
    let eta = eta_sequence(d, t)?;
    let orbit_dim = orbit_dimension(d, t)?;
    let special = is_special(d, t);
    let inv = special.then(|| orbit_invariants(d, t).expect("special member"));
    let dims = special.then(|| dimension_report(d, t, genus).expect("special member"));
    Ok(OrbitRecord {
        partition: d.parts().to_vec(),
        orbit_type: t.to_string(),
        special,
        dual: inv.as_ref().map(|i| i.dual.parts().to_vec()),
        blocks: inv.as_ref().map(|i| i.blocks.clone()),
        c: inv.as_ref().map(|i| i.c),
        beta: inv.as_ref().map(|i| i.beta),
        degree_partition: inv.as_ref().map(|i| i.degree_partition.parts().to_vec()),
        kl,
        eta,
        orbit_dim,
        dims,
    })
}

fn cmd_orbit(args: &PartitionQuery, g: &Globals) -> Result<ExitCode, CliError> {
    let d = Partition::new(args.partition.0.clone());
    let record = orbit_record(&d, args.orbit_type, g.genus_or_default())?;
    if g.json {
        print_json(&record)?;
    } else {
        println!("partition: {d}");
        println!("type: {}", record.orbit_type);
        println!("special: {}", record.special);
        if let Some(dual) = &record.dual {
            println!("dual: {}", Partition::new(dual.clone()));
        }
        if let Some(blocks) = &record.blocks {
            for (i, b) in blocks.iter().enumerate() {
                println!(
                    "block {i}: {:?} parts {} at {}",
                    b.kind,
                    Partition::new(b.parts.clone()),
                    b.start
                );
            }
        }
        if let (Some(c), Some(beta)) = (record.c, record.beta) {
            println!("c: {c}  beta: {beta}");
        }
        if let Some(deg) = &record.degree_partition {
            println!("degree partition: {}", Partition::new(deg.clone()));
        }
        println!("kl alpha: {}  beta: {}", record.kl.alpha, record.kl.beta);
        println!("eta: {:?}", record.eta);
        println!("orbit dimension: {}", record.orbit_dim);
        if let Some(dims) = &record.dims {
            println!(
                "genus {}: moduli {}  base {}  half {}",
                dims.genus, dims.moduli_dim, dims.base_dim, dims.half_check
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// richardson

#[derive(Serialize)]
struct RichardsonRow {
    levi: String,
    ord: Vec<u64>,
    orbit: Vec<u64>,
    index_set: Vec<usize>,
    degree_log2: usize,
    dual_levi: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    seesaw_ok: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    quotient_orders: Option<(u64, u64)>,
}

fn richardson_row(levi: &LeviType) -> Result<RichardsonRow, CliError> {
    let data = richardson_data(levi)?;
    let dual = dual_levi(levi);
    let (seesaw_ok, quotient_orders) = if levi.group_type == OrbitType::C {
        let seesaw = seesaw_check(levi)?;
        let groups = component_groups(levi)?;
        (Some(seesaw.pass() && groups.pass()), Some(groups.quotient_orders))
    } else {
        (None, None)
    };
    Ok(RichardsonRow {
        levi: levi.to_string(),
        ord: data.ord.clone(),
        orbit: data.orbit.parts().to_vec(),
        index_set: data.index_set.clone(),
        degree_log2: data.degree_log2,
        dual_levi: dual.to_string(),
        seesaw_ok,
        quotient_orders,
    })
}

fn print_richardson_row(row: &RichardsonRow) {
    let mut line = format!(
        "levi {}  ord {:?}  orbit {}  index set {:?}  degree 2^{}  dual {}",
        row.levi,
        row.ord,
        Partition::new(row.orbit.clone()),
        row.index_set,
        row.degree_log2,
        row.dual_levi
    );
    if let Some(ok) = row.seesaw_ok {
        line.push_str(&format!("  seesaw {}", if ok { "ok" } else { "FAIL" }));
    }
    if let Some((a, b)) = row.quotient_orders {
        line.push_str(&format!("  quotients ({a}, {b})"));
    }
    println!("{line}");
}

fn cmd_richardson(args: &RichardsonArgs, g: &Globals) -> Result<ExitCode, CliError> {
    let rows: Vec<RichardsonRow> = match &args.levi {
        Some(levi_arg) => {
            let levi = LeviType::new(levi_arg.ps.clone(), levi_arg.q, args.orbit_type)?;
            if levi.rank() != args.n {
                return Err(CliError::Usage(format!(
                    "levi {levi} has rank {}, expected {}",
                    levi.rank(),
                    args.n
                )));
            }
            vec![richardson_row(&levi)?]
        }
        None => enumerate_polarizations(args.n, args.orbit_type)?
            .iter()
            .map(|(levi, _)| richardson_row(levi))
            .collect::<Result<_, _>>()?,
    };
    if g.json {
        print_json(&rows)?;
    } else {
        for row in &rows {
            print_richardson_row(row);
        }
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// local sample

fn cmd_local_sample(args: &LocalSampleArgs, g: &Globals) -> Result<ExitCode, CliError> {
    let d = Partition::new(args.partition.0.clone());
    let data = sample_generic_char(&d, args.orbit_type, g.prime, g.seed, args.precision)?;
    let report = assumption_check(&data);
    if g.json {
        print_json(&json!({ "data": data, "assumptions": report }))?;
        return Ok(ExitCode::SUCCESS);
    }
    println!(
        "partition: {}  type: {}  p: {}  precision: {}  resamples: {}",
        data.partition, data.orbit_type, data.p, data.precision, data.resamples
    );
    println!("degree partition: {}", data.degree_partition);
    let units = data.unit_constants();
    for (i, f) in data.factors.iter().enumerate() {
        let sigma = match data.sigma[i] {
            SigmaClass::SelfDual => "self-dual".to_string(),
            SigmaClass::PairedWith(j) => format!("paired with {j}"),
        };
        println!(
            "factor {i}: degree {}  {}  unit constant {}  eisenstein {}",
            f.degree(),
            sigma,
            units[i],
            report.eisenstein_ok[i]
        );
    }
    if data.has_linear_factor {
        println!("linear factor: degree 1 (fixed line)");
    }
    println!("valuation of the discriminant pairing: {}", data.delta);
    println!(
        "assumptions: sigma {}  resultants {}  windows {}  bounds {}  overall {}",
        report.sigma_ok,
        report.resultant_checks.iter().all(|r| r.pass),
        report.prefix_windows_ok,
        report.order_bounds.iter().all(|b| b.bound_ok),
        report.pass()
    );
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// isotropic

fn field_name(kind: &FieldKind) -> String {
    match kind {
        FieldKind::Prime => "prime".to_string(),
        FieldKind::Quadratic { nonresidue } => {
            format!("quadratic extension (nonresidue {nonresidue})")
        }
    }
}

fn cmd_isotropic(args: &IsotropicArgs, g: &Globals) -> Result<ExitCode, CliError> {
    let d = Partition::new(args.partition.0.clone());
    match args.method {
        Method::Both => {
            let check = count_check(&d, g.prime, g.seed)?;
            if g.json {
                print_json(&check)?;
            } else {
                println!(
                    "partition: {}  p: {}  field: {}",
                    check.partition,
                    check.p,
                    field_name(&check.kind)
                );
                println!("subspace dimension: {}  resamples: {}", check.dim_w, check.resamples);
                println!("expected: {}", check.expected);
                println!("structural: {}", check.structural);
                println!("brute force: {}", check.brute);
                println!("verdict: {}", if check.pass() { "PASS" } else { "FAIL" });
            }
            Ok(ExitCode::from(if check.pass() { 0 } else { 1 }))
        }
        single => {
            let model = build_residue_model(&d, g.prime, g.seed)?;
            let solution = match single {
                Method::Structural => structural_count(&model)?,
                Method::Brute => brute_force_count(&model)?,
                Method::Both => unreachable!(),
            };
            if g.json {
                print_json(&json!({ "model": model, "solution": solution }))?;
            } else {
                println!(
                    "partition: {}  p: {}  field: {}",
                    model.partition,
                    model.p,
                    field_name(&model.kind)
                );
                println!(
                    "beta: {}  c: {}  ambient dimension: {}  extra line active: {}",
                    model.beta, model.c, model.dim_q, model.active_q0
                );
                println!(
                    "coordinate degrees: {:?}  owning blocks: {:?}",
                    model.degrees, model.block_of
                );
                println!("subspace dimension: {}", solution.dim_w);
                println!("per-block counts: {:?}", solution.per_block);
                println!("count: {}  expected: {}", solution.count, solution.expected);
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

// ---------------------------------------------------------------------------
// weil

fn bitmask(gen: u128, width: usize) -> String {
    format!("{gen:0width$b}")
}

fn cmd_weil(args: &WeilArgs, g: &Globals) -> Result<ExitCode, CliError> {
    let d_c = Partition::new(args.orbit.0.clone());
    let levi = LeviType::new(args.levi.ps.clone(), args.levi.q, OrbitType::C)?;
    let genus = g.genus_or_default();
    let inst = match hitchin_instance(args.n, genus, &d_c, &levi) {
        Ok(inst) => inst,
        Err(Error::ParityGuard { count }) => {
            return Err(CliError::Failure(format!(
                "instance rejected: odd fixed-point count {count}"
            )));
        }
        Err(e) => return Err(e.into()),
    };
    if g.json {
        print_json(&inst)?;
        let ok = inst.verdicts.dual_check && inst.verdicts.component_count == 2;
        return Ok(ExitCode::from(if ok { 0 } else { 1 }));
    }
    let width = 2 * inst.space.n_half - 1;
    let free = inst
        .space
        .labels
        .iter()
        .filter(|l| matches!(l, PointLabel::Free))
        .count();
    println!("n: {}  genus: {}", inst.n, inst.genus);
    println!("orbit C: {}  levi C: {}", inst.orbit_c, inst.levi_c);
    println!("orbit B: {}  levi B: {}", inst.orbit_b, inst.levi_b);
    println!(
        "fixed points: {} (N = {})  beta: {}  c: {}",
        2 * inst.space.n_half,
        inst.space.n_half,
        inst.beta,
        inst.c
    );
    println!(
        "generators: {} free + {} marked",
        free,
        inst.space.labels.len() - free
    );
    println!("V_C generators ({}):", inst.v_c.gens.len());
    for gen in &inst.v_c.gens {
        println!("  {}", bitmask(*gen, width));
    }
    println!("V_B generators ({}):", inst.v_b.gens.len());
    for gen in &inst.v_b.gens {
        println!("  {}", bitmask(*gen, width));
    }
    let v = &inst.verdicts;
    println!(
        "verdicts: dual_check {}  component_count {}  dims_ok {}  naive_dual_check {}",
        v.dual_check, v.component_count, v.dims_ok, v.naive_dual_check
    );
    println!(
        "degrees: dual abelian variety 2^{}  component cover 2^{}",
        inst.deg_prym_dual_log2, inst.deg_component_cover_log2
    );
    let ok = v.dual_check && v.component_count == 2;
    Ok(ExitCode::from(if ok { 0 } else { 1 }))
}

// ---------------------------------------------------------------------------
// verify

fn render_report(report: &VerificationReport) {
    println!("suite: {}", report.suite);
    println!(
        "max_n: {}  genus: {:?}  prime: {}  seed: {}",
        report.max_n, report.genus, report.prime, report.seed
    );
    if !report.seeds_used.is_empty() {
        println!("seeds used: {:?}", report.seeds_used);
    }
    if !report.primes_used.is_empty() {
        println!("primes used: {:?}", report.primes_used);
    }
    println!(
        "instances: {}  passed: {}  failed: {}",
        report.instances, report.passed, report.failed
    );
    for f in &report.failures {
        println!("  FAIL {} | expected {} | got {}", f.input, f.expected, f.got);
    }
    println!("verdict: {}", if report.ok() { "PASS" } else { "FAIL" });
}

fn cmd_verify(suite: Suite, g: &Globals) -> Result<ExitCode, CliError> {
    let cache_dir = g.cache_dir();
    let key = cache::report_key(suite.name(), g.max_n, &g.genus, g.prime, g.seed);

    if let Some(dir) = &cache_dir {
        if let Some(bytes) = cache::load(dir, suite.name(), key)? {
            let report: VerificationReport = serde_json::from_slice(&bytes)
                .map_err(|e| CliError::Failure(format!("corrupt cached report: {e}")))?;
            if g.json {
                std::io::stdout().write_all(&bytes)?;
            } else {
                render_report(&report);
            }
            eprintln!("cache hit ({})", dir.join(format!("{}-{key:016x}.json", suite.name())).display());
            return Ok(ExitCode::from(if report.ok() { 0 } else { 1 }));
        }
    }

    let report = run_verify(suite, g.max_n, &g.genus, g.prime, g.seed);
    let mut bytes = serde_json::to_vec_pretty(&report)?;
    bytes.push(b'\n');
    if let Some(dir) = &cache_dir {
        cache::store(dir, suite.name(), key, &bytes)?;
    }
    if g.json {
        std::io::stdout().write_all(&bytes)?;
    } else {
        render_report(&report);
    }
    eprintln!("wall: {:.2}s", report.wall_seconds);
    Ok(ExitCode::from(if report.ok() { 0 } else { 1 }))
}

// ---------------------------------------------------------------------------
// export

fn csv_cell(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_row(cells: &[String]) -> String {
    let quoted: Vec<String> = cells.iter().map(|c| csv_cell(c)).collect();
    format!("{}\n", quoted.join(","))
}

fn write_output(path: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn export_orbits(
    t: OrbitType,
    n: u64,
    format: Format,
    out: &Option<PathBuf>,
    genus: u64,
) -> Result<(), CliError> {
    let total = match t {
        OrbitType::B => 2 * n + 1,
        OrbitType::C => 2 * n,
    };
    let all = enumerate_partitions(t, total, EnumerateFilter::All)?;
    let records: Vec<OrbitRecord> = all
        .iter()
        .map(|d| orbit_record(d, t, genus))
        .collect::<Result<_, _>>()?;
    match format {
        Format::Json => {
            let mut content = serde_json::to_string_pretty(&records)?;
            content.push('\n');
            write_output(out, &content)
        }
        Format::Csv => {
            let mut content =
                String::from("partition,special,dual,c,beta,eta,degree_partition,orbit_dim\n");
            for r in &records {
                let cells = vec![
                    Partition::new(r.partition.clone()).to_string(),
                    r.special.to_string(),
                    r.dual
                        .as_ref()
                        .map(|d| Partition::new(d.clone()).to_string())
                        .unwrap_or_default(),
                    r.c.map(|c| c.to_string()).unwrap_or_default(),
                    r.beta.map(|b| b.to_string()).unwrap_or_default(),
                    format!("{:?}", r.eta),
                    r.degree_partition
                        .as_ref()
                        .map(|d| Partition::new(d.clone()).to_string())
                        .unwrap_or_default(),
                    r.orbit_dim.to_string(),
                ];
                content.push_str(&csv_row(&cells));
            }
            write_output(out, &content)
        }
    }
}

fn export_levis(n: u64, format: Format, out: &Option<PathBuf>) -> Result<(), CliError> {
    let rows: Vec<RichardsonRow> = enumerate_polarizations(n, OrbitType::C)?
        .iter()
        .map(|(levi, _)| richardson_row(levi))
        .collect::<Result<_, _>>()?;
    match format {
        Format::Json => {
            let mut content = serde_json::to_string_pretty(&rows)?;
            content.push('\n');
            write_output(out, &content)
        }
        Format::Csv => {
            let mut content = String::from(
                "levi,ord,orbit,index_set,degree_log2,dual_levi,seesaw_ok,quotient_orders\n",
            );
            for r in &rows {
                let cells = vec![
                    r.levi.clone(),
                    format!("{:?}", r.ord),
                    Partition::new(r.orbit.clone()).to_string(),
                    format!("{:?}", r.index_set),
                    r.degree_log2.to_string(),
                    r.dual_levi.clone(),
                    r.seesaw_ok.map(|b| b.to_string()).unwrap_or_default(),
                    r.quotient_orders
                        .map(|(a, b)| format!("({a}, {b})"))
                        .unwrap_or_default(),
                ];
                content.push_str(&csv_row(&cells));
            }
            write_output(out, &content)
        }
    }
}

#[derive(Serialize)]
struct WeilExportRow {
    levi: String,
    genus: u64,
    status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    instance: Option<orbitduality::HitchinWeilInstance>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fixed_point_count: Option<u64>,
}

fn export_weil(n: u64, genus: u64, format: Format, out: &Option<PathBuf>) -> Result<(), CliError> {
    let mut rows: Vec<WeilExportRow> = Vec::new();
    for (levi, data) in enumerate_polarizations(n, OrbitType::C)? {
        match hitchin_instance(n, genus, &data.orbit, &levi) {
            Ok(inst) => rows.push(WeilExportRow {
                levi: levi.to_string(),
                genus,
                status: "built".to_string(),
                instance: Some(inst),
                fixed_point_count: None,
            }),
            Err(Error::ParityGuard { count }) => rows.push(WeilExportRow {
                levi: levi.to_string(),
                genus,
                status: "parity_guarded".to_string(),
                instance: None,
                fixed_point_count: Some(count),
            }),
            Err(e) => return Err(e.into()),
        }
    }
    match format {
        Format::Json => {
            let mut content = serde_json::to_string_pretty(&rows)?;
            content.push('\n');
            write_output(out, &content)
        }
        Format::Csv => {
            let mut content = String::from(
                "levi,genus,status,orbit_c,orbit_b,beta,c,dim_v_b,dim_v_c,\
                 dual_check,component_count,dims_ok,naive_dual_check\n",
            );
            for r in &rows {
                let cells = match &r.instance {
                    Some(inst) => vec![
                        r.levi.clone(),
                        r.genus.to_string(),
                        r.status.clone(),
                        inst.orbit_c.to_string(),
                        inst.orbit_b.to_string(),
                        inst.beta.to_string(),
                        inst.c.to_string(),
                        inst.verdicts.dim_v_b.to_string(),
                        inst.verdicts.dim_v_c.to_string(),
                        inst.verdicts.dual_check.to_string(),
                        inst.verdicts.component_count.to_string(),
                        inst.verdicts.dims_ok.to_string(),
                        inst.verdicts.naive_dual_check.to_string(),
                    ],
                    None => {
                        let mut cells = vec![r.levi.clone(), r.genus.to_string(), r.status.clone()];
                        cells.extend(std::iter::repeat_n(String::new(), 10));
                        cells
                    }
                };
                content.push_str(&csv_row(&cells));
            }
            write_output(out, &content)
        }
    }
}

fn cmd_export(args: &ExportArgs, g: &Globals) -> Result<ExitCode, CliError> {
    match &args.what {
        ExportWhat::Orbits {
            orbit_type,
            n,
            format,
            out,
        } => export_orbits(*orbit_type, *n, *format, out, g.genus_or_default())?,
        ExportWhat::Levis { n, format, out } => export_levis(*n, *format, out)?,
        ExportWhat::Weil { n, format, out } => export_weil(*n, g.genus_or_default(), *format, out)?,
    }
    Ok(ExitCode::SUCCESS)
}
