//! `opaque`: analyses of candidate barriers for the unit square.
//!
//! Exit codes: 0 success / opaque-up-to-clearance, 1 witness found (the
//! barrier is invalid), 2 inconclusive, 64 usage error, 65 unreadable or
//! unparsable input.

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use opaque_cli::barrier_file::{parse_barrier, parse_body, serialize_barrier};
use opaque_cli::render::{render_svg, RenderOptions};
use opaque_core::advance::{run_advance, AdvanceConfig, AdvanceOutcome, BoundingMode};
use opaque_core::audit::{
    build_partition, decompose, evaluate_thm1_lemmas, normalize_wlog, RegionsThm1,
};
use opaque_core::constructions::{known_barrier, BarrierKind};
use opaque_core::geometry::{Barrier, ConvexPolygon};
use opaque_core::line_measure::{
    cone_angle_bound, line_measure_single, mc_meeting_measure, meeting_measure, Body,
};
use opaque_core::lp_bound::{
    build_interior_lp, check_dual_certificate, check_vector, export_lp_text, primal_regression,
    rat_from_decimal, solve_exact, variable_names, LpParameters,
};
use opaque_core::opacity::{find_witness, OpacityVerdict, WitnessConfig, WitnessLine};

const EXIT_WITNESS: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_PARSE: u8 = 65;

#[derive(Parser)]
#[command(
    name = "opaque",
    version,
    about = "Opaque sets (barriers) of the unit square: verification, witness search, line measures, sweep procedure, exact LP lower bound, rendering"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide opaqueness up to a clearance, or find a witness line
    Verify(ScanArgs),
    /// Search for a witness line and print it
    Witness(ScanArgs),
    /// Run the anchored sweep procedure
    Advance(AdvanceArgs),
    /// Line-measure quantities for one or two convex bodies
    Measure(MeasureArgs),
    /// Build and exactly solve the interior lower-bound LP
    LpBound(LpArgs),
    /// Emit a named barrier construction as JSON
    Construct(ConstructArgs),
    /// Decompose a barrier and evaluate the structural inequalities
    Audit(AuditArgs),
    /// Render a barrier (with optional overlays) as SVG
    Render(RenderArgs),
}

#[derive(Args)]
struct ScanArgs {
    /// Barrier JSON file, or `-` for stdin
    #[arg(default_value = "-")]
    input: String,
    /// Grid spacing of the angle scan, radians
    #[arg(long, default_value_t = 1e-4)]
    angular_step: f64,
    /// Required distance between a witness and every segment
    #[arg(long, default_value_t = 1e-6)]
    clearance: f64,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    U3,
    U,
}

#[derive(Args)]
struct AdvanceArgs {
    /// Barrier JSON file, or `-` for stdin
    #[arg(default_value = "-")]
    input: String,
    /// Bounding square carrying the anchors
    #[arg(long, value_enum, default_value_t = ModeArg::U3)]
    mode: ModeArg,
    /// Margin w1 (U3 mode, default 1/20) or cut parameter w (U mode, default 0.1793)
    #[arg(long)]
    w1: Option<f64>,
    /// Outward band margin (U3 mode)
    #[arg(long, default_value_t = 1e-3)]
    w2: f64,
    /// Near-axis threshold in degrees (defaults: arcsin 10⁻⁴ for U3, 1.5589° for U)
    #[arg(long)]
    phi_deg: Option<f64>,
    #[arg(long, default_value_t = 1e-6)]
    clearance: f64,
    #[arg(long, default_value_t = 100_000)]
    max_events: usize,
    /// Print one JSON record per sweep event
    #[arg(long)]
    trace: bool,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args)]
struct MeasureArgs {
    /// Bodies JSON file ({"k1": BODY, "k2": BODY?}), or `-` for stdin
    #[arg(default_value = "-")]
    input: String,
    /// Monte-Carlo samples (0 disables the estimate)
    #[arg(long, default_value_t = 0)]
    samples: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args)]
struct LpArgs {
    /// Cut parameter w (exact decimal)
    #[arg(long, default_value = "0.1793")]
    w: String,
    /// Near-axis threshold in degrees (exact decimal)
    #[arg(long, default_value = "1.5589")]
    phi_deg: String,
    #[arg(long, default_value_t = 64)]
    precision_bits: u32,
    /// Write the program in LP interchange format to this path
    #[arg(long)]
    export_lp: Option<String>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args)]
struct ConstructArgs {
    /// three-sides | two-diagonals | steiner-corners | conjectured-optimal | imperfect-four-direction
    kind: String,
}

#[derive(Args)]
struct AuditArgs {
    /// Barrier JSON file, or `-` for stdin
    #[arg(default_value = "-")]
    input: String,
    /// Cut parameter w of the 13-region partition (exact decimal)
    #[arg(long, default_value = "0.1793")]
    w: String,
    /// Near-axis threshold in degrees (exact decimal)
    #[arg(long, default_value = "1.5589")]
    phi_deg: String,
    /// Margin of the band regions for the structural inequalities
    #[arg(long, default_value_t = 0.05)]
    w1: f64,
    #[arg(long, default_value_t = 1e-3)]
    w2: f64,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args)]
struct RenderArgs {
    /// Barrier JSON file, or `-` for stdin
    #[arg(default_value = "-")]
    input: String,
    /// Write the SVG here instead of stdout
    #[arg(long)]
    out: Option<String>,
    /// Overlay the 13-region partition cuts for this cut parameter
    #[arg(long)]
    partition_w: Option<f64>,
    /// Run the witness scan and overlay the result if one is found
    #[arg(long)]
    with_witness: bool,
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

type CmdResult = Result<u8, Failure>;

fn read_input(path: &str) -> Result<Vec<u8>, Failure> {
    if path == "-" {
        let mut buf = Vec::new();
        std::io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| fail(EXIT_PARSE, format!("reading stdin: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read(path).map_err(|e| fail(EXIT_PARSE, format!("reading {path}: {e}")))
    }
}

fn load_barrier(path: &str) -> Result<Barrier, Failure> {
    let bytes = read_input(path)?;
    parse_barrier(&bytes)
        .map(|(b, _)| b)
        .map_err(|e| fail(EXIT_PARSE, e.to_string()))
}

fn witness_json(w: &WitnessLine) -> Value {
    json!({
        "theta": w.line.theta(),
        "p": w.line.p(),
        "clearance": w.clearance,
        "penetration": w.penetration,
    })
}

fn emit(format: Format, json_doc: &Value, text: &str) {
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(json_doc).expect("serializable")
        ),
        Format::Text => println!("{text}"),
    }
}

fn cmd_verify(args: &ScanArgs, print_witness: bool) -> CmdResult {
    let barrier = load_barrier(&args.input)?;
    let u = ConvexPolygon::unit_square();
    let config = WitnessConfig {
        angular_step: args.angular_step,
        min_clearance: args.clearance,
        ..WitnessConfig::default()
    };
    let verdict = find_witness(&barrier, &u, &config);
    let length = barrier.total_length();
    match verdict {
        OpacityVerdict::Witness(w) => {
            let doc = json!({
                "verdict": "witness",
                "length": length,
                "witness": witness_json(&w),
            });
            let text = if print_witness {
                format!(
                    "witness found: theta = {:.9}, p = {:.9} (clearance {:.3e}, penetration {:.4})",
                    w.line.theta(),
                    w.line.p(),
                    w.clearance,
                    w.penetration
                )
            } else {
                format!(
                    "invalid barrier (length {:.12}): witness at theta = {:.9}, p = {:.9}",
                    length,
                    w.line.theta(),
                    w.line.p()
                )
            };
            emit(args.format, &doc, &text);
            Ok(EXIT_WITNESS)
        }
        OpacityVerdict::OpaqueUpToClearance { angles_scanned } => {
            let doc = json!({
                "verdict": "opaque-up-to-clearance",
                "length": length,
                "angles_scanned": angles_scanned,
                "clearance": args.clearance,
            });
            let text = if print_witness {
                format!("no witness found over {angles_scanned} angles")
            } else {
                format!(
                    "opaque up to clearance {:.1e} (length {:.12}, {} angles scanned)",
                    args.clearance, length, angles_scanned
                )
            };
            emit(args.format, &doc, &text);
            Ok(0)
        }
        OpacityVerdict::Inconclusive { reason } => {
            let doc = json!({ "verdict": "inconclusive", "reason": reason });
            emit(args.format, &doc, &format!("inconclusive: {reason}"));
            Ok(EXIT_INCONCLUSIVE)
        }
    }
}

fn cmd_advance(args: &AdvanceArgs) -> CmdResult {
    let barrier = load_barrier(&args.input)?;
    let config = match args.mode {
        ModeArg::U3 => AdvanceConfig {
            phi: args
                .phi_deg
                .map(f64::to_radians)
                .unwrap_or_else(|| (1e-4f64).asin()),
            w1: args.w1.unwrap_or(1.0 / 20.0),
            w2: args.w2,
            mode: BoundingMode::U3,
            min_clearance: args.clearance,
            max_events: args.max_events,
        },
        ModeArg::U => AdvanceConfig {
            phi: args.phi_deg.unwrap_or(1.5589).to_radians(),
            w1: args.w1.unwrap_or(0.1793),
            w2: 0.0,
            mode: BoundingMode::U,
            min_clearance: args.clearance,
            max_events: args.max_events,
        },
    };
    let outcome = run_advance(&barrier, &config).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    if args.trace {
        for ev in &outcome.state().events {
            println!(
                "{}",
                json!({
                    "kind": format!("{:?}", ev.kind),
                    "segment": ev.segment,
                    "dx_low": ev.dx_low,
                    "dx_high": ev.dx_high,
                })
            );
        }
    }
    let state = outcome.state();
    let mut doc = json!({
        "events": state.events.len(),
        "advance_low": state.advance_low(),
        "advance_high": state.advance_high(),
        "resweeps": state.resweeps,
    });
    match &outcome {
        AdvanceOutcome::Success { witness, .. } => {
            doc["outcome"] = "success".into();
            doc["witness"] = witness_json(witness);
            emit(
                args.format,
                &doc,
                &format!(
                    "success: witness at theta = {:.9}, p = {:.9} after {} events (advance low {:.6}, high {:.6})",
                    witness.line.theta(),
                    witness.line.p(),
                    state.events.len(),
                    state.advance_low(),
                    state.advance_high()
                ),
            );
            Ok(EXIT_WITNESS)
        }
        AdvanceOutcome::Exhausted(_) => {
            doc["outcome"] = "exhausted".into();
            emit(
                args.format,
                &doc,
                &format!(
                    "exhausted: an anchor reached x = {:.4} after {} events without finding a witness",
                    state.end_x,
                    state.events.len()
                ),
            );
            Ok(0)
        }
        AdvanceOutcome::BudgetExceeded(_) => {
            doc["outcome"] = "budget-exceeded".into();
            emit(
                args.format,
                &doc,
                &format!(
                    "inconclusive: event cap of {} hit (suspected cycling)",
                    state.events.len()
                ),
            );
            Ok(EXIT_INCONCLUSIVE)
        }
    }
}

fn body_summary(b: &Body) -> Value {
    match b {
        Body::Polygon(p) => json!({"polygon": p.vertices().len(), "perimeter": p.perimeter()}),
        Body::Segment(s) => json!({"segment": s.length()}),
    }
}

fn cmd_measure(args: &MeasureArgs) -> CmdResult {
    let bytes = read_input(&args.input)?;
    let doc: Value = serde_json::from_slice(&bytes).map_err(|e| {
        fail(
            EXIT_PARSE,
            format!(
                "invalid JSON at line {}, column {}: {e}",
                e.line(),
                e.column()
            ),
        )
    })?;
    let k1 = doc
        .get("k1")
        .ok_or_else(|| fail(EXIT_PARSE, "missing \"k1\" body"))
        .and_then(|v| parse_body(v, "k1").map_err(|e| fail(EXIT_PARSE, e.to_string())))?;
    let k2 = match doc.get("k2") {
        Some(v) => Some(parse_body(v, "k2").map_err(|e| fail(EXIT_PARSE, e.to_string()))?),
        None => None,
    };

    let mut out = json!({ "k1": body_summary(&k1) });
    let mut text = String::new();
    match &k2 {
        None => {
            let m = line_measure_single(&k1);
            out["measure"] = json!(m);
            text.push_str(&format!("measure of lines meeting the body: {m:.12}"));
        }
        Some(k2) => {
            out["k2"] = body_summary(k2);
            let mm = meeting_measure(&k1, k2).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
            out["l_ext"] = json!(mm.covers.l_ext);
            out["l_int"] = json!(mm.covers.l_int);
            out["measure"] = json!(mm.measure);
            text.push_str(&format!(
                "external cover {:.12}\ninternal cover {:.12}\nmeasure of lines meeting both: {:.12}",
                mm.covers.l_ext, mm.covers.l_int, mm.measure
            ));
            let cone = match (&k1, k2) {
                (Body::Segment(s), Body::Polygon(p)) | (Body::Polygon(p), Body::Segment(s)) => {
                    cone_angle_bound(s, p).ok()
                }
                _ => None,
            };
            if let Some(cb) = cone {
                out["cone_theta_max"] = json!(cb.theta_max);
                out["cone_bound"] = json!(cb.bound);
                text.push_str(&format!(
                    "\ncone bound: theta_max = {:.9}, 2 sin(theta/2)|s| = {:.12}",
                    cb.theta_max, cb.bound
                ));
            }
        }
    }
    if args.samples > 0 {
        let mc = mc_meeting_measure(&k1, k2.as_ref(), args.samples, args.seed);
        out["mc_estimate"] = json!(mc.estimate);
        out["mc_standard_error"] = json!(mc.standard_error);
        text.push_str(&format!(
            "\nMonte-Carlo: {:.9} ± {:.9} ({} samples, seed {})",
            mc.estimate, mc.standard_error, args.samples, args.seed
        ));
    }
    emit(args.format, &out, &text);
    Ok(0)
}

fn cmd_lp_bound(args: &LpArgs) -> CmdResult {
    let w = rat_from_decimal(&args.w)
        .ok_or_else(|| fail(EXIT_USAGE, format!("--w is not a decimal: {}", args.w)))?;
    let phi = rat_from_decimal(&args.phi_deg).ok_or_else(|| {
        fail(
            EXIT_USAGE,
            format!("--phi-deg is not a decimal: {}", args.phi_deg),
        )
    })?;
    let params = LpParameters::new(w, phi).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    let started = std::time::Instant::now();
    let lp = build_interior_lp(&params, args.precision_bits)
        .map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    if let Some(path) = &args.export_lp {
        std::fs::write(path, export_lp_text(&lp))
            .map_err(|e| fail(EXIT_USAGE, format!("writing {path}: {e}")))?;
    }
    let sol = solve_exact(&lp).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    let bound =
        check_dual_certificate(&lp, &sol.dual).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    let reg = primal_regression(&sol.primal);
    let elapsed = started.elapsed();

    let optimum = sol.optimum.to_f64().unwrap_or(f64::NAN);
    let names = variable_names();
    let doc = json!({
        "w": args.w,
        "phi_deg": args.phi_deg,
        "precision_bits": args.precision_bits,
        "constraints": lp.n_constraints(),
        "variables": lp.n_vars(),
        "optimum": optimum,
        "optimum_exact": sol.optimum.to_string(),
        "certified_bound": bound.to_f64().unwrap_or(f64::NAN),
        "certificate_ok": bound == sol.optimum,
        "dual_multipliers": sol.dual.multipliers.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        "primal": names.iter().zip(sol.primal.iter())
            .map(|(n, v)| json!({"name": n, "value": v.to_f64()}))
            .collect::<Vec<_>>(),
        "pivots": sol.pivots,
        "max_deviation_from_published": reg.max_deviation,
        "objective_vs_published": reg.objective_vs_published,
        "alternate_optimum_note": reg.alternate_optimum_note,
        "seconds": elapsed.as_secs_f64(),
    });
    let mut text = format!(
        "optimum {:.10} > 2 + 1e-5: {}\ncertificate OK: bound {:.10} verified independently\n{} constraints, {} variables, {} pivots, {:.2}s\nmax deviation from published solution: {:.3e} (objective delta {:.3e})",
        optimum,
        optimum > 2.0 + 1e-5,
        bound.to_f64().unwrap_or(f64::NAN),
        lp.n_constraints(),
        lp.n_vars(),
        sol.pivots,
        elapsed.as_secs_f64(),
        reg.max_deviation,
        reg.objective_vs_published,
    );
    if let Some(note) = &reg.alternate_optimum_note {
        text.push_str(&format!("\nnote: {note}"));
    }
    emit(args.format, &doc, &text);
    Ok(0)
}

fn cmd_construct(args: &ConstructArgs) -> CmdResult {
    let kind = BarrierKind::parse(&args.kind).ok_or_else(|| {
        fail(
            EXIT_USAGE,
            format!(
                "unknown construction {:?}; expected one of {}",
                args.kind,
                BarrierKind::ALL
                    .iter()
                    .map(|k| k.name())
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        )
    })?;
    let nb = known_barrier(kind);
    println!("{}", serialize_barrier(&nb.barrier, Some(kind.name())));
    Ok(0)
}

fn cmd_audit(args: &AuditArgs) -> CmdResult {
    let barrier = load_barrier(&args.input)?;
    let w_rat = rat_from_decimal(&args.w)
        .ok_or_else(|| fail(EXIT_USAGE, format!("--w is not a decimal: {}", args.w)))?;
    let phi_rat = rat_from_decimal(&args.phi_deg).ok_or_else(|| {
        fail(
            EXIT_USAGE,
            format!("--phi-deg is not a decimal: {}", args.phi_deg),
        )
    })?;
    let w = w_rat.to_f64().unwrap();
    let phi = phi_rat.to_f64().unwrap().to_radians();

    let partition = build_partition(w).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    let vec = decompose(&barrier, &partition, phi, false)
        .map_err(|e| fail(EXIT_USAGE, e.to_string()))?;

    let params = LpParameters::new(w_rat, phi_rat).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    let lp = build_interior_lp(&params, 64).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    let raw_checks = check_vector(&lp, &vec.flat39(), 1e-9);
    let (normalized, symmetry) =
        normalize_wlog(&barrier, &partition, phi).map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    let norm_vec = decompose(&normalized, &partition, phi, false)
        .map_err(|e| fail(EXIT_USAGE, e.to_string()))?;
    let norm_checks = check_vector(&lp, &norm_vec.flat39(), 1e-9);

    let regions = RegionsThm1 {
        w1: args.w1,
        w2: args.w2,
        ..RegionsThm1::default()
    };
    let thm1 = evaluate_thm1_lemmas(&barrier, &regions, None, None);

    let names = variable_names();
    let doc = json!({
        "length": barrier.total_length(),
        "outside": vec.outside,
        "decomposition": names.iter().zip(vec.flat39())
            .filter(|(_, v)| *v > 0.0)
            .map(|(n, v)| json!({"name": n, "length": v}))
            .collect::<Vec<_>>(),
        "lp_constraints": raw_checks,
        "wlog_symmetry": format!("{symmetry:?}"),
        "lp_constraints_normalized": norm_checks,
        "thm1": {
            "total_length": thm1.total_length,
            "hypothesis_applicable": thm1.hypothesis_applicable,
            "checks": thm1.checks,
            "diagnostics": thm1.diagnostics,
        },
    });
    let raw_ok = raw_checks.iter().filter(|c| c.satisfied).count();
    let norm_ok = norm_checks.iter().filter(|c| c.satisfied).count();
    let thm_ok = thm1.checks.iter().filter(|c| c.satisfied).count();
    let text = format!(
        "length {:.12} ({:.3e} outside the square)\nLP constraints satisfied: {}/{} raw, {}/{} after {:?} normalization\nstructural inequalities: {}/{} satisfied (length hypothesis applicable: {})",
        barrier.total_length(),
        vec.outside,
        raw_ok,
        raw_checks.len(),
        norm_ok,
        norm_checks.len(),
        symmetry,
        thm_ok,
        thm1.checks.len(),
        thm1.hypothesis_applicable
    );
    emit(args.format, &doc, &text);
    Ok(0)
}

fn cmd_render(args: &RenderArgs) -> CmdResult {
    let barrier = load_barrier(&args.input)?;
    let partition = match args.partition_w {
        Some(w) => Some(build_partition(w).map_err(|e| fail(EXIT_USAGE, e.to_string()))?),
        None => None,
    };
    let witness = if args.with_witness {
        let u = ConvexPolygon::unit_square();
        match find_witness(&barrier, &u, &WitnessConfig::default()) {
            OpacityVerdict::Witness(w) => Some(w),
            _ => None,
        }
    } else {
        None
    };
    let svg = render_svg(
        &barrier,
        &RenderOptions {
            partition: partition.as_ref(),
            witness: witness.as_ref(),
        },
    );
    match &args.out {
        Some(path) => std::fs::write(path, svg)
            .map_err(|e| fail(EXIT_USAGE, format!("writing {path}: {e}")))?,
        None => print!("{svg}"),
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.cmd {
        Cmd::Verify(a) => cmd_verify(a, false),
        Cmd::Witness(a) => cmd_verify(a, true),
        Cmd::Advance(a) => cmd_advance(a),
        Cmd::Measure(a) => cmd_measure(a),
        Cmd::LpBound(a) => cmd_lp_bound(a),
        Cmd::Construct(a) => cmd_construct(a),
        Cmd::Audit(a) => cmd_audit(a),
        Cmd::Render(a) => cmd_render(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure { code, message }) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
