//! Command-line front end. `run` returns the process exit code: 0 on
//! success, 1 when a check fails or the computation errors, 2 on usage
//! errors.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::SystemTime;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::json;

use crate::galois_id::{identify_default, DEFAULT_PRIME_BUDGET};
use crate::gate::{run_gate, GateOptions};
use crate::groups::{self, GroupSummary};
use crate::inertia::{scan_progression, Certifier, CertifyOptions, ScanFilters, ScanSource};
use crate::intersective::{self, DEFAULT_EVIDENCE_BOUND};
use crate::modp::DEFAULT_SEED;
use crate::presets::{self, Preset};
use crate::report::{Inputs, RunReport, ScanMeta};
use crate::reproduce::{self, Check, EXAMPLES};
use crate::zpoly::{parse_poly, specialize, BiPoly};

/// Caps the worker pool.
pub const THREADS_ENV: &str = "INERTIA_LAB_THREADS";

#[derive(Debug, Parser)]
#[command(name = "inertia-lab", version, about = "Order-two inertia certificates for parametric Galois realizations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the run report here.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Args, Clone)]
pub struct Source {
    #[arg(long, conflicts_with = "poly_file")]
    pub preset: Option<String>,
    /// File holding f(t, x) in the input grammar.
    #[arg(long)]
    pub poly_file: Option<PathBuf>,
}

#[derive(Debug, Args, Clone)]
pub struct GateArgs {
    #[command(flatten)]
    pub source: Source,
    /// Witness search window, `LO..HI`.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub witness_range: Option<(i64, i64)>,
    /// Primes dividing N to refine at, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub exceptional: Option<Vec<u64>>,
    /// Reference specialization for the refinement.
    #[arg(long, allow_hyphen_values = true)]
    pub tref: Option<i64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Hypotheses, witness, bad primes and the progression.
    Gate(GateArgs),
    /// Certificates for progression members.
    Scan {
        #[command(flatten)]
        gate: GateArgs,
        #[arg(long, default_value_t = 5)]
        count: usize,
        /// Run Galois identification with this many primes; 0 skips it.
        #[arg(long, default_value_t = 0)]
        prime_budget: usize,
        /// Scan consecutive values from here instead of the progression.
        #[arg(long, allow_hyphen_values = true)]
        from: Option<i64>,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        step: i64,
        #[arg(long, default_value_t = 100_000)]
        max_examined: usize,
    },
    /// Certificate for one specialization.
    Certify {
        #[command(flatten)]
        source: Source,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long, default_value_t = 0)]
        prime_budget: usize,
    },
    /// Galois group from Frobenius patterns of one specialization.
    Galois {
        #[command(flatten)]
        source: Source,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        #[arg(long, default_value_t = DEFAULT_PRIME_BUDGET)]
        prime_budget: usize,
    },
    /// Orders, covers and decomposition-group checks for the shipped groups.
    Groups,
    /// Quintic times sextic resolvent for an A5 specialization.
    Intersective {
        #[command(flatten)]
        source: Source,
        #[arg(long, allow_hyphen_values = true, default_value = "-3")]
        c: String,
        #[arg(long, default_value_t = DEFAULT_EVIDENCE_BOUND)]
        bound: u64,
        #[arg(long, default_value_t = DEFAULT_PRIME_BUDGET)]
        prime_budget: usize,
    },
    /// Recompute a worked example: s3, a5, psl27, psl33 or all.
    Reproduce { example: String },
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s.split_once("..").ok_or("expected LO..HI")?;
    let lo: i64 = lo.trim().parse().map_err(|e| format!("{e}"))?;
    let hi: i64 = hi.trim().parse().map_err(|e| format!("{e}"))?;
    if lo > hi {
        return Err("LO exceeds HI".into());
    }
    Ok((lo, hi))
}

/// Usage problems exit with 2, failed computations with 1.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Compute(String),
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Compute(e.to_string())
    }
}

struct Loaded {
    f: BiPoly,
    preset: Option<&'static Preset>,
    inputs: Inputs,
}

fn load(source: &Source) -> Result<Loaded, Failure> {
    match (&source.preset, &source.poly_file) {
        (Some(name), _) => {
            let p = presets::by_name(name).ok_or_else(|| Failure::Usage(format!("unknown preset {name}")))?;
            let f = p.f();
            let inputs =
                Inputs { preset: Some(p.name.to_string()), poly: Some(f.display_with("x", "t")), ..Inputs::default() };
            Ok(Loaded { f, preset: Some(p), inputs })
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            let f = parse_poly(text.trim()).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            let inputs = Inputs { poly: Some(f.display_with("x", "t")), ..Inputs::default() };
            Ok(Loaded { f, preset: None, inputs })
        }
        (None, None) => Err(Failure::Usage("one of --preset or --poly-file is required".into())),
    }
}

fn parse_c(c: &str) -> Result<BigInt, Failure> {
    c.trim().parse().map_err(|_| Failure::Usage(format!("not an integer: {c}")))
}

fn gate_options(args: &GateArgs, preset: Option<&Preset>, inputs: &mut Inputs) -> GateOptions {
    let mut opts = GateOptions::default();
    if let Some(p) = preset {
        opts.witness = Some(p.witness);
        opts.exceptional = p.exceptional_primes.to_vec();
        opts.t_ref = p.t_ref;
    }
    if let Some(r) = args.witness_range {
        opts.witness_range = r;
        opts.witness = None;
        inputs.args.insert("witness_range".into(), format!("{}..{}", r.0, r.1));
    }
    if let Some(e) = &args.exceptional {
        opts.exceptional = e.clone();
        inputs.args.insert("exceptional".into(), e.iter().map(u64::to_string).collect::<Vec<_>>().join(","));
    }
    if let Some(t) = args.tref {
        opts.t_ref = Some(t);
        inputs.args.insert("tref".into(), t.to_string());
    }
    opts
}

fn statuses_line(cert: &crate::inertia::SpecializationCertificate) -> String {
    cert.prime_statuses.iter().map(|s| format!("{}:{:?}", s.p, s.status)).collect::<Vec<_>>().join(" ")
}

fn cmd_gate(args: &GateArgs, report: &mut RunReport, out: &mut String) -> Result<(), Failure> {
    let mut loaded = load(&args.source)?;
    let opts = gate_options(args, loaded.preset, &mut loaded.inputs);
    report.inputs = loaded.inputs;
    let cert = run_gate(&loaded.f, &opts)?;
    let _ = writeln!(out, "f(t, x) = {}", loaded.f.display_with("x", "t"));
    let _ = writeln!(
        out,
        "N = {}  (support {:?})",
        cert.data.n_value,
        cert.data.n_support.iter().map(|p| p.to_string()).collect::<Vec<_>>()
    );
    let _ = writeln!(out, "witness = {}", cert.witness);
    for b in &cert.bad_primes.primes {
        let _ = writeln!(out, "bad prime {:>8}  residues {:?}  chosen {:?}", b.p, b.bad_residues, b.chosen);
    }
    if !cert.bad_primes.unfactored.is_empty() {
        let bits: Vec<u64> = cert.bad_primes.unfactored.iter().map(|u| u.bits()).collect();
        let _ = writeln!(out, "unfactored resultant parts (bits): {bits:?}");
    }
    let _ = writeln!(out, "base progression: {}", cert.base);
    if let Some(r) = &cert.refinement {
        let _ = writeln!(out, "refinement at t_ref = {}: k_p = {:?}", r.t_ref, r.exponents);
    }
    let _ = writeln!(out, "progression: {}", cert.progression);
    let _ = writeln!(
        out,
        "soundness: {} members, {} violations",
        cert.soundness.members_checked,
        cert.soundness.violations.len()
    );
    report.verdicts.push(Check {
        name: "progression soundness".into(),
        expected: "no violations".into(),
        computed: format!("{} violations", cert.soundness.violations.len()),
        pass: cert.soundness.passed(),
    });
    report.gate = Some(cert);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_scan(
    args: &GateArgs,
    count: usize,
    prime_budget: usize,
    from: Option<i64>,
    step: i64,
    max_examined: usize,
    report: &mut RunReport,
    out: &mut String,
) -> Result<(), Failure> {
    let mut loaded = load(&args.source)?;
    let opts = gate_options(args, loaded.preset, &mut loaded.inputs);
    loaded.inputs.args.insert("count".into(), count.to_string());
    let gate = run_gate(&loaded.f, &opts)?;
    let certifier =
        Certifier::new(gate.data.clone(), CertifyOptions { galois_primes: prime_budget, ..CertifyOptions::default() });
    let source = match from {
        Some(start) => {
            if step == 0 {
                return Err(Failure::Usage("--step must be nonzero".into()));
            }
            loaded.inputs.args.insert("from".into(), start.to_string());
            loaded.inputs.args.insert("step".into(), step.to_string());
            ScanSource::Range { start: BigInt::from(start), step }
        }
        None => ScanSource::Progression(gate.progression.clone()),
    };
    let p = loaded.preset;
    let filters = ScanFilters {
        totally_real: p.is_some_and(|p| p.totally_real),
        unramified_at_two: p.is_some_and(|p| p.unramified_at_two),
        claimed_group: p.filter(|_| prime_budget > 0).map(|p| p.group_key.to_string()),
        require_all_certified: true,
        max_examined,
    };
    report.inputs = loaded.inputs;
    let mut res = scan_progression(&certifier, &source, count, &filters);
    let _ = writeln!(out, "scanned {} values, {} certificates", res.examined, res.certificates.len());
    for c in &res.certificates {
        let twist = c.twist.as_ref().map_or("-".to_string(), BigInt::to_string);
        let _ = writeln!(out, "c = {}  real roots {}  twist {}  {}", c.c, c.real_roots, twist, statuses_line(c));
    }
    if let Some(w) = &res.warning {
        let _ = writeln!(out, "warning: {w}");
    }
    report.verdicts.push(Check {
        name: "certificates".into(),
        expected: count.to_string(),
        computed: res.certificates.len().to_string(),
        pass: res.certificates.len() == count,
    });
    report.certificates = std::mem::take(&mut res.certificates);
    report.scan =
        Some(ScanMeta { source: res.source, requested: res.requested, examined: res.examined, warning: res.warning });
    report.gate = Some(gate);
    Ok(())
}

fn cmd_certify(
    source: &Source,
    c: &str,
    prime_budget: usize,
    report: &mut RunReport,
    out: &mut String,
) -> Result<(), Failure> {
    let mut loaded = load(source)?;
    let c = parse_c(c)?;
    loaded.inputs.args.insert("c".into(), c.to_string());
    report.inputs = loaded.inputs;
    let data = crate::gate::compute_n(&loaded.f)?;
    let certifier = Certifier::new(data, CertifyOptions { galois_primes: prime_budget, ..CertifyOptions::default() });
    let cert = certifier.certify(&c)?;
    let _ = writeln!(out, "f({c}, x) = {}", cert.f_c);
    let _ = writeln!(out, "irreducible: {:?}", cert.irreducible.status);
    let _ = writeln!(out, "disc = {}", cert.disc);
    for s in &cert.prime_statuses {
        let kind = if s.block { "block" } else { "prime" };
        let _ = writeln!(out, "{kind} {:>12}  exponent {:>3}  {:?}", s.p, s.disc_exponent, s.status);
    }
    let _ = writeln!(out, "real roots: {}", cert.real_roots);
    if let Some(t) = &cert.twist {
        let _ = writeln!(out, "twist: Q(sqrt({t}))");
    }
    report.verdicts.push(Check {
        name: "all ramified primes certified".into(),
        expected: "true".into(),
        computed: cert.all_certified.to_string(),
        pass: cert.all_certified,
    });
    report.certificates.push(cert);
    Ok(())
}

fn cmd_galois(
    source: &Source,
    c: &str,
    budget: usize,
    report: &mut RunReport,
    out: &mut String,
) -> Result<(), Failure> {
    let mut loaded = load(source)?;
    let c = parse_c(c)?;
    loaded.inputs.args.insert("c".into(), c.to_string());
    loaded.inputs.args.insert("prime_budget".into(), budget.to_string());
    let claimed = loaded.preset.map(|p| p.group_key);
    report.inputs = loaded.inputs;
    let fc = specialize(&loaded.f, &c);
    let v = identify_default(&fc, budget)?;
    let _ = writeln!(
        out,
        "degree {}  parity {:?}  order bound {}  samples {}",
        v.degree, v.parity, v.order_lower_bound, v.samples_used
    );
    for (pat, p) in &v.observed {
        let _ = writeln!(out, "pattern {pat:?} first at p = {p}");
    }
    for e in &v.eliminated {
        let _ = writeln!(out, "eliminated {}: {:?}", e.group, e.reason);
    }
    let _ = writeln!(out, "surviving: {:?}  ({:?})", v.surviving, v.status);
    if let Some(g) = claimed {
        report.verdicts.push(Check {
            name: "claimed group survives".into(),
            expected: g.to_string(),
            computed: v.surviving.join(", "),
            pass: v.survives(g),
        });
    }
    report.galois = Some(v);
    Ok(())
}

fn cmd_groups(report: &mut RunReport, out: &mut String) -> Result<(), Failure> {
    let a5 = groups::a5()?;
    let psl27 = groups::psl27()?;
    let psl33 = groups::psl33()?;
    let mut summaries = Vec::new();
    for (name, g, order) in [("A5", &a5, 60), ("PSL(2,7)", &psl27, 168), ("PSL(3,3)", &psl33, 5616)] {
        let s = GroupSummary::of(name, g);
        let _ = writeln!(
            out,
            "{name}: degree {} order {}  generated by involutions: {}",
            s.degree,
            s.order,
            g.generated_by_involutions()
        );
        report.verdicts.push(Check {
            name: format!("|{name}|"),
            expected: order.to_string(),
            computed: s.order.to_string(),
            pass: s.order == order,
        });
        report.verdicts.push(Check {
            name: format!("{name} generated by involutions"),
            expected: "true".into(),
            computed: g.generated_by_involutions().to_string(),
            pass: g.generated_by_involutions(),
        });
        summaries.push(s);
    }
    let a5c = intersective::a5_cover()?;
    let p33c = intersective::psl33_cover()?;
    let (d5, a4) = (groups::d5()?, groups::a4()?);
    let a5_bound3 = groups::decomposition_compatibility(&a5, &[&a4, &d5], 3)?;
    for c in [&a5c, &p33c] {
        let _ = writeln!(
            out,
            "{} cover by {:?}: cover {}  trivial core {}  s = {:?}  decomposition groups (inertia <= 2) compatible {}",
            c.group,
            c.datum.subgroups,
            c.datum.is_cover,
            c.datum.trivial_intersection,
            c.datum.s_value,
            c.compatibility.compatible
        );
        let ok = c.datum.is_cover && c.datum.trivial_intersection && c.compatibility.compatible;
        report.verdicts.push(Check {
            name: format!("{} cover", c.group),
            expected: "cover, trivial core, compatible at 2".into(),
            computed: format!("{} {} {}", c.datum.is_cover, c.datum.trivial_intersection, c.compatibility.compatible),
            pass: ok,
        });
    }
    let _ = writeln!(
        out,
        "A5 at inertia <= 3: compatible {}  minimal offenders {:?}",
        a5_bound3.compatible, a5_bound3.minimal_offender_types
    );
    report.verdicts.push(Check {
        name: "A5 decomposition groups at inertia <= 3".into(),
        expected: "incompatible, minimal offender S3".into(),
        computed: format!("{} {:?}", a5_bound3.compatible, a5_bound3.minimal_offender_types),
        pass: !a5_bound3.compatible && a5_bound3.minimal_offender_types == ["S3"],
    });
    let fpf = psl33.fixed_point_free_elements();
    let all13 = fpf.iter().all(|p| p.order() == 13);
    let n13 = psl33.elements().iter().filter(|p| p.order() == 13).count();
    let _ = writeln!(out, "PSL(3,3): {} fixed-point-free elements, {} of order 13", fpf.len(), n13);
    report.verdicts.push(Check {
        name: "PSL(3,3) fixed-point-free elements".into(),
        expected: "324, all of order 13".into(),
        computed: format!("{}, all of order 13: {}", fpf.len(), all13 && fpf.len() == n13),
        pass: fpf.len() == 324 && all13,
    });
    let invs = psl33.involutions();
    let fix = invs.iter().all(|t| psl33.centralizer(t).fixes_a_point());
    report.verdicts.push(Check {
        name: "PSL(3,3) involution centralizers fix a point".into(),
        expected: "true".into(),
        computed: format!("{} over {} involutions", fix, invs.len()),
        pass: fix,
    });
    report.groups = Some(json!({
        "summaries": summaries,
        "covers": [a5c, p33c],
        "a5_inertia_3": a5_bound3,
        "psl33_fixed_point_free": fpf.len(),
    }));
    Ok(())
}

fn cmd_intersective(
    source: &Source,
    c: &str,
    bound: u64,
    budget: usize,
    report: &mut RunReport,
    out: &mut String,
) -> Result<(), Failure> {
    let source = if source.preset.is_none() && source.poly_file.is_none() {
        Source { preset: Some("a5".into()), poly_file: None }
    } else {
        source.clone()
    };
    let mut loaded = load(&source)?;
    let c = parse_c(c)?;
    loaded.inputs.args.insert("c".into(), c.to_string());
    loaded.inputs.args.insert("bound".into(), bound.to_string());
    report.inputs = loaded.inputs;
    let data = crate::gate::compute_n(&loaded.f)?;
    let cert = Certifier::new(data, CertifyOptions::default()).certify(&c)?;
    let quintic = specialize(&loaded.f, &c);
    let resolvent = intersective::sextic_resolvent_report(&quintic)?;
    let galois = identify_default(&quintic, budget)?;
    let cover = intersective::a5_cover()?;
    let _ = writeln!(out, "quintic: {quintic}");
    let _ = writeln!(out, "sextic:  {}", resolvent.sextic);
    let result = intersective::certify_optimal(&cert, &galois, &cover, &[quintic, resolvent.sextic.clone()], bound);
    report.certificates.push(cert);
    report.resolvent = Some(resolvent);
    report.galois = Some(galois);
    let cand = result?;
    for r in &cand.reasoning {
        let _ = writeln!(out, "  {r}");
    }
    let _ = writeln!(out, "status {:?}  m = {}  optimal {}", cand.status, cand.m, cand.optimal);
    report.verdicts.push(Check {
        name: "optimally intersective".into(),
        expected: "m = 2 = s(A5), certified given Galois ID".into(),
        computed: format!("m = {}, {:?}", cand.m, cand.status),
        pass: cand.optimal && cand.status == intersective::CandidateStatus::CertifiedGivenGaloisID,
    });
    report.intersective = Some(cand);
    Ok(())
}

fn cmd_reproduce(example: &str, report: &mut RunReport, out: &mut String) -> Result<(), Failure> {
    let list: Vec<&str> = if example == "all" {
        EXAMPLES.to_vec()
    } else if EXAMPLES.contains(&example) {
        vec![example]
    } else {
        return Err(Failure::Usage(format!("unknown example {example}; expected s3, a5, psl27, psl33 or all")));
    };
    report.inputs.args.insert("example".into(), example.to_string());
    for name in list {
        let r = reproduce::reproduce(name)?;
        let _ = writeln!(out, "== {name}");
        for c in &r.checks {
            let _ = writeln!(out, "{c}");
            report.verdicts.push(Check { name: format!("{name}: {}", c.name), ..c.clone() });
        }
        if example != "all" {
            report.inputs.preset = Some(name.to_string());
            report.gate = r.gate;
            report.certificates = r.certificates;
            report.intersective = r.intersective;
            report.scan = r.scan.map(|s| ScanMeta {
                source: s.source,
                requested: s.requested,
                examined: s.examined,
                warning: s.warning,
            });
        }
    }
    Ok(())
}

fn init_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0) {
        // a second call fails harmlessly, e.g. in tests
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// Parses `args`, runs the command, writes text to stdout and the report to
/// `--json`. Returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    init_threads();
    let (report, text, failure) = execute(&cli);
    print!("{text}");
    if let Some(path) = &cli.json {
        if let Err(e) = std::fs::write(path, report.to_json()) {
            eprintln!("error: {}: {e}", path.display());
            return 2;
        }
    }
    match failure {
        Some(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            2
        }
        Some(Failure::Compute(m)) => {
            eprintln!("error: {m}");
            1
        }
        None if report.passed => 0,
        None => 1,
    }
}

/// Runs a parsed command. The report is returned even when the command
/// fails partway.
pub fn execute(cli: &Cli) -> (RunReport, String, Option<Failure>) {
    let started = SystemTime::now();
    let name = match &cli.command {
        Command::Gate(_) => "gate",
        Command::Scan { .. } => "scan",
        Command::Certify { .. } => "certify",
        Command::Galois { .. } => "galois",
        Command::Groups => "groups",
        Command::Intersective { .. } => "intersective",
        Command::Reproduce { .. } => "reproduce",
    };
    let mut report = RunReport::new(name, Inputs::default(), cli.seed);
    let mut out = String::new();
    let result = match &cli.command {
        Command::Gate(a) => cmd_gate(a, &mut report, &mut out),
        Command::Scan { gate, count, prime_budget, from, step, max_examined } => {
            cmd_scan(gate, *count, *prime_budget, *from, *step, *max_examined, &mut report, &mut out)
        }
        Command::Certify { source, c, prime_budget } => cmd_certify(source, c, *prime_budget, &mut report, &mut out),
        Command::Galois { source, c, prime_budget } => cmd_galois(source, c, *prime_budget, &mut report, &mut out),
        Command::Groups => cmd_groups(&mut report, &mut out),
        Command::Intersective { source, c, bound, prime_budget } => {
            cmd_intersective(source, c, *bound, *prime_budget, &mut report, &mut out)
        }
        Command::Reproduce { example } => cmd_reproduce(example, &mut report, &mut out),
    };
    report.passed = result.is_ok() && report.verdicts.iter().all(|v| v.pass);
    report.stamp(started);
    (report, out, result.err())
}
