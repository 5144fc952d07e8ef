mod pretty;

use std::fmt::Write as _;
use std::io::{Read, Write as _};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use lsfactors::basechange::{base_change, verify_bc_preserves, BcReport};
use lsfactors::exactalg::RationalFunction;
use lsfactors::globalfield::{build_place_table, partial_zeta, zeta_closed_form};
use lsfactors::lgroup::{Algebra, SatakeClass, SatakeValue};
use lsfactors::localfactors::{
    check_functional_equation, check_multiplicativity, check_temperedness,
    expected_parameter_count, gamma_factor, l_factor, local_coefficient, UnramifiedRep,
};
use lsfactors::rootdata::{build_root_datum, GroupDescriptor};
use lsfactors::verify::{run_suites, Suite, VerifyOptions};
use lsfactors::weyl::{check_chain, image_in_base, langlands_decompose, level_partition, w_zero};

#[derive(Parser)]
#[command(name = "lsfactors", version, about = "Exact unramified local factors for unitary and general linear groups")]
struct Cli {
    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Indent JSON output (implies --json).
    #[arg(long, global = true)]
    json_pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Langlands decomposition of w_0 and the level partition.
    Decompose(DecomposeArgs),
    /// L-factor at one level.
    LFactor(LevelArgs),
    /// gamma, L and epsilon at one level, with the functional equation check.
    Gamma(LevelArgs),
    /// Local coefficient with the multiplicativity check.
    LocalCoeff(RepArgs),
    /// Base change lift and the factor comparison against a general linear twist.
    Bc(BcArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Truncated zeta function of F_q(T).
    Zeta(ZetaArgs),
}

#[derive(Args, Clone)]
struct RepArgs {
    /// Group, e.g. U3 or resGL2.
    #[arg(long, required_unless_present = "input")]
    group: Option<String>,
    /// Comma-separated Satake parameters, e.g. a1,a2 or 2,1/3.
    #[arg(long, required_unless_present = "input", allow_hyphen_values = true)]
    satake: Option<String>,
    /// Second list of parameters for resGL at a split place.
    #[arg(long, allow_hyphen_values = true)]
    second: Option<String>,
    /// base, inert or split.
    #[arg(long)]
    place: Option<String>,
    /// Simple roots of the Levi, 1-based and comma-separated; "" for the torus.
    #[arg(long)]
    theta: Option<String>,
    /// Residue field size: a prime power or a symbol.
    #[arg(long)]
    q: Option<String>,
    /// Conductor exponent of the additive character.
    #[arg(long, allow_hyphen_values = true)]
    psi_conductor: Option<i32>,
    /// Twist by the quadratic character.
    #[arg(long)]
    twist: bool,
    /// JSON representation from a file, or - for stdin.
    #[arg(long, conflicts_with_all = ["group", "satake", "second", "place", "theta", "q", "psi_conductor", "twist"])]
    input: Option<String>,
}

#[derive(Args)]
struct LevelArgs {
    #[command(flatten)]
    rep: RepArgs,
    /// Level of the adjoint constituent, from 1.
    #[arg(long, default_value_t = 1)]
    level: u32,
}

#[derive(Args)]
struct DecomposeArgs {
    /// Group, e.g. U3 or resGL2.
    #[arg(long)]
    group: String,
    /// Simple roots of the Levi, 1-based; empty for the torus.
    #[arg(long, default_value = "")]
    theta: String,
    /// Subset of theta beneath which to decompose; defaults to theta.
    #[arg(long)]
    theta0: Option<String>,
}

#[derive(Args)]
struct BcArgs {
    #[command(flatten)]
    rep: RepArgs,
    /// Parameters of the general linear twist (default: the trivial character).
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<String>,
    /// Second list of the twist at a split place.
    #[arg(long, allow_hyphen_values = true)]
    tau_second: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite to run; repeat for several.
    #[arg(long)]
    suite: Vec<String>,
    /// Run every suite.
    #[arg(long, conflicts_with = "suite")]
    all: bool,
    /// Restrict group-indexed suites to one group.
    #[arg(long)]
    group: Option<String>,
    /// Seed for the randomized suites.
    #[arg(long, default_value_t = VerifyOptions::default().seed)]
    seed: u64,
    /// Random trials per family in the numeric suites.
    #[arg(long, default_value_t = VerifyOptions::default().trials)]
    trials: usize,
}

#[derive(Args)]
struct ZetaArgs {
    /// Size of the constant field, a prime power.
    #[arg(long)]
    q: u64,
    /// Highest power of t to compare.
    #[arg(long, default_value_t = 8)]
    depth: u32,
}

/// Outcome of a command: the JSON value, its pretty rendering, and whether
/// every checked identity held.
struct Output {
    value: Value,
    text: String,
    ok: bool,
}

enum Failure {
    Input(String),
}

impl From<lsfactors::Error> for Failure {
    fn from(e: lsfactors::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<Output, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Decompose(a) => decompose(&a),
        Command::LFactor(a) => run_l_factor(&a),
        Command::Gamma(a) => run_gamma(&a),
        Command::LocalCoeff(a) => run_local_coeff(&a),
        Command::Bc(a) => run_bc(&a),
        Command::Verify(a) => run_verify(&a),
        Command::Zeta(a) => run_zeta(&a),
    };
    match result {
        Ok(out) => {
            let rendered = if cli.json_pretty {
                serde_json::to_string_pretty(&out.value).expect("serializable") + "\n"
            } else if cli.json {
                format!("{}\n", out.value)
            } else {
                out.text
            };
            // A closed pipe downstream is not an error of ours.
            let _ = std::io::stdout().lock().write_all(rendered.as_bytes());
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn split_list(s: &str) -> Vec<String> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(String::from)
        .collect()
}

fn parse_indices(field: &str, s: &str) -> Result<Vec<usize>, Failure> {
    split_list(s)
        .iter()
        .map(|x| {
            x.parse::<usize>()
                .map_err(|_| Failure::Input(format!("{field}: `{x}` is not an index")))
        })
        .collect()
}

fn parse_group(s: &str) -> Result<GroupDescriptor, Failure> {
    Ok(s.parse::<GroupDescriptor>()?)
}

/// Deserializes a representation, naming the offending field on failure.
fn rep_from_json(text: &str) -> Result<UnramifiedRep, Failure> {
    let mut de = serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path == "." {
            Failure::Input(format!("invalid representation: {inner}"))
        } else {
            Failure::Input(format!("invalid representation at `{path}`: {inner}"))
        }
    })
}

fn read_input(src: &str) -> Result<String, Failure> {
    if src == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(src).map_err(|e| Failure::Input(format!("{src}: {e}")))
    }
}

fn rep_from_args(a: &RepArgs) -> Result<UnramifiedRep, Failure> {
    if let Some(src) = &a.input {
        return rep_from_json(&read_input(src)?);
    }
    let mut obj = Map::new();
    obj.insert("group".into(), json!(a.group.clone().unwrap_or_default()));
    obj.insert("satake".into(), json!(split_list(a.satake.as_deref().unwrap_or(""))));
    if let Some(s) = &a.second {
        obj.insert("second".into(), json!(split_list(s)));
    }
    if let Some(p) = &a.place {
        obj.insert("place".into(), json!(p.parse::<Algebra>()?));
    }
    if let Some(th) = &a.theta {
        obj.insert("theta".into(), json!(parse_indices("theta", th)?));
    }
    if let Some(q) = &a.q {
        obj.insert("q".into(), json!(q));
    }
    if let Some(c) = a.psi_conductor {
        obj.insert("psi_conductor".into(), json!(c));
    }
    if a.twist {
        obj.insert("quadratic_twist".into(), json!(true));
    }
    rep_from_json(&Value::Object(obj).to_string())
}

/// Placeholder symbols standing for complex Satake values, longest first.
type Subs = Vec<(String, String)>;

fn placeholders(rep: &UnramifiedRep) -> Subs {
    let mut out = Vec::new();
    let lists = [("z", Some(&rep.satake.values)), ("w", rep.satake.second.as_ref())];
    for (tag, list) in lists {
        for (k, v) in list.into_iter().flatten().enumerate() {
            if let SatakeValue::Numeric(_) = v {
                out.push((format!("%{tag}{k}"), format!("({v})")));
            }
        }
    }
    out.sort_by_key(|(name, _)| std::cmp::Reverse(name.len()));
    out
}

fn with_placeholders(value: &mut Value, subs: &Subs) {
    if !subs.is_empty() {
        let map: Map<String, Value> = subs
            .iter()
            .map(|(k, v)| (k.clone(), json!(v.trim_matches(|c| c == '(' || c == ')'))))
            .collect();
        value["placeholders"] = Value::Object(map);
    }
}

fn rf_line(out: &mut String, subs: &Subs, label: &str, f: &RationalFunction) {
    let mut text = pretty::rational(f);
    for (name, v) in subs {
        text = text.replace(name.as_str(), v);
    }
    let _ = writeln!(out, "{label} = {text}");
}

fn rep_header(rep: &UnramifiedRep) -> String {
    let vals: Vec<String> = rep.satake.values.iter().map(|v| v.to_string()).collect();
    let article = if rep.place == Algebra::Inert { "an" } else { "a" };
    let mut s = format!("{} at {article} {} place, Satake ({})", rep.group, rep.place, vals.join(", "));
    if let Some(second) = &rep.satake.second {
        let vals: Vec<String> = second.iter().map(|v| v.to_string()).collect();
        let _ = write!(s, " | ({})", vals.join(", "));
    }
    if let Some(theta) = &rep.theta {
        let th: Vec<String> = theta.iter().map(|j| (j + 1).to_string()).collect();
        let _ = write!(s, ", theta {{{}}}", th.join(","));
    }
    s.push('\n');
    s
}

fn run_l_factor(a: &LevelArgs) -> Outcome {
    let rep = rep_from_args(&a.rep)?;
    let l = l_factor(&rep, a.level)?;
    let mut value = json!({ "representation": rep, "level": a.level, "l": l });
    let mut text = rep_header(&rep);
    let subs = placeholders(&rep);
    rf_line(&mut text, &subs, &format!("L_{}", a.level), &l);
    if rep.satake.is_numeric() {
        let t = check_temperedness(&rep, a.level, 1e-9)?;
        let _ = writeln!(
            text,
            "tempered: {} (largest pole deviation {:.3e})",
            t.tempered, t.max_deviation
        );
        value["temperedness"] = to_value(&t);
    }
    with_placeholders(&mut value, &subs);
    Ok(Output { value, text, ok: true })
}

fn run_gamma(a: &LevelArgs) -> Outcome {
    let rep = rep_from_args(&a.rep)?;
    let triple = gamma_factor(&rep, a.level)?;
    let fe = check_functional_equation(&rep, a.level)?;
    let mut text = rep_header(&rep);
    let subs = placeholders(&rep);
    rf_line(&mut text, &subs, "gamma", &triple.gamma);
    rf_line(&mut text, &subs, "L", &triple.l);
    rf_line(&mut text, &subs, "epsilon", &triple.epsilon);
    let _ = writeln!(text, "functional equation: {}", if fe.holds { "holds" } else { "FAILS" });
    if let Some(w) = &fe.witness {
        rf_line(&mut text, &subs, "witness", w);
    }
    let mut value = json!({ "representation": rep, "factors": triple, "functional_equation": fe });
    with_placeholders(&mut value, &subs);
    Ok(Output { value, text, ok: fe.holds })
}

fn run_local_coeff(a: &RepArgs) -> Outcome {
    let rep = rep_from_args(a)?;
    let c = local_coefficient(&rep)?;
    let mut text = rep_header(&rep);
    let subs = placeholders(&rep);
    rf_line(&mut text, &subs, "local coefficient", &c);
    let mut value = json!({ "representation": rep, "local_coefficient": c });
    let mut ok = true;
    match check_multiplicativity(&rep) {
        Ok(report) => {
            for lv in &report.levels {
                let _ = writeln!(text, "level {}: {}", lv.level, if lv.agree { "agrees" } else { "DIFFERS" });
                rf_line(&mut text, &subs, "  determinant side", &lv.determinant_side);
                rf_line(&mut text, &subs, "  rank-one side", &lv.rank_one_side);
            }
            let _ = writeln!(text, "multiplicativity: {}", if report.holds { "holds" } else { "FAILS" });
            ok = report.holds;
            value["multiplicativity"] = to_value(&report);
        }
        Err(lsfactors::Error::UnsupportedConstituent(why)) => {
            let _ = writeln!(text, "multiplicativity: not checked ({why})");
            value["multiplicativity"] = Value::Null;
        }
        Err(e) => return Err(e.into()),
    }
    with_placeholders(&mut value, &subs);
    Ok(Output { value, text, ok })
}

fn run_bc(a: &BcArgs) -> Outcome {
    let pi = rep_from_args(&a.rep)?;
    let lift = base_change(&pi)?;
    let n = expected_parameter_count(GroupDescriptor::ResGl(1), pi.place);
    let tau_values: Vec<String> = match &a.tau {
        Some(s) => split_list(s),
        None => vec!["1".into(); n],
    };
    let parse = |list: &[String]| -> Result<Vec<SatakeValue>, Failure> {
        Ok(list.iter().map(|s| SatakeValue::parse(s)).collect::<lsfactors::Result<_>>()?)
    };
    let mut satake = SatakeClass::new(parse(&tau_values)?);
    if pi.place == Algebra::Split {
        let second = match &a.tau_second {
            Some(s) => split_list(s),
            None => vec!["1".into(); tau_values.len()],
        };
        satake.second = Some(parse(&second)?);
    }
    let m = tau_values.len() as u32;
    let tau = UnramifiedRep::new(GroupDescriptor::ResGl(m), pi.place, satake, None)?
        .with_q(pi.q.clone());
    let report: BcReport = verify_bc_preserves(&pi, &tau)?;
    let mut text = rep_header(&pi);
    let mut subs: Subs = report
        .placeholders
        .iter()
        .map(|(name, v)| (name.clone(), format!("({v})")))
        .collect();
    subs.sort_by_key(|(name, _)| std::cmp::Reverse(name.len()));
    let lifted: Vec<String> = lift.lift.satake.values.iter().map(|v| v.to_string()).collect();
    let _ = writeln!(text, "lift to {}: ({})", lift.lift.group, lifted.join(", "));
    if let Some(second) = &lift.lift.satake.second {
        let s: Vec<String> = second.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(text, "second factor: ({})", s.join(", "));
    }
    let sides = [("unitary side", &report.unitary_side), ("general linear side", &report.general_linear_side)];
    for (label, side) in sides {
        let _ = writeln!(text, "{label}:");
        rf_line(&mut text, &subs, "  L", &side.l()?);
        rf_line(&mut text, &subs, "  gamma", &side.gamma()?);
    }
    let _ = writeln!(text, "factors agree: {}", report.factors_agree);
    let _ = writeln!(text, "orbit route agrees: {}", report.orbit_route_agrees);
    if let Some(r) = report.rank_one_route_agrees {
        let _ = writeln!(text, "rank-one route agrees: {r}");
    }
    let ok = report.holds;
    let mut value = to_value(&report);
    value["general_linear_side"]["l"] = to_value(&report.general_linear_side.l()?);
    value["general_linear_side"]["gamma"] = to_value(&report.general_linear_side.gamma()?);
    value["unitary_side"]["l"] = to_value(&report.unitary_side.l()?);
    value["unitary_side"]["gamma"] = to_value(&report.unitary_side.gamma()?);
    Ok(Output { value, text, ok })
}

fn run_verify(a: &VerifyArgs) -> Outcome {
    let suites: Vec<Suite> = if a.all || a.suite.is_empty() {
        Suite::ALL.to_vec()
    } else {
        a.suite
            .iter()
            .map(|s| s.parse::<Suite>().map_err(Failure::from))
            .collect::<Result<_, _>>()?
    };
    let opts = VerifyOptions {
        seed: a.seed,
        group: a.group.as_deref().map(parse_group).transpose()?,
        trials: a.trials,
    };
    let reports = run_suites(&suites, &opts);
    let mut text = String::new();
    for r in &reports {
        let _ = writeln!(
            text,
            "{} {} ({} cases, {} ms)",
            if r.passed { "PASS" } else { "FAIL" },
            r.suite,
            r.cases,
            r.elapsed_ms
        );
        for f in &r.failures {
            let _ = writeln!(text, "  witness: {f}");
        }
        if let Value::Array(details) = &r.details {
            for d in details {
                describe_detail(&mut text, d);
            }
        }
    }
    let ok = reports.iter().all(|r| r.passed);
    Ok(Output {
        value: json!({ "seed": a.seed, "passed": ok, "suites": reports }),
        text,
        ok,
    })
}

/// One multiplicativity report from a group-restricted run, both sides per
/// level.
fn describe_detail(text: &mut String, d: &Value) {
    let report = &d["report"];
    let _ = writeln!(
        text,
        "  {} place, conductor {}, theta {}: {}",
        d["place"].as_str().unwrap_or("?"),
        d["conductor"],
        report["theta"],
        if report["holds"] == json!(true) { "holds" } else { "FAILS" }
    );
    let levels = report["levels"].as_array().cloned().unwrap_or_default();
    for lv in levels {
        let side = |key: &str| {
            serde_json::from_value::<RationalFunction>(lv[key].clone())
                .map(|f| pretty::rational(&f))
                .unwrap_or_else(|_| lv[key].to_string())
        };
        let _ = writeln!(text, "    level {} determinant side = {}", lv["level"], side("determinant_side"));
        let _ = writeln!(text, "    level {} rank-one side    = {}", lv["level"], side("rank_one_side"));
    }
}

fn run_zeta(a: &ZetaArgs) -> Outcome {
    let table = build_place_table(a.q, a.depth.max(1))?;
    let series = partial_zeta(&table, a.depth)?;
    let closed = zeta_closed_form(a.q, a.depth);
    let ok = series == closed;
    let strings = |v: &[num_bigint::BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let mut text = format!("places of F_{}(T) by degree: {}\n", a.q, strings(&table.counts).join(", "));
    let _ = writeln!(text, "Euler product:  {}", strings(&series).join(", "));
    let _ = writeln!(text, "1/((1-t)(1-qt)): {}", strings(&closed).join(", "));
    let _ = writeln!(text, "match through degree {}: {ok}", a.depth);
    Ok(Output {
        value: json!({
            "q": a.q,
            "depth": a.depth,
            "places": table,
            "coefficients": strings(&series),
            "closed_form": strings(&closed),
            "matches": ok,
        }),
        text,
        ok,
    })
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|j| j + 1).collect()
}

fn zero_based(field: &str, v: Vec<usize>) -> Result<Vec<usize>, Failure> {
    v.into_iter()
        .map(|j| {
            j.checked_sub(1)
                .ok_or_else(|| Failure::Input(format!("{field}: indices start at 1")))
        })
        .collect()
}

fn decompose(a: &DecomposeArgs) -> Outcome {
    let group = parse_group(&a.group)?;
    let datum = build_root_datum(group)?;
    let theta = zero_based("theta", parse_indices("theta", &a.theta)?)?;
    let theta0 = match &a.theta0 {
        Some(s) => zero_based("theta0", parse_indices("theta0", s)?)?,
        None => theta.clone(),
    };
    let w0 = w_zero(&datum, &theta)?;
    let mut text = format!("{group}, theta {:?}\nw_0 = {:?}\n", one_based(&theta), w0.matrix);
    let mut value = json!({ "group": group, "theta": one_based(&theta), "theta0": one_based(&theta0), "w0": w0 });
    let mut ok = true;
    match image_in_base(&datum, &w0, &theta0) {
        Some(tp) => {
            let chain = langlands_decompose(&datum, &theta0, &tp, &w0)?;
            let check = check_chain(&datum, &theta0, &tp, &w0, &chain);
            ok = check.is_ok();
            let _ = writeln!(text, "theta' = {:?}, chain length {}", one_based(&tp), chain.factors.len() + 1);
            for (j, th) in chain.thetas.iter().enumerate() {
                let _ = write!(text, "  theta_{} = {:?}", j + 1, one_based(th));
                match chain.alphas.get(j) {
                    Some(al) => {
                        let _ = writeln!(text, ", alpha_{} = {}", j + 1, al + 1);
                    }
                    None => text.push('\n'),
                }
            }
            let _ = writeln!(text, "chain checks: {}", match &check {
                Ok(()) => "pass".to_string(),
                Err(e) => format!("FAIL ({e})"),
            });
            value["theta_prime"] = json!(one_based(&tp));
            value["chain"] = json!({
                "thetas": chain.thetas.iter().map(|t| one_based(t)).collect::<Vec<_>>(),
                "alphas": one_based(&chain.alphas),
                "factors": chain.factors.iter().map(|f| &f.matrix).collect::<Vec<_>>(),
                "blocks": chain.blocks,
            });
            value["chain_check"] = match check {
                Ok(()) => json!({ "passed": true }),
                Err(e) => json!({ "passed": false, "witness": e }),
            };
        }
        None => {
            let _ = writeln!(text, "w_0 does not carry theta0 into the base; no chain");
            value["chain"] = Value::Null;
        }
    }
    if datum.rank() == theta.len() + 1 {
        let lp = level_partition(&datum, &theta, &theta0)?;
        let _ = writeln!(text, "levels: m_r = {}", lp.m_r);
        for (lvl, classes) in &lp.sets {
            let members: Vec<String> = classes.iter().map(|c| format!("{:?}", c.members)).collect();
            let _ = writeln!(text, "  level {lvl}: {}", members.join(" "));
        }
        value["level_partition"] = to_value(&lp);
    }
    Ok(Output { value, text, ok })
}
