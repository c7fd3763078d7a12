//! The `mvf` command line: argument parsing, dispatch and report emission.
//!
//! [`run`] executes a full argument vector in-process and returns what the
//! binary would print, so tests can check output and exit codes directly.

pub mod report;

use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use mvf_core::algebraic::{newton_slopes, roots_univariate, vj_project};
use mvf_core::berkovich::{gauss_norm, hausdorff, Ball, Sphere};
use mvf_core::charts::{chart_len, chart_section, phi_defect, repair, rho, ChartTuple};
use mvf_core::gen::{random_point, random_proj};
use mvf_core::logic::{eval_formula, run_axiom_suite, Axiom, AxiomReport};
use mvf_core::ordered::{extend_step_ordered, fr_check, omvf_suite, sq_pred};
use mvf_core::parse::{
    parse_element, parse_family, parse_field, parse_formula, parse_point, parse_points, parse_poly, parse_rational,
    parse_unipoly, parse_value,
};
use mvf_core::perturbation::{distance_preservation_check, measure_pseudo_eps, PerturbationMap};
use mvf_core::projective::proj_distance;
use mvf_core::rng::{label, split};
use mvf_core::{Field, FieldElement, MvfError, ProjPoint, Result};
use serde_json::{json, Value};

use report::{error_json, real_json, table, value_json, Envelope, Outcome};

#[derive(Parser, Debug)]
#[command(name = "mvf", version, about = "Exact computations in metric valued fields")]
pub struct Cli {
    /// Field spec, e.g. `qp:5`, `laurent:q:prec=20`, `puiseux:q`, `trivial:q`.
    #[arg(long, global = true)]
    pub field: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Emit the JSON report instead of a table.
    #[arg(long, global = true)]
    pub json: bool,
    /// Override the field's working precision.
    #[arg(long, global = true)]
    pub prec: Option<u32>,
    /// Record wall-clock time in `timing_ms`.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Evaluate a formula at points of ℙ¹.
    Eval {
        #[arg(long)]
        pred: String,
        #[arg(long, default_value = "")]
        at: String,
        /// Sample size for quantified variables.
        #[arg(long, default_value_t = 32)]
        samples: usize,
    },
    /// Projective distance between two points.
    Dist {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Run an axiom suite on random instances.
    Axioms {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Chart covering of ℙⁿ.
    Chart {
        #[arg(value_enum)]
        action: ChartAction,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        point: Option<String>,
        #[arg(long)]
        tuple: Option<String>,
        /// Random points for `roundtrip` without `--point`.
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
    /// Balls, spheres and Gauss norms on ℙ¹.
    Sphere {
        #[command(subcommand)]
        op: SphereOp,
    },
    /// Ordered and real closed predicates.
    Ordered {
        #[command(subcommand)]
        op: OrderedOp,
    },
    /// Roots of a polynomial in `Y`.
    Roots {
        #[arg(long)]
        poly: String,
    },
    /// Nearby point of a variety given by a normalized family.
    Vj {
        #[arg(long)]
        family: String,
        #[arg(long)]
        point: String,
    },
    /// Measure a perturbation and check distance preservation.
    Perturb {
        /// `identity`, `rescale:<alpha>` or `relabel:<lambda>`.
        #[arg(long)]
        map: String,
        #[arg(long, default_value_t = 50)]
        sample_size: usize,
        #[arg(long, default_value = "1/2")]
        r: String,
        /// Tolerance for the distance check; defaults to the measured one.
        #[arg(long)]
        eps: Option<String>,
    },
    /// Characteristic pair and the value of the residue characteristic.
    Classify,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Suite {
    Mvf,
    Acmvf,
    Omvf,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum ChartAction {
    Repair,
    Rho,
    Section,
    Roundtrip,
}

#[derive(Subcommand, Debug)]
pub enum SphereOp {
    /// Gauss norm of a polynomial in `Y` on a ball.
    Gauss {
        #[arg(long)]
        center: String,
        #[arg(long)]
        radius: String,
        #[arg(long)]
        poly: String,
    },
    /// Hausdorff distance of two balls, each given as `<point>@<radius>`.
    Dh {
        #[arg(long)]
        b1: String,
        #[arg(long)]
        b2: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum OrderedOp {
    /// Check `|Σ xᵢ²| = ⋁ |xᵢ|²` on random pairs.
    Fr {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Same as `axioms --suite omvf`.
    Omvf {
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// `⟨P⟩^Sq` in closed form with a witness.
    Sq {
        #[arg(long)]
        poly: String,
        #[arg(long, default_value = "")]
        at: String,
    },
    /// One ordered extension step with the identity as partial map.
    Extend {
        /// Strictly increasing elements, comma separated.
        #[arg(long)]
        a: String,
        #[arg(long)]
        c: String,
        #[arg(long, default_value = "1/10")]
        eps: String,
    },
}

impl Cmd {
    pub fn name(&self) -> &'static str {
        match self {
            Cmd::Eval { .. } => "eval",
            Cmd::Dist { .. } => "dist",
            Cmd::Axioms { .. } => "axioms",
            Cmd::Chart { .. } => "chart",
            Cmd::Sphere { .. } => "sphere",
            Cmd::Ordered { .. } => "ordered",
            Cmd::Roots { .. } => "roots",
            Cmd::Vj { .. } => "vj",
            Cmd::Perturb { .. } => "perturb",
            Cmd::Classify => "classify",
        }
    }
}

/// What the binary prints and its exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

/// Parse and execute an argument vector (the first item is the program name).
pub fn run<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Output { stdout: text, stderr: String::new(), code }
            } else {
                Output { stdout: String::new(), stderr: text, code }
            };
        }
    };
    execute(&cli)
}

fn resolve_field(cli: &Cli) -> Result<Field> {
    let spec = cli
        .field
        .as_deref()
        .ok_or_else(|| MvfError::InvalidInput("--field is required".into()))?;
    let f = parse_field(spec)?;
    Ok(match cli.prec {
        Some(p) if p > 0 => f.with_prec(p),
        Some(_) => return Err(MvfError::InvalidInput("--prec must be positive".into())),
        None => f,
    })
}

pub fn execute(cli: &Cli) -> Output {
    let start = Instant::now();
    let field = resolve_field(cli);
    let outcome = match &field {
        Ok(f) => dispatch(&cli.cmd, f, cli.seed),
        Err(e) => Err(e.clone()),
    };
    let timing_ms = cli.timing.then(|| start.elapsed().as_millis() as u64);
    let field_name = field.as_ref().ok().map(|f| f.spec_string()).or_else(|| cli.field.clone());
    match outcome {
        Ok(o) => {
            let code = if o.violations.is_empty() { EXIT_OK } else { EXIT_VIOLATION };
            let stdout = if cli.json {
                let env = Envelope {
                    command: cli.cmd.name(),
                    field: field_name,
                    seed: cli.seed,
                    result: o.result,
                    violations: o.violations,
                    timing_ms,
                    error: None,
                };
                serde_json::to_string_pretty(&env).expect("serializable") + "\n"
            } else {
                let mut s = o.table;
                if !o.violations.is_empty() {
                    s.push_str(&format!("{} violation(s)\n", o.violations.len()));
                }
                if let Some(ms) = timing_ms {
                    s.push_str(&format!("time: {ms} ms\n"));
                }
                s
            };
            Output { stdout, stderr: String::new(), code }
        }
        Err(e) => {
            if cli.json {
                let env = Envelope {
                    command: cli.cmd.name(),
                    field: field_name,
                    seed: cli.seed,
                    result: Value::Null,
                    violations: Vec::new(),
                    timing_ms,
                    error: Some(error_json(&e)),
                };
                Output { stdout: serde_json::to_string_pretty(&env).expect("serializable") + "\n", stderr: String::new(), code: EXIT_ERROR }
            } else {
                Output { stdout: String::new(), stderr: format!("error: {e}\n"), code: EXIT_ERROR }
            }
        }
    }
}

fn dispatch(cmd: &Cmd, f: &Field, seed: u64) -> Result<Outcome> {
    match cmd {
        Cmd::Eval { pred, at, samples } => eval(f, seed, pred, at, *samples),
        Cmd::Dist { a, b } => dist(f, a, b),
        Cmd::Axioms { suite, trials } => axioms(f, seed, *suite, *trials),
        Cmd::Chart { action, n, point, tuple, trials } => chart(f, seed, *action, *n, point.as_deref(), tuple.as_deref(), *trials),
        Cmd::Sphere { op } => sphere(f, op),
        Cmd::Ordered { op } => ordered(f, seed, op),
        Cmd::Roots { poly } => roots(f, poly),
        Cmd::Vj { family, point } => vj(f, family, point),
        Cmd::Perturb { map, sample_size, r, eps } => perturb(f, seed, map, *sample_size, r, eps.as_deref()),
        Cmd::Classify => Ok(classify(f)),
    }
}

fn points_or_empty(f: &Field, s: &str) -> Result<Vec<ProjPoint>> {
    if s.trim().is_empty() {
        Ok(Vec::new())
    } else {
        parse_points(f, s)
    }
}

fn eval(f: &Field, seed: u64, pred: &str, at: &str, samples: usize) -> Result<Outcome> {
    let phi = parse_formula(pred)?;
    let pts = points_or_empty(f, at)?;
    let sample: Vec<ProjPoint> = (0..samples).map(|i| random_point(f, &mut split(seed, &[label("eval"), i as u64]))).collect();
    let v = eval_formula(&phi, &pts, &sample, f)?;
    let result = json!({
        "formula": phi.to_string(),
        "at": pts.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "value": real_json(&v.value),
        "quantifiers": v.quantifiers,
        "sample_size": v.sample_size,
    });
    let mut rows = vec![("formula".into(), phi.to_string()), ("value".into(), v.value.render())];
    if v.quantifiers > 0 {
        rows.push(("sampled".into(), format!("{} quantifier(s) over {} points", v.quantifiers, v.sample_size)));
    }
    Ok(Outcome::new(result, table(&rows)))
}

fn dist(f: &Field, a: &str, b: &str) -> Result<Outcome> {
    let (x, y) = (parse_point(f, a)?, parse_point(f, b)?);
    let d = proj_distance(&x, &y)?;
    let result = json!({ "a": x.to_string(), "b": y.to_string(), "distance": value_json(&d) });
    Ok(Outcome::new(result, format!("{}\n", d.render())))
}

fn axiom_outcome(reports: Vec<AxiomReport>) -> Outcome {
    let mut violations = Vec::new();
    let mut rows = Vec::new();
    for r in &reports {
        for v in &r.violations {
            violations.push(json!({ "axiom": r.axiom, "instance": v.instance, "lhs": v.lhs, "rhs": v.rhs, "gap": v.gap }));
        }
        let mut line = format!("trials={} violations={} max_gap={}", r.trials, r.violations.len(), r.max_gap);
        if r.certified > 0 {
            line.push_str(&format!(" certified={}", r.certified));
        }
        if let Some(inf) = &r.achieved_inf {
            line.push_str(&format!(" inf={inf}"));
        }
        if let Some(n) = &r.note {
            line.push_str(&format!(" ({n})"));
        }
        rows.push((r.axiom.clone(), line));
    }
    let mut table = table(&rows);
    for v in violations.iter().take(5) {
        table.push_str(&format!("  {}: {}  lhs={} rhs={}\n", v["axiom"], v["instance"], v["lhs"], v["rhs"]).replace('"', ""));
    }
    let result = serde_json::to_value(&reports).expect("serializable");
    Outcome { result, violations, table }
}

fn axioms(f: &Field, seed: u64, suite: Suite, trials: usize) -> Result<Outcome> {
    let reports = match suite {
        Suite::Mvf => run_axiom_suite(f, &Axiom::suite("mvf", f)?, trials, seed),
        Suite::Acmvf => run_axiom_suite(f, &Axiom::suite("acmvf", f)?, trials, seed),
        Suite::Omvf => omvf_suite(f, trials, seed)?,
    };
    Ok(axiom_outcome(reports))
}

fn infer_n(len: usize) -> Result<usize> {
    (1..=12)
        .find(|&n| chart_len(n) == len)
        .ok_or_else(|| MvfError::InvalidInput(format!("{len} entries is not a chart tuple length")))
}

fn chart_tuple(f: &Field, n: Option<usize>, tuple: Option<&str>) -> Result<ChartTuple> {
    let s = tuple.ok_or_else(|| MvfError::InvalidInput("--tuple is required".into()))?;
    let pts = parse_points(f, s)?;
    let n = match n {
        Some(n) => n,
        None => infer_n(pts.len())?,
    };
    ChartTuple::new(n, pts)
}

fn chart(
    f: &Field,
    seed: u64,
    action: ChartAction,
    n: Option<usize>,
    point: Option<&str>,
    tuple: Option<&str>,
    trials: usize,
) -> Result<Outcome> {
    match action {
        ChartAction::Repair => {
            let a = chart_tuple(f, n, tuple)?;
            let phi = phi_defect(&a)?;
            let b = repair(&a)?;
            let phi_b = phi_defect(&b)?;
            let d = a.distance(&b)?;
            let mut o = Outcome::new(
                json!({
                    "tuple": a.to_string(),
                    "defect": value_json(&phi),
                    "repaired": b.to_string(),
                    "repaired_defect": value_json(&phi_b),
                    "distance": value_json(&d),
                }),
                table(&[
                    ("repaired".into(), b.to_string()),
                    ("defect".into(), format!("{} -> {}", phi.render(), phi_b.render())),
                    ("distance".into(), d.render()),
                ]),
            );
            if !phi_b.is_zero() || d > phi {
                o.violations.push(json!({ "instance": a.to_string(), "lhs": d.render(), "rhs": phi.render() }));
            }
            Ok(o)
        }
        ChartAction::Rho => {
            let a = chart_tuple(f, n, tuple)?;
            let b = rho(&a)?;
            Ok(Outcome::new(json!({ "tuple": a.to_string(), "point": b.to_string() }), format!("{b}\n")))
        }
        ChartAction::Section => {
            let b = parse_point(f, point.ok_or_else(|| MvfError::InvalidInput("--point is required".into()))?)?;
            let a = chart_section(&b)?;
            Ok(Outcome::new(json!({ "point": b.to_string(), "tuple": a.to_string() }), format!("{a}\n")))
        }
        ChartAction::Roundtrip => {
            let pts = match point {
                Some(p) => vec![parse_point(f, p)?],
                None => {
                    let n = n.unwrap_or(2);
                    (0..trials).map(|i| random_proj(f, n, &mut split(seed, &[label("chart"), i as u64]))).collect()
                }
            };
            let mut violations = Vec::new();
            for b in &pts {
                let back = rho(&chart_section(b)?)?;
                if back != *b {
                    violations.push(json!({ "instance": b.to_string(), "lhs": back.to_string(), "rhs": b.to_string() }));
                }
            }
            let table = format!("rho(section(b)) = b on {}/{} points\n", pts.len() - violations.len(), pts.len());
            Ok(Outcome { result: json!({ "points": pts.len(), "failures": violations.len() }), violations, table })
        }
    }
}

fn parse_ball(f: &Field, s: &str) -> Result<Ball> {
    let (c, r) = s
        .rsplit_once('@')
        .ok_or_else(|| MvfError::Parse { position: s.len(), expected: "`<point>@<radius>`".into(), found: s.into() })?;
    Ball::new(parse_point(f, c)?, parse_value(f, r)?)
}

fn sphere(f: &Field, op: &SphereOp) -> Result<Outcome> {
    match op {
        SphereOp::Gauss { center, radius, poly } => {
            let b = Ball::new(parse_point(f, center)?, parse_value(f, radius)?)?;
            let p = parse_unipoly(f, poly)?;
            let g = gauss_norm(&Sphere::ball(b), &p)?;
            Ok(Outcome::new(json!({ "poly": p.to_string(), "gauss_norm": value_json(&g) }), format!("{}\n", g.render())))
        }
        SphereOp::Dh { b1, b2 } => {
            let (x, y) = (parse_ball(f, b1)?, parse_ball(f, b2)?);
            let d = hausdorff(&Sphere::ball(x), &Sphere::ball(y))?;
            Ok(Outcome::new(json!({ "hausdorff": value_json(&d) }), format!("{}\n", d.render())))
        }
    }
}

fn ordered(f: &Field, seed: u64, op: &OrderedOp) -> Result<Outcome> {
    match op {
        OrderedOp::Fr { trials } => Ok(axiom_outcome(vec![fr_check(f, *trials, seed)])),
        OrderedOp::Omvf { trials } => Ok(axiom_outcome(omvf_suite(f, *trials, seed)?)),
        OrderedOp::Sq { poly, at } => {
            let p = parse_poly(poly)?;
            let pts = points_or_empty(f, at)?;
            let ans = sq_pred(f, &p, &pts)?;
            Ok(Outcome::new(
                json!({ "poly": p.to_string(), "value": value_json(&ans.value), "witness": ans.witness.to_string() }),
                table(&[("value".into(), ans.value.render()), ("witness".into(), ans.witness.to_string())]),
            ))
        }
        OrderedOp::Extend { a, c, eps } => {
            let a: Vec<FieldElement> = if a.trim().is_empty() {
                Vec::new()
            } else {
                a.split(',').map(|s| parse_element(f, s)).collect::<Result<_>>()?
            };
            let c = parse_element(f, c)?;
            let eps = parse_rational(eps)?;
            let id = |x: &FieldElement| x.clone();
            let step = extend_step_ordered(&a, &id, f, &c, &eps)?;
            let devs: Vec<String> = step.deviations.iter().map(|d| d.render()).collect();
            let mut o = Outcome::new(
                json!({
                    "d": step.d.to_string(),
                    "cell": step.cell,
                    "deviations": devs,
                    "sides_match": step.sides_match,
                    "satisfied": step.satisfied,
                }),
                table(&[
                    ("d".into(), step.d.to_string()),
                    ("cell".into(), step.cell.map(|i| i.to_string()).unwrap_or_else(|| "below".into())),
                    ("satisfied".into(), step.satisfied.to_string()),
                ]),
            );
            if !step.satisfied {
                o.violations.push(json!({ "instance": c.to_string(), "lhs": devs.join(", "), "rhs": eps.to_string() }));
            }
            Ok(o)
        }
    }
}

fn roots(f: &Field, poly: &str) -> Result<Outcome> {
    let p = parse_unipoly(f, poly)?;
    let np = newton_slopes(&p)?;
    let rs = roots_univariate(&p)?;
    let mut rows = Vec::new();
    let list: Vec<Value> = rs
        .roots
        .iter()
        .map(|(r, m)| {
            let v = r.value()?;
            rows.push((format!("root (mult {m})"), format!("{r}   |root| = {}", v.render())));
            Ok(json!({ "root": r.to_string(), "multiplicity": m, "value": value_json(&v) }))
        })
        .collect::<Result<_>>()?;
    for n in &rs.notes {
        rows.push(("note".into(), n.clone()));
    }
    let result = json!({
        "poly": p.to_string(),
        "newton_polygon": np,
        "roots": list,
        "count": rs.count(),
        "partial": rs.partial,
        "notes": rs.notes,
    });
    Ok(Outcome::new(result, table(&rows)))
}

fn vj(f: &Field, family: &str, point: &str) -> Result<Outcome> {
    let x = parse_point(f, point)?;
    let fam = parse_family(f, family, x.dim() + 1)?;
    let m = fam[0].terms().map(|(e, _)| e.iter().sum::<u32>()).max().unwrap_or(0);
    let proj = vj_project(&x, &fam, m)?;
    let mut o = Outcome::new(
        json!({
            "point": x.to_string(),
            "y": proj.y.to_string(),
            "distance": value_json(&proj.distance),
            "bound": value_json(&proj.bound),
            "residuals": proj.residuals.iter().map(value_json).collect::<Vec<_>>(),
            "holds": proj.holds,
        }),
        table(&[
            ("y".into(), proj.y.to_string()),
            ("d(x, y)".into(), proj.distance.render()),
            ("bound".into(), proj.bound.render()),
        ]),
    );
    if !proj.holds {
        o.violations.push(json!({ "instance": x.to_string(), "lhs": proj.distance.render(), "rhs": proj.bound.render() }));
    }
    Ok(o)
}

fn parse_map(s: &str) -> Result<PerturbationMap> {
    let bad = || MvfError::Parse { position: 0, expected: "identity, rescale:<alpha> or relabel:<lambda>".into(), found: s.into() };
    match s.split_once(':') {
        None if s == "identity" => Ok(PerturbationMap::Identity),
        Some(("rescale", a)) => {
            let a = parse_rational(a)?;
            if a <= num_traits::Zero::zero() {
                return Err(MvfError::InvalidInput("rescale exponent must be positive".into()));
            }
            Ok(PerturbationMap::Rescale(a))
        }
        Some(("relabel", l)) => Ok(PerturbationMap::Relabel(parse_rational(l)?)),
        _ => Err(bad()),
    }
}

fn perturb(f: &Field, seed: u64, map: &str, n: usize, r: &str, eps: Option<&str>) -> Result<Outcome> {
    let theta = parse_map(map)?;
    let r = parse_rational(r)?;
    let sample: Vec<ProjPoint> = (0..n).map(|i| random_point(f, &mut split(seed, &[label("perturb"), i as u64]))).collect();
    let m = measure_pseudo_eps(&theta, &sample)?;
    let eps = match eps {
        Some(e) => parse_rational(e)?,
        None => m.eps.clone(),
    };
    let d = distance_preservation_check(&theta, &sample, &r, &eps)?;
    let mut rows = vec![
        ("map".into(), m.map.clone()),
        ("measured eps".into(), approx_q(&m.eps)),
        ("eps'".into(), m.eps_prime.as_ref().map(approx_q).unwrap_or_else(|| "undefined".into())),
    ];
    for w in &m.families {
        rows.push((format!("  {}", w.family.name()), w.deviation.clone()));
    }
    rows.push(("pairs d >= r".into(), format!("{} checked, {} preserved", d.pairs_checked, d.preserved)));
    if let Some(h) = &d.hypothesis {
        rows.push(("hypothesis".into(), h.clone()));
    }
    let violations = if d.consistent {
        Vec::new()
    } else {
        d.changed.iter().map(|c| json!({ "instance": format!("{}, {}", c.a, c.b), "lhs": c.source, "rhs": c.target })).collect()
    };
    Ok(Outcome { result: json!({ "measurement": m, "distance": d }), violations, table: table(&rows) })
}

fn classify(f: &Field) -> Outcome {
    let (ck, cr, rule) = f.classify();
    let summary = if cr == 0 {
        format!("({ck},{cr}), {rule}")
    } else {
        let v = f.value_of_integer(cr as i64);
        let shown = v.to_rational().map(|q| mvf_core::value::fmt_q(&q)).unwrap_or_else(|| v.render());
        format!("({ck},{cr}), |{cr}| = {shown}")
    };
    Outcome::new(json!({ "char": ck, "residue_char": cr, "rule": rule, "summary": summary }), format!("{summary}\n"))
}

/// Exact when short, else six significant digits.
fn approx_q(q: &mvf_core::Q) -> String {
    let exact = mvf_core::value::fmt_q(q);
    if exact.len() <= 24 {
        exact
    } else {
        format!("~{}", mvf_core::interval::format_significant(q, 6))
    }
}
