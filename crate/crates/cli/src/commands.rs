use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use torsion_core::catalog::{self, get_example, iwasawa_flow_start, Loaded};
use torsion_core::exalg::{Form, Frame};
use torsion_core::g2::{verify_correspondence, G2Structure, RhoSplit};
use torsion_core::model::{build_circle_extension, build_product, parse_model};
use torsion_core::regression::{closed_form_errors, compat_residual, run_all};
use torsion_core::report::{correspondence_json, g2_json, su3_json};
use torsion_core::stable::{flow_run, FlowOptions};
use torsion_core::su3::SU3Structure;
use torsion_core::Error;

/// Compatibility residual tolerated along a numeric flow.
const COMPAT_TOL: f64 = 1e-8;
/// Agreement required with the closed-form solution.
const CLOSED_FORM_TOL: f64 = 1e-6;

const F6: Frame = Frame::SPATIAL6;

pub struct CommandResult {
    /// 0 when every check passed, 1 on a failed check, 2 on bad input.
    pub code: u8,
    pub summary: String,
    pub report: Option<Value>,
    pub report_path: Option<PathBuf>,
    pub error: Option<String>,
}

impl CommandResult {
    fn ok(summary: String, report: Value) -> Self {
        CommandResult {
            code: 0,
            summary,
            report: Some(report),
            report_path: None,
            error: None,
        }
    }

    fn failed(summary: String, report: Value, what: String) -> Self {
        CommandResult {
            code: 1,
            error: Some(what),
            ..Self::ok(summary, report)
        }
    }

    fn from_error(e: Failure) -> Self {
        let (code, msg) = match e {
            Failure::Input(m) => (2, m),
            Failure::Core(e) => (1, e.to_string()),
        };
        CommandResult {
            code,
            summary: String::new(),
            report: None,
            report_path: None,
            error: Some(msg),
        }
    }
}

enum Failure {
    /// The input could not be resolved.
    Input(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownExample { .. } => Failure::Input(e.to_string()),
            e => Failure::Core(e),
        }
    }
}

fn wrap(f: impl FnOnce() -> Result<CommandResult, Failure>) -> CommandResult {
    f().unwrap_or_else(CommandResult::from_error)
}

/// A file path if one exists, otherwise a catalog name.
fn resolve(input: &str) -> Result<Loaded, Failure> {
    let path = Path::new(input);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{input}: {e}")))?;
        return Ok(catalog::load(&parse_model(&text)?)?);
    }
    if input.contains('/') || input.contains('.') {
        return Err(Failure::Input(format!("{input}: no such file")));
    }
    let e = get_example(input)?;
    Ok(Loaded {
        su3: e.su3.clone(),
        g2: e.g2.clone(),
    })
}

fn is_plain_base(s: &SU3Structure) -> bool {
    s.model().frame() == F6 && s.model().time().is_none() && !s.model().is_warped()
}

/// The G2-structure of the input, or the product with an interval.
fn g2_of(loaded: &Loaded) -> Result<G2Structure, Failure> {
    match &loaded.g2 {
        Some(g) => Ok(g.clone()),
        None if is_plain_base(&loaded.su3) => Ok(build_product(loaded.su3.model(), &loaded.su3)?),
        None => Err(Error::Unsupported("no G2-structure for a warped 6-dimensional input".into()).into()),
    }
}

pub fn validate(input: &str) -> CommandResult {
    wrap(|| {
        let l = resolve(input)?;
        let m = l.su3.model();
        let mut s = format!("{input}: valid\n");
        writeln!(s, "SU(3)-structure {}", l.su3.fingerprint()).unwrap();
        if let Some(g) = &l.g2 {
            writeln!(
                s,
                "G2-structure on {} generators, α = e{}",
                g.model().frame().dim(),
                g.alpha_index()
            )
            .unwrap();
        }
        let report = json!({
            "kind": "validate",
            "source": input,
            "valid": true,
            "frame": m.frame().to_string(),
            "parameter": m.time(),
            "warped": m.is_warped(),
            "fingerprint": l.su3.fingerprint(),
            "g2": l.g2.as_ref().map(|g| g.alpha_index()),
        });
        Ok(CommandResult::ok(s, report))
    })
}

fn nonzero_line(out: &mut String, name: &str, f: &Form) {
    if !f.is_zero() {
        writeln!(out, "  {name} = {f}").unwrap();
    }
}

fn list_or_none(items: &[&str]) -> String {
    if items.is_empty() {
        "none".to_string()
    } else {
        items.join(", ")
    }
}

pub fn su3_report(input: &str) -> CommandResult {
    wrap(|| {
        let l = resolve(input)?;
        let r = l.su3.torsion();
        let mut s = format!("{input}: SU(3)-structure {}\n", r.fingerprint);
        writeln!(s, "classes: {}", list_or_none(&r.flags.classes())).unwrap();
        if !r.w1p.is_zero() {
            writeln!(s, "  W1+ = {}", r.w1p).unwrap();
        }
        if !r.w1m.is_zero() {
            writeln!(s, "  W1- = {}", r.w1m).unwrap();
        }
        nonzero_line(&mut s, "W2+", &r.w2p);
        nonzero_line(&mut s, "W2-", &r.w2m);
        nonzero_line(&mut s, "W3", &r.w3);
        nonzero_line(&mut s, "W4", &r.w4);
        nonzero_line(&mut s, "W5", &r.w5);
        writeln!(s, "rank of W1 + W2: {}", r.rank_w12).unwrap();
        writeln!(s, "half-flat: {}", r.flags.half_flat).unwrap();
        Ok(CommandResult::ok(s, su3_json(input, &r)))
    })
}

pub fn g2_report(input: &str) -> CommandResult {
    wrap(|| {
        let l = resolve(input)?;
        let g = g2_of(&l)?;
        let r = g.torsion();
        let mut s = format!("{input}: G2-structure, α = e{}\n", g.alpha_index());
        writeln!(s, "φ = {}", g.phi()).unwrap();
        writeln!(s, "calibrated: {}", r.flags.calibrated).unwrap();
        writeln!(s, "cocalibrated: {}", r.flags.cocalibrated).unwrap();
        writeln!(s, "classes: {}", list_or_none(&r.flags.classes())).unwrap();
        nonzero_line(&mut s, "dφ", &r.dphi);
        nonzero_line(&mut s, "d*φ", &r.dstarphi);
        Ok(CommandResult::ok(s, g2_json(input, &r)))
    })
}

fn read_rho(path: &Path) -> Result<Form, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    if let Ok(sf) = parse_model(&text) {
        if let Some(r) = sf.rho {
            return Ok(r.restrict(F6)?);
        }
    }
    let body: Vec<&str> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .collect();
    let expr = body.join(" ");
    let expr = expr
        .strip_prefix("rho")
        .map(|r| r.trim_start().trim_start_matches('='))
        .unwrap_or(&expr);
    Ok(Form::parse(F6, expr.trim())?)
}

pub fn correspondence(input: &str, rho_file: Option<&Path>) -> CommandResult {
    wrap(|| {
        let l = resolve(input)?;
        let s = &l.su3;
        if !is_plain_base(s) {
            return Err(Error::Unsupported("correspondence needs an unwarped 6-dimensional base".into()).into());
        }
        let rho = match rho_file {
            Some(p) => read_rho(p)?,
            None => {
                l.g2.as_ref()
                    .and_then(|g| g.extension())
                    .map(|e| e.rho.clone())
                    .unwrap_or_else(|| Form::zero(F6, 2))
            }
        };
        let g = if rho.is_zero() {
            build_product(s.model(), s)?
        } else {
            build_circle_extension(s.model(), s, &rho)?
        };
        let report = verify_correspondence(s, &s.torsion(), &RhoSplit::new(s, &rho), &g.torsion())?;
        let mut out = format!("{input}: ρ = {rho}\n");
        for c in &report.checks {
            writeln!(out, "  {} {}", if c.passed { "ok  " } else { "FAIL" }, c.name).unwrap();
        }
        let v = correspondence_json(input, &report);
        Ok(match report.first_failure() {
            None => CommandResult::ok(out, v),
            Some(name) => CommandResult::failed(out, v, format!("check failed: {name}")),
        })
    })
}

pub fn flow(input: &str, t0: f64, t1: f64, dt: f64, csv: Option<&Path>) -> CommandResult {
    if !(dt > 0.0 && t1 > t0 && t0.is_finite() && t1.is_finite()) {
        return CommandResult::from_error(Failure::Input("need dt > 0 and t1 > t0".into()));
    }
    wrap(|| {
        let closed_form = input == "iwasawa-variant";
        let start = if closed_form {
            iwasawa_flow_start()
        } else {
            resolve(input)?.su3
        };
        if !is_plain_base(&start) {
            return Err(Error::Unsupported("the flow starts from an unwarped 6-dimensional structure".into()).into());
        }
        let tr = flow_run(start.model(), &start, &FlowOptions { t0, t1, dt })?;
        if let Some(p) = csv {
            std::fs::write(p, tr.to_csv()?).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
        }
        let compat = compat_residual(&tr);
        let closure = tr.max_diagnostic(|d| d.closure_psi_plus.max(d.closure_omega_sq));
        let last = tr.last();
        let mut s = format!(
            "{input}: {} steps from t = {t0} to t = {}\n",
            tr.states.len() - 1,
            last.t
        );
        writeln!(s, "compatibility residual: {compat:.3e}").unwrap();
        writeln!(s, "closure residual: {closure:.3e}").unwrap();
        let mut v = json!({
            "kind": "flow",
            "source": input,
            "t0": t0,
            "t1": t1,
            "dt": dt,
            "steps": tr.states.len() - 1,
            "compat_residual": compat,
            "closure_residual": closure,
            "final": {
                "t": last.t,
                "omega": last.omega,
                "psi_plus": last.psi_plus,
                "lambda": last.diagnostics.lambda,
            },
        });
        let mut failure = None;
        if closed_form {
            let (max_err, terminal) = closed_form_errors(&tr, t0);
            writeln!(s, "closed-form error: max {max_err:.3e}, terminal {terminal:.3e}").unwrap();
            v["closed_form"] = json!({ "max_error": max_err, "terminal_error": terminal });
            if max_err > CLOSED_FORM_TOL {
                failure = Some(format!(
                    "closed-form agreement: max error {max_err:e} > {CLOSED_FORM_TOL:e}"
                ));
            }
        }
        if compat > COMPAT_TOL {
            failure = Some(format!("compatibility ω∧ψ₊ = 0, ψ₊∧ψ₋ = (2/3)ω³: residual {compat:e}"));
        }
        Ok(match failure {
            None => CommandResult::ok(s, v),
            Some(f) => CommandResult::failed(s, v, f),
        })
    })
}

pub fn verify_all() -> CommandResult {
    let results = run_all();
    let mut s = String::new();
    for c in &results {
        let mark = if c.passed { "PASS" } else { "FAIL" };
        writeln!(s, "{mark} {:>2} {}: {}", c.id, c.title, c.detail).unwrap();
    }
    let v = json!({
        "kind": "acceptance",
        "passed": results.iter().all(|c| c.passed),
        "criteria": results
            .iter()
            .map(|c| json!({ "id": c.id, "title": c.title, "passed": c.passed, "detail": c.detail }))
            .collect::<Vec<_>>(),
    });
    match results.iter().find(|c| !c.passed) {
        None => CommandResult::ok(s, v),
        Some(c) => CommandResult::failed(s, v, format!("criterion {} ({}) failed: {}", c.id, c.title, c.detail)),
    }
}

pub fn list_examples() -> CommandResult {
    let mut s = String::new();
    let mut items = Vec::new();
    for name in catalog::names() {
        let e = get_example(name).expect("catalog entry");
        writeln!(s, "{name:<24} {}", e.description).unwrap();
        items.push(json!({
            "name": name,
            "description": e.description,
            "su3_classes": e.expected_su3,
            "g2": e.expected_g2.map(|(cal, cocal)| json!({ "calibrated": cal, "cocalibrated": cocal })),
        }));
    }
    CommandResult::ok(s, json!({ "kind": "examples", "examples": items }))
}
