use std::sync::Arc;

use quiddity::fixtures;
use quiddity::irreducible::{default_coset_system, find_continuant_value, ContinuantTarget};
use quiddity::quiddity::{dihedral_images, rotation_normal_form};
use quiddity::search::{applicable_bound, enumerate_irreducible, enumerate_quiddities, SearchOptions};
use quiddity::{
    bounds_report, build_coset_system, certificate_two_tuple, decompose_via_cosets, ell_search,
    find_reduction_window, is_irreducible, m_n, monotonicity_check, normal_form, quiddity_sign, ring_from_str,
    sum_oplus, theta_bound, validate_submagma, CosetKind, Error, QTuple, Result, Ring, SubsetR,
};
use serde_json::{json, Value};

use crate::{Command, GlobalOpts, Outcome};

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Syntax { .. } => "syntax",
        Error::InvalidSpec(_) => "invalid_spec",
        Error::RingTooLarge { .. } => "ring_too_large",
        Error::ElementNotInRing(_) => "element_not_in_ring",
        Error::NotInSubset(_) => "not_in_subset",
        Error::ClosureViolation { .. } => "closure_violation",
        Error::EmptySubset => "empty_subset",
        Error::EmptyTuple => "empty_tuple",
        Error::RingMismatch(..) => "ring_mismatch",
        Error::TooShort { .. } => "too_short",
        Error::NotQuiddity(_) => "not_quiddity",
        Error::FormulaNotApplicable(_) => "formula_not_applicable",
        Error::ScaleGuard { .. } => "scale_guard",
        Error::Unsupported(_) => "unsupported",
        Error::NoGuarantee { .. } => "no_guarantee",
        Error::BudgetExceeded { .. } => "budget_exceeded",
        Error::BoundViolation { .. } => "bound_violation",
        Error::CountOverflow(_) => "count_overflow",
    }
}

struct Ctx {
    opts: SearchOptions,
    subset: Option<String>,
}

impl Ctx {
    fn subset(&self, ring: &Arc<Ring>) -> Result<Option<SubsetR>> {
        match &self.subset {
            None => Ok(None),
            Some(text) => {
                let members = ring.parse_elem_list(text)?;
                validate_submagma(ring, &members).map(Some)
            }
        }
    }
}

pub fn dispatch(cmd: Command, global: &GlobalOpts) -> Result<Outcome> {
    let mut opts = SearchOptions { budget: global.budget, ..SearchOptions::default() };
    if let Some(w) = global.workers {
        opts.workers = w.max(1);
    }
    let ctx = Ctx { opts, subset: global.subset.clone() };
    match cmd {
        Command::Ring { spec } => ring_info(&spec),
        Command::Check { spec, tuple } => check(&ctx, &spec, &tuple),
        Command::Enumerate { spec, n, irreducible, normal_forms } => enumerate(&ctx, &spec, n, irreducible, normal_forms),
        Command::Ell { spec, max_n } => ell(&ctx, &spec, max_n),
        Command::Bounds { spec } => bounds(&ctx, &spec),
        Command::Decompose { spec, tuple, system } => decompose(&spec, &tuple, system.as_deref()),
        Command::Sum { spec, left, right } => sum(&spec, &left, &right),
        Command::Normalize { spec, tuple } => normalize(&spec, &tuple),
        Command::Classify { spec } => classify(&ctx, spec.as_deref()),
        Command::Continuant { spec, tuple, value } => continuant(&spec, &tuple, &value),
        Command::Certificate { spec } => certificate(&spec),
        Command::Monotonicity { sub, sup } => monotonicity(&ctx, &sub, &sup),
    }
}

fn ring_info(spec: &str) -> Result<Outcome> {
    let ring = ring_from_str(spec)?;
    let b = bounds_report(&ring)?;
    Ok(Outcome::ok(json!({
        "spec": ring.spec().to_string(),
        "size": ring.size(),
        "car": ring.characteristic(),
        "sl2": b.sl2_order,
        "sl2_method": b.sl2_method,
        "theta": b.theta,
        "coset_bound": b.coset_bound,
        "lower": b.lower,
    })))
}

fn check(ctx: &Ctx, spec: &str, tuple: &str) -> Result<Outcome> {
    let ring = ring_from_str(spec)?;
    let subset = ctx.subset(&ring)?;
    let t = QTuple::parse(&ring, tuple)?;
    if let Some(s) = &subset {
        t.check_subset(s)?;
    }
    let sign = quiddity_sign(&t);
    let (irreducible, witness) = match sign {
        None => (Value::Null, Value::Null),
        Some(_) if t.len() < 3 => (json!(false), Value::Null),
        Some(_) => match find_reduction_window(&t, subset.as_ref())? {
            Some(w) => (json!(false), w.to_json(&ring)),
            None => (json!(is_irreducible(&t, subset.as_ref())?), Value::Null),
        },
    };
    Ok(Outcome::ok(json!({
        "ring": ring.spec().to_string(),
        "tuple": t.format(),
        "matrix": m_n(&ring, t.entries())?.format(&ring),
        "quiddity": sign.is_some(),
        "sign": sign.map(|s| s.labels()).unwrap_or_default(),
        "irreducible": irreducible,
        "witness": witness,
    })))
}

fn enumerate(ctx: &Ctx, spec: &str, n: usize, irreducible: bool, normal_forms: bool) -> Result<Outcome> {
    let ring = ring_from_str(spec)?;
    let subset = ctx.subset(&ring)?;
    let (e, mode) = if irreducible {
        (enumerate_irreducible(&ring, n, subset.as_ref(), &ctx.opts)?, "irreducible")
    } else if normal_forms {
        (enumerate_quiddities(&ring, n, subset.as_ref(), true, &ctx.opts)?, "normal_forms")
    } else {
        (enumerate_quiddities(&ring, n, subset.as_ref(), false, &ctx.opts)?, "raw")
    };
    let tuples: Vec<String> = e.tuples.iter().map(|t| ring.format_tuple(t)).collect();
    let mut out = Outcome::ok(json!({
        "ring": ring.spec().to_string(),
        "subset": subset.as_ref().map(SubsetR::format),
        "n": n,
        "mode": mode,
        "count": e.raw_count,
        "listed": tuples.len(),
        "tuples": tuples,
        "nodes": e.nodes,
        "complete": e.complete,
    }));
    if !e.complete {
        out.partial = true;
        out.diagnostics.push(format!("node budget of {} exhausted; the list is incomplete", ctx.opts.budget));
    }
    out.table = Some(tuples.join("\n") + if tuples.is_empty() { "" } else { "\n" });
    Ok(out)
}

fn ell(ctx: &Ctx, spec: &str, max_n: usize) -> Result<Outcome> {
    let ring = ring_from_str(spec)?;
    let subset = ctx.subset(&ring)?;
    let report = ell_search(&ring, max_n, subset.as_ref(), &ctx.opts)?;
    let theta = theta_bound(&ring)?;
    let mut out = Outcome::ok(serde_json::to_value(&report).expect("serializable"));
    if report.is_partial() {
        out.partial = true;
        let stopped = report.per_size.last().map_or(0, |s| s.n);
        out.diagnostics.push(format!(
            "node budget of {} exhausted at size {stopped}; verified up to {}",
            ctx.opts.budget, report.verified_up_to
        ));
    }
    out.table = Some(format!(
        "ring\tell_found\tverified_up_to\ttheta\tcertified\n{}\t{}\t{}\t{}\t{}\n",
        report.ring, report.max_irreducible_found, report.verified_up_to, theta, report.certified_complete
    ));
    Ok(out)
}

fn bounds(ctx: &Ctx, spec: &str) -> Result<Outcome> {
    let ring = ring_from_str(spec)?;
    let subset = ctx.subset(&ring)?;
    let b = bounds_report(&ring)?;
    let (bound, source) = applicable_bound(&ring, subset.as_ref())?;
    let mut payload = serde_json::to_value(&b).expect("serializable");
    payload["best_upper"] = json!(b.best_upper());
    payload["applicable_bound"] = json!(bound);
    payload["applicable_source"] = serde_json::to_value(source).expect("serializable");
    Ok(Outcome::ok(payload))
}

fn decompose(spec: &str, tuple: &str, system: Option<&str>) -> Result<Outcome> {
    let ring = ring_from_str(spec)?;
    let t = QTuple::parse(&ring, tuple)?;
    let cs = match system {
        None => default_coset_system(&ring)?,
        Some("unitriangular") => build_coset_system(&ring, CosetKind::Unitriangular)?,
        Some("prime_subring") => build_coset_system(&ring, CosetKind::PrimeSubring)?,
        Some(other) => {
            return Err(Error::Unsupported(format!(
                "unknown coset system `{other}` (expected unitriangular or prime_subring)"
            )))
        }
    };
    let w = decompose_via_cosets(&t, &cs)?;
    Ok(Outcome::ok(json!({
        "system": cs.kind(),
        "index": cs.index(),
        "threshold": cs.threshold(),
        "witness": w.to_json(&ring),
    })))
}

fn sum(spec: &str, left: &str, right: &str) -> Result<Outcome> {
    let ring = ring_from_str(spec)?;
    let s = sum_oplus(&QTuple::parse(&ring, left)?, &QTuple::parse(&ring, right)?)?;
    Ok(Outcome::ok(json!({
        "result": s.format(),
        "quiddity": quiddity_sign(&s).is_some(),
    })))
}

fn normalize(spec: &str, tuple: &str) -> Result<Outcome> {
    let ring = ring_from_str(spec)?;
    let t = QTuple::parse(&ring, tuple)?;
    Ok(Outcome::ok(json!({
        "normal_form": ring.format_tuple(&normal_form(t.entries())),
        "rotation_normal_form": ring.format_tuple(&rotation_normal_form(t.entries())),
        "class_size": dihedral_images(t.entries()).len(),
    })))
}

fn classify(ctx: &Ctx, spec: Option<&str>) -> Result<Outcome> {
    let list = match spec {
        None => fixtures::bundled_names().into_iter().map(fixtures::load).collect::<Result<Vec<_>>>()?,
        Some(s) => {
            let ring = ring_from_str(s)?;
            vec![fixtures::for_ring(&ring)?
                .ok_or_else(|| Error::Unsupported(format!("no bundled classification for {}", ring.spec())))?]
        }
    };
    let mut lists = Vec::new();
    let mut out = Outcome::ok(Value::Null);
    let mut rows = String::from("list\tring\tentries\tmax_size\tcertified\tverdict\n");
    for f in &list {
        let (report, diff) = fixtures::classify(f, &ctx.opts)?;
        if report.is_partial() {
            out.partial = true;
            out.diagnostics.push(format!("{}: node budget exhausted at size {}", f.name, report.verified_up_to + 1));
        } else if !diff.pass {
            out.failed = true;
            out.diagnostics.push(format!("{}: search output differs from the bundled list", f.name));
        }
        let verdict = if diff.pass && report.certified_complete { "pass" } else { "fail" };
        rows += &format!(
            "{}\t{}\t{}\t{}\t{}\t{verdict}\n",
            f.name, diff.ring, diff.found, report.max_irreducible_found, report.certified_complete
        );
        let mut v = serde_json::to_value(&diff).expect("serializable");
        v["max_size"] = json!(report.max_irreducible_found);
        v["certified"] = json!(report.certified_complete);
        v["verdict"] = json!(verdict);
        lists.push(v);
    }
    let pass = lists.iter().all(|v| v["verdict"] == "pass");
    out.payload = json!({ "data_version": fixtures::DATA_VERSION, "lists": lists, "pass": pass });
    out.table = Some(rows);
    Ok(out)
}

fn continuant(spec: &str, tuple: &str, value: &str) -> Result<Outcome> {
    let ring = ring_from_str(spec)?;
    let t = QTuple::parse(&ring, tuple)?;
    let target = match value.trim() {
        "0" => ContinuantTarget::Zero,
        "1" => ContinuantTarget::One,
        "-1" => ContinuantTarget::MinusOne,
        other => return Err(Error::Unsupported(format!("continuant target must be 0, 1 or -1, got `{other}`"))),
    };
    Ok(Outcome::ok(json!({
        "target": target,
        "window": find_continuant_value(&t, target),
    })))
}

fn certificate(spec: &str) -> Result<Outcome> {
    let ring = ring_from_str(spec)?;
    let t = certificate_two_tuple(&ring);
    Ok(Outcome::ok(json!({
        "car": ring.characteristic(),
        "tuple": t.as_ref().map(QTuple::format),
        "irreducible": t.is_some(),
    })))
}

fn monotonicity(ctx: &Ctx, sub: &str, sup: &str) -> Result<Outcome> {
    let report = monotonicity_check(&ring_from_str(sub)?, &ring_from_str(sup)?, &ctx.opts)?;
    let mut out = Outcome::ok(serde_json::to_value(&report).expect("serializable"));
    if report.verdict == quiddity::search::MonotonicityVerdict::Violated {
        out.failed = true;
        out.diagnostics.push("monotonicity violated".into());
    }
    Ok(out)
}
