use std::path::Path;

use lch_core::algebra::{validate_dga, Dga, ValidationOptions};
use lch_core::augment::{enumerate_augmentations, twist, Augmentation, EnumerateOptions};
use lch_core::bound::LengthBound;
use lch_core::cobordism::{
    best_capacity_bound, chain_action_bound, chord_diff_bound_for, linearize_map, product_bound,
    push_augmentation, split_cylinder_bound, validate_chain_map, BestBoundOptions, ChainMap,
};
use lch_core::cohomology::{capacity, cohomology, linearized_complex};
use lch_core::construction::{
    packing_feasible, packing_thresholds, profile_min_length, FeasibilityResult,
};
use lch_core::diagram::{compile, validate_diagram, CompileOptions};
use lch_core::f2::Vector;
use lch_core::numeric::{format_rational, round_to_decimal};
use lch_core::report::ValidationReport;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::schema::{self, Kind};
use crate::{invalid, malformed, Cli, Command, Mode};

pub struct Output {
    pub text: String,
    pub json: Value,
    pub status: u8,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output {
            text,
            json,
            status: 0,
        }
    }
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let weak = ValidationOptions {
        allow_weak_energy: cli.allow_weak_energy,
    };
    match &cli.command {
        Command::Validate { file } => validate(file, weak),
        Command::Compile { diagram, output } => {
            let d = schema::load_diagram(diagram)?;
            let opts = CompileOptions {
                allow_weak_energy: cli.allow_weak_energy,
                ..Default::default()
            };
            let dga = compile(&d, opts).map_err(invalid)?;
            let text = schema::canonical(&schema::DgaJson::from_dga(&dga));
            match output {
                Some(path) => {
                    std::fs::write(path, &text)
                        .map_err(|e| malformed(format!("{}: {e}", path.display())))?;
                    Ok(Output::ok(
                        format!("wrote {}\n", path.display()),
                        json!({ "written": path }),
                    ))
                }
                None => Ok(Output::ok(
                    text.clone(),
                    serde_json::from_str(&text).expect("own output"),
                )),
            }
        }
        Command::Augment { dga } => {
            let dga = load_valid_dga(dga, weak)?;
            let augs =
                enumerate_augmentations(&dga, EnumerateOptions::default()).map_err(invalid)?;
            let names: Vec<Vec<String>> = augs.iter().map(|a| a.names(&dga)).collect();
            let text: String = names
                .iter()
                .map(|n| format!("{{{}}}\n", n.join(", ")))
                .collect();
            Ok(Output::ok(text, json!({ "augmentations": names })))
        }
        Command::Lch { dga, aug } => lch(&load_valid_dga(dga, weak)?, aug),
        Command::LowerBound { mode, .. } => lower_bound(cli, *mode, weak),
        Command::UpperBound { profile } => {
            let p = schema::load_profile(profile)?;
            match profile_min_length(&p).map_err(invalid)? {
                FeasibilityResult::Feasible { inf_length } => {
                    Ok(bound_output(&inf_length, cli.precision, vec![], None))
                }
                FeasibilityResult::Infeasible { reason } => Ok(Output::ok(
                    format!("infeasible: {reason}\n"),
                    json!({ "status": "infeasible", "reason": reason }),
                )),
            }
        }
        Command::Packing { k, v } => packing(*k, v, cli.precision),
    }
}

fn report_output(kind: &str, r: &ValidationReport) -> Output {
    let items = |vs: &[lch_core::report::Violation]| -> Vec<Value> {
        vs.iter()
            .map(|v| json!({ "rule": v.rule, "location": v.location, "detail": v.detail }))
            .collect()
    };
    let mut text = String::new();
    for v in &r.violations {
        text += &format!("violation [{}] {}: {}\n", v.rule, v.location, v.detail);
    }
    for v in &r.warnings {
        text += &format!("warning [{}] {}: {}\n", v.rule, v.location, v.detail);
    }
    text += if r.ok() { "ok\n" } else { "invalid\n" };
    Output {
        text,
        json: json!({
            "kind": kind,
            "ok": r.ok(),
            "violations": items(&r.violations),
            "warnings": items(&r.warnings),
        }),
        status: if r.ok() { 0 } else { 1 },
    }
}

fn validate(file: &Path, weak: ValidationOptions) -> Result<Output, CliError> {
    Ok(match schema::sniff(file)? {
        Kind::Dga => report_output("dga", &validate_dga(&schema::load_dga(file)?, weak)),
        Kind::Diagram => {
            let d = schema::load_diagram(file)?;
            let mut r = validate_diagram(&d);
            if r.ok() {
                let opts = CompileOptions {
                    allow_weak_energy: weak.allow_weak_energy,
                    ..Default::default()
                };
                if let Err(e) = compile(&d, opts) {
                    r.violation("compile", &d.name, e.to_string());
                }
            }
            report_output("diagram", &r)
        }
        Kind::Map => {
            let m = schema::load_map(file)?;
            let mut r = validate_dga(&m.source, weak);
            r.merge(validate_dga(&m.target, weak));
            r.merge(validate_chain_map(&m));
            report_output("map", &r)
        }
        Kind::Profile => {
            let p = schema::load_profile(file)?;
            let mut r = ValidationReport::new();
            if let Err(e) = profile_min_length(&p) {
                r.violation("constraint", "constraints", e.to_string());
            }
            report_output("profile", &r)
        }
    })
}

fn load_valid_dga(path: &Path, weak: ValidationOptions) -> Result<Dga, CliError> {
    let dga = schema::load_dga(path)?;
    let r = validate_dga(&dga, weak);
    if !r.ok() {
        let v = &r.violations[0];
        return Err(invalid(format!(
            "{}: {} violation(s), first [{}] {}: {}",
            path.display(),
            r.violations.len(),
            v.rule,
            v.location,
            v.detail
        )));
    }
    Ok(dga)
}

fn parse_aug(dga: &Dga, s: &str) -> Result<Augmentation, CliError> {
    let names: Vec<&str> = s
        .split(',')
        .map(str::trim)
        .filter(|n| !n.is_empty())
        .collect();
    Augmentation::from_names(dga, &names).map_err(malformed)
}

fn parse_class(dga: &Dga, s: &str) -> Result<Vector, CliError> {
    let mut v = Vector::new();
    for n in s.split('+').map(str::trim).filter(|n| !n.is_empty()) {
        let g = dga.id(n).map_err(malformed)?;
        if !v.remove(&g) {
            v.insert(g);
        }
    }
    Ok(v)
}

fn set(names: &[String]) -> String {
    format!("{{{}}}", names.join(", "))
}

fn lch(dga: &Dga, aug: &[String]) -> Result<Output, CliError> {
    let augs = if aug.is_empty() {
        enumerate_augmentations(dga, EnumerateOptions::default()).map_err(invalid)?
    } else {
        aug.iter()
            .map(|a| parse_aug(dga, a))
            .collect::<Result<_, _>>()?
    };
    let mut text = String::new();
    let mut out = Vec::new();
    for eps in &augs {
        let c = linearized_complex(&twist(dga, eps).map_err(invalid)?);
        text += &format!("augmentation {}\n", set(&eps.names(dga)));
        let mut classes = Vec::new();
        for k in cohomology(&c) {
            let cap = capacity(&c, &k.representative).map_err(invalid)?;
            let rep: Vec<&str> = k.representative.iter().map(|&g| dga.name(g)).collect();
            text += &format!(
                "  degree {}: [{}]  capacity {}\n",
                k.degree,
                c.format_vector(&k.representative),
                cap
            );
            classes.push(
                json!({ "degree": k.degree, "representative": rep, "capacity": cap.to_string() }),
            );
        }
        out.push(json!({ "augmentation": eps.names(dga), "classes": classes }));
    }
    Ok(Output::ok(text, json!({ "augmentations": out })))
}

fn bound_output(
    b: &LengthBound,
    precision: u32,
    warnings: Vec<String>,
    theta: Option<String>,
) -> Output {
    let decimal = b.decimal(precision);
    let mut text = format!(
        "rule: {}\nbound: {}\ndecimal: {}{}\n",
        b.rule,
        b.display_exact(),
        if b.open { "> " } else { "" },
        decimal
    );
    if let Some(t) = &theta {
        text += &format!("theta: [{t}]\n");
    }
    if !b.provenance.is_empty() {
        text += "provenance:\n";
        for p in &b.provenance {
            text += &format!("  - {p}\n");
        }
    }
    for w in &warnings {
        text += &format!("warning: {w}\n");
    }
    let mut j = json!({
        "rule": b.rule.as_str(),
        "bound_exact": b.exact(),
        "bound_decimal": decimal,
        "open": b.open,
        "coefficient": format_rational(&b.coefficient),
        "ratio": format_rational(&b.ratio),
        "provenance": b.provenance,
        "warnings": warnings,
    });
    if let Some(t) = theta {
        j["theta"] = json!(t);
    }
    Output::ok(text, j)
}

fn need<'a, T>(x: &'a Option<T>, flag: &str, mode: &str) -> Result<&'a T, CliError> {
    x.as_ref()
        .ok_or_else(|| malformed(format!("--mode {mode} needs --{flag}")))
}

fn load_map_for(
    map: &Path,
    minus: Option<&Path>,
    weak: ValidationOptions,
) -> Result<ChainMap, CliError> {
    let m = schema::load_map(map)?;
    if let Some(p) = minus {
        if schema::load_dga(p)? != m.target {
            return Err(malformed("--minus differs from the target of the map"));
        }
    }
    let mut r = validate_dga(&m.source, weak);
    r.merge(validate_dga(&m.target, weak));
    r.merge(validate_chain_map(&m));
    if !r.ok() {
        let v = &r.violations[0];
        return Err(invalid(format!(
            "invalid chain map: [{}] {}: {}",
            v.rule, v.location, v.detail
        )));
    }
    Ok(m)
}

fn lower_bound(cli: &Cli, mode: Mode, weak: ValidationOptions) -> Result<Output, CliError> {
    let Command::LowerBound {
        minus,
        plus,
        map,
        aug,
        aug_plus,
        pairing,
        theta,
        assume_fundamental,
        ..
    } = &cli.command
    else {
        unreachable!()
    };
    let p = cli.precision;
    match mode {
        Mode::Capacity => {
            let m = load_map_for(need(map, "map", "capacity")?, minus.as_deref(), weak)?;
            let eps = parse_aug(&m.target, need(aug, "aug", "capacity")?)?;
            let eps_plus = push_augmentation(&m, &eps).map_err(invalid)?;
            let opts = BestBoundOptions {
                assume_fundamental: assume_fundamental
                    .as_deref()
                    .map(|s| parse_class(&m.target, s))
                    .transpose()?,
                ..Default::default()
            };
            let best = best_capacity_bound(&m, &eps, &opts).map_err(invalid)?;
            let c = linearized_complex(&twist(&m.target, &eps).map_err(invalid)?);
            let b = best
                .bound
                .with_note(format!("lower augmentation {}", set(&eps.names(&m.target))))
                .with_note(format!(
                    "upper augmentation {}",
                    set(&eps_plus.names(&m.source))
                ));
            let b = match assume_fundamental {
                Some(f) => b.with_note(format!("assumed fundamental class [{f}]")),
                None => b,
            };
            Ok(bound_output(
                &b,
                p,
                best.warnings,
                best.theta.map(|t| c.format_vector(&t)),
            ))
        }
        Mode::ChordDiff => {
            let lo = load_valid_dga(need(minus, "minus", "chord-diff")?, weak)?;
            let hi = load_valid_dga(need(plus, "plus", "chord-diff")?, weak)?;
            Ok(bound_output(
                &chord_diff_bound_for(&lo, &hi).map_err(invalid)?,
                p,
                vec![],
                None,
            ))
        }
        Mode::ChainAction => {
            let m = load_map_for(need(map, "map", "chain-action")?, minus.as_deref(), weak)?;
            Ok(bound_output(&chain_action_bound(&m), p, vec![], None))
        }
        Mode::SplitCylinder => {
            let lo = load_valid_dga(need(minus, "minus", "split-cylinder")?, weak)?;
            let hi = load_valid_dga(need(plus, "plus", "split-cylinder")?, weak)?;
            let eps = parse_aug(&lo, aug.as_deref().unwrap_or(""))?;
            let eps_plus = parse_aug(&hi, aug_plus.as_deref().unwrap_or(""))?;
            let pairing: Vec<usize> = match pairing {
                Some(s) => s
                    .split(',')
                    .map(|x| {
                        x.trim()
                            .parse()
                            .map_err(|_| malformed(format!("bad pairing {s:?}")))
                    })
                    .collect::<Result<_, _>>()?,
                None => (0..lo.num_components).collect(),
            };
            let best =
                split_cylinder_bound(&lo, &hi, &eps, &eps_plus, &pairing).map_err(invalid)?;
            let c = linearized_complex(&twist(&lo, &eps).map_err(invalid)?);
            Ok(bound_output(
                &best.bound,
                p,
                best.warnings,
                best.theta.map(|t| c.format_vector(&t)),
            ))
        }
        Mode::Product => {
            let m = load_map_for(need(map, "map", "product")?, minus.as_deref(), weak)?;
            let eps = parse_aug(&m.target, need(aug, "aug", "product")?)?;
            if theta.is_empty() {
                return Err(malformed("--mode product needs at least one --theta"));
            }
            let thetas: Vec<Vector> = theta
                .iter()
                .map(|t| parse_class(&m.target, t))
                .collect::<Result<_, _>>()?;
            let lin = linearize_map(&m, &eps).map_err(invalid)?;
            let b = product_bound(&lin, &thetas).map_err(invalid)?;
            Ok(bound_output(&b, p, vec![], None))
        }
    }
}

fn packing(k: usize, v: &str, precision: u32) -> Result<Output, CliError> {
    let shifts = v
        .split(',')
        .map(|x| schema::rational("v", x))
        .collect::<Result<Vec<_>, _>>()?;
    let r = packing_feasible(k, &shifts, precision).map_err(malformed)?;
    let thresholds = packing_thresholds(k, precision);
    let mut text = format!("verdict: {}\n", r.verdict.as_str());
    let mut th = Vec::new();
    for (d, lo, hi) in &thresholds {
        text += &format!("gap {d}: {lo} <= v_i - v_j <= {hi}\n");
        th.push(json!({ "gap": d, "lower": lo, "upper": hi }));
    }
    let mut checks = Vec::new();
    for c in &r.checks {
        let verdict = match c.verdict {
            lch_core::numeric::Certified::True => "holds",
            lch_core::numeric::Certified::False => "fails",
            lch_core::numeric::Certified::Unknown => "undecided",
        };
        let diff = format_rational(&c.difference);
        let dec = round_to_decimal(&c.difference, precision);
        text += &format!("v{} - v{} = {} ({}): {}\n", c.i, c.j, diff, dec, verdict);
        checks.push(json!({ "i": c.i, "j": c.j, "difference": diff, "verdict": verdict }));
    }
    Ok(Output::ok(
        text,
        json!({ "k": k, "verdict": r.verdict.as_str(), "thresholds": th, "checks": checks }),
    ))
}
