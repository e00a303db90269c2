use crate::algebra::{int, parse_poly, ratio, VarSet};
use crate::classes::{derive_coefficients, hankel3_poly, ClassId, PrintedForms};
use crate::error::Result;
use crate::optimize::{
    bb_maximize_with, check_positive, edge_maximize, standard_region, Edge, MaxCertificate, NamedPolynomial, Objective,
    Registry, Strictness,
};
use crate::RationalPoly;
use num_traits::{Signed, Zero};

use super::chain::{split_case1, triangle_majorant, ClassChain};
use super::{AuditItem, AuditKind, AuditStatus, PipelineOptions, BUDGET_NOTE};

fn xy(src: &str) -> RationalPoly {
    parse_poly(VarSet::Xy, src).expect("literal polynomial")
}

fn identity(name: &str, lhs: &RationalPoly, rhs: &RationalPoly, what: &str) -> AuditItem {
    if lhs == rhs {
        AuditItem::new(
            name,
            AuditKind::ExactIdentity,
            AuditStatus::Pass,
            format!("{what}: {lhs}"),
        )
    } else {
        let delta = if lhs.vars() == rhs.vars() {
            (lhs - rhs).to_string()
        } else {
            format!("variable sets differ ({} vs {})", lhs.vars(), rhs.vars())
        };
        AuditItem::new(
            name,
            AuditKind::ExactIdentity,
            AuditStatus::Fail,
            format!("{what}: left - right = {delta}"),
        )
    }
}

fn lookup_failure(name: &str, err: crate::Error) -> AuditItem {
    AuditItem::new(name, AuditKind::ExactIdentity, AuditStatus::Fail, err.to_string())
}

macro_rules! get_or_fail {
    ($reg:expr, $key:expr, $items:expr, $name:expr) => {
        match $reg.get($key) {
            Ok(p) => p.poly.clone(),
            Err(e) => {
                $items.push(lookup_failure($name, e));
                return $items;
            }
        }
    };
}

/// Exact re-derivation of every displayed algebraic step, using the
/// standard registry.
pub fn audit_exact_identities(class: ClassId) -> Vec<AuditItem> {
    audit_exact_identities_with(class, &Registry::standard())
}

pub fn audit_exact_identities_with(class: ClassId, reg: &Registry) -> Vec<AuditItem> {
    let mut items = Vec::new();
    let printed = PrintedForms::for_class(class);
    let chain = ClassChain::for_class(class);
    let formulas = derive_coefficients(class);

    for n in 2..=5 {
        items.push(identity(
            &format!("coefficient-a{n}"),
            formulas.a(n),
            &printed.coefficient(n),
            &format!("a{n} by coefficient matching vs printed"),
        ));
    }

    let h = hankel3_poly(&formulas);
    let mut exp = identity(
        "hankel3-expansion",
        &h.poly,
        &printed.expansion(),
        "determinant composition vs printed expansion",
    );
    if h.denominator() != printed.denominator {
        exp.status = AuditStatus::Fail;
        exp.detail = format!("denominator {} vs printed {}", h.denominator(), printed.denominator);
    } else {
        exp.detail = format!("{} (over {})", exp.detail, printed.denominator);
    }
    items.push(exp);
    items.push(identity(
        "hankel3-regrouping",
        &printed.regrouped(),
        &printed.expansion(),
        "printed regrouping vs printed expansion",
    ));

    let m = match triangle_majorant(class) {
        Ok(m) => m,
        Err(e) => {
            items.push(lookup_failure("triangle-majorant", e));
            return items;
        }
    };
    items.push(identity(
        "triangle-majorant",
        &m.base,
        &parse_poly(VarSet::Xyt, chain.printed_majorant).expect("printed majorant parses"),
        "termwise absolute bound with the grouped c3 factor bounded by 1",
    ));
    items.push(identity(
        "c4-weight",
        &m.weight,
        &xy(chain.printed_weight),
        "coefficient of |c4|",
    ));
    match chain.weight_at_threshold(&m) {
        Ok(w) => items.push(identity(
            "case1-weight-bound",
            &w,
            &xy(chain.printed_weight_bound),
            &format!("|c4| coefficient at y = {}(1 - x)", chain.threshold()),
        )),
        Err(e) => items.push(lookup_failure("case1-weight-bound", e)),
    }
    match chain.derived_case1(&m) {
        Ok(d) => items.push(identity(
            "case1-regrouping",
            &d,
            &chain.printed_case1_poly(),
            "case-1 bound with |c4| <= 1 - x - y^2 vs printed regrouping",
        )),
        Err(e) => items.push(lookup_failure("case1-regrouping", e)),
    }
    match split_case1(&chain)
        .and_then(|(_, rest)| super::chain::case1_value(&rest, &chain.denominator_q()).map(|v| (rest, v)))
    {
        Ok((rest, v)) => {
            let expected = ratio(chain.printed_case1_value.0, chain.printed_case1_value.1);
            items.push(AuditItem::check(
                "case1-remainder",
                AuditKind::ExactIdentity,
                v == expected,
                format!(
                    "after dropping the grouped terms: ({rest})/{} at t = 1 gives {v}",
                    chain.denominator
                ),
            ));
        }
        Err(e) => items.push(lookup_failure("case1-remainder", e)),
    }
    if class == ClassId::R1 {
        let (a, b) = chain.printed_case1_value;
        let (c, d) = chain.printed_final;
        let lhs = int(a) * int(d);
        let rhs = int(b) * int(c);
        items.push(AuditItem::check(
            "case1-reduced-form",
            AuditKind::ExactIdentity,
            lhs == rhs,
            format!("{a}/{b} = {c}/{d}: {a}*{d} = {lhs}, {b}*{c} = {rhs}"),
        ));
    }

    let printed_case2 = get_or_fail!(reg, chain.case2_poly, items, "case2-assembly");
    match chain.derived_case2(&m) {
        Ok(derived) if derived == printed_case2 => items.push(identity(
            "case2-assembly",
            &derived,
            &printed_case2,
            &format!("{} re-derived from the case-2 inequality", chain.case2_poly),
        )),
        Ok(derived) => {
            let delta = &printed_case2 - &derived;
            items.push(AuditItem::new(
                "case2-assembly",
                AuditKind::Discrepancy,
                AuditStatus::Info,
                format!(
                    "printed {} minus the re-derived polynomial = {delta}; re-derived: {derived}; \
                     the printed polynomial dominates on [0,1]^2 (see printed-{}-dominates), so the \
                     printed chain still bounds H3 and the final bound is unaffected",
                    chain.case2_poly, chain.case2_poly
                ),
            ));
            if let Ok(registered) = reg.get(&format!("{}-derived", chain.case2_poly)) {
                items.push(identity(
                    "case2-derived-registry",
                    &registered.poly,
                    &derived,
                    "registered re-derivation vs computed",
                ));
            }
        }
        Err(e) => items.push(lookup_failure("case2-assembly", e)),
    }

    items.extend(region_items(&chain));
    match class {
        ClassId::R => items.extend(r_identities(reg)),
        ClassId::R1 => items.extend(r1_identities(reg)),
    }
    items
}

fn region_items(chain: &ClassChain) -> Vec<AuditItem> {
    let derived = match chain.derived_region_constraint() {
        Ok(d) => d,
        Err(e) => return vec![lookup_failure("case2-region", e)],
    };
    let printed = match standard_region::<f64>(chain.printed_region) {
        Ok(r) => r.constraints[0].clone(),
        Err(e) => return vec![lookup_failure("case2-region", e)],
    };
    if printed.poly == derived {
        vec![identity(
            "case2-region",
            &printed.poly,
            &derived,
            &format!("region of case 2 from y > {}(1 - x)", chain.threshold()),
        )]
    } else {
        vec![AuditItem::new(
            "case2-region",
            AuditKind::Discrepancy,
            AuditStatus::Info,
            format!(
                "printed region {} ({} >= 0); the case assumption y > {}(1 - x) gives {derived} >= 0; \
                 {}both regions lie in E = {{x, y >= 0, x + y <= 1}}, over which case 2 is maximised, \
                 so the final bound is unaffected",
                printed.label,
                printed.poly,
                chain.threshold(),
                degenerate_note(&printed.poly),
            ),
        )]
    }
}

/// For a linear constraint `c >= 0`: if `c <= 0` on all of `E` (checked
/// exactly at its vertices), the region meets `E` only where `c = 0`.
fn degenerate_note(c: &RationalPoly) -> String {
    if c.total_degree() > 1 {
        return String::new();
    }
    let vertices = [(0, 0), (1, 0), (0, 1)];
    let values: Vec<_> = vertices
        .iter()
        .map(|&(x, y)| c.eval(&[int(x), int(y)]).expect("two variables"))
        .collect();
    if values.iter().any(|v| v.is_positive()) {
        return String::new();
    }
    let touching: Vec<String> = vertices
        .iter()
        .zip(&values)
        .filter(|(_, v)| v.is_zero())
        .map(|((x, y), _)| format!("({x}, {y})"))
        .collect();
    let vals: Vec<String> = values.iter().map(ToString::to_string).collect();
    format!(
        "on E the printed constraint is <= 0 (vertex values {}), so the printed region meets E only in {}; ",
        vals.join(", "),
        if touching.is_empty() {
            "the empty set".to_string()
        } else {
            touching.join(", ")
        }
    )
}

fn r_identities(reg: &Registry) -> Vec<AuditItem> {
    let mut items = Vec::new();
    let g1 = get_or_fail!(reg, "g1", items, "g1-minus-h1");
    let h1 = get_or_fail!(reg, "h1", items, "g1-minus-h1");
    let diff = get_or_fail!(reg, "g1-minus-h1", items, "g1-minus-h1");
    items.push(identity("g1-minus-h1", &(&g1 - &h1), &diff, "g1 - h1"));
    items.push(identity(
        "g1-critical-x",
        &g1.derivative(0),
        &xy("24((x - 6)y + 3 - 6x)"),
        "dg1/dx is 24 times the first critical equation",
    ));
    items.push(identity(
        "g1-critical-y",
        &g1.derivative(1),
        &xy("12(-32y^2 + 12 - 12x + x^2)"),
        "dg1/dy is 12 times the second critical equation",
    ));
    let quartic = get_or_fail!(reg, "quartic", items, "quartic-elimination");
    // (x - 6)^2 times the second equation with y = (6x - 3)/(x - 6)
    let eliminated = &(&xy("x^2 - 12x + 12") * &xy("(x - 6)^2")) - &xy("32(6x - 3)^2");
    items.push(identity(
        "quartic-elimination",
        &eliminated,
        &quartic,
        "(x - 6)^2 [12 - 12x + x^2 - 32((6x - 3)/(x - 6))^2] vs printed quartic",
    ));
    for (edge, name) in [
        (Edge::Y0, "g1-y0"),
        (Edge::Y1, "g1-y1"),
        (Edge::X1, "g1-x1"),
        (Edge::X0, "g1-x0"),
    ] {
        let printed = get_or_fail!(reg, name, items, name);
        match edge.restrict(&g1) {
            Ok(r) => items.push(identity(name, &r, &printed, &format!("g1 on {edge}"))),
            Err(e) => items.push(lookup_failure(name, e)),
        }
    }
    items
}

fn r1_identities(reg: &Registry) -> Vec<AuditItem> {
    let mut items = Vec::new();
    let h2 = get_or_fail!(reg, "h2", items, "dh2dx");
    let dh2dx = get_or_fail!(reg, "dh2dx", items, "dh2dx");
    let decomposition = get_or_fail!(reg, "dh2dx-decomposition", items, "dh2dx-decomposition");
    items.push(identity("dh2dx", &h2.derivative(0), &dh2dx, "dh2/dx vs printed"));
    items.push(identity(
        "dh2dx-decomposition",
        &decomposition,
        &dh2dx,
        "sum-of-nonnegatives form vs printed derivative",
    ));
    for (edge, name) in [(Edge::Y0, "g2-x0"), (Edge::Hypotenuse, "g2-hyp")] {
        let printed = get_or_fail!(reg, name, items, name);
        match edge.restrict(&h2) {
            Ok(r) => items.push(identity(name, &r, &printed, &format!("h2 on {edge}"))),
            Err(e) => items.push(lookup_failure(name, e)),
        }
    }
    let printed_0y = get_or_fail!(reg, "g2-0y", items, "g2-0y");
    match Edge::X0.restrict(&h2) {
        Ok(r) if r == printed_0y => items.push(identity("g2-0y", &r, &printed_0y, "h2 on x=0")),
        Ok(r) => {
            let delta = &printed_0y - &r;
            items.push(AuditItem::new(
                "g2-0y",
                AuditKind::Discrepancy,
                AuditStatus::Info,
                format!(
                    "g2 read as the restriction of h2 to the boundary of E; printed g2(0,y) = {printed_0y} \
                     but h2(0,y) = {r} (printed minus restriction = {delta}); maxima on [0,1]: \
                     209952/25 = 8398.08 (printed) and 20736*sqrt(6)/5 = 10158.52... (restriction, certified \
                     in g2-0y-max); both are below 12233, so the final bound is unaffected"
                ),
            ));
        }
        Err(e) => items.push(lookup_failure("g2-0y", e)),
    }
    items
}

fn certify<O: Objective<f64>>(
    obj: &O,
    name: &str,
    label: &str,
    region: &str,
    strictness: Strictness,
    opts: &PipelineOptions,
) -> AuditItem {
    certify_with_margin(obj, name, label, region, strictness, opts).0
}

fn certify_with_margin<O: Objective<f64>>(
    obj: &O,
    name: &str,
    label: &str,
    region: &str,
    strictness: Strictness,
    opts: &PipelineOptions,
) -> (AuditItem, Option<f64>) {
    let region = match standard_region::<f64>(region) {
        Ok(r) => r,
        Err(e) => {
            return (
                AuditItem::new(name, AuditKind::SignCondition, AuditStatus::Fail, e.to_string()),
                None,
            )
        }
    };
    let rel = match strictness {
        Strictness::Positive => "> 0",
        Strictness::NonNegative => ">= 0",
    };
    match check_positive(obj, label, &region, strictness, &opts.bb()) {
        Ok(c) => (
            AuditItem::check(
                name,
                AuditKind::SignCondition,
                c.verified,
                format!(
                    "{label} {rel} on {region}: certified lower bound {:e} ({} boxes){}",
                    c.margin,
                    c.boxes,
                    match c.counterexample {
                        Some((x, y)) => format!(", refuted at ({x}, {y})"),
                        None if !c.verified && c.boxes >= c.budget => format!(" ({BUDGET_NOTE})"),
                        None => String::new(),
                    }
                ),
            ),
            Some(c.margin),
        ),
        Err(e) => (
            AuditItem::new(name, AuditKind::SignCondition, AuditStatus::Fail, e.to_string()),
            None,
        ),
    }
}

/// Certify every sign condition the argument relies on.
pub fn audit_sign_conditions(class: ClassId, reg: &Registry, opts: &PipelineOptions) -> Vec<AuditItem> {
    let chain = ClassChain::for_class(class);
    let mut items = Vec::new();
    for t in chain.terms {
        let parts = t.negation_parts();
        let results: Vec<AuditItem> = parts
            .iter()
            .map(|p| certify(p, "part", &p.to_string(), "triangle-E", Strictness::NonNegative, opts))
            .collect();
        let ok = results.iter().all(AuditItem::passed);
        let detail = results.iter().map(|r| r.detail.as_str()).collect::<Vec<_>>().join("; ");
        items.push(AuditItem::check(
            &format!("case1-term {} <= 0", t.printed),
            AuditKind::SignCondition,
            ok,
            format!("negation as a sum of nonnegative products: {detail}"),
        ));
    }

    match class {
        ClassId::R => {
            for (name, poly, region, strictness) in [
                ("g1-dominates-h1", "g1-minus-h1", "unit-square", Strictness::NonNegative),
                (
                    "quartic-positive",
                    "quartic",
                    "lower-half-interval",
                    Strictness::Positive,
                ),
                (
                    "critical-numerator",
                    "critical-numerator",
                    "upper-half-interval",
                    Strictness::NonNegative,
                ),
                (
                    "critical-denominator",
                    "critical-denominator",
                    "upper-half-interval",
                    Strictness::Positive,
                ),
            ] {
                match reg.get(poly) {
                    Ok(p) => items.push(certify(p, name, &p.name, region, strictness, opts)),
                    Err(e) => items.push(AuditItem::new(
                        name,
                        AuditKind::SignCondition,
                        AuditStatus::Fail,
                        e.to_string(),
                    )),
                }
            }
        }
        ClassId::R1 => {
            let delta = match (
                reg.get("h2"),
                triangle_majorant(class).and_then(|m| chain.derived_case2(&m)),
            ) {
                (Ok(h2), Ok(derived)) => Some(NamedPolynomial::new(
                    "h2 - h2-derived",
                    &h2.poly - &derived,
                    "printed minus re-derived",
                )),
                _ => None,
            };
            match delta {
                Some(d) => items.push(certify(
                    &d,
                    "printed-h2-dominates",
                    &d.name,
                    "unit-square",
                    Strictness::NonNegative,
                    opts,
                )),
                None => items.push(AuditItem::new(
                    "printed-h2-dominates",
                    AuditKind::SignCondition,
                    AuditStatus::Fail,
                    "h2 or its re-derivation unavailable".into(),
                )),
            }
            match reg.get("dh2dx") {
                Ok(p) => {
                    let (mut item, margin) =
                        certify_with_margin(p, "dh2dx-positive", &p.name, "unit-square", Strictness::Positive, opts);
                    if margin.is_none_or(|m| m < 648.0) {
                        item.status = AuditStatus::Fail;
                    }
                    item.detail = format!("{}; required >= 648 = 3*216", item.detail);
                    items.push(item);
                }
                Err(e) => items.push(AuditItem::new(
                    "dh2dx-positive",
                    AuditKind::SignCondition,
                    AuditStatus::Fail,
                    e.to_string(),
                )),
            }
        }
    }
    items
}

fn opt_item(name: &str, cert: &MaxCertificate<f64>, check: Check, note: &str) -> AuditItem {
    let (ok, what) = match check {
        Check::Equals(label, v, tol) => (
            cert.complete && cert.upper >= v - tol && cert.upper - v <= tol,
            format!("printed maximum {label} = {v}"),
        ),
        Check::AtMost(label, v) => (cert.upper <= v, format!("must not exceed {label} = {v}")),
    };
    let witness = cert
        .witness
        .map(|(x, y)| format!(" at ({x:.6}, {y:.6})"))
        .unwrap_or_default();
    let mut detail = format!(
        "max of {} over {}: certified upper {} , witness value {}{witness}, {} boxes{}; {what}",
        cert.polynomial,
        cert.region,
        cert.upper,
        cert.lower,
        cert.boxes,
        if cert.complete {
            String::new()
        } else {
            format!(" ({BUDGET_NOTE})")
        },
    );
    if !note.is_empty() {
        detail.push_str("; ");
        detail.push_str(note);
    }
    AuditItem::check(name, AuditKind::Optimization, ok, detail)
}

enum Check {
    Equals(&'static str, f64, f64),
    AtMost(&'static str, f64),
}

fn maximize_named(reg: &Registry, poly: &str, region: &str, opts: &PipelineOptions) -> Result<MaxCertificate<f64>> {
    let p = reg.get(poly)?;
    let r = standard_region::<f64>(region)?;
    bb_maximize_with(p, &r, &opts.bb())
}

fn optimization_items(class: ClassId, reg: &Registry, opts: &PipelineOptions) -> Vec<AuditItem> {
    let tol = opts.tol;
    let mut items = Vec::new();
    let mut push = |name: &str, res: Result<MaxCertificate<f64>>, check: Check, note: &str| match res {
        Ok(c) => items.push(opt_item(name, &c, check, note)),
        Err(e) => items.push(AuditItem::new(
            name,
            AuditKind::Optimization,
            AuditStatus::Fail,
            e.to_string(),
        )),
    };
    let edge = |poly: &str, e: Edge| -> Result<MaxCertificate<f64>> {
        Ok(edge_maximize(reg.get(poly)?, e, tol, opts.budget)?.certificate)
    };
    let top = 7.0 + 24.0 * 6f64.sqrt();
    match class {
        ClassId::R => {
            push(
                "g1-max",
                maximize_named(reg, "g1", "unit-square", opts),
                Check::Equals("7+24*sqrt(6)", top, tol),
                "",
            );
            push("g1-y0-max", edge("g1", Edge::Y0), Check::Equals("25", 25.0, tol), "");
            push("g1-y1-max", edge("g1", Edge::Y1), Check::Equals("23", 23.0, tol), "");
            push(
                "g1-x1-max",
                edge("g1", Edge::X1),
                Check::Equals("7+sqrt(2)", 7.0 + 2f64.sqrt(), tol),
                "",
            );
            push(
                "g1-x0-max",
                edge("g1", Edge::X0),
                Check::Equals("7+24*sqrt(6)", top, tol),
                "",
            );
            push(
                "h1-max-region",
                maximize_named(reg, "h1", "region-D-r", opts),
                Check::AtMost("7+24*sqrt(6)", top + tol),
                "h1 over the case-2 region itself",
            );
        }
        ClassId::R1 => {
            push(
                "h2-max",
                maximize_named(reg, "h2", "triangle-E", opts),
                Check::Equals("12233", 12233.0, tol),
                "",
            );
            push(
                "g2-x0-max",
                edge("h2", Edge::Y0),
                Check::Equals("12233", 12233.0, tol),
                "the intermediate step 1217x^3 + 11016x + 2592x(1-x) <= 1217x^3 + 11016x does not hold on (0,1) \
                 since 2592x(1-x) >= 0; the bound 12233 is certified directly",
            );
            push(
                "g2-hyp-max",
                edge("h2", Edge::Hypotenuse),
                Check::Equals("12233", 12233.0, tol),
                "",
            );
            push(
                "g2-0y-max",
                edge("h2", Edge::X0),
                Check::Equals("20736*sqrt(6)/5", 20736.0 * 6f64.sqrt() / 5.0, tol),
                "below 12233",
            );
            push(
                "g2-0y-printed-max",
                edge("g2-0y", Edge::X0),
                Check::Equals("209952/25", 209952.0 / 25.0, tol),
                "",
            );
            for region in ["region-D-r1", "region-D-r1-printed"] {
                push(
                    &format!("h2-max-{region}"),
                    maximize_named(reg, "h2", region, opts),
                    Check::AtMost("12233", 12233.0 + tol),
                    "region contained in E",
                );
            }
            push(
                "h2-derived-max",
                maximize_named(reg, "h2-derived", "triangle-E", opts),
                Check::AtMost("12233", 12233.0 + tol),
                "re-derived polynomial over E",
            );
        }
    }
    items
}

/// Identities, sign conditions and optimisation checks together.
pub fn audit(class: ClassId, reg: &Registry, opts: &PipelineOptions) -> Vec<AuditItem> {
    let mut items = audit_exact_identities_with(class, reg);
    items.extend(audit_sign_conditions(class, reg, opts));
    items.extend(optimization_items(class, reg, opts));
    items
}
