//! Executes the suites selected by a scenario.

use std::collections::BTreeMap;

use amen_core::foelner::{
    aicm_defect_at, foelner_deficit, indicator_net, normalization_defect_at, verify_aicm, DeficitReport, DefectRow,
    NetFunction,
};
use amen_core::inner::{
    inner_fn_defect_at, kernel_check, l2_defect_at, l2_norm_defect_at, l2_sum_at, mean_from_density, smoothing_bound,
    sqrt_net, verify_inner, TOLERANCE,
};
use amen_core::rational::{format_float, format_rational, to_f64};
use amen_core::semidirect::{
    marginal_defect_bound, product_net, three_term_bound, twist_defect, twist_from_full_defect, two_term_bound,
};
use amen_core::{Element, Point, Result, Window};

use crate::report::{Check, Provenance, Report, Row, StageRow, SuiteReport, FORMAT};
use crate::scenario::{Built, Scenario, Suite};

pub fn run(scenario: &Scenario) -> Result<Report> {
    let built = scenario.build()?;
    let mut suites = Vec::new();
    for suite in &scenario.suites {
        for (i, window) in built.windows.iter().enumerate() {
            match suite {
                Suite::Aicm => suites.push(aicm(&built, i, window)?),
                Suite::Foelner => suites.push(foelner(&built, i, window)?),
                Suite::Theorem23 => suites.extend(theorem23(&built, i)?),
                Suite::Inner => suites.push(inner(&built, i, window)?),
                Suite::Sqrt => suites.push(sqrt(&built, i, window)?),
                Suite::Kernel => suites.push(kernel(&built, i, window)?),
            }
        }
    }
    let float = scenario.suites.iter().any(|s| matches!(s, Suite::Sqrt | Suite::Kernel));
    let verdict = if suites.iter().all(SuiteReport::passed) { "pass" } else { "fail" };
    Ok(Report {
        format: FORMAT.into(),
        provenance: Provenance {
            artifact: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            arithmetic: if float { "exact+float" } else { "exact" }.into(),
        },
        scenario: scenario.echo(),
        suites,
        verdict: verdict.into(),
    })
}

fn aicm(b: &Built, i: usize, w: &Window) -> Result<SuiteReport> {
    let report = verify_aicm(&b.net, w, &b.epsilon, &b.action)?;
    Ok(SuiteReport::from_deficits("aicm", i, &report, "inv"))
}

fn foelner(b: &Built, i: usize, w: &Window) -> Result<SuiteReport> {
    let mut stage_rows = Vec::new();
    let mut bridge = Check::new("indicator-defect-below-deficit");
    let mut normalized = Check::new("indicator-normalized");
    for (n, pair) in b.pairs.iter().enumerate() {
        let stage = n + 1;
        let f = indicator_net(pair, &b.action, stage)?;
        let mut rows = Vec::new();
        for s in w.group_part() {
            let deficit = foelner_deficit(pair, s, &b.action)?;
            for x in w.space_part() {
                let d = aicm_defect_at(&f, &b.action, x, s)?;
                bridge.record(d <= deficit, || format!("stage {stage}, ({x}, {s}): {}", format_rational(&d)));
            }
            rows.push(DefectRow { stage, point: Point::Unit, element: Some(s.clone()), norm: None, inv: deficit });
        }
        for x in w.space_part() {
            normalized.record(normalization_defect_at(&f, &b.action, x) == amen_core::rational::zero(), || format!("stage {stage}, {x}"));
        }
        stage_rows.push((stage, rows));
    }
    let report = DeficitReport::assemble(stage_rows, &b.epsilon)?;
    let mut out = SuiteReport::from_deficits("foelner", i, &report, "deficit");
    out.checks = vec![bridge, normalized];
    out.apply_checks();
    Ok(out)
}

fn theorem23(b: &Built, i: usize) -> Result<Vec<SuiteReport>> {
    let p = b.product.as_ref().expect("built for theorem23");
    let pw = &p.pair_windows[i];
    let xs = b.windows[i].space_part();
    let split: Vec<(&Element, &Element)> =
        pw.group_part().iter().map(|r| r.as_pair().expect("semidirect elements are pairs")).collect();
    let ns: Vec<Element> = dedup(split.iter().map(|(n, _)| (*n).clone()));
    let hs: Vec<Element> = dedup(split.iter().map(|(_, h)| (*h).clone()));

    let normal_window = Window::new(xs.to_vec(), ns)?;
    let acting_window = Window::new(xs.to_vec(), hs.clone())?;
    let normal = verify_aicm(&p.f_net, &normal_window, &b.epsilon, &p.on_normal)?;
    let acting = verify_aicm(&p.g_net, &acting_window, &b.epsilon, &b.action)?;
    let twist = twist_defect(&p.f_net, &hs, xs, &b.group, &b.epsilon)?;

    let diagonal: Vec<NetFunction> = p
        .f_net
        .iter()
        .zip(&p.g_net)
        .map(|(f, g)| product_net(f, g, &b.group).map(|e| e.to_net()))
        .collect::<Result<_>>()?;
    let full = verify_aicm(&diagonal, pw, &b.epsilon, &p.on_pairs)?;

    let mut three = Check::new("three-term");
    let mut two = Check::new("two-term");
    let mut marginal = Check::new("marginal-below-full");
    let mut twist_back = Check::new("marginal-twist-below-full");
    for (f, g) in p.f_net.iter().zip(&p.g_net) {
        let e = product_net(f, g, &b.group)?;
        let stage = f.stage();
        for x in xs {
            for y in xs {
                for (r, (s, t)) in pw.group_part().iter().zip(&split) {
                    let (lhs, rhs) = three_term_bound(&e, f, g, r, x, y, &b.action)?;
                    three.record(lhs <= rhs, || witness(stage, x, y, r, &lhs, &rhs));
                    let (lhs, rhs) = two_term_bound(&e, t, x, y, &b.action)?;
                    two.record(lhs <= rhs, || witness(stage, x, y, r, &lhs, &rhs));
                    if *y == p.y_slice {
                        let (lhs, rhs) = marginal_defect_bound(&e, s, x, y, &b.action)?;
                        marginal.record(lhs <= rhs, || witness(stage, x, y, r, &lhs, &rhs));
                        let (lhs, rhs) = twist_from_full_defect(&e, t, x, y)?;
                        twist_back.record(lhs <= rhs, || witness(stage, x, y, r, &lhs, &rhs));
                    }
                }
            }
        }
    }
    let mut product = SuiteReport::from_deficits("theorem23.product", i, &full, "inv");
    product.notes.push(format!("diagonal stages of the product grid; marginal slice y = {}", p.y_slice));
    product.checks = vec![three, two, marginal, twist_back];
    product.apply_checks();
    Ok(vec![
        SuiteReport::from_deficits("theorem23.normal", i, &normal, "inv"),
        SuiteReport::from_deficits("theorem23.twist", i, &twist, "twist"),
        SuiteReport::from_deficits("theorem23.acting", i, &acting, "inv"),
        product,
    ])
}

fn witness(stage: usize, x: &Point, y: &Point, r: &Element, lhs: &amen_core::Rational, rhs: &amen_core::Rational) -> String {
    format!("stage {stage}, ({x};{y}), {r}: {} > {}", format_rational(lhs), format_rational(rhs))
}

fn dedup(items: impl Iterator<Item = Element>) -> Vec<Element> {
    let set: std::collections::BTreeSet<Element> = items.collect();
    set.into_iter().collect()
}

fn inner(b: &Built, i: usize, w: &Window) -> Result<SuiteReport> {
    let report = verify_inner(&b.net, w, &b.epsilon, &b.action)?;
    let mut out = SuiteReport::from_deficits("inner", i, &report, "inv");
    if let Some(bump) = &b.bump {
        let mut corrected = Check::new("smoothing-with-bump-commutator");
        let (mut literal, mut evaluated) = (0usize, 0usize);
        for f in &b.net {
            let m = mean_from_density(f, &b.group)?;
            for (x, s) in w.pairs() {
                let (lhs, mean, bound) = smoothing_bound(&m, bump, &b.action, x, s)?;
                corrected.record(lhs <= bound, || format!("stage {}, ({x}, {s})", f.stage()));
                evaluated += 1;
                if lhs > mean {
                    literal += 1;
                }
            }
        }
        out.notes.push(format!("smoothed defect exceeds the mean defect alone at {literal} of {evaluated} points"));
        out.checks.push(corrected);
        out.apply_checks();
    }
    Ok(out)
}

fn float_trend(values: &[f64]) -> &'static str {
    if values.windows(2).all(|w| w[1] < w[0]) {
        "decreasing"
    } else if values.windows(2).all(|w| w[1] <= w[0]) {
        "nonincreasing"
    } else {
        "not-monotone"
    }
}

fn float_stage(stage: usize, values: BTreeMap<String, String>, eps: f64, below: bool) -> StageRow {
    StageRow { stage: stage.to_string(), values, epsilon: format_float(eps), below_epsilon: below }
}

fn epsilon_at(b: &Built, n: usize) -> f64 {
    to_f64(&b.epsilon[n.min(b.epsilon.len() - 1)])
}

fn sqrt(b: &Built, i: usize, w: &Window) -> Result<SuiteReport> {
    let mut rows = Vec::new();
    let mut stages = Vec::new();
    let mut dual_lower = Check::new("l2-below-l1");
    let mut dual_upper = Check::new("l1-below-geometric-mean");
    let mut maxima = Vec::new();
    let mut last_below = false;
    for (n, f) in b.net.iter().enumerate() {
        let xi = sqrt_net(f);
        let (mut max_norm, mut max_inv) = (0.0f64, 0.0f64);
        for x in w.space_part() {
            let norm = l2_norm_defect_at(&xi, &b.group, x);
            max_norm = max_norm.max(norm);
            for s in w.group_part() {
                let l2 = l2_defect_at(&xi, &b.action, x, s)?;
                let l1 = to_f64(&inner_fn_defect_at(f, &b.action, x, s)?);
                let sum = l2_sum_at(&xi, &b.action, x, s)?;
                dual_lower.record(l2 <= l1 + TOLERANCE, || format!("stage {}, ({x}, {s})", f.stage()));
                dual_upper.record(l1 <= sum.sqrt() * l2.sqrt() + TOLERANCE, || format!("stage {}, ({x}, {s})", f.stage()));
                max_inv = max_inv.max(l2);
                let values = BTreeMap::from([
                    ("norm".to_string(), format_float(norm)),
                    ("l2".to_string(), format_float(l2)),
                    ("l1".to_string(), format_float(l1)),
                ]);
                rows.push(Row { stage: f.stage().to_string(), point: x.to_string(), element: Some(s.to_string()), values });
            }
        }
        let eps = epsilon_at(b, n);
        last_below = max_norm < eps && max_inv < eps;
        let values = BTreeMap::from([("norm".to_string(), format_float(max_norm)), ("l2".to_string(), format_float(max_inv))]);
        stages.push(float_stage(f.stage(), values, eps, last_below));
        maxima.push(max_inv);
    }
    let final_eps = to_f64(b.epsilon.last().expect("checked schedule"));
    let certified = last_below && stages.last().is_some_and(|_| maxima.last().is_some_and(|m| *m < final_eps));
    let mut out = SuiteReport {
        suite: "sqrt".into(),
        window: i,
        rows,
        stages,
        trend: Some(float_trend(&maxima).into()),
        verdict: if certified { "epsilon-certified" } else { "not-certified" }.into(),
        checks: vec![dual_lower, dual_upper],
        notes: Vec::new(),
        sample: Vec::new(),
    };
    out.apply_checks();
    Ok(out)
}

fn kernel(b: &Built, i: usize, w: &Window) -> Result<SuiteReport> {
    let sample: Vec<(Point, Element)> = w.pairs().map(|(x, t)| (x.clone(), t.clone())).collect();
    let mut rows = Vec::new();
    let mut stages = Vec::new();
    let mut diagonals = Vec::new();
    let mut last = None;
    for (n, f) in b.net.iter().enumerate() {
        let xi = sqrt_net(f);
        let eps = epsilon_at(b, n);
        let v = kernel_check(&xi, w, eps, &sample);
        let values = BTreeMap::from([
            ("diagonal".to_string(), format_float(v.diagonal_defect)),
            ("min_eigenvalue".to_string(), format_float(v.min_eigenvalue)),
            ("psd".to_string(), v.psd.to_string()),
            ("symmetric".to_string(), v.symmetric.to_string()),
        ]);
        rows.push(Row { stage: f.stage().to_string(), point: "*".into(), element: None, values: values.clone() });
        stages.push(float_stage(f.stage(), values, eps, v.passed()));
        diagonals.push(v.diagonal_defect);
        last = Some(v);
    }
    let passed = last.as_ref().is_some_and(|v| v.passed());
    let mut notes = vec!["all kernels have finite support".to_string()];
    if let Some(v) = &last {
        if !v.diagonal_ok {
            notes.push("the diagonal |xi^2 - 1| stays above epsilon at the final stage".into());
        }
    }
    Ok(SuiteReport {
        suite: "kernel".into(),
        window: i,
        rows,
        stages,
        trend: Some(float_trend(&diagonals).into()),
        verdict: if passed { "pass" } else { "not-certified" }.into(),
        checks: Vec::new(),
        notes,
        sample: sample.iter().map(|(x, t)| (x.to_string(), t.to_string())).collect(),
    })
}
