use std::fs;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde_json::{json, Value};
use weightlab::conjugate::{default_x_grid, young_conjugate_on};
use weightlab::counterexample::{
    cross_checks, nonconvexity_scan, CertificateBundle, CrossChecks, LadderEntry, SlowVariationReport,
};
use weightlab::growth::{default_ks, PStatus};
use weightlab::lpspace::{ExperimentGrids, SpaceType};
use weightlab::relations::default_ell_grid;
use weightlab::*;

use crate::args::{Command, GridArgs};
use crate::input::{build_matrix, load_delta, load_matrix, load_weight};
use crate::report::{num, opt, Curve, Outcome, Table, VerdictLine};

const DEFAULT_RELATION_HORIZON: f64 = 1e8;
const DEFAULT_RELATION_POINTS: usize = 1601;

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Holds => "holds",
        Status::Fails => "fails",
        Status::Inconclusive => "inconclusive",
    }
}

fn grid_label(g: &GridSpec) -> Value {
    json!({ "label": g.label(), "spec": g })
}

/// Caller's horizon and point count, or the weight's own default grid.
fn grid_for(w: &WeightFunction, g: &GridArgs) -> Result<GridSpec> {
    let default = w.default_grid();
    let n = g.points.unwrap_or(default.n_points);
    if n < 16 {
        bail!("--points must be at least 16");
    }
    Ok(match g.horizon {
        None => GridSpec { n_points: n, ..default },
        Some(h) if w.as_profile().is_some() || w.equivalent_family().is_none() => {
            GridSpec::log_domain(default.u_min().min(h.ln() - 1.0), h.ln(), n)?
        }
        Some(h) => GridSpec::logarithmic(1e-3, h, n)?,
    })
}

fn relation_grid(g: &GridArgs) -> Result<GridSpec> {
    Ok(GridSpec::logarithmic(
        1e-2,
        g.horizon.unwrap_or(DEFAULT_RELATION_HORIZON),
        g.points.unwrap_or(DEFAULT_RELATION_POINTS),
    )?)
}

fn phi_curve(w: &WeightFunction, grid: &GridSpec) -> Result<Curve> {
    let s = w.sample(grid)?;
    Ok(Curve::new("phi", "u", "phi", s.us.into_iter().zip(s.phis).collect()))
}

fn condition_verdicts(w: &WeightFunction, ids: &[ConditionId], grid: &GridSpec) -> Result<Vec<(String, Verdict)>> {
    ids.par_iter()
        .map(|&c| {
            let v = match check_condition(w, c, grid) {
                Ok(v) => v,
                Err(Error::HorizonTooSmall(m)) => Verdict::inconclusive(f64::NAN).with_note(m),
                Err(e) => return Err(e.into()),
            };
            Ok((c.name().to_string(), v))
        })
        .collect()
}

fn verdict_table(items: &[(String, Verdict)]) -> Table {
    let mut t = Table::new(&["name", "status", "margin", "note"]);
    for (n, v) in items {
        t.push(vec![n.clone(), status_name(v.status).into(), opt(v.margin), v.note.clone()]);
    }
    t
}

fn lines(items: &[(String, Verdict)]) -> Vec<VerdictLine> {
    items.iter().map(|(n, v)| VerdictLine::from_verdict(n.clone(), v)).collect()
}

pub fn run(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Analyze { weight, conditions, grid } => analyze(weight, conditions, grid),
        Command::Classify { weight, grid } => classify_cmd(weight, grid),
        Command::Conjugate { weight, xmax, xpoints, biconjugate, grid } => {
            conjugate(weight, *xmax, *xpoints, *biconjugate, grid)
        }
        Command::Matrix { weight, ell, jmax } => matrix(weight, ell, *jmax),
        Command::Index { weight, gammas, ks, grid } => index(weight, gammas, ks, grid),
        Command::Kappa { weight, y, y_max, horizon } => kappa_cmd(weight, y, *y_max, *horizon),
        Command::Compare { sigma, tau, rel, bridge, grid } => compare_cmd(sigma, tau, rel, *bridge, grid),
        Command::MatrixCompare { s_type, s_weight, t_type, t_weight, rel, ells, grid } => {
            let (sw, ss) = load_weight(s_weight)?;
            let (tw, ts) = load_weight(t_weight)?;
            let s = build_matrix(*s_type, sw)?;
            let t = build_matrix(*t_type, tw)?;
            let echo = json!({
                "s": { "type": format!("{s_type:?}").to_lowercase(), "weight": ss },
                "t": { "type": format!("{t_type:?}").to_lowercase(), "weight": ts },
            });
            matrix_compare(s, t, echo, rel, ells, grid)
        }
        Command::LpExperiment { s, t, p, space, ells, t_max, t_points, grid } => {
            lp_experiment(s, t, p, space, ells, *t_max, *t_points, grid)
        }
        Command::Counterexample {
            j_max,
            t1,
            delta,
            certify,
            a_max,
            gammas,
            alpha,
            gap_blocks,
            export_profile,
        } => {
            let cfg = CertifyConfig {
                t1: *t1,
                j_max: *j_max,
                a_max: *a_max,
                gammas: gammas.clone(),
                gap_blocks: *gap_blocks,
                alpha: *alpha,
            };
            let out = counterexample(delta, certify, &cfg)?;
            if let Some(path) = export_profile {
                let p = construct(&load_delta(delta, cfg.j_max + 1)?, cfg.t1, cfg.j_max)?;
                let text = serde_json::to_string_pretty(&p.weight()?.to_spec())? + "\n";
                fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(out)
        }
        Command::Report { weight, xmax, grid } => full_report(weight, *xmax, grid),
    }
}

fn analyze(weight: &str, conditions: &[String], g: &GridArgs) -> Result<Outcome> {
    let (w, spec) = load_weight(weight)?;
    let grid = grid_for(&w, g)?;
    let ids: Vec<ConditionId> = if conditions.is_empty() {
        ConditionId::ALL.to_vec()
    } else {
        conditions.iter().map(|c| c.parse()).collect::<weightlab::Result<_>>()?
    };
    let verdicts = condition_verdicts(&w, &ids, &grid)?;
    Ok(Outcome {
        inputs: json!({ "weight": spec, "label": w.label(), "grid": grid_label(&grid) }),
        verdicts: lines(&verdicts),
        result: json!({ "conditions": verdicts.iter().cloned().collect::<std::collections::BTreeMap<_, _>>() }),
        table: verdict_table(&verdicts),
        curves: vec![phi_curve(&w, &grid)?],
    })
}

fn classify_cmd(weight: &str, g: &GridArgs) -> Result<Outcome> {
    let (w, spec) = load_weight(weight)?;
    let grid = grid_for(&w, g)?;
    let report = classify(&w, &grid)?;
    let chain = check_implication_chain(&w, &grid)?;
    let classes: Vec<(String, Verdict)> = [
        ("weight_function", &report.weight_function),
        ("bmt", &report.bmt),
        ("bb", &report.bb),
        ("bb_equivalent", &report.bb_equivalent),
        ("matrix_admissible", &report.matrix_admissible),
    ]
    .into_iter()
    .map(|(n, v)| (n.to_string(), v.clone()))
    .collect();
    let mut table = verdict_table(&classes);
    for (n, v) in &report.conditions {
        table.push(vec![n.clone(), status_name(v.status).into(), opt(v.margin), v.note.clone()]);
    }
    Ok(Outcome {
        inputs: json!({ "weight": spec, "label": w.label(), "grid": grid_label(&grid) }),
        verdicts: lines(&classes),
        result: json!({ "classes": report, "implication_chain": chain }),
        table,
        curves: vec![phi_curve(&w, &grid)?],
    })
}

fn conjugate(weight: &str, xmax: f64, xpoints: usize, biconjugate: bool, g: &GridArgs) -> Result<Outcome> {
    let (w, spec) = load_weight(weight)?;
    if !(xmax > 0.0) || xpoints < 2 {
        bail!("--xmax must be positive and --xpoints at least 2");
    }
    let conj = young_conjugate_on(&w, &default_x_grid(xmax, xpoints))?;
    let mut table = Table::new(&["x", "phi_star", "argmax"]);
    for s in &conj.samples {
        table.push(vec![num(s.x), num(s.value), num(s.argmax)]);
    }
    let mut curves = vec![Curve::new("phi_star", "x", "phi_star", conj.samples.iter().map(|s| (s.x, s.value)).collect())];
    let mut verdicts = Vec::new();
    let mut inputs = json!({ "weight": spec, "label": w.label(), "xmax": xmax, "xpoints": xpoints });
    let mut result = json!({ "conjugate": conj });
    if biconjugate {
        let grid = grid_for(&w, g)?;
        let gap = double_conjugate(&w, &grid)?;
        verdicts.push(VerdictLine::flag(
            "phi_convex",
            gap.convex,
            format!("max gap {} at u = {}", num(gap.max_gap), num(gap.argmax_u)),
        ));
        curves.push(Curve::new("phi", "u", "phi", gap.us.iter().copied().zip(gap.phi.iter().copied()).collect()));
        curves.push(Curve::new(
            "biconjugate",
            "u",
            "biconjugate",
            gap.us.iter().copied().zip(gap.biconjugate.iter().copied()).collect(),
        ));
        inputs["grid"] = grid_label(&grid);
        result["biconjugate"] = json!({
            "max_gap": gap.max_gap,
            "argmax_u": gap.argmax_u,
            "min_slack": gap.min_slack,
            "convex": gap.convex,
            "exact": gap.exact,
        });
    }
    Ok(Outcome { inputs, verdicts, result, table, curves })
}

fn matrix(weight: &str, ells: &[f64], jmax: usize) -> Result<Outcome> {
    let (w, spec) = load_weight(weight)?;
    let rows: Vec<(f64, Vec<f64>)> = ells
        .par_iter()
        .map(|&l| Ok((l, associated_weight_matrix(&w, l, jmax)?)))
        .collect::<Result<_>>()?;
    let mut table = Table::new(&["ell", "j", "log_w"]);
    let mut curves = Vec::new();
    for (l, logs) in &rows {
        for (j, v) in logs.iter().enumerate() {
            table.push(vec![num(*l), j.to_string(), num(*v)]);
        }
        curves.push(Curve::new(
            format!("log_w_ell_{}", num(*l)),
            "j",
            "log_w",
            logs.iter().enumerate().map(|(j, v)| (j as f64, *v)).collect(),
        ));
    }
    let result: Vec<Value> = rows.iter().map(|(l, logs)| json!({ "ell": l, "log_w": logs })).collect();
    Ok(Outcome {
        inputs: json!({ "weight": spec, "label": w.label(), "ell": ells, "jmax": jmax }),
        verdicts: Vec::new(),
        result: json!({ "matrix": result }),
        table,
        curves,
    })
}

fn index(weight: &str, gammas: &[f64], ks: &[f64], g: &GridArgs) -> Result<Outcome> {
    let (w, spec) = load_weight(weight)?;
    let grid = grid_for(&w, g)?;
    let ks = if ks.is_empty() { default_ks() } else { ks.to_vec() };
    let est = growth_index(&w, gammas, &ks, &grid)?;
    let mut table = Table::new(&["gamma", "k", "sup_prev", "sup_top", "status"]);
    for r in &est.rows {
        let st = match r.status {
            PStatus::Certified => "certified",
            PStatus::Refuted => "refuted",
            PStatus::Open => "open",
        };
        table.push(vec![num(r.gamma), num(r.k), num(r.sup_prev), num(r.sup_top), st.into()]);
    }
    let verdicts = gammas
        .iter()
        .map(|&gm| {
            let rows: Vec<_> = est.rows.iter().filter(|r| r.gamma == gm).collect();
            let status = if rows.iter().any(|r| r.status == PStatus::Certified) {
                Status::Holds
            } else if !rows.is_empty() && rows.iter().all(|r| r.status == PStatus::Refuted) {
                Status::Fails
            } else {
                Status::Inconclusive
            };
            VerdictLine::status(format!("p_gamma={}", num(gm)), status, "")
        })
        .collect();
    let scan = Curve::new(
        "gamma_scan",
        "gamma",
        "sup_top_min_over_k",
        gammas
            .iter()
            .map(|&gm| {
                let best = est.rows.iter().filter(|r| r.gamma == gm).map(|r| r.sup_top).fold(f64::INFINITY, f64::min);
                (gm, best)
            })
            .collect(),
    );
    Ok(Outcome {
        inputs: json!({ "weight": spec, "label": w.label(), "gammas": gammas, "ks": ks, "grid": grid_label(&grid) }),
        verdicts,
        result: json!({ "index": est }),
        table,
        curves: vec![scan],
    })
}

fn kappa_cmd(weight: &str, ys: &[f64], y_max: f64, horizon: f64) -> Result<Outcome> {
    let (w, spec) = load_weight(weight)?;
    let values: Vec<(f64, Kappa)> = ys.par_iter().map(|&y| Ok((y, kappa(&w, y, horizon)?))).collect::<Result<_>>()?;
    let y_grid = GridSpec::logarithmic(1.0, y_max, 601)?;
    let eq = kappa_equivalence_check(&w, &y_grid, horizon)?;
    let mut table = Table::new(&["y", "kappa", "tail_hi", "error"]);
    let mut points = Vec::new();
    for (y, k) in &values {
        match k {
            Kappa::Finite { value, tail_hi, error, .. } => {
                table.push(vec![num(*y), num(*value), num(*tail_hi), num(*error)]);
                points.push((*y, *value));
            }
            Kappa::Divergent { .. } => table.push(vec![num(*y), "divergent".into(), String::new(), String::new()]),
        }
    }
    let result: Vec<Value> = values.iter().map(|(y, k)| json!({ "y": y, "kappa": k })).collect();
    Ok(Outcome {
        inputs: json!({ "weight": spec, "label": w.label(), "y": ys, "y_grid": grid_label(&y_grid), "horizon": horizon }),
        verdicts: vec![VerdictLine::from_verdict("kappa_equivalent", &eq)],
        result: json!({ "kappa": result, "equivalence": eq }),
        table,
        curves: vec![Curve::new("kappa", "y", "kappa", points)],
    })
}

fn relation_table(items: &[RelationVerdict]) -> Table {
    let mut t = Table::new(&["relation", "status", "margin", "note"]);
    for r in items {
        t.push(vec![r.relation.clone(), status_name(r.verdict.status).into(), opt(r.verdict.margin), r.verdict.note.clone()]);
    }
    t
}

fn compare_cmd(sigma: &str, tau: &str, rels: &[String], bridge: bool, g: &GridArgs) -> Result<Outcome> {
    let (s, ss) = load_weight(sigma)?;
    let (t, ts) = load_weight(tau)?;
    let grid = relation_grid(g)?;
    let rels: Vec<Relation> = rels.iter().map(|r| r.parse()).collect::<weightlab::Result<_>>()?;
    let out: Vec<RelationVerdict> = rels.par_iter().map(|&r| Ok(compare(&s, &t, r, &grid)?)).collect::<Result<_>>()?;
    let mut verdicts: Vec<VerdictLine> = out.iter().map(|r| VerdictLine::from_verdict(r.relation.clone(), &r.verdict)).collect();
    let mut result = json!({ "relations": out });
    if bridge {
        let b = bridge_check(&s, &t, &grid)?;
        verdicts.push(VerdictLine::flag("bridge_consistent", b.consistent, ""));
        result["bridge"] = serde_json::to_value(&b)?;
    }
    Ok(Outcome {
        inputs: json!({ "sigma": ss, "tau": ts, "grid": grid_label(&grid) }),
        verdicts,
        result,
        table: relation_table(&out),
        curves: Vec::new(),
    })
}

fn matrix_compare(
    s: WeightMatrix,
    t: WeightMatrix,
    mut inputs: Value,
    rels: &[String],
    ells: &[f64],
    g: &GridArgs,
) -> Result<Outcome> {
    let grid = relation_grid(g)?;
    let ells = if ells.is_empty() { default_ell_grid() } else { ells.to_vec() };
    let rels: Vec<MatrixRelation> = rels.iter().map(|r| r.parse()).collect::<weightlab::Result<_>>()?;
    let out: Vec<RelationVerdict> = rels
        .par_iter()
        .map(|&r| Ok(matrix_relation(&s, &t, r, &ells, &grid)?))
        .collect::<Result<_>>()?;
    inputs["ells"] = json!(ells);
    inputs["grid"] = grid_label(&grid);
    Ok(Outcome {
        inputs,
        verdicts: out.iter().map(|r| VerdictLine::from_verdict(r.relation.clone(), &r.verdict)).collect(),
        result: json!({ "relations": out }),
        table: relation_table(&out),
        curves: Vec::new(),
    })
}

#[allow(clippy::too_many_arguments)]
fn lp_experiment(
    s: &str,
    t: &str,
    p: &str,
    space: &str,
    ells: &[f64],
    t_max: f64,
    t_points: usize,
    g: &GridArgs,
) -> Result<Outcome> {
    let (sm, se) = load_matrix(s)?;
    let (tm, te) = load_matrix(t)?;
    let p: Exponent = p.parse()?;
    let space: SpaceType = space.parse()?;
    let ells = if ells.is_empty() { default_ell_grid() } else { ells.to_vec() };
    let grids = ExperimentGrids {
        relation: GridSpec::logarithmic(1e-3, g.horizon.unwrap_or(1e8), g.points.unwrap_or(2201))?,
        function: GridSpec::linear(0.0, t_max, t_points)?,
    };
    let r = inclusion_experiment(&sm, &tm, p, space, &ells, &grids)?;
    let mut table = Table::new(&["function", "index_pair", "lhs", "rhs", "slack"]);
    for row in &r.forward {
        let pair = format!("({};{})", num(row.index_pair.0), num(row.index_pair.1));
        table.push(vec![row.function.clone(), pair, num(row.lhs), num(row.rhs), num(row.slack)]);
    }
    let mut verdicts = vec![VerdictLine::from_verdict(r.relation.relation.clone(), &r.relation.verdict)];
    if let Some(ok) = r.forward_ok {
        verdicts.push(VerdictLine::flag("forward_inequality", ok, format!("{} battery rows", r.forward.len())));
    }
    if let Some(ok) = r.converse_ok {
        verdicts.push(VerdictLine::flag("converse_divergence", ok, format!("{} norms", r.converse.len())));
    }
    let curves = if r.converse.is_empty() {
        Vec::new()
    } else {
        vec![Curve::new("converse_log_norms", "index", "log_norm", r.converse.iter().map(|(i, n)| (*i, n.log_value)).collect())]
    };
    Ok(Outcome {
        inputs: json!({
            "s": se,
            "t": te,
            "p": p.to_string(),
            "space": space,
            "ells": ells,
            "grids": { "relation": grid_label(&grids.relation), "function": grid_label(&grids.function) },
        }),
        verdicts,
        result: json!({ "experiment": r }),
        table,
        curves,
    })
}

const CERTIFY_PARTS: [&str; 5] = ["invariants", "nonconvexity", "slow", "nonequivalence", "cross"];

fn invariants_line(b: &CertificateBundle) -> VerdictLine {
    VerdictLine::flag("invariants", b.all_pass, format!("{} checks, {} failed", b.checks.len(), b.failures))
}

fn nonconvexity_line(ladder: &[LadderEntry]) -> VerdictLine {
    let missing: Vec<String> = ladder.iter().filter(|e| e.witness.is_none()).map(|e| num(e.a)).collect();
    if missing.is_empty() {
        VerdictLine::status("nonconvexity", Status::Holds, format!("{} rungs witnessed", ladder.len()))
    } else {
        VerdictLine::status(
            "nonconvexity",
            Status::Inconclusive,
            format!("no witness within the block horizon for A in [{}]", missing.join(", ")),
        )
    }
}

fn slow_line(s: &SlowVariationReport) -> VerdictLine {
    let ok = s.all_bounds_pass && s.gammas.iter().all(|g| g.verdict.is_holds());
    let status = if ok {
        Status::Holds
    } else if !s.all_bounds_pass {
        Status::Fails
    } else {
        Status::Inconclusive
    };
    VerdictLine::status("slow_variation", status, "")
}

fn cross_lines(c: &CrossChecks) -> Vec<VerdictLine> {
    vec![
        VerdictLine::flag("om4_fails_at_first_plateau", c.om4_at_first_plateau, c.om4.note.clone()),
        VerdictLine::flag(
            "plateau_gaps_positive",
            c.plateau_gaps.iter().all(|g| g.gap_plateau > 0.0),
            format!("{} blocks", c.plateau_gaps.len()),
        ),
        VerdictLine::flag("biconjugate_below_phi", c.biconjugate_min_slack >= -1e-8, ""),
        VerdictLine::from_verdict("alpha0", &c.alpha0),
    ]
}

fn check_table(b: &CertificateBundle) -> Table {
    let mut t = Table::new(&["name", "j", "lhs", "rhs", "margin", "pass"]);
    for c in &b.checks {
        t.push(vec![c.name.clone(), c.j.to_string(), num(c.lhs), num(c.rhs), num(c.margin), c.pass.to_string()]);
    }
    t
}

fn profile_curves(p: &CounterexampleProfile) -> Result<Vec<Curve>> {
    let w = p.weight()?;
    let gap = double_conjugate(&w, &w.default_grid())?;
    Ok(vec![
        Curve::new("phi", "u", "phi", gap.us.iter().copied().zip(gap.phi.iter().copied()).collect()),
        Curve::new("biconjugate", "u", "biconjugate", gap.us.iter().copied().zip(gap.biconjugate.iter().copied()).collect()),
    ])
}

fn counterexample(delta_arg: &str, certify: &[String], cfg: &CertifyConfig) -> Result<Outcome> {
    let mut parts: Vec<&str> = Vec::new();
    for c in certify {
        match c.as_str() {
            "all" => parts.extend(CERTIFY_PARTS),
            "none" => {}
            other => match CERTIFY_PARTS.iter().find(|p| **p == other) {
                Some(p) => parts.push(p),
                None => bail!("unknown certificate '{other}' (expected all, none or one of {})", CERTIFY_PARTS.join(", ")),
            },
        }
    }
    parts.sort_by_key(|p| CERTIFY_PARTS.iter().position(|q| q == p));
    parts.dedup();

    let delta = load_delta(delta_arg, cfg.j_max + 1)?;
    let inputs = json!({ "delta": delta_arg, "config": cfg, "certify": parts });
    let p = construct(&delta, cfg.t1, cfg.j_max)?;
    let mut curves = profile_curves(&p)?;

    if parts.len() == CERTIFY_PARTS.len() {
        let r = certify_all(&delta, cfg)?;
        let mut verdicts = vec![invariants_line(&r.invariants), nonconvexity_line(&r.nonconvexity), slow_line(&r.slow_variation)];
        verdicts.push(VerdictLine::from_verdict("nonequivalence", &r.nonequivalence));
        verdicts.push(VerdictLine::flag("self_equivalence", r.self_equivalence.is_fails(), r.self_equivalence.note.clone()));
        verdicts.extend(cross_lines(&r.cross));
        curves.push(gamma_curve(&r.slow_variation));
        curves.push(ladder_curve(&r.nonconvexity));
        return Ok(Outcome { inputs, verdicts, table: check_table(&r.invariants), result: serde_json::to_value(&r)?, curves });
    }

    let mut verdicts = Vec::new();
    let mut result = json!({ "profile": p });
    let mut table = Table::new(&["name", "j", "lhs", "rhs", "margin", "pass"]);
    for part in parts {
        match part {
            "invariants" => {
                let b = verify_profile(&p)?;
                verdicts.push(invariants_line(&b));
                table = check_table(&b);
                result["invariants"] = serde_json::to_value(&b)?;
            }
            "nonconvexity" => {
                let ladder = nonconvexity_scan(&p, cfg.a_max)?;
                verdicts.push(nonconvexity_line(&ladder));
                curves.push(ladder_curve(&ladder));
                result["nonconvexity"] = serde_json::to_value(&ladder)?;
            }
            "slow" => {
                let s = slow_variation_certificate(&p, &cfg.gammas)?;
                verdicts.push(slow_line(&s));
                curves.push(gamma_curve(&s));
                result["slow_variation"] = serde_json::to_value(&s)?;
            }
            "nonequivalence" => {
                let q = construct(&delta.power(cfg.alpha)?, cfg.t1, cfg.j_max)?;
                let v = nonequivalence(&p, &q)?;
                verdicts.push(VerdictLine::from_verdict("nonequivalence", &v));
                result["nonequivalence"] = serde_json::to_value(&v)?;
            }
            "cross" => {
                let c = cross_checks(&p, &cfg.gammas, cfg.gap_blocks)?;
                verdicts.extend(cross_lines(&c));
                result["cross"] = serde_json::to_value(&c)?;
            }
            _ => unreachable!(),
        }
    }
    Ok(Outcome { inputs, verdicts, result, table, curves })
}

fn gamma_curve(s: &SlowVariationReport) -> Curve {
    Curve::new(
        "gamma_scan",
        "gamma",
        "sup_ratio_tail",
        s.gammas.iter().map(|g| (g.gamma, g.sup_ratio_tail)).collect(),
    )
}

fn ladder_curve(ladder: &[LadderEntry]) -> Curve {
    Curve::new(
        "nonconvexity_ladder",
        "a",
        "witness_j",
        ladder.iter().filter_map(|e| e.witness.as_ref().map(|w| (e.a, w.j as f64))).collect(),
    )
}

fn full_report(weight: &str, xmax: f64, g: &GridArgs) -> Result<Outcome> {
    let (w, spec) = load_weight(weight)?;
    let grid = grid_for(&w, g)?;
    let conditions = condition_verdicts(&w, &ConditionId::ALL, &grid)?;
    let classes = classify(&w, &grid)?;
    let index = growth_index(&w, &weightlab::growth::DEFAULT_GAMMAS, &default_ks(), &grid)?;
    let mut verdicts = lines(&conditions);
    let mut result = json!({
        "conditions": conditions.iter().cloned().collect::<std::collections::BTreeMap<_, _>>(),
        "classes": classes,
        "index": index,
    });
    let mut curves = vec![phi_curve(&w, &grid)?];
    // Conjugates need (ω₃); skip them rather than fail the whole report.
    if conditions.iter().any(|(n, v)| n == "om3" && v.is_holds()) {
        let conj = young_conjugate_on(&w, &default_x_grid(xmax, 1001))?;
        curves.push(Curve::new("phi_star", "x", "phi_star", conj.samples.iter().map(|s| (s.x, s.value)).collect()));
        let gap = double_conjugate(&w, &grid)?;
        curves.push(Curve::new("biconjugate", "u", "biconjugate", gap.us.iter().copied().zip(gap.biconjugate.iter().copied()).collect()));
        verdicts.push(VerdictLine::flag("phi_convex", gap.convex, format!("max gap {}", num(gap.max_gap))));
        result["biconjugate"] = json!({ "max_gap": gap.max_gap, "argmax_u": gap.argmax_u, "convex": gap.convex });
        let k = kappa_equivalence_check(&w, &GridSpec::logarithmic(1.0, 1e6, 601)?, 1e8)?;
        verdicts.push(VerdictLine::from_verdict("kappa_equivalent", &k));
        result["kappa_equivalence"] = serde_json::to_value(&k)?;
    } else {
        result["skipped"] = json!(["conjugate", "kappa"]);
    }
    Ok(Outcome {
        inputs: json!({ "weight": spec, "label": w.label(), "grid": grid_label(&grid), "xmax": xmax }),
        table: verdict_table(&conditions),
        verdicts,
        result,
        curves,
    })
}
