//! Runs one command on an instance and builds the JSON report.

use std::time::Instant;

use kantorovich::approx::{
    check_uniform_lipschitz, find_star_partition, lipschitz_modulus, oscillation, partition_discretize,
    ApproximantSequence,
};
use kantorovich::couplings::{coarse_problem, extend_coupling, monge_coupling, CoarseCoupling};
use kantorovich::rectangles::{arveson_witness, indicator_cost, min_cover, ArvesonOutcome, Combine};
use kantorovich::transport::DEFAULT_ENUMERATION_CAP;
use kantorovich::wasserstein::{check_lipschitz_witness, wasserstein1};
use kantorovich::{
    CostMatrix, Coupling, Matrix, Objective, Partition, PotentialPair, Scalar, SolveReport, SubsetMask, Tolerance,
    TransportProblem,
};
use serde_json::{json, Map, Value};

use crate::error::InputError;
use crate::instance::{Arithmetic, Instance, Num, Problem};

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Solve,
    Chain,
    /// Infimal-convolution stages at each parameter.
    Approx {
        params: Vec<Num>,
    },
    /// Star partition at level `eps` for a cost with uniform Lipschitz bound.
    Partition {
        eps: Num,
        lipschitz: Num,
    },
    Extend,
    Cover,
    Arveson,
    Wasserstein,
    OracleCheck {
        cap: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::Chain => "chain",
            Command::Approx { .. } => "approx",
            Command::Partition { .. } => "partition",
            Command::Extend => "extend",
            Command::Cover => "cover",
            Command::Arveson => "arveson",
            Command::Wasserstein => "wasserstein",
            Command::OracleCheck { .. } => "oracle-check",
        }
    }

    pub fn oracle_check() -> Self {
        Command::OracleCheck { cap: DEFAULT_ENUMERATION_CAP }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Options {
    /// Overrides the instance's own arithmetic.
    pub mode: Option<Arithmetic>,
    /// Float-mode comparison tolerance.
    pub tolerance: f64,
    /// Adds wall-clock time to the report, which makes it nondeterministic.
    pub timing: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { mode: None, tolerance: kantorovich::scalar::DEFAULT_TOLERANCE, timing: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub document: Value,
    /// Every invariant check held.
    pub ok: bool,
}

pub fn run_scenario(instance: &Instance, command: &Command, options: &Options) -> Result<Report, InputError> {
    let mode = options.mode.unwrap_or(instance.arithmetic);
    let start = Instant::now();
    let (tol, out) = match mode {
        Arithmetic::Rational => {
            let tol = Tolerance::EXACT;
            (tol, run::<kantorovich::Rational>(&instance.resolve(tol)?, command, tol)?)
        }
        Arithmetic::Float => {
            let tol = Tolerance(options.tolerance);
            (tol, run::<f64>(&instance.resolve(tol)?, command, tol)?)
        }
    };
    let ok = out.checks.iter().all(|c| c.holds);

    let mut doc = Map::new();
    doc.insert("command".into(), json!(command.name()));
    doc.insert(
        "arithmetic".into(),
        json!(match mode {
            Arithmetic::Rational => "rational",
            Arithmetic::Float => "float",
        }),
    );
    if mode == Arithmetic::Float {
        doc.insert("tolerance".into(), json!(tol.0));
    }
    doc.insert("values".into(), Value::Object(out.values));
    doc.insert("checks".into(), out.checks.iter().map(|c| json!({"name": c.name, "holds": c.holds})).collect());
    doc.insert("ok".into(), json!(ok));
    if options.timing {
        doc.insert("timing_ms".into(), json!(start.elapsed().as_secs_f64() * 1e3));
    }
    Ok(Report { document: Value::Object(doc), ok })
}

struct Check {
    name: String,
    holds: bool,
}

#[derive(Default)]
struct Output {
    values: Map<String, Value>,
    checks: Vec<Check>,
}

impl Output {
    fn set(&mut self, key: &str, v: Value) {
        self.values.insert(key.into(), v);
    }

    fn check(&mut self, name: impl Into<String>, holds: bool) {
        self.checks.push(Check { name: name.into(), holds });
    }
}

fn num<S: Scalar>(v: &S) -> Value {
    if S::EXACT {
        Value::String(v.render())
    } else {
        serde_json::Number::from_f64(v.to_f64()).map_or(Value::Null, Value::Number)
    }
}

fn vector<S: Scalar>(v: &[S]) -> Value {
    v.iter().map(num).collect()
}

fn matrix<S: Scalar>(m: &Matrix<S>) -> Value {
    (0..m.rows()).map(|i| vector(m.row(i))).collect()
}

fn indices(mask: &SubsetMask) -> Value {
    mask.indices().collect()
}

fn partition_json(p: &Partition) -> Value {
    let cells: Vec<Value> =
        p.cells().iter().map(|c| json!({"members": indices(&c.members), "representative": c.representative})).collect();
    json!({"cells": cells, "null_cell": p.null_cell()})
}

fn potentials_json<S: Scalar>(p: &PotentialPair<S>) -> Value {
    json!({"f": vector(&p.f), "g": vector(&p.g)})
}

fn coupling_json<S: Scalar>(c: &Coupling<S>) -> Value {
    matrix(c.matrix())
}

fn lib(command: &'static str) -> impl Fn(kantorovich::Error) -> InputError {
    move |source| InputError::Library { command, source }
}

fn need<'a, T>(v: Option<&'a T>, what: &str, command: &str) -> Result<&'a T, InputError> {
    v.ok_or_else(|| InputError::Validation(format!("{command} needs {what}")))
}

fn run<S: Scalar>(p: &Problem<S>, command: &Command, tol: Tolerance) -> Result<Output, InputError> {
    let name = command.name();
    let mut out = Output::default();
    match command {
        Command::Solve => solve(p, tol, &mut out, true)?,
        Command::Chain => solve(p, tol, &mut out, false)?,
        Command::Approx { params } => approx(p, params, tol, &mut out)?,
        Command::Partition { eps, lipschitz } => discretize(p, eps, lipschitz, tol, &mut out)?,
        Command::Extend => extend(p, tol, &mut out)?,
        Command::Cover => {
            let family = need(p.rectangles.as_ref(), "rectangles", name)?;
            let cover = min_cover(family, p.mu(), p.nu(), tol).map_err(lib(name))?;
            let h = indicator_cost::<S>(family, Combine::Union);
            let tp = TransportProblem::with_tolerance(h.values(), p.mu(), p.nu(), tol).map_err(lib(name))?;
            let alpha_star = tp.alpha_star().map_err(lib(name))?.value;
            let beta_star = tp.beta_star().map_err(lib(name))?.value;
            out.set("a", indices(&cover.a));
            out.set("b", indices(&cover.b));
            out.set("cover_value", num(&cover.value));
            out.set("alpha_star", num(&alpha_star));
            out.set("beta_star", num(&beta_star));
            out.check("cross contains H", cover.covers(&family.membership(Combine::Union)));
            out.check("cover value = alpha*(1_H)", tol.eq(&cover.value, &alpha_star));
            out.check("alpha*(1_H) = beta*(1_H)", tol.eq(&alpha_star, &beta_star));
        }
        Command::Arveson => {
            let family = need(p.rectangles.as_ref(), "rectangles", name)?;
            match arveson_witness(family, p.mu(), p.nu(), tol).map_err(lib(name))? {
                ArvesonOutcome::Null(cover) => {
                    out.set("outcome", json!("null"));
                    out.set("a", indices(&cover.a));
                    out.set("b", indices(&cover.b));
                    out.check("mu(A) = 0", tol.is_zero(&cover.a.mass(p.mu())));
                    out.check("nu(B) = 0", tol.is_zero(&cover.b.mass(p.nu())));
                    out.check("cross contains H", cover.covers(&family.membership(Combine::Union)));
                }
                ArvesonOutcome::NotNull { alpha_star, coupling } => {
                    out.set("outcome", json!("not-null"));
                    out.set("alpha_star", num(&alpha_star));
                    out.set("coupling", coupling_json(&coupling));
                    let h = indicator_cost::<S>(family, Combine::Union);
                    out.check("coupling attains alpha*", tol.eq(&coupling.cost(h.values()), &alpha_star));
                }
            }
        }
        Command::Wasserstein => {
            if p.y.len() != p.x.len() {
                return Err(InputError::Validation(format!(
                    "wasserstein needs nu on the points of x: x has {} points, y has {}",
                    p.x.len(),
                    p.y.len()
                )));
            }
            let r = wasserstein1(&p.x, p.nu(), tol).map_err(lib(name))?;
            let d = p.x.require_metric().map_err(lib(name))?;
            out.set("alpha", num(&r.alpha));
            out.set("beta", num(&r.beta));
            out.set("potential", vector(&r.potential));
            out.set("coupling", coupling_json(&r.coupling));
            out.check("alpha(d) = beta(d)", r.duality_holds(tol));
            out.check("potential is 1-Lipschitz", check_lipschitz_witness(&r.potential, d, tol).is_ok());
        }
        Command::OracleCheck { cap } => {
            let c = need(p.cost.as_ref(), "a cost", name)?;
            let tp = TransportProblem::with_tolerance(c, p.mu(), p.nu(), tol).map_err(lib(name))?;
            let chain = tp.chain().map_err(lib(name))?;
            let lo = tp.oracle(Objective::Alpha, *cap).map_err(lib(name))?;
            let hi = tp.oracle(Objective::AlphaStar, *cap).map_err(lib(name))?;
            let pairs = [(&chain.alpha, &lo), (&chain.beta, &lo), (&chain.alpha_star, &hi), (&chain.beta_star, &hi)];
            let verdict = if pairs.iter().all(|(a, b)| a == b) {
                "exact"
            } else if pairs.iter().all(|(a, b)| tol.eq(*a, *b)) {
                "within tolerance"
            } else {
                "mismatch"
            };
            out.set("oracle_min", num(&lo));
            out.set("oracle_max", num(&hi));
            out.set("chain", vector(&chain.as_array()));
            out.set("match", json!(verdict));
            out.check("simplex matches vertex enumeration", verdict != "mismatch");
        }
    }
    Ok(out)
}

fn report_json<S: Scalar>(r: &SolveReport<S>) -> Value {
    json!({
        "value": num(&r.value),
        "coupling": r.coupling.as_ref().map(coupling_json),
        "potentials": r.potentials.as_ref().map(potentials_json),
        "basis": r.basis,
        "pivots": r.pivots,
    })
}

fn solve<S: Scalar>(p: &Problem<S>, tol: Tolerance, out: &mut Output, witnesses: bool) -> Result<(), InputError> {
    let name = if witnesses { "solve" } else { "chain" };
    let c = need(p.cost.as_ref(), "a cost", name)?;
    let tp = TransportProblem::with_tolerance(c, p.mu(), p.nu(), tol).map_err(lib(name))?;
    let chain = tp.chain().map_err(lib(name))?;
    out.set("chain", vector(&chain.as_array()));
    if witnesses {
        for objective in [Objective::Alpha, Objective::AlphaStar, Objective::Beta, Objective::BetaStar] {
            let r = tp.solve(objective).map_err(lib(name))?;
            let key = objective.name();
            if let Some(coupling) = &r.coupling {
                out.check(format!("{key}: coupling marginals"), coupling.check(tol).is_ok());
            }
            if let Some(pot) = &r.potentials {
                out.check(format!("{key}: potentials feasible"), pot.check_feasible(c, tol).is_ok());
            }
            out.check(format!("{key}: weak duality"), r.weak_duality_holds(c, tol));
            out.set(key, report_json(&r));
        }
    }
    out.check("beta <= alpha <= alpha* <= beta*", chain.is_ordered(tol));
    out.check("alpha = beta", tol.eq(&chain.alpha, &chain.beta));
    out.check("alpha* = beta*", tol.eq(&chain.alpha_star, &chain.beta_star));
    if let Some(map) = &p.map {
        let monge = monge_coupling(p.mu(), map, p.nu(), tol).map_err(lib(name))?;
        let value = monge.cost(c);
        out.set("monge_cost", num(&value));
        out.check("alpha <= monge cost <= alpha*", tol.le(&chain.alpha, &value) && tol.le(&value, &chain.alpha_star));
    }
    Ok(())
}

fn approx<S: Scalar>(p: &Problem<S>, params: &[Num], tol: Tolerance, out: &mut Output) -> Result<(), InputError> {
    let name = "approx";
    let c = CostMatrix::new(need(p.cost.as_ref(), "a cost", name)?.clone());
    let d = p.x.require_metric().map_err(lib(name))?;
    let mut ns =
        params.iter().enumerate().map(|(i, v)| v.parse::<S>(&format!("--n[{i}]"))).collect::<Result<Vec<S>, _>>()?;
    if ns.is_empty() {
        return Err(InputError::Validation("approx needs at least one --n value".into()));
    }
    ns.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let seq = ApproximantSequence::from_infconv(&c, &p.x, &ns, tol).map_err(lib(name))?;
    let check = kantorovich::approx::beta_star_limit_check(&seq, p.mu(), p.nu(), tol).map_err(lib(name))?;
    let modulus = lipschitz_modulus(c.values(), d);

    let mut stages = Vec::new();
    for ((n, cn), value) in seq.stages().iter().zip(&check.stage_values) {
        let lipschitz = check_uniform_lipschitz(cn.values(), d, n, tol).is_ok();
        let below = cn.values().le_entrywise(c.values(), tol);
        out.check(format!("n = {}: c_n is n-Lipschitz", n.render()), lipschitz);
        out.check(format!("n = {}: c_n <= c", n.render()), below);
        if modulus.as_ref().is_some_and(|m| n >= m) {
            out.check(
                format!("n = {}: c_n = c at or above the modulus", n.render()),
                cn.values().max_abs_diff(c.values()) <= tol.slack(),
            );
        }
        stages.push(json!({"n": num(n), "beta_star": num(value)}));
    }
    out.set("stages", Value::Array(stages));
    out.set("beta_star", num(&check.base_value));
    out.set("modulus", modulus.as_ref().map_or(Value::Null, num));
    out.set("final_gap", num(&check.final_gap));
    out.check("beta*(c_n) nondecreasing up to beta*(c)", check.monotone);
    out.check("exact at the last stage when it equals c", check.converged(tol));
    Ok(())
}

fn discretize<S: Scalar>(
    p: &Problem<S>,
    eps: &Num,
    u: &Num,
    tol: Tolerance,
    out: &mut Output,
) -> Result<(), InputError> {
    let name = "partition";
    let c = CostMatrix::new(need(p.cost.as_ref(), "a cost", name)?.clone());
    let eps: S = eps.parse("--eps")?;
    let u: S = u.parse("--lipschitz")?;
    let part = find_star_partition(&c, &eps, &p.x, &u, tol).map_err(lib(name))?;
    let osc = oscillation(&c, &part).map_err(lib(name))?;
    let c0 = partition_discretize(&c, &part).map_err(lib(name))?;

    let fine =
        TransportProblem::with_tolerance(c.values(), p.mu(), p.nu(), tol).and_then(|t| t.chain()).map_err(lib(name))?;
    let alpha0 = TransportProblem::with_tolerance(c0.values(), p.mu(), p.nu(), tol)
        .and_then(|t| t.alpha())
        .map_err(lib(name))?
        .value;
    let (coarse_cost, masses) = coarse_problem(c.values(), &part, p.mu(), tol).map_err(lib(name))?;
    let coarse = TransportProblem::with_tolerance(&coarse_cost, &masses, p.nu(), tol)
        .and_then(|t| t.alpha())
        .map_err(lib(name))?;
    let t = coarse.coupling.as_ref().expect("alpha returns a coupling").matrix().clone();
    let extended = CoarseCoupling::new(part.clone(), t, p.nu().to_vec(), tol)
        .and_then(|cc| extend_coupling(&cc, p.mu(), tol))
        .map_err(lib(name))?;
    let on_c = extended.cost(c.values());
    let bound = fine.beta.clone() + S::from_i64(3) * eps.clone();

    out.set("partition", partition_json(&part));
    out.set("oscillation", num(&osc.max()));
    out.set("alpha", num(&fine.alpha));
    out.set("beta", num(&fine.beta));
    out.set("alpha_discretized", num(&alpha0));
    out.set("coarse_alpha", num(&coarse.value));
    out.set("extended_cost", num(&on_c));
    out.set("bound", num(&bound));
    out.check("oscillation <= eps", osc.satisfies(&eps, tol));
    out.check("|alpha(c) - alpha(c0)| <= eps", tol.le(&(fine.alpha.clone() - alpha0.clone()).abs(), &eps));
    out.check("alpha(c0) = coarse alpha", tol.eq(&alpha0, &coarse.value));
    out.check(
        "alpha(c) <= P(c) <= coarse alpha + eps",
        tol.le(&fine.alpha, &on_c) && tol.le(&on_c, &(coarse.value.clone() + eps.clone())),
    );
    out.check("alpha <= beta + 3 eps", tol.le(&fine.alpha, &bound));
    Ok(())
}

fn extend<S: Scalar>(p: &Problem<S>, tol: Tolerance, out: &mut Output) -> Result<(), InputError> {
    let name = "extend";
    let part = need(p.partition.as_ref(), "a partition", name)?;
    let t = match &p.coarse_coupling {
        Some(t) => t.clone(),
        None => {
            // No T given: use an optimal coupling of the coarse problem.
            let c = need(p.cost.as_ref(), "a coarse_coupling or a cost", name)?;
            let (coarse_cost, masses) = coarse_problem(c, part, p.mu(), tol).map_err(lib(name))?;
            out.set("coarse_source", json!("optimal"));
            TransportProblem::with_tolerance(&coarse_cost, &masses, p.nu(), tol)
                .and_then(|tp| tp.alpha())
                .map_err(lib(name))?
                .coupling
                .expect("alpha returns a coupling")
                .matrix()
                .clone()
        }
    };
    let cc = CoarseCoupling::new(part.clone(), t.clone(), p.nu().to_vec(), tol).map_err(lib(name))?;
    let ext = extend_coupling(&cc, p.mu(), tol).map_err(lib(name))?;
    out.set("coarse_coupling", matrix(&t));
    out.set("coupling", coupling_json(&ext));

    let rows_ok = ext.matrix().row_sums().iter().zip(p.mu()).all(|(a, b)| tol.eq(a, b));
    let cols_ok = ext.matrix().col_sums().iter().zip(p.nu()).all(|(a, b)| tol.eq(a, b));
    // Agreement on every cell × point pair gives agreement on all coarse rectangles.
    let agree = part.cells().iter().enumerate().all(|(i, cell)| {
        (0..p.y.len()).all(|y| tol.eq(&ext.mass_where(|x, yy| yy == y && cell.members.contains(x)), &t[(i, y)]))
    });
    out.check("row marginal = mu", rows_ok);
    out.check("column marginal = nu", cols_ok);
    out.check("P = T on coarse rectangles", agree);
    if let Some(c) = &p.cost {
        out.set("cost", num(&ext.cost(c)));
    }
    Ok(())
}
