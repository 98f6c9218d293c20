//! Operation execution and run manifests.
//!
//! Every run emits one JSON manifest on stdout: the command, a normalized
//! echo of its inputs, the limits in force, and the result. The manifest
//! fully determines the run, so `replay` reproduces the result from it.
//! Wall-clock timing is attached only on request, keeping the default
//! output byte-identical across runs and thread counts.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use hypercomb_core::density::{banach_density, best_window_density, schnirelmann, upper_density, DensityReport};
use hypercomb_core::intsets::parse_set_spec;
use hypercomb_core::prcalc::{
    build_mu_matrix, find_mono_solution, quintic_color, rado_condition, search_avoiding_coloring,
    verify_quintic_obstruction, Coloring, Equation,
};
use hypercomb_core::ramsey::{find_mono_3ap, greedy_clique, PairColoring};
use hypercomb_core::strcalc::{canonical_form, equivalent, CoeffString};
use hypercomb_core::structure::{classify_ep, count_embeddings, finite_embeds, is_ps_window, EmbedOutcome};
use hypercomb_core::{jin, Error, Limits, Rational};

/// One operation, as echoed in (and replayable from) a manifest.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Op {
    Density {
        spec: String,
        window: Option<(i64, i64)>,
        len: Option<i64>,
    },
    Classify {
        spec: String,
    },
    Ps {
        spec: String,
        window: (i64, i64),
        k: i64,
        len: i64,
    },
    Embed {
        f: Vec<i64>,
        y: String,
        bound: i64,
    },
    Jin {
        spec: String,
        m: i64,
        k: i64,
        beta: String,
    },
    Clique {
        n: u32,
        r: u32,
        triples: Vec<(u32, u32, u32)>,
    },
    Ap3 {
        colors: Vec<u32>,
    },
    Rado {
        c: Vec<i64>,
    },
    Search {
        c: Vec<i64>,
        r: u32,
        n: i64,
        injective: bool,
    },
    Quintic {
        n: i64,
    },
    Coeffs {
        c: Vec<i64>,
    },
    Canon {
        s: Vec<i64>,
    },
    StringEq {
        s: Vec<i64>,
        t: Vec<i64>,
    },
}

impl Op {
    pub fn command(&self) -> &'static str {
        match self {
            Op::Density { .. } => "density",
            Op::Classify { .. } => "structure classify",
            Op::Ps { .. } => "structure ps",
            Op::Embed { .. } => "embed",
            Op::Jin { .. } => "jin",
            Op::Clique { .. } => "ramsey clique",
            Op::Ap3 { .. } => "ramsey ap3",
            Op::Rado { .. } => "pr rado",
            Op::Search { .. } => "pr search",
            Op::Quintic { .. } => "pr quintic",
            Op::Coeffs { .. } => "pr coeffs",
            Op::Canon { .. } => "strings canon",
            Op::StringEq { .. } => "strings eq",
        }
    }

    fn input_echo(&self) -> Value {
        // The enum serializes as {"variant": {...fields...}}; the echo keeps
        // just the fields, with the command string carried separately.
        let v = serde_json::to_value(self).expect("inputs serialize");
        match v {
            Value::Object(map) => map.into_iter().next().map(|(_, v)| v).unwrap_or(Value::Null),
            other => other,
        }
    }

    pub fn from_manifest(command: &str, inputs: Value) -> Result<Op, Error> {
        let key = match command {
            "density" => "density",
            "structure classify" => "classify",
            "structure ps" => "ps",
            "embed" | "structure embed" => "embed",
            "jin" => "jin",
            "ramsey clique" => "clique",
            "ramsey ap3" => "ap3",
            "pr rado" => "rado",
            "pr search" => "search",
            "pr quintic" => "quintic",
            "pr coeffs" => "coeffs",
            "strings canon" => "canon",
            "strings eq" => "string_eq",
            other => {
                return Err(Error::InvalidInput(format!(
                    "unknown manifest command {other:?}"
                )))
            }
        };
        serde_json::from_value(json!({ key: inputs }))
            .map_err(|e| Error::InvalidInput(format!("bad manifest inputs: {e}")))
    }

    /// Runs the operation. The returned value is the manifest `result`.
    pub fn execute(&self, limits: &Limits, threads: usize) -> Result<Value, Error> {
        match self {
            Op::Density { spec, window, len } => {
                let set = parse_set_spec(spec)?;
                let as_value = |r: Result<DensityReport, Error>| -> Result<Value, Error> {
                    match r {
                        Ok(report) => Ok(serde_json::to_value(report).expect("report serializes")),
                        Err(e) if e.is_resource_limit() => Err(e),
                        Err(_) => Ok(Value::Null),
                    }
                };
                let mut result = json!({
                    "schnirelmann": as_value(schnirelmann(&set))?,
                    "upper": as_value(upper_density(&set))?,
                    "banach": as_value(banach_density(&set))?,
                    "best_window": Value::Null,
                });
                if let (Some((lo, hi)), Some(l)) = (window, len) {
                    let w = set.window(*lo, *hi, limits)?;
                    let (x, value) = best_window_density(&w, *l as u64)?;
                    result["best_window"] = json!({
                        "x": x,
                        "value": value,
                        "len": l,
                        "method": "windowed",
                    });
                }
                Ok(result)
            }
            Op::Classify { spec } => {
                let set = parse_set_spec(spec)?;
                let c = classify_ep(&set)?;
                Ok(serde_json::to_value(c).expect("classification serializes"))
            }
            Op::Ps { spec, window, k, len } => {
                let set = parse_set_spec(spec)?;
                let w = set.window(window.0, window.1, limits)?;
                let witness = is_ps_window(&w, *k, *len)?;
                Ok(json!({ "witness": witness }))
            }
            Op::Embed { f, y, bound } => {
                let set = parse_set_spec(y)?;
                let outcome = finite_embeds(f, &set, *bound, threads)?;
                let count = count_embeddings(f, &set, *bound)?;
                let verdict = match outcome {
                    EmbedOutcome::Found(_) => "found",
                    EmbedOutcome::Inconclusive => "inconclusive",
                    EmbedOutcome::Impossible => "impossible",
                };
                Ok(json!({
                    "verdict": verdict,
                    "shift": outcome.shift().map(|s| s.t),
                    "shift_count": count,
                }))
            }
            Op::Jin { spec, m, k, beta } => {
                let set = parse_set_spec(spec)?;
                let beta: Rational = beta.parse()?;
                let w = set.window(1, *m, limits)?;
                let certificate = jin::xi_search(&w, *k, beta, threads)?;
                let refutation = match &certificate {
                    Some(_) => None,
                    None => jin::stepping_refuter(&w, *k, beta, threads)?,
                };
                Ok(json!({
                    "certificate": certificate,
                    "refutation": refutation,
                }))
            }
            Op::Clique { n, r, triples } => {
                let pc = PairColoring::from_triples(*n, *r, triples)?;
                let clique = greedy_clique(&pc);
                Ok(json!({
                    "members": clique.members,
                    "color": clique.color,
                    "size": clique.members.len(),
                }))
            }
            Op::Ap3 { colors } => {
                let r = colors.iter().copied().max().unwrap_or(1).max(1);
                let col = Coloring::new(r, colors.clone())?;
                let found = find_mono_3ap(&col);
                Ok(json!({
                    "found": found.map(|(a, d)| json!({"a": a, "d": d})),
                }))
            }
            Op::Rado { c } => {
                let subset = rado_condition(c)?;
                Ok(json!({ "rado_subset": subset }))
            }
            Op::Search { c, r, n, injective } => {
                let eq = Equation::linear(c.clone())?;
                let report = search_avoiding_coloring(&eq, *r, *n, *injective, limits, threads)?;
                let verified = match &report.coloring {
                    Some(col) => find_mono_solution(&eq, col, *injective).is_none(),
                    None => true,
                };
                if !verified {
                    return Err(Error::InternalVerification(
                        "returned coloring has a monochromatic solution".into(),
                    ));
                }
                Ok(json!({
                    "coloring": report.coloring.as_ref().map(|c| c.assignments().to_vec()),
                    "exhausted": report.coloring.is_none(),
                    "nodes": report.nodes,
                }))
            }
            Op::Quintic { n } => {
                let report = verify_quintic_obstruction(*n)?;
                // Spot-echo of the coloring on a few small values.
                let sample: Vec<Value> = (1..=5.min(*n))
                    .map(|v| {
                        let (i, j) = quintic_color(v).expect("positive");
                        json!({"n": v, "i": i, "j": j})
                    })
                    .collect();
                Ok(json!({
                    "holds": report.holds,
                    "counterexample": report.counterexample,
                    "triples_checked": report.triples_checked,
                    "sample": sample,
                }))
            }
            Op::Coeffs { c } => {
                let sol = hypercomb_core::prcalc::injective_pr_coeffs(c)?;
                let rows = build_mu_matrix(c, &sol)?;
                Ok(json!({
                    "a": sol.a,
                    "shape_of_var": sol.shape_of_var,
                    "mu_rows": rows.iter().map(|r| r.entries.clone()).collect::<Vec<_>>(),
                }))
            }
            Op::Canon { s } => {
                let canon = canonical_form(&CoeffString::new(s.clone()));
                Ok(json!({ "canonical": canon.entries() }))
            }
            Op::StringEq { s, t } => {
                let eq = equivalent(&CoeffString::new(s.clone()), &CoeffString::new(t.clone()));
                Ok(json!({ "equivalent": eq }))
            }
        }
    }

    /// One-line human summary for stderr.
    pub fn summarize(&self, result: &Value) -> String {
        match self {
            Op::Density { spec, .. } => format!("densities of {spec:?}: {result}"),
            Op::Classify { spec } => format!("classification of {spec:?}: {result}"),
            Op::Ps { .. } => match result.get("witness") {
                Some(Value::Null) => "no gap-bounded stretch of the requested length".into(),
                Some(w) => format!("gap-bounded stretch found: {w}"),
                None => String::new(),
            },
            Op::Embed { .. } => format!(
                "embedding verdict: {}",
                result.get("verdict").and_then(Value::as_str).unwrap_or("?")
            ),
            Op::Jin { .. } => {
                if result.get("certificate") != Some(&Value::Null) {
                    "certificate found".into()
                } else {
                    "no certificate; refutation trace produced".into()
                }
            }
            Op::Clique { .. } => format!(
                "monochromatic set of size {}",
                result.get("size").and_then(Value::as_u64).unwrap_or(0)
            ),
            Op::Ap3 { .. } => match result.get("found") {
                Some(Value::Null) => "no monochromatic 3-AP".into(),
                Some(f) => format!("monochromatic 3-AP at {f}"),
                None => String::new(),
            },
            Op::Rado { .. } => match result.get("rado_subset") {
                Some(Value::Null) => "no zero-sum subset: not partition regular".into(),
                Some(f) => format!("zero-sum subset {f}: partition regular"),
                None => String::new(),
            },
            Op::Search { .. } => {
                if result.get("exhausted") == Some(&Value::Bool(true)) {
                    "exhausted: every coloring has a monochromatic solution".into()
                } else {
                    "avoiding coloring found".into()
                }
            }
            Op::Quintic { n } => format!(
                "x+y=z² obstruction up to {n}: holds = {}",
                result.get("holds").and_then(Value::as_bool).unwrap_or(false)
            ),
            Op::Coeffs { .. } => format!(
                "coefficients {}",
                result.get("a").cloned().unwrap_or(Value::Null)
            ),
            Op::Canon { .. } => format!(
                "canonical form {}",
                result.get("canonical").cloned().unwrap_or(Value::Null)
            ),
            Op::StringEq { .. } => format!(
                "equivalent: {}",
                result.get("equivalent").and_then(Value::as_bool).unwrap_or(false)
            ),
        }
    }
}

/// The JSON document emitted on stdout.
#[derive(Debug, Serialize)]
pub struct Manifest {
    pub command: String,
    pub inputs: Value,
    pub limits: Limits,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

/// Manifest fields needed to re-run.
#[derive(Debug, Deserialize)]
pub struct ManifestIn {
    pub command: String,
    pub inputs: Value,
    pub limits: LimitsIn,
}

#[derive(Debug, Deserialize)]
pub struct LimitsIn {
    pub max_window: u64,
    pub max_search_nodes: u64,
    pub time_budget_ms: Option<u64>,
}

impl From<LimitsIn> for Limits {
    fn from(l: LimitsIn) -> Limits {
        Limits {
            max_window: l.max_window,
            max_search_nodes: l.max_search_nodes,
            time_budget_ms: l.time_budget_ms,
        }
    }
}

pub fn run(op: &Op, limits: &Limits, threads: usize, timing: bool) -> Result<Manifest, Error> {
    let started = std::time::Instant::now();
    let result = op.execute(limits, threads)?;
    Ok(Manifest {
        command: op.command().to_string(),
        inputs: op.input_echo(),
        limits: limits.clone(),
        result,
        timing_ms: timing.then(|| started.elapsed().as_millis()),
    })
}
