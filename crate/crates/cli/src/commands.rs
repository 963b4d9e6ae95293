use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};
use smcount_core::analyses::{
    regularity_analyze, regularity_split, regularity_verify, unimodularity_check, Graph,
    RegularityReport,
};
use smcount_core::engine::Engine;
use smcount_core::formula::{parse_document, Document, Formula, Input, Symbol};
use smcount_core::oracle::{brute_count, build_model};
use smcount_core::theory::ParamPattern;
use smcount_core::{BigInt, Error, IntPolynomial};

use crate::report::{coeffs, count_fields, int, poly_fields, Report, Text};
use crate::Failure;

struct Loaded {
    file: String,
    doc: Document,
    engine: Engine,
}

impl Loaded {
    fn new(path: &Path) -> Result<Self, Failure> {
        let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        let doc = parse_document(&text)?;
        Ok(Self {
            file: path.display().to_string(),
            engine: Engine::new(doc.theory),
            doc,
        })
    }

    fn header(&self, command: &str) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("command".into(), json!(command));
        m.insert("theory".into(), json!(self.doc.theory.to_string()));
        m.insert("file".into(), json!(self.file));
        m
    }

    fn text(&self) -> Text {
        let mut t = Text::default();
        t.row("theory", self.doc.theory);
        t
    }

    fn main(&self) -> Result<&Input, Failure> {
        self.doc
            .main
            .as_ref()
            .ok_or_else(|| Failure::Usage("expected a single formula, found named sections".into()))
    }

    fn section(&self, name: &str) -> Result<&Input, Failure> {
        self.doc
            .section(name)
            .ok_or_else(|| Failure::Usage(format!("missing section `{name}:`")))
    }

    /// Every parameter declared anywhere in the file.
    fn params(&self) -> Vec<Symbol> {
        let mut out: Vec<Symbol> = Vec::new();
        let inputs = self.doc.main.iter().chain(self.doc.sections.iter().map(|s| &s.input));
        for s in inputs.flat_map(Input::parameters) {
            if !out.contains(&s) {
                out.push(s);
            }
        }
        out
    }

    fn pattern(&self, text: Option<&str>) -> Result<Option<ParamPattern>, Failure> {
        text.map(|t| ParamPattern::parse(self.doc.theory, &self.params(), t))
            .transpose()
            .map_err(Failure::from)
    }

    fn graph(&self) -> Result<Graph, Failure> {
        let (v, w, e) = (self.section("V")?, self.section("W")?, self.section("E")?);
        Ok(Graph {
            v_vars: v.variables(),
            v: v.formula.clone(),
            w_vars: w.variables(),
            w: w.formula.clone(),
            e: e.formula.clone(),
        })
    }

    fn correspondence(&self) -> Result<(&Input, &[Symbol], &[Symbol]), Failure> {
        let input = match self.doc.section("PSI") {
            Some(i) => i,
            None => self.main()?,
        };
        match input.var_groups.as_slice() {
            [xs, ys] => Ok((input, xs, ys)),
            _ => Err(Failure::Usage(
                "a correspondence needs exactly two `var` declarations, one per tuple".into(),
            )),
        }
    }

    fn budget(&self) -> u128 {
        self.engine.limits().brute_budget
    }
}

fn describe(p: &ParamPattern) -> String {
    if p.params().is_empty() {
        "no parameters".into()
    } else {
        p.to_string()
    }
}

fn obj(m: Map<String, Value>) -> Value {
    Value::Object(m)
}

pub fn count(path: &Path, pattern: Option<&str>) -> Result<Report, Failure> {
    let l = Loaded::new(path)?;
    let input = l.main()?;
    let pattern = l.pattern(pattern)?;
    let vars = input.variables();
    let r = l.engine.count(&vars, &input.formula, pattern.as_ref())?;
    let resolved = l.engine.resolve_pattern(&input.formula, pattern.as_ref())?;

    let mut m = l.header("count");
    m.insert("formula".into(), json!(input.formula.to_string()));
    m.insert("pattern".into(), json!(resolved.to_string()));
    m.extend(count_fields(&r));
    let mut t = l.text();
    t.row("formula", &input.formula).row("pattern", describe(&resolved)).count(&r);
    Ok(Report {
        json: obj(m),
        text: t.finish(),
        mismatch: false,
    })
}

pub fn partition(path: &Path, pattern: Option<&str>) -> Result<Report, Failure> {
    let l = Loaded::new(path)?;
    let input = l.main()?;
    let selected = l.pattern(pattern)?;
    let params = input.parameters();
    let part = l
        .engine
        .parametric_count_over(&input.variables(), &input.formula, &params)?;
    let entries: Vec<_> = match &selected {
        Some(p) => vec![part
            .entry_for(p)
            .ok_or_else(|| Failure::Usage(format!("pattern `{p}` is not among the enumerated patterns")))?],
        None => part.entries.iter().collect(),
    };

    let mut t = l.text();
    t.row("formula", &input.formula).row("classes", entries.len());
    let mut list = Vec::new();
    for e in entries {
        let mut m = Map::new();
        m.insert("pattern".into(), json!(e.formula.to_string()));
        m.insert("patterns".into(), json!(e.patterns.iter().map(|p| p.to_string()).collect::<Vec<_>>()));
        m.extend(count_fields(&e.result));
        list.push(obj(m));
        t.line(format!("  {}  ->  {}  (q >= {})", e.formula, e.result.poly, e.result.threshold_q0));
    }
    let mut m = l.header("partition");
    m.insert("formula".into(), json!(input.formula.to_string()));
    m.insert("partition".into(), Value::Array(list));
    Ok(Report {
        json: obj(m),
        text: t.finish(),
        mismatch: false,
    })
}

pub fn unimod(path: &Path, pattern: Option<&str>) -> Result<Report, Failure> {
    let l = Loaded::new(path)?;
    let (input, xs, ys) = l.correspondence()?;
    let pattern = l.pattern(pattern)?;
    let r = unimodularity_check(&l.engine, xs, ys, &input.formula, pattern.as_ref())?;

    let mut m = l.header("unimod");
    m.insert("formula".into(), json!(input.formula.to_string()));
    m.insert("n".into(), int(r.n));
    m.insert("k".into(), int(r.k));
    m.insert("ell".into(), int(r.ell));
    m.insert("Z".into(), obj(count_fields(&r.z)));
    m.insert("X".into(), obj(count_fields(&r.x)));
    m.insert("Y".into(), obj(count_fields(&r.y)));
    m.insert("identity_holds".into(), json!(r.identity_holds));
    m.insert("k_equals_ell".into(), json!(r.k_equals_ell));
    m.insert("generic_surrogate".into(), json!(r.generic_surrogate));
    m.insert("threshold_q0".into(), int(r.threshold_q0));

    let mut t = l.text();
    t.row("formula", &input.formula)
        .row("fiber sizes", format!("k = {}, ell = {}", r.k, r.ell))
        .row("|Z|", &r.z.poly)
        .row("|X|", &r.x.poly)
        .row("|Y|", &r.y.poly)
        .row("|Z| = k|X| = ell|Y|", r.identity_holds)
        .row(
            "k = ell",
            match r.k_equals_ell {
                Some(b) => b.to_string(),
                None => "not forced (a projection has lower rank)".into(),
            },
        )
        .row("genericity", if r.generic_surrogate { "generic-surrogate" } else { "certified" })
        .row("valid for", format!("q >= {}", r.threshold_q0));
    Ok(Report {
        json: obj(m),
        text: t.finish(),
        mismatch: false,
    })
}

fn piece_fields(r: &RegularityReport) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("label".into(), json!(r.label));
    m.insert("case".into(), json!(r.case.map(|c| c.to_string())));
    m.insert("R_coeffs".into(), r.r_poly.as_ref().map_or(Value::Null, coeffs));
    m.insert("R_display".into(), json!(r.r_poly.as_ref().map(|p| p.to_string())));
    m.insert("d1".into(), int(r.d1));
    m.insert("d2".into(), int(r.d2));
    m.insert("V".into(), obj(poly_fields(&r.v_poly)));
    m.insert("W".into(), obj(poly_fields(&r.w_poly)));
    m.insert("E".into(), obj(poly_fields(&r.e_poly)));
    m.insert("threshold_q0".into(), int(r.threshold_q0));
    m
}

fn piece_line(r: &RegularityReport) -> String {
    let r_poly = r.r_poly.as_ref().map_or("-".into(), IntPolynomial::to_string);
    let case = r.case.map_or("-".into(), |c| c.to_string());
    format!("  {:<8} {case:<7} |E| = {}  R = {r_poly}  (d1 = {}, d2 = {})", r.label, r.e_poly, r.d1, r.d2)
}

pub fn regularity(path: &Path, pattern: Option<&str>, split: bool) -> Result<Report, Failure> {
    let l = Loaded::new(path)?;
    let graph = l.graph()?;
    let pattern = l.pattern(pattern)?;
    let r = if split {
        regularity_split(&l.engine, &graph, pattern.as_ref())?
    } else {
        regularity_analyze(&l.engine, &graph, pattern.as_ref())?
    };

    let mut m = l.header("regularity");
    m.extend(piece_fields(&r));
    let mut t = l.text();
    t.row("|V|", &r.v_poly).row("|W|", &r.w_poly).row("|E|", &r.e_poly);
    if let (Some(case), Some(rp)) = (r.case, &r.r_poly) {
        t.row("case", case).row("R(q)", rp);
    }
    t.row("valid for", format!("q >= {}", r.threshold_q0));
    if split {
        m.insert("pieces".into(), Value::Array(r.leaves().into_iter().map(|p| obj(piece_fields(p))).collect()));
        t.line("pieces:");
        for p in r.leaves() {
            t.line(piece_line(p));
        }
        let rest: Vec<Value> = r
            .remainders
            .iter()
            .map(|(label, f, p)| {
                let mut m = poly_fields(p);
                m.insert("label".into(), json!(label));
                m.insert("formula".into(), json!(f.to_string()));
                obj(m)
            })
            .collect();
        for (label, f, p) in &r.remainders {
            t.line(format!("  {label:<8} lower rank: {f}  ({p})"));
        }
        m.insert("remainders".into(), Value::Array(rest));
    }
    Ok(Report {
        json: obj(m),
        text: t.finish(),
        mismatch: false,
    })
}

struct Check {
    entry: Value,
    line: String,
    tested: bool,
    matched: bool,
}

fn skipped(q: u64, q0: u64) -> Check {
    Check {
        entry: json!({ "q": q, "skipped": format!("below q0 = {q0}") }),
        line: format!("  q = {q:<6} skipped (below q0 = {q0})"),
        tested: false,
        matched: true,
    }
}

fn count_check(q: u64, label: Option<&str>, expected: BigInt, actual: u64) -> Check {
    let matched = expected == BigInt::from(actual);
    let mut entry = Map::new();
    entry.insert("q".into(), int(q));
    if let Some(label) = label {
        entry.insert("set".into(), json!(label));
    }
    entry.insert("expected".into(), int(&expected));
    entry.insert("actual".into(), int(actual));
    entry.insert("match".into(), json!(matched));
    let tag = label.map(|s| format!("{s} ")).unwrap_or_default();
    Check {
        entry: obj(entry),
        line: format!(
            "  q = {q:<6} {tag}expected {expected:<10} actual {actual:<10} {}",
            if matched { "ok" } else { "MISMATCH" }
        ),
        tested: true,
        matched,
    }
}

pub fn verify(path: &Path, pattern: Option<&str>, sizes: &[u64], seed: u64, trials: usize) -> Result<Report, Failure> {
    let l = Loaded::new(path)?;
    let pattern = l.pattern(pattern)?;
    let budget = l.budget();
    let theory = l.doc.theory;
    let mut m = l.header("verify");
    let mut t = l.text();
    let mut checks = Vec::new();

    if l.doc.main.is_none() && l.doc.section("E").is_some() {
        let graph = l.graph()?;
        let report = match regularity_analyze(&l.engine, &graph, pattern.as_ref()) {
            Err(Error::Rejected(_)) => regularity_split(&l.engine, &graph, pattern.as_ref())?,
            other => other?,
        };
        let all = Formula::and(vec![graph.v.clone(), graph.w.clone(), graph.e.clone()]);
        let resolved = l.engine.resolve_pattern(&all, pattern.as_ref())?;
        m.insert("pieces".into(), Value::Array(report.leaves().into_iter().map(|p| obj(piece_fields(p))).collect()));
        t.row("graph", format!("{} piece(s)", report.leaves().len()));
        for &q in sizes {
            if q < report.threshold_q0 {
                checks.push(skipped(q, report.threshold_q0));
                continue;
            }
            let model = build_model(theory, q, &resolved, seed)?;
            let summary = regularity_verify(&model, &report, trials, seed, budget)?;
            for p in &summary.pairs {
                let matched = p.passed();
                checks.push(Check {
                    entry: json!({
                        "q": q,
                        "piece": p.label,
                        "case": p.case.to_string(),
                        "expected": int(&p.expected_edges),
                        "actual": int(p.actual_edges),
                        "match": matched,
                        "pairs_checked": int(p.pairs_checked),
                        "exhaustive": p.exhaustive,
                        "worst_margin": int(p.worst_margin),
                        "violations": int(p.violations),
                    }),
                    line: format!(
                        "  q = {q:<6} {:<8} edges expected {} actual {}, {} subset pairs{}, worst margin {}, {} violation(s)  {}",
                        p.label,
                        p.expected_edges,
                        p.actual_edges,
                        p.pairs_checked,
                        if p.exhaustive { " (all)" } else { "" },
                        p.worst_margin,
                        p.violations,
                        if matched { "ok" } else { "MISMATCH" }
                    ),
                    tested: true,
                    matched,
                });
            }
        }
    } else if l.doc.main.is_none() || l.doc.section("PSI").is_some() {
        let (input, xs, ys) = l.correspondence()?;
        let r = unimodularity_check(&l.engine, xs, ys, &input.formula, pattern.as_ref())?;
        let resolved = l.engine.resolve_pattern(&input.formula, pattern.as_ref())?;
        let frame: Vec<Symbol> = xs.iter().chain(ys).cloned().collect();
        let project = |tuple: &[Symbol]| tuple.iter().rev().fold(r.chi.clone(), |f, s| Formula::exists(s.clone(), f));
        let sets = [
            ("Z", frame.as_slice(), r.chi.clone(), &r.z.poly),
            ("X", xs, project(ys), &r.x.poly),
            ("Y", ys, project(xs), &r.y.poly),
        ];
        t.row("fiber sizes", format!("k = {}, ell = {}", r.k, r.ell));
        for &q in sizes {
            if q < r.threshold_q0 {
                checks.push(skipped(q, r.threshold_q0));
                continue;
            }
            let model = build_model(theory, q, &resolved, seed)?;
            for (label, vars, f, poly) in &sets {
                let actual = brute_count(&model, vars, f, budget)?;
                checks.push(count_check(q, Some(label), poly.eval_u64(q), actual));
            }
        }
    } else {
        let input = l.main()?;
        let vars = input.variables();
        let r = l.engine.count(&vars, &input.formula, pattern.as_ref())?;
        let resolved = l.engine.resolve_pattern(&input.formula, pattern.as_ref())?;
        m.insert("formula".into(), json!(input.formula.to_string()));
        m.extend(count_fields(&r));
        t.row("formula", &input.formula).row("P(q)", &r.poly);
        for &q in sizes {
            if q < r.threshold_q0 {
                checks.push(skipped(q, r.threshold_q0));
                continue;
            }
            let model = build_model(theory, q, &resolved, seed)?;
            let actual = brute_count(&model, &vars, &input.formula, budget)?;
            checks.push(count_check(q, None, r.poly.eval_u64(q), actual));
        }
    }

    let mismatch = checks.iter().any(|c| c.tested && !c.matched);
    let tested = checks.iter().filter(|c| c.tested).count();
    t.row("oracle", if mismatch { "MISMATCH" } else if tested == 0 { "nothing tested" } else { "all match" });
    for c in &checks {
        t.line(&c.line);
    }
    m.insert("oracle".into(), Value::Array(checks.into_iter().map(|c| c.entry).collect()));
    Ok(Report {
        json: obj(m),
        text: t.finish(),
        mismatch,
    })
}

pub fn decompose(path: &Path, pattern: Option<&str>) -> Result<Report, Failure> {
    let l = Loaded::new(path)?;
    let input = l.main()?;
    let pattern = l.pattern(pattern)?;
    let vars = input.variables();
    let resolved = l.engine.resolve_pattern(&input.formula, pattern.as_ref())?;
    let (cells, threshold) = l.engine.cells(&vars, &input.formula, &resolved)?;
    let r = l.engine.count(&vars, &input.formula, Some(&resolved))?;

    let mut m = l.header("decompose");
    m.insert("formula".into(), json!(input.formula.to_string()));
    m.insert("pattern".into(), json!(resolved.to_string()));
    m.extend(count_fields(&r));
    m.insert("elimination_threshold".into(), int(threshold));
    let mut t = l.text();
    t.row("formula", &input.formula)
        .row("pattern", describe(&resolved))
        .count(&r)
        .row("cells", cells.len());
    let mut list = Vec::new();
    for c in &cells {
        let mut cm = poly_fields(&c.poly);
        cm.insert("formula".into(), json!(c.to_formula().to_string()));
        cm.insert("rank".into(), int(c.rank()));
        list.push(obj(cm));
        t.line(format!("  [{}]  {}", c.poly, c.to_formula()));
    }
    m.insert("cells".into(), Value::Array(list));
    Ok(Report {
        json: obj(m),
        text: t.finish(),
        mismatch: false,
    })
}
