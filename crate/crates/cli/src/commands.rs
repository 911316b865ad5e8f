//! One function per subcommand; each returns an [`Output`] to be formatted.

use lambda_forge::chow::{self, RelativeMap};
use lambda_forge::lambda_k::verify_special_axioms;
use lambda_forge::operations::{
    additive_to_gamma, classify_multiplicative_endo, multiplicative_class, star_compose, EndoClassification,
};
use lambda_forge::scalar::{rat, rat_to_string};
use lambda_forge::suite;
use lambda_forge::symmetric::{chi_poly, universal_plethysm_poly, universal_product_poly};
use lambda_forge::towers::{
    analyze_tower, omega_lift, sigma, sigma_inverse, stable_compose, stable_compose_matches_star, tower_lift_to_depth,
    OmegaLift, StableContext, TowerKind, TowerLift,
};
use lambda_forge::{
    AdditiveOpSeries, Error, GroupDescriptor, Rat, Report, Result, ScalarDomain, StableElement, TowerDescriptor,
};
use serde_json::{json, to_value, Value};

use crate::args::{
    parse_element, parse_range, parse_rats, parse_series, parse_space, Command, TowerKindArg, UniversalKind, Verify,
};
use crate::output::Output;

pub fn run(cmd: &Command, seed: u64) -> Result<Output> {
    match cmd {
        Command::ChiTable { n } => chi_table(*n, seed),
        Command::UniversalPoly { kind, n, m } => universal(*kind, *n, *m, seed),
        Command::StarCompose { f, g, truncation } => star(f, g, *truncation, seed),
        Command::GammaExpand { f, weight, multiplicative } => gamma_expand(f, *weight, *multiplicative, seed),
        Command::Sigma { a, truncation, inverse } => sigma_cmd(a, *truncation, *inverse, seed),
        Command::TowerAnalyze { kind, group, shift, truncation, depth } => {
            tower(*kind, group, *shift, *truncation, *depth, seed)
        }
        Command::OmegaLift { f, truncation, prime, depth } => lift(f, *truncation, *prime, *depth, seed),
        Command::StableProjectors { n, k, depth, truncation } => projectors(*n, *k, *depth, *truncation, seed),
        Command::ClassifyEndo { f, truncation } => classify(f, *truncation, seed),
        Command::Verify(v) => verify(v, seed),
        Command::SuiteAll { only } => suite_all(only, seed),
    }
}

fn value<T: serde::Serialize>(x: &T) -> Value {
    to_value(x).expect("serializable")
}

fn chi_table(n: usize, seed: u64) -> Result<Output> {
    if n == 0 {
        return Err(Error::InvalidArgument("--n must be at least 1".into()));
    }
    let polys: Vec<(usize, String, Value)> = (1..=n)
        .map(|i| chi_poly(i).map(|p| (i, p.to_string(), value(&p))))
        .collect::<Result<_>>()?;
    let result = json!(polys.iter().map(|(i, s, p)| json!({"n": i, "display": s, "poly": p})).collect::<Vec<_>>());
    let mut o = Output::new("chi-table", seed, result);
    for (i, s, _) in &polys {
        o.line(format!("chi_{i} = {s}"));
    }
    o.csv(&["n", "poly"], polys.iter().map(|(i, s, _)| vec![i.to_string(), s.clone()]).collect());
    Ok(o)
}

fn universal(kind: UniversalKind, n: usize, m: usize, seed: u64) -> Result<Output> {
    let (name, p) = match kind {
        UniversalKind::Product => (format!("P_{n}"), universal_product_poly(n)?),
        UniversalKind::Plethysm => (format!("P_{{{m},{n}}}"), universal_plethysm_poly(m, n)?),
    };
    let mut o = Output::new("universal-poly", seed, json!({"name": name, "display": p.to_string(), "poly": value(&p)}));
    o.line(format!("{name} = {p}"));
    Ok(o)
}

fn series_lines(o: &mut Output, name: &str, coeffs: &[String]) {
    o.line(format!("{name} = [{}]", coeffs.join(", ")));
}

fn star(f: &str, g: &str, n: usize, seed: u64) -> Result<Output> {
    let f = AdditiveOpSeries::new(parse_series(f, n, None)?)?;
    let g = AdditiveOpSeries::new(parse_series(g, n, None)?)?;
    let h = star_compose(&f, &g)?;
    let coeffs = h.series().to_strings();
    let mut o = Output::new("star-compose", seed, json!({"f": value(&f), "g": value(&g), "composite": value(&h)}));
    o.line(format!("truncation {n}"));
    series_lines(&mut o, "f * g", &coeffs);
    o.csv(&["index", "coefficient"], coeffs.iter().enumerate().map(|(i, c)| vec![i.to_string(), c.clone()]).collect());
    Ok(o)
}

fn gamma_expand(f: &str, w: u32, multiplicative: bool, seed: u64) -> Result<Output> {
    let s = parse_series(f, w as usize, None)?;
    let g = if multiplicative {
        multiplicative_class(&s, w)?
    } else {
        additive_to_gamma(&AdditiveOpSeries::new(s.clone())?, w)?
    };
    let mut o = Output::new(
        "gamma-expand",
        seed,
        json!({"series": value(&s), "multiplicative": multiplicative, "gamma": g.to_json()}),
    );
    o.line(format!("weight {w}"));
    o.line(format!("{g}"));
    Ok(o)
}

fn sigma_cmd(a: &str, n: usize, inverse: bool, seed: u64) -> Result<Output> {
    let mut o;
    if inverse {
        let f = parse_series(a, n, None)?;
        let seq: Vec<String> = sigma_inverse(&f)?.iter().map(rat_to_string).collect();
        o = Output::new("sigma", seed, json!({"series": value(&f), "sequence": seq}));
        o.line(format!("a = [{}]", seq.join(", ")));
        o.csv(&["n", "a_n"], seq.iter().enumerate().map(|(i, c)| vec![i.to_string(), c.clone()]).collect());
    } else {
        let seq = parse_rats(a)?;
        let f = sigma(&seq, n)?;
        let coeffs = f.to_strings();
        let shown: Vec<String> = seq.iter().map(rat_to_string).collect();
        o = Output::new("sigma", seed, json!({"sequence": shown, "series": value(&f)}));
        series_lines(&mut o, "sigma(a)", &coeffs);
        o.csv(&["index", "coefficient"], coeffs.iter().enumerate().map(|(i, c)| vec![i.to_string(), c.clone()]).collect());
    }
    o.line(format!("truncation {n}"));
    Ok(o)
}

fn tower(kind: TowerKindArg, groups: &[String], shift: Option<u32>, n: usize, depth: usize, seed: u64) -> Result<Output> {
    let one = |g: GroupDescriptor| match kind {
        TowerKindArg::Omega => TowerKind::Omega { group: g },
        TowerKindArg::Factorial => TowerKind::Factorial { group: g },
    };
    let parsed: Vec<GroupDescriptor> = groups.iter().map(|g| g.parse()).collect::<Result<_>>()?;
    let mut k = if parsed.len() == 1 {
        one(parsed[0].clone())
    } else {
        TowerKind::Product { factors: parsed.into_iter().map(one).collect() }
    };
    if let Some(j) = shift {
        k = TowerKind::Shift { j, inner: Box::new(k) };
    }
    let desc = TowerDescriptor { seed, ..TowerDescriptor::new(k, n, depth) };
    let rep = analyze_tower(&desc)?;
    let mut o = Output::new("tower-analyze", seed, value(&rep));
    o.line(format!("tower          {}", rep.tower));
    o.line(format!("Mittag-Leffler {}", compact(&value(&rep.mittag_leffler))));
    o.line(format!("lim            {}", compact(&value(&rep.lim))));
    o.line(format!("R^1 lim        {}", compact(&value(&rep.r1lim))));
    o.line(format!("certified      {}", rep.certified));
    for e in &rep.evidence {
        o.line(format!("  {e}"));
    }
    Ok(o)
}

fn compact(v: &Value) -> String {
    serde_json::to_string(v).expect("json")
}

fn lift(f: &str, n: usize, prime: Option<u64>, depth: usize, seed: u64) -> Result<Output> {
    let f = parse_series(f, n, prime)?;
    let mut o;
    if depth > 1 {
        if prime.is_some() {
            return Err(Error::InvalidArgument("--depth above 1 is for integral towers; drop --prime".into()));
        }
        let f = f.with_domain(ScalarDomain::Integers)?;
        let res = tower_lift_to_depth(&f, depth)?;
        o = Output::new("omega-lift", seed, value(&res));
        match &res {
            TowerLift::Chain(c) => {
                o.line(format!("chain to depth {depth}, constants [{}]", c.constants.join(", ")));
                for (i, l) in c.levels.iter().enumerate() {
                    series_lines(&mut o, &format!("g_{i}"), &l.to_strings());
                }
            }
            TowerLift::Obstruction { depth, index, detail } => {
                o.line(format!("obstruction at depth {depth}, coefficient {index}: {detail}"));
            }
        }
    } else {
        let res = omega_lift(&f)?;
        o = Output::new("omega-lift", seed, value(&res));
        match &res {
            OmegaLift::Lift { particular, free } => {
                series_lines(&mut o, "g", &particular.to_strings());
                o.line(format!("free coefficients {free:?}"));
            }
            OmegaLift::Obstruction { index, detail } => {
                o.line(format!("obstruction at coefficient {index}: {detail}"));
            }
        }
    }
    Ok(o)
}

fn projectors(n: i64, k: i64, levels: usize, truncation: usize, seed: u64) -> Result<Output> {
    let ctx = StableContext { levels, truncation };
    let (lo, hi) = (-(levels as i64), truncation as i64);
    if n < lo || n > hi {
        return Err(Error::InvalidArgument(format!("n = {n} outside the context range [{lo}, {hi}]")));
    }
    let pi = StableElement::pi(ctx, n);
    let psi = StableElement::psi(ctx, k)?;
    let id = StableElement::identity(ctx);
    let kn = rat(k).pow(n as i32);
    let mut checks: Vec<(String, bool)> = vec![];
    checks.push(("pi_n o pi_n = pi_n".into(), stable_compose(&pi, &pi)? == pi));
    let zero = StableElement::from_fn(ctx, |_| Rat::from_integer(0.into()));
    let orth = (lo..=hi)
        .filter(|m| *m != n)
        .map(|m| stable_compose(&pi, &StableElement::pi(ctx, m)).map(|c| c == zero))
        .collect::<Result<Vec<_>>>()?;
    checks.push(("pi_n o pi_m = 0 for m != n".into(), orth.iter().all(|b| *b)));
    checks.push((format!("Psi^{k} o pi_n = {k}^n pi_n"), stable_compose(&psi, &pi)? == pi.scale(&kn)));
    checks.push(("levelwise star composition agrees".into(), stable_compose_matches_star(&psi, &pi)?));
    checks.push(("pi_n is compatible".into(), pi.check_compatibility()?));
    let phi_row = if k.abs() >= 2 {
        let phi = StableElement::phi(ctx, n, k)?;
        let shifted = psi.sub(&id.scale(&kn))?;
        checks.push((
            format!("phi_{{n,{k}}} o (Psi^{k} - {k}^n) = id - pi_n"),
            stable_compose(&phi, &shifted)? == id.sub(&pi)?,
        ));
        Some(phi)
    } else {
        None
    };
    let levels_json: Vec<Value> = (0..=levels)
        .map(|l| pi.level(l).map(|s| value(&s)))
        .collect::<Result<_>>()?;
    let vals = |x: &StableElement| -> Vec<Value> {
        x.values().into_iter().map(|(m, v)| json!([m, rat_to_string(&v)])).collect()
    };
    let checks_json: Vec<Value> = checks.iter().map(|(c, ok)| json!({"claim": c, "equal": ok})).collect();
    let result = json!({
        "context": value(&ctx),
        "n": n,
        "k": k,
        "pi_values": vals(&pi),
        "pi_levels": levels_json,
        "phi_values": phi_row.as_ref().map(vals),
        "checks": checks_json,
    });
    let mut o = Output::new("stable-projectors", seed, result);
    o.line(format!("context: levels {levels}, truncation {truncation}, n = {n}, k = {k}"));
    for l in 0..=levels.min(3) {
        series_lines(&mut o, &format!("pi_n level {l}"), &pi.level(l)?.to_strings());
    }
    if let Some(phi) = &phi_row {
        let v: Vec<String> = phi.values().into_iter().map(|(m, v)| format!("{m}:{}", rat_to_string(&v))).collect();
        o.line(format!("phi values {}", v.join(" ")));
    }
    let mut rows = vec![];
    for (c, ok) in &checks {
        o.line(format!("[{}] {c}", if *ok { "PASS" } else { "FAIL" }));
        rows.push(vec![c.clone(), ok.to_string()]);
        if !ok {
            o.fail(json!({"claim": c, "equal": false}));
        }
    }
    o.csv(&["claim", "equal"], rows);
    Ok(o)
}

fn classify(f: &str, n: usize, seed: u64) -> Result<Output> {
    let f = parse_series(f, n, None)?;
    let c = classify_multiplicative_endo(&f, n)?;
    let mut o = Output::new("classify-endo", seed, json!({"series": value(&f), "classification": value(&c)}));
    match &c {
        EndoClassification::Psi { exponent } => o.line(format!("Psi^{exponent}: f = (1+U)^{exponent}")),
        EndoClassification::NotOfPsiForm { witness } => o.line(format!(
            "not multiplicative: at {} f(U)f(V) has {} but f(U+V+UV) has {}",
            witness.monomial, witness.lhs, witness.rhs
        )),
    };
    Ok(o)
}

fn report_line(r: &Report) -> String {
    let rel = if r.equal { "=" } else { "!=" };
    format!("[{}] {}: {} {rel} {}", if r.equal { "PASS" } else { "FAIL" }, r.claim, r.lhs, r.rhs)
}

/// Shared shape of every verify command.
fn reports(cmd: &str, seed: u64, keys: &[&str], cases: Vec<(Vec<String>, Report)>) -> Output {
    let result: Vec<Value> = cases
        .iter()
        .map(|(k, r)| {
            let mut v = value(r);
            for (name, x) in keys.iter().zip(k) {
                v[*name] = json!(x);
            }
            v
        })
        .collect();
    let mut o = Output::new(cmd, seed, json!(result));
    let mut header: Vec<&str> = keys.to_vec();
    header.extend(["equal", "lhs", "rhs"]);
    let mut rows = vec![];
    for ((k, r), v) in cases.iter().zip(&result) {
        o.line(report_line(r));
        if !r.equal {
            o.fail(v.clone());
        }
        let mut row = k.clone();
        row.extend([r.equal.to_string(), r.lhs.clone(), r.rhs.clone()]);
        rows.push(row);
    }
    let total = cases.len();
    let passed = cases.iter().filter(|(_, r)| r.equal).count();
    o.line(format!("{passed}/{total} passed"));
    o.csv(&header, rows);
    o
}

fn verify(v: &Verify, seed: u64) -> Result<Output> {
    match v {
        Verify::Hrr { d, m, sweep } => {
            let cases = match sweep.d_max {
                Some(dm) => {
                    let r = sweep.m_range.as_deref().map(parse_range).transpose()?.unwrap_or((-10, 10));
                    chow::hrr_sweep(dm, r)?
                        .into_iter()
                        .map(|(d, m, rep)| (vec![d.to_string(), m.to_string()], rep))
                        .collect()
                }
                None => vec![(vec![d.to_string(), m.to_string()], chow::verify_hrr(*d, *m)?)],
            };
            Ok(reports("verify hrr", seed, &["d", "m"], cases))
        }
        Verify::Arr { d, k, m, k_set, sweep } => {
            let cases = match sweep.d_max {
                Some(dm) => {
                    let r = sweep.m_range.as_deref().map(parse_range).transpose()?.unwrap_or((-6, 6));
                    let ks = if k_set.is_empty() { vec![2, 3, 5] } else { k_set.clone() };
                    chow::arr_sweep(dm, &ks, r)?
                        .into_iter()
                        .map(|(d, k, m, rep)| (vec![d.to_string(), k.to_string(), m.to_string()], rep))
                        .collect()
                }
                None => {
                    let f = RelativeMap::to_point(*d);
                    let x = lambda_forge::SplitElement::line(&f.source, &[*m])?;
                    vec![(vec![d.to_string(), k.to_string(), m.to_string()], chow::verify_arr(&f, *k, &x)?)]
                }
            };
            Ok(reports("verify arr", seed, &["d", "k", "m"], cases))
        }
        Verify::Grr { space, x, to_point } => {
            let s = parse_space(space)?;
            let f = if *to_point {
                if s.factors() != 1 {
                    return Err(Error::InvalidArgument("--to-point needs a single projective factor".into()));
                }
                RelativeMap::to_point(s.dims[0])
            } else {
                RelativeMap::forget_last(&s)?
            };
            let x = parse_element(&s, x)?;
            let rep = chow::verify_grr(&f, &x)?;
            Ok(reports("verify grr", seed, &["space", "x"], vec![(vec![s.to_string(), x.to_string()], rep)]))
        }
        Verify::LambdaAxioms { space, x, y, d } => {
            let s = parse_space(space)?;
            let (x, y) = (parse_element(&s, x)?, parse_element(&s, y)?);
            let rep = verify_special_axioms(&x, &y, *d)?;
            let mut o = Output::new("verify lambda-axioms", seed, value(&rep));
            o.line(format!("x = {x}, y = {y} on {s}, degree {d}"));
            let mut rows = vec![];
            for c in &rep.checks {
                o.line(format!("[{}] {}", if c.passed { "PASS" } else { "FAIL" }, c.name));
                if let Some(w) = &c.witness {
                    o.line(format!("       {w}"));
                }
                if !c.passed {
                    o.fail(value(c));
                }
                rows.push(vec![c.name.clone(), c.passed.to_string(), c.witness.clone().unwrap_or_default()]);
            }
            o.csv(&["check", "passed", "witness"], rows);
            Ok(o)
        }
        Verify::OmegaChi { n, space } => {
            let s = parse_space(space)?;
            let rep = chow::verify_omega_chi(*n, &s)?;
            Ok(reports("verify omega-chi", seed, &["n", "space"], vec![(vec![n.to_string(), s.to_string()], rep)]))
        }
        Verify::AdamsEigen { space, x, k } => {
            let s = parse_space(space)?;
            let x = parse_element(&s, x)?;
            let rep = chow::verify_adams_eigen(&x, *k)?;
            Ok(reports("verify adams-eigen", seed, &["k", "x"], vec![(vec![k.to_string(), x.to_string()], rep)]))
        }
    }
}

fn suite_all(only: &[u32], seed: u64) -> Result<Output> {
    let ids: Vec<u32> = if only.is_empty() { suite::CRITERIA.iter().map(|c| c.0).collect() } else { only.to_vec() };
    let outcomes = ids
        .iter()
        .map(|id| suite::run_criterion(*id, seed).ok_or_else(|| Error::InvalidArgument(format!("no criterion {id}"))))
        .collect::<Result<Vec<_>>>()?;
    let mut o = Output::new("suite-all", seed, value(&outcomes));
    let mut rows = vec![];
    for c in &outcomes {
        o.line(c.line());
        if !c.passed || !c.within_budget() {
            o.fail(value(c));
        }
        rows.push(vec![c.id.to_string(), c.name.clone(), c.passed.to_string(), c.cases.to_string()]);
    }
    o.csv(&["id", "name", "passed", "cases"], rows);
    Ok(o)
}
