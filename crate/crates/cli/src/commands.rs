use num_bigint::BigInt;
use serde_json::{json, Value};

use toricoh::chow::{build_chow, chern_pair, riemann_roch_chi, splitting_candidates, ChowElement, ChowRing};
use toricoh::cohomology::{
    picard_presentation, prop43_divisor, search_h1, CohomologyEngine, CohomologyTable,
    DivisorVector, DEFAULT_MAX_RAYS,
};
use toricoh::fan::{build_del_pezzo_fan, build_projective_fan, Fan, RaySet};
use toricoh::sections::{adjudicate_h1, is_nef, wall_curves};
use toricoh::support::{cycle_criterion, reduced_homology, support_complex, Coefficients, SignPattern};

use crate::report::Report;
use crate::{CliError, CoefficientArg, Command, DivisorArgs, FanArgs};

pub const MAX_RAYS_ENV: &str = "TORICOH_MAX_RAYS";

pub fn name(command: &Command) -> &'static str {
    match command {
        Command::Info { .. } => "info",
        Command::Validate { .. } => "validate",
        Command::Symmetry { .. } => "symmetry",
        Command::Cohomology { .. } => "cohomology",
        Command::Ext { .. } => "ext",
        Command::SearchH1 { .. } => "search-h1",
        Command::PatternHomology { .. } => "pattern-homology",
        Command::CycleCheck { .. } => "cycle-check",
        Command::ChowMult { .. } => "chow-mult",
        Command::ChowSplit { .. } => "chow-split",
        Command::Prop43 { .. } => "prop43",
        Command::RrChi { .. } => "rr-chi",
    }
}

/// Runs a command, filling in the report; returns the exit code.
pub fn run(command: &Command, report: &mut Report) -> Result<u8, CliError> {
    match command {
        Command::Info { fan } => {
            let loaded = load(fan, report)?;
            let f = &loaded.fan;
            let cones: Vec<usize> = (0..=f.dimension())
                .map(|m| f.cones_of_dimension(m).map_or(0, <[RaySet]>::len))
                .collect();
            let picard = picard_presentation(f).ok().map(|p| p.rank);
            report.result = json!({
                "dimension": f.dimension(),
                "ray_count": f.ray_count(),
                "max_cone_count": f.max_cones().len(),
                "cones_per_dimension": cones,
                "verified": loaded.verified,
                "picard_rank": picard,
                "is_del_pezzo": f.is_del_pezzo(),
            });
            Ok(0)
        }
        Command::Validate { fan } => {
            let loaded = load(
                &FanArgs {
                    fan: fan.fan.clone(),
                    allow_unverified: true,
                },
                report,
            )?;
            let v = loaded.fan.validate();
            report.result = json!({
                "smooth": v.smooth,
                "complete": v.complete,
                "valid": v.is_valid(),
                "diagnostics": v.diagnostics,
            });
            Ok(if v.is_valid() { 0 } else { 2 })
        }
        Command::Symmetry { fan } => {
            let loaded = load(fan, report)?;
            let s = loaded.fan.symmetry_report();
            report.result = json!({
                "antipodal_pairs": s.pairs,
                "order": s.order,
                "hypothesis_met": s.hypothesis_met,
            });
            Ok(0)
        }
        Command::Cohomology { fan, divisor } => {
            let loaded = load(fan, report)?;
            let engine = engine(&loaded)?;
            let d = parse_divisor(divisor, loaded.fan.ray_count())?;
            let table = engine.cohomology(&d).map_err(domain)?;
            let class = picard_presentation(&loaded.fan).map_err(domain)?.class_of(&d).map_err(domain)?;
            report.result = json!({
                "divisor": ints(d.coefficients()),
                "class": ints(class.coordinates()),
                "h": table.h,
                "euler": table.euler,
                "breakdown": breakdown(&table),
            });
            Ok(0)
        }
        Command::Ext { fan, l1, l2 } => {
            let loaded = load(fan, report)?;
            let engine = engine(&loaded)?;
            let rays = loaded.fan.ray_count();
            let (a, b) = (vector(l1, rays, "--l1")?, vector(l2, rays, "--l2")?);
            let h1 = engine.ext_dimension(&a, &b).map_err(domain)?;
            report.result = json!({
                "l1": ints(a.coefficients()),
                "l2": ints(b.coefficients()),
                "difference": ints((&a - &b).coefficients()),
                "h1": h1,
                "split_only": h1 == 0,
            });
            Ok(0)
        }
        Command::SearchH1 { fan, bound } => {
            let loaded = load(fan, report)?;
            let engine = engine(&loaded)?;
            let found = search_h1(&engine, *bound).map_err(domain)?;
            let classes: Vec<Value> = found
                .iter()
                .map(|c| {
                    json!({
                        "class": ints(c.class.coordinates()),
                        "representative": ints(c.representative.coefficients()),
                        "h1": c.h1,
                    })
                })
                .collect();
            report.result = json!({
                "box": bound,
                "class_count": classes.len(),
                "classes": classes,
            });
            Ok(0)
        }
        Command::PatternHomology {
            fan,
            pattern_neg,
            coefficients,
        } => {
            let loaded = load(fan, report)?;
            let pattern = parse_pattern(pattern_neg, loaded.fan.ray_count())?;
            let c = support_complex(&loaded.fan, &pattern);
            let coeffs = match coefficients {
                CoefficientArg::Rationals => Coefficients::Rationals,
                CoefficientArg::Integers => Coefficients::Integers,
                CoefficientArg::Mod2 => Coefficients::Mod2,
            };
            let h = reduced_homology(&c, coeffs);
            let groups: Vec<Value> = h
                .groups
                .iter()
                .map(|g| json!({"degree": g.degree, "rank": g.rank, "torsion": ints(&g.torsion)}))
                .collect();
            report.result = json!({
                "pattern": pattern.to_string(),
                "negative": pattern.negative().one_based(),
                "facets": sets(c.facets()),
                "coefficients": coeffs.name(),
                "groups": groups,
                "euler_characteristic": h.euler_characteristic(),
                "acyclic": h.is_acyclic(),
            });
            Ok(0)
        }
        Command::CycleCheck {
            fan,
            pattern_neg,
            dim,
        } => {
            let loaded = load(fan, report)?;
            let pattern = parse_pattern(pattern_neg, loaded.fan.ray_count())?;
            let c = support_complex(&loaded.fan, &pattern);
            let check = cycle_criterion(&c, *dim).map_err(domain)?;
            let incidence: Vec<Value> = check
                .incidence
                .iter()
                .map(|(face, k)| json!({"face": face.to_string(), "count": k}))
                .collect();
            let q = *dim as isize;
            report.result = json!({
                "pattern": pattern.to_string(),
                "negative": pattern.negative().one_based(),
                "dimension": dim,
                "holds": check.holds,
                "incidence": incidence,
                "mod2_rank": reduced_homology(&c, Coefficients::Mod2).rank(q),
                "rational_rank": reduced_homology(&c, Coefficients::Rationals).rank(q),
            });
            Ok(0)
        }
        Command::ChowMult { fan, a, b } => {
            let loaded = load(fan, report)?;
            let ring = ring(&loaded)?;
            let rays = loaded.fan.ray_count();
            let (x, y) = (vector(a, rays, "--a")?, vector(b, rays, "--b")?);
            let ex = ring.divisor(&x).map_err(domain)?;
            let ey = ring.divisor(&y).map_err(domain)?;
            let product = ring.multiply(&ex, &ey).map_err(domain)?;
            report.result = json!({
                "a": ints(x.coefficients()),
                "b": ints(y.coefficients()),
                "ranks": ring.ranks(),
                "basis": basis(&ring),
                "product": element(&product),
                "intersection_number": (ring.dimension() == 2).then(|| product.part(2)[0].to_string()),
            });
            Ok(0)
        }
        Command::ChowSplit { fan, d1, bound } => {
            let loaded = load(fan, report)?;
            let ring = ring(&loaded)?;
            let rays = loaded.fan.ray_count();
            let n = loaded.fan.dimension();
            let d = match d1 {
                Some(s) => vector(s, rays, "--d1")?,
                None => prop43_divisor(&loaded.fan, 1, &[1]).map_err(domain)?,
            };
            let class = ring.picard().class_of(&d).map_err(domain)?;
            let (c1, c2) = chern_pair(&ring, &class, &-&class).map_err(domain)?;
            let found = splitting_candidates(&ring, &class, *bound).map_err(domain)?;
            let plus = found.contains(&class);
            let minus = found.contains(&-&class);
            let exact = found.len() == if class.is_zero() { 1 } else { 2 } && plus && minus;
            report.result = json!({
                "d1": ints(d.coefficients()),
                "d1_class": ints(class.coordinates()),
                "box": bound,
                "c1": element(&c1),
                "c2": element(&c2),
                "d1_squared": (n == 2).then(|| {
                    let e = ring.class(&class).expect("class of d1");
                    ring.integrate(&ring.multiply(&e, &e).expect("same ring")).expect("same ring").to_string()
                }),
                "candidate_count": found.len(),
                "candidates": found.iter().map(|c| ints(c.coordinates())).collect::<Vec<_>>(),
                "contains_d1": plus,
                "contains_minus_d1": minus,
                "equals_plus_minus_d1": exact,
            });
            Ok(0)
        }
        Command::Prop43 { n, i, coeff, coeffs } => {
            let fan = build_del_pezzo_fan(*n).map_err(domain)?;
            let mut loaded = Loaded {
                fan,
                verified: true,
            };
            loaded.verified = loaded.fan.validate().is_valid();
            report.fan = summary(&loaded, &format!("delpezzo:{n}"));
            let values: Vec<i64> = match (coeff, coeffs) {
                (Some(c), _) => vec![*c],
                (None, Some(list)) => parse_list(list, "--coeffs")?,
                (None, None) => vec![1],
            };
            let engine = engine(&loaded)?;
            let d = prop43_divisor(&loaded.fan, *i, &values).map_err(domain)?;
            let table = engine.cohomology(&d).map_err(domain)?;
            let routes = adjudicate_h1(&engine, &d).map_err(domain)?;
            let nef = is_nef(&wall_curves(&loaded.fan).map_err(domain)?, &d);
            if !routes.consistent() {
                report.warn("the three h^1 routes disagree");
            }
            report.result = json!({
                "n": n,
                "i": i,
                "divisor": ints(d.coefficients()),
                "h": table.h,
                "h1": table.h(1),
                "euler": table.euler,
                "nef": nef,
                "breakdown": breakdown(&table),
                "routes": {
                    "direct": routes.direct,
                    "serre": routes.serre,
                    "euler": routes.euler_route,
                    "chi_from_sections": routes.chi,
                    "h0_polytope": routes.h0_polytope,
                    "hn_polytope": routes.hn_polytope,
                },
                "consistent": routes.consistent(),
                "nonvanishing_claim_holds": table.h(1) > 0,
            });
            Ok(if routes.consistent() { 0 } else { 2 })
        }
        Command::RrChi { fan, divisor } => {
            let loaded = load(fan, report)?;
            let ring = ring(&loaded)?;
            let engine = engine(&loaded)?;
            let d = parse_divisor(divisor, loaded.fan.ray_count())?;
            let class = ring.picard().class_of(&d).map_err(domain)?;
            let chi = riemann_roch_chi(&ring, &class).map_err(domain)?;
            let euler = engine.cohomology(&d).map_err(domain)?.euler;
            report.result = json!({
                "divisor": ints(d.coefficients()),
                "class": ints(class.coordinates()),
                "chi_riemann_roch": chi.to_string(),
                "euler_engine": euler,
                "agree": chi == BigInt::from(euler),
            });
            Ok(0)
        }
    }
}

struct Loaded {
    fan: Fan,
    verified: bool,
}

fn load(args: &FanArgs, report: &mut Report) -> Result<Loaded, CliError> {
    let spec = args.fan.as_str();
    let built = if let Some(n) = spec.strip_prefix("pn:") {
        build_projective_fan(builder_size(n, spec)?)
    } else if let Some(n) = spec.strip_prefix("delpezzo:") {
        build_del_pezzo_fan(builder_size(n, spec)?)
    } else {
        let text = std::fs::read_to_string(spec)
            .map_err(|e| CliError::Domain(format!("cannot read fan file {spec}: {e}")))?;
        Fan::from_json_str(&text)
    };
    let fan = built.map_err(|e| CliError::Domain(format!("{spec}: {e}")))?;
    let validation = fan.validate();
    let verified = validation.is_valid();
    let loaded = Loaded { fan, verified };
    report.fan = summary(&loaded, spec);
    if !verified {
        if !args.allow_unverified {
            return Err(CliError::Domain(format!(
                "fan {spec} failed validation: {}",
                validation.diagnostics.join("; ")
            )));
        }
        report.warn("fan is unverified; cohomology commands are disabled");
    }
    Ok(loaded)
}

fn builder_size(n: &str, spec: &str) -> Result<usize, CliError> {
    n.parse()
        .map_err(|_| CliError::Domain(format!("unsupported builder {spec}")))
}

fn summary(loaded: &Loaded, source: &str) -> Value {
    let f = &loaded.fan;
    json!({
        "source": source,
        "dimension": f.dimension(),
        "ray_count": f.ray_count(),
        "rays": f.rays(),
        "max_cones": f.max_cones().iter().map(|c| c.one_based()).collect::<Vec<_>>(),
        "verified": loaded.verified,
    })
}

fn engine(loaded: &Loaded) -> Result<CohomologyEngine, CliError> {
    if !loaded.verified {
        return Err(CliError::Domain(
            "cohomology commands need a validated fan".into(),
        ));
    }
    let cap = match std::env::var(MAX_RAYS_ENV) {
        Ok(v) => v
            .parse()
            .map_err(|_| CliError::Domain(format!("{MAX_RAYS_ENV}={v} is not a count")))?,
        Err(_) => DEFAULT_MAX_RAYS,
    };
    CohomologyEngine::with_ray_cap(&loaded.fan, cap).map_err(domain)
}

fn ring(loaded: &Loaded) -> Result<ChowRing, CliError> {
    if !loaded.verified {
        return Err(CliError::Domain("Chow ring needs a validated fan".into()));
    }
    build_chow(&loaded.fan).map_err(domain)
}

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

fn parse_list(s: &str, flag: &str) -> Result<Vec<i64>, CliError> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{flag}: {t:?} is not an integer")))
        })
        .collect()
}

fn vector(s: &str, rays: usize, flag: &str) -> Result<DivisorVector, CliError> {
    let v = parse_list(s, flag)?;
    if v.len() != rays {
        return Err(CliError::Domain(format!(
            "{flag} has {} entries but the fan has {rays} rays",
            v.len()
        )));
    }
    Ok(DivisorVector::from_i64(&v))
}

fn parse_divisor(args: &DivisorArgs, rays: usize) -> Result<DivisorVector, CliError> {
    match (&args.divisor, &args.named) {
        (Some(s), _) => vector(s, rays, "--divisor"),
        (None, Some(named)) => {
            let mut v = vec![0i64; rays];
            for term in named.split(',').filter(|t| !t.trim().is_empty()) {
                let bad = || CliError::Usage(format!("--named: {term:?} is not of the form Ei=k"));
                let (name, value) = term.trim().split_once('=').ok_or_else(bad)?;
                let index: usize = name
                    .strip_prefix('E')
                    .and_then(|i| i.parse().ok())
                    .ok_or_else(bad)?;
                let value: i64 = value.parse().map_err(|_| bad())?;
                if index == 0 || index > rays {
                    return Err(CliError::Domain(format!("E{index} is outside E1..E{rays}")));
                }
                v[index - 1] += value;
            }
            Ok(DivisorVector::from_i64(&v))
        }
        (None, None) => Err(CliError::Usage("one of --divisor or --named is required".into())),
    }
}

fn parse_pattern(s: &str, rays: usize) -> Result<SignPattern, CliError> {
    let mut negative = RaySet::EMPTY;
    for i in parse_list(s, "--pattern-neg")? {
        if i < 1 || i as usize > rays {
            return Err(CliError::Domain(format!("ray {i} is outside 1..={rays}")));
        }
        negative = negative.with(i as usize - 1);
    }
    SignPattern::from_negative(rays, negative).map_err(domain)
}

fn ints(v: &[BigInt]) -> Vec<Value> {
    // machine-sized values stay numbers; anything larger is carried as a string
    v.iter()
        .map(|x| i64::try_from(x).map_or_else(|_| Value::String(x.to_string()), Value::from))
        .collect()
}

fn sets(v: &[RaySet]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn breakdown(table: &CohomologyTable) -> Vec<Value> {
    table
        .breakdown
        .iter()
        .map(|c| {
            json!({
                "pattern": c.pattern.to_string(),
                "homology_degree": c.homology_degree,
                "cohomology_degree": c.cohomology_degree,
                "rank": c.rank,
                "points": c.points,
            })
        })
        .collect()
}

fn basis(ring: &ChowRing) -> Value {
    let map: serde_json::Map<String, Value> = (0..=ring.dimension())
        .map(|k| (format!("degree_{k}"), json!(sets(ring.basis(k)))))
        .collect();
    Value::Object(map)
}

fn element(e: &ChowElement) -> Value {
    let map: serde_json::Map<String, Value> = e
        .parts()
        .iter()
        .enumerate()
        .map(|(k, p)| (format!("degree_{k}"), json!(ints(p))))
        .collect();
    Value::Object(map)
}
