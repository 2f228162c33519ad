use std::time::Instant;

use binoc_core::binoccular::{binoccular_closure, binoccular_decomposition, socle_in};
use binoc_core::congruence::{default_bounds, essential_witnesses, Aide, CongruenceView};
use binoc_core::fiber::{Fiber, MonoidPrime};
use binoc_core::irreducible::{irreducible_closure, irreducible_decomposition};
use binoc_core::mesoprimary::{coprincipal_decomposition, Component};
use binoc_core::parse::{convert, parse_monomial, parse_polynomial, IdealFile};
use binoc_core::render::{grid_from_ideal, grid_from_view, render, RenderFormat};
use binoc_core::soccular::{
    cogenerator, finite_localizations, refinement_certificate, soccular_closure, soccular_component,
    soccular_decomposition, ComponentCongruence, DecompositionMode,
};
use binoc_core::verify::{
    binomial_irreducibility_report, check_intersection, check_mesoprimary_decomposition, irredundancy_prune, Criterion,
};
use binoc_core::{Error, Field, Ideal, Result};
use serde_json::{json, Value};

use crate::document::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Coprincipal,
    Soccular,
    Binoccular,
    Irreducible,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Coprincipal => "coprincipal",
            Mode::Soccular => "soccular",
            Mode::Binoccular => "binoccular",
            Mode::Irreducible => "irreducible",
        }
    }

    pub fn parse(s: &str) -> Option<Mode> {
        [Mode::Coprincipal, Mode::Soccular, Mode::Binoccular, Mode::Irreducible]
            .into_iter()
            .find(|m| m.as_str() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ClosureKind {
    Binoccular,
    Soccular,
    Irreducible,
}

/// Comma separated variable names; an empty string is the empty prime.
pub fn parse_prime(text: &str, names: &[String]) -> Result<MonoidPrime> {
    let mut vars = Vec::new();
    for t in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let i = names.iter().position(|n| n == t).ok_or_else(|| Error::Parse {
            line: 1,
            column: 1,
            message: format!("unknown variable '{t}'"),
        })?;
        vars.push(i);
    }
    Ok(MonoidPrime::new(vars))
}

fn prime_or_max(text: Option<&str>, names: &[String]) -> Result<MonoidPrime> {
    match text {
        Some(t) => parse_prime(t, names),
        None => Ok(MonoidPrime::maximal(names.len())),
    }
}

fn parse_ideal_strings<F: Field>(gens: &[String], names: &[String], one: &F) -> Result<Ideal<F>> {
    let polys = gens
        .iter()
        .map(|g| Ok(convert(&parse_polynomial(g, names)?, one)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Ideal::with_template(names.len(), polys, one.clone()))
}

pub struct DecomposeArgs {
    pub mode: Mode,
    pub prune: bool,
    pub rounds: usize,
    pub report: bool,
    pub jobs: usize,
}

pub fn decompose<F: Field>(file: &IdealFile, ideal: &Ideal<F>, args: &DecomposeArgs) -> Result<ResultDocument> {
    let start = Instant::now();
    let names = &file.names;
    let mut doc = ResultDocument {
        schema: SCHEMA.into(),
        tool: Tool::default(),
        input: InputEcho::new(file),
        mode: args.mode.as_str().into(),
        pruned: args.prune,
        components: vec![],
        certificate: CertificateDoc::default(),
        failures: vec![],
        skipped_primes: vec![],
        report: None,
        timing: Timing::default(),
    };
    let (components, skipped): (Vec<Component<F>>, Vec<MonoidPrime>) = match args.mode {
        Mode::Soccular => {
            let d = soccular_decomposition(ideal, DecompositionMode::Soccular, args.rounds)?;
            let bounds = d.certificate.bounds.clone();
            for c in &d.components {
                doc.components.push(congruence_doc(c, &bounds, names)?);
            }
            doc.certificate = CertificateDoc {
                criterion: "box-refinement".into(),
                verdict: d.certificate.holds,
                bounds: Some(bounds),
                counterexample: d
                    .certificate
                    .counterexample
                    .map(|(a, b)| vec![monomial(&a, names), monomial(&b, names)]),
                ..Default::default()
            };
            doc.skipped_primes = d.skipped.iter().map(|p| prime_names(p, names)).collect();
            doc.timing = Timing {
                elapsed_ms: start.elapsed().as_millis() as u64,
                jobs: args.jobs,
            };
            return Ok(doc);
        }
        Mode::Coprincipal => {
            let d = coprincipal_decomposition(ideal)?;
            (d.components, d.skipped)
        }
        Mode::Binoccular => {
            let d = binoccular_decomposition(ideal)?;
            if args.report {
                let r = binomial_irreducibility_report(ideal)?;
                doc.report = Some(ReportDoc {
                    verdict: r.verdict.as_str().into(),
                    bad: r
                        .bad
                        .iter()
                        .map(|&k| monomial(&r.components[k].witness, names))
                        .collect(),
                    omittable: r.omittable.clone(),
                    decomposition: r
                        .decomposition
                        .as_ref()
                        .map(|cs| cs.iter().map(|c| ideal_strings(&c.generators, names)).collect::<Result<Vec<_>>>())
                        .transpose()?,
                });
            }
            (d.components, d.skipped)
        }
        Mode::Irreducible => {
            let d = irreducible_decomposition(ideal, args.prune)?;
            doc.failures = d
                .failures
                .iter()
                .map(|f| FailureDoc {
                    prime: prime_names(&f.prime, names),
                    witness: monomial(&f.witness, names),
                    error: f.error.to_string(),
                })
                .collect();
            (d.components, d.skipped)
        }
    };
    let components = if args.prune && args.mode != Mode::Irreducible {
        irredundancy_prune(ideal, components)?
    } else {
        components
    };
    let gens: Vec<Ideal<F>> = components.iter().map(|c| c.generators.clone()).collect();
    let gb = check_intersection(ideal, &gens, Criterion::GbIntersection)?;
    let socle = if skipped.is_empty() {
        Some(check_intersection(ideal, &gens, Criterion::SocleInjectivity)?)
    } else {
        None
    };
    let meso = if args.mode == Mode::Irreducible {
        None
    } else {
        Some(check_mesoprimary_decomposition(ideal, &components)?)
    };
    for (k, c) in components.iter().enumerate() {
        let flag = meso
            .as_ref()
            .map(|m| !m.mismatches.iter().any(|(j, _)| *j == k) && !m.not_coprincipal.contains(&k));
        doc.components.push(component_doc(c, names, flag)?);
    }
    doc.certificate = CertificateDoc {
        criterion: Criterion::GbIntersection.as_str().into(),
        verdict: gb.verdict,
        socle_injectivity: socle.as_ref().map(|s| s.verdict),
        socle_failures: socle
            .map(|s| {
                s.failures
                    .iter()
                    .map(|f| SocleFailureDoc {
                        prime: prime_names(&f.prime, names),
                        element: polynomial_string(&f.element, names),
                    })
                    .collect()
            })
            .unwrap_or_default(),
        mesoprimary: meso.as_ref().map(|m| m.valid),
        combinatorial: meso.as_ref().map(|m| m.combinatorial),
        bounds: None,
        counterexample: None,
    };
    doc.skipped_primes = skipped.iter().map(|p| prime_names(p, names)).collect();
    doc.timing = Timing {
        elapsed_ms: start.elapsed().as_millis() as u64,
        jobs: args.jobs,
    };
    Ok(doc)
}

fn congruence_doc<F: Field>(c: &ComponentCongruence<F>, bounds: &[u32], names: &[String]) -> Result<ComponentDoc> {
    let gens: Vec<String> = c.presentation(bounds).iter().map(|p| polynomial_string(p, names)).collect();
    Ok(ComponentDoc {
        kind: "soccular".into(),
        prime: prime_names(&c.prime, names),
        witness: monomial(&c.witness, names),
        witness_kind: "key".into(),
        generators: gens,
        mesoprime: vec![],
        flags: Flags::default(),
        socle_dim: None,
    })
}

/// Re-checks a result document against its own input echo.
pub fn verify<F: Field>(doc: &ResultDocument, file: &IdealFile, ideal: &Ideal<F>) -> Result<(Value, bool)> {
    let names = &file.names;
    let one = ideal.one();
    let mode = Mode::parse(&doc.mode).ok_or_else(|| Error::Parse {
        line: 1,
        column: 1,
        message: format!("unknown mode '{}'", doc.mode),
    })?;
    if mode == Mode::Soccular {
        let bounds = doc.certificate.bounds.clone().unwrap_or(default_bounds(ideal)?);
        let mut comps = Vec::new();
        let mut same_presentation = true;
        for c in &doc.components {
            let prime = parse_prime(&c.prime.join(","), names)?;
            let witness = parse_monomial(&c.witness, names)?;
            let view = CongruenceView::from_fiber(Fiber::shared(ideal, &prime)?);
            let class = view.class_of(&witness).ok_or(Error::NilClass)?;
            let comp = ComponentCongruence {
                prime,
                witness,
                view: soccular_component(&view, class)?,
            };
            let shown: Vec<String> = comp.presentation(&bounds).iter().map(|p| polynomial_string(p, names)).collect();
            same_presentation &= shown == c.generators;
            comps.push(comp);
        }
        let cert = refinement_certificate(ideal, &comps, &bounds)?;
        let ok = cert.holds && same_presentation;
        return Ok((
            json!({
                "mode": doc.mode,
                "criterion": "box-refinement",
                "bounds": bounds,
                "refinement": cert.holds,
                "presentations_match": same_presentation,
                "verdict": ok,
            }),
            ok,
        ));
    }
    let comps = doc
        .components
        .iter()
        .map(|c| parse_ideal_strings(&c.generators, names, &one))
        .collect::<Result<Vec<_>>>()?;
    let gb = check_intersection(ideal, &comps, Criterion::GbIntersection)?;
    let socle = if doc.skipped_primes.is_empty() {
        Some(check_intersection(ideal, &comps, Criterion::SocleInjectivity)?.verdict)
    } else {
        None
    };
    let agree = socle.is_none_or(|s| s == gb.verdict);
    let ok = gb.verdict && agree;
    Ok((
        json!({
            "mode": doc.mode,
            "criterion": Criterion::GbIntersection.as_str(),
            "gb_intersection": gb.verdict,
            "socle_injectivity": socle,
            "not_containing": gb.not_containing,
            "verdict": ok,
        }),
        ok,
    ))
}

fn views<F: Field>(ideal: &Ideal<F>, prime: Option<&str>, names: &[String]) -> Result<(Vec<CongruenceView<F>>, Vec<MonoidPrime>)> {
    match prime {
        Some(t) => {
            let p = parse_prime(t, names)?;
            Ok((vec![CongruenceView::from_fiber(Fiber::shared(ideal, &p)?)], vec![]))
        }
        None => finite_localizations(ideal),
    }
}

fn aide_string<F: Field>(view: &CongruenceView<F>, a: &Aide, names: &[String]) -> String {
    match a {
        Aide::Nil => "nil".into(),
        Aide::Class(c) => monomial(view.rep(*c), names),
    }
}

pub fn witnesses<F: Field>(ideal: &Ideal<F>, prime: Option<&str>, key_only: bool, names: &[String]) -> Result<Value> {
    let (views, skipped) = views(ideal, prime, names)?;
    let mut out = Vec::new();
    for v in &views {
        let essential: Vec<usize> = essential_witnesses(v).iter().map(|r| r.class).collect();
        let list: Vec<Value> = v
            .witnesses(key_only)
            .iter()
            .map(|r| {
                let aides: serde_json::Map<String, Value> = r
                    .aides
                    .iter()
                    .map(|(var, a)| {
                        (
                            names[*var].clone(),
                            Value::from(a.iter().map(|x| aide_string(v, x, names)).collect::<Vec<_>>()),
                        )
                    })
                    .collect();
                json!({
                    "witness": monomial(&r.witness, names),
                    "kind": r.kind.as_str(),
                    "essential": essential.contains(&r.class),
                    "key_aide": r.key_aide.as_ref().map(|a| aide_string(v, a, names)),
                    "aides": aides,
                })
            })
            .collect();
        out.push(json!({
            "prime": prime_names(v.prime(), names),
            "witnesses": list,
        }));
    }
    Ok(json!({
        "localizations": out,
        "skipped_primes": skipped.iter().map(|p| prime_names(p, names)).collect::<Vec<_>>(),
    }))
}

fn classes_json<F: Field>(v: &CongruenceView<F>, names: &[String]) -> Vec<Value> {
    (0..v.len())
        .map(|c| {
            json!({
                "id": c,
                "rep": monomial(v.rep(c), names),
                "members": v.members(c).iter().map(|&cell| monomial(v.fiber().rep(cell), names)).collect::<Vec<_>>(),
                "reaches_nil": v.reaches_nil(c),
            })
        })
        .collect()
}

fn predicates_json<F: Field>(v: &CongruenceView<F>) -> Value {
    let p = v.predicates();
    json!({
        "primary": p.is_primary,
        "mesoprimary": p.is_mesoprimary,
        "coprincipal": p.is_coprincipal,
        "soccular": p.is_soccular,
    })
}

pub fn congruence<F: Field>(ideal: &Ideal<F>, prime: Option<&str>, names: &[String]) -> Result<Value> {
    let (views, skipped) = views(ideal, prime, names)?;
    let out: Vec<Value> = views
        .iter()
        .map(|v| {
            json!({
                "prime": prime_names(v.prime(), names),
                "predicates": predicates_json(v),
                "classes": classes_json(v, names),
            })
        })
        .collect();
    Ok(json!({
        "localizations": out,
        "skipped_primes": skipped.iter().map(|p| prime_names(p, names)).collect::<Vec<_>>(),
    }))
}

pub fn socle<F: Field>(ideal: &Ideal<F>, prime: Option<&str>, names: &[String]) -> Result<Value> {
    let (views, skipped) = views(ideal, prime, names)?;
    let out: Vec<Value> = views
        .iter()
        .map(|v| {
            let s = socle_in(v.fiber());
            json!({
                "prime": prime_names(v.prime(), names),
                "dim": s.dim(),
                "basis": s.basis.iter().map(|b| polynomial_string(b, names)).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(json!({
        "localizations": out,
        "skipped_primes": skipped.iter().map(|p| prime_names(p, names)).collect::<Vec<_>>(),
    }))
}

pub fn closure<F: Field>(
    ideal: &Ideal<F>,
    kind: ClosureKind,
    prime: Option<&str>,
    witness: Option<&str>,
    names: &[String],
) -> Result<Value> {
    let p = prime_or_max(prime, names)?;
    match kind {
        ClosureKind::Binoccular => {
            let c = binoccular_closure(ideal, &p)?;
            Ok(json!({
                "kind": "binoccular",
                "prime": prime_names(&p, names),
                "generators": ideal_strings(&c, names)?,
            }))
        }
        ClosureKind::Irreducible => {
            let w = match witness {
                Some(t) => parse_monomial(t, names)?,
                None => {
                    let v = CongruenceView::from_fiber(Fiber::shared(ideal, &p)?);
                    v.rep(cogenerator(&v)?).clone()
                }
            };
            let c = irreducible_closure(ideal, &p, &w)?;
            Ok(json!({
                "kind": "irreducible",
                "prime": prime_names(&p, names),
                "witness": monomial(&w, names),
                "generators": ideal_strings(&c, names)?,
            }))
        }
        ClosureKind::Soccular => {
            let v = CongruenceView::from_fiber(Fiber::shared(ideal, &p)?);
            let c = soccular_closure(&v)?;
            Ok(json!({
                "kind": "soccular",
                "prime": prime_names(&p, names),
                "predicates": predicates_json(&c),
                "classes": classes_json(&c, names),
            }))
        }
    }
}

pub struct RenderArgs {
    pub format: RenderFormat,
    pub prime: Option<String>,
    pub soccular_closure: bool,
    pub width: Option<u32>,
    pub height: Option<u32>,
}

pub fn render_file<F: Field>(ideal: &Ideal<F>, args: &RenderArgs, names: &[String]) -> Result<String> {
    if names.len() != 2 {
        return Err(Error::DimensionUnsupported(names.len()));
    }
    let b = default_bounds(ideal)?;
    let (w, h) = (args.width.unwrap_or(b[0] + 1), args.height.unwrap_or(b[1] + 1));
    let grid = if args.prime.is_none() && !args.soccular_closure {
        grid_from_ideal(ideal, w, h)?
    } else {
        let p = prime_or_max(args.prime.as_deref(), names)?;
        let v = CongruenceView::from_fiber(Fiber::shared(ideal, &p)?);
        let v = if args.soccular_closure { soccular_closure(&v)? } else { v };
        grid_from_view(&v, w, h)?
    };
    Ok(render(&grid, args.format))
}
