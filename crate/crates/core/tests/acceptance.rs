//! Acceptance suite: one PASS/FAIL line per criterion on stdout.
//! Run with `cargo test -p binoc-core --test acceptance -- --nocapture`.

mod common;

use std::time::{Duration, Instant};

use binoc_core::binoccular::{binoccular_decomposition, is_binoccular, socle};
use binoc_core::congruence::{localize, Aide, CongruenceView};
use binoc_core::fiber::{Fiber, MonoidPrime};
use binoc_core::irreducible::{fiber_algebra, irreducible_closure, irreducible_decomposition, largest_submodule_in, perp_subspace};
use binoc_core::linalg::Subspace;
use binoc_core::mesoprimary::coprincipal_decomposition;
use binoc_core::soccular::{cogenerator, collapse_chain, fingerprint_closure, soccular_closure, soccular_collapse};
use binoc_core::verify::{artinian_socle_dim, binomial_irreducibility_report, check_intersection, Criterion, ReportVerdict};
use binoc_core::{Field, Fp, Ideal, Polynomial};
use common::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const LIMIT_1: Duration = Duration::from_secs(1);
const LIMIT_2: Duration = Duration::from_secs(1);
const LIMIT_3: Duration = Duration::from_secs(1);
const LIMIT_4: Duration = Duration::from_secs(30);
const LIMIT_5: Duration = Duration::from_secs(5);
const LIMIT_6: Duration = Duration::from_secs(30);
const LIMIT_7: Duration = Duration::from_secs(120);
const LIMIT_8: Duration = Duration::from_secs(60);

const RANDOM_IDEALS: usize = 100;
const RANDOM_SEED: u64 = 20_101;
const ORACLE_FIBERS: usize = 40;
const ORACLE_MAX_DIM: usize = 6;

/// Prints the clause table and the verdict line, then fails on any red clause.
fn report(id: u32, title: &str, clauses: &[(&str, bool)], elapsed: Duration, limit: Duration) {
    let timely = elapsed < limit;
    for (name, ok) in clauses {
        println!("  criterion {id} / {name}: {}", if *ok { "ok" } else { "FAILED" });
    }
    println!(
        "  criterion {id} / runtime {:.3}s < {}s: {}",
        elapsed.as_secs_f64(),
        limit.as_secs(),
        if timely { "ok" } else { "FAILED" }
    );
    let pass = timely && clauses.iter().all(|(_, ok)| *ok);
    println!("ACCEPTANCE {id} {title}: {}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "acceptance criterion {id} failed");
}

fn class_of<F: Field>(v: &CongruenceView<F>, m: &[u32]) -> usize {
    v.class_of(&e(m)).expect("monomial is nil")
}

fn has_pair<F: Field>(v: &CongruenceView<F>, a: &[u32], b: &[u32]) -> bool {
    let (ca, cb) = (v.class_of(&e(a)), v.class_of(&e(b)));
    v.key_witness_pairs()
        .iter()
        .any(|&(p, q)| (Some(p), Some(q)) == (ca, cb) || (Some(q), Some(p)) == (ca, cb))
}

#[test]
fn criterion_1_mutual_key_aides() {
    let t = Instant::now();
    let i = q("ring x y; char 0; ideal x^2 - x*y, x*y - y^2, x^3");
    let max = MonoidPrime::maximal(2);
    let v = localize(&i, &max).unwrap();
    let coprincipal = v.predicates().is_coprincipal;
    let fiber = Fiber::new(&i, &max).unwrap();
    let s = socle(&i, &max).unwrap();
    let in_socle = s.space.contains(&fiber.vector(&poly(&i, "x - y")));
    let (cx, cy) = (class_of(&v, &[1, 0]), class_of(&v, &[0, 1]));
    let aide_all = |q: usize, w: usize| max.vars().iter().all(|&var| v.is_aide(Aide::Class(q), w, var));
    let records = v.witnesses(true);
    let key_aide_of = |w: usize| records.iter().find(|r| r.class == w).and_then(|r| r.key_aide);
    let mutual = aide_all(cy, cx)
        && aide_all(cx, cy)
        && key_aide_of(cx) == Some(Aide::Class(cy))
        && key_aide_of(cy) == Some(Aide::Class(cx));
    report(
        1,
        "mutual key aides",
        &[
            ("congruence is coprincipal", coprincipal),
            ("x - y lies in the socle", in_socle),
            ("x and y are mutual key aides", mutual),
        ],
        t.elapsed(),
        LIMIT_1,
    );
}

#[test]
fn criterion_2_soccular_collapse_and_closure() {
    let t = Instant::now();
    let i = q("ring x y; char 0; ideal x^3 - x^2*y, x^2*y - x*y^2, x*y^3 - y^4, x^5");
    let v = localize(&i, &MonoidPrime::maximal(2)).unwrap();
    let pair_before = has_pair(&v, &[1, 1], &[0, 2]);
    let once = soccular_collapse(&v).unwrap();
    let pair_after = has_pair(&once, &[1, 1], &[2, 0]);
    let twice = soccular_collapse(&once).unwrap();
    let closure = soccular_closure(&v).unwrap();
    let closure_is_second = closure.labels() == twice.labels();
    let w = cogenerator(&v).unwrap();
    let chain = collapse_chain(&v, w);
    let iterated = &chain.last().unwrap().0;
    let fingerprints = fingerprint_closure(&v, w);
    let agree = iterated.labels() == fingerprints.labels() && closure.labels() == fingerprints.labels();
    println!("  criterion 2 / note: collapse chain has {} stages", chain.len() - 1);
    for (name, view) in [("~_I", &v), ("one collapse", &once), ("two collapses", &twice)] {
        let pairs: Vec<String> = view
            .key_witness_pairs()
            .iter()
            .map(|&(a, b)| format!("({}, {})", view.describe(Some(a), &names(2)), view.describe(Some(b), &names(2))))
            .collect();
        println!("  criterion 2 / note: key-witness pairs of {name}: {}", pairs.join(" "));
    }
    report(
        2,
        "soccular collapse and closure",
        &[
            ("(xy, y^2) is a key-witness pair of ~_I", pair_before),
            ("(xy, x^2) is a key-witness pair after one collapse", pair_after),
            ("closure equals the second collapse", closure_is_second),
            ("iterated collapse and colon fingerprints agree", agree),
        ],
        t.elapsed(),
        LIMIT_2,
    );
}

#[test]
fn criterion_3_binoccular_simple_socle() {
    let t = Instant::now();
    let i = q("ring x y; char 0; ideal x^2 - x*y, x*y + y^2");
    let max = MonoidPrime::maximal(2);
    let cubes = ["x^3", "x^2*y", "x*y^2", "y^3"].iter().all(|m| i.contains(&poly(&i, m)).unwrap());
    let binoc = is_binoccular(&i, &max).unwrap();
    let dim = socle(&i, &max).unwrap().dim();
    report(
        3,
        "binoccular with simple socle",
        &[
            ("contains every degree-3 monomial", cubes),
            ("is binoccular", binoc),
            ("socle has dimension 1", dim == 1),
        ],
        t.elapsed(),
        LIMIT_3,
    );
}

fn alpha_beta<F: Field>(i: &Ideal<F>) -> (Polynomial<F>, Polynomial<F>) {
    (poly(i, "x^2 + y^2 - x*y"), poly(i, "x^2*y"))
}

#[test]
fn criterion_4_no_binomial_irreducible_decomposition() {
    let t = Instant::now();
    let text = "ring x y; char 0; ideal x^2*y - x*y^2, x^3, y^3";
    let i = q(text);
    let max = MonoidPrime::maximal(2);
    let fiber = Fiber::new(&i, &max).unwrap();
    let s = socle(&i, &max).unwrap();
    let (alpha, beta) = alpha_beta(&i);
    let span = Subspace::span(fiber.len(), &[fiber.vector(&alpha), fiber.vector(&beta)]);
    let socle_ok = s.dim() == 2 && s.space.contains_space(&span) && span.contains_space(&s.space);

    let v = localize(&i, &max).unwrap();
    let cogs = v.cogenerators();
    let mut members: Vec<_> = v
        .class_table(&[5, 5])
        .into_iter()
        .filter(|(_, c)| c.is_some() && cogs.contains(&c.unwrap()))
        .map(|(a, _)| a)
        .collect();
    members.sort();
    let cog_ok = cogs.len() == 1 && members == vec![e(&[1, 2]), e(&[2, 1])];

    let d = irreducible_decomposition(&i, true).unwrap();
    let comps: Vec<Ideal<_>> = d.components.iter().map(|c| c.generators.clone()).collect();
    let expected = [q("ring x y; char 0; ideal x^2 + y^2 - x*y, x^3, y^3"), q("ring x y; char 0; ideal x^3, y")];
    let equal_i = Ideal::intersect_all(&comps).unwrap().is_some_and(|j| j.equals(&i).unwrap());
    let matches = comps.len() == 2
        && expected
            .iter()
            .all(|x| comps.iter().filter(|c| c.equals(x).unwrap()).count() == 1);

    let p = 101;
    let ifp = fp(text, p);
    let (a, b) = alpha_beta(&ifp);
    let mut pencil_ok = true;
    for lambda in 0..p as i64 {
        let f = a.add(&b.scale(&Fp::new(lambda, p)));
        let j = ifp.with_generators([f]);
        let irreducible = artinian_socle_dim(&j).unwrap() == Some(1);
        let non_binomial = j.basis().unwrap().iter().any(|g| g.len() >= 3);
        pencil_ok &= irreducible && non_binomial;
    }
    report(
        4,
        "no binomial irreducible decomposition",
        &[
            ("socle is span{x^2+y^2-xy, x^2y}", socle_ok),
            ("cogenerator class is {x^2y, xy^2}", cog_ok),
            ("pruned decomposition has two components meeting in I", d.certified && equal_i && comps.len() == 2),
            ("components are <x^2+y^2-xy,x^3,y^3> and <x^3,y>", matches),
            ("every I + <alpha + lambda beta> over F_101 is irreducible and not binomial", pencil_ok),
        ],
        t.elapsed(),
        LIMIT_4,
    );
}

#[test]
fn criterion_5_irreducible_closure_in_three_variables() {
    let t = Instant::now();
    let i = q("ring x y z; char 0; ideal x^2*y - x*y^2, x^3, y^3, z^3");
    let max = MonoidPrime::maximal(3);
    let v = localize(&i, &max).unwrap();
    let w = v.rep(cogenerator(&v).unwrap()).clone();
    let irr = irreducible_closure(&i, &max, &w).unwrap();
    let expected = i.with_generators([poly(&i, "x^2 + y^2 - x*y")]);
    report(
        5,
        "irreducible closure",
        &[("closure equals <x^2+y^2-xy> + I", irr.equals(&expected).unwrap())],
        t.elapsed(),
        LIMIT_5,
    );
}

#[test]
fn criterion_6_witness_counts_and_report() {
    let t = Instant::now();
    let i = q("ring x y; char 0; ideal x^2*y - x*y^2, x^4 - x^3*y, x*y^3 - y^4, x^5");
    let j = q("ring x y; char 0; ideal x^4*y - x^3*y^2, x^2*y^3 - x*y^4, x^6 - x^5*y, x*y^5 - y^6, x^7");
    let max = MonoidPrime::maximal(2);
    let non_cogenerator_keys = |ideal: &Ideal<_>| {
        let v = localize(ideal, &max).unwrap();
        let cogs = v.cogenerators();
        v.key_witness_classes().into_iter().filter(|c| !cogs.contains(c)).count()
    };
    let ki = non_cogenerator_keys(&i);
    let kj = non_cogenerator_keys(&j);
    let ri = binomial_irreducibility_report(&i).unwrap();
    let rj = binomial_irreducibility_report(&j).unwrap();
    let omitted_x2y = ri.decomposition.as_ref().is_some_and(|d| {
        let gens: Vec<_> = d.iter().map(|c| c.generators.clone()).collect();
        d.iter().all(|c| c.witness != e(&[2, 1]))
            && d.iter().all(|c| c.socle_dim == Some(1))
            && Ideal::intersect_all(&gens).unwrap().is_some_and(|x| x.equals(&i).unwrap())
    });
    let bad_i: Vec<_> = ri.bad.iter().map(|&k| ri.components[k].witness.clone()).collect();
    println!("  criterion 6 / note: I has {ki}, J has {kj} key witnesses besides the cogenerator");
    report(
        6,
        "witness counts and binomial-irreducibility report",
        &[
            ("I has exactly 3 key witnesses besides its cogenerator", ki == 3),
            ("J has exactly 4 non-maximal key witnesses", kj == 4),
            ("report finds a decomposition for I", ri.verdict == ReportVerdict::Found),
            ("the decomposition for I omits the x^2y component", bad_i == vec![e(&[2, 1])] && omitted_x2y),
            ("report finds none for J", rj.verdict != ReportVerdict::Found && rj.decomposition.is_none()),
        ],
        t.elapsed(),
        LIMIT_6,
    );
}

fn criteria_agree(ideal: &Ideal<Fp>, comps: &[Ideal<Fp>]) -> (bool, bool) {
    let gb = check_intersection(ideal, comps, Criterion::GbIntersection).unwrap().verdict;
    let soc = check_intersection(ideal, comps, Criterion::SocleInjectivity).unwrap().verdict;
    (gb, gb == soc)
}

#[test]
fn criterion_7_random_decomposition_certificates() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED);
    let sizes = [1usize, 2, 2, 2, 3, 3, 3, 3];
    let (mut kept, mut tried, mut binomial) = (0, 0, 0);
    let (mut coprincipal_ok, mut binoccular_ok, mut irreducible_ok, mut agree_ok) = (true, true, true, true);
    let mut bad = Vec::new();
    while kept < RANDOM_IDEALS {
        let n = sizes[tried % sizes.len()];
        tried += 1;
        let i = random_binomial_ideal(&mut rng, n, 4, 101);
        if i.is_unit().unwrap() || !p_cofinite(&i) {
            continue;
        }
        kept += 1;
        if i.basis().unwrap().iter().any(|g| g.len() == 2) {
            binomial += 1;
        }
        let mut runs: Vec<(&str, Vec<Ideal<Fp>>)> = Vec::new();
        match coprincipal_decomposition(&i) {
            Ok(d) => runs.push(("coprincipal", d.components.iter().map(|c| c.generators.clone()).collect())),
            Err(err) => {
                coprincipal_ok = false;
                bad.push(format!("coprincipal {err}"));
            }
        }
        match binoccular_decomposition(&i) {
            Ok(d) => runs.push(("binoccular", d.components.iter().map(|c| c.generators.clone()).collect())),
            Err(err) => {
                binoccular_ok = false;
                bad.push(format!("binoccular {err}"));
            }
        }
        match irreducible_decomposition(&i, false) {
            Ok(d) if d.failures.is_empty() => {
                runs.push(("irreducible", d.components.iter().map(|c| c.generators.clone()).collect()))
            }
            Ok(d) => {
                irreducible_ok = false;
                bad.push(format!("irreducible failures {:?}", d.failures));
            }
            Err(err) => {
                irreducible_ok = false;
                bad.push(format!("irreducible {err}"));
            }
        }
        for (name, comps) in &runs {
            let (equal, agree) = criteria_agree(&i, comps);
            let ok = match *name {
                "coprincipal" => &mut coprincipal_ok,
                "binoccular" => &mut binoccular_ok,
                _ => &mut irreducible_ok,
            };
            *ok &= equal;
            agree_ok &= agree;
            if comps.len() > 1 {
                let (_, agree) = criteria_agree(&i, &comps[1..]);
                agree_ok &= agree;
            }
            if !equal || !agree {
                bad.push(format!("{name} on {:?}", i.gens().iter().map(key).collect::<Vec<_>>()));
            }
        }
    }
    for b in bad.iter().take(5) {
        println!("  criterion 7 / failure: {b}");
    }
    println!("  criterion 7 / note: {kept} ideals from {tried} draws, {binomial} with a binomial in the reduced basis");
    report(
        7,
        "random decomposition certificates",
        &[
            ("coprincipal components intersect to I", coprincipal_ok),
            ("binoccular components intersect to I", binoccular_ok),
            ("irreducible-closure components intersect to I", irreducible_ok),
            ("intersection and socle-injectivity criteria agree", agree_ok),
        ],
        t.elapsed(),
        LIMIT_7,
    );
}

#[test]
fn criterion_8_brute_force_oracles() {
    let t = Instant::now();
    let p = 3;
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED + 8);
    let mut ideals: Vec<Ideal<Fp>> = [
        "ring x y; char 3; ideal x^2 - x*y, x*y - y^2, x^3",
        "ring x y; char 3; ideal x^2 - x*y, x*y + y^2",
        "ring x y; char 3; ideal x^2, x*y, y^2",
    ]
    .iter()
    .map(|s| fp(s, p))
    .collect();
    let mut draws = 0;
    while ideals.len() < ORACLE_FIBERS {
        draws += 1;
        let n = 2 + draws % 2;
        let i = random_binomial_ideal(&mut rng, n, 3, p);
        if i.is_unit().unwrap() || !p_cofinite(&i) {
            continue;
        }
        let dim = Fiber::new(&i, &MonoidPrime::maximal(n)).unwrap().len();
        if (2..=ORACLE_MAX_DIM).contains(&dim) {
            ideals.push(i);
        }
    }
    let (mut socle_ok, mut submodule_ok) = (true, true);
    let mut checked_submodules = 0;
    for i in &ideals {
        let n = i.nvars();
        let max = MonoidPrime::maximal(n);
        let fiber = Fiber::shared(i, &max).unwrap();
        assert!(fiber.len() <= ORACLE_MAX_DIM);
        let s = socle(i, &max).unwrap();
        let brute = brute_socle(i, p);
        socle_ok &= brute.len() == 3usize.pow(s.dim() as u32)
            && brute.iter().all(|f| s.space.contains(&fiber.vector(f)));

        let v = CongruenceView::from_fiber(fiber.clone());
        for w in 0..v.len() {
            if max.vars().iter().any(|&var| v.step(w, var).is_some()) {
                continue;
            }
            let fa = fiber_algebra(i, &max, v.rep(w)).unwrap();
            let perp = perp_subspace(&fa);
            let mut spaces = vec![perp.clone()];
            let vecs: Vec<Vec<Fp>> = all_vectors(fiber.len(), p).into_iter().skip(1).collect();
            let pick = |k: usize| vecs[(k * 7 + w * 13 + n) % vecs.len()].clone();
            spaces.push(Subspace::span(fiber.len(), &[pick(1), pick(2)]).intersect(&perp));
            spaces.push(Subspace::span(fiber.len(), &[pick(3), pick(4), pick(5)]));
            for space in spaces {
                let u = largest_submodule_in(&space, &fa);
                let gens: Vec<Polynomial<Fp>> = space.basis().iter().map(|b| fiber.polynomial(b)).collect();
                let brute = brute_largest_submodule(i, &gens, p);
                submodule_ok &= brute.len() == 3usize.pow(u.dim() as u32)
                    && brute.iter().all(|f| u.contains(&fiber.vector(f)));
                checked_submodules += 1;
            }
        }
    }
    println!(
        "  criterion 8 / note: {} fibers, {checked_submodules} submodule searches",
        ideals.len()
    );
    report(
        8,
        "brute-force oracles over F_3",
        &[
            ("socle matches annihilator search", socle_ok),
            ("largest submodule matches brute-force search", submodule_ok),
        ],
        t.elapsed(),
        LIMIT_8,
    );
}
