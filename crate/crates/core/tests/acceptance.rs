//! Acceptance suite: one PASS/FAIL line per criterion, each under a pinned
//! wall-clock limit. Runs as a plain binary so the lines always print.

mod common;

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use fusionkit::cli;
use fusionkit::constructions::{
    direct_product, free_product, rep_ring, so3_ring, so3_subring, su2_ring, CharacterTable, FiniteGroupPresentation,
};
use fusionkit::induction::{induce, restrict_and_decompose, standardize_from_induced};
use fusionkit::io::{load, save, to_canonical_bytes};
use fusionkit::module::{check_module_axioms, connected_components, is_standard, is_torsion, modules_isomorphic};
use fusionkit::ring::{check_dimension, check_ring_axioms, ExplicitRingSpec, RingExpr};
use fusionkit::subring::{find_divisibility_certificate, verify_certificate};
use fusionkit::torsion::{enumerate_torsion_modules, is_torsion_free_finite, EnumerationBudget};
use fusionkit::{BasedModule, BasedRing, BasisId, Element, SubringEmbedding, Verdict};

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Runs one criterion; it passes when it returns `Ok` within `limit`.
fn criterion(n: usize, name: &str, limit: Duration, f: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default())
    });
    let took = start.elapsed();
    let pass = out.is_ok() && took <= limit;
    let why = match (&out, took <= limit) {
        (Err(e), _) => format!(": {e}"),
        (Ok(()), false) => ": over the time limit".to_string(),
        _ => String::new(),
    };
    println!(
        "criterion {n} {:<4} {name} ({} ms, limit {} ms){why}",
        if pass { "PASS" } else { "FAIL" },
        took.as_millis(),
        limit.as_millis()
    );
    pass
}

/// Infinite dihedral group as affine maps n ↦ σn + τ of the integers, with
/// s: n ↦ -n and t: n ↦ 1 - n. Words in s, t map faithfully.
fn affine(word: &str) -> (i64, i64) {
    let mut m = (1, 0);
    if word == "ε" {
        return m;
    }
    for letter in word.split('.') {
        let g = if letter == "s" { (-1, 0) } else { (-1, 1) };
        m = (m.0 * g.0, m.0 * g.1 + m.1);
    }
    m
}

fn constructions() -> Check {
    let t = Instant::now();
    let d = free_product(&cyclic(2, "s"), &cyclic(2, "t")).ring;
    let words = ok(d.basis_up_to_depth(4))?;
    ensure!(words.len() == 9, "expected 9 words of length ≤ 4, got {}", words.len());
    let mut seen = HashMap::new();
    for w in &words {
        ensure!(seen.insert(affine(w.as_str()), w.clone()).is_none(), "two words give the same group element");
    }
    for x in &words {
        for y in &words {
            let p = ok(d.fuse(x, y))?;
            let z = p.as_basis().ok_or(format!("{x}⊗{y} = {p} is not a single word"))?;
            let (a, b) = (affine(x.as_str()), affine(y.as_str()));
            ensure!(affine(z.as_str()) == (a.0 * b.0, a.0 * b.1 + a.1), "{x}⊗{y} = {z} disagrees with the group");
        }
    }
    ensure!(t.elapsed() < Duration::from_secs(1), "dihedral check took {:?}", t.elapsed());

    let t = Instant::now();
    let p = inversion_product().ring;
    let s3 = FiniteGroupPresentation::symmetric3();
    let phi = |x: &BasisId| -> BasisId {
        let inner = x.as_str().trim_start_matches('(').trim_end_matches(')');
        let (g, a) = inner.split_once(',').expect("pair label");
        let g = if g == "e" { "e" } else { "s" };
        let r = match a {
            "e" => "e",
            "a" => "r",
            _ => "r2",
        };
        s3.mul(&b(g), &b(r)).unwrap().clone()
    };
    let basis = p.finite_basis().unwrap().to_vec();
    ensure!(basis.len() == 6, "semidirect product has {} elements", basis.len());
    for x in &basis {
        for y in &basis {
            let z = ok(p.fuse(x, y))?;
            let z = z.as_basis().ok_or("product is not a basis element")?;
            ensure!(phi(z) == *s3.mul(&phi(x), &phi(y)).unwrap(), "{x}⊗{y} = {z} disagrees with S3");
        }
    }
    ensure!(t.elapsed() < Duration::from_secs(1), "semidirect check took {:?}", t.elapsed());

    let t = Instant::now();
    let r = ok(rep_ring(&ok(CharacterTable::named("S3"))?))?;
    let std = ok(r.fuse(&b("std"), &b("std")))?;
    let expected = ok(Element::from_terms([(b("triv"), 1), (b("sgn"), 1), (b("std"), 1)]))?;
    ensure!(*std == expected, "std⊗std = {std}");
    ensure!(t.elapsed() < Duration::from_secs(1), "character table check took {:?}", t.elapsed());
    Ok(())
}

fn builtin_rings() -> Vec<(&'static str, BasedRing)> {
    vec![
        ("Z[1]", group_ring_of(FiniteGroupPresentation::trivial())),
        ("Z[Z/2]", cyclic(2, "g")),
        ("Z[Z/3]", cyclic(3, "a")),
        ("Z[Z/4]", cyclic(4, "a")),
        ("Z[S3]", s3()),
        ("R(S3)", rep_ring(&CharacterTable::named("S3").unwrap()).unwrap()),
        ("R(Z/3)", rep_ring(&CharacterTable::cyclic(3).unwrap()).unwrap()),
        ("R(SU(2))", su2_ring()),
        ("R(SO(3))", so3_ring()),
        (
            "R(S3)×Z[Z/2]",
            direct_product(&rep_ring(&CharacterTable::named("S3").unwrap()).unwrap(), &cyclic(2, "g")).ring,
        ),
        ("R(SU(2))×Z[Z/3]", direct_product(&su2_ring(), &cyclic(3, "a")).ring),
        ("Z[Z/2]*Z[Z/3]", free_product(&cyclic(2, "g"), &cyclic(3, "h")).ring),
        ("Z[Z/2]*R(SU(2))", free_product(&cyclic(2, "g"), &su2_ring()).ring),
        ("Z/2⋉Z[Z/3]", inversion_product().ring),
    ]
}

fn group_ring_of(g: FiniteGroupPresentation) -> BasedRing {
    fusionkit::constructions::group_ring(&g).unwrap()
}

fn axioms() -> Check {
    for (name, r) in builtin_rings() {
        let v = ok(check_ring_axioms(&r, 4))?;
        ensure!(v.holds(), "{name}: {v:?}");
        let v = ok(check_dimension(&r, 4))?;
        ensure!(v.holds(), "{name}: {v:?}");
    }
    let spec: ExplicitRingSpec = ok(serde_json::from_str(
        r#"{"basis":["e","a","a2"],"unit":"e","conj":{"e":"e","a":"a2","a2":"a"},"dim":{"e":1,"a":1,"a2":1},
            "fusion":[["a","a",{"a2":1}],["a","a2",{"e":1}],["a2","a",{"e":2}],["a2","a2",{"a":1}]]}"#,
    ))?;
    let bad = ok(BasedRing::from_expr(&RingExpr::Explicit { ring: spec }))?;
    match ok(check_ring_axioms(&bad, 4))? {
        Verdict::Fails(w) => ensure!(w.items == [b("a"), b("a")], "witness pair {:?}", w.items),
        v => return Err(format!("mutated table accepted: {v:?}")),
    }
    Ok(())
}

fn certified(e: &SubringEmbedding, depth: usize, what: &str) -> Check {
    let s = ok(find_divisibility_certificate(e, depth))?;
    let c = s.certificate.ok_or(format!("{what}: no certificate ({:?})", s.verdict))?;
    let v = ok(verify_certificate(&c, depth))?;
    ensure!(v.holds(), "{what}: certificate does not verify: {v:?}");
    Ok(())
}

fn divisibility() -> Check {
    let d = direct_product(&ok(rep_ring(&ok(CharacterTable::named("S3"))?))?, &cyclic(2, "g"));
    certified(&d.left, 4, "R(S3) in the direct product")?;
    certified(&d.right, 4, "Z[Z/2] in the direct product")?;
    let f = free_product(&cyclic(2, "g"), &cyclic(3, "h"));
    certified(&f.left, 5, "Z[Z/2] in the free product")?;
    certified(&f.right, 5, "Z[Z/3] in the free product")?;
    let sd = inversion_product();
    certified(&sd.group, 4, "acting group")?;
    certified(&sd.target, 4, "target")?;
    let s = ok(find_divisibility_certificate(&so3_subring(), 8))?;
    ensure!(s.certificate.is_none(), "SO(3) ⊂ SU(2) should have no certificate");
    ensure!(!s.verdict.holds(), "verdict {:?}", s.verdict);
    ensure!(s.witnesses.iter().any(|w| w.detail == "x2⊗x1 = x1 ⊕ x3"), "witnesses {:?}", s.witnesses);
    Ok(())
}

fn induction_case(n: &BasedModule, e: &SubringEmbedding, what: &str) -> Check {
    let s = ok(find_divisibility_certificate(e, 4))?;
    let c = s.certificate.ok_or(format!("{what}: no certificate"))?;
    let ind = ok(induce(n, &c, 4))?;
    let m = &ind.module;
    ensure!(ok(check_module_axioms(m, 4))?.holds(), "{what}: induced module fails the axioms");
    ensure!(ok(is_torsion(m, 4))?.holds(), "{what}: induced module is not torsion");
    let expected = c.representatives().len() * n.rank().unwrap();
    ensure!(m.rank() == Some(expected), "{what}: rank {:?} ≠ |Ω|·|J| = {expected}", m.rank());
    Ok(())
}

fn induction() -> Check {
    let e = z2_in_z4();
    induction_case(&rank_one(e.sub()), &e, "rank-1 over Z2 ⊂ Z4")?;
    induction_case(&BasedModule::standard(e.sub()), &e, "standard over Z2 ⊂ Z4")?;
    let e = z3_in_s3();
    induction_case(&rank_one(e.sub()), &e, "rank-1 over Z3 ⊂ S3")?;
    let sd = inversion_product();
    induction_case(&BasedModule::standard(sd.group.sub()), &sd.group, "standard over the acting group")?;
    induction_case(&BasedModule::standard(sd.target.sub()), &sd.target, "standard over the target")?;
    Ok(())
}

fn restriction() -> Check {
    let e = z2_in_z4();
    let d = ok(restrict_and_decompose(&BasedModule::standard(e.ambient()), &e, 4))?;
    ensure!(d.summands.len() == 2, "{} summands", d.summands.len());
    let target = BasedModule::standard(e.sub());
    for s in &d.summands {
        ensure!(ok(modules_isomorphic(s, &target))?.is_some(), "summand {:?} is not standard", s.basis());
    }
    let e = z3_in_s3();
    let d = ok(restrict_and_decompose(&BasedModule::standard(e.ambient()), &e, 4))?;
    ensure!(d.summands.len() == 2, "{} summands", d.summands.len());
    for s in &d.summands {
        ensure!(s.rank() == Some(3), "summand rank {:?}", s.rank());
        ensure!(ok(connected_components(s, 4))?.len() == 1, "summand is not connected");
    }
    Ok(())
}

fn standardization() -> Check {
    let e = z2_in_z4();
    let c = ok(find_divisibility_certificate(&e, 4))?.certificate.ok_or("no certificate")?;
    let n = BasedModule::standard(e.sub());
    let ind = ok(induce(&n, &c, 4))?;
    let st = ok(is_standard(&ind.module, 4))?;
    let w = st.bijection.ok_or(format!("induced standard module is not standard: {:?}", st.verdict))?;
    let back = ok(standardize_from_induced(&n, &c, &w, 4))?;
    ensure!(back.verdict.holds(), "{:?}", back.verdict);
    let map = back.bijection.ok_or("no bijection")?;
    for (j, s) in &map {
        for a in e.sub().finite_basis().unwrap() {
            let lhs = ok(n.act_basis(a, j))?;
            let rhs = ok(e.sub().fuse(a, s))?;
            let mapped = ok(lhs.map_labels(|k| Ok(map[k].clone())))?;
            ensure!(mapped == *rhs, "{a}⊗{j} is not intertwined");
        }
    }

    let one = rank_one(e.sub());
    let ind = ok(induce(&one, &c, 4))?;
    match ok(is_standard(&ind.module, 4))?.verdict {
        Verdict::Fails(w) => ensure!(w.detail.contains("rank 2 ≠ rank 4"), "witness {}", w.detail),
        v => return Err(format!("induced rank-1 module reported {v:?}")),
    }
    let tf = ok(is_torsion_free_finite(e.ambient(), &ok(EnumerationBudget::new(2, 1))?))?;
    ensure!(tf.verdict.is_fails(), "Z[Z/4] reported torsion-free");
    Ok(())
}

fn census() -> Check {
    let c = ok(enumerate_torsion_modules(&cyclic(2, "g"), &ok(EnumerationBudget::new(2, 1))?))?;
    ensure!(c.complete && c.modules.len() == 2, "{} classes", c.modules.len());
    for r in [cyclic(2, "g"), cyclic(3, "a"), cyclic(4, "a"), s3()] {
        let tf = ok(is_torsion_free_finite(&r, &ok(EnumerationBudget::new(2, 1))?))?;
        let m = tf.witness_module.ok_or(format!("no witness module for {r:?}"))?;
        ensure!(tf.verdict.is_fails(), "{r:?}: {:?}", tf.verdict);
        ensure!(!ok(is_standard(&m, 4))?.verdict.holds(), "witness is standard");
        ensure!(ok(is_torsion(&m, 4))?.holds(), "witness is not torsion");
    }
    Ok(())
}

/// Every command behind criteria 1-7 with its expected exit code.
fn invocations(ws: &Workspace) -> Vec<(Vec<String>, i32)> {
    let p = |n: &str| ws.path(n);
    let cert = |n: &str| ws.path(&format!("cert-{n}.json"));
    let v = |args: &[&str]| args.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    vec![
        (v(&["product", &p("dihedral.json"), "s.t", "t.s"]), 0),
        (v(&["product", &p("semi.json"), "(g,a)", "(g,e)"]), 0),
        (v(&["product", &p("rs3.json"), "std", "std"]), 0),
        (v(&["product", &p("su2.json"), "x1", "x1"]), 0),
        (v(&["validate", &p("free23.json")]), 0),
        (v(&["validate", &p("semi.json")]), 0),
        (v(&["validate", &p("bad-module.json")]), 1),
        (v(&["divisible", &p("free23.json"), "--sub", &p("free23-left.json"), "--depth", "5"]), 0),
        (v(&["divisible", &p("free23.json"), "--sub", &p("free23-right.json"), "--depth", "5"]), 0),
        (v(&["divisible", &p("semi.json"), "--sub", &p("semi-group.json"), "--save", &cert("semi-group")]), 0),
        (v(&["divisible", &p("semi.json"), "--sub", &p("semi-target.json"), "--save", &cert("semi-target")]), 0),
        (v(&["divisible", &p("su2.json"), "--sub", &p("so3-embed.json"), "--depth", "8"]), 2),
        (v(&["divisible", &p("z4.json"), "--sub", &p("z2-in-z4.json"), "--save", &cert("z2z4")]), 0),
        (v(&["divisible", &p("s3.json"), "--sub", &p("z3-in-s3.json"), "--save", &cert("z3s3")]), 0),
        (v(&["induce", &p("rank1-z2.json"), "--cert", &cert("z2z4"), "--save", &p("induced-rank1.json")]), 0),
        (v(&["induce", &p("std-z2.json"), "--cert", &cert("z2z4")]), 0),
        (v(&["induce", &p("rank1-z3.json"), "--cert", &cert("z3s3")]), 0),
        (v(&["induce", &p("std-z2-semi.json"), "--cert", &cert("semi-group")]), 0),
        (v(&["induce", &p("std-z3.json"), "--cert", &cert("semi-target")]), 0),
        (v(&["restrict", &p("std-z4.json"), "--embed", &p("z2-in-z4.json"), "--decompose"]), 0),
        (v(&["restrict", &p("std-s3.json"), "--embed", &p("z3-in-s3.json"), "--decompose"]), 0),
        (v(&["torsion", &p("rank1-z2.json")]), 0),
        (v(&["standardize", &p("std-z2.json"), "--cert", &cert("z2z4")]), 0),
        (v(&["standardize", &p("rank1-z2.json"), "--cert", &cert("z2z4")]), 1),
        (v(&["standard", &p("induced-rank1.json")]), 1),
        (v(&["enumerate", &p("z2.json"), "--max-rank", "2", "--max-coeff", "1", "--save", &p("census.json")]), 0),
        (v(&["enumerate", &p("s3.json"), "--max-rank", "2", "--max-coeff", "1", "--torsion-free"]), 1),
    ]
}

fn determinism() -> Check {
    let ws = Workspace::new();
    let cache = ws.root().join("cache");
    let cache = cache.display().to_string();
    let run = |args: &[String]| {
        let mut argv = vec!["fusionkit".to_string(), "--json".into(), "--cache-dir".into(), cache.clone()];
        argv.extend(args.iter().cloned());
        cli::run(argv)
    };
    let cases = invocations(&ws);
    let cold: Vec<_> = cases.iter().map(|(a, _)| run(a)).collect();
    ensure!(std::fs::metadata(ws.root().join("cache/products.jsonl")).is_ok(), "no cache was written");
    for ((args, code), first) in cases.iter().zip(&cold) {
        ensure!(first.code == *code, "{args:?} exited {} (expected {code}): {}", first.code, first.stderr);
        let second = run(args);
        ensure!(second == *first, "{args:?} differs between cold and warm cache");
    }
    for name in [
        "z2.json",
        "su2.json",
        "z2-in-z4.json",
        "cert-z2z4.json",
        "cert-semi-group.json",
        "induced-rank1.json",
        "census.json",
        "free23-left.json",
    ] {
        let obj = ok(load(ws.path(name)))?;
        let bytes = ok(to_canonical_bytes(&obj))?;
        let copy = ws.root().join(format!("copy-{name}"));
        ok(save(&copy, &obj))?;
        ensure!(std::fs::read(&copy).unwrap() == bytes, "{name}: saved bytes are not canonical");
        let again = ok(to_canonical_bytes(&ok(load(&copy))?))?;
        ensure!(again == bytes, "{name}: round trip changed the bytes");
    }
    Ok(())
}

fn main() {
    let secs = Duration::from_secs;
    let results = [
        criterion(1, "construction oracles", secs(3), constructions),
        criterion(2, "based-ring axiom suite", secs(5), axioms),
        criterion(3, "divisibility certificates", secs(30), divisibility),
        criterion(4, "induced modules", secs(10), induction),
        criterion(5, "restriction and decomposition", secs(5), restriction),
        criterion(6, "standardization from induced modules", secs(5), standardization),
        criterion(7, "torsion census", secs(60), census),
        criterion(8, "determinism and round trips", secs(120), determinism),
    ];
    let failed = results.iter().filter(|p| !**p).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
