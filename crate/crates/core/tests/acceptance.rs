//! Acceptance run: one `[PASS]` or `[FAIL]` line per criterion, exit status
//! nonzero when any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use spectral_cones::classical_cones::{horn_system, horn_triples};
use spectral_cones::combinatorics::PolarizedSet;
use spectral_cones::fixtures;
use spectral_cones::involution_cones::{sing_coefficients, sing_stabilizes};
use spectral_cones::lr::{count_tableaux, lr_coefficient, lr_subset};
use spectral_cones::oracle::{self, ComplexMatrix, Seed};
use spectral_cones::polyhedra::{semantically_equal, MixedSampler, RelKind, Verdict};
use spectral_cones::{registry, ConeId, IndexSet, InequalitySystem, Partition, Variant};

use common::{set, RecursiveHorn, SchurOracle};

type Outcome = Result<String, String>;

const SEED: Seed = Seed(20_240_601);
const SAMPLES: usize = 10_000;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    check(elapsed < limit, || format!("{what} took {elapsed:.1?}, limit {limit:?}"))
}

fn sys(cone: &ConeId) -> Result<std::sync::Arc<InequalitySystem>, String> {
    registry::cached(cone).map_err(|e| format!("{cone}: {e}"))
}

fn horn_count() -> Outcome {
    let start = Instant::now();
    let per_r: Vec<usize> = (1..4)
        .map(|r| horn_triples(r, 4, Variant::StrictOne).map(|t| t.len()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let system = horn_system(4, Variant::StrictOne).map_err(|e| e.to_string())?;
    let ge = system.ge_count();
    within(start.elapsed(), Duration::from_secs(10), "Horn(4)")?;
    let detail = format!("strict-one GE relations = {ge} (by r: {per_r:?}), EQ = {}", system.eq_count());
    check(ge == 52, || format!("{detail}; expected 52"))?;
    Ok(detail)
}

fn exact_equal(
    a: &InequalitySystem,
    b: &InequalitySystem,
    anchor_cone: &ConeId,
    seed: Seed,
) -> Result<usize, String> {
    let mut sampler =
        MixedSampler::new(a, seed.0).with_anchors(oracle::anchors(anchor_cone, 256, seed));
    match semantically_equal(a, b, &mut sampler, SAMPLES).map_err(|e| e.to_string())? {
        Verdict::Equal { members, .. } => Ok(members),
        Verdict::Separated { point, in_first } => Err(format!(
            "{} vs {}: separated at {:?} (in first: {in_first})",
            a.cone(),
            b.cone(),
            oracle::to_float(&point)
        )),
    }
}

fn fixture_equivalence() -> Outcome {
    let cases = [
        ("e1-3", ConeId::e1(3)),
        ("e1-4", ConeId::e1(4)),
        ("e2-2", ConeId::e2(2)),
        ("e2-3", ConeId::e2(3)),
        ("lr-2-2", ConeId::lr_mn(2, 2)),
        ("b-2", ConeId::b(2)),
        ("sing-p-2", ConeId::sing(3, 2)),
        ("sing-3-3", ConeId::sing(3, 3)),
    ];
    let mut notes = Vec::new();
    let mut failures = Vec::new();
    for (k, (name, cone)) in cases.iter().enumerate() {
        match fixture_case(name, cone, Seed(SEED.0 + k as u64)) {
            Ok(members) => notes.push(format!("{name} {members}/{SAMPLES}")),
            Err(e) => failures.push(e),
        }
    }
    check(failures.is_empty(), || format!("{}; passing: {}", failures.join("; "), notes.join(", ")))?;
    Ok(format!("all fixtures generated and equal; members {}", notes.join(", ")))
}

fn fixture_case(name: &str, cone: &ConeId, seed: Seed) -> Result<usize, String> {
    let fixture = fixtures::load(name).map_err(|e| e.to_string())?;
    let generated = sys(cone)?;
    let stored = fixture.to_system_for(cone).map_err(|e| e.to_string())?;
    for rel in stored.relations() {
        let present = match rel.rel() {
            RelKind::Eq => generated.contains_relation(rel),
            RelKind::Ge => generated.contains_modulo_equalities(rel),
        };
        check(present, || format!("{name}: `{}` not generated", rel.render(stored.blocks())))?;
    }
    exact_equal(&generated, &stored, cone, seed).map_err(|e| format!("{name}: {e}"))
}

fn thompson_freede(i: &IndexSet, j: &IndexSet) -> Option<Vec<usize>> {
    let r = i.len();
    let n = i.ambient();
    if i.elements()[r - 1] + j.elements()[r - 1] - r > n {
        return None;
    }
    Some((0..r).map(|k| i.elements()[k] + j.elements()[k] - (k + 1)).collect())
}

fn subset_fixtures() -> Outcome {
    let mut counted = [0usize; 3];
    for n in 2..=5 {
        for r in 1..n {
            let triples = horn_triples(r, n, Variant::Nonzero).map_err(|e| e.to_string())?;
            let has = |i: &IndexSet, j: &IndexSet, l: &IndexSet| {
                triples.iter().any(|t| &t.i == i && &t.j == j && &t.l == l)
            };
            for i in IndexSet::subsets(r, n) {
                let prefix = IndexSet::prefix(r, n).map_err(|e| e.to_string())?;
                check(has(&i, &prefix, &i), || format!("Lidskii–Wielandt ({i}, [{r}], {i}) missing, n={n}"))?;
                counted[1] += 1;
                for j in IndexSet::subsets(r, n) {
                    if let Some(l) = thompson_freede(&i, &j) {
                        let l = set(&l, n);
                        check(has(&i, &j, &l), || format!("Thompson–Freede ({i}, {j}, {l}) missing, n={n}"))?;
                        counted[2] += 1;
                        if r == 1 {
                            counted[0] += 1;
                        }
                    }
                }
            }
        }
    }
    let mut sing_count = 0;
    for q in 1..=3 {
        for p in q..=q + 2 {
            let n = p + q;
            let both = |i: &IndexSet, j: &IndexSet, l: &IndexSet| -> Result<(), String> {
                let (a, b) = sing_coefficients(i, j, l).map_err(|e| e.to_string())?;
                check(a > 0 && b > 0, || format!("sing({p},{q}) triple ({i}, {j}, {l}) gives ({a}, {b})"))
            };
            for i in 1..=q {
                for j in 1..=q + 1 - i {
                    both(&set(&[n + 1 - i], n), &set(&[n + 1 - j], n), &set(&[i + j - 1], n))?;
                    sing_count += 1;
                }
            }
            for r in 1..=q {
                let top: Vec<usize> = (n - r + 1..=n).collect();
                for parts in PolarizedSet::all(q).into_iter().filter(|s| s.len() == r) {
                    let j = parts.embed(p).map_err(|e| e.to_string())?;
                    both(&set(&top, n), &j, &j.opposite())?;
                    sing_count += 1;
                }
                for i in IndexSet::subsets(r, q) {
                    for j in IndexSet::subsets(r, q) {
                        if let Some(l) = thompson_freede(&i, &j) {
                            let widen = |s: &IndexSet| s.widen(n).map_err(|e| e.to_string());
                            both(&widen(&i)?.opposite(), &widen(&j)?.opposite(), &set(&l, n))?;
                            sing_count += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!(
        "Horn n<=5: {} Weyl, {} Lidskii–Wielandt, {} Thompson–Freede triples present; {sing_count} classical sing triples pass both conditions",
        counted[0], counted[1], counted[2]
    ))
}

fn soundness_cones() -> Vec<ConeId> {
    let mut cones = Vec::new();
    for n in 1..=4 {
        cones.push(ConeId::horn(n));
        cones.push(ConeId::e1(n));
    }
    for m in 1..=3 {
        for n in 1..=3 {
            cones.push(ConeId::lr_mn(m, n));
        }
        cones.push(ConeId::e2(m));
        cones.push(ConeId::b(m));
    }
    for q in 1..=3 {
        for p in q..=6 - q {
            cones.push(ConeId::sing(p, q));
            cones.push(ConeId::a(p, q));
        }
    }
    for q in 1..=2 {
        for p in q..=4 - q {
            cones.push(ConeId::s(p, q));
            cones.push(ConeId::t(p, q));
        }
    }
    cones
}

fn soundness() -> Outcome {
    let start = Instant::now();
    let cones = soundness_cones();
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for (k, cone) in cones.iter().enumerate() {
        let report = oracle::soundness_check(cone, 1000, Seed(SEED.0 + 100 + k as u64), 1e-8)
            .map_err(|e| format!("{cone}: {e}"))?;
        worst = worst.max(report.max_violation);
        if !report.is_clean() {
            let v = &report.violations[0];
            failures.push(format!("{cone}: {} violations, e.g. `{}` by {:.3e}", report.violations.len(), v.relation, v.margin));
        }
    }
    within(start.elapsed(), Duration::from_secs(300), "soundness sampling")?;
    check(failures.is_empty(), || failures.join("; "))?;
    Ok(format!("{} cones x 1000 samples, no violations, {:.1?}", cones.len(), start.elapsed()))
}

struct Pair {
    source: ConeId,
    target: ConeId,
    embedding: oracle::Embedding,
}

fn embedding_pairs() -> Vec<Pair> {
    let registered = |c: ConeId| {
        let (embedding, target) = oracle::registered_embedding(&c).expect("registered embedding");
        Pair { source: c, target, embedding }
    };
    let same = |a: ConeId, b: ConeId| Pair { source: a, target: b, embedding: oracle::Embedding::Identity };
    let mut pairs = Vec::new();
    for n in 1..=4 {
        pairs.push(registered(ConeId::e1(n)));
    }
    for n in 1..=3 {
        pairs.push(registered(ConeId::e2(n)));
        pairs.push(registered(ConeId::b(n)));
    }
    for q in 1..=3 {
        for p in q..=6 - q {
            pairs.push(registered(ConeId::sing(p, q)));
            pairs.push(same(ConeId::sing(p, q), ConeId::sing(p, q).with_variant(Variant::Weak)));
        }
    }
    for q in 1..=2 {
        for p in q..=5 - q {
            let full = ConeId::a(p, q);
            pairs.push(registered(full.clone()));
            pairs.push(same(full.clone(), full.clone().with_variant(Variant::Fflp)));
            pairs.push(same(full.clone(), full.clone().with_variant(Variant::OsWeak)));
            pairs.push(same(
                full.clone().with_variant(Variant::Fflp),
                full.clone().with_variant(Variant::OsWeak),
            ));
        }
    }
    for q in 1..=2 {
        for p in q..=4 - q {
            pairs.push(registered(ConeId::s(p, q)));
            pairs.push(registered(ConeId::t(p, q)));
        }
    }
    pairs
}

fn embeddings() -> Outcome {
    let pairs = embedding_pairs();
    let results: Vec<Result<String, String>> = pairs
        .par_iter()
        .enumerate()
        .map(|(k, pair)| {
            let source = sys(&pair.source)?;
            let target = sys(&pair.target)?;
            let report = oracle::equivalence_check(&source, &pair.embedding, &target, SAMPLES, Seed(SEED.0 + 1000 + k as u64))
                .map_err(|e| format!("{} -> {}: {e}", pair.source, pair.target))?;
            if report.is_clean() {
                Ok(format!("{}:{}", pair.source, report.members))
            } else {
                Err(format!(
                    "{} -> {} via {:?}: {} separations, first {:?}",
                    pair.source,
                    pair.target,
                    pair.embedding,
                    report.separations.len(),
                    report.separations[0]
                ))
            }
        })
        .collect();
    let failures: Vec<String> = results.iter().filter_map(|r| r.clone().err()).collect();
    check(failures.is_empty(), || failures.join("; "))?;
    let members: Vec<String> = results.into_iter().filter_map(Result::ok).collect();
    Ok(format!("{} pairs x {SAMPLES} points, no separations; members per pair {}", pairs.len(), members.join(" ")))
}

fn lr_kernel() -> Outcome {
    let start = Instant::now();
    let boxed = Partition::in_box(4, 4);
    let mut oracle = SchurOracle::new(4);
    let mut compared = 0usize;
    for lambda in &boxed {
        for mu in &boxed {
            if lambda.size() + mu.size() > 16 {
                continue;
            }
            let expansion = oracle.expand(lambda.parts(), mu.parts());
            for nu in boxed.iter().filter(|nu| nu.size() == lambda.size() + mu.size()) {
                let expected = expansion.get(nu.parts()).copied().unwrap_or(0);
                let got = lr_coefficient(nu, lambda, mu);
                check(got == expected, || format!("c^{nu:?}_{{{lambda:?},{mu:?}}} = {got}, Schur oracle {expected}"))?;
                let swapped = count_tableaux(nu, mu, lambda);
                check(swapped == expected, || format!("uncached swap c^{nu:?}_{{{mu:?},{lambda:?}}} = {swapped}"))?;
                compared += 1;
            }
        }
    }
    within(start.elapsed(), Duration::from_secs(60), "Schur comparison")?;
    let schur_time = start.elapsed();

    let mut oc_checked = 0usize;
    for n in 2..=7 {
        for r in 1..n {
            let subsets: Vec<IndexSet> = IndexSet::subsets(r, n).collect();
            for i in &subsets {
                for j in &subsets {
                    for l in &subsets {
                        if i.mu().size() + j.mu().size() != l.mu().size() {
                            continue;
                        }
                        let a = lr_subset(i, j, l);
                        let b = lr_subset(&i.oc(), &j.oc(), &l.oc());
                        check(a == b, || format!("oc symmetry fails at ({i}, {j}, {l}): {a} vs {b}"))?;
                        oc_checked += 1;
                    }
                }
            }
        }
    }

    let small = Partition::in_box(3, 3);
    let mut saturation = 0usize;
    for nu in &small {
        for lambda in &small {
            for mu in &small {
                if lambda.size() + mu.size() != nu.size() {
                    continue;
                }
                let once = lr_coefficient(nu, lambda, mu) > 0;
                let twice = lr_coefficient(&nu.scaled(2), &lambda.scaled(2), &mu.scaled(2)) > 0;
                check(once == twice, || format!("saturation fails at {nu:?}, {lambda:?}, {mu:?}"))?;
                saturation += 1;
            }
        }
    }
    Ok(format!(
        "{compared} box triples match the Schur oracle ({schur_time:.1?}); {oc_checked} oc-symmetric triples; {saturation} saturation checks"
    ))
}

fn recursion() -> Outcome {
    let mut rec = RecursiveHorn::new();
    let mut total = 0;
    for n in 2..=5 {
        for r in 1..n {
            let mut direct: Vec<(IndexSet, IndexSet, IndexSet)> = horn_triples(r, n, Variant::Nonzero)
                .map_err(|e| e.to_string())?
                .into_iter()
                .map(|t| (t.i, t.j, t.l))
                .collect();
            let mut recursive = rec.triples(r, n).to_vec();
            direct.sort();
            recursive.sort();
            check(direct == recursive, || {
                format!("r={r}, n={n}: {} triples via LR, {} via recursion", direct.len(), recursive.len())
            })?;
            total += direct.len();
        }
    }
    Ok(format!("{total} triples agree for all r < n <= 5"))
}

fn numeric_kernel() -> Outcome {
    let mut worst = 0.0f64;
    let mut rng = SEED.stream(77);
    for n in [2usize, 4, 8, 16] {
        for _ in 0..100 {
            let h = oracle::random_hermitian(n, &mut rng);
            let (e, u) = oracle::eigh(&h).map_err(|e| e.to_string())?;
            let res = oracle::eigen_residual(&h, &e, &u) / h.norm_inf().max(f64::MIN_POSITIVE);
            let a = oracle::gaussian_matrix(n, n.div_ceil(2) + 1, &mut rng);
            let (su, s, sv) = oracle::svd(&a).map_err(|e| e.to_string())?;
            let res_svd = oracle::svd_residual(&a, &su, &s, &sv) / a.norm_inf();
            worst = worst.max(res).max(res_svd);
        }
    }
    check(worst <= 1e-10, || format!("relative backward error {worst:.3e}"))?;
    let mut hat_worst = 0.0f64;
    for p in 1..=4 {
        for q in 1..=4 {
            for _ in 0..100 {
                let a: ComplexMatrix = oracle::gaussian_matrix(p, q, &mut rng);
                let s = oracle::singular_values(&a).map_err(|e| e.to_string())?;
                let e = oracle::eigenvalues_hermitian(&oracle::hat_matrix(&a)).map_err(|e| e.to_string())?;
                let k = p.min(q);
                let mut expected: Vec<f64> = s[..k].to_vec();
                expected.extend(std::iter::repeat(0.0).take(p + q - 2 * k));
                expected.extend(s[..k].iter().rev().map(|x| -x));
                let diff = e.iter().zip(&expected).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                hat_worst = hat_worst.max(diff / a.norm_inf());
            }
        }
    }
    check(hat_worst <= 1e-10, || format!("hat spectrum mismatch {hat_worst:.3e}"))?;
    Ok(format!("worst backward error {worst:.2e}, hat spectrum error {hat_worst:.2e}"))
}

fn stabilization() -> Outcome {
    let stable = sing_stabilizes(3, 3).map_err(|e| e.to_string())?;
    check(stable, || "sing_stabilizes(3,3) returned false".to_string())?;
    let a = sys(&ConeId::sing(3, 3))?;
    let b = sys(&ConeId::sing(4, 3))?;
    let members = exact_equal(&a, &b, &ConeId::sing(4, 3), Seed(SEED.0 + 9))?;
    Ok(format!("regular triples only; sing(4,3) = sing(3,3) on {SAMPLES} points ({members} members)"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("Horn(4) strict-one count", horn_count),
        ("fixture equivalence", fixture_equivalence),
        ("classical triples generated", subset_fixtures),
        ("soundness sampling", soundness),
        ("embedding equivalences", embeddings),
        ("LR kernel", lr_kernel),
        ("recursion consistency", recursion),
        ("numeric kernel", numeric_kernel),
        ("sing stabilization", stabilization),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".to_string()));
        let tag = if outcome.is_ok() { "PASS" } else { "FAIL" };
        let detail = outcome.unwrap_or_else(|e| e);
        println!("[{tag}] {} {name} ({:.1?}): {detail}", k + 1, start.elapsed());
        failed += usize::from(tag == "FAIL");
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
