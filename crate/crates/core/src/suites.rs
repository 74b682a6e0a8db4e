//! The eight acceptance suites, runnable from tests and from the CLI.
//!
//! Every suite is exact over ℚ. A suite passes when all of its checks pass;
//! diagnostics are printed but never affect the verdict.

use std::sync::Arc;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{
    exterior_algebra, sym_group_algebra, sym_group_algebra_with, tensor_algebra, trivial_action, Element,
    MonomialRing, SymAlgebra, SymGroupAction,
};
use crate::emod::{
    EModuleMap,
    a_map, a_map_cokernel_torsion, free_smash_iso, is_torsion, is_tors_closed, vu_shift_map, shift_iso_check,
    smash_preserves_injectivity, suspension, tail_levels, u_functor, unit_counit, v_functor, EModule, Filtration,
    GradedModule, GradedPresentation,
};
use crate::error::{Error, Result};
use crate::ideal::{sigma_closure, SigmaIdeal};
use crate::linalg::{SparseVec, Subspace};
use crate::projtop::{
    check_spectral_properties, check_topology_laws, gluing_check, monomial_family, projective_space_embedding_check,
    radical_intersection_check, LawCheck, PrimeFamily,
};
use crate::rep::SnModule;
use crate::report::Report;
use crate::scalars::{Field, Rational};
use crate::sgroup::binomial;
use crate::symseq::{associator, day_tensor, hexagon_holds, naive_swap, representable_product_iso, twist, SymSeq};

type Q = Rational;

pub const CRITERIA: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub criterion: usize,
    pub name: String,
    pub passed: bool,
    pub seed: u64,
    /// Wall-clock time; left out of JSON so reports stay reproducible.
    #[serde(skip)]
    pub elapsed_ms: u128,
    pub budget_ms: u128,
    pub checks: Vec<CheckLine>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
}

impl SuiteResult {
    fn new(criterion: usize, name: &str, seed: u64, budget_s: u128) -> Self {
        SuiteResult {
            criterion,
            name: name.into(),
            passed: true,
            seed,
            elapsed_ms: 0,
            budget_ms: budget_s * 1000,
            checks: Vec::new(),
            diagnostics: Vec::new(),
        }
    }

    fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.passed &= passed;
        self.checks.push(CheckLine { name: name.into(), passed, detail: detail.into() });
    }

    fn report(&mut self, name: &str, r: &Report) {
        let detail = match r.first_violation() {
            None => "ok".to_string(),
            Some(v) => format!("{} violations, first {} at {:?}", r.violations.len(), v.law, v.cell),
        };
        self.check(name, r.passed, detail);
    }

    fn law(&mut self, prefix: &str, l: &LawCheck) {
        let detail = if l.failures.is_empty() {
            format!("family size {}", l.family_size)
        } else {
            l.failures.join("; ")
        };
        self.check(&format!("{prefix} {}", l.law), l.passed(), detail);
    }

    fn failed_checks(&self) -> Vec<&CheckLine> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    /// One line: `criterion N: PASS (name, k checks, t ms)`.
    pub fn summary(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let failed = self.failed_checks();
        let extra = if failed.is_empty() {
            String::new()
        } else {
            format!(
                "; failing: {}",
                failed.iter().map(|c| format!("{} [{}]", c.name, c.detail)).collect::<Vec<_>>().join("; ")
            )
        };
        let over = if self.elapsed_ms > self.budget_ms { format!(", over the {} ms budget", self.budget_ms) } else { String::new() };
        format!(
            "criterion {}: {} ({}, {} checks, {} ms{}{})",
            self.criterion,
            verdict,
            self.name,
            self.checks.len(),
            self.elapsed_ms,
            over,
            extra
        )
    }
}

pub fn run(criterion: usize, seed: u64) -> Result<SuiteResult> {
    let start = Instant::now();
    let mut r = match criterion {
        1 => monoidal(seed)?,
        2 => algebra_axioms(seed)?,
        3 => modules(seed)?,
        4 => reconstruction(seed)?,
        5 => torsion(seed)?,
        6 => ideals(seed)?,
        7 => topology(seed)?,
        8 => commutative_charts(seed)?,
        _ => return Err(Error::Argument(format!("no suite {criterion}; suites are 1..={CRITERIA}"))),
    };
    r.elapsed_ms = start.elapsed().as_millis();
    Ok(r)
}

fn tensor(d: usize, c: usize) -> Result<Arc<SymAlgebra<Q>>> {
    Ok(Arc::new(tensor_algebra(d, c)?))
}

fn poly(vars: &[&str], c: usize) -> Result<Arc<SymAlgebra<Q>>> {
    Ok(Arc::new(trivial_action(&MonomialRing::polynomial(vars), c)?))
}

fn truncated_x3(c: usize) -> Result<Arc<SymAlgebra<Q>>> {
    let ring = MonomialRing::new(vec!["x".into()], vec![1], vec![vec![3]])?;
    Ok(Arc::new(trivial_action(&ring, c)?))
}

fn dims_str(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

/// A symmetric sequence whose levels are sums of trivial, sign and
/// (small) regular representations.
fn random_symseq(rng: &mut ChaCha8Rng, cutoff: usize) -> Result<SymSeq<Q>> {
    let levels = (0..=cutoff)
        .map(|n| {
            let parts: Vec<SnModule<Q>> = (0..rng.gen_range(0..=2))
                .map(|_| match rng.gen_range(0..3) {
                    0 => SnModule::trivial(n, 1),
                    1 => SnModule::sign(n),
                    _ if n <= 2 => SnModule::regular(n),
                    _ => SnModule::trivial(n, 1),
                })
                .collect();
            if parts.is_empty() { SnModule::zero(n) } else { SnModule::direct_sum(&parts) }
        })
        .collect();
    SymSeq::new(levels)
}

fn monoidal(seed: u64) -> Result<SuiteResult> {
    let mut s = SuiteResult::new(1, "monoidal structure on symmetric sequences", seed, 60);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut bad = Vec::new();
    for _ in 0..8 {
        let a = random_symseq(&mut rng, 4)?;
        let b = random_symseq(&mut rng, 4)?;
        let d = day_tensor(&a, &b)?;
        for t in 0..=4 {
            let expect: usize = (0..=t).map(|p| binomial(t, p) * a.dims()[p] * b.dims()[t - p]).sum();
            if d.level(t).dim() != expect || d.level(t).validate().is_err() {
                bad.push(format!("[{}]x[{}] level {t}", dims_str(&a.dims()), dims_str(&b.dims())));
            }
        }
    }
    s.check("dimension formula", bad.is_empty(), if bad.is_empty() { "8 random pairs, levels 0..4".into() } else { bad.join("; ") });

    let mut ok = true;
    for _ in 0..5 {
        let a = random_symseq(&mut rng, 4)?;
        let u = SymSeq::unit(4);
        ok &= day_tensor(&u, &a)? == a && day_tensor(&a, &u)? == a;
    }
    s.check("unit laws", ok, "5 random sequences, both sides");

    let mut ok = true;
    for _ in 0..5 {
        let a = random_symseq(&mut rng, 4)?;
        let b = random_symseq(&mut rng, 4)?;
        let t = twist(&a, &b)?;
        ok &= t.is_equivariant() && t.then(&twist(&b, &a)?).components.iter().all(|m| m.is_identity());
    }
    s.check("twist involution", ok, "5 random pairs");

    let mut ok = true;
    for _ in 0..4 {
        let a = random_symseq(&mut rng, 3)?;
        let b = random_symseq(&mut rng, 3)?;
        let c = random_symseq(&mut rng, 3)?;
        let al = associator(&a, &b, &c)?;
        ok &= al.is_equivariant() && al.is_iso() && hexagon_holds(&a, &b, &c)?;
    }
    s.check("associator and hexagon", ok, "4 random triples at cutoff 3");

    let mut bad = Vec::new();
    for m in 0..=5 {
        for n in 0..=5 - m {
            let iso = representable_product_iso::<Q>(m, n, 5)?;
            if !(iso.is_equivariant() && iso.is_iso()) {
                bad.push(format!("({m},{n})"));
            }
        }
    }
    s.check("F_m k ∧ F_n k ≅ F_{m+n} k", bad.is_empty(), if bad.is_empty() { "all m+n ≤ 5".into() } else { bad.join(" ") });

    let ones = SymSeq::new((0..=3).map(|n| SnModule::<Q>::trivial(n, 1)).collect())?;
    let failures = naive_swap(&ones, &ones)?.equivariance_failures();
    s.check(
        "naive swap is not equivariant",
        !failures.is_empty(),
        format!("equivariance fails at (level, generator) {:?}", failures),
    );
    Ok(s)
}

fn algebra_axioms(seed: u64) -> Result<SuiteResult> {
    let mut s = SuiteResult::new(2, "symmetric algebra axioms", seed, 120);
    let c = 4;
    let mut algs: Vec<(String, SymAlgebra<Q>)> = Vec::new();
    for d in 1..=3 {
        algs.push((format!("T(V) d={d}"), tensor_algebra(d, c)?));
    }
    for d in 1..=3 {
        algs.push((format!("Λ(V) d={d}"), exterior_algebra(d, c)?));
    }
    algs.push(("kΣ_*".into(), sym_group_algebra(c)?));
    algs.push(("Q[x,y]".into(), (*poly(&["x", "y"], c)?).clone()));
    algs.push(("Q[x]/(x^3)".into(), (*truncated_x3(c)?).clone()));
    for (name, a) in &algs {
        s.report(&format!("{name} axioms"), &a.check_axioms());
        s.report(&format!("{name} χ-commutativity"), &a.check_commutative(false));
    }

    let t2 = tensor_algebra::<Q>(2, c)?;
    let naive = t2.check_commutative(true);
    let cells = naive.cells("commutativity square");
    let first = cells.first().cloned();
    s.check(
        "T(V) d=2 naive commutativity fails first at (1,1)",
        !naive.passed && first == Some(vec![1, 1]),
        format!("failing cells {:?}", cells),
    );

    let conj = sym_group_algebra_with::<Q>(c, SymGroupAction::Conjugation)?;
    let (ax, cm) = (conj.check_axioms(), conj.check_commutative(false));
    s.diagnostics.push(format!(
        "kΣ_* with the conjugation action: axioms {}, χ-commutativity {}",
        verdict(ax.passed),
        verdict(cm.passed)
    ));
    let naive_ks = sym_group_algebra::<Q>(c)?.check_commutative(true);
    s.diagnostics.push(format!(
        "kΣ_* naive commutativity failing cells {:?}",
        naive_ks.cells("commutativity square")
    ));
    Ok(s)
}

fn verdict(b: bool) -> &'static str {
    if b { "pass" } else { "fail" }
}

/// Inclusion of the submodule generated by a few random elements of `m`.
pub fn random_mono<F: Field>(rng: &mut ChaCha8Rng, m: &EModule<F>) -> Result<EModuleMap<F>> {
    let nonzero: Vec<usize> = (0..=m.cutoff()).filter(|&d| m.dim(d) > 0).collect();
    if nonzero.is_empty() {
        return Err(Error::Argument("the zero module has no proper monomorphisms to sample".into()));
    }
    let mut gens: Vec<(usize, SparseVec<F>)> = Vec::new();
    for _ in 0..rng.gen_range(1..=2) {
        let d = *nonzero.choose(rng).expect("nonempty");
        gens.push((d, random_vector(rng, m.dim(d), 0.5)));
    }
    let levels = m.closure(&gens)?;
    Ok(m.submodule(&levels)?.1)
}

/// Nonzero vector with small integer entries.
fn random_vector<F: Field>(rng: &mut ChaCha8Rng, dim: usize, density: f64) -> SparseVec<F> {
    let mut v: SparseVec<F> = Vec::new();
    for i in 0..dim {
        if rng.gen_bool(density) {
            let c: i64 = rng.gen_range(-3..=3);
            if c != 0 && !F::from_i64(c).is_zero() {
                v.push((i, F::from_i64(c)));
            }
        }
    }
    if v.is_empty() && dim > 0 {
        v.push((rng.gen_range(0..dim), F::one()));
    }
    v
}

/// Smashes `trials` random monomorphisms into `E` and `F_1E` with `F_mE`.
pub fn flatness_report<F: Field>(e: &Arc<SymAlgebra<F>>, m: usize, trials: usize, seed: u64) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fm = EModule::free(e, m)?;
    let sources = [EModule::regular(e), EModule::free(e, 1.min(e.cutoff()))?];
    let mut r = Report::new("flatness", e.cutoff());
    for trial in 0..trials {
        let f = random_mono(&mut rng, &sources[trial % 2])?;
        if !f.is_injective() {
            return Err(Error::InvariantViolation("random submodule inclusion is not injective".into()));
        }
        for v in smash_preserves_injectivity(&fm, &f)?.violations {
            let mut cell = vec![trial];
            cell.extend(v.cell);
            r.fail(&v.law, &cell);
        }
    }
    r.note(format!("{trials} random monomorphisms smashed with F_{m}E"));
    Ok(r)
}

fn modules(seed: u64) -> Result<SuiteResult> {
    let mut s = SuiteResult::new(3, "modules, internal hom, smash and flatness", seed, 300);
    let ks_conj = Arc::new(sym_group_algebra_with::<Q>(4, SymGroupAction::Conjugation)?);

    let mut bad = Vec::new();
    let mut count = 0;
    let c5: Vec<(&str, Arc<SymAlgebra<Q>>)> = vec![
        ("T(V) d=1", tensor(1, 5)?),
        ("Q[x,y]", poly(&["x", "y"], 5)?),
        ("Λ(V) d=2", Arc::new(exterior_algebra(2, 5)?)),
        ("T(V) d=2", tensor(2, 5)?),
        ("kΣ_* (conjugation)", Arc::new(sym_group_algebra_with::<Q>(5, SymGroupAction::Conjugation)?)),
    ];
    for (name, e) in &c5 {
        for m_mod in [EModule::regular(e), EModule::free(e, 1)?] {
            for gen in 0..=3 {
                for k in 0..=5 - gen {
                    count += 1;
                    let r = shift_iso_check(&m_mod, gen, k)?;
                    if !r.passed {
                        bad.push(format!("{name} gen {gen} level {k}"));
                    }
                }
            }
        }
    }
    s.check(
        "[F_mE, M] ≅ M[m]",
        bad.is_empty(),
        if bad.is_empty() { format!("{count} (algebra, M, m, level) cases, m ≤ 3") } else { bad.join("; ") },
    );

    let t2 = tensor(2, 4)?;
    let smash_algs: Vec<(&str, Arc<SymAlgebra<Q>>)> = vec![
        ("T(V) d=1", tensor(1, 4)?),
        ("T(V) d=2", t2.clone()),
        ("Q[x,y]", poly(&["x", "y"], 4)?),
        ("kΣ_* (conjugation)", ks_conj.clone()),
    ];
    let mut bad = Vec::new();
    for (name, e) in &smash_algs {
        for m in 0..=4 {
            for n in 0..=4 - m {
                if !free_smash_iso(e, m, n)?.passed {
                    bad.push(format!("{name} ({m},{n})"));
                }
            }
        }
    }
    s.check(
        "F_mE ∧_E F_nE ≅ F_{m+n}E",
        bad.is_empty(),
        if bad.is_empty() { "m+n ≤ 4 over four algebras".into() } else { bad.join("; ") },
    );
    let ks = Arc::new(sym_group_algebra::<Q>(4)?);
    let regular_failures: Vec<String> = (0..=2)
        .flat_map(|m| (0..=2 - m).map(move |n| (m, n)))
        .filter(|&(m, n)| free_smash_iso(&ks, m, n).map(|r| !r.passed).unwrap_or(true))
        .map(|(m, n)| format!("({m},{n})"))
        .collect();
    s.diagnostics.push(format!(
        "kΣ_* with the regular action (not χ-commutative): free smash iso fails at {}",
        if regular_failures.is_empty() { "no pair".into() } else { regular_failures.join(" ") }
    ));

    let flat_algs: Vec<(&str, Arc<SymAlgebra<Q>>)> = vec![
        ("T(V) d=2", t2.clone()),
        ("Q[x,y]", poly(&["x", "y"], 4)?),
        ("kΣ_* (conjugation)", ks_conj.clone()),
    ];
    for (k, (name, e)) in flat_algs.iter().enumerate() {
        let r = flatness_report(e, 2, 50, seed.wrapping_add(k as u64))?;
        let detail = match r.first_violation() {
            None => "50 random monomorphisms smashed with F_2E".to_string(),
            Some(v) => format!("{} failures, first (trial, level) {:?}", r.violations.len(), v.cell),
        };
        s.check(&format!("flatness over {name}"), r.passed, detail);
    }
    Ok(s)
}

/// A random finitely generated graded module over `e`.
fn random_graded(rng: &mut ChaCha8Rng, e: &Arc<SymAlgebra<Q>>) -> Result<GradedModule<Q>> {
    let c = e.cutoff();
    let degrees: Vec<usize> = (0..rng.gen_range(1..=2)).map(|_| rng.gen_range(0..=1)).collect();
    let free = GradedModule::free(e, &degrees, c)?;
    let mut rels = Vec::new();
    for _ in 0..rng.gen_range(0..=2) {
        let d = rng.gen_range(1..=c);
        if free.dim(d) == 0 {
            continue;
        }
        let v: SparseVec<Q> = (0..free.dim(d))
            .filter_map(|i| {
                let a: i64 = rng.gen_range(-2..=2);
                (a != 0).then(|| (i, Q::from_i64(a)))
            })
            .collect();
        if !v.is_empty() {
            rels.push((d, v));
        }
    }
    let levels = free.closure(&rels);
    Ok(free.quotient(&levels)?.0)
}

/// `(M_n, M_nE_1, …)` for a random `M_n`: a free suspension module in
/// degree `offset` modulo random relations above it.
fn random_suspension(rng: &mut ChaCha8Rng, e: &Arc<SymAlgebra<Q>>, offset: usize) -> Result<EModule<Q>> {
    let base = rng.gen_range(1..=3);
    let free = suspension(base, offset, e)?.unshifted()?;
    let mut rels = Vec::new();
    for _ in 0..rng.gen_range(0..=2) {
        let d = rng.gen_range(offset + 1..=e.cutoff());
        let v: SparseVec<Q> = (0..free.dim(d))
            .filter_map(|i| {
                let a: i64 = rng.gen_range(-2..=2);
                (a != 0 && rng.gen_bool(0.4)).then(|| (i, Q::from_i64(a)))
            })
            .collect();
        if !v.is_empty() {
            rels.push((d, v));
        }
    }
    Ok(free.quotient_by_elements(&rels)?.0)
}

fn reconstruction(seed: u64) -> Result<SuiteResult> {
    let mut s = SuiteResult::new(4, "adjunction and reconstruction", seed, 300);
    let c = 4;
    let e = poly(&["x", "y"], c)?;

    let mut ok = true;
    for n in 0..=3 {
        let v = v_functor(&e, &GradedPresentation::free(&[n], c))?;
        ok &= v.module == EModule::free(&e, n)?;
    }
    s.check("V(E(-n)) = F_nE", ok, "n ≤ 3 over Q[x,y] at cutoff 4");

    // Σ^∞M is indexed from degree 0: it is a quotient of ⊕ E(0)
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    let mut shapes = Vec::new();
    for trial in 0..20 {
        let m = random_suspension(&mut rng, &e, 0)?;
        let x = u_functor(&m);
        let (pres, _) = x.presentation();
        let v = v_functor(&e, &pres)?;
        let uv = u_functor(&v.module);
        let (uc, r) = unit_counit(&m)?;
        let unit_iso = uc.unit.iter().all(|u| u.is_invertible());
        if uv != x || !unit_iso || !r.passed || !uc.counit.is_iso() {
            bad.push(format!("trial {trial} (dims {})", dims_str(x.dims())));
        }
        shapes.push(format!("[{}]", dims_str(x.dims())));
    }
    s.check(
        "UV(Σ^∞M) = Σ^∞M",
        bad.is_empty(),
        if bad.is_empty() { format!("20 suspension modules {}", shapes.join(" ")) } else { bad.join("; ") },
    );

    let mut bad = Vec::new();
    let mut count = 0;
    for offset in 0..=2 {
        for base in 1..=2 {
            count += 1;
            let m = suspension(base, offset, &e)?.unshifted()?;
            if !vu_shift_map(&m, offset)?.1.passed {
                bad.push(format!("free base {base} degree {offset}"));
            }
        }
        for trial in 0..3 {
            count += 1;
            let m = random_suspension(&mut rng, &e, offset)?;
            if !vu_shift_map(&m, offset)?.1.passed {
                bad.push(format!("random {trial} degree {offset}"));
            }
        }
    }
    s.check(
        "VU(M) ≅ M[n] ∧_E F_nE for suspensions",
        bad.is_empty(),
        if bad.is_empty() { format!("{count} modules generated in degrees 0..2") } else { bad.join("; ") },
    );

    let mut bad = Vec::new();
    let mut anns = Vec::new();
    for n in 0..=3 {
        let (_, v) = a_map_cokernel_torsion(&e, n)?;
        let ann = v.max_annihilation();
        anns.push(format!("n={n}: {:?}", ann));
        if !v.torsion || ann.map_or(true, |a| a > n) {
            bad.push(format!("n={n}"));
        }
    }
    s.check("coker(a_n) torsion with annihilation ≤ n", bad.is_empty(), anns.join(", "));
    let (_, a1) = a_map(&e, 1)?;
    let (coker, _) = a1.cokernel()?;
    s.check(
        "coker(a_1) = k in degree 0",
        coker.dims() == vec![1, 0, 0, 0, 0],
        format!("dims {}", dims_str(&coker.dims())),
    );

    let mut bad = Vec::new();
    for trial in 0..5 {
        let m = random_graded(&mut rng, &e)?;
        let r = Filtration::new(&m, 1).check(&m)?;
        if !r.passed {
            bad.push(format!("trial {trial}: {:?}", r.first_violation()));
        }
    }
    s.check(
        "L_{Nn} filtration",
        bad.is_empty(),
        if bad.is_empty() { "5 random finitely generated modules, N = 1".into() } else { bad.join("; ") },
    );
    Ok(s)
}

fn torsion(seed: u64) -> Result<SuiteResult> {
    let mut s = SuiteResult::new(5, "torsion and closedness", seed, 60);
    let e = poly(&["x"], 6)?;
    let a = GradedModule::regular(&e);
    let mut bad = Vec::new();
    for n in 1..=4 {
        let (q, _) = a.quotient(&tail_levels(&a, n))?;
        let v = is_torsion(&q)?;
        if !v.torsion || v.max_annihilation().map_or(true, |m| m > n) {
            bad.push(format!("n={n}"));
        }
    }
    let exy = poly(&["x", "y"], 5)?;
    let axy = GradedModule::regular(&exy);
    for n in 1..=4 {
        let (q, _) = axy.quotient(&tail_levels(&axy, n))?;
        let v = is_torsion(&q)?;
        if !v.torsion || v.max_annihilation().map_or(true, |m| m > n) {
            bad.push(format!("Q[x,y] n={n}"));
        }
    }
    s.check("A/A_{≥n} is torsion", bad.is_empty(), if bad.is_empty() { "n ≤ 4 over Q[x] and Q[x,y]".into() } else { bad.join(" ") });

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    for trial in 0..5 {
        let m = random_graded(&mut rng, &exy)?;
        let top = rng.gen_range(1..=3);
        let (b, _) = m.quotient(&tail_levels(&m, top + 1))?;
        if !is_torsion(&b)?.torsion {
            bad.push(format!("trial {trial}"));
        }
    }
    s.check("bounded modules are torsion", bad.is_empty(), "5 random modules cut off above degree ≤ 3");

    let v = is_torsion(&a)?;
    s.check(
        "A is not torsion",
        !v.torsion && v.annihilation[0].is_none(),
        format!("degree 0 annihilation {:?}", v.annihilation[0]),
    );

    let e8 = poly(&["x"], 8)?;
    let a8 = GradedModule::regular(&e8);
    let v = is_tors_closed(&a8, 4)?;
    s.check("Q[x] is closed", v.closed, format!("{} (n, d) pairs, n ≤ 4, cutoff 8", v.tested));
    let (q, _) = a8.quotient(&tail_levels(&a8, 1))?;
    let v = is_tors_closed(&q, 4)?;
    s.check("Q[x]/(x) is not closed", !v.closed, format!("failing (n, d) {:?}", v.failures));
    Ok(s)
}

pub fn random_element<F: Field>(rng: &mut ChaCha8Rng, e: &SymAlgebra<F>, max_degree: usize) -> Element<F> {
    let d = rng.gen_range(1..=max_degree.min(e.cutoff()).max(1));
    if d > e.cutoff() {
        return Element::new(0, vec![(0, F::one())]);
    }
    Element::new(d, random_vector(rng, e.dim(d), 0.3))
}

/// Extensive, idempotent and monotone.
fn closure_laws(rng: &mut ChaCha8Rng, e: &Arc<SymAlgebra<Q>>, trials: usize) -> Result<Vec<String>> {
    let mut bad = Vec::new();
    for t in 0..trials {
        let small: Vec<Element<Q>> = (0..rng.gen_range(1..=2)).map(|_| random_element(rng, e, 2)).collect();
        let mut big = small.clone();
        big.push(random_element(rng, e, 2));
        let cs = sigma_closure(e, &small)?;
        let cb = sigma_closure(e, &big)?;
        if !small.iter().all(|g| cs.contains(g)) {
            bad.push(format!("trial {t}: extensive"));
        }
        let basis: Vec<Element<Q>> = (0..=e.cutoff())
            .flat_map(|n| cs.level(n).basis().into_iter().map(move |v| Element::new(n, v)))
            .collect();
        if sigma_closure(e, &basis)? != cs {
            bad.push(format!("trial {t}: idempotent"));
        }
        if !cs.is_subset(&cb) {
            bad.push(format!("trial {t}: monotone"));
        }
    }
    Ok(bad)
}

fn ideals(seed: u64) -> Result<SuiteResult> {
    let mut s = SuiteResult::new(6, "Σ-ideals", seed, 120);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t2 = tensor(2, 4)?;
    let t2c3 = tensor(2, 3)?;
    let qxy = poly(&["x", "y"], 4)?;
    let ks = Arc::new(sym_group_algebra::<Q>(4)?);
    let ks_conj = Arc::new(sym_group_algebra_with::<Q>(4, SymGroupAction::Conjugation)?);

    let mut bad = Vec::new();
    for (name, e) in [("T(V) d=2", &t2c3), ("Q[x,y]", &qxy), ("Λ(V) d=2", &Arc::new(exterior_algebra(2, 4)?))] {
        for b in closure_laws(&mut rng, e, 8)? {
            bad.push(format!("{name} {b}"));
        }
    }
    s.check("closure operator laws", bad.is_empty(), if bad.is_empty() { "8 random generator sets per algebra".into() } else { bad.join("; ") });

    let mut bad = Vec::new();
    for (name, e) in [("T(V) d=2", &t2), ("Q[x,y]", &qxy), ("kΣ_*", &ks)] {
        for n in 0..=3 {
            let f = EModule::free(e, n)?;
            let levels = f.closure(&[(n, vec![(0, Q::from_i64(1))])])?;
            if !levels.iter().all(Subspace::is_full) {
                bad.push(format!("{name} n={n}"));
            }
        }
    }
    s.check("closure of E(-n) in F_nE is F_nE", bad.is_empty(), if bad.is_empty() { "n ≤ 3".into() } else { bad.join(" ") });

    let x = sigma_closure(&t2, &[t2.parse_element("x")?])?;
    let y = sigma_closure(&t2, &[t2.parse_element("y")?])?;
    let xy = sigma_closure(&t2, &[t2.parse_element("x*y")?])?;
    let p = x.product(&y)?;
    s.check(
        "(x)(y) = (xy) in T(V) d=2",
        p == xy,
        format!("product dims {}, (xy) dims {}", dims_str(&p.dims()), dims_str(&xy.dims())),
    );

    let mut constructed: Vec<(String, SigmaIdeal<Q>)> = vec![
        ("(x) in T(V)".into(), x.clone()),
        ("(y) in T(V)".into(), y.clone()),
        ("(x)(y) in T(V)".into(), p.clone()),
        ("(x)+(y) in T(V)".into(), x.sum(&y)?),
        ("(x)∩(y) in T(V)".into(), x.intersect(&y)?),
    ];
    for gens in [vec!["x"], vec!["x*y"], vec!["x^2", "y"]] {
        let g: Vec<Element<Q>> = gens.iter().map(|g| qxy.parse_element(g)).collect::<Result<_>>()?;
        constructed.push((format!("({}) in Q[x,y]", gens.join(", ")), sigma_closure(&qxy, &g)?));
    }
    for _ in 0..4 {
        let g = random_element(&mut rng, &t2, 2);
        constructed.push(("random in T(V)".into(), sigma_closure(&t2, &[g])?));
        let g = random_element(&mut rng, &ks_conj, 2);
        constructed.push(("random in kΣ_* (conjugation)".into(), sigma_closure(&ks_conj, &[g])?));
    }
    let bad: Vec<String> =
        constructed.iter().filter(|(_, i)| !i.is_two_sided().passed).map(|(n, _)| n.clone()).collect();
    s.check(
        "constructed Σ-ideals are two-sided",
        bad.is_empty(),
        if bad.is_empty() { format!("{} ideals", constructed.len()) } else { bad.join("; ") },
    );

    let zero = SigmaIdeal::zero(&ks);
    let v = zero.is_prime_up_to(4, seed);
    let plus = Element::new(2, vec![(0, Q::from_i64(1)), (1, Q::from_i64(1))]);
    let minus = Element::new(2, vec![(0, Q::from_i64(1)), (1, Q::from_i64(-1))]);
    let prod = ks.multiply(&plus, &minus).expect("degree 4 within cutoff");
    s.check(
        "kΣ_* zero ideal rejected as prime",
        !v.prime,
        format!(
            "verdict prime={} exact={} up to cutoff {}; graded product (1+τ)(1-τ) = {} is nonzero",
            v.prime,
            v.exact,
            v.cutoff,
            ks.format_element(&prod)
        ),
    );
    s.diagnostics.push(
        "the vanishing (1+τ)(1-τ)=0 holds for composition inside kΣ_2, not for the graded product Σ_2×Σ_2 → Σ_4"
            .into(),
    );

    let id = sigma_closure(&ks, &[Element::basis(1, 0)])?;
    s.check(
        "E_{≥1} of kΣ_* is the closure of id in Σ_1",
        id == SigmaIdeal::tail(&ks, 1),
        format!("dims {}", dims_str(&id.dims())),
    );
    Ok(s)
}

fn topology(seed: u64) -> Result<SuiteResult> {
    let mut s = SuiteResult::new(7, "spectral topology", seed, 120);
    let e = poly(&["x", "y"], 4)?;
    let fam = monomial_family(&e, seed)?;
    let gens = |e: &Arc<SymAlgebra<Q>>, g: &[&str]| -> Result<SigmaIdeal<Q>> {
        let els: Vec<Element<Q>> = g.iter().map(|s| e.parse_element(s)).collect::<Result<_>>()?;
        sigma_closure(e, &els)
    };
    let ideals = vec![gens(&e, &["x"])?, gens(&e, &["y"])?, gens(&e, &["x*y"])?, gens(&e, &["x^2"])?];
    for l in check_topology_laws(&fam, &ideals)? {
        s.law("P^1 monomial family:", &l);
    }
    s.diagnostics.push(format!("P^1 monomial family {}", fam.labels().join(" ")));

    let p1 = PrimeFamily::new(&e, vec![gens(&e, &["x"])?, gens(&e, &["y"])?, gens(&e, &["x - y"])?], seed)?;
    let spec_ideals = vec![gens(&e, &["x"])?, gens(&e, &["y"])?, gens(&e, &["x - y"])?, gens(&e, &["x*y"])?];
    for l in check_spectral_properties(&p1, &spec_ideals)? {
        s.law("P^1 points (x),(y),(x-y):", &l);
    }
    let e3 = poly(&["x", "y", "z"], 4)?;
    let chain = PrimeFamily::new(&e3, vec![gens(&e3, &["x"])?, gens(&e3, &["x", "y - x"])?], seed)?;
    for l in check_spectral_properties(&chain, &[gens(&e3, &["x"])?])? {
        if l.law != "quasi-compact" {
            s.law("Q[x,y,z] chain:", &l);
        }
    }

    let e5 = poly(&["x", "y"], 5)?;
    let fam5 = monomial_family(&e5, seed)?;
    let mut bad = Vec::new();
    let cases: [&[&str]; 5] = [&["x^2"], &["x*y"], &["x^2*y"], &["x", "y"], &["x^3", "y^2"]];
    for g in cases {
        let l = radical_intersection_check(&gens(&e5, g)?, &fam5)?;
        if !l.passed() {
            bad.push(format!("({}): {}", g.join(", "), l.failures.join("; ")));
        }
    }
    s.check("radical equals intersection", bad.is_empty(), if bad.is_empty() { "5 monomial ideals of Q[x,y]".into() } else { bad.join("; ") });

    for d in 1..=3 {
        let (r, data) = projective_space_embedding_check::<Q>(d, 4)?;
        let ok = r.passed && data.quotient_dims == data.symmetric_dims;
        s.check(
            &format!("P(V) in P^Σ(V), d={d}"),
            ok,
            format!(
                "T(V)/I dims {} vs C(d+n-1,n) {}",
                dims_str(&data.quotient_dims),
                dims_str(&data.symmetric_dims)
            ),
        );
    }
    Ok(s)
}

fn commutative_charts(seed: u64) -> Result<SuiteResult> {
    let mut s = SuiteResult::new(8, "charts of P^1", seed, 30);
    let e = poly(&["x", "y"], 2)?;
    let fs = vec![e.parse_element("x")?, e.parse_element("y")?];
    let bound = 3;
    let (r, g) = gluing_check(&e, &fs, bound)?;
    s.report("gluing cocycle and ring maps", &r);

    // (R_x)_0 = Q[y/x], (R_y)_0 = Q[x/y], (R_xy)_0 = Q[u, v]/(uv - 1)
    let cx = g.chart(&[0]);
    let cy = g.chart(&[1]);
    let cxy = g.chart(&[0, 1]);
    let fr = |c: &crate::projtop::Chart<Q>| c.generators.iter().map(|g| g.fraction.clone()).collect::<Vec<_>>();
    s.check(
        "(R_x)_0 = Q[y/x]",
        fr(cx) == ["y/x"] && cx.relations.is_empty() && cx.monomials.len() == bound + 1,
        format!("generators {:?}, relations {:?}", fr(cx), cx.relation_strings()),
    );
    s.check(
        "(R_y)_0 = Q[x/y]",
        fr(cy) == ["x/y"] && cy.relations.is_empty() && cy.monomials.len() == bound + 1,
        format!("generators {:?}, relations {:?}", fr(cy), cy.relation_strings()),
    );
    s.check(
        "(R_xy)_0 = Q[u1,u2]/(u1*u2 - 1)",
        fr(cxy) == ["x^2/(x*y)", "y^2/(x*y)"] && cxy.relation_strings() == ["-1 + u1*u2"],
        format!("generators {:?}, relations {:?}", fr(cxy), cxy.relation_strings()),
    );
    let rx = &g.restriction(&[0], &[0, 1]).images;
    let ry = &g.restriction(&[1], &[0, 1]).images;
    s.check(
        "restrictions y/x ↦ u2, x/y ↦ u1",
        rx == &["u2"] && ry == &["u1"],
        format!("from x: {:?}, from y: {:?}", rx, ry),
    );
    s.check(
        "global sections are constants",
        g.global_sections == Some(1),
        format!("{:?}", g.global_sections),
    );
    Ok(s)
}
