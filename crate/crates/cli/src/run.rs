use std::io::Read;
use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Value};
use symqcs::algebra::{
    exterior_algebra, parse_ring_spec, sym_group_algebra_with, tensor_algebra, Element, SymAlgebra, SymGroupAction,
};
use symqcs::emod::{
    a_map_cokernel_torsion, is_torsion, is_tors_closed, nonsymmetric_generation_degree, shift_iso_check, suspension,
    u_functor, unit_counit, v_functor, EModule, Filtration, GradedModule,
};
use symqcs::ideal::{sigma_closure, SigmaIdeal};
use symqcs::projtop::{
    check_spectral_properties, check_topology_laws, gluing_check, monomial_family, projective_space_embedding_check,
    sections_commutative, v_set, PrimeFamily,
};
use symqcs::report::Report;
use symqcs::suites::{self, flatness_report, CRITERIA};
use symqcs::{Error, Field, Result};

use crate::args::*;

/// JSON to print and whether the verification it records succeeded.
pub struct Outcome {
    pub value: Value,
    pub ok: bool,
}

impl Outcome {
    fn built(value: Value) -> Self {
        Outcome { value, ok: true }
    }

    fn report(r: &Report) -> Self {
        Outcome { value: json!(r), ok: r.passed }
    }
}

/// Splits on commas outside brackets and parentheses.
pub fn split_top(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    out.push(cur);
    out.into_iter().map(|p| p.trim().to_string()).filter(|p| !p.is_empty()).collect()
}

fn read_json(path: &Path) -> Result<Value> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Config(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
    };
    Ok(serde_json::from_str(&text)?)
}

pub fn load_algebra<F: Field>(a: &AlgArgs) -> Result<Arc<SymAlgebra<F>>> {
    let sources = [a.algebra.is_some(), a.ring.is_some(), a.tensor, a.exterior, a.sym_group];
    match sources.iter().filter(|&&b| b).count() {
        0 => return Err(Error::Argument("no algebra: use --algebra, --ring, --tensor, --exterior or --sym-group".into())),
        1 => {}
        _ => return Err(Error::Argument("give exactly one algebra source".into())),
    }
    let alg = if let Some(p) = &a.algebra {
        serde_json::from_value::<SymAlgebra<F>>(read_json(p)?)?
    } else if let Some(r) = &a.ring {
        parse_ring_spec(r)?.build(a.cutoff)?
    } else if a.tensor {
        tensor_algebra(a.dim, a.cutoff)?
    } else if a.exterior {
        exterior_algebra(a.dim, a.cutoff)?
    } else {
        let action = if a.conjugation { SymGroupAction::Conjugation } else { SymGroupAction::Regular };
        sym_group_algebra_with(a.cutoff, action)?
    };
    Ok(Arc::new(alg))
}

fn elements<F: Field>(alg: &SymAlgebra<F>, s: &str) -> Result<Vec<Element<F>>> {
    split_top(s).iter().map(|g| alg.parse_element(g)).collect()
}

fn closure_of<F: Field>(alg: &Arc<SymAlgebra<F>>, s: &str) -> Result<SigmaIdeal<F>> {
    sigma_closure(alg, &elements(alg, s)?)
}

fn pairs<F: Field>(xs: &[Element<F>]) -> Vec<(usize, Vec<(usize, F)>)> {
    xs.iter().map(|x| (x.degree, x.coords.clone())).collect()
}

fn module_from_json<F: Field>(alg: &Arc<SymAlgebra<F>>, v: &Value) -> Result<EModule<F>> {
    if v.get("underlying").is_none() {
        return Err(Error::Schema("expected a module with \"underlying\" and \"actions\"".into()));
    }
    EModule::from_json(alg, v)
}

fn built_module<F: Field>(alg: &Arc<SymAlgebra<F>>, m: &ModuleArgs) -> Result<EModule<F>> {
    if let Some(k) = m.free {
        return EModule::free(alg, k);
    }
    if let Some(base) = m.suspension {
        return suspension(base, m.degree, alg)?.unshifted();
    }
    let e = EModule::regular(alg);
    if let Some(q) = &m.quotient {
        return Ok(e.quotient_by_elements(&pairs(&elements(alg, q)?))?.0);
    }
    if let Some(n) = m.tail {
        return Ok(e.quotient(SigmaIdeal::tail(alg, n).levels())?.0);
    }
    Ok(e)
}

pub fn load_module<F: Field>(alg: &Arc<SymAlgebra<F>>, m: &ModuleArgs) -> Result<EModule<F>> {
    match &m.module {
        Some(p) => module_from_json(alg, &read_json(p)?),
        None => built_module(alg, m),
    }
}

/// Graded JSON as is; anything else through `U`.
pub fn load_graded<F: Field>(alg: &Arc<SymAlgebra<F>>, m: &ModuleArgs) -> Result<GradedModule<F>> {
    let Some(p) = &m.module else {
        return Ok(u_functor(&built_module(alg, m)?));
    };
    let v = read_json(p)?;
    if v.get("mult").is_some() {
        return GradedModule::from_json(alg, &v);
    }
    Ok(u_functor(&module_from_json(alg, &v)?))
}

fn family<F: Field>(alg: &Arc<SymAlgebra<F>>, f: &FamilyArgs, seed: u64) -> Result<PrimeFamily<F>> {
    match f.family.as_str() {
        "monomial" => monomial_family(alg, seed),
        "explicit" => {
            let cands = f.primes.iter().map(|p| closure_of(alg, p)).collect::<Result<Vec<_>>>()?;
            PrimeFamily::new(alg, cands, seed)
        }
        other => Err(Error::Argument(format!("unknown family {other:?}; use monomial or explicit"))),
    }
}

fn family_json<F: Field>(fam: &PrimeFamily<F>) -> Value {
    let rejected: Vec<Value> = fam.rejected.iter().map(|(l, why)| json!({ "ideal": l, "reason": why })).collect();
    json!({ "points": fam.labels(), "rejected": rejected, "cutoff": fam.cutoff() })
}

fn ideal_list<F: Field>(alg: &Arc<SymAlgebra<F>>, a: &IdealListArgs) -> Result<Vec<SigmaIdeal<F>>> {
    let mut out = elements(alg, &a.ideals)?
        .into_iter()
        .map(|g| sigma_closure(alg, &[g]))
        .collect::<Result<Vec<_>>>()?;
    for extra in &a.extra {
        out.push(closure_of(alg, extra)?);
    }
    Ok(out)
}

fn ideal_json<F: Field>(i: &SigmaIdeal<F>) -> Value {
    json!({ "dims": i.dims(), "ideal": i.to_json() })
}

pub fn field_of(cmd: &Command) -> &str {
    let alg = match cmd {
        Command::BuildAlgebra { alg } | Command::BuildModule { alg, .. } | Command::Check { alg, .. } => alg,
        Command::Ideal { op } => match op {
            IdealOp::Closure { alg, .. }
            | IdealOp::Product { alg, .. }
            | IdealOp::Prime { alg, .. }
            | IdealOp::Radical { alg, .. }
            | IdealOp::TwoSided { alg, .. } => alg,
        },
        Command::Torsion { op } => match op {
            TorsionOp::Test { alg, .. } | TorsionOp::Closed { alg, .. } => alg,
        },
        Command::Reconstruct { op } => match op {
            ReconstructOp::UvIdentity { alg, .. }
            | ReconstructOp::Filtration { alg, .. }
            | ReconstructOp::AMapCokernel { alg, .. } => alg,
        },
        Command::Proj { op } => match op {
            ProjOp::Vset { alg, .. } | ProjOp::Laws { alg, .. } | ProjOp::Spectral { alg, .. } | ProjOp::Sections { alg, .. } => alg,
            ProjOp::PnEmbedding { field, .. } => return field,
        },
        Command::Suite { .. } => return "Q",
    };
    &alg.field
}

pub fn execute<F: Field>(cli: &Cli) -> Result<Outcome> {
    let seed = cli.seed;
    match &cli.command {
        Command::BuildAlgebra { alg } => Ok(Outcome::built(json!(load_algebra::<F>(alg)?.as_ref()))),
        Command::BuildModule { alg, module, shift } => {
            let e = load_algebra::<F>(alg)?;
            let m = load_module(&e, module)?.shift(*shift)?;
            Ok(Outcome::built(m.to_json()))
        }
        Command::Check { alg, module, axioms, commutative, naive, flatness, hom_shift, adjunction, m, trials } => {
            let e = load_algebra::<F>(alg)?;
            let has_module = module.module.is_some()
                || module.free.is_some()
                || module.suspension.is_some()
                || module.quotient.is_some()
                || module.tail.is_some();
            if *axioms {
                let r = if has_module { load_module(&e, module)?.check_axioms() } else { e.check_axioms() };
                Ok(Outcome::report(&r))
            } else if *commutative {
                Ok(Outcome::report(&e.check_commutative(*naive)))
            } else if *flatness {
                Ok(Outcome::report(&flatness_report(&e, *m, *trials, seed)?))
            } else if *hom_shift {
                let x = if has_module { load_module(&e, module)? } else { EModule::free(&e, 1.min(e.cutoff()))? };
                let mut r = Report::new("hom-shift", x.cutoff());
                for gen in 0..=(*m).min(x.cutoff()) {
                    for k in 0..=x.cutoff() - gen {
                        for v in shift_iso_check(&x, gen, k)?.violations {
                            let mut cell = vec![gen];
                            cell.extend(v.cell);
                            r.fail(&v.law, &cell);
                        }
                    }
                }
                r.note(format!("[F_mE, M] against M[m] for m ≤ {m}; cells are (m, level, ...)"));
                Ok(Outcome::report(&r))
            } else {
                debug_assert!(*adjunction);
                let x = load_module(&e, module)?;
                let (_, r) = unit_counit(&x)?;
                Ok(Outcome::report(&r))
            }
        }
        Command::Ideal { op } => ideal_cmd::<F>(op, seed),
        Command::Torsion { op } => match op {
            TorsionOp::Test { alg, module } => {
                let e = load_algebra::<F>(alg)?;
                let v = is_torsion(&load_graded(&e, module)?)?;
                Ok(Outcome { ok: v.torsion, value: json!(v) })
            }
            TorsionOp::Closed { alg, module, n_max } => {
                let e = load_algebra::<F>(alg)?;
                let v = is_tors_closed(&load_graded(&e, module)?, *n_max)?;
                Ok(Outcome { ok: v.closed, value: json!(v) })
            }
        },
        Command::Reconstruct { op } => reconstruct_cmd::<F>(op),
        Command::Proj { op } => proj_cmd::<F>(op, seed),
        Command::Suite { which } => {
            let ids: Vec<usize> = if which == "all" {
                (1..=CRITERIA).collect()
            } else {
                vec![which.parse().map_err(|_| Error::Argument(format!("suite must be 1..={CRITERIA} or all")))?]
            };
            let results = ids.iter().map(|&c| suites::run(c, seed)).collect::<Result<Vec<_>>>()?;
            for r in &results {
                eprintln!("{}", r.summary());
            }
            let ok = results.iter().all(|r| r.passed);
            let value = if results.len() == 1 { json!(results[0]) } else { json!(results) };
            Ok(Outcome { value, ok })
        }
    }
}

fn ideal_cmd<F: Field>(op: &IdealOp, seed: u64) -> Result<Outcome> {
    match op {
        IdealOp::Closure { alg, gens } => {
            let e = load_algebra::<F>(alg)?;
            Ok(Outcome::built(ideal_json(&closure_of(&e, &gens.gens)?)))
        }
        IdealOp::Product { alg, left, right } => {
            let e = load_algebra::<F>(alg)?;
            let p = closure_of(&e, left)?.product(&closure_of(&e, right)?)?;
            Ok(Outcome::built(ideal_json(&p)))
        }
        IdealOp::Prime { alg, gens } => {
            let e = load_algebra::<F>(alg)?;
            let i = closure_of(&e, &gens.gens)?;
            let v = i.is_prime_up_to(e.cutoff(), seed);
            Ok(Outcome { ok: v.prime, value: json!({ "dims": i.dims(), "verdict": v }) })
        }
        IdealOp::Radical { alg, gens } => {
            let e = load_algebra::<F>(alg)?;
            let r = closure_of(&e, &gens.gens)?.radical_up_to(e.cutoff())?;
            Ok(Outcome::built(ideal_json(&r)))
        }
        IdealOp::TwoSided { alg, gens } => {
            let e = load_algebra::<F>(alg)?;
            Ok(Outcome::report(&closure_of(&e, &gens.gens)?.is_two_sided()))
        }
    }
}

fn reconstruct_cmd<F: Field>(op: &ReconstructOp) -> Result<Outcome> {
    match op {
        ReconstructOp::UvIdentity { alg, module } => {
            let e = load_algebra::<F>(alg)?;
            let m = load_module(&e, module)?;
            let x = u_functor(&m);
            let (pres, _) = x.presentation();
            let uv = u_functor(&v_functor(&e, &pres)?.module);
            let (uc, r) = unit_counit(&m)?;
            let unit_iso = uc.unit.iter().all(|u| u.is_invertible());
            let identity = uv == x;
            Ok(Outcome {
                ok: identity && unit_iso && r.passed,
                value: json!({
                    "dims": x.dims(),
                    "uv_dims": uv.dims(),
                    "identity": identity,
                    "unit_iso": unit_iso,
                    "adjunction": r,
                }),
            })
        }
        ReconstructOp::Filtration { alg, module, step } => {
            let e = load_algebra::<F>(alg)?;
            let m = load_graded(&e, module)?;
            let step = match step {
                Some(s) => *s,
                None => nonsymmetric_generation_degree(&e)?,
            };
            Ok(Outcome::report(&Filtration::new(&m, step).check(&m)?))
        }
        ReconstructOp::AMapCokernel { alg, n } => {
            let e = load_algebra::<F>(alg)?;
            let (g, v) = a_map_cokernel_torsion(&e, *n)?;
            let ok = v.torsion && v.max_annihilation().is_some_and(|a| a <= *n);
            Ok(Outcome { ok, value: json!({ "cokernel_dims": g.dims(), "verdict": v }) })
        }
    }
}

fn proj_cmd<F: Field>(op: &ProjOp, seed: u64) -> Result<Outcome> {
    match op {
        ProjOp::Vset { alg, gens, family: f } => {
            let e = load_algebra::<F>(alg)?;
            let fam = family(&e, f, seed)?;
            let set = v_set(&closure_of(&e, &gens.gens)?, &fam)?;
            Ok(Outcome::built(json!({ "family": family_json(&fam), "set": set })))
        }
        ProjOp::Laws { alg, ideals, family: f } | ProjOp::Spectral { alg, ideals, family: f } => {
            let e = load_algebra::<F>(alg)?;
            let fam = family(&e, f, seed)?;
            let list = ideal_list(&e, ideals)?;
            let laws = if matches!(op, ProjOp::Laws { .. }) {
                check_topology_laws(&fam, &list)?
            } else {
                check_spectral_properties(&fam, &list)?
            };
            let ok = laws.iter().all(|l| l.passed());
            Ok(Outcome { ok, value: json!({ "family": family_json(&fam), "laws": laws }) })
        }
        ProjOp::Sections { alg, f, bound } => {
            let e = load_algebra::<F>(alg)?;
            let fs = elements(&e, f)?;
            match fs.len() {
                0 => Err(Error::Argument("--f needs at least one element".into())),
                1 => Ok(Outcome::built(sections_commutative(&e, &fs[0], *bound)?.to_json())),
                _ => {
                    let (r, g) = gluing_check(&e, &fs, *bound)?;
                    Ok(Outcome { ok: r.passed, value: json!({ "report": r, "gluing": g.to_json() }) })
                }
            }
        }
        ProjOp::PnEmbedding { dim, cutoff, .. } => {
            let (r, data) = projective_space_embedding_check::<F>(*dim, *cutoff)?;
            Ok(Outcome { ok: r.passed, value: json!({ "report": r, "data": data }) })
        }
    }
}
