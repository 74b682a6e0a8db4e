//! `Proj^Σ E` evaluated on finite families of prime Σ-ideals.

mod embedding;
mod sections;

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{AlgebraKind, Element, SymAlgebra};
use crate::error::{Error, Result};
use crate::ideal::{sigma_closure, SigmaIdeal};
use crate::scalars::Field;

pub use embedding::{commutator_ideal, projective_space_embedding_check, EmbeddingCheck};
pub use sections::{gluing_check, sections_commutative, Chart, ChartGenerator, Gluing, Restriction};

/// A finite set of points of `Proj^Σ E`.
#[derive(Clone, Debug)]
pub struct PrimeFamily<F: Field> {
    algebra: Arc<SymAlgebra<F>>,
    primes: Vec<SigmaIdeal<F>>,
    labels: Vec<String>,
    /// Candidates dropped by the constructor, with the reason.
    pub rejected: Vec<(String, String)>,
}

pub fn ideal_label<F: Field>(i: &SigmaIdeal<F>) -> String {
    let alg = i.algebra();
    if i.generators().is_empty() {
        return "(0)".into();
    }
    let parts: Vec<String> = i.generators().iter().map(|g| alg.format_element(g)).collect();
    format!("({})", parts.join(", "))
}

impl<F: Field> PrimeFamily<F> {
    /// Keeps the candidates that pass the cutoff primality test and do not
    /// contain `E_{≥1}`; drops duplicates.
    pub fn new(alg: &Arc<SymAlgebra<F>>, candidates: Vec<SigmaIdeal<F>>, seed: u64) -> Result<Self> {
        let mut fam = PrimeFamily { algebra: alg.clone(), primes: Vec::new(), labels: Vec::new(), rejected: Vec::new() };
        for p in candidates {
            check_same(alg, p.algebra())?;
            let label = ideal_label(&p);
            if p.contains_positive() {
                fam.rejected.push((label, "contains E_{>=1}".into()));
            } else if let Some(j) = fam.primes.iter().position(|q| *q == p) {
                fam.rejected.push((label, format!("duplicate of {}", fam.labels[j])));
            } else if !p.is_prime_up_to(p.cutoff(), seed).prime {
                fam.rejected.push((label, "not prime up to cutoff".into()));
            } else {
                fam.labels.push(label);
                fam.primes.push(p);
            }
        }
        Ok(fam)
    }

    /// A family taken as given, without primality or duplicate checks.
    pub fn unchecked(alg: &Arc<SymAlgebra<F>>, primes: Vec<SigmaIdeal<F>>) -> Result<Self> {
        for p in &primes {
            check_same(alg, p.algebra())?;
        }
        let labels = primes.iter().map(ideal_label).collect();
        Ok(PrimeFamily { algebra: alg.clone(), primes, labels, rejected: Vec::new() })
    }

    pub fn algebra(&self) -> &Arc<SymAlgebra<F>> {
        &self.algebra
    }

    pub fn primes(&self) -> &[SigmaIdeal<F>] {
        &self.primes
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn cutoff(&self) -> usize {
        self.algebra.cutoff()
    }
}

fn check_same<F: Field>(a: &Arc<SymAlgebra<F>>, b: &Arc<SymAlgebra<F>>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::AlgebraMismatch("ideal and family over different algebras".into()))
    }
}

/// Degree-one generators: letters of `T(V)` or ring generators of a
/// trivial-action monomial ring.
pub fn variables<F: Field>(alg: &SymAlgebra<F>) -> Result<Vec<Element<F>>> {
    match alg.kind() {
        AlgebraKind::Tensor { dim } => Ok((0..*dim).filter(|_| alg.cutoff() >= 1).map(|i| Element::basis(1, i)).collect()),
        AlgebraKind::Trivial { ring } => {
            let mut out = Vec::new();
            for (k, &d) in ring.degrees.iter().enumerate() {
                if d > alg.cutoff() {
                    continue;
                }
                let mut e = vec![0u32; ring.vars.len()];
                e[k] = 1;
                if let Some(i) = ring.monomials(d).iter().position(|m| *m == e) {
                    out.push(Element::basis(d, i));
                }
            }
            Ok(out)
        }
        _ => Err(Error::Unsupported("monomial families exist for tensor and trivial-action monomial algebras".into())),
    }
}

/// Σ-closures of all subsets of the variables that pass the primality test.
pub fn monomial_family<F: Field>(alg: &Arc<SymAlgebra<F>>, seed: u64) -> Result<PrimeFamily<F>> {
    let vars = variables(alg)?;
    if vars.len() > 8 {
        return Err(Error::Unsupported("monomial families on more than 8 variables".into()));
    }
    let mut cands = Vec::new();
    for mask in 0u32..(1 << vars.len()) {
        let gens: Vec<Element<F>> = (0..vars.len()).filter(|k| mask >> k & 1 == 1).map(|k| vars[k].clone()).collect();
        cands.push(sigma_closure(alg, &gens)?);
    }
    PrimeFamily::new(alg, cands, seed)
}

/// `V(I)` or `D(f)` as member indices into a family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointSet {
    pub label: String,
    pub members: Vec<usize>,
}

pub type ClosedSet = PointSet;
pub type OpenSet = PointSet;

pub fn v_set<F: Field>(i: &SigmaIdeal<F>, fam: &PrimeFamily<F>) -> Result<ClosedSet> {
    check_same(fam.algebra(), i.algebra())?;
    let members = (0..fam.len()).filter(|&k| i.is_subset(&fam.primes[k])).collect();
    Ok(PointSet { label: format!("V{}", ideal_label(i)), members })
}

pub fn d_set<F: Field>(f: &Element<F>, fam: &PrimeFamily<F>) -> OpenSet {
    let members = (0..fam.len()).filter(|&k| !fam.primes[k].contains(f)).collect();
    PointSet { label: format!("D({})", fam.algebra.format_element(f)), members }
}

/// Outcome of one law over a family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawCheck {
    pub law: String,
    pub status: String,
    pub family_size: usize,
    pub cutoff: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl LawCheck {
    fn new<F: Field>(law: &str, fam: &PrimeFamily<F>) -> Self {
        LawCheck {
            law: law.into(),
            status: "verified".into(),
            family_size: fam.len(),
            cutoff: fam.cutoff(),
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn fail(&mut self, s: String) {
        self.status = "failed".into();
        self.failures.push(s);
    }

    pub fn passed(&self) -> bool {
        self.status == "verified"
    }
}

fn as_set(s: &PointSet) -> BTreeSet<usize> {
    s.members.iter().copied().collect()
}

fn show(fam_labels: &[String], s: &BTreeSet<usize>) -> String {
    let names: Vec<&str> = s.iter().map(|&k| fam_labels[k].as_str()).collect();
    format!("{{{}}}", names.join(", "))
}

/// Homogeneous generators of the ideals, without repeats.
fn tested_elements<F: Field>(ideals: &[SigmaIdeal<F>]) -> Vec<Element<F>> {
    let mut out: Vec<Element<F>> = Vec::new();
    for g in ideals.iter().flat_map(|i| i.generators().iter()) {
        if !g.is_zero() && !out.contains(g) {
            out.push(g.clone());
        }
    }
    out
}

/// `V(IJ) = V(I) ∪ V(J)`, `V(ΣI) = ∩V(I)`, `D(f) ∩ D(g) = D(fg)` and
/// monotonicity of `V`, relative to the family.
pub fn check_topology_laws<F: Field>(fam: &PrimeFamily<F>, ideals: &[SigmaIdeal<F>]) -> Result<Vec<LawCheck>> {
    let alg = fam.algebra();
    let vs: Vec<BTreeSet<usize>> = ideals.iter().map(|i| v_set(i, fam).map(|s| as_set(&s))).collect::<Result<_>>()?;
    let names: Vec<String> = ideals.iter().map(ideal_label).collect();

    let mut prod = LawCheck::new("V(IJ)=V(I)∪V(J)", fam);
    for a in 0..ideals.len() {
        for b in a..ideals.len() {
            let ij = ideals[a].product(&ideals[b])?;
            let lhs = as_set(&v_set(&ij, fam)?);
            let rhs: BTreeSet<usize> = vs[a].union(&vs[b]).copied().collect();
            if lhs != rhs {
                prod.fail(format!("I={} J={}: {} vs {}", names[a], names[b], show(fam.labels(), &lhs), show(fam.labels(), &rhs)));
            }
        }
    }

    let mut sum = LawCheck::new("V(ΣI)=∩V(I)", fam);
    let subsets: Vec<Vec<usize>> = if ideals.len() <= 8 {
        (1u32..(1 << ideals.len())).map(|m| (0..ideals.len()).filter(|k| m >> k & 1 == 1).collect()).collect()
    } else {
        sum.notes.push("more than 8 ideals: pairs and the full sum only".into());
        let mut s: Vec<Vec<usize>> =
            (0..ideals.len()).flat_map(|a| (a..ideals.len()).map(move |b| vec![a, b])).collect();
        s.push((0..ideals.len()).collect());
        s
    };
    for sub in subsets {
        let mut total = ideals[sub[0]].clone();
        for &k in &sub[1..] {
            total = total.sum(&ideals[k])?;
        }
        let lhs = as_set(&v_set(&total, fam)?);
        let rhs = sub[1..].iter().fold(vs[sub[0]].clone(), |acc, &k| acc.intersection(&vs[k]).copied().collect());
        if lhs != rhs {
            let which: Vec<&str> = sub.iter().map(|&k| names[k].as_str()).collect();
            sum.fail(format!("sum of {}: {} vs {}", which.join(" + "), show(fam.labels(), &lhs), show(fam.labels(), &rhs)));
        }
    }

    let mut opens = LawCheck::new("D(f)∩D(g)=D(fg)", fam);
    let elems = tested_elements(ideals);
    for a in 0..elems.len() {
        for b in a..elems.len() {
            let Some(fg) = alg.multiply(&elems[a], &elems[b]) else {
                opens.notes.push(format!(
                    "{} * {} beyond cutoff",
                    alg.format_element(&elems[a]),
                    alg.format_element(&elems[b])
                ));
                continue;
            };
            let lhs: BTreeSet<usize> =
                as_set(&d_set(&elems[a], fam)).intersection(&as_set(&d_set(&elems[b], fam))).copied().collect();
            let rhs = as_set(&d_set(&fg, fam));
            if lhs != rhs {
                opens.fail(format!(
                    "f={} g={}: {} vs {}",
                    alg.format_element(&elems[a]),
                    alg.format_element(&elems[b]),
                    show(fam.labels(), &lhs),
                    show(fam.labels(), &rhs)
                ));
            }
        }
    }

    let mut mono = LawCheck::new("I⊆J ⇒ V(J)⊆V(I)", fam);
    for a in 0..ideals.len() {
        for b in 0..ideals.len() {
            if ideals[a].is_subset(&ideals[b]) && !vs[b].is_subset(&vs[a]) {
                mono.fail(format!("I={} J={}", names[a], names[b]));
            }
        }
    }
    Ok(vec![prod, sum, opens, mono])
}

/// T₀ separation, finite subcovers and generic points on the finite
/// subspace cut out by the family.
pub fn check_spectral_properties<F: Field>(fam: &PrimeFamily<F>, ideals: &[SigmaIdeal<F>]) -> Result<Vec<LawCheck>> {
    let alg = fam.algebra();
    let n = fam.len();
    let p = fam.primes();

    let mut t0 = LawCheck::new("T0", fam);
    for a in 0..n {
        for b in a + 1..n {
            if p[a] == p[b] {
                t0.fail(format!("points {a} and {b} coincide: {}", fam.labels[a]));
            }
        }
    }

    let mut qc = LawCheck::new("quasi-compact", fam);
    let elems = tested_elements(ideals);
    let opens: Vec<BTreeSet<usize>> = elems.iter().map(|f| as_set(&d_set(f, fam))).collect();
    for a in 0..elems.len() {
        let others: Vec<usize> = (0..elems.len()).filter(|&b| b != a).collect();
        let union: BTreeSet<usize> = others.iter().flat_map(|&b| opens[b].iter().copied()).collect();
        if !opens[a].is_subset(&union) {
            continue;
        }
        // greedy subcover
        let mut left = opens[a].clone();
        let mut chosen = Vec::new();
        while !left.is_empty() {
            let best = others.iter().copied().max_by_key(|&b| (opens[b].intersection(&left).count(), std::cmp::Reverse(b)));
            match best {
                Some(b) if opens[b].intersection(&left).count() > 0 => {
                    left = left.difference(&opens[b]).copied().collect();
                    chosen.push(b);
                }
                _ => break,
            }
        }
        let covered: BTreeSet<usize> = chosen.iter().flat_map(|&b| opens[b].iter().copied()).collect();
        if !opens[a].is_subset(&covered) {
            qc.fail(format!("no finite subcover of D({})", alg.format_element(&elems[a])));
        } else {
            let names: Vec<String> = chosen.iter().map(|&b| alg.format_element(&elems[b])).collect();
            qc.notes.push(format!("D({}) covered by D of {}", alg.format_element(&elems[a]), names.join(", ")));
        }
    }
    qc.notes.push("only covers by the tested basic opens are considered".into());

    let mut gp = LawCheck::new("generic point", fam);
    let mut closed: Vec<(String, BTreeSet<usize>)> =
        ideals.iter().map(|i| v_set(i, fam).map(|s| (s.label.clone(), as_set(&s)))).collect::<Result<_>>()?;
    for (k, q) in p.iter().enumerate() {
        closed.push((format!("closure of {}", fam.labels[k]), as_set(&v_set(q, fam)?)));
    }
    for (name, set) in &closed {
        if set.is_empty() {
            continue;
        }
        let minimal: Vec<usize> =
            set.iter().copied().filter(|&a| !set.iter().any(|&b| b != a && p[b].is_subset(&p[a]) && p[b] != p[a])).collect();
        let classes: BTreeSet<Vec<usize>> = minimal
            .iter()
            .map(|&a| minimal.iter().copied().filter(|&b| p[a] == p[b]).collect())
            .collect();
        if classes.len() > 1 {
            gp.notes.push(format!("{name} is reducible"));
            continue;
        }
        if minimal.len() > 1 {
            gp.fail(format!("{name}: generic point not unique"));
            continue;
        }
        let g = minimal[0];
        if as_set(&v_set(&p[g], fam)?) != *set {
            gp.fail(format!("{name}: closure of {} differs", fam.labels[g]));
        } else if !name.starts_with("closure") {
            gp.notes.push(format!("{name} has generic point {}", fam.labels[g]));
        }
    }
    Ok(vec![t0, qc, gp])
}

/// `√I` against `∩_{P ∈ V(I)} P` in positive degrees; an empty `V(I)`
/// intersects to `E_{≥1}`.
pub fn radical_intersection_check<F: Field>(i: &SigmaIdeal<F>, fam: &PrimeFamily<F>) -> Result<LawCheck> {
    let mut law = LawCheck::new("√I=∩V(I)", fam);
    let rad = i.radical_up_to(i.cutoff())?;
    let v = v_set(i, fam)?;
    let mut meet = SigmaIdeal::tail(fam.algebra(), 1);
    for &k in &v.members {
        meet = meet.intersect(&fam.primes()[k])?;
    }
    for d in 1..=i.cutoff() {
        if rad.level(d) != meet.level(d) {
            law.fail(format!("{}: degree {d}: radical dim {} vs intersection dim {}", ideal_label(i), rad.level(d).dim(), meet.level(d).dim()));
        }
    }
    Ok(law)
}

#[cfg(test)]
mod tests;
