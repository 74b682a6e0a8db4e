//! `Proj S(V)` inside `Proj^Σ T(V)` as the zero set of the commutator ideal.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{letter_names, tensor_algebra, trivial_action, Element, MonomialRing, SymAlgebra};
use crate::error::{Error, Result};
use crate::ideal::{sigma_closure, SigmaIdeal};
use crate::linalg::{axpy, Matrix, Subspace};
use crate::rep::word_of;
use crate::report::Report;
use crate::scalars::Field;
use crate::sgroup::binomial;

/// Σ-closure of `x_i ⊗ x_j − x_j ⊗ x_i` in `T(V)`.
pub fn commutator_ideal<F: Field>(t: &Arc<SymAlgebra<F>>, d: usize) -> Result<SigmaIdeal<F>> {
    let mut gens = Vec::new();
    if t.cutoff() >= 2 {
        for i in 0..d {
            for j in i + 1..d {
                gens.push(Element::new(2, vec![(i * d + j, F::one()), (j * d + i, -F::one())]));
            }
        }
    }
    sigma_closure(t, &gens)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingCheck {
    pub quotient_dims: Vec<usize>,
    pub symmetric_dims: Vec<usize>,
    pub commutator_dims: Vec<usize>,
    pub pullbacks: Vec<String>,
}

/// `T(V)/I` against `S(V)` levelwise, every `w − σw` in `I`, and
/// preimages of monomial primes of `S(V)` are Σ-ideals containing `I`.
pub fn projective_space_embedding_check<F: Field>(d: usize, cutoff: usize) -> Result<(Report, EmbeddingCheck)> {
    if d == 0 {
        return Err(Error::Argument("dim V must be at least 1".into()));
    }
    let t = Arc::new(tensor_algebra::<F>(d, cutoff)?);
    let names = letter_names(d);
    let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let sring = MonomialRing::polynomial(&name_refs);
    let s = trivial_action::<F>(&sring, cutoff)?;
    let i = commutator_ideal(&t, d)?;
    let mut r = Report::new("pn-embedding", cutoff);
    let quotient_dims: Vec<usize> = (0..=cutoff).map(|n| t.dim(n) - i.level(n).dim()).collect();
    let symmetric_dims: Vec<usize> = (0..=cutoff).map(|n| binomial(d + n - 1, n)).collect();
    for n in 0..=cutoff {
        if quotient_dims[n] != symmetric_dims[n] || s.dim(n) != symmetric_dims[n] {
            r.fail("dimension", &[n]);
        }
    }
    for n in 2..=cutoff {
        'words: for w in 0..t.dim(n) {
            for k in 1..n {
                let sw = t.level(n).gen(k).col(w);
                let diff = axpy(&[(w, F::one())], &-F::one(), &sw);
                if !i.level(n).contains(&diff) {
                    r.fail("commutator", &[n, w]);
                    break 'words;
                }
            }
        }
    }
    // π: T_n → S_n, a word to its sorted monomial
    let projections: Vec<Matrix<F>> = (0..=cutoff)
        .map(|n| {
            let monos = sring.monomials(n);
            let index: HashMap<Vec<u32>, usize> = monos.into_iter().enumerate().map(|(k, m)| (m, k)).collect();
            let cols = (0..t.dim(n))
                .map(|w| {
                    let mut e = vec![0u32; d];
                    for l in word_of(w, n, d) {
                        e[l] += 1;
                    }
                    vec![(index[&e], F::one())]
                })
                .collect();
            Matrix::from_sparse_cols(s.dim(n), t.dim(n), cols)
        })
        .collect();
    let s = Arc::new(s);
    let mut pullbacks = Vec::new();
    for mask in 0u32..(1 << d) - 1 {
        let vars: Vec<usize> = (0..d).filter(|k| mask >> k & 1 == 1).collect();
        let gens: Vec<Element<F>> = vars
            .iter()
            .filter(|_| cutoff >= 1)
            .map(|&k| {
                let mut e = vec![0u32; d];
                e[k] = 1;
                Element::basis(1, sring.monomials(1).iter().position(|m| *m == e).unwrap())
            })
            .collect();
        let p = sigma_closure(&s, &gens)?;
        let levels: Vec<Subspace<F>> = (0..=cutoff)
            .map(|n| {
                let to_quot = p.level(n).quotient_map().mul(&projections[n]);
                Subspace::from_vectors(t.dim(n), to_quot.kernel())
            })
            .collect();
        let label = if vars.is_empty() {
            "(0)".to_string()
        } else {
            format!("({})", vars.iter().map(|&k| names[k].clone()).collect::<Vec<_>>().join(", "))
        };
        match SigmaIdeal::from_levels(&t, levels) {
            Ok(pre) if i.is_subset(&pre) => pullbacks.push(label),
            _ => r.fail("pullback", &[mask as usize]),
        }
    }
    let commutator_dims = i.dims();
    Ok((r, EmbeddingCheck { quotient_dims, symmetric_dims, commutator_dims, pullbacks }))
}
