use std::collections::BTreeMap;

use super::builders::{letter_names, MonomialRing, SymGroupAction};
use super::{AlgebraKind, Element, SymAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{axpy, scale_sparse, SparseVec};
use crate::scalars::Field;
use crate::sgroup::Permutation;

/// A textual description of one of the builders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingSpec {
    Tensor(usize),
    Exterior(usize),
    SymGroup,
    Trivial(MonomialRing),
}

impl RingSpec {
    pub fn build<F: Field>(&self, cutoff: usize) -> Result<SymAlgebra<F>> {
        match self {
            RingSpec::Tensor(d) => super::tensor_algebra(*d, cutoff),
            RingSpec::Exterior(d) => super::exterior_algebra(*d, cutoff),
            RingSpec::SymGroup => super::sym_group_algebra(cutoff),
            RingSpec::Trivial(r) => super::trivial_action(r, cutoff),
        }
    }
}

/// Parses `T(2)`, `Lambda(3)`, `QS`, `Q[x,y]`, `Q[x:1,y:2]/(x^3, x*y)`.
pub fn parse_ring_spec(s: &str) -> Result<RingSpec> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Argument(format!("cannot parse ring {s:?}"));
    let arg = |prefix: &str| -> Option<Result<usize>> {
        s.strip_prefix(prefix)
            .and_then(|r| r.strip_suffix(')'))
            .map(|d| d.parse::<usize>().map_err(|_| bad()))
    };
    if let Some(d) = arg("T(") {
        return Ok(RingSpec::Tensor(d?));
    }
    if let Some(d) = arg("Lambda(").or_else(|| arg("L(")) {
        return Ok(RingSpec::Exterior(d?));
    }
    if matches!(s.as_str(), "QS" | "kS" | "QSigma" | "kSigma") {
        return Ok(RingSpec::SymGroup);
    }
    let rest = s.strip_prefix("Q[").or_else(|| s.strip_prefix("k[")).ok_or_else(bad)?;
    let (gens, rels) = rest.split_once(']').ok_or_else(bad)?;
    let mut vars = Vec::new();
    let mut degrees = Vec::new();
    for g in gens.split(',').filter(|g| !g.is_empty()) {
        match g.split_once(':') {
            Some((v, d)) => {
                vars.push(v.to_string());
                degrees.push(d.parse().map_err(|_| bad())?);
            }
            None => {
                vars.push(g.to_string());
                degrees.push(1);
            }
        }
    }
    for v in &vars {
        if !v.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
            || !v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        {
            return Err(Error::Config(format!("invalid generator name {v:?}")));
        }
    }
    let mut relations = Vec::new();
    if !rels.is_empty() {
        let inner = rels.strip_prefix("/(").and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        for m in inner.split(',').filter(|m| !m.is_empty()) {
            relations.push(parse_monomial(m, &vars)?);
        }
    }
    Ok(RingSpec::Trivial(MonomialRing::new(vars, degrees, relations)?))
}

fn parse_monomial(m: &str, vars: &[String]) -> Result<Vec<u32>> {
    let mut e = vec![0u32; vars.len()];
    for f in m.split('*') {
        let (v, k) = match f.split_once('^') {
            Some((v, k)) => (v, k.parse::<u32>().map_err(|_| Error::Config(format!("bad exponent in {m:?}")))?),
            None => (f, 1),
        };
        let i = vars
            .iter()
            .position(|x| x == v)
            .ok_or_else(|| Error::Config(format!("relation {m:?} uses unknown generator {v:?}")))?;
        e[i] += k;
    }
    Ok(e)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    Perm(Vec<usize>),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let bad = |m: &str| Error::Argument(format!("cannot parse element {s:?}: {m}"));
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = cs[st..i].iter().collect();
            out.push(Tok::Num(t.parse().map_err(|_| bad("number too large"))?));
        } else if c.is_ascii_alphabetic() {
            let st = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if c == '[' {
            let end = cs[i..].iter().position(|&x| x == ']').ok_or_else(|| bad("unclosed ["))? + i;
            let body: String = cs[i + 1..end].iter().collect();
            let images = if body.trim().is_empty() {
                Vec::new()
            } else {
                body.split(',')
                    .map(|x| x.trim().parse::<usize>().map_err(|_| bad("bad permutation")))
                    .collect::<Result<Vec<_>>>()?
            };
            out.push(Tok::Perm(images));
            i = end + 1;
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(bad(&format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

/// Inhomogeneous value during evaluation: degree ↦ coordinates.
type Value<F> = BTreeMap<usize, SparseVec<F>>;

struct Parser<'a, F: Field> {
    alg: &'a SymAlgebra<F>,
    toks: Vec<Tok>,
    pos: usize,
    src: String,
}

impl<'a, F: Field> Parser<'a, F> {
    fn err(&self, m: &str) -> Error {
        Error::Argument(format!("cannot parse element {:?}: {m}", self.src))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Value<F>> {
        let mut acc = if self.eat('-') { neg(self.term()?) } else { self.term()? };
        loop {
            if self.eat('+') {
                acc = add(acc, self.term()?);
            } else if self.eat('-') {
                acc = add(acc, neg(self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Value<F>> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                let rhs = self.power()?;
                acc = self.mul(&acc, &rhs)?;
            } else if self.eat('/') {
                let d = match self.peek() {
                    Some(Tok::Num(d)) if *d != 0 => F::from_i64(*d),
                    _ => return Err(self.err("division by a nonzero integer only")),
                };
                self.pos += 1;
                let inv = F::one() / d;
                acc = acc.into_iter().map(|(k, v)| (k, scale_sparse(&v, &inv))).collect();
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Value<F>> {
        let base = self.atom()?;
        if self.eat('^') {
            let k = match self.peek() {
                Some(Tok::Num(k)) => *k,
                _ => return Err(self.err("exponent expected")),
            };
            self.pos += 1;
            let mut acc = self.scalar(F::one());
            for _ in 0..k {
                acc = self.mul(&acc, &base)?;
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn scalar(&self, c: F) -> Value<F> {
        let mut v = Value::new();
        v.insert(0, scale_sparse(&self.alg.one().coords, &c));
        v
    }

    fn atom(&mut self) -> Result<Value<F>> {
        let tok = self.peek().cloned().ok_or_else(|| self.err("unexpected end"))?;
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(self.scalar(F::from_i64(n))),
            Tok::Op('(') => {
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("missing )"));
                }
                Ok(v)
            }
            Tok::Ident(name) => self.generator(&name),
            Tok::Perm(images) => {
                if !matches!(self.alg.kind(), AlgebraKind::SymGroup { .. }) {
                    return Err(self.err("permutations only name elements of kΣ_*"));
                }
                let p = Permutation::new(images)?;
                let n = p.degree();
                if n > self.alg.cutoff() {
                    return Err(self.err("degree beyond the cutoff"));
                }
                Ok(single(n, vec![(p.lex_rank(), F::one())]))
            }
            Tok::Op(c) => Err(self.err(&format!("unexpected {c:?}"))),
        }
    }

    fn generator(&self, name: &str) -> Result<Value<F>> {
        let unknown = || self.err(&format!("unknown generator {name:?}"));
        match self.alg.kind() {
            AlgebraKind::Tensor { dim } | AlgebraKind::Exterior { dim } => {
                let i = letter_names(*dim).iter().position(|x| x == name).ok_or_else(unknown)?;
                if self.alg.cutoff() < 1 {
                    return Err(self.err("degree beyond the cutoff"));
                }
                Ok(single(1, vec![(i, F::one())]))
            }
            AlgebraKind::Trivial { ring } => {
                let k = ring.vars.iter().position(|x| x == name).ok_or_else(unknown)?;
                let d = ring.degrees[k];
                if d > self.alg.cutoff() {
                    return Err(self.err("degree beyond the cutoff"));
                }
                let mut e = vec![0u32; ring.vars.len()];
                e[k] = 1;
                let coords = match ring.monomials(d).iter().position(|m| *m == e) {
                    Some(i) => vec![(i, F::one())],
                    None => Vec::new(),
                };
                Ok(single(d, coords))
            }
            AlgebraKind::SymGroup { action: SymGroupAction::Regular | SymGroupAction::Conjugation } => {
                if name == "id" || name == "e" {
                    return Ok(single(1, vec![(0, F::one())]));
                }
                Err(unknown())
            }
            AlgebraKind::Custom => {
                let rest = name.strip_prefix('e').ok_or_else(unknown)?;
                let (n, i) = rest.split_once('_').ok_or_else(unknown)?;
                let n: usize = n.parse().map_err(|_| unknown())?;
                let i: usize = i.parse().map_err(|_| unknown())?;
                if n > self.alg.cutoff() || i >= self.alg.dim(n) {
                    return Err(unknown());
                }
                Ok(single(n, vec![(i, F::one())]))
            }
        }
    }

    fn mul(&self, a: &Value<F>, b: &Value<F>) -> Result<Value<F>> {
        let mut out = Value::new();
        for (da, va) in a {
            for (db, vb) in b {
                let x = Element::new(*da, va.clone());
                let y = Element::new(*db, vb.clone());
                let z = self.alg.multiply(&x, &y).ok_or_else(|| self.err("product beyond the cutoff"))?;
                let e = out.entry(z.degree).or_default();
                *e = axpy(e, &F::one(), &z.coords);
            }
        }
        Ok(out)
    }
}

fn single<F: Field>(d: usize, v: SparseVec<F>) -> Value<F> {
    let mut out = Value::new();
    out.insert(d, v);
    out
}

fn add<F: Field>(mut a: Value<F>, b: Value<F>) -> Value<F> {
    for (d, v) in b {
        let e = a.entry(d).or_default();
        *e = axpy(e, &F::one(), &v);
    }
    a
}

fn neg<F: Field>(a: Value<F>) -> Value<F> {
    a.into_iter().map(|(d, v)| (d, scale_sparse(&v, &-F::one()))).collect()
}

/// Parses a homogeneous element such as `x-y`, `2*x*y + y^2` or `[1,2]-[2,1]`.
pub fn parse_element<F: Field>(alg: &SymAlgebra<F>, s: &str) -> Result<Element<F>> {
    let mut p = Parser { alg, toks: tokenize(s)?, pos: 0, src: s.to_string() };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    let nonzero: Vec<(usize, SparseVec<F>)> = v.into_iter().filter(|(_, c)| !c.is_empty()).collect();
    match nonzero.len() {
        0 => Ok(Element::new(0, Vec::new())),
        1 => {
            let (d, c) = nonzero.into_iter().next().unwrap();
            Ok(Element::new(d, c))
        }
        _ => Err(Error::Argument(format!("element {s:?} is not homogeneous"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Rational;

    type Q = Rational;

    #[test]
    fn ring_specs() {
        assert_eq!(parse_ring_spec("T(2)").unwrap(), RingSpec::Tensor(2));
        assert_eq!(parse_ring_spec("Lambda(3)").unwrap(), RingSpec::Exterior(3));
        assert_eq!(parse_ring_spec("QS").unwrap(), RingSpec::SymGroup);
        let RingSpec::Trivial(r) = parse_ring_spec("Q[x]/(x^3)").unwrap() else { panic!() };
        assert_eq!(r.relations, vec![vec![3]]);
        let RingSpec::Trivial(r) = parse_ring_spec("Q[x:1, y:2]").unwrap() else { panic!() };
        assert_eq!(r.degrees, vec![1, 2]);
        assert!(parse_ring_spec("Q[x]/(z)").is_err());
        assert!(parse_ring_spec("R(2)").is_err());
    }

    #[test]
    fn elements_in_polynomial_ring() {
        let a = parse_ring_spec("Q[x,y]").unwrap().build::<Q>(4).unwrap();
        let e = a.parse_element("x-y").unwrap();
        assert_eq!(e.degree, 1);
        assert_eq!(e.coords, vec![(0, Q::from_i64(1)), (1, Q::from_i64(-1))]);
        let sq = a.parse_element("(x+y)^2").unwrap();
        // x^2 + 2xy + y^2 on the basis x^2, xy, y^2.
        assert_eq!(sq.coords, vec![(0, Q::from_i64(1)), (1, Q::from_i64(2)), (2, Q::from_i64(1))]);
        assert!(a.parse_element("x+x*y").is_err());
        assert_eq!(a.parse_element("x/2").unwrap().coords, vec![(0, Q::new(1, 2))]);
    }

    #[test]
    fn elements_in_tensor_and_group_algebras() {
        let t = parse_ring_spec("T(2)").unwrap().build::<Q>(3).unwrap();
        let xy = t.parse_element("x*y").unwrap();
        assert_eq!(xy, Element::basis(2, 1));
        assert_eq!(t.basis_label(2, 1), "x*y");
        let s = parse_ring_spec("QS").unwrap().build::<Q>(3).unwrap();
        let v = s.parse_element("[1,2]+[2,1]").unwrap();
        assert_eq!(v.coords, vec![(0, Q::from_i64(1)), (1, Q::from_i64(1))]);
        let w = s.parse_element("id*id").unwrap();
        assert_eq!(w, Element::basis(2, 0));
        assert!(t.parse_element("x*y*x*y").is_err());
    }

    #[test]
    fn format_then_parse() {
        let a = parse_ring_spec("Q[x,y]").unwrap().build::<Q>(3).unwrap();
        for src in ["x - y", "-x + 2*y", "(1/2)*x^2 - (3/4)*x*y", "y^3"] {
            let e = a.parse_element(src).unwrap();
            assert_eq!(a.format_element(&e), src);
            assert_eq!(a.parse_element(&a.format_element(&e)).unwrap(), e);
        }
        let s = parse_ring_spec("QS").unwrap().build::<Q>(2).unwrap();
        let v = s.parse_element("[1,2] - [2,1]").unwrap();
        assert_eq!(s.parse_element(&s.format_element(&v)).unwrap(), v);
    }
}
