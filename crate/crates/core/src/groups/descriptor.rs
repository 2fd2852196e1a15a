use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::chain::{Chain, CoordinateChain, FactorialChain};
use super::{
    CyclicElem, CyclicSum, DirectSum, FreeAbelian, Group, Heisenberg, QmodZ, SparseElem,
    Unitriangular, UtMatrix, Vector,
};
use crate::error::{Error, Result};
use crate::scalar::{self, Coord};

/// Declarative description of a supported group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupDescriptor {
    FreeAbelian(usize),
    /// `Z^inf`, countably many copies of `Z`.
    FreeAbelianInfinite,
    CyclicSum {
        orders: Vec<u64>,
        tail: Option<u64>,
    },
    QmodZ,
    Unitriangular(usize),
    DirectSum(Vec<GroupDescriptor>),
}

impl GroupDescriptor {
    /// Parses `Z^2 + Z_3 + Z_9`, `Z_2^inf`, `Q/Z`, `UT3`, `Z + Z_2^inf`, ...
    pub fn parse(text: &str) -> Result<Self> {
        let mut p = Parser {
            s: text.as_bytes(),
            pos: 0,
        };
        let mut terms = vec![p.term()?];
        loop {
            p.skip_ws();
            if p.pos == p.s.len() {
                break;
            }
            p.expect(b'+', "'+' or end of input")?;
            terms.push(p.term()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().expect("one term")
        } else {
            GroupDescriptor::DirectSum(terms)
        })
    }

    /// Summands with nested sums flattened.
    pub fn summands(&self) -> Vec<GroupDescriptor> {
        match self {
            GroupDescriptor::DirectSum(parts) => parts.iter().flat_map(|p| p.summands()).collect(),
            other => vec![other.clone()],
        }
    }

    pub fn is_abelian(&self) -> bool {
        self.summands()
            .iter()
            .all(|d| !matches!(d, GroupDescriptor::Unitriangular(_)))
    }

    pub fn is_finitely_generated(&self) -> bool {
        self.summands().iter().all(|d| match d {
            GroupDescriptor::FreeAbelianInfinite | GroupDescriptor::QmodZ => false,
            GroupDescriptor::CyclicSum { tail, .. } => tail.is_none(),
            _ => true,
        })
    }

    pub fn is_locally_finite(&self) -> bool {
        self.summands().iter().all(|d| {
            matches!(
                d,
                GroupDescriptor::CyclicSum { .. } | GroupDescriptor::QmodZ
            )
        })
    }

    /// Torsion-free rank of an abelian descriptor; `None` means infinite.
    pub fn free_rank(&self) -> Option<usize> {
        let mut r = 0;
        for d in self.summands() {
            match d {
                GroupDescriptor::FreeAbelian(m) => r += m,
                GroupDescriptor::FreeAbelianInfinite => return None,
                _ => {}
            }
        }
        Some(r)
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::FreeAbelian(1) => write!(f, "Z"),
            GroupDescriptor::FreeAbelian(m) => write!(f, "Z^{m}"),
            GroupDescriptor::FreeAbelianInfinite => write!(f, "Z^inf"),
            GroupDescriptor::CyclicSum { orders, tail } => {
                let mut parts: Vec<String> = orders.iter().map(|n| format!("Z_{n}")).collect();
                if let Some(p) = tail {
                    parts.push(format!("Z_{p}^inf"));
                }
                write!(f, "{}", parts.join(" + "))
            }
            GroupDescriptor::QmodZ => write!(f, "Q/Z"),
            GroupDescriptor::Unitriangular(n) => write!(f, "UT{n}"),
            GroupDescriptor::DirectSum(parts) => {
                let s: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "{}", s.join(" + "))
            }
        }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, expected: &str) -> Result<T> {
        Err(Error::Parse {
            position: self.pos,
            expected: expected.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8, what: &str) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(what)
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        if self.s[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("a positive integer");
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        text.parse().or_else(|_| {
            self.pos = start;
            self.err("an integer that fits in 64 bits")
        })
    }

    /// `^n` or `^inf`; `None` means infinite, absent exponent means 1.
    fn exponent(&mut self) -> Result<Option<u64>> {
        self.skip_ws();
        if self.peek() != Some(b'^') {
            return Ok(Some(1));
        }
        self.pos += 1;
        self.skip_ws();
        if self.keyword("inf") {
            return Ok(None);
        }
        let n = self.number()?;
        if n == 0 {
            self.pos -= 1;
            return self.err("a positive exponent or 'inf'");
        }
        Ok(Some(n))
    }

    fn term(&mut self) -> Result<GroupDescriptor> {
        self.skip_ws();
        if self.keyword("Q/Z") {
            return Ok(GroupDescriptor::QmodZ);
        }
        if self.keyword("UT") {
            if self.peek() == Some(b'_') {
                self.pos += 1;
            }
            let at = self.pos;
            let n = self.number()?;
            if !(3..=5).contains(&n) {
                self.pos = at;
                return self.err("a matrix size between 3 and 5");
            }
            return Ok(GroupDescriptor::Unitriangular(n as usize));
        }
        if self.keyword("Z") {
            if self.peek() == Some(b'_') {
                self.pos += 1;
                let at = self.pos;
                let n = self.number()?;
                if n < 2 {
                    self.pos = at;
                    return self.err("a cyclic order of at least 2");
                }
                return Ok(match self.exponent()? {
                    None => GroupDescriptor::CyclicSum {
                        orders: Vec::new(),
                        tail: Some(n),
                    },
                    Some(k) => GroupDescriptor::CyclicSum {
                        orders: vec![n; k as usize],
                        tail: None,
                    },
                });
            }
            return Ok(match self.exponent()? {
                None => GroupDescriptor::FreeAbelianInfinite,
                Some(k) => GroupDescriptor::FreeAbelian(k as usize),
            });
        }
        self.err("'Z', 'Z_n', 'Q/Z' or 'UTn'")
    }
}

/// One summand of a descriptor group.
#[derive(Debug, Clone)]
pub enum Factor<T: Coord> {
    Free(FreeAbelian<T>),
    FreeInf(DirectSum<FreeAbelian<T>>),
    Cyclic(CyclicSum),
    Rational(QmodZ<T>),
    Heis(Heisenberg<T>),
    Ut(Unitriangular<T>),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FactorElem<T: Coord> {
    Free(Vector<T>),
    FreeInf(SparseElem<Vector<T>>),
    Cyclic(CyclicElem),
    Rational(Ratio<T>),
    Heis([T; 3]),
    Ut(UtMatrix<T>),
}

/// Element of a descriptor group: one component per summand.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DescriptorElem<T: Coord>(pub Vec<FactorElem<T>>);

/// The group described by a [`GroupDescriptor`].
#[derive(Debug, Clone)]
pub struct DescriptorGroup<T: Coord> {
    descriptor: GroupDescriptor,
    factors: Vec<Factor<T>>,
}

macro_rules! dispatch2 {
    ($self:expr, $a:expr, $b:expr, $name:expr, |$g:ident, $x:ident, $y:ident| $body:expr) => {
        match ($self, $a, $b) {
            (Factor::Free($g), FactorElem::Free($x), FactorElem::Free($y)) => {
                Ok(FactorElem::Free($body?))
            }
            (Factor::FreeInf($g), FactorElem::FreeInf($x), FactorElem::FreeInf($y)) => {
                Ok(FactorElem::FreeInf($body?))
            }
            (Factor::Cyclic($g), FactorElem::Cyclic($x), FactorElem::Cyclic($y)) => {
                Ok(FactorElem::Cyclic($body?))
            }
            (Factor::Rational($g), FactorElem::Rational($x), FactorElem::Rational($y)) => {
                Ok(FactorElem::Rational($body?))
            }
            (Factor::Heis($g), FactorElem::Heis($x), FactorElem::Heis($y)) => {
                Ok(FactorElem::Heis($body?))
            }
            (Factor::Ut($g), FactorElem::Ut($x), FactorElem::Ut($y)) => Ok(FactorElem::Ut($body?)),
            _ => Err(Error::DescriptorMismatch { group: $name }),
        }
    };
}

impl<T: Coord> Factor<T> {
    fn from_descriptor(d: &GroupDescriptor) -> Result<Self> {
        Ok(match d {
            GroupDescriptor::FreeAbelian(m) => Factor::Free(FreeAbelian::new(*m)),
            GroupDescriptor::FreeAbelianInfinite => {
                Factor::FreeInf(DirectSum::new("Z^inf", None, |_| FreeAbelian::new(1)))
            }
            GroupDescriptor::CyclicSum { orders, tail } => {
                Factor::Cyclic(CyclicSum::new(orders.clone(), *tail)?)
            }
            GroupDescriptor::QmodZ => Factor::Rational(QmodZ::new()),
            GroupDescriptor::Unitriangular(3) => Factor::Heis(Heisenberg::new()),
            GroupDescriptor::Unitriangular(n) => Factor::Ut(Unitriangular::new(*n)?),
            GroupDescriptor::DirectSum(_) => {
                return Err(Error::invalid("nested sums are flattened first"))
            }
        })
    }

    fn name(&self) -> String {
        match self {
            Factor::Free(g) => g.name(),
            Factor::FreeInf(g) => g.name(),
            Factor::Cyclic(g) => g.name(),
            Factor::Rational(g) => g.name(),
            Factor::Heis(g) => g.name(),
            Factor::Ut(g) => g.name(),
        }
    }

    fn identity(&self) -> FactorElem<T> {
        match self {
            Factor::Free(g) => FactorElem::Free(g.identity()),
            Factor::FreeInf(g) => FactorElem::FreeInf(g.identity()),
            Factor::Cyclic(g) => FactorElem::Cyclic(g.identity()),
            Factor::Rational(g) => FactorElem::Rational(g.identity()),
            Factor::Heis(g) => FactorElem::Heis(g.identity()),
            Factor::Ut(g) => FactorElem::Ut(g.identity()),
        }
    }

    fn mul(&self, a: &FactorElem<T>, b: &FactorElem<T>) -> Result<FactorElem<T>> {
        dispatch2!(self, a, b, self.name(), |g, x, y| g.mul(x, y))
    }

    fn inv(&self, a: &FactorElem<T>) -> Result<FactorElem<T>> {
        dispatch2!(self, a, a, self.name(), |g, x, _y| g.inv(x))
    }

    fn contains(&self, a: &FactorElem<T>) -> bool {
        match (self, a) {
            (Factor::Free(g), FactorElem::Free(x)) => g.contains(x),
            (Factor::FreeInf(g), FactorElem::FreeInf(x)) => g.contains(x),
            (Factor::Cyclic(g), FactorElem::Cyclic(x)) => g.contains(x),
            (Factor::Rational(g), FactorElem::Rational(x)) => g.contains(x),
            (Factor::Heis(g), FactorElem::Heis(x)) => g.contains(x),
            (Factor::Ut(g), FactorElem::Ut(x)) => g.contains(x),
            _ => false,
        }
    }

    fn is_abelian(&self) -> bool {
        match self {
            Factor::Heis(_) => false,
            Factor::Ut(_) => false,
            _ => true,
        }
    }

    fn generators(&self) -> Option<Vec<FactorElem<T>>> {
        Some(match self {
            Factor::Free(g) => g.generators()?.into_iter().map(FactorElem::Free).collect(),
            Factor::Cyclic(g) => g
                .generators()?
                .into_iter()
                .map(FactorElem::Cyclic)
                .collect(),
            Factor::Heis(g) => g.generators()?.into_iter().map(FactorElem::Heis).collect(),
            Factor::Ut(g) => g.generators()?.into_iter().map(FactorElem::Ut).collect(),
            Factor::FreeInf(_) | Factor::Rational(_) => return None,
        })
    }

    fn order(&self) -> Option<u64> {
        match self {
            Factor::Free(g) => g.order(),
            Factor::Cyclic(g) => g.order(),
            _ => None,
        }
    }

    /// Canonical weighted generators of weight at most `w`.
    fn weighted(&self, w: u64) -> Result<Vec<(FactorElem<T>, u64)>> {
        let mut out = Vec::new();
        match self {
            Factor::Free(g) => {
                if w >= 1 {
                    out.extend(
                        g.generators()
                            .expect("fg")
                            .into_iter()
                            .map(|s| (FactorElem::Free(s), 1)),
                    );
                }
            }
            Factor::FreeInf(g) => {
                for i in 0..w as usize {
                    let e = g.single(i, std::iter::once(T::one()).collect())?;
                    out.push((FactorElem::FreeInf(e), i as u64 + 1));
                }
            }
            Factor::Cyclic(g) => {
                let finite = g.finite_orders().len();
                if w >= 1 {
                    for i in 0..finite {
                        out.push((FactorElem::Cyclic(g.basis(i)?), 1));
                    }
                }
                if g.tail().is_some() {
                    // k-th tail coordinate (counting from 1) has weight k
                    for k in 1..=w {
                        out.push((FactorElem::Cyclic(g.basis(finite + k as usize - 1)?), k));
                    }
                }
            }
            Factor::Rational(_) => {
                let chain = FactorialChain::<T>::new();
                for n in 2..=w as usize {
                    let f = chain.factorial(n)?;
                    out.push((FactorElem::Rational(Ratio::new(T::one(), f)), n as u64));
                }
            }
            Factor::Heis(g) => {
                if w >= 1 {
                    out.extend(
                        g.generators()
                            .expect("fg")
                            .into_iter()
                            .map(|s| (FactorElem::Heis(s), 1)),
                    );
                }
            }
            Factor::Ut(g) => {
                if w >= 1 {
                    out.extend(
                        g.generators()
                            .expect("fg")
                            .into_iter()
                            .map(|s| (FactorElem::Ut(s), 1)),
                    );
                }
            }
        }
        Ok(out)
    }
}

impl<T: Coord> DescriptorGroup<T> {
    pub fn new(descriptor: &GroupDescriptor) -> Result<Self> {
        let factors = descriptor
            .summands()
            .iter()
            .map(Factor::from_descriptor)
            .collect::<Result<Vec<_>>>()?;
        Ok(DescriptorGroup {
            descriptor: descriptor.clone(),
            factors,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::new(&GroupDescriptor::parse(text)?)
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.descriptor
    }

    pub fn factors(&self) -> &[Factor<T>] {
        &self.factors
    }

    /// The element equal to `e` in summand `i` and trivial elsewhere.
    pub fn embed(&self, i: usize, e: FactorElem<T>) -> Result<DescriptorElem<T>> {
        let mut v: Vec<FactorElem<T>> = self.factors.iter().map(|f| f.identity()).collect();
        if i >= v.len() || !self.factors[i].contains(&e) {
            return Err(Error::DescriptorMismatch { group: self.name() });
        }
        v[i] = e;
        Ok(DescriptorElem(v))
    }

    /// Canonical weighted generators of weight at most `w`, weights nondecreasing.
    ///
    /// `Z` and finite cyclic coordinates weigh 1, the k-th coordinate of an
    /// infinite sum weighs k, and `1/n!` in `Q/Z` weighs n.
    pub fn weighted_generators(&self, w: u64) -> Result<Vec<(DescriptorElem<T>, u64)>> {
        let mut out = Vec::new();
        for (i, f) in self.factors.iter().enumerate() {
            for (e, wt) in f.weighted(w)? {
                out.push((self.embed(i, e)?, wt));
            }
        }
        out.sort_by_key(|(_, wt)| *wt);
        Ok(out)
    }

    /// Maximum weight among the standard generators of a finitely generated descriptor.
    pub fn max_generator_weight(&self) -> Option<u64> {
        if self.descriptor.is_finitely_generated() {
            Some(1)
        } else {
            None
        }
    }

    /// Parses an element from JSON: an array with one entry per summand.
    ///
    /// `Z^m`: `[a, ...]`; cyclic sums: `[[coord, value], ...]`; `Q/Z`: `"p/q"`;
    /// `UT3`: `[x, y, z]`; `UTn`: the strictly upper entries row by row; `Z^inf`: `[[coord, value], ...]`.
    /// A group with a single summand also accepts the bare component.
    pub fn elem_from_json(&self, v: &Value) -> Result<DescriptorElem<T>> {
        let parts: Vec<Value> = match v {
            Value::Array(items) if self.factors.len() > 1 => items.clone(),
            other if self.factors.len() == 1 => vec![other.clone()],
            _ => {
                return Err(Error::invalid(
                    "element must be an array with one entry per summand",
                ))
            }
        };
        if parts.len() != self.factors.len() {
            return Err(Error::DescriptorMismatch { group: self.name() });
        }
        let mut out = Vec::new();
        for (f, p) in self.factors.iter().zip(parts.iter()) {
            out.push(factor_from_json(f, p)?);
        }
        Ok(DescriptorElem(out))
    }

    pub fn elem_to_json(&self, e: &DescriptorElem<T>) -> Value {
        let parts: Vec<Value> = e.0.iter().map(factor_to_json).collect();
        if parts.len() == 1 {
            parts.into_iter().next().expect("one part")
        } else {
            Value::Array(parts)
        }
    }
}

fn ints(v: &Value) -> Result<Vec<i64>> {
    v.as_array()
        .ok_or_else(|| Error::invalid("expected an array of integers"))?
        .iter()
        .map(|x| {
            x.as_i64()
                .ok_or_else(|| Error::invalid("expected an integer"))
        })
        .collect()
}

fn pairs(v: &Value) -> Result<Vec<(usize, i64)>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::invalid("expected [[coordinate, value], ...]"))?;
    arr.iter()
        .map(|p| {
            let q = ints(p)?;
            if q.len() != 2 || q[0] < 0 {
                return Err(Error::invalid("expected a [coordinate, value] pair"));
            }
            Ok((q[0] as usize, q[1]))
        })
        .collect()
}

fn factor_from_json<T: Coord>(f: &Factor<T>, v: &Value) -> Result<FactorElem<T>> {
    Ok(match f {
        Factor::Free(g) => FactorElem::Free(g.elem(&ints(v)?)?),
        Factor::FreeInf(g) => {
            let mut parts = Vec::new();
            for (i, x) in pairs(v)? {
                parts.push((i, std::iter::once(scalar::from_i64::<T>(x)).collect()));
            }
            FactorElem::FreeInf(g.elem(parts)?)
        }
        Factor::Cyclic(g) => FactorElem::Cyclic(g.elem(&pairs(v)?)?),
        Factor::Rational(g) => {
            let s = v
                .as_str()
                .ok_or_else(|| Error::invalid("expected \"p/q\""))?;
            let (p, q) = s.split_once('/').unwrap_or((s, "1"));
            let p: i64 = p
                .trim()
                .parse()
                .map_err(|_| Error::invalid("bad numerator"))?;
            let q: i64 = q
                .trim()
                .parse()
                .map_err(|_| Error::invalid("bad denominator"))?;
            FactorElem::Rational(g.elem(p, q)?)
        }
        Factor::Heis(g) => {
            let c = ints(v)?;
            if c.len() != 3 {
                return Err(Error::invalid("UT3 elements are [x, y, z]"));
            }
            FactorElem::Heis(g.elem(c[0], c[1], c[2]))
        }
        Factor::Ut(g) => FactorElem::Ut(g.from_entries(&ints(v)?)?),
    })
}

fn num_json<T: Coord>(x: &T) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn factor_to_json<T: Coord>(e: &FactorElem<T>) -> Value {
    match e {
        FactorElem::Free(v) => Value::Array(v.iter().map(num_json).collect()),
        FactorElem::FreeInf(s) => Value::Array(
            s.0.iter()
                .map(|(i, v)| json!([i, num_json(&v[0])]))
                .collect(),
        ),
        FactorElem::Cyclic(c) => Value::Array(c.0.iter().map(|(i, r)| json!([i, r])).collect()),
        FactorElem::Rational(r) => json!(format!("{}/{}", r.numer(), r.denom())),
        FactorElem::Heis(h) => Value::Array(h.iter().map(num_json).collect()),
        FactorElem::Ut(m) => Value::Array(m.0.iter().map(num_json).collect()),
    }
}

impl<T: Coord> Group for DescriptorGroup<T> {
    type Elem = DescriptorElem<T>;

    fn identity(&self) -> Self::Elem {
        DescriptorElem(self.factors.iter().map(|f| f.identity()).collect())
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        if a.0.len() != self.factors.len() || b.0.len() != self.factors.len() {
            return Err(Error::DescriptorMismatch { group: self.name() });
        }
        let parts = self
            .factors
            .iter()
            .zip(a.0.iter().zip(b.0.iter()))
            .map(|(f, (x, y))| f.mul(x, y))
            .collect::<Result<Vec<_>>>()?;
        Ok(DescriptorElem(parts))
    }

    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem> {
        if a.0.len() != self.factors.len() {
            return Err(Error::DescriptorMismatch { group: self.name() });
        }
        let parts = self
            .factors
            .iter()
            .zip(a.0.iter())
            .map(|(f, x)| f.inv(x))
            .collect::<Result<Vec<_>>>()?;
        Ok(DescriptorElem(parts))
    }

    fn contains(&self, a: &Self::Elem) -> bool {
        a.0.len() == self.factors.len()
            && self
                .factors
                .iter()
                .zip(a.0.iter())
                .all(|(f, x)| f.contains(x))
    }

    fn is_abelian(&self) -> bool {
        self.factors.iter().all(|f| f.is_abelian())
    }

    fn generators(&self) -> Option<Vec<Self::Elem>> {
        let mut out = Vec::new();
        for (i, f) in self.factors.iter().enumerate() {
            for s in f.generators()? {
                out.push(self.embed(i, s).ok()?);
            }
        }
        Some(out)
    }

    fn order(&self) -> Option<u64> {
        self.factors
            .iter()
            .try_fold(1u64, |acc, f| acc.checked_mul(f.order()?))
    }

    fn name(&self) -> String {
        self.descriptor.to_string()
    }

    fn generated_order(&self, gens: &[Self::Elem]) -> Option<Result<u64>> {
        match self.factors.as_slice() {
            [Factor::Rational(q)] => {
                let parts: Vec<Ratio<T>> = gens
                    .iter()
                    .filter_map(|e| match e.0.first() {
                        Some(FactorElem::Rational(r)) => Some(r.clone()),
                        _ => None,
                    })
                    .collect();
                if parts.len() != gens.len() {
                    return Some(Err(Error::DescriptorMismatch { group: self.name() }));
                }
                q.generated_order(&parts)
            }
            _ => None,
        }
    }
}

enum FactorChain<T: Coord> {
    Coordinates(CoordinateChain),
    Factorial(FactorialChain<T>),
}

/// Canonical exhaustion of a locally finite descriptor group: `G_n` is the sum
/// of the first `n` coordinates of each cyclic summand and `(1/n!)Z/Z` in `Q/Z`.
pub struct DescriptorChain<T: Coord> {
    group: DescriptorGroup<T>,
    chains: Vec<FactorChain<T>>,
}

impl<T: Coord> DescriptorChain<T> {
    pub fn new(group: DescriptorGroup<T>) -> Result<Self> {
        let mut chains = Vec::new();
        for f in &group.factors {
            chains.push(match f {
                Factor::Cyclic(c) => FactorChain::Coordinates(CoordinateChain::new(c.clone())),
                Factor::Rational(_) => FactorChain::Factorial(FactorialChain::new()),
                _ => {
                    return Err(Error::Unsupported(format!(
                        "{} is not locally finite; no canonical exhaustion",
                        group.name()
                    )))
                }
            });
        }
        Ok(DescriptorChain { group, chains })
    }

    fn factor_transversal(&self, i: usize, n: usize) -> Result<Vec<FactorElem<T>>> {
        Ok(match &self.chains[i] {
            FactorChain::Coordinates(c) => {
                if c.max_level().is_some_and(|m| n > m) {
                    vec![FactorElem::Cyclic(c.group().identity())]
                } else {
                    c.transversal(n)?
                        .into_iter()
                        .map(FactorElem::Cyclic)
                        .collect()
                }
            }
            FactorChain::Factorial(c) => c
                .transversal(n)?
                .into_iter()
                .map(FactorElem::Rational)
                .collect(),
        })
    }
}

impl<T: Coord> Chain for DescriptorChain<T> {
    type G = DescriptorGroup<T>;

    fn group(&self) -> &DescriptorGroup<T> {
        &self.group
    }

    fn max_level(&self) -> Option<usize> {
        self.chains
            .iter()
            .filter_map(|c| match c {
                FactorChain::Factorial(f) => f.max_level(),
                FactorChain::Coordinates(_) => None,
            })
            .min()
    }

    fn level(&self, x: &DescriptorElem<T>) -> Result<usize> {
        if !self.group.contains(x) {
            return Err(Error::DescriptorMismatch {
                group: self.group.name(),
            });
        }
        let mut lvl = 0;
        for (c, e) in self.chains.iter().zip(x.0.iter()) {
            let l = match (c, e) {
                (FactorChain::Coordinates(c), FactorElem::Cyclic(e)) => c.level(e)?,
                (FactorChain::Factorial(c), FactorElem::Rational(e)) => c.level(e)?,
                _ => {
                    return Err(Error::DescriptorMismatch {
                        group: self.group.name(),
                    })
                }
            };
            lvl = lvl.max(l);
        }
        Ok(lvl)
    }

    fn coset_key(&self, k: usize, x: &DescriptorElem<T>) -> Result<DescriptorElem<T>> {
        let mut out = Vec::with_capacity(x.0.len());
        for (c, e) in self.chains.iter().zip(x.0.iter()) {
            out.push(match (c, e) {
                (FactorChain::Coordinates(c), FactorElem::Cyclic(e)) => {
                    FactorElem::Cyclic(c.coset_key(k, e)?)
                }
                (FactorChain::Factorial(c), FactorElem::Rational(e)) => {
                    FactorElem::Rational(c.coset_key(k, e)?)
                }
                _ => {
                    return Err(Error::DescriptorMismatch {
                        group: self.group.name(),
                    })
                }
            });
        }
        Ok(DescriptorElem(out))
    }

    fn transversal(&self, n: usize) -> Result<Vec<DescriptorElem<T>>> {
        if n == 0 {
            return Err(Error::invalid("transversal levels start at 1"));
        }
        self.check_level(n)?;
        let mut reps = vec![self.group.identity()];
        for i in 0..self.chains.len() {
            let t = self.factor_transversal(i, n)?;
            let mut next = Vec::with_capacity(reps.len() * t.len());
            for a in &t {
                for r in &reps {
                    let mut v = r.clone();
                    v.0[i] = a.clone();
                    next.push(v);
                }
            }
            reps = next;
        }
        Ok(reps)
    }

    fn base_elements(&self) -> Result<Vec<DescriptorElem<T>>> {
        Ok(vec![self.group.identity()])
    }

    fn name(&self) -> String {
        format!("canonical chain of {}", self.group.name())
    }
}
