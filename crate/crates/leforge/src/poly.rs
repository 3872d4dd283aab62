//! Sparse multivariate polynomials over the rationals, with a text parser
//! and canonical printing.
//!
//! Coefficients are arbitrary-precision rationals throughout; there is no
//! floating point anywhere in the crate. A polynomial is stored as a map
//! from exponent vector to nonzero coefficient, so equality of canonical
//! forms is plain structural equality.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_ratio(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Ordered list of distinct variable names. The order is significant and
/// fixed at construction; exponent vectors index into it.
#[derive(Debug, PartialEq, Eq)]
pub struct VarRing {
    vars: Vec<String>,
}

fn valid_var_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl VarRing {
    pub fn new<S: Into<String>>(vars: Vec<S>) -> Result<Arc<VarRing>> {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        if vars.is_empty() {
            return Err(Error::Job("variable list must be nonempty".into()));
        }
        for v in &vars {
            if !valid_var_name(v) {
                return Err(Error::Job(format!("invalid variable name `{v}`")));
            }
        }
        for i in 0..vars.len() {
            for j in i + 1..vars.len() {
                if vars[i] == vars[j] {
                    return Err(Error::Job(format!("duplicate variable `{}`", vars[i])));
                }
            }
        }
        Ok(Arc::new(VarRing { vars }))
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Ring extended by fresh auxiliary variables (placed first). Names are
    /// chosen to avoid collisions with existing variables.
    pub fn extended(self: &Arc<Self>, count: usize) -> Arc<VarRing> {
        let mut names = Vec::new();
        let mut k = 0usize;
        while names.len() < count {
            let cand = format!("aux{k}_");
            if self.index_of(&cand).is_none() {
                names.push(cand);
            }
            k += 1;
        }
        names.extend(self.vars.iter().cloned());
        Arc::new(VarRing { vars: names })
    }

    pub fn subring_without(self: &Arc<Self>, drop: &[usize]) -> Arc<VarRing> {
        let vars = self
            .vars
            .iter()
            .enumerate()
            .filter(|(i, _)| !drop.contains(i))
            .map(|(_, v)| v.clone())
            .collect();
        Arc::new(VarRing { vars })
    }
}

pub fn same_ring(a: &Arc<VarRing>, b: &Arc<VarRing>) -> bool {
    Arc::ptr_eq(a, b) || a.vars == b.vars
}

fn total_degree(exp: &[u32]) -> u32 {
    exp.iter().sum()
}

/// Degree-reverse-lexicographic comparison; used for canonical printing and
/// as the default working order.
pub fn cmp_degrevlex(a: &[u32], b: &[u32]) -> Ordering {
    let (da, db) = (total_degree(a), total_degree(b));
    if da != db {
        return da.cmp(&db);
    }
    // last nonzero entry of a - b negative => a > b
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    ring: Arc<VarRing>,
    terms: BTreeMap<Vec<u32>, Q>,
}

impl Poly {
    pub fn zero(ring: &Arc<VarRing>) -> Poly {
        Poly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Arc<VarRing>, c: Q) -> Poly {
        let mut p = Poly::zero(ring);
        if !c.is_zero() {
            p.terms.insert(vec![0; ring.nvars()], c);
        }
        p
    }

    pub fn one(ring: &Arc<VarRing>) -> Poly {
        Poly::constant(ring, Q::one())
    }

    pub fn var(ring: &Arc<VarRing>, idx: usize) -> Poly {
        let mut exp = vec![0; ring.nvars()];
        exp[idx] = 1;
        let mut p = Poly::zero(ring);
        p.terms.insert(exp, Q::one());
        p
    }

    pub fn monomial(ring: &Arc<VarRing>, exp: Vec<u32>, c: Q) -> Poly {
        let mut p = Poly::zero(ring);
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    pub fn ring(&self) -> &Arc<VarRing> {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| total_degree(e) == 0)
    }

    pub fn constant_coeff(&self) -> Q {
        self.terms
            .get(&vec![0; self.ring.nvars()])
            .cloned()
            .unwrap_or_else(Q::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| total_degree(e)).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, exp: Vec<u32>, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&exp);
                }
            }
            None => {
                self.terms.insert(exp, c);
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        debug_assert!(same_ring(&self.ring, &other.ring));
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        debug_assert!(same_ring(&self.ring, &other.ring));
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out
    }

    pub fn mul_monomial(&self, exp: &[u32], c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        let mut out = Poly::zero(&self.ring);
        for (e, v) in &self.terms {
            let ne: Vec<u32> = e.iter().zip(exp).map(|(a, b)| a + b).collect();
            out.terms.insert(ne, v * c);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        debug_assert!(same_ring(&self.ring, &other.ring));
        let mut out = Poly::zero(&self.ring);
        for (e, c) in &other.terms {
            let part = self.mul_monomial(e, c);
            for (ne, nc) in part.terms {
                out.add_term(ne, nc);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::one(&self.ring);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Formal partial derivative with respect to a named variable.
    pub fn diff(&self, var: &str) -> Result<Poly> {
        let idx = self
            .ring
            .index_of(var)
            .ok_or_else(|| Error::UnknownVariable(var.to_string()))?;
        Ok(self.diff_idx(idx))
    }

    pub fn diff_idx(&self, idx: usize) -> Poly {
        let mut out = Poly::zero(&self.ring);
        for (e, c) in &self.terms {
            if e[idx] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[idx] -= 1;
            out.add_term(ne, c * Q::from_integer(BigInt::from(e[idx])));
        }
        out
    }

    /// Exact evaluation at a rational point.
    pub fn evaluate(&self, point: &[Q]) -> Result<Q> {
        if point.len() != self.ring.nvars() {
            return Err(Error::Precondition(format!(
                "point has {} coordinates, ring has {} variables",
                point.len(),
                self.ring.nvars()
            )));
        }
        let mut acc = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t *= &point[i];
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Substitute a polynomial for one variable.
    pub fn substitute(&self, idx: usize, value: &Poly) -> Poly {
        debug_assert!(same_ring(&self.ring, value.ring()));
        let mut out = Poly::zero(&self.ring);
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            let k = rest[idx];
            rest[idx] = 0;
            let term = Poly::monomial(&self.ring, rest, c.clone());
            let part = term.mul(&value.pow(k));
            out = out.add(&part);
        }
        out
    }

    /// Substitute each variable by the linear combination given by the
    /// corresponding row of `m`: the result is `p(m x)`.
    pub fn linear_change(&self, m: &QMatrix) -> Result<Poly> {
        let n = self.ring.nvars();
        if m.n != n {
            return Err(Error::Precondition("matrix size does not match ring".into()));
        }
        if m.inverse().is_none() {
            return Err(Error::SingularMatrix);
        }
        let images: Vec<Poly> = (0..n)
            .map(|i| {
                let mut p = Poly::zero(&self.ring);
                for (j, c) in m.rows[i].iter().enumerate() {
                    if !c.is_zero() {
                        let mut e = vec![0; n];
                        e[j] = 1;
                        p.add_term(e, c.clone());
                    }
                }
                p
            })
            .collect();
        let mut out = Poly::zero(&self.ring);
        for (e, c) in &self.terms {
            let mut term = Poly::constant(&self.ring, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = term.mul(&images[i].pow(k));
                }
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Map this polynomial into a ring that contains all variables it
    /// actually uses (by name). Used when moving between a ring and its
    /// extensions or subrings.
    pub fn map_to_ring(&self, target: &Arc<VarRing>) -> Result<Poly> {
        let n = self.ring.nvars();
        let mapping: Vec<Option<usize>> = self
            .ring
            .vars()
            .iter()
            .map(|v| target.index_of(v))
            .collect();
        let mut out = Poly::zero(target);
        for (e, c) in &self.terms {
            let mut ne = vec![0u32; target.nvars()];
            for i in 0..n {
                if e[i] > 0 {
                    match mapping[i] {
                        Some(j) => ne[j] = e[i],
                        None => {
                            return Err(Error::UnknownVariable(self.ring.vars()[i].clone()))
                        }
                    }
                }
            }
            out.add_term(ne, c.clone());
        }
        Ok(out)
    }

    /// Leading exponent/coefficient under a comparison function.
    pub fn leading<'a>(&'a self, cmp: impl Fn(&[u32], &[u32]) -> Ordering) -> Option<(&'a Vec<u32>, &'a Q)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| cmp(a, b))
    }

    /// Multiply by the rational that makes coefficients coprime integers
    /// with positive leading (degrevlex) coefficient.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_integer::Integer::gcd(&num_gcd, c.numer());
            den_lcm = num_integer::Integer::lcm(&den_lcm, c.denom());
        }
        let scale = Q::new(den_lcm, num_gcd);
        let mut out = self.scale(&scale);
        let lead = out.leading(cmp_degrevlex).map(|(_, c)| c.clone()).unwrap();
        if lead.is_negative() {
            out = out.neg();
        }
        out
    }

    /// Canonical total comparison on polynomials (used for deterministic
    /// sorting of generator lists).
    pub fn canonical_cmp(&self, other: &Poly) -> Ordering {
        let la = self.leading(cmp_degrevlex);
        let lb = other.leading(cmp_degrevlex);
        match (la, lb) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some((ea, _)), Some((eb, _))) => match cmp_degrevlex(ea, eb) {
                Ordering::Equal => {
                    let ta: Vec<_> = self.terms.iter().collect();
                    let tb: Vec<_> = other.terms.iter().collect();
                    ta.len()
                        .cmp(&tb.len())
                        .then_with(|| format!("{self}").cmp(&format!("{other}")))
                }
                o => o,
            },
        }
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Canonical printing: terms in descending degree-reverse-lexicographic
/// order, coefficients as `a/b` with positive denominator, no spaces
/// around `^`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Vec<u32>, &Q)> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| cmp_degrevlex(b, a));
        for (i, (e, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -(*c).clone() } else { (*c).clone() };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_const = total_degree(e) == 0;
            let mut wrote_coeff = false;
            if is_const || !abs.is_one() {
                if abs.denom().is_one() {
                    write!(f, "{}", abs.numer())?;
                } else {
                    write!(f, "{}/{}", abs.numer(), abs.denom())?;
                }
                wrote_coeff = true;
            }
            let mut first_var = true;
            for (vi, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if wrote_coeff || !first_var {
                    write!(f, "*")?;
                }
                first_var = false;
                wrote_coeff = true;
                write!(f, "{}", self.ring.vars()[vi])?;
                if k > 1 {
                    write!(f, "^{k}")?;
                }
            }
        }
        Ok(())
    }
}

/// Linear form with zero constant term, not identically zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearForm {
    pub coeffs: Vec<Q>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<Q>) -> Result<LinearForm> {
        if coeffs.iter().all(|c| c.is_zero()) {
            return Err(Error::BadLinearForm("identically zero".into()));
        }
        Ok(LinearForm { coeffs })
    }

    pub fn var(ring: &Arc<VarRing>, idx: usize) -> LinearForm {
        let mut coeffs = vec![Q::zero(); ring.nvars()];
        coeffs[idx] = Q::one();
        LinearForm { coeffs }
    }

    pub fn to_poly(&self, ring: &Arc<VarRing>) -> Poly {
        let mut p = Poly::zero(ring);
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0; ring.nvars()];
                e[i] = 1;
                p.add_term(e, c.clone());
            }
        }
        p
    }

    /// Parse a degree-one polynomial with no constant term.
    pub fn parse(text: &str, ring: &Arc<VarRing>) -> Result<LinearForm> {
        let p = parse_poly(text, ring)?;
        let mut coeffs = vec![Q::zero(); ring.nvars()];
        for (e, c) in p.terms() {
            let d = total_degree(e);
            if d == 0 || d > 1 {
                return Err(Error::BadLinearForm(format!(
                    "`{text}` is not a linear form with zero constant term"
                )));
            }
            let idx = e.iter().position(|&k| k == 1).unwrap();
            coeffs[idx] = c.clone();
        }
        LinearForm::new(coeffs)
    }
}

/// Square rational matrix with exact inversion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    pub n: usize,
    pub rows: Vec<Vec<Q>>,
}

impl QMatrix {
    pub fn identity(n: usize) -> QMatrix {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Q::one() } else { Q::zero() })
                    .collect()
            })
            .collect();
        QMatrix { n, rows }
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Result<QMatrix> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Precondition("matrix is not square".into()));
        }
        Ok(QMatrix { n, rows })
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<QMatrix> {
        let n = self.n;
        let mut a: Vec<Vec<Q>> = self.rows.clone();
        let mut inv = QMatrix::identity(n).rows;
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col].clone();
            for j in 0..n {
                a[col][j] /= &p;
                inv[col][j] /= &p;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for j in 0..n {
                        let t = &a[col][j] * &f;
                        a[r][j] -= t;
                        let t = &inv[col][j] * &f;
                        inv[r][j] -= t;
                    }
                }
            }
        }
        Some(QMatrix { n, rows: inv })
    }
}

// ---------------------------------------------------------------------------
// Expression parser
// ---------------------------------------------------------------------------

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    ring: &'a Arc<VarRing>,
}

/// Parse an expression built from `+ - * ^`, integer and rational literals,
/// parentheses and declared variable names.
pub fn parse_poly(text: &str, ring: &Arc<VarRing>) -> Result<Poly> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        ring,
    };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(Error::Syntax {
            pos: p.pos,
            msg: format!("unexpected `{}`", p.bytes[p.pos] as char),
        });
    }
    Ok(poly)
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while let Some(b'*') = self.peek() {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if let Some(b'^') = self.peek() {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let n = self.integer()?;
            if n.sign() == num_bigint::Sign::Minus {
                return Err(Error::Syntax {
                    pos: start,
                    msg: "negative exponent".into(),
                });
            }
            let n_u32: u32 = n.try_into().map_err(|_| Error::Syntax {
                pos: start,
                msg: "exponent too large".into(),
            })?;
            return Ok(base.pow(n_u32));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(b')') => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(Error::Syntax {
                        pos: self.pos,
                        msg: "expected `)`".into(),
                    }),
                }
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(self.atom()?.neg())
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                // optional rational literal a/b
                if let Some(b'/') = self.peek() {
                    self.pos += 1;
                    self.skip_ws();
                    let start = self.pos;
                    if !matches!(self.bytes.get(self.pos), Some(d) if d.is_ascii_digit()) {
                        return Err(Error::Syntax {
                            pos: start,
                            msg: "expected integer denominator".into(),
                        });
                    }
                    let den = self.integer()?;
                    if den.is_zero() {
                        return Err(Error::Syntax {
                            pos: start,
                            msg: "zero denominator".into(),
                        });
                    }
                    return Ok(Poly::constant(self.ring, Q::new(num, den)));
                }
                Ok(Poly::constant(self.ring, Q::from_integer(num)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                let mut end = self.pos;
                while end < self.bytes.len()
                    && (self.bytes[end].is_ascii_alphanumeric() || self.bytes[end] == b'_')
                {
                    end += 1;
                }
                let name = std::str::from_utf8(&self.bytes[start..end]).unwrap();
                self.pos = end;
                match self.ring.index_of(name) {
                    Some(idx) => Ok(Poly::var(self.ring, idx)),
                    None => Err(Error::UnknownVariable(name.to_string())),
                }
            }
            Some(c) => Err(Error::Syntax {
                pos: self.pos,
                msg: format!("unexpected `{}`", c as char),
            }),
            None => Err(Error::Syntax {
                pos: self.pos,
                msg: "unexpected end of input".into(),
            }),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        let mut end = self.pos;
        while end < self.bytes.len() && self.bytes[end].is_ascii_digit() {
            end += 1;
        }
        if end == start {
            return Err(Error::Syntax {
                pos: start,
                msg: "expected integer".into(),
            });
        }
        self.pos = end;
        Ok(std::str::from_utf8(&self.bytes[start..end])
            .unwrap()
            .parse()
            .unwrap())
    }
}

/// Parse a rational literal such as `1/4` or `-2`.
pub fn parse_rational(text: &str) -> Result<Q> {
    let t = text.trim();
    let (neg, t) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let parts: Vec<&str> = t.split('/').collect();
    let parse_int = |s: &str| -> Result<BigInt> {
        s.trim().parse().map_err(|_| Error::Syntax {
            pos: 0,
            msg: format!("bad rational `{text}`"),
        })
    };
    let q = match parts.as_slice() {
        [a] => Q::from_integer(parse_int(a)?),
        [a, b] => {
            let den = parse_int(b)?;
            if den.is_zero() {
                return Err(Error::Syntax {
                    pos: 0,
                    msg: "zero denominator".into(),
                });
            }
            Q::new(parse_int(a)?, den)
        }
        _ => {
            return Err(Error::Syntax {
                pos: 0,
                msg: format!("bad rational `{text}`"),
            })
        }
    };
    Ok(if neg { -q } else { q })
}

pub fn format_rational(q: &Q) -> String {
    if q.denom().is_one() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring2() -> Arc<VarRing> {
        VarRing::new(vec!["x", "y"]).unwrap()
    }

    #[test]
    fn parse_basic_terms() {
        let r = ring2();
        let p = parse_poly("y^2 - x^3", &r).unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.evaluate(&[q_int(1), q_int(1)]).unwrap(), q_int(0));
        assert_eq!(p.evaluate(&[q_int(1), q_int(2)]).unwrap(), q_int(3));
    }

    #[test]
    fn parse_cancellation_gives_zero() {
        let r = VarRing::new(vec!["x"]).unwrap();
        let p = parse_poly("x - x", &r).unwrap();
        assert!(p.is_zero());
        assert_eq!(p.evaluate(&[q_int(5)]).unwrap(), q_int(0));
    }

    #[test]
    fn parse_distribution() {
        let r = VarRing::new(vec!["t", "u"]).unwrap();
        let p = parse_poly("u*(u^2-t)", &r).unwrap();
        let q = parse_poly("u^3 - t*u", &r).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn parse_errors_carry_position() {
        let r = ring2();
        match parse_poly("y^^2", &r) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(matches!(
            parse_poly("x + w", &r),
            Err(Error::UnknownVariable(v)) if v == "w"
        ));
    }

    #[test]
    fn diff_power_rule() {
        let r = ring2();
        let p = parse_poly("y^2 - x^3", &r).unwrap();
        assert_eq!(p.diff("x").unwrap(), parse_poly("-3*x^2", &r).unwrap());
        let r3 = VarRing::new(vec!["t", "x", "y"]).unwrap();
        let f = parse_poly("y^2 - x^3 - t*x^2", &r3).unwrap();
        assert_eq!(f.diff("t").unwrap(), parse_poly("-x^2", &r3).unwrap());
        let c = parse_poly("5", &r).unwrap();
        assert!(c.diff("x").unwrap().is_zero());
        assert!(c.diff("z").is_err());
    }

    #[test]
    fn diff_commutes() {
        let r = ring2();
        let p = parse_poly("x^3*y^2 - 7*x*y + y^4 - 2", &r).unwrap();
        let a = p.diff("x").unwrap().diff("y").unwrap();
        let b = p.diff("y").unwrap().diff("x").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn linear_change_and_inverse() {
        let r = ring2();
        let p = parse_poly("y^2 - x^3", &r).unwrap();
        // x -> x + y, y -> y
        let m = QMatrix::from_rows(vec![
            vec![q_int(1), q_int(1)],
            vec![q_int(0), q_int(1)],
        ])
        .unwrap();
        let q = p.linear_change(&m).unwrap();
        let back = q.linear_change(&m.inverse().unwrap()).unwrap();
        assert_eq!(back, p);
        // swap is an involution on x+y
        let swap = QMatrix::from_rows(vec![
            vec![q_int(0), q_int(1)],
            vec![q_int(1), q_int(0)],
        ])
        .unwrap();
        let s = parse_poly("x + y", &r).unwrap();
        assert_eq!(s.linear_change(&swap).unwrap(), s);
        let x = parse_poly("x", &r).unwrap();
        assert_eq!(x.linear_change(&m).unwrap(), parse_poly("x + y", &r).unwrap());
        // singular matrix rejected
        let sing = QMatrix::from_rows(vec![
            vec![q_int(1), q_int(1)],
            vec![q_int(2), q_int(2)],
        ])
        .unwrap();
        assert!(matches!(p.linear_change(&sing), Err(Error::SingularMatrix)));
    }

    #[test]
    fn linear_change_is_ring_hom() {
        let r = ring2();
        let m = QMatrix::from_rows(vec![
            vec![q_int(2), q_int(1)],
            vec![q_int(1), q_int(1)],
        ])
        .unwrap();
        let p = parse_poly("x^2 - y", &r).unwrap();
        let q = parse_poly("x*y + 3", &r).unwrap();
        let lhs = p.mul(&q).linear_change(&m).unwrap();
        let rhs = p.linear_change(&m).unwrap().mul(&q.linear_change(&m).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn print_parse_round_trip() {
        let r = ring2();
        for text in [
            "y^2 - x^3",
            "1/2*x*y - 3",
            "x^4 + x^2*y^2 - 7/3*y",
            "0",
            "-x",
            "2*x^2*y^3 - 1/5",
        ] {
            let p = parse_poly(text, &r).unwrap();
            let printed = format!("{p}");
            let q = parse_poly(&printed, &r).unwrap();
            assert_eq!(p, q, "round trip failed for `{text}` -> `{printed}`");
        }
    }

    #[test]
    fn canonical_printing_shape() {
        let r = ring2();
        let p = parse_poly("y^2 - x^3", &r).unwrap();
        assert_eq!(format!("{p}"), "-x^3 + y^2");
        let c = parse_poly("3/4", &r).unwrap();
        assert_eq!(format!("{c}"), "3/4");
    }

    #[test]
    fn ring_axioms_on_random_polys() {
        let r = ring2();
        let mut rng = crate::rng::Rng::new(41);
        for _ in 0..60 {
            let mut rand_poly = || {
                let mut p = Poly::zero(&r);
                for _ in 0..rng.below(5) {
                    let e = vec![rng.below(3) as u32, rng.below(3) as u32];
                    p.add_term(e, q_int(rng.small(4)));
                }
                p
            };
            let (a, b, c) = (rand_poly(), rand_poly(), rand_poly());
            assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            assert_eq!(a.mul(&b), b.mul(&a));
        }
    }
}
