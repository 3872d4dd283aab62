//! Ideal engine: Gröbner bases and the ideal-theoretic queries that every
//! invariant computation reduces to — quotient, saturation, elimination,
//! dimension, global and local colength, distinct point counts.
//!
//! Buchberger with sugar pair selection and Gebauer-Möller pair
//! elimination; deterministic tie-breaking throughout so that fixed input
//! (and seed) reproduces byte-identical output.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::ctx::Ctx;
use crate::error::{Error, Result};
use crate::poly::{cmp_degrevlex, same_ring, LinearForm, Poly, Q, VarRing};

/// Monomial well-orders on a ring's variables. `Elim(k)` eliminates the
/// first `k` variables (block order).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TermOrder {
    Lex,
    DegRevLex,
    Elim(usize),
}

impl TermOrder {
    pub fn cmp_exp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match *self {
            TermOrder::Lex => {
                for i in 0..a.len() {
                    if a[i] != b[i] {
                        return a[i].cmp(&b[i]);
                    }
                }
                Ordering::Equal
            }
            TermOrder::DegRevLex => cmp_degrevlex(a, b),
            TermOrder::Elim(k) => {
                let da: u32 = a[..k].iter().sum();
                let db: u32 = b[..k].iter().sum();
                if da != db {
                    return da.cmp(&db);
                }
                match cmp_degrevlex(&a[..k], &b[..k]) {
                    Ordering::Equal => cmp_degrevlex(&a[k..], &b[k..]),
                    o => o,
                }
            }
        }
    }
}

/// Finitely generated ideal with a cache of reduced Gröbner bases per term
/// order. Generators are normalized (zero generators dropped, unit content
/// removed) at construction; the cache is an internally synchronized memo,
/// so `Ideal` is safe to share across threads.
pub struct Ideal {
    ring: Arc<VarRing>,
    gens: Vec<Poly>,
    cache: Mutex<HashMap<TermOrder, Arc<Vec<Poly>>>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        Ideal {
            ring: self.ring.clone(),
            gens: self.gens.clone(),
            cache: Mutex::new(self.cache.lock().unwrap().clone()),
        }
    }
}

impl std::fmt::Debug for Ideal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Ideal(")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

impl Ideal {
    pub fn new(ring: &Arc<VarRing>, gens: Vec<Poly>) -> Ideal {
        let mut norm: Vec<Poly> = gens
            .into_iter()
            .filter(|g| !g.is_zero())
            .map(|g| g.primitive())
            .collect();
        norm.sort_by(|a, b| a.canonical_cmp(b));
        norm.dedup();
        Ideal {
            ring: ring.clone(),
            gens: norm,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn zero(ring: &Arc<VarRing>) -> Ideal {
        Ideal::new(ring, vec![])
    }

    pub fn unit(ring: &Arc<VarRing>) -> Ideal {
        Ideal::new(ring, vec![Poly::one(ring)])
    }

    pub fn ring(&self) -> &Arc<VarRing> {
        &self.ring
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn plus(&self, extra: &[Poly]) -> Ideal {
        let mut gens = self.gens.clone();
        gens.extend(extra.iter().cloned());
        Ideal::new(&self.ring, gens)
    }

    /// Reduced Gröbner basis under `ord`, memoized.
    pub fn groebner_basis(&self, ord: TermOrder, ctx: &Ctx) -> Result<Arc<Vec<Poly>>> {
        if let Some(b) = self.cache.lock().unwrap().get(&ord) {
            return Ok(b.clone());
        }
        let basis = Arc::new(buchberger(&self.gens, ord, ctx, None)?);
        self.cache.lock().unwrap().insert(ord, basis.clone());
        Ok(basis)
    }

    /// Remainder of `p` on division by the reduced basis; zero iff `p` is a
    /// member.
    pub fn normal_form(&self, p: &Poly, ord: TermOrder, ctx: &Ctx) -> Result<Poly> {
        let basis = self.groebner_basis(ord, ctx)?;
        reduce_full(p, &basis, ord, ctx, None)
    }

    pub fn contains(&self, p: &Poly, ctx: &Ctx) -> Result<bool> {
        Ok(self.normal_form(p, TermOrder::DegRevLex, ctx)?.is_zero())
    }

    pub fn equals(&self, other: &Ideal, ctx: &Ctx) -> Result<bool> {
        for g in other.gens() {
            if !self.contains(g, ctx)? {
                return Ok(false);
            }
        }
        for g in self.gens() {
            if !other.contains(g, ctx)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn contains_ideal(&self, other: &Ideal, ctx: &Ctx) -> Result<bool> {
        for g in other.gens() {
            if !self.contains(g, ctx)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_unit_ideal(&self, ctx: &Ctx) -> Result<bool> {
        self.contains(&Poly::one(&self.ring), ctx)
    }
}

// ---------------------------------------------------------------------------
// Division and Buchberger
// ---------------------------------------------------------------------------

fn exp_divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn exp_lcm(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn exp_sub(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn exp_deg(a: &[u32]) -> u32 {
    a.iter().sum()
}

fn truncate_poly(p: &Poly, cut: Option<u32>) -> Poly {
    match cut {
        None => p.clone(),
        Some(k) => {
            let mut out = Poly::zero(p.ring());
            for (e, c) in p.terms() {
                if exp_deg(e) < k {
                    out.add_term(e.clone(), c.clone());
                }
            }
            out
        }
    }
}

/// Full normal form of `p` against `basis` (top and tail reduction).
/// `cut` drops all terms of total degree >= k, working modulo the k-th
/// power of the maximal ideal.
fn reduce_full(
    p: &Poly,
    basis: &[Poly],
    ord: TermOrder,
    ctx: &Ctx,
    cut: Option<u32>,
) -> Result<Poly> {
    let leads: Vec<(Vec<u32>, Q)> = basis
        .iter()
        .map(|g| {
            let (e, c) = g.leading(|a, b| ord.cmp_exp(a, b)).expect("nonzero basis");
            (e.clone(), c.clone())
        })
        .collect();
    let mut work = truncate_poly(p, cut);
    let mut out = Poly::zero(p.ring());
    let mut steps: usize = 0;
    while !work.is_zero() {
        steps += 1;
        if steps > ctx.caps.max_pairs {
            return Err(Error::BasisCap { size: steps });
        }
        let (le, lc) = {
            let (e, c) = work.leading(|a, b| ord.cmp_exp(a, b)).unwrap();
            (e.clone(), c.clone())
        };
        if exp_deg(&le) > ctx.caps.max_total_degree {
            return Err(Error::DegreeCap {
                degree: exp_deg(&le),
                cap: ctx.caps.max_total_degree,
            });
        }
        let mut reduced = false;
        for (i, (ge, gc)) in leads.iter().enumerate() {
            if exp_divides(ge, &le) {
                let factor = &lc / gc;
                let shift = exp_sub(&le, ge);
                let sub = basis[i].mul_monomial(&shift, &factor);
                work = truncate_poly(&work.sub(&sub), cut);
                reduced = true;
                break;
            }
        }
        if !reduced {
            // move the leading term to the output
            out.add_term(le.clone(), lc.clone());
            work.add_term(le, -lc);
        }
    }
    Ok(out)
}

#[derive(PartialEq, Eq)]
struct Pair {
    sugar: u32,
    lcm: Vec<u32>,
    i: usize,
    j: usize,
}

impl Ord for Pair {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sugar
            .cmp(&other.sugar)
            .then_with(|| cmp_degrevlex(&self.lcm, &other.lcm))
            .then_with(|| (self.i, self.j).cmp(&(other.i, other.j)))
    }
}

impl PartialOrd for Pair {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Buchberger's algorithm returning the reduced basis, sorted ascending by
/// leading term. `cut` enables truncated arithmetic for local colengths;
/// in that mode the generators of the k-th power of the maximal ideal are
/// implicitly present (see `local_colength_origin`).
fn buchberger(
    gens: &[Poly],
    ord: TermOrder,
    ctx: &Ctx,
    cut: Option<u32>,
) -> Result<Vec<Poly>> {
    let ring = match gens.first() {
        Some(g) => g.ring().clone(),
        None => return Ok(vec![]),
    };
    let mut basis: Vec<Poly> = Vec::new();
    let mut sugars: Vec<u32> = Vec::new();
    let mut queue: BTreeSet<Pair> = BTreeSet::new();

    let insert = |g: Poly,
                      basis: &mut Vec<Poly>,
                      sugars: &mut Vec<u32>,
                      queue: &mut BTreeSet<Pair>|
     -> Result<()> {
        let g = g.primitive();
        let sugar_new = g.total_degree();
        let (lt_new, _) = g.leading(|a, b| ord.cmp_exp(a, b)).unwrap();
        let lt_new = lt_new.clone();
        let new_idx = basis.len();
        // Gebauer-Möller style pruning of existing pairs strictly covered by
        // the new element.
        let stale: Vec<Pair> = queue
            .iter()
            .filter(|p| {
                let (le_i, _) = basis[p.i].leading(|a, b| ord.cmp_exp(a, b)).unwrap();
                let (le_j, _) = basis[p.j].leading(|a, b| ord.cmp_exp(a, b)).unwrap();
                exp_divides(&lt_new, &p.lcm)
                    && exp_lcm(le_i, &lt_new) != p.lcm
                    && exp_lcm(le_j, &lt_new) != p.lcm
            })
            .map(|p| Pair {
                sugar: p.sugar,
                lcm: p.lcm.clone(),
                i: p.i,
                j: p.j,
            })
            .collect();
        for p in stale {
            queue.remove(&p);
        }
        for (i, other) in basis.iter().enumerate() {
            let (lt_i, _) = other.leading(|a, b| ord.cmp_exp(a, b)).unwrap();
            // monomial-monomial S-polynomials vanish identically
            if other.num_terms() == 1 && g.num_terms() == 1 {
                continue;
            }
            // product criterion
            let lcm = exp_lcm(lt_i, &lt_new);
            if lcm == lt_i.iter().zip(&lt_new).map(|(a, b)| a + b).collect::<Vec<u32>>() {
                continue;
            }
            let sugar = exp_deg(&lcm)
                .max(sugars[i] + exp_deg(&lcm) - exp_deg(lt_i))
                .max(sugar_new + exp_deg(&lcm) - exp_deg(&lt_new));
            queue.insert(Pair {
                sugar,
                lcm,
                i,
                j: new_idx,
            });
        }
        basis.push(g);
        sugars.push(sugar_new);
        if basis.len() > ctx.caps.max_basis {
            return Err(Error::BasisCap { size: basis.len() });
        }
        Ok(())
    };

    let mut init: Vec<Poly> = gens
        .iter()
        .map(|g| truncate_poly(g, cut))
        .filter(|g| !g.is_zero())
        .collect();
    init.sort_by(|a, b| a.canonical_cmp(b));
    for g in init {
        insert(g, &mut basis, &mut sugars, &mut queue)?;
    }

    let mut processed: usize = 0;
    while let Some(pair) = queue.iter().next().map(|p| Pair {
        sugar: p.sugar,
        lcm: p.lcm.clone(),
        i: p.i,
        j: p.j,
    }) {
        queue.remove(&pair);
        processed += 1;
        if processed > ctx.caps.max_pairs {
            return Err(Error::BasisCap { size: processed });
        }
        let (gi, gj) = (&basis[pair.i], &basis[pair.j]);
        let (ei, ci) = gi.leading(|a, b| ord.cmp_exp(a, b)).unwrap();
        let (ej, cj) = gj.leading(|a, b| ord.cmp_exp(a, b)).unwrap();
        let lcm = exp_lcm(ei, ej);
        if exp_deg(&lcm) > ctx.caps.max_total_degree {
            return Err(Error::DegreeCap {
                degree: exp_deg(&lcm),
                cap: ctx.caps.max_total_degree,
            });
        }
        let s = gi
            .mul_monomial(&exp_sub(&lcm, ei), &(Q::one() / ci))
            .sub(&gj.mul_monomial(&exp_sub(&lcm, ej), &(Q::one() / cj)));
        let s = truncate_poly(&s, cut);
        let r = reduce_full(&s, &basis, ord, ctx, cut)?;
        if !r.is_zero() {
            insert(r, &mut basis, &mut sugars, &mut queue)?;
        }
    }

    // Minimalize: drop elements whose leading term is divisible by another's.
    let mut keep: Vec<bool> = vec![true; basis.len()];
    for i in 0..basis.len() {
        if !keep[i] {
            continue;
        }
        let (ei, _) = basis[i].leading(|a, b| ord.cmp_exp(a, b)).unwrap();
        let ei = ei.clone();
        for j in 0..basis.len() {
            if i == j || !keep[j] {
                continue;
            }
            let (ej, _) = basis[j].leading(|a, b| ord.cmp_exp(a, b)).unwrap();
            if exp_divides(&ej, &ei) && (ej != &ei || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    let minimal: Vec<Poly> = basis
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(g, _)| g)
        .collect();

    // Tail-reduce each element against the others and normalize monic.
    let mut reduced: Vec<Poly> = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Poly> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let r = if others.is_empty() {
            minimal[i].clone()
        } else {
            reduce_full(&minimal[i], &others, ord, ctx, cut)?
        };
        if r.is_zero() {
            continue;
        }
        let (_, lc) = r.leading(|a, b| ord.cmp_exp(a, b)).unwrap();
        let lc = lc.clone();
        reduced.push(r.scale(&(Q::one() / lc)));
    }
    reduced.sort_by(|a, b| {
        let (ea, _) = a.leading(|x, y| ord.cmp_exp(x, y)).unwrap();
        let (eb, _) = b.leading(|x, y| ord.cmp_exp(x, y)).unwrap();
        ord.cmp_exp(eb, ea)
    });
    let ring_check = reduced.iter().all(|g| same_ring(g.ring(), &ring));
    debug_assert!(ring_check);
    Ok(reduced)
}

// ---------------------------------------------------------------------------
// Quotient, saturation, intersection, elimination
// ---------------------------------------------------------------------------

/// Exact division of `g` by `f` assuming `g` is a multiple of `f`.
fn exact_div(g: &Poly, f: &Poly) -> Option<Poly> {
    let ord = TermOrder::DegRevLex;
    let (fe, fc) = f.leading(|a, b| ord.cmp_exp(a, b))?;
    let mut rem = g.clone();
    let mut quot = Poly::zero(g.ring());
    while !rem.is_zero() {
        let (re, rc) = {
            let (e, c) = rem.leading(|a, b| ord.cmp_exp(a, b)).unwrap();
            (e.clone(), c.clone())
        };
        if !exp_divides(fe, &re) {
            return None;
        }
        let shift = exp_sub(&re, fe);
        let factor = &rc / fc;
        quot.add_term(shift.clone(), factor.clone());
        rem = rem.sub(&f.mul_monomial(&shift, &factor));
    }
    Some(quot)
}

/// Intersection of two ideals via the single-auxiliary-variable trick.
pub fn intersect(i: &Ideal, j: &Ideal, ctx: &Ctx) -> Result<Ideal> {
    let ring = i.ring();
    if i.is_zero_ideal() || j.is_zero_ideal() {
        return Ok(Ideal::zero(ring));
    }
    let ext = ring.extended(1);
    let w = Poly::var(&ext, 0);
    let one_minus_w = Poly::one(&ext).sub(&w);
    let mut gens = Vec::new();
    for g in i.gens() {
        gens.push(g.map_to_ring(&ext)?.mul(&w));
    }
    for g in j.gens() {
        gens.push(g.map_to_ring(&ext)?.mul(&one_minus_w));
    }
    let extended = Ideal::new(&ext, gens);
    let basis = extended.groebner_basis(TermOrder::Elim(1), ctx)?;
    let mut out = Vec::new();
    for g in basis.iter() {
        if g.terms().all(|(e, _)| e[0] == 0) {
            out.push(g.map_to_ring(ring)?);
        }
    }
    Ok(Ideal::new(ring, out))
}

/// Colon ideal by a single polynomial: (I : f).
fn quotient_by_poly(i: &Ideal, f: &Poly, ctx: &Ctx) -> Result<Ideal> {
    let ring = i.ring();
    if f.is_zero() {
        return Ok(Ideal::unit(ring));
    }
    if i.is_zero_ideal() {
        return Ok(Ideal::zero(ring));
    }
    let meet = intersect(i, &Ideal::new(ring, vec![f.clone()]), ctx)?;
    let mut gens = Vec::new();
    for g in meet.gens() {
        let q = exact_div(g, f).ok_or_else(|| {
            Error::Precondition("intersection generator not divisible in quotient".into())
        })?;
        gens.push(q);
    }
    Ok(Ideal::new(ring, gens))
}

/// (I : J) = { g : gJ ⊆ I }.
pub fn ideal_quotient(i: &Ideal, j: &Ideal, ctx: &Ctx) -> Result<Ideal> {
    if j.is_zero_ideal() {
        return Ok(Ideal::unit(i.ring()));
    }
    let mut acc: Option<Ideal> = None;
    for f in j.gens() {
        let qf = quotient_by_poly(i, f, ctx)?;
        acc = Some(match acc {
            None => qf,
            Some(prev) => intersect(&prev, &qf, ctx)?,
        });
    }
    Ok(acc.unwrap())
}

/// Saturation by a single polynomial via one elimination: adjoin an
/// inverse for `g` with an auxiliary variable and contract back.
fn saturate_by_poly(i: &Ideal, g: &Poly, ctx: &Ctx) -> Result<Ideal> {
    let ring = i.ring();
    if g.is_zero() {
        return Ok(Ideal::unit(ring));
    }
    if i.is_zero_ideal() {
        return Ok(Ideal::zero(ring));
    }
    let ext = ring.extended(1);
    let w = Poly::var(&ext, 0);
    let mut gens: Vec<Poly> = Vec::new();
    for f in i.gens() {
        gens.push(f.map_to_ring(&ext)?);
    }
    gens.push(Poly::one(&ext).sub(&w.mul(&g.map_to_ring(&ext)?)));
    let extended = Ideal::new(&ext, gens);
    let basis = extended.groebner_basis(TermOrder::Elim(1), ctx)?;
    let mut out = Vec::new();
    for b in basis.iter() {
        if b.terms().all(|(e, _)| e[0] == 0) {
            out.push(b.map_to_ring(ring)?);
        }
    }
    Ok(Ideal::new(ring, out))
}

/// Saturation (I : J^inf): the intersection of the single-generator
/// saturations. Idempotent; iterated quotients give the same ideal and
/// are used as a cross-check in the test suite.
pub fn saturate(i: &Ideal, j: &Ideal, ctx: &Ctx) -> Result<Ideal> {
    if j.is_zero_ideal() {
        return Ok(Ideal::unit(i.ring()));
    }
    let mut acc: Option<Ideal> = None;
    for g in j.gens() {
        let s = saturate_by_poly(i, g, ctx)?;
        acc = Some(match acc {
            None => s,
            Some(prev) => {
                if prev.contains_ideal(&s, ctx)? {
                    s
                } else if s.contains_ideal(&prev, ctx)? {
                    prev
                } else {
                    intersect(&prev, &s, ctx)?
                }
            }
        });
    }
    Ok(acc.unwrap())
}

/// Saturation by iterated quotients, kept as the slower reference
/// implementation for cross-checks.
pub fn saturate_by_quotients(i: &Ideal, j: &Ideal, ctx: &Ctx) -> Result<Ideal> {
    let mut current = i.clone();
    for _ in 0..ctx.caps.quotient_chain {
        let next = ideal_quotient(&current, j, ctx)?;
        if next.equals(&current, ctx)? {
            return Ok(current);
        }
        current = next;
    }
    Err(Error::QuotientChain(ctx.caps.quotient_chain))
}

/// Elimination ideal: I ∩ k[remaining variables], as an ideal of the
/// subring without the dropped variables.
pub fn eliminate(i: &Ideal, drop: &[usize], ctx: &Ctx) -> Result<Ideal> {
    let ring = i.ring();
    let n = ring.nvars();
    let mut drop_sorted: Vec<usize> = drop.to_vec();
    drop_sorted.sort_unstable();
    drop_sorted.dedup();
    let keep: Vec<usize> = (0..n).filter(|k| !drop_sorted.contains(k)).collect();
    // permutation: dropped variables first
    let perm: Vec<usize> = drop_sorted.iter().chain(keep.iter()).copied().collect();
    let perm_names: Vec<String> = perm.iter().map(|&k| ring.vars()[k].clone()).collect();
    let perm_ring = VarRing::new(perm_names)?;
    let mut gens = Vec::new();
    for g in i.gens() {
        gens.push(g.map_to_ring(&perm_ring)?);
    }
    let permuted = Ideal::new(&perm_ring, gens);
    let basis = permuted.groebner_basis(TermOrder::Elim(drop_sorted.len()), ctx)?;
    let sub = ring.subring_without(&drop_sorted);
    let mut out = Vec::new();
    for g in basis.iter() {
        if g.terms().all(|(e, _)| e[..drop_sorted.len()].iter().all(|&k| k == 0)) {
            out.push(g.map_to_ring(&sub)?);
        }
    }
    Ok(Ideal::new(&sub, out))
}

// ---------------------------------------------------------------------------
// Colengths and dimension
// ---------------------------------------------------------------------------

/// Finite colength or the infinity flag for non-zero-dimensional ideals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Colength {
    Finite(u128),
    Infinite,
}

impl Colength {
    pub fn finite(self) -> Option<u128> {
        match self {
            Colength::Finite(v) => Some(v),
            Colength::Infinite => None,
        }
    }
}

fn count_standard_monomials(leads: &[Vec<u32>], nvars: usize) -> Colength {
    // unit ideal: empty staircase
    if leads.iter().any(|e| exp_deg(e) == 0) {
        return Colength::Finite(0);
    }
    // zero-dimensionality: every variable needs a pure power among the
    // leading terms
    let mut bounds = vec![u32::MAX; nvars];
    for e in leads {
        let nz: Vec<usize> = (0..nvars).filter(|&i| e[i] > 0).collect();
        if nz.len() == 1 {
            bounds[nz[0]] = bounds[nz[0]].min(e[nz[0]]);
        }
    }
    if bounds.iter().any(|&b| b == u32::MAX) {
        return Colength::Infinite;
    }
    fn rec(leads: &[Vec<u32>], bounds: &[u32], exp: &mut Vec<u32>, i: usize) -> u128 {
        if i == bounds.len() {
            return 1;
        }
        let mut total = 0u128;
        for e in 0..bounds[i] {
            exp[i] = e;
            // prune: if some lead is already dominated on coordinates <= i and
            // has no later coordinates, the whole subtree is divisible
            let divisible = leads.iter().any(|l| {
                l[..=i].iter().zip(exp[..=i].iter()).all(|(a, b)| a <= b)
                    && l[i + 1..].iter().all(|&k| k == 0)
            });
            if divisible {
                continue;
            }
            total += rec(leads, bounds, exp, i + 1);
        }
        exp[i] = 0;
        total
    }
    let mut exp = vec![0u32; nvars];
    Colength::Finite(rec(leads, &bounds, &mut exp, 0))
}

/// Dimension of the quotient algebra as a rational vector space: the count
/// of standard monomials under any order (order-independent).
pub fn colength_global(i: &Ideal, ctx: &Ctx) -> Result<Colength> {
    colength_global_under(i, TermOrder::DegRevLex, ctx)
}

pub fn colength_global_under(i: &Ideal, ord: TermOrder, ctx: &Ctx) -> Result<Colength> {
    if i.is_zero_ideal() {
        return Ok(if i.ring().nvars() == 0 {
            Colength::Finite(1)
        } else {
            Colength::Infinite
        });
    }
    let basis = i.groebner_basis(ord, ctx)?;
    let leads: Vec<Vec<u32>> = basis
        .iter()
        .map(|g| g.leading(|a, b| ord.cmp_exp(a, b)).unwrap().0.clone())
        .collect();
    Ok(count_standard_monomials(&leads, i.ring().nvars()))
}

/// Result of an m-adic local colength computation. `stabilized_at` is the
/// first truncation exponent of the confirmed plateau; `None` together
/// with `Colength::Infinite` means the sequence was still moving at the
/// cap (the origin is not an isolated point of the vanishing locus).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalColength {
    pub value: Colength,
    pub stabilized_at: Option<u32>,
}

impl LocalColength {
    pub fn expect_finite(&self, what: &str) -> Result<u128> {
        match self.value {
            Colength::Finite(v) => Ok(v),
            Colength::Infinite => Err(Error::ImproperIntersection(format!(
                "{what}: not zero-dimensional at the origin"
            ))),
        }
    }
}

fn monomials_of_degree(ring: &Arc<VarRing>, k: u32) -> Vec<Poly> {
    fn rec(n: usize, i: usize, left: u32, exp: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == n - 1 {
            exp[i] = left;
            out.push(exp.clone());
            return;
        }
        for e in 0..=left {
            exp[i] = e;
            rec(n, i + 1, left - e, exp, out);
        }
    }
    let n = ring.nvars();
    let mut exps = Vec::new();
    rec(n, 0, k, &mut vec![0; n], &mut exps);
    exps.into_iter()
        .map(|e| Poly::monomial(ring, e, Q::one()))
        .collect()
}

/// Colength of the quotient truncated at the k-th power of the maximal
/// ideal: standard monomials of total degree < k of the basis of
/// I + m^k. The monomial generators of m^k take part in pair formation
/// (a polynomial-monomial S-pair can drop below degree k), while
/// monomial-monomial pairs vanish identically and are skipped.
fn truncated_colength(i: &Ideal, k: u32, ctx: &Ctx) -> Result<u128> {
    let mut gens = i.gens().to_vec();
    gens.extend(monomials_of_degree(i.ring(), k));
    let basis = buchberger(&gens, TermOrder::DegRevLex, ctx, Some(k + 1))?;
    let n = i.ring().nvars();
    let leads: Vec<Vec<u32>> = basis
        .iter()
        .map(|g| {
            g.leading(|a, b| TermOrder::DegRevLex.cmp_exp(a, b))
                .unwrap()
                .0
                .clone()
        })
        .collect();
    if leads.iter().any(|e| exp_deg(e) == 0) {
        return Ok(0);
    }
    // enumerate monomials of degree < k not divisible by any lead
    fn rec(leads: &[Vec<u32>], exp: &mut Vec<u32>, i: usize, remaining: u32) -> u128 {
        if i == exp.len() {
            return 1;
        }
        let mut total = 0u128;
        for e in 0..=remaining {
            exp[i] = e;
            let divisible = leads.iter().any(|l| {
                l[..=i].iter().zip(exp[..=i].iter()).all(|(a, b)| a <= b)
                    && l[i + 1..].iter().all(|&x| x == 0)
            });
            if !divisible {
                total += rec(leads, exp, i + 1, remaining - e);
            }
        }
        exp[i] = 0;
        total
    }
    let mut exp = vec![0u32; n];
    Ok(rec(&leads, &mut exp, 0, k - 1))
}

/// Exact test whether the origin is an isolated point of the vanishing
/// locus (or off it entirely): saturating away everything supported at the
/// origin must leave an ideal whose locus misses the origin.
pub fn origin_isolated(i: &Ideal, ctx: &Ctx) -> Result<bool> {
    let ring = i.ring();
    if i.is_zero_ideal() {
        return Ok(ring.nvars() == 0);
    }
    let m = Ideal::new(ring, (0..ring.nvars()).map(|k| Poly::var(ring, k)).collect());
    let j = saturate(i, &m, ctx)?;
    Ok(j
        .gens()
        .iter()
        .any(|g| !g.constant_coeff().is_zero()))
}

/// Length of the local ring quotient at the origin: the stabilized value of
/// the m-adic truncations, with two confirming repeats.
///
/// The associated graded algebra is standard graded, so one plateau step
/// already certifies stabilization; the second confirmation follows the
/// documented stopping rule. If no plateau shows up within a soft window
/// the engine decides isolation exactly (by saturation) before either
/// returning the infinity flag or grinding on to the hard cap.
pub fn local_colength_origin(i: &Ideal, ctx: &Ctx) -> Result<LocalColength> {
    let mut values: Vec<u128> = Vec::new();
    let soft = ctx.caps.k_max.min(6);
    let mut decided_isolated = false;
    let mut k = 1u32;
    while k <= ctx.caps.k_max {
        let c = truncated_colength(i, k, ctx)?;
        values.push(c);
        let len = values.len();
        if len >= 3
            && values[len - 1] == values[len - 2]
            && values[len - 2] == values[len - 3]
        {
            let at = k - 2;
            ctx.note_stabilization(at);
            return Ok(LocalColength {
                value: Colength::Finite(values[len - 1]),
                stabilized_at: Some(at),
            });
        }
        if k == soft && !decided_isolated {
            if !origin_isolated(i, ctx)? {
                return Ok(LocalColength {
                    value: Colength::Infinite,
                    stabilized_at: None,
                });
            }
            decided_isolated = true;
        }
        k += 1;
    }
    if decided_isolated {
        // proven isolated but the multiplicity exceeds the truncation cap
        return Err(Error::DegreeCap {
            degree: ctx.caps.k_max,
            cap: ctx.caps.k_max,
        });
    }
    Ok(LocalColength {
        value: Colength::Infinite,
        stabilized_at: None,
    })
}

/// Local dimension at the origin of the vanishing locus: smallest number of
/// random linear forms whose addition makes the local colength finite; -1
/// when the origin is not on the locus. Isolation is decided exactly (by
/// saturation) before any truncation work, so positive-dimensional input
/// never grinds through the m-adic loop.
pub fn local_dim_origin(i: &Ideal, ctx: &Ctx) -> Result<i32> {
    // off the locus entirely: some generator is a unit at the origin
    if i.gens().iter().any(|g| !g.constant_coeff().is_zero()) {
        return Ok(-1);
    }
    if origin_isolated(i, ctx)? {
        let lc = local_colength_origin(i, ctx)?;
        return Ok(match lc.value {
            Colength::Finite(0) => -1,
            _ => 0,
        });
    }
    let ring = i.ring();
    let n = ring.nvars();
    for k in 1..=n {
        for attempt in 0..ctx.caps.retries {
            let mut rng = ctx.rng(&format!("local-dim:{k}:{attempt}"));
            let forms: Vec<Poly> = (0..k)
                .map(|_| {
                    let coeffs: Vec<Q> = (0..n)
                        .map(|_| Q::from_integer(BigInt::from(rng.small(3))))
                        .collect();
                    LinearForm { coeffs }.to_poly(ring)
                })
                .collect();
            if forms.iter().any(|f| f.is_zero()) {
                continue;
            }
            let cut = i.plus(&forms);
            if origin_isolated(&cut, ctx)? {
                return Ok(k as i32);
            }
        }
    }
    Err(Error::RetryExhausted(
        "local dimension did not resolve within the retry budget".into(),
    ))
}

// ---------------------------------------------------------------------------
// Univariate helpers and point counting
// ---------------------------------------------------------------------------

/// Dense coefficient list (ascending degree) of a polynomial in a 1-variable
/// ring.
pub fn to_univariate(p: &Poly) -> Vec<Q> {
    let d = p.total_degree() as usize;
    let mut coeffs = vec![Q::zero(); d + 1];
    for (e, c) in p.terms() {
        coeffs[e[0] as usize] = c.clone();
    }
    coeffs
}

fn uni_degree(c: &[Q]) -> Option<usize> {
    c.iter().rposition(|x| !x.is_zero())
}

fn uni_rem(a: &[Q], b: &[Q]) -> Vec<Q> {
    let db = uni_degree(b).expect("division by zero polynomial");
    let mut r: Vec<Q> = a.to_vec();
    loop {
        let dr = match uni_degree(&r) {
            Some(d) if d >= db => d,
            _ => return r,
        };
        let factor = &r[dr] / &b[db];
        for i in 0..=db {
            let t = &b[i] * &factor;
            r[i + dr - db] -= t;
        }
    }
}

fn uni_gcd(a: &[Q], b: &[Q]) -> Vec<Q> {
    let (mut f, mut g) = (a.to_vec(), b.to_vec());
    loop {
        match uni_degree(&g) {
            None => {
                // normalize monic
                if let Some(d) = uni_degree(&f) {
                    let lead = f[d].clone();
                    for c in f.iter_mut() {
                        *c /= &lead;
                    }
                }
                return f;
            }
            Some(_) => {
                let r = uni_rem(&f, &g);
                f = g;
                g = r;
            }
        }
    }
}

fn uni_derivative(a: &[Q]) -> Vec<Q> {
    if a.len() <= 1 {
        return vec![Q::zero()];
    }
    (1..a.len())
        .map(|i| &a[i] * Q::from_integer(BigInt::from(i)))
        .collect()
}

/// Degree of the squarefree part of a univariate polynomial.
pub fn squarefree_degree(a: &[Q]) -> usize {
    let d = match uni_degree(a) {
        Some(d) => d,
        None => return 0,
    };
    if d == 0 {
        return 0;
    }
    let g = uni_gcd(a, &uni_derivative(a));
    d - uni_degree(&g).unwrap_or(0)
}

fn count_distinct_values(i: &Ideal, form: &LinearForm, ctx: &Ctx) -> Result<u64> {
    let ring = i.ring();
    let ext = ring.extended(1);
    let w = Poly::var(&ext, 0);
    let mut gens = Vec::new();
    for g in i.gens() {
        gens.push(g.map_to_ring(&ext)?);
    }
    gens.push(w.sub(&form.to_poly(ring).map_to_ring(&ext)?));
    let extended = Ideal::new(&ext, gens);
    let drop: Vec<usize> = (1..ext.nvars()).collect();
    let uni_ideal = eliminate(&extended, &drop, ctx)?;
    let gen = match uni_ideal.gens().first() {
        Some(g) => g.clone(),
        None => return Err(Error::NotZeroDimensional),
    };
    Ok(squarefree_degree(&to_univariate(&gen)) as u64)
}

/// Number of distinct points of the vanishing locus over the complex
/// numbers: the squarefree degree of the minimal polynomial of a random
/// linear form, confirmed by a second independent form.
pub fn distinct_root_count(i: &Ideal, ctx: &Ctx) -> Result<u64> {
    if colength_global(i, ctx)? == Colength::Infinite {
        return Err(Error::NotZeroDimensional);
    }
    if i.is_unit_ideal(ctx)? {
        return Ok(0);
    }
    let n = i.ring().nvars();
    for attempt in 0..ctx.caps.retries {
        let mut draw = |tag: &str| -> LinearForm {
            let mut rng = ctx.rng(&format!("roots:{tag}:{attempt}"));
            let height = 2 + 3 * attempt as u64;
            LinearForm {
                coeffs: (0..n)
                    .map(|_| Q::from_integer(BigInt::from(rng.small_nonzero(height))))
                    .collect(),
            }
        };
        let c1 = count_distinct_values(i, &draw("a"), ctx)?;
        let c2 = count_distinct_values(i, &draw("b"), ctx)?;
        if c1 == c2 {
            return Ok(c1);
        }
    }
    Err(Error::RetryExhausted(
        "distinct point counts kept disagreeing".into(),
    ))
}

// ---------------------------------------------------------------------------
// Rational point extraction (lex back-substitution)
// ---------------------------------------------------------------------------

fn integer_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let mut n = n.abs();
    if n.is_zero() {
        return None;
    }
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut d = BigInt::from(2);
    let limit = BigInt::from(1_000_000u64);
    while &d * &d <= n {
        if &d > &limit {
            return None; // factor scan bailed out
        }
        if (&n % &d).is_zero() {
            let mut mult = 0;
            while (&n % &d).is_zero() {
                n /= &d;
                mult += 1;
            }
            primes.push((d.clone(), mult));
        }
        d += 1;
    }
    if n > BigInt::one() {
        primes.push((n, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, m) in primes {
        let base = divs.clone();
        let mut pk = BigInt::one();
        for _ in 0..m {
            pk = &pk * &p;
            for b in &base {
                divs.push(b * &pk);
            }
        }
    }
    Some(divs)
}

/// Rational roots of a univariate polynomial (exact).
pub fn rational_roots(coeffs: &[Q]) -> Option<Vec<Q>> {
    let d = uni_degree(coeffs)?;
    if d == 0 {
        return Some(vec![]);
    }
    // clear denominators, strip powers of the variable
    let mut den = BigInt::one();
    for c in coeffs.iter() {
        den = num_integer::Integer::lcm(&den, c.denom());
    }
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| (c * Q::from_integer(den.clone())).to_integer())
        .collect();
    let low = ints.iter().position(|c| !c.is_zero()).unwrap();
    let mut roots = Vec::new();
    if low > 0 {
        roots.push(Q::zero());
    }
    let trimmed = &ints[low..];
    if trimmed.len() == 1 {
        return Some(roots);
    }
    let a0 = trimmed.first().unwrap();
    let ad = trimmed.last().unwrap();
    let ps = integer_divisors(a0)?;
    let qs = integer_divisors(ad)?;
    let eval = |x: &Q| -> Q {
        let mut acc = Q::zero();
        for c in trimmed.iter().rev() {
            acc = acc * x + Q::from_integer(c.clone());
        }
        acc
    };
    let mut seen = std::collections::BTreeSet::new();
    for p in &ps {
        for q in &qs {
            for sign in [1i32, -1] {
                let cand = Q::new(p * BigInt::from(sign), q.clone());
                let key = format!("{cand}");
                if seen.contains(&key) {
                    continue;
                }
                seen.insert(key);
                if eval(&cand).is_zero() {
                    roots.push(cand);
                }
            }
        }
    }
    Some(roots)
}

/// All rational points of a zero-dimensional ideal, by lex triangularization
/// and rational-root back-substitution. Points with irrational coordinates
/// are silently not returned.
pub fn rational_points(i: &Ideal, ctx: &Ctx) -> Result<Vec<Vec<Q>>> {
    if colength_global(i, ctx)? == Colength::Infinite {
        return Err(Error::NotZeroDimensional);
    }
    fn solve(i: &Ideal, ctx: &Ctx) -> Result<Vec<Vec<Q>>> {
        let ring = i.ring();
        let n = ring.nvars();
        if i.is_unit_ideal(ctx)? {
            return Ok(vec![]);
        }
        let basis = i.groebner_basis(TermOrder::Lex, ctx)?;
        if n == 1 {
            let g = basis
                .first()
                .ok_or(Error::NotZeroDimensional)?;
            let roots = rational_roots(&to_univariate(g)).ok_or_else(|| {
                Error::SamplingFailure("rational root scan bailed out".into())
            })?;
            return Ok(roots.into_iter().map(|r| vec![r]).collect());
        }
        // univariate generators in the last variable
        let uni: Vec<&Poly> = basis
            .iter()
            .filter(|g| g.terms().all(|(e, _)| e[..n - 1].iter().all(|&k| k == 0)))
            .collect();
        if uni.is_empty() {
            return Err(Error::NotZeroDimensional);
        }
        let sub = ring.subring_without(&[n - 1]);
        let one_var = VarRing::new(vec![ring.vars()[n - 1].clone()])?;
        let mut g_coeffs: Option<Vec<Q>> = None;
        for g in uni {
            let c = to_univariate(&g.map_to_ring(&one_var)?);
            g_coeffs = Some(match g_coeffs {
                None => c,
                Some(prev) => uni_gcd(&prev, &c),
            });
        }
        let roots = rational_roots(&g_coeffs.unwrap())
            .ok_or_else(|| Error::SamplingFailure("rational root scan bailed out".into()))?;
        let mut points = Vec::new();
        for r in roots {
            let value = Poly::constant(ring, r.clone());
            let mut gens = Vec::new();
            for g in basis.iter() {
                let s = g.substitute(n - 1, &value);
                if !s.is_zero() {
                    gens.push(s.map_to_ring(&sub)?);
                }
            }
            let reduced = Ideal::new(&sub, gens);
            if reduced.is_zero_ideal() {
                // the remaining variables are unconstrained: positive-dim
                return Err(Error::NotZeroDimensional);
            }
            for mut p in solve(&reduced, ctx)? {
                p.push(r.clone());
                points.push(p);
            }
        }
        Ok(points)
    }
    solve(i, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, q_int};

    fn ctx() -> Ctx {
        Ctx::new(17)
    }

    fn ideal(ring: &Arc<VarRing>, gens: &[&str]) -> Ideal {
        Ideal::new(
            ring,
            gens.iter().map(|g| parse_poly(g, ring).unwrap()).collect(),
        )
    }

    #[test]
    fn reduced_basis_examples() {
        let ctx = ctx();
        let r = VarRing::new(vec!["x", "y"]).unwrap();
        // already reduced under lex
        let i = ideal(&r, &["x - y", "y^2"]);
        let b = i.groebner_basis(TermOrder::Lex, &ctx).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(format!("{}", b[0]), "x - y");
        assert_eq!(format!("{}", b[1]), "y^2");
        // hand division: x^2 - 1 = (x+1)(x-1)
        let r1 = VarRing::new(vec!["x"]).unwrap();
        let i = ideal(&r1, &["x^2 - 1", "x - 1"]);
        let b = i.groebner_basis(TermOrder::Lex, &ctx).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(format!("{}", b[0]), "x - 1");
        // zero ideal: empty basis
        let z = Ideal::zero(&r);
        assert!(z.groebner_basis(TermOrder::Lex, &ctx).unwrap().is_empty());
    }

    #[test]
    fn normal_form_membership() {
        let ctx = ctx();
        let r = VarRing::new(vec!["x", "y"]).unwrap();
        let i = ideal(&r, &["x - y", "y^2"]);
        // x^2 = (x+y)(x-y) + y^2
        let p = parse_poly("x^2", &r).unwrap();
        assert!(i.normal_form(&p, TermOrder::Lex, &ctx).unwrap().is_zero());
        let m = ideal(&r, &["x", "y"]);
        let one = parse_poly("1", &r).unwrap();
        assert_eq!(m.normal_form(&one, TermOrder::Lex, &ctx).unwrap(), one);
        let z = Ideal::zero(&r);
        assert_eq!(z.normal_form(&p, TermOrder::Lex, &ctx).unwrap(), p);
        // every generator reduces to zero against its own basis
        for g in i.gens() {
            assert!(i.contains(g, &ctx).unwrap());
        }
    }

    #[test]
    fn quotient_examples() {
        let ctx = ctx();
        let r = VarRing::new(vec!["x", "y"]).unwrap();
        let i = ideal(&r, &["x^2", "x*y"]);
        let j = ideal(&r, &["x"]);
        let q = ideal_quotient(&i, &j, &ctx).unwrap();
        assert!(q.equals(&ideal(&r, &["x", "y"]), &ctx).unwrap());
        // (I : <1>) = I
        let one = Ideal::unit(&r);
        assert!(ideal_quotient(&i, &one, &ctx).unwrap().equals(&i, &ctx).unwrap());
        // (<x> : <y>) = <x>
        let q = ideal_quotient(&ideal(&r, &["x"]), &ideal(&r, &["y"]), &ctx).unwrap();
        assert!(q.equals(&ideal(&r, &["x"]), &ctx).unwrap());
    }

    #[test]
    fn saturation_examples() {
        let ctx = ctx();
        let r = VarRing::new(vec!["x", "y"]).unwrap();
        // one quotient step gives <x, y>, a second gives the unit ideal:
        // y^2 lies in I, so the whole line V(y) is removed
        let i = ideal(&r, &["x*y", "y^2"]);
        let j = ideal(&r, &["y"]);
        let q1 = ideal_quotient(&i, &j, &ctx).unwrap();
        assert!(q1.equals(&ideal(&r, &["x", "y"]), &ctx).unwrap());
        let s = saturate(&i, &j, &ctx).unwrap();
        assert!(s.is_unit_ideal(&ctx).unwrap());
        // polar curve of the umbrella family
        let r3 = VarRing::new(vec!["t", "x", "y"]).unwrap();
        let s = saturate(
            &ideal(&r3, &["x*(3*x+2*t)", "y"]),
            &ideal(&r3, &["x^2", "t*x", "y"]),
            &ctx,
        )
        .unwrap();
        assert!(s.equals(&ideal(&r3, &["3*x + 2*t", "y"]), &ctx).unwrap());
        // saturating by the unit ideal removes nothing: V(<1>) is empty
        let s = saturate(&ideal(&r, &["x"]), &Ideal::unit(&r), &ctx).unwrap();
        assert!(s.equals(&ideal(&r, &["x"]), &ctx).unwrap());
        // idempotence
        let a = ideal(&r, &["x^2*y", "x*y^2"]);
        let b = ideal(&r, &["x"]);
        let s1 = saturate(&a, &b, &ctx).unwrap();
        let s2 = saturate(&s1, &b, &ctx).unwrap();
        assert!(s1.equals(&s2, &ctx).unwrap());
    }

    #[test]
    fn elimination_examples() {
        let ctx = ctx();
        let r = VarRing::new(vec!["u", "X", "Y"]).unwrap();
        let i = ideal(&r, &["X - u^2", "Y - u^3"]);
        let e = eliminate(&i, &[0], &ctx).unwrap();
        let rxy = e.ring().clone();
        assert_eq!(rxy.vars(), &["X".to_string(), "Y".to_string()]);
        let expect = Ideal::new(&rxy, vec![parse_poly("Y^2 - X^3", &rxy).unwrap()]);
        assert!(e.equals(&expect, &ctx).unwrap());
        // graph of identity projects onto everything
        let r2 = VarRing::new(vec!["u", "X"]).unwrap();
        let e = eliminate(&ideal(&r2, &["X - u"]), &[0], &ctx).unwrap();
        assert!(e.is_zero_ideal());
        let e = eliminate(&ideal(&r2, &["u", "X - u"]), &[0], &ctx).unwrap();
        let rx = e.ring().clone();
        assert!(e.equals(&Ideal::new(&rx, vec![parse_poly("X", &rx).unwrap()]), &ctx).unwrap());
    }

    #[test]
    fn colength_examples() {
        let ctx = ctx();
        let r = VarRing::new(vec!["x", "y"]).unwrap();
        assert_eq!(
            colength_global(&ideal(&r, &["x^2", "y^3"]), &ctx).unwrap(),
            Colength::Finite(6)
        );
        assert_eq!(
            colength_global(&ideal(&r, &["3*x^2", "2*y"]), &ctx).unwrap(),
            Colength::Finite(2)
        );
        let r1 = VarRing::new(vec!["x"]).unwrap();
        assert_eq!(
            colength_global(&ideal(&r1, &["x - 1"]), &ctx).unwrap(),
            Colength::Finite(1)
        );
        assert_eq!(
            colength_global(&Ideal::zero(&r), &ctx).unwrap(),
            Colength::Infinite
        );
    }

    #[test]
    fn colength_is_order_independent() {
        let ctx = ctx();
        let r = VarRing::new(vec!["x", "y"]).unwrap();
        for gens in [
            vec!["x^2 - y", "y^2"],
            vec!["x^3", "x*y", "y^2 - x"],
            vec!["x + y", "y^3 - 2"],
        ] {
            let i = ideal(&r, &gens);
            let a = colength_global_under(&i, TermOrder::DegRevLex, &ctx).unwrap();
            let b = colength_global_under(&i, TermOrder::Lex, &ctx).unwrap();
            let c = colength_global_under(&i, TermOrder::Elim(1), &ctx).unwrap();
            assert_eq!(a, b);
            assert_eq!(a, c);
        }
    }

    #[test]
    fn local_colength_examples() {
        let ctx = ctx();
        let r = VarRing::new(vec!["x", "y"]).unwrap();
        // component at x = 1 is invisible locally
        let lc = local_colength_origin(&ideal(&r, &["x*(x-1)", "y"]), &ctx).unwrap();
        assert_eq!(lc.value, Colength::Finite(1));
        assert!(lc.stabilized_at.is_some());
        let r3 = VarRing::new(vec!["t", "x", "y"]).unwrap();
        let lc = local_colength_origin(&ideal(&r3, &["3*x + 2*t", "y", "t"]), &ctx).unwrap();
        assert_eq!(lc.value, Colength::Finite(1));
        // unit ideal: empty scheme
        let lc = local_colength_origin(&Ideal::unit(&r), &ctx).unwrap();
        assert_eq!(lc.value, Colength::Finite(0));
        // positive-dimensional at the origin: infinity flag
        let lc = local_colength_origin(&ideal(&r, &["y^2 - x^3"]), &ctx).unwrap();
        assert_eq!(lc.value, Colength::Infinite);
        assert!(lc.stabilized_at.is_none());
    }

    #[test]
    fn local_le_global() {
        let ctx = ctx();
        let r = VarRing::new(vec!["x", "y"]).unwrap();
        for gens in [
            vec!["x*(x-1)", "y"],
            vec!["x^2", "y^2"],
            vec!["x^2 - x", "y - x"],
        ] {
            let i = ideal(&r, &gens);
            let g = colength_global(&i, &ctx).unwrap().finite().unwrap();
            let l = local_colength_origin(&i, &ctx)
                .unwrap()
                .value
                .finite()
                .unwrap();
            assert!(l <= g, "{gens:?}: local {l} > global {g}");
        }
    }

    #[test]
    fn local_dim_examples() {
        let ctx = ctx();
        let r = VarRing::new(vec!["x", "y"]).unwrap();
        assert_eq!(local_dim_origin(&ideal(&r, &["y^2 - x^3"]), &ctx).unwrap(), 1);
        assert_eq!(local_dim_origin(&ideal(&r, &["x", "y"]), &ctx).unwrap(), 0);
        assert_eq!(local_dim_origin(&ideal(&r, &["x - 1"]), &ctx).unwrap(), -1);
        assert_eq!(local_dim_origin(&Ideal::zero(&r), &ctx).unwrap(), 2);
    }

    #[test]
    fn distinct_root_examples() {
        let ctx = ctx();
        let r = VarRing::new(vec!["u"]).unwrap();
        assert_eq!(distinct_root_count(&ideal(&r, &["u^2"]), &ctx).unwrap(), 1);
        assert_eq!(distinct_root_count(&ideal(&r, &["u^2 - 1"]), &ctx).unwrap(), 2);
        assert_eq!(distinct_root_count(&ideal(&r, &["u^3 - u"]), &ctx).unwrap(), 3);
        assert!(matches!(
            distinct_root_count(&Ideal::zero(&r), &ctx),
            Err(Error::NotZeroDimensional)
        ));
        // multivariate: unit circle meets a line in two rational points
        let r2 = VarRing::new(vec!["x", "y"]).unwrap();
        let i = ideal(&r2, &["x^2 + y^2 - 1", "y"]);
        assert_eq!(distinct_root_count(&i, &ctx).unwrap(), 2);
    }

    #[test]
    fn rational_point_extraction() {
        let ctx = ctx();
        let r = VarRing::new(vec!["x", "y"]).unwrap();
        let i = ideal(&r, &["x^2 - 1", "y - x"]);
        let mut pts = rational_points(&i, &ctx).unwrap();
        pts.sort_by(|a, b| format!("{a:?}").cmp(&format!("{b:?}")));
        assert_eq!(pts.len(), 2);
        assert!(pts.contains(&vec![q_int(1), q_int(1)]));
        assert!(pts.contains(&vec![q_int(-1), q_int(-1)]));
        // irrational points are not reported
        let i = ideal(&r, &["x^2 - 2", "y"]);
        assert!(rational_points(&i, &ctx).unwrap().is_empty());
    }

    #[test]
    fn intersection_basic() {
        let ctx = ctx();
        let r = VarRing::new(vec!["x", "y"]).unwrap();
        let a = ideal(&r, &["x"]);
        let b = ideal(&r, &["y"]);
        let m = intersect(&a, &b, &ctx).unwrap();
        assert!(m.equals(&ideal(&r, &["x*y"]), &ctx).unwrap());
    }

    #[test]
    fn truncated_buchberger_interaction_terms() {
        // yz lies in <xy + z> + m^3 and the truncated basis must expose it
        let ctx = ctx();
        let r = VarRing::new(vec!["x", "y", "z"]).unwrap();
        let i = ideal(&r, &["x*y + z"]);
        let c3 = truncated_colength(&i, 3, &ctx).unwrap();
        // standard monomials of degree < 3 avoiding z, xy, yz, xz(=x*(xy+z) tail)…
        // cross-check against an honest global computation with the cube of
        // the maximal ideal appended
        let mut gens: Vec<Poly> = i.gens().to_vec();
        for a in 0..=3u32 {
            for b in 0..=3u32 {
                for c in 0..=3u32 {
                    if a + b + c == 3 {
                        gens.push(Poly::monomial(&r, vec![a, b, c], q_int(1)));
                    }
                }
            }
        }
        let full = Ideal::new(&r, gens);
        let expect = colength_global(&full, &ctx).unwrap().finite().unwrap();
        assert_eq!(c3, expect);
    }
}
