//! Parameterized hypersurfaces: image equations by elimination, fiber
//! counting, multiple-point loci via divided differences, and the
//! multiple-point multiplicities of the comparison complex realized
//! through its constructible function of preimage counts.
//!
//! A parameterization may have several sheets (a finite disjoint union of
//! affine source germs mapping into the same target), which is how
//! normalizations of reducible hypersurfaces are represented. Variables
//! are identified across source and target by name, so a one-parameter
//! unfolding shares its parameter `t` between the two rings.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::ctx::Ctx;
use crate::error::{Error, Result};
use crate::groebner::{
    distinct_root_count, eliminate, local_colength_origin, rational_points, saturate, Ideal,
};
use crate::lecycles::{is_ipa_deformation, polar_number, CoordTuple};
use crate::poly::{LinearForm, Poly, Q, VarRing};

/// Polynomial map germ from affine source sheets into a target one
/// dimension up.
#[derive(Debug, Clone)]
pub struct Parameterization {
    source_ring: Arc<VarRing>,
    target_ring: Arc<VarRing>,
    sheets: Vec<Vec<Poly>>,
}

impl Parameterization {
    pub fn new(
        source_ring: &Arc<VarRing>,
        target_ring: &Arc<VarRing>,
        sheets: Vec<Vec<Poly>>,
    ) -> Result<Parameterization> {
        if sheets.is_empty() {
            return Err(Error::Precondition("parameterization needs a sheet".into()));
        }
        if target_ring.nvars() != source_ring.nvars() + 1 {
            return Err(Error::Precondition(format!(
                "target must have one more variable than the source ({} vs {})",
                target_ring.nvars(),
                source_ring.nvars()
            )));
        }
        for sheet in &sheets {
            if sheet.len() != target_ring.nvars() {
                return Err(Error::Precondition(format!(
                    "each sheet needs {} components",
                    target_ring.nvars()
                )));
            }
        }
        Ok(Parameterization {
            source_ring: source_ring.clone(),
            target_ring: target_ring.clone(),
            sheets,
        })
    }

    pub fn single(
        source_ring: &Arc<VarRing>,
        target_ring: &Arc<VarRing>,
        components: Vec<Poly>,
    ) -> Result<Parameterization> {
        Parameterization::new(source_ring, target_ring, vec![components])
    }

    pub fn source_ring(&self) -> &Arc<VarRing> {
        &self.source_ring
    }

    pub fn target_ring(&self) -> &Arc<VarRing> {
        &self.target_ring
    }

    pub fn sheets(&self) -> &[Vec<Poly>] {
        &self.sheets
    }

    /// Combined ring of the graph of one sheet: source variables first,
    /// then the target variables that do not share a source name.
    fn graph_ring(&self) -> (Arc<VarRing>, Vec<usize>) {
        let mut names: Vec<String> = self.source_ring.vars().to_vec();
        for v in self.target_ring.vars() {
            if !names.contains(v) {
                names.push(v.clone());
            }
        }
        let ring = VarRing::new(names).unwrap();
        let source_only: Vec<usize> = self
            .source_ring
            .vars()
            .iter()
            .enumerate()
            .filter(|(_, v)| self.target_ring.index_of(v).is_none())
            .map(|(i, _)| i)
            .collect();
        (ring, source_only)
    }

    fn graph_ideal(&self, sheet: usize) -> Result<Ideal> {
        let (ring, _) = self.graph_ring();
        let mut gens = Vec::new();
        for (j, tv) in self.target_ring.vars().iter().enumerate() {
            let x = Poly::var(&ring, ring.index_of(tv).unwrap());
            let c = self.sheets[sheet][j].map_to_ring(&ring)?;
            gens.push(x.sub(&c));
        }
        Ok(Ideal::new(&ring, gens))
    }

    /// Image equation of one sheet (reduced, principal).
    pub fn sheet_image_equation(&self, sheet: usize, ctx: &Ctx) -> Result<Poly> {
        let (_, source_only) = self.graph_ring();
        let graph = self.graph_ideal(sheet)?;
        let img = eliminate(&graph, &source_only, ctx)?;
        let img_target: Vec<Poly> = img
            .gens()
            .iter()
            .map(|g| g.map_to_ring(&self.target_ring))
            .collect::<Result<_>>()?;
        match img_target.len() {
            0 => Err(Error::NotPrincipal(
                "image closure is the whole target (zero elimination ideal)".into(),
            )),
            1 => Ok(img_target.into_iter().next().unwrap().primitive()),
            n => Err(Error::NotPrincipal(format!(
                "elimination ideal has {n} generators"
            ))),
        }
    }

    /// Reduced defining equation of the image: the product of the distinct
    /// sheet image equations, sign- and content-normalized. Sheet
    /// equations are irreducible (elimination of a prime graph ideal), so
    /// squarefree-ness reduces to deduplication of proportional factors.
    pub fn image_equation(&self, ctx: &Ctx) -> Result<Poly> {
        let mut factors: Vec<Poly> = Vec::new();
        for s in 0..self.sheets.len() {
            let f = self.sheet_image_equation(s, ctx)?;
            if !factors.iter().any(|g| g == &f) {
                factors.push(f);
            }
        }
        let mut out = Poly::one(&self.target_ring);
        for f in &factors {
            out = out.mul(f);
        }
        Ok(out.primitive())
    }

    /// Ideal of the fiber of one sheet over a rational target point.
    pub fn fiber_ideal(&self, sheet: usize, point: &[Q]) -> Result<Ideal> {
        if point.len() != self.target_ring.nvars() {
            return Err(Error::Precondition("point/target size mismatch".into()));
        }
        let gens = self.sheets[sheet]
            .iter()
            .zip(point)
            .map(|(c, p)| c.sub(&Poly::constant(&self.source_ring, p.clone())))
            .collect();
        Ok(Ideal::new(&self.source_ring, gens))
    }

    /// Number of distinct preimages of a rational target point, over the
    /// complex numbers, summed across sheets.
    pub fn fiber_count(&self, point: &[Q], ctx: &Ctx) -> Result<u64> {
        let mut total = 0;
        for s in 0..self.sheets.len() {
            let fiber = self.fiber_ideal(s, point)?;
            total += distinct_root_count(&fiber, ctx)?;
        }
        Ok(total)
    }

    /// Preimage count minus one.
    pub fn m_value(&self, point: &[Q], ctx: &Ctx) -> Result<u64> {
        let c = self.fiber_count(point, ctx)?;
        if c == 0 {
            return Err(Error::Precondition(
                "point has empty fiber (not on the image)".into(),
            ));
        }
        Ok(c - 1)
    }

    /// Evaluate one sheet at a rational source point.
    pub fn eval_sheet(&self, sheet: usize, point: &[Q]) -> Result<Vec<Q>> {
        self.sheets[sheet]
            .iter()
            .map(|c| c.evaluate(point))
            .collect()
    }

    /// Generic one-to-one check: the image of a random rational source
    /// point on each sheet must have exactly one preimage in total.
    pub fn generic_one_to_one(&self, ctx: &Ctx) -> Result<bool> {
        let n = self.source_ring.nvars();
        for s in 0..self.sheets.len() {
            let mut ok = false;
            for attempt in 0..ctx.caps.retries {
                let mut rng = ctx.rng(&format!("one-to-one:{s}:{attempt}"));
                let height = 3 + 2 * attempt as u64;
                let point: Vec<Q> = (0..n)
                    .map(|_| Q::from_integer(BigInt::from(rng.small_nonzero(height))))
                    .collect();
                let image = self.eval_sheet(s, &point)?;
                match self.fiber_count(&image, ctx) {
                    Ok(1) => {
                        ok = true;
                        break;
                    }
                    Ok(_) => return Ok(false),
                    Err(Error::NotZeroDimensional) => continue,
                    Err(e) => return Err(e),
                }
            }
            if !ok {
                return Err(Error::RetryExhausted(
                    "no usable sample point for the one-to-one check".into(),
                ));
            }
        }
        Ok(true)
    }
}

/// One-parameter unfolding: the first source variable is the parameter and
/// the first component of every sheet is that parameter, literally.
#[derive(Debug, Clone)]
pub struct Unfolding {
    base: Parameterization,
}

impl Unfolding {
    pub fn new(base: Parameterization) -> Result<Unfolding> {
        if !Unfolding::shape_ok(&base) {
            return Err(Error::ShapeNotSupported(
                "first component of every sheet must equal the unfolding parameter".into(),
            ));
        }
        Ok(Unfolding { base })
    }

    pub fn shape_ok(p: &Parameterization) -> bool {
        let t = Poly::var(p.source_ring(), 0);
        p.sheets().iter().all(|sheet| sheet[0] == t)
            && p.source_ring().vars()[0] == p.target_ring().vars()[0]
    }

    pub fn base(&self) -> &Parameterization {
        &self.base
    }

    pub fn parameter_name(&self) -> &str {
        &self.base.source_ring().vars()[0]
    }

    /// The slice map at a rational parameter value, as a parameterization
    /// between the rings without the parameter.
    pub fn slice(&self, t0: &Q) -> Result<Parameterization> {
        let src = self.base.source_ring();
        let tgt = self.base.target_ring();
        let sub_src = src.subring_without(&[0]);
        let sub_tgt = tgt.subring_without(&[0]);
        let value = Poly::constant(src, t0.clone());
        let sheets = self
            .base
            .sheets()
            .iter()
            .map(|sheet| {
                sheet[1..]
                    .iter()
                    .map(|c| c.substitute(0, &value).map_to_ring(&sub_src))
                    .collect::<Result<Vec<Poly>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Parameterization::new(&sub_src, &sub_tgt, sheets)
    }

    /// The central slice (parameter = 0).
    pub fn central(&self) -> Result<Parameterization> {
        self.slice(&Q::zero())
    }
}

// ---------------------------------------------------------------------------
// Divided differences
// ---------------------------------------------------------------------------

fn primed_name(ring: &Arc<VarRing>, base: &str, suffix: &str) -> String {
    let mut name = format!("{base}{suffix}");
    while ring.index_of(&name).is_some() {
        name.push('p');
    }
    name
}

/// Ring of the doubled last source variable: source vars plus y'.
pub fn doubled_ring(source: &Arc<VarRing>) -> (Arc<VarRing>, usize) {
    let y = source.vars().last().unwrap().clone();
    let yp = primed_name(source, &y, "p");
    let mut names = source.vars().to_vec();
    names.push(yp);
    let ring = VarRing::new(names).unwrap();
    let idx = ring.nvars() - 1;
    (ring, idx)
}

/// Ring of the tripled last source variable: source vars plus y', y''.
pub fn tripled_ring(source: &Arc<VarRing>) -> (Arc<VarRing>, usize, usize) {
    let y = source.vars().last().unwrap().clone();
    let yp = primed_name(source, &y, "p");
    let mut names = source.vars().to_vec();
    names.push(yp);
    let tmp = VarRing::new(names.clone()).unwrap();
    let ypp = primed_name(&tmp, &y, "pp");
    names.push(ypp);
    let ring = VarRing::new(names).unwrap();
    (ring.clone(), ring.nvars() - 2, ring.nvars() - 1)
}

/// First divided difference of `c` in the variable `var`, replacing it by
/// `var2`: (c(y) - c(y'))/(y - y'), computed term by term.
pub fn divided_difference(c: &Poly, ring: &Arc<VarRing>, var: usize, var2: usize) -> Poly {
    let mut out = Poly::zero(ring);
    for (e, coeff) in c.terms() {
        let k = e[var];
        if k == 0 {
            continue;
        }
        let base = e.clone();
        for j in 0..k {
            let mut ne = base.clone();
            ne[var] = j;
            ne[var2] += k - 1 - j;
            out.add_term(ne, coeff.clone());
        }
    }
    out
}

fn corank_one_shape(p: &Parameterization) -> Result<()> {
    let n = p.source_ring().nvars();
    let m = p.target_ring().nvars();
    for sheet in p.sheets() {
        // all components except the last two must be the leading source
        // variables, leaving a single folded direction (the last one)
        if m < 2 || m - 2 != n - 1 {
            return Err(Error::ShapeNotSupported(format!(
                "need one folded variable: source {n} vars, target {m}"
            )));
        }
        for (i, c) in sheet[..m - 2].iter().enumerate() {
            if *c != Poly::var(p.source_ring(), i) {
                return Err(Error::ShapeNotSupported(
                    "leading components must be the identity on the leading source variables"
                        .into(),
                ));
            }
        }
    }
    Ok(())
}

/// Divided-difference ideal of a corank-one sheet in the doubled ring: its
/// vanishing locus is the source double-point pair space (the diagonal
/// already divided out).
pub fn double_point_source_ideal(p: &Parameterization, sheet: usize) -> Result<Ideal> {
    corank_one_shape(p)?;
    let (ring, yp) = doubled_ring(p.source_ring());
    let y = p.source_ring().nvars() - 1;
    let mut gens = Vec::new();
    for c in &p.sheets()[sheet] {
        let cc = c.map_to_ring(&ring)?;
        gens.push(divided_difference(&cc, &ring, y, yp));
    }
    Ok(Ideal::new(&ring, gens))
}

/// Second-order divided-difference ideal of a corank-one sheet in the
/// tripled ring: first differences in (y, y') plus their differences in
/// (y', y''). Its colength counts ordered source triples with a common
/// image.
pub fn triple_point_source_ideal(p: &Parameterization, sheet: usize) -> Result<Ideal> {
    corank_one_shape(p)?;
    let (ring, yp, ypp) = tripled_ring(p.source_ring());
    let y = p.source_ring().nvars() - 1;
    let mut gens = Vec::new();
    for c in &p.sheets()[sheet] {
        let cc = c.map_to_ring(&ring)?;
        let d1 = divided_difference(&cc, &ring, y, yp);
        let d2 = divided_difference(&d1, &ring, yp, ypp);
        gens.push(d1);
        gens.push(d2);
    }
    Ok(Ideal::new(&ring, gens))
}

/// Image of the double-point locus of one sheet, as an ideal of the
/// target: eliminate the source (and primed) variables from the graph
/// ideal joined with the divided differences.
pub fn double_image_ideal(p: &Parameterization, sheet: usize, ctx: &Ctx) -> Result<Ideal> {
    let dd = double_point_source_ideal(p, sheet)?;
    let dd_ring = dd.ring().clone();
    // combined ring: doubled source plus the target-only variables
    let mut names = dd_ring.vars().to_vec();
    for v in p.target_ring().vars() {
        if !names.contains(v) {
            names.push(v.clone());
        }
    }
    let ring = VarRing::new(names)?;
    let mut gens: Vec<Poly> = Vec::new();
    for g in dd.gens() {
        gens.push(g.map_to_ring(&ring)?);
    }
    for (j, tv) in p.target_ring().vars().iter().enumerate() {
        let x = Poly::var(&ring, ring.index_of(tv).unwrap());
        let c = p.sheets()[sheet][j].map_to_ring(&ring)?;
        gens.push(x.sub(&c));
    }
    let ideal = Ideal::new(&ring, gens);
    let drop: Vec<usize> = (0..ring.nvars())
        .filter(|&i| p.target_ring().index_of(&ring.vars()[i]).is_none())
        .collect();
    let img = eliminate(&ideal, &drop, ctx)?;
    let gens: Vec<Poly> = img
        .gens()
        .iter()
        .map(|g| g.map_to_ring(p.target_ring()))
        .collect::<Result<_>>()?;
    Ok(Ideal::new(p.target_ring(), gens))
}

/// Non-immersive locus of a corank-one sheet in the source: vanishing of
/// the folded-direction partials of all components.
pub fn fold_critical_source_ideal(p: &Parameterization, sheet: usize) -> Result<Ideal> {
    corank_one_shape(p)?;
    let y = p.source_ring().nvars() - 1;
    let gens = p.sheets()[sheet].iter().map(|c| c.diff_idx(y)).collect();
    Ok(Ideal::new(p.source_ring(), gens))
}

// ---------------------------------------------------------------------------
// Multiple-point components and their generic preimage counts
// ---------------------------------------------------------------------------

/// One component of the image multiple-point set, with its generic
/// preimage defect sampled at rational points.
#[derive(Debug, Clone)]
pub struct DComponent {
    pub ideal: Ideal,
    /// generic preimage count minus one along this component
    pub m_generic: u64,
}

/// Candidate component ideals of the image multiple-point set: per-sheet
/// double-point images plus pairwise intersections of distinct sheet
/// images. Duplicates are removed and containments split by saturation.
pub fn d_component_candidates(p: &Parameterization, ctx: &Ctx) -> Result<Vec<Ideal>> {
    let mut cands: Vec<Ideal> = Vec::new();
    if corank_one_shape(p).is_ok() {
        for s in 0..p.sheets().len() {
            let d = double_image_ideal(p, s, ctx)?;
            if !d.is_unit_ideal(ctx)? {
                cands.push(d);
            }
        }
    }
    let mut sheet_eqs: Vec<Poly> = Vec::new();
    for s in 0..p.sheets().len() {
        sheet_eqs.push(p.sheet_image_equation(s, ctx)?);
    }
    for i in 0..p.sheets().len() {
        for j in i + 1..p.sheets().len() {
            if sheet_eqs[i] == sheet_eqs[j] {
                continue;
            }
            let pair = Ideal::new(
                p.target_ring(),
                vec![sheet_eqs[i].clone(), sheet_eqs[j].clone()],
            );
            cands.push(pair);
        }
    }
    // dedupe equal ideals
    let mut uniq: Vec<Ideal> = Vec::new();
    for c in cands {
        let mut dup = false;
        for u in &uniq {
            if u.equals(&c, ctx)? {
                dup = true;
                break;
            }
        }
        if !dup {
            uniq.push(c);
        }
    }
    // split strict containments by saturation
    let mut changed = true;
    let mut guard = 0;
    while changed && guard < 16 {
        changed = false;
        guard += 1;
        'split: for i in 0..uniq.len() {
            for j in 0..uniq.len() {
                if i == j {
                    continue;
                }
                // ideal containment uniq[j] ⊆ uniq[i] means V(i) ⊆ V(j):
                // carve the part of V(j) away from V(i)
                if uniq[i].contains_ideal(&uniq[j], ctx)?
                    && !uniq[j].contains_ideal(&uniq[i], ctx)?
                {
                    let rest = saturate(&uniq[j], &uniq[i], ctx)?;
                    if !rest.equals(&uniq[j], ctx)? {
                        if rest.is_unit_ideal(ctx)? {
                            uniq.remove(j);
                        } else {
                            uniq[j] = rest;
                        }
                        changed = true;
                        break 'split;
                    }
                }
            }
        }
    }
    Ok(uniq)
}

/// Find rational points on the component away from the origin, sample the
/// preimage defect there twice with agreement, and return the generic m.
/// Hyperplane cuts are added one at a time until the slice becomes finite
/// (components of families are surfaces, of slices curves).
pub fn sample_component_m(p: &Parameterization, comp: &Ideal, ctx: &Ctx) -> Result<u64> {
    let tgt = p.target_ring();
    let n = tgt.nvars();
    let mut found: Vec<u64> = Vec::new();
    for attempt in 0..ctx.caps.retries * 4 {
        let mut rng = ctx.rng(&format!("sample-m:{attempt}"));
        let height = 2 + (attempt / 4) as u64;
        let mut cut = comp.clone();
        let mut used: Vec<usize> = Vec::new();
        let mut pts = None;
        for _ in 0..n {
            let v = loop {
                let v = rng.below(n as u64) as usize;
                if !used.contains(&v) {
                    break v;
                }
            };
            used.push(v);
            // constants are small perfect powers (starting at +-1), so that
            // monomial-curve components keep rational sample points
            let c = if attempt < 2 {
                Q::from_integer(BigInt::from(if attempt == 0 { 1 } else { -1 }))
            } else {
                let base = rng.small_nonzero(height);
                let exp = 1 + rng.below(4) as u32;
                Q::from_integer(BigInt::from(base).pow(exp))
            };
            cut = cut.plus(&[Poly::var(tgt, v).sub(&Poly::constant(tgt, c))]);
            match rational_points(&cut, ctx) {
                Ok(found_pts) => {
                    pts = Some(found_pts);
                    break;
                }
                Err(Error::NotZeroDimensional) => continue,
                Err(Error::SamplingFailure(_)) => break,
                Err(e) => return Err(e),
            }
        }
        let pts = match pts {
            Some(pts) => pts,
            None => continue,
        };
        for pt in pts {
            if pt.iter().all(|x| x.is_zero()) {
                continue;
            }
            let m = match p.m_value(&pt, ctx) {
                Ok(m) => m,
                Err(Error::Precondition(_)) => continue,
                Err(e) => return Err(e),
            };
            found.push(m);
            break;
        }
        if found.len() >= 2 {
            if found[0] == found[1] {
                return Ok(found[0]);
            }
            return Err(Error::SamplingFailure(format!(
                "preimage defect not constant along component: {} vs {}",
                found[0], found[1]
            )));
        }
    }
    Err(Error::SamplingFailure(
        "no rational sample point found on multiple-point component".into(),
    ))
}

/// Components of the image multiple-point set with sampled generic m.
pub fn d_components(p: &Parameterization, ctx: &Ctx) -> Result<Vec<DComponent>> {
    let mut out = Vec::new();
    for ideal in d_component_candidates(p, ctx)? {
        let m_generic = sample_component_m(p, &ideal, ctx)?;
        out.push(DComponent { ideal, m_generic });
    }
    Ok(out)
}

/// Multiple-point multiplicities of the comparison complex of the image.
#[derive(Debug, Clone)]
pub struct NdotMultiplicities {
    pub lambda0: u128,
    /// absent for plane curves, whose multiple-point set is discrete
    pub lambda1: Option<u128>,
    pub m_origin: u64,
    /// (component ideal, generic m, local intersection with the slicing form)
    pub components: Vec<(String, u64, u128)>,
}

/// Multiple-point multiplicities of the image of `p` at the origin. For
/// plane curves the zero-dimensional multiplicity is the preimage defect
/// itself; for surfaces in 3-space the one-dimensional multiplicity
/// aggregates the multiple-point components cut by the first slicing
/// form, and the zero-dimensional one follows from the Euler relation of
/// the constructible function.
pub fn ndot_multiplicities(
    p: &Parameterization,
    slicing: &CoordTuple,
    ctx: &Ctx,
) -> Result<NdotMultiplicities> {
    let tgt_dim = p.target_ring().nvars();
    let origin = vec![Q::zero(); tgt_dim];
    let m_origin = p.m_value(&origin, ctx)?;
    match tgt_dim {
        2 => Ok(NdotMultiplicities {
            lambda0: m_origin as u128,
            lambda1: None,
            m_origin,
            components: vec![],
        }),
        3 => {
            let comps = d_components(p, ctx)?;
            let z0 = slicing.form_poly(0).map_to_ring(p.target_ring())?;
            let mut lambda1: u128 = 0;
            let mut reports = Vec::new();
            for c in &comps {
                let cut = c.ideal.plus(&[z0.clone()]);
                let mult = local_colength_origin(&cut, ctx)?
                    .expect_finite("multiple-point component cut by slicing form")?;
                lambda1 += c.m_generic as u128 * mult;
                reports.push((format!("{:?}", c.ideal), c.m_generic, mult));
            }
            let lambda0 = lambda1 as i128 - m_origin as i128;
            if lambda0 < 0 {
                return Err(Error::NegativeMultiplicity {
                    name: "lambda0 of the comparison complex".into(),
                    lhs: lambda1 as i128,
                    rhs: m_origin as i128,
                });
            }
            Ok(NdotMultiplicities {
                lambda0: lambda0 as u128,
                lambda1: Some(lambda1),
                m_origin,
                components: reports,
            })
        }
        d => Err(Error::ShapeNotSupported(format!(
            "multiple-point multiplicities implemented for target dimension 2 and 3, got {d}"
        ))),
    }
}

/// Draw seeded generic slicing tuples until the multiple-point cuts are
/// proper and two independent draws agree, and return the multiplicities
/// together with the last tuple used. The agreement requirement guards
/// against finite but non-generic cuts (the multiplicity only jumps up on
/// special forms, so two matching draws attain the generic value).
pub fn ndot_with_generic_slicing(
    p: &Parameterization,
    ctx: &Ctx,
    purpose: &str,
) -> Result<(NdotMultiplicities, CoordTuple)> {
    let tgt = p.target_ring();
    let n = tgt.nvars();
    let mut last_err = None;
    let mut prev: Option<(NdotMultiplicities, CoordTuple)> = None;
    for attempt in 0..ctx.caps.retries * 2 {
        let mut rng = ctx.rng(&format!("ndot:{purpose}:{attempt}"));
        let height = 2 + (attempt / 2) as u64;
        let mut forms: Vec<LinearForm> = Vec::new();
        while forms.len() < n {
            let coeffs: Vec<Q> = (0..n)
                .map(|_| Q::from_integer(BigInt::from(rng.small_nonzero(height))))
                .collect();
            forms.push(LinearForm { coeffs });
        }
        let coords = match CoordTuple::new(tgt, forms) {
            Ok(c) => c,
            Err(_) => continue,
        };
        match ndot_multiplicities(p, &coords, ctx) {
            Ok(nd) => {
                if let Some((prev_nd, _)) = &prev {
                    if prev_nd.lambda0 == nd.lambda0 && prev_nd.lambda1 == nd.lambda1 {
                        return Ok((nd, coords));
                    }
                }
                prev = Some((nd, coords));
            }
            Err(e @ Error::ImproperIntersection(_)) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap_or_else(|| {
        Error::RetryExhausted("slicing draws kept disagreeing on the multiplicities".into())
    }))
}

/// Zero-dimensional multiple-point multiplicity of the total space of an
/// unfolding with respect to its parameter: the shared value of the polar
/// intersection number. Requires isolated polar activity.
pub fn ndot_polar_from_unfolding(
    unf: &Unfolding,
    coords: &CoordTuple,
    ctx: &Ctx,
) -> Result<u128> {
    let f = unf.base().image_equation(ctx)?;
    let t_name = unf.parameter_name().to_string();
    let t_idx = f.ring().index_of(&t_name).ok_or_else(|| {
        Error::Precondition("unfolding parameter is not a target variable".into())
    })?;
    let first = coords.form_poly(0);
    if first != Poly::var(coords.ring(), t_idx) {
        return Err(Error::Precondition(
            "first coordinate form must be the unfolding parameter".into(),
        ));
    }
    let chk = is_ipa_deformation(&f, coords, ctx)?;
    if !chk.holds {
        return Err(Error::Precondition(
            "not an isolated-polar-activity deformation over the parameter".into(),
        ));
    }
    polar_number(&f, coords, 1, ctx)
}

/// Probabilistic squarefree check along a random rational line: the
/// restriction must have squarefree part of full degree.
pub fn squarefree_on_random_line(f: &Poly, ctx: &Ctx) -> Result<bool> {
    let ring = f.ring();
    let n = ring.nvars();
    for attempt in 0..ctx.caps.retries {
        let mut rng = ctx.rng(&format!("squarefree:{attempt}"));
        let base: Vec<Q> = (0..n)
            .map(|_| Q::from_integer(BigInt::from(rng.small(4))))
            .collect();
        let dir: Vec<Q> = (0..n)
            .map(|_| Q::from_integer(BigInt::from(rng.small_nonzero(4))))
            .collect();
        let s_ring = VarRing::new(vec!["s"])?;
        let s = Poly::var(&s_ring, 0);
        let mut subs: Vec<Poly> = Vec::new();
        for i in 0..n {
            subs.push(
                s.scale(&dir[i])
                    .add(&Poly::constant(&s_ring, base[i].clone())),
            );
        }
        let mut acc = Poly::zero(&s_ring);
        for (e, c) in f.terms() {
            let mut term = Poly::constant(&s_ring, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = term.mul(&subs[i].pow(k));
                }
            }
            acc = acc.add(&term);
        }
        let coeffs = crate::groebner::to_univariate(&acc);
        let deg = coeffs.len().saturating_sub(1);
        if deg < f.total_degree() as usize {
            continue; // degenerate direction, retry
        }
        return Ok(crate::groebner::squarefree_degree(&coeffs) == deg);
    }
    Err(Error::RetryExhausted(
        "no non-degenerate line for the squarefree check".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, q_int};

    fn ctx() -> Ctx {
        Ctx::new(31)
    }

    fn ring(names: &[&str]) -> Arc<VarRing> {
        VarRing::new(names.to_vec()).unwrap()
    }

    fn map(src: &[&str], tgt: &[&str], comps: &[&str]) -> Parameterization {
        let s = ring(src);
        let t = ring(tgt);
        let components = comps.iter().map(|c| parse_poly(c, &s).unwrap()).collect();
        Parameterization::single(&s, &t, components).unwrap()
    }

    fn three_planes(with_t: bool) -> Parameterization {
        let (src, tgt): (Arc<VarRing>, Arc<VarRing>) = if with_t {
            (ring(&["t", "a", "b"]), ring(&["t", "x", "y", "z"]))
        } else {
            (ring(&["a", "b"]), ring(&["x", "y", "z"]))
        };
        let p = |s: &str| parse_poly(s, &src).unwrap();
        let sheets = if with_t {
            vec![
                vec![p("t"), p("0"), p("a"), p("b")],
                vec![p("t"), p("a"), p("0"), p("b")],
                vec![p("t"), p("a"), p("b"), p("0")],
            ]
        } else {
            vec![
                vec![p("0"), p("a"), p("b")],
                vec![p("a"), p("0"), p("b")],
                vec![p("a"), p("b"), p("0")],
            ]
        };
        Parameterization::new(&src, &tgt, sheets).unwrap()
    }

    #[test]
    fn image_equation_examples() {
        let ctxv = ctx();
        // unfolding of the cusp: the umbrella surface
        let p = map(
            &["t", "u"],
            &["t", "x", "y"],
            &["t", "u^2 - t", "u*(u^2-t)"],
        );
        let f = p.image_equation(&ctxv).unwrap();
        let tgt = p.target_ring();
        let expect = parse_poly("y^2 - x^3 - t*x^2", tgt).unwrap().primitive();
        assert_eq!(f, expect);
        // plain cusp
        let p = map(&["u"], &["x", "y"], &["u^2", "u^3"]);
        let f = p.image_equation(&ctxv).unwrap();
        let expect = parse_poly("y^2 - x^3", p.target_ring()).unwrap().primitive();
        assert_eq!(f, expect);
        // graph map
        let p = map(&["u"], &["x", "y"], &["u", "u^2 - 3*u"]);
        let f = p.image_equation(&ctxv).unwrap();
        let expect = parse_poly("y - x^2 + 3*x", p.target_ring())
            .unwrap()
            .primitive();
        assert_eq!(f, expect);
        // three planes
        let p = three_planes(false);
        let f = p.image_equation(&ctxv).unwrap();
        let expect = parse_poly("x*y*z", p.target_ring()).unwrap().primitive();
        assert_eq!(f, expect);
        assert!(squarefree_on_random_line(&f, &ctxv).unwrap());
    }

    #[test]
    fn fiber_count_examples() {
        let ctxv = ctx();
        let cusp = map(&["u"], &["x", "y"], &["u^2", "u^3"]);
        assert_eq!(cusp.fiber_count(&[q_int(0), q_int(0)], &ctxv).unwrap(), 1);
        assert_eq!(cusp.m_value(&[q_int(0), q_int(0)], &ctxv).unwrap(), 0);
        let planes = three_planes(false);
        let origin = vec![q_int(0); 3];
        assert_eq!(planes.fiber_count(&origin, &ctxv).unwrap(), 3);
        assert_eq!(planes.m_value(&origin, &ctxv).unwrap(), 2);
        // generic point of a double line
        assert_eq!(
            planes
                .m_value(&[q_int(0), q_int(0), q_int(5)], &ctxv)
                .unwrap(),
            1
        );
        let node = map(&["u"], &["x", "y"], &["u^2 - 1", "u^3 - u"]);
        assert_eq!(node.fiber_count(&[q_int(0), q_int(0)], &ctxv).unwrap(), 2);
        assert_eq!(node.m_value(&[q_int(0), q_int(0)], &ctxv).unwrap(), 1);
    }

    #[test]
    fn one_to_one_checks() {
        let ctxv = ctx();
        assert!(map(&["u"], &["x", "y"], &["u^2", "u^3"])
            .generic_one_to_one(&ctxv)
            .unwrap());
        assert!(three_planes(false).generic_one_to_one(&ctxv).unwrap());
        // double cover of a parabola is not generically one-to-one
        let dbl = map(&["u"], &["x", "y"], &["u^2", "u^4"]);
        assert!(!dbl.generic_one_to_one(&ctxv).unwrap());
    }

    #[test]
    fn divided_difference_examples() {
        let ctxv = ctx();
        // family of nodal cubics
        let p = map(
            &["t", "u"],
            &["t", "x", "y"],
            &["t", "u^2 - t", "u*(u^2-t)"],
        );
        let dd = double_point_source_ideal(&p, 0).unwrap();
        let r = dd.ring().clone();
        let expect = Ideal::new(
            &r,
            vec![
                parse_poly("u + up", &r).unwrap(),
                parse_poly("u^2 + u*up + up^2 - t", &r).unwrap(),
            ],
        );
        assert!(dd.equals(&expect, &ctxv).unwrap());
        // cross-cap: pairs (y, -y) over x = 0
        let p = map(&["x", "y"], &["X", "Y", "Z"], &["x", "y^2", "x*y"]);
        let dd = double_point_source_ideal(&p, 0).unwrap();
        let r = dd.ring().clone();
        let expect = Ideal::new(
            &r,
            vec![
                parse_poly("y + yp", &r).unwrap(),
                parse_poly("x", &r).unwrap(),
            ],
        );
        assert!(dd.equals(&expect, &ctxv).unwrap());
        // injective graph map: unit ideal
        let p = map(&["u"], &["x", "y"], &["u", "u^3 + u"]);
        let dd = double_point_source_ideal(&p, 0).unwrap();
        assert!(dd.is_unit_ideal(&ctxv).unwrap());
    }

    #[test]
    fn double_image_examples() {
        let ctxv = ctx();
        // cross-cap double curve is the handle line
        let p = map(&["x", "y"], &["X", "Y", "Z"], &["x", "y^2", "x*y"]);
        let d = double_image_ideal(&p, 0, &ctxv).unwrap();
        let tgt = p.target_ring();
        let expect = Ideal::new(
            tgt,
            vec![parse_poly("X", tgt).unwrap(), parse_poly("Z", tgt).unwrap()],
        );
        assert!(d.equals(&expect, &ctxv).unwrap());
        // nodal family: double points land on the parameter axis
        let p = map(
            &["t", "u"],
            &["t", "x", "y"],
            &["t", "u^2 - t", "u*(u^2-t)"],
        );
        let d = double_image_ideal(&p, 0, &ctxv).unwrap();
        let tgt = p.target_ring();
        let expect = Ideal::new(
            tgt,
            vec![parse_poly("x", tgt).unwrap(), parse_poly("y", tgt).unwrap()],
        );
        assert!(d.equals(&expect, &ctxv).unwrap());
    }

    #[test]
    fn ndot_triple_point() {
        let ctxv = ctx();
        let planes = three_planes(false);
        let (nd, _) = ndot_with_generic_slicing(&planes, &ctxv, "xyz").unwrap();
        assert_eq!(nd.lambda1, Some(3));
        assert_eq!(nd.m_origin, 2);
        assert_eq!(nd.lambda0, 1);
    }

    #[test]
    fn ndot_cusp_curve() {
        let ctxv = ctx();
        let cusp = map(&["u"], &["x", "y"], &["u^2", "u^3"]);
        let (nd, _) = ndot_with_generic_slicing(&cusp, &ctxv, "cusp").unwrap();
        assert_eq!(nd.lambda0, 0);
        assert_eq!(nd.lambda1, None);
        assert_eq!(nd.m_origin, 0);
    }

    #[test]
    fn ndot_cross_cap() {
        let ctxv = ctx();
        let p = map(&["x", "y"], &["X", "Y", "Z"], &["x", "y^2", "x*y"]);
        let (nd, _) = ndot_with_generic_slicing(&p, &ctxv, "cap").unwrap();
        assert_eq!(nd.lambda1, Some(1));
        assert_eq!(nd.m_origin, 0);
        assert_eq!(nd.lambda0, 1);
    }

    #[test]
    fn polar_from_unfolding_examples() {
        let ctxv = ctx();
        // nodal degeneration of the cusp
        let p = map(
            &["t", "u"],
            &["t", "x", "y"],
            &["t", "u^2 - t", "u*(u^2-t)"],
        );
        let unf = Unfolding::new(p).unwrap();
        let tgt = unf.base().target_ring().clone();
        let coords = CoordTuple::identity(&tgt);
        assert_eq!(ndot_polar_from_unfolding(&unf, &coords, &ctxv).unwrap(), 1);
        // trivial unfolding of the cusp: empty polar
        let p = map(&["t", "u"], &["t", "x", "y"], &["t", "u^2", "u^3"]);
        let unf = Unfolding::new(p).unwrap();
        let tgt = unf.base().target_ring().clone();
        let coords = CoordTuple::identity(&tgt);
        assert_eq!(ndot_polar_from_unfolding(&unf, &coords, &ctxv).unwrap(), 0);
        // trivial unfolding of a smooth graph
        let p = map(&["t", "u"], &["t", "x", "y"], &["t", "u", "u^2"]);
        let unf = Unfolding::new(p).unwrap();
        let tgt = unf.base().target_ring().clone();
        let coords = CoordTuple::identity(&tgt);
        assert_eq!(ndot_polar_from_unfolding(&unf, &coords, &ctxv).unwrap(), 0);
    }

    #[test]
    fn unfolding_shape_checks() {
        let s = ring(&["t", "u"]);
        let t = ring(&["t", "x", "y"]);
        let p = |e: &str| parse_poly(e, &s).unwrap();
        let good =
            Parameterization::single(&s, &t, vec![p("t"), p("u^2-t"), p("u*(u^2-t)")]).unwrap();
        assert!(Unfolding::new(good).is_ok());
        let bad =
            Parameterization::single(&s, &t, vec![p("t + u"), p("u^2"), p("u^3")]).unwrap();
        assert!(Unfolding::new(bad).is_err());
    }

    #[test]
    fn slices_of_unfoldings() {
        let ctxv = ctx();
        let s = ring(&["t", "u"]);
        let t = ring(&["t", "x", "y"]);
        let p = |e: &str| parse_poly(e, &s).unwrap();
        let unf = Unfolding::new(
            Parameterization::single(&s, &t, vec![p("t"), p("u^2-t"), p("u*(u^2-t)")]).unwrap(),
        )
        .unwrap();
        let central = unf.central().unwrap();
        let f0 = central.image_equation(&ctxv).unwrap();
        let expect = parse_poly("y^2 - x^3", central.target_ring())
            .unwrap()
            .primitive();
        assert_eq!(f0, expect);
        // fiber of the slice at 1/4 over the node
        let slice = unf.slice(&crate::poly::q_ratio(1, 4)).unwrap();
        assert_eq!(slice.fiber_count(&[q_int(0), q_int(0)], &ctxv).unwrap(), 2);
    }
}
