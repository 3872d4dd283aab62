use leforge::ctx::Ctx;
use leforge::deform::*;
use leforge::lecycles::*;
use leforge::paramhyp::*;
use leforge::poly::*;
use std::sync::Arc;
use std::time::Instant;

fn main() {
    let ctx = Ctx::new(47);
    let src = VarRing::new(vec!["t", "a", "b"]).unwrap();
    let tg = VarRing::new(vec!["t", "x", "y", "z"]).unwrap();
    let p = |e: &str| parse_poly(e, &src).unwrap();
    let planes = Unfolding::new(Parameterization::new(&src, &tg, vec![
        vec![p("t"), p("0"), p("a"), p("b")],
        vec![p("t"), p("a"), p("0"), p("b")],
        vec![p("t"), p("a"), p("b"), p("0")],
    ]).unwrap()).unwrap();

    let t0 = Instant::now();
    let (entries, inv) = verify_surface_counts(&planes, &default_t0_candidates(), &ctx).unwrap();
    println!("xyz surface [{:?}] T={} C={} delta={} P_t={} chi={:?}",
        t0.elapsed(), inv.triple_points, inv.cross_caps, inv.delta, inv.polar_correction, inv.chi_link);
    for e in &entries { println!("  {} : {} = {} [{:?}]", e.name, e.lhs, e.rhs, e.status); }

    let t0 = Instant::now();
    let entries = verify_link_euler(&planes, &default_t0_candidates(), &ctx).unwrap();
    for e in &entries { println!("  {} : {} = {} [{:?}]", e.name, e.lhs, e.rhs, e.status); }
    println!("  link euler [{:?}]", t0.elapsed());

    let t0 = Instant::now();
    let entries = verify_ndot_slice_identity(&planes, &default_t0_candidates(), &ctx).unwrap();
    for e in &entries { println!("  {} : {} = {} [{:?}]", e.name, e.lhs, e.rhs, e.status); }
    println!("  slice recursion [{:?}]", t0.elapsed());

    // full conservation with generic tuple (t first)
    let t0 = Instant::now();
    let f = planes.base().image_equation(&ctx).unwrap();
    println!("f = {f}");
    let t_form = LinearForm::var(&tg, 0);
    let coords = generic_ipa_tuple(&f, &[t_form], &ctx, "xyz-family").unwrap();
    let entries = verify_le_conservation(&f, &coords, Some(&planes), &default_t0_candidates(), &ctx).unwrap();
    for e in &entries { println!("  {} : {} = {} [{:?}] {}", e.name, e.lhs, e.rhs, e.status, e.note.clone().unwrap_or_default()); }
    println!("  le conservation [{:?}]", t0.elapsed());
}
