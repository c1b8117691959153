use num_traits::{One, Zero};
use smallcancel::arrays::{psi_eval, ArrayParams, Arrays, StepFunction};
use smallcancel::cayley::Region;
use smallcancel::presentation::{generate_family, parse_presentation};
use smallcancel::rational::{parse_rational, q, qu};
use smallcancel::{Presentation, Word, Q};

fn pres(text: &str) -> Presentation {
    parse_presentation(text).unwrap()
}

fn r(s: &str) -> Q {
    parse_rational(s).unwrap()
}

#[test]
fn step_function_values() {
    let f = StepFunction::new(r("6/33"), r("7.1/33")).unwrap();
    assert_eq!(psi_eval(&f, &r("6/33")), Q::zero());
    assert_eq!(psi_eval(&f, &r("7.1/33")), Q::one());
    assert_eq!(psi_eval(&f, &r("6.55/33")), q(1, 2));
    assert_eq!(psi_eval(&f, &q(1, 100)), Q::zero());
    assert_eq!(psi_eval(&f, &q(1, 2)), Q::one());
}

#[test]
fn drift_bounds_at_paper_constants() {
    let first = ArrayParams::paper_first();
    let second = ArrayParams::paper_second();
    assert_eq!(first.k(), q(10, 11));
    // 1 / ((1 - 10/11)(1/30)) and 1 + 1 / ((10/11)(1/11)(1/30)).
    assert_eq!(first.xi_drift_bound(), qu(330));
    assert_eq!(second.eta_drift_bound(), qu(364));
}

#[test]
fn free_group_has_no_contours() {
    let p = pres("gens: a b\nlambda: 1/33\n");
    let region = Region::piece_free(&p).unwrap();
    let a = Arrays::new(&region, ArrayParams::paper_first());
    let g = Word::empty();
    let h = p.word("a b B b a a").unwrap();
    let (_, gs) = &*a.geodesics(&g, &h).unwrap();
    assert!(a.contours_on_geodesic(&gs[0], &q(4, 33)).unwrap().is_empty());
    assert!(a.xi(&g, &h).unwrap().is_empty());
    let eta = a.eta(&g, &h, None).unwrap();
    assert_eq!(eta.len(), 4);
    assert!(gs[0].edges().iter().all(|e| eta.get(e) == Q::one()));
}

#[test]
fn short_arc_of_a_long_relator_is_not_heavy() {
    // 7 >= (4/33) 10010 is false.
    let f = generate_family(140, q(1, 33));
    let region = Region::ball(&f, 7, 100_000).unwrap();
    let a = Arrays::new(&region, ArrayParams::paper_first());
    let one = Word::empty();
    let c = region.trace(&one, &f.relators()[0]).unwrap();
    let i = c.vertices().iter().position(|v| v.is_empty()).unwrap();
    let arc = c.arc(i, 7, true);
    assert!(a.contours_on_geodesic(&arc, &q(4, 33)).unwrap().is_empty());
}

#[test]
fn heavy_threshold_on_a_half_arc() {
    // A geodesic can follow at most 17 edges of a 35-contour.
    let p = pres("gens: a\nlambda: 1/33\na^35\n");
    let region = Region::piece_free(&p).unwrap();
    let a = Arrays::new(&region, ArrayParams::paper_first());
    let one = Word::empty();
    let h = p.word("a^17").unwrap();
    let (d, gs) = &*a.geodesics(&one, &h).unwrap();
    assert_eq!((*d, gs.len()), (17, 1));
    assert!(a.contours_on_geodesic(&gs[0], &q(1, 2)).unwrap().is_empty());
    let heavy = a.contours_on_geodesic(&gs[0], &q(17, 35)).unwrap();
    assert_eq!(heavy.len(), 1);
    assert_eq!(heavy[0].arc.len(), 17);
    assert_eq!(a.contours_common(&one, &h, &q(17, 35)).unwrap().len(), 1);
    assert!(a.contours_common(&one, &one, &q(1, 33)).unwrap().is_empty());
}

#[test]
fn heavy_contours_saturate_and_cancel_their_edges() {
    // On a^34 from 1 to a^17 the contour is a half; 1/2 >= nu1 + 2 lambda.
    let p = pres("gens: a\nlambda: 1/33\na^34\n");
    let region = Region::piece_free(&p).unwrap();
    let first = Arrays::new(&region, ArrayParams::paper_first());
    let second = first.with_params(ArrayParams::paper_second());
    let one = Word::empty();
    let h = p.word("a^17").unwrap();
    let xi = first.xi(&one, &h).unwrap();
    assert_eq!(xi.len(), 1);
    assert!(xi.iter().all(|(_, v)| *v == qu(34)));
    assert!(first.heavy_contours_saturate(&one, &h).unwrap().1);
    // Every geodesic edge lies on the saturated contour, so eta vanishes.
    assert!(second.eta(&one, &h, None).unwrap().is_empty());
    assert!(first.xi(&h, &h).unwrap().is_empty());
}

#[test]
fn light_edges_carry_one() {
    let p = pres("gens: a b\nlambda: 1/33\na^34\nb^35\n");
    let region = Region::piece_free(&p).unwrap();
    let second = Arrays::new(&region, ArrayParams::paper_second());
    let one = Word::empty();
    for h in ["a^3 b^20", "b a b a b", "a^17 b^17", "a^5 B^9 a"] {
        let h = p.word(h).unwrap();
        let (n, ok) = second.light_edges_are_one(&one, &h).unwrap();
        assert!(ok, "{h:?}");
        let _ = n;
    }
}

#[test]
fn symmetric_and_equivariant() {
    let p = pres("gens: a b\nlambda: 1/33\n(a b)^17\n");
    let region = Region::piece_free(&p).unwrap();
    let a = Arrays::new(&region, ArrayParams::paper_first());
    let pairs = [("", "a b a b a b a b a b a b a b a b a"), ("b", "a b a b a b A"), ("a a", "B A B A B A B A B A")];
    for (g, h) in pairs {
        let (g, h) = (p.word(g).unwrap(), p.word(h).unwrap());
        assert_eq!(a.xi(&g, &h).unwrap(), a.xi(&h, &g).unwrap());
        for k in ["a", "b A", "a b a b"] {
            let k = p.word(k).unwrap();
            let moved = a.xi(&g, &h).unwrap().map_keys(|c| region.translate_contour(&k, c)).unwrap();
            let direct = a.xi(&region.mul(&k, &g).unwrap(), &region.mul(&k, &h).unwrap()).unwrap();
            assert_eq!(moved, direct);
            let eta_moved = a.eta(&g, &h, None).unwrap().map_keys(|e| e.translate(&region, &k)).unwrap();
            let eta_direct = a.eta(&region.mul(&k, &g).unwrap(), &region.mul(&k, &h).unwrap(), None).unwrap();
            assert_eq!(eta_moved, eta_direct);
        }
    }
}

#[test]
fn bigon_inclusion_on_an_overlap_ball() {
    let p = pres("gens: a b c\nlambda: 1/8\nc A B B c b c B a a\n");
    let region = Region::ball(&p, 6, 100_000).unwrap();
    let params = ArrayParams::relaxed(q(1, 8), q(1, 5), q(1, 4), q(2, 5)).unwrap();
    let a = Arrays::new(&region, params);
    let one = Word::empty();
    let mut multi = 0;
    for h in region.elements_within(5).unwrap().iter().step_by(5) {
        a.check_geodesic_arcs(&one, h, &q(1, 2)).unwrap();
        multi += (a.geodesics(&one, h).unwrap().1.len() > 1) as usize;
    }
    assert!(multi > 0);
}

#[test]
fn per_contour_bound_is_attained() {
    // Adjacent start points 1 and a, target a^12, on a relator of length 60:
    // the first contour drifts by exactly 1/((1-K)(nu1-nu0)) = 30.
    let p = pres("gens: a b\nlambda: 1/33\na^60\n");
    let region = Region::piece_free(&p).unwrap();
    let a = Arrays::new(&region, ArrayParams::paper_first());
    let d = a.xi_drift(&Word::empty(), p.word("a").unwrap().letters()[0], &p.word("a^12").unwrap()).unwrap();
    assert_eq!(d.per_contour[0].diff, qu(30));
    assert_eq!(d.per_contour[0].bound, qu(30));
    assert!(d.per_contour_weak());
    assert!(!d.per_contour_strict());
    assert!(d.l1 < qu(330));
}
