//! Verification suites. Each returns report checks; an invariant violation
//! from the library aborts the suite with the error.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use smallcancel::arrays::Arrays;
use smallcancel::cayley::{contour_overlap, intersect, Contour, Edge, Path, Region};
use smallcancel::properarray::embedding::{m_condition, Embedding, EmbeddingSpec};
use smallcancel::properarray::freeproduct::{norm_squared, FreeProduct};
use smallcancel::properarray::{project_contours, project_edges, ProperArray};
use smallcancel::rational::{q, qu};
use smallcancel::sparse::SparseVector;
use smallcancel::{Presentation, Result, Word, Q};

use crate::fixtures::Scenario;
use crate::report::{Check, Num, Verdict};
use crate::sampling::{random_reduced, Triple};

/// Running maximum with a pass flag and the first failing witness.
struct Tally {
    check: Check,
    max: Option<Q>,
    ok: bool,
}

impl Tally {
    fn new(name: &str, scn: &str) -> Tally {
        Tally { check: Check::new(name).param("scenario", scn), max: None, ok: true }
    }

    fn observe(&mut self, x: Q) {
        if self.max.as_ref().is_none_or(|m| x > *m) {
            self.max = Some(x);
        }
    }

    fn test(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.check.pairs_tested += 1;
        if !ok && self.ok {
            self.ok = false;
            self.check.notes.push(format!("first failure: {}", witness()));
        }
        self.ok &= ok;
    }

    fn bound(mut self, b: &Q) -> Tally {
        self.check.bound = Some(Num::of(b));
        self
    }

    fn done(mut self, informational: bool) -> Check {
        self.check.max_observed = self.max.as_ref().map(Num::of);
        self.check.verdict = if self.ok { Verdict::Pass } else { Verdict::Fail };
        self.check.informational = informational;
        self.check
    }
}

fn fmt_triple(p: &Presentation, t: &Triple) -> String {
    format!("g = {}, x = {}, h = {}", p.format_word(&t.g), p.format_word(&Word::letter(t.x)), p.format_word(&t.h))
}

fn same_path(a: &Path, b: &Path) -> bool {
    a.vertices == b.vertices && a.letters == b.letters
}

/// Contours through a few sampled vertices, at most `limit`.
fn sample_contours(region: &Region, triples: &[Triple], limit: usize) -> Result<Vec<Contour>> {
    let mut out = BTreeSet::new();
    let mut starts = vec![Word::empty()];
    starts.extend(triples.iter().take(8).map(|t| t.g.clone()));
    for v in starts {
        for c in region.contours_at(&v, usize::MAX)? {
            out.insert(c);
        }
    }
    Ok(out.into_iter().take(limit).collect())
}

/// Arc and geodesic oracles on contours and sampled geodesics.
pub fn arc_suite(scn: &Scenario, region: &Region, triples: &[Triple]) -> Result<Vec<Check>> {
    let p = region.presentation();
    let name = scn.name.as_str();
    let radius = region.radius().unwrap_or(usize::MAX);
    let contours = sample_contours(region, triples, 3)?;

    let mut unique = Tally::new("arc-unique-geodesic", name);
    let mut two = Tally::new("half-arcs-two-geodesics", name);
    for r in &contours {
        let n = r.len();
        for i in 0..n {
            for s in 1..=n / 2 {
                if s > radius {
                    break;
                }
                let v = &r.vertices()[i];
                let w = &r.vertices()[(i + s) % n];
                let (d, geos) = region.geodesics(v, w)?;
                let fwd = r.arc(i, s, true);
                if 2 * s < n {
                    unique.test(d == s && geos.len() == 1 && same_path(&geos[0], &fwd), || {
                        format!("contour at {} offset {i}, s = {s}: d = {d}, {} geodesics", p.format_word(v), geos.len())
                    });
                } else {
                    let back = r.arc(i, s, false);
                    let ok = d == s
                        && geos.len() == 2
                        && geos.iter().any(|g| same_path(g, &fwd))
                        && geos.iter().any(|g| same_path(g, &back));
                    two.test(ok, || format!("contour at {} offset {i}: {} geodesics", p.format_word(v), geos.len()));
                }
            }
        }
    }

    let mut single = Tally::new("geodesic-contour-single-arc", name);
    let mut overlap = Tally::new("contour-contour-single-arc", name);
    let mut bigon = Tally::new("bigon-edges-on-heavy-contours", name);
    let mut nest = Tally::new("geodesic-contour-nesting", name);
    let arrays = Arrays::new(region, scn.params.first());
    let half = q(1, 2) - p.lambda() * q(2, 1);
    for t in triples {
        let (_, geos) = region.geodesics(&t.g, &t.h)?;
        let mut seen: BTreeSet<Contour> = BTreeSet::new();
        for path in &geos {
            for c in region.contours_along(path, usize::MAX)? {
                intersect(&c, path)?;
                single.test(true, String::new);
                seen.insert(c);
            }
        }
        let seen: Vec<Contour> = seen.into_iter().collect();
        for i in 0..seen.len() {
            for j in i + 1..seen.len() {
                contour_overlap(&seen[i], &seen[j])?;
                overlap.test(true, String::new);
            }
        }
        for a in &geos {
            let heavy: Vec<(Contour, usize)> = region
                .contours_along(a, usize::MAX)?
                .into_iter()
                .filter_map(|c| intersect(&c, a).ok().flatten().map(|x| (c, x.len())))
                .filter(|(c, l)| qu(*l) >= &half * qu(c.len()))
                .collect();
            for b in &geos {
                let on_b: BTreeSet<Edge> = b.edges().into_iter().collect();
                for e in a.edges() {
                    if !on_b.contains(&e) {
                        let ok = heavy.iter().any(|(c, _)| c.contains_edge(&e));
                        bigon.test(ok, || format!("{}: edge off the other geodesic", fmt_triple(p, t)));
                    }
                }
            }
        }
        arrays.check_geodesic_arcs(&t.g, &t.h, &scn.params.mu)?;
        nest.test(true, String::new);
    }
    let informational = false;
    Ok(vec![unique.done(informational), two.done(informational), single.done(informational), overlap.done(informational), bigon.done(informational), nest.done(informational)])
}

/// Drift of the contour array between adjacent starting points.
pub fn xi_drift_suite(scn: &Scenario, region: &Region, triples: &[Triple]) -> Result<Vec<Check>> {
    let p = region.presentation();
    let params = scn.params.first();
    let arrays = Arrays::new(region, params.clone());
    let name = scn.name.as_str();
    let info = scn.relaxed();
    let nu = format!("({}, {})", params.psi.nu0(), params.psi.nu1());
    let mut l1 = Tally::new("xi-drift-l1", name).bound(&params.xi_drift_bound());
    let mut strict = Tally::new("xi-drift-per-contour-strict", name).bound(&Q::from_integer(1.into()));
    let mut weak = Tally::new("xi-drift-per-contour-weak", name).bound(&Q::from_integer(1.into()));
    let mut heavy = Tally::new("heavy-contours-saturate", name);
    let bound = params.xi_drift_bound();
    for t in triples {
        let d = arrays.xi_drift(&t.g, t.x, &t.h)?;
        l1.observe(d.l1.clone());
        l1.test(d.l1 < bound, || format!("{} gives {}", fmt_triple(p, t), d.l1));
        strict.observe(d.worst_ratio());
        strict.test(d.per_contour_strict(), || {
            let w = d.per_contour.iter().position(|c| c.diff >= c.bound).unwrap_or(0);
            format!("{}: contour {} of the union has drift {} = bound {}", fmt_triple(p, t), w + 1, d.per_contour[w].diff, d.per_contour[w].bound)
        });
        weak.observe(d.worst_ratio());
        weak.test(d.per_contour_weak(), || fmt_triple(p, t).to_string());
        let (n, ok) = arrays.heavy_contours_saturate(&t.g, &t.h)?;
        heavy.observe(qu(n));
        heavy.test(ok, || fmt_triple(p, t));
    }
    let mut out = Vec::new();
    for (tally, is_bound) in [(l1, true), (strict, true), (weak, true), (heavy, false)] {
        let c = tally.done(info && is_bound).param("nu", &nu).param("K", params.k());
        out.push(if c.name.starts_with("xi-drift-per") { c.note("max_observed is the largest drift / bound ratio") } else { c });
    }
    Ok(out)
}

/// Drift of the edge array between adjacent starting points.
pub fn eta_drift_suite(scn: &Scenario, region: &Region, triples: &[Triple]) -> Result<Vec<Check>> {
    let p = region.presentation();
    let params = scn.params.second();
    let arrays = Arrays::new(region, params.clone());
    let name = scn.name.as_str();
    let nu = format!("({}, {})", params.psi.nu0(), params.psi.nu1());
    let bound = params.eta_drift_bound();
    let mut l1 = Tally::new("eta-drift-l1", name).bound(&bound);
    let mut light = Tally::new("light-edges-unit", name);
    for t in triples {
        let d = arrays.eta_drift(&t.g, t.x, &t.h)?;
        l1.observe(d.clone());
        l1.test(d < bound, || format!("{} gives {d}", fmt_triple(p, t)));
        let (n, ok) = arrays.light_edges_are_one(&t.g, &t.h)?;
        light.observe(qu(n));
        light.test(ok, || fmt_triple(p, t));
    }
    Ok(vec![
        l1.done(scn.relaxed()).param("nu", &nu).param("K", params.k()),
        light.done(false).param("nu", &nu),
    ])
}

/// Properties of `Phi` and its square-root form on sampled pairs.
pub fn phi_suite(scn: &Scenario, region: &Region, triples: &[Triple], rng: &mut ChaCha8Rng) -> Result<Vec<Check>> {
    let p = region.presentation();
    let arr = ProperArray::new(region, scn.params.clone());
    let name = scn.name.as_str();
    let lip = scn.params.lipschitz();
    let radius = region.radius().unwrap_or(usize::MAX);
    let mut nonneg = Tally::new("phi-nonnegative", name);
    let mut sym = Tally::new("phi-symmetric", name);
    let mut equi = Tally::new("phi-equivariant", name);
    let mut dom = Tally::new("phi-dominates-distance", name);
    let mut drift = Tally::new("phi-drift", name).bound(&lip);
    let mut tilde = Tally::new("phi-tilde-squared-norm", name);
    let mut mass = Tally::new("phi-mass-split", name);
    for t in triples {
        let c = arr.check_pair(&t.g, &t.h)?;
        nonneg.observe(qu(c.support));
        nonneg.test(c.nonnegative, || fmt_triple(p, t));
        sym.test(c.symmetric, || fmt_triple(p, t));
        dom.observe(qu(c.distance) / if c.l1.is_zero() { Q::from_integer(1.into()) } else { c.l1.clone() });
        dom.test(c.dominates_distance, || format!("{}: d = {} > {}", fmt_triple(p, t), c.distance, c.l1));
        let klen = rng.gen_range(0..=2);
        let k = region.canonical(&random_reduced(rng, p, klen))?;
        equi.test(arr.equivariant(&t.g, &t.h, &k)?, || format!("{} with k = {}", fmt_triple(p, t), p.format_word(&k)));
        let room = radius.saturating_sub(c.distance).min(2);
        if room > 0 {
            let kl = rng.gen_range(1..=room);
            let k = region.canonical(&random_reduced(rng, p, kl))?;
            if !k.is_empty() {
                let (dv, b) = arr.drift(&t.g, &k, &t.h)?;
                let kn = region.norm(&k)?;
                drift.observe(dv.clone() / qu(kn));
                drift.test(dv <= b, || format!("{} with k = {}: {dv} > {b}", fmt_triple(p, t), p.format_word(&k)));
            }
        }
        let s = arr.phi_tilde_stats(&t.g, &t.h)?;
        tilde.observe(s.squared_norm.clone());
        tilde.test(s.squared_norm == s.l1, || fmt_triple(p, t));
        drift.observe(s.drift_max.clone());
        drift.test(s.drift_ok, || format!("{}: generator drift {}", fmt_triple(p, t), s.drift_max));
        let split = arr.xi(&t.g, &t.h)?.l1() + arr.eta(&t.g, &t.h)?.l1();
        mass.test(split == c.l1, || format!("{}: {} vs {}", fmt_triple(p, t), split, c.l1));
    }
    let mut proxy = Tally::new("c-properness-proxy", name);
    let sweep = radius.min(3);
    for g in region.elements_within(sweep)? {
        let c = arr.c_squared(&g)?;
        let d = region.norm(&g)?;
        proxy.test(qu(d) <= c.l1(), || format!("g = {}", p.format_word(&g)));
    }
    let info = scn.relaxed();
    Ok(vec![
        nonneg.done(false).note("max_observed is the largest support size"),
        sym.done(false),
        equi.done(false),
        dom.done(false).note("max_observed is the largest d(g,h) / ||Phi[g,h]||_1"),
        drift.done(info).note("max_observed is the largest drift per unit d(1,k)"),
        tilde.done(false),
        mass.done(false),
        proxy.done(false).param("sweep_radius", sweep),
    ])
}

/// Mass preservation of both projections on random nonnegative vectors and
/// strict loss on a mixed-sign fixture.
pub fn projection_suite(rng: &mut ChaCha8Rng, count: usize) -> Result<Vec<Check>> {
    let p = smallcancel::presentation::parse_presentation("gens: a b\nlambda: 1/33\na^34\nb^35\n")?;
    let region = Region::piece_free(&p)?;
    let mut vertices = vec![Word::empty()];
    for _ in 0..12 {
        let l = rng.gen_range(0..6);
        vertices.push(region.canonical(&random_reduced(rng, &p, l))?);
    }
    let mut contours: Vec<Contour> = Vec::new();
    for v in &vertices {
        contours.extend(region.contours_at(v, usize::MAX)?);
    }
    contours.sort();
    contours.dedup();
    let mut edges: Vec<Edge> = Vec::new();
    for v in &vertices {
        for l in p.letters() {
            edges.push(Edge::of_step(v, l, &region.neighbor(v, l)?));
        }
    }
    edges.sort();
    edges.dedup();
    let rand_q = |rng: &mut ChaCha8Rng| q(rng.gen_range(0..50), rng.gen_range(1..12));
    let mut pc = Tally::new("projection-contours-mass", "random-nonnegative");
    let mut pe = Tally::new("projection-edges-mass", "random-nonnegative");
    for _ in 0..count {
        let n = rng.gen_range(0..=contours.len().min(6));
        let v: SparseVector<Contour> = contours.choose_multiple(rng, n).map(|c| (c.clone(), rand_q(rng))).collect();
        pc.test(project_contours(&v).l1() == v.l1(), || format!("{} contours", v.len()));
        let n = rng.gen_range(0..=edges.len().min(10));
        let w: SparseVector<Edge> = edges.choose_multiple(rng, n).map(|e| (e.clone(), rand_q(rng))).collect();
        pe.test(project_edges(&w).l1() == w.l1(), || format!("{} edges", w.len()));
    }
    // Two contours meeting at 1 with opposite signs; two edges at 1 likewise.
    let one = Word::empty();
    let ra = region.trace(&one, &p.word("a^34")?)?;
    let rb = region.trace(&one, &p.word("b^35")?)?;
    let v: SparseVector<Contour> = [(ra, q(1, 1)), (rb, q(-1, 1))].into_iter().collect();
    let mut mc = Tally::new("projection-contours-mixed-sign-strict", "a^34, b^35 at 1");
    mc.observe(project_contours(&v).l1());
    mc.test(project_contours(&v).l1() < v.l1(), || "no loss".into());
    let ea = Edge::of_step(&one, p.word("a")?.letters()[0], &region.canonical(&p.word("a")?)?);
    let eb = Edge::of_step(&one, p.word("b")?.letters()[0], &region.canonical(&p.word("b")?)?);
    let w: SparseVector<Edge> = [(ea, q(1, 1)), (eb, q(-1, 1))].into_iter().collect();
    let mut me = Tally::new("projection-edges-mixed-sign-strict", "edges a, b at 1");
    me.observe(project_edges(&w).l1());
    me.test(project_edges(&w).l1() < w.l1(), || "no loss".into());
    Ok(vec![pc.done(false), pe.done(false), mc.bound(&v.l1()).done(false), me.bound(&w.l1()).done(false)])
}

/// Checks on a free product: zero at the identity, the norm identity on
/// short normal forms, the patch bound, the array axiom and properness
/// counts.
pub fn freeproduct_suite(fp: &FreeProduct, max_syllables: usize, max_len: usize, big_ns: &[usize]) -> Result<Vec<Check>> {
    let label = (0..fp.factor_count()).map(|i| fp.factor(i).label()).collect::<Vec<_>>().join(" * ");
    let mut zero = Tally::new("combine-identity-zero", &label);
    zero.test(fp.combine(&[])?.is_empty(), || "R(1) != 0".into());
    let forms = fp.normal_forms(max_syllables, max_len)?;
    let mut norm = Tally::new("combine-norm-identity", &label);
    for g in &forms {
        let (direct, sum) = fp.norm_identity(g)?;
        norm.observe(direct.clone());
        norm.test(direct == sum, || format!("{g:?}: {direct} vs {sum}"));
    }
    let mut patch = Tally::new("patched-norm-lower-bound", &label);
    let mut axiom = Tally::new("patched-array-axiom", &label);
    for n in 0..fp.factor_count() {
        let c = qu(n + 1);
        for x in fp.factor(n).elements_within(max_len)? {
            if !x.is_empty() {
                let s = norm_squared(&fp.patched(n, &x)?);
                patch.test(s >= &c * &c, || format!("factor {n}, x = {x:?}: {s}"));
            }
            axiom.test(fp.axiom_holds(n, &x)?, || format!("factor {n}, x = {x:?}"));
        }
    }
    let mut out = vec![
        zero.done(false),
        norm.done(false).param("max_syllables", max_syllables).param("max_syllable_length", max_len),
        patch.done(false).param("max_syllable_length", max_len),
        axiom.done(false),
    ];
    for &big_n in big_ns {
        let (found, bound) = fp.properness_count(big_n)?;
        let ok = BigUint::from(found) <= bound;
        let mut c = Check::new("properness-count").param("scenario", &label).param("N", big_n);
        c.pairs_tested = found;
        c.max_observed = Some(Num::count(found));
        c.bound = Some(match bound.to_usize() {
            Some(b) => Num::count(b),
            None => Num { exact: bound.to_string(), decimal: format!("{} digits", bound.to_string().len()) },
        });
        out.push(c.with_verdict(ok));
    }
    Ok(out)
}

/// Checks on an embedding run.
pub fn embed_checks(label: &str, spec: &EmbeddingSpec, emb: &Embedding, lambda: &Q) -> Result<Vec<Check>> {
    let m = spec.m();
    let minimal = m_condition(lambda, m) && !m_condition(lambda, m - 1);
    let mut exp = Check::new("exponent-minimal").param("scenario", label).param("lambda", lambda).param("N", spec.n_bound());
    exp.max_observed = Some(Num::count(m));
    let exp = exp.with_verdict(minimal);

    let scan = spec.generator_scan()?;
    let mut gens = Check::new("generator-pieces").param("scenario", label).param("lambda", format!("1/{m}"));
    gens.pairs_tested = scan.words * (scan.words - 1) / 2;
    gens.max_observed = Some(Num::count(scan.max_lcp));
    gens.bound = Some(Num::of(&(qu(scan.min_len) / qu(m))));
    let gens = gens.with_verdict(scan.satisfied).note("bound is the shortest word length / M");

    let mut rel = Check::new("emitted-relator-pieces").param("scenario", label).param("cap", emb.cap).param("lambda", "1/33");
    rel.pairs_tested = emb.emitted.len();
    rel.max_observed = Some(Num::count(emb.pieces.max_piece));
    if let Some(min) = emb.presentation.classes().iter().map(|c| c.len()).min() {
        rel.bound = Some(Num::of(&(qu(min) / qu(33))));
    }
    for (c, len) in &emb.skipped {
        rel.notes.push(format!("relator class {c} has length {len} > cap"));
    }
    let rel = if emb.emitted.is_empty() {
        let mut r = rel.note("no relator under the cap; the check is vacuous");
        r.verdict = Verdict::Skipped;
        r
    } else {
        rel.with_verdict(emb.pieces.satisfied())
    };

    let mut len = Check::new("length-certificate").param("scenario", label).param("M", m);
    len.pairs_tested = emb.certificates.len();
    len.max_observed = emb.certificates.iter().map(|c| c.reduced_len).max().map(Num::count);
    for c in emb.certificates.iter().filter(|c| !c.holds()) {
        len.notes.push(format!("class {}: lengths {:?} not in {:?}", c.class, c.psi_lengths, c.allowed));
    }
    let len = len.with_verdict(emb.certificates.iter().all(|c| c.holds()));
    Ok(vec![exp, gens, rel, len])
}

/// Builds the spec, emits, and checks.
pub fn embed_suite(label: &str, source: &Presentation, n_bound: usize, cap: usize) -> Result<(Vec<Check>, Embedding)> {
    let spec = EmbeddingSpec::new(source, n_bound, 0)?;
    let emb = spec.emit(cap)?;
    Ok((embed_checks(label, &spec, &emb, source.lambda())?, emb))
}

pub fn total_pairs(checks: &[Check]) -> usize {
    checks.iter().map(|c| c.pairs_tested).sum()
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.verdict != Verdict::Fail)
}

pub fn zero() -> Q {
    Q::zero()
}
