//! Localization along a set `W` of closed degree-0 morphisms, realized as the
//! quotient of a twisted-complex fragment by the cones of `W`.

use std::collections::{BTreeMap, BTreeSet};

use crate::bar::{compose, quotient_hom, BarComplex, Certificate, Chain, QuotientHom, Window};
use crate::category::AInfCategory;
use crate::complex::{telescope, telescope_map, ChainMap, Complex, Ranks, ranks_in};
use crate::error::{Error, Result};
use crate::functor::AInfFunctor;
use crate::linalg::{Matrix, SVec};
use crate::scalar::Scalar;
use crate::twisted::{tw_cone, TwFragment, TwMorphism, TwObject};

/// A category with the morphisms to invert.
#[derive(Clone, Debug)]
pub struct LocalizationSpec {
    pub cat: AInfCategory,
    /// Closed degree-0 elements, each inside a single hom space.
    pub w: Vec<SVec>,
}

impl LocalizationSpec {
    pub fn new(cat: AInfCategory, w: Vec<SVec>) -> Result<Self> {
        for v in &w {
            endpoints(&cat, v)?;
            let d = cat.mu_lin(&[v]);
            if !d.is_empty() {
                return Err(Error::NotClosed(cat.fmt_vec(v)));
            }
        }
        Ok(LocalizationSpec { cat, w })
    }

    /// Inverts the named generators.
    pub fn from_names(cat: AInfCategory, names: &[&str]) -> Result<Self> {
        let f = cat.field();
        let w = names.iter().map(|n| Ok(vec![(cat.gen_index(n)?, f.one())])).collect::<Result<_>>()?;
        Self::new(cat, w)
    }
}

fn endpoints(cat: &AInfCategory, v: &SVec) -> Result<(usize, usize)> {
    let (g0, _) = v.first().ok_or_else(|| Error::Invalid("zero morphism in W".into()))?;
    let g0 = cat.gen(*g0);
    for (g, _) in v {
        let g = cat.gen(*g);
        if g.src != g0.src || g.tgt != g0.tgt {
            return Err(Error::Invalid("element of W is not in a single hom space".into()));
        }
        if g.deg != 0 {
            return Err(Error::NonzeroDegree(g.deg));
        }
    }
    Ok((g0.src, g0.tgt))
}

/// `B_W`: one cone `Q[1] ⊕ Q'` with `δ = w` per element of `W`.
pub fn cone_subcategory(spec: &LocalizationSpec) -> Result<Vec<TwObject>> {
    let cat = &spec.cat;
    spec.w
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let (q, q2) = endpoints(cat, v)?;
            let (e, f) = (TwObject::plain(cat, q), TwObject::plain(cat, q2));
            let m = TwMorphism { entries: BTreeMap::from([((0, 0), v.clone())]) };
            Ok(tw_cone(cat, &e, &f, &m, &format!("cone{k}"))?.cone)
        })
        .collect()
}

/// The Tw fragment on the objects of `A` and `B_W`, together with `B_W`.
#[derive(Clone, Debug)]
pub struct Localization {
    pub spec: LocalizationSpec,
    pub fragment: TwFragment,
    pub killed: BTreeSet<usize>,
}

impl Localization {
    pub fn new(spec: LocalizationSpec) -> Result<Self> {
        let cones = cone_subcategory(&spec)?;
        let base_objects = spec.cat.num_objects();
        let killed = (base_objects..base_objects + cones.len()).collect();
        let fragment = TwFragment::new(&spec.cat, cones)?;
        Ok(Localization { spec, fragment, killed })
    }

    /// Morphisms `X → Y` in the localization, truncated and certified.
    pub fn hom(&self, x: usize, y: usize, window: Window, n_max: usize) -> Result<QuotientHom> {
        quotient_hom(self.fragment.cat(), &self.killed, x, y, window, n_max)
    }

    /// Searches `H⁰ L(Q', Q)` for a two-sided inverse of the image of `W[k]`,
    /// exhaustively over a prime field. Returns the inverse as chain combination.
    pub fn find_inverse(&self, k: usize, n: usize) -> Result<Option<BTreeMap<Chain, Scalar>>> {
        let cat = self.fragment.cat();
        let field = cat.field();
        let elements = field.elements()?;
        let w = &self.spec.w[k];
        let (q, q2) = endpoints(&self.spec.cat, w)?;
        // base objects keep their indices and generator names inside the fragment
        let w_frag: BTreeMap<Chain, Scalar> = w
            .iter()
            .map(|(g, c)| Ok((vec![cat.gen_index(&self.spec.cat.gen(*g).name)?], c.clone())))
            .collect::<Result<_>>()?;
        let back = crate::bar::bar_complex(cat, &self.killed, q2, q, n)?;
        let qq = crate::bar::bar_complex(cat, &self.killed, q, q, n)?;
        let q2q2 = crate::bar::bar_complex(cat, &self.killed, q2, q2, n)?;
        let h = back.complex.cohomology_at(0);
        let r = h.rank();
        if (elements.len() as f64).powi(r as i32) > 1e6 {
            return Err(Error::SearchTooLarge(format!("{}^{r} candidate classes", elements.len())));
        }
        let is_identity = |bar: &BarComplex, obj: usize, v: &BTreeMap<Chain, Scalar>| -> Result<bool> {
            let e = BTreeMap::from([(vec![cat.unit(obj)], field.one())]);
            let mut diff = v.clone();
            for (ch, c) in e {
                let cur = diff.remove(&ch).unwrap_or_else(|| field.zero());
                let nv = field.sub(&cur, &c);
                if !field.is_zero(&nv) {
                    diff.insert(ch, nv);
                }
            }
            let vec = bar.vector(0, &diff)?;
            Ok(bar.complex.cohomology_at(0).is_exact(&vec))
        };
        let mut coeffs = vec![0usize; r];
        loop {
            let mut g = SVec::new();
            for (i, &c) in coeffs.iter().enumerate() {
                g = crate::linalg::sv_axpy(&field, &g, &elements[c], &h.reps[i]);
            }
            let g_combo = if g.is_empty() { BTreeMap::new() } else { back.chain_combo(0, &g) };
            let left = compose(cat, &g_combo, &w_frag);
            let right = compose(cat, &w_frag, &g_combo);
            if is_identity(&qq, q, &left)? && is_identity(&q2q2, q2, &right)? {
                return Ok(Some(g_combo));
            }
            // next coefficient tuple
            let mut i = 0;
            loop {
                if i == r {
                    return Ok(None);
                }
                coeffs[i] += 1;
                if coeffs[i] < elements.len() {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
        }
    }
}

/// `localize_hom` with its certificate.
pub fn localize_hom(spec: &LocalizationSpec, x: usize, y: usize, window: Window, n_max: usize) -> Result<(Localization, QuotientHom)> {
    let loc = Localization::new(spec.clone())?;
    let q = loc.hom(x, y, window, n_max)?;
    Ok((loc, q))
}

/// Post-composition with a closed degree-0 `s` as a chain map on a bar
/// complex: `α ↦ (-1)^{|α|} μ²(s, α)`.
fn postcompose(cat: &AInfCategory, s: &BTreeMap<Chain, Scalar>, src: &BarComplex, tgt: &BarComplex) -> Result<ChainMap> {
    let f = cat.field();
    let mut comps = BTreeMap::new();
    for (&n, chains) in &src.chains {
        let sign = f.sign(n.rem_euclid(2) == 1);
        let mut cols = Vec::new();
        for ch in chains {
            let alpha = BTreeMap::from([(ch.clone(), sign.clone())]);
            let out = compose(cat, s, &alpha);
            cols.push(tgt.vector(n, &out)?);
        }
        comps.insert(n, Matrix::from_columns(f, tgt.complex.dim(n), cols)?);
    }
    ChainMap::new(src.complex.clone(), tgt.complex.clone(), 0, comps)
}

/// Pre-composition with a closed degree-0 `w`: `α ↦ μ²(α, w)`.
fn precompose(cat: &AInfCategory, w: &BTreeMap<Chain, Scalar>, src: &BarComplex, tgt: &BarComplex) -> Result<ChainMap> {
    let f = cat.field();
    let mut comps = BTreeMap::new();
    for (&n, chains) in &src.chains {
        let mut cols = Vec::new();
        for ch in chains {
            let alpha = BTreeMap::from([(ch.clone(), f.one())]);
            let out = compose(cat, &alpha, w);
            cols.push(tgt.vector(n, &out)?);
        }
        comps.insert(n, Matrix::from_columns(f, tgt.complex.dim(n), cols)?);
    }
    ChainMap::new(src.complex.clone(), tgt.complex.clone(), 0, comps)
}

/// A finite sequence `Y_0 → Y_1 → … → Y_m` of objects of `A`; the maps are
/// closed degree-0 elements and the tail is constant beyond `Y_m`.
#[derive(Clone, Debug)]
pub struct ObjectSequence {
    pub objects: Vec<usize>,
    pub maps: Vec<SVec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalSequenceReport {
    /// Per element of `W`: does `hocolim hom(Q', Y_i) → hocolim hom(Q, Y_i)` invert?
    pub hypothesis: Vec<bool>,
    /// `Some(ok)` only when every hypothesis holds.
    pub conclusion: Option<bool>,
    pub source_ranks: Option<Ranks>,
    pub target_ranks: Option<Ranks>,
    pub certificates: Vec<Certificate>,
}

impl LocalSequenceReport {
    pub fn hypothesis_holds(&self) -> bool {
        self.hypothesis.iter().all(|h| *h)
    }
}

fn as_combo(cat: &AInfCategory, frag: &AInfCategory, v: &SVec) -> Result<BTreeMap<Chain, Scalar>> {
    v.iter().map(|(g, c)| Ok((vec![frag.gen_index(&cat.gen(*g).name)?], c.clone()))).collect()
}

fn validate_sequence(cat: &AInfCategory, seq: &ObjectSequence) -> Result<()> {
    if seq.objects.is_empty() || seq.maps.len() + 1 != seq.objects.len() {
        return Err(Error::Invalid("a sequence needs m+1 objects and m maps".into()));
    }
    for (i, m) in seq.maps.iter().enumerate() {
        let (s, t) = endpoints(cat, m)?;
        if s != seq.objects[i] || t != seq.objects[i + 1] || !cat.mu_lin(&[m]).is_empty() {
            return Err(Error::NotComposable(i));
        }
    }
    Ok(())
}

/// `hom(src, Y_i)` for every term, with post-composition along the sequence.
fn sequence_homs(cat: &AInfCategory, seq: &ObjectSequence, src: usize) -> Result<(Vec<BarComplex>, Vec<ChainMap>)> {
    let empty = BTreeSet::new();
    let terms: Vec<BarComplex> =
        seq.objects.iter().map(|&y| crate::bar::bar_complex(cat, &empty, src, y, 0)).collect::<Result<_>>()?;
    let maps = seq
        .maps
        .iter()
        .enumerate()
        .map(|(i, m)| postcompose(cat, &as_combo(cat, cat, m)?, &terms[i], &terms[i + 1]))
        .collect::<Result<_>>()?;
    Ok((terms, maps))
}

/// The telescope of `hom(x, Y_0) → hom(x, Y_1) → ⋯` and the last term `hom(x, Y_m)`.
pub fn hom_telescope(cat: &AInfCategory, seq: &ObjectSequence, x: usize) -> Result<(Complex, Complex)> {
    validate_sequence(cat, seq)?;
    let (terms, maps) = sequence_homs(cat, seq, x)?;
    let cs: Vec<Complex> = terms.iter().map(|t| t.complex.clone()).collect();
    let last = cs.last().cloned().expect("sequences are non-empty");
    Ok((telescope(&maps, &cs)?, last))
}

/// Checks the telescope lemma for one sequence and one source object `X`.
pub fn check_local_sequence(
    spec: &LocalizationSpec,
    seq: &ObjectSequence,
    x: usize,
    window: Window,
    n_max: usize,
) -> Result<LocalSequenceReport> {
    let cat = &spec.cat;
    validate_sequence(cat, seq)?;
    let sequence_homs = |src: usize| sequence_homs(cat, seq, src);
    let mut hypothesis = Vec::new();
    for w in &spec.w {
        let (q, q2) = endpoints(cat, w)?;
        let (tq2, mq2) = sequence_homs(q2)?;
        let (tq, mq) = sequence_homs(q)?;
        let wc = as_combo(cat, cat, w)?;
        let ladder: Vec<ChainMap> =
            tq2.iter().zip(&tq).map(|(a, b)| precompose(cat, &wc, a, b)).collect::<Result<_>>()?;
        let cs: Vec<Complex> = tq2.iter().map(|t| t.complex.clone()).collect();
        let ds: Vec<Complex> = tq.iter().map(|t| t.complex.clone()).collect();
        let map = telescope_map(&mq2, &cs, &mq, &ds, &ladder)?;
        hypothesis.push(map.is_quasi_iso()?);
    }
    if !hypothesis.iter().all(|h| *h) {
        return Ok(LocalSequenceReport {
            hypothesis,
            conclusion: None,
            source_ranks: None,
            target_ranks: None,
            certificates: vec![],
        });
    }
    let loc = Localization::new(spec.clone())?;
    let frag = loc.fragment.cat();
    let (src_terms, src_maps) = sequence_homs(x)?;
    let mut loc_terms = Vec::new();
    let mut certificates = Vec::new();
    for &y in &seq.objects {
        let q = loc.hom(x, y, window, n_max)?;
        certificates.push(q.certificate.clone());
        loc_terms.push(q.bar);
    }
    let mut loc_maps = Vec::new();
    for (i, m) in seq.maps.iter().enumerate() {
        loc_maps.push(postcompose(frag, &as_combo(cat, frag, m)?, &loc_terms[i], &loc_terms[i + 1])?);
    }
    // length-0 inclusion hom_A(X, Y_i) → L(X, Y_i)
    let mut ladder = Vec::new();
    for (s, t) in src_terms.iter().zip(&loc_terms) {
        let f = cat.field();
        let mut comps = BTreeMap::new();
        for (&n, chains) in &s.chains {
            let mut cols = Vec::new();
            for ch in chains {
                let image = as_combo(cat, frag, &vec![(ch[0], f.one())])?;
                cols.push(t.vector(n, &image)?);
            }
            comps.insert(n, Matrix::from_columns(f, t.complex.dim(n), cols)?);
        }
        ladder.push(ChainMap::new(s.complex.clone(), t.complex.clone(), 0, comps)?);
    }
    let cs: Vec<Complex> = src_terms.iter().map(|t| t.complex.clone()).collect();
    let ds: Vec<Complex> = loc_terms.iter().map(|t| t.complex.clone()).collect();
    let map = telescope_map(&src_maps, &cs, &loc_maps, &ds, &ladder)?;
    let cone = map.cone()?.0;
    let cone_ranks = ranks_in(&cone.cohomology_ranks(), window.lo - 1, window.hi);
    let certified = certificates.iter().all(|c| c.is_certified());
    let source_ranks = ranks_in(&telescope(&src_maps, &cs)?.cohomology_ranks(), window.lo, window.hi);
    let target_ranks = ranks_in(&telescope(&loc_maps, &ds)?.cohomology_ranks(), window.lo, window.hi);
    Ok(LocalSequenceReport {
        hypothesis,
        conclusion: Some(certified && cone_ranks.is_empty()),
        source_ranks: Some(source_ranks),
        target_ranks: Some(target_ranks),
        certificates,
    })
}

/// A diagram of categories over a finite poset with strict functors along
/// its arrows and a localization set at every node.
#[derive(Clone, Debug)]
pub struct LocalizedDiagram {
    pub nodes: Vec<Localization>,
    pub arrows: Vec<(usize, usize, AInfFunctor)>,
    /// For each arrow, the index in `W_y` of the image of each element of `W_x`.
    w_images: Vec<Vec<usize>>,
}

/// Builds the per-node localizations after checking that every functor is
/// strict and sends `W_x` into `W_y`.
pub fn localize_diagram(nodes: Vec<LocalizationSpec>, arrows: Vec<(usize, usize, AInfFunctor)>) -> Result<LocalizedDiagram> {
    let mut w_images = Vec::new();
    for (x, y, func) in &arrows {
        if *x >= nodes.len() || *y >= nodes.len() {
            return Err(Error::Invalid("arrow between unknown nodes".into()));
        }
        if func.source() != &nodes[*x].cat || func.target() != &nodes[*y].cat {
            return Err(Error::Invalid(format!("functor on arrow {x} -> {y} has the wrong ends")));
        }
        if !func.is_strict() {
            return Err(Error::Invalid("localize_diagram supports strict functors only".into()));
        }
        let mut images = Vec::new();
        for w in &nodes[*x].w {
            let image = func.apply1(w);
            match nodes[*y].w.iter().position(|v| *v == image) {
                Some(k) => images.push(k),
                None => return Err(Error::Incompatible(*x, *y)),
            }
        }
        w_images.push(images);
    }
    let nodes = nodes.into_iter().map(Localization::new).collect::<Result<_>>()?;
    Ok(LocalizedDiagram { nodes, arrows, w_images })
}

impl LocalizedDiagram {
    /// The chain map `L_x(X, Y) → L_y(FX, FY)` induced along arrow `a`,
    /// both sides truncated at length `n`.
    pub fn induced_map(&self, a: usize, x: usize, y: usize, n: usize) -> Result<(BarComplex, BarComplex, ChainMap)> {
        let (sx, sy, func) = &self.arrows[a];
        let (src, tgt) = (&self.nodes[*sx], &self.nodes[*sy]);
        let (fs, ft) = (src.fragment.cat(), tgt.fragment.cat());
        let base_src = src.spec.cat.num_objects();
        let base_tgt = tgt.spec.cat.num_objects();
        let obj_map = |o: usize| -> usize {
            if o < base_src {
                func.object_map()[o]
            } else {
                base_tgt + self.w_images[a][o - base_src]
            }
        };
        let from = crate::bar::bar_complex(fs, &src.killed, x, y, n)?;
        let to = crate::bar::bar_complex(ft, &tgt.killed, obj_map(x), obj_map(y), n)?;
        let field = fs.field();
        // image of one fragment generator: apply F¹ entrywise to its raw matrix
        let gen_image = |g: usize| -> Result<SVec> {
            let gen = fs.gen(g);
            let raw = src.fragment.to_raw(&vec![(g, field.one())]);
            let mapped = TwMorphism {
                entries: raw.entries.iter().map(|(k, v)| (*k, func.apply1(v))).collect(),
            };
            tgt.fragment.from_raw(obj_map(gen.src), obj_map(gen.tgt), &mapped)
        };
        let mut comps = BTreeMap::new();
        for (&deg, chains) in &from.chains {
            let mut cols = Vec::new();
            for ch in chains {
                let mut acc: BTreeMap<Chain, Scalar> = BTreeMap::from([(vec![], field.one())]);
                let len = ch.len();
                for (pos, &g) in ch.iter().enumerate() {
                    let internal = pos > 0 && pos + 1 < len;
                    let img = gen_image(g)?;
                    let mut next = BTreeMap::new();
                    for (prefix, c) in &acc {
                        for (h, d) in &img {
                            if internal && ft.is_unit(*h) {
                                continue;
                            }
                            let mut p = prefix.clone();
                            p.push(*h);
                            let e = next.entry(p).or_insert_with(|| field.zero());
                            *e = field.add(e, &field.mul(c, d));
                        }
                    }
                    acc = next;
                }
                acc.retain(|_, c| !field.is_zero(c));
                cols.push(to.vector(deg, &acc)?);
            }
            comps.insert(deg, Matrix::from_columns(field, to.complex.dim(deg), cols)?);
        }
        let map = ChainMap::new(from.complex.clone(), to.complex.clone(), 0, comps)?;
        Ok((from, to, map))
    }

    /// Checks `F_* ∘ ℓ_x = ℓ_y ∘ F` on cohomology for every arrow and every
    /// pair of base objects, where `ℓ` is the length-0 inclusion.
    pub fn check_commutes(&self, n: usize) -> Result<bool> {
        for (a, (sx, _, func)) in self.arrows.iter().enumerate() {
            let base = &self.nodes[*sx].spec.cat;
            for x in 0..base.num_objects() {
                for y in 0..base.num_objects() {
                    let (from, to, map) = self.induced_map(a, x, y, n)?;
                    let field = base.field();
                    for g in base.hom_basis(x, y) {
                        let deg = base.gen(*g).deg;
                        let sg = self.nodes[*sx].fragment.cat().gen_index(&base.gen(*g).name)?;
                        let src_vec = from.vector(deg, &BTreeMap::from([(vec![sg], field.one())]))?;
                        let pushed = map.component(deg).apply(&src_vec);
                        let img = func.apply1(&vec![(*g, field.one())]);
                        let tcat = self.nodes[self.arrows[a].1].fragment.cat();
                        let direct: BTreeMap<Chain, Scalar> = img
                            .iter()
                            .map(|(h, c)| Ok((vec![tcat.gen_index(&func.target().gen(*h).name)?], c.clone())))
                            .collect::<Result<_>>()?;
                        let direct = to.vector(deg, &direct)?;
                        let diff = crate::linalg::sv_sub(&field, &pushed, &direct);
                        let cocycle = to.complex.d(deg).apply(&diff).is_empty();
                        if !cocycle || !to.complex.cohomology_at(deg).is_exact(&diff) {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }
}
