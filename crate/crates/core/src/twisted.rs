//! Twisted complexes over a finite A∞-category.
//!
//! A twisted complex is a list of shifted objects `X_i[σ_i]` with a strictly
//! lower-triangular `δ` (entry `(i, j)` maps summand `j` to summand `i` and has
//! shifted degree 1) solving `Σ μ^n(δ, …, δ) = 0`. A morphism of shifted
//! objects `X[σ] → Y[τ]` is an element `a ∈ hom(X, Y)` of shifted degree
//! `|a| + σ - τ`, and structure maps pick up the sign `(-1)^σ` of the source
//! shift of their innermost argument.
//!
//! Nothing here materializes Tw A as a whole. [`TwFragment`] builds the
//! finite full subcategory on a chosen list of twisted complexes, as an
//! ordinary [`AInfCategory`] that every other module can consume.

use std::collections::BTreeMap;

use crate::category::{AInfCategory, Generator};
use crate::functor::AInfFunctor;
use crate::error::{Error, Result};
use crate::linalg::{Accum, SVec};

/// Default cap on the number of summands of one twisted complex.
pub const DEFAULT_SUMMAND_CAP: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwObject {
    pub name: String,
    /// `(object of the base category, shift)`.
    pub summands: Vec<(usize, i64)>,
    /// `(i, j)` with `i > j`: a base morphism from summand `j` to summand `i`.
    pub delta: BTreeMap<(usize, usize), SVec>,
}

/// A matrix of base morphisms; entry `(j, i)` maps source summand `j` to
/// target summand `i`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TwMorphism {
    pub entries: BTreeMap<(usize, usize), SVec>,
}

impl TwMorphism {
    pub fn is_zero(&self) -> bool {
        self.entries.values().all(|v| v.is_empty())
    }

    fn cleaned(entries: BTreeMap<(usize, usize), SVec>) -> Self {
        TwMorphism { entries: entries.into_iter().filter(|(_, v)| !v.is_empty()).collect() }
    }
}

impl TwObject {
    /// Builds and validates a twisted complex, including the Maurer–Cartan equation.
    pub fn new(
        base: &AInfCategory,
        name: &str,
        summands: Vec<(usize, i64)>,
        delta: BTreeMap<(usize, usize), SVec>,
    ) -> Result<Self> {
        let obj = Self::unchecked(base, name, summands, delta)?;
        let residue = mc_residue(base, &obj);
        if !residue.is_zero() {
            return Err(Error::MaurerCartan(format!("`{name}`: {}", fmt_morphism(base, &residue))));
        }
        Ok(obj)
    }

    /// Validates shape and degrees but not the Maurer–Cartan equation.
    pub fn unchecked(
        base: &AInfCategory,
        name: &str,
        summands: Vec<(usize, i64)>,
        delta: BTreeMap<(usize, usize), SVec>,
    ) -> Result<Self> {
        if summands.len() > DEFAULT_SUMMAND_CAP {
            return Err(Error::TooManySummands(summands.len(), DEFAULT_SUMMAND_CAP));
        }
        for &(o, _) in &summands {
            if o >= base.num_objects() {
                return Err(Error::UnknownObject(format!("summand #{o} of `{name}`")));
            }
        }
        let mut clean = BTreeMap::new();
        for ((i, j), v) in delta {
            if i <= j || i >= summands.len() {
                return Err(Error::Structure(format!(
                    "δ entry ({i},{j}) of `{name}` is not strictly lower-triangular"
                )));
            }
            let (x, sx) = summands[j];
            let (y, sy) = summands[i];
            for (g, _) in &v {
                let gen = base.gen(*g);
                if gen.src != x || gen.tgt != y {
                    return Err(Error::Structure(format!(
                        "δ entry ({i},{j}) of `{name}` uses `{}` from the wrong hom space",
                        gen.name
                    )));
                }
                if gen.deg + sx - sy != 1 {
                    return Err(Error::DegreeMismatch(format!(
                        "δ entry ({i},{j}) of `{name}` has shifted degree {}, expected 1",
                        gen.deg + sx - sy
                    )));
                }
            }
            if !v.is_empty() {
                clean.insert((i, j), v);
            }
        }
        Ok(TwObject { name: name.into(), summands, delta: clean })
    }

    /// A base object as a one-summand twisted complex.
    pub fn plain(base: &AInfCategory, obj: usize) -> Self {
        TwObject { name: base.objects()[obj].clone(), summands: vec![(obj, 0)], delta: BTreeMap::new() }
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    /// `E[s]`: every summand shift grows by `s`; `δ` is unchanged.
    pub fn shift(&self, s: i64, name: &str) -> TwObject {
        TwObject {
            name: name.into(),
            summands: self.summands.iter().map(|&(o, t)| (o, t + s)).collect(),
            delta: self.delta.clone(),
        }
    }

    /// Whether this is literally a base object with shift 0.
    pub fn is_plain(&self) -> bool {
        self.summands.len() == 1 && self.summands[0].1 == 0 && self.delta.is_empty()
    }

    /// The identity `Σ (-1)^{σ_i} e_{X_i}`.
    pub fn identity(&self, base: &AInfCategory) -> TwMorphism {
        let f = base.field();
        let entries = self
            .summands
            .iter()
            .enumerate()
            .map(|(i, &(o, s))| ((i, i), vec![(base.unit(o), f.sign(s.rem_euclid(2) == 1))]))
            .collect();
        TwMorphism { entries }
    }

    fn delta_into(&self) -> BTreeMap<usize, Vec<(usize, &SVec)>> {
        let mut out: BTreeMap<usize, Vec<(usize, &SVec)>> = BTreeMap::new();
        for ((i, j), v) in &self.delta {
            out.entry(*j).or_default().push((*i, v));
        }
        out
    }
}

/// Shifted degree of a base generator between summands.
pub fn entry_degree(base: &AInfCategory, src: &TwObject, j: usize, tgt: &TwObject, i: usize, g: usize) -> i64 {
    base.gen(g).deg + src.summands[j].1 - tgt.summands[i].1
}

/// Sums an operation over all ways of threading `δ`'s between the arguments.
/// `eval` receives its arguments outermost first; with `shift_sign` each term
/// picks up the sign of the shift of its innermost source summand.
struct MuSearch<'a> {
    eval: &'a dyn Fn(&[&SVec]) -> SVec,
    field: crate::scalar::Field,
    max_len: usize,
    shift_sign: bool,
    objs: &'a [&'a TwObject],
    /// innermost first
    args: &'a [&'a TwMorphism],
    outgoing: Vec<BTreeMap<usize, Vec<(usize, &'a SVec)>>>,
    arg_from: Vec<BTreeMap<usize, Vec<(usize, &'a SVec)>>>,
    out: BTreeMap<(usize, usize), Accum>,
}

impl<'a> MuSearch<'a> {
    fn run(&mut self, start: usize) {
        let mut list: Vec<&SVec> = Vec::new();
        self.walk(start, 0, start, &mut list);
    }

    fn walk(&mut self, start: usize, stage: usize, cur: usize, list: &mut Vec<&'a SVec>) {
        let k = self.args.len();
        let kmax = self.max_len;
        if stage == k && !list.is_empty() {
            let outer_first: Vec<&SVec> = list.iter().rev().copied().collect();
            let v = (self.eval)(&outer_first);
            if !v.is_empty() {
                let f = self.field;
                let s = f.sign(self.shift_sign && self.objs[0].summands[start].1.rem_euclid(2) == 1);
                self.out.entry((start, cur)).or_insert_with(|| Accum::new(f)).add_scaled(&s, &v);
            }
        }
        let remaining = k - stage;
        if list.len() + 1 + remaining <= kmax {
            let moves: Vec<(usize, &'a SVec)> =
                self.outgoing[stage].get(&cur).cloned().unwrap_or_default();
            for (next, d) in moves {
                list.push(d);
                self.walk(start, stage, next, list);
                list.pop();
            }
        }
        if stage < k && list.len() + remaining <= kmax {
            let moves: Vec<(usize, &'a SVec)> = self.arg_from[stage].get(&cur).cloned().unwrap_or_default();
            for (next, a) in moves {
                list.push(a);
                self.walk(start, stage + 1, next, list);
                list.pop();
            }
        }
    }
}

/// `μ^k` in Tw on raw morphism matrices. `objs` lists `E_0, …, E_k` and
/// `args` lists the morphisms outermost first (`args[0]: E_{k-1} → E_k`).
pub fn tw_mu(base: &AInfCategory, objs: &[&TwObject], args: &[&TwMorphism]) -> Result<TwMorphism> {
    if objs.len() != args.len() + 1 || args.is_empty() {
        return Err(Error::Invalid("tw_mu needs k morphisms between k+1 objects".into()));
    }
    let inner_first: Vec<&TwMorphism> = args.iter().rev().copied().collect();
    for (t, m) in inner_first.iter().enumerate() {
        for ((j, i), v) in &m.entries {
            let (src, tgt) = (objs[t], objs[t + 1]);
            if *j >= src.len() || *i >= tgt.len() {
                return Err(Error::Structure(format!("morphism entry ({j},{i}) out of range")));
            }
            for (g, _) in v {
                let gen = base.gen(*g);
                if gen.src != src.summands[*j].0 || gen.tgt != tgt.summands[*i].0 {
                    return Err(Error::Structure(format!("entry `{}` is in the wrong hom space", gen.name)));
                }
            }
        }
    }
    Ok(tw_mu_unchecked(base, objs, &inner_first))
}

fn tw_mu_unchecked(base: &AInfCategory, objs: &[&TwObject], inner_first: &[&TwMorphism]) -> TwMorphism {
    let eval = |args: &[&SVec]| base.mu_lin(args);
    thread(&eval, base.field(), base.kmax(), true, objs, inner_first)
}

fn thread(
    eval: &dyn Fn(&[&SVec]) -> SVec,
    field: crate::scalar::Field,
    max_len: usize,
    shift_sign: bool,
    objs: &[&TwObject],
    inner_first: &[&TwMorphism],
) -> TwMorphism {
    let outgoing: Vec<_> = objs.iter().map(|o| o.delta_into()).collect();
    let arg_from: Vec<BTreeMap<usize, Vec<(usize, &SVec)>>> = inner_first
        .iter()
        .map(|m| {
            let mut by: BTreeMap<usize, Vec<(usize, &SVec)>> = BTreeMap::new();
            for ((j, i), v) in &m.entries {
                by.entry(*j).or_default().push((*i, v));
            }
            by
        })
        .collect();
    let mut search =
        MuSearch { eval, field, max_len, shift_sign, objs, args: inner_first, outgoing, arg_from, out: BTreeMap::new() };
    for s in 0..objs[0].len() {
        search.run(s);
    }
    TwMorphism::cleaned(search.out.into_iter().map(|(k, a)| (k, a.finish())).collect())
}

/// `Σ_{n ≥ 1} μ^n(δ, …, δ)`, up to the global sign of each row.
pub fn mc_residue(base: &AInfCategory, e: &TwObject) -> TwMorphism {
    let outgoing = e.delta_into();
    let field = base.field();
    let mut out: BTreeMap<(usize, usize), Accum> = BTreeMap::new();
    fn walk<'a>(
        base: &AInfCategory,
        outgoing: &BTreeMap<usize, Vec<(usize, &'a SVec)>>,
        start: usize,
        cur: usize,
        list: &mut Vec<&'a SVec>,
        out: &mut BTreeMap<(usize, usize), Accum>,
    ) {
        if !list.is_empty() {
            let outer_first: Vec<&SVec> = list.iter().rev().copied().collect();
            let v = base.mu_lin(&outer_first);
            out.entry((start, cur)).or_insert_with(|| Accum::new(base.field())).add_scaled(&base.field().one(), &v);
        }
        if list.len() >= base.kmax() {
            return;
        }
        if let Some(moves) = outgoing.get(&cur) {
            for (next, d) in moves {
                list.push(d);
                walk(base, outgoing, start, *next, list, out);
                list.pop();
            }
        }
    }
    for s in 0..e.len() {
        walk(base, &outgoing, s, s, &mut Vec::new(), &mut out);
    }
    let _ = field;
    TwMorphism::cleaned(out.into_iter().map(|(k, a)| (k, a.finish())).collect())
}

/// Maurer–Cartan check; `Err` carries the nonzero residue.
pub fn mc_check(base: &AInfCategory, e: &TwObject) -> std::result::Result<(), String> {
    let r = mc_residue(base, e);
    if r.is_zero() {
        Ok(())
    } else {
        Err(fmt_morphism(base, &r))
    }
}

pub fn fmt_morphism(base: &AInfCategory, m: &TwMorphism) -> String {
    let parts: Vec<String> =
        m.entries.iter().map(|((j, i), v)| format!("({j}->{i}): {}", base.fmt_vec(v))).collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("; ")
    }
}

/// The cone sequence `F → cone(f) → E[1]` of a closed degree-0 `f: E → F`.
#[derive(Clone, Debug)]
pub struct ConeData {
    pub cone: TwObject,
    pub inclusion: TwMorphism,
    pub projection: TwMorphism,
}

/// `cone(f) = (E[1] ⊕ F, δ_E ⊕ δ_F + f)`.
pub fn tw_cone(base: &AInfCategory, e: &TwObject, fobj: &TwObject, f: &TwMorphism, name: &str) -> Result<ConeData> {
    for ((j, i), v) in &f.entries {
        for (g, _) in v {
            let d = entry_degree(base, e, *j, fobj, *i, *g);
            if d != 0 {
                return Err(Error::NonzeroDegree(d));
            }
        }
    }
    let closed = tw_mu(base, &[e, fobj], &[f])?;
    if !closed.is_zero() {
        return Err(Error::NotClosed(fmt_morphism(base, &closed)));
    }
    let n = e.len();
    let mut summands: Vec<(usize, i64)> = e.summands.iter().map(|&(o, s)| (o, s + 1)).collect();
    summands.extend(fobj.summands.iter().copied());
    let mut delta = e.delta.clone();
    for ((i, j), v) in &fobj.delta {
        delta.insert((i + n, j + n), v.clone());
    }
    for ((j, i), v) in &f.entries {
        delta.insert((i + n, *j), v.clone());
    }
    let cone = TwObject::new(base, name, summands, delta)?;
    let fld = base.field();
    let inclusion = TwMorphism::cleaned(
        fobj.summands
            .iter()
            .enumerate()
            .map(|(i, &(o, s))| ((i, i + n), vec![(base.unit(o), fld.sign(s.rem_euclid(2) == 1))]))
            .collect(),
    );
    let projection = TwMorphism::cleaned(
        e.summands
            .iter()
            .enumerate()
            .map(|(j, &(o, s))| ((j, j), vec![(base.unit(o), fld.sign((s + 1).rem_euclid(2) == 1))]))
            .collect(),
    );
    Ok(ConeData { cone, inclusion, projection })
}

/// The finite full subcategory of Tw A on the base objects plus `extra`,
/// materialized as an ordinary category.
#[derive(Clone, Debug)]
pub struct TwFragment {
    base: AInfCategory,
    objects: Vec<TwObject>,
    cat: AInfCategory,
    /// Raw form `(source summand, target summand, base generator)` of each
    /// fragment generator; identities of non-plain objects have no raw form.
    raw: Vec<Option<(usize, usize, usize)>>,
    raw_index: BTreeMap<(usize, usize, usize, usize, usize), usize>,
}

impl TwFragment {
    pub fn new(base: &AInfCategory, extra: Vec<TwObject>) -> Result<Self> {
        let mut objects: Vec<TwObject> = (0..base.num_objects()).map(|o| TwObject::plain(base, o)).collect();
        for e in extra {
            if objects.iter().any(|o| o.name == e.name) {
                return Err(Error::Structure(format!("duplicate object name `{}`", e.name)));
            }
            mc_check(base, &e).map_err(|r| Error::MaurerCartan(format!("`{}`: {r}", e.name)))?;
            objects.push(e);
        }
        Self::build(base, objects)
    }

    fn build(base: &AInfCategory, objects: Vec<TwObject>) -> Result<Self> {
        let mut gens = Vec::new();
        let mut raw = Vec::new();
        let mut raw_index = BTreeMap::new();
        let mut units = vec![usize::MAX; objects.len()];
        let is_base = |k: usize| k < base.num_objects();
        for (ei, e) in objects.iter().enumerate() {
            for (fi, f) in objects.iter().enumerate() {
                for (j, &(x, sx)) in e.summands.iter().enumerate() {
                    for (i, &(y, sy)) in f.summands.iter().enumerate() {
                        for &g in base.hom_basis(x, y) {
                            let gen = base.gen(g);
                            let pivot = ei == fi && i == 0 && j == 0 && base.is_unit(g);
                            let name = if pivot {
                                if is_base(ei) {
                                    gen.name.clone()
                                } else {
                                    format!("1_{}", e.name)
                                }
                            } else if is_base(ei) && is_base(fi) {
                                gen.name.clone()
                            } else {
                                format!("{}.{}>{}.{}:{}", e.name, j, f.name, i, gen.name)
                            };
                            let idx = gens.len();
                            gens.push(Generator { name, src: ei, tgt: fi, deg: gen.deg + sx - sy });
                            if pivot {
                                units[ei] = idx;
                                raw.push(None);
                            } else {
                                raw.push(Some((j, i, g)));
                            }
                            raw_index.insert((ei, fi, j, i, g), idx);
                        }
                    }
                }
            }
        }
        let mut frag = TwFragment {
            base: base.clone(),
            objects,
            cat: AInfCategory::new(base.field(), vec![], vec![], vec![], vec![])?,
            raw,
            raw_index,
        };
        let names: Vec<String> = frag.objects.iter().map(|o| o.name.clone()).collect();
        let skeleton = AInfCategory::new(base.field(), names.clone(), gens.clone(), units.clone(), vec![])?;
        let mut mu = Vec::new();
        for len in 1..=base.kmax() {
            let mut err = None;
            skeleton.for_each_chain(len, &|g| !skeleton.is_unit(g), &mut |args| {
                if err.is_some() {
                    return;
                }
                let v = frag.mu_generators(&skeleton, args);
                match v {
                    Ok(v) if !v.is_empty() => mu.push((args.to_vec(), v)),
                    Ok(_) => {}
                    Err(e) => err = Some(e),
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
        }
        frag.cat = AInfCategory::new(base.field(), names, gens, units, mu)?;
        frag.check_units()?;
        Ok(frag)
    }

    fn mu_generators(&self, skel: &AInfCategory, args: &[usize]) -> Result<SVec> {
        let morphs: Vec<TwMorphism> = args.iter().map(|&g| self.raw_of_gen(skel, g)).collect();
        let mut objs: Vec<&TwObject> = vec![&self.objects[skel.gen(args[args.len() - 1]).src]];
        for &g in args.iter().rev() {
            objs.push(&self.objects[skel.gen(g).tgt]);
        }
        let refs: Vec<&TwMorphism> = morphs.iter().collect();
        let inner_first: Vec<&TwMorphism> = refs.iter().rev().copied().collect();
        let out = tw_mu_unchecked(&self.base, &objs, &inner_first);
        let (src, tgt) = (skel.gen(args[args.len() - 1]).src, skel.gen(args[0]).tgt);
        self.from_raw(src, tgt, &out)
    }

    fn raw_of_gen(&self, skel: &AInfCategory, g: usize) -> TwMorphism {
        match self.raw[g] {
            Some((j, i, a)) => TwMorphism {
                entries: BTreeMap::from([((j, i), vec![(a, self.base.field().one())])]),
            },
            None => self.objects[skel.gen(g).src].identity(&self.base),
        }
    }

    /// Raw matrix of a fragment element.
    pub fn to_raw(&self, v: &SVec) -> TwMorphism {
        let fld = self.base.field();
        let mut acc: BTreeMap<(usize, usize), Accum> = BTreeMap::new();
        for (g, c) in v {
            let m = self.raw_of_gen(&self.cat, *g);
            for (k, w) in m.entries {
                acc.entry(k).or_insert_with(|| Accum::new(fld)).add_scaled(c, &w);
            }
        }
        TwMorphism::cleaned(acc.into_iter().map(|(k, a)| (k, a.finish())).collect())
    }

    /// Fragment coordinates of a raw matrix `objects[src] → objects[tgt]`.
    pub fn from_raw(&self, src: usize, tgt: usize, m: &TwMorphism) -> Result<SVec> {
        let fld = self.base.field();
        let mut acc = Accum::new(fld);
        let e = &self.objects[src];
        for ((j, i), v) in &m.entries {
            for (g, c) in v {
                let idx = *self.raw_index.get(&(src, tgt, *j, *i, *g)).ok_or_else(|| {
                    Error::Structure(format!("raw entry ({j},{i}) of `{}` is out of range", self.base.gen(*g).name))
                })?;
                if self.raw[idx].is_some() {
                    acc.add(idx, c);
                    continue;
                }
                // pivot: (0,0,e) = (-1)^{σ_0} (u - Σ_{i≥1} (-1)^{σ_i} (i,i,e_i))
                let s0 = fld.sign(e.summands[0].1.rem_euclid(2) == 1);
                let c0 = fld.mul(&s0, c);
                acc.add(idx, &c0);
                for (k, &(o, sk)) in e.summands.iter().enumerate().skip(1) {
                    let id = self.raw_index[&(src, src, k, k, self.base.unit(o))];
                    let sk = fld.sign(sk.rem_euclid(2) == 1);
                    acc.add(id, &fld.neg(&fld.mul(&sk, &c0)));
                }
            }
        }
        Ok(acc.finish())
    }

    /// Verifies that each `Σ (-1)^{σ_i} e_i` is a strict unit for the twisted products.
    fn check_units(&self) -> Result<()> {
        let fld = self.base.field();
        for (ei, e) in self.objects.iter().enumerate() {
            let u = e.identity(&self.base);
            if !tw_mu_unchecked(&self.base, &[e, e], &[&u]).is_zero() {
                return Err(Error::Structure(format!("identity of `{}` is not closed", e.name)));
            }
            for (g, gen) in self.cat.gens().iter().enumerate() {
                if self.raw[g].is_none() {
                    continue;
                }
                let a = self.raw_of_gen(&self.cat, g);
                if gen.tgt == ei {
                    let src = &self.objects[gen.src];
                    let got = tw_mu_unchecked(&self.base, &[src, e, e], &[&a, &u]);
                    let want = scale(&fld, &a, gen.deg.rem_euclid(2) == 1);
                    if got != want {
                        return Err(Error::Structure(format!("left unit law fails for `{}`", gen.name)));
                    }
                }
                if gen.src == ei {
                    let tgt = &self.objects[gen.tgt];
                    let got = tw_mu_unchecked(&self.base, &[e, e, tgt], &[&u, &a]);
                    if got != a {
                        return Err(Error::Structure(format!("right unit law fails for `{}`", gen.name)));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn cat(&self) -> &AInfCategory {
        &self.cat
    }
    pub fn base(&self) -> &AInfCategory {
        &self.base
    }
    pub fn objects(&self) -> &[TwObject] {
        &self.objects
    }
    pub fn object_index(&self, name: &str) -> Result<usize> {
        self.cat.object_index(name)
    }

    /// `hom_Tw(E, F)` as a complex.
    pub fn tw_hom(&self, e: usize, f: usize) -> Result<crate::complex::Complex> {
        self.cat.hom(e, f)
    }

    /// Acyclicity of `hom(Z, X)` and `hom(X, Z)` for every object in the fragment.
    pub fn is_zero_object(&self, z: usize) -> Result<bool> {
        for x in 0..self.objects.len() {
            if !self.cat.hom(z, x)?.is_acyclic() || !self.cat.hom(x, z)?.is_acyclic() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn scale(f: &crate::scalar::Field, m: &TwMorphism, negate: bool) -> TwMorphism {
    if !negate {
        return m.clone();
    }
    TwMorphism::cleaned(
        m.entries.iter().map(|(k, v)| (*k, crate::linalg::sv_scale(f, &f.from_i64(-1), v))).collect(),
    )
}

/// Twisted complex of twisted complexes: summands `E_a[s_a]` taken from a
/// fragment, with `δ(a, b)` a fragment element `E_b → E_a` of shifted degree 1.
#[derive(Clone, Debug)]
pub struct NestedTwObject {
    pub name: String,
    pub summands: Vec<(usize, i64)>,
    pub delta: BTreeMap<(usize, usize), SVec>,
}

/// Flattens a nested twisted complex into a twisted complex over the base:
/// the summands are concatenated with their shifts added, inner differentials
/// sit on the diagonal blocks and the outer `δ` fills the blocks below.
pub fn flatten(frag: &TwFragment, nested: &NestedTwObject) -> Result<TwObject> {
    let base = frag.base();
    let mut summands = Vec::new();
    let mut offsets = Vec::new();
    for &(e, s) in &nested.summands {
        offsets.push(summands.len());
        summands.extend(frag.objects()[e].summands.iter().map(|&(o, t)| (o, t + s)));
    }
    let mut delta: BTreeMap<(usize, usize), SVec> = BTreeMap::new();
    for (a, &(e, _)) in nested.summands.iter().enumerate() {
        for ((i, j), v) in &frag.objects()[e].delta {
            delta.insert((offsets[a] + i, offsets[a] + j), v.clone());
        }
    }
    let fld = base.field();
    for ((a, b), v) in &nested.delta {
        if a <= b {
            return Err(Error::Structure("nested δ must be strictly lower-triangular".into()));
        }
        let sb = nested.summands[*b].1;
        let raw = frag.to_raw(v);
        for ((j, i), w) in raw.entries {
            let w = crate::linalg::sv_scale(&fld, &fld.sign(sb.rem_euclid(2) == 1), &w);
            let key = (offsets[*a] + i, offsets[*b] + j);
            let cur = delta.remove(&key).unwrap_or_default();
            let sum = crate::linalg::sv_axpy(&fld, &cur, &fld.one(), &w);
            if !sum.is_empty() {
                delta.insert(key, sum);
            }
        }
    }
    TwObject::new(base, &nested.name, summands, delta)
}

/// The nested object as an object of Tw of the fragment, for comparison.
pub fn nested_as_tw(frag: &TwFragment, nested: &NestedTwObject) -> Result<TwObject> {
    TwObject::new(frag.cat(), &nested.name, nested.summands.clone(), nested.delta.clone())
}

fn functor_arity(f: &AInfFunctor) -> usize {
    f.components().keys().map(|k| k.len()).max().unwrap_or(1).max(1)
}

/// `F(E)`: summands go through the object map and `δ` becomes
/// `Σ F^k(δ, …, δ)`.
pub fn tw_image(f: &AInfFunctor, e: &TwObject, name: &str) -> Result<TwObject> {
    let eval = |args: &[&SVec]| f.apply_lin(args);
    let fld = f.target().field();
    let raw = thread(&eval, fld, functor_arity(f), false, &[e], &[]);
    let summands = e.summands.iter().map(|&(o, s)| (f.object_map()[o], s)).collect();
    let delta = raw.entries.into_iter().map(|((j, i), v)| ((i, j), v)).collect();
    TwObject::new(f.target(), name, summands, delta)
}

/// `F_Tw^k` on raw morphisms: `Σ F^{k+i}(δ, …, a_k, δ, …, a_1, δ, …)`.
/// `objs` are the source objects `E_0, …, E_k`, `args` outermost first.
pub fn tw_functor_map(f: &AInfFunctor, objs: &[&TwObject], args: &[&TwMorphism]) -> Result<TwMorphism> {
    if objs.len() != args.len() + 1 || args.is_empty() {
        return Err(Error::Invalid("a functor component needs k morphisms between k+1 objects".into()));
    }
    let eval = |a: &[&SVec]| f.apply_lin(a);
    let inner_first: Vec<&TwMorphism> = args.iter().rev().copied().collect();
    Ok(thread(&eval, f.target().field(), functor_arity(f), false, objs, &inner_first))
}

/// The functor `Tw F` restricted to a source fragment, landing in the target
/// fragment spanned by the images of its objects.
#[derive(Clone, Debug)]
pub struct InducedFunctor {
    pub target: TwFragment,
    pub functor: AInfFunctor,
}

pub fn induced_functor(f: &AInfFunctor, source: &TwFragment) -> Result<InducedFunctor> {
    let base_b = f.target();
    let mut extra: Vec<TwObject> = Vec::new();
    let mut obj_map = Vec::new();
    for (k, e) in source.objects().iter().enumerate() {
        if k < source.base().num_objects() {
            obj_map.push(f.object_map()[k]);
            continue;
        }
        let img = tw_image(f, e, &format!("F({})", e.name))?;
        obj_map.push(base_b.num_objects() + extra.len());
        extra.push(img);
    }
    let target = TwFragment::new(base_b, extra)?;
    let scat = source.cat();
    let mut comps = BTreeMap::new();
    for len in 1..=functor_arity(f) {
        let mut err = None;
        scat.for_each_chain(len, &|g| !scat.is_unit(g), &mut |args| {
            if err.is_some() {
                return;
            }
            let raws: Vec<TwMorphism> = args.iter().map(|&g| source.raw_of_gen(scat, g)).collect();
            let mut objs: Vec<&TwObject> = vec![&source.objects()[scat.gen(args[args.len() - 1]).src]];
            for &g in args.iter().rev() {
                objs.push(&source.objects()[scat.gen(g).tgt]);
            }
            let refs: Vec<&TwMorphism> = raws.iter().collect();
            let out = tw_functor_map(f, &objs, &refs)
                .and_then(|m| target.from_raw(obj_map[scat.gen(args[args.len() - 1]).src], obj_map[scat.gen(args[0]).tgt], &m));
            match out {
                Ok(v) if !v.is_empty() => {
                    comps.insert(args.to_vec(), v);
                }
                Ok(_) => {}
                Err(e) => err = Some(e),
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
    }
    let functor = AInfFunctor::new(scat.clone(), target.cat().clone(), obj_map, comps)?;
    Ok(InducedFunctor { target, functor })
}

/// Outcome of comparing `cone(F f)` with the image of `cone(f)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessReport {
    /// Ranks of `hom(X, -)` and `hom(-, X)` agree for every base object `X`.
    pub ranks_match: bool,
    /// The summand-wise identity `cone(F f) → F(cone f)` is closed.
    pub comparison_closed: bool,
    /// The cone of that comparison is a zero object.
    pub comparison_quasi_iso: bool,
}

impl ExactnessReport {
    pub fn passed(&self) -> bool {
        self.ranks_match && self.comparison_closed && self.comparison_quasi_iso
    }
}

impl std::fmt::Display for ExactnessReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "ranks_match={} comparison_closed={} comparison_quasi_iso={}",
            self.ranks_match, self.comparison_closed, self.comparison_quasi_iso
        )
    }
}

/// Checks that `F` sends the cone sequence of closed degree-0 `m: E → E'` to
/// a cone sequence: `cone(F m)` is compared with `F(cone m)` through the
/// summand-wise identity (both have summands `F(E)[1] ⊕ F(E')`).
pub fn check_exactness(f: &AInfFunctor, e: &TwObject, e2: &TwObject, m: &TwMorphism) -> Result<ExactnessReport> {
    let cone = tw_cone(f.source(), e, e2, m, "C")?;
    let image = tw_image(f, &cone.cone, "F(C)")?;
    check_exactness_against(f, e, e2, m, &image)
}

/// As [`check_exactness`], but with an arbitrary stand-in for `F(cone m)`.
pub fn check_exactness_against(
    f: &AInfFunctor,
    e: &TwObject,
    e2: &TwObject,
    m: &TwMorphism,
    image: &TwObject,
) -> Result<ExactnessReport> {
    let b = f.target();
    let fe = tw_image(f, e, "F(E)")?;
    let fe2 = tw_image(f, e2, "F(E')")?;
    let fm = tw_functor_map(f, &[e, e2], &[m])?;
    let d = tw_cone(b, &fe, &fe2, &fm, "D")?.cone;
    let mut image = image.clone();
    image.name = "R".into();
    let frag = TwFragment::new(b, vec![d.clone(), image.clone()])?;
    let (di, ri) = (b.num_objects(), b.num_objects() + 1);
    let mut ranks_match = true;
    for x in 0..b.num_objects() {
        ranks_match &= frag.tw_hom(x, di)?.cohomology_ranks() == frag.tw_hom(x, ri)?.cohomology_ranks();
        ranks_match &= frag.tw_hom(di, x)?.cohomology_ranks() == frag.tw_hom(ri, x)?.cohomology_ranks();
    }
    let no = ExactnessReport { ranks_match, comparison_closed: false, comparison_quasi_iso: false };
    if d.summands != image.summands {
        return Ok(no);
    }
    let phi = d.identity(b);
    if !tw_mu(b, &[&d, &image], &[&phi])?.is_zero() {
        return Ok(no);
    }
    let c = tw_cone(b, &d, &image, &phi, "K")?.cone;
    let check = TwFragment::new(b, vec![c])?;
    let z = check.cat().num_objects() - 1;
    Ok(ExactnessReport { ranks_match, comparison_closed: true, comparison_quasi_iso: check.is_zero_object(z)? })
}
