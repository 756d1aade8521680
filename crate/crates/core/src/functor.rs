//! A∞-functors between finite categories.
//!
//! Components are stored on non-unit generator tuples, outermost first. The
//! functor is strictly unital: `F¹` sends identities to identities and every
//! higher component with an identity argument vanishes.

use std::collections::BTreeMap;
use std::fmt;

use crate::category::{AInfCategory, Generator};
use crate::complex::ChainMap;
use crate::error::{Error, Result};
use crate::linalg::{sv_axpy, sv_sub, Accum, Matrix, SVec};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInfFunctor {
    source: AInfCategory,
    target: AInfCategory,
    obj_map: Vec<usize>,
    comps: BTreeMap<Vec<usize>, SVec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorFailure {
    pub args: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorReport {
    pub arity_bound: usize,
    pub instances: usize,
    pub failure: Option<FunctorFailure>,
}

impl FunctorReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for FunctorReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "pass ({} instances up to arity {})", self.instances, self.arity_bound),
            Some(x) => write!(f, "fail at ({}): {} != {}", x.args.join(", "), x.lhs, x.rhs),
        }
    }
}

/// Outcome of [`AInfFunctor::is_equivalence`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Yes,
    No(String),
    /// Essential surjectivity could not be decided (rational field without
    /// witnesses, or a search beyond the cap).
    Undecided(String),
}

/// A user-supplied witness that target object `target` is isomorphic to the
/// image of `source`: `u: F(source) → target` and `v: target → F(source)`.
#[derive(Clone, Debug)]
pub struct Witness {
    pub target: usize,
    pub source: usize,
    pub u: SVec,
    pub v: SVec,
}

/// Default cap on the total dimension of the two hom spaces searched for an
/// isomorphism witness.
pub const DEFAULT_WITNESS_CAP: usize = 12;

impl AInfFunctor {
    /// Validates endpoints and degrees of every component.
    pub fn new(
        source: AInfCategory,
        target: AInfCategory,
        obj_map: Vec<usize>,
        comps: BTreeMap<Vec<usize>, SVec>,
    ) -> Result<Self> {
        if source.field() != target.field() {
            return Err(Error::FieldMismatch(source.field(), target.field()));
        }
        if obj_map.len() != source.num_objects() || obj_map.iter().any(|&o| o >= target.num_objects()) {
            return Err(Error::Structure("object map has the wrong size or range".into()));
        }
        for (args, v) in &comps {
            if args.is_empty() || args.iter().any(|&g| g >= source.gens().len() || source.is_unit(g)) {
                return Err(Error::Structure("functor components live on non-unit generator tuples".into()));
            }
            let (x, y) = source
                .chain_ends(args)
                .ok_or_else(|| Error::Structure(format!("({}) is not composable", source.fmt_args(args))))?;
            let want = source.tuple_degree(args) + 1 - args.len() as i64;
            for (h, _) in v {
                let g = target.gen(*h);
                if g.src != obj_map[x] || g.tgt != obj_map[y] {
                    return Err(Error::Structure(format!(
                        "F({}) leaves hom(F{}, F{})",
                        source.fmt_args(args),
                        source.objects()[x],
                        source.objects()[y]
                    )));
                }
                if g.deg != want {
                    return Err(Error::DegreeMismatch(format!("F({}) has degree {}, expected {want}", source.fmt_args(args), g.deg)));
                }
            }
        }
        let comps = comps.into_iter().filter(|(_, v)| !v.is_empty()).collect();
        Ok(AInfFunctor { source, target, obj_map, comps })
    }

    /// A functor with only a linear component, given per non-unit generator.
    pub fn strict(source: AInfCategory, target: AInfCategory, obj_map: Vec<usize>, images: BTreeMap<usize, SVec>) -> Result<Self> {
        let comps = images.into_iter().map(|(g, v)| (vec![g], v)).collect();
        Self::new(source, target, obj_map, comps)
    }

    pub fn identity(cat: &AInfCategory) -> Self {
        let f = cat.field();
        let comps = (0..cat.gens().len()).filter(|&g| !cat.is_unit(g)).map(|g| (vec![g], vec![(g, f.one())])).collect();
        AInfFunctor { source: cat.clone(), target: cat.clone(), obj_map: (0..cat.num_objects()).collect(), comps }
    }

    /// The strict functor sending objects and generators to the target's
    /// ones with the same names.
    pub fn by_names(source: &AInfCategory, target: &AInfCategory) -> Result<Self> {
        let f = source.field();
        let obj_map = source.objects().iter().map(|o| target.object_index(o)).collect::<Result<_>>()?;
        let mut images = BTreeMap::new();
        for (g, gen) in source.gens().iter().enumerate() {
            if !source.is_unit(g) {
                images.insert(g, vec![(target.gen_index(&gen.name)?, f.one())]);
            }
        }
        Self::strict(source.clone(), target.clone(), obj_map, images)
    }

    pub fn source(&self) -> &AInfCategory {
        &self.source
    }
    pub fn target(&self) -> &AInfCategory {
        &self.target
    }
    pub fn object_map(&self) -> &[usize] {
        &self.obj_map
    }
    pub fn components(&self) -> &BTreeMap<Vec<usize>, SVec> {
        &self.comps
    }

    pub fn is_strict(&self) -> bool {
        self.comps.keys().all(|k| k.len() == 1)
    }

    /// `F^k` on a generator tuple, outermost first.
    pub fn apply(&self, args: &[usize]) -> SVec {
        if args.iter().any(|&g| self.source.is_unit(g)) {
            if args.len() == 1 {
                let x = self.source.gen(args[0]).src;
                return vec![(self.target.unit(self.obj_map[x]), self.target.field().one())];
            }
            return Vec::new();
        }
        self.comps.get(args).cloned().unwrap_or_default()
    }

    /// `F¹` on an element.
    pub fn apply1(&self, v: &SVec) -> SVec {
        self.apply_lin(&[v])
    }

    /// Multilinear extension of [`Self::apply`].
    pub fn apply_lin(&self, args: &[&SVec]) -> SVec {
        let f = self.target.field();
        let mut acc = Accum::new(f);
        let mut idx = Vec::with_capacity(args.len());
        self.apply_rec(args, &mut idx, f.one(), &mut acc);
        acc.finish()
    }

    fn apply_rec(&self, args: &[&SVec], idx: &mut Vec<usize>, coef: Scalar, acc: &mut Accum) {
        if idx.len() == args.len() {
            acc.add_scaled(&coef, &self.apply(idx));
            return;
        }
        let f = self.target.field();
        for (g, c) in args[idx.len()] {
            if let Some(&prev) = idx.last() {
                if self.source.gen(prev).src != self.source.gen(*g).tgt {
                    continue;
                }
            }
            idx.push(*g);
            self.apply_rec(args, idx, f.mul(&coef, c), acc);
            idx.pop();
        }
    }

    /// Both sides of the functor equation on one tuple (outermost first):
    /// `Σ μ_B(F(…), …, F(…))` and `Σ (-1)^{✠_n} F(…, μ_A(…), a_n, …, a_1)`.
    fn equation_sides(&self, args: &[usize]) -> (SVec, SVec) {
        let f = self.target.field();
        let d = args.len();
        let mut lhs = Vec::new();
        // compositions of d into consecutive blocks, encoded by cut bits
        for cuts in 0u64..(1u64 << (d - 1)) {
            let mut blocks = Vec::new();
            let mut start = 0;
            for i in 1..=d {
                if i == d || cuts & (1 << (i - 1)) != 0 {
                    blocks.push(self.apply(&args[start..i]));
                    start = i;
                }
            }
            let refs: Vec<&SVec> = blocks.iter().collect();
            lhs = sv_axpy(&f, &lhs, &f.one(), &self.target.mu_lin(&refs));
        }
        let mut rhs = Vec::new();
        let mut dagger = 0i64;
        for n in 0..d {
            let sign = f.sign(dagger.rem_euclid(2) == 1);
            for m in 1..=d - n {
                let (lo, hi) = (d - n - m, d - n);
                let inner = self.source.mu(&args[lo..hi]);
                if inner.is_empty() {
                    continue;
                }
                let singles: Vec<SVec> = args.iter().map(|&g| vec![(g, f.one())]).collect();
                let mut refs: Vec<&SVec> = singles[..lo].iter().collect();
                refs.push(&inner);
                refs.extend(singles[hi..].iter());
                rhs = sv_axpy(&f, &rhs, &sign, &self.apply_lin(&refs));
            }
            dagger += self.source.gen(args[d - 1 - n]).deg - 1;
        }
        (lhs, rhs)
    }

    /// Checks the functor equations on every composable generator tuple of
    /// length at most `arity_bound`.
    pub fn check(&self, arity_bound: usize) -> FunctorReport {
        let mut instances = 0;
        let mut failure = None;
        for len in 1..=arity_bound {
            self.source.for_each_chain(len, &|_| true, &mut |args| {
                if failure.is_some() {
                    return;
                }
                instances += 1;
                let (lhs, rhs) = self.equation_sides(args);
                if lhs != rhs {
                    failure = Some(FunctorFailure {
                        args: args.iter().map(|&g| self.source.gen(g).name.clone()).collect(),
                        lhs: self.target.fmt_vec(&lhs),
                        rhs: self.target.fmt_vec(&rhs),
                    });
                }
            });
            if failure.is_some() {
                break;
            }
        }
        FunctorReport { arity_bound, instances, failure }
    }

    /// `F¹` as a chain map `hom_A(x, y) → hom_B(Fx, Fy)`.
    pub fn linear_map(&self, x: usize, y: usize) -> Result<ChainMap> {
        let (fx, fy) = (self.obj_map[x], self.obj_map[y]);
        let src = self.source.hom(x, y)?;
        let tgt = self.target.hom(fx, fy)?;
        let f = self.source.field();
        let mut comps = BTreeMap::new();
        for n in src.degrees() {
            let cols = self
                .source
                .hom_basis(x, y)
                .iter()
                .filter(|&&g| self.source.gen(g).deg == n)
                .map(|&g| self.target.to_hom_vector(&self.apply(&[g])))
                .collect();
            comps.insert(n, Matrix::from_columns(f, tgt.dim(n), cols)?);
        }
        ChainMap::new(src, tgt, 0, comps)
    }

    /// Quasi-equivalence test: `F¹` is a quasi-isomorphism on every hom
    /// complex, and every target object is isomorphic in `H⁰` to an image.
    /// Over a prime field the isomorphisms are searched exhaustively within
    /// `cap`; otherwise they must be among `witnesses`.
    pub fn is_equivalence(&self, witnesses: &[Witness], cap: usize) -> Result<Equivalence> {
        let (a, b) = (&self.source, &self.target);
        for x in 0..a.num_objects() {
            for y in 0..a.num_objects() {
                if !self.linear_map(x, y)?.is_quasi_iso()? {
                    return Ok(Equivalence::No(format!(
                        "F¹ is not a quasi-isomorphism on hom({}, {})",
                        a.objects()[x],
                        a.objects()[y]
                    )));
                }
            }
        }
        let mut undecided = Vec::new();
        for t in 0..b.num_objects() {
            if self.obj_map.contains(&t) {
                continue;
            }
            if let Some(w) = witnesses.iter().find(|w| w.target == t) {
                if is_h0_iso(b, self.obj_map[w.source], t, &w.u, &w.v)? {
                    continue;
                }
                return Ok(Equivalence::No(format!("the witness for `{}` is not an isomorphism", b.objects()[t])));
            }
            if !b.field().is_finite() {
                undecided.push(format!("no witness for `{}` over Q", b.objects()[t]));
                continue;
            }
            match search_iso(b, &self.obj_map, t, cap)? {
                Search::Found => {}
                Search::None => {
                    return Ok(Equivalence::No(format!("`{}` is not isomorphic to any image", b.objects()[t])));
                }
                Search::TooLarge(msg) => undecided.push(msg),
            }
        }
        if undecided.is_empty() {
            Ok(Equivalence::Yes)
        } else {
            Ok(Equivalence::Undecided(undecided.join("; ")))
        }
    }
}

/// Whether closed degree-0 `u: s → t`, `v: t → s` are mutually inverse in `H⁰`.
pub fn is_h0_iso(cat: &AInfCategory, s: usize, t: usize, u: &SVec, v: &SVec) -> Result<bool> {
    let f = cat.field();
    for (w, x, y) in [(u, s, t), (v, t, s)] {
        for (g, _) in w {
            let gen = cat.gen(*g);
            if gen.src != x || gen.tgt != y || gen.deg != 0 {
                return Err(Error::Invalid("witness lies in the wrong hom space".into()));
            }
        }
        if !cat.mu_lin(&[w]).is_empty() {
            return Ok(false);
        }
    }
    let exact_minus_unit = |prod: SVec, o: usize| -> Result<bool> {
        let diff = sv_sub(&f, &prod, &vec![(cat.unit(o), f.one())]);
        let h = cat.hom(o, o)?;
        Ok(h.cohomology_at(0).is_exact(&cat.to_hom_vector(&diff)))
    };
    Ok(exact_minus_unit(cat.mu_lin(&[v, u]), s)? && exact_minus_unit(cat.mu_lin(&[u, v]), t)?)
}

enum Search {
    Found,
    None,
    TooLarge(String),
}

fn search_iso(b: &AInfCategory, images: &[usize], t: usize, cap: usize) -> Result<Search> {
    let f = b.field();
    let elements = f.elements()?;
    let mut sources: Vec<usize> = images.to_vec();
    sources.sort();
    sources.dedup();
    let mut too_large = Vec::new();
    for s in sources {
        let (hu, hv) = (b.hom(s, t)?, b.hom(t, s)?);
        if hu.total_dim() + hv.total_dim() > cap {
            too_large.push(format!(
                "hom({0}, {1}) and hom({1}, {0}) exceed the witness cap {cap}",
                b.objects()[s],
                b.objects()[t]
            ));
            continue;
        }
        let (cu, cv) = (hu.cohomology_at(0), hv.cohomology_at(0));
        let reps: Vec<(usize, &SVec)> =
            cu.reps.iter().map(|r| (0, r)).chain(cv.reps.iter().map(|r| (1, r))).collect();
        let mut coeffs = vec![0usize; reps.len()];
        loop {
            let (mut u, mut v) = (SVec::new(), SVec::new());
            for (k, &(side, r)) in reps.iter().enumerate() {
                if side == 0 {
                    u = sv_axpy(&f, &u, &elements[coeffs[k]], r);
                } else {
                    v = sv_axpy(&f, &v, &elements[coeffs[k]], r);
                }
            }
            let u = b.from_hom_vector(s, t, 0, &u);
            let v = b.from_hom_vector(t, s, 0, &v);
            if is_h0_iso(b, s, t, &u, &v)? {
                return Ok(Search::Found);
            }
            let mut i = 0;
            loop {
                if i == coeffs.len() {
                    break;
                }
                coeffs[i] += 1;
                if coeffs[i] < elements.len() {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
            if i == coeffs.len() {
                break;
            }
        }
    }
    if too_large.is_empty() {
        Ok(Search::None)
    } else {
        Ok(Search::TooLarge(too_large.join("; ")))
    }
}

/// The full subcategory on the named objects and its inclusion functor.
pub fn full_subcategory(cat: &AInfCategory, names: &[&str]) -> Result<(AInfCategory, AInfFunctor)> {
    let objs: Vec<usize> = names.iter().map(|n| cat.object_index(n)).collect::<Result<_>>()?;
    let new_obj: BTreeMap<usize, usize> = objs.iter().enumerate().map(|(i, &o)| (o, i)).collect();
    let mut gens = Vec::new();
    let mut new_gen = BTreeMap::new();
    for (g, gen) in cat.gens().iter().enumerate() {
        if let (Some(&s), Some(&t)) = (new_obj.get(&gen.src), new_obj.get(&gen.tgt)) {
            new_gen.insert(g, gens.len());
            gens.push(Generator { name: gen.name.clone(), src: s, tgt: t, deg: gen.deg });
        }
    }
    let units = objs.iter().map(|&o| new_gen[&cat.unit(o)]).collect();
    let mut mu = Vec::new();
    for (args, v) in cat.mu_table() {
        if args.iter().all(|g| new_gen.contains_key(g)) {
            let args = args.iter().map(|g| new_gen[g]).collect();
            let v = v.iter().map(|(g, c)| (new_gen[g], c.clone())).collect();
            mu.push((args, v));
        }
    }
    let objects = objs.iter().map(|&o| cat.objects()[o].clone()).collect();
    let sub = AInfCategory::new(cat.field(), objects, gens, units, mu)?;
    let f = cat.field();
    let images = new_gen.iter().filter(|(g, _)| !cat.is_unit(**g)).map(|(&g, &h)| (h, vec![(g, f.one())])).collect();
    let inc = AInfFunctor::strict(sub.clone(), cat.clone(), objs, images)?;
    Ok((sub, inc))
}
