//! Length-truncated cochain complexes built from the structure maps:
//! Hochschild cochains, morphisms between two functors, and the module-hom
//! complexes of the Yoneda embedding.
//!
//! A cochain basis element is a key `(z, τ, o)`: the value `o` on the input
//! tuple `τ` (outermost first) whose innermost source object is `z`. Its
//! degree is `|o| - Σ|τ| + p` with `p` the number of chain arguments. Every
//! differential term keeps or raises `p`, so cutting at `p ≤ N` is a quotient
//! complex; see [`cochain_exact_length`] for when a cut is exact.
//!
//! With `‖T‖ = |T| - 1` the differential is the bracket with `μ`:
//!
//! ```text
//! (δT)(…) = Σ (-1)^{‖T‖·✠(right)} μ(G(…), …, T(…), F(…), …)
//!         - (-1)^{‖T‖} Σ (-1)^{✠(right)} T(…, μ(…), …)
//! ```

use std::collections::{BTreeMap, HashMap};

use crate::bar::{stabilize, Certificate, Window};
use crate::category::{AInfCategory, Generator};
use crate::complex::{Complex, GradedSpace};
use crate::error::{Error, Result};
use crate::functor::AInfFunctor;
use crate::linalg::{sv_axpy, Accum, Matrix, SVec};
use crate::scalar::{Field, Scalar};

/// `(innermost source object, input tuple, output generator)`.
pub type CochainKey = (usize, Vec<usize>, usize);
pub type Cochain = BTreeMap<CochainKey, Scalar>;

/// A truncated cochain complex with its key basis.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    pub complex: Complex,
    pub keys: BTreeMap<i64, Vec<CochainKey>>,
    index: HashMap<CochainKey, (i64, usize)>,
    pub length: usize,
}

impl CochainComplex {
    pub fn position(&self, key: &CochainKey) -> Option<(i64, usize)> {
        self.index.get(key).copied()
    }

    pub fn vector(&self, n: i64, c: &Cochain) -> Result<SVec> {
        let mut acc = Accum::new(self.complex.field());
        for (k, v) in c {
            match self.index.get(k) {
                Some(&(d, i)) if d == n => acc.add(i, v),
                Some(_) => return Err(Error::DegreeMismatch("cochain in the wrong degree".into())),
                None => {}
            }
        }
        Ok(acc.finish())
    }

    pub fn cochain(&self, n: i64, v: &SVec) -> Cochain {
        let Some(keys) = self.keys.get(&n) else { return Cochain::new() };
        v.iter().map(|(i, c)| (keys[*i].clone(), c.clone())).collect()
    }

    /// The length-0 part of a cochain, per object.
    pub fn length_zero(c: &Cochain) -> BTreeMap<usize, SVec> {
        let mut out: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
        for ((z, tau, o), v) in c {
            if tau.is_empty() {
                out.entry(*z).or_default().push((*o, v.clone()));
            }
        }
        for v in out.values_mut() {
            v.sort_by_key(|e| e.0);
        }
        out
    }
}

/// Adjacency of the generators a cochain may take as inputs.
struct Quiver {
    by_src: Vec<Vec<usize>>,
    by_tgt: Vec<Vec<usize>>,
}

impl Quiver {
    fn new(cat: &AInfCategory, allow: &dyn Fn(usize) -> bool) -> Self {
        let mut by_src = vec![Vec::new(); cat.num_objects()];
        let mut by_tgt = vec![Vec::new(); cat.num_objects()];
        for (g, gen) in cat.gens().iter().enumerate() {
            if allow(g) {
                by_src[gen.src].push(g);
                by_tgt[gen.tgt].push(g);
            }
        }
        Quiver { by_src, by_tgt }
    }

    /// Tuples of `len` generators (outermost first) whose innermost source is `obj`.
    fn outward(&self, cat: &AInfCategory, obj: usize, len: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(q: &Quiver, cat: &AInfCategory, obj: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == len {
                out.push(cur.iter().rev().copied().collect());
                return;
            }
            for &g in &q.by_src[obj] {
                cur.push(g);
                rec(q, cat, cat.gen(g).tgt, len, cur, out);
                cur.pop();
            }
        }
        rec(self, cat, obj, len, &mut cur, &mut out);
        out
    }

    /// Tuples of `len` generators (outermost first) whose outermost target is `obj`.
    fn inward(&self, cat: &AInfCategory, obj: usize, len: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(q: &Quiver, cat: &AInfCategory, obj: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == len {
                out.push(cur.clone());
                return;
            }
            for &g in &q.by_tgt[obj] {
                cur.push(g);
                rec(q, cat, cat.gen(g).src, len, cur, out);
                cur.pop();
            }
        }
        rec(self, cat, obj, len, &mut cur, &mut out);
        out
    }

    /// Longest composable tuple, or `None` when tuples can be arbitrarily long.
    fn longest_chain(&self, cat: &AInfCategory) -> Option<usize> {
        fn visit(q: &Quiver, cat: &AInfCategory, u: usize, state: &mut [u8], best: &mut [usize]) -> Option<usize> {
            match state[u] {
                1 => return None,
                2 => return Some(best[u]),
                _ => {}
            }
            state[u] = 1;
            let mut longest = 0;
            for &g in &q.by_src[u] {
                longest = longest.max(1 + visit(q, cat, cat.gen(g).tgt, state, best)?);
            }
            state[u] = 2;
            best[u] = longest;
            Some(longest)
        }
        let n = self.by_src.len();
        let (mut state, mut best) = (vec![0u8; n], vec![0usize; n]);
        let mut longest = 0;
        for u in 0..n {
            longest = longest.max(visit(self, cat, u, &mut state, &mut best)?);
        }
        Some(longest)
    }
}

/// Every way to cut `len` consecutive arguments into nonempty blocks.
fn compositions(len: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return vec![vec![]];
    }
    (0u64..(1u64 << (len - 1)))
        .map(|cuts| {
            let mut blocks = Vec::new();
            let mut size = 1;
            for i in 1..len {
                if cuts & (1 << (i - 1)) != 0 {
                    blocks.push(size);
                    size = 1;
                } else {
                    size += 1;
                }
            }
            blocks.push(size);
            blocks
        })
        .collect()
}

fn dagger(cat: &AInfCategory, args: &[usize]) -> i64 {
    args.iter().map(|&g| cat.gen(g).deg - 1).sum()
}

/// For each generator `g`, the tuples `V` with `μ(V)` hitting `g`.
fn reverse_mu(cat: &AInfCategory, with_units: bool) -> Vec<Vec<(Vec<usize>, Scalar)>> {
    let mut rev = vec![Vec::new(); cat.gens().len()];
    let mut push = |args: Vec<usize>, value: SVec| {
        for (h, c) in value {
            rev[h].push((args.clone(), c));
        }
    };
    for args in cat.mu_table().keys() {
        push(args.clone(), cat.mu(args));
    }
    if with_units {
        for (a, ga) in cat.gens().iter().enumerate() {
            let e = cat.unit(ga.tgt);
            push(vec![e, a], cat.mu(&[e, a]));
            if !cat.is_unit(a) {
                let e = cat.unit(ga.src);
                push(vec![a, e], cat.mu(&[a, e]));
            }
        }
    }
    rev
}

/// An analytic truncation length that is exact in `window`, when inputs are
/// bounded in number or degree. `base` bounds `|o| - |x|` over outputs `o`
/// (and the extra slot `x` of module-hom cochains).
fn cochain_exact_length(longest: Option<usize>, input_degrees: &[i64], base: (i64, i64), window: Window) -> Option<usize> {
    if let Some(n) = longest {
        return Some(n);
    }
    let a_min = *input_degrees.iter().min()?;
    let a_max = *input_degrees.iter().max()?;
    // layer p sits in degrees base - Σ(|a| - 1); the kernel of the cut must
    // miss [lo, hi + 1]
    if a_min >= 2 {
        let mut n = 0i64;
        while base.1 - (n + 1) * (a_min - 1) >= window.lo {
            n += 1;
        }
        return Some(n as usize);
    }
    if a_max <= 0 {
        let mut n = 0i64;
        while base.0 + (n + 1) * (1 - a_max) <= window.hi + 1 {
            n += 1;
        }
        return Some(n as usize);
    }
    None
}

fn degree_range(degs: impl Iterator<Item = i64>) -> (i64, i64) {
    degs.fold((i64::MAX, i64::MIN), |(lo, hi), d| (lo.min(d), hi.max(d)))
}

/// Assembles a complex from keys and a differential given per key.
fn assemble(
    field: Field,
    keys: Vec<(i64, CochainKey)>,
    length: usize,
    mut diff: impl FnMut(&CochainKey, i64) -> Result<Cochain>,
) -> Result<CochainComplex> {
    let mut space = GradedSpace::new();
    let mut by_deg: BTreeMap<i64, Vec<CochainKey>> = BTreeMap::new();
    let mut index = HashMap::new();
    for (d, k) in keys {
        let i = space.push(d, format!("{:?}", k));
        by_deg.entry(d).or_default().push(k.clone());
        index.insert(k, (d, i));
    }
    let mut d_mats = BTreeMap::new();
    for (&n, list) in &by_deg {
        let mut cols = Vec::with_capacity(list.len());
        for k in list {
            let image = diff(k, n)?;
            let mut acc = Accum::new(field);
            for (t, c) in &image {
                match index.get(t) {
                    Some(&(d, i)) if d == n + 1 => acc.add(i, c),
                    Some(_) => return Err(Error::Structure("cochain differential changed degree wrongly".into())),
                    None => return Err(Error::Structure("cochain differential left the basis".into())),
                }
            }
            cols.push(acc.finish());
        }
        d_mats.insert(n, Matrix::from_columns(field, space.dim(n + 1), cols)?);
    }
    let complex = Complex::new(field, space, d_mats)?;
    Ok(CochainComplex { complex, keys: by_deg, index, length })
}

fn add_to(field: &Field, out: &mut Cochain, key: CochainKey, c: &Scalar) {
    let e = out.entry(key).or_insert_with(|| field.zero());
    *e = field.add(e, c);
}

/// The complex of pre-natural transformations `F ⇒ G` truncated at `n`
/// inputs; `reduced` restricts inputs to non-unit generators.
fn transformation_complex(f: &AInfFunctor, g: &AInfFunctor, n: usize, reduced: bool) -> Result<CochainComplex> {
    let (a, b) = (f.source(), f.target());
    if g.source() != a || g.target() != b {
        return Err(Error::Invalid("functors must share source and target".into()));
    }
    let field = a.field();
    let allow = |x: usize| !reduced || !a.is_unit(x);
    let quiver = Quiver::new(a, &allow);
    let rev = reverse_mu(a, !reduced);
    let (fo, go) = (f.object_map(), g.object_map());
    let mut keys = Vec::new();
    for p in 0..=n {
        if p == 0 {
            for z in 0..a.num_objects() {
                for &o in b.hom_basis(fo[z], go[z]) {
                    keys.push((b.gen(o).deg, (z, vec![], o)));
                }
            }
            continue;
        }
        a.for_each_chain(p, &allow, &mut |tau| {
            let z = a.gen(tau[p - 1]).src;
            let y = a.gen(tau[0]).tgt;
            for &o in b.hom_basis(fo[z], go[y]) {
                let deg = b.gen(o).deg - a.tuple_degree(tau) + p as i64;
                keys.push((deg, (z, tau.to_vec(), o)));
            }
        });
    }
    let diff = |(z, sigma, o): &CochainKey, r: i64| -> Result<Cochain> {
        let mut out = Cochain::new();
        let p = sigma.len();
        let norm = r - 1;
        let top = if p == 0 { *z } else { a.gen(sigma[0]).tgt };
        let ov = vec![(*o, field.one())];
        for i in 0..=n - p {
            for j in 0..=n - p - i {
                let lefts = quiver.outward(a, top, i);
                let rights = quiver.inward(a, *z, j);
                for right in &rights {
                    let sign = field.sign((norm * dagger(a, right)).rem_euclid(2) == 1);
                    let z2 = right.last().map_or(*z, |&x| a.gen(x).src);
                    let rblocks_all = compositions(j);
                    for left in &lefts {
                        let mut tau = left.clone();
                        tau.extend_from_slice(sigma);
                        tau.extend_from_slice(right);
                        for lb in compositions(i) {
                            let mut args: Vec<SVec> = Vec::new();
                            let mut at = 0;
                            for s in lb {
                                args.push(g.apply(&left[at..at + s]));
                                at += s;
                            }
                            args.push(ov.clone());
                            for rb in &rblocks_all {
                                let mut full = args.clone();
                                let mut at = 0;
                                for &s in rb {
                                    full.push(f.apply(&right[at..at + s]));
                                    at += s;
                                }
                                if full.iter().any(|v| v.is_empty()) {
                                    continue;
                                }
                                let refs: Vec<&SVec> = full.iter().collect();
                                for (h, c) in b.mu_lin(&refs) {
                                    add_to(&field, &mut out, (z2, tau.clone(), h), &field.mul(&sign, &c));
                                }
                            }
                        }
                    }
                }
            }
        }
        // T(…, μ(V), …)
        let outer = field.neg(&field.sign(norm.rem_euclid(2) == 1));
        for jpos in 0..p {
            let right = &sigma[jpos + 1..];
            let s = field.mul(&outer, &field.sign(dagger(a, right).rem_euclid(2) == 1));
            for (v, c) in &rev[sigma[jpos]] {
                if p - 1 + v.len() > n {
                    continue;
                }
                let mut tau = sigma[..jpos].to_vec();
                tau.extend_from_slice(v);
                tau.extend_from_slice(right);
                add_to(&field, &mut out, (*z, tau, *o), &field.mul(&s, c));
            }
        }
        out.retain(|_, c| !field.is_zero(c));
        Ok(out)
    };
    assemble(field, keys, n, diff)
}

fn transformation_exact_length(f: &AInfFunctor, reduced: bool, window: Window) -> Option<usize> {
    let a = f.source();
    let allow = |x: usize| !reduced || !a.is_unit(x);
    let quiver = Quiver::new(a, &allow);
    let input: Vec<i64> = (0..a.gens().len()).filter(|&x| allow(x)).map(|x| a.gen(x).deg).collect();
    let base = degree_range(f.target().gens().iter().map(|g| g.deg));
    cochain_exact_length(quiver.longest_chain(a), &input, base, window)
}

/// Normalized Hochschild cochains of `A` with at most `n` inputs.
pub fn ch_complex_at(cat: &AInfCategory, n: usize) -> Result<CochainComplex> {
    let id = AInfFunctor::identity(cat);
    transformation_complex(&id, &id, n, true)
}

#[derive(Clone, Debug)]
pub struct Truncated {
    pub cochains: CochainComplex,
    pub certificate: Certificate,
}

fn certified(
    mut build: impl FnMut(usize) -> Result<CochainComplex>,
    window: Window,
    n_max: usize,
    exact: Option<usize>,
) -> Result<Truncated> {
    let mut last: Option<CochainComplex> = None;
    let (_, certificate) = stabilize(
        |n| {
            let c = build(n)?;
            let out = c.complex.clone();
            last = Some(c);
            Ok(out)
        },
        window,
        n_max,
        exact,
    )?;
    let cochains = match last {
        Some(c) if c.length == certificate.n_used => c,
        _ => build(certificate.n_used)?,
    };
    Ok(Truncated { cochains, certificate })
}

/// The Hochschild complex, truncated at the first certified length `≤ n_max`.
pub fn ch_complex(cat: &AInfCategory, n_max: usize, window: Window) -> Result<Truncated> {
    let id = AInfFunctor::identity(cat);
    let exact = transformation_exact_length(&id, true, window);
    certified(|n| transformation_complex(&id, &id, n, true), window, n_max, exact)
}

/// `HH^degree` with representatives.
#[derive(Clone, Debug)]
pub struct HochschildClasses {
    pub degree: i64,
    pub rank: usize,
    pub reps: Vec<Cochain>,
    pub certificate: Certificate,
}

pub fn hh(cat: &AInfCategory, degree: i64, n_max: usize, window: Window) -> Result<HochschildClasses> {
    if degree < window.lo || degree > window.hi {
        return Err(Error::Invalid(format!("degree {degree} lies outside the window")));
    }
    let t = ch_complex(cat, n_max, window)?;
    let h = t.cochains.complex.cohomology_at(degree);
    let reps = h.reps.iter().map(|v| t.cochains.cochain(degree, v)).collect();
    Ok(HochschildClasses { degree, rank: h.rank(), reps, certificate: t.certificate })
}

/// The invertible part of `HH⁰`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnitGroup {
    /// Over a prime field: the number of invertible classes.
    Finite { hh0_rank: usize, order: u128 },
    /// Over the rationals: a class is invertible exactly when its component
    /// at every object is invertible in `H⁰ End(X)`.
    Criterion { hh0_rank: usize, description: String },
}

/// Whether closed degree-0 `eta ∈ hom(x, x)` acts invertibly on `H⁰ End(x)`.
fn invertible_in_h0(cat: &AInfCategory, x: usize, eta: &SVec) -> Result<bool> {
    let end = cat.hom(x, x)?;
    let h = end.cohomology_at(0);
    let mut cols = Vec::new();
    for r in &h.reps {
        let b = cat.from_hom_vector(x, x, 0, r);
        let prod = cat.mu_lin(&[eta, &b]);
        let coords = h
            .class_of(&cat.to_hom_vector(&prod))
            .ok_or_else(|| Error::NotClosed("product of cocycles".into()))?;
        cols.push(coords);
    }
    Ok(Matrix::from_columns(cat.field(), h.rank(), cols)?.rank() == h.rank())
}

pub fn hh0_units(cat: &AInfCategory, n_max: usize) -> Result<UnitGroup> {
    let window = Window::new(0, 0)?;
    let classes = hh(cat, 0, n_max, window)?;
    if !classes.certificate.is_certified() {
        return Err(Error::Invalid("HH⁰ is not certified at this truncation".into()));
    }
    let field = cat.field();
    let r = classes.rank;
    if !field.is_finite() {
        return Ok(UnitGroup::Criterion {
            hh0_rank: r,
            description: "a class is a unit iff its component at each object is invertible in H⁰ End".into(),
        });
    }
    let elements = field.elements()?;
    let p = elements.len() as u128;
    if (r as u32) > 24 || p.checked_pow(r as u32).is_none_or(|n| n > 1 << 24) {
        return Err(Error::SearchTooLarge(format!("{p}^{r} classes")));
    }
    let parts: Vec<BTreeMap<usize, SVec>> = classes.reps.iter().map(CochainComplex::length_zero).collect();
    let mut coeffs = vec![0usize; r];
    let mut order = 0u128;
    loop {
        let mut ok = true;
        for x in 0..cat.num_objects() {
            let mut eta = SVec::new();
            for (i, part) in parts.iter().enumerate() {
                if let Some(v) = part.get(&x) {
                    eta = sv_axpy(&field, &eta, &elements[coeffs[i]], v);
                }
            }
            if !invertible_in_h0(cat, x, &eta)? {
                ok = false;
                break;
            }
        }
        if ok {
            order += 1;
        }
        let mut i = 0;
        while i < r {
            coeffs[i] += 1;
            if coeffs[i] < elements.len() {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
        if i == r {
            break;
        }
    }
    Ok(UnitGroup::Finite { hh0_rank: r, order })
}

/// Morphisms `F ⇒ G` in the functor category, on all (unreduced) input chains.
pub fn nat_complex(f: &AInfFunctor, g: &AInfFunctor, n_max: usize, window: Window) -> Result<Truncated> {
    let exact = transformation_exact_length(f, false, window);
    certified(|n| transformation_complex(f, g, n, false), window, n_max, exact)
}

pub fn nat_complex_at(f: &AInfFunctor, g: &AInfFunctor, n: usize) -> Result<CochainComplex> {
    transformation_complex(f, g, n, false)
}

/// Keys of the module-hom complex `Hom(hom(-, X), hom(-, Y))`: the first
/// input is any generator into `X`, the remaining `p ≤ n` are reduced.
fn yoneda_keys(cat: &AInfCategory, quiver: &Quiver, x: usize, y: usize, n: usize) -> Vec<(i64, CochainKey)> {
    let mut keys = Vec::new();
    for p in 0..=n {
        for (xg, gen) in cat.gens().iter().enumerate() {
            if gen.tgt != x {
                continue;
            }
            for rest in quiver.inward(cat, gen.src, p) {
                let z = rest.last().map_or(gen.src, |&a| cat.gen(a).src);
                let mut tau = vec![xg];
                tau.extend(rest);
                for &o in cat.hom_basis(z, y) {
                    let deg = cat.gen(o).deg - cat.tuple_degree(&tau) + p as i64;
                    keys.push((deg, (z, tau.clone(), o)));
                }
            }
        }
    }
    keys
}

/// `Hom(hom(-, X), hom(-, Y))` truncated at `n` chain inputs.
pub fn yoneda_hom_at(cat: &AInfCategory, x: usize, y: usize, n: usize) -> Result<CochainComplex> {
    let field = cat.field();
    let allow = |g: usize| !cat.is_unit(g);
    let quiver = Quiver::new(cat, &allow);
    let rev = reverse_mu(cat, false);
    // μ(V) hitting the slot: stored products plus μ²(1_X, a) = ±a
    let mut rev_slot = rev.clone();
    for (a, ga) in cat.gens().iter().enumerate() {
        if ga.tgt == x && !cat.is_unit(a) {
            let e = cat.unit(x);
            for (h, c) in cat.mu(&[e, a]) {
                rev_slot[h].push((vec![e, a], c));
            }
        }
    }
    let keys = yoneda_keys(cat, &quiver, x, y, n);
    let diff = |(z, tau, o): &CochainKey, r: i64| -> Result<Cochain> {
        let mut out = Cochain::new();
        let p = tau.len() - 1;
        let norm = r - 1;
        for j in 0..=n - p {
            for right in quiver.inward(cat, *z, j) {
                let sign = field.sign((norm * dagger(cat, &right)).rem_euclid(2) == 1);
                let z2 = right.last().map_or(*z, |&a| cat.gen(a).src);
                let mut args = vec![*o];
                args.extend_from_slice(&right);
                let mut t2 = tau.clone();
                t2.extend_from_slice(&right);
                for (h, c) in cat.mu(&args) {
                    add_to(&field, &mut out, (z2, t2.clone(), h), &field.mul(&sign, &c));
                }
            }
        }
        let outer = field.neg(&field.sign(norm.rem_euclid(2) == 1));
        for jpos in 0..=p {
            let right = &tau[jpos + 1..];
            let s = field.mul(&outer, &field.sign(dagger(cat, right).rem_euclid(2) == 1));
            let table = if jpos == 0 { &rev_slot } else { &rev };
            for (v, c) in &table[tau[jpos]] {
                if p + v.len() - 1 > n {
                    continue;
                }
                if jpos == 0 && cat.gen(v[0]).tgt != x {
                    continue;
                }
                let mut t2 = tau[..jpos].to_vec();
                t2.extend_from_slice(v);
                t2.extend_from_slice(right);
                add_to(&field, &mut out, (*z, t2, *o), &field.mul(&s, c));
            }
        }
        out.retain(|_, c| !field.is_zero(c));
        Ok(out)
    };
    assemble(field, keys, n, diff)
}

fn yoneda_exact_length(cat: &AInfCategory, x: usize, y: usize, window: Window) -> Option<usize> {
    let allow = |g: usize| !cat.is_unit(g);
    let quiver = Quiver::new(cat, &allow);
    let input: Vec<i64> = (0..cat.gens().len()).filter(|&g| allow(g)).map(|g| cat.gen(g).deg).collect();
    let outs = degree_range(cat.gens().iter().filter(|g| g.tgt == y).map(|g| g.deg));
    let slots = degree_range(cat.gens().iter().filter(|g| g.tgt == x).map(|g| g.deg));
    if outs.0 > outs.1 || slots.0 > slots.1 {
        return Some(0);
    }
    cochain_exact_length(quiver.longest_chain(cat), &input, (outs.0 - slots.1, outs.1 - slots.0), window)
}

/// The Yoneda module-hom complex with a certificate.
pub fn yoneda_hom(cat: &AInfCategory, x: usize, y: usize, n_max: usize, window: Window) -> Result<Truncated> {
    let exact = yoneda_exact_length(cat, x, y, window);
    certified(|n| yoneda_hom_at(cat, x, y, n), window, n_max, exact)
}

/// Composition of module maps `S ∘ T` for `T: Y_X → Y_Y`, `S: Y_Y → Y_W`:
/// `(S∘T)(x, a_p, …, a_1) = Σ ± S(T(x, a_p, …, a_{k+1}), a_k, …, a_1)`.
pub fn compose_module_maps(cat: &AInfCategory, s: &Cochain, t: &Cochain) -> Cochain {
    let field = cat.field();
    let mut out = Cochain::new();
    for ((_, tau_t, ot), ct) in t {
        let rt = cochain_degree(cat, tau_t, *ot);
        for ((zs, tau_s, os), cs) in s {
            if tau_s[0] != *ot {
                continue;
            }
            let rs = cochain_degree(cat, tau_s, *os);
            let rest = &tau_s[1..];
            let sign = field.sign(module_sign(cat, rs, rt, cat.gen(*ot).deg, rest));
            let mut tau = tau_t.clone();
            tau.extend_from_slice(rest);
            add_to(&field, &mut out, (*zs, tau, *os), &field.mul(&sign, &field.mul(cs, ct)));
        }
    }
    out.retain(|_, c| !field.is_zero(c));
    out
}

fn cochain_degree(cat: &AInfCategory, tau: &[usize], o: usize) -> i64 {
    cat.gen(o).deg - cat.tuple_degree(tau) + tau.len() as i64 - 1
}

/// Parity of the sign in [`compose_module_maps`]:
/// `|T| + |slot| + |T|·✠(a_k, …, a_1) + |S|·|T|`. The first two terms make
/// `x ↦ (-1)^{|x|} x` a strict unit in the reduced convention.
fn module_sign(cat: &AInfCategory, rs: i64, rt: i64, slot: i64, rest: &[usize]) -> bool {
    (rt + slot + rt * dagger(cat, rest) + rs * rt).rem_euclid(2) == 1
}

/// The identity module map of `hom(-, X)`, `x ↦ (-1)^{|x|} x`.
pub fn module_identity(cat: &AInfCategory, x: usize) -> Cochain {
    let field = cat.field();
    cat.gens()
        .iter()
        .enumerate()
        .filter(|(_, g)| g.tgt == x)
        .map(|(a, g)| ((g.src, vec![a], a), field.sign(g.deg.rem_euclid(2) == 1)))
        .collect()
}

/// The dg-category of truncated module maps between representables: same
/// objects as `A`, homs `yoneda_hom_at(X, Y, n)`, composition of module maps.
pub fn yoneda_dgify(cat: &AInfCategory, n: usize) -> Result<AInfCategory> {
    let field = cat.field();
    let objs = cat.num_objects();
    let mut homs = BTreeMap::new();
    for x in 0..objs {
        for y in 0..objs {
            homs.insert((x, y), yoneda_hom_at(cat, x, y, n)?);
        }
    }
    // generator = (x, y, key); the pivot key (x, [1_X], 1_X) of End(X)
    // stands for the identity module map
    let mut gens = Vec::new();
    let mut gen_of: HashMap<(usize, usize, CochainKey), usize> = HashMap::new();
    let mut units = vec![0; objs];
    for (&(x, y), c) in &homs {
        for (deg, keys) in &c.keys {
            for k in keys {
                let idx = gens.len();
                let pivot = x == y && k.1 == [cat.unit(x)] && k.2 == cat.unit(x);
                let name = if pivot {
                    format!("1_{}", cat.objects()[x])
                } else {
                    let args: Vec<&str> = k.1.iter().map(|&g| cat.gen(g).name.as_str()).collect();
                    format!("{}>{}[{}:{}]", cat.objects()[x], cat.objects()[y], args.join(","), cat.gen(k.2).name)
                };
                if pivot {
                    units[x] = idx;
                }
                gens.push(Generator { name, src: x, tgt: y, deg: *deg });
                gen_of.insert((x, y, k.clone()), idx);
            }
        }
    }
    let ids: Vec<Cochain> = (0..objs).map(|x| module_identity(cat, x)).collect();
    // coordinates of a cochain in the generator basis with pivots replaced
    let to_gens = |x: usize, y: usize, c: &Cochain| -> SVec {
        let mut c = c.clone();
        let mut acc = Accum::new(field);
        if x == y {
            let pivot = (cat.unit(x), vec![cat.unit(x)], cat.unit(x));
            if let Some(cp) = c.get(&pivot).cloned() {
                for (k, v) in &ids[x] {
                    let e = c.entry(k.clone()).or_insert_with(|| field.zero());
                    *e = field.sub(e, &field.mul(&cp, v));
                }
                acc.add(units[x], &cp);
            }
        }
        for (k, v) in &c {
            if !field.is_zero(v) {
                acc.add(gen_of[&(x, y, k.clone())], v);
            }
        }
        acc.finish()
    };
    let mut keys_of = vec![None; gens.len()];
    for ((_, _, k), &i) in &gen_of {
        keys_of[i] = Some(k.clone());
    }
    let cochain_of = |g: usize| -> Cochain {
        let gen = &gens[g];
        if units[gen.src] == g && gen.src == gen.tgt {
            ids[gen.src].clone()
        } else {
            BTreeMap::from([(keys_of[g].clone().expect("key"), field.one())])
        }
    };
    let mut mu = Vec::new();
    for (g, gen) in gens.iter().enumerate() {
        if units[gen.src] == g && gen.src == gen.tgt {
            continue;
        }
        let c = &homs[&(gen.src, gen.tgt)];
        let v = c.vector(gen.deg, &cochain_of(g))?;
        let dv = c.complex.d(gen.deg).apply(&v);
        let d = to_gens(gen.src, gen.tgt, &c.cochain(gen.deg + 1, &dv));
        if !d.is_empty() {
            mu.push((vec![g], d));
        }
    }
    for (t, gt) in gens.iter().enumerate() {
        if units[gt.src] == t && gt.src == gt.tgt {
            continue;
        }
        for (s, gs) in gens.iter().enumerate() {
            if gs.src != gt.tgt || (units[gs.src] == s && gs.src == gs.tgt) {
                continue;
            }
            let prod = compose_module_maps(cat, &cochain_of(s), &cochain_of(t));
            // drop components beyond the truncation
            let c = &homs[&(gt.src, gs.tgt)];
            let prod: Cochain = prod.into_iter().filter(|(k, _)| c.position(k).is_some()).collect();
            let v = to_gens(gt.src, gs.tgt, &prod);
            if !v.is_empty() {
                mu.push((vec![s, t], v));
            }
        }
    }
    AInfCategory::new(field, cat.objects().to_vec(), gens, units, mu)
}
