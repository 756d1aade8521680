//! Finite, strictly unital A∞-categories.
//!
//! Structure maps are stored in the reduced-degree convention: with
//! `‖a‖ = |a| - 1` the relations read
//!
//! ```text
//! Σ (-1)^{‖a_1‖ + … + ‖a_n‖} μ(a_d, …, a_{n+m+1}, μ^m(a_{n+m}, …, a_{n+1}), a_n, …, a_1) = 0
//! ```
//!
//! Argument lists are written outermost first, so `mu(&[g, f])` is "g after f".
//! Identity generators are never stored in the table; their products follow
//! the strict unit rules `μ²(e, a) = (-1)^{|a|} a`, `μ²(a, e) = a`, and every
//! other structure map with a unit argument vanishes.

use std::collections::BTreeMap;
use std::fmt;

use crate::complex::{Complex, GradedSpace};
use crate::error::{Error, Result};
use crate::linalg::{Accum, Matrix, SVec};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
    pub deg: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AInfCategory {
    field: Field,
    objects: Vec<String>,
    gens: Vec<Generator>,
    units: Vec<usize>,
    is_unit: Vec<bool>,
    mu: BTreeMap<Vec<usize>, SVec>,
    hom: BTreeMap<(usize, usize), Vec<usize>>,
    local: Vec<usize>,
    kmax: usize,
}

/// Where `check_relations` found a nonzero relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationFailure {
    /// Generator names, outermost first.
    pub args: Vec<String>,
    /// Each nonzero term `(inner window, value)` of the relation.
    pub terms: Vec<(String, String)>,
    pub residue: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationReport {
    pub arity_bound: usize,
    pub instances: usize,
    pub failure: Option<RelationFailure>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for RelationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "pass ({} instances up to arity {})", self.instances, self.arity_bound),
            Some(fail) => {
                write!(f, "fail at ({}): residue {}", fail.args.join(", "), fail.residue)?;
                for (w, v) in &fail.terms {
                    write!(f, "; {w} -> {v}")?;
                }
                Ok(())
            }
        }
    }
}

/// `(-1)^{Σ j |a_j|}` with `j = 1` the innermost argument: the factor turning
/// dg-style products `m_k` into reduced-convention `μ^k`.
pub fn dg_to_reduced_parity(degs_outermost_first: &[i64]) -> bool {
    let k = degs_outermost_first.len();
    degs_outermost_first
        .iter()
        .enumerate()
        .map(|(pos, d)| (k - pos) as i64 * d)
        .sum::<i64>()
        .rem_euclid(2)
        == 1
}

impl AInfCategory {
    /// Validates and builds a category. `mu` entries use the reduced
    /// convention; entries with a unit argument are rejected.
    pub fn new(
        field: Field,
        objects: Vec<String>,
        gens: Vec<Generator>,
        units: Vec<usize>,
        mu: Vec<(Vec<usize>, SVec)>,
    ) -> Result<Self> {
        if units.len() != objects.len() {
            return Err(Error::Structure("every object needs an identity generator".into()));
        }
        let mut is_unit = vec![false; gens.len()];
        for (o, &u) in units.iter().enumerate() {
            let g = gens.get(u).ok_or_else(|| Error::UnknownGenerator(format!("#{u}")))?;
            if g.src != o || g.tgt != o || g.deg != 0 {
                return Err(Error::Structure(format!(
                    "identity `{}` of `{}` must be a degree-0 endomorphism",
                    g.name, objects[o]
                )));
            }
            if is_unit[u] {
                return Err(Error::Structure(format!("`{}` is the identity of two objects", g.name)));
            }
            is_unit[u] = true;
        }
        let mut hom: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        let mut local = Vec::with_capacity(gens.len());
        let mut seen = std::collections::BTreeSet::new();
        for (i, g) in gens.iter().enumerate() {
            if g.src >= objects.len() || g.tgt >= objects.len() {
                return Err(Error::UnknownObject(format!("endpoint of `{}`", g.name)));
            }
            if !seen.insert(g.name.clone()) {
                return Err(Error::Structure(format!("duplicate generator `{}`", g.name)));
            }
            let v = hom.entry((g.src, g.tgt)).or_default();
            local.push(v.len());
            v.push(i);
        }
        let mut cat = AInfCategory {
            field,
            objects,
            gens,
            units,
            is_unit,
            mu: BTreeMap::new(),
            hom,
            local,
            kmax: 2,
        };
        for (args, value) in mu {
            cat.validate_entry(&args, &value)?;
            let value: SVec = value.into_iter().filter(|(_, c)| !field.is_zero(c)).collect();
            if value.is_empty() {
                continue;
            }
            if cat.mu.insert(args.clone(), value).is_some() {
                return Err(Error::Structure(format!("duplicate value for μ{}", cat.fmt_args(&args))));
            }
            cat.kmax = cat.kmax.max(args.len());
        }
        Ok(cat)
    }

    fn validate_entry(&self, args: &[usize], value: &SVec) -> Result<()> {
        if args.is_empty() {
            return Err(Error::Structure("μ needs at least one argument".into()));
        }
        for &a in args {
            if a >= self.gens.len() {
                return Err(Error::UnknownGenerator(format!("#{a}")));
            }
            if self.is_unit[a] {
                return Err(Error::Structure(format!(
                    "μ{} involves an identity; unit products are fixed by strict unitality",
                    self.fmt_args(args)
                )));
            }
        }
        let (src, tgt) = self.chain_ends(args).ok_or_else(|| {
            Error::Structure(format!("μ{} is not composable", self.fmt_args(args)))
        })?;
        let want = self.tuple_degree(args) + 2 - args.len() as i64;
        for (g, c) in value {
            let gen = self.gens.get(*g).ok_or_else(|| Error::UnknownGenerator(format!("#{g}")))?;
            if !self.field.owns(c) {
                return Err(Error::FieldMismatch(self.field, self.field));
            }
            if gen.src != src || gen.tgt != tgt {
                return Err(Error::Structure(format!(
                    "μ{} has a term `{}` in the wrong hom space",
                    self.fmt_args(args),
                    gen.name
                )));
            }
            if gen.deg != want {
                return Err(Error::DegreeMismatch(format!(
                    "μ{} should have degree {want}, term `{}` has degree {}",
                    self.fmt_args(args),
                    gen.name,
                    gen.deg
                )));
            }
        }
        Ok(())
    }

    /// Source of the innermost and target of the outermost argument, if composable.
    pub fn chain_ends(&self, args: &[usize]) -> Option<(usize, usize)> {
        let k = args.len();
        for i in 0..k.saturating_sub(1) {
            if self.gens[args[i]].src != self.gens[args[i + 1]].tgt {
                return None;
            }
        }
        Some((self.gens[args[k - 1]].src, self.gens[args[0]].tgt))
    }

    pub fn tuple_degree(&self, args: &[usize]) -> i64 {
        args.iter().map(|&a| self.gens[a].deg).sum()
    }

    pub fn field(&self) -> Field {
        self.field
    }
    pub fn objects(&self) -> &[String] {
        &self.objects
    }
    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }
    pub fn object_index(&self, name: &str) -> Result<usize> {
        self.objects.iter().position(|o| o == name).ok_or_else(|| Error::UnknownObject(name.into()))
    }
    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }
    pub fn gen(&self, g: usize) -> &Generator {
        &self.gens[g]
    }
    pub fn gen_index(&self, name: &str) -> Result<usize> {
        self.gens.iter().position(|g| g.name == name).ok_or_else(|| Error::UnknownGenerator(name.into()))
    }
    pub fn unit(&self, obj: usize) -> usize {
        self.units[obj]
    }
    pub fn units(&self) -> &[usize] {
        &self.units
    }
    pub fn is_unit(&self, g: usize) -> bool {
        self.is_unit[g]
    }
    pub fn kmax(&self) -> usize {
        self.kmax
    }
    pub fn mu_table(&self) -> &BTreeMap<Vec<usize>, SVec> {
        &self.mu
    }

    /// Generators of `hom(x, y)`, in declaration order.
    pub fn hom_basis(&self, x: usize, y: usize) -> &[usize] {
        self.hom.get(&(x, y)).map_or(&[], |v| v.as_slice())
    }

    /// Generators of `hom(x, y)` other than the identity.
    pub fn reduced_basis(&self, x: usize, y: usize) -> Vec<usize> {
        self.hom_basis(x, y).iter().copied().filter(|&g| !self.is_unit[g]).collect()
    }

    /// Position of a generator inside its hom space.
    pub fn local_index(&self, g: usize) -> usize {
        self.local[g]
    }

    /// Degree of a homogeneous element (the first term decides).
    pub fn degree_of(&self, v: &SVec) -> Option<i64> {
        v.first().map(|(g, _)| self.gens[*g].deg)
    }

    /// `μ^k` on generators, outermost first.
    pub fn mu(&self, args: &[usize]) -> SVec {
        let f = &self.field;
        if args.iter().any(|&a| self.is_unit[a]) {
            if args.len() != 2 {
                return Vec::new();
            }
            let (outer, inner) = (args[0], args[1]);
            if self.gens[outer].src != self.gens[inner].tgt {
                return Vec::new();
            }
            if self.is_unit[outer] {
                let odd = self.gens[inner].deg.rem_euclid(2) == 1;
                return vec![(inner, f.sign(odd))];
            }
            return vec![(outer, f.one())];
        }
        self.mu.get(args).cloned().unwrap_or_default()
    }

    /// Multilinear extension of [`Self::mu`].
    pub fn mu_lin(&self, args: &[&SVec]) -> SVec {
        let mut acc = Accum::new(self.field);
        let mut idx = Vec::with_capacity(args.len());
        self.mu_lin_rec(args, &mut idx, self.field.one(), &mut acc);
        acc.finish()
    }

    fn mu_lin_rec(&self, args: &[&SVec], idx: &mut Vec<usize>, coef: Scalar, acc: &mut Accum) {
        if idx.len() == args.len() {
            let v = self.mu(idx);
            acc.add_scaled(&coef, &v);
            return;
        }
        for (g, c) in args[idx.len()] {
            if let Some(&prev) = idx.last() {
                if self.gens[prev].src != self.gens[*g].tgt {
                    continue;
                }
            }
            idx.push(*g);
            self.mu_lin_rec(args, idx, self.field.mul(&coef, c), acc);
            idx.pop();
        }
    }

    /// The hom complex `hom(x, y)` with differential `μ¹`.
    pub fn hom(&self, x: usize, y: usize) -> Result<Complex> {
        let basis = self.hom_basis(x, y);
        let mut space = GradedSpace::new();
        let mut pos = BTreeMap::new();
        for &g in basis {
            let i = space.push(self.gens[g].deg, self.gens[g].name.clone());
            pos.insert(g, i);
        }
        let mut d = BTreeMap::new();
        let degrees: Vec<i64> = space.degrees().collect();
        for n in degrees {
            let cols: Vec<SVec> = basis
                .iter()
                .filter(|&&g| self.gens[g].deg == n)
                .map(|&g| {
                    let mut v: SVec = self.mu(&[g]).into_iter().map(|(h, c)| (pos[&h], c)).collect();
                    v.sort_by_key(|e| e.0);
                    v
                })
                .collect();
            d.insert(n, Matrix::from_columns(self.field, space.dim(n + 1), cols)?);
        }
        Complex::new(self.field, space, d)
    }

    /// Converts a hom-complex vector in degree `n` into generator coordinates.
    pub fn from_hom_vector(&self, x: usize, y: usize, n: i64, v: &SVec) -> SVec {
        let in_deg: Vec<usize> =
            self.hom_basis(x, y).iter().copied().filter(|&g| self.gens[g].deg == n).collect();
        let mut out: SVec = v.iter().map(|(i, c)| (in_deg[*i], c.clone())).collect();
        out.sort_by_key(|e| e.0);
        out
    }

    /// Inverse of [`Self::from_hom_vector`].
    pub fn to_hom_vector(&self, v: &SVec) -> SVec {
        let Some((g0, _)) = v.first() else { return Vec::new() };
        let (x, y, n) = (self.gens[*g0].src, self.gens[*g0].tgt, self.gens[*g0].deg);
        let pos: BTreeMap<usize, usize> = self
            .hom_basis(x, y)
            .iter()
            .copied()
            .filter(|&g| self.gens[g].deg == n)
            .enumerate()
            .map(|(i, g)| (g, i))
            .collect();
        let mut out: SVec = v.iter().map(|(g, c)| (pos[g], c.clone())).collect();
        out.sort_by_key(|e| e.0);
        out
    }

    pub fn is_dg(&self) -> bool {
        self.kmax <= 2
    }

    /// Calls `f` on every composable tuple of `len` generators (outermost
    /// first) accepted by `allow`.
    pub fn for_each_chain(&self, len: usize, allow: &dyn Fn(usize) -> bool, f: &mut dyn FnMut(&[usize])) {
        let mut inner_first = Vec::with_capacity(len);
        self.chain_rec(len, allow, &mut inner_first, f);
    }

    fn chain_rec(
        &self,
        len: usize,
        allow: &dyn Fn(usize) -> bool,
        acc: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]),
    ) {
        if acc.len() == len {
            let outer_first: Vec<usize> = acc.iter().rev().copied().collect();
            f(&outer_first);
            return;
        }
        let candidates: Vec<usize> = match acc.last() {
            None => (0..self.gens.len()).collect(),
            Some(&prev) => {
                let t = self.gens[prev].tgt;
                (0..self.objects.len()).flat_map(|y| self.hom_basis(t, y).to_vec()).collect()
            }
        };
        for g in candidates {
            if allow(g) {
                acc.push(g);
                self.chain_rec(len, allow, acc, f);
                acc.pop();
            }
        }
    }

    /// The terms of the A∞ relation on one tuple, keyed by the inner window.
    fn relation_terms(&self, args: &[usize]) -> Vec<(String, SVec)> {
        let f = &self.field;
        let d = args.len();
        let inner_first: Vec<usize> = args.iter().rev().copied().collect();
        let mut terms = Vec::new();
        let mut dagger = 0i64;
        for n in 0..d {
            for m in 1..=d - n {
                let window: Vec<usize> = inner_first[n..n + m].iter().rev().copied().collect();
                let inner = self.mu(&window);
                if inner.is_empty() {
                    continue;
                }
                let right: Vec<SVec> = inner_first[..n].iter().map(|&g| vec![(g, f.one())]).collect();
                let left: Vec<SVec> =
                    inner_first[n + m..].iter().map(|&g| vec![(g, f.one())]).collect();
                let mut outer: Vec<&SVec> = left.iter().rev().collect();
                outer.push(&inner);
                outer.extend(right.iter().rev());
                let v = self.mu_lin(&outer);
                if v.is_empty() {
                    continue;
                }
                let s = f.sign(dagger.rem_euclid(2) == 1);
                let v: SVec = v.into_iter().map(|(g, c)| (g, f.mul(&s, &c))).collect();
                terms.push((format!("μ{}", self.fmt_args(&window)), v));
            }
            dagger += self.gens[inner_first[n]].deg - 1;
        }
        terms
    }

    /// Checks the A∞ relations on every composable generator tuple of
    /// length at most `arity_bound`, units included.
    pub fn check_relations(&self, arity_bound: usize) -> RelationReport {
        let mut instances = 0;
        for len in 1..=arity_bound {
            let mut failure = None;
            self.for_each_chain(len, &|_| true, &mut |args| {
                if failure.is_some() {
                    return;
                }
                instances += 1;
                let terms = self.relation_terms(args);
                let mut acc = Accum::new(self.field);
                for (_, v) in &terms {
                    acc.add_scaled(&self.field.one(), v);
                }
                let residue = acc.finish();
                if !residue.is_empty() {
                    failure = Some(RelationFailure {
                        args: args.iter().map(|&g| self.gens[g].name.clone()).collect(),
                        terms: terms.iter().map(|(w, v)| (w.clone(), self.fmt_vec(v))).collect(),
                        residue: self.fmt_vec(&residue),
                    });
                }
            });
            if failure.is_some() {
                return RelationReport { arity_bound, instances, failure };
            }
        }
        RelationReport { arity_bound, instances, failure: None }
    }

    /// The dg-style differential and product, `m1(a) = (-1)^{|a|} μ¹(a)` and
    /// `m2(b, a) = (-1)^{|a|} μ²(b, a)`.
    pub fn m1(&self, v: &SVec) -> SVec {
        self.signed_lin(&[v])
    }

    pub fn m2(&self, b: &SVec, a: &SVec) -> SVec {
        self.signed_lin(&[b, a])
    }

    /// `m_k` on elements: `μ^k` multiplied back by the conversion sign.
    pub fn signed_lin(&self, args: &[&SVec]) -> SVec {
        let f = self.field;
        let mut acc = Accum::new(f);
        let mut idx = Vec::new();
        self.signed_rec(args, &mut idx, f.one(), &mut acc);
        acc.finish()
    }

    fn signed_rec(&self, args: &[&SVec], idx: &mut Vec<usize>, coef: Scalar, acc: &mut Accum) {
        if idx.len() == args.len() {
            let degs: Vec<i64> = idx.iter().map(|&g| self.gens[g].deg).collect();
            let s = self.field.sign(dg_to_reduced_parity(&degs));
            acc.add_scaled(&self.field.mul(&coef, &s), &self.mu(idx));
            return;
        }
        for (g, c) in args[idx.len()] {
            idx.push(*g);
            self.signed_rec(args, idx, self.field.mul(&coef, c), acc);
            idx.pop();
        }
    }

    /// Direct check of the dg axioms in the ordinary convention:
    /// `m1² = 0`, the Leibniz rule and strict associativity.
    pub fn check_dg_direct(&self) -> std::result::Result<(), String> {
        if !self.is_dg() {
            return Err("has nonzero μ^k for some k ≥ 3".into());
        }
        let f = self.field;
        let unit = |g: usize| vec![(g, f.one())];
        for g in 0..self.gens.len() {
            if !self.m1(&self.m1(&unit(g))).is_empty() {
                return Err(format!("d² ≠ 0 on {}", self.gens[g].name));
            }
        }
        let mut err = None;
        self.for_each_chain(2, &|_| true, &mut |p| {
            if err.is_some() {
                return;
            }
            let (b, a) = (unit(p[0]), unit(p[1]));
            let lhs = self.m1(&self.m2(&b, &a));
            let s = f.sign(self.gens[p[0]].deg.rem_euclid(2) == 1);
            let r1 = self.m2(&self.m1(&b), &a);
            let r2 = crate::linalg::sv_scale(&f, &s, &self.m2(&b, &self.m1(&a)));
            let rhs = crate::linalg::sv_axpy(&f, &r1, &f.one(), &r2);
            if lhs != rhs {
                err = Some(format!("Leibniz fails on ({})", self.fmt_args(p)));
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        self.for_each_chain(3, &|_| true, &mut |p| {
            if err.is_some() {
                return;
            }
            let (c, b, a) = (unit(p[0]), unit(p[1]), unit(p[2]));
            if self.m2(&self.m2(&c, &b), &a) != self.m2(&c, &self.m2(&b, &a)) {
                err = Some(format!("associativity fails on ({})", self.fmt_args(p)));
            }
        });
        err.map_or(Ok(()), Err)
    }

    /// The opposite category: `hom^op(x, y) = hom(y, x)` and
    /// `μ^op(a_1, …, a_d) = (-1)^{Σ_{i<j} ‖a_i‖‖a_j‖ + d - 1} μ(a_d, …, a_1)`.
    pub fn opposite(&self) -> AInfCategory {
        let gens = self
            .gens
            .iter()
            .map(|g| Generator { name: g.name.clone(), src: g.tgt, tgt: g.src, deg: g.deg })
            .collect();
        let mu = self
            .mu
            .iter()
            .map(|(args, v)| {
                let rev: Vec<usize> = args.iter().rev().copied().collect();
                let red: Vec<i64> = args.iter().map(|&a| self.gens[a].deg - 1).collect();
                let mut parity = args.len() as i64 - 1;
                for i in 0..red.len() {
                    for j in i + 1..red.len() {
                        parity += red[i] * red[j];
                    }
                }
                let s = self.field.sign(parity.rem_euclid(2) == 1);
                (rev, v.iter().map(|(g, c)| (*g, self.field.mul(&s, c))).collect())
            })
            .collect();
        AInfCategory::new(self.field, self.objects.clone(), gens, self.units.clone(), mu)
            .expect("opposite of a valid category is valid")
    }

    /// Disjoint union with a second category over the same field.
    pub fn disjoint_union(&self, other: &AInfCategory) -> Result<AInfCategory> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        let (no, ng) = (self.objects.len(), self.gens.len());
        let mut objects = self.objects.clone();
        objects.extend(other.objects.iter().cloned());
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().map(|g| Generator {
            name: g.name.clone(),
            src: g.src + no,
            tgt: g.tgt + no,
            deg: g.deg,
        }));
        let mut units = self.units.clone();
        units.extend(other.units.iter().map(|u| u + ng));
        let mut mu: Vec<(Vec<usize>, SVec)> = self.mu.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        mu.extend(other.mu.iter().map(|(k, v)| {
            (k.iter().map(|a| a + ng).collect(), v.iter().map(|(g, c)| (g + ng, c.clone())).collect())
        }));
        AInfCategory::new(self.field, objects, gens, units, mu)
    }

    pub fn fmt_args(&self, args: &[usize]) -> String {
        let names: Vec<&str> = args.iter().map(|&g| self.gens[g].name.as_str()).collect();
        format!("({})", names.join(", "))
    }

    /// Renders a vector as `2*f - g`, or `0`.
    pub fn fmt_vec(&self, v: &SVec) -> String {
        fmt_lincomb(&self.field, v, |g| self.gens[g].name.clone())
    }
}

/// Renders `Σ c_i x_i` using the printer's sign-magnitude convention.
pub fn fmt_lincomb(field: &Field, v: &SVec, name: impl Fn(usize) -> String) -> String {
    if v.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (g, c)) in v.iter().enumerate() {
        let (neg, mag) = c.signed_parts(field);
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&format!("{mag}*{}", name(*g)));
    }
    out
}

/// Incremental construction by name, used by tests and the file parser.
#[derive(Clone, Debug)]
pub struct CategoryBuilder {
    field: Field,
    objects: Vec<String>,
    gens: Vec<Generator>,
    units: BTreeMap<usize, usize>,
    mu: Vec<(Vec<usize>, SVec)>,
}

impl CategoryBuilder {
    pub fn new(field: Field) -> Self {
        CategoryBuilder { field, objects: Vec::new(), gens: Vec::new(), units: BTreeMap::new(), mu: Vec::new() }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn object(&mut self, name: &str) -> Result<usize> {
        if self.objects.iter().any(|o| o == name) {
            return Err(Error::Structure(format!("duplicate object `{name}`")));
        }
        self.objects.push(name.into());
        Ok(self.objects.len() - 1)
    }

    pub fn find_object(&self, name: &str) -> Result<usize> {
        self.objects.iter().position(|o| o == name).ok_or_else(|| Error::UnknownObject(name.into()))
    }

    pub fn find_gen(&self, name: &str) -> Result<usize> {
        self.gens.iter().position(|g| g.name == name).ok_or_else(|| Error::UnknownGenerator(name.into()))
    }

    pub fn gen(&mut self, name: &str, src: &str, tgt: &str, deg: i64) -> Result<usize> {
        if self.gens.iter().any(|g| g.name == name) {
            return Err(Error::Structure(format!("duplicate generator `{name}`")));
        }
        let (src, tgt) = (self.find_object(src)?, self.find_object(tgt)?);
        self.gens.push(Generator { name: name.into(), src, tgt, deg });
        Ok(self.gens.len() - 1)
    }

    /// Declares `name` as the identity of `object`.
    pub fn identity(&mut self, object: &str, name: &str) -> Result<()> {
        let o = self.find_object(object)?;
        let g = self.find_gen(name)?;
        if self.units.insert(o, g).is_some() {
            return Err(Error::Structure(format!("second identity for `{object}`")));
        }
        Ok(())
    }

    /// Declares an object together with its identity generator `1_<name>`.
    pub fn unital_object(&mut self, name: &str) -> Result<usize> {
        let o = self.object(name)?;
        self.gen(&format!("1_{name}"), name, name, 0)?;
        self.identity(name, &format!("1_{name}"))?;
        Ok(o)
    }

    fn resolve(&self, terms: &[(i64, &str)]) -> Result<SVec> {
        let mut acc = Accum::new(self.field);
        for (c, n) in terms {
            acc.add(self.find_gen(n)?, &self.field.from_i64(*c));
        }
        Ok(acc.finish())
    }

    /// Adds a product given in the dg-style convention (`m1 = d`, `m2` =
    /// composition), converting it to the stored convention.
    pub fn dg_product(&mut self, args: &[&str], value: SVec) -> Result<()> {
        let idx: Vec<usize> = args.iter().map(|a| self.find_gen(a)).collect::<Result<_>>()?;
        let degs: Vec<i64> = idx.iter().map(|&g| self.gens[g].deg).collect();
        let s = self.field.sign(dg_to_reduced_parity(&degs));
        let value = value.into_iter().map(|(g, c)| (g, self.field.mul(&s, &c))).collect();
        self.mu.push((idx, value));
        Ok(())
    }

    /// [`Self::dg_product`] with integer coefficients and generator names.
    pub fn dg(&mut self, args: &[&str], terms: &[(i64, &str)]) -> Result<()> {
        let v = self.resolve(terms)?;
        self.dg_product(args, v)
    }

    /// Adds a product already in the stored convention.
    pub fn reduced(&mut self, args: &[&str], terms: &[(i64, &str)]) -> Result<()> {
        let idx: Vec<usize> = args.iter().map(|a| self.find_gen(a)).collect::<Result<_>>()?;
        let v = self.resolve(terms)?;
        self.mu.push((idx, v));
        Ok(())
    }

    pub fn build(self) -> Result<AInfCategory> {
        let mut units = Vec::with_capacity(self.objects.len());
        for (o, name) in self.objects.iter().enumerate() {
            match self.units.get(&o) {
                Some(&u) => units.push(u),
                None => return Err(Error::Structure(format!("object `{name}` has no identity"))),
            }
        }
        AInfCategory::new(self.field, self.objects, self.gens, units, self.mu)
    }
}
