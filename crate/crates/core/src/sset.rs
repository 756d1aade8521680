//! Simplicial sets stored up to a fixed dimension.
//!
//! Every level is a finite list of labelled simplices with face and
//! degeneracy tables; [`TruncatedSSet::from_fn`] builds the tables from any
//! ordered model of the simplices and checks the simplicial identities on
//! every stored level.

use std::collections::{BTreeMap, HashMap};

use crate::category::AInfCategory;
use crate::error::{Error, Result};
use crate::linalg::{sv_axpy, sv_sub, EchelonBasis, SVec};
use crate::scalar::{Field, Scalar};

/// Default stored dimension.
pub const DEFAULT_DIM: usize = 4;

/// Largest level any enumeration here will build.
pub const LEVEL_CAP: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSSet {
    dim: usize,
    labels: Vec<Vec<String>>,
    /// `faces[n][s][i]`: index of `d_i s` in level `n - 1`.
    faces: Vec<Vec<Vec<usize>>>,
    /// `degens[n][s][i]`: index of `s_i s` in level `n + 1`, for `n < dim`.
    degens: Vec<Vec<Vec<usize>>>,
}

impl TruncatedSSet {
    /// Builds the tables from an ordered model. `levels[n]` lists the
    /// `n`-simplices; `face(n, s, i)` and `degen(n, s, i)` must land in the
    /// listed simplices of the neighbouring level.
    pub fn from_fn<T: Ord + Clone>(
        dim: usize,
        levels: Vec<Vec<T>>,
        face: impl Fn(usize, &T, usize) -> T,
        degen: impl Fn(usize, &T, usize) -> T,
        label: impl Fn(&T) -> String,
    ) -> Result<Self> {
        if levels.len() != dim + 1 {
            return Err(Error::Invalid(format!("expected {} levels, got {}", dim + 1, levels.len())));
        }
        let mut index: Vec<BTreeMap<&T, usize>> = Vec::new();
        for (n, level) in levels.iter().enumerate() {
            let mut m = BTreeMap::new();
            for (k, t) in level.iter().enumerate() {
                if m.insert(t, k).is_some() {
                    return Err(Error::Structure(format!("duplicate {n}-simplex `{}`", label(t))));
                }
            }
            index.push(m);
        }
        let find = |n: usize, t: &T, what: &str| -> Result<usize> {
            index[n].get(t).copied().ok_or_else(|| {
                Error::Structure(format!("{what} `{}` is not a stored {n}-simplex", label(t)))
            })
        };
        let mut faces = vec![Vec::new(); dim + 1];
        let mut degens = vec![Vec::new(); dim + 1];
        for n in 0..=dim {
            for t in &levels[n] {
                let mut fs = Vec::new();
                if n > 0 {
                    for i in 0..=n {
                        fs.push(find(n - 1, &face(n, t, i), "face")?);
                    }
                }
                faces[n].push(fs);
                let mut ds = Vec::new();
                if n < dim {
                    for i in 0..=n {
                        ds.push(find(n + 1, &degen(n, t, i), "degeneracy")?);
                    }
                }
                degens[n].push(ds);
            }
        }
        let labels = levels.iter().map(|l| l.iter().map(&label).collect()).collect();
        let out = TruncatedSSet { dim, labels, faces, degens };
        out.check_identities()?;
        Ok(out)
    }

    /// The simplicial set with no simplices at all.
    pub fn empty(dim: usize) -> Self {
        TruncatedSSet {
            dim,
            labels: vec![Vec::new(); dim + 1],
            faces: vec![Vec::new(); dim + 1],
            degens: vec![Vec::new(); dim + 1],
        }
    }

    fn check_identities(&self) -> Result<()> {
        let fail = |what: &str, n: usize, s: usize| {
            Err(Error::Structure(format!("simplicial identity {what} fails on {n}-simplex `{}`", self.labels[n][s])))
        };
        for n in 2..=self.dim {
            for s in 0..self.count(n) {
                for j in 1..=n {
                    for i in 0..j {
                        if self.face(n - 1, self.face(n, s, j), i) != self.face(n - 1, self.face(n, s, i), j - 1) {
                            return fail("d_i d_j = d_{j-1} d_i", n, s);
                        }
                    }
                }
            }
        }
        for n in 0..self.dim {
            for s in 0..self.count(n) {
                for j in 0..=n {
                    let t = self.degen(n, s, j);
                    for i in 0..=n + 1 {
                        let lhs = self.face(n + 1, t, i);
                        let rhs = if i == j || i == j + 1 {
                            s
                        } else if i < j {
                            self.degen(n - 1, self.face(n, s, i), j - 1)
                        } else {
                            self.degen(n - 1, self.face(n, s, i - 1), j)
                        };
                        if lhs != rhs {
                            return fail("d_i s_j", n, s);
                        }
                    }
                    if n + 2 <= self.dim {
                        for i in 0..=j {
                            if self.degen(n + 1, t, i) != self.degen(n + 1, self.degen(n, s, i), j + 1) {
                                return fail("s_i s_j = s_{j+1} s_i", n, s);
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn count(&self, n: usize) -> usize {
        self.labels.get(n).map_or(0, |l| l.len())
    }
    pub fn counts(&self) -> Vec<usize> {
        (0..=self.dim).map(|n| self.count(n)).collect()
    }
    pub fn label(&self, n: usize, s: usize) -> &str {
        &self.labels[n][s]
    }
    pub fn labels(&self, n: usize) -> &[String] {
        &self.labels[n]
    }
    pub fn face(&self, n: usize, s: usize, i: usize) -> usize {
        self.faces[n][s][i]
    }
    pub fn degen(&self, n: usize, s: usize, i: usize) -> usize {
        self.degens[n][s][i]
    }

    pub fn is_degenerate(&self, n: usize, s: usize) -> bool {
        n > 0 && (0..n).any(|j| self.degen(n - 1, self.face(n, s, j), j) == s)
    }

    pub fn nondegenerate_counts(&self) -> Vec<usize> {
        (0..=self.dim).map(|n| (0..self.count(n)).filter(|&s| !self.is_degenerate(n, s)).count()).collect()
    }

    /// The iterated degeneracy `s_0 ⋯ s_0 v` of a vertex at level `n`.
    pub fn constant(&self, v: usize, n: usize) -> usize {
        (0..n).fold(v, |s, m| self.degen(m, s, 0))
    }

    /// The same simplicial set stored only up to `dim`.
    pub fn truncate(&self, dim: usize) -> Self {
        let dim = dim.min(self.dim);
        let mut out = TruncatedSSet {
            dim,
            labels: self.labels[..=dim].to_vec(),
            faces: self.faces[..=dim].to_vec(),
            degens: self.degens[..=dim].to_vec(),
        };
        for d in &mut out.degens[dim] {
            d.clear();
        }
        out
    }
}

/// A level-wise map commuting with faces and degeneracies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SSetMap {
    pub levels: Vec<Vec<usize>>,
}

impl SSetMap {
    pub fn new(source: &TruncatedSSet, target: &TruncatedSSet, levels: Vec<Vec<usize>>) -> Result<Self> {
        let dim = source.dim.min(target.dim);
        if levels.len() != dim + 1 {
            return Err(Error::Invalid(format!("a map needs {} levels", dim + 1)));
        }
        for n in 0..=dim {
            if levels[n].len() != source.count(n) || levels[n].iter().any(|&t| t >= target.count(n)) {
                return Err(Error::Invalid(format!("level {n} of the map has the wrong shape")));
            }
        }
        for n in 0..=dim {
            for s in 0..source.count(n) {
                let t = levels[n][s];
                if n > 0 {
                    for i in 0..=n {
                        if levels[n - 1][source.face(n, s, i)] != target.face(n, t, i) {
                            return Err(Error::Structure(format!("map does not commute with d_{i} in level {n}")));
                        }
                    }
                }
                if n < dim {
                    for i in 0..=n {
                        if levels[n + 1][source.degen(n, s, i)] != target.degen(n, t, i) {
                            return Err(Error::Structure(format!("map does not commute with s_{i} in level {n}")));
                        }
                    }
                }
            }
        }
        Ok(SSetMap { levels })
    }

    /// Bijective on every stored level.
    pub fn is_iso(&self, target: &TruncatedSSet) -> bool {
        self.levels.iter().enumerate().all(|(n, l)| {
            let mut seen = vec![false; target.count(n)];
            l.len() == target.count(n) && l.iter().all(|&t| !std::mem::replace(&mut seen[t], true))
        })
    }
}

fn monotone(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        let lo = cur.last().copied().unwrap_or(0);
        for v in lo..=n {
            cur.push(v);
            rec(n, len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k + 1, &mut Vec::new(), &mut out);
    out
}

fn seq_label(s: &[usize]) -> String {
    s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("")
}

/// The full sub-object of `Δⁿ` on the simplices accepted by `keep`, with its inclusion.
fn simplex_part(n: usize, dim: usize, keep: impl Fn(&[usize]) -> bool) -> Result<(TruncatedSSet, Vec<Vec<usize>>)> {
    let mut levels = Vec::new();
    let mut inclusion = Vec::new();
    for k in 0..=dim {
        let all = monotone(n, k);
        let mut lv = Vec::new();
        let mut inc = Vec::new();
        for (idx, s) in all.into_iter().enumerate() {
            if keep(&s) {
                lv.push(s);
                inc.push(idx);
            }
        }
        levels.push(lv);
        inclusion.push(inc);
    }
    let x = TruncatedSSet::from_fn(
        dim,
        levels,
        |_, s, i| {
            let mut t = s.clone();
            t.remove(i);
            t
        },
        |_, s, i| {
            let mut t = s.clone();
            t.insert(i, s[i]);
            t
        },
        |s| seq_label(s),
    )?;
    Ok((x, inclusion))
}

/// `Δⁿ`: the `k`-simplices are the monotone maps `[k] → [n]`.
pub fn standard_simplex(n: usize, dim: usize) -> Result<TruncatedSSet> {
    Ok(simplex_part(n, dim, |_| true)?.0)
}

/// `Λⁿ_i`: the union of the faces of `Δⁿ` other than the `i`-th.
pub fn horn(n: usize, i: usize, dim: usize) -> Result<TruncatedSSet> {
    Ok(horn_inclusion(n, i, dim)?.0)
}

/// `Λⁿ_i` together with its inclusion into `Δⁿ`.
pub fn horn_inclusion(n: usize, i: usize, dim: usize) -> Result<(TruncatedSSet, SSetMap)> {
    if n == 0 || i > n {
        return Err(Error::Invalid(format!("no horn Λ^{n}_{i}")));
    }
    let (h, inc) = simplex_part(n, dim, |s| (0..=n).any(|j| j != i && !s.contains(&j)))?;
    let delta = standard_simplex(n, dim)?;
    let map = SSetMap::new(&h, &delta, inc)?;
    Ok((h, map))
}

/// `∂Δⁿ`: every simplex missing at least one vertex.
pub fn boundary(n: usize, dim: usize) -> Result<TruncatedSSet> {
    Ok(simplex_part(n, dim, |s| (0..=n).any(|j| !s.contains(&j)))?.0)
}

/// `X ⋆ Y`: an `n`-simplex is a pair `(A, B)` with `A ∈ X_k`, `B ∈ Y_l`,
/// `k + l = n - 1`, where `k` or `l` may be `-1` (the empty simplex). Faces
/// and degeneracies with index `≤ k` act on `A`, the rest on `B`.
pub fn join(x: &TruncatedSSet, y: &TruncatedSSet) -> Result<TruncatedSSet> {
    let dim = x.dim.min(y.dim);
    // (k, a, b); an empty side has index 0
    type J = (i64, usize, usize);
    let side = |s: &TruncatedSSet, k: i64| -> usize { if k < 0 { 1 } else { s.count(k as usize) } };
    let mut levels: Vec<Vec<J>> = Vec::new();
    for n in 0..=dim as i64 {
        let mut lv = Vec::new();
        for k in -1..=n {
            let l = n - 1 - k;
            for a in 0..side(x, k) {
                for b in 0..side(y, l) {
                    lv.push((k, a, b));
                }
            }
        }
        levels.push(lv);
    }
    TruncatedSSet::from_fn(
        dim,
        levels,
        |n, &(k, a, b), i| {
            let i = i as i64;
            let l = n as i64 - 1 - k;
            if i <= k {
                (k - 1, if k == 0 { 0 } else { x.face(k as usize, a, i as usize) }, b)
            } else {
                (k, a, if l == 0 { 0 } else { y.face(l as usize, b, (i - k - 1) as usize) })
            }
        },
        |n, &(k, a, b), i| {
            let i = i as i64;
            let l = n as i64 - 1 - k;
            if i <= k {
                (k + 1, x.degen(k as usize, a, i as usize), b)
            } else {
                (k, a, y.degen(l as usize, b, (i - k - 1) as usize))
            }
        },
        |_| String::new(),
    )
    .and_then(|j| relabel_join(j, x, y))
}

// labels are filled in afterwards since they depend on the level
fn relabel_join(mut j: TruncatedSSet, x: &TruncatedSSet, y: &TruncatedSSet) -> Result<TruncatedSSet> {
    for n in 0..=j.dim {
        let mut idx = 0;
        for k in -1..=n as i64 {
            let l = n as i64 - 1 - k;
            let (ca, cb) = (if k < 0 { 1 } else { x.count(k as usize) }, if l < 0 { 1 } else { y.count(l as usize) });
            for a in 0..ca {
                for b in 0..cb {
                    let la = if k < 0 { "∅".to_string() } else { x.label(k as usize, a).to_string() };
                    let lb = if l < 0 { "∅".to_string() } else { y.label(l as usize, b).to_string() };
                    j.labels[n][idx] = format!("({la}|{lb})");
                    idx += 1;
                }
            }
        }
    }
    Ok(j)
}

/// The inclusion `Δᵐ ⋆ Δⁿ → Δ^{m+n+1}`, `(A, B) ↦ A · (B + m + 1)`.
pub fn join_of_simplices(m: usize, n: usize, dim: usize) -> Result<(TruncatedSSet, TruncatedSSet, SSetMap)> {
    let (a, b) = (standard_simplex(m, dim)?, standard_simplex(n, dim)?);
    let j = join(&a, &b)?;
    let big = standard_simplex(m + n + 1, dim)?;
    let big_index: Vec<HashMap<Vec<usize>, usize>> =
        (0..=dim).map(|k| monotone(m + n + 1, k).into_iter().enumerate().map(|(i, s)| (s, i)).collect()).collect();
    let seqs_a: Vec<Vec<Vec<usize>>> = (0..=dim).map(|k| monotone(m, k)).collect();
    let seqs_b: Vec<Vec<Vec<usize>>> = (0..=dim).map(|k| monotone(n, k)).collect();
    let mut levels = Vec::new();
    for p in 0..=dim {
        let mut lv = Vec::new();
        for k in -1..=p as i64 {
            let l = p as i64 - 1 - k;
            let la: Vec<Vec<usize>> = if k < 0 { vec![vec![]] } else { seqs_a[k as usize].clone() };
            let lb: Vec<Vec<usize>> = if l < 0 { vec![vec![]] } else { seqs_b[l as usize].clone() };
            for sa in &la {
                for sb in &lb {
                    let mut s = sa.clone();
                    s.extend(sb.iter().map(|v| v + m + 1));
                    lv.push(big_index[p][&s]);
                }
            }
        }
        levels.push(lv);
    }
    let map = SSetMap::new(&j, &big, levels)?;
    Ok((j, big, map))
}

/// Level-wise product.
pub fn product(x: &TruncatedSSet, y: &TruncatedSSet) -> Result<TruncatedSSet> {
    let dim = x.dim.min(y.dim);
    let levels = (0..=dim).map(|n| (0..x.count(n)).flat_map(|a| (0..y.count(n)).map(move |b| (a, b))).collect()).collect();
    TruncatedSSet::from_fn(
        dim,
        levels,
        |n, &(a, b), i| (x.face(n, a, i), y.face(n, b, i)),
        |n, &(a, b), i| (x.degen(n, a, i), y.degen(n, b, i)),
        |&(a, b)| format!("({a},{b})"),
    )
}

/// A finite category given by its full composition table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteCategory {
    objects: Vec<String>,
    /// `(name, source, target)`
    morphisms: Vec<(String, usize, usize)>,
    identities: Vec<usize>,
    /// `(g, f) ↦ g ∘ f` for every composable pair.
    comp: BTreeMap<(usize, usize), usize>,
}

impl FiniteCategory {
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<(String, usize, usize)>,
        identities: Vec<usize>,
        comp: BTreeMap<(usize, usize), usize>,
    ) -> Result<Self> {
        if identities.len() != objects.len() {
            return Err(Error::Structure("one identity per object".into()));
        }
        let c = FiniteCategory { objects, morphisms, identities, comp };
        let m = c.morphisms.len();
        for (x, &e) in c.identities.iter().enumerate() {
            if e >= m || c.morphisms[e].1 != x || c.morphisms[e].2 != x {
                return Err(Error::Structure(format!("identity of `{}` is not an endomorphism", c.objects[x])));
            }
        }
        for f in 0..m {
            for g in 0..m {
                let composable = c.morphisms[f].2 == c.morphisms[g].1;
                match (composable, c.comp.get(&(g, f))) {
                    (true, None) => {
                        return Err(Error::Structure(format!(
                            "missing composite {} ∘ {}",
                            c.morphisms[g].0, c.morphisms[f].0
                        )))
                    }
                    (false, Some(_)) => return Err(Error::Structure("composite of a non-composable pair".into())),
                    (true, Some(&h))
                        if h >= m || c.morphisms[h].1 != c.morphisms[f].1 || c.morphisms[h].2 != c.morphisms[g].2 =>
                    {
                        return Err(Error::Structure(format!("composite {} ∘ {} has the wrong ends", c.morphisms[g].0, c.morphisms[f].0)));
                    }
                    _ => {}
                }
            }
        }
        for f in 0..m {
            let (_, s, t) = c.morphisms[f];
            if c.compose(c.identities[t], f) != f || c.compose(f, c.identities[s]) != f {
                return Err(Error::Structure(format!("unit law fails for {}", c.morphisms[f].0)));
            }
        }
        for f in 0..m {
            for g in (0..m).filter(|&g| c.morphisms[g].1 == c.morphisms[f].2) {
                for h in (0..m).filter(|&h| c.morphisms[h].1 == c.morphisms[g].2) {
                    if c.compose(h, c.compose(g, f)) != c.compose(c.compose(h, g), f) {
                        return Err(Error::Structure(format!(
                            "composition is not associative on ({}, {}, {})",
                            c.morphisms[h].0, c.morphisms[g].0, c.morphisms[f].0
                        )));
                    }
                }
            }
        }
        Ok(c)
    }

    fn compose(&self, g: usize, f: usize) -> usize {
        self.comp[&(g, f)]
    }

    /// The linear order `[n] = {0 < 1 < … < n}`.
    pub fn poset(n: usize) -> Self {
        let objects = (0..=n).map(|i| i.to_string()).collect();
        let mut morphisms = Vec::new();
        let mut idx = BTreeMap::new();
        for i in 0..=n {
            for j in i..=n {
                idx.insert((i, j), morphisms.len());
                morphisms.push((format!("{i}{j}"), i, j));
            }
        }
        let identities = (0..=n).map(|i| idx[&(i, i)]).collect();
        let mut comp = BTreeMap::new();
        for (&(i, j), &f) in &idx {
            for k in j..=n {
                comp.insert((idx[&(j, k)], f), idx[&(i, k)]);
            }
        }
        FiniteCategory::new(objects, morphisms, identities, comp).expect("posets are categories")
    }

    /// The cyclic group of order `m` as a one-object category.
    pub fn cyclic_group(m: usize) -> Self {
        let morphisms = (0..m).map(|i| (format!("g{i}"), 0, 0)).collect();
        let comp = (0..m).flat_map(|a| (0..m).map(move |b| ((a, b), (a + b) % m))).collect();
        FiniteCategory::new(vec!["*".into()], morphisms, vec![0], comp).expect("groups are categories")
    }
}

/// `N(C)`: `k`-simplices are composable strings `x_0 → ⋯ → x_k`.
pub fn nerve(c: &FiniteCategory, dim: usize) -> Result<TruncatedSSet> {
    // (first object, morphisms in order of travel)
    type S = (usize, Vec<usize>);
    let mut levels: Vec<Vec<S>> = vec![(0..c.objects.len()).map(|x| (x, vec![])).collect()];
    for n in 1..=dim {
        let mut lv = Vec::new();
        for (x, fs) in &levels[n - 1] {
            let end = fs.last().map_or(*x, |&f| c.morphisms[f].2);
            for (g, m) in c.morphisms.iter().enumerate() {
                if m.1 == end {
                    let mut t = fs.clone();
                    t.push(g);
                    lv.push((*x, t));
                }
            }
        }
        if lv.len() > LEVEL_CAP {
            return Err(Error::SearchTooLarge(format!("level {n} of the nerve")));
        }
        levels.push(lv);
    }
    TruncatedSSet::from_fn(
        dim,
        levels,
        |n, (x, fs), i| {
            let mut t = fs.clone();
            if i == 0 {
                let first = t.remove(0);
                (c.morphisms[first].2, t)
            } else if i == n {
                t.pop();
                (*x, t)
            } else {
                let g = t.remove(i);
                t[i - 1] = c.compose(g, t[i - 1]);
                (*x, t)
            }
        },
        |_, (x, fs), i| {
            let obj = if i == 0 { *x } else { c.morphisms[fs[i - 1]].2 };
            let mut t = fs.clone();
            t.insert(i, c.identities[obj]);
            (*x, t)
        },
        |(x, fs)| {
            if fs.is_empty() {
                c.objects[*x].clone()
            } else {
                fs.iter().map(|&f| c.morphisms[f].0.as_str()).collect::<Vec<_>>().join(",")
            }
        },
    )
}

type Dense = Vec<(usize, u32)>;

fn dense(v: &SVec) -> Dense {
    v.iter()
        .map(|(g, c)| match c {
            Scalar::Fp(x) => (*g, *x),
            Scalar::Q(_) => unreachable!("enumeration runs over prime fields"),
        })
        .collect()
}

fn sparse(v: &Dense) -> SVec {
    v.iter().map(|&(g, c)| (g, Scalar::Fp(c))).collect()
}

/// Every linear combination of `basis`.
fn span(field: Field, basis: &[SVec]) -> Result<Vec<SVec>> {
    let elems = field.elements()?;
    let p = elems.len();
    let total = (p as u128).checked_pow(basis.len() as u32).filter(|t| *t <= LEVEL_CAP as u128);
    let total = total.ok_or_else(|| Error::SearchTooLarge(format!("{p}^{} elements", basis.len())))? as usize;
    let mut out = Vec::with_capacity(total);
    for code in 0..total {
        let mut c = code;
        let mut v: SVec = Vec::new();
        for b in basis {
            let s = &elems[c % p];
            c /= p;
            if !field.is_zero(s) {
                v = sv_axpy(&field, &v, s, b);
            }
        }
        out.push(v);
    }
    Ok(out)
}

/// Linear-algebra helpers on one hom space.
struct HomSpace<'a> {
    cat: &'a AInfCategory,
}

impl HomSpace<'_> {
    fn gens_of_degree(&self, x: usize, y: usize, d: i64) -> Vec<usize> {
        self.cat.hom_basis(x, y).iter().copied().filter(|&g| self.cat.gen(g).deg == d).collect()
    }

    fn all(&self, x: usize, y: usize, d: i64) -> Result<Vec<SVec>> {
        let f = self.cat.field();
        let basis: Vec<SVec> = self.gens_of_degree(x, y, d).into_iter().map(|g| vec![(g, f.one())]).collect();
        span(f, &basis)
    }

    fn closed(&self, x: usize, y: usize, d: i64) -> Result<Vec<SVec>> {
        let f = self.cat.field();
        let gens = self.gens_of_degree(x, y, d);
        let hom = self.cat.hom(x, y)?;
        let basis: Vec<SVec> = hom
            .d(d)
            .kernel_basis()
            .into_iter()
            .map(|k| {
                let mut v: SVec = k.into_iter().map(|(i, c)| (gens[i], c)).collect();
                v.sort_by_key(|e| e.0);
                v
            })
            .collect();
        span(f, &basis)
    }

    fn d(&self, v: &SVec) -> SVec {
        self.cat.mu_lin(&[v])
    }

    /// All `h` of degree `d` in `hom(x, y)` with `μ¹h = t`.
    fn solutions(&self, x: usize, y: usize, d: i64, t: &SVec) -> Result<Vec<SVec>> {
        let f = self.cat.field();
        let gens = self.gens_of_degree(x, y, d);
        let mut ech = EchelonBasis::new(f);
        for &g in &gens {
            ech.insert(self.d(&vec![(g, f.one())]));
        }
        let Some(coords) = ech.solve(t) else { return Ok(Vec::new()) };
        let particular: SVec = {
            let mut v: SVec = coords.into_iter().map(|(i, c)| (gens[i], c)).collect();
            v.sort_by_key(|e| e.0);
            v
        };
        Ok(self.closed(x, y, d)?.into_iter().map(|k| sv_axpy(&f, &particular, &f.one(), &k)).collect())
    }
}

/// A simplex of the A∞ nerve: its vertices and its cells, listed as
/// `[f01]`, `[f01, f12, f02, h]` or
/// `[f01, f12, f23, f02, f13, f03, h012, h013, h023, h123, g]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct NerveSimplex {
    verts: Vec<usize>,
    cells: Vec<Dense>,
}

/// The A∞ nerve through dimension 3 over a prime field.
///
/// Edges are closed degree-0 morphisms. A 2-simplex adds `h` of degree -1
/// with `μ¹h = μ²(f12, f01) - f02`. A 3-simplex adds `g` of degree -2 with
/// `μ¹g = -μ²(f23, h012) - μ²(h123, f01) - h013 + h023 + μ³(f23, f12, f01)`,
/// the unique sign pattern for which the right side is closed whenever the
/// faces are 2-simplices.
pub fn ainfty_nerve(cat: &AInfCategory, dim: usize) -> Result<TruncatedSSet> {
    let field = cat.field();
    if !field.is_finite() {
        return Err(Error::InfiniteField("the A∞ nerve"));
    }
    if dim > 3 {
        return Err(Error::Invalid("the A∞ nerve is implemented through dimension 3".into()));
    }
    let hs = HomSpace { cat };
    let n_obj = cat.num_objects();
    let mu2 = |b: &SVec, a: &SVec| cat.mu_lin(&[b, a]);
    let mut z0: BTreeMap<(usize, usize), Vec<SVec>> = BTreeMap::new();
    let mut m1: BTreeMap<(usize, usize), Vec<SVec>> = BTreeMap::new();
    for x in 0..n_obj {
        for y in 0..n_obj {
            z0.insert((x, y), hs.closed(x, y, 0)?);
            m1.insert((x, y), hs.all(x, y, -1)?);
        }
    }
    let mut levels: Vec<Vec<NerveSimplex>> = Vec::new();
    levels.push((0..n_obj).map(|x| NerveSimplex { verts: vec![x], cells: vec![] }).collect());
    let push = |lv: &mut Vec<NerveSimplex>, s: NerveSimplex| -> Result<()> {
        if lv.len() >= LEVEL_CAP {
            return Err(Error::SearchTooLarge("a level of the A∞ nerve".into()));
        }
        lv.push(s);
        Ok(())
    };
    if dim >= 1 {
        let mut lv = Vec::new();
        for x in 0..n_obj {
            for y in 0..n_obj {
                for f in &z0[&(x, y)] {
                    push(&mut lv, NerveSimplex { verts: vec![x, y], cells: vec![dense(f)] })?;
                }
            }
        }
        levels.push(lv);
    }
    let third = |f01: &SVec, f12: &SVec, h: &SVec| sv_sub(&field, &mu2(f12, f01), &hs.d(h));
    if dim >= 2 {
        let mut lv = Vec::new();
        for a in 0..n_obj {
            for b in 0..n_obj {
                for c in 0..n_obj {
                    for f01 in &z0[&(a, b)] {
                        for f12 in &z0[&(b, c)] {
                            for h in &m1[&(a, c)] {
                                let f02 = third(f01, f12, h);
                                let cells = vec![dense(f01), dense(f12), dense(&f02), dense(h)];
                                push(&mut lv, NerveSimplex { verts: vec![a, b, c], cells })?;
                            }
                        }
                    }
                }
            }
        }
        levels.push(lv);
    }
    if dim >= 3 {
        let mut lv = Vec::new();
        let one = field.one();
        let neg = field.neg(&one);
        for v0 in 0..n_obj {
            for v1 in 0..n_obj {
                for v2 in 0..n_obj {
                    for v3 in 0..n_obj {
                        for f01 in &z0[&(v0, v1)] {
                            for f12 in &z0[&(v1, v2)] {
                                for f23 in &z0[&(v2, v3)] {
                                    for h012 in &m1[&(v0, v2)] {
                                        let f02 = third(f01, f12, h012);
                                        for h123 in &m1[&(v1, v3)] {
                                            let f13 = third(f12, f23, h123);
                                            for h023 in &m1[&(v0, v3)] {
                                                let f03 = third(&f02, f23, h023);
                                                let target = sv_sub(&field, &mu2(&f13, f01), &f03);
                                                for h013 in hs.solutions(v0, v3, -1, &target)? {
                                                    let mut rhs = sv_axpy(&field, &Vec::new(), &neg, &mu2(f23, h012));
                                                    rhs = sv_axpy(&field, &rhs, &neg, &mu2(h123, f01));
                                                    rhs = sv_axpy(&field, &rhs, &neg, &h013);
                                                    rhs = sv_axpy(&field, &rhs, &one, h023);
                                                    rhs = sv_axpy(&field, &rhs, &one, &cat.mu_lin(&[f23, f12, f01]));
                                                    for g in hs.solutions(v0, v3, -2, &rhs)? {
                                                        let cells = [f01, f12, f23, &f02, &f13, &f03, h012, &h013, h023, h123, &g]
                                                            .iter()
                                                            .map(|v| dense(v))
                                                            .collect();
                                                        push(&mut lv, NerveSimplex { verts: vec![v0, v1, v2, v3], cells })?;
                                                    }
                                                }
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        levels.push(lv);
    }
    let unit = |x: usize| vec![(cat.unit(x), 1u32)];
    TruncatedSSet::from_fn(
        dim,
        levels,
        |n, s, i| {
            let v = &s.verts;
            let c = &s.cells;
            let mut verts = v.clone();
            verts.remove(i);
            let cells = match (n, i) {
                (1, _) => vec![],
                (2, 0) => vec![c[1].clone()],
                (2, 1) => vec![c[2].clone()],
                (2, _) => vec![c[0].clone()],
                (3, 0) => vec![c[1].clone(), c[2].clone(), c[4].clone(), c[9].clone()],
                (3, 1) => vec![c[3].clone(), c[2].clone(), c[5].clone(), c[8].clone()],
                (3, 2) => vec![c[0].clone(), c[4].clone(), c[5].clone(), c[7].clone()],
                _ => vec![c[0].clone(), c[1].clone(), c[3].clone(), c[6].clone()],
            };
            NerveSimplex { verts, cells }
        },
        |n, s, i| {
            let v = &s.verts;
            let c = &s.cells;
            let mut verts = v.clone();
            verts.insert(i, v[i]);
            let z = Dense::new();
            let cells = match (n, i) {
                (0, _) => vec![unit(v[0])],
                (1, 0) => vec![unit(v[0]), c[0].clone(), c[0].clone(), z],
                (1, _) => vec![c[0].clone(), unit(v[1]), c[0].clone(), z],
                // σ = (f01, f12, f02, h)
                (2, 0) => {
                    let (f01, f12, f02, h) = (&c[0], &c[1], &c[2], &c[3]);
                    vec![unit(v[0]), f01.clone(), f12.clone(), f01.clone(), f02.clone(), f02.clone(), z.clone(), z.clone(), h.clone(), h.clone(), z]
                }
                (2, 1) => {
                    let (f01, f12, f02, h) = (&c[0], &c[1], &c[2], &c[3]);
                    vec![f01.clone(), unit(v[1]), f12.clone(), f01.clone(), f12.clone(), f02.clone(), z.clone(), h.clone(), h.clone(), z.clone(), z]
                }
                _ => {
                    let (f01, f12, f02, h) = (&c[0], &c[1], &c[2], &c[3]);
                    vec![f01.clone(), f12.clone(), unit(v[2]), f02.clone(), f12.clone(), f02.clone(), h.clone(), h.clone(), z.clone(), z.clone(), z]
                }
            };
            NerveSimplex { verts, cells }
        },
        |s| {
            let names: Vec<&str> = s.verts.iter().map(|&x| cat.objects()[x].as_str()).collect();
            let cells: Vec<String> = s.cells.iter().map(|c| cat.fmt_vec(&sparse(c))).collect();
            if cells.is_empty() {
                names.join("")
            } else {
                format!("{}:{}", names.join(""), cells.join(","))
            }
        },
    )
}

/// A hom space with its connected components.
#[derive(Clone, Debug)]
pub struct HomSpaceData {
    pub sset: TruncatedSSet,
    /// Component index of each vertex.
    pub component: Vec<usize>,
    pub pi0: usize,
}

/// `Hom(x, y)`: its `n`-simplices are the `(n+1)`-simplices of the A∞
/// nerve with first vertex `x` whose face opposite that vertex is the
/// constant simplex at `y`. Faces and degeneracies are those of the nerve
/// shifted by one.
pub fn hom_space(cat: &AInfCategory, x: usize, y: usize, dim: usize) -> Result<HomSpaceData> {
    if dim > 2 {
        return Err(Error::Invalid("hom spaces are built through dimension 2".into()));
    }
    if x >= cat.num_objects() || y >= cat.num_objects() {
        return Err(Error::UnknownObject(format!("#{}", x.max(y))));
    }
    let nerve = ainfty_nerve(cat, dim + 1)?;
    let mut levels: Vec<Vec<usize>> = Vec::new();
    for n in 0..=dim {
        let m = n + 1;
        let c = nerve.constant(y, n);
        let lv = (0..nerve.count(m))
            .filter(|&s| nerve.face(m, s, 0) == c && first_vertex(&nerve, m, s) == x)
            .collect();
        levels.push(lv);
    }
    let levels_copy = levels.clone();
    let sset = TruncatedSSet::from_fn(
        dim,
        levels,
        |n, &s, i| nerve.face(n + 1, s, i + 1),
        |n, &s, i| nerve.degen(n + 1, s, i + 1),
        |&s| s.to_string(),
    )?;
    let mut sset = sset;
    for (n, lv) in levels_copy.iter().enumerate() {
        for (k, &s) in lv.iter().enumerate() {
            sset.labels[n][k] = nerve.label(n + 1, s).to_string();
        }
    }
    let (component, pi0) = components(&sset);
    Ok(HomSpaceData { sset, component, pi0 })
}

fn first_vertex(x: &TruncatedSSet, n: usize, s: usize) -> usize {
    (1..=n).rev().fold(s, |t, m| x.face(m, t, m))
}

/// Connected components of the vertices, joined along edges.
pub fn components(x: &TruncatedSSet) -> (Vec<usize>, usize) {
    let n = x.count(0);
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(p: &mut [usize], mut a: usize) -> usize {
        while p[a] != a {
            p[a] = p[p[a]];
            a = p[a];
        }
        a
    }
    if x.dim() >= 1 {
        for e in 0..x.count(1) {
            let (a, b) = (root(&mut parent, x.face(1, e, 0)), root(&mut parent, x.face(1, e, 1)));
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut ids = BTreeMap::new();
    let comp: Vec<usize> = (0..n)
        .map(|v| {
            let r = root(&mut parent, v);
            let k = ids.len();
            *ids.entry(r).or_insert(k)
        })
        .collect();
    (comp, ids.len())
}

/// A horn `Λⁿ_i → X`, given by the images of the faces `j ≠ i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Horn {
    pub n: usize,
    pub i: usize,
    pub faces: BTreeMap<usize, usize>,
}

impl Horn {
    pub fn is_inner(&self) -> bool {
        0 < self.i && self.i < self.n
    }

    /// Reads a horn off a map out of [`horn`]`(n, i, _)`.
    pub fn from_map(n: usize, i: usize, map: &SSetMap) -> Result<Horn> {
        let dim = map.levels.len().saturating_sub(1);
        if n == 0 || n > dim + 1 || i > n {
            return Err(Error::Invalid(format!("no horn Λ^{n}_{i} in this map")));
        }
        let mut faces = BTreeMap::new();
        for j in (0..=n).filter(|&j| j != i) {
            let face: Vec<usize> = (0..=n).filter(|&v| v != j).collect();
            let idx = monotone(n, n - 1)
                .into_iter()
                .filter(|s| (0..=n).any(|k| k != i && !s.contains(&k)))
                .position(|s| s == face)
                .expect("every face other than the i-th lies in the horn");
            faces.insert(j, map.levels[n - 1][idx]);
        }
        Ok(Horn { n, i, faces })
    }
}

/// All fillers of a horn, with a flag for outer horns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fillers {
    pub outer: bool,
    pub fillers: Vec<usize>,
}

pub fn horn_fillers(x: &TruncatedSSet, horn: &Horn) -> Result<Fillers> {
    if horn.n > x.dim() {
        return Err(Error::Invalid(format!("dimension {} is not stored", horn.n)));
    }
    let fillers = (0..x.count(horn.n))
        .filter(|&s| horn.faces.iter().all(|(&j, &f)| x.face(horn.n, s, j) == f))
        .collect();
    Ok(Fillers { outer: !horn.is_inner(), fillers })
}

/// Fillers of the horn described by a map out of `Λⁿ_i`.
pub fn inner_horn_fillers(x: &TruncatedSSet, n: usize, i: usize, map: &SSetMap) -> Result<Fillers> {
    horn_fillers(x, &Horn::from_map(n, i, map)?)
}

/// Every horn `Λⁿ_i → X`, as compatible families of faces.
pub fn horns(x: &TruncatedSSet, n: usize, i: usize) -> Result<Vec<Horn>> {
    if n < 1 || i > n || n > x.dim() {
        return Err(Error::Invalid(format!("no horns Λ^{n}_{i} here")));
    }
    let js: Vec<usize> = (0..=n).filter(|&j| j != i).collect();
    let mut out = Vec::new();
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    fn rec(x: &TruncatedSSet, n: usize, i: usize, js: &[usize], chosen: &mut Vec<(usize, usize)>, out: &mut Vec<Horn>) -> Result<()> {
        if chosen.len() == js.len() {
            if out.len() >= LEVEL_CAP {
                return Err(Error::SearchTooLarge("horn enumeration".into()));
            }
            out.push(Horn { n, i, faces: chosen.iter().copied().collect() });
            return Ok(());
        }
        let k = js[chosen.len()];
        for f in 0..x.count(n - 1) {
            // d_j(face_k) = d_{k-1}(face_j) for j < k
            let ok = n < 2
                || chosen.iter().all(|&(j, fj)| x.face(n - 1, f, j) == x.face(n - 1, fj, k - 1));
            if ok {
                chosen.push((k, f));
                rec(x, n, i, js, chosen, out)?;
                chosen.pop();
            }
        }
        Ok(())
    }
    rec(x, n, i, &js, &mut chosen, &mut out)?;
    Ok(out)
}

/// Filler counts over every horn `Λⁿ_i → X`: `(horns, min fillers, max fillers)`.
pub fn filler_statistics(x: &TruncatedSSet, n: usize, i: usize) -> Result<(usize, usize, usize)> {
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    for s in 0..x.count(n) {
        let key: Vec<usize> = (0..=n).filter(|&j| j != i).map(|j| x.face(n, s, j)).collect();
        *index.entry(key).or_insert(0) += 1;
    }
    let hs = horns(x, n, i)?;
    let counts: Vec<usize> = hs.iter().map(|h| index.get(&h.faces.values().copied().collect::<Vec<_>>()).copied().unwrap_or(0)).collect();
    Ok((hs.len(), counts.iter().copied().min().unwrap_or(0), counts.iter().copied().max().unwrap_or(0)))
}
