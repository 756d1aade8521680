//! Length-truncated bar complexes: the quotient morphism complex `D(A|B)`,
//! its composition, the Drinfeld model used as an independent oracle, and the
//! stabilization sweep that certifies a degree window.
//!
//! A length-`n` chain from `X` to `Y` passes through `Z_1, …, Z_n ∈ B`; its
//! basis elements are tuples `(y, b_{n-1}, …, b_1, x)` written outermost
//! first, in degree `Σ|t| - n`. Internal factors `b_i` are taken modulo
//! identities. The differential applies `μ^m` to every contiguous window with
//! the sign `(-1)^{‖·‖ of everything to its right}`, and never increases
//! length, so chains of length `≤ N` form a subcomplex.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::category::AInfCategory;
use crate::complex::{ranks_in, Complex, GradedSpace, Ranks};
use crate::error::{Error, Result};
use crate::linalg::{Accum, Matrix, SVec};

/// How a window was certified.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    ExactBound,
    EmpiricallyStable,
    Unstabilized,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::ExactBound => "exact-bound",
            Status::EmpiricallyStable => "empirically-stable",
            Status::Unstabilized => "unstabilized",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::Invalid(format!("empty window [{lo}, {hi}]")));
        }
        Ok(Window { lo, hi })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub window: Window,
    pub n_used: usize,
    pub status: Status,
    /// Ranks in the window at `n_used - 1`, when that length was computed.
    pub ranks_prev: Option<Ranks>,
    pub ranks: Ranks,
}

impl Certificate {
    pub fn is_certified(&self) -> bool {
        self.status != Status::Unstabilized
    }
}

/// Runs `build(N)` for `N = 0, 1, …` until two consecutive lengths give the
/// same ranks in `window`, or `n_max` is reached. When `exact_at` is known the
/// sweep is skipped and that length is certified outright.
pub fn stabilize<F>(mut build: F, window: Window, n_max: usize, exact_at: Option<usize>) -> Result<(Complex, Certificate)>
where
    F: FnMut(usize) -> Result<Complex>,
{
    let ranks_of = |c: &Complex| ranks_in(&c.cohomology_ranks(), window.lo, window.hi);
    if let Some(n) = exact_at.filter(|n| *n <= n_max) {
        let c = build(n)?;
        let ranks = ranks_of(&c);
        let ranks_prev = if n > 0 { Some(ranks_of(&build(n - 1)?)) } else { None };
        return Ok((c, Certificate { window, n_used: n, status: Status::ExactBound, ranks_prev, ranks }));
    }
    let mut prev: Option<Ranks> = None;
    let mut last = None;
    for n in 0..=n_max {
        let c = build(n)?;
        let ranks = ranks_of(&c);
        if prev.as_ref() == Some(&ranks) {
            let cert = Certificate { window, n_used: n, status: Status::EmpiricallyStable, ranks_prev: prev, ranks };
            return Ok((c, cert));
        }
        last = Some((c, prev.take()));
        prev = Some(ranks);
    }
    let (c, ranks_prev) = last.expect("n_max >= 0 runs at least once");
    let ranks = prev.unwrap_or_default();
    Ok((c, Certificate { window, n_used: n_max, status: Status::Unstabilized, ranks_prev, ranks }))
}

/// A chain `(y, b_{n-1}, …, b_1, x)`, outermost first.
pub type Chain = Vec<usize>;

/// The truncated complex `D(A|B)(X, Y)` with its chain basis.
#[derive(Clone, Debug)]
pub struct BarComplex {
    pub complex: Complex,
    /// Basis chains per degree, in complex order.
    pub chains: BTreeMap<i64, Vec<Chain>>,
    index: HashMap<Chain, (i64, usize)>,
    pub length: usize,
}

impl BarComplex {
    pub fn position(&self, chain: &[usize]) -> Option<(i64, usize)> {
        self.index.get(chain).copied()
    }

    /// A combination of chains as a vector in degree `n`.
    pub fn vector(&self, n: i64, combo: &BTreeMap<Chain, crate::scalar::Scalar>) -> Result<SVec> {
        let f = self.complex.field();
        let mut acc = Accum::new(f);
        for (ch, c) in combo {
            match self.index.get(ch) {
                Some(&(d, i)) if d == n => acc.add(i, c),
                Some(_) => return Err(Error::DegreeMismatch("chain in the wrong degree".into())),
                None => {} // longer than the truncation
            }
        }
        Ok(acc.finish())
    }

    pub fn chain_combo(&self, n: i64, v: &SVec) -> BTreeMap<Chain, crate::scalar::Scalar> {
        let chains = &self.chains[&n];
        v.iter().map(|(i, c)| (chains[*i].clone(), c.clone())).collect()
    }
}

fn chain_degree(cat: &AInfCategory, chain: &[usize]) -> i64 {
    cat.tuple_degree(chain) - (chain.len() as i64 - 1)
}

/// Enumerates every chain from `x` to `y` through `b` of length `≤ n`.
fn enumerate_chains(cat: &AInfCategory, b: &BTreeSet<usize>, x: usize, y: usize, n: usize) -> Vec<Chain> {
    let mut out = Vec::new();
    // inner-first partial chains ending at an object of B
    let mut frontier: Vec<(Vec<usize>, usize)> = Vec::new();
    for &g in cat.hom_basis(x, y) {
        out.push(vec![g]);
    }
    if n == 0 {
        return out;
    }
    for &z in b {
        for &g in cat.hom_basis(x, z) {
            frontier.push((vec![g], z));
        }
    }
    for len in 1..=n {
        for (partial, z) in &frontier {
            for &g in cat.hom_basis(*z, y) {
                let mut c = partial.clone();
                c.push(g);
                c.reverse();
                out.push(c);
            }
        }
        if len == n {
            break;
        }
        let mut next = Vec::new();
        for (partial, z) in &frontier {
            for &w in b {
                for g in cat.reduced_basis(*z, w) {
                    let mut c = partial.clone();
                    c.push(g);
                    next.push((c, w));
                }
            }
        }
        frontier = next;
    }
    out
}

/// Applies every window of `μ` to `chain` (outermost first). `junction`
/// restricts to windows covering inner-first positions `j-1` and `j`.
/// Internal outputs are projected away from identities.
fn window_terms(
    cat: &AInfCategory,
    chain: &[usize],
    junction: Option<usize>,
    out: &mut dyn FnMut(Chain, crate::scalar::Scalar),
) {
    let f = cat.field();
    let inner: Vec<usize> = chain.iter().rev().copied().collect();
    let len = inner.len();
    let mut dagger = 0i64;
    for p in 0..len {
        for m in 1..=(len - p).min(cat.kmax()) {
            if let Some(j) = junction {
                if !(p < j && p + m > j) {
                    continue;
                }
            }
            let window: Vec<usize> = inner[p..p + m].iter().rev().copied().collect();
            let v = cat.mu(&window);
            if v.is_empty() {
                continue;
            }
            let internal = p > 0 && p + m < len;
            let sign = f.sign(dagger.rem_euclid(2) == 1);
            for (g, c) in v {
                if internal && cat.is_unit(g) {
                    continue;
                }
                let mut new_inner = Vec::with_capacity(len - m + 1);
                new_inner.extend_from_slice(&inner[..p]);
                new_inner.push(g);
                new_inner.extend_from_slice(&inner[p + m..]);
                new_inner.reverse();
                out(new_inner, f.mul(&sign, &c));
            }
        }
        dagger += cat.gen(inner[p]).deg - 1;
    }
}

/// `D(A|B)(X, Y)` truncated at chains of length `≤ n`.
pub fn bar_complex(cat: &AInfCategory, b: &BTreeSet<usize>, x: usize, y: usize, n: usize) -> Result<BarComplex> {
    let f = cat.field();
    let chains_list = enumerate_chains(cat, b, x, y, n);
    let mut space = GradedSpace::new();
    let mut chains: BTreeMap<i64, Vec<Chain>> = BTreeMap::new();
    let mut index = HashMap::new();
    for c in chains_list {
        let d = chain_degree(cat, &c);
        let label: Vec<&str> = c.iter().map(|&g| cat.gen(g).name.as_str()).collect();
        let i = space.push(d, label.join("|"));
        chains.entry(d).or_default().push(c.clone());
        index.insert(c, (d, i));
    }
    let mut diffs = BTreeMap::new();
    for (&d, list) in &chains {
        let mut cols = Vec::with_capacity(list.len());
        for c in list {
            let mut acc = Accum::new(f);
            let mut err = None;
            window_terms(cat, c, None, &mut |new, coef| match index.get(&new) {
                Some(&(dd, i)) if dd == d + 1 => acc.add(i, &coef),
                _ => err = Some(new),
            });
            if let Some(bad) = err {
                return Err(Error::Structure(format!("bar differential left the basis at {}", cat.fmt_args(&bad))));
            }
            cols.push(acc.finish());
        }
        diffs.insert(d, Matrix::from_columns(f, space.dim(d + 1), cols)?);
    }
    let complex = Complex::new(f, space, diffs)?;
    Ok(BarComplex { complex, chains, index, length: n })
}

/// `μ²` of the quotient category on chain combinations: `beta ∘ alpha`.
pub fn compose(
    cat: &AInfCategory,
    beta: &BTreeMap<Chain, crate::scalar::Scalar>,
    alpha: &BTreeMap<Chain, crate::scalar::Scalar>,
) -> BTreeMap<Chain, crate::scalar::Scalar> {
    let f = cat.field();
    let mut acc: BTreeMap<Chain, crate::scalar::Scalar> = BTreeMap::new();
    for (a, ca) in alpha {
        for (b, cb) in beta {
            if cat.gen(b[b.len() - 1]).src != cat.gen(a[0]).tgt {
                continue;
            }
            let mut joined = b.clone();
            joined.extend_from_slice(a);
            let coef = f.mul(ca, cb);
            window_terms(cat, &joined, Some(a.len()), &mut |new, c| {
                let e = acc.entry(new).or_insert_with(|| f.zero());
                *e = f.add(e, &f.mul(&coef, &c));
            });
        }
    }
    acc.retain(|_, c| !f.is_zero(c));
    acc
}

/// Longest chain length that can occur at all, when it is finite: the
/// reduced homs among `B` form a directed graph and a chain of length `n`
/// needs a path with `n - 1` edges.
fn finite_length(cat: &AInfCategory, b: &BTreeSet<usize>) -> Option<usize> {
    let nodes: Vec<usize> = b.iter().copied().collect();
    let edge = |u: usize, v: usize| !cat.reduced_basis(u, v).is_empty();
    // longest path by DFS with cycle detection
    fn visit(
        u: usize,
        nodes: &[usize],
        edge: &dyn Fn(usize, usize) -> bool,
        state: &mut BTreeMap<usize, u8>,
        best: &mut BTreeMap<usize, usize>,
    ) -> Option<usize> {
        match state.get(&u) {
            Some(1) => return None,
            Some(2) => return Some(best[&u]),
            _ => {}
        }
        state.insert(u, 1);
        let mut longest = 0;
        for &v in nodes {
            if edge(u, v) {
                longest = longest.max(1 + visit(v, nodes, edge, state, best)?);
            }
        }
        state.insert(u, 2);
        best.insert(u, longest);
        Some(longest)
    }
    let mut state = BTreeMap::new();
    let mut best = BTreeMap::new();
    let mut longest = 0;
    for &u in &nodes {
        longest = longest.max(visit(u, &nodes, &edge, &mut state, &mut best)?);
    }
    Some(if nodes.is_empty() { 0 } else { longest + 1 })
}

/// An analytic length beyond which nothing changes in `window`, if one exists:
/// either chains are bounded in length, or every internal factor sits in
/// degree `≥ 2` so that long chains only reach degrees above the window.
pub fn bar_exact_length(cat: &AInfCategory, b: &BTreeSet<usize>, x: usize, y: usize, window: Window) -> Option<usize> {
    if let Some(n) = finite_length(cat, b) {
        return Some(n);
    }
    let mut a_in = i64::MAX;
    for &u in b {
        for &v in b {
            for g in cat.reduced_basis(u, v) {
                a_in = a_in.min(cat.gen(g).deg);
            }
        }
    }
    let mut a_out = i64::MAX;
    for &z in b {
        for &g in cat.hom_basis(x, z).iter().chain(cat.hom_basis(z, y)) {
            a_out = a_out.min(cat.gen(g).deg);
        }
    }
    if a_in < 2 || a_out == i64::MAX {
        return if a_out == i64::MAX { Some(0) } else { None };
    }
    // layer n has degree ≥ 2 a_out + (n - 1) a_in - n; find N with layer N + 1 above the window
    let mut n = 0usize;
    loop {
        let next = n as i64 + 1;
        if 2 * a_out + (next - 1) * a_in - next > window.hi {
            return Some(n);
        }
        n += 1;
    }
}

/// Validates an object subset.
pub fn object_set(cat: &AInfCategory, names: &[&str]) -> Result<BTreeSet<usize>> {
    names.iter().map(|n| cat.object_index(n)).collect()
}

/// The certified quotient morphism complex.
#[derive(Clone, Debug)]
pub struct QuotientHom {
    pub bar: BarComplex,
    pub certificate: Certificate,
}

pub fn quotient_hom(
    cat: &AInfCategory,
    b: &BTreeSet<usize>,
    x: usize,
    y: usize,
    window: Window,
    n_max: usize,
) -> Result<QuotientHom> {
    for &z in b {
        if z >= cat.num_objects() {
            return Err(Error::UnknownObject(format!("#{z}")));
        }
    }
    let exact = bar_exact_length(cat, b, x, y, window);
    let mut last = None;
    let (_, certificate) = stabilize(
        |n| {
            let bar = bar_complex(cat, b, x, y, n)?;
            let c = bar.complex.clone();
            last = Some(bar);
            Ok(c)
        },
        window,
        n_max,
        exact,
    )?;
    // the last build is the certified one, except that the exact branch may
    // finish with its evidence run at n - 1
    let bar = match last {
        Some(bar) if bar.length == certificate.n_used => bar,
        _ => bar_complex(cat, b, x, y, certificate.n_used)?,
    };
    Ok(QuotientHom { bar, certificate })
}

/// The Drinfeld quotient: freely adjoin `ε_Z` of degree `-1` with `dε_Z = 1_Z`
/// for each `Z ∈ B`, keeping words with at most `n` letters `ε`.
pub fn drinfeld_complex(cat: &AInfCategory, b: &BTreeSet<usize>, x: usize, y: usize, n: usize) -> Result<Complex> {
    if !cat.is_dg() {
        return Err(Error::NotDg("the Drinfeld model needs vanishing μ^k for k ≥ 3".into()));
    }
    let f = cat.field();
    // words are inner-first lists of A-generators; consecutive letters are separated by ε
    let mut words: Vec<Vec<usize>> = Vec::new();
    let mut frontier: Vec<Vec<usize>> = Vec::new();
    for &g in cat.hom_basis(x, y) {
        words.push(vec![g]);
    }
    for &z in b {
        for &g in cat.hom_basis(x, z) {
            frontier.push(vec![g]);
        }
    }
    for k in 1..=n {
        for w in &frontier {
            let z = cat.gen(*w.last().unwrap()).tgt;
            for &g in cat.hom_basis(z, y) {
                let mut c = w.clone();
                c.push(g);
                words.push(c);
            }
        }
        if k == n {
            break;
        }
        let mut next = Vec::new();
        for w in &frontier {
            let z = cat.gen(*w.last().unwrap()).tgt;
            for &v in b {
                for &g in cat.hom_basis(z, v) {
                    let mut c = w.clone();
                    c.push(g);
                    next.push(c);
                }
            }
        }
        frontier = next;
    }
    let degree = |w: &[usize]| cat.tuple_degree(w) - (w.len() as i64 - 1);
    let mut space = GradedSpace::new();
    let mut index: HashMap<Vec<usize>, (i64, usize)> = HashMap::new();
    let mut by_deg: BTreeMap<i64, Vec<Vec<usize>>> = BTreeMap::new();
    for w in words {
        let d = degree(&w);
        let names: Vec<&str> = w.iter().rev().map(|&g| cat.gen(g).name.as_str()).collect();
        let i = space.push(d, names.join(" ε "));
        index.insert(w.clone(), (d, i));
        by_deg.entry(d).or_default().push(w);
    }
    let unit = |g: usize| vec![(g, f.one())];
    let mut diffs = BTreeMap::new();
    for (&d, list) in &by_deg {
        let mut cols = Vec::new();
        for w in list {
            let mut acc = Accum::new(f);
            let len = w.len();
            // walk from the outermost letter inward, tracking the degree to the left
            let mut left = 0i64;
            for pos in (0..len).rev() {
                let s = f.sign(left.rem_euclid(2) == 1);
                for (h, c) in cat.m1(&unit(w[pos])) {
                    let mut nw = w.clone();
                    nw[pos] = h;
                    acc.add(index[&nw].1, &f.mul(&s, &c));
                }
                left += cat.gen(w[pos]).deg;
                if pos > 0 {
                    // the ε between w[pos] and w[pos - 1]
                    let s = f.sign(left.rem_euclid(2) == 1);
                    for (h, c) in cat.m2(&unit(w[pos]), &unit(w[pos - 1])) {
                        let mut nw = w[..pos - 1].to_vec();
                        nw.push(h);
                        nw.extend_from_slice(&w[pos + 1..]);
                        acc.add(index[&nw].1, &f.mul(&s, &c));
                    }
                    left -= 1;
                }
            }
            cols.push(acc.finish());
        }
        diffs.insert(d, Matrix::from_columns(f, space.dim(d + 1), cols)?);
    }
    Complex::new(f, space, diffs)
}

/// The Drinfeld model with a stabilization certificate.
pub fn drinfeld_quotient_hom(
    cat: &AInfCategory,
    b: &BTreeSet<usize>,
    x: usize,
    y: usize,
    window: Window,
    n_max: usize,
) -> Result<(Complex, Certificate)> {
    let exact = if b.is_empty() { Some(0) } else { None };
    stabilize(|n| drinfeld_complex(cat, b, x, y, n), window, n_max, exact)
}
