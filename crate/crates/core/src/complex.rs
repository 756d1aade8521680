//! Finite cochain complexes over a field.
//!
//! Grading is cohomological: the differential raises degree by one and
//! `(C[s])^n = C^{n+s}`. Every constructor checks `d ∘ d = 0`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{Accum, EchelonBasis, Matrix, SVec};
use crate::scalar::Field;

/// Finite graded vector space with labelled bases.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GradedSpace {
    labels: BTreeMap<i64, Vec<String>>,
}

impl GradedSpace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_labels(labels: BTreeMap<i64, Vec<String>>) -> Self {
        let labels = labels.into_iter().filter(|(_, v)| !v.is_empty()).collect();
        GradedSpace { labels }
    }

    /// Appends a basis vector in degree `n`, returning its index.
    pub fn push(&mut self, n: i64, label: impl Into<String>) -> usize {
        let v = self.labels.entry(n).or_default();
        v.push(label.into());
        v.len() - 1
    }

    pub fn dim(&self, n: i64) -> usize {
        self.labels.get(&n).map_or(0, |v| v.len())
    }

    pub fn total_dim(&self) -> usize {
        self.labels.values().map(|v| v.len()).sum()
    }

    pub fn labels(&self, n: i64) -> &[String] {
        self.labels.get(&n).map_or(&[], |v| v.as_slice())
    }

    /// Degrees with nonzero dimension, ascending.
    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.labels.keys().copied()
    }

    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.labels.iter().map(|(n, v)| (*n, v.len())).collect()
    }
}

/// Cohomology ranks per degree; absent degrees have rank zero.
pub type Ranks = BTreeMap<i64, usize>;

/// Ranks restricted to the inclusive window `[lo, hi]`, zeros dropped.
pub fn ranks_in(ranks: &Ranks, lo: i64, hi: i64) -> Ranks {
    ranks.range(lo..=hi).filter(|(_, r)| **r > 0).map(|(n, r)| (*n, *r)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex {
    field: Field,
    space: GradedSpace,
    d: BTreeMap<i64, Matrix>,
}

/// Cohomology in one degree together with enough data to name classes.
#[derive(Clone, Debug)]
pub struct CohomologyDegree {
    pub degree: i64,
    pub reps: Vec<SVec>,
    basis: EchelonBasis,
    image_slots: usize,
}

impl CohomologyDegree {
    pub fn rank(&self) -> usize {
        self.reps.len()
    }

    /// Coordinates of the class of cocycle `v` in the representative basis.
    /// `None` when `v` is not a cocycle.
    pub fn class_of(&self, v: &SVec) -> Option<SVec> {
        let coords = self.basis.solve(v)?;
        Some(
            coords
                .into_iter()
                .filter(|(i, _)| *i >= self.image_slots)
                .map(|(i, c)| (i - self.image_slots, c))
                .collect(),
        )
    }

    /// Whether cocycle `v` is a coboundary.
    pub fn is_exact(&self, v: &SVec) -> bool {
        matches!(self.class_of(v), Some(c) if c.is_empty())
    }
}

impl Complex {
    /// Builds a complex; `d[n]` maps degree `n` to degree `n + 1`.
    pub fn new(field: Field, space: GradedSpace, d: BTreeMap<i64, Matrix>) -> Result<Self> {
        let mut clean = BTreeMap::new();
        for (n, m) in d {
            if m.field() != field {
                return Err(Error::FieldMismatch(field, m.field()));
            }
            if m.cols() != space.dim(n) || m.rows() != space.dim(n + 1) {
                return Err(Error::Dimension(format!(
                    "d^{n} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    space.dim(n + 1),
                    space.dim(n)
                )));
            }
            if !m.is_zero() {
                clean.insert(n, m);
            }
        }
        let c = Complex { field, space, d: clean };
        for (n, m) in &c.d {
            if let Some(next) = c.d.get(&(n + 1)) {
                if !next.compose(m)?.is_zero() {
                    return Err(Error::NotAComplex(*n));
                }
            }
        }
        Ok(c)
    }

    pub fn zero(field: Field) -> Self {
        Complex { field, space: GradedSpace::new(), d: BTreeMap::new() }
    }

    /// One-dimensional complex concentrated in degree `n`.
    pub fn unit(field: Field, n: i64) -> Self {
        let mut space = GradedSpace::new();
        space.push(n, "1");
        Complex { field, space, d: BTreeMap::new() }
    }

    /// Zero differential on the given space.
    pub fn from_space(field: Field, space: GradedSpace) -> Self {
        Complex { field, space, d: BTreeMap::new() }
    }

    pub fn field(&self) -> Field {
        self.field
    }
    pub fn space(&self) -> &GradedSpace {
        &self.space
    }
    pub fn dim(&self, n: i64) -> usize {
        self.space.dim(n)
    }
    pub fn total_dim(&self) -> usize {
        self.space.total_dim()
    }

    /// The differential out of degree `n` (a zero matrix when none is stored).
    pub fn d(&self, n: i64) -> Matrix {
        self.d
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Matrix::zero(self.field, self.dim(n + 1), self.dim(n)))
    }

    pub fn differentials(&self) -> &BTreeMap<i64, Matrix> {
        &self.d
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.space.degrees().collect()
    }

    fn rank_d(&self, n: i64) -> usize {
        self.d.get(&n).map_or(0, |m| m.rank())
    }

    /// `rank H^n = dim ker d^n - rank d^{n-1}` in every degree with a nonzero group.
    pub fn cohomology_ranks(&self) -> Ranks {
        let ranks: BTreeMap<i64, usize> = self.d.keys().map(|n| (*n, self.rank_d(*n))).collect();
        let get = |n: i64| ranks.get(&n).copied().unwrap_or(0);
        self.space
            .degrees()
            .map(|n| (n, self.dim(n) - get(n) - get(n - 1)))
            .filter(|(_, r)| *r > 0)
            .collect()
    }

    pub fn cohomology_rank(&self, n: i64) -> usize {
        self.dim(n) - self.rank_d(n) - self.rank_d(n - 1)
    }

    pub fn is_acyclic(&self) -> bool {
        self.cohomology_ranks().is_empty()
    }

    /// Cohomology in degree `n` with cocycle representatives.
    pub fn cohomology_at(&self, n: i64) -> CohomologyDegree {
        let mut basis = EchelonBasis::new(self.field);
        let incoming = self.d(n - 1);
        for col in incoming.columns() {
            basis.insert(col.clone());
        }
        let image_slots = incoming.cols();
        let mut reps = Vec::new();
        for z in self.d(n).kernel_basis() {
            if basis.insert(z.clone()) {
                reps.push(z);
            }
        }
        // the slots used by the representatives must be contiguous after the image
        let mut rebuilt = EchelonBasis::new(self.field);
        for col in incoming.columns() {
            rebuilt.insert(col.clone());
        }
        for r in &reps {
            rebuilt.insert(r.clone());
        }
        CohomologyDegree { degree: n, reps, basis: rebuilt, image_slots }
    }

    pub fn cohomology(&self) -> BTreeMap<i64, CohomologyDegree> {
        self.space
            .degrees()
            .map(|n| (n, self.cohomology_at(n)))
            .filter(|(_, h)| h.rank() > 0)
            .collect()
    }

    /// `(C[s])^n = C^{n+s}` with differential `(-1)^s d`.
    pub fn shift(&self, s: i64) -> Complex {
        let labels = self.space.labels.iter().map(|(n, v)| (n - s, v.clone())).collect();
        let sign = self.field.sign(s.rem_euclid(2) == 1);
        let d = self.d.iter().map(|(n, m)| (n - s, m.scale(&sign))).collect();
        Complex { field: self.field, space: GradedSpace { labels }, d }
    }

    pub fn direct_sum(&self, other: &Complex) -> Result<Complex> {
        check_field(self.field, other.field)?;
        let mut space = self.space.clone();
        for n in other.space.degrees() {
            for l in other.space.labels(n) {
                space.push(n, l.clone());
            }
        }
        let mut d = BTreeMap::new();
        let degrees: Vec<i64> = space.degrees().collect();
        for n in degrees {
            let (a, b) = (self.d(n), other.d(n));
            let off_r = self.dim(n + 1);
            let mut cols: Vec<SVec> = a.columns().to_vec();
            for c in b.columns() {
                cols.push(c.iter().map(|(i, x)| (i + off_r, x.clone())).collect());
            }
            d.insert(n, Matrix::from_columns(self.field, space.dim(n + 1), cols)?);
        }
        Complex::new(self.field, space, d)
    }

    /// Graded tensor product with `d(c ⊗ e) = dc ⊗ e + (-1)^{|c|} c ⊗ de`.
    pub fn tensor(&self, other: &Complex) -> Result<Complex> {
        check_field(self.field, other.field)?;
        let f = self.field;
        let mut space = GradedSpace::new();
        // index[(p, q)] = offset of the C^p ⊗ D^q block inside degree p + q
        let mut index: BTreeMap<(i64, i64), usize> = BTreeMap::new();
        for p in self.space.degrees() {
            for q in other.space.degrees() {
                let n = p + q;
                index.insert((p, q), space.dim(n));
                for a in self.space.labels(p) {
                    for b in other.space.labels(q) {
                        space.push(n, format!("{a}⊗{b}"));
                    }
                }
            }
        }
        let dq = other.space.dims();
        let mut d = BTreeMap::new();
        for n in space.degrees().collect::<Vec<_>>() {
            let mut cols = Vec::with_capacity(space.dim(n));
            for p in self.space.degrees() {
                let q = n - p;
                let Some(&dimq) = dq.get(&q) else { continue };
                let (dc, dd) = (self.d(p), other.d(q));
                let sign = f.sign(p.rem_euclid(2) == 1);
                for i in 0..self.dim(p) {
                    for j in 0..dimq {
                        let mut acc = Accum::new(f);
                        if let Some(&off) = index.get(&(p + 1, q)) {
                            for (r, c) in dc.column(i) {
                                acc.add(off + r * dimq + j, c);
                            }
                        }
                        if let Some(&off) = index.get(&(p, q + 1)) {
                            let w = other.dim(q + 1);
                            for (r, c) in dd.column(j) {
                                acc.add(off + i * w + r, &f.mul(&sign, c));
                            }
                        }
                        cols.push(acc.finish());
                    }
                }
            }
            d.insert(n, Matrix::from_columns(f, space.dim(n + 1), cols)?);
        }
        Complex::new(f, space, d)
    }

    /// `Hom^n = ∏_m Hom(C^m, D^{m+n})` with `(δφ) = d_D φ - (-1)^n φ d_C`.
    /// A basis vector `(m, i, j)` is the map sending `c_i ∈ C^m` to `e_j ∈ D^{m+n}`.
    pub fn hom_complex(&self, target: &Complex) -> Result<Complex> {
        check_field(self.field, target.field)?;
        let f = self.field;
        let mut space = GradedSpace::new();
        let mut index: BTreeMap<(i64, i64), usize> = BTreeMap::new();
        for m in self.space.degrees() {
            for k in target.space.degrees() {
                let n = k - m;
                index.insert((m, n), space.dim(n));
                for a in self.space.labels(m) {
                    for b in target.space.labels(k) {
                        space.push(n, format!("[{a}→{b}]"));
                    }
                }
            }
        }
        let mut d = BTreeMap::new();
        for n in space.degrees().collect::<Vec<_>>() {
            let mut cols = Vec::with_capacity(space.dim(n));
            for m in self.space.degrees() {
                let k = m + n;
                let dimk = target.dim(k);
                if dimk == 0 {
                    continue;
                }
                let dd = target.d(k);
                let dc_in = self.d(m - 1);
                let sign = f.sign(n.rem_euclid(2) == 0); // -(-1)^n
                for i in 0..self.dim(m) {
                    for j in 0..dimk {
                        let mut acc = Accum::new(f);
                        // d_D ∘ φ : c_i ↦ d(e_j) in degree m + n + 1
                        if let Some(&off) = index.get(&(m, n + 1)) {
                            let w = target.dim(k + 1);
                            for (r, c) in dd.column(j) {
                                acc.add(off + i * w + r, c);
                            }
                        }
                        // φ ∘ d_C : c' ∈ C^{m-1} ↦ coefficient of c_i in d c' times e_j
                        if let Some(&off) = index.get(&(m - 1, n + 1)) {
                            for (src, col) in dc_in.columns().iter().enumerate() {
                                for (r, c) in col {
                                    if *r == i {
                                        acc.add(off + src * dimk + j, &f.mul(&sign, c));
                                    }
                                }
                            }
                        }
                        cols.push(acc.finish());
                    }
                }
            }
            d.insert(n, Matrix::from_columns(f, space.dim(n + 1), cols)?);
        }
        Complex::new(f, space, d)
    }

    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.space.dims()
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = self.space.dims().iter().map(|(n, d)| format!("{n}:{d}")).collect();
        write!(f, "Complex over {} dims {{{}}}", self.field, dims.join(", "))
    }
}

fn check_field(a: Field, b: Field) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::FieldMismatch(a, b))
    }
}

/// A graded map of complexes; `component(n)` maps `C^n` to `D^{n + degree}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    source: Complex,
    target: Complex,
    degree: i64,
    components: BTreeMap<i64, Matrix>,
}

impl ChainMap {
    /// Checks `d f = (-1)^{degree} f d`.
    pub fn new(
        source: Complex,
        target: Complex,
        degree: i64,
        components: BTreeMap<i64, Matrix>,
    ) -> Result<Self> {
        check_field(source.field, target.field)?;
        let f = source.field;
        for (n, m) in &components {
            if m.cols() != source.dim(*n) || m.rows() != target.dim(n + degree) {
                return Err(Error::Dimension(format!("chain map component in degree {n}")));
            }
        }
        let map = ChainMap { source, target, degree, components };
        let sign = f.sign(degree.rem_euclid(2) == 1);
        let mut degs: Vec<i64> = map.source.degrees();
        degs.extend(map.source.degrees().iter().map(|n| n - 1));
        degs.sort();
        degs.dedup();
        for n in degs {
            let lhs = map.target.d(n + degree).compose(&map.component(n))?;
            let rhs = map.component(n + 1).compose(&map.source.d(n))?.scale(&sign);
            if lhs != rhs {
                return Err(Error::NotAChainMap(format!("fails in source degree {n}")));
            }
        }
        Ok(map)
    }

    pub fn identity(c: &Complex) -> Self {
        let components =
            c.degrees().into_iter().map(|n| (n, Matrix::identity(c.field, c.dim(n)))).collect();
        ChainMap { source: c.clone(), target: c.clone(), degree: 0, components }
    }

    pub fn zero(source: &Complex, target: &Complex, degree: i64) -> Self {
        ChainMap { source: source.clone(), target: target.clone(), degree, components: BTreeMap::new() }
    }

    pub fn source(&self) -> &Complex {
        &self.source
    }
    pub fn target(&self) -> &Complex {
        &self.target
    }
    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn component(&self, n: i64) -> Matrix {
        self.components.get(&n).cloned().unwrap_or_else(|| {
            Matrix::zero(self.source.field, self.target.dim(n + self.degree), self.source.dim(n))
        })
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ChainMap) -> Result<ChainMap> {
        if other.target != self.source {
            return Err(Error::Invalid("composing chain maps with mismatched ends".into()));
        }
        let mut components = BTreeMap::new();
        for n in other.source.degrees() {
            let c = self.component(n + other.degree).compose(&other.component(n))?;
            components.insert(n, c);
        }
        ChainMap::new(other.source.clone(), self.target.clone(), self.degree + other.degree, components)
    }

    /// Mapping cone `A[1] ⊕ B` with `d(a, b) = (-d a, f a + d b)`, plus the
    /// canonical maps `B → cone` and `cone → A[1]`.
    pub fn cone(&self) -> Result<(Complex, ChainMap, ChainMap)> {
        if self.degree != 0 {
            return Err(Error::NonzeroDegree(self.degree));
        }
        let fld = self.source.field;
        let a1 = self.source.shift(1);
        let b = &self.target;
        let mut space = GradedSpace::new();
        let mut degs: Vec<i64> = a1.degrees();
        degs.extend(b.degrees());
        degs.sort();
        degs.dedup();
        for &n in &degs {
            for l in a1.space.labels(n) {
                space.push(n, format!("{l}[1]"));
            }
            for l in b.space.labels(n) {
                space.push(n, l.clone());
            }
        }
        let mut d = BTreeMap::new();
        for &n in &degs {
            let na = a1.dim(n);
            let na1 = a1.dim(n + 1);
            let da = a1.d(n); // already carries the minus sign
            let fa = self.component(n + 1);
            let db = b.d(n);
            let mut cols = Vec::new();
            for i in 0..na {
                let mut acc = Accum::new(fld);
                for (r, c) in da.column(i) {
                    acc.add(*r, c);
                }
                for (r, c) in fa.column(i) {
                    acc.add(na1 + r, c);
                }
                cols.push(acc.finish());
            }
            for j in 0..b.dim(n) {
                cols.push(db.column(j).iter().map(|(r, c)| (na1 + r, c.clone())).collect());
            }
            d.insert(n, Matrix::from_columns(fld, space.dim(n + 1), cols)?);
        }
        let cone = Complex::new(fld, space, d)?;
        let mut inc = BTreeMap::new();
        let mut proj = BTreeMap::new();
        for &n in &degs {
            let na = a1.dim(n);
            let cols = (0..b.dim(n)).map(|j| vec![(na + j, fld.one())]).collect();
            inc.insert(n, Matrix::from_columns(fld, cone.dim(n), cols)?);
            let mut pcols: Vec<SVec> = (0..na).map(|i| vec![(i, fld.one())]).collect();
            pcols.extend((0..b.dim(n)).map(|_| Vec::new()));
            proj.insert(n, Matrix::from_columns(fld, na, pcols)?);
        }
        let inc = ChainMap::new(b.clone(), cone.clone(), 0, inc)?;
        let proj = ChainMap::new(cone.clone(), a1, 0, proj)?;
        Ok((cone, inc, proj))
    }

    pub fn is_quasi_iso(&self) -> Result<bool> {
        Ok(self.cone()?.0.is_acyclic())
    }

    /// Whether `self` and `other` induce the same map on cohomology.
    pub fn agrees_on_cohomology(&self, other: &ChainMap) -> Result<bool> {
        if self.degree != other.degree || self.source != other.source || self.target != other.target {
            return Ok(false);
        }
        for (n, h) in self.source.cohomology() {
            let target_h = self.target.cohomology_at(n + self.degree);
            for rep in &h.reps {
                let diff = crate::linalg::sv_sub(
                    &self.source.field,
                    &self.component(n).apply(rep),
                    &other.component(n).apply(rep),
                );
                if !target_h.is_exact(&diff) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Mapping telescope of `C_0 → C_1 → … → C_m`: the cone of
/// `⊕_{i<m} C_i → ⊕_{i≤m} C_i`, `x_i ↦ x_i - f_i(x_i)`.
/// Quasi-isomorphic to `C_m`, which stands in for the constant tail.
pub fn telescope(maps: &[ChainMap], terms: &[Complex]) -> Result<Complex> {
    Ok(telescope_parts(maps, terms)?.0)
}

fn block_sum(field: Field, terms: &[Complex]) -> Result<Complex> {
    let mut acc = Complex::zero(field);
    for t in terms {
        acc = acc.direct_sum(t)?;
    }
    Ok(acc)
}

fn telescope_parts(maps: &[ChainMap], terms: &[Complex]) -> Result<(Complex, ChainMap)> {
    if terms.is_empty() || maps.len() + 1 != terms.len() {
        return Err(Error::Invalid("a telescope needs m+1 terms and m maps".into()));
    }
    for (i, f) in maps.iter().enumerate() {
        if f.source != terms[i] || f.target != terms[i + 1] || f.degree != 0 {
            return Err(Error::NotComposable(i));
        }
    }
    let fld = terms[0].field;
    let src = block_sum(fld, &terms[..terms.len() - 1])?;
    let tgt = block_sum(fld, terms)?;
    let mut comps = BTreeMap::new();
    for n in src.degrees() {
        let mut cols = Vec::new();
        let mut off_t: Vec<usize> = Vec::new();
        let mut acc_off = 0;
        for t in terms {
            off_t.push(acc_off);
            acc_off += t.dim(n);
        }
        for (i, f) in maps.iter().enumerate() {
            let fi = f.component(n);
            for k in 0..terms[i].dim(n) {
                let mut acc = Accum::new(fld);
                acc.add(off_t[i] + k, &fld.one());
                for (r, c) in fi.column(k) {
                    acc.add(off_t[i + 1] + r, &fld.neg(c));
                }
                cols.push(acc.finish());
            }
        }
        comps.insert(n, Matrix::from_columns(fld, tgt.dim(n), cols)?);
    }
    let phi = ChainMap::new(src, tgt, 0, comps)?;
    let cone = phi.cone()?.0;
    Ok((cone, phi))
}

/// Map of telescopes induced by a ladder of chain maps `g_i: C_i → D_i`
/// that commutes strictly with the sequence maps.
pub fn telescope_map(
    maps_c: &[ChainMap],
    terms_c: &[Complex],
    maps_d: &[ChainMap],
    terms_d: &[Complex],
    ladder: &[ChainMap],
) -> Result<ChainMap> {
    if ladder.len() != terms_c.len() || terms_c.len() != terms_d.len() {
        return Err(Error::Invalid("ladder length mismatch".into()));
    }
    for i in 0..maps_c.len() {
        let a = maps_d[i].compose(&ladder[i])?;
        let b = ladder[i + 1].compose(&maps_c[i])?;
        if a != b {
            return Err(Error::NotAChainMap(format!("ladder square {i} does not commute")));
        }
    }
    let (tc, _) = telescope_parts(maps_c, terms_c)?;
    let (td, _) = telescope_parts(maps_d, terms_d)?;
    let fld = tc.field;
    // telescope in degree n = (⊕_{i<m} C_i^{n+1}) ⊕ (⊕_{i≤m} C_i^n)
    let mut comps = BTreeMap::new();
    for n in tc.degrees() {
        let mut cols = Vec::new();
        let blocks = |terms: &[Complex], k: i64, upto: usize| -> Vec<usize> {
            let mut offs = Vec::new();
            let mut o = 0;
            for t in &terms[..upto] {
                offs.push(o);
                o += t.dim(k);
            }
            offs.push(o);
            offs
        };
        let m = terms_c.len() - 1;
        let offd_shift = blocks(terms_d, n + 1, m);
        let offd = blocks(terms_d, n, m + 1);
        let base_d = offd_shift[m];
        for i in 0..m {
            let g = ladder[i].component(n + 1);
            for k in 0..terms_c[i].dim(n + 1) {
                cols.push(g.column(k).iter().map(|(r, c)| (offd_shift[i] + r, c.clone())).collect());
            }
        }
        for i in 0..=m {
            let g = ladder[i].component(n);
            for k in 0..terms_c[i].dim(n) {
                cols.push(g.column(k).iter().map(|(r, c)| (base_d + offd[i] + r, c.clone())).collect());
            }
        }
        comps.insert(n, Matrix::from_columns(fld, td.dim(n), cols)?);
    }
    ChainMap::new(tc, td, 0, comps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k_to_k(f: Field, scalar: i64) -> ChainMap {
        let k = Complex::unit(f, 0);
        let m = Matrix::from_rows_i64(f, &[vec![scalar]]).unwrap();
        ChainMap::new(k.clone(), k, 0, BTreeMap::from([(0, m)])).unwrap()
    }

    #[test]
    fn unit_complex_cohomology() {
        let c = Complex::unit(Field::Rationals, 0);
        assert_eq!(c.cohomology_ranks(), Ranks::from([(0, 1)]));
    }

    #[test]
    fn identity_two_term_is_acyclic() {
        let f = Field::prime(3).unwrap();
        let mut s = GradedSpace::new();
        s.push(0, "a");
        s.push(1, "b");
        let d = BTreeMap::from([(0, Matrix::identity(f, 1))]);
        assert!(Complex::new(f, s, d).unwrap().is_acyclic());
    }

    #[test]
    fn rejects_non_complex() {
        let f = Field::prime(2).unwrap();
        let mut s = GradedSpace::new();
        s.push(0, "a");
        s.push(1, "b");
        s.push(2, "c");
        let d = BTreeMap::from([(0, Matrix::identity(f, 1)), (1, Matrix::identity(f, 1))]);
        assert_eq!(Complex::new(f, s, d), Err(Error::NotAComplex(0)));
    }

    #[test]
    fn shift_moves_degrees_down() {
        let c = Complex::unit(Field::Rationals, 0).shift(1);
        assert_eq!(c.dims(), BTreeMap::from([(-1, 1)]));
    }

    #[test]
    fn cone_examples() {
        let q = Field::Rationals;
        assert!(k_to_k(q, 1).cone().unwrap().0.is_acyclic());
        let zero_cone = k_to_k(q, 0).cone().unwrap().0;
        assert_eq!(zero_cone.cohomology_ranks(), Ranks::from([(-1, 1), (0, 1)]));
        let f3 = Field::prime(3).unwrap();
        let f2 = Field::prime(2).unwrap();
        assert!(k_to_k(f3, 2).cone().unwrap().0.is_acyclic());
        assert_eq!(k_to_k(f2, 2).cone().unwrap().0.cohomology_ranks(), Ranks::from([(-1, 1), (0, 1)]));
    }

    #[test]
    fn cone_of_nonzero_degree_rejected() {
        let q = Field::Rationals;
        let k0 = Complex::unit(q, 0);
        let k1 = Complex::unit(q, 1);
        let f = ChainMap::zero(&k0, &k1, 1);
        assert_eq!(f.cone().unwrap_err(), Error::NonzeroDegree(1));
    }

    #[test]
    fn quasi_iso_examples() {
        let q = Field::Rationals;
        assert!(k_to_k(q, 1).is_quasi_iso().unwrap());
        assert!(!k_to_k(q, 0).is_quasi_iso().unwrap());
    }

    #[test]
    fn tensor_examples() {
        let q = Field::Rationals;
        let mut s = GradedSpace::new();
        s.push(0, "a");
        s.push(1, "b");
        let c = Complex::from_space(q, s);
        let t = c.tensor(&c).unwrap();
        assert_eq!(t.dims(), BTreeMap::from([(0, 1), (1, 2), (2, 1)]));
        assert_eq!(c.tensor(&Complex::unit(q, 0)).unwrap().dims(), c.dims());
    }

    #[test]
    fn hom_complex_degrees() {
        let q = Field::Rationals;
        let h = Complex::unit(q, 0).hom_complex(&Complex::unit(q, 0)).unwrap();
        assert_eq!(h.cohomology_ranks(), Ranks::from([(0, 1)]));
        let h = Complex::unit(q, 1).hom_complex(&Complex::unit(q, 0)).unwrap();
        assert_eq!(h.dims(), BTreeMap::from([(-1, 1)]));
    }

    #[test]
    fn telescope_examples() {
        let q = Field::Rationals;
        let id = k_to_k(q, 1);
        let k = Complex::unit(q, 0);
        let t = telescope(&[id.clone(), id], &[k.clone(), k.clone(), k]).unwrap();
        assert_eq!(t.cohomology_ranks(), Ranks::from([(0, 1)]));
        let single = telescope(&[], &[Complex::unit(q, 2)]).unwrap();
        assert_eq!(single.cohomology_ranks(), Ranks::from([(2, 1)]));
    }

    #[test]
    fn telescope_rejects_mismatched_maps() {
        let q = Field::Rationals;
        let id = k_to_k(q, 1);
        let err = telescope(&[id], &[Complex::unit(q, 0), Complex::unit(q, 1)]).unwrap_err();
        assert_eq!(err, Error::NotComposable(0));
    }
}
