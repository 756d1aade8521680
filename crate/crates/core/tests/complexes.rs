use std::collections::BTreeMap;

use ainf::complex::{telescope, ChainMap, Complex, GradedSpace, Ranks};
use ainf::linalg::{Matrix, SVec};
use ainf::{Field, Scalar};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fields() -> Vec<Field> {
    vec![Field::prime(2).unwrap(), Field::prime(5).unwrap(), Field::Rationals]
}

fn rand_scalar(field: Field, rng: &mut ChaCha8Rng) -> Scalar {
    field.from_i64(rng.gen_range(-4..=4))
}

fn combo(field: Field, basis: &[SVec], rng: &mut ChaCha8Rng) -> SVec {
    let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
    for v in basis {
        let c = rand_scalar(field, rng);
        for (i, x) in v {
            let e = acc.entry(*i).or_insert_with(|| field.zero());
            *e = field.add(e, &field.mul(&c, x));
        }
    }
    acc.into_iter().filter(|(_, c)| !field.is_zero(c)).collect()
}

/// A random complex in degrees `lo..=hi`: each differential is built from
/// random combinations of the kernel of the next one, so `d² = 0`.
fn random_complex(field: Field, lo: i64, hi: i64, max_dim: usize, rng: &mut ChaCha8Rng) -> Complex {
    let dims: BTreeMap<i64, usize> = (lo..=hi).map(|n| (n, rng.gen_range(0..=max_dim))).collect();
    random_complex_with(field, &dims, rng)
}

fn random_complex_with(field: Field, dims: &BTreeMap<i64, usize>, rng: &mut ChaCha8Rng) -> Complex {
    let dim = |n: i64| dims.get(&n).copied().unwrap_or(0);
    let mut labels = BTreeMap::new();
    for (&n, &k) in dims {
        labels.insert(n, (0..k).map(|i| format!("c{n}_{i}")).collect());
    }
    let space = GradedSpace::from_labels(labels);
    let mut d: BTreeMap<i64, Matrix> = BTreeMap::new();
    let (lo, hi) = (*dims.keys().next().unwrap(), *dims.keys().last().unwrap());
    for n in (lo..hi).rev() {
        let next = d.get(&(n + 1)).cloned().unwrap_or_else(|| Matrix::zero(field, dim(n + 2), dim(n + 1)));
        let ker = next.kernel_basis();
        let cols = (0..dim(n)).map(|_| if rng.gen_bool(0.8) { combo(field, &ker, rng) } else { Vec::new() }).collect();
        d.insert(n, Matrix::from_columns(field, dim(n + 1), cols).unwrap());
    }
    Complex::new(field, space, d).unwrap()
}

/// Rank over F_p by dense elimination, independent of the library.
fn rank_mod_p(m: &Matrix, p: u64) -> usize {
    let mut a: Vec<Vec<u64>> = (0..m.rows())
        .map(|r| {
            (0..m.cols())
                .map(|c| match m.get(r, c) {
                    Scalar::Fp(x) => x as u64,
                    Scalar::Q(_) => unreachable!(),
                })
                .collect()
        })
        .collect();
    let inv = |x: u64| -> u64 {
        let (mut r, mut b, mut e) = (1u64, x % p, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    let mut rank = 0;
    for c in 0..m.cols() {
        let Some(piv) = (rank..a.len()).find(|&r| a[r][c] != 0) else { continue };
        a.swap(rank, piv);
        let iv = inv(a[rank][c]);
        for x in a[rank].iter_mut() {
            *x = *x * iv % p;
        }
        for r in 0..a.len() {
            if r != rank && a[r][c] != 0 {
                let f = a[r][c];
                for k in 0..m.cols() {
                    a[r][k] = (a[r][k] + p * p - f * a[rank][k] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn nonzero(r: Ranks) -> Ranks {
    r.into_iter().filter(|(_, k)| *k > 0).collect()
}

#[test]
fn cohomology_matches_rank_nullity_oracle() {
    let f7 = Field::prime(7).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let dims: BTreeMap<i64, usize> = [(0, 4), (1, 6), (2, 5), (3, 5)].into();
        let c = random_complex_with(f7, &dims, &mut rng);
        assert_eq!(c.total_dim(), 20);
        let r = c.cohomology_ranks();
        for n in -1..=4 {
            let want = c.dim(n) - rank_mod_p(&c.d(n), 7) - rank_mod_p(&c.d(n - 1), 7);
            assert_eq!(r.get(&n).copied().unwrap_or(0), want, "degree {n}");
        }
        for (n, h) in c.cohomology() {
            for rep in &h.reps {
                assert!(c.d(n).apply(rep).is_empty(), "representative is a cocycle");
            }
        }
    }
}

#[test]
fn shifts_compose_and_move_cohomology() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for field in fields() {
        for _ in 0..20 {
            let c = random_complex(field, -2, 2, 3, &mut rng);
            let (s, t) = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
            assert_eq!(c.shift(s).shift(t), c.shift(s + t));
            assert_eq!(c.shift(s).shift(-s), c);
            let (h, hs) = (c.cohomology_ranks(), c.shift(s).cohomology_ranks());
            for n in -6..=6 {
                assert_eq!(hs.get(&n).copied().unwrap_or(0), h.get(&(n + s)).copied().unwrap_or(0));
            }
        }
    }
}

/// A random degree-0 chain map, read off from a random cocycle of the hom complex.
fn random_chain_map(c: &Complex, d: &Complex, rng: &mut ChaCha8Rng) -> ChainMap {
    let field = c.field();
    let hom = c.hom_complex(d).unwrap();
    let v = combo(field, &hom.d(0).kernel_basis(), rng);
    let mut comps = BTreeMap::new();
    let mut off = 0;
    for m in c.degrees() {
        let (dm, dk) = (c.dim(m), d.dim(m));
        let mut cols: Vec<SVec> = vec![Vec::new(); dm];
        for (idx, x) in &v {
            if *idx >= off && *idx < off + dm * dk {
                let (i, j) = ((idx - off) / dk, (idx - off) % dk);
                cols[i].push((j, x.clone()));
            }
        }
        off += dm * dk;
        comps.insert(m, Matrix::from_columns(field, dk, cols).unwrap());
    }
    ChainMap::new(c.clone(), d.clone(), 0, comps).unwrap()
}

/// Quasi-isomorphism by definition: the induced map on every `Hⁿ` is bijective.
fn induces_iso(f: &ChainMap) -> bool {
    let (c, d) = (f.source(), f.target());
    let degrees: Vec<i64> = c.degrees().into_iter().chain(d.degrees()).collect();
    degrees.into_iter().all(|n| {
        let (hc, hd) = (c.cohomology_at(n), d.cohomology_at(n));
        if hc.rank() != hd.rank() {
            return false;
        }
        let images: Vec<SVec> = hc.reps.iter().map(|r| hd.class_of(&f.component(n).apply(r)).unwrap()).collect();
        Matrix::from_columns(c.field(), hd.rank(), images).unwrap().rank() == hd.rank()
    })
}

#[test]
fn cone_acyclic_iff_quasi_iso() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for field in fields() {
        let mut seen = (0, 0);
        for _ in 0..100 {
            let c = random_complex(field, -1, 2, 3, &mut rng);
            // a target cohomologically close to the source makes quasi-isos common
            let d = if rng.gen_bool(0.5) { c.clone() } else { random_complex(field, -1, 2, 3, &mut rng) };
            let f = random_chain_map(&c, &d, &mut rng);
            let qi = f.is_quasi_iso().unwrap();
            assert_eq!(qi, induces_iso(&f));
            assert_eq!(qi, f.cone().unwrap().0.is_acyclic());
            if qi {
                seen.0 += 1
            } else {
                seen.1 += 1
            }
        }
        assert!(seen.0 > 0 && seen.1 > 0, "{field}: both outcomes exercised {seen:?}");
    }
}

#[test]
fn deformation_retract_inclusions_are_quasi_isos() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for field in fields() {
        for _ in 0..20 {
            let c = random_complex(field, -1, 2, 3, &mut rng);
            let junk = random_complex(field, -1, 2, 3, &mut rng);
            let acyclic = ChainMap::identity(&junk).cone().unwrap().0;
            let big = c.direct_sum(&acyclic).unwrap();
            let comps = c
                .degrees()
                .into_iter()
                .map(|n| (n, Matrix::from_columns(field, big.dim(n), (0..c.dim(n)).map(|i| vec![(i, field.one())]).collect()).unwrap()))
                .collect();
            let inc = ChainMap::new(c.clone(), big.clone(), 0, comps).unwrap();
            assert!(inc.is_quasi_iso().unwrap() && induces_iso(&inc));
            // the retraction back is one too, and the composite is the identity
            let back = big
                .degrees()
                .into_iter()
                .map(|n| {
                    let cols = (0..big.dim(n)).map(|i| if i < c.dim(n) { vec![(i, field.one())] } else { Vec::new() }).collect();
                    (n, Matrix::from_columns(field, c.dim(n), cols).unwrap())
                })
                .collect();
            let r = ChainMap::new(big, c.clone(), 0, back).unwrap();
            assert!(r.is_quasi_iso().unwrap());
            assert_eq!(r.compose(&inc).unwrap(), ChainMap::identity(&c));
        }
    }
}

fn kunneth(c: &Complex, d: &Complex) -> Ranks {
    let mut out = Ranks::new();
    for (a, x) in c.cohomology_ranks() {
        for (b, y) in d.cohomology_ranks() {
            *out.entry(a + b).or_insert(0) += x * y;
        }
    }
    nonzero(out)
}

#[test]
fn kunneth_over_f5() {
    let f5 = Field::prime(5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let c = random_complex(f5, -1, 2, 3, &mut rng);
        let d = random_complex(f5, 0, 2, 3, &mut rng);
        assert_eq!(nonzero(c.tensor(&d).unwrap().cohomology_ranks()), kunneth(&c, &d));
    }
}

#[test]
fn hom_complex_h0_counts_homotopy_classes_over_f2() {
    // C = D = (k² → k) in degrees 0, 1 with d = [1 0]: enumerate all degree-0
    // chain maps and all null-homotopic ones
    let f2 = Field::prime(2).unwrap();
    let space = GradedSpace::from_labels([(0, vec!["a".into(), "b".into()]), (1, vec!["c".into()])].into());
    let d0 = Matrix::from_rows_i64(f2, &[vec![1, 0]]).unwrap();
    let c = Complex::new(f2, space, [(0, d0)].into()).unwrap();
    let bits = |x: u32, k: u32| -> i64 { ((x >> k) & 1) as i64 };
    let mut chain_maps = 0u32;
    for code in 0..32u32 {
        let f0 = Matrix::from_rows_i64(f2, &[vec![bits(code, 0), bits(code, 1)], vec![bits(code, 2), bits(code, 3)]]).unwrap();
        let f1 = Matrix::from_rows_i64(f2, &[vec![bits(code, 4)]]).unwrap();
        if ChainMap::new(c.clone(), c.clone(), 0, [(0, f0), (1, f1)].into()).is_ok() {
            chain_maps += 1;
        }
    }
    // homotopies h: C¹ → D⁰ give d h + h d; over F2 distinct h give distinct maps here
    let mut null = std::collections::BTreeSet::new();
    for code in 0..4u32 {
        let h = Matrix::from_rows_i64(f2, &[vec![bits(code, 0)], vec![bits(code, 1)]]).unwrap();
        let at0 = h.compose(&c.d(0)).unwrap();
        let at1 = c.d(0).compose(&h).unwrap();
        null.insert(format!("{at0:?}{at1:?}"));
    }
    let classes = chain_maps / null.len() as u32;
    let rank = classes.trailing_zeros() as usize;
    assert_eq!(1u32 << rank, classes);
    assert_eq!(c.hom_complex(&c).unwrap().cohomology_rank(0), rank);
}

fn scalar_map(c: &Complex, s: i64) -> ChainMap {
    let field = c.field();
    let comps = c.degrees().into_iter().map(|n| (n, Matrix::identity(field, c.dim(n)).scale(&field.from_i64(s)))).collect();
    ChainMap::new(c.clone(), c.clone(), 0, comps).unwrap()
}

/// The map `cone(φ) → cone(φ')` induced by `f` on both ends, `f[1] ⊕ f`.
fn cone_map(f: &ChainMap, src: &Complex, tgt: &Complex, a: &Complex, b: &Complex) -> ChainMap {
    let field = f.source().field();
    let comps = src
        .degrees()
        .into_iter()
        .map(|n| {
            let top = f.component(n + 1);
            let bot = f.component(n);
            let (ra, ca) = (b.dim(n + 1), a.dim(n + 1));
            let mut cols: Vec<SVec> = (0..ca).map(|i| top.column(i).clone()).collect();
            cols.extend((0..a.dim(n)).map(|i| bot.column(i).iter().map(|(r, x)| (ra + r, x.clone())).collect()));
            (n, Matrix::from_columns(field, tgt.dim(n), cols).unwrap())
        })
        .collect();
    ChainMap::new(src.clone(), tgt.clone(), 0, comps).unwrap()
}

#[test]
fn telescopes() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for field in fields() {
        let k = Complex::unit(field, 0);
        let id = ChainMap::identity(&k);
        assert_eq!(telescope(&[id.clone(), id.clone()], &[k.clone(), k.clone(), k.clone()]).unwrap().cohomology_ranks(), [(0, 1)].into());
        for _ in 0..10 {
            let c = random_complex(field, -1, 1, 3, &mut rng);
            let idc = ChainMap::identity(&c);
            let t = telescope(&[idc.clone(), idc.clone()], &[c.clone(), c.clone(), c.clone()]).unwrap();
            assert_eq!(nonzero(t.cohomology_ranks()), nonzero(c.cohomology_ranks()));

            // telescope of cones vs cone of the induced map of telescopes, with
            // the ladder φ = multiplication by s on every term
            let d = random_complex(field, -1, 1, 3, &mut rng);
            let f1 = random_chain_map(&c, &d, &mut rng);
            let f2 = random_chain_map(&d, &d, &mut rng);
            let terms = vec![c.clone(), d.clone(), d.clone()];
            let maps = vec![f1.clone(), f2.clone()];
            let s = rng.gen_range(0..=2);
            let ladder: Vec<ChainMap> = terms.iter().map(|t| scalar_map(t, s)).collect();
            let cones: Vec<Complex> = ladder.iter().map(|l| l.cone().unwrap().0).collect();
            let cone_maps: Vec<ChainMap> =
                (0..2).map(|i| cone_map(&maps[i], &cones[i], &cones[i + 1], &terms[i], &terms[i + 1])).collect();
            let tel_of_cones = telescope(&cone_maps, &cones).unwrap();
            let tmap = ainf::complex::telescope_map(&maps, &terms, &maps, &terms, &ladder).unwrap();
            let cone_of_tel = tmap.cone().unwrap().0;
            assert_eq!(nonzero(tel_of_cones.cohomology_ranks()), nonzero(cone_of_tel.cohomology_ranks()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prop_d_squared_and_kunneth(seed in any::<u64>(), fi in 0usize..3) {
        let field = fields()[fi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_complex(field, -1, 1, 3, &mut rng);
        let d = random_complex(field, 0, 1, 2, &mut rng);
        for n in c.degrees() {
            prop_assert!(c.d(n + 1).compose(&c.d(n)).unwrap().is_zero());
        }
        prop_assert_eq!(nonzero(c.tensor(&d).unwrap().cohomology_ranks()), kunneth(&c, &d));
        let unit = Complex::unit(field, 0);
        prop_assert_eq!(nonzero(c.tensor(&unit).unwrap().cohomology_ranks()), nonzero(c.cohomology_ranks()));
    }

    #[test]
    fn prop_cone_of_identity_is_acyclic(seed in any::<u64>(), fi in 0usize..3) {
        let field = fields()[fi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_complex(field, -2, 2, 3, &mut rng);
        prop_assert!(ChainMap::identity(&c).cone().unwrap().0.is_acyclic());
    }
}
