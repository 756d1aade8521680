use std::collections::BTreeMap;

use ainf::category::AInfCategory;
use ainf::corpus;
use ainf::linalg::SVec;
use ainf::twisted::{tw_cone, tw_mu, TwFragment, TwMorphism, TwObject};
use ainf::{Field, Scalar};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_scalar(field: Field, rng: &mut ChaCha8Rng) -> Scalar {
    loop {
        let c = field.from_i64(rng.gen_range(-3..=3));
        if !field.is_zero(&c) {
            return c;
        }
    }
}

/// A random closed element of `hom(x, y)` of degree `n`, as generator coordinates.
fn random_cocycle(cat: &AInfCategory, x: usize, y: usize, n: i64, rng: &mut ChaCha8Rng) -> SVec {
    let field = cat.field();
    let hom = cat.hom(x, y).unwrap();
    let gens: Vec<usize> = cat.hom_basis(x, y).iter().copied().filter(|&g| cat.gen(g).deg == n).collect();
    let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
    for k in hom.d(n).kernel_basis() {
        if rng.gen_bool(0.7) {
            let c = random_scalar(field, rng);
            for (i, v) in k {
                let e = acc.entry(gens[i]).or_insert_with(|| field.zero());
                *e = field.add(e, &field.mul(&c, &v));
            }
        }
    }
    acc.into_iter().filter(|(_, c)| !field.is_zero(c)).collect()
}

/// A plain shifted object or the cone of a random closed degree-0 map between
/// shifted objects.
fn random_object(cat: &AInfCategory, name: &str, rng: &mut ChaCha8Rng) -> TwObject {
    let n = cat.num_objects();
    let x = rng.gen_range(0..n);
    let a = rng.gen_range(-1..=1);
    if rng.gen_bool(0.3) {
        return TwObject::plain(cat, x).shift(a, name);
    }
    let y = rng.gen_range(0..n);
    let degrees: Vec<i64> = cat.hom_basis(x, y).iter().map(|&g| cat.gen(g).deg).collect();
    let deg = *degrees.choose(rng).unwrap_or(&0);
    let m = random_cocycle(cat, x, y, deg, rng);
    let e = TwObject::plain(cat, x).shift(a, "E");
    let f = TwObject::plain(cat, y).shift(a + deg, "F");
    let mor = TwMorphism { entries: BTreeMap::from([((0, 0), m)]).into_iter().filter(|(_, v)| !v.is_empty()).collect() };
    tw_cone(cat, &e, &f, &mor, name).unwrap().cone
}

/// A random homogeneous morphism of shifted degree `d`.
fn random_morphism(cat: &AInfCategory, e: &TwObject, f: &TwObject, d: i64, rng: &mut ChaCha8Rng) -> TwMorphism {
    let field = cat.field();
    let mut entries = BTreeMap::new();
    for (j, &(x, sx)) in e.summands.iter().enumerate() {
        for (i, &(y, sy)) in f.summands.iter().enumerate() {
            let mut v: SVec = Vec::new();
            for &g in cat.hom_basis(x, y) {
                if cat.gen(g).deg + sx - sy == d && rng.gen_bool(0.6) {
                    v.push((g, random_scalar(field, rng)));
                }
            }
            v.sort_by_key(|e| e.0);
            if !v.is_empty() {
                entries.insert((j, i), v);
            }
        }
    }
    TwMorphism { entries }
}

fn categories() -> Vec<(String, AInfCategory)> {
    let mut out = Vec::new();
    for field in [Field::prime(2).unwrap(), Field::prime(5).unwrap(), Field::Rationals] {
        for (name, cat) in corpus::all(field).unwrap() {
            out.push((format!("{name}/{field}"), cat));
        }
    }
    out
}

#[test]
fn twisted_differential_squares_to_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (name, cat) in categories() {
        for _ in 0..100 {
            let e = random_object(&cat, "E", &mut rng);
            let f = random_object(&cat, "F", &mut rng);
            for d in -1..=1 {
                let a = random_morphism(&cat, &e, &f, d, &mut rng);
                let da = tw_mu(&cat, &[&e, &f], &[&a]).unwrap();
                let dda = tw_mu(&cat, &[&e, &f], &[&da]).unwrap();
                assert!(dda.is_zero(), "{name}: {e:?} -> {f:?}");
            }
        }
    }
}

#[test]
fn random_fragments_have_valid_hom_complexes() {
    // every hom complex is checked for d² = 0 when the fragment is built
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (name, cat) in categories() {
        for _ in 0..100 {
            let e = random_object(&cat, "E", &mut rng);
            let f = random_object(&cat, "F", &mut rng);
            let frag = TwFragment::new(&cat, vec![e, f]);
            assert!(frag.is_ok(), "{name}: {:?}", frag.err());
        }
    }
}

#[test]
fn random_fragments_satisfy_the_relations() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for (name, cat) in categories() {
        for _ in 0..5 {
            let e = random_object(&cat, "E", &mut rng);
            let f = random_object(&cat, "F", &mut rng);
            let frag = TwFragment::new(&cat, vec![e, f]).unwrap();
            let r = frag.cat().check_relations(cat.kmax() + 1);
            assert!(r.passed(), "{name}: {r}");
        }
    }
}

#[test]
fn units_survive_twisting() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for (name, cat) in categories() {
        for _ in 0..30 {
            let e = random_object(&cat, "E", &mut rng);
            let f = random_object(&cat, "F", &mut rng);
            let d = rng.gen_range(-1..=1);
            let g = random_morphism(&cat, &e, &f, d, &mut rng);
            let id_e = e.identity(&cat);
            let id_f = f.identity(&cat);
            assert_eq!(tw_mu(&cat, &[&e, &e, &f], &[&g, &id_e]).unwrap(), g, "{name}");
            let left = tw_mu(&cat, &[&e, &f, &f], &[&id_f, &g]).unwrap();
            let field = cat.field();
            let sign = field.sign(d.rem_euclid(2) == 1);
            let want = TwMorphism {
                entries: g.entries.iter().map(|(k, v)| (*k, ainf::linalg::sv_scale(&field, &sign, v))).collect(),
            };
            assert_eq!(left, want, "{name}");
        }
    }
}

#[test]
fn dg_inputs_have_no_higher_twisted_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for (name, cat) in categories() {
        if !cat.is_dg() {
            continue;
        }
        for _ in 0..30 {
            let objs: Vec<TwObject> = (0..4).map(|i| random_object(&cat, &format!("E{i}"), &mut rng)).collect();
            let args: Vec<TwMorphism> = (0..3)
                .map(|i| random_morphism(&cat, &objs[2 - i], &objs[3 - i], rng.gen_range(-1..=1), &mut rng))
                .collect();
            let o: Vec<&TwObject> = objs.iter().collect();
            let a: Vec<&TwMorphism> = args.iter().collect();
            assert!(tw_mu(&cat, &o, &a).unwrap().is_zero(), "{name}");
        }
    }
}
