use std::collections::BTreeMap;

use ainf::category::CategoryBuilder;
use ainf::corpus;
use ainf::functor::{full_subcategory, AInfFunctor, Equivalence, DEFAULT_WITNESS_CAP};
use ainf::twisted::{tw_cone, TwFragment, TwObject};
use ainf::Field;

fn fields() -> Vec<Field> {
    vec![Field::prime(2).unwrap(), Field::prime(3).unwrap(), Field::Rationals]
}

#[test]
fn identity_functors_pass_and_are_equivalences() {
    for field in fields() {
        for (name, cat) in corpus::all(field).unwrap() {
            let id = AInfFunctor::identity(&cat);
            let report = id.check(cat.kmax() + 2);
            assert!(report.passed(), "{name}: {report}");
            assert_eq!(id.is_equivalence(&[], DEFAULT_WITNESS_CAP).unwrap(), Equivalence::Yes, "{name}");
        }
    }
}

#[test]
fn full_inclusions_pass() {
    let field = Field::Rationals;
    let cat = corpus::homotopy_associative(field).unwrap();
    for names in [vec!["P0", "P3"], vec!["P0", "P1", "P2"], vec!["P1"]] {
        let (sub, inc) = full_subcategory(&cat, &names).unwrap();
        assert!(sub.check_relations(sub.kmax() + 2).passed());
        assert!(inc.check(5).passed(), "{names:?}");
    }
}

#[test]
fn linear_components_are_chain_maps() {
    // re-verified independently of the functor equations
    let field = Field::prime(5).unwrap();
    for (name, cat) in corpus::all(field).unwrap() {
        let names: Vec<&str> = cat.objects().iter().take(1).map(|s| s.as_str()).collect();
        let (_, inc) = full_subcategory(&cat, &names).unwrap();
        assert!(inc.check(4).passed(), "{name}");
        for g in 0..inc.source().gens().len() {
            let v = vec![(g, field.one())];
            let lhs = inc.target().mu_lin(&[&inc.apply1(&v)]);
            let rhs = inc.apply1(&inc.source().mu_lin(&[&v]));
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn corrupted_components_fail() {
    let field = Field::Rationals;
    let cat = corpus::homotopy_associative(field).unwrap();
    let id = AInfFunctor::identity(&cat);
    let g = |n: &str| cat.gen_index(n).unwrap();
    // a degree-correct F² that breaks the arity-2 equation
    let mut comps = id.components().clone();
    comps.insert(vec![g("h"), g("gf")], vec![(g("z"), field.one())]);
    let bad = AInfFunctor::new(cat.clone(), cat.clone(), (0..4).collect(), comps).unwrap();
    let report = bad.check(4);
    let failure = report.failure.expect("corrupted F² must fail");
    assert_eq!(failure.args, vec!["h", "gf"]);
    // a sign flip on one linear component
    let mut comps = id.components().clone();
    comps.insert(vec![g("gf")], vec![(g("gf"), field.from_i64(-1))]);
    let bad = AInfFunctor::new(cat.clone(), cat.clone(), (0..4).collect(), comps).unwrap();
    assert!(!bad.check(4).passed());
}

#[test]
fn non_strict_functor_with_one_sign() {
    // F¹ = id except F¹(p) = q and F¹(z) = 0; then μ¹F²(h, gf) must make up
    // for F¹(μ²(h, gf)) - μ²(F¹h, F¹gf), so F²(h, gf) = ±z for exactly one sign
    let field = Field::Rationals;
    let cat = corpus::homotopy_associative(field).unwrap();
    let g = |n: &str| cat.gen_index(n).unwrap();
    let id = AInfFunctor::identity(&cat);
    let mut passing = Vec::new();
    for sign in [1i64, -1] {
        let mut comps = id.components().clone();
        comps.insert(vec![g("p")], vec![(g("q"), field.one())]);
        comps.remove(&vec![g("z")]);
        comps.insert(vec![g("h"), g("gf")], vec![(g("z"), field.from_i64(sign))]);
        let f = AInfFunctor::new(cat.clone(), cat.clone(), (0..4).collect(), comps).unwrap();
        assert!(!f.is_strict());
        if f.check(5).passed() {
            passing.push(sign);
        }
    }
    assert_eq!(passing.len(), 1, "{passing:?}");
}

#[test]
fn missing_object_is_not_an_equivalence() {
    let field = Field::prime(2).unwrap();
    let mut b = CategoryBuilder::new(field);
    b.unital_object("X").unwrap();
    b.unital_object("Y").unwrap();
    let two = b.build().unwrap();
    let (_, inc) = full_subcategory(&two, &["X"]).unwrap();
    assert!(matches!(inc.is_equivalence(&[], DEFAULT_WITNESS_CAP).unwrap(), Equivalence::No(_)));
}

#[test]
fn inclusion_into_tw_with_identity_cones() {
    let field = Field::prime(2).unwrap();
    // the contractible algebra: cone(id_O) is isomorphic to O, both are zero
    let cat = corpus::contractible(field).unwrap();
    let o = TwObject::plain(&cat, 0);
    let cone = tw_cone(&cat, &o, &o, &o.identity(&cat), "C").unwrap().cone;
    let frag = TwFragment::new(&cat, vec![cone]).unwrap();
    let inc = AInfFunctor::by_names(&cat, frag.cat()).unwrap();
    assert!(inc.check(4).passed());
    assert_eq!(inc.is_equivalence(&[], DEFAULT_WITNESS_CAP).unwrap(), Equivalence::Yes);
    // a one-summand copy of X in A₂ is found isomorphic to X by search
    let a2 = corpus::a2(field).unwrap();
    let copy = TwObject::new(&a2, "X2", vec![(0, 0)], BTreeMap::new()).unwrap();
    let frag = TwFragment::new(&a2, vec![copy]).unwrap();
    let inc = AInfFunctor::by_names(&a2, frag.cat()).unwrap();
    assert_eq!(inc.is_equivalence(&[], DEFAULT_WITNESS_CAP).unwrap(), Equivalence::Yes);
    // while cone(id_X) in A₂ is a zero object that A₂ lacks
    let x = TwObject::plain(&a2, 0);
    let cone = tw_cone(&a2, &x, &x, &x.identity(&a2), "C").unwrap().cone;
    let frag = TwFragment::new(&a2, vec![cone]).unwrap();
    let inc = AInfFunctor::by_names(&a2, frag.cat()).unwrap();
    assert!(matches!(inc.is_equivalence(&[], DEFAULT_WITNESS_CAP).unwrap(), Equivalence::No(_)));
    // over Q the search is not attempted
    let a2q = corpus::a2(Field::Rationals).unwrap();
    let copy = TwObject::new(&a2q, "X2", vec![(0, 0)], BTreeMap::new()).unwrap();
    let frag = TwFragment::new(&a2q, vec![copy]).unwrap();
    let inc = AInfFunctor::by_names(&a2q, frag.cat()).unwrap();
    assert!(matches!(inc.is_equivalence(&[], DEFAULT_WITNESS_CAP).unwrap(), Equivalence::Undecided(_)));
}
