use std::collections::BTreeMap;

use ainf::category::CategoryBuilder;
use ainf::complex::Ranks;
use ainf::corpus;
use ainf::twisted::{mc_check, tw_cone, TwFragment, TwMorphism, TwObject};
use ainf::Field;

fn single(j: usize, i: usize, g: usize, field: Field, c: i64) -> TwMorphism {
    TwMorphism { entries: BTreeMap::from([((j, i), vec![(g, field.from_i64(c))])]) }
}

#[test]
fn cone_of_a2_arrow() {
    let field = Field::Rationals;
    let a2 = corpus::a2(field).unwrap();
    let (x, y) = (TwObject::plain(&a2, 0), TwObject::plain(&a2, 1));
    assert!(mc_check(&a2, &x).is_ok());
    let f = single(0, 0, a2.gen_index("f").unwrap(), field, 1);
    let cone = tw_cone(&a2, &x, &y, &f, "C").unwrap();
    assert!(mc_check(&a2, &cone.cone).is_ok());
    let frag = TwFragment::new(&a2, vec![cone.cone.clone()]).unwrap();
    assert!(frag.cat().check_relations(4).passed());
    let c = frag.object_index("C").unwrap();
    assert_eq!(frag.tw_hom(c, c).unwrap().cohomology_ranks(), Ranks::from([(0, 1)]));
    // hom(Y, cone f) is not acyclic: f is not invertible
    assert!(!frag.tw_hom(1, c).unwrap().is_acyclic());
    assert_eq!(frag.tw_hom(1, c).unwrap().cohomology_ranks(), Ranks::from([(0, 1)]));
}

#[test]
fn cone_of_identity_is_zero() {
    for field in [Field::prime(2).unwrap(), Field::Rationals] {
        for (name, cat) in corpus::all(field).unwrap() {
            let x = TwObject::plain(&cat, 0);
            let cone = tw_cone(&cat, &x, &x, &x.identity(&cat), "K").unwrap();
            let frag = TwFragment::new(&cat, vec![cone.cone]).unwrap();
            let z = frag.object_index("K").unwrap();
            assert!(frag.is_zero_object(z).unwrap(), "{name}");
            let r = frag.cat().check_relations(frag.cat().kmax() + 1);
            assert!(r.passed(), "{name}: {r}");
        }
    }
}

#[test]
fn cone_of_two_depends_on_characteristic() {
    for (p, zero) in [(2, false), (3, true)] {
        let field = Field::prime(p).unwrap();
        let cat = corpus::point(field).unwrap();
        let x = TwObject::plain(&cat, 0);
        let two = single(0, 0, cat.unit(0), field, 2);
        let cone = tw_cone(&cat, &x, &x, &two, "Z").unwrap();
        let frag = TwFragment::new(&cat, vec![cone.cone]).unwrap();
        assert_eq!(frag.is_zero_object(1).unwrap(), zero);
    }
}

#[test]
fn non_closed_delta_fails_mc() {
    let field = Field::Rationals;
    let mut b = CategoryBuilder::new(field);
    b.unital_object("X").unwrap();
    b.unital_object("Y").unwrap();
    b.gen("a", "X", "Y", 0).unwrap();
    b.gen("b", "X", "Y", 1).unwrap();
    b.dg(&["a"], &[(1, "b")]).unwrap();
    let cat = b.build().unwrap();
    let delta = BTreeMap::from([((1, 0), vec![(cat.gen_index("a").unwrap(), field.one())])]);
    let e = TwObject::unchecked(&cat, "C", vec![(0, 1), (1, 0)], delta).unwrap();
    assert!(mc_check(&cat, &e).is_err());
}
