use std::collections::BTreeMap;

use ainf::bar::{drinfeld_quotient_hom, Window};
use ainf::complex::ranks_in;
use ainf::corpus;
use ainf::functor::AInfFunctor;
use ainf::localize::{
    check_local_sequence, cone_subcategory, localize_diagram, localize_hom, Localization, LocalizationSpec,
    ObjectSequence,
};
use ainf::{Error, Field};

fn w() -> Window {
    Window::new(-3, 3).unwrap()
}

#[test]
fn cone_subcategory_shapes() {
    let field = Field::Rationals;
    let a2 = corpus::a2(field).unwrap();
    assert!(cone_subcategory(&LocalizationSpec::new(a2.clone(), vec![]).unwrap()).unwrap().is_empty());
    let spec = LocalizationSpec::from_names(a2.clone(), &["f"]).unwrap();
    let cones = cone_subcategory(&spec).unwrap();
    assert_eq!(cones.len(), 1);
    assert_eq!(cones[0].summands, vec![(0, 1), (1, 0)]);
    let spec = LocalizationSpec::from_names(a2.clone(), &["1_X"]).unwrap();
    let loc = Localization::new(spec).unwrap();
    assert!(loc.fragment.is_zero_object(2).unwrap());
}

#[test]
fn non_closed_or_nonzero_degree_w_is_rejected() {
    let field = Field::Rationals;
    let c = corpus::contractible(field).unwrap();
    assert!(matches!(LocalizationSpec::from_names(c, &["e"]), Err(Error::NonzeroDegree(-1))));
    let mu3 = corpus::homotopy_associative(field).unwrap();
    // p is closed, z is not of degree 0
    assert!(LocalizationSpec::from_names(mu3.clone(), &["p"]).is_ok());
    assert!(LocalizationSpec::from_names(mu3, &["z"]).is_err());
}

#[test]
fn empty_w_gives_hom() {
    for field in [Field::prime(2).unwrap(), Field::Rationals] {
        for (name, cat) in corpus::all(field).unwrap() {
            let spec = LocalizationSpec::new(cat.clone(), vec![]).unwrap();
            for x in 0..cat.num_objects() {
                for y in 0..cat.num_objects() {
                    let (_, q) = localize_hom(&spec, x, y, w(), 4).unwrap();
                    assert!(q.certificate.is_certified());
                    assert_eq!(q.bar.complex.cohomology_ranks(), cat.hom(x, y).unwrap().cohomology_ranks(), "{name}");
                }
            }
        }
    }
}

#[test]
fn inverting_f_in_a2() {
    for field in [Field::prime(2).unwrap(), Field::prime(3).unwrap(), Field::Rationals] {
        let a2 = corpus::a2(field).unwrap();
        let spec = LocalizationSpec::from_names(a2, &["f"]).unwrap();
        let window = Window::new(-4, 4).unwrap();
        let k0 = BTreeMap::from([(0, 1)]);
        for (x, y) in [(0, 1), (0, 0), (1, 0), (1, 1)] {
            let (loc, q) = localize_hom(&spec, x, y, window, 8).unwrap();
            assert!(q.certificate.is_certified(), "{x}{y}: {:?}", q.certificate);
            assert!(q.certificate.n_used <= 8);
            assert_eq!(ranks_in(&q.bar.complex.cohomology_ranks(), -4, 4), k0, "({x},{y}) over {field}");
            // the Drinfeld oracle on the same fragment agrees
            let d = drinfeld_quotient_hom(loc.fragment.cat(), &loc.killed, x, y, window, 8).unwrap();
            assert_eq!(ranks_in(&d.1.ranks, -4, 4), k0);
        }
        if field.is_finite() {
            let loc = Localization::new(spec).unwrap();
            assert!(loc.find_inverse(0, 4).unwrap().is_some(), "no inverse over {field}");
        }
    }
}

#[test]
fn inverting_an_identity_changes_nothing() {
    let field = Field::prime(3).unwrap();
    let a3 = corpus::a3(field).unwrap();
    let spec = LocalizationSpec::from_names(a3.clone(), &["1_X"]).unwrap();
    for x in 0..3 {
        for y in 0..3 {
            let (_, q) = localize_hom(&spec, x, y, w(), 6).unwrap();
            assert!(q.certificate.is_certified());
            let want = ranks_in(&a3.hom(x, y).unwrap().cohomology_ranks(), -3, 3);
            assert_eq!(ranks_in(&q.bar.complex.cohomology_ranks(), -3, 3), want);
        }
    }
    let loc = Localization::new(spec).unwrap();
    assert!(loc.find_inverse(0, 3).unwrap().is_some());
}

#[test]
fn inverse_of_f_lives_in_longer_chains() {
    // hom_A(Y, X) = 0, so any inverse must pass through the cone
    let field = Field::prime(2).unwrap();
    let a2 = corpus::a2(field).unwrap();
    assert_eq!(a2.hom(1, 0).unwrap().total_dim(), 0);
    let loc = Localization::new(LocalizationSpec::from_names(a2, &["f"]).unwrap()).unwrap();
    let inv = loc.find_inverse(0, 4).unwrap().expect("f becomes invertible");
    assert!(!inv.is_empty());
    assert!(inv.keys().all(|ch| ch.len() >= 2));
}

#[test]
fn local_sequences() {
    let field = Field::prime(2).unwrap();
    let a2 = corpus::a2(field).unwrap();
    let f = a2.gen_index("f").unwrap();
    let fv = vec![(f, field.one())];
    let window = Window::new(-3, 3).unwrap();
    // W = ∅, constant at Y
    let none = LocalizationSpec::new(a2.clone(), vec![]).unwrap();
    let seq_y = ObjectSequence { objects: vec![1], maps: vec![] };
    let r = check_local_sequence(&none, &seq_y, 0, window, 6).unwrap();
    assert!(r.hypothesis.is_empty());
    assert_eq!(r.conclusion, Some(true));
    // W = {f}, constant at Y, X = X
    let spec = LocalizationSpec::new(a2.clone(), vec![fv.clone()]).unwrap();
    let r = check_local_sequence(&spec, &seq_y, 0, window, 8).unwrap();
    assert_eq!(r.hypothesis, vec![true]);
    assert_eq!(r.conclusion, Some(true));
    assert_eq!(r.target_ranks, Some(BTreeMap::from([(0, 1)])));
    // a longer constant sequence Y → Y → Y along identities
    let id_y = vec![(a2.unit(1), field.one())];
    let seq = ObjectSequence { objects: vec![1, 1, 1], maps: vec![id_y.clone(), id_y] };
    let r = check_local_sequence(&spec, &seq, 0, window, 8).unwrap();
    assert_eq!(r.conclusion, Some(true));
    // constant at X: hom(Y, X) = 0 against hom(X, X) = k
    let seq_x = ObjectSequence { objects: vec![0], maps: vec![] };
    let r = check_local_sequence(&spec, &seq_x, 0, window, 8).unwrap();
    assert_eq!(r.hypothesis, vec![false]);
    assert_eq!(r.conclusion, None);
}

#[test]
fn diagrams() {
    let field = Field::prime(2).unwrap();
    let a2 = corpus::a2(field).unwrap();
    let f = vec![(a2.gen_index("f").unwrap(), field.one())];
    let ex = vec![(a2.unit(0), field.one())];
    let small = LocalizationSpec::new(a2.clone(), vec![ex.clone()]).unwrap();
    let big = LocalizationSpec::new(a2.clone(), vec![ex.clone(), f.clone()]).unwrap();
    let id = AInfFunctor::identity(&a2);
    // one node
    let one = localize_diagram(vec![big.clone()], vec![]).unwrap();
    assert_eq!(one.nodes.len(), 1);
    // W₁ ⊆ W₂ along the identity
    let two = localize_diagram(vec![small.clone(), big.clone()], vec![(0, 1, id.clone())]).unwrap();
    assert!(two.check_commutes(3).unwrap());
    let (_, _, map) = two.induced_map(0, 0, 1, 3).unwrap();
    assert_eq!(map.source().cohomology_rank(0), 1);
    // W₂ ⊄ W₁
    let bad = localize_diagram(vec![big, small], vec![(0, 1, id)]);
    assert!(matches!(bad, Err(Error::Incompatible(0, 1))));
}
