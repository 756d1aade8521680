use std::collections::BTreeSet;

use ainf::bar::{drinfeld_quotient_hom, object_set, quotient_hom, Status, Window};
use ainf::complex::Ranks;
use ainf::corpus;
use ainf::Field;

#[test]
fn empty_b_gives_hom_exactly() {
    for (name, cat) in corpus::all(Field::Rationals).unwrap() {
        for x in 0..cat.num_objects() {
            for y in 0..cat.num_objects() {
                let q = quotient_hom(&cat, &BTreeSet::new(), x, y, Window::new(-4, 4).unwrap(), 6).unwrap();
                assert_eq!(q.bar.complex, cat.hom(x, y).unwrap(), "{name}");
                assert_eq!(q.certificate.status, Status::ExactBound);
                assert_eq!(q.certificate.n_used, 0);
            }
        }
    }
}

#[test]
fn a2_kill_y() {
    let cat = corpus::a2(Field::Rationals).unwrap();
    let b = object_set(&cat, &["Y"]).unwrap();
    let w = Window::new(-4, 4).unwrap();
    let xy = quotient_hom(&cat, &b, 0, 1, w, 6).unwrap();
    assert!(xy.certificate.is_certified() && xy.certificate.n_used <= 6);
    assert_eq!(xy.certificate.ranks, Ranks::new());
    let xx = quotient_hom(&cat, &b, 0, 0, w, 6).unwrap();
    assert_eq!(xx.certificate.ranks, Ranks::from([(0, 1)]));
}

#[test]
fn drinfeld_agrees_on_dg_corpus() {
    let w = Window::new(-3, 3).unwrap();
    for field in [Field::Rationals, Field::prime(2).unwrap()] {
        for (name, cat) in corpus::all(field).unwrap() {
            if !cat.is_dg() {
                continue;
            }
            let n = cat.num_objects();
            let mut subsets = vec![BTreeSet::new()];
            for i in 0..n {
                subsets.push(BTreeSet::from([i]));
                for j in i + 1..n {
                    subsets.push(BTreeSet::from([i, j]));
                }
            }
            for b in &subsets {
                for x in 0..n {
                    for y in 0..n {
                        let q = quotient_hom(&cat, b, x, y, w, 8).unwrap();
                        let (_, dc) = drinfeld_quotient_hom(&cat, b, x, y, w, 8).unwrap();
                        assert!(q.certificate.is_certified(), "{name} {b:?} {x} {y} bar");
                        assert!(dc.is_certified(), "{name} {b:?} {x} {y} drinfeld {dc:?}");
                        assert_eq!(q.certificate.ranks, dc.ranks, "{name} B={b:?} ({x},{y})");
                    }
                }
            }
        }
    }
}

/// `μ¹μ²(b, a) + μ²(b, μ¹a) + (-1)^{|a|-1} μ²(μ¹b, a) = 0` for the quotient
/// composition, on every pair of basis chains up to length 2.
#[test]
fn quotient_composition_is_leibniz() {
    use ainf::bar::{bar_complex, compose, BarComplex, Chain};
    use ainf::Scalar;
    use std::collections::BTreeMap;

    type Combo = BTreeMap<Chain, Scalar>;
    fn d(bar: &BarComplex, n: i64, c: &Combo) -> Combo {
        let v = bar.vector(n, c).unwrap();
        let dv = bar.complex.d(n).apply(&v);
        if dv.is_empty() { Combo::new() } else { bar.chain_combo(n + 1, &dv) }
    }
    fn add(field: Field, a: &mut Combo, c: &Scalar, b: &Combo) {
        for (k, v) in b {
            let e = a.entry(k.clone()).or_insert_with(|| field.zero());
            *e = field.add(e, &field.mul(c, v));
        }
        a.retain(|_, v| !field.is_zero(v));
    }

    for field in [Field::prime(3).unwrap(), Field::Rationals] {
        let cases = [
            (corpus::homotopy_associative(field).unwrap(), vec!["P1", "P2"]),
            (corpus::a3(field).unwrap(), vec!["Y"]),
            (corpus::contractible(field).unwrap(), vec!["O"]),
            (corpus::dual_numbers(field).unwrap(), vec!["O"]),
        ];
        for (cat, kill) in cases {
            let b = object_set(&cat, &kill).unwrap();
            let objs = 0..cat.num_objects();
            for x in objs.clone() {
                for y in objs.clone() {
                    for z in objs.clone() {
                        let ba = bar_complex(&cat, &b, x, y, 2).unwrap();
                        let bb = bar_complex(&cat, &b, y, z, 2).unwrap();
                        let bc = bar_complex(&cat, &b, x, z, 4).unwrap();
                        for (&na, ca) in &ba.chains {
                            for a in ca {
                                let a: Combo = BTreeMap::from([(a.clone(), field.one())]);
                                for (&nb, cb) in &bb.chains {
                                    for bch in cb {
                                        let bv: Combo = BTreeMap::from([(bch.clone(), field.one())]);
                                        let mut total = d(&bc, na + nb, &compose(&cat, &bv, &a));
                                        add(field, &mut total, &field.one(), &compose(&cat, &bv, &d(&ba, na, &a)));
                                        let s = field.sign((na - 1).rem_euclid(2) == 1);
                                        add(field, &mut total, &s, &compose(&cat, &d(&bb, nb, &bv), &a));
                                        assert!(total.is_empty(), "{kill:?}: {bch:?} after {a:?}");
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

#[test]
fn killed_objects_become_zero() {
    let w = Window::new(-3, 3).unwrap();
    for field in [Field::prime(2).unwrap(), Field::Rationals] {
        for (name, cat) in corpus::all(field).unwrap() {
            for z in 0..cat.num_objects() {
                let b = BTreeSet::from([z]);
                for x in 0..cat.num_objects() {
                    for (s, t) in [(x, z), (z, x)] {
                        let q = quotient_hom(&cat, &b, s, t, w, 8).unwrap();
                        assert!(q.certificate.is_certified(), "{name}");
                        assert_eq!(q.certificate.ranks, Ranks::new(), "{name} kill {z}: ({s},{t})");
                    }
                }
            }
        }
    }
}

#[test]
fn killing_a_zero_object_changes_nothing() {
    use ainf::twisted::{tw_cone, TwFragment, TwObject};
    let field = Field::prime(3).unwrap();
    let a2 = corpus::a2(field).unwrap();
    let x = TwObject::plain(&a2, 0);
    let k = tw_cone(&a2, &x, &x, &x.identity(&a2), "K").unwrap().cone;
    let frag = TwFragment::new(&a2, vec![k]).unwrap();
    let b = BTreeSet::from([frag.object_index("K").unwrap()]);
    let w = Window::new(-2, 2).unwrap();
    for s in 0..2 {
        for t in 0..2 {
            let q = quotient_hom(frag.cat(), &b, s, t, w, 8).unwrap();
            assert!(q.certificate.is_certified());
            let want: Ranks = ainf::complex::ranks_in(&a2.hom(s, t).unwrap().cohomology_ranks(), -2, 2);
            assert_eq!(q.certificate.ranks, want, "({s},{t})");
        }
    }
}

#[test]
fn exact_bound_when_internal_degrees_are_at_least_two() {
    use ainf::bar::{bar_complex, bar_exact_length};
    use ainf::category::CategoryBuilder;
    let field = Field::Rationals;
    let mut b = CategoryBuilder::new(field);
    for o in ["X", "Z", "Y"] {
        b.unital_object(o).unwrap();
    }
    b.gen("u", "X", "Z", 2).unwrap();
    b.gen("w", "Z", "Z", 2).unwrap();
    b.gen("v", "Z", "Y", 2).unwrap();
    let cat = b.build().unwrap();
    let kill = object_set(&cat, &["Z"]).unwrap();
    let w = Window::new(0, 3).unwrap();
    let n = bar_exact_length(&cat, &kill, 0, 2, w).expect("degree bookkeeping applies");
    assert!(n <= 3);
    let q = quotient_hom(&cat, &kill, 0, 2, w, 8).unwrap();
    assert_eq!(q.certificate.status, Status::ExactBound);
    // an empirical sweep far past the bound agrees
    for m in n..=n + 4 {
        let c = bar_complex(&cat, &kill, 0, 2, m).unwrap().complex;
        assert_eq!(ainf::complex::ranks_in(&c.cohomology_ranks(), 0, 3), q.certificate.ranks, "length {m}");
    }
}

#[test]
fn stabilized_ranks_stay_stable() {
    use ainf::bar::bar_complex;
    let w = Window::new(-3, 3).unwrap();
    for (name, cat) in corpus::all(Field::prime(2).unwrap()).unwrap() {
        for z in 0..cat.num_objects() {
            let b = BTreeSet::from([z]);
            for x in 0..cat.num_objects() {
                for y in 0..cat.num_objects() {
                    let ranks: Vec<Ranks> = (0..=7)
                        .map(|n| {
                            let c = bar_complex(&cat, &b, x, y, n).unwrap().complex;
                            ainf::complex::ranks_in(&c.cohomology_ranks(), w.lo, w.hi)
                        })
                        .collect();
                    for n in 0..6 {
                        if ranks[n] == ranks[n + 1] {
                            assert_eq!(ranks[n + 1], ranks[n + 2], "{name} B={{{z}}} ({x},{y}) at {n}");
                        }
                    }
                }
            }
        }
    }
}
