use ainf::corpus;
use ainf::Field;

#[test]
fn corpus_passes_relations() {
    for field in [Field::Rationals, Field::prime(2).unwrap(), Field::prime(3).unwrap()] {
        for (name, cat) in corpus::all(field).unwrap() {
            let r = cat.check_relations(cat.kmax() + 2);
            assert!(r.passed(), "{name} over {field}: {r}");
            let op = cat.opposite();
            let r = op.check_relations(cat.kmax() + 2);
            assert!(r.passed(), "opposite {name} over {field}: {r}");
            assert_eq!(op.opposite(), cat);
            if cat.is_dg() {
                cat.check_dg_direct().unwrap();
            }
        }
    }
}

#[test]
fn every_single_sign_mutation_of_mu3_fails() {
    use ainf::category::AInfCategory;
    for field in [Field::Rationals, Field::prime(3).unwrap()] {
        let cat = corpus::homotopy_associative(field).unwrap();
        let mut mutations = 0;
        for (args, value) in cat.mu_table() {
            for t in 0..value.len() {
                let mut entries: Vec<_> =
                    cat.mu_table().iter().map(|(k, v)| (k.clone(), v.clone())).collect();
                let slot = entries.iter_mut().find(|(k, _)| k == args).unwrap();
                slot.1[t].1 = field.neg(&slot.1[t].1);
                let gens = cat.gens().to_vec();
                let mutant = AInfCategory::new(
                    field,
                    cat.objects().to_vec(),
                    gens,
                    cat.units().to_vec(),
                    entries,
                )
                .unwrap();
                let report = mutant.check_relations(cat.kmax() + 2);
                let failure = report.failure.expect("mutation must be detected");
                assert!(!failure.args.is_empty());
                mutations += 1;
            }
        }
        assert_eq!(mutations, 7);
    }
}

#[test]
fn relation_checks_nest() {
    for (name, cat) in corpus::all(Field::Rationals).unwrap() {
        for k in 3..=cat.kmax() + 2 {
            if cat.check_relations(k).passed() {
                assert!(cat.check_relations(k - 1).passed(), "{name} at {k}");
            }
        }
    }
}

#[test]
fn dg_flags_and_opposite_of_a2() {
    let field = Field::Rationals;
    assert!(corpus::a2(field).unwrap().is_dg());
    assert!(corpus::contractible(field).unwrap().is_dg());
    assert!(!corpus::homotopy_associative(field).unwrap().is_dg());
    let a2 = corpus::a2(field).unwrap();
    let f = a2.gen(a2.gen_index("f").unwrap()).clone();
    let op = a2.opposite();
    let g = op.gen(op.gen_index("f").unwrap());
    assert_eq!((g.src, g.tgt), (f.tgt, f.src));
}
