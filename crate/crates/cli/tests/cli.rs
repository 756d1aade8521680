mod common;

use std::collections::BTreeMap;

use ainf_cli::Report;
use common::{ainf, root};

fn kv(out: &str) -> BTreeMap<String, String> {
    out.lines().filter_map(|l| l.split_once('=')).map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

#[test]
fn check_passes_on_a2() {
    let (code, out, _) = ainf(&["check", "corpus/a2.cat"]);
    assert_eq!(code, 0);
    assert_eq!(kv(&out)["verdict"], "pass");
}

#[test]
fn localize_example() {
    let (code, out, _) =
        ainf(&["localize", "corpus/a2.cat", "--invert", "f", "--hom", "X", "Y", "--window", "-3", "3", "--truncate", "8"]);
    assert_eq!(code, 0);
    let r = kv(&out);
    assert_eq!(r["local.h0"], "1");
    assert_eq!(r["local.status"], "empirically-stable");
}

#[test]
fn quotient_with_the_drinfeld_oracle() {
    let (code, out, _) = ainf(&["quotient", "corpus/a2.cat", "--kill", "Y", "--hom", "X", "Y", "--oracle", "drinfeld"]);
    assert_eq!(code, 0);
    let r = kv(&out);
    assert!(r.contains_key("bar.h0") && r.contains_key("drinfeld.h0"));
    assert_eq!(r["agreement"], "pass");
}

#[test]
fn unknown_flags_are_rejected() {
    let (code, _, err) = ainf(&["check", "corpus/a2.cat", "--frobnicate"]);
    assert_eq!(code, 2);
    assert!(err.contains("--frobnicate"));
    let (code, _, _) = ainf(&["summon", "corpus/a2.cat"]);
    assert_eq!(code, 2);
}

#[test]
fn parse_errors_are_located_and_exit_nonzero() {
    let dir = std::env::temp_dir().join(format!("ainf-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.cat");
    std::fs::write(&path, "ring Q\nobject X\ngen 1_X : X -> X deg 0\nid X = 1_X\nmu2(1_X, u) = 0\n").unwrap();
    let (code, out, err) = ainf(&["check", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("bad.cat:5:10: undeclared generator `u`"), "{err}");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn a_broken_relation_fails_with_exit_one() {
    let dir = std::env::temp_dir().join(format!("ainf-cli-mut-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let text = std::fs::read_to_string(root().join("corpus/mu3.cat")).unwrap();
    let path = dir.join("mu3_bad.cat");
    std::fs::write(&path, text.replace("d z = 1*p - 1*q", "d z = 1*p + 1*q")).unwrap();
    let (code, out, _) = ainf(&["check", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    let r = kv(&out);
    assert_eq!(r["relations"], "fail");
    assert!(r.contains_key("relations.failure.args"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn pretty_and_machine_output_agree() {
    for args in [
        vec!["check", "corpus/a2_cone.cat"],
        vec!["quotient", "corpus/a2.cat", "--kill", "Y", "--hom", "X", "Y", "--oracle", "drinfeld"],
        vec!["nerve", "--poset", "2"],
        vec!["homspace", "corpus/a2.cat", "--ring", "F2", "--hom", "X", "Y"],
    ] {
        let (_, plain, _) = ainf(&args);
        let mut pretty_args = args.clone();
        pretty_args.push("--pretty");
        let (_, pretty, _) = ainf(&pretty_args);
        assert_eq!(Report::parse_pretty(&pretty), kv(&plain), "{args:?}");
    }
}

#[test]
fn ring_override_and_bad_rings() {
    let (code, out, _) = ainf(&["hh0", "corpus/point.cat", "--ring", "F5"]);
    assert_eq!(code, 0);
    assert_eq!(kv(&out)["units.order"], "4");
    let (code, _, err) = ainf(&["hh0", "corpus/point.cat", "--ring", "F4"]);
    assert_eq!(code, 2);
    assert!(err.contains("not prime"));
    let (code, _, err) = ainf(&["nerve", "corpus/point.cat"]);
    assert_eq!(code, 2);
    assert!(err.contains("finite field"), "{err}");
}

#[test]
fn every_subcommand_has_a_working_invocation() {
    let seen: std::collections::BTreeSet<&str> = common::GOLDEN.iter().map(|(_, a)| a[0]).collect();
    for cmd in ["check", "cohomology", "quotient", "localize", "hh0", "hh", "nerve", "join", "homspace", "fillers", "telescope", "localseq"] {
        assert!(seen.contains(cmd), "{cmd} has no golden invocation");
    }
}
