#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().unwrap()
}

/// Runs the binary from the workspace root so paths in reports stay relative.
pub fn ainf(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ainf")).args(args).current_dir(root()).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

/// The golden suite: a name and the arguments of one invocation.
pub const GOLDEN: &[(&str, &[&str])] = &[
    ("check_a2", &["check", "corpus/a2.cat"]),
    ("check_mu3", &["check", "corpus/mu3.cat"]),
    ("check_cone", &["check", "corpus/a2_cone.cat"]),
    ("cohomology_a3", &["cohomology", "corpus/a3.cat"]),
    ("cohomology_cone", &["cohomology", "corpus/a2_cone.cat", "--hom", "X", "C"]),
    ("quotient_a2", &["quotient", "corpus/a2.cat", "--kill", "Y", "--hom", "X", "Y", "--oracle", "drinfeld"]),
    ("quotient_a2_xx", &["quotient", "corpus/a2.cat", "--kill", "Y", "--hom", "X", "X", "--window", "-4", "4", "--truncate", "6"]),
    ("localize_a2", &["localize", "corpus/a2.cat", "--invert", "f", "--hom", "X", "Y", "--window", "-3", "3", "--truncate", "8"]),
    ("localize_a2_f3", &["localize", "corpus/a2.cat", "--ring", "F3", "--invert", "f", "--hom", "Y", "X"]),
    ("hh0_point_f5", &["hh0", "corpus/point.cat", "--ring", "F5"]),
    ("hh0_dual", &["hh0", "corpus/dual.cat"]),
    ("hh_dual_f2", &["hh", "corpus/dual.cat", "--ring", "F2", "--window", "0", "2", "--truncate", "6"]),
    ("nerve_poset", &["nerve", "--poset", "3"]),
    ("nerve_cyclic", &["nerve", "--cyclic", "2", "--dim", "4"]),
    ("nerve_mu3_f2", &["nerve", "corpus/mu3.cat", "--ring", "F2"]),
    ("join_simplices", &["join", "simplex:1", "simplex:2"]),
    ("join_empty", &["join", "empty", "horn:2:1"]),
    ("homspace_a2", &["homspace", "corpus/a2.cat", "--ring", "F2", "--hom", "X", "Y"]),
    ("homspace_contractible", &["homspace", "corpus/contractible.cat", "--ring", "F3", "--hom", "O", "O"]),
    ("fillers_boundary", &["fillers", "boundary:2", "--horn", "2", "1"]),
    ("fillers_point", &["fillers", "corpus/point.cat", "--ring", "F2", "--horn", "2", "1"]),
    ("telescope_a2", &["telescope", "corpus/a2_sequences.cat", "--seq", "AtY", "--from", "X"]),
    ("localseq_pass", &["localseq", "corpus/a2_sequences.cat", "--invert", "f", "--seq", "AtY", "--from", "X"]),
    ("localseq_fail", &["localseq", "corpus/a2_sequences.cat", "--invert", "f", "--seq", "AtX", "--from", "Y"]),
];
