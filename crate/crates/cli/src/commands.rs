use std::collections::BTreeSet;
use std::path::PathBuf;

use ainf::bar::{drinfeld_quotient_hom, quotient_hom, Window};
use ainf::category::AInfCategory;
use ainf::complex::ranks_in;
use ainf::hochschild::{ch_complex, hh0_units, UnitGroup};
use ainf::localize::{check_local_sequence, hom_telescope, localize_hom, LocalizationSpec};
use ainf::scalar::Field;
use ainf::sset::{self, FiniteCategory, TruncatedSSet};
use ainf::twisted::TwFragment;
use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::format::{parse, CategoryFile, ParseError};
use crate::report::Report;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Core(#[from] ainf::Error),
    #[error("cannot read `{0}`: {1}")]
    Io(String, std::io::Error),
    #[error("{0}")]
    Usage(String),
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "ainf", version, about = "Computations with finite A-infinity and dg-categories")]
pub struct Cli {
    /// Group the output by key prefix instead of printing `key=value` lines.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// A category file.
    pub file: PathBuf,
    /// Override the file's ring: `Q`, `F5` or `F 5`.
    #[arg(long)]
    pub ring: Option<String>,
    /// Largest bar length or Hochschild cochain length to try.
    #[arg(long, default_value_t = 8)]
    pub truncate: usize,
    /// Degree window for cohomology ranks.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    pub window: Option<Vec<i64>>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Oracle {
    Drinfeld,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a file and check the A-infinity relations.
    Check(Common),
    /// Cohomology ranks of hom complexes.
    Cohomology {
        #[command(flatten)]
        common: Common,
        #[arg(long, num_args = 2, value_names = ["X", "Y"])]
        hom: Option<Vec<String>>,
    },
    /// Morphisms in the quotient by a set of objects.
    Quotient {
        #[command(flatten)]
        common: Common,
        #[arg(long, num_args = 1.., required = true)]
        kill: Vec<String>,
        #[arg(long, num_args = 2, value_names = ["X", "Y"], required = true)]
        hom: Vec<String>,
        #[arg(long, value_enum)]
        oracle: Option<Oracle>,
    },
    /// Morphisms in the localization along a set of generators.
    Localize {
        #[command(flatten)]
        common: Common,
        #[arg(long, num_args = 1.., required = true)]
        invert: Vec<String>,
        #[arg(long, num_args = 2, value_names = ["X", "Y"], required = true)]
        hom: Vec<String>,
        /// Bar length used when searching for inverses over a finite field.
        #[arg(long, default_value_t = 4)]
        inverse_length: usize,
    },
    /// HH⁰ and its unit group.
    Hh0(Common),
    /// Hochschild cohomology ranks in the window.
    Hh(Common),
    /// The nerve of a category file, a poset or a cyclic group.
    Nerve {
        /// A category file over a prime field.
        file: Option<PathBuf>,
        #[arg(long)]
        ring: Option<String>,
        #[arg(long, conflicts_with_all = ["file", "cyclic"])]
        poset: Option<usize>,
        #[arg(long, conflicts_with = "file")]
        cyclic: Option<usize>,
        #[arg(long, default_value_t = 3)]
        dim: usize,
    },
    /// The join of two simplicial sets given as `simplex:N`, `horn:N:I`,
    /// `boundary:N`, `poset:N`, `cyclic:M` or `empty`.
    Join {
        left: String,
        right: String,
        #[arg(long, default_value_t = 4)]
        dim: usize,
    },
    /// The hom space between two objects and its components.
    Homspace {
        #[command(flatten)]
        common: Common,
        #[arg(long, num_args = 2, value_names = ["X", "Y"], required = true)]
        hom: Vec<String>,
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
    /// Horn filler statistics for a category file or a simplicial set description.
    Fillers {
        source: String,
        #[arg(long)]
        ring: Option<String>,
        #[arg(long, num_args = 2, value_names = ["N", "I"], required = true)]
        horn: Vec<usize>,
    },
    /// Telescope of `hom(X, Y_i)` along a sequence from the file.
    Telescope {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        seq: String,
        #[arg(long)]
        from: String,
    },
    /// The local-sequence check for a sequence, a source object and generators to invert.
    Localseq {
        #[command(flatten)]
        common: Common,
        #[arg(long, num_args = 1.., required = true)]
        invert: Vec<String>,
        #[arg(long)]
        seq: String,
        #[arg(long)]
        from: String,
    },
}

pub fn parse_ring(s: &str) -> CliResult<Field> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t == "Q" {
        return Ok(Field::Rationals);
    }
    let p = t
        .strip_prefix('F')
        .and_then(|p| p.parse::<u32>().ok())
        .ok_or_else(|| CliError::Usage(format!("unknown ring `{s}`; use Q or F<p>")))?;
    Ok(Field::prime(p)?)
}

fn load(path: &PathBuf, ring: Option<&str>) -> CliResult<CategoryFile> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
    let ring = ring.map(parse_ring).transpose()?;
    Ok(parse(&text, Some(&path.display().to_string()), ring)?)
}

/// The category the commands work in: the base, plus any twisted objects of the file.
fn working(file: &CategoryFile) -> CliResult<AInfCategory> {
    if file.twobjs.is_empty() {
        Ok(file.category.clone())
    } else {
        Ok(TwFragment::new(&file.category, file.twobjs.clone())?.cat().clone())
    }
}

fn window(common: &Common) -> CliResult<Window> {
    match common.window.as_deref() {
        None => Ok(Window::new(-3, 3)?),
        Some([lo, hi]) => Ok(Window::new(*lo, *hi)?),
        Some(_) => Err(CliError::Usage("--window takes two integers".into())),
    }
}

fn object(cat: &AInfCategory, name: &str) -> CliResult<usize> {
    Ok(cat.object_index(name)?)
}

fn pair(cat: &AInfCategory, hom: &[String]) -> CliResult<(usize, usize)> {
    Ok((object(cat, &hom[0])?, object(cat, &hom[1])?))
}

fn echo(r: &mut Report, common: &Common, cat: &AInfCategory) {
    r.push("file", common.file.display());
    r.push("ring", cat.field());
}

pub fn run(command: &Command) -> CliResult<Report> {
    match command {
        Command::Check(common) => check(common),
        Command::Cohomology { common, hom } => cohomology(common, hom.as_deref()),
        Command::Quotient { common, kill, hom, oracle } => quotient(common, kill, hom, oracle.is_some()),
        Command::Localize { common, invert, hom, inverse_length } => localize(common, invert, hom, *inverse_length),
        Command::Hh0(common) => hh0(common),
        Command::Hh(common) => hh(common),
        Command::Nerve { file, ring, poset, cyclic, dim } => nerve(file.as_ref(), ring.as_deref(), *poset, *cyclic, *dim),
        Command::Join { left, right, dim } => join(left, right, *dim),
        Command::Homspace { common, hom, dim } => homspace(common, hom, *dim),
        Command::Fillers { source, ring, horn } => fillers(source, ring.as_deref(), horn[0], horn[1]),
        Command::Telescope { common, seq, from } => telescope(common, seq, from),
        Command::Localseq { common, invert, seq, from } => localseq(common, invert, seq, from),
    }
}

fn check(common: &Common) -> CliResult<Report> {
    let file = load(&common.file, common.ring.as_deref())?;
    let cat = &file.category;
    let mut r = Report::new("check");
    echo(&mut r, common, cat);
    r.push("objects", cat.num_objects());
    r.push("generators", cat.gens().len());
    r.push("kmax", cat.kmax());
    r.push("dg", cat.is_dg());
    let rel = cat.check_relations(cat.kmax() + 2);
    r.push("relations.arity_bound", rel.arity_bound);
    r.push("relations.instances", rel.instances);
    if let Some(f) = &rel.failure {
        r.push("relations.failure.args", f.args.join(","));
        r.push("relations.failure.residue", &f.residue);
    }
    r.check("relations", rel.passed());
    for t in &file.twobjs {
        // parsing already enforced the Maurer-Cartan equation
        r.push(format!("twobj.{}.summands", t.name), t.len());
        r.check(format!("twobj.{}.maurer_cartan", t.name), true);
    }
    for s in &file.sequences {
        r.push(format!("sequence.{}.length", s.name), s.sequence.objects.len());
    }
    Ok(r)
}

fn cohomology(common: &Common, hom: Option<&[String]>) -> CliResult<Report> {
    let file = load(&common.file, common.ring.as_deref())?;
    let cat = working(&file)?;
    let w = window(common)?;
    let mut r = Report::new("cohomology");
    echo(&mut r, common, &cat);
    let pairs: Vec<(usize, usize)> = match hom {
        Some(h) => vec![pair(&cat, h)?],
        None => (0..cat.num_objects()).flat_map(|x| (0..cat.num_objects()).map(move |y| (x, y))).collect(),
    };
    for (x, y) in pairs {
        let ranks = cat.hom(x, y)?.cohomology_ranks();
        r.ranks(&format!("hom.{}.{}", cat.objects()[x], cat.objects()[y]), &ranks, w);
    }
    Ok(r)
}

fn quotient(common: &Common, kill: &[String], hom: &[String], oracle: bool) -> CliResult<Report> {
    let file = load(&common.file, common.ring.as_deref())?;
    let cat = working(&file)?;
    let w = window(common)?;
    let b: BTreeSet<usize> = kill.iter().map(|k| object(&cat, k)).collect::<CliResult<_>>()?;
    let (x, y) = pair(&cat, hom)?;
    let mut r = Report::new("quotient");
    echo(&mut r, common, &cat);
    let names: Vec<&str> = b.iter().map(|&z| cat.objects()[z].as_str()).collect();
    r.push("kill", names.join(","));
    r.push("hom", format!("{},{}", hom[0], hom[1]));
    let q = quotient_hom(&cat, &b, x, y, w, common.truncate)?;
    let bar_ranks = q.certificate.ranks.clone();
    r.ranks("bar", &bar_ranks, w);
    r.certificate("bar", &q.certificate);
    r.check("bar.certified", q.certificate.is_certified());
    if oracle {
        let (_, cert) = drinfeld_quotient_hom(&cat, &b, x, y, w, common.truncate)?;
        r.ranks("drinfeld", &cert.ranks, w);
        r.certificate("drinfeld", &cert);
        r.check("drinfeld.certified", cert.is_certified());
        r.check("agreement", cert.ranks == bar_ranks);
    }
    Ok(r)
}

fn localize(common: &Common, invert: &[String], hom: &[String], inverse_length: usize) -> CliResult<Report> {
    let file = load(&common.file, common.ring.as_deref())?;
    let cat = working(&file)?;
    let w = window(common)?;
    let (x, y) = pair(&cat, hom)?;
    let names: Vec<&str> = invert.iter().map(String::as_str).collect();
    let spec = LocalizationSpec::from_names(cat.clone(), &names)?;
    let mut r = Report::new("localize");
    echo(&mut r, common, &cat);
    r.push("invert", names.join(","));
    r.push("hom", format!("{},{}", hom[0], hom[1]));
    let (loc, q) = localize_hom(&spec, x, y, w, common.truncate)?;
    r.ranks("local", &q.certificate.ranks, w);
    r.certificate("local", &q.certificate);
    r.check("local.certified", q.certificate.is_certified());
    if cat.field().is_finite() {
        for (k, n) in names.iter().enumerate() {
            let found = loc.find_inverse(k, inverse_length)?;
            r.check(format!("inverse.{n}"), found.is_some());
        }
    }
    Ok(r)
}

fn hh0(common: &Common) -> CliResult<Report> {
    let file = load(&common.file, common.ring.as_deref())?;
    let cat = working(&file)?;
    let mut r = Report::new("hh0");
    echo(&mut r, common, &cat);
    let w = Window::new(0, 0)?;
    let t = ch_complex(&cat, common.truncate, w)?;
    r.push("hh0.rank", t.certificate.ranks.get(&0).copied().unwrap_or(0));
    r.certificate("hh0", &t.certificate);
    r.check("hh0.certified", t.certificate.is_certified());
    if t.certificate.is_certified() {
        match hh0_units(&cat, common.truncate)? {
            UnitGroup::Finite { order, .. } => r.push("units.order", order),
            UnitGroup::Criterion { description, .. } => r.push("units.criterion", description),
        }
    }
    Ok(r)
}

fn hh(common: &Common) -> CliResult<Report> {
    let file = load(&common.file, common.ring.as_deref())?;
    let cat = working(&file)?;
    let w = window(common)?;
    let mut r = Report::new("hh");
    echo(&mut r, common, &cat);
    let t = ch_complex(&cat, common.truncate, w)?;
    r.ranks("hh", &t.certificate.ranks, w);
    r.certificate("hh", &t.certificate);
    r.check("hh.certified", t.certificate.is_certified());
    Ok(r)
}

fn counts(r: &mut Report, prefix: &str, x: &TruncatedSSet) {
    let show = |v: Vec<usize>| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
    r.push(format!("{prefix}.counts"), show(x.counts()));
    r.push(format!("{prefix}.nondegenerate"), show(x.nondegenerate_counts()));
}

fn inner_horns(r: &mut Report, prefix: &str, x: &TruncatedSSet, unique: bool) -> CliResult<()> {
    for n in 2..=x.dim().min(3) {
        for i in 1..n {
            let (horns, lo, hi) = sset::filler_statistics(x, n, i)?;
            let key = format!("{prefix}.horn{n}_{i}");
            r.push(format!("{key}.horns"), horns);
            r.push(format!("{key}.min_fillers"), lo);
            r.push(format!("{key}.max_fillers"), hi);
            r.check(format!("{key}.fills"), if unique { lo == 1 && hi == 1 } else { lo >= 1 } || horns == 0);
        }
    }
    Ok(())
}

fn nerve(file: Option<&PathBuf>, ring: Option<&str>, poset: Option<usize>, cyclic: Option<usize>, dim: usize) -> CliResult<Report> {
    let mut r = Report::new("nerve");
    match (file, poset, cyclic) {
        (Some(path), None, None) => {
            let file = load(path, ring)?;
            let cat = working(&file)?;
            r.push("file", path.display());
            r.push("ring", cat.field());
            r.push("dim", dim);
            let x = sset::ainfty_nerve(&cat, dim)?;
            counts(&mut r, "nerve", &x);
            inner_horns(&mut r, "nerve", &x, false)?;
        }
        (None, Some(n), None) => {
            r.push("poset", n);
            r.push("dim", dim);
            let x = sset::nerve(&FiniteCategory::poset(n), dim)?;
            counts(&mut r, "nerve", &x);
            inner_horns(&mut r, "nerve", &x, true)?;
        }
        (None, None, Some(m)) => {
            r.push("cyclic", m);
            r.push("dim", dim);
            let x = sset::nerve(&FiniteCategory::cyclic_group(m), dim)?;
            counts(&mut r, "nerve", &x);
            inner_horns(&mut r, "nerve", &x, true)?;
        }
        _ => return Err(CliError::Usage("give one of a file, --poset or --cyclic".into())),
    }
    Ok(r)
}

/// Reads `simplex:N`, `horn:N:I`, `boundary:N`, `poset:N`, `cyclic:M` or `empty`.
pub fn parse_sset(s: &str, dim: usize) -> CliResult<TruncatedSSet> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |i: usize| -> CliResult<usize> {
        parts
            .get(i)
            .and_then(|p| p.parse().ok())
            .ok_or_else(|| CliError::Usage(format!("bad simplicial set `{s}`")))
    };
    let x = match (parts[0], parts.len()) {
        ("empty", 1) => TruncatedSSet::empty(dim),
        ("simplex", 2) => sset::standard_simplex(num(1)?, dim)?,
        ("horn", 3) => sset::horn(num(1)?, num(2)?, dim)?,
        ("boundary", 2) => sset::boundary(num(1)?, dim)?,
        ("poset", 2) => sset::nerve(&FiniteCategory::poset(num(1)?), dim)?,
        ("cyclic", 2) => sset::nerve(&FiniteCategory::cyclic_group(num(1)?), dim)?,
        _ => return Err(CliError::Usage(format!("bad simplicial set `{s}`"))),
    };
    Ok(x)
}

fn join(left: &str, right: &str, dim: usize) -> CliResult<Report> {
    let mut r = Report::new("join");
    r.push("left", left);
    r.push("right", right);
    r.push("dim", dim);
    let (x, y) = (parse_sset(left, dim)?, parse_sset(right, dim)?);
    let j = sset::join(&x, &y)?;
    counts(&mut r, "join", &j);
    let simplex = |s: &str| s.strip_prefix("simplex:").and_then(|n| n.parse::<usize>().ok());
    if let (Some(m), Some(n)) = (simplex(left), simplex(right)) {
        let (_, big, map) = sset::join_of_simplices(m, n, dim)?;
        r.push("target", format!("simplex:{}", m + n + 1));
        r.check("isomorphism", map.is_iso(&big));
    }
    Ok(r)
}

fn homspace(common: &Common, hom: &[String], dim: usize) -> CliResult<Report> {
    let file = load(&common.file, common.ring.as_deref())?;
    let cat = working(&file)?;
    let (x, y) = pair(&cat, hom)?;
    let mut r = Report::new("homspace");
    echo(&mut r, common, &cat);
    r.push("hom", format!("{},{}", hom[0], hom[1]));
    r.push("dim", dim);
    let hs = sset::hom_space(&cat, x, y, dim)?;
    counts(&mut r, "space", &hs.sset);
    r.push("pi0", hs.pi0);
    let h0 = cat.hom(x, y)?.cohomology_rank(0);
    r.push("h0.rank", h0);
    let p = cat.field().characteristic() as u128;
    let expected = p.checked_pow(h0 as u32);
    r.check("pi0_matches_h0", expected == Some(hs.pi0 as u128));
    Ok(r)
}

fn fillers(source: &str, ring: Option<&str>, n: usize, i: usize) -> CliResult<Report> {
    let mut r = Report::new("fillers");
    r.push("source", source);
    r.push("horn", format!("{n},{i}"));
    let dim = n.max(1);
    let x = if source.ends_with(".cat") {
        let file = load(&PathBuf::from(source), ring)?;
        sset::ainfty_nerve(&working(&file)?, dim)?
    } else {
        parse_sset(source, dim)?
    };
    let (horns, lo, hi) = sset::filler_statistics(&x, n, i)?;
    r.push("outer", i == 0 || i == n);
    r.push("horns", horns);
    r.push("min_fillers", lo);
    r.push("max_fillers", hi);
    Ok(r)
}

fn sequence<'a>(file: &'a CategoryFile, name: &str) -> CliResult<&'a ainf::localize::ObjectSequence> {
    file.sequence(name).ok_or_else(|| CliError::Usage(format!("no sequence `{name}` in the file")))
}

fn telescope(common: &Common, seq: &str, from: &str) -> CliResult<Report> {
    let file = load(&common.file, common.ring.as_deref())?;
    let cat = &file.category;
    let w = window(common)?;
    let s = sequence(&file, seq)?;
    let x = object(cat, from)?;
    let mut r = Report::new("telescope");
    echo(&mut r, common, cat);
    r.push("sequence", seq);
    r.push("from", from);
    let (tel, last) = hom_telescope(cat, s, x)?;
    let (a, b) = (tel.cohomology_ranks(), last.cohomology_ranks());
    r.ranks("telescope", &a, w);
    r.ranks("last", &b, w);
    r.check("ranks_agree", ranks_in(&a, w.lo, w.hi) == ranks_in(&b, w.lo, w.hi));
    Ok(r)
}

fn localseq(common: &Common, invert: &[String], seq: &str, from: &str) -> CliResult<Report> {
    let file = load(&common.file, common.ring.as_deref())?;
    let cat = &file.category;
    let w = window(common)?;
    let s = sequence(&file, seq)?;
    let x = object(cat, from)?;
    let names: Vec<&str> = invert.iter().map(String::as_str).collect();
    let spec = LocalizationSpec::from_names(cat.clone(), &names)?;
    let mut r = Report::new("localseq");
    echo(&mut r, common, cat);
    r.push("invert", names.join(","));
    r.push("sequence", seq);
    r.push("from", from);
    let report = check_local_sequence(&spec, s, x, w, common.truncate)?;
    for (n, h) in names.iter().zip(&report.hypothesis) {
        r.push(format!("hypothesis.{n}"), h);
    }
    r.push("hypothesis", report.hypothesis_holds());
    match report.conclusion {
        None => r.push("conclusion", "not-asserted"),
        Some(ok) => {
            if let (Some(a), Some(b)) = (&report.source_ranks, &report.target_ranks) {
                r.ranks("source", a, w);
                r.ranks("target", b, w);
            }
            r.check("conclusion", ok);
        }
    }
    Ok(r)
}
