//! Classification pipeline: enumerate representation classes for a Newton
//! polygon, filter, decide exceptionality, and emit tables.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::admissibility::{admissible_primes, Prime};
use crate::error::{Error, Result};
use crate::group::enumerate::{enumerate_transitive_subgroups_with_limit, DEFAULT_MAX_G};
use crate::group::{canonical_key, stabilizer_of_weight, PermGroup, SignedPermutation};
use crate::wpr::{ExceptionalWitness, NewtonPolygon, WeightFunction, WeightedPermRep, WprJson};

pub const SCHEMA: &str = "weil-lab/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// Geometrically simple, `δ < g`, strongly admissible at some swept prime.
    Appendix,
    /// No filtering.
    All,
    /// Geometrically simple and exceptional.
    ExceptionalOnly,
}

impl std::str::FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "appendix" => Ok(Preset::Appendix),
            "all" => Ok(Preset::All),
            "exceptional-only" => Ok(Preset::ExceptionalOnly),
            _ => Err(Error::Input(format!("unknown preset {s:?} (appendix|all|exceptional-only)"))),
        }
    }
}

/// Individually toggleable filters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Filters {
    pub geometrically_simple: bool,
    pub non_maximal_angle_rank: bool,
    pub strongly_admissible: bool,
    pub exceptional: bool,
    pub primes: Vec<Prime>,
}

impl Filters {
    pub fn preset(p: Preset) -> Filters {
        let primes = Prime::default_sweep();
        match p {
            Preset::Appendix => Filters {
                geometrically_simple: true,
                non_maximal_angle_rank: true,
                strongly_admissible: true,
                exceptional: false,
                primes,
            },
            Preset::All => Filters {
                geometrically_simple: false,
                non_maximal_angle_rank: false,
                strongly_admissible: false,
                exceptional: false,
                primes,
            },
            Preset::ExceptionalOnly => Filters {
                geometrically_simple: true,
                non_maximal_angle_rank: false,
                strongly_admissible: false,
                exceptional: true,
                primes,
            },
        }
    }
}

/// Runtime limits for a classification.
#[derive(Clone, Debug)]
pub struct Options {
    pub max_g: usize,
    /// Permits `g = 6`, which is slow.
    pub allow_g6: bool,
    pub aliases: Option<Aliases>,
}

impl Default for Options {
    fn default() -> Self {
        Options { max_g: DEFAULT_MAX_G, allow_g6: false, aliases: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissiblePrime {
    pub p: Prime,
    pub strong: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationEntry {
    pub canonical_label: String,
    pub order: usize,
    /// Generators of `G/⟨ι⟩`.
    pub generators_mod_iota: Vec<String>,
    pub wpr: WprJson,
    pub angle_rank: usize,
    pub geometrically_simple: bool,
    pub exceptional: bool,
    pub witnesses: Vec<ExceptionalWitness>,
    /// `None` when the filtration search was skipped (group too large).
    pub admissible_primes: Option<Vec<AdmissiblePrime>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alias: Option<Alias>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationTable {
    pub schema: String,
    pub g: usize,
    pub newton: String,
    pub filters: Filters,
    pub classes_enumerated: usize,
    pub entries: Vec<ClassificationEntry>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ms: Option<u64>,
}

fn check_dimension(g: usize, opts: &Options) -> Result<()> {
    if g == 6 && !opts.allow_g6 {
        return Err(Error::ResourceLimit("g = 6 runs must be enabled explicitly (--allow-g6)".into()));
    }
    if g > opts.max_g {
        return Err(Error::ResourceLimit(format!("g = {g} exceeds the configured limit {}", opts.max_g)));
    }
    Ok(())
}

/// Classifies every `Stab(w)`-class of transitive `G ∋ ι` for the polygon.
pub fn classify_newton(np: &NewtonPolygon, filters: &Filters, opts: &Options) -> Result<ClassificationTable> {
    let g = np.g();
    check_dimension(g, opts)?;
    let w = WeightFunction::from_newton(np);
    let classes = enumerate_transitive_subgroups_with_limit(g, &w, opts.max_g)?;
    let results: Vec<Result<Option<ClassificationEntry>>> = classes
        .par_iter()
        .map(|c| {
            let rho = WeightedPermRep::new(w.clone(), c.group.clone())?;
            classify_one(&rho, &c.label, filters)
        })
        .collect();
    let mut entries = Vec::new();
    for r in results {
        if let Some(e) = r? {
            entries.push(e);
        }
    }
    if let Some(a) = &opts.aliases {
        a.attach(np, &mut entries);
    }
    Ok(ClassificationTable {
        schema: SCHEMA.into(),
        g,
        newton: np.to_string(),
        filters: filters.clone(),
        classes_enumerated: classes.len(),
        entries,
        elapsed_ms: None,
    })
}

/// Canonical label of the `Stab(w)`-class containing `group`, if `group`
/// is transitive and contains `ι`.
pub fn locate_class(np: &NewtonPolygon, group: &PermGroup, opts: &Options) -> Result<Option<String>> {
    let g = np.g();
    check_dimension(g, opts)?;
    let w = WeightFunction::from_newton(np);
    let stab = stabilizer_of_weight(&w);
    let key = canonical_key(group, &stab);
    let classes = enumerate_transitive_subgroups_with_limit(g, &w, opts.max_g)?;
    Ok(classes
        .iter()
        .find(|c| c.group.order() == group.order() && canonical_key(&c.group, &stab) == key)
        .map(|c| c.label.clone()))
}

/// Applies the filters to one representation, cheapest checks first.
pub fn classify_one(rho: &WeightedPermRep, label: &str, filters: &Filters) -> Result<Option<ClassificationEntry>> {
    let g = rho.g();
    let simple = rho.is_geometrically_simple();
    if filters.geometrically_simple && !simple {
        return Ok(None);
    }
    let delta = rho.angle_rank();
    if filters.non_maximal_angle_rank && delta >= g {
        return Ok(None);
    }
    let witnesses = if simple { rho.exceptional_witnesses()? } else { vec![] };
    let exceptional = !witnesses.is_empty();
    if filters.exceptional && !exceptional {
        return Ok(None);
    }
    let admissible = match admissible_primes(rho, &filters.primes) {
        Ok(v) => Some(v.into_iter().map(|(p, strong)| AdmissiblePrime { p, strong }).collect::<Vec<_>>()),
        Err(Error::ResourceLimit(m)) => {
            if filters.strongly_admissible {
                return Err(Error::ResourceLimit(m));
            }
            None
        }
        Err(e) => return Err(e),
    };
    if filters.strongly_admissible && !admissible.as_ref().is_some_and(|v| v.iter().any(|a| a.strong)) {
        return Ok(None);
    }
    Ok(Some(ClassificationEntry {
        canonical_label: label.to_string(),
        order: rho.group().order(),
        generators_mod_iota: rho
            .group()
            .generators_mod_conjugation()
            .iter()
            .map(SignedPermutation::to_cycles)
            .collect(),
        wpr: rho.to_json(),
        angle_rank: delta,
        geometrically_simple: simple,
        exceptional,
        witnesses,
        admissible_primes: admissible,
        alias: None,
    }))
}

/// Summary of a whole-dimension sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub schema: String,
    pub g: usize,
    pub tables: Vec<ClassificationTable>,
    /// Polygons whose filtered table is empty.
    pub empty: Vec<String>,
}

/// Classifies every valid polygon of dimension `g`. With a checkpoint path,
/// finished tables are appended there (one JSON line each) and reused on rerun.
pub fn sweep_dimension(g: usize, filters: &Filters, opts: &Options, checkpoint: Option<&Path>) -> Result<SweepReport> {
    check_dimension(g, opts)?;
    let mut done: BTreeMap<String, ClassificationTable> = BTreeMap::new();
    if let Some(path) = checkpoint {
        if path.exists() {
            for line in fs::read_to_string(path)?.lines().filter(|l| !l.trim().is_empty()) {
                let t: ClassificationTable = serde_json::from_str(line)?;
                if t.g == g && t.filters == *filters {
                    done.insert(t.newton.clone(), t);
                }
            }
        }
    }
    let mut tables = Vec::new();
    for np in NewtonPolygon::all(g) {
        let key = np.to_string();
        let table = match done.remove(&key) {
            Some(t) => t,
            None => {
                let t = classify_newton(&np, filters, opts)?;
                if let Some(path) = checkpoint {
                    let mut f = fs::OpenOptions::new().create(true).append(true).open(path)?;
                    writeln!(f, "{}", serde_json::to_string(&t)?)?;
                }
                t
            }
        };
        tables.push(table);
    }
    let empty = tables.iter().filter(|t| t.entries.is_empty()).map(|t| t.newton.clone()).collect();
    Ok(SweepReport { schema: SCHEMA.into(), g, tables, empty })
}

/// Times a closure, recording elapsed milliseconds on the table.
pub fn timed<F: FnOnce() -> Result<ClassificationTable>>(f: F) -> Result<ClassificationTable> {
    let t = Instant::now();
    let mut table = f()?;
    table.elapsed_ms = Some(t.elapsed().as_millis() as u64);
    Ok(table)
}

/// External names for tabulated classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alias {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub example: Option<String>,
}

/// `newton → canonical label → alias`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Aliases(pub BTreeMap<String, BTreeMap<String, Alias>>);

const BUILTIN_ALIASES: &str = include_str!("../../../data/aliases.json");

impl Aliases {
    /// The alias table shipped with the crate.
    pub fn builtin() -> Aliases {
        serde_json::from_str(BUILTIN_ALIASES).expect("shipped alias file is valid")
    }

    pub fn load(path: &Path) -> Result<Aliases> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }

    pub fn attach(&self, np: &NewtonPolygon, entries: &mut [ClassificationEntry]) {
        if let Some(m) = self.0.get(&np.to_string()) {
            for e in entries {
                e.alias = m.get(&e.canonical_label).cloned();
            }
        }
    }
}

/// Markdown table: label, generators of `G/ι`, δ, exceptional, external names.
pub fn to_markdown(t: &ClassificationTable) -> String {
    let np = NewtonPolygon::parse(&t.newton).map(|n| n.short()).unwrap_or_else(|_| t.newton.clone());
    let mut s = String::new();
    let _ = writeln!(s, "### g = {}, Newton polygon {}\n", t.g, np);
    if t.entries.is_empty() {
        let _ = writeln!(s, "_no entries_ ({} classes enumerated)\n", t.classes_enumerated);
        return s;
    }
    let _ = writeln!(s, "| Label | Generators for G/ι | δ | Exceptional | Alias | Example |");
    let _ = writeln!(s, "|---|---|---|---|---|---|");
    for e in &t.entries {
        let (alias, example) = match &e.alias {
            Some(a) => (a.label.as_str(), a.example.as_deref().unwrap_or("")),
            None => ("", ""),
        };
        let _ = writeln!(
            s,
            "| {} | {} | {} | {} | {} | {} |",
            e.canonical_label,
            e.generators_mod_iota.join(", "),
            e.angle_rank,
            if e.exceptional { "Yes" } else { "No" },
            alias,
            example
        );
    }
    s.push('\n');
    s
}

/// Writes one markdown file per dimension with every nonempty table, plus
/// the list of polygons whose tables are empty.
pub fn emit_tables(g: usize, out: &Path, filters: &Filters, opts: &Options) -> Result<PathBuf> {
    let report = sweep_dimension(g, filters, opts, None)?;
    fs::create_dir_all(out)?;
    let mut s = format!("# Dimension {g}\n\n");
    for t in report.tables.iter().filter(|t| !t.entries.is_empty()) {
        s.push_str(&to_markdown(t));
    }
    let _ = writeln!(s, "## Polygons with empty tables\n");
    for np in &report.empty {
        let short = NewtonPolygon::parse(np).map(|n| n.short()).unwrap_or_else(|_| np.clone());
        let _ = writeln!(s, "- {short}");
    }
    let path = out.join(format!("g{g}.md"));
    fs::write(&path, s)?;
    Ok(path)
}
