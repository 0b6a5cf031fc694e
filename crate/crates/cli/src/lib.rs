//! Request building, analysis and rendering behind the `npcoh` binary.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use npcoh_core::closed_form::{report_from_algebra, CohomologyReport, Dimension};
use npcoh_core::engine::{CohomologyProfile, TwistedComplex};
use npcoh_core::error::{GradingError, MilnorError};
use npcoh_core::milnor::{milnor_algebra, MilnorAlgebra};
use npcoh_core::normal_forms::{catalog_sweep, Family, SingularityClass};
use npcoh_core::{parse_polynomial, solve_weights, Execution, Polynomial, QuasiDegree, Variables, WeightSystem};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INFINITE_CODIMENSION: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    InfiniteCodimension(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::InfiniteCodimension(_) => EXIT_INFINITE_CODIMENSION,
        }
    }
}

fn input(e: impl ToString) -> CliError {
    CliError::Input(e.to_string())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    ClosedForm,
    BruteForce,
    Verify,
}

/// Where the germ comes from: a polynomial or a named class.
#[derive(Clone, Debug, Default)]
pub struct GermSpec {
    pub poly: Option<String>,
    pub vars: Option<String>,
    pub weights: Option<String>,
    pub class: Option<String>,
    pub n: Option<usize>,
    pub signs: Option<String>,
}

#[derive(Clone, Debug)]
pub struct AnalysisRequest {
    pub label: Option<String>,
    pub f: Polynomial,
    pub vars: Variables,
    pub weights: WeightSystem,
    pub p_list: Vec<i64>,
    pub mode: Mode,
    pub window: Option<(QuasiDegree, QuasiDegree)>,
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty())
}

pub fn parse_weights(s: &str) -> Result<WeightSystem, CliError> {
    let w = split_list(s)
        .map(|t| t.parse::<u32>().map_err(|_| input(format!("bad weight `{t}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    WeightSystem::new(w).map_err(input)
}

pub fn parse_signs(s: &str) -> Result<Vec<i8>, CliError> {
    split_list(s)
        .map(|t| match t {
            "+" | "+1" | "1" => Ok(1),
            "-" | "-1" => Ok(-1),
            _ => Err(input(format!("bad sign `{t}`"))),
        })
        .collect()
}

pub fn parse_window(s: &str) -> Result<(QuasiDegree, QuasiDegree), CliError> {
    let bad = || input(format!("window must be LO:HI, got `{s}`"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(input(format!("window lower bound {lo} exceeds upper bound {hi}")));
    }
    Ok((lo, hi))
}

/// Variable count implied by `text`: the largest `k` among `xk`, or the
/// position of the last alias `x, y, z, t` used.
fn inferred_nvars(text: &str) -> usize {
    let chars: Vec<char> = text.chars().collect();
    let mut best = 0;
    let mut i = 0;
    while i < chars.len() {
        if !chars[i].is_ascii_alphabetic() || (i > 0 && chars[i - 1].is_ascii_alphabetic()) {
            i += 1;
            continue;
        }
        let mut j = i + 1;
        while j < chars.len() && chars[j].is_ascii_digit() {
            j += 1;
        }
        let digits: String = chars[i + 1..j].iter().collect();
        let ends = j == chars.len() || !chars[j].is_ascii_alphabetic();
        if chars[i] == 'x' && !digits.is_empty() {
            best = best.max(digits.parse().unwrap_or(0));
        } else if let (true, true, Some(k)) = (digits.is_empty(), ends, "xyzt".find(chars[i])) {
            best = best.max(k + 1);
        }
        i = j;
    }
    best
}

pub fn resolve_germ(spec: &GermSpec) -> Result<(Option<String>, Polynomial, Variables, WeightSystem), CliError> {
    match (&spec.poly, &spec.class) {
        (Some(_), Some(_)) => Err(input("give either --poly or --class, not both")),
        (None, None) => Err(input("one of --poly or --class is required")),
        (None, Some(name)) => {
            let n = spec.n.ok_or_else(|| input("--class needs --n"))?;
            let signs = spec.signs.as_deref().map(parse_signs).transpose()?;
            let class = SingularityClass::parse(name, n, signs).map_err(input)?;
            let (f, w, _) = class.standard_polynomial().map_err(input)?;
            let w = match &spec.weights {
                Some(s) => parse_weights(s)?,
                None => w,
            };
            let vars = Variables::standard(n).map_err(input)?;
            w.quasihomogeneous_degree(&f).map_err(input)?;
            Ok((Some(class.to_string()), f, vars, w))
        }
        (Some(text), None) => {
            let given_w = spec.weights.as_deref().map(parse_weights).transpose()?;
            let vars = match &spec.vars {
                Some(v) => Variables::new(split_list(v).map(String::from)).map_err(input)?,
                None => {
                    let n = given_w
                        .as_ref()
                        .map(WeightSystem::nvars)
                        .or(spec.n)
                        .unwrap_or_else(|| inferred_nvars(text).max(3));
                    Variables::standard(n).map_err(input)?
                }
            };
            let f = parse_polynomial(text, &vars).map_err(input)?;
            if f.is_zero() {
                return Err(input(GradingError::ZeroPolynomial));
            }
            let w = match given_w {
                Some(w) => {
                    w.quasihomogeneous_degree(&f).map_err(input)?;
                    w
                }
                None => solve_weights(&f).map_err(input)?.0,
            };
            Ok((None, f, vars, w))
        }
    }
}

impl AnalysisRequest {
    pub fn new(spec: &GermSpec, p: &[i64], mode: Mode, window: Option<&str>) -> Result<Self, CliError> {
        let (label, f, vars, weights) = resolve_germ(spec)?;
        let n = vars.len() as i64;
        let mut p_list = if p.is_empty() { vec![0, n - 2] } else { p.to_vec() };
        p_list.sort_unstable();
        p_list.dedup();
        let window = window.map(parse_window).transpose()?;
        Ok(AnalysisRequest {
            label,
            f,
            vars,
            weights,
            p_list,
            mode,
            window,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Match,
    Mismatch,
    Sentinel,
    Infinite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DimLabel {
    Infinite,
    NotCovered,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DimValue {
    Count(usize),
    Label(DimLabel),
}

impl std::fmt::Display for DimValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DimValue::Count(d) => write!(f, "{d}"),
            DimValue::Label(DimLabel::Infinite) => f.write_str("infinite"),
            DimValue::Label(DimLabel::NotCovered) => f.write_str("not covered"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorRecord {
    pub label: String,
    pub degree: i64,
    pub form: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileRecord {
    pub window: (i64, i64),
    pub per_degree: BTreeMap<i64, usize>,
    pub total: usize,
    pub stabilized: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyRecord {
    pub k: usize,
    pub dim: DimValue,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_part: Option<usize>,
    pub generators: Vec<GeneratorRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<ProfileRecord>,
    pub placement: BTreeMap<i64, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub k: usize,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Everything computed for one value of `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<String>,
    pub polynomial: String,
    pub n: usize,
    pub weights: Vec<u32>,
    #[serde(rename = "N")]
    pub n_deg: i64,
    pub codimension: usize,
    pub basis: Vec<String>,
    pub r: BTreeMap<i64, usize>,
    pub s: usize,
    pub p: i64,
    pub cohomology: Vec<CohomologyRecord>,
    pub verdicts: Vec<VerdictRecord>,
}

impl AnalysisRecord {
    pub fn has_mismatch(&self) -> bool {
        self.verdicts.iter().any(|v| v.verdict == Verdict::Mismatch)
    }
}

fn milnor(req: &AnalysisRequest) -> Result<MilnorAlgebra, CliError> {
    milnor_algebra(&req.f, &req.weights).map_err(|e| match e {
        MilnorError::InfiniteCodimension(_) => CliError::InfiniteCodimension(e.to_string()),
        other => input(other),
    })
}

fn profile_record(p: &CohomologyProfile) -> ProfileRecord {
    ProfileRecord {
        window: p.window,
        per_degree: p.per_degree.clone(),
        total: p.total,
        stabilized: p.stabilized,
    }
}

fn closed_dim(d: &Dimension) -> (DimValue, Option<usize>) {
    match d {
        Dimension::Finite(x) => (DimValue::Count(*x), None),
        Dimension::Infinite { e_part } => (DimValue::Label(DimLabel::Infinite), *e_part),
        Dimension::NotCovered => (DimValue::Label(DimLabel::NotCovered), None),
    }
}

fn verdict(dim: &Dimension, placement: &BTreeMap<i64, usize>, prof: &CohomologyProfile) -> VerdictRecord {
    let k = prof.k;
    let rec = |verdict, detail: Option<String>| VerdictRecord { k, verdict, detail };
    match dim {
        Dimension::NotCovered => rec(Verdict::Sentinel, None),
        Dimension::Infinite { .. } if prof.stabilized => rec(
            Verdict::Mismatch,
            Some(format!("closed form is infinite but the profile vanishes at the top of the window (total {})", prof.total)),
        ),
        Dimension::Infinite { .. } => rec(Verdict::Infinite, None),
        Dimension::Finite(d) => {
            if !prof.stabilized {
                return rec(
                    Verdict::Mismatch,
                    Some(format!("profile does not vanish at the top of {:?}", prof.window)),
                );
            }
            if prof.total != *d {
                return rec(Verdict::Mismatch, Some(format!("closed form {d}, brute force {}", prof.total)));
            }
            let listed: usize = placement.values().sum();
            if listed == *d && placement != &prof.per_degree {
                return rec(
                    Verdict::Mismatch,
                    Some(format!("placement {placement:?} vs profile {:?}", prof.per_degree)),
                );
            }
            rec(Verdict::Match, None)
        }
    }
}

fn record_for_p(
    req: &AnalysisRequest,
    a: &MilnorAlgebra,
    report: &CohomologyReport,
    profiles: Option<Vec<CohomologyProfile>>,
) -> AnalysisRecord {
    let names = req.vars.names();
    let n = req.vars.len();
    let mono = |m: &npcoh_core::Monomial| Polynomial::term(m.clone(), npcoh_core::poly::scalar(1)).display_with(names);
    let mut cohomology = Vec::with_capacity(n + 1);
    let mut verdicts = Vec::new();
    for k in 0..=n {
        let entry = report.entry(k);
        let prof = profiles.as_ref().map(|ps| &ps[k]);
        let (dim, e_part, generators, placement) = match req.mode {
            Mode::BruteForce => {
                let prof = prof.expect("brute-force mode computes profiles");
                let dim = if prof.stabilized {
                    DimValue::Count(prof.total)
                } else {
                    DimValue::Label(DimLabel::Infinite)
                };
                (dim, None, Vec::new(), prof.per_degree.clone())
            }
            _ => {
                let (dim, e_part) = closed_dim(&entry.dimension);
                let gens = entry
                    .generators
                    .iter()
                    .map(|g| GeneratorRecord {
                        label: g.label.clone(),
                        degree: g.degree,
                        form: g.form.display_with(names),
                    })
                    .collect();
                (dim, e_part, gens, entry.placement.clone())
            }
        };
        if let (Mode::Verify, Some(prof)) = (req.mode, prof) {
            verdicts.push(verdict(&entry.dimension, &entry.placement, prof));
        }
        cohomology.push(CohomologyRecord {
            k,
            dim,
            e_part,
            generators,
            profile: prof.map(profile_record),
            placement,
        });
    }
    AnalysisRecord {
        class: req.label.clone(),
        polynomial: req.f.display_with(names),
        n,
        weights: req.weights.weights().to_vec(),
        n_deg: a.f_degree(),
        codimension: a.codimension(),
        basis: a.basis().iter().map(mono).collect(),
        r: report.counts.r.clone(),
        s: report.counts.s,
        p: report.p,
        cohomology,
        verdicts,
    }
}

/// One record per `p`, ordered by `p`.
pub fn analyze(req: &AnalysisRequest, exec: Execution) -> Result<Vec<AnalysisRecord>, CliError> {
    let a = milnor(req)?;
    let mut out = Vec::with_capacity(req.p_list.len());
    for &p in &req.p_list {
        let report = report_from_algebra(&a, p);
        let profiles = match req.mode {
            Mode::ClosedForm => None,
            Mode::BruteForce | Mode::Verify => {
                let cx = TwistedComplex::new(&req.f, &req.weights, p).map_err(input)?;
                Some(cx.profiles(req.window, exec))
            }
        };
        out.push(record_for_p(req, &a, &report, profiles));
    }
    Ok(out)
}

pub fn parse_families(s: &str) -> Result<Vec<Family>, CliError> {
    split_list(s)
        .map(|t| match t.to_ascii_lowercase().as_str() {
            "a" => Ok(Family::A),
            "d" => Ok(Family::D),
            "e" => Ok(Family::E),
            "regular" => Ok(Family::Regular),
            "quadratic" => Ok(Family::NondegenerateQuadratic),
            _ => Err(input(format!("unknown family `{t}`"))),
        })
        .collect()
}

/// Runs every class of the sweep through [`analyze`].
pub fn catalog(
    n_values: &[usize],
    families: &[Family],
    max_k: Option<u32>,
    p: &[i64],
    mode: Mode,
    window: Option<&str>,
    exec: Execution,
) -> Result<Vec<AnalysisRecord>, CliError> {
    let mut out = Vec::new();
    for class in catalog_sweep(n_values.iter().copied(), families, max_k) {
        let spec = GermSpec {
            class: Some(class.to_string()),
            n: Some(class.n()),
            ..GermSpec::default()
        };
        let req = AnalysisRequest::new(&spec, p, mode, window)?;
        out.extend(analyze(&req, exec)?);
    }
    Ok(out)
}

fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (i, c) in r.iter().enumerate() {
            width[i] = width[i].max(c.chars().count());
        }
    }
    let mut out = String::new();
    let line = |cells: Vec<&str>, out: &mut String| {
        let padded: Vec<String> = cells.iter().zip(&width).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "{}", padded.join("  ").trim_end());
    };
    line(header.to_vec(), &mut out);
    line(width.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().iter().map(String::as_str).collect(), &mut out);
    for r in rows {
        line(r.iter().map(String::as_str).collect(), &mut out);
    }
    out
}

const SHOWN_DEGREES: usize = 8;

/// `d:count` pairs; long maps keep the first few and the last entry.
fn degree_map(m: &BTreeMap<i64, usize>) -> String {
    if m.is_empty() {
        return "-".into();
    }
    let cells: Vec<String> = m.iter().map(|(d, c)| format!("{d}:{c}")).collect();
    if cells.len() <= SHOWN_DEGREES {
        return cells.join(" ");
    }
    format!(
        "{} ... {} ({} degrees)",
        cells[..SHOWN_DEGREES - 1].join(" "),
        cells[cells.len() - 1],
        cells.len()
    )
}

pub fn render_text(records: &[AnalysisRecord]) -> String {
    let mut out = String::new();
    let mut last_germ: Option<(&str, &[u32])> = None;
    for r in records {
        if last_germ != Some((&r.polynomial, &r.weights)) {
            let _ = writeln!(out, "f = {}", r.polynomial);
            if let Some(c) = &r.class {
                let _ = writeln!(out, "class {c}, n = {}", r.n);
            }
            let w: Vec<String> = r.weights.iter().map(u32::to_string).collect();
            let _ = writeln!(out, "weights ({}), N = {}, codimension {}", w.join(","), r.n_deg, r.codimension);
            let _ = writeln!(out, "basis {{{}}}", r.basis.join(", "));
            last_germ = Some((&r.polynomial, &r.weights));
        }
        let rs: Vec<String> = r.r.iter().map(|(j, c)| format!("r{j}={c}")).collect();
        let _ = writeln!(out, "\np = {}  (s = {}{}{})", r.p, r.s, if rs.is_empty() { "" } else { ", " }, rs.join(", "));
        let verdict_of = |k: usize| r.verdicts.iter().find(|v| v.k == k);
        let rows: Vec<Vec<String>> = r
            .cohomology
            .iter()
            .map(|c| {
                let mut dim = c.dim.to_string();
                if let Some(e) = c.e_part {
                    let _ = write!(dim, " (E {e})");
                }
                let profile = c
                    .profile
                    .as_ref()
                    .map(|p| format!("{}{} [{}]", p.total, if p.stabilized { "" } else { "+" }, degree_map(&p.per_degree)))
                    .unwrap_or_else(|| "-".into());
                let verdict = verdict_of(c.k)
                    .map(|v| {
                        let tag = serde_json::to_value(v.verdict).unwrap().as_str().unwrap().to_string();
                        match &v.detail {
                            Some(d) => format!("{tag} ({d})"),
                            None => tag,
                        }
                    })
                    .unwrap_or_else(|| "-".into());
                let gens: Vec<&str> = c.generators.iter().map(|g| g.label.as_str()).collect();
                vec![
                    format!("H^{}", c.k),
                    dim,
                    degree_map(&c.placement),
                    profile,
                    verdict,
                    if gens.is_empty() { "-".into() } else { gens.join(", ") },
                ]
            })
            .collect();
        out.push_str(&table(&["k", "dim", "placement", "brute force", "verdict", "generators"], &rows));
    }
    out
}

pub fn render_catalog(records: &[AnalysisRecord]) -> String {
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            let dims: Vec<String> = r.cohomology.iter().map(|c| c.dim.to_string()).collect();
            let status = if r.verdicts.is_empty() {
                "-".to_string()
            } else if r.has_mismatch() {
                "MISMATCH".to_string()
            } else {
                "MATCH".to_string()
            };
            vec![
                r.class.clone().unwrap_or_default(),
                r.n.to_string(),
                r.p.to_string(),
                r.n_deg.to_string(),
                r.codimension.to_string(),
                format!("({})", dims.join(", ")),
                status,
            ]
        })
        .collect();
    table(&["class", "n", "p", "N", "c", "dims", "status"], &rows)
}

/// The mismatching `(p, k)` pairs, one per line.
pub fn mismatch_report(records: &[AnalysisRecord]) -> String {
    let mut out = String::new();
    for r in records {
        for v in r.verdicts.iter().filter(|v| v.verdict == Verdict::Mismatch) {
            let who = r.class.as_deref().unwrap_or(&r.polynomial);
            let _ = writeln!(out, "mismatch: {who}, p = {}, k = {}: {}", r.p, v.k, v.detail.as_deref().unwrap_or(""));
        }
    }
    out
}
