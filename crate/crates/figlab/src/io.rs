//! Module files on disk: one JSON document per module, in either of two
//! bodies.
//!
//! Common head:
//!
//! ```json
//! {
//!   "name": "kG0",
//!   "field": "Q",
//!   "group": {"order": 2, "identity": 0, "mul": [[0,1],[1,0]], "generators": [1]},
//!   "mode": "presentation"
//! }
//! ```
//!
//! `name` is optional (commands fall back to the file stem), `field` is
//! either the string `"Q"` or `{"Fp": p}`, and `group` is a full
//! multiplication table whose identity must be element `0`.
//!
//! Presentation body: `"generators": [{"degree": b, "rep": {"dim": d,
//! "mats": [...]}}]` and `"relations": [{"degree": a, "rep": {...},
//! "map": {"terms": [...]}}]`. A rep's `mats` lists one matrix per canonical
//! generator letter of the degree-`b` group: the adjacent transpositions
//! `s_1 .. s_{b-1}` first, then one letter per group generator acting in the
//! first slot. Each relation term `{"gen": i, "subset": [..], "perm": [..],
//! "dec": [..], "w": j, "coeff": "c"}` contributes `c` times the translate of
//! slot basis vector `j` along the decorated injection that sends source
//! point `t` to `subset[perm[t]]`; `subset` and `perm` are 1-based (points of
//! `[a]` and `[b]`), `gen`, `w`, and `dec` are 0-based indices. A relation's
//! `map` may instead be `{"matrix": [[..]]}`: an explicit matrix from the
//! relation rep into the free module's degree-`a` piece, contributing one
//! element per column; when the relation carries a `rep`, the matrix is
//! checked to be equivariant for it. The relation `rep` is optional for a
//! terms map.
//!
//! Raw body: `"window": D, "dims": [..], "actions": [..], "trans": [..]`,
//! where `actions[n]` lists the letter matrices of the degree-`n` action in
//! the same canonical order and `trans[n]` is the transition matrix of shape
//! `dims[n+1] x dims[n]`.
//!
//! All matrix entries are field-element strings (`"-2/3"` over Q, `"2"` over
//! F_p). Parsing performs structural checks with field-path diagnostics;
//! `ParsedModule::validate_deep` runs the full semantic validation.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{FigError, Result};
use crate::field::{Field, FieldSpec, PrimeField, Rationals};
use crate::group::FiniteGroup;
use crate::matrix::Matrix;
use crate::module::{degree_letters, FiMorphism, WindowedModule};
use crate::presentation::{GeneratorSlot, Presentation, Relation, RelationTerm};
use crate::rep::GnRep;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    pub order: usize,
    pub identity: usize,
    pub mul: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepFile {
    pub dim: usize,
    /// One matrix per canonical generator letter, rows of entry strings.
    pub mats: Vec<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorFile {
    pub degree: usize,
    pub rep: RepFile,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermFile {
    pub gen: usize,
    pub subset: Vec<usize>,
    pub perm: Vec<usize>,
    pub dec: Vec<usize>,
    pub w: usize,
    pub coeff: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<TermFile>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationFile {
    pub degree: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rep: Option<RepFile>,
    pub map: MapFile,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub field: FieldSpec,
    pub group: GroupFile,
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<GeneratorFile>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relations: Option<Vec<RelationFile>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub actions: Option<Vec<Vec<Vec<Vec<String>>>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trans: Option<Vec<Vec<Vec<String>>>>,
}

/// A parsed module over a fixed field, before any window is chosen.
pub enum ModuleSource<F: Field> {
    Presentation(Presentation<F>),
    Raw(Arc<WindowedModule<F>>),
}

pub struct ParsedModule<F: Field> {
    pub name: Option<String>,
    pub field: F,
    pub group: Arc<FiniteGroup>,
    pub source: ModuleSource<F>,
    /// Relation matrices to check against their declared reps in
    /// `validate_deep` (degree, rep, matrix).
    equivariance_checks: Vec<(usize, GnRep<F>, Matrix<F>)>,
}

/// A parsed module, dispatched over the two supported coefficient fields.
pub enum TypedInput {
    Q(ParsedModule<Rationals>),
    Fp(ParsedModule<PrimeField>),
}

impl<F: Field> ParsedModule<F> {
    /// The window commands start from when none is requested.
    pub fn default_window(&self) -> usize {
        match &self.source {
            ModuleSource::Presentation(p) => p.default_window(),
            ModuleSource::Raw(m) => m.window(),
        }
    }

    /// Whether a bigger window can be honoured (presentations re-materialise;
    /// raw data is capped at its stored window).
    pub fn can_grow(&self) -> bool {
        matches!(self.source, ModuleSource::Presentation(_))
    }

    /// Smallest window a caller may request: presentations need to reach
    /// their top relation degree.
    pub fn min_window(&self) -> usize {
        match &self.source {
            ModuleSource::Presentation(p) => p.max_degree(),
            ModuleSource::Raw(_) => 0,
        }
    }

    /// Produce the module on `0..=window`.
    pub fn materialize(&self, window: usize) -> Result<Arc<WindowedModule<F>>> {
        match &self.source {
            ModuleSource::Presentation(p) => Ok(p.materialize(window)?.0),
            ModuleSource::Raw(m) => {
                if window > m.window() {
                    Err(FigError::WindowExhausted { needed: window, have: m.window() })
                } else if window == m.window() {
                    Ok(Arc::clone(m))
                } else {
                    Ok(Arc::new(m.truncate(window)))
                }
            }
        }
    }

    /// Full semantic validation: representation relations, transition
    /// equivariance (raw mode), presentation references, and relation-matrix
    /// equivariance against declared relation reps.
    pub fn validate_deep(&self) -> Result<()> {
        match &self.source {
            ModuleSource::Presentation(p) => p.validate()?,
            ModuleSource::Raw(m) => m.validate(true)?,
        }
        let f = self.field;
        for (degree, rep, mat) in &self.equivariance_checks {
            rep.validate()?;
            let target_dim = mat.rows;
            for letter in degree_letters(&self.group, *degree) {
                let target_mat = match &self.source {
                    ModuleSource::Presentation(p) => {
                        free_letter_matrix(p, *degree, target_dim, letter)?
                    }
                    ModuleSource::Raw(m) => m.actions[*degree].letter_matrix(letter).clone(),
                };
                let lhs = target_mat.mul(mat);
                let rhs = mat.mul(rep.letter_matrix(letter));
                if lhs != rhs {
                    return Err(FigError::NotEquivariant(format!(
                        "relation matrix at degree {degree} does not commute with letter {letter:?}"
                    )));
                }
            }
            let _ = f;
        }
        Ok(())
    }
}

/// The degree-`a` letter matrix of the free module on a presentation's
/// generator slots (block diagonal over the slots).
fn free_letter_matrix<F: Field>(
    p: &Presentation<F>,
    a: usize,
    expect_dim: usize,
    letter: crate::group::WreathLetter,
) -> Result<Matrix<F>> {
    let mut total = WindowedModule::zero(p.field, Arc::clone(&p.group), a);
    for slot in &p.generators {
        let m = crate::module::build_free(&slot.rep, a)?;
        total = total.direct_sum(&m);
    }
    if total.dims[a] != expect_dim {
        return Err(FigError::DimMismatch {
            op: "relation matrix".into(),
            detail: format!(
                "matrix has {} rows but the free module has dimension {} at degree {a}",
                expect_dim, total.dims[a]
            ),
        });
    }
    Ok(total.actions[a].letter_matrix(letter).clone())
}

fn parse_err(path: &str, msg: impl std::fmt::Display) -> FigError {
    FigError::Parse(format!("{path}: {msg}"))
}

fn parse_matrix<F: Field>(
    field: F,
    rows: &[Vec<String>],
    want_rows: usize,
    want_cols: usize,
    path: &str,
) -> Result<Matrix<F>> {
    if rows.len() != want_rows {
        return Err(parse_err(path, format!("expected {want_rows} rows, found {}", rows.len())));
    }
    let mut parsed = Vec::with_capacity(want_rows);
    for (r, row) in rows.iter().enumerate() {
        if row.len() != want_cols {
            return Err(parse_err(
                &format!("{path}[{r}]"),
                format!("expected {want_cols} entries, found {}", row.len()),
            ));
        }
        let mut out = Vec::with_capacity(want_cols);
        for (c, s) in row.iter().enumerate() {
            out.push(
                field.parse(s).map_err(|e| parse_err(&format!("{path}[{r}][{c}]"), e))?,
            );
        }
        parsed.push(out);
    }
    Ok(Matrix::from_rows(field, want_cols, parsed))
}

fn parse_rep<F: Field>(
    field: F,
    group: &Arc<FiniteGroup>,
    degree: usize,
    rep: &RepFile,
    path: &str,
) -> Result<GnRep<F>> {
    let letters = degree_letters(group, degree);
    if rep.mats.len() != letters.len() {
        return Err(parse_err(
            &format!("{path}.mats"),
            format!(
                "degree {degree} needs {} generator matrices (s_1..s_{} then {} group letters), found {}",
                letters.len(),
                degree.saturating_sub(1),
                if degree == 0 { 0 } else { group.generators.len() },
                rep.mats.len()
            ),
        ));
    }
    let mut mats = Vec::with_capacity(rep.mats.len());
    for (i, m) in rep.mats.iter().enumerate() {
        mats.push(parse_matrix(field, m, rep.dim, rep.dim, &format!("{path}.mats[{i}]"))?);
    }
    let s_count = degree.saturating_sub(1);
    let a_mats = mats.split_off(s_count);
    Ok(GnRep { field, group: Arc::clone(group), n: degree, dim: rep.dim, s_mats: mats, a_mats })
}

fn parse_term<F: Field>(
    field: F,
    group: &FiniteGroup,
    generators: &[GeneratorSlot<F>],
    rel_degree: usize,
    term: &TermFile,
    path: &str,
) -> Result<RelationTerm<F>> {
    let slot = generators
        .get(term.gen)
        .ok_or_else(|| parse_err(&format!("{path}.gen"), format!("no generator {}", term.gen)))?;
    let b = slot.degree;
    if term.subset.len() != b || term.perm.len() != b || term.dec.len() != b {
        return Err(parse_err(
            path,
            format!(
                "subset/perm/dec must each have {b} entries (the degree of generator {})",
                term.gen
            ),
        ));
    }
    for (i, win) in term.subset.windows(2).enumerate() {
        if win[0] >= win[1] {
            return Err(parse_err(
                &format!("{path}.subset"),
                format!("must be strictly increasing (positions {i} and {})", i + 1),
            ));
        }
    }
    if term.subset.iter().any(|&p| p == 0 || p > rel_degree) {
        return Err(parse_err(
            &format!("{path}.subset"),
            format!("entries are 1-based points of [{rel_degree}]"),
        ));
    }
    let mut seen = vec![false; b];
    for &p in &term.perm {
        if p == 0 || p > b || std::mem::replace(&mut seen[p - 1], true) {
            return Err(parse_err(
                &format!("{path}.perm"),
                format!("must be a permutation of 1..={b}"),
            ));
        }
    }
    if term.dec.iter().any(|&d| d >= group.order) {
        return Err(parse_err(
            &format!("{path}.dec"),
            format!("entries are 0-based elements of a group of order {}", group.order),
        ));
    }
    if term.w >= slot.rep.dim {
        return Err(parse_err(
            &format!("{path}.w"),
            format!("basis index out of range for a {}-dimensional slot", slot.rep.dim),
        ));
    }
    let image = term.perm.iter().map(|&p| term.subset[p - 1] - 1).collect();
    let coeff = field.parse(&term.coeff).map_err(|e| parse_err(&format!("{path}.coeff"), e))?;
    Ok(RelationTerm {
        gen: term.gen,
        morphism: FiMorphism { image, dec: term.dec.clone(), target: rel_degree },
        w: term.w,
        coeff,
    })
}

fn parse_typed<F: Field>(field: F, file: &ModuleFile) -> Result<ParsedModule<F>> {
    if file.group.identity != 0 {
        return Err(FigError::BadGroup("the identity must be element 0".into()));
    }
    let group = Arc::new(FiniteGroup::new(
        file.group.order,
        file.group.mul.clone(),
        file.group.generators.clone(),
    )?);
    let mut equivariance_checks = Vec::new();
    let source = match file.mode.as_str() {
        "presentation" => {
            let gens = file
                .generators
                .as_ref()
                .ok_or_else(|| parse_err("generators", "required in presentation mode"))?;
            let mut generators = Vec::with_capacity(gens.len());
            for (i, g) in gens.iter().enumerate() {
                let rep =
                    parse_rep(field, &group, g.degree, &g.rep, &format!("generators[{i}].rep"))?;
                generators.push(GeneratorSlot { degree: g.degree, rep });
            }
            let rels = file.relations.as_deref().unwrap_or(&[]);
            let mut relations = Vec::with_capacity(rels.len());
            for (i, r) in rels.iter().enumerate() {
                let path = format!("relations[{i}]");
                let rep = r
                    .rep
                    .as_ref()
                    .map(|rep| parse_rep(field, &group, r.degree, rep, &format!("{path}.rep")))
                    .transpose()?;
                match (&r.map.terms, &r.map.matrix) {
                    (Some(terms), None) => {
                        let mut parsed = Vec::with_capacity(terms.len());
                        for (t, term) in terms.iter().enumerate() {
                            parsed.push(parse_term(
                                field,
                                &group,
                                &generators,
                                r.degree,
                                term,
                                &format!("{path}.map.terms[{t}]"),
                            )?);
                        }
                        relations.push(Relation { degree: r.degree, terms: parsed });
                    }
                    (None, Some(matrix)) => {
                        let free_dim: usize = generators
                            .iter()
                            .map(|s| {
                                crate::module::binomial(r.degree, s.degree) * s.rep.dim
                            })
                            .sum();
                        let cols = rep.as_ref().map(|rep| rep.dim).unwrap_or_else(|| {
                            matrix.first().map(|row| row.len()).unwrap_or(0)
                        });
                        let mat = parse_matrix(
                            field,
                            matrix,
                            free_dim,
                            cols,
                            &format!("{path}.map.matrix"),
                        )?;
                        // Columns are relation elements in coordinates; turn
                        // each into a coordinate-vector relation.
                        for c in 0..mat.cols {
                            let col = mat.col(c);
                            let terms = coordinate_terms(field, &generators, r.degree, &col);
                            relations.push(Relation { degree: r.degree, terms });
                        }
                        if let Some(rep) = rep {
                            equivariance_checks.push((r.degree, rep, mat));
                        }
                    }
                    _ => {
                        return Err(parse_err(
                            &format!("{path}.map"),
                            "exactly one of `terms` or `matrix` is required",
                        ))
                    }
                }
            }
            ModuleSource::Presentation(Presentation {
                field,
                group: Arc::clone(&group),
                generators,
                relations,
            })
        }
        "raw" => {
            let window =
                file.window.ok_or_else(|| parse_err("window", "required in raw mode"))?;
            let dims =
                file.dims.clone().ok_or_else(|| parse_err("dims", "required in raw mode"))?;
            if dims.len() != window + 1 {
                return Err(parse_err(
                    "dims",
                    format!("expected {} entries for window {window}", window + 1),
                ));
            }
            let actions_json = file
                .actions
                .as_ref()
                .ok_or_else(|| parse_err("actions", "required in raw mode"))?;
            if actions_json.len() != window + 1 {
                return Err(parse_err(
                    "actions",
                    format!("expected {} per-degree entries", window + 1),
                ));
            }
            let trans_json =
                file.trans.as_ref().ok_or_else(|| parse_err("trans", "required in raw mode"))?;
            if trans_json.len() != window {
                return Err(parse_err("trans", format!("expected {window} matrices")));
            }
            let mut actions = Vec::with_capacity(window + 1);
            for (n, mats) in actions_json.iter().enumerate() {
                let rep = parse_rep(
                    field,
                    &group,
                    n,
                    &RepFile { dim: dims[n], mats: mats.clone() },
                    &format!("actions[{n}]"),
                )?;
                actions.push(rep);
            }
            let mut trans = Vec::with_capacity(window);
            for (n, rows) in trans_json.iter().enumerate() {
                trans.push(parse_matrix(
                    field,
                    rows,
                    dims[n + 1],
                    dims[n],
                    &format!("trans[{n}]"),
                )?);
            }
            ModuleSource::Raw(Arc::new(WindowedModule {
                field,
                group: Arc::clone(&group),
                dims,
                actions,
                trans,
            }))
        }
        other => return Err(parse_err("mode", format!("unknown mode `{other}`"))),
    };
    Ok(ParsedModule { name: file.name.clone(), field, group, source, equivariance_checks })
}

/// Expand a coordinate vector of the free module's degree-`a` piece into
/// identity-morphism relation terms, one per nonzero coordinate.
fn coordinate_terms<F: Field>(
    field: F,
    generators: &[GeneratorSlot<F>],
    a: usize,
    col: &[F::El],
) -> Vec<RelationTerm<F>> {
    use crate::module::{binomial, subsets_colex};
    let mut terms = Vec::new();
    let mut offset = 0;
    for (g, slot) in generators.iter().enumerate() {
        let b = slot.degree;
        let block = binomial(a, b) * slot.rep.dim;
        let subsets = subsets_colex(a, b);
        for (s, subset) in subsets.iter().enumerate() {
            for w in 0..slot.rep.dim {
                let idx = offset + s * slot.rep.dim + w;
                let c = &col[idx];
                if field.is_zero(c) {
                    continue;
                }
                terms.push(RelationTerm {
                    gen: g,
                    morphism: FiMorphism::onto_subset(subset, a),
                    w,
                    coeff: c.clone(),
                });
            }
        }
        offset += block;
    }
    terms
}

/// Parse a module file from its JSON text.
pub fn parse_module_str(text: &str) -> Result<TypedInput> {
    let file: ModuleFile = serde_json::from_str(text)?;
    file.field.validate()?;
    match file.field {
        FieldSpec::Q => Ok(TypedInput::Q(parse_typed(Rationals, &file)?)),
        FieldSpec::Fp(p) => Ok(TypedInput::Fp(parse_typed(PrimeField::new(p)?, &file)?)),
    }
}

pub fn parse_module_file(path: &Path) -> Result<TypedInput> {
    let text = std::fs::read_to_string(path)?;
    let mut parsed = parse_module_str(&text)?;
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned());
    match &mut parsed {
        TypedInput::Q(m) => m.name = m.name.take().or(stem),
        TypedInput::Fp(m) => m.name = m.name.take().or(stem),
    }
    Ok(parsed)
}

/// Canonical text form of a module file (pretty JSON, trailing newline).
pub fn module_file_to_string(file: &ModuleFile) -> String {
    let mut s = serde_json::to_string_pretty(file).expect("module files serialize");
    s.push('\n');
    s
}

pub fn group_file(group: &FiniteGroup) -> GroupFile {
    GroupFile {
        order: group.order,
        identity: 0,
        mul: group.table(),
        generators: Some(group.generators.clone()),
    }
}

pub fn rep_file<F: Field>(rep: &GnRep<F>) -> RepFile {
    let f = rep.field;
    let to_rows = |m: &Matrix<F>| -> Vec<Vec<String>> {
        (0..m.rows).map(|r| (0..m.cols).map(|c| f.format(m.at(r, c))).collect()).collect()
    };
    let mats = rep.s_mats.iter().chain(rep.a_mats.iter()).map(to_rows).collect();
    RepFile { dim: rep.dim, mats }
}

/// Serialise a presentation as a module file.
pub fn presentation_file<F: Field>(
    name: Option<String>,
    p: &Presentation<F>,
) -> ModuleFile {
    let f = p.field;
    let generators = p
        .generators
        .iter()
        .map(|s| GeneratorFile { degree: s.degree, rep: rep_file(&s.rep) })
        .collect();
    let relations = p
        .relations
        .iter()
        .map(|r| RelationFile {
            degree: r.degree,
            rep: None,
            map: MapFile {
                terms: Some(
                    r.terms
                        .iter()
                        .map(|t| {
                            let (subset, endo) = t.morphism.normal_form();
                            TermFile {
                                gen: t.gen,
                                subset: subset.iter().map(|&x| x + 1).collect(),
                                perm: endo.perm.iter().map(|&x| x + 1).collect(),
                                dec: endo.dec.clone(),
                                w: t.w,
                                coeff: f.format(&t.coeff),
                            }
                        })
                        .collect(),
                ),
                matrix: None,
            },
        })
        .collect();
    ModuleFile {
        name,
        field: f.spec(),
        group: group_file(&p.group),
        mode: "presentation".into(),
        generators: Some(generators),
        relations: Some(relations),
        window: None,
        dims: None,
        actions: None,
        trans: None,
    }
}

/// Serialise a materialised module as a raw-mode file.
pub fn raw_file<F: Field>(name: Option<String>, m: &WindowedModule<F>) -> ModuleFile {
    let f = m.field;
    let to_rows = |mat: &Matrix<F>| -> Vec<Vec<String>> {
        (0..mat.rows).map(|r| (0..mat.cols).map(|c| f.format(mat.at(r, c))).collect()).collect()
    };
    let actions = m
        .actions
        .iter()
        .map(|rep| rep.s_mats.iter().chain(rep.a_mats.iter()).map(to_rows).collect())
        .collect();
    let trans = m.trans.iter().map(to_rows).collect();
    ModuleFile {
        name,
        field: f.spec(),
        group: group_file(&m.group),
        mode: "raw".into(),
        generators: None,
        relations: None,
        window: Some(m.window()),
        dims: Some(m.dims.clone()),
        actions: Some(actions),
        trans: Some(trans),
    }
}
