//! The `.kz` presentation format: versioned JSON with scalars as strings.
//!
//! Rationals are written `"n"` or `"n/d"`, residues mod `p` as `"r"`. Matrices
//! are lists of rows; multiplication tables are lists of product columns.
//! Saving a loaded document reproduces it byte for byte.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bimodule::{BaseAlgebra, Bimodule, Side};
use crate::cdg::CdgRingSlice;
use crate::error::{Error, Result};
use crate::graded::{GradedSlice, MulTable};
use crate::linalg::{Field, Matrix, Scalar, Vector};
use crate::nonhomog::NonhomogPresentation;
use crate::quadratic::QuadraticPresentation;

pub const FORMAT_VERSION: u32 = 1;

type Text = String;
type TextVec = Vec<Text>;
type TextMat = Vec<TextVec>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    /// `"q"` or `"fp"`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseSpec {
    pub dim: usize,
    /// `structure[i][j]` is `e_i e_j`.
    pub structure: Vec<Vec<TextVec>>,
    pub unit: TextVec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BimoduleSpec {
    pub dim: usize,
    /// One matrix per base basis element.
    pub left: Vec<TextMat>,
    pub right: Vec<TextMat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationSpec {
    /// Name of the generating bimodule in `bimodules`.
    pub generators: String,
    pub side: Side,
    /// Vectors of `V ⊗_k V` (index `a * dim V + b`) spanning the relations.
    pub relations: TextMat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_matrix: Option<TextMat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lifts: Option<TextMat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_values: Option<TextMat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_values: Option<TextMat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableSpec {
    pub i: usize,
    pub j: usize,
    /// Column `x * dim_j + y` is the product of basis elements `x` and `y`.
    pub columns: TextMat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CdgSliceSpec {
    pub dims: Vec<usize>,
    pub tables: Vec<TableSpec>,
    /// `d_n : B^n → B^{n+1}` as `dim B^{n+1} × dim B^n` matrices.
    pub differentials: Vec<TextMat>,
    pub curvature: TextVec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub format_version: u32,
    pub field: FieldSpec,
    pub base: BaseSpec,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub bimodules: BTreeMap<String, BimoduleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub presentation: Option<PresentationSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cdg_slice: Option<CdgSliceSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, serde_json::Value>,
}

/// A presentation read from a document.
#[derive(Clone, Debug, PartialEq)]
pub enum Loaded {
    Quadratic(QuadraticPresentation),
    Nonhomogeneous(NonhomogPresentation),
}

impl Loaded {
    pub fn quadratic(&self) -> &QuadraticPresentation {
        match self {
            Loaded::Quadratic(q) => q,
            Loaded::Nonhomogeneous(p) => p.quadratic(),
        }
    }

    /// The presentation as nonhomogeneous data; quadratic input gets `q = p = h = 0`.
    pub fn nonhomogeneous(&self) -> Result<NonhomogPresentation> {
        match self {
            Loaded::Quadratic(q) => NonhomogPresentation::homogeneous(q.clone()),
            Loaded::Nonhomogeneous(p) => Ok(p.clone()),
        }
    }
}

fn at(path: &str, e: Error) -> Error {
    match e {
        Error::Parse(m) => Error::Parse(format!("{path}: {m}")),
        Error::Dimension(m) => Error::Dimension(format!("{path}: {m}")),
        Error::Invalid(m) => Error::Invalid(format!("{path}: {m}")),
        other => other,
    }
}

fn text_vec(v: &[Scalar]) -> TextVec {
    v.iter().map(|x| x.to_text()).collect()
}

fn text_mat(m: &Matrix) -> TextMat {
    (0..m.rows()).map(|r| text_vec(&m.row(r))).collect()
}

fn read_vec(f: Field, v: &[Text], len: usize, path: &str) -> Result<Vector> {
    if v.len() != len {
        return Err(Error::Dimension(format!("{path}: length {}, expected {len}", v.len())));
    }
    v.iter()
        .enumerate()
        .map(|(i, s)| f.parse(s).map_err(|e| at(&format!("{path}[{i}]"), e)))
        .collect()
}

fn read_mat(f: Field, m: &TextMat, rows: usize, cols: usize, path: &str) -> Result<Matrix> {
    if m.len() != rows {
        return Err(Error::Dimension(format!("{path}: {} rows, expected {rows}", m.len())));
    }
    let rows_v = m
        .iter()
        .enumerate()
        .map(|(r, row)| read_vec(f, row, cols, &format!("{path}[{r}]")))
        .collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_rows(f, cols, &rows_v))
}

pub fn field_spec(f: Field) -> FieldSpec {
    match f {
        Field::Rationals => FieldSpec { kind: "q".into(), p: None },
        Field::Prime(p) => FieldSpec {
            kind: "fp".into(),
            p: Some(p as u64),
        },
    }
}

fn base_spec(r: &BaseAlgebra) -> BaseSpec {
    BaseSpec {
        dim: r.dim(),
        structure: r.structure().iter().map(|row| row.iter().map(|v| text_vec(v)).collect()).collect(),
        unit: text_vec(r.unit()),
    }
}

fn bimodule_spec(m: &Bimodule) -> BimoduleSpec {
    BimoduleSpec {
        dim: m.dim(),
        left: m.lacts().iter().map(text_mat).collect(),
        right: m.racts().iter().map(text_mat).collect(),
    }
}

impl Document {
    fn empty(r: &BaseAlgebra) -> Document {
        Document {
            format_version: FORMAT_VERSION,
            field: field_spec(r.field()),
            base: base_spec(r),
            bimodules: BTreeMap::new(),
            presentation: None,
            cdg_slice: None,
            metadata: BTreeMap::new(),
        }
    }

    fn quadratic_spec(q: &QuadraticPresentation) -> PresentationSpec {
        let rel = q
            .relations()
            .basis()
            .iter()
            .map(|w| text_vec(&q.square().lift(w)))
            .collect();
        PresentationSpec {
            generators: "V".into(),
            side: q.side(),
            relations: rel,
            q_matrix: None,
            lifts: None,
            p_values: None,
            h_values: None,
        }
    }

    pub fn from_quadratic(q: &QuadraticPresentation) -> Document {
        let mut d = Document::empty(q.base());
        d.bimodules.insert("V".into(), bimodule_spec(q.generators()));
        d.presentation = Some(Document::quadratic_spec(q));
        d
    }

    pub fn from_nonhomog(p: &NonhomogPresentation) -> Document {
        let mut d = Document::from_quadratic(p.quadratic());
        let spec = d.presentation.as_mut().expect("presentation just set");
        spec.q_matrix = Some(text_mat(p.q_matrix()));
        spec.lifts = Some(p.lifts().iter().map(|v| text_vec(v)).collect());
        spec.p_values = Some(p.p_values().iter().map(|v| text_vec(v)).collect());
        spec.h_values = Some(p.h_values().iter().map(|v| text_vec(v)).collect());
        d
    }

    pub fn from_loaded(l: &Loaded) -> Document {
        match l {
            Loaded::Quadratic(q) => Document::from_quadratic(q),
            Loaded::Nonhomogeneous(p) => Document::from_nonhomog(p),
        }
    }

    pub fn from_cdg(b: &CdgRingSlice) -> Document {
        let mut d = Document::empty(b.base());
        let s = b.slice();
        let mut tables = Vec::new();
        for i in 0..=s.top() {
            for j in 0..=s.top() - i {
                let t = s.table(i, j);
                tables.push(TableSpec {
                    i,
                    j,
                    columns: t.cols.iter().map(|c| text_vec(c)).collect(),
                });
            }
        }
        d.cdg_slice = Some(CdgSliceSpec {
            dims: s.dims(),
            tables,
            differentials: b.differentials().iter().map(text_mat).collect(),
            curvature: text_vec(b.h()),
        });
        d
    }

    pub fn with_metadata(mut self, key: &str, value: serde_json::Value) -> Document {
        self.metadata.insert(key.into(), value);
        self
    }

    pub fn field(&self) -> Result<Field> {
        match (self.field.kind.as_str(), self.field.p) {
            ("q", None) => Ok(Field::Rationals),
            ("fp", Some(p)) => Field::prime(p).map_err(|e| at("field.p", e)),
            ("q", Some(_)) => Err(Error::Parse("field.p: not allowed for kind \"q\"".into())),
            ("fp", None) => Err(Error::Parse("field.p: required for kind \"fp\"".into())),
            (k, _) => Err(Error::Parse(format!("field.kind: unknown kind {k:?}, expected \"q\" or \"fp\""))),
        }
    }

    pub fn base_algebra(&self) -> Result<Arc<BaseAlgebra>> {
        let f = self.field()?;
        let n = self.base.dim;
        if self.base.structure.len() != n {
            return Err(Error::Dimension(format!(
                "base.structure: {} rows, expected {n}",
                self.base.structure.len()
            )));
        }
        let mut structure = Vec::with_capacity(n);
        for (i, row) in self.base.structure.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Dimension(format!("base.structure[{i}]: length {}, expected {n}", row.len())));
            }
            structure.push(
                row.iter()
                    .enumerate()
                    .map(|(j, v)| read_vec(f, v, n, &format!("base.structure[{i}][{j}]")))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        let unit = read_vec(f, &self.base.unit, n, "base.unit")?;
        BaseAlgebra::new(f, structure, unit).map_err(|e| at("base", e))
    }

    pub fn bimodule(&self, name: &str, r: &Arc<BaseAlgebra>) -> Result<Bimodule> {
        let spec = self
            .bimodules
            .get(name)
            .ok_or_else(|| Error::Parse(format!("bimodules: no bimodule named {name:?}")))?;
        let f = r.field();
        let path = format!("bimodules.{name}");
        let mats = |ms: &[TextMat], side: &str| -> Result<Vec<Matrix>> {
            if ms.len() != r.dim() {
                return Err(Error::Dimension(format!(
                    "{path}.{side}: {} matrices, expected one per base element ({})",
                    ms.len(),
                    r.dim()
                )));
            }
            ms.iter()
                .enumerate()
                .map(|(i, m)| read_mat(f, m, spec.dim, spec.dim, &format!("{path}.{side}[{i}]")))
                .collect()
        };
        let lact = mats(&spec.left, "left")?;
        let ract = mats(&spec.right, "right")?;
        Bimodule::new(r.clone(), r.clone(), lact, ract).map_err(|e| at(&path, e))
    }

    /// The presentation, validated.
    pub fn presentation(&self) -> Result<Loaded> {
        let spec = self
            .presentation
            .as_ref()
            .ok_or_else(|| Error::Parse("presentation: missing".into()))?;
        let r = self.base_algebra()?;
        let f = r.field();
        let v = self.bimodule(&spec.generators, &r)?;
        let (dv, dr) = (v.dim(), r.dim());
        let rels = spec
            .relations
            .iter()
            .enumerate()
            .map(|(i, w)| read_vec(f, w, dv * dv, &format!("presentation.relations[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let q = QuadraticPresentation::from_tensor_relations(v, &rels, spec.side)
            .map_err(|e| at("presentation.relations", e))?;
        let parts = (&spec.q_matrix, &spec.lifts, &spec.p_values, &spec.h_values);
        match parts {
            (None, None, None, None) => Ok(Loaded::Quadratic(q)),
            (Some(qm), Some(lifts), Some(ps), Some(hs)) => {
                let qm = read_mat(f, qm, dr, dv * dr, "presentation.q_matrix")?;
                let list = |m: &TextMat, len: usize, name: &str| -> Result<Vec<Vector>> {
                    m.iter()
                        .enumerate()
                        .map(|(i, w)| read_vec(f, w, len, &format!("presentation.{name}[{i}]")))
                        .collect()
                };
                let lifts = list(lifts, dv * dv, "lifts")?;
                let ps = list(ps, dv, "p_values")?;
                let hs = list(hs, dr, "h_values")?;
                let p = NonhomogPresentation::new(q, qm, lifts, ps, hs).map_err(|e| at("presentation", e))?;
                Ok(Loaded::Nonhomogeneous(p))
            }
            _ => Err(Error::Parse(
                "presentation: q_matrix, lifts, p_values and h_values must be given together".into(),
            )),
        }
    }

    /// The CDG-ring slice; shapes are checked, axioms are not.
    pub fn cdg(&self) -> Result<CdgRingSlice> {
        let spec = self
            .cdg_slice
            .as_ref()
            .ok_or_else(|| Error::Parse("cdg_slice: missing".into()))?;
        let r = self.base_algebra()?;
        let f = r.field();
        let dims = &spec.dims;
        let top = dims
            .len()
            .checked_sub(1)
            .ok_or_else(|| Error::Dimension("cdg_slice.dims: empty".into()))?;
        let mut mult: Vec<Vec<Option<MulTable>>> = (0..=top).map(|i| vec![None; top - i + 1]).collect();
        for (k, t) in spec.tables.iter().enumerate() {
            let path = format!("cdg_slice.tables[{k}]");
            if t.i + t.j > top {
                return Err(Error::Dimension(format!("{path}: degree {} + {} beyond {top}", t.i, t.j)));
            }
            let (l, rr, out) = (dims[t.i], dims[t.j], dims[t.i + t.j]);
            if t.columns.len() != l * rr {
                return Err(Error::Dimension(format!(
                    "{path}.columns: {} columns, expected {}",
                    t.columns.len(),
                    l * rr
                )));
            }
            let cols = t
                .columns
                .iter()
                .enumerate()
                .map(|(c, v)| read_vec(f, v, out, &format!("{path}.columns[{c}]")))
                .collect::<Result<Vec<_>>>()?;
            let slot = &mut mult[t.i][t.j];
            if slot.is_some() {
                return Err(Error::Parse(format!("{path}: duplicate table ({}, {})", t.i, t.j)));
            }
            *slot = Some(MulTable {
                out,
                left: l,
                right: rr,
                cols,
            });
        }
        let mult = mult
            .into_iter()
            .enumerate()
            .map(|(i, row)| {
                row.into_iter()
                    .enumerate()
                    .map(|(j, t)| t.ok_or_else(|| Error::Parse(format!("cdg_slice.tables: missing table ({i}, {j})"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let slice = GradedSlice::from_tables(r, mult).map_err(|e| at("cdg_slice.tables", e))?;
        if spec.differentials.len() != top {
            return Err(Error::Dimension(format!(
                "cdg_slice.differentials: {} maps, expected {top}",
                spec.differentials.len()
            )));
        }
        let d = spec
            .differentials
            .iter()
            .enumerate()
            .map(|(n, m)| read_mat(f, m, dims[n + 1], dims[n], &format!("cdg_slice.differentials[{n}]")))
            .collect::<Result<Vec<_>>>()?;
        let h = read_vec(f, &spec.curvature, *dims.get(2).unwrap_or(&0), "cdg_slice.curvature")?;
        CdgRingSlice::new(slice, d, h).map_err(|e| at("cdg_slice", e))
    }

    /// Canonical text: pretty JSON with a trailing newline.
    pub fn to_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents always serialize");
        s.push('\n');
        s
    }
}

/// Parses a document, checking the version before the schema.
pub fn parse_document(text: &str) -> Result<Document> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    match value.get("format_version").and_then(|v| v.as_u64()) {
        Some(v) if v == FORMAT_VERSION as u64 => {}
        Some(v) => {
            return Err(Error::Parse(format!(
                "format_version: unsupported version {v}, this reader handles {FORMAT_VERSION}"
            )))
        }
        None => return Err(Error::Parse("format_version: missing or not an integer".into())),
    }
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))
}

pub fn load(path: &Path) -> Result<Document> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_document(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn save(doc: &Document, path: &Path) -> Result<()> {
    std::fs::write(path, doc.to_text()).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{self, CorpusPresentation};

    const Q: Field = Field::Rationals;

    fn doc_of(e: &corpus::CorpusEntry) -> Document {
        corpus::document(e)
    }

    #[test]
    fn corpus_round_trips_byte_stable() {
        for e in corpus::entries() {
            let doc = doc_of(&e);
            let text = doc.to_text();
            let back = parse_document(&text).unwrap();
            let loaded = back.presentation().unwrap();
            match &e.presentation {
                CorpusPresentation::Quadratic(q) => assert_eq!(&loaded, &Loaded::Quadratic(q.clone()), "{}", e.name),
                CorpusPresentation::Nonhomogeneous(p) => {
                    assert_eq!(&loaded, &Loaded::Nonhomogeneous(p.clone()), "{}", e.name)
                }
            }
            assert_eq!(back.to_text(), text, "{}", e.name);
            let mut fresh = Document::from_loaded(&loaded);
            fresh.metadata = back.metadata.clone();
            assert_eq!(fresh.to_text(), text, "{}", e.name);
        }
    }

    #[test]
    fn cdg_slice_round_trips() {
        let b = crate::nonhomog::build_cdg_dual(&corpus::weyl1(Q), 3).unwrap();
        let text = Document::from_cdg(&b).to_text();
        let back = parse_document(&text).unwrap().cdg().unwrap();
        assert_eq!(back, b);
        assert_eq!(Document::from_cdg(&back).to_text(), text);
    }

    #[test]
    fn malformed_structure_names_the_index() {
        let mut doc = Document::from_quadratic(&corpus::quiver_relations(Q));
        doc.base.structure[1][0].push("0".into());
        let err = parse_document(&doc.to_text()).unwrap().presentation().unwrap_err();
        assert!(err.to_string().contains("base.structure[1][0]"), "{err}");
    }

    #[test]
    fn unknown_fields_and_versions_are_rejected() {
        let doc = Document::from_quadratic(&corpus::symmetric(Q, 2));
        let mut v: serde_json::Value = serde_json::from_str(&doc.to_text()).unwrap();
        v["extra"] = serde_json::json!(1);
        let err = parse_document(&v.to_string()).unwrap_err();
        assert!(err.to_string().contains("extra"), "{err}");
        v["format_version"] = serde_json::json!(2);
        let err = parse_document(&v.to_string()).unwrap_err();
        assert!(err.to_string().contains("format_version"), "{err}");
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_document("{\n  \"format_version\": 1,\n  oops\n}").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn non_prime_field_is_rejected() {
        let mut doc = Document::from_quadratic(&corpus::symmetric(Field::Prime(5), 2));
        doc.field.p = Some(6);
        assert!(parse_document(&doc.to_text()).unwrap().presentation().is_err());
    }

    #[test]
    fn scalar_text_is_exact() {
        let mut doc = Document::from_quadratic(&corpus::symmetric(Q, 1));
        doc.base.unit = vec!["2/2".into()];
        let r = doc.base_algebra().unwrap();
        assert_eq!(r.unit(), &vec![Q.one()]);
        doc.base.unit = vec!["0.5".into()];
        assert!(matches!(doc.base_algebra(), Err(Error::Parse(_))));
    }
}
