//! JSON file formats. Rationals are always strings, `"p/q"` or an integer.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use ultratree_core::space::{ScanRecord, UltraSpace};
use ultratree_core::symbolic::{Attachment, CustomSeq, Family, LabelSeq, Scalar, Sites, SymbolicTree};
use ultratree_core::{build_tree, validate_space, LabeledTree, Rational};

#[derive(Debug)]
pub enum FormatError {
    Json(serde_json::Error),
    Rational(String),
    /// The document parsed but describes an invalid object.
    Invalid { kind: String, message: String },
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatError::Json(e) => write!(f, "malformed JSON: {e}"),
            FormatError::Rational(s) => write!(f, "not a rational: {s:?}"),
            FormatError::Invalid { message, .. } => write!(f, "{message}"),
        }
    }
}

impl std::error::Error for FormatError {}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Json(e)
    }
}

impl FormatError {
    /// Short error name, printed by the command-line tool.
    pub fn kind(&self) -> String {
        match self {
            FormatError::Json(_) => "MalformedJson".into(),
            FormatError::Rational(_) => "InvalidRational".into(),
            FormatError::Invalid { kind, .. } => kind.clone(),
        }
    }
}

fn invalid<E: fmt::Debug + fmt::Display>(e: E) -> FormatError {
    FormatError::Invalid { kind: error_name(&e), message: e.to_string() }
}

/// Variant name of an error, read off its `Debug` form.
pub fn error_name<E: fmt::Debug>(e: &E) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric() && c != '_').next().unwrap_or("Error").to_string()
}

fn rat(s: &str) -> Result<Rational, FormatError> {
    s.trim().parse().map_err(|_| FormatError::Rational(s.to_string()))
}

fn rats(v: &[String]) -> Result<Vec<Rational>, FormatError> {
    v.iter().map(|s| rat(s)).collect()
}

fn strs(v: &[Rational]) -> Vec<String> {
    v.iter().map(Rational::to_string).collect()
}

// ---- finite trees ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeJson {
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
    pub labels: BTreeMap<String, String>,
}

impl TreeJson {
    pub fn of(t: &LabeledTree) -> Self {
        TreeJson {
            vertices: t.ids().to_vec(),
            edges: t.edge_ids().into_iter().map(|(u, v)| [u, v]).collect(),
            labels: t.ids().iter().map(|v| (v.clone(), t.label_of(v).unwrap().to_string())).collect(),
        }
    }

    pub fn build(&self) -> Result<LabeledTree, FormatError> {
        let labels = self.labels.iter().map(|(k, v)| Ok((k.clone(), rat(v)?))).collect::<Result<_, FormatError>>()?;
        let edges = self.edges.iter().map(|[u, v]| (u.clone(), v.clone())).collect();
        build_tree(self.vertices.clone(), edges, labels).map_err(invalid)
    }
}

pub fn parse_tree(text: &str) -> Result<LabeledTree, FormatError> {
    serde_json::from_str::<TreeJson>(text)?.build()
}

pub fn tree_to_string(t: &LabeledTree) -> String {
    serde_json::to_string_pretty(&TreeJson::of(t)).expect("tree JSON serializes")
}

// ---- distance matrices ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub points: Vec<String>,
    pub d: Vec<Vec<String>>,
}

impl MatrixJson {
    pub fn of(x: &UltraSpace) -> Self {
        MatrixJson { points: x.points().to_vec(), d: x.rows().iter().map(|r| strs(r)).collect() }
    }

    pub fn build(&self) -> Result<UltraSpace, FormatError> {
        let rows = self.d.iter().map(|r| rats(r)).collect::<Result<_, _>>()?;
        validate_space(self.points.clone(), rows).map_err(invalid)
    }
}

pub fn parse_space(text: &str) -> Result<UltraSpace, FormatError> {
    serde_json::from_str::<MatrixJson>(text)?.build()
}

pub fn space_to_string(x: &UltraSpace) -> String {
    serde_json::to_string_pretty(&MatrixJson::of(x)).expect("matrix JSON serializes")
}

// ---- symbolic trees ----

/// A literal rational, or a parameter indexed by the family member `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarJson {
    Lit(String),
    Indexed { indexed: Box<SeqJson> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SeqJson {
    Const { c: ScalarJson },
    Harmonic { a: ScalarJson },
    Geometric { a: ScalarJson, r: ScalarJson },
    PrimeHarmonic { a: ScalarJson },
    FiniteSupport { terms: Vec<String> },
    Modulated { period: u64, seqs: Vec<SeqJson> },
    Subsequence { seq: Box<SeqJson>, offset: u64, step: u64 },
    Custom {
        prefix: Vec<String>,
        limsup: String,
        liminf: String,
        inf: String,
        vanishes: bool,
        #[serde(default)]
        zero_free: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SitesJson {
    /// `"all"`, `"even"` or `"odd"`.
    Named(String),
    Progression { offset: u64, step: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttachmentJson {
    pub site: String,
    pub anchor: String,
    pub tree: SymbolicJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SymbolicJson {
    Finite {
        tree: TreeJson,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scale: Option<ScalarJson>,
    },
    Ray { labels: SeqJson },
    Star { center: ScalarJson, leaves: SeqJson },
    GlueFinite { base: Box<SymbolicJson>, attachments: Vec<AttachmentJson> },
    GlueFamily {
        base: Box<SymbolicJson>,
        sites: SitesJson,
        template: Box<SymbolicJson>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        anchor: Option<String>,
        envelope: SeqJson,
    },
}

impl ScalarJson {
    fn of(s: &Scalar) -> Self {
        match s {
            Scalar::Lit(v) => ScalarJson::Lit(v.to_string()),
            Scalar::Indexed(q) => ScalarJson::Indexed { indexed: Box::new(SeqJson::of(q)) },
        }
    }

    fn build(&self) -> Result<Scalar, FormatError> {
        Ok(match self {
            ScalarJson::Lit(s) => Scalar::Lit(rat(s)?),
            ScalarJson::Indexed { indexed } => Scalar::indexed(indexed.build()?),
        })
    }
}

impl SeqJson {
    pub fn of(s: &LabelSeq) -> Self {
        let sc = ScalarJson::of;
        match s {
            LabelSeq::Const(c) => SeqJson::Const { c: sc(c) },
            LabelSeq::Harmonic(a) => SeqJson::Harmonic { a: sc(a) },
            LabelSeq::Geometric { a, r } => SeqJson::Geometric { a: sc(a), r: sc(r) },
            LabelSeq::PrimeHarmonic(a) => SeqJson::PrimeHarmonic { a: sc(a) },
            LabelSeq::FiniteSupport(t) => SeqJson::FiniteSupport { terms: strs(t) },
            LabelSeq::Modulated { period, seqs } => {
                SeqJson::Modulated { period: *period, seqs: seqs.iter().map(SeqJson::of).collect() }
            }
            LabelSeq::Subsequence { seq, offset, step } => {
                SeqJson::Subsequence { seq: Box::new(SeqJson::of(seq)), offset: *offset, step: *step }
            }
            LabelSeq::Custom(c) => SeqJson::Custom {
                prefix: strs(&c.prefix),
                limsup: c.limsup.to_string(),
                liminf: c.liminf.to_string(),
                inf: c.inf.to_string(),
                vanishes: c.vanishes,
                zero_free: c.zero_free,
            },
        }
    }

    pub fn build(&self) -> Result<LabelSeq, FormatError> {
        Ok(match self {
            SeqJson::Const { c } => LabelSeq::Const(c.build()?),
            SeqJson::Harmonic { a } => LabelSeq::Harmonic(a.build()?),
            SeqJson::Geometric { a, r } => LabelSeq::Geometric { a: a.build()?, r: r.build()? },
            SeqJson::PrimeHarmonic { a } => LabelSeq::PrimeHarmonic(a.build()?),
            SeqJson::FiniteSupport { terms } => LabelSeq::FiniteSupport(rats(terms)?),
            SeqJson::Modulated { period, seqs } => LabelSeq::Modulated {
                period: *period,
                seqs: seqs.iter().map(SeqJson::build).collect::<Result<_, _>>()?,
            },
            SeqJson::Subsequence { seq, offset, step } => {
                LabelSeq::Subsequence { seq: Box::new(seq.build()?), offset: *offset, step: *step }
            }
            SeqJson::Custom { prefix, limsup, liminf, inf, vanishes, zero_free } => LabelSeq::Custom(CustomSeq {
                prefix: rats(prefix)?,
                limsup: rat(limsup)?,
                liminf: rat(liminf)?,
                inf: rat(inf)?,
                vanishes: *vanishes,
                zero_free: *zero_free,
            }),
        })
    }
}

impl SitesJson {
    fn of(s: Sites) -> Self {
        match s {
            Sites::All => SitesJson::Named("all".into()),
            Sites::Even => SitesJson::Named("even".into()),
            Sites::Odd => SitesJson::Named("odd".into()),
            Sites::Progression { offset, step } => SitesJson::Progression { offset, step },
        }
    }

    fn build(&self) -> Result<Sites, FormatError> {
        match self {
            SitesJson::Named(n) => match n.as_str() {
                "all" => Ok(Sites::All),
                "even" => Ok(Sites::Even),
                "odd" => Ok(Sites::Odd),
                other => Err(FormatError::Invalid {
                    kind: "InvalidSites".into(),
                    message: format!("unknown site pattern {other:?}; expected all, even, odd or {{offset, step}}"),
                }),
            },
            SitesJson::Progression { offset, step } => Ok(Sites::Progression { offset: *offset, step: *step }),
        }
    }
}

impl SymbolicJson {
    pub fn of(t: &SymbolicTree) -> Self {
        match t {
            SymbolicTree::Finite { tree, scale } => {
                SymbolicJson::Finite { tree: TreeJson::of(tree), scale: scale.as_ref().map(ScalarJson::of) }
            }
            SymbolicTree::Ray(s) => SymbolicJson::Ray { labels: SeqJson::of(s) },
            SymbolicTree::Star { center, leaves } => {
                SymbolicJson::Star { center: ScalarJson::of(center), leaves: SeqJson::of(leaves) }
            }
            SymbolicTree::GlueFinite { base, attachments } => SymbolicJson::GlueFinite {
                base: Box::new(SymbolicJson::of(base)),
                attachments: attachments
                    .iter()
                    .map(|a| AttachmentJson {
                        site: a.site.to_string(),
                        anchor: a.anchor.to_string(),
                        tree: SymbolicJson::of(&a.tree),
                    })
                    .collect(),
            },
            SymbolicTree::GlueFamily(f) => SymbolicJson::GlueFamily {
                base: Box::new(SymbolicJson::of(&f.base)),
                sites: SitesJson::of(f.sites),
                template: Box::new(SymbolicJson::of(&f.template)),
                anchor: f.anchor.as_ref().map(ToString::to_string),
                envelope: SeqJson::of(&f.envelope),
            },
        }
    }

    pub fn build(&self) -> Result<SymbolicTree, FormatError> {
        Ok(match self {
            SymbolicJson::Finite { tree, scale } => {
                SymbolicTree::Finite { tree: tree.build()?, scale: scale.as_ref().map(ScalarJson::build).transpose()? }
            }
            SymbolicJson::Ray { labels } => SymbolicTree::Ray(labels.build()?),
            SymbolicJson::Star { center, leaves } => SymbolicTree::Star { center: center.build()?, leaves: leaves.build()? },
            SymbolicJson::GlueFinite { base, attachments } => SymbolicTree::GlueFinite {
                base: Box::new(base.build()?),
                attachments: attachments
                    .iter()
                    .map(|a| {
                        Ok(Attachment {
                            site: a.site.parse().map_err(invalid)?,
                            anchor: a.anchor.parse().map_err(invalid)?,
                            tree: a.tree.build()?,
                        })
                    })
                    .collect::<Result<_, FormatError>>()?,
            },
            SymbolicJson::GlueFamily { base, sites, template, anchor, envelope } => {
                SymbolicTree::GlueFamily(Box::new(Family {
                    base: base.build()?,
                    sites: sites.build()?,
                    template: template.build()?,
                    anchor: anchor.as_deref().map(str::parse).transpose().map_err(invalid)?,
                    envelope: envelope.build()?,
                }))
            }
        })
    }
}

/// Parses a symbolic tree; the result is structurally decoded but not yet
/// validated against the classifier's well-formedness rules.
pub fn parse_symbolic(text: &str) -> Result<SymbolicTree, FormatError> {
    serde_json::from_str::<SymbolicJson>(text)?.build()
}

pub fn symbolic_to_string(t: &SymbolicTree) -> String {
    serde_json::to_string_pretty(&SymbolicJson::of(t)).expect("symbolic JSON serializes")
}

// ---- scan records ----

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanLine {
    pub space_id: String,
    pub canonical_hierarchy: String,
    pub predicate: bool,
    pub representable: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_tree: Option<TreeJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failing_ball: Option<Vec<String>>,
    pub space: MatrixJson,
}

impl ScanLine {
    pub fn of(r: &ScanRecord) -> Self {
        ScanLine {
            space_id: r.space_id.clone(),
            canonical_hierarchy: r.canonical_hierarchy.clone(),
            predicate: r.predicate,
            representable: r.representable,
            witness_tree: r.witness_tree.as_ref().map(TreeJson::of),
            failing_ball: r.failing_ball.as_ref().map(|b| b.members.clone()),
            space: MatrixJson::of(&r.space),
        }
    }

    /// One line of JSON, no trailing newline.
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("scan record serializes")
    }
}
