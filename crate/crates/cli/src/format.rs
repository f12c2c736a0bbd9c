//! The versioned JSON document format for inputs and certificates.

use std::collections::BTreeMap;

use purcat_core::fpmod::{make_map, ModuleSpec};
use purcat_core::resolutions::{ResolutionCertificate, Side};
use purcat_core::{ChainMap, Complex, FpModule, Homotopy, Int, IntMatrix, ModuleMap, Ring};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("parse error at line {line}, column {column} (field `{path}`): {message}")]
    Parse { line: usize, column: usize, path: String, message: String },
    #[error("unsupported format version {0}, expected {FORMAT_VERSION}")]
    Version(u32),
    #[error("{kind} `{name}`: {message}")]
    Invalid { kind: &'static str, name: String, message: String },
    #[error("unknown {kind} `{name}`")]
    Unresolved { kind: &'static str, name: String },
}

type Result<T> = std::result::Result<T, FormatError>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum RingDoc {
    Z,
    Zmod { m: Int },
}

impl RingDoc {
    pub fn of(r: &Ring) -> RingDoc {
        match r.modulus() {
            None => RingDoc::Z,
            Some(m) => RingDoc::Zmod { m: m.clone() },
        }
    }

    pub fn build(&self) -> std::result::Result<Ring, purcat_core::Error> {
        match self {
            RingDoc::Z => Ok(Ring::Integers),
            RingDoc::Zmod { m } => Ring::try_zmod(m.clone()),
        }
    }
}

/// A module either named in the input's module table or given inline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModuleRef {
    Name(String),
    Inline(ModuleSpec),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDoc {
    pub src: ModuleRef,
    pub tgt: ModuleRef,
    pub matrix: Vec<Vec<Int>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDoc {
    pub lo: i64,
    pub hi: i64,
    pub modules: Vec<ModuleRef>,
    pub differentials: Vec<Vec<Vec<Int>>>,
}

/// Components of a chain map or homotopy for the degrees `lo, lo + 1, …`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedDoc {
    pub lo: i64,
    pub components: Vec<Vec<Vec<Int>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainMapDoc {
    pub src: String,
    pub tgt: String,
    #[serde(flatten)]
    pub graded: GradedDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDoc {
    pub format: u32,
    pub ring: RingDoc,
    #[serde(default)]
    pub modules: BTreeMap<String, ModuleSpec>,
    #[serde(default)]
    pub maps: BTreeMap<String, MapDoc>,
    #[serde(default)]
    pub complexes: BTreeMap<String, ComplexDoc>,
    #[serde(default)]
    pub chain_maps: BTreeMap<String, ChainMapDoc>,
    /// Command lines for batch mode, e.g. `["homology", "--complex", "M"]`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub batch: Vec<Vec<String>>,
}

/// A validated input: every reference resolved, every matrix shape-checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Workspace {
    pub ring: Ring,
    pub modules: BTreeMap<String, FpModule>,
    pub maps: BTreeMap<String, ModuleMap>,
    pub complexes: BTreeMap<String, Complex>,
    pub chain_maps: BTreeMap<String, ChainMap>,
    pub batch: Vec<Vec<String>>,
}

pub(crate) fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let (line, column) = (inner.line(), inner.column());
        let full = inner.to_string();
        let message = full.strip_suffix(&format!(" at line {line} column {column}")).unwrap_or(&full).to_string();
        FormatError::Parse { line, column, path, message }
    })
}

pub fn parse_input(text: &str) -> Result<Workspace> {
    let doc: InputDoc = from_json(text)?;
    doc.resolve()
}

pub fn serialize_input(w: &Workspace) -> String {
    serde_json::to_string_pretty(&InputDoc::of(w)).expect("documents serialize")
}

fn invalid(kind: &'static str, name: &str, e: impl std::fmt::Display) -> FormatError {
    FormatError::Invalid { kind, name: name.to_string(), message: e.to_string() }
}

pub fn matrix_doc(m: &IntMatrix) -> Vec<Vec<Int>> {
    m.to_rows()
}

/// A matrix with the expected number of rows; an empty row list stands for any
/// matrix with no rows.
pub fn matrix_from(rows: &[Vec<Int>], expected_rows: usize, expected_cols: usize) -> std::result::Result<IntMatrix, purcat_core::Error> {
    if rows.is_empty() {
        return Ok(IntMatrix::zeros(0, if expected_rows == 0 { expected_cols } else { 0 }));
    }
    IntMatrix::from_rows(rows, rows[0].len())
}

impl InputDoc {
    pub fn of(w: &Workspace) -> InputDoc {
        InputDoc {
            format: FORMAT_VERSION,
            ring: RingDoc::of(&w.ring),
            modules: w.modules.iter().map(|(k, m)| (k.clone(), ModuleSpec::of(m))).collect(),
            maps: w.maps.iter().map(|(k, f)| (k.clone(), map_doc(f))).collect(),
            complexes: w.complexes.iter().map(|(k, c)| (k.clone(), complex_doc(c))).collect(),
            chain_maps: w
                .chain_maps
                .iter()
                .map(|(k, f)| {
                    let src = name_of(&w.complexes, f.src());
                    let tgt = name_of(&w.complexes, f.tgt());
                    (k.clone(), ChainMapDoc { src, tgt, graded: chain_map_doc(f) })
                })
                .collect(),
            batch: w.batch.clone(),
        }
    }

    pub fn resolve(&self) -> Result<Workspace> {
        if self.format != FORMAT_VERSION {
            return Err(FormatError::Version(self.format));
        }
        let ring = self.ring.build().map_err(|e| invalid("ring", "ring", e))?;
        let mut modules = BTreeMap::new();
        for (name, spec) in &self.modules {
            modules.insert(name.clone(), spec.build(&ring).map_err(|e| invalid("module", name, e))?);
        }
        let module = |r: &ModuleRef, owner: &'static str, name: &str| -> Result<FpModule> {
            match r {
                ModuleRef::Name(n) => modules.get(n).cloned().ok_or_else(|| FormatError::Unresolved { kind: "module", name: n.clone() }),
                ModuleRef::Inline(s) => s.build(&ring).map_err(|e| invalid(owner, name, e)),
            }
        };
        let mut maps = BTreeMap::new();
        for (name, d) in &self.maps {
            let (s, t) = (module(&d.src, "map", name)?, module(&d.tgt, "map", name)?);
            let m = matrix_from(&d.matrix, t.generators(), s.generators()).map_err(|e| invalid("map", name, e))?;
            maps.insert(name.clone(), make_map(&s, &t, m).map_err(|e| invalid("map", name, e))?);
        }
        let mut complexes = BTreeMap::new();
        for (name, d) in &self.complexes {
            complexes.insert(name.clone(), build_complex(&ring, d, &|r| module(r, "complex", name)).map_err(|e| with_name(e, name))?);
        }
        let mut chain_maps = BTreeMap::new();
        for (name, d) in &self.chain_maps {
            let get = |c: &String| complexes.get(c).ok_or_else(|| FormatError::Unresolved { kind: "complex", name: c.clone() });
            let (s, t) = (get(&d.src)?, get(&d.tgt)?);
            chain_maps.insert(name.clone(), build_chain_map(s, t, &d.graded).map_err(|e| invalid("chain map", name, e))?);
        }
        Ok(Workspace { ring, modules, maps, complexes, chain_maps, batch: self.batch.clone() })
    }
}

fn with_name(e: FormatError, name: &str) -> FormatError {
    match e {
        FormatError::Invalid { kind: "complex", message, .. } => FormatError::Invalid { kind: "complex", name: name.to_string(), message },
        other => other,
    }
}

fn name_of(table: &BTreeMap<String, Complex>, c: &Complex) -> String {
    table.iter().find(|(_, x)| *x == c).map(|(k, _)| k.clone()).unwrap_or_default()
}

pub fn map_doc(f: &ModuleMap) -> MapDoc {
    MapDoc { src: ModuleRef::Inline(ModuleSpec::of(f.src())), tgt: ModuleRef::Inline(ModuleSpec::of(f.tgt())), matrix: matrix_doc(f.matrix()) }
}

/// Complexes always serialize with inline modules.
pub fn complex_doc(c: &Complex) -> ComplexDoc {
    let (lo, hi) = if c.is_zero() { (0, -1) } else { (c.lo(), c.hi()) };
    ComplexDoc {
        lo,
        hi,
        modules: c.modules().iter().map(|m| ModuleRef::Inline(ModuleSpec::of(m))).collect(),
        differentials: (lo..hi).map(|n| matrix_doc(c.d(n).matrix())).collect(),
    }
}

pub(crate) fn build_complex(ring: &Ring, d: &ComplexDoc, module: &dyn Fn(&ModuleRef) -> Result<FpModule>) -> Result<Complex> {
    let err = |m: String| FormatError::Invalid { kind: "complex", name: String::new(), message: m };
    let width = if d.hi < d.lo { 0 } else { (d.hi - d.lo + 1) as usize };
    if d.modules.len() != width {
        return Err(err(format!("window [{}, {}] needs {} modules, got {}", d.lo, d.hi, width, d.modules.len())));
    }
    if d.differentials.len() != width.saturating_sub(1) {
        return Err(err(format!("window [{}, {}] needs {} differentials, got {}", d.lo, d.hi, width.saturating_sub(1), d.differentials.len())));
    }
    let mods = d.modules.iter().map(module).collect::<Result<Vec<_>>>()?;
    let mut diffs = Vec::new();
    for (k, rows) in d.differentials.iter().enumerate() {
        let m = matrix_from(rows, mods[k + 1].generators(), mods[k].generators()).map_err(|e| err(format!("differential at degree {}: {e}", d.lo + k as i64)))?;
        diffs.push(m);
    }
    Complex::new(ring, d.lo, mods, diffs).map_err(|e| err(e.to_string()))
}

pub fn graded_doc(lo: i64, comps: impl Iterator<Item = IntMatrix>) -> GradedDoc {
    GradedDoc { lo, components: comps.map(|m| matrix_doc(&m)).collect() }
}

pub fn chain_map_doc(f: &ChainMap) -> GradedDoc {
    let s = f.support();
    graded_doc(*s.start(), s.map(|n| f.component(n).matrix().clone()))
}

pub fn homotopy_doc(h: &Homotopy) -> GradedDoc {
    let s = h.support();
    graded_doc(*s.start(), s.map(|n| h.component(n).matrix().clone()))
}

fn graded_mats(src: &Complex, tgt: &Complex, shift: i64, d: &GradedDoc) -> std::result::Result<Vec<IntMatrix>, purcat_core::Error> {
    d.components
        .iter()
        .enumerate()
        .map(|(k, rows)| {
            let n = d.lo + k as i64;
            matrix_from(rows, tgt.module(n + shift).generators(), src.module(n).generators())
        })
        .collect()
}

pub fn build_chain_map(src: &Complex, tgt: &Complex, d: &GradedDoc) -> std::result::Result<ChainMap, purcat_core::Error> {
    ChainMap::new(src, tgt, d.lo, graded_mats(src, tgt, 0, d)?)
}

pub fn build_homotopy(src: &Complex, tgt: &Complex, d: &GradedDoc) -> std::result::Result<Homotopy, purcat_core::Error> {
    Homotopy::new(src, tgt, d.lo, graded_mats(src, tgt, -1, d)?)
}

/// Certificates emitted in reports; `validate-cert` re-checks them from scratch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertificateDoc {
    /// `map` is a pure quasi-isomorphism into (injective) or out of (projective) a
    /// termwise pure injective or projective complex.
    Resolution {
        ring: RingDoc,
        side: Side,
        source: ComplexDoc,
        target: ComplexDoc,
        map: GradedDoc,
        qis_witness: GradedDoc,
        termwise_flags: Vec<(i64, bool)>,
    },
    /// `homotopy` contracts `complex`, so the complex is pure acyclic.
    Contraction { ring: RingDoc, complex: ComplexDoc, homotopy: GradedDoc },
    /// `homotopy` contracts the cone of `map`, so the map is a pure quasi-isomorphism.
    PureQis { ring: RingDoc, src: ComplexDoc, tgt: ComplexDoc, map: GradedDoc, homotopy: GradedDoc },
    /// `retraction ∘ map = id`, so the monomorphism is pure.
    Retraction { ring: RingDoc, map: MapDoc, retraction: MapDoc },
}

impl CertificateDoc {
    pub fn resolution(c: &ResolutionCertificate) -> CertificateDoc {
        CertificateDoc::Resolution {
            ring: RingDoc::of(c.source.ring()),
            side: c.side,
            source: complex_doc(&c.source),
            target: complex_doc(&c.target),
            map: chain_map_doc(&c.map),
            qis_witness: homotopy_doc(&c.qis_witness),
            termwise_flags: c.termwise_flags.clone(),
        }
    }

    /// Rebuilds the certificate and re-runs its checks. `Err` carries the reason.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let inline = |ring: &Ring, d: &ComplexDoc| {
            build_complex(ring, d, &|r| match r {
                ModuleRef::Inline(s) => s.build(ring).map_err(|e| invalid("module", "inline", e)),
                ModuleRef::Name(n) => Err(FormatError::Unresolved { kind: "module", name: n.clone() }),
            })
            .map_err(|e| e.to_string())
        };
        let ring_of = |r: &RingDoc| r.build().map_err(|e| e.to_string());
        let s = |e: purcat_core::Error| e.to_string();
        match self {
            CertificateDoc::Resolution { ring, side, source, target, map, qis_witness, termwise_flags } => {
                let ring = ring_of(ring)?;
                let (m, t) = (inline(&ring, source)?, inline(&ring, target)?);
                let f = match side {
                    Side::Injective => build_chain_map(&m, &t, map),
                    Side::Projective => build_chain_map(&t, &m, map),
                }
                .map_err(s)?;
                let cone = purcat_core::complexes::cone(&f).complex;
                let h = build_homotopy(&cone, &cone, qis_witness).map_err(s)?;
                let cert = ResolutionCertificate { source: m, target: t, map: f, side: *side, qis_witness: h, termwise_flags: termwise_flags.clone() };
                cert.validate().map_err(s)
            }
            CertificateDoc::Contraction { ring, complex, homotopy } => {
                let c = inline(&ring_of(ring)?, complex)?;
                let h = build_homotopy(&c, &c, homotopy).map_err(s)?;
                h.is_contraction().then_some(()).ok_or_else(|| "homotopy is not a contraction".to_string())
            }
            CertificateDoc::PureQis { ring, src, tgt, map, homotopy } => {
                let ring = ring_of(ring)?;
                let f = build_chain_map(&inline(&ring, src)?, &inline(&ring, tgt)?, map).map_err(s)?;
                let cone = purcat_core::complexes::cone(&f).complex;
                let h = build_homotopy(&cone, &cone, homotopy).map_err(s)?;
                h.is_contraction().then_some(()).ok_or_else(|| "homotopy does not contract the cone".to_string())
            }
            CertificateDoc::Retraction { ring, map, retraction } => {
                let ring = ring_of(ring)?;
                let f = build_map(&ring, map)?;
                let r = build_map(&ring, retraction)?;
                if r.src() != f.tgt() || r.tgt() != f.src() {
                    return Err("retraction has the wrong shape".into());
                }
                f.then(&r).equals(&ModuleMap::identity(f.src())).then_some(()).ok_or_else(|| "retraction ∘ map is not the identity".to_string())
            }
        }
    }
}

fn build_map(ring: &Ring, d: &MapDoc) -> std::result::Result<ModuleMap, String> {
    let m = |r: &ModuleRef| match r {
        ModuleRef::Inline(s) => s.build(ring).map_err(|e| e.to_string()),
        ModuleRef::Name(n) => Err(format!("unknown module `{n}`")),
    };
    let (s, t) = (m(&d.src)?, m(&d.tgt)?);
    let x = matrix_from(&d.matrix, t.generators(), s.generators()).map_err(|e| e.to_string())?;
    make_map(&s, &t, x).map_err(|e| e.to_string())
}
