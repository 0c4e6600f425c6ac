//! JSON file formats.
//!
//! Integers are JSON numbers when they fit in 64 bits and decimal strings
//! otherwise. Matrices are lists of rows. Ring elements are coordinate lists
//! in the ring's normal basis.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use endotrace_core::arith::to_i64;
use endotrace_core::endo::{Carrier, EndoContext, TwistedEndo, TwistedTuple};
use endotrace_core::{
    Bimodule, BimoduleMap, FinAbGroup, FinAlgebra, Int, IntMatrix, ProjectivePresentation, RingMatrix, ShadowMap,
    TensorCache, WittVector,
};
use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;

/// An integer that serializes losslessly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Num(pub Int);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match to_i64(&self.0) {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match Value::deserialize(d)? {
            Value::Number(n) => n
                .as_i64()
                .map(|v| Num(Int::from(v)))
                .or_else(|| n.as_u64().map(|v| Num(Int::from(v))))
                .ok_or_else(|| de::Error::custom(format!("{n} is not an integer"))),
            Value::String(s) => s.trim().parse::<Int>().map(Num).map_err(de::Error::custom),
            other => Err(de::Error::custom(format!("expected an integer, found {other}"))),
        }
    }
}

fn nums(v: &[Int]) -> Vec<Num> {
    v.iter().cloned().map(Num).collect()
}

fn ints(v: &[Num]) -> Vec<Int> {
    v.iter().map(|n| n.0.clone()).collect()
}

fn rows_of(m: &IntMatrix) -> Vec<Vec<Num>> {
    m.to_rows().iter().map(|r| nums(r)).collect()
}

fn matrix_of(rows: &[Vec<Num>], cols: usize) -> Result<IntMatrix> {
    if rows.iter().any(|r| r.len() != cols) {
        bail!("matrix rows must all have {cols} entries");
    }
    Ok(IntMatrix::from_rows(&rows.iter().map(|r| ints(r)).collect::<Vec<_>>(), cols))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RingJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub orders: Vec<Num>,
    pub mul: Vec<Vec<Vec<Num>>>,
    pub one: Vec<Num>,
}

impl RingJson {
    pub fn from_ring(a: &FinAlgebra) -> Self {
        RingJson {
            name: Some(a.name().to_string()),
            orders: nums(a.additive().factors()),
            mul: a.structure().iter().map(|row| row.iter().map(|v| nums(v)).collect()).collect(),
            one: nums(a.one()),
        }
    }

    pub fn to_ring(&self) -> Result<FinAlgebra> {
        let orders = ints(&self.orders);
        let mul = self.mul.iter().map(|row| row.iter().map(|v| ints(v)).collect()).collect();
        let one = ints(&self.one);
        let a = match FinAbGroup::new(orders.clone()) {
            Ok(g) => FinAlgebra::named(self.name.as_deref().unwrap_or("ring"), g, mul, one)?,
            Err(_) => FinAlgebra::from_orders(&orders, mul, one)?,
        };
        Ok(a)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BimoduleJson {
    pub left: RingJson,
    pub right: RingJson,
    pub orders: Vec<Num>,
    pub left_action: Vec<Vec<Vec<Num>>>,
    pub right_action: Vec<Vec<Vec<Num>>>,
}

impl BimoduleJson {
    pub fn from_bimodule(m: &Bimodule) -> Self {
        BimoduleJson {
            left: RingJson::from_ring(m.left_ring()),
            right: RingJson::from_ring(m.right_ring()),
            orders: nums(m.group().factors()),
            left_action: m.left_actions().iter().map(rows_of).collect(),
            right_action: m.right_actions().iter().map(rows_of).collect(),
        }
    }

    pub fn to_bimodule(&self) -> Result<Bimodule> {
        self.to_bimodule_over(&self.left.to_ring()?, &self.right.to_ring()?)
    }

    fn to_bimodule_over(&self, left: &FinAlgebra, right: &FinAlgebra) -> Result<Bimodule> {
        let group = FinAbGroup::new(ints(&self.orders))?;
        let k = group.rank();
        let act = |ms: &[Vec<Vec<Num>>]| ms.iter().map(|m| matrix_of(m, k)).collect::<Result<Vec<_>>>();
        Ok(Bimodule::new(left.clone(), right.clone(), group, act(&self.left_action)?, act(&self.right_action)?)?)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MapJson {
    pub source: BimoduleJson,
    pub target: BimoduleJson,
    pub matrix: Vec<Vec<Num>>,
}

impl MapJson {
    pub fn from_map(f: &BimoduleMap) -> Self {
        MapJson {
            source: BimoduleJson::from_bimodule(f.source()),
            target: BimoduleJson::from_bimodule(f.target()),
            matrix: rows_of(f.matrix()),
        }
    }

    pub fn to_map(&self) -> Result<BimoduleMap> {
        let (s, t) = (self.source.to_bimodule()?, self.target.to_bimodule()?);
        let m = matrix_of(&self.matrix, s.rank())?;
        Ok(BimoduleMap::new(s, t, m)?)
    }
}

/// A matrix over a ring: rows of coordinate vectors.
pub type RingMatrixJson = Vec<Vec<Vec<Num>>>;

fn ring_matrix_json(m: &RingMatrix) -> RingMatrixJson {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| nums(m.entry(i, j))).collect()).collect()
}

fn ring_matrix(ring: &FinAlgebra, rows: &RingMatrixJson) -> Result<RingMatrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        bail!("ragged ring matrix");
    }
    let entries = rows.iter().flat_map(|row| row.iter().map(|e| ints(e))).collect();
    Ok(RingMatrix::new(ring, r, c, entries)?)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PresentationJson {
    pub left: RingJson,
    pub right: RingJson,
    pub idempotent: RingMatrixJson,
    pub left_hom: Vec<RingMatrixJson>,
}

impl PresentationJson {
    pub fn from_presentation(pp: &ProjectivePresentation) -> Self {
        PresentationJson {
            left: RingJson::from_ring(pp.left_ring()),
            right: RingJson::from_ring(pp.right_ring()),
            idempotent: ring_matrix_json(pp.idempotent()),
            left_hom: pp.left_hom().iter().map(ring_matrix_json).collect(),
        }
    }

    pub fn to_presentation(&self) -> Result<ProjectivePresentation> {
        self.to_presentation_over(&self.left.to_ring()?, &self.right.to_ring()?)
    }

    fn to_presentation_over(&self, left: &FinAlgebra, right: &FinAlgebra) -> Result<ProjectivePresentation> {
        let e = ring_matrix(right, &self.idempotent)?;
        let hom = self.left_hom.iter().map(|m| ring_matrix(right, m)).collect::<Result<_>>()?;
        Ok(ProjectivePresentation::new(left, right, e, hom)?)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ContextJson {
    pub m: BimoduleJson,
    pub n: BimoduleJson,
}

/// A carrier is given by a presentation or, failing that, by its module
/// (duality data is then solved for).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CarrierJson {
    Presentation(PresentationJson),
    Module(BimoduleJson),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ObjectJson {
    Endo { context: ContextJson, exponent: usize, carrier: CarrierJson, matrix: Vec<Vec<Num>> },
    Tuple { context: ContextJson, carriers: Vec<CarrierJson>, maps: Vec<Vec<Vec<Num>>> },
}

/// A deserialized endomorphism or tuple.
#[derive(Clone, Debug)]
pub enum Object {
    Endo(TwistedEndo),
    Tuple(TwistedTuple),
}

fn context_json(ctx: &EndoContext) -> ContextJson {
    ContextJson { m: BimoduleJson::from_bimodule(ctx.m()), n: BimoduleJson::from_bimodule(ctx.n()) }
}

fn carrier_json(c: &Carrier) -> CarrierJson {
    match c.presentation() {
        Some(pp) => CarrierJson::Presentation(PresentationJson::from_presentation(pp)),
        None => CarrierJson::Module(BimoduleJson::from_bimodule(c.module())),
    }
}

/// Rebuilds the context; rings are shared between `M`, `N` and carriers.
struct Loader {
    cache: Arc<TensorCache>,
    r: FinAlgebra,
    s: FinAlgebra,
}

impl Loader {
    fn context(c: &ContextJson) -> Result<(Loader, EndoContext)> {
        let r = c.m.left.to_ring()?;
        let s = c.n.left.to_ring()?;
        let m = c.m.to_bimodule_over(&r, &r)?;
        let n = c.n.to_bimodule_over(&s, &s)?;
        let cache = Arc::new(TensorCache::new());
        let ctx = EndoContext::new(cache.clone(), &m, &n)?;
        Ok((Loader { cache, r, s }, ctx))
    }

    fn carrier(&self, c: &CarrierJson) -> Result<Carrier> {
        Ok(match c {
            CarrierJson::Presentation(p) => Carrier::from_presentation(&p.to_presentation_over(&self.r, &self.s)?)?,
            CarrierJson::Module(m) => Carrier::from_module(&m.to_bimodule_over(&self.r, &self.s)?, &self.cache)?,
        })
    }
}

impl ObjectJson {
    pub fn from_endo(f: &TwistedEndo) -> Self {
        ObjectJson::Endo {
            context: context_json(f.context()),
            exponent: f.exponent(),
            carrier: carrier_json(f.carrier()),
            matrix: rows_of(f.matrix()),
        }
    }

    pub fn from_tuple(t: &TwistedTuple) -> Self {
        ObjectJson::Tuple {
            context: context_json(t.context()),
            carriers: t.carriers().iter().map(carrier_json).collect(),
            maps: t.maps().iter().map(|f| rows_of(f.matrix())).collect(),
        }
    }

    pub fn load(&self) -> Result<Object> {
        match self {
            ObjectJson::Endo { context, exponent, carrier, matrix } => {
                let (ld, ctx) = Loader::context(context)?;
                let c = ld.carrier(carrier)?;
                let src = ctx.source_of(*exponent, c.module())?;
                let a = matrix_of(matrix, src.rank())?;
                Ok(Object::Endo(TwistedEndo::from_matrix(&ctx, *exponent, c, a)?))
            }
            ObjectJson::Tuple { context, carriers, maps } => {
                let (ld, ctx) = Loader::context(context)?;
                let cs: Vec<Carrier> = carriers.iter().map(|c| ld.carrier(c)).collect::<Result<_>>()?;
                let n = cs.len();
                if maps.len() != n || n == 0 {
                    bail!("a tuple needs one map per carrier");
                }
                let fs = (0..n)
                    .map(|j| {
                        let src = ctx.source_of(1, cs[(j + 1) % n].module())?;
                        let tgt = ctx.target_of(1, cs[j].module())?;
                        let a = matrix_of(&maps[j], src.rank())?;
                        Ok(BimoduleMap::new(src, tgt, a)?)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Object::Tuple(TwistedTuple::new(&ctx, cs, fs)?))
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ShadowMapJson {
    pub source: Vec<Num>,
    pub target: Vec<Num>,
    pub matrix: Vec<Vec<Num>>,
}

impl ShadowMapJson {
    pub fn from_map(f: &ShadowMap) -> Self {
        ShadowMapJson {
            source: nums(f.source().group().factors()),
            target: nums(f.target().group().factors()),
            matrix: rows_of(f.matrix()),
        }
    }
}

/// A ring element: a bare integer for bases of rank one, else coordinates.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Scalar(Num),
    Coords(Vec<Num>),
}

impl Entry {
    fn of(v: &[Int]) -> Self {
        match v {
            [x] => Entry::Scalar(Num(x.clone())),
            _ => Entry::Coords(nums(v)),
        }
    }

    fn coords(&self, base: &FinAlgebra) -> Result<Vec<Int>> {
        let v = match self {
            Entry::Scalar(n) if base.rank() == 1 => vec![n.0.clone()],
            Entry::Scalar(_) => bail!("bare integers need a base of rank one"),
            Entry::Coords(c) => ints(c),
        };
        if v.len() != base.rank() {
            bail!("ring element with {} coordinates over a base of rank {}", v.len(), base.rank());
        }
        Ok(v)
    }
}

fn base_or_integers(base: &Option<RingJson>) -> Result<FinAlgebra> {
    base.as_ref().map_or_else(|| Ok(FinAlgebra::integers()), RingJson::to_ring)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WittJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<RingJson>,
    #[serde(rename = "N")]
    pub bound: usize,
    pub coeffs: Vec<Entry>,
}

impl WittJson {
    pub fn from_witt(w: &WittVector) -> Self {
        WittJson {
            base: Some(RingJson::from_ring(w.base())),
            bound: w.bound(),
            coeffs: w.coeffs().iter().map(|c| Entry::of(c)).collect(),
        }
    }

    pub fn to_witt(&self) -> Result<WittVector> {
        let base = base_or_integers(&self.base)?;
        if self.coeffs.len() > self.bound {
            bail!("{} coefficients exceed the bound N = {}", self.coeffs.len(), self.bound);
        }
        let mut coeffs = self.coeffs.iter().map(|e| e.coords(&base)).collect::<Result<Vec<_>>>()?;
        coeffs.resize(self.bound, base.zero());
        Ok(WittVector::new(&base, coeffs)?)
    }
}

/// A square matrix over a commutative base (the integers by default).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<RingJson>,
    pub matrix: Vec<Vec<Entry>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &RingMatrix) -> Self {
        MatrixJson {
            base: Some(RingJson::from_ring(m.ring())),
            matrix: (0..m.rows()).map(|i| (0..m.cols()).map(|j| Entry::of(m.entry(i, j))).collect()).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<RingMatrix> {
        let base = base_or_integers(&self.base)?;
        let r = self.matrix.len();
        let c = self.matrix.first().map_or(0, Vec::len);
        if self.matrix.iter().any(|row| row.len() != c) {
            bail!("ragged matrix");
        }
        let entries = self.matrix.iter().flatten().map(|e| e.coords(&base)).collect::<Result<_>>()?;
        Ok(RingMatrix::new(&base, r, c, entries)?)
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
