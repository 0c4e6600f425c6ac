//! Seeded random instances.
//!
//! Every instance is described by a [`Blueprint`]: a small serializable
//! recipe that [`Blueprint::build`] turns into rings, twists, carriers and
//! maps. Shrinking works on blueprints, so a reported counterexample is a
//! recipe that replays exactly.

use std::sync::Arc;

use anyhow::{bail, Result};
use endotrace_core::arith::gcd;
use endotrace_core::bimodule::{Fault, HomSpace};
use endotrace_core::endo::{Carrier, EndoContext, TwistedEndo, TwistedTuple};
use endotrace_core::{Bimodule, BimoduleMap, FinAlgebra, Int, IntMatrix, ProjectivePresentation, RingMatrix, TensorCache};
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Bounds on generated instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Largest ring rank.
    pub rank: usize,
    /// Largest carrier size `k` in `e·S^k`.
    pub carrier: usize,
    /// Longest twisted tuple.
    pub tuple: usize,
    /// Trace sequence bound.
    pub bound: usize,
    /// Largest Frobenius exponent product.
    pub frobenius: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { rank: 6, carrier: 3, tuple: 4, bound: 8, frobenius: 8 }
    }
}

impl Caps {
    /// Parses `rank=6,k=3,len=4,bound=8,frob=8`; omitted keys keep defaults.
    pub fn parse(s: &str) -> Result<Self> {
        let mut caps = Caps::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let Some((key, value)) = part.split_once('=') else {
                bail!("cap '{part}' is not key=value");
            };
            let v: usize = value.trim().parse().map_err(|_| anyhow::anyhow!("cap '{part}' needs a positive integer"))?;
            if v == 0 {
                bail!("cap '{part}' must be positive");
            }
            match key.trim() {
                "rank" => caps.rank = v,
                "k" | "carrier" => caps.carrier = v,
                "len" | "tuple" => caps.tuple = v,
                "bound" => caps.bound = v,
                "frob" | "frobenius" => caps.frobenius = v,
                other => bail!("unknown cap '{other}'"),
            }
        }
        Ok(caps)
    }
}

/// A catalog ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingSpec {
    pub family: String,
    pub params: Vec<u64>,
}

impl RingSpec {
    fn new(family: &str, params: &[u64]) -> Self {
        RingSpec { family: family.to_string(), params: params.to_vec() }
    }

    pub fn build(&self) -> Result<FinAlgebra> {
        Ok(FinAlgebra::catalog(&self.family, &self.params)?)
    }

    pub fn rank(&self) -> usize {
        match (self.family.as_str(), self.params.as_slice()) {
            ("matrix", [k, _]) => (*k * *k) as usize,
            ("group-algebra", [_, k]) | ("truncated-polynomial", [_, k]) => *k as usize,
            ("upper-triangular", _) => 3,
            _ => 1,
        }
    }

    fn is_commutative(&self) -> bool {
        !matches!(self.family.as_str(), "matrix" | "upper-triangular")
    }

    /// Smaller rings of the same family.
    fn shrinks(&self) -> Vec<RingSpec> {
        let mut out = Vec::new();
        for (i, &p) in self.params.iter().enumerate() {
            // Moduli shrink toward 2; sizes (k, d) toward 1.
            let floor = match (self.family.as_str(), i) {
                ("matrix", 0) | ("group-algebra", 1) | ("truncated-polynomial", 1) => 1,
                _ => 2,
            };
            if p > floor {
                for q in [floor, p / 2, p - 1] {
                    if q >= floor && q < p {
                        let mut params = self.params.clone();
                        params[i] = q;
                        let spec = RingSpec { family: self.family.clone(), params };
                        if !out.contains(&spec) {
                            out.push(spec);
                        }
                    }
                }
            }
        }
        if self.family != "cyclic" && self.family != "integers" {
            out.push(RingSpec::new("cyclic", &[2]));
        }
        out
    }
}

/// How the left ring `R` relates to `S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LeftMode {
    /// `R = S`; carriers are `g·D·g⁻¹·S^k` with central `D` and `R` acting
    /// through an automorphism.
    Same,
    /// `R` is the prime ring of `S` acting through the unit; `D` may use any
    /// idempotent of `S`.
    Prime,
}

/// A carrier `e·S^k` with `e = g·diag(d)·g⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CarrierSpec {
    /// Idempotent choice per slot.
    pub diag: Vec<u32>,
    /// `g` as a product of elementary matrices `1 + c·E_ij`.
    pub ops: Vec<(usize, usize, Vec<i64>)>,
    /// Automorphism through which `R` acts (in [`LeftMode::Same`]).
    pub phi: u32,
}

/// A recipe for one instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Blueprint {
    pub ring: RingSpec,
    pub left: LeftMode,
    /// Summands of `M`: 0 is the unit bimodule, `j > 0` an automorphism twist.
    pub m: Vec<u32>,
    /// Summands of `N`, as for `M`.
    pub n: Vec<u32>,
    pub carriers: Vec<CarrierSpec>,
    /// Integers consumed, cyclically, wherever a random coefficient is needed.
    pub coeffs: Vec<i64>,
    /// Operator exponents.
    pub exponents: Vec<usize>,
}

/// Which instances a suite wants.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub carriers: (usize, usize),
    pub commutative: bool,
    pub integers: bool,
    /// `M` or `N` (or both) is allowed to be a twist or a sum.
    pub twist_m: bool,
    pub twist_n: bool,
    pub sums: bool,
    /// `M = R` or `N = S`.
    pub one_trivial: bool,
    pub prime_left: bool,
    pub coeffs: usize,
    /// Largest `rank(S)·k`.
    pub budget: usize,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            carriers: (1, 1),
            commutative: false,
            integers: false,
            twist_m: true,
            twist_n: true,
            sums: false,
            one_trivial: false,
            prime_left: true,
            coeffs: 24,
            budget: 8,
        }
    }
}

/// Per-case generator, seeded from the run seed, the suite name and the
/// case index so streams are independent.
pub fn case_rng(seed: u64, stream: &str, case: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(case_seed(seed, stream, case))
}

pub fn case_seed(seed: u64, stream: &str, case: usize) -> u64 {
    // FNV-1a over the stream name, then a SplitMix64 finalizer.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in stream.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    let mut z = seed ^ h.rotate_left(17) ^ (case as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn draw_ring(rng: &mut ChaCha8Rng, shape: &Shape, caps: &Caps) -> RingSpec {
    if shape.integers {
        return RingSpec::new("integers", &[]);
    }
    loop {
        let spec = match rng.gen_range(0..7) {
            0 => RingSpec::new("cyclic", &[rng.gen_range(2..=9)]),
            1 => RingSpec::new("integers", &[]),
            2 => RingSpec::new("matrix", &[2, rng.gen_range(2..=3)]),
            3 => RingSpec::new("group-algebra", &[rng.gen_range(2..=5), rng.gen_range(2..=3)]),
            4 => RingSpec::new("upper-triangular", &[rng.gen_range(2..=4)]),
            5 => RingSpec::new("truncated-polynomial", &[*[0, 2, 3, 4].choose(rng).unwrap(), rng.gen_range(2..=3)]),
            _ => RingSpec::new("group-algebra", &[0, 2]),
        };
        if spec.rank() <= caps.rank && (!shape.commutative || spec.is_commutative()) {
            return spec;
        }
    }
}

fn draw_twist(rng: &mut ChaCha8Rng, allowed: bool, sums: bool) -> Vec<u32> {
    if !allowed {
        return vec![0];
    }
    let one = |rng: &mut ChaCha8Rng| if rng.gen_bool(0.6) { rng.gen_range(1..=4) } else { 0 };
    if sums && rng.gen_bool(0.5) {
        vec![one(rng), one(rng)]
    } else {
        vec![one(rng)]
    }
}

impl Blueprint {
    pub fn draw(rng: &mut ChaCha8Rng, shape: &Shape, caps: &Caps) -> Blueprint {
        let ring = draw_ring(rng, shape, caps);
        let left = if shape.prime_left && rng.gen_bool(0.35) { LeftMode::Prime } else { LeftMode::Same };
        let (lo, hi) = shape.carriers;
        let count = rng.gen_range(lo..=hi.max(lo));
        let max_k = (shape.budget / ring.rank()).clamp(1, caps.carrier);
        let carriers = (0..count)
            .map(|_| {
                let k = rng.gen_range(1..=max_k);
                // Mostly full slots so carriers are rarely zero.
                let diag = (0..k).map(|_| if rng.gen_bool(0.8) { 1 } else { rng.gen_range(0..4) }).collect();
                let nops = if k > 1 { rng.gen_range(0..=3) } else { 0 };
                let ops = (0..nops)
                    .map(|_| {
                        let i = rng.gen_range(0..k);
                        let j = (i + rng.gen_range(1..k)) % k;
                        let c = (0..ring.rank()).map(|_| rng.gen_range(-2..=2)).collect();
                        (i, j, c)
                    })
                    .collect();
                CarrierSpec { diag, ops, phi: if rng.gen_bool(0.5) { rng.gen_range(1..=4) } else { 0 } }
            })
            .collect();
        let twist_m = shape.twist_m && left == LeftMode::Same;
        let mut m = draw_twist(rng, twist_m, shape.sums && ring.rank() <= 2);
        let mut n = draw_twist(rng, shape.twist_n, shape.sums && ring.rank() <= 2);
        if shape.one_trivial {
            if rng.gen_bool(0.5) {
                m = vec![0];
            } else {
                n = vec![0];
            }
        }
        let coeffs = (0..shape.coeffs).map(|_| rng.gen_range(-4..=4)).collect();
        Blueprint { ring, left, m, n, carriers, coeffs, exponents: Vec::new() }
    }

    /// Candidate simplifications, roughly from most to least drastic.
    pub fn shrinks(&self, min_carriers: usize) -> Vec<Blueprint> {
        let mut out = Vec::new();
        let mut push = |b: Blueprint| {
            if b != *self && !out.contains(&b) {
                out.push(b);
            }
        };
        for j in 0..self.carriers.len() {
            if self.carriers.len() > min_carriers {
                let mut b = self.clone();
                b.carriers.remove(j);
                push(b);
            }
        }
        for (side, list) in [(0, &self.m), (1, &self.n)] {
            if *list != [0] {
                let mut b = self.clone();
                *(if side == 0 { &mut b.m } else { &mut b.n }) = vec![0];
                push(b);
            }
            for j in 0..list.len() {
                if list.len() > 1 {
                    let mut b = self.clone();
                    (if side == 0 { &mut b.m } else { &mut b.n }).remove(j);
                    push(b);
                }
            }
        }
        for ring in self.ring.shrinks() {
            let mut b = self.clone();
            b.ring = ring;
            push(b);
        }
        for (j, c) in self.carriers.iter().enumerate() {
            if c.diag.len() > 1 {
                let mut b = self.clone();
                let k = c.diag.len() - 1;
                b.carriers[j].diag.truncate(k);
                b.carriers[j].ops.retain(|(p, q, _)| *p < k && *q < k);
                push(b);
            }
            for o in 0..c.ops.len() {
                let mut b = self.clone();
                b.carriers[j].ops.remove(o);
                push(b);
            }
            if c.phi != 0 {
                let mut b = self.clone();
                b.carriers[j].phi = 0;
                push(b);
            }
        }
        if self.left == LeftMode::Prime {
            let mut b = self.clone();
            b.left = LeftMode::Same;
            push(b);
        }
        for (i, &e) in self.exponents.iter().enumerate() {
            if e > 1 {
                let mut b = self.clone();
                b.exponents[i] = e - 1;
                push(b);
            }
        }
        if self.coeffs.len() > 1 {
            let mut b = self.clone();
            b.coeffs.truncate(self.coeffs.len() / 2);
            push(b);
        }
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                let mut b = self.clone();
                b.coeffs[i] = 0;
                push(b);
                if c.abs() > 1 {
                    let mut b = self.clone();
                    b.coeffs[i] = c.signum();
                    push(b);
                }
            }
        }
        out
    }

    pub fn build(&self, fault: Option<Fault>) -> Result<Instance> {
        let s = self.ring.build()?;
        let autos = automorphisms(&self.ring, &s)?;
        let pick = |j: u32| -> &IntMatrix { &autos[j as usize % autos.len()] };
        let cache = Arc::new(match fault {
            Some(f) => TensorCache::with_fault(f),
            None => TensorCache::new(),
        });
        let r = match self.left {
            LeftMode::Same => s.clone(),
            LeftMode::Prime => prime_ring(&s)?,
        };
        let twist = |ring: &FinAlgebra, list: &[u32], autos: &dyn Fn(u32) -> IntMatrix| -> Result<Bimodule> {
            let parts: Vec<Bimodule> = list
                .iter()
                .map(|&j| {
                    if j == 0 {
                        Ok(cache.unit(ring))
                    } else {
                        Ok(Bimodule::twisted(ring, &autos(j), &IntMatrix::identity(ring.rank()))?)
                    }
                })
                .collect::<Result<_>>()?;
            Ok(match parts.as_slice() {
                [one] => one.clone(),
                _ => cache.direct_sum(&parts)?.module.clone(),
            })
        };
        let m = match self.left {
            LeftMode::Same => twist(&r, &self.m, &|j| pick(j).clone())?,
            LeftMode::Prime => twist(&r, &self.m, &|_| IntMatrix::identity(r.rank()))?,
        };
        let n = twist(&s, &self.n, &|j| pick(j).clone())?;
        let ctx = EndoContext::new(cache.clone(), &m, &n)?;
        let idem = idempotents(&self.ring, &s, self.left);
        let presentations = self
            .carriers
            .iter()
            .map(|c| carrier(&r, &s, self.left, c, &idem, pick(c.phi)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Instance { ctx, presentations, coeffs: Coeffs::new(&self.coeffs) })
    }
}

/// The built objects of a blueprint.
pub struct Instance {
    pub ctx: EndoContext,
    pub presentations: Vec<ProjectivePresentation>,
    pub coeffs: Coeffs,
}

impl Instance {
    pub fn carrier(&self, j: usize) -> Result<Carrier> {
        Ok(Carrier::from_presentation(&self.presentations[j])?)
    }

    pub fn carriers(&self) -> Result<Vec<Carrier>> {
        (0..self.presentations.len()).map(|j| self.carrier(j)).collect()
    }

    /// A random element of the hom lattice `source → target`.
    pub fn map(&mut self, source: &Bimodule, target: &Bimodule) -> Result<BimoduleMap> {
        let h = HomSpace::new(source, target)?;
        let y: Vec<Int> = h.generators().iter().map(|_| Int::from(self.coeffs.next())).collect();
        Ok(h.combination(&y))
    }

    /// A random endomorphism of exponent `e` on carrier `j`.
    pub fn endo(&mut self, j: usize, e: usize) -> Result<TwistedEndo> {
        let c = self.carrier(j)?;
        let src = self.ctx.source_of(e, c.module())?;
        let tgt = self.ctx.target_of(e, c.module())?;
        let f = self.map(&src, &tgt)?;
        Ok(TwistedEndo::new(&self.ctx, e, c, f)?)
    }

    /// A random tuple on all carriers, in order.
    pub fn tuple(&mut self) -> Result<TwistedTuple> {
        let cs = self.carriers()?;
        let n = cs.len();
        let maps = (0..n)
            .map(|j| {
                let src = self.ctx.source_of(1, cs[(j + 1) % n].module())?;
                let tgt = self.ctx.target_of(1, cs[j].module())?;
                self.map(&src, &tgt)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TwistedTuple::new(&self.ctx, cs, maps)?)
    }
}

/// Cyclic reader over the blueprint's integers.
#[derive(Clone, Debug)]
pub struct Coeffs {
    values: Vec<i64>,
    pos: usize,
}

impl Coeffs {
    fn new(values: &[i64]) -> Self {
        Coeffs { values: values.to_vec(), pos: 0 }
    }

    pub fn next(&mut self) -> i64 {
        if self.values.is_empty() {
            return 0;
        }
        let v = self.values[self.pos % self.values.len()];
        self.pos += 1;
        v
    }
}

/// Additive order of `1`, or `0` when it is infinite.
fn characteristic(s: &FinAlgebra) -> Int {
    let mut c = Int::one();
    for (x, d) in s.one().iter().zip(s.additive().factors()) {
        if d.is_zero() {
            if !x.is_zero() {
                return Int::zero();
            }
            continue;
        }
        let order = d / gcd(x, d);
        c = endotrace_core::arith::lcm(&c, &order);
    }
    c
}

fn prime_ring(s: &FinAlgebra) -> Result<FinAlgebra> {
    let c = characteristic(s);
    if c.is_zero() {
        return Ok(FinAlgebra::integers());
    }
    let c = endotrace_core::arith::to_u64(&c).ok_or_else(|| anyhow::anyhow!("characteristic out of range"))?;
    Ok(FinAlgebra::catalog("cyclic", &[c])?)
}

/// Identity first, then a few automorphisms of the catalog ring.
fn automorphisms(spec: &RingSpec, s: &FinAlgebra) -> Result<Vec<IntMatrix>> {
    let k = s.rank();
    let mut out = vec![IntMatrix::identity(k)];
    let images = |f: &dyn Fn(&[Int]) -> Vec<Int>| {
        let cols: Vec<Vec<Int>> = (0..k).map(|i| f(&s.basis(i))).collect();
        IntMatrix::from_columns(k, &cols)
    };
    let conj = |u: Vec<Int>, v: Vec<Int>| images(&|x| s.mul(&s.mul(&u, x), &v));
    let p = spec.params.clone();
    match spec.family.as_str() {
        "matrix" if p[0] >= 2 => {
            let dim = p[0] as usize;
            for c in 1..p[1].max(2) {
                let c = Int::from(c);
                let e01 = s.basis(1);
                let u = s.add(s.one(), &s.additive().scale(&c, &e01));
                let v = s.sub(s.one(), &s.additive().scale(&c, &e01));
                out.push(conj(u, v));
                let e10 = s.basis(dim);
                let u = s.add(s.one(), &s.additive().scale(&c, &e10));
                let v = s.sub(s.one(), &s.additive().scale(&c, &e10));
                out.push(conj(u, v));
            }
        }
        "upper-triangular" => {
            for c in 1..p[0].max(2) {
                let c = Int::from(c);
                let e12 = s.basis(1);
                let u = s.add(s.one(), &s.additive().scale(&c, &e12));
                let v = s.sub(s.one(), &s.additive().scale(&c, &e12));
                out.push(conj(u, v));
            }
        }
        "group-algebra" => {
            let order = p[1] as usize;
            for u in 2..order {
                if endotrace_core::arith::gcd_u64(u as u64, order as u64) == 1 {
                    out.push(IntMatrix::from_fn(order, order, |i, j| Int::from(((j * u) % order == i) as i64)));
                }
            }
        }
        "truncated-polynomial" => {
            let (m, d) = (p[0], p[1] as usize);
            let units: Vec<i64> = if m == 0 {
                vec![-1]
            } else {
                (2..m).filter(|&u| endotrace_core::arith::gcd_u64(u, m) == 1).map(|u| u as i64).collect()
            };
            for u in units {
                out.push(IntMatrix::from_fn(d, d, |i, j| if i == j { Int::from(u).pow(i as u32) } else { Int::zero() }));
            }
        }
        _ => {}
    }
    for a in &out {
        if !s.is_automorphism(a) {
            bail!("generated map is not an automorphism of {}", s.name());
        }
    }
    Ok(out)
}

/// Idempotents available for carrier slots: 0 and 1, plus corner
/// idempotents when `R` acts through the prime ring.
fn idempotents(spec: &RingSpec, s: &FinAlgebra, left: LeftMode) -> Vec<Vec<Int>> {
    let mut out = vec![s.zero(), s.one().to_vec()];
    if left == LeftMode::Prime {
        match spec.family.as_str() {
            "matrix" => {
                let dim = spec.params[0] as usize;
                out.extend((0..dim).map(|i| s.basis(i * dim + i)));
            }
            "upper-triangular" => {
                out.push(s.basis(0));
                out.push(s.basis(2));
            }
            _ => {}
        }
    }
    out
}

fn carrier(
    r: &FinAlgebra,
    s: &FinAlgebra,
    left: LeftMode,
    spec: &CarrierSpec,
    idem: &[Vec<Int>],
    phi: &IntMatrix,
) -> Result<ProjectivePresentation> {
    let k = spec.diag.len();
    let mut g = RingMatrix::identity(s, k);
    let mut ginv = RingMatrix::identity(s, k);
    for (i, j, c) in &spec.ops {
        let (i, j) = (*i % k, *j % k);
        if i == j {
            continue;
        }
        let mut coeffs: Vec<Int> = c.iter().map(|&x| Int::from(x)).collect();
        coeffs.resize(s.rank(), Int::zero());
        let x = s.additive().reduced(coeffs);
        let mut el = RingMatrix::identity(s, k);
        el.set(i, j, x.clone());
        let mut inv = RingMatrix::identity(s, k);
        inv.set(i, j, s.neg(&x));
        g = g.mul(&el);
        ginv = inv.mul(&ginv);
    }
    let mut d = RingMatrix::zeros(s, k, k);
    for (i, &c) in spec.diag.iter().enumerate() {
        d.set(i, i, idem[c as usize % idem.len()].clone());
    }
    let e = g.mul(&d).mul(&ginv);
    let hom = match left {
        LeftMode::Same => (0..r.rank())
            .map(|b| {
                let x = phi.column(b);
                g.mul(&d).mul(&RingMatrix::scalar(s, k, &x)).mul(&ginv)
            })
            .collect(),
        LeftMode::Prime => vec![e.clone()],
    };
    Ok(ProjectivePresentation::new(r, s, e, hom)?)
}
