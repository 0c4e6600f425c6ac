//! Property suites and their reports.

use std::time::{Duration, Instant};

use anyhow::{anyhow, Result};
use endotrace_core::bimodule::Fault;
use endotrace_core::endo::{self, gamma, gamma_prime, make_ses, verschiebung, verschiebung_tuple, Carrier, Step, TwistedEndo};
use endotrace_core::lattice::smith_normal_form;
use endotrace_core::shadow::{b_map, phi, trace, trace_power, trace_sequence, transfer, varsigma, ShadowMap};
use endotrace_core::witt::{ch_integer, integral_lift};
use endotrace_core::{BimoduleMap, DualityData, FinAlgebra, Int, IntMatrix, WittVector};
use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::formats::{BimoduleJson, PresentationJson, RingJson};
use crate::generate::{case_rng, case_seed, Blueprint, Caps, Shape};

/// Run parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub cases: usize,
    pub caps: Caps,
    /// `all` or one suite name.
    pub suite: String,
    #[serde(skip)]
    pub fault: Option<Fault>,
}

impl SuiteConfig {
    pub fn new(suite: &str, seed: u64, cases: usize) -> Self {
        SuiteConfig { seed, cases, caps: Caps::default(), suite: suite.to_string(), fault: None }
    }
}

/// Outcome of one case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(String),
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail(msg())
    }
}

fn all(verdicts: impl IntoIterator<Item = Result<Verdict>>) -> Result<Verdict> {
    for v in verdicts {
        if let Verdict::Fail(m) = v? {
            return Ok(Verdict::Fail(m));
        }
    }
    Ok(Verdict::Pass)
}

struct Env {
    caps: Caps,
    fault: Option<Fault>,
}

/// A named property over generated instances.
pub struct Suite {
    pub name: &'static str,
    pub theorem: &'static str,
    min_carriers: usize,
    shape: fn(&Caps) -> Shape,
    exponents: fn(&mut ChaCha8Rng, &Caps) -> Vec<usize>,
    run: fn(&Blueprint, &Env) -> Result<Verdict>,
}

fn no_exponents(_: &mut ChaCha8Rng, _: &Caps) -> Vec<usize> {
    Vec::new()
}

pub fn suites() -> Vec<Suite> {
    vec![
        Suite {
            name: "snf",
            theorem: "Smith normal form: d = u·a·v, unimodular u and v, divisibility chain",
            min_carriers: 0,
            shape: |_| Shape { carriers: (0, 0), coeffs: 36, ..Shape::default() },
            exponents: |rng, _| vec![rng.gen_range(1..=6), rng.gen_range(1..=6)],
            run: run_snf,
        },
        Suite {
            name: "ring-laws",
            theorem: "catalog rings: associativity, unit, distributivity, JSON round trip",
            min_carriers: 0,
            shape: |_| Shape { carriers: (0, 0), ..Shape::default() },
            exponents: no_exponents,
            run: run_ring_laws,
        },
        Suite {
            name: "tensor",
            theorem: "associators and unitors are inverse isomorphisms; pentagon",
            min_carriers: 0,
            shape: |_| Shape { carriers: (0, 0), prime_left: false, sums: true, ..Shape::default() },
            exponents: no_exponents,
            run: run_tensor,
        },
        Suite {
            name: "duality",
            theorem: "triangle identities; trace independent of the duality data",
            min_carriers: 1,
            shape: |c| Shape { carriers: (1, 2), budget: 8.min(c.rank * c.carrier), ..Shape::default() },
            exponents: no_exponents,
            run: run_duality,
        },
        Suite {
            name: "gamma-coherence",
            theorem: "all bracketings of Γ′ agree",
            min_carriers: 2,
            shape: |c| Shape { carriers: (2, c.tuple.max(2)), ..Shape::default() },
            exponents: no_exponents,
            run: run_gamma_coherence,
        },
        Suite {
            name: "frobenius-iterate",
            theorem: "F^n F^m = F^{nm}",
            min_carriers: 1,
            shape: |_| Shape { carriers: (1, 1), budget: 6, ..Shape::default() },
            exponents: no_exponents,
            run: run_frobenius_iterate,
        },
        Suite {
            name: "additivity",
            theorem: "tr(f) = tr(f′) + tr(f″) on exact sequences",
            min_carriers: 2,
            shape: |_| Shape { carriers: (2, 2), sums: true, budget: 6, ..Shape::default() },
            exponents: no_exponents,
            run: run_additivity,
        },
        Suite {
            name: "trace-frobenius",
            theorem: "tr_i(F^n f) = Φ(tr_{ni}(f))",
            min_carriers: 1,
            shape: |_| Shape { carriers: (1, 1), budget: 4, ..Shape::default() },
            exponents: no_exponents,
            run: run_trace_frobenius,
        },
        Suite {
            name: "trace-verschiebung",
            theorem: "tr_•(V^n f) = B_n(tr_•(f)), M = R or N = S",
            min_carriers: 1,
            shape: |_| Shape { carriers: (1, 1), one_trivial: true, budget: 4, ..Shape::default() },
            exponents: |rng, c| vec![rng.gen_range(2..=4.min(c.bound).max(2))],
            run: run_trace_verschiebung,
        },
        Suite {
            name: "fnvn",
            theorem: "tr(F^n V(t)) = τ(tr Γ(t))",
            min_carriers: 1,
            shape: |c| Shape { carriers: (2, c.tuple.clamp(2, 4)), budget: 4, ..Shape::default() },
            exponents: no_exponents,
            run: run_fnvn,
        },
        Suite {
            name: "equivariance",
            theorem: "ς_N ∘ tr(Γ(t)) = tr(Γ(rot t)) ∘ ς_M and ς^n = id",
            min_carriers: 1,
            shape: |c| Shape { carriers: (2, c.tuple.clamp(2, 3)), sums: true, budget: 4, ..Shape::default() },
            exponents: no_exponents,
            run: run_equivariance,
        },
        Suite {
            name: "classical",
            theorem: "ghost ∘ ch = trace sequence; ch intertwines F, V, sums and tensor products",
            min_carriers: 0,
            shape: |_| Shape { carriers: (0, 0), integers: true, coeffs: 60, ..Shape::default() },
            exponents: |rng, _| vec![rng.gen_range(1..=5), rng.gen_range(2..=4), rng.gen_range(1..=2)],
            run: run_classical,
        },
        Suite {
            name: "witt",
            theorem: "Witt vectors: ghost is a ring map; F and V on ghosts; lift independence",
            min_carriers: 0,
            shape: |_| Shape { carriers: (0, 0), commutative: true, ..Shape::default() },
            exponents: |rng, c| vec![rng.gen_range(1..=4.min(c.bound))],
            run: run_witt,
        },
    ]
}

/// The suite names that make up `all`.
pub fn suite_names() -> Vec<&'static str> {
    suites().iter().map(|s| s.name).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub case: usize,
    pub case_seed: u64,
    pub message: String,
    pub blueprint: Blueprint,
    pub original: Blueprint,
    pub shrink_steps: usize,
    /// The built rings, twists and carriers of the shrunk blueprint.
    pub objects: Option<Value>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PropertyReport {
    pub name: String,
    pub theorem: String,
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
    pub counterexample: Option<Counterexample>,
    /// Wall-clock time; kept out of the JSON so reports are reproducible.
    #[serde(skip)]
    pub wall: Duration,
}

impl PropertyReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub config: SuiteConfig,
    pub fault: Option<String>,
    pub properties: Vec<PropertyReport>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.properties.iter().all(PropertyReport::ok)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in &self.properties {
            out.push_str(&format!(
                "{} {:<20} {:>4}/{:<4} {:>8.2}s  {}\n",
                if p.ok() { "PASS" } else { "FAIL" },
                p.name,
                p.passed,
                p.cases,
                p.wall.as_secs_f64(),
                p.theorem
            ));
            if let Some(c) = &p.counterexample {
                out.push_str(&format!(
                    "     case {} (seed {:#018x}), shrunk in {} steps: {}\n     {}\n",
                    c.case,
                    c.case_seed,
                    c.shrink_steps,
                    c.message,
                    serde_json::to_string(&c.blueprint).unwrap_or_default()
                ));
            }
        }
        out
    }
}

fn blueprint_for(suite: &Suite, config: &SuiteConfig, case: usize) -> (u64, Blueprint) {
    let seed = case_seed(config.seed, suite.name, case);
    let mut rng = case_rng(config.seed, suite.name, case);
    let mut bp = Blueprint::draw(&mut rng, &(suite.shape)(&config.caps), &config.caps);
    bp.exponents = (suite.exponents)(&mut rng, &config.caps);
    (seed, bp)
}

fn evaluate(suite: &Suite, bp: &Blueprint, env: &Env) -> Verdict {
    match (suite.run)(bp, env) {
        Ok(v) => v,
        Err(e) => Verdict::Fail(format!("error: {e:#}")),
    }
}

/// Greedy shrinking: take the first simplification that still fails.
fn shrink(suite: &Suite, bp: &Blueprint, env: &Env, message: String) -> (Blueprint, String, usize) {
    let (mut cur, mut msg, mut steps) = (bp.clone(), message, 0);
    let mut budget = 400;
    'outer: while budget > 0 {
        for cand in cur.shrinks(suite.min_carriers) {
            budget -= 1;
            if let Verdict::Fail(m) = evaluate(suite, &cand, env) {
                cur = cand;
                msg = m;
                steps += 1;
                continue 'outer;
            }
            if budget == 0 {
                break;
            }
        }
        break;
    }
    (cur, msg, steps)
}

fn objects(bp: &Blueprint) -> Option<Value> {
    let inst = bp.build(None).ok()?;
    let pres: Vec<PresentationJson> = inst.presentations.iter().map(PresentationJson::from_presentation).collect();
    Some(serde_json::json!({
        "ring": RingJson::from_ring(inst.ctx.right_ring()),
        "m": BimoduleJson::from_bimodule(inst.ctx.m()),
        "n": BimoduleJson::from_bimodule(inst.ctx.n()),
        "carriers": pres,
    }))
}

pub fn run_property(suite: &Suite, config: &SuiteConfig) -> PropertyReport {
    let start = Instant::now();
    let env = Env { caps: config.caps, fault: config.fault };
    let verdicts: Vec<(u64, Blueprint, Verdict)> = (0..config.cases)
        .into_par_iter()
        .map(|case| {
            let (seed, bp) = blueprint_for(suite, config, case);
            let v = evaluate(suite, &bp, &env);
            (seed, bp, v)
        })
        .collect();
    let failed = verdicts.iter().filter(|(_, _, v)| *v != Verdict::Pass).count();
    let counterexample = verdicts.iter().enumerate().find_map(|(case, (seed, bp, v))| match v {
        Verdict::Pass => None,
        Verdict::Fail(m) => {
            let (small, message, shrink_steps) = shrink(suite, bp, &env, m.clone());
            Some(Counterexample {
                case,
                case_seed: *seed,
                message,
                objects: objects(&small),
                blueprint: small,
                original: bp.clone(),
                shrink_steps,
            })
        }
    });
    PropertyReport {
        name: suite.name.to_string(),
        theorem: suite.theorem.to_string(),
        cases: config.cases,
        passed: config.cases - failed,
        failed,
        counterexample,
        wall: start.elapsed(),
    }
}

/// Runs the selected suites concurrently; the report lists them in a fixed order.
pub fn run_suite(config: &SuiteConfig) -> Result<Report> {
    let all_suites = suites();
    let selected: Vec<&Suite> = if config.suite == "all" {
        all_suites.iter().collect()
    } else {
        let names: Vec<&str> = config.suite.split(',').map(str::trim).collect();
        let mut picked = Vec::new();
        for n in names {
            picked.push(
                all_suites
                    .iter()
                    .find(|s| s.name == n)
                    .ok_or_else(|| anyhow!("unknown suite '{n}' (known: all, {})", suite_names().join(", ")))?,
            );
        }
        picked
    };
    let properties = selected.par_iter().map(|s| run_property(s, config)).collect();
    Ok(Report { config: config.clone(), fault: config.fault.map(fault_name), properties })
}

// Properties.

fn matrix_from(coeffs: &[i64], rows: usize, cols: usize) -> IntMatrix {
    IntMatrix::from_fn(rows, cols, |i, j| Int::from(coeffs.get((i * cols + j) % coeffs.len().max(1)).copied().unwrap_or(0)))
}

fn run_snf(bp: &Blueprint, _: &Env) -> Result<Verdict> {
    let (r, c) = (bp.exponents[0], bp.exponents[1]);
    let a = matrix_from(&bp.coeffs, r, c);
    let s = smith_normal_form(&a);
    let d = s.diagonal();
    let chain = d.windows(2).all(|w| w[1].is_zero() || (&w[1] % &w[0]).is_zero());
    let diagonal = (0..r).all(|i| (0..c).all(|j| i == j || s.d[(i, j)].is_zero()));
    let nonneg = d.iter().all(|x| !x.is_negative());
    let unimodular = s.u.mul(&s.u_inv) == IntMatrix::identity(r) && s.v.determinant().abs() == Int::from(1);
    let rank = d.iter().filter(|x| !x.is_zero()).count() == s.rank;
    Ok(check(s.u.mul(&a).mul(&s.v) == s.d && chain && diagonal && nonneg && unimodular && rank, || {
        format!("Smith form of {:?} is inconsistent: diagonal {:?}", a.to_rows(), d)
    }))
}

fn run_ring_laws(bp: &Blueprint, _: &Env) -> Result<Verdict> {
    let a = bp.ring.build()?;
    let mut cs = bp.coeffs.iter().copied().cycle();
    let mut elem = || a.additive().reduced((0..a.rank()).map(|_| Int::from(cs.next().unwrap_or(0))).collect());
    let (x, y, z) = (elem(), elem(), elem());
    let assoc = a.mul(&a.mul(&x, &y), &z) == a.mul(&x, &a.mul(&y, &z));
    let unit = a.mul(a.one(), &x) == x && a.mul(&x, a.one()) == x;
    let dist = a.mul(&x, &a.add(&y, &z)) == a.add(&a.mul(&x, &y), &a.mul(&x, &z));
    let json = serde_json::to_string(&RingJson::from_ring(&a))?;
    let back: RingJson = serde_json::from_str(&json)?;
    let b = back.to_ring()?;
    let round = b == a && serde_json::to_string(&RingJson::from_ring(&b))? == json;
    Ok(check(assoc && unit && dist && round, || {
        format!("{}: assoc {assoc}, unit {unit}, distributive {dist}, round trip {round}", a.name())
    }))
}

fn run_tensor(bp: &Blueprint, env: &Env) -> Result<Verdict> {
    let inst = bp.build(env.fault)?;
    let cache = inst.ctx.cache();
    let m = inst.ctx.m().clone();
    let u = cache.unit(inst.ctx.left_ring());
    let mut verdicts = Vec::new();
    for (x, y, z) in [(&m, &u, &m), (&u, &m, &m), (&m, &m, &u)] {
        let a = cache.associator(x, y, z)?;
        let b = cache.associator_inv(x, y, z)?;
        verdicts.push(Ok(check(b.after(&a)? == a.source().identity() && a.check().is_ok(), || {
            "associator is not invertible".into()
        })));
    }
    let l = cache.left_unitor(&m)?;
    let li = cache.left_unitor_inv(&m)?;
    let r = cache.right_unitor(&m)?;
    let ri = cache.right_unitor_inv(&m)?;
    verdicts.push(Ok(check(l.after(&li)? == m.identity() && r.after(&ri)? == m.identity(), || "unitors are not inverse".into())));
    let (a, b, c, d) = (&m, &u, &m, &m);
    let cd = cache.product(c, d)?;
    let ab = cache.product(a, b)?;
    let bc = cache.product(b, c)?;
    let top = cache.associator(a, b, &cd)?.after(&cache.associator(&ab, c, d)?)?;
    let bottom = cache
        .tensor_maps(&a.identity(), &cache.associator(b, c, d)?)?
        .after(&cache.associator(a, &bc, d)?)?
        .after(&cache.tensor_maps(&cache.associator(a, b, c)?, &d.identity())?)?;
    verdicts.push(Ok(check(top.matrix() == bottom.matrix(), || "pentagon fails".into())));
    all(verdicts)
}

/// Above this rank a direct sum's triangle identities are checked on basis
/// elements instead of through materialized triple products.
const SUM_TRIANGLE_RANK: usize = 8;

fn run_duality(bp: &Blueprint, env: &Env) -> Result<Verdict> {
    let mut inst = bp.build(env.fault)?;
    let cache = inst.ctx.shared_cache();
    let mut verdicts = Vec::new();
    for j in 0..inst.presentations.len() {
        let c = inst.carrier(j)?;
        verdicts.push(Ok(check(c.duality().check_triangles(&cache).is_ok(), || format!("carrier {j}: triangle identities fail"))));
        let Some(g) = DualityData::generic(c.module(), &cache) else {
            return Ok(Verdict::Fail(format!("carrier {j}: no coevaluation found for a projective module")));
        };
        verdicts.push(Ok(check(g.check_triangles(&cache).is_ok(), || format!("carrier {j}: solved duality fails the triangles"))));
        let f = inst.endo(j, 1)?;
        let other = TwistedEndo::new(&inst.ctx, 1, Carrier::from_duality(g), f.map().clone())?;
        let (t1, t2) = (trace(&f)?, trace(&other)?);
        verdicts.push(Ok(check(t1 == t2, || format!("carrier {j}: traces differ between duality data: {:?} vs {:?}", t1.matrix(), t2.matrix()))));
    }
    if inst.presentations.len() == 2 {
        let parts = inst.carriers()?;
        let blockwise = Carrier::direct_sum(&cache, &parts)?;
        let bd = blockwise.duality();
        let triangles = if bd.module().rank() <= SUM_TRIANGLE_RANK { bd.check_triangles(&cache) } else { bd.check_elementwise() };
        verdicts.push(Ok(check(triangles.is_ok(), || "blockwise duality fails the triangles".into())));
        let composite = inst.presentations[0].direct_sum(&inst.presentations[1])?;
        let pc = Carrier::from_presentation(&composite)?;
        verdicts.push(Ok(check(pc.module().rank() == blockwise.module().rank(), || "sum presentations disagree in rank".into())));
        let f = {
            let src = inst.ctx.source_of(1, blockwise.module())?;
            let tgt = inst.ctx.target_of(1, blockwise.module())?;
            inst.map(&src, &tgt)?
        };
        let via_sum = TwistedEndo::new(&inst.ctx, 1, blockwise.clone(), f.clone())?;
        let generic = DualityData::generic(blockwise.module(), &cache).ok_or_else(|| anyhow!("sum has no coevaluation"))?;
        let via_generic = TwistedEndo::new(&inst.ctx, 1, Carrier::from_duality(generic), f)?;
        verdicts.push(Ok(check(trace(&via_sum)? == trace(&via_generic)?, || "blockwise and solved duality give different traces".into())));
    }
    all(verdicts)
}

/// Every full bracketing of `steps[lo..hi]`.
fn bracketings(ctx: &endo::EndoContext, steps: &[Step], lo: usize, hi: usize) -> Result<Vec<Step>> {
    if hi - lo == 1 {
        return Ok(vec![steps[lo].clone()]);
    }
    let mut out = Vec::new();
    for mid in lo + 1..hi {
        for a in bracketings(ctx, steps, lo, mid)? {
            for b in bracketings(ctx, steps, mid, hi)? {
                out.push(gamma_prime(ctx, &a, &b)?);
            }
        }
    }
    Ok(out)
}

fn run_gamma_coherence(bp: &Blueprint, env: &Env) -> Result<Verdict> {
    let mut inst = bp.build(env.fault)?;
    let t = inst.tuple()?;
    let steps: Vec<Step> = (0..t.len()).map(|j| t.step(j)).collect();
    let all_b = bracketings(&inst.ctx, &steps, 0, steps.len())?;
    let first = &all_b[0];
    let g = gamma(&t)?;
    Ok(check(all_b.iter().all(|s| s.map.matrix() == first.map.matrix()) && g.matrix() == first.map.matrix(), || {
        format!("{} bracketings of a length-{} tuple disagree", all_b.len(), t.len())
    }))
}

fn frobenius_table(f: &TwistedEndo, top: usize) -> Result<Vec<TwistedEndo>> {
    (1..=top).map(|k| Ok(f.frobenius(k)?)).collect()
}

fn run_frobenius_iterate(bp: &Blueprint, env: &Env) -> Result<Verdict> {
    let mut inst = bp.build(env.fault)?;
    let f = inst.endo(0, 1)?;
    let top = env.caps.frobenius;
    let table = frobenius_table(&f, top)?;
    let mut verdicts = Vec::new();
    for m in 1..=top {
        for n in 1..=top / m {
            let lhs = table[m - 1].regrade(m)?.frobenius(n)?.degrade(&inst.ctx, m)?;
            let rhs = &table[n * m - 1];
            verdicts.push(Ok(check(lhs.matrix() == rhs.matrix(), || format!("F^{n} F^{m} ≠ F^{}", n * m))));
        }
    }
    all(verdicts)
}

fn run_additivity(bp: &Blueprint, env: &Env) -> Result<Verdict> {
    let mut inst = bp.build(env.fault)?;
    let (lower, upper) = (inst.presentations[0].clone(), inst.presentations[1].clone());
    let ses = make_ses(&inst.ctx, &lower, &upper, &mut || inst.coeffs.next())?;
    if !ses.is_exact()? {
        return Ok(Verdict::Fail("generated sequence is not exact".into()));
    }
    let total = trace(&ses.total)?;
    let parts = trace(&ses.sub)?.add(&trace(&ses.quotient)?)?;
    Ok(check(total == parts, || format!("tr(f) = {:?} but tr(f′) + tr(f″) = {:?}", total.matrix(), parts.matrix())))
}

fn run_trace_frobenius(bp: &Blueprint, env: &Env) -> Result<Verdict> {
    let mut inst = bp.build(env.fault)?;
    let f = inst.endo(0, 1)?;
    let top = env.caps.frobenius;
    let table = frobenius_table(&f, top)?;
    let mut verdicts = Vec::new();
    for n in 1..=top {
        for i in 1..=top / n {
            let lhs = trace_power(&table[n - 1], i)?;
            let rhs = phi(&inst.ctx, n, i, &trace(&table[n * i - 1])?)?;
            verdicts.push(Ok(check(lhs == rhs, || format!("tr_{i}(F^{n} f) ≠ Φ(tr_{}(f))", n * i))));
        }
    }
    all(verdicts)
}

fn run_trace_verschiebung(bp: &Blueprint, env: &Env) -> Result<Verdict> {
    let mut inst = bp.build(env.fault)?;
    let n = bp.exponents[0];
    let bound = env.caps.bound;
    if bound < n {
        return Ok(Verdict::Pass);
    }
    let f = inst.endo(0, n)?;
    let v = verschiebung(&f)?;
    let lhs = trace_sequence(&v, bound)?;
    let rhs = b_map(&inst.ctx, n, &trace_sequence(&f, bound / n)?, bound)?;
    let zeros = (1..=bound).filter(|m| m % n != 0).all(|m| lhs[m - 1].is_zero());
    let first = lhs.iter().zip(&rhs).position(|(a, b)| a != b);
    Ok(check(first.is_none() && zeros, || match first {
        Some(m) => format!("tr_{}(V^{n} f) ≠ B_{n} component", m + 1),
        None => format!("V^{n}: nonzero trace at an index not divisible by {n}"),
    }))
}

fn run_fnvn(bp: &Blueprint, env: &Env) -> Result<Verdict> {
    let mut inst = bp.build(env.fault)?;
    let t = inst.tuple()?;
    let n = t.len();
    let v = verschiebung_tuple(&t)?;
    let fv = v.frobenius(n)?;
    let normal = endo::fv_formula(&t, n)?;
    let lhs = trace(&fv)?;
    let rhs = transfer(&inst.ctx, &trace(&gamma(&t)?)?, n, 1)?;
    Ok(check(lhs == rhs && normal.matrix() == fv.matrix(), || {
        if lhs != rhs {
            format!("tr(F^{n} V(t)) = {:?} but τ(tr Γ(t)) = {:?}", lhs.matrix(), rhs.matrix())
        } else {
            format!("F^{n} V(t) differs from its normal form")
        }
    }))
}

fn run_equivariance(bp: &Blueprint, env: &Env) -> Result<Verdict> {
    let mut inst = bp.build(env.fault)?;
    let t = inst.tuple()?;
    let n = t.len();
    let cache = inst.ctx.cache();
    let sm = varsigma(cache, inst.ctx.m(), n)?;
    let sn = varsigma(cache, inst.ctx.n(), n)?;
    let order = sm.pow(n)? == ShadowMap::identity(sm.source()) && sn.pow(n)? == ShadowMap::identity(sn.source());
    let lhs = sn.after(&trace(&gamma(&t)?)?)?;
    let rhs = trace(&gamma(&t.rotate())?)?.after(&sm)?;
    Ok(check(order && lhs == rhs, || {
        if order {
            format!("trace of a length-{n} tuple is not equivariant")
        } else {
            format!("ς has order other than {n}")
        }
    }))
}

fn rotated(v: &[i64], by: usize) -> Vec<i64> {
    let mut v = v.to_vec();
    if !v.is_empty() {
        let by = by % v.len();
        v.rotate_left(by);
    }
    v
}

fn int_endo(ctx: &endo::EndoContext, a: &IntMatrix, n: usize) -> Result<TwistedEndo> {
    let c = Carrier::from_presentation(&endotrace_core::ProjectivePresentation::free(ctx.right_ring(), a.rows()))?;
    let m = BimoduleMap::new(c.module().clone(), c.module().clone(), a.clone())?;
    Ok(TwistedEndo::untwisted(ctx, n, c, &m)?)
}

fn witt_eq(a: &WittVector, b: &WittVector) -> bool {
    a == b && a.ghost() == b.ghost()
}

fn run_classical(bp: &Blueprint, env: &Env) -> Result<Verdict> {
    let inst = bp.build(env.fault)?;
    let ctx = &inst.ctx;
    let (k, n, k2) = (bp.exponents[0], bp.exponents[1], bp.exponents[2]);
    let bound = env.caps.bound;
    let coeffs: Vec<i64> = bp.coeffs.iter().map(|c| c.clamp(&-2, &2)).copied().collect();
    let a = matrix_from(&coeffs, k, k);
    let mut verdicts = Vec::new();

    // ghost ∘ ch = trace sequence.
    let cha = ch_integer(&a, bound)?;
    let f = int_endo(ctx, &a, 1)?;
    let seq = trace_sequence(&f, bound)?;
    let ghost = cha.ghost();
    let agree = seq.iter().zip(ghost.components()).all(|(t, g)| t.matrix().data() == &g[..]);
    verdicts.push(Ok(check(agree, || format!("ghost(ch f) ≠ trace sequence for {:?}", a.to_rows()))));

    // ch(F^n f) = F_n(ch f).
    let fnf = f.frobenius(n)?.regrade(n)?.underlying()?;
    let lhs = ch_integer(fnf.matrix(), bound / n)?;
    let rhs = cha.frobenius(n)?;
    verdicts.push(Ok(check(witt_eq(&lhs, &rhs), || format!("ch(F^{n} f) ≠ F_{n}(ch f)"))));

    // ch(V^n g) = V_n(ch g) for g of exponent n.
    let gm = matrix_from(&rotated(&coeffs, 7), k, k);
    let g = int_endo(ctx, &gm, n)?;
    let vg = verschiebung(&g)?.underlying()?.matrix().clone();
    let lhs = ch_integer(&vg, bound)?;
    let rhs = ch_integer(&gm, bound)?.verschiebung(n)?;
    verdicts.push(Ok(check(witt_eq(&lhs, &rhs), || format!("ch(V^{n} g) ≠ V_{n}(ch g)"))));

    // Additivity on an exact sequence over Z.
    let z = FinAlgebra::integers();
    let lower = endotrace_core::ProjectivePresentation::free(&z, k);
    let upper = endotrace_core::ProjectivePresentation::free(&z, k2);
    let mut cs = coeffs.iter().copied().cycle();
    let ses = make_ses(ctx, &lower, &upper, &mut || cs.next().unwrap_or(0))?;
    let chm = |e: &TwistedEndo| -> Result<WittVector> { Ok(ch_integer(e.underlying()?.matrix(), bound)?) };
    let total = chm(&ses.total)?;
    let parts = chm(&ses.sub)?.add(&chm(&ses.quotient)?)?;
    verdicts.push(Ok(check(total == parts, || "ch is not additive on an exact sequence".into())));

    // Multiplicativity on tensor products.
    let small = matrix_from(&rotated(&coeffs, 3), k2, k2);
    let lhs = ch_integer(&IntMatrix::kron(&a, &small), bound)?;
    let rhs = cha.mul(&ch_integer(&small, bound)?)?;
    verdicts.push(Ok(check(witt_eq(&lhs, &rhs), || "ch(f ⊗ g) ≠ ch(f) ⋆ ch(g)".into())));
    all(verdicts)
}

fn run_witt(bp: &Blueprint, env: &Env) -> Result<Verdict> {
    let a = bp.ring.build()?;
    let bound = env.caps.bound;
    let n = bp.exponents[0];
    let mut cs = bp.coeffs.iter().copied().cycle();
    let mut vector = || -> Result<WittVector> {
        let coeffs = (0..bound).map(|_| a.additive().reduced((0..a.rank()).map(|_| Int::from(cs.next().unwrap_or(0))).collect())).collect();
        Ok(WittVector::new(&a, coeffs)?)
    };
    let (u, v, w) = (vector()?, vector()?, vector()?);
    let torsion_free = a.additive().factors().iter().all(Zero::is_zero);
    let mut verdicts = vec![Ok(check(u.add(&v)?.ghost() == u.ghost().add(&v.ghost())?, || "ghost is not additive".into()))];
    let prod = u.mul(&v)?;
    let ghost_prod: Vec<Vec<Int>> = u.ghost().components().iter().zip(v.ghost().components()).map(|(x, y)| a.mul(x, y)).collect();
    verdicts.push(Ok(check(prod.ghost().components() == &ghost_prod[..], || "ghost is not multiplicative".into())));
    let dist = u.mul(&v.add(&w)?)? == prod.add(&u.mul(&w)?)?;
    verdicts.push(Ok(check(dist && prod == v.mul(&u)?, || "Witt multiplication is not commutative and distributive".into())));
    let fg = u.frobenius(n)?.ghost();
    let g = u.ghost();
    let fok = fg.components().iter().enumerate().all(|(m, x)| *x == g.components()[(m + 1) * n - 1]);
    let vg = u.verschiebung(n)?.ghost();
    let vok = vg.components().iter().enumerate().all(|(m, x)| {
        let expect = if (m + 1) % n == 0 { a.additive().scale(&Int::from(n), &g.components()[(m + 1) / n - 1]) } else { a.zero() };
        *x == expect
    });
    verdicts.push(Ok(check(fok && vok, || format!("F_{n} or V_{n} breaks the ghost relations"))));
    if !torsion_free {
        // Lift coordinates to the integral lift with different representatives.
        let lift = integral_lift(&a)?;
        let shifted = |x: &WittVector, t: i64| -> Result<WittVector> {
            let coeffs = x.coeffs().iter().map(|c| c.iter().zip(a.additive().factors()).map(|(y, d)| y + d * t).collect()).collect();
            Ok(WittVector::new(&lift, coeffs)?)
        };
        let over_z = shifted(&u, 1)?.mul(&shifted(&v, -2)?)?;
        let reduced = WittVector::new(&a, over_z.coeffs().to_vec())?;
        verdicts.push(Ok(check(reduced == prod, || "product depends on the lift".into())));
    }
    all(verdicts)
}

/// The command-line spelling of a fault.
pub fn fault_name(f: Fault) -> String {
    match f {
        Fault::SkipRotationMerge => "skip-rotation-merge".into(),
    }
}
