use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use endotrace::formats::{read_json, write_json, MatrixJson, Object, ObjectJson, ShadowMapJson, WittJson};
use endotrace::generate::{case_rng, Blueprint, Caps, Shape};
use endotrace::suites::{run_suite, SuiteConfig};
use endotrace_core::bimodule::Fault;
use endotrace_core::endo::{gamma, make_ses, verschiebung, verschiebung_tuple};
use endotrace_core::shadow::{trace, trace_sequence};
use endotrace_core::witt::ch;
use endotrace_core::{FinAbGroup, IntMatrix, ShadowMap, WittVector};

#[derive(Parser)]
#[command(name = "endotrace", version, about = "Exact checks for twisted endomorphisms, traces and Witt vectors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run property suites on seeded random instances.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        /// Size caps, e.g. `rank=6,k=3,len=4,bound=8,frob=8`.
        #[arg(long)]
        caps: Option<String>,
        #[arg(long)]
        json: Option<PathBuf>,
        /// Corrupt a structural map on purpose (mutation testing).
        #[arg(long, value_enum)]
        inject_fault: Option<FaultArg>,
    },
    /// Trace of an endomorphism (or of Γ of a tuple), optionally the trace sequence.
    Trace {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        bound: Option<usize>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// F^n of an endomorphism of exponent 1.
    Frobenius {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(short = 'n')]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// V^n of an endomorphism of exponent n, or V of an n-tuple.
    Verschiebung {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(short = 'n')]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Ghost components of a Witt vector or of ch of a matrix.
    Ghost {
        #[arg(long, conflicts_with = "matrix", required_unless_present = "matrix")]
        witt: Option<PathBuf>,
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long)]
        bound: Option<usize>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// ch(f) = det(1 − t·f)^{-1} truncated at the bound.
    Ch {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        bound: usize,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Witt vector arithmetic.
    Witt {
        #[arg(value_enum)]
        op: WittOp,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: Option<PathBuf>,
        #[arg(short = 'n')]
        n: Option<usize>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Write a random instance of the given shape.
    Generate {
        #[arg(long, value_enum)]
        shape: ShapeArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Tuple length for `twisted-tuple`.
        #[arg(short = 'n', default_value_t = 3)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    SkipRotationMerge,
}

#[derive(Clone, Copy, ValueEnum)]
enum WittOp {
    Add,
    Mul,
    Frob,
    Versch,
}

#[derive(Clone, Copy, ValueEnum)]
enum ShapeArg {
    CommutativeEndo,
    TwistedEndo,
    TwistedTuple,
    ExactSequence,
}

/// Errors that mean "bad input" (exit 2) rather than "property violated" (exit 1).
struct Violation(String);

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(Violation(msg))) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn group_name(g: &FinAbGroup) -> String {
    if g.rank() == 0 {
        return "0".into();
    }
    g.factors()
        .iter()
        .map(|d| if d == &0.into() { "Z".to_string() } else { format!("Z/{d}") })
        .collect::<Vec<_>>()
        .join(" ⊕ ")
}

fn matrix_text(m: &IntMatrix) -> String {
    let rows: Vec<String> = m
        .to_rows()
        .iter()
        .map(|r| format!("[{}]", r.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}

fn shadow_text(label: &str, f: &ShadowMap) -> String {
    format!(
        "{label}: {} → {}  {}\n",
        group_name(f.source().group()),
        group_name(f.target().group()),
        matrix_text(f.matrix())
    )
}

fn coords_text(v: &[Vec<endotrace_core::Int>]) -> String {
    v.iter()
        .map(|c| match c.as_slice() {
            [x] => x.to_string(),
            _ => format!("({})", c.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")),
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn load(path: &Path) -> Result<Object> {
    read_json::<ObjectJson>(path)?.load().with_context(|| format!("building {}", path.display()))
}

fn run(cmd: Command) -> Result<Option<Violation>> {
    match cmd {
        Command::Verify { suite, seed, cases, caps, json, inject_fault } => {
            let mut config = SuiteConfig::new(&suite, seed, cases);
            if let Some(c) = caps {
                config.caps = Caps::parse(&c)?;
            }
            config.fault = inject_fault.map(|FaultArg::SkipRotationMerge| Fault::SkipRotationMerge);
            let report = run_suite(&config)?;
            print!("{}", report.to_text());
            if let Some(p) = json {
                std::fs::write(&p, report.to_json()).with_context(|| format!("writing {}", p.display()))?;
            }
            if report.ok() {
                Ok(None)
            } else {
                let failed: Vec<&str> = report.properties.iter().filter(|p| !p.ok()).map(|p| p.name.as_str()).collect();
                Ok(Some(Violation(format!("property violated: {}", failed.join(", ")))))
            }
        }
        Command::Trace { input, bound, json } => {
            let f = match load(&input)? {
                Object::Endo(f) => f,
                Object::Tuple(t) => gamma(&t)?,
            };
            let mut out = shadow_text("tr", &trace(&f)?);
            let mut maps = vec![ShadowMapJson::from_map(&trace(&f)?)];
            if let Some(b) = bound {
                maps.clear();
                for (j, t) in trace_sequence(&f, b)?.iter().enumerate() {
                    out.push_str(&shadow_text(&format!("tr_{}", j + 1), t));
                    maps.push(ShadowMapJson::from_map(t));
                }
            }
            print!("{out}");
            if let Some(p) = json {
                write_json(&p, &maps)?;
            }
            Ok(None)
        }
        Command::Frobenius { input, n, out } => {
            let Object::Endo(f) = load(&input)? else {
                bail!("frobenius takes a single endomorphism");
            };
            if f.exponent() != 1 {
                bail!("frobenius takes an endomorphism of exponent 1, found {}", f.exponent());
            }
            let g = f.frobenius(n)?;
            println!("F^{n}: exponent {}, {}×{} matrix", g.exponent(), g.matrix().rows(), g.matrix().cols());
            write_json(&out, &ObjectJson::from_endo(&g))?;
            Ok(None)
        }
        Command::Verschiebung { input, n, out } => {
            let g = match load(&input)? {
                Object::Endo(f) => {
                    if f.exponent() != n {
                        bail!("V^{n} takes an endomorphism of exponent {n}, found {}", f.exponent());
                    }
                    verschiebung(&f)?
                }
                Object::Tuple(t) => {
                    if t.len() != n {
                        bail!("V of a tuple of length {} requested with n = {n}", t.len());
                    }
                    verschiebung_tuple(&t)?
                }
            };
            println!("V^{n}: carrier rank {}, {}×{} matrix", g.carrier().module().rank(), g.matrix().rows(), g.matrix().cols());
            write_json(&out, &ObjectJson::from_endo(&g))?;
            Ok(None)
        }
        Command::Ghost { witt, matrix, bound, json } => {
            let w = match (witt, matrix) {
                (Some(p), _) => {
                    let w = read_json::<WittJson>(&p)?.to_witt()?;
                    match bound {
                        Some(b) if b < w.bound() => WittVector::new(w.base(), w.coeffs()[..b].to_vec())?,
                        Some(b) if b > w.bound() => bail!("bound {b} exceeds the vector's truncation {}", w.bound()),
                        _ => w,
                    }
                }
                (None, Some(p)) => {
                    let b = bound.context("--matrix needs --bound")?;
                    ch(&read_json::<MatrixJson>(&p)?.to_matrix()?, b)?
                }
                (None, None) => bail!("give --witt or --matrix"),
            };
            let g = w.ghost();
            println!("ghost: {}", coords_text(g.components()));
            if let Some(p) = json {
                write_json(&p, &serde_json::json!({ "ghost": g.components().iter().map(|c| c.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>() }))?;
            }
            Ok(None)
        }
        Command::Ch { matrix, bound, json } => {
            let w = ch(&read_json::<MatrixJson>(&matrix)?.to_matrix()?, bound)?;
            println!("ch: 1 + {}", series_text(&w));
            println!("ghost: {}", coords_text(w.ghost().components()));
            if let Some(p) = json {
                write_json(&p, &WittJson::from_witt(&w))?;
            }
            Ok(None)
        }
        Command::Witt { op, a, b, n, json } => {
            let u = read_json::<WittJson>(&a)?.to_witt()?;
            let other = || -> Result<WittVector> {
                let p = b.as_ref().context("this operation needs --b")?;
                read_json::<WittJson>(p)?.to_witt()
            };
            let k = || n.context("this operation needs -n");
            let w = match op {
                WittOp::Add => u.add(&other()?)?,
                WittOp::Mul => u.mul(&other()?)?,
                WittOp::Frob => u.frobenius(k()?)?,
                WittOp::Versch => u.verschiebung(k()?)?,
            };
            println!("coeffs: {}", coords_text(w.coeffs()));
            println!("ghost: {}", coords_text(w.ghost().components()));
            if let Some(p) = json {
                write_json(&p, &WittJson::from_witt(&w))?;
            }
            Ok(None)
        }
        Command::Generate { shape, seed, n, out } => {
            let name = format!("generate-{}", shape as u8);
            let mut rng = case_rng(seed, &name, 0);
            let caps = Caps::default();
            let s = match shape {
                ShapeArg::CommutativeEndo => Shape { commutative: true, prime_left: false, ..Shape::default() },
                ShapeArg::TwistedEndo => Shape::default(),
                ShapeArg::TwistedTuple => Shape { carriers: (n.max(1), n.max(1)), budget: 4, ..Shape::default() },
                ShapeArg::ExactSequence => Shape { carriers: (2, 2), budget: 6, ..Shape::default() },
            };
            let bp = Blueprint::draw(&mut rng, &s, &caps);
            let mut inst = bp.build(None)?;
            let (obj, summary) = match shape {
                ShapeArg::TwistedTuple => {
                    let t = inst.tuple()?;
                    (ObjectJson::from_tuple(&t), format!("tuple of length {}", t.len()))
                }
                ShapeArg::ExactSequence => {
                    let (lo, hi) = (inst.presentations[0].clone(), inst.presentations[1].clone());
                    let ses = make_ses(&inst.ctx, &lo, &hi, &mut || inst.coeffs.next())?;
                    if !ses.is_exact()? {
                        bail!("generated sequence is not exact");
                    }
                    (ObjectJson::from_endo(&ses.total), "total endomorphism of an exact sequence".to_string())
                }
                _ => {
                    let f = inst.endo(0, 1)?;
                    (ObjectJson::from_endo(&f), format!("endomorphism on a carrier of rank {}", f.carrier().module().rank()))
                }
            };
            println!("{summary} over {}", inst.ctx.right_ring().name());
            write_json(&out, &obj)?;
            Ok(None)
        }
    }
}

fn series_text(w: &WittVector) -> String {
    let mut s = String::new();
    for (k, c) in w.coeffs().iter().enumerate() {
        if k > 0 {
            s.push_str(" + ");
        }
        let coef = coords_text(std::slice::from_ref(c));
        let _ = write!(s, "{coef}·t^{}", k + 1);
    }
    s
}
