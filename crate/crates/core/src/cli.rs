//! Command-line front end: spec parsing, dispatch, deterministic reports.
//! Exit codes: 0 success, 1 property failure, 2 usage or parse error,
//! 3 enumeration bound exceeded.

use crate::derham::{trace_form, verify_ntr, BtaTerm, Diff1};
use crate::exec::ExecMode;
use crate::kato::KatoBounds;
use crate::mackey::{
    as_vanishing_certificate, perfect_vanishing_certificate, steinberg_certificate,
    verify_certificate, Certificate, Universe,
};
use crate::parse;
use crate::report::{Format, Report};
use crate::truncation::TruncationSet;
use crate::verify::run_suite;
use crate::witt::WittVector;
use crate::{Error, Result};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use std::collections::BTreeMap;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "wittsym", version, about = "Exact Witt vector, symbol and differential-form calculator", max_term_width = 100)]
struct Cli {
    /// Output format: json or text
    #[arg(long, global = true, default_value = "json")]
    format: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct BoundArgs {
    /// Enumeration cap for carriers (overrides WITTSYM_BOUND_ELEMS)
    #[arg(long)]
    bound_elems: Option<usize>,
    /// Enumeration cap for unit groups (overrides WITTSYM_BOUND_UNITS)
    #[arg(long)]
    bound_units: Option<u128>,
}

impl BoundArgs {
    fn resolve(&self) -> KatoBounds {
        fn env<T: std::str::FromStr>(name: &str) -> Option<T> {
            std::env::var(name).ok().and_then(|v| v.parse().ok())
        }
        KatoBounds {
            elems: self
                .bound_elems
                .or_else(|| env("WITTSYM_BOUND_ELEMS"))
                .unwrap_or(4096),
            units: self
                .bound_units
                .or_else(|| env("WITTSYM_BOUND_UNITS"))
                .unwrap_or(4096),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Witt vector arithmetic over a truncation set
    Witt {
        #[command(subcommand)]
        op: WittOp,
    },
    /// Artin–Schreier–Witt cokernel invariants of W_r(k)/℘
    Asw {
        /// Field spec: GF(p), GF(p^d) or GF(p^d)/GF(p^e)
        #[arg(long)]
        field: String,
        #[arg(long)]
        r: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Kato presentations of H^n_{p^r}(k)
    Kato {
        #[command(subcommand)]
        op: KatoOp,
    },
    /// Mackey-product symbol certificates
    Mackey {
        #[command(subcommand)]
        op: MackeyOp,
    },
    /// Differential forms over one-variable function fields
    Derham {
        #[command(subcommand)]
        op: DerhamOp,
    },
    /// Run a named verification suite
    Verify {
        /// One of the suite names, or `all`
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run property sweeps on the current thread only
        #[arg(long)]
        sequential: bool,
    },
}

#[derive(Args)]
struct WittCommon {
    /// Truncation set: comma list `1,2,4` or `P(p,r)`
    #[arg(long)]
    tset: String,
    /// Coefficient field spec
    #[arg(long)]
    field: String,
    /// Coordinates of x as element indices, in truncation-set order
    #[arg(long)]
    x: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum WittOp {
    /// x + y
    Add {
        #[command(flatten)]
        common: WittCommon,
        #[arg(long)]
        y: String,
    },
    /// x · y
    Mul {
        #[command(flatten)]
        common: WittCommon,
        #[arg(long)]
        y: String,
    },
    /// ℘(x) = F(x) − x
    Wp {
        #[command(flatten)]
        common: WittCommon,
    },
    /// Ghost coordinates of an integral vector
    Ghost {
        #[arg(long)]
        tset: String,
        /// Integer coordinates, in truncation-set order
        #[arg(long)]
        x: String,
    },
    /// Canonical decomposition into p-typical components
    Decompose {
        #[command(flatten)]
        common: WittCommon,
    },
}

#[derive(Subcommand)]
enum KatoOp {
    /// Invariant factors of the presented group
    Invariants {
        #[arg(long)]
        field: String,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        bounds: BoundArgs,
    },
}

#[derive(Subcommand)]
enum MackeyOp {
    /// Generate a vanishing certificate and replay it
    Certify {
        /// steinberg, as or perfect
        #[arg(long)]
        kind: String,
        #[arg(long)]
        field: String,
        /// Steinberg slot entry, as an element index
        #[arg(long)]
        a: Option<u128>,
        /// Witt coordinates (as / perfect), as element indices
        #[arg(long)]
        w: Option<String>,
        /// Unit slot entries, as element indices
        #[arg(long, default_value = "")]
        units: String,
        /// Steinberg modulus (a prime)
        #[arg(long)]
        l: Option<u64>,
        /// Witt length for the perfect kind
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the certificate JSON here instead of inlining it
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Replay a certificate file
    Verify {
        #[arg(long)]
        cert: std::path::PathBuf,
    },
}

#[derive(Args)]
struct DerhamCommon {
    /// Function field spec: GF(q)(t) or GF(q)(t)[y]/(c0;…;cd)
    #[arg(long)]
    field: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum DerhamOp {
    /// Cartier operator and exactness of ω = f ds
    Cartier {
        #[command(flatten)]
        common: DerhamCommon,
        /// Coefficient f: layer coordinates split by `;`, each `num[/den]`
        #[arg(long)]
        omega: String,
    },
    /// Trace of ω to the base field
    Trace {
        #[command(flatten)]
        common: DerhamCommon,
        #[arg(long)]
        omega: String,
    },
    /// Check Tr(dlog β) = dlog N(β)
    Ntr {
        #[command(flatten)]
        common: DerhamCommon,
        #[arg(long)]
        beta: String,
    },
    /// Rewrite α dlog β into dlog generators plus an exact remainder
    Bta {
        #[command(flatten)]
        common: DerhamCommon,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
    },
}

/// Entry point for the binary; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let format = match cli.format.parse::<Format>() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let started = Instant::now();
    match execute(cli.command, format, started) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::BoundExceeded { .. } => 3,
                _ => 2,
            }
        }
    }
}

fn witt_parse(common: &WittCommon, coords: &str) -> Result<(TruncationSet, WittVector)> {
    let tset = parse::parse_tset(&common.tset)?;
    let field = parse::parse_field(&common.field, common.seed)?;
    let idx = parse::parse_u64_list(coords)?;
    if idx.len() != tset.len() {
        return Err(Error::Parse {
            pos: 0,
            msg: format!("expected {} coordinates, got {}", tset.len(), idx.len()),
        });
    }
    let map: BTreeMap<u64, _> = tset
        .elements()
        .iter()
        .zip(&idx)
        .map(|(&s, &n)| Ok((s, parse::elem_from_index(&field, n as u128)?)))
        .collect::<Result<_>>()?;
    Ok((tset.clone(), WittVector::from_coords(&tset, &field, map)?))
}

fn witt_indices(w: &WittVector) -> Vec<u128> {
    let field = w.field().expect("field coefficients");
    w.tset()
        .elements()
        .iter()
        .map(|s| parse::elem_to_index(field, &w.field_coords().expect("field coefficients")[s]))
        .collect()
}

fn emit(mut report: Report, format: Format, started: Instant) -> i32 {
    report.timing_ms = started.elapsed().as_millis();
    print!("{}", report.render(format));
    if format == Format::Json {
        println!();
    }
    0
}

fn execute(command: Command, format: Format, started: Instant) -> Result<i32> {
    match command {
        Command::Witt { op } => {
            let report = match op {
                WittOp::Add { common, y } => {
                    let (_, x) = witt_parse(&common, &common.x)?;
                    let (_, yv) = witt_parse(&common, &y)?;
                    Report::new("witt add", "eq:gs")
                        .input("tset", &common.tset)
                        .input("field", &common.field)
                        .input("x", &common.x)
                        .input("y", &y)
                        .result("result", witt_indices(&x.add(&yv)?))
                }
                WittOp::Mul { common, y } => {
                    let (_, x) = witt_parse(&common, &common.x)?;
                    let (_, yv) = witt_parse(&common, &y)?;
                    Report::new("witt mul", "eq:gs")
                        .input("tset", &common.tset)
                        .input("field", &common.field)
                        .input("x", &common.x)
                        .input("y", &y)
                        .result("result", witt_indices(&x.mul(&yv)?))
                }
                WittOp::Wp { common } => {
                    let (_, x) = witt_parse(&common, &common.x)?;
                    Report::new("witt wp", "eq:ASW")
                        .input("tset", &common.tset)
                        .input("field", &common.field)
                        .input("x", &common.x)
                        .result("result", witt_indices(&x.wp()?))
                }
                WittOp::Ghost { tset, x } => {
                    let ts = parse::parse_tset(&tset)?;
                    let idx = parse::parse_u64_list(&x)?;
                    if idx.len() != ts.len() {
                        return Err(Error::Parse {
                            pos: 0,
                            msg: format!("expected {} coordinates, got {}", ts.len(), idx.len()),
                        });
                    }
                    let coords: BTreeMap<u64, BigInt> = ts
                        .elements()
                        .iter()
                        .zip(&idx)
                        .map(|(&s, &n)| (s, BigInt::from(n)))
                        .collect();
                    let v = WittVector::int_from_coords(&ts, coords)?;
                    let ghost: Vec<String> =
                        v.ghost()?.values().map(|g| g.to_string()).collect();
                    Report::new("witt ghost", "eq:gs")
                        .input("tset", &tset)
                        .input("x", &x)
                        .result("ghost", ghost)
                }
                WittOp::Decompose { common } => {
                    let (_, x) = witt_parse(&common, &common.x)?;
                    let comps: Vec<serde_json::Value> = x
                        .decompose()?
                        .iter()
                        .map(|(m, c)| {
                            serde_json::json!({
                                "m": m,
                                "tset": c.tset().elements(),
                                "coords": witt_indices(c),
                            })
                        })
                        .collect();
                    Report::new("witt decompose", "eq:dec")
                        .input("tset", &common.tset)
                        .input("field", &common.field)
                        .input("x", &common.x)
                        .result("components", comps)
                }
            };
            Ok(emit(report, format, started))
        }
        Command::Asw {
            field,
            r,
            seed,
            bounds,
        } => {
            let k = parse::parse_field(&field, seed)?;
            let c = crate::kato::asw_cokernel(&k, r, bounds.resolve().elems)?;
            let report = Report::new("asw", "eq:ASW")
                .input("field", &field)
                .input("r", r)
                .result("invariants", &c.invariants)
                .result("order", c.order());
            Ok(emit(report, format, started))
        }
        Command::Kato { op } => {
            let KatoOp::Invariants {
                field,
                r,
                n,
                seed,
                bounds,
            } = op;
            let k = parse::parse_field(&field, seed)?;
            let inv = crate::kato::invariants(&k, r, n, &bounds.resolve())?;
            let statement = if n == 1 { "thm:bij" } else { "thm:bij n≥2" };
            let report = Report::new("kato invariants", statement)
                .input("field", &field)
                .input("r", r)
                .input("n", n)
                .result("invariants", inv);
            Ok(emit(report, format, started))
        }
        Command::Mackey { op } => match op {
            MackeyOp::Certify {
                kind,
                field,
                a,
                w,
                units,
                l,
                r,
                seed,
                out,
            } => {
                let k = parse::parse_field(&field, seed)?;
                let u = Universe::new(&k);
                let unit_reps = if units.is_empty() {
                    Vec::new()
                } else {
                    parse::parse_u64_list(&units)?
                        .iter()
                        .map(|&n| parse::elem_from_index(&k, n as u128))
                        .collect::<Result<Vec<_>>>()?
                };
                let witt_of = |spec: &str, r: u32| -> Result<WittVector> {
                    let tset = TruncationSet::p_typical(k.p(), r);
                    let idx = parse::parse_u64_list(spec)?;
                    if idx.len() != tset.len() {
                        return Err(Error::Parse {
                            pos: 0,
                            msg: format!("expected {} Witt coordinates", tset.len()),
                        });
                    }
                    let map: BTreeMap<u64, _> = tset
                        .elements()
                        .iter()
                        .zip(&idx)
                        .map(|(&s, &n)| Ok((s, parse::elem_from_index(&k, n as u128)?)))
                        .collect::<Result<_>>()?;
                    WittVector::from_coords(&tset, &k, map)
                };
                let missing = |flag: &str| Error::Parse {
                    pos: 0,
                    msg: format!("--{flag} is required for kind `{kind}`"),
                };
                let (cert, statement) = match kind.as_str() {
                    "steinberg" => {
                        let a = a.ok_or_else(|| missing("a"))?;
                        let l = l.ok_or_else(|| missing("l"))?;
                        let a = parse::elem_from_index(&k, a)?;
                        (
                            steinberg_certificate(&u, &a, &unit_reps, l, seed)?,
                            "lem:Symb",
                        )
                    }
                    "as" => {
                        let w = w.ok_or_else(|| missing("w"))?;
                        (
                            as_vanishing_certificate(&u, &witt_of(&w, 1)?, &unit_reps, seed)?,
                            "lem:Symb",
                        )
                    }
                    "perfect" => {
                        let w = w.ok_or_else(|| missing("w"))?;
                        (
                            perfect_vanishing_certificate(&u, &witt_of(&w, r)?, &unit_reps)?,
                            "lem:mod",
                        )
                    }
                    other => {
                        return Err(Error::Parse {
                            pos: 0,
                            msg: format!("unknown certificate kind `{other}`"),
                        })
                    }
                };
                let outcome = verify_certificate(&cert);
                let mut report = Report::new("mackey certify", statement)
                    .input("kind", &kind)
                    .input("field", &field)
                    .input("units", &units)
                    .result("moves", cert.moves.len())
                    .result("verified", outcome.ok);
                if let Some(path) = out {
                    std::fs::write(&path, serde_json::to_vec_pretty(&cert)?)?;
                    report = report.result("certificate", path.display().to_string());
                } else {
                    report = report.result("certificate", serde_json::to_value(&cert)?);
                }
                let code = emit(report, format, started);
                Ok(if outcome.ok { code } else { 1 })
            }
            MackeyOp::Verify { cert } => {
                let data = std::fs::read(&cert)?;
                let cert_val: Certificate = serde_json::from_slice(&data)?;
                let outcome = verify_certificate(&cert_val);
                let report = Report::new("mackey verify", "lem:Symb")
                    .input("cert", cert.display().to_string())
                    .result("ok", outcome.ok)
                    .result("failed_at", outcome.failed_at);
                let code = emit(report, format, started);
                Ok(if outcome.ok { code } else { 1 })
            }
        },
        Command::Derham { op } => {
            let report = match op {
                DerhamOp::Cartier { common, omega } => {
                    let kf = parse::parse_funfield(&common.field, common.seed)?;
                    let w = Diff1::new(&kf, parse::parse_ffelem(&omega, &kf)?);
                    let c = w.cartier()?;
                    Report::new("derham cartier", "eq:strH^n")
                        .input("field", &common.field)
                        .input("omega", &omega)
                        .result("cartier", kf.render(c.coeff()))
                        .result("exact", w.is_exact()?)
                }
                DerhamOp::Trace { common, omega } => {
                    let kf = parse::parse_funfield(&common.field, common.seed)?;
                    let w = Diff1::new(&kf, parse::parse_ffelem(&omega, &kf)?);
                    let tr = trace_form(&kf, &w)?;
                    Report::new("derham trace", "thm:Tr")
                        .input("field", &common.field)
                        .input("omega", &omega)
                        .result("trace", kf.base().render(tr.coeff()))
                }
                DerhamOp::Ntr { common, beta } => {
                    let kf = parse::parse_funfield(&common.field, common.seed)?;
                    let b = parse::parse_ffelem(&beta, &kf)?;
                    Report::new("derham ntr", "lem:NTr")
                        .input("field", &common.field)
                        .input("beta", &beta)
                        .result("holds", verify_ntr(&kf, &b)?)
                }
                DerhamOp::Bta {
                    common,
                    alpha,
                    beta,
                } => {
                    let kf = parse::parse_funfield(&common.field, common.seed)?;
                    let a = parse::parse_ffelem(&alpha, &kf)?;
                    let b = parse::parse_ffelem(&beta, &kf)?;
                    let rw = crate::derham::bta_rewrite(&kf, &a, &b)?;
                    let terms: Vec<String> = rw
                        .terms()
                        .iter()
                        .map(|t| match t {
                            BtaTerm::XiDlogY { xi, y } => format!(
                                "({})·dlog({})",
                                kf.render(xi),
                                y.render(kf.var())
                            ),
                            BtaTerm::XDlogEta { x, eta } => format!(
                                "({})·dlog({})",
                                x.render(kf.var()),
                                kf.render(eta)
                            ),
                        })
                        .collect();
                    Report::new("derham bta", "prop:BTa")
                        .input("field", &common.field)
                        .input("alpha", &alpha)
                        .input("beta", &beta)
                        .result("terms", terms)
                        .result("remainder", kf.render(rw.remainder()))
                }
            };
            Ok(emit(report, format, started))
        }
        Command::Verify {
            suite,
            seed,
            sequential,
        } => {
            let mode = if sequential {
                ExecMode::Sequential
            } else {
                ExecMode::default()
            };
            let mut report = run_suite(&suite, seed, mode)?;
            report.timing_ms = started.elapsed().as_millis();
            print!("{}", report.render(format));
            if format == Format::Json {
                println!();
            }
            Ok(if report.pass { 0 } else { 1 })
        }
    }
}
