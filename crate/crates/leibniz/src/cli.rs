//! Command-line front end.
//!
//! Exit codes: 0 when the command ran and the checked property holds,
//! 1 when it ran and the property is false (e.g. a map that is not an
//! automorphism), 2 when the input could not be processed at all. This
//! lets the tool compose in scripts: `&&` means "holds", not merely
//! "didn't crash".

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::families::{self, AutParams, FamilyId};
use crate::matrix::Matrix;
use crate::morphisms::{self, HomCheck, LinearMap};
use crate::necessity;
use crate::rng::SplitMix64;
use crate::scalar::Scalar;

#[derive(Parser)]
#[command(
    name = "leibniz",
    version,
    about = "Exact-arithmetic workbench for finite-dimensional Leibniz algebras"
)]
struct Cli {
    /// Emit machine-readable JSON instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

fn parse_family(s: &str) -> std::result::Result<FamilyId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Where to get an algebra: a constructed family member, a JSON file, or
/// stdin (path `-`, or no source at all).
#[derive(Args)]
struct AlgebraSource {
    /// Path to an algebra JSON file (`-` for stdin).
    #[arg(long)]
    algebra: Option<PathBuf>,
    /// Family to construct instead of reading a file.
    #[arg(long, value_parser = parse_family)]
    family: Option<FamilyId>,
    /// Nilradical parameter for --family.
    #[arg(long)]
    n: Option<usize>,
}

impl AlgebraSource {
    fn load(&self) -> Result<Algebra> {
        match (self.family, &self.algebra) {
            (Some(_), Some(_)) => Err(Error::Parse(
                "give either --family/--n or --algebra, not both".into(),
            )),
            (Some(f), None) => {
                let n = self
                    .n
                    .ok_or_else(|| Error::Parse("--family requires --n".into()))?;
                families::build(f, n)
            }
            (None, path) => {
                let text = read_input(path.as_deref().map(|p| p.as_os_str().to_os_string()))?;
                serde_json::from_str(&text).map_err(|e| Error::Parse(format!("algebra JSON: {e}")))
            }
        }
    }
}

fn read_input(path: Option<OsString>) -> Result<String> {
    match path {
        Some(p) if p != "-" => std::fs::read_to_string(&p)
            .map_err(|e| Error::Parse(format!("{}: {e}", p.to_string_lossy()))),
        _ => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| Error::Parse(format!("stdin: {e}")))?;
            Ok(buf)
        }
    }
}

fn read_map(path: &std::path::Path) -> Result<LinearMap> {
    let text = read_input(Some(path.as_os_str().to_os_string()))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("map JSON: {e}")))
}

/// Parses `alpha=1/2,beta=-3,...` into a named component map.
fn parse_params(f: FamilyId, spec: &str) -> Result<AutParams> {
    let mut map = BTreeMap::new();
    for piece in spec.split(',') {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        let (name, value) = piece
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected name=value, got {piece:?}")))?;
        let scalar: Scalar = value.trim().parse()?;
        if map.insert(name.trim().to_string(), scalar).is_some() {
            return Err(Error::Parse(format!("duplicate parameter {name:?}")));
        }
    }
    AutParams::from_components(f, &map)
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the Leibniz identity on all basis triples.
    CheckLeibniz {
        #[command(flatten)]
        src: AlgebraSource,
    },
    /// Print the lower central and derived series dimensions.
    Series {
        #[command(flatten)]
        src: AlgebraSource,
    },
    /// Report solvability/nilpotency and classify the derived subalgebra
    /// (the nilradical for the built-in families).
    Classify {
        #[command(flatten)]
        src: AlgebraSource,
    },
    /// Construct a family member and emit its multiplication table.
    Build {
        #[arg(long, value_parser = parse_family)]
        family: FamilyId,
        #[arg(long)]
        n: usize,
    },
    /// Emit the parametric automorphism matrix for given parameters.
    Aut {
        #[arg(long, value_parser = parse_family)]
        family: FamilyId,
        #[arg(long)]
        n: usize,
        /// Exact rational parameters, e.g. alpha=1/2,beta=3.
        #[arg(long)]
        params: Option<String>,
        /// Sample pseudorandom valid parameters instead (deterministic).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Check whether a linear map is an automorphism of an algebra.
    VerifyMap {
        #[command(flatten)]
        src: AlgebraSource,
        /// Path to a linear-map JSON file (`-` for stdin).
        #[arg(long)]
        map: PathBuf,
    },
    /// Compute a basis of the derivation space.
    Derivations {
        #[command(flatten)]
        src: AlgebraSource,
    },
    /// Compose two automorphism parameter tuples via the group law.
    Compose {
        #[arg(long, value_parser = parse_family)]
        family: FamilyId,
        /// Parameters of the outer (left) automorphism.
        #[arg(long)]
        outer: String,
        /// Parameters of the inner (right) automorphism.
        #[arg(long)]
        inner: String,
    },
    /// Replay the automorphism necessity proof and emit a certificate.
    Replay {
        #[arg(long, value_parser = parse_family)]
        family: FamilyId,
        #[arg(long)]
        n: usize,
    },
}

/// Parses `argv` and runs the command; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // --help/--version are successful outcomes; real parse errors
            // are input errors.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn scalar_strings(v: &[Scalar]) -> Vec<String> {
    v.iter().map(Scalar::to_string).collect()
}

fn print_matrix(m: &Matrix) {
    for r in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|c| m[(r, c)].to_string()).collect();
        println!("[{}]", row.join(", "));
    }
}

fn print_algebra(a: &Algebra) {
    println!("dim {}", a.dim());
    for ((i, j), coords) in a.table() {
        let terms: Vec<String> = coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                if c.is_one() {
                    a.label(k).to_string()
                } else {
                    format!("{c}*{}", a.label(k))
                }
            })
            .collect();
        println!("[{},{}] = {}", a.label(*i), a.label(*j), terms.join(" + "));
    }
}

fn params_json(p: &AutParams) -> serde_json::Value {
    let mut obj = serde_json::Map::new();
    for (name, value) in p.components() {
        obj.insert(name.to_string(), json!(value.to_string()));
    }
    serde_json::Value::Object(obj)
}

fn dispatch(cli: &Cli) -> Result<i32> {
    match &cli.cmd {
        Cmd::CheckLeibniz { src } => {
            let a = src.load()?;
            let violations = a.check_leibniz();
            let holds = violations.is_empty();
            if cli.json {
                let vs: Vec<_> = violations
                    .iter()
                    .map(|v| {
                        json!({
                            "triple": [v.triple.0, v.triple.1, v.triple.2],
                            "discrepancy": scalar_strings(&v.discrepancy),
                        })
                    })
                    .collect();
                println!("{}", json!({ "holds": holds, "violations": vs }));
            } else if holds {
                println!("Leibniz identity holds on all basis triples");
            } else {
                println!(
                    "Leibniz identity fails on {} basis triple(s); first at {:?}",
                    violations.len(),
                    violations[0].triple
                );
            }
            Ok(if holds { 0 } else { 1 })
        }
        Cmd::Series { src } => {
            let a = src.load()?;
            let lcs: Vec<usize> = a.lower_central_series().iter().map(|s| s.rank()).collect();
            let ds: Vec<usize> = a.derived_series().iter().map(|s| s.rank()).collect();
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "lower_central": lcs,
                        "derived": ds,
                        "nilpotent": a.is_nilpotent(),
                        "solvable": a.is_solvable(),
                    })
                );
            } else {
                println!("lower central series dims: {lcs:?}");
                println!("derived series dims:       {ds:?}");
                println!("nilpotent: {}", a.is_nilpotent());
                println!("solvable:  {}", a.is_solvable());
            }
            Ok(0)
        }
        Cmd::Classify { src } => {
            let a = src.load()?;
            let derived = a.subspace_product(&a.full_space(), &a.full_space());
            let sub = a.subalgebra_restrict(&derived)?;
            let class = if sub.is_null_filiform() {
                "null-filiform"
            } else if sub.is_filiform() {
                "filiform"
            } else if sub.is_nilpotent() {
                "nilpotent"
            } else {
                "other"
            };
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "solvable": a.is_solvable(),
                        "solvability_index": a.solvability_index(),
                        "nilpotent": a.is_nilpotent(),
                        "derived_subalgebra": {
                            "dim": sub.dim(),
                            "class": class,
                        },
                    })
                );
            } else {
                println!(
                    "solvable: {} (index {:?})",
                    a.is_solvable(),
                    a.solvability_index()
                );
                println!("nilpotent: {}", a.is_nilpotent());
                println!("derived subalgebra: dim {}, {class}", sub.dim());
            }
            Ok(0)
        }
        Cmd::Build { family, n } => {
            let a = families::build(*family, *n)?;
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string(&a).map_err(|e| Error::Parse(e.to_string()))?
                );
            } else {
                print_algebra(&a);
            }
            Ok(0)
        }
        Cmd::Aut {
            family,
            n,
            params,
            seed,
        } => {
            let p = match (params, seed) {
                (Some(_), Some(_)) => {
                    return Err(Error::Parse("give --params or --seed, not both".into()))
                }
                (Some(spec), None) => parse_params(*family, spec)?,
                (None, seed) => {
                    let mut rng = SplitMix64::new(seed.unwrap_or(0));
                    families::random_params(*family, &mut rng)
                }
            };
            let m = families::aut_matrix(*family, *n, &p)?;
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string(&m).map_err(|e| Error::Parse(e.to_string()))?
                );
            } else {
                for (name, value) in p.components() {
                    println!("{name} = {value}");
                }
                print_matrix(m.matrix());
            }
            Ok(0)
        }
        Cmd::VerifyMap { src, map } => {
            let a = src.load()?;
            let m = read_map(map)?;
            let hom = morphisms::is_homomorphism(&a, &m)?;
            let auto = morphisms::is_automorphism(&a, &m)?;
            if cli.json {
                let mut obj = json!({ "automorphism": auto, "homomorphism": hom.holds() });
                if let HomCheck::Fails { pair, discrepancy } = &hom {
                    obj["failing_pair"] = json!([pair.0, pair.1]);
                    obj["discrepancy"] = json!(scalar_strings(discrepancy));
                }
                println!("{obj}");
            } else if auto {
                println!("automorphism: yes");
            } else if hom.holds() {
                println!("automorphism: no (homomorphism, but singular)");
            } else if let HomCheck::Fails { pair, .. } = &hom {
                println!(
                    "automorphism: no (bracket not preserved at pair ({}, {}))",
                    a.label(pair.0),
                    a.label(pair.1)
                );
            }
            Ok(if auto { 0 } else { 1 })
        }
        Cmd::Derivations { src } => {
            let a = src.load()?;
            let basis = morphisms::derivation_space(&a);
            if cli.json {
                let elements: Vec<_> = basis
                    .elements
                    .iter()
                    .map(|m| {
                        serde_json::to_value(LinearMap::new(m.clone()))
                            .map_err(|e| Error::Parse(e.to_string()))
                    })
                    .collect::<Result<_>>()?;
                println!(
                    "{}",
                    json!({ "dimension": basis.dimension, "basis": elements })
                );
            } else {
                println!("derivation space dimension: {}", basis.dimension);
                for (i, d) in basis.elements.iter().enumerate() {
                    println!("D{i}:");
                    print_matrix(d);
                }
            }
            Ok(0)
        }
        Cmd::Compose {
            family,
            outer,
            inner,
        } => {
            let po = parse_params(*family, outer)?;
            let pi = parse_params(*family, inner)?;
            let composed = families::compose_params(*family, &po, &pi)?;
            if cli.json {
                println!("{}", params_json(&composed));
            } else {
                for (name, value) in composed.components() {
                    println!("{name} = {value}");
                }
            }
            Ok(0)
        }
        Cmd::Replay { family, n } => {
            let cert = necessity::replay(*family, *n)?;
            if cli.json {
                println!("{}", cert.to_json());
            } else {
                println!(
                    "replayed {} (n={}): {} steps, match={}",
                    cert.family,
                    cert.n,
                    cert.steps.len(),
                    cert.matches
                );
                for step in &cert.steps {
                    let solved: Vec<String> = step
                        .constraints
                        .iter()
                        .map(|c| format!("{}={}", c.var, c.value_poly))
                        .collect();
                    println!(
                        "  [{},{}]: {}{}",
                        step.pair[0],
                        step.pair[1],
                        if solved.is_empty() {
                            "(no new constraints)".to_string()
                        } else {
                            solved.join(", ")
                        },
                        if step.residuals.is_empty() {
                            String::new()
                        } else {
                            format!(" ({} open relation(s))", step.residuals.len())
                        }
                    );
                }
            }
            Ok(if cert.matches { 0 } else { 1 })
        }
    }
}
