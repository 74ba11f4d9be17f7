//! Command-line front end. [`run`] never panics on bad input: every failure
//! becomes exit code 2 with a message naming the offending field.

use std::fmt::Write as _;
use std::io::Read;
use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::adjoint::{
    binomial, k_adjoint_with, product_adjoint_rhs, product_index_bijection, tensor,
};
use crate::arrangement::{product, restrict_to, Arrangement};
use crate::decompose::{classify_samples, monotonicity_report, verify_nbc, Violation};
use crate::error::Error;
use crate::grassmann::{l_lower, l_upper, locate_stratum, plucker, refined_signature, Subspace};
use crate::io::{
    arrangement_json, matrix_to_strings, one_based, parse_arrangement, parse_subspace,
    rationals_to_strings, InputError,
};
use crate::lattice::{build_lattice, DEFAULT_CHAIN_CAP};
use crate::matroid::{matroid_of_restriction, restricted_arrangement_matroid, MatroidInvariants};

#[derive(Parser, Debug)]
#[command(
    name = "kadjoint",
    version,
    about = "k-adjoints of hyperplane arrangements and Grassmannian strata"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(clap::Args, Debug, Clone)]
pub struct Options {
    /// Arrangement JSON file, or `-` for standard input.
    #[arg(long, global = true)]
    pub input: Option<String>,
    /// Second arrangement JSON file (product, tensor).
    #[arg(long, global = true)]
    pub other: Option<String>,
    /// Subspace JSON file.
    #[arg(long, global = true)]
    pub subspace: Option<String>,
    #[arg(long, global = true)]
    pub k: Option<usize>,
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true, default_value_t = 200)]
    pub samples: usize,
    /// Required by the sampling commands.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Entries of sampled bases are drawn from [-bound, bound].
    #[arg(long, global = true, default_value_t = 5)]
    pub bound: i64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long = "chain-cap", global = true, default_value_t = DEFAULT_CHAIN_CAP)]
    pub chain_cap: usize,
    /// Element order for broken circuits, a 1-based comma-separated permutation.
    #[arg(long = "nbc-order", global = true, value_delimiter = ',')]
    pub nbc_order: Option<Vec<usize>>,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Intersection lattice with Möbius values and Hasse edges.
    Lattice,
    /// The k-adjoint arrangement.
    Adjoint,
    /// Restriction of the arrangement to a subspace.
    Restrict,
    /// Adjoint stratum, Schubert symbols and complementary flats of a subspace.
    Stratum,
    /// Matroid invariants of the restriction to a subspace.
    Matroid,
    /// Characteristic polynomial of the intersection lattice.
    Charpoly,
    /// Product of two arrangements; with --k, checks the product formula for adjoints.
    Product,
    /// Tensor product of two arrangements.
    Tensor,
    /// Samples subspaces and compares the three decompositions.
    VerifyEquivalence,
    /// Samples subspaces and checks anti-monotonicity of matroid invariants.
    VerifyMonotonicity,
    /// Checks that the k-adjoints of the Boolean arrangement are Boolean.
    Boolean,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Input(InputError),
    Violations(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let field = match &e {
            Error::OutOfRange { what, .. } => match *what {
                "bound" => "bound",
                "ground size" => "input",
                _ => "k",
            },
            Error::NonEssential { .. }
            | Error::InvalidHyperplane { .. }
            | Error::DuplicateHyperplane { .. } => "input",
            Error::BudgetExceeded { .. } => "chain-cap",
            Error::InvalidSubspace(_) | Error::RankMismatch { .. } | Error::Dimension(_) => {
                "subspace"
            }
            Error::InvalidOrder(_) => "nbc-order",
            Error::SamplingFailed { .. } => "bound",
            Error::GroundSizeMismatch { .. } => "other",
            Error::AdjointCollision { .. } | Error::Invariant(_) => "input",
        };
        Failure::Input(InputError::new(field, e.to_string()))
    }
}

type Run = std::result::Result<(Value, String), Failure>;

/// Parses `args` (including the program name) and executes the command.
pub fn run(args: &[String], stdin: &mut dyn Read) -> Outcome {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let format = cli.opts.format;
    match execute(cli.command, &cli.opts, stdin) {
        Ok((json, text)) => Outcome {
            code: 0,
            stdout: render(format, &json, &text),
            stderr: String::new(),
        },
        Err(Failure::Violations(report)) => Outcome {
            code: 1,
            stdout: report,
            stderr: "verification failed: violations listed in the report\n".into(),
        },
        Err(Failure::Input(e)) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn render(format: Format, json: &Value, text: &str) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(json).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Text => text.to_string(),
    }
}

fn read_source(path: &str, field: &str, stdin: &mut dyn Read) -> Result<String, InputError> {
    let mut text = String::new();
    if path == "-" {
        stdin
            .read_to_string(&mut text)
            .map_err(|e| InputError::new(field, format!("cannot read standard input: {e}")))?;
    } else {
        text = std::fs::read_to_string(path)
            .map_err(|e| InputError::new(field, format!("cannot read {path}: {e}")))?;
    }
    Ok(text)
}

fn arrangement_arg(
    path: &Option<String>,
    field: &str,
    stdin: &mut dyn Read,
) -> Result<(Arrangement, String), InputError> {
    let path = path
        .as_ref()
        .ok_or_else(|| InputError::new(field, "missing"))?;
    let a = parse_arrangement(&read_source(path, field, stdin)?).map_err(|e| InputError {
        field: if e.field == "json" {
            field.to_string()
        } else {
            format!("{field}.{}", e.field)
        },
        message: e.message,
    })?;
    let id = if path == "-" {
        "stdin".to_string()
    } else {
        Path::new(path)
            .file_stem()
            .map_or_else(|| path.clone(), |s| s.to_string_lossy().into_owned())
    };
    Ok((a, id))
}

fn subspace_arg(opts: &Options, n: usize, stdin: &mut dyn Read) -> Result<Subspace, InputError> {
    let path = opts
        .subspace
        .as_ref()
        .ok_or_else(|| InputError::new("subspace", "missing"))?;
    let u = parse_subspace(&read_source(path, "subspace", stdin)?).map_err(|e| InputError {
        field: if e.field == "json" {
            "subspace".into()
        } else {
            format!("subspace.{}", e.field)
        },
        message: e.message,
    })?;
    if u.n() != n {
        return Err(InputError::new(
            "subspace.n",
            format!("subspace lives in dimension {}, arrangement in {n}", u.n()),
        ));
    }
    Ok(u)
}

fn require<T: Copy>(v: Option<T>, field: &str) -> Result<T, InputError> {
    v.ok_or_else(|| InputError::new(field, "missing"))
}

fn to_value(v: &impl Serialize) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn execute(command: Command, opts: &Options, stdin: &mut dyn Read) -> Run {
    match command {
        Command::Lattice => cmd_lattice(opts, stdin),
        Command::Adjoint => cmd_adjoint(opts, stdin),
        Command::Restrict => cmd_restrict(opts, stdin),
        Command::Stratum => cmd_stratum(opts, stdin),
        Command::Matroid => cmd_matroid(opts, stdin),
        Command::Charpoly => cmd_charpoly(opts, stdin),
        Command::Product => cmd_product(opts, stdin),
        Command::Tensor => cmd_tensor(opts, stdin),
        Command::VerifyEquivalence => cmd_verify(opts, stdin, false),
        Command::VerifyMonotonicity => cmd_verify(opts, stdin, true),
        Command::Boolean => cmd_boolean(opts),
    }
}

fn cmd_lattice(opts: &Options, stdin: &mut dyn Read) -> Run {
    let (a, _) = arrangement_arg(&opts.input, "input", stdin)?;
    let lat = build_lattice(&a);
    let flats: Vec<Value> = lat
        .flats()
        .iter()
        .zip(lat.mobius_values())
        .map(|(f, mu)| {
            json!({
                "rank": f.rank,
                "contains": one_based(&f.contains),
                "basis": matrix_to_strings(&f.basis),
                "mobius": mu,
            })
        })
        .collect();
    let chi = lat.characteristic_polynomial();
    let json = json!({
        "dim": lat.dim(),
        "rank_sizes": lat.rank_sizes(),
        "flats": flats,
        "hasse_edges": lat.hasse_edges(),
        "char_poly": chi.coeffs,
    });
    let mut text = format!("{} flats, rank sizes {:?}\n", lat.len(), lat.rank_sizes());
    for (i, f) in lat.flats().iter().enumerate() {
        let _ = writeln!(
            text,
            "{i:>4}  rank {}  mu {:>3}  {:?}",
            f.rank,
            lat.mobius(i),
            one_based(&f.contains)
        );
    }
    let _ = writeln!(text, "chi(t) = {chi}");
    Ok((json, text))
}

fn cmd_adjoint(opts: &Options, stdin: &mut dyn Read) -> Run {
    let (a, _) = arrangement_arg(&opts.input, "input", stdin)?;
    let k = require(opts.k, "k")?;
    let lat = build_lattice(&a);
    let adj = k_adjoint_with(&a, &lat, k)?;
    let mut text = format!(
        "{}-adjoint: {} hyperplanes in dimension {}\n",
        k,
        adj.hyperplanes.len(),
        adj.base.dim()
    );
    let hyperplanes: Vec<Value> = adj
        .hyperplanes
        .iter()
        .map(|h| {
            let coeffs: Map<String, Value> = (0..adj.index.len())
                .map(|i| {
                    (
                        adj.index.key(i),
                        Value::String(crate::io::rational_to_string(&h.coeffs[i])),
                    )
                })
                .collect();
            let flat = one_based(&lat.flat(h.flat).contains);
            let terms: Vec<String> = (0..adj.index.len())
                .filter(|&i| !num::Zero::is_zero(&h.coeffs[i]))
                .map(|i| {
                    format!(
                        "{}·x{}",
                        crate::io::rational_to_string(&h.coeffs[i]),
                        adj.index.key(i)
                    )
                })
                .collect();
            let _ = writeln!(text, "{flat:?}: {} = 0", terms.join(" + "));
            json!({ "flat": flat, "coeffs": coeffs })
        })
        .collect();
    let json = json!({ "k": k, "dim": adj.base.dim(), "hyperplanes": hyperplanes });
    Ok((json, text))
}

fn cmd_restrict(opts: &Options, stdin: &mut dyn Read) -> Run {
    let (a, _) = arrangement_arg(&opts.input, "input", stdin)?;
    let u = subspace_arg(opts, a.dim(), stdin)?;
    let r = restrict_to(&a, &u)?;
    let map: Vec<Option<usize>> = r.index_map.iter().map(|j| j.map(|j| j + 1)).collect();
    let json = json!({ "arrangement": arrangement_json(&r.arrangement), "index_map": map });
    let text = format!(
        "{} hyperplanes in dimension {}; index map {:?}\n",
        r.arrangement.len(),
        r.arrangement.dim(),
        map
    );
    Ok((json, text))
}

fn cmd_stratum(opts: &Options, stdin: &mut dyn Read) -> Run {
    let (a, _) = arrangement_arg(&opts.input, "input", stdin)?;
    let u = subspace_arg(opts, a.dim(), stdin)?;
    let lat = build_lattice(&a);
    let adj = k_adjoint_with(&a, &lat, u.k())?;
    let adj_lat = build_lattice(&adj.base);
    let p = adj_lat.flat(locate_stratum(&u, &adj, &adj_lat)?);
    let chains = lat.maximal_chains(opts.chain_cap)?;
    let sig = refined_signature(&u, &chains)?;
    let schubert: Map<String, Value> = sig
        .per_chain
        .iter()
        .enumerate()
        .map(|(i, s)| (i.to_string(), json!(s)))
        .collect();
    let flats = |v: Vec<usize>| -> Vec<Vec<usize>> {
        v.iter()
            .map(|&x| one_based(&lat.flat(x).contains))
            .collect()
    };
    let lower = flats(l_lower(&u, &lat)?);
    let upper = flats(l_upper(&u, &lat)?);
    let coords = rationals_to_strings(&plucker(&u).coords);
    let text = format!(
        "plucker [{}]\nstratum rank {} contains {:?}\nL_U {lower:?}\nL^U {upper:?}\n",
        coords.join(", "),
        p.rank,
        one_based(&p.contains)
    );
    let json = json!({
        "plucker": coords,
        "stratum_rank": p.rank,
        "stratum_contains": one_based(&p.contains),
        "schubert": schubert,
        "l_lower": lower,
        "l_upper": upper,
    });
    Ok((json, text))
}

fn nbc_order(opts: &Options, m: usize) -> Result<Vec<usize>, InputError> {
    match &opts.nbc_order {
        None => Ok((0..m).collect()),
        Some(order) => {
            if order.contains(&0) {
                return Err(InputError::new("nbc-order", "elements are numbered from 1"));
            }
            Ok(order.iter().map(|e| e - 1).collect())
        }
    }
}

fn cmd_matroid(opts: &Options, stdin: &mut dyn Read) -> Run {
    let (a, _) = arrangement_arg(&opts.input, "input", stdin)?;
    let u = subspace_arg(opts, a.dim(), stdin)?;
    let m = matroid_of_restriction(&a, &u)?;
    let order = nbc_order(opts, m.ground_size())?;
    let inv = MatroidInvariants::of(&m, &order)?;
    let restricted = restricted_arrangement_matroid(&a, &u)?.independence_numbers();
    let mut json = to_value(&inv);
    json["I_restricted"] = json!(restricted);
    let text = format!(
        "rank {}  loops {:?}  parallel classes {:?}\nbases {}  I {:?}  I_restricted {:?}\nw {:?}  nbc {:?}\n",
        inv.rank, inv.loops, inv.parallel_classes, inv.bases_count, inv.independence_numbers, restricted, inv.whitney, inv.nbc
    );
    Ok((json, text))
}

fn cmd_charpoly(opts: &Options, stdin: &mut dyn Read) -> Run {
    let (a, _) = arrangement_arg(&opts.input, "input", stdin)?;
    let chi = build_lattice(&a).characteristic_polynomial();
    let json = json!({ "char_poly": chi.coeffs, "polynomial": chi.to_string() });
    Ok((json, format!("{chi}\n")))
}

fn cmd_tensor(opts: &Options, stdin: &mut dyn Read) -> Run {
    let (a, _) = arrangement_arg(&opts.input, "input", stdin)?;
    let (b, _) = arrangement_arg(&opts.other, "other", stdin)?;
    let t = tensor(&a, &b);
    let text = format!("{} hyperplanes in dimension {}\n", t.len(), t.dim());
    Ok((arrangement_json(&t), text))
}

fn cmd_product(opts: &Options, stdin: &mut dyn Read) -> Run {
    let (a, _) = arrangement_arg(&opts.input, "input", stdin)?;
    let (b, _) = arrangement_arg(&opts.other, "other", stdin)?;
    let p = product(&a, &b);
    let Some(k) = opts.k else {
        let text = format!("{} hyperplanes in dimension {}\n", p.len(), p.dim());
        return Ok((arrangement_json(&p), text));
    };
    let direct = k_adjoint_with(&p, &build_lattice(&p), k)?;
    let rhs = product_adjoint_rhs(&a, &b, k)?;
    let bij = product_index_bijection(a.dim(), b.dim(), k);
    let moved = Arrangement::new_allow_non_essential(
        rhs.dim(),
        &direct
            .hyperplanes
            .iter()
            .map(|h| bij.apply(&h.coeffs))
            .collect::<Vec<_>>(),
    )?;
    let equal = moved.same_hyperplanes(&rhs);
    let json = json!({
        "k": k,
        "product": arrangement_json(&p),
        "adjoint_of_product": arrangement_json(&moved),
        "product_of_tensors": arrangement_json(&rhs),
        "equal": equal,
    });
    if !equal {
        return Err(Failure::Violations(render(
            opts.format,
            &json,
            "product formula mismatch\n",
        )));
    }
    Ok((
        json,
        format!(
            "product formula holds for k = {k}: {} hyperplanes\n",
            rhs.len()
        ),
    ))
}

fn violations_text(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| format!("VIOLATION {}: {}\n", v.check, v.detail))
        .collect()
}

fn cmd_verify(opts: &Options, stdin: &mut dyn Read, monotonicity: bool) -> Run {
    let (a, id) = arrangement_arg(&opts.input, "input", stdin)?;
    let k = require(opts.k, "k")?;
    let seed = require(opts.seed, "seed")?;
    let report = classify_samples(&a, &id, k, opts.samples, seed, opts.bound, opts.chain_cap)?;
    let (json, violations, mut text) = if monotonicity {
        let mut mono = monotonicity_report(&report);
        mono.violations.extend(verify_nbc(&a, &report, 3, seed)?);
        let text = format!(
            "{}: k = {}, {} samples, {} strata, {} comparable pairs\n",
            mono.arrangement, mono.k, mono.sample_count, mono.strata, mono.comparable_pairs
        );
        (to_value(&mono), mono.violations.clone(), text)
    } else {
        let p = &report.partitions;
        let text = format!(
            "{}: k = {}, {} samples, strata {}, matroids {}, signatures {}, identical {}, coverage {}/{}\n",
            report.arrangement,
            report.k,
            report.sample_count,
            p.by_stratum,
            p.by_matroid,
            p.by_signature.map_or("skipped".into(), |s| s.to_string()),
            p.identical,
            report.coverage.realized,
            report.coverage.total_flats
        );
        (to_value(&report), report.violations.clone(), text)
    };
    for w in &report.warnings {
        let _ = writeln!(text, "warning: {w}");
    }
    text.push_str(&violations_text(&violations));
    if !violations.is_empty() {
        return Err(Failure::Violations(render(opts.format, &json, &text)));
    }
    Ok((json, text))
}

fn cmd_boolean(opts: &Options) -> Run {
    let n = require(opts.n, "n")?;
    if n == 0 || n > 8 {
        return Err(InputError::new("n", format!("{n} is outside 1..=8")).into());
    }
    let ks: Vec<usize> = match opts.k {
        Some(k) if k == 0 || k >= n => {
            return Err(InputError::new("k", format!("{k} is outside 1..={}", n - 1)).into())
        }
        Some(k) => vec![k],
        None => (1..n).collect(),
    };
    let b = Arrangement::boolean(n);
    let lat = build_lattice(&b);
    let mut checks = Vec::new();
    let mut text = String::new();
    let mut ok = true;
    for k in ks {
        let adj = k_adjoint_with(&b, &lat, k)?;
        let expected = Arrangement::boolean(binomial(n, k));
        let equal = adj.base.same_hyperplanes(&expected);
        ok &= equal;
        let _ = writeln!(
            text,
            "B{n}^({k}) = B{}: {}",
            binomial(n, k),
            if equal { "yes" } else { "NO" }
        );
        checks.push(json!({ "k": k, "dim": adj.base.dim(), "hyperplanes": adj.base.len(), "boolean": equal }));
    }
    let json = json!({ "n": n, "checks": checks });
    if !ok {
        return Err(Failure::Violations(render(opts.format, &json, &text)));
    }
    Ok((json, text))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str], stdin: &str) -> Outcome {
        let args: Vec<String> = std::iter::once("kadjoint")
            .chain(args.iter().copied())
            .map(String::from)
            .collect();
        run(&args, &mut stdin.as_bytes())
    }

    const B4: &str = r#"{"dim": 4, "hyperplanes": [["1","0","0","0"],["0","1","0","0"],["0","0","1","0"],["0","0","0","1"]]}"#;

    #[test]
    fn adjoint_of_b4_from_stdin() {
        let out = call(&["adjoint", "--input", "-", "--k", "2"], B4);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["hyperplanes"].as_array().unwrap().len(), 6);
        assert_eq!(v["hyperplanes"][0]["flat"], json!([1, 2]));
        assert_eq!(v["hyperplanes"][0]["coeffs"]["{1,2}"], "1");
        assert_eq!(v["hyperplanes"][0]["coeffs"]["{3,4}"], "0");
    }

    #[test]
    fn boolean_self_check() {
        let out = call(&["boolean", "--n", "5", "--k", "2"], "");
        assert_eq!(out.code, 0);
        assert!(out.stdout.contains("\"boolean\": true"));
        assert_eq!(call(&["boolean", "--n", "5", "--k", "7"], "").code, 2);
    }

    #[test]
    fn input_errors_name_the_field() {
        let out = call(&["adjoint", "--input", "-", "--k", "9"], B4);
        assert_eq!(out.code, 2);
        assert!(out.stderr.contains("`k`"), "{}", out.stderr);
        let out = call(&["adjoint", "--input", "-"], B4);
        assert!(out.stderr.contains("`k`: missing"));
        let out = call(&["verify-equivalence", "--input", "-", "--k", "2"], B4);
        assert_eq!(out.code, 2);
        assert!(out.stderr.contains("`seed`"));
        let out = call(&["lattice", "--input", "-"], "{");
        assert!(out.stderr.contains("`input`"));
        assert_eq!(call(&["nonsense"], "").code, 2);
    }

    #[test]
    fn text_format() {
        let out = call(&["charpoly", "--input", "-", "--format", "text"], B4);
        assert_eq!(out.stdout, "t^4 - 4t^3 + 6t^2 - 4t + 1\n");
    }
}
