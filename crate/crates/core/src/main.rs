use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use bootcat::graded::Degree;
use bootcat::groups::{self, Bifunctor};
use bootcat::linalg::IntMatrix;
use bootcat::object::{cone, generator_count, kk_groups, tensor_object, HomPartMorphism};
use bootcat::parse::{parse_object, parse_spec_subset};
use bootcat::report::{PropertyOutcome, RunReport};
use bootcat::spectrum::{
    generated_support, in_generated, is_smashing, member, supp, supp_injective, LocalizingSubcat,
};
use bootcat::verify::{run_suite, Suite, VerifyConfig};
use bootcat::BootObject;

#[derive(Parser)]
#[command(
    name = "bootcat",
    version,
    about = "Exact K-theory calculator: KK-groups, tensor products and subcategory classification over Spec Z"
)]
struct Cli {
    /// Emit machine-readable JSON on stdout
    #[arg(long, global = true)]
    json: bool,

    /// Fail (exit 3) when a result component is nonzero but unrepresentable
    #[arg(long, global = true)]
    strict: bool,

    /// Seed for corpus-driven commands
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Prime bound for enumeration-driven checks
    #[arg(long, global = true, default_value_t = 13)]
    prime_bound: u64,

    /// Order bound for the brute-force oracle
    #[arg(long, global = true, default_value_t = 64)]
    max_order: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// KK-groups of a pair of objects
    Kk { a: String, b: String },
    /// K-theory of the tensor product of two objects
    Tensor { a: String, b: String },
    /// Support of an object: points where K(A; F_p) is nonzero
    Support { a: String },
    /// Support via the minimal injective resolution of the K-theory
    Suppz { a: String },
    /// Membership of an object in the localizing class of a subset
    Member {
        a: String,
        /// Subset of Spec Z: "all" or a comma list such as "0,2,3"
        #[arg(long)]
        set: String,
    },
    /// Support generated by a family of objects
    Generates {
        /// Family members (object expressions)
        family: Vec<String>,
        /// Test whether this object lies in the generated class
        #[arg(long)]
        contains: Option<String>,
    },
    /// Whether the localizing class of a subset is smashing
    Smashing {
        #[arg(long)]
        set: String,
    },
    /// Cone of a K-theory morphism given by generator matrices
    Cone {
        source: Option<String>,
        target: Option<String>,
        /// Degree-0 matrix, rows separated by ';', entries by ','
        #[arg(long)]
        f0: Option<String>,
        /// Degree-1 matrix
        #[arg(long)]
        f1: Option<String>,
        /// Shorthand: multiplication by N on the source (target must be omitted)
        #[arg(long)]
        mult: Option<i64>,
    },
    /// Run a verification suite (oracle, uct, kunneth, classification, smashing, support-datum, all)
    Verify {
        suite: String,
        #[arg(long, default_value_t = 200)]
        corpus_size: usize,
    },
    /// Brute-force a bifunctor (hom, ext, tensor, tor) on finite groups
    Oracle { which: String, g: String, h: String },
}

struct Failure {
    message: String,
    code: u8,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure {
            message: message.into(),
            code: 2,
        }
    }
}

fn parse_object_arg(text: &str) -> Result<BootObject, Failure> {
    parse_object(text)
        .map(|e| e.realize())
        .map_err(|e| Failure::usage(format!("in \"{text}\": {e}")))
}

fn parse_set_arg(text: &str) -> Result<bootcat::SpecSubset, Failure> {
    parse_spec_subset(text).map_err(|e| Failure::usage(format!("in set \"{text}\": {e}")))
}

fn parse_matrix_arg(text: &str, rows: usize, cols: usize) -> Result<IntMatrix, Failure> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Ok(IntMatrix::zero(rows, cols));
    }
    let mut entries = Vec::new();
    let mut row_count = 0usize;
    let mut col_count = None;
    for row in trimmed.split(';') {
        let cells: Vec<&str> = row.split(',').map(str::trim).collect();
        match col_count {
            None => col_count = Some(cells.len()),
            Some(c) if c != cells.len() => {
                return Err(Failure::usage(format!("ragged matrix row \"{row}\"")));
            }
            _ => {}
        }
        for cell in cells {
            let v: i64 = cell
                .parse()
                .map_err(|_| Failure::usage(format!("bad matrix entry \"{cell}\"")))?;
            entries.push(num_bigint::BigInt::from(v));
        }
        row_count += 1;
    }
    let col_count = col_count.unwrap_or(0);
    if row_count != rows || col_count != cols {
        return Err(Failure::usage(format!(
            "matrix is {row_count}x{col_count}, expected {rows}x{cols} (target generators x source generators)"
        )));
    }
    Ok(IntMatrix::new(rows, cols, entries))
}

fn run(cli: &Cli) -> Result<(RunReport, u8), Failure> {
    match &cli.command {
        Command::Kk { a, b } => {
            let oa = parse_object_arg(a)?;
            let ob = parse_object_arg(b)?;
            let kk = kk_groups(&oa, &ob);
            let report = RunReport::graded_value("kk", vec![a.clone(), b.clone()], &kk);
            let code = if cli.strict && !report.unrepresentable.is_empty() {
                3
            } else {
                0
            };
            Ok((report, code))
        }
        Command::Tensor { a, b } => {
            let oa = parse_object_arg(a)?;
            let ob = parse_object_arg(b)?;
            let t = tensor_object(&oa, &ob);
            Ok((
                RunReport::graded_group("tensor", vec![a.clone(), b.clone()], t.ktheory()),
                0,
            ))
        }
        Command::Support { a } => {
            let oa = parse_object_arg(a)?;
            Ok((RunReport::set("support", vec![a.clone()], &supp(&oa)), 0))
        }
        Command::Suppz { a } => {
            let oa = parse_object_arg(a)?;
            Ok((
                RunReport::set("suppz", vec![a.clone()], &supp_injective(&oa)),
                0,
            ))
        }
        Command::Member { a, set } => {
            let oa = parse_object_arg(a)?;
            let subset = parse_set_arg(set)?;
            let l = LocalizingSubcat::new(subset);
            let mut inputs = vec![a.clone()];
            inputs.push(set.clone());
            Ok((RunReport::boolean("member", inputs, member(&oa, &l)), 0))
        }
        Command::Generates { family, contains } => {
            let objs: Vec<BootObject> = family
                .iter()
                .map(|t| parse_object_arg(t))
                .collect::<Result<_, _>>()?;
            let support = generated_support(&objs);
            let mut inputs = family.clone();
            match contains {
                None => Ok((RunReport::set("generates", inputs, &support), 0)),
                Some(target) => {
                    inputs.push(target.clone());
                    let ot = parse_object_arg(target)?;
                    let mut report =
                        RunReport::boolean("generates", inputs, in_generated(&ot, &objs));
                    report.properties.push(PropertyOutcome {
                        name: "generated support".to_string(),
                        pass: true,
                        witness: Some(support.to_string()),
                    });
                    Ok((report, 0))
                }
            }
        }
        Command::Smashing { set } => {
            let subset = parse_set_arg(set)?;
            let l = LocalizingSubcat::new(subset);
            Ok((
                RunReport::boolean("smashing", vec![set.clone()], is_smashing(&l)),
                0,
            ))
        }
        Command::Cone {
            source,
            target,
            f0,
            f1,
            mult,
        } => {
            let src_text = source.clone().unwrap_or_else(|| "unit".to_string());
            let src = parse_object_arg(&src_text)?;
            let phi = match mult {
                Some(n) => {
                    if target.is_some() || f0.is_some() || f1.is_some() {
                        return Err(Failure::usage(
                            "--mult takes only a source object; drop the target and matrices",
                        ));
                    }
                    HomPartMorphism::multiplication(&src, *n)
                        .map_err(|e| Failure::usage(e.to_string()))?
                }
                None => {
                    let tgt_text = target
                        .clone()
                        .ok_or_else(|| Failure::usage("cone needs a target object or --mult"))?;
                    let tgt = parse_object_arg(&tgt_text)?;
                    if !src.ktheory().is_fg() || !tgt.ktheory().is_fg() {
                        return Err(Failure::usage(
                            "cones are defined for finitely generated K-theory only",
                        ));
                    }
                    let dims = |o: &BootObject, d: Degree| generator_count(o.ktheory().part(d));
                    let m0 = parse_matrix_arg(
                        f0.as_deref().unwrap_or(""),
                        dims(&tgt, Degree::Zero),
                        dims(&src, Degree::Zero),
                    )?;
                    let m1 = parse_matrix_arg(
                        f1.as_deref().unwrap_or(""),
                        dims(&tgt, Degree::One),
                        dims(&src, Degree::One),
                    )?;
                    HomPartMorphism::new(src.clone(), tgt, m0, m1)
                        .map_err(|e| Failure::usage(e.to_string()))?
                }
            };
            let c = cone(&phi);
            let mut inputs = vec![src_text];
            if let Some(t) = target {
                inputs.push(t.clone());
            }
            if let Some(n) = mult {
                inputs.push(format!("--mult {n}"));
            }
            let mut report = RunReport::graded_group("cone", inputs, c.object.ktheory());
            report.properties.push(PropertyOutcome {
                name: "extension unambiguous".to_string(),
                pass: !c.extension_ambiguous,
                witness: c
                    .extension_ambiguous
                    .then(|| format!("obstruction {}", c.ambiguity_witness)),
            });
            Ok((report, 0))
        }
        Command::Verify { suite, corpus_size } => {
            let suite = Suite::parse(suite).map_err(|e| Failure::usage(e.to_string()))?;
            let cfg = VerifyConfig {
                seed: cli.seed,
                max_order: cli.max_order,
                prime_bound: cli.prime_bound,
                corpus_size: *corpus_size,
            };
            let reports = run_suite(suite, &cfg);
            let all_pass = reports.iter().all(|r| r.all_pass());
            let mut report = RunReport::boolean(
                "verify",
                vec![
                    suite.name().to_string(),
                    format!("seed={}", cfg.seed),
                    format!("prime-bound={}", cfg.prime_bound),
                    format!("max-order={}", cfg.max_order),
                    format!("corpus-size={}", cfg.corpus_size),
                ],
                all_pass,
            );
            for sr in &reports {
                for c in &sr.checks {
                    report.properties.push(PropertyOutcome {
                        name: format!("{}: {} ({} cases)", sr.suite, c.name, c.cases),
                        pass: c.pass,
                        witness: c.counterexample.clone(),
                    });
                }
            }
            let (checks, cases): (usize, usize) = reports
                .iter()
                .fold((0, 0), |(n, c), r| (n + r.checks.len(), c + r.cases()));
            let passed = reports
                .iter()
                .flat_map(|r| &r.checks)
                .filter(|c| c.pass)
                .count();
            report.properties.push(PropertyOutcome {
                name: "summary".to_string(),
                pass: all_pass,
                witness: Some(format!("{passed}/{checks} checks passed, {cases} cases")),
            });
            Ok((report, if all_pass { 0 } else { 1 }))
        }
        Command::Oracle { which, g, h } => {
            let which = match which.as_str() {
                "hom" => Bifunctor::Hom,
                "ext" => Bifunctor::Ext,
                "tensor" => Bifunctor::Tensor,
                "tor" => Bifunctor::Tor,
                other => {
                    return Err(Failure::usage(format!(
                        "unknown bifunctor \"{other}\"; expected hom, ext, tensor or tor"
                    )))
                }
            };
            let finite_arg = |text: &str| -> Result<groups::FGGroup, Failure> {
                let obj = parse_object_arg(text)?;
                let kt = obj.ktheory();
                if !kt.deg1.is_zero() || !kt.deg0.is_finite() {
                    return Err(Failure::usage(format!(
                        "\"{text}\" must denote a finite group in degree zero"
                    )));
                }
                Ok(kt.deg0.fg().clone())
            };
            let fg = finite_arg(g)?;
            let fh = finite_arg(h)?;
            let oracle = groups::oracle_bifunctor(which, &fg, &fh, cli.max_order)
                .map_err(|e| Failure::usage(e.to_string()))?;
            let table = groups::table_bifunctor(which, &fg, &fh);
            let agree = table == groups::GroupValue::Exact(groups::GroupExpr::from(oracle.clone()));
            let mut report = RunReport::boolean(
                "oracle",
                vec![which.name().to_string(), g.clone(), h.clone()],
                agree,
            );
            report.properties.push(PropertyOutcome {
                name: "oracle value".to_string(),
                pass: true,
                witness: Some(groups::GroupExpr::from(oracle).to_string()),
            });
            report.properties.push(PropertyOutcome {
                name: "table value".to_string(),
                pass: true,
                witness: Some(table.to_string()),
            });
            Ok((report, if agree { 0 } else { 1 }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    match run(&cli) {
        Ok((report, code)) => {
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.render_human());
                eprintln!("done in {:.1?}", started.elapsed());
            }
            ExitCode::from(code)
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
