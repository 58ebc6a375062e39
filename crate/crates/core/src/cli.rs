//! Command-line front end. Reports are deterministic JSON documents.
//!
//! Exit codes: 0 when every certificate passes, 1 when a mathematical check
//! fails, 2 for input errors.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::arith::{Domain, RingMap};
use crate::centroid::{centroid, centroid_ibf_bridge, is_central, Dimodule};
use crate::descent::{
    descend_form, split_check, split_isomorphism, twist, verify_functor_descent, verify_ibf_base_change, Cocycle,
    QuadGalois,
};
use crate::error::Error;
use crate::forms::{killing_form, matrix_trace_form, normalized_sl2_form, sl2_killing_constant, zorn_trace_form};
use crate::ibf::{check_ibf_principle, ibf_module, BilinearForm, PrincipleCertificate};
use crate::module::{sl, Algebra, AlgebraKind, ModuleInvariants};
use crate::multiloop::{graded_form, graded_uniqueness_certificate, killing_over_laurent, multiloop, MultiloopSpec};
use crate::wire::{
    algebra_from_json, algebra_to_json, builtin_algebra, builtin_multiloop, cocycle_from_json, cocycle_to_json,
    matrix_from_json, matrix_to_json, multiloop_from_json, ring_from_name, ring_to_json, scalar_from_str,
    scalar_to_json, vector_to_json,
};

#[derive(Parser, Debug)]
#[command(name = "invform", version, about = "Invariant bilinear forms of nonassociative algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed echoed in the report.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify IBF_R(B).
    Ibf {
        #[arg(long)]
        algebra: String,
    },
    /// Regular and dual centroids, and the centroid/IBF comparison.
    Centroid {
        #[arg(long)]
        algebra: String,
    },
    /// Killing form, compared with the normalized form on sl2.
    Killing {
        #[arg(long)]
        algebra: String,
    },
    /// Properties of a named or supplied form.
    Forms {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        form: String,
    },
    /// Whether one form induces IBF_R(B) ≅ R.
    CheckPrinciple {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        form: String,
    },
    /// Twist by a quadratic Galois cocycle.
    Twist {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        cocycle: String,
        #[arg(long)]
        ext_d: Option<String>,
        /// Form on the source algebra to descend.
        #[arg(long)]
        form: Option<String>,
    },
    /// Functor descent for a twist, or IBF base change with --target-ring.
    VerifyDescent {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        cocycle: Option<String>,
        #[arg(long)]
        ext_d: Option<String>,
        #[arg(long)]
        form: Option<String>,
        #[arg(long)]
        target_ring: Option<String>,
    },
    /// Build a multiloop algebra over k[t, t⁻¹].
    Multiloop {
        #[arg(long)]
        spec: String,
    },
    /// Graded invariant form on a window and its uniqueness.
    Graded {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value = "-3..3", allow_hyphen_values = true)]
        window: String,
    },
}

/// Why a run stopped early.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Check(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::BadSpec(_)
            | Error::BadDomain(_)
            | Error::DomainMismatch { .. }
            | Error::ShapeMismatch(_)
            | Error::UnsupportedDomain(_)
            | Error::UnsupportedMap(_) => Failure::Input(e.to_string()),
            other => Failure::Check(json!({"error": other.to_string()})),
        }
    }
}

type Outcome = std::result::Result<(Value, bool), Failure>;

struct Inputs(Vec<(String, Value)>);

impl Inputs {
    fn record(&mut self, role: &str, source: &str, bytes: &[u8]) {
        let digest: String = Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect();
        self.0.push((role.into(), json!({"source": source, "sha256": digest})));
    }

    fn load_json(&mut self, role: &str, path: &str) -> std::result::Result<Value, Failure> {
        let bytes = std::fs::read(path).map_err(|e| Failure::Input(format!("cannot read {path}: {e}")))?;
        self.record(role, path, &bytes);
        serde_json::from_slice(&bytes).map_err(|e| Failure::Input(format!("{path}: malformed JSON: {e}")))
    }

    fn algebra(&mut self, arg: &str) -> std::result::Result<Algebra, Failure> {
        if Path::new(arg).is_file() {
            let v = self.load_json("algebra", arg)?;
            return Ok(algebra_from_json(&v)?);
        }
        self.record("algebra", arg, arg.as_bytes());
        Ok(builtin_algebra(arg)?)
    }

    fn form(&mut self, b: &Algebra, arg: &str) -> std::result::Result<BilinearForm, Failure> {
        let form = match arg {
            "killing" => killing_form(b)?,
            "trace" => matrix_trace_form(b)?,
            "zorn" => zorn_trace_form(b)?,
            "gamma" => {
                if b.kind() != &AlgebraKind::Sl(2) && b.table() != sl(2, b.domain())?.table() {
                    return Err(Failure::Input("gamma is defined on sl2".into()));
                }
                BilinearForm::new(b, normalized_sl2_form(b.domain())?.gram().clone())?
            }
            path => {
                let v = self.load_json("form", path)?;
                let gram = v.get("gram").unwrap_or(&v);
                BilinearForm::new(b, matrix_from_json(b.domain(), gram)?)?
            }
        };
        self.record("form", arg, arg.as_bytes());
        Ok(form)
    }

    fn cocycle(&mut self, b: &Algebra, arg: &str, ext_d: Option<&str>) -> std::result::Result<Cocycle, Failure> {
        let d = ext_d.map(|s| scalar_from_str(b.domain(), s)).transpose()?;
        if arg == "trivial" {
            let d = d.ok_or_else(|| Failure::Input("the trivial cocycle needs --ext-d".into()))?;
            self.record("cocycle", arg, arg.as_bytes());
            return Ok(Cocycle::trivial(&QuadGalois::new(b.domain(), d)?, b)?);
        }
        let v = self.load_json("cocycle", arg)?;
        Ok(cocycle_from_json(b, &v, d.as_ref())?)
    }

    fn multiloop(&mut self, arg: &str) -> std::result::Result<MultiloopSpec, Failure> {
        if Path::new(arg).is_file() {
            let v = self.load_json("spec", arg)?;
            return Ok(multiloop_from_json(&v)?);
        }
        self.record("spec", arg, arg.as_bytes());
        Ok(builtin_multiloop(arg)?)
    }
}

fn invariants_json(m: &ModuleInvariants, d: &Domain) -> Value {
    json!({
        "torsion": m.torsion.iter().map(|t| scalar_to_json(d, t)).collect::<Vec<_>>(),
        "free_rank": m.free_rank,
        "summary": m.to_string(),
    })
}

fn form_json(f: &BilinearForm) -> Value {
    json!({
        "gram": matrix_to_json(f.gram()),
        "determinant": scalar_to_json(f.domain(), &f.determinant()),
        "symmetric": f.is_symmetric(),
        "invariant": f.is_invariant(),
        "nondegenerate": f.is_nondegenerate(),
        "nonsingular": f.is_nonsingular(),
    })
}

fn principle_json(c: &PrincipleCertificate, d: &Domain) -> Value {
    match c {
        PrincipleCertificate::Holds { ibf, preimage } => json!({
            "holds": true,
            "ibf": invariants_json(ibf, d),
            "preimage": vector_to_json(d, preimage),
        }),
        PrincipleCertificate::Fails { ibf, kernel, cokernel } => json!({
            "holds": false,
            "ibf": invariants_json(ibf, d),
            "kernel": invariants_json(kernel, d),
            "cokernel": invariants_json(cokernel, d),
        }),
    }
}

fn parse_window(s: &str) -> std::result::Result<(i64, i64), Failure> {
    let bad = || Failure::Input(format!("window must look like LO..HI, got {s:?}"));
    let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
    let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn run_command(cmd: &Command, inputs: &mut Inputs) -> Outcome {
    match cmd {
        Command::Ibf { algebra } => {
            let b = inputs.algebra(algebra)?;
            let d = b.domain();
            let ibf = ibf_module(&b);
            let inv = ibf.invariants()?;
            let mut result = json!({"ibf": invariants_json(&inv, d)});
            if d.is_field() {
                let classes: Vec<String> = ibf
                    .basis_classes()?
                    .into_iter()
                    .map(|(p, q)| ibf.generator_name(ibf.generator(p, q)))
                    .collect();
                result["ibf"]["dimension"] = json!(inv.free_rank);
                result["ibf"]["basis_classes"] = json!(classes);
            }
            Ok((result, true))
        }
        Command::Centroid { algebra } => {
            let b = inputs.algebra(algebra)?;
            let regular = centroid(&b, Dimodule::Regular)?;
            let dual = centroid(&b, Dimodule::Dual)?;
            let bridge = centroid_ibf_bridge(&b)?;
            let result = json!({
                "regular": {"rank": regular.rank(), "contains_identity": regular.contains_identity, "central": is_central(&b)?},
                "dual": {"rank": dual.rank()},
                "bridge": {
                    "centroid_rank": bridge.centroid_rank,
                    "hom_rank": bridge.hom_rank,
                    "forms_invariant": bridge.forms_invariant,
                    "lattices_agree": bridge.lattices_agree,
                    "matching": bridge.matching.iter().map(|(_, beta)| matrix_to_json(beta.gram())).collect::<Vec<_>>(),
                },
            });
            Ok((result, bridge.passes()))
        }
        Command::Killing { algebra } => {
            let b = inputs.algebra(algebra)?;
            let k = killing_form(&b)?;
            let mut result = json!({"killing": form_json(&k)});
            if b.kind() == &AlgebraKind::Sl(2) {
                let d = b.domain();
                result["sl2_constant"] = match sl2_killing_constant(d)? {
                    Some(c) => json!({
                        "proportional": true,
                        "constant": scalar_to_json(d, &c.constant),
                        "literature": scalar_to_json(d, &c.literature),
                        "agrees_with_literature": c.agrees,
                    }),
                    None => json!({"proportional": false}),
                };
            }
            Ok((result, true))
        }
        Command::Forms { algebra, form } => {
            let b = inputs.algebra(algebra)?;
            let f = inputs.form(&b, form)?;
            let invariant = f.is_invariant();
            Ok((json!({"form": form_json(&f)}), invariant))
        }
        Command::CheckPrinciple { algebra, form } => {
            let b = inputs.algebra(algebra)?;
            let f = inputs.form(&b, form)?;
            let cert = check_ibf_principle(&f)?;
            Ok((json!({"principle": principle_json(&cert, b.domain())}), cert.holds()))
        }
        Command::Twist {
            algebra,
            cocycle,
            ext_d,
            form,
        } => {
            let a = inputs.algebra(algebra)?;
            let c = inputs.cocycle(&a, cocycle, ext_d.as_deref())?;
            let tf = twist(&a, &c)?;
            let split = split_check(&tf)?;
            let mut result = json!({
                "cocycle": cocycle_to_json(&c),
                "twisted": algebra_to_json(tf.algebra()),
                "embedding": matrix_to_json(tf.embedding()),
                "split_check": split.verified,
            });
            if let Some(p) = split_isomorphism(&tf)? {
                result["split_isomorphism"] = matrix_to_json(&p);
            }
            let mut ok = split.verified;
            if let Some(name) = form {
                let kappa = inputs.form(&a, name)?;
                let kb = descend_form(&kappa, &tf)?;
                let cert = check_ibf_principle(&kb)?;
                ok &= cert.holds() == check_ibf_principle(&kappa)?.holds();
                result["descended_form"] = form_json(&kb);
                result["descended_principle"] = principle_json(&cert, kb.domain());
            }
            Ok((result, ok))
        }
        Command::VerifyDescent {
            algebra,
            cocycle,
            ext_d,
            form,
            target_ring,
        } => {
            let a = inputs.algebra(algebra)?;
            let mut result = json!({});
            let mut ok = true;
            if let Some(target) = target_ring {
                let s = ring_from_name(target)?;
                let alpha = RingMap::canonical(a.domain(), &s)?;
                let cert = verify_ibf_base_change(&a, &alpha)?;
                ok &= cert.isomorphism;
                result["base_change"] = json!({
                    "target": ring_to_json(&s),
                    "source": invariants_json(&cert.source, a.domain()),
                    "tensored": invariants_json(&cert.tensored, &s),
                    "extended": invariants_json(&cert.target, &s),
                    "isomorphism": cert.isomorphism,
                });
            }
            if let Some(c) = cocycle {
                let c = inputs.cocycle(&a, c, ext_d.as_deref())?;
                let tf = twist(&a, &c)?;
                let cert = verify_functor_descent(&tf)?;
                let r = a.domain();
                ok &= cert.passes();
                result["functor_descent"] = json!({
                    "source_ibf": invariants_json(&cert.source_ibf, r),
                    "twisted_ibf": invariants_json(&cert.twisted_ibf, r),
                    "descended": invariants_json(&cert.descended, r),
                    "nu_isomorphism": cert.nu_isomorphism,
                    "action_well_defined": cert.action_well_defined,
                    "action_is_cocycle": cert.action_is_cocycle,
                    "comparison": matrix_to_json(&cert.comparison),
                    "comparison_isomorphism": cert.comparison_isomorphism,
                    "passes": cert.passes(),
                });
                if let Some(name) = form {
                    let kappa = inputs.form(&a, name)?;
                    let kb = descend_form(&kappa, &tf)?;
                    let holds = check_ibf_principle(&kb)?.holds();
                    ok &= holds || !check_ibf_principle(&kappa)?.holds();
                    result["descended_principle"] = json!(holds);
                }
            }
            if target_ring.is_none() && cocycle.is_none() {
                return Err(Failure::Input("verify-descent needs --cocycle or --target-ring".into()));
            }
            Ok((result, ok))
        }
        Command::Multiloop { spec } => {
            let s = inputs.multiloop(spec)?;
            let l = multiloop(&s)?;
            let alg = l.algebra()?;
            let compatible = l.grading_compatible()?;
            let k = killing_over_laurent(&l)?;
            let result = json!({
                "rank": l.rank(),
                "degrees": (0..l.rank()).map(|r| l.degree(r)[0]).collect::<Vec<_>>(),
                "period": s.orders()[0],
                "eigenbasis": matrix_to_json(l.eigenbasis()),
                "algebra": algebra_to_json(alg),
                "grading_compatible": compatible,
                "killing": {"gram": matrix_to_json(k.form.gram()), "graded": k.graded},
            });
            Ok((result, compatible && k.graded))
        }
        Command::Graded { spec, window } => {
            let (lo, hi) = parse_window(window)?;
            let s = inputs.multiloop(spec)?;
            let l = multiloop(&s)?;
            let beta = graded_form(&l)?;
            let w = beta.window(lo, hi)?;
            let u = graded_uniqueness_certificate(&l)?;
            let k = s.algebra().domain();
            let pairings: Vec<Value> = (lo..=hi)
                .map(|lambda| Ok(json!({"degree": lambda, "pairing": matrix_to_json(&beta.pairing(&[lambda])?)})))
                .collect::<std::result::Result<_, Error>>()?;
            let result = json!({
                "window": [lo, hi],
                "formula_holds": w.formula_holds,
                "pairings_nonsingular": w.pairings_nonsingular,
                "periodic": w.periodic,
                "pairings": pairings,
                "uniqueness": {
                    "central": u.central,
                    "ibf": invariants_json(&u.ibf, l.algebra()?.domain()),
                    "principle": u.principle,
                    "degree_zero_is_base_field": u.degree_zero_is_base_field,
                    "dimension": u.dimension,
                    "generator_nonzero": u.generator_nonzero,
                },
                "base_field": ring_to_json(k),
            });
            Ok((result, w.passes() && u.passes()))
        }
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Ibf { .. } => "ibf",
        Command::Centroid { .. } => "centroid",
        Command::Killing { .. } => "killing",
        Command::Forms { .. } => "forms",
        Command::CheckPrinciple { .. } => "check-principle",
        Command::Twist { .. } => "twist",
        Command::VerifyDescent { .. } => "verify-descent",
        Command::Multiloop { .. } => "multiloop",
        Command::Graded { .. } => "graded",
    }
}

/// Runs a parsed command line; returns the report text (if any), diagnostics and the exit code.
pub fn execute(cli: &Cli) -> (Option<String>, Option<String>, i32) {
    let mut inputs = Inputs(Vec::new());
    let outcome = run_command(&cli.command, &mut inputs);
    let (result, status, code) = match outcome {
        Ok((result, true)) => (result, "pass", 0),
        Ok((result, false)) => (result, "fail", 1),
        Err(Failure::Check(result)) => (result, "fail", 1),
        Err(Failure::Input(msg)) => return (None, Some(msg), 2),
    };
    let report = json!({
        "command": command_name(&cli.command),
        "inputs": inputs.0.into_iter().map(|(role, v)| json!({"role": role, "input": v})).collect::<Vec<_>>(),
        "seed": cli.seed,
        "version": env!("CARGO_PKG_VERSION"),
        "status": status,
        "result": result,
    });
    let text = serde_json::to_string_pretty(&report).expect("reports serialize") + "\n";
    (Some(text), None, code)
}

pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (report, diagnostic, code) = execute(&cli);
    if let Some(msg) = diagnostic {
        eprintln!("error: {msg}");
    }
    if let Some(text) = report {
        match &cli.out {
            Some(path) => {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return 2;
                }
            }
            None => print!("{text}"),
        }
    }
    code
}
