//! Command line front end. Exit codes: 0 = success / property holds,
//! 1 = the requested check ran and came out false, 2 = input error.

use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use diptych_cli::format::{self, Document, Payload};
use diptych_core::catalog::{
    butterfly_type, finv_trunc, nabla_trunc, ordinal, upsilon, OrdinalVariant,
};
use diptych_core::conjugation::{
    check_butterfly, check_transversality, cocycle_from_table, cohomologous, conjugate_principal,
    gauge_groupoid, torsor_from_cocycle, universal_activation, wing_orbit_count, ButterflyDiagram,
    Cocycle,
};
use diptych_core::diptych::{
    check_diptych, check_prediptych, classify_square, set_standard_diptych, Diptych, Prediptych,
};
use diptych_core::fincat::{validate_category, Square};
use diptych_core::groupoid::{
    check_groupoid, nerve_exactness_check, orbits, try_symmetric_nerve,
};
use diptych_core::morphism::{
    check_action_law, classify_morphism, induced_groupoid, kernel, two_sided_quotient,
};
use diptych_core::report::ValidationReport;
use diptych_core::setcat::SetSkeleton;
use diptych_core::sweep::run_all;

#[derive(Parser)]
#[command(name = "diptych", version, about = "Finite diptych and groupoid calculus")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Inputs {
    /// Input document file (repeatable where a command takes several).
    #[arg(long = "input", required = true)]
    input: Vec<PathBuf>,
}

#[derive(Args)]
struct Emit {
    /// Write the result document to this file.
    #[arg(long = "emit")]
    emit: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the axioms of each input document; report violations.
    Validate {
        #[command(flatten)]
        inputs: Inputs,
        /// Set-skeleton size bound used by auxiliary constructions.
        #[arg(long, default_value_t = 4)]
        bound: usize,
    },
    /// Classify a commuting square of a diptych document by arrow ids.
    ClassifySquare {
        #[command(flatten)]
        inputs: Inputs,
        top: usize,
        left: usize,
        right: usize,
        bottom: usize,
    },
    /// Print the classification flags of a morphism document.
    ClassifyMorphism {
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Symmetric-nerve level sizes of a groupoid; exactness at full depth.
    Nerve {
        #[command(flatten)]
        inputs: Inputs,
        /// Nerve truncation: levels 0..=n are computed.
        #[arg(long, default_value_t = 3)]
        trunc: usize,
    },
    /// Canonical butterfly of a groupoid: node sizes and coherence check.
    Butterfly {
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Conjugate a principal morphism; emit the butterfly diagram.
    Conjugate {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        emit: Emit,
    },
    /// Universal activation of an i-faithful morphism; emit the actor.
    Activate {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        emit: Emit,
    },
    /// Two-sided quotient of a groupoid by the listed normal arrows.
    Quotient {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        emit: Emit,
        /// Arrow ids of the wide normal subgroupoid.
        arrows: Vec<usize>,
    },
    /// Kernel of an extensor; emit the kernel groupoid.
    Kernel {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        emit: Emit,
    },
    /// Induced groupoid along a base map; emit the result.
    Induce {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        emit: Emit,
        /// Base map: entry k sends new object k to old object p[k].
        p: Vec<usize>,
    },
    /// One input: build the torsor of a cocycle. Two inputs: cohomology test.
    Cocycle {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        emit: Emit,
    },
    /// Gauge groupoid of a free action document.
    Gauge {
        #[command(flatten)]
        inputs: Inputs,
        #[command(flatten)]
        emit: Emit,
    },
    /// Print a catalog structure: ordinal:<n>:<trivial|i|s>, upsilon,
    /// butterfly-type, finv:<n>, nabla:<n>.
    Catalog {
        name: String,
        #[command(flatten)]
        emit: Emit,
    },
    /// Run the full acceptance sweep and print one line per criterion.
    Sweep {
        /// Corpus generator seed.
        #[arg(long, default_value_t = 3353)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &PathBuf) -> Result<Document, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    format::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn one_input(inputs: &Inputs) -> Result<Document, String> {
    if inputs.input.len() != 1 {
        return Err(format!("expected exactly one --input, got {}", inputs.input.len()));
    }
    load(&inputs.input[0])
}

fn want_diptych(d: Document) -> Result<Diptych, String> {
    match d.payload {
        Payload::Diptych(x) => Ok(x),
        p => Err(format!("expected a diptych document, got {}", kind_of(&p))),
    }
}

fn kind_of(p: &Payload) -> &'static str {
    Document { name: None, payload: p.clone() }.kind()
}

fn emit_doc(emit: &Emit, doc: &Document) -> Result<(), String> {
    if let Some(path) = &emit.emit {
        std::fs::write(path, format::serialize(doc))
            .map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(())
}

fn print_report(label: &str, rep: &ValidationReport) -> bool {
    if rep.violations.is_empty() {
        println!("{label}: ok");
        true
    } else {
        for v in &rep.violations {
            println!("{label}: {}: {}", v.code, v.message);
        }
        false
    }
}

fn build_cocycle(p: &Payload) -> Result<Cocycle, String> {
    match p {
        Payload::Cocycle { cover, target, table } => {
            let map: HashMap<(usize, usize, usize), usize> =
                table.iter().map(|(&k, &v)| (k, v)).collect();
            cocycle_from_table(cover, target, &map)
        }
        other => Err(format!("expected a cocycle document, got {}", kind_of(other))),
    }
}

fn run(cmd: Cmd) -> Result<u8, String> {
    match cmd {
        Cmd::Validate { inputs, bound } => {
            let mut all_ok = true;
            for path in &inputs.input {
                let doc = load(path)?;
                let label = path.display().to_string();
                let ok = match &doc.payload {
                    Payload::Category(c) => print_report(&label, &validate_category(c)),
                    Payload::Groupoid(g) => print_report(&label, &check_groupoid(g)),
                    Payload::Diptych(d) => {
                        let _ = bound; // reserved for auxiliary constructions
                        let mut rep = check_prediptych(&d.pre);
                        rep.violations.extend(check_diptych(d).violations);
                        print_report(&label, &rep)
                    }
                    Payload::Morphism(f) => print_report(&label, &f.check()),
                    Payload::Action(a) => print_report(&label, &check_action_law(a)),
                    Payload::Cover(c) => match c.check() {
                        Ok(()) => {
                            println!("{label}: ok");
                            true
                        }
                        Err(e) => {
                            println!("{label}: cover: {e}");
                            false
                        }
                    },
                    Payload::Cocycle { .. } => match build_cocycle(&doc.payload) {
                        Ok(_) => {
                            println!("{label}: ok");
                            true
                        }
                        Err(e) => {
                            println!("{label}: cocycle: {e}");
                            false
                        }
                    },
                    Payload::Butterfly(b) => print_report(&label, &check_butterfly(b)),
                };
                all_ok &= ok;
            }
            Ok(if all_ok { 0 } else { 1 })
        }

        Cmd::ClassifySquare { inputs, top, left, right, bottom } => {
            let d = want_diptych(one_input(&inputs)?)?;
            let cls = classify_square(&d, Square { top, left, right, bottom })
                .map_err(|e| e.to_string())?;
            println!("commutes={}", cls.commutes);
            println!("gpb={}", cls.gpb);
            println!("hi={}", cls.hi);
            println!("hs={}", cls.hs);
            println!("ipb={}", cls.ipb);
            println!("s_exact={}", cls.s_exact);
            println!("spb={}", cls.spb);
            println!("vi={}", cls.vi);
            println!("vs={}", cls.vs);
            Ok(0)
        }

        Cmd::ClassifyMorphism { inputs } => {
            let doc = one_input(&inputs)?;
            let Payload::Morphism(f) = &doc.payload else {
                return Err(format!("expected a morphism document, got {}", doc.kind()));
            };
            let rep = f.check();
            if !rep.violations.is_empty() {
                let v = &rep.violations[0];
                return Err(format!("not a groupoid morphism: {}: {}", v.code, v.message));
            }
            for (name, value) in classify_morphism(f).flags() {
                println!("{name}={value}");
            }
            Ok(0)
        }

        Cmd::Nerve { inputs, trunc } => {
            let doc = one_input(&inputs)?;
            let Payload::Groupoid(g) = &doc.payload else {
                return Err(format!("expected a groupoid document, got {}", doc.kind()));
            };
            let nerve = try_symmetric_nerve(g, trunc + 1)?;
            for (i, level) in nerve.levels.iter().enumerate() {
                println!("level {i}: {}", level.len());
            }
            match nerve_exactness_check(&nerve) {
                Ok(exact) => {
                    println!("exact={exact}");
                    Ok(if exact { 0 } else { 1 })
                }
                // shallower truncations only report level sizes
                Err(_) => Ok(0),
            }
        }

        Cmd::Butterfly { inputs } => {
            let doc = one_input(&inputs)?;
            let Payload::Groupoid(g) = &doc.payload else {
                return Err(format!("expected a groupoid document, got {}", doc.kind()));
            };
            let cb = diptych_core::groupoid::canonical_butterfly(g);
            println!("objects(G)={} arrows(G)={}", g.base_size(), g.n_arrows());
            println!(
                "objects(Delta)={} arrows(Delta)={}",
                cb.delta_g.base_size(),
                cb.delta_g.n_arrows()
            );
            println!(
                "objects(Nabla)={} arrows(Nabla)={}",
                cb.nabla_g.base_size(),
                cb.nabla_g.n_arrows()
            );
            println!(
                "objects(Square)={} arrows(Square)={}",
                cb.square_g.base_size(),
                cb.square_g.n_arrows()
            );
            let rep = diptych_core::groupoid::check_canonical_butterfly(&cb);
            Ok(if print_report("canonical-butterfly", &rep) { 0 } else { 1 })
        }

        Cmd::Conjugate { inputs, emit } => {
            let doc = one_input(&inputs)?;
            let Payload::Morphism(f) = &doc.payload else {
                return Err(format!("expected a morphism document, got {}", doc.kind()));
            };
            let bf = conjugate_principal(f)?;
            let ok = report_butterfly(&bf);
            emit_doc(&emit, &Document::new("conjugate", Payload::Butterfly(bf)))?;
            Ok(if ok { 0 } else { 1 })
        }

        Cmd::Activate { inputs, emit } => {
            let doc = one_input(&inputs)?;
            let Payload::Morphism(f) = &doc.payload else {
                return Err(format!("expected a morphism document, got {}", doc.kind()));
            };
            let univ = universal_activation(f)?;
            println!(
                "objects(H1)={} arrows(H1)={}",
                univ.act.h1.base_size(),
                univ.act.h1.n_arrows()
            );
            let cls = classify_morphism(&univ.act.actor);
            println!("actor={}", cls.actor);
            emit_doc(&emit, &Document::new("activation", Payload::Morphism(univ.act.actor.clone())))?;
            Ok(if cls.actor { 0 } else { 1 })
        }

        Cmd::Quotient { inputs, emit, arrows } => {
            let doc = one_input(&inputs)?;
            let Payload::Groupoid(g) = &doc.payload else {
                return Err(format!("expected a groupoid document, got {}", doc.kind()));
            };
            let mut flags = vec![false; g.n_arrows()];
            for a in arrows {
                if a >= g.n_arrows() {
                    return Err(format!("dangling id: arrow {a}"));
                }
                flags[a] = true;
            }
            let (q, proj) = two_sided_quotient(g, &flags)?;
            println!("objects(Q)={} arrows(Q)={}", q.base_size(), q.n_arrows());
            emit_doc(&emit, &Document::new("quotient", Payload::Morphism(proj)))?;
            Ok(0)
        }

        Cmd::Kernel { inputs, emit } => {
            let doc = one_input(&inputs)?;
            let Payload::Morphism(f) = &doc.payload else {
                return Err(format!("expected a morphism document, got {}", doc.kind()));
            };
            let (k, incl, w) = kernel(f)?;
            println!("objects(K)={} arrows(K)={}", k.base_size(), k.n_arrows());
            println!("normal={}", w.normal);
            println!("pullback={}", w.pullback_verified);
            println!("pushout={}", w.pushout_verified);
            emit_doc(&emit, &Document::new("kernel", Payload::Morphism(incl)))?;
            Ok(if w.normal && w.pullback_verified && w.pushout_verified { 0 } else { 1 })
        }

        Cmd::Induce { inputs, emit, p } => {
            let doc = one_input(&inputs)?;
            let Payload::Groupoid(g) = &doc.payload else {
                return Err(format!("expected a groupoid document, got {}", doc.kind()));
            };
            let (ind, morph) = induced_groupoid(g, &p)?;
            println!("objects={} arrows={}", ind.base_size(), ind.n_arrows());
            emit_doc(&emit, &Document::new("induced", Payload::Morphism(morph)))?;
            Ok(0)
        }

        Cmd::Cocycle { inputs, emit } => match inputs.input.len() {
            1 => {
                let doc = load(&inputs.input[0])?;
                let c = match build_cocycle(&doc.payload) {
                    Ok(c) => c,
                    Err(e) => {
                        println!("cocycle-invalid: {e}");
                        return Ok(1);
                    }
                };
                let (univ, bf) = torsor_from_cocycle(&c)?;
                println!("points(torsor)={}", univ.act.h1.base_size());
                println!("arrows(gauge)={}", bf.gp.n_arrows());
                println!("orbits(torsor)={}", orbits(&univ.act.h1).len());
                emit_doc(&emit, &Document::new("torsor", Payload::Butterfly(bf)))?;
                Ok(0)
            }
            2 => {
                let c1 = build_cocycle(&load(&inputs.input[0])?.payload)?;
                let c2 = build_cocycle(&load(&inputs.input[1])?.payload)?;
                let same = cohomologous(&c1, &c2)?;
                println!("cohomologous={same}");
                Ok(if same { 0 } else { 1 })
            }
            n => Err(format!("cocycle takes one or two --input files, got {n}")),
        },

        Cmd::Gauge { inputs, emit } => {
            let doc = one_input(&inputs)?;
            let Payload::Action(law) = &doc.payload else {
                return Err(format!("expected an action document, got {}", doc.kind()));
            };
            let rep = check_action_law(law);
            if !rep.violations.is_empty() {
                let v = &rep.violations[0];
                return Err(format!("invalid action law: {}: {}", v.code, v.message));
            }
            let (gauge, bf) = gauge_groupoid(law)?;
            println!("objects(G)={} arrows(G)={}", gauge.base_size(), gauge.n_arrows());
            println!("arrows(K)={}", bf.k.n_arrows());
            println!(
                "transverse={}",
                check_transversality(&bf.k, &bf.r_flags, &bf.rp_flags)
            );
            let ok = print_report("butterfly", &check_butterfly(&bf));
            emit_doc(&emit, &Document::new("gauge", Payload::Butterfly(bf)))?;
            Ok(if ok { 0 } else { 1 })
        }

        Cmd::Catalog { name, emit } => {
            let pre = catalog_by_name(&name)?;
            println!("objects={} arrows={}", pre.cat.n_objects(), pre.cat.n_arrows());
            println!(
                "good-monos={} good-epis={}",
                pre.good_monos.iter().filter(|&&b| b).count(),
                pre.good_epis.iter().filter(|&&b| b).count()
            );
            let d = Diptych { pre, products: Default::default() };
            emit_doc(&emit, &Document::new(name, Payload::Diptych(d)))?;
            Ok(0)
        }

        Cmd::Sweep { seed } => {
            let results = run_all(seed);
            let passed = results.iter().filter(|r| r.passed).count();
            for r in &results {
                println!("{r}");
            }
            println!("passed {passed}/{}", results.len());
            Ok(if passed == results.len() { 0 } else { 1 })
        }
    }
}

fn report_butterfly(bf: &ButterflyDiagram) -> bool {
    println!("objects(G)={} arrows(G)={}", bf.g.base_size(), bf.g.n_arrows());
    println!("objects(Gp)={} arrows(Gp)={}", bf.gp.base_size(), bf.gp.n_arrows());
    println!("arrows(K)={}", bf.k.n_arrows());
    let (r_orbits, rp_orbits) = wing_orbit_count(bf);
    println!("orbits(R)={r_orbits} orbits(Rp)={rp_orbits}");
    print_report("butterfly", &check_butterfly(bf))
}

fn catalog_by_name(name: &str) -> Result<Prediptych, String> {
    let parts: Vec<&str> = name.split(':').collect();
    match parts.as_slice() {
        ["upsilon"] => Ok(upsilon()),
        ["butterfly-type"] => Ok(butterfly_type()),
        ["ordinal", n, variant] => {
            let n: usize = n.parse().map_err(|_| format!("bad ordinal size `{n}`"))?;
            let v = match *variant {
                "trivial" => OrdinalVariant::Trivial,
                "i" => OrdinalVariant::I,
                "s" => OrdinalVariant::S,
                other => return Err(format!("unknown ordinal variant `{other}`")),
            };
            ordinal(n, v).map_err(|e| e.to_string())
        }
        ["finv", n] => {
            let n: usize = n.parse().map_err(|_| format!("bad truncation `{n}`"))?;
            finv_trunc(n).map(|t| t.pre).map_err(|e| e.to_string())
        }
        ["nabla", n] => {
            let n: usize = n.parse().map_err(|_| format!("bad truncation `{n}`"))?;
            nabla_trunc(n).map(|t| t.pre).map_err(|e| e.to_string())
        }
        ["set", bound] => {
            let b: usize = bound.parse().map_err(|_| format!("bad bound `{bound}`"))?;
            Ok(set_standard_diptych(&SetSkeleton::with_bound(b)).pre)
        }
        _ => Err(format!("unknown catalog name `{name}`")),
    }
}
