use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use diagrammar::cat::RegularGrammar;
use diagrammar::dependency::DependencyGrammar;
use diagrammar::formats::{self, JsonScalar};
use diagrammar::hypergraph::HyperDiagram;
use diagrammar::monoidal::{tree_to_diagram, Diagram, Ty};
use diagrammar::num_complex::Complex64;
use diagrammar::operad::Cfg;
use diagrammar::pregroup::{is_contraction_only, PregroupGrammar};
use diagrammar::rigid::{self, RBox, RDiagram, RigidOb};
use diagrammar::tensor::TensorNet;
use diagrammar::Error;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "diagrammar",
    version,
    about = "Parse, normalize and evaluate string diagrams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a sentence with a grammar file (.rg, .cfg, .pg or .dep).
    Parse {
        #[arg(long)]
        grammar: String,
        #[arg(long)]
        sentence: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Remove snakes and put a diagram in interchanger normal form.
    Normalize {
        file: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Evaluate a diagram under a tensor functor, or contract a tensor net.
    Eval {
        file: String,
        #[arg(long)]
        functor: Option<String>,
        #[arg(long, value_enum)]
        semiring: Option<Semiring>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Report structural predicates of a diagram.
    Check { file: String },
    /// Print a diagram or a tensor net in DOT.
    Dot { file: String },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Semiring {
    Bool,
    Nat,
    Real,
    Complex,
}

enum Failure {
    /// The sentence is not in the language of the grammar.
    Ungrammatical(String),
    /// The input could not be read, parsed or interpreted.
    Malformed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Malformed(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut buf = String::new();
        io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Failure::Malformed(format!("cannot read stdin: {e}")))?;
        return Ok(buf);
    }
    fs::read_to_string(path).map_err(|e| Failure::Malformed(format!("cannot read {path}: {e}")))
}

fn read_json(path: &str) -> Result<Value, Failure> {
    let text = read_input(path)?;
    formats::parse_json(&text).map_err(|e| Failure::Malformed(format!("{path}: {e}")))
}

fn render(d: &RDiagram, format: Format) -> String {
    match format {
        Format::Json => formats::write_json(&formats::diagram_to_json(d)),
        Format::Dot => formats::diagram_to_dot(d),
        Format::Text => format!("{d}\n"),
    }
}

/// A path of a regular grammar as a diagram on one wire.
fn path_diagram(arrow: &diagrammar::cat::Arrow) -> RDiagram {
    let ob = |x: &diagrammar::cat::Ob| Ty::new(vec![RigidOb::new(x.name())]);
    arrow
        .boxes()
        .iter()
        .fold(Diagram::id(ob(arrow.dom())), |acc, b| {
            let step = RBox::gen(b.name.clone(), ob(&b.dom), ob(&b.cod)).diagram();
            acc.then(&step).expect("consecutive edges of a path")
        })
}

fn parse(grammar: &str, sentence: &str, format: Format) -> Outcome {
    let src = read_input(grammar)?;
    let words: Vec<&str> = sentence.split_whitespace().collect();
    let reject = || Failure::Ungrammatical(format!("{sentence:?} is not grammatical"));
    let extension = Path::new(grammar)
        .extension()
        .and_then(|e| e.to_str())
        .unwrap_or("");
    let diagram = match extension {
        "rg" => {
            let g = RegularGrammar::from_text(&src)?;
            path_diagram(&g.parse(&words).ok_or_else(reject)?)
        }
        "cfg" => {
            let tree = Cfg::from_text(&src)?.parse(&words)?.ok_or_else(reject)?;
            if format == Format::Text {
                return Ok(format!("{tree}\n"));
            }
            rigid::from_monoidal(&tree_to_diagram(&tree, false))
        }
        "pg" => PregroupGrammar::from_text(&src)?
            .parse(&words)
            .ok_or_else(reject)?,
        "dep" => DependencyGrammar::from_text(&src)?
            .to_pregroup()
            .parse(&words)
            .ok_or_else(reject)?,
        other => {
            return Err(Failure::Malformed(format!(
                "unknown grammar kind {other:?}: expected .rg, .cfg, .pg or .dep"
            )))
        }
    };
    Ok(render(&diagram, format))
}

fn normalize(file: &str, format: Format) -> Outcome {
    let d = formats::diagram_from_json(&read_json(file)?)?;
    Ok(render(&rigid::normal_form(&d), format))
}

fn eval_as<S: JsonScalar>(doc: &Value, functor: Option<&Value>, format: Format) -> Outcome {
    let tensor = if doc.get("vertices").is_some() {
        let net: TensorNet<S> = formats::net_from_json(doc)?;
        let order = net.greedy_order();
        diagrammar::tensor::Tensor::scalar(net.contract_with_order(&order)?)
    } else {
        let functor = functor
            .ok_or_else(|| Failure::Malformed("evaluating a diagram needs --functor".into()))?;
        let f = formats::functor_from_json::<S>(functor)?;
        f.apply(&formats::diagram_from_json(doc)?)?
    };
    let data: Vec<Value> = tensor.data().iter().map(|&x| x.to_json()).collect();
    Ok(match format {
        Format::Json => format!("{}\n", Value::Array(data)),
        Format::Text => format!(
            "{} -> {}: {}\n",
            tensor.dom(),
            tensor.cod(),
            serde_json::to_string(&data).expect("values serialize")
        ),
        Format::Dot => return Err(Failure::Malformed("eval has no dot output".into())),
    })
}

fn eval(file: &str, functor: Option<&str>, semiring: Option<Semiring>, format: Format) -> Outcome {
    let doc = read_json(file)?;
    let functor = functor.map(read_json).transpose()?;
    let named = functor.as_ref().unwrap_or(&doc);
    let semiring = match semiring {
        Some(s) => s,
        None => match formats::semiring_of(named) {
            "bool" => Semiring::Bool,
            "nat" => Semiring::Nat,
            "real" => Semiring::Real,
            "complex" => Semiring::Complex,
            other => return Err(Failure::Malformed(format!("unknown semiring {other:?}"))),
        },
    };
    let functor = functor.as_ref();
    match semiring {
        Semiring::Bool => eval_as::<bool>(&doc, functor, format),
        Semiring::Nat => eval_as::<u64>(&doc, functor, format),
        Semiring::Real => eval_as::<f64>(&doc, functor, format),
        Semiring::Complex => eval_as::<Complex64>(&doc, functor, format),
    }
}

fn check(file: &str) -> Outcome {
    let d = formats::diagram_from_json(&read_json(file)?)?;
    let nf = rigid::normal_form(&d);
    let mut report = json!({
        "boxes": d.len(),
        "width": d.width(),
        "closed": d.dom().is_empty() && d.cod().is_empty(),
        "contraction_only": is_contraction_only(&d),
        "normal_form": nf == d,
    });
    if let Ok(h) = HyperDiagram::upgrade(&d) {
        let s = h.structure();
        report["monogamous"] = s.monogamous.into();
        report["bijective"] = s.bijective.into();
        report["progressive"] = s.progressive.into();
    }
    Ok(formats::write_json(&report))
}

fn dot(file: &str) -> Outcome {
    let doc = read_json(file)?;
    if doc.get("vertices").is_some() {
        let net: TensorNet<f64> = formats::net_from_json(&doc)?;
        return Ok(formats::net_to_dot(&net));
    }
    Ok(formats::diagram_to_dot(&formats::diagram_from_json(&doc)?))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Parse {
            grammar,
            sentence,
            format,
        } => parse(grammar, sentence, *format),
        Command::Normalize { file, format } => normalize(file, *format),
        Command::Eval {
            file,
            functor,
            semiring,
            format,
        } => eval(file, functor.as_deref(), *semiring, *format),
        Command::Check { file } => check(file),
        Command::Dot { file } => dot(file),
    };
    match outcome {
        Ok(out) => {
            let _ = io::stdout().write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(Failure::Ungrammatical(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Malformed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
