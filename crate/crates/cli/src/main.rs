use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use torres_core::json::{
    analyze, blowup_json, ideal_json, jumping_json, member_json, rat_json, resolve_json, Analysis, CurveDoc, TableDoc,
    SCHEMA,
};
use torres_core::multiplier::valuation_membership;
use torres_core::oracles::{blowup_resolve, howald_jumping_numbers};
use torres_core::parse::{parse_poly, parse_rational};
use torres_core::rat::fmt_rat;
use torres_core::{ideal_presentation, jumping_numbers, Error, Monomial, Rat, ValuationTable};

#[derive(Parser)]
#[command(name = "torres", version, about = "Multiplier ideals of plane curves by toroidal resolution")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Resolve a curve and write its fan tree, decorations and valuation table.
    Resolve {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the jumping numbers below a bound.
    Jumping {
        #[command(flatten)]
        input: Input,
        /// Exclusive upper bound.
        #[arg(long, default_value = "1")]
        max: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Monomial presentation of the multiplier ideal at ξ.
    Ideal {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        xi: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Decide whether a polynomial lies in the multiplier ideal at ξ.
    Member {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        xi: String,
        /// A file, a polynomial in x and y, or a monomial in the element names.
        #[arg(long)]
        poly: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Independent checks by point blowups or Howald's criterion.
    Oracle {
        #[command(subcommand)]
        which: Oracle,
    },
}

#[derive(Subcommand)]
enum Oracle {
    Blowup {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    Howald {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long, default_value = "1")]
        max: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Input {
    #[arg(long)]
    curve: Option<PathBuf>,
    #[arg(long)]
    table: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

enum Failure {
    Input(String),
    Limit(String),
    Invariant(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonRationalCenter { .. } | Error::DepthExceeded(_) | Error::DegenerateFaces => {
                Failure::Limit(e.to_string())
            }
            Error::Invariant(_) | Error::NonRegularFan(..) => Failure::Invariant(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Out = Result<String, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_curve(path: &Path) -> Result<CurveDoc, Failure> {
    let s = read(path)?;
    let doc = if s.trim_start().starts_with('{') { CurveDoc::from_json(&s)? } else { CurveDoc::from_text(&s)? };
    Ok(doc)
}

fn load_table(input: &Input) -> Result<(ValuationTable, Option<Analysis>), Failure> {
    if let Some(c) = &input.curve {
        let a = analyze(&load_curve(c)?)?;
        Ok((a.table.clone(), Some(a)))
    } else {
        let path = input.table.as_ref().expect("clap enforces one input");
        Ok((TableDoc::from_json(&read(path)?)?.to_table()?, None))
    }
}

fn rational(s: &str) -> Result<Rat, Failure> {
    Ok(parse_rational(s)?)
}

fn positive(s: &str, what: &str) -> Result<Rat, Failure> {
    let r = rational(s)?;
    if r <= Rat::from_integer(0.into()) {
        return Err(Failure::Input(format!("{what} must be positive")));
    }
    Ok(r)
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}

fn below(list: Vec<Rat>, max: &Rat) -> Vec<Rat> {
    list.into_iter().filter(|r| r < max).collect()
}

fn lines(list: &[Rat]) -> String {
    list.iter().map(|r| fmt_rat(r) + "\n").collect()
}

fn named_monomial(table: &ValuationTable, s: &str) -> Option<Monomial> {
    let mut m = Monomial::one(table.elements.len());
    for part in s.split('*').map(str::trim) {
        let (name, e) = match part.split_once('^') {
            Some((n, e)) => (n.trim(), e.trim().parse::<u64>().ok()?),
            None => (part, 1),
        };
        let k = table.elements.iter().position(|x| x == name)?;
        m.0[k] += e;
    }
    Some(m)
}

fn cmd_resolve(curve: &Path, out: Option<&Path>) -> Out {
    let a = analyze(&load_curve(curve)?)?;
    let text = pretty(&resolve_json(&a)?);
    match out {
        Some(p) => {
            fs::write(p, text + "\n").map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
            Ok(String::new())
        }
        None => Ok(text + "\n"),
    }
}

fn cmd_jumping(input: &Input, max: &str, format: Format) -> Out {
    let max = positive(max, "--max")?;
    let (table, _) = load_table(input)?;
    let list = below(jumping_numbers(&table, &max), &max);
    Ok(match format {
        Format::Json => pretty(&jumping_json(&list)) + "\n",
        Format::Text => lines(&list),
    })
}

fn cmd_ideal(input: &Input, xi: &str, format: Format) -> Out {
    let xi = positive(xi, "--xi")?;
    let (table, _) = load_table(input)?;
    let p = ideal_presentation(&table, &xi)?;
    Ok(match format {
        Format::Json => pretty(&ideal_json(&p)) + "\n",
        Format::Text => format!("{p}\n"),
    })
}

fn cmd_member(input: &Input, xi: &str, poly: &str, format: Format) -> Out {
    let xi = positive(xi, "--xi")?;
    let text = if Path::new(poly).is_file() { read(Path::new(poly))? } else { poly.to_string() };
    let text = text.trim();
    let (table, analysis) = load_table(input)?;
    let witness = match (named_monomial(&table, text), &analysis) {
        (Some(m), _) => {
            let values: Vec<_> = table
                .rupture
                .iter()
                .map(|r| r.values.iter().zip(&m.0).map(|(v, e)| v * *e).sum())
                .collect();
            let orders: Vec<u64> = table
                .branches
                .iter()
                .map(|b| table.elements.iter().position(|e| e == &b.name).map_or(0, |k| m.0[k]))
                .collect();
            valuation_membership(&table, &values, &orders, &xi)?
        }
        (None, Some(a)) => a.resolution.membership(&parse_poly(text)?, &xi)?.witness,
        (None, None) => {
            return Err(Failure::Input("with --table, --poly must be a monomial in the element names".into()))
        }
    };
    Ok(match format {
        Format::Json => pretty(&member_json(witness.is_none(), witness.as_deref(), &xi)) + "\n",
        Format::Text => match witness {
            None => "true\n".into(),
            Some(w) => format!("false (witness {w})\n"),
        },
    })
}

fn cmd_blowup(curve: &Path, format: Format) -> Out {
    let (c, _) = load_curve(curve)?.to_curve()?;
    let chain = blowup_resolve(&c)?;
    Ok(match format {
        Format::Json => pretty(&blowup_json(&chain)) + "\n",
        Format::Text => {
            let mut s = String::new();
            for d in &chain.divisors {
                s += &format!("E{} ({}, {})\n", d.id + 1, d.lambda, chain.curve_value(d));
            }
            for (l, n) in chain.rupture_data() {
                s += &format!("rupture ({l}, {n})\n");
            }
            s
        }
    })
}

fn cmd_howald(curve: &Path, max: &str, format: Format) -> Out {
    let max = positive(max, "--max")?;
    let (c, _) = load_curve(curve)?.to_curve()?;
    let list = howald_jumping_numbers(&c.equation(), &max)?;
    Ok(match format {
        Format::Json => {
            pretty(&json!({"schema": SCHEMA, "max": rat_json(&max), "jumping_numbers": list.iter().map(rat_json).collect::<Vec<_>>()}))
                + "\n"
        }
        Format::Text => lines(&list),
    })
}

fn run(cli: Cli) -> Out {
    match &cli.cmd {
        Cmd::Resolve { curve, out } => cmd_resolve(curve, out.as_deref()),
        Cmd::Jumping { input, max, format } => cmd_jumping(input, max, *format),
        Cmd::Ideal { input, xi, format } => cmd_ideal(input, xi, *format),
        Cmd::Member { input, xi, poly, format } => cmd_member(input, xi, poly, *format),
        Cmd::Oracle { which: Oracle::Blowup { curve, format } } => cmd_blowup(curve, *format),
        Cmd::Oracle { which: Oracle::Howald { curve, max, format } } => cmd_howald(curve, max, *format),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(s) => {
            print!("{s}");
            ExitCode::SUCCESS
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Limit(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Invariant(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(3)
        }
    }
}
