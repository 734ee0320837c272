use std::fs::File;
use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use meroform::appendix::{self, VerifyOptions};
use meroform::decomp::{
    decompose, decompose_class, format_combination, hecke_combination, parse_lambda, table_style, Convention,
    DecompOptions, Decomposition,
};
use meroform::fkd::{f_class_direct, f_direct, FkdSpec, FourierEngine};
use meroform::numeric::classpoly::{class_polynomial, format_poly};
use meroform::numeric::complex::{bits_for_digits, fmt_float, BigComplex};
use meroform::quadforms::{class_representatives, is_discriminant, Bqf};
use meroform::series::{canonical_form, CanonicalForm};
use meroform::Error;

#[derive(Parser, Debug)]
#[command(name = "meroform", version, about = "Meromorphic modular forms f_{k,D} for negative discriminants")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Working precision in decimal digits
    #[arg(long, global = true, default_value_t = 200)]
    prec: u32,
    /// Number of q-expansion terms (default max(300, 20k))
    #[arg(long, global = true)]
    terms: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output here instead of stdout
    #[arg(short, long, global = true)]
    output: Option<String>,
    /// lattice: the sum as defined; printed: (−1)^k times it
    #[arg(long, global = true, default_value = "lattice")]
    convention: String,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// q-expansion of E2, E4, E6, Delta or j
    Series { name: String },
    /// Reduced forms of discriminant D
    Classes {
        #[arg(short = 'D', allow_hyphen_values = true)]
        d: i64,
        /// Include imprimitive forms
        #[arg(long)]
        all: bool,
    },
    /// Class polynomial H_D(X)
    Classpoly {
        #[arg(short = 'D', allow_hyphen_values = true)]
        d: i64,
    },
    /// Fourier coefficients r = 0..rmax as r, coefficient, log10 error bound
    Fourier {
        #[arg(short)]
        k: u32,
        #[arg(short = 'D', allow_hyphen_values = true)]
        d: i64,
        #[arg(long, default_value_t = 10)]
        rmax: u64,
        /// Report c_r = π^k × coefficient
        #[arg(long)]
        raw: bool,
        /// Largest a summed
        #[arg(long)]
        a_limit: Option<u64>,
    },
    /// f_{k,D}(z) by direct summation
    DirectEval {
        #[arg(short)]
        k: u32,
        #[arg(short = 'D', allow_hyphen_values = true)]
        d: i64,
        /// Point as "x,y" for z = x + iy
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Restrict to one class, given as a,b,c
        #[arg(long)]
        class: Option<String>,
    },
    /// Algebraic part plus cusp remainder of f_{k,D}
    Decompose {
        #[arg(short)]
        k: u32,
        #[arg(short = 'D', allow_hyphen_values = true)]
        d: i64,
        /// Decompose the class sum f_{k,D,A} for the form a,b,c
        #[arg(long)]
        class: Option<String>,
    },
    /// f_{k,D}|Σ λ_n T_n
    Hecke {
        #[arg(short)]
        k: u32,
        #[arg(short = 'D', allow_hyphen_values = true)]
        d: i64,
        /// λ_1,λ_2,...
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Reproduce the worked examples for D = −3
    VerifyAppendix {
        /// Only these checks (comma list of 1..8)
        #[arg(long)]
        only: Option<String>,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Precision(String),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Precision(_) | Error::Unreachable { .. } | Error::Unrecognized(_) | Error::InsufficientTruncation { .. } => {
                Failure::Precision(e.to_string())
            }
            Error::Inconsistent(_) => Failure::Mismatch(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

fn check_kd(k: u32, d: i64) -> Result<(), Failure> {
    if k < 2 {
        return Err(Failure::Usage(format!("k must be at least 2, got {k}")));
    }
    check_d(d)
}

fn check_d(d: i64) -> Result<(), Failure> {
    if !is_discriminant(d) {
        return Err(Failure::Usage(format!("{d} is not a negative discriminant (need D < 0, D = 0,1 mod 4)")));
    }
    Ok(())
}

fn parse_point(s: &str, bits: u32) -> Result<BigComplex, Failure> {
    let v: Vec<f64> = s.split(',').map(|t| t.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| Failure::Usage(format!("bad point {s:?}")))?;
    if v.len() != 2 || v[1] <= 0.0 {
        return Err(Failure::Usage(format!("point must be x,y with y > 0, got {s:?}")));
    }
    Ok(BigComplex::from_f64(bits, v[0], v[1]))
}

fn decomposition_text(label: &str, d: &Decomposition) -> String {
    let mut s = format!("{label} ({} convention, {:?} normalization)\n", d.convention.name(), d.normalization);
    s.push_str(&format!("algebraic: {}\n", table_style(&d.algebraic).unwrap_or_else(|| d.algebraic.expr().to_string())));
    if let Some(c) = &d.class_coeffs {
        for (m, h) in c {
            s.push_str(&format!("c_{m} = {h}\n"));
        }
    }
    for r in &d.remainder {
        s.push_str(&format!("cusp q^{}: {} (err 1e{:.0})\n", r.r, fmt_float(&r.value, 30), r.err_log10.ceil()));
    }
    for g in &d.guards {
        s.push_str(&format!("guard q^{}: {}\n", g.r, if g.ok { "ok" } else { "MISMATCH" }));
    }
    s.push_str(&format!("remainder_zero: {}\n", d.remainder_zero));
    s
}

fn run(cli: &Cli) -> Outcome {
    if cli.prec < 30 {
        return Err(Failure::Usage(format!("--prec must be at least 30, got {}", cli.prec)));
    }
    // printing a series needs no truncation headroom
    let min_terms = if matches!(cli.command, Command::Series { .. }) { 1 } else { 10 };
    if cli.terms.is_some_and(|t| t < min_terms) {
        return Err(Failure::Usage(format!("--terms must be at least {min_terms}")));
    }
    let convention: Convention = cli.convention.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
    let bits = bits_for_digits(cli.prec);
    match &cli.command {
        Command::Series { name } => {
            let form: CanonicalForm = name.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
            let s = canonical_form(form, cli.terms.unwrap_or(300));
            Ok(match cli.format {
                Format::Json => s.to_json().to_string(),
                Format::Tsv => s.terms().map(|(e, c)| format!("{e}\t{c}")).collect::<Vec<_>>().join("\n"),
                Format::Text => s.to_string(),
            })
        }
        Command::Classes { d, all } => {
            check_d(*d)?;
            let forms = class_representatives(*d, !all)?;
            Ok(match cli.format {
                Format::Json => json!({"D": d, "h": forms.len(), "forms": forms.iter().map(|f| [f.a, f.b, f.c]).collect::<Vec<_>>()}).to_string(),
                _ => forms.iter().map(|f| f.to_string()).collect::<Vec<_>>().join("\n"),
            })
        }
        Command::Classpoly { d } => {
            check_d(*d)?;
            let p = class_polynomial(*d)?;
            Ok(match cli.format {
                Format::Json => json!({"D": d, "coeffs": p.iter().map(|c| c.to_string()).collect::<Vec<_>>()}).to_string(),
                _ => format_poly(&p),
            })
        }
        Command::Fourier { k, d, rmax, raw, a_limit } => {
            check_kd(*k, *d)?;
            let mut eng = FourierEngine::new(FkdSpec::new(*k, *d)?, cli.prec);
            eng.raw = *raw;
            let rs: Vec<u64> = (1..=*rmax).collect();
            let coeffs = eng.best_effort(&rs, 10f64.powi(-(cli.prec as i32)), *a_limit);
            let sign = convention.sign(*k);
            let mut rows = vec![(0u64, "0".to_string(), "-inf".to_string())];
            for c in coeffs {
                // significant digits down to the certified error
                let mag = c.value.to_f64().abs().max(1e-300).log10().floor() + 1.0;
                let shown = (mag - c.err_log10).clamp(1.0, cli.prec as f64) as usize + 1;
                rows.push((c.r, fmt_float(&(c.value * sign), shown), format!("{}", c.err_log10.ceil() as i64)));
            }
            Ok(match cli.format {
                Format::Json => json!(rows.iter().map(|(r, v, e)| json!({"r": r, "value": v, "err_exp": e})).collect::<Vec<_>>()).to_string(),
                _ => rows.iter().map(|(r, v, e)| format!("{r}\t{v}\t{e}")).collect::<Vec<_>>().join("\n"),
            })
        }
        Command::DirectEval { k, d, z, tol, class } => {
            check_kd(*k, *d)?;
            let z = parse_point(z, bits)?;
            let v = match class {
                Some(c) => {
                    let f: Bqf = c.parse()?;
                    if f.disc() != *d {
                        return Err(Failure::Usage(format!("{f} has discriminant {}", f.disc())));
                    }
                    f_class_direct(*k, &f, &z, *tol)?
                }
                None => f_direct(&FkdSpec::new(*k, *d)?, &z, *tol)?,
            };
            let value = v.value.scale_i64(convention.sign(*k));
            Ok(match cli.format {
                Format::Json => json!({
                    "re": fmt_float(&value.re, 30), "im": fmt_float(&value.im, 30),
                    "a_max": v.a_max, "tail_bound": v.tail_bound,
                })
                .to_string(),
                Format::Tsv => format!("{}\t{}\t{}\t{:e}", fmt_float(&value.re, 30), fmt_float(&value.im, 30), v.a_max, v.tail_bound),
                Format::Text => format!("{}\n(a ≤ {}, tail ≤ {:.1e})", value.to_string_digits(30), v.a_max, v.tail_bound),
            })
        }
        Command::Decompose { k, d, class } => {
            check_kd(*k, *d)?;
            if let Some(c) = class {
                let f: Bqf = c.parse()?;
                if f.disc() != *d {
                    return Err(Failure::Usage(format!("{f} has discriminant {}", f.disc())));
                }
                let cd = decompose_class(*k, &f, cli.prec, convention)?;
                let alg = table_style(&cd.algebraic).unwrap_or_else(|| cd.algebraic.expr().to_string());
                return Ok(match cli.format {
                    Format::Json => json!({
                        "k": k, "D": d, "class": [cd.form.a, cd.form.b, cd.form.c],
                        "algebraic": cd.algebraic.expr().to_string(),
                        "coeffs_H": cd.coeffs.iter().map(|(m, h)| json!([m, h.coord_strings()])).collect::<Vec<_>>(),
                    })
                    .to_string(),
                    _ => {
                        let mut s = format!("f_{{{k},{d},{}}} algebraic part: {alg}\n", cd.form);
                        for (m, h) in &cd.coeffs {
                            s.push_str(&format!("c_{m} = {h}\n"));
                        }
                        s
                    }
                });
            }
            let opts = DecompOptions { digits: cli.prec, convention, ..Default::default() };
            let dec = decompose(*k, *d, &opts)?;
            let out = match cli.format {
                Format::Json => dec.to_json().to_string(),
                _ => decomposition_text(&format!("f_{{{k},{d}}}"), &dec),
            };
            if dec.guards.iter().any(|g| !g.ok) {
                return Err(Failure::Mismatch(format!("{out}\nremainder is not a cusp form within the error bounds")));
            }
            Ok(out)
        }
        Command::Hecke { k, d, lambda } => {
            check_kd(*k, *d)?;
            let lambda = parse_lambda(lambda).map_err(|e| Failure::Usage(e.to_string()))?;
            let opts = DecompOptions { digits: cli.prec, convention, ..Default::default() };
            let h = hecke_combination(*k, *d, &lambda, &opts)?;
            let comparison = if *k == 6 && *d == -3 && lambda == [24, 1] && convention == Convention::Lattice {
                Some(h.compare_with(&appendix::printed_hecke_form(), "poles of f_{6,-12} at i√3 are absent from the printed form")?)
            } else {
                None
            };
            let out = match cli.format {
                Format::Json => {
                    let mut v = h.to_json();
                    if let Some(c) = &comparison {
                        v["printed_comparison"] = json!({
                            "printed": c.printed, "agrees": c.agrees,
                            "first_difference": c.first_difference.as_ref().map(|(e, a, b)| json!([e, a, b])),
                            "note": c.note,
                        });
                    }
                    v.to_string()
                }
                _ => {
                    let mut s = format!("λ = {lambda:?}; obstruction {}\n", if h.obstruction.passes() { "passes" } else { "fails" });
                    s.push_str(&format!("f|φ_λ = {}\n", format_combination(*k, &h.constituents)));
                    if let Some(v) = &h.cusp_algebraic {
                        s.push_str(&format!("cusp coefficients (exact): {}\n", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")));
                    }
                    s.push_str(&decomposition_text("f|φ_λ", &h.decomposition));
                    if let Some(c) = &comparison {
                        match &c.first_difference {
                            None => s.push_str(&format!("agrees with printed {}\n", c.printed)),
                            Some((e, a, b)) => s.push_str(&format!("differs from printed {} at q^{e}: {a} vs {b} ({})\n", c.printed, c.note)),
                        }
                    }
                    s
                }
            };
            if h.obstruction.passes() && !h.decomposition.remainder_zero {
                return Err(Failure::Mismatch(format!("{out}\nremainder does not vanish although the obstruction passes")));
            }
            Ok(out)
        }
        Command::VerifyAppendix { only, inject_fault } => {
            let only: Vec<u32> = match only {
                Some(s) => s.split(',').map(|t| t.trim().parse()).collect::<Result<_, _>>().map_err(|_| Failure::Usage(format!("bad --only {s:?}")))?,
                None => Vec::new(),
            };
            let checks = appendix::run(&VerifyOptions { digits: cli.prec, inject_fault: *inject_fault }, &only);
            let text = appendix::report(&checks);
            if checks.iter().all(|c| c.pass) {
                Ok(text)
            } else {
                Err(Failure::Mismatch(text))
            }
        }
    }
}

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.output {
        Some(path) => {
            let mut f = File::create(path)?;
            writeln!(f, "{text}")
        }
        None => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{text}")
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("MEROFORM_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        // fails only if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let (code, text) = match run(&cli) {
        Ok(t) => (0, t),
        Err(Failure::Mismatch(t)) => (1, t),
        Err(Failure::Usage(t)) => {
            eprintln!("error: {t}");
            return ExitCode::from(2);
        }
        Err(Failure::Precision(t)) => {
            eprintln!("precision failure: {t}");
            return ExitCode::from(3);
        }
    };
    match emit(&cli, &text) {
        // reader went away (e.g. `| head`)
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
        Ok(()) => {}
    }
    ExitCode::from(code)
}
