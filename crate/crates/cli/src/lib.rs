//! Command-line front end for `kvcert`.
//!
//! Exit codes: `0` success (for `check`, a verified counterexample), `3`
//! hypotheses evaluated and not satisfied, `2` usage or input error, `1`
//! internal invariant failure.

use std::fs;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use serde_json::{json, Value};

use kvcert::carlitz::{beta_detailed, beta_mod, gamma_detailed, gamma_mod, ExactBudget};
use kvcert::fields::{field_from_q, FieldSpec};
use kvcert::lfunc::{LContext, TildeBudget};
use kvcert::polyring::{Poly, ResidueCtx, Var};
use kvcert::search::{
    census, hunt, run_table1, write_jsonl, ExponentChoice, RunHeader, SearchConfig,
};
use kvcert::vandiver::{check_kv, verify, verify_paper, Certificate};
use kvcert::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVARIANT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOT_SATISFIED: i32 = 3;

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct CommandOutcome {
    pub code: i32,
    pub text: String,
    pub json: Option<Value>,
}

impl CommandOutcome {
    fn ok(text: String, json: Option<Value>) -> CommandOutcome {
        CommandOutcome {
            code: EXIT_OK,
            text,
            json,
        }
    }

    fn error(err: &Error) -> CommandOutcome {
        let code = match err {
            Error::Invariant(_) | Error::Mismatch(_) => EXIT_INVARIANT,
            _ => EXIT_USAGE,
        };
        CommandOutcome {
            code,
            text: format!("error: {err}"),
            json: None,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "kvcert",
    version,
    about = "Certify Kummer-Vandiver counterexamples over F_q[T]"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct FieldArgs {
    /// Field size, a prime power.
    #[arg(long)]
    q: u64,
    /// Modulus of F_q over F_p in the generator `a`, e.g. "a^2+a+1".
    #[arg(long)]
    modulus: Option<String>,
}

impl FieldArgs {
    fn field(&self) -> Result<Arc<FieldSpec>, Error> {
        field_from_q(self.q, self.modulus.as_deref())
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Describe F_q.
    Field {
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Bernoulli-Goss polynomial beta(n), exactly or modulo a prime.
    Beta(SumArgs),
    /// gamma(n) = sum_a i(a) a^n, exactly or modulo a prime.
    Gamma(SumArgs),
    /// L-value at X = 1 of a power of the Teichmuller character.
    Lvalue {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long = "P")]
        prime: String,
        #[arg(long)]
        n: String,
        #[arg(long, default_value_t = kvcert::lfunc::DEFAULT_PRECISION)]
        precision: u32,
        /// Twist by psi^J.
        #[arg(long, conflicts_with = "tilde")]
        psi: Option<u64>,
        /// Value over the Artin-Schreier extension.
        #[arg(long)]
        tilde: bool,
    },
    /// Evaluate the counterexample criterion for (P, n).
    Check {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long = "P")]
        prime: String,
        #[arg(long)]
        n: String,
        #[arg(long)]
        json: bool,
    },
    /// All primes of degree d with i(P) != 0, tested at n = m(q^d-1)/(q-1).
    Census {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        m: u64,
    },
    /// Congruence counts for random primes at n = (q^d-1)/2.
    Table1 {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        degrees: Vec<usize>,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample primes and emit counterexample certificates.
    Hunt {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        d: usize,
        #[arg(long, required_unless_present = "n", conflicts_with = "n")]
        m: Option<u64>,
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check every certificate in a JSONL run file.
    Verify { file: PathBuf },
    /// Replay the two built-in worked examples.
    VerifyPaper,
}

#[derive(Args, Debug)]
struct SumArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    n: String,
    /// Reduce modulo this monic irreducible polynomial.
    #[arg(long = "mod")]
    modulus_poly: Option<String>,
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, S>(argv: I) -> CommandOutcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => EXIT_OK,
                _ => EXIT_USAGE,
            };
            return CommandOutcome {
                code,
                text: e.to_string(),
                json: None,
            };
        }
    };
    dispatch(cli.command).unwrap_or_else(|e| CommandOutcome::error(&e))
}

fn parse_n(text: &str) -> Result<BigUint, Error> {
    BigUint::parse_bytes(text.trim().as_bytes(), 10)
        .filter(|n| *n > BigUint::ZERO)
        .ok_or_else(|| Error::Precondition(format!("n = {text} is not a positive integer")))
}

fn parse_prime(text: &str, field: &Arc<FieldSpec>) -> Result<Poly, Error> {
    let p = Poly::parse(text, field, Var::T)?;
    if p.is_constant() {
        return Err(Error::Constant);
    }
    if !p.is_irreducible()? {
        return Err(Error::Reducible(p.to_string()));
    }
    Ok(p)
}

fn field_line(field: &FieldSpec) -> String {
    match field.modulus_text() {
        Some(g) => format!("F_{} = F_{}[a]/({g})", field.q(), field.p()),
        None => format!("F_{}", field.q()),
    }
}

fn dispatch(command: Command) -> Result<CommandOutcome, Error> {
    match command {
        Command::Field { field } => cmd_field(&field.field()?),
        Command::Beta(args) => cmd_sum(&args, false),
        Command::Gamma(args) => cmd_sum(&args, true),
        Command::Lvalue {
            field,
            prime,
            n,
            precision,
            psi,
            tilde,
        } => {
            let field = field.field()?;
            cmd_lvalue(
                &parse_prime(&prime, &field)?,
                &parse_n(&n)?,
                precision,
                psi,
                tilde,
            )
        }
        Command::Check {
            field,
            prime,
            n,
            json,
        } => {
            let field = field.field()?;
            cmd_check(&parse_prime(&prime, &field)?, &parse_n(&n)?, json)
        }
        Command::Census { field, d, m } => cmd_census(&field.field()?, d, m),
        Command::Table1 {
            field,
            degrees,
            samples,
            seed,
            threads,
            out,
        } => cmd_table1(&field.field()?, &degrees, samples, seed, threads, out),
        Command::Hunt {
            field,
            d,
            m,
            n,
            samples,
            seed,
            threads,
            out,
        } => {
            let exponent = match (m, n) {
                (Some(m), _) => ExponentChoice::M(m),
                (None, Some(n)) => ExponentChoice::N(parse_n(&n)?.to_string()),
                (None, None) => return Err(Error::Config("one of --m or --n is required".into())),
            };
            let config = SearchConfig::new(field.field()?, d, exponent, samples, seed)?
                .with_threads(threads);
            cmd_hunt(&config, out)
        }
        Command::Verify { file } => cmd_verify(&file),
        Command::VerifyPaper => cmd_verify_paper(),
    }
}

fn cmd_field(field: &Arc<FieldSpec>) -> Result<CommandOutcome, Error> {
    let elems: Vec<String> = field.enumerate().map(|e| field.format_elem(e)).collect();
    let traces: Vec<String> = field
        .enumerate()
        .map(|e| format!("Tr({}) = {}", field.format_elem(e), field.trace(e)))
        .collect();
    let mut text = format!(
        "{}\np = {}, s = {}, q = {}\n",
        field_line(field),
        field.p(),
        field.s(),
        field.q()
    );
    if field.q() <= 64 {
        text.push_str(&format!(
            "elements: {}\n{}\n",
            elems.join(", "),
            traces.join("\n")
        ));
    }
    let json = json!({"q": field.q(), "p": field.p(), "s": field.s(), "field_modulus": field.modulus_text()});
    Ok(CommandOutcome::ok(text.trim_end().to_string(), Some(json)))
}

fn cmd_sum(args: &SumArgs, weighted: bool) -> Result<CommandOutcome, Error> {
    let field = args.field.field()?;
    let n = parse_n(&args.n)?;
    let name = if weighted { "gamma" } else { "beta" };
    let q1 = field.q() as u64 - 1;
    if !weighted && (&n % q1) == BigUint::ZERO {
        return Err(Error::Precondition(format!(
            "n = {n} divisible by q-1 = {q1}"
        )));
    }
    let (value, note) = match &args.modulus_poly {
        Some(text) => {
            let prime = parse_prime(text, &field)?;
            let ctx = ResidueCtx::new(&prime)?;
            let v = if weighted {
                gamma_mod(&n, &ctx)?
            } else {
                beta_mod(&n, &ctx)?
            };
            (v, format!(" mod {prime}"))
        }
        None => {
            let small =
                u64::try_from(&n).map_err(|_| Error::Budget("exact sums need n < 2^64".into()))?;
            let r = if weighted {
                gamma_detailed(&field, small, ExactBudget::default())?
            } else {
                beta_detailed(&field, small, ExactBudget::default())?
            };
            let note = if r.extended {
                format!(" (extended to m = {})", r.last_stratum)
            } else {
                String::new()
            };
            (r.value, note)
        }
    };
    let text = format!("{name}({n}){note} = {value}");
    let json = json!({"q": field.q(), "field_modulus": field.modulus_text(), "n": n.to_string(), "mod": args.modulus_poly.as_ref().map(|_| note.trim_start_matches(" mod ").to_string()), name: value.to_string()});
    Ok(CommandOutcome::ok(text, Some(json)))
}

fn cmd_lvalue(
    prime: &Poly,
    n: &BigUint,
    k: u32,
    psi: Option<u64>,
    tilde: bool,
) -> Result<CommandOutcome, Error> {
    let l = LContext::new(prime, n, k)?;
    let w = l.witt();
    let (label, text, zero) = if tilde {
        let v = l.lvalue_tilde(TildeBudget::default())?;
        (
            "L(1, L/k~, omega~^n)".to_string(),
            w.format(&v),
            v.is_zero(),
        )
    } else if let Some(j) = psi {
        let v = l.lvalue_psi(j)?;
        let pi2 = if w.p() > 2 && k >= 2 {
            format!("; (zeta-1)^2 divides: {}", w.pi_divisible(&v, 2)?)
        } else {
            String::new()
        };
        (
            format!("L(1, L/k, psi^{j} omega^n)"),
            format!("{}{pi2}", w.format_cyclo(&v)),
            w.cyclo_is_zero(&v),
        )
    } else {
        let v = l.lvalue_base()?;
        ("L(1, omega^n)".to_string(), w.format(&v), v.is_zero())
    };
    let out = format!(
        "P = {prime}, n = {n}, precision {}^{k}\n{label} = {text}",
        w.p()
    );
    let json = json!({"P": prime.to_string(), "n": n.to_string(), "precision": k, "value": text, "zero": zero});
    Ok(CommandOutcome::ok(out, Some(json)))
}

fn cmd_check(prime: &Poly, n: &BigUint, as_json: bool) -> Result<CommandOutcome, Error> {
    let cert = check_kv(prime, n)?;
    verify(&cert)?;
    let json: Value = serde_json::to_value(&cert).expect("certificate serializes");
    let text = if as_json {
        cert.to_json()
    } else {
        cert.ledger()
    };
    let code = if cert.is_counterexample() {
        EXIT_OK
    } else {
        EXIT_NOT_SATISFIED
    };
    Ok(CommandOutcome {
        code,
        text,
        json: Some(json),
    })
}

fn cmd_census(field: &Arc<FieldSpec>, d: usize, m: u64) -> Result<CommandOutcome, Error> {
    let entries = census(field, d, m)?;
    let n = kvcert::search::n_from_m(field, d, m)?;
    let mut lines = vec![
        format!(
            "{}, d = {d}, n = {n}: {} primes with i(P) != 0",
            field_line(field),
            entries.len()
        ),
        "P\tP|beta\tP|gamma".into(),
    ];
    lines.extend(
        entries
            .iter()
            .map(|e| format!("{}\t{}\t{}", e.prime, e.beta_divisible, e.gamma_divisible)),
    );
    let both = entries
        .iter()
        .filter(|e| e.beta_divisible && e.gamma_divisible)
        .count();
    lines.push(format!("both: {both}"));
    let json = Value::Array(
        entries
            .iter()
            .map(|e| json!({"P": e.prime.to_string(), "beta_divisible": e.beta_divisible, "gamma_divisible": e.gamma_divisible}))
            .collect(),
    );
    Ok(CommandOutcome::ok(lines.join("\n"), Some(json)))
}

fn write_out(path: &PathBuf, contents: Vec<u8>) -> Result<(), Error> {
    fs::write(path, contents)
        .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))
}

fn cmd_table1(
    field: &Arc<FieldSpec>,
    degrees: &[usize],
    samples: u64,
    seed: u64,
    threads: Option<usize>,
    out: Option<PathBuf>,
) -> Result<CommandOutcome, Error> {
    let rows = run_table1(field, degrees, samples, seed, threads)?;
    let mut lines = vec![
        format!(
            "{}, {samples} samples per degree, seed {seed}",
            field_line(field)
        ),
        "d\tbeta\tgamma\tboth\ti=0 rejected".into(),
    ];
    lines.extend(rows.iter().map(|r| {
        format!(
            "{}\t{}\t{}\t{}\t{}",
            r.d, r.count_beta, r.count_gamma, r.count_both, r.count_i_zero_rejected
        )
    }));
    if let Some(path) = out {
        let config = json!({"q": field.q(), "field_modulus": field.modulus_text(), "degrees": degrees, "samples": samples, "seed": seed.to_string()});
        let mut buf = Vec::new();
        write_jsonl(&mut buf, &RunHeader::new("table1", config, seed), &rows)
            .expect("in-memory write");
        write_out(&path, buf)?;
        lines.push(format!("wrote {}", path.display()));
    }
    Ok(CommandOutcome::ok(
        lines.join("\n"),
        Some(serde_json::to_value(&rows).unwrap()),
    ))
}

fn cmd_hunt(config: &SearchConfig, out: Option<PathBuf>) -> Result<CommandOutcome, Error> {
    let mut certs: Vec<Certificate> = Vec::new();
    let summary = hunt(config, |c| {
        certs.push(c);
        Ok(())
    })?;
    let n = config.n()?;
    let q = config.field.q() as f64;
    let mut lines = vec![format!(
        "{}, d = {}, n = {n}, {} samples, seed {}",
        field_line(&config.field),
        config.d,
        config.samples,
        config.seed
    )];
    lines.extend(certs.iter().map(|c| {
        format!(
            "counterexample: P = {}, Q = {}, index {} mod {}",
            c.prime, c.q_poly, c.index, c.modulus
        )
    }));
    lines.push(format!(
        "{} counterexamples in {} samples (rate {:.4}; heuristic 1/q^2 = {:.4}); {} i=0 rejections",
        summary.counterexamples,
        summary.samples,
        summary.counterexamples as f64 / (summary.samples.max(1)) as f64,
        1.0 / (q * q),
        summary.i_zero_rejected
    ));
    if let Some(path) = out {
        let mut buf = Vec::new();
        write_jsonl(
            &mut buf,
            &RunHeader::new("hunt", config.to_json(), config.seed),
            &certs,
        )
        .expect("in-memory write");
        write_out(&path, buf)?;
        lines.push(format!("wrote {}", path.display()));
    }
    Ok(CommandOutcome::ok(
        lines.join("\n"),
        Some(serde_json::to_value(&certs).unwrap()),
    ))
}

fn cmd_verify(file: &PathBuf) -> Result<CommandOutcome, Error> {
    let text = fs::read_to_string(file)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", file.display())))?;
    let certs = kvcert::search::read_certificates(&text)?;
    let mut bad = Vec::new();
    for (i, c) in certs.iter().enumerate() {
        if let Err(e) = verify(c) {
            bad.push(format!("certificate {} (P = {}): {e}", i + 1, c.prime));
        }
    }
    let mut text = format!("{} certificates, {} mismatches", certs.len(), bad.len());
    for b in &bad {
        text.push('\n');
        text.push_str(b);
    }
    let code = if bad.is_empty() {
        EXIT_OK
    } else {
        EXIT_INVARIANT
    };
    Ok(CommandOutcome {
        code,
        text,
        json: Some(json!({"certificates": certs.len(), "mismatches": bad.len()})),
    })
}

fn cmd_verify_paper() -> Result<CommandOutcome, Error> {
    let checks = verify_paper()?;
    let lines: Vec<String> = checks
        .iter()
        .map(|c| {
            format!(
                "[{}] {}: {} ({})",
                if c.ok { "ok" } else { "MISMATCH" },
                c.example,
                c.label,
                c.detail
            )
        })
        .collect();
    let failed = checks.iter().filter(|c| !c.ok).count();
    let mut text = lines.join("\n");
    text.push_str(&format!("\n{} checks, {failed} mismatches", checks.len()));
    let json = Value::Array(
        checks
            .iter()
            .map(
                |c| json!({"example": c.example, "check": c.label, "ok": c.ok, "detail": c.detail}),
            )
            .collect(),
    );
    let code = if failed == 0 { EXIT_OK } else { EXIT_INVARIANT };
    Ok(CommandOutcome {
        code,
        text,
        json: Some(json),
    })
}
