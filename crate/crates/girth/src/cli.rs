//! Command-line interface: growth/probe/certificate tables as CSV, single
//! certificates and probes, irreducible-polynomial utilities, and the
//! survival search.
//!
//! Exit codes: 0 success, 2 domain error, 64 usage error, 66 missing file.

use crate::error::{Error, Result};
use crate::galois::TowerField;
use crate::girth::{
    certify_char_p, certify_char_zero, fit_growth_exponent, probe_minimal_quotient,
};
use crate::matgroup::{ball_budget, enumerate_ball, MatGroup};
use crate::numbers::is_prime_u64;
use crate::poly::{
    count_irreducibles, enumerate_monic_irreducibles, parse_entry, CoeffRing, MultiPoly,
};
use crate::survival::{multivariate_bound, survive_list};
use clap::{Parser, Subcommand};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use std::io::Write;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "girth",
    version,
    about = "Finite quotients of finitely generated matrix groups: growth, \
             certified injectivity bounds, and congruence residual-girth data"
)]
struct Cli {
    /// Worker threads (accepted for interface stability; output is
    /// computed sequentially and is identical for every value).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Ball-growth table as CSV, optionally with probe and certificate data.
    Growth {
        /// Group spec file (JSON).
        spec: PathBuf,
        /// Largest radius n to tabulate.
        #[arg(long)]
        max_n: usize,
        /// Smallest radius n to tabulate.
        #[arg(long, default_value_t = 1)]
        min_n: usize,
        /// Add the empirical minimal-quotient columns.
        #[arg(long)]
        probe: bool,
        /// Add the certified-quotient columns (needs balls of radius 2n).
        #[arg(long)]
        certify: bool,
        /// Fit the growth exponent over the window LO..HI and report the
        /// slope on stderr.
        #[arg(long, value_name = "LO..HI")]
        fit: Option<String>,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Certify injectivity of the radius-n ball in an explicit finite
    /// quotient with cardinality bounds.
    Certify {
        spec: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Find the empirically smallest congruence quotient in which the
    /// radius-n ball injects.
    Probe {
        spec: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Count or list monic irreducible polynomials over F_q.
    Irr {
        /// Field order (a prime power).
        #[arg(long)]
        q: u64,
        /// Degree of the polynomials.
        #[arg(long)]
        degree: u32,
        /// List the polynomials in canonical order.
        #[arg(long)]
        list: bool,
        /// Print only the count (default).
        #[arg(long)]
        count: bool,
    },
    /// Find a small quotient field of F_q[t1..tk] in which the given
    /// polynomial survives.
    Survive {
        /// Polynomial in t1..tk (entry grammar, no division).
        poly: String,
        /// Base field order (a prime power).
        #[arg(long)]
        q: u64,
        /// Number of variables.
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
}

/// Build F_q for a prime power q, extending F_p by the first canonical
/// irreducible of the needed degree.
fn field_of_order(q: u64) -> Result<TowerField> {
    let mut p = 0u64;
    let mut f = 2u64;
    while f * f <= q {
        if q % f == 0 {
            p = f;
            break;
        }
        f += 1;
    }
    if p == 0 {
        p = q;
    }
    let mut e = 0u32;
    let mut rest = q;
    while rest > 1 && rest % p == 0 {
        rest /= p;
        e += 1;
    }
    if q < 2 || rest != 1 || !is_prime_u64(p) {
        return Err(Error::SchemaError(format!("{q} is not a prime power")));
    }
    let prime = TowerField::prime_field(p)?;
    if e == 1 {
        return Ok(prime);
    }
    let modulus = enumerate_monic_irreducibles(&prime, e as usize)
        .next()
        .expect("irreducibles exist in every degree");
    prime.extend(&modulus)
}

fn parse_window(text: &str) -> Result<(u64, u64)> {
    let parts: Vec<&str> = text.split("..").collect();
    let bad = || Error::SchemaError(format!("bad fit window '{text}', expected LO..HI"));
    if parts.len() != 2 {
        return Err(bad());
    }
    let lo: u64 = parts[0].parse().map_err(|_| bad())?;
    let hi: u64 = parts[1].parse().map_err(|_| bad())?;
    if lo >= hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

const CSV_HEADER: &str =
    "n,ball_size,probe_param,probe_image_order,cert_field_order,cert_paper_bound,cert_gl_order";

fn run_growth(
    spec: &PathBuf,
    min_n: usize,
    max_n: usize,
    probe: bool,
    certify: bool,
    fit: Option<&str>,
    output: Option<&PathBuf>,
) -> Result<()> {
    if max_n == 0 || min_n == 0 || min_n > max_n {
        return Err(Error::SchemaError(
            "need 1 <= min_n <= max_n".to_string(),
        ));
    }
    let window = fit.map(parse_window).transpose()?;
    let group = MatGroup::load(spec)?;
    let budget = ball_budget();
    let radius = if certify { 2 * max_n } else { max_n };
    let ball = enumerate_ball(&group, radius, budget)?;

    let mut csv = String::new();
    csv.push_str(CSV_HEADER);
    csv.push('\n');
    let mut sizes: Vec<(u64, BigUint)> = Vec::new();
    let mut hint: Option<u64> = None;
    for n in min_n..=max_n {
        let ball_size = ball.levels[n];
        sizes.push((n as u64, BigUint::from(ball_size)));
        let (probe_param, probe_order) = if probe {
            let r = probe_minimal_quotient(&group, &ball, n, hint, budget, budget)?;
            hint = r.param.to_u64();
            (r.param.to_string(), r.image_order.to_string())
        } else {
            (String::new(), String::new())
        };
        let (cert_field, cert_bound, cert_gl) = if certify {
            let cert = if group.characteristic == 0 {
                certify_char_zero(&group, &ball, n)?
            } else {
                certify_char_p(&group, &ball, n)?
            };
            (
                cert.field_order.to_string(),
                cert.field_bound.to_string(),
                cert.gl_order.to_string(),
            )
        } else {
            (String::new(), String::new(), String::new())
        };
        csv.push_str(&format!(
            "{n},{ball_size},{probe_param},{probe_order},{cert_field},{cert_bound},{cert_gl}\n"
        ));
    }
    match output {
        Some(path) => std::fs::write(path, &csv)?,
        None => {
            print!("{csv}");
            std::io::stdout().flush()?;
        }
    }
    if let Some((lo, hi)) = window {
        let slope = fit_growth_exponent(&sizes, lo, hi)?;
        eprintln!("fit: window={lo}..{hi} slope={slope:.6}");
    }
    Ok(())
}

fn run_certify(spec: &PathBuf, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::SchemaError("n must be positive".to_string()));
    }
    let group = MatGroup::load(spec)?;
    let budget = ball_budget();
    let ball = enumerate_ball(&group, 2 * n, budget)?;
    let cert = if group.characteristic == 0 {
        certify_char_zero(&group, &ball, n)?
    } else {
        certify_char_p(&group, &ball, n)?
    };
    println!("group={} n={} ball_size={}", group.name, n, cert.ball_size);
    if let Some(p) = &cert.prime {
        let (lo, hi) = cert.interval.as_ref().unwrap();
        println!("prime={p} interval=[{lo},{hi}]");
    }
    println!(
        "field_order={} field_bound={}",
        cert.field_order, cert.field_bound
    );
    println!("gl_order={} gl_bound={}", cert.gl_order, cert.gl_bound);
    if let Some(sp) = &cert.specialization {
        let parts: Vec<String> = sp
            .assign
            .iter()
            .enumerate()
            .map(|(i, a)| format!("t{}->{}", i + 1, a))
            .collect();
        println!("assignment: {}", parts.join(", "));
    }
    println!("injective={}", cert.injective);
    Ok(())
}

fn run_probe(spec: &PathBuf, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::SchemaError("n must be positive".to_string()));
    }
    let group = MatGroup::load(spec)?;
    let budget = ball_budget();
    let ball = enumerate_ball(&group, n, budget)?;
    let r = probe_minimal_quotient(&group, &ball, n, None, budget, budget)?;
    println!("group={} n={} ball_size={}", group.name, n, r.ball_size);
    println!("param={} field_order={}", r.param, r.field_order);
    println!("image_order={} exact={}", r.image_order, r.image_exact);
    Ok(())
}

fn run_irr(q: u64, degree: u32, list: bool, _count: bool) -> Result<()> {
    if degree == 0 {
        return Err(Error::ConstantPolynomial);
    }
    if list {
        let field = field_of_order(q)?;
        for p in enumerate_monic_irreducibles(&field, degree as usize) {
            println!("{}", p.render(&field, "t"));
        }
    } else {
        // validate q even for the pure count
        field_of_order(q)?;
        println!("{}", count_irreducibles(&BigUint::from(q), degree)?);
    }
    Ok(())
}

fn run_survive(poly: &str, q: u64, k: usize) -> Result<()> {
    let field = field_of_order(q)?;
    let ring = CoeffRing::Fq(field.clone());
    let entry = parse_entry(poly, k, &ring)?;
    if entry.den != MultiPoly::one(k, &ring) {
        return Err(Error::SchemaError(
            "survive expects a polynomial, not a fraction".to_string(),
        ));
    }
    if entry.num.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let spec = survive_list(std::slice::from_ref(&entry.num), &field, k)?;
    let n = u64::from(entry.num.max_degree_per_var());
    println!(
        "field_order={} bound={}",
        spec.target.order(),
        multivariate_bound(n, k, field.order())
    );
    let parts: Vec<String> = spec
        .assign
        .iter()
        .enumerate()
        .map(|(i, a)| format!("t{}->{}", i + 1, a))
        .collect();
    println!("assignment: {}", parts.join(", "));
    let image = spec.apply(&entry.num)?;
    println!("image={image}");
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    match &cli.cmd {
        Cmd::Growth {
            spec,
            max_n,
            min_n,
            probe,
            certify,
            fit,
            output,
        } => run_growth(
            spec,
            *min_n,
            *max_n,
            *probe,
            *certify,
            fit.as_deref(),
            output.as_ref(),
        ),
        Cmd::Certify { spec, n } => run_certify(spec, *n),
        Cmd::Probe { spec, n } => run_probe(spec, *n),
        Cmd::Irr {
            q,
            degree,
            list,
            count,
        } => run_irr(*q, *degree, *list, *count),
        Cmd::Survive { poly, q, k } => run_survive(poly, *q, *k),
    }
}

/// Entry point used by the binary; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(Error::Io(ref io)) if io.kind() == std::io::ErrorKind::NotFound => {
            eprintln!("error: file not found");
            66
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
