//! The `mzv` command-line front end.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use crate::coeffs::{self, Kind};
use crate::cycles::{self, CycleJson, Variant};
use crate::dual::{coefficient_recursion_failures, d_lie_squared, dual_tree, duality_mismatches};
use crate::forest::{self, d_cy, d_cy_part, EdgeClass, EdgeFilter, RootDeco};
use crate::numerics::{self, MplIndex};
use crate::trees::lyndon_tree;
use crate::words::{generate_lyndon, lyndon_of_len, standard_factorization, LyndonWord};
use crate::{fmt_q, Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "mzv",
    version,
    about = "Lyndon trees, forest differentials and algebraic cycles"
)]
pub struct Cli {
    /// Directory holding the coefficient cache `coeffs.tsv`.
    #[arg(long, env = "MZV_CACHE_DIR", global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Worker threads for verification.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Absolute tolerance for numerics.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the Lyndon words of length at most N.
    Lyndon { n: usize },
    /// Print the Lyndon tree of a word.
    Tree { word: LyndonWord },
    /// Print the dual tree sum of a word.
    Dual { word: LyndonWord },
    /// Print the forest differential of a dual tree sum with its α/β tables.
    Dcy { word: LyndonWord },
    /// Print coefficient tables.
    Coeffs {
        word: LyndonWord,
        #[arg(long)]
        kind: Option<Kind>,
    },
    /// Print the parametrized cycle of a word.
    Cycle {
        word: LyndonWord,
        #[arg(long, default_value = "plain")]
        variant: Variant,
        #[arg(long, conflicts_with = "pretty")]
        json: bool,
        #[arg(long)]
        pretty: bool,
    },
    /// Run invariant suites.
    Verify {
        #[arg(long, default_value_t = 4)]
        max_weight: usize,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
    },
    /// Numerical evaluations.
    Numeric {
        #[command(subcommand)]
        what: Numeric,
    },
}

#[derive(Subcommand, Debug)]
pub enum Numeric {
    /// Evaluate J(t0) = Li_{1,2}(t0) − Li_1(t0)·ζ(2).
    J {
        #[arg(long)]
        t0: f64,
        /// Also evaluate the simplex integrals by quadrature.
        #[arg(long)]
        quadrature: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Words,
    Dual,
    Forest,
    Coeffs,
    Cycles,
    Numeric,
    All,
}

/// Parses `argv` and runs it. Returns the process exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "{}", json!({ "error": e.to_string() }));
            match e {
                Error::NotLyndon(_) | Error::InvalidLetter(_) | Error::Parse(_) => 2,
                _ => 1,
            }
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool> {
    let weight_needed = match &cli.command {
        Command::Dcy { word } | Command::Coeffs { word, .. } | Command::Cycle { word, .. } => word.len(),
        Command::Verify { max_weight, .. } => *max_weight,
        _ => 0,
    };
    if let (Some(dir), true) = (&cli.cache_dir, weight_needed >= 2) {
        coeffs::sync_cache_dir(dir, weight_needed)?;
    }
    match &cli.command {
        Command::Lyndon { n } => {
            for w in generate_lyndon(*n) {
                writeln!(out, "{w}")?;
            }
        }
        Command::Tree { word } => writeln!(out, "{}", lyndon_tree(word))?,
        Command::Dual { word } => write!(out, "{}", dual_tree(word))?,
        Command::Dcy { word } => {
            let d = d_cy(&forest::embedded(word, RootDeco::T));
            writeln!(out, "d_cy T_{word} =")?;
            for (f, c) in d.iter() {
                writeln!(out, "  {:>4}  {f}", fmt_q(c))?;
            }
            let t = coeffs::tables(word)?;
            writeln!(out, "α: {}", brace(&t.alpha))?;
            writeln!(out, "β: {}", brace(&t.beta))?;
        }
        Command::Coeffs { word, kind } => {
            let t = coeffs::tables(word)?;
            let kinds: Vec<Kind> = kind.map_or(Kind::ALL.to_vec(), |k| vec![k]);
            for k in kinds {
                write!(out, "{}", t.get(k))?;
            }
        }
        Command::Cycle {
            word,
            variant,
            json,
            pretty,
        } => {
            let c = cycles::cycle(word, *variant)?;
            if *json {
                let s = serde_json::to_string_pretty(&CycleJson::new(word, *variant, &c))
                    .map_err(|e| Error::Parse(e.to_string()))?;
                writeln!(out, "{s}")?;
            } else if *pretty {
                writeln!(out, "{}", cycles::pretty(word, *variant, &c))?;
            } else {
                writeln!(out, "{c}")?;
            }
        }
        Command::Verify { max_weight, suite } => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(cli.jobs.unwrap_or(0))
                .build()
                .map_err(|e| Error::Parse(e.to_string()))?;
            let reports = pool.install(|| verify(*suite, *max_weight, cli.tol));
            let mut ok = true;
            for r in &reports {
                let status = if r.failures.is_empty() { "PASS" } else { "FAIL" };
                writeln!(out, "{status}  {}/{}  ({} cases)", r.suite, r.property, r.cases)?;
                for (case, detail) in &r.failures {
                    ok = false;
                    let rec = json!({ "suite": r.suite, "property": r.property, "case": case, "detail": detail });
                    writeln!(err, "{rec}")?;
                }
            }
            return Ok(ok);
        }
        Command::Numeric {
            what: Numeric::J { t0, quadrature },
        } => {
            writeln!(out, "J({t0}) = {:.12}", numerics::j_series(*t0, cli.tol)?)?;
            if *quadrature {
                writeln!(out, "quadrature: {:.12}", numerics::integral_i011(*t0, cli.tol)?)?;
            }
        }
    }
    Ok(true)
}

fn brace(t: &coeffs::CoeffTable) -> String {
    let body: Vec<String> = t
        .entries()
        .iter()
        .map(|((u, v), c)| format!("({u},{v}):{}", fmt_q(c)))
        .collect();
    format!("{{{}}}", body.join(", "))
}

/// Outcome of one verified property.
#[derive(Clone, Debug)]
pub struct Report {
    pub suite: &'static str,
    pub property: &'static str,
    pub cases: usize,
    pub failures: Vec<(String, String)>,
}

fn per_word(
    suite: &'static str,
    property: &'static str,
    words: &[LyndonWord],
    check: impl Fn(&LyndonWord) -> Result<Option<String>> + Sync,
) -> Report {
    let results: Vec<Option<String>> = words
        .par_iter()
        .map(|w| match check(w) {
            Ok(r) => r,
            Err(e) => Some(e.to_string()),
        })
        .collect();
    let failures = words
        .iter()
        .zip(results)
        .filter_map(|(w, r)| r.map(|d| (w.to_string(), d)))
        .collect();
    Report {
        suite,
        property,
        cases: words.len(),
        failures,
    }
}

fn single(suite: &'static str, property: &'static str, case: String, result: Result<Option<String>>) -> Report {
    let failure = match result {
        Ok(r) => r,
        Err(e) => Some(e.to_string()),
    };
    Report {
        suite,
        property,
        cases: 1,
        failures: failure.map(|d| (case, d)).into_iter().collect(),
    }
}

fn words_between(lo: usize, hi: usize) -> Vec<LyndonWord> {
    generate_lyndon(hi).into_iter().filter(|w| w.len() >= lo).collect()
}

fn fail_if(bad: bool, detail: impl FnOnce() -> String) -> Option<String> {
    bad.then(detail)
}

/// Runs the selected suites on words of length at most `n`.
pub fn verify(suite: Suite, n: usize, tol: f64) -> Vec<Report> {
    let wants = |s: Suite| suite == Suite::All || suite == s;
    let mut reports = Vec::new();
    let composite = words_between(2, n);
    if wants(Suite::Words) {
        let lens: Vec<usize> = (1..=n).collect();
        let failures = lens
            .iter()
            .filter_map(|&k| {
                let (got, want) = (lyndon_of_len(k).len(), necklace_count(k));
                fail_if(got != want, || format!("{got} words, expected {want}")).map(|d| (k.to_string(), d))
            })
            .collect();
        reports.push(Report {
            suite: "words",
            property: "necklace-count",
            cases: lens.len(),
            failures,
        });
        reports.push(per_word("words", "standard-factorization", &composite, |w| {
            let (u, v) = standard_factorization(w)?;
            Ok(fail_if(u >= v || u.concat(&v) != w.letters(), || format!("({u},{v})")))
        }));
    }
    if wants(Suite::Dual) {
        let lens: Vec<usize> = (1..=n).collect();
        let failures = lens
            .par_iter()
            .flat_map_iter(|&k| duality_mismatches(k))
            .map(|m| (format!("{m:?}"), "coefficient mismatch".into()))
            .collect();
        reports.push(Report {
            suite: "dual",
            property: "duality",
            cases: lens.len(),
            failures,
        });
        reports.push(per_word("dual", "coefficient-recursion", &composite, |w| {
            let f = coefficient_recursion_failures(w);
            Ok(fail_if(!f.is_empty(), || format!("{} trees", f.len())))
        }));
        reports.push(per_word("dual", "d-lie-squared", &composite, |w| {
            Ok(fail_if(!d_lie_squared(w).is_zero(), || "nonzero".into()))
        }));
    }
    if wants(Suite::Forest) {
        reports.push(per_word("forest", "d-squared", &composite, |w| {
            let bad = [RootDeco::T, RootDeco::One]
                .into_iter()
                .any(|r| !d_cy(&d_cy(&forest::embedded(w, r))).is_zero());
            Ok(fail_if(bad, || "d_cy² ≠ 0".into()))
        }));
        reports.push(per_word("forest", "d-int", &composite, |w| {
            let x = forest::embedded(w, RootDeco::T);
            let bad = [EdgeClass::Internal, EdgeClass::Leaf0]
                .into_iter()
                .any(|c| !d_cy_part(&x, EdgeFilter::Only(c)).is_zero());
            Ok(fail_if(bad, || "internal or 0-leaf part nonzero".into()))
        }));
        reports.push(per_word("forest", "alpha-beta", &composite, |w| {
            forest::extract_alpha_beta(w).map(|_| None)
        }));
    }
    if wants(Suite::Coeffs) {
        let from3 = words_between(3, n);
        reports.push(per_word("coeffs", "residuals", &from3, |w| {
            let f = coeffs::residual_failures(w)?;
            Ok(f.first()
                .map(|r| format!("{}_{:?} = {}", r.kind, r.indices, fmt_q(&r.value))))
        }));
        reports.push(per_word("coeffs", "formal-differential", &from3, |w| {
            Ok(fail_if(!coeffs::formal_differential_check(w)?, || "∂² ≠ 0".into()))
        }));
        reports.push(per_word("coeffs", "difference-identity", &from3, |w| {
            Ok(fail_if(!coeffs::difference_identity(w)?, || "identity fails".into()))
        }));
        reports.push(per_word("coeffs", "vanishing", &from3, |w| {
            let v = coeffs::vanishing_violations(w)?;
            Ok(fail_if(!v.is_empty(), || v.join("; ")))
        }));
    }
    if wants(Suite::Cycles) {
        for (property, variant) in [
            ("differential-plain", Variant::Plain),
            ("differential-one", Variant::One),
        ] {
            reports.push(per_word("cycles", property, &composite, |w| {
                Ok(fail_if(!cycles::verify_cycle_differential(w, variant)?, || {
                    "∂L ≠ expected".into()
                }))
            }));
        }
        reports.push(per_word("cycles", "fibers", &composite, |w| {
            let plain = cycles::fiber_empty_at(&cycles::cycle(w, Variant::Plain)?, 0);
            let one = cycles::fiber_empty_at(&cycles::cycle(w, Variant::One)?, 1);
            Ok(fail_if(!(plain && one), || {
                format!("empty at t=0: {plain}, at t=1: {one}")
            }))
        }));
    }
    if wants(Suite::Numeric) {
        let points = [0.1, 0.3, 0.5, 0.7, 0.9];
        let failures = points
            .par_iter()
            .filter_map(|&t0| {
                let r = (|| {
                    let (q, s) = (numerics::integral_i011(t0, tol)?, numerics::j_series(t0, tol * 1e-3)?);
                    Ok::<_, Error>(fail_if((q - s).abs() >= 10.0 * tol, || format!("{q} vs {s}")))
                })();
                r.unwrap_or_else(|e| Some(e.to_string())).map(|d| (t0.to_string(), d))
            })
            .collect();
        reports.push(Report {
            suite: "numeric",
            property: "quadrature-series",
            cases: points.len(),
            failures,
        });
        let limit = (|| {
            let z21 = numerics::li_series(&MplIndex::new(vec![2, 1])?, 1.0, 1e-10)?;
            let ks: Vec<u32> = (4..=12).collect();
            let j1 = numerics::extrapolate_j_at_one(&ks, 1e-13)?;
            Ok(fail_if((j1 + 2.0 * z21).abs() >= 1e-4, || {
                format!("J(1) ≈ {j1}, −2ζ(2,1) = {}", -2.0 * z21)
            }))
        })();
        reports.push(single("numeric", "limit", "t0→1".into(), limit));
        let bounded = (|| {
            let worst = (4..=12)
                .map(|k| numerics::j_series(1.0 - 0.5f64.powi(k), 1e-12).map(f64::abs))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            Ok(fail_if(worst >= 3.0, || format!("|J| reaches {worst}")))
        })();
        reports.push(single("numeric", "bounded", "k=4..12".into(), bounded));
    }
    reports
}

// Number of binary Lyndon words of length `n`.
fn necklace_count(n: usize) -> usize {
    let mobius = |mut m: usize| -> i64 {
        let mut sign = 1;
        let mut p = 2;
        while p * p <= m {
            if m.is_multiple_of(p) {
                m /= p;
                if m.is_multiple_of(p) {
                    return 0;
                }
                sign = -sign;
            }
            p += 1;
        }
        if m > 1 {
            -sign
        } else {
            sign
        }
    };
    let total: i64 = (1..=n)
        .filter(|&d| n.is_multiple_of(d))
        .map(|d| mobius(d) * (1i64 << (n / d)))
        .sum();
    (total / n as i64) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("mzv").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn necklace_counts() {
        let counts: Vec<usize> = (1..=8).map(necklace_count).collect();
        assert_eq!(counts, [2, 1, 2, 3, 6, 9, 18, 30]);
    }

    #[test]
    fn lyndon_listing() {
        let (code, out, _) = run_str(&["lyndon", "4"]);
        assert_eq!(code, 0);
        assert_eq!(
            out.split_whitespace().collect::<Vec<_>>(),
            ["0", "0001", "001", "0011", "01", "011", "0111", "1"]
        );
    }

    #[test]
    fn dcy_tables() {
        let (code, out, _) = run_str(&["dcy", "0011"]);
        assert_eq!(code, 0);
        assert!(out.contains("α: {(0,011):1, (001,1):1}"), "{out}");
        assert!(
            out.contains("β: {(01,01):1, (1,001):1}") || out.contains("β: {(1,001):1, (01,01):1}"),
            "{out}"
        );
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_str(&["tree", "10"]).0, 2);
        assert_eq!(run_str(&["frobnicate"]).0, 2);
        assert_eq!(run_str(&["cycle", "011", "--variant", "both"]).0, 2);
        assert_eq!(run_str(&["--help"]).0, 0);
    }

    #[test]
    fn cycle_json_round_trips() {
        let (code, out, _) = run_str(&["cycle", "0011", "--variant", "one", "--json"]);
        assert_eq!(code, 0);
        let parsed: CycleJson = serde_json::from_str(&out).unwrap();
        let w: LyndonWord = "0011".parse().unwrap();
        let c = cycles::cycle(&w, Variant::One).unwrap();
        assert_eq!(parsed.to_cycle().unwrap().canonical().terms, c.canonical().terms);
    }

    #[test]
    fn verify_small_weights() {
        let (code, out, err) = run_str(&["verify", "--max-weight", "3", "--jobs", "2", "--suite", "all"]);
        assert_eq!(code, 0, "{out}{err}");
        assert!(out.lines().all(|l| l.starts_with("PASS")), "{out}");
        assert!(err.is_empty());
    }
}
