//! End-to-end acceptance checks, one line per criterion.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use mzv_cycles::coeffs::{self, CoeffTable};
use mzv_cycles::cycles::{self, ParametrizedCycle, Term, Variant};
use mzv_cycles::dual::{dual_tree, duality_mismatches};
use mzv_cycles::forest::{self, d_cy, d_cy_part, EdgeClass, EdgeFilter, RootDeco};
use mzv_cycles::numerics::{self, MplIndex};
use mzv_cycles::trees::{lyndon_tree, Tree, TreeLinComb};
use mzv_cycles::words::generate_lyndon;
use mzv_cycles::{fmt_q, q, LinComb, LyndonWord};

type Outcome = Result<(), String>;

type Criterion = (&'static str, fn() -> Outcome, Duration);

type Golden = (&'static str, Variant, Vec<(i64, &'static [&'static str])>);

fn w(s: &str) -> LyndonWord {
    s.parse().unwrap()
}

fn words(lo: usize, hi: usize) -> Vec<LyndonWord> {
    generate_lyndon(hi).into_iter().filter(|x| x.len() >= lo).collect()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lyndon_enumeration() -> Outcome {
    let got: Vec<String> = generate_lyndon(4).iter().map(|x| x.to_string()).collect();
    ensure(got == ["0", "0001", "001", "0011", "01", "011", "0111", "1"], || {
        format!("{got:?}")
    })
}

fn dual_sums() -> Outcome {
    for x in generate_lyndon(3) {
        let single = TreeLinComb::single(lyndon_tree(&x), q(1));
        ensure(dual_tree(&x).combination == single, || {
            format!("T_{x} is not the Lyndon tree")
        })?;
    }
    let t = |s: &str| s.parse::<Tree>().unwrap();
    let expected: TreeLinComb = [(t("[0,[[0,1],1]]"), q(1)), (t("[[0,[0,1]],1]"), q(1))]
        .into_iter()
        .collect();
    ensure(dual_tree(&w("0011")).combination == expected, || {
        format!("{}", dual_tree(&w("0011")))
    })
}

fn duality_matrix() -> Outcome {
    for n in 1..=6 {
        let m = duality_mismatches(n);
        ensure(m.is_empty(), || {
            format!("weight {n}: {} mismatches, first {:?}", m.len(), m.first())
        })?;
    }
    Ok(())
}

fn rows(t: &CoeffTable) -> Vec<String> {
    t.entries()
        .iter()
        .map(|((u, v), c)| format!("{u},{v}:{}", fmt_q(c)))
        .collect()
}

fn golden_tables() -> Outcome {
    let cases: [(&str, &[&str], &[&str]); 3] = [
        ("011", &["01,1:1"], &["1,01:1"]),
        ("0011", &["0,011:1", "001,1:1"], &["01,01:1", "1,001:1"]),
        ("01011", &["0011,1:1", "01,011:1"], &["011,01:2", "1,0011:1"]),
    ];
    for (word, alpha, beta) in cases {
        let (a, b) = forest::extract_alpha_beta(&w(word)).map_err(|e| e.to_string())?;
        let (mut ra, mut rb) = (rows(&a), rows(&b));
        ra.sort();
        rb.sort();
        ensure(ra == alpha && rb == beta, || format!("{word}: α {ra:?}, β {rb:?}"))?;
    }
    Ok(())
}

fn forest_differential() -> Outcome {
    for x in words(1, 6) {
        for root in [RootDeco::T, RootDeco::One] {
            ensure(d_cy(&d_cy(&forest::embedded(&x, root))).is_zero(), || {
                format!("d² ≠ 0 on T_{x} ({root:?})")
            })?;
        }
        let internal = d_cy_part(
            &forest::embedded(&x, RootDeco::T),
            EdgeFilter::Only(EdgeClass::Internal),
        );
        ensure(internal.is_zero(), || format!("d_int T_{x} ≠ 0"))?;
    }
    Ok(())
}

fn relations() -> Outcome {
    for x in words(3, 6) {
        let f = coeffs::residual_failures(&x).map_err(|e| e.to_string())?;
        ensure(f.is_empty(), || format!("{x}: {:?}", f[0]))?;
        let formal = coeffs::formal_differential_check(&x).map_err(|e| e.to_string())?;
        ensure(formal, || format!("{x}: formal differential check fails"))?;
    }
    Ok(())
}

fn parse_cycle(weight: usize, terms: &[(i64, &[&str])]) -> ParametrizedCycle {
    let mut out = LinComb::new();
    for (c, fs) in terms {
        out.add(fs.iter().map(|s| s.parse().unwrap()).collect::<Term>(), q(*c));
    }
    ParametrizedCycle { weight, terms: out }.canonical()
}

fn parametrizations() -> Outcome {
    let cases: Vec<Golden> = vec![
        ("01", Variant::Plain, vec![(1, &["1-t/x1", "x1", "1-x1"])]),
        ("01", Variant::One, vec![(1, &["(x1-t)/(x1-1)", "x1", "1-x1"])]),
        (
            "011",
            Variant::Plain,
            vec![(-1, &["1-t/x2", "1-x2", "(x1-x2)/(x1-1)", "x1", "1-x1"])],
        ),
        (
            "011",
            Variant::One,
            vec![(-1, &["(x2-t)/(x2-1)", "1-x2", "(x1-x2)/(x1-1)", "x1", "1-x1"])],
        ),
        (
            "001",
            Variant::One,
            vec![(1, &["(x2-t)/(x2-1)", "x2", "1-x2/x1", "x1", "1-x1"])],
        ),
        (
            "0011",
            Variant::Plain,
            vec![
                (-1, &["1-t/x3", "x3", "1-x3/x2", "1-x2", "(x1-x2)/(x1-1)", "x1", "1-x1"]),
                (-1, &["1-t/x3", "1-x3", "(x2-x3)/(x2-1)", "x2", "1-x2/x1", "x1", "1-x1"]),
                (-1, &["1-t/x3", "1-x3/x2", "x2", "1-x2", "(x1-x3)/(x1-1)", "x1", "1-x1"]),
            ],
        ),
        ("1", Variant::Plain, vec![(1, &["1-t"])]),
        (
            "001",
            Variant::Plain,
            vec![(1, &["1-t/x2", "x2", "1-x2/x1", "x1", "1-x1"])],
        ),
        (
            "0001",
            Variant::Plain,
            vec![(1, &["1-t/x3", "x3", "1-x3/x2", "x2", "1-x2/x1", "x1", "1-x1"])],
        ),
    ];
    for (word, variant, terms) in cases {
        let got = cycles::cycle(&w(word), variant).map_err(|e| e.to_string())?.canonical();
        let want = parse_cycle(word.len(), &terms);
        ensure(got.terms == want.terms, || format!("{word} ({variant}): got {got}"))?;
    }
    Ok(())
}

// Terms equal to minus themselves under coordinate permutation vanish after
// alternation and are dropped.
fn alt_multiset(c: &ParametrizedCycle) -> LinComb<Term> {
    c.alt_canonical().terms
}

fn cycle_differential() -> Outcome {
    for x in words(2, 4) {
        for variant in [Variant::Plain, Variant::One] {
            let ok = cycles::verify_cycle_differential(&x, variant).map_err(|e| e.to_string())?;
            ensure(ok, || format!("∂L fails for {x} ({variant})"))?;
        }
    }
    let l = |s: &str, v: Variant| cycles::cycle(&w(s), v).unwrap();
    let (p, o) = (Variant::Plain, Variant::One);
    let combine = |parts: &[(i64, ParametrizedCycle)]| {
        let mut terms = LinComb::new();
        for (c, part) in parts {
            terms.add_scaled(&part.canonical().terms, &q(*c));
        }
        ParametrizedCycle {
            weight: parts[0].1.weight,
            terms,
        }
    };
    let expected = [
        (
            "0011",
            combine(&[
                (1, cycles::product(&l("0", p), &l("011", p))),
                (-1, cycles::product(&l("1", p), &l("001", o))),
                (-1, cycles::product(&l("01", p), &l("01", o))),
            ]),
        ),
        (
            "00101",
            combine(&[
                (1, cycles::product(&l("001", p), &l("01", p))),
                (1, cycles::product(&l("1", p), &l("0001", o))),
            ]),
        ),
    ];
    for (word, rhs) in expected {
        let got = cycles::boundary(&l(word, p)).map_err(|e| e.to_string())?;
        let (got, want) = (alt_multiset(&got), alt_multiset(&rhs));
        ensure(got == want, || {
            format!("∂L_{word}: {} terms, expected {}", got.len(), want.len())
        })?;
    }
    Ok(())
}

fn fiber_emptiness() -> Outcome {
    for x in words(2, 5) {
        let plain = cycles::cycle(&x, Variant::Plain).map_err(|e| e.to_string())?;
        let one = cycles::cycle(&x, Variant::One).map_err(|e| e.to_string())?;
        ensure(cycles::fiber_empty_at(&plain, 0), || format!("L_{x} meets t = 0"))?;
        ensure(cycles::fiber_empty_at(&one, 1), || format!("L¹_{x} meets t = 1"))?;
    }
    Ok(())
}

// ζ(2,1) = Σ_{n>m≥1} 1/(n² m) summed directly. The tail Σ_{n>N} H_{n−1}/n² is
// (ln N + γ + 1)/N up to O(ln N / N²).
fn zeta21_oracle() -> f64 {
    const N: u64 = 2_000_000;
    let mut harmonic = 0.0;
    let mut sum = 0.0;
    for n in 1..=N {
        let nf = n as f64;
        sum += harmonic / (nf * nf);
        harmonic += 1.0 / nf;
    }
    let nf = N as f64;
    let gamma = 0.577_215_664_901_532_9;
    sum + (nf.ln() + gamma + 1.0) / nf
}

fn numeric_identity() -> Outcome {
    let z21 = zeta21_oracle();
    let series = numerics::li_series(&MplIndex::new(vec![2, 1]).unwrap(), 1.0, 1e-10).map_err(|e| e.to_string())?;
    ensure((z21 - series).abs() < 1e-7, || {
        format!("oracle {z21} vs series {series}")
    })?;
    ensure((z21 - 1.202_056_903_159_594).abs() < 1e-7, || format!("ζ(2,1) ≈ {z21}"))?;
    let ks: Vec<u32> = (4..=12).collect();
    let limit = numerics::extrapolate_j_at_one(&ks, 1e-13).map_err(|e| e.to_string())?;
    ensure((limit + 2.0 * z21).abs() < 1e-4, || {
        format!("J(1) ≈ {limit}, −2ζ(2,1) = {}", -2.0 * z21)
    })?;
    let quad = numerics::integral_i011(0.5, 1e-8).map_err(|e| e.to_string())?;
    let series = numerics::j_series(0.5, 1e-12).map_err(|e| e.to_string())?;
    ensure((quad - series).abs() < 1e-6, || {
        format!("quadrature {quad} vs series {series}")
    })
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("lyndon enumeration", lyndon_enumeration, Duration::from_millis(1)),
        ("dual sums", dual_sums, Duration::from_millis(10)),
        ("duality matrix", duality_matrix, Duration::from_secs(30)),
        ("d_cy golden tables", golden_tables, Duration::from_secs(5)),
        ("d_cy² = 0 and d_int = 0", forest_differential, Duration::from_secs(60)),
        ("quadratic relations", relations, Duration::from_secs(60)),
        ("parametrizations", parametrizations, Duration::from_secs(1)),
        ("cycle differentials", cycle_differential, Duration::from_secs(30)),
        ("fiber emptiness", fiber_emptiness, Duration::from_secs(5)),
        ("numeric identity", numeric_identity, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let verdict = match (&outcome, elapsed <= budget) {
            (Ok(()), true) => "PASS".to_string(),
            (Ok(()), false) => format!("FAIL  over budget {budget:?}"),
            (Err(e), _) => format!("FAIL  {e}"),
        };
        if !verdict.starts_with("PASS") {
            failed += 1;
        }
        println!("criterion {:>2}  {name:<26} {elapsed:>12.3?}  {verdict}", i + 1);
    }
    println!("{} of 10 criteria pass", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
