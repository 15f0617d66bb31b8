//! Coefficient tables `α`, `β`, `a`, `b`, `a′`, `b′`, the quadratic
//! residuals `r`, `s`, `t` and the formal check of the differential systems
//! satisfied by the cycle families.
//!
//! Tables are cached per word. The cache can be exported and reloaded as
//! tab-separated rows `kind  W  U  V  p/q`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::Zero;

use crate::dual::Pair;
use crate::forest::extract_alpha_beta;
use crate::words::{generate_lyndon, LyndonWord};
use crate::{fmt_q, parse_q, q, Error, LinComb, Result, Q};

/// Which coefficient system a table holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Alpha,
    Beta,
    A,
    B,
    APrime,
    BPrime,
}

impl Kind {
    pub const ALL: [Kind; 6] = [Kind::Alpha, Kind::Beta, Kind::A, Kind::B, Kind::APrime, Kind::BPrime];

    pub fn tag(self) -> &'static str {
        match self {
            Kind::Alpha => "alpha",
            Kind::Beta => "beta",
            Kind::A => "a",
            Kind::B => "b",
            Kind::APrime => "ap",
            Kind::BPrime => "bp",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Kind::ALL
            .into_iter()
            .find(|k| k.tag() == s)
            .ok_or_else(|| Error::Parse(format!("unknown coefficient kind {s:?}")))
    }
}

/// Coefficients `c_{U,V}^W` of one kind; absent entries are zero.
#[derive(Clone, PartialEq, Eq)]
pub struct CoeffTable {
    pub word: LyndonWord,
    pub kind: Kind,
    entries: BTreeMap<Pair, Q>,
}

impl CoeffTable {
    pub fn new(word: LyndonWord, kind: Kind) -> Self {
        Self {
            word,
            kind,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_entries(word: LyndonWord, kind: Kind, entries: impl IntoIterator<Item = (Pair, Q)>) -> Self {
        let mut t = Self::new(word, kind);
        for (p, c) in entries {
            t.set(p.0, p.1, c);
        }
        t
    }

    pub fn get(&self, u: &LyndonWord, v: &LyndonWord) -> Q {
        self.entries
            .get(&(u.clone(), v.clone()))
            .cloned()
            .unwrap_or_else(Q::zero)
    }

    /// Sets an entry; zero removes it.
    pub fn set(&mut self, u: LyndonWord, v: LyndonWord, c: Q) {
        if c.is_zero() {
            self.entries.remove(&(u, v));
        } else {
            self.entries.insert((u, v), c);
        }
    }

    /// Nonzero entries in pair order.
    pub fn entries(&self) -> &BTreeMap<Pair, Q> {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl fmt::Display for CoeffTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ((u, v), c) in &self.entries {
            writeln!(f, "{}\t{}\t{u}\t{v}\t{}", self.kind, self.word, fmt_q(c))?;
        }
        Ok(())
    }
}

impl fmt::Debug for CoeffTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// All six tables of one word.
#[derive(Clone, Debug)]
pub struct WordTables {
    pub alpha: CoeffTable,
    pub beta: CoeffTable,
    pub a: CoeffTable,
    pub b: CoeffTable,
    pub ap: CoeffTable,
    pub bp: CoeffTable,
}

impl WordTables {
    /// Derives `a`, `b`, `a′`, `b′` from `α` and `β`.
    pub fn from_alpha_beta(alpha: CoeffTable, beta: CoeffTable) -> Self {
        let (a, b) = derive_ab(&alpha, &beta);
        let (ap, bp) = derive_apbp(&a, &b);
        Self {
            alpha,
            beta,
            a,
            b,
            ap,
            bp,
        }
    }

    pub fn get(&self, kind: Kind) -> &CoeffTable {
        match kind {
            Kind::Alpha => &self.alpha,
            Kind::Beta => &self.beta,
            Kind::A => &self.a,
            Kind::B => &self.b,
            Kind::APrime => &self.ap,
            Kind::BPrime => &self.bp,
        }
    }
}

/// `a_{U,V} = α_{U,V} + β_{U,V} − β_{V,U}` for `U < V` and `b = −β`.
pub fn derive_ab(alpha: &CoeffTable, beta: &CoeffTable) -> (CoeffTable, CoeffTable) {
    let w = &alpha.word;
    let mut a = CoeffTable::new(w.clone(), Kind::A);
    let mut b = CoeffTable::new(w.clone(), Kind::B);
    let words = generate_lyndon(w.len().saturating_sub(1));
    for u in &words {
        for v in &words {
            if u.len() + v.len() != w.len() {
                continue;
            }
            if u < v {
                a.set(u.clone(), v.clone(), alpha.get(u, v) + beta.get(u, v) - beta.get(v, u));
            }
            b.set(u.clone(), v.clone(), -beta.get(u, v));
        }
    }
    (a, b)
}

/// The twisted tables `a′`, `b′`.
pub fn derive_apbp(a: &CoeffTable, b: &CoeffTable) -> (CoeffTable, CoeffTable) {
    let w = &a.word;
    let zero = LyndonWord::letter(0);
    let mut ap = CoeffTable::new(w.clone(), Kind::APrime);
    let mut bp = CoeffTable::new(w.clone(), Kind::BPrime);
    let words = generate_lyndon(w.len().saturating_sub(1));
    for u in &words {
        for v in &words {
            if u.len() + v.len() != w.len() || *u == zero || *v == zero {
                continue;
            }
            match u.cmp(v) {
                std::cmp::Ordering::Less => {
                    let auv = a.get(u, v);
                    ap.set(u.clone(), v.clone(), -auv.clone());
                    bp.set(u.clone(), v.clone(), &auv + b.get(u, v));
                    bp.set(v.clone(), u.clone(), -auv + b.get(v, u));
                }
                std::cmp::Ordering::Equal => bp.set(u.clone(), v.clone(), b.get(u, v)),
                std::cmp::Ordering::Greater => {}
            }
        }
        if *u != zero && u.len() + 1 == w.len() {
            ap.set(zero.clone(), u.clone(), a.get(&zero, u));
        }
    }
    (ap, bp)
}

type TableCache = OnceLock<Mutex<HashMap<LyndonWord, Arc<WordTables>>>>;

static TABLES: TableCache = OnceLock::new();

fn table_cache() -> &'static Mutex<HashMap<LyndonWord, Arc<WordTables>>> {
    TABLES.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Tables of `w`, extracted from `d_cy(T_W)` on first use. Letters have
/// empty tables.
pub fn tables(w: &LyndonWord) -> Result<Arc<WordTables>> {
    if let Some(t) = table_cache().lock().expect("cache lock").get(w) {
        return Ok(t.clone());
    }
    let (alpha, beta) = if w.is_letter() {
        (
            CoeffTable::new(w.clone(), Kind::Alpha),
            CoeffTable::new(w.clone(), Kind::Beta),
        )
    } else {
        extract_alpha_beta(w)?
    };
    let t = Arc::new(WordTables::from_alpha_beta(alpha, beta));
    Ok(table_cache()
        .lock()
        .expect("cache lock")
        .entry(w.clone())
        .or_insert(t)
        .clone())
}

/// Seeds the cache with externally supplied `α`/`β` tables of `w`.
pub fn preload(alpha: CoeffTable, beta: CoeffTable) {
    let w = alpha.word.clone();
    let t = Arc::new(WordTables::from_alpha_beta(alpha, beta));
    table_cache().lock().expect("cache lock").insert(w, t);
}

/// One table of `w`.
pub fn table(w: &LyndonWord, kind: Kind) -> Result<CoeffTable> {
    Ok(tables(w)?.get(kind).clone())
}

const CACHE_HEADER: &str = "# mzv coefficient cache v1";

/// Writes all tables of the words of length `2..=max_weight`.
pub fn write_tsv(out: &mut impl Write, max_weight: usize) -> Result<()> {
    writeln!(out, "{CACHE_HEADER}")?;
    writeln!(out, "# max_weight\t{max_weight}")?;
    for w in generate_lyndon(max_weight).iter().filter(|w| !w.is_letter()) {
        let t = tables(w)?;
        for kind in Kind::ALL {
            write!(out, "{}", t.get(kind))?;
        }
    }
    Ok(())
}

/// Reads a cache written by [`write_tsv`] and seeds the table cache from its
/// `α`/`β` rows. Returns the recorded maximal weight.
pub fn read_tsv(input: impl BufRead) -> Result<usize> {
    let mut lines = input.lines();
    let header = lines.next().transpose()?.unwrap_or_default();
    if header.trim() != CACHE_HEADER {
        return Err(Error::Cache(format!("unrecognized header {header:?}")));
    }
    let mut max_weight = None;
    let mut found: BTreeMap<LyndonWord, (CoeffTable, CoeffTable)> = BTreeMap::new();
    for (n, line) in lines.enumerate() {
        let line = line?;
        let bad = |msg: &str| Error::Cache(format!("line {}: {msg}", n + 2));
        if let Some(rest) = line.strip_prefix("# max_weight\t") {
            max_weight = Some(rest.trim().parse().map_err(|_| bad("invalid max_weight"))?);
            continue;
        }
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [kind, w, u, v, c] = fields[..] else {
            return Err(bad("expected five tab-separated fields"));
        };
        let kind: Kind = kind.parse()?;
        let w: LyndonWord = w.parse()?;
        let entry = found
            .entry(w.clone())
            .or_insert_with(|| (CoeffTable::new(w.clone(), Kind::Alpha), CoeffTable::new(w, Kind::Beta)));
        let target = match kind {
            Kind::Alpha => &mut entry.0,
            Kind::Beta => &mut entry.1,
            _ => continue,
        };
        target.set(u.parse()?, v.parse()?, parse_q(c)?);
    }
    let max_weight = max_weight.ok_or_else(|| Error::Cache("missing max_weight".into()))?;
    for (_, (alpha, beta)) in found {
        preload(alpha, beta);
    }
    Ok(max_weight)
}

/// Loads `dir/coeffs.tsv` if present, otherwise computes tables up to
/// `max_weight` and writes the file.
pub fn sync_cache_dir(dir: &Path, max_weight: usize) -> Result<()> {
    let path = dir.join("coeffs.tsv");
    if path.exists() {
        let recorded = read_tsv(std::io::BufReader::new(std::fs::File::open(&path)?))?;
        if recorded >= max_weight {
            return Ok(());
        }
    }
    std::fs::create_dir_all(dir)?;
    let tmp = dir.join("coeffs.tsv.tmp");
    {
        let mut f = std::io::BufWriter::new(std::fs::File::create(&tmp)?);
        write_tsv(&mut f, max_weight)?;
        f.flush()?;
    }
    std::fs::rename(tmp, path)?;
    Ok(())
}

fn lyndon_below(n: usize) -> Vec<LyndonWord> {
    generate_lyndon(n.saturating_sub(1))
}

fn alpha_of(u: &LyndonWord, x: &LyndonWord, y: &LyndonWord) -> Result<Q> {
    Ok(tables(u)?.alpha.get(x, y))
}

fn beta_of(u: &LyndonWord, x: &LyndonWord, y: &LyndonWord) -> Result<Q> {
    Ok(tables(u)?.beta.get(x, y))
}

fn require(ok: bool, lo: &LyndonWord, hi: &LyndonWord) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Unordered(lo.to_string(), hi.to_string()))
    }
}

/// The residual `r_{a<b<c}^W`.
pub fn residual_r(w: &LyndonWord, a: &LyndonWord, b: &LyndonWord, c: &LyndonWord) -> Result<Q> {
    require(a < b, a, b)?;
    require(b < c, b, c)?;
    let top = tables(w)?;
    let al = |x: &LyndonWord, y: &LyndonWord| top.alpha.get(x, y);
    let mut r = Q::zero();
    for u in lyndon_below(w.len()) {
        let (abc, aac, aab) = (alpha_of(&u, b, c)?, alpha_of(&u, a, c)?, alpha_of(&u, a, b)?);
        if abc.is_zero() && aac.is_zero() && aab.is_zero() {
            continue;
        }
        let term = if u < *a {
            al(&u, a) * abc - al(&u, b) * aac + al(&u, c) * aab
        } else if *a < u && u < *b {
            -al(a, &u) * abc - al(&u, b) * aac + al(&u, c) * aab
        } else if *b < u && u < *c {
            -al(a, &u) * abc + al(b, &u) * aac + al(&u, c) * aab
        } else if *c < u {
            -al(a, &u) * abc + al(b, &u) * aac - al(c, &u) * aab
        } else {
            continue;
        };
        r += term;
    }
    Ok(r)
}

/// The residual `s_{a<b,c}^W`.
pub fn residual_s(w: &LyndonWord, a: &LyndonWord, b: &LyndonWord, c: &LyndonWord) -> Result<Q> {
    require(a < b, a, b)?;
    let top = tables(w)?;
    let mut s = Q::zero();
    for u in lyndon_below(w.len()) {
        s += top.beta.get(&u, c) * alpha_of(&u, a, b)?;
        let (bbc, bac) = (beta_of(&u, b, c)?, beta_of(&u, a, c)?);
        if u < *a {
            s += top.alpha.get(&u, a) * &bbc;
        }
        if u < *b {
            s -= top.alpha.get(&u, b) * &bac;
        }
        if u > *a {
            s -= top.alpha.get(a, &u) * &bbc;
        }
        if u > *b {
            s += top.alpha.get(b, &u) * &bac;
        }
    }
    Ok(s)
}

/// The residual `t_{a,b<c}^W`. The index `b` must differ from `0`, since
/// `T_0(1)` vanishes and no relation is attached to it.
pub fn residual_t(w: &LyndonWord, a: &LyndonWord, b: &LyndonWord, c: &LyndonWord) -> Result<Q> {
    require(b < c, b, c)?;
    if b.is_zero_letter() {
        return Err(Error::Unordered("0".into(), b.to_string()));
    }
    let top = tables(w)?;
    let mut t = Q::zero();
    for u in lyndon_below(w.len()) {
        t += top.beta.get(&u, c) * beta_of(&u, a, b)?;
        t -= top.beta.get(&u, b) * beta_of(&u, a, c)?;
        let inner = -alpha_of(&u, b, c)? - beta_of(&u, b, c)? + beta_of(&u, c, b)?;
        t += top.beta.get(a, &u) * inner;
    }
    Ok(t)
}

/// A nonzero residual found by [`residual_failures`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualFailure {
    pub kind: char,
    pub indices: [LyndonWord; 3],
    pub value: Q,
}

/// Every admissible nonvanishing `r`, `s`, `t` residual of `w`.
pub fn residual_failures(w: &LyndonWord) -> Result<Vec<ResidualFailure>> {
    let words: Vec<LyndonWord> = lyndon_below(w.len());
    let mut out = Vec::new();
    for a in &words {
        for b in &words {
            for c in &words {
                if a.len() + b.len() + c.len() != w.len() {
                    continue;
                }
                let idx = || [a.clone(), b.clone(), c.clone()];
                if a < b && b < c {
                    let value = residual_r(w, a, b, c)?;
                    if !value.is_zero() {
                        out.push(ResidualFailure {
                            kind: 'r',
                            indices: idx(),
                            value,
                        });
                    }
                }
                if a < b {
                    let value = residual_s(w, a, b, c)?;
                    if !value.is_zero() {
                        out.push(ResidualFailure {
                            kind: 's',
                            indices: idx(),
                            value,
                        });
                    }
                }
                if b < c && !b.is_zero_letter() {
                    let value = residual_t(w, a, b, c)?;
                    if !value.is_zero() {
                        out.push(ResidualFailure {
                            kind: 't',
                            indices: idx(),
                            value,
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// A formal degree-one symbol `A_U` (`one = false`) or `A¹_U`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    pub word: LyndonWord,
    pub one: bool,
}

impl Symbol {
    /// `A_U`, or `A¹_U`. The letters have a single closed symbol each.
    pub fn new(word: LyndonWord, one: bool) -> Self {
        let one = one && !word.is_letter();
        Self { word, one }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sup = if self.one { "1" } else { "" };
        write!(f, "A{sup}_{}", self.word)
    }
}

/// Element of the free graded-commutative algebra on degree-one symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormalElement(pub LinComb<Vec<Symbol>>);

impl FormalElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn symbol(s: Symbol) -> Self {
        Self(LinComb::single(vec![s], q(1)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Adds `c · x · y` for symbols `x`, `y`.
    pub fn add_pair(&mut self, c: Q, x: Symbol, y: Symbol) {
        if let Some((m, s)) = normalize_monomial(vec![x, y]) {
            self.0.add(m, c * q(s));
        }
    }

    pub fn product(&self, other: &Self) -> Self {
        let mut out = LinComb::new();
        for (m1, c1) in self.0.iter() {
            for (m2, c2) in other.0.iter() {
                let mut m = m1.clone();
                m.extend(m2.iter().cloned());
                if let Some((m, s)) = normalize_monomial(m) {
                    out.add(m, c1 * c2 * q(s));
                }
            }
        }
        Self(out)
    }

    /// Applies the derivation of degree one that maps each symbol to
    /// `diff(symbol)`.
    pub fn differential(&self, diff: &mut impl FnMut(&Symbol) -> Result<FormalElement>) -> Result<Self> {
        let mut out = LinComb::new();
        for (m, c) in self.0.iter() {
            for i in 0..m.len() {
                let left = Self(LinComb::single(m[..i].to_vec(), q(1)));
                let right = Self(LinComb::single(m[i + 1..].to_vec(), q(1)));
                let term = left.product(&diff(&m[i])?).product(&right);
                let sign = if i % 2 == 0 { 1 } else { -1 };
                out.add_scaled(&term.0, &(c * q(sign)));
            }
        }
        Ok(Self(out))
    }
}

impl fmt::Display for FormalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{}", fmt_q(c))?;
            for s in m {
                write!(f, " {s}")?;
            }
        }
        Ok(())
    }
}

fn normalize_monomial(mut m: Vec<Symbol>) -> Option<(Vec<Symbol>, i64)> {
    let mut sign = 1;
    for i in 1..m.len() {
        let mut j = i;
        while j > 0 && m[j - 1] > m[j] {
            m.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if m.windows(2).any(|p| p[0] == p[1]) {
        return None;
    }
    Some((m, sign))
}

/// `A_𝔄 = Σ_{U<V} a A_U A_V + Σ b A_U A¹_V`, the right-hand side of the
/// system for `A_W`.
pub fn system_a(w: &LyndonWord) -> Result<FormalElement> {
    let t = tables(w)?;
    let mut out = FormalElement::zero();
    for ((u, v), c) in t.a.entries() {
        out.add_pair(c.clone(), Symbol::new(u.clone(), false), Symbol::new(v.clone(), false));
    }
    for ((u, v), c) in t.b.entries() {
        out.add_pair(c.clone(), Symbol::new(u.clone(), false), Symbol::new(v.clone(), true));
    }
    Ok(out)
}

/// `A_𝔄¹ = Σ_{0<U<V} a′ A¹_U A¹_V + Σ b′ A_U A¹_V + Σ a′_{0,V} A_0 A_V`, the
/// right-hand side of the system for `A¹_W`.
pub fn system_a_one(w: &LyndonWord) -> Result<FormalElement> {
    let t = tables(w)?;
    let mut out = FormalElement::zero();
    for ((u, v), c) in t.ap.entries() {
        let one = !u.is_zero_letter();
        out.add_pair(c.clone(), Symbol::new(u.clone(), one), Symbol::new(v.clone(), one));
    }
    for ((u, v), c) in t.bp.entries() {
        out.add_pair(c.clone(), Symbol::new(u.clone(), false), Symbol::new(v.clone(), true));
    }
    Ok(out)
}

/// The formal differential: letters are closed, longer words follow the two
/// systems.
pub fn formal_d(s: &Symbol) -> Result<FormalElement> {
    if s.word.is_letter() {
        Ok(FormalElement::zero())
    } else if s.one {
        system_a_one(&s.word)
    } else {
        system_a(&s.word)
    }
}

/// True iff `∂(A_𝔄) = ∂(A_𝔄¹) = 0` for `w`.
pub fn formal_differential_check(w: &LyndonWord) -> Result<bool> {
    let mut d = formal_d;
    Ok(system_a(w)?.differential(&mut d)?.is_zero() && system_a_one(w)?.differential(&mut d)?.is_zero())
}

/// True iff `A_𝔄 − A_𝔄¹ = Σ_{0<U<V<1} a_{U,V} (A_U − A¹_U)(A_V − A¹_V)`.
pub fn difference_identity(w: &LyndonWord) -> Result<bool> {
    let t = tables(w)?;
    let lhs = {
        let mut x = system_a(w)?.0;
        x.add_scaled(&system_a_one(w)?.0, &q(-1));
        x
    };
    let diff = |u: &LyndonWord| {
        let mut e = FormalElement::symbol(Symbol::new(u.clone(), false));
        e.0.add(vec![Symbol::new(u.clone(), true)], q(-1));
        e
    };
    let mut rhs = LinComb::new();
    for ((u, v), c) in t.a.entries() {
        if u.is_letter() || v.is_letter() {
            continue;
        }
        rhs.add_scaled(&diff(u).product(&diff(v)).0, c);
    }
    Ok(lhs == rhs)
}

/// Entries of `w`'s tables that break the vanishing pattern forced by
/// `T_0(1) = 0` and `β_{1,U} = α_{U,1}`.
pub fn vanishing_violations(w: &LyndonWord) -> Result<Vec<String>> {
    let t = tables(w)?;
    let mut bad = Vec::new();
    let mut check = |table: &CoeffTable, pred: &dyn Fn(&LyndonWord, &LyndonWord) -> bool| {
        for (u, v) in table.entries().keys() {
            if pred(u, v) {
                bad.push(format!("{}_{{{u},{v}}}^{w} = {}", table.kind, fmt_q(&table.get(u, v))));
            }
        }
    };
    check(&t.alpha, &|u, v| u >= v);
    check(&t.a, &|u, v| u >= v || v.is_one_letter());
    check(&t.ap, &|u, v| u >= v || v.is_one_letter());
    check(&t.b, &|u, v| {
        v.is_one_letter() || u.is_zero_letter() || v.is_zero_letter()
    });
    check(&t.bp, &|u, v| {
        v.is_one_letter() || u.is_zero_letter() || v.is_zero_letter()
    });
    check(&t.beta, &|u, v| {
        v.is_one_letter() || u.is_zero_letter() || v.is_zero_letter()
    });
    for kind in Kind::ALL {
        check(t.get(kind), &|u, v| u.len() + v.len() != w.len());
    }
    let one = LyndonWord::letter(1);
    for (u, _) in t.alpha.entries().keys().filter(|(_, v)| v.is_one_letter()) {
        if t.beta.get(&one, u) != t.alpha.get(u, &one) {
            bad.push(format!("beta_{{1,{u}}}^{w} differs from alpha_{{{u},1}}^{w}"));
        }
    }
    for (_, u) in t.beta.entries().keys().filter(|(x, _)| x.is_one_letter()) {
        if t.beta.get(&one, u) != t.alpha.get(u, &one) {
            bad.push(format!("beta_{{1,{u}}}^{w} differs from alpha_{{{u},1}}^{w}"));
        }
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dual::alpha_lie;

    fn w(s: &str) -> LyndonWord {
        s.parse().unwrap()
    }

    fn rows(t: &CoeffTable) -> Vec<String> {
        t.entries()
            .iter()
            .map(|((u, v), c)| format!("{u},{v}:{}", fmt_q(c)))
            .collect()
    }

    #[test]
    fn alpha_beta_goldens() {
        let t = tables(&w("011")).unwrap();
        assert_eq!(rows(&t.alpha), ["01,1:1"]);
        assert_eq!(rows(&t.beta), ["1,01:1"]);
        let t = tables(&w("01011")).unwrap();
        assert_eq!(rows(&t.alpha), ["0011,1:1", "01,011:1"]);
        assert_eq!(rows(&t.beta), ["011,01:2", "1,0011:1"]);
    }

    #[test]
    fn derived_goldens() {
        let t = tables(&w("011")).unwrap();
        assert!(t.a.is_empty());
        assert_eq!(rows(&t.b), ["1,01:-1"]);
        let t = tables(&w("0011")).unwrap();
        assert_eq!(rows(&t.a), ["0,011:1"]);
        assert_eq!(rows(&t.b), ["01,01:-1", "1,001:-1"]);
        let t = tables(&w("00101")).unwrap();
        assert_eq!(rows(&t.a), ["001,01:1"]);
        assert_eq!(rows(&t.b), ["1,0001:1"]);
        assert_eq!(rows(&t.bp), ["001,01:1", "01,001:-1", "1,0001:1"]);
        assert!(t.ap.get(&w("001"), &w("01")) == q(-1));
    }

    #[test]
    fn residual_examples() {
        assert_eq!(residual_r(&w("0011"), &w("0"), &w("01"), &w("1")).unwrap(), q(0));
        assert!(residual_r(&w("0011"), &w("01"), &w("0"), &w("1")).is_err());
        assert!(residual_t(&w("0011"), &w("1"), &w("0"), &w("01")).is_err());
        assert_eq!(residual_s(&w("011"), &w("0"), &w("1"), &w("1")).unwrap(), q(0));
        assert_eq!(residual_s(&w("0011"), &w("0"), &w("1"), &w("01")).unwrap(), q(0));
    }

    #[test]
    fn relations_hold_through_weight_five() {
        for word in generate_lyndon(5).iter().filter(|x| x.len() >= 3) {
            assert!(residual_failures(word).unwrap().is_empty(), "{word}");
            assert!(formal_differential_check(word).unwrap(), "{word}");
            assert!(difference_identity(word).unwrap(), "{word}");
            assert!(vanishing_violations(word).unwrap().is_empty(), "{word}");
        }
    }

    #[test]
    fn extracted_alpha_matches_lie_cobracket() {
        for word in generate_lyndon(5).iter().filter(|x| !x.is_letter()) {
            let t = tables(word).unwrap();
            let lie: Vec<(Pair, Q)> = alpha_lie(word).iter().map(|(p, c)| (p.clone(), c.clone())).collect();
            let ours: Vec<(Pair, Q)> = t.alpha.entries().iter().map(|(p, c)| (p.clone(), c.clone())).collect();
            assert_eq!(ours, lie, "{word}");
        }
    }

    #[test]
    fn formal_check_for_01_is_vacuous() {
        assert!(formal_differential_check(&w("01")).unwrap());
    }

    #[test]
    fn formal_algebra_signs() {
        let x = Symbol::new(w("01"), false);
        let y = Symbol::new(w("01"), true);
        let mut e = FormalElement::zero();
        e.add_pair(q(1), y.clone(), x.clone());
        e.add_pair(q(1), x.clone(), y.clone());
        assert!(e.is_zero());
        let mut sq = FormalElement::zero();
        sq.add_pair(q(1), x.clone(), x);
        assert!(sq.is_zero());
        assert_eq!(Symbol::new(w("0"), true), Symbol::new(w("0"), false));
    }

    #[test]
    fn tsv_round_trip() {
        let mut buf = Vec::new();
        write_tsv(&mut buf, 4).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.contains("beta\t0011\t01\t01\t1\n"));
        assert_eq!(read_tsv(&buf[..]).unwrap(), 4);
        assert!(read_tsv(&b"nonsense\n"[..]).is_err());
        let t = table(&w("0011"), Kind::BPrime).unwrap();
        assert_eq!(rows(&t), ["01,01:-1", "1,001:-1"]);
    }

    #[test]
    fn kind_tags_round_trip() {
        for k in Kind::ALL {
            assert_eq!(k.tag().parse::<Kind>().unwrap(), k);
        }
        assert!("x".parse::<Kind>().is_err());
    }
}
