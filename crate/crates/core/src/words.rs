//! Lyndon words over the binary alphabet `{0,1}`.
//!
//! Words compare lexicographically with `0 < 1` and a proper prefix smaller
//! than its extensions, so `001 < 0011 < 01`.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// A nonempty binary Lyndon word.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LyndonWord(Vec<u8>);

impl LyndonWord {
    /// Validates `letters` and wraps them.
    pub fn new(letters: Vec<u8>) -> Result<Self> {
        if let Some(&b) = letters.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidLetter(char::from(b'0' + b.min(9))));
        }
        if !is_lyndon(&letters) {
            return Err(Error::NotLyndon(render(&letters)));
        }
        Ok(Self(letters))
    }

    /// The single-letter word `0` or `1`.
    pub fn letter(d: u8) -> Self {
        assert!(d <= 1, "letter out of alphabet");
        Self(vec![d])
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_letter(&self) -> bool {
        self.0.len() == 1
    }

    /// True for the word `0`.
    pub fn is_zero_letter(&self) -> bool {
        self.0 == [0]
    }

    /// True for the word `1`.
    pub fn is_one_letter(&self) -> bool {
        self.0 == [1]
    }

    /// Concatenation `self · other` (not necessarily Lyndon).
    pub fn concat(&self, other: &Self) -> Vec<u8> {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        v
    }
}

impl fmt::Display for LyndonWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(&self.0))
    }
}

impl fmt::Debug for LyndonWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for LyndonWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::new(parse_letters(s)?)
    }
}

/// Parses a string of `0`/`1` characters.
pub fn parse_letters(s: &str) -> Result<Vec<u8>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(Error::InvalidLetter(other)),
        })
        .collect()
}

/// Renders letters as a `0`/`1` string.
pub fn render(letters: &[u8]) -> String {
    letters.iter().map(|&b| char::from(b'0' + b)).collect()
}

/// True iff `word` is nonempty and strictly smaller than each of its
/// nontrivial proper right factors.
pub fn is_lyndon(word: &[u8]) -> bool {
    !word.is_empty() && (1..word.len()).all(|i| word < &word[i..])
}

/// All Lyndon words of length at most `max_len`, in increasing order.
///
/// Uses Duval's successor: repeat the current word up to `max_len`, strip
/// trailing `1`s and increment the last letter.
pub fn generate_lyndon(max_len: usize) -> Vec<LyndonWord> {
    let mut out = Vec::new();
    if max_len == 0 {
        return out;
    }
    let mut w = vec![0u8];
    loop {
        out.push(LyndonWord(w.clone()));
        let period = w.len();
        let mut next: Vec<u8> = (0..max_len).map(|i| w[i % period]).collect();
        while next.last() == Some(&1) {
            next.pop();
        }
        match next.last_mut() {
            Some(last) => *last = 1,
            None => break,
        }
        w = next;
    }
    out
}

/// Lyndon words of length exactly `len`, in increasing order.
pub fn lyndon_of_len(len: usize) -> Vec<LyndonWord> {
    generate_lyndon(len).into_iter().filter(|w| w.len() == len).collect()
}

/// Splits `word = UV` with `V` the smallest nontrivial proper right factor.
pub fn standard_factorization(word: &LyndonWord) -> Result<(LyndonWord, LyndonWord)> {
    let w = word.letters();
    if w.len() < 2 {
        return Err(Error::SingleLetter);
    }
    let split = (1..w.len())
        .min_by(|&i, &j| w[i..].cmp(&w[j..]))
        .expect("at least one proper right factor");
    Ok((LyndonWord(w[..split].to_vec()), LyndonWord(w[split..].to_vec())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> LyndonWord {
        s.parse().unwrap()
    }

    fn brute_force(n: usize) -> Vec<Vec<u8>> {
        let mut all = Vec::new();
        for len in 1..=n {
            for bits in 0u32..(1 << len) {
                let word: Vec<u8> = (0..len).map(|i| ((bits >> (len - 1 - i)) & 1) as u8).collect();
                if is_lyndon(&word) {
                    all.push(word);
                }
            }
        }
        all.sort();
        all
    }

    #[test]
    fn lyndon_predicate_examples() {
        assert!(is_lyndon(&[0, 0, 1, 1]));
        assert!(!is_lyndon(&[1, 0]));
        assert!(!is_lyndon(&[0, 1, 0, 1]));
        assert!(!is_lyndon(&[]));
    }

    #[test]
    fn generation_small_lengths() {
        let show = |n| generate_lyndon(n).iter().map(ToString::to_string).collect::<Vec<_>>();
        assert_eq!(show(1), ["0", "1"]);
        assert_eq!(show(2), ["0", "01", "1"]);
        assert_eq!(show(4), ["0", "0001", "001", "0011", "01", "011", "0111", "1"]);
    }

    #[test]
    fn generation_matches_brute_force() {
        for n in 1..=10 {
            let got: Vec<Vec<u8>> = generate_lyndon(n).into_iter().map(|w| w.0).collect();
            assert_eq!(got, brute_force(n), "n = {n}");
        }
    }

    #[test]
    fn factorization_examples() {
        let f = |s| {
            let (u, v) = standard_factorization(&w(s)).unwrap();
            (u.to_string(), v.to_string())
        };
        assert_eq!(f("01"), ("0".into(), "1".into()));
        assert_eq!(f("0011"), ("0".into(), "011".into()));
        assert_eq!(f("00101"), ("001".into(), "01".into()));
        assert!(matches!(standard_factorization(&w("1")), Err(Error::SingleLetter)));
    }

    #[test]
    fn rejects_non_lyndon_input() {
        assert!("10".parse::<LyndonWord>().is_err());
        assert!("012".parse::<LyndonWord>().is_err());
        assert!("".parse::<LyndonWord>().is_err());
    }

    #[test]
    fn factors_are_lyndon_and_ordered() {
        let zero = w("0");
        let one = w("1");
        for word in generate_lyndon(10) {
            assert!(zero <= word && word <= one);
            if word.len() < 2 {
                continue;
            }
            assert!(zero < word && word < one);
            let (u, v) = standard_factorization(&word).unwrap();
            assert!(is_lyndon(u.letters()) && is_lyndon(v.letters()));
            assert_eq!(u.concat(&v), word.letters());
            assert!(u < word && word < v);
        }
    }

    proptest! {
        #[test]
        fn predicate_agrees_with_rotation_definition(word in proptest::collection::vec(0u8..2, 1..14)) {
            let n = word.len();
            let primitive_minimal = (1..n).all(|i| {
                let rot: Vec<u8> = word[i..].iter().chain(&word[..i]).copied().collect();
                word < rot
            });
            prop_assert_eq!(is_lyndon(&word), primitive_minimal);
        }
    }
}
