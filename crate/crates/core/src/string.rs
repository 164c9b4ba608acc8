//! Instances, alphabets and the Hamming-distance objective.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Number of positions at which `s` and `t` differ.
pub fn hamming_distance<T: PartialEq>(s: &[T], t: &[T]) -> Result<usize> {
    if s.len() != t.len() {
        return Err(Error::InvalidArgument(format!(
            "hamming distance needs equal lengths, got {} and {}",
            s.len(),
            t.len()
        )));
    }
    Ok(s.iter().zip(t).filter(|(a, b)| a != b).count())
}

/// An ordered set of distinct symbols. The order is the tie-break order used
/// by every solver in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    /// Builds an alphabet keeping the given order.
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.is_empty() {
            return Err(Error::InvalidArgument("alphabet is empty".into()));
        }
        let mut seen = BTreeSet::new();
        for &c in &symbols {
            if !seen.insert(c) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate symbol {c:?} in alphabet"
                )));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// Parses an alphabet from a string such as `"ACGT"`.
    pub fn parse(s: &str) -> Result<Self> {
        Alphabet::new(s.chars())
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn symbol(&self, index: usize) -> char {
        self.symbols[index]
    }

    pub fn index_of(&self, c: char) -> Option<usize> {
        self.symbols.iter().position(|&s| s == c)
    }

    pub fn contains(&self, c: char) -> bool {
        self.index_of(c).is_some()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.symbols.iter().try_for_each(|c| write!(f, "{c}"))
    }
}

/// `m` strings of a common length `n` over an alphabet.
///
/// Strings are kept both as characters and as symbol indices into the
/// alphabet; the solvers work on the indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    alphabet: Alphabet,
    strings: Vec<Vec<char>>,
    codes: Vec<Vec<usize>>,
    n: usize,
}

impl Instance {
    /// Builds an instance over an explicit alphabet.
    pub fn new(alphabet: Alphabet, strings: Vec<Vec<char>>) -> Result<Self> {
        let Some(first) = strings.first() else {
            return Err(Error::format(None, "instance has no strings"));
        };
        let n = first.len();
        if n == 0 {
            return Err(Error::format(None, "instance strings are empty"));
        }
        let mut codes = Vec::with_capacity(strings.len());
        for (i, s) in strings.iter().enumerate() {
            if s.len() != n {
                return Err(Error::format(
                    None,
                    format!("string {} has length {}, expected {n}", i + 1, s.len()),
                ));
            }
            let row = s
                .iter()
                .map(|&c| {
                    alphabet.index_of(c).ok_or_else(|| {
                        Error::format(
                            None,
                            format!("string {} uses {c:?}, not in alphabet \"{alphabet}\"", i + 1),
                        )
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            codes.push(row);
        }
        Ok(Instance {
            alphabet,
            strings,
            codes,
            n,
        })
    }

    /// Convenience constructor with an inferred alphabet.
    pub fn from_strs<S: AsRef<str>>(strings: &[S]) -> Result<Self> {
        validate_instance(
            strings.iter().map(|s| s.as_ref().chars().collect()).collect(),
            None,
        )
    }

    /// Rebuilds an instance from symbol indices.
    pub fn from_codes(alphabet: Alphabet, codes: Vec<Vec<usize>>) -> Result<Self> {
        let strings = codes
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&a| {
                        alphabet.symbols().get(a).copied().ok_or_else(|| {
                            Error::InvalidArgument(format!("symbol index {a} out of range"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Instance::new(alphabet, strings)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Number of strings.
    pub fn m(&self) -> usize {
        self.strings.len()
    }

    /// Common string length.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn strings(&self) -> &[Vec<char>] {
        &self.strings
    }

    /// Symbol indices of string `i`.
    pub fn codes(&self, i: usize) -> &[usize] {
        &self.codes[i]
    }

    pub fn all_codes(&self) -> &[Vec<usize>] {
        &self.codes
    }

    /// Distinct symbols occurring in column `j`, in alphabet order.
    pub fn column_symbols(&self, j: usize) -> Vec<usize> {
        let mut present = vec![false; self.alphabet.len()];
        for row in &self.codes {
            present[row[j]] = true;
        }
        (0..present.len()).filter(|&a| present[a]).collect()
    }

    /// Symbols used anywhere in the instance.
    pub fn used_symbols(&self) -> BTreeSet<char> {
        self.strings.iter().flatten().copied().collect()
    }

    /// Scores a center given as symbol indices. Indices must be in range.
    pub fn evaluate_codes(&self, center: &[usize]) -> CenterString {
        debug_assert_eq!(center.len(), self.n);
        let distances: Vec<usize> = self
            .codes
            .iter()
            .map(|row| row.iter().zip(center).filter(|(a, b)| a != b).count())
            .collect();
        CenterString {
            chars: center.iter().map(|&a| self.alphabet.symbol(a)).collect(),
            objective: distances.iter().copied().max().unwrap_or(0),
            distances,
        }
    }
}

/// Validates raw strings into an [`Instance`]. Without an explicit alphabet,
/// the alphabet is the sorted set of characters present.
pub fn validate_instance(raw: Vec<Vec<char>>, alphabet: Option<Alphabet>) -> Result<Instance> {
    if raw.is_empty() {
        return Err(Error::format(None, "instance has no strings"));
    }
    let alphabet = match alphabet {
        Some(a) => a,
        None => {
            let used: BTreeSet<char> = raw.iter().flatten().copied().collect();
            if used.is_empty() {
                return Err(Error::format(None, "instance strings are empty"));
            }
            Alphabet::new(used)?
        }
    };
    Instance::new(alphabet, raw)
}

/// A candidate center with its exact distances.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CenterString {
    pub chars: Vec<char>,
    pub distances: Vec<usize>,
    pub objective: usize,
}

impl CenterString {
    pub fn as_string(&self) -> String {
        self.chars.iter().collect()
    }
}

impl fmt::Display for CenterString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.chars.iter().try_for_each(|c| write!(f, "{c}"))
    }
}

/// Scores `t` against every string of `inst`.
pub fn objective(t: &[char], inst: &Instance) -> Result<CenterString> {
    if t.len() != inst.n() {
        return Err(Error::InvalidArgument(format!(
            "center has length {}, instance length is {}",
            t.len(),
            inst.n()
        )));
    }
    let codes = t
        .iter()
        .map(|&c| {
            inst.alphabet().index_of(c).ok_or_else(|| {
                Error::InvalidArgument(format!("center symbol {c:?} not in alphabet"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(inst.evaluate_codes(&codes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn chars(s: &str) -> Vec<char> {
        s.chars().collect()
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming_distance(&chars("ACGT"), &chars("ACGT")).unwrap(), 0);
        assert_eq!(hamming_distance(&chars("000"), &chars("111")).unwrap(), 3);
        assert_eq!(hamming_distance(&chars("ACGT"), &chars("AGGT")).unwrap(), 1);
    }

    #[test]
    fn hamming_length_mismatch() {
        let err = hamming_distance(&chars("AC"), &chars("A")).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }

    #[test]
    fn objective_examples() {
        let inst = Instance::from_strs(&["ACG", "ACT", "CCG"]).unwrap();
        let c = objective(&chars("ACG"), &inst).unwrap();
        assert_eq!(c.distances, vec![0, 1, 1]);
        assert_eq!(c.objective, 1);

        let single = Instance::from_strs(&["GATTACA"]).unwrap();
        assert_eq!(objective(&chars("GATTACA"), &single).unwrap().objective, 0);

        let bin = Instance::from_strs(&["00", "11"]).unwrap();
        let c = objective(&chars("01"), &bin).unwrap();
        assert_eq!(c.distances, vec![1, 1]);
        assert_eq!(c.objective, 1);
    }

    #[test]
    fn objective_rejects_bad_centers() {
        let inst = Instance::from_strs(&["00", "11"]).unwrap();
        assert!(objective(&chars("0"), &inst).is_err());
        assert!(objective(&chars("0x"), &inst).is_err());
    }

    #[test]
    fn validate_examples() {
        let inst = Instance::from_strs(&["AC", "AG"]).unwrap();
        assert_eq!((inst.m(), inst.n()), (2, 2));
        assert_eq!(inst.alphabet().symbols(), &['A', 'C', 'G']);

        let ragged = Instance::from_strs(&["A", "AC"]).unwrap_err();
        assert!(matches!(ragged, Error::Format { .. }));

        let empty: [&str; 0] = [];
        assert!(matches!(
            Instance::from_strs(&empty).unwrap_err(),
            Error::Format { .. }
        ));
    }

    #[test]
    fn explicit_alphabet_order_is_kept() {
        let sigma = Alphabet::parse("TGCA").unwrap();
        let inst = validate_instance(vec![chars("AC")], Some(sigma)).unwrap();
        assert_eq!(inst.codes(0), &[3, 2]);
        assert!(Alphabet::parse("AA").is_err());
        assert!(Alphabet::parse("").is_err());
    }

    #[test]
    fn column_symbols_in_alphabet_order() {
        let inst = Instance::from_strs(&["GA", "AA", "GC"]).unwrap();
        assert_eq!(inst.column_symbols(0), vec![0, 2]);
        assert_eq!(inst.column_symbols(1), vec![0, 1]);
    }

    fn triple(len: usize) -> impl Strategy<Value = (Vec<u8>, Vec<u8>, Vec<u8>)> {
        let s = proptest::collection::vec(0u8..4, len);
        (s.clone(), s.clone(), s)
    }

    proptest! {
        #[test]
        fn hamming_is_a_metric((s, t, u) in (0usize..20).prop_flat_map(triple)) {
            let st = hamming_distance(&s, &t).unwrap();
            prop_assert_eq!(st, hamming_distance(&t, &s).unwrap());
            prop_assert!(hamming_distance(&s, &u).unwrap() <= st + hamming_distance(&t, &u).unwrap());
            prop_assert_eq!(hamming_distance(&s, &s).unwrap(), 0);
        }

        #[test]
        fn objective_is_max_distance(rows in proptest::collection::vec(proptest::collection::vec(0usize..3, 6), 1..6),
                                     center in proptest::collection::vec(0usize..3, 6)) {
            let sigma = Alphabet::parse("abc").unwrap();
            let inst = Instance::from_codes(sigma.clone(), rows.clone()).unwrap();
            let t: Vec<char> = center.iter().map(|&a| sigma.symbol(a)).collect();
            let scored = objective(&t, &inst).unwrap();
            let expect = rows.iter().map(|r| r.iter().zip(&center).filter(|(a, b)| a != b).count()).max().unwrap();
            prop_assert_eq!(scored.objective, expect);
        }
    }
}
