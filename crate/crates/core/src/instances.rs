//! Instance files and seeded random generation.
//!
//! File format: one string per line. Blank lines and lines starting with `#`
//! are ignored. An optional `alphabet: <symbols>` line before the first
//! string pins the alphabet and its order; otherwise the alphabet is the
//! sorted set of characters present.
//!
//! Random instances draw every character i.i.d. uniformly from the alphabet
//! using ChaCha8 (`rand_chacha`) seeded with `seed_from_u64`, which yields
//! the same bytes on every platform. Benchmark batches seed instance `i` with
//! `seed ^ i`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::string::{validate_instance, Alphabet, Instance};

const ALPHABET_HEADER: &str = "alphabet:";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub m: usize,
    pub n: usize,
    pub alphabet: Alphabet,
    pub seed: u64,
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.n == 0 {
            return Err(Error::InvalidArgument(format!(
                "need m >= 1 and n >= 1, got m = {}, n = {}",
                self.m, self.n
            )));
        }
        Ok(())
    }
}

/// Seed of instance `index` within a batch.
pub fn batch_seed(seed: u64, index: usize) -> u64 {
    seed ^ index as u64
}

pub fn generate_uniform(cfg: &GeneratorConfig) -> Result<Instance> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let k = cfg.alphabet.len();
    let codes = (0..cfg.m)
        .map(|_| (0..cfg.n).map(|_| rng.gen_range(0..k)).collect())
        .collect();
    Instance::from_codes(cfg.alphabet.clone(), codes)
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut alphabet: Option<Alphabet> = None;
    let mut strings: Vec<Vec<char>> = Vec::new();
    let mut width: Option<usize> = None;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix(ALPHABET_HEADER) {
            if alphabet.is_some() || !strings.is_empty() {
                return Err(Error::format(
                    Some(lineno),
                    "alphabet header must appear once, before the strings",
                ));
            }
            let sigma = Alphabet::parse(rest.trim())
                .map_err(|e| Error::format(Some(lineno), e.to_string()))?;
            alphabet = Some(sigma);
            continue;
        }
        let chars: Vec<char> = line.chars().collect();
        match width {
            None => width = Some(chars.len()),
            Some(w) if w != chars.len() => {
                return Err(Error::format(
                    Some(lineno),
                    format!("string has length {}, expected {w}", chars.len()),
                ));
            }
            _ => {}
        }
        if let Some(sigma) = &alphabet {
            if let Some(bad) = chars.iter().find(|&&c| !sigma.contains(c)) {
                return Err(Error::format(
                    Some(lineno),
                    format!("character {bad:?} not in alphabet \"{sigma}\""),
                ));
            }
        }
        strings.push(chars);
    }

    if strings.is_empty() {
        return Err(Error::format(None, "no strings in input"));
    }
    validate_instance(strings, alphabet)
}

/// Writes the file format. The `alphabet:` header is emitted only when it
/// carries information the strings alone do not: unused symbols or a
/// non-sorted order.
pub fn serialize_instance(inst: &Instance) -> String {
    let mut out = String::new();
    let used: Vec<char> = inst.used_symbols().into_iter().collect();
    if inst.alphabet().symbols() != used.as_slice() {
        out.push_str(&format!("{ALPHABET_HEADER} {}\n", inst.alphabet()));
    }
    for s in inst.strings() {
        out.extend(s.iter());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dna() -> Alphabet {
        Alphabet::parse("ACGT").unwrap()
    }

    #[test]
    fn generation_is_deterministic() {
        let cfg = GeneratorConfig {
            m: 3,
            n: 5,
            alphabet: Alphabet::parse("01").unwrap(),
            seed: 42,
        };
        assert_eq!(generate_uniform(&cfg).unwrap(), generate_uniform(&cfg).unwrap());
        let other = GeneratorConfig { seed: 43, ..cfg.clone() };
        assert_ne!(generate_uniform(&cfg).unwrap(), generate_uniform(&other).unwrap());
    }

    #[test]
    fn generation_dims() {
        let cfg = GeneratorConfig {
            m: 10,
            n: 300,
            alphabet: dna(),
            seed: 1,
        };
        let inst = generate_uniform(&cfg).unwrap();
        assert_eq!((inst.m(), inst.n()), (10, 300));
        assert_eq!(inst.alphabet(), &dna());
    }

    #[test]
    fn generation_rejects_empty_dims() {
        let cfg = GeneratorConfig {
            m: 0,
            n: 5,
            alphabet: dna(),
            seed: 1,
        };
        assert!(matches!(generate_uniform(&cfg), Err(Error::InvalidArgument(_))));
        let cfg = GeneratorConfig { m: 2, n: 0, ..cfg };
        assert!(generate_uniform(&cfg).is_err());
    }

    #[test]
    fn frequencies_are_uniform() {
        let cfg = GeneratorConfig {
            m: 100,
            n: 2000,
            alphabet: dna(),
            seed: 9,
        };
        let inst = generate_uniform(&cfg).unwrap();
        let mut counts = [0usize; 4];
        for row in inst.all_codes() {
            for &a in row {
                counts[a] += 1;
            }
        }
        let total = (cfg.m * cfg.n) as f64;
        let expected = total / 4.0;
        let mut chi2 = 0.0;
        for &c in &counts {
            assert!((c as f64 / total - 0.25).abs() < 0.01, "{counts:?}");
            chi2 += (c as f64 - expected).powi(2) / expected;
        }
        // 99.9% quantile of chi-square with 3 degrees of freedom.
        assert!(chi2 < 16.27, "chi2 = {chi2}");
    }

    #[test]
    fn parse_examples() {
        let inst = parse_instance("ACG\nACT\n").unwrap();
        assert_eq!((inst.m(), inst.n()), (2, 3));

        let inst = parse_instance("# comment\nalphabet: 01\n00\n11\n").unwrap();
        assert_eq!((inst.m(), inst.n()), (2, 2));
        assert_eq!(inst.alphabet().symbols(), &['0', '1']);

        match parse_instance("00\n000\n") {
            Err(Error::Format { line: Some(2), .. }) => {}
            other => panic!("expected format error at line 2, got {other:?}"),
        }
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_instance(""), Err(Error::Format { .. })));
        assert!(matches!(parse_instance("# only\n\n"), Err(Error::Format { .. })));
        assert!(matches!(
            parse_instance("alphabet: 01\n012\n"),
            Err(Error::Format { line: Some(2), .. })
        ));
        assert!(matches!(
            parse_instance("01\nalphabet: 01\n"),
            Err(Error::Format { line: Some(2), .. })
        ));
        assert!(matches!(
            parse_instance("alphabet: 00\n0\n"),
            Err(Error::Format { line: Some(1), .. })
        ));
    }

    #[test]
    fn header_only_when_needed() {
        let inst = parse_instance("AC\nGT\n").unwrap();
        assert_eq!(serialize_instance(&inst), "AC\nGT\n");
        let inst = parse_instance("alphabet: ACGT\nAC\nAA\n").unwrap();
        assert!(serialize_instance(&inst).starts_with("alphabet: ACGT\n"));
        let inst = parse_instance("alphabet: TA\nAT\n").unwrap();
        assert!(serialize_instance(&inst).starts_with("alphabet: TA\n"));
    }

    fn any_instance() -> impl Strategy<Value = Instance> {
        (1usize..6, 1usize..12, 1usize..5).prop_flat_map(|(m, n, k)| {
            proptest::collection::vec(proptest::collection::vec(0..k, n), m).prop_map(move |rows| {
                Instance::from_codes(Alphabet::parse(&"TGCA"[..k]).unwrap(), rows).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn serialize_then_parse_is_identity(inst in any_instance()) {
            prop_assert_eq!(parse_instance(&serialize_instance(&inst)).unwrap(), inst);
        }
    }
}
