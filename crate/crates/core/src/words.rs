//! Two-letter (p,q)-Lucas substitution words and the hopping sequences they induce.
//!
//! The rule maps `A -> A^p B` and `B -> A^q`. Iterating it on the seed `A`
//! gives a tower of words in which each word is a prefix of the next, so a
//! chain of any length can be read off a single long word.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on explicitly stored word lengths.
pub const DEFAULT_MAX_LEN: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Symbol {
    A,
    B,
}

impl Symbol {
    pub fn as_char(self) -> char {
        match self {
            Symbol::A => 'A',
            Symbol::B => 'B',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SubstitutionRule {
    p: u32,
    q: u32,
}

impl SubstitutionRule {
    /// The Fibonacci rule `A -> AB`, `B -> A`.
    pub const FIBONACCI: SubstitutionRule = SubstitutionRule { p: 1, q: 1 };

    pub fn new(p: u32, q: u32) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::InvalidRule { p, q });
        }
        Ok(SubstitutionRule { p, q })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// True when the induced waveguide has a central gap (p odd, q even).
    ///
    /// Both images `A^p B` and `A^q` then have even length with `B` only at
    /// odd offsets, so every even-indexed hopping of the word is `t_A`.
    pub fn is_gapped(&self) -> bool {
        self.p % 2 == 1 && self.q.is_multiple_of(2)
    }

    fn image(&self, s: Symbol) -> impl Iterator<Item = Symbol> {
        let (a_count, b_count) = match s {
            Symbol::A => (self.p as usize, 1),
            Symbol::B => (self.q as usize, 0),
        };
        std::iter::repeat_n(Symbol::A, a_count)
            .chain(std::iter::repeat_n(Symbol::B, b_count))
    }

    /// Length of `σ^k(A)` from `L_k = p L_{k-1} + q L_{k-2}`, `None` on overflow.
    pub fn word_length(&self, k: usize) -> Option<u128> {
        let (mut prev, mut cur) = (1u128, 1u128 + self.p as u128);
        if k == 0 {
            return Some(1);
        }
        for _ in 1..k {
            let next = (self.p as u128)
                .checked_mul(cur)?
                .checked_add((self.q as u128).checked_mul(prev)?)?;
            prev = cur;
            cur = next;
        }
        Some(cur)
    }

    /// `σ^k(A)` with the default length cap.
    pub fn generate(&self, k: usize) -> Result<SymbolWord> {
        self.generate_with_limit(k, DEFAULT_MAX_LEN)
    }

    pub fn generate_with_limit(&self, k: usize, max_len: usize) -> Result<SymbolWord> {
        let len = self.word_length(k).unwrap_or(u128::MAX);
        if len > max_len as u128 {
            return Err(Error::WordTooLong { len, max: max_len });
        }
        let mut symbols = vec![Symbol::A];
        for _ in 0..k {
            symbols = symbols.iter().flat_map(|&s| self.image(s)).collect();
        }
        Ok(SymbolWord {
            symbols,
            generation: Some(k),
        })
    }

    /// Smallest generation `k` whose word has at least `n_min` symbols.
    pub fn generation_for_length(&self, n_min: usize) -> usize {
        (0..)
            .find(|&k| self.word_length(k).is_none_or(|l| l >= n_min as u128))
            .unwrap()
    }

    /// The first `n_min` symbols of the shortest `σ^k(A)` that is long enough.
    pub fn generate_at_least(&self, n_min: usize) -> Result<SymbolWord> {
        self.generate_at_least_with_limit(n_min, DEFAULT_MAX_LEN)
    }

    pub fn generate_at_least_with_limit(&self, n_min: usize, max_len: usize) -> Result<SymbolWord> {
        if n_min == 0 {
            return Err(Error::InvalidSpec("requested word length must be >= 1".into()));
        }
        let k = self.generation_for_length(n_min);
        let mut word = self.generate_with_limit(k, max_len)?;
        word.symbols.truncate(n_min);
        Ok(word)
    }

    /// Census of length-`length` factors of the infinite word.
    ///
    /// Generations are increased until the factor sets of `σ^k(A)` and
    /// `σ^{k+1}(A)` agree. If the length cap is reached first, the last census
    /// is returned with `stable == false`.
    pub fn census(&self, length: usize) -> Result<FactorCensus> {
        self.census_with_limit(length, DEFAULT_MAX_LEN)
    }

    pub fn census_with_limit(&self, length: usize, max_len: usize) -> Result<FactorCensus> {
        if length == 0 {
            return Err(Error::InvalidSpec("factor length must be >= 1".into()));
        }
        let mut k = self.generation_for_length(length);
        let mut current = self.generate_with_limit(k, max_len)?.factors(length)?;
        loop {
            let next = match self.generate_with_limit(k + 1, max_len) {
                Ok(w) => w.factors(length)?,
                Err(Error::WordTooLong { .. }) => {
                    return Ok(FactorCensus {
                        length,
                        generation: k,
                        factors: current,
                        stable: false,
                    })
                }
                Err(e) => return Err(e),
            };
            if next == current {
                return Ok(FactorCensus {
                    length,
                    generation: k,
                    factors: current,
                    stable: true,
                });
            }
            current = next;
            k += 1;
        }
    }
}

/// A finite word over `{A, B}`.
///
/// `generation` is the number of substitutions applied to the seed `A` when
/// the word came from a rule (possibly truncated), and `None` otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolWord {
    symbols: Vec<Symbol>,
    generation: Option<usize>,
}

impl SymbolWord {
    pub fn from_symbols(symbols: Vec<Symbol>) -> Self {
        SymbolWord {
            symbols,
            generation: None,
        }
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn generation(&self) -> Option<usize> {
        self.generation
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<Symbol> {
        self.symbols.get(i).copied()
    }

    pub fn prefix(&self, n: usize) -> SymbolWord {
        SymbolWord {
            symbols: self.symbols[..n.min(self.len())].to_vec(),
            generation: self.generation.filter(|_| n >= self.len()),
        }
    }

    pub fn count(&self, s: Symbol) -> usize {
        self.symbols.iter().filter(|&&x| x == s).count()
    }

    /// Ascending start indices of every occurrence of `pattern`.
    pub fn subword_positions(&self, pattern: &SymbolWord) -> Vec<usize> {
        let m = pattern.len();
        if m == 0 || m > self.len() {
            return Vec::new();
        }
        self.symbols
            .windows(m)
            .enumerate()
            .filter(|(_, w)| *w == pattern.symbols())
            .map(|(i, _)| i)
            .collect()
    }

    /// Distinct factors of the given length that occur in this word.
    pub fn factors(&self, length: usize) -> Result<BTreeSet<SymbolWord>> {
        if length == 0 || length > self.len() {
            return Err(Error::InvalidSpec(format!(
                "factor length {length} not in 1..={}",
                self.len()
            )));
        }
        Ok(self
            .symbols
            .windows(length)
            .map(|w| SymbolWord::from_symbols(w.to_vec()))
            .collect())
    }

    pub fn reversed(&self) -> SymbolWord {
        let mut symbols = self.symbols.clone();
        symbols.reverse();
        SymbolWord::from_symbols(symbols)
    }
}

impl fmt::Display for SymbolWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.symbols {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for SymbolWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                'A' => Ok(Symbol::A),
                'B' => Ok(Symbol::B),
                other => Err(Error::InvalidSpec(format!("'{other}' is not a word symbol"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(SymbolWord::from_symbols)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorCensus {
    pub length: usize,
    /// Generation at which the census was taken.
    pub generation: usize,
    pub factors: BTreeSet<SymbolWord>,
    pub stable: bool,
}

/// Hopping rates read off a word: `t_A` for `A`, `t_B` for `B`.
#[derive(Clone, Debug, PartialEq)]
pub struct HoppingSequence {
    word: SymbolWord,
    t_a: f64,
    t_b: f64,
    // b_prefix[j] = number of B among the first j symbols
    b_prefix: Vec<usize>,
}

impl HoppingSequence {
    pub fn new(word: SymbolWord, t_a: f64, t_b: f64) -> Result<Self> {
        if !(t_a > 0.0 && t_b > 0.0 && t_a.is_finite() && t_b.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "hoppings must be positive and finite (t_A={t_a}, t_B={t_b})"
            )));
        }
        let mut b_prefix = Vec::with_capacity(word.len() + 1);
        b_prefix.push(0);
        let mut acc = 0;
        for &s in word.symbols() {
            if s == Symbol::B {
                acc += 1;
            }
            b_prefix.push(acc);
        }
        Ok(HoppingSequence {
            word,
            t_a,
            t_b,
            b_prefix,
        })
    }

    /// Hoppings for a chain of `n_sites` sites built from `rule`.
    pub fn for_chain(rule: SubstitutionRule, n_sites: usize, t_a: f64, t_b: f64) -> Result<Self> {
        if n_sites < 2 {
            return Err(Error::InvalidSpec("a chain needs at least 2 sites".into()));
        }
        HoppingSequence::new(rule.generate_at_least(n_sites - 1)?, t_a, t_b)
    }

    pub fn word(&self) -> &SymbolWord {
        &self.word
    }

    pub fn t_a(&self) -> f64 {
        self.t_a
    }

    pub fn t_b(&self) -> f64 {
        self.t_b
    }

    pub fn rho(&self) -> f64 {
        self.t_b / self.t_a
    }

    /// Number of hoppings.
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// Sites served by this sequence under open boundaries.
    pub fn n_sites(&self) -> usize {
        self.word.len() + 1
    }

    pub fn symbol(&self, j: usize) -> Symbol {
        self.word.symbols()[j]
    }

    pub fn hopping_at(&self, j: usize) -> f64 {
        match self.symbol(j) {
            Symbol::A => self.t_a,
            Symbol::B => self.t_b,
        }
    }

    pub fn hoppings(&self) -> Vec<f64> {
        (0..self.len()).map(|j| self.hopping_at(j)).collect()
    }

    /// Number of `t_B` hoppings linking site `n` to site `m` (bonds `n..m`).
    pub fn beta_count(&self, n: usize, m: usize) -> Result<usize> {
        if m >= self.n_sites() {
            return Err(Error::IndexOutOfRange {
                index: m,
                limit: self.n_sites(),
            });
        }
        if n > m {
            return Err(Error::InvalidSpec(format!("beta_count needs n <= m (n={n}, m={m})")));
        }
        Ok(self.b_prefix[m] - self.b_prefix[n])
    }
}
