//! Braid words, their closures, and the named families `FT`, `JM`, `T`.

use serde::{Deserialize, Serialize};
use std::fmt;

/// A braid word on `n` strands; letter `(i, ±1)` is `σ_i^{±1}` with `1 ≤ i < n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    pub n: usize,
    pub letters: Vec<(usize, i8)>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BraidError {
    #[error("malformed token {0:?}")]
    Malformed(String),
    #[error("generator index 0 in {0:?}; indices start at 1")]
    ZeroIndex(String),
    #[error("invalid builder {0:?}: {1}")]
    Builder(String, String),
    #[error("strand count {0} is too small for generator index {1}")]
    TooFewStrands(usize, usize),
}

/// Closure data: permutation, components and writhe.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureInfo {
    /// `w[i]` is the image of strand `i` (0-based); `w = s_{i_1} ∘ ⋯ ∘ s_{i_r}`.
    pub w: Vec<usize>,
    /// Cycles of `w`, each sorted, ordered by their minimum strand.
    pub cycles: Vec<Vec<usize>>,
    /// Strand → index into `cycles`.
    pub component_of: Vec<usize>,
    pub writhe: i64,
}

impl ClosureInfo {
    pub fn components(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_pure(&self) -> bool {
        self.w.iter().enumerate().all(|(i, &j)| i == j)
    }
}

impl BraidWord {
    pub fn new(n: usize, letters: Vec<(usize, i8)>) -> Result<BraidWord, BraidError> {
        for &(i, s) in &letters {
            if i == 0 {
                return Err(BraidError::ZeroIndex(format!("s{i}")));
            }
            if i >= n {
                return Err(BraidError::TooFewStrands(n, i));
            }
            assert!(s == 1 || s == -1, "letter sign must be ±1");
        }
        Ok(BraidWord { n: n.max(1), letters })
    }

    pub fn identity(n: usize) -> BraidWord {
        BraidWord { n: n.max(1), letters: vec![] }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, o: &BraidWord) -> BraidWord {
        let mut letters = self.letters.clone();
        letters.extend(o.letters.iter().copied());
        BraidWord { n: self.n.max(o.n), letters }
    }

    /// The same word read on more strands.
    pub fn with_strands(&self, n: usize) -> BraidWord {
        assert!(n >= self.n);
        BraidWord { n, letters: self.letters.clone() }
    }

    pub fn full_twist(n: usize, k: i64) -> BraidWord {
        let mut letters = Vec::new();
        let sign = if k < 0 { -1 } else { 1 };
        for _ in 0..(k.unsigned_abs() as usize * n) {
            for i in 1..n {
                letters.push((i, sign));
            }
        }
        BraidWord { n: n.max(1), letters }
    }

    pub fn jucys_murphy(n: usize) -> BraidWord {
        let mut letters: Vec<(usize, i8)> = (1..n).rev().map(|i| (i, 1)).collect();
        letters.extend((1..n).map(|i| (i, 1)));
        BraidWord { n: n.max(1), letters }
    }

    pub fn torus(n: usize, m: i64) -> BraidWord {
        let sign = if m < 0 { -1 } else { 1 };
        let mut letters = Vec::new();
        for _ in 0..m.unsigned_abs() {
            for i in 1..n {
                letters.push((i, sign));
            }
        }
        BraidWord { n: n.max(1), letters }
    }

    pub fn closure(&self) -> ClosureInfo {
        let n = self.n;
        let mut w: Vec<usize> = (0..n).collect();
        // w ← w ∘ s_i for each letter in order.
        for &(i, _) in &self.letters {
            w.swap(i - 1, i);
        }
        let mut component_of = vec![usize::MAX; n];
        let mut cycles = Vec::new();
        for s in 0..n {
            if component_of[s] != usize::MAX {
                continue;
            }
            let mut cyc = vec![s];
            component_of[s] = cycles.len();
            let mut j = w[s];
            while j != s {
                component_of[j] = cycles.len();
                cyc.push(j);
                j = w[j];
            }
            cyc.sort();
            cycles.push(cyc);
        }
        let writhe = self.letters.iter().map(|l| l.1 as i64).sum();
        ClosureInfo { w, cycles, component_of, writhe }
    }

    /// The word with every letter at the given positions inverted.
    pub fn flip(&self, positions: &[usize]) -> BraidWord {
        let mut b = self.clone();
        for &p in positions {
            b.letters[p].1 = -b.letters[p].1;
        }
        b
    }

    /// `true` if free cancellation of adjacent inverse letters empties the word.
    pub fn freely_trivial(&self) -> bool {
        let mut stack: Vec<(usize, i8)> = Vec::new();
        for &l in &self.letters {
            match stack.last() {
                Some(&(i, s)) if i == l.0 && s == -l.1 => {
                    stack.pop();
                }
                _ => stack.push(l),
            }
        }
        stack.is_empty()
    }
}

impl fmt::Display for BraidWord {
    /// Canonical text `@n s1^2 s2^-1 ...`; consecutive equal letters are grouped.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "@{}", self.n)?;
        let mut k = 0;
        while k < self.letters.len() {
            let (i, s) = self.letters[k];
            let mut run = 1;
            while k + run < self.letters.len() && self.letters[k + run] == (i, s) {
                run += 1;
            }
            let e = run as i64 * s as i64;
            if e == 1 {
                write!(f, " s{i}")?;
            } else {
                write!(f, " s{i}^{e}")?;
            }
            k += run;
        }
        Ok(())
    }
}

fn parse_int<T: std::str::FromStr>(s: &str, tok: &str) -> Result<T, BraidError> {
    s.trim().parse().map_err(|_| BraidError::Malformed(tok.to_string()))
}

fn builder(tok: &str) -> Result<Option<BraidWord>, BraidError> {
    let Some(open) = tok.find('(') else { return Ok(None) };
    if !tok.ends_with(')') {
        return Err(BraidError::Malformed(tok.to_string()));
    }
    let name = &tok[..open];
    let args: Vec<&str> = tok[open + 1..tok.len() - 1].split(',').collect();
    let bad = |why: &str| BraidError::Builder(tok.to_string(), why.to_string());
    match (name, args.len()) {
        ("FT", 2) => {
            let n: usize = parse_int(args[0], tok)?;
            let k: i64 = parse_int(args[1], tok)?;
            if n < 1 || k == 0 {
                return Err(bad("need n ≥ 1 and k ≠ 0"));
            }
            Ok(Some(BraidWord::full_twist(n, k)))
        }
        ("JM", 1) => {
            let n: usize = parse_int(args[0], tok)?;
            if n < 2 {
                return Err(bad("need n ≥ 2"));
            }
            Ok(Some(BraidWord::jucys_murphy(n)))
        }
        ("T", 2) => {
            let n: usize = parse_int(args[0], tok)?;
            let m: i64 = parse_int(args[1], tok)?;
            if n < 1 || m == 0 {
                return Err(bad("need n ≥ 1 and m ≠ 0"));
            }
            Ok(Some(BraidWord::torus(n, m)))
        }
        _ => Err(bad("unknown builder or wrong arity")),
    }
}

/// Parses the braid grammar: whitespace-separated `s<i>`, `s<i>^<k>`,
/// `FT(n,k)`, `JM(n)`, `T(n,m)`, with an optional leading `@n`.
pub fn parse_braid(text: &str) -> Result<BraidWord, BraidError> {
    // Remove whitespace inside parentheses so `FT(2, 1)` is one token.
    let mut norm = String::with_capacity(text.len());
    let mut depth = 0i32;
    for ch in text.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if depth > 0 && ch.is_whitespace() {
            continue;
        }
        norm.push(ch);
    }
    if depth != 0 {
        return Err(BraidError::Malformed(text.to_string()));
    }
    let mut override_n: Option<usize> = None;
    let mut n = 1usize;
    let mut letters = Vec::new();
    for (idx, tok) in norm.split_whitespace().enumerate() {
        if let Some(rest) = tok.strip_prefix('@') {
            if idx != 0 {
                return Err(BraidError::Malformed(tok.to_string()));
            }
            override_n = Some(parse_int(rest, tok)?);
            continue;
        }
        if let Some(b) = builder(tok)? {
            n = n.max(b.n);
            letters.extend(b.letters);
            continue;
        }
        let body = tok.strip_prefix('s').ok_or_else(|| BraidError::Malformed(tok.to_string()))?;
        let (idx_s, exp) = match body.split_once('^') {
            Some((i, e)) => (i, parse_int::<i64>(e, tok)?),
            None => (body, 1),
        };
        if idx_s.is_empty() || !idx_s.chars().all(|c| c.is_ascii_digit()) {
            return Err(BraidError::Malformed(tok.to_string()));
        }
        let i: usize = parse_int(idx_s, tok)?;
        if i == 0 {
            return Err(BraidError::ZeroIndex(tok.to_string()));
        }
        if exp == 0 {
            return Err(BraidError::Malformed(tok.to_string()));
        }
        n = n.max(i + 1);
        let s = if exp < 0 { -1 } else { 1 };
        for _ in 0..exp.unsigned_abs() {
            letters.push((i, s));
        }
    }
    if let Some(m) = override_n {
        if m < n {
            return Err(BraidError::TooFewStrands(m, n - 1));
        }
        n = m;
    }
    BraidWord::new(n, letters)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powers_and_builders() {
        let b = parse_braid("s1^2").unwrap();
        assert_eq!(b, BraidWord { n: 2, letters: vec![(1, 1), (1, 1)] });
        assert_eq!(parse_braid("FT(2,1)").unwrap(), b);
        assert_eq!(parse_braid("JM(3)").unwrap(), parse_braid("s2 s1^2 s2").unwrap());
        assert_eq!(parse_braid("s1^-2").unwrap().letters, vec![(1, -1), (1, -1)]);
        assert_eq!(parse_braid("FT(2, 1)").unwrap(), b);
    }

    #[test]
    fn strand_override_and_errors() {
        assert_eq!(parse_braid("@3 s1").unwrap().n, 3);
        assert_eq!(parse_braid("").unwrap(), BraidWord::identity(1));
        assert!(matches!(parse_braid("s0"), Err(BraidError::ZeroIndex(_))));
        assert!(matches!(parse_braid("x1"), Err(BraidError::Malformed(_))));
        assert!(matches!(parse_braid("JM(1)"), Err(BraidError::Builder(..))));
        assert!(matches!(parse_braid("@2 s2"), Err(BraidError::TooFewStrands(..))));
        assert!(parse_braid("s1^0").is_err());
    }

    #[test]
    fn closures() {
        let c = parse_braid("s1^2").unwrap().closure();
        assert_eq!((c.w.clone(), c.components(), c.writhe), (vec![0, 1], 2, 2));
        let c = parse_braid("s1^3").unwrap().closure();
        assert_eq!((c.w.clone(), c.components(), c.writhe), (vec![1, 0], 1, 3));
        let c = parse_braid("FT(3,1)").unwrap().closure();
        assert!(c.is_pure());
        assert_eq!((c.components(), c.writhe), (3, 6));
        assert_eq!(parse_braid("T(4,6)").unwrap().closure().components(), 2);
    }

    #[test]
    fn canonical_text_round_trip() {
        let b = parse_braid("s1 s1 s2^-1 s1").unwrap();
        assert_eq!(b.to_string(), "@3 s1^2 s2^-1 s1");
        assert_eq!(parse_braid(&b.to_string()).unwrap(), b);
    }
}
