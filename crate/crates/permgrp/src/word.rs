//! Words in group generators.
//!
//! A [`Word`] is a sequence of generator tokens, each an index into the
//! group's generator list with an inversion mark. The textual form used in
//! word-list files is `g<i>` for generator `i` and `G<i>` for its inverse,
//! whitespace-separated; the empty line is the identity.

use std::fmt;

use crate::{Perm, PermError, Result};

/// One letter of a word: generator `idx`, inverted when `inv` is set.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct GenTok {
    pub idx: u32,
    pub inv: bool,
}

impl GenTok {
    #[must_use]
    pub fn gen(idx: u32) -> Self {
        Self { idx, inv: false }
    }

    #[must_use]
    pub fn inv(idx: u32) -> Self {
        Self { idx, inv: true }
    }

    #[must_use]
    pub fn inverted(self) -> Self {
        Self {
            idx: self.idx,
            inv: !self.inv,
        }
    }
}

/// A word in group generators, evaluated left to right.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<GenTok>);

impl Word {
    #[must_use]
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    #[must_use]
    pub fn single(idx: u32) -> Self {
        Self(vec![GenTok::gen(idx)])
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Concatenation `self * other`.
    #[must_use]
    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        out.extend_from_slice(&other.0);
        Word(out)
    }

    /// The formal inverse (reversed tokens, inversion marks flipped).
    #[must_use]
    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|t| t.inverted()).collect())
    }

    /// Evaluates the word in the given generator list.
    ///
    /// # Errors
    ///
    /// Returns [`PermError::NotMember`] if a token indexes past the list.
    pub fn evaluate(&self, gens: &[Perm], degree: usize) -> Result<Perm> {
        let mut acc = Perm::identity(degree);
        for tok in &self.0 {
            let g = gens.get(tok.idx as usize).ok_or(PermError::NotMember)?;
            let g = if tok.inv { g.inverse() } else { g.clone() };
            acc = acc.mul(&g);
        }
        Ok(acc)
    }

    /// Parses the whitespace-separated `g<i>` / `G<i>` token form.
    ///
    /// # Errors
    ///
    /// Returns [`PermError::NotMember`] for malformed tokens.
    pub fn parse(text: &str) -> Result<Word> {
        let mut toks = Vec::new();
        for tok in text.split_whitespace() {
            let (inv, digits) = match tok.as_bytes().first() {
                Some(b'g') => (false, &tok[1..]),
                Some(b'G') => (true, &tok[1..]),
                _ => return Err(PermError::NotMember),
            };
            let idx: u32 = digits.parse().map_err(|_| PermError::NotMember)?;
            toks.push(GenTok { idx, inv });
        }
        Ok(Word(toks))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, tok) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}{}", if tok.inv { 'G' } else { 'g' }, tok.idx)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word[{self}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_text() {
        let w = Word(vec![GenTok::gen(0), GenTok::inv(2), GenTok::gen(1)]);
        let text = w.to_string();
        assert_eq!(text, "g0 G2 g1");
        assert_eq!(Word::parse(&text).unwrap(), w);
        assert_eq!(Word::parse("").unwrap(), Word::empty());
        assert!(Word::parse("x1").is_err());
        assert!(Word::parse("g").is_err());
    }

    #[test]
    fn evaluate_and_inverse() {
        let a = Perm::from_cycles(4, &[vec![0, 1]]).unwrap();
        let b = Perm::from_cycles(4, &[vec![1, 2, 3]]).unwrap();
        let gens = vec![a.clone(), b.clone()];
        let w = Word(vec![GenTok::gen(0), GenTok::gen(1), GenTok::inv(0)]);
        let val = w.evaluate(&gens, 4).unwrap();
        assert_eq!(val, a.mul(&b).mul(&a.inverse()));
        let winv = w.inverse();
        assert_eq!(winv.evaluate(&gens, 4).unwrap(), val.inverse());
        assert!(w.concat(&winv).evaluate(&gens, 4).unwrap().is_identity());
    }
}
