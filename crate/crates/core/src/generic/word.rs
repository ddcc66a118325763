use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::mobius::GElement;

/// A reduced word in a free group. Letter `k > 0` is generator k (1-based),
/// `-k` its inverse.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    letters: Vec<i32>,
}

impl Word {
    pub fn new(letters: impl IntoIterator<Item = i32>) -> Self {
        let mut out: Vec<i32> = Vec::new();
        for l in letters {
            assert!(l != 0, "letter 0 is not a generator");
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    pub fn empty() -> Self {
        Word::default()
    }

    pub fn generator(k: i32) -> Self {
        Word::new([k])
    }

    /// Generators a, b, c, ... with inverses A, B, C, ...; for rank-2 words
    /// x, y, X, Y are accepted as well. "1" is the empty word.
    pub fn parse(s: &str) -> Result<Self> {
        if s.trim() == "1" {
            return Ok(Word::empty());
        }
        let xy = s.chars().all(|c| matches!(c, 'x' | 'y' | 'X' | 'Y' | ' '));
        let mut letters = Vec::new();
        for c in s.chars().filter(|c| !c.is_whitespace()) {
            let l = match c {
                'x' if xy => 1,
                'y' if xy => 2,
                'X' if xy => -1,
                'Y' if xy => -2,
                'a'..='z' => (c as u8 - b'a' + 1) as i32,
                'A'..='Z' => -((c as u8 - b'A' + 1) as i32),
                _ => return Err(Error::Parse { field: "word".into(), reason: format!("unexpected character {c:?} in {s:?}") }),
            };
            letters.push(l);
        }
        Ok(Word::new(letters))
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Largest generator index used.
    pub fn rank(&self) -> usize {
        self.letters.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| -l).collect() }
    }

    pub fn concat(&self, o: &Word) -> Word {
        Word::new(self.letters.iter().chain(&o.letters).cloned())
    }

    pub fn pow(&self, n: u32) -> Word {
        Word::new((0..n).flat_map(|_| self.letters.iter().cloned()))
    }

    /// [u, v] = u v u^-1 v^-1.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.concat(v).concat(&u.inverse()).concat(&v.inverse())
    }

    /// w(images[0], images[1], ...).
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out = Vec::new();
        for &l in &self.letters {
            let img = &images[l.unsigned_abs() as usize - 1];
            if l > 0 {
                out.extend_from_slice(&img.letters);
            } else {
                out.extend(img.letters.iter().rev().map(|x| -x));
            }
        }
        Word::new(out)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for &l in &self.letters {
            let k = l.unsigned_abs() as u8 - 1;
            let c = if l > 0 { (b'a' + k) as char } else { (b'A' + k) as char };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Evaluate w on generators (inverses are adjugates, i.e. inverses in PGL2).
pub fn word_eval(w: &Word, gens: &[GElement]) -> Result<GElement> {
    let first = gens.first().ok_or_else(|| Error::param("no generators"))?;
    if w.rank() > gens.len() {
        return Err(Error::param(format!("word {w} uses {} generators, {} given", w.rank(), gens.len())));
    }
    let inverses: Vec<GElement> = gens.iter().map(|g| g.inv()).collect();
    let mut acc = GElement::identity(first.designation());
    for &l in w.letters() {
        let k = l.unsigned_abs() as usize - 1;
        acc = acc.mul(if l > 0 { &gens[k] } else { &inverses[k] });
    }
    Ok(acc)
}

/// w0([x^2, [y^2, x^2]], x^-1 [x^2, [y^2, x^2]] x).
pub fn double_commutator_word(w0: &Word) -> Result<Word> {
    if w0.is_empty() {
        return Err(Error::param("double commutator of the trivial word"));
    }
    if w0.rank() > 2 {
        return Err(Error::param("double commutator needs a word in two letters"));
    }
    let x = Word::generator(1);
    let y = Word::generator(2);
    let x2 = x.pow(2);
    let c = Word::commutator(&x2, &Word::commutator(&y.pow(2), &x2));
    let d = x.inverse().concat(&c).concat(&x);
    Ok(w0.substitute(&[c, d]))
}

/// w_1 = [x, y], w_{m+1} = [w_m(x, y), w_m(y^-1 x y, x^-1 y^-1 x)].
pub fn almost_law_family(m: usize) -> Result<Word> {
    if m == 0 {
        return Err(Error::param("almost-law level must be >= 1"));
    }
    let x = Word::generator(1);
    let y = Word::generator(2);
    let u = y.inverse().concat(&x).concat(&y);
    let v = x.inverse().concat(&y.inverse()).concat(&x);
    let mut w = Word::commutator(&x, &y);
    for _ in 1..m {
        w = Word::commutator(&w, &w.substitute(&[u.clone(), v.clone()]));
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_display() {
        let w = Word::parse("xyXY").unwrap();
        assert_eq!(w.to_string(), "abAB");
        assert_eq!(Word::parse("abBA").unwrap(), Word::empty());
        assert_eq!(w.concat(&w.inverse()), Word::empty());
        assert!(Word::parse("a1").is_err());
    }

    #[test]
    fn family_lengths() {
        let lens: Vec<usize> = (1..=4).map(|m| almost_law_family(m).unwrap().len()).collect();
        assert_eq!(lens, vec![4, 32, 226, 1656]);
        let dc = double_commutator_word(&Word::generator(1)).unwrap();
        // x^2 (y^2 x^2 y^-2 x^-2) x^-2 (x^2 y^2 x^-2 y^-2)
        assert_eq!(dc.to_string(), "aabbaaBBAAbbAABB");
        assert!(double_commutator_word(&Word::empty()).is_err());
    }
}
