use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::word::{double_commutator_word, word_eval, Word};
use crate::error::{Error, Result};
use crate::mobius::{eigenvalue, is_generic, GElement, GenericityVerdict};
use crate::nfield::FieldElement;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    Direct,
    DoubleCommutator,
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub n_max: usize,
    pub mode: SearchMode,
    /// Stop (truncated) before a level whose candidate count would exceed this total.
    pub max_candidates: usize,
    /// Outer word for the double-commutator mode.
    pub w0: Word,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { n_max: 8, mode: SearchMode::Direct, max_candidates: 2_000_000, w0: Word::generator(1) }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    /// Word in the generators of F (a, b, ... and inverses A, B, ...).
    pub word: Word,
    pub length: usize,
    /// (A, B) for the double-commutator mode.
    pub pair: Option<(Word, Word)>,
    pub verdict: GenericityVerdict,
    pub alpha_minpoly: String,
    pub alpha_degree: usize,
    /// [Q(alpha) : k].
    pub relative_degree: f64,
    #[serde(skip)]
    pub element: Option<GElement>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchResult {
    pub witness: Option<Witness>,
    /// Every candidate up to n_max was examined without success.
    pub exhausted: bool,
    pub truncated: bool,
    pub n_max: usize,
    pub levels_completed: usize,
    pub candidates: usize,
    pub note: String,
}

fn letter(t: usize, n: usize) -> i32 {
    if t < n {
        t as i32 + 1
    } else {
        -((t - n) as i32 + 1)
    }
}

/// Cheap exact rejections before the full test.
fn plausible(g: &GElement) -> bool {
    if g.is_identity() {
        return false;
    }
    let field = g.matrix().field();
    g.s2() != FieldElement::from_int(field, 4)
}

fn check(g: &GElement) -> Option<GenericityVerdict> {
    if !plausible(g) {
        return None;
    }
    match is_generic(g) {
        Ok(v) if v.generic => Some(v),
        _ => None,
    }
}

struct Ctx<'a> {
    gens: &'a [GElement],
    inverses: Vec<GElement>,
    n: usize,
}

impl Ctx<'_> {
    fn elem(&self, l: i32) -> &GElement {
        let k = l.unsigned_abs() as usize - 1;
        if l > 0 {
            &self.gens[k]
        } else {
            &self.inverses[k]
        }
    }

    /// First generic word of exactly `left` more letters extending `word`, in lex order.
    fn dfs(&self, acc: &GElement, word: &mut Vec<i32>, left: usize) -> Option<(Vec<i32>, GenericityVerdict, GElement)> {
        if left == 0 {
            return check(acc).map(|v| (word.clone(), v, acc.clone()));
        }
        for t in 0..2 * self.n {
            let l = letter(t, self.n);
            if word.last() == Some(&-l) {
                continue;
            }
            let next = acc.mul(self.elem(l));
            word.push(l);
            let hit = self.dfs(&next, word, left - 1);
            word.pop();
            if hit.is_some() {
                return hit;
            }
        }
        None
    }
}

fn finish(f: &[GElement], word: Word, pair: Option<(Word, Word)>, verdict: GenericityVerdict, g: GElement) -> Result<Witness> {
    let alpha = eigenvalue(&g)?;
    let d = f[0].matrix().field().degree();
    Ok(Witness {
        length: word.len(),
        word,
        pair,
        verdict,
        alpha_minpoly: alpha.minpoly().to_string(),
        alpha_degree: alpha.degree(),
        relative_degree: alpha.degree() as f64 / d as f64,
        element: Some(g),
    })
}

fn count_reduced(n: usize, len: usize) -> usize {
    if len == 0 {
        return 1;
    }
    (2 * n).saturating_mul((2 * n - 1).saturating_pow(len as u32 - 1))
}

/// Search F^(<= n_max) for a generic element, in length-lexicographic order
/// over the alphabet F then F^-1. The earliest witness in that order is
/// returned regardless of thread scheduling.
pub fn search_generic(f: &[GElement], opts: &SearchOptions) -> Result<SearchResult> {
    if f.is_empty() {
        return Err(Error::param("search_generic needs at least one generator"));
    }
    for g in f {
        if !g.matrix().field().same_as(f[0].matrix().field()) {
            return Err(Error::FieldMismatch("generators over different fields".into()));
        }
    }
    match opts.mode {
        SearchMode::Direct => search_direct(f, opts),
        SearchMode::DoubleCommutator => search_double_commutator(f, opts),
    }
}

fn search_direct(f: &[GElement], opts: &SearchOptions) -> Result<SearchResult> {
    let n = f.len();
    let ctx = Ctx { gens: f, inverses: f.iter().map(|g| g.inv()).collect(), n };
    let mut candidates = 0usize;
    for len in 1..=opts.n_max {
        let c = count_reduced(n, len);
        if candidates.saturating_add(c) > opts.max_candidates {
            return Ok(SearchResult {
                witness: None,
                exhausted: false,
                truncated: true,
                n_max: opts.n_max,
                levels_completed: len - 1,
                candidates,
                note: format!("candidate budget {} reached before length {len}", opts.max_candidates),
            });
        }
        candidates += c;
        let hits: Vec<Option<(Vec<i32>, GenericityVerdict, GElement)>> = (0..2 * n)
            .into_par_iter()
            .map(|t| {
                let l = letter(t, n);
                let mut word = vec![l];
                ctx.dfs(ctx.elem(l), &mut word, len - 1)
            })
            .collect();
        if let Some((w, v, g)) = hits.into_iter().flatten().next() {
            let wit = finish(f, Word::new(w), None, v, g)?;
            return Ok(SearchResult {
                witness: Some(wit),
                exhausted: false,
                truncated: false,
                n_max: opts.n_max,
                levels_completed: len,
                candidates,
                note: "generic element found".into(),
            });
        }
    }
    Ok(exhausted(opts, candidates))
}

fn exhausted(opts: &SearchOptions, candidates: usize) -> SearchResult {
    SearchResult {
        witness: None,
        exhausted: true,
        truncated: false,
        n_max: opts.n_max,
        levels_completed: opts.n_max,
        candidates,
        note: format!("no generic element up to length {}: evidence, not proof, that F is not Zariski dense", opts.n_max),
    }
}

/// All reduced nonempty words of length <= m in length-lex order.
fn words_up_to(n: usize, m: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut level: Vec<Vec<i32>> = vec![vec![]];
    for _ in 0..m {
        let mut next = Vec::new();
        for w in &level {
            for t in 0..2 * n {
                let l = letter(t, n);
                if w.last() != Some(&-l) {
                    let mut w2 = w.clone();
                    w2.push(l);
                    next.push(w2);
                }
            }
        }
        out.extend(next.iter().map(|w| Word::new(w.iter().cloned())));
        level = next;
    }
    out
}

/// Pairs (A, B) with |A| + |B| <= n_max, ordered by total length then
/// lexicographically; W = w0(C, A^-1 C A) with C = [A^2, [B^2, A^2]].
fn search_double_commutator(f: &[GElement], opts: &SearchOptions) -> Result<SearchResult> {
    let n = f.len();
    let outer = double_commutator_word(&opts.w0)?;
    let words = words_up_to(n, opts.n_max.saturating_sub(1));
    let mut candidates = 0usize;
    for total in 2..=opts.n_max {
        let pairs: Vec<(&Word, &Word)> = words
            .iter()
            .flat_map(|a| words.iter().filter(move |b| a.len() + b.len() == total).map(move |b| (a, b)))
            .collect();
        if candidates.saturating_add(pairs.len()) > opts.max_candidates {
            return Ok(SearchResult {
                witness: None,
                exhausted: false,
                truncated: true,
                n_max: opts.n_max,
                levels_completed: total - 1,
                candidates,
                note: format!("candidate budget {} reached before total length {total}", opts.max_candidates),
            });
        }
        candidates += pairs.len();
        let hit = pairs
            .par_iter()
            .map(|(a, b)| -> Option<(Word, Word, Word, GenericityVerdict, GElement)> {
                let w = outer.substitute(&[(*a).clone(), (*b).clone()]);
                if w.is_empty() {
                    return None;
                }
                let g = word_eval(&w, f).ok()?;
                check(&g).map(|v| ((*a).clone(), (*b).clone(), w, v, g))
            })
            .find_first(|h| h.is_some())
            .flatten();
        if let Some((a, b, w, v, g)) = hit {
            let wit = finish(f, w, Some((a, b)), v, g)?;
            return Ok(SearchResult {
                witness: Some(wit),
                exhausted: false,
                truncated: false,
                n_max: opts.n_max,
                levels_completed: total,
                candidates,
                note: "generic element found".into(),
            });
        }
    }
    Ok(exhausted(opts, candidates))
}
