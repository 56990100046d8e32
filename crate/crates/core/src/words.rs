//! Words in the genus-2 surface group `<a,b,c,d | [a,b][c,d]>`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const GENUS: usize = 2;
pub const RANK: usize = 2 * GENUS;
pub const RELATOR_LEN: usize = 4 * GENUS;

/// A generator (`gen` in `0..RANK`, so `a, b, c, d`) or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub gen: u8,
    pub pos: bool,
}

impl Letter {
    pub fn new(gen: u8, pos: bool) -> Self {
        Letter { gen, pos }
    }

    pub fn inv(self) -> Self {
        Letter { gen: self.gen, pos: !self.pos }
    }

    pub fn from_char(c: char) -> Option<Self> {
        let lc = c.to_ascii_lowercase();
        if !('a'..='d').contains(&lc) {
            return None;
        }
        Some(Letter { gen: lc as u8 - b'a', pos: c.is_ascii_lowercase() })
    }

    pub fn to_char(self) -> char {
        let c = (b'a' + self.gen) as char;
        if self.pos {
            c
        } else {
            c.to_ascii_uppercase()
        }
    }

    /// Order `a < A < b < B < ...`.
    pub fn rank(self) -> u8 {
        2 * self.gen + u8::from(!self.pos)
    }

    /// Slot of the outgoing (`true`) or incoming half-edge of this generator.
    pub fn gen_slot(gen: u8, outgoing: bool) -> usize {
        let k = 4 * (gen as usize / 2);
        match (gen.is_multiple_of(2), outgoing) {
            (true, true) => k,
            (true, false) => k + 2,
            (false, false) => k + 1,
            (false, true) => k + 3,
        }
    }

    /// Slot through which a path reading this letter leaves a vertex.
    pub fn departure_slot(self) -> usize {
        Self::gen_slot(self.gen, self.pos)
    }

    /// Slot through which a path reading this letter enters a vertex.
    pub fn arrival_slot(self) -> usize {
        Self::gen_slot(self.gen, !self.pos)
    }
}

/// Hanging slots strictly between arriving by `x` and leaving by `y`, on the
/// side of increasing slot numbers.
pub fn gap(x: Letter, y: Letter) -> usize {
    (y.departure_slot() + 2 * RELATOR_LEN - x.arrival_slot() - 1) % RELATOR_LEN
}

/// `[a,b][c,d]` as letters.
pub fn relator() -> Vec<Letter> {
    let mut r = Vec::with_capacity(RELATOR_LEN);
    for k in 0..GENUS as u8 {
        let (x, y) = (2 * k, 2 * k + 1);
        r.extend([Letter::new(x, true), Letter::new(y, true), Letter::new(x, false), Letter::new(y, false)]);
    }
    r
}

pub fn relator_letter(i: usize) -> Letter {
    relator()[i % RELATOR_LEN]
}

/// Position `i` with `relator[i] = x`.
pub fn relator_position(x: Letter) -> usize {
    relator().iter().position(|&l| l == x).expect("every letter occurs once in the relator")
}

/// Letters `relator[i..i+len]` (cyclically).
pub fn relator_segment(i: usize, len: usize) -> Vec<Letter> {
    (0..len).map(|k| relator_letter(i + k)).collect()
}

fn inverse_of(w: &[Letter]) -> Vec<Letter> {
    w.iter().rev().map(|l| l.inv()).collect()
}

/// A freely reduced word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(free_reduce(&letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(inverse_of(&self.0))
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word::new(v)
    }

    pub fn pow(&self, k: usize) -> Word {
        Word::new(self.0.iter().copied().cycle().take(self.0.len() * k).collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for l in &self.0 {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

pub fn free_reduce(w: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&l.inv()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn cyclic_reduce(w: &[Letter]) -> Vec<Letter> {
    let mut v = free_reduce(w);
    while v.len() >= 2 && v[0] == v[v.len() - 1].inv() {
        v.pop();
        v.remove(0);
    }
    v
}

/// A cyclically reduced word stored as its least rotation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
pub struct CyclicWord(Vec<u8>);

impl CyclicWord {
    pub fn new(w: &[Letter]) -> Self {
        let v = cyclic_reduce(w);
        let ranks: Vec<u8> = v.iter().map(|l| l.rank()).collect();
        let n = ranks.len();
        let best = (0..n)
            .map(|r| ranks[r..].iter().chain(&ranks[..r]).copied().collect::<Vec<u8>>())
            .min()
            .unwrap_or_default();
        CyclicWord(best)
    }

    pub fn from_word(w: &Word) -> Self {
        Self::new(&w.0)
    }

    pub fn letters(&self) -> Vec<Letter> {
        self.0.iter().map(|&r| Letter::new(r / 2, r % 2 == 0)).collect()
    }

    pub fn word(&self) -> Word {
        Word(self.letters())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> CyclicWord {
        CyclicWord::new(&inverse_of(&self.letters()))
    }

    /// Smallest `p` such that rotating by `p` fixes the word.
    pub fn period(&self) -> usize {
        let n = self.0.len();
        (1..=n).find(|&p| n.is_multiple_of(p) && (0..n).all(|i| self.0[i] == self.0[(i + p) % n])).unwrap_or(0)
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.word())
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.to_string() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && (self.s[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Vec<Letter>> {
        let mut out = Vec::new();
        while let Some(c) = self.peek() {
            if c == b',' || c == b']' || c == b')' {
                break;
            }
            let atom = self.atom()?;
            let k = self.power()?;
            let base = if k < 0 { inverse_of(&atom) } else { atom };
            for _ in 0..k.unsigned_abs() {
                out.extend_from_slice(&base);
            }
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<Vec<Letter>> {
        let c = self.peek().unwrap();
        match c {
            b'[' => {
                self.pos += 1;
                let x = self.expr()?;
                if self.peek() != Some(b',') {
                    return self.err("expected ',' in commutator");
                }
                self.pos += 1;
                let y = self.expr()?;
                if self.peek() != Some(b']') {
                    return self.err("expected ']'");
                }
                self.pos += 1;
                let mut v = x.clone();
                v.extend_from_slice(&y);
                v.extend(inverse_of(&x));
                v.extend(inverse_of(&y));
                Ok(v)
            }
            b'(' => {
                self.pos += 1;
                let x = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(x)
            }
            b'1' => {
                self.pos += 1;
                Ok(Vec::new())
            }
            _ => match Letter::from_char(c as char) {
                Some(l) => {
                    self.pos += 1;
                    Ok(vec![l])
                }
                None => self.err(&format!("unexpected character '{}'", c as char)),
            },
        }
    }

    fn power(&mut self) -> Result<i64> {
        if self.peek() != Some(b'^') {
            return Ok(1);
        }
        self.pos += 1;
        let mut neg = false;
        if self.peek() == Some(b'-') {
            neg = true;
            self.pos += 1;
        }
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("malformed power");
        }
        let k: i64 = std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse { pos: start, msg: "power too large".into() })?;
        Ok(if neg { -k } else { k })
    }
}

/// Parse `aba^-2b^-1c`, `[a,b][c,d]`, `(ab)^3`, with `A..D` as inverses.
pub fn parse_word(text: &str) -> Result<Word> {
    let mut p = Parser { s: text.as_bytes(), pos: 0 };
    let w = p.expr()?;
    if p.peek().is_some() {
        return p.err("unbalanced bracket");
    }
    Ok(Word::new(w))
}

/// Maximal gap-0 runs of a cyclic word: `(start, len)` with `start` an index
/// into the word. `None` if every gap is 0.
pub fn blocks(w: &[Letter]) -> Option<Vec<(usize, usize)>> {
    let n = w.len();
    let gaps: Vec<usize> = (0..n).map(|i| gap(w[i], w[(i + 1) % n])).collect();
    let first = (0..n).find(|&i| gaps[(i + n - 1) % n] != 0)?;
    let mut out = Vec::new();
    let mut i = first;
    loop {
        let mut len = 1;
        while gaps[(i + len - 1) % n] == 0 {
            len += 1;
        }
        out.push((i, len));
        i = (i + len) % n;
        if i == first {
            break;
        }
    }
    Some(out)
}

/// Gap after block `j`, i.e. between its last letter and the next block.
fn junction(w: &[Letter], b: &[(usize, usize)], j: usize) -> usize {
    let n = w.len();
    let (s, l) = b[j];
    gap(w[(s + l - 1) % n], w[(s + l) % n])
}

/// Replace cyclic ranges of `w` (given as `(start, len, replacement)`, non-overlapping).
fn splice(w: &[Letter], mut reps: Vec<(usize, usize, Vec<Letter>)>) -> Vec<Letter> {
    let n = w.len();
    reps.sort_by_key(|r| r.0);
    // Rotate so that no range wraps: start right after the last range ends.
    let (ls, ll, _) = reps.last().cloned().unwrap();
    let rot = (ls + ll) % n;
    let mut out = Vec::with_capacity(n);
    let mut idx = 0;
    let shifted: Vec<(usize, usize, Vec<Letter>)> =
        reps.into_iter().map(|(s, l, r)| ((s + n - rot) % n, l, r)).collect();
    let mut sorted = shifted;
    sorted.sort_by_key(|r| r.0);
    for (s, l, r) in sorted {
        while idx < s {
            out.push(w[(idx + rot) % n]);
            idx += 1;
        }
        out.extend(r);
        idx += l;
    }
    while idx < n {
        out.push(w[(idx + rot) % n]);
        idx += 1;
    }
    out
}

/// Block structure of one side of a cyclic word.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SideFlags {
    pub has_long_block: bool,
    pub has_long_chain: bool,
    pub has_half_block: bool,
    pub has_half_chain: bool,
}

/// Long chains `(first block, number of blocks)` among the blocks of `w`.
pub fn long_chains(w: &[Letter], b: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let m = b.len();
    let mut out = Vec::new();
    for j in 0..m {
        if b[j].1 != 4 {
            continue;
        }
        let mut k = 1;
        while k < m && junction(w, b, (j + k - 1) % m) == 1 {
            let len = b[(j + k) % m].1;
            if len == 4 {
                out.push((j, k + 1));
                break;
            }
            if len != 3 {
                break;
            }
            k += 1;
        }
    }
    out
}

pub fn is_cyclic_chain(w: &[Letter], b: &[(usize, usize)]) -> bool {
    (0..b.len()).all(|j| junction(w, b, j) == 1)
}

pub fn side_flags(w: &[Letter]) -> SideFlags {
    let Some(b) = blocks(w) else {
        return SideFlags {
            has_long_block: !w.is_empty(),
            has_long_chain: false,
            has_half_block: !w.is_empty(),
            has_half_chain: false,
        };
    };
    let cyclic = is_cyclic_chain(w, &b);
    if cyclic {
        let even = b.iter().filter(|x| x.1 % 2 == 0).count();
        debug_assert!(even % 2 == 0, "cyclic chain with an odd number of even blocks");
    }
    SideFlags {
        has_long_block: b.iter().any(|x| x.1 >= 5),
        has_long_chain: !long_chains(w, &b).is_empty(),
        has_half_block: b.iter().any(|x| x.1 >= 4),
        has_half_chain: cyclic && b.iter().all(|x| x.1 == 3),
    }
}

/// One shortening move on this side of `w`, if any.
fn shorten_side(w: &[Letter]) -> Option<Vec<Letter>> {
    if w.is_empty() {
        return None;
    }
    let Some(b) = blocks(w) else {
        // Every gap is 0: the word is a power of a rotation of the relator.
        return Some(Vec::new());
    };
    let n = w.len();
    for &(s, l) in &b {
        if l >= 5 {
            let i = relator_position(w[s]);
            let rep = if l >= RELATOR_LEN {
                return Some(splice(w, vec![(s, RELATOR_LEN, Vec::new())]));
            } else {
                inverse_of(&relator_segment(i + l, RELATOR_LEN - l))
            };
            return Some(splice(w, vec![(s, l, rep)]));
        }
    }
    if let Some(&(j, k)) = long_chains(w, &b).first() {
        let m = b.len();
        let reps = (0..k)
            .map(|t| {
                let (s, l) = b[(j + t) % m];
                let i = relator_position(w[s]);
                let rep = if t == 0 {
                    inverse_of(&relator_segment(i + 5, 3))
                } else {
                    inverse_of(&relator_segment(i + l, 3))
                };
                (s % n, l, rep)
            })
            .collect();
        return Some(splice(w, reps));
    }
    None
}

/// Cyclically shortest representative of the conjugacy class.
pub fn dehn_reduce(w: &CyclicWord) -> CyclicWord {
    let mut cur = cyclic_reduce(&w.letters());
    loop {
        if let Some(next) = shorten_side(&cur) {
            debug_assert!(next.len() < cur.len() + 1);
            cur = cyclic_reduce(&next);
            continue;
        }
        let inv = inverse_of(&cur);
        if let Some(next) = shorten_side(&inv) {
            cur = cyclic_reduce(&inverse_of(&next));
            continue;
        }
        break;
    }
    CyclicWord::new(&cur)
}

pub fn is_trivial(w: &Word) -> bool {
    dehn_reduce(&CyclicWord::from_word(w)).is_empty()
}

/// Length-preserving moves on one side: every half-block switch, and the
/// half-chain switch when the side is a half-chain.
fn switches_side(w: &[Letter]) -> Vec<Vec<Letter>> {
    let Some(b) = blocks(w) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for &(s, l) in &b {
        if l == 4 {
            let i = relator_position(w[s]);
            out.push(splice(w, vec![(s, 4, inverse_of(&relator_segment(i + 4, 4)))]));
        }
    }
    if is_cyclic_chain(w, &b) && b.iter().all(|x| x.1 == 3) {
        let reps = b
            .iter()
            .map(|&(s, l)| {
                let i = relator_position(w[s]);
                (s, l, inverse_of(&relator_segment(i + 4, 3)))
            })
            .collect();
        out.push(splice(w, reps));
    }
    out
}

/// All cyclically shortest representatives of the conjugacy class of `w`.
pub fn shortest_representatives(w: &CyclicWord) -> BTreeSet<CyclicWord> {
    let start = dehn_reduce(w);
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(cur) = queue.pop_front() {
        let letters = cur.letters();
        let mut next: Vec<CyclicWord> = switches_side(&letters).iter().map(|x| CyclicWord::new(x)).collect();
        let inv = inverse_of(&letters);
        next.extend(switches_side(&inv).iter().map(|x| CyclicWord::new(&inverse_of(x))));
        for c in next {
            debug_assert_eq!(c.len(), cur.len());
            if seen.insert(c.clone()) {
                queue.push_back(c);
            }
        }
    }
    seen
}

pub fn are_conjugate(w1: &Word, w2: &Word) -> bool {
    let a = dehn_reduce(&CyclicWord::from_word(w1));
    let b = dehn_reduce(&CyclicWord::from_word(w2));
    if a.len() != b.len() {
        return false;
    }
    if a == b {
        return true;
    }
    shortest_representatives(&a).contains(&b)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootDecomposition {
    pub root: CyclicWord,
    pub exponent: usize,
    pub divisor_count: usize,
}

pub fn divisor_count(q: usize) -> usize {
    (1..=q).filter(|d| q.is_multiple_of(*d)).count()
}

/// Maximal `q` with `w` conjugate to `root^q`.
///
/// Every shortest representative of `root^q` is found in the switch closure
/// of `w`, and `root^q` written out is itself shortest, so the largest period
/// over the closure gives `q`.
pub fn max_root(w: &Word) -> Result<RootDecomposition> {
    let red = dehn_reduce(&CyclicWord::from_word(w));
    if red.is_empty() {
        return Err(Error::Domain("the word is trivial in the surface group".into()));
    }
    let n = red.len();
    let mut best = (1, red.clone());
    for c in shortest_representatives(&red) {
        let p = c.period();
        let q = n / p;
        if q > best.0 {
            let root = CyclicWord::new(&c.letters()[..p]);
            best = (q, root);
        }
    }
    let (q, root) = best;
    Ok(RootDecomposition { root: dehn_reduce(&root), exponent: q, divisor_count: divisor_count(q) })
}

/// Exhaustive search over cyclically reduced candidate roots of length at most `max_len`.
pub fn max_root_bruteforce(w: &Word, max_len: usize) -> Option<usize> {
    let red = dehn_reduce(&CyclicWord::from_word(w));
    if red.is_empty() {
        return None;
    }
    let n = red.len();
    let mut best = 1;
    for q in 2..=n {
        if !n.is_multiple_of(q) || n / q > max_len {
            continue;
        }
        let l = n / q;
        let found = all_cyclic_words(l).into_iter().any(|c| {
            let p = c.word().pow(q);
            let d = dehn_reduce(&CyclicWord::from_word(&p));
            d.len() == n && are_conjugate(&d.word(), &red.word())
        });
        if found {
            best = q;
        }
    }
    Some(best)
}

fn all_cyclic_words(l: usize) -> BTreeSet<CyclicWord> {
    let letters: Vec<Letter> = (0..RANK as u8).flat_map(|g| [Letter::new(g, true), Letter::new(g, false)]).collect();
    let mut words: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..l {
        let mut next = Vec::new();
        for w in &words {
            for &x in &letters {
                if w.last() != Some(&x.inv()) {
                    let mut v = w.clone();
                    v.push(x);
                    next.push(v);
                }
            }
        }
        words = next;
    }
    words
        .into_iter()
        .filter(|w| w.len() == l && (l < 2 || w[0] != w[l - 1].inv()))
        .map(|w| CyclicWord::new(&w))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    fn cw(s: &str) -> CyclicWord {
        CyclicWord::from_word(&w(s))
    }

    #[test]
    fn parsing() {
        assert_eq!(w("aba^-2b^-1c").to_string(), "abAABc");
        assert_eq!(w("[a,b][c,d]").to_string(), "abABcdCD");
        assert!(w("aA").is_empty());
        assert_eq!(w("(ab)^2").to_string(), "abab");
        assert!(matches!(parse_word("abx"), Err(Error::Parse { pos: 2, .. })));
        assert!(parse_word("a^").is_err());
    }

    #[test]
    fn relator_gaps_vanish() {
        let r = relator();
        for i in 0..RELATOR_LEN {
            assert_eq!(gap(r[i], r[(i + 1) % RELATOR_LEN]), 0);
        }
        assert_eq!(gap(Letter::new(0, false), Letter::new(0, false)), 1);
    }

    #[test]
    fn dehn_examples() {
        assert!(dehn_reduce(&cw("abABcdCD")).is_empty());
        assert_eq!(dehn_reduce(&cw("abABcdC")), cw("d"));
        assert_eq!(dehn_reduce(&cw("aba^-2b^-1c")), cw("aba^-2b^-1c"));
    }

    #[test]
    fn switch_closures() {
        let s = shortest_representatives(&cw("aba^-2b^-1c"));
        let want: BTreeSet<CyclicWord> = [cw("aba^-2b^-1c"), cw("cd^-1c^-1a^-1dc")].into_iter().collect();
        assert_eq!(s, want);
        assert_eq!(shortest_representatives(&cw("a")).len(), 1);
        let s = shortest_representatives(&cw("[a,b]"));
        assert!(s.contains(&cw("abAB")) && s.contains(&cw("dcDC")));
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn conjugacy() {
        assert!(are_conjugate(&w("aba^-2b^-1c"), &w("cd^-1c^-1a^-1dc")));
        assert!(!are_conjugate(&w("a"), &w("b")));
        assert!(are_conjugate(&w("abc"), &w("bca")));
    }

    #[test]
    fn triviality() {
        assert!(is_trivial(&w("[a,b][c,d]")));
        assert!(!is_trivial(&w("a")));
        assert!(is_trivial(&w("ab[a,b][c,d]BA")));
    }

    #[test]
    fn roots() {
        let r = max_root(&w("a^6")).unwrap();
        assert_eq!((r.exponent, r.divisor_count), (6, 4));
        assert_eq!(r.root, cw("a"));
        assert_eq!(max_root(&w("ab")).unwrap().exponent, 1);
        let r = max_root(&w("abab")).unwrap();
        assert_eq!((r.exponent, r.root.clone()), (2, cw("ab")));
        assert!(max_root(&w("[a,b][c,d]")).is_err());
        for s in ["a^6", "ab", "abab", "[a,b]", "abcabc"] {
            assert_eq!(max_root_bruteforce(&w(s), 3), Some(max_root(&w(s)).unwrap().exponent), "{}", s);
        }
    }
}
