//! Strings and bands over a presentation, substring occurrence
//! classification, and the brick tests built on them.
//!
//! A *string* is a reduced walk none of whose direct subpaths (in either
//! reading direction) lies in the ideal. A *band* is a primitive cyclically
//! reduced closed string all of whose powers are strings. Substrings are
//! classified by their boundary letters: a substring whose context points
//! outwards (inverse letter before, direct letter after, with word
//! boundaries always counting) marks a quotient; a context pointing inwards
//! marks a submodule. A common word occurring as a quotient substring of one
//! host and a submodule substring of another induces a basis homomorphism
//! between the associated modules, and counting such pairs is how every
//! brick test here works.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::quiver::{ArrowId, Direction, Letter, Presentation, VertexId, Walk, WalkError};

#[derive(Debug, Error)]
pub enum WordsError {
    #[error("walk is not a string: run `{run}` lies in the ideal")]
    NotAString { run: String },
    #[error("hosts are the same band up to rotation and inversion; use the endomorphism scan or the oracle")]
    SameBandHosts,
    #[error("cyclic word is not closed: it runs from {start} to {end}")]
    NotClosed { start: VertexId, end: VertexId },
    #[error("cyclic word is not cyclically reduced at the wrap")]
    NotCyclicallyReduced,
    #[error("word is not a band: {reason}")]
    NotABand { reason: String },
    #[error("presentation is not special biserial: {0}")]
    NotSpecialBiserial(String),
    #[error(transparent)]
    Walk(#[from] WalkError),
}

/// A walk validated against the string condition of a presentation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StringWord(Walk);

impl StringWord {
    pub fn new(pres: &Presentation, walk: Walk) -> Result<StringWord, WordsError> {
        match violating_run(pres, walk.letters()) {
            None => Ok(StringWord(walk)),
            Some(run) => Err(WordsError::NotAString { run }),
        }
    }

    pub fn trivial(vertex: VertexId) -> StringWord {
        StringWord(Walk::Trivial(vertex))
    }

    pub fn parse(pres: &Presentation, text: &str) -> Result<StringWord, WordsError> {
        let walk = Walk::parse(&pres.quiver, text)?;
        StringWord::new(pres, walk)
    }

    pub fn walk(&self) -> &Walk {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_trivial()
    }

    pub fn inverted(&self) -> StringWord {
        StringWord(self.0.inverted())
    }

    /// Representative of `{w, w̄}` that is least in the letter order; used
    /// for deduplication since both walks present the same module.
    pub fn canonical(&self) -> StringWord {
        let inv = self.0.inverted();
        if inv < self.0 {
            StringWord(inv)
        } else {
            self.clone()
        }
    }
}

impl fmt::Display for StringWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// True iff no direct subpath of the walk or of its inverse lies in the
/// ideal. Trivial walks are strings.
pub fn is_string(pres: &Presentation, walk: &Walk) -> bool {
    violating_run(pres, walk.letters()).is_none()
}

/// Scans maximal same-direction runs; monotonicity of monomial ideal
/// membership makes checking maximal runs sufficient.
fn violating_run(pres: &Presentation, letters: &[Letter]) -> Option<String> {
    let mut i = 0;
    while i < letters.len() {
        let dir = letters[i].direction;
        let mut j = i;
        while j < letters.len() && letters[j].direction == dir {
            j += 1;
        }
        let mut arrows: Vec<ArrowId> = letters[i..j].iter().map(|l| l.arrow.clone()).collect();
        if dir == Direction::Inverse {
            arrows.reverse();
        }
        if pres.path_in_ideal_unchecked(&arrows) {
            let run: Vec<String> = letters[i..j].iter().map(|l| l.to_string()).collect();
            return Some(run.join(" "));
        }
        i = j;
    }
    None
}

/// A band: a primitive cyclically reduced closed word, all of whose powers
/// are strings, containing at least one direct and one inverse letter. The
/// stored rotation is the display basepoint.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Band {
    letters: Vec<Letter>,
}

#[allow(clippy::len_without_is_empty)]
impl Band {
    /// Validates the band conditions. Malformed cyclic walks are errors;
    /// use [`is_band`] to obtain a boolean for well-formed cyclic walks.
    pub fn new(pres: &Presentation, letters: Vec<Letter>) -> Result<Band, WordsError> {
        check_cyclic_walk(pres, &letters)?;
        if let Some(reason) = band_defect(pres, &letters) {
            return Err(WordsError::NotABand { reason });
        }
        Ok(Band { letters })
    }

    pub fn parse(pres: &Presentation, text: &str) -> Result<Band, WordsError> {
        let walk = Walk::parse(&pres.quiver, text)?;
        match walk {
            Walk::Trivial(_) => Err(WordsError::NotABand {
                reason: "trivial walk".into(),
            }),
            Walk::Word(letters) => Band::new(pres, letters),
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn letter_at(&self, pos: isize) -> &Letter {
        let t = self.letters.len() as isize;
        &self.letters[(pos.rem_euclid(t)) as usize]
    }

    /// Vertex at the gap before letter `g` (indices mod the length).
    pub fn gap_vertex(&self, pres: &Presentation, g: isize) -> VertexId {
        pres.quiver.letter_source(self.letter_at(g))
    }

    pub fn rotated(&self, offset: usize) -> Band {
        let t = self.letters.len();
        let letters = (0..t)
            .map(|i| self.letters[(i + offset) % t].clone())
            .collect();
        Band { letters }
    }

    pub fn inverted(&self) -> Band {
        Band {
            letters: self.letters.iter().rev().map(Letter::inverted).collect(),
        }
    }

    /// Lexicographically least rotation of the band or of its inverse under
    /// the letter order (arrow id, direct before inverse). Idempotent; the
    /// deduplication key for enumeration.
    pub fn canonical(&self) -> Band {
        Band {
            letters: canonical_cyclic(&self.letters),
        }
    }

    /// The walk reading the stored rotation `n` times.
    pub fn power_walk(&self, n: usize) -> Walk {
        assert!(n >= 1);
        let mut letters = Vec::with_capacity(self.letters.len() * n);
        for _ in 0..n {
            letters.extend(self.letters.iter().cloned());
        }
        Walk::Word(letters)
    }
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Walk::Word(self.letters.clone()).fmt(f)
    }
}

fn check_cyclic_walk(pres: &Presentation, letters: &[Letter]) -> Result<(), WordsError> {
    if letters.is_empty() {
        return Err(WordsError::Walk(WalkError::Empty));
    }
    // linear part
    Walk::from_letters(&pres.quiver, letters.to_vec())?;
    let start = pres.quiver.letter_source(&letters[0]);
    let end = pres.quiver.letter_target(&letters[letters.len() - 1]);
    if start != end {
        return Err(WordsError::NotClosed { start, end });
    }
    if letters[0] == letters[letters.len() - 1].inverted() {
        return Err(WordsError::NotCyclicallyReduced);
    }
    Ok(())
}

/// None when the closed word is a band, otherwise the failed condition.
fn band_defect(pres: &Presentation, letters: &[Letter]) -> Option<String> {
    let t = letters.len();
    let has_direct = letters.iter().any(Letter::is_direct);
    let has_inverse = letters.iter().any(Letter::is_inverse);
    if !has_direct || !has_inverse {
        return Some("all letters point the same way".into());
    }
    if smallest_period(letters) < t {
        return Some("proper power of a shorter cyclic word".into());
    }
    // Powers up to ceil(maxRel/t) + 1; longer powers repeat subpath windows.
    let k = pres.max_relation_len().div_ceil(t) + 1;
    let k = k.max(2);
    let mut power = Vec::with_capacity(t * k);
    for _ in 0..k {
        power.extend(letters.iter().cloned());
    }
    if let Some(run) = violating_run(pres, &power) {
        return Some(format!("power contains ideal run `{run}`"));
    }
    None
}

fn smallest_period(letters: &[Letter]) -> usize {
    let t = letters.len();
    'outer: for p in 1..=t {
        if !t.is_multiple_of(p) {
            continue;
        }
        for i in 0..t {
            if letters[i] != letters[i % p] {
                continue 'outer;
            }
        }
        return p;
    }
    t
}

fn canonical_cyclic(letters: &[Letter]) -> Vec<Letter> {
    let t = letters.len();
    let inverse: Vec<Letter> = letters.iter().rev().map(Letter::inverted).collect();
    let mut best: Option<Vec<Letter>> = None;
    for word in [letters, inverse.as_slice()] {
        for r in 0..t {
            let cand: Vec<Letter> = (0..t).map(|i| word[(i + r) % t].clone()).collect();
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap()
}

/// Checks the band conditions for a well-formed closed cyclic walk.
pub fn is_band(pres: &Presentation, letters: &[Letter]) -> Result<bool, WordsError> {
    check_cyclic_walk(pres, letters)?;
    Ok(band_defect(pres, letters).is_none())
}

/// All canonical bands of length at most `max_len`, each unique, sorted by
/// length then lexicographically.
pub fn enumerate_bands(pres: &Presentation, max_len: usize) -> Vec<Band> {
    let mut found: BTreeSet<Vec<Letter>> = BTreeSet::new();
    let mut all_letters: Vec<Letter> = Vec::new();
    for a in &pres.quiver.arrows {
        all_letters.push(Letter::direct(a.id.clone()));
        all_letters.push(Letter::inverse(a.id.clone()));
    }
    all_letters.sort();

    // The canonical rotation starts at the least letter of the cyclic word,
    // so only walks whose letters all compare >= the first letter matter.
    for first in &all_letters {
        let mut stack: Vec<Vec<Letter>> = vec![vec![first.clone()]];
        while let Some(prefix) = stack.pop() {
            let last = prefix.last().unwrap();
            let at = pres.quiver.letter_target(last);
            if prefix.len() >= 2 {
                let closes =
                    pres.quiver.letter_source(&prefix[0]) == at && prefix[0] != last.inverted();
                if closes && band_defect(pres, &prefix).is_none() {
                    found.insert(canonical_cyclic(&prefix));
                }
            }
            if prefix.len() == max_len {
                continue;
            }
            for next in pres.quiver.letters_from(&at) {
                if next < *first || next == last.inverted() {
                    continue;
                }
                let mut ext = prefix.clone();
                ext.push(next);
                if violating_run(pres, &ext).is_none() {
                    stack.push(ext);
                }
            }
        }
    }

    let mut bands: Vec<Band> = found.into_iter().map(|letters| Band { letters }).collect();
    bands.sort_by(|a, b| (a.len(), &a.letters).cmp(&(b.len(), &b.letters)));
    bands
}

/// All canonical strings of length at most `max_len` (trivial strings
/// included), sorted by length then lexicographically.
pub fn enumerate_strings(pres: &Presentation, max_len: usize) -> Vec<StringWord> {
    let mut found: BTreeSet<Walk> = BTreeSet::new();
    for v in &pres.quiver.vertices {
        found.insert(Walk::Trivial(v.clone()));
    }
    if max_len > 0 {
        let mut stack: Vec<Vec<Letter>> = Vec::new();
        for a in &pres.quiver.arrows {
            for l in [Letter::direct(a.id.clone()), Letter::inverse(a.id.clone())] {
                if violating_run(pres, std::slice::from_ref(&l)).is_none() {
                    stack.push(vec![l]);
                }
            }
        }
        while let Some(prefix) = stack.pop() {
            let walk = Walk::Word(prefix.clone());
            let inv = walk.inverted();
            found.insert(if inv < walk { inv } else { walk });
            if prefix.len() == max_len {
                continue;
            }
            let last = prefix.last().unwrap();
            let at = pres.quiver.letter_target(last);
            for next in pres.quiver.letters_from(&at) {
                if next == last.inverted() {
                    continue;
                }
                let mut ext = prefix.clone();
                ext.push(next);
                if violating_run(pres, &ext).is_none() {
                    stack.push(ext);
                }
            }
        }
    }
    let mut strings: Vec<StringWord> = found.into_iter().map(StringWord).collect();
    strings.sort_by(|a, b| (a.len(), &a.0).cmp(&(b.len(), &b.0)));
    strings
}

/// Occurrence classification, from the boundary-letter rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum OccurrenceKind {
    Quotient,
    Submodule,
    Both,
    Neither,
}

impl OccurrenceKind {
    pub fn is_quotient(self) -> bool {
        matches!(self, OccurrenceKind::Quotient | OccurrenceKind::Both)
    }

    pub fn is_submodule(self) -> bool {
        matches!(self, OccurrenceKind::Submodule | OccurrenceKind::Both)
    }
}

/// A located substring of a finite word or of the periodic word of a band,
/// with its quotient/submodule classification. For band hosts `start` is the
/// representative of the shift class, in `0..|b|`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Occurrence {
    pub start: usize,
    pub length: usize,
    pub kind: OccurrenceKind,
    /// Whether the occurrence matches the inverse of the requested word.
    pub inverted: bool,
}

/// Host word for occurrence scans: a finite string or the two-sided
/// infinite periodic word of a band.
#[derive(Clone, Copy, Debug)]
pub enum Host<'a> {
    Finite(&'a Walk),
    Band(&'a Band),
}

impl<'a> Host<'a> {
    /// Gap positions to scan: all gaps of a finite word, one representative
    /// per shift class of a band.
    fn gap_range(&self, sub_len: usize) -> Vec<usize> {
        match self {
            Host::Finite(w) => {
                if sub_len > w.len() {
                    Vec::new()
                } else {
                    (0..=w.len() - sub_len).collect()
                }
            }
            Host::Band(b) => (0..b.len()).collect(),
        }
    }

    fn letter_before(&self, gap: usize) -> Option<&Letter> {
        match self {
            Host::Finite(w) => {
                if gap == 0 {
                    None
                } else {
                    Some(&w.letters()[gap - 1])
                }
            }
            Host::Band(b) => Some(b.letter_at(gap as isize - 1)),
        }
    }

    fn letter_after(&self, gap: usize, len: usize) -> Option<&Letter> {
        match self {
            Host::Finite(w) => w.letters().get(gap + len),
            Host::Band(b) => Some(b.letter_at((gap + len) as isize)),
        }
    }

    fn content(&self, gap: usize, len: usize) -> Vec<Letter> {
        match self {
            Host::Finite(w) => w.letters()[gap..gap + len].to_vec(),
            Host::Band(b) => (0..len)
                .map(|i| b.letter_at((gap + i) as isize).clone())
                .collect(),
        }
    }

    fn gap_vertex(&self, pres: &Presentation, gap: usize) -> VertexId {
        match self {
            Host::Finite(w) => w.gap_vertex(&pres.quiver, gap),
            Host::Band(b) => b.gap_vertex(pres, gap as isize),
        }
    }

    fn classify(&self, gap: usize, len: usize) -> OccurrenceKind {
        let before = self.letter_before(gap);
        let after = self.letter_after(gap, len);
        let q = before.is_none_or(Letter::is_inverse) && after.is_none_or(Letter::is_direct);
        let s = before.is_none_or(Letter::is_direct) && after.is_none_or(Letter::is_inverse);
        match (q, s) {
            (true, true) => OccurrenceKind::Both,
            (true, false) => OccurrenceKind::Quotient,
            (false, true) => OccurrenceKind::Submodule,
            (false, false) => OccurrenceKind::Neither,
        }
    }
}

/// All occurrences of `sub` (and of its inverse, tagged) in the host, with
/// classification. Trivial subwords match gaps at their vertex and are
/// never tagged inverted.
pub fn occurrences(pres: &Presentation, host: Host<'_>, sub: &Walk) -> Vec<Occurrence> {
    let len = sub.len();
    let mut out = Vec::new();
    let sub_letters = sub.letters();
    let sub_inv: Vec<Letter> = sub_letters.iter().rev().map(Letter::inverted).collect();
    for gap in host.gap_range(len) {
        if len == 0 {
            if host.gap_vertex(pres, gap) != sub.source(&pres.quiver) {
                continue;
            }
            out.push(Occurrence {
                start: gap,
                length: 0,
                kind: host.classify(gap, 0),
                inverted: false,
            });
        } else {
            let content = host.content(gap, len);
            let inverted = if content.as_slice() == sub_letters {
                false
            } else if content == sub_inv {
                true
            } else {
                continue;
            };
            out.push(Occurrence {
                start: gap,
                length: len,
                kind: host.classify(gap, len),
                inverted,
            });
        }
    }
    out
}

/// A basis homomorphism datum: a common word together with a quotient
/// occurrence in the source host and a submodule occurrence in the target
/// host. `inverted` records that the target occurrence carries the inverse
/// of `word`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct HomPair {
    pub word: Walk,
    pub quotient: Occurrence,
    pub submodule: Occurrence,
    pub inverted: bool,
}

fn common_pairs(
    pres: &Presentation,
    source: Host<'_>,
    target: Host<'_>,
    max_len: usize,
) -> Vec<HomPair> {
    let mut out = Vec::new();
    for len in 0..=max_len {
        let src_gaps = source.gap_range(len);
        let tgt_gaps = target.gap_range(len);
        if src_gaps.is_empty() || tgt_gaps.is_empty() {
            continue;
        }
        let quotients: Vec<(usize, Vec<Letter>)> = src_gaps
            .iter()
            .filter(|&&g| source.classify(g, len).is_quotient())
            .map(|&g| (g, source.content(g, len)))
            .collect();
        if quotients.is_empty() {
            continue;
        }
        let submodules: Vec<(usize, Vec<Letter>)> = tgt_gaps
            .iter()
            .filter(|&&g| target.classify(g, len).is_submodule())
            .map(|&g| (g, target.content(g, len)))
            .collect();
        for (qg, qcontent) in &quotients {
            let qinv: Vec<Letter> = qcontent.iter().rev().map(Letter::inverted).collect();
            for (sg, scontent) in &submodules {
                let inverted = if len == 0 {
                    if source.gap_vertex(pres, *qg) != target.gap_vertex(pres, *sg) {
                        continue;
                    }
                    false
                } else if scontent == qcontent {
                    false
                } else if *scontent == qinv {
                    true
                } else {
                    continue;
                };
                let word = if len == 0 {
                    Walk::Trivial(source.gap_vertex(pres, *qg))
                } else {
                    Walk::Word(qcontent.clone())
                };
                out.push(HomPair {
                    word,
                    quotient: Occurrence {
                        start: *qg,
                        length: len,
                        kind: source.classify(*qg, len),
                        inverted: false,
                    },
                    submodule: Occurrence {
                        start: *sg,
                        length: len,
                        kind: target.classify(*sg, len),
                        inverted,
                    },
                    inverted,
                });
            }
        }
    }
    out
}

/// Basis data for `Hom(M(v), M(w))`: all triples of a common word occurring
/// as a quotient substring of `v` and a submodule substring of `w` (up to
/// inversion of the word, tagged). The count is the hom dimension.
pub fn string_hom_pairs(pres: &Presentation, v: &StringWord, w: &StringWord) -> Vec<HomPair> {
    let max_len = v.len().min(w.len());
    common_pairs(
        pres,
        Host::Finite(v.walk()),
        Host::Finite(w.walk()),
        max_len,
    )
}

/// Common quotient/submodule words of the periodic word of one band against
/// another, scanning word lengths `0..=max_len`, one representative per
/// shift class on each side.
pub fn band_common_words(pres: &Presentation, b: &Band, c: &Band, max_len: usize) -> Vec<HomPair> {
    common_pairs(pres, Host::Band(b), Host::Band(c), max_len)
}

/// Graph-map basis data between two hosts at multiplicity one. Finite hosts
/// bound the scanned word length by their own length; for two distinct
/// bands the bound `|b| + |c|` suffices, since a longer common factor of
/// two periodic words forces a common primitive period. Two copies of the
/// same band (up to rotation and inversion) are rejected: the eigenvalue
/// enters there and the count is not a hom dimension.
pub fn graph_map_pairs(
    pres: &Presentation,
    source: Host<'_>,
    target: Host<'_>,
) -> Result<Vec<HomPair>, WordsError> {
    let max_len = match (&source, &target) {
        (Host::Finite(v), Host::Finite(w)) => v.len().min(w.len()),
        (Host::Finite(v), Host::Band(_)) => v.len(),
        (Host::Band(_), Host::Finite(w)) => w.len(),
        (Host::Band(b), Host::Band(c)) => {
            if b.canonical() == c.canonical() {
                return Err(WordsError::SameBandHosts);
            }
            b.len() + c.len()
        }
    };
    Ok(common_pairs(pres, source, target, max_len))
}

/// The non-identity endomorphism basis data of `M(b, λ, 1)`: shift classes
/// of (quotient, submodule) occurrence pairs of a common word in the
/// periodic word of `b`. Scans a window of three periods and asserts the
/// subword bound (every common word is shorter than the band), so a
/// violation fails loudly instead of being truncated away. Also asserts the
/// letter-multiplicity property: every letter of a common word repeats in
/// the band (up to inversion for inverted pairs).
pub fn band_endo_pairs(pres: &Presentation, b: &Band) -> Vec<HomPair> {
    let t = b.len();
    let pairs = band_common_words(pres, b, b, 3 * t);
    for p in &pairs {
        assert!(
            p.word.len() < t,
            "common subword `{}` of band `{b}` is not a proper subword of a rotation",
            p.word
        );
        for l in p.word.letters() {
            let same = b.letters().iter().filter(|x| *x == l).count();
            let count = if p.inverted {
                same + b.letters().iter().filter(|x| **x == l.inverted()).count()
            } else {
                same
            };
            assert!(
                count >= 2,
                "letter `{l}` of endomorphism word `{}` occurs only once in band `{b}`",
                p.word
            );
        }
    }
    pairs
}

/// A band module at multiplicity one is a brick iff it has no non-identity
/// endomorphism basis element.
pub fn is_band_brick(pres: &Presentation, b: &Band) -> bool {
    band_endo_pairs(pres, b).is_empty()
}

/// A string module is a brick iff the only hom pair from the word to itself
/// is the identity (the whole word against itself).
pub fn is_string_brick(pres: &Presentation, w: &StringWord) -> bool {
    string_hom_pairs(pres, w, w).len() == 1
}

/// Top and socle vertex multisets, from trivial-substring classifications:
/// quotient gaps contribute to the top, submodule gaps to the socle.
/// Multisets are returned as sorted vectors.
pub fn top_socle(pres: &Presentation, host: Host<'_>) -> (Vec<VertexId>, Vec<VertexId>) {
    let gaps: Vec<usize> = match host {
        Host::Finite(w) => (0..=w.len()).collect(),
        Host::Band(b) => (0..b.len()).collect(),
    };
    let mut top = Vec::new();
    let mut socle = Vec::new();
    for g in gaps {
        let kind = host.classify(g, 0);
        let v = host.gap_vertex(pres, g);
        if kind.is_quotient() {
            top.push(v.clone());
        }
        if kind.is_submodule() {
            socle.push(v);
        }
    }
    top.sort();
    socle.sort();
    (top, socle)
}

/// Rotates the band so it starts with a direct letter and ends with an
/// inverse one (the least such rotation offset), then concatenates `n`
/// copies. The result is always a string.
pub fn power_string(pres: &Presentation, b: &Band, n: usize) -> StringWord {
    assert!(n >= 1, "power must be positive");
    let t = b.len();
    let offset = (0..t)
        .find(|&r| b.letter_at(r as isize).is_direct() && b.letter_at(r as isize - 1).is_inverse())
        .expect("a band has both a direct and an inverse letter");
    let rotated = b.rotated(offset);
    let walk = rotated.power_walk(n);
    StringWord::new(pres, walk).expect("every power of a band is a string")
}

/// Decomposition returned by [`find_band_subpattern`].
#[derive(Clone, Debug)]
pub struct BandSubpattern {
    /// The repeated direct letter.
    pub alpha: Letter,
    /// The direct letter whose inverse follows the first alpha.
    pub beta: Letter,
    /// The walk between the inverse letter and the closing alpha (possibly
    /// trivial); never contains alpha.
    pub middle: Walk,
    /// The band `β̄ v α`.
    pub band: Band,
    /// Gap index of the first alpha in the scanned word.
    pub position: usize,
}

/// Searches a string over a special biserial presentation for a subword
/// `α β̄ v α` with `β̄ v α` a band and `α` not a letter of `v`. Returns the
/// first decomposition in scan order (leftmost first alpha, then nearest
/// closing alpha).
pub fn find_band_subpattern(
    pres: &Presentation,
    w: &StringWord,
) -> Result<Option<BandSubpattern>, WordsError> {
    let sb = pres.is_special_biserial();
    if let Some(v) = sb.violation {
        return Err(WordsError::NotSpecialBiserial(v.to_string()));
    }
    let letters = w.walk().letters();
    let n = letters.len();
    for i in 0..n {
        if !letters[i].is_direct() {
            continue;
        }
        if i + 1 >= n || !letters[i + 1].is_inverse() {
            continue;
        }
        for j in i + 2..n {
            if letters[j] != letters[i] {
                continue;
            }
            let middle = &letters[i + 2..j];
            if middle.contains(&letters[i]) {
                // a farther closing alpha would contain this one too
                break;
            }
            let band_letters: Vec<Letter> = letters[i + 1..=j].to_vec();
            if let Ok(band) = Band::new(pres, band_letters) {
                let middle_walk = if middle.is_empty() {
                    Walk::Trivial(pres.quiver.letter_target(&letters[i + 1]))
                } else {
                    Walk::Word(middle.to_vec())
                };
                return Ok(Some(BandSubpattern {
                    alpha: letters[i].clone(),
                    beta: letters[i + 1].inverted(),
                    middle: middle_walk,
                    band,
                    position: i,
                }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn kron() -> Presentation {
        corpus::kronecker()
    }

    fn chained() -> Presentation {
        corpus::chained_kronecker()
    }

    fn gentle() -> Presentation {
        corpus::two_loop_gentle()
    }

    #[test]
    fn string_condition() {
        let p = chained();
        assert!(StringWord::parse(&p, "c d-").is_ok());
        assert!(StringWord::parse(&p, "@2").is_ok());
        assert!(StringWord::parse(&p, "a c").is_ok());
        assert!(matches!(
            StringWord::parse(&p, "a d"),
            Err(WordsError::NotAString { .. })
        ));
        // the inverse direction is also checked
        assert!(matches!(
            StringWord::parse(&p, "d- a-"),
            Err(WordsError::NotAString { .. })
        ));
    }

    #[test]
    fn band_examples() {
        let p = chained();
        assert!(Band::parse(&p, "c d-").is_ok());
        assert!(Band::parse(&p, "a b-").is_ok());
        assert!(Band::parse(&p, "a c d- c d- b-").is_ok());
        // proper power
        assert!(matches!(
            Band::parse(&p, "c d- c d-"),
            Err(WordsError::NotABand { .. })
        ));
        // not closed
        assert!(matches!(
            Band::parse(&p, "a c"),
            Err(WordsError::NotClosed { .. })
        ));
        // single-direction cyclic words are rejected as bands
        let loopy =
            crate::quiver::parse_presentation("vertices: 1\narrow x: 1 -> 1\nrelation: x x\n")
                .unwrap();
        assert!(matches!(
            Band::parse(&loopy, "x"),
            Err(WordsError::NotABand { .. })
        ));
    }

    #[test]
    fn is_band_bool_form() {
        let p = chained();
        let w = Walk::parse(&p.quiver, "c d- c d-").unwrap();
        assert!(!is_band(&p, w.letters()).unwrap());
        let w = Walk::parse(&p.quiver, "c d-").unwrap();
        assert!(is_band(&p, w.letters()).unwrap());
    }

    #[test]
    fn canonical_band_invariance() {
        let p = chained();
        let b1 = Band::parse(&p, "c d-").unwrap();
        let b2 = Band::parse(&p, "d- c").unwrap();
        assert_eq!(b1.canonical(), b2.canonical());
        assert_eq!(b1.canonical().to_string(), "c d-");
        let k = kron();
        let ab = Band::parse(&k, "a b-").unwrap();
        let ba = Band::parse(&k, "b a-").unwrap();
        assert_eq!(ab.canonical(), ba.canonical());
        assert_eq!(ab.canonical().to_string(), "a b-");
        assert_eq!(ab.canonical().canonical(), ab.canonical());
        assert_eq!(ab.inverted().canonical(), ab.canonical());
    }

    #[test]
    fn enumerate_bands_examples() {
        let k = kron();
        let bands = enumerate_bands(&k, 4);
        assert_eq!(
            bands.iter().map(ToString::to_string).collect::<Vec<_>>(),
            vec!["a b-"]
        );

        let p = chained();
        let bands = enumerate_bands(&p, 2);
        assert_eq!(
            bands.iter().map(ToString::to_string).collect::<Vec<_>>(),
            vec!["a b-", "c d-"]
        );

        let a2 = crate::quiver::parse_presentation("vertices: 1 2\narrow a: 1 -> 2\n").unwrap();
        assert!(enumerate_bands(&a2, 6).is_empty());
    }

    #[test]
    fn occurrence_classification_in_periodic_words() {
        let p = chained();
        let b = Band::parse(&p, "c d-").unwrap();
        // trivial word at vertex 3: one shift class, submodule
        let at3 = Walk::Trivial(VertexId::new("3"));
        let occs = occurrences(&p, Host::Band(&b), &at3);
        assert_eq!(occs.len(), 1);
        assert_eq!(occs[0].kind, OccurrenceKind::Submodule);
        // trivial word at vertex 2: one shift class, quotient
        let at2 = Walk::Trivial(VertexId::new("2"));
        let occs = occurrences(&p, Host::Band(&b), &at2);
        assert_eq!(occs.len(), 1);
        assert_eq!(occs[0].kind, OccurrenceKind::Quotient);
    }

    #[test]
    fn occurrence_boundaries_in_finite_words() {
        let p = chained();
        let w = Walk::parse(&p.quiver, "c d-").unwrap();
        let at2 = Walk::Trivial(VertexId::new("2"));
        let occs = occurrences(&p, Host::Finite(&w), &at2);
        assert_eq!(occs.len(), 2);
        assert!(occs.iter().all(|o| o.kind == OccurrenceKind::Quotient));
        assert_eq!(occs[0].start, 0);
        assert_eq!(occs[1].start, 2);
    }

    #[test]
    fn string_hom_pair_counts() {
        let p = chained();
        let c = StringWord::parse(&p, "c").unwrap();
        let at2 = StringWord::trivial(VertexId::new("2"));
        assert_eq!(string_hom_pairs(&p, &c, &at2).len(), 1);
        let d = StringWord::parse(&p, "d").unwrap();
        assert_eq!(string_hom_pairs(&p, &c, &d).len(), 0);
        let cd = StringWord::parse(&p, "c d-").unwrap();
        assert_eq!(string_hom_pairs(&p, &cd, &cd).len(), 1);
    }

    #[test]
    fn string_bricks() {
        let p = chained();
        assert!(is_string_brick(&p, &StringWord::parse(&p, "c d-").unwrap()));
        assert!(is_string_brick(
            &p,
            &StringWord::trivial(VertexId::new("1"))
        ));
        let k = kron();
        let aba = StringWord::parse(&k, "a b- a").unwrap();
        assert!(!is_string_brick(&k, &aba));
        assert_eq!(string_hom_pairs(&k, &aba, &aba).len(), 2);
    }

    #[test]
    fn band_endo_pair_counts() {
        let p = chained();
        let b = Band::parse(&p, "c d-").unwrap();
        assert!(band_endo_pairs(&p, &b).is_empty());
        assert!(is_band_brick(&p, &b));

        let long = Band::parse(&p, "a c d- c d- b-").unwrap();
        assert!(band_endo_pairs(&p, &long).is_empty());

        let k = kron();
        let ab = Band::parse(&k, "a b-").unwrap();
        assert!(is_band_brick(&k, &ab));

        let g = gentle();
        let xy = Band::parse(&g, "x y-").unwrap();
        let pairs = band_endo_pairs(&g, &xy);
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].word.len(), 0);
        assert!(!is_band_brick(&g, &xy));
    }

    #[test]
    fn cross_band_pairs_example() {
        let p = chained();
        let b = Band::parse(&p, "c d-").unwrap();
        let c = Band::parse(&p, "a c d- c d- b-").unwrap();
        let pairs = band_common_words(&p, &b, &c, b.len() + c.len());
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].word.to_string(), "c d- c d-");
    }

    #[test]
    fn top_socle_examples() {
        let p = chained();
        let v = |s: &str| VertexId::new(s);
        let band = Band::parse(&p, "c d-").unwrap();
        let (top, socle) = top_socle(&p, Host::Band(&band));
        assert_eq!(top, vec![v("2")]);
        assert_eq!(socle, vec![v("3")]);

        let string = Walk::parse(&p.quiver, "c d-").unwrap();
        let (top, socle) = top_socle(&p, Host::Finite(&string));
        assert_eq!(top, vec![v("2"), v("2")]);
        assert_eq!(socle, vec![v("3")]);

        let long = Band::parse(&p, "a c d- c d- b-").unwrap();
        let (top, socle) = top_socle(&p, Host::Band(&long));
        assert_eq!(top, vec![v("1"), v("2")]);
        assert_eq!(socle, vec![v("3"), v("3")]);
    }

    #[test]
    fn power_string_examples() {
        let p = chained();
        let b = Band::parse(&p, "d- c").unwrap();
        assert_eq!(power_string(&p, &b, 1).to_string(), "c d-");
        let b = Band::parse(&p, "c d-").unwrap();
        let sq = power_string(&p, &b, 2);
        assert_eq!(sq.to_string(), "c d- c d-");
        let k = kron();
        let ab = Band::parse(&k, "a b-").unwrap();
        assert!(is_string_brick(&k, &power_string(&k, &ab, 3)));
    }

    #[test]
    fn band_subpattern_examples() {
        let k = kron();
        let w = StringWord::parse(&k, "a b- a").unwrap();
        let found = find_band_subpattern(&k, &w).unwrap().unwrap();
        assert_eq!(found.alpha.to_string(), "a");
        assert_eq!(found.beta.to_string(), "b");
        assert!(found.middle.is_trivial());
        assert_eq!(found.band.canonical().to_string(), "a b-");

        let p = chained();
        let short = StringWord::parse(&p, "c").unwrap();
        assert!(find_band_subpattern(&p, &short).unwrap().is_none());

        let cdc = StringWord::parse(&p, "c d- c").unwrap();
        let found = find_band_subpattern(&p, &cdc).unwrap().unwrap();
        assert_eq!(found.alpha.to_string(), "c");
        assert_eq!(found.beta.to_string(), "d");
        assert_eq!(found.band.canonical().to_string(), "c d-");
    }

    #[test]
    fn brickness_invariant_under_rotation_and_inversion() {
        let p = chained();
        for text in ["c d-", "a c d- c d- b-"] {
            let b = Band::parse(&p, text).unwrap();
            let brick = is_band_brick(&p, &b);
            for r in 0..b.len() {
                assert_eq!(is_band_brick(&p, &b.rotated(r)), brick);
            }
            assert_eq!(is_band_brick(&p, &b.inverted()), brick);
        }
    }
}
