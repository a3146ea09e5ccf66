//! Positive braid words: parsing, validation, closure classification and
//! greedy rewriting toward a reduced representative.

use std::fmt;

use crate::error::{Error, Result};

/// A positive braid word on a fixed number of strands.
///
/// Letters are generator indices in `1..strands`, stored flattened (one entry
/// per crossing) so positional moves stay trivial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<usize>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<usize>) -> Result<Self> {
        if strands < 1 {
            return Err(Error::BadToken("strand count must be at least 1".into()));
        }
        for &l in &letters {
            if l == 0 {
                return Err(Error::NonPositiveIndex("0".into()));
            }
            if l >= strands {
                return Err(Error::IndexOutOfRange { index: l, strands });
            }
        }
        Ok(BraidWord { strands, letters })
    }

    /// Builds a word inferring the strand count as max letter + 1.
    pub fn from_letters(letters: Vec<usize>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::EmptyWord);
        }
        let max = *letters.iter().max().unwrap();
        BraidWord::new(max + 1, letters)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    /// Number of generators, i.e. columns of the standard diagram.
    pub fn generators(&self) -> usize {
        self.strands - 1
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    /// Crossing count of the standard closure diagram.
    pub fn crossings(&self) -> usize {
        self.letters.len()
    }

    pub fn index_sum(&self) -> usize {
        self.letters.iter().sum()
    }

    /// How often generator `i` occurs.
    pub fn occurrences(&self, i: usize) -> usize {
        self.letters.iter().filter(|&&l| l == i).count()
    }

    /// Positions (0-based word indices) of generator `i`, ascending.
    pub fn column(&self, i: usize) -> Vec<usize> {
        self.letters
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == i)
            .map(|(p, _)| p)
            .collect()
    }

    /// Number of link components of the closure (cycles of the underlying
    /// permutation).
    pub fn closure_components(&self) -> usize {
        let n = self.strands;
        let mut perm: Vec<usize> = (0..n).collect();
        for &l in &self.letters {
            perm.swap(l - 1, l);
        }
        let mut seen = vec![false; n];
        let mut cycles = 0;
        for s in 0..n {
            if !seen[s] {
                cycles += 1;
                let mut t = s;
                while !seen[t] {
                    seen[t] = true;
                    t = perm[t];
                }
            }
        }
        cycles
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "@{}", self.strands);
        }
        let body = self
            .letters
            .iter()
            .map(|l| l.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        if self.strands == self.letters.iter().max().unwrap() + 1 {
            write!(f, "{body}")
        } else {
            write!(f, "@{} {}", self.strands, body)
        }
    }
}

/// Parses a braid word from text.
///
/// The format is whitespace-separated generator indices, each optionally with
/// a caret power (`"1^3"` for three copies of σ1).  A leading `@N` token
/// declares the strand count explicitly; otherwise it is inferred as the
/// largest index plus one.
pub fn parse_braid_word(text: &str) -> Result<BraidWord> {
    let mut tokens = text.split_whitespace().peekable();
    let mut explicit_strands = None;
    if let Some(tok) = tokens.peek() {
        if let Some(rest) = tok.strip_prefix('@') {
            let n: usize = rest
                .parse()
                .map_err(|_| Error::BadToken((*tok).to_string()))?;
            explicit_strands = Some(n);
            tokens.next();
        }
    }
    let mut letters = Vec::new();
    for tok in tokens {
        let (base, power) = match tok.split_once('^') {
            Some((b, e)) => {
                let e: usize = e.parse().map_err(|_| Error::BadToken(tok.to_string()))?;
                (b, e)
            }
            None => (tok, 1),
        };
        if base.starts_with('-') || base == "0" {
            return Err(Error::NonPositiveIndex(base.to_string()));
        }
        let idx: usize = base.parse().map_err(|_| Error::BadToken(tok.to_string()))?;
        if idx == 0 {
            return Err(Error::NonPositiveIndex(base.to_string()));
        }
        letters.extend(std::iter::repeat(idx).take(power));
    }
    if letters.is_empty() {
        return Err(Error::EmptyWord);
    }
    match explicit_strands {
        Some(n) => BraidWord::new(n, letters),
        None => BraidWord::from_letters(letters),
    }
}

/// Reads braid words from file content: one word per line, `#` comments.
pub fn parse_braid_file(content: &str) -> Result<Vec<BraidWord>> {
    let mut words = Vec::new();
    for line in content.lines() {
        let line = match line.split_once('#') {
            Some((head, _)) => head,
            None => line,
        };
        if line.trim().is_empty() {
            continue;
        }
        words.push(parse_braid_word(line)?);
    }
    Ok(words)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassificationKind {
    /// One strand, no crossings.
    Unknot,
    /// Some generator unused: the closure is a split union.
    Split,
    /// Some generator used exactly once: a connected sum.
    ConnectedSum,
    /// Two strands, single generator used at least twice: the (2,k) torus link.
    Torus2k(usize),
    /// At least three strands and every generator used at least twice.
    Generic,
}

/// Classification of a braid closure into the trivial cases and the generic
/// one, in first-match order.
#[derive(Debug, Clone)]
pub struct Classification {
    pub kind: ClassificationKind,
    /// Sub-words for the split and connected-sum cases.
    pub parts: Option<(BraidWord, BraidWord)>,
}

fn split_parts(word: &BraidWord, at: usize, drop_letter: bool) -> (BraidWord, BraidWord) {
    let left: Vec<usize> = word
        .letters()
        .iter()
        .copied()
        .filter(|&l| l < at)
        .collect();
    let right: Vec<usize> = word
        .letters()
        .iter()
        .copied()
        .filter(|&l| l > at)
        .map(|l| l - at)
        .collect();
    debug_assert!(drop_letter || word.occurrences(at) == 0);
    let a = BraidWord::new(at, left).expect("valid sub-word");
    let b = BraidWord::new(word.strands() - at, right).expect("valid sub-word");
    (a, b)
}

pub fn classify(word: &BraidWord) -> Classification {
    let g = word.generators();
    if word.strands() == 1 {
        return Classification {
            kind: ClassificationKind::Unknot,
            parts: None,
        };
    }
    for i in 1..=g {
        if word.occurrences(i) == 0 {
            return Classification {
                kind: ClassificationKind::Split,
                parts: Some(split_parts(word, i, false)),
            };
        }
    }
    for i in 1..=g {
        if word.occurrences(i) == 1 {
            return Classification {
                kind: ClassificationKind::ConnectedSum,
                parts: Some(split_parts(word, i, true)),
            };
        }
    }
    if g == 1 {
        return Classification {
            kind: ClassificationKind::Torus2k(word.crossings()),
            parts: None,
        };
    }
    Classification {
        kind: ClassificationKind::Generic,
        parts: None,
    }
}

/// Splits a word into its nonsplit components (leaves of the recursive split
/// decomposition). Empty leaves (bare strands) are kept so component counts add up.
pub fn split_components(word: &BraidWord) -> Vec<BraidWord> {
    let c = classify(word);
    match c.kind {
        ClassificationKind::Split => {
            let (a, b) = c.parts.unwrap();
            let mut out = split_components(&a);
            out.extend(split_components(&b));
            out
        }
        _ => vec![word.clone()],
    }
}

/// First Betti number of the closure: crossings minus generator count.
///
/// Only defined for nonsplit closures; split input is rejected.
pub fn betti(word: &BraidWord) -> Result<i64> {
    for i in 1..=word.generators() {
        if word.occurrences(i) == 0 {
            return Err(Error::SplitInput(i));
        }
    }
    Ok(word.crossings() as i64 - word.generators() as i64)
}

/// Total Betti number over the split decomposition.
pub fn betti_total(word: &BraidWord) -> i64 {
    split_components(word)
        .iter()
        .map(|w| w.crossings() as i64 - w.generators() as i64)
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionMove {
    CyclicShift(usize),
    DistantSwap(usize),
    BraidRelation(usize),
    Destabilize,
}

/// Record of the moves applied by [`reduce`], ending in the reduced word.
#[derive(Debug, Clone)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionMove>,
    pub result: BraidWord,
    /// Set when the step budget ran out before reaching a fixpoint.
    pub budget_exhausted: bool,
}

impl ReductionTrace {
    pub fn is_identity(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Finds a column-k face with exactly three sides whose side crossing lies in
/// column k-1. Returns (k, p, c, q): consecutive σ_k positions p, q with the
/// lone σ_{k-1} at c between them (cyclically).
fn find_left_pointing(word: &BraidWord) -> Option<(usize, usize, usize, usize)> {
    let cr = word.crossings();
    let g = word.generators();
    for k in 2..=g {
        let col = word.column(k);
        if col.len() < 2 {
            continue;
        }
        for (t, &p) in col.iter().enumerate() {
            let q = col[(t + 1) % col.len()];
            let mut lower = None;
            let mut extra = 0usize;
            let mut pos = (p + 1) % cr;
            while pos != q {
                let l = word.letters()[pos];
                if l == k - 1 {
                    if lower.is_some() {
                        extra += 1;
                    } else {
                        lower = Some(pos);
                    }
                } else if l == k + 1 {
                    extra += 1;
                }
                pos = (pos + 1) % cr;
            }
            if extra == 0 {
                if let Some(c) = lower {
                    return Some((k, p, c, q));
                }
            }
        }
    }
    None
}

struct Reducer {
    word: BraidWord,
    steps: Vec<ReductionMove>,
    budget: usize,
}

impl Reducer {
    fn spend(&mut self, step: ReductionMove) -> bool {
        if self.budget == 0 {
            return false;
        }
        self.budget -= 1;
        self.steps.push(step);
        true
    }

    fn rotate(&mut self, amount: usize) -> bool {
        if amount == 0 {
            return true;
        }
        if !self.spend(ReductionMove::CyclicShift(amount)) {
            return false;
        }
        let mut letters = self.word.letters().to_vec();
        letters.rotate_left(amount);
        self.word = BraidWord::new(self.word.strands(), letters).unwrap();
        true
    }

    /// Swaps the letters at positions pos and pos+1. Valid only when the two
    /// generator indices differ by at least two.
    fn distant_swap(&mut self, pos: usize) -> bool {
        let a = self.word.letters()[pos];
        let b = self.word.letters()[pos + 1];
        assert!(
            a.abs_diff(b) >= 2,
            "swap of non-commuting letters {a},{b} at {pos}"
        );
        if !self.spend(ReductionMove::DistantSwap(pos)) {
            return false;
        }
        let mut letters = self.word.letters().to_vec();
        letters.swap(pos, pos + 1);
        self.word = BraidWord::new(self.word.strands(), letters).unwrap();
        true
    }

    fn destabilize(&mut self) -> bool {
        let top = self.word.generators();
        let col = self.word.column(top);
        assert_eq!(col.len(), 1);
        if !self.spend(ReductionMove::Destabilize) {
            return false;
        }
        let mut letters = self.word.letters().to_vec();
        letters.remove(col[0]);
        self.word = BraidWord::new(self.word.strands() - 1, letters).unwrap();
        true
    }

    /// Rewrites σ_k σ_{k-1} σ_k -> σ_{k-1} σ_k σ_{k-1} after moving the
    /// commuting letters between p and q out of the way.
    fn apply_relation(&mut self, k: usize, p: usize, c: usize, q: usize) -> bool {
        let cr = self.word.crossings();
        if !self.rotate(p) {
            return false;
        }
        let c = (c + cr - p) % cr;
        let q = (q + cr - p) % cr;
        // The letters between the leading σ_k (now at 0) and the σ_{k-1} all
        // commute with σ_k; slide σ_k right past them one swap at a time.
        let mut pos_k = 0;
        while pos_k + 1 < c {
            if !self.distant_swap(pos_k) {
                return false;
            }
            pos_k += 1;
        }
        // The σ_{k-1} is now immediately right of σ_k. Slide the closing σ_k
        // left past the letters separating it from the σ_{k-1}.
        let start = pos_k;
        debug_assert_eq!(self.word.letters()[start], k);
        debug_assert_eq!(self.word.letters()[start + 1], k - 1);
        let mut closing = q; // position of the trailing σ_k (unchanged by left moves)
        while closing > start + 2 {
            if !self.distant_swap(closing - 1) {
                return false;
            }
            closing -= 1;
        }
        debug_assert_eq!(self.word.letters()[start + 2], k);
        if !self.spend(ReductionMove::BraidRelation(start)) {
            return false;
        }
        let mut letters = self.word.letters().to_vec();
        letters[start] = k - 1;
        letters[start + 1] = k;
        letters[start + 2] = k - 1;
        self.word = BraidWord::new(self.word.strands(), letters).unwrap();
        true
    }
}

/// Greedy fixpoint reduction: destabilize when the top generator is used
/// exactly once, otherwise hunt for a rewritable σ_k σ_{k-1} σ_k pattern
/// (equivalently, a three-sided face whose side crossing sits in the column
/// to its left) and apply the braid relation there. Strand count and index
/// sum never increase; each relation lowers the index sum by one.
pub fn reduce(word: &BraidWord) -> ReductionTrace {
    let budget = 10 * word.crossings() * word.crossings() + 64;
    reduce_with_budget(word, budget)
}

pub fn reduce_with_budget(word: &BraidWord, budget: usize) -> ReductionTrace {
    let mut r = Reducer {
        word: word.clone(),
        steps: Vec::new(),
        budget,
    };
    let mut exhausted = false;
    loop {
        let top = r.word.generators();
        if top >= 1 && r.word.occurrences(top) == 1 {
            if !r.destabilize() {
                exhausted = true;
                break;
            }
            continue;
        }
        match find_left_pointing(&r.word) {
            Some((k, p, c, q)) => {
                if !r.apply_relation(k, p, c, q) {
                    exhausted = true;
                    break;
                }
            }
            None => break,
        }
    }
    ReductionTrace {
        steps: r.steps,
        result: r.word,
        budget_exhausted: exhausted,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_plain_word() {
        let w = parse_braid_word("1 1 1").unwrap();
        assert_eq!(w.strands(), 2);
        assert_eq!(w.letters(), &[1, 1, 1]);
    }

    #[test]
    fn parse_sample_fifteen_crossing_word() {
        let w = parse_braid_word("1 4 4 2 1 3 2 4 1 3 3 2 4 1 3").unwrap();
        assert_eq!(w.strands(), 5);
        assert_eq!(w.crossings(), 15);
    }

    #[test]
    fn parse_rejects_nonpositive() {
        assert!(matches!(
            parse_braid_word("0 2"),
            Err(Error::NonPositiveIndex(_))
        ));
        assert!(parse_braid_word("-1 2").is_err());
    }

    #[test]
    fn parse_rejects_empty() {
        assert!(matches!(parse_braid_word("   "), Err(Error::EmptyWord)));
    }

    #[test]
    fn parse_powers_and_explicit_strands() {
        let w = parse_braid_word("1^3").unwrap();
        assert_eq!(w.letters(), &[1, 1, 1]);
        let w = parse_braid_word("@5 1 2").unwrap();
        assert_eq!(w.strands(), 5);
        assert!(matches!(
            parse_braid_word("@3 1 3"),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn parse_file_with_comments() {
        let words = parse_braid_file("# corpus\n1 1 1\n\n1 2 1 2 # trefoil again\n").unwrap();
        assert_eq!(words.len(), 2);
    }

    #[test]
    fn classify_torus() {
        let w = parse_braid_word("1 1 1").unwrap();
        assert_eq!(classify(&w).kind, ClassificationKind::Torus2k(3));
    }

    #[test]
    fn classify_split_on_unused_generator() {
        let w = parse_braid_word("2 2 2").unwrap();
        let c = classify(&w);
        assert_eq!(c.kind, ClassificationKind::Split);
        let (a, b) = c.parts.unwrap();
        assert_eq!(a.crossings(), 0);
        assert_eq!(b.letters(), &[1, 1, 1]);
    }

    #[test]
    fn classify_generic() {
        let w = parse_braid_word("1 4 4 2 1 3 2 4 1 3 3 2 4 1 3").unwrap();
        for i in 1..=4 {
            assert!(w.occurrences(i) >= 2);
        }
        assert_eq!(classify(&w).kind, ClassificationKind::Generic);
    }

    #[test]
    fn classify_connected_sum() {
        let w = parse_braid_word("1 1 2 3 3").unwrap();
        let c = classify(&w);
        assert_eq!(c.kind, ClassificationKind::ConnectedSum);
        let (a, b) = c.parts.unwrap();
        assert_eq!(a.letters(), &[1, 1]);
        assert_eq!(b.letters(), &[1, 1]);
    }

    #[test]
    fn three_strand_words_are_generic() {
        let w = parse_braid_word("1 2 1 2 1 2").unwrap();
        assert_eq!(classify(&w).kind, ClassificationKind::Generic);
    }

    #[test]
    fn betti_values() {
        assert_eq!(betti(&parse_braid_word("1 1 1").unwrap()).unwrap(), 2);
        let fig = parse_braid_word("1 4 4 2 1 3 2 4 1 3 3 2 4 1 3").unwrap();
        assert_eq!(betti(&fig).unwrap(), 11);
        let e = parse_braid_word("1 2 2 1 1 2 2 1").unwrap();
        assert_eq!(betti(&e).unwrap(), 6);
        assert!(betti(&parse_braid_word("2 2").unwrap()).is_err());
    }

    #[test]
    fn reduce_applies_single_relation() {
        // σ2σ1σ2 -> σ1σ2σ1 (index sum 5 -> 4); σ2 is then used once, so a
        // destabilization follows and the fixpoint is the Hopf word.
        let w = parse_braid_word("2 1 2").unwrap();
        let t = reduce(&w);
        assert_eq!(
            t.steps,
            vec![ReductionMove::BraidRelation(0), ReductionMove::Destabilize]
        );
        assert_eq!(t.result.letters(), &[1, 1]);
        assert_eq!(t.result.strands(), 2);
    }

    #[test]
    fn reduce_destabilizes_single_top_use() {
        let w = parse_braid_word("1 1 2").unwrap();
        let t = reduce(&w);
        assert_eq!(t.result.strands(), 2);
        assert_eq!(t.result.letters(), &[1, 1]);
        assert_eq!(t.steps, vec![ReductionMove::Destabilize]);
    }

    #[test]
    fn reduce_fixed_family_is_identity() {
        for n in 2..=5 {
            let mut letters: Vec<usize> = (1..=n).chain((1..=n).rev()).collect();
            let doubled: Vec<usize> = letters.iter().chain(letters.iter()).copied().collect();
            letters = doubled;
            let w = BraidWord::new(n + 1, letters).unwrap();
            let t = reduce(&w);
            assert!(t.is_identity(), "n={n}: {:?}", t.steps);
        }
    }

    #[test]
    fn reduce_never_increases_metrics() {
        let w = parse_braid_word("2 1 2 2 1 2").unwrap();
        let t = reduce(&w);
        assert!(t.result.strands() <= w.strands());
        assert!(t.result.index_sum() <= w.index_sum());
        // b1 is preserved by every move
        assert_eq!(
            t.result.crossings() as i64 - t.result.generators() as i64,
            w.crossings() as i64 - w.generators() as i64
        );
    }

    #[test]
    fn closure_components_counts_cycles() {
        assert_eq!(
            parse_braid_word("1 1 1").unwrap().closure_components(),
            1
        );
        assert_eq!(parse_braid_word("1 1").unwrap().closure_components(), 2);
        let e2 = parse_braid_word("1 2 2 1 1 2 2 1").unwrap();
        assert_eq!(e2.closure_components(), 3);
    }
}
