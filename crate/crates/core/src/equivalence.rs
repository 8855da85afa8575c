//! Change of lattice basis, substitution rules read off from pairs of
//! quasilattices cut from the same line, and tile-word rewriting.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{cut_and_project, GeometricSpec, Tile};
use crate::numeric::QuadraticNumber as Q;

/// `τ = [[a, b], [c, d]]`: `m1' = a m1 + b m2`, `m2' = c m1 + d m2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[[i64; 2]; 2]", into = "[[i64; 2]; 2]")]
pub struct BasisChange {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl From<[[i64; 2]; 2]> for BasisChange {
    fn from(m: [[i64; 2]; 2]) -> Self {
        BasisChange::new(m[0][0], m[0][1], m[1][0], m[1][1])
    }
}

impl From<BasisChange> for [[i64; 2]; 2] {
    fn from(t: BasisChange) -> Self {
        [[t.a, t.b], [t.c, t.d]]
    }
}

impl fmt::Display for BasisChange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.a, self.b, self.c, self.d)
    }
}

impl FromStr for BasisChange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let v: Vec<i64> = s
            .split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Parse(s.to_string()))?;
        match v.as_slice() {
            [a, b, c, d] => Ok(BasisChange::new(*a, *b, *c, *d)),
            _ => Err(Error::Parse(s.to_string())),
        }
    }
}

impl BasisChange {
    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        BasisChange { a, b, c, d }
    }

    pub const fn identity() -> Self {
        BasisChange::new(1, 0, 0, 1)
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> i64 {
        self.a + self.d
    }

    pub fn is_nonnegative(&self) -> bool {
        self.a >= 0 && self.b >= 0 && self.c >= 0 && self.d >= 0
    }

    /// `self · other`, i.e. apply `other` first, then `self`.
    pub fn compose(&self, other: &BasisChange) -> BasisChange {
        BasisChange::new(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )
    }

    pub fn pow(&self, s: u32) -> BasisChange {
        (0..s).fold(BasisChange::identity(), |acc, _| acc.compose(self))
    }
}

/// Re-expresses the lattice in the basis `{a m1 + b m2, c m1 + d m2}`.
pub fn compose_bases(spec: &GeometricSpec, tau: &BasisChange) -> Result<GeometricSpec> {
    let det = tau.det();
    if det.abs() != 1 {
        return Err(Error::NotUnimodular(det));
    }
    let out = GeometricSpec::new(
        spec.m1.combine(tau.a, &spec.m2, tau.b),
        spec.m1.combine(tau.c, &spec.m2, tau.d),
        spec.q0_par.clone(),
        spec.q0_perp.clone(),
    );
    out.require_positive()?;
    Ok(out)
}

/// Recovers the integer `τ` relating two positive bases of one lattice,
/// the first strictly wider across the line than the second.
pub fn check_tau_nonnegative(spec: &GeometricSpec, spec_prime: &GeometricSpec) -> Result<BasisChange> {
    spec.require_positive()?;
    spec_prime.require_positive()?;
    let int = |x: Q| -> Result<i64> {
        x.to_integer()
            .and_then(|n| i64::try_from(n).ok())
            .ok_or(Error::NotSameLattice)
    };
    let (a, b) = spec.dual_coords(&spec_prime.m1.par, &spec_prime.m1.perp)?;
    let (c, d) = spec.dual_coords(&spec_prime.m2.par, &spec_prime.m2.perp)?;
    let tau = BasisChange::new(int(a)?, int(b)?, int(c)?, int(d)?);
    if tau.det().abs() != 1 {
        return Err(Error::NotSameLattice);
    }
    if spec.width() <= spec_prime.width() {
        return Err(Error::WidthOrder);
    }
    if !tau.is_nonnegative() {
        return Err(Error::InvalidParams(format!("tau {tau} has a negative entry")));
    }
    Ok(tau)
}

/// A word of full tiles with optional half tiles at either end.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TileWord {
    pub letters: Vec<Tile>,
    pub left_half: Option<Tile>,
    pub right_half: Option<Tile>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Token {
    Full(Tile),
    Half(Tile),
}

impl TileWord {
    pub fn new(letters: Vec<Tile>) -> Self {
        TileWord { letters, left_half: None, right_half: None }
    }

    pub fn has_halves(&self) -> bool {
        self.left_half.is_some() || self.right_half.is_some()
    }

    /// Letter counts `(#S, #L)` with halves counted as ½, doubled to stay integral.
    pub fn doubled_counts(&self) -> (i64, i64) {
        let mut c = (0, 0);
        let mut add = |t: Tile, w: i64| match t {
            Tile::S => c.0 += w,
            Tile::L => c.1 += w,
        };
        for &t in &self.letters {
            add(t, 2);
        }
        for t in self.left_half.iter().chain(self.right_half.iter()) {
            add(*t, 1);
        }
        c
    }

    pub fn reversed(&self) -> TileWord {
        TileWord {
            letters: self.letters.iter().rev().copied().collect(),
            left_half: self.right_half,
            right_half: self.left_half,
        }
    }

    pub fn is_palindrome(&self) -> bool {
        *self == self.reversed()
    }

    fn tokens(&self) -> Vec<Token> {
        let mut out = Vec::with_capacity(self.letters.len() + 2);
        out.extend(self.left_half.map(Token::Half));
        out.extend(self.letters.iter().map(|&t| Token::Full(t)));
        out.extend(self.right_half.map(Token::Half));
        out
    }

    fn from_tokens(tokens: &[Token]) -> Result<TileWord> {
        let n = tokens.len();
        let mut word = TileWord::default();
        for (i, &tok) in tokens.iter().enumerate() {
            match tok {
                Token::Full(t) => word.letters.push(t),
                Token::Half(t) if i == 0 => word.left_half = Some(t),
                Token::Half(t) if i == n - 1 => word.right_half = Some(t),
                Token::Half(_) => return Err(Error::InvalidWord("half tile in the interior".into())),
            }
        }
        Ok(word)
    }

    fn expanded(&self, half: Option<Tile>) -> Vec<Token> {
        let mut out = Vec::new();
        for tok in self.tokens() {
            match tok {
                Token::Full(t) if Some(t) == half => {
                    out.push(Token::Half(t));
                    out.push(Token::Half(t));
                }
                other => out.push(other),
            }
        }
        out
    }
}

impl fmt::Display for TileWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lower = |t: Tile| t.as_char().to_ascii_lowercase();
        if let Some(t) = self.left_half {
            write!(f, "{}", lower(t))?;
        }
        for t in &self.letters {
            write!(f, "{}", t.as_char())?;
        }
        if let Some(t) = self.right_half {
            write!(f, "{}", lower(t))?;
        }
        Ok(())
    }
}

impl FromStr for TileWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().collect();
        let n = chars.len();
        let mut word = TileWord::default();
        for (i, &ch) in chars.iter().enumerate() {
            let tile = match ch.to_ascii_uppercase() {
                'S' => Tile::S,
                'L' => Tile::L,
                _ => return Err(Error::InvalidWord(s.to_string())),
            };
            if ch.is_ascii_uppercase() {
                word.letters.push(tile);
            } else if i == 0 {
                word.left_half = Some(tile);
            } else if i == n - 1 {
                word.right_half = Some(tile);
            } else {
                return Err(Error::InvalidWord(s.to_string()));
            }
        }
        Ok(word)
    }
}

impl Serialize for TileWord {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for TileWord {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Decorations of the primed tiles `S'` and `L'` by unprimed tiles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubstitutionRule {
    pub tau: BasisChange,
    #[serde(rename = "S")]
    pub word_s: TileWord,
    #[serde(rename = "L")]
    pub word_l: TileWord,
}

impl SubstitutionRule {
    /// Checks the half-tile conventions and the letter counts against `τ`.
    pub fn new(tau: BasisChange, word_s: TileWord, word_l: TileWord) -> Result<Self> {
        let rule = SubstitutionRule { tau, word_s, word_l };
        rule.half_letter()?;
        let (cs, cl) = (rule.word_s.doubled_counts(), rule.word_l.doubled_counts());
        if cs != (2 * tau.a, 2 * tau.b) || cl != (2 * tau.c, 2 * tau.d) {
            return Err(Error::InvalidWord(format!("letter counts do not match tau {tau}")));
        }
        Ok(rule)
    }

    /// The letter of the end half tiles, if the rule uses any.
    pub fn half_letter(&self) -> Result<Option<Tile>> {
        let ends = |w: &TileWord| -> Result<Option<Tile>> {
            match (w.left_half, w.right_half) {
                (None, None) => Ok(None),
                (Some(a), Some(b)) if a == b => Ok(Some(a)),
                _ => Err(Error::InvalidWord(format!("unbalanced half tiles in {w}"))),
            }
        };
        let (hs, hl) = (ends(&self.word_s)?, ends(&self.word_l)?);
        if hs != hl {
            return Err(Error::InvalidWord("half tiles must agree between S' and L'".into()));
        }
        Ok(hs)
    }

    pub fn word(&self, t: Tile) -> &TileWord {
        match t {
            Tile::S => &self.word_s,
            Tile::L => &self.word_l,
        }
    }

    pub fn is_reflection_symmetric(&self) -> bool {
        self.word_s.is_palindrome() && self.word_l.is_palindrome()
    }
}

impl fmt::Display for SubstitutionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S'->{} L'->{}", self.word_s, self.word_l)
    }
}

/// Replaces every primed letter by its decoration and merges adjacent halves.
pub fn apply_rule(rule: &SubstitutionRule, word: &TileWord) -> Result<TileWord> {
    if word.has_halves() {
        return Err(Error::InvalidWord("cannot substitute into half tiles".into()));
    }
    let mut tokens: Vec<Token> = Vec::new();
    for &t in &word.letters {
        let mut piece = rule.word(t).tokens().into_iter();
        if let (Some(&Token::Half(a)), Some(Token::Half(b))) = (tokens.last(), piece.clone().next()) {
            if a != b {
                return Err(Error::InvalidWord("adjacent halves of different tiles".into()));
            }
            tokens.pop();
            tokens.push(Token::Full(a));
            piece.next();
        }
        tokens.extend(piece);
    }
    TileWord::from_tokens(&tokens)
}

/// Left inverse of [`apply_rule`].
pub fn glue(rule: &SubstitutionRule, word: &TileWord) -> Result<TileWord> {
    let half = rule.half_letter()?;
    let target = word.expanded(half);
    let pieces = [(Tile::S, rule.word_s.expanded(half)), (Tile::L, rule.word_l.expanded(half))];
    if pieces.iter().any(|(_, p)| p.is_empty()) {
        return Err(Error::InvalidWord("empty decoration".into()));
    }
    let mut memo: HashMap<usize, Option<Vec<Tile>>> = HashMap::new();
    parse_from(0, &target, &pieces, &mut memo)
        .map(TileWord::new)
        .ok_or_else(|| Error::UnparseableWord(word.to_string()))
}

fn parse_from(
    pos: usize,
    target: &[Token],
    pieces: &[(Tile, Vec<Token>); 2],
    memo: &mut HashMap<usize, Option<Vec<Tile>>>,
) -> Option<Vec<Tile>> {
    if pos == target.len() {
        return Some(Vec::new());
    }
    if let Some(hit) = memo.get(&pos) {
        return hit.clone();
    }
    let mut found = None;
    for (tile, piece) in pieces {
        if target[pos..].starts_with(piece) {
            if let Some(mut rest) = parse_from(pos + piece.len(), target, pieces, memo) {
                rest.insert(0, *tile);
                found = Some(rest);
                break;
            }
        }
    }
    memo.insert(pos, found.clone());
    found
}

/// Exact points produced by decorating primed tiles starting at the given
/// points: every full-tile boundary inside a decoration, plus the primed
/// endpoints when the rule has no halves.
pub fn decorate_points(rule: &SubstitutionRule, primed: &[Q], short: &Q, long: &Q) -> Result<Vec<Q>> {
    let len = |t: Tile| if t == Tile::S { short.clone() } else { long.clone() };
    let mut out: Vec<Q> = Vec::new();
    for w in primed.windows(2) {
        let gap = &w[1] - &w[0];
        let word = rule.word(primed_letter(&gap, rule, short, long)?);
        let mut x = w[0].clone();
        if let Some(h) = word.left_half {
            x = x + len(h) / 2;
        }
        if out.last() != Some(&x) {
            out.push(x.clone());
        }
        for &t in &word.letters {
            x = x + len(t);
            out.push(x.clone());
        }
    }
    Ok(out)
}

fn primed_letter(gap: &Q, rule: &SubstitutionRule, short: &Q, long: &Q) -> Result<Tile> {
    let total = |w: &TileWord| {
        let (s, l) = w.doubled_counts();
        (short * s + long * l) / 2
    };
    if *gap == total(&rule.word_s) {
        Ok(Tile::S)
    } else if *gap == total(&rule.word_l) {
        Ok(Tile::L)
    } else {
        Err(Error::InvalidWord(format!("gap {gap} matches neither decoration")))
    }
}

const READOFF_START: i64 = 64;
const READOFF_CAP: i64 = 1 << 14;

/// Reads the decoration of each primed tile off the two quasilattices cut
/// from the same line by the bases `spec` and `compose_bases(spec, τ)`.
pub fn derive_canonical_rule(spec: &GeometricSpec, tau: &BasisChange) -> Result<SubstitutionRule> {
    let primed = compose_bases(spec, tau)?;
    let mut n = READOFF_START;
    loop {
        match readoff_window(spec, &primed, tau, n)? {
            Some(rule) => return Ok(rule),
            None if n >= READOFF_CAP => {
                return Err(Error::AmbiguousReadoff(format!("a primed letter never appeared for |n| <= {n}")))
            }
            None => n *= 2,
        }
    }
}

fn readoff_window(
    spec: &GeometricSpec,
    primed: &GeometricSpec,
    tau: &BasisChange,
    n: i64,
) -> Result<Option<SubstitutionRule>> {
    let outer = cut_and_project(primed, -n..=n)?;
    let xs_p = outer.xs();
    // the unprimed points are denser by at most max(a+b, c+d)
    let k = (tau.a + tau.b).max(tau.c + tau.d).max(1) * (n + 2) + 2;
    let inner = cut_and_project(spec, -k..=k)?;
    let xs = inner.xs();
    if xs.first() > xs_p.first() || xs.last() < xs_p.last() {
        return Err(Error::AmbiguousReadoff("unprimed window does not cover primed window".into()));
    }
    let short = spec.m1.par.clone().min(spec.m2.par.clone());
    let tile_of = |gap: &Q| if *gap == short { Tile::S } else { Tile::L };
    let primed_short = primed.m1.par.clone().min(primed.m2.par.clone());

    let mut found: [Option<TileWord>; 2] = [None, None];
    for w in xs_p.windows(2) {
        let (lo, hi) = (&w[0], &w[1]);
        let letter = if &(hi - lo) == &primed_short { Tile::S } else { Tile::L };
        let word = readoff_interval(&xs, lo, hi, &tile_of)?;
        let slot = &mut found[if letter == Tile::S { 0 } else { 1 }];
        match slot {
            None => *slot = Some(word),
            Some(prev) if *prev == word => {}
            Some(prev) => {
                return Err(Error::AmbiguousReadoff(format!(
                    "{}' decorated both as {prev} and {word}",
                    letter.as_char()
                )))
            }
        }
    }
    match found {
        [Some(ws), Some(wl)] => SubstitutionRule::new(*tau, ws, wl).map(Some),
        _ => Ok(None),
    }
}

/// Word of unprimed tiles covering `[lo, hi]`; each endpoint must be an
/// unprimed point or the midpoint of an unprimed tile.
fn readoff_interval(xs: &[Q], lo: &Q, hi: &Q, tile_of: &dyn Fn(&Q) -> Tile) -> Result<TileWord> {
    let mut word = TileWord::default();
    let start = xs.partition_point(|x| x < lo);
    let end = xs.partition_point(|x| x <= hi);
    let inside = &xs[start..end];
    let first = inside.first().ok_or_else(|| Error::AmbiguousReadoff("primed tile contains no point".into()))?;
    let last = inside.last().unwrap();
    if first != lo {
        let prev = &xs[start - 1];
        if &(prev + first) / 2 != *lo {
            return Err(Error::AmbiguousReadoff(format!("primed point {lo} is neither a point nor a tile midpoint")));
        }
        word.left_half = Some(tile_of(&(first - prev)));
    }
    for p in inside.windows(2) {
        word.letters.push(tile_of(&(&p[1] - &p[0])));
    }
    if last != hi {
        let next = &xs[end];
        if &(last + next) / 2 != *hi {
            return Err(Error::AmbiguousReadoff(format!("primed point {hi} is neither a point nor a tile midpoint")));
        }
        word.right_half = Some(tile_of(&(next - last)));
    }
    Ok(word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BasisVector;

    fn w(s: &str) -> TileWord {
        s.parse().unwrap()
    }

    fn case1() -> GeometricSpec {
        GeometricSpec::new(
            BasisVector::new(Q::one(), Q::one()),
            BasisVector::new(Q::phi(), Q::one() - Q::phi()),
            Q::zero(),
            Q::ratio(1, 3),
        )
    }

    #[test]
    fn word_text_round_trip() {
        for s in ["lSLLSl", "ll", "LSL", "sLLs", "S"] {
            assert_eq!(w(s).to_string(), s);
        }
        assert!("LsL".parse::<TileWord>().is_err());
        assert!("LxL".parse::<TileWord>().is_err());
    }

    #[test]
    fn row1_apply() {
        let rule = SubstitutionRule::new(BasisChange::new(0, 1, 1, 1), w("ll"), w("lSl")).unwrap();
        assert_eq!(apply_rule(&rule, &w("LSL")).unwrap().to_string(), "lSLLSl");
        assert_eq!(glue(&rule, &w("lSLLSl")).unwrap().to_string(), "LSL");
    }

    #[test]
    fn prefix_ambiguity_is_resolved() {
        let rule = SubstitutionRule::new(BasisChange::new(0, 1, 1, 2), w("L"), w("LSL")).unwrap();
        let parent = w("LSLLSLSL");
        let child = apply_rule(&rule, &parent).unwrap();
        assert_eq!(glue(&rule, &child).unwrap(), parent);
        assert!(matches!(glue(&rule, &w("SS")), Err(Error::UnparseableWord(_))));
    }

    #[test]
    fn mixed_halves_rejected() {
        assert!(SubstitutionRule::new(BasisChange::new(0, 1, 1, 1), w("ll"), w("SL")).is_err());
        assert!(SubstitutionRule::new(BasisChange::new(1, 0, 1, 1), w("ss"), w("lSl")).is_err());
    }

    #[test]
    fn compose_and_recover() {
        let spec = case1();
        assert_eq!(compose_bases(&spec, &BasisChange::identity()).unwrap(), spec);
        let tau = BasisChange::new(0, 1, 1, 1);
        let primed = compose_bases(&spec, &tau).unwrap();
        assert_eq!(check_tau_nonnegative(&spec, &primed).unwrap(), tau);
        assert_eq!(check_tau_nonnegative(&primed, &spec), Err(Error::WidthOrder));
        assert_eq!(compose_bases(&spec, &BasisChange::new(1, 1, 1, 2)).map(|_| ()), Ok(()));
        assert_eq!(compose_bases(&spec, &BasisChange::new(2, 0, 0, 1)), Err(Error::NotUnimodular(2)));
    }

    #[test]
    fn case1_canonical_rule() {
        let rule = derive_canonical_rule(&case1(), &BasisChange::new(0, 1, 1, 1)).unwrap();
        assert_eq!(rule.word_s.to_string(), "ll");
        assert_eq!(rule.word_l.to_string(), "lSl");
        assert!(rule.is_reflection_symmetric());
    }
}
