//! Expression data model: unreduced positive fractions, atoms of one to
//! three levels, and right-associated towers of atoms.
//!
//! Canonical text form:
//!
//! ```text
//! frac  := '(' INT '/' INT ')'          INT := [1-9][0-9]*
//! atom  := frac | frac '^' frac | frac '^' '[' frac '^' frac ']'
//! tower := atom | atom '^' '{' tower '}'
//! ```

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rug::Integer;
use thiserror::Error;

/// A positive fraction `num/den`. The representation is never reduced, so
/// `2/4` and `1/2` are different values of this type.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rational {
    num: Integer,
    den: Integer,
}

impl Rational {
    pub fn new(num: impl Into<Integer>, den: impl Into<Integer>) -> Result<Self, ExprError> {
        let num = num.into();
        let den = den.into();
        if num < 1 || den < 1 {
            return Err(ExprError::NonPositive);
        }
        Ok(Rational { num, den })
    }

    /// Builds a fraction from small components that are known to be positive.
    pub(crate) fn small(num: u32, den: u32) -> Self {
        debug_assert!(num >= 1 && den >= 1);
        Rational {
            num: Integer::from(num),
            den: Integer::from(den),
        }
    }

    pub fn num(&self) -> &Integer {
        &self.num
    }

    pub fn den(&self) -> &Integer {
        &self.den
    }

    pub fn weight(&self) -> Integer {
        Integer::from(&self.num + &self.den)
    }

    /// The numeric value in lowest terms.
    pub fn value(&self) -> rug::Rational {
        rug::Rational::from((&self.num, &self.den))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}/{})", self.num, self.den)
    }
}

/// One of the three atom shapes. `PowPow(b, m, t)` is `b ^ (m ^ t)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    Frac(Rational),
    Pow(Rational, Rational),
    PowPow(Rational, Rational, Rational),
}

impl Atom {
    /// Number of stacked fractions (1 to 3).
    pub fn depth(&self) -> usize {
        match self {
            Atom::Frac(_) => 1,
            Atom::Pow(..) => 2,
            Atom::PowPow(..) => 3,
        }
    }

    /// The fractions from the base upwards.
    pub fn levels(&self) -> Vec<&Rational> {
        match self {
            Atom::Frac(r) => vec![r],
            Atom::Pow(b, e) => vec![b, e],
            Atom::PowPow(b, m, t) => vec![b, m, t],
        }
    }

    pub fn weight(&self) -> Integer {
        self.levels().into_iter().map(Rational::weight).sum()
    }

    /// Enumeration order between atoms: weight, then shape, then the
    /// slowest-varying fraction first (exponent before base).
    pub fn enum_cmp(&self, other: &Atom) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.depth().cmp(&other.depth()))
            .then_with(|| match (self, other) {
                (Atom::Frac(a), Atom::Frac(b)) => a.den.cmp(&b.den),
                (Atom::Pow(ab, ae), Atom::Pow(bb, be)) => ae
                    .weight()
                    .cmp(&be.weight())
                    .then_with(|| ae.den.cmp(&be.den))
                    .then_with(|| ab.den.cmp(&bb.den)),
                (Atom::PowPow(ab, am, at), Atom::PowPow(bb, bm, bt)) => at
                    .weight()
                    .cmp(&bt.weight())
                    .then_with(|| at.den.cmp(&bt.den))
                    .then_with(|| am.weight().cmp(&bm.weight()))
                    .then_with(|| am.den.cmp(&bm.den))
                    .then_with(|| ab.den.cmp(&bb.den)),
                _ => unreachable!("atoms of equal depth have equal shape"),
            })
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Frac(r) => write!(f, "{r}"),
            Atom::Pow(b, e) => write!(f, "{b}^{e}"),
            Atom::PowPow(b, m, t) => write!(f, "{b}^[{m}^{t}]"),
        }
    }
}

/// `a_1 ^ (a_2 ^ (... ^ a_n))`, never empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tower {
    atoms: Vec<Atom>,
}

impl Tower {
    pub fn new(atoms: Vec<Atom>) -> Result<Self, ExprError> {
        if atoms.is_empty() {
            return Err(ExprError::EmptyTower);
        }
        Ok(Tower { atoms })
    }

    pub fn atom(atom: Atom) -> Self {
        Tower { atoms: vec![atom] }
    }

    pub fn fraction(r: Rational) -> Self {
        Tower::atom(Atom::Frac(r))
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn weight(&self) -> Integer {
        self.atoms.iter().map(Atom::weight).sum()
    }

    /// The canonical text form.
    pub fn render(&self) -> String {
        self.to_string()
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        Parser::new(text).tower_eof()
    }

    /// Enumeration order: weight, number of atoms, the weights of
    /// `a_2..a_n` lexicographically, then atoms compared from `a_n` down to
    /// `a_1` so that `a_1` varies fastest. `Equal` only for identical towers.
    pub fn enum_cmp(&self, other: &Tower) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.atoms.len().cmp(&other.atoms.len()))
            .then_with(|| {
                let tail_a = self.atoms[1..].iter().map(Atom::weight);
                let tail_b = other.atoms[1..].iter().map(Atom::weight);
                tail_a.cmp(tail_b)
            })
            .then_with(|| {
                self.atoms
                    .iter()
                    .rev()
                    .zip(other.atoms.iter().rev())
                    .map(|(a, b)| a.enum_cmp(b))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal)
            })
    }
}

impl PartialOrd for Tower {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Tower {
    fn cmp(&self, other: &Self) -> Ordering {
        self.enum_cmp(other)
    }
}

impl fmt::Display for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (first, rest) = self.atoms.split_first().expect("tower is nonempty");
        write!(f, "{first}")?;
        for atom in rest {
            write!(f, "^{{{atom}")?;
        }
        for _ in rest {
            f.write_str("}")?;
        }
        Ok(())
    }
}

impl FromStr for Tower {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Tower::parse(s)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExprError {
    #[error("numerator and denominator must be positive")]
    NonPositive,
    #[error("a tower needs at least one atom")]
    EmptyTower,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at byte {offset}: {kind}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("expected {0}")]
    Expected(&'static str),
    #[error("unexpected end of input, expected {0}")]
    UnexpectedEnd(&'static str),
    #[error("zero is not allowed as numerator or denominator")]
    Zero,
    #[error("leading zeros are not canonical")]
    LeadingZero,
    #[error("trailing input")]
    Trailing,
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
        }
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            offset: self.pos,
            kind,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, byte: u8, what: &'static str) -> Result<(), ParseError> {
        match self.peek() {
            Some(b) if b == byte => {
                self.pos += 1;
                Ok(())
            }
            Some(_) => Err(self.err(ParseErrorKind::Expected(what))),
            None => Err(self.err(ParseErrorKind::UnexpectedEnd(what))),
        }
    }

    fn tower_eof(&mut self) -> Result<Tower, ParseError> {
        let tower = self.tower()?;
        if self.pos != self.src.len() {
            return Err(self.err(ParseErrorKind::Trailing));
        }
        Ok(tower)
    }

    fn tower(&mut self) -> Result<Tower, ParseError> {
        let mut atoms = vec![];
        let mut open = 0;
        loop {
            atoms.push(self.atom()?);
            if self.src[self.pos..].starts_with(b"^{") {
                self.pos += 2;
                open += 1;
            } else {
                break;
            }
        }
        for _ in 0..open {
            self.expect(b'}', "'}'")?;
        }
        Ok(Tower { atoms })
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        let base = self.frac()?;
        if self.peek() != Some(b'^') {
            return Ok(Atom::Frac(base));
        }
        match self.src.get(self.pos + 1) {
            Some(b'(') => {
                self.pos += 1;
                let exp = self.frac()?;
                Ok(Atom::Pow(base, exp))
            }
            Some(b'[') => {
                self.pos += 2;
                let mid = self.frac()?;
                self.expect(b'^', "'^'")?;
                let top = self.frac()?;
                self.expect(b']', "']'")?;
                Ok(Atom::PowPow(base, mid, top))
            }
            // `^{` belongs to the enclosing tower
            Some(b'{') => Ok(Atom::Frac(base)),
            Some(_) => {
                self.pos += 1;
                Err(self.err(ParseErrorKind::Expected("'(', '[' or '{'")))
            }
            None => {
                self.pos += 1;
                Err(self.err(ParseErrorKind::UnexpectedEnd("'(', '[' or '{'")))
            }
        }
    }

    fn frac(&mut self) -> Result<Rational, ParseError> {
        self.expect(b'(', "'('")?;
        let num = self.int()?;
        self.expect(b'/', "'/'")?;
        let den = self.int()?;
        self.expect(b')', "')'")?;
        Ok(Rational { num, den })
    }

    fn int(&mut self) -> Result<Integer, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        let digits = &self.src[start..self.pos];
        match digits {
            [] => {
                if self.pos == self.src.len() {
                    Err(self.err(ParseErrorKind::UnexpectedEnd("digit")))
                } else {
                    Err(self.err(ParseErrorKind::Expected("digit")))
                }
            }
            [b'0'] => Err(ParseError {
                offset: start,
                kind: ParseErrorKind::Zero,
            }),
            [b'0', ..] => Err(ParseError {
                offset: start,
                kind: ParseErrorKind::LeadingZero,
            }),
            _ => {
                let text = std::str::from_utf8(digits).expect("ascii digits");
                Ok(text.parse().expect("validated digits"))
            }
        }
    }
}
