use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    fn letter(self) -> char {
        match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Product of single-site Pauli operators, e.g. `"X0 X1"` or `"Z3"`.
///
/// Basis states are bit strings with bit `i` set when site `i` is up
/// (`σ_z = +1`). The empty string is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PauliString {
    factors: Vec<(usize, Pauli)>,
}

impl PauliString {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn new<I: IntoIterator<Item = (usize, Pauli)>>(factors: I) -> Result<Self> {
        let mut factors: Vec<_> = factors.into_iter().collect();
        factors.sort_unstable();
        if factors.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidParameter("Pauli string repeats a site".into()));
        }
        Ok(Self { factors })
    }

    pub fn single(site: usize, p: Pauli) -> Self {
        Self { factors: vec![(site, p)] }
    }

    pub fn pair(i: usize, a: Pauli, j: usize, b: Pauli) -> Result<Self> {
        Self::new([(i, a), (j, b)])
    }

    pub fn factors(&self) -> &[(usize, Pauli)] {
        &self.factors
    }

    pub fn max_site(&self) -> Option<usize> {
        self.factors.last().map(|f| f.0)
    }

    /// `P|s⟩ = c|s'⟩`; returns `(s', c)`.
    pub fn apply(&self, state: u32) -> (u32, Complex64) {
        let mut out = state;
        let mut coeff = Complex64::new(1.0, 0.0);
        for &(site, p) in &self.factors {
            let up = state >> site & 1 == 1;
            match p {
                Pauli::X => out ^= 1 << site,
                Pauli::Y => {
                    out ^= 1 << site;
                    // Y|↑⟩ = i|↓⟩, Y|↓⟩ = −i|↑⟩
                    coeff *= if up { Complex64::i() } else { -Complex64::i() };
                }
                Pauli::Z => {
                    if !up {
                        coeff = -coeff;
                    }
                }
            }
        }
        (out, coeff)
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut factors = Vec::new();
        for token in s.split_whitespace() {
            let mut chars = token.chars();
            let p = match chars.next().map(|c| c.to_ascii_uppercase()) {
                Some('X') => Pauli::X,
                Some('Y') => Pauli::Y,
                Some('Z') => Pauli::Z,
                Some('I') if chars.as_str().is_empty() => continue,
                _ => return Err(Error::InvalidParameter(format!("bad Pauli factor {token:?}"))),
            };
            let site = chars.as_str().parse().map_err(|_| Error::InvalidParameter(format!("bad site in {token:?}")))?;
            factors.push((site, p));
        }
        Self::new(factors)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("I");
        }
        for (k, (site, p)) in self.factors.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}{}", p.letter(), site)?;
        }
        Ok(())
    }
}
