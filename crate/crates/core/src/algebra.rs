//! Evolution algebras over the rationals and their structure matrices.
//!
//! An algebra of dimension n is given by a natural basis e_1, ..., e_n in
//! which distinct generators multiply to zero; it is therefore determined by
//! the structure matrix whose row i holds the coefficients of e_i^2. A
//! derivation is likewise a square matrix: row i holds the coefficients of
//! the image of e_i.
//!
//! # File format
//!
//! A matrix file is a sequence of whitespace-separated tokens; everything
//! from `#` to the end of a line is a comment. The first token is the
//! dimension n, followed by n*n rational entries (`p` or `p/q`) in row-major
//! order, conventionally one row per line:
//!
//! ```text
//! 3
//! 2   1  0
//! -1  0  3
//! 0   0  3
//! ```

use crate::rational::{format_rational, parse_rational_token, Rational};
use num::Zero;
use std::fmt;
use thiserror::Error;

/// Largest supported dimension.
pub const MAX_DIMENSION: usize = 64;

/// An evolution algebra, identified with its structure matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvolutionAlgebra {
    rows: Vec<Vec<Rational>>,
}

/// A linear map candidate for a derivation, in the same basis convention:
/// row i holds the coefficients of the image of e_i.
#[derive(Clone, PartialEq, Eq)]
pub struct DerivationMatrix {
    rows: Vec<Vec<Rational>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("a structure matrix needs at least one row")]
    Empty,
    #[error("row {row} has {found} entries, expected {expected}")]
    NotSquare { row: usize, expected: usize, found: usize },
    #[error("dimension {n} exceeds the supported maximum of {MAX_DIMENSION}")]
    DimensionTooLarge { n: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("malformed header: expected a positive integer dimension, found {token:?}")]
    MalformedHeader { token: String },
    #[error("malformed rational {token:?} at row {row} entry {entry}")]
    MalformedRational { row: usize, entry: usize, token: String },
    #[error("expected {expected} matrix entries, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("dimension {n} exceeds the supported maximum of {MAX_DIMENSION}")]
    DimensionTooLarge { n: usize },
}

impl EvolutionAlgebra {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self, AlgebraError> {
        validate_square(&rows)?;
        Ok(Self { rows })
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    /// Structure constant at (i, j), zero-based.
    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// Serializes in the matrix file format accepted by [`parse_algebra`].
    pub fn serialize(&self) -> String {
        serialize_matrix(&self.rows)
    }
}

impl DerivationMatrix {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self, AlgebraError> {
        validate_square(&rows)?;
        Ok(Self { rows })
    }

    pub fn zero(n: usize) -> Self {
        Self { rows: vec![vec![Rational::zero(); n]; n] }
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.iter().all(Zero::is_zero))
    }

    pub fn serialize(&self) -> String {
        serialize_matrix(&self.rows)
    }
}

impl fmt::Debug for DerivationMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(format_rational).collect())
            .collect();
        write!(f, "{rows:?}")
    }
}

fn validate_square(rows: &[Vec<Rational>]) -> Result<(), AlgebraError> {
    let n = rows.len();
    if n == 0 {
        return Err(AlgebraError::Empty);
    }
    if n > MAX_DIMENSION {
        return Err(AlgebraError::DimensionTooLarge { n });
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(AlgebraError::NotSquare { row: i + 1, expected: n, found: row.len() });
        }
    }
    Ok(())
}

/// Parses a structure matrix file into an algebra.
pub fn parse_algebra(input: &str) -> Result<EvolutionAlgebra, ParseError> {
    Ok(EvolutionAlgebra { rows: parse_matrix(input)? })
}

/// Parses a matrix file as a derivation candidate (same format, no algebra
/// semantics attached to the rows).
pub fn parse_derivation(input: &str) -> Result<DerivationMatrix, ParseError> {
    Ok(DerivationMatrix { rows: parse_matrix(input)? })
}

fn parse_matrix(input: &str) -> Result<Vec<Vec<Rational>>, ParseError> {
    let mut tokens = input
        .lines()
        .map(|line| line.split('#').next().unwrap_or(""))
        .flat_map(|line| line.split_whitespace())
        .map(str::to_owned)
        .collect::<Vec<_>>()
        .into_iter();

    let header = tokens
        .next()
        .ok_or(ParseError::MalformedHeader { token: String::new() })?;
    let n: usize = header
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or(ParseError::MalformedHeader { token: header.clone() })?;
    if n > MAX_DIMENSION {
        return Err(ParseError::DimensionTooLarge { n });
    }

    let mut entries = Vec::with_capacity(n * n);
    for (index, token) in tokens.by_ref().take(n * n).enumerate() {
        match parse_rational_token(&token) {
            Some(value) => entries.push(value),
            None => {
                return Err(ParseError::MalformedRational {
                    row: index / n + 1,
                    entry: index % n + 1,
                    token,
                })
            }
        }
    }
    let extra = tokens.count();
    if entries.len() < n * n || extra > 0 {
        return Err(ParseError::ShapeMismatch { expected: n * n, found: entries.len() + extra });
    }

    let mut rows = Vec::with_capacity(n);
    for chunk in entries.chunks(n) {
        rows.push(chunk.to_vec());
    }
    Ok(rows)
}

fn serialize_matrix(rows: &[Vec<Rational>]) -> String {
    let mut out = String::new();
    out.push_str(&rows.len().to_string());
    out.push('\n');
    for row in rows {
        let line: Vec<String> = row.iter().map(format_rational).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;

    #[test]
    fn parses_the_documented_example() {
        let a = parse_algebra("3\n2 1 0\n-1 0 3\n0 0 3\n").unwrap();
        assert_eq!(a.dimension(), 3);
        assert_eq!(a.entry(0, 0), &rat(2, 1));
        assert_eq!(a.entry(1, 0), &rat(-1, 1));
        assert_eq!(a.entry(2, 2), &rat(3, 1));
    }

    #[test]
    fn comments_and_layout_are_ignored() {
        let a = parse_algebra("# structure matrix\n2 # dimension\n1 1/2\n0 4 # trailing\n").unwrap();
        assert_eq!(a.entry(0, 1), &rat(1, 2));
        let b = parse_algebra("2 1 1/2 0 4").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn malformed_rational_reports_row_and_entry() {
        let err = parse_algebra("2\n1 1/2\n0 x\n").unwrap_err();
        assert_eq!(
            err,
            ParseError::MalformedRational { row: 2, entry: 2, token: "x".into() }
        );
    }

    #[test]
    fn malformed_header_is_rejected() {
        assert!(matches!(parse_algebra(""), Err(ParseError::MalformedHeader { .. })));
        assert!(matches!(parse_algebra("zero"), Err(ParseError::MalformedHeader { .. })));
        assert!(matches!(parse_algebra("0\n"), Err(ParseError::MalformedHeader { .. })));
        assert!(matches!(parse_algebra("-1\n"), Err(ParseError::MalformedHeader { .. })));
    }

    #[test]
    fn shape_mismatch_counts_entries() {
        assert_eq!(
            parse_algebra("2\n1 2 3").unwrap_err(),
            ParseError::ShapeMismatch { expected: 4, found: 3 }
        );
        assert_eq!(
            parse_algebra("2\n1 2 3 4 5").unwrap_err(),
            ParseError::ShapeMismatch { expected: 4, found: 5 }
        );
    }

    #[test]
    fn dimension_cap_is_enforced() {
        assert_eq!(parse_algebra("65\n").unwrap_err(), ParseError::DimensionTooLarge { n: 65 });
        let rows = vec![vec![rat(1, 1); 65]; 65];
        assert_eq!(
            EvolutionAlgebra::new(rows).unwrap_err(),
            AlgebraError::DimensionTooLarge { n: 65 }
        );
    }

    #[test]
    fn serialization_uses_canonical_tokens() {
        let a = EvolutionAlgebra::new(vec![
            vec![rat(3, 2), rat(2, 1)],
            vec![rat(-1, 4), rat(0, 1)],
        ])
        .unwrap();
        assert_eq!(a.serialize(), "2\n3/2 2\n-1/4 0\n");
    }

    fn small_matrices() -> impl Strategy<Value = Vec<Vec<Rational>>> {
        (1usize..=5).prop_flat_map(|n| {
            proptest::collection::vec(
                proptest::collection::vec((-99i64..=99, 1i64..=12).prop_map(|(p, q)| rat(p, q)), n),
                n,
            )
        })
    }

    proptest! {
        #[test]
        fn parse_serialize_round_trip(rows in small_matrices()) {
            let a = EvolutionAlgebra::new(rows).unwrap();
            let text = a.serialize();
            let b = parse_algebra(&text).unwrap();
            prop_assert_eq!(&a, &b);
            prop_assert_eq!(b.serialize(), text);
        }
    }
}
