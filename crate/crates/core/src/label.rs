//! Outcome labels and product labels.
//!
//! Outcomes are strings. A pair `(x, y)` of outcomes from a sequential
//! measurement is written `x⊗y`. When a component is itself a product it is
//! parenthesized, so `((a, b), c)` becomes `(a⊗b)⊗c` and parsing stays
//! unambiguous. Plain labels therefore may not contain `⊗`, `(` or `)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub const PRODUCT_SEPARATOR: char = '⊗';

/// Checks that `label` is a nonempty atomic label or a well-formed product label.
pub fn validate_label(label: &str) -> Result<()> {
    if label.is_empty() {
        return Err(Error::InvalidLabel(label.to_string()));
    }
    if label.contains([PRODUCT_SEPARATOR, '(', ')']) {
        label.parse::<ProductLabel>().map(|_| ())
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProductLabel {
    pub first: String,
    pub second: String,
}

impl ProductLabel {
    pub fn new(first: impl Into<String>, second: impl Into<String>) -> Self {
        Self {
            first: first.into(),
            second: second.into(),
        }
    }
}

fn write_component(f: &mut fmt::Formatter<'_>, s: &str) -> fmt::Result {
    if s.contains(PRODUCT_SEPARATOR) {
        write!(f, "({s})")
    } else {
        f.write_str(s)
    }
}

impl fmt::Display for ProductLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_component(f, &self.first)?;
        write!(f, "{PRODUCT_SEPARATOR}")?;
        write_component(f, &self.second)
    }
}

fn parse_component(s: &str) -> Result<String> {
    if s.is_empty() {
        return Err(Error::InvalidLabel(s.to_string()));
    }
    if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        inner.parse::<ProductLabel>()?;
        return Ok(inner.to_string());
    }
    if s.contains([PRODUCT_SEPARATOR, '(', ')']) {
        return Err(Error::InvalidLabel(s.to_string()));
    }
    Ok(s.to_string())
}

impl FromStr for ProductLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut depth = 0i32;
        let mut split = None;
        for (i, ch) in s.char_indices() {
            match ch {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth < 0 {
                        return Err(Error::InvalidLabel(s.to_string()));
                    }
                }
                PRODUCT_SEPARATOR if depth == 0 => {
                    if split.is_some() {
                        return Err(Error::InvalidLabel(s.to_string()));
                    }
                    split = Some(i);
                }
                _ => {}
            }
        }
        let i = match split {
            Some(i) if depth == 0 => i,
            _ => return Err(Error::InvalidLabel(s.to_string())),
        };
        let first = parse_component(&s[..i])?;
        let second = parse_component(&s[i + PRODUCT_SEPARATOR.len_utf8()..])?;
        Ok(Self { first, second })
    }
}
