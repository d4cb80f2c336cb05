//! Igusa–Clebsch invariants, Humbert-surface membership and CM-list matching.

pub mod fixed;
pub mod humbert;
pub mod igusa;

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use humbert::{humbert_membership, CoordinateSystem, HumbertEquation, Membership, MembershipReport, Monomial};
pub use igusa::{absolute_invariants, igusa_clebsch, weighted_equal, IgusaInvariants, CONVENTION_ID};

use crate::error::parse_err;
use crate::numfield::is_fundamental_discriminant;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RmOrder {
    /// Index of the order in the maximal order of `Q(√d)` (`d = 1`: the `(n,n)`-split case).
    pub index: u64,
    pub discriminant: u64,
    pub decomposable: bool,
    /// Indices `n` whose surfaces `H_{n²d}` were consulted, in order.
    pub checked: Vec<u64>,
}

/// Least `n` (from 1, or from 2 when `d = 1`) with `H_{n²d}` membership; stops at the
/// first `n²d` missing from the map.
pub fn rm_order_from_membership(memberships: &BTreeMap<u64, bool>, d: u64) -> Result<Option<RmOrder>> {
    if d != 1 && !is_fundamental_discriminant(d as i64) {
        return Err(Error::NotDiscriminant(d as i64));
    }
    let mut checked = Vec::new();
    let mut n = if d == 1 { 2 } else { 1 };
    while let Some(&on) = memberships.get(&(n * n * d)) {
        checked.push(n);
        if on {
            return Ok(Some(RmOrder { index: n, discriminant: n * n * d, decomposable: d == 1, checked }));
        }
        n += 1;
    }
    Ok(None)
}

/// `{D/n² : n > 1, n² | D, D/n² ≡ 0,1 mod 4}` in increasing `n`.
pub fn optimality_obstruction_set(d: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut n = 2u64;
    while n * n <= d {
        if d.is_multiple_of(n * n) {
            let q = d / (n * n);
            if q % 4 <= 1 {
                out.push(q);
            }
        }
        n += 1;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmRecord {
    pub invariants: IgusaInvariants,
    pub label: String,
}

/// Lines `I2 I4 I6 I10 : label`; `#` starts a comment.
pub fn parse_cm_list(text: &str) -> Result<Vec<CmRecord>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (lhs, label) = line.split_once(':').ok_or_else(|| parse_err(i + 1, "expected ':'"))?;
        let v: Vec<_> = lhs
            .split_whitespace()
            .map(|t| humbert::parse_rational(t).ok_or_else(|| parse_err(i + 1, format!("bad invariant '{}'", t))))
            .collect::<Result<_>>()?;
        if v.len() != 4 {
            return Err(parse_err(i + 1, "expected four invariants"));
        }
        let mut it = v.into_iter();
        let inv = IgusaInvariants::new(it.next().unwrap(), it.next().unwrap(), it.next().unwrap(), it.next().unwrap());
        out.push(CmRecord { invariants: inv, label: label.trim().to_string() });
    }
    Ok(out)
}

pub fn load_cm_list(path: &Path) -> Result<Vec<CmRecord>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {}", path.display(), e)))?;
    parse_cm_list(&text)
}

pub fn cm_list_match<'a>(point: &IgusaInvariants, list: &'a [CmRecord]) -> Option<&'a CmRecord> {
    list.iter().find(|r| weighted_equal(point, &r.invariants))
}
