use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// An integer partition labelling an irrep of the symmetric group.
///
/// Parts are stored weakly decreasing with no zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return invalid("partition must have at least one part");
        }
        if parts.contains(&0) {
            return invalid(format!("partition {parts:?} has a zero part"));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return invalid(format!("partition {parts:?} is not weakly decreasing"));
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of boxes.
    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn rows(&self) -> usize {
        self.parts.len()
    }

    /// At most two rows: the only shapes whose Weyl module is nonzero for qubits.
    pub fn is_qubit_allowed(&self) -> bool {
        self.parts.len() <= 2
    }

    pub fn is_trivial(&self) -> bool {
        self.parts.len() == 1
    }

    /// Irrep dimension from the hook-length formula.
    pub fn dimension(&self) -> usize {
        let n = self.n();
        let mut hooks: Vec<u128> = Vec::with_capacity(n);
        for (row, &len) in self.parts.iter().enumerate() {
            for col in 0..len {
                let arm = len - col - 1;
                let leg = self.parts[row + 1..].iter().filter(|&&p| p > col).count();
                hooks.push((arm + leg + 1) as u128);
            }
        }
        // interleave multiplication and division to stay inside u128 for n ≤ 30
        let mut numer: Vec<u128> = (1..=n as u128).collect();
        for h in hooks.iter_mut() {
            for x in numer.iter_mut() {
                let g = gcd(*x, *h);
                *x /= g;
                *h /= g;
                if *h == 1 {
                    break;
                }
            }
            debug_assert_eq!(*h, 1);
        }
        numer.iter().product::<u128>() as usize
    }

    /// Dimension of the U(2) multiplicity space, `λ₁ − λ₂ + 1`; zero for
    /// shapes with more than two rows.
    pub fn qubit_multiplicity(&self) -> usize {
        match self.parts.as_slice() {
            [a] => a + 1,
            [a, b] => a - b + 1,
            _ => 0,
        }
    }

    /// Rows from which a box can be removed, leaving a partition.
    pub(crate) fn removable_rows(&self) -> Vec<usize> {
        (0..self.parts.len())
            .filter(|&r| r + 1 == self.parts.len() || self.parts[r] > self.parts[r + 1])
            .collect()
    }

    /// Shape with one box removed from `row`; `None` if that empties the shape.
    pub(crate) fn without_box(&self, row: usize) -> Option<Partition> {
        let mut parts = self.parts.clone();
        parts[row] -= 1;
        if parts[row] == 0 {
            parts.pop();
        }
        if parts.is_empty() {
            None
        } else {
            Some(Partition { parts })
        }
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", body.join(","))
    }
}

/// Parses `"3,1"`, `"(3,1)"` or `"3 1"`.
impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = trimmed
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::InvalidArgument(format!("bad partition part {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// All partitions of `n` with at most two rows, ordered by decreasing first part.
pub fn qubit_partitions(n: usize) -> Result<Vec<Partition>> {
    if n < 2 {
        return invalid(format!("need n >= 2, got {n}"));
    }
    Ok((0..=n / 2)
        .map(|second| {
            let parts = if second == 0 {
                vec![n]
            } else {
                vec![n - second, second]
            };
            Partition { parts }
        })
        .collect())
}
