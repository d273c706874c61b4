use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of `{0, .., m-1}`.
///
/// Products follow a single convention throughout the crate:
/// `a.compose(&b)` is the map `i -> a(b(i))`, so a written product `ab` acts
/// with `b` first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn identity(m: usize) -> Self {
        Self { map: (0..m).collect() }
    }

    pub fn from_vec(map: Vec<usize>) -> Result<Self> {
        let m = map.len();
        let mut seen = vec![false; m];
        for &x in &map {
            if x >= m || seen[x] {
                return Err(Error::InvalidPermutation(format!("{map:?} is not a bijection")));
            }
            seen[x] = true;
        }
        Ok(Self { map })
    }

    /// Builds a permutation of size `m` from 0-based cycles; unlisted points are fixed.
    pub fn from_cycles(m: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut map: Vec<usize> = (0..m).collect();
        let mut used = vec![false; m];
        for cycle in cycles {
            for (idx, &x) in cycle.iter().enumerate() {
                if x >= m || used[x] {
                    return Err(Error::InvalidPermutation(format!("bad cycle {cycle:?}")));
                }
                used[x] = true;
                map[x] = cycle[(idx + 1) % cycle.len()];
            }
        }
        Ok(Self { map })
    }

    /// Transposition of two distinct points.
    pub fn transposition(m: usize, a: usize, b: usize) -> Result<Self> {
        if a == b {
            return Err(Error::InvalidPermutation("transposition of a point with itself".into()));
        }
        Self::from_cycles(m, &[vec![a, b]])
    }

    pub fn size(&self) -> usize {
        self.map.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self ∘ other`, i.e. `i -> self(other(i))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.size() != other.size() {
            return Err(Error::SizeMismatch { left: self.size(), right: other.size() });
        }
        Ok(Self { map: other.map.iter().map(|&j| self.map[j]).collect() })
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.size()];
        for (i, &x) in self.map.iter().enumerate() {
            inv[x] = i;
        }
        Self { map: inv }
    }

    /// Cycles in canonical order: each starts at its smallest point, cycles
    /// sorted by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let m = self.size();
        let mut seen = vec![false; m];
        let mut out = Vec::new();
        for start in 0..m {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.map[x];
            }
            out.push(cycle);
        }
        out
    }

    /// `#σ`, the number of cycles (fixed points included).
    pub fn cycle_count(&self) -> usize {
        cycle_count_slice(&self.map)
    }

    /// `|σ| = m - #σ`, the minimal number of transpositions.
    pub fn length(&self) -> usize {
        self.size() - self.cycle_count()
    }

    /// Cayley distance `|σ⁻¹τ|`.
    pub fn distance(&self, other: &Self) -> Result<usize> {
        Ok(self.inverse().compose(other)?.length())
    }

    /// Cycle lengths sorted in non-increasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lens: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        lens.sort_unstable_by(|a, b| b.cmp(a));
        lens
    }

    pub fn fixed_points(&self) -> impl Iterator<Item = usize> + '_ {
        self.map.iter().enumerate().filter(|(i, &x)| *i == x).map(|(i, _)| i)
    }

    /// Direct sum: `self` on the first block, `other` shifted onto the second.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let off = self.size();
        let mut map = self.map.clone();
        map.extend(other.map.iter().map(|&x| x + off));
        Self { map }
    }

    /// Lexicographic successor in place; returns `false` after the last one.
    pub fn next_lex(&mut self) -> bool {
        next_permutation(&mut self.map)
    }
}

pub(crate) fn cycle_count_slice(map: &[usize]) -> usize {
    let mut seen = 0u64;
    let mut count = 0;
    if map.len() <= 64 {
        for start in 0..map.len() {
            if seen & (1 << start) != 0 {
                continue;
            }
            count += 1;
            let mut x = start;
            while seen & (1 << x) == 0 {
                seen |= 1 << x;
                x = map[x];
            }
        }
        return count;
    }
    let mut seen = vec![false; map.len()];
    for start in 0..map.len() {
        if seen[start] {
            continue;
        }
        count += 1;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = map[x];
        }
    }
    count
}

pub(crate) fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Streams all of `S_m` in lexicographic order without materializing it.
#[derive(Debug, Clone)]
pub struct SymmetricGroup {
    current: Option<Vec<usize>>,
}

impl SymmetricGroup {
    pub fn new(m: usize) -> Self {
        Self { current: Some((0..m).collect()) }
    }
}

impl Iterator for SymmetricGroup {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let cur = self.current.take()?;
        let mut succ = cur.clone();
        if next_permutation(&mut succ) {
            self.current = Some(succ);
        }
        Some(Permutation { map: cur })
    }
}

pub fn factorial(m: usize) -> u64 {
    (1..=m as u64).product()
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

/// 1-based cycle notation; fixed points are omitted and the identity prints
/// as `()`. Each cycle starts at its smallest element.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for cycle in self.cycles().into_iter().filter(|c| c.len() > 1) {
            any = true;
            write!(f, "(")?;
            for (i, x) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", x + 1)?;
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// Parses 1-based cycle notation such as `"(3 2 1)(6 5 4)"`.
///
/// The permutation size is the largest point mentioned; use
/// [`Permutation::parse_cycles`] to fix it explicitly.
impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let cycles = parse_cycle_list(s)?;
        let m = cycles.iter().flatten().map(|&x| x + 1).max().unwrap_or(0);
        Self::from_cycles(m, &cycles)
    }
}

impl Permutation {
    pub fn parse_cycles(s: &str, m: usize) -> Result<Self> {
        let cycles = parse_cycle_list(s)?;
        Self::from_cycles(m, &cycles)
    }
}

fn parse_cycle_list(s: &str) -> Result<Vec<Vec<usize>>> {
    let bad = || Error::InvalidPermutation(format!("cannot parse cycle notation {s:?}"));
    let mut cycles = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let body = rest.strip_prefix('(').ok_or_else(bad)?;
        let close = body.find(')').ok_or_else(bad)?;
        let cycle = body[..close]
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| match t.parse::<usize>() {
                Ok(v) if v >= 1 => Ok(v - 1),
                _ => Err(bad()),
            })
            .collect::<Result<Vec<_>>>()?;
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
        rest = body[close + 1..].trim_start();
    }
    Ok(cycles)
}
