//! Conjugacy classes of `S_m` and the class algebra.
//!
//! Classes are labelled by integer partitions of `m`, listed in reverse
//! lexicographic order so that the full cycle comes first and the identity
//! class last. Structure constants are obtained by one pass over `S_m`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use super::perm::{factorial, next_permutation, Permutation};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidPartition("zero part".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().sum()
    }

    /// Size of the conjugacy class `m! / ∏ j^{c_j} c_j!`.
    pub fn class_size(&self) -> u64 {
        let m = self.weight();
        let mut counts: HashMap<usize, u64> = HashMap::new();
        for &x in &self.0 {
            *counts.entry(x).or_default() += 1;
        }
        let denom: u64 = counts.iter().map(|(&j, &c)| (j as u64).pow(c as u32) * factorial(c as usize)).product();
        factorial(m) / denom
    }

    /// A representative whose cycles occupy consecutive points.
    pub fn representative(&self) -> Permutation {
        let mut cycles = Vec::new();
        let mut start = 0;
        for &len in &self.0 {
            cycles.push((start..start + len).collect());
            start += len;
        }
        Permutation::from_cycles(start, &cycles).expect("consecutive cycles")
    }
}

/// All partitions of `m`, reverse lexicographic.
pub fn partitions(m: usize) -> Vec<Partition> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            rec(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, m, &mut Vec::new(), &mut out);
    out
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "{}", parts.join("+"))
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split('+')
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::InvalidPartition(s.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }
}

/// Class data and structure constants of `Z[S_m]`.
///
/// `structure(l, mu, nu)` counts `τ ∈ C_mu` with `σ_l τ⁻¹ ∈ C_nu`, where
/// `σ_l` is the representative of class `l`.
#[derive(Debug)]
pub struct ClassAlgebra {
    m: usize,
    partitions: Vec<Partition>,
    sizes: Vec<u64>,
    reps: Vec<Permutation>,
    lookup: Vec<(u128, usize)>,
    radix: Vec<u128>,
    structure: Vec<u64>,
}

/// Largest `m` for which the structure constants are tabulated.
pub const MAX_CLASS_ALGEBRA: usize = 10;

impl ClassAlgebra {
    /// Memoized per `m`.
    pub fn get(m: usize) -> Result<Arc<ClassAlgebra>> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<ClassAlgebra>>>> = OnceLock::new();
        if m > MAX_CLASS_ALGEBRA {
            return Err(Error::Capacity { what: "class algebra", p: m, cap: MAX_CLASS_ALGEBRA });
        }
        let cache = CACHE.get_or_init(Default::default);
        if let Some(hit) = cache.lock().expect("cache lock").get(&m) {
            return Ok(hit.clone());
        }
        // Built outside the lock; a racing duplicate is harmless.
        let built = Arc::new(Self::build(m));
        Ok(cache.lock().expect("cache lock").entry(m).or_insert(built).clone())
    }

    fn build(m: usize) -> Self {
        let partitions = partitions(m);
        let c = partitions.len();
        let radix: Vec<u128> = (0..=m).map(|j| ((m + 1) as u128).pow(j as u32)).collect();
        let code_of = |p: &Partition| p.parts().iter().map(|&len| radix[len - 1]).sum::<u128>();
        let mut lookup: Vec<(u128, usize)> = partitions.iter().enumerate().map(|(i, p)| (code_of(p), i)).collect();
        lookup.sort_unstable();
        let mut alg = Self {
            m,
            sizes: partitions.iter().map(Partition::class_size).collect(),
            reps: partitions.iter().map(Partition::representative).collect(),
            partitions,
            lookup,
            radix,
            structure: vec![0; c * c * c],
        };
        let reps: Vec<Vec<usize>> = alg.reps.iter().map(|r| r.as_slice().to_vec()).collect();
        let mut tau: Vec<usize> = (0..m).collect();
        let mut inv = vec![0; m];
        let mut prod = vec![0; m];
        loop {
            let mu = alg.class_of_slice(&tau);
            for (i, &t) in tau.iter().enumerate() {
                inv[t] = i;
            }
            for (l, rep) in reps.iter().enumerate() {
                for i in 0..m {
                    prod[i] = rep[inv[i]];
                }
                let nu = alg.class_of_slice(&prod);
                alg.structure[(l * c + mu) * c + nu] += 1;
            }
            if !next_permutation(&mut tau) {
                break;
            }
        }
        alg
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn class_count(&self) -> usize {
        self.partitions.len()
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn partition(&self, class: usize) -> &Partition {
        &self.partitions[class]
    }

    pub fn class_size(&self, class: usize) -> u64 {
        self.sizes[class]
    }

    pub fn representative(&self, class: usize) -> &Permutation {
        &self.reps[class]
    }

    pub fn identity_class(&self) -> usize {
        self.class_count() - 1
    }

    /// Number of cycles of any element of `class`.
    pub fn cycles_of_class(&self, class: usize) -> usize {
        self.partitions[class].len()
    }

    pub fn class_of(&self, perm: &Permutation) -> usize {
        self.class_of_slice(perm.as_slice())
    }

    pub fn class_of_partition(&self, partition: &Partition) -> Result<usize> {
        self.partitions
            .iter()
            .position(|p| p == partition)
            .ok_or_else(|| Error::InvalidPartition(format!("{partition} is not a partition of {}", self.m)))
    }

    /// Class index of a raw mapping of length `m`.
    #[inline]
    pub fn class_of_slice(&self, map: &[usize]) -> usize {
        debug_assert_eq!(map.len(), self.m);
        let mut seen: u64 = 0;
        let mut code: u128 = 0;
        for start in 0..map.len() {
            if seen >> start & 1 == 1 {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while seen >> x & 1 == 0 {
                seen |= 1 << x;
                x = map[x];
                len += 1;
            }
            code += self.radix[len - 1];
        }
        match self.lookup.binary_search_by(|probe| probe.0.cmp(&code)) {
            Ok(pos) => self.lookup[pos].1,
            Err(_) => unreachable!("every cycle type is a partition"),
        }
    }

    #[inline]
    pub fn structure(&self, l: usize, mu: usize, nu: usize) -> u64 {
        let c = self.class_count();
        self.structure[(l * c + mu) * c + nu]
    }

    /// Class-function convolution `(f*g)(σ) = Σ_τ f(τ) g(τ⁻¹σ)`.
    pub fn convolve<T: Scalar>(&self, f: &[T], g: &[T]) -> Vec<T> {
        let c = self.class_count();
        (0..c)
            .map(|l| {
                let mut acc = T::zero();
                for mu in 0..c {
                    let mut inner = T::zero();
                    for nu in 0..c {
                        let n = self.structure(l, mu, nu);
                        if n != 0 {
                            inner = inner + T::from_u64_lossy(n) * g[nu].clone();
                        }
                    }
                    acc = acc + f[mu].clone() * inner;
                }
                acc
            })
            .collect()
    }

    /// The class function `σ ↦ x^{#σ}`.
    pub fn power_of_cycles<T: Scalar>(&self, x: &T) -> Vec<T> {
        (0..self.class_count()).map(|l| num_traits::pow(x.clone(), self.cycles_of_class(l))).collect()
    }
}

/// A function on `S_m` constant on conjugacy classes, stored by class index.
#[derive(Debug, Clone)]
pub struct ClassFunction<T> {
    algebra: Arc<ClassAlgebra>,
    values: Vec<T>,
}

impl<T: PartialEq> PartialEq for ClassFunction<T> {
    fn eq(&self, other: &Self) -> bool {
        self.algebra.m == other.algebra.m && self.values == other.values
    }
}

impl<T: Scalar> ClassFunction<T> {
    pub fn new(algebra: Arc<ClassAlgebra>, values: Vec<T>) -> Result<Self> {
        if values.len() != algebra.class_count() {
            return Err(Error::SizeMismatch { left: values.len(), right: algebra.class_count() });
        }
        Ok(Self { algebra, values })
    }

    pub fn from_fn(algebra: Arc<ClassAlgebra>, f: impl Fn(&Partition) -> T) -> Self {
        let values = algebra.partitions().iter().map(f).collect();
        Self { algebra, values }
    }

    pub fn p(&self) -> usize {
        self.algebra.m()
    }

    pub fn algebra(&self) -> &Arc<ClassAlgebra> {
        &self.algebra
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn by_class(&self, class: usize) -> &T {
        &self.values[class]
    }

    pub fn eval(&self, perm: &Permutation) -> Result<&T> {
        if perm.size() != self.p() {
            return Err(Error::SizeMismatch { left: perm.size(), right: self.p() });
        }
        Ok(&self.values[self.algebra.class_of(perm)])
    }

    pub fn value(&self, partition: &Partition) -> Result<&T> {
        Ok(&self.values[self.algebra.class_of_partition(partition)?])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Partition, &T)> {
        self.algebra.partitions().iter().zip(self.values.iter())
    }

    pub fn convolve(&self, other: &Self) -> Result<Self> {
        if self.p() != other.p() {
            return Err(Error::SizeMismatch { left: self.p(), right: other.p() });
        }
        Ok(Self { algebra: self.algebra.clone(), values: self.algebra.convolve(&self.values, &other.values) })
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> ClassFunction<U> {
        ClassFunction { algebra: self.algebra.clone(), values: self.values.iter().map(f).collect() }
    }
}
