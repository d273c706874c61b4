//! Dimension-free count tables behind the moment sums.
//!
//! Every moment formula here is a weighted count over one permutation
//! index. The weights depend on `(n, k)` only through a few cycle counts and
//! a conjugacy class, so the counts are tabulated once per `p` and reused
//! for every dimension.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::Result;
use crate::symgroup::perm::next_permutation;
use crate::symgroup::{delta, f_hat, gamma, gamma_tb, ChoiceFunction, ClassAlgebra};

/// `count` permutations share cycle counts `a`, `b` and class `class`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenusEntry {
    pub a: usize,
    pub b: usize,
    pub class: usize,
    pub count: u64,
}

/// One row per distinct `(#α, class(αδ), (#(α f̂⁻¹))_f)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChoiceEntry {
    pub a: usize,
    pub class: usize,
    pub cycles_per_choice: Vec<usize>,
    pub count: u64,
}

fn cycle_count(map: &[usize]) -> usize {
    crate::symgroup::perm::cycle_count_slice(map)
}

fn memo<V: Send + Sync + 'static>(
    cache: &'static OnceLock<Mutex<HashMap<usize, Arc<V>>>>,
    p: usize,
    build: impl FnOnce() -> Result<V>,
) -> Result<Arc<V>> {
    let cache = cache.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("cache lock").get(&p) {
        return Ok(hit.clone());
    }
    let built = Arc::new(build()?);
    Ok(cache.lock().expect("cache lock").entry(p).or_insert(built).clone())
}

fn collect(map: HashMap<(usize, usize, usize), u64>) -> Vec<GenusEntry> {
    let mut out: Vec<GenusEntry> =
        map.into_iter().map(|((a, b, class), count)| GenusEntry { a, b, class, count }).collect();
    out.sort_unstable_by_key(|e| (e.a, e.b, e.class));
    out
}

/// Over `α ∈ S_p`: `(#α, #(γ⁻¹α), class(α))`.
pub fn single_table(p: usize) -> Result<Arc<Vec<GenusEntry>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<GenusEntry>>>>> = OnceLock::new();
    memo(&CACHE, p, || {
        let alg = ClassAlgebra::get(p)?;
        let g_inv = gamma(p).inverse();
        let g_inv = g_inv.as_slice();
        let mut counts = HashMap::new();
        let mut alpha: Vec<usize> = (0..p).collect();
        let mut prod = vec![0; p];
        loop {
            for i in 0..p {
                prod[i] = g_inv[alpha[i]];
            }
            let key = (cycle_count(&alpha), cycle_count(&prod), alg.class_of_slice(&alpha));
            *counts.entry(key).or_insert(0u64) += 1;
            if !next_permutation(&mut alpha) {
                break;
            }
        }
        Ok(collect(counts))
    })
}

/// Over `α ∈ S_{2p}`: `(#α, #(α(γᵀ⊕γᴮ)⁻¹), class(αδ))`, classes of `S_{2p}`.
pub fn conjugate_table(p: usize) -> Result<Arc<Vec<GenusEntry>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<GenusEntry>>>>> = OnceLock::new();
    memo(&CACHE, p, || {
        let m = 2 * p;
        let alg = ClassAlgebra::get(m)?;
        let g_inv = gamma_tb(p).inverse();
        let (g_inv, d) = (g_inv.as_slice(), delta(p));
        let d = d.as_slice();
        let mut counts = HashMap::new();
        let mut alpha: Vec<usize> = (0..m).collect();
        let (mut ag, mut ad) = (vec![0; m], vec![0; m]);
        loop {
            for i in 0..m {
                ag[i] = alpha[g_inv[i]];
                ad[i] = alpha[d[i]];
            }
            let key = (cycle_count(&alpha), cycle_count(&ag), alg.class_of_slice(&ad));
            *counts.entry(key).or_insert(0u64) += 1;
            if !next_permutation(&mut alpha) {
                break;
            }
        }
        Ok(collect(counts))
    })
}

/// Over `α ∈ S_{2p}`: `#α`, `class(αδ)` and `#(α f̂⁻¹)` for every choice
/// function `f` in bitmask order.
pub fn choice_table(p: usize) -> Result<Arc<Vec<ChoiceEntry>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<ChoiceEntry>>>>> = OnceLock::new();
    memo(&CACHE, p, || {
        let m = 2 * p;
        let alg = ClassAlgebra::get(m)?;
        let f_inv: Vec<Vec<usize>> =
            ChoiceFunction::all(p).map(|f| f_hat(&f).inverse().as_slice().to_vec()).collect();
        let d = delta(p);
        let d = d.as_slice();
        let mut counts: HashMap<(usize, usize, Vec<usize>), u64> = HashMap::new();
        let mut alpha: Vec<usize> = (0..m).collect();
        let (mut af, mut ad) = (vec![0; m], vec![0; m]);
        let mut per = vec![0; f_inv.len()];
        loop {
            for i in 0..m {
                ad[i] = alpha[d[i]];
            }
            for (slot, finv) in per.iter_mut().zip(&f_inv) {
                for i in 0..m {
                    af[i] = alpha[finv[i]];
                }
                *slot = cycle_count(&af);
            }
            let key = (cycle_count(&alpha), alg.class_of_slice(&ad), per.clone());
            *counts.entry(key).or_insert(0) += 1;
            if !next_permutation(&mut alpha) {
                break;
            }
        }
        let mut out: Vec<ChoiceEntry> = counts
            .into_iter()
            .map(|((a, class, cycles_per_choice), count)| ChoiceEntry { a, class, cycles_per_choice, count })
            .collect();
        out.sort_unstable_by(|x, y| (x.a, x.class, &x.cycles_per_choice).cmp(&(y.a, y.class, &y.cycles_per_choice)));
        Ok(out)
    })
}
