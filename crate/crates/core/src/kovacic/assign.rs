//! E-sets and the enumeration of exponent assignments for case II.

use std::collections::BTreeMap;

use crate::nve::SingularityProfile;

/// E-set shared by all roots of one factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorESet {
    pub roots: usize,
    pub values: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ESets {
    pub finite: Vec<FactorESet>,
    pub infinity: Vec<i64>,
}

pub fn build_esets(p: &SingularityProfile) -> ESets {
    ESets {
        finite: p
            .finite
            .iter()
            .map(|pt| FactorESet {
                roots: pt.roots(),
                values: pt.eset.clone(),
            })
            .collect(),
        infinity: p.infinity.as_ref().map_or_else(|| vec![0, 2, 4], |i| i.eset.clone()),
    }
}

/// One `e` per finite root (grouped by factor, roots in isolation order)
/// and `e_∞`, with `d = ½(e_∞ − Σ e_j)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    pub d: u64,
    pub e: Vec<Vec<i64>>,
    pub e_inf: i64,
}

impl Assignment {
    /// Every root of every factor carries the same `e`, so `θ` is rational.
    pub fn is_uniform(&self) -> bool {
        self.e.iter().all(|g| g.windows(2).all(|w| w[0] == w[1]))
    }

    /// The per-factor multisets, as sorted vectors.
    pub fn multiset_type(&self) -> (Vec<Vec<i64>>, i64) {
        let sorted = self
            .e
            .iter()
            .map(|g| {
                let mut g = g.clone();
                g.sort_unstable();
                g
            })
            .collect();
        (sorted, self.e_inf)
    }

    pub fn tuple_string(&self) -> String {
        let fin: Vec<String> = self
            .e
            .iter()
            .map(|g| g.iter().map(i64::to_string).collect::<Vec<_>>().join(","))
            .collect();
        format!("({}; inf={})", fin.join(" | "), self.e_inf)
    }
}

/// Multisets of size `k` over `values`, as count vectors with their sums.
fn multisets(values: &[i64], k: usize) -> Vec<(Vec<usize>, i64)> {
    fn rec(values: &[i64], k: usize, acc: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, i64)>) {
        if acc.len() + 1 == values.len() {
            acc.push(k);
            let sum = acc.iter().zip(values).map(|(&c, &v)| c as i64 * v).sum();
            out.push((acc.clone(), sum));
            acc.pop();
            return;
        }
        for c in 0..=k {
            acc.push(c);
            rec(values, k - c, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if values.is_empty() {
        if k == 0 {
            out.push((Vec::new(), 0));
        }
        return out;
    }
    rec(values, k, &mut Vec::new(), &mut out);
    out
}

/// All distinct orderings of a multiset given by counts.
fn arrangements(values: &[i64], counts: &[usize]) -> Vec<Vec<i64>> {
    fn rec(values: &[i64], counts: &mut [usize], left: usize, acc: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if left == 0 {
            out.push(acc.clone());
            return;
        }
        for i in 0..values.len() {
            if counts[i] > 0 {
                counts[i] -= 1;
                acc.push(values[i]);
                rec(values, counts, left - 1, acc, out);
                acc.pop();
                counts[i] += 1;
            }
        }
    }
    let mut out = Vec::new();
    let mut c = counts.to_vec();
    let n = c.iter().sum();
    rec(values, &mut c, n, &mut Vec::new(), &mut out);
    out
}

/// Every ordered assignment with `d ∈ N₀` and not all of `e_j, e_∞` even,
/// sorted by `(d, e, e_∞)`.
pub fn enumerate_assignments(sets: &ESets) -> Vec<Assignment> {
    let per_factor: Vec<Vec<(Vec<usize>, i64)>> = sets
        .finite
        .iter()
        .map(|f| multisets(&f.values, f.roots))
        .collect();
    let mut out = Vec::new();
    // walk the product of per-factor multisets
    let mut idx = vec![0usize; per_factor.len()];
    if per_factor.iter().any(Vec::is_empty) {
        return out;
    }
    loop {
        let sum: i64 = idx.iter().zip(&per_factor).map(|(&i, f)| f[i].1).sum();
        let odd_finite = idx.iter().zip(&per_factor).zip(&sets.finite).any(|((&i, f), fs)| {
            f[i].0.iter().zip(&fs.values).any(|(&c, &v)| c > 0 && v % 2 != 0)
        });
        for &e_inf in &sets.infinity {
            let twice_d = e_inf - sum;
            if twice_d < 0 || twice_d % 2 != 0 || !(odd_finite || e_inf % 2 != 0) {
                continue;
            }
            let mut tuples: Vec<Vec<Vec<i64>>> = vec![Vec::new()];
            for ((&i, f), fs) in idx.iter().zip(&per_factor).zip(&sets.finite) {
                let arr = arrangements(&fs.values, &f[i].0);
                tuples = tuples
                    .into_iter()
                    .flat_map(|t| {
                        arr.iter().map(move |a| {
                            let mut t = t.clone();
                            t.push(a.clone());
                            t
                        })
                    })
                    .collect();
            }
            out.extend(tuples.into_iter().map(|e| Assignment {
                d: (twice_d / 2) as u64,
                e,
                e_inf,
            }));
        }
        // next index
        let mut k = 0;
        loop {
            if k == idx.len() {
                out.sort();
                return out;
            }
            idx[k] += 1;
            if idx[k] < per_factor[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Ordered and multiset-type counts per `d`.
pub fn count_by_degree(assignments: &[Assignment]) -> BTreeMap<u64, (usize, usize)> {
    let mut out: BTreeMap<u64, (usize, std::collections::BTreeSet<_>)> = BTreeMap::new();
    for a in assignments {
        let entry = out.entry(a.d).or_default();
        entry.0 += 1;
        entry.1.insert(a.multiset_type());
    }
    out.into_iter().map(|(d, (n, types))| (d, (n, types.len()))).collect()
}
