use super::{FTable, Instance, LegalPair};
use crate::dataset::ColoredStochasticDataset;
use crate::error::Result;
use crate::number::{Scalar, ZeroAwareProduct};

/// `Γ` by evaluating the signature recurrence pair by pair.
pub fn gamma_dp<T: Scalar>(ds: &ColoredStochasticDataset) -> Result<T> {
    Ok(gamma_dp_table(ds)?.0)
}

/// `Γ` together with the full `F` table.
///
/// `F(i,j) = π*_{i,j} Σ F(i',j') Π_{i,j,i',j'}` over legal `(i',j')` with
/// `i' < j`, `y_{j'} > y_i` and a color different from `a_i`'s, where `Π` is
/// the probability that every point of `(i', i]` is absent except those of
/// `a_i`'s color with y in `[y_j, y_{j'}]`. Each `Π` is an `O(1)` quotient of
/// prefix products, so the total cost is `O(L^2)` for `L` legal pairs.
pub fn gamma_dp_table<T: Scalar>(ds: &ColoredStochasticDataset) -> Result<(T, FTable<T>)> {
    let inst = Instance::<T>::new(ds)?;
    let n = inst.n;
    let pairs = inst.legal_pairs();

    // prefix[t] = ∏_{s=1}^{t} (1 − π_s)
    let mut prefix = vec![ZeroAwareProduct::one()];
    for t in 1..=n {
        let mut p = prefix[t - 1].clone();
        p.mul_factor(&inst.absent[t]);
        prefix.push(p);
    }

    // positions[k]: indices of color k in increasing order; rank_in_color[t]
    // counts color(t) points among 1..=t.
    // by_color[k][c][y] = ∏ (1 − π) over the first c points of color k with y-rank ≤ y.
    let mut rank_in_color = vec![0usize; n + 1];
    let mut positions: Vec<Vec<usize>> = vec![Vec::new(); inst.colors];
    let mut by_color: Vec<Vec<Vec<ZeroAwareProduct<T>>>> =
        vec![vec![vec![ZeroAwareProduct::one(); n + 2]]; inst.colors];
    for t in 1..=n {
        let table = &mut by_color[inst.color[t]];
        let mut row = table.last().unwrap().clone();
        for cell in row.iter_mut().skip(inst.y[t] as usize) {
            cell.mul_factor(&inst.absent[t]);
        }
        table.push(row);
        rank_in_color[t] = table.len() - 1;
        positions[inst.color[t]].push(t);
    }

    // pairs_before[t] = number of legal pairs with i < t.
    let mut pairs_before = vec![0usize; n + 2];
    for p in &pairs {
        pairs_before[p.i + 1] += 1;
    }
    for t in 1..=n + 1 {
        pairs_before[t] += pairs_before[t - 1];
    }

    let mut f: Vec<T> = Vec::with_capacity(pairs.len());
    f.push(T::one());
    for p in &pairs[1..] {
        let (i, j) = (p.i, p.j);
        let k = inst.color[i];
        let table = &by_color[k];
        let ci = rank_in_color[i];
        let mut sum = T::zero();
        for (q, fq) in pairs[..pairs_before[j]].iter().zip(&f) {
            if inst.y[q.j] <= inst.y[i] || inst.color[q.i] == k || fq.is_zero() {
                continue;
            }
            // Color-k points of (i', i] with y in [y_j, y_{j'}] are excluded from Π.
            let ci2 = positions[k].partition_point(|&s| s <= q.i);
            let (hi, lo) = (inst.y[q.j] as usize, inst.y[j] as usize - 1);
            let num = [&prefix[i], &table[ci][lo], &table[ci2][hi]];
            let den = [&prefix[q.i], &table[ci][hi], &table[ci2][lo]];
            sum += &fq.times(&quotient(&num, &den));
        }
        f.push(inst.anchor(*p).times(&sum));
    }

    // Γ = ∏(1 − π) + Σ F(i,j) ∏_{t>i} (1 − π_t)
    let total = &prefix[n];
    let mut gamma = total.value();
    for (p, fp) in pairs.iter().zip(&f).skip(1) {
        gamma += &fp.times(&quotient(&[total], &[&prefix[p.i]]));
    }
    let entries: Vec<(LegalPair, T)> = pairs.into_iter().zip(f).collect();
    Ok((gamma, FTable::from_unsorted(entries)))
}

/// Value of `∏ num / ∏ den` for zero-aware products whose quotient is a
/// genuine sub-product.
fn quotient<T: Scalar>(num: &[&ZeroAwareProduct<T>], den: &[&ZeroAwareProduct<T>]) -> T {
    let zeros: i64 = num.iter().map(|p| p.zero_count() as i64).sum::<i64>()
        - den.iter().map(|p| p.zero_count() as i64).sum::<i64>();
    debug_assert!(zeros >= 0, "quotient is not a sub-product");
    if zeros > 0 {
        return T::zero();
    }
    let mut v = num[0].nonzero_part().clone();
    for p in &num[1..] {
        v *= p.nonzero_part();
    }
    for p in den {
        v /= p.nonzero_part();
    }
    v
}
