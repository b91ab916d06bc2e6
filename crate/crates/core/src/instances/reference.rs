use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cost::optimal_center;
use crate::error::{Error, Result};
use crate::geometry::{CenterSet, Dataset, Objective};
use crate::sampling::weighted_index;

const MAX_ROUNDS: usize = 100;
const MIN_RELATIVE_GAIN: f64 = 1e-6;

/// Seeding weight of a point at cost `c` from its nearest chosen center:
/// squared distance for k-means, distance otherwise.
fn seeding_weight(objective: Objective, c: f64) -> f64 {
    match objective {
        Objective::KMeans | Objective::KMedians => c,
        Objective::KCenter => c * c,
    }
}

/// Non-explainable reference centers: k-means++ style seeding followed by
/// alternating assignment and re-centering (centroids for k-means,
/// coordinate-wise medians for k-medians) until the cost improves by less
/// than `1e-6` relative or 100 rounds pass. Empty clusters are reseeded at
/// the currently most expensive point.
pub fn solve_reference(
    data: &Dataset,
    k: usize,
    objective: Objective,
    seed: u64,
) -> Result<CenterSet> {
    let n = data.len();
    if k == 0 || n < k {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= k <= n, got k={k} n={n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut centers: Vec<Vec<f64>> = vec![data.get(rng.random_range(0..n)).to_vec()];
    let mut best: Vec<f64> = data
        .iter()
        .map(|x| objective.point_cost(x, &centers[0]))
        .collect();
    while centers.len() < k {
        let weights: Vec<f64> = best.iter().map(|&c| seeding_weight(objective, c)).collect();
        let Some(i) = weighted_index(&mut rng, &weights) else {
            return Err(Error::InvalidArgument(format!(
                "data has fewer than {k} distinct points"
            )));
        };
        let c = data.get(i).to_vec();
        for (b, x) in best.iter_mut().zip(data.iter()) {
            *b = b.min(objective.point_cost(x, &c));
        }
        centers.push(c);
    }

    let assign = |centers: &[Vec<f64>]| -> (Vec<usize>, Vec<f64>) {
        data.iter()
            .map(|x| {
                centers
                    .iter()
                    .enumerate()
                    .map(|(j, c)| (j, objective.point_cost(x, c)))
                    .fold(
                        (0, f64::INFINITY),
                        |b, cur| if cur.1 < b.1 { cur } else { b },
                    )
            })
            .unzip()
    };
    let total = |costs: &[f64]| -> f64 {
        match objective {
            Objective::KCenter => costs.iter().copied().fold(0.0, f64::max),
            _ => costs.iter().sum(),
        }
    };

    let (mut labels, mut costs) = assign(&centers);
    let mut cost = total(&costs);
    for _ in 0..MAX_ROUNDS {
        let mut groups = vec![Vec::new(); k];
        for (i, &l) in labels.iter().enumerate() {
            groups[l].push(i);
        }
        let mut next: Vec<Vec<f64>> = Vec::with_capacity(k);
        let mut taken = vec![false; n];
        for g in &groups {
            if g.is_empty() {
                let far = (0..n)
                    .filter(|&i| !taken[i])
                    .max_by(|&a, &b| costs[a].total_cmp(&costs[b]).then(b.cmp(&a)))
                    .expect("n >= k leaves a free point");
                taken[far] = true;
                next.push(data.get(far).to_vec());
            } else {
                next.push(optimal_center(data, g, objective));
            }
        }
        let (l2, c2) = assign(&next);
        let new_cost = total(&c2);
        if new_cost > cost {
            break;
        }
        let gain = cost - new_cost;
        centers = next;
        labels = l2;
        costs = c2;
        cost = new_cost;
        if gain <= MIN_RELATIVE_GAIN * cost {
            break;
        }
    }

    make_distinct(data, &mut centers, &costs);
    let set = CenterSet::new(centers)?;
    set.ensure_distinct()?;
    Ok(set)
}

/// Replaces repeated centers by the most expensive data points not already
/// used as centers.
fn make_distinct(data: &Dataset, centers: &mut [Vec<f64>], costs: &[f64]) {
    let mut order: Vec<usize> = (0..data.len()).collect();
    order.sort_by(|&a, &b| costs[b].total_cmp(&costs[a]).then(a.cmp(&b)));
    let mut pool = order.into_iter();
    for j in 1..centers.len() {
        while centers[..j].contains(&centers[j]) {
            match pool.next() {
                Some(i) if !centers.iter().any(|c| c.as_slice() == data.get(i)) => {
                    centers[j] = data.get(i).to_vec()
                }
                Some(_) => {}
                None => return,
            }
        }
    }
}
