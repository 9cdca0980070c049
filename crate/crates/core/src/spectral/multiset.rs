use crate::matrix::C64;

pub fn sort_multiset(values: &mut [C64]) {
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

pub fn sorted_real(mut values: Vec<f64>) -> Vec<f64> {
    values.sort_by(f64::total_cmp);
    values
}

/// Injective pairing of every element of `small` with a distinct element of
/// `large` at distance at most `tol`. Returns the largest paired distance.
///
/// Sorted greedy pairing is tried first; if it gets stuck, a maximum
/// bipartite matching on the tolerance graph decides.
pub fn contains_multiset(large: &[C64], small: &[C64], tol: f64) -> Option<f64> {
    if small.len() > large.len() {
        return None;
    }
    let mut l = large.to_vec();
    let mut s = small.to_vec();
    sort_multiset(&mut l);
    sort_multiset(&mut s);
    greedy(&l, &s, tol).or_else(|| bipartite(&l, &s, tol))
}

/// Multiset equality within `tol`; returns the largest paired distance.
pub fn match_multisets(a: &[C64], b: &[C64], tol: f64) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    contains_multiset(a, b, tol)
}

fn greedy(large: &[C64], small: &[C64], tol: f64) -> Option<f64> {
    let mut used = vec![false; large.len()];
    let mut worst: f64 = 0.0;
    for z in small {
        let best = large
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, w)| (j, (z - w).norm()))
            .filter(|&(_, dist)| dist <= tol)
            .min_by(|x, y| x.1.total_cmp(&y.1))?;
        used[best.0] = true;
        worst = worst.max(best.1);
    }
    Some(worst)
}

fn bipartite(large: &[C64], small: &[C64], tol: f64) -> Option<f64> {
    let adj: Vec<Vec<usize>> = small
        .iter()
        .map(|z| (0..large.len()).filter(|&j| (z - large[j]).norm() <= tol).collect())
        .collect();
    let mut owner: Vec<Option<usize>> = vec![None; large.len()];
    fn augment(i: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &j in &adj[i] {
            if seen[j] {
                continue;
            }
            seen[j] = true;
            if owner[j].is_none_or(|k| augment(k, adj, seen, owner)) {
                owner[j] = Some(i);
                return true;
            }
        }
        false
    }
    for i in 0..small.len() {
        let mut seen = vec![false; large.len()];
        if !augment(i, &adj, &mut seen, &mut owner) {
            return None;
        }
    }
    Some(
        owner
            .iter()
            .enumerate()
            .filter_map(|(j, o)| o.map(|i| (small[i] - large[j]).norm()))
            .fold(0.0, f64::max),
    )
}
