//! LLL reduction of small integer lattices.

/// LLL-reduces the rows of `basis` in place (Lovász parameter `delta`).
///
/// The rows must be linearly independent. Gram–Schmidt data is kept in
/// `f64` and recomputed after every change, which is fine for the small
/// dimensions used by relation search.
pub fn lll_reduce(basis: &mut [Vec<i128>], delta: f64) {
    let n = basis.len();
    if n < 2 {
        return;
    }
    let (mut mu, mut norms) = gram_schmidt(basis);
    let mut k = 1;
    let mut guard = 0usize;
    while k < n {
        guard += 1;
        if guard > 1_000_000 {
            break;
        }
        for j in (0..k).rev() {
            let r = mu[k][j].round();
            if r != 0.0 {
                let r = r as i128;
                let (head, tail) = basis.split_at_mut(k);
                for (a, b) in tail[0].iter_mut().zip(&head[j]) {
                    *a -= r * b;
                }
                (mu, norms) = gram_schmidt(basis);
            }
        }
        if norms[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * norms[k - 1] {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            (mu, norms) = gram_schmidt(basis);
            k = k.saturating_sub(1).max(1);
        }
    }
}

fn gram_schmidt(basis: &[Vec<i128>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = basis.len();
    let rows: Vec<Vec<f64>> = basis
        .iter()
        .map(|r| r.iter().map(|&v| v as f64).collect())
        .collect();
    let mut star: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut mu = vec![vec![0.0; n]; n];
    let mut norms = vec![0.0; n];
    for i in 0..n {
        let mut v = rows[i].clone();
        for j in 0..i {
            let m = if norms[j] > 0.0 {
                dot(&rows[i], &star[j]) / norms[j]
            } else {
                0.0
            };
            mu[i][j] = m;
            for (a, b) in v.iter_mut().zip(&star[j]) {
                *a -= m * b;
            }
        }
        norms[i] = dot(&v, &v);
        star.push(v);
    }
    (mu, norms)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
