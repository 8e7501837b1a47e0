//! Newton polishing of projection and support problems on a guessed active
//! set, accepted only when the KKT conditions certify optimality.

use nalgebra::{DMatrix, DVector};

use crate::geometry::vector::dist;

const NEWTON_STEPS: usize = 40;
const MULTIPLIER_SLACK: f64 = 1e-12;
const FEASIBILITY_SLACK: f64 = 1e-12;

/// `min ½α|z − q|² − ⟨u, z⟩` subject to `|z − x_i| ≤ r`. Projection is
/// `α = 1, u = 0`; support in direction `u` is `α = 0`.
pub(crate) struct Problem<'a> {
    pub centers: &'a [&'a [f64]],
    pub radius: f64,
    pub alpha: f64,
    pub q: &'a [f64],
    pub u: &'a [f64],
}

impl Problem<'_> {
    fn dim(&self) -> usize {
        self.q.len().max(self.u.len())
    }

    fn gradient(&self, z: &[f64]) -> Vec<f64> {
        (0..self.dim())
            .map(|k| {
                let q = self.q.get(k).copied().unwrap_or(0.0);
                let u = self.u.get(k).copied().unwrap_or(0.0);
                self.alpha * (z[k] - q) - u
            })
            .collect()
    }

    /// Newton on the KKT system with constraints `active` held as equalities,
    /// from `(z, mu)`. Returns the solution if it is a certified optimum.
    pub fn polish(&self, active: &[usize], z: &[f64], mu: &[f64]) -> Option<Vec<f64>> {
        let d = self.dim();
        let m = active.len();
        if m == 0 || m > d {
            return None;
        }
        let r = self.radius;
        let mut z = z.to_vec();
        let mut mu = mu.to_vec();
        let scale = 1.0 + r + z.iter().map(|v| v.abs()).fold(0.0, f64::max);
        let mut converged = false;
        for _ in 0..NEWTON_STEPS {
            let g = self.gradient(&z);
            let total: f64 = mu.iter().sum();
            let mut jac = DMatrix::<f64>::zeros(d + m, d + m);
            let mut res = DVector::<f64>::zeros(d + m);
            for k in 0..d {
                jac[(k, k)] = self.alpha + total;
                res[k] = g[k];
            }
            for (j, &i) in active.iter().enumerate() {
                let x = self.centers[i];
                let mut s = 0.0;
                for k in 0..d {
                    let n = z[k] - x[k];
                    res[k] += mu[j] * n;
                    jac[(k, d + j)] = n;
                    jac[(d + j, k)] = 2.0 * n;
                    s += n * n;
                }
                res[d + j] = s - r * r;
            }
            if res.amax() <= 1e-14 * scale * scale {
                converged = true;
                break;
            }
            let step = jac.lu().solve(&(-res))?;
            for k in 0..d {
                z[k] += step[k];
            }
            for j in 0..m {
                mu[j] += step[d + j];
            }
            if !z.iter().chain(&mu).all(|v| v.is_finite()) {
                return None;
            }
        }
        if !converged {
            return None;
        }
        let mu_scale = 1.0 + mu.iter().map(|v| v.abs()).fold(0.0, f64::max);
        if mu.iter().any(|&v| v < -MULTIPLIER_SLACK * mu_scale) {
            return None;
        }
        if self.centers.iter().any(|x| dist(&z, x) > r * (1.0 + FEASIBILITY_SLACK)) {
            return None;
        }
        Some(z)
    }

    /// Tries subsets of the constraints within `band` of being active at
    /// `z`, nearest first.
    pub fn polish_near(&self, z: &[f64], band: f64, max_candidates: usize) -> Option<Vec<f64>> {
        let r = self.radius;
        let mut near: Vec<(f64, usize)> = self
            .centers
            .iter()
            .enumerate()
            .map(|(i, x)| (r - dist(z, x), i))
            .filter(|&(slack, _)| slack <= band)
            .collect();
        near.sort_by(|a, b| a.0.total_cmp(&b.0));
        near.truncate(max_candidates);
        let cand: Vec<usize> = near.into_iter().map(|(_, i)| i).collect();
        self.polish_subsets(z, &cand)
    }

    /// Tries every subset of `cand` of size at most `d`, smallest first,
    /// seeding multipliers by least squares on the stationarity condition.
    pub fn polish_subsets(&self, z: &[f64], cand: &[usize]) -> Option<Vec<f64>> {
        let d = self.dim();
        let g = self.gradient(z);
        for size in 1..=cand.len().min(d) {
            for subset in subsets(cand.len(), size) {
                let active: Vec<usize> = subset.iter().map(|&j| cand[j]).collect();
                let normals = DMatrix::from_fn(d, size, |k, j| z[k] - self.centers[active[j]][k]);
                let rhs = DVector::from_iterator(d, g.iter().map(|v| -v));
                let Ok(mu) = normals.svd(true, true).solve(&rhs, 1e-14) else {
                    continue;
                };
                let start = project_to_spheres(z, &active, self.centers, self.radius);
                if let Some(best) = self.polish(&active, &start, mu.as_slice()) {
                    return Some(best);
                }
            }
        }
        None
    }
}

/// A point of the sphere `|z − x_i| = r` nearest to `z` for the first
/// active index; Newton handles the rest.
fn project_to_spheres(z: &[f64], active: &[usize], centers: &[&[f64]], r: f64) -> Vec<f64> {
    let x = centers[active[0]];
    let n = dist(z, x);
    if n == 0.0 {
        return z.to_vec();
    }
    z.iter().zip(x).map(|(zk, xk)| xk + r * (zk - xk) / n).collect()
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(size);
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, size, cur, out);
            cur.pop();
        }
    }
    rec(0, n, size, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lens_vertex_support() {
        let a = [-0.5, 0.0];
        let b = [0.5, 0.0];
        let centers: Vec<&[f64]> = vec![&a, &b];
        let p = Problem {
            centers: &centers,
            radius: 1.0,
            alpha: 0.0,
            q: &[],
            u: &[0.0, 1.0],
        };
        let z = p.polish_near(&[1e-4, 0.866], 1e-2, 8).unwrap();
        assert!(z[0].abs() < 1e-15);
        assert!((z[1] - 3f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn wrong_active_set_is_rejected() {
        let a = [-0.5, 0.0];
        let b = [0.5, 0.0];
        let centers: Vec<&[f64]> = vec![&a, &b];
        let p = Problem {
            centers: &centers,
            radius: 1.0,
            alpha: 0.0,
            q: &[],
            u: &[0.0, 1.0],
        };
        assert!(p.polish(&[0], &[0.5, 0.9], &[1.0]).is_none());
    }

    #[test]
    fn projection_onto_lens_vertex() {
        let a = [-0.5, 0.0];
        let b = [0.5, 0.0];
        let centers: Vec<&[f64]> = vec![&a, &b];
        let p = Problem {
            centers: &centers,
            radius: 1.0,
            alpha: 1.0,
            q: &[0.0, 5.0],
            u: &[],
        };
        let z = p.polish(&[0, 1], &[0.01, 0.86], &[1.0, 1.0]).unwrap();
        assert!((z[1] - 3f64.sqrt() / 2.0).abs() < 1e-15 && z[0].abs() < 1e-15);
    }
}
