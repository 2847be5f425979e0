//! Spectral-radius and Markov-chain entropy measures.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::matrix::{rational_to_f64, LabeledMatrix, Rational};
use crate::order::{preference_matrix, transition_matrix, PreferenceOrder, TransitionRule};
use crate::profile::Profile;

pub const POWER_TOLERANCE: f64 = 1e-12;
pub const POWER_MAX_ITER: usize = 100_000;
/// Largest chain solved exactly in rational arithmetic.
pub const EXACT_DIM_LIMIT: usize = 12;
pub const DEFAULT_TIE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EntropyValue {
    pub value: f64,
    pub base: usize,
}

/// Logarithm of `x` to an integer base; base 1 only admits `x = 1`.
fn log_base(x: f64, base: usize) -> f64 {
    if base < 2 {
        return 0.0;
    }
    x.ln() / (base as f64).ln()
}

fn support_graph(m: &LabeledMatrix<f64>) -> Digraph {
    let n = m.dim();
    let edges = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| *m.get(i, j) > 0.0);
    Digraph::new(m.labels().clone(), edges).expect("indices in range")
}

/// Perron root of an irreducible block, by power iteration on `B + I`
/// (which is primitive) with Collatz-Wielandt bounds as the stopping rule.
fn irreducible_radius(block: &[Vec<f64>]) -> Result<f64> {
    let k = block.len();
    let mut x = vec![1.0 / k as f64; k];
    let mut lo = 0.0;
    let mut hi = f64::INFINITY;
    for _ in 0..POWER_MAX_ITER {
        let y: Vec<f64> = (0..k)
            .map(|i| x[i] + (0..k).map(|j| block[i][j] * x[j]).sum::<f64>())
            .collect();
        lo = f64::INFINITY;
        hi = 0.0_f64;
        for i in 0..k {
            let r = y[i] / x[i];
            lo = lo.min(r);
            hi = hi.max(r);
        }
        if hi - lo <= POWER_TOLERANCE * hi.max(1.0) {
            return Ok((hi + lo) / 2.0 - 1.0);
        }
        let s: f64 = y.iter().sum();
        x = y.into_iter().map(|v| v / s).collect();
    }
    Err(Error::NonConvergence {
        estimate: (hi + lo) / 2.0 - 1.0,
        residual: hi - lo,
    })
}

/// Largest eigenvalue of a nonnegative matrix: the maximum over its
/// irreducible diagonal blocks.
pub fn spectral_radius(m: &LabeledMatrix<f64>) -> Result<f64> {
    let mut best = 0.0_f64;
    for comp in support_graph(m).strongly_connected_components() {
        let r = if comp.len() == 1 {
            *m.get(comp[0], comp[0])
        } else {
            let block: Vec<Vec<f64>> = comp
                .iter()
                .map(|&i| comp.iter().map(|&j| *m.get(i, j)).collect())
                .collect();
            irreducible_radius(&block)?
        };
        best = best.max(r);
    }
    Ok(best)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TopologicalEntropy {
    pub lambda: f64,
    pub entropy: f64,
    pub base: usize,
}

/// Mean of the voters' preference matrices.
pub fn mean_preference_matrix(profile: &Profile) -> LabeledMatrix<Rational> {
    mean_of(profile, preference_matrix)
}

fn mean_of(
    profile: &Profile,
    f: impl Fn(&PreferenceOrder) -> LabeledMatrix<Rational>,
) -> LabeledMatrix<Rational> {
    let mut orders = profile.orders();
    let first = f(orders.next().expect("profile has a voter"));
    let sum = orders.fold(first, |acc, o| acc.add(&f(o)).expect("shared policy set"));
    sum.scale(&Rational::new(1.into(), (profile.voter_count() as i64).into()))
}

/// `log_m Λ` of the mean preference matrix, `m` the number of policies.
pub fn topological_entropy(profile: &Profile) -> Result<TopologicalEntropy> {
    let f = mean_preference_matrix(profile).to_f64();
    let lambda = spectral_radius(&f)?;
    let base = profile.policies().len();
    Ok(TopologicalEntropy {
        lambda,
        entropy: log_base(lambda, base).max(0.0),
        base,
    })
}

/// Mean of the voters' transition matrices; row-stochastic.
pub fn markov_aggregate(profile: &Profile, rule: TransitionRule) -> LabeledMatrix<Rational> {
    mean_of(profile, |o| transition_matrix(o, rule))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StationaryResult {
    pub distribution: Vec<f64>,
    /// Present when the chain was solved in rational arithmetic.
    #[serde(skip)]
    pub exact: Option<Vec<Rational>>,
    pub iterations: usize,
    pub residual: f64,
}

/// Solve `a x = b` exactly; `a` must be nonsingular.
fn solve_exact(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Vec<Rational> {
    let n = a.len();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("system is nonsingular");
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for j in col..n {
            a[col][j] = &a[col][j] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in col..n {
                    let d = &f * &a[col][j];
                    a[r][j] -= d;
                }
                let d = &f * &b[col];
                b[r] -= d;
            }
        }
    }
    b
}

/// Closed communicating classes of the chain's support graph.
fn closed_classes(g: &Digraph) -> Vec<Vec<usize>> {
    g.strongly_connected_components()
        .into_iter()
        .filter(|c| c.iter().all(|&u| g.successors(u).all(|v| c.contains(&v))))
        .collect()
}

/// Cesàro limit from the uniform start, exactly: each closed class's
/// stationary vector, weighted by the probability of being absorbed there.
fn stationary_exact(m: &LabeledMatrix<Rational>) -> Vec<Rational> {
    let n = m.dim();
    let g = support_graph(&m.to_f64());
    let classes = closed_classes(&g);
    let mut in_class = vec![false; n];
    for c in &classes {
        for &i in c {
            in_class[i] = true;
        }
    }
    let transient: Vec<usize> = (0..n).filter(|&i| !in_class[i]).collect();
    let uniform = Rational::new(1.into(), (n as i64).into());
    let mut result = vec![Rational::zero(); n];
    for class in &classes {
        // stationary vector of the class: pi (P - I) = 0 with sum 1
        let k = class.len();
        let mut a = vec![vec![Rational::zero(); k]; k];
        for (r, &j) in class.iter().enumerate() {
            for (c, &i) in class.iter().enumerate() {
                a[r][c] = m.get(i, j).clone() - if i == j { Rational::one() } else { Rational::zero() };
            }
        }
        a[k - 1] = vec![Rational::one(); k];
        let mut b = vec![Rational::zero(); k];
        b[k - 1] = Rational::one();
        let pi = solve_exact(a, b);

        // absorption probability from each transient state
        let absorb = if transient.is_empty() {
            Vec::new()
        } else {
            let t = transient.len();
            let mut a = vec![vec![Rational::zero(); t]; t];
            let mut b = vec![Rational::zero(); t];
            for (r, &i) in transient.iter().enumerate() {
                for (c, &j) in transient.iter().enumerate() {
                    a[r][c] = if i == j { Rational::one() } else { Rational::zero() } - m.get(i, j);
                }
                b[r] = class.iter().map(|&j| m.get(i, j).clone()).sum();
            }
            solve_exact(a, b)
        };
        let weight: Rational = &uniform * Rational::from_integer((k as i64).into())
            + absorb.iter().map(|p| &uniform * p).sum::<Rational>();
        for (idx, &i) in class.iter().enumerate() {
            result[i] = &weight * &pi[idx];
        }
    }
    result
}

fn residual_l1(x: &[f64], m: &LabeledMatrix<f64>) -> f64 {
    let n = x.len();
    (0..n)
        .map(|j| ((0..n).map(|i| x[i] * m.get(i, j)).sum::<f64>() - x[j]).abs())
        .sum()
}

/// Float mode: iterate the lazy chain `(I + P) / 2` from the uniform start.
/// The lazy chain shares closed classes, absorption probabilities and
/// stationary vectors with `P`, and is aperiodic, so its limit is the
/// Cesàro limit of `P`.
pub fn stationary_distribution_f64(m: &LabeledMatrix<f64>) -> Result<StationaryResult> {
    let n = m.dim();
    for (i, row) in m.rows().enumerate() {
        if (row.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(Error::NotStochastic(i));
        }
    }
    let mut x = vec![1.0 / n as f64; n];
    for it in 1..=POWER_MAX_ITER {
        let y: Vec<f64> = (0..n)
            .map(|j| 0.5 * x[j] + 0.5 * (0..n).map(|i| x[i] * m.get(i, j)).sum::<f64>())
            .collect();
        let delta: f64 = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).sum();
        x = y;
        if delta < POWER_TOLERANCE {
            let residual = residual_l1(&x, m);
            return Ok(StationaryResult {
                distribution: x,
                exact: None,
                iterations: it,
                residual,
            });
        }
    }
    Err(Error::NonConvergence {
        estimate: x.iter().cloned().fold(0.0, f64::max),
        residual: residual_l1(&x, m),
    })
}

/// Cesàro limit of uniform-start iterates; exact up to [`EXACT_DIM_LIMIT`].
pub fn stationary_distribution(m: &LabeledMatrix<Rational>) -> Result<StationaryResult> {
    if let Some(r) = m.non_stochastic_row() {
        return Err(Error::NotStochastic(r));
    }
    if m.dim() > EXACT_DIM_LIMIT {
        return stationary_distribution_f64(&m.to_f64());
    }
    let exact = stationary_exact(m);
    let distribution: Vec<f64> = exact.iter().map(rational_to_f64).collect();
    let residual = residual_l1(&distribution, &m.to_f64());
    Ok(StationaryResult {
        distribution,
        exact: Some(exact),
        iterations: 0,
        residual,
    })
}

/// `-Σ p log_base p` with `0 log 0 = 0`.
pub fn shannon_entropy(p: &[f64], base: usize) -> Result<EntropyValue> {
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > 1e-9 || p.iter().any(|&v| v < 0.0 || !v.is_finite()) {
        return Err(Error::NotADistribution(sum));
    }
    let nats: f64 = -p.iter().filter(|&&v| v > 0.0).map(|&v| v * v.ln()).sum::<f64>();
    if base < 2 {
        return if nats.abs() < 1e-15 {
            Ok(EntropyValue { value: 0.0, base })
        } else {
            Err(Error::Parse("entropy base must be at least 2".into()))
        };
    }
    Ok(EntropyValue {
        value: (nats / (base as f64).ln()).max(0.0),
        base,
    })
}

/// Group policies by descending stationary probability. Exact results tie
/// only on equality; otherwise values within `tie_tol` of a group's first
/// member share that group.
pub fn markov_order(
    sr: &StationaryResult,
    policies: &crate::order::PolicySet,
    tie_tol: f64,
) -> Result<PreferenceOrder> {
    let n = policies.len();
    let mut idx: Vec<usize> = (0..n).collect();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    match &sr.exact {
        Some(ex) => {
            idx.sort_by(|&a, &b| ex[b].cmp(&ex[a]).then(a.cmp(&b)));
            for i in idx {
                match groups.last_mut() {
                    Some(g) if ex[g[0]] == ex[i] => g.push(i),
                    _ => groups.push(vec![i]),
                }
            }
        }
        None => {
            let d = &sr.distribution;
            idx.sort_by(|&a, &b| d[b].total_cmp(&d[a]).then(a.cmp(&b)));
            for i in idx {
                match groups.last_mut() {
                    Some(g) if (d[g[0]] - d[i]).abs() <= tie_tol => g.push(i),
                    _ => groups.push(vec![i]),
                }
            }
        }
    }
    PreferenceOrder::from_indices(policies, groups)
}

/// Stationary analysis of a profile's averaged transition chain.
#[derive(Clone, Debug, Serialize)]
pub struct MarkovReport {
    pub stationary: Vec<f64>,
    /// Exact probabilities as `p/q` strings when solved exactly.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stationary_exact: Option<Vec<String>>,
    pub entropy: f64,
    pub base: usize,
    pub order: PreferenceOrder,
}

pub fn markov_report(profile: &Profile, rule: TransitionRule) -> Result<MarkovReport> {
    let m = markov_aggregate(profile, rule);
    let sr = stationary_distribution(&m)?;
    let base = profile.policies().len();
    let entropy = shannon_entropy(&sr.distribution, base)?.value;
    let order = markov_order(&sr, profile.policies(), DEFAULT_TIE_TOL)?;
    Ok(MarkovReport {
        stationary_exact: sr
            .exact
            .as_ref()
            .map(|e| e.iter().map(|r| r.to_string()).collect()),
        stationary: sr.distribution,
        entropy,
        base,
        order,
    })
}

/// True when every entry is nonnegative; handy for callers building their
/// own matrices.
pub fn is_nonnegative(m: &LabeledMatrix<Rational>) -> bool {
    m.rows().flatten().all(|v| !v.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ratio;
    use crate::order::PolicySet;

    fn fm(rows: Vec<Vec<f64>>) -> LabeledMatrix<f64> {
        let ps = PolicySet::new((0..rows.len()).map(|i| format!("p{i}"))).unwrap();
        LabeledMatrix::from_rows_f64(ps, rows).unwrap()
    }

    fn rm(rows: Vec<Vec<Rational>>) -> LabeledMatrix<Rational> {
        let ps = PolicySet::new((0..rows.len()).map(|i| format!("p{i}"))).unwrap();
        LabeledMatrix::from_rows(ps, rows).unwrap()
    }

    fn borda4() -> Profile {
        Profile::from_shorthand(&["w", "x", "y", "z"], &["w>x>y>z", "w>x>y>z", "y>z>x>w"]).unwrap()
    }

    #[test]
    fn spectral_radius_examples() {
        assert!((spectral_radius(&fm(vec![vec![1.0; 3]; 3])).unwrap() - 3.0).abs() < 1e-10);
        let id = fm(vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]);
        assert_eq!(spectral_radius(&id).unwrap(), 1.0);
        let t = 1.0 / 3.0;
        let circ = fm(vec![vec![1.0, 2.0 * t, t], vec![t, 1.0, 2.0 * t], vec![2.0 * t, t, 1.0]]);
        assert!((spectral_radius(&circ).unwrap() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn periodic_block_converges() {
        let swap = fm(vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert!((spectral_radius(&swap).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn topological_entropy_examples() {
        let f1 = Profile::from_shorthand(&["a", "b", "c"], &["a>b>c"]).unwrap();
        assert!(topological_entropy(&f1).unwrap().entropy.abs() < 1e-12);
        let f2 = Profile::from_shorthand(&["a", "b", "c"], &["a=b>c"]).unwrap();
        assert!((topological_entropy(&f2).unwrap().entropy - 0.63093).abs() < 1e-4);
        let tie = Profile::from_shorthand(&["a", "b", "c"], &["a=b=c"]).unwrap();
        assert!((topological_entropy(&tie).unwrap().entropy - 1.0).abs() < 1e-12);
    }

    #[test]
    fn markov_aggregate_examples() {
        let m = markov_aggregate(&borda4(), TransitionRule::ClimbOneRung);
        let want = vec![
            vec![ratio(2, 3), ratio(1, 3), ratio(0, 1), ratio(0, 1)],
            vec![ratio(2, 3), ratio(0, 1), ratio(0, 1), ratio(1, 3)],
            vec![ratio(0, 1), ratio(2, 3), ratio(1, 3), ratio(0, 1)],
            vec![ratio(0, 1), ratio(0, 1), ratio(1, 1), ratio(0, 1)],
        ];
        assert_eq!(m.to_rows(), want);
        let p = Profile::from_shorthand(&["x", "y", "z"], &["x>y>z", "y>z>x", "z>x>y"]).unwrap();
        let jump = markov_aggregate(&p, TransitionRule::JumpToTop);
        assert!(jump.rows().flatten().all(|v| *v == ratio(1, 3)));
        let climb = markov_aggregate(&p, TransitionRule::ClimbOneRung);
        assert_eq!(climb.row(0), &[ratio(1, 3), ratio(0, 1), ratio(2, 3)]);
        for m in [jump, climb] {
            assert_eq!(stationary_distribution(&m).unwrap().exact.unwrap(), vec![ratio(1, 3); 3]);
        }
    }

    #[test]
    fn stationary_examples() {
        let sr = stationary_distribution(&markov_aggregate(&borda4(), TransitionRule::ClimbOneRung)).unwrap();
        assert_eq!(sr.exact.unwrap(), vec![ratio(12, 23), ratio(6, 23), ratio(3, 23), ratio(2, 23)]);
        let three = borda4().restrict(&["w", "y", "z"]).unwrap();
        let sr = stationary_distribution(&markov_aggregate(&three, TransitionRule::ClimbOneRung)).unwrap();
        assert_eq!(sr.exact.unwrap(), vec![ratio(6, 11), ratio(3, 11), ratio(2, 11)]);
        let id = rm(vec![
            vec![ratio(1, 1), ratio(0, 1), ratio(0, 1)],
            vec![ratio(0, 1), ratio(1, 1), ratio(0, 1)],
            vec![ratio(0, 1), ratio(0, 1), ratio(1, 1)],
        ]);
        assert_eq!(stationary_distribution(&id).unwrap().exact.unwrap(), vec![ratio(1, 3); 3]);
    }

    #[test]
    fn float_mode_agrees_with_exact_on_reducible_chain() {
        // transient 0 feeds two absorbing states unevenly, 3-4 periodic pair
        let m = rm(vec![
            vec![ratio(0, 1), ratio(1, 4), ratio(1, 4), ratio(1, 2), ratio(0, 1)],
            vec![ratio(0, 1), ratio(1, 1), ratio(0, 1), ratio(0, 1), ratio(0, 1)],
            vec![ratio(0, 1), ratio(0, 1), ratio(1, 1), ratio(0, 1), ratio(0, 1)],
            vec![ratio(0, 1), ratio(0, 1), ratio(0, 1), ratio(0, 1), ratio(1, 1)],
            vec![ratio(0, 1), ratio(0, 1), ratio(0, 1), ratio(1, 1), ratio(0, 1)],
        ]);
        let ex = stationary_distribution(&m).unwrap();
        assert_eq!(
            ex.exact.clone().unwrap(),
            vec![ratio(0, 1), ratio(1, 4), ratio(1, 4), ratio(1, 4), ratio(1, 4)]
        );
        let fl = stationary_distribution_f64(&m.to_f64()).unwrap();
        for (a, b) in ex.distribution.iter().zip(&fl.distribution) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn non_stochastic_is_rejected() {
        let m = rm(vec![vec![ratio(1, 2), ratio(0, 1)], vec![ratio(0, 1), ratio(1, 1)]]);
        assert_eq!(stationary_distribution(&m).unwrap_err(), Error::NotStochastic(0));
    }

    #[test]
    fn shannon_examples() {
        let p: Vec<f64> = [12.0, 6.0, 3.0, 2.0].iter().map(|v| v / 23.0).collect();
        assert!((shannon_entropy(&p, 4).unwrap().value - 0.843).abs() < 5e-4);
        let p: Vec<f64> = [6.0, 3.0, 2.0].iter().map(|v| v / 11.0).collect();
        assert!((shannon_entropy(&p, 3).unwrap().value - 0.905619).abs() < 1e-5);
        assert!((shannon_entropy(&[0.2; 5], 5).unwrap().value - 1.0).abs() < 1e-12);
        assert!(matches!(shannon_entropy(&[0.5, 0.4], 2), Err(Error::NotADistribution(_))));
        assert_eq!(shannon_entropy(&[1.0, 0.0], 2).unwrap().value, 0.0);
    }

    #[test]
    fn markov_order_examples() {
        let r = markov_report(&borda4(), TransitionRule::ClimbOneRung).unwrap();
        assert_eq!(r.order.to_string(), "w>x>y>z");
        let three = borda4().restrict(&["w", "y", "z"]).unwrap();
        assert_eq!(markov_report(&three, TransitionRule::ClimbOneRung).unwrap().order.to_string(), "w>y>z");
        let ps = PolicySet::new(["a", "b", "c"]).unwrap();
        let sr = StationaryResult {
            distribution: vec![1.0 / 3.0; 3],
            exact: None,
            iterations: 0,
            residual: 0.0,
        };
        assert_eq!(markov_order(&sr, &ps, DEFAULT_TIE_TOL).unwrap().to_string(), "a=b=c");
    }
}
