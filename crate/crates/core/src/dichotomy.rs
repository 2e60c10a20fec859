//! Local epsilon signs for the canonical-character family and the resulting
//! dichotomy of quaternion algebras.
//!
//! For the pair (chi_can^n, chi_can^m) over Q(sqrt(-7)) the product of the
//! local signs eps_v * omega_v(-1) picks out a unique quaternion algebra
//! carrying nonzero torus periods. The three computations (v = infinity,
//! v = 7, all other v) specialize to parity rules in n and m.

use serde::Serialize;
use std::collections::BTreeSet;

use crate::qfield::{hilbert_symbol, ramification_set, Place, Rat};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DichotomyError {
    #[error("central character condition fails: n and m must have opposite parity")]
    CentralCondition,
}

/// Central character condition for the pair (chi_can^n, chi_can^m):
/// the restrictions to the rational ideles multiply to eps_{E/F}^(n+m+1),
/// which is trivial iff n + m is odd.
pub fn check_central_condition(n: u32, m: u32) -> bool {
    (n + m) % 2 == 1
}

/// Sign at the real place: +1 iff the weight n+1 of pi_{chi_can^n} is at
/// most the infinity-type gap m of chi_can^m.
pub fn infinite_sign(n: u32, m: u32) -> Result<i8, DichotomyError> {
    if !check_central_condition(n, m) {
        return Err(DichotomyError::CentralCondition);
    }
    Ok(if n + 1 <= m { 1 } else { -1 })
}

/// Sign at a finite prime: -1 exactly at p = 7 with n odd.
pub fn finite_sign(n: u32, p: u64) -> i8 {
    if p == 7 && n % 2 == 1 {
        -1
    } else {
        1
    }
}

/// The partner quaternion algebra: (u, J) goes to (u, -J).
pub fn partner_algebra(u: &Rat, j: &Rat) -> (Rat, Rat) {
    (u.clone(), -j)
}

/// One cell of the dichotomy chart.
#[derive(Debug, Clone, Serialize)]
pub struct ChartCell {
    pub n: u32,
    pub m: u32,
    pub eps_infinity: i8,
    pub eps_7: i8,
    pub eps_global: i8,
    /// Ramification set of B_{pi, Omega} when eps_global = +1.
    pub sigma: Vec<String>,
    pub split: bool,
    /// eps_global = -1 means the central L-value vanishes and no algebra
    /// carries a nonzero period.
    pub vanishing_cell: bool,
}

/// Compute the chart cell for (n, m) with opposite parity.
pub fn dichotomy_cell(n: u32, m: u32) -> Result<ChartCell, DichotomyError> {
    let eps_inf = infinite_sign(n, m)?;
    let eps_7 = finite_sign(n, 7);
    let eps_global = eps_inf * eps_7;
    let mut sigma: BTreeSet<Place> = BTreeSet::new();
    if eps_inf == -1 {
        sigma.insert(Place::Infinite);
    }
    if eps_7 == -1 {
        sigma.insert(Place::Finite(7));
    }
    Ok(ChartCell {
        n,
        m,
        eps_infinity: eps_inf,
        eps_7,
        eps_global,
        sigma: sigma.iter().map(|p| p.to_string()).collect(),
        split: sigma.is_empty(),
        vanishing_cell: eps_global == -1,
    })
}

/// The four cells of the chart, represented by (n,m) = (3,2), (2,3) for the
/// eps = +1 row and (2,3), (3,2) with the complementary infinity condition
/// for the eps = -1 row.
pub fn dichotomy_chart() -> Vec<ChartCell> {
    // (n odd, m even, n+1 > m): ramified at {7, inf}
    // (n even, m odd, n+1 <= m): split
    // (n even, m odd, n+1 > m): eps = -1
    // (n odd, m even, n+1 <= m): eps = -1
    vec![
        dichotomy_cell(3, 2).unwrap(),
        dichotomy_cell(2, 3).unwrap(),
        dichotomy_cell(4, 3).unwrap(),
        dichotomy_cell(1, 4).unwrap(),
    ]
}

/// The symmetric-difference rule: the ramification sets of (u,J) and (u,-J)
/// agree at v exactly when (u,-1)_v = +1.
pub fn partner_ramification_consistent(u: &Rat, j: &Rat) -> bool {
    let (u2, j2) = partner_algebra(u, j);
    let s1 = ramification_set(u, j).unwrap();
    let s2 = ramification_set(&u2, &j2).unwrap();
    let mut places: BTreeSet<Place> = s1.union(&s2).cloned().collect();
    places.insert(Place::Infinite);
    places.insert(Place::Finite(2));
    places.insert(Place::Finite(7));
    for v in places {
        let agree = s1.contains(&v) == s2.contains(&v);
        let minus_one_norm = hilbert_symbol(u, &crate::qfield::rat_i(-1), &v).unwrap() == 1;
        if agree != minus_one_norm {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::{rat, rat_i};

    #[test]
    fn central_condition_parity() {
        assert!(check_central_condition(2, 3));
        assert!(check_central_condition(3, 2));
        assert!(!check_central_condition(2, 4));
        assert!(!check_central_condition(3, 3));
    }

    #[test]
    fn infinite_sign_rule() {
        assert_eq!(infinite_sign(2, 3).unwrap(), 1);
        assert_eq!(infinite_sign(3, 2).unwrap(), -1);
        assert_eq!(infinite_sign(2, 5).unwrap(), 1);
        assert_eq!(infinite_sign(2, 4), Err(DichotomyError::CentralCondition));
    }

    #[test]
    fn finite_sign_rule() {
        assert_eq!(finite_sign(1, 7), -1);
        assert_eq!(finite_sign(2, 7), 1);
        assert_eq!(finite_sign(3, 11), 1);
        assert_eq!(finite_sign(3, 7), -1);
    }

    #[test]
    fn partner_algebra_examples() {
        let (u, j) = partner_algebra(&rat_i(-7), &rat(-1, 7));
        assert_eq!((u.clone(), j.clone()), (rat_i(-7), rat(1, 7)));
        // involution
        assert_eq!(partner_algebra(&u, &j), (rat_i(-7), rat(-1, 7)));
        // With i^2 = -7 and the standard torus embedding into M_2(Q), an
        // anticommuting j has j^2 = c^2 + 7d^2/4 > 0, so the split algebra
        // is (-7, 1/7) and its partner (-7, -1/7) is the definite one
        // ramified at exactly {7, inf} (both symbol entries are negative
        // at the real place).
        assert!(ramification_set(&rat_i(-7), &rat(1, 7)).unwrap().is_empty());
        let s = ramification_set(&rat_i(-7), &rat(-1, 7)).unwrap();
        let expect: BTreeSet<Place> = [Place::Finite(7), Place::Infinite].into();
        assert_eq!(s, expect);
    }

    #[test]
    fn chart_cells() {
        let c = dichotomy_cell(3, 2).unwrap();
        assert_eq!(c.sigma, vec!["7".to_string(), "inf".to_string()]);
        assert!(!c.split && !c.vanishing_cell);
        let c = dichotomy_cell(2, 3).unwrap();
        assert!(c.split && c.sigma.is_empty() && !c.vanishing_cell);
        // eps = -1 cells
        let c = dichotomy_cell(4, 3).unwrap();
        assert!(c.vanishing_cell && c.eps_global == -1);
        let c = dichotomy_cell(1, 4).unwrap();
        assert!(c.vanishing_cell && c.eps_7 == -1 && c.eps_infinity == 1);
    }

    #[test]
    fn chart_matches_hilbert_bruteforce_translation() {
        // the (3,2) cell says: definite, ramified at {7, inf}; that algebra
        // is (u, -J) = (-7, -1/7) for the split (u, J) = (-7, 1/7)
        let cell = dichotomy_cell(3, 2).unwrap();
        let s = ramification_set(&rat_i(-7), &rat(-1, 7)).unwrap();
        let names: Vec<String> = s.iter().map(|p| p.to_string()).collect();
        assert_eq!(cell.sigma, names);
    }

    #[test]
    fn parity_grid_even_sigma() {
        for n in 1..=20u32 {
            for m in 1..=20u32 {
                if !check_central_condition(n, m) {
                    continue;
                }
                let c = dichotomy_cell(n, m).unwrap();
                if c.eps_global == 1 {
                    assert_eq!(c.sigma.len() % 2, 0, "n={n} m={m}");
                } else {
                    assert_eq!(c.sigma.len() % 2, 1, "n={n} m={m}");
                }
            }
        }
    }

    #[test]
    fn symmetric_difference_rule_samples() {
        for (un, jn, jd) in [(-7i64, -1i64, 7i64), (-7, 1, 1), (-1, -1, 1), (-7, 3, 5), (5, 2, 3)] {
            assert!(
                partner_ramification_consistent(&rat_i(un), &rat(jn, jd)),
                "u={un} J={jn}/{jd}"
            );
        }
    }
}
