//! Affine semigroups in Z^d with non-negative generators.

use std::collections::HashMap;
use std::sync::RwLock;

use num::{One, Signed, Zero};

use super::element::{is_zero_point, sub_points, Point};
use crate::error::{Error, Result};
use crate::lp::{maximize, rat_u, LpOutcome, Rational};

/// Largest number of fresh lattice points a single membership query may visit.
pub(crate) const MEMBERSHIP_HORIZON: usize = 4_000_000;

/// Write-once membership table shared by clones of a model.
#[derive(Debug, Default)]
pub(crate) struct MembershipCache {
    table: RwLock<HashMap<Point, bool>>,
}

impl MembershipCache {
    fn get(&self, p: &[u64]) -> Option<bool> {
        self.table.read().expect("cache lock").get(p).copied()
    }

    fn extend(&self, found: HashMap<Point, bool>) {
        if found.is_empty() {
            return;
        }
        let mut table = self.table.write().expect("cache lock");
        for (k, v) in found {
            table.entry(k).or_insert(v);
        }
    }
}

/// Decides whether `v` is a non-negative integer combination of `generators`.
///
/// Depth-first search over `v - g` for generators `g <= v`; every generator is
/// non-zero, so the search descends strictly and terminates.
pub(crate) fn is_member(generators: &[Point], v: &[u64], cache: &MembershipCache) -> Result<bool> {
    if is_zero_point(v) {
        return Ok(true);
    }
    if let Some(known) = cache.get(v) {
        return Ok(known);
    }
    let mut local: HashMap<Point, bool> = HashMap::new();
    let lookup = |p: &[u64], local: &HashMap<Point, bool>| -> Option<bool> {
        if is_zero_point(p) {
            return Some(true);
        }
        local.get(p).copied().or_else(|| cache.get(p))
    };
    let mut stack: Vec<(Point, usize)> = vec![(v.to_vec(), 0)];
    let mut answer = false;
    while let Some((point, next)) = stack.last_mut() {
        if *next == generators.len() {
            let (p, _) = stack.pop().expect("non-empty stack");
            local.insert(p, false);
            continue;
        }
        let g = &generators[*next];
        *next += 1;
        let Some(rest) = sub_points(point, g) else {
            continue;
        };
        match lookup(&rest, &local) {
            Some(true) => {
                answer = true;
                for (p, _) in stack.drain(..) {
                    local.insert(p, true);
                }
                break;
            }
            Some(false) => {}
            None => {
                if local.len() + stack.len() >= MEMBERSHIP_HORIZON {
                    return Err(Error::HorizonExceeded(MEMBERSHIP_HORIZON));
                }
                stack.push((rest, 0));
            }
        }
    }
    cache.extend(local);
    Ok(answer)
}

/// Lexicographically smallest coefficient vector expressing `v`, if any.
pub(crate) fn factorize(generators: &[Point], v: &[u64]) -> Result<Option<Vec<u64>>> {
    let mut memo: HashMap<(usize, Point), bool> = HashMap::new();
    if !representable(generators, 0, v, &mut memo)? {
        return Ok(None);
    }
    let mut coefficients = Vec::with_capacity(generators.len());
    let mut rest = v.to_vec();
    for (i, g) in generators.iter().enumerate() {
        let mut c = 0u64;
        loop {
            if representable(generators, i + 1, &rest, &mut memo)? {
                break;
            }
            rest = sub_points(&rest, g).expect("a representation exists along this branch");
            c += 1;
        }
        coefficients.push(c);
    }
    Ok(Some(coefficients))
}

/// Whether `v` is a combination of `generators[from..]`.
fn representable(
    generators: &[Point],
    from: usize,
    v: &[u64],
    memo: &mut HashMap<(usize, Point), bool>,
) -> Result<bool> {
    if is_zero_point(v) {
        return Ok(true);
    }
    if from == generators.len() {
        return Ok(false);
    }
    if let Some(&known) = memo.get(&(from, v.to_vec())) {
        return Ok(known);
    }
    if memo.len() >= MEMBERSHIP_HORIZON {
        return Err(Error::HorizonExceeded(MEMBERSHIP_HORIZON));
    }
    let mut rest = v.to_vec();
    let mut found = false;
    loop {
        if representable(generators, from + 1, &rest, memo)? {
            found = true;
            break;
        }
        match sub_points(&rest, &generators[from]) {
            Some(next) => rest = next,
            None => break,
        }
    }
    memo.insert((from, v.to_vec()), found);
    Ok(found)
}

/// Whether `w` lies on the smallest face of `cone(generators)` containing `y`,
/// i.e. whether `y - t·w` stays in the cone for some `t > 0`.
///
/// For members `w`, `y` of the semigroup this is exactly `w ∝ y` in the
/// algebraic order.
pub(crate) fn on_face_of(generators: &[Point], y: &[u64], w: &[u64]) -> bool {
    if is_zero_point(w) {
        return true;
    }
    if is_zero_point(y) {
        return false;
    }
    let d = y.len();
    // Variables: one coefficient per generator, then t. Rows: coordinates.
    let a: Vec<Vec<Rational>> = (0..d)
        .map(|i| {
            generators
                .iter()
                .map(|g| rat_u(g[i]))
                .chain(std::iter::once(rat_u(w[i])))
                .collect()
        })
        .collect();
    let b: Vec<Rational> = y.iter().map(|&c| rat_u(c)).collect();
    let mut c = vec![Rational::zero(); generators.len()];
    c.push(Rational::one());
    match maximize(&a, &b, &c) {
        LpOutcome::Optimal { value, .. } => value.is_positive(),
        LpOutcome::Unbounded => true,
        LpOutcome::Infeasible => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_with_holes() {
        let gens = vec![vec![2, 0], vec![1, 1], vec![0, 2]];
        let cache = MembershipCache::default();
        assert!(is_member(&gens, &[3, 1], &cache).unwrap());
        assert!(!is_member(&gens, &[1, 0], &cache).unwrap());
        assert!(!is_member(&gens, &[2, 1], &cache).unwrap());
        // cached answers agree
        assert!(!is_member(&gens, &[2, 1], &cache).unwrap());
        assert!(is_member(&gens, &[4, 4], &cache).unwrap());
    }

    #[test]
    fn factorization_is_lexicographically_smallest() {
        let gens = vec![vec![1, 0], vec![0, 1], vec![1, 1]];
        assert_eq!(factorize(&gens, &[2, 1]).unwrap(), Some(vec![1, 0, 1]));
        assert_eq!(factorize(&gens, &[0, 0]).unwrap(), Some(vec![0, 0, 0]));
        let numeric = vec![vec![3], vec![4]];
        assert_eq!(factorize(&numeric, &[7]).unwrap(), Some(vec![1, 1]));
        assert_eq!(factorize(&numeric, &[5]).unwrap(), None);
    }

    #[test]
    fn face_membership() {
        let gens = vec![vec![1, 0], vec![1, 2]];
        // (1,2) spans an extreme ray; (1,0) is not on it.
        assert!(!on_face_of(&gens, &[1, 2], &[1, 0]));
        assert!(on_face_of(&gens, &[1, 2], &[2, 4]));
        assert!(on_face_of(&gens, &[2, 2], &[1, 0]));
        assert!(on_face_of(&gens, &[2, 2], &[1, 2]));
    }
}
