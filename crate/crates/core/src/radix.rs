//! Mixed-radix encoding of tuples over finite domains.
//!
//! Table rows, outcomes and opponent profiles are all tuples whose `k`-th
//! coordinate ranges over `0..radices[k]`. The first coordinate is the most
//! significant digit, so ascending codes enumerate tuples lexicographically.

/// A mixed-radix number system over a fixed list of radices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MixedRadix {
    radices: Vec<usize>,
}

impl MixedRadix {
    pub fn new(radices: Vec<usize>) -> Self {
        debug_assert!(radices.iter().all(|&r| r > 0));
        MixedRadix { radices }
    }

    pub fn radices(&self) -> &[usize] {
        &self.radices
    }

    pub fn digits(&self) -> usize {
        self.radices.len()
    }

    /// Number of distinct tuples, saturating at `u128::MAX`.
    pub fn size(&self) -> u128 {
        self.radices
            .iter()
            .try_fold(1u128, |acc, &r| acc.checked_mul(r as u128))
            .unwrap_or(u128::MAX)
    }

    /// Number of distinct tuples as `usize`, or `None` if it does not fit.
    pub fn len(&self) -> Option<usize> {
        usize::try_from(self.size()).ok()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn encode(&self, digits: &[usize]) -> usize {
        debug_assert_eq!(digits.len(), self.radices.len());
        digits
            .iter()
            .zip(&self.radices)
            .fold(0usize, |acc, (&d, &r)| {
                debug_assert!(d < r);
                acc * r + d
            })
    }

    /// Encodes the digits selected by `positions` from `tuple`.
    pub fn encode_selected(&self, tuple: &[usize], positions: impl IntoIterator<Item = usize>) -> usize {
        positions
            .into_iter()
            .zip(&self.radices)
            .fold(0usize, |acc, (p, &r)| acc * r + tuple[p])
    }

    pub fn decode(&self, mut code: usize) -> Vec<usize> {
        let mut out = vec![0; self.radices.len()];
        for (slot, &r) in out.iter_mut().zip(&self.radices).rev() {
            *slot = code % r;
            code /= r;
        }
        out
    }

    /// All tuples in ascending code order.
    pub fn iter(&self) -> TupleIter<'_> {
        TupleIter {
            radices: &self.radices,
            next: Some(vec![0; self.radices.len()]),
        }
    }
}

/// Odometer-style iterator over every tuple of a [`MixedRadix`].
pub struct TupleIter<'a> {
    radices: &'a [usize],
    next: Option<Vec<usize>>,
}

impl Iterator for TupleIter<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut pos = succ.len();
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            succ[pos] += 1;
            if succ[pos] < self.radices[pos] {
                self.next = Some(succ);
                break;
            }
            succ[pos] = 0;
        }
        Some(current)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_radix_has_one_tuple() {
        let r = MixedRadix::new(vec![]);
        assert_eq!(r.size(), 1);
        assert_eq!(r.iter().collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
        assert_eq!(r.encode(&[]), 0);
    }

    #[test]
    fn iteration_matches_encoding() {
        let r = MixedRadix::new(vec![2, 3, 2]);
        let all: Vec<_> = r.iter().collect();
        assert_eq!(all.len(), 12);
        for (code, t) in all.iter().enumerate() {
            assert_eq!(r.encode(t), code);
            assert_eq!(&r.decode(code), t);
        }
        assert_eq!(all[1], vec![0, 0, 1]);
        assert_eq!(all[2], vec![0, 1, 0]);
    }

    #[test]
    fn selected_encoding_follows_position_order() {
        let r = MixedRadix::new(vec![2, 3]);
        let tuple = [1, 0, 2, 1];
        assert_eq!(r.encode_selected(&tuple, [3, 2]), r.encode(&[1, 2]));
    }
}
