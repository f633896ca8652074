//! Enumeration of `G^n`.
//!
//! A tuple `x = (x₀, …, x_{n−1})` is stored at index `Σ x_d · |G|^d`, so
//! coordinate 0 varies fastest.

use crate::error::{Error, Result};
use crate::group::{Elem, Tuple};

/// Default cap on the number of points of any domain that gets enumerated.
pub const ENUMERATION_CAP: u128 = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Domain {
    pub order: usize,
    pub arity: usize,
}

impl Domain {
    pub fn new(order: usize, arity: usize) -> Self {
        Self { order, arity }
    }

    pub fn size_u128(&self) -> u128 {
        (self.order as u128).saturating_pow(self.arity as u32)
    }

    /// Number of points, or `DomainTooLarge` above `cap`.
    pub fn checked_size(&self, cap: u128) -> Result<usize> {
        let size = self.size_u128();
        if size > cap {
            return Err(Error::DomainTooLarge { size, cap });
        }
        Ok(size as usize)
    }

    pub fn index_of(&self, x: &[Elem]) -> usize {
        x.iter().rev().fold(0, |acc, e| acc * self.order + e.index())
    }

    pub fn tuple_at(&self, mut index: usize) -> Tuple {
        (0..self.arity)
            .map(|_| {
                let e = Elem((index % self.order) as u8);
                index /= self.order;
                e
            })
            .collect()
    }

    /// Visits every tuple in index order.
    pub fn for_each(&self, cap: u128, mut f: impl FnMut(usize, &[Elem])) -> Result<()> {
        let size = self.checked_size(cap)?;
        let mut x = vec![Elem(0); self.arity];
        for idx in 0..size {
            f(idx, &x);
            for slot in x.iter_mut() {
                if slot.index() + 1 < self.order {
                    slot.0 += 1;
                    break;
                }
                slot.0 = 0;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_and_tuple_agree() {
        let d = Domain::new(3, 4);
        let mut count = 0;
        d.for_each(ENUMERATION_CAP, |idx, x| {
            assert_eq!(d.index_of(x), idx);
            assert_eq!(d.tuple_at(idx), x);
            count += 1;
        })
        .unwrap();
        assert_eq!(count, 81);
    }

    #[test]
    fn cap_is_enforced() {
        let d = Domain::new(6, 20);
        assert!(matches!(d.checked_size(1 << 20), Err(Error::DomainTooLarge { .. })));
    }
}
