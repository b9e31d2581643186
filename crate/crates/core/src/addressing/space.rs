use std::collections::{BTreeSet, HashMap};

use rand::Rng;

use super::word::{check_width, null_word};
use super::AddressError;
use crate::avl::NodeId;

/// Occupancy of one pointer-width address space.
///
/// Free values below `scan` are kept in an ordered spare queue; everything at
/// or above `scan` that is not occupied is implicitly free. The null pattern
/// is never handed out.
#[derive(Debug, Clone)]
pub struct AddressSpace {
    width: u32,
    occupancy: HashMap<u64, NodeId>,
    spare: BTreeSet<u64>,
    scan: u64,
    next_linear: u64,
}

impl AddressSpace {
    pub fn new(width: u32) -> Result<Self, AddressError> {
        check_width(width)?;
        Ok(AddressSpace {
            width,
            occupancy: HashMap::new(),
            spare: BTreeSet::new(),
            scan: 0,
            next_linear: 0,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn null(&self) -> u64 {
        null_word(self.width)
    }

    /// Number of values that may be handed out (everything except null).
    pub fn usable(&self) -> u64 {
        null_word(self.width)
    }

    pub fn occupied_count(&self) -> usize {
        self.occupancy.len()
    }

    pub fn owner(&self, value: u64) -> Option<NodeId> {
        self.occupancy.get(&value).copied()
    }

    pub fn next_linear(&self) -> u64 {
        self.next_linear
    }

    pub fn is_available(&self, value: u64) -> bool {
        value < self.null() && !self.occupancy.contains_key(&value)
    }

    /// Marks `value` as owned by `node`.
    pub fn claim(&mut self, value: u64, node: NodeId) -> Result<(), AddressError> {
        if value > self.null() {
            return Err(AddressError::OutOfRange {
                value,
                width: self.width,
            });
        }
        if !self.is_available(value) {
            return Err(AddressError::Occupied(value));
        }
        self.occupancy.insert(value, node);
        if value < self.scan {
            self.spare.remove(&value);
        }
        Ok(())
    }

    pub fn release(&mut self, value: u64) -> Option<NodeId> {
        let owner = self.occupancy.remove(&value)?;
        if value < self.scan {
            self.spare.insert(value);
        }
        Some(owner)
    }

    /// Lowest free value, claimed for `node`.
    pub fn allocate_from_spare_queue(&mut self, node: NodeId) -> Result<u64, AddressError> {
        let value = match self.spare.pop_first() {
            Some(v) => v,
            None => {
                while self.scan < self.null() && self.occupancy.contains_key(&self.scan) {
                    self.scan += 1;
                }
                if self.scan >= self.null() {
                    return Err(AddressError::CapacityExhausted { width: self.width });
                }
                self.scan += 1;
                self.scan - 1
            }
        };
        self.occupancy.insert(value, node);
        Ok(value)
    }

    /// Next value of the linear counter, skipping anything already taken.
    pub fn allocate_linear(&mut self, node: NodeId) -> Result<u64, AddressError> {
        while self.next_linear < self.null() && !self.is_available(self.next_linear) {
            self.next_linear += 1;
        }
        if self.next_linear >= self.null() {
            return Err(AddressError::CapacityExhausted { width: self.width });
        }
        let value = self.next_linear;
        self.next_linear += 1;
        self.claim(value, node)?;
        Ok(value)
    }

    /// Uniform draw from the free, non-null values.
    pub fn allocate_random<R: Rng + ?Sized>(&mut self, node: NodeId, rng: &mut R) -> Result<u64, AddressError> {
        let usable = self.usable();
        let free = usable - self.occupancy.len() as u64;
        if free == 0 {
            return Err(AddressError::CapacityExhausted { width: self.width });
        }
        let value = if free * 2 >= usable {
            loop {
                let v = rng.gen_range(0..usable);
                if !self.occupancy.contains_key(&v) {
                    break v;
                }
            }
        } else {
            let pick = rng.gen_range(0..free);
            (0..usable)
                .filter(|v| !self.occupancy.contains_key(v))
                .nth(pick as usize)
                .expect("free count is consistent")
        };
        self.claim(value, node)?;
        Ok(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn n(i: usize) -> NodeId {
        NodeId::from_index(i)
    }

    #[test]
    fn spare_queue_lowest_free() {
        let mut s = AddressSpace::new(8).unwrap();
        assert_eq!(s.allocate_from_spare_queue(n(0)).unwrap(), 0);
        let mut s = AddressSpace::new(8).unwrap();
        s.claim(0, n(0)).unwrap();
        s.claim(1, n(1)).unwrap();
        assert_eq!(s.allocate_from_spare_queue(n(2)).unwrap(), 2);
    }

    #[test]
    fn spare_queue_exhaustion() {
        let mut s = AddressSpace::new(3).unwrap();
        for v in 0..7 {
            s.claim(v, n(v as usize)).unwrap();
        }
        assert_eq!(
            s.allocate_from_spare_queue(n(9)).unwrap_err(),
            AddressError::CapacityExhausted { width: 3 }
        );
        assert_eq!(s.claim(7, n(9)).unwrap_err(), AddressError::Occupied(7));
    }

    #[test]
    fn released_values_are_reused_lowest_first() {
        let mut s = AddressSpace::new(4).unwrap();
        for i in 0..5 {
            assert_eq!(s.allocate_from_spare_queue(n(i)).unwrap(), i as u64);
        }
        s.release(3);
        s.release(1);
        assert_eq!(s.allocate_from_spare_queue(n(7)).unwrap(), 1);
        assert_eq!(s.allocate_from_spare_queue(n(8)).unwrap(), 3);
        assert_eq!(s.allocate_from_spare_queue(n(9)).unwrap(), 5);
    }

    #[test]
    fn claim_removes_from_spare_queue() {
        let mut s = AddressSpace::new(4).unwrap();
        for i in 0..3 {
            s.allocate_from_spare_queue(n(i)).unwrap();
        }
        s.release(0);
        s.claim(0, n(5)).unwrap();
        assert_eq!(s.allocate_from_spare_queue(n(6)).unwrap(), 3);
    }

    #[test]
    fn linear_counter_skips_taken_values() {
        let mut s = AddressSpace::new(4).unwrap();
        s.claim(1, n(0)).unwrap();
        assert_eq!(s.allocate_linear(n(1)).unwrap(), 0);
        assert_eq!(s.allocate_linear(n(2)).unwrap(), 2);
        s.release(0);
        // the counter never goes back
        assert_eq!(s.allocate_linear(n(3)).unwrap(), 3);
        assert_eq!(s.next_linear(), 4);
    }

    #[test]
    fn random_fills_entire_space() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut s = AddressSpace::new(4).unwrap();
        let mut got: Vec<u64> = (0..15).map(|i| s.allocate_random(n(i), &mut rng).unwrap()).collect();
        got.sort();
        assert_eq!(got, (0..15).collect::<Vec<_>>());
        assert!(s.allocate_random(n(99), &mut rng).is_err());
    }
}
