use std::fmt;

use serde::{Deserialize, Serialize};

use super::AddressError;

/// Widest supported pointer word.
pub const MAX_WIDTH: u32 = 63;

pub(crate) fn check_width(width: u32) -> Result<(), AddressError> {
    if (1..=MAX_WIDTH).contains(&width) {
        Ok(())
    } else {
        Err(AddressError::InvalidWidth(width))
    }
}

pub(crate) fn check_value(value: u64, width: u32) -> Result<(), AddressError> {
    check_width(width)?;
    if value >> width == 0 {
        Ok(())
    } else {
        Err(AddressError::OutOfRange { value, width })
    }
}

/// The reserved null pointer pattern: all ones.
pub fn null_word(width: u32) -> u64 {
    (1u64 << width) - 1
}

/// Fixed-width unsigned bit pattern stored in a pointer field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AddressWord {
    value: u64,
    width: u32,
}

impl AddressWord {
    pub fn new(value: u64, width: u32) -> Result<Self, AddressError> {
        check_value(value, width)?;
        Ok(AddressWord { value, width })
    }

    pub fn null(width: u32) -> Result<Self, AddressError> {
        check_width(width)?;
        Ok(AddressWord {
            value: null_word(width),
            width,
        })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn is_null(&self) -> bool {
        self.value == null_word(self.width)
    }
}

impl fmt::Display for AddressWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:0w$b}", self.value, w = self.width as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_checks() {
        assert!(AddressWord::new(255, 8).is_ok());
        assert_eq!(
            AddressWord::new(256, 8).unwrap_err(),
            AddressError::OutOfRange { value: 256, width: 8 }
        );
        assert_eq!(AddressWord::new(0, 0).unwrap_err(), AddressError::InvalidWidth(0));
        assert_eq!(AddressWord::new(0, 64).unwrap_err(), AddressError::InvalidWidth(64));
    }

    #[test]
    fn null_is_all_ones() {
        let n = AddressWord::null(5).unwrap();
        assert_eq!(n.value(), 31);
        assert!(n.is_null());
        assert_eq!(n.to_string(), "11111");
        assert_eq!(null_word(MAX_WIDTH), u64::MAX >> 1);
    }
}
