use super::word::check_value;
use super::AddressError;

/// Reflected binary Gray code of `b`.
pub fn binary_to_gray(b: u64, width: u32) -> Result<u64, AddressError> {
    check_value(b, width)?;
    Ok(b ^ (b >> 1))
}

/// Inverse of [`binary_to_gray`] (prefix XOR from the top bit down).
pub fn gray_to_binary(g: u64, width: u32) -> Result<u64, AddressError> {
    check_value(g, width)?;
    let mut b = g;
    let mut shift = 1;
    while shift < 64 {
        b ^= b >> shift;
        shift <<= 1;
    }
    Ok(b)
}
