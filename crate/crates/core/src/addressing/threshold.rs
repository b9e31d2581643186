use num_rational::Ratio as Rational;

use super::AddressError;

/// Exact threshold ratio.
pub type Ratio = Rational<u32>;

/// `⌈log2(num_nodes + 1)⌉`, computed exactly: the bit length of `num_nodes`.
pub fn tree_height_estimate(num_nodes: u64) -> Result<u32, AddressError> {
    if num_nodes < 1 {
        return Err(AddressError::InvalidArgument("num_nodes must be at least 1".into()));
    }
    Ok(64 - num_nodes.leading_zeros())
}

/// `max(1, round(height * ratio))`, rounding halves away from zero.
pub fn threshold_from_ratio(height: u32, ratio: Ratio) -> Result<u32, AddressError> {
    if height < 1 {
        return Err(AddressError::InvalidArgument("height must be at least 1".into()));
    }
    if *ratio.numer() == 0 || ratio > Ratio::from_integer(1) {
        return Err(AddressError::InvalidArgument(format!("ratio {ratio} outside (0, 1]")));
    }
    let num = u64::from(height) * u64::from(*ratio.numer());
    let den = u64::from(*ratio.denom());
    let rounded = (2 * num + den) / (2 * den);
    Ok((rounded as u32).max(1))
}

/// Parses `0.25`, `1/4`, or `1`.
pub fn parse_ratio(s: &str) -> Result<Ratio, AddressError> {
    let bad = || AddressError::InvalidArgument(format!("cannot parse ratio {s:?}"));
    let s = s.trim();
    let ratio = if let Some((n, d)) = s.split_once('/') {
        let n: u32 = n.trim().parse().map_err(|_| bad())?;
        let d: u32 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(bad());
        }
        Ratio::new(n, d)
    } else {
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 9 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let int: u32 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let den = 10u32.pow(frac.len() as u32);
        let frac: u32 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| bad())?
        };
        let num = int.checked_mul(den).and_then(|v| v.checked_add(frac)).ok_or_else(bad)?;
        Ratio::new(num, den)
    };
    if *ratio.numer() == 0 || ratio > Ratio::from_integer(1) {
        return Err(AddressError::InvalidArgument(format!("ratio {s} outside (0, 1]")));
    }
    Ok(ratio)
}

/// Level boundary between the linear and DFAT-Gray regions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Threshold {
    /// Tree-height estimate for the planned node count.
    pub height: u32,
    /// Nodes on levels `<= level` receive linear addresses.
    pub level: u32,
}

impl Threshold {
    pub fn for_nodes(num_nodes: u64, ratio: Ratio) -> Result<Self, AddressError> {
        let height = tree_height_estimate(num_nodes)?;
        Ok(Threshold {
            height,
            level: threshold_from_ratio(height, ratio)?,
        })
    }
}
