//! Rational frequency lists: Farey sequences and continued-fraction convergents.

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Reduced fractions strictly between 0 and 1 with denominator at most `n`,
/// in increasing order.
pub fn farey(n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    // Standard next-term recurrence starting from 0/1, 1/n.
    let (mut a, mut b, mut c, mut d) = (0u64, 1u64, 1u64, n);
    while c < d {
        out.push((c, d));
        let k = (n + b) / d;
        let (nc, nd) = (k * c - a, k * d - b);
        a = c;
        b = d;
        c = nc;
        d = nd;
    }
    out
}

/// Parses an α list: `farey:N`, `convergents:p/q,p/q,...`, or a plain
/// comma-separated list of fractions.
pub fn parse_alpha_list(list: &str) -> Result<Vec<(u64, u64)>> {
    let list = list.trim();
    if let Some(n) = list.strip_prefix("farey:") {
        let n: u64 = n
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad Farey order '{n}'")))?;
        return Ok(farey(n));
    }
    let body = list.strip_prefix("convergents:").unwrap_or(list);
    body.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(parse_fraction)
        .collect()
}

/// Parses `p/q` and checks `q ≥ 1` and `gcd(p, q) = 1`.
pub fn parse_fraction(s: &str) -> Result<(u64, u64)> {
    let s = s.trim();
    let (p, q) = s
        .split_once('/')
        .ok_or_else(|| Error::InvalidArgument(format!("expected p/q, got '{s}'")))?;
    let p: u64 = p
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("bad numerator in '{s}'")))?;
    let q: u64 = q
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("bad denominator in '{s}'")))?;
    check_coprime(p, q)?;
    Ok((p, q))
}

pub fn check_coprime(p: u64, q: u64) -> Result<()> {
    if q == 0 || p == 0 || gcd(p, q) != 1 {
        return Err(Error::NotCoprime { p, q });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn farey_five() {
        let f = farey(5);
        assert_eq!(f.len(), 9);
        assert_eq!(f[0], (1, 5));
        assert_eq!(f[4], (1, 2));
        assert_eq!(f[8], (4, 5));
        for w in f.windows(2) {
            assert!(w[0].0 * w[1].1 < w[1].0 * w[0].1);
        }
    }

    #[test]
    fn parses_lists() {
        assert_eq!(parse_alpha_list("farey:3").unwrap(), vec![(1, 3), (1, 2), (2, 3)]);
        assert_eq!(
            parse_alpha_list("convergents:2/3,3/5").unwrap(),
            vec![(2, 3), (3, 5)]
        );
        assert_eq!(parse_alpha_list("1/2").unwrap(), vec![(1, 2)]);
        assert!(parse_alpha_list("2/4").is_err());
        assert!(parse_alpha_list("farey:x").is_err());
    }
}
