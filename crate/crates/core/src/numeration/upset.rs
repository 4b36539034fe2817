use std::fmt;
use std::str::FromStr;

use crate::arith::{divisors, gcd};
use crate::error::{Error, Result};

/// An ultimately periodic set of naturals in canonical form
/// `I xor (R + pN)`: `p` is the smallest eventual period, `R` the residues of
/// the periodic part, and `I` the finite set of exceptions.
///
/// Two `UpSet`s are equal exactly when they denote the same set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UpSet {
    period: u64,
    remainders: Vec<bool>,
    mismatches: Vec<u64>,
}

/// Membership of `0..prefix.len()` followed by one repetition of the cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacteristicProfile {
    prefix: Vec<bool>,
    cycle: Vec<bool>,
}

impl CharacteristicProfile {
    pub fn new(prefix: Vec<bool>, cycle: Vec<bool>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::PreconditionViolated(
                "cycle must not be empty".into(),
            ));
        }
        Ok(CharacteristicProfile { prefix, cycle })
    }

    /// Samples `member` on `0..preperiod + period`.
    pub fn sample(
        preperiod: usize,
        period: usize,
        mut member: impl FnMut(u64) -> bool,
    ) -> Result<Self> {
        let prefix = (0..preperiod as u64).map(&mut member).collect();
        let cycle = (preperiod as u64..(preperiod + period) as u64)
            .map(&mut member)
            .collect();
        Self::new(prefix, cycle)
    }

    pub fn prefix(&self) -> &[bool] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[bool] {
        &self.cycle
    }
}

/// Smallest `d` dividing `bits.len()` such that `bits` is invariant under a
/// cyclic shift by `d`.
pub fn minimal_period(bits: &[bool]) -> usize {
    let n = bits.len();
    if n == 0 {
        return 1;
    }
    divisors(n as u64)
        .into_iter()
        .map(|d| d as usize)
        .find(|&d| (d..n).all(|i| bits[i] == bits[i - d]))
        .unwrap_or(n)
}

/// Canonical form of the set described by a characteristic profile.
pub fn canonicalize(profile: &CharacteristicProfile) -> UpSet {
    let cycle = profile.cycle();
    let offset = profile.prefix().len();
    let p = minimal_period(cycle);
    // n >= offset with n = r (mod p) sits at cycle index (r - offset) mod p.
    let shift = p - offset % p;
    let remainders: Vec<bool> = (0..p).map(|r| cycle[(r + shift) % p]).collect();
    let mismatches = profile
        .prefix()
        .iter()
        .enumerate()
        .filter(|&(n, &bit)| bit != remainders[n % p])
        .map(|(n, _)| n as u64)
        .collect();
    UpSet {
        period: p as u64,
        remainders,
        mismatches,
    }
}

impl UpSet {
    /// Builds a set from a canonical triple; fails with `NotCanonical` when
    /// `R` does not fit in `[0, p)` or `p` is not the minimal period of
    /// `R + pN`. Mismatches may be given in any order; duplicates are an error.
    pub fn new(
        period: u64,
        remainders: impl IntoIterator<Item = u64>,
        mismatches: impl IntoIterator<Item = u64>,
    ) -> Result<UpSet> {
        let periodic = Self::purely_periodic(period, remainders)?;
        let mut mismatches: Vec<u64> = mismatches.into_iter().collect();
        mismatches.sort_unstable();
        if mismatches.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::NotCanonical("duplicate mismatch".into()));
        }
        Ok(UpSet {
            mismatches,
            ..periodic
        })
    }

    /// `R + pN` with `(p, R)` canonical.
    pub fn purely_periodic(
        period: u64,
        remainders: impl IntoIterator<Item = u64>,
    ) -> Result<UpSet> {
        if period == 0 {
            return Err(Error::NotCanonical("period must be positive".into()));
        }
        let mut bits = vec![false; period as usize];
        for r in remainders {
            if r >= period {
                return Err(Error::NotCanonical(format!(
                    "remainder {r} not below period {period}"
                )));
            }
            bits[r as usize] = true;
        }
        let minimal = minimal_period(&bits);
        if minimal as u64 != period {
            return Err(Error::NotCanonical(format!(
                "period {period} is not minimal, {minimal} also works"
            )));
        }
        Ok(UpSet {
            period,
            remainders: bits,
            mismatches: Vec::new(),
        })
    }

    /// `R + pN` for an arbitrary `(p, R)`, reduced to its minimal period.
    pub(crate) fn from_periodic_bits(bits: Vec<bool>) -> UpSet {
        let p = minimal_period(&bits);
        let mut remainders = bits;
        remainders.truncate(p);
        UpSet {
            period: p as u64,
            remainders,
            mismatches: Vec::new(),
        }
    }

    /// A finite set.
    pub fn finite(elements: impl IntoIterator<Item = u64>) -> Result<UpSet> {
        Self::new(1, [], elements)
    }

    pub fn empty() -> UpSet {
        UpSet {
            period: 1,
            remainders: vec![false],
            mismatches: Vec::new(),
        }
    }

    pub fn naturals() -> UpSet {
        UpSet {
            period: 1,
            remainders: vec![true],
            mismatches: Vec::new(),
        }
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn remainders(&self) -> impl Iterator<Item = u64> + '_ {
        self.remainders
            .iter()
            .enumerate()
            .filter_map(|(r, &x)| x.then_some(r as u64))
    }

    pub fn remainder_bits(&self) -> &[bool] {
        &self.remainders
    }

    pub fn mismatches(&self) -> &[u64] {
        &self.mismatches
    }

    /// `max(I) + 1`, or 0 when `I` is empty.
    pub fn preperiod(&self) -> u64 {
        self.mismatches.last().map_or(0, |&m| m + 1)
    }

    pub fn is_purely_periodic(&self) -> bool {
        self.mismatches.is_empty()
    }

    /// The periodic part `R + pN`.
    pub fn periodic_part(&self) -> UpSet {
        UpSet {
            mismatches: Vec::new(),
            ..self.clone()
        }
    }

    pub fn contains(&self, n: u64) -> bool {
        self.mismatches.binary_search(&n).is_ok() ^ self.remainders[(n % self.period) as usize]
    }

    /// `{n : n * base + digit in self}`, in canonical form.
    pub fn delta(&self, digit: u32, base: u32) -> Result<UpSet> {
        if digit >= base {
            return Err(Error::BadDigit { digit, base });
        }
        let (a, b) = (digit as u64, base as u64);
        let p = self.period;
        let reduced = p / gcd(p, b);
        let bits = (0..reduced)
            .map(|n| self.remainders[((n * b + a) % p) as usize])
            .collect();
        let mut out = Self::from_periodic_bits(bits);
        out.mismatches = self
            .mismatches
            .iter()
            .filter(|&&i| i >= a && (i - a) % b == 0)
            .map(|&i| (i - a) / b)
            .collect();
        Ok(out)
    }

    /// Left fold of [`delta`](Self::delta) over an LSDF word.
    pub fn delta_word(&self, word: &[u32], base: u32) -> Result<UpSet> {
        word.iter().try_fold(self.clone(), |s, &a| s.delta(a, base))
    }

    /// Symmetric difference with a finite set.
    pub fn toggle(&self, elements: impl IntoIterator<Item = u64>) -> UpSet {
        let mut out = self.clone();
        for e in elements {
            match out.mismatches.binary_search(&e) {
                Ok(i) => {
                    out.mismatches.remove(i);
                }
                Err(i) => out.mismatches.insert(i, e),
            }
        }
        out
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, items: impl Iterator<Item = u64>) -> fmt::Result {
    let mut any = false;
    for (i, x) in items.enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
        any = true;
    }
    if !any {
        f.write_str("-")?;
    }
    Ok(())
}

impl fmt::Display for UpSet {
    /// `p=<int> R=<list> I=<list>`, with `-` for an empty list.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} R=", self.period)?;
        write_list(f, self.remainders())?;
        f.write_str(" I=")?;
        write_list(f, self.mismatches.iter().copied())
    }
}

pub(crate) fn parse_list(text: &str) -> Result<Vec<u64>, String> {
    if text == "-" || text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|x| {
            x.trim()
                .parse::<u64>()
                .map_err(|e| format!("bad integer {x:?}: {e}"))
        })
        .collect()
}

impl FromStr for UpSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<UpSet> {
        let bad = |message: String| Error::Parse { line: 1, message };
        let (mut p, mut r, mut i) = (None, None, None);
        for token in s.split_whitespace() {
            let (key, val) = token
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got {token:?}")))?;
            match key {
                "p" => {
                    p = Some(
                        val.parse::<u64>()
                            .map_err(|e| bad(format!("bad period: {e}")))?,
                    )
                }
                "R" => r = Some(parse_list(val).map_err(bad)?),
                "I" => i = Some(parse_list(val).map_err(bad)?),
                other => return Err(bad(format!("unknown key {other:?}"))),
            }
        }
        let p = p.ok_or_else(|| bad("missing p=".into()))?;
        UpSet::new(p, r.unwrap_or_default(), i.unwrap_or_default())
    }
}
