use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use repstab_core::algebra::Family;

use crate::CliError;

/// A nonempty, increasing list of integers written as `3:8`, `4` or `3:5,8`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntRange(Vec<usize>);

impl IntRange {
    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn first(&self) -> usize {
        self.0[0]
    }

    pub fn last(&self) -> usize {
        *self.0.last().expect("ranges are nonempty")
    }

    /// Whether the values form one contiguous run.
    pub fn is_contiguous(&self) -> bool {
        self.0.windows(2).all(|w| w[1] == w[0] + 1)
    }
}

impl FromStr for IntRange {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = |why: &str| CliError::Usage(format!("bad range {s:?}: {why}"));
        let mut out = Vec::new();
        for piece in s.split(',') {
            let piece = piece.trim();
            let (lo, hi) = match piece.split_once(':') {
                Some((a, b)) => (a.trim(), b.trim()),
                None => (piece, piece),
            };
            let lo: usize = lo.parse().map_err(|_| bad("expected nonnegative integers"))?;
            let hi: usize = hi.parse().map_err(|_| bad("expected nonnegative integers"))?;
            if lo > hi {
                return Err(bad("lower end exceeds upper end"));
            }
            out.extend(lo..=hi);
        }
        out.sort_unstable();
        out.dedup();
        if out.is_empty() {
            return Err(bad("empty"));
        }
        Ok(IntRange(out))
    }
}

impl fmt::Display for IntRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_contiguous() {
            write!(f, "{}:{}", self.first(), self.last())
        } else {
            let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

/// One family, a comma list, or `all`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Families(pub Vec<Family>);

impl FromStr for Families {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        if s.trim().eq_ignore_ascii_case("all") {
            return Ok(Families(Family::ALL.to_vec()));
        }
        let mut out = Vec::new();
        for name in s.split(',') {
            let f: Family = name.parse().map_err(|e: repstab_core::Error| CliError::Usage(e.to_string()))?;
            if !out.contains(&f) {
                out.push(f);
            }
        }
        Ok(Families(out))
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Emit {
    Dim,
    Character,
    Decomposition,
    All,
}

impl Emit {
    pub fn character(self) -> bool {
        matches!(self, Emit::Character | Emit::All)
    }

    pub fn decomposition(self) -> bool {
        matches!(self, Emit::Decomposition | Emit::All)
    }
}

/// Settings shared by every command.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub format: Format,
    pub cache_dir: Option<PathBuf>,
    pub jobs: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!("3:8".parse::<IntRange>().unwrap().values(), &[3, 4, 5, 6, 7, 8]);
        assert_eq!("4".parse::<IntRange>().unwrap().values(), &[4]);
        assert_eq!("3:4,7".parse::<IntRange>().unwrap().values(), &[3, 4, 7]);
        assert_eq!("3:4,7".parse::<IntRange>().unwrap().to_string(), "3,4,7");
        assert!("5:3".parse::<IntRange>().is_err());
        assert!("a".parse::<IntRange>().is_err());
    }

    #[test]
    fn families() {
        assert_eq!("all".parse::<Families>().unwrap().0.len(), 6);
        assert_eq!("mbar,pvb".parse::<Families>().unwrap().0, vec![Family::Mbar, Family::Pvb]);
        assert!("cactus".parse::<Families>().is_err());
    }
}
