//! Run configuration: TOML file, then command-line overrides.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use shintani_core::groups::{Family, GroupSpec, DEFAULT_MAX_ORDER};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub family: Family,
    pub n: usize,
    pub p: u32,
    pub k: usize,
    pub r: usize,
    /// Largest extension degree tried when merging rational classes.
    pub m_max: usize,
    /// Extension degrees for flag counts.
    pub m_list: Vec<usize>,
    /// Cycle lengths; empty means `1..=n·r`.
    pub z: Vec<usize>,
    pub seed: u64,
    /// Worker cap; `None` uses the available parallelism.
    pub threads: Option<usize>,
    pub out: PathBuf,
    pub xcheck: bool,
    pub max_order: u64,
    pub max_flags: u64,
    pub max_classes: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            family: Family::SL,
            n: 2,
            p: 3,
            k: 1,
            r: 2,
            m_max: 6,
            m_list: vec![1, 2],
            z: Vec::new(),
            seed: 0,
            threads: None,
            out: PathBuf::from("out"),
            xcheck: false,
            max_order: DEFAULT_MAX_ORDER as u64,
            max_flags: 10_000_000,
            max_classes: shintani_core::characters::MAX_CLASSES,
        }
    }
}

/// Command-line flags; every one overrides the config file.
#[derive(Clone, Debug, Default, clap::Args)]
pub struct Overrides {
    /// TOML config file
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub family: Option<Family>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Field size, as an alternative to --p/--k
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub m_max: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub m_list: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    pub z: Option<Vec<usize>>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub xcheck: bool,
    #[arg(long)]
    pub max_order: Option<u64>,
    #[arg(long)]
    pub max_flags: Option<u64>,
    #[arg(long)]
    pub max_classes: Option<usize>,
}

/// `q = p^k` with `p` prime.
pub fn prime_power(q: u64) -> Option<(u32, usize)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut rest, mut k) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1 && p <= u32::MAX as u64).then_some((p as u32, k))
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn resolve(o: &Overrides) -> Result<Self> {
        let mut c = match &o.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        macro_rules! take {
            ($($f:ident),*) => { $(if let Some(v) = &o.$f { c.$f = v.clone(); })* };
        }
        take!(family, n, p, k, r, m_max, m_list, z, seed, out, max_order, max_flags, max_classes);
        if o.threads.is_some() {
            c.threads = o.threads;
        }
        if o.xcheck {
            c.xcheck = true;
        }
        if let Some(q) = o.q {
            let Some((p, k)) = prime_power(q) else { bail!("--q {q} is not a prime power") };
            if o.p.is_some_and(|x| x != p) {
                bail!("--q {q} conflicts with --p {}", o.p.unwrap());
            }
            if o.k.is_some_and(|x| x != k) {
                bail!("--q {q} conflicts with --k {}", o.k.unwrap());
            }
            c.p = p;
            c.k = k;
        }
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.k == 0 || self.r == 0 {
            bail!("n, k and r must be positive");
        }
        if self.m_max == 0 || self.m_list.is_empty() || self.m_list.contains(&0) {
            bail!("extension degrees must be positive");
        }
        if self.z.contains(&0) {
            bail!("cycle lengths must be positive");
        }
        if self.max_order == 0 || self.max_flags == 0 || self.max_classes == 0 {
            bail!("guards must be positive");
        }
        if self.threads == Some(0) {
            bail!("--threads must be positive");
        }
        self.spec()?;
        Ok(())
    }

    pub fn spec(&self) -> Result<GroupSpec> {
        Ok(GroupSpec::new(self.family, self.n, self.p, self.k, self.r)?)
    }

    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.k as u32)
    }

    pub fn z_list(&self) -> Vec<usize> {
        if self.z.is_empty() {
            (1..=self.n * self.r).collect()
        } else {
            self.z.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_round_trip() {
        let mut c = RunConfig { family: Family::GL, z: vec![2, 3], threads: Some(4), xcheck: true, ..RunConfig::default() };
        for _ in 0..2 {
            let text = c.to_toml().unwrap();
            let back: RunConfig = toml::from_str(&text).unwrap();
            assert_eq!(back, c);
            assert_eq!(back.to_toml().unwrap(), text);
            c.threads = None;
        }
    }

    #[test]
    fn q_splits_into_p_and_k() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
        let o = Overrides { q: Some(4), ..Overrides::default() };
        let c = RunConfig::resolve(&o).unwrap();
        assert_eq!((c.p, c.k), (2, 2));
        let bad = Overrides { q: Some(4), k: Some(0), ..Overrides::default() };
        assert!(RunConfig::resolve(&bad).is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "family = \"gl\"\nn = 3\np = 2\nseed = 5\n").unwrap();
        let o = Overrides { config: Some(path), seed: Some(9), ..Overrides::default() };
        let c = RunConfig::resolve(&o).unwrap();
        assert_eq!((c.family, c.n, c.p, c.seed), (Family::GL, 3, 2, 9));
        assert_eq!(c.r, RunConfig::default().r);
    }

    #[test]
    fn rejects_bad_values() {
        for o in [
            Overrides { p: Some(4), ..Overrides::default() },
            Overrides { n: Some(0), ..Overrides::default() },
            Overrides { m_list: Some(vec![0]), ..Overrides::default() },
            Overrides { max_order: Some(0), ..Overrides::default() },
        ] {
            assert!(RunConfig::resolve(&o).is_err());
        }
    }
}
