//! Corpus files: one instance per line, `<group spec> | <expression>`.
//!
//! Blank lines and `#` comments are ignored. Table files named by
//! `finite:` specs resolve relative to the corpus directory.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use hypersack::groups::{ConstantsConfig, Group};
use hypersack::knapsack::KnapsackExpression;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Default seed for generated instances.
pub const DEFAULT_SEED: u64 = 20240607;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    /// `file:line` for messages.
    pub origin: String,
    pub group: String,
    pub expr: String,
}

#[derive(Clone, Debug)]
pub struct Corpus {
    pub dir: PathBuf,
    pub instances: Vec<Instance>,
}

impl Instance {
    pub fn load(&self, dir: &Path, config: ConstantsConfig) -> Result<(Group, KnapsackExpression)> {
        let group = Group::parse(&self.group, dir, config).with_context(|| format!("{}: group `{}`", self.origin, self.group))?;
        let expr = KnapsackExpression::parse(&group, &self.expr)
            .with_context(|| format!("{}: expression `{}`", self.origin, self.expr))?;
        Ok((group, expr))
    }
}

/// Parses corpus text; `name` labels origins.
pub fn parse(name: &str, text: &str) -> Result<Vec<Instance>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((group, expr)) = line.split_once('|') else {
            bail!("{name}:{}: expected `<group> | <expression>`", i + 1);
        };
        out.push(Instance {
            origin: format!("{name}:{}", i + 1),
            group: group.trim().to_owned(),
            expr: expr.trim().to_owned(),
        });
    }
    Ok(out)
}

/// Loads every `*.txt` file directly inside `dir`, in name order.
pub fn load(dir: &Path) -> Result<Corpus> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading corpus directory {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "txt"))
        .collect();
    files.sort();
    let mut instances = Vec::new();
    for f in files {
        let text = fs::read_to_string(&f).with_context(|| format!("reading {}", f.display()))?;
        let name = f.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        instances.extend(parse(&name, &text)?);
    }
    Ok(Corpus {
        dir: dir.to_path_buf(),
        instances,
    })
}

/// `n` seeded random instances over `group` (a spec understood without
/// table files), depth ≤ `max_depth`, `|E|` ≤ `max_size`. Half of them have
/// a planted solution with exponents in `[0, 3]`.
pub fn generate(group_text: &str, n: usize, seed: u64, max_depth: usize, max_size: usize) -> Result<Vec<Instance>> {
    let group = Group::parse(group_text, Path::new("."), ConstantsConfig::default())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let letters = group.alphabet_size();
    let word = |rng: &mut ChaCha8Rng, lo: usize, hi: usize| {
        let len = rng.gen_range(lo..=hi);
        let w: Vec<u16> = (0..len).map(|_| rng.gen_range(0..letters) as u16).collect();
        group.shlex(&w)
    };
    let mut out = Vec::with_capacity(n);
    let mut attempts = 0;
    while out.len() < n {
        attempts += 1;
        if attempts > 1000 * (n + 1) {
            bail!("could not generate {n} instances over {group_text} within |E| ≤ {max_size}");
        }
        let k = rng.gen_range(1..=max_depth);
        let mut e = hypersack::knapsack::ExponentExpression::default();
        for i in 0..k {
            let u = word(&mut rng, 1, 3);
            if u.is_empty() {
                continue;
            }
            let v = word(&mut rng, 0, 3);
            e.factors.push(hypersack::knapsack::Factor {
                u,
                var: format!("x{}", i + 1),
                v,
            });
        }
        if e.factors.len() != k {
            continue;
        }
        if out.len() % 2 == 1 {
            let nu = e.variables().into_iter().map(|x| (x, rng.gen_range(0..=3u64))).collect();
            let value = group.shlex(&e.substitute(&nu)?);
            let last = e.factors.last_mut().expect("k ≥ 1");
            last.v.extend(group.inverse_word(&value));
            last.v = group.shlex(&last.v);
        }
        if e.size() > max_size {
            continue;
        }
        out.push(Instance {
            origin: format!("generated:{}", out.len() + 1),
            group: group_text.to_owned(),
            expr: e.display(&group),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lines_and_comments() {
        let text = "# header\nF2 | a^x a^-5\n\n(F2) x Z | [a t]^x  # trailing\n";
        let got = parse("c.txt", text).unwrap();
        assert_eq!(got.len(), 2);
        assert_eq!(got[1].origin, "c.txt:4");
        assert_eq!(got[1].group, "(F2) x Z");
        assert_eq!(got[1].expr, "[a t]^x");
        assert!(parse("c.txt", "F2 a^x").is_err());
    }

    #[test]
    fn generation_is_seeded_and_parses_back() {
        let a = generate("F2", 20, 5, 3, 12).unwrap();
        assert_eq!(a, generate("F2", 20, 5, 3, 12).unwrap());
        assert_ne!(a, generate("F2", 20, 6, 3, 12).unwrap());
        for inst in &a {
            let (_, e) = inst.load(Path::new("."), ConstantsConfig::default()).unwrap();
            assert!(e.size() <= 12 && e.depth() <= 3);
        }
    }
}
