use std::fmt;

use serde::{Deserialize, Serialize};

use super::RainbowError;
use crate::config;

/// How red triangles are judged.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RedRule {
    /// Reds `r_{jk}` with `j < k`; a red triangle needs one superscript and
    /// subscripts of the form `{jk, kl, jl}`.
    Pattern,
    /// Reds carry an index per endpoint; a red triangle needs one superscript
    /// and each node to carry a single index.
    Ordered,
}

/// When a triangle `(g_0^t, g_0^u, w_0)` is forbidden.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TintWhite {
    /// Only for `t ≠ u`.
    Distinct,
    /// For every `t, u`.
    Any,
}

/// The colour names available to coloured graphs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Palette {
    pub n: usize,
    /// The value of `g_0^t` for each tint index `t`, used by the order constraint.
    pub tints: Vec<i32>,
    pub red_indices: usize,
    pub red_superscripts: usize,
    pub red_rule: RedRule,
    /// Whether the greens `g_i`, `1 ≤ i ≤ n−2`, are present.
    #[serde(default = "yes")]
    pub side_greens: bool,
}

fn yes() -> bool {
    true
}

/// The forbidden-triangle table on top of the fixed green and red rules.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub tint_white: TintWhite,
    /// Two tints meeting at a node force the red opposite them to respect
    /// the order of the tint values. Needs ordered reds.
    pub tint_order: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Preset {
    pub name: String,
    pub palette: Palette,
    pub table: Table,
}

/// A binary colour. `Red` stores the index at the lower endpoint of the
/// edge in `j` and the other in `k`; under `RedRule::Pattern`, `j < k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Colour {
    /// `g_i`, `1 ≤ i ≤ n−2`.
    Green(u8),
    /// `g_0^t` by tint index.
    Tint(u8),
    /// `w_i`, `i < n−1`.
    White(u8),
    Red { sup: u8, j: u8, k: u8 },
    /// The shade of red `ρ`, outside the atoms.
    Shade,
}

impl Colour {
    pub fn is_green(self) -> bool {
        matches!(self, Colour::Green(_) | Colour::Tint(_))
    }

    pub fn is_red(self) -> bool {
        matches!(self, Colour::Red { .. })
    }

    /// The colour read from the other end of the edge.
    pub fn converse(self, rule: RedRule) -> Colour {
        match (self, rule) {
            (Colour::Red { sup, j, k }, RedRule::Ordered) => Colour::Red { sup, j: k, k: j },
            _ => self,
        }
    }
}

impl fmt::Display for Colour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Colour::Green(i) => write!(f, "g{i}"),
            Colour::Tint(t) => write!(f, "g0^{t}"),
            Colour::White(i) => write!(f, "w{i}"),
            Colour::Red { sup, j, k } => write!(f, "r^{sup}_{j}{k}"),
            Colour::Shade => write!(f, "rho"),
        }
    }
}

impl Palette {
    pub fn validate(&self) -> Result<(), RainbowError> {
        let bad = |m: &str| Err(RainbowError::InvalidPreset(m.to_string()));
        if !(3..=4).contains(&self.n) {
            return bad("dimension must be 3 or 4");
        }
        if self.tints.len() > 32 {
            return bad("at most 32 tints");
        }
        let mut sorted = self.tints.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != self.tints.len() {
            return bad("tint values must be distinct");
        }
        if self.red_indices > 255 || self.red_superscripts > 255 {
            return bad("too many reds");
        }
        Ok(())
    }

    pub fn greens(&self) -> impl Iterator<Item = Colour> + '_ {
        let side = if self.side_greens { self.n - 1 } else { 1 };
        (1..side).map(|i| Colour::Green(i as u8)).chain((0..self.tints.len()).map(|t| Colour::Tint(t as u8)))
    }

    pub fn whites(&self) -> impl Iterator<Item = Colour> + '_ {
        (0..self.n - 1).map(|i| Colour::White(i as u8))
    }

    /// Reds as they may label an edge read from its lower endpoint.
    pub fn reds(&self) -> Vec<Colour> {
        let mut out = Vec::new();
        for sup in 0..self.red_superscripts {
            for j in 0..self.red_indices {
                for k in 0..self.red_indices {
                    let ok = match self.red_rule {
                        RedRule::Pattern => j < k,
                        RedRule::Ordered => j != k,
                    };
                    if ok {
                        out.push(Colour::Red { sup: sup as u8, j: j as u8, k: k as u8 });
                    }
                }
            }
        }
        out
    }

    /// Every atom colour (no shade), in a fixed order.
    pub fn colours(&self) -> Vec<Colour> {
        let mut out: Vec<Colour> = self.greens().chain(self.whites()).collect();
        out.extend(self.reds());
        out
    }

    pub fn yellow_universe(&self) -> u32 {
        if self.tints.len() == 32 {
            u32::MAX
        } else {
            (1u32 << self.tints.len()) - 1
        }
    }

    /// The tint index with the given value.
    pub fn tint_with_value(&self, value: i32) -> Option<u8> {
        self.tints.iter().position(|&v| v == value).map(|t| t as u8)
    }
}

#[derive(Deserialize)]
struct PresetFile {
    #[serde(flatten)]
    presets: std::collections::BTreeMap<String, PresetEntry>,
}

#[derive(Deserialize)]
struct PresetEntry {
    n: usize,
    tints: Vec<i32>,
    red_indices: usize,
    red_superscripts: usize,
    red_rule: RedRule,
    #[serde(default = "yes")]
    side_greens: bool,
    tint_white: TintWhite,
    tint_order: bool,
}

impl Preset {
    pub fn new(name: &str, palette: Palette, table: Table) -> Result<Preset, RainbowError> {
        palette.validate()?;
        if table.tint_order && palette.red_rule != RedRule::Ordered {
            return Err(RainbowError::InvalidPreset("the tint order constraint needs ordered reds".into()));
        }
        Ok(Preset {
            name: name.to_string(),
            palette,
            table,
        })
    }

    /// `n + 2` tints, reds `r^t_{jk}` with `t < n + 1` and `j < k < n + 1`.
    pub fn smooth(n: usize) -> Result<Preset, RainbowError> {
        Preset::new(
            &format!("smooth({n})"),
            Palette {
                n,
                tints: (0..n as i32 + 2).collect(),
                red_indices: n + 1,
                red_superscripts: n + 1,
                red_rule: RedRule::Pattern,
                side_greens: true,
            },
            Table {
                tint_white: TintWhite::Distinct,
                tint_order: false,
            },
        )
    }

    /// Dimension 3, ordered reds with `q` indices, one superscript and tints
    /// `0, −1, …, −(q + 1)`.
    pub fn descent(q: usize) -> Result<Preset, RainbowError> {
        Preset::new(
            &format!("descent({q})"),
            Palette {
                n: 3,
                tints: (0..q as i32 + 2).map(|t| -t).collect(),
                red_indices: q,
                red_superscripts: 1,
                red_rule: RedRule::Ordered,
                side_greens: true,
            },
            Table {
                tint_white: TintWhite::Distinct,
                tint_order: true,
            },
        )
    }

    /// The smooth palette at `n = 3` with `red_indices` subscripts.
    pub fn wide_reds(red_indices: usize) -> Result<Preset, RainbowError> {
        let mut p = Preset::smooth(3)?;
        p.name = format!("wide-reds({red_indices})");
        p.palette.red_indices = red_indices;
        p.palette.validate()?;
        Ok(p)
    }

    /// Look up a preset: `smooth`, `smooth(N)`, `descent(Q)`, `wide-reds(R)`
    /// or a name from the bundled presets file.
    pub fn named(name: &str) -> Result<Preset, RainbowError> {
        let arg = |prefix: &str| -> Option<Result<usize, RainbowError>> {
            let rest = name.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')?;
            Some(rest.trim().parse().map_err(|_| RainbowError::UnknownPreset(name.to_string())))
        };
        if name == "smooth" {
            return Preset::smooth(3);
        }
        if let Some(n) = arg("smooth") {
            return Preset::smooth(n?);
        }
        if let Some(q) = arg("descent") {
            return Preset::descent(q?);
        }
        if let Some(r) = arg("wide-reds") {
            return Preset::wide_reds(r?);
        }
        let file: PresetFile = config::section("rainbow");
        let e = file.presets.get(name).ok_or_else(|| RainbowError::UnknownPreset(name.to_string()))?;
        Preset::new(
            name,
            Palette {
                n: e.n,
                tints: e.tints.clone(),
                red_indices: e.red_indices,
                red_superscripts: e.red_superscripts,
                red_rule: e.red_rule,
                side_greens: e.side_greens,
            },
            Table {
                tint_white: e.tint_white,
                tint_order: e.tint_order,
            },
        )
    }

    /// Names of the presets in the bundled file.
    pub fn bundled_names() -> Vec<String> {
        let file: PresetFile = config::section("rainbow");
        file.presets.into_keys().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_counts() {
        let p = Preset::smooth(3).unwrap().palette;
        assert_eq!(p.tints.len(), 5);
        assert_eq!(p.red_indices, 4);
        // g_1, five tints, w_0, w_1, four superscripts times six pairs
        assert_eq!(p.colours().len(), 1 + 5 + 2 + 24);
    }

    #[test]
    fn bundled_presets_load() {
        for name in Preset::bundled_names() {
            Preset::named(&name).unwrap();
        }
        assert!(Preset::named("descent(3)").unwrap().table.tint_order);
        assert!(Preset::named("nonsense").is_err());
    }

    #[test]
    fn ordered_converse_swaps_indices() {
        let r = Colour::Red { sup: 0, j: 1, k: 2 };
        assert_eq!(r.converse(RedRule::Ordered), Colour::Red { sup: 0, j: 2, k: 1 });
        assert_eq!(r.converse(RedRule::Pattern), r);
    }
}
