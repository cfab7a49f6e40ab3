//! Tunable parameters shipped with the crate, parsed from `config/presets.toml`.

use std::sync::OnceLock;

use serde::de::DeserializeOwned;

const PRESETS: &str = include_str!("../config/presets.toml");

fn table() -> &'static toml::Table {
    static TABLE: OnceLock<toml::Table> = OnceLock::new();
    TABLE.get_or_init(|| PRESETS.parse().expect("bundled presets.toml is valid"))
}

/// Deserialize the top-level section `name`.
pub fn section<T: DeserializeOwned>(name: &str) -> T {
    let value = table().get(name).unwrap_or_else(|| panic!("presets.toml has no [{name}] section"));
    value.clone().try_into().unwrap_or_else(|e| panic!("presets.toml [{name}]: {e}"))
}

pub fn raw() -> &'static str {
    PRESETS
}
