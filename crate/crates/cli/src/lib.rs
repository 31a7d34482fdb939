//! Scenario-driven verification runs over the `amen-core` defect machinery.

pub mod report;
pub mod run;
pub mod scenario;

pub use report::Report;
pub use run::run;
pub use scenario::Scenario;

pub use amen_core::{Error, Result};

/// Command-line overrides applied on top of a scenario file.
#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    pub stages: Option<usize>,
    pub window_radius: Option<usize>,
}

impl Overrides {
    pub fn apply(self, scenario: &mut Scenario) {
        if let Some(n) = self.stages {
            scenario.net.stages = n;
        }
        if let Some(r) = self.window_radius {
            for w in &mut scenario.window {
                if w.elements.is_none() {
                    w.group_radius = Some(r);
                }
            }
        }
    }
}

/// The families a scenario may name, one `section: items` line each.
pub fn families() -> String {
    use scenario::*;
    let suites: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
    [
        ("group", &GROUP_FAMILIES[..]),
        ("tau", &TAU_ACTIONS[..]),
        ("space", &SPACES[..]),
        ("left", &LEFT_ACTIONS[..]),
        ("right", &RIGHT_ACTIONS[..]),
        ("net", &NET_FAMILIES[..]),
        ("suite", &suites[..]),
    ]
    .iter()
    .map(|(k, v)| format!("{k}: {}\n", v.join(", ")))
    .collect()
}

/// Reads and parses a scenario file.
pub fn load(path: &std::path::Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Configuration(format!("cannot read {}: {e}", path.display())))?;
    Scenario::parse(&text, &path.display().to_string())
}
