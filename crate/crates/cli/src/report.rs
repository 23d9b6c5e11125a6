use mcis_core::SearchStats;
use serde::{Deserialize, Serialize};

/// One solve of one instance under one configuration. Times are seconds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceReport {
    pub instance: String,
    pub config: String,
    pub incumbent_size: usize,
    pub completed: bool,
    /// Includes symmetry detection.
    pub wall_time: f64,
    pub symmetry_time: f64,
    pub branches: u64,
    pub bound_prunes: u64,
    pub var_sym_prunes: u64,
    pub val_sym_prunes: u64,
    pub time_to_best: f64,
    pub branches_to_best: u64,
    /// Symmetry prunes per 100 bound prunes.
    pub sym_to_bound_ratio: f64,
    /// Set when the instance could not be run at all.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl InstanceReport {
    pub fn from_stats(instance: &str, config: &str, stats: &SearchStats) -> Self {
        let sym = stats.var_sym_prunes + stats.val_sym_prunes;
        InstanceReport {
            instance: instance.to_string(),
            config: config.to_string(),
            incumbent_size: stats.incumbent_size,
            completed: stats.completed,
            wall_time: stats.wall_time.as_secs_f64(),
            symmetry_time: stats.symmetry_time.as_secs_f64(),
            branches: stats.branches,
            bound_prunes: stats.bound_prunes,
            var_sym_prunes: stats.var_sym_prunes,
            val_sym_prunes: stats.val_sym_prunes,
            time_to_best: stats.time_to_best.as_secs_f64(),
            branches_to_best: stats.branches_to_best,
            sym_to_bound_ratio: 100.0 * sym as f64 / stats.bound_prunes.max(1) as f64,
            error: None,
        }
    }

    pub fn failed(instance: &str, config: &str, error: String) -> Self {
        let mut report = InstanceReport::from_stats(instance, config, &SearchStats::default());
        report.error = Some(error);
        report
    }

    pub fn symmetry_prunes(&self) -> u64 {
        self.var_sym_prunes + self.val_sym_prunes
    }

    /// Symmetry rules cut more than the bound did.
    pub fn high_sym_pruning(&self) -> bool {
        self.symmetry_prunes() > self.bound_prunes
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_guards_zero_bound_prunes() {
        let stats = SearchStats { var_sym_prunes: 3, val_sym_prunes: 2, ..SearchStats::default() };
        let r = InstanceReport::from_stats("x", "dual", &stats);
        assert_eq!(r.sym_to_bound_ratio, 500.0);
        assert!(r.high_sym_pruning());
        let stats = SearchStats { val_sym_prunes: 1, bound_prunes: 4, ..SearchStats::default() };
        assert_eq!(InstanceReport::from_stats("x", "val", &stats).sym_to_bound_ratio, 25.0);
    }

    #[test]
    fn json_round_trip() {
        let r = InstanceReport::failed("a/b", "none", "boom".into());
        let line = serde_json::to_string(&r).unwrap();
        assert!(line.contains("\"error\":\"boom\""));
        assert_eq!(serde_json::from_str::<InstanceReport>(&line).unwrap(), r);
    }
}
