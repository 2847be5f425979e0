//! CSV and JSON exports.

use serde::Serialize;

use crate::error::Result;
use crate::field::{identity_metric, Field};
use crate::metrics::{MetricsSample, VarietyTable};
use crate::topology::Topology;

#[derive(Serialize)]
struct MetricsRow {
    t: usize,
    eta: f64,
    s_v: f64,
    s_c: f64,
    varieties: usize,
}

/// Header `t,eta,s_v,s_c,varieties`, one row per period.
pub fn metrics_csv(series: &[MetricsSample]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for s in series {
        w.serialize(MetricsRow { t: s.t, eta: s.eta, s_v: s.s_v, s_c: s.s_c, varieties: s.varieties })?;
    }
    finish(w)
}

#[derive(Serialize)]
struct SnapshotRow {
    x: usize,
    y: usize,
    h: String,
    hhat: f64,
    variety_id: usize,
}

/// Header `x,y,h,hhat,variety_id`, one row per agent; `variety_id` is the
/// 1-based order in the field's variety table.
pub fn snapshot_csv(field: &Field, topo: &Topology) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let table = VarietyTable::from_field(field);
    for (i, a) in field.agents().enumerate() {
        let (x, y) = topo.coords(i);
        let (h, hhat) = identity_metric(a, field.q());
        let variety_id = table.index_of(a).map_or(0, |k| k + 1);
        w.serialize(SnapshotRow { x, y, h: h.to_string(), hhat, variety_id })?;
    }
    finish(w)
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| crate::CultureError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Rows of `(order, identity, number, compatible_with)` plus the traits.
pub fn variety_table_json(table: &VarietyTable) -> String {
    table.to_json()
}
