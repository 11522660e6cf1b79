//! Serialization of reports: pretty JSON and per-scale CSV tables.

use serde::Serialize;

use crate::limits::ConvergenceReport;

/// Pretty JSON with a trailing newline. Object keys are emitted in a fixed
/// order, so equal reports serialize to identical bytes.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct Row {
    k: usize,
    abs_eps: f64,
    defect: f64,
}

/// Rows `k, abs_eps, defect` for one report.
pub fn to_csv(report: &ConvergenceReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for (k, abs_eps, defect) in report.csv_rows() {
        w.serialize(Row { k, abs_eps, defect }).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

#[derive(Serialize)]
struct SeriesRow<'a> {
    series: &'a str,
    k: usize,
    abs_eps: f64,
    defect: f64,
}

/// Rows `series, k, abs_eps, defect` for several named reports.
pub fn to_csv_series(reports: &[(String, &ConvergenceReport)]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for (name, report) in reports {
        for (k, abs_eps, defect) in report.csv_rows() {
            w.serialize(SeriesRow { series: name, k, abs_eps, defect }).expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scale::Schedule;

    #[test]
    fn csv_table() {
        let s = Schedule::dyadic(1, 3);
        let r = ConvergenceReport::from_defects("t", "m", &s, &[0.5, 0.25, 0.125], 0.0);
        assert_eq!(to_csv(&r), "k,abs_eps,defect\n1,0.5,0.5\n2,0.25,0.25\n3,0.125,0.125\n");
    }

    #[test]
    fn csv_series() {
        let s = Schedule::dyadic(1, 2);
        let r = ConvergenceReport::from_defects("t", "m", &s, &[0.5, 0.25], 0.0);
        let out = to_csv_series(&[("a".into(), &r), ("b, c".into(), &r)]);
        assert_eq!(out, "series,k,abs_eps,defect\na,1,0.5,0.5\na,2,0.25,0.25\n\"b, c\",1,0.5,0.5\n\"b, c\",2,0.25,0.25\n");
    }

    #[test]
    fn json_is_stable() {
        let s = Schedule::dyadic(1, 4);
        let r = ConvergenceReport::from_defects("t", "m", &s, &[0.5, 0.25, 0.125, 0.0625], 0.0);
        let a = to_json(&r);
        assert_eq!(a, to_json(&r.clone()));
        assert!(a.ends_with("}\n"));
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        for key in ["test", "model", "schedule", "values", "residuals", "rate", "pass"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }
}
