use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::ParameterVector;

/// Metrics at one evaluation point.
///
/// CSV columns, in order: `iteration, data_passes, train_risk, test_risk,
/// reg_risk, grad_norm_sq, dist_sq_to_reference, suboptimality`. Optional
/// columns are empty when no test set or reference was supplied. Wall time is
/// kept in memory only, so CSV output is reproducible byte for byte.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub iteration: u64,
    pub data_passes: f64,
    /// `R_S(w)`
    pub train_risk: f64,
    pub test_risk: Option<f64>,
    /// `R_S^r(w)`
    pub reg_risk: f64,
    /// `ρ2 = ‖∇R_S^r(w)‖²`
    pub grad_norm_sq: f64,
    /// `ρ1 = ‖w - w*‖²`
    pub dist_sq_to_reference: Option<f64>,
    /// `ρ0 = R_S^r(w) - R_S^r(w*)`
    pub suboptimality: Option<f64>,
    #[serde(skip)]
    pub wall_time: f64,
}

#[derive(Clone, Debug)]
pub struct Trace {
    pub algorithm: String,
    pub step: String,
    pub records: Vec<TraceRecord>,
    pub final_w: ParameterVector,
    /// Per-instance gradient evaluations spent by the optimizer.
    pub gradient_evaluations: u64,
    pub wall_time: f64,
}

impl Trace {
    pub fn last(&self) -> &TraceRecord {
        self.records.last().expect("a trace always holds the initial record")
    }

    pub fn first(&self) -> &TraceRecord {
        &self.records[0]
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_records(&self.records, out)
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
    }
}

pub fn write_records<W: Write>(records: &[TraceRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| crate::Error::io("<csv>", e))?;
    Ok(())
}

pub fn read_records<R: Read>(input: R) -> Result<Vec<TraceRecord>> {
    let mut rdr = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for row in rdr.deserialize() {
        out.push(row?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_with_missing_columns() {
        let recs = vec![
            TraceRecord {
                iteration: 0,
                data_passes: 0.0,
                train_risk: 1.5,
                test_risk: None,
                reg_risk: 1.75,
                grad_norm_sq: 0.1,
                dist_sq_to_reference: Some(2.0),
                suboptimality: None,
                wall_time: 3.0,
            },
            TraceRecord {
                iteration: 7,
                data_passes: 0.35,
                train_risk: 1e-300,
                test_risk: Some(0.25),
                reg_risk: 0.1 + 0.2,
                grad_norm_sq: 0.0,
                dist_sq_to_reference: None,
                suboptimality: Some(1.2345678901234567e-13),
                wall_time: 0.0,
            },
        ];
        let mut buf = Vec::new();
        write_records(&recs, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(
            "iteration,data_passes,train_risk,test_risk,reg_risk,grad_norm_sq,dist_sq_to_reference,suboptimality\n"
        ));
        assert!(!text.contains("wall"));
        let back = read_records(&buf[..]).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back[1].reg_risk, 0.1 + 0.2);
        assert_eq!(back[1].suboptimality, recs[1].suboptimality);
        assert_eq!(back[0].test_risk, None);
        assert_eq!(back[0].wall_time, 0.0);
    }
}
