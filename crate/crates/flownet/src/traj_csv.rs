//! Trajectory CSV: `t,x_0..x_{n-1},xc_0..xc_{m-1},u_0..u_{m-1}[,V]`, one row
//! per sample, shortest round-trip decimals.

use std::io::{Read, Write};

use flownet_core::scenario::Scenario;
use flownet_core::sim::{summarize, TerminalSummary, Trajectory};

use crate::error::{Error, Result};

pub fn header(n: usize, m: usize, lyapunov: bool) -> Vec<String> {
    let mut h = Vec::with_capacity(1 + n + 2 * m + 1);
    h.push("t".to_string());
    h.extend((0..n).map(|i| format!("x_{i}")));
    h.extend((0..m).map(|j| format!("xc_{j}")));
    h.extend((0..m).map(|j| format!("u_{j}")));
    if lyapunov {
        h.push("V".to_string());
    }
    h
}

/// Writes the trajectory; the `V` column is included when `lyapunov` is
/// set and the trajectory carries values.
pub fn write_csv<W: Write>(traj: &Trajectory, lyapunov: bool, out: W) -> Result<()> {
    let n = traj.x.first().map_or(0, Vec::len);
    let m = traj.xc.first().map_or(0, Vec::len);
    let values = traj.lyapunov.as_ref().filter(|_| lyapunov);
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header(n, m, values.is_some()))?;
    let mut row = Vec::with_capacity(1 + n + 2 * m + 1);
    for k in 0..traj.len() {
        row.clear();
        row.push(format!("{:?}", traj.times[k]));
        row.extend(traj.x[k].iter().map(|v| format!("{v:?}")));
        row.extend(traj.xc[k].iter().map(|v| format!("{v:?}")));
        row.extend(traj.flows[k].iter().map(|v| format!("{v:?}")));
        if let Some(v) = values {
            row.push(format!("{:?}", v[k]));
        }
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::Csv(e.to_string()))?;
    Ok(())
}

pub fn to_csv_string(traj: &Trajectory, lyapunov: bool) -> String {
    let mut buf = Vec::new();
    write_csv(traj, lyapunov, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("CSV output is ASCII")
}

/// Samples read back from a CSV file.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTrajectory {
    pub times: Vec<f64>,
    pub x: Vec<Vec<f64>>,
    pub xc: Vec<Vec<f64>>,
    pub flows: Vec<Vec<f64>>,
    pub lyapunov: Option<Vec<f64>>,
}

impl CsvTrajectory {
    /// Rebuilds a [`Trajectory`] for `s`, recomputing the terminal summary.
    pub fn into_trajectory(self, s: &Scenario) -> Result<Trajectory> {
        let n = self.x.first().map_or(0, Vec::len);
        let m = self.xc.first().map_or(0, Vec::len);
        if n != s.graph.vertex_count() || m != s.graph.edge_count() {
            return Err(Error::Csv(format!(
                "columns describe {n} vertices and {m} edges, scenario has {} and {}",
                s.graph.vertex_count(),
                s.graph.edge_count()
            )));
        }
        let mut traj = Trajectory {
            times: self.times,
            x: self.x,
            xc: self.xc,
            flows: self.flows,
            lyapunov: self.lyapunov,
            summary: TerminalSummary {
                steady: false,
                consensus: false,
                alpha: 0.0,
                max_rate: 0.0,
                spread: 0.0,
            },
        };
        traj.summary = summarize(s, &traj)?;
        Ok(traj)
    }
}

pub fn read_csv<R: Read>(input: R) -> Result<CsvTrajectory> {
    let mut r = csv::Reader::from_reader(input);
    let head: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    let count = |prefix: &str| head.iter().filter(|h| h.starts_with(prefix)).count();
    let (n, m) = (count("x_"), count("u_"));
    let lyapunov = head.last().is_some_and(|h| h == "V");
    if head != header(n, m, lyapunov) {
        return Err(Error::Csv(format!("unexpected header {}", head.join(","))));
    }
    let mut out = CsvTrajectory {
        times: Vec::new(),
        x: Vec::new(),
        xc: Vec::new(),
        flows: Vec::new(),
        lyapunov: lyapunov.then(Vec::new),
    };
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let vals = rec
            .iter()
            .map(|f| f.parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| Error::Csv(format!("row {}: {e}", line + 1)))?;
        if vals.len() != head.len() {
            return Err(Error::Csv(format!("row {}: wrong field count", line + 1)));
        }
        out.times.push(vals[0]);
        out.x.push(vals[1..1 + n].to_vec());
        out.xc.push(vals[1 + n..1 + n + m].to_vec());
        out.flows.push(vals[1 + n + m..1 + n + 2 * m].to_vec());
        if let Some(v) = out.lyapunov.as_mut() {
            v.push(vals[1 + n + 2 * m]);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use flownet_core::scenario::five_vertex_preset;
    use flownet_core::sim::integrate;

    #[test]
    fn header_layout() {
        assert_eq!(header(2, 1, true).join(","), "t,x_0,x_1,xc_0,u_0,V");
    }

    #[test]
    fn round_trip_is_exact_and_resummarizes() {
        let mut s = five_vertex_preset();
        s.integrator.horizon = 3.0;
        let traj = integrate(&s).unwrap();
        let text = to_csv_string(&traj, true);
        let back = read_csv(text.as_bytes())
            .unwrap()
            .into_trajectory(&s)
            .unwrap();
        assert_eq!(back, traj);
    }

    #[test]
    fn lyapunov_column_optional() {
        let mut s = five_vertex_preset();
        s.integrator.horizon = 0.0;
        let traj = integrate(&s).unwrap();
        let text = to_csv_string(&traj, false);
        assert_eq!(text.lines().count(), 2);
        assert!(!text.lines().next().unwrap().ends_with(",V"));
        assert_eq!(read_csv(text.as_bytes()).unwrap().lyapunov, None);
    }

    #[test]
    fn malformed_rejected() {
        assert!(read_csv("t,x_0,y\n0,1,2\n".as_bytes()).is_err());
        assert!(read_csv("t,x_0\n0,abc\n".as_bytes()).is_err());
    }
}
