//! CSV serialization of trajectories and oracle results.
//!
//! Every number is written with 17 significant digits, so a file read back
//! and written again is byte-identical.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::oracles::{OracleResult, OracleSource};
use crate::reduced_ode::Trajectory;

pub const TRAJECTORY_COLUMNS: [&str; 7] = ["t", "S", "I", "q1", "q2", "beta1_eff", "beta2_eff"];
pub const ORACLE_COLUMNS: [&str; 12] = [
    "t",
    "S",
    "I",
    "q1",
    "q2",
    "beta1_eff",
    "beta2_eff",
    "source",
    "replica",
    "K1",
    "K2",
    "n_agents",
];

pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

fn row(traj: &Trajectory, k: usize) -> [String; 7] {
    [
        traj.times[k],
        traj.s[k],
        traj.i[k],
        traj.q1[k],
        traj.q2[k],
        traj.beta1_eff[k],
        traj.beta2_eff[k],
    ]
    .map(format_number)
}

pub fn write_trajectory_csv<W: Write>(traj: &Trajectory, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRAJECTORY_COLUMNS)?;
    for k in 0..traj.len() {
        w.write_record(row(traj, k))?;
    }
    w.flush().map_err(|e| Error::Csv(e.to_string()))
}

pub fn trajectory_csv_string(traj: &Trajectory) -> Result<String> {
    let mut buf = Vec::new();
    write_trajectory_csv(traj, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Csv(e.to_string()))
}

fn parse_number(field: &str, column: &str, line: u64) -> Result<f64> {
    field
        .trim()
        .parse()
        .map_err(|_| Error::Csv(format!("line {line}: column {column}: `{field}` is not a number")))
}

fn check_header(headers: &csv::StringRecord, expected: &[&str]) -> Result<()> {
    if headers.iter().ne(expected.iter().copied()) {
        return Err(Error::Csv(format!(
            "expected header {}, found {}",
            expected.join(","),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    Ok(())
}

fn push_numeric(traj: &mut Trajectory, rec: &csv::StringRecord, line: u64) -> Result<()> {
    let mut v = [0.0; 7];
    for (c, slot) in v.iter_mut().enumerate() {
        *slot = parse_number(&rec[c], TRAJECTORY_COLUMNS[c], line)?;
    }
    traj.push(v[0], v[1], v[2], v[3], v[4], v[5], v[6]);
    Ok(())
}

pub fn read_trajectory_csv<R: Read>(input: R) -> Result<Trajectory> {
    let mut r = csv::Reader::from_reader(input);
    check_header(r.headers()?, &TRAJECTORY_COLUMNS)?;
    let mut traj = Trajectory::default();
    for rec in r.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        push_numeric(&mut traj, &rec, line)?;
    }
    Ok(traj)
}

/// Writes each replica, then the aggregate with `replica = mean`.
/// Missing bin counts or agent counts are left empty.
pub fn write_oracle_csv<W: Write>(result: &OracleResult, out: W) -> Result<()> {
    let opt = |v: Option<usize>| v.map(|n| n.to_string()).unwrap_or_default();
    let tail = |replica: String| {
        [
            result.source.as_str().to_string(),
            replica,
            opt(result.k1),
            opt(result.k2),
            opt(result.n_agents),
        ]
    };
    let mut w = csv::Writer::from_writer(out);
    w.write_record(ORACLE_COLUMNS)?;
    let tagged = result
        .replicas
        .iter()
        .enumerate()
        .map(|(r, t)| (r.to_string(), t))
        .chain(std::iter::once(("mean".to_string(), &result.mean)));
    for (tag, traj) in tagged {
        let extra = tail(tag);
        for k in 0..traj.len() {
            w.write_record(row(traj, k).iter().chain(extra.iter()))?;
        }
    }
    w.flush().map_err(|e| Error::Csv(e.to_string()))
}

pub fn oracle_csv_string(result: &OracleResult) -> Result<String> {
    let mut buf = Vec::new();
    write_oracle_csv(result, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Csv(e.to_string()))
}

pub fn read_oracle_csv<R: Read>(input: R) -> Result<OracleResult> {
    let mut r = csv::Reader::from_reader(input);
    check_header(r.headers()?, &ORACLE_COLUMNS)?;
    let parse_count = |field: &str, column: &str, line: u64| -> Result<Option<usize>> {
        if field.is_empty() {
            return Ok(None);
        }
        field
            .parse()
            .map(Some)
            .map_err(|_| Error::Csv(format!("line {line}: column {column}: `{field}` is not a count")))
    };
    let mut source = None;
    let mut counts = None;
    let mut replicas: Vec<Trajectory> = Vec::new();
    let mut mean = Trajectory::default();
    for rec in r.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let src = match &rec[7] {
            "binned" => OracleSource::Binned,
            "stochastic" => OracleSource::Stochastic,
            other => return Err(Error::Csv(format!("line {line}: unknown source `{other}`"))),
        };
        let c = (
            parse_count(&rec[9], "K1", line)?,
            parse_count(&rec[10], "K2", line)?,
            parse_count(&rec[11], "n_agents", line)?,
        );
        if source.get_or_insert(src) != &src || counts.get_or_insert(c) != &c {
            return Err(Error::Csv(format!("line {line}: mixed oracle metadata")));
        }
        match &rec[8] {
            "mean" => push_numeric(&mut mean, &rec, line)?,
            tag => {
                let r: usize = tag
                    .parse()
                    .map_err(|_| Error::Csv(format!("line {line}: bad replica `{tag}`")))?;
                if r == replicas.len() {
                    replicas.push(Trajectory::default());
                } else if r + 1 != replicas.len() {
                    return Err(Error::Csv(format!("line {line}: replica {r} out of order")));
                }
                push_numeric(&mut replicas[r], &rec, line)?;
            }
        }
    }
    let (k1, k2, n_agents) = counts.ok_or_else(|| Error::Csv("no data rows".into()))?;
    Ok(OracleResult {
        source: source.unwrap_or(OracleSource::Binned),
        mean,
        replicas,
        k1,
        k2,
        n_agents,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Trajectory {
        let mut t = Trajectory::default();
        t.push(0.0, 999.0, 1.0, 0.0, 0.0, 0.002, 1.0);
        t.push(0.1, 998.9, 1.1, -0.105, 1e-300, 0.002, 1.0);
        t.push(40.0, 500.00000000000006, 499.99999999999994, -1.0 / 3.0, 2.0f64.sqrt(), 1.5e-3, 1.0);
        t
    }

    #[test]
    fn header_and_format() {
        let s = trajectory_csv_string(&sample()).unwrap();
        let mut lines = s.lines();
        assert_eq!(lines.next(), Some("t,S,I,q1,q2,beta1_eff,beta2_eff"));
        assert_eq!(
            lines.next(),
            Some("0.0000000000000000e0,9.9900000000000000e2,1.0000000000000000e0,0.0000000000000000e0,0.0000000000000000e0,2.0000000000000000e-3,1.0000000000000000e0")
        );
    }

    #[test]
    fn trajectory_round_trips() {
        let s = trajectory_csv_string(&sample()).unwrap();
        let back = read_trajectory_csv(s.as_bytes()).unwrap();
        assert_eq!(back, sample());
        assert_eq!(trajectory_csv_string(&back).unwrap(), s);
    }

    #[test]
    fn oracle_round_trips() {
        let res = OracleResult {
            source: OracleSource::Stochastic,
            mean: sample(),
            replicas: vec![sample(), sample()],
            k1: None,
            k2: None,
            n_agents: Some(1000),
        };
        let s = oracle_csv_string(&res).unwrap();
        assert!(s.lines().nth(1).unwrap().ends_with(",stochastic,0,,,1000"));
        assert!(s.lines().last().unwrap().ends_with(",stochastic,mean,,,1000"));
        let back = read_oracle_csv(s.as_bytes()).unwrap();
        assert_eq!(back, res);
        assert_eq!(oracle_csv_string(&back).unwrap(), s);
    }

    #[test]
    fn rejects_wrong_header_and_garbage() {
        assert!(read_trajectory_csv("t,S,I\n0,1,2\n".as_bytes()).is_err());
        let bad = "t,S,I,q1,q2,beta1_eff,beta2_eff\n0,1,x,0,0,1,1\n";
        let err = read_trajectory_csv(bad.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("column I"), "{err}");
    }
}
