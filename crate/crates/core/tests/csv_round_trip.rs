use hetero_sis::oracles::{OracleResult, OracleSource};
use hetero_sis::output::{oracle_csv_string, read_oracle_csv, read_trajectory_csv, trajectory_csv_string};
use hetero_sis::Trajectory;
use proptest::prelude::*;

fn trajectory() -> impl Strategy<Value = Trajectory> {
    prop::collection::vec(prop::array::uniform7(any::<f64>().prop_filter("finite", |x| x.is_finite())), 1..20)
        .prop_map(|rows| {
            let mut t = Trajectory::default();
            for r in rows {
                t.push(r[0], r[1], r[2], r[3], r[4], r[5], r[6]);
            }
            t
        })
}

proptest! {
    #[test]
    fn trajectory_csv_is_a_fixed_point(traj in trajectory()) {
        let text = trajectory_csv_string(&traj).unwrap();
        let back = read_trajectory_csv(text.as_bytes()).unwrap();
        prop_assert_eq!(&back, &traj);
        prop_assert_eq!(trajectory_csv_string(&back).unwrap(), text);
    }

    #[test]
    fn oracle_csv_is_a_fixed_point(
        mean in trajectory(),
        replicas in prop::collection::vec(trajectory(), 0..4),
        agents in prop::option::of(1usize..100_000),
    ) {
        let result = OracleResult {
            source: if agents.is_some() { OracleSource::Stochastic } else { OracleSource::Binned },
            mean,
            replicas,
            k1: agents.map_or(Some(400), |_| None),
            k2: agents.map_or(Some(1), |_| None),
            n_agents: agents,
        };
        let text = oracle_csv_string(&result).unwrap();
        let back = read_oracle_csv(text.as_bytes()).unwrap();
        prop_assert_eq!(&back, &result);
        prop_assert_eq!(oracle_csv_string(&back).unwrap(), text);
    }
}
