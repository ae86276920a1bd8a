use dome_core::dome::{DomeState, DomeStatus};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TRAVEL: f64 = 60.0;

fn well_formed(d: DomeStatus) -> bool {
    match d {
        DomeStatus::Closed => true,
        DomeStatus::Opening { elapsed, hold } => (0.0..TRAVEL).contains(&elapsed) && hold > 0.0,
        DomeStatus::Open { remaining } => remaining > 0.0,
        DomeStatus::Closing { elapsed } => (0.0..TRAVEL).contains(&elapsed),
    }
}

/// Legal successors under `advance`.
fn legal_step(from: DomeStatus, to: DomeStatus) -> bool {
    use DomeStatus::*;
    matches!(
        (from, to),
        (Closed, Closed)
            | (Opening { .. }, Opening { .. } | Open { .. } | Closing { .. } | Closed)
            | (Open { .. }, Open { .. } | Closing { .. } | Closed)
            | (Closing { .. }, Closing { .. } | Closed)
    )
}

#[test]
fn million_random_events() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xd0e5);
    let mut fleet = DomeState::new(27, TRAVEL);
    let mut rejected = 0;
    for _ in 0..1_000_000 {
        let before = fleet.uniform().expect("fleet stays uniform");
        match rng.random_range(0..4) {
            0 => {
                let secs = if rng.random_bool(0.3) {
                    0.0
                } else {
                    rng.random_range(0.5..300.0)
                };
                match fleet.command(secs) {
                    Ok(next) => {
                        let after = next.uniform().unwrap();
                        if secs == 0.0 {
                            assert!(!matches!(after, DomeStatus::Open { .. } | DomeStatus::Opening { .. }));
                        } else {
                            assert!(!matches!(before, DomeStatus::Closing { .. }));
                        }
                        fleet = next;
                    }
                    Err(_) => {
                        assert!(matches!(before, DomeStatus::Closing { .. }));
                        rejected += 1;
                    }
                }
            }
            _ => {
                let dt = if rng.random_bool(0.5) {
                    1.0
                } else {
                    rng.random_range(0.0..200.0)
                };
                fleet.advance(dt);
                assert!(
                    legal_step(before, fleet.uniform().unwrap()),
                    "{before:?} -> {:?}",
                    fleet.uniform()
                );
            }
        }
        assert_eq!(fleet.domes().len(), 27);
        let u = fleet.uniform().expect("fleet stays uniform");
        assert!(well_formed(u), "{u:?}");
    }
    assert!(rejected > 0);
}

#[test]
fn open_cycle_takes_travel_hold_travel() {
    let mut fleet = DomeState::new(27, TRAVEL).command(182.53).unwrap();
    let mut t = 0;
    while !fleet.uniform().unwrap().is_closed() {
        fleet.advance(1.0);
        t += 1;
    }
    assert_eq!(t, 60 + 183 + 60);
}
