#![allow(dead_code)]

use std::sync::Arc;

use proptest::prelude::*;
use tropicost_core::{CostDioid, CostMatrix, CostValue, DioidKind, TransitionSystem};

pub const LRC: &str = "dioid maxplus\nstates a b c d\ninit a\nfinal d\n\
    edge a b 8\nedge b c 3\nedge c c 2\nedge c d 4\nedge d b 5\n";

pub fn dioid(kind: DioidKind) -> Arc<CostDioid> {
    let universe = kind
        .needs_universe()
        .then(|| ["x", "y", "z"].iter().map(|s| s.to_string()).collect());
    Arc::new(CostDioid::new(kind, universe).unwrap())
}

pub fn numeric_kinds() -> Vec<DioidKind> {
    vec![
        DioidKind::MinMax,
        DioidKind::MaxMin,
        DioidKind::MaxTimes,
        DioidKind::MaxPlus,
        DioidKind::MinPlus,
    ]
}

/// A non-⊥ value built from a small integer seed.
pub fn value_from(d: &CostDioid, raw: i64, denom: i64) -> CostValue {
    match d.kind() {
        DioidKind::CupCap | DioidKind::CapCup => {
            let mask = (raw.rem_euclid(7) + 1) as u64;
            if d.is_zero(&CostValue::Set(mask)) { CostValue::Set(1) } else { CostValue::Set(mask) }
        }
        DioidKind::MaxTimes => CostValue::ratio(raw.abs() + 1, denom),
        DioidKind::MinPlusVec(m) => {
            let entries: Vec<i64> = (0..m as i64).map(|k| (raw + k).abs()).collect();
            CostValue::vector(&entries)
        }
        _ => CostValue::ratio(raw, denom),
    }
}

pub fn matrix_from(d: &Arc<CostDioid>, rows: usize, cols: usize, cells: &[Option<(i64, i64)>]) -> CostMatrix {
    let mut m = CostMatrix::zero(d.clone(), rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            if let Some((raw, denom)) = cells[r * cols + c] {
                m.set(r, c, value_from(d, raw, denom));
            }
        }
    }
    m
}

pub fn cells(len: usize) -> impl Strategy<Value = Vec<Option<(i64, i64)>>> {
    prop::collection::vec(prop::option::weighted(0.5, (-10i64..=10, 1i64..=4)), len)
}

pub fn arb_matrix(d: Arc<CostDioid>, n: usize) -> impl Strategy<Value = CostMatrix> {
    cells(n * n).prop_map(move |c| matrix_from(&d, n, n, &c))
}

fn nonempty(mask: u32, n: usize) -> Vec<usize> {
    let picked: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
    if picked.is_empty() { vec![0] } else { picked }
}

pub fn arb_system(d: Arc<CostDioid>, max_states: usize) -> impl Strategy<Value = TransitionSystem> {
    (1..=max_states).prop_flat_map(move |n| {
        let d = d.clone();
        (cells(n * n), any::<u32>(), any::<u32>()).prop_map(move |(c, i, f)| {
            let m = matrix_from(&d, n, n, &c);
            let states = (0..n).map(|k| format!("s{k}")).collect();
            TransitionSystem::new(states, m, nonempty(i, n), nonempty(f, n)).unwrap()
        })
    })
}

/// A system with a total map of its states onto `1..=n` blocks.
pub fn arb_partitioned(d: Arc<CostDioid>, max_states: usize) -> impl Strategy<Value = (TransitionSystem, Vec<usize>)> {
    arb_system(d, max_states).prop_flat_map(|p| {
        let n = p.len();
        (Just(p), 1..=n).prop_flat_map(move |(p, blocks)| {
            (Just(p), prop::collection::vec(0..blocks, n))
        })
    })
}
