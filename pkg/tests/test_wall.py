import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bricksim.errors import ValidationError
from bricksim.wall import (
    EXCITED,
    RESTING,
    RuleSpec,
    bfs_distances,
    broadcast_time,
    build_brick_wall,
    first_excitation_steps,
    make_state,
    run,
    step_sync,
)


def reference_step(graph, state, rule):
    # direct per-cell transcription of the update rule
    out = np.empty_like(state)
    for c in range(graph.cell_count):
        count = sum(1 for n in graph.adjacency[c] if state[n] == EXCITED)
        s = state[c]
        if s == RESTING:
            out[c] = EXCITED if rule.excite_lo <= count <= rule.excite_hi else RESTING
        elif s == EXCITED:
            out[c] = 1 + rule.refractory_len
        else:
            out[c] = RESTING if s == 2 else s - 1
    return out


def test_single_cell_wall():
    g = build_brick_wall(1, 1)
    assert g.cell_count == 1
    assert g.adjacency[0] == []
    assert broadcast_time(g, 0) == 0


def test_interior_cell_has_six_neighbors():
    g = build_brick_wall(3, 3)
    assert len(g.adjacency[g.cell_id(1, 1)]) == 6


def test_adjacency_symmetric_no_self_loops():
    g = build_brick_wall(10, 10)
    for c, nbrs in enumerate(g.adjacency):
        assert c not in nbrs
        assert len(set(nbrs)) == len(nbrs)
        for n in nbrs:
            assert c in g.adjacency[n]


def test_zero_dimension_rejected():
    with pytest.raises(ValidationError):
        build_brick_wall(0, 5)


def test_all_resting_is_fixed_point():
    g = build_brick_wall(6, 6)
    state = make_state(g)
    for rule in (RuleSpec.classic(), RuleSpec(2, 4, 3)):
        assert np.array_equal(step_sync(g, state, rule), state)


def test_single_excited_interior_cell_one_step():
    g = build_brick_wall(5, 5)
    center = g.cell_id(2, 2)
    state = make_state(g, [center])
    nxt = step_sync(g, state, RuleSpec.classic())
    assert nxt[center] == 2  # refractory, one step remaining
    for n in g.adjacency[center]:
        assert nxt[n] == EXCITED
    others = set(range(g.cell_count)) - {center} - set(g.adjacency[center])
    assert all(nxt[c] == RESTING for c in others)


def test_two_cell_wall_hand_trace():
    g = build_brick_wall(1, 2)
    state = make_state(g, [0, 1])
    rule = RuleSpec.classic()
    s1 = step_sync(g, state, rule)
    assert s1.tolist() == [2, 2]
    s2 = step_sync(g, s1, rule)
    assert s2.tolist() == [RESTING, RESTING]
    s3 = step_sync(g, s2, rule)
    assert s3.tolist() == [RESTING, RESTING]


def test_step_matches_reference_on_random_states():
    g = build_brick_wall(7, 9)
    rng = np.random.default_rng(0)
    for rule in (RuleSpec.classic(), RuleSpec(2, 3, 2)):
        for _ in range(10):
            state = rng.integers(0, 2 + rule.refractory_len, g.cell_count)
            assert np.array_equal(step_sync(g, state, rule),
                                  reference_step(g, state, rule))


def test_step_sync_pure():
    g = build_brick_wall(4, 4)
    rng = np.random.default_rng(1)
    state = rng.integers(0, 3, g.cell_count)
    before = state.copy()
    a = step_sync(g, state, RuleSpec.classic())
    b = step_sync(g, state, RuleSpec.classic())
    assert np.array_equal(state, before)
    assert np.array_equal(a, b)


def test_run_quiescent_length_one():
    g = build_brick_wall(4, 4)
    traj = run(g, make_state(g), RuleSpec.classic(), 10)
    assert len(traj) == 1


def test_run_wave_dies_after_boundary():
    g = build_brick_wall(20, 20)
    traj = run(g, make_state(g, [g.cell_id(3, 3)]), RuleSpec.classic(), 200)
    assert np.all(traj[-1] == RESTING)
    assert len(traj) <= 201


@given(st.integers(1, 6), st.integers(0, 40))
@settings(max_examples=20, deadline=None)
def test_run_length_bounded(rows, max_steps):
    g = build_brick_wall(rows, 5)
    traj = run(g, make_state(g, [0]), RuleSpec.classic(), max_steps)
    assert len(traj) <= max_steps + 1


def test_first_excitation_equals_bfs_distance():
    for rows, cols in ((5, 5), (10, 7), (30, 30)):
        g = build_brick_wall(rows, cols)
        src = g.cell_id(cols // 3, rows // 2)
        first = first_excitation_steps(g, [src])
        assert np.array_equal(first, bfs_distances(g, [src]))


def test_broadcast_time_equals_eccentricity():
    g = build_brick_wall(10, 10)
    for src in (0, g.cell_id(9, 9), g.cell_id(4, 7)):
        assert broadcast_time(g, src) == bfs_distances(g, [src]).max()


def test_excited_count_bounded_by_distance_shell():
    g = build_brick_wall(15, 15)
    sources = [g.cell_id(2, 2), g.cell_id(10, 3)]
    dist = bfs_distances(g, sources)
    state = make_state(g, sources)
    rule = RuleSpec.classic()
    for t in range(1, 25):
        state = step_sync(g, state, rule)
        n_excited = int((state == EXCITED).sum())
        assert n_excited <= int((dist == t).sum())


def test_rule_table_reproduces_classic_rule():
    table = {}
    for c in range(7):
        table[(RESTING, c)] = EXCITED if c >= 1 else RESTING
        table[(EXCITED, c)] = 2
        table[(2, c)] = RESTING
    tabled = RuleSpec(table=table)
    g = build_brick_wall(8, 8)
    state = make_state(g, [g.cell_id(4, 4), g.cell_id(1, 2)])
    a, b = state.copy(), state.copy()
    for _ in range(10):
        a = step_sync(g, a, RuleSpec.classic())
        b = step_sync(g, b, tabled)
        assert np.array_equal(a, b)


def test_malformed_table_rejected():
    table = {(RESTING, c): RESTING for c in range(6)}  # missing entries
    with pytest.raises(ValidationError):
        RuleSpec(table=table)


def test_multi_step_refractory_delays_reexcitation():
    g = build_brick_wall(1, 3)
    rule = RuleSpec(refractory_len=3)
    state = make_state(g, [0])
    holds = []
    for _ in range(6):
        state = step_sync(g, state, rule)
        holds.append(state[0])
    # cell 0: refractory for 3 steps (values 4,3,2) then resting
    assert holds[:4] == [4, 3, 2, RESTING]
