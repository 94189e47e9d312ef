"""Dynamic environment: ground truth vs. knowledge, obstacle walks, local
sensing, scenario documents."""

from __future__ import annotations

import pytest

from mitlplan.formula import parse
from mitlplan.planner import PlannerConfig
from mitlplan.sim import Environment, ScenarioError, case_study_scenario, scenario_from_dict
from mitlplan.wts import GridWTS


def basic_env(**kwargs):
    defaults = dict(
        width=5,
        height=5,
        soft_labels={18: frozenset({"p"})},
        obstacle_cells=[7, 16],
        seed=3,
    )
    defaults.update(kwargs)
    return Environment(**defaults)


# --- construction -------------------------------------------------------------------


def test_rejects_bad_inputs():
    with pytest.raises(ScenarioError, match="p_move"):
        basic_env(p_move=1.5)
    with pytest.raises(ScenarioError, match="out of bounds"):
        basic_env(soft_labels={99: frozenset({"p"})})
    with pytest.raises(ScenarioError, match="out of bounds"):
        basic_env(obstacle_cells=[40])
    with pytest.raises(ScenarioError, match="duplicate"):
        basic_env(obstacle_cells=[7, 7])
    with pytest.raises(ScenarioError, match="overlaps"):
        basic_env(obstacle_cells=[18])


def test_true_label_merges_obstacles_onto_soft_ground():
    env = basic_env()
    assert env.true_label(18) == frozenset({"p"})
    assert env.true_label(7) == frozenset({"obs"})
    assert env.true_label(0) == frozenset()


def test_rewards_are_deterministic_and_bounded():
    env = basic_env(r_max=0.5)
    again = basic_env(r_max=0.5)
    for k in (0, 1, 5):
        for cell in range(25):
            r = env.reward(k, cell)
            assert 0.0 <= r <= 0.5
            assert r == again.reward(k, cell)


# --- obstacle dynamics ---------------------------------------------------------------


def test_step_preserves_invariants():
    env = basic_env(p_move=0.9)
    env.set_agent(12)
    labeled = {c for c, atoms in enumerate(env.soft) if atoms}
    for k in range(1, 60):
        env.step(k)
        occupied = set(env.obstacles)
        assert len(occupied) == 2  # count never changes, no merging
        assert all(0 <= c < 25 for c in occupied)
        assert 12 not in occupied
        assert not occupied & labeled


def test_obstacle_walks_replay_under_the_same_seed():
    runs = []
    for _ in range(2):
        env = basic_env(p_move=0.7)
        env.set_agent(0)
        trail = []
        for k in range(1, 30):
            env.step(k)
            trail.append(tuple(env.obstacles))
        runs.append(trail)
    assert runs[0] == runs[1]
    other = basic_env(p_move=0.7, seed=4)
    other.set_agent(0)
    trail = []
    for k in range(1, 30):
        other.step(k)
        trail.append(tuple(other.obstacles))
    assert trail != runs[0]


def test_frozen_obstacles_never_move():
    env = basic_env(p_move=0.0)
    env.set_agent(0)
    for k in range(1, 20):
        env.step(k)
    assert env.obstacles == [7, 16]


# --- sensing ---------------------------------------------------------------------------


def knowledge_grid(env):
    wts = GridWTS(env.width, env.height, alphabet=frozenset({"p", "obs"}))
    for cell, atoms in enumerate(env.soft):
        if atoms:
            wts.set_label(cell, atoms)
    wts.label_version = 0
    return wts


def test_sense_is_empty_when_knowledge_is_current():
    env = basic_env(obstacle_cells=[])
    wts = knowledge_grid(env)
    assert env.sense(wts, 12, 4) == {}


def test_sense_reports_only_in_range_differences():
    env = basic_env()  # obstacles at 7=(2,1) and 16=(1,3)
    wts = knowledge_grid(env)
    deltas = env.sense(wts, 6, 1)  # (1,1): cell 7 adjacent, cell 16 two away
    assert deltas == {7: frozenset({"obs"})}
    everything = env.sense(wts, 12, 10)
    assert everything == {7: frozenset({"obs"}), 16: frozenset({"obs"})}


def test_sense_range_zero_sees_own_cell_only():
    env = basic_env()
    wts = knowledge_grid(env)
    assert env.sense(wts, 8, 0) == {}
    assert env.sense(wts, 7, 0) == {7: frozenset({"obs"})}


def test_sense_norms_differ_on_diagonals():
    env = basic_env(obstacle_cells=[6])  # (1,1), diagonal from (0,0)
    wts = knowledge_grid(env)
    assert env.sense(wts, 0, 1, "manhattan") == {}
    assert env.sense(wts, 0, 1, "chebyshev") == {6: frozenset({"obs"})}
    with pytest.raises(ScenarioError, match="norm"):
        env.sense(wts, 0, 1, "euclidean")


def test_sense_reports_departures_too():
    env = basic_env()
    wts = knowledge_grid(env)
    wts.set_label(7, frozenset({"obs"}))  # remembered sighting
    env._occupied.discard(7)  # obstacle wandered off
    env.obstacles.remove(7)
    deltas = env.sense(wts, 6, 2)
    assert deltas[7] == frozenset()


# --- scenario documents ------------------------------------------------------------------


def test_case_study_scenario_materializes():
    doc = case_study_scenario(seed=7, steps=50)
    assert doc["schema_version"] == 1
    env, wts, formula, config, run = scenario_from_dict(doc)
    assert (wts.width, wts.height) == (10, 10)
    assert wts.q0 == 0
    assert wts.cells_with("pear") == [55]
    assert sorted(wts.cells_with("cherry")) == [18, 99]
    assert wts.cells_with("grass") == [34, 44, 54, 64, 74]
    assert sorted(env.obstacles) == sorted(
        y * 10 + x for x, y in doc["obstacles"]["cells"]
    )
    assert formula.hard_atoms == frozenset({"obs"})
    assert config == PlannerConfig()
    assert run == {"steps": 50, "seed": 7}
    assert case_study_scenario(seed=3, steps=10)["seed"] == 3


def test_scenario_defaults_fill_in():
    doc = {
        "width": 3,
        "height": 3,
        "start": [1, 1],
        "formula": "soft: F p",
        "labels": {"p": [[2, 2]]},
    }
    env, wts, formula, config, run = scenario_from_dict(doc)
    assert env.p_move == 0.3
    assert env.obstacles == []
    assert config.horizon == 4
    assert run == {"steps": 50, "seed": 0}


def test_scenario_obstacles_without_hard_constraint_are_scenery():
    doc = {
        "width": 3,
        "height": 3,
        "start": [0, 0],
        "formula": "soft: F p",
        "labels": {"p": [[2, 2]]},
        "obstacles": {"cells": [[1, 1]]},
    }
    env, wts, formula, config, run = scenario_from_dict(doc)
    assert "obs" in wts.alphabet  # sightings must be recordable
    deltas = env.sense(wts, 0, 4)
    assert deltas == {4: frozenset({"obs"})}
    wts.set_label(4, deltas[4])  # must not raise


@pytest.mark.parametrize(
    "patch,message",
    [
        ({"formula": "hard: G !obs ; soft: F p", "labels": {"q": [[0, 1]]}}, "not used"),
        ({"labels": {"p": [[5, 5]]}}, "out of bounds"),
        ({"start": [3, 0]}, "out of bounds"),
        ({"width": "wide"}, "bad scenario"),
        ({"formula": "soft:"}, "no conjuncts"),
        (
            {
                "formula": "hard: G !obs ; soft: F p",
                "obstacles": {"cells": [[0, 0]]},
            },
            "blocked",
        ),
        (
            {
                "formula": "hard: G !obs ; soft: F p",
                "obstacles": {"atom": "wall", "cells": [[1, 1]]},
            },
            "not a hard atom",
        ),
    ],
)
def test_scenario_rejections(patch, message):
    doc = {
        "width": 3,
        "height": 3,
        "start": [0, 0],
        "formula": "soft: F p",
        "labels": {"p": [[2, 2]]},
    }
    doc.update(patch)
    with pytest.raises((ScenarioError, ValueError), match=message):
        scenario_from_dict(doc)


def test_scenario_start_must_not_be_blocked_even_by_soft_hard_mix():
    doc = case_study_scenario()
    doc["start"] = [2, 6]  # sits on a configured obstacle
    with pytest.raises(ScenarioError, match="blocked"):
        scenario_from_dict(doc)
