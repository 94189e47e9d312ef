"""Dynamic grid environment: mobile obstacles, per-step rewards, local sensing.

The environment holds ground truth; the workspace labels hold what the
agent believes.  Soft placements (points of interest, no-go regions) are
known from the start, obstacles are discovered by sensing.  All
randomness is drawn from streams seeded by strings derived from the
scenario seed, so a run is reproducible regardless of interleaving.
"""

from __future__ import annotations

import random

from .formula import Formula, parse
from .planner import PlannerConfig
from .wts import GridWTS, UniformRewards

_MOVES = ((1, 0), (-1, 0), (0, 1), (0, -1))


class ScenarioError(ValueError):
    pass


class Environment:
    def __init__(
        self,
        width: int,
        height: int,
        soft_labels: dict[int, frozenset[str]],
        obstacle_cells: list[int],
        hard_atom: str = "obs",
        p_move: float = 0.3,
        seed: int = 0,
        r_max: float = 1.0,
    ):
        if not 0 <= p_move <= 1:
            raise ScenarioError(f"p_move must lie in [0,1], got {p_move}")
        self.width = width
        self.height = height
        self.cell_count = width * height
        self.soft: list[frozenset[str]] = [frozenset()] * self.cell_count
        for cell, atoms in soft_labels.items():
            if not 0 <= cell < self.cell_count:
                raise ScenarioError(f"labeled cell {cell} out of bounds")
            self.soft[cell] = frozenset(atoms)
        self.hard_atom = hard_atom
        self.p_move = p_move
        self.seed = seed
        self.rewards = UniformRewards(self.cell_count, seed, r_max)
        self._rng = random.Random(f"{seed}:obstacles")
        self.agent: int | None = None
        seen: set[int] = set()
        for cell in obstacle_cells:
            if not 0 <= cell < self.cell_count:
                raise ScenarioError(f"obstacle cell {cell} out of bounds")
            if cell in seen:
                raise ScenarioError(f"duplicate obstacle cell {cell}")
            if self.soft[cell]:
                raise ScenarioError(f"obstacle cell {cell} overlaps a labeled cell")
            seen.add(cell)
        self.obstacles: list[int] = list(obstacle_cells)
        self._occupied = seen

    # -- truth ------------------------------------------------------------------

    def true_label(self, cell: int) -> frozenset[str]:
        base = self.soft[cell]
        if cell in self._occupied:
            return base | {self.hard_atom}
        return base

    def reward(self, k: int, cell: int) -> float:
        return self.rewards.at(k, cell)

    def set_agent(self, cell: int) -> None:
        self.agent = cell

    # -- dynamics ---------------------------------------------------------------

    def step(self, k: int) -> None:
        """Advance every obstacle by one lazy random-walk step.

        A move is skipped with probability 1 - p_move and rejected when it
        would leave the grid or land on the agent, another obstacle, or a
        labeled cell."""
        for i, cell in enumerate(self.obstacles):
            if self._rng.random() >= self.p_move:
                continue
            x, y = cell % self.width, cell // self.width
            dx, dy = self._rng.choice(_MOVES)
            nx, ny = x + dx, y + dy
            if not (0 <= nx < self.width and 0 <= ny < self.height):
                continue
            target = ny * self.width + nx
            if target == self.agent or target in self._occupied or self.soft[target]:
                continue
            self._occupied.discard(cell)
            self._occupied.add(target)
            self.obstacles[i] = target

    # -- sensing ----------------------------------------------------------------

    def sense(
        self, wts: GridWTS, cell: int, sense_range: int, norm: str = "manhattan"
    ) -> dict[int, frozenset[str]]:
        """Observed labels, for every in-range cell that differs from knowledge."""
        if norm not in ("manhattan", "chebyshev"):
            raise ScenarioError(f"unknown norm {norm!r}")
        x, y = cell % self.width, cell // self.width
        deltas: dict[int, frozenset[str]] = {}
        for ny in range(max(0, y - sense_range), min(self.height, y + sense_range + 1)):
            for nx in range(max(0, x - sense_range), min(self.width, x + sense_range + 1)):
                if norm == "manhattan" and abs(nx - x) + abs(ny - y) > sense_range:
                    continue
                c = ny * self.width + nx
                truth = self.true_label(c)
                if truth != wts.label(c):
                    deltas[c] = truth
        return deltas


# -- scenarios ------------------------------------------------------------------


def scenario_from_dict(spec: dict) -> tuple[Environment, GridWTS, Formula, PlannerConfig, dict]:
    """Materialize a scenario document into environment, knowledge, formula
    and planner configuration.  Returns the residual run settings too."""
    try:
        width = int(spec["width"])
        height = int(spec["height"])
        sx, sy = spec["start"]
        formula_text = spec["formula"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"bad scenario document: {exc}") from exc
    formula = parse(formula_text)

    labels: dict[int, set[str]] = {}
    for atom, cells in spec.get("labels", {}).items():
        if atom not in formula.alphabet:
            raise ScenarioError(f"label {atom!r} not used by the formula")
        for x, y in cells:
            if not (0 <= x < width and 0 <= y < height):
                raise ScenarioError(f"labeled cell ({x},{y}) out of bounds")
            labels.setdefault(y * width + x, set()).add(atom)

    hard_atoms = sorted(formula.hard_atoms)
    obstacle_spec = spec.get("obstacles", {})
    hard_atom = obstacle_spec.get("atom", hard_atoms[0] if hard_atoms else "obs")
    if hard_atoms and hard_atom not in formula.hard_atoms:
        raise ScenarioError(
            f"obstacle atom {hard_atom!r} is not a hard atom of the formula"
        )
    obstacle_cells = [y * width + x for x, y in obstacle_spec.get("cells", [])]
    soft = {c: frozenset(a) for c, a in labels.items()}

    seed = int(spec.get("seed", 0))
    env = Environment(
        width,
        height,
        soft,
        obstacle_cells,
        hard_atom=hard_atom,
        p_move=float(obstacle_spec.get("p_move", 0.3)),
        seed=seed,
        r_max=float(spec.get("rewards", {}).get("r_max", 1.0)),
    )

    start = sy * width + sx
    if not (0 <= sx < width and 0 <= sy < height):
        raise ScenarioError(f"start cell ({sx},{sy}) out of bounds")
    if env.true_label(start) & formula.hard_atoms:
        raise ScenarioError("start cell is blocked")
    # the obstacle atom may be pure scenery (no hard constraint mentions it);
    # the knowledge grid must still be able to record sightings of it
    wts = GridWTS(
        width, height, q0=start, alphabet=frozenset(formula.alphabet) | {hard_atom}
    )
    for cell, atoms in soft.items():
        wts.set_label(cell, atoms)
    wts.label_version = 0

    planner_spec = spec.get("planner", {})
    config = PlannerConfig(
        horizon=int(planner_spec.get("horizon", 4)),
        alpha=float(planner_spec.get("alpha", 0.8)),
        beta=float(planner_spec.get("beta", 10.0)),
        sense_range=int(planner_spec.get("sense_range", planner_spec.get("horizon", 4))),
        sense_norm=planner_spec.get("sense_norm", "manhattan"),
        energy_mode=planner_spec.get("energy_mode", "beta"),
    )
    run = {"steps": int(spec.get("steps", 50)), "seed": seed}
    return env, wts, formula, config, run


def case_study_scenario(seed: int = 7, steps: int = 50) -> dict:
    """Reward-chasing errand scenario: repeatedly eat a cherry, then reach
    the pear soon after, while avoiding grass and roaming obstacles."""
    grass = [[4, y] for y in range(3, 8)]
    return {
        "schema_version": 1,
        "width": 10,
        "height": 10,
        "start": [0, 0],
        "formula": (
            "hard: G !obs ; "
            "soft: G !grass & G F[0,10) cherry & G (cherry -> F[0,20) pear)"
        ),
        "labels": {
            "pear": [[5, 5]],
            "cherry": [[9, 9], [8, 1]],
            "grass": grass,
        },
        "obstacles": {
            "atom": "obs",
            "cells": [[2, 6], [6, 2], [7, 7], [3, 2], [6, 8]],
            "p_move": 0.3,
        },
        "rewards": {"r_max": 1.0},
        "planner": {
            "horizon": 4,
            "alpha": 0.8,
            "beta": 10.0,
            "sense_range": 4,
            "sense_norm": "manhattan",
            "energy_mode": "beta",
        },
        "seed": seed,
        "steps": steps,
    }
