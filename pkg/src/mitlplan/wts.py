"""Grid workspace abstracted as a weighted transition system.

Cells are indexed row-major (``idx = y * width + x``) with (0, 0) at the
bottom-left corner.  Motion is 4-connected; every transition takes the
same positive traversal time.  Cell labels record the *agent's knowledge*
of the workspace, which sensing updates may revise; the cell set and the
transition relation never change after construction.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field


class GridError(ValueError):
    pass


_MOVES = ((1, 0), (-1, 0), (0, 1), (0, -1))


class GridWTS:
    """Rectangular grid with uniform transition weight and per-cell labels."""

    def __init__(
        self,
        width: int,
        height: int,
        q0: int = 0,
        weight: float = 1.0,
        alphabet: frozenset[str] | None = None,
        allow_stay: bool = False,
    ):
        if width < 1 or height < 1:
            raise GridError(f"grid must be at least 1x1, got {width}x{height}")
        if weight <= 0:
            raise GridError(f"transition weight must be positive, got {weight}")
        if not 0 <= q0 < width * height:
            raise GridError(f"initial cell {q0} out of bounds")
        self.width = width
        self.height = height
        self.q0 = q0
        self.weight = float(weight)
        self.alphabet = alphabet if alphabet is not None else frozenset()
        self.allow_stay = allow_stay
        self.labels: list[frozenset[str]] = [frozenset()] * (width * height)
        self.label_version = 0
        self._nbrs: list[tuple[int, ...]] = [
            self._compute_neighbors(i) for i in range(width * height)
        ]

    @classmethod
    def from_grid(
        cls,
        width: int,
        height: int,
        labels: dict[tuple[int, int], set[str]] | None = None,
        q0: tuple[int, int] | int = 0,
        weight: float = 1.0,
        alphabet: frozenset[str] | None = None,
        allow_stay: bool = False,
    ) -> "GridWTS":
        if isinstance(q0, tuple):
            x, y = q0
            if not (0 <= x < width and 0 <= y < height):
                raise GridError(f"initial cell {q0} out of bounds")
            q0 = y * width + x
        wts = cls(width, height, q0, weight, alphabet, allow_stay)
        for (x, y), atoms in (labels or {}).items():
            wts.set_label(wts.index(x, y), atoms)
        wts.label_version = 0
        return wts

    # -- geometry -----------------------------------------------------------

    @property
    def state_count(self) -> int:
        return self.width * self.height

    def index(self, x: int, y: int) -> int:
        if not (0 <= x < self.width and 0 <= y < self.height):
            raise GridError(f"cell ({x},{y}) out of bounds")
        return y * self.width + x

    def xy(self, idx: int) -> tuple[int, int]:
        return idx % self.width, idx // self.width

    def _compute_neighbors(self, idx: int) -> tuple[int, ...]:
        x, y = self.xy(idx)
        out = [idx] if self.allow_stay else []
        for dx, dy in _MOVES:
            nx, ny = x + dx, y + dy
            if 0 <= nx < self.width and 0 <= ny < self.height:
                out.append(ny * self.width + nx)
        return tuple(out)

    def neighbors(self, idx: int) -> tuple[int, ...]:
        return self._nbrs[idx]

    def adjacent(self, a: int, b: int) -> bool:
        return b in self._nbrs[a]

    def distance(self, a: int, b: int, norm: str = "manhattan") -> int:
        ax, ay = self.xy(a)
        bx, by = self.xy(b)
        dx, dy = abs(ax - bx), abs(ay - by)
        if norm == "chebyshev":
            return max(dx, dy)
        if norm == "manhattan":
            return dx + dy
        raise GridError(f"unknown norm {norm!r}")

    # -- labels (agent knowledge) ---------------------------------------------

    def label(self, idx: int) -> frozenset[str]:
        return self.labels[idx]

    def set_label(self, idx: int, atoms: set[str] | frozenset[str]) -> None:
        atoms = frozenset(atoms)
        unknown = atoms - self.alphabet if self.alphabet else frozenset()
        if unknown:
            raise GridError(f"labels {sorted(unknown)} not in alphabet")
        if atoms != self.labels[idx]:
            self.labels[idx] = atoms
            self.label_version += 1

    def cells_with(self, atom: str) -> list[int]:
        return [i for i, lab in enumerate(self.labels) if atom in lab]


@dataclass(frozen=True)
class TimedRun:
    """Cell sequence with arrival timestamps, starting at time zero."""

    cells: tuple[int, ...]
    times: tuple[float, ...]

    def __post_init__(self):
        if len(self.cells) != len(self.times):
            raise GridError("cells and times differ in length")
        if not self.cells:
            raise GridError("empty run")
        if self.times[0] != 0:
            raise GridError("runs start at time 0")

    @classmethod
    def from_cells(cls, wts: GridWTS, cells: list[int] | tuple[int, ...]) -> "TimedRun":
        times = [i * wts.weight for i in range(len(cells))]
        run = cls(tuple(cells), tuple(times))
        run.validate(wts)
        return run

    def validate(self, wts: GridWTS) -> None:
        for i in range(len(self.cells) - 1):
            a, b = self.cells[i], self.cells[i + 1]
            if not wts.adjacent(a, b):
                raise GridError(f"cells {a} and {b} are not adjacent (step {i})")
            dt = self.times[i + 1] - self.times[i]
            if not math.isclose(dt, wts.weight):
                raise GridError(f"timestamp gap {dt} at step {i}, expected {wts.weight}")


class UniformRewards:
    """Per-step reward grids, each cell i.i.d. uniform on [0, r_max].

    Grids are derived from the seed and the step index alone, so any
    (seed, k, cell) query is reproducible regardless of query order.
    """

    def __init__(self, cell_count: int, seed: int = 0, r_max: float = 1.0):
        if r_max < 0:
            raise GridError(f"r_max must be non-negative, got {r_max}")
        self.cell_count = cell_count
        self.seed = seed
        self.r_max = r_max
        self._grids: dict[int, list[float]] = {}

    def grid(self, k: int) -> list[float]:
        cached = self._grids.get(k)
        if cached is None:
            rng = random.Random(f"{self.seed}:rewards:{k}")
            cached = [rng.uniform(0.0, self.r_max) for _ in range(self.cell_count)]
            self._grids[k] = cached
        return cached

    def at(self, k: int, cell: int) -> float:
        return self.grid(k)[cell]


class ZeroRewards:
    def at(self, k: int, cell: int) -> float:
        return 0.0


def accumulate_reward(cells, rewards, k: int) -> float:
    """Total reward along a predicted trajectory, excluding the start cell."""
    return sum(rewards.at(k, c) for c in cells[1:])
