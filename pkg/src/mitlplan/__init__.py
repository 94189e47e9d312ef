"""Minimal-violation planning for timed temporal-logic tasks on grids.

The pipeline: parse a task formula, build its relaxed timed automaton,
take the product with a grid abstraction of the workspace, derive an
energy function over the product, and run a receding-horizon planner
that trades task violation against collected reward.
"""

from .automaton import ConstructionError, RelaxedTBA, build
from .energy import EnergyTable, automaton_update, compute_energy, largest_self_reachable
from .formula import Formula, FormulaError, Interval, Pattern, SubFormula, TemporalClass, parse
from .planner import (
    InfeasibleError,
    NoAcceptingRunError,
    PlannerConfig,
    PlannerState,
    RunResult,
    initial_plan,
    rhc_step,
    run_loop,
)
from .product import ProductAutomaton, ProductError, build_product
from .sim import Environment, ScenarioError, case_study_scenario, scenario_from_dict
from .wts import GridError, GridWTS, TimedRun, UniformRewards, ZeroRewards

__version__ = "0.1.0"

__all__ = [
    "ConstructionError",
    "EnergyTable",
    "Environment",
    "Formula",
    "FormulaError",
    "GridError",
    "GridWTS",
    "InfeasibleError",
    "Interval",
    "NoAcceptingRunError",
    "Pattern",
    "PlannerConfig",
    "PlannerState",
    "ProductAutomaton",
    "ProductError",
    "RelaxedTBA",
    "RunResult",
    "ScenarioError",
    "SubFormula",
    "TemporalClass",
    "TimedRun",
    "UniformRewards",
    "ZeroRewards",
    "automaton_update",
    "build",
    "build_product",
    "case_study_scenario",
    "compute_energy",
    "initial_plan",
    "largest_self_reachable",
    "parse",
    "rhc_step",
    "run_loop",
    "scenario_from_dict",
    "__version__",
]
