"""Exhaustive search over the OAM state interval o for maximum total capacity."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import DomainError

__all__ = [
    "StateSetRule",
    "IntervalSearchResult",
    "state_set",
    "optimize_interval",
]

STATE_RULES = ("from_base", "multiples")
TIE_BREAKS = ("first", "last")
TIE_TOLERANCE = 1e-12  # relative; capacities this close count as equal


@dataclass(frozen=True)
class StateSetRule:
    """How the multiplexed state set is generated from an interval o.

    ``from_base`` gives {l₁, l₁+o, ..., l₁+(L-1)o}; ``multiples`` gives
    {o, 2o, ..., Lo} and ignores l₁.
    """

    base_state: int = 1
    count: int = 4
    rule: str = "from_base"

    def __post_init__(self):
        if self.base_state < 1:
            raise DomainError("base state must be >= 1")
        if self.count < 1:
            raise DomainError("state count must be >= 1")
        if self.rule not in STATE_RULES:
            raise DomainError(f"state rule must be one of {STATE_RULES}")


@dataclass(frozen=True)
class IntervalSearchResult:
    optimal_interval: int
    optimal_capacity: float
    per_interval_capacities: tuple[tuple[int, float], ...]

    def capacity_at(self, o: int) -> float:
        return dict(self.per_interval_capacities)[o]

    def improvement_over(self, o_ref: int) -> float:
        """Relative gain Ĉ/C_t(o_ref) - 1; infinite when C_t(o_ref) is zero."""
        ref = self.capacity_at(o_ref)
        if ref == 0:
            return 0.0 if self.optimal_capacity == 0 else math.inf
        return self.optimal_capacity / ref - 1


def state_set(rule: StateSetRule, o: int) -> list[int]:
    if o < 1:
        raise DomainError("state interval must be >= 1")
    start = rule.base_state if rule.rule == "from_base" else o
    return [start + k * o for k in range(rule.count)]


def _default_capacity(scenario) -> Callable[[int], float]:
    from .pipeline import evaluate

    def cap(o: int) -> float:
        return evaluate(scenario.with_interval(o)).total_capacity

    return cap


def optimize_interval(scenario=None, o_max: int = 10, tie_break: str = "first",
                      capacity_fn: Callable[[int], float] | None = None,
                      capacities: dict[int, float] | None = None,
                      tie_tolerance: float = TIE_TOLERANCE) -> IntervalSearchResult:
    """Evaluate C_t for o = 1..o_max and return the best interval.

    ``capacity_fn`` replaces the full pipeline; ``capacities`` supplies
    precomputed values (for example from a parallel sweep). The returned
    capacity is the exact maximum; the interval is the first (or last)
    one within ``tie_tolerance`` of it, so round-off noise between
    physically equal capacities does not decide the winner.
    """
    if o_max < 1:
        raise DomainError("o_max must be >= 1")
    if tie_break not in TIE_BREAKS:
        raise DomainError(f"tie_break must be one of {TIE_BREAKS}")
    if capacities is None:
        if capacity_fn is None:
            if scenario is None:
                raise DomainError("need a scenario, capacity_fn or capacities")
            capacity_fn = _default_capacity(scenario)
        capacities = {o: float(capacity_fn(o)) for o in range(1, o_max + 1)}
    if tie_tolerance < 0:
        raise DomainError("tie tolerance must be >= 0")
    grid = tuple((o, capacities[o]) for o in range(1, o_max + 1))
    best_c = max(c for _, c in grid)
    band = [o for o, c in grid if c >= best_c - tie_tolerance * abs(best_c)]
    best_o = band[0] if tie_break == "first" else band[-1]
    return IntervalSearchResult(best_o, best_c, grid)

