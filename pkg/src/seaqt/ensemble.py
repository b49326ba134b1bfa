"""Statistical-weight measures over the state domain: countable-support
ensembles, their Shannon-type uncertainty indicator, maximum-uncertainty
inference, moments, and evolution.

A measure with countable support is a finite weighted set of state
operators; canonicalization merges support points closer than a Frobenius
tolerance, which realizes the uniqueness of the resolution into point
measures at the numerical level.  The uncertainty indicator I = -c sum w ln w
quantifies preparation heterogeneity and is deliberately distinct from the
physical entropy observable: a measure over pure states can carry large I
while every member state has zero entropy.

Only countable support is computable here; measures with continuous support
conceptually carry infinite uncertainty and are out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq

from . import states as st
from .errors import (MeasureWeightError, TargetInfeasibleError,
                     UncoveredSupportError)
from .states import StateOperator

MERGE_TOL = 1e-9       # Frobenius distance below which support states merge
WEIGHT_SUM_TOL = 1e-10


@dataclass(frozen=True)
class StatisticalWeightMeasure:
    """Finite weighted support of state operators; weights sum to one."""

    support: tuple  # of (weight, StateOperator)

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for w, _ in self.support])

    @property
    def states(self) -> list[StateOperator]:
        return [s for _, s in self.support]

    def __len__(self) -> int:
        return len(self.support)

    @property
    def is_dirac(self) -> bool:
        return len(self.support) == 1


def measure(pairs) -> StatisticalWeightMeasure:
    """Canonicalize a list of (weight, state) pairs: positive weights summing
    to one, support states merged when within the Frobenius tolerance."""
    pairs = [(float(w), s if isinstance(s, StateOperator) else st.validate(s))
             for w, s in pairs]
    if not pairs:
        raise MeasureWeightError("measure needs at least one support point")
    if any(w <= 0 for w, _ in pairs):
        raise MeasureWeightError("weights must be strictly positive")
    total = sum(w for w, _ in pairs)
    if abs(total - 1.0) > WEIGHT_SUM_TOL:
        raise MeasureWeightError(f"weights sum to {total!r}, not 1")
    merged: list[list] = []
    for w, s in pairs:
        for entry in merged:
            if st.distance(entry[1], s) <= MERGE_TOL:
                entry[0] += w
                break
        else:
            merged.append([w, s])
    return StatisticalWeightMeasure(tuple((w, s) for w, s in merged))


def dirac(state) -> StatisticalWeightMeasure:
    return measure([(1.0, state)])


def expected_value(mu: StatisticalWeightMeasure,
                   g: Callable[[StateOperator], float]) -> float:
    """<g> = sum_n w_n g(rho_n); linear in the measure."""
    return float(sum(w * g(s) for w, s in mu.support))


def mean_observable(mu: StatisticalWeightMeasure, operator) -> float:
    return expected_value(mu, lambda s: st.mean(operator, s))


def combine(measures: Sequence[StatisticalWeightMeasure],
            weights) -> StatisticalWeightMeasure:
    """Statistical composition sum_n w_n mu_n, canonicalized afterwards."""
    weights = [float(w) for w in weights]
    if len(weights) != len(measures):
        raise MeasureWeightError("one weight per measure required")
    if any(w <= 0 for w in weights):
        raise MeasureWeightError("combination weights must be positive")
    if abs(sum(weights) - 1.0) > WEIGHT_SUM_TOL:
        raise MeasureWeightError(f"combination weights sum to {sum(weights)!r}")
    pairs = []
    for w, mu in zip(weights, measures):
        for wn, s in mu.support:
            pairs.append((w * wn, s))
    return measure(pairs)


def statistical_uncertainty(mu: StatisticalWeightMeasure, c: float = 1.0) -> float:
    """I = -c sum_n w_n ln w_n, in [0, c ln N]; zero exactly for point measures."""
    w = mu.weights
    return -c * float(np.sum(w * np.log(w)))


def expected_entropy(mu: StatisticalWeightMeasure, k: float = 1.0) -> float:
    """<s> = sum_n w_n s(rho_n): a property of the member states, carrying no
    information about the weights (the converse of the uncertainty indicator)."""
    return expected_value(mu, lambda s: st.entropy(s, k=k))


def evolve_measure(mu: StatisticalWeightMeasure, rhs, t_max: float,
                   config=None) -> StatisticalWeightMeasure:
    """Integrate every support state independently; weights are untouched.

    Integration failures are re-raised tagged with the support index.
    """
    from . import integrate as ig
    cfg = config or ig.IntegratorConfig(t_max=t_max)
    if cfg.t_max != t_max:
        from dataclasses import replace
        cfg = replace(cfg, t_max=t_max)
    evolved = []
    for idx, (w, s) in enumerate(mu.support):
        try:
            traj = ig.integrate(s, rhs, cfg)
        except Exception as exc:
            raise type(exc)(f"support point {idx}: {exc}") from exc
        evolved.append((w, st.validate(traj.final.rho)))
    return measure(evolved)


def _solve_exponential_weights(values: np.ndarray, target: float,
                               tol: float = 1e-10) -> np.ndarray:
    """Weights q_n proportional to exp(-b v_n) matching sum q_n v_n = target."""
    lo, hi = float(values.min()), float(values.max())
    if not (lo + 1e-12 < target < hi - 1e-12):
        if abs(hi - lo) < 1e-15 and abs(target - lo) < 1e-12:
            return np.full(len(values), 1.0 / len(values))
        raise TargetInfeasibleError(
            f"target {target!r} outside the open range ({lo:g}, {hi:g})")

    def mean_at(b):
        shifted = -b * values
        shifted -= shifted.max()
        q = np.exp(shifted)
        q /= q.sum()
        return float(q @ values) - target

    b_lo, b_hi = -1.0, 1.0
    while mean_at(b_lo) < 0:
        b_lo *= 2
        if b_lo < -1e8:
            raise TargetInfeasibleError("no bracketing multiplier found")
    while mean_at(b_hi) > 0:
        b_hi *= 2
        if b_hi > 1e8:
            raise TargetInfeasibleError("no bracketing multiplier found")
    b = brentq(mean_at, b_lo, b_hi, xtol=1e-14, rtol=8.9e-16)
    shifted = -b * values
    shifted -= shifted.max()
    q = np.exp(shifted)
    q /= q.sum()
    if abs(float(q @ values) - target) > tol:
        raise TargetInfeasibleError("constraint not met to tolerance")
    return q


def maxent_known_spectrum(states: Sequence[StateOperator], target_energy: float,
                          h) -> StatisticalWeightMeasure:
    """Most heterogeneous measure over known component states subject to the
    expected-energy constraint: weights exp(-b <h>_n), b fixed by the target."""
    energies = np.array([st.mean(h, s) for s in states])
    q = _solve_exponential_weights(energies, target_energy)
    return measure(list(zip(q, states)))


@dataclass(frozen=True)
class PhasePartition:
    """Labeled disjoint membership predicates over state operators, with an
    optional overflow cell for states no predicate claims."""

    cells: tuple  # of (label, predicate)
    overflow_label: str | None = None

    def classify(self, state: StateOperator) -> str:
        matches = [label for label, pred in self.cells if pred(state)]
        if len(matches) > 1:
            raise ValueError(f"state matched several cells: {matches}")
        if matches:
            return matches[0]
        if self.overflow_label is not None:
            return self.overflow_label
        raise UncoveredSupportError("support state matched no partition cell")


def cell_masses(mu: StatisticalWeightMeasure,
                partition: PhasePartition) -> dict[str, float]:
    masses: dict[str, float] = {}
    for w, s in mu.support:
        label = partition.classify(s)
        masses[label] = masses.get(label, 0.0) + w
    return masses


def partition_uncertainty(mu: StatisticalWeightMeasure,
                          partition: PhasePartition, c: float = 1.0) -> float:
    """I relative to a countable partition: -c sum_cells m ln m over cells
    with nonzero mass.  Refining the partition never decreases it."""
    masses = np.array([m for m in cell_masses(mu, partition).values() if m > 0])
    return -c * float(np.sum(masses * np.log(masses)))


def maxent_partition(cell_mean_energies, target: float) -> np.ndarray:
    """Most probable cell masses exp(-b <h(E_n)>) for the target expected
    energy.  Only the masses are determined: every measure distributing them
    inside the cells is equally probable."""
    energies = np.asarray(cell_mean_energies, dtype=float)
    return _solve_exponential_weights(energies, target)


def measure_moments(mu: StatisticalWeightMeasure, n_max: int,
                    g: Callable[[StateOperator], float] | None = None):
    """Moment sequences sum_k w_k Tr(rho_k^n) and, when g is given,
    sum_k w_k g(rho_k)^n for n = 1..n_max."""
    trace_moments = []
    for n in range(1, n_max + 1):
        trace_moments.append(float(sum(
            w * np.trace(np.linalg.matrix_power(s.matrix, n)).real
            for w, s in mu.support)))
    functional_moments = None
    if g is not None:
        functional_moments = [
            float(sum(w * g(s) ** n for w, s in mu.support))
            for n in range(1, n_max + 1)]
    return trace_moments, functional_moments
