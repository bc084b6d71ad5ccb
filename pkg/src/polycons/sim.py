"""Consensus dynamics: standard, memory-slot and alternating quadratic-filter steps."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Literal, Sequence

import numpy as np

from . import _backend
from .filters import AMode, QuadFilter, factor_steps
from .graph import Edge
from .spectral import SpectrumError, WeightMatrix, from_edge_vector, spectrum

CONVERGED_REL = 1e-10
DIVERGED_REL = 1e6
# below this the deviation is rounding noise; runs stop and rate fits ignore it
FLOOR_REL = 1e-13
NOISE_REL = 1e-12

Action = Literal["minus", "plus", "standard", "skip"]
Verdict = Literal["converged", "diverged", "undecided"]
ACTIONS = ("minus", "plus", "standard", "skip")


class SimulationError(ValueError):
    pass


@dataclass(frozen=True)
class Failure:
    """Link failures on a set of edges.

    ``permanent`` drops them on every step, ``resonant`` on every step whose
    action is ``resonant_on`` (one step out of two for the alternating
    pattern), ``random`` drops each edge independently with probability
    ``prob`` per step.
    """

    mode: Literal["permanent", "resonant", "random"]
    edges: tuple[Edge, ...]
    prob: float = 0.0
    seed: int = 0
    resonant_on: Literal["plus", "minus"] = "plus"

    def __post_init__(self):
        object.__setattr__(
            self, "edges", tuple(sorted((min(i, j), max(i, j)) for i, j in self.edges))
        )
        if self.mode not in ("permanent", "resonant", "random"):
            raise SimulationError(f"unknown failure mode {self.mode!r}")
        if self.mode == "random" and not 0.0 <= self.prob <= 1.0:
            raise SimulationError("failure probability must lie in [0, 1]")


@dataclass(frozen=True)
class Schedule:
    """Cyclic per-step action pattern with an optional failure model."""

    pattern: tuple[Action, ...] = ("minus", "plus")
    failure: Failure | None = None

    def __post_init__(self):
        object.__setattr__(self, "pattern", tuple(self.pattern))
        if not self.pattern:
            raise SimulationError("schedule pattern must be nonempty")
        bad = [a for a in self.pattern if a not in ACTIONS]
        if bad:
            raise SimulationError(f"unknown actions {bad}")


@dataclass(frozen=True)
class SimTrace:
    """Per-step disagreement ``||x - mean(x) 1||`` and drift of the mean."""

    deviations: np.ndarray
    consensus_value_drift: np.ndarray
    steps: int
    verdict: Verdict
    rate_estimate: float
    two_step_rate: float | None = None
    means: np.ndarray = field(default=None, repr=False)

    def rows(self) -> Iterable[tuple[int, float, float]]:
        for k, (d, m) in enumerate(zip(self.deviations, self.consensus_value_drift)):
            yield k, float(d), float(m)


def initial_state(spec: str | Sequence[float], n: int) -> np.ndarray:
    """``"e1"``, ``"random:<seed>"`` or an explicit vector."""
    if isinstance(spec, str):
        if spec == "e1":
            x = np.zeros(n)
            x[0] = 1.0
            return x
        if spec.startswith("random:"):
            return np.random.default_rng(int(spec.split(":", 1)[1])).uniform(-1.0, 1.0, n)
        raise SimulationError(f"unknown initial state {spec!r}")
    x = np.asarray(spec, dtype=float)
    if x.shape != (n,):
        raise SimulationError(f"initial state has shape {x.shape}, expected ({n},)")
    return x


def _verdict(devs: np.ndarray) -> Verdict:
    d0, last = devs[0], devs[-1]
    if d0 == 0.0:
        return "converged"
    if not math.isfinite(last) or last > DIVERGED_REL * d0:
        return "diverged"
    if last < CONVERGED_REL * d0:
        return "converged"
    return "undecided"


def estimate_rate(devs: Sequence[float] | SimTrace, period: int = 1) -> float:
    """Geometric-mean decay per ``period`` steps over the last half of a trace.

    Only samples at multiples of ``period`` and above the rounding-noise
    floor are used. Returns 0 when the deviation underflows straight away
    (finite-time convergence); raises when too few samples remain otherwise.
    """
    if isinstance(devs, SimTrace):
        devs = devs.deviations
    d = np.asarray(devs, dtype=float)[::period]
    if d.size == 0 or d[0] == 0.0:
        return 0.0
    finite = np.isfinite(d)
    if not finite.all():
        d = d[: int(np.argmin(finite))]
    last = int(np.flatnonzero(d > NOISE_REL * d[0])[-1])
    if last < 2:
        if last + 1 < len(d):
            return 0.0  # dropped to rounding noise within two samples
        raise SimulationError("trace too short to estimate a rate")
    first = last // 2
    return float((d[last] / d[first]) ** (1.0 / (last - first)))


def _rate_or_nan(devs, period: int) -> float:
    try:
        return estimate_rate(devs, period)
    except SimulationError:
        return math.nan  # run too short for a fit


def _trace(devs, means, period=1) -> SimTrace:
    drift = np.abs(means - means[0])
    verdict = _verdict(devs)
    rate = _rate_or_nan(devs, 1) if period == 1 else math.sqrt(_rate_or_nan(devs, period))
    two = _rate_or_nan(devs, 2) if period == 2 else None
    return SimTrace(devs, drift, len(devs) - 1, verdict, rate, two, means)


def _run(mats: list[np.ndarray], seq: Sequence[int], x0: np.ndarray, n_obs=-1, period=1) -> SimTrace:
    stack = np.ascontiguousarray(np.stack(mats), dtype=np.float64)
    devs, means, _ = _backend.propagate(
        stack, np.asarray(seq, dtype=np.int64), x0, FLOOR_REL, DIVERGED_REL, n_obs
    )
    return _trace(np.asarray(devs), np.asarray(means), period)


def _check_dim(p: WeightMatrix, x0) -> np.ndarray:
    x = initial_state(x0, p.n)
    if x.shape != (p.n,):
        raise SimulationError(f"state dimension {x.shape} != {p.n}")
    return x


def run_standard(p: WeightMatrix, x0, steps: int) -> SimTrace:
    """``x(k+1) = P x(k)``."""
    if not p.support.is_connected():
        raise SimulationError("support graph is disconnected")
    x = _check_dim(p, x0)
    return _run([np.asarray(p.matrix)], np.zeros(steps, dtype=np.int64), x)


def run_memory_slot(p: WeightMatrix, w1: float, w2: float, x0, steps: int) -> SimTrace:
    """``x(k+1) = (I - w1 L) x(k) + w2 (x(k-1) - x(k))`` with ``L = I - P``, ``x(-1) = x(0)``."""
    x = _check_dim(p, x0)
    n = p.n
    eye = np.eye(n)
    lap = eye - np.asarray(p.matrix)
    companion = np.block([[eye - w1 * lap - w2 * eye, w2 * eye], [eye, np.zeros((n, n))]])
    return _run([companion], np.zeros(steps, dtype=np.int64), np.concatenate([x, x]), n_obs=n)


def apply_link_failure(p: WeightMatrix, edges: Iterable[Edge]) -> WeightMatrix:
    """Zero the failed links; their weight returns to both endpoints' diagonals."""
    w = np.array(p.weights, dtype=float)
    index = {e: k for k, e in enumerate(p.support.edges)}
    for i, j in edges:
        key = (min(i, j), max(i, j))
        if key not in index:
            raise SimulationError(f"edge {key} not in the support graph")
        w[index[key]] = 0.0
    return from_edge_vector(p.support, w)


class _StepMatrices:
    """Lazily built step matrices keyed by (action, failed edge set)."""

    def __init__(self, p: WeightMatrix, f: QuadFilter, a_mode: AMode):
        self.p = p
        self.pair = factor_steps(f, a_mode)
        self.shift = spectrum(p).shift
        self.mats: list[np.ndarray] = []
        self.index: dict[tuple[str, tuple[Edge, ...]], int] = {}

    def _base(self, failed: tuple[Edge, ...]) -> np.ndarray:
        mat = np.asarray(apply_link_failure(self.p, failed).matrix if failed else self.p.matrix)
        return mat

    def get(self, action: str, failed: tuple[Edge, ...]) -> int:
        key = (action, failed if action != "skip" else ())
        if key in self.index:
            return self.index[key]
        base = self._base(key[1])
        n = base.shape[0]
        centered = (base - self.shift * np.eye(n)) / (1.0 - self.shift)
        if action == "minus":
            mat = self.pair.minus_matrix(centered)
        elif action == "plus":
            mat = self.pair.plus_matrix(centered)
        elif action == "standard":
            mat = base
        else:
            mat = np.eye(n)
        self.index[key] = len(self.mats)
        self.mats.append(mat)
        return self.index[key]


def run_p2(
    p: WeightMatrix,
    f: QuadFilter,
    a_mode: AMode = "unit",
    schedule: Schedule | None = None,
    x0="e1",
    steps: int = 200,
) -> SimTrace:
    """Alternate the two factor steps of ``f`` on the centered ``P``.

    The affine centering of ``P`` is applied to failed matrices as well, so
    nodes keep running the same local update when links drop.
    """
    schedule = schedule or Schedule()
    x = _check_dim(p, x0)
    fail = schedule.failure
    if fail is not None:
        for e in fail.edges:
            if not p.support.has_edge(*e):
                raise SimulationError(f"failure edge {e} not in the support graph")
    try:
        builder = _StepMatrices(p, f, a_mode)
    except SpectrumError as exc:
        raise SimulationError(str(exc)) from exc
    rng = np.random.default_rng(fail.seed) if fail is not None and fail.mode == "random" else None
    seq = np.empty(steps, dtype=np.int64)
    pattern = schedule.pattern
    for k in range(steps):
        action = pattern[k % len(pattern)]
        failed: tuple[Edge, ...] = ()
        if fail is not None:
            if fail.mode == "permanent":
                failed = fail.edges
            elif fail.mode == "resonant":
                failed = fail.edges if action == fail.resonant_on else ()
            else:
                hit = rng.random(len(fail.edges)) < fail.prob
                failed = tuple(e for e, h in zip(fail.edges, hit) if h)
        seq[k] = builder.get(action, failed)
    period = 2 if len(pattern) == 2 and set(pattern) == {"minus", "plus"} else 1
    return _run(builder.mats, seq, x, period=period)


def single_edge_failure_scan(
    p: WeightMatrix,
    f: QuadFilter,
    mode: Literal["permanent", "resonant"],
    steps: int = 2000,
    x0s: Sequence = ("e1", "random:0"),
    a_mode: AMode = "unit",
    resonant_on: Literal["plus", "minus"] = "plus",
) -> dict[Edge, Verdict]:
    """Worst verdict over initial states for each single-edge failure."""
    order = {"diverged": 2, "undecided": 1, "converged": 0}
    out: dict[Edge, Verdict] = {}
    for e in p.support.edges:
        sched = Schedule(failure=Failure(mode, (e,), resonant_on=resonant_on))
        worst: Verdict = "converged"
        for x0 in x0s:
            v = run_p2(p, f, a_mode, sched, x0, steps).verdict
            if order[v] > order[worst]:
                worst = v
        out[e] = worst
    return out
