"""Edge-weight optimization for one-step (FSSC) and quadratic-filter consensus.

``optimize_fssc`` minimizes the SLEM, a convex function of the edge weights.
``optimize_p2`` minimizes the optimal quadratic-filter rate ``mu2`` of the
centered weight matrix, which is non-convex; it runs a quasi-Newton descent
from the FSSC weights and from seeded perturbations of them.
"""
from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Literal, NamedTuple

import numpy as np
import scipy.sparse as sp

from .graph import Graph, GraphError, make_complete_bipartite, make_star, square_graph
from .spectral import WeightMatrix, eigensystem, from_edge_vector, laplacian_from_weights

log = logging.getLogger(__name__)

CLUSTER_TOL = 1e-7
CALM_STEPS = 25


@dataclass
class OptimizeOptions:
    max_iters: int = 5000
    tol: float = 1e-9
    restarts: int = 8
    seed: int = 0
    nonneg: bool = False
    step_init: float = 1.0
    perturbation: float = 0.2
    node_perturbation: float = 0.5
    fssc_method: Literal["sdp", "subgradient"] = "sdp"

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")


@dataclass
class PreconditionResult:
    graph: Graph
    weights: np.ndarray
    mu2: float
    mu: float
    sigma: float
    lower_bound: float
    history: list[tuple[int, float]] = field(default_factory=list)
    restart_index: int = 0
    iterations: int = 0

    def weight_matrix(self) -> WeightMatrix:
        return from_edge_vector(self.graph, self.weights)

    def weight_map(self) -> dict[tuple[int, int], float]:
        return {e: float(w) for e, w in zip(self.graph.edges, self.weights)}

    def summary(self) -> dict:
        return {
            "mu": self.mu,
            "sigma": self.sigma,
            "mu2": self.mu2,
            "lower_bound": self.lower_bound,
            "iters": self.iterations,
            "restart_index": self.restart_index,
        }


def _require_connected(g: Graph) -> None:
    if not g.is_connected():
        raise GraphError("graph must be connected")


def _edge_index(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    if not g.m:
        return np.empty(0, dtype=int), np.empty(0, dtype=int)
    i, j = np.array(g.edges).T
    return i, j


def _lambda_grads(g: Graph, vecs: np.ndarray) -> np.ndarray:
    # d lambda_k / d w_e = v_k' (dP/dw_e) v_k = -(v_k[i] - v_k[j])^2
    i, j = _edge_index(g)
    return -((vecs[i, :] - vecs[j, :]) ** 2)


def _cluster_mean(grads: np.ndarray, mask: np.ndarray) -> np.ndarray:
    return grads[:, mask].mean(axis=1)


def slem(g: Graph, w: np.ndarray) -> float:
    """SLEM of ``P(w)`` on ``g``."""
    lams, _ = eigensystem(from_edge_vector(g, w))
    return float(np.abs(lams).max()) if lams.size else 0.0


def slem_and_subgradient(g: Graph, w: np.ndarray) -> tuple[float, np.ndarray]:
    lams, vecs = eigensystem(from_edge_vector(g, w))
    if lams.size == 0:
        return 0.0, np.zeros(g.m)
    grads = _lambda_grads(g, vecs)
    if abs(lams[-1]) >= abs(lams[0]):
        return float(lams[-1]), grads[:, -1]
    return float(-lams[0]), -grads[:, 0]


def mu2_value(g: Graph, w: np.ndarray) -> float:
    return mu2_and_gradient(g, w, with_gradient=False)[0]


def mu2_and_gradient(
    g: Graph, w: np.ndarray, with_gradient: bool = True
) -> tuple[float, np.ndarray | None]:
    """``mu2`` of the centered ``P(w)`` and its gradient in the edge weights.

    Centering is an affine gauge built into the objective: with extreme
    non-consensus eigenvalues ``lmax``, ``lmin`` and midpoint ``s``, the
    centered SLEM is ``(lmax - lmin) / (2 - lmax - lmin)`` and the centered
    SEM is ``min |l - s| / (1 - s)``. Eigenvalues within ``CLUSTER_TOL`` of a
    critical value are treated as one cluster and their derivatives
    averaged. Returns ``inf`` when ``lmax >= 1`` (no convergent filter).
    """
    lams, vecs = eigensystem(from_edge_vector(g, w))
    if lams.size == 0:
        return 0.0, (np.zeros(g.m) if with_gradient else None)
    lmax, lmin = float(lams[-1]), float(lams[0])
    if lmax >= 1.0:
        return math.inf, (np.zeros(g.m) if with_gradient else None)
    s = 0.5 * (lmax + lmin)
    d = 1.0 - s
    num, den = lmax - lmin, 2.0 - lmax - lmin
    mu_c = num / den
    dev = np.abs(lams - s)
    r = float(dev.min())
    sig_c = r / d
    a_ = mu_c**2 - sig_c**2
    b_ = 2.0 - mu_c**2 - sig_c**2
    f = a_ / b_
    if not with_gradient:
        return f, None

    grads = _lambda_grads(g, vecs)
    d_lmax = _cluster_mean(grads, lams > lmax - CLUSTER_TOL)
    d_lmin = _cluster_mean(grads, lams < lmin + CLUSTER_TOL)
    d_s = 0.5 * (d_lmax + d_lmin)
    near = dev < r + CLUSTER_TOL
    signs = np.sign(lams[near] - s)
    d_r = (signs[None, :] * (grads[:, near] - d_s[:, None])).mean(axis=1)
    d_num = d_lmax - d_lmin
    d_den = -(d_lmax + d_lmin)
    d_mu = (d_num * den - num * d_den) / den**2
    d_sig = (d_r * d + r * d_s) / d**2
    d_a = 2.0 * mu_c * d_mu - 2.0 * sig_c * d_sig
    d_b = -2.0 * mu_c * d_mu - 2.0 * sig_c * d_sig
    return f, (d_a * b_ - a_ * d_b) / b_**2


def _best_uniform_weight(g: Graph) -> float:
    # constant weight minimizing the SLEM: 1 - w l2 = -(1 - w ln)
    lap = laplacian_from_weights(g, np.ones(g.m))
    ev = np.linalg.eigvalsh(lap)
    return 2.0 / (ev[1] + ev[-1])


# --------------------------------------------------------------------- FSSC


def _fssc_sdp(g: Graph, nonneg: bool) -> np.ndarray:
    import cvxpy as cp

    n, m = g.n, g.m
    i, j = _edge_index(g)
    k = np.arange(m)
    # column e of B holds vec(b_e b_e'), b_e = e_i - e_j
    rows = np.concatenate([i * n + i, j * n + j, i * n + j, j * n + i])
    cols = np.concatenate([k, k, k, k])
    vals = np.concatenate([np.ones(m), np.ones(m), -np.ones(m), -np.ones(m)])
    basis = sp.csr_matrix((vals, (rows, cols)), shape=(n * n, m))
    w = cp.Variable(m)
    target = (np.eye(n) - np.ones((n, n)) / n).reshape(-1, order="F")
    centered = cp.reshape(target - basis @ w, (n, n), order="F")
    sym = 0.5 * (centered + centered.T)
    problem = cp.Problem(cp.Minimize(cp.sigma_max(sym)), [w >= 0] if nonneg else [])
    w.value = np.full(m, _best_uniform_weight(g))
    status = None
    for solver in ("CLARABEL", "SCS"):
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                problem.solve(solver=solver)
            status = problem.status
        except cp.error.SolverError as exc:  # pragma: no cover - solver availability
            log.debug("FSSC solver %s failed: %s", solver, exc)
            continue
        if status in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE) and w.value is not None:
            break
    if w.value is None:
        raise RuntimeError(f"FSSC semidefinite solve failed (status {status})")
    out = np.asarray(w.value, dtype=float)
    if nonneg:
        out = np.maximum(out, 0.0)
    return out


def _fssc_subgradient(g: Graph, opts: OptimizeOptions) -> tuple[np.ndarray, list]:
    w = np.full(g.m, _best_uniform_weight(g))
    best_w, best_f = w.copy(), slem(g, w)
    avg, avg_weight = np.zeros(g.m), 0.0
    history = [(0, best_f)]
    calm = 0
    for k in range(1, opts.max_iters + 1):
        f, sub = slem_and_subgradient(g, w)
        norm = np.linalg.norm(sub)
        if norm == 0.0 or f == 0.0:
            break
        alpha = opts.step_init * 0.1 / math.sqrt(k)
        w = w - alpha * sub / norm
        if opts.nonneg:
            w = np.maximum(w, 0.0)
        avg += alpha * w
        avg_weight += alpha
        f_new = slem(g, w)
        candidates = [(f_new, w)]
        if k % 10 == 0:
            w_avg = avg / avg_weight
            candidates.append((slem(g, w_avg), w_avg))
        improved = False
        for val, cand in candidates:
            if val < best_f:
                calm = calm + 1 if best_f - val < opts.tol else 0
                best_f, best_w = val, cand.copy()
                improved = True
        if not improved:
            calm += 1
        history.append((k, best_f))
        if calm >= 10 * CALM_STEPS:
            break
    return best_w, history


def optimize_fssc(
    g: Graph, opts: OptimizeOptions | None = None, with_bound: bool = True
) -> PreconditionResult:
    """Edge weights minimizing the SLEM of ``P`` (fastest single-step consensus).

    The default solves the semidefinite formulation; ``fssc_method="subgradient"``
    runs projected subgradient descent with iterate averaging instead.
    """
    opts = opts or OptimizeOptions()
    _require_connected(g)
    if g.m == g.n * (g.n - 1) // 2:
        w = np.full(g.m, 1.0 / g.n)
        history = [(0, 0.0)]
    elif opts.fssc_method == "subgradient":
        w, history = _fssc_subgradient(g, opts)
    else:
        w = _fssc_sdp(g, opts.nonneg)
        history = [(0, slem(g, w))]
    return _result(g, w, history, 0, len(history) - 1, with_bound, opts)


def _result(g, w, history, restart, iters, with_bound, opts) -> PreconditionResult:
    mu_raw = slem(g, w)
    mu2 = mu2_value(g, w)
    lams, _ = eigensystem(from_edge_vector(g, w))
    sigma = float(np.abs(lams).min()) if lams.size else 0.0
    bound = lower_bound_square(g, opts) if with_bound else math.nan
    return PreconditionResult(
        graph=g,
        weights=np.asarray(w, dtype=float),
        mu2=mu2,
        mu=mu_raw,
        sigma=sigma,
        lower_bound=bound,
        history=history,
        restart_index=restart,
        iterations=iters,
    )


def lower_bound_square(g: Graph, opts: OptimizeOptions | None = None) -> float:
    """SLEM of the FSSC on the square graph; no weighting of ``g`` beats it with ``p2``."""
    _require_connected(g)
    sq = square_graph(g)
    if sq.m == g.n * (g.n - 1) // 2:
        return 0.0
    return optimize_fssc(sq, opts, with_bound=False).mu


# ----------------------------------------------------------------- p2 descent


def _weak_wolfe(fg, x, f, grad, d, nonneg, c1=1e-4, c2=0.9, max_evals=60):
    lo, hi, t = 0.0, math.inf, 1.0
    slope = float(grad @ d)
    for _ in range(max_evals):
        x_new = x + t * d
        if nonneg:
            x_new = np.maximum(x_new, 0.0)
        f_new, g_new = fg(x_new)
        if not f_new <= f + c1 * t * slope:
            hi = t
        elif float(g_new @ d) < c2 * slope and not nonneg:
            lo = t
        else:
            return x_new, f_new, g_new
        t = 2.0 * lo if hi == math.inf else 0.5 * (lo + hi)
        if hi - lo < 1e-16:
            break
    if lo > 0.0:
        x_new = x + lo * d
        if nonneg:
            x_new = np.maximum(x_new, 0.0)
        f_new, g_new = fg(x_new)
        if f_new <= f:
            return x_new, f_new, g_new
    return None


def descend_mu2(
    g: Graph, w0: np.ndarray, opts: OptimizeOptions
) -> tuple[np.ndarray, float, list[tuple[int, float]], int]:
    """Local descent on ``mu2`` from ``w0``; returns ``(w, mu2, history, iterations)``.

    BFGS search directions from the cluster-averaged gradient with a weak
    Wolfe line search. The inverse-Hessian estimate resets to a scaled
    identity whenever the direction is not a descent direction or the line
    search fails; a failure from the identity ends the run.
    """

    def fg(x):
        return mu2_and_gradient(g, x)

    x = np.array(w0, dtype=float)
    if opts.nonneg:
        x = np.maximum(x, 0.0)
    f, grad = fg(x)
    if not math.isfinite(f):
        return x, f, [(0, f)], 0
    eye = np.eye(x.size)
    h = eye * opts.step_init
    fresh = True
    history = [(0, f)]
    calm = 0
    it = 0
    for it in range(1, opts.max_iters + 1):
        d = -h @ grad
        if not float(grad @ d) < 0.0:
            h, fresh = eye * opts.step_init, True
            d = -h @ grad
        if not np.any(d):
            break
        step = _weak_wolfe(fg, x, f, grad, d, opts.nonneg)
        if step is None:
            if fresh:
                break
            h, fresh = eye * opts.step_init, True
            continue
        x_new, f_new, g_new = step
        s, y = x_new - x, g_new - grad
        sy = float(s @ y)
        if sy > 1e-16:
            rho = 1.0 / sy
            hy = h @ y
            h = h - rho * (np.outer(s, hy) + np.outer(hy, s)) + (rho * rho * float(y @ hy) + rho) * np.outer(s, s)
            fresh = False
        calm = calm + 1 if f - f_new < opts.tol else 0
        x, f, grad = x_new, f_new, g_new
        history.append((it, f))
        if calm >= CALM_STEPS or f == 0.0:
            break
    return x, f, history, it


def optimize_p2(
    g: Graph,
    opts: OptimizeOptions | None = None,
    fssc: PreconditionResult | None = None,
    with_bound: bool = True,
) -> PreconditionResult:
    """Edge weights minimizing the quadratic-filter rate ``mu2``.

    Restart 0 starts from the FSSC weights. Restart ``r > 0`` multiplies
    them by ``(1 + perturbation * N(0, 1)) * exp(node_perturbation * (u_i + u_j))``
    with one normal ``u`` per node, drawn from the ``(seed, r)`` stream; the
    node factors break symmetries between hubs that per-edge noise rarely
    does (K(2, m) is the standard example). The best restart wins; ties go to
    the lowest index. Only a local optimum is claimed.
    """
    opts = opts or OptimizeOptions()
    _require_connected(g)
    if fssc is None:
        fssc = optimize_fssc(g, opts, with_bound=False)
    base = np.asarray(fssc.weights, dtype=float)
    ends = _edge_index(g)
    best = None
    for r in range(opts.restarts):
        if r == 0:
            start = base
        else:
            rng = np.random.default_rng([opts.seed, r])
            edge_noise = 1.0 + opts.perturbation * rng.standard_normal(base.size)
            u = rng.standard_normal(g.n)
            start = base * edge_noise * np.exp(opts.node_perturbation * (u[ends[0]] + u[ends[1]]))
        w, f, history, iters = descend_mu2(g, start, opts)
        log.debug("restart %d: mu2=%.6g after %d iterations", r, f, iters)
        if best is None or f < best[1]:
            best = (w, f, history, r, iters)
    w, _, history, r, iters = best
    return _result(g, w, history, r, iters, with_bound, opts)


# ------------------------------------------------------- analytic instances


class K2mBreaking(NamedTuple):
    q_plus: float
    q_minus: float


def k2m_weights(m: int, p: float, q: float) -> dict[tuple[int, int], float]:
    """Weights on K(2, m): hub 0 links with weight ``p``, hub 1 with weight ``q``."""
    g = make_complete_bipartite(2, m)
    return {(i, j): (p if i == 0 else q) for i, j in g.edges}


def k2m_symmetry_breaking(m: int, p: float = 1.0) -> K2mBreaking:
    """The two ratios ``q/p`` that collapse K(2, m) to two nonzero Laplacian eigenvalues.

    Each root is checked against a direct eigendecomposition.
    """
    if m < 2:
        raise ValueError(f"need m >= 2, got {m}")
    if p <= 0:
        raise ValueError("p must be positive")
    disc = math.sqrt(m * m - 4.0)
    out = K2mBreaking(0.5 * (m + disc) * p, 0.5 * (m - disc) * p)
    for q in out:
        vals = distinct_laplacian_eigenvalues(make_complete_bipartite(2, m), k2m_weights(m, p, q))
        if len(vals) != 2:
            raise ArithmeticError(f"q={q} does not collapse the K(2,{m}) spectrum: {vals}")
    return out


def distinct_laplacian_eigenvalues(
    g: Graph, weights: dict[tuple[int, int], float], tol: float = 1e-9
) -> list[float]:
    """Distinct nonzero eigenvalues of the weighted Laplacian (clustered within ``tol``)."""
    w = np.array([weights[e] for e in g.edges], dtype=float)
    ev = np.sort(np.linalg.eigvalsh(laplacian_from_weights(g, w)))
    scale = max(1.0, float(np.abs(ev).max()))
    out: list[float] = []
    for v in ev:
        if abs(v) <= tol * scale:
            continue
        if out and abs(v - out[-1]) <= tol * scale:
            continue
        out.append(float(v))
    return out


@dataclass
class WitnessReport:
    confirmed: bool
    vacuous: bool
    entries: dict[tuple[int, int], float]
    combination: np.ndarray
    implication: str
    residual: float | None = None

    def rows(self) -> list[tuple[str, float]]:
        return [(f"({i + 1},{j + 1})", v) for (i, j), v in sorted(self.entries.items())]


LEAF_PAIRS_TARGET = ((1, 2), (3, 4))
LEAF_PAIRS_CROSS = ((1, 3), (1, 4), (2, 3), (2, 4))


def _star_p2(weights: np.ndarray, z_sq: float) -> np.ndarray:
    g = make_star(4)
    p = np.eye(5) - laplacian_from_weights(g, np.asarray(weights, dtype=float))
    return (p @ p - z_sq * np.eye(5)) / (1.0 - z_sq)


def nonconvexity_witness(
    weight: float = 0.4,
    z_sq: float = 0.25,
    restarts: int = 16,
    seed: int = 0,
    fit: bool = True,
) -> WitnessReport:
    """Midpoint of two filtered star matrices that no single filtered star matrix equals.

    On K(1, 4) (hub 0, leaves 1-4) the first matrix weights hub links to
    leaves 1, 2 and the second to leaves 3, 4, each passed through
    ``(P^2 - z_sq) / (1 - z_sq)``. Their midpoint links leaves 1-2 and 3-4
    but no cross pair. For any star weighting, the leaf-leaf entry ``(i, j)``
    of any quadratic polynomial in ``P`` is proportional to ``w_i w_j``, so
    the two links force all four cross entries nonzero. With ``fit`` the
    report also carries the best Frobenius distance from the midpoint to a
    quadratic polynomial of a star matrix, found by multi-start least squares.
    """
    first = _star_p2([weight, weight, 0.0, 0.0], z_sq)
    second = _star_p2([0.0, 0.0, weight, weight], z_sq)
    combo = 0.5 * (first + second)
    entries = {pair: float(combo[pair]) for pair in LEAF_PAIRS_TARGET + LEAF_PAIRS_CROSS}
    tiny = 1e-14
    links = all(abs(entries[pq]) > tiny for pq in LEAF_PAIRS_TARGET)
    no_cross = all(abs(entries[pq]) <= tiny for pq in LEAF_PAIRS_CROSS)
    vacuous = not links
    confirmed = links and no_cross
    if vacuous:
        implication = "vacuous: the midpoint has no leaf-leaf links"
    else:
        implication = (
            "entries (2,3) and (4,5) require w2 w3 != 0 and w4 w5 != 0, hence all four "
            "cross entries (2,4), (2,5), (3,4), (3,5) ~ w_i w_j are nonzero; the midpoint "
            + ("has them all zero: contradiction" if no_cross else "does not vanish there")
        )
    residual = _best_fit_residual(combo, restarts, seed) if fit and confirmed else None
    return WitnessReport(confirmed, vacuous, entries, combo, implication, residual)


def _best_fit_residual(target: np.ndarray, restarts: int, seed: int) -> float:
    """min over star weights and roots (z1, z2) of ||p2(P) - target||_F."""
    from scipy.optimize import least_squares

    g = make_star(4)

    def resid(x):
        w, z1, z2 = x[:4], x[4], x[5]
        p = np.eye(5) - laplacian_from_weights(g, w)
        den = (1.0 - z1) * (1.0 - z2)
        if abs(den) < 1e-8:
            den = math.copysign(1e-8, den if den else 1.0)
        eye = np.eye(5)
        return (((p - z1 * eye) @ (p - z2 * eye)) / den - target).ravel()

    rng = np.random.default_rng(seed)
    best = math.inf
    for _ in range(restarts):
        x0 = np.concatenate([rng.uniform(-1.0, 1.0, 4), rng.uniform(-0.95, 0.95, 2)])
        sol = least_squares(resid, x0, method="lm", xtol=1e-14, ftol=1e-14, max_nfev=20000)
        best = min(best, float(np.linalg.norm(sol.fun)))
    return best


def star_deadbeat_weight(m: int) -> float:
    """Uniform weight centering the star K(1, m): Laplacian spectrum {w, (m+1)w}."""
    return 2.0 / (m + 2)


def uniform_centered_weight(g: Graph) -> float:
    """Uniform weight that centers ``P = I - wL`` for the unweighted Laplacian."""
    return _best_uniform_weight(g)


__all__ = [
    "OptimizeOptions",
    "PreconditionResult",
    "optimize_fssc",
    "optimize_p2",
    "descend_mu2",
    "lower_bound_square",
    "k2m_symmetry_breaking",
    "k2m_weights",
    "distinct_laplacian_eigenvalues",
    "nonconvexity_witness",
    "WitnessReport",
    "mu2_and_gradient",
    "mu2_value",
    "slem",
    "slem_and_subgradient",
    "star_deadbeat_weight",
    "uniform_centered_weight",
]
