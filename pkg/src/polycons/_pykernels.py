"""Pure numpy implementations of the hot kernels.

Same signatures and results as the compiled ``_ckernels`` module; used when
the extension is unavailable or ``POLYCONS_PURE_PYTHON`` is set.
"""
from __future__ import annotations

import numpy as np

_GRAPH_CHUNK = 2048


def minmax_grid(lams, grid):
    """Minimize max_k |(l_k - z1)(l_k - z2)| / |(1 - z1)(1 - z2)| over grid pairs z1 <= z2.

    Returns ``(value, i, j)`` with ``grid[i] <= grid[j]`` the minimizing pair.
    Grid points at z == 1 are skipped.
    """
    lams = np.asarray(lams, dtype=np.float64)
    grid = np.asarray(grid, dtype=np.float64)
    denom = 1.0 - grid
    bad = np.abs(denom) < 1e-15
    denom = np.where(bad, 1.0, denom)
    # the objective factorizes: |a_k(z1)| * |a_k(z2)|
    factors = np.abs((lams[:, None] - grid[None, :]) / denom[None, :])
    factors[:, bad] = np.inf
    worst = np.multiply.outer(factors[0], factors[0])
    for row in factors[1:]:
        np.maximum(worst, np.multiply.outer(row, row), out=worst)
    worst[np.tril_indices(grid.size, -1)] = np.inf
    flat = int(np.argmin(worst))
    i, j = divmod(flat, grid.size)
    return float(worst[i, j]), i, j


def canonical_codes(edge_bits, perm_maps):
    """Minimal permuted adjacency code per graph.

    ``edge_bits`` is a (graphs, edges) 0/1 array over a fixed edge ordering,
    ``perm_maps[p, e]`` the position edge ``e`` moves to under permutation ``p``.
    """
    edge_bits = np.asarray(edge_bits, dtype=np.int64)
    perm_maps = np.asarray(perm_maps, dtype=np.int64)
    weights = np.left_shift(np.int64(1), perm_maps)  # (perms, edges)
    out = np.empty(edge_bits.shape[0], dtype=np.int64)
    for start in range(0, edge_bits.shape[0], _GRAPH_CHUNK):
        block = edge_bits[start:start + _GRAPH_CHUNK]
        out[start:start + block.shape[0]] = (block @ weights.T).min(axis=1)
    return out


def propagate(mats, seq, x0, floor_rel, ceil_rel, n_obs=-1):
    """Apply ``x <- mats[seq[k]] @ x`` for each step, tracking disagreement and mean.

    Disagreement and mean are taken over the first ``n_obs`` entries (all if
    negative). Stops early once the disagreement leaves
    ``[floor_rel, ceil_rel]`` times its initial value. Returns
    ``(deviations, means, steps_done)``.
    """
    mats = np.asarray(mats, dtype=np.float64)
    seq = np.asarray(seq, dtype=np.int64)
    x = np.array(x0, dtype=np.float64)
    obs = x.size if n_obs < 0 else n_obs
    steps = seq.size
    devs = np.empty(steps + 1)
    means = np.empty(steps + 1)
    m = x[:obs].mean()
    devs[0] = np.linalg.norm(x[:obs] - m)
    means[0] = m
    d0 = devs[0]
    done = 0
    for k in range(steps):
        x = mats[seq[k]] @ x
        m = x[:obs].mean()
        devs[k + 1] = np.linalg.norm(x[:obs] - m)
        means[k + 1] = m
        done = k + 1
        if not np.isfinite(devs[k + 1]):
            break
        if devs[k + 1] > ceil_rel * d0 or devs[k + 1] < floor_rel * d0:
            break
    return devs[:done + 1], means[:done + 1], done
