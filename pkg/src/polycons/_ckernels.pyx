# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; see _pykernels for the reference semantics."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt, isfinite, INFINITY

cnp.import_array()


def minmax_grid(lams, grid):
    cdef double[::1] lv = np.ascontiguousarray(lams, dtype=np.float64)
    cdef double[::1] gv = np.ascontiguousarray(grid, dtype=np.float64)
    cdef Py_ssize_t nl = lv.shape[0], ng = gv.shape[0]
    cdef Py_ssize_t i, j, k
    cdef double[:, ::1] fac = np.empty((ng, nl), dtype=np.float64)
    cdef double d, worst, v, best = INFINITY
    cdef Py_ssize_t bi = 0, bj = 0
    for i in range(ng):
        d = 1.0 - gv[i]
        for k in range(nl):
            if fabs(d) < 1e-15:
                fac[i, k] = INFINITY
            else:
                fac[i, k] = fabs((lv[k] - gv[i]) / d)
    for i in range(ng):
        for j in range(i, ng):
            worst = 0.0
            for k in range(nl):
                v = fac[i, k] * fac[j, k]
                if v > worst:
                    worst = v
                    if worst >= best:
                        break
            if worst < best:
                best = worst
                bi = i
                bj = j
    return best, bi, bj


def canonical_codes(edge_bits, perm_maps):
    cdef cnp.int64_t[:, ::1] bits = np.ascontiguousarray(edge_bits, dtype=np.int64)
    cdef cnp.int64_t[:, ::1] pm = np.ascontiguousarray(perm_maps, dtype=np.int64)
    cdef Py_ssize_t ng = bits.shape[0], ne = bits.shape[1], npm = pm.shape[0]
    cdef Py_ssize_t g, p, e
    cdef cnp.int64_t code, best
    out = np.empty(ng, dtype=np.int64)
    cdef cnp.int64_t[::1] ov = out
    for g in range(ng):
        best = -1
        for p in range(npm):
            code = 0
            for e in range(ne):
                if bits[g, e]:
                    code |= (<cnp.int64_t>1) << pm[p, e]
            if best < 0 or code < best:
                best = code
        ov[g] = best
    return out


def propagate(mats, seq, x0, double floor_rel, double ceil_rel, Py_ssize_t n_obs=-1):
    cdef double[:, :, ::1] mv = np.ascontiguousarray(mats, dtype=np.float64)
    cdef cnp.int64_t[::1] sv = np.ascontiguousarray(seq, dtype=np.int64)
    cdef Py_ssize_t n = mv.shape[1], steps = sv.shape[0]
    cdef Py_ssize_t k, i, j, done = 0
    x_arr = np.array(x0, dtype=np.float64)
    cdef double[::1] x = x_arr
    cdef double[::1] y = np.empty(n, dtype=np.float64)
    devs = np.empty(steps + 1, dtype=np.float64)
    means = np.empty(steps + 1, dtype=np.float64)
    cdef double[::1] dv = devs
    cdef double[::1] mn = means
    cdef double acc, m, d0, s
    cdef Py_ssize_t idx
    cdef Py_ssize_t obs = n if n_obs < 0 else n_obs

    m = 0.0
    for i in range(obs):
        m += x[i]
    m /= obs
    s = 0.0
    for i in range(obs):
        s += (x[i] - m) * (x[i] - m)
    dv[0] = sqrt(s)
    mn[0] = m
    d0 = dv[0]
    for k in range(steps):
        idx = sv[k]
        for i in range(n):
            acc = 0.0
            for j in range(n):
                acc += mv[idx, i, j] * x[j]
            y[i] = acc
        m = 0.0
        for i in range(n):
            x[i] = y[i]
        for i in range(obs):
            m += x[i]
        m /= obs
        s = 0.0
        for i in range(obs):
            s += (x[i] - m) * (x[i] - m)
        dv[k + 1] = sqrt(s)
        mn[k + 1] = m
        done = k + 1
        if not isfinite(dv[k + 1]):
            break
        if dv[k + 1] > ceil_rel * d0 or dv[k + 1] < floor_rel * d0:
            break
    return devs[:done + 1], means[:done + 1], done
