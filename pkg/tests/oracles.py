"""Brute-force oracles, deliberately independent of the library internals.

Everything here works from the dense tensor and literal textbook sums, so
the production contractions have something honest to be checked against.
"""

import itertools

import numpy as np


def ricci_bruteforce(t: np.ndarray) -> np.ndarray:
    """<ric x, y> = -1/2 sum_ij <mu(x,e_i),e_j><mu(y,e_i),e_j>
    + 1/4 sum_ij <mu(e_i,e_j),x><mu(e_i,e_j),y>, by literal loops."""
    n = t.shape[0]
    ric = np.zeros((n, n))
    for r in range(n):
        for s in range(n):
            acc = 0.0
            for i in range(n):
                for j in range(n):
                    acc += -0.5 * t[r, i, j] * t[s, i, j]
                    acc += 0.25 * t[i, j, r] * t[i, j, s]
            ric[r, s] = acc
    return ric


def inner_bruteforce(t1: np.ndarray, t2: np.ndarray) -> float:
    return float(np.sum(t1 * t2))


def f_functional(t: np.ndarray) -> float:
    ric = ricci_bruteforce(t)
    norm2 = inner_bruteforce(t, t)
    return 16.0 / norm2**2 * float(np.trace(ric @ ric))


def grad_fd(t: np.ndarray, h: float = 1e-5) -> np.ndarray:
    """Central finite differences of F over every tensor coordinate
    (i < j), written back skew-symmetrically."""
    n = t.shape[0]
    g = np.zeros_like(t)
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                tp = t.copy()
                tp[i, j, k] += h
                tp[j, i, k] -= h
                tm = t.copy()
                tm[i, j, k] -= h
                tm[j, i, k] += h
                d = (f_functional(tp) - f_functional(tm)) / (2 * h)
                g[i, j, k] = d / 2.0  # ordered pairs each carry half
                g[j, i, k] = -d / 2.0
    return g


def simplex_grid(m: int, k: int):
    """All nonnegative integer m-tuples summing to k, scaled by 1/k."""
    for cuts in itertools.combinations(range(k + m - 1), m - 1):
        parts = []
        prev = -1
        for c in cuts:
            parts.append(c - prev - 1)
            prev = c
        parts.append(k + m - 2 - prev)
        yield np.array(parts, dtype=float) / k


def min_norm_point_oracle(points: np.ndarray) -> np.ndarray:
    """Min-norm point of a convex hull: coarse simplex grid, refinement
    around the best combination, then a local QP polish (SLSQP)."""
    from scipy.optimize import minimize

    pts = np.asarray(points, dtype=float)
    m = pts.shape[0]
    if m == 1:
        return pts[0]
    best = None
    best_val = np.inf
    for lam in simplex_grid(m, 8):
        x = lam @ pts
        v = x @ x
        if v < best_val:
            best_val, best = v, lam
    # refine: local grid around best at decreasing scales
    rng_scales = [0.3, 0.1, 0.03, 0.01, 0.003, 0.001, 0.0003, 0.0001]
    for scale in rng_scales:
        improved = True
        while improved:
            improved = False
            for a in range(m):
                for b in range(m):
                    if a == b:
                        continue
                    lam = best.copy()
                    shift = min(scale, lam[a])
                    if shift <= 0:
                        continue
                    lam[a] -= shift
                    lam[b] += shift
                    x = lam @ pts
                    v = x @ x
                    if v < best_val - 1e-18:
                        best_val, best = v, lam
                        improved = True

    def objective(lam):
        x = lam @ pts
        return float(x @ x)

    res = minimize(
        objective,
        best,
        method="SLSQP",
        bounds=[(0.0, 1.0)] * m,
        constraints=[{"type": "eq", "fun": lambda lam: np.sum(lam) - 1.0}],
        options={"maxiter": 500, "ftol": 1e-16},
    )
    lam = res.x if res.fun <= best_val else best
    return lam @ pts
