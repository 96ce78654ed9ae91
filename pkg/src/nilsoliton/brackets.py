"""Skew-symmetric algebra structures on R^n given by structure constants.

A bracket mu is stored sparsely as a map (i, j, k) -> mu_ij^k with
1 <= i < j <= n and 1 <= k <= n (1-based, matching the algebra file format);
evaluation at (j, i) negates.  Two scalar modes are supported: exact
rationals and float64.  Conversions between modes are always explicit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from . import ratlin
from .errors import (
    DimensionMismatch,
    NotALieBracket,
    ParseError,
    SingularMap,
)

RATIONAL = "rational"
FLOAT = "float"

#: single tolerance knob for float-mode rank / zero decisions
DEFAULT_TOL = 1e-9


def _coerce(value, mode):
    if mode == RATIONAL:
        if isinstance(value, float):
            raise TypeError("float scalar in rational mode; convert explicitly")
        return Fraction(value)
    return float(value)


@dataclass(frozen=True)
class BracketTensor:
    """Sparse skew-symmetric bilinear map mu in Lambda^2(R^n)* x R^n."""

    dim: int
    entries: Mapping[tuple[int, int, int], object]
    scalar_mode: str = RATIONAL

    def __post_init__(self):
        if self.dim < 0:
            raise ValueError("dimension must be nonnegative")
        if self.scalar_mode not in (RATIONAL, FLOAT):
            raise ValueError(f"unknown scalar mode {self.scalar_mode!r}")
        canon = {}
        for (i, j, k), c in dict(self.entries).items():
            if not (1 <= i <= self.dim and 1 <= j <= self.dim and 1 <= k <= self.dim):
                raise ValueError(f"index out of range: {(i, j, k)}")
            if i == j:
                raise ValueError(f"diagonal pair in entry {(i, j, k)}")
            if j < i:
                i, j, c = j, i, -c
            c = _coerce(c, self.scalar_mode)
            if c != 0:
                canon[(i, j, k)] = canon.get((i, j, k), _coerce(0, self.scalar_mode)) + c
        canon = {key: c for key, c in canon.items() if c != 0}
        object.__setattr__(self, "entries", canon)

    # -- basic queries ------------------------------------------------------

    def __bool__(self):
        return bool(self.entries)

    def coefficient(self, i: int, j: int, k: int):
        if i == j:
            return _coerce(0, self.scalar_mode)
        if i < j:
            return self.entries.get((i, j, k), _coerce(0, self.scalar_mode))
        return -self.entries.get((j, i, k), _coerce(0, self.scalar_mode))

    def bracket(self, i: int, j: int) -> list:
        """Coordinates of mu(e_i, e_j)."""
        out = [_coerce(0, self.scalar_mode)] * self.dim
        for k in range(1, self.dim + 1):
            out[k - 1] = self.coefficient(i, j, k)
        return out

    def apply(self, x, y):
        """mu(x, y) for coordinate vectors x, y."""
        out = [_coerce(0, self.scalar_mode)] * self.dim
        for (i, j, k), c in self.entries.items():
            w = c * (x[i - 1] * y[j - 1] - x[j - 1] * y[i - 1])
            out[k - 1] += w
        return out

    def norm2(self):
        """Square norm; every unordered bracket counts twice."""
        return 2 * sum(c * c for c in self.entries.values())

    def norm(self) -> float:
        return float(np.sqrt(float(self.norm2())))

    def dense(self) -> np.ndarray:
        """Full skew tensor T[i, j, :] = mu(e_i, e_j) as a float array."""
        t = np.zeros((self.dim, self.dim, self.dim))
        for (i, j, k), c in self.entries.items():
            t[i - 1, j - 1, k - 1] = float(c)
            t[j - 1, i - 1, k - 1] = -float(c)
        return t

    # -- mode conversions (explicit, never implicit) ------------------------

    def to_float(self) -> "BracketTensor":
        if self.scalar_mode == FLOAT:
            return self
        return BracketTensor(self.dim, {k: float(c) for k, c in self.entries.items()}, FLOAT)

    def to_rational(self, max_den: int = 10**6) -> "BracketTensor":
        if self.scalar_mode == RATIONAL:
            return self
        ent = {k: ratlin.rationalize(c, max_den) for k, c in self.entries.items()}
        return BracketTensor(self.dim, ent, RATIONAL)

    def scaled(self, factor) -> "BracketTensor":
        factor = _coerce(factor, self.scalar_mode)
        return BracketTensor(
            self.dim, {k: factor * c for k, c in self.entries.items()}, self.scalar_mode
        )

    def normalized(self, radius: float = 2.0) -> "BracketTensor":
        """Float-mode copy rescaled to the sphere of the given radius."""
        mu = self.to_float()
        n = mu.norm()
        if n == 0:
            raise ZeroDivisionError("cannot normalize the zero bracket")
        return mu.scaled(radius / n)

    # -- serialization ------------------------------------------------------

    def to_json_dict(self) -> dict:
        brackets = []
        for (i, j, k) in sorted(self.entries):
            c = self.entries[(i, j, k)]
            text = ratlin.format_scalar(c) if self.scalar_mode == RATIONAL else repr(float(c))
            brackets.append({"i": i, "j": j, "k": k, "c": text})
        return {"dim": self.dim, "scalar_mode": self.scalar_mode, "brackets": brackets}

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, **kwargs)

    @staticmethod
    def from_json_dict(data: dict) -> "BracketTensor":
        try:
            dim = int(data["dim"])
            mode = data.get("scalar_mode", RATIONAL)
            entries = {}
            for b in data.get("brackets", []):
                key = (int(b["i"]), int(b["j"]), int(b["k"]))
                text = str(b["c"])
                c = ratlin.parse_scalar(text) if mode == RATIONAL else float(text)
                entries[key] = entries.get(key, 0) + c
        except (KeyError, ValueError, TypeError, ZeroDivisionError) as exc:
            raise ParseError(f"bad algebra file: {exc}") from exc
        return BracketTensor(dim, entries, mode)

    @staticmethod
    def from_json(text: str) -> "BracketTensor":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(str(exc)) from exc
        return BracketTensor.from_json_dict(data)


def from_dense(t: np.ndarray, tol: float = DEFAULT_TOL) -> BracketTensor:
    """Sparse float tensor from a dense skew array, dropping |c| <= tol."""
    n = t.shape[0]
    entries = {}
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                c = float(t[i, j, k])
                if abs(c) > tol:
                    entries[(i + 1, j + 1, k + 1)] = c
    return BracketTensor(n, entries, FLOAT)


def basis_vector(dim: int, i: int, j: int, k: int, mode: str = RATIONAL) -> BracketTensor:
    """The weight vector v_ijk (single unit structure constant)."""
    return BracketTensor(dim, {(i, j, k): 1}, mode)


# ---------------------------------------------------------------------------
# weights


def weight_vector(i: int, j: int, k: int, n: int) -> list[Fraction]:
    """Diagonal of the weight attached to the constant mu_ij^k: +1 at k,
    -1 at i and at j.  Its trace is always -1."""
    d = [Fraction(0)] * n
    d[k - 1] += 1
    d[i - 1] -= 1
    d[j - 1] -= 1
    return d


def support_weights(mu: BracketTensor) -> list[tuple[tuple[int, int, int], list[Fraction]]]:
    return [(key, weight_vector(*key, mu.dim)) for key in sorted(mu.entries)]


# ---------------------------------------------------------------------------
# the GL(n) action and its differential


def _check_same(mu: BracketTensor, lam: BracketTensor):
    if mu.dim != lam.dim:
        raise DimensionMismatch(f"dim {mu.dim} vs {lam.dim}")
    if mu.scalar_mode != lam.scalar_mode:
        raise DimensionMismatch("mixed scalar modes; convert explicitly")


def act(g, mu: BracketTensor) -> BracketTensor:
    """Base-change action (g.mu)(x, y) = g mu(g^-1 x, g^-1 y)."""
    n = mu.dim
    if mu.scalar_mode == FLOAT:
        g = np.asarray(g, dtype=float)
        if g.shape != (n, n):
            raise DimensionMismatch("matrix shape does not match bracket dimension")
        if abs(np.linalg.det(g)) < DEFAULT_TOL:
            raise SingularMap("matrix is singular within tolerance")
        ginv = np.linalg.inv(g)
        t = mu.dense()
        out = np.einsum("km,pqm,pi,qj->ijk", g, t, ginv, ginv, optimize=True)
        return from_dense(out, tol=0.0)
    g = [[Fraction(x) for x in row] for row in g]
    if len(g) != n or any(len(row) != n for row in g):
        raise DimensionMismatch("matrix shape does not match bracket dimension")
    ginv = ratlin.inverse(g)
    if ginv is None:
        raise SingularMap("matrix is not invertible")
    entries: dict[tuple[int, int, int], Fraction] = {}
    for (p, q, m), c in mu.entries.items():
        gm = [g[k][m - 1] for k in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                f = c * (ginv[p - 1][i] * ginv[q - 1][j] - ginv[p - 1][j] * ginv[q - 1][i])
                if f == 0:
                    continue
                for k in range(n):
                    if gm[k]:
                        key = (i + 1, j + 1, k + 1)
                        entries[key] = entries.get(key, Fraction(0)) + f * gm[k]
    return BracketTensor(n, entries, RATIONAL)


def pi(alpha, mu: BracketTensor) -> BracketTensor:
    """Differential of the action: pi(a)mu = a mu(.,.) - mu(a.,.) - mu(.,a.)."""
    n = mu.dim
    if mu.scalar_mode == FLOAT:
        alpha = np.asarray(alpha, dtype=float)
        if alpha.shape != (n, n):
            raise DimensionMismatch("matrix shape does not match bracket dimension")
        t = mu.dense()
        out = (
            np.einsum("km,ijm->ijk", alpha, t)
            - np.einsum("pi,pjk->ijk", alpha, t)
            - np.einsum("pj,ipk->ijk", alpha, t)
        )
        return from_dense(out, tol=0.0)
    alpha = [[Fraction(x) for x in row] for row in alpha]
    if len(alpha) != n or any(len(row) != n for row in alpha):
        raise DimensionMismatch("matrix shape does not match bracket dimension")
    entries: dict[tuple[int, int, int], Fraction] = {}

    def add(i, j, k, v):
        if v == 0 or i == j:
            return
        if j < i:
            i, j, v = j, i, -v
        key = (i, j, k)
        entries[key] = entries.get(key, Fraction(0)) + v

    for (i, j, m), c in mu.entries.items():
        for k in range(1, n + 1):
            add(i, j, k, alpha[k - 1][m - 1] * c)  # a mu(.,.)
        for p in range(1, n + 1):
            add(p, j, m, -alpha[i - 1][p - 1] * c)  # -mu(a., .)
            add(i, p, m, -alpha[j - 1][p - 1] * c)  # -mu(., a.)
    return BracketTensor(n, entries, RATIONAL)


def inner(mu: BracketTensor, lam: BracketTensor):
    """Inner product on brackets, summed over ordered index pairs."""
    _check_same(mu, lam)
    acc = _coerce(0, mu.scalar_mode)
    for key, c in mu.entries.items():
        d = lam.entries.get(key)
        if d is not None:
            acc += c * d
    return 2 * acc


# ---------------------------------------------------------------------------
# Jacobi and nilpotency


def jacobiator(mu: BracketTensor, i: int, j: int, k: int) -> list:
    """mu(mu(e_i,e_j),e_k) + mu(mu(e_j,e_k),e_i) + mu(mu(e_k,e_i),e_j)."""
    n = mu.dim
    e = [[_coerce(1 if a == b else 0, mu.scalar_mode) for a in range(n)] for b in range(n)]
    out = [_coerce(0, mu.scalar_mode)] * n
    for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
        v = mu.apply(mu.bracket(a, b), e[c - 1])
        out = [x + y for x, y in zip(out, v)]
    return out


def jacobi_defect2(mu: BracketTensor):
    """Square norm of the Jacobiator over all basis triples (exact in
    rational mode); zero iff mu is a Lie bracket."""
    acc = _coerce(0, mu.scalar_mode)
    n = mu.dim
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            for k in range(j + 1, n + 1):
                v = jacobiator(mu, i, j, k)
                acc += sum(x * x for x in v)
    return acc


def jacobi_defect(mu: BracketTensor) -> float:
    return float(np.sqrt(float(jacobi_defect2(mu))))


def is_lie_bracket(mu: BracketTensor, tol: float = DEFAULT_TOL) -> bool:
    if mu.scalar_mode == RATIONAL:
        return jacobi_defect2(mu) == 0
    return jacobi_defect(mu) <= tol


def _span_rank(vectors, mode, tol):
    if not vectors:
        return 0
    if mode == RATIONAL:
        return ratlin.rank(vectors)
    a = np.array([[float(x) for x in v] for v in vectors], dtype=float)
    return int(np.linalg.matrix_rank(a, tol=tol))


def lower_central_dims(mu: BracketTensor, tol: float = DEFAULT_TOL) -> list[int]:
    """Dimensions of C^2, C^3, ... down to the first zero term."""
    n = mu.dim
    mode = mu.scalar_mode
    basis = [[_coerce(1 if a == b else 0, mode) for a in range(n)] for b in range(n)]
    current = basis  # C^1 = whole algebra
    dims = []
    for _ in range(n + 1):
        images = [mu.apply(x, y) for x in current for y in basis]
        images = [v for v in images if any(v)]
        r = _span_rank(images, mode, tol)
        dims.append(r)
        if r == 0:
            break
        if mode == RATIONAL:
            red, pivots, _ = ratlin.rref(images)
            current = [red[row] for row, _ in pivots]
        else:
            a = np.array([[float(x) for x in v] for v in images])
            _, s, vt = np.linalg.svd(a)
            current = [list(vt[t]) for t in range(r)]
        if len(dims) > 1 and dims[-1] == dims[-2]:
            # the series stabilized at a nonzero term: not nilpotent
            break
    return dims


def nilpotency(mu: BracketTensor, tol: float = DEFAULT_TOL) -> tuple[bool, int | None]:
    """(is_nilpotent, step).  Step p is the smallest with C^{p+1} = 0."""
    if not is_lie_bracket(mu, tol):
        raise NotALieBracket("Jacobi identity fails")
    dims = lower_central_dims(mu, tol)
    if dims[-1] != 0:
        return False, None
    return True, len(dims)


# ---------------------------------------------------------------------------
# derivations


def _pi_matrix_rows(mu: BracketTensor):
    """Rows of the linear map a -> pi(a)mu over the n^2 unknowns a_pq
    (row index: component (i, j, k) with i < j)."""
    n = mu.dim
    rows: dict[tuple[int, int, int], dict[int, Fraction]] = {}

    def add(i, j, k, col, v):
        if i == j or v == 0:
            return
        if j < i:
            i, j, v = j, i, -v
        rows.setdefault((i, j, k), {})
        rows[(i, j, k)][col] = rows[(i, j, k)].get(col, Fraction(0)) + v

    def col(p, q):  # unknown a_pq, zero-based
        return p * n + q

    for (i, j, m), c in mu.entries.items():
        for k in range(1, n + 1):
            add(i, j, k, col(k - 1, m - 1), c)
        for p in range(1, n + 1):
            add(p, j, m, col(i - 1, p - 1), -c)
            add(i, p, m, col(j - 1, p - 1), -c)
    return rows


@dataclass(frozen=True)
class DerivationSpace:
    """Basis of the nullspace of a -> pi(a)mu inside n x n matrices."""

    dim: int
    basis: tuple
    scalar_mode: str = RATIONAL

    def __len__(self):
        return len(self.basis)

    @property
    def orbit_dim(self) -> int:
        return self.dim * self.dim - len(self.basis)

    def contains(self, matrix, tol: float = DEFAULT_TOL) -> bool:
        flat = [x for row in matrix for x in row]
        vectors = [[x for row in b for x in row] for b in self.basis]
        if not vectors:
            return all(x == 0 for x in flat)
        if self.scalar_mode == RATIONAL:
            vectors = [[Fraction(x) for x in v] for v in vectors]
            flat = [Fraction(x) for x in flat]
            return ratlin.rank(vectors + [flat]) == ratlin.rank(vectors)
        a = np.array(vectors + [flat], dtype=float)
        base = np.array(vectors, dtype=float)
        return np.linalg.matrix_rank(a, tol=tol) == np.linalg.matrix_rank(base, tol=tol)


def derivations(mu: BracketTensor, tol: float = DEFAULT_TOL) -> DerivationSpace:
    """Exact (rational mode) or SVD-based (float mode) basis of Der(mu)."""
    n = mu.dim
    if n == 0:
        return DerivationSpace(0, tuple(), mu.scalar_mode)
    if mu.scalar_mode == RATIONAL:
        rows = _pi_matrix_rows(mu)
        matrix = []
        for _, entry in sorted(rows.items()):
            row = [Fraction(0)] * (n * n)
            for colidx, v in entry.items():
                row[colidx] = v
            matrix.append(row)
        if not matrix:
            basis_vecs = [
                [Fraction(1) if t == s else Fraction(0) for s in range(n * n)]
                for t in range(n * n)
            ]
        else:
            basis_vecs = ratlin.nullspace(matrix)
        mats = tuple(
            tuple(tuple(v[r * n + c] for c in range(n)) for r in range(n)) for v in basis_vecs
        )
        return DerivationSpace(n, mats, RATIONAL)
    t = mu.dense()
    rows = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                row = np.zeros((n, n))
                row[k, :] += t[i, j, :]
                row[:, i] -= t[:, j, k]
                row[:, j] -= t[i, :, k]
                rows.append(row.reshape(-1))
    if not rows:
        mats = tuple(np.eye(n)[:, [c]] @ np.eye(n)[[r], :] for r in range(n) for c in range(n))
        return DerivationSpace(n, mats, FLOAT)
    a = np.array(rows)
    _, s, vt = np.linalg.svd(a, full_matrices=True)
    rk = int(np.sum(s > tol * max(1.0, s[0] if len(s) else 1.0)))
    kernel = vt[rk:]
    mats = tuple(kernel[r].reshape(n, n) for r in range(kernel.shape[0]))
    return DerivationSpace(n, mats, FLOAT)


def direct_sum(mu1: BracketTensor, mu2: BracketTensor) -> BracketTensor:
    """Block bracket on R^{n1+n2}."""
    if mu1.scalar_mode != mu2.scalar_mode:
        raise DimensionMismatch("mixed scalar modes; convert explicitly")
    n1 = mu1.dim
    entries = dict(mu1.entries)
    for (i, j, k), c in mu2.entries.items():
        entries[(i + n1, j + n1, k + n1)] = c
    return BracketTensor(n1 + mu2.dim, entries, mu1.scalar_mode)
