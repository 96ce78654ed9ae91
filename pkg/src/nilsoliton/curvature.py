"""Moment map, Ricci operator and the curvature functional F on brackets,
plus the Ricci/Einstein verifier for metric solvable Lie algebras.

Two independent routes to the Ricci operator are implemented and asserted
against each other on every call: a direct contraction of the structure
constants, and the defining identity of the moment map paired against a
basis of symmetric matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import brackets as bk
from . import ratlin
from .brackets import FLOAT, RATIONAL, BracketTensor
from .errors import AbelianInput, NotJacobi, NotNilpotent, ZeroBracket


# ---------------------------------------------------------------------------
# Ricci via direct contraction
#
# <ric x, y> = -1/2 sum <mu(x, e_i), e_j><mu(y, e_i), e_j>
#              + 1/4 sum <mu(e_i, e_j), x><mu(e_i, e_j), y>


def _ricci_exact(mu: BracketTensor):
    n = mu.dim
    ric = ratlin.zeros(n, n)
    items = list(mu.entries.items())
    for (i1, j1, k1), c1 in items:
        for (i2, j2, k2), c2 in items:
            # quarter term: ordered pairs double the i<j sum
            if (i1, j1) == (i2, j2):
                ric[k1 - 1][k2 - 1] += Fraction(1, 2) * c1 * c2
            # half term: contract over second slot and output
            if k1 == k2:
                pairs1 = ((i1, j1, c1), (j1, i1, -c1))
                pairs2 = ((i2, j2, c2), (j2, i2, -c2))
                for a1, b1, d1 in pairs1:
                    for a2, b2, d2 in pairs2:
                        if b1 == b2:
                            ric[a1 - 1][a2 - 1] -= Fraction(1, 2) * d1 * d2
    return ric


def _ricci_float(t: np.ndarray) -> np.ndarray:
    b2 = np.einsum("rim,sim->rs", t, t)
    a2 = np.einsum("ijk,ijl->kl", t, t)
    return 0.25 * a2 - 0.5 * b2


def _moment_via_identity(mu: BracketTensor):
    """Moment map from its defining identity <m, a> = <pi(a)mu, mu>/||mu||^2,
    paired against the standard basis of symmetric matrices."""
    n = mu.dim
    n2 = mu.norm2()
    if not mu:
        raise ZeroBracket("moment map is undefined at 0")
    if mu.scalar_mode == RATIONAL:
        m = ratlin.zeros(n, n)
        for u in range(n):
            for v in range(u, n):
                a = ratlin.zeros(n, n)
                a[u][v] += Fraction(1)
                a[v][u] += Fraction(1)
                val = bk.inner(bk.pi(a, mu), mu) / n2
                if u == v:
                    m[u][u] = val / 2
                else:
                    m[u][v] = val / 2
                    m[v][u] = val / 2
        return m
    m = np.zeros((n, n))
    for u in range(n):
        for v in range(u, n):
            a = np.zeros((n, n))
            a[u, v] += 1.0
            a[v, u] += 1.0
            val = bk.inner(bk.pi(a, mu), mu) / n2
            m[u, v] = m[v, u] = val / 2
    return m


def moment_map(mu: BracketTensor):
    """The symmetric matrix m(mu) satisfying
    <m(mu), a> = <pi(a)mu, mu> / ||mu||^2 for all symmetric a."""
    return _moment_via_identity(mu)


@dataclass(frozen=True)
class RicciData:
    ric: object  # symmetric n x n matrix (rational rows or ndarray)
    scal: object
    F: object
    moment: object
    scalar_mode: str


def _as_float_mat(m):
    if isinstance(m, np.ndarray):
        return m
    return ratlin.to_float_matrix(m)


def ricci(mu: BracketTensor, check: bool = True, tol: float = bk.DEFAULT_TOL) -> RicciData:
    """Ricci operator of the metric nilpotent Lie algebra (mu, canonical ip).

    Computed by direct contraction and cross-checked against the moment map
    route; scal = tr ric = -||mu||^2/4 and F = 16 tr(ric^2)/||mu||^4.
    """
    if check:
        if not bk.is_lie_bracket(mu, tol):
            raise NotJacobi("Jacobi identity fails")
        ok, _ = bk.nilpotency(mu, tol)
        if not ok:
            raise NotNilpotent("bracket is not nilpotent")
    return ricci_unchecked(mu)


def ricci_unchecked(mu: BracketTensor) -> RicciData:
    n = mu.dim
    n2 = mu.norm2()
    if mu.scalar_mode == RATIONAL:
        ric = _ricci_exact(mu)
        scal = ratlin.trace(ric)
        if mu:
            moment = _moment_via_identity(mu)
            expected = ratlin.mat_scale(ric, Fraction(4) / n2)
            assert moment == expected, "moment-map and contraction Ricci disagree"
            f_val = ratlin.frobenius_inner(moment, moment)
        else:
            moment = None
            f_val = Fraction(0)
        assert scal == -Fraction(n2, 4)
        return RicciData(ric, scal, f_val, moment, RATIONAL)
    t = mu.dense()
    ric = _ricci_float(t)
    scal = float(np.trace(ric))
    if mu:
        moment = _moment_via_identity(mu)
        scale = max(1.0, float(np.abs(moment).max()))
        assert np.allclose(moment, 4.0 / n2 * ric, rtol=0.0, atol=1e-11 * scale), (
            "moment-map and contraction Ricci disagree"
        )
        f_val = float(np.sum(moment * moment))
    else:
        moment = None
        f_val = 0.0
    return RicciData(ric, scal, f_val, moment, FLOAT)


def F_value(mu: BracketTensor):
    """Scale-invariant square norm of the moment map."""
    return ricci_unchecked(mu).F


def grad_F(mu: BracketTensor) -> BracketTensor:
    """Gradient of F at mu: (16/||mu||^6)(||mu||^2 pi(ric)mu - 4 tr(ric^2) mu)."""
    if not mu:
        raise ZeroBracket("grad F undefined at 0")
    n2 = mu.norm2()
    if mu.scalar_mode == RATIONAL:
        ric = _ricci_exact(mu)
        tr2 = ratlin.frobenius_inner(ric, ric)
        first = bk.pi(ric, mu)
        entries = {}
        pref = Fraction(16) / (n2 * n2 * n2)
        for key in set(first.entries) | set(mu.entries):
            val = n2 * first.entries.get(key, Fraction(0)) - 4 * tr2 * mu.entries.get(
                key, Fraction(0)
            )
            if val:
                entries[key] = pref * val
        return BracketTensor(mu.dim, entries, RATIONAL)
    t = mu.dense()
    ric = _ricci_float(t)
    tr2 = float(np.sum(ric * ric))
    first = bk.pi(ric, mu)
    pref = 16.0 / n2**3
    entries = {}
    for key in set(first.entries) | set(mu.entries):
        val = n2 * first.entries.get(key, 0.0) - 4.0 * tr2 * mu.entries.get(key, 0.0)
        if val:
            entries[key] = pref * val
    return BracketTensor(mu.dim, entries, FLOAT)


# ---------------------------------------------------------------------------
# rank-one solvable extensions


def symmetric_derivations(mu: BracketTensor):
    """Basis of the symmetric part of Der(mu) (exact in rational mode)."""
    der = bk.derivations(mu)
    n = mu.dim
    if mu.scalar_mode == RATIONAL:
        vecs = [[Fraction(x) for row in b for x in row] for b in der.basis]
        sym_conditions = []
        for i in range(n):
            for j in range(i + 1, n):
                row = [Fraction(0)] * (n * n)
                row[i * n + j] = Fraction(1)
                row[j * n + i] = Fraction(-1)
                sym_conditions.append(row)
        # solve for combos of derivation basis lying in sym(n)
        if not vecs:
            return []
        cond = [[sum(row[t] * v[t] for t in range(n * n)) for v in vecs] for row in sym_conditions]
        combos = ratlin.nullspace(cond) if cond else ratlin.identity(len(vecs))
        out = []
        for combo in combos:
            flat = [
                sum(combo[s] * vecs[s][t] for s in range(len(vecs)))
                for t in range(n * n)
            ]
            out.append([flat[r * n : (r + 1) * n] for r in range(n)])
        return out
    mats = [np.asarray(b, dtype=float) for b in der.basis]
    if not mats:
        return []
    # combos c with sum c_i (b_i - b_i^T) = 0
    a = np.array([(b - b.T).reshape(-1) for b in mats]).T
    _, s, vt = np.linalg.svd(a, full_matrices=True)
    rk = int(np.sum(s > bk.DEFAULT_TOL * max(1.0, s[0] if len(s) else 1.0)))
    combos = vt[rk:]
    return [sum(c * b for c, b in zip(combo, mats)) for combo in combos]


@dataclass(frozen=True)
class SolvableExtension:
    """Rank-one metric solvable extension of a nilpotent bracket.

    The new generator A acts on the nilpotent part by the symmetric
    derivation D; the metric is fixed by ||A||^2 = -tr(D^2)/c.  The
    assembled bracket lives on R^(n+1) with the unit vector H = A/||A||
    first: [H, X] = (1/||A||) D X and [X, Y] = mu(X, Y).
    """

    nil_part: BracketTensor
    derivation: object
    c: object
    a_norm2: object
    bracket: BracketTensor
    abelian_override: bool = False


def _assemble_extension(mu: BracketTensor, d_over_a: list, mode: str) -> BracketTensor:
    n = mu.dim
    entries = {}
    for (i, j, k), c in mu.entries.items():
        entries[(i + 1, j + 1, k + 1)] = c
    for col in range(n):
        for row in range(n):
            v = d_over_a[row][col]
            if v:
                key = (1, col + 2, row + 2)
                entries[key] = entries.get(key, 0) + v
    return BracketTensor(n + 1, entries, mode)


def rank_one_extension(mu: BracketTensor) -> SolvableExtension:
    """The unique rank-one extension of (mu, ip) that can be Einstein.

    D solves tr(D A) = -c tr(A) against all symmetric derivations A, with
    c = tr(ric^2)/tr(ric).  An abelian input has ric = 0; the hyperbolic
    extension with D = I, ||A|| = 1 is returned instead, flagged.
    """
    n = mu.dim
    data = ricci_unchecked(mu)
    if not mu:
        if mu.scalar_mode == RATIONAL:
            d = ratlin.identity(n)
            bracket = _assemble_extension(mu, d, RATIONAL)
            return SolvableExtension(mu, d, Fraction(-n), Fraction(1), bracket, True)
        d = np.eye(n)
        return SolvableExtension(mu, d, float(-n), 1.0, _assemble_extension(mu, d.tolist(), FLOAT), True)
    sym_ders = symmetric_derivations(mu)
    if not sym_ders:
        raise AbelianInput("no symmetric derivations available for the extension")
    if mu.scalar_mode == RATIONAL:
        ric = data.ric
        c = ratlin.frobenius_inner(ric, ric) / data.scal
        gram = [[ratlin.frobenius_inner(a, b) for b in sym_ders] for a in sym_ders]
        rhs = [-c * ratlin.trace(a) for a in sym_ders]
        coeffs = ratlin.solve(gram, rhs)
        d = ratlin.zeros(n, n)
        for w, b in zip(coeffs, sym_ders):
            if w:
                d = ratlin.mat_add(d, ratlin.mat_scale(b, w))
        a_norm2 = -ratlin.trace_product(d, d) / c
        root = ratlin.sqrt_fraction(a_norm2)
        if root is not None:
            d_over_a = ratlin.mat_scale(d, 1 / root)
            bracket = _assemble_extension(mu, d_over_a, RATIONAL)
        else:
            scale = 1.0 / float(np.sqrt(float(a_norm2)))
            d_over_a = [[float(x) * scale for x in row] for row in d]
            bracket = _assemble_extension(mu.to_float(), d_over_a, FLOAT)
        return SolvableExtension(mu, d, c, a_norm2, bracket)
    ric = data.ric
    c = float(np.sum(ric * ric) / data.scal)
    sym_ders = [np.asarray(b) for b in sym_ders]
    gram = np.array([[float(np.sum(a * b)) for b in sym_ders] for a in sym_ders])
    rhs = np.array([-c * float(np.trace(a)) for a in sym_ders])
    coeffs = np.linalg.lstsq(gram, rhs, rcond=None)[0]
    d = sum(w * b for w, b in zip(coeffs, sym_ders))
    a_norm2 = float(-np.trace(d @ d) / c)
    d_over_a = d / np.sqrt(a_norm2)
    bracket = _assemble_extension(mu, d_over_a.tolist(), FLOAT)
    return SolvableExtension(mu, d, c, a_norm2, bracket)


# ---------------------------------------------------------------------------
# Ricci of a general metric solvable Lie algebra
#
# ric = R - B/2 - S(ad H): R from the same contraction as above, B the
# Killing form operator, H the mean curvature vector <H, z> = tr(ad z).


def _ad_matrices(mu: BracketTensor):
    n = mu.dim
    if mu.scalar_mode == RATIONAL:
        ads = []
        for x in range(1, n + 1):
            m = ratlin.zeros(n, n)
            for y in range(1, n + 1):
                if y == x:
                    continue
                col = mu.bracket(x, y)
                for r in range(n):
                    m[r][y - 1] = col[r]
            ads.append(m)
        return ads
    t = mu.dense()
    return [t[x] .T for x in range(n)]


def solvable_ricci(bracket: BracketTensor, tol: float = bk.DEFAULT_TOL):
    """Ricci operator of the metric Lie algebra given by the bracket on an
    orthonormal basis."""
    if not bk.is_lie_bracket(bracket, tol):
        raise NotJacobi("Jacobi identity fails")
    n = bracket.dim
    ads = _ad_matrices(bracket)
    if bracket.scalar_mode == RATIONAL:
        r_op = _ricci_exact(bracket)
        killing = [
            [ratlin.trace_product(ads[i], ads[j]) for j in range(n)] for i in range(n)
        ]
        h_vec = [ratlin.trace(ads[i]) for i in range(n)]
        ad_h = ratlin.zeros(n, n)
        for w, m in zip(h_vec, ads):
            if w:
                ad_h = ratlin.mat_add(ad_h, ratlin.mat_scale(m, w))
        sym_ad_h = ratlin.mat_scale(ratlin.mat_add(ad_h, ratlin.transpose(ad_h)), Fraction(1, 2))
        ric = ratlin.mat_sub(
            ratlin.mat_sub(r_op, ratlin.mat_scale(killing, Fraction(1, 2))), sym_ad_h
        )
        return ric
    t = bracket.dense()
    r_op = _ricci_float(t)
    ads = [np.asarray(a, dtype=float) for a in ads]
    killing = np.array([[np.trace(a @ b) for b in ads] for a in ads])
    h_vec = np.array([np.trace(a) for a in ads])
    ad_h = sum(w * m for w, m in zip(h_vec, ads)) if n else np.zeros((0, 0))
    sym_ad_h = 0.5 * (ad_h + ad_h.T)
    return r_op - 0.5 * killing - sym_ad_h


def mean_curvature_diagnostic(bracket: BracketTensor, tol: float = bk.DEFAULT_TOL):
    """c = -tr S(ad H)^2 / tr S(ad H), or None when nearly unimodular."""
    n = bracket.dim
    ads = [_as_float_mat(a) for a in _ad_matrices(bracket)]
    h_vec = np.array([float(np.trace(a)) for a in ads])
    ad_h = sum(w * m for w, m in zip(h_vec, ads)) if n else np.zeros((0, 0))
    s = 0.5 * (ad_h + ad_h.T)
    denom = float(np.trace(s))
    if abs(denom) < tol:
        return None
    return float(-np.trace(s @ s) / denom)


def einstein_check(obj, tol: float = 1e-9):
    """(is_einstein, c, residual) with c the trace mean of the Ricci
    operator and the residual in operator norm."""
    bracket = obj.bracket if isinstance(obj, SolvableExtension) else obj
    ric = solvable_ricci(bracket)
    n = bracket.dim
    if bracket.scalar_mode == RATIONAL:
        c = ratlin.trace(ric) / n
        delta = [[ric[i][j] - (c if i == j else 0) for j in range(n)] for i in range(n)]
        residual = float(np.abs(np.linalg.eigvalsh(ratlin.to_float_matrix(delta))).max()) if n else 0.0
        exact_zero = all(x == 0 for row in delta for x in row)
        return exact_zero or residual <= tol, c, residual
    c = float(np.trace(ric) / n)
    residual = float(np.abs(np.linalg.eigvalsh(ric - c * np.eye(n))).max()) if n else 0.0
    return residual <= tol, c, residual
