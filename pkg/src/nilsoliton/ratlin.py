"""Exact linear algebra over the rationals.

Matrices are lists of lists of ``fractions.Fraction``; vectors are lists.
Everything here is exact: ranks, nullspaces and positivity verdicts carry no
floating-point tolerance.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional, Sequence

Frac = Fraction

# ---------------------------------------------------------------------------
# scalars


def parse_scalar(text: str) -> Fraction:
    """Parse a decimal string or a 'p/q' string into a Fraction."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/")
        return Fraction(int(num), int(den))
    return Fraction(text)


def format_scalar(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def rationalize(x: float, max_den: int = 10**6) -> Fraction:
    """Nearest rational with bounded denominator (continued fractions)."""
    return Fraction(x).limit_denominator(max_den)


def sqrt_fraction(q: Fraction) -> Optional[Fraction]:
    """Exact square root of a nonnegative rational, or None if irrational."""
    if q < 0:
        return None
    ns = math.isqrt(q.numerator)
    ds = math.isqrt(q.denominator)
    if ns * ns == q.numerator and ds * ds == q.denominator:
        return Fraction(ns, ds)
    return None


def coprime_integer_scaling(values: Sequence[Fraction]) -> list[int]:
    """Scale rationals by a common positive factor to coprime integers."""
    if not values:
        return []
    den_lcm = 1
    for v in values:
        den_lcm = den_lcm * v.denominator // math.gcd(den_lcm, v.denominator)
    ints = [int(v * den_lcm) for v in values]
    g = 0
    for k in ints:
        g = math.gcd(g, k)
    if g > 1:
        ints = [k // g for k in ints]
    return ints


# ---------------------------------------------------------------------------
# dense matrix helpers


def zeros(r: int, c: int) -> list[list[Fraction]]:
    return [[Fraction(0)] * c for _ in range(r)]


def identity(n: int) -> list[list[Fraction]]:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = Fraction(1)
    return m


def mat_copy(a):
    return [row[:] for row in a]


def transpose(a):
    return [list(col) for col in zip(*a)]


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    out = zeros(n, m)
    for i in range(n):
        ai = a[i]
        for t in range(k):
            x = ai[t]
            if x:
                bt = b[t]
                row = out[i]
                for j in range(m):
                    row[j] += x * bt[j]
    return out


def mat_vec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a, c):
    return [[c * x for x in row] for row in a]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def commutator(a, b):
    return mat_sub(mat_mul(a, b), mat_mul(b, a))


def trace(a) -> Fraction:
    return sum(a[i][i] for i in range(len(a)))


def trace_product(a, b) -> Fraction:
    """tr(a b) without forming the product."""
    n = len(a)
    return sum(a[i][j] * b[j][i] for i in range(n) for j in range(n))


def frobenius_inner(a, b) -> Fraction:
    """tr(a b^t), the standard inner product on matrices."""
    return sum(x * y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def is_symmetric(a) -> bool:
    n = len(a)
    return all(a[i][j] == a[j][i] for i in range(n) for j in range(i + 1, n))


# ---------------------------------------------------------------------------
# elimination


def rref(a, augment: Optional[list[list[Fraction]]] = None):
    """Reduced row echelon form; returns (R, pivots, A) with A the reduced
    augment (or None).  Input is not modified."""
    m = mat_copy(a)
    aug = mat_copy(augment) if augment is not None else None
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        if aug is not None:
            aug[r], aug[piv] = aug[piv], aug[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        if aug is not None:
            aug[r] = [x / p for x in aug[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
                if aug is not None:
                    aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append((r, c))
        r += 1
        if r == rows:
            break
    return m, pivots, aug


def rank(a) -> int:
    if not a:
        return 0
    _, pivots, _ = rref(a)
    return len(pivots)


def _clear_denominators(row: Sequence[Fraction]) -> list[int]:
    den = 1
    for x in row:
        den = den * x.denominator // math.gcd(den, x.denominator)
    return [int(x * den) for x in row]


def _bareiss_echelon(int_rows: list[list[int]]):
    """Fraction-free (Bareiss) forward elimination on integer rows.

    Returns (echelon rows, pivot (row, col) list).  All intermediate entries
    are exact integers; divisions are exact by the Bareiss identity.
    """
    m = [row[:] for row in int_rows]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: list[tuple[int, int]] = []
    prev = 1
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pr = m[r]
        for i in range(r + 1, rows):
            mi = m[i]
            f = mi[c]
            for j in range(cols):
                num = mi[j] * pr[c] - f * pr[j]
                q, rem = divmod(num, prev)
                if rem:
                    raise ArithmeticError("inexact division in fraction-free elimination")
                mi[j] = q
        prev = pr[c]
        pivots.append((r, c))
        r += 1
        if r == rows:
            break
    return m, pivots


def nullspace(a) -> list[list[Fraction]]:
    """Exact basis of the nullspace of a rational matrix.

    Forward elimination is fraction-free over the integers (rows are scaled
    to clear denominators first); back substitution is done over Q.
    """
    rows = len(a)
    if rows == 0:
        return []
    cols = len(a[0])
    int_rows = [_clear_denominators(row) for row in a]
    ech, pivots = _bareiss_echelon(int_rows)
    pivot_cols = [c for _, c in pivots]
    free_cols = [c for c in range(cols) if c not in pivot_cols]
    basis = []
    for f in free_cols:
        x: list[Fraction] = [Fraction(0)] * cols
        x[f] = Fraction(1)
        for r, c in reversed(pivots):
            s = sum(
                (Fraction(ech[r][j]) * x[j] for j in range(c + 1, cols) if x[j]),
                Fraction(0),
            )
            x[c] = -s / Fraction(ech[r][c])
        basis.append(x)
    return basis


def solve(a, b) -> Optional[list[Fraction]]:
    """One exact solution of a x = b, or None if inconsistent."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    red, pivots, aug = rref(a, [[x] for x in b])
    piv_rows = {r for r, _ in pivots}
    for r in range(rows):
        if r not in piv_rows and aug[r][0] != 0:
            return None
    x = [Fraction(0)] * cols
    for r, c in pivots:
        x[c] = aug[r][0]
    return x


def inverse(a) -> Optional[list[list[Fraction]]]:
    n = len(a)
    red, pivots, aug = rref(a, identity(n))
    if len(pivots) < n:
        return None
    return aug


def det(a) -> Fraction:
    n = len(a)
    if n == 0:
        return Fraction(1)
    m = mat_copy(a)
    sign = 1
    d = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        d *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] * inv
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return sign * d


def solve_least_norm_constrained(gram_pd, g, t) -> Optional[list[Fraction]]:
    """Minimize (1/2) x^t M x  subject to  G x = t, with M positive definite.

    Used for picking the minimal-Frobenius-norm element of an affine solution
    set.  Redundant rows of (G, t) are dropped first; returns None if the
    constraints are inconsistent.
    """
    red, pivots, aug = rref(g, [[x] for x in t])
    piv_rows = {r for r, _ in pivots}
    for r in range(len(g)):
        if r not in piv_rows and aug[r][0] != 0:
            return None
    g_indep = [red[r] for r, _ in pivots]
    t_indep = [aug[r][0] for r, _ in pivots]
    n = len(gram_pd)
    k = len(g_indep)
    kkt = zeros(n + k, n + k)
    rhs = [Fraction(0)] * n + t_indep
    for i in range(n):
        for j in range(n):
            kkt[i][j] = gram_pd[i][j]
        for j in range(k):
            kkt[i][n + j] = g_indep[j][i]
            kkt[n + j][i] = g_indep[j][i]
    sol = solve(kkt, rhs)
    if sol is None:
        return None
    return sol[:n]


# ---------------------------------------------------------------------------
# spectra


def char_poly(a) -> list[Fraction]:
    """Characteristic polynomial det(xI - a), coefficients low -> high."""
    n = len(a)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    m = zeros(n, n)
    for k in range(1, n + 1):
        # Faddeev-LeVerrier: M_k = a (M_{k-1} + c_{n-k+1} I),  c_{n-k} = -tr(M_k)/k
        for i in range(n):
            m[i][i] += coeffs[n - k + 1]
        m = mat_mul(a, m)
        coeffs[n - k] = -trace(m) / k
    return coeffs


def _poly_eval(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _poly_divide_root(coeffs: list[Fraction], root: Fraction) -> list[Fraction]:
    # synthetic division by (x - root); assumes exact root
    out = [Fraction(0)] * (len(coeffs) - 1)
    carry = Fraction(0)
    for i in range(len(coeffs) - 1, 0, -1):
        carry = coeffs[i] + carry * root
        out[i - 1] = carry
    return out


def _divisors(n: int) -> list[int]:
    n = abs(n)
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def rational_roots(coeffs: list[Fraction]):
    """All rational roots with multiplicities; also returns whether the
    polynomial splits completely over Q."""
    poly = list(coeffs)
    roots: list[tuple[Fraction, int]] = []
    zero_mult = 0
    while len(poly) > 1 and poly[0] == 0:
        poly = poly[1:]
        zero_mult += 1
    if zero_mult:
        roots.append((Fraction(0), zero_mult))
    den = 1
    for c in poly:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ipoly = [int(c * den) for c in poly]
    while len(ipoly) > 1:
        a0, alead = ipoly[0], ipoly[-1]
        found = None
        for p in _divisors(a0):
            for q in _divisors(alead):
                if math.gcd(p, q) != 1:
                    continue
                for cand in (Fraction(p, q), Fraction(-p, q)):
                    if _poly_eval([Fraction(c) for c in ipoly], cand) == 0:
                        found = cand
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            break
        mult = 0
        fpoly = [Fraction(c) for c in ipoly]
        while len(fpoly) > 1 and _poly_eval(fpoly, found) == 0:
            fpoly = _poly_divide_root(fpoly, found)
            mult += 1
        roots.append((found, mult))
        den2 = 1
        for c in fpoly:
            den2 = den2 * c.denominator // math.gcd(den2, c.denominator)
        ipoly = [int(c * den2) for c in fpoly]
    complete = len(ipoly) <= 1
    return roots, complete


def eigenvalues_rational(a):
    """Rational eigenvalues (value, algebraic multiplicity) of a rational
    matrix; ``complete`` is False when the spectrum is not fully rational."""
    roots, complete = rational_roots(char_poly(a))
    roots.sort(key=lambda t: t[0])
    return roots, complete


def is_diagonalizable(a, eigs=None) -> bool:
    n = len(a)
    if eigs is None:
        eigs, complete = eigenvalues_rational(a)
        if not complete:
            return False
    if sum(m for _, m in eigs) != n:
        return False
    for lam, mult in eigs:
        shifted = [[a[i][j] - (lam if i == j else 0) for j in range(n)] for i in range(n)]
        if n - rank(shifted) != mult:
            return False
    return True


def generalized_eigenspace(a, lam: Fraction, mult: int) -> list[list[Fraction]]:
    n = len(a)
    shifted = [[a[i][j] - (lam if i == j else 0) for j in range(n)] for i in range(n)]
    power = identity(n)
    for _ in range(mult):
        power = mat_mul(power, shifted)
    return nullspace(power)


def semisimple_part(a):
    """Semisimple (diagonalizable) part of a rational matrix whose spectrum
    is rational; None if the spectrum is not rational."""
    n = len(a)
    eigs, complete = eigenvalues_rational(a)
    if not complete or sum(m for _, m in eigs) != n:
        return None
    cols: list[list[Fraction]] = []
    diag: list[Fraction] = []
    for lam, mult in eigs:
        for vec in generalized_eigenspace(a, lam, mult):
            cols.append(vec)
            diag.append(lam)
    c = transpose(cols)
    cinv = inverse(c)
    if cinv is None:
        return None
    d = zeros(n, n)
    for i, lam in enumerate(diag):
        d[i][i] = lam
    return mat_mul(mat_mul(c, d), cinv)


# ---------------------------------------------------------------------------
# positive semidefiniteness


def psd_certificate(q):
    """Exact PSD decision for a symmetric rational matrix.

    Returns (True, None) when q >= 0, else (False, v) with v a rational
    vector satisfying v^t q v < 0.
    """
    n = len(q)
    m = mat_copy(q)
    e = identity(n)  # congruence tracking: current == E q E^t
    active = list(range(n))
    while active:
        piv = next((i for i in active if m[i][i] > 0), None)
        if piv is None:
            neg = next((i for i in active if m[i][i] < 0), None)
            if neg is not None:
                return False, e[neg][:]
            # all active diagonal entries are zero
            for i in active:
                for j in active:
                    if i != j and m[i][j] != 0:
                        # 2x2 block [[0, a], [a, 0]] is indefinite
                        a = m[i][j]
                        d = m[j][j]  # zero here, kept for clarity
                        x = -(d + 1) / (2 * a)
                        v = [x * ei + ej for ei, ej in zip(e[i], e[j])]
                        return False, v
            return True, None
        d = m[piv][piv]
        for i in active:
            if i == piv:
                continue
            f = m[i][piv] / d
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[piv])]
                e[i] = [x - f * y for x, y in zip(e[i], e[piv])]
        for i in active:
            if i != piv:
                m[i][piv] = Fraction(0)
                m[piv][i] = Fraction(0)
        active.remove(piv)
    return True, None


def to_float_matrix(a):
    import numpy as np

    return np.array([[float(x) for x in row] for row in a], dtype=float)


def from_float_matrix(a, max_den: int = 10**6):
    return [[rationalize(float(x), max_den) for x in row] for row in a]
