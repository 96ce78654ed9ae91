from fractions import Fraction as F

import numpy as np
import pytest

from nilsoliton import brackets as bk
from nilsoliton.brackets import BracketTensor
from nilsoliton.errors import DimensionMismatch, NotALieBracket, ParseError, SingularMap


def h3(mode="rational"):
    return BracketTensor(3, {(1, 2, 3): 1}, mode)


def l4():
    return BracketTensor(4, {(1, 2, 3): 1, (1, 3, 4): 1})


def l4_plus():
    return BracketTensor(4, {(1, 2, 3): 1, (1, 2, 4): 1, (1, 3, 4): 1})


def random_orthogonal(n, rng):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def test_canonicalization():
    mu = BracketTensor(3, {(2, 1, 3): 1})
    assert mu.entries == {(1, 2, 3): F(-1)}
    mu = BracketTensor(3, {(1, 2, 3): 1, (2, 1, 3): 1})
    assert not mu  # cancels to zero
    with pytest.raises(ValueError):
        BracketTensor(3, {(1, 1, 2): 1})
    with pytest.raises(ValueError):
        BracketTensor(2, {(1, 2, 3): 1})
    with pytest.raises(TypeError):
        BracketTensor(3, {(1, 2, 3): 0.5})  # float scalar in rational mode


def test_coefficient_skew():
    mu = h3()
    assert mu.coefficient(1, 2, 3) == 1
    assert mu.coefficient(2, 1, 3) == -1
    assert mu.coefficient(1, 3, 2) == 0


def test_norm2():
    assert h3().norm2() == 2
    assert l4_plus().norm2() == 6


def test_inner_products():
    # one unit constant, ordered-pair double counting
    assert bk.inner(h3(), h3()) == 2
    v123 = bk.basis_vector(4, 1, 2, 3)
    v124 = bk.basis_vector(4, 1, 2, 4)
    assert bk.inner(v123, v124) == 0
    assert bk.inner(l4_plus(), l4_plus()) == 6
    with pytest.raises(DimensionMismatch):
        bk.inner(h3(), l4())


def test_json_roundtrip_exact():
    mu = BracketTensor(4, {(1, 2, 3): F(1, 3), (1, 3, 4): F(-22, 7)})
    text = mu.to_json()
    back = BracketTensor.from_json(text)
    assert back.entries == mu.entries
    assert back.to_json() == text
    with pytest.raises(ParseError):
        BracketTensor.from_json("{not json")
    with pytest.raises(ParseError):
        BracketTensor.from_json('{"dim": 3, "brackets": [{"i": 1}]}')


def test_json_roundtrip_float():
    mu = BracketTensor(3, {(1, 2, 3): 0.1234567890123}, "float")
    back = BracketTensor.from_json(mu.to_json())
    assert back.entries == mu.entries


def test_act_identity_and_scaling():
    mu = h3()
    assert bk.act(bk.ratlin.identity(3), mu).entries == mu.entries
    g = [[1, 0, 0], [0, 1, 0], [0, 0, 2]]
    out = bk.act(g, mu)
    assert out.entries == {(1, 2, 3): F(2)}


def test_act_inverse_roundtrip_exact():
    g = [[F(1), F(2), F(0), F(1)], [F(0), F(1), F(1), F(0)],
         [F(1), F(0), F(3), F(0)], [F(0), F(0), F(0), F(2)]]
    ginv = bk.ratlin.inverse(g)
    mu = l4_plus()
    back = bk.act(g, bk.act(ginv, mu))
    assert back.entries == mu.entries
    with pytest.raises(SingularMap):
        bk.act([[F(1), F(1)], [F(1), F(1)]], BracketTensor(2, {}))


def test_act_orthogonal_norm_invariance():
    rng = np.random.default_rng(0)
    mu = l4_plus().to_float()
    for _ in range(5):
        g = random_orthogonal(4, rng)
        out = bk.act(g, mu)
        assert abs(out.norm() - mu.norm()) < 1e-10
        lam = h3().to_float()
        lam4 = BracketTensor(4, {(1, 2, 3): 1.0, (2, 3, 4): 0.5}, "float")
        assert abs(bk.inner(bk.act(g, mu), bk.act(g, lam4)) - bk.inner(mu, lam4)) < 1e-10


def test_pi_identity_gives_minus_mu():
    for mu in (h3(), l4(), l4_plus()):
        out = bk.pi(bk.ratlin.identity(mu.dim), mu)
        assert out.entries == {k: -c for k, c in mu.entries.items()}


def test_pi_weight_formula():
    # for diagonal a, coefficient of v_ijk is (a_k - a_i - a_j) mu_ij^k
    mu = l4_plus()
    a = [[F(2), 0, 0, 0], [0, F(3), 0, 0], [0, 0, F(5), 0], [0, 0, 0, F(7)]]
    out = bk.pi(a, mu)
    for (i, j, k), c in mu.entries.items():
        expect = (a[k - 1][k - 1] - a[i - 1][i - 1] - a[j - 1][j - 1]) * c
        assert out.coefficient(i, j, k) == expect


def test_pi_examples():
    # diag(1,2,3,4) is a derivation of l4
    d = [[F(v) if r == c else F(0) for c in range(4)] for r, v in zip(range(4), [1, 2, 3, 4])]
    assert not bk.pi(d, l4())
    e11 = [[F(1 if (r, c) == (0, 0) else 0) for c in range(3)] for r in range(3)]
    out = bk.pi(e11, h3())
    assert out.entries == {(1, 2, 3): F(-1)}


def test_pi_float_matches_rational():
    mu = l4_plus()
    a = [[F(1), F(2), F(0), F(1)], [F(0), F(1), F(1), F(0)],
         [F(2), F(0), F(1), F(1)], [F(0), F(1), F(0), F(3)]]
    exact = bk.pi(a, mu)
    approx = bk.pi(np.array(a, dtype=float), mu.to_float())
    for key in set(exact.entries) | set(approx.entries):
        assert abs(float(exact.coefficient(*key)) - approx.coefficient(*key)) < 1e-12


def test_weight_trace():
    for (i, j, k) in [(1, 2, 3), (1, 3, 4), (2, 3, 1), (1, 2, 1)]:
        w = bk.weight_vector(i, j, k, 4)
        assert sum(w) == -1


def test_jacobi():
    assert bk.jacobi_defect(h3()) == 0
    bad = BracketTensor(3, {(1, 2, 3): 1, (2, 3, 1): 1, (1, 3, 1): 1})
    assert bk.jacobi_defect(bad) > 0
    vec = bk.jacobiator(bad, 1, 2, 3)
    assert vec == [F(0), F(0), F(-1)]


def test_nilpotency():
    assert bk.nilpotency(h3()) == (True, 2)
    assert bk.nilpotency(l4()) == (True, 3)
    soluble = BracketTensor(2, {(1, 2, 2): 1})
    ok, step = bk.nilpotency(soluble)
    assert not ok and step is None
    with pytest.raises(NotALieBracket):
        bk.nilpotency(BracketTensor(3, {(1, 2, 3): 1, (2, 3, 1): 1, (1, 3, 1): 1}))
    abelian = BracketTensor(3, {})
    assert bk.nilpotency(abelian) == (True, 1)


def test_derivations_dimensions():
    assert len(bk.derivations(BracketTensor(3, {}))) == 9
    der_h3 = bk.derivations(h3())
    assert len(der_h3) == 6
    assert der_h3.orbit_dim == 3
    for b in der_h3.basis:
        assert not bk.pi(b, h3())
    d = [[F(v) if r == c else F(0) for c in range(4)] for r, v in zip(range(4), [1, 2, 3, 4])]
    assert bk.derivations(l4()).contains(d)


def test_derivations_float_agree():
    for mu in (h3(), l4(), l4_plus()):
        exact = bk.derivations(mu)
        approx = bk.derivations(mu.to_float())
        assert len(exact) == len(approx)
        for b in approx.basis:
            out = bk.pi(b, mu.to_float())
            assert all(abs(c) < 1e-9 for c in out.entries.values())


def test_derivation_dim_is_isomorphism_invariant():
    g = [[F(1), F(1), F(0), F(0)], [F(0), F(1), F(0), F(2)],
         [F(1), F(0), F(1), F(0)], [F(0), F(0), F(0), F(1)]]
    mu = l4_plus()
    assert len(bk.derivations(bk.act(g, mu))) == len(bk.derivations(mu))


def test_direct_sum():
    s = bk.direct_sum(h3(), BracketTensor(1, {}))
    assert s.dim == 4 and bk.nilpotency(s) == (True, 2)
    ss = bk.direct_sum(h3(), h3())
    assert ss.dim == 6 and ss.norm2() == 4
    assert bk.direct_sum(h3(), BracketTensor(0, {})).entries == h3().entries


def test_pi_derivation_property_random_transport():
    # derivations of g.mu are g (Der mu) g^-1; check pi kills them exactly
    g = [[F(2), F(1), F(0)], [F(0), F(1), F(0)], [F(1), F(0), F(1)]]
    moved = bk.act(g, h3())
    der = bk.derivations(moved)
    assert len(der) == 6
    for b in der.basis:
        assert not bk.pi(b, moved)


def test_mode_conversion():
    mu = h3().to_float()
    assert mu.scalar_mode == "float"
    back = mu.to_rational()
    assert back.entries == h3().entries
    with pytest.raises(DimensionMismatch):
        bk.inner(h3(), h3().to_float())
