import random
from fractions import Fraction

import numpy as np
import pytest

from twistblocks import (CharacterValue, NonDominant, SingularPoint,
                         UnsupportedType, build_root_datum)
from oracles import SUPPORTED_TYPES, dual_coxeter_classical, weyl_order_classical

A1 = build_root_datum("A", 1)
A2 = build_root_datum("A", 2)


def random_regular_xi(rd, rng, spread=3):
    while True:
        q = rd.dual_coxeter + rng.randrange(1, 9)
        xi = tuple(Fraction(rng.randrange(1, spread + 1), q) for _ in range(rd.rank))
        if rd.point_is_regular(rd.exponent_vector(xi)):
            return xi


def test_build_examples():
    assert A1.cartan.tolist() == [[2]]
    assert A1.dual_coxeter == 2
    assert A1.weyl_order == 2

    c2 = build_root_datum("C", 2)
    assert c2.dual_coxeter == 3
    assert c2.weyl_order == 8

    d4 = build_root_datum("D", 4)
    assert d4.dual_coxeter == 6
    assert d4.weyl_order == 192


def test_unsupported_types():
    for t, r in [("A", 9), ("A", 0), ("B", 5), ("C", 1), ("D", 7),
                 ("E", 7), ("E", 8), ("F", 3), ("G", 3), ("H", 2)]:
        with pytest.raises(UnsupportedType):
            build_root_datum(t, r)


def test_datum_component_fields():
    c2 = build_root_datum("C", 2)
    assert c2.simple_roots == ((2, -1), (-2, 2))
    assert c2.simple_coroots == ((2, -2), (-1, 2))
    form = c2.normalized_form
    assert form[0][0] * 2 == form[1][1]  # short vs long fundamental
    assert c2.rho == (1, 1) and c2.rho_check == (1, 1)


def test_cartan_invariants():
    for t, r in SUPPORTED_TYPES:
        rd = build_root_datum(t, r)
        a = rd.cartan
        assert all(a[i][i] == 2 for i in range(r))
        assert all(a[i][j] <= 0 for i in range(r) for j in range(r) if i != j)
        # finite type: the symmetrization d_i a_ij is positive definite
        sym = np.array([[float(rd._sym[i] * a[i][j]) for j in range(r)]
                        for i in range(r)])
        assert np.allclose(sym, sym.T)
        assert np.all(np.linalg.eigvalsh(sym) > 0)
        # the normalized form gives the highest root squared length 2
        assert rd.form_value(rd.highest_root, rd.highest_root) == 2


def test_dual_coxeter_oracle():
    # h-check = 1 + sum of dual Kac labels, against the classical values
    for t, r in SUPPORTED_TYPES:
        rd = build_root_datum(t, r)
        assert rd.dual_coxeter == 1 + sum(rd.dual_marks)
        assert rd.dual_coxeter == dual_coxeter_classical(t, r)


def test_weyl_order_matches_classical_table():
    for t, r in SUPPORTED_TYPES:
        if weyl_order_classical(t, r) > 60000:
            continue  # the biggest groups are counted in the acceptance suite
        rd = build_root_datum(t, r)
        assert rd.weyl_order == weyl_order_classical(t, r)


def test_weyl_group_elements_permute_roots():
    for t, r in [("A", 2), ("B", 2), ("G", 2), ("C", 3)]:
        rd = build_root_datum(t, r)
        roots = {tuple(int(x) for x in v)
                 for v in np.vstack([rd.positive_roots, -rd.positive_roots])}
        group = rd.weyl_group
        assert len(group) == weyl_order_classical(t, r)
        for el in group:
            assert round(float(np.linalg.det(el.matrix))) == el.sign
            image = {tuple(int(x) for x in el.matrix @ np.array(root))
                     for root in roots}
            assert image == roots


def test_weyl_dimension_examples():
    assert A1.weyl_dimension((1,)) == 2
    assert A2.weyl_dimension((1, 1)) == 8
    for t, r in [("A", 3), ("C", 2), ("F", 4), ("G", 2)]:
        rd = build_root_datum(t, r)
        assert rd.weyl_dimension(tuple([0] * r)) == 1


def test_weyl_dimension_rejects_non_dominant():
    with pytest.raises(NonDominant):
        A2.weyl_dimension((1, -1))


def test_weight_multiplicities_examples():
    assert A1.weight_system((2,)) == {(2,): 1, (0,): 1, (-2,): 1}
    ws = A2.weight_system((1, 1))
    assert ws[(0, 0)] == 2
    assert sum(ws.values()) == 8
    assert A2.weight_system((0, 0)) == {(0, 0): 1}


def test_weight_multiplicities_total_and_invariance():
    rng = random.Random(3)
    for t, r in [("A", 2), ("B", 2), ("C", 3), ("G", 2), ("D", 4)]:
        rd = build_root_datum(t, r)
        for _ in range(4):
            lam = tuple(rng.randrange(0, 3) for _ in range(r))
            if rd.weyl_dimension(lam) > 500:
                continue
            ws = rd.weight_system(lam)
            assert sum(ws.values()) == rd.weyl_dimension(lam)
            # Weyl invariance: every weight has the multiplicity of its
            # dominant representative
            for w, m in ws.items():
                assert ws[rd.dominant_rep(w)] == m


def test_tensor_examples():
    assert A1.tensor_multiplicities((1,), (1,)) == {(0,): 1, (2,): 1}
    assert A2.tensor_multiplicities((1, 0), (0, 1)) == {(1, 1): 1, (0, 0): 1}
    # unit law
    for rd, lam in [(A2, (2, 1)), (build_root_datum("C", 2), (1, 1))]:
        assert rd.tensor_multiplicities(lam, tuple([0] * rd.rank)) == {lam: 1}


def test_tensor_symmetry_and_dimension():
    rng = random.Random(11)
    for t, r in [("A", 2), ("B", 2), ("G", 2), ("A", 3)]:
        rd = build_root_datum(t, r)
        for _ in range(5):
            lam = tuple(rng.randrange(0, 2) for _ in range(r))
            mu = tuple(rng.randrange(0, 2) for _ in range(r))
            ab = rd.tensor_multiplicities(lam, mu)
            ba = rd.tensor_multiplicities(mu, lam)
            assert ab == ba
            total = sum(m * rd.weyl_dimension(eta) for eta, m in ab.items())
            assert total == rd.weyl_dimension(lam) * rd.weyl_dimension(mu)
            assert all(m > 0 for m in ab.values())


def test_character_examples():
    # (A1, omega, rho_check/3): 2 cos(pi/3) = 1
    val = A1.character_value((1,), (Fraction(1, 3),))
    assert abs(val.value - 1.0) < 1e-12
    # trivial character
    for rd in (A1, A2, build_root_datum("G", 2)):
        xi = random_regular_xi(rd, random.Random(5))
        assert abs(rd.character_value(tuple([0] * rd.rank), xi).value - 1) < 1e-12
    # (A1, 2 omega, rho_check/4): weight sum e^{i pi/2} + 1 + e^{-i pi/2} = 1,
    # frozen from the weight-multiplicity oracle
    xi = (Fraction(1, 4),)
    byw = A1.character_by_weights((2,), xi)
    expect = sum(np.exp(2j * np.pi * Fraction(k, 4) * Fraction(1, 2) * 2)
                 for k in (1, 0, -1))
    assert abs(byw.value - expect) < 1e-12
    assert abs(byw.value - 1.0) < 1e-12
    assert abs(A1.character_value((2,), xi).value - byw.value) < 1e-12


def test_character_two_way_agreement():
    rng = random.Random(17)
    for t, r in [("A", 1), ("A", 3), ("B", 2), ("C", 3), ("D", 4), ("G", 2)]:
        rd = build_root_datum(t, r)
        lams = [lam for lam in
                [tuple(rng.randrange(0, 3) for _ in range(r)) for _ in range(8)]
                if rd.weyl_dimension(lam) <= 500]
        for lam in lams:
            for _ in range(3):
                xi = random_regular_xi(rd, rng)
                a = rd.character_value(lam, xi).value
                b = rd.character_by_weights(lam, xi).value
                assert abs(a - b) <= 1e-9 * max(1.0, abs(b))


def test_character_multiplicativity():
    rng = random.Random(23)
    for t, r in [("A", 2), ("C", 2), ("G", 2)]:
        rd = build_root_datum(t, r)
        lam = tuple(rng.randrange(0, 2) for _ in range(r))
        mu = tuple(rng.randrange(0, 2) for _ in range(r))
        for _ in range(5):
            xi = random_regular_xi(rd, rng)
            lhs = rd.character_value(lam, xi).value * rd.character_value(mu, xi).value
            rhs = sum(m * rd.character_value(eta, xi).value
                      for eta, m in rd.tensor_multiplicities(lam, mu).items())
            assert abs(lhs - rhs) < 1e-8


def test_character_weyl_invariance():
    rng = random.Random(29)
    for t, r in [("A", 2), ("B", 2), ("G", 2)]:
        rd = build_root_datum(t, r)
        lam = tuple(rng.randrange(0, 3) for _ in range(r))
        xi = random_regular_xi(rd, rng)
        base = rd.character_value(lam, xi).value
        x = list(xi)
        for _ in range(6):  # random word in the coweight reflections
            i = rng.randrange(r)
            xi_i = x[i]
            x = [x[k] - xi_i * rd.cartan[i][k] for k in range(r)]
            assert abs(rd.character_value(lam, tuple(x)).value - base) < 1e-9


def test_character_bound_and_phase_bookkeeping():
    rng = random.Random(31)
    for t, r in [("A", 2), ("C", 2)]:
        rd = build_root_datum(t, r)
        lam = (1,) * r
        for _ in range(5):
            xi = random_regular_xi(rd, rng)
            cv = rd.character_by_weights(lam, xi)
            assert isinstance(cv, CharacterValue)
            assert abs(cv.value) <= rd.weyl_dimension(lam) + 1e-9
            assert cv.phase_exact is not None
            assert sum(m for _, m in cv.phase_exact) == rd.weyl_dimension(lam)


def test_singular_point_raises():
    with pytest.raises(SingularPoint):
        A1.character_value((1,), (Fraction(0, 1),))
    with pytest.raises(SingularPoint):
        A2.character_value((1, 0), (Fraction(1, 2), Fraction(1, 2)))  # theta wall
