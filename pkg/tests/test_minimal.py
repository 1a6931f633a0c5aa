from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings

import oracles
from strategies import ainvs, integral_isos, small_ainvs
from szpiro.minimal import is_minimal, is_minimal_at, kraus_ok, minimal_model, model_from_c4c6
from szpiro.tate import minimize_at
from szpiro.weierstrass import Isomorphism, WeierstrassModel, to_model, transform


def scaled_model(a, iso):
    return to_model(transform(a, Isomorphism(*iso)))


@pytest.mark.parametrize(
    "a,delta_min",
    [((0, 0, 1, -1, 0), 37), ((0, -1, 1, -10, -20), -161051), ((0, 0, 0, -1, 0), 64)],
)
def test_minimal_examples(a, delta_min):
    r = minimal_model(WeierstrassModel(*a))
    assert r.minimal.ainvs == a
    assert r.delta_min == delta_min
    assert r.delta_min_abs == abs(delta_min)
    assert is_minimal(WeierstrassModel(*a))


def test_scaled_example_is_recovered():
    m = scaled_model((0, 0, 1, -1, 0), (Fraction(1, 2), 0, 0, 0))
    assert m.discriminant == 37 * 2**12
    assert not is_minimal(m)
    r = minimal_model(m)
    assert r.delta_min == 37
    assert r.minimal.ainvs == (0, 0, 1, -1, 0)
    assert transform(m.ainvs, r.to_minimal) == r.minimal.ainvs


def test_non_minimal_at_two_and_three():
    m = WeierstrassModel(0, 0, 0, -16, 0)
    assert minimal_model(m).minimal.ainvs == (0, 0, 0, -1, 0)
    assert not is_minimal_at(m, 2)
    m = scaled_model((0, 0, 0, 0, 1), (Fraction(1, 3), 1, 0, 2))
    assert minimal_model(m).minimal.ainvs == (0, 0, 0, 0, 1)
    assert not is_minimal_at(m, 3)


@settings(max_examples=60, deadline=None)
@given(small_ainvs, integral_isos())
def test_matches_brute_force_oracle(a, iso):
    m = scaled_model(a, iso)
    expected = oracles.reduce_model(oracles.brute_minimal(m.ainvs))
    r = minimal_model(m)
    assert r.minimal.ainvs == expected
    assert transform(m.ainvs, r.to_minimal) == r.minimal.ainvs


@settings(max_examples=100, deadline=None)
@given(ainvs(10**4), integral_isos())
def test_invariance_and_idempotence(a, iso):
    m0 = WeierstrassModel(*a)
    m1 = scaled_model(a, iso)
    r0, r1 = minimal_model(m0), minimal_model(m1)
    assert r0.minimal == r1.minimal
    assert r0.delta_min == r1.delta_min
    assert minimal_model(r0.minimal).minimal == r0.minimal
    assert minimal_model(r0.minimal).to_minimal.u == 1
    # the discriminant quotient is a 12th power, namely u^12
    q = Fraction(m0.discriminant, r0.delta_min)
    assert q == r0.to_minimal.u**12
    assert r0.minimal.j == m0.j


@settings(max_examples=100, deadline=None)
@given(ainvs(10**4))
def test_minimality_certificates(a):
    r = minimal_model(WeierstrassModel(*a))
    inv = r.minimal.invariants()
    for p, e in sympy.factorint(r.delta_min_abs).items():
        if p >= 5:
            assert e < 12 or oracles.val(p, inv.c4) < 4 or oracles.val(p, inv.c6) < 6
        elif e >= 12 and inv.c4 % p**4 == 0 and inv.c6 % p**6 == 0:
            # scaling down once more must break Kraus's condition
            assert not kraus_ok(inv.c4 // p**4, inv.c6 // p**6, p)


@settings(max_examples=40, deadline=None)
@given(small_ainvs, integral_isos())
def test_agrees_with_tate_minimization(a, iso):
    m = scaled_model(a, iso)
    model = m
    for p in sympy.factorint(abs(m.discriminant)):
        model, _ = minimize_at(model.ainvs, p)
    assert abs(model.discriminant) == minimal_model(m).delta_min_abs


def test_minimal_at_three_with_v3_delta_twelve():
    # c4 = 3^5 a, c6 = 3^8 b: minimal at 3 although v_3(Delta) = 12
    found = None
    for a in range(1, 40):
        for b in range(-40, 40):
            c4, c6 = 3**5 * a, 3**8 * b
            if b % 3 == 0 or (c4**3 - c6**2) % 1728 or c4**3 == c6**2:
                continue
            if oracles.val(3, (c4**3 - c6**2) // 1728) != 12 or not kraus_ok(c4, c6, 2):
                continue
            found = model_from_c4c6(c4, c6)
            break
        if found:
            break
    assert found is not None
    assert is_minimal_at(found, 3)
    assert oracles.scale_down_at(found.ainvs, 3) is None


def test_model_from_c4c6_rejects_non_invariants():
    with pytest.raises(ValueError):
        model_from_c4c6(1, 1)
