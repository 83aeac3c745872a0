import random
from fractions import Fraction

import pytest

from wqkd.amplitude import Amplitude
from wqkd.errors import MixedPhaseWithoutDelta


def rand_amp(rng, max_terms=3):
    terms = {}
    for _ in range(rng.randrange(max_terms + 1)):
        k = rng.randrange(-3, 4)
        terms[k] = (
            rng.randrange(-9, 10),
            rng.randrange(-9, 10),
            rng.randrange(-3, 4),
            rng.randrange(-3, 4),
            rng.randrange(0, 6),
        )
    return Amplitude(terms)


def test_zero_and_one():
    assert Amplitude.zero().is_zero
    assert Amplitude.one() + Amplitude.zero() == Amplitude.one()
    assert (Amplitude.one() - Amplitude.one()).is_zero


def test_ring_laws_randomized():
    rng = random.Random(2024)
    for _ in range(300):
        a, b, c = (rand_amp(rng) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert a + b == b + a
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c


def test_canonical_idempotence():
    rng = random.Random(7)
    for _ in range(200):
        a = rand_amp(rng)
        rebuilt = Amplitude({k: a.coefficient(k) for k in a.phase_powers()})
        assert rebuilt == a


def test_phase_multiplication_adds_powers():
    a = Amplitude.gauss(3, -1, 2, phase=1)
    b = Amplitude.gauss(1, 1, 1, phase=2)
    assert (a * b).phase_powers() == (3,)


def test_conjugation_negates_phase_and_imaginary():
    a = Amplitude.gauss(2, 5, 3, phase=2)
    c = a.conjugate()
    assert c.phase_powers() == (-2,)
    assert c.coefficient(-2) == (2, -5, 0, 0, 3)
    # self-product lands on phase power zero with a non-negative real value
    rng = random.Random(11)
    for _ in range(100):
        x = rand_amp(rng, max_terms=1)
        prod = x * x.conjugate()
        assert set(prod.phase_powers()) <= {0}
        _p, q, _r, s, _h = prod.coefficient(0)
        assert q == 0 and s == 0
        value = prod.evaluate(0.0)
        assert value.imag == 0 and value.real >= 0


def test_abs2_unique_phase_is_exact():
    # 128 * phi^2 / 2048 has squared magnitude (128/2048)^2 = 1/256
    a = Amplitude.gauss(128, 0, 22, phase=2)
    assert a.abs2() == Fraction(1, 256)
    assert Amplitude.zero().abs2() == 0
    # (1 + i)/sqrt(2) has unit magnitude
    assert Amplitude.gauss(1, 1, 1).abs2() == 1


def test_abs2_mixed_phase_requires_delta():
    a = Amplitude.gauss(1) + Amplitude.gauss(1, phase=1)
    with pytest.raises(MixedPhaseWithoutDelta):
        a.abs2()
    # |1 + e^{i*delta}|^2 = 2 + 2 cos(delta)
    assert a.abs2(0.0) == pytest.approx(4.0)
    import math

    assert a.abs2(math.pi) == pytest.approx(0.0, abs=1e-12)


def test_mixed_parity_addition_is_exact():
    half_power = Amplitude.gauss(1, 0, 1)  # 1/sqrt(2)
    s = Amplitude.one() + half_power
    assert s - half_power == Amplitude.one()
    assert s * s == Amplitude.one() + 2 * half_power + Amplitude.gauss(1, 0, 2)


def test_at_phase_one_collapses_exactly():
    a = Amplitude.gauss(1, phase=0) - Amplitude.gauss(1, phase=2)
    assert a.at_phase_one().is_zero
    b = Amplitude.gauss(1, 0, 1, phase=0) + Amplitude.gauss(1, 0, 1, phase=1)
    assert b.at_phase_one().abs2() == 2


def test_rendering():
    a = Amplitude.gauss(128, 0, 22, phase=2)
    assert str(a) == "(1+0i)/2^(8/2) * phi^2"
    assert str(Amplitude.zero()) == "0"
    b = Amplitude.gauss(-1, 2, 3, phase=-1)
    assert str(b) == "(-1+2i)/2^(3/2) * phi^-1"
