import random
from fractions import Fraction

import pytest

from wqkd.amplitude import Amplitude
from wqkd.analyzer import splitter_map
from wqkd.errors import UnmappedMode
from wqkd.fock import FockState, Mode, mode, monomial


def a0() -> Mode:
    return Mode("a", 0)


def test_mode_validation():
    with pytest.raises(ValueError):
        mode("i", 0)  # label i is not in the alphabet
    with pytest.raises(ValueError):
        mode("a", -1)


def test_monomial_sorting_and_multiplicity():
    m = monomial(Mode("u", 1), Mode("s", 0), Mode("s", 0))
    assert m == (Mode("s", 0), Mode("s", 0), Mode("u", 1))
    from wqkd.fock import multiplicity_factor

    assert multiplicity_factor(m) == 2
    assert multiplicity_factor((Mode("s", 1),) * 3) == 6


def test_add_examples():
    s = FockState.single(a0())
    assert (s + s.scaled(-1)).is_zero
    t = FockState.single(Mode("a", 1))
    both = s + t
    assert both.n_terms == 2
    half = FockState.single(a0(), Amplitude.gauss(1, 0, 2))
    assert half + half == FockState.single(a0())


def test_tensor_examples():
    pa = FockState.single(Mode("a", 0))
    pb = FockState.single(Mode("b", 0))
    assert pa.tensor(pb).amplitude([Mode("a", 0), Mode("b", 0)]) == Amplitude.one()
    assert pa.tensor(FockState.vacuum()) == pa
    pc = FockState.single(Mode("c", 0))
    bunched = pc.tensor(pc)
    assert bunched.amplitude([Mode("c", 0), Mode("c", 0)]) == Amplitude.one()
    assert bunched.n_terms == 1


def test_splitter_action_on_single_photon():
    bs = splitter_map("a", "b", "c", "d")
    out = FockState.single(a0()).apply_mode_map(bs)
    assert out.amplitude([Mode("c", 0)]) == Amplitude.gauss(0, -1, 1)
    assert out.amplitude([Mode("d", 0)]) == Amplitude.gauss(1, 0, 1)
    assert FockState.vacuum().apply_mode_map(bs) == FockState.vacuum()


def test_two_photon_bunching():
    bs = splitter_map("a", "b", "c", "d")
    out = FockState.from_monomial([Mode("a", 0), Mode("b", 0)]).apply_mode_map(bs)
    # photons bunch: (-i/2)(c0^2 + d0^2)
    assert out.n_terms == 2
    assert out.amplitude([Mode("c", 0), Mode("c", 0)]) == Amplitude.gauss(0, -1, 2)
    assert out.amplitude([Mode("d", 0), Mode("d", 0)]) == Amplitude.gauss(0, -1, 2)
    assert out.norm_squared() == 1
    assert out.pattern_probability([Mode("c", 0), Mode("c", 0)]) == Fraction(1, 2)


def test_unmapped_mode_raises():
    bs = splitter_map("a", "b", "c", "d")
    with pytest.raises(UnmappedMode):
        FockState.single(Mode("e", 0)).apply_mode_map(bs)


def test_mode_map_composition_law():
    bs1 = splitter_map("a", "b", "c", "d")
    bs2 = splitter_map("c", "d", "e", "f")
    state = FockState.from_monomial([Mode("a", 0), Mode("b", 1)])
    sequential = state.apply_mode_map(bs1).apply_mode_map(bs2)
    composed = state.apply_mode_map(bs1.compose(bs2))
    assert sequential == composed


def test_apply_is_linear():
    rng = random.Random(5)
    bs = splitter_map("a", "b", "c", "d")
    for _ in range(50):
        s1 = FockState.single(Mode("a", rng.randrange(2)), Amplitude.gauss(rng.randrange(-3, 4), rng.randrange(-3, 4)))
        s2 = FockState.single(Mode("b", rng.randrange(2)), Amplitude.gauss(rng.randrange(-3, 4), rng.randrange(-3, 4)))
        alpha = Amplitude.gauss(rng.randrange(-2, 3), rng.randrange(-2, 3))
        lhs = (s1.scaled(alpha) + s2).apply_mode_map(bs)
        rhs = s1.apply_mode_map(bs).scaled(alpha) + s2.apply_mode_map(bs)
        assert lhs == rhs


def test_norm_squared_zero_state():
    assert FockState.zero().norm_squared() == 0


def test_norm_squared_mixed_phase_needs_delta():
    from wqkd.errors import MixedPhaseWithoutDelta

    st = FockState.single(a0(), Amplitude.gauss(1) + Amplitude.gauss(1, phase=1))
    with pytest.raises(MixedPhaseWithoutDelta):
        st.norm_squared()
    assert st.norm_squared(0.0) == pytest.approx(4.0)
    assert st.norm_amplitude() == Amplitude.gauss(2) + Amplitude.gauss(1, phase=1) + Amplitude.gauss(1, phase=-1)


def test_pattern_probability_absent_pattern():
    s = FockState.single(a0())
    assert s.pattern_probability([Mode("b", 0)]) == 0


def test_identity_extension():
    bs = splitter_map("a", "b", "c", "d").extended("e")
    out = FockState.from_monomial([Mode("a", 0), Mode("e", 2)]).apply_mode_map(bs)
    assert out.amplitude([Mode("c", 0), Mode("e", 2)]) == Amplitude.gauss(0, -1, 1)
    with pytest.raises(ValueError):
        splitter_map("a", "b", "c", "d").extended("a")


def test_debug_serialization():
    s = FockState.from_monomial([Mode("s", 0), Mode("u", 1)], Amplitude.gauss(1, 0, 4, phase=2))
    assert s.lines() == ["(1+0i)/2^(4/2) * phi^2 * a†[s,t0] a†[u,t1]"]
    assert str(FockState.zero()) == "0"
    assert FockState.vacuum().lines() == ["(1+0i)/2^(0/2) * phi^0 * 1"]
