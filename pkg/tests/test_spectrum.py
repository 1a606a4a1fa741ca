import pytest
from hypothesis import given, settings, strategies as st

from degcoh.spectrum import (
    DegenerateSpectrum,
    EmptySpectrum,
    EnergyLevel,
    MalformedLine,
    NonIncreasingEnergy,
    ZeroDegeneracy,
    build_box2d,
    build_ho2d,
    build_ho3d,
    build_nondegenerate_ho,
    degeneracy_oracle_box2d,
    get_system,
    load_custom,
    serialize,
)

# tabulated box levels rho = n^2 + m^2 - 2 and their degeneracies
BOX_RHO = [0, 3, 6, 8, 11, 15, 16, 18, 23, 24, 27, 30, 32, 35, 38, 39, 43, 48, 50, 51, 56, 59, 63]
BOX_DEG = [1, 2, 1, 2, 2, 2, 1, 2, 2, 2, 2, 1, 2, 2, 2, 2, 2, 3, 2, 2, 2, 2, 4]


def test_box2d_first_seven():
    assert list(build_box2d(7).rho) == [0, 3, 6, 8, 11, 15, 16]


def test_box2d_tabulated_levels():
    spec = build_box2d(23)
    assert [int(r) for r in spec.rho] == BOX_RHO
    assert [int(d) for d in spec.degeneracy] == BOX_DEG
    assert spec.degeneracy[17] == 3 and spec.degeneracy[22] == 4


def test_box2d_two_levels():
    spec = build_box2d(2)
    assert [(lv.rho, lv.degeneracy) for lv in spec.levels] == [(0, 1), (3, 2)]


def test_box2d_matches_enumeration_oracle():
    spec = build_box2d(200)
    for lv in spec.levels:
        assert lv.degeneracy == degeneracy_oracle_box2d(int(lv.rho))


def test_box2d_skips_no_representable_energy():
    # every rho below the last level that has a representation must appear
    spec = build_box2d(200)
    listed = {int(r) for r in spec.rho}
    top = int(spec.rho[-1])
    for rho in range(top + 1):
        assert (rho in listed) == (degeneracy_oracle_box2d(rho) > 0)


@pytest.mark.parametrize("rho, count", [(48, 3), (63, 4), (1, 0), (0, 1), (3, 2)])
def test_degeneracy_oracle(rho, count):
    assert degeneracy_oracle_box2d(rho) == count


def test_ho3d():
    assert list(build_ho3d(3).degeneracy) == [1, 3, 6]
    spec = build_ho3d(11)
    assert spec.levels[0] == EnergyLevel(0.0, 1)
    assert spec.degeneracy[10] == 66


@pytest.mark.parametrize("k", range(51))
def test_ho3d_tetrahedral_sum(k):
    spec = build_ho3d(k + 2)
    assert sum(lv.degeneracy for lv in spec.levels[: k + 1]) == (k + 1) * (k + 2) * (k + 3) // 6


def test_ho2d():
    assert list(build_ho2d(4).degeneracy) == [1, 2, 3, 4]
    spec = build_ho2d(100)
    assert (spec.levels[0].rho, spec.levels[0].degeneracy) == (0, 1)
    assert (spec.levels[-1].rho, spec.levels[-1].degeneracy) == (99, 100)


def test_nondegenerate():
    spec = build_nondegenerate_ho(3)
    assert [(lv.rho, lv.degeneracy) for lv in spec.levels] == [(0, 1), (1, 1), (2, 1)]
    assert set(build_nondegenerate_ho(50).degeneracy) == {1}


@pytest.mark.parametrize("builder", [build_box2d, build_ho2d, build_ho3d, build_nondegenerate_ho])
def test_rejects_short(builder):
    with pytest.raises(ValueError):
        builder(1)


def test_integer_flag():
    assert build_box2d(30).integer_valued
    assert not load_custom("0 1\n0.5 2\n").integer_valued


def test_load_custom_box_prefix():
    spec = load_custom("0 1\n3 2\n6 1")
    assert spec.levels == build_box2d(3).levels


def test_load_custom_shifts():
    spec = load_custom("2 1\n5 2")
    assert [(lv.rho, lv.degeneracy) for lv in spec.levels] == [(0, 1), (3, 2)]


def test_load_custom_comments_and_label():
    spec = load_custom("# system: toy\n\n# note\n0 1\n  1.5   3  \n")
    assert spec.label == "toy"
    assert spec.levels[1] == EnergyLevel(1.5, 3)


@pytest.mark.parametrize("text, error", [
    ("0 1\n3 0", ZeroDegeneracy),
    ("0 1\n3", MalformedLine),
    ("0 1\nthree 2", MalformedLine),
    ("0 1\n3 1.5", MalformedLine),
    ("0 1\n3 2\n3 1", NonIncreasingEnergy),
    ("0 1\n3 2\n2 1", NonIncreasingEnergy),
    ("# only comments\n", EmptySpectrum),
    ("0 1\n", EmptySpectrum),
])
def test_load_custom_errors(text, error):
    with pytest.raises(error):
        load_custom(text)


def test_spectrum_invariants():
    with pytest.raises(NonIncreasingEnergy):
        DegenerateSpectrum((EnergyLevel(1.0, 1), EnergyLevel(2.0, 1)))
    with pytest.raises(ZeroDegeneracy):
        EnergyLevel(1.0, 0)


@pytest.mark.parametrize("spec", [build_box2d(60), build_ho2d(40), build_ho3d(40), build_nondegenerate_ho(10)])
def test_round_trip_builtin(spec):
    assert load_custom(serialize(spec)) == spec


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.floats(1e-6, 1e3), st.integers(1, 50)), min_size=1, max_size=40))
def test_round_trip_random(gaps):
    rho, levels = 0.0, [EnergyLevel(0.0, 1)]
    for gap, deg in gaps:
        rho += gap
        levels.append(EnergyLevel(rho, deg))
    spec = DegenerateSpectrum(tuple(levels), "random")
    assert load_custom(serialize(spec)) == spec


def test_get_system(tmp_path):
    assert len(get_system("box2d-23")) == 23
    assert len(get_system("ho3d", 40)) == 40
    path = tmp_path / "s.txt"
    path.write_text("0 1\n2 2\n")
    assert get_system(f"custom:{path}").levels[1] == EnergyLevel(2.0, 2)
    with pytest.raises(ValueError):
        get_system("hydrogen")
