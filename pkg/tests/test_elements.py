import math

import numpy as np
import pytest

from focksim import (
    ModeRegistry,
    ModeUnitary,
    beam_splitter,
    compose,
    dual_pol_beam_splitter,
    embed_into,
    half_wave_plate,
    mode,
    pbs_router,
)
from focksim.errors import (
    DimensionMismatchError,
    DomainError,
    DuplicateModeError,
    MissingModeError,
)

A = 1.0 / math.sqrt(2.0)


def unitarity_defect(u: ModeUnitary) -> float:
    m = u.matrix
    return float(np.abs(m.conj().T @ m - np.eye(u.dim)).max())


def test_beam_splitter_convention():
    u = beam_splitter(0.5).matrix
    # column 0: first port -> (sqrt R, sqrt 1-R); column 1 carries the minus
    assert np.allclose(u[:, 0], [A, A], atol=1e-12)
    assert np.allclose(u[:, 1], [-A, A], atol=1e-12)


def test_beam_splitter_limits():
    assert np.allclose(beam_splitter(1.0).matrix, np.eye(2), atol=0)
    assert np.allclose(beam_splitter(0.0).matrix, [[0, -1], [1, 0]], atol=0)


def test_beam_splitter_domain():
    with pytest.raises(DomainError):
        beam_splitter(-0.1)
    with pytest.raises(DomainError):
        beam_splitter(1.1)


def test_beam_splitter_entries_real_and_unitary():
    for r in np.linspace(0.0, 1.0, 11):
        u = beam_splitter(float(r))
        assert np.abs(u.matrix.imag).max() == 0.0
        assert unitarity_defect(u) < 1e-12


def test_dual_pol_blocks():
    r_v = 5.0 - 3.0 * math.sqrt(2.0)
    r_h = (3.0 - math.sqrt(2.0)) / 7.0
    assert r_v == pytest.approx(0.757359313, abs=1e-9)
    assert r_h == pytest.approx(0.226540920, abs=1e-9)
    u = dual_pol_beam_splitter(r_v, r_h).matrix
    np.testing.assert_array_equal(u[:2, :2], beam_splitter(r_h).matrix)
    np.testing.assert_array_equal(u[2:, 2:], beam_splitter(r_v).matrix)
    assert np.abs(u[:2, 2:]).max() == 0.0
    assert np.abs(u[2:, :2]).max() == 0.0


def test_dual_pol_equal_reflectivities_match_single():
    for r in (0.3, 0.5, 0.9):
        u = dual_pol_beam_splitter(r, r).matrix
        single = beam_splitter(r).matrix
        np.testing.assert_array_equal(u[:2, :2], single)
        np.testing.assert_array_equal(u[2:, 2:], single)


def test_dual_pol_identity():
    assert np.allclose(dual_pol_beam_splitter(1.0, 1.0).matrix, np.eye(4), atol=0)


def test_half_wave_plate_angles():
    u45 = half_wave_plate(45.0).matrix
    assert np.allclose(u45, [[A, A], [A, -A]], atol=1e-12)
    u0 = half_wave_plate(0.0).matrix
    assert np.allclose(u0, [[1, 0], [0, -1]], atol=1e-12)
    u90 = half_wave_plate(90.0).matrix
    assert np.allclose(u90, [[0, 1], [1, 0]], atol=1e-12)
    assert np.abs(u45.imag).max() == 0.0


def analyzer_registry():
    return ModeRegistry(
        [mode(7, "H"), mode(7, "V"), mode(9, "V"), mode(10, "H")]
    )


def test_pbs_router_routes_polarizations():
    reg = analyzer_registry()
    u = pbs_router(reg).matrix
    assert u[reg.index(mode(9, "V")), reg.index(mode(7, "V"))] == 1.0
    assert u[reg.index(mode(10, "H")), reg.index(mode(7, "H"))] == 1.0
    assert set(np.unique(u.real)) <= {0.0, 1.0}
    assert np.abs(u.imag).max() == 0.0
    assert unitarity_defect(pbs_router(reg)) == 0.0


def test_pbs_router_splits_polarized_pair():
    from focksim import basis_state, transform

    reg = analyzer_registry()
    pair = basis_state(reg, {mode(7, "V"): 1, mode(7, "H"): 1})
    routed = transform(pbs_router(reg), pair)
    target = reg.occupation({mode(9, "V"): 1, mode(10, "H"): 1})
    assert routed.amplitude(target) == pytest.approx(1.0, abs=1e-12)
    single_v = transform(pbs_router(reg), basis_state(reg, {mode(7, "V"): 1}))
    assert single_v.amplitude(reg.occupation({mode(9, "V"): 1})) == pytest.approx(1.0)
    single_h = transform(pbs_router(reg), basis_state(reg, {mode(7, "H"): 1}))
    assert single_h.amplitude(reg.occupation({mode(10, "H"): 1})) == pytest.approx(1.0)


def test_pbs_router_missing_modes():
    with pytest.raises(MissingModeError):
        pbs_router(ModeRegistry([mode(7, "H"), mode(7, "V")]))
    with pytest.raises(MissingModeError):
        pbs_router(ModeRegistry([mode(1, "H")]))


def test_embed_identity_anywhere():
    reg = ModeRegistry([mode(s, "H") for s in range(6)])
    u = embed_into(ModeUnitary(np.eye(2)), [mode(2, "H"), mode(4, "H")], reg)
    assert np.allclose(u.matrix, np.eye(6), atol=0)


def test_embed_preserves_unitarity():
    reg = ModeRegistry([mode(s, p) for s in (3, 5, 8) for p in "HV"])
    u = embed_into(beam_splitter(0.5), [mode(3, "H"), mode(5, "H")], reg)
    assert unitarity_defect(u) < 1e-12


def test_embed_then_inverse_is_identity():
    reg = ModeRegistry([mode(s, "H") for s in range(4)])
    b = beam_splitter(0.37)
    forward = embed_into(b, [mode(1, "H"), mode(3, "H")], reg)
    backward = embed_into(ModeUnitary(b.matrix.conj().T), [mode(1, "H"), mode(3, "H")], reg)
    assert np.allclose(compose([forward, backward]).matrix, np.eye(4), atol=1e-12)


def test_embed_errors():
    reg = ModeRegistry([mode(s, "H") for s in range(4)])
    with pytest.raises(DimensionMismatchError):
        embed_into(beam_splitter(0.5), [mode(0, "H")], reg)
    with pytest.raises(DuplicateModeError):
        embed_into(beam_splitter(0.5), [mode(0, "H"), mode(0, "H")], reg)
    with pytest.raises(MissingModeError):
        embed_into(beam_splitter(0.5), [mode(0, "H"), mode(9, "H")], reg)


def test_compose_single_and_inverse():
    b = beam_splitter(0.42)
    assert np.array_equal(compose([b]).matrix, b.matrix)
    inverse = ModeUnitary(b.matrix.conj().T)
    assert np.allclose(compose([b, inverse]).matrix, np.eye(2), atol=1e-12)


def test_compose_two_balanced_splitters_swap():
    # direct 2x2 product oracle
    b = beam_splitter(0.5).matrix
    expected = b @ b
    got = compose([beam_splitter(0.5), beam_splitter(0.5)]).matrix
    assert np.allclose(got, expected, atol=1e-15)
    assert abs(got[0, 0]) < 1e-15
    assert np.allclose(np.abs(got), [[0, 1], [1, 0]], atol=1e-12)


def test_compose_order_first_listed_acts_first():
    reg = ModeRegistry([mode(7, "H"), mode(7, "V"), mode(9, "V"), mode(10, "H")])
    hwp = embed_into(half_wave_plate(90.0), [mode(7, "H"), mode(7, "V")], reg)
    router = pbs_router(reg)
    u = compose([hwp, router]).matrix
    # H flips to V at the plate, then V routes to detector path A
    assert u[reg.index(mode(9, "V")), reg.index(mode(7, "H"))] == pytest.approx(1.0)


def test_compose_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        compose([beam_splitter(0.5), dual_pol_beam_splitter(0.5, 0.5)])
    with pytest.raises(DimensionMismatchError):
        compose([])


def test_random_constructor_unitarity():
    rng = np.random.default_rng(7)
    for _ in range(50):
        r = float(rng.uniform())
        assert unitarity_defect(beam_splitter(r)) < 1e-10
        assert unitarity_defect(dual_pol_beam_splitter(r, float(rng.uniform()))) < 1e-10
        assert unitarity_defect(half_wave_plate(float(rng.uniform(-360, 360)))) < 1e-10


def test_mode_unitary_rejects_non_unitary():
    with pytest.raises(DomainError):
        ModeUnitary(np.array([[1.0, 0.0], [0.0, 2.0]]))
    with pytest.raises(DimensionMismatchError):
        ModeUnitary(np.ones((2, 3)))
