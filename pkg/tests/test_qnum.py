"""Quantum-number bookkeeping: aggregates, degeneracies, ground states."""

import math

import pytest

from envtheory import qnum
from envtheory.errors import InputError


def test_spec_aggregates():
    spec = qnum.QuantumSpec(D=3, internal_modes=((1, 2), (0, 1)))
    assert spec.nu == 2.0         # 1 + 0 + 2 * 1/2
    assert spec.lam == 4.0        # 2 + 1 + 2 * 1/2
    assert qnum.global_q(spec, 2.0) == 8.0
    assert qnum.global_q(spec, 1.5) == 7.0


def test_spec_relative_mode_aggregates():
    spec = qnum.QuantumSpec(D=4, internal_modes=((0, 0),), relative_mode=(2, 1))
    assert spec.nu_b == 2.5
    assert spec.lam_b == 2.0
    no_rel = qnum.QuantumSpec(D=4, internal_modes=((0, 0),))
    with pytest.raises(InputError):
        no_rel.nu_b
    with pytest.raises(InputError):
        no_rel.lam_b


@pytest.mark.parametrize("bad", [
    dict(D=1, internal_modes=((0, 0),)),
    dict(D=3, internal_modes=()),
    dict(D=3, internal_modes=((-1, 0),)),
    dict(D=3, internal_modes=((0, 0),), relative_mode=(0, -2)),
])
def test_spec_validation(bad):
    with pytest.raises(InputError):
        qnum.QuantumSpec(**bad)


def test_global_q_requires_positive_phi():
    spec = qnum.ground_spec(3, 3)
    with pytest.raises(InputError):
        qnum.global_q(spec, 0.0)


def test_level_degeneracy_closed_form():
    # For D >= 3 the count per d equals the difference of two simplex
    # binomials, C(l+D-1, D-1) - C(l+D-3, D-1); checking against that
    # independent form exercises the implemented expression.
    for D in (3, 4, 5, 7):
        for l in range(0, 9):
            expect = math.comb(l + D - 1, D - 1) - math.comb(l + D - 3, D - 1)
            assert qnum.level_degeneracy(l, D) == expect
            assert qnum.level_degeneracy(l, D, d=3) == 3 * expect
    # D = 2 keeps only the two planar senses of rotation.
    assert qnum.level_degeneracy(0, 2) == 1
    assert qnum.level_degeneracy(5, 2) == 2
    assert qnum.level_degeneracy(5, 2, d=4) == 8
    with pytest.raises(InputError):
        qnum.level_degeneracy(-1, 3)


def test_bgs_aggregates():
    res = qnum.bgs(5, 3)
    assert res.nu == 2.0
    assert res.lam == 2.0
    assert res.q_phi == 6.0                  # (N-1) D/2 at phi = 2
    assert res.levels == ((0, 0, 5),)
    assert qnum.bgs(5, 3, phi=1.0).q_phi == 4.0


def test_fgs_fill_atomic_fillings():
    # Electrons: D = 3, two spin states per orbital.
    cases = {2: (0.5, 0.5), 3: (1.0, 2.0), 6: (2.5, 6.5), 8: (3.5, 9.5)}
    for n_elec, (nu, lam) in cases.items():
        res = qnum.fgs_fill(n_elec, 3, 2)
        assert res.nu == nu
        assert res.lam == lam
        assert res.q_phi == 2.0 * nu + lam
        assert sum(occ for _, _, occ in res.levels) == n_elec


def test_fgs_fill_reduces_to_bgs_for_wide_levels():
    # With d >= N everybody fits in the lowest level.
    for D in (2, 3, 4):
        for N in (2, 5, 9):
            res = qnum.fgs_fill(N, D, d=N)
            ref = qnum.bgs(N, D)
            assert (res.nu, res.lam) == (ref.nu, ref.lam)


@pytest.mark.parametrize("variant,phi", [(2, 2.0), (1, 1.0)])
def test_fgs_closed_matches_brute_force(variant, phi):
    for D in (2, 3, 4):
        for d in (1, 2):
            for N in range(2, 41):
                filled = qnum.fgs_fill(N, D, d, phi)
                assert qnum.fgs_closed(N, D, d, variant) == pytest.approx(
                    filled.q_phi, abs=1e-12), (D, d, N)


def test_fgs_fill_tie_ordering_is_lower_n_first():
    # At phi = 2 the keys 2n + l tie, e.g. (1, 0) and (0, 2).  The filling
    # reports the lower-n level first, and Q_phi is tie-invariant: putting
    # the fifth particle in (0, 2) or (1, 0) gives 2 nu + lam = 11 either way.
    res = qnum.fgs_fill(5, 3, d=1, phi=2.0)
    assert res.levels == ((0, 0, 1), (0, 1, 3), (0, 2, 1))
    assert res.q_phi == 11.0


def test_fgs_fill_noninteger_phi_reorders_levels():
    # Lowering phi below 1 makes radial excitation cheaper than orbital,
    # so the second particle climbs in n instead of l.
    res = qnum.fgs_fill(2, 3, d=1, phi=0.5)
    assert res.levels == ((0, 0, 1), (1, 0, 1))
    assert res.nu == 1.5
    assert res.lam == 0.5


def test_fgs_closed_variant_validation():
    with pytest.raises(InputError):
        qnum.fgs_closed(4, 3, 1, variant=3)
    with pytest.raises(InputError):
        qnum.fgs_fill(1, 3, 1)
    with pytest.raises(InputError):
        qnum.fgs_fill(4, 3, 1, phi=-2.0)


def test_fgs_approx_tracks_closed_form_at_large_n():
    for D in (2, 3, 4):
        exact = qnum.fgs_closed(4000, D, 2, variant=2)
        approx = qnum.fgs_approx(4000, D, 2, phi=2.0)
        assert approx == pytest.approx(exact, rel=0.03)


def test_ground_spec_matches_bgs():
    spec = qnum.ground_spec(6, 4)
    ref = qnum.bgs(6, 4)
    assert spec.nu == ref.nu
    assert spec.lam == ref.lam
    with pytest.raises(InputError):
        qnum.ground_spec(1, 3)


def test_split_ground_spec():
    spec = qnum.split_ground_spec(3, 3)
    assert len(spec.internal_modes) == 2
    assert spec.relative_mode == (0, 0)
    assert spec.nu == 1.0 and spec.lam == 1.0
    assert spec.nu_b == 0.5 and spec.lam_b == 0.5


def test_spec_from_filling_roundtrip():
    filling = qnum.fgs_fill(8, 3, 2)
    split = qnum.spec_from_filling(filling)
    assert split.nu == filling.nu
    assert split.lam == filling.lam
    assert split.relative_mode == (0, 0)
    ident = qnum.spec_from_filling(filling, relative_mode=None)
    assert ident.relative_mode is None
    assert qnum.global_q(ident, 2.0) == filling.q_phi


def test_spec_from_filling_rejects_fractional_aggregates():
    broken = qnum.GroundStateResult(N=3, D=3, phi=1.7, statistics="fermion",
                                    d=1, levels=((0, 0, 3),), nu=1.25,
                                    lam=1.0, q_phi=3.125)
    with pytest.raises(InputError):
        qnum.spec_from_filling(broken)
