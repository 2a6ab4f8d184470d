"""Split-system solver: oscillator oracle, curvatures, identical-particle limit.

The harmonic split system is exactly solvable.  With T_a = p^2/(2 m_a),
T_b = p^2/(2 m_b), V_aa = k_aa r^2 and V_ab = k_ab r^2, separating the block
Jacobi modes from the block-to-particle relative mode gives

    E = w_a q_a + w_b q_b,
    w_a = sqrt(2 (N_a k_aa + k_ab) / m_a),
    w_b = sqrt(2 N_a k_ab (N_a m_a + m_b) / (N_a m_a m_b)),

so every numeric path must reproduce it, including the deformations
(phi_a, phi_b) = (2, 2) and the two effective masses m_a/N_a and
N_a m_a m_b/(N_a m_a + m_b).
"""

import math

import pytest

from envtheory import laws
from envtheory.errors import (DegenerateOrbitalError, InputError, NoBindingError,
                              NonConvergenceError, EnvTheoryError)
from envtheory.qnum import QuantumSpec, split_ground_spec
from envtheory.solver_identical import IdenticalSystem, dosm_identical, solve_et
from envtheory.solver_nplus1 import (NPlusOneSystem, atom_report, dosm_np1,
                                     phi_pair, solve_atom, solve_et_np1,
                                     solve_iet_np1)


def _ho_split(N_a, m_a, m_b, k_aa, k_ab, D=3):
    return NPlusOneSystem(N_a, D,
                          laws.kinetic_power(0.5 / m_a, 2.0),
                          laws.kinetic_power(0.5 / m_b, 2.0),
                          laws.harmonic(k_aa), laws.harmonic(k_ab))


def _ho_frequencies(N_a, m_a, m_b, k_aa, k_ab):
    w_a = math.sqrt(2.0 * (N_a * k_aa + k_ab) / m_a)
    w_b = math.sqrt(2.0 * N_a * k_ab * (N_a * m_a + m_b) / (N_a * m_a * m_b))
    return w_a, w_b


HO_CASES = [
    (2, 1.0, 3.0, 1.0, 0.7),
    (3, 0.5, 1.0, 2.0, 1.3),
    (5, 1.0, 0.2, 0.4, 2.0),
]


@pytest.mark.parametrize("N_a,m_a,m_b,k_aa,k_ab", HO_CASES)
def test_harmonic_oracle_solve(N_a, m_a, m_b, k_aa, k_ab):
    system = _ho_split(N_a, m_a, m_b, k_aa, k_ab)
    w_a, w_b = _ho_frequencies(N_a, m_a, m_b, k_aa, k_ab)
    for q_a, q_b in ((2.0, 1.5), (3.0, 0.5), (1.0, 4.0)):
        sol = solve_et_np1(system, q_a, q_b)
        assert sol.energy == pytest.approx(w_a * q_a + w_b * q_b, rel=1e-10)
        assert sol.residual_a < 1e-10 and sol.residual_b < 1e-10
        assert sol.q_a == q_a and sol.q_b == q_b
        # Quantization conditions hold for the reported geometry.
        assert math.sqrt(0.5 * N_a * (N_a - 1)) * sol.p_a * sol.r_aa \
            == pytest.approx(q_a, rel=1e-12)
        assert sol.P0 * sol.R0 == pytest.approx(q_b, rel=1e-12)


def test_heavy_partner_converges():
    # Mass ratio 1e4 between the block and the distinct particle; the
    # starting point must account for block recoil or the Newton iteration
    # starts in a flat region of the scaled residuals.
    system = _ho_split(2, 1.0, 1.0e4, 1.0, 0.7)
    w_a, w_b = _ho_frequencies(2, 1.0, 1.0e4, 1.0, 0.7)
    sol = solve_et_np1(system, 2.0, 1.5)
    assert sol.energy == pytest.approx(w_a * 2.0 + w_b * 1.5, rel=1e-9)


def test_harmonic_dosm_masses_and_deformations():
    N_a, m_a, m_b, k_aa, k_ab = 2, 1.0, 3.0, 1.0, 0.7
    report = dosm_np1(_ho_split(N_a, m_a, m_b, k_aa, k_ab), 1.5, 0.5)
    w_a, w_b = _ho_frequencies(N_a, m_a, m_b, k_aa, k_ab)
    assert report.phi_a == pytest.approx(2.0, rel=1e-9)
    assert report.phi_b == pytest.approx(2.0, rel=1e-9)
    assert report.mu_a == pytest.approx(m_a / N_a, rel=1e-10)
    assert report.mu_b == pytest.approx(
        N_a * m_a * m_b / (N_a * m_a + m_b), rel=1e-10)
    # First-order responses are the two frequencies times the aggregates.
    assert report.D_a == pytest.approx(w_a * report.lam_a, rel=1e-9)
    assert report.D_b == pytest.approx(w_b * report.lam_b, rel=1e-9)
    for nu_a, nu_b in ((0.5, 0.5), (0.5, 1.5), (2.5, 0.5)):
        assert report.level(nu_a, nu_b) == pytest.approx(
            w_a * (2 * nu_a + report.lam_a) + w_b * (2 * nu_b + report.lam_b),
            rel=1e-9)


def test_harmonic_iet_is_exact():
    N_a, m_a, m_b, k_aa, k_ab = 3, 0.5, 1.0, 2.0, 1.3
    system = _ho_split(N_a, m_a, m_b, k_aa, k_ab)
    w_a, w_b = _ho_frequencies(N_a, m_a, m_b, k_aa, k_ab)
    spec = QuantumSpec(D=3, internal_modes=((1, 1), (0, 2)), relative_mode=(1, 0))
    sol = solve_iet_np1(system, spec)
    q_a = 2.0 * spec.nu + spec.lam
    q_b = 2.0 * spec.nu_b + spec.lam_b
    assert sol.energy == pytest.approx(w_a * q_a + w_b * q_b, rel=1e-9)
    assert sol.phi_a == pytest.approx(2.0, rel=1e-9)
    assert sol.phi_b == pytest.approx(2.0, rel=1e-9)


def _fd_second(f, x, h):
    """Five-point second derivative, O(h^4)."""
    return (-f(x - 2 * h) + 16 * f(x - h) - 30 * f(x)
            + 16 * f(x + h) - f(x + 2 * h)) / (12 * h * h)


def _fd_cross(f, x, y, hx, hy):
    """Mixed second derivative with one Richardson sweep, O(h^4)."""
    def estimate(s):
        return (f(x + s * hx, y + s * hy) - f(x + s * hx, y - s * hy)
                - f(x - s * hx, y + s * hy) + f(x - s * hx, y - s * hy)) \
            / (4.0 * s * s * hx * hy)

    return (4.0 * estimate(0.5) - estimate(1.0)) / 3.0


def _constrained_energy(system, lam_a, lam_b):
    """E(r_aa, R0) with the momenta eliminated by the quantization conditions.

    Independent restatement of the solver's energy surface, written from the
    public laws; its Hessian at the orbital point is the quadratic form the
    radial-mode analysis reports.
    """
    N_a = system.N_a
    c2 = 0.5 * N_a * (N_a - 1)

    def energy(r_aa, R0):
        p_a = lam_a / (math.sqrt(c2) * r_aa)
        P0 = lam_b / R0
        pap = math.sqrt(p_a**2 + P0**2 / N_a**2)
        r0p = math.sqrt(R0**2 + 0.5 * (N_a - 1) / N_a * r_aa**2)
        return (N_a * system.kinetic_a.value(pap) + system.kinetic_b.value(P0)
                + c2 * system.potential_aa.value(r_aa)
                + N_a * system.potential_ab.value(r0p))

    return energy


FD_SYSTEMS = [
    _ho_split(2, 1.0, 3.0, 1.0, 0.7),
    NPlusOneSystem(2, 3, laws.kinetic_power(1.0, 1.0), laws.kinetic_power(1.0, 1.0),
                   laws.harmonic(1.0), laws.harmonic(2.0)),
    NPlusOneSystem(2, 3, laws.kinetic_power(0.5, 2.0),
                   laws.kinetic_power(0.5 / 100.0, 2.0),
                   laws.power(1.0, -1.0), laws.coulomb(2.0)),
]


@pytest.mark.parametrize("system", FD_SYSTEMS,
                         ids=["harmonic", "linear-kinetic", "coulomb"])
def test_dosm_quadratic_form_matches_energy_hessian(system):
    lam_a, lam_b = 1.5, 0.5
    report = dosm_np1(system, lam_a, lam_b)
    energy = _constrained_energy(system, lam_a, lam_b)
    r, R = report.r_aa, report.R0
    h_r, h_R = 1e-3 * r, 1e-3 * R
    # The relative test degenerates when a constant vanishes (harmonic
    # laws have no cross-coupling at all), so anchor the absolute floor
    # to the finite-difference noise on the scale of the diagonal.
    floor = 1e-7 * max(abs(report.k_a), abs(report.k_b))
    assert report.k_a == pytest.approx(
        _fd_second(lambda x: energy(x, R), r, h_r), rel=1e-7)
    assert report.k_b == pytest.approx(
        _fd_second(lambda x: energy(r, x), R, h_R), rel=1e-7)
    assert report.k_c == pytest.approx(
        2.0 * _fd_cross(energy, r, R, h_r, h_R), rel=1e-6, abs=floor)


def test_harmonic_split_has_no_cross_coupling():
    # T and V quadratic make both cross terms vanish identically.
    report = dosm_np1(_ho_split(2, 1.0, 3.0, 1.0, 0.7), 1.5, 0.5)
    assert report.k_c == pytest.approx(0.0, abs=1e-12)


def test_dosm_first_order_responses_match_energy_slopes():
    # D_a / lam_a and D_b / lam_b are the partial derivatives of the orbital
    # energy with respect to the two aggregates.
    system = FD_SYSTEMS[2]
    lam_a, lam_b = 1.5, 0.5
    report = dosm_np1(system, lam_a, lam_b)
    h = 1e-4

    def orbital(la, lb):
        return solve_et_np1(system, la, lb).energy

    slope_a = (orbital(lam_a + h, lam_b) - orbital(lam_a - h, lam_b)) / (2 * h)
    slope_b = (orbital(lam_a, lam_b + h) - orbital(lam_a, lam_b - h)) / (2 * h)
    assert report.D_a / lam_a == pytest.approx(slope_a, rel=1e-5)
    assert report.D_b / lam_b == pytest.approx(slope_b, rel=1e-5)


def _same_law_pair(N_a, alpha, beta):
    """A split system whose two species obey identical laws, and the
    corresponding system of N_a + 1 genuinely identical particles."""
    kin = laws.kinetic_power(0.7, alpha)
    pot = laws.potential_power(1.3, beta)
    split = NPlusOneSystem(N_a, 3, kin, kin, pot, pot)
    merged = IdenticalSystem(N_a + 1, 3, kin, pot)
    return split, merged


@pytest.mark.parametrize("N_a,alpha,beta", [
    (2, 2.0, 2.0), (3, 2.0, 1.0), (4, 1.0, 2.0), (5, 2.0, 0.5),
])
def test_identical_limit_of_split_solver(N_a, alpha, beta):
    # When the distinct particle obeys the block's laws, the split solution
    # must collapse onto the identical-particle one: equal ground energies,
    # a symmetric geometry, and effective masses and stiffnesses that
    # recombine into the single radial mode of the merged system.
    split, merged = _same_law_pair(N_a, alpha, beta)
    D = 3
    lam_a = 0.5 * (N_a - 1) * (D - 2)
    lam_b = 0.5 * (D - 2)
    q_a = (N_a - 1) + lam_a
    q_b = 1.0 + lam_b
    sol_split = solve_et_np1(split, q_a, q_b)
    sol_merged = solve_et(merged, 0.5 * N_a * D)
    assert sol_split.energy == pytest.approx(sol_merged.energy, rel=1e-10)

    rep_split = dosm_np1(split, lam_a, lam_b)
    rep_merged = dosm_identical(merged, lam_a + lam_b)
    assert rep_split.r_0_prime == pytest.approx(rep_split.r_aa, rel=1e-10)
    assert rep_split.p_a_prime == pytest.approx(rep_split.P0, rel=1e-10)
    assert rep_split.energy_orbital == pytest.approx(
        rep_merged.energy_orbital, rel=1e-10)
    # Substituting the symmetric relations P0^2 = N_a^2/(N_a^2-1) p_r^2 and
    # R0^2 = (N_a+1)/(2 N_a) r^2 into the split quadratic form collapses it
    # onto the merged one; masses combine harmonically, stiffnesses linearly.
    f = (N_a + 1.0) / (2.0 * N_a)
    mu_combo = 1.0 / ((N_a**2 - 1.0) / N_a**2 / rep_split.mu_a
                      + 1.0 / rep_split.mu_b)
    k_combo = rep_split.k_a + rep_split.k_b * f + rep_split.k_c * math.sqrt(f)
    assert mu_combo == pytest.approx(rep_merged.mu, rel=1e-10)
    assert k_combo == pytest.approx(rep_merged.k, rel=1e-9)


def test_same_law_linear_kinetic_limit():
    # T = |p| with a shared harmonic pair force: the split ground state at
    # the deformed-free quantum numbers equals the merged N = 3 solution.
    kin = laws.kinetic_power(1.0, 1.0)
    pot = laws.harmonic(1.0)
    split = NPlusOneSystem(2, 3, kin, kin, pot, pot)
    merged = IdenticalSystem(3, 3, kin, pot)
    sol = solve_et_np1(split, 1.5, 1.5)
    ref = solve_et(merged, 3.0)
    assert sol.energy == pytest.approx(ref.energy, rel=1e-10)


def test_helium_reference_binding():
    report = atom_report(2.0, 2, 7294.30, "et")
    assert report.binding_ev == pytest.approx(33.0, abs=0.5)
    # Frozen regression value for the full pipeline.
    assert report.binding_ev == pytest.approx(33.10379738369259, rel=1e-10)
    assert report.energy < 0.0
    assert report.filling_levels == ((0, 0, 2),)
    assert report.nu_a == 0.5 and report.lam_a == 0.5
    assert solve_atom(2.0, 2, 7294.30, "et") == report.binding_ev


def test_atom_iet_deforms_both_numbers():
    report = atom_report(2.0, 2, 7294.30, "iet")
    assert report.method == "iet"
    assert report.phi_a is not None and report.phi_b is not None
    assert 0.5 < report.phi_a < 2.0
    assert 0.5 < report.phi_b < 2.5
    assert report.binding_ev > 0.0


def test_atom_validation():
    with pytest.raises(InputError):
        atom_report(2.0, 1, 7294.30)
    with pytest.raises(InputError):
        atom_report(0.0, 2, 7294.30)
    with pytest.raises(InputError):
        atom_report(2.0, 2, -5.0)
    with pytest.raises(InputError):
        atom_report(2.0, 2, 7294.30, method="exact")
    assert issubclass(NoBindingError, EnvTheoryError)


def test_all_repulsive_system_does_not_converge():
    system = NPlusOneSystem(2, 3, laws.kinetic_power(0.5, 2.0),
                            laws.kinetic_power(0.5, 2.0),
                            laws.power(1.0, -1.0), laws.power(1.0, -1.0))
    with pytest.raises(NonConvergenceError):
        solve_et_np1(system, 2.0, 1.5)


def test_solver_input_validation():
    system = _ho_split(2, 1.0, 1.0, 1.0, 1.0)
    with pytest.raises(InputError):
        solve_et_np1(system, 0.0, 1.0)
    with pytest.raises(InputError):
        solve_et_np1(system, 1.0, -2.0)
    with pytest.raises(InputError):
        dosm_np1(system, -1.0, 0.5)
    with pytest.raises(InputError):
        NPlusOneSystem(1, 3, laws.kinetic_power(0.5, 2.0),
                       laws.kinetic_power(0.5, 2.0),
                       laws.harmonic(1.0), laws.harmonic(1.0))


def test_iet_spec_validation():
    system = _ho_split(3, 1.0, 1.0, 1.0, 1.0)
    no_rel = QuantumSpec(D=3, internal_modes=((0, 0), (0, 0)))
    with pytest.raises(InputError):
        solve_iet_np1(system, no_rel)
    wrong_count = split_ground_spec(4, 3)
    with pytest.raises(InputError):
        solve_iet_np1(system, wrong_count)
    flat = QuantumSpec(D=2, internal_modes=((0, 0), (0, 1)), relative_mode=(0, 0))
    system_2d = _ho_split(3, 1.0, 1.0, 1.0, 1.0, D=2)
    with pytest.raises(DegenerateOrbitalError):
        solve_iet_np1(system_2d, flat)


def test_solution_is_deterministic():
    system = _ho_split(3, 0.5, 1.0, 2.0, 1.3)
    first = solve_et_np1(system, 2.5, 1.5)
    second = solve_et_np1(system, 2.5, 1.5)
    assert first == second
    assert list(e for e, _, _ in first.all_roots) == \
        sorted(e for e, _, _ in first.all_roots)


def test_phi_pair_matches_report():
    system = FD_SYSTEMS[2]
    report = dosm_np1(system, 1.5, 0.5)
    assert phi_pair(system, 1.5, 0.5) == (report.phi_a, report.phi_b)
