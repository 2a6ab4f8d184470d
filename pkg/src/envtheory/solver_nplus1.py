"""Solver for N_a identical particles plus one distinct particle.

The compact set has five equations for the block momentum p_a, the mean
block distance r_aa, and the relative pair (P0, R0), with the derived
combinations

    p_a'^2 = p_a^2 + P0^2/N_a^2,
    r_0'^2 = R0^2 + (N_a-1)/(2 N_a) r_aa^2:

    E = N_a T_a(p_a') + T_b(P0) + C2 V_aa(r_aa) + N_a V_ab(r_0'),
    N_a T_a'(p_a') p_a^2/p_a' = C2 V_aa'(r_aa) r_aa
                                + (N_a-1)/2 V_ab'(r_0') r_aa^2/r_0',
    T_a'(p_a') P0^2/(N_a p_a') + T_b'(P0) P0 = N_a V_ab'(r_0') R0^2/r_0',
    Q_a = sqrt(C2) p_a r_aa,
    Q_b = P0 R0.

The two quantization conditions eliminate p_a and P0; the two equations of
motion are solved for (r_aa, R0) by a damped Newton iteration in log
coordinates.  The improved variant quantizes the two coupled radial modes
around the purely orbital solution and deforms both quantum numbers.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from . import laws
from .coupled_osc import OscPair, normal_modes
from .errors import (DegenerateOrbitalError, EnvTheoryError, InputError,
                     NoBindingError, NonConvergenceError, UnstableOrbitalError)
from .qnum import QuantumSpec, fgs_fill, spec_from_filling
from .rootscan import find_roots
from .solver_identical import IdenticalSystem, pair_count, solve_et

__all__ = [
    "NPlusOneSystem",
    "Np1Solution",
    "DosmNp1Report",
    "AtomResult",
    "solve_et_np1",
    "dosm_np1",
    "phi_pair",
    "solve_iet_np1",
    "solve_atom",
    "atom_report",
    "ATOMIC_UNIT_EV",
]

NEWTON_TOL = 1e-11
NEWTON_MAX_STEPS = 200
NEWTON_MAX_HALVINGS = 30
NEWTON_FD_STEP = 1e-6

# Energy unit of the atomic Hamiltonian expressed in eV (twice the Rydberg).
ATOMIC_UNIT_EV = 27.21


@dataclass(frozen=True)
class NPlusOneSystem:
    """N_a identical particles (laws T_a, V_aa) plus one distinct particle.

    T_b is the distinct particle's kinetic law and V_ab its interaction with
    each block particle.  The pure 1+1 case is a two-body problem outside
    this solver's scope.
    """

    N_a: int
    D: int
    kinetic_a: laws.Law
    kinetic_b: laws.Law
    potential_aa: laws.Law
    potential_ab: laws.Law

    def __post_init__(self) -> None:
        if self.N_a < 2:
            raise InputError("need N_a >= 2")
        if self.D < 2:
            raise InputError("need D >= 2")


@dataclass(frozen=True)
class Np1Solution:
    """Converged solution of the five-equation set."""

    energy: float
    p_a: float
    r_aa: float
    P0: float
    R0: float
    p_a_prime: float
    r_0_prime: float
    q_a: float
    q_b: float
    residual_a: float
    residual_b: float
    iterations: int
    n_roots: int
    all_roots: tuple[tuple[float, float, float], ...]
    phi_a: float | None = None
    phi_b: float | None = None


@dataclass(frozen=True)
class DosmNp1Report:
    """Coupled radial-oscillation analysis around the orbital solution.

    (mu_a, k_a) belong to the block radial mode, (mu_b, k_b) to the relative
    one, k_c couples them.  (A, B, mu) are the normal-mode constants; D_a and
    D_b are the first-order responses of the energy to an increase of the
    respective quantum numbers, and (phi_a, phi_b) the deformations obtained
    by matching the two spectra.
    """

    energy_orbital: float
    p_a: float
    r_aa: float
    P0: float
    R0: float
    p_a_prime: float
    r_0_prime: float
    lam_a: float
    lam_b: float
    mu_a: float
    mu_b: float
    k_a: float
    k_b: float
    k_c: float
    A: float
    B: float
    mu: float
    D_a: float
    D_b: float
    phi_a: float
    phi_b: float
    n_pairs: float

    def level(self, nu_a: float, nu_b: float) -> float:
        """Energy with radial aggregates (nu_a, nu_b) on top of the orbital motion."""
        return (self.energy_orbital
                + math.sqrt(self.A / (self.n_pairs * self.mu)) * nu_a
                + math.sqrt(self.B / self.mu) * nu_b)


def _geometry(system: NPlusOneSystem, q_a: float, q_b: float,
              r_aa: float, R0: float) -> tuple[float, float, float, float]:
    """(p_a, P0, p_a', r_0') implied by (r_aa, R0) and the quantization conditions."""
    N_a = system.N_a
    p_a = q_a / (math.sqrt(pair_count(N_a)) * r_aa)
    P0 = q_b / R0
    p_a_prime = math.sqrt(p_a ** 2 + P0 ** 2 / N_a ** 2)
    r_0_prime = math.sqrt(R0 ** 2 + 0.5 * (N_a - 1) / N_a * r_aa ** 2)
    return p_a, P0, p_a_prime, r_0_prime


def _energy(system: NPlusOneSystem, q_a: float, q_b: float,
            r_aa: float, R0: float) -> float:
    N_a = system.N_a
    p_a, P0, pap, r0p = _geometry(system, q_a, q_b, r_aa, R0)
    return (N_a * system.kinetic_a.value(pap) + system.kinetic_b.value(P0)
            + pair_count(N_a) * system.potential_aa.value(r_aa)
            + N_a * system.potential_ab.value(r0p))


def _residuals(system: NPlusOneSystem, q_a: float, q_b: float,
               r_aa: float, R0: float) -> np.ndarray:
    """Scaled equations of motion; each entry is (lhs-rhs)/max(|lhs|,|rhs|)."""
    N_a = system.N_a
    c2 = pair_count(N_a)
    p_a, P0, pap, r0p = _geometry(system, q_a, q_b, r_aa, R0)
    ta1 = system.kinetic_a.d1(pap)
    lhs1 = N_a * ta1 * p_a ** 2 / pap
    rhs1 = (c2 * system.potential_aa.d1(r_aa) * r_aa
            + 0.5 * (N_a - 1) * system.potential_ab.d1(r0p) * r_aa ** 2 / r0p)
    lhs2 = ta1 * P0 ** 2 / (N_a * pap) + system.kinetic_b.d1(P0) * P0
    rhs2 = N_a * system.potential_ab.d1(r0p) * R0 ** 2 / r0p
    s1 = max(abs(lhs1), abs(rhs1), 1e-300)
    s2 = max(abs(lhs2), abs(rhs2), 1e-300)
    return np.array([(lhs1 - rhs1) / s1, (lhs2 - rhs2) / s2])


def _newton(system: NPlusOneSystem, q_a: float, q_b: float,
            r_aa0: float, R00: float) -> tuple[float, float, int, np.ndarray]:
    """Damped Newton on the log of the coordinates, which keeps them positive."""
    u = np.array([math.log(r_aa0), math.log(R00)])

    def f_of(v: np.ndarray) -> np.ndarray:
        # Trial points far from the root may overflow; the line search
        # rejects the resulting non-finite residuals, so silence numpy here.
        with np.errstate(all="ignore"):
            return _residuals(system, q_a, q_b, math.exp(v[0]), math.exp(v[1]))

    f = f_of(u)
    iterations = 0
    for iterations in range(1, NEWTON_MAX_STEPS + 1):
        if np.max(np.abs(f)) < NEWTON_TOL:
            break
        jac = np.zeros((2, 2))
        for j in range(2):
            up, um = u.copy(), u.copy()
            up[j] += NEWTON_FD_STEP
            um[j] -= NEWTON_FD_STEP
            jac[:, j] = (f_of(up) - f_of(um)) / (2.0 * NEWTON_FD_STEP)
        try:
            du = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError as exc:
            raise NonConvergenceError("singular Jacobian", tuple(np.exp(u)),
                                      tuple(f)) from exc
        step = 1.0
        for _ in range(NEWTON_MAX_HALVINGS):
            u_new = u + step * du
            f_new = f_of(u_new)
            if np.linalg.norm(f_new) < np.linalg.norm(f):
                break
            step *= 0.5
        else:
            raise NonConvergenceError("no descent direction", tuple(np.exp(u)),
                                      tuple(f))
        u, f = u_new, f_new
    else:
        raise NonConvergenceError(
            f"Newton did not converge in {NEWTON_MAX_STEPS} steps",
            tuple(np.exp(u)), tuple(f))
    return math.exp(u[0]), math.exp(u[1]), iterations, f


def _initial_guess(system: NPlusOneSystem, q_a: float, q_b: float) -> tuple[float, float]:
    """Starting point from two decoupled sub-problems.

    r_aa comes from the identical block alone; when the block potential
    alone supports no orbit (a repulsive V_aa), the cross potential is
    substituted, and failing that a unit length is used.  R0 comes from a
    two-body reduction of the relative motion against N_a copies of the
    cross potential; the block-recoil kinetic term is kept because it
    dominates when the distinct particle is much heavier than the block.
    """
    N_a = system.N_a
    try:
        block = IdenticalSystem(N_a, system.D, system.kinetic_a, system.potential_aa)
        r_aa0 = solve_et(block, q_a).rho0
    except EnvTheoryError:
        try:
            block = IdenticalSystem(N_a, system.D, system.kinetic_a, system.potential_ab)
            r_aa0 = solve_et(block, q_a).rho0
        except EnvTheoryError:
            r_aa0 = 1.0
    p_a0 = q_a / (math.sqrt(pair_count(N_a)) * r_aa0)

    def two_body(R0: float) -> float:
        P0 = q_b / R0
        return (system.kinetic_a.d1(p_a0) * P0 ** 2 / (N_a * p_a0)
                + system.kinetic_b.d1(P0) * P0
                - N_a * system.potential_ab.d1(R0) * R0)

    try:
        R00 = min(find_roots(two_body, 1e-8, 1e8, panels=400))
    except EnvTheoryError:
        R00 = r_aa0
    return r_aa0, R00


def solve_et_np1(system: NPlusOneSystem, q_a: float, q_b: float) -> Np1Solution:
    """Solve the five-equation set at global quantum numbers (q_a, q_b).

    Mixed attractive/repulsive potentials can produce several Newton basins,
    so the iteration is retried from perturbed starting points (each
    coordinate scaled by 1/10 and 10); all converged roots are collected and
    the lowest-energy one is returned.
    """
    if q_a <= 0.0 or q_b <= 0.0:
        raise InputError("q_a and q_b must be positive")
    r_aa0, R00 = _initial_guess(system, q_a, q_b)
    roots: list[tuple[float, float, float, int, np.ndarray]] = []
    failure: NonConvergenceError | None = None
    for scale_r in (1.0, 0.1, 10.0):
        for scale_R in (1.0, 0.1, 10.0):
            try:
                r_aa, R0, iters, res = _newton(system, q_a, q_b,
                                               r_aa0 * scale_r, R00 * scale_R)
            except (NonConvergenceError, OverflowError, ValueError,
                    ZeroDivisionError) as exc:
                if isinstance(exc, NonConvergenceError):
                    failure = exc
                continue
            if any(abs(r_aa - r) / r < 1e-8 and abs(R0 - R) / R < 1e-8
                   for _, r, R, _, _ in roots):
                continue
            energy = _energy(system, q_a, q_b, r_aa, R0)
            roots.append((energy, r_aa, R0, iters, res))
    if not roots:
        if failure is not None:
            raise failure
        raise NonConvergenceError("no starting point converged")
    roots.sort(key=lambda t: t[0])
    energy, r_aa, R0, iters, res = roots[0]
    p_a, P0, pap, r0p = _geometry(system, q_a, q_b, r_aa, R0)
    return Np1Solution(energy=energy, p_a=p_a, r_aa=r_aa, P0=P0, R0=R0,
                       p_a_prime=pap, r_0_prime=r0p, q_a=q_a, q_b=q_b,
                       residual_a=abs(res[0]), residual_b=abs(res[1]),
                       iterations=iters, n_roots=len(roots),
                       all_roots=tuple((e, r, R) for e, r, R, _, _ in roots))


def dosm_np1(system: NPlusOneSystem, lam_a: float, lam_b: float) -> DosmNp1Report:
    """Quantize the two coupled radial modes around the orbital solution.

    The orbital solution is the five-equation set solved with the quantum
    numbers replaced by (lam_a, lam_b).  Expanding the energy to second
    order in the two radial displacements gives a coupled quadratic form
    whose coefficients follow from the law derivatives at the orbital point;
    its normal modes and the first-order responses (D_a, D_b) fix the two
    deformation parameters.
    """
    if lam_a <= 0.0 or lam_b <= 0.0:
        raise InputError("lam_a and lam_b must be positive")
    N_a = system.N_a
    c2 = pair_count(N_a)
    orbital = solve_et_np1(system, lam_a, lam_b)
    r_aa, R0 = orbital.r_aa, orbital.R0
    p_a, P0, pap, r0p = orbital.p_a, orbital.P0, orbital.p_a_prime, orbital.r_0_prime
    ta1, ta2 = system.kinetic_a.d1(pap), system.kinetic_a.d2(pap)
    tb1, tb2 = system.kinetic_b.d1(P0), system.kinetic_b.d2(P0)
    vab1, vab2 = system.potential_ab.d1(r0p), system.potential_ab.d2(r0p)

    mu_a = pap / (N_a * ta1)
    mu_b = 1.0 / (ta1 / (N_a * pap) + tb1 / P0)
    k_a = (N_a * ta2 * p_a ** 4 / (r_aa ** 2 * pap ** 2)
           + N_a * ta1 * p_a ** 2 / r_aa ** 2 * (3.0 / pap - p_a ** 2 / pap ** 3)
           + c2 * system.potential_aa.d2(r_aa)
           + (N_a - 1) ** 2 * r_aa ** 2 / (4.0 * N_a * r0p ** 2) * vab2
           + 0.5 * (N_a - 1) * (1.0 / r0p - (N_a - 1) * r_aa ** 2 / (2.0 * N_a * r0p ** 3)) * vab1)
    k_b = (ta2 * P0 ** 4 / (N_a ** 3 * R0 ** 2 * pap ** 2)
           + tb2 * P0 ** 2 / R0 ** 2
           + ta1 * P0 ** 2 / (N_a * R0 ** 2) * (3.0 / pap - P0 ** 2 / (N_a ** 2 * pap ** 3))
           + 2.0 * tb1 * P0 / R0 ** 2
           + N_a * R0 ** 2 / r0p ** 2 * vab2
           + N_a * (1.0 / r0p - R0 ** 2 / r0p ** 3) * vab1)
    k_c = (2.0 * p_a ** 2 * P0 ** 2 / (N_a * pap ** 2 * r_aa * R0) * (ta2 - ta1 / pap)
           + (N_a - 1) * r_aa * R0 / r0p ** 2 * (vab2 - vab1 / r0p))

    A, B, mu = normal_modes(OscPair(mu_a, mu_b, k_a, k_b, k_c))
    if A <= 0.0 or B <= 0.0:
        raise UnstableOrbitalError(
            f"unstable radial quadratic form (A={A}, B={B})")
    D_a = ta1 * N_a * p_a ** 2 / pap
    D_b = ta1 * P0 ** 2 / (N_a * pap) + tb1 * P0
    phi_a = lam_a / D_a * math.sqrt(A / (c2 * mu))
    phi_b = lam_b / D_b * math.sqrt(B / mu)
    return DosmNp1Report(energy_orbital=orbital.energy, p_a=p_a, r_aa=r_aa,
                         P0=P0, R0=R0, p_a_prime=pap, r_0_prime=r0p,
                         lam_a=lam_a, lam_b=lam_b, mu_a=mu_a, mu_b=mu_b,
                         k_a=k_a, k_b=k_b, k_c=k_c, A=A, B=B, mu=mu,
                         D_a=D_a, D_b=D_b, phi_a=phi_a, phi_b=phi_b, n_pairs=c2)


def phi_pair(system: NPlusOneSystem, lam_a: float, lam_b: float) -> tuple[float, float]:
    """Deformation parameters (phi_a, phi_b) at orbital aggregates (lam_a, lam_b)."""
    report = dosm_np1(system, lam_a, lam_b)
    return report.phi_a, report.phi_b


def solve_iet_np1(system: NPlusOneSystem, spec: QuantumSpec) -> Np1Solution:
    """Improved solve: deform both quantum numbers and re-solve.

    The spec's aggregates (nu_a, lam_a) and (nu_b, lam_b) fix the pair
    (phi_a, phi_b); the five-equation set is then solved at
    Q_a = phi_a*nu_a + lam_a and Q_b = phi_b*nu_b + lam_b.
    """
    if spec.relative_mode is None:
        raise InputError("split systems need a relative mode in the spec")
    if len(spec.internal_modes) != system.N_a - 1:
        raise InputError(f"spec has {len(spec.internal_modes)} internal modes, "
                         f"expected {system.N_a - 1}")
    nu_a, lam_a = spec.nu, spec.lam
    nu_b, lam_b = spec.nu_b, spec.lam_b
    if lam_a == 0.0 or lam_b == 0.0:
        raise DegenerateOrbitalError("a vanishing orbital aggregate degenerates "
                                     "the orbital-only set")
    phi_a, phi_b = phi_pair(system, lam_a, lam_b)
    solution = solve_et_np1(system, phi_a * nu_a + lam_a, phi_b * nu_b + lam_b)
    return replace(solution, phi_a=phi_a, phi_b=phi_b)


@dataclass(frozen=True)
class AtomResult:
    """Atom pipeline outcome: binding energy plus the quantities behind it."""

    binding_ev: float
    energy: float
    method: str
    Z: float
    n_electrons: int
    nucleus_mass: float
    filling_levels: tuple[tuple[int, int, int], ...]
    nu_a: float
    lam_a: float
    phi_a: float | None
    phi_b: float | None
    solution: Np1Solution


def _atom_system(Z: float, n_electrons: int, nucleus_mass: float) -> NPlusOneSystem:
    # Electron-electron repulsion +1/r is a plain signed monomial; the sign
    # convention of potential_power cannot produce a repulsive negative power.
    return NPlusOneSystem(
        N_a=n_electrons, D=3,
        kinetic_a=laws.kinetic_power(0.5, 2.0),
        kinetic_b=laws.kinetic_power(0.5 / nucleus_mass, 2.0),
        potential_aa=laws.power(1.0, -1.0),
        potential_ab=laws.coulomb(Z),
    )


def _iet_filling(system: NPlusOneSystem, n_electrons: int):
    """Fixed point of the filling <-> phi_a circularity.

    The order of the single-particle levels depends on phi_a, while phi_a
    depends on the orbital aggregate lam_a of the filling.  Start at phi = 2,
    refill at the computed phi_a and repeat; identical consecutive fillings
    are a fixed point.  A two-cycle is resolved by the lower improved energy.
    """
    filling = fgs_fill(n_electrons, 3, 2, 2.0)
    seen = [filling]
    for _ in range(20):
        spec = spec_from_filling(filling)
        phi_a, _ = phi_pair(system, spec.lam, spec.lam_b)
        refilled = fgs_fill(n_electrons, 3, 2, phi_a)
        if refilled.levels == filling.levels:
            return filling
        if len(seen) >= 2 and refilled.levels == seen[-2].levels:
            first, second = seen[-2], filling
            e_first = solve_iet_np1(system, spec_from_filling(first)).energy
            e_second = solve_iet_np1(system, spec_from_filling(second)).energy
            warnings.warn("filling iteration entered a two-cycle; "
                          "keeping the lower-energy filling")
            return first if e_first <= e_second else second
        filling = refilled
        seen.append(filling)
    raise NonConvergenceError("filling iteration did not reach a fixed point")


def atom_report(Z: float, n_electrons: int, nucleus_mass: float,
                method: str = "et") -> AtomResult:
    """Full atom pipeline: Coulomb system, electron filling, solve, convert.

    The electrons are the identical block (degeneracy 2 from spin), the
    nucleus the distinct particle.  The eigenvalue is converted to a binding
    energy in eV, reported positive.
    """
    if n_electrons < 2:
        raise InputError("need at least two electrons")
    if Z <= 0.0 or nucleus_mass <= 0.0:
        raise InputError("need Z > 0 and nucleus_mass > 0")
    method = method.lower()
    if method not in ("et", "iet"):
        raise InputError("method must be 'et' or 'iet'")
    system = _atom_system(Z, n_electrons, nucleus_mass)
    if method == "et":
        filling = fgs_fill(n_electrons, 3, 2, 2.0)
        spec = spec_from_filling(filling)
        solution = solve_et_np1(system, 2.0 * spec.nu + spec.lam,
                                2.0 * spec.nu_b + spec.lam_b)
    else:
        filling = _iet_filling(system, n_electrons)
        spec = spec_from_filling(filling)
        solution = solve_iet_np1(system, spec)
    if solution.energy >= 0.0:
        raise NoBindingError(f"no bound solution (E = {solution.energy})")
    return AtomResult(binding_ev=-solution.energy * ATOMIC_UNIT_EV,
                      energy=solution.energy, method=method, Z=Z,
                      n_electrons=n_electrons, nucleus_mass=nucleus_mass,
                      filling_levels=filling.levels, nu_a=spec.nu, lam_a=spec.lam,
                      phi_a=solution.phi_a, phi_b=solution.phi_b,
                      solution=solution)


def solve_atom(Z: float, n_electrons: int, nucleus_mass: float,
               method: str = "et") -> float:
    """Ground-state binding energy in eV (positive); see atom_report."""
    return atom_report(Z, n_electrons, nucleus_mass, method).binding_ev
