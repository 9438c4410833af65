"""Coherent states |l, phi> on the circle and their expectation calculus.

A phase-space point (l, phi) labels the state with coefficients

    c_j = exp(l*j - i*j*phi - j^2/2),      xi = exp(-l + i*phi),

which is an eigenvector of X = U e^(-J-1/2) with eigenvalue xi.  Every
overlap and expectation value reduces to Gaussian lattice sums

    S(w) = sum_m exp(w*m - m^2)

over the integer (boson) or half-integer (fermion) lattice, evaluated
in closed form by theta.gaussian_lattice_sum.  Alongside each exact
value this module exposes the standard closed-form approximation so
their deviation is measurable rather than assumed:

    <J>   ~ l -+ 2 pi e^(-pi^2) sin(2 pi l)     (boson -, fermion +)
    <U>   ~ e^(-1/4) e^(i phi)
    <e^(sJ)> ~ e^(s^2/4 + s l)
    U(t)  ~ e^(-t^2/4) e^(-1/4) e^(i(phi + t l))
    X(t)  ~ e^(-t^2/4) e^(-l) e^(i(phi + t(l - 1/2)))
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError, SingularityError, TruncationError
from .hilbert import Sector, StateVector, Truncation
from .theta import (
    DEFAULT_CONTROL,
    SeriesControl,
    ThetaArg,
    gaussian_lattice_sum,
    theta_log_derivative,
)

__all__ = [
    "PhasePoint",
    "FreeRotor",
    "Linear",
    "required_two_jmax",
    "coherent_state",
    "overlap_closed",
    "norm_sq",
    "expect_J",
    "approx_expect_J",
    "expect_U",
    "approx_expect_U",
    "relative_expect_U",
    "expect_expJ",
    "approx_expJ",
    "evolve",
    "heisenberg_expectations",
    "heisenberg_approximation",
    "uncertainty_QP",
    "energy_distribution",
    "gaussian_energy_profile",
]

# Amplitude of the sinusoidal deviation of <J> from l.
J_DEVIATION_AMPLITUDE = 2.0 * math.pi * math.exp(-math.pi * math.pi)

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class PhasePoint:
    """Cylinder coordinates (l, phi) with phi normalized into [0, 2*pi).

    xi and log(xi) = -l + i*phi are always derived from the stored
    pair, so half-integer powers xi^(-j) never hit a branch ambiguity.
    """

    l: float
    phi: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.l) and math.isfinite(self.phi)):
            raise DomainError("phase-space coordinates must be finite")
        object.__setattr__(self, "l", float(self.l))
        object.__setattr__(self, "phi", float(self.phi) % _TWO_PI)

    @property
    def xi(self) -> complex:
        return cmath.exp(complex(-self.l, self.phi))

    @property
    def log_xi(self) -> complex:
        return complex(-self.l, self.phi)


@dataclass(frozen=True)
class FreeRotor:
    """Hamiltonian J^2/2 (free motion on the circle)."""


@dataclass(frozen=True)
class Linear:
    """Hamiltonian omega*J (uniform rotation)."""

    omega: float


def _half(sector: Sector) -> bool:
    return sector is Sector.FERMION


def required_two_jmax(l: float, tol: float = 1e-12) -> int:
    """Smallest window bound 2*j_max keeping coherent-state tails < tol.

    |c_j| = e^(l*j - j^2/2) falls below tol once |j| exceeds
    |l| + sqrt(2 ln(1/tol)); two extra slots pad the edge-sentinel
    region that tail_mass() inspects.
    """
    j_max = abs(l) + math.sqrt(2.0 * math.log(1.0 / tol)) + 2.0
    return 2 * math.ceil(j_max)


def coherent_state(
    p: PhasePoint,
    sector: Sector,
    trunc: Truncation,
    window_tol: float = 1e-12,
) -> StateVector:
    """State with c_j = exp(l*j - i*j*phi - j^2/2) over the window.

    Normalization follows c_0 = 1 (the state is not unit-norm).  Raises
    TruncationError when the window cannot hold the Gaussian envelope
    down to window_tol.
    """
    needed = required_two_jmax(p.l, window_tol)
    if trunc.two_jmax < needed:
        raise TruncationError(
            f"two_jmax = {trunc.two_jmax} too small for l = {p.l}: "
            f"tails exceed {window_tol} (need two_jmax >= {needed})"
        )
    j = trunc.j_values(sector)
    coeffs = np.exp(j * complex(p.l, -p.phi) - 0.5 * j * j)
    return StateVector(sector, trunc, coeffs)


def overlap_closed(
    p1: PhasePoint, p2: PhasePoint, sector: Sector, ctl: SeriesControl = DEFAULT_CONTROL
) -> complex:
    """<xi_1|xi_2> = S(w) with w = log(conj(xi_1)*xi_2), lattice per sector.

    Equivalently theta_3 (boson) or theta_2 (fermion) at argument
    (i/2pi)*w with modulus i/pi; w is assembled from the stored (l, phi)
    pairs, never from a recomputed complex logarithm.
    """
    w = complex(-(p1.l + p2.l), p2.phi - p1.phi)
    return complex(gaussian_lattice_sum(w, half=_half(sector), ctl=ctl))


def norm_sq(p: PhasePoint, sector: Sector, ctl: SeriesControl = DEFAULT_CONTROL) -> float:
    """<xi|xi> = S(2l); positive, independent of phi."""
    return complex(gaussian_lattice_sum(2.0 * p.l, half=_half(sector), ctl=ctl)).real


def expect_J(p: PhasePoint, sector: Sector, ctl: SeriesControl = DEFAULT_CONTROL) -> float:
    """<J> = l + (1/2) (d/dv) ln theta_{3|4}(v|i*pi) at v = l.

    Exactly l when 2l is an even (boson) or odd (fermion) integer.
    """
    kind = 3 if sector is Sector.BOSON else 4
    derivative = theta_log_derivative(kind, ThetaArg(p.l, 1j * math.pi), ctl)
    return p.l + 0.5 * derivative.real


def approx_expect_J(l: float, sector: Sector) -> float:
    """l -+ 2 pi e^(-pi^2) sin(2 pi l): boson minus, fermion plus."""
    sign = -1.0 if sector is Sector.BOSON else 1.0
    return l + sign * J_DEVIATION_AMPLITUDE * math.sin(_TWO_PI * l)


def expect_U(p: PhasePoint, sector: Sector, ctl: SeriesControl = DEFAULT_CONTROL) -> complex:
    """<U> = e^(-1/4) e^(i phi) S_opp(2l)/S(2l).

    S_opp runs over the opposite lattice (half-integers for bosons and
    vice versa); the ratio is a positive theta quotient, so the phase
    of <U> is exactly phi.
    """
    num = complex(gaussian_lattice_sum(2.0 * p.l, half=not _half(sector), ctl=ctl)).real
    den = complex(gaussian_lattice_sum(2.0 * p.l, half=_half(sector), ctl=ctl)).real
    return math.exp(-0.25) * (num / den) * cmath.exp(1j * p.phi)


def approx_expect_U(p: PhasePoint) -> complex:
    """e^(-1/4) e^(i phi), the flat-modulus approximation of <U>."""
    return cmath.exp(complex(-0.25, p.phi))


def relative_expect_U(
    p: PhasePoint, ref: PhasePoint, sector: Sector, ctl: SeriesControl = DEFAULT_CONTROL
) -> complex:
    """expect_U(p)/expect_U(ref); with ref = (0, 0) approximately e^(i phi)."""
    reference = expect_U(ref, sector, ctl)
    if abs(reference) < 1e-12:
        raise SingularityError("reference expectation of U is too close to zero")
    return expect_U(p, sector, ctl) / reference


def expect_expJ(
    s: float, p: PhasePoint, sector: Sector, ctl: SeriesControl = DEFAULT_CONTROL
) -> tuple[float, float]:
    """(exact, approx) for <e^(sJ)> = S(2l+s)/S(2l) vs e^(s^2/4 + s*l).

    The case s = -2 is exact in closed form: e^(1-2l), which is
    <Xdag X>/<xi|xi> times e.
    """
    half = _half(sector)
    exact = (
        complex(gaussian_lattice_sum(2.0 * p.l + s, half=half, ctl=ctl)).real
        / complex(gaussian_lattice_sum(2.0 * p.l, half=half, ctl=ctl)).real
    )
    return exact, approx_expJ(s, p.l)


def approx_expJ(s: float, l: float) -> float:
    return math.exp(0.25 * s * s + s * l)


def evolve(state: StateVector, hamiltonian, t: float) -> StateVector:
    """Schroedinger evolution e^(-iHt) for H = J^2/2 or H = omega*J.

    Pure phases per basis slot: every |c_j| and hence the norm is
    preserved exactly; leakage is carried through unchanged.
    """
    j = state.j_values()
    if isinstance(hamiltonian, FreeRotor):
        phases = np.exp(-0.5j * t * j * j)
    elif isinstance(hamiltonian, Linear):
        phases = np.exp(-1j * t * hamiltonian.omega * j)
    else:
        raise DomainError(f"unsupported hamiltonian {hamiltonian!r}")
    return replace(state, coeffs=state.coeffs * phases)


def heisenberg_expectations(
    p: PhasePoint, t: float, sector: Sector, ctl: SeriesControl = DEFAULT_CONTROL
) -> dict[str, complex]:
    """Exact <U(t)> and <X(t)> under free motion, normalized by <xi|xi>.

    With U(t) = U e^(it(J+1/2)) and X(t) = e^(it(J-1/2)) X, the series
    collapse to lattice-sum ratios at shifted argument w = 2l + it:

        <U(t)> = e^(-1/4) e^(i phi) S_opp(w) / S(2l)
        <X(t)> = xi e^(-it/2) S(w) / S(2l)
    """
    half = _half(sector)
    w = complex(2.0 * p.l, t)
    den = complex(gaussian_lattice_sum(2.0 * p.l, half=half, ctl=ctl)).real
    num_u = complex(gaussian_lattice_sum(w, half=not half, ctl=ctl))
    num_x = complex(gaussian_lattice_sum(w, half=half, ctl=ctl))
    u_t = math.exp(-0.25) * cmath.exp(1j * p.phi) * num_u / den
    x_t = p.xi * cmath.exp(-0.5j * t) * num_x / den
    return {"U_t": u_t, "X_t": x_t}


def heisenberg_approximation(p: PhasePoint, t: float) -> dict[str, complex]:
    """Gaussian-envelope approximations of <U(t)> and <X(t)>."""
    damp = -0.25 * t * t
    u_t = cmath.exp(complex(damp - 0.25, p.phi + t * p.l))
    x_t = cmath.exp(complex(damp - p.l, p.phi + t * (p.l - 0.5)))
    return {"U_t": u_t, "X_t": x_t}


def uncertainty_QP(p: PhasePoint, sector: Sector) -> dict[str, float]:
    """Spreads of Q = (X + Xdag)/2 and P = (X - Xdag)/2i, plus the bound.

    Both spreads equal (1/2) e^(-l) sqrt(e^2 - 1); the commutator bound
    (1/2)|<[Q,P]>|/<xi|xi> equals (1/4)(e^2 - 1) e^(-2l), so the
    product Delta Q * Delta P sits exactly on the bound --- for every
    (l, phi) and in both sectors.
    """
    spread = 0.5 * math.exp(-p.l) * math.sqrt(math.exp(2.0) - 1.0)
    bound = 0.25 * (math.exp(2.0) - 1.0) * math.exp(-2.0 * p.l)
    return {"dQ": spread, "dP": spread, "bound": bound}


def energy_distribution(
    p: PhasePoint,
    sector: Sector,
    jmax: float = 12,
    allow_fermion: bool = False,
    ctl: SeriesControl = DEFAULT_CONTROL,
) -> list[tuple[float, float]]:
    """Occupation probabilities prob(j) = e^(2lj - j^2)/S(2l), |j| <= jmax.

    Defined for the boson sector; pass allow_fermion=True to evaluate
    the same formula on the half-integer lattice.  The returned
    probabilities sum to 1 up to the mass beyond |j| > jmax.
    """
    if sector is Sector.FERMION and not allow_fermion:
        raise DomainError("energy_distribution defaults to bosons; pass allow_fermion=True")
    if jmax < 1:
        raise DomainError("jmax must be at least 1")
    norm = complex(gaussian_lattice_sum(2.0 * p.l, half=_half(sector), ctl=ctl)).real
    trunc = Truncation(max(2, int(math.floor(2.0 * jmax))))
    j = trunc.j_values(sector)
    probs = np.exp(2.0 * p.l * j - j * j) / norm
    return [(float(jv), float(pv)) for jv, pv in zip(j, probs)]


def gaussian_energy_profile(j: float, l: float) -> float:
    """Continuous companion pi^(-1/2) e^(-(j-l)^2) of the distribution."""
    return math.exp(-((j - l) ** 2)) / math.sqrt(math.pi)
