"""Finite-window angular-momentum basis and the operators acting on it.

States live on a symmetric window of the basis {|j>} with j integer
(boson sector) or half-integer (fermion sector).  Indices are stored as
2j so both sectors share one integer code path.  The operators

    J |j> = j |j>
    U |j> = |j+1>            Udag |j> = |j-1>
    X |j> = e^(-j-1/2)|j+1>  Xdag |j> = e^(-j+1/2)|j-1>
    N |j> = (-j + N_CONST)|j>,   N_CONST = ln(2 sinh 1)/2
    T (antiunitary):  c_j -> conj(c_{-j})

satisfy [J,U] = U, X = U e^(-J-1/2), X Xdag = e^2 Xdag X and
[X, Xdag] = 2 sinh(1) e^(-2J) on the interior of the window.  Shifts
drop amplitude off the window edges; the dropped magnitude accumulates
in StateVector.leakage so truncation artifacts stay auditable.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, replace
from typing import Iterable

import numpy as np

from .errors import DomainError, ParityError, RangeOverflowError, WindowError

__all__ = [
    "Sector",
    "Truncation",
    "StateVector",
    "N_CONST",
    "OPERATOR_KINDS",
    "basis_state",
    "make_state",
    "apply_operator",
    "apply_exp_j",
    "apply_time_reversal",
    "inner",
    "operator_matrix",
    "state_to_json",
    "state_from_json",
]

# Constant in N = -J + N_CONST, fixed by [X, Xdag] = e^(2 N_CONST) e^(-2J).
N_CONST = 0.5 * math.log(2.0 * math.sinh(1.0))

OPERATOR_KINDS = ("J", "U", "Udag", "X", "Xdag", "N")

_EXP_LIMIT = 700.0


class Sector(enum.Enum):
    """Boson (j integer) or fermion (j half-integer) representation."""

    BOSON = "boson"
    FERMION = "fermion"

    @property
    def parity(self) -> int:
        """Residue of 2j mod 2 for this sector."""
        return 0 if self is Sector.BOSON else 1

    @property
    def j0(self) -> float:
        """Smallest nonnegative j in the sector (0 or 1/2)."""
        return 0.0 if self is Sector.BOSON else 0.5

    @classmethod
    def from_name(cls, name: str) -> "Sector":
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise DomainError(f"unknown sector {name!r}; expected 'boson' or 'fermion'") from None


@dataclass(frozen=True)
class Truncation:
    """Symmetric window |2j| <= two_jmax (indices keep the sector parity)."""

    two_jmax: int

    def __post_init__(self) -> None:
        if not isinstance(self.two_jmax, int) or self.two_jmax < 2:
            raise DomainError(f"two_jmax must be an integer >= 2, got {self.two_jmax!r}")

    def two_j_values(self, sector: Sector) -> np.ndarray:
        start = -self.two_jmax + ((self.two_jmax + sector.parity) % 2)
        return np.arange(start, self.two_jmax + 1, 2)

    def j_values(self, sector: Sector) -> np.ndarray:
        return self.two_j_values(sector) / 2.0

    def size(self, sector: Sector) -> int:
        return len(self.two_j_values(sector))

    def index_of(self, sector: Sector, two_j: int) -> int:
        values = self.two_j_values(sector)
        if two_j % 2 != sector.parity:
            raise ParityError(f"2j = {two_j} does not match the {sector.value} sector")
        if two_j < values[0] or two_j > values[-1]:
            raise WindowError(f"2j = {two_j} outside window |2j| <= {self.two_jmax}")
        return int((two_j - values[0]) // 2)


@dataclass(frozen=True)
class StateVector:
    """Immutable coefficient vector c_j over a sector window.

    leakage accumulates the magnitude (sum of |c_j|) dropped off the
    window by shift operators applied anywhere in the state's history.
    """

    sector: Sector
    trunc: Truncation
    coeffs: np.ndarray
    leakage: float = 0.0

    def __post_init__(self) -> None:
        coeffs = np.asarray(self.coeffs, dtype=np.complex128)
        if coeffs.ndim != 1 or len(coeffs) != self.trunc.size(self.sector):
            raise DomainError(
                f"expected {self.trunc.size(self.sector)} coefficients, got shape {coeffs.shape}"
            )
        if not np.all(np.isfinite(coeffs)):
            raise DomainError("state coefficients must be finite")
        coeffs = coeffs.copy()
        coeffs.flags.writeable = False
        object.__setattr__(self, "coeffs", coeffs)

    def two_j_values(self) -> np.ndarray:
        return self.trunc.two_j_values(self.sector)

    def j_values(self) -> np.ndarray:
        return self.trunc.j_values(self.sector)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def tail_mass(self) -> float:
        """Largest |c_j| among the outermost two slots on each side."""
        c = np.abs(self.coeffs)
        edge = min(2, len(c))
        return float(max(c[:edge].max(), c[-edge:].max()))


def make_state(sector: Sector, trunc: Truncation, coeffs: Iterable[complex],
               leakage: float = 0.0) -> StateVector:
    return StateVector(sector, trunc, np.asarray(list(coeffs)), leakage)


def basis_state(sector: Sector, j: float, trunc: Truncation) -> StateVector:
    """Unit vector |j>.  Raises if 2j is off-parity or outside the window."""
    two_j = int(round(2.0 * j))
    if abs(2.0 * j - two_j) > 1e-12:
        raise ParityError(f"j = {j} is not a half-integer")
    idx = trunc.index_of(sector, two_j)
    coeffs = np.zeros(trunc.size(sector), dtype=np.complex128)
    coeffs[idx] = 1.0
    return StateVector(sector, trunc, coeffs)


def _guard_factors(coeffs: np.ndarray, log_factors: np.ndarray, kind: str) -> np.ndarray:
    """exp(log_factors)*coeffs with an explicit range check in log space."""
    occupied = np.abs(coeffs) > 0.0
    if np.any(occupied):
        worst = np.max(np.log(np.abs(coeffs[occupied])) + log_factors[occupied].real)
        if worst > _EXP_LIMIT:
            raise RangeOverflowError(
                f"{kind} produces a coefficient of magnitude exp({worst:.3g}), "
                "outside the floating-point range"
            )
    return coeffs * np.exp(log_factors)


def _shift_up(coeffs: np.ndarray) -> tuple[np.ndarray, float]:
    out = np.zeros_like(coeffs)
    out[1:] = coeffs[:-1]
    return out, float(abs(coeffs[-1]))


def _shift_down(coeffs: np.ndarray) -> tuple[np.ndarray, float]:
    out = np.zeros_like(coeffs)
    out[:-1] = coeffs[1:]
    return out, float(abs(coeffs[0]))


def apply_operator(kind: str, s: StateVector) -> StateVector:
    """Apply one of J, U, Udag, X, Xdag, N to the state.

    Shift operators (U, Udag, X, Xdag) drop the coefficient pushed past
    the window edge and add its magnitude to the returned state's
    leakage.  X and Xdag check their exponential factors in log space
    and raise RangeOverflowError instead of overflowing.
    """
    if kind not in OPERATOR_KINDS:
        raise DomainError(f"unknown operator kind {kind!r}; expected one of {OPERATOR_KINDS}")
    j = s.j_values()
    c = s.coeffs
    dropped = 0.0
    if kind == "J":
        out = c * j
    elif kind == "N":
        out = c * (-j + N_CONST)
    elif kind == "U":
        out, dropped = _shift_up(c)
    elif kind == "Udag":
        out, dropped = _shift_down(c)
    elif kind == "X":
        scaled = _guard_factors(c, -j - 0.5, "X")
        out, dropped_amp = _shift_up(scaled)
        dropped = dropped_amp
    else:  # Xdag
        scaled = _guard_factors(c, -j + 0.5, "Xdag")
        out, dropped_amp = _shift_down(scaled)
        dropped = dropped_amp
    return StateVector(s.sector, s.trunc, out, s.leakage + dropped)


def apply_exp_j(s: StateVector, eta: complex) -> StateVector:
    """Apply e^(eta*J): c_j -> e^(eta*j) c_j.  eta may be complex.

    Acting on a coherent state at (l, phi) with real eta moves it to
    (l + eta, phi); purely imaginary eta = -i*omega*t rotates phi.
    """
    j = s.j_values()
    out = _guard_factors(s.coeffs, np.asarray(eta) * j, "exp_j")
    return StateVector(s.sector, s.trunc, out, s.leakage)


def apply_time_reversal(s: StateVector) -> StateVector:
    """Antiunitary time reversal: c_j -> conj(c_{-j})."""
    return replace(s, coeffs=np.conj(s.coeffs[::-1]))


def inner(a: StateVector, b: StateVector) -> complex:
    """<a|b> = sum_j conj(a_j) b_j (conjugate-linear in the first slot)."""
    if a.sector is not b.sector or a.trunc != b.trunc:
        raise DomainError("inner product requires matching sector and window")
    return complex(np.vdot(a.coeffs, b.coeffs))


def operator_matrix(kind: str, sector: Sector, trunc: Truncation) -> np.ndarray:
    """Dense window matrix M with M[row, col] = <j_row| Op |j_col>."""
    if kind not in OPERATOR_KINDS:
        raise DomainError(f"unknown operator kind {kind!r}; expected one of {OPERATOR_KINDS}")
    j = trunc.j_values(sector)
    n = len(j)
    m = np.zeros((n, n), dtype=np.complex128)
    if kind == "J":
        np.fill_diagonal(m, j)
    elif kind == "N":
        np.fill_diagonal(m, -j + N_CONST)
    elif kind == "U":
        m[np.arange(1, n), np.arange(n - 1)] = 1.0
    elif kind == "Udag":
        m[np.arange(n - 1), np.arange(1, n)] = 1.0
    elif kind == "X":
        m[np.arange(1, n), np.arange(n - 1)] = np.exp(-j[:-1] - 0.5)
    else:  # Xdag
        m[np.arange(n - 1), np.arange(1, n)] = np.exp(-j[1:] + 0.5)
    return m


def state_to_json(s: StateVector) -> str:
    """Serialize to JSON: sector tag, window, leakage, {two_j, re, im} array."""
    payload = {
        "sector": s.sector.value,
        "two_jmax": s.trunc.two_jmax,
        "leakage": s.leakage,
        "coeffs": [
            {"two_j": int(t), "re": float(c.real), "im": float(c.imag)}
            for t, c in zip(s.two_j_values(), s.coeffs)
        ],
    }
    return json.dumps(payload, sort_keys=True)


def state_from_json(text: str) -> StateVector:
    try:
        payload = json.loads(text)
        sector = Sector.from_name(payload["sector"])
        trunc = Truncation(int(payload["two_jmax"]))
        leakage = float(payload.get("leakage", 0.0))
        entries = {int(e["two_j"]): complex(e["re"], e["im"]) for e in payload["coeffs"]}
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise DomainError(f"malformed state JSON: {exc}") from exc
    coeffs = np.zeros(trunc.size(sector), dtype=np.complex128)
    for two_j, value in entries.items():
        coeffs[trunc.index_of(sector, two_j)] = value
    return StateVector(sector, trunc, coeffs, leakage)
