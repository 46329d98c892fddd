"""Domain types and parameter validation.

Conventions used throughout the package: hbar = 1, all couplings are real
and positive, and dynamics is expressed in the frame rotating at the common
mode frequency, so the frequency enters only as a reconstructable phase.
Public time arguments of the closed-form modules are dimensionless (Gt with
G = g sqrt(N), or G't for anisotropic profiles); ``time_from_gt`` /
``gt_from_time`` convert to and from raw time for the Fock-space oracle.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

from .errors import InvalidParameter

# Below this squared mode amplitude the even/odd cat qubit basis is treated
# as degenerate and closed forms return their limiting values instead.
DEGENERACY_THRESHOLD = 1e-12


class ParityKind(Enum):
    """Parity of a coherent-state superposition: even is +, odd is -."""

    EVEN = "even"
    ODD = "odd"

    @property
    def sign(self) -> float:
        return 1.0 if self is ParityKind.EVEN else -1.0


def _require(condition: bool, name: str, reason: str) -> None:
    if not condition:
        raise InvalidParameter(name, reason)


def _finite(x: float) -> bool:
    return isinstance(x, (int, float)) and math.isfinite(x)


@dataclass(frozen=True)
class SystemParams:
    """Isotropic system configuration: N modes, one cavity, uniform coupling.

    intensity is |alpha|^2 of the cavity field preparation; field_phase is
    arg(alpha). decay_rate is the per-mode population loss rate gamma.
    """

    n_crystallites: int
    coupling: float = 1.0
    frequency: float = 0.0
    decay_rate: float = 0.0
    intensity: float = 0.0
    field_phase: float = 0.0
    parity: ParityKind = ParityKind.ODD

    def __post_init__(self) -> None:
        _check_system(self)

    @property
    def collective_rate(self) -> float:
        """Collective coupling G = g sqrt(N)."""
        return self.coupling * math.sqrt(self.n_crystallites)

    @property
    def alpha(self) -> complex:
        """Cavity coherent amplitude sqrt(intensity) * exp(i field_phase)."""
        return math.sqrt(self.intensity) * cmath.exp(1j * self.field_phase)

    def time_from_gt(self, gt: float) -> float:
        return gt / self.collective_rate

    def gt_from_time(self, t: float) -> float:
        return t * self.collective_rate


def _check_system(p: SystemParams) -> None:
    _require(isinstance(p.n_crystallites, int) and not isinstance(p.n_crystallites, bool),
             "n_crystallites", "must be an integer")
    _require(p.n_crystallites >= 2, "n_crystallites",
             "pairwise entanglement needs at least two modes")
    _require(_finite(p.coupling) and p.coupling > 0, "coupling", "must be finite and > 0")
    _require(_finite(p.frequency) and p.frequency >= 0, "frequency", "must be finite and >= 0")
    _require(_finite(p.decay_rate) and p.decay_rate >= 0, "decay_rate", "must be finite and >= 0")
    _require(_finite(p.intensity) and p.intensity >= 0, "intensity", "must be finite and >= 0")
    _require(_finite(p.field_phase), "field_phase", "must be finite")
    _require(isinstance(p.parity, ParityKind), "parity", "must be a ParityKind")


@dataclass(frozen=True)
class CouplingProfile:
    """Per-mode coupling strengths (g_1 .. g_N), possibly anisotropic."""

    couplings: tuple

    def __post_init__(self) -> None:
        object.__setattr__(self, "couplings", tuple(float(g) for g in self.couplings))
        _check_profile(self)

    def __len__(self) -> int:
        return len(self.couplings)

    @property
    def collective_rate(self) -> float:
        """G' = sqrt(sum g_j^2)."""
        return math.sqrt(sum(g * g for g in self.couplings))

    @classmethod
    def isotropic(cls, coupling: float, n: int) -> "CouplingProfile":
        return cls(couplings=(float(coupling),) * n)

    @classmethod
    def from_params(cls, params: SystemParams) -> "CouplingProfile":
        return cls.isotropic(params.coupling, params.n_crystallites)

    def time_from_gt(self, gt: float) -> float:
        return gt / self.collective_rate

    def gt_from_time(self, t: float) -> float:
        return t * self.collective_rate


def _check_profile(p: CouplingProfile) -> None:
    _require(len(p.couplings) >= 2, "couplings", "need at least two modes")
    for j, g in enumerate(p.couplings, start=1):
        _require(_finite(g) and g > 0, f"couplings[{j}]", "must be finite and > 0")


@dataclass(frozen=True)
class PairIndex:
    """One-based indices of the two modes whose joint state is reduced."""

    m: int
    n: int

    def __post_init__(self) -> None:
        _check_pair(self)

    def check_bounds(self, n_modes: int) -> "PairIndex":
        _require(self.m <= n_modes and self.n <= n_modes, "pair",
                 f"indices must be <= {n_modes}")
        return self


def _check_pair(p: PairIndex) -> None:
    _require(isinstance(p.m, int) and isinstance(p.n, int), "pair", "indices must be integers")
    _require(p.m >= 1 and p.n >= 1, "pair", "indices are one-based")
    _require(p.m != p.n, "pair", "indices must differ")


@dataclass(frozen=True)
class SinglePhoton:
    """One cavity photon, all modes in vacuum."""


@dataclass(frozen=True)
class Coherent:
    """Cavity coherent state |alpha>, all modes in vacuum."""

    alpha: complex


@dataclass(frozen=True)
class Cat:
    """Even or odd cavity cat state; alpha may be deferred to SystemParams."""

    parity: ParityKind
    alpha: complex | None = None


def validate_params(value):
    """Re-run the invariant checks for a domain value and return it unchanged.

    Construction already validates, so this is idempotent; it exists so call
    sites handling raw input can fail fast with InvalidParameter.
    """
    if isinstance(value, SystemParams):
        _check_system(value)
    elif isinstance(value, CouplingProfile):
        _check_profile(value)
    elif isinstance(value, PairIndex):
        _check_pair(value)
    else:
        raise InvalidParameter("value", f"unsupported type {type(value).__name__}")
    return value
