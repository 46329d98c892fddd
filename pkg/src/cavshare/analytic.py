"""Closed forms for the lossless dynamics.

A single cavity photon (or cat state) is transferred coherently to N coupled
bosonic modes and back. These functions give the transfer coefficients, the
reduced two-mode qubit densities, pairwise concurrences, and the cavity
photon number, all as explicit functions of the dimensionless time Gt.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateBasis, NotADensityMatrix
from .model import (
    DEGENERACY_THRESHOLD,
    Cat,
    CouplingProfile,
    PairIndex,
    ParityKind,
    SinglePhoton,
    SystemParams,
)


@dataclass(frozen=True)
class NumberBasis:
    """Qubit basis: mode occupation restricted to {0, 1}."""


@dataclass(frozen=True)
class TildeBasis:
    """Qubit basis spanned by the even/odd cat states of amplitude mu."""

    mu: complex


@dataclass(frozen=True)
class TwoQubitDensity:
    """Validated 4x4 density matrix in basis order {|00>, |01>, |10>, |11>}."""

    entries: np.ndarray
    basis_tag: NumberBasis | TildeBasis

    def __post_init__(self) -> None:
        mat = np.asarray(self.entries, dtype=complex)
        if mat.shape != (4, 4):
            raise NotADensityMatrix(f"expected shape (4, 4), got {mat.shape}")
        if np.max(np.abs(mat - mat.conj().T)) > 1e-12:
            raise NotADensityMatrix("not Hermitian within 1e-12")
        tr = np.trace(mat)
        if abs(tr - 1.0) > 1e-10:
            raise NotADensityMatrix("trace differs from 1 beyond 1e-10")
        if np.linalg.eigvalsh(mat).min() < -1e-10:
            raise NotADensityMatrix("negative eigenvalue beyond -1e-10")
        mat.setflags(write=False)
        object.__setattr__(self, "entries", mat)


@dataclass(frozen=True)
class TransferCoefficients:
    """Amplitude fractions f_j(t) moved from the cavity into each mode."""

    g_collective: float
    f: np.ndarray
    cos_term: float


@dataclass(frozen=True)
class ModeAmplitudes:
    """Isotropic amplitude pair: cavity keeps u(t), each mode gets v(t)."""

    u: complex
    v: complex


def transfer_coefficients(profile: CouplingProfile, gt: float) -> TransferCoefficients:
    """Transfer coefficients f_j = g_j sin(G't)/G' at dimensionless time G't.

    They satisfy sum f_j^2 + cos^2(G't) = 1 for every profile.
    """
    gp = profile.collective_rate
    s = math.sin(gt)
    f = np.array([g * s / gp for g in profile.couplings])
    return TransferCoefficients(g_collective=gp, f=f, cos_term=math.cos(gt))


def isotropic_amplitudes(params: SystemParams, gt: float) -> ModeAmplitudes:
    """Amplitudes u = cos(Gt) e^{-i w t}, v = -i sin(Gt)/sqrt(N) e^{-i w t}."""
    n = params.n_crystallites
    phase = cmath.exp(-1j * params.frequency * params.time_from_gt(gt))
    u = math.cos(gt) * phase
    v = -1j * (math.sin(gt) / math.sqrt(n)) * phase
    return ModeAmplitudes(u=u, v=v)


def single_photon_pair_density(profile: CouplingProfile, gt: float,
                               pair: PairIndex) -> TwoQubitDensity:
    """Reduced density of modes (m, n) after single-photon transfer.

    Populations f_m^2 and f_n^2 sit on |10> and |01> with coherence f_m f_n;
    the remaining weight (cavity plus the other modes) sits on |00>. The
    doubly excited level is empty.
    """
    pair.check_bounds(len(profile))
    coeffs = transfer_coefficients(profile, gt)
    fm = coeffs.f[pair.m - 1]
    fn = coeffs.f[pair.n - 1]
    rest = coeffs.cos_term ** 2 + sum(
        fj * fj for j, fj in enumerate(coeffs.f, start=1) if j not in (pair.m, pair.n)
    )
    mat = np.zeros((4, 4), dtype=complex)
    mat[0, 0] = rest
    mat[1, 1] = fn * fn
    mat[2, 2] = fm * fm
    mat[1, 2] = mat[2, 1] = fm * fn
    return TwoQubitDensity(entries=mat, basis_tag=NumberBasis())


def single_photon_concurrence(profile: CouplingProfile, gt: float,
                              pair: PairIndex) -> float:
    """Pairwise concurrence 2 g_m g_n sin^2(G't) / G'^2.

    Isotropic profiles give (2/N) sin^2(Gt): the single excitation is shared
    equally, bounded by 2/N for every pair.
    """
    pair.check_bounds(len(profile))
    gm = profile.couplings[pair.m - 1]
    gn = profile.couplings[pair.n - 1]
    gp2 = profile.collective_rate ** 2
    s = math.sin(gt)
    return 2.0 * gm * gn * s * s / gp2


def cavity_overlap(params: SystemParams, gt: float) -> float:
    """Coherence survival factor P(t) between the two cat branches.

    P = exp(-2|alpha|^2 (1 - 2 sin^2(Gt)/N)); equal to exp(-2|alpha|^2) at
    t = 0 and largest when the cavity is empty.
    """
    x = params.intensity
    s2 = math.sin(gt) ** 2
    return math.exp(-2.0 * x + 4.0 * x * s2 / params.n_crystallites)


def _tilde_x_matrix(x: float, u: float, parity: ParityKind) -> np.ndarray:
    """Shared X-shaped pair density in the cat qubit basis.

    x is the field intensity |alpha|^2 and u = 2 |mu|^2 with mu the per-mode
    amplitude. Guards: callers ensure x > 0 and u > 0. expm1 keeps the
    near-degenerate differences (1 - e^{-u}, 1 - P) accurate.
    """
    sign = parity.sign
    eps = math.exp(-2.0 * x)
    log_p = 2.0 * u - 2.0 * x  # <= 0 since u <= x for N >= 2
    p_factor = math.exp(log_p)
    one_m_p = -math.expm1(log_p)
    one_p_p = 1.0 + p_factor
    norm2 = 0.5 / (1.0 + eps) if sign > 0 else 0.5 / (-math.expm1(-2.0 * x))
    one_m_q = -math.expm1(-u)
    one_p_q = 1.0 + math.exp(-u)
    diag_p = one_p_p if sign > 0 else one_m_p
    mid_p = one_m_p if sign > 0 else one_p_p
    a00 = norm2 * diag_p * one_p_q * one_p_q / 2.0
    a11 = norm2 * diag_p * one_m_q * one_m_q / 2.0
    mid = norm2 * mid_p * one_p_q * one_m_q / 2.0
    corner = norm2 * diag_p * one_p_q * one_m_q / 2.0
    mat = np.zeros((4, 4), dtype=complex)
    mat[0, 0] = a00
    mat[3, 3] = a11
    mat[1, 1] = mat[2, 2] = mat[1, 2] = mat[2, 1] = mid
    mat[0, 3] = mat[3, 0] = corner
    return mat


def coherent_pair_density(params: SystemParams, gt: float) -> TwoQubitDensity:
    """Reduced pair density for a cat-state preparation, in the tilde basis.

    The qubit basis is the orthonormal even/odd cat pair of amplitude
    mu = v(t) alpha. Raises DegenerateBasis when |mu|^2 < 1e-12 (the basis
    collapses as the modes return to vacuum).
    """
    x = params.intensity
    n = params.n_crystallites
    s2 = math.sin(gt) ** 2
    mu_sq = x * s2 / n
    if mu_sq < DEGENERACY_THRESHOLD:
        raise DegenerateBasis(f"|v(t) alpha|^2 = {mu_sq:.3e} below 1e-12")
    mu = isotropic_amplitudes(params, gt).v * params.alpha
    mat = _tilde_x_matrix(x, 2.0 * mu_sq, params.parity)
    return TwoQubitDensity(entries=mat, basis_tag=TildeBasis(mu=mu))


def coherent_concurrence(params: SystemParams, gt: float) -> float:
    """Pairwise concurrence of the cat-state dynamics.

    C = (e^{4|alpha|^2 sin^2(Gt)/N} - 1) / (e^{2|alpha|^2} +- 1) with + for
    even and - for odd parity. The odd case tends to the single-photon law
    (2/N) sin^2(Gt) as the intensity vanishes.
    """
    x = params.intensity
    n = params.n_crystallites
    s2 = math.sin(gt) ** 2
    if x == 0.0:
        return 2.0 * s2 / n if params.parity is ParityKind.ODD else 0.0
    numerator = math.expm1(4.0 * x * s2 / n)
    if params.parity is ParityKind.EVEN:
        denominator = math.exp(2.0 * x) + 1.0
    else:
        denominator = math.expm1(2.0 * x)
    return min(max(numerator / denominator, 0.0), 1.0)


def mean_photon_number(params: SystemParams, gt: float,
                       initial: SinglePhoton | Cat) -> float:
    """Cavity photon number at Gt for the given preparation.

    SinglePhoton gives cos^2(Gt). Cat preparations give
    |alpha|^2 cos^2(Gt) (1 -+ e^{-2|alpha|^2}) / (1 +- e^{-2|alpha|^2}),
    upper signs even, lower signs odd; the odd zero-intensity limit is the
    single-photon result.
    """
    c2 = math.cos(gt) ** 2
    if isinstance(initial, SinglePhoton):
        return c2
    if not isinstance(initial, Cat):
        raise TypeError(f"unsupported initial state {type(initial).__name__}")
    x = params.intensity
    parity = initial.parity
    if x == 0.0:
        return c2 if parity is ParityKind.ODD else 0.0
    eps = math.exp(-2.0 * x)
    if parity is ParityKind.EVEN:
        ratio = (1.0 - eps) / (1.0 + eps)
    else:
        ratio = (1.0 + eps) / (-math.expm1(-2.0 * x))
    return x * c2 * ratio
