"""Damped closed forms for lossy exciton modes.

Each mode leaks to its own zero-temperature bath at rate gamma while the
cavity stays lossless. The collective normal mode then oscillates at
delta = sqrt(N g^2 - (gamma/4)^2) under an e^{-gamma t/4} envelope. Times
are passed as dimensionless Gt (G = g sqrt(N)) and converted internally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .analytic import TildeBasis, TwoQubitDensity, _tilde_x_matrix
from .errors import DegenerateBasis, OverdampedRegime
from .model import DEGENERACY_THRESHOLD, ParityKind, SystemParams


@dataclass(frozen=True)
class DampedAmplitudes:
    """Cavity and per-mode amplitude factors under exciton damping."""

    u_prime: float
    v_prime: float
    delta: float


def _oscillation_rate(params: SystemParams) -> float:
    g = params.coupling
    gamma = params.decay_rate
    delta_sq = params.n_crystallites * g * g - (gamma / 4.0) ** 2
    if delta_sq <= 0.0:
        raise OverdampedRegime(
            f"N g^2 = {params.n_crystallites * g * g:.6g} does not exceed "
            f"(gamma/4)^2 = {(gamma / 4.0) ** 2:.6g}"
        )
    return math.sqrt(delta_sq)


def damped_amplitudes(params: SystemParams, gt: float) -> DampedAmplitudes:
    """Amplitudes u'(t), v'(t) and the shifted rate delta.

    u' = e^{-gamma t/4} [(gamma/4 delta) sin(delta t) + cos(delta t)],
    v' = (g/delta) e^{-gamma t/4} sin(delta t). At gamma = 0 these reduce to
    cos(Gt) and sin(Gt)/sqrt(N).
    """
    delta = _oscillation_rate(params)
    t = params.time_from_gt(gt)
    envelope = math.exp(-params.decay_rate * t / 4.0)
    s = math.sin(delta * t)
    c = math.cos(delta * t)
    u_prime = envelope * ((params.decay_rate / (4.0 * delta)) * s + c)
    v_prime = (params.coupling / delta) * envelope * s
    return DampedAmplitudes(u_prime=u_prime, v_prime=v_prime, delta=delta)


def damped_overlap(params: SystemParams, gt: float) -> float:
    """Branch overlap P'(t) = exp[-2|alpha|^2 (1 - 2 v'(t)^2)]."""
    v = damped_amplitudes(params, gt).v_prime
    return math.exp(-2.0 * params.intensity * (1.0 - 2.0 * v * v))


def damped_pair_density(params: SystemParams, gt: float) -> TwoQubitDensity:
    """Reduced pair density under damping, in the tilde basis of v'(t) alpha.

    Same X-shaped structure as the lossless case with sin(Gt)/sqrt(N)
    replaced by v'(t). Raises DegenerateBasis once the basis amplitude has
    decayed below threshold.
    """
    v = damped_amplitudes(params, gt).v_prime
    x = params.intensity
    mu_sq = x * v * v
    if mu_sq < DEGENERACY_THRESHOLD:
        raise DegenerateBasis(f"|v'(t) alpha|^2 = {mu_sq:.3e} below 1e-12")
    mu = -1j * v * params.alpha
    mat = _tilde_x_matrix(x, 2.0 * mu_sq, params.parity)
    return TwoQubitDensity(entries=mat, basis_tag=TildeBasis(mu=mu))


def damped_concurrence(params: SystemParams, gt: float) -> float:
    """Damped pairwise concurrence C' = (e^{4|alpha v'|^2} - 1)/(e^{2|alpha|^2} +- 1)."""
    v = damped_amplitudes(params, gt).v_prime
    x = params.intensity
    if x == 0.0:
        return 2.0 * v * v if params.parity is ParityKind.ODD else 0.0
    numerator = math.expm1(4.0 * x * v * v)
    if params.parity is ParityKind.EVEN:
        denominator = math.exp(2.0 * x) + 1.0
    else:
        denominator = math.expm1(2.0 * x)
    return min(max(numerator / denominator, 0.0), 1.0)


def damped_concurrence_weak_coupling(params: SystemParams, gt: float) -> float:
    """Weak-coupling (gamma << g) approximation to the damped concurrence.

    Replaces |v'|^2 by sin^2(Gt) e^{-gamma t/2}/N, i.e. an undistorted
    oscillation under the bare decay envelope. Valid for any gamma as a
    formula, accurate when gamma << g.
    """
    x = params.intensity
    n = params.n_crystallites
    t = params.time_from_gt(gt)
    damped_s2 = math.sin(gt) ** 2 * math.exp(-params.decay_rate * t / 2.0)
    if x == 0.0:
        return 2.0 * damped_s2 / n if params.parity is ParityKind.ODD else 0.0
    numerator = math.expm1(4.0 * x * damped_s2 / n)
    if params.parity is ParityKind.EVEN:
        denominator = math.exp(2.0 * x) + 1.0
    else:
        denominator = math.expm1(2.0 * x)
    return min(max(numerator / denominator, 0.0), 1.0)
