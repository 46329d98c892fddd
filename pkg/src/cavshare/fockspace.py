"""Brute-force truncated Fock-space oracle.

Everything here is independent of the closed forms: states are explicit
occupation vectors (cavity = mode 0, excitons = modes 1..N), unitary
evolution is exact per total-excitation sector via dense eigendecomposition,
and loss is integrated from the Lindblad generator with one zero-temperature
channel per exciton mode. Times are raw t; multiply by G for Gt.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.special import gammainc

from .analytic import NumberBasis, TildeBasis, TwoQubitDensity
from .errors import (
    CapacityExceeded,
    DegenerateBasis,
    DimensionMismatch,
    InvalidParameter,
    LeakageError,
    StepSizeUnstable,
    TruncationTooSmall,
)
from .model import (
    DEGENERACY_THRESHOLD,
    Cat,
    Coherent,
    CouplingProfile,
    PairIndex,
    ParityKind,
    SinglePhoton,
    SystemParams,
    validate_params,
)

_TAIL_BOUND = 1e-12
_LEAK_TOL = 1e-8
_DRIFT_TOL = 1e-8
_LINDBLAD_CAPACITY = 400


def _compositions(total: int, parts: int):
    """All occupation tuples summing to total, head-descending."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total, -1, -1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


class FockBasis:
    """Enumeration of all occupation tuples with total excitation <= max_total.

    States are grouped by total excitation (sector k spans
    offsets[k]:offsets[k+1]) so Hamiltonians built on this basis are block
    diagonal. The index map is a bijection onto range(dimension).
    """

    def __init__(self, n_modes: int, max_total: int, capacity: int = 200_000):
        if n_modes < 2:
            raise InvalidParameter("n_modes", "need at least cavity plus one mode")
        if max_total < 1:
            raise InvalidParameter("max_total", "cutoff must be at least 1")
        dimension = math.comb(max_total + n_modes, n_modes)
        if dimension > capacity:
            raise CapacityExceeded(dimension, capacity)
        self.n_modes = n_modes
        self.max_total = max_total
        states: list[tuple[int, ...]] = []
        offsets = [0]
        for k in range(max_total + 1):
            states.extend(_compositions(k, n_modes))
            offsets.append(len(states))
        self.states = tuple(states)
        self.sector_offsets = tuple(offsets)
        self.index = {s: i for i, s in enumerate(self.states)}
        self.occupations = np.array(self.states, dtype=np.int64)
        self._pair_plans: dict[tuple[int, int], list[tuple[np.ndarray, np.ndarray]]] = {}

    @property
    def dimension(self) -> int:
        return len(self.states)

    def pair_plan(self, pair: PairIndex) -> list[tuple[np.ndarray, np.ndarray]]:
        """Grouping of basis states by the configuration of every mode
        outside the pair; the partial trace sums one block per group."""
        key = (pair.m, pair.n)
        plan = self._pair_plans.get(key)
        if plan is not None:
            return plan
        keep = (pair.m, pair.n)
        rest_cols = [j for j in range(self.n_modes) if j not in keep]
        groups: dict[tuple[int, ...], list[int]] = {}
        for i, state in enumerate(self.states):
            groups.setdefault(tuple(state[j] for j in rest_cols), []).append(i)
        span = self.max_total + 1
        plan = []
        for members in groups.values():
            idx = np.array(members, dtype=np.int64)
            pocc = self.occupations[idx, pair.m] * span + self.occupations[idx, pair.n]
            plan.append((idx, pocc))
        self._pair_plans[key] = plan
        return plan


class SparseHermitian:
    """Hermitian operator stored as its upper triangle on a FockBasis."""

    def __init__(self, basis: FockBasis, rows, cols, values):
        self.basis = basis
        self.dimension = basis.dimension
        self.rows = np.asarray(rows, dtype=np.int64)
        self.cols = np.asarray(cols, dtype=np.int64)
        self.values = np.asarray(values, dtype=complex)
        self._csr = None
        self._sector_eigs: list[tuple[np.ndarray, np.ndarray]] | None = None

    def to_csr(self) -> sp.csr_matrix:
        if self._csr is None:
            off_diag = self.rows != self.cols
            r = np.concatenate([self.rows, self.cols[off_diag]])
            c = np.concatenate([self.cols, self.rows[off_diag]])
            v = np.concatenate([self.values, self.values[off_diag].conj()])
            self._csr = sp.coo_matrix(
                (v, (r, c)), shape=(self.dimension, self.dimension)
            ).tocsr()
        return self._csr

    def sector_eigensystems(self) -> list[tuple[np.ndarray, np.ndarray]]:
        if self._sector_eigs is None:
            full = self.to_csr()
            eigs = []
            offsets = self.basis.sector_offsets
            for k in range(len(offsets) - 1):
                lo, hi = offsets[k], offsets[k + 1]
                block = full[lo:hi, lo:hi].toarray()
                eigs.append(np.linalg.eigh(block))
            self._sector_eigs = eigs
        return self._sector_eigs


@dataclass(frozen=True)
class PureState:
    amplitudes: np.ndarray
    basis: FockBasis

    def __post_init__(self) -> None:
        amp = np.asarray(self.amplitudes, dtype=complex)
        if amp.shape != (self.basis.dimension,):
            raise DimensionMismatch(
                f"state length {amp.shape} vs basis dimension {self.basis.dimension}"
            )
        norm = np.linalg.norm(amp)
        if abs(norm - 1.0) > 1e-10:
            raise InvalidParameter("amplitudes", f"norm {norm!r} is not 1")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)


@dataclass(frozen=True)
class MixedState:
    matrix: np.ndarray
    basis: FockBasis

    def __post_init__(self) -> None:
        mat = np.asarray(self.matrix, dtype=complex)
        d = self.basis.dimension
        if mat.shape != (d, d):
            raise DimensionMismatch(f"matrix shape {mat.shape} vs basis dimension {d}")
        if np.max(np.abs(mat - mat.conj().T)) > 1e-10:
            raise InvalidParameter("matrix", "not Hermitian within 1e-10")
        if abs(np.trace(mat).real - 1.0) > 1e-8:
            raise InvalidParameter("matrix", "trace differs from 1 beyond 1e-8")
        if float(np.linalg.eigvalsh(mat).min()) < -1e-8:
            raise InvalidParameter("matrix", "negative eigenvalue beyond -1e-8")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)


def build_basis(n_modes: int, max_total: int, capacity: int = 200_000) -> FockBasis:
    return FockBasis(n_modes, max_total, capacity=capacity)


def minimum_truncation(intensity: float, margin: int = 0) -> int:
    """Smallest cutoff M whose Poisson tail beyond M is below 1e-12.

    margin adds headroom (used before Lindblad runs, where the integrator
    prefers room above the physically occupied levels even though loss only
    moves weight downward).
    """
    if intensity < 0.0:
        raise InvalidParameter("intensity", "must be nonnegative")
    m = 1
    while gammainc(m + 1, intensity) >= _TAIL_BOUND:
        m += 1
        if m > 10_000:
            raise InvalidParameter("intensity", "no practical truncation found")
    return m + margin


def build_hamiltonian(coupling: CouplingProfile | SystemParams,
                      basis: FockBasis) -> SparseHermitian:
    """Beam-splitter Hamiltonian sum_j g_j (a dagger b_j + a b_j dagger)."""
    if isinstance(coupling, SystemParams):
        profile = CouplingProfile.isotropic(coupling.coupling, coupling.n_crystallites)
    else:
        profile = validate_params(coupling)
    if basis.n_modes != len(profile) + 1:
        raise DimensionMismatch(
            f"basis has {basis.n_modes} modes, profile wants {len(profile) + 1}"
        )
    rows, cols, vals = [], [], []
    for i, state in enumerate(basis.states):
        n_cav = state[0]
        if n_cav == 0:
            continue
        for j, g in enumerate(profile.couplings, start=1):
            target = list(state)
            target[0] -= 1
            target[j] += 1
            k = basis.index[tuple(target)]
            # a b_j† taking |state> to |target>: one matrix element per
            # undirected pair, the conjugate side is implied.
            rows.append(min(i, k))
            cols.append(max(i, k))
            vals.append(g * math.sqrt(n_cav * (state[j] + 1)))
    return SparseHermitian(basis, rows, cols, vals)


def prepare_initial(kind: SinglePhoton | Coherent | Cat, basis: FockBasis) -> PureState:
    """Cavity-mode preparation with all exciton modes in vacuum."""
    amp = np.zeros(basis.dimension, dtype=complex)
    if isinstance(kind, SinglePhoton):
        one = (1,) + (0,) * (basis.n_modes - 1)
        amp[basis.index[one]] = 1.0
        return PureState(amp, basis)
    if isinstance(kind, Coherent):
        alpha = complex(kind.alpha)
        weights = _coherent_amplitudes(alpha, basis.max_total)
    elif isinstance(kind, Cat):
        if kind.alpha is None:
            raise InvalidParameter("alpha", "Cat preparation needs an amplitude")
        alpha = complex(kind.alpha)
        x = abs(alpha) ** 2
        sign = kind.parity.sign
        if sign < 0 and x == 0.0:
            raise InvalidParameter("alpha", "odd superposition of vacuum is void")
        plus = _coherent_amplitudes(alpha, basis.max_total)
        minus = _coherent_amplitudes(-alpha, basis.max_total)
        if sign > 0:
            norm = 1.0 / math.sqrt(2.0 + 2.0 * math.exp(-2.0 * x))
        else:
            norm = 1.0 / math.sqrt(-2.0 * math.expm1(-2.0 * x))
        weights = norm * (plus + sign * minus)
    else:
        raise TypeError(f"unsupported preparation {type(kind).__name__}")
    captured = float(np.sum(np.abs(weights) ** 2))
    tail = max(0.0, 1.0 - captured)
    if tail >= _TAIL_BOUND:
        raise TruncationTooSmall(tail, _TAIL_BOUND)
    weights = weights / math.sqrt(captured)
    zeros = (0,) * (basis.n_modes - 1)
    for n, w in enumerate(weights):
        if w != 0.0:
            amp[basis.index[(n,) + zeros]] = w
    return PureState(amp, basis)


def _coherent_amplitudes(alpha: complex, max_total: int) -> np.ndarray:
    out = np.zeros(max_total + 1, dtype=complex)
    out[0] = math.exp(-abs(alpha) ** 2 / 2.0)
    for n in range(1, max_total + 1):
        out[n] = out[n - 1] * alpha / math.sqrt(n)
    return out


def evolve_unitary(hamiltonian: SparseHermitian, psi0: PureState, t: float) -> PureState:
    """psi(t) = exp(-iHt) psi0, exact per total-excitation sector."""
    if hamiltonian.basis is not psi0.basis and (
        hamiltonian.dimension != psi0.basis.dimension
        or hamiltonian.basis.n_modes != psi0.basis.n_modes
    ):
        raise DimensionMismatch("state and Hamiltonian bases differ")
    out = np.empty(hamiltonian.dimension, dtype=complex)
    offsets = hamiltonian.basis.sector_offsets
    for k, (lam, vec) in enumerate(hamiltonian.sector_eigensystems()):
        lo, hi = offsets[k], offsets[k + 1]
        block = psi0.amplitudes[lo:hi]
        out[lo:hi] = vec @ (np.exp(-1j * lam * t) * (vec.conj().T @ block))
    out /= np.linalg.norm(out)
    return PureState(out, psi0.basis)


class _LindbladStepper:
    """Fixed-step RK4 for drho/dt = -i[H,rho] + gamma sum_j D[b_j] rho.

    The generator acts on vec(rho) as one sparse matrix: the anticommutator
    part is folded into an effective non-Hermitian Hamiltonian
    H - i(gamma/2) sum_j n_j, and with row-major vec(A X B) = (A kron B^T) x
    the whole right-hand side is

        L = -i (H_eff kron I - I kron conj(H_eff)) + gamma sum_j b_j kron conj(b_j)

    The generator is linear and constant, so one RK4 step is exactly the
    degree-4 Taylor polynomial of exp(hL), evaluated in Horner form.
    """

    def __init__(self, params: SystemParams, basis: FockBasis):
        self.h_nominal = min(
            0.005 / params.collective_rate,
            0.005 / max(params.decay_rate, params.coupling),
        )
        profile = CouplingProfile.isotropic(params.coupling, params.n_crystallites)
        h_eff = build_hamiltonian(profile, basis).to_csr().astype(complex)
        gamma = params.decay_rate
        occ = basis.occupations
        dim = basis.dimension
        eye = sp.identity(dim, dtype=complex, format="csr")
        jumps = None
        if gamma > 0.0:
            n_excitons = occ[:, 1:].sum(axis=1).astype(float)
            h_eff = h_eff + sp.diags(-0.5j * gamma * n_excitons)
            for j in range(1, basis.n_modes):
                src = np.nonzero(occ[:, j] >= 1)[0]
                lowered = occ[src].copy()
                lowered[:, j] -= 1
                dst = np.array(
                    [basis.index[tuple(int(v) for v in s)] for s in lowered],
                    dtype=np.int64,
                )
                scale = np.sqrt(occ[src, j].astype(float))
                lower = sp.csr_matrix((scale, (dst, src)), shape=(dim, dim))
                term = gamma * sp.kron(lower, lower.conj())
                jumps = term if jumps is None else jumps + term
        generator = -1j * (sp.kron(h_eff, eye) - sp.kron(eye, h_eff.conj()))
        if jumps is not None:
            generator = generator + jumps
        self.generator = sp.csr_matrix(generator)

    def advance(self, rho: np.ndarray, span: float, n_steps: int) -> np.ndarray:
        h = span / n_steps
        v = np.ascontiguousarray(rho, dtype=complex).reshape(-1)
        for _ in range(n_steps):
            u = v
            for divisor in (4.0, 3.0, 2.0, 1.0):
                u = self.generator.dot(u)
                u *= h / divisor
                u += v
            v = u
        # roundoff is the only hermiticity leak; scrub it once per interval
        out = v.reshape(rho.shape)
        return 0.5 * (out + out.conj().T)


def lindblad_trajectory(params: SystemParams, rho0: MixedState,
                        times: list[float], _h_scale: float = 1.0) -> list[MixedState]:
    """Density matrices at the given times (ascending, from t=0).

    The whole trajectory is integrated twice, once at the nominal step and
    once at half step; if any snapshot moves by more than 1e-8 the run is
    rejected as unstable, otherwise the finer run is returned. _h_scale
    inflates the nominal step and exists only so tests can trip the
    instability guard cheaply.
    """
    validate_params(params)
    basis = rho0.basis
    if basis.dimension > _LINDBLAD_CAPACITY:
        raise CapacityExceeded(basis.dimension, _LINDBLAD_CAPACITY)
    if any(t < 0.0 for t in times) or any(
        b < a for a, b in zip(times, times[1:])
    ):
        raise InvalidParameter("times", "must be nonnegative and ascending")
    stepper = _LindbladStepper(params, basis)
    h_nominal = stepper.h_nominal * _h_scale

    def run(refine: int) -> list[np.ndarray]:
        rho = np.array(rho0.matrix, dtype=complex)
        out = []
        prev = 0.0
        for t in times:
            span = t - prev
            if span > 0.0:
                n = refine * max(1, math.ceil(span / h_nominal))
                rho = stepper.advance(rho, span, n)
            prev = t
            out.append(rho.copy())
        return out

    coarse = run(1)
    fine = run(2)
    drift = max(
        float(np.max(np.abs(a - b))) for a, b in zip(coarse, fine)
    )
    if drift > _DRIFT_TOL:
        raise StepSizeUnstable(drift, _DRIFT_TOL)
    return [MixedState(rho, basis) for rho in fine]


def evolve_lindblad(params: SystemParams, rho0: MixedState, t: float) -> MixedState:
    return lindblad_trajectory(params, rho0, [t])[-1]


def _pair_occupation_density(state: PureState | MixedState, pair: PairIndex,
                             basis: FockBasis) -> np.ndarray:
    """Partial trace onto the pair, indexed by n_m*(M+1) + n_n."""
    pair.check_bounds(basis.n_modes - 1)
    span = basis.max_total + 1
    red = np.zeros((span * span, span * span), dtype=complex)
    # pair occupations are unique within each rest-group, so indexed +=
    # accumulates without collisions
    if isinstance(state, PureState):
        for idx, pocc in basis.pair_plan(pair):
            v = state.amplitudes[idx]
            red[np.ix_(pocc, pocc)] += np.outer(v, v.conj())
    else:
        for idx, pocc in basis.pair_plan(pair):
            red[np.ix_(pocc, pocc)] += state.matrix[np.ix_(idx, idx)]
    return red


def _cat_pair_projector(mu: complex, span: int) -> np.ndarray:
    """Columns: even and odd cat states of amplitude mu on Fock levels 0..span-1."""
    x = abs(mu) ** 2
    if x < DEGENERACY_THRESHOLD:
        raise DegenerateBasis(f"|mu|^2 = {x:.3e} below 1e-12")
    coh = _coherent_amplitudes(mu, span - 1)
    b = np.zeros((span, 2), dtype=complex)
    even = coh.copy()
    even[1::2] = 0.0
    odd = coh.copy()
    odd[0::2] = 0.0
    b[:, 0] = even / math.sqrt(0.5 * (1.0 + math.exp(-2.0 * x)))
    b[:, 1] = odd / math.sqrt(0.5 * (-math.expm1(-2.0 * x)))
    return b


def reduce_to_qubit_pair(state: PureState | MixedState, pair: PairIndex,
                         basis: FockBasis,
                         qubit_basis: NumberBasis | TildeBasis) -> TwoQubitDensity:
    """Two-qubit density of the pair in the requested basis.

    NumberBasis keeps Fock levels {0,1} of each mode; TildeBasis(mu)
    projects onto the orthonormal even/odd superpositions of |+-mu>. Weight
    outside the qubit plane beyond 1e-8 raises LeakageError; smaller
    deficits are renormalized away.
    """
    red = _pair_occupation_density(state, pair, basis)
    span = basis.max_total + 1
    if isinstance(qubit_basis, NumberBasis):
        keep = [0 * span + 0, 0 * span + 1, 1 * span + 0, 1 * span + 1]
        mat = red[np.ix_(keep, keep)]
    elif isinstance(qubit_basis, TildeBasis):
        b = _cat_pair_projector(qubit_basis.mu, span)
        bb = np.kron(b, b)  # maps the 4 tilde kets into the pair space
        mat = bb.conj().T @ red @ bb
    else:
        raise TypeError(f"unsupported qubit basis {type(qubit_basis).__name__}")
    captured = float(np.trace(mat).real)
    leak = 1.0 - captured
    if leak > _LEAK_TOL:
        raise LeakageError(leak, _LEAK_TOL)
    mat = mat / captured
    mat = 0.5 * (mat + mat.conj().T)
    floor = float(np.linalg.eigvalsh(mat).min())
    if floor < -1e-10:
        # tiny negative weight from the projection; lift it and renormalize
        lam, vec = np.linalg.eigh(mat)
        lam = np.clip(lam, 0.0, None)
        mat = (vec * lam) @ vec.conj().T
        mat /= np.trace(mat).real
    tag = qubit_basis
    return TwoQubitDensity(entries=mat, basis_tag=tag)


def w_state_fidelity(psi: PureState, basis: FockBasis) -> float:
    """Overlap squared with the equal single-excitation sharing state."""
    n = basis.n_modes - 1
    overlap = 0.0 + 0.0j
    for j in range(1, basis.n_modes):
        state = [0] * basis.n_modes
        state[j] = 1
        overlap += psi.amplitudes[basis.index[tuple(state)]]
    return abs(overlap) ** 2 / n


def observable_mean_photon(state: PureState | MixedState, mode: int,
                           basis: FockBasis) -> float:
    if not 0 <= mode < basis.n_modes:
        raise InvalidParameter("mode", f"must be in [0, {basis.n_modes})")
    occ = basis.occupations[:, mode].astype(float)
    if isinstance(state, PureState):
        return float(occ @ (np.abs(state.amplitudes) ** 2))
    return float(occ @ np.diag(state.matrix).real)


def total_excitation(state: PureState | MixedState, basis: FockBasis) -> float:
    return sum(observable_mean_photon(state, j, basis) for j in range(basis.n_modes))
