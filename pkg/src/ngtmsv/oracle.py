"""Truncated Fock-space brute-force oracle.

Everything here is independent of the generating-function analytics: states
are complex amplitude arrays over number bases, beamsplitters and the
interferometer act through per-total-photon-number blocks of the two-mode
rotation generator, heralding projects ancilla modes, and Wigner values come
from the displaced-parity identity with Cahill's closed form for displacement
matrix elements. Tests compare the analytic layer against this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import eval_genlaguerre, gammaln

from .errors import (
    DegenerateOperationError,
    NormalizationError,
    ParameterError,
    TruncationError,
)
from .model import NGOperationSpec

_LEAKAGE_TOL = 1e-14
_PROB_FLOOR = 1e-300


@dataclass(frozen=True)
class FockState:
    """Amplitudes over a truncated multimode number basis.

    ``amps[k1, ..., kM]`` is the amplitude of ``|k1, ..., kM>``; per-mode
    dimensions may differ. Amplitude arrays are treated as immutable.
    """

    amps: np.ndarray

    @property
    def modes(self) -> int:
        return self.amps.ndim

    @property
    def dims(self) -> tuple:
        return self.amps.shape

    def norm_sq(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def normalized(self) -> "FockState":
        n = math.sqrt(self.norm_sq())
        if n < 1e-150:
            raise DegenerateOperationError("state norm too small to normalize")
        return FockState(self.amps / n)


def default_cutoff(lam: float, extra_photons: int = 0) -> int:
    """Per-mode Fock cutoff: large enough that the squeezed-vacuum tail
    beyond it carries less than 1e-14 of the population, plus room for
    photons injected by ancillas. Never below 12."""
    if not (0.0 <= lam < 1.0):
        raise ParameterError(f"lambda must lie in [0, 1), got {lam!r}")
    if lam == 0.0:
        base = 12
    else:
        base = max(12, math.ceil(math.log(_LEAKAGE_TOL) / (2.0 * math.log(lam))))
    return base + extra_photons


def tmsv_state(lam: float, cutoff: int) -> FockState:
    """Two-mode squeezed vacuum sum_n sqrt(1-lam^2) lam^n |n, n>."""
    if not (0.0 <= lam < 1.0):
        raise ParameterError(f"lambda must lie in [0, 1), got {lam!r}")
    if lam > 0.0:
        leak = lam ** (2 * (cutoff + 1))
        if leak > _LEAKAGE_TOL:
            raise TruncationError(
                f"cutoff {cutoff} leaves tail population {leak:.2e} > {_LEAKAGE_TOL}")
    amps = np.zeros((cutoff + 1, cutoff + 1), dtype=np.complex128)
    scale = math.sqrt(1.0 - lam * lam)
    for n in range(cutoff + 1):
        amps[n, n] = scale * lam ** n
    return FockState(amps)


@lru_cache(maxsize=None)
def _block_eig(total: int):
    """Eigendecomposition of i*G on the total-photon block, where G is the
    antisymmetric tridiagonal generator a1^dag a2 - a1 a2^dag."""
    d = total + 1
    h = np.zeros((d, d), dtype=np.complex128)
    for k in range(total):
        s = math.sqrt((k + 1) * (total - k))
        h[k + 1, k] = 1j * s
        h[k, k + 1] = -1j * s
    evals, evecs = np.linalg.eigh(h)
    evecs.flags.writeable = False
    evals.flags.writeable = False
    return evals, evecs


@lru_cache(maxsize=4096)
def _block_rotation(total: int, theta: float) -> np.ndarray:
    """exp(theta*G) restricted to the total-photon block: real orthogonal."""
    evals, evecs = _block_eig(total)
    mat = (evecs * np.exp(-1j * theta * evals)) @ evecs.conj().T
    resid = float(np.abs(mat.imag).max())
    if resid > 1e-10:
        raise ArithmeticError(f"rotation block lost realness ({resid:.2e})")
    out = np.ascontiguousarray(mat.real)
    out.flags.writeable = False
    return out


def _pair_rotate(amps: np.ndarray, axis_i: int, axis_j: int, theta: float) -> np.ndarray:
    """Apply exp(theta*G) on two mode axes, expanding them so no population
    is truncated (output pair dims are d_i + d_j - 1 each)."""
    arr = np.moveaxis(amps, (axis_i, axis_j), (0, 1))
    di, dj = arr.shape[0], arr.shape[1]
    rest = arr.shape[2:]
    arr = arr.reshape(di, dj, -1)
    dout = di + dj - 1
    out = np.zeros((dout, dout, arr.shape[2]), dtype=np.complex128)
    for total in range(di + dj - 1):
        lo = max(0, total - (dj - 1))
        hi = min(di - 1, total)
        if lo > hi:
            continue
        ks = np.arange(lo, hi + 1)
        vec = arr[ks, total - ks, :]
        block = _block_rotation(total, theta)
        res = block[:, ks] @ vec
        outks = np.arange(0, total + 1)
        out[outks, total - outks, :] += res
    out = out.reshape((dout, dout) + rest)
    return np.moveaxis(out, (0, 1), (axis_i, axis_j))


def beamsplitter_apply(state: FockState, modes: tuple, tau: float) -> FockState:
    """Mix two modes on a beamsplitter of intensity transmissivity ``tau``.

    Convention (Heisenberg picture): a_i -> sqrt(tau) a_i + sqrt(1-tau) a_j,
    a_j -> -sqrt(1-tau) a_i + sqrt(tau) a_j. Mode dimensions expand so the
    result is exact.
    """
    if not (0.0 < tau <= 1.0):
        raise ParameterError(f"tau must lie in (0, 1], got {tau!r}")
    i, j = modes
    theta = math.acos(math.sqrt(tau))
    return FockState(_pair_rotate(state.amps, i, j, theta))


def attach_fock(state: FockState, photons: int) -> FockState:
    """Append an ancilla mode prepared in |photons> as the last axis."""
    if photons < 0:
        raise ParameterError("photon number must be non-negative")
    amps = np.zeros(state.dims + (photons + 1,), dtype=np.complex128)
    amps[..., photons] = state.amps
    return FockState(amps)


def herald(state: FockState, mode: int, n: int) -> tuple:
    """Project ``mode`` onto |n> and drop it.

    Returns ``(state, probability)`` with the state left unnormalized (its
    squared norm is the branch probability when the input was normalized).
    """
    if not (0 <= n < state.dims[mode]):
        raise ParameterError(
            f"heralded photon number {n} outside mode dimension {state.dims[mode]}")
    amps = np.take(state.amps, n, axis=mode)
    out = FockState(amps)
    return out, out.norm_sq()


def _herald_kernel(d_in: int, m: int, n: int, tau: float) -> tuple:
    """Fused attach -> beamsplitter -> herald on one system mode.

    Returns (kernel K, input offset) such that out[a'] = K[a'] * in[a' + n - m]:
    K[a'] is the amplitude for (a = a'+n-m, m) -> (a', n) on the beamsplitter,
    taken from the total-photon block T = a' + n.
    """
    theta = math.acos(math.sqrt(tau))
    d_out = d_in + m - n
    ks = []
    for a_out in range(max(0, m - n), d_out):
        total = a_out + n
        a_in = total - m
        block = _block_rotation(total, theta)
        ks.append(block[a_out, a_in])
    return np.array(ks), max(0, m - n)


def _apply_mode_operation(amps: np.ndarray, axis: int, m: int, n: int,
                          tau: float) -> np.ndarray:
    d_in = amps.shape[axis]
    d_out = d_in + m - n
    if d_out <= 0:
        raise DegenerateOperationError(
            "heralding removes more photons than the cutoff allows")
    kernel, a0 = _herald_kernel(d_in, m, n, tau)
    arr = np.moveaxis(amps, axis, 0)
    out = np.zeros((d_out,) + arr.shape[1:], dtype=np.complex128)
    for a_out in range(a0, d_out):
        out[a_out] = kernel[a_out - a0] * arr[a_out + n - m]
    return np.moveaxis(out, 0, axis)


def prepare_ng_state(lam: float, spec: NGOperationSpec,
                     cutoff: int | None = None) -> tuple:
    """Heralded non-Gaussian state and its success probability.

    Applies the per-mode ancilla operations to a two-mode squeezed vacuum and
    projects the ancillas immediately (the two heralds commute). Returns
    ``(normalized FockState, probability)``.
    """
    if cutoff is None:
        cutoff = default_cutoff(lam, extra_photons=max(spec.m1, spec.m2))
    psi = tmsv_state(lam, cutoff).amps
    psi = _apply_mode_operation(psi, 0, spec.m1, spec.n1, spec.tau1)
    psi = _apply_mode_operation(psi, 1, spec.m2, spec.n2, spec.tau2)
    prob = float(np.vdot(psi, psi).real)
    if prob < _PROB_FLOOR:
        raise DegenerateOperationError(
            f"heralding probability {prob:.3e} below representable floor")
    return FockState(psi / math.sqrt(prob)), prob


def mzi_apply(state: FockState, phi: float) -> FockState:
    """Mach-Zehnder phase evolution exp(-i phi J2) on a two-mode state.

    Shares the beamsplitter generator: exp(-i phi J2) = exp(-(phi/2) G).
    """
    if state.modes != 2:
        raise ParameterError("interferometer acts on two-mode states")
    return FockState(_pair_rotate(state.amps, 0, 1, -phi / 2.0))


def parity_expect(state: FockState, mode: int = 1) -> float:
    """<(-1)^(n_mode)> for a normalized state."""
    if abs(state.norm_sq() - 1.0) > 1e-9:
        raise NormalizationError("parity expectation requires a normalized state")
    signs = np.ones(state.dims[mode])
    signs[1::2] = -1.0
    shape = [1] * state.modes
    shape[mode] = -1
    weights = (np.abs(state.amps) ** 2) * signs.reshape(shape)
    return float(weights.sum())


def j2_moments(state: FockState) -> tuple:
    """(<J2>, <J2^2>) for a normalized two-mode state, computed exactly by
    one padded application of J2 = (a1^dag a2 - a1 a2^dag)/(2i)."""
    if state.modes != 2:
        raise ParameterError("J2 moments require a two-mode state")
    if abs(state.norm_sq() - 1.0) > 1e-9:
        raise NormalizationError("J2 moments require a normalized state")
    psi = state.amps
    d1, d2 = psi.shape
    up = np.zeros((d1 + 1, d2 + 1), dtype=np.complex128)
    dn = np.zeros((d1 + 1, d2 + 1), dtype=np.complex128)
    # (a1^dag a2 psi)[k, l] = sqrt(k (l+1)) psi[k-1, l+1]
    row_up = np.sqrt(np.arange(1, d1 + 1))      # sqrt(k) for output rows k = 1..d1
    col_up = np.sqrt(np.arange(1, d2))          # sqrt(l+1) for output cols l = 0..d2-2
    up[1:d1 + 1, 0:d2 - 1] = row_up[:, None] * col_up[None, :] * psi[0:d1, 1:d2]
    # (a1 a2^dag psi)[k, l] = sqrt((k+1) l) psi[k+1, l-1]
    row_dn = np.sqrt(np.arange(1, d1))          # sqrt(k+1) for k = 0..d1-2
    col_dn = np.sqrt(np.arange(1, d2 + 1))      # sqrt(l) for l = 1..d2
    dn[0:d1 - 1, 1:d2 + 1] = row_dn[:, None] * col_dn[None, :] * psi[1:d1, 0:d2]
    j2psi = (up - dn) / 2j
    pad = np.zeros_like(j2psi)
    pad[:d1, :d2] = psi
    j2 = float(np.vdot(pad, j2psi).real)
    j2sq = float(np.vdot(j2psi, j2psi).real)
    return j2, j2sq


def _displacement(beta: complex, dim: int) -> np.ndarray:
    """Matrix elements <n|D(beta)|m> via Cahill's Laguerre closed form."""
    n = np.arange(dim)
    x = abs(beta) ** 2
    ln_fact = gammaln(n + 1.0)
    out = np.zeros((dim, dim), dtype=np.complex128)
    for nn in range(dim):
        for mm in range(dim):
            if nn >= mm:
                pref = math.exp(0.5 * (ln_fact[mm] - ln_fact[nn]))
                out[nn, mm] = (pref * beta ** (nn - mm)
                               * eval_genlaguerre(mm, nn - mm, x))
            else:
                pref = math.exp(0.5 * (ln_fact[nn] - ln_fact[mm]))
                out[nn, mm] = (pref * (-beta.conjugate()) ** (mm - nn)
                               * eval_genlaguerre(nn, mm - nn, x))
    return out * math.exp(-x / 2.0)


def wigner_point(state: FockState, point) -> float:
    """Wigner function at a phase-space point, via displaced parity:
    W = (1/pi^M) <D(2 alpha) Pi> with alpha_i = (q_i + i p_i)/sqrt(2)."""
    if abs(state.norm_sq() - 1.0) > 1e-9:
        raise NormalizationError("Wigner evaluation requires a normalized state")
    if len(point) != 2 * state.modes:
        raise ParameterError(
            f"point needs {2 * state.modes} coordinates for {state.modes} modes")
    kernels = []
    for i in range(state.modes):
        q, p = point[2 * i], point[2 * i + 1]
        alpha = (q + 1j * p) / math.sqrt(2.0)
        disp = _displacement(2.0 * alpha, state.dims[i])
        signs = np.ones(state.dims[i])
        signs[1::2] = -1.0
        kernels.append(disp * signs[None, :])
    psi = state.amps
    if state.modes == 1:
        val = np.vdot(psi, kernels[0] @ psi) / math.pi
    else:
        val = np.vdot(psi, kernels[0] @ psi @ kernels[1].T) / math.pi ** 2
    if abs(val.imag) > 1e-10 * max(1.0, abs(val.real)):
        raise ArithmeticError(f"Wigner value carries imaginary residue {val.imag:.2e}")
    return float(val.real)


def annihilate(state: FockState, mode: int) -> FockState:
    """Apply the annihilation operator on one mode (result unnormalized)."""
    arr = np.moveaxis(state.amps, mode, 0)
    d = arr.shape[0]
    out = np.zeros_like(arr)
    factors = np.sqrt(np.arange(1, d)).reshape((-1,) + (1,) * (arr.ndim - 1))
    out[:d - 1] = factors * arr[1:]
    return FockState(np.moveaxis(out, 0, mode))


__all__ = [
    "FockState",
    "default_cutoff",
    "tmsv_state",
    "beamsplitter_apply",
    "attach_fock",
    "herald",
    "prepare_ng_state",
    "mzi_apply",
    "parity_expect",
    "j2_moments",
    "wigner_point",
    "annihilate",
]
