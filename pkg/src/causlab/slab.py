"""Transmission and reflection of a homogeneous slab, and its spectrum.

A slab of thickness L (units of c / reference frequency, c = 1) sits in
vacuum.  Field matching at both faces gives, with w = zeta*L and
k = zeta*eta,

    tau(zeta) = 2 eta e^{-i w} / [2 eta cos(k L) - i (1 + eta^2) sin(k L)]
    rho(zeta) = i (eta^2 - 1) sin(k L) / [same denominator]

The e^{-i w} factor references transmission to the vacuum transit, so
tau -> 1 for vacuum or L -> 0.  Both formulas are even under
eta -> -eta, so they are evaluated here through the single-valued
combinations cos(w*sqrt(eps)), sqrt(eps)*sin(w*sqrt(eps)) and
sin(w*sqrt(eps))/sqrt(eps), which are entire in eps: no square-root
branch has to be chosen, on or off the real axis.

A literal textbook variant of the transmission formula (selected by the
CLI flag --literal-eq17) is kept for comparison; it is odd in eta, so it
does require the branch-continued index, and it does not normalize to 1
at zero thickness (tau_literal(L=0) = 2 eta / (1 + eta^2)).  That known
discrepancy is why field matching is the primary formula.

`transmission_via_transfer_matrix` is the independent check: assemble
the 2x2 field-transfer matrix across the slab and solve the scattering
linear system.  The two routes share no algebra beyond eps itself.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .dielectric import (
    DielectricModel,
    FrequencyGrid,
    OscillatorSet,
    Vacuum,
    eval_epsilon,
)
from .errors import (
    BranchCrossingWarning,
    DenominatorZeroError,
    PhaseUnwrapError,
)
from .refraction import BranchPoint, eval_eta, eta_on_real_grid, find_branch_points

__all__ = [
    "SlabConfig",
    "SpectralResponse",
    "transmission",
    "reflection",
    "transfer_matrix",
    "transmission_via_transfer_matrix",
    "evaluate_spectrum",
    "group_delay",
    "write_spectrum_csv",
]

#: |denominator| below this times the numerator scale raises the guard.
DENOM_GUARD = 1e-14

#: Unwrapped phase increments beyond this trip the unwrap guard.
PHASE_STEP_LIMIT = 0.5 * math.pi


@dataclass(frozen=True)
class SlabConfig:
    """A dielectric model plus a slab thickness (c = 1 units)."""

    model: DielectricModel
    thickness: float

    def __post_init__(self) -> None:
        if self.thickness < 0:
            raise ValueError("slab thickness must be >= 0")


def _even_trig(eps: np.ndarray, w: np.ndarray):
    """cos(w q), q sin(w q), sin(w q)/q for q = sqrt(eps), branch-free.

    All three are even in q, hence single valued in eps; sin(w q)/q is
    computed through sinc so eps = 0 is regular (limit w).
    """
    q = np.sqrt(np.asarray(eps, dtype=complex))
    arg = w * q
    c = np.cos(arg)
    # complex division inside sinc overflows for near-subnormal arguments,
    # so take the small-angle limit sin(w q)/(w q) = 1 explicitly there
    small = np.abs(arg) < 1e-150
    safe = np.where(small, 1.0, arg)
    s_over = w * np.where(small, 1.0, np.sinc(safe / np.pi))  # sin(w q)/q
    s_times = eps * s_over  # q * sin(w q)
    return c, s_times, s_over


def _scattering(slab: SlabConfig, zeta):
    """Shared evaluation of (numerator, denominator, rho numerator)."""
    zeta_arr = np.asarray(zeta, dtype=complex)
    w = zeta_arr * slab.thickness
    eps = eval_epsilon(slab.model, zeta_arr)
    c, s_times, s_over = _even_trig(eps, w)
    denom = 2.0 * c - 1j * (s_times + s_over)
    numer = 2.0 * (np.cos(w) - 1j * np.sin(w))  # = 2 e^{-i w}, shares c for vacuum
    rho_numer = 1j * (s_times - s_over)
    return numer, denom, rho_numer


def transmission(slab: SlabConfig, zeta, literal_variant: bool = False):
    """Complex transmission amplitude at (possibly complex) zeta.

    Vacuum and zero thickness give exactly 1.  The denominator-zero
    guard refuses points within 1e-14 of a slab resonance pole.  With
    `literal_variant` the textbook form (odd in eta, no vacuum-transit
    normalization) is evaluated instead; it needs the branch-continued
    index and accepts real frequencies (arrays swept along the grid).
    """
    if literal_variant:
        return _transmission_literal(slab, zeta)
    numer, denom, _ = _scattering(slab, zeta)
    _guard_denominator(numer, denom)
    out = numer / denom
    return complex(out) if np.isscalar(zeta) or out.ndim == 0 else out


def reflection(slab: SlabConfig, zeta):
    """Complex reflection amplitude; sign fixed by the transfer matrix."""
    numer, denom, rho_numer = _scattering(slab, zeta)
    _guard_denominator(numer, denom)
    out = rho_numer / denom
    return complex(out) if np.isscalar(zeta) or out.ndim == 0 else out


def _guard_denominator(numer, denom) -> None:
    bad = np.abs(denom) < DENOM_GUARD * np.abs(numer)
    if np.any(bad):
        where = np.argwhere(np.atleast_1d(bad)).ravel()[0]
        raise DenominatorZeroError(
            f"transmission denominator vanished (sample {int(where)}); "
            "the query sits on a slab resonance pole"
        )


def _transmission_literal(slab: SlabConfig, zeta):
    zeta_arr = np.atleast_1d(np.asarray(zeta, dtype=complex))
    L = slab.thickness
    if zeta_arr.ndim == 1 and zeta_arr.size > 1 and np.all(zeta_arr.imag == 0):
        diffs = np.diff(zeta_arr.real)
        if np.all(diffs > 0):
            eta = eta_on_real_grid(slab.model, zeta_arr.real)
        else:
            eta = np.array([eval_eta(slab.model, z) for z in zeta_arr])
    else:
        eta = np.array([eval_eta(slab.model, z) for z in zeta_arr.ravel()])
        eta = eta.reshape(zeta_arr.shape)
    arg = zeta_arr * eta * L
    denom = (1.0 + eta**2) * np.cos(arg) + 2j * eta * np.sin(arg)
    numer = 2.0 * eta * np.exp(1j * zeta_arr * L)
    _guard_denominator(numer, denom)
    out = numer / denom
    return complex(out[0]) if np.isscalar(zeta) or np.asarray(zeta).ndim == 0 else out


def transfer_matrix(slab: SlabConfig, zeta: complex) -> np.ndarray:
    """2x2 matrix carrying (V, V') across the slab interior.

    Entries use the same even-in-eta combinations as the closed form,
    so no branch choice is involved: M = [[cos kL, sin kL / k],
    [-k sin kL, cos kL]] with k = zeta * eta.
    """
    zeta = complex(zeta)
    L = slab.thickness
    eps = eval_epsilon(slab.model, zeta)
    if zeta == 0:
        return np.array([[1.0 + 0j, L], [0.0j, 1.0 + 0j]])
    c, s_times, s_over = _even_trig(np.asarray(eps), np.asarray(zeta * L))
    return np.array(
        [[complex(c), complex(s_over) / zeta], [-zeta * complex(s_times), complex(c)]]
    )


def transmission_via_transfer_matrix(slab: SlabConfig, zeta: complex):
    """Independent (tau, rho) from the transfer matrix and a linear solve.

    Boundary conditions: V = e^{i zeta z} + rho e^{-i zeta z} on the
    left, V = tau e^{i zeta z} on the right, V and V' continuous.  The
    unknowns (rho, tau e^{i zeta L}) satisfy a 2x2 linear system solved
    numerically -- no shared algebra with the closed form.

    Like any transfer-matrix scheme this loses roughly e^{2d} in relative
    accuracy at optical depth d = |Im(zeta * eta * L)|: the matrix entries
    grow like e^{d} while tau shrinks like e^{-d}.  Prefer the closed form
    for opaque slabs; this route is the cross-check.
    """
    zeta = complex(zeta)
    if zeta == 0:
        return 1.0 + 0.0j, 0.0 + 0.0j
    M = transfer_matrix(slab, zeta)
    ik = 1j * zeta
    # unknowns x = (rho, u) with u = tau * e^{i zeta L}:
    #   u = M00 (1 + rho) + M01 ik (1 - rho)
    #   ik u = M10 (1 + rho) + M11 ik (1 - rho)
    A = np.array(
        [
            [M[0, 0] - ik * M[0, 1], -1.0],
            [M[1, 0] - ik * M[1, 1], -ik],
        ]
    )
    b = np.array([-(M[0, 0] + ik * M[0, 1]), -(M[1, 0] + ik * M[1, 1])])
    rho, u = np.linalg.solve(A, b)
    L = slab.thickness
    tau = u * complex(np.exp(-1j * zeta * L))
    return complex(tau), complex(rho)


@dataclass(frozen=True)
class SpectralResponse:
    """Sampled slab response on a real-frequency grid.

    P = |tau|^2, theta = unwrapped transmission phase (theta(0) fixed by
    real-axis continuity of tau at 0+), t_delay = d theta / d omega by
    finite differences.  `flags` records per-sample problems (the value
    is set to nan) instead of aborting the whole grid.
    """

    grid: FrequencyGrid
    epsilon: np.ndarray = field(repr=False)
    eta: np.ndarray = field(repr=False)
    tau: np.ndarray = field(repr=False)
    rho: np.ndarray = field(repr=False)
    power: np.ndarray = field(repr=False)
    phase: np.ndarray = field(repr=False)
    delay: np.ndarray = field(repr=False)
    flags: dict[int, str] = field(default_factory=dict)


def _stencil_derivative(y: np.ndarray, dx: float) -> np.ndarray:
    """5-point central first derivative, 3-point near edges, 2-point at ends."""
    n = y.size
    out = np.empty(n)
    out[0] = (y[1] - y[0]) / dx
    out[-1] = (y[-1] - y[-2]) / dx
    if n >= 4:
        out[1] = (y[2] - y[0]) / (2.0 * dx)
        out[-2] = (y[-1] - y[-3]) / (2.0 * dx)
    elif n == 3:
        out[1] = (y[2] - y[0]) / (2.0 * dx)
    if n >= 5:
        out[2:-2] = (-y[4:] + 8.0 * y[3:-1] - 8.0 * y[1:-3] + y[:-4]) / (12.0 * dx)
    return out


def evaluate_spectrum(
    slab: SlabConfig,
    grid: FrequencyGrid,
    literal_variant: bool = False,
) -> SpectralResponse:
    """tau, rho, power, phase and group delay across a frequency grid."""
    omegas = grid.omegas
    eps = np.asarray(eval_epsilon(slab.model, omegas + 0j), dtype=complex)
    branch_points = None
    if isinstance(slab.model, OscillatorSet):
        branch_points = find_branch_points(slab.model)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BranchCrossingWarning)
        eta = eta_on_real_grid(slab.model, omegas, branch_points=branch_points)

    flags: dict[int, str] = {}
    numer, denom, rho_numer = _scattering(slab, omegas + 0j)
    bad = np.abs(denom) < DENOM_GUARD * np.abs(numer)
    safe_denom = np.where(bad, 1.0, denom)
    if literal_variant:
        tau = np.asarray(_transmission_literal(slab, omegas + 0j))
    else:
        tau = np.where(bad, np.nan + np.nan * 1j, numer / safe_denom)
    rho = np.where(bad, np.nan + np.nan * 1j, rho_numer / safe_denom)
    for i in np.argwhere(bad).ravel():
        flags[int(i)] = "denominator-zero"

    power = np.abs(tau) ** 2
    raw_phase = np.angle(tau)
    phase = np.unwrap(raw_phase)
    steps = np.diff(phase)
    finite = np.isfinite(steps)
    if np.any(np.abs(steps[finite]) >= PHASE_STEP_LIMIT):
        worst = int(np.nanargmax(np.abs(np.where(finite, steps, 0.0))))
        raise PhaseUnwrapError(
            f"phase jump {steps[worst]:.3f} rad between samples {worst} and "
            f"{worst + 1} exceeds pi/2; refine the frequency grid"
        )
    delay = _stencil_derivative(phase, grid.spacing)
    return SpectralResponse(
        grid=grid,
        epsilon=eps,
        eta=np.asarray(eta),
        tau=tau,
        rho=rho,
        power=power,
        phase=phase,
        delay=delay,
        flags=flags,
    )


def group_delay(response: SpectralResponse, omega: float) -> float:
    """d theta / d omega at omega, interpolated between grid samples.

    omega must lie strictly inside the grid; the stencil cannot be
    trusted at the edges.
    """
    omegas = response.grid.omegas
    if not (omegas[0] < omega < omegas[-1]):
        raise ValueError(
            f"omega = {omega:g} is not strictly inside the grid "
            f"({omegas[0]:g}, {omegas[-1]:g})"
        )
    return float(np.interp(omega, omegas, response.delay))


def write_spectrum_csv(response: SpectralResponse, path: Union[str, Path]) -> None:
    """CSV export: omega,re_tau,im_tau,re_rho,im_rho,P,theta,t_delay."""
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["omega", "re_tau", "im_tau", "re_rho", "im_rho", "P", "theta", "t_delay"]
        )
        for i in range(response.grid.size):
            writer.writerow(
                [
                    repr(float(response.grid.omegas[i])),
                    repr(float(response.tau[i].real)),
                    repr(float(response.tau[i].imag)),
                    repr(float(response.rho[i].real)),
                    repr(float(response.rho[i].imag)),
                    repr(float(response.power[i])),
                    repr(float(response.phase[i])),
                    repr(float(response.delay[i])),
                ]
            )
