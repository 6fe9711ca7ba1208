"""Complex refractive index with a path-continuity branch choice.

eta = sqrt(epsilon) is double valued; the physical branch is fixed by
analytic continuation from high frequency, where every medium looks like
vacuum (eta -> +1).  `eval_eta` walks a straight path from i*R_big down
to the query point, halving the step whenever epsilon changes too fast,
and keeps the square root continuous along the way.

Branch points of eta are the zeros and poles of epsilon.  Passive media
keep them in the lower half plane; an inverted (gain) medium with
W^2 < |f| wp^2 pushes a zero of epsilon onto the positive imaginary
axis, and any continuation path to points below it must cross the cut.
Such a crossing is reported through `BranchCrossingWarning` -- the value
is still returned, with the sign tie at the cut resolved toward the
principal square root (deterministically).
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .dielectric import (
    DielectricModel,
    OscillatorSet,
    Tabulated,
    Vacuum,
    eval_epsilon,
    model_top_frequency,
)
from .errors import (
    BranchCrossingWarning,
    BranchPointProximityError,
    UnsupportedModelError,
)

__all__ = [
    "BranchPoint",
    "find_branch_points",
    "eval_eta",
    "eta_on_real_grid",
    "reference_scale",
]

#: Multiple of the model scale at which the continuation path starts.
R_BIG_FACTOR = 1.0e4

#: Relative epsilon change per accepted continuation step.
MAX_REL_STEP = 0.1

#: Absolute floor in the step criterion; near a zero of epsilon the
#: relative change is O(1) for any step, so a pure relative rule would
#: never terminate exactly where the cut must be crossed.
ABS_FLOOR = 1e-3

#: Queries closer than this (times the reference scale) to a branch
#: point are refused.
BRANCH_TOL_FACTOR = 1e-6


@dataclass(frozen=True)
class BranchPoint:
    """A zero or pole of epsilon: a branch point of sqrt(epsilon)."""

    location: complex
    kind: str  # "zero_of_epsilon" | "pole_of_epsilon"
    multiplicity: int = 1

    def __post_init__(self) -> None:
        if self.kind not in ("zero_of_epsilon", "pole_of_epsilon"):
            raise ValueError(f"unknown branch point kind {self.kind!r}")
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be >= 1")

    @property
    def in_upper_half_plane(self) -> bool:
        """Whether this point breaks upper-half-plane analyticity."""
        return self.location.imag > 0.0


def reference_scale(model: DielectricModel) -> float:
    """Frequency scale used for proximity tolerances and path anchoring."""
    top = model_top_frequency(model)
    return top if top > 0 else 1.0


def _epsilon_fraction(model: OscillatorSet):
    """Numerator/denominator polynomial coefficients of epsilon (descending).

    epsilon = N(zeta)/D(zeta) with D = prod_j D_j,
    D_j = -(zeta^2 + 2i g_j zeta - W_j^2), and
    N = D + wp^2 * sum_j f_j * prod_{k != j} D_k.
    """
    wp2 = model.plasma_frequency**2
    factors = [
        np.array([-1.0, -2j * r.damping, r.frequency**2], dtype=complex)
        for r in model.resonances
    ]
    den = np.array([1.0 + 0j])
    for f in factors:
        den = np.polymul(den, f)
    num = den.copy()
    for j, r in enumerate(model.resonances):
        partial = np.array([1.0 + 0j])
        for k, f in enumerate(factors):
            if k != j:
                partial = np.polymul(partial, f)
        num = np.polyadd(num, r.strength * wp2 * partial)
    return num, den


def _polish_root(model: OscillatorSet, z: complex, steps: int = 3) -> complex:
    """A few Newton steps on epsilon itself to sharpen a zero estimate."""
    wp2 = model.plasma_frequency**2
    for _ in range(steps):
        val = eval_epsilon(model, z)
        dval = 0.0 + 0.0j
        for r in model.resonances:
            denom = r.frequency**2 - 2j * z * r.damping - z * z
            dval += r.strength * wp2 * (2j * r.damping + 2.0 * z) / denom**2
        if dval == 0:
            break
        step = val / dval
        z = z - step
        if abs(step) < 1e-15 * max(1.0, abs(z)):
            break
    return z


def _cluster_roots(roots: Sequence[complex], tol: float):
    """Group near-coincident roots, returning (representative, count) pairs."""
    remaining = list(roots)
    clusters = []
    while remaining:
        z = remaining.pop(0)
        group = [z]
        keep = []
        for other in remaining:
            if abs(other - z) <= tol:
                group.append(other)
            else:
                keep.append(other)
        remaining = keep
        rep = sum(group) / len(group)
        clusters.append((rep, len(group)))
    return clusters


def find_branch_points(
    model: DielectricModel,
    region: Optional[tuple[float, float, float, float]] = None,
) -> list[BranchPoint]:
    """All zeros and poles of epsilon, optionally filtered to a region.

    Works in closed form for oscillator sets (companion-matrix roots of
    the rational numerator/denominator, Newton-polished on epsilon).
    `region` is (re_min, re_max, im_min, im_max).  Vacuum has none;
    tabulated models carry no off-axis information and are refused.
    """
    if isinstance(model, Vacuum):
        return []
    if isinstance(model, Tabulated):
        raise UnsupportedModelError(
            "branch points of a tabulated model are not determined by "
            "real-axis samples"
        )
    if not isinstance(model, OscillatorSet):
        raise TypeError(f"not a dielectric model: {model!r}")

    num, den = _epsilon_fraction(model)
    scale = reference_scale(model)
    tol = 1e-9 * scale

    zeros = [ _polish_root(model, complex(z)) for z in np.roots(num) ]
    poles = [complex(z) for z in np.roots(den)]

    points: list[BranchPoint] = []
    for rep, count in _cluster_roots(zeros, tol):
        # local magnitude: how much epsilon moves over one tolerance length
        probe = 1e-3 * scale
        local = abs(eval_epsilon(model, rep + probe) - eval_epsilon(model, rep))
        if abs(eval_epsilon(model, rep)) > 1e-9 * max(1.0, local * scale / probe):
            raise ArithmeticError(
                f"root polishing failed to confirm a zero of epsilon at {rep}"
            )
        points.append(BranchPoint(rep, "zero_of_epsilon", count))
    for rep, count in _cluster_roots(poles, tol):
        points.append(BranchPoint(rep, "pole_of_epsilon", count))

    if region is not None:
        re_min, re_max, im_min, im_max = region
        points = [
            p
            for p in points
            if re_min <= p.location.real <= re_max
            and im_min <= p.location.imag <= im_max
        ]
    points.sort(key=lambda p: (p.location.real, p.location.imag))
    return points


def _choose_sign(candidate: complex, previous: complex) -> tuple[complex, bool]:
    """Pick +/-candidate closest to previous; ties go to the principal root.

    Returns (choice, tie_detected).  A tie is the numerical signature of
    stepping straight through a zero of epsilon (both signs equidistant),
    i.e. of crossing the cut.
    """
    d_plus = abs(candidate - previous)
    d_minus = abs(-candidate - previous)
    spread = d_plus + d_minus
    if spread == 0.0 or abs(d_plus - d_minus) <= 1e-3 * spread:
        return candidate, True  # principal branch, recorded as a tie
    return (candidate, False) if d_plus < d_minus else (-candidate, False)


def eval_eta(
    model: DielectricModel,
    zeta: complex,
    branch_points: Optional[Sequence[BranchPoint]] = None,
    omega_ref: Optional[float] = None,
) -> complex:
    """sqrt(epsilon) at zeta, branch fixed by continuity from i*R_big.

    The continuation path is the straight segment from i*R_big (where
    eta ~ +1) to zeta, stepped adaptively so epsilon changes by less
    than 10% per step.  A query within 1e-6 * omega_ref of a branch
    point raises; a path passing that close to one (or crossing the
    cut) emits `BranchCrossingWarning` and still returns the value.
    """
    zeta = complex(zeta)
    if isinstance(model, Vacuum):
        return 1.0 + 0.0j

    scale = omega_ref if omega_ref is not None else reference_scale(model)
    tol = BRANCH_TOL_FACTOR * scale
    if branch_points is None and isinstance(model, OscillatorSet):
        branch_points = find_branch_points(model)
    branch_points = branch_points or []
    locations = np.array([p.location for p in branch_points], dtype=complex)

    if locations.size and np.min(np.abs(locations - zeta)) < tol:
        raise BranchPointProximityError(
            f"query {zeta} lies within {tol:g} of a branch point of eta"
        )

    anchor = 1j * R_BIG_FACTOR * scale
    eta = cmath.sqrt(eval_epsilon(model, anchor))  # principal, ~ +1
    crossed = False
    near_cut = False

    t = 0.0
    dt = 0.125
    eps_here = eval_epsilon(model, anchor)
    segment = zeta - anchor
    while t < 1.0:
        dt = min(dt, 1.0 - t)
        while True:
            z_next = anchor + (t + dt) * segment
            eps_next = eval_epsilon(model, z_next)
            if abs(eps_next - eps_here) <= MAX_REL_STEP * max(
                abs(eps_here), abs(eps_next), ABS_FLOOR
            ):
                break
            dt *= 0.5
            if dt < 1e-12:
                raise ArithmeticError(
                    "continuation step collapsed; epsilon varies "
                    f"discontinuously near {z_next}"
                )
        candidate = cmath.sqrt(eps_next)
        eta, tie = _choose_sign(candidate, eta)
        crossed = crossed or tie
        if locations.size and np.min(np.abs(locations - z_next)) < max(
            tol, 0.5 * abs(dt * segment)
        ):
            near_cut = True
        t += dt
        eps_here = eps_next
        dt = min(dt * 2.0, 0.125)

    if crossed or near_cut:
        warnings.warn(
            BranchCrossingWarning(
                f"continuity path from {anchor:.3g} to {zeta} passed a "
                "branch point of eta; value taken across the cut"
            ),
            stacklevel=2,
        )
    return eta


def eta_on_real_grid(
    model: DielectricModel,
    omegas: np.ndarray,
    branch_points: Optional[Sequence[BranchPoint]] = None,
) -> np.ndarray:
    """Branch-continued eta along an ascending real-frequency grid.

    Seeds the branch at the top sample with `eval_eta` (one continuation
    path) and sweeps the sign choice down the grid, which matches the
    per-point result wherever the grid does not straddle a cut.
    """
    omegas = np.asarray(omegas, dtype=float)
    if isinstance(model, Vacuum):
        return np.ones(omegas.shape, dtype=complex)
    eps = np.asarray(eval_epsilon(model, omegas + 0j), dtype=complex)
    principal = np.sqrt(eps)
    out = np.empty_like(principal)
    if isinstance(model, Tabulated):
        # no off-axis continuation available; at the top of the table the
        # medium is assumed vacuum-like, so the principal root seeds it
        seed = complex(principal[-1])
    else:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", BranchCrossingWarning)
            seed = eval_eta(model, complex(omegas[-1]), branch_points=branch_points)
    out[-1] = seed
    # decide the sign of each sample by continuity with its neighbour above
    prev = seed
    for i in range(omegas.size - 2, -1, -1):
        cand, _ = _choose_sign(principal[i], prev)
        out[i] = cand
        prev = cand
    return out
