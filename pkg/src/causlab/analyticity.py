"""Upper-half-plane singularity scan via the argument principle.

Einstein causality of slab transmission is equivalent to tau being
analytic for Im zeta > 0.  tau = 2 e^{-i zeta L} / D(zeta) with an
entire-in-epsilon denominator D (see the slab module), so the scan
certifies two functions separately over a rectangle:

* epsilon itself -- its upper-half-plane zeros are the branch points of
  eta (where the analytic-continuation argument for tau breaks down),
  its poles would be outright acausal response;
* D -- its zeros are poles of tau (self-oscillating slab modes).

Scanning tau directly would be ill-defined across a branch cut; the
even-in-eta denominator avoids that entirely.

Each lattice cell's boundary winding number is the number of enclosed
zeros minus poles.  Phase increments between boundary samples are kept
below pi/2 by adaptive edge subdivision, and every increment must agree
with the sum of its own two half increments -- a full hidden turn
within one step (which slab denominators produce just above a
resonance) is caught as a 2 pi mismatch.  Cells with nonzero winding
are subdivided to depth 8 and the surviving candidates Newton-polished
with a numeric derivative, keeping the locator independent of any
closed form.  A zero sitting exactly on a lattice line would defeat
the edge subdivision, so the scan retries with slightly stretched
lattices before reporting an unresolved cell.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .dielectric import OscillatorSet, Tabulated, Vacuum, eval_epsilon
from .errors import UnsupportedModelError, WindingResolutionError
from .refraction import BranchPoint, find_branch_points, reference_scale
from .slab import SlabConfig, _scattering

__all__ = [
    "ScanRegion",
    "DenominatorZero",
    "SingularityReport",
    "default_region",
    "scan_upper_half_plane",
    "certify",
]

#: Maximum phase increment accepted between adjacent boundary samples.
PHASE_LIMIT = 0.5 * math.pi

#: Cell refinement depth (halvings per axis) before polishing.
MAX_DEPTH = 8

#: Edge subdivision depth before declaring a zero stuck on the edge.
MAX_EDGE_DEPTH = 30

#: Deterministic lattice stretch factors for the on-edge retry, in cells.
RETRY_STRETCH = (0.0, 0.2137, -0.1618)


@dataclass(frozen=True)
class ScanRegion:
    """Axis-aligned rectangle strictly inside the upper half plane."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self) -> None:
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError("degenerate scan region")
        if self.im_min <= 0:
            raise ValueError("scan region must sit strictly above the real axis")

    def contains(self, z: complex, pad: float = 0.0) -> bool:
        return (
            self.re_min - pad <= z.real <= self.re_max + pad
            and self.im_min - pad <= z.imag <= self.im_max + pad
        )


@dataclass(frozen=True)
class DenominatorZero:
    """A zero of the transmission denominator: a pole of tau."""

    location: complex
    multiplicity: int = 1


@dataclass(frozen=True)
class SingularityReport:
    """Everything the scan learned about the region."""

    region: ScanRegion
    resolution: int
    branch_points: list[BranchPoint]
    denominator_zeros: list[DenominatorZero]
    unresolved: list[ScanRegion] = field(default_factory=list)
    eps_winding_total: int = 0
    denominator_winding_total: int = 0
    cell_edges_re: Optional[np.ndarray] = field(default=None, repr=False)
    cell_edges_im: Optional[np.ndarray] = field(default=None, repr=False)
    eps_windings: Optional[np.ndarray] = field(default=None, repr=False)
    denominator_windings: Optional[np.ndarray] = field(default=None, repr=False)


def certify(report: SingularityReport) -> bool:
    """True iff the region is clean: no singularities, all windings zero."""
    return (
        not report.branch_points
        and not report.denominator_zeros
        and not report.unresolved
        and report.eps_winding_total == 0
        and report.denominator_winding_total == 0
    )


def default_region(model, omega_ref: Optional[float] = None) -> ScanRegion:
    """[-4 w_top, 4 w_top] x [1e-6 w_ref, 4 w_top] per the scan convention."""
    top = reference_scale(model)
    ref = omega_ref if omega_ref is not None else top
    return ScanRegion(-4.0 * top, 4.0 * top, 1e-6 * ref, 4.0 * top)


class _EdgeZero(Exception):
    """Internal: phase subdivision collapsed; a zero sits on this edge."""


def _osc_small(osc, z0: complex, z1: complex) -> bool:
    """Has the oscillation coordinate moved less than the phase limit?

    `osc` maps z to the complex phase-rate integral w(z) (for slab
    denominators, zeta * eta * L); the coordinate is defined up to a
    sign, so the increment is measured in the closer gauge.
    """
    if osc is None:
        return True
    w0, w1 = osc(z0), osc(z1)
    return min(abs(w1 - w0), abs(w1 + w0)) < PHASE_LIMIT


def _edge_phase(
    f: Callable[[complex], complex],
    z0: complex,
    z1: complex,
    v0: complex,
    v1: complex,
    osc=None,
    depth: int = 0,
) -> float:
    """Continuous phase change of f from z0 to z1, by verified bisection.

    A small sampled increment is not proof of a small phase change: the
    phase can wind full extra turns within one step and land back near
    where it started (slab denominators do exactly that just above a
    resonance).  Two defenses: an increment is only accepted when it
    agrees with the sum of its own two half increments, all three small
    (aliasing usually shows up as a 2 pi mismatch), and -- decisively,
    when an oscillation coordinate is supplied -- the step must satisfy
    `_osc_small`.  A step with |delta w| < pi/2 holds at most one zero
    of a two-beam denominator (zeros sit ~pi apart in w), so its true
    phase change stays below 3 pi/2 and the principal value cannot be
    off by a full turn once it tests small.
    """
    if v0 == 0 or v1 == 0:
        raise _EdgeZero
    if depth >= MAX_EDGE_DEPTH:
        raise _EdgeZero
    zm = 0.5 * (z0 + z1)
    vm = f(zm)
    if vm == 0:
        raise _EdgeZero
    inc = cmath.phase(v1 / v0)
    half0 = cmath.phase(vm / v0)
    half1 = cmath.phase(v1 / vm)
    if (
        abs(inc) < PHASE_LIMIT
        and abs(half0) < PHASE_LIMIT
        and abs(half1) < PHASE_LIMIT
        and round((half0 + half1 - inc) / (2.0 * math.pi)) == 0
        and _osc_small(osc, z0, z1)
    ):
        return inc
    return _edge_phase(f, z0, zm, v0, vm, osc, depth + 1) + _edge_phase(
        f, zm, z1, vm, v1, osc, depth + 1
    )


def _cell_winding(f, corners, values, osc=None) -> int:
    """Winding of f around a rectangle given its corner values (ccw)."""
    total = 0.0
    for k in range(4):
        z0, z1 = corners[k], corners[(k + 1) % 4]
        v0, v1 = values[k], values[(k + 1) % 4]
        total += _edge_phase(f, z0, z1, v0, v1, osc)
    w = round(total / (2.0 * math.pi))
    if abs(total / (2.0 * math.pi) - w) > 0.05:
        raise _EdgeZero  # inconsistent circulation: treat as unresolved
    return int(w)


def _polish(f, z: complex, step_scale: float) -> Optional[complex]:
    """Newton with a central-difference derivative; None on failure."""
    h = max(step_scale, 1e-12) * 1e-3
    for _ in range(80):
        val = f(z)
        dval = (f(z + h) - f(z - h)) / (2.0 * h)
        if dval == 0:
            return None
        step = val / dval
        z = z - step
        if abs(step) < 1e-13 * max(1.0, abs(z)):
            return z
        h = min(h, max(abs(step), 1e-14))
    return None


def _refine_cell(
    f,
    rect: tuple[float, float, float, float],
    winding: int,
    depth: int,
    found: list[tuple[complex, int]],
    unresolved: list[ScanRegion],
    osc=None,
) -> None:
    """Recursively localize the zeros/poles responsible for a winding."""
    re0, re1, im0, im1 = rect
    if depth >= MAX_DEPTH:
        center = complex(0.5 * (re0 + re1), 0.5 * (im0 + im1))
        size = max(re1 - re0, im1 - im0)
        corners = [
            complex(re0, im0),
            complex(re1, im0),
            complex(re1, im1),
            complex(re0, im1),
        ]
        scale = max(abs(f(c)) for c in corners)
        if winding > 0:
            z = _polish(f, center, size)
            if z is not None and abs(f(z)) <= 1e-9 * max(scale, 1e-30):
                found.append((z, winding))
                return
        else:
            # a pole: polish on the reciprocal instead
            z = _polish(lambda w: 1.0 / f(w), center, size)
            if z is not None:
                found.append((z, winding))
                return
        unresolved.append(ScanRegion(re0, re1, im0, im1))
        return

    rem = 0.5 * (re0 + re1)
    imm = 0.5 * (im0 + im1)
    subs = [
        (re0, rem, im0, imm),
        (rem, re1, im0, imm),
        (re0, rem, imm, im1),
        (rem, re1, imm, im1),
    ]
    child_sum = 0
    children = []
    try:
        for sub in subs:
            corners = [
                complex(sub[0], sub[2]),
                complex(sub[1], sub[2]),
                complex(sub[1], sub[3]),
                complex(sub[0], sub[3]),
            ]
            values = [f(c) for c in corners]
            w = _cell_winding(f, corners, values, osc)
            child_sum += w
            if w != 0:
                children.append((sub, w))
    except _EdgeZero:
        unresolved.append(ScanRegion(re0, re1, im0, im1))
        return
    if child_sum != winding:
        unresolved.append(ScanRegion(re0, re1, im0, im1))
        return
    for sub, w in children:
        _refine_cell(f, sub, w, depth + 1, found, unresolved, osc)


def _scan_function(
    f_scalar,
    f_vector,
    region: ScanRegion,
    resolution: int,
    osc_scalar=None,
    osc_vector=None,
):
    """Lattice windings of one function plus localized zeros/poles.

    Returns (windings array, found [(z, winding)], unresolved regions,
    re edges, im edges).  Raises _EdgeZero only through the unresolved
    list, never outward.  osc_scalar/osc_vector optionally supply the
    oscillation coordinate (see `_osc_small`) that forces subdivision
    of edges where the function turns faster than the samples can see.
    """
    res = resolution
    re_edges = np.linspace(region.re_min, region.re_max, res + 1)
    im_edges = np.linspace(region.im_min, region.im_max, res + 1)
    zz = re_edges[None, :] + 1j * im_edges[:, None]
    vals = f_vector(zz)

    # midpoint samples of every lattice edge, for the aliasing check
    re_mid = 0.5 * (re_edges[:-1] + re_edges[1:])
    im_mid = 0.5 * (im_edges[:-1] + im_edges[1:])
    zz_hm = re_mid[None, :] + 1j * im_edges[:, None]
    zz_vm = re_edges[None, :] + 1j * im_mid[:, None]
    vals_hm = f_vector(zz_hm)
    vals_vm = f_vector(zz_vm)

    with np.errstate(divide="ignore", invalid="ignore"):
        inc_h = np.angle(vals[:, 1:] / vals[:, :-1])
        inc_v = np.angle(vals[1:, :] / vals[:-1, :])
        half_h0 = np.angle(vals_hm / vals[:, :-1])
        half_h1 = np.angle(vals[:, 1:] / vals_hm)
        half_v0 = np.angle(vals_vm / vals[:-1, :])
        half_v1 = np.angle(vals[1:, :] / vals_vm)

    def _suspect(inc, half0, half1):
        wrapped = np.rint((half0 + half1 - inc) / (2.0 * math.pi)) != 0
        big = (
            (np.abs(inc) >= PHASE_LIMIT)
            | (np.abs(half0) >= PHASE_LIMIT)
            | (np.abs(half1) >= PHASE_LIMIT)
        )
        finite = np.isfinite(inc) & np.isfinite(half0) & np.isfinite(half1)
        return big | wrapped | ~finite

    def _osc_wide(w0, w1):
        return np.minimum(np.abs(w1 - w0), np.abs(w1 + w0)) >= PHASE_LIMIT

    suspect_h = _suspect(inc_h, half_h0, half_h1)
    suspect_v = _suspect(inc_v, half_v0, half_v1)
    if osc_vector is not None:
        ww = osc_vector(zz)
        ww_hm = osc_vector(zz_hm)
        ww_vm = osc_vector(zz_vm)
        suspect_h |= _osc_wide(ww[:, :-1], ww_hm) | _osc_wide(ww_hm, ww[:, 1:])
        suspect_v |= _osc_wide(ww[:-1, :], ww_vm) | _osc_wide(ww_vm, ww[1:, :])

    unresolved: list[ScanRegion] = []

    # recompute edges whose single-step increment is not trustworthy
    def _fix(inc, mask, horizontal: bool):
        for iy, ix in np.argwhere(mask):
            if horizontal:
                z0 = complex(re_edges[ix], im_edges[iy])
                z1 = complex(re_edges[ix + 1], im_edges[iy])
                v0, v1 = vals[iy, ix], vals[iy, ix + 1]
            else:
                z0 = complex(re_edges[ix], im_edges[iy])
                z1 = complex(re_edges[ix], im_edges[iy + 1])
                v0, v1 = vals[iy, ix], vals[iy + 1, ix]
            inc[iy, ix] = _edge_phase(f_scalar, z0, z1, v0, v1, osc_scalar)

    _fix(inc_h, suspect_h, True)
    _fix(inc_v, suspect_v, False)

    # counterclockwise circulation per cell
    circulation = (
        inc_h[:-1, :]          # bottom, left to right
        + inc_v[:, 1:]         # right, bottom to top
        - inc_h[1:, :]         # top, right to left
        - inc_v[:, :-1]        # left, top to bottom
    )
    windings = np.rint(circulation / (2.0 * math.pi)).astype(int)
    if np.max(np.abs(circulation / (2.0 * math.pi) - windings)) > 0.05:
        raise _EdgeZero

    found: list[tuple[complex, int]] = []
    for iy, ix in np.argwhere(windings != 0):
        rect = (
            float(re_edges[ix]),
            float(re_edges[ix + 1]),
            float(im_edges[iy]),
            float(im_edges[iy + 1]),
        )
        _refine_cell(
            f_scalar, rect, int(windings[iy, ix]), 0, found, unresolved, osc_scalar
        )
    return windings, found, unresolved, re_edges, im_edges


def scan_upper_half_plane(
    slab: SlabConfig,
    region: Optional[ScanRegion] = None,
    resolution: int = 48,
    omega_ref: Optional[float] = None,
) -> SingularityReport:
    """Scan a rectangle of the upper half plane for singularities of tau.

    Returns the merged report: branch points of eta (epsilon zeros/poles
    from both the closed form and the winding scan) and zeros of the
    transmission denominator.  Tabulated models are refused -- a table
    on the real axis does not determine the continuation.
    """
    model = slab.model
    if isinstance(model, Tabulated):
        raise UnsupportedModelError(
            "the upper-half-plane scan needs an analytic model; tabulated "
            "data does not determine the off-axis continuation"
        )
    if resolution < 32:
        raise ValueError("scan resolution must be >= 32")
    if region is None:
        region = default_region(model, omega_ref)

    def eps_scalar(z: complex) -> complex:
        return complex(eval_epsilon(model, z))

    def eps_vector(zz: np.ndarray) -> np.ndarray:
        return np.asarray(eval_epsilon(model, zz), dtype=complex)

    def den_scalar(z: complex) -> complex:
        return complex(_scattering(slab, z)[1])

    def den_vector(zz: np.ndarray) -> np.ndarray:
        return np.asarray(_scattering(slab, zz)[1], dtype=complex)

    # oscillation coordinate of the denominator: D is a combination of
    # e^{+-i zeta eta L}, so its fast phase is bounded by increments of
    # this (sign-ambiguous) w
    def osc_scalar(z: complex) -> complex:
        return complex(z * np.sqrt(eval_epsilon(model, z)) * slab.thickness)

    def osc_vector(zz: np.ndarray) -> np.ndarray:
        return zz * np.sqrt(np.asarray(eval_epsilon(model, zz), dtype=complex)) * slab.thickness

    cell = (region.re_max - region.re_min) / resolution
    completed = None
    for stretch in RETRY_STRETCH:
        trial = ScanRegion(
            region.re_min - abs(stretch) * cell,
            region.re_max + (stretch if stretch > 0 else abs(stretch) * 0.73) * cell,
            region.im_min,
            region.im_max + abs(stretch) * 0.61 * cell,
        ) if stretch else region
        try:
            eps_w, eps_found, eps_unres, re_edges, im_edges = _scan_function(
                eps_scalar, eps_vector, trial, resolution
            )
            den_w, den_found, den_unres, _, _ = _scan_function(
                den_scalar, den_vector, trial, resolution, osc_scalar, osc_vector
            )
        except _EdgeZero:
            continue
        completed = (eps_w, eps_found, eps_unres, den_w, den_found, den_unres,
                     re_edges, im_edges, trial)
        if not (eps_unres or den_unres):
            break
    if completed is None:
        raise WindingResolutionError(
            "a zero sits on every trial lattice; cannot resolve windings"
        )

    eps_w, eps_found, eps_unres, den_w, den_found, den_unres, re_edges, im_edges, trial = completed

    # merge scan-found epsilon zeros/poles with the closed form
    scale = reference_scale(model)
    dedup_tol = 1e-8 * scale
    branch_points: list[BranchPoint] = []
    if isinstance(model, OscillatorSet):
        closed = [
            p
            for p in find_branch_points(model)
            if trial.contains(p.location)
        ]
    else:
        closed = []
    branch_points.extend(closed)
    for z, w in eps_found:
        kind = "zero_of_epsilon" if w > 0 else "pole_of_epsilon"
        if not any(
            abs(z - p.location) <= dedup_tol and p.kind == kind
            for p in branch_points
        ):
            branch_points.append(BranchPoint(z, kind, abs(w)))
    branch_points.sort(key=lambda p: (p.location.real, p.location.imag))

    den_zeros = [
        DenominatorZero(z, w) for z, w in sorted(den_found, key=lambda t: (t[0].real, t[0].imag)) if w > 0
    ]

    return SingularityReport(
        region=trial,
        resolution=resolution,
        branch_points=branch_points,
        denominator_zeros=den_zeros,
        unresolved=list(eps_unres) + list(den_unres),
        eps_winding_total=int(np.sum(eps_w)),
        denominator_winding_total=int(np.sum(den_w)),
        cell_edges_re=re_edges,
        cell_edges_im=im_edges,
        eps_windings=eps_w,
        denominator_windings=den_w,
    )
