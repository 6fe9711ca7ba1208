"""Dielectric response models and dispersion-relation machinery.

Frequency is in radians per unit time with c = 1, so a complex frequency
zeta and a length are directly commensurable.  Three model variants are
supported:

* ``Vacuum``            -- epsilon identically 1,
* ``OscillatorSet``     -- a sum of Lorentz oscillator resonances,
* ``Tabulated``         -- real-axis samples loaded from CSV.

The oscillator form is

    epsilon(zeta) = 1 + sum_j f_j * wp^2 / (W_j^2 - 2i*zeta*g_j - zeta^2)

with strength f_j (sign free: negative strength models an inverted /
gain medium), resonance W_j >= 0, damping g_j >= 0 and plasma frequency
wp > 0.  All poles of a damped resonance sit in the lower half plane at
-i*g_j +/- sqrt(W_j^2 - g_j^2), so passive members are analytic in the
upper half plane by construction.

The module also carries the dispersion-relation tooling used to check
that analyticity numerically: spectral-weight quadrature (`sum_rule`),
passivity sampling (`passivity_check`) and reconstruction of the full
complex response from its absorptive part alone (`kk_reconstruct`).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import numpy as np
from scipy.integrate import simpson

from .errors import (
    PoleEvaluationError,
    PVAlignmentError,
    TailDominanceError,
    UnsupportedModelError,
)

__all__ = [
    "Resonance",
    "Vacuum",
    "OscillatorSet",
    "Tabulated",
    "DielectricModel",
    "FrequencyGrid",
    "eval_epsilon",
    "sum_rule",
    "PassivityResult",
    "passivity_check",
    "kk_reconstruct",
    "kk_roundtrip_error",
    "model_top_frequency",
    "model_min_damping",
]

#: Relative spacing jitter tolerated before a grid is rejected as non-uniform.
_GRID_JITTER = 1e-12

#: Default samples per resonance linewidth for auto-built grids.
DEFAULT_SAMPLES_PER_LINEWIDTH = 16.0

#: Default multiple of the top model frequency covered by auto-built grids.
DEFAULT_MAX_FREQUENCY_FACTOR = 20.0


@dataclass(frozen=True)
class Resonance:
    """One Lorentz oscillator line: strength, centre frequency, damping."""

    strength: float
    frequency: float
    damping: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.strength):
            raise ValueError("resonance strength must be finite")
        if self.frequency < 0:
            raise ValueError("resonance frequency must be >= 0")
        if self.damping < 0:
            raise ValueError("resonance damping must be >= 0")


@dataclass(frozen=True)
class Vacuum:
    """Trivial medium: epsilon(zeta) = 1 for every zeta."""


@dataclass(frozen=True)
class OscillatorSet:
    """Sum of Lorentz resonances sharing one plasma frequency."""

    plasma_frequency: float
    resonances: tuple[Resonance, ...]

    def __post_init__(self) -> None:
        if self.plasma_frequency <= 0:
            raise ValueError("plasma frequency must be > 0")
        if not self.resonances:
            raise ValueError("OscillatorSet needs at least one resonance")
        object.__setattr__(self, "resonances", tuple(self.resonances))

    @property
    def total_strength(self) -> float:
        """Spectral weight sum_j f_j * wp^2 (the sum-rule target)."""
        wp2 = self.plasma_frequency**2
        return wp2 * sum(r.strength for r in self.resonances)


@dataclass(frozen=True)
class Tabulated:
    """Real-axis epsilon samples; evaluation interpolates linearly.

    Negative frequencies are served through the conjugate symmetry
    epsilon(-w) = conj(epsilon(w)); complex queries are refused because
    a table alone does not determine the off-axis continuation.
    """

    omegas: np.ndarray
    values: np.ndarray  # complex epsilon at each omega

    def __post_init__(self) -> None:
        omegas = np.asarray(self.omegas, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if omegas.ndim != 1 or omegas.size < 2:
            raise ValueError("table needs at least two frequency samples")
        if values.shape != omegas.shape:
            raise ValueError("frequency and value columns differ in length")
        if np.any(np.diff(omegas) <= 0):
            raise ValueError("table frequencies must be strictly increasing")
        if omegas[0] < 0:
            raise ValueError("table frequencies must be >= 0")
        omegas.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "omegas", omegas)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_csv(cls, path: Union[str, Path]) -> "Tabulated":
        """Load a table from CSV with header ``omega,re_eps,im_eps``."""
        path = Path(path)
        with path.open(newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or [h.strip() for h in header] != ["omega", "re_eps", "im_eps"]:
                raise ValueError(
                    f"{path}: expected header 'omega,re_eps,im_eps', got {header!r}"
                )
            rows = [(float(a), float(b), float(c)) for a, b, c in reader]
        if not rows:
            raise ValueError(f"{path}: empty table")
        arr = np.array(rows, dtype=float)
        return cls(arr[:, 0], arr[:, 1] + 1j * arr[:, 2])

    def to_csv(self, path: Union[str, Path]) -> None:
        """Write the table back out in the same ``omega,re_eps,im_eps`` form."""
        with Path(path).open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["omega", "re_eps", "im_eps"])
            for w, v in zip(self.omegas, self.values):
                writer.writerow([repr(float(w)), repr(float(v.real)), repr(float(v.imag))])


DielectricModel = Union[Vacuum, OscillatorSet, Tabulated]


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform real-frequency grid starting at zero.

    Invariants enforced at construction: strictly increasing, uniform
    spacing to relative jitter 1e-12, first sample exactly 0.
    """

    omegas: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        omegas = np.asarray(self.omegas, dtype=float)
        if omegas.ndim != 1 or omegas.size < 3:
            raise ValueError("grid needs at least three samples")
        if omegas[0] != 0.0:
            raise ValueError("grid must start exactly at omega = 0")
        steps = np.diff(omegas)
        if np.any(steps <= 0):
            raise ValueError("grid must be strictly increasing")
        mean = steps.mean()
        # ulp jitter of the sample values themselves is unavoidable for
        # linspace-built grids, so allow it on top of the relative bound
        allowance = _GRID_JITTER * mean + 4.0 * np.finfo(float).eps * omegas[-1]
        if np.max(np.abs(steps - mean)) > allowance:
            raise ValueError("grid spacing is not uniform")
        omegas.setflags(write=False)
        object.__setattr__(self, "omegas", omegas)

    @property
    def spacing(self) -> float:
        return float(self.omegas[1] - self.omegas[0])

    @property
    def omega_max(self) -> float:
        return float(self.omegas[-1])

    @property
    def size(self) -> int:
        return int(self.omegas.size)

    @classmethod
    def uniform(cls, omega_max: float, n: int) -> "FrequencyGrid":
        """n samples spanning [0, omega_max] inclusive."""
        if omega_max <= 0:
            raise ValueError("omega_max must be > 0")
        return cls(np.linspace(0.0, omega_max, n))

    @classmethod
    def for_model(
        cls,
        model: DielectricModel,
        samples_per_linewidth: float = DEFAULT_SAMPLES_PER_LINEWIDTH,
        max_frequency_factor: float = DEFAULT_MAX_FREQUENCY_FACTOR,
    ) -> "FrequencyGrid":
        """Build the default grid for a model from the sampling rules.

        Spacing resolves the narrowest nonzero linewidth with
        ``samples_per_linewidth`` points and the top edge clears the
        highest model frequency by ``max_frequency_factor``.  A table
        carries no information beyond its last sample, so for Tabulated
        models the grid spans exactly the table range at the table's
        own finest spacing.
        """
        if isinstance(model, Tabulated):
            omega_max = float(model.omegas[-1])
            spacing_target = float(np.min(np.diff(model.omegas)))
            n = min(int(math.ceil(omega_max / spacing_target)) + 1, 20001)
            return cls.uniform(omega_max, max(n, 3))
        top = model_top_frequency(model)
        if top <= 0.0:
            top = 1.0  # vacuum: any scale works, pick unity
        omega_max = max_frequency_factor * top
        gamma = model_min_damping(model)
        if gamma is None or gamma <= 0.0:
            spacing_target = omega_max / 4096.0
        else:
            spacing_target = gamma / samples_per_linewidth
        n = int(math.ceil(omega_max / spacing_target)) + 1
        return cls.uniform(omega_max, n)


def model_top_frequency(model: DielectricModel) -> float:
    """Highest characteristic frequency of a model (0 for vacuum)."""
    if isinstance(model, Vacuum):
        return 0.0
    if isinstance(model, OscillatorSet):
        return max(
            [model.plasma_frequency] + [r.frequency for r in model.resonances]
        )
    if isinstance(model, Tabulated):
        return float(model.omegas[-1])
    raise TypeError(f"not a dielectric model: {model!r}")


def model_min_damping(model: DielectricModel) -> Optional[float]:
    """Narrowest nonzero damping, or None when no damped resonance exists."""
    if isinstance(model, OscillatorSet):
        dampings = [r.damping for r in model.resonances if r.damping > 0]
        if dampings:
            return min(dampings)
    return None


def eval_epsilon(model: DielectricModel, zeta):
    """Evaluate epsilon at complex frequency zeta (scalar or array).

    Upper-half-plane analyticity of passive members and the conjugate
    symmetry epsilon(-conj(zeta)) = conj(epsilon(zeta)) follow from the
    closed form.  Tabulated models accept real frequencies within the
    table range only (negative frequencies via conjugate symmetry).
    """
    zeta_arr = np.asarray(zeta, dtype=complex)
    if isinstance(model, Vacuum):
        out = np.ones_like(zeta_arr)
        return complex(out) if np.isscalar(zeta) or zeta_arr.ndim == 0 else out
    if isinstance(model, OscillatorSet):
        wp2 = model.plasma_frequency**2
        out = np.ones_like(zeta_arr)
        for res in model.resonances:
            denom = res.frequency**2 - 2j * zeta_arr * res.damping - zeta_arr**2
            scale = (
                res.frequency**2
                + 2.0 * np.abs(zeta_arr) * res.damping
                + np.abs(zeta_arr) ** 2
            )
            if np.any(np.abs(denom) <= 64.0 * np.finfo(float).eps * scale):
                raise PoleEvaluationError(
                    f"query coincides with the pole of the {res.frequency:g}"
                    " rad/time resonance within machine tolerance"
                )
            out = out + res.strength * wp2 / denom
        return complex(out) if np.isscalar(zeta) or zeta_arr.ndim == 0 else out
    if isinstance(model, Tabulated):
        if np.any(np.abs(zeta_arr.imag) > 0):
            raise UnsupportedModelError(
                "tabulated models are defined on the real axis only"
            )
        w = zeta_arr.real
        aw = np.abs(w)
        if np.any(aw < model.omegas[0]) or np.any(aw > model.omegas[-1]):
            raise ValueError("query frequency outside the table range")
        re = np.interp(aw, model.omegas, model.values.real)
        im = np.interp(aw, model.omegas, model.values.imag)
        out = re + 1j * np.where(w < 0, -im, im)
        return complex(out) if np.isscalar(zeta) or zeta_arr.ndim == 0 else out
    raise TypeError(f"not a dielectric model: {model!r}")


def _oscillator_tail_coeffs(model: OscillatorSet):
    """Per-resonance constants of the large-frequency expansion.

    For one resonance, w * Im eps = 2 f wp^2 g * u / (1 + a u + b u^2)
    with u = 1/w^2, a = 4 g^2 - 2 W^2, b = W^4.  Expanding in u gives the
    analytic tail integrals used by `sum_rule` and `kk_reconstruct`.
    """
    wp2 = model.plasma_frequency**2
    out = []
    for r in model.resonances:
        pref = 2.0 * r.strength * wp2 * r.damping
        a = 4.0 * r.damping**2 - 2.0 * r.frequency**2
        b = r.frequency**4
        out.append((pref, a, b))
    return out


def _sum_rule_tail(model: OscillatorSet, omega_max: float) -> tuple[float, float]:
    """Analytic tail of int_W^inf w*Im eps dw and a residual estimate."""
    tail = 0.0
    residual = 0.0
    w = omega_max
    for pref, a, b in _oscillator_tail_coeffs(model):
        tail += pref * (1.0 / w - a / (3.0 * w**3) + (a * a - b) / (5.0 * w**5))
        # next neglected order ~ pref * |a|*(a^2-b)-ish / w^7; bound loosely
        residual += abs(pref) * (abs(a) ** 3 + abs(a) * b) / (7.0 * w**7)
    return tail, residual


def sum_rule(
    model: DielectricModel,
    grid: Optional[FrequencyGrid] = None,
    tail_tol: float = 1e-4,
) -> float:
    """Spectral weight (2/pi) * int_0^inf w * Im eps(w) dw.

    For an oscillator set this equals sum_j f_j * wp^2 exactly; the
    quadrature-vs-closed-form comparison is the analyticity cross-check.
    Damped resonances are integrated on the grid (Simpson) with the
    analytic rational tail added beyond omega_max; an undamped resonance
    is a delta line invisible to any quadrature, so its exact weight
    f * wp^2 is added analytically instead.

    Tabulated models integrate the table with a zero tail; the tail
    guard fires when the last samples carry too much weight for that.
    """
    if isinstance(model, Vacuum):
        return 0.0

    if isinstance(model, OscillatorSet):
        damped = [r for r in model.resonances if r.damping > 0]
        lossless_weight = model.plasma_frequency**2 * sum(
            r.strength for r in model.resonances if r.damping == 0
        )
        if not damped:
            return lossless_weight
        damped_model = OscillatorSet(model.plasma_frequency, tuple(damped))
        if grid is None:
            grid = FrequencyGrid.for_model(damped_model)
        g = grid.omegas * eval_epsilon(damped_model, grid.omegas + 0j).imag
        body = simpson(g, x=grid.omegas)
        tail, residual = _sum_rule_tail(damped_model, grid.omega_max)
        total = (2.0 / math.pi) * (body + tail)
        scale = max(abs(total), damped_model.plasma_frequency**2)
        if (2.0 / math.pi) * residual > tail_tol * scale:
            raise TailDominanceError(
                f"tail residual estimate {residual:.3e} beyond omega_max="
                f"{grid.omega_max:g} exceeds {tail_tol:g} of the spectral weight; "
                "extend the grid"
            )
        return total + lossless_weight

    if isinstance(model, Tabulated):
        g = model.omegas * model.values.imag
        body = simpson(g, x=model.omegas)
        w_max = model.omegas[-1]
        # zero-tail assumption: estimate what a 1/w^3 continuation would add
        residual = abs(g[-1]) * w_max / 2.0  # int_W^inf g_N (W/w)^2 dw = g_N*W
        total = (2.0 / math.pi) * body
        scale = max(abs(total), 1.0)
        if (2.0 / math.pi) * residual > tail_tol * scale:
            raise TailDominanceError(
                "table ends while w*Im eps is still significant; zero-tail "
                "assumption untenable"
            )
        return total

    raise TypeError(f"not a dielectric model: {model!r}")


@dataclass(frozen=True)
class PassivityResult:
    """Outcome of the gain check: truthy iff the medium is passive.

    worst_omega is where w * Im eps is most negative on the sampled
    grid and worst_product is that minimum -- for a passive medium it
    is >= -tol (rounding), for gain media it points at the active line.
    """

    passive: bool
    worst_omega: float
    worst_product: float

    def __bool__(self) -> bool:
        return self.passive


def passivity_check(
    model: DielectricModel,
    grid: Optional[FrequencyGrid] = None,
    tol_scale: float = 1e-12,
) -> PassivityResult:
    """Check w * Im eps(w) >= -tol on every grid sample.

    The absolute tolerance is tol_scale * wp^2 for oscillator sets and
    tol_scale otherwise, per the passivity threshold convention.
    Returns a truthy/falsy result carrying the worst offender.
    """
    if isinstance(model, Vacuum):
        return PassivityResult(True, 0.0, 0.0)
    if grid is None and isinstance(model, Tabulated):
        omegas = model.omegas
        g = omegas * model.values.imag
        tol = tol_scale
    else:
        if grid is None:
            grid = FrequencyGrid.for_model(model)
        omegas = grid.omegas
        g = omegas * eval_epsilon(model, omegas + 0j).imag
        tol = tol_scale
        if isinstance(model, OscillatorSet):
            tol = tol_scale * model.plasma_frequency**2
    worst = int(np.argmin(g))
    return PassivityResult(
        passive=bool(g[worst] >= -tol),
        worst_omega=float(omegas[worst]),
        worst_product=float(g[worst]),
    )


def _tail_moments(omega_max: float, zeta: complex, count: int = 5):
    """T_m = int_W^inf w^{-2m} / (w^2 - zeta^2) dw for m = 1..count.

    Uses the closed log form away from zeta = 0 and the geometric series
    in (zeta/W)^2 where the log form would cancel catastrophically.
    Defined for any zeta off the ray [W, inf).
    """
    w = omega_max
    z2 = zeta * zeta
    if abs(zeta) <= 0.3 * w:
        x = z2 / (w * w)
        moments = []
        for m in range(1, count + 1):
            # T_m = W^{-(2m+1)} * sum_k x^k / (2m + 2k + 1),  x = (zeta/W)^2
            term = 0.0 + 0.0j
            coef = w ** float(-(2 * m + 1))
            for k in range(0, 12):
                term += coef / (2 * m + 2 * k + 1)
                coef *= x
            moments.append(term)
        return moments
    # closed forms: J = int_W^inf dw/(w^2 - z^2), then the recursion
    # T_m = (J_{m-1} - W^{-(2m-1)}/(2m-1)) / z^2 with J_0 = J
    j0 = np.log((w + zeta) / (w - zeta)) / (2.0 * zeta)
    moments = []
    prev = j0
    for m in range(1, count + 1):
        t = (prev - 1.0 / ((2 * m - 1) * w ** (2 * m - 1))) / z2
        moments.append(t)
        prev = t
    return moments


def _kk_tail(model: OscillatorSet, omega_max: float, zeta: complex):
    """Analytic tail of int_W^inf g(w)/(w^2 - zeta^2) dw for rational g.

    Expands g = pref * (u - a u^2 + (a^2 - b) u^3 + (2ab - a^3) u^4 + ...)
    in u = 1/w^2 and integrates each moment exactly; the residual is the
    magnitude of the first neglected order.
    """
    t1, t2, t3, t4, t5 = _tail_moments(omega_max, zeta, count=5)
    tail = 0.0 + 0.0j
    residual = 0.0
    for pref, a, b in _oscillator_tail_coeffs(model):
        c3 = a * a - b
        c4 = 2.0 * a * b - a**3
        c5 = b * b - 3.0 * a * a * b + a**4
        tail += pref * (t1 - a * t2 + c3 * t3 + c4 * t4)
        residual += abs(pref) * abs(c5) * abs(t5)
    return tail, residual


def _pv_derivative(g: np.ndarray, s: int, dw: float) -> float:
    """Derivative of the sampled numerator at sample s (5-point when possible)."""
    n = g.size
    if 2 <= s <= n - 3:
        return float(
            (-g[s + 2] + 8.0 * g[s + 1] - 8.0 * g[s - 1] + g[s - 2]) / (12.0 * dw)
        )
    if 1 <= s <= n - 2:
        return float((g[s + 1] - g[s - 1]) / (2.0 * dw))
    raise PVAlignmentError("singular sample too close to the grid edge")


def kk_reconstruct(
    imag_spectrum: np.ndarray,
    grid: FrequencyGrid,
    zeta: complex,
    tail_model: Optional[OscillatorSet] = None,
    tail_tol: float = 1e-4,
) -> complex:
    """Rebuild epsilon(zeta) from sampled w * Im eps(w) alone.

    Evaluates 1 + (2/pi) * int_0^inf g(w) / (w^2 - zeta^2) dw with
    g = imag_spectrum.  Queries with Im zeta > 0 use plain Simpson
    quadrature.  Real-axis queries take the principal value: sample
    pairs symmetric about the singular sample cancel the pole, the
    singular cell is integrated from a local linear expansion of the
    numerator, and the boundary-value imaginary part g(w)/w is added.
    Real queries must therefore land on a grid sample (to 1e-6 of the
    spacing) -- between samples the scheme cannot symmetrize and the
    pv-alignment guard fires.

    When `tail_model` is given, the analytic rational tail beyond
    omega_max is added; otherwise the tail is assumed zero and the
    tail-dominance guard checks the last sample is small enough.
    """
    g = np.asarray(imag_spectrum, dtype=float)
    if g.shape != grid.omegas.shape:
        raise ValueError("imag_spectrum does not match the grid")
    zeta = complex(zeta)
    if zeta.imag < 0:
        raise ValueError("kk_reconstruct is defined for Im zeta >= 0")

    omegas = grid.omegas
    dw = grid.spacing
    w_max = grid.omega_max

    # tail handling (shared by both query kinds)
    if tail_model is not None:
        if abs(w_max - zeta) < 1e-9 * w_max:
            raise TailDominanceError(
                "query coincides with omega_max where the tail integral is "
                "log-divergent"
            )
        tail, tail_residual = _kk_tail(tail_model, w_max, zeta)
    else:
        tail = 0.0 + 0.0j
        denom_edge = abs(w_max**2 - zeta * zeta)
        tail_residual = abs(g[-1]) * w_max / (3.0 * max(denom_edge, 1e-300))
    if (2.0 / math.pi) * tail_residual > tail_tol:
        raise TailDominanceError(
            f"estimated neglected tail {(2.0 / math.pi) * tail_residual:.3e} "
            f"exceeds {tail_tol:g}; extend the grid or pass a tail model"
        )

    if zeta.imag > 0:
        if zeta.imag < 2.0 * dw and abs(zeta.real) < w_max:
            raise PVAlignmentError(
                "query sits too close above the real axis for smooth "
                "quadrature; query the real axis (principal value) instead"
            )
        integrand = g / (omegas**2 - zeta * zeta)
        body = simpson(integrand, x=omegas)
        return 1.0 + (2.0 / math.pi) * (body + tail)

    # --- real axis: principal value + Plemelj boundary term ---
    w0 = zeta.real
    if w0 < 0:  # conjugate symmetry
        flipped = kk_reconstruct(imag_spectrum, grid, -w0, tail_model, tail_tol)
        return complex(flipped).conjugate()

    s_float = w0 / dw
    s = int(round(s_float))
    if not (0 <= s < grid.size) or abs(s_float - s) > 1e-6:
        raise PVAlignmentError(
            f"real-axis query {w0:g} is not aligned with a grid sample; "
            "the symmetric-pair PV scheme needs on-sample queries"
        )
    if s == 0:
        raise PVAlignmentError("real-axis query at omega = 0 is not supported")
    m = min(s, grid.size - 1 - s)
    if m < 1:
        raise PVAlignmentError("singular sample has no symmetric partner")
    w0 = omegas[s]  # snap exactly

    # regular partial-fraction piece: int g/(w + w0) dw over the whole grid
    part_b = simpson(g / (omegas + w0), x=omegas)

    # singular piece: PV int g/(w - w0) dw by symmetric-pair cancellation:
    # H(x) = (g(w0+x) - g(w0-x))/x is smooth through x = 0
    ks = np.arange(1, m + 1)
    pairs = (g[s + ks] - g[s - ks]) / (ks * dw)
    part_a = simpson(pairs, dx=dw) if m >= 2 else 0.0
    # singular cell [-dw, dw]: H is even to O(x^2), so
    # int_0^dw H = dw*(2/3 H(0) + 1/3 H(dw)) + O(dw^5)
    h0 = 2.0 * _pv_derivative(g, s, dw)
    part_a += dw * (2.0 * h0 / 3.0 + pairs[0] / 3.0)
    # leftover one-sided region beyond the symmetric window
    if s <= grid.size - 1 - s:
        rest = np.arange(s + m, grid.size)  # right side remains
    else:
        rest = np.arange(0, s - m + 1)  # left side remains
    if rest.size >= 2:
        part_a += simpson(g[rest] / (omegas[rest] - w0), dx=dw)

    pv = (part_a - part_b) / (2.0 * w0)
    real_part = 1.0 + (2.0 / math.pi) * (pv + tail.real)
    imag_part = g[s] / w0  # Plemelj: boundary value recovers Im eps itself
    return complex(real_part, imag_part)


def kk_roundtrip_error(
    model: DielectricModel,
    grid: Optional[FrequencyGrid] = None,
    tail_tol: float = 1e-4,
) -> tuple[float, float]:
    """Worst relative dispersion-integral round-trip error on the grid.

    Rebuilds epsilon at every interior sample from the sampled w*Im eps
    alone and compares against direct evaluation; returns (max relative
    error, omega where it occurs).  The first sample is skipped (the
    static point has no symmetric principal-value partner) and so is
    the last (the tail integral is log-divergent exactly at omega_max).

    Note what this does and does not test: it checks that epsilon is
    analytic in the upper half plane, nothing more.  Negative-strength
    (gain) members keep their poles in the lower half plane too, so an
    amplifying medium passes this check at the same numerical floor as
    a passive one.  Its pathology lives elsewhere -- a zero of epsilon
    in the upper half plane and negative spectral weight -- which the
    singularity scan and the sum rule catch.
    """
    if grid is None:
        grid = FrequencyGrid.for_model(model)
    eps = np.asarray(eval_epsilon(model, grid.omegas + 0j), dtype=complex)
    g = grid.omegas * eps.imag
    tail_model = model if isinstance(model, OscillatorSet) else None
    worst = 0.0
    worst_omega = float(grid.omegas[1])
    for s in range(1, grid.size - 1):
        rebuilt = kk_reconstruct(
            g, grid, complex(grid.omegas[s], 0.0),
            tail_model=tail_model, tail_tol=tail_tol,
        )
        err = abs(rebuilt - eps[s]) / max(abs(eps[s]), 1e-300)
        if err > worst:
            worst = err
            worst_omega = float(grid.omegas[s])
    return worst, worst_omega
