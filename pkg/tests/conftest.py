"""Shared models and helpers for the test suite.

The same four oscillator sets appear throughout: a passive absorber, a
broader version of it, a lossless line, a strong line with a
negative-group-delay band, and the inverted (gain) medium whose slab
response is the acausal counterexample.
"""

from __future__ import annotations

import numpy as np
import pytest

from causlab import OscillatorSet, Resonance, Tabulated, Vacuum

# workhorse absorber: single Lorentz line
PASSIVE = OscillatorSet(1.0, (Resonance(1.0, 2.0, 0.1),))
# same line, twice the damping
BROAD = OscillatorSet(1.0, (Resonance(1.0, 2.0, 0.2),))
# lossless line (delta absorption)
UNDAMPED = OscillatorSet(1.0, (Resonance(1.0, 2.0, 0.0),))
# strong broad line: anomalous-dispersion band with negative group delay
STRONG = OscillatorSet(0.8, (Resonance(1.0, 1.5, 0.3),))
# inverted population: negative strength, amplifying, acausal slab response
INVERTED = OscillatorSet(2.0, (Resonance(-1.0, 1.0, 0.1),))

VACUUM = Vacuum()


def make_etalon(eps: float = 4.0, omega_max: float = 10.0, n: int = 2001) -> Tabulated:
    """Constant lossless permittivity as a table (eta = sqrt(eps))."""
    omegas = np.linspace(0.0, omega_max, n)
    return Tabulated(omegas, np.full(n, eps, dtype=complex))


@pytest.fixture
def etalon() -> Tabulated:
    return make_etalon()
