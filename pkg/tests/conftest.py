import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cdga.core import Poly, Presentation


def sample_presentations() -> dict[str, Presentation]:
    """Small pool of presentations used by randomized law tests."""
    from cdga.catalog import (fixture, sec6_primitive_base,
                              sec6_nonprimitive_base)
    pool = {
        "sec6-primitive": sec6_primitive_base(12),
        "sec6-nonprimitive": sec6_nonprimitive_base(14),
        "heisenberg": fixture("heisenberg-like:3").presentation,
        "twistor-total": fixture("twistor:hpn:1").presentation,
    }
    return pool


def random_poly(pres: Presentation, rng: random.Random,
                degree: int | None = None, terms: int = 3) -> Poly:
    """Random homogeneous polynomial with small rational coefficients."""
    if degree is None:
        degree = rng.randint(1, min(pres.truncation_degree, 12))
    basis = pres.basis_of_degree(degree)
    if not basis:
        return Poly.zero()
    out = Poly.zero()
    for _ in range(terms):
        mono = rng.choice(basis)
        coeff = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        out = out + Poly({mono: Fraction(1)}).scale(coeff)
    return out


@pytest.fixture
def rng():
    return random.Random(20260824)
