"""Exact-arithmetic workbench for finitely presented commutative differential
graded algebras over the rationals: cohomology, minimal models, spherical
fibration reductions, and formality verdicts."""

from .core import Morphism, Poly, Presentation, check_d_squared
from .cohomology import (ClassMap, CohomologyTable, cohomology, cup_length,
                         massey_triple)
from .sullivan import (MinimalModel, identity_model, is_coformal, is_minimal,
                       minimal_model, rational_connectivity,
                       sullivan_representative, verify_quasi_iso)
from .fibration import (EvenSphere, FibrationModel, OddSphere, ProjectiveLike,
                        build_fibration_model, check_formal_map,
                        closure_correction, correction_sum, theoremC_reduce,
                        tilde_mu_E)
from .formality import (FormalityVerdict, build_certificate, canonical_complement,
                        check_formality, dgms_check, nonformality_witness,
                        product_formality)
from .catalog import Fixture, UnknownFixture, fixture, fixture_names, run_checks

__version__ = "0.1.0"
