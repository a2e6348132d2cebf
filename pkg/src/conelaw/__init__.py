"""Numerical certification of homogeneity, superadditivity and concavity on open convex cones."""

__version__ = "0.1.0"

from conelaw.errors import ContractError, DomainError, RegionTooThinError
from conelaw.domain import (
    ClosedInterval,
    OrthantCone,
    Region,
    SampleConfig,
    membership,
    sample_pairs_additive,
    sample_region,
)
from conelaw.fields import (
    ScalarField,
    make_bh_entropy,
    make_boundary_phi,
    make_f0,
    make_f0_multi,
    make_linear,
    make_photon_entropy,
    make_power,
    negate,
)
from conelaw.cf import Convergent, convergents

__all__ = [
    "ContractError",
    "DomainError",
    "RegionTooThinError",
    "ClosedInterval",
    "OrthantCone",
    "Region",
    "SampleConfig",
    "membership",
    "sample_pairs_additive",
    "sample_region",
    "ScalarField",
    "make_bh_entropy",
    "make_boundary_phi",
    "make_f0",
    "make_f0_multi",
    "make_linear",
    "make_photon_entropy",
    "make_power",
    "negate",
    "Convergent",
    "convergents",
]
