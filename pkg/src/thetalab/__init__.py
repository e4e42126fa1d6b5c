"""Discriminant forms, weak Maass coefficient calculus, Fock-model Schwartz
forms, Siegel theta series, and regularized theta lifts on O(p,q)."""

__version__ = "0.1.0"

from .fqm import (  # noqa: F401
    A1,
    A2,
    DIAG_2_2_M2,
    DIAG_2_2_M6,
    EXAMPLE_LATTICES,
    U,
    UU,
    DiscriminantForm,
    Lattice,
    LatticeError,
    MetaplecticWord,
    WeilRep,
    discriminant_group,
    weil_element,
    weil_generator,
)
