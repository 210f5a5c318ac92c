"""Exact additive energies, slices and decompositions for lattice points on spheres and paraboloids."""

from ._core import (
    BudgetError,
    DomainError,
    check_inequalities,
    decompose,
    energy,
    energy_brute,
    enumerate_paraboloid,
    enumerate_sphere,
    intersect_translates,
    legendre_admissible,
    moment_via_dft,
    random_subset,
    rep_fn,
    slice,
    sumset,
    sup_rep,
    threshold_for,
)

__all__ = [
    "BudgetError",
    "DomainError",
    "check_inequalities",
    "decompose",
    "energy",
    "energy_brute",
    "enumerate_paraboloid",
    "enumerate_sphere",
    "intersect_translates",
    "legendre_admissible",
    "moment_via_dft",
    "random_subset",
    "rep_fn",
    "slice",
    "sumset",
    "sup_rep",
    "threshold_for",
]
