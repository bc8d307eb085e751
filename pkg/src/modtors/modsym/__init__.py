from .groups import GroupData, GroupSpec
from .operators import (
    OperatorMatrix,
    atkin_lehner,
    atkin_lehner_cusp_action,
    diamond_operator,
    hecke_operator,
    merel_family,
    restrict_to_lattice,
    star_involution,
)
from .space import ModSymSpace, build_space, clear_space_cache


def coefficient_rows(space, sublattice, count):
    """Integral q-expansion coefficient rows for a Hecke-stable sublattice
    of the plus part (delegates to the immersion machinery lazily to avoid
    an import cycle)."""
    from ..immersion import coefficient_rows as impl

    return impl(space, sublattice, count)

__all__ = [
    "GroupSpec",
    "GroupData",
    "ModSymSpace",
    "build_space",
    "clear_space_cache",
    "OperatorMatrix",
    "hecke_operator",
    "diamond_operator",
    "star_involution",
    "atkin_lehner",
    "atkin_lehner_cusp_action",
    "merel_family",
    "restrict_to_lattice",
]
