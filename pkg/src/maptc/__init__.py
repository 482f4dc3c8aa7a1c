"""Exact calculators and bound propagation for the topological complexity
and LS-category of maps."""

__version__ = "0.1.0"

from .catalog import Interval, SpaceId, cat_of, parse_space, tc_of
from .free_group import FreeHom, apply_hom, cat_free_hom, fold, image_rank, reduce_word, tc_free_hom
from .linalg import Field, FieldMatrix, IntMatrix, Subspace, int_rank, smith_normal_form

__all__ = [
    "Field",
    "FieldMatrix",
    "FreeHom",
    "IntMatrix",
    "Interval",
    "SpaceId",
    "Subspace",
    "apply_hom",
    "cat_free_hom",
    "cat_of",
    "fold",
    "image_rank",
    "int_rank",
    "parse_space",
    "reduce_word",
    "smith_normal_form",
    "tc_free_hom",
    "tc_of",
]
