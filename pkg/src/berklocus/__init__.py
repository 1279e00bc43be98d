"""Exact computation of Berkovich fixed point loci for maps with potential good reduction."""

from .berkovich import Type1, Type2, image_of_point, multiplicity_at
from .errors import BerkError
from .locus import analyze, component_census, find_potential_good_reduction, verdict_connected, verdict_finite
from .oracle import GridSpec, oracle_verify
from .padic import FieldContext, make_context
from .parse import MapSpec, parse_map
from .rational_map import MobiusMap, RationalMap, conjugate, is_good_reduction, reduce

__version__ = "0.1.0"

__all__ = [
    "BerkError",
    "FieldContext",
    "GridSpec",
    "MapSpec",
    "MobiusMap",
    "RationalMap",
    "Type1",
    "Type2",
    "analyze",
    "component_census",
    "conjugate",
    "find_potential_good_reduction",
    "image_of_point",
    "is_good_reduction",
    "make_context",
    "multiplicity_at",
    "oracle_verify",
    "parse_map",
    "reduce",
    "verdict_connected",
    "verdict_finite",
]
