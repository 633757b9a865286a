"""Automorphism groups, orbit structure and adequate bounds for finite posets."""
from .poset import Poset, from_cover_pairs, parse_pos, serialize_pos
from .groups import PermGroup, automorphism_group, endomorphism_count
from .structure import DictatedOrbitStructure, StructuredPoset

__version__ = "0.1.0"

__all__ = [
    "Poset", "from_cover_pairs", "parse_pos", "serialize_pos",
    "PermGroup", "automorphism_group", "endomorphism_count",
    "DictatedOrbitStructure", "StructuredPoset",
]
