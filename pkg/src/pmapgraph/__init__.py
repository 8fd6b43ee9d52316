"""Coarse geometry, flux maps and algebraic properties of pure mapping class
groups of locally finite infinite graphs."""

from .endspace import EndPoint, EndSpace, parse as parse_ends
from .graphmodel import GraphDescriptor, parse_descriptor, load_descriptor
from .classify import classify_coarse, h1_rank, table_cell
from .flux import LadderModel, flux_fast, flux_oracle
from .mcgelems import parse_mapping_word

__all__ = [
    "EndPoint", "EndSpace", "parse_ends", "GraphDescriptor", "parse_descriptor", "load_descriptor",
    "classify_coarse", "h1_rank", "table_cell", "LadderModel", "flux_fast", "flux_oracle",
    "parse_mapping_word",
]
