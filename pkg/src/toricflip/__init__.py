"""Exact toric birational geometry: Gale duals, secondary fans and D-flips."""
__version__ = "0.1.0"

from .cone import Cone, Position
from .divisor import TDivisor, anticanonical_class, cartier_multiple, divisor_class, is_ample, is_cartier
from .fan import Fan, added_walls, is_complete, is_simplicial, simplicial_subdivisions, triangulations_of_cone, validate
from .flip import FlipCertificate, PipelineResult, find_flip, projectivize, verify_flip
from .gkz import (WeightMatrix, bunch, chamber_to_fan, effective_cone, gale_dual, is_projective,
                  moving_cone, nef_cone, secondary_fan, supplied_weights)

__all__ = [
    "Cone", "Position", "TDivisor", "anticanonical_class", "cartier_multiple", "divisor_class",
    "is_ample", "is_cartier", "Fan", "added_walls", "is_complete", "is_simplicial",
    "simplicial_subdivisions", "triangulations_of_cone", "validate", "FlipCertificate",
    "PipelineResult", "find_flip", "projectivize", "verify_flip", "WeightMatrix", "bunch",
    "chamber_to_fan", "effective_cone", "gale_dual", "is_projective", "moving_cone", "nef_cone",
    "secondary_fan", "supplied_weights",
]
