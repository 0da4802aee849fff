"""Bell polytopes for local models augmented by classical communication."""
from .core import (CommModel, CorrMatrix, DetProtocol, Direction, LinearInequality, Pattern, Picture,
                   PointList, ProbTable, ProbVector, Scenario, one_way_no_signaling, protocol_table,
                   table_to_vector, to_correlation, validate_prob_table, vector_to_table)
from .polytope import (HRepresentation, affine_dimension, convex_certificate, dd_convert, membership,
                       verify_facet)
from .protocols import enumerate_protocols, vertex_set

__version__ = "0.1.0"
