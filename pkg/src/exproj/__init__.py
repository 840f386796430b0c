"""Exceptional sets of orthogonal projections: exact bound engine and
delta-discretized experiments."""
from .errors import ConditionError
from .ratmath import Rational, to_rational, format_rational
from .grassmann import Subspace, AffinePlane, Slab, proj_dim, intersect, orthocomplement, subspace_sum
from .bounds import Problem, BoundValue, m_of, lambda_p, s_star, best_upper
from .lowerbounds import best_lower, exact_regions
from .brascamplieb import BLConfig, bl_constant, critical_subspace, lattice_closure

__version__ = "0.1.0"
