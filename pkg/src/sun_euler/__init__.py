"""Generalized Euler angles on SU(n): basis, elements, Haar measure, geometry."""
from .algebra import GellMannBasis, build_basis, commutator, epsilon, verify_identities
from .errors import (
    CapacityError,
    DomainError,
    ParseError,
    PreconditionError,
    ShapeError,
    SunEulerError,
    ValidationError,
)
from .group import (
    EulerCoordinates,
    SpecialUnitary,
    build_base_point,
    build_element,
    build_elements,
    coordinate_layout,
    exp_generator,
    tangent_rank,
    validate_coordinates,
)
from .kernels import BACKEND

__version__ = "0.1.0"
