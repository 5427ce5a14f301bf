"""Exact computations with θ-extensions of finite-dimensional algebras over prime fields."""
from .algebra import Algebra, Quiver, Relation, path_algebra, type_a
from .rep import Bimodule, Module, Morphism, ThetaData
from .cleft import CleftInstance, theta_extension, trivial_extension, tensor_ring, triangular_matrix

__version__ = "0.1.0"

__all__ = ["Algebra", "Quiver", "Relation", "path_algebra", "type_a", "Bimodule", "Module", "Morphism",
           "ThetaData", "CleftInstance", "theta_extension", "trivial_extension", "tensor_ring",
           "triangular_matrix"]
