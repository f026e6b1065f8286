"""
Exceptions raised by the indgap library.
"""
from typing import Any, Dict, Optional


class IndgapError(Exception):
    """Base class for every error raised by indgap."""


class ConfigError(IndgapError):
    """A run configuration violates its invariants."""


class GraphError(IndgapError):
    """Invalid graph, vertex or generator request."""


class GraphParseError(GraphError):
    """Edge-list text or generator spec string could not be parsed."""


class VertexCapError(GraphError):
    """The graph exceeds the 64-vertex cap of exact mode."""


class DisconnectedGraphError(GraphError):
    """An operation that needs a connected graph received a disconnected one."""


class SeriesError(IndgapError):
    """A power-series precondition (constant term, composition) is violated."""


class PoleError(IndgapError):
    """A ratio was evaluated where its denominator vanishes."""


class MajorantDomainError(IndgapError):
    """Some factor 1 - G_j(θ) of a majorant is not positive."""

    def __init__(self, message: str, node_key: Optional[Any] = None):
        super().__init__(message)
        self.node_key = node_key


class ConvergenceError(IndgapError):
    """Simultaneous root iteration did not converge."""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class RootMatchError(IndgapError):
    """The β enclosure matches zero or several numeric roots."""


class BoundViolationError(IndgapError):
    """A bound that the theory guarantees was violated numerically."""


class CertificationError(IndgapError):
    """A certificate cannot be produced for the given input."""
