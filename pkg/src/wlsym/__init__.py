"""Weisfeiler-Leman refinement, coherent configurations, prime-order
transitivity recognition and CFI graphs over Cayley templates."""

__version__ = "0.1.0"

from .graph import Graph, build, complement, disjoint_union  # noqa: E402
from .wl import distinguish, wl1, wl2, wlk  # noqa: E402

__all__ = ["Graph", "build", "complement", "disjoint_union", "distinguish", "wl1", "wl2", "wlk", "__version__"]
