"""Bar-Natan homology, its canonical classes, and framed flow categories of link diagrams."""

from .diagram import LinkDiagram, parse_pd
from .homology import bar_natan_complex, homology, s_invariant

__all__ = ["LinkDiagram", "parse_pd", "bar_natan_complex", "homology", "s_invariant"]
__version__ = "0.1.0"
