"""k-expanding embeddings between rectangles: feasibility, construction, and filling."""

from .rect import Rectangle, normalize, parse_dims

__all__ = ["Rectangle", "normalize", "parse_dims"]
__version__ = "0.1.0"
