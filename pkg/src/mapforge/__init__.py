"""Growing uniform random planar maps by local face insertions."""

__version__ = "0.1.0"
