"""HTTP service wrapping the exact computation kernels.

The pydantic request/response models double as the package's canonical JSON
wire formats (stack specs, graded matrices, coefficient-ring elements, arcs);
the CLI builds the same models and calls the handlers in-process or over HTTP.
"""

from .app import app

__all__ = ["app"]
