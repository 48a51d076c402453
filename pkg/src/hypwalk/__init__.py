"""Rank-one hyperbolic spaces over R, C, H and random walks on lattice orbits.

The package has three layers:

* geometry: exact division-algebra arithmetic (`algebra`), projective models
  of the hyperbolic spaces with bisectors and nearest-point projection
  (`spaces`), and the geometric boundary with Busemann functions and
  boundary kernels (`boundary`);
* dynamics: the half-plane lattice fixture (`lattice`), random walks on
  group orbits (`walk`), planar Brownian motion by exact exit sampling
  (`brownian`), and the ball-based discretization loop (`lyons_sullivan`);
* surface: a FastAPI service (`service`) exposing the verification suites
  and experiments, with `cli` as a thin client.
"""

__version__ = "0.1.0"

from hypwalk.algebra import Scalar
from hypwalk.spaces import Point, Tangent, FLine
from hypwalk.boundary import BoundaryPoint, GeodesicLine

__all__ = [
    "__version__",
    "Scalar",
    "Point",
    "Tangent",
    "FLine",
    "BoundaryPoint",
    "GeodesicLine",
]
