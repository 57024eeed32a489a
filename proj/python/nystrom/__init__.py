"""Modified Nystrom solver for the exterior Neumann Laplace problem on corner domains."""

from ._core import *  # noqa: F401,F403
from ._core import GeometryError, NumericalError, ParameterError, __doc__  # noqa: F401

__version__ = "0.1.0"
