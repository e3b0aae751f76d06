"""Exact computations on horizontally stationary generalized Bratteli diagrams."""

from .diagram import *  # noqa: F401,F403
from .errors import *  # noqa: F401,F403
from .measures import *  # noqa: F401,F403
from .rules import *  # noqa: F401,F403
from .toeplitz import *  # noqa: F401,F403
from .vershik import *  # noqa: F401,F403
from .specfile import ParseError, SpecDocument, SpecError, parse_spec, parse_vectors, serialize_spec

__version__ = "0.1.0"
