"""Two-route SIR epidemics on two-layer multiplex networks."""

from ._mrepi import *  # noqa: F401,F403
from ._mrepi import __version__, Error, InputError, InfeasibleError, SupercriticalError  # noqa: F401
