"""Equilibrium and welfare analysis of exchange economies with multiplex
network spillovers.

The heavy lifting lives in the compiled extension ``mpxeq._core``; this
package re-exports its public surface.
"""

from mpxeq._core import *  # noqa: F401,F403
from mpxeq._core import __version__  # noqa: F401
