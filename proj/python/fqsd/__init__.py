"""Non-Markovian fermionic-bath dynamics.

Thin wrapper over the compiled extension; everything public lives there.
"""

from ._fqsd import *  # noqa: F401,F403
from ._fqsd import __version__  # noqa: F401
