"""Linear-optical statistics with partially distinguishable particles.

Exact outcome distributions for boson-sampling experiments with a hidden
degree of freedom, indistinguishability and bunching estimators, A-optimal
experiment design, maximum-likelihood unitary-submatrix fits, and the
laser-fluctuation dephasing bound. The heavy lifting happens in the C++
extension module; this package re-exports its surface.
"""

from bosonstat._core import *  # noqa: F401,F403
from bosonstat._core import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"
