"""dgkit: exact-arithmetic homological algebra on finite-dimensional models.

Everything is computed over the Gaussian rationals Q(i); there is no
floating point anywhere in the package.
"""

from dgkit.scalars import Scalar
from dgkit.linalg import Matrix, Subspace

__all__ = ["Scalar", "Matrix", "Subspace"]
__version__ = "0.1.0"
