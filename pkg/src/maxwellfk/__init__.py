"""Maxwell cavity eigenvalues and counterexamples to a Faber-Krahn inequality."""
from .kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
