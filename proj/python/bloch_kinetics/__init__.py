"""Transport kinetics of electrons scattered by bosonic excitations.

Thin python surface over the compiled core: excitation presets, quadrature
grids, collision kernels and rates, spectral analysis of the symmetrized
kernel, the three inverse-rate solvers, and conductivity sweeps.
"""

try:
    from ._core import *  # noqa: F401,F403
    from ._core import __version__  # noqa: F401
except ImportError:  # in-tree runs: the module sits next to the package
    from _core import *  # noqa: F401,F403
    from _core import __version__  # noqa: F401
