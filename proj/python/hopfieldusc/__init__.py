"""Exact solution of the anisotropic Hopfield model: polariton spectra,
Eberly-Wodkiewicz physical spectra and critical quantum thermometry."""

try:
    from ._hopfieldusc import *  # noqa: F401,F403  (installed layout)
    from ._hopfieldusc import __version__, oracle  # noqa: F401
except ImportError:  # in-tree build: extension sits on PYTHONPATH
    from _hopfieldusc import *  # noqa: F401,F403
    from _hopfieldusc import __version__, oracle  # noqa: F401
