"""Anisotropic p-Laplacian / Hammerstein control experiments."""

try:
    from ._anisopt import *  # noqa: F401,F403  (installed wheel layout)
    from ._anisopt import __version__  # noqa: F401
except ImportError:  # in-tree build: the extension sits on sys.path as a top-level module
    from _anisopt import *  # noqa: F401,F403
    from _anisopt import __version__  # noqa: F401
