from ._lpm import *  # noqa: F401,F403
