"""Resource caps.

All potentially explosive enumerations (name universes, subset scans,
group closures) go through a single cap. The default is overridable
with the FORCELAB_CAP environment variable or per call.
"""

import os

DEFAULT_CAP = 100_000


def active_cap(override=None):
    if override is not None:
        return int(override)
    env = os.environ.get("FORCELAB_CAP")
    if env:
        return int(env)
    return DEFAULT_CAP
