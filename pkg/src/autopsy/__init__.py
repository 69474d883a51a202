"""Protocol cryptanalysis workbench.

Four two-party authentication / key-agreement schemes run as deterministic
state machines over a simulated channel, together with the insider and
denial-of-service attacks against them.
"""

__version__ = "0.1.0"
