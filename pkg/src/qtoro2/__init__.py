"""qtoro2: exact verification of the rank-2 toroidal free-field W-currents."""

__version__ = "0.1.0"
