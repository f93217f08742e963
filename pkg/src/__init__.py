"""
mtm-bench: Mirror Triangles Method solvers, simulated oracles and a bound-checking harness
"""

__version__ = "0.1.0"
