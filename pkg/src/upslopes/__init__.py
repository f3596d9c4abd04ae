"""
Slopes of U_p on spaces of overconvergent automorphic forms for definite
quaternion algebras, computed with exact p-adic linear algebra.
"""

__version__ = "0.1.0"
