"""
Orthoshrink
Singular-value shrinkage estimators of a normal mean matrix, their exact
matrix quadratic risk (SURE) formulas, and a Monte Carlo risk harness
"""

__version__ = "1.0.0"
