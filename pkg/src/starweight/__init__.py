"""Star-graph weight-test workbench for relative presentations over free
products, with an exact curvature calculus and an equation-solvability
classifier for torsion-free coefficients."""

__version__ = "0.1.0"
