"""Four-qubit quantum neural network benchmark for wind-turbine power regression.

The package provides a dense statevector simulator, parameterized circuit
construction (Z / ZZ feature maps, RY ansatz with six entanglement layouts),
a from-scratch L-BFGS trainer, classical baseline regressors, and reporting
utilities that write CSV, markdown, and SVG artifacts.
"""
__version__ = "0.1.0"
