"""Exact quaternionic Hecke operators on the sphere, theta lifts to modular
forms, trilinear-form identities, and triple-product L-function numerics.

Subpackage map:

- ``quat``        exact quaternion arithmetic, orders, norm shells, rotations
- ``poly``        exact multivariate polynomials, harmonic spaces, kernels
- ``hecke``       Hecke matrices on harmonic spaces, eigenbases
- ``theta``       theta lifts, q-expansions, Petersson norms
- ``trilinear``   triple integrals, generating-series coefficients, constants
- ``triple_l``    degree-8 L-function local factors and central values
- ``experiments`` equidistribution/moment experiments
- ``cli``         command-line entry point
"""

__version__ = "0.1.0"
