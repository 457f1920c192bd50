# ABOUTME: Numerical building blocks: Bessel functions, lazy fields, quadrature, finite differences
# ABOUTME: Makes utils directory a Python package
