# ABOUTME: Massless Poincare operators on the 1/r space and their verification harness
# ABOUTME: Makes app directory a Python package
