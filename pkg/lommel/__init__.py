"""
Lommel-function numerics: branch-aware special functions and periodic-ODE tools.
"""
