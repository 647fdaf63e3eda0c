"""
Utility modules for configuration, errors, series summation and output.
"""
