"""
Function families evaluated on the Riemann surface of the logarithm.
"""
