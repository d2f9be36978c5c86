"""
Forward scattering: special functions, boundary curves, Nystrom solver, Mie oracle
"""
