"""
Configuration constants for the solver and the reconstruction experiments
"""
