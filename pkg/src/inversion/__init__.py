"""
Inverse problems: phase retrieval and sampling indicators
"""
