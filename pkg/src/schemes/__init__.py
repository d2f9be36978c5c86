"""
Reconstruction scheme pipelines
"""
