"""
Core components for the phaseless scattering toolkit
Shared data objects, logging, error handling and the pipeline base class
"""
