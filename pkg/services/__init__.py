"""
Services package: tracing, shadowing and export pipelines
"""
from .dynamics_service import DynamicsService

__all__ = ['DynamicsService']
