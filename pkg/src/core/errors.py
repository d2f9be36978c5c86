#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Error types and diagnostics tracking
Shared by the forward solver, the inversion modules and the pipelines
"""

from datetime import datetime
from threading import Lock
from typing import Dict, List, Optional
import logging

error_logger = logging.getLogger('errors')


class ScatteringError(Exception):
    """Base class for every error raised by this package"""


class DomainError(ScatteringError, ValueError):
    """Special function called outside its supported order/argument range"""


class GeometryError(ScatteringError, ValueError):
    """Invalid curve, scene or quadrature request"""


class SolverError(ScatteringError):
    """Boundary integral system could not be solved reliably"""

    def __init__(self, message: str, condition: Optional[float] = None):
        super().__init__(message)
        self.condition = condition


class CouplingError(SolverError):
    """Point scatterer and obstacle are (numerically) resonant"""


class RetrievalError(ScatteringError, ValueError):
    """Phase retrieval inputs are inconsistent"""


class IndicatorError(ScatteringError, ValueError):
    """Indicator inputs are inconsistent"""


class FormatError(ScatteringError, ValueError):
    """Malformed far-field, grid or scenario file"""


class ConfigError(ScatteringError, ValueError):
    """Invalid scenario configuration"""


class DiagnosticsTracker:
    """Track non-fatal numerical anomalies and suggest remedies"""

    def __init__(self):
        self.records = {}
        self.lock = Lock()
        self.remedies = {
            'ill_conditioned': ['Increase nodes per curve', 'Move scatterers apart'],
            'residual': ['Increase nodes per curve', 'Check curve parameterization'],
            'inconsistent_circles': ['Lower the noise level', 'Use strengths of larger modulus'],
            'clamped_noise': ['Lower the absolute noise level'],
        }

    def record(self, kind: str, location: str, message: str, count: int = 1):
        """Record an anomaly with details"""
        entry = {
            'location': location,
            'message': message,
            'count': count,
            'timestamp': datetime.now().isoformat(),
        }

        with self.lock:
            self.records.setdefault(kind, []).append(entry)

        error_logger.warning(
            f"Anomaly recorded - Type: {kind}, Where: {location}, Message: {message}",
            extra={'stage': location}
        )

    def suggest_remedies(self, kind: str) -> List[str]:
        """Remedies known for an anomaly kind"""
        return list(self.remedies.get(kind, ['Re-run with default settings']))

    def count(self, kind: str) -> int:
        """Total number of affected items recorded for a kind"""
        with self.lock:
            return sum(entry['count'] for entry in self.records.get(kind, []))

    def summary(self) -> Dict[str, Dict]:
        """Per-kind totals, suitable for the run manifest"""
        with self.lock:
            return {
                kind: {
                    'events': len(entries),
                    'items': sum(entry['count'] for entry in entries),
                    'remedies': self.suggest_remedies(kind),
                }
                for kind, entries in self.records.items()
            }
