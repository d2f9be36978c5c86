#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Base Pipeline - Abstract base class for the reconstruction schemes
Provides measurement synthesis, per-scheme logging, artifacts and the run manifest
"""

from abc import ABC, abstractmethod
from contextlib import contextmanager
from datetime import datetime
from pathlib import Path
from typing import Dict, Optional
import logging
import time

import numpy as np

from config.experiment_config import DEFAULT_WORKERS
from core.errors import DiagnosticsTracker, SolverError
from core.logging_setup import attach_file_logging
from core.models import DirectionGrid, FarFieldMatrix, GridField, PhaselessMatrix, Point
from file_formats import write_far_field, write_grid, write_manifest
from noise import add_noise
from scattering.forward import ReferenceCoupling, far_field_obstacle
from scenario import ScenarioConfig


class BasePipeline(ABC):
    """Abstract base class for all reconstruction schemes"""

    def __init__(self, scheme_name: str, config: ScenarioConfig, max_workers: int = DEFAULT_WORKERS,
                 show_progress: bool = False, log_dir: Optional[Path] = None,
                 output_dir: Optional[Path] = None):
        """
        Initialize base pipeline

        Args:
            scheme_name: Identifier for this scheme (e.g., 'scheme_one')
            config: Validated scenario
            max_workers: Threads for the indicator grid sweep
            show_progress: Show tqdm progress bars
            log_dir: Directory for per-scheme log files (None: no files)
            output_dir: Directory for far fields, grids and the manifest (None: nothing written)
        """
        self.scheme_name = scheme_name
        self.config = config
        self.max_workers = max_workers
        self.show_progress = show_progress
        self.output_dir = Path(output_dir) if output_dir is not None else None
        self.grid = DirectionGrid(config.directions)

        self.tracker = DiagnosticsTracker()
        self.timings: Dict[str, float] = {}
        self.artifacts: Dict[str, str] = {}
        self._couplings: Dict[Point, ReferenceCoupling] = {}
        self._obstacle: Optional[FarFieldMatrix] = None

        self._setup_scheme_logging(log_dir)

    def _setup_scheme_logging(self, log_dir: Optional[Path]):
        """Setup scheme-specific logging"""
        if log_dir is not None:
            self.activity_logger, self.error_logger = attach_file_logging(
                self.scheme_name, Path(log_dir), self.scheme_name)
        else:
            self.activity_logger = logging.getLogger(f'activity.{self.scheme_name}')
            self.error_logger = logging.getLogger(f'errors.{self.scheme_name}')

    @contextmanager
    def stage(self, name: str):
        """Time a pipeline stage"""
        started = time.perf_counter()
        self.activity_logger.info(f"Stage started: {name}", extra={'stage': self.scheme_name})
        try:
            yield
        finally:
            elapsed = time.perf_counter() - started
            self.timings[name] = self.timings.get(name, 0.0) + elapsed
            self.activity_logger.info(f"Stage finished: {name} ({elapsed:.2f}s)", extra={'stage': self.scheme_name})

    # -- measurements -------------------------------------------------------
    @contextmanager
    def _solver_guard(self, where: str):
        try:
            yield
        except SolverError as e:
            if e.condition is not None:
                self.tracker.record('ill_conditioned', where, str(e))
            raise

    def obstacle_far_field(self) -> FarFieldMatrix:
        """True phased far field of the obstacles alone"""
        if self._obstacle is None:
            with self._solver_guard('obstacle'):
                self._obstacle = far_field_obstacle(
                    self.config.scene, self.config.k, self.grid, self.config.nodes, self.tracker)
        return self._obstacle

    def coupling(self, z0: Point) -> ReferenceCoupling:
        if z0 not in self._couplings:
            with self._solver_guard(f'coupling z0={z0}'):
                self._couplings[z0] = ReferenceCoupling(
                    self.config.scene, z0, self.config.k, self.grid, self.config.nodes, self.tracker)
        return self._couplings[z0]

    def synthesize(self, tau: complex, z0: Optional[Point]) -> FarFieldMatrix:
        """Phased far field of the obstacles with the reference point of strength tau at z0"""
        if tau == 0 or z0 is None:
            return self.obstacle_far_field()
        return self.coupling(z0).far_field(tau, self.config.model)

    def measure(self, tau: complex, z0: Optional[Point], index: int) -> PhaselessMatrix:
        """Noisy phaseless measurement; `index` selects the noise stream"""
        config = self.config
        if not config.scatterers and tau != 0:
            # the point scatterer alone has the constant modulus |tau|
            exact = PhaselessMatrix(np.full((self.grid.N, self.grid.N), abs(complex(tau))),
                                    config.k, 'point-only', tau, z0)
        else:
            exact = self.synthesize(tau, z0).modulus()
        self.activity_logger.info(f"Measured |u| with tau={complex(tau)}, z0={z0} (noise stream {index})")
        return add_noise(exact, config.noise, index, self.tracker)

    # -- artifacts ----------------------------------------------------------
    def save_far_field(self, name: str, matrix) -> Optional[Path]:
        if self.output_dir is None:
            return None
        path = write_far_field(matrix, self.output_dir / f'{name}.pfft')
        self.artifacts[name] = str(path)
        return path

    def save_grid(self, name: str, field: GridField) -> Optional[Path]:
        if self.output_dir is None:
            return None
        for fmt in ('csv', 'pgm'):
            path = write_grid(field, self.output_dir / f'{name}.{fmt}', fmt)
            self.artifacts[f'{name}.{fmt}'] = str(path)
        return self.output_dir / f'{name}.csv'

    def save_manifest(self) -> Optional[Path]:
        """Save the run manifest (scenario, timings, diagnostics, artifacts)"""
        if self.output_dir is None:
            return None
        manifest = {
            'scheme': self.scheme_name,
            'scenario': self.config.to_dict(),
            'timings': self.timings,
            'diagnostics': self.tracker.summary(),
            'artifacts': self.artifacts,
            'timestamp': datetime.now().isoformat(),
        }
        return write_manifest(self.output_dir / f'run_manifest_{self.scheme_name}.json', manifest)

    def print_summary(self, field: GridField):
        """Print run statistics"""
        x, y = field.argmax_point()
        print(f"\n{'='*60}")
        print(f"{self.scheme_name} ({field.provenance.get('indicator')})")
        print(f"{'='*60}")
        print(f"Grid: {field.values.shape[1]} x {field.values.shape[0]} nodes")
        print(f"Maximum {float(np.max(field.values)):.6g} at ({x:.3f}, {y:.3f})")
        for name, seconds in self.timings.items():
            print(f"  {name}: {seconds:.2f}s")
        for kind, info in self.tracker.summary().items():
            print(f"⚠️  {kind}: {info['items']} item(s) - try: {', '.join(info['remedies'])}")
        for name, path in self.artifacts.items():
            print(f"  {name}: {path}")
        print(f"{'='*60}\n")

    def run(self) -> GridField:
        """Reconstruct, then write the grid and the manifest"""
        self.activity_logger.info(f"Starting {self.scheme_name} with {len(self.config.scatterers)} scatterer(s), "
                                  f"N={self.grid.N}, k={self.config.k}")
        with self.stage('total'):
            field = self.reconstruct()
        self.save_grid(f'{self.scheme_name}_{self.config.indicator}', field)
        self.save_manifest()
        return field

    # Abstract methods that subclasses must implement
    @abstractmethod
    def reconstruct(self) -> GridField:
        """Measure, process and evaluate the indicator"""
        pass
