#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Scheme Two - phase retrieval from three strengths, then I2 or I3
"""

from typing import Optional

from core.base_pipeline import BasePipeline
from core.models import FarFieldMatrix, GridField
from inversion.indicators import indicator_i2, indicator_i3
from inversion.phase_retrieval import retrieval_error, retrieve_far_field
from scenario import ScenarioConfig

SCHEME_NAME = "scheme_two"


class SchemeTwo(BasePipeline):
    """Trilateration of the phased obstacle far field followed by a phased indicator"""

    def __init__(self, config: ScenarioConfig, **kwargs):
        super().__init__(SCHEME_NAME, config, **kwargs)
        self.retrieved: Optional[FarFieldMatrix] = None

    def retrieve(self) -> FarFieldMatrix:
        """Phased far field recovered from the three measurements"""
        if self.retrieved is None:
            triple = self.config.triple()
            with self.stage('measure'):
                moduli = [self.measure(tau, triple.z0, index) for index, tau in enumerate(triple.taus)]
                for index, matrix in enumerate(moduli):
                    self.save_far_field(f'measured_{index}', matrix)
            with self.stage('retrieve'):
                self.retrieved = retrieve_far_field(moduli, triple, self.tracker)
            self.save_far_field('retrieved', self.retrieved)
        return self.retrieved

    def retrieval_error(self) -> float:
        """Relative sup-norm error against the true obstacle far field"""
        return retrieval_error(self.retrieve(), self.obstacle_far_field())

    def reconstruct(self) -> GridField:
        config = self.config
        U = self.retrieve()
        with self.stage('indicator'):
            if config.indicator == 'i3':
                return indicator_i3(U, config.incidence, config.grid, self.max_workers, self.show_progress)
            return indicator_i2(U, config.grid, self.max_workers, self.show_progress)


def create_scheme(config: ScenarioConfig, **kwargs) -> SchemeTwo:
    """Factory function to create a Scheme Two pipeline"""
    return SchemeTwo(config, **kwargs)


def run_scheme_two(config: ScenarioConfig, **kwargs) -> GridField:
    """Run Scheme Two and return the indicator grid"""
    return create_scheme(config, **kwargs).run()
