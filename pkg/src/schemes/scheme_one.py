#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Scheme One - reconstruction from phaseless data with strengths {0, tau_1}
"""

from typing import List

from core.base_pipeline import BasePipeline
from core.models import GridField
from inversion.indicators import combine_reference_fields, f_matrix, indicator_itheta, indicator_iz0
from scenario import ScenarioConfig

SCHEME_NAME = "scheme_one"


class SchemeOne(BasePipeline):
    """I_z0 / I_Theta reconstruction, one F matrix per reference point"""

    def __init__(self, config: ScenarioConfig, **kwargs):
        super().__init__(SCHEME_NAME, config, **kwargs)

    def reconstruct(self) -> GridField:
        config = self.config
        tau = config.primary_strength

        with self.stage('measure'):
            bare = self.measure(0, None, index=0)
            self.save_far_field('measured_bare', bare)

        fields: List[GridField] = []
        for number, z0 in enumerate(config.reference_points):
            with self.stage('measure'):
                combined = self.measure(tau, z0, index=number + 1)
                self.save_far_field(f'measured_combined_{number}', combined)
            with self.stage('indicator'):
                F = f_matrix(combined, bare, tau)
                if config.indicator == 'itheta':
                    field = indicator_itheta(F, config.theta_set(), config.grid,
                                             self.max_workers, self.show_progress)
                else:
                    field = indicator_iz0(F, config.grid, self.max_workers, self.show_progress)
            self.activity_logger.info(f"Indicator {config.indicator} for z0={z0}: max at {field.argmax_point()}")
            fields.append(field)

        if len(fields) == 1:
            return fields[0]
        return combine_reference_fields(fields)


def create_scheme(config: ScenarioConfig, **kwargs) -> SchemeOne:
    """Factory function to create a Scheme One pipeline"""
    return SchemeOne(config, **kwargs)


def run_scheme_one(config: ScenarioConfig, **kwargs) -> GridField:
    """Run Scheme One and return the indicator grid"""
    return create_scheme(config, **kwargs).run()
