"""
Modelos de dados: redes, recompensas, design e posterior
"""

from .netgen import (
    Graph, SbmParams, LatentSpaceParams, protocol_sbm_params,
    sample_sbm, sample_latent_space, treated_neighbor_counts,
)
from .reward import (
    ThetaTrue, MisspecTheta, NoiseSpec, ThetaGenSpec,
    sample_theta, sample_misspec_theta,
    expected_rewards, expected_rewards_misspec, realize_rewards,
)
from .design import DesignMatrix, build_design, collapse_to_sum, design_sums
from .posterior import (
    PosteriorState, init_prior, update, update_collapsed, sample, map_estimate, point_mass,
)

__all__ = [
    "Graph", "SbmParams", "LatentSpaceParams", "protocol_sbm_params",
    "sample_sbm", "sample_latent_space", "treated_neighbor_counts",
    "ThetaTrue", "MisspecTheta", "NoiseSpec", "ThetaGenSpec",
    "sample_theta", "sample_misspec_theta",
    "expected_rewards", "expected_rewards_misspec", "realize_rewards",
    "DesignMatrix", "build_design", "collapse_to_sum", "design_sums",
    "PosteriorState", "init_prior", "update", "update_collapsed",
    "sample", "map_estimate", "point_mass",
]
