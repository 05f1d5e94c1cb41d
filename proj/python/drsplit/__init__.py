"""Douglas-Rachford splitting for TV and Huber denoising."""

from ._drsplit import (
    ConfigError,
    ContractViolation,
    DivergenceError,
    add_gaussian_noise,
    denoise,
    rof_gap,
    synthetic_scene,
)

__all__ = [
    "ConfigError",
    "ContractViolation",
    "DivergenceError",
    "add_gaussian_noise",
    "denoise",
    "rof_gap",
    "synthetic_scene",
]
