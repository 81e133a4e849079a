"""Radial wave equation on harmonic manifolds.

Radial functions are 1-D complex arrays sampled on r = 0, dr, 2 dr, ...

>>> import radialwave as rw
>>> h3 = rw.DensityModel.jacobi(0.5, -0.5)
>>> f = rw.bump(0.5)
>>> state = rw.propagate_spectral(h3, f, t=1.0)
"""

from ._core import (
    CFLError,
    ConfigError,
    DensityModel,
    DomainError,
    Error,
    abel,
    bump,
    c_function,
    dirichlet_spectrum,
    energy,
    forward_transform,
    inverse_transform,
    phi,
    plancherel_density,
    propagate_dalembert,
    propagate_fdtd,
    propagate_series,
    propagate_spectral,
    pw_radius,
    run_scenario,
    set_threads,
    spherical_mean,
    transform_constant,
)

__all__ = [
    "CFLError",
    "ConfigError",
    "DensityModel",
    "DomainError",
    "Error",
    "abel",
    "bump",
    "c_function",
    "dirichlet_spectrum",
    "energy",
    "forward_transform",
    "inverse_transform",
    "phi",
    "plancherel_density",
    "propagate_dalembert",
    "propagate_fdtd",
    "propagate_series",
    "propagate_spectral",
    "pw_radius",
    "run_scenario",
    "set_threads",
    "spherical_mean",
    "transform_constant",
]
__version__ = "0.3.0"
