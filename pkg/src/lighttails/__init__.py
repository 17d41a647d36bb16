"""Concentration toolbox for functions of independent random variables with
unbounded, light-tailed coordinates: Orlicz-type norms, entropy-method
identities on finite spaces, closed-form tail bounds driven by per-coordinate
proxies, application bounds, and a falsification harness."""

__version__ = "0.1.0"

from . import applications, bounds, distributions, entropy, functions, orlicz, verify

__all__ = [
    "__version__", "applications", "bounds", "distributions", "entropy",
    "functions", "orlicz", "verify",
]
