"""One-step ODE solvers for problems whose known value sits anywhere in the
interval: forward and backward Euler, predictor-corrector and Runge-Kutta
schemes, convergence/stability analyzers, companion-form reduction of
high-order equations, fixed-delay shifting and a small expression language
for right-hand sides."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
