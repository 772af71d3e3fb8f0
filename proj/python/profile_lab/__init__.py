"""Bidding and linear-search profiles: trade-off curves, construction,
verification and Monte Carlo simulation."""

from ._core import *  # noqa: F401,F403
