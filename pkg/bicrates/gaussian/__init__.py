"""Gaussian broadcast interference channel bounds."""

from .bounds import (
    GbicParams, Regime, SplitParams, c_of, capacity_special, eval_gauss_inner, eval_gauss_outer,
    regime_classify, sum_rate, xi,
)
from .curves import boundary_slice, figure_data, gap_report
