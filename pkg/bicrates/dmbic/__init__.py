"""Discrete memoryless broadcast interference channel: laws, regions and checks."""

from .channel import DmBicChannel, FactoredInput, SimpleInput, TimeSharedInput, load_channel, load_input
from .regions import REGION_KINDS, binning_margin, eval_dm_region, rhat_outer
