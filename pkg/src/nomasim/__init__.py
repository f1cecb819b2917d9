"""Power-domain NOMA rate analysis, resource allocation, MIMO-NOMA and
cooperative NOMA, with seeded Monte Carlo experiment recipes."""

from .channel import (ChannelModel, SicOrdering, UserChannel, order_strengths,
                      order_users, sample_channel, sample_gains, substream)
from .errors import (ConfigError, DegenerateClusterError, DimensionError,
                     InfeasibleError, NoNullSpaceError, NomaError,
                     OrderingViolationError)
from .siso import (BandwidthSplit, PowerAllocation, RateReport,
                   downlink_noma_rates, downlink_oma_rates, rate_region_sweep,
                   sum_capacity_vs_bandwidth, uplink_noma_rates)

__version__ = "0.1.0"
