"""Capacity computations for the binary random-insertion channel at small insertion probability."""

__version__ = "0.1.0"

from .channel import (ChannelParams, InsertionRealization, ProcessDiff, RunDecomposition,
                      apply_channel, as_bitword, decompose_runs, modified_realization,
                      perturbed_realization, sample_realization, segment_lengths, truncate_runs)
from .law import (GuardError, OutputDistribution, channel_law, conditional_output_entropy,
                  output_distribution)
from .capacity import (BaTrace, InputLaw, MIResult, blahut_arimoto, mutual_information,
                       upper_bound_sequence)
from .series import (ExpansionPoint, SeriesValue, a1, binary_entropy, capacity_expansion,
                     e_log_l0, epsilon2_bound, g1, hyx_asymptote, hzv_converse_bound)
from .montecarlo import (Estimate, McConfig, estimate_ab_entropy_rate,
                         estimate_boundary_ambiguity, estimate_length_biased_log_run,
                         estimate_output_length, estimate_zv_stats)
