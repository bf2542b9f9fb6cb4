"""Latin-square interference alignment for the K x 3 MIMO X channel."""

from .beamform import (BeamformerSet, BeamformerSpace, build_beamformers,
                       chain_matrix, choice_to_index, index_to_choice,
                       set_count, validate_ia)
from .channel import ChannelRealization, awgn, draw_channel
from .latin import (AlignmentScheme, BeamformerId, LatinSquare, alignment_pairs,
                    build_schemes, enumerate_fixed_first_row, extract_chains,
                    scheme_from_columns)
from .receiver import signal_space, stream_metrics, zero_forcing
from .select import (Objective, Strategy, select_cn_shortlist,
                     select_exhaustive, select_over_schemes, select_random_u)
from .sim import SimConfig, run_correlation, run_ser, run_sumrate, run_validate

__version__ = '0.1.0'
