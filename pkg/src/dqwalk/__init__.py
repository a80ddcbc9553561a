"""One-dimensional discrete-time quantum walks with homogeneous position decoherence.

Three routes to the walk's spreading are provided and cross-check each other:
the closed-form variance ``a t^2 + b t + c`` (:mod:`dqwalk.analytic`), exact
momentum-space moment sums (:func:`dqwalk.analytic.spectral_moment_oracle`)
and direct density-matrix evolution (:mod:`dqwalk.simulator`).
"""

from .analytic import (
    ALPHA,
    VarianceModel,
    gamma1,
    gamma2,
    gamma2_prime,
    hadamard_dispersion,
    spectral_moment_oracle,
    variance_at,
    variance_model,
)
from .channel import (
    ChannelInvariants,
    HomogeneousChannel,
    ShiftKrausOp,
    channel_from_dict,
    channel_invariants,
    coherent_channel,
    g_function,
    pure_shift_channel,
    tunneling_channel,
    tunneling_from_bias,
    validate,
)
from .core import (
    HADAMARD,
    bloch_from_density,
    bloch_of_state,
    density_from_bloch,
    walk_transfer_matrix,
    zl_zr_matrices,
)
from .exceptions import DQWalkError
from .simulator import WalkObservables, WalkState, init_state, negativity, observables, run, step

__version__ = "0.1.0"
