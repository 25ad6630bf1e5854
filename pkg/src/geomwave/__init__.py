"""Interpolatory Hermite multiwavelet transforms for vector-valued and
manifold-valued (sphere, rotation group) data.

Core pipeline: an interpolatory Hermite subdivision predictor (cubic or
level-dependent exponential), the derived biorthogonal prediction-correction
filter bank, and its geodesic analogue built from exp/log/parallel-transport,
with detail coefficients living in fibers of TM + TM.
"""

from .errors import (
    BaseMismatchError,
    CutLocusError,
    DensityError,
    GeomwaveError,
    SchemaError,
    VerificationFailure,
)
from .predictors import (
    MaskProvider,
    cubic_hermite_mask,
    cubic_provider,
    exponential_hermite_mask,
    exponential_provider,
)
from .sequences import HermiteSequence, Mask, periodic_sequence, interior_sequence
from .filterbank import (
    PredictionCorrectionBank,
    build_bank,
    decompose_linear,
    reconstruct_linear,
)
from .manifolds import Euclidean, SO3Quat, Sphere2, manifold_from_tag
from .transform import (
    ManifoldHermiteSeq,
    ManifoldPyramid,
    decompose_manifold,
    reconstruct_manifold,
)
from .signals import get_preset, preset_names, sample_signal
from .experiments import decay_experiment, verify_suite

__version__ = "0.1.0"
