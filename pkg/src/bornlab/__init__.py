"""bornlab: a lattice laboratory for filter-built quantum mechanics.

The library models experiments as setups (source, hole-filters, detector),
assigns them complex amplitudes so that chaining multiplies and widening a
filter adds, and then checks numerically that squared-modulus detection
probabilities, the weighted inner product, and unitary time evolution all
follow from that starting point.
"""

from .amplitudes import (
    ResourceError,
    apply_filter,
    elementary_amplitude,
    path_sum_amplitude,
    setup_amplitude,
    wave_function_of,
)
from .arrays import (
    CurveArray,
    DegenerateCurveError,
    DiscreteArray,
    continuous_entropy,
    discrete_entropy,
    entropy_drift,
    great_circle_curve,
    segment_length,
    segment_lengths,
)
from .born import (
    DetectionVerdict,
    FrequencyWindow,
    Verdict,
    born_distance_sq,
    born_probability,
    enumerated_replica_distance_sq,
    filter_effect,
    verdict,
)
from .dynamics import Dynamics, NumericalError, evolve, hamiltonian, propagator, step_operator
from .lattice import (
    Measure,
    WaveFunction,
    basis_spike,
    hilbert_distance_sq,
    inner_product,
    norm_sq,
    normalized,
)
from .observables import ComplexDetector, apparatus_unitary, build_observable, measure
from .setups import (
    CompositionError,
    Filter,
    Preparation,
    Setup,
    SpacetimePoint,
    and_compose,
    or_compose,
)
from .setupdoc import (
    SetupDocumentError,
    SetupSemanticError,
    SetupSyntaxError,
    parse_setup,
    serialize_setup,
)

__version__ = "0.1.0"
