"""Achievement sets (sets of all subsums) of absolutely convergent series."""
from .classifier import (
    CANTOR,
    CANTORVAL,
    INTERVALS,
    UNDETERMINED,
    CantorCert,
    CantorvalCert,
    Classification,
    ClassificationError,
    IntervalCert,
    NoCertificate,
    PreconditionError,
    cantorval_test,
    classify,
    kakeya_cantor_test,
    kakeya_interval_test,
)
from .compactset import IntervalUnion, IntervalUnionError, hausdorff, normalize
from .families import (
    FamilyError,
    FamilySpec,
    eq1_check,
    eq2_check,
    exp_generator,
    exp_mixture,
    geometric,
    gliding_hump,
    guthrie_nymann,
    inclusion_check,
    jones_x,
    jones_x_combination,
    jones_y,
    jones_y_combination,
    pow_mixture,
    power_generator,
    spaceability_combine,
    spaceability_sequence,
)
from .numbers import Enclosure, format_rational, parse_rational
from .sequences import (
    BlockMixture,
    Explicit,
    PowerMixture,
    Ratio,
    Sequence,
    SequenceError,
    SpaceabilitySequence,
    linear_combination,
    polynomial,
    power_product,
)
from .subsum import SubsumApproximation, approximate, oracle_compare, refine
from .verify import verify_classification

__version__ = "0.1.0"
