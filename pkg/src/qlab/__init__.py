"""qlab: exact q-series computation and verification laboratory."""

from .algebra import (
    BiLaurent,
    BigComplex,
    CycloElem,
    DEFAULT_PRECISION,
    LaurentPoly,
    Rational,
    Ring,
    TruncatedSeries,
    clear_pole,
    cyclo_canon,
    cyclo_embed,
    series_inv,
    series_mul,
)
from .errors import (
    DivergenceError,
    IndeterminateMagnitudeError,
    InexactDivisionError,
    NonInvertibleError,
    QlabError,
    RingMismatchError,
    SingularEvaluationError,
    UnknownSeriesError,
    UnknownSuiteError,
)
from .partitions import (
    Partition,
    UnimodalCountTable,
    crank,
    cn_coefficient,
    jz_weight,
    partition_mobius,
    partitions_of,
    subpartitions,
    unimodal_counts,
)
from .series import (
    PochhammerSpec,
    b_modular,
    eval_numeric,
    f_mock,
    g3_forward,
    g3_inverted,
    jbracket_cleared,
    pochhammer,
    qbracket,
    strong_unimodal_gf,
    triple_product,
    unimodal_gf,
)
from .roots import (
    HypergeoSpec,
    PeriodicFactor,
    RadialSchedule,
    cor2_series,
    euler_cf,
    euler_cf_finite,
    f_at_odd_root,
    g3_at_root,
    hypergeo_at_root,
    periodic_infinite,
    periodic_partial,
    radial_limit,
    uk_at_root,
    watson_limit_check,
)
from .verify import run_all, run_suite, suite_ids

__version__ = "0.1.0"
