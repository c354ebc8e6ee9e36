"""setlab: set-intersection structures, bounded-universe reductions, and
query-translation encoders, each verified against brute-force oracles."""

from .core import (
    CostMeter,
    InstanceFormatError,
    ParameterError,
    QueryResult,
    SetLabError,
    SetSystem,
    gen_nested_instance,
    gen_random_instance,
    load_instance,
    oracle_intersect,
    oracle_intersect_hashset,
    save_instance,
)
from .structures import (
    Alg1Structure,
    Alg2Structure,
    Alg3Structure,
    HybridStructure,
    SdCountStructure,
    build_alg1,
    build_alg2,
    build_alg3,
    build_hybrid,
    build_sd_count,
)

__version__ = "0.1.0"
