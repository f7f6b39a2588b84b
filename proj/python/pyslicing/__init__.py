"""Python bindings for the slicing library.

Slices are exclusively owned index ranges of a shared int64 array; views
are read-only proxies that freeze their original while alive. Precondition
violations raise ``SliceError`` whose ``kind`` names the failure, e.g.
``"BoundsViolation"`` or ``"NotModifiable"``.
"""

from ._core import (
    Prng,
    RunRecord,
    Slice,
    SliceError,
    View,
    band_sizes,
    parallel_matmul,
    parallel_quicksort,
    parse_config,
    read_csv,
    run_benchmark,
    seq_matmul_oracle,
    seq_sort_oracle,
    serialized_quicksort,
    threaded_matmul,
    threaded_quicksort,
    write_csv,
)

__all__ = [
    "Prng",
    "RunRecord",
    "Slice",
    "SliceError",
    "View",
    "band_sizes",
    "parallel_matmul",
    "parallel_quicksort",
    "parse_config",
    "read_csv",
    "run_benchmark",
    "seq_matmul_oracle",
    "seq_sort_oracle",
    "serialized_quicksort",
    "threaded_matmul",
    "threaded_quicksort",
    "write_csv",
]
