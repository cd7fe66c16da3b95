"""Backend-dispatched hot kernels.

`stepup.kernels.impl` is the active backend module (numba or numpy, chosen by
STEPUP_BACKEND — see stepup.backend).  Both backends expose the same names
with bit-identical results; `get_impl("numpy")`/`get_impl("numba")` load a
specific one, used by the cross-backend tests and the benchmark.
"""

from __future__ import annotations

from ..backend import active_backend
from .common import (  # noqa: F401
    BLUE,
    RED,
    N_SHAPES,
    SHAPE_DEC,
    SHAPE_INC,
    SHAPE_PEAK,
    SHAPE_VALLEY_DOWN,
    SHAPE_VALLEY_UP,
    all_combinations,
    binomial_table,
    colex_rank4,
    quad_patterns,
)

if active_backend() == "numba":
    from . import numba_impl as impl
else:
    from . import numpy_impl as impl


def get_impl(name: str):
    if name == "numba":
        from . import numba_impl

        return numba_impl
    if name == "numpy":
        from . import numpy_impl

        return numpy_impl
    raise ValueError(f"unknown backend {name!r}")


delta_arr = impl.delta_arr
delta_consecutive = impl.delta_consecutive
eval_edges = impl.eval_edges
scan_cliques6_table = impl.scan_cliques6_table
scan_cliques_table = impl.scan_cliques_table
count_cliques6_sampled = impl.count_cliques6_sampled
first_clique6_sampled = impl.first_clique6_sampled
first_good_tuple = impl.first_good_tuple
bad_nsubsets_exhaustive = impl.bad_nsubsets_exhaustive
bad_nsubsets_given = impl.bad_nsubsets_given
first_pattern_subset_table = impl.first_pattern_subset_table
first_pattern_subset_oracle = impl.first_pattern_subset_oracle
conflict_subsets_table = impl.conflict_subsets_table
greedy_conflict_free = impl.greedy_conflict_free
alpha_bb = impl.alpha_bb
