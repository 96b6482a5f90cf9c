"""Dense primal-dual SDP solver for small LMI problems."""
from ._backend import BACKEND
from .problem import (
    LmiBlock,
    SdpProblem,
    SdpSolution,
    dump_problem,
    dumps_problem,
    embed_hermitian,
    hermitian_inner,
    load_problem,
    loads_problem,
    unembed_dual,
)
from .solver import DEFAULT_OPTIONS, feasibility_bisect, solve

__all__ = [
    "BACKEND",
    "LmiBlock",
    "SdpProblem",
    "SdpSolution",
    "DEFAULT_OPTIONS",
    "dump_problem",
    "dumps_problem",
    "embed_hermitian",
    "feasibility_bisect",
    "hermitian_inner",
    "load_problem",
    "loads_problem",
    "solve",
    "unembed_dual",
]
