"""
Arbor Reduction Registry.

The named reductions available to `arbor reduce` and to the soundness sweeps, and the lookup of a reduction by name.

Imports:
    - arbor.core.reductions: The reduction implementations.

Constants:
    - CLASS_MAP: Reduction classes by name.

Functions:
    - list_reductions: Every registered reduction, by name.
    - get_reduction: A fresh reduction by name.
"""

from arbor.core.model.errors import ErrorCode, WorkbenchError
from arbor.core.reductions.base import Reduction
from arbor.core.reductions.orders import Ads, Em
from arbor.core.reductions.patterns import Delta2, OrderToColoring, SemiAncestry
from arbor.core.reductions.sher import Sher, TcacToSher
from arbor.core.reductions.tac import PathToAntichain, Rt1k, SacToTac, TacToTcacCe, TcacCeToTcac

CLASS_MAP: dict[str, type[Reduction]] = {
    cls.name: cls
    for cls in (
        PathToAntichain,
        TacToTcacCe,
        TcacCeToTcac,
        Rt1k,
        SacToTac,
        Ads,
        Em,
        Sher,
        TcacToSher,
        Delta2,
        SemiAncestry,
        OrderToColoring,
    )
}


def list_reductions() -> list[type[Reduction]]:
    return list(CLASS_MAP.values())


def get_reduction(name: str) -> Reduction:
    """
    Instantiate a registered reduction.

    Args:
        name: The registered name, e.g. `ads`.

    Returns:
        A fresh instance of the reduction.

    Raises:
        WorkbenchError: BAD_PARAMS for unknown names, listing the registered ones.
    """
    reduction_class = CLASS_MAP.get(name)
    if reduction_class is None:
        raise WorkbenchError(ErrorCode.BAD_PARAMS, f"unknown reduction {name!r}; known: {', '.join(CLASS_MAP)}")
    return reduction_class()
