"""Python interface to the H^m-nonconforming virtual element core."""

from ._pvem import (
    Mesh,
    convergence,
    element_matrices,
    load_mesh,
    make_grid,
    num_dofs,
    patch_test,
    polygon_zoo,
    save_mesh,
)

__all__ = [
    "Mesh",
    "convergence",
    "element_matrices",
    "load_mesh",
    "make_grid",
    "num_dofs",
    "patch_test",
    "polygon_zoo",
    "save_mesh",
]
