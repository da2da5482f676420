"""Exact homological computations with finite dg categories.

The toolkit works over the rationals or a prime field and keeps every
answer exact: chain-level data is stored as sparse matrices of field
scalars, homology is computed by Gaussian elimination, and every result
that depends on a truncation bound carries an explicit exact/truncated
certificate.

Layers, bottom up:

* ``exactfield`` -- fields, sparse matrices, chain complexes.
* ``dgcore`` / ``presentation`` -- dg categories, cells, tensor products,
  presentations and their realizations.
* ``dgmod`` -- dg modules, bimodules, the two-sided bar construction.
* ``hochschild`` / ``cyclic`` -- cyclic-bar machinery: HH, mixed
  complexes, HC, HC^-, HP towers.
* ``saturation`` -- properness/smoothness certificates, dualizability
  data, Euler characteristics by two routes.
* ``cli`` -- command-line front end emitting JSON reports.
"""

from .exactfield import FieldSpec, Matrix, ChainComplex, rank, kernel_basis, homology_dims, euler_char
from .dgcore import DgCategory, DgFunctor, validate, unit_category, sphere_cell, disk_cell, cell_inclusion, opposite, tensor
from .presentation import Presentation, pushout_attach, pushout_attach_object, realize

__all__ = [
    "FieldSpec", "Matrix", "ChainComplex", "rank", "kernel_basis",
    "homology_dims", "euler_char",
    "DgCategory", "DgFunctor", "validate", "unit_category", "sphere_cell",
    "disk_cell", "cell_inclusion", "opposite", "tensor",
    "Presentation", "pushout_attach", "pushout_attach_object", "realize",
]
