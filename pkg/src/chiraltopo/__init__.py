"""Topological invariants of gapped tight-binding Hamiltonians and the
difference-group calculus of Karoubi triples for chiral (class AIII) phases."""

__version__ = "0.1.0"

from .bloch import (
    ChiralOperator,
    GradingField,
    HermitianField,
    TimeReversalOperator,
    check_chiral,
    check_time_reversal,
    flatten,
    spectral_gap,
)
from .chiral import (
    UnitaryField,
    extract_q,
    gamma_from_q,
    gamma_from_reference,
    gauge_transform,
    to_canonical_basis,
)
from .grid import BrillouinGrid, GridPoint, finite_difference, integrate, make_grid
from .invariants import (
    InvariantKind,
    InvariantReport,
    chern_number,
    relative_winding,
    valence_projection,
    winding3,
    winding_number,
)
from .ktheory import (
    DifferenceClass,
    DifferenceKind,
    KaroubiTriple,
    PointModule,
    TorusModule,
    add_triples,
    compose_triples,
    invert_triple,
    projection_homotopy,
    reduce,
    reduce_point,
    reduce_torus,
    rotation_path,
)
from .models import (
    ModelSpec,
    build,
    build_degree_map,
    build_qn,
    build_qwz,
    build_random_gapped,
    build_ssh,
)
