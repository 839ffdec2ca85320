"""Exact 3D-index q-series of ideal triangulations of cusped 3-manifolds.

The index is computed as a generating series over Q-normal surface classes:
each class contributes (-q^(1/2))^(-chi(S*)) J(S*) with S* its minimal
nonnegative representative, summed over the image lattice of the edge
solutions modulo tetrahedral solutions.  All arithmetic is exact.
"""

from .angles import (FarkasWitness, InternalInconsistency, MissingCuspRows,
                     euler_via_angles, rotational_holonomy,
                     solve_vanishing_holonomy, strict_exists_vanishing_holonomy)
from .engine import (DivergenceWitness, EnumerationLimits, IndexRequest,
                     IndexResult, NonIntegerBaseClass, divergence_probe, index,
                     index_peripheral)
from .pachner import (IllegalMove, MoveSpec, StepMismatch, apply_move,
                      invariance_check, move_02, move_20, move_23, move_32,
                      move_from_table_entry, parse_path_file, verify_path)
from .qnormal import (ClassDescriptor, RankMismatch, boundary, chi, class_of,
                      degree, double_arc, double_arc_bilinear, is_qnormal,
                      lattice_structure, minimal_rep, same_class, symplectic)
from .series import HalfInt, TruncatedSeries, pochhammer_inverse
from .surfaces import (EfficiencyReport, closed_cone_rays, efficiency_report,
                       gen_surface_degree, triangulation_efficiency)
from .tetindex import j_min_degree, j_product, tet_index_I, tet_index_J
from .tri import (GluingData, InvalidTriangulation, MalformedSignature,
                  ParseError, ShapeError, Triangulation, decode_isosig,
                  edge_classes, edge_equation_matrix, encode_isosig,
                  gluing_data_from_triangulation, load_gluing_matrix,
                  qmatching_matrix)

__version__ = "0.1.0"
