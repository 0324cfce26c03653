"""Diameter graphs in R^d and their antipodal double-cover drawings on the sphere."""

from ._kernels import BACKEND
from .cover import (CycleClass, SphericalDrawing, build_double_cover, classify_cycle,
                    euler_check, verify_no_crossings)
from .cycles import enumerate_cycles, verify_odd_cycles_intersect
from .extremal import (SearchConfig, gen_random, gen_spindle, gen_tetrahedron,
                       search_max_diameters)
from .geometry import (DEFAULT_TOL, GreatArc, Tolerance, arc_intersect, normalize,
                       point_in_region, spherical_hull)
from .graph import (DiameterGraph, PointSet, build_diameter_graph, compute_diameter,
                    compute_diameter_fast, prune_low_degree, verify_bound)
from .io import dumps_pointset, parse_pointset
from .pipeline import analyze, run_checks
from .regions import (antipode, build_region, check_lemma1, check_lemma2, check_lemma3,
                      interior_point, random_lemma3_instance)
from .report import VerificationReport
from .svg import render_svg

__version__ = "0.1.0"
