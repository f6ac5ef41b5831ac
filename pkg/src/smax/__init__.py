"""Spacelike singular maximal surfaces in Lorentz-Minkowski 3-space.

Solvers for the invariant profile equations (including the singular axis
problem for rotational surfaces), a continuation-method Dirichlet solver for
graphs, mesh generators and curvature-based residual checks.
"""

from .errors import *  # noqa: F401,F403
from .lorentz import (ETA, TIME_AXIS, Causal, GraphSample, LVec3, SurfaceMesh, causal_character,
                      eqL_residual, graph_mean_curvature, graph_Q_residual, lorentz_cross,
                      mesh_mean_curvature, minkowski_dot, normalize_timelike, q_operator)
from .profile import (Check, Endpoint, ProfileSolution, QualReport, classify_profile,
                      closed_form_catenary, closed_form_hyperbola, first_integral_mu,
                      solve_profile_1d)
from .rotational import (CASE_TABLE, PicardConfig, RotClass, classify_rotational, cone_profile,
                         extend_rotational, picard_operator, picard_solve, rotational_residual,
                         solve_from_interior, solve_rotational)
from .surfaces import (Dilate, RotateZ, TessellationSpec, TranslateHorizontal, canonical_surface,
                       lightlike_surface, rotate_x_axis, rotate_z_axis, transform,
                       translation_surface)
from .dirichlet import (BarrierReport, DirichletOptions, GridField, RectDomain, SolveReport,
                        assemble_Qt, c1_bound, estimate_report, solve_dirichlet, solve_disk_radial,
                        verify_barrier)
from .io import emit_report

__version__ = "0.1.0"
