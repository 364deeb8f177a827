"""Density certificates and modular orbits for surface-group representations into tori."""

from .angles import (Angle, SymbolTable, ThetaMatrix, angle_add, angle_is_pi_rational,
                     angle_new, evaluate_word, parse_angle, theta_from_generators)
from .density import (ClosureNormalForm, DensityCertificate, certify_density,
                      closure_normal_form, find_dense_curve, is_pi_q_free, rank_z)
from .errors import (DimensionError, HypothesisViolation, InvariantError, NotSaturated,
                     TableMismatch, UnknownSymbol)
from .kronecker import (ApproxRequest, ApproxResult, Strategy, approx_1d, approx_handle,
                        approx_symplectic)
from .lattice import complete_to_unimodular, hnf, rational_kernel, saturate
from .orbit import (FloatTorusMatrix, OrbitSample, classify_orbit_genus1, dispersion,
                    orbit_explore, project_to_float)
from .builtin_examples import get_example
from .symplectic import (GeneratorWord, LatticeChange, SymplecticMatrix, act_on_theta,
                         change_lattice, is_symplectic, standard_J, symplectic_generators)

__version__ = "0.1.0"
