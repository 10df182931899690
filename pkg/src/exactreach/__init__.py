"""Exact maximal and minimal reachability probabilities for Markov decision
processes, computed by warm-starting a rational simplex from the basis of a
floating-point candidate scheduler.
"""

from .lp import Basis, LpProblem, basis_from_scheduler, build_lp, default_basis
from .mdp import FinitePath, MarkovChain, Mdp, path_probability, restrict, validate_mdp
from .modelfile import Model, format_model, parse_model, read_model
from .pipeline import ExactResult, ResultStatus, RunOptions, run
from .qualitative import MaybeAnalysis, Objective, is_apt, maybe_states, prob0_max, prob0_min
from .simplex import Status, dual_simplex, factorize_basis, primal_simplex
from .value_iteration import value_iterate

__version__ = "0.1.0"
