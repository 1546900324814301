"""The group of points of the 3-sphere mod n, its point counts, and a twin-prime series engine."""

from .chebyshev import ChebPair, cheb_eval, scalar_mul
from .counting import prime_test_sphere, r4_bruteforce, r4_formula, twin_test_sphere
from .errors import (
    BadFactorization,
    DomainError,
    LimitExceeded,
    ModulusMismatch,
    NotInvertible,
    NotOnSphere,
    OutOfRange,
    SieveRange,
    SingularFit,
)
from .fit import ModelFit, fit_tau2_model
from .modring import GaussMod, ModInt, gauss_mul, mod_inv
from .series import det_A, hl_estimate, omega_partial, reproduce_table, summand_F
from .sieve import Factorization, SpfTable, factorize, is_prime, twin_count
from .sphere_group import SpherePoint, add, element_order, neg, phi, theta
from .structure import FiniteGroupTable, alternating_group, is_isomorphic, quotient_by_H

__version__ = "0.1.0"
