"""Multiplicative-function toolkit: self-repulsive prime sets, large-sieve
survivor bounds, explicit-constant verification, and Lehmer-type equation scans."""

from .arith import (
    ArithProfile,
    Factorization,
    dedekind_psi,
    euler_phi,
    factor,
    from_pairs,
    phi_a,
    profile,
    unitary_phi,
    unitary_sigma,
)
from .bounds import (
    assemble_M,
    assemble_M_exact,
    chain_grid_report,
    chain_margin,
    delta,
    delta1,
    delta_psi,
    eta,
    eta_psi,
    pu_upper_eq32,
    solve_m,
    theorem_check,
    thm21_pi_bound,
)
from .catalog import Catalog, ConstantCheck, load_catalog, verify_all, verify_constant
from .largesieve import (
    SieveSystem,
    b0_estimate,
    divisor_summatory,
    from_prime_set,
    lemma21_check,
    lemma22_margin,
    restricted_sum,
    survivor_bound,
    survivor_count,
)
from .repulsive import (
    PrimeSet,
    greedy_construct,
    is_self_repulsive,
    set_of_integer,
    stats,
)
from .search import (
    AuditReport,
    Solution,
    fermat_family,
    lehmer_audit,
    scan,
    subbarao_audit,
)

__version__ = "1.0.0"

__all__ = [
    "ArithProfile",
    "AuditReport",
    "Catalog",
    "ConstantCheck",
    "Factorization",
    "PrimeSet",
    "SieveSystem",
    "Solution",
    "assemble_M",
    "assemble_M_exact",
    "b0_estimate",
    "chain_grid_report",
    "chain_margin",
    "dedekind_psi",
    "delta",
    "delta1",
    "delta_psi",
    "divisor_summatory",
    "eta",
    "eta_psi",
    "euler_phi",
    "factor",
    "fermat_family",
    "from_pairs",
    "from_prime_set",
    "greedy_construct",
    "is_self_repulsive",
    "lehmer_audit",
    "lemma21_check",
    "lemma22_margin",
    "load_catalog",
    "phi_a",
    "profile",
    "pu_upper_eq32",
    "restricted_sum",
    "scan",
    "set_of_integer",
    "solve_m",
    "stats",
    "subbarao_audit",
    "survivor_bound",
    "survivor_count",
    "theorem_check",
    "thm21_pi_bound",
    "unitary_phi",
    "unitary_sigma",
    "verify_all",
    "verify_constant",
    "__version__",
]
