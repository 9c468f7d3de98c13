"""Private polynomial computation over Lagrange/RS-coded databases."""
from .field import PrimeField, FieldElement, smallest_valid_modulus
from .rs_lagrange import CodingContext, ConfigError, make_context, decoding_dimension
from .polyspace import (Candidate, CandidateSet, default_candidate_set,
                        monomial_count, nonparallel_count, polynomial_count)
from .rate_matrix import RateMatrix, build_general, build_systematic
from .query_engine import QueryPlan, plan, plan_general, plan_systematic
from .storage_sim import MessageStore, encode_store, answer
from .recovery import DecodeError, decode, verify_recovery
from .analysis import rate_general, rate_systematic, asymptotic_rates, audit_download, audit_privacy

__version__ = "0.1.0"
