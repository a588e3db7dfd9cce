"""Exact quasi-pseudometric extensions and norms on free groups.

The package works over finite quasi-pseudometric spaces with rational
distances and keeps every value exact.  It provides word algebra for free
and free abelian groups, the two-stage extension of a bounded
quasi-pseudometric to the signed alphabet, non-crossing pairings and
their cost, the induced group norms and distances with minimizing
witnesses, and a toolkit for entourage chains, finite topologies and
pair-sum neighborhood decompositions.
"""

from .errors import CapExceeded, DomainError, FormatError
from .norms import (NormWitness, PairingWitness, abelian_dist, abelian_norm,
                    abelian_norm_balanced, ball_member, graev_dist,
                    graev_norm)
from .qpspace import (QPSpace, Violation, load_space, neutral_extension,
                      parse_rational, signed_extension)
from .quniform import (Entourage, EntourageSequence, FiniteSpace,
                       PrefixDecomposition, SubsetDecomposition, compose,
                       composition_contained, decompose_prefix,
                       decompose_subset, entourage_metric, frink_metric,
                       load_entourage, load_sequence, load_topology,
                       universal_base)
from .schemes import Scheme, enumerate_schemes, is_scheme, pairing_cost
from .words import (AbelianWord, Letter, Word, from_normal_form,
                    in_length_ball, parse_abelian, parse_word)

__version__ = "0.1.0"

__all__ = [
    "AbelianWord", "CapExceeded", "DomainError", "Entourage",
    "EntourageSequence", "FiniteSpace", "FormatError", "Letter",
    "NormWitness", "PairingWitness", "PrefixDecomposition", "QPSpace",
    "Scheme", "SubsetDecomposition", "Violation", "Word", "abelian_dist",
    "abelian_norm", "abelian_norm_balanced", "ball_member", "compose",
    "composition_contained", "decompose_prefix", "decompose_subset",
    "entourage_metric", "enumerate_schemes", "frink_metric",
    "from_normal_form", "graev_dist", "graev_norm", "in_length_ball",
    "is_scheme", "load_entourage", "load_sequence", "load_space",
    "load_topology", "neutral_extension", "parse_abelian", "parse_rational",
    "parse_word", "pairing_cost", "signed_extension", "universal_base",
]
