"""Deciding subgroup quasiconvexity with finite-state machinery.

Two partial algorithms over automatic group structures with unique
normal forms: a stagewise coset-graph detector that halts exactly on
subgroups whose normal-form preimage is regular (returning its
acceptor), and a quasigeodesity prober for hyperbolic ambient groups.
Everything reduces to a small calculus of one- and two-tape automata.
"""

from .coset import (
    CosetGraphApprox,
    CosetLimitError,
    SubgroupSpec,
    enumerate_cosets,
    graph_to_fsa,
)
from .detector import (
    DetectionBudget,
    DetectorError,
    RationalExhausted,
    RationalFound,
    detect_rational,
    generates,
    member,
)
from .fsa import Fsa, FsaError, StateBudgetError, combine, equivalent
from .hyperbolic import (
    HBall,
    HyperbolicContext,
    HyperbolicError,
    QcExhausted,
    QcReport,
    detect_quasiconvex,
    epsilon_from,
    h_ball,
    min_lambda,
    v_geodesic_words,
)
from .pairs import NoImageError, NotUniqueError, PairAlphabet, PairFsa
from .structure import AutomaticStructure, StructureError, ValidationReport
from .words import (
    GeneratorAlphabet,
    Presentation,
    Word,
    free_reduce,
    parse_presentation,
)

__version__ = "0.1.0"

__all__ = [
    "AutomaticStructure",
    "CosetGraphApprox",
    "CosetLimitError",
    "DetectionBudget",
    "DetectorError",
    "Fsa",
    "FsaError",
    "GeneratorAlphabet",
    "HBall",
    "HyperbolicContext",
    "HyperbolicError",
    "NoImageError",
    "NotUniqueError",
    "PairAlphabet",
    "PairFsa",
    "Presentation",
    "QcExhausted",
    "QcReport",
    "RationalExhausted",
    "RationalFound",
    "StateBudgetError",
    "StructureError",
    "SubgroupSpec",
    "ValidationReport",
    "Word",
    "combine",
    "detect_quasiconvex",
    "detect_rational",
    "enumerate_cosets",
    "epsilon_from",
    "equivalent",
    "free_reduce",
    "generates",
    "graph_to_fsa",
    "h_ball",
    "member",
    "min_lambda",
    "parse_presentation",
    "v_geodesic_words",
    "__version__",
]
