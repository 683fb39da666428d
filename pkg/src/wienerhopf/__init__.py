"""Wiener-Hopf and Nica-Toeplitz algebras of quasi-lattice ordered pairs, at finite truncation."""
from .coeff_algebra import (Action, AlgebraDescriptor, AlgebraElement, Endomorphism, Unitisation, alpha_of_word,
                            unitise, verify_endomorphism)
from .config import ConfigError, RunConfig, load_config
from .fock_rep import AMatrix, Basis, FockRepresentation, TruncationWindow, operator_norm
from .groupoid_rep import (GDiagonalElement, GroupoidArrow, SectionElement, WienerHopfGroupoid, enumerate_arrows)
from .kk_fredholm import (HomotopyModule, HomotopyOperator, KasparovData, commutator_defect, homotopy_nica_check,
                          homotopy_operator)
from .nica_symbolic import (DiagonalForm, NicaAlgebra, NonDiagonalError, NormalFormElement, check_w_relations,
                            diagonal_norm, to_diagonal, unitise_split_check)
from .presets import c2_action, default_action, scalar_action
from .qlattice_core import (ConstructibleSet, FreeAbelianGroup, FreeGroup, GroupWord, MonoidWord, OmegaPoint,
                            PrincipalIdeal, ZkVector, atomize, format_word, meet, omega_membership, parse_word,
                            positive_ideal, reduce, right_leq)
from .report import CheckResult

__all__ = [
    "Action", "AlgebraDescriptor", "AlgebraElement", "Endomorphism", "Unitisation", "alpha_of_word",
    "unitise", "verify_endomorphism",
    "ConfigError", "RunConfig", "load_config",
    "AMatrix", "Basis", "FockRepresentation", "TruncationWindow", "operator_norm",
    "GDiagonalElement", "GroupoidArrow", "SectionElement", "WienerHopfGroupoid", "enumerate_arrows",
    "HomotopyModule", "HomotopyOperator", "KasparovData", "commutator_defect", "homotopy_nica_check",
    "homotopy_operator",
    "DiagonalForm", "NicaAlgebra", "NonDiagonalError", "NormalFormElement", "check_w_relations",
    "diagonal_norm", "to_diagonal", "unitise_split_check",
    "c2_action", "default_action", "scalar_action",
    "ConstructibleSet", "FreeAbelianGroup", "FreeGroup", "GroupWord", "MonoidWord", "OmegaPoint",
    "PrincipalIdeal", "ZkVector", "atomize", "format_word", "meet", "omega_membership", "parse_word",
    "positive_ideal", "reduce", "right_leq",
    "CheckResult",
]

__version__ = "0.1.0"
