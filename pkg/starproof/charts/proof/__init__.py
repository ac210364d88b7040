"""BBP certificates: format, checker and builder. Pipeline generators live in proof.solutions."""
from .builder import Derivation, ProofBuilder
from .certificate import (
    AXIOMS,
    RULES,
    Certificate,
    CheckResult,
    Equation,
    ProofStep,
    ProvableSolution,
    check_certificate,
    load_certificate,
    save_certificate,
)
