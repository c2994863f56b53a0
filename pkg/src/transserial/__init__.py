"""Exact generalized series over exp-log chains: derivations, asymptotic integration, logarithms
and the exponential closure tower."""

from .chain import LOGEXP, Chain
from .constants import Constant
from .derivation import DerivationSpec, derive, log_derivative
from .elclosure import SharpMonomial, Tower, normalize, sharp_derive, sharp_exp, sharp_log, tower_ai
from .errors import AtThetaHat, Obstruction, SummabilityViolation, TransserialError
from .monomial import ONE, Monomial
from .prelog import PrelogSpec, PrelogValue, log
from .series import Series
from .settings import settings, using
from .asympint import ai, find_psi, integrate

__all__ = [
    "LOGEXP", "ONE", "AtThetaHat", "Chain", "Constant", "DerivationSpec", "Monomial", "Obstruction",
    "PrelogSpec", "PrelogValue", "Series", "SharpMonomial", "SummabilityViolation", "Tower",
    "TransserialError", "ai", "derive", "find_psi", "integrate", "log", "log_derivative", "normalize",
    "settings", "sharp_derive", "sharp_exp", "sharp_log", "tower_ai", "using",
]
