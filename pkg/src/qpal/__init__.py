"""Model checking for quantified public announcement logics on finite models."""

from .bisimulation import (
    CapExceeded,
    bisimilar,
    characteristic_formula,
    closed_sets,
    quotient,
    quotient_model,
)
from .fmp import check_fmp_suite
from .formula import expand, is_group_announcement, measures
from .model import Model, ModelError, PointedModel, build, example1_model, restrict, truncation
from .quantified import Certificate, check, diamond_witness, evaluate, group_extensions
from .semantics import extension, holds, update
from .syntax import ParseError, parse, render

__all__ = [
    "CapExceeded",
    "Certificate",
    "Model",
    "ModelError",
    "ParseError",
    "PointedModel",
    "bisimilar",
    "build",
    "characteristic_formula",
    "check",
    "check_fmp_suite",
    "closed_sets",
    "diamond_witness",
    "evaluate",
    "example1_model",
    "expand",
    "extension",
    "group_extensions",
    "holds",
    "is_group_announcement",
    "measures",
    "parse",
    "quotient",
    "quotient_model",
    "render",
    "restrict",
    "truncation",
    "update",
]
