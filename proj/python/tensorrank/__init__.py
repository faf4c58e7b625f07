"""Exact tensor rank and border-rank certificates."""

import json as _json

from . import _core
from ._core import (
    BudgetExceeded,
    Field,
    FieldTooSmall,
    InvalidCertificate,
    InvalidField,
    ParseError,
    Tensor,
    TensorRankError,
    brute_force_rank,
    chi_tensor,
    experiment_names,
    flattening_lower_bound,
    kronecker_product,
    matmul_tensor,
    strassen_tensor,
    substitution_lower_bound,
    tensor_product,
    unit_tensor,
    w_tensor,
)

__all__ = [
    "BudgetExceeded",
    "Field",
    "FieldTooSmall",
    "InvalidCertificate",
    "InvalidField",
    "ParseError",
    "Tensor",
    "TensorRankError",
    "brute_force_rank",
    "certify_rank",
    "chi_tensor",
    "experiment_names",
    "flattening_lower_bound",
    "kronecker_product",
    "matmul224_decomposition",
    "matmul_tensor",
    "pencil",
    "power_decomposition",
    "run_experiment",
    "strassen7_decomposition",
    "strassen_degeneration",
    "strassen_tensor",
    "substitution_lower_bound",
    "tensor_product",
    "unit_tensor",
    "verify",
    "w3_squared_decomposition",
    "w_degeneration",
    "w_tensor",
]


def _text(certificate):
    return certificate if isinstance(certificate, str) else _json.dumps(certificate)


def w_degeneration(field, k):
    """Degeneration certificate of unit(2, k) to W_k, as a dict."""
    return _json.loads(_core.w_degeneration(field, k))


def strassen_degeneration(field, q, k=3):
    return _json.loads(_core.strassen_degeneration(field, q, k))


def w3_squared_decomposition(field):
    return _json.loads(_core.w3_squared_decomposition(field))


def strassen7_decomposition(field):
    return _json.loads(_core.strassen7_decomposition(field))


def matmul224_decomposition(field):
    return _json.loads(_core.matmul224_decomposition(field))


def power_decomposition(degeneration, n):
    """Decomposition certificate of the n-th tensor power of the target."""
    return _json.loads(_core.power_decomposition(_text(degeneration), n))


def verify(certificate, target):
    """Checks a certificate (dict or JSON text) against a Tensor."""
    return _json.loads(_core.verify(_text(certificate), target))


def certify_rank(t, methods=("flattening",), decomposition=None):
    dec = None if decomposition is None else _text(decomposition)
    return _json.loads(_core.certify_rank(t, list(methods), dec))


def pencil(t, extrapolate=False, seed=0x5EED):
    """Kronecker canonical form, basis change and rank of a 2 x n x m tensor."""
    return _json.loads(_core.pencil(t, extrapolate, seed))


def run_experiment(name, field=None, seed=None, **params):
    if seed is not None:
        params["seed"] = seed
    return _json.loads(_core.run_experiment(name, field, **params))
