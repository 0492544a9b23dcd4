"""Sign-stability gated entropy-stable flux.

At each interface the non-oscillatory flux ``F^s`` replaces the entropy-
conservative flux ``F*`` whenever ``F* - F^s`` has the same sign as the jump
across the interface. The implied diffusion ``F* - F^hat`` then has a
non-negative inner product with the entropy-variable jump, so no dissipation
operator is ever formed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ParameterError

SELECTOR_MODES = ("interface", "componentwise")
JUMP_VARIABLES = ("conserved", "entropy")


@dataclass(frozen=True)
class SelectorConfig:
    mode: str = "interface"
    zero_tol: float = 1e-13
    jump_variable: str = "conserved"

    def __post_init__(self):
        if self.mode not in SELECTOR_MODES:
            raise ParameterError(f"selector mode must be one of {SELECTOR_MODES}")
        if self.jump_variable not in JUMP_VARIABLES:
            raise ParameterError(f"jump variable must be one of {JUMP_VARIABLES}")
        if not self.zero_tol >= 0:
            raise ParameterError("zero_tol must be non-negative")


class InterfaceRecord(NamedTuple):
    f_ec: np.ndarray
    f_ns: np.ndarray
    f_hat: np.ndarray
    chi: np.ndarray  # bool, per component
    diffusion: np.ndarray
    q_star: np.ndarray | None = None
    q_hat: np.ndarray | None = None


def _component_match(a, b, tol):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    both_zero = (np.abs(a) <= tol) & (np.abs(b) <= tol)
    same_sign = ((a > tol) & (b > tol)) | ((a < -tol) & (b < -tol))
    return both_zero | same_sign


def sign_match(a, b, zero_tol: float = 1e-13, mode: str = "interface"):
    """Sign agreement of ``a`` and ``b`` along the last (component) axis.

    Returns one bool per interface in ``interface`` mode and a per-component
    mask in ``componentwise`` mode.
    """
    if mode not in SELECTOR_MODES:
        raise ParameterError(f"selector mode must be one of {SELECTOR_MODES}")
    m = _component_match(np.atleast_1d(a), np.atleast_1d(b), zero_tol)
    if mode == "interface":
        return np.all(m, axis=-1)
    return m


def esno_flux(f_ec, f_ns, jump, cfg: SelectorConfig = SelectorConfig()) -> InterfaceRecord:
    """Gate between ``F*`` and ``F^s`` given the interface jump (conserved or entropy variables)."""
    f_ec = np.atleast_1d(np.asarray(f_ec, dtype=float))
    f_ns = np.atleast_1d(np.asarray(f_ns, dtype=float))
    match = _component_match(f_ec - f_ns, np.atleast_1d(jump), cfg.zero_tol)
    if cfg.mode == "interface":
        match = np.broadcast_to(np.all(match, axis=-1, keepdims=True), match.shape)
    f_hat = np.where(match, f_ns, f_ec)
    return InterfaceRecord(f_ec, f_ns, f_hat, np.array(match), f_ec - f_hat)


def interface_entropy_flux(record: InterfaceRecord, vL, vR) -> InterfaceRecord:
    """Fill ``q_hat = q* - vbar . (F* - F^hat)``; requires ``q_star``."""
    if record.q_star is None:
        raise ParameterError("record has no q_star")
    vbar = 0.5 * (np.asarray(vL, dtype=float) + np.asarray(vR, dtype=float))
    q_hat = record.q_star - np.sum(vbar * record.diffusion, axis=-1)
    return record._replace(q_hat=q_hat)


def entropy_dissipation_check(record: InterfaceRecord, vL, vR) -> np.ndarray:
    """``[[v]] . (F* - F^hat)``; non-negative whenever the gate is entropy-stable."""
    dv = np.asarray(vR, dtype=float) - np.asarray(vL, dtype=float)
    return np.sum(dv * record.diffusion, axis=-1)
