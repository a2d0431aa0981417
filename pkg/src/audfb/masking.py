"""Frame multipliers on subband coefficients and an irrelevance filter.

A multiplier weights every analysis coefficient before synthesis,
M x = synthesize(fb_syn, m * analyze(fb_ana, x)); with weights in {0, 1} it
is a time-frequency mask. The irrelevance filter builds such a binary mask
automatically: per time slice, every channel whose level falls below an
adaptive threshold is zeroed. The threshold is a two-slope spreading model
on an auditory scale: each masker channel casts a shadow that decays
linearly in scale units away from it (one slope toward lower frequencies,
one toward higher), and the pointwise maximum of all shadows plus a global
offset is the threshold.

Levels are measured in dB relative to the largest coefficient magnitude of
the whole signal, so the offset has the same meaning at any input gain.
Silent input gives thresholds of -inf (nothing is masked).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import scales
from .errors import DomainError, ShapeError
from .filterbank import FilterBank, _check_coefficients, analyze, synthesize

__all__ = [
    "MaskSymbol",
    "IrrelevanceModel",
    "apply_multiplier",
    "irrelevance_threshold",
    "irrelevance_filter",
]


@dataclass(frozen=True)
class MaskSymbol:
    """Multiplier weights, one real 1-D array per channel.

    ``binary`` asserts that every weight is 0 or 1; it is validated at
    construction so downstream code can rely on it.
    """

    weights: list[np.ndarray]
    binary: bool = False

    def __post_init__(self):
        checked = []
        for w in self.weights:
            w = np.asarray(w, dtype=np.float64)
            if w.ndim != 1:
                raise ShapeError("mask weights must be 1-D per channel")
            if not np.all(np.isfinite(w)):
                raise DomainError("mask weights must be finite")
            if self.binary and not np.all((w == 0.0) | (w == 1.0)):
                raise DomainError("mask marked binary but has weights outside {0, 1}")
            checked.append(w)
        object.__setattr__(self, "weights", checked)


@dataclass(frozen=True)
class IrrelevanceModel:
    """Parameters of the spreading threshold.

    Attributes
    ----------
    offset_db : float
        Added to every threshold; more positive removes more.
    spread_lower_db_per_unit : float
        Decay of a masker's shadow toward lower frequencies, dB per scale
        unit.
    spread_upper_db_per_unit : float
        Decay toward higher frequencies, dB per scale unit.
    scale : AuditoryScale
        The scale in which channel distances are measured.
    """

    offset_db: float = -2.59
    spread_lower_db_per_unit: float = 27.0
    spread_upper_db_per_unit: float = 12.0
    scale: scales.AuditoryScale = scales.ERB

    def __post_init__(self):
        if not math.isfinite(self.offset_db):
            raise DomainError("offset_db must be finite")
        if not (self.spread_lower_db_per_unit > 0.0 and self.spread_upper_db_per_unit > 0.0):
            raise DomainError("spread slopes must be positive")


def apply_multiplier(m: MaskSymbol, fb_syn: FilterBank, fb_ana: FilterBank, x) -> np.ndarray:
    """M x = synthesize(fb_syn, m * analyze(fb_ana, x)).

    Linear in x with operator norm at most max|m| * sqrt(B_ana * B_syn).

    Raises
    ------
    ShapeError
        Mask shape does not match the analysis coefficients, or the two
        banks disagree structurally.
    """
    c = analyze(fb_ana, x)
    if len(m.weights) != len(c):
        raise ShapeError(f"mask has {len(m.weights)} channels, bank has {len(c)}")
    for k, (w, ck) in enumerate(zip(m.weights, c)):
        if w.shape != ck.shape:
            raise ShapeError(f"mask channel {k} has length {w.shape[0]}, expected {ck.shape[0]}")
    return synthesize(fb_syn, [w * ck for w, ck in zip(m.weights, c)])


def _levels_db(coefficients) -> list[np.ndarray]:
    """20*log10(|c| / peak) per channel; -inf where c = 0 or on silence."""
    peak = max(float(np.abs(ck).max()) for ck in coefficients)
    if peak == 0.0:
        return [np.full(ck.shape[0], -np.inf) for ck in coefficients]
    with np.errstate(divide="ignore"):
        return [20.0 * np.log10(np.abs(ck) / peak) for ck in coefficients]


def irrelevance_threshold(coefficients, fb: FilterBank, model: IrrelevanceModel) -> list[np.ndarray]:
    """Masking threshold in dB for every coefficient.

    For target channel k at time index n, every masker channel kappa
    contributes level(kappa, n') - slope * |u_k - u_kappa| where n' is the
    masker's time index nearest to n (subband rates differ), u are channel
    centers in scale units, and the slope is the upper spread when the
    target lies above the masker, the lower spread otherwise. The threshold
    is the maximum contribution plus the model offset.

    Raises
    ------
    DomainError
        The bank carries no center frequencies.
    ShapeError
        Coefficients do not match the bank.
    """
    c = _check_coefficients(fb, coefficients)
    if fb.center_frequencies is None:
        raise DomainError("bank carries no center frequencies")
    units = np.asarray(
        scales.scale_value(model.scale, np.asarray(fb.center_frequencies, dtype=np.float64))
    )
    levels = _levels_db(c)
    decimations = [int(d) for d in fb.decimations]

    thresholds = []
    for k in range(fb.n_channels):
        d_k = decimations[k]
        n = np.arange(c[k].shape[0], dtype=np.int64)
        best = np.full(c[k].shape[0], -np.inf)
        for kappa in range(fb.n_channels):
            d_kap = decimations[kappa]
            # nearest masker time index: round(n * d_k / d_kap), exactly in
            # integer arithmetic, wrapped into the masker's subband
            idx = ((2 * n * d_k + d_kap) // (2 * d_kap)) % c[kappa].shape[0]
            distance = units[k] - units[kappa]
            slope = (
                model.spread_upper_db_per_unit
                if distance > 0.0
                else model.spread_lower_db_per_unit
            )
            np.maximum(best, levels[kappa][idx] - slope * abs(distance), out=best)
        thresholds.append(best + model.offset_db)
    return thresholds


def irrelevance_filter(
    fb: FilterBank, x, model: IrrelevanceModel
) -> tuple[list[np.ndarray], MaskSymbol, float]:
    """Analyze x, zero every coefficient below its masking threshold.

    Returns the masked coefficients, the binary mask, and the fraction of
    coefficients that were zeroed. Raising ``offset_db`` never lowers that
    fraction. Reconstruction from the masked coefficients is the caller's
    step (painless dual or an iterative solver).
    """
    c = analyze(fb, x)
    thresholds = irrelevance_threshold(c, fb, model)
    levels = _levels_db(c)
    weights = [(lev >= thr).astype(np.float64) for lev, thr in zip(levels, thresholds)]
    masked = [w * ck for w, ck in zip(weights, c)]
    total = sum(w.shape[0] for w in weights)
    removed = sum(int(np.count_nonzero(w == 0.0)) for w in weights)
    return masked, MaskSymbol(weights, binary=True), removed / total
