"""Perfect-reconstruction synthesis from subband coefficients.

Three routes back to the signal:

* :func:`painless_dual` computes the canonical dual filters in closed form,
  G_k = conj(H_k) / H0 -- available exactly when the bank is painless and its
  frequency response never vanishes.
* :func:`cg_synthesize` solves S x = D c (frame operator against the adjoint
  image of the coefficients) by conjugate gradients, optionally
  preconditioned with the Fourier multiplier 1/H0. Works for any frame bank
  and converges in at most L steps in exact arithmetic.
* :func:`neumann_synthesize` runs the classical frame algorithm
  x_{m+1} = x_m + 2/(A+B) (D c - S x_m), a Neumann-series inversion of S
  with geometric error ratio at most (B-A)/(B+A).

For one-sided banks all of this acts on the full channel system (stored plus
mirrors), so reconstruction targets real signals.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConvergenceError, DomainError, NotAFrameError, UnsupportedConfigError
from .filterbank import FilterBank, adjoint_bank, synthesize
from .frame_diagnostics import frequency_response, painless_check, walnut_apply

__all__ = [
    "CGConfig",
    "IterationTrace",
    "painless_dual",
    "cg_synthesize",
    "neumann_synthesize",
]


@dataclass(frozen=True)
class CGConfig:
    """Settings for :func:`cg_synthesize`.

    Attributes
    ----------
    tolerance : float
        Relative residual threshold, ||r|| <= tolerance * ||b||.
    max_iterations : int or None
        Iteration budget; None means the signal length L (the exact-arithmetic
        worst case).
    preconditioned : bool
        Apply the Fourier-multiplier preconditioner 1/H0. This is the exact
        inverse of S for painless banks, so CG then converges immediately;
        for mildly non-painless banks it remains a strong approximation.
    """

    tolerance: float = 1e-10
    max_iterations: int | None = None
    preconditioned: bool = True

    def __post_init__(self):
        if not self.tolerance > 0.0:
            raise DomainError("tolerance must be positive")
        if self.max_iterations is not None and self.max_iterations < 1:
            raise DomainError("max_iterations must be at least 1")


@dataclass
class IterationTrace:
    """Per-iteration record of an iterative solve.

    ``residuals`` holds the stopping quantity per iteration (relative
    residual for CG, relative update norm for the Neumann iteration);
    ``iterates`` the successive solution estimates.
    """

    residuals: list[float] = field(default_factory=list)
    iterates: list[np.ndarray] = field(default_factory=list)


def painless_dual(fb: FilterBank) -> FilterBank:
    """Canonical dual bank of a painless filter bank.

    The dual filters are G_k[j] = conj(H_k[j]) / H0[j]; since H_k vanishes
    outside its support, so does G_k. Synthesizing analysis coefficients with
    the dual reconstructs the input exactly (real inputs, for one-sided
    banks).

    Raises
    ------
    UnsupportedConfigError
        The bank is not painless (the closed form does not apply).
    NotAFrameError
        The frequency response vanishes at some bin.
    """
    if not painless_check(fb):
        raise UnsupportedConfigError("canonical dual in closed form needs a painless bank")
    response = frequency_response(fb)
    if float(response.min()) <= 0.0:
        raise NotAFrameError("frequency response vanishes: the bank is not a frame")
    return replace(fb, filters=np.conj(fb.filters) / response, config=None)


def _rhs(fb: FilterBank, coefficients) -> np.ndarray:
    """D c: the coefficients pushed back through the adjoint of analysis."""
    return synthesize(adjoint_bank(fb), coefficients)


def cg_synthesize(
    fb: FilterBank,
    coefficients,
    config: CGConfig | None = None,
    *,
    return_trace: bool = False,
):
    """Reconstruct a signal from subband coefficients by conjugate gradients.

    Solves S x = D c with S applied through :func:`walnut_apply` (never a
    dense matrix). When the coefficients came from ``analyze(fb, x0)`` the
    solution is x0 up to the tolerance. The preconditioned variant applies
    z = idft(dft(r) / H0) to every residual, which is the exact inverse of S
    in the painless case.

    Parameters
    ----------
    fb : FilterBank
    coefficients : list of 1-D complex arrays
    config : CGConfig, optional
    return_trace : bool
        Also return the :class:`IterationTrace`.

    Returns
    -------
    ndarray, or (ndarray, IterationTrace)

    Raises
    ------
    NotAFrameError
        Preconditioning requested but the frequency response vanishes.
    ConvergenceError
        Tolerance not reached within the iteration budget, or the operator
        is found to be numerically indefinite. Carries the residual history.
    """
    if config is None:
        config = CGConfig()
    L = fb.signal_length
    max_iterations = L if config.max_iterations is None else config.max_iterations

    b = _rhs(fb, coefficients)
    b_norm = float(np.linalg.norm(b))
    trace = IterationTrace()
    if b_norm == 0.0:
        x = np.zeros(L, dtype=np.complex128)
        return (x, trace) if return_trace else x

    if config.preconditioned:
        response = frequency_response(fb)
        if float(response.min()) <= 0.0:
            raise NotAFrameError(
                "frequency response vanishes: cannot precondition (set preconditioned=False)"
            )

        def apply_preconditioner(res: np.ndarray) -> np.ndarray:
            return np.fft.ifft(np.fft.fft(res) / response)

    else:

        def apply_preconditioner(res: np.ndarray) -> np.ndarray:
            return res

    x = np.zeros(L, dtype=np.complex128)
    r = b.copy()
    z = apply_preconditioner(r)
    p = z.copy()
    rz = np.vdot(r, z)
    for _ in range(max_iterations):
        q = walnut_apply(fb, p)
        pq = np.vdot(p, q)
        if not pq.real > 0.0:
            raise ConvergenceError(
                "conjugate gradients broke down: operator not positive definite",
                residuals=trace.residuals,
            )
        alpha = rz / pq
        x = x + alpha * p
        r = r - alpha * q
        relative = float(np.linalg.norm(r)) / b_norm
        trace.residuals.append(relative)
        if return_trace:
            trace.iterates.append(x.copy())
        if relative <= config.tolerance:
            return (x, trace) if return_trace else x
        z = apply_preconditioner(r)
        rz_next = np.vdot(r, z)
        p = z + (rz_next / rz) * p
        rz = rz_next
    raise ConvergenceError(
        f"conjugate gradients: residual {trace.residuals[-1]:.3e} above tolerance "
        f"{config.tolerance:.3e} after {max_iterations} iterations",
        residuals=trace.residuals,
    )


def neumann_synthesize(
    fb: FilterBank,
    coefficients,
    bounds,
    tolerance: float = 1e-10,
    max_iterations: int = 10000,
    *,
    return_trace: bool = False,
):
    """Reconstruct by the frame algorithm (Neumann-series inversion of S).

    Iterates x_{m+1} = x_m + 2/(A+B) (D c - S x_m) until the relative update
    ||x_{m+1} - x_m|| <= tolerance * ||x_{m+1}||. With frame bounds
    A <= A_true <= B_true <= B the error contracts geometrically with ratio
    at most (B-A)/(B+A); a tight bank converges in one step.

    Parameters
    ----------
    fb : FilterBank
    coefficients : list of 1-D complex arrays
    bounds : Bounds
        Frame bound estimates (lower, upper) with positive lower bound.
    tolerance, max_iterations, return_trace
        Stopping controls as above.

    Raises
    ------
    NotAFrameError
        bounds.lower is not positive.
    ConvergenceError
        Update still above tolerance at the iteration cap.
    """
    lower, upper = float(bounds[0]), float(bounds[1])
    if not lower > 0.0:
        raise NotAFrameError("lower frame bound is zero: frame algorithm undefined")
    if not tolerance > 0.0:
        raise DomainError("tolerance must be positive")
    relax = 2.0 / (lower + upper)

    b = _rhs(fb, coefficients)
    L = fb.signal_length
    x = np.zeros(L, dtype=np.complex128)
    trace = IterationTrace()
    for _ in range(max_iterations):
        delta = relax * (b - walnut_apply(fb, x))
        x = x + delta
        update = float(np.linalg.norm(delta))
        scale = float(np.linalg.norm(x))
        relative = update / scale if scale > 0.0 else (0.0 if update == 0.0 else np.inf)
        trace.residuals.append(relative)
        if return_trace:
            trace.iterates.append(x.copy())
        if relative <= tolerance:
            return (x, trace) if return_trace else x
    raise ConvergenceError(
        f"frame algorithm: relative update {trace.residuals[-1]:.3e} above tolerance "
        f"{tolerance:.3e} after {max_iterations} iterations",
        residuals=trace.residuals,
    )
