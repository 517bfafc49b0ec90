"""Conditioning, eigenvalue spectra and error norms."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import DiagnosticError

__all__ = [
    "SVD_MAX_SIDE",
    "EIG_MAX_SIDE",
    "ConditionNumber",
    "condition_number",
    "SpectrumSummary",
    "spectrum",
    "stability_spectrum",
    "error_norms",
    "save_spectrum_csv",
]

SVD_MAX_SIDE = 2500
EIG_MAX_SIDE = 4096


class ConditionNumber(float):
    """A float that remembers whether it is an exact SVD value or a 1-norm estimate."""

    estimate: bool = False

    def __new__(cls, value, estimate=False):
        obj = super().__new__(cls, value)
        obj.estimate = estimate
        return obj

    def __repr__(self):
        tag = ", estimate" if self.estimate else ""
        return f"ConditionNumber({float(self)!r}{tag})"


def condition_number(m) -> ConditionNumber:
    """
    2-norm condition number sigma_max / sigma_min.

    Computed from a full SVD for matrices of side up to ``SVD_MAX_SIDE``.
    Larger matrices get LAPACK's 1-norm estimate from an LU factorization,
    returned with ``estimate=True``. A zero smallest singular value (or a
    zero pivot) gives ``inf``.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"condition number needs a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        return ConditionNumber(np.inf)
    if m.shape[0] <= SVD_MAX_SIDE:
        try:
            s = sla.svd(m, compute_uv=False, check_finite=False)
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise DiagnosticError(f"SVD failed: {exc}") from exc
        if s[-1] == 0.0:
            return ConditionNumber(np.inf)
        return ConditionNumber(s[0] / s[-1])
    lu, _ = sla.lu_factor(m, check_finite=False)
    if np.any(np.diag(lu) == 0.0):
        return ConditionNumber(np.inf, estimate=True)
    rcond, _ = sla.lapack.dgecon(lu, np.linalg.norm(m, 1), norm="1")
    return ConditionNumber(np.inf if rcond == 0 else 1.0 / rcond, estimate=True)


@dataclass(frozen=True, eq=False)
class SpectrumSummary:
    """Eigenvalues and a count of those with real part above ``tolerance``."""

    eigenvalues: np.ndarray
    max_real_part: float
    positive_real_count: int
    tolerance: float

    @property
    def spectral_radius(self):
        return float(np.max(np.abs(self.eigenvalues)))


def spectrum(m, tol=None) -> SpectrumSummary:
    """
    All eigenvalues of a dense square matrix.

    Parameters
    ----------
    m : (n, n) array_like
        Matrix, ``n <= EIG_MAX_SIDE``.
    tol : float, optional
        Threshold on the real part. Defaults to 1e-6 times the spectral radius.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"spectrum needs a square matrix, got shape {m.shape}")
    if m.shape[0] > EIG_MAX_SIDE:
        raise ValueError(f"matrix side {m.shape[0]} exceeds the dense eigensolver cap {EIG_MAX_SIDE}")
    try:
        ev = sla.eigvals(m, check_finite=True)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise DiagnosticError(f"eigensolver failed: {exc}") from exc
    if tol is None:
        tol = 1e-6 * float(np.max(np.abs(ev)))
    re = ev.real
    return SpectrumSummary(ev, float(re.max()), int(np.count_nonzero(re > tol)), float(tol))


def stability_spectrum(system, boundary_mask, shift=0.0, tol=None) -> SpectrumSummary:
    """
    Spectrum that decides stability of a Dirichlet-enforced operator.

    Unit boundary rows decouple from the interior and contribute eigenvalues
    exactly equal to 1, so they are dropped: the eigenvalues are those of the
    interior-interior block. ``shift`` is subtracted from the diagonal first;
    pass k**2 for a Helmholtz operator to look at its Laplacian part, whose
    eigenvalues must all lie in the left half plane.
    """
    m = system.matrix if hasattr(system, "matrix") else np.asarray(system, dtype=float)
    inner = ~np.asarray(boundary_mask, dtype=bool)
    block = m[np.ix_(inner, inner)].copy()
    if shift:
        block[np.diag_indices_from(block)] -= shift
    return spectrum(block, tol)


def error_norms(approx, reference):
    """Return ``(max_error, rms_error)`` of ``approx - reference``."""
    approx = np.asarray(approx, dtype=float).ravel()
    reference = np.asarray(reference, dtype=float).ravel()
    if approx.shape != reference.shape:
        raise ValueError(f"length mismatch: {approx.size} vs {reference.size}")
    if approx.size == 0:
        raise ValueError("error norms of empty vectors")
    diff = approx - reference
    return float(np.max(np.abs(diff))), float(np.sqrt(np.mean(diff * diff)))


def save_spectrum_csv(path, summary: SpectrumSummary):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["re", "im"])
        for z in summary.eigenvalues:
            w.writerow([repr(float(z.real)), repr(float(z.imag))])
