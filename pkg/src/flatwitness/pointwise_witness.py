"""Certificates for sampled linear relations sum_i r_i(x) m_i(x) = 0.

For each sample point the construction produces a matrix rho(x) whose
columns annihilate the coefficient row, together with coordinates mu(x)
that rebuild the module row:

    sum_i r_i(x) rho_ij(x) = 0        for every j,
    m_i(x) = sum_j rho_ij(x) mu_j(x)  for every i.

The columns of rho(x) are an orthonormal frame of the annihilator of the
coefficient row (padded with a zero column), built from a fixed Householder
reflector convention so that identical inputs give bit-identical output.
Certificates are not unique; ``verify_witness`` checks the defining
relations, which is the actual contract.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidInput, NotARelation

__all__ = [
    "PointwiseRelation",
    "OrthonormalFrame",
    "WitnessCertificate",
    "WitnessReport",
    "pointwise_relation",
    "relation_residuals",
    "orthocomplement_frame",
    "synthesize_witness",
    "verify_witness",
]

DEFAULT_RELATION_TOL = 1e-10


@dataclass(frozen=True)
class PointwiseRelation:
    """P weighted sample points, each carrying a coefficient row and a module row."""

    point_weights: np.ndarray  # (P,)
    r_rows: np.ndarray         # (P, n)
    m_rows: np.ndarray         # (P, n)

    @property
    def n_points(self) -> int:
        return self.r_rows.shape[0]

    @property
    def n_terms(self) -> int:
        return self.r_rows.shape[1]


def pointwise_relation(point_weights, r_rows, m_rows) -> PointwiseRelation:
    wts = np.asarray(point_weights, dtype=float)
    r = np.asarray(r_rows, dtype=complex)
    m = np.asarray(m_rows, dtype=complex)
    if r.ndim != 2 or m.shape != r.shape or wts.shape != (r.shape[0],):
        raise InvalidInput("need r_rows and m_rows of shape (P, n) and P point weights")
    if r.shape[0] == 0 or r.shape[1] == 0:
        raise InvalidInput("need at least one point and one term")
    if not (np.all(np.isfinite(wts)) and np.all(np.isfinite(r)) and np.all(np.isfinite(m))):
        raise InvalidInput("relation data must be finite")
    if np.any(wts < 0):
        raise InvalidInput("point weights must be nonnegative")
    return PointwiseRelation(wts, r, m)


def relation_residuals(rel: PointwiseRelation):
    """Per-point |sum_i r_i m_i| and the scale 1 + ||r(x)|| * ||m(x)||."""
    resid = np.abs(np.einsum("pi,pi->p", rel.r_rows, rel.m_rows))
    scale = 1.0 + np.linalg.norm(rel.r_rows, axis=1) * np.linalg.norm(rel.m_rows, axis=1)
    return resid, scale


@dataclass(frozen=True)
class OrthonormalFrame:
    """Rows are the frame vectors; trailing rows may be identically zero."""

    vectors: np.ndarray  # (n, n)


def _batched_frames(rows: np.ndarray, zero_threshold: float) -> np.ndarray:
    """Frames (P, n, n) whose leading rows are orthonormal and annihilate each input row.

    Rows with norm at most ``zero_threshold`` get the standard basis.  For the
    rest, a Householder reflector sends the normalised row to the first
    coordinate axis; the reflected remaining axes span the orthogonal
    complement and become frame rows 1..n-1, followed by one zero row.
    The reflector pivot phase is taken opposite to the phase of the leading
    entry (ties resolved to +1) so there is no cancellation and the frame is
    a deterministic function of the input.
    """
    P, n = rows.shape
    frames = np.broadcast_to(np.eye(n, dtype=complex), (P, n, n)).copy()
    norms = np.linalg.norm(rows, axis=1)
    nz = norms > zero_threshold
    if not np.any(nz):
        return frames
    x = rows[nz] / norms[nz, None]
    lead = x[:, 0]
    alead = np.abs(lead)
    phase = np.where(alead > 0, lead / np.where(alead > 0, alead, 1), 1.0)
    v = x.copy()
    v[:, 0] += phase  # v = x - alpha*e1 with alpha = -phase
    vnorm_sq = np.einsum("pi,pi->p", v, np.conj(v)).real
    reflect = np.broadcast_to(np.eye(n, dtype=complex), (v.shape[0], n, n)).copy()
    reflect -= 2.0 * v[:, :, None] * np.conj(v)[:, None, :] / vnorm_sq[:, None, None]
    out = np.zeros((v.shape[0], n, n), dtype=complex)
    out[:, : n - 1, :] = np.transpose(reflect[:, :, 1:], (0, 2, 1))
    frames[nz] = out
    return frames


def orthocomplement_frame(r, zero_threshold: float = 1e-13) -> OrthonormalFrame:
    """Orthonormal frame of the orthogonal complement of one vector.

    Nonzero input: n-1 orthonormal vectors orthogonal to r, plus a zero row.
    Input below the threshold: the full standard basis.
    """
    row = np.asarray(r, dtype=complex)
    if row.ndim != 1 or row.size == 0:
        raise InvalidInput("need a one-dimensional, nonempty vector")
    if not np.all(np.isfinite(row)):
        raise InvalidInput("vector entries must be finite")
    return OrthonormalFrame(_batched_frames(row[None, :], zero_threshold)[0])


@dataclass(frozen=True)
class WitnessCertificate:
    rho: np.ndarray  # (P, n, k)
    mu: np.ndarray   # (P, k)

    @property
    def k(self) -> int:
        return self.mu.shape[1]


def _default_zero_threshold(rel: PointwiseRelation) -> float:
    peak = float(np.max(np.abs(rel.r_rows))) if rel.r_rows.size else 0.0
    return 1e-13 * max(1.0, peak)


def synthesize_witness(rel: PointwiseRelation, zero_threshold: Optional[float] = None,
                       relation_tol: float = DEFAULT_RELATION_TOL) -> WitnessCertificate:
    """Build (rho, mu) for a valid relation; inner dimension k equals n.

    Frames are constructed on the conjugated coefficient rows: the relation
    pairs rows bilinearly, so the annihilator of r under that pairing is the
    orthogonal complement of conj(r), and the module row lies inside it.

    Raises NotARelation when some positive-weight point violates the
    relation beyond ``relation_tol`` times its scale.
    """
    resid, scale = relation_residuals(rel)
    live = rel.point_weights > 0
    if np.any(resid[live] > relation_tol * scale[live]):
        bad = int(np.argmax(np.where(live, resid / scale, -1.0)))
        raise NotARelation(
            f"point {bad}: residual {resid[bad]:.3e} exceeds {relation_tol:g} * scale"
        )
    if zero_threshold is None:
        zero_threshold = _default_zero_threshold(rel)
    frames = _batched_frames(np.conj(rel.r_rows), zero_threshold)
    rho = np.transpose(frames, (0, 2, 1)).copy()  # rho[p, i, j] = frames[p, j, i]
    mu = np.einsum("pi,pji->pj", rel.m_rows, np.conj(frames))
    return WitnessCertificate(rho, mu)


@dataclass(frozen=True)
class WitnessReport:
    max_coeff_residual: float
    max_reconstruction_residual: float
    rho_bound_ok: bool
    mu_norm_ok: bool
    coeff_scale: float
    reconstruction_scale: float


def verify_witness(rel: PointwiseRelation, cert: WitnessCertificate,
                   tol: Optional[float] = None) -> WitnessReport:
    """Check the two defining identities and the certificate bounds.

    Residuals are maxima over positive-weight points; atoms of weight zero
    are outside the relation's domain and are skipped.
    """
    P, n = rel.r_rows.shape
    if cert.rho.shape[0] != P or cert.rho.shape[1] != n or cert.mu.shape[0] != P:
        raise InvalidInput("certificate shape does not match the relation")
    if cert.rho.shape[2] != cert.mu.shape[1]:
        raise InvalidInput("rho and mu disagree on the inner dimension")
    live = rel.point_weights > 0
    coeff = np.abs(np.einsum("pi,pij->pj", rel.r_rows, cert.rho))
    recon = np.abs(rel.m_rows - np.einsum("pij,pj->pi", cert.rho, cert.mu))
    max_coeff = float(coeff[live].max()) if np.any(live) else 0.0
    max_recon = float(recon[live].max()) if np.any(live) else 0.0

    rho_bound_ok = bool(np.max(np.abs(cert.rho)) <= 1.0 + 1e-12) if cert.rho.size else True
    mu_norms = np.einsum("p,pj->j", rel.point_weights, np.abs(cert.mu) ** 2)
    m_norm_total = float(np.sum(rel.point_weights[:, None] * np.abs(rel.m_rows) ** 2))
    if tol is None:
        tol = 1e-10 * (1.0 + m_norm_total)
    mu_norm_ok = bool(np.all(mu_norms <= m_norm_total + tol))

    coeff_scale = 1.0 + float(np.max(np.linalg.norm(rel.r_rows, axis=1)))
    recon_scale = 1.0 + float(np.max(np.linalg.norm(rel.m_rows, axis=1)))
    return WitnessReport(
        max_coeff_residual=max_coeff,
        max_reconstruction_residual=max_recon,
        rho_bound_ok=rho_bound_ok,
        mu_norm_ok=mu_norm_ok,
        coeff_scale=coeff_scale,
        reconstruction_scale=recon_scale,
    )
