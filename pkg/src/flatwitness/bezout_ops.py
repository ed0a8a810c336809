"""Pointwise polar decompositions and two-generator ideal reduction.

Functions live on a finite weighted atom set.  Every identity here is a
pointwise division or multiplication; outputs are evaluated in extended
precision and rounded once, so the defining identities verify at a couple
of ulp in double precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput

__all__ = [
    "SampledFunction",
    "PrincipalGenerator",
    "StrictnessWitness",
    "sampled_function",
    "polar_parts",
    "principal_generator",
    "strictness_witness",
]


@dataclass(frozen=True)
class SampledFunction:
    """Complex values on weighted atoms; weight zero marks a null atom."""

    values: np.ndarray
    weights: np.ndarray

    @property
    def n_atoms(self) -> int:
        return len(self.values)

    @property
    def ess_sup(self) -> float:
        live = self.weights > 0
        if not np.any(live):
            return 0.0
        return float(np.max(np.abs(self.values[live])))

    @property
    def norm_sq(self) -> float:
        """Squared weighted 2-norm, sum of weight * |value|^2."""
        return float(np.sum(self.weights * np.abs(self.values) ** 2))

    @property
    def norm(self) -> float:
        return float(np.sqrt(self.norm_sq))


def sampled_function(values, weights=None) -> SampledFunction:
    vals = np.asarray(values, dtype=complex)
    if vals.ndim != 1 or vals.size == 0:
        raise InvalidInput("values must be a one-dimensional, nonempty array")
    if weights is None:
        wts = np.ones(vals.shape, dtype=float)
    else:
        wts = np.asarray(weights, dtype=float)
    if wts.shape != vals.shape:
        raise InvalidInput("weights must match values in shape")
    if not (np.all(np.isfinite(vals)) and np.all(np.isfinite(wts))):
        raise InvalidInput("values and weights must be finite")
    if np.any(wts < 0):
        raise InvalidInput("weights must be nonnegative")
    return SampledFunction(vals, wts)


def _same_atoms(f: SampledFunction, g: SampledFunction):
    if f.n_atoms != g.n_atoms or not np.array_equal(f.weights, g.weights):
        raise InvalidInput("functions must live on the same weighted atom set")


def polar_parts(f: SampledFunction):
    """Split f into (modulus, unimodular part) with f = modulus * u pointwise.

    Where f vanishes the unimodular part is 1, so u never vanishes and
    u * conj(u) = 1 everywhere.
    """
    v = f.values.astype(np.clongdouble)
    a = np.abs(v)
    u = np.where(a > 0, v / np.where(a > 0, a, 1), 1.0)
    modulus = SampledFunction(a.astype(complex), f.weights)
    unimodular = SampledFunction(u.astype(complex), f.weights)
    return modulus, unimodular


@dataclass(frozen=True)
class PrincipalGenerator:
    """d = |f| + |g| with cofactors both ways.

    f = F*d and g = G*d exhibit containment in the ideal of d, while
    d = f*cf + g*cg exhibits d inside the ideal of (f, g).  |F| <= 1,
    |G| <= 1 and |cf| = |cg| = 1 pointwise.
    """

    d: SampledFunction
    F: SampledFunction
    G: SampledFunction
    cf: SampledFunction
    cg: SampledFunction


def principal_generator(f: SampledFunction, g: SampledFunction) -> PrincipalGenerator:
    _same_atoms(f, g)
    fl = f.values.astype(np.clongdouble)
    gl = g.values.astype(np.clongdouble)
    af, ag = np.abs(fl), np.abs(gl)
    d = af + ag
    live = d > 0
    F = np.where(live, fl / np.where(live, d, 1), 1.0)
    G = np.where(live, gl / np.where(live, d, 1), 1.0)
    cf = np.conj(np.where(af > 0, fl / np.where(af > 0, af, 1), 1.0))
    cg = np.conj(np.where(ag > 0, gl / np.where(ag > 0, ag, 1), 1.0))
    wts = f.weights
    return PrincipalGenerator(
        d=SampledFunction(d.astype(complex), wts),
        F=SampledFunction(F.astype(complex), wts),
        G=SampledFunction(G.astype(complex), wts),
        cf=SampledFunction(cf.astype(complex), wts),
        cg=SampledFunction(cg.astype(complex), wts),
    )


@dataclass(frozen=True)
class StrictnessWitness:
    """Obstruction to solving indicator = g*h when g vanishes on positive mass.

    ``distance`` is the weighted 2-distance from the indicator of the zero
    set to the range of multiplication by g; it equals sqrt(zero_mass), so a
    positive value certifies that the principal ideal of g misses part of
    the space.
    """

    zero_mass: float
    distance: float
    witness: SampledFunction


def strictness_witness(g: SampledFunction) -> StrictnessWitness:
    zero = (np.abs(g.values) == 0) & (g.weights > 0)
    indicator = np.where(zero, 1.0 + 0.0j, 0.0j)
    mass = float(np.sum(g.weights[zero]))
    return StrictnessWitness(
        zero_mass=mass,
        distance=float(np.sqrt(mass)),
        witness=SampledFunction(indicator, g.weights),
    )
