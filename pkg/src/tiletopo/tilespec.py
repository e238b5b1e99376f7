"""Tile systems: an expanding integer matrix together with a digit set.

A tile system (n, M, K) determines the self-affine set T with
M T = union of T + k over k in K. Validation enforces the lattice-tile
requirements: M integer and expanding, |K| = |det M|, and K a complete
residue system of Z^n modulo M Z^n.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .exactmat import (
    IntMatrix,
    IntVector,
    adjugate,
    as_matrix,
    charpoly,
    determinant,
    inverse_fractions,
    mat_vec,
)

# Moduli this close to 1 are treated as numerically undecidable rather than
# silently classified as expanding or not.
UNIT_CIRCLE_GUARD = 1e-9
EQUAL_MODULUS_TOL = 1e-9


class TileSystemError(ValueError):
    """Base class for tile-spec validation failures."""


class SpecSyntaxError(TileSystemError):
    pass


class DimensionMismatchError(TileSystemError):
    pass


class DigitCountError(TileSystemError):
    """Number of digits differs from |det M|."""


class NotExpandingError(TileSystemError):
    pass


class NonStandardDigitSetError(TileSystemError):
    """Two digits fall in the same residue class modulo M Z^n."""


class NumericalResolutionError(RuntimeError):
    """An eigenvalue modulus is too close to 1 to classify reliably."""


@dataclass(frozen=True)
class TileSystem:
    """Validated input object: dimension, expanding matrix, digit set."""

    dimension: int
    matrix: IntMatrix
    digits: tuple[IntVector, ...]
    name: str | None = None

    @property
    def m(self) -> int:
        return len(self.digits)

    def digit(self, index: int) -> IntVector:
        """Digit by 1-based symbol index."""
        return self.digits[index - 1]

    def symmetry_center(self) -> tuple:
        """Midpoint of the first two digits; the central symmetry point when m = 2."""
        from fractions import Fraction

        k1, k2 = self.digits[0], self.digits[1]
        return tuple(Fraction(a + b, 2) for a, b in zip(k1, k2))


@dataclass(frozen=True)
class SpectrumReport:
    """Characteristic polynomial and eigenvalue-modulus classification."""

    charpoly: tuple[int, ...]
    root_moduli: tuple[float, ...]
    is_expanding: bool
    is_selfsimilar_conjugate: bool
    conjugacy_case: str  # "cubic" | "rotation" | "none" | "not_applicable"


@lru_cache(maxsize=None)
def system_determinant(ts: TileSystem) -> int:
    return determinant(ts.matrix)


@lru_cache(maxsize=None)
def system_adjugate(ts: TileSystem) -> IntMatrix:
    return adjugate(ts.matrix)


def in_matrix_lattice(matrix: IntMatrix, vec: Sequence[int]) -> bool:
    """Exact membership test for vec in M Z^n.

    vec lies in M Z^n iff adj(M) vec is divisible componentwise by det M.
    """
    det = determinant(matrix)
    if det == 0:
        raise ZeroDivisionError("lattice test needs a nonsingular matrix")
    image = mat_vec(adjugate(matrix), vec)
    return all(x % det == 0 for x in image)


def is_standard_digit_set(ts: TileSystem) -> bool:
    """True iff |K| = |det M| and no two digits share a residue mod M Z^n."""
    det = system_determinant(ts)
    if len(ts.digits) != abs(det):
        return False
    adj = system_adjugate(ts)
    seen = set()
    for k in ts.digits:
        residue = tuple(x % det for x in mat_vec(adj, k))
        if residue in seen:
            return False
        seen.add(residue)
    return True


def spectrum(matrix: IntMatrix) -> SpectrumReport:
    """Exact characteristic polynomial plus floating-point root moduli.

    The polynomial is monic det(xI - M), computed exactly. Root moduli come
    from the companion-matrix eigenvalue solver behind numpy.roots. Raises
    NumericalResolutionError when a modulus is within UNIT_CIRCLE_GUARD of 1,
    and propagates solver non-convergence instead of guessing.
    """
    coeffs = charpoly(matrix)
    n = len(matrix)
    try:
        roots = np.roots(np.array(coeffs, dtype=float))
    except np.linalg.LinAlgError as exc:  # pragma: no cover - solver failure
        raise NumericalResolutionError(f"eigenvalue iteration failed: {exc}") from exc
    moduli = tuple(sorted((abs(complex(r)) for r in roots), reverse=True))
    if any(abs(mod - 1.0) <= UNIT_CIRCLE_GUARD for mod in moduli):
        raise NumericalResolutionError(
            "an eigenvalue modulus is within 1e-9 of the unit circle; refusing to classify"
        )
    expanding = all(mod > 1.0 + UNIT_CIRCLE_GUARD for mod in moduli)
    selfsim = (moduli[0] - moduli[-1]) <= EQUAL_MODULUS_TOL * max(1.0, moduli[0])
    case = _conjugacy_case(coeffs, n, selfsim)
    return SpectrumReport(
        charpoly=coeffs,
        root_moduli=moduli,
        is_expanding=expanding,
        is_selfsimilar_conjugate=selfsim,
        conjugacy_case=case,
    )


def _conjugacy_case(coeffs: tuple[int, ...], n: int, selfsim: bool) -> str:
    if n != 3:
        return "not_applicable"
    if not selfsim:
        return "none"
    m = abs(coeffs[3])
    r = round(m ** (1.0 / 3.0))
    if r**3 == m:
        return "cubic"
    # Remaining self-similar case: p(x) = x^3 - s*m, a pure rotation block.
    if coeffs[1] == 0 and coeffs[2] == 0:
        return "rotation"
    return "none"


def system_spectrum(ts: TileSystem) -> SpectrumReport:
    return _system_spectrum_cached(ts)


@lru_cache(maxsize=None)
def _system_spectrum_cached(ts: TileSystem) -> SpectrumReport:
    return spectrum(ts.matrix)


def make_tile_system(
    dimension: int,
    matrix: Sequence[Sequence[int]],
    digits: Sequence[Sequence[int]],
    name: str | None = None,
) -> TileSystem:
    """Build and fully validate a tile system.

    Raises a distinct TileSystemError subclass per failure mode so callers
    can report precise diagnostics.
    """
    n = int(dimension)
    if n < 1:
        raise DimensionMismatchError("dimension must be a positive integer")
    mat = as_matrix(matrix)
    if len(mat) != n or any(len(row) != n for row in mat):
        raise DimensionMismatchError(
            f"matrix must be {n}x{n}, got {len(mat)} rows"
        )
    digs = tuple(tuple(int(x) for x in d) for d in digits)
    if any(len(d) != n for d in digs):
        raise DimensionMismatchError("every digit must have one entry per dimension")
    if not digs:
        raise DigitCountError("digit set is empty")

    det = determinant(mat)
    if det == 0:
        raise NotExpandingError("matrix is singular, hence not expanding")

    # Residue collisions are diagnosed before the count check: a clashing
    # pair is the more specific failure.
    adj = adjugate(mat)
    residues: dict[tuple[int, ...], IntVector] = {}
    for k in digs:
        residue = tuple(x % det for x in mat_vec(adj, k))
        if residue in residues:
            raise NonStandardDigitSetError(
                f"digits {residues[residue]} and {k} lie in the same residue class mod M*Z^n"
            )
        residues[residue] = k

    if len(digs) != abs(det):
        raise DigitCountError(
            f"digit count {len(digs)} differs from |det M| = {abs(det)}"
        )

    report = spectrum(mat)
    if not report.is_expanding:
        raise NotExpandingError(
            f"matrix is not expanding: root moduli {tuple(round(x, 6) for x in report.root_moduli)}"
        )

    return TileSystem(dimension=n, matrix=mat, digits=digs, name=name)


def parse_tile_system(text: str) -> TileSystem:
    """Parse the JSON tile-spec format and validate it.

    Format: {"dimension": n, "matrix": [[...], ...], "digits": [[...], ...],
    "name": optional}. Matrix rows are row-major integers.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecSyntaxError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SpecSyntaxError("top-level value must be an object")
    missing = [key for key in ("dimension", "matrix", "digits") if key not in doc]
    if missing:
        raise SpecSyntaxError(f"missing required keys: {', '.join(missing)}")
    if not isinstance(doc["dimension"], int):
        raise SpecSyntaxError("dimension must be an integer")
    for key in ("matrix", "digits"):
        rows = doc[key]
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise SpecSyntaxError(f"{key} must be a list of integer lists")
        for row in rows:
            for x in row:
                if not isinstance(x, int) or isinstance(x, bool):
                    raise SpecSyntaxError(f"{key} entries must be integers, got {x!r}")
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise SpecSyntaxError("name must be a string when present")
    return make_tile_system(doc["dimension"], doc["matrix"], doc["digits"], name)


def load_tile_system(path) -> TileSystem:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_tile_system(fh.read())


# The seven 3-d lattice tiles with two digits, keyed by letter. Each entry is
# the coefficient pair (a, b) of the monic polynomial x^3 - a x^2 - b x - 2,
# realized by the companion matrix below with digits 0 and e1.
TWINDRAGON_PARAMS: dict[str, tuple[int, int]] = {
    "A": (0, 0),
    "B": (-1, 1),
    "C": (1, -1),
    "D": (0, 1),
    "E": (2, -2),
    "F": (1, 0),
    "G": (0, 2),
}


def twindragon_matrix(a: int, b: int) -> IntMatrix:
    return ((0, 0, 2), (1, 0, b), (0, 1, a))


def twindragon(letter: str) -> TileSystem:
    """Catalog entry for the two-digit 3-d tiles, letters A through G."""
    key = letter.strip().upper()
    if key not in TWINDRAGON_PARAMS:
        raise KeyError(f"unknown twindragon {letter!r}; expected one of A..G")
    a, b = TWINDRAGON_PARAMS[key]
    return make_tile_system(
        3,
        twindragon_matrix(a, b),
        ((0, 0, 0), (1, 0, 0)),
        name=f"twindragon-{key}",
    )


def inverse_matrix_fractions(ts: TileSystem):
    return _inverse_cached(ts)


@lru_cache(maxsize=None)
def _inverse_cached(ts: TileSystem):
    return inverse_fractions(ts.matrix)


def contraction_norm_bound(ts: TileSystem) -> float:
    """Infinity-norm of M^-1 as a float, for rough step estimates."""
    inv = inverse_matrix_fractions(ts)
    return max(float(sum(abs(x) for x in row)) for row in inv)


def expansion_factor(ts: TileSystem) -> float:
    """Similarity ratio |det M|^(1/n), meaningful for the conjugate metric."""
    return abs(system_determinant(ts)) ** (1.0 / ts.dimension)


def format_vector(v: Sequence[int]) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def unit_vector(n: int, axis: int = 0) -> IntVector:
    return tuple(1 if i == axis else 0 for i in range(n))


def math_log_ratio(lam: float, base: float) -> float:
    return math.log(lam) / math.log(base)
