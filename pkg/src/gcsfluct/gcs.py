"""Pointwise linear algebra of generalized complex structures.

Everything here acts on the doubled fibre T + T* of a 2n-dimensional phase
space.  A generalized vector is stored as the pair (X, xi) of 2n-component
arrays, and endomorphisms of the fibre as dense 4n x 4n matrices acting on
the stacked column (X, xi).  The block layout is

    [[A,    beta],
     [B,    -A^T]]

with beta and B antisymmetric.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import AmbiguousRankError, DimensionError, DomainError, SingularFormError

GCS_TOL = 1e-10
RANK_TOL = 1e-10
COMPLEX_TOL = 1e-12


def _as_square(mat, name):
    arr = np.array(mat, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"{name} must be a square matrix, got shape {arr.shape}")
    if arr.shape[0] % 2:
        raise DimensionError(f"{name} must have even size, got {arr.shape[0]}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class GeneralizedVector:
    """X + xi in T + T*, each part with 2n real components."""

    vec_part: np.ndarray
    form_part: np.ndarray

    def __post_init__(self):
        v = np.array(self.vec_part, dtype=float).ravel()
        f = np.array(self.form_part, dtype=float).ravel()
        if v.shape != f.shape or v.size == 0 or v.size % 2:
            raise DimensionError(
                f"vector and form parts need equal even length, got {v.size} and {f.size}"
            )
        v.setflags(write=False)
        f.setflags(write=False)
        object.__setattr__(self, "vec_part", v)
        object.__setattr__(self, "form_part", f)

    @property
    def n(self) -> int:
        return self.vec_part.size // 2

    def stacked(self) -> np.ndarray:
        return np.concatenate([self.vec_part, self.form_part])

    @classmethod
    def from_stacked(cls, arr) -> "GeneralizedVector":
        arr = np.asarray(arr, dtype=float).ravel()
        half = arr.size // 2
        return cls(arr[:half], arr[half:])


@dataclass(frozen=True)
class TwoForm:
    mat: np.ndarray

    def __post_init__(self):
        m = _as_square(self.mat, "two-form")
        if not np.array_equal(m, -m.T):
            raise DomainError("two-form matrix is not antisymmetric")
        object.__setattr__(self, "mat", m)

    @property
    def n(self) -> int:
        return self.mat.shape[0] // 2

    def __neg__(self) -> "TwoForm":
        return TwoForm(-self.mat)

    def __mul__(self, c: float) -> "TwoForm":
        return TwoForm(c * self.mat)

    __rmul__ = __mul__

    @classmethod
    def antisymmetrize(cls, mat) -> "TwoForm":
        """Antisymmetric part of an arbitrary square matrix, as a two-form."""
        m = np.asarray(mat, dtype=float)
        return cls(0.5 * (m - m.T))


@dataclass(frozen=True)
class SymplecticForm:
    mat: np.ndarray

    def __post_init__(self):
        m = _as_square(self.mat, "symplectic form")
        if not np.array_equal(m, -m.T):
            raise DomainError("symplectic form is not antisymmetric")
        cond = np.linalg.cond(m)
        if not np.isfinite(cond) or cond > 1.0 / np.finfo(float).eps:
            raise SingularFormError(f"symplectic form is degenerate (condition number {cond:.3g})")
        object.__setattr__(self, "mat", m)

    @property
    def n(self) -> int:
        return self.mat.shape[0] // 2

    def inverse(self) -> np.ndarray:
        """The Poisson tensor pi with omega @ pi = identity."""
        return np.linalg.inv(self.mat)

    @classmethod
    def standard(cls, n: int = 1) -> "SymplecticForm":
        """Block-diagonal form with [[0, 1], [-1, 0]] on each coordinate pair."""
        return cls(np.kron(np.eye(n), [[0.0, 1.0], [-1.0, 0.0]]))

    @classmethod
    def darboux(cls, n: int = 1) -> "SymplecticForm":
        """sum_i dp_i ^ dq_i in the ordering (q_1..q_n, p_1..p_n)."""
        eye = np.eye(n)
        zero = np.zeros((n, n))
        return cls(np.block([[zero, -eye], [eye, zero]]))


@dataclass(frozen=True)
class ComplexStructure:
    mat: np.ndarray

    def __post_init__(self):
        m = _as_square(self.mat, "complex structure")
        resid = np.abs(m @ m + np.eye(m.shape[0])).max()
        if resid > COMPLEX_TOL:
            raise DomainError(f"J^2 != -1 (max residual {resid:.3g})")
        object.__setattr__(self, "mat", m)

    @property
    def n(self) -> int:
        return self.mat.shape[0] // 2

    @classmethod
    def standard(cls, n: int = 1) -> "ComplexStructure":
        return cls(np.kron(np.eye(n), [[0.0, -1.0], [1.0, 0.0]]))


@dataclass(frozen=True)
class Gcs:
    """A candidate generalized complex structure (4n x 4n).

    Construction only checks the shape; use `verify_gcs` for the axioms.
    """

    mat: np.ndarray

    def __post_init__(self):
        m = _as_square(self.mat, "GCS")
        if m.shape[0] % 4:
            raise DimensionError(f"GCS size must be a multiple of 4, got {m.shape[0]}")
        object.__setattr__(self, "mat", m)

    @property
    def n(self) -> int:
        return self.mat.shape[0] // 4

    @property
    def A(self) -> np.ndarray:
        k = 2 * self.n
        return self.mat[:k, :k]

    @property
    def beta(self) -> np.ndarray:
        k = 2 * self.n
        return self.mat[:k, k:]

    @property
    def b(self) -> np.ndarray:
        k = 2 * self.n
        return self.mat[k:, :k]

    @property
    def lower_right(self) -> np.ndarray:
        k = 2 * self.n
        return self.mat[k:, k:]

    @classmethod
    def from_blocks(cls, A, beta, b, d) -> "Gcs":
        return cls(np.block([[A, beta], [b, d]]))


def _check_n(*items):
    ns = {it.n for it in items}
    if len(ns) != 1:
        raise DimensionError(f"dimension mismatch: n values {sorted(ns)}")


def inner_product(v: GeneralizedVector, w: GeneralizedVector) -> float:
    """<X+xi, Y+eta> = (xi(Y) + eta(X)) / 2."""
    _check_n(v, w)
    return 0.5 * (float(v.form_part @ w.vec_part) + float(w.form_part @ v.vec_part))


def inner_product_matrix(n: int) -> np.ndarray:
    """Gram matrix of `inner_product` in the stacked (X, xi) basis."""
    if n < 1:
        raise DimensionError("n must be >= 1")
    k = 2 * n
    eye = np.eye(k)
    zero = np.zeros((k, k))
    return 0.5 * np.block([[zero, eye], [eye, zero]])


def signature(mat: np.ndarray, tol: float = 1e-12) -> tuple[int, int]:
    """(number of positive, number of negative) eigenvalues of a symmetric matrix."""
    ev = np.linalg.eigvalsh(mat)
    scale = max(np.abs(ev).max(), 1.0)
    return int((ev > tol * scale).sum()), int((ev < -tol * scale).sum())


def b_field_matrix(b: TwoForm) -> np.ndarray:
    """exp([[0, 0], [B, 0]]) = [[1, 0], [B, 1]]."""
    k = b.mat.shape[0]
    eye = np.eye(k)
    return np.block([[eye, np.zeros((k, k))], [b.mat, eye]])


def build_symplectic_gcs(omega: SymplecticForm) -> Gcs:
    k = omega.mat.shape[0]
    zero = np.zeros((k, k))
    return Gcs.from_blocks(zero, -omega.inverse(), omega.mat, zero)


def build_complex_gcs(j: ComplexStructure) -> Gcs:
    k = j.mat.shape[0]
    zero = np.zeros((k, k))
    return Gcs.from_blocks(-j.mat, zero, zero, j.mat.T)


def b_transform_gcs(g: Gcs, b: TwoForm) -> Gcs:
    """Conjugate g by the B-field: e^{-B} g e^{B}."""
    if 2 * g.n != b.mat.shape[0]:
        raise DimensionError(f"GCS has n={g.n} but two-form has n={b.n}")
    return Gcs(b_field_matrix(-b) @ g.mat @ b_field_matrix(b))


def b_transform_symplectic_blocks(omega: SymplecticForm, b: TwoForm) -> Gcs:
    """Closed-form B-transform of the symplectic-type structure built on omega."""
    _check_n(omega, b)
    pi = omega.inverse()
    B = b.mat
    return Gcs.from_blocks(-pi @ B, -pi, omega.mat + B @ pi @ B, B @ pi)


def b_transform_complex_blocks(j: ComplexStructure, b: TwoForm) -> Gcs:
    """Closed-form B-transform of the complex-type structure built on J."""
    _check_n(j, b)
    J = j.mat
    B = b.mat
    return Gcs.from_blocks(-J, np.zeros_like(J), B @ J + J.T @ B, J.T)


def interior_product(x_vec, b: TwoForm) -> np.ndarray:
    """Covector with components B_ij X^j."""
    x = np.asarray(x_vec, dtype=float).ravel()
    if x.size != b.mat.shape[0]:
        raise DimensionError(f"vector has {x.size} components, two-form acts on {b.mat.shape[0]}")
    return b.mat @ x


def b_transform_vector(v: GeneralizedVector, b: TwoForm) -> GeneralizedVector:
    """X + xi -> X + xi + i_X B."""
    _check_n(v, b)
    return GeneralizedVector(v.vec_part, v.form_part + interior_product(v.vec_part, b))


@dataclass
class Check:
    name: str
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual <= self.tol)


@dataclass
class GcsReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    @property
    def max_residual(self) -> float:
        return max(c.residual for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def verify_gcs(g: Gcs, tol: float = GCS_TOL) -> GcsReport:
    """Residuals for the square, duality, block-structure and isometry conditions.

    The duality condition J* = -J is tested as antisymmetry of G @ J, where G
    is the Gram matrix of the pairing.  Failures are report content.
    """
    J = g.mat
    G = inner_product_matrix(g.n)
    eye = np.eye(J.shape[0])
    GJ = G @ J
    square = np.abs(J @ J + eye).max()
    duality = np.abs(GJ + GJ.T).max()
    block = max(
        np.abs(g.beta + g.beta.T).max(),
        np.abs(g.b + g.b.T).max(),
        np.abs(g.lower_right + g.A.T).max(),
    )
    isometry = np.abs(J.T @ G @ J - G).max()
    return GcsReport([
        Check("square", float(square), tol),
        Check("duality", float(duality), tol),
        Check("block_structure", float(block), tol),
        Check("isometry", float(isometry), tol),
    ])


def gcs_type(g: Gcs, rtol: float = RANK_TOL) -> int:
    """Type k = n - rank(beta)/2.

    Raises AmbiguousRankError if the numerical rank of beta comes out odd.
    """
    sv = np.linalg.svd(g.beta, compute_uv=False)
    if sv[0] == 0.0:
        return g.n
    keep = sv > rtol * sv[0]
    rank = int(keep.sum())
    if rank % 2:
        gap = sv[rank - 1] / sv[rank] if rank < sv.size and sv[rank] > 0 else np.inf
        raise AmbiguousRankError(
            f"odd numerical rank {rank} of the beta block; singular values {sv}, "
            f"gap at cut {gap:.3g}"
        )
    return g.n - rank // 2


def _well_conditioned(rng: np.random.Generator, k: int, spread: float = 0.3) -> np.ndarray:
    return np.eye(k) + spread * rng.standard_normal((k, k)) / np.sqrt(k)


def random_symplectic(rng: np.random.Generator, n: int) -> SymplecticForm:
    """S^T omega_0 S for a random near-identity S."""
    s = _well_conditioned(rng, 2 * n)
    m = s.T @ SymplecticForm.standard(n).mat @ s
    return SymplecticForm(0.5 * (m - m.T))


def random_complex(rng: np.random.Generator, n: int) -> ComplexStructure:
    """S J_0 S^{-1} for a random near-identity S."""
    s = _well_conditioned(rng, 2 * n)
    return ComplexStructure(s @ ComplexStructure.standard(n).mat @ np.linalg.inv(s))


def random_two_form(rng: np.random.Generator, n: int, scale: float = 1.0) -> TwoForm:
    return TwoForm.antisymmetrize(scale * rng.standard_normal((2 * n, 2 * n)))
