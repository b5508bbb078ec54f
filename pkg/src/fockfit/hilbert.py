"""
Small dense complex linear algebra: vectors, operators, tensor products,
orthogonal projectors and the Born rule.

Model dimensions stay tiny (a 3-dim sector 1 gives a 12-dim Fock space), so
everything is a dense numpy array. Values are immutable once built.

Kronecker convention: ``tensor_product(u, v)`` is ``np.kron(u, v)``, i.e. the
index of the first factor varies slowest. For 2-dim factors the basis order
is ``(e1⊗e1, e1⊗e2, e2⊗e1, e2⊗e2)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .tolerances import STRUCTURE_TOL


class DimensionMismatchError(ValueError):
    """Raised when two objects live in spaces of different dimension."""


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class ComplexVector:
    """A finite-dimensional complex state vector.

    Parameters
    ----------
    components : array_like
        Amplitudes. Copied and stored read-only as ``complex128``.
    unit : bool
        If true, the norm is checked to be 1 within ``STRUCTURE_TOL``.
    """

    components: np.ndarray
    unit: bool = False

    def __post_init__(self):
        arr = np.array(self.components, dtype=np.complex128)
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("a vector needs a 1-d array with at least one component")
        if self.unit:
            norm_sq = float(np.vdot(arr, arr).real)
            if abs(norm_sq - 1.0) > STRUCTURE_TOL:
                raise ValueError(f"vector flagged unit has squared norm {norm_sq!r}")
        object.__setattr__(self, "components", _frozen(arr))

    @classmethod
    def basis(cls, dim: int, index: int) -> "ComplexVector":
        """Standard basis vector ``e_{index}`` (0-based) of C^dim."""
        arr = np.zeros(dim, dtype=np.complex128)
        arr[index] = 1.0
        return cls(arr, unit=True)

    @property
    def dim(self) -> int:
        return self.components.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.components))

    def normalized(self) -> "ComplexVector":
        norm = self.norm()
        if norm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return ComplexVector(self.components / norm, unit=True)

    def __add__(self, other: "ComplexVector") -> "ComplexVector":
        _check_dims(self.dim, other.dim)
        return ComplexVector(self.components + other.components)

    def __sub__(self, other: "ComplexVector") -> "ComplexVector":
        _check_dims(self.dim, other.dim)
        return ComplexVector(self.components - other.components)

    def __mul__(self, scalar: complex) -> "ComplexVector":
        return ComplexVector(self.components * scalar)

    __rmul__ = __mul__

    def __repr__(self):
        return f"ComplexVector({np.array2string(self.components, precision=6)}, unit={self.unit})"


@dataclass(frozen=True, eq=False)
class LinearOperator:
    """A dense square complex matrix.

    If ``projector`` is set, the matrix must satisfy ``P @ P == P`` and
    ``P == P^dagger`` entrywise within ``STRUCTURE_TOL``.
    """

    matrix: np.ndarray
    projector: bool = False

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=np.complex128)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] < 1:
            raise ValueError(f"operator must be a non-empty square matrix, got shape {mat.shape}")
        if self.projector and not is_projector(mat):
            raise ValueError("operator flagged projector is not Hermitian and idempotent")
        object.__setattr__(self, "matrix", _frozen(mat))

    @classmethod
    def identity(cls, dim: int) -> "LinearOperator":
        return cls(np.eye(dim), projector=True)

    @classmethod
    def projector_onto(cls, vectors: Sequence[ComplexVector]) -> "LinearOperator":
        """Orthogonal projector onto the span of ``vectors``."""
        if not vectors:
            raise ValueError("need at least one vector")
        cols = np.column_stack([v.components for v in vectors])
        q, r = np.linalg.qr(cols)
        rank = int(np.sum(np.abs(np.diag(r)) > 1e-12))
        q = q[:, np.abs(np.diag(r)) > 1e-12]
        if rank == 0:
            raise ValueError("vectors span the zero subspace")
        return cls(q @ q.conj().T, projector=True)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def adjoint(self) -> "LinearOperator":
        return LinearOperator(self.matrix.conj().T, projector=self.projector)

    def complement(self) -> "LinearOperator":
        """``1 - P``; stays a projector when ``P`` is one."""
        return LinearOperator(np.eye(self.dim) - self.matrix, projector=self.projector)

    def apply(self, vec: ComplexVector) -> ComplexVector:
        _check_dims(self.dim, vec.dim)
        return ComplexVector(self.matrix @ vec.components)

    def __matmul__(self, other):
        if isinstance(other, ComplexVector):
            return self.apply(other)
        _check_dims(self.dim, other.dim)
        return LinearOperator(self.matrix @ other.matrix)

    def __add__(self, other: "LinearOperator") -> "LinearOperator":
        _check_dims(self.dim, other.dim)
        return LinearOperator(self.matrix + other.matrix)

    def __sub__(self, other: "LinearOperator") -> "LinearOperator":
        _check_dims(self.dim, other.dim)
        return LinearOperator(self.matrix - other.matrix)

    def __mul__(self, scalar: complex) -> "LinearOperator":
        return LinearOperator(self.matrix * scalar)

    __rmul__ = __mul__

    def rank(self, tol: float = 1e-9) -> int:
        return int(np.sum(np.abs(np.linalg.eigvals(self.matrix)) > tol))


Tensorable = Union[ComplexVector, LinearOperator]


def _check_dims(a: int, b: int) -> None:
    if a != b:
        raise DimensionMismatchError(f"dimension mismatch: {a} != {b}")


def is_projector(matrix: np.ndarray, tol: float = STRUCTURE_TOL) -> bool:
    mat = np.asarray(matrix)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        return False
    hermitian = np.max(np.abs(mat - mat.conj().T)) <= tol
    idempotent = np.max(np.abs(mat @ mat - mat)) <= tol
    return bool(hermitian and idempotent)


def inner_product(u: ComplexVector, v: ComplexVector) -> complex:
    """``<u|v>``, conjugate-linear in ``u``."""
    _check_dims(u.dim, v.dim)
    return complex(np.vdot(u.components, v.components))


def tensor_product(u: Tensorable, v: Tensorable) -> Tensorable:
    """Kronecker product ``u ⊗ v`` with the first factor's index slowest.

    Both arguments must be of the same kind. Unit / projector flags carry
    over since they are preserved by the product.
    """
    if isinstance(u, ComplexVector) and isinstance(v, ComplexVector):
        return ComplexVector(np.kron(u.components, v.components), unit=u.unit and v.unit)
    if isinstance(u, LinearOperator) and isinstance(v, LinearOperator):
        return LinearOperator(np.kron(u.matrix, v.matrix), projector=u.projector and v.projector)
    raise TypeError(
        f"tensor_product needs two vectors or two operators, got {type(u).__name__} "
        f"and {type(v).__name__}"
    )


def direct_sum(u: Tensorable, v: Tensorable) -> Tensorable:
    """``u ⊕ v``: concatenated vector or block-diagonal operator."""
    if isinstance(u, ComplexVector) and isinstance(v, ComplexVector):
        return ComplexVector(np.concatenate([u.components, v.components]))
    if isinstance(u, LinearOperator) and isinstance(v, LinearOperator):
        out = np.zeros((u.dim + v.dim, u.dim + v.dim), dtype=np.complex128)
        out[: u.dim, : u.dim] = u.matrix
        out[u.dim :, u.dim :] = v.matrix
        return LinearOperator(out, projector=u.projector and v.projector)
    raise TypeError("direct_sum needs two vectors or two operators")


def expectation(state: ComplexVector, op: LinearOperator) -> complex:
    """``<state|op|state>`` with no structural checks."""
    _check_dims(state.dim, op.dim)
    return complex(np.vdot(state.components, op.matrix @ state.components))


def matrix_element(u: ComplexVector, op: LinearOperator, v: ComplexVector) -> complex:
    """``<u|op|v>``."""
    _check_dims(u.dim, op.dim)
    _check_dims(op.dim, v.dim)
    return complex(np.vdot(u.components, op.matrix @ v.components))


def born_weight(state: ComplexVector, proj: LinearOperator) -> float:
    """Born-rule probability ``<state|proj|state>``.

    Raises
    ------
    ValueError
        If ``state`` is not unit-norm or ``proj`` is not an orthogonal
        projector (both checked at ``STRUCTURE_TOL``), or if the result has
        a non-negligible imaginary part.
    """
    _check_dims(state.dim, proj.dim)
    norm_sq = float(np.vdot(state.components, state.components).real)
    if abs(norm_sq - 1.0) > STRUCTURE_TOL:
        raise ValueError(f"state is not unit: squared norm {norm_sq!r}")
    if not (proj.projector or is_projector(proj.matrix)):
        raise ValueError("operator is not an orthogonal projector")
    value = expectation(state, proj)
    if abs(value.imag) > STRUCTURE_TOL:
        raise ValueError(f"Born weight has imaginary residue {value.imag!r}")
    return min(1.0, max(0.0, value.real))
