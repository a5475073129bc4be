"""Uniform 1D grid, discrete differential operators and norms.

All fields live on the nodes of a uniform grid over an open interval
(a, b).  Boundary closures are chosen to preserve the discrete
summation-by-parts cancellations the diagnostics rely on:

* ``neumann_zero``   -- ghost reflection, zero boundary derivative;
* ``dirichlet_zero`` -- value pinned to 0, antisymmetric ghost for dxx;
* ``hinged``         -- value and second derivative 0, antisymmetric ghost;
* ``free``           -- no constraint (derived/diagnostic fields), one-sided
  second-order boundary stencils.

All operations are pure functions of immutable inputs and are safe to call
concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractError, StructuralError

BC_DIRICHLET = "dirichlet_zero"
BC_NEUMANN = "neumann_zero"
BC_HINGED = "hinged"
BC_FREE = "free"

_BC_KINDS = (BC_DIRICHLET, BC_NEUMANN, BC_HINGED, BC_FREE)

#: boundary-value-zero kinds (value pinned to exactly 0 at both ends)
_ZERO_VALUE_BCS = (BC_DIRICHLET, BC_HINGED)


@dataclass(frozen=True)
class Grid:
    """Uniform mesh with ``n_cells`` cells over the open interval (a, b)."""

    a: float
    b: float
    n_cells: int

    def __post_init__(self):
        if not self.b > self.a:
            raise ContractError(f"grid requires b > a, got a={self.a}, b={self.b}")
        if int(self.n_cells) != self.n_cells or self.n_cells < 2:
            raise ContractError(f"n_cells must be an integer >= 2, got {self.n_cells}")

    @property
    def h(self) -> float:
        return (self.b - self.a) / self.n_cells

    @property
    def n_nodes(self) -> int:
        return self.n_cells + 1

    @property
    def length(self) -> float:
        return self.b - self.a

    @property
    def nodes(self) -> np.ndarray:
        x = self.a + self.h * np.arange(self.n_nodes)
        x[-1] = self.b
        x.flags.writeable = False
        return x

    def quad_weights(self) -> np.ndarray:
        """Trapezoid quadrature weights (h/2, h, ..., h, h/2)."""
        w = np.full(self.n_nodes, self.h)
        w[0] = w[-1] = 0.5 * self.h
        w.flags.writeable = False
        return w


@dataclass(frozen=True)
class Field:
    """Nodal values plus the boundary-condition kind they respect."""

    values: np.ndarray
    bc_kind: str

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1:
            raise StructuralError(f"field values must be 1D, got shape {vals.shape}")
        if self.bc_kind not in _BC_KINDS:
            raise ContractError(f"unknown bc_kind {self.bc_kind!r}")
        if self.bc_kind in _ZERO_VALUE_BCS and (vals[0] != 0.0 or vals[-1] != 0.0):
            raise ContractError(
                f"{self.bc_kind} field must have exactly zero boundary values, "
                f"got ({vals[0]!r}, {vals[-1]!r})"
            )
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @classmethod
    def clamped(cls, values, bc_kind: str) -> "Field":
        """Build a field, pinning boundary entries to exactly 0 where the
        bc kind requires it (used when sampling analytic profiles whose
        boundary values are only zero to round-off)."""
        vals = np.array(values, dtype=float)
        if bc_kind in _ZERO_VALUE_BCS:
            vals[0] = 0.0
            vals[-1] = 0.0
        return cls(vals, bc_kind)

    def __len__(self):
        return self.values.shape[0]


@dataclass(frozen=True)
class FieldNorms:
    l1: float
    l2: float
    linf: float
    h1_semi: float


@dataclass(frozen=True)
class GNConstants:
    """Certified (non-sharp) interval embedding constants.

    ``c1``: sup-norm bound  |psi|_inf <= c1 |psi_x|^(1/2) |psi|^(1/2) + c1 |psi|_2.
    ``c2``: squared bound   |psi|_inf^2 <= c2 |psi_x|_2^2 + c2 |psi|_1^2.
    """

    c1: float
    c2: float


def _check(field: Field, grid: Grid, min_cells: int = 2) -> np.ndarray:
    vals = field.values
    if vals.shape[0] != grid.n_nodes:
        raise StructuralError(
            f"field has {vals.shape[0]} nodes but grid has {grid.n_nodes}"
        )
    if grid.n_cells < min_cells:
        raise StructuralError(
            f"operation needs n_cells >= {min_cells}, grid has {grid.n_cells}"
        )
    return vals


def dx(field: Field, grid: Grid) -> Field:
    """First derivative: central interior, bc-aware boundary closure."""
    f = _check(field, grid)
    h = grid.h
    out = np.empty_like(f)
    out[1:-1] = (f[2:] - f[:-2]) / (2.0 * h)
    if field.bc_kind == BC_NEUMANN:
        # zero slope is the boundary condition itself
        out[0] = 0.0
        out[-1] = 0.0
    elif field.bc_kind == BC_HINGED:
        # antisymmetric ghost f[-1] = -f[1] about the zero boundary value;
        # keeps the discrete product rule with neumann_zero partners exact
        out[0] = (f[1] - (-f[1])) / (2.0 * h)
        out[-1] = ((-f[-2]) - f[-2]) / (2.0 * h)
    else:
        # one-sided second-order, interior biased
        out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h)
        out[-1] = (3.0 * f[-1] - 4.0 * f[-2] + f[-3]) / (2.0 * h)
    bc = BC_DIRICHLET if field.bc_kind == BC_NEUMANN else BC_FREE
    return Field(out, bc)


def dxx(field: Field, grid: Grid) -> Field:
    """Second derivative: 3-point interior, ghost-node boundary closure."""
    f = _check(field, grid)
    h2 = grid.h * grid.h
    out = np.empty_like(f)
    out[1:-1] = (f[:-2] - 2.0 * f[1:-1] + f[2:]) / h2
    if field.bc_kind == BC_NEUMANN:
        # reflected ghost f[-1] = f[1]
        out[0] = 2.0 * (f[1] - f[0]) / h2
        out[-1] = 2.0 * (f[-2] - f[-1]) / h2
    elif field.bc_kind in _ZERO_VALUE_BCS:
        # antisymmetric ghost through the exact zero boundary value
        out[0] = -2.0 * f[0] / h2
        out[-1] = -2.0 * f[-1] / h2
    else:
        _check(field, grid, min_cells=3)
        out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2
        out[-1] = (2.0 * f[-1] - 5.0 * f[-2] + 4.0 * f[-3] - f[-4]) / h2
    bc = BC_DIRICHLET if field.bc_kind in _ZERO_VALUE_BCS else BC_FREE
    return Field.clamped(out, bc) if bc == BC_DIRICHLET else Field(out, bc)


def dxxxx(field: Field, grid: Grid) -> Field:
    """Fourth derivative for hinged fields (value and curvature zero).

    5-point interior stencil; antisymmetric ghosts (v[-1] = -v[1],
    v[-2] = -v[2]) realize the hinged closure.
    """
    if field.bc_kind != BC_HINGED:
        raise ContractError(
            f"dxxxx requires a hinged field, got bc_kind={field.bc_kind!r}"
        )
    f = _check(field, grid, min_cells=4)
    h4 = grid.h ** 4
    out = np.empty_like(f)
    out[2:-2] = (f[:-4] - 4.0 * f[1:-3] + 6.0 * f[2:-2] - 4.0 * f[3:-1] + f[4:]) / h4
    out[1] = ((-f[1]) - 4.0 * f[0] + 6.0 * f[1] - 4.0 * f[2] + f[3]) / h4
    out[-2] = (f[-4] - 4.0 * f[-3] + 6.0 * f[-2] - 4.0 * f[-1] + (-f[-2])) / h4
    out[0] = ((-f[2]) - 4.0 * (-f[1]) + 6.0 * f[0] - 4.0 * f[1] + f[2]) / h4
    out[-1] = (f[-3] - 4.0 * f[-2] + 6.0 * f[-1] - 4.0 * (-f[-2]) + (-f[-3])) / h4
    return Field(out, BC_FREE)


def integrate(values: np.ndarray, grid: Grid) -> float:
    """Trapezoid-rule integral of nodal values over (a, b)."""
    if values.shape[0] != grid.n_nodes:
        raise StructuralError(
            f"values have {values.shape[0]} nodes but grid has {grid.n_nodes}"
        )
    return float(grid.quad_weights() @ values)


def l2_norm_sq(values: np.ndarray, grid: Grid) -> float:
    return integrate(np.asarray(values) ** 2, grid)


def norms(field: Field, grid: Grid) -> FieldNorms:
    """Trapezoid L1/L2, nodal max, and L2 norm of the first derivative."""
    f = _check(field, grid)
    l1 = integrate(np.abs(f), grid)
    l2 = float(np.sqrt(l2_norm_sq(f, grid)))
    linf = float(np.max(np.abs(f)))
    h1 = float(np.sqrt(l2_norm_sq(dx(field, grid).values, grid)))
    return FieldNorms(l1=l1, l2=l2, linf=linf, h1_semi=h1)


def gn_constants(grid: Grid) -> GNConstants:
    """Certified interval embedding constants for the grid's interval.

    Derivation (valid for every psi in W^{1,2}(a,b), L = b - a):

    * psi(x)^2 <= psi(y)^2 + 2 |psi|_2 |psi_x|_2 for any y; averaging in y
      gives |psi|_inf^2 <= L^{-1} |psi|_2^2 + 2 |psi|_2 |psi_x|_2, hence
      c1 = max(sqrt(2), L^{-1/2}).
    * |psi(x)| <= |psi|_1 / L + int |psi_x| and Cauchy-Schwarz give
      |psi|_inf^2 <= 2 L^{-2} |psi|_1^2 + 2 L |psi_x|_2^2, hence
      c2 = max(2 L, 2 / L^2).

    Upper bounds only; sharpness is not needed by any downstream formula.
    """
    length = grid.length
    if not length > 0.0:
        raise ContractError("degenerate interval")
    c1 = max(np.sqrt(2.0), 1.0 / np.sqrt(length))
    c2 = max(2.0 * length, 2.0 / length ** 2)
    return GNConstants(c1=float(c1), c2=float(c2))
